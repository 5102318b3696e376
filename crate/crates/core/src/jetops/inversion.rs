//! Reconstruction of `σ` from an exact density `h = Σ d_λ σ^λ`.
//!
//! * One base dimension: peel off the highest jet variable. An exact density
//!   is affine in its top-order jets; the coefficient of `y^i_k` is
//!   `∂σ/∂y^i_{k-1}`, so integrating it in `y^i_{k-1}` and subtracting the
//!   total derivative removes `y^i_k`. Once no jets remain the rest is a
//!   function of `t` alone.
//! * Several base dimensions: split `h` into parts homogeneous in the fibre
//!   jets. For a part of degree `d ≥ 1`, `d·h = Σ y_J ∂h/∂y_J`, and
//!   integrating each term by parts down to `y·(-d)_J ∂h/∂y_J` leaves the
//!   Euler–Lagrange expression (zero) plus explicit boundary currents. The
//!   jet-free part is integrated along a coordinate ray.
//!
//! Every result is checked with `d_H σ = h` before it is returned.

use std::collections::BTreeMap;

use super::{antiderivative, euler_lagrange_density, total_derivative, total_divergence};
use crate::error::{Error, Result};
use crate::multiindex::MultiIndex;
use crate::symexpr::{BundleSpec, Expr, JetVar, Poly, Rational, Var};

/// Components `σ^λ` with `Σ d_λ σ^λ = h`.
pub fn invert_total_divergence(h: &Expr, spec: &BundleSpec) -> Result<Vec<Expr>> {
    if !euler_lagrange_density(h, spec).is_zero() {
        return Err(Error::NotExact(
            "Euler–Lagrange expression of the density is nonzero".into(),
        ));
    }
    let sigma = if spec.dim() == 1 {
        vec![invert_one_dimensional(h, spec)?]
    } else {
        invert_homotopy(h, spec)?
    };
    if total_divergence(&sigma, spec) != *h {
        return Err(Error::InternalInconsistency(
            "reconstructed current does not reproduce the density".into(),
        ));
    }
    Ok(sigma)
}

fn invert_one_dimensional(h: &Expr, spec: &BundleSpec) -> Result<Expr> {
    let mut rest = h.clone();
    let mut sigma = Expr::zero();
    // Each pass removes one top-order jet; the bound only trips on a bug.
    let budget = 8 * (spec.jet_dependencies(h).len() + 2) * (spec.jet_order(h) + 2);
    for _ in 0..budget {
        if rest.is_zero() {
            return Ok(sigma);
        }
        let deps = spec.jet_dependencies(&rest);
        let top = deps.iter().copied().max_by_key(|j| (j.order(), j.field, j.index));
        let step = match top {
            None => antiderivative(&rest, Var::Base(0), spec)?,
            Some(j) if j.order() == 0 => {
                return Err(Error::NotExact(
                    "density depends on fibre coordinates without their derivatives".into(),
                ))
            }
            Some(top) => {
                let coeff = rest.partial(Var::Jet(top), spec);
                if spec.jet_dependencies(&coeff).iter().any(|j| j.order() >= top.order()) {
                    return Err(Error::NotExact(format!(
                        "density is not affine in {}",
                        spec.jet_name(top)
                    )));
                }
                let lower = JetVar::new(top.field(), top.index.minus(0).unwrap());
                antiderivative(&coeff, Var::Jet(lower), spec)?
            }
        };
        rest = rest - total_derivative(&step, 0, spec);
        sigma = sigma + step;
    }
    Err(Error::InternalInconsistency(
        "integration by parts did not terminate".into(),
    ))
}

fn invert_homotopy(h: &Expr, spec: &BundleSpec) -> Result<Vec<Expr>> {
    let den = h.denominator();
    let jet_free = |p: &Poly| p.vars().iter().all(|v| !matches!(v, Var::Jet(_)));
    if !jet_free(den) {
        return Err(Error::UnsupportedFragment(
            "density with fibre-dependent denominator in more than one base dimension".into(),
        ));
    }
    for v in h.vars() {
        if let Var::Atom(a) = v {
            if spec.atom_jet_deps(a as usize).next().is_some() {
                return Err(Error::UnsupportedFragment(format!(
                    "atom {} depends on fibre coordinates",
                    spec.atoms()[a as usize].name
                )));
            }
        }
    }
    let den_expr = Expr::from_parts(Poly::one(), den.clone())?;

    // Group numerator terms by total degree in the jet variables.
    let mut by_degree: BTreeMap<u32, Poly> = BTreeMap::new();
    for (m, c) in h.numerator().terms() {
        let deg: u32 = m
            .factors()
            .iter()
            .filter(|(v, _)| matches!(v, Var::Jet(_)))
            .map(|&(_, e)| e)
            .sum();
        let entry = by_degree.entry(deg).or_default();
        *entry = entry.add(&Poly::term(m.clone(), c.clone()));
    }

    let n = spec.dim();
    let mut sigma = vec![Expr::zero(); n];
    for (deg, part) in by_degree {
        let part = Expr::from_poly(part) * &den_expr;
        if deg == 0 {
            integrate_along_ray(&part, &mut sigma, spec)?;
            continue;
        }
        let weight = Rational::new(1.into(), (deg as i64).into());
        for j in spec.jet_dependencies(&part) {
            let q = part.partial(Var::Jet(j), spec);
            if q.is_zero() {
                continue;
            }
            boundary_terms(j, q, &weight, &mut sigma, spec);
        }
    }
    Ok(sigma)
}

/// Adds the boundary currents of `y_J · q = Σ d_λ(...) + y·(-d)_J q`.
fn boundary_terms(j: JetVar, q: Expr, weight: &Rational, sigma: &mut [Expr], spec: &BundleSpec) {
    let mut index = j.index;
    let mut q = q;
    while let Some(&dir) = index.directions().first() {
        let rest: MultiIndex = index.minus(dir).unwrap();
        let y = Expr::jet(j.field(), rest);
        sigma[dir] = &sigma[dir] + (y * &q).scale(weight);
        q = -total_derivative(&q, dir, spec);
        index = rest;
    }
}

fn integrate_along_ray(part: &Expr, sigma: &mut [Expr], spec: &BundleSpec) -> Result<()> {
    let mut last_err = None;
    for (dir, slot) in sigma.iter_mut().enumerate().take(spec.dim()) {
        match antiderivative(part, Var::Base(dir as u8), spec) {
            Ok(p) => {
                *slot = &*slot + p;
                return Ok(());
            }
            Err(e) => last_err = Some(e),
        }
    }
    Err(last_err.unwrap())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symexpr::parse;

    fn mech() -> BundleSpec {
        BundleSpec::simple(&["t"], &["q"]).unwrap()
    }

    #[test]
    fn one_dimensional_examples() {
        let s = mech();
        let h = parse("q_t*q_tt", &s).unwrap();
        assert_eq!(
            invert_total_divergence(&h, &s).unwrap(),
            vec![parse("q_t^2/2", &s).unwrap()]
        );
        let h = parse("q_t", &s).unwrap();
        assert_eq!(invert_total_divergence(&h, &s).unwrap(), vec![parse("q", &s).unwrap()]);
    }

    #[test]
    fn not_exact() {
        let s = mech();
        let h = parse("q_t^2", &s).unwrap();
        assert!(matches!(invert_total_divergence(&h, &s), Err(Error::NotExact(_))));
        let h = parse("q", &s).unwrap();
        assert!(matches!(invert_total_divergence(&h, &s), Err(Error::NotExact(_))));
    }

    #[test]
    fn pure_time_dependence() {
        let s = mech();
        let h = parse("3*t^2 + 1", &s).unwrap();
        let sigma = invert_total_divergence(&h, &s).unwrap();
        assert_eq!(sigma, vec![parse("t^3 + t", &s).unwrap()]);
    }

    #[test]
    fn rational_one_dimensional() {
        let s = mech();
        let target = parse("q/(1 + q_t^2) + t*q_t/(q + t)^2", &s).unwrap();
        let h = total_derivative(&target, 0, &s);
        let sigma = invert_total_divergence(&h, &s).unwrap();
        assert_eq!(total_derivative(&sigma[0], 0, &s), h);
    }

    #[test]
    fn two_dimensional_polynomial() {
        let s = BundleSpec::simple(&["t", "x"], &["u", "v"]).unwrap();
        let st = parse("u^3 + x*u_x*v", &s).unwrap();
        let sx = parse("u*v_t + t^2*x", &s).unwrap();
        let h = total_derivative(&st, 0, &s) + total_derivative(&sx, 1, &s);
        let sigma = invert_total_divergence(&h, &s).unwrap();
        assert_eq!(total_divergence(&sigma, &s), h);
    }

    #[test]
    fn two_dimensional_rational_denominator_rejected() {
        let s = BundleSpec::simple(&["t", "x"], &["u"]).unwrap();
        let st = parse("1/(1 + u^2)", &s).unwrap();
        let h = total_derivative(&st, 0, &s);
        assert!(matches!(
            invert_total_divergence(&h, &s),
            Err(Error::UnsupportedFragment(_))
        ));
    }
}
