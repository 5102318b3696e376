//! The Poincaré–Cartan form and the splitting `dL = δL - d_H Ξ`.
//!
//! With `c(M)` the number of orderings of a multi-index, the coefficient
//! family is built top-down from the order `r` of the Lagrangian:
//!
//! ```text
//! G(M) = ∂_M 𝓛 / c(M) - Σ_λ d_λ G(λ+M),   1 ≤ |M| ≤ r,  G = 0 beyond r
//! Ξ    = 𝓛 ω + Σ_λ Σ_Λ c(Λ) G(λ+Λ) θ_Λ ∧ ω_λ
//! ```
//!
//! The free gauge functions of the general construction are all zero. For
//! a single base direction `c ≡ 1` and this is the usual higher-order
//! Ostrogradsky momentum ladder.

use std::collections::BTreeMap;

use super::{ContactForm, Generator, Wedge};
use crate::error::{Error, Result};
use crate::jetops::{euler_lagrange, total_derivative, Lagrangian, SourceForm};
use crate::multiindex::MultiIndex;
use crate::symexpr::{BundleSpec, Expr, JetVar, Rational, Var};

#[derive(Clone, Debug, PartialEq)]
pub struct PoincareCartanForm {
    density: Expr,
    /// `F_i^{λΛ}`, the coefficient of `θ^i_Λ ∧ ω_λ`, keyed by `(y^i_Λ, λ)`.
    coefficients: BTreeMap<(JetVar, usize), Expr>,
    contact: ContactForm,
    form: ContactForm,
}

impl PoincareCartanForm {
    pub fn density(&self) -> &Expr {
        &self.density
    }

    pub fn coefficients(&self) -> &BTreeMap<(JetVar, usize), Expr> {
        &self.coefficients
    }

    pub fn coefficient(&self, jet: JetVar, direction: usize) -> Expr {
        self.coefficients.get(&(jet, direction)).cloned().unwrap_or_default()
    }

    /// The `(1, n-1)` part `Ξ - 𝓛ω`.
    pub fn contact_part(&self) -> &ContactForm {
        &self.contact
    }

    /// `Ξ` itself.
    pub fn form(&self) -> &ContactForm {
        &self.form
    }
}

/// `Σ_i E_i θ^i ∧ ω`.
pub fn source_form_to_form(source: &SourceForm, spec: &BundleSpec) -> ContactForm {
    let omega = ContactForm::volume(spec.dim());
    let mut out = ContactForm::zero();
    for (i, e) in source.components.iter().enumerate() {
        let theta = ContactForm::theta(JetVar::new(i, spec.empty_index()));
        out = out.add(&theta.wedge(&omega).scale(e));
    }
    out
}

/// Reads back `Σ_i E_i θ^i ∧ ω`; `None` if the form has any other shape.
pub(crate) fn form_to_source_form(form: &ContactForm, spec: &BundleSpec) -> Option<SourceForm> {
    let mut source = SourceForm::zero(spec.field_count());
    for (w, c) in form.terms() {
        let gens = w.generators();
        if w.contact_degree() != 1 || w.horizontal_degree() != spec.dim() {
            return None;
        }
        match gens[0] {
            Generator::Theta(j) if j.index.is_empty() => source.components[j.field()] = c.clone(),
            _ => return None,
        }
    }
    Some(source)
}

/// `(δL, Ξ_L)` with `δL = ϱ(dL)` cross-checked against the Euler–Lagrange
/// sum and the identity `d(𝓛ω) = δL - d_H(Ξ - 𝓛ω)` checked exactly.
pub fn first_variational_split(lagrangian: &Lagrangian) -> Result<(SourceForm, PoincareCartanForm)> {
    let spec = lagrangian.spec();
    let density = lagrangian.density();
    let n = spec.dim();
    let omega = ContactForm::volume(n);
    let big_l = ContactForm::scalar(density.clone()).wedge(&omega);
    let dl = big_l.d(spec);

    let delta_form = dl.rho(spec);
    let delta = form_to_source_form(&delta_form, spec)
        .ok_or_else(|| Error::InternalInconsistency("projection of dL is not a source form".into()))?;
    if delta != euler_lagrange(lagrangian) {
        return Err(Error::InternalInconsistency(
            "projected dL disagrees with the Euler–Lagrange sum".into(),
        ));
    }

    let coefficients = cartan_coefficients(density, lagrangian.order(), spec);
    let mut contact = ContactForm::zero();
    for ((jet, lambda), f) in &coefficients {
        let term = ContactForm::theta(*jet)
            .wedge(&ContactForm::volume_hook(n, *lambda))
            .scale(f);
        contact = contact.add(&term);
    }
    if dl != delta_form.sub(&contact.d_h(spec)) {
        return Err(Error::InternalInconsistency(
            "first variational splitting does not close".into(),
        ));
    }
    let form = big_l.add(&contact);
    Ok((
        delta,
        PoincareCartanForm {
            density: density.clone(),
            coefficients,
            contact,
            form,
        },
    ))
}

fn cartan_coefficients(density: &Expr, order: usize, spec: &BundleSpec) -> BTreeMap<(JetVar, usize), Expr> {
    let n = spec.dim();
    let mut g: BTreeMap<JetVar, Expr> = BTreeMap::new();
    for field in 0..spec.field_count() {
        for degree in (1..=order).rev() {
            for m in MultiIndex::enumerate(n, degree) {
                let jet = JetVar::new(field, m);
                let c = Rational::from_integer(m.orderings().into());
                let mut value = density.partial(Var::Jet(jet), spec).scale(&c.recip());
                for lambda in 0..n {
                    if let Some(up) = g.get(&jet.raised(lambda)) {
                        value = value - total_derivative(up, lambda, spec);
                    }
                }
                if !value.is_zero() {
                    g.insert(jet, value);
                }
            }
        }
    }
    let mut out = BTreeMap::new();
    for (jet, value) in &g {
        // G(M) feeds every split M = λ + Λ.
        for lambda in 0..n {
            if let Some(rest) = jet.index.minus(lambda) {
                let c = Rational::from_integer(rest.orderings().into());
                out.insert((JetVar::new(jet.field(), rest), lambda), value.scale(&c));
            }
        }
    }
    out
}

impl ContactForm {
    /// Horizontal `(n-1)`-form components `J^λ` of `Σ J^λ ω_λ`.
    pub fn hook_components(&self, spec: &BundleSpec) -> Option<Vec<Expr>> {
        let n = spec.dim();
        let mut out = vec![Expr::zero(); n];
        for (w, c) in self.terms() {
            if w.contact_degree() != 0 || w.horizontal_degree() + 1 != n {
                return None;
            }
            // The missing direction λ; ω_λ = (-1)^λ dx^0…d̂x^λ…
            let present: Vec<usize> = w
                .generators()
                .iter()
                .map(|g| match g {
                    Generator::Dx(d) => *d as usize,
                    Generator::Theta(_) => unreachable!(),
                })
                .collect();
            let lambda = (0..n).find(|d| !present.contains(d))?;
            out[lambda] = if lambda % 2 == 0 { c.clone() } else { -c };
        }
        Some(out)
    }

    /// `Σ J^λ ω_λ`.
    pub fn from_hook_components(components: &[Expr]) -> ContactForm {
        let n = components.len();
        let mut out = ContactForm::zero();
        for (lambda, c) in components.iter().enumerate() {
            out = out.add(&ContactForm::volume_hook(n, lambda).scale(c));
        }
        out
    }

    /// The single coefficient of an `n`-form density `𝓛 ω`.
    pub fn density_coefficient(&self, spec: &BundleSpec) -> Option<Expr> {
        let omega = Wedge::sorted((0..spec.dim()).map(|d| Generator::Dx(d as u8)).collect())?.0;
        if self.terms().any(|(w, _)| *w != omega) {
            return None;
        }
        Some(self.coefficient(&omega))
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::symexpr::parse;

    fn lag(base: &[&str], fields: &[&str], src: &str) -> Lagrangian {
        let s = Arc::new(BundleSpec::simple(base, fields).unwrap());
        let e = parse(src, &s).unwrap();
        Lagrangian::new(s, e)
    }

    #[test]
    fn free_particle() {
        let l = lag(&["t"], &["q"], "q_t^2/2");
        let (_, xi) = first_variational_split(&l).unwrap();
        let s = l.spec();
        let expect = ContactForm::scalar(l.density().clone())
            .wedge(&ContactForm::volume(1))
            .add(&ContactForm::theta(s.jet_var(0, &[])).scale(&parse("q_t", s).unwrap()));
        assert_eq!(*xi.form(), expect);
        assert_eq!(xi.coefficient(s.jet_var(0, &[]), 0), parse("q_t", s).unwrap());
    }

    #[test]
    fn oscillator_source_form() {
        let l = lag(&["t"], &["q"], "q_t^2/2 - q^2/2");
        let (delta, _) = first_variational_split(&l).unwrap();
        assert_eq!(delta.components, vec![parse("-q_tt - q", l.spec()).unwrap()]);
    }

    #[test]
    fn second_order_ladder() {
        let l = lag(&["x"], &["phi"], "phi_xx^2/2");
        let s = l.spec();
        let (_, xi) = first_variational_split(&l).unwrap();
        assert_eq!(xi.coefficient(s.jet_var(0, &[0]), 0), parse("phi_xx", s).unwrap());
        assert_eq!(xi.coefficient(s.jet_var(0, &[]), 0), parse("-phi_xxx", s).unwrap());
        assert_eq!(xi.coefficients().len(), 2);
    }

    #[test]
    fn two_dimensional_second_order_closes() {
        let l = lag(
            &["t", "x"],
            &["phi"],
            "-phi_x*phi_t/2 - phi_x^3 + phi_xx^2/2 + phi_tx*phi*t",
        );
        let (delta, _) = first_variational_split(&l).unwrap();
        assert_eq!(delta, euler_lagrange(&l));
    }

    #[test]
    fn hook_components_round_trip() {
        let s = BundleSpec::simple(&["t", "x", "y"], &["u"]).unwrap();
        let comps: Vec<Expr> = ["u", "t*u_x", "-1"].iter().map(|c| parse(c, &s).unwrap()).collect();
        let f = ContactForm::from_hook_components(&comps);
        assert_eq!(f.hook_components(&s).unwrap(), comps);
    }
}
