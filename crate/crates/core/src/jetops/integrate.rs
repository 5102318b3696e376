//! Rational antiderivatives in a single variable.
//!
//! The integrand is viewed as a univariate rational function in `v` over
//! the field of expressions free of `v`. The polynomial part is integrated
//! termwise; the proper part goes through Hermite reduction. A nonzero
//! remainder after reduction means the antiderivative needs logarithms,
//! which the coefficient ring cannot express.

use crate::error::{Error, Result};
use crate::symexpr::{BundleSpec, Expr, Poly, Rational, Var};

/// Univariate polynomial in `v`; entry `k` multiplies `v^k`, no trailing zeros.
#[derive(Clone, Debug, PartialEq)]
struct UPoly(Vec<Expr>);

impl UPoly {
    fn zero() -> Self {
        UPoly(Vec::new())
    }

    fn constant(c: Expr) -> Self {
        UPoly(vec![c]).trim()
    }

    fn from_poly(p: &Poly, v: Var) -> Self {
        UPoly(p.coeffs_in(v).into_iter().map(Expr::from_poly).collect()).trim()
    }

    fn trim(mut self) -> Self {
        while self.0.last().is_some_and(Expr::is_zero) {
            self.0.pop();
        }
        self
    }

    fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    fn lead(&self) -> &Expr {
        self.0.last().expect("leading coefficient of zero polynomial")
    }

    fn add(&self, other: &UPoly) -> UPoly {
        let n = self.0.len().max(other.0.len());
        let zero = Expr::zero();
        UPoly(
            (0..n)
                .map(|k| self.0.get(k).unwrap_or(&zero) + other.0.get(k).unwrap_or(&zero))
                .collect(),
        )
        .trim()
    }

    fn neg(&self) -> UPoly {
        UPoly(self.0.iter().map(|c| -c).collect())
    }

    fn sub(&self, other: &UPoly) -> UPoly {
        self.add(&other.neg())
    }

    fn scale(&self, c: &Expr) -> UPoly {
        UPoly(self.0.iter().map(|a| a * c).collect()).trim()
    }

    fn mul(&self, other: &UPoly) -> UPoly {
        if self.is_zero() || other.is_zero() {
            return UPoly::zero();
        }
        let mut out = vec![Expr::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] = &out[i + j] + a * b;
            }
        }
        UPoly(out).trim()
    }

    fn pow(&self, e: usize) -> UPoly {
        (0..e).fold(UPoly::constant(Expr::one()), |acc, _| acc.mul(self))
    }

    fn derivative(&self) -> UPoly {
        UPoly(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c.scale(&Rational::from_integer((k as i64).into())))
                .collect(),
        )
        .trim()
    }

    fn divrem(&self, d: &UPoly) -> (UPoly, UPoly) {
        assert!(!d.is_zero());
        let inv = d.lead().recip().expect("nonzero leading coefficient");
        let mut r = self.clone();
        let mut q = vec![Expr::zero(); self.0.len().saturating_sub(d.0.len()) + 1];
        while !r.is_zero() && r.degree() >= d.degree() {
            let shift = r.degree() - d.degree();
            let c = r.lead() * &inv;
            let mut sub = vec![Expr::zero(); shift];
            sub.extend(d.0.iter().map(|a| a * &c));
            q[shift] = &q[shift] + &c;
            r = r.sub(&UPoly(sub));
        }
        (UPoly(q).trim(), r)
    }

    fn exact_div(&self, d: &UPoly) -> UPoly {
        let (q, r) = self.divrem(d);
        debug_assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    fn monic(&self) -> UPoly {
        if self.is_zero() {
            return self.clone();
        }
        let inv = self.lead().recip().unwrap();
        self.scale(&inv)
    }

    /// `(s, t, g)` with `s·a + t·b = g = gcd(a, b)`, `g` monic.
    fn extended_gcd(a: &UPoly, b: &UPoly) -> (UPoly, UPoly, UPoly) {
        let (mut r0, mut r1) = (a.clone(), b.clone());
        let (mut s0, mut s1) = (UPoly::constant(Expr::one()), UPoly::zero());
        let (mut t0, mut t1) = (UPoly::zero(), UPoly::constant(Expr::one()));
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1);
            let s2 = s0.sub(&q.mul(&s1));
            let t2 = t0.sub(&q.mul(&t1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s2);
            t0 = std::mem::replace(&mut t1, t2);
        }
        if r0.is_zero() {
            return (s0, t0, r0);
        }
        let inv = r0.lead().recip().unwrap();
        (s0.scale(&inv), t0.scale(&inv), r0.scale(&inv))
    }

    fn gcd(a: &UPoly, b: &UPoly) -> UPoly {
        Self::extended_gcd(a, b).2
    }

    /// `(s, t)` with `s·a + t·b = c` and `deg s < deg b`; `gcd(a, b)` must divide `c`.
    fn solve_diophantine(a: &UPoly, b: &UPoly, c: &UPoly) -> (UPoly, UPoly) {
        let (s, _, g) = Self::extended_gcd(a, b);
        let (q, r) = c.divrem(&g);
        debug_assert!(r.is_zero(), "gcd does not divide the right-hand side");
        let s = q.mul(&s);
        let (_, s) = s.divrem(b);
        let t = c.sub(&s.mul(a)).exact_div(b);
        (s, t)
    }

    /// Yun's square-free decomposition of a monic polynomial: `p = Π f_i^i`,
    /// returned as `[f_1, f_2, ...]`.
    fn square_free(p: &UPoly) -> Vec<UPoly> {
        let dp = p.derivative();
        let g = Self::gcd(p, &dp);
        let mut out = Vec::new();
        let mut b = p.exact_div(&g);
        let mut c = dp.exact_div(&g);
        let mut d = c.sub(&b.derivative());
        while b.degree() > 0 {
            let a = Self::gcd(&b, &d);
            b = b.exact_div(&a);
            c = d.exact_div(&a);
            d = c.sub(&b.derivative());
            out.push(a.monic());
        }
        out
    }

    fn to_expr(&self, v: Var) -> Expr {
        let x = Expr::var(v);
        let mut acc = Expr::zero();
        for c in self.0.iter().rev() {
            acc = acc * &x + c;
        }
        acc
    }
}

/// Antiderivative of `e` in `v` (a base coordinate or jet variable) with zero
/// constant of integration in the sense of the algorithm's choice.
///
/// Fails with `UnsupportedFragment` if `e` involves atoms depending on `v`
/// or if the antiderivative is not rational.
pub fn antiderivative(e: &Expr, v: Var, spec: &BundleSpec) -> Result<Expr> {
    for w in e.vars() {
        if let Var::Atom(a) = w {
            if spec.atom_depends_on(a as usize, v) {
                return Err(Error::UnsupportedFragment(format!(
                    "cannot integrate atom {} with respect to {}",
                    spec.atoms()[a as usize].name,
                    spec.var_name(v)
                )));
            }
        }
    }
    if !e.contains_var(v) {
        return Ok(e * Expr::var(v));
    }
    let num = UPoly::from_poly(e.numerator(), v);
    let den = UPoly::from_poly(e.denominator(), v);
    if den.degree() == 0 {
        let inv = den.lead().recip().unwrap();
        return Ok(integrate_polynomial(&num.scale(&inv)).to_expr(v));
    }
    let lead_inv = den.lead().recip().unwrap();
    let num = num.scale(&lead_inv);
    let den = den.monic();
    let (q, r) = num.divrem(&den);
    let poly_part = integrate_polynomial(&q).to_expr(v);
    let (rational_part, remainder) = hermite_reduce(r, den);
    if !remainder.is_zero() {
        return Err(Error::UnsupportedFragment(format!(
            "antiderivative with respect to {} is not a rational function",
            spec.var_name(v)
        )));
    }
    let (g_num, g_den) = rational_part;
    Ok(poly_part + g_num.to_expr(v).div(&g_den.to_expr(v))?)
}

fn integrate_polynomial(p: &UPoly) -> UPoly {
    let mut out = vec![Expr::zero()];
    for (k, c) in p.0.iter().enumerate() {
        out.push(c.scale(&Rational::new(1.into(), ((k + 1) as i64).into())));
    }
    UPoly(out).trim()
}

/// Hermite reduction of a proper fraction `a / d`, `d` monic. Returns the
/// rational part as `(numerator, denominator)` and the numerator of the
/// remaining fraction over the square-free part of `d`.
fn hermite_reduce(a: UPoly, d: UPoly) -> ((UPoly, UPoly), UPoly) {
    let mut g_num = UPoly::zero();
    let mut g_den = UPoly::constant(Expr::one());
    let mut a = a;
    let mut d = d;
    let factors = UPoly::square_free(&d);
    for (idx, v) in factors.iter().enumerate() {
        let i = idx + 1;
        if i < 2 || v.degree() == 0 {
            continue;
        }
        let u = d.exact_div(&v.pow(i));
        let dv = v.derivative();
        for j in (1..i).rev() {
            let rhs = a.scale(&Expr::ratio(-1, j as i64));
            let (b, c) = UPoly::solve_diophantine(&u.mul(&dv), v, &rhs);
            // g += b / v^j
            let vj = v.pow(j);
            g_num = g_num.mul(&vj).add(&b.mul(&g_den));
            g_den = g_den.mul(&vj);
            a = c.scale(&Expr::int(-(j as i64))).sub(&u.mul(&b.derivative()));
        }
        d = u.mul(v);
    }
    ((g_num, g_den), a)
}
