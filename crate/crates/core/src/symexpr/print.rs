use std::fmt;

use num_traits::{One, Signed};

use super::{BundleSpec, Expr, Monomial, Poly, Rational};

fn rational(c: &Rational) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

fn monomial(m: &Monomial, spec: &BundleSpec) -> String {
    m.factors()
        .iter()
        .map(|&(v, e)| {
            let name = spec.var_name(v);
            if e == 1 {
                name
            } else {
                format!("{name}^{e}")
            }
        })
        .collect::<Vec<_>>()
        .join("*")
}

/// Terms from the leading one down, e.g. `-q[t,t] - q`.
pub(crate) fn poly_string(p: &Poly, spec: &BundleSpec) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, (m, c)) in p.terms().rev().enumerate() {
        let negative = c.is_negative();
        let a = c.abs();
        match (i, negative) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        if m.is_one() {
            out.push_str(&rational(&a));
        } else if a.is_one() {
            out.push_str(&monomial(m, spec));
        } else {
            out.push_str(&rational(&a));
            out.push('*');
            out.push_str(&monomial(m, spec));
        }
    }
    out
}

impl Expr {
    /// Canonical text; parses back to the same value.
    pub fn to_text(&self, spec: &BundleSpec) -> String {
        let num = poly_string(self.numerator(), spec);
        if self.is_polynomial() {
            return num;
        }
        let num = if self.numerator().len() > 1 {
            format!("({num})")
        } else {
            num
        };
        let den = self.denominator();
        let single_factor = den.len() == 1
            && den
                .leading_term()
                .is_some_and(|(m, c)| c.is_one() && m.factors().len() == 1);
        let den = poly_string(den, spec);
        if single_factor {
            format!("{num}/{den}")
        } else {
            format!("{num}/({den})")
        }
    }

    pub fn display<'a>(&'a self, spec: &'a BundleSpec) -> ExprDisplay<'a> {
        ExprDisplay { expr: self, spec }
    }
}

pub struct ExprDisplay<'a> {
    expr: &'a Expr,
    spec: &'a BundleSpec,
}

impl fmt::Display for ExprDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.expr.to_text(self.spec))
    }
}
