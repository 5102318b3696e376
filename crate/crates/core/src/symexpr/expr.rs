use std::collections::BTreeSet;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use super::poly::{gcd, Poly, Rational};
use super::{BundleSpec, JetVar, Var};
use crate::error::{Error, Result};
use crate::multiindex::MultiIndex;

/// Canonical rational function `num / den`.
///
/// Invariants: `gcd(num, den) = 1`, `den` has leading coefficient 1, and a
/// zero numerator always comes with `den = 1`. Structural equality is
/// therefore mathematical equality on the supported fragment.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Expr {
    num: Poly,
    den: Poly,
}

impl Default for Expr {
    fn default() -> Self {
        Expr::zero()
    }
}

impl Expr {
    pub fn zero() -> Self {
        Expr {
            num: Poly::zero(),
            den: Poly::one(),
        }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Expr {
            num: Poly::constant(c),
            den: Poly::one(),
        }
    }

    pub fn int(n: i64) -> Self {
        Self::constant(Rational::from_integer(n.into()))
    }

    pub fn ratio(n: i64, d: i64) -> Self {
        Self::constant(Rational::new(n.into(), d.into()))
    }

    pub fn var(v: Var) -> Self {
        Expr {
            num: Poly::var(v),
            den: Poly::one(),
        }
    }

    pub fn base(direction: usize) -> Self {
        Self::var(Var::Base(direction as u8))
    }

    pub fn jet(field: usize, index: MultiIndex) -> Self {
        Self::var(Var::Jet(JetVar::new(field, index)))
    }

    pub fn atom(id: usize) -> Self {
        Self::var(Var::Atom(id as u16))
    }

    pub fn from_poly(p: Poly) -> Self {
        Expr {
            num: p,
            den: Poly::one(),
        }
    }

    /// Builds `num / den` in canonical form.
    pub fn from_parts(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::normalized(num, den))
    }

    fn normalized(num: Poly, den: Poly) -> Self {
        debug_assert!(!den.is_zero());
        if num.is_zero() {
            return Expr::zero();
        }
        if let Some(c) = den.as_constant() {
            return Expr {
                num: num.scale(&c.recip()),
                den: Poly::one(),
            };
        }
        let g = gcd(&num, &den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (num.div_exact(&g).unwrap(), den.div_exact(&g).unwrap())
        };
        let lc = den.leading_coefficient();
        if let Some(c) = den.as_constant() {
            return Expr {
                num: num.scale(&c.recip()),
                den: Poly::one(),
            };
        }
        let inv = lc.recip();
        Expr {
            num: num.scale(&inv),
            den: den.scale(&inv),
        }
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn denominator(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.num.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn as_constant(&self) -> Option<Rational> {
        if self.den.is_one() {
            self.num.as_constant()
        } else {
            None
        }
    }

    pub fn is_constant(&self) -> bool {
        self.as_constant().is_some()
    }

    pub fn scale(&self, c: &Rational) -> Expr {
        if c.is_zero() {
            return Expr::zero();
        }
        Expr {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn add(&self, other: &Expr) -> Expr {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        if self.den == other.den {
            let num = self.num.add(&other.num);
            if self.den.is_one() {
                return Expr::from_poly(num);
            }
            return Self::normalized(num, self.den.clone());
        }
        let g = gcd(&self.den, &other.den);
        let a = self.den.div_exact(&g).unwrap();
        let b = other.den.div_exact(&g).unwrap();
        let num = self.num.mul(&b).add(&other.num.mul(&a));
        let den = self.den.mul(&b);
        Self::normalized(num, den)
    }

    pub fn sub(&self, other: &Expr) -> Expr {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Expr {
        Expr {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, other: &Expr) -> Expr {
        if self.is_zero() || other.is_zero() {
            return Expr::zero();
        }
        if self.den.is_one() && other.den.is_one() {
            return Expr::from_poly(self.num.mul(&other.num));
        }
        // Cross-cancel before multiplying.
        let g1 = gcd(&self.num, &other.den);
        let g2 = gcd(&other.num, &self.den);
        let n1 = self.num.div_exact(&g1).unwrap();
        let d2 = other.den.div_exact(&g1).unwrap();
        let n2 = other.num.div_exact(&g2).unwrap();
        let d1 = self.den.div_exact(&g2).unwrap();
        let num = n1.mul(&n2);
        let den = d1.mul(&d2);
        let lc = den.leading_coefficient().recip();
        if den.is_constant() {
            return Expr::from_poly(num.scale(&lc));
        }
        Expr {
            num: num.scale(&lc),
            den: den.scale(&lc),
        }
    }

    pub fn recip(&self) -> Result<Expr> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::normalized(self.den.clone(), self.num.clone()))
    }

    pub fn div(&self, other: &Expr) -> Result<Expr> {
        Ok(self.mul(&other.recip()?))
    }

    pub fn pow(&self, e: i32) -> Result<Expr> {
        let base = if e < 0 { self.recip()? } else { self.clone() };
        let k = e.unsigned_abs();
        Ok(Expr {
            num: base.num.pow(k),
            den: base.den.pow(k),
        })
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        let mut v = self.num.vars();
        v.extend(self.den.vars());
        v
    }

    pub fn contains_var(&self, v: Var) -> bool {
        self.num.contains_var(v) || self.den.contains_var(v)
    }

    /// Jet variables appearing literally (not through atoms).
    pub fn jet_vars(&self) -> BTreeSet<JetVar> {
        self.vars().into_iter().filter_map(|v| v.as_jet()).collect()
    }

    /// Partial derivative in `v` treating every variable as independent.
    pub fn explicit_partial(&self, v: Var) -> Expr {
        if !self.contains_var(v) {
            return Expr::zero();
        }
        if self.den.is_one() {
            return Expr::from_poly(self.num.partial(v));
        }
        let dn = self.num.partial(v);
        let dd = self.den.partial(v);
        let num = dn.mul(&self.den).sub(&self.num.mul(&dd));
        Self::normalized(num, self.den.mul(&self.den))
    }

    /// Partial derivative in a base coordinate or jet variable, applying the
    /// registered atom rules through the chain rule. Differentiating in an
    /// atom is purely explicit.
    pub fn partial(&self, v: Var, spec: &BundleSpec) -> Expr {
        let mut out = self.explicit_partial(v);
        if matches!(v, Var::Atom(_)) {
            return out;
        }
        for var in self.vars() {
            if let Var::Atom(a) = var {
                let rule = spec.atom_rule(a as usize, v);
                if rule.is_zero() {
                    continue;
                }
                out = out.add(&self.explicit_partial(var).mul(&rule));
            }
        }
        out
    }

    /// Exact evaluation at a rational point; `None` if the denominator vanishes.
    pub fn evaluate(&self, value: &dyn Fn(Var) -> Rational) -> Option<Rational> {
        let d = self.den.evaluate(value);
        if d.is_zero() {
            return None;
        }
        Some(self.num.evaluate(value) / d)
    }

    /// Replaces variables by expressions.
    pub fn substitute(&self, map: &dyn Fn(Var) -> Option<Expr>) -> Expr {
        fn poly_subst(p: &Poly, map: &dyn Fn(Var) -> Option<Expr>) -> Expr {
            let mut out = Expr::zero();
            for (m, c) in p.terms() {
                let mut t = Expr::constant(c.clone());
                for &(v, e) in m.factors() {
                    let f = map(v).unwrap_or_else(|| Expr::var(v));
                    t = t.mul(&f.pow(e as i32).expect("positive power"));
                }
                out = out.add(&t);
            }
            out
        }
        let n = poly_subst(&self.num, map);
        let d = poly_subst(&self.den, map);
        n.div(&d).expect("substitution made the denominator vanish")
    }

    /// Sign of the leading coefficient of the numerator.
    pub fn leading_sign_negative(&self) -> bool {
        self.num.leading_coefficient().is_negative()
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident) => {
        impl $trait<&Expr> for &Expr {
            type Output = Expr;
            fn $method(self, rhs: &Expr) -> Expr {
                Expr::$method(self, rhs)
            }
        }
        impl $trait<Expr> for Expr {
            type Output = Expr;
            fn $method(self, rhs: Expr) -> Expr {
                Expr::$method(&self, &rhs)
            }
        }
        impl $trait<&Expr> for Expr {
            type Output = Expr;
            fn $method(self, rhs: &Expr) -> Expr {
                Expr::$method(&self, rhs)
            }
        }
        impl $trait<Expr> for &Expr {
            type Output = Expr;
            fn $method(self, rhs: Expr) -> Expr {
                Expr::$method(self, &rhs)
            }
        }
    };
}

binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);

impl Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::neg(&self)
    }
}

impl Neg for &Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::neg(self)
    }
}

impl std::iter::Sum for Expr {
    fn sum<I: Iterator<Item = Expr>>(iter: I) -> Expr {
        iter.fold(Expr::zero(), |acc, e| acc.add(&e))
    }
}

impl From<i64> for Expr {
    fn from(n: i64) -> Expr {
        Expr::int(n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> Expr {
        Expr::jet(0, MultiIndex::empty(1))
    }
    fn qt() -> Expr {
        Expr::jet(0, MultiIndex::unit(1, 0))
    }

    #[test]
    fn algebraic_identity_vanishes() {
        let s = &q() + &qt();
        let e = &s * &s - &q() * &q() - Expr::int(2) * &q() * &qt() - &qt() * &qt();
        assert!(e.is_zero());
    }

    #[test]
    fn cancellation() {
        let num = &qt() * &qt() - &q() * &q();
        let den = &qt() - &q();
        assert_eq!(num.div(&den).unwrap(), &qt() + &q());
    }

    #[test]
    fn confluent_normalization() {
        let a = Expr::one().div(&(&q() + Expr::one())).unwrap();
        let b = Expr::one().div(&(&q() - Expr::one())).unwrap();
        let lhs = &a + &b;
        let rhs = (Expr::int(2) * &q()).div(&(&q() * &q() - Expr::one())).unwrap();
        assert_eq!(lhs, rhs);
        let c = (Expr::int(2) * &q() + Expr::int(2))
            .div(&(Expr::int(4) * &q() * &q() - Expr::int(4)))
            .unwrap();
        assert_eq!(c, b.scale(&Rational::new(1.into(), 2.into())));
    }

    #[test]
    fn division_by_zero() {
        assert_eq!(q().div(&(&q() - &q())), Err(Error::DivisionByZero));
        assert_eq!(Expr::zero().pow(-1), Err(Error::DivisionByZero));
    }

    #[test]
    fn quotient_rule() {
        let e = Expr::one().div(&q()).unwrap();
        let v = Var::jet(0, MultiIndex::empty(1));
        assert_eq!(e.explicit_partial(v), Expr::int(-1).div(&(&q() * &q())).unwrap());
    }
}
