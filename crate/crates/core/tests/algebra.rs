//! Field axioms and canonical-form properties of the coefficient ring,
//! driven by proptest seeds into the crate's own sampler.

use jetvar_core::random::Sampler;
use jetvar_core::symexpr::{parse, poly, BundleSpec, Expr, Rational, Var};
use num_traits::Zero;
use proptest::prelude::*;

fn draw(seed: u64) -> (BundleSpec, Expr, Expr, Expr) {
    let mut s = Sampler::new(seed);
    let spec = s.bundle(2, 2);
    let a = s.rational_function(&spec, 1);
    let b = s.rational_function(&spec, 1);
    let c = s.function(&spec, 1);
    ((*spec).clone(), a, b, c)
}

/// Deterministic pseudo-random rational value for each variable.
fn point(seed: u64) -> impl Fn(Var) -> Rational {
    move |v: Var| {
        let h = format!("{v:?}{seed}").bytes().fold(1469598103934665603u64, |h, b| {
            (h ^ b as u64).wrapping_mul(1099511628211)
        });
        Rational::new(((h % 23) as i64 - 11).into(), (((h >> 8) % 5 + 1) as i64).into())
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn distributive_and_commutative(seed in any::<u64>()) {
        let (_, a, b, c) = draw(seed);
        prop_assert_eq!(&(&a + &b) * &c, &a * &c + &b * &c);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn division_inverts_multiplication(seed in any::<u64>()) {
        let (_, a, b, _) = draw(seed);
        prop_assume!(!b.is_zero());
        prop_assert_eq!((&a * &b).div(&b).unwrap(), a);
    }

    #[test]
    fn printing_round_trips(seed in any::<u64>()) {
        let (spec, a, b, _) = draw(seed);
        for e in [a, b] {
            let text = e.to_text(&spec);
            prop_assert_eq!(parse(&text, &spec).unwrap(), e);
        }
    }

    #[test]
    fn zero_test_agrees_with_evaluation(seed in any::<u64>()) {
        let (_, a, b, c) = draw(seed);
        let e = &(&a + &b) * &c;
        let at = point(seed);
        if let (Some(va), Some(vb), Some(vc), Some(ve)) = (a.evaluate(&at), b.evaluate(&at), c.evaluate(&at), e.evaluate(&at)) {
            prop_assert_eq!(ve, (va + vb) * vc);
        }
        let z = &e - &(&a * &c) - &b * &c;
        prop_assert!(z.is_zero());
        prop_assert!(z.evaluate(&at).is_none_or(|v| v.is_zero()));
    }

    #[test]
    fn gcd_recovers_planted_factor(seed in any::<u64>()) {
        let mut s = Sampler::new(seed);
        let spec = s.bundle(2, 2);
        let vars = Sampler::variables(&spec, 1, true);
        let g = s.nonconstant_polynomial(&vars, 3, 2);
        let p = s.polynomial(&vars, 3, 2);
        let q = s.polynomial(&vars, 3, 2);
        let (g, p, q) = (g.numerator().clone(), p.numerator().clone(), q.numerator().clone());
        prop_assume!(!p.is_zero() && !q.is_zero());
        let h = poly::gcd(&g.mul(&p), &g.mul(&q));
        prop_assert!(h.div_exact(&g.monic()).is_some());
        prop_assert!(g.mul(&p).div_exact(&h).is_some());
        prop_assert!(g.mul(&q).div_exact(&h).is_some());
    }
}

#[test]
fn gcd_of_dense_multivariate_case_is_fast() {
    // A sum whose denominators share powers of two irreducible factors; the
    // pseudo-remainder sequence alone takes effectively forever on it.
    let spec = BundleSpec::simple(&["t"], &["u"]).unwrap();
    let p = |s: &str| parse(s, &spec).unwrap();
    let a = p("(u_t^3 + t*u)/((t*u - 1)^2*(u_tt + t*u_t + 1)^2)");
    let b = p("(u*u_tt - 3*t)/((t*u - 1)*(u_tt + t*u_t + 1)^3)");
    let start = std::time::Instant::now();
    let sum = &a + &b;
    let back = &sum - &b;
    assert_eq!(back, a);
    assert!(start.elapsed().as_secs() < 10);
    assert_eq!(
        sum.denominator().clone(),
        p("(t*u - 1)^2*(u_tt + t*u_t + 1)^3").numerator().monic()
    );
}
