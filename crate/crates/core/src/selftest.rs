//! Randomized invariant suites.
//!
//! Each suite draws its cases from a [`Sampler`] seeded by
//! `(seed, suite, case)`, so any failing case can be replayed alone. A case
//! returns whether the identity it checked was non-vacuous (the quantities
//! compared were nonzero); a suite with too few non-vacuous cases fails even
//! if every identity held.
//!
//! [`Fault`] deliberately breaks one convention inside the suites so the
//! harness itself can be shown to catch sign errors.

use std::sync::Arc;

use crate::contactforms::{first_variational_split, ContactForm, Contraction};
use crate::jetops::{
    euler_lagrange, euler_lagrange_density, invert_total_divergence, is_variationally_trivial, total_derivative,
    total_derivative_multi, total_divergence, Lagrangian,
};
use crate::random::{FieldKind, Sampler};
use crate::symexpr::{parse, BundleSpec, Expr, JetVar, Rational, Var};
use crate::symmetry::{
    characteristic_check, first_variational_formula, master_identity_check, noether_current, verify_conservation,
    GeneralizedVectorField, NoetherCurrent, Verdict,
};

/// A deliberately flipped convention.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Fault {
    /// `υ ⌋ θ` evaluated with the wrong sign.
    ContactEvaluationSign,
    /// `(-1)^|Λ|` dropped from the Euler–Lagrange sum.
    IntegrationByPartsSign,
    /// Noether currents negated.
    CurrentSign,
}

impl Fault {
    pub const ALL: [Fault; 3] = [
        Fault::ContactEvaluationSign,
        Fault::IntegrationByPartsSign,
        Fault::CurrentSign,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Fault::ContactEvaluationSign => "contact-sign",
            Fault::IntegrationByPartsSign => "parts-sign",
            Fault::CurrentSign => "current-sign",
        }
    }

    pub fn from_name(name: &str) -> Option<Fault> {
        Self::ALL.into_iter().find(|f| f.name() == name)
    }
}

type CaseResult = std::result::Result<bool, String>;
type CaseFn = fn(&mut Sampler, Option<Fault>) -> CaseResult;

pub struct Suite {
    pub name: &'static str,
    pub description: &'static str,
    pub default_cases: usize,
    run: CaseFn,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteOutcome {
    pub name: &'static str,
    pub cases: usize,
    pub failures: usize,
    pub nontrivial: usize,
    /// `(case index, message)` of the first failure.
    pub first_failure: Option<(usize, String)>,
}

impl SuiteOutcome {
    /// No failing case, and at least half the cases were non-vacuous.
    pub fn passed(&self) -> bool {
        self.failures == 0 && 2 * self.nontrivial >= self.cases
    }
}

fn case_seed(seed: u64, suite: &str, case: usize) -> u64 {
    // FNV-1a over the suite name keeps seeds stable across suite reordering.
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in suite.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    h ^ seed.wrapping_mul(0x9e37_79b9_7f4a_7c15) ^ (case as u64).wrapping_mul(0xff51_afd7_ed55_8ccd)
}

impl Suite {
    pub fn run(&self, seed: u64, cases: usize, fault: Option<Fault>) -> SuiteOutcome {
        let mut out = SuiteOutcome {
            name: self.name,
            cases,
            failures: 0,
            nontrivial: 0,
            first_failure: None,
        };
        for case in 0..cases {
            let mut sampler = Sampler::new(case_seed(seed, self.name, case));
            match (self.run)(&mut sampler, fault) {
                Ok(true) => out.nontrivial += 1,
                Ok(false) => {}
                Err(msg) => {
                    out.failures += 1;
                    if out.first_failure.is_none() {
                        out.first_failure = Some((case, msg));
                    }
                }
            }
        }
        out
    }

    /// Replays a single case (for diagnosing a failure).
    pub fn run_case(&self, seed: u64, case: usize, fault: Option<Fault>) -> CaseResult {
        (self.run)(&mut Sampler::new(case_seed(seed, self.name, case)), fault)
    }
}

pub fn suites() -> Vec<Suite> {
    macro_rules! suite {
        ($name:literal, $desc:literal, $cases:expr, $f:ident) => {
            Suite {
                name: $name,
                description: $desc,
                default_cases: $cases,
                run: $f,
            }
        };
    }
    vec![
        suite!(
            "zero-test",
            "is_zero agrees with evaluation at rational points",
            100,
            zero_test
        ),
        suite!("leibniz", "partial derivatives obey the product rule", 100, leibniz),
        suite!(
            "partials-commute",
            "mixed partials and total derivatives commute",
            100,
            partials_commute
        ),
        suite!("print-parse", "parse(print(e)) = e", 100, print_parse),
        suite!("dH-squared", "d_H d_H = 0", 200, d_h_squared),
        suite!("dV-squared", "d_V d_V = 0", 200, d_v_squared),
        suite!("dH-dV-anticommute", "d_H d_V + d_V d_H = 0", 200, anticommute),
        suite!("h0-d", "h0 d = d_H h0", 200, h0_d),
        suite!("rho-idempotent", "rho rho = rho", 200, rho_idempotent),
        suite!("rho-dH", "rho d_H = 0", 200, rho_d_h),
        suite!("delta-dH", "delta d_H = 0 on (0,n-1)-forms", 200, delta_d_h),
        suite!("delta-nilpotent", "rho d rho d L = 0", 100, delta_nilpotent),
        suite!(
            "euler-lagrange-dual",
            "rho(dL) equals the Euler-Lagrange sum",
            100,
            euler_lagrange_dual
        ),
        suite!(
            "prolongation",
            "prolongation cache matches regeneration",
            50,
            prolongation
        ),
        suite!(
            "vertical-dH",
            "u_|d_H phi + d_H(u_|phi) = 0 for vertical u",
            100,
            vertical_d_h
        ),
        suite!(
            "first-variation",
            "three-piece first variational formula sums to L_u L",
            100,
            first_variation
        ),
        suite!(
            "triviality",
            "d_H sigma is trivial and inverts exactly",
            100,
            triviality
        ),
        suite!(
            "master-classical",
            "delta(L_u L) = L_u delta L for classical u",
            50,
            master_classical
        ),
        suite!(
            "master-generalized",
            "closing relation for vertical generalized fields",
            50,
            master_generalized
        ),
        suite!(
            "noether",
            "translation currents satisfy the off-shell identity",
            50,
            noether
        ),
        suite!(
            "vertical-equivalence",
            "u and u_V give the same verdict and current law",
            50,
            vertical_equivalence
        ),
        suite!(
            "falsifiability",
            "perturbed currents and symmetries are rejected",
            60,
            falsifiability
        ),
    ]
}

pub fn suite(name: &str) -> Option<Suite> {
    suites().into_iter().find(|s| s.name == name)
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn show_form(f: &ContactForm, spec: &BundleSpec) -> String {
    let text = f.to_text(spec);
    if text.len() > 300 {
        format!(
            "{}…",
            &text[..text.char_indices().nth(300).map_or(text.len(), |(i, _)| i)]
        )
    } else {
        text
    }
}

// ---- coefficient ring ----

fn point(sampler: &mut Sampler) -> impl Fn(Var) -> Rational {
    let values: Vec<Rational> = (0..64)
        .map(|_| {
            let n = sampler.range(0, 14) as i64 - 7;
            let d = sampler.range(1, 4) as i64;
            Rational::new(n.into(), d.into())
        })
        .collect();
    move |v: Var| {
        let h = match v {
            Var::Base(d) => d as usize,
            Var::Jet(j) => {
                8 + 7 * j.field()
                    + j.index
                        .counts()
                        .iter()
                        .enumerate()
                        .map(|(i, c)| (i + 2) * *c as usize)
                        .sum::<usize>()
            }
            Var::Atom(a) => 40 + a as usize,
        };
        values[h % values.len()].clone()
    }
}

fn zero_test(s: &mut Sampler, _: Option<Fault>) -> CaseResult {
    let spec = s.bundle(2, 2);
    let a = s.rational_function(&spec, 1);
    let b = s.rational_function(&spec, 1);
    let c = s.function(&spec, 1);
    // (a + b)c - ac - bc is zero; a·b - b·a + c is zero iff c is.
    let zero = (&a + &b) * &c - &a * &c - &b * &c;
    ensure(zero.is_zero(), || {
        format!("distributivity failed: {}", zero.to_text(&spec))
    })?;
    let e = &a * &b - &b * &a + &c;
    let mut all_zero = true;
    let mut evaluated = 0;
    for _ in 0..20 {
        let at = point(s);
        if let Some(v) = e.evaluate(&at) {
            evaluated += 1;
            all_zero &= num_traits::Zero::is_zero(&v);
        }
    }
    ensure(evaluated > 0, || "no evaluation point in the domain".into())?;
    ensure(e.is_zero() == (c.is_zero()), || {
        "zero test disagrees with construction".into()
    })?;
    ensure(!e.is_zero() || all_zero, || "is_zero but evaluates nonzero".into())?;
    Ok(!e.is_zero() && !all_zero)
}

fn leibniz(s: &mut Sampler, _: Option<Fault>) -> CaseResult {
    let spec = s.bundle(2, 2);
    let f = s.rational_function(&spec, 2);
    let g = s.rational_function(&spec, 2);
    let vars = Sampler::variables(&spec, 2, true);
    let v = vars[s.range(0, vars.len() - 1)];
    let lhs = (&f * &g).partial(v, &spec);
    let rhs = f.partial(v, &spec) * &g + &f * g.partial(v, &spec);
    ensure(lhs == rhs, || format!("product rule fails in {}", spec.var_name(v)))?;
    let d = s.range(0, spec.dim() - 1);
    let lhs = total_derivative(&(&f * &g), d, &spec);
    let rhs = total_derivative(&f, d, &spec) * &g + &f * total_derivative(&g, d, &spec);
    ensure(lhs == rhs, || "total derivative is not a derivation".into())?;
    Ok(!lhs.is_zero())
}

fn partials_commute(s: &mut Sampler, _: Option<Fault>) -> CaseResult {
    let spec = s.bundle(2, 2);
    let f = s.rational_function(&spec, 2);
    let vars = Sampler::variables(&spec, 2, true);
    let a = vars[s.range(0, vars.len() - 1)];
    let b = vars[s.range(0, vars.len() - 1)];
    let ab = f.partial(a, &spec).partial(b, &spec);
    let ba = f.partial(b, &spec).partial(a, &spec);
    ensure(ab == ba, || "mixed partials differ".into())?;
    let (d1, d2) = (s.range(0, spec.dim() - 1), s.range(0, spec.dim() - 1));
    let x = total_derivative(&total_derivative(&f, d1, &spec), d2, &spec);
    let y = total_derivative(&total_derivative(&f, d2, &spec), d1, &spec);
    ensure(x == y, || "total derivatives do not commute".into())?;
    Ok(!x.is_zero())
}

fn print_parse(s: &mut Sampler, _: Option<Fault>) -> CaseResult {
    let spec = s.bundle(2, 2);
    let e = s.rational_function(&spec, 2) * s.rational_function(&spec, 1);
    let text = e.to_text(&spec);
    let back = parse(&text, &spec).map_err(|err| format!("{text}: {err}"))?;
    ensure(back == e, || format!("round trip changed {text}"))?;
    ensure(back.to_text(&spec) == text, || "printing is not canonical".into())?;
    Ok(!e.is_constant())
}

// ---- bicomplex ----

fn d_h_squared(s: &mut Sampler, _: Option<Fault>) -> CaseResult {
    let spec = s.bundle(2, 2);
    let k = s.range(0, 2);
    let sdeg = s.range(0, spec.dim() - 1);
    let phi = s.form(&spec, 2, k, sdeg);
    let once = phi.d_h(&spec);
    let twice = once.d_h(&spec);
    ensure(twice.is_zero(), || format!("d_H^2 = {}", show_form(&twice, &spec)))?;
    Ok(!once.is_zero())
}

fn d_v_squared(s: &mut Sampler, _: Option<Fault>) -> CaseResult {
    let spec = s.bundle(2, 2);
    let phi = s.mixed_form(&spec, 2, 2);
    let once = phi.d_v(&spec);
    let twice = once.d_v(&spec);
    ensure(twice.is_zero(), || format!("d_V^2 = {}", show_form(&twice, &spec)))?;
    Ok(!once.is_zero())
}

fn anticommute(s: &mut Sampler, _: Option<Fault>) -> CaseResult {
    let spec = s.bundle(2, 2);
    let phi = s.mixed_form(&spec, 2, 2);
    let a = phi.d_v(&spec).d_h(&spec);
    let b = phi.d_h(&spec).d_v(&spec);
    let sum = a.add(&b);
    ensure(sum.is_zero(), || {
        format!("d_H d_V + d_V d_H = {}", show_form(&sum, &spec))
    })?;
    Ok(!a.is_zero())
}

fn h0_d(s: &mut Sampler, _: Option<Fault>) -> CaseResult {
    let spec = s.bundle(2, 2);
    let phi = s.mixed_form(&spec, 2, 1).add(&s.form(&spec, 2, 0, 0));
    let lhs = phi.d(&spec).h0();
    let rhs = phi.h0().d_h(&spec);
    ensure(lhs == rhs, || "h0 d != d_H h0".into())?;
    Ok(!lhs.is_zero())
}

fn rho_idempotent(s: &mut Sampler, _: Option<Fault>) -> CaseResult {
    let spec = s.bundle(2, 2);
    let k = s.range(1, 2);
    let phi = s.form(&spec, 2, k, spec.dim());
    let once = phi.rho(&spec);
    let twice = once.rho(&spec);
    ensure(once == twice, || format!("rho not idempotent at k = {k}"))?;
    Ok(!once.is_zero())
}

fn rho_d_h(s: &mut Sampler, _: Option<Fault>) -> CaseResult {
    let spec = s.bundle(2, 2);
    let xi = s.form(&spec, 2, 1, spec.dim() - 1);
    let dh = xi.d_h(&spec);
    let r = dh.rho(&spec);
    ensure(r.is_zero(), || format!("rho d_H = {}", show_form(&r, &spec)))?;
    Ok(!dh.is_zero())
}

fn delta_d_h(s: &mut Sampler, _: Option<Fault>) -> CaseResult {
    let spec = s.bundle(2, 2);
    let xi = s.form(&spec, 2, 0, spec.dim() - 1);
    let dh = xi.d_h(&spec);
    let delta = dh.d(&spec).rho(&spec);
    ensure(delta.is_zero(), || format!("delta d_H = {}", show_form(&delta, &spec)))?;
    let density = dh.density_coefficient(&spec).unwrap_or_default();
    ensure(euler_lagrange_density(&density, &spec).is_zero(), || {
        "EL of a divergence".into()
    })?;
    Ok(!dh.is_zero())
}

fn delta_nilpotent(s: &mut Sampler, _: Option<Fault>) -> CaseResult {
    let spec = s.bundle(2, 2);
    let order = s.range(1, 2);
    let l = s.lagrangian(&spec, order);
    let big_l = ContactForm::scalar(l.density().clone()).wedge(&ContactForm::volume(spec.dim()));
    let delta = big_l.d(&spec).rho(&spec);
    let twice = delta.d(&spec).rho(&spec);
    ensure(twice.is_zero(), || format!("delta^2 = {}", show_form(&twice, &spec)))?;
    Ok(!delta.is_zero())
}

fn euler_lagrange_dual(s: &mut Sampler, fault: Option<Fault>) -> CaseResult {
    let spec = s.bundle(2, 2);
    let order = s.range(1, 2);
    let l = s.lagrangian(&spec, order);
    let big_l = ContactForm::scalar(l.density().clone()).wedge(&ContactForm::volume(spec.dim()));
    let via_rho = big_l.d(&spec).rho(&spec);
    let direct = if fault == Some(Fault::IntegrationByPartsSign) {
        unsigned_euler_lagrange(&l)
    } else {
        euler_lagrange(&l).components
    };
    let omega = ContactForm::volume(spec.dim());
    for (i, e) in direct.iter().enumerate() {
        let got = via_rho.coefficient_of(
            std::iter::once(crate::contactforms::Generator::Theta(JetVar::new(
                i,
                spec.empty_index(),
            )))
            .chain(omega.terms().next().unwrap().0.generators().iter().copied())
            .collect(),
        );
        ensure(&got == e, || {
            format!(
                "component {i}: rho gives {}, direct sum {}",
                got.to_text(&spec),
                e.to_text(&spec)
            )
        })?;
    }
    Ok(!via_rho.is_zero())
}

/// The Euler–Lagrange sum without the alternating sign (fault injection only).
fn unsigned_euler_lagrange(l: &Lagrangian) -> Vec<Expr> {
    let spec = l.spec();
    let deps = spec.jet_dependencies(l.density());
    (0..spec.field_count())
        .map(|i| {
            deps.iter()
                .filter(|j| j.field() == i)
                .map(|j| total_derivative_multi(&l.density().partial(Var::Jet(*j), spec), &j.index, spec))
                .sum()
        })
        .collect()
}

// ---- symmetries ----

fn prolongation(s: &mut Sampler, _: Option<Fault>) -> CaseResult {
    let spec = s.bundle(2, 2);
    let kind = [FieldKind::Classical, FieldKind::Projectable, FieldKind::General][s.range(0, 2)];
    let v = s.vector_field(&spec, kind, 1);
    let k = s.range(1, 2);
    let low = v.prolong(k);
    let high = v.prolong(k + 1);
    let mut nonzero = false;
    for (j, c) in &low {
        ensure(&high[j] == c, || "truncation of higher prolongation differs".into())?;
        ensure(&v.prolonged_component_uncached(*j) == c, || {
            "cache differs from regeneration".into()
        })?;
        nonzero |= j.order() > 0 && !c.is_zero();
    }
    Ok(nonzero)
}

fn vertical_d_h(s: &mut Sampler, _: Option<Fault>) -> CaseResult {
    let spec = s.bundle(2, 2);
    let v = s.vector_field(&spec, FieldKind::Vertical, 1);
    let k = s.range(0, 2);
    let sdeg = s.range(0, spec.dim() - 1);
    let phi = s.form(&spec, 1, k, sdeg);
    let a = phi.d_h(&spec).interior(&v);
    let b = phi.interior(&v).d_h(&spec);
    let sum = a.add(&b);
    ensure(sum.is_zero(), || {
        format!("u_|d_H + d_H u_| = {}", show_form(&sum, &spec))
    })?;
    Ok(!a.is_zero())
}

/// `υ` with the contact evaluation negated (fault injection only).
struct FlippedContact<'a>(&'a GeneralizedVectorField);

impl Contraction for FlippedContact<'_> {
    fn on_dx(&self, direction: usize) -> Expr {
        self.0.on_dx(direction)
    }

    fn on_theta(&self, jet: JetVar) -> Expr {
        -self.0.on_theta(jet)
    }
}

fn first_variation(s: &mut Sampler, fault: Option<Fault>) -> CaseResult {
    let spec = s.bundle(2, 2);
    let kind = [
        FieldKind::Classical,
        FieldKind::Vertical,
        FieldKind::Projectable,
        FieldKind::General,
    ][s.range(0, 3)];
    let order = if kind == FieldKind::General { 1 } else { 2 };
    let v = s.vector_field(&spec, kind, order);
    let order = s.range(1, 2);
    let l = s.lagrangian(&spec, order);
    let fv = first_variational_formula(&v, &l).map_err(|e| e.to_string())?;
    let big_l = ContactForm::scalar(l.density().clone()).wedge(&ContactForm::volume(spec.dim()));
    let cartan = if fault == Some(Fault::ContactEvaluationSign) {
        big_l.lie_derivative(&FlippedContact(&v), &spec)
    } else {
        big_l.lie_derivative(&v, &spec)
    };
    ensure(fv.sum() == cartan, || "pieces do not sum to the Lie derivative".into())?;
    if kind != FieldKind::General {
        ensure(fv.gauge_term.is_zero(), || "projectable field with a gauge term".into())?;
    }
    Ok(!cartan.is_zero() && !fv.source_term.is_zero())
}

fn triviality(s: &mut Sampler, _: Option<Fault>) -> CaseResult {
    let spec = s.bundle(2, 1);
    let order = s.range(0, 2);
    let sigma = s.divergence_current(&spec, order);
    let h = total_divergence(&sigma, &spec);
    let l = Lagrangian::new(spec.clone(), h.clone());
    ensure(is_variationally_trivial(&l), || "divergence reported nontrivial".into())?;
    let back = invert_total_divergence(&h, &spec).map_err(|e| format!("inversion: {e}"))?;
    ensure(total_divergence(&back, &spec) == h, || {
        "reconstructed current is wrong".into()
    })?;
    Ok(!h.is_zero())
}

fn master_classical(s: &mut Sampler, _: Option<Fault>) -> CaseResult {
    let spec = s.bundle(2, 2);
    let v = s.vector_field(&spec, FieldKind::Classical, 0);
    let order = s.range(1, 2);
    let l = s.lagrangian(&spec, order);
    let cert = master_identity_check(&v, &l).map_err(|e| e.to_string())?;
    let c = cert.classical.as_ref().ok_or("classical branch missing")?;
    ensure(c.difference.is_zero(), || {
        format!("difference {}", show_form(&c.difference, &spec))
    })?;
    ensure(cert.generalized.difference.is_zero(), || {
        "generalized branch disagrees".into()
    })?;
    Ok(!c.lhs.is_zero())
}

fn master_generalized(s: &mut Sampler, _: Option<Fault>) -> CaseResult {
    let spec = s.bundle(2, 2);
    // Half the cases are genuine vertical symmetries (vertical parts of
    // translations of an autonomous L), where both sides must vanish.
    if s.chance(0.5) {
        let l = autonomous_lagrangian(s, &spec);
        let v = translation(s, &spec).vertical_part();
        let cert = master_identity_check(&v, &l).map_err(|e| e.to_string())?;
        let g = &cert.generalized;
        ensure(g.difference.is_zero(), || {
            format!("difference {}", show_form(&g.difference, &spec))
        })?;
        ensure(g.lhs.is_zero(), || {
            format!("symmetry with {}", show_form(&g.lhs, &spec))
        })?;
        return Ok(!euler_lagrange(&l).is_zero());
    }
    let v = s.vector_field(&spec, FieldKind::Vertical, 2);
    let order = s.range(1, 2);
    let l = s.lagrangian(&spec, order);
    let cert = master_identity_check(&v, &l).map_err(|e| e.to_string())?;
    let g = &cert.generalized;
    ensure(g.difference.is_zero(), || {
        format!("difference {}", show_form(&g.difference, &spec))
    })?;
    Ok(!g.lhs.is_zero())
}

/// An autonomous Lagrangian with a kinetic term in direction 0 for each field.
fn autonomous_lagrangian(s: &mut Sampler, spec: &Arc<BundleSpec>) -> Lagrangian {
    let vars = Sampler::variables(spec, 1, false);
    let mut density = s.polynomial(&vars, 3, 3);
    for i in 0..spec.field_count() {
        let y = Expr::var(Var::Jet(spec.jet_var(i, &[0])));
        density = density + (&y * &y).scale(&Rational::new(1.into(), 2.into()));
    }
    Lagrangian::new(spec.clone(), density)
}

/// A constant-coefficient translation `c^λ ∂_λ`, not zero.
fn translation(s: &mut Sampler, spec: &Arc<BundleSpec>) -> GeneralizedVectorField {
    let mut base: Vec<Expr> = (0..spec.dim())
        .map(|_| {
            if s.chance(0.5) {
                Expr::constant(s.coefficient())
            } else {
                Expr::zero()
            }
        })
        .collect();
    if base.iter().all(Expr::is_zero) {
        base[0] = Expr::one();
    }
    let m = spec.field_count();
    GeneralizedVectorField::new(spec.clone(), base, vec![Expr::zero(); m]).unwrap()
}

fn current(
    v: &GeneralizedVectorField,
    l: &Lagrangian,
    sigma: &[Expr],
    fault: Option<Fault>,
) -> std::result::Result<NoetherCurrent, String> {
    let mut j = noether_current(v, l, sigma).map_err(|e| e.to_string())?;
    if fault == Some(Fault::CurrentSign) {
        j.components = j.components.iter().map(|c| -c).collect();
    }
    Ok(j)
}

fn noether(s: &mut Sampler, fault: Option<Fault>) -> CaseResult {
    let spec = s.bundle(2, 2);
    let l = autonomous_lagrangian(s, &spec);
    let v = translation(s, &spec);
    let rep = characteristic_check(&v, &l, None).map_err(|e| e.to_string())?;
    ensure(rep.verdict == Verdict::ExactSymmetry, || {
        format!("translation reported {}", rep.verdict.label())
    })?;
    let j = current(&v, &l, &vec![Expr::zero(); spec.dim()], fault)?;
    let cert = verify_conservation(&v, &l, &j).map_err(|e| e.to_string())?;
    ensure(cert.verified(), || format!("residual {}", cert.residual.to_text(&spec)))?;
    Ok(!cert.divergence.is_zero())
}

fn vertical_equivalence(s: &mut Sampler, fault: Option<Fault>) -> CaseResult {
    let spec = s.bundle(2, 2);
    let l = autonomous_lagrangian(s, &spec);
    // Half the cases use a genuine symmetry, half an arbitrary projectable
    // field; L_u L and L_{u_V} L differ by a divergence either way, so the
    // classification and the residual must agree (exact may become divergence).
    let symmetric = s.chance(0.5);
    let v = if symmetric {
        translation(s, &spec)
    } else {
        s.vector_field(&spec, FieldKind::Projectable, 1)
    };
    let vv = v.vertical_part();
    let a = characteristic_check(&v, &l, None).map_err(|e| e.to_string())?;
    let b = characteristic_check(&vv, &l, None).map_err(|e| e.to_string())?;
    ensure(a.verdict.is_symmetry() == b.verdict.is_symmetry(), || {
        format!("{} vs {}", a.verdict.label(), b.verdict.label())
    })?;
    ensure(a.residual == b.residual, || "residuals differ".into())?;
    if !a.verdict.is_symmetry() {
        return Ok(!a.residual.is_zero());
    }
    let sigma_v = b.sigma.clone().ok_or("vertical part: sigma unavailable")?;
    let sigma = a.sigma.clone().ok_or("sigma unavailable")?;
    let j = current(&v, &l, &sigma, fault)?;
    let jv = noether_current(&vv, &l, &sigma_v).map_err(|e| e.to_string())?;
    for (field, cur) in [(&v, &j), (&vv, &jv), (&v, &jv)] {
        let cert = verify_conservation(field, &l, cur).map_err(|e| e.to_string())?;
        ensure(cert.verified(), || format!("residual {}", cert.residual.to_text(&spec)))?;
    }
    Ok(!b.lie_density.is_zero())
}

fn falsifiability(s: &mut Sampler, _: Option<Fault>) -> CaseResult {
    let spec = s.bundle(2, 2);
    let l = autonomous_lagrangian(s, &spec);
    let v = translation(s, &spec);
    let jets = Sampler::variables(&spec, 1, false);
    match s.range(0, 2) {
        0 => {
            // Perturbed current: one component gains a jet-dependent term.
            let mut j = noether_current(&v, &l, &vec![Expr::zero(); spec.dim()]).map_err(|e| e.to_string())?;
            let lambda = s.range(0, spec.dim() - 1);
            j.components[lambda] = &j.components[lambda] + s.nonconstant_polynomial(&jets, 2, 2);
            let cert = verify_conservation(&v, &l, &j).map_err(|e| e.to_string())?;
            ensure(!cert.verified(), || "perturbed current verified".into())?;
        }
        1 => {
            // Perturbed symmetry: add a quadratic vertical component.
            let i = s.range(0, spec.field_count() - 1);
            let y = Expr::var(Var::Jet(JetVar::new(i, spec.empty_index())));
            let extra = (&y * s.nonconstant_polynomial(&jets, 1, 1)).scale(&s.coefficient());
            let mut fibre = vec![Expr::zero(); spec.field_count()];
            fibre[i] = extra;
            let w = v.add(&GeneralizedVectorField::vertical(spec.clone(), fibre).unwrap());
            let rep = characteristic_check(&w, &l, None).map_err(|e| e.to_string())?;
            ensure(rep.verdict == Verdict::NotASymmetry, || {
                format!("perturbed field reported {}", rep.verdict.label())
            })?;
            ensure(!rep.residual.is_zero() && rep.recheck(&spec), || {
                "residual certificate".into()
            })?;
        }
        _ => {
            // Wrong σ: a correct symmetry paired with a non-closed σ.
            let mut sigma = vec![Expr::zero(); spec.dim()];
            let lambda = s.range(0, spec.dim() - 1);
            sigma[lambda] = s.nonconstant_polynomial(&jets, 2, 2);
            let j = noether_current(&v, &l, &sigma).map_err(|e| e.to_string())?;
            let cert = verify_conservation(&v, &l, &j).map_err(|e| e.to_string())?;
            ensure(!cert.verified(), || "current with wrong sigma verified".into())?;
        }
    }
    Ok(true)
}

/// Runs the Poincaré–Cartan splitting on `L` (used by callers wanting the
/// bug trap on arbitrary input).
pub fn splitting_closes(l: &Lagrangian) -> bool {
    first_variational_split(l).is_ok()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_suite_passes_briefly() {
        for s in suites() {
            let out = s.run(11, 6, None);
            assert!(out.failures == 0, "{}: {:?}", s.name, out.first_failure);
        }
    }

    #[test]
    fn faults_are_caught() {
        let expectations = [
            (Fault::ContactEvaluationSign, "first-variation"),
            (Fault::IntegrationByPartsSign, "euler-lagrange-dual"),
            (Fault::CurrentSign, "noether"),
        ];
        for (fault, name) in expectations {
            let out = suite(name).unwrap().run(3, 10, Some(fault));
            assert!(out.failures > 0, "{} not caught by {}", fault.name(), name);
        }
    }

    #[test]
    fn fault_names_round_trip() {
        for f in Fault::ALL {
            assert_eq!(Fault::from_name(f.name()), Some(f));
        }
    }
}
