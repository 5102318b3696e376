//! Finite-order forms in the `{dx^λ, θ^i_Λ}` basis.
//!
//! A [`ContactForm`] is a finite sum of coefficients times wedge products of
//! generators. Generators are stored sorted (contact generators first, by
//! field and multi-index, then `dx` by direction) and the sign of the sorting
//! permutation is folded into the coefficient, so two forms are equal iff
//! their term maps are equal.
//!
//! Conventions fixed here and used by the rest of the crate:
//! * `ω = dx^0 ∧ … ∧ dx^{n-1}` and `ω_λ = ∂_λ ⌋ ω`, so `dx^μ ∧ ω_λ = δ^μ_λ ω`;
//! * `υ ⌋ θ^i_Λ = υ^i_Λ - y^i_{μ+Λ} υ^μ`, e.g. `∂_t ⌋ θ^q = -q_t`.

mod cartan;
mod print;

use std::collections::BTreeMap;

pub use cartan::{first_variational_split, source_form_to_form, PoincareCartanForm};

use crate::jetops::total_derivative;
use crate::symexpr::{BundleSpec, Expr, JetVar, Rational, Var};

/// A 1-form generator.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Generator {
    Theta(JetVar),
    Dx(u8),
}

impl Generator {
    fn is_contact(&self) -> bool {
        matches!(self, Generator::Theta(_))
    }
}

/// Wedge product of distinct generators in canonical (ascending) order.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct Wedge(Vec<Generator>);

impl Wedge {
    pub fn one() -> Self {
        Wedge(Vec::new())
    }

    /// Sorts `gens`; `None` if a generator repeats, otherwise the wedge and
    /// whether the permutation was odd.
    pub fn sorted(mut gens: Vec<Generator>) -> Option<(Wedge, bool)> {
        // Insertion sort: counting swaps gives the sign directly.
        let mut odd = false;
        for i in 1..gens.len() {
            let mut j = i;
            while j > 0 && gens[j - 1] > gens[j] {
                gens.swap(j - 1, j);
                odd = !odd;
                j -= 1;
            }
            if j > 0 && gens[j - 1] == gens[j] {
                return None;
            }
        }
        Some((Wedge(gens), odd))
    }

    pub fn generators(&self) -> &[Generator] {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn contact_degree(&self) -> usize {
        self.0.iter().filter(|g| g.is_contact()).count()
    }

    pub fn horizontal_degree(&self) -> usize {
        self.0.len() - self.contact_degree()
    }

    fn without(&self, pos: usize) -> Wedge {
        let mut g = self.0.clone();
        g.remove(pos);
        Wedge(g)
    }
}

/// What a vector field does to the generators; [`ContactForm::interior`]
/// extends it as a graded derivation.
pub trait Contraction {
    fn on_dx(&self, direction: usize) -> Expr;
    fn on_theta(&self, jet: JetVar) -> Expr;
}

/// The coordinate field `∂_λ` on the base.
#[derive(Clone, Copy, Debug)]
pub struct BaseDirection(pub usize);

impl Contraction for BaseDirection {
    fn on_dx(&self, direction: usize) -> Expr {
        if direction == self.0 {
            Expr::one()
        } else {
            Expr::zero()
        }
    }

    fn on_theta(&self, jet: JetVar) -> Expr {
        -Expr::var(Var::Jet(jet.raised(self.0)))
    }
}

/// The coordinate field `∂^Λ_i` along a jet coordinate.
#[derive(Clone, Copy, Debug)]
pub struct JetDirection(pub JetVar);

impl Contraction for JetDirection {
    fn on_dx(&self, _: usize) -> Expr {
        Expr::zero()
    }

    fn on_theta(&self, jet: JetVar) -> Expr {
        if jet == self.0 {
            Expr::one()
        } else {
            Expr::zero()
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct ContactForm {
    terms: BTreeMap<Wedge, Expr>,
}

impl ContactForm {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn scalar(f: Expr) -> Self {
        Self::term(f, Wedge::one())
    }

    pub fn term(coefficient: Expr, wedge: Wedge) -> Self {
        let mut out = Self::zero();
        out.add_term(wedge, coefficient);
        out
    }

    /// `coefficient · g_1 ∧ … ∧ g_r` for generators in any order.
    pub fn monomial(coefficient: Expr, gens: Vec<Generator>) -> Self {
        match Wedge::sorted(gens) {
            None => Self::zero(),
            Some((w, odd)) => Self::term(if odd { -coefficient } else { coefficient }, w),
        }
    }

    pub fn dx(direction: usize) -> Self {
        Self::monomial(Expr::one(), vec![Generator::Dx(direction as u8)])
    }

    pub fn theta(jet: JetVar) -> Self {
        Self::monomial(Expr::one(), vec![Generator::Theta(jet)])
    }

    /// `dy^i_Λ = θ^i_Λ + y^i_{λ+Λ} dx^λ`.
    pub fn dy(jet: JetVar, dim: usize) -> Self {
        let mut out = Self::theta(jet);
        for d in 0..dim {
            out = out.add(&Self::dx(d).scale(&Expr::var(Var::Jet(jet.raised(d)))));
        }
        out
    }

    /// `ω = dx^0 ∧ … ∧ dx^{n-1}`.
    pub fn volume(dim: usize) -> Self {
        Self::monomial(Expr::one(), (0..dim).map(|d| Generator::Dx(d as u8)).collect())
    }

    /// `ω_λ = ∂_λ ⌋ ω`.
    pub fn volume_hook(dim: usize, direction: usize) -> Self {
        Self::volume(dim).interior(&BaseDirection(direction))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Wedge, &Expr)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, wedge: &Wedge) -> Expr {
        self.terms.get(wedge).cloned().unwrap_or_default()
    }

    /// Coefficient of a monomial given by generators in any order.
    pub fn coefficient_of(&self, gens: Vec<Generator>) -> Expr {
        match Wedge::sorted(gens) {
            None => Expr::zero(),
            Some((w, odd)) => {
                let c = self.coefficient(&w);
                if odd {
                    -c
                } else {
                    c
                }
            }
        }
    }

    /// Distinct `(k, s)` bidegrees present, ascending.
    pub fn bidegrees(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<_> = self
            .terms
            .keys()
            .map(|w| (w.contact_degree(), w.horizontal_degree()))
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    fn add_term(&mut self, wedge: Wedge, c: Expr) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(wedge) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get() + &c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    fn add_signed(&mut self, gens: Vec<Generator>, c: Expr) {
        if let Some((w, odd)) = Wedge::sorted(gens) {
            self.add_term(w, if odd { -c } else { c });
        }
    }

    pub fn add(&self, other: &ContactForm) -> ContactForm {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &ContactForm) -> ContactForm {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> ContactForm {
        ContactForm {
            terms: self.terms.iter().map(|(w, c)| (w.clone(), -c)).collect(),
        }
    }

    /// Multiplication by a function.
    pub fn scale(&self, f: &Expr) -> ContactForm {
        let mut out = Self::zero();
        for (w, c) in &self.terms {
            out.add_term(w.clone(), c * f);
        }
        out
    }

    pub fn scale_rational(&self, r: &Rational) -> ContactForm {
        self.scale(&Expr::constant(r.clone()))
    }

    pub fn wedge(&self, other: &ContactForm) -> ContactForm {
        let mut out = Self::zero();
        for (wa, ca) in &self.terms {
            for (wb, cb) in &other.terms {
                let mut gens = wa.0.clone();
                gens.extend_from_slice(&wb.0);
                out.add_signed(gens, ca * cb);
            }
        }
        out
    }

    fn filter(&self, keep: impl Fn(&Wedge) -> bool) -> ContactForm {
        ContactForm {
            terms: self
                .terms
                .iter()
                .filter(|(w, _)| keep(w))
                .map(|(w, c)| (w.clone(), c.clone()))
                .collect(),
        }
    }

    /// `h_k`: the part of contact degree `k`.
    pub fn project(&self, k: usize) -> ContactForm {
        self.filter(|w| w.contact_degree() == k)
    }

    /// `h^s`: the part of horizontal degree `s`.
    pub fn horizontal_part(&self, s: usize) -> ContactForm {
        self.filter(|w| w.horizontal_degree() == s)
    }

    /// `h_0`: drops every monomial containing a contact factor.
    pub fn h0(&self) -> ContactForm {
        self.project(0)
    }

    /// The even derivation `d_λ` on forms: total derivative on
    /// coefficients, `θ^i_Λ ↦ θ^i_{λ+Λ}`, `dx ↦ 0`.
    pub fn total_derivative(&self, direction: usize, spec: &BundleSpec) -> ContactForm {
        let mut out = Self::zero();
        for (w, c) in &self.terms {
            out.add_term(w.clone(), total_derivative(c, direction, spec));
            for (pos, g) in w.0.iter().enumerate() {
                if let Generator::Theta(j) = g {
                    let mut gens = w.0.clone();
                    gens[pos] = Generator::Theta(j.raised(direction));
                    out.add_signed(gens, c.clone());
                }
            }
        }
        out
    }

    /// `d_H φ = dx^λ ∧ d_λ φ`.
    pub fn d_h(&self, spec: &BundleSpec) -> ContactForm {
        let mut out = Self::zero();
        for d in 0..spec.dim() {
            out = out.add(&Self::dx(d).wedge(&self.total_derivative(d, spec)));
        }
        out
    }

    /// `d_V φ = θ^i_Λ ∧ ∂^Λ_i φ` (`d_V` kills every generator).
    pub fn d_v(&self, spec: &BundleSpec) -> ContactForm {
        let mut out = Self::zero();
        for (w, c) in &self.terms {
            for j in spec.jet_dependencies(c) {
                let p = c.partial(Var::Jet(j), spec);
                if p.is_zero() {
                    continue;
                }
                let mut gens = vec![Generator::Theta(j)];
                gens.extend_from_slice(&w.0);
                out.add_signed(gens, p);
            }
        }
        out
    }

    /// `d = d_H + d_V`.
    pub fn d(&self, spec: &BundleSpec) -> ContactForm {
        self.d_h(spec).add(&self.d_v(spec))
    }

    /// `υ ⌋ φ`, the graded derivation of degree -1 extending `υ` on generators.
    pub fn interior(&self, v: &dyn Contraction) -> ContactForm {
        let mut out = Self::zero();
        for (w, c) in &self.terms {
            for (pos, g) in w.0.iter().enumerate() {
                let value = match *g {
                    Generator::Dx(d) => v.on_dx(d as usize),
                    Generator::Theta(j) => v.on_theta(j),
                };
                if value.is_zero() {
                    continue;
                }
                let term = c * value;
                out.add_term(w.without(pos), if pos % 2 == 1 { -term } else { term });
            }
        }
        out
    }

    /// Cartan's formula `L_υ φ = υ ⌋ dφ + d(υ ⌋ φ)`.
    pub fn lie_derivative(&self, v: &dyn Contraction, spec: &BundleSpec) -> ContactForm {
        self.d(spec).interior(v).add(&self.interior(v).d(spec))
    }

    /// The interior Euler operator `ϱ = Σ_k (1/k) ϱ̄ ∘ h_k ∘ h^n` with
    /// `ϱ̄ φ = Σ (-1)^|Λ| θ^i ∧ d_Λ(∂^Λ_i ⌋ φ)`.
    pub fn rho(&self, spec: &BundleSpec) -> ContactForm {
        let top = self.horizontal_part(spec.dim());
        let mut out = Self::zero();
        let max_k = top.terms.keys().map(Wedge::contact_degree).max().unwrap_or(0);
        for k in 1..=max_k {
            let part = top.project(k);
            if part.is_zero() {
                continue;
            }
            let weight = Rational::new(1.into(), (k as i64).into());
            out = out.add(&rho_bar(&part, spec).scale_rational(&weight));
        }
        out
    }
}

fn rho_bar(phi: &ContactForm, spec: &BundleSpec) -> ContactForm {
    let mut jets: Vec<JetVar> = phi
        .terms
        .keys()
        .flat_map(|w| w.0.iter())
        .filter_map(|g| match g {
            Generator::Theta(j) => Some(*j),
            Generator::Dx(_) => None,
        })
        .collect();
    jets.sort_unstable();
    jets.dedup();
    let mut out = ContactForm::zero();
    for j in jets {
        let mut inner = phi.interior(&JetDirection(j));
        for d in j.index.directions() {
            inner = inner.total_derivative(d, spec);
        }
        let theta = ContactForm::theta(JetVar::new(j.field(), spec.empty_index()));
        let term = theta.wedge(&inner);
        out = if j.order() % 2 == 0 {
            out.add(&term)
        } else {
            out.sub(&term)
        };
    }
    out
}

impl std::ops::Add for &ContactForm {
    type Output = ContactForm;
    fn add(self, rhs: &ContactForm) -> ContactForm {
        ContactForm::add(self, rhs)
    }
}

impl std::ops::Sub for &ContactForm {
    type Output = ContactForm;
    fn sub(self, rhs: &ContactForm) -> ContactForm {
        ContactForm::sub(self, rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symexpr::parse;

    fn mech() -> BundleSpec {
        BundleSpec::simple(&["t"], &["q"]).unwrap()
    }

    fn p(src: &str, s: &BundleSpec) -> Expr {
        parse(src, s).unwrap()
    }

    fn q(s: &BundleSpec, dirs: &[usize]) -> JetVar {
        s.jet_var(0, dirs)
    }

    #[test]
    fn wedge_signs() {
        let s = mech();
        assert!(ContactForm::dx(0).wedge(&ContactForm::dx(0)).is_zero());
        let a = ContactForm::theta(q(&s, &[]));
        let b = ContactForm::dx(0);
        assert_eq!(a.wedge(&b), b.wedge(&a).neg());
        let lhs = ContactForm::dx(0)
            .scale(&p("q", &s))
            .wedge(&ContactForm::theta(q(&s, &[0])));
        assert_eq!(
            lhs.coefficient_of(vec![Generator::Dx(0), Generator::Theta(q(&s, &[0]))]),
            p("q", &s)
        );
    }

    #[test]
    fn horizontal_differential_examples() {
        let s = mech();
        assert!(ContactForm::dx(0).d_h(&s).is_zero());
        let dtheta = ContactForm::theta(q(&s, &[])).d_h(&s);
        assert_eq!(dtheta, ContactForm::dx(0).wedge(&ContactForm::theta(q(&s, &[0]))));
        let f2 = BundleSpec::simple(&["t", "x"], &["q"]).unwrap();
        let f = ContactForm::scalar(p("q*x", &f2));
        let expect = ContactForm::dx(0)
            .scale(&p("q_t*x", &f2))
            .add(&ContactForm::dx(1).scale(&p("q_x*x + q", &f2)));
        assert_eq!(f.d_h(&f2), expect);
    }

    #[test]
    fn d_of_coordinates_is_dy() {
        let s = mech();
        let dq = ContactForm::scalar(p("q", &s)).d(&s);
        assert_eq!(dq, ContactForm::dy(q(&s, &[]), 1));
        assert_eq!(dq.h0(), ContactForm::dx(0).scale(&p("q_t", &s)));
        assert!(ContactForm::theta(q(&s, &[])).h0().is_zero());
    }

    #[test]
    fn projections() {
        let s = BundleSpec::simple(&["t", "x"], &["q"]).unwrap();
        let a = ContactForm::theta(q(&s, &[])).wedge(&ContactForm::dx(0));
        let b = ContactForm::dx(0).wedge(&ContactForm::dx(1)).scale(&p("t", &s));
        assert_eq!(a.add(&b).project(1), a);
        assert_eq!(a.add(&b).horizontal_part(2), b);
        assert_eq!(a.add(&b).bidegrees(), vec![(0, 2), (1, 1)]);
    }

    #[test]
    fn interior_examples() {
        let s = mech();
        assert_eq!(
            ContactForm::dx(0).interior(&BaseDirection(0)),
            ContactForm::scalar(Expr::one())
        );
        assert_eq!(
            ContactForm::theta(q(&s, &[])).interior(&BaseDirection(0)),
            ContactForm::scalar(p("-q_t", &s))
        );
        let w = ContactForm::volume(3);
        assert_eq!(
            w.interior(&BaseDirection(1)),
            ContactForm::monomial(Expr::int(-1), vec![Generator::Dx(0), Generator::Dx(2)])
        );
        for d in 0..3 {
            assert_eq!(ContactForm::dx(d).wedge(&ContactForm::volume_hook(3, d)), w);
        }
    }

    #[test]
    fn rho_examples() {
        let s = mech();
        let w = ContactForm::volume(1);
        let shaped = ContactForm::theta(q(&s, &[])).wedge(&w).scale(&p("q*t", &s));
        assert_eq!(shaped.rho(&s), shaped);
        let phi = ContactForm::theta(q(&s, &[0])).wedge(&w).scale(&p("q_t", &s));
        let expect = ContactForm::theta(q(&s, &[])).wedge(&w).scale(&p("-q_tt", &s));
        assert_eq!(phi.rho(&s), expect);
        let xi = ContactForm::theta(q(&s, &[])).scale(&p("q*q_t", &s));
        assert!(xi.d_h(&s).rho(&s).is_zero());
    }

    #[test]
    fn rho_two_contact_factors_idempotent() {
        let s = BundleSpec::simple(&["t"], &["q", "r"]).unwrap();
        let phi = ContactForm::theta(s.jet_var(0, &[0]))
            .wedge(&ContactForm::theta(s.jet_var(1, &[0, 0])))
            .wedge(&ContactForm::volume(1))
            .scale(&p("q*r_t", &s));
        let once = phi.rho(&s);
        assert!(!once.is_zero());
        assert_eq!(once.rho(&s), once);
    }

    #[test]
    fn nilpotency_in_mechanics() {
        let s = mech();
        let f = ContactForm::scalar(p("q^2*q_t + t*q_tt", &s)).add(&ContactForm::theta(q(&s, &[0])).scale(&p("q", &s)));
        assert!(f.d_h(&s).d_h(&s).is_zero());
        assert!(f.d_v(&s).d_v(&s).is_zero());
        assert!(f.d_h(&s).d_v(&s).add(&f.d_v(&s).d_h(&s)).is_zero());
        assert!(f.d(&s).d(&s).is_zero());
    }
}
