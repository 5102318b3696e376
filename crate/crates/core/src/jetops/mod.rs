//! Total derivatives, the Euler–Lagrange operator and variational
//! triviality.

mod integrate;
mod inversion;

use std::sync::Arc;

pub use integrate::antiderivative;
pub use inversion::invert_total_divergence;

use crate::multiindex::MultiIndex;
use crate::symexpr::{BundleSpec, Expr, JetVar, Var};

/// `d_λ e = ∂_λ e + Σ y^i_{λ+Λ} ∂^Λ_i e`, including the jets reached
/// through atom dependencies.
pub fn total_derivative(e: &Expr, direction: usize, spec: &BundleSpec) -> Expr {
    let mut out = e.partial(Var::Base(direction as u8), spec);
    for j in spec.jet_dependencies(e) {
        let d = e.partial(Var::Jet(j), spec);
        if d.is_zero() {
            continue;
        }
        out = out + Expr::var(Var::Jet(j.raised(direction))) * d;
    }
    out
}

/// `d_Λ e`, applied one direction at a time (the result does not depend on
/// the order).
pub fn total_derivative_multi(e: &Expr, index: &MultiIndex, spec: &BundleSpec) -> Expr {
    index
        .directions()
        .into_iter()
        .fold(e.clone(), |acc, d| total_derivative(&acc, d, spec))
}

/// Horizontal density `𝓛 ω` of finite order.
#[derive(Clone, Debug, PartialEq)]
pub struct Lagrangian {
    spec: Arc<BundleSpec>,
    density: Expr,
    order: usize,
}

impl Lagrangian {
    pub fn new(spec: Arc<BundleSpec>, density: Expr) -> Self {
        let order = spec.jet_order(&density);
        Lagrangian { spec, density, order }
    }

    pub fn spec(&self) -> &Arc<BundleSpec> {
        &self.spec
    }

    pub fn density(&self) -> &Expr {
        &self.density
    }

    pub fn order(&self) -> usize {
        self.order
    }
}

/// Components `δ_i 𝓛` of a source form `δ_i 𝓛 θ^i ∧ ω`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SourceForm {
    pub components: Vec<Expr>,
}

impl SourceForm {
    pub fn zero(fields: usize) -> Self {
        SourceForm {
            components: vec![Expr::zero(); fields],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(Expr::is_zero)
    }

    pub fn sub(&self, other: &SourceForm) -> SourceForm {
        SourceForm {
            components: self
                .components
                .iter()
                .zip(&other.components)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

/// `δ_i 𝓛 = Σ_Λ (-1)^|Λ| d_Λ ∂^Λ_i 𝓛` for every field.
pub fn euler_lagrange(lagrangian: &Lagrangian) -> SourceForm {
    euler_lagrange_density(lagrangian.density(), lagrangian.spec())
}

pub fn euler_lagrange_density(density: &Expr, spec: &BundleSpec) -> SourceForm {
    let deps = spec.jet_dependencies(density);
    let components = (0..spec.field_count())
        .map(|field| euler_component(density, field, &deps, spec))
        .collect();
    SourceForm { components }
}

fn euler_component(density: &Expr, field: usize, deps: &std::collections::BTreeSet<JetVar>, spec: &BundleSpec) -> Expr {
    let mut out = Expr::zero();
    for j in deps.iter().filter(|j| j.field() == field) {
        let d = density.partial(Var::Jet(*j), spec);
        if d.is_zero() {
            continue;
        }
        let term = total_derivative_multi(&d, &j.index, spec);
        out = if j.order() % 2 == 0 { out + term } else { out - term };
    }
    out
}

/// `true` iff the Euler–Lagrange form vanishes identically.
pub fn is_variationally_trivial(lagrangian: &Lagrangian) -> bool {
    euler_lagrange(lagrangian).is_zero()
}

/// `Σ_λ d_λ σ^λ`.
pub fn total_divergence(components: &[Expr], spec: &BundleSpec) -> Expr {
    components
        .iter()
        .enumerate()
        .map(|(d, c)| total_derivative(c, d, spec))
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symexpr::parse;

    fn mech() -> Arc<BundleSpec> {
        Arc::new(BundleSpec::simple(&["t"], &["q"]).unwrap())
    }

    fn field2() -> Arc<BundleSpec> {
        Arc::new(BundleSpec::simple(&["t", "x"], &["u"]).unwrap())
    }

    fn p(src: &str, spec: &BundleSpec) -> Expr {
        parse(src, spec).unwrap()
    }

    #[test]
    fn total_derivative_examples() {
        let s = mech();
        assert_eq!(total_derivative(&p("q", &s), 0, &s), p("q_t", &s));
        assert_eq!(total_derivative(&p("q_t^2/2", &s), 0, &s), p("q_t*q_tt", &s));
        assert_eq!(total_derivative(&p("t*q", &s), 0, &s), p("q + t*q_t", &s));
        let f = field2();
        let u = p("u", &f);
        let lhs = total_derivative(&total_derivative(&u, 0, &f), 1, &f);
        let rhs = total_derivative(&total_derivative(&u, 1, &f), 0, &f);
        assert!((lhs - rhs).is_zero());
    }

    #[test]
    fn total_derivative_through_atoms() {
        let mut spec = BundleSpec::simple(&["t"], &["q1", "q2"]).unwrap();
        let r = spec.declare_atom("r_inv", "").unwrap();
        let d1 = parse("-q1*r_inv^3", &spec).unwrap();
        let d2 = parse("-q2*r_inv^3", &spec).unwrap();
        spec.set_atom_rule(r, Var::jet(0, spec.empty_index()), d1).unwrap();
        spec.set_atom_rule(r, Var::jet(1, spec.empty_index()), d2).unwrap();
        let got = total_derivative(&p("r_inv", &spec), 0, &spec);
        assert_eq!(got, p("-(q1*q1_t + q2*q2_t)*r_inv^3", &spec));
    }

    #[test]
    fn multi_examples() {
        let s = mech();
        let tt = MultiIndex::from_directions(1, &[0, 0]);
        assert_eq!(total_derivative_multi(&p("q", &s), &tt, &s), p("q_tt", &s));
        let e = p("q*q_t + t", &s);
        assert_eq!(total_derivative_multi(&e, &MultiIndex::empty(1), &s), e);

        // Both orders of d_t d_x on u^2, against the hand expansion.
        let f = field2();
        let u2 = p("u^2", &f);
        let tx = total_derivative(&total_derivative(&u2, 1, &f), 0, &f);
        let xt = total_derivative(&total_derivative(&u2, 0, &f), 1, &f);
        let expect = p("2*u*u_tx + 2*u_t*u_x", &f);
        assert_eq!(tx, expect);
        assert_eq!(xt, expect);
        assert_eq!(
            total_derivative_multi(&u2, &MultiIndex::from_directions(2, &[0, 1]), &f),
            expect
        );
    }

    #[test]
    fn euler_lagrange_examples() {
        let s = mech();
        let osc = Lagrangian::new(s.clone(), p("q_t^2/2 - q^2/2", &s));
        assert_eq!(euler_lagrange(&osc).components, vec![p("-q_tt - q", &s)]);

        let exact = Lagrangian::new(s.clone(), total_derivative(&p("q^2", &s), 0, &s));
        assert!(euler_lagrange(&exact).is_zero());

        let spec = Arc::new(BundleSpec::simple(&["t", "x"], &["phi"]).unwrap());
        let kdv = Lagrangian::new(spec.clone(), p("-1/2*phi_x*phi_t - phi_x^3 + 1/2*phi_xx^2", &spec));
        assert_eq!(
            euler_lagrange(&kdv).components,
            vec![p("phi_tx + 6*phi_x*phi_xx + phi_xxxx", &spec)]
        );
        assert_eq!(kdv.order(), 2);
    }

    #[test]
    fn zero_lagrangian() {
        let s = mech();
        let l = Lagrangian::new(s, Expr::zero());
        assert!(euler_lagrange(&l).is_zero());
        assert!(is_variationally_trivial(&l));
    }

    #[test]
    fn triviality_examples() {
        let s = mech();
        assert!(is_variationally_trivial(&Lagrangian::new(s.clone(), p("q_t*q_tt", &s))));
        let free = Lagrangian::new(s.clone(), p("q_t^2", &s));
        assert!(!is_variationally_trivial(&free));
        assert_eq!(euler_lagrange(&free).components, vec![p("-2*q_tt", &s)]);
        let f = field2();
        assert!(is_variationally_trivial(&Lagrangian::new(
            f.clone(),
            p("u_t*u_x - u_x*u_t", &f)
        )));
    }
}
