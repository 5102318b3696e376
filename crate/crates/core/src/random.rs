//! Seeded generators of random expressions, forms, Lagrangians and vector
//! fields for the property suites.
//!
//! Everything is drawn from a [`StdRng`] seeded by the caller, so a suite run
//! is reproducible from its seed. Sizes are kept small on purpose: the
//! identities are exact, so a handful of terms exercises every sign and
//! index path while keeping the rational-function arithmetic cheap.

use std::sync::Arc;

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

use crate::contactforms::{ContactForm, Generator};
use crate::jetops::Lagrangian;
use crate::multiindex::MultiIndex;
use crate::symexpr::{BundleSpec, Expr, JetVar, Rational, Var};
use crate::symmetry::GeneralizedVectorField;

const BASE_NAMES: [&str; 2] = ["t", "x"];
const FIELD_NAMES: [&str; 2] = ["u", "v"];

/// Shape of a random vector field.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldKind {
    /// `υ^λ(x)`, `υ^i(x, y)`.
    Classical,
    /// `υ^λ = 0`, `υ^i` depending on jets.
    Vertical,
    /// `υ^λ(x)`, `υ^i` depending on jets.
    Projectable,
    /// `υ^λ` depending on jets as well.
    General,
}

pub struct Sampler {
    rng: StdRng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler {
            rng: StdRng::seed_from_u64(seed),
        }
    }

    pub fn rng(&mut self) -> &mut StdRng {
        &mut self.rng
    }

    pub fn chance(&mut self, p: f64) -> bool {
        self.rng.gen_bool(p)
    }

    pub fn range(&mut self, lo: usize, hi_inclusive: usize) -> usize {
        self.rng.gen_range(lo..=hi_inclusive)
    }

    /// A bundle with `1..=max_dim` base directions and `1..=max_fields` fields.
    pub fn bundle(&mut self, max_dim: usize, max_fields: usize) -> Arc<BundleSpec> {
        let n = self.range(1, max_dim.min(BASE_NAMES.len()));
        let m = self.range(1, max_fields.min(FIELD_NAMES.len()));
        Arc::new(BundleSpec::simple(&BASE_NAMES[..n], &FIELD_NAMES[..m]).unwrap())
    }

    /// Nonzero small rational, mostly integers.
    pub fn coefficient(&mut self) -> Rational {
        let n: i64 = *[-3, -2, -1, 1, 2, 3].choose(&mut self.rng).unwrap();
        let d: i64 = if self.chance(0.25) { 2 } else { 1 };
        Rational::new(n.into(), d.into())
    }

    /// Base coordinates followed by every jet of order `≤ order`.
    pub fn variables(spec: &BundleSpec, order: usize, with_base: bool) -> Vec<Var> {
        let mut out = Vec::new();
        if with_base {
            out.extend((0..spec.dim()).map(|d| Var::Base(d as u8)));
        }
        for i in 0..spec.field_count() {
            for index in MultiIndex::enumerate_up_to(spec.dim(), order) {
                out.push(Var::jet(i, index));
            }
        }
        out
    }

    /// Polynomial with `1..=max_terms` terms of degree `≤ max_degree` in `vars`.
    pub fn polynomial(&mut self, vars: &[Var], max_terms: usize, max_degree: usize) -> Expr {
        let terms = self.range(1, max_terms);
        let mut out = Expr::zero();
        for _ in 0..terms {
            let degree = if vars.is_empty() { 0 } else { self.range(0, max_degree) };
            let mut t = Expr::constant(self.coefficient());
            for _ in 0..degree {
                t = t * Expr::var(*vars.choose(&mut self.rng).unwrap());
            }
            out = out + t;
        }
        out
    }

    /// Non-constant polynomial (retries until some variable survives).
    pub fn nonconstant_polynomial(&mut self, vars: &[Var], max_terms: usize, max_degree: usize) -> Expr {
        assert!(!vars.is_empty() && max_degree > 0);
        loop {
            let p = self.polynomial(vars, max_terms, max_degree);
            if !p.is_constant() {
                return p;
            }
        }
    }

    /// Polynomial function on the jets of order `≤ order`, with base coordinates.
    pub fn function(&mut self, spec: &BundleSpec, order: usize) -> Expr {
        let vars = Self::variables(spec, order, true);
        self.polynomial(&vars, 3, 2)
    }

    /// A rational function `p + a / b^e` with `b` a short non-constant
    /// polynomial, `e ∈ {1, 2}`.
    pub fn rational_function(&mut self, spec: &BundleSpec, order: usize) -> Expr {
        let vars = Self::variables(spec, order, true);
        let p = self.polynomial(&vars, 2, 2);
        let a = self.polynomial(&vars, 2, 1);
        let b = self.nonconstant_polynomial(&vars, 2, 2) + Expr::one();
        let e = self.range(1, 2) as i32;
        match b.pow(e).and_then(|d| a.div(&d)) {
            Ok(f) => p + f,
            Err(_) => p,
        }
    }

    /// Polynomial Lagrangian of order exactly `order` where possible.
    pub fn lagrangian(&mut self, spec: &Arc<BundleSpec>, order: usize) -> Lagrangian {
        let vars = Self::variables(spec, order, true);
        let top: Vec<Var> = vars
            .iter()
            .copied()
            .filter(|v| v.as_jet().is_some_and(|j| j.order() == order))
            .collect();
        let mut density = self.polynomial(&vars, 3, 2);
        if !top.is_empty() {
            let lead = Expr::var(*top.choose(&mut self.rng).unwrap());
            let partner = Expr::var(*vars.choose(&mut self.rng).unwrap());
            density = density + lead * partner.scale(&self.coefficient());
        }
        Lagrangian::new(spec.clone(), density)
    }

    /// Random form of bidegree `(k, s)` with jets of order `≤ order`.
    pub fn form(&mut self, spec: &BundleSpec, order: usize, k: usize, s: usize) -> ContactForm {
        let jets: Vec<JetVar> = Self::variables(spec, order, false)
            .into_iter()
            .filter_map(|v| v.as_jet())
            .collect();
        let dirs: Vec<usize> = (0..spec.dim()).collect();
        let mut out = ContactForm::zero();
        for _ in 0..self.range(1, 3) {
            let mut gens: Vec<Generator> = jets
                .choose_multiple(&mut self.rng, k.min(jets.len()))
                .map(|j| Generator::Theta(*j))
                .collect();
            gens.extend(
                dirs.choose_multiple(&mut self.rng, s.min(dirs.len()))
                    .map(|d| Generator::Dx(*d as u8)),
            );
            gens.shuffle(&mut self.rng);
            let c = self.function(spec, order);
            out = out.add(&ContactForm::monomial(c, gens));
        }
        out
    }

    /// Random form mixing several bidegrees with `k ≤ max_k`, `s ≤ n`.
    pub fn mixed_form(&mut self, spec: &BundleSpec, order: usize, max_k: usize) -> ContactForm {
        let mut out = ContactForm::zero();
        for _ in 0..self.range(1, 2) {
            let k = self.range(0, max_k);
            let s = self.range(0, spec.dim());
            out = out.add(&self.form(spec, order, k, s));
        }
        out
    }

    /// Random field of the given shape, fibre components of jet order `≤ order`.
    pub fn vector_field(&mut self, spec: &Arc<BundleSpec>, kind: FieldKind, order: usize) -> GeneralizedVectorField {
        let base_vars: Vec<Var> = (0..spec.dim()).map(|d| Var::Base(d as u8)).collect();
        let fibre_order = if kind == FieldKind::Classical { 0 } else { order };
        let fibre_vars = Self::variables(spec, fibre_order, true);
        loop {
            let base = (0..spec.dim())
                .map(|_| match kind {
                    FieldKind::Vertical => Expr::zero(),
                    FieldKind::General => {
                        let vars = Self::variables(spec, order.min(1), true);
                        self.nonconstant_polynomial(&vars, 2, 2)
                    }
                    _ if self.chance(0.3) => Expr::zero(),
                    _ => self.polynomial(&base_vars, 2, 2),
                })
                .collect();
            let fibre = (0..spec.field_count())
                .map(|_| self.polynomial(&fibre_vars, 3, 2))
                .collect();
            let field = GeneralizedVectorField::new(spec.clone(), base, fibre).unwrap();
            // A "general" draw can land on a projectable field; redraw.
            if kind != FieldKind::General || !field.is_projectable() {
                return field;
            }
        }
    }

    /// Exact density data: `σ` (n = 1 rational, n > 1 polynomial) and `d_H σ`.
    pub fn divergence_current(&mut self, spec: &BundleSpec, order: usize) -> Vec<Expr> {
        (0..spec.dim())
            .map(|_| {
                if spec.dim() == 1 && self.chance(0.5) {
                    self.rational_function(spec, order)
                } else {
                    self.function(spec, order)
                }
            })
            .collect()
    }
}
