//! Generalized vector fields and what they do to Lagrangians.
//!
//! A field `υ = υ^λ ∂_λ + υ^i ∂_i` may have components depending on jets of
//! any order. Its prolongation is generated from the characteristic
//! `ῡ^i = υ^i - y^i_μ υ^μ` as `υ^i_Λ = d_Λ ῡ^i + y^i_{μ+Λ} υ^μ`, so the contact
//! evaluation `υ ⌋ θ^i_Λ` is exactly `d_Λ ῡ^i`.

mod noether;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Arc, RwLock};

pub use noether::{
    characteristic_check, first_variational_formula, lie_derivative_lagrangian, master_identity_check, noether_current,
    verify_conservation, ConservationCertificate, FirstVariation, MasterIdentityBranch, MasterIdentityCertificate,
    NoetherCurrent, SigmaSource, SymmetryReport, Verdict,
};

use crate::contactforms::Contraction;
use crate::error::{Error, Result};
use crate::jetops::{total_derivative, total_derivative_multi};
use crate::multiindex::MultiIndex;
use crate::symexpr::{BundleSpec, Expr, JetVar, Var};

pub struct GeneralizedVectorField {
    spec: Arc<BundleSpec>,
    base: Vec<Expr>,
    fibre: Vec<Expr>,
    /// `d_Λ ῡ^i`, filled on demand.
    characteristic_derivatives: RwLock<BTreeMap<JetVar, Expr>>,
}

impl Clone for GeneralizedVectorField {
    fn clone(&self) -> Self {
        GeneralizedVectorField {
            spec: self.spec.clone(),
            base: self.base.clone(),
            fibre: self.fibre.clone(),
            characteristic_derivatives: RwLock::new(self.cache().clone()),
        }
    }
}

impl fmt::Debug for GeneralizedVectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GeneralizedVectorField")
            .field("base", &self.base)
            .field("fibre", &self.fibre)
            .finish()
    }
}

impl PartialEq for GeneralizedVectorField {
    fn eq(&self, other: &Self) -> bool {
        self.base == other.base && self.fibre == other.fibre && self.spec == other.spec
    }
}

impl GeneralizedVectorField {
    pub fn new(spec: Arc<BundleSpec>, base: Vec<Expr>, fibre: Vec<Expr>) -> Result<Self> {
        if base.len() != spec.dim() {
            return Err(Error::DimensionMismatch {
                left: base.len(),
                right: spec.dim(),
            });
        }
        if fibre.len() != spec.field_count() {
            return Err(Error::DimensionMismatch {
                left: fibre.len(),
                right: spec.field_count(),
            });
        }
        Ok(GeneralizedVectorField {
            spec,
            base,
            fibre,
            characteristic_derivatives: RwLock::new(BTreeMap::new()),
        })
    }

    pub fn zero(spec: Arc<BundleSpec>) -> Self {
        let (n, m) = (spec.dim(), spec.field_count());
        Self::new(spec, vec![Expr::zero(); n], vec![Expr::zero(); m]).unwrap()
    }

    pub fn vertical(spec: Arc<BundleSpec>, fibre: Vec<Expr>) -> Result<Self> {
        let n = spec.dim();
        Self::new(spec, vec![Expr::zero(); n], fibre)
    }

    /// The total field `τ^μ d_μ`, i.e. `υ^μ = τ^μ`, `υ^i = y^i_μ τ^μ`.
    pub fn total(spec: Arc<BundleSpec>, tau: Vec<Expr>) -> Result<Self> {
        if tau.len() != spec.dim() {
            return Err(Error::DimensionMismatch {
                left: tau.len(),
                right: spec.dim(),
            });
        }
        let fibre = (0..spec.field_count())
            .map(|i| {
                tau.iter()
                    .enumerate()
                    .map(|(mu, t)| Expr::var(Var::Jet(spec.jet_var(i, &[mu]))) * t)
                    .sum()
            })
            .collect();
        Self::new(spec, tau, fibre)
    }

    pub fn spec(&self) -> &Arc<BundleSpec> {
        &self.spec
    }

    pub fn base_components(&self) -> &[Expr] {
        &self.base
    }

    pub fn fibre_components(&self) -> &[Expr] {
        &self.fibre
    }

    fn cache(&self) -> std::sync::RwLockReadGuard<'_, BTreeMap<JetVar, Expr>> {
        self.characteristic_derivatives
            .read()
            .unwrap_or_else(|e| e.into_inner())
    }

    /// `ῡ^i = υ^i - y^i_μ υ^μ`.
    pub fn characteristic(&self, field: usize) -> Expr {
        let mut out = self.fibre[field].clone();
        for (mu, c) in self.base.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            out = out - Expr::var(Var::Jet(self.spec.jet_var(field, &[mu]))) * c;
        }
        out
    }

    /// `d_Λ ῡ^i`, memoised along the chain `Λ ⊃ Λ - λ ⊃ … ⊃ ∅`.
    pub fn characteristic_derivative(&self, jet: JetVar) -> Expr {
        if let Some(e) = self.cache().get(&jet) {
            return e.clone();
        }
        let value = match jet.index.directions().last() {
            None => self.characteristic(jet.field()),
            Some(&d) => {
                let parent = JetVar::new(jet.field(), jet.index.minus(d).unwrap());
                total_derivative(&self.characteristic_derivative(parent), d, &self.spec)
            }
        };
        self.characteristic_derivatives
            .write()
            .unwrap_or_else(|e| e.into_inner())
            .insert(jet, value.clone());
        value
    }

    /// `υ^i_Λ = d_Λ ῡ^i + y^i_{μ+Λ} υ^μ`.
    pub fn prolonged_component(&self, jet: JetVar) -> Expr {
        let mut out = self.characteristic_derivative(jet);
        for (mu, c) in self.base.iter().enumerate() {
            if !c.is_zero() {
                out = out + Expr::var(Var::Jet(jet.raised(mu))) * c;
            }
        }
        out
    }

    /// Same as [`Self::prolonged_component`] but bypassing the cache.
    pub fn prolonged_component_uncached(&self, jet: JetVar) -> Expr {
        let mut out = total_derivative_multi(&self.characteristic(jet.field()), &jet.index, &self.spec);
        for (mu, c) in self.base.iter().enumerate() {
            out = out + Expr::var(Var::Jet(jet.raised(mu))) * c;
        }
        out
    }

    /// All `υ^i_Λ` with `|Λ| ≤ order`.
    pub fn prolong(&self, order: usize) -> BTreeMap<JetVar, Expr> {
        let mut out = BTreeMap::new();
        for field in 0..self.spec.field_count() {
            for index in MultiIndex::enumerate_up_to(self.spec.dim(), order) {
                let jet = JetVar::new(field, index);
                out.insert(jet, self.prolonged_component(jet));
            }
        }
        out
    }

    /// `(υ^λ, υ_V)`: the horizontal part acts as `υ^λ d_λ`, the vertical
    /// part has components `ῡ^i`.
    pub fn vertical_split(&self) -> (Vec<Expr>, GeneralizedVectorField) {
        let fibre = (0..self.spec.field_count()).map(|i| self.characteristic(i)).collect();
        let vertical = Self::vertical(self.spec.clone(), fibre).unwrap();
        (self.base.clone(), vertical)
    }

    pub fn vertical_part(&self) -> GeneralizedVectorField {
        self.vertical_split().1
    }

    pub fn is_vertical(&self) -> bool {
        self.base.iter().all(Expr::is_zero)
    }

    /// Base components depend on the base coordinates only.
    pub fn is_projectable(&self) -> bool {
        self.base.iter().all(|c| !self.spec.depends_on_fibre(c))
    }

    /// Projectable, and fibre components depend on `(x, y)` only.
    pub fn is_classical(&self) -> bool {
        self.is_projectable() && self.fibre.iter().all(|c| self.spec.jet_order(c) == 0)
    }

    /// Highest jet order among the components.
    pub fn jet_order(&self) -> usize {
        self.base
            .iter()
            .chain(&self.fibre)
            .map(|c| self.spec.jet_order(c))
            .max()
            .unwrap_or(0)
    }

    /// The prolonged field acting on a function.
    pub fn apply(&self, f: &Expr) -> Expr {
        let mut out = Expr::zero();
        for (d, c) in self.base.iter().enumerate() {
            if !c.is_zero() {
                out = out + c * f.partial(Var::Base(d as u8), &self.spec);
            }
        }
        for j in self.spec.jet_dependencies(f) {
            let p = f.partial(Var::Jet(j), &self.spec);
            if !p.is_zero() {
                out = out + self.prolonged_component(j) * p;
            }
        }
        out
    }

    /// `υ^λ d_λ f`.
    pub fn apply_horizontal(&self, f: &Expr) -> Expr {
        self.base
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(d, c)| c * total_derivative(f, d, &self.spec))
            .sum()
    }

    /// Component-wise sum; both fields must live on the same bundle.
    pub fn add(&self, other: &GeneralizedVectorField) -> GeneralizedVectorField {
        let base = self.base.iter().zip(&other.base).map(|(a, b)| a + b).collect();
        let fibre = self.fibre.iter().zip(&other.fibre).map(|(a, b)| a + b).collect();
        Self::new(self.spec.clone(), base, fibre).unwrap()
    }

    pub fn to_text(&self) -> String {
        let mut parts = Vec::new();
        for (d, c) in self.base.iter().enumerate() {
            if !c.is_zero() {
                parts.push(format!("({})*d/d{}", c.to_text(&self.spec), self.spec.base().name(d)));
            }
        }
        for (i, c) in self.fibre.iter().enumerate() {
            if !c.is_zero() {
                parts.push(format!("({})*d/d{}", c.to_text(&self.spec), self.spec.fields()[i]));
            }
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

/// Contraction of the prolonged field: `υ ⌋ θ^i_Λ = υ^i_Λ - y^i_{μ+Λ} υ^μ`.
impl Contraction for GeneralizedVectorField {
    fn on_dx(&self, direction: usize) -> Expr {
        self.base[direction].clone()
    }

    fn on_theta(&self, jet: JetVar) -> Expr {
        let mut out = self.prolonged_component(jet);
        for (mu, c) in self.base.iter().enumerate() {
            if !c.is_zero() {
                out = out - Expr::var(Var::Jet(jet.raised(mu))) * c;
            }
        }
        out
    }
}

/// `υ^λ d_λ` as a contraction: it annihilates every contact form.
pub(crate) struct HorizontalPart<'a>(pub &'a [Expr]);

impl Contraction for HorizontalPart<'_> {
    fn on_dx(&self, direction: usize) -> Expr {
        self.0[direction].clone()
    }

    fn on_theta(&self, _: JetVar) -> Expr {
        Expr::zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symexpr::parse;

    fn mech() -> Arc<BundleSpec> {
        Arc::new(BundleSpec::simple(&["t"], &["q"]).unwrap())
    }

    fn field(spec: &Arc<BundleSpec>, base: &[&str], fibre: &[&str]) -> GeneralizedVectorField {
        let p = |s: &&str| parse(s, spec).unwrap();
        GeneralizedVectorField::new(
            spec.clone(),
            base.iter().map(p).collect(),
            fibre.iter().map(p).collect(),
        )
        .unwrap()
    }

    #[test]
    fn prolongation_examples() {
        let s = mech();
        let qt = s.jet_var(0, &[0]);
        let scaling = field(&s, &["0"], &["q"]);
        assert_eq!(scaling.prolonged_component(qt), parse("q_t", &s).unwrap());
        let time = field(&s, &["1"], &["0"]);
        for (_, c) in time.prolong(3) {
            assert!(c.is_zero());
        }
        let boost = field(&s, &["0"], &["t"]);
        assert_eq!(boost.prolonged_component(qt), Expr::one());
        assert!(boost.prolonged_component(s.jet_var(0, &[0, 0])).is_zero());
    }

    #[test]
    fn cache_matches_regeneration() {
        let s = Arc::new(BundleSpec::simple(&["t", "x"], &["u"]).unwrap());
        let v = field(&s, &["t", "u"], &["u_x*x + u^2"]);
        let low = v.prolong(2);
        let high = v.prolong(3);
        for (j, c) in &low {
            assert_eq!(&high[j], c);
            assert_eq!(&v.prolonged_component_uncached(*j), c);
        }
    }

    #[test]
    fn vertical_split_examples() {
        let s = mech();
        let (_, vert) = field(&s, &["1"], &["0"]).vertical_split();
        assert_eq!(vert.fibre_components(), &[parse("-q_t", &s).unwrap()]);
        let v = field(&s, &["0"], &["q*q_t"]);
        let (h, vert) = v.vertical_split();
        assert!(h.iter().all(Expr::is_zero));
        assert_eq!(vert, v);
        let tau = GeneralizedVectorField::total(s.clone(), vec![parse("t*q", &s).unwrap()]).unwrap();
        assert!(tau.vertical_part().fibre_components().iter().all(Expr::is_zero));
    }

    #[test]
    fn action_splits() {
        let s = Arc::new(BundleSpec::simple(&["t", "x"], &["u", "v"]).unwrap());
        let w = field(&s, &["x", "t^2"], &["u_t*v", "x*u"]);
        let f = parse("u_x*v + t*u_tt - v^2*x", &s).unwrap();
        let lhs = w.apply(&f);
        let rhs = w.apply_horizontal(&f) + w.vertical_part().apply(&f);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn classification() {
        let s = mech();
        assert!(field(&s, &["t"], &["q*t"]).is_classical());
        assert!(!field(&s, &["t"], &["q_t"]).is_classical());
        assert!(field(&s, &["t"], &["q_t"]).is_projectable());
        assert!(!field(&s, &["q"], &["0"]).is_projectable());
        assert_eq!(field(&s, &["0"], &["q_tt"]).jet_order(), 2);
    }

    #[test]
    fn dimension_checks() {
        let s = mech();
        assert!(matches!(
            GeneralizedVectorField::new(s.clone(), vec![], vec![Expr::zero()]),
            Err(Error::DimensionMismatch { .. })
        ));
    }
}
