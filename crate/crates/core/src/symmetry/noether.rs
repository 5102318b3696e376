use crate::contactforms::{first_variational_split, source_form_to_form, ContactForm, Generator};
use crate::error::{Error, Result};
use crate::jetops::{
    euler_lagrange, euler_lagrange_density, invert_total_divergence, total_derivative_multi, total_divergence,
    Lagrangian, SourceForm,
};
use crate::symexpr::{BundleSpec, Expr, JetVar, Var};

use super::{GeneralizedVectorField, HorizontalPart};

fn check_spec(v: &GeneralizedVectorField, l: &Lagrangian) -> Result<()> {
    if v.spec() == l.spec() {
        Ok(())
    } else {
        Err(Error::InvalidSpec(
            "vector field and Lagrangian live on different bundles".into(),
        ))
    }
}

fn lagrangian_form(l: &Lagrangian) -> ContactForm {
    ContactForm::scalar(l.density().clone()).wedge(&ContactForm::volume(l.spec().dim()))
}

/// `L_υ(𝓛ω)` by Cartan's formula, cross-checked against
/// `υ_V ⌋ dL + d_H(υ_H ⌋ L) + 𝓛 d_V(υ_H ⌋ ω)`.
pub fn lie_derivative_lagrangian(v: &GeneralizedVectorField, l: &Lagrangian) -> Result<ContactForm> {
    check_spec(v, l)?;
    let spec = l.spec();
    let big_l = lagrangian_form(l);
    let cartan = big_l.lie_derivative(v, spec);
    let (tau, vertical) = v.vertical_split();
    let horizontal = HorizontalPart(&tau);
    let split = big_l
        .d(spec)
        .interior(&vertical)
        .add(&big_l.interior(&horizontal).d_h(spec))
        .add(&gauge_term(l, &tau));
    if cartan != split {
        return Err(Error::InternalInconsistency(
            "Lie derivative of the Lagrangian: Cartan and split forms differ".into(),
        ));
    }
    Ok(cartan)
}

/// `𝓛 d_V(υ_H ⌋ ω)`, nonzero only for non-projectable fields.
fn gauge_term(l: &Lagrangian, tau: &[Expr]) -> ContactForm {
    let spec = l.spec();
    let hook = ContactForm::volume(spec.dim()).interior(&HorizontalPart(tau));
    hook.d_v(spec).scale(l.density())
}

/// The three pieces of the first variational formula and the Lie
/// derivative they add up to.
#[derive(Clone, Debug, PartialEq)]
pub struct FirstVariation {
    /// `υ_V ⌋ δL`.
    pub source_term: ContactForm,
    /// `d_H(h_0(υ ⌋ Ξ_L))`.
    pub boundary_term: ContactForm,
    /// `𝓛 d_V(υ_H ⌋ ω)`.
    pub gauge_term: ContactForm,
    pub lie_derivative: ContactForm,
}

impl FirstVariation {
    pub fn sum(&self) -> ContactForm {
        self.source_term.add(&self.boundary_term).add(&self.gauge_term)
    }
}

pub fn first_variational_formula(v: &GeneralizedVectorField, l: &Lagrangian) -> Result<FirstVariation> {
    let lie = lie_derivative_lagrangian(v, l)?;
    let spec = l.spec();
    let (delta, xi) = first_variational_split(l)?;
    let (tau, vertical) = v.vertical_split();
    let out = FirstVariation {
        source_term: source_form_to_form(&delta, spec).interior(&vertical),
        boundary_term: xi.form().interior(v).h0().d_h(spec),
        gauge_term: gauge_term(l, &tau),
        lie_derivative: lie,
    };
    if out.sum() != out.lie_derivative {
        return Err(Error::InternalInconsistency(
            "first variational formula does not add up to the Lie derivative".into(),
        ));
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    ExactSymmetry,
    DivergenceSymmetry,
    NotASymmetry,
}

impl Verdict {
    pub fn label(&self) -> &'static str {
        match self {
            Verdict::ExactSymmetry => "exact symmetry",
            Verdict::DivergenceSymmetry => "divergence symmetry",
            Verdict::NotASymmetry => "not a symmetry",
        }
    }

    pub fn is_symmetry(&self) -> bool {
        !matches!(self, Verdict::NotASymmetry)
    }
}

/// Where the `σ` of a report came from.
#[derive(Clone, Debug, PartialEq)]
pub enum SigmaSource {
    /// Exact symmetries: `σ = 0`.
    Trivial,
    Reconstructed,
    Supplied,
    /// Divergence symmetry whose `σ` lies outside the inversion fragment.
    Unavailable(String),
    NotApplicable,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SymmetryReport {
    pub verdict: Verdict,
    /// `h` with `L_υ L = h ω`.
    pub lie_density: Expr,
    pub sigma: Option<Vec<Expr>>,
    pub sigma_source: SigmaSource,
    /// `δ(h)`; zero for symmetries.
    pub residual: SourceForm,
}

impl SymmetryReport {
    /// Recomputes the certificate from the stored fields.
    pub fn recheck(&self, spec: &BundleSpec) -> bool {
        let el = euler_lagrange_density(&self.lie_density, spec);
        let sigma_ok = self
            .sigma
            .as_ref()
            .is_none_or(|s| total_divergence(s, spec) == self.lie_density);
        match self.verdict {
            Verdict::ExactSymmetry => self.lie_density.is_zero() && sigma_ok,
            Verdict::DivergenceSymmetry => !self.lie_density.is_zero() && el.is_zero() && sigma_ok,
            Verdict::NotASymmetry => !el.is_zero() && el == self.residual,
        }
    }
}

/// Decides `δ(L_υ L) = 0` for a projectable field. A supplied `σ` is
/// checked against `d_H σ = L_υ L`; otherwise `σ` is reconstructed when the
/// inversion fragment allows it.
pub fn characteristic_check(
    v: &GeneralizedVectorField,
    l: &Lagrangian,
    sigma: Option<&[Expr]>,
) -> Result<SymmetryReport> {
    if !v.is_projectable() {
        return Err(Error::NotProjectable);
    }
    let spec = l.spec();
    let lie = lie_derivative_lagrangian(v, l)?;
    let h = lie
        .density_coefficient(spec)
        .ok_or_else(|| Error::InternalInconsistency("Lie derivative of a projectable field is not a density".into()))?;
    if let Some(s) = sigma {
        if s.len() != spec.dim() {
            return Err(Error::DimensionMismatch {
                left: s.len(),
                right: spec.dim(),
            });
        }
    }
    let residual = euler_lagrange_density(&h, spec);
    if !residual.is_zero() {
        return Ok(SymmetryReport {
            verdict: Verdict::NotASymmetry,
            lie_density: h,
            sigma: None,
            sigma_source: SigmaSource::NotApplicable,
            residual,
        });
    }
    let verdict = if h.is_zero() {
        Verdict::ExactSymmetry
    } else {
        Verdict::DivergenceSymmetry
    };
    let (sigma, source) = match sigma {
        Some(s) => {
            if total_divergence(s, spec) != h {
                return Err(Error::InvalidSpec(
                    "supplied sigma does not satisfy d_H sigma = L_v L".into(),
                ));
            }
            (Some(s.to_vec()), SigmaSource::Supplied)
        }
        None if h.is_zero() => (Some(vec![Expr::zero(); spec.dim()]), SigmaSource::Trivial),
        None => match invert_total_divergence(&h, spec) {
            Ok(s) => (Some(s), SigmaSource::Reconstructed),
            Err(Error::UnsupportedFragment(why)) => (None, SigmaSource::Unavailable(why)),
            Err(e) => return Err(e),
        },
    };
    Ok(SymmetryReport {
        verdict,
        lie_density: h,
        sigma,
        sigma_source: source,
        residual,
    })
}

/// Components `J^λ` of the horizontal form `J^λ ω_λ`.
#[derive(Clone, Debug, PartialEq)]
pub struct NoetherCurrent {
    pub components: Vec<Expr>,
}

impl NoetherCurrent {
    pub fn to_form(&self) -> ContactForm {
        ContactForm::from_hook_components(&self.components)
    }

    pub fn divergence(&self, spec: &BundleSpec) -> Expr {
        total_divergence(&self.components, spec)
    }
}

/// `J = h_0(υ ⌋ Ξ_L) - σ`.
pub fn noether_current(v: &GeneralizedVectorField, l: &Lagrangian, sigma: &[Expr]) -> Result<NoetherCurrent> {
    check_spec(v, l)?;
    let spec = l.spec();
    if sigma.len() != spec.dim() {
        return Err(Error::DimensionMismatch {
            left: sigma.len(),
            right: spec.dim(),
        });
    }
    let (_, xi) = first_variational_split(l)?;
    let hooked = xi.form().interior(v).h0();
    let components = hooked.hook_components(spec).ok_or_else(|| {
        Error::InternalInconsistency("h0 of the contracted Poincaré–Cartan form has the wrong shape".into())
    })?;
    Ok(NoetherCurrent {
        components: components.iter().zip(sigma).map(|(j, s)| j - s).collect(),
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConservationCertificate {
    /// `Σ d_λ J^λ`.
    pub divergence: Expr,
    /// `ῡ^i δ_i 𝓛`.
    pub source_term: Expr,
    /// `Σ d_λ J^λ + ῡ^i δ_i 𝓛`.
    pub residual: Expr,
}

impl ConservationCertificate {
    pub fn verified(&self) -> bool {
        self.residual.is_zero()
    }
}

/// Checks `Σ d_λ J^λ + ῡ^i δ_i 𝓛 = 0` off shell.
pub fn verify_conservation(
    v: &GeneralizedVectorField,
    l: &Lagrangian,
    current: &NoetherCurrent,
) -> Result<ConservationCertificate> {
    check_spec(v, l)?;
    let spec = l.spec();
    if current.components.len() != spec.dim() {
        return Err(Error::DimensionMismatch {
            left: current.components.len(),
            right: spec.dim(),
        });
    }
    let delta = euler_lagrange(l);
    let source_term: Expr = delta
        .components
        .iter()
        .enumerate()
        .map(|(i, e)| v.characteristic(i) * e)
        .sum();
    let divergence = current.divergence(spec);
    let residual = &divergence + &source_term;
    Ok(ConservationCertificate {
        divergence,
        source_term,
        residual,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MasterIdentityBranch {
    /// `δ(L_u L) = L_u δL` for a classical field.
    Classical,
    /// `δ(L_υ L) = π_0(L_{υ_V} δL) + Σ_{|Λ|>0} (-1)^|Λ| d_Λ(∂^Λ_k ῡ^i δ_i𝓛) θ^k ∧ ω`.
    Generalized,
}

#[derive(Clone, Debug, PartialEq)]
pub struct IdentitySides {
    pub branch: MasterIdentityBranch,
    pub lhs: ContactForm,
    pub rhs: ContactForm,
    pub difference: ContactForm,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MasterIdentityCertificate {
    /// Present for every projectable field.
    pub generalized: IdentitySides,
    /// Present for classical fields only.
    pub classical: Option<IdentitySides>,
}

impl MasterIdentityCertificate {
    pub fn holds(&self) -> bool {
        self.generalized.difference.is_zero() && self.classical.as_ref().is_none_or(|c| c.difference.is_zero())
    }
}

/// Both sides of the master identity. The left side is `δ(L_υ L)`; for a
/// classical field it is compared with the full Lie derivative of the source
/// form, and for any projectable field with the contact-corrected relation
/// built from the vertical part.
pub fn master_identity_check(v: &GeneralizedVectorField, l: &Lagrangian) -> Result<MasterIdentityCertificate> {
    if !v.is_projectable() {
        return Err(Error::NotProjectable);
    }
    let spec = l.spec();
    let omega = ContactForm::volume(spec.dim());
    let lie = lie_derivative_lagrangian(v, l)?;
    let lhs = lie.d(spec).rho(spec);
    let delta = source_form_to_form(&euler_lagrange(l), spec);

    let vertical = v.vertical_part();
    let mut rhs = keep_undifferentiated(&delta.lie_derivative(&vertical, spec));
    for k in 0..spec.field_count() {
        let theta = ContactForm::theta(JetVar::new(k, spec.empty_index())).wedge(&omega);
        let mut jets: Vec<JetVar> = (0..spec.field_count())
            .flat_map(|i| spec.jet_dependencies(&vertical.fibre_components()[i]))
            .filter(|j| j.field() == k && j.order() > 0)
            .collect();
        jets.sort_unstable();
        jets.dedup();
        for j in jets {
            let inner: Expr = vertical
                .fibre_components()
                .iter()
                .zip(&euler_lagrange(l).components)
                .map(|(u, e)| u.partial(Var::Jet(j), spec) * e)
                .sum();
            let term = total_derivative_multi(&inner, &j.index, spec);
            let signed = if j.order() % 2 == 0 { term } else { -term };
            rhs = rhs.add(&theta.scale(&signed));
        }
    }
    let generalized = IdentitySides {
        branch: MasterIdentityBranch::Generalized,
        difference: lhs.sub(&rhs),
        lhs: lhs.clone(),
        rhs,
    };

    let classical = v.is_classical().then(|| {
        let rhs = delta.lie_derivative(v, spec);
        IdentitySides {
            branch: MasterIdentityBranch::Classical,
            difference: lhs.sub(&rhs),
            lhs,
            rhs,
        }
    });
    Ok(MasterIdentityCertificate { generalized, classical })
}

/// `π_0`: keeps monomials whose contact factors are all undifferentiated.
fn keep_undifferentiated(form: &ContactForm) -> ContactForm {
    let mut out = ContactForm::zero();
    for (w, c) in form.terms() {
        let plain = w.generators().iter().all(|g| match g {
            Generator::Theta(j) => j.index.is_empty(),
            Generator::Dx(_) => true,
        });
        if plain {
            out = out.add(&ContactForm::term(c.clone(), w.clone()));
        }
    }
    out
}
