use std::sync::Arc;

use jetvar_core::jetops::{euler_lagrange, invert_total_divergence, is_variationally_trivial, SourceForm};
use jetvar_core::selftest::{suites, Fault, SuiteOutcome};
use jetvar_core::symexpr::{parse, BundleSpec, Expr};
use jetvar_core::symmetry::{characteristic_check, noether_current, verify_conservation, NoetherCurrent, SigmaSource};
use thiserror::Error;

use crate::certificate::{digest, Certificate};
use crate::model::{Model, ModelError};

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Model(#[from] ModelError),

    #[error("{context}: {source}")]
    Engine {
        context: String,
        source: jetvar_core::Error,
    },

    #[error("{0}")]
    Usage(String),
}

fn engine(context: impl Into<String>) -> impl FnOnce(jetvar_core::Error) -> CliError {
    let context = context.into();
    move |source| CliError::Engine { context, source }
}

fn field_name(spec: &BundleSpec, i: usize) -> &str {
    &spec.fields()[i]
}

fn base_name(spec: &BundleSpec, d: usize) -> &str {
    &spec.base().names()[d]
}

fn push_source(cert: &mut Certificate, key: &str, spec: &BundleSpec, f: &SourceForm, residual: bool) {
    for (i, e) in f.components.iter().enumerate() {
        let k = format!("{key}[{}]", field_name(spec, i));
        if residual {
            cert.residual(k, e.to_text(spec));
        } else {
            cert.detail(k, e.to_text(spec));
        }
    }
}

fn sigma_label(s: &SigmaSource) -> String {
    match s {
        SigmaSource::Trivial => "zero".into(),
        SigmaSource::Reconstructed => "reconstructed".into(),
        SigmaSource::Supplied => "supplied".into(),
        SigmaSource::Unavailable(why) => format!("unavailable ({why})"),
        SigmaSource::NotApplicable => "not applicable".into(),
    }
}

fn model_digest(command: &str, args: &[&str], bytes: &[u8]) -> String {
    let mut parts: Vec<&[u8]> = vec![b"jetvar", command.as_bytes()];
    parts.extend(args.iter().map(|a| a.as_bytes()));
    parts.push(bytes);
    digest(&parts)
}

/// `δ_i L` for every field.
pub fn el(model: &Model, bytes: &[u8]) -> Certificate {
    let spec = &model.spec;
    let mut cert = Certificate::new("el", &model.name, model_digest("el", &[], bytes));
    cert.verdict = "derived".into();
    cert.detail("lagrangian", model.lagrangian.density().to_text(spec));
    push_source(&mut cert, "delta", spec, &euler_lagrange(&model.lagrangian), false);
    cert
}

/// Classification of a named candidate by the characteristic equation.
pub fn symmetry(model: &Model, bytes: &[u8], name: &str) -> Result<Certificate, CliError> {
    let spec = &model.spec;
    let cand = model.symmetry(name)?;
    let report = characteristic_check(&cand.field, &model.lagrangian, cand.sigma.as_deref())
        .map_err(engine(format!("symmetry {name:?}")))?;
    let mut cert = Certificate::new("symmetry", &model.name, model_digest("symmetry", &[name], bytes));
    cert.subject = Some(name.to_string());
    cert.verdict = report.verdict.label().into();
    cert.ok = report.verdict.is_symmetry();
    describe_field(&mut cert, spec, &cand.field);
    cert.detail("lie_derivative", report.lie_density.to_text(spec));
    cert.detail("sigma", sigma_label(&report.sigma_source));
    if let Some(sigma) = &report.sigma {
        for (d, s) in sigma.iter().enumerate() {
            cert.detail(format!("sigma[{}]", base_name(spec, d)), s.to_text(spec));
        }
    }
    push_source(&mut cert, "residual", spec, &report.residual, true);
    Ok(cert)
}

fn describe_field(cert: &mut Certificate, spec: &BundleSpec, v: &jetvar_core::symmetry::GeneralizedVectorField) {
    cert.detail("field", v.to_text());
    for i in 0..spec.field_count() {
        cert.detail(format!("Q[{}]", field_name(spec, i)), v.characteristic(i).to_text(spec));
    }
}

/// Noether current of a named symmetry, or of a user-supplied current, with
/// the off-shell conservation identity as certificate.
pub fn noether(
    model: &Model,
    bytes: &[u8],
    name: &str,
    check_current: Option<&[String]>,
) -> Result<Certificate, CliError> {
    let spec = &model.spec;
    let cand = model.symmetry(name)?;
    let mut args = vec![name];
    if let Some(c) = check_current {
        args.push("--check-current");
        args.extend(c.iter().map(String::as_str));
    }
    let mut cert = Certificate::new("noether", &model.name, model_digest("noether", &args, bytes));
    cert.subject = Some(name.to_string());
    describe_field(&mut cert, spec, &cand.field);

    let current = match check_current {
        Some(items) => {
            cert.detail("current", "supplied");
            supplied_current(items, spec)?
        }
        None => {
            let report = characteristic_check(&cand.field, &model.lagrangian, cand.sigma.as_deref())
                .map_err(engine(format!("symmetry {name:?}")))?;
            cert.detail("symmetry", report.verdict.label());
            cert.detail("sigma", sigma_label(&report.sigma_source));
            if !report.verdict.is_symmetry() {
                cert.verdict = "not a symmetry".into();
                cert.ok = false;
                push_source(&mut cert, "residual", spec, &report.residual, true);
                return Ok(cert);
            }
            let Some(sigma) = report.sigma else {
                cert.verdict = "current unavailable".into();
                cert.ok = false;
                return Ok(cert);
            };
            for (d, s) in sigma.iter().enumerate() {
                cert.detail(format!("sigma[{}]", base_name(spec, d)), s.to_text(spec));
            }
            noether_current(&cand.field, &model.lagrangian, &sigma).map_err(engine("noether current"))?
        }
    };
    for (d, j) in current.components.iter().enumerate() {
        cert.current(format!("J[{}]", base_name(spec, d)), j.to_text(spec));
    }
    let check = verify_conservation(&cand.field, &model.lagrangian, &current).map_err(engine("conservation"))?;
    cert.detail("divergence", check.divergence.to_text(spec));
    cert.residual("residual", check.residual.to_text(spec));
    cert.ok = check.verified();
    cert.verdict = if cert.ok { "conserved" } else { "not conserved" }.into();
    Ok(cert)
}

fn supplied_current(items: &[String], spec: &Arc<BundleSpec>) -> Result<NoetherCurrent, CliError> {
    if items.len() != spec.dim() {
        return Err(CliError::Usage(format!(
            "--check-current needs {} component(s), one per base coordinate; got {}",
            spec.dim(),
            items.len()
        )));
    }
    let components = items
        .iter()
        .enumerate()
        .map(|(k, s)| {
            parse(s, spec).map_err(|e| {
                let pos = match &e {
                    jetvar_core::Error::Parse { pos, .. } => *pos,
                    _ => 0,
                };
                CliError::Usage(format!(
                    "--check-current component {k}: {e}\n  {s}\n  {}^",
                    " ".repeat(pos)
                ))
            })
        })
        .collect::<Result<Vec<Expr>, _>>()?;
    Ok(NoetherCurrent { components })
}

/// Whether the Lagrangian is a total divergence, with `σ` when it can be
/// reconstructed.
pub fn triviality(model: &Model, bytes: &[u8]) -> Certificate {
    let spec = &model.spec;
    let l = &model.lagrangian;
    let mut cert = Certificate::new("triviality", &model.name, model_digest("triviality", &[], bytes));
    cert.detail("lagrangian", l.density().to_text(spec));
    if is_variationally_trivial(l) {
        cert.verdict = "trivial".into();
        match invert_total_divergence(l.density(), spec) {
            Ok(sigma) => {
                for (d, s) in sigma.iter().enumerate() {
                    cert.detail(format!("sigma[{}]", base_name(spec, d)), s.to_text(spec));
                }
            }
            Err(e) => cert.detail("sigma", format!("unavailable ({e})")),
        }
    } else {
        cert.verdict = "not trivial".into();
        cert.ok = false;
        push_source(&mut cert, "delta", spec, &euler_lagrange(l), true);
    }
    cert
}

pub struct SelftestRun {
    pub outcomes: Vec<SuiteOutcome>,
    pub certificates: Vec<Certificate>,
}

impl SelftestRun {
    pub fn passed(&self) -> bool {
        self.certificates.iter().all(|c| c.ok)
    }

    /// Fixed-width pass/fail matrix.
    pub fn to_text(&self, seed: u64) -> String {
        let mut out = format!(
            "{:<22} {:>6} {:>6} {:>11}  result\n",
            "suite", "cases", "fail", "nontrivial"
        );
        for o in &self.outcomes {
            out += &format!(
                "{:<22} {:>6} {:>6} {:>11}  {}\n",
                o.name,
                o.cases,
                o.failures,
                o.nontrivial,
                if o.passed() { "pass" } else { "FAIL" }
            );
            if let Some((case, msg)) = &o.first_failure {
                out += &format!("    first failure: case {case}: {msg}\n");
            }
        }
        let good = self.outcomes.iter().filter(|o| o.passed()).count();
        out += &format!("{good}/{} suites passed (seed {seed})\n", self.outcomes.len());
        out
    }
}

/// Runs the invariant suites (all, or those named in `only`) in parallel;
/// results come back in suite order.
pub fn selftest(
    seed: u64,
    cases: Option<usize>,
    fault: Option<Fault>,
    only: &[String],
) -> Result<SelftestRun, CliError> {
    let all = suites();
    for name in only {
        if !all.iter().any(|s| s.name == name) {
            let known: Vec<&str> = all.iter().map(|s| s.name).collect();
            return Err(CliError::Usage(format!(
                "unknown suite {name:?} (known: {})",
                known.join(", ")
            )));
        }
    }
    let chosen: Vec<_> = all
        .into_iter()
        .filter(|s| only.is_empty() || only.iter().any(|n| n == s.name))
        .collect();
    let outcomes: Vec<SuiteOutcome> = std::thread::scope(|scope| {
        let handles: Vec<_> = chosen
            .iter()
            .map(|s| scope.spawn(move || s.run(seed, cases.unwrap_or(s.default_cases), fault)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("suite thread panicked"))
            .collect()
    });
    let seed_text = seed.to_string();
    let fault_text = fault.map_or("none", |f| f.name());
    let certificates = chosen
        .iter()
        .zip(&outcomes)
        .map(|(s, o)| {
            let cases_text = o.cases.to_string();
            let inputs = digest(&[
                b"jetvar",
                b"selftest",
                s.name.as_bytes(),
                seed_text.as_bytes(),
                cases_text.as_bytes(),
                fault_text.as_bytes(),
            ]);
            let mut c = Certificate::new("selftest", "-", inputs);
            c.subject = Some(s.name.to_string());
            c.ok = o.passed();
            c.verdict = if c.ok { "pass" } else { "fail" }.into();
            c.detail("description", s.description);
            c.detail("seed", seed_text.clone());
            c.detail("fault", fault_text);
            c.detail("cases", cases_text);
            c.detail("failures", o.failures.to_string());
            c.detail("nontrivial", o.nontrivial.to_string());
            if let Some((case, msg)) = &o.first_failure {
                c.residual("first_failure", format!("case {case}: {msg}"));
            }
            c
        })
        .collect();
    Ok(SelftestRun { outcomes, certificates })
}
