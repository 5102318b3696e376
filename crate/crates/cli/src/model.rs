//! Model files: a TOML document naming the coordinates, atoms, the
//! Lagrangian density and a list of candidate symmetries.
//!
//! ```toml
//! name = "kepler_2d"
//! base = ["t"]
//! fields = ["q1", "q2"]
//! lagrangian = "(q1_t^2 + q2_t^2)/2 + r_inv"
//!
//! [[atoms]]
//! name = "r_inv"
//! description = "1/|q|"
//! rules = { q1 = "-q1*r_inv^3", q2 = "-q2*r_inv^3" }
//!
//! [[symmetries]]
//! name = "rotation"
//! base = ["0"]
//! fibre = ["-q2", "q1"]
//! ```
//!
//! `sigma` (one string per base direction) may be given on a symmetry to
//! check an externally derived current instead of reconstructing it.

use std::collections::BTreeMap;
use std::ops::Range;
use std::path::Path;
use std::sync::Arc;

use jetvar_core::jetops::Lagrangian;
use jetvar_core::multiindex::BaseSpec;
use jetvar_core::symexpr::{parse, BundleSpec, Expr, Var};
use jetvar_core::symmetry::GeneralizedVectorField;
use serde::Deserialize;
use thiserror::Error;
use toml::Spanned;

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },

    #[error("{file}: {message}")]
    Syntax { file: String, message: String },

    #[error("{file}:{line}:{column}: in {context}: {message}\n{snippet}")]
    Expression {
        file: String,
        line: usize,
        column: usize,
        context: String,
        message: String,
        snippet: String,
    },

    #[error("{file}: {message}")]
    Invalid { file: String, message: String },

    #[error("no symmetry named {name:?} (available: {available})")]
    UnknownSymmetry { name: String, available: String },
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawModel {
    name: Option<String>,
    #[serde(default)]
    description: String,
    base: Vec<String>,
    fields: Vec<String>,
    #[serde(default)]
    atoms: Vec<RawAtom>,
    lagrangian: Spanned<String>,
    #[serde(default)]
    symmetries: Vec<RawSymmetry>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAtom {
    name: String,
    #[serde(default)]
    description: String,
    #[serde(default)]
    rules: BTreeMap<String, Spanned<String>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSymmetry {
    name: String,
    #[serde(default)]
    description: String,
    base: Vec<Spanned<String>>,
    fibre: Vec<Spanned<String>>,
    sigma: Option<Vec<Spanned<String>>>,
}

/// A named candidate symmetry.
#[derive(Clone, Debug)]
pub struct Candidate {
    pub name: String,
    pub description: String,
    pub field: GeneralizedVectorField,
    pub sigma: Option<Vec<Expr>>,
}

#[derive(Clone, Debug)]
pub struct Model {
    pub name: String,
    pub description: String,
    pub spec: Arc<BundleSpec>,
    pub lagrangian: Lagrangian,
    pub symmetries: Vec<Candidate>,
}

impl Model {
    pub fn load(path: &Path) -> Result<(Model, Vec<u8>), ModelError> {
        let bytes = std::fs::read(path).map_err(|source| ModelError::Io {
            path: path.display().to_string(),
            source,
        })?;
        let file = path.display().to_string();
        let src = String::from_utf8(bytes.clone()).map_err(|_| ModelError::Syntax {
            file: file.clone(),
            message: "model file is not valid UTF-8".into(),
        })?;
        let stem = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
        let model = Model::parse(&src, &file, &stem)?;
        Ok((model, bytes))
    }

    /// Parses model source; `file` is only used in messages.
    pub fn parse(src: &str, file: &str, default_name: &str) -> Result<Model, ModelError> {
        let raw: RawModel = toml::from_str(src).map_err(|e| ModelError::Syntax {
            file: file.to_string(),
            message: e.to_string().trim_end().to_string(),
        })?;
        let ctx = Context { src, file };
        let invalid = |message: String| ModelError::Invalid {
            file: file.to_string(),
            message,
        };

        let base = BaseSpec::new(raw.base.iter().map(String::as_str)).map_err(|e| invalid(e.to_string()))?;
        let mut spec = BundleSpec::new(base, raw.fields.iter().cloned()).map_err(|e| invalid(e.to_string()))?;
        // Declare every atom before parsing rules: rules may mention any atom.
        let ids = raw
            .atoms
            .iter()
            .map(|a| spec.declare_atom(&a.name, &a.description))
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| invalid(e.to_string()))?;
        for (atom, id) in raw.atoms.iter().zip(ids) {
            for (var_name, rule) in &atom.rules {
                let context = format!("rule d({})/d({var_name})", atom.name);
                let v = variable(&spec, var_name)
                    .ok_or_else(|| invalid(format!("{context}: {var_name:?} is not a coordinate")))?;
                let e = ctx.expr(rule, &spec, &context)?;
                spec.set_atom_rule(id, v, e)
                    .map_err(|e| invalid(format!("{context}: {e}")))?;
            }
        }
        spec.validate_atoms().map_err(|e| invalid(e.to_string()))?;
        let spec = Arc::new(spec);

        let density = ctx.expr(&raw.lagrangian, &spec, "lagrangian")?;
        let lagrangian = Lagrangian::new(spec.clone(), density);

        let mut symmetries: Vec<Candidate> = Vec::new();
        for s in &raw.symmetries {
            if symmetries.iter().any(|c| c.name == s.name) {
                return Err(invalid(format!("duplicate symmetry {:?}", s.name)));
            }
            let list = |items: &[Spanned<String>], part: &str| {
                items
                    .iter()
                    .enumerate()
                    .map(|(k, item)| ctx.expr(item, &spec, &format!("symmetry {:?} {part}[{k}]", s.name)))
                    .collect::<Result<Vec<_>, _>>()
            };
            let base = list(&s.base, "base")?;
            let fibre = list(&s.fibre, "fibre")?;
            if base.len() != spec.dim() || fibre.len() != spec.field_count() {
                return Err(invalid(format!(
                    "symmetry {:?}: expected {} base and {} fibre components, found {} and {}",
                    s.name,
                    spec.dim(),
                    spec.field_count(),
                    base.len(),
                    fibre.len()
                )));
            }
            let sigma = match &s.sigma {
                Some(items) => {
                    let sigma = list(items, "sigma")?;
                    if sigma.len() != spec.dim() {
                        return Err(invalid(format!(
                            "symmetry {:?}: sigma needs {} components, found {}",
                            s.name,
                            spec.dim(),
                            sigma.len()
                        )));
                    }
                    Some(sigma)
                }
                None => None,
            };
            let field = GeneralizedVectorField::new(spec.clone(), base, fibre)
                .map_err(|e| invalid(format!("symmetry {:?}: {e}", s.name)))?;
            symmetries.push(Candidate {
                name: s.name.clone(),
                description: s.description.clone(),
                field,
                sigma,
            });
        }

        Ok(Model {
            name: raw.name.unwrap_or_else(|| default_name.to_string()),
            description: raw.description,
            spec,
            lagrangian,
            symmetries,
        })
    }

    pub fn symmetry(&self, name: &str) -> Result<&Candidate, ModelError> {
        self.symmetries
            .iter()
            .find(|c| c.name == name)
            .ok_or_else(|| ModelError::UnknownSymmetry {
                name: name.to_string(),
                available: if self.symmetries.is_empty() {
                    "none".into()
                } else {
                    self.symmetries
                        .iter()
                        .map(|c| c.name.as_str())
                        .collect::<Vec<_>>()
                        .join(", ")
                },
            })
    }
}

/// Resolves a coordinate name (`t`, `q`, `q_t`, `q[t,x]`) to a variable.
fn variable(spec: &BundleSpec, name: &str) -> Option<Var> {
    let e = parse(name, spec).ok()?;
    let vars = e.vars();
    let v = *vars.iter().next()?;
    (vars.len() == 1 && e == Expr::var(v) && !matches!(v, Var::Atom(_))).then_some(v)
}

struct Context<'a> {
    src: &'a str,
    file: &'a str,
}

impl Context<'_> {
    fn expr(&self, item: &Spanned<String>, spec: &BundleSpec, context: &str) -> Result<Expr, ModelError> {
        parse(item.get_ref(), spec).map_err(|e| {
            let (pos, message) = match e {
                jetvar_core::Error::Parse { pos, message } => (pos, message),
                other => (0, other.to_string()),
            };
            self.located(item.span(), item.get_ref(), pos, context, message)
        })
    }

    /// Maps a byte offset inside a string value back to a file position.
    /// Exact for single-line strings without escapes, which is what models
    /// contain; anything else falls back to the opening quote.
    fn located(&self, span: Range<usize>, value: &str, pos: usize, context: &str, message: String) -> ModelError {
        let raw = &self.src[span.clone()];
        let literal = raw.len() == value.len() + 2 && &raw[1..raw.len() - 1] == value;
        let offset = if literal { span.start + 1 + pos } else { span.start };
        let line_start = self.src[..offset].rfind('\n').map_or(0, |i| i + 1);
        let line_end = self.src[offset..].find('\n').map_or(self.src.len(), |i| offset + i);
        let line = self.src[..offset].matches('\n').count() + 1;
        let column = self.src[line_start..offset].chars().count() + 1;
        let text = &self.src[line_start..line_end];
        let snippet = format!("  {text}\n  {}^", " ".repeat(column - 1));
        ModelError::Expression {
            file: self.file.to_string(),
            line,
            column,
            context: context.to_string(),
            message,
            snippet,
        }
    }
}
