use std::collections::{BTreeMap, BTreeSet};

use super::{Expr, JetVar, Var};
use crate::error::{Error, Result};
use crate::multiindex::{BaseSpec, MultiIndex};

/// A named opaque function of the coordinates, known only through its
/// partial derivatives.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AtomDef {
    pub name: String,
    pub description: String,
    /// `∂(atom)/∂v` for base coordinates and jet variables; absent means 0.
    pub rules: BTreeMap<Var, Expr>,
}

/// Coordinates `(x^λ, y^i)` of a trivial bundle plus the atom registry.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BundleSpec {
    base: BaseSpec,
    fields: Vec<String>,
    atoms: Vec<AtomDef>,
}

impl BundleSpec {
    pub fn new<S: Into<String>>(base: BaseSpec, fields: impl IntoIterator<Item = S>) -> Result<Self> {
        let fields: Vec<String> = fields.into_iter().map(Into::into).collect();
        if fields.is_empty() {
            return Err(Error::InvalidSpec("at least one fibre field is required".into()));
        }
        let spec = BundleSpec {
            base,
            fields,
            atoms: Vec::new(),
        };
        spec.check_names()?;
        Ok(spec)
    }

    /// Convenience constructor used heavily in tests.
    pub fn simple(base: &[&str], fields: &[&str]) -> Result<Self> {
        Self::new(BaseSpec::new(base.iter().copied())?, fields.iter().copied())
    }

    fn check_names(&self) -> Result<()> {
        let mut seen = BTreeSet::new();
        let all = self
            .base
            .names()
            .iter()
            .chain(&self.fields)
            .chain(self.atoms.iter().map(|a| &a.name));
        for name in all {
            if !is_identifier(name) {
                return Err(Error::InvalidSpec(format!("invalid name {name:?}")));
            }
            if !seen.insert(name.as_str()) {
                return Err(Error::InvalidSpec(format!("duplicate name {name}")));
            }
        }
        Ok(())
    }

    /// Declares an atom; its rules are attached with [`BundleSpec::set_atom_rule`]
    /// once they have been parsed against this spec.
    pub fn declare_atom(&mut self, name: &str, description: &str) -> Result<usize> {
        self.atoms.push(AtomDef {
            name: name.to_string(),
            description: description.to_string(),
            rules: BTreeMap::new(),
        });
        if let Err(e) = self.check_names() {
            self.atoms.pop();
            return Err(e);
        }
        Ok(self.atoms.len() - 1)
    }

    pub fn set_atom_rule(&mut self, atom: usize, v: Var, rule: Expr) -> Result<()> {
        if matches!(v, Var::Atom(_)) {
            return Err(Error::InvalidSpec(
                "atom rules are given with respect to coordinates, not atoms".into(),
            ));
        }
        if rule.is_zero() {
            self.atoms[atom].rules.remove(&v);
        } else {
            self.atoms[atom].rules.insert(v, rule);
        }
        Ok(())
    }

    /// Checks that mixed second derivatives of every atom commute.
    pub fn validate_atoms(&self) -> Result<()> {
        let mut deps: BTreeSet<Var> = BTreeSet::new();
        for atom in &self.atoms {
            for (v, rule) in &atom.rules {
                deps.insert(*v);
                deps.extend(rule.vars().into_iter().filter(|w| !matches!(w, Var::Atom(_))));
            }
        }
        let deps: Vec<Var> = deps.into_iter().collect();
        for (id, atom) in self.atoms.iter().enumerate() {
            let atom_expr = Expr::atom(id);
            for (i, &a) in deps.iter().enumerate() {
                let da = atom_expr.partial(a, self);
                for &b in &deps[i + 1..] {
                    let ab = da.partial(b, self);
                    let ba = atom_expr.partial(b, self).partial(a, self);
                    if ab != ba {
                        return Err(Error::InvalidSpec(format!(
                            "derivative rules of atom {} do not commute in {} and {}",
                            atom.name,
                            self.var_name(a),
                            self.var_name(b)
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn base(&self) -> &BaseSpec {
        &self.base
    }

    pub fn dim(&self) -> usize {
        self.base.dim()
    }

    pub fn fields(&self) -> &[String] {
        &self.fields
    }

    pub fn field_count(&self) -> usize {
        self.fields.len()
    }

    pub fn field_index(&self, name: &str) -> Option<usize> {
        self.fields.iter().position(|f| f == name)
    }

    pub fn atoms(&self) -> &[AtomDef] {
        &self.atoms
    }

    pub fn atom_index(&self, name: &str) -> Option<usize> {
        self.atoms.iter().position(|a| a.name == name)
    }

    pub fn atom_rule(&self, atom: usize, v: Var) -> Expr {
        self.atoms[atom].rules.get(&v).cloned().unwrap_or_default()
    }

    /// Jet variables an atom depends on.
    pub fn atom_jet_deps(&self, atom: usize) -> impl Iterator<Item = JetVar> + '_ {
        self.atoms[atom].rules.keys().filter_map(|v| v.as_jet())
    }

    pub fn atom_depends_on(&self, atom: usize, v: Var) -> bool {
        self.atoms[atom].rules.contains_key(&v)
    }

    pub fn empty_index(&self) -> MultiIndex {
        self.base.empty_index()
    }

    /// `y^i` as an expression.
    pub fn field_expr(&self, field: usize) -> Expr {
        Expr::jet(field, self.empty_index())
    }

    /// `y^i_Λ` given as direction names.
    pub fn jet_var(&self, field: usize, directions: &[usize]) -> JetVar {
        JetVar::new(field, MultiIndex::from_directions(self.dim(), directions))
    }

    /// Jet variables an expression depends on, directly or through atoms.
    pub fn jet_dependencies(&self, e: &Expr) -> BTreeSet<JetVar> {
        let mut out = BTreeSet::new();
        for v in e.vars() {
            match v {
                Var::Jet(j) => {
                    out.insert(j);
                }
                Var::Atom(a) => out.extend(self.atom_jet_deps(a as usize)),
                Var::Base(_) => {}
            }
        }
        out
    }

    /// Highest derivative order present (0 for expressions free of jets).
    pub fn jet_order(&self, e: &Expr) -> usize {
        self.jet_dependencies(e).iter().map(|j| j.order()).max().unwrap_or(0)
    }

    /// Does `e` depend on any fibre coordinate, directly or through atoms?
    pub fn depends_on_fibre(&self, e: &Expr) -> bool {
        !self.jet_dependencies(e).is_empty()
    }

    pub fn depends_on(&self, e: &Expr, v: Var) -> bool {
        e.vars()
            .into_iter()
            .any(|w| w == v || matches!(w, Var::Atom(a) if self.atom_depends_on(a as usize, v)))
    }

    pub fn var_name(&self, v: Var) -> String {
        match v {
            Var::Base(d) => self.base.name(d as usize).to_string(),
            Var::Atom(a) => self.atoms[a as usize].name.clone(),
            Var::Jet(j) => self.jet_name(j),
        }
    }

    pub fn jet_name(&self, j: JetVar) -> String {
        let f = &self.fields[j.field()];
        if j.index.is_empty() {
            f.clone()
        } else {
            format!("{}[{}]", f, self.base.render(&j.index))
        }
    }
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic()) && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}
