//! Exact symbolic scalars on finite-order jet charts.
//!
//! An [`Expr`] is a reduced rational function over ℚ in base coordinates,
//! fibre jet coordinates and registered atoms. Atoms are opaque generators
//! whose partial derivatives are supplied by the user ([`BundleSpec`]); the
//! zero test treats them as algebraically independent.

mod bundle;
mod expr;
mod parse;
pub mod poly;
mod print;

pub use bundle::{AtomDef, BundleSpec};
pub use expr::Expr;
pub use parse::parse;
pub use poly::{Monomial, Poly, Rational};

use crate::multiindex::MultiIndex;

/// Jet coordinate `y^i_Λ`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct JetVar {
    pub field: u16,
    pub index: MultiIndex,
}

impl JetVar {
    pub fn new(field: usize, index: MultiIndex) -> Self {
        JetVar {
            field: field as u16,
            index,
        }
    }

    pub fn field(&self) -> usize {
        self.field as usize
    }

    pub fn order(&self) -> usize {
        self.index.degree()
    }

    /// `y^i_{λ+Λ}`.
    pub fn raised(&self, direction: usize) -> JetVar {
        JetVar {
            field: self.field,
            index: self.index.plus(direction),
        }
    }
}

/// A variable of the coefficient ring. The derived order puts base
/// coordinates first, then jets (by field, then multi-index), then atoms.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Var {
    Base(u8),
    Jet(JetVar),
    Atom(u16),
}

impl Var {
    pub fn jet(field: usize, index: MultiIndex) -> Var {
        Var::Jet(JetVar::new(field, index))
    }

    pub fn as_jet(&self) -> Option<JetVar> {
        match self {
            Var::Jet(j) => Some(*j),
            _ => None,
        }
    }
}

impl From<JetVar> for Var {
    fn from(j: JetVar) -> Var {
        Var::Jet(j)
    }
}
