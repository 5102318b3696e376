use super::{ContactForm, Generator};
use crate::symexpr::BundleSpec;

fn generator(g: &Generator, spec: &BundleSpec) -> String {
    match *g {
        Generator::Dx(d) => format!("d{}", spec.base().name(d as usize)),
        Generator::Theta(j) => format!("theta({})", spec.jet_name(j)),
    }
}

impl ContactForm {
    /// One line per the canonical monomial order, e.g.
    /// `(q[t]) theta(q) + (1/2*q[t]^2) dt`.
    pub fn to_text(&self, spec: &BundleSpec) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        self.terms()
            .map(|(w, c)| {
                let gens: Vec<String> = w.generators().iter().map(|g| generator(g, spec)).collect();
                if gens.is_empty() {
                    format!("({})", c.to_text(spec))
                } else {
                    format!("({}) {}", c.to_text(spec), gens.join(" ^ "))
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}
