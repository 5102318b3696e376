//! End-to-end checks through the public API on small classical systems.

use std::sync::Arc;

use jetvar_core::contactforms::{first_variational_split, ContactForm};
use jetvar_core::jetops::{euler_lagrange, invert_total_divergence, total_divergence, Lagrangian};
use jetvar_core::symexpr::{parse, BundleSpec, Expr};
use jetvar_core::symmetry::{
    characteristic_check, first_variational_formula, master_identity_check, noether_current, verify_conservation,
    GeneralizedVectorField, Verdict,
};

fn setup(base: &[&str], fields: &[&str], density: &str) -> (Arc<BundleSpec>, Lagrangian) {
    let spec = Arc::new(BundleSpec::simple(base, fields).unwrap());
    let l = Lagrangian::new(spec.clone(), parse(density, &spec).unwrap());
    (spec, l)
}

fn exprs(spec: &BundleSpec, items: &[&str]) -> Vec<Expr> {
    items.iter().map(|s| parse(s, spec).unwrap()).collect()
}

#[test]
fn second_order_lagrangian_splits() {
    // Elastic beam: L = u_xx^2/2 - u_t^2/2 over (t, x).
    let (spec, l) = setup(&["t", "x"], &["u"], "u_xx^2/2 - u_t^2/2");
    let (delta, cartan) = first_variational_split(&l).unwrap();
    assert_eq!(delta.components, exprs(&spec, &["u_xxxx + u_tt"]));
    assert_eq!(delta, euler_lagrange(&l));
    // dL = δL − d_H Ξ restricted to the contact part.
    let dl = ContactForm::scalar(l.density().clone())
        .wedge(&ContactForm::volume(spec.dim()))
        .d(&spec);
    let lhs = dl.sub(&jetvar_core::contactforms::source_form_to_form(&delta, &spec));
    assert_eq!(lhs, cartan.contact_part().d_h(&spec).neg());
}

#[test]
fn wave_energy_flux() {
    let (spec, l) = setup(&["t", "x"], &["u"], "(u_t^2 - u_x^2)/2");
    let v = GeneralizedVectorField::new(spec.clone(), exprs(&spec, &["1", "0"]), exprs(&spec, &["0"])).unwrap();
    let rep = characteristic_check(&v, &l, None).unwrap();
    assert_eq!(rep.verdict, Verdict::ExactSymmetry);
    let j = noether_current(&v, &l, &rep.sigma.unwrap()).unwrap();
    assert_eq!(j.components, exprs(&spec, &["-(u_t^2 + u_x^2)/2", "u_t*u_x"]));
    assert!(verify_conservation(&v, &l, &j).unwrap().verified());
}

#[test]
fn vertical_part_gives_same_conservation_law() {
    let (spec, l) = setup(&["t"], &["q"], "q_t^2/2 - q^4/4");
    let v = GeneralizedVectorField::new(spec.clone(), exprs(&spec, &["1"]), exprs(&spec, &["0"])).unwrap();
    let vv = v.vertical_part();
    assert!(vv.is_vertical());
    let a = characteristic_check(&v, &l, None).unwrap();
    let b = characteristic_check(&vv, &l, None).unwrap();
    assert!(a.verdict.is_symmetry() && b.verdict.is_symmetry());
    let jv = noether_current(&vv, &l, &b.sigma.unwrap()).unwrap();
    assert!(verify_conservation(&v, &l, &jv).unwrap().verified());
    let j = noether_current(&v, &l, &a.sigma.unwrap()).unwrap();
    assert_eq!(j.components, jv.components);
}

#[test]
fn first_variation_with_non_projectable_field() {
    let (spec, l) = setup(&["t"], &["q"], "q_t^2/2 - q^2/2");
    let v = GeneralizedVectorField::new(spec.clone(), exprs(&spec, &["q"]), exprs(&spec, &["q_t"])).unwrap();
    assert!(!v.is_projectable());
    let fv = first_variational_formula(&v, &l).unwrap();
    assert!(!fv.gauge_term.is_zero());
    let lie = ContactForm::scalar(l.density().clone())
        .wedge(&ContactForm::volume(1))
        .lie_derivative(&v, &spec);
    assert_eq!(fv.sum(), lie);
    assert!(characteristic_check(&v, &l, None).is_err());
    assert!(master_identity_check(&v, &l).is_err());
}

#[test]
fn master_identity_for_rotation() {
    let (spec, l) = setup(&["t"], &["q1", "q2"], "(q1_t^2 + q2_t^2)/2 - (q1^2 + q2^2)^2");
    let v = GeneralizedVectorField::new(spec.clone(), exprs(&spec, &["t"]), exprs(&spec, &["-q2", "q1"])).unwrap();
    let cert = master_identity_check(&v, &l).unwrap();
    assert!(cert.classical.is_some());
    assert!(cert.holds());
}

#[test]
fn plane_divergence_round_trip() {
    let spec = BundleSpec::simple(&["t", "x"], &["u"]).unwrap();
    let sigma = exprs(&spec, &["u*u_x^2 + t", "x*u_t*u"]);
    let h = total_divergence(&sigma, &spec);
    let back = invert_total_divergence(&h, &spec).unwrap();
    assert_eq!(total_divergence(&back, &spec), h);
}
