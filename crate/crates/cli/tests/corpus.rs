//! Hand-derived values for the shipped models, asserted line by line so a
//! regenerated golden file cannot silently absorb a wrong answer.

mod common;

use common::{field, header, jetvar, model, stdout};

fn run(args: &[&str]) -> (String, i32) {
    let out = jetvar(args);
    (stdout(&out), out.status.code().unwrap())
}

fn path(name: &str) -> String {
    model(name).to_string_lossy().into_owned()
}

#[test]
fn euler_lagrange_expressions() {
    let (text, code) = run(&["el", &path("harmonic_oscillator")]);
    assert_eq!(code, 0);
    assert_eq!(field(&text, "delta[q]").unwrap(), "-q[t,t] - q");

    let (text, _) = run(&["el", &path("potential_kdv")]);
    assert_eq!(
        field(&text, "delta[phi]").unwrap(),
        "phi[x,x,x,x] + 6*phi[x]*phi[x,x] + phi[t,x]"
    );

    let (text, _) = run(&["el", &path("zero_lagrangian")]);
    assert_eq!(field(&text, "delta[q]").unwrap(), "0");
}

#[test]
fn oscillator_energy() {
    let (text, code) = run(&["noether", &path("harmonic_oscillator"), "--name", "time"]);
    assert_eq!(code, 0);
    assert_eq!(header(&text, "verdict").unwrap(), "conserved");
    assert_eq!(field(&text, "symmetry").unwrap(), "exact symmetry");
    assert_eq!(field(&text, "J[t]").unwrap(), "-1/2*q[t]^2 - 1/2*q^2");
    assert_eq!(field(&text, "residual").unwrap(), "0");
}

#[test]
fn oscillator_scaling_is_rejected() {
    let (text, code) = run(&["symmetry", &path("harmonic_oscillator"), "--name", "scaling"]);
    assert_eq!(code, 1);
    assert_eq!(header(&text, "verdict").unwrap(), "not a symmetry");
    assert_eq!(field(&text, "residual[q]").unwrap(), "-2*q[t,t] - 2*q");
}

#[test]
fn free_particle_boost() {
    let (text, code) = run(&["symmetry", &path("free_particle"), "--name", "boost"]);
    assert_eq!(code, 0);
    assert_eq!(header(&text, "verdict").unwrap(), "divergence symmetry");
    assert_eq!(field(&text, "sigma[t]").unwrap(), "q");

    let (text, code) = run(&["noether", &path("free_particle"), "--name", "boost"]);
    assert_eq!(code, 0);
    assert_eq!(field(&text, "J[t]").unwrap(), "t*q[t] - q");
    assert_eq!(field(&text, "residual").unwrap(), "0");
}

#[test]
fn two_body_boost_moves_the_centre_of_mass() {
    let (text, code) = run(&["noether", &path("galilean_boost"), "--name", "boost"]);
    assert_eq!(code, 0);
    assert_eq!(field(&text, "sigma[t]").unwrap(), "2*q2 + q1");
    assert_eq!(field(&text, "J[t]").unwrap(), "2*t*q2[t] - 2*q2 + t*q1[t] - q1");
    let (_, code) = run(&["symmetry", &path("galilean_boost"), "--name", "relative_shift"]);
    assert_eq!(code, 1);
}

#[test]
fn kepler_angular_momentum() {
    let (text, code) = run(&["symmetry", &path("kepler_2d"), "--name", "rotation"]);
    assert_eq!(code, 0);
    assert_eq!(header(&text, "verdict").unwrap(), "exact symmetry");

    let (text, code) = run(&["noether", &path("kepler_2d"), "--name", "rotation"]);
    assert_eq!(code, 0);
    assert_eq!(field(&text, "J[t]").unwrap(), "q1*q2[t] - q1[t]*q2");
    assert_eq!(field(&text, "residual").unwrap(), "0");
}

#[test]
fn kepler_runge_lenz() {
    for (name, current) in [
        (
            "runge_lenz_1",
            "r^2*r[t]*phi[t]*sin_phi + r^3*phi[t]^2*cos_phi - cos_phi",
        ),
        (
            "runge_lenz_2",
            "r^3*phi[t]^2*sin_phi - sin_phi - r^2*r[t]*phi[t]*cos_phi",
        ),
    ] {
        let (text, code) = run(&["symmetry", &path("kepler_polar"), "--name", name]);
        assert_eq!(code, 0, "{name}");
        assert_eq!(header(&text, "verdict").unwrap(), "divergence symmetry");
        let (text, code) = run(&["noether", &path("kepler_polar"), "--name", name]);
        assert_eq!(code, 0, "{name}");
        assert_eq!(field(&text, "J[t]").unwrap(), current);
        assert_eq!(field(&text, "residual").unwrap(), "0");
    }
}

#[test]
fn kdv_third_order_symmetry() {
    let (text, code) = run(&["symmetry", &path("potential_kdv"), "--name", "third_order"]);
    assert_eq!(code, 0);
    assert_eq!(header(&text, "verdict").unwrap(), "divergence symmetry");
    assert_eq!(field(&text, "residual[phi]").unwrap(), "0");
    let (_, code) = run(&["noether", &path("potential_kdv"), "--name", "third_order"]);
    assert_eq!(code, 0);

    let (text, code) = run(&["symmetry", &path("potential_kdv"), "--name", "third_order_wrong_sign"]);
    assert_eq!(code, 1);
    assert_ne!(field(&text, "residual[phi]").unwrap(), "0");
}

#[test]
fn wave_equation_conservation_laws() {
    for name in ["time", "space", "lorentz", "dilation", "shift"] {
        let (text, code) = run(&["noether", &path("wave_equation_2d"), "--name", name]);
        assert_eq!(code, 0, "{name}");
        assert_eq!(field(&text, "residual").unwrap(), "0", "{name}");
    }
    let (text, _) = run(&["noether", &path("wave_equation_2d"), "--name", "time"]);
    assert_eq!(field(&text, "J[t]").unwrap(), "-1/2*u[x]^2 - 1/2*u[t]^2");
    assert_eq!(field(&text, "J[x]").unwrap(), "u[t]*u[x]");
    let (_, code) = run(&["symmetry", &path("wave_equation_2d"), "--name", "amplitude"]);
    assert_eq!(code, 1);
}

#[test]
fn triviality_verdicts() {
    let (text, code) = run(&["triviality", &path("trivial_second_order")]);
    assert_eq!(code, 0);
    assert_eq!(field(&text, "sigma[t]").unwrap(), "1/2*q[t]^2");

    let (text, code) = run(&["triviality", &path("trivial_plane")]);
    assert_eq!(code, 0);
    assert_eq!(field(&text, "sigma[t]").unwrap(), "q^3");
    assert_eq!(field(&text, "sigma[x]").unwrap(), "q*u");

    let (text, code) = run(&["triviality", &path("harmonic_oscillator")]);
    assert_eq!(code, 1);
    assert_eq!(header(&text, "verdict").unwrap(), "not trivial");
}

#[test]
fn corrupted_current_is_caught() {
    let (text, code) = run(&[
        "noether",
        &path("harmonic_oscillator"),
        "--name",
        "time",
        "--check-current",
        "1/2*q_t^2 + 1/2*q^2",
    ]);
    assert_eq!(code, 1);
    assert_eq!(header(&text, "verdict").unwrap(), "not conserved");
    assert_ne!(field(&text, "residual").unwrap(), "0");
}

#[test]
fn usage_and_parse_errors_exit_2() {
    let out = jetvar(&["symmetry", &path("free_particle"), "--name", "nope"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("available: time, translation, boost"));

    let out = jetvar(&["el", "/nonexistent/model.toml"]);
    assert_eq!(out.status.code(), Some(2));

    let out = jetvar(&["noether", &path("free_particle")]);
    assert_eq!(out.status.code(), Some(2));

    let dir = std::env::temp_dir().join(format!("jetvar-bad-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.toml");
    std::fs::write(&bad, "base = [\"t\"]\nfields = [\"q\"]\nlagrangian = \"q_t^2 + w\"\n").unwrap();
    let out = jetvar(&["el", &bad.to_string_lossy()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr).into_owned();
    assert!(
        err.contains("bad.toml:3:23: in lagrangian: unknown identifier w"),
        "{err}"
    );
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn selftest_catches_injected_faults() {
    let (text, code) = run(&[
        "selftest",
        "--suite",
        "noether",
        "--cases",
        "10",
        "--fault",
        "current-sign",
    ]);
    assert_eq!(code, 1);
    assert!(text.contains("noether") && text.contains("FAIL"), "{text}");

    let (text, code) = run(&["selftest", "--suite", "noether", "--cases", "10", "--seed", "4"]);
    assert_eq!(code, 0, "{text}");
    let (again, _) = run(&["selftest", "--suite", "noether", "--cases", "10", "--seed", "4"]);
    assert_eq!(text, again);
}

#[test]
fn json_mode_emits_one_object_per_certificate() {
    let (text, code) = run(&[
        "--json",
        "selftest",
        "--suite",
        "zero-test",
        "--suite",
        "noether",
        "--cases",
        "4",
    ]);
    assert_eq!(code, 0);
    let objects: Vec<serde_json::Value> = text.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(objects.len(), 2);
    assert_eq!(objects[1]["subject"], "noether");

    let (text, _) = run(&["--json", "el", &path("harmonic_oscillator")]);
    let v: serde_json::Value = serde_json::from_str(text.trim_end()).unwrap();
    assert_eq!(v["details"][1]["value"], "-q[t,t] - q");
    assert!(v["inputs"].as_str().unwrap().starts_with("sha256:"));
}
