//! Acceptance criteria. Each test writes one `criterion N: PASS|FAIL` line
//! straight to stdout, so the lines show up even when output is captured.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::Path;
use std::process::Command;
use std::time::Instant;

use pseudodot::model::{quartic_taylor, quartic_u, quartic_u_jet};
use pseudodot::oracle::{fd_eigen, self_consistent_energy};
use pseudodot::spectra::solve_energy;
use pseudodot::{ConfinementParams, QuantumNumbers, RadialGrid, Scenario, TaylorCoefficients};
use pseudodot_cli::checks::{self, Check, CheckKind};
use pseudodot_cli::RunConfig;
use tempfile::TempDir;

fn report(id: u32, title: &str, passed: bool, details: &[String]) {
    let mut text = format!(
        "criterion {id}: {} {title}\n",
        if passed { "PASS" } else { "FAIL" }
    );
    for d in details {
        text.push_str(&format!("    {d}\n"));
    }
    let mut out = std::io::stdout().lock();
    out.write_all(text.as_bytes()).unwrap();
    out.flush().unwrap();
}

fn unit(de: f64) -> ConfinementParams {
    ConfinementParams::new(de, 1.0, 1.0).unwrap()
}

#[test]
fn criterion_1_oracle_equivalence() {
    let start = Instant::now();
    let grid = RadialGrid::default();
    let mut worst = 0.0_f64;
    let mut problems = Vec::new();
    for de in [1.0, 2.0, 3.0] {
        let p = unit(de);
        for n in 0..=2 {
            for l in 0..=2 {
                let qn = QuantumNumbers::new(n, l);
                let closed = solve_energy(qn, &p, Scenario::ExactVariableMass);
                let fd = self_consistent_energy(qn, &p, Scenario::ExactVariableMass, &grid);
                match (closed, fd) {
                    (Ok(c), Ok(f)) => {
                        let rel = (f.energy - c.energy).abs() / c.energy.abs();
                        worst = worst.max(rel);
                        if rel > 1e-4 {
                            problems.push(format!("De={de} {qn}: relative deviation {rel:e}"));
                        }
                        if f.nodes != n as usize {
                            problems.push(format!("De={de} {qn}: {} nodes", f.nodes));
                        }
                    }
                    (Err(e), _) | (_, Err(e)) => problems.push(format!("De={de} {qn}: {e}")),
                }
            }
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    if elapsed >= 60.0 {
        problems.push(format!("runtime {elapsed:.1} s exceeds 60 s"));
    }
    let passed = problems.is_empty();
    let mut details = vec![format!(
        "27 states, worst relative deviation {worst:.3e}, {elapsed:.2} s at J = {}",
        grid.points
    )];
    details.extend(problems);
    report(1, "oracle equivalence (exact scenario)", passed, &details);
    assert!(passed);
}

#[test]
fn criterion_2_harmonic_calibration() {
    let mut details = Vec::new();
    let mut passed = true;
    for w0 in [1.0_f64, 1.5] {
        let coarse = RadialGrid::default();
        let a = fd_eigen(&coarse, |r| w0 * w0 * r * r, 0, 3).unwrap();
        let b = fd_eigen(&coarse.refined(), |r| w0 * w0 * r * r, 0, 3).unwrap();
        for k in 0..3 {
            let want = 2.0 * w0 * (2.0 * k as f64 + 1.5);
            let err_a = (a.eigenvalues[k] - want).abs();
            let err_b = (b.eigenvalues[k] - want).abs();
            let rel = err_a / want;
            let factor = err_a / err_b;
            let ok = rel <= 1e-4 && (3.0..=5.0).contains(&factor);
            passed &= ok;
            details.push(format!(
                "w0={w0} k={k}: relative error {rel:.3e}, halving-h factor {factor:.4}"
            ));
        }
    }
    report(2, "harmonic calibration and second-order convergence", passed, &details);
    assert!(passed);
}

/// Central-difference estimates of `f^(k)(1)`, `k = 0..=3`.
fn central(f: &dyn Fn(f64) -> f64, h: f64) -> [f64; 4] {
    let v = |k: f64| f(1.0 + k * h);
    [
        v(0.0),
        (v(1.0) - v(-1.0)) / (2.0 * h),
        (v(1.0) - 2.0 * v(0.0) + v(-1.0)) / (h * h),
        (v(2.0) - 2.0 * v(1.0) + 2.0 * v(-1.0) - v(-2.0)) / (2.0 * h.powi(3)),
    ]
}

#[test]
fn criterion_3_taylor_identity() {
    let mut details = Vec::new();

    let [u, u1, u2, _] = quartic_u_jet(1.0).unwrap();
    let recomputed = TaylorCoefficients::match_at_unity(u, u1, u2);
    let coeffs_ok = recomputed == Some(TaylorCoefficients { constant: -6, linear: 4, inverse: 4 });
    details.push(format!("recomputed coefficients {recomputed:?}"));

    let diff = |x: f64| quartic_u(x).unwrap() - quartic_taylor(x, &TaylorCoefficients::EXPANSION).unwrap();
    let h = 5e-3;
    let fine = central(&diff, h);
    let coarse = central(&diff, 2.0 * h);
    let jet = quartic_u_jet(1.0).unwrap();
    let mut jet_ok = true;
    for k in 0..4 {
        let d = (4.0 * fine[k] - coarse[k]) / 3.0;
        let scale = jet[k].abs().max(1.0);
        let ok = d.abs() <= 1e-6 * scale;
        jet_ok &= ok;
        details.push(format!("derivative {k} of U - U_a at x = 1: {d:.3e} (tolerance {:.1e})", 1e-6 * scale));
    }

    let mut violations = Vec::new();
    for k in 0..=600 {
        let x = 0.7 + 0.6 * f64::from(k) / 600.0;
        let d = diff(x).abs();
        let bound = 2.0 * (x - 1.0).powi(4);
        if d > bound {
            violations.push((x, d, bound));
        }
    }
    let bound_ok = violations.is_empty();
    if bound_ok {
        details.push("|U - U_a| <= 2 (x - 1)^4 on [0.7, 1.3]".into());
    } else {
        let (x_hi, _, _) = violations[violations.len() - 1];
        let (x, d, b) = violations[0];
        details.push(format!(
            "|U - U_a| <= 2 (x - 1)^4 violated at {} samples in [0.7, {x_hi:.4}]: at x = {x} |U - U_a| = {d:.6e} > {b:.6e}",
            violations.len()
        ));
        details.push("U - U_a = (x - 1)^4 / x^2 exactly, so the bound needs x >= 1/sqrt(2) = 0.70711".into());
    }

    let passed = coeffs_ok && jet_ok && bound_ok;
    report(3, "Taylor identity of the quartic term", passed, &details);
    assert!(coeffs_ok, "coefficients");
    assert!(jet_ok, "local jet");
    assert!(bound_ok, "remainder bound on [0.7, 1.3]");
}

fn describe(c: &Check) -> String {
    format!(
        "{}: {} value {:.3e} tolerance {:.1e}; {}",
        c.name,
        if c.passed { "ok" } else { "FAILED" },
        c.value,
        c.tolerance,
        c.detail
    )
}

#[test]
fn criterion_4_kummer_suite() {
    let found = [checks::kummer_ode(0.0), checks::kummer_paths(0.0), checks::kummer_zeros()];
    let passed = found.iter().all(|c| c.passed);
    let details: Vec<String> = found.iter().map(describe).collect();
    report(4, "Kummer function suite", passed, &details);
    assert!(passed);
}

#[test]
fn criterion_5_trends() {
    let grid = RadialGrid::default();
    let found = checks::trend_checks(&grid);
    let passed = found.iter().all(|c| c.passed);
    let details: Vec<String> = found.iter().map(describe).collect();
    report(5, "trend reproduction", passed, &details);
    for c in &found {
        assert!(c.passed, "{}", describe(c));
    }
}

#[test]
fn criterion_6_soft_reproduction_report() {
    let grid = RadialGrid::default();
    let found = checks::reference_checks(&grid);
    let names: Vec<&str> = found.iter().map(|c| c.name.as_str()).collect();
    let complete = names
        == [
            "reference_exact_maximum",
            "reference_approx_ground_De10",
            "reference_approx_ground_De20",
            "reference_approx_ground_De30",
        ];
    let informational = found.iter().all(|c| c.kind == CheckKind::Informational);
    let computed = found.iter().all(|c| c.value.is_finite());
    let passed = complete && informational && computed;
    let mut details: Vec<String> = found
        .iter()
        .map(|c| format!("{} (within target: {}): {}", c.name, c.passed, c.detail))
        .collect();
    details.push(format!("caveat: {}", checks::CAVEAT));
    report(6, "soft reproduction report (informational)", passed, &details);
    assert!(passed);
}

#[test]
fn criterion_7_verify_layer() {
    let cfg = RunConfig {
        depths: vec![1.0, 2.0, 3.0],
        n_max: 2,
        l_max: 2,
        ..RunConfig::default()
    };
    let selected = |p: f64| -> Vec<Check> {
        let mut out = vec![checks::beta_algebra(p)];
        out.extend(
            checks::state_checks(&cfg, p)
                .into_iter()
                .filter(|c| {
                    ["case1_integer_exponent", "sdomain_ode_residual", "case2_integer_quantization"]
                        .contains(&c.name.as_str())
                }),
        );
        out.extend(checks::terminal_values(&cfg, p));
        out
    };
    let clean = selected(0.0);
    let probed = selected(1e-3);
    let mut details = Vec::new();
    let mut passed = clean.len() == 7;
    for (c, q) in clean.iter().zip(&probed) {
        let inflated = !q.passed && q.value > c.value;
        passed &= c.passed && inflated;
        details.push(format!(
            "{}: value {:.3e} (tol {:.1e}) {}; probe 1e-3 gives {:.3e} {}",
            c.name,
            c.value,
            c.tolerance,
            if c.passed { "ok" } else { "FAILED" },
            q.value,
            if inflated { "inflated" } else { "NOT inflated" }
        ));
    }
    report(7, "verify-layer identities with perturbation probes", passed, &details);
    assert!(passed);
}

fn tree(root: &Path) -> BTreeMap<String, Vec<u8>> {
    fn walk(dir: &Path, root: &Path, out: &mut BTreeMap<String, Vec<u8>>) {
        for entry in fs::read_dir(dir).unwrap() {
            let path = entry.unwrap().path();
            if path.is_dir() {
                walk(&path, root, out);
            } else {
                let rel = path.strip_prefix(root).unwrap().display().to_string();
                out.insert(rel, fs::read(&path).unwrap());
            }
        }
    }
    let mut out = BTreeMap::new();
    walk(root, root, &mut out);
    out
}

#[test]
fn criterion_8_determinism() {
    let run = || {
        let tmp = TempDir::new().unwrap();
        let status = Command::new(env!("CARGO_BIN_EXE_pseudodot"))
            .current_dir(tmp.path())
            .args(["reproduce-figures", "--out", "figures"])
            .output()
            .unwrap();
        assert!(status.status.success(), "{}", String::from_utf8_lossy(&status.stderr));
        let files = tree(&tmp.path().join("figures"));
        (tmp, files)
    };
    let (_a, first) = run();
    let (_b, second) = run();
    let same_names = first.keys().eq(second.keys());
    let differing: Vec<&String> = first
        .iter()
        .filter(|(k, v)| second.get(*k) != Some(*v))
        .map(|(k, _)| k)
        .collect();
    let bytes: usize = first.values().map(Vec::len).sum();
    let passed = same_names && differing.is_empty() && !first.is_empty();
    let mut details = vec![format!("{} files, {bytes} bytes per run", first.len())];
    if !differing.is_empty() {
        details.push(format!("differing files: {differing:?}"));
    }
    report(8, "determinism of reproduce-figures", passed, &details);
    assert!(passed);
}
