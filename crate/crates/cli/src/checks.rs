//! Hard invariants run by `verify`, and informational comparisons against
//! reference values.
//!
//! Every residual-type check takes a relative perturbation `p` that is
//! injected into the quantity under test. With `p = 0` all hard checks pass;
//! a perturbation well above the tolerance must make them fail.

use pseudodot::model::{quartic_u_jet, TaylorCoefficients};
use pseudodot::oracle::tridiag::SymTridiagonal;
use pseudodot::oracle::{fd_eigen, frozen_operator, self_consistent_energy};
use pseudodot::quadrature::trapezoid;
use pseudodot::specfun::{
    kummer_m, kummer_m_derivative, kummer_m_second_derivative, kummer_polynomial,
    kummer_polynomial_abs_sum, kummer_series, KummerArgs,
};
use pseudodot::spectra::{quantization_residual, solve_energy};
use pseudodot::verify::{
    case1_exponents, case2_quantization, geometric_s_grid, laplace_of_samples, sdomain_residual,
    sigma_roots, terminal_value_check, BetaParams, Case1Exponents, TERMINAL_TOL,
};
use pseudodot::wavefn::{density_profile, normalize, ode_residual, radial_wavefunction};
use pseudodot::{
    ConfinementParams, EigenResult, QuantumNumbers, RadialGrid, Scenario, WavefunctionSpec,
};
use serde::Serialize;

use crate::config::RunConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckKind {
    Hard,
    Informational,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub kind: CheckKind,
    /// Measured quantity; `null` in JSON when not finite.
    pub value: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    /// Passes when `value <= tolerance`.
    pub fn bound(name: &str, value: f64, tolerance: f64, detail: String) -> Self {
        Self {
            name: name.to_string(),
            kind: CheckKind::Hard,
            value,
            tolerance,
            passed: value <= tolerance,
            detail,
        }
    }

    pub fn flag(name: &str, passed: bool, detail: String) -> Self {
        Self {
            name: name.to_string(),
            kind: CheckKind::Hard,
            value: if passed { 1.0 } else { 0.0 },
            tolerance: f64::NAN,
            passed,
            detail,
        }
    }

    fn failed(name: &str, err: impl std::fmt::Display) -> Self {
        Self::flag(name, false, format!("error: {err}"))
    }

    pub fn informational(mut self) -> Self {
        self.kind = CheckKind::Informational;
        self
    }
}

const B_VALUES: [f64; 7] = [0.5, 1.5, 2.5, 3.5, 4.5, 5.5, 6.5];

fn x_samples() -> impl Iterator<Item = f64> {
    (1..=400).map(|k| 0.05 * f64::from(k))
}

pub fn kummer_ode(p: f64) -> Check {
    let mut worst = 0.0_f64;
    for n in 0..=10u32 {
        let a = -f64::from(n);
        for &b in &B_VALUES {
            for x in x_samples() {
                let args = KummerArgs::new(a, b, x);
                let (m, dm, ddm) = match (
                    kummer_m(args),
                    kummer_m_derivative(args),
                    kummer_m_second_derivative(args),
                ) {
                    (Ok(m), Ok(dm), Ok(ddm)) => (m, dm, ddm),
                    _ => return Check::failed("kummer_ode_residual", "evaluation failed"),
                };
                let a_used = a - p;
                let terms = [x * ddm, (b - x) * dm, a_used * m];
                let scale = terms.iter().fold(0.0_f64, |s, t| s.max(t.abs()));
                worst = worst.max((terms[0] + terms[1] - terms[2]).abs() / scale);
            }
        }
    }
    Check::bound(
        "kummer_ode_residual",
        worst,
        1e-10,
        "max relative residual of x M'' + (b - x) M' - a M, n <= 10, x in (0, 20]".into(),
    )
}

pub fn kummer_paths(p: f64) -> Check {
    let mut worst = 0.0_f64;
    for n in 0..=10u32 {
        for &b in &B_VALUES {
            for x in x_samples() {
                let poly = kummer_polynomial(n, b, x);
                let series = match kummer_series(KummerArgs::new(-f64::from(n) + p, b, x)) {
                    Ok(v) => v,
                    Err(e) => return Check::failed("kummer_polynomial_vs_series", e),
                };
                worst = worst.max((poly - series).abs() / kummer_polynomial_abs_sum(n, b, x));
            }
        }
    }
    Check::bound(
        "kummer_polynomial_vs_series",
        worst,
        1e-12,
        "max difference scaled by the sum of absolute polynomial terms".into(),
    )
}

pub fn kummer_zeros() -> Check {
    let mut bad = Vec::new();
    for n in 0..=10u32 {
        for &b in &B_VALUES {
            let top = 4.0 * f64::from(n) + 2.0 * b + 10.0;
            let steps = 20_000;
            let mut prev = kummer_polynomial(n, b, 0.0);
            let mut zeros = 0;
            for k in 1..=steps {
                let v = kummer_polynomial(n, b, top * f64::from(k) / f64::from(steps));
                if v.signum() != prev.signum() {
                    zeros += 1;
                }
                prev = v;
            }
            if zeros != n {
                bad.push(format!("n={n} b={b}: {zeros} zeros"));
            }
        }
    }
    let detail = if bad.is_empty() {
        "M(-n, b, x) has n positive zeros for n <= 10".into()
    } else {
        bad.join("; ")
    };
    Check::flag("kummer_zero_count", bad.is_empty(), detail)
}

pub fn taylor_coefficients(p: f64) -> Check {
    let [u, u1, u2, _] = match quartic_u_jet(1.0) {
        Ok(j) => j,
        Err(e) => return Check::failed("taylor_coefficients", e),
    };
    let got = TaylorCoefficients::match_at_unity(u, u1, u2 * (1.0 + p));
    let ok = got == Some(TaylorCoefficients::EXPANSION);
    Check::flag(
        "taylor_coefficients",
        ok,
        match got {
            Some(c) => format!("recomputed ({}, {}, {}), expected (-6, 4, 4)", c.constant, c.linear, c.inverse),
            None => "recomputed coefficients are not integral".into(),
        },
    )
}

fn perturbed_expansion(p: f64) -> (f64, f64, f64) {
    let c = TaylorCoefficients::EXPANSION;
    (
        f64::from(c.constant),
        f64::from(c.linear),
        f64::from(c.inverse) * (1.0 + p),
    )
}

/// `U - U_a` and its first three derivatives at `x = 1`.
pub fn taylor_jet(p: f64) -> Check {
    let (c, l, i) = perturbed_expansion(p);
    let u = quartic_u_jet(1.0).expect("x = 1 is in the domain");
    let ua = [c + l + i, l - i, 2.0 * i, -6.0 * i];
    let worst = (0..4)
        .map(|k| (u[k] - ua[k]).abs() / u[k].abs().max(1.0))
        .fold(0.0, f64::max);
    Check::bound(
        "taylor_local_jet",
        worst,
        1e-12,
        "U - U_a and its first three derivatives at x = 1, relative to U's".into(),
    )
}

/// `U - U_a = (x - 1)^4 / x^2` on `[0.4, 2.5]`.
pub fn taylor_remainder(p: f64) -> Check {
    let (c, l, i) = perturbed_expansion(p);
    let mut worst = 0.0_f64;
    for k in 40..=250 {
        let x = f64::from(k) / 100.0;
        let u = x * x + 1.0 / (x * x);
        let ua = c + l * x + i / x;
        let want = (x - 1.0).powi(4) / (x * x);
        worst = worst.max((u - ua - want).abs() / (1.0 + u));
    }
    Check::bound(
        "taylor_remainder_identity",
        worst,
        1e-12,
        "U - U_a against (x - 1)^4 / x^2 on [0.4, 2.5]".into(),
    )
}

pub fn sturm_consistency(op: &SymTridiagonal) -> Check {
    let (lo, hi) = op.gershgorin();
    let hi = hi.min(lo + 1e3);
    let bad = (0..=200)
        .map(|j| lo + (hi - lo) * f64::from(j) / 200.0)
        .filter(|&x| op.sturm_count(x) != op.sturm_sign_agreements(x))
        .count();
    Check::flag(
        "sturm_count_consistency",
        bad == 0,
        format!("{bad} of 201 shifts disagree between LDL^T and minor-sign counts"),
    )
}

/// Plain oscillator `-u'' + r^2 u`: levels `4k + 3` and the convergence
/// factor under halving `h`.
pub fn harmonic(grid: &RadialGrid, p: f64) -> Vec<Check> {
    let w2 = 1.0 + p;
    let coarse = match fd_eigen(grid, |r| w2 * r * r, 0, 3) {
        Ok(o) => o,
        Err(e) => return vec![Check::failed("harmonic_levels", e)],
    };
    let fine = match fd_eigen(&grid.refined(), |r| w2 * r * r, 0, 3) {
        Ok(o) => o,
        Err(e) => return vec![Check::failed("harmonic_convergence_order", e)],
    };
    let mut worst = 0.0_f64;
    let mut factors = Vec::new();
    for k in 0..3 {
        let want = 2.0 * (2.0 * k as f64 + 1.5);
        let ea = (coarse.eigenvalues[k] - want).abs();
        let eb = (fine.eigenvalues[k] - want).abs();
        worst = worst.max(ea / want);
        factors.push(ea / eb);
    }
    let in_range = factors.iter().all(|f| (3.0..=5.0).contains(f));
    let furthest = factors
        .iter()
        .copied()
        .fold(4.0, |acc: f64, f| if (f - 4.0).abs() > (acc - 4.0).abs() { f } else { acc });
    vec![
        Check::bound(
            "harmonic_levels",
            worst,
            1e-4,
            "max relative error of the three lowest oscillator levels".into(),
        ),
        Check {
            name: "harmonic_convergence_order".into(),
            kind: CheckKind::Hard,
            value: furthest,
            tolerance: f64::NAN,
            passed: in_range,
            detail: format!("error ratios under halving h: {factors:?}; required in [3, 5]"),
        },
    ]
}

fn perturbed_energy(res: &EigenResult, p: f64) -> EigenResult {
    EigenResult {
        energy: res.energy * (1.0 + p),
        ..res.clone()
    }
}

fn interior_samples(beta2: f64) -> Vec<f64> {
    let lo = -beta2 + 0.1;
    let hi = beta2 - 0.1;
    (0..=50).map(|k| lo + (hi - lo) * f64::from(k) / 50.0).collect()
}

struct Worst {
    value: f64,
    at: String,
}

impl Worst {
    fn new() -> Self {
        Self {
            value: 0.0,
            at: String::new(),
        }
    }

    fn update(&mut self, v: f64, at: impl FnOnce() -> String) {
        if !(v <= self.value) {
            self.value = v;
            self.at = at();
        }
    }
}

/// Checks over every configured state: quantization, both integer laws of
/// the transform layer, the closed-form wavefunction and the FD oracle.
pub fn state_checks(cfg: &RunConfig, p: f64) -> Vec<Check> {
    let grid = match cfg.grid() {
        Ok(g) => g,
        Err(e) => return vec![Check::failed("grid", e)],
    };
    let mut residual = Worst::new();
    let mut case1 = Worst::new();
    let mut case2 = Worst::new();
    let mut sdomain = Worst::new();
    let mut wave = Worst::new();
    let mut norm = Worst::new();
    let mut oracle = Worst::new();
    let mut node_errors = Vec::new();
    let mut failures = Vec::new();

    for &de in &cfg.depths {
        let params = match cfg.params(de) {
            Ok(p) => p,
            Err(e) => {
                failures.push(format!("De={de}: {e}"));
                continue;
            }
        };
        for n in 0..=cfg.n_max {
            for l in 0..=cfg.l_max {
                let qn = QuantumNumbers::new(n, l);
                let tag = || format!("De={de} {qn}");
                let res = match solve_energy(qn, &params, cfg.scenario) {
                    Ok(r) => r,
                    Err(e) => {
                        failures.push(format!("{}: {e}", tag()));
                        continue;
                    }
                };
                let shifted = perturbed_energy(&res, p);
                let nn = f64::from(n);

                match quantization_residual(shifted.energy, qn, &params, cfg.scenario) {
                    Ok(f) => residual.update(f.abs() / res.quasi_eigenvalue.abs().max(1.0), tag),
                    Err(e) => failures.push(format!("{}: {e}", tag())),
                }

                match BetaParams::from_eigen(&shifted, &params) {
                    Ok(beta) => {
                        if let Ok(ex) = case1_exponents(&beta) {
                            case1.update((ex.a - nn).abs(), tag);
                        }
                        // the s-domain residual is probed through the exponent
                        let exact = BetaParams::from_eigen(&res, &params)
                            .and_then(|b| Ok((b, case1_exponents(&b)?)));
                        if let Ok((b0, ex0)) = exact {
                            let bumped = Case1Exponents { a: ex0.a + p, ..ex0 };
                            match sdomain_residual(&b0, &bumped, &interior_samples(b0.beta2)) {
                                Ok(r) => sdomain.update(r, tag),
                                Err(e) => failures.push(format!("{}: {e}", tag())),
                            }
                        }
                        if let Ok(q) = case2_quantization(&beta) {
                            case2.update((q - nn).abs(), tag);
                        }
                    }
                    Err(e) => failures.push(format!("{}: {e}", tag())),
                }

                let spec = WavefunctionSpec::from_eigen(&res);
                match normalize(&spec, &grid) {
                    Ok(spec) => {
                        let probe = WavefunctionSpec {
                            energy: shifted.energy,
                            ..spec
                        };
                        for k in 0..=118 {
                            let r = 0.1 + 0.05 * f64::from(k);
                            if let Ok(v) = ode_residual(r, &probe, &params, cfg.scenario) {
                                wave.update(v, tag);
                            }
                        }
                        let scaled = WavefunctionSpec {
                            norm: spec.norm * (1.0 + p),
                            ..spec
                        };
                        match density_profile(&scaled, &grid, &params, cfg.scenario) {
                            Ok(prof) => {
                                norm.update((prof.total_probability() - 1.0).abs(), tag);
                                if prof.node_count() != n as usize {
                                    node_errors.push(format!(
                                        "{}: profile has {} nodes",
                                        tag(),
                                        prof.node_count()
                                    ));
                                }
                            }
                            Err(e) => failures.push(format!("{}: {e}", tag())),
                        }
                    }
                    Err(e) => failures.push(format!("{}: {e}", tag())),
                }

                match self_consistent_energy(qn, &params, cfg.scenario, &grid) {
                    Ok(fd) => {
                        oracle.update((fd.energy - shifted.energy).abs() / res.energy.abs(), tag);
                        if fd.nodes != n as usize {
                            node_errors.push(format!("{}: oracle level has {} nodes", tag(), fd.nodes));
                        }
                    }
                    Err(e) => failures.push(format!("{}: oracle: {e}", tag())),
                }
            }
        }
    }

    let at = |w: &Worst| {
        if w.at.is_empty() {
            String::new()
        } else {
            format!(" (worst at {})", w.at)
        }
    };
    let mut out = vec![
        Check::bound(
            "quantization_residual",
            residual.value,
            1e-10,
            format!("|F(E)| / max(1, |epsilon|){}", at(&residual)),
        ),
        Check::bound(
            "case1_integer_exponent",
            case1.value,
            1e-9,
            format!("|a - n| for the transform exponent{}", at(&case1)),
        ),
        Check::bound(
            "case2_integer_quantization",
            case2.value,
            1e-9,
            format!("|eps3/eps2 - n|{}", at(&case2)),
        ),
        Check::bound(
            "sdomain_ode_residual",
            sdomain.value,
            1e-10,
            format!("(s^2 - b2^2) F' + [(2 - beta) s - b1] F on (-b2, b2){}", at(&sdomain)),
        ),
        Check::bound(
            "wavefunction_ode_residual",
            wave.value,
            1e-8,
            format!("closed-form u in the radial equation on [0.1, 6]{}", at(&wave)),
        ),
        Check::bound(
            "density_normalization",
            norm.value,
            1e-6,
            format!("|trapezoid(|u|^2) - 1|{}", at(&norm)),
        ),
        Check::bound(
            "oracle_equivalence",
            oracle.value,
            1e-4,
            format!("relative |E_fd - E|{}", at(&oracle)),
        ),
        Check::flag(
            "node_law",
            node_errors.is_empty(),
            if node_errors.is_empty() {
                "closed-form and oracle node counts equal n".into()
            } else {
                node_errors.join("; ")
            },
        ),
    ];
    if !failures.is_empty() {
        out.push(Check::flag("state_solves", false, failures.join("; ")));
    }
    out
}

/// Ground-state energy under `J` and `2J` for every configured depth.
pub fn grid_convergence(cfg: &RunConfig, p: f64) -> Check {
    const NAME: &str = "oracle_grid_convergence";
    let grid = match cfg.grid() {
        Ok(g) => g,
        Err(e) => return Check::failed(NAME, e),
    };
    let mut worst = Worst::new();
    for &de in &cfg.depths {
        let params = match cfg.params(de) {
            Ok(p) => p,
            Err(e) => return Check::failed(NAME, e),
        };
        let qn = QuantumNumbers::new(0, 0);
        let coarse = self_consistent_energy(qn, &params, cfg.scenario, &grid);
        let fine = self_consistent_energy(qn, &params, cfg.scenario, &grid.refined());
        match (coarse, fine) {
            (Ok(c), Ok(f)) => {
                worst.update((f.energy - c.energy * (1.0 + p)).abs() / f.energy.abs(), || {
                    format!("De={de}")
                })
            }
            (Err(e), _) | (_, Err(e)) => return Check::failed(NAME, e),
        }
    }
    Check::bound(
        NAME,
        worst.value,
        1e-5,
        format!("relative change of the ground state when J doubles (worst at {})", worst.at),
    )
}

pub fn orthonormality(cfg: &RunConfig, p: f64) -> Check {
    const NAME: &str = "eigenvector_orthonormality";
    let run = || -> pseudodot::Result<f64> {
        let grid = cfg.grid()?;
        let params = ConfinementParams::new(cfg.depths[0], cfg.r0, cfg.m0)?;
        let e = solve_energy(QuantumNumbers::new(0, 0), &params, cfg.scenario)?.energy;
        let op = frozen_operator(&grid, &params, cfg.scenario, e, 0)?;
        let levels = 4;
        let vals = op.lowest_eigenvalues(levels);
        let h = grid.spacing();
        let mut vecs = Vec::new();
        for &lam in &vals {
            let v = op.inverse_iteration(lam)?;
            vecs.push(v.iter().map(|x| x / h.sqrt()).collect::<Vec<f64>>());
        }
        vecs[0].iter_mut().for_each(|x| *x *= 1.0 + p);
        let mut worst = 0.0_f64;
        for i in 0..levels {
            for j in 0..levels {
                let prod: Vec<f64> = vecs[i].iter().zip(&vecs[j]).map(|(a, b)| a * b).collect();
                let want = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((trapezoid(&prod, h) - want).abs());
            }
        }
        Ok(worst)
    };
    match run() {
        Ok(w) => Check::bound(
            NAME,
            w,
            1e-8,
            "trapezoidal Gram matrix of the four lowest frozen-operator vectors".into(),
        ),
        Err(e) => Check::failed(NAME, e),
    }
}

pub fn sturm_on_config(cfg: &RunConfig) -> Check {
    let run = || -> pseudodot::Result<SymTridiagonal> {
        let grid = cfg.grid()?;
        let params = ConfinementParams::new(cfg.depths[0], cfg.r0, cfg.m0)?;
        let e = solve_energy(QuantumNumbers::new(0, 0), &params, cfg.scenario)?.energy;
        frozen_operator(&grid, &params, cfg.scenario, e, 0)
    };
    match run() {
        Ok(op) => sturm_consistency(&op),
        Err(e) => Check::failed("sturm_count_consistency", e),
    }
}

/// The sigma root and the exponent identities over a fixed parameter lattice.
pub fn beta_algebra(p: f64) -> Check {
    let mut worst = 0.0_f64;
    let mut rejected_ok = true;
    for &beta0 in &[0.5, 1.0, 1.5, 2.5] {
        for &beta3 in &[0.1, 0.75, 2.0] {
            let (s, other) = sigma_roots(beta0, beta3);
            rejected_ok &= other < 0.0 && s > 0.0;
            for &beta2 in &[0.3, 1.0, 2.5] {
                for &beta1 in &[-1.0, 0.5, 4.0, 11.0] {
                    let Ok(bp) = BetaParams::new(beta0, beta1, beta2, beta3) else {
                        continue;
                    };
                    let Ok(ex) = case1_exponents(&bp) else {
                        continue;
                    };
                    let scale = 1.0 + ex.a.abs() + ex.b.abs();
                    worst = worst.max((ex.a + ex.b + p - (ex.beta - 2.0)).abs() / scale);
                    worst = worst.max((ex.a - ex.b - beta1 / beta2).abs() / scale);
                }
            }
        }
    }
    let mut c = Check::bound(
        "case1_exponent_algebra",
        worst,
        1e-13,
        "a + b = beta - 2 and a - b = b1/b2; rejected sigma root negative".into(),
    );
    c.passed &= rejected_ok;
    c
}

pub fn terminal_values(cfg: &RunConfig, p: f64) -> Vec<Check> {
    let s = geometric_s_grid(0.05, 8);
    let decay = terminal_value_check(|x| (-x).exp(), |s| 1.0 / (s + 1.0) + p / s, &s, TERMINAL_TOL);
    let step = terminal_value_check(
        |x| 1.0 - (-x).exp(),
        |s| 1.0 / s - 1.0 / (s + 1.0) + p / s,
        &s,
        TERMINAL_TOL,
    );
    let mut out = Vec::new();
    for (name, r) in [("terminal_value_exp", decay), ("terminal_value_step", step)] {
        let mut c = Check::bound(
            name,
            r.abs_error,
            r.tolerance,
            format!("lim f = {:e}, lim sF = {:e}", r.limit_f, r.limit_sf),
        );
        c.passed &= r.passed;
        out.push(c);
    }

    let ground = || -> pseudodot::Result<Check> {
        let grid = cfg.grid()?;
        let params = ConfinementParams::new(cfg.depths[0], cfg.r0, cfg.m0)?;
        let res = solve_energy(QuantumNumbers::new(0, 0), &params, cfg.scenario)?;
        let spec = normalize(&WavefunctionSpec::from_eigen(&res), &grid)?;
        let samples = grid
            .nodes()
            .iter()
            .map(|&r| radial_wavefunction(r, &spec))
            .collect::<pseudodot::Result<Vec<f64>>>()?;
        let h = grid.spacing();
        let r = terminal_value_check(
            |x| radial_wavefunction(x, &spec).unwrap_or(f64::NAN),
            |s| laplace_of_samples(grid.r_min, h, &samples, s) + p / s,
            &geometric_s_grid(0.1, 8),
            1e-4,
        );
        let mut c = Check::bound(
            "terminal_value_ground_state",
            r.abs_error,
            r.tolerance,
            format!("u(inf) = {:e}, lim sU(s) = {:e}", r.limit_f, r.limit_sf),
        );
        c.passed &= r.passed;
        Ok(c)
    };
    out.push(ground().unwrap_or_else(|e| Check::failed("terminal_value_ground_state", e)));
    out
}

/// All hard checks of `verify`.
pub fn hard_checks(cfg: &RunConfig) -> Vec<Check> {
    let p = cfg.perturb;
    let mut out = vec![
        kummer_ode(p),
        kummer_paths(p),
        kummer_zeros(),
        taylor_coefficients(p),
        taylor_jet(p),
        taylor_remainder(p),
        beta_algebra(p),
    ];
    match cfg.grid() {
        Ok(g) => out.extend(harmonic(&g, p)),
        Err(e) => out.push(Check::failed("harmonic_levels", e)),
    }
    out.push(sturm_on_config(cfg));
    out.push(orthonormality(cfg, p));
    out.extend(state_checks(cfg, p));
    out.push(grid_convergence(cfg, p));
    out.extend(terminal_values(cfg, p));
    out
}

/// Reference energy for the exact-scenario plotted set.
pub const REFERENCE_EXACT_MAX: f64 = 5.84;

/// `(De, epsilon, E)` for the constant-mass ground state.
pub const REFERENCE_APPROX: [(f64, f64, f64); 3] = [
    (10.0, 613.894, 0.323),
    (20.0, 2414.731, 0.172),
    (30.0, 5414.188, 0.113),
];

pub const EXACT_DEPTHS: [f64; 3] = [1.0, 2.0, 3.0];
pub const APPROX_DEPTHS: [f64; 3] = [10.0, 20.0, 30.0];

/// Relative tolerance quoted with the reference values.
pub const REFERENCE_TOL: f64 = 0.15;

pub const CAVEAT: &str = "Reference values come from a closed-form energy equation that is not \
available for reconstruction. They are compared for information only; the binding check is the \
agreement between the closed-form solver and the finite-difference oracle.";

fn unit(de: f64) -> pseudodot::Result<ConfinementParams> {
    ConfinementParams::new(de, 1.0, 1.0)
}

pub fn reference_checks(grid: &RadialGrid) -> Vec<Check> {
    let mut out = Vec::new();

    let mut best: Option<(f64, f64, QuantumNumbers)> = None;
    let mut errors = Vec::new();
    for de in EXACT_DEPTHS {
        for n in 0..=2 {
            for l in 0..=2 {
                let qn = QuantumNumbers::new(n, l);
                match unit(de).and_then(|p| solve_energy(qn, &p, Scenario::ExactVariableMass)) {
                    Ok(r) if best.is_none_or(|b| r.energy > b.0) => best = Some((r.energy, de, qn)),
                    Ok(_) => {}
                    Err(e) => errors.push(format!("De={de} {qn}: {e}")),
                }
            }
        }
    }
    out.push(match best {
        Some((e, de, qn)) => {
            let dev = (e - REFERENCE_EXACT_MAX).abs() / REFERENCE_EXACT_MAX;
            Check {
                name: "reference_exact_maximum".into(),
                kind: CheckKind::Informational,
                value: e,
                tolerance: REFERENCE_TOL,
                passed: dev <= REFERENCE_TOL,
                detail: format!(
                    "largest E over De in {{1,2,3}}, n,l <= 2 is {e} at De={de} {qn}; \
                     reference {REFERENCE_EXACT_MAX}, relative deviation {dev:.4}"
                ),
            }
        }
        None => Check::failed("reference_exact_maximum", errors.join("; ")).informational(),
    });

    for (de, ref_eps, ref_e) in REFERENCE_APPROX {
        let name = format!("reference_approx_ground_De{de}");
        let qn = QuantumNumbers::new(0, 0);
        let solved = unit(de).and_then(|p| {
            let closed = solve_energy(qn, &p, Scenario::ApproxConstantMass)?;
            let fd = self_consistent_energy(qn, &p, Scenario::ApproxConstantMass, grid)?;
            Ok((closed, fd))
        });
        out.push(match solved {
            Ok((closed, fd)) => {
                let dev_e = (fd.energy - ref_e).abs() / ref_e;
                let dev_eps = (fd.epsilon - ref_eps).abs() / ref_eps;
                Check {
                    name,
                    kind: CheckKind::Informational,
                    value: fd.energy,
                    tolerance: REFERENCE_TOL,
                    passed: dev_e <= REFERENCE_TOL && dev_eps <= REFERENCE_TOL,
                    detail: format!(
                        "oracle E = {}, epsilon = {}; closed form E = {}; reference \
                         (epsilon, E) = ({ref_eps}, {ref_e}); relative deviations \
                         E {dev_e:.4}, epsilon {dev_eps:.4}",
                        fd.energy, fd.epsilon, closed.energy
                    ),
                }
            }
            Err(e) => Check::failed(&name, e).informational(),
        });
    }
    out
}

/// Qualitative trends of the plotted sets.
pub fn trend_checks(grid: &RadialGrid) -> Vec<Check> {
    let mut out = Vec::new();

    let exact = || -> pseudodot::Result<(bool, String)> {
        let mut table = Vec::new();
        for de in EXACT_DEPTHS {
            let p = unit(de)?;
            let mut rows = Vec::new();
            for n in 0..=2 {
                let mut row = Vec::new();
                for l in 0..=2 {
                    row.push(solve_energy(QuantumNumbers::new(n, l), &p, Scenario::ExactVariableMass)?.energy);
                }
                rows.push(row);
            }
            table.push(rows);
        }
        let mut bad = Vec::new();
        for (d, rows) in table.iter().enumerate() {
            for n in 0..3 {
                for l in 0..3 {
                    let e = rows[n][l];
                    if n < 2 && rows[n + 1][l] <= e {
                        bad.push(format!("n: De={} ({n},{l})", EXACT_DEPTHS[d]));
                    }
                    if l < 2 && rows[n][l + 1] <= e {
                        bad.push(format!("l: De={} ({n},{l})", EXACT_DEPTHS[d]));
                    }
                    if d < 2 && table[d + 1][n][l] <= e {
                        bad.push(format!("De: De={} ({n},{l})", EXACT_DEPTHS[d]));
                    }
                }
            }
        }
        let detail = if bad.is_empty() {
            "E increases with n, l and De for n,l <= 2".into()
        } else {
            format!("violations: {}", bad.join("; "))
        };
        Ok((bad.is_empty(), detail))
    };
    out.push(match exact() {
        Ok((ok, detail)) => Check::flag("trend_exact_increasing", ok, detail),
        Err(e) => Check::failed("trend_exact_increasing", e),
    });

    let approx = || -> pseudodot::Result<(bool, String)> {
        let mut energies = Vec::new();
        for de in APPROX_DEPTHS {
            let p = unit(de)?;
            energies.push(self_consistent_energy(QuantumNumbers::new(0, 0), &p, Scenario::ApproxConstantMass, grid)?.energy);
        }
        let decreasing = energies.windows(2).all(|w| w[1] < w[0]);
        Ok((
            decreasing,
            format!("ground-state E over De in {{10,20,30}}: {energies:?}; expected strictly decreasing"),
        ))
    };
    out.push(match approx() {
        Ok((ok, detail)) => Check::flag("trend_approx_ground_decreasing", ok, detail),
        Err(e) => Check::failed("trend_approx_ground_decreasing", e),
    });

    let peak = || -> pseudodot::Result<f64> {
        let p = unit(1.0)?;
        let res = solve_energy(QuantumNumbers::new(0, 0), &p, Scenario::ExactVariableMass)?;
        let spec = normalize(&WavefunctionSpec::from_eigen(&res), grid)?;
        Ok(density_profile(&spec, grid, &p, Scenario::ExactVariableMass)?.peak_radius())
    };
    out.push(match peak() {
        Ok(r) => Check::flag(
            "exact_ground_density_peak",
            (0.8..=1.2).contains(&r),
            format!("|u|^2 peaks at r = {r} fm; expected within [0.8, 1.2]"),
        ),
        Err(e) => Check::failed("exact_ground_density_peak", e),
    });
    out
}
