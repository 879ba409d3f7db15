//! The subcommands. Each returns the files it wrote and any per-entry
//! numerical failures; the caller maps failures to exit code 2.

use std::path::{Path, PathBuf};

use pseudodot::model::{effective_potential, quartic_taylor, quartic_u};
use pseudodot::oracle::self_consistent_energy;
use pseudodot::spectra::solve_energy;
use pseudodot::wavefn::{density_profile, normalize};
use pseudodot::{QuantumNumbers, QuarticMode, Scenario, TaylorCoefficients, WavefunctionSpec};
use serde::Serialize;

use crate::checks::{self, Check, CheckKind};
use crate::config::RunConfig;
use crate::error::CliError;
use crate::output::{tag_float, write_file, Cell, Pairs, Table, SCHEMA};

#[derive(Debug, Default)]
pub struct Outcome {
    pub files: Vec<PathBuf>,
    /// Named numerical failures; non-empty means exit code 2.
    pub failures: Vec<String>,
}

impl Outcome {
    fn absorb(&mut self, other: Outcome) {
        self.files.extend(other.files);
        self.failures.extend(other.failures);
    }
}

fn states(cfg: &RunConfig) -> impl Iterator<Item = QuantumNumbers> {
    let l_max = cfg.l_max;
    (0..=cfg.n_max).flat_map(move |n| (0..=l_max).map(move |l| QuantumNumbers::new(n, l)))
}

fn sanitize(msg: &str) -> String {
    msg.replace(['\n', '\r'], " ")
}

pub const SPECTRUM_COLUMNS: [&str; 12] = [
    "scenario", "De", "r0", "m0", "n", "l", "E", "epsilon", "residual", "branch_note",
    "oracle_E", "oracle_dev",
];

/// Closed-form energies with the FD oracle alongside.
pub fn spectrum(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let grid = cfg.grid()?;
    let mut table = Table::new("spectrum", cfg, SPECTRUM_COLUMNS.to_vec());
    let mut outcome = Outcome::default();
    for &de in &cfg.depths {
        let params = cfg.params(de)?;
        for qn in states(cfg) {
            let mut row: Vec<Cell> = vec![
                cfg.scenario.tag().into(),
                de.into(),
                cfg.r0.into(),
                cfg.m0.into(),
                qn.n.into(),
                qn.l.into(),
            ];
            match solve_energy(qn, &params, cfg.scenario) {
                Ok(res) => {
                    row.extend([
                        res.energy.into(),
                        res.quasi_eigenvalue.into(),
                        res.residual.into(),
                        res.branch.note().into(),
                    ]);
                    match self_consistent_energy(qn, &params, cfg.scenario, &grid) {
                        Ok(fd) => {
                            let dev = (fd.energy - res.energy).abs() / res.energy.abs();
                            row.extend([fd.energy.into(), dev.into()]);
                        }
                        Err(e) => {
                            outcome.failures.push(format!("oracle De={de} {qn}: {e}"));
                            row.extend([Cell::Missing, Cell::Missing]);
                        }
                    }
                }
                Err(e) => {
                    outcome.failures.push(format!("De={de} {qn}: {e}"));
                    row.extend([
                        Cell::Missing,
                        Cell::Missing,
                        Cell::Missing,
                        Cell::Text(format!("failed: {}", sanitize(&e.to_string()))),
                        Cell::Missing,
                        Cell::Missing,
                    ]);
                }
            }
            table.push_row(row);
        }
    }
    let stem = format!("spectrum_{}", cfg.scenario.tag());
    outcome.files.push(table.write(&cfg.out, &stem, cfg.format)?);
    Ok(outcome)
}

/// One `r,u,u2,phi` file per `(De, n, l)`.
pub fn density(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let grid = cfg.grid()?;
    let mut outcome = Outcome::default();
    for &de in &cfg.depths {
        let params = cfg.params(de)?;
        for qn in states(cfg) {
            let solved = solve_energy(qn, &params, cfg.scenario).and_then(|res| {
                let spec = normalize(&WavefunctionSpec::from_eigen(&res), &grid)?;
                let prof = density_profile(&spec, &grid, &params, cfg.scenario)?;
                Ok((res, spec, prof))
            });
            let (res, spec, prof) = match solved {
                Ok(v) => v,
                Err(e) => {
                    outcome.failures.push(format!("density De={de} {qn}: {e}"));
                    continue;
                }
            };
            let mut table = Table::new("density", cfg, vec!["r", "u", "u2", "phi"]);
            table.meta.push("De", de);
            table.meta.push("n", qn.n);
            table.meta.push("l", qn.l);
            table.meta.push("E", crate::output::format_float(res.energy));
            table.meta.push("epsilon", crate::output::format_float(res.quasi_eigenvalue));
            table.meta.push("Lambda", crate::output::format_float(spec.lambda));
            table.meta.push("omega", crate::output::format_float(spec.omega));
            table.meta.push("norm", crate::output::format_float(spec.norm));
            for i in 0..prof.r.len() {
                table.push_row(vec![
                    prof.r[i].into(),
                    prof.u[i].into(),
                    prof.density[i].into(),
                    prof.phi[i].into(),
                ]);
            }
            let stem = format!(
                "density_{}_De{}_n{}_l{}",
                cfg.scenario.tag(),
                tag_float(de),
                qn.n,
                qn.l
            );
            outcome.files.push(table.write(&cfg.out, &stem, cfg.format)?);
        }
    }
    Ok(outcome)
}

/// Radii `r0 k / 100`, `k = 10..=400`; `k = 100` is exactly `r0`.
pub fn effpot_radii(r0: f64) -> Vec<f64> {
    (10..=400).map(|k| r0 * f64::from(k) / 100.0).collect()
}

/// `Phi(r, E)` at each solved energy; both quartic modes for constant mass,
/// plus the `x, U, U_a` comparison.
pub fn effpot(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let mut outcome = Outcome::default();
    let approx = cfg.scenario == Scenario::ApproxConstantMass;
    let columns = if approx {
        vec!["n", "l", "E", "r", "phi_full", "phi_taylor"]
    } else {
        vec!["n", "l", "E", "r", "phi"]
    };
    let radii = effpot_radii(cfg.r0);
    for &de in &cfg.depths {
        let params = cfg.params(de)?;
        let mut table = Table::new("effpot", cfg, columns.clone());
        table.meta.push("De", de);
        for qn in states(cfg) {
            let res = match solve_energy(qn, &params, cfg.scenario) {
                Ok(r) => r,
                Err(e) => {
                    outcome.failures.push(format!("effpot De={de} {qn}: {e}"));
                    continue;
                }
            };
            for &r in &radii {
                let phi = |mode| effective_potential(r, res.energy, &params, cfg.scenario, mode);
                let mut row: Vec<Cell> = vec![qn.n.into(), qn.l.into(), res.energy.into(), r.into()];
                if approx {
                    row.push(phi(QuarticMode::Full)?.into());
                }
                row.push(phi(QuarticMode::Taylor)?.into());
                table.push_row(row);
            }
        }
        let stem = format!("effpot_{}_De{}", cfg.scenario.tag(), tag_float(de));
        outcome.files.push(table.write(&cfg.out, &stem, cfg.format)?);
    }
    if approx {
        let mut table = Table::new("taylor", cfg, vec!["x", "U", "U_a", "diff"]);
        for k in 40..=250 {
            let x = f64::from(k) / 100.0;
            let u = quartic_u(x)?;
            let ua = quartic_taylor(x, &TaylorCoefficients::EXPANSION)?;
            table.push_row(vec![x.into(), u.into(), ua.into(), (u - ua).into()]);
        }
        outcome.files.push(table.write(&cfg.out, "taylor_comparison", cfg.format)?);
    }
    Ok(outcome)
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub report: &'static str,
    pub config: Pairs,
    pub hard_passed: bool,
    pub failed_checks: Vec<String>,
    pub caveat: &'static str,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new(kind: &'static str, cfg: &RunConfig, checks: Vec<Check>) -> Self {
        let failed_checks: Vec<String> = checks
            .iter()
            .filter(|c| c.kind == CheckKind::Hard && !c.passed)
            .map(|c| c.name.clone())
            .collect();
        Self {
            schema: SCHEMA,
            report: kind,
            config: Pairs::from_config(cfg),
            hard_passed: failed_checks.is_empty(),
            failed_checks,
            caveat: checks::CAVEAT,
            checks,
        }
    }

    pub fn write(&self, dir: &Path, name: &str) -> Result<PathBuf, CliError> {
        let mut text = serde_json::to_string_pretty(self).expect("report serialises");
        text.push('\n');
        write_file(dir, name, &text)
    }
}

/// Hard invariants plus the informational reference block.
pub fn verify(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let grid = cfg.grid()?;
    let mut all = checks::hard_checks(cfg);
    all.extend(
        checks::reference_checks(&grid)
            .into_iter()
            .map(Check::informational),
    );
    all.extend(checks::trend_checks(&grid).into_iter().map(Check::informational));
    let report = Report::new("verify", cfg, all);
    let path = report.write(&cfg.out, "verify_report.json")?;
    Ok(Outcome {
        files: vec![path],
        failures: report
            .failed_checks
            .iter()
            .map(|n| format!("hard check failed: {n}"))
            .collect(),
    })
}

/// Spectra, densities and potentials for the two plotted parameter sets,
/// and a report comparing them with the reference values.
pub fn reproduce_figures(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let mut outcome = Outcome::default();
    for (scenario, depths) in [
        (Scenario::ExactVariableMass, checks::EXACT_DEPTHS),
        (Scenario::ApproxConstantMass, checks::APPROX_DEPTHS),
    ] {
        let sub = RunConfig {
            scenario,
            depths: depths.to_vec(),
            r0: 1.0,
            m0: 1.0,
            n_max: 2,
            l_max: 2,
            out: cfg.out.join(scenario.tag()),
            perturb: 0.0,
            ..cfg.clone()
        };
        outcome.absorb(spectrum(&sub)?);
        outcome.absorb(density(&sub)?);
        outcome.absorb(effpot(&sub)?);
    }
    let grid = cfg.grid()?;
    let mut all: Vec<Check> = checks::reference_checks(&grid);
    all.extend(checks::trend_checks(&grid).into_iter().map(Check::informational));
    let report = Report::new("reproduction", cfg, all);
    outcome.files.push(report.write(&cfg.out, "reproduction_report.json")?);
    Ok(outcome)
}
