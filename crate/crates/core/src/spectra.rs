//! Closed-form quantization and energy solving.
//!
//! Both scenarios reduce to the radial problem
//!
//! ```text
//! u'' + [kappa - omega^2 r^2 - Lambda(Lambda + 1) / r^2] u = 0
//! ```
//!
//! with `Lambda(Lambda + 1) = l(l + 1) + g`. A terminating Kummer series,
//! `M(-n, Lambda + 3/2, omega r^2)`, requires
//! `kappa = 2 omega (2n + Lambda + 3/2)`; every coefficient depends on `E`,
//! so the condition is an implicit equation solved by bracketing.

use std::fmt;

use crate::error::{Error, Result};
use crate::model::{epsilon_map, ConfinementParams, Scenario};
use crate::roots::{bisect_secant, geometric_grid, scan_sign_changes, Bracket};

/// Offset from the lower branch endpoint where the energy scan starts.
pub const BRANCH_OFFSET: f64 = 1e-9;

/// Points in the energy scan grid.
pub const SCAN_POINTS: usize = 256;

/// Bisection width before the secant polish.
pub const ENERGY_TOL: f64 = 1e-12;

/// Number of times the scan window is doubled before giving up.
pub const MAX_EXTENSIONS: usize = 4;

/// Largest `n` or `l` accepted by [`spectrum_table`].
pub const MAX_TABLE_INDEX: u32 = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuantumNumbers {
    pub n: u32,
    pub l: u32,
}

impl QuantumNumbers {
    pub fn new(n: u32, l: u32) -> Self {
        Self { n, l }
    }
}

impl fmt::Display for QuantumNumbers {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.n, self.l)
    }
}

/// Coefficients of the pseudoharmonic radial problem at a given energy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScenarioCoefficients {
    /// Constant term `kappa`, fm⁻².
    pub kappa: f64,
    /// Oscillator frequency `omega` entering `omega^2 r^2`, fm⁻².
    pub omega: f64,
    /// Dimensionless inverse-square coupling `g`.
    pub coupling: f64,
}

/// Energy-dependent factor multiplying `V(r)` in each scenario:
/// `E + m0` for variable mass, `E` for constant mass.
fn coupling_energy(e: f64, params: &ConfinementParams, scenario: Scenario) -> f64 {
    match scenario {
        Scenario::ExactVariableMass => e + params.rest_mass,
        Scenario::ApproxConstantMass => e,
    }
}

/// `kappa`, `omega`, `g` for `scenario` at energy `e`.
///
/// With `s` the coupling energy, `kappa = E^2 - m0^2 + 4 s De`,
/// `omega = sqrt(2 s De) / r0`, `g = 2 s De r0^2`.
pub fn scenario_coefficients(
    e: f64,
    params: &ConfinementParams,
    scenario: Scenario,
) -> Result<ScenarioCoefficients> {
    let s = coupling_energy(e, params, scenario);
    if !(s > 0.0) {
        return Err(Error::Branch(match scenario {
            Scenario::ExactVariableMass => format!("exact scenario requires E > -m0, got {e}"),
            Scenario::ApproxConstantMass => format!("approximate scenario requires E > 0, got {e}"),
        }));
    }
    let m0 = params.rest_mass;
    let de = params.well_depth;
    let r0 = params.equilibrium_radius;
    Ok(ScenarioCoefficients {
        kappa: e * e - m0 * m0 + 4.0 * s * de,
        omega: (2.0 * s * de).sqrt() / r0,
        coupling: 2.0 * s * de * r0 * r0,
    })
}

/// `Lambda = -1/2 + sqrt((l + 1/2)^2 + g)`, so that
/// `Lambda (Lambda + 1) = l (l + 1) + g`.
pub fn lambda_eff(l: u32, g: f64) -> Result<f64> {
    let lh = f64::from(l) + 0.5;
    let disc = lh * lh + g;
    if !(disc >= 0.0) {
        return Err(Error::Domain(format!(
            "(l + 1/2)^2 + g must be non-negative, got {disc}"
        )));
    }
    Ok(-0.5 + disc.sqrt())
}

/// `F(E) = kappa - 2 omega (2n + Lambda + 3/2)`; roots are eigenvalues.
pub fn quantization_residual(
    e: f64,
    qn: QuantumNumbers,
    params: &ConfinementParams,
    scenario: Scenario,
) -> Result<f64> {
    let c = scenario_coefficients(e, params, scenario)?;
    let lambda = lambda_eff(qn.l, c.coupling)?;
    Ok(c.kappa - 2.0 * c.omega * (2.0 * f64::from(qn.n) + lambda + 1.5))
}

/// Where a solved energy sits relative to the rest mass.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    AboveRestMass,
    AtRestMass,
    BelowRestMass,
}

impl Branch {
    pub fn classify(e: f64, rest_mass: f64) -> Self {
        if e > rest_mass {
            Branch::AboveRestMass
        } else if e < rest_mass {
            Branch::BelowRestMass
        } else {
            Branch::AtRestMass
        }
    }

    pub fn note(self) -> &'static str {
        match self {
            Branch::AboveRestMass => "E>m0",
            Branch::AtRestMass => "E=m0",
            Branch::BelowRestMass => "E<m0",
        }
    }
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.note())
    }
}

/// A solved bound state.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenResult {
    pub qn: QuantumNumbers,
    pub scenario: Scenario,
    /// `E`, fm⁻¹.
    pub energy: f64,
    /// `epsilon(E)`, fm⁻².
    pub quasi_eigenvalue: f64,
    pub effective_lambda: f64,
    pub oscillator_freq: f64,
    /// `F(E)` at the returned root.
    pub residual: f64,
    /// Scan bracket that contained the root.
    pub bracket: (f64, f64),
    pub branch: Branch,
}

impl EigenResult {
    /// Residual bound `|F| <= 1e-10 max(1, |epsilon|)`.
    pub fn residual_ok(&self) -> bool {
        self.residual.abs() <= 1e-10 * self.quasi_eigenvalue.abs().max(1.0)
    }

    /// `epsilon` rebuilt from the quantization identity,
    /// `2 omega (2n + Lambda + 3/2) - (kappa - epsilon)`.
    pub fn reconstructed_epsilon(&self, params: &ConfinementParams) -> Result<f64> {
        let c = scenario_coefficients(self.energy, params, self.scenario)?;
        let offset = c.kappa - self.quasi_eigenvalue;
        Ok(2.0 * c.omega * (2.0 * f64::from(self.qn.n) + self.effective_lambda + 1.5) - offset)
    }
}

/// Lower endpoint of the admissible energy branch.
pub fn branch_floor(params: &ConfinementParams, scenario: Scenario) -> f64 {
    match scenario {
        Scenario::ExactVariableMass => -params.rest_mass,
        Scenario::ApproxConstantMass => 0.0,
    }
}

/// Initial upper end of the scan, `m0 + 20 De + 10 (n + l + 1)`.
pub fn initial_ceiling(qn: QuantumNumbers, params: &ConfinementParams) -> f64 {
    params.rest_mass + 20.0 * params.well_depth + 10.0 * f64::from(qn.n + qn.l + 1)
}

/// Scan grids for successive window extensions: the first covers
/// `(floor + offset, ceiling]`, each next one doubles the window.
pub fn scan_grids(
    qn: QuantumNumbers,
    params: &ConfinementParams,
    scenario: Scenario,
) -> impl Iterator<Item = Vec<f64>> {
    let lo = branch_floor(params, scenario);
    let span = initial_ceiling(qn, params) - lo;
    (0..=MAX_EXTENSIONS).map(move |k| {
        let hi = lo + span * f64::from(1u32 << k);
        geometric_grid(lo, hi, BRANCH_OFFSET, SCAN_POINTS)
    })
}

fn build_result(
    e: f64,
    bracket: &Bracket,
    qn: QuantumNumbers,
    params: &ConfinementParams,
    scenario: Scenario,
) -> Result<EigenResult> {
    let c = scenario_coefficients(e, params, scenario)?;
    Ok(EigenResult {
        qn,
        scenario,
        energy: e,
        quasi_eigenvalue: epsilon_map(e, params, scenario),
        effective_lambda: lambda_eff(qn.l, c.coupling)?,
        oscillator_freq: c.omega,
        residual: quantization_residual(e, qn, params, scenario)?,
        bracket: (bracket.lo, bracket.hi),
        branch: Branch::classify(e, params.rest_mass),
    })
}

/// Every root of `F` found on the scan grid, ascending in energy.
pub fn solve_energy_all(
    qn: QuantumNumbers,
    params: &ConfinementParams,
    scenario: Scenario,
) -> Result<Vec<EigenResult>> {
    params.validate()?;
    let f = |e: f64| quantization_residual(e, qn, params, scenario);
    let mut last_hi = 0.0;
    for grid in scan_grids(qn, params, scenario) {
        last_hi = *grid.last().unwrap();
        let brackets = scan_sign_changes(f, &grid)?;
        if brackets.is_empty() {
            continue;
        }
        return brackets
            .iter()
            .map(|b| {
                let e = bisect_secant(f, *b, ENERGY_TOL)?;
                build_result(e, b, qn, params, scenario)
            })
            .collect();
    }
    Err(Error::NoRootFound {
        what: format!("{scenario} state {qn}"),
        lo: branch_floor(params, scenario),
        hi: last_hi,
    })
}

/// Lowest root of `F`: the physical selection policy. The branch relative
/// to `m0` is recorded in [`EigenResult::branch`], never assumed.
pub fn solve_energy(
    qn: QuantumNumbers,
    params: &ConfinementParams,
    scenario: Scenario,
) -> Result<EigenResult> {
    solve_energy_all(qn, params, scenario)?
        .into_iter()
        .next()
        .ok_or_else(|| Error::NoRootFound {
            what: format!("{scenario} state {qn}"),
            lo: branch_floor(params, scenario),
            hi: initial_ceiling(qn, params),
        })
}

/// One row of a spectrum table; failures are kept, not propagated.
#[derive(Debug, Clone, PartialEq)]
pub struct TableEntry {
    pub qn: QuantumNumbers,
    pub result: Result<EigenResult>,
}

/// All `(n, l)` with `n <= n_max`, `l <= l_max`, in lexicographic order.
pub fn spectrum_table(
    n_max: u32,
    l_max: u32,
    params: &ConfinementParams,
    scenario: Scenario,
) -> Result<Vec<TableEntry>> {
    if n_max > MAX_TABLE_INDEX || l_max > MAX_TABLE_INDEX {
        return Err(Error::Domain(format!(
            "n_max and l_max must be <= {MAX_TABLE_INDEX}, got ({n_max}, {l_max})"
        )));
    }
    params.validate()?;
    Ok((0..=n_max)
        .flat_map(|n| (0..=l_max).map(move |l| QuantumNumbers::new(n, l)))
        .map(|qn| TableEntry {
            qn,
            result: solve_energy(qn, params, scenario),
        })
        .collect())
}
