//! Pseudo-dot potential, the quartic term and its expansion, effective
//! potentials and the `E -> epsilon` maps of both scenarios.
//!
//! The canonical dimensionless variable for the quartic is `x = r^2 / r0^2`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Physical inputs in natural units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConfinementParams {
    /// `De`, fm⁻¹.
    pub well_depth: f64,
    /// `r0`, fm.
    pub equilibrium_radius: f64,
    /// `m0`, fm⁻¹.
    pub rest_mass: f64,
}

impl ConfinementParams {
    pub fn new(well_depth: f64, equilibrium_radius: f64, rest_mass: f64) -> Result<Self> {
        let p = Self {
            well_depth,
            equilibrium_radius,
            rest_mass,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("well depth", self.well_depth),
            ("equilibrium radius", self.equilibrium_radius),
            ("rest mass", self.rest_mass),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::Domain(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(())
    }
}

/// Which reduction of the Klein-Gordon equation governs the states.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scenario {
    /// Mass `m0 + S(r)` with `S(r) = V(r)`.
    ExactVariableMass,
    /// Mass `m0`, `S(r) = 0`; the quartic is replaced by its expansion.
    ApproxConstantMass,
}

impl Scenario {
    pub fn tag(self) -> &'static str {
        match self {
            Scenario::ExactVariableMass => "exact",
            Scenario::ApproxConstantMass => "approx",
        }
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Scenario {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(Scenario::ExactVariableMass),
            "approx" => Ok(Scenario::ApproxConstantMass),
            other => Err(Error::Domain(format!(
                "unknown scenario `{other}` (expected `exact` or `approx`)"
            ))),
        }
    }
}

/// Treatment of `x^2 + 1/x^2` in the constant-mass effective potential.
/// Ignored for [`Scenario::ExactVariableMass`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuarticMode {
    /// The exact quartic. The resulting operator is unbounded below, so this
    /// mode is only used for plotting.
    Full,
    /// Expansion about `x = 1`; the mode used for quantization.
    Taylor,
}

/// `x^2 + 1/x^2 ≈ constant + linear x + inverse / x` about `x = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TaylorCoefficients {
    pub constant: i32,
    pub linear: i32,
    pub inverse: i32,
}

impl TaylorCoefficients {
    pub const EXPANSION: TaylorCoefficients = TaylorCoefficients {
        constant: -6,
        linear: 4,
        inverse: 4,
    };

    pub fn eval(&self, x: f64) -> f64 {
        f64::from(self.constant) + f64::from(self.linear) * x + f64::from(self.inverse) / x
    }

    /// Coefficients of `c + l x + i/x` matching a function's value, slope and
    /// curvature at `x = 1`. `None` unless all three come out integral.
    pub fn match_at_unity(value: f64, slope: f64, curvature: f64) -> Option<Self> {
        // c + l + i = value, l - i = slope, 2 i = curvature
        let inverse = curvature / 2.0;
        let linear = slope + inverse;
        let constant = value - linear - inverse;
        let to_int = |v: f64| {
            let r = v.round();
            (v == r && r.abs() < f64::from(i32::MAX)).then_some(r as i32)
        };
        Some(Self {
            constant: to_int(constant)?,
            linear: to_int(linear)?,
            inverse: to_int(inverse)?,
        })
    }
}

/// `(U, U', U'', U''')` of `U(x) = x^2 + 1/x^2`.
pub fn quartic_u_jet(x: f64) -> Result<[f64; 4]> {
    require_positive("x", x)?;
    Ok([
        x * x + x.powi(-2),
        2.0 * x - 2.0 * x.powi(-3),
        2.0 + 6.0 * x.powi(-4),
        -24.0 * x.powi(-5),
    ])
}

impl Default for TaylorCoefficients {
    fn default() -> Self {
        Self::EXPANSION
    }
}

fn require_positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("{name} must be > 0, got {v}")))
    }
}

/// `V(r) = De (r/r0 - r0/r)^2`.
pub fn potential_v(r: f64, params: &ConfinementParams) -> Result<f64> {
    require_positive("r", r)?;
    let r0 = params.equilibrium_radius;
    let t = r / r0 - r0 / r;
    Ok(params.well_depth * t * t)
}

/// `U(x) = x^2 + 1/x^2`.
pub fn quartic_u(x: f64) -> Result<f64> {
    require_positive("x", x)?;
    Ok(x * x + 1.0 / (x * x))
}

/// `A0 + A1 x + A2 / x`.
pub fn quartic_taylor(x: f64, coeffs: &TaylorCoefficients) -> Result<f64> {
    require_positive("x", x)?;
    Ok(coeffs.eval(x))
}

/// Effective potential `Phi(r)` at energy `e`, in fm⁻².
///
/// * exact: `2 (E + m0) V(r)`
/// * approx, full quartic: `De (2E + 4De)(x + 1/x) - De^2 (x^2 + 1/x^2)`
/// * approx, Taylor: the same with the quartic expanded, which reduces to
///   `2 E De (x + 1/x) + 6 De^2`
pub fn effective_potential(
    r: f64,
    e: f64,
    params: &ConfinementParams,
    scenario: Scenario,
    mode: QuarticMode,
) -> Result<f64> {
    require_positive("r", r)?;
    let de = params.well_depth;
    match scenario {
        Scenario::ExactVariableMass => {
            let shifted = e + params.rest_mass;
            if shifted <= 0.0 {
                return Err(Error::Branch(format!(
                    "exact scenario requires E + m0 > 0, got E = {e}"
                )));
            }
            Ok(2.0 * shifted * potential_v(r, params)?)
        }
        Scenario::ApproxConstantMass => {
            let x = (r / params.equilibrium_radius).powi(2);
            let quartic = match mode {
                QuarticMode::Full => quartic_u(x)?,
                QuarticMode::Taylor => quartic_taylor(x, &TaylorCoefficients::EXPANSION)?,
            };
            Ok(de * (2.0 * e + 4.0 * de) * (x + 1.0 / x) - de * de * quartic)
        }
    }
}

/// Quasi-eigenvalue `epsilon(E)`, fm⁻².
pub fn epsilon_map(e: f64, params: &ConfinementParams, scenario: Scenario) -> f64 {
    let m0 = params.rest_mass;
    let de = params.well_depth;
    match scenario {
        Scenario::ExactVariableMass => e * e - m0 * m0,
        Scenario::ApproxConstantMass => e * e - m0 * m0 + 4.0 * e * de + 6.0 * de * de,
    }
}
