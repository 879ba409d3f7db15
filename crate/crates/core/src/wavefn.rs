//! Analytic radial eigenfunctions
//! `u(r) = N r^(Lambda+1) exp(-omega r^2 / 2) M(-n, Lambda + 3/2, omega r^2)`,
//! their normalisation and sampled densities.

use crate::error::{Error, Result};
use crate::model::{effective_potential, epsilon_map, ConfinementParams, QuarticMode, Scenario};
use crate::oracle::{count_nodes, RadialGrid};
use crate::quadrature::{simpson, trapezoid};
use crate::specfun::{kummer_m, kummer_m_derivative, kummer_m_second_derivative, KummerArgs};
use crate::spectra::{EigenResult, QuantumNumbers};

/// Beyond `omega r^2 > UNDERFLOW_ARG` the function is flushed to zero.
pub const UNDERFLOW_ARG: f64 = 700.0;

/// Largest tail amplitude, relative to the peak, accepted by [`normalize`].
pub const TAIL_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WavefunctionSpec {
    pub qn: QuantumNumbers,
    pub energy: f64,
    pub lambda: f64,
    pub omega: f64,
    /// Normalisation constant `N`.
    pub norm: f64,
}

impl WavefunctionSpec {
    /// Un-normalised (`N = 1`) wavefunction of a solved state.
    pub fn from_eigen(result: &EigenResult) -> Self {
        Self {
            qn: result.qn,
            energy: result.energy,
            lambda: result.effective_lambda,
            omega: result.oscillator_freq,
            norm: 1.0,
        }
    }

    fn kummer_args(&self, y: f64) -> KummerArgs {
        KummerArgs::new(-f64::from(self.qn.n), self.lambda + 1.5, y)
    }

    /// `r^(Lambda+1) exp(-omega r^2/2)` without the normalisation.
    fn envelope(&self, r: f64) -> f64 {
        ((self.lambda + 1.0) * r.ln() - 0.5 * self.omega * r * r).exp()
    }
}

fn check_r(r: f64) -> Result<()> {
    if r > 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("r must be > 0, got {r}")))
    }
}

/// `u(r)`.
pub fn radial_wavefunction(r: f64, spec: &WavefunctionSpec) -> Result<f64> {
    check_r(r)?;
    let y = spec.omega * r * r;
    if y > UNDERFLOW_ARG {
        return Ok(0.0);
    }
    Ok(spec.norm * spec.envelope(r) * kummer_m(spec.kummer_args(y))?)
}

/// `(u, u', u'')` at `r`, using the Kummer derivative recurrence and the
/// product rule.
pub fn radial_derivatives(r: f64, spec: &WavefunctionSpec) -> Result<(f64, f64, f64)> {
    check_r(r)?;
    let w = spec.omega;
    let y = w * r * r;
    if y > UNDERFLOW_ARG {
        return Ok((0.0, 0.0, 0.0));
    }
    let args = spec.kummer_args(y);
    let m = kummer_m(args)?;
    let m_y = kummer_m_derivative(args)?;
    let m_yy = kummer_m_second_derivative(args)?;
    let dy = 2.0 * w * r;
    let m_r = m_y * dy;
    let m_rr = m_yy * dy * dy + m_y * 2.0 * w;

    let p = spec.lambda + 1.0;
    let a = spec.envelope(r);
    let log_d = p / r - w * r;
    let a_r = a * log_d;
    let a_rr = a * (log_d * log_d - p / (r * r) - w);

    let n = spec.norm;
    Ok((
        n * a * m,
        n * (a_r * m + a * m_r),
        n * (a_rr * m + 2.0 * a_r * m_r + a * m_rr),
    ))
}

/// Relative residual of `u'' + [epsilon - Phi - l(l+1)/r^2] u = 0` at `r`,
/// divided by the largest of the four terms.
pub fn ode_residual(
    r: f64,
    spec: &WavefunctionSpec,
    params: &ConfinementParams,
    scenario: Scenario,
) -> Result<f64> {
    let (u, _, u_rr) = radial_derivatives(r, spec)?;
    let eps = epsilon_map(spec.energy, params, scenario);
    let phi = effective_potential(r, spec.energy, params, scenario, QuarticMode::Taylor)?;
    let cent = f64::from(spec.qn.l * (spec.qn.l + 1)) / (r * r);
    let terms = [u_rr, eps * u, phi * u, cent * u];
    let scale = terms.iter().fold(0.0_f64, |m, t| m.max(t.abs()));
    if scale == 0.0 {
        return Ok(0.0);
    }
    Ok((u_rr + (eps - phi - cent) * u).abs() / scale)
}

fn sample(spec: &WavefunctionSpec, grid: &RadialGrid) -> Result<Vec<f64>> {
    grid.nodes()
        .into_iter()
        .map(|r| radial_wavefunction(r, spec))
        .collect()
}

fn check_tail(u: &[f64]) -> Result<()> {
    let peak = u.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    if peak == 0.0 {
        return Err(Error::Integration("wavefunction vanishes on the grid".into()));
    }
    let last = u.last().copied().unwrap_or(0.0).abs();
    if last > TAIL_TOL * peak {
        return Err(Error::Integration(format!(
            "grid does not cover the support: |u(r_max)| / max|u| = {:e}",
            last / peak
        )));
    }
    Ok(())
}

/// Rescales `N` so that the Simpson integral of `u^2` over the grid is 1.
pub fn normalize(spec: &WavefunctionSpec, grid: &RadialGrid) -> Result<WavefunctionSpec> {
    let u = sample(spec, grid)?;
    check_tail(&u)?;
    let density: Vec<f64> = u.iter().map(|v| v * v).collect();
    let integral = simpson(&density, grid.spacing());
    if !(integral > 0.0 && integral.is_finite()) {
        return Err(Error::Integration(format!("bad norm integral {integral}")));
    }
    Ok(WavefunctionSpec {
        norm: spec.norm / integral.sqrt(),
        ..*spec
    })
}

/// Sampled `u`, `|u|^2` and `Phi` on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialProfile {
    pub r: Vec<f64>,
    pub u: Vec<f64>,
    pub density: Vec<f64>,
    pub phi: Vec<f64>,
}

impl RadialProfile {
    pub fn spacing(&self) -> f64 {
        if self.r.len() < 2 {
            0.0
        } else {
            self.r[1] - self.r[0]
        }
    }

    /// Trapezoidal integral of the density.
    pub fn total_probability(&self) -> f64 {
        trapezoid(&self.density, self.spacing())
    }

    pub fn node_count(&self) -> usize {
        count_nodes(&self.u)
    }

    /// Radius of the density maximum.
    pub fn peak_radius(&self) -> f64 {
        let (i, _) = self
            .density
            .iter()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |best, (i, &d)| if d > best.1 { (i, d) } else { best });
        self.r[i]
    }
}

/// Samples a normalised wavefunction and the scenario's effective potential
/// (Taylor mode for constant mass) at the state's energy.
pub fn density_profile(
    spec: &WavefunctionSpec,
    grid: &RadialGrid,
    params: &ConfinementParams,
    scenario: Scenario,
) -> Result<RadialProfile> {
    let r = grid.nodes();
    let u = sample(spec, grid)?;
    check_tail(&u)?;
    let density = u.iter().map(|v| v * v).collect();
    let phi = r
        .iter()
        .map(|&ri| effective_potential(ri, spec.energy, params, scenario, QuarticMode::Taylor))
        .collect::<Result<Vec<_>>>()?;
    Ok(RadialProfile { r, u, density, phi })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectra::solve_energy;

    fn ground(de: f64, scenario: Scenario) -> (ConfinementParams, EigenResult) {
        let p = ConfinementParams::new(de, 1.0, 1.0).unwrap();
        let r = solve_energy(QuantumNumbers::new(0, 0), &p, scenario).unwrap();
        (p, r)
    }

    #[test]
    fn ground_state_is_pure_envelope() {
        let (_, res) = ground(1.0, Scenario::ExactVariableMass);
        let spec = WavefunctionSpec::from_eigen(&res);
        for r in [0.3_f64, 1.0, 2.2] {
            let want = r.powf(spec.lambda + 1.0) * (-0.5 * spec.omega * r * r).exp();
            let got = radial_wavefunction(r, &spec).unwrap();
            assert!((got - want).abs() <= 1e-14 * want.abs().max(1e-300));
        }
        assert!(radial_wavefunction(0.0, &spec).is_err());
    }

    #[test]
    fn underflow_flush() {
        let (_, res) = ground(1.0, Scenario::ExactVariableMass);
        let spec = WavefunctionSpec::from_eigen(&res);
        let r = (701.0 / spec.omega).sqrt();
        assert_eq!(radial_wavefunction(r, &spec).unwrap(), 0.0);
        assert_eq!(radial_derivatives(r, &spec).unwrap(), (0.0, 0.0, 0.0));
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let p = ConfinementParams::new(2.0, 1.0, 1.0).unwrap();
        let res = solve_energy(QuantumNumbers::new(2, 1), &p, Scenario::ExactVariableMass).unwrap();
        let spec = WavefunctionSpec::from_eigen(&res);
        let h = 1e-4;
        for r in [0.5, 0.9, 1.4] {
            let u = |x| radial_wavefunction(x, &spec).unwrap();
            let (u0, d1, d2) = radial_derivatives(r, &spec).unwrap();
            assert!((u0 - u(r)).abs() < 1e-15);
            let fd1 = (u(r + h) - u(r - h)) / (2.0 * h);
            let fd2 = (u(r + h) - 2.0 * u(r) + u(r - h)) / (h * h);
            let scale = d2.abs().max(1.0);
            assert!((d1 - fd1).abs() < 1e-6 * scale);
            assert!((d2 - fd2).abs() < 1e-5 * scale);
        }
    }

    #[test]
    fn normalize_is_idempotent_and_projective() {
        let (_, res) = ground(1.0, Scenario::ExactVariableMass);
        let grid = RadialGrid::default();
        let spec = WavefunctionSpec::from_eigen(&res);
        let once = normalize(&spec, &grid).unwrap();
        let twice = normalize(&once, &grid).unwrap();
        assert!((once.norm - twice.norm).abs() <= 1e-12 * once.norm);
        let scaled = WavefunctionSpec { norm: 7.0, ..spec };
        let from_scaled = normalize(&scaled, &grid).unwrap();
        assert!((from_scaled.norm - once.norm).abs() <= 1e-12 * once.norm);
    }

    #[test]
    fn simpson_and_trapezoid_agree() {
        let (_, res) = ground(1.0, Scenario::ExactVariableMass);
        let grid = RadialGrid::default();
        let spec = normalize(&WavefunctionSpec::from_eigen(&res), &grid).unwrap();
        let dens: Vec<f64> = grid
            .nodes()
            .iter()
            .map(|&r| radial_wavefunction(r, &spec).unwrap().powi(2))
            .collect();
        let s = simpson(&dens, grid.spacing());
        let t = trapezoid(&dens, grid.spacing());
        assert!((s - t).abs() < 1e-7);
        assert!((t - 1.0).abs() < 1e-8);
    }

    #[test]
    fn short_grid_is_rejected() {
        let (_, res) = ground(1.0, Scenario::ExactVariableMass);
        let grid = RadialGrid::origin_anchored(1.0, 500).unwrap();
        let err = normalize(&WavefunctionSpec::from_eigen(&res), &grid).unwrap_err();
        assert!(matches!(err, Error::Integration(_)));
    }

    #[test]
    fn density_profile_properties() {
        let (p, res) = ground(1.0, Scenario::ExactVariableMass);
        let grid = RadialGrid::default();
        let spec = normalize(&WavefunctionSpec::from_eigen(&res), &grid).unwrap();
        let prof = density_profile(&spec, &grid, &p, Scenario::ExactVariableMass).unwrap();
        assert!((prof.total_probability() - 1.0).abs() < 1e-6);
        assert_eq!(prof.node_count(), 0);
        let peak = prof.peak_radius();
        assert!((0.8..=1.2).contains(&peak), "{peak}");
        let max_u = prof.u.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        assert!(prof.u.last().unwrap().abs() <= 1e-6 * max_u);
        assert!(prof.u[0].abs() < 1e-6 * max_u);
    }

    #[test]
    fn ode_residual_is_small_for_excited_states() {
        for scenario in [Scenario::ExactVariableMass, Scenario::ApproxConstantMass] {
            let p = ConfinementParams::new(2.0, 1.0, 1.0).unwrap();
            for (n, l) in [(0, 0), (1, 1), (2, 2), (3, 0)] {
                let res = solve_energy(QuantumNumbers::new(n, l), &p, scenario).unwrap();
                let spec = WavefunctionSpec::from_eigen(&res);
                for i in 0..60 {
                    let r = 0.1 + 5.9 * i as f64 / 59.0;
                    let rel = ode_residual(r, &spec, &p, scenario).unwrap();
                    assert!(rel <= 1e-8, "{scenario} ({n},{l}) r={r}: {rel}");
                }
            }
        }
    }
}
