//! Finite-difference radial eigensolver used as an independent check on the
//! closed-form spectra.
//!
//! The unknown is the reduced radial function `u(r) = r psi(r)` on a uniform
//! grid, with Dirichlet ghost nodes one spacing outside either end. The
//! operator `-u'' + [Phi(r) + l(l+1)/r^2] u` becomes a symmetric tridiagonal
//! matrix whose low eigenvalues are found by Sturm bisection.
//!
//! Because `Phi` and `epsilon` both depend on `E`, a state is located by
//! solving `G(E) = eps_fd_n(E) - epsilon(E) = 0` where `eps_fd_n(E)` is the
//! `n`-th level of the problem frozen at `E`.

pub mod tridiag;

use crate::error::{Error, Result};
use crate::model::{effective_potential, epsilon_map, ConfinementParams, QuarticMode, Scenario};
use crate::roots::brackets_from_samples;
use crate::spectra::{scan_grids, QuantumNumbers};

pub use tridiag::SymTridiagonal;

/// Smallest admissible first node, fm.
pub const MIN_R: f64 = 1e-4;
/// Smallest admissible number of nodes.
pub const MIN_POINTS: usize = 100;
/// Largest number of levels [`fd_eigen`] returns.
pub const MAX_LEVELS: usize = 10;
/// Required margin of `Phi(r_max)` over `epsilon`, fm⁻².
pub const TAIL_MARGIN: f64 = 50.0;
/// Default outer radius, fm.
pub const DEFAULT_R_MAX: f64 = 12.0;
/// Default number of nodes.
pub const DEFAULT_POINTS: usize = 6000;
/// Energy width at which sign bisection hands over to the secant step.
pub const ORACLE_ENERGY_TOL: f64 = 1e-9;
/// How many times `r_max` may be doubled to satisfy the tail rule.
pub const MAX_TAIL_EXTENSIONS: usize = 4;
/// Amplitude below which samples are ignored when counting nodes,
/// relative to the largest sample.
pub const NODE_THRESHOLD: f64 = 1e-9;

/// Uniform radial grid `r_i = r_min + i h`, `h = (r_max - r_min)/(J - 1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialGrid {
    pub r_min: f64,
    pub r_max: f64,
    pub points: usize,
}

impl RadialGrid {
    pub fn new(r_min: f64, r_max: f64, points: usize) -> Result<Self> {
        if !(r_min >= MIN_R) {
            return Err(Error::Grid(format!("r_min must be >= {MIN_R}, got {r_min}")));
        }
        if !(r_max > r_min) || !r_max.is_finite() {
            return Err(Error::Grid(format!("need r_max > r_min, got [{r_min}, {r_max}]")));
        }
        if points < MIN_POINTS {
            return Err(Error::Grid(format!("need at least {MIN_POINTS} points, got {points}")));
        }
        Ok(Self {
            r_min,
            r_max,
            points,
        })
    }

    /// Grid with `r_min = h`, so the inner ghost node sits exactly at the
    /// origin where `u(0) = 0`.
    pub fn origin_anchored(r_max: f64, points: usize) -> Result<Self> {
        Self::new(r_max / points as f64, r_max, points)
    }

    pub fn spacing(&self) -> f64 {
        (self.r_max - self.r_min) / (self.points - 1) as f64
    }

    pub fn node(&self, i: usize) -> f64 {
        if i + 1 == self.points {
            self.r_max
        } else {
            self.r_min + i as f64 * self.spacing()
        }
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.points).map(|i| self.node(i)).collect()
    }

    /// Same spacing and origin, outer edge moved to at least `r_max`.
    pub fn extended_to(&self, r_max: f64) -> Self {
        let h = self.spacing();
        let extra = ((r_max - self.r_max) / h).ceil().max(0.0) as usize;
        Self {
            r_min: self.r_min,
            r_max: self.r_max + extra as f64 * h,
            points: self.points + extra,
        }
    }

    /// Same interval at half the spacing, for convergence checks. An
    /// origin-anchored grid stays anchored.
    pub fn refined(&self) -> Self {
        let h = self.spacing();
        if (self.r_min - h).abs() <= 1e-9 * h {
            Self {
                r_min: 0.5 * h,
                r_max: self.r_max,
                points: 2 * self.points,
            }
        } else {
            Self {
                points: 2 * self.points - 1,
                ..*self
            }
        }
    }
}

impl Default for RadialGrid {
    fn default() -> Self {
        Self::origin_anchored(DEFAULT_R_MAX, DEFAULT_POINTS).expect("default grid is valid")
    }
}

/// Output of [`fd_eigen`]. Eigenvectors are sampled `u(r_i)`, normalised so
/// the trapezoidal integral of `u^2` is 1, and positive on their first lobe.
#[derive(Debug, Clone, PartialEq)]
pub struct FdEigenOutput {
    pub grid: RadialGrid,
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Vec<Vec<f64>>,
    pub node_counts: Vec<usize>,
}

/// Interior sign changes, skipping samples below [`NODE_THRESHOLD`] of the
/// peak amplitude.
pub fn count_nodes(samples: &[f64]) -> usize {
    let peak = samples.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    if peak == 0.0 {
        return 0;
    }
    let floor = NODE_THRESHOLD * peak;
    let mut last = 0.0_f64;
    let mut nodes = 0;
    for &v in samples.iter().filter(|v| v.abs() > floor) {
        if last != 0.0 && v.signum() != last {
            nodes += 1;
        }
        last = v.signum();
    }
    nodes
}

/// Discretised `-d^2/dr^2 + Phi(r) + l(l+1)/r^2` with Dirichlet ghosts.
pub fn fd_operator<P>(grid: &RadialGrid, phi: P, l: u32) -> Result<SymTridiagonal>
where
    P: Fn(f64) -> f64,
{
    let h = grid.spacing();
    let inv_h2 = 1.0 / (h * h);
    let centrifugal = f64::from(l) * f64::from(l + 1);
    let mut diag = Vec::with_capacity(grid.points);
    for i in 0..grid.points {
        let r = grid.node(i);
        let p = phi(r);
        if !p.is_finite() {
            return Err(Error::Grid(format!("potential is not finite at r = {r}")));
        }
        diag.push(2.0 * inv_h2 + p + centrifugal / (r * r));
    }
    SymTridiagonal::new(diag, vec![-inv_h2; grid.points - 1])
}

fn vector_to_profile(v: Vec<f64>, h: f64) -> Vec<f64> {
    let scale = 1.0 / h.sqrt();
    let first = v
        .iter()
        .copied()
        .find(|x| x.abs() > 1e-8)
        .unwrap_or(1.0)
        .signum();
    v.into_iter().map(|x| x * scale * first).collect()
}

/// The `levels` lowest eigenpairs of the frozen radial problem.
pub fn fd_eigen<P>(grid: &RadialGrid, phi: P, l: u32, levels: usize) -> Result<FdEigenOutput>
where
    P: Fn(f64) -> f64,
{
    if levels == 0 || levels > MAX_LEVELS {
        return Err(Error::Grid(format!(
            "number of levels must be in 1..={MAX_LEVELS}, got {levels}"
        )));
    }
    let op = fd_operator(grid, phi, l)?;
    let eigenvalues = op.lowest_eigenvalues(levels);
    let h = grid.spacing();
    let eigenvectors = eigenvalues
        .iter()
        .map(|&lam| op.inverse_iteration(lam).map(|v| vector_to_profile(v, h)))
        .collect::<Result<Vec<_>>>()?;
    let node_counts = eigenvectors.iter().map(|v| count_nodes(v)).collect();
    Ok(FdEigenOutput {
        grid: *grid,
        eigenvalues,
        eigenvectors,
        node_counts,
    })
}

/// Frozen operator of a scenario at energy `e` (Taylor mode for the
/// constant-mass case).
pub fn frozen_operator(
    grid: &RadialGrid,
    params: &ConfinementParams,
    scenario: Scenario,
    e: f64,
    l: u32,
) -> Result<SymTridiagonal> {
    // validate the branch once; the closure below cannot fail afterwards
    effective_potential(grid.r_min, e, params, scenario, QuarticMode::Taylor)?;
    fd_operator(
        grid,
        |r| effective_potential(r, e, params, scenario, QuarticMode::Taylor).unwrap_or(f64::NAN),
        l,
    )
}

/// Result of [`self_consistent_energy`].
#[derive(Debug, Clone, PartialEq)]
pub struct OracleEnergy {
    pub qn: QuantumNumbers,
    pub scenario: Scenario,
    pub energy: f64,
    /// `epsilon(E)` from the scenario map.
    pub epsilon: f64,
    /// `n`-th FD level of the problem frozen at `energy`.
    pub fd_epsilon: f64,
    /// Grid actually used (after any tail extension).
    pub grid: RadialGrid,
    pub bracket: (f64, f64),
    /// Sampled normalised `u` of the converged level.
    pub profile: Vec<f64>,
    pub nodes: usize,
}

/// `G(E) = eps_fd_n(E) - epsilon(E)`.
pub fn level_mismatch(
    qn: QuantumNumbers,
    params: &ConfinementParams,
    scenario: Scenario,
    grid: &RadialGrid,
    e: f64,
) -> Result<f64> {
    let op = frozen_operator(grid, params, scenario, e, qn.l)?;
    Ok(op.eigenvalue(qn.n as usize) - epsilon_map(e, params, scenario))
}

/// Sign of `G(E)` from a single Sturm count: `G > 0` exactly when fewer
/// than `n + 1` levels lie below `epsilon(E)`.
fn mismatch_sign(
    qn: QuantumNumbers,
    params: &ConfinementParams,
    scenario: Scenario,
    grid: &RadialGrid,
    e: f64,
) -> Result<f64> {
    let op = frozen_operator(grid, params, scenario, e, qn.l)?;
    let below = op.sturm_count(epsilon_map(e, params, scenario));
    Ok(if below <= qn.n as usize { 1.0 } else { -1.0 })
}

fn solve_on_grid(
    qn: QuantumNumbers,
    params: &ConfinementParams,
    scenario: Scenario,
    grid: &RadialGrid,
) -> Result<(f64, (f64, f64))> {
    let mut last_hi = 0.0;
    for energies in scan_grids(qn, params, scenario) {
        last_hi = *energies.last().unwrap();
        let signs = energies
            .iter()
            .map(|&e| mismatch_sign(qn, params, scenario, grid, e))
            .collect::<Result<Vec<_>>>()?;
        let Some(b) = brackets_from_samples(&energies, &signs).into_iter().next() else {
            continue;
        };
        let (mut lo, mut hi) = (b.lo, b.hi);
        let s_lo = b.f_lo;
        while hi - lo > ORACLE_ENERGY_TOL {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if mismatch_sign(qn, params, scenario, grid, mid)? == s_lo {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        // secant step on the actual mismatch values, kept in the bracket
        let g_lo = level_mismatch(qn, params, scenario, grid, lo)?;
        let g_hi = level_mismatch(qn, params, scenario, grid, hi)?;
        let mut e = 0.5 * (lo + hi);
        if g_hi != g_lo {
            let cand = lo - g_lo * (hi - lo) / (g_hi - g_lo);
            if cand >= lo && cand <= hi {
                e = cand;
            }
        }
        return Ok((e, (b.lo, b.hi)));
    }
    Err(Error::NoRootFound {
        what: format!("finite-difference {scenario} state {qn}"),
        lo: energies_floor(params, scenario),
        hi: last_hi,
    })
}

fn energies_floor(params: &ConfinementParams, scenario: Scenario) -> f64 {
    crate::spectra::branch_floor(params, scenario)
}

/// Energy of state `qn` from the finite-difference problem, independent of
/// the closed-form quantization condition.
///
/// The lowest sign change of `G` on the same scan grids as
/// [`crate::spectra::solve_energy`] is refined to [`ORACLE_ENERGY_TOL`].
/// If `Phi(r_max) < epsilon + 50` at the root, the grid is extended at fixed
/// spacing and the solve repeated. The converged level must have `n` nodes.
pub fn self_consistent_energy(
    qn: QuantumNumbers,
    params: &ConfinementParams,
    scenario: Scenario,
    grid: &RadialGrid,
) -> Result<OracleEnergy> {
    params.validate()?;
    let mut grid = *grid;
    for _ in 0..=MAX_TAIL_EXTENSIONS {
        let (energy, bracket) = solve_on_grid(qn, params, scenario, &grid)?;
        let epsilon = epsilon_map(energy, params, scenario);
        let tail = effective_potential(grid.r_max, energy, params, scenario, QuarticMode::Taylor)?;
        if tail < epsilon + TAIL_MARGIN {
            grid = grid.extended_to(2.0 * grid.r_max);
            continue;
        }
        let op = frozen_operator(&grid, params, scenario, energy, qn.l)?;
        let fd_epsilon = op.eigenvalue(qn.n as usize);
        let profile = vector_to_profile(op.inverse_iteration(fd_epsilon)?, grid.spacing());
        let nodes = count_nodes(&profile);
        if nodes != qn.n as usize {
            return Err(Error::NodeMismatch {
                expected: qn.n as usize,
                found: nodes,
            });
        }
        return Ok(OracleEnergy {
            qn,
            scenario,
            energy,
            epsilon,
            fd_epsilon,
            grid,
            bracket,
            profile,
            nodes,
        });
    }
    Err(Error::Grid(format!(
        "tail condition Phi(r_max) >= epsilon + {TAIL_MARGIN} not met up to r_max = {}",
        grid.r_max
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::trapezoid;
    use std::f64::consts::PI;

    #[test]
    fn grid_validation() {
        assert!(RadialGrid::new(0.0, 12.0, 6000).is_err());
        assert!(RadialGrid::new(1e-4, 1e-4, 6000).is_err());
        assert!(RadialGrid::new(1e-4, 12.0, 99).is_err());
        let g = RadialGrid::default();
        assert!((g.r_min - g.spacing()).abs() < 1e-15);
        assert_eq!(g.node(g.points - 1), 12.0);
        let nodes = g.nodes();
        assert!(nodes.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn extension_keeps_spacing() {
        let g = RadialGrid::origin_anchored(12.0, 6000).unwrap();
        let e = g.extended_to(24.0);
        assert!(e.r_max >= 24.0);
        assert!((e.spacing() - g.spacing()).abs() < 1e-15);
        assert_eq!(e.r_min, g.r_min);
        let f = g.refined();
        assert!((f.spacing() - 0.5 * g.spacing()).abs() < 1e-15);
        assert!((f.r_min - f.spacing()).abs() < 1e-15);
        let plain = RadialGrid::new(0.5, 10.0, 200).unwrap().refined();
        assert_eq!((plain.r_min, plain.r_max, plain.points), (0.5, 10.0, 399));
    }

    #[test]
    fn harmonic_levels() {
        let grid = RadialGrid::origin_anchored(12.0, 6000).unwrap();
        let out = fd_eigen(&grid, |r| r * r, 0, 3).unwrap();
        for (k, want) in [3.0, 7.0, 11.0].iter().enumerate() {
            let rel = (out.eigenvalues[k] - want).abs() / want;
            assert!(rel < 1e-4, "k={k} rel={rel}");
            assert_eq!(out.node_counts[k], k);
        }
    }

    #[test]
    fn particle_in_a_box() {
        // ghost nodes at 0 and L
        let l_box = 10.0;
        let points = 6000;
        let h = l_box / (points + 1) as f64;
        let grid = RadialGrid::new(h, l_box - h, points).unwrap();
        let out = fd_eigen(&grid, |_| 0.0, 0, 3).unwrap();
        for k in 0..3 {
            let want = ((k + 1) as f64 * PI / l_box).powi(2);
            let rel = (out.eigenvalues[k] - want).abs() / want;
            assert!(rel < 1e-4, "k={k} rel={rel}");
        }
    }

    #[test]
    fn eigenvectors_are_orthonormal() {
        let grid = RadialGrid::origin_anchored(10.0, 3000).unwrap();
        let out = fd_eigen(&grid, |r| 4.0 * r * r + 3.0 / (r * r), 1, 4).unwrap();
        let h = grid.spacing();
        for i in 0..4 {
            for j in 0..4 {
                let prod: Vec<f64> = out.eigenvectors[i]
                    .iter()
                    .zip(&out.eigenvectors[j])
                    .map(|(a, b)| a * b)
                    .collect();
                let ip = trapezoid(&prod, h);
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((ip - want).abs() < 1e-8, "<{i}|{j}> = {ip}");
            }
        }
    }

    #[test]
    fn level_count_is_bounded() {
        let grid = RadialGrid::origin_anchored(5.0, 200).unwrap();
        assert!(fd_eigen(&grid, |r| r * r, 0, 11).is_err());
        assert!(fd_eigen(&grid, |_| f64::NAN, 0, 1).is_err());
    }

    #[test]
    fn node_counter() {
        assert_eq!(count_nodes(&[0.0, 1.0, 2.0, -1.0, -0.5, 0.3, 0.0]), 2);
        assert_eq!(count_nodes(&[0.0, 1.0, 1e-12, -1e-12, 1.0]), 0);
        assert_eq!(count_nodes(&[0.0; 4]), 0);
    }
}
