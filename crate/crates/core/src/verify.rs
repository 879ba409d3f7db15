//! Structural checks of the Laplace-domain quantization argument.
//!
//! The radial problem is written in the normal form
//!
//! ```text
//! x u'' + beta0 u' + (beta1 - beta2^2 x - beta3^2 / x) u = 0
//! ```
//!
//! Removing the `1/x` term with `u = x^(-|sigma|) f` leaves a Kummer-type
//! equation with `beta = beta0 - 2|sigma|`, whose Laplace transform is
//! `F(s) = (s - beta2)^a (s + beta2)^b`. Reality of `F` at `s = 0` forces
//! `a = n`. The same condition appears as `eps3 / eps2 = n` when the equation
//! is written directly in Kummer form.
//!
//! A solved bound state maps onto this form with `x = omega r^2 / 2` and the
//! dependent variable `r^(-1/2) u(r)`, which gives `beta0 = 1`, `beta2 = 1`,
//! `beta1 = kappa / (2 omega)` and `beta3 = (2 Lambda + 1) / 4`.

use crate::error::{Error, Result};
use crate::model::ConfinementParams;
use crate::quadrature::simpson;
use crate::spectra::{scenario_coefficients, EigenResult};

/// Tolerance of [`terminal_value_check`] for closed-form pairs.
pub const TERMINAL_TOL: f64 = 1e-6;

/// Both roots of `s^2 + (1 - beta0) s - beta3^2 = 0`; the first is the
/// admissible one, `-(1 - beta0)/2 + sqrt(((1 - beta0)/2)^2 + beta3^2)`.
pub fn sigma_roots(beta0: f64, beta3: f64) -> (f64, f64) {
    let half = (1.0 - beta0) / 2.0;
    let root = (half * half + beta3 * beta3).sqrt();
    (-half + root, -half - root)
}

/// `|sigma|` from `beta0` and `beta3`.
pub fn sigma_from_betas(beta0: f64, beta3: f64) -> f64 {
    sigma_roots(beta0, beta3).0
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BetaParams {
    pub beta0: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub beta3: f64,
    /// `|sigma|`.
    pub sigma_abs: f64,
    /// Leading exponent of `f` at the origin, `1 - beta0 + 2|sigma|`.
    pub sigma0: f64,
}

impl BetaParams {
    /// Requires `beta2 > 0` and the admissibility condition `sigma0 > |sigma|`.
    pub fn new(beta0: f64, beta1: f64, beta2: f64, beta3: f64) -> Result<Self> {
        if !(beta2 > 0.0) {
            return Err(Error::Domain(format!("beta2 must be > 0, got {beta2}")));
        }
        let sigma_abs = sigma_from_betas(beta0, beta3);
        let sigma0 = 1.0 - beta0 + 2.0 * sigma_abs;
        if !(sigma0 > sigma_abs) {
            return Err(Error::Domain(format!(
                "inadmissible exponents: sigma0 = {sigma0} <= |sigma| = {sigma_abs}"
            )));
        }
        Ok(Self {
            beta0,
            beta1,
            beta2,
            beta3,
            sigma_abs,
            sigma0,
        })
    }

    /// Normal-form parameters of `u'' + [kappa - omega^2 r^2 -
    /// Lambda(Lambda+1)/r^2] u = 0`.
    pub fn from_coefficients(kappa: f64, omega: f64, lambda: f64) -> Result<Self> {
        if !(omega > 0.0) {
            return Err(Error::Domain(format!("omega must be > 0, got {omega}")));
        }
        Self::new(1.0, kappa / (2.0 * omega), 1.0, (2.0 * lambda + 1.0) / 4.0)
    }

    /// Normal-form parameters of a solved state.
    pub fn from_eigen(result: &EigenResult, params: &ConfinementParams) -> Result<Self> {
        let c = scenario_coefficients(result.energy, params, result.scenario)?;
        Self::from_coefficients(c.kappa, c.omega, result.effective_lambda)
    }

    /// `beta = beta0 - 2|sigma|`.
    pub fn beta(&self) -> f64 {
        self.beta0 - 2.0 * self.sigma_abs
    }
}

/// Exponents of `F(s) = (s - beta2)^a (s + beta2)^b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Case1Exponents {
    pub a: f64,
    pub b: f64,
    pub beta: f64,
}

/// `a = -(2 - beta)/2 + beta1/(2 beta2)`, `b = -(2 - beta)/2 - beta1/(2 beta2)`.
pub fn case1_exponents(p: &BetaParams) -> Result<Case1Exponents> {
    if !(p.beta2 > 0.0) {
        return Err(Error::Domain(format!("beta2 must be > 0, got {}", p.beta2)));
    }
    let beta = p.beta();
    let base = -(2.0 - beta) / 2.0;
    let shift = p.beta1 / (2.0 * p.beta2);
    Ok(Case1Exponents {
        a: base + shift,
        b: base - shift,
        beta,
    })
}

/// `beta1` that makes `a = n` for given `beta` and `beta2`.
pub fn quantized_beta1(n: f64, beta: f64, beta2: f64) -> f64 {
    2.0 * beta2 * (n + (2.0 - beta) / 2.0)
}

/// `(F, F')` on the real line. Negative bases are taken in modulus; the
/// logarithmic derivative, and hence the ODE residual, is unaffected.
pub fn sdomain_transform(ex: &Case1Exponents, beta2: f64, s: f64) -> Result<(f64, f64)> {
    let minus = s - beta2;
    let plus = s + beta2;
    if minus.abs() <= 1e-12 * beta2 || plus.abs() <= 1e-12 * beta2 {
        return Err(Error::Domain(format!("s = {s} sits on a pole at ±{beta2}")));
    }
    let f = minus.abs().powf(ex.a) * plus.abs().powf(ex.b);
    let df = f * (ex.a / minus + ex.b / plus);
    Ok((f, df))
}

/// Largest pointwise relative residual of
/// `(s^2 - beta2^2) F' + [(2 - beta) s - beta1] F = 0` for explicit exponents.
pub fn sdomain_residual(p: &BetaParams, ex: &Case1Exponents, samples: &[f64]) -> Result<f64> {
    let mut worst = 0.0_f64;
    for &s in samples {
        let (f, df) = sdomain_transform(ex, p.beta2, s)?;
        let lhs = (s * s - p.beta2 * p.beta2) * df;
        let rhs = ((2.0 - ex.beta) * s - p.beta1) * f;
        let scale = lhs.abs() + rhs.abs();
        if scale > 0.0 {
            worst = worst.max((lhs + rhs).abs() / scale);
        }
    }
    Ok(worst)
}

/// [`sdomain_residual`] with the exponents of `p`.
pub fn sdomain_ode_residual(p: &BetaParams, samples: &[f64]) -> Result<f64> {
    sdomain_residual(p, &case1_exponents(p)?, samples)
}

/// Two readings of `F(0)`. Both are real only for integer `a`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransformAtOrigin {
    /// `(-1)^a beta2^((a + b)/2)`, as printed alongside the Case 1 proof.
    pub printed: Option<f64>,
    /// `(-beta2)^a beta2^b = (-1)^a beta2^(a + b)`, by direct substitution.
    pub direct: Option<f64>,
}

pub fn transform_at_origin(ex: &Case1Exponents, beta2: f64) -> TransformAtOrigin {
    let sign = if (ex.a - ex.a.round()).abs() <= 1e-9 {
        Some(if ex.a.round() as i64 % 2 == 0 { 1.0 } else { -1.0 })
    } else {
        None
    };
    TransformAtOrigin {
        printed: sign.map(|s| s * beta2.powf((ex.a + ex.b) / 2.0)),
        direct: sign.map(|s| s * beta2.powf(ex.a + ex.b)),
    }
}

/// Kummer-form parameters `eps1 = 2|sigma| + beta0`, `eps2 = 2 beta2`,
/// `eps3 = beta1 - (2|sigma| + beta0)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Case2Params {
    pub eps1: f64,
    pub eps2: f64,
    pub eps3: f64,
}

pub fn case2_params(p: &BetaParams) -> Case2Params {
    let eps1 = 2.0 * p.sigma_abs + p.beta0;
    Case2Params {
        eps1,
        eps2: 2.0 * p.beta2,
        eps3: p.beta1 - eps1,
    }
}

/// `eps3 / eps2`; an integer `n >= 0` for bound states.
pub fn case2_quantization(p: &BetaParams) -> Result<f64> {
    let c = case2_params(p);
    if c.eps2 == 0.0 {
        return Err(Error::Domain("eps2 = 0".into()));
    }
    Ok(c.eps3 / c.eps2)
}

/// Distance from `v` to the nearest of `0, 1, 2, ...`.
pub fn distance_to_non_negative_integer(v: f64) -> f64 {
    (v - v.round().max(0.0)).abs()
}

/// Value at `x = 0` of the polynomial through `(xs, ys)` (Neville).
pub fn extrapolate_to_zero(xs: &[f64], ys: &[f64]) -> f64 {
    assert_eq!(xs.len(), ys.len());
    let mut p = ys.to_vec();
    let n = xs.len();
    for level in 1..n {
        for i in 0..n - level {
            let (xi, xj) = (xs[i], xs[i + level]);
            p[i] = (xj * p[i] - xi * p[i + 1]) / (xj - xi);
        }
    }
    p[0]
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TerminalValueReport {
    /// `lim f(x)` as `x -> inf`, read off at large `x`.
    pub limit_f: f64,
    /// `lim s F(s)` as `s -> 0+`, by polynomial extrapolation.
    pub limit_sf: f64,
    pub abs_error: f64,
    pub tolerance: f64,
    /// `f` settled at large `x` (the theorem's precondition).
    pub f_converged: bool,
    pub passed: bool,
}

/// Far-field sample points for estimating `lim f`.
const FAR_FIELD: [f64; 5] = [25.0, 50.0, 100.0, 200.0, 400.0];

/// Compares `lim_{x->inf} f(x)` with `lim_{s->0+} s F(s)`, extrapolating the
/// latter from `s_grid` (typically geometric, shrinking towards 0).
pub fn terminal_value_check<F, T>(f: F, transform: T, s_grid: &[f64], tolerance: f64) -> TerminalValueReport
where
    F: Fn(f64) -> f64,
    T: Fn(f64) -> f64,
{
    let far: Vec<f64> = FAR_FIELD.iter().map(|&x| f(x)).collect();
    let limit_f = far[far.len() - 1];
    let f_converged = (far[far.len() - 1] - far[far.len() - 2]).abs() <= tolerance;
    let sf: Vec<f64> = s_grid.iter().map(|&s| s * transform(s)).collect();
    let limit_sf = extrapolate_to_zero(s_grid, &sf);
    let abs_error = (limit_f - limit_sf).abs();
    TerminalValueReport {
        limit_f,
        limit_sf,
        abs_error,
        tolerance,
        f_converged,
        passed: f_converged && abs_error <= tolerance,
    }
}

/// Truncated Laplace transform `int_0^R e^(-s r) v(r) dr` of samples on a
/// uniform grid starting at `r_start` with spacing `h`. The piece on
/// `[0, r_start]` is a trapezoid with `v(0) = 0`.
pub fn laplace_of_samples(r_start: f64, h: f64, values: &[f64], s: f64) -> f64 {
    let weighted: Vec<f64> = values
        .iter()
        .enumerate()
        .map(|(i, v)| v * (-s * (r_start + i as f64 * h)).exp())
        .collect();
    let head = 0.5 * r_start * weighted.first().copied().unwrap_or(0.0);
    head + simpson(&weighted, h)
}

/// Geometric grid `s0, s0/2, ..., s0/2^(count-1)`.
pub fn geometric_s_grid(s0: f64, count: usize) -> Vec<f64> {
    (0..count).map(|k| s0 / f64::powi(2.0, k as i32)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Scenario;
    use crate::spectra::{solve_energy, QuantumNumbers};

    #[test]
    fn sigma_examples() {
        assert_eq!(sigma_from_betas(1.0, 2.0), 2.0);
        assert_eq!(sigma_from_betas(1.0, 0.0), 0.0);
        // mpmath: 1.2807764064044151374553524639935192562867998063434
        assert!((sigma_from_betas(1.5, 1.0) - 1.280_776_406_404_415_1).abs() < 1e-15);
    }

    #[test]
    fn sigma_root_solves_indicial_equation() {
        for (b0, b3) in [(0.5, 0.3), (1.5, 2.0), (1.0, 1.0), (2.5, 0.7)] {
            let (s, rejected) = sigma_roots(b0, b3);
            for root in [s, rejected] {
                assert!((root * root + (1.0 - b0) * root - b3 * b3).abs() < 1e-13);
            }
            assert!(rejected < 0.0);
        }
    }

    #[test]
    fn case1_examples() {
        // beta0 = 1, beta3 = 0 gives beta = 1; beta1 = beta2 gives a = 0
        let p = BetaParams::new(1.0, 0.8, 0.8, 0.0);
        // sigma0 = 0 = |sigma| is inadmissible
        assert!(p.is_err());
        let p = BetaParams::new(1.0, 0.8, 0.8, 1e-9).unwrap();
        let ex = case1_exponents(&p).unwrap();
        assert!((ex.beta - 1.0).abs() < 1e-8);
        assert!(ex.a.abs() < 1e-8);
        assert!(BetaParams::new(1.0, 1.0, 0.0, 1.0).is_err());
    }

    #[test]
    fn exponent_sum_identity() {
        for (b0, b1, b2, b3) in [(1.0, 3.0, 0.5, 0.7), (0.5, -2.0, 1.3, 2.0), (1.5, 7.0, 2.0, 1.1)] {
            let p = BetaParams::new(b0, b1, b2, b3).unwrap();
            let ex = case1_exponents(&p).unwrap();
            assert!((ex.a + ex.b - (ex.beta - 2.0)).abs() < 1e-14);
            assert!((ex.a - ex.b - b1 / b2).abs() < 1e-13);
        }
    }

    #[test]
    fn quantized_round_trip() {
        for n in 0..6 {
            let (b0, b2, b3) = (1.0, 1.7, 0.9);
            let beta = b0 - 2.0 * sigma_from_betas(b0, b3);
            let b1 = quantized_beta1(f64::from(n), beta, b2);
            let p = BetaParams::new(b0, b1, b2, b3).unwrap();
            let a = case1_exponents(&p).unwrap().a;
            assert!((a - f64::from(n)).abs() < 1e-14, "{a}");
        }
    }

    #[test]
    fn sdomain_residual_vanishes_and_is_sensitive() {
        let p = BetaParams::new(1.0, 2.3, 1.5, 0.8).unwrap();
        let samples: Vec<f64> = (0..41).map(|i| -1.4 + 2.8 * i as f64 / 40.0).collect();
        let r = sdomain_ode_residual(&p, &samples).unwrap();
        assert!(r <= 1e-10, "{r}");
        let mut ex = case1_exponents(&p).unwrap();
        ex.a += 1e-3;
        let perturbed = sdomain_residual(&p, &ex, &samples).unwrap();
        assert!(perturbed >= 1e-4, "{perturbed}");
        assert!(sdomain_ode_residual(&p, &[1.5]).is_err());
    }

    #[test]
    fn sdomain_a_zero_case() {
        let (b0, b2, b3) = (1.0, 0.9, 1.2);
        let beta = b0 - 2.0 * sigma_from_betas(b0, b3);
        let p = BetaParams::new(b0, b2 * (2.0 - beta), b2, b3).unwrap();
        let ex = case1_exponents(&p).unwrap();
        assert!(ex.a.abs() < 1e-15);
        let samples: Vec<f64> = (0..21).map(|i| -0.8 + 1.6 * i as f64 / 20.0).collect();
        assert!(sdomain_ode_residual(&p, &samples).unwrap() <= 1e-10);
    }

    #[test]
    fn case2_linear_identity() {
        for k in 0..5 {
            let (b0, b2, b3) = (1.0, 0.75, 1.25);
            let sigma = sigma_from_betas(b0, b3);
            let eps1 = 2.0 * sigma + b0;
            let p = BetaParams::new(b0, eps1 + 2.0 * b2 * f64::from(k), b2, b3).unwrap();
            assert_eq!(case2_quantization(&p).unwrap(), f64::from(k));
        }
    }

    #[test]
    fn solved_states_give_integer_indices() {
        let params = ConfinementParams::new(1.0, 1.0, 1.0).unwrap();
        for scenario in [Scenario::ExactVariableMass, Scenario::ApproxConstantMass] {
            for (n, l) in [(0, 0), (1, 0), (2, 2)] {
                let res = solve_energy(QuantumNumbers::new(n, l), &params, scenario).unwrap();
                let p = BetaParams::from_eigen(&res, &params).unwrap();
                let a = case1_exponents(&p).unwrap().a;
                let k = case2_quantization(&p).unwrap();
                assert!((a - f64::from(n)).abs() < 1e-9, "{a}");
                assert!((k - f64::from(n)).abs() < 1e-9, "{k}");
                let f0 = transform_at_origin(&case1_exponents(&p).unwrap(), p.beta2);
                assert!(f0.printed.is_some() && f0.direct.is_some());
            }
        }
    }

    #[test]
    fn origin_readings_need_integer_a() {
        let ex = Case1Exponents {
            a: 0.5,
            b: -2.0,
            beta: 0.5,
        };
        let f0 = transform_at_origin(&ex, 2.0);
        assert_eq!(f0.printed, None);
        assert_eq!(f0.direct, None);
        let ex = Case1Exponents {
            a: 3.0,
            b: -5.0,
            beta: 0.0,
        };
        let f0 = transform_at_origin(&ex, 4.0);
        assert_eq!(f0.printed, Some(-0.25));
        assert_eq!(f0.direct, Some(-1.0 / 16.0));
    }

    #[test]
    fn terminal_value_standard_pairs() {
        let grid = geometric_s_grid(0.5, 10);
        let r = terminal_value_check(|x| (-x).exp(), |s| 1.0 / (s + 1.0), &grid, TERMINAL_TOL);
        assert!(r.passed, "{r:?}");
        assert!(r.limit_sf.abs() < 1e-6);
        let r = terminal_value_check(
            |x| 1.0 - (-x).exp(),
            |s| 1.0 / s - 1.0 / (s + 1.0),
            &grid,
            TERMINAL_TOL,
        );
        assert!(r.passed, "{r:?}");
        assert!((r.limit_sf - 1.0).abs() < 1e-6);
    }

    #[test]
    fn terminal_value_detects_wrong_transform() {
        let grid = geometric_s_grid(0.5, 10);
        let r = terminal_value_check(|x| 1.0 - (-x).exp(), |s| 1.0 / (s + 1.0), &grid, TERMINAL_TOL);
        assert!(!r.passed);
        // no limit at infinity
        let r = terminal_value_check(|x| x.sin(), |s| 1.0 / (s * s + 1.0), &grid, TERMINAL_TOL);
        assert!(!r.passed);
    }

    #[test]
    fn neville_is_exact_for_polynomials() {
        let xs = [0.4, 0.2, 0.1, 0.05];
        let ys: Vec<f64> = xs.iter().map(|x| 3.0 - 2.0 * x + 0.5 * x * x * x).collect();
        assert!((extrapolate_to_zero(&xs, &ys) - 3.0).abs() < 1e-13);
    }
}
