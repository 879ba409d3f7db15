//! Confluent hypergeometric (Kummer) function `M(a, b, x)` for real
//! arguments, with the terminating-polynomial path used by bound states.

use crate::error::{Error, Result};

/// Relative term tolerance for the infinite-series path.
pub const SERIES_TOL: f64 = 1e-15;

/// Term cap for the infinite-series path.
pub const SERIES_MAX_TERMS: usize = 10_000;

/// Arguments of `M(a, b, x)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KummerArgs {
    pub a: f64,
    pub b: f64,
    pub x: f64,
}

impl KummerArgs {
    pub fn new(a: f64, b: f64, x: f64) -> Self {
        Self { a, b, x }
    }

    /// `n` when `a = -n` for a non-negative integer `n`.
    pub fn polynomial_degree(&self) -> Option<u32> {
        non_positive_integer(self.a).map(|n| n as u32)
    }

    fn check_pole(&self) -> Result<()> {
        if non_positive_integer(self.b).is_some() {
            return Err(Error::Pole { b: self.b });
        }
        Ok(())
    }
}

/// Returns `Some(-v)` when `v` is one of `0, -1, -2, ...`.
fn non_positive_integer(v: f64) -> Option<f64> {
    (v <= 0.0 && v.fract() == 0.0).then_some(-v)
}

/// Rising factorial `a (a+1) ... (a+j-1)`; `1` for `j = 0`.
pub fn pochhammer(a: f64, j: u32) -> f64 {
    (0..j).fold(1.0, |acc, k| acc * (a + f64::from(k)))
}

/// `M(a, b, x)`.
///
/// For `a = -n` the terminating sum of `n + 1` terms is evaluated in
/// Horner form from the highest power down. Otherwise the series is summed
/// until two consecutive terms fall below [`SERIES_TOL`] relative to the
/// partial sum.
pub fn kummer_m(args: KummerArgs) -> Result<f64> {
    args.check_pole()?;
    match args.polynomial_degree() {
        Some(n) => Ok(kummer_polynomial(n, args.b, args.x)),
        None => kummer_series(args),
    }
}

/// Coefficients `c_j = (-n)_j / ((b)_j j!)`, `j = 0..=n`.
pub fn kummer_polynomial_coefficients(n: u32, b: f64) -> Vec<f64> {
    let a = -f64::from(n);
    let mut coeffs = Vec::with_capacity(n as usize + 1);
    let mut c = 1.0;
    coeffs.push(c);
    for j in 0..n {
        let jf = f64::from(j);
        c *= (a + jf) / ((b + jf) * (jf + 1.0));
        coeffs.push(c);
    }
    coeffs
}

/// `M(-n, b, x)` by Horner evaluation. `b` must not be a pole.
pub fn kummer_polynomial(n: u32, b: f64, x: f64) -> f64 {
    kummer_polynomial_coefficients(n, b)
        .iter()
        .rev()
        .fold(0.0, |acc, &c| acc * x + c)
}

/// Forward summation of the defining series, regardless of whether `a`
/// is a non-positive integer. Terminating cases stop on the exact zero term.
pub fn kummer_series(args: KummerArgs) -> Result<f64> {
    args.check_pole()?;
    let KummerArgs { a, b, x } = args;
    let first = 1.0_f64;
    let mut term = first;
    let mut sum = first;
    let mut quiet = 0;
    for j in 0..SERIES_MAX_TERMS {
        let jf = j as f64;
        term *= (a + jf) * x / ((b + jf) * (jf + 1.0));
        sum += term;
        let scale = sum.abs().max(SERIES_TOL * first.abs());
        if term.abs() <= SERIES_TOL * scale {
            quiet += 1;
            if quiet == 2 || term == 0.0 {
                return Ok(sum);
            }
        } else {
            quiet = 0;
        }
    }
    Err(Error::NonConvergence {
        terms: SERIES_MAX_TERMS,
    })
}

/// `dM/dx = (a/b) M(a+1, b+1, x)`.
pub fn kummer_m_derivative(args: KummerArgs) -> Result<f64> {
    args.check_pole()?;
    if args.a == 0.0 {
        return Ok(0.0);
    }
    let shifted = KummerArgs::new(args.a + 1.0, args.b + 1.0, args.x);
    Ok(args.a / args.b * kummer_m(shifted)?)
}

/// `d²M/dx² = a(a+1) / (b(b+1)) M(a+2, b+2, x)`.
pub fn kummer_m_second_derivative(args: KummerArgs) -> Result<f64> {
    args.check_pole()?;
    let shifted = KummerArgs::new(args.a + 1.0, args.b + 1.0, args.x);
    if args.a == 0.0 {
        return Ok(0.0);
    }
    Ok(args.a / args.b * kummer_m_derivative(shifted)?)
}

/// Scale of the terminating sum, `sum_j |c_j| x^j`. Rounding error of any
/// evaluation order is bounded by a small multiple of `eps` times this.
pub fn kummer_polynomial_abs_sum(n: u32, b: f64, x: f64) -> f64 {
    kummer_polynomial_coefficients(n, b)
        .iter()
        .rev()
        .fold(0.0, |acc, &c| acc * x.abs() + c.abs())
}
