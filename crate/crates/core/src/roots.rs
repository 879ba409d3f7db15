//! Bracketed scalar root finding: sign-change scans over a grid, bisection
//! to a width tolerance, then a secant polish kept inside the bracket.

use crate::error::{Error, Result};

/// A sign change of `f` on `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bracket {
    pub lo: f64,
    pub hi: f64,
    pub f_lo: f64,
    pub f_hi: f64,
}

/// Points `lo + d_i` with `d_i` geometric from `offset` to `hi - lo`.
///
/// Dense near `lo`, which is where the branch endpoints (sqrt of zero,
/// `E = -m0`) sit.
pub fn geometric_grid(lo: f64, hi: f64, offset: f64, points: usize) -> Vec<f64> {
    assert!(points >= 2 && hi > lo + offset && offset > 0.0);
    let span = hi - lo;
    let ratio = (span / offset).ln() / (points - 1) as f64;
    (0..points)
        .map(|i| {
            if i == points - 1 {
                hi
            } else {
                lo + offset * (ratio * i as f64).exp()
            }
        })
        .collect()
}

/// Evaluates `f` on `grid` and returns every bracketed sign change, in order.
/// Exact zeros produce a degenerate bracket `lo == hi`.
pub fn scan_sign_changes<F>(f: F, grid: &[f64]) -> Result<Vec<Bracket>>
where
    F: FnMut(f64) -> Result<f64>,
{
    let values = grid.iter().copied().map(f).collect::<Result<Vec<_>>>()?;
    Ok(brackets_from_samples(grid, &values))
}

pub fn brackets_from_samples(grid: &[f64], values: &[f64]) -> Vec<Bracket> {
    let mut out = Vec::new();
    for i in 0..grid.len() {
        if values[i] == 0.0 {
            out.push(Bracket {
                lo: grid[i],
                hi: grid[i],
                f_lo: 0.0,
                f_hi: 0.0,
            });
            continue;
        }
        if i + 1 < grid.len() && values[i + 1] != 0.0 && values[i].signum() != values[i + 1].signum()
        {
            out.push(Bracket {
                lo: grid[i],
                hi: grid[i + 1],
                f_lo: values[i],
                f_hi: values[i + 1],
            });
        }
    }
    out
}

/// Refines a bracketed root: bisection until `hi - lo <= tol`, then up to a
/// few secant steps that are accepted only while they stay in the bracket.
pub fn bisect_secant<F>(mut f: F, bracket: Bracket, tol: f64) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let Bracket {
        mut lo,
        mut hi,
        mut f_lo,
        mut f_hi,
    } = bracket;
    if lo == hi {
        return Ok(lo);
    }
    if f_lo.signum() == f_hi.signum() {
        return Err(Error::NoRootFound {
            what: "bisection (no sign change)".into(),
            lo,
            hi,
        });
    }
    let mut iterations = 0;
    while hi - lo > tol && iterations < 200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid)?;
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm.signum() == f_lo.signum() {
            lo = mid;
            f_lo = fm;
        } else {
            hi = mid;
            f_hi = fm;
        }
        iterations += 1;
    }

    // secant polish from the final bracket
    let (mut x0, mut f0, mut x1, mut f1) = (lo, f_lo, hi, f_hi);
    let mut best = if f_lo.abs() < f_hi.abs() { lo } else { hi };
    let mut best_f = f_lo.abs().min(f_hi.abs());
    for _ in 0..4 {
        if f1 == f0 {
            break;
        }
        let x2 = x1 - f1 * (x1 - x0) / (f1 - f0);
        if !(x2 >= lo && x2 <= hi) {
            break;
        }
        let f2 = f(x2)?;
        if f2.abs() < best_f {
            best = x2;
            best_f = f2.abs();
        }
        if f2 == 0.0 || x2 == x1 {
            break;
        }
        (x0, f0, x1, f1) = (x1, f1, x2, f2);
    }
    Ok(best)
}
