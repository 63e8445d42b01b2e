//! Bracketed root finding.

use crate::error::{Error, Result};

const MAX_BISECTIONS: usize = 400;

/// Root of `f` in `[lo, hi]` by bisection down to an interval of width
/// `xtol`, followed by one Newton step from the midpoint when it stays
/// inside the final bracket.
///
/// `f` returns the value and the derivative. The bracket must straddle a
/// sign change; an exact zero at either end is returned as is.
pub fn bisect_polish<F>(f: F, lo: f64, hi: f64, xtol: f64) -> Result<f64>
where
    F: Fn(f64) -> (f64, f64),
{
    let (mut lo, mut hi) = if lo <= hi { (lo, hi) } else { (hi, lo) };
    let (mut flo, _) = f(lo);
    let (fhi, _) = f(hi);
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if !(flo.signum() != fhi.signum()) || flo.is_nan() || fhi.is_nan() {
        return Err(Error::Bracket { lo, hi });
    }
    for _ in 0..MAX_BISECTIONS {
        if hi - lo <= xtol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let (fm, _) = f(mid);
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    let mid = 0.5 * (lo + hi);
    let (fm, dfm) = f(mid);
    if dfm != 0.0 && dfm.is_finite() {
        let polished = mid - fm / dfm;
        if polished >= lo && polished <= hi {
            return Ok(polished);
        }
    }
    Ok(mid)
}

/// Plain bisection on a predicate that is `false` at `lo` and `true` at
/// `hi`; returns the final bracket.
pub fn bisect_predicate<P>(pred: P, mut lo: f64, mut hi: f64, xtol: f64) -> (f64, f64)
where
    P: Fn(f64) -> bool,
{
    for _ in 0..MAX_BISECTIONS {
        if (hi - lo).abs() <= xtol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if pred(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    (lo, hi)
}
