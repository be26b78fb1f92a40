//! Bessel functions of the first kind, `J_m(x)` for integer order `m >= 0`.
//!
//! Small arguments use the ascending power series. Everything else inside the
//! supported envelope uses Miller's backward recurrence normalised with
//! `J_0 + 2 (J_2 + J_4 + ...) = 1`. Arguments past the envelope (reachable only
//! through mode evaluation far from a vortex) fall back to the Hankel
//! asymptotic expansion.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use crate::error::{Error, Result};

pub const MAX_ORDER: u32 = 50;
pub const MAX_ARGUMENT: f64 = 1e4;

const RESCALE_ABOVE: f64 = 1e250;
const RESCALE_BY: f64 = 1e-250;

/// Returns `(J_m(x), J_m'(x))`.
pub fn bessel_j(m: u32, x: f64) -> Result<(f64, f64)> {
    if m > MAX_ORDER || !(x.abs() <= MAX_ARGUMENT) {
        return Err(Error::OutOfEnvelope { order: m, x });
    }
    Ok(bessel_j_unchecked(m, x))
}

/// As [`bessel_j`] without the envelope check; `m` must still be at most
/// [`MAX_ORDER`] for the accuracy statements to hold.
pub(crate) fn bessel_j_unchecked(m: u32, x: f64) -> (f64, f64) {
    if x < 0.0 {
        let (value, deriv) = bessel_j_unchecked(m, -x);
        return if m.is_multiple_of(2) { (value, -deriv) } else { (-value, deriv) };
    }
    if x == 0.0 {
        return match m {
            0 => (1.0, 0.0),
            1 => (0.0, 0.5),
            _ => (0.0, 0.0),
        };
    }
    let (below, value, above) = if x > MAX_ARGUMENT {
        (hankel_asymptotic(m as i64 - 1, x), hankel_asymptotic(m as i64, x), hankel_asymptotic(m as i64 + 1, x))
    } else if x * x < 4.0 * f64::from(m + 1) || x <= 2.0 {
        let below = if m == 0 { -ascending_series(1, x) } else { ascending_series(m - 1, x) };
        (below, ascending_series(m, x), ascending_series(m + 1, x))
    } else {
        miller(m, x)
    };
    (value, 0.5 * (below - above))
}

fn ascending_series(m: u32, x: f64) -> f64 {
    let half = 0.5 * x;
    let mut term = 1.0;
    for k in 1..=m {
        term *= half / f64::from(k);
    }
    let q = -half * half;
    let mut sum = term;
    for k in 1..=300u32 {
        term *= q / (f64::from(k) * f64::from(k + m));
        sum += term;
        if term.abs() <= 1e-18 * sum.abs() {
            break;
        }
    }
    sum
}

/// Backward recurrence from well above `max(m, x)`; returns
/// `(J_{m-1}, J_m, J_{m+1})` with `J_{-1} = -J_1`.
fn miller(m: u32, x: f64) -> (f64, f64, f64) {
    let top = f64::from(m).max(x);
    let mut start = (top + 20.0 + 4.0 * top.sqrt()) as u32 + 2;
    if start % 2 == 1 {
        start += 1;
    }

    let two_over_x = 2.0 / x;
    let mut above_k = 0.0; // j_{k+1}
    let mut at_k = 1e-30; // j_k
    let mut norm = 0.0;
    let (mut below, mut value, mut above) = (0.0, 0.0, 0.0);

    for k in (1..=start).rev() {
        if k == m + 1 {
            above = at_k;
        } else if k == m {
            value = at_k;
        } else if k + 1 == m {
            below = at_k;
        }
        if k % 2 == 0 {
            norm += 2.0 * at_k;
        }
        let next = f64::from(k) * two_over_x * at_k - above_k;
        above_k = at_k;
        at_k = next;
        if at_k.abs() > RESCALE_ABOVE {
            at_k *= RESCALE_BY;
            above_k *= RESCALE_BY;
            norm *= RESCALE_BY;
            below *= RESCALE_BY;
            value *= RESCALE_BY;
            above *= RESCALE_BY;
        }
    }
    // at_k now holds j_0
    norm += at_k;
    match m {
        0 => {
            value = at_k;
            below = -above;
        }
        1 => below = at_k,
        _ => {}
    }
    (below / norm, value / norm, above / norm)
}

/// Hankel expansion of `J_nu(x)` for large `x`; negative orders via
/// `J_{-n} = (-1)^n J_n`.
fn hankel_asymptotic(order: i64, x: f64) -> f64 {
    if order < 0 {
        let v = hankel_asymptotic(-order, x);
        return if order % 2 == 0 { v } else { -v };
    }
    let mu = 4.0 * (order * order) as f64;
    let mut p = 1.0;
    let mut q = 0.0;
    let mut term = 1.0;
    let mut last = f64::INFINITY;
    for k in 1..=30 {
        let odd = (2 * k - 1) as f64;
        term *= (mu - odd * odd) / (k as f64 * 8.0 * x);
        if term.abs() >= last {
            break;
        }
        last = term.abs();
        match k % 4 {
            1 => q += term,
            2 => p -= term,
            3 => q -= term,
            _ => p += term,
        }
    }
    let omega = x - (order as f64) * FRAC_PI_2 - FRAC_PI_4;
    (2.0 / (PI * x)).sqrt() * (p * omega.cos() - q * omega.sin())
}

/// Location of the `index`-th positive zero of `J_m` (index starts at 1).
pub fn bessel_zero(m: u32, index: u32) -> Result<f64> {
    if index == 0 {
        return Err(Error::BadParameter("zero index starts at 1".into()));
    }
    let step = 0.05;
    let mut lo = f64::from(m) + 1e-3;
    let mut f_lo = bessel_j(m, lo)?.0;
    let mut found = 0;
    loop {
        let hi = lo + step;
        let f_hi = bessel_j(m, hi)?.0;
        if f_lo == 0.0 {
            found += 1;
            if found == index {
                return Ok(lo);
            }
        } else if f_lo.signum() != f_hi.signum() && f_hi != 0.0 {
            found += 1;
            if found == index {
                return bisect(m, lo, hi, f_lo);
            }
        }
        lo = hi;
        f_lo = f_hi;
    }
}

fn bisect(m: u32, mut lo: f64, mut hi: f64, f_lo: f64) -> Result<f64> {
    let sign_lo = f_lo.signum();
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = bessel_j(m, mid)?.0;
        if f_mid == 0.0 {
            return Ok(mid);
        }
        if f_mid.signum() == sign_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
