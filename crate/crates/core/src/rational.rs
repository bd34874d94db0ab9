//! Exact rational arithmetic helpers.
//!
//! All measure values, averages, and thresholds in this crate are
//! `BigRational`s; floating point only ever appears in Monte Carlo
//! summaries. Rationals serialize as `"p/q"` strings.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{CoreError, Result};

pub type Rat = BigRational;

/// `p/q` from machine integers.
pub fn rat(p: i64, q: i64) -> Rat {
    Rat::new(BigInt::from(p), BigInt::from(q))
}

pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// 2^k for any integer k, exactly.
pub fn pow2(k: i64) -> Rat {
    let mag = BigInt::one() << k.unsigned_abs();
    if k >= 0 {
        Rat::from_integer(mag)
    } else {
        Rat::new(BigInt::one(), mag)
    }
}

/// Parses `"p/q"` or a bare integer `"p"`.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let bad = || CoreError::InvalidRational(s.to_string());
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(Rat::new(p, q))
        }
        None => {
            let p: BigInt = s.parse().map_err(|_| bad())?;
            Ok(Rat::from_integer(p))
        }
    }
}

/// Always emits an explicit denominator, e.g. `3/4`, `1/1`, `-2/5`.
pub fn format_rat(r: &Rat) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn rat_floor(r: &Rat) -> BigInt {
    r.floor().to_integer()
}

pub fn rat_ceil(r: &Rat) -> BigInt {
    r.ceil().to_integer()
}

/// Floor as u64, clamping negatives to 0.
pub fn floor_clamped_u64(r: &Rat) -> Result<u64> {
    let f = rat_floor(r);
    if f.is_negative() {
        return Ok(0);
    }
    f.to_u64()
        .ok_or_else(|| CoreError::RationalOutOfRange(format_rat(r)))
}

pub fn ceil_clamped_u64(r: &Rat) -> Result<u64> {
    let c = rat_ceil(r);
    if c.is_negative() {
        return Ok(0);
    }
    c.to_u64()
        .ok_or_else(|| CoreError::RationalOutOfRange(format_rat(r)))
}

/// max(r, 0), the positive part h^+.
pub fn positive_part(r: &Rat) -> Rat {
    if r.is_negative() {
        Rat::zero()
    } else {
        r.clone()
    }
}

/// Lossy conversion for Monte Carlo summaries and display only.
pub fn rat_to_f64(r: &Rat) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}
