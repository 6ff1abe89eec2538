//! Exact-rational helpers: continued-fraction snapping of floats and
//! string round-tripping of big rationals for report/certificate I/O.

use num::bigint::Sign;
use num::{BigInt, BigRational, One, ToPrimitive, Zero};

/// Largest denominator a float is ever snapped to.
pub const SNAP_MAX_DENOMINATOR: u64 = 1_000_000;
/// Relative tolerance used when matching a float against a rational.
pub const SNAP_TOLERANCE: f64 = 1e-9;

pub fn big(n: impl Into<BigInt>) -> BigInt {
    n.into()
}

pub fn ratio(num: impl Into<BigInt>, den: impl Into<BigInt>) -> BigRational {
    BigRational::new(num.into(), den.into())
}

pub fn rational_to_f64(r: &BigRational) -> f64 {
    r.numer().to_f64().unwrap_or(f64::NAN) / r.denom().to_f64().unwrap_or(f64::NAN)
}

/// Minimum-denominator rational within `tol * max(1, |x|)` of `x`, denominator
/// at most `max_den`. Walks the continued-fraction convergents of `x`; the
/// first convergent inside the tolerance band has the smallest denominator of
/// any rational inside it.
pub fn snap_rational(x: f64, max_den: u64, tol: f64) -> Option<BigRational> {
    if !x.is_finite() {
        return None;
    }
    let bound = tol * x.abs().max(1.0);
    // Convergents p/q of the continued fraction of x.
    let (mut p0, mut q0) = (BigInt::one(), BigInt::zero());
    let (mut p1, mut q1) = (BigInt::from(x.floor() as i64), BigInt::one());
    let mut frac = x - x.floor();
    for _ in 0..64 {
        let cand = BigRational::new(p1.clone(), q1.clone());
        if (rational_to_f64(&cand) - x).abs() <= bound {
            return Some(cand);
        }
        if q1 > BigInt::from(max_den) {
            return None;
        }
        if frac.abs() < f64::EPSILON {
            return None;
        }
        let inv = 1.0 / frac;
        let a = inv.floor();
        frac = inv - a;
        let a = BigInt::from(a as i64);
        let p2 = &a * &p1 + &p0;
        let q2 = &a * &q1 + &q0;
        p0 = p1;
        q0 = q1;
        p1 = p2;
        q1 = q2;
    }
    None
}

/// Snap with the module-wide defaults.
pub fn snap_default(x: f64) -> Option<BigRational> {
    snap_rational(x, SNAP_MAX_DENOMINATOR, SNAP_TOLERANCE)
}

/// Snap to a rational with denominator at most `max_den`, failing loudly when
/// nothing that small is within tolerance. Used where the denominator bound is
/// known a priori (e.g. class-algebra eigenvalues divided by a character degree).
pub fn snap_bounded(x: f64, max_den: u64) -> Option<BigRational> {
    let r = snap_rational(x, max_den, SNAP_TOLERANCE)?;
    (r.denom() <= &BigInt::from(max_den)).then_some(r)
}

/// Nearest integer if within tolerance.
pub fn snap_integer(x: f64, tol: f64) -> Option<BigInt> {
    let n = x.round();
    ((x - n).abs() <= tol * x.abs().max(1.0)).then(|| BigInt::from(n as i64))
}

/// Integer square root check: returns `s` with `s*s == n` if one exists.
pub fn exact_sqrt(n: &BigInt) -> Option<BigInt> {
    if n.sign() == Sign::Minus {
        return None;
    }
    let s = n.sqrt();
    (&s * &s == *n).then_some(s)
}

/// Render as `p` or `p/q` (lowest terms; `q > 0`).
pub fn rational_to_string(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parse the `rational_to_string` format.
pub fn rational_from_string(s: &str) -> Option<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        None => s.parse::<BigInt>().ok().map(BigRational::from),
        Some((n, d)) => {
            let n = n.trim().parse::<BigInt>().ok()?;
            let d = d.trim().parse::<BigInt>().ok()?;
            (!d.is_zero()).then(|| BigRational::new(n, d))
        }
    }
}

/// serde adapter: `BigRational` as `"p/q"` strings inside JSON documents.
pub mod serde_rational {
    use super::*;
    use serde::de::Error;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&rational_to_string(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
        let s = String::deserialize(d)?;
        rational_from_string(&s).ok_or_else(|| D::Error::custom(format!("bad rational: {s}")))
    }
}

/// serde adapter: `BigInt` as decimal strings.
pub mod serde_bigint {
    use super::*;
    use serde::de::Error;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(n: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&n.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        let s = String::deserialize(d)?;
        s.parse::<BigInt>()
            .map_err(|e| D::Error::custom(format!("bad integer {s}: {e}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn snap_hits_small_rationals() {
        let x = 5.0 / 12.0 + 3e-13;
        assert_eq!(snap_default(x), Some(ratio(5, 12)));
        assert_eq!(snap_default(-1.0 + 1e-14), Some(ratio(-1, 1)));
        assert_eq!(snap_default(0.0), Some(ratio(0, 1)));
        assert_eq!(snap_default(14.000000000002), Some(ratio(14, 1)));
    }

    #[test]
    fn snap_bounded_rejects_large_denominators() {
        let phi = (1.0 + 5.0_f64.sqrt()) / 2.0;
        // phi is within 1e-9 of some rational with a ~10^4 denominator, but not
        // of anything with denominator <= 100.
        assert_eq!(snap_bounded(phi, 100), None);
        assert_eq!(snap_bounded(1.5, 100), Some(ratio(3, 2)));
    }

    #[test]
    fn snap_prefers_minimum_denominator() {
        // 0.333333333 is within 1e-9*max(1,|x|) of 1/3? |1/3 - 0.333333333| = 3.3e-10 < 1e-9.
        assert_eq!(snap_default(0.333333333), Some(ratio(1, 3)));
    }

    #[test]
    fn string_round_trip() {
        for r in [ratio(-7, 3), ratio(4, 1), ratio(0, 5), ratio(155, 144)] {
            assert_eq!(rational_from_string(&rational_to_string(&r)), Some(r));
        }
        assert_eq!(rational_from_string("5/0"), None);
    }

    #[test]
    fn exact_sqrt_detects_squares() {
        assert_eq!(exact_sqrt(&big(144)), Some(big(12)));
        assert_eq!(exact_sqrt(&big(2)), None);
        assert_eq!(exact_sqrt(&big(-4)), None);
        assert_eq!(exact_sqrt(&big(0)), Some(big(0)));
    }
}
