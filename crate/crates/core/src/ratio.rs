//! Exact rational arithmetic helpers.
//!
//! All probabilities and absorption quantities are kept as `BigRational`
//! end to end; floating point only enters for logarithms, exponential moment
//! bounds, and display with `--float`.

use crate::error::{Error, Result};
use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, ToPrimitive, Zero};

pub type Q = BigRational;

/// Rational from an integer pair. Panics on a zero denominator.
pub fn qr(num: i64, den: i64) -> Q {
    Q::new(BigInt::from(num), BigInt::from(den))
}

pub fn qint(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// Parses `"p/q"` or a bare integer `"p"`.
pub fn parse_q(s: &str) -> Result<Q> {
    let s = s.trim();
    let make = |p: &str, q: &str| -> Result<Q> {
        let p: BigInt = p
            .parse()
            .map_err(|_| Error::Parse(format!("bad rational numerator in `{s}`")))?;
        let q: BigInt = q
            .parse()
            .map_err(|_| Error::Parse(format!("bad rational denominator in `{s}`")))?;
        if q.is_zero() {
            return Err(Error::Parse(format!("zero denominator in `{s}`")));
        }
        Ok(Q::new(p, q))
    };
    match s.split_once('/') {
        Some((p, q)) => make(p, q),
        None => make(s, "1"),
    }
}

/// Canonical display: `"p/q"` in lowest terms, `"p"` when the denominator is 1.
pub fn fmt_q(x: &Q) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn q_to_f64(x: &Q) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Checks that `x` has positive entries summing to exactly one.
pub fn check_stochastic(x: &[Q]) -> Result<()> {
    if x.is_empty() {
        return Err(Error::NonStochastic {
            reason: "empty probability vector".into(),
        });
    }
    for (i, p) in x.iter().enumerate() {
        if !p.is_positive() {
            return Err(Error::NonStochastic {
                reason: format!("entry {i} is {} (must be > 0)", fmt_q(p)),
            });
        }
    }
    let total: Q = x.iter().sum();
    if !total.is_one() {
        return Err(Error::NonStochastic {
            reason: format!("entries sum to {}, not 1", fmt_q(&total)),
        });
    }
    Ok(())
}

/// Exact binomial coefficient C(n, k).
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}
