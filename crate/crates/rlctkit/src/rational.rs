//! Exact arithmetic primitives.
//!
//! Every ratio in this crate (index ratios, LP pivots, lambda values, prior
//! exponents) is a `Rat`, an arbitrary-precision rational that is always
//! stored reduced with a positive denominator. Exponents and blow-matrix
//! entries are arbitrary-precision naturals: deep blow-up chains grow
//! exponents like Euclidean-algorithm quotients, so fixed-width integers
//! are not safe.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Non-negative arbitrary-precision integer (exponents, blow-matrix entries).
pub type Nat = BigUint;
/// Signed arbitrary-precision integer.
pub type Int = BigInt;
/// Arbitrary-precision rational, always reduced, denominator > 0.
pub type Rat = BigRational;

pub fn nat(v: u64) -> Nat {
    Nat::from(v)
}

pub fn int(v: i64) -> Int {
    Int::from(v)
}

pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(Int::from(num), Int::from(den))
}

pub fn rat_int(v: i64) -> Rat {
    Rat::from_integer(Int::from(v))
}

pub fn rat_from_nat(n: &Nat) -> Rat {
    Rat::from_integer(Int::from(n.clone()))
}

pub fn nat_to_u64(n: &Nat) -> Result<u64> {
    n.to_u64()
        .ok_or_else(|| Error::Invalid(format!("exponent {n} does not fit in 64 bits")))
}

/// Parses `p`, `-p`, `p/q` or `-p/q`.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), Some(d.trim())),
        None => (s, None),
    };
    let num: Int = num
        .parse()
        .map_err(|_| Error::Parse(format!("invalid rational {s:?}")))?;
    let den: Int = match den {
        Some(d) => d
            .parse()
            .map_err(|_| Error::Parse(format!("invalid rational {s:?}")))?,
        None => Int::one(),
    };
    if den.is_zero() {
        return Err(Error::Parse(format!("zero denominator in {s:?}")));
    }
    Ok(Rat::new(num, den))
}

/// Renders as `p/q`, or plain `p` for integers.
pub fn format_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// A lambda-like quantity: a positive rational or the distinguished value
/// infinity (used when a polynomial does not vanish at the origin).
/// Infinity compares greater than every rational.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Lambda {
    Finite(Rat),
    Infinity,
}

impl Lambda {
    /// `1/beta`, with `beta = 0` mapping to infinity (the `1/inf = 0`
    /// convention used throughout).
    pub fn from_inverse(beta: &Rat) -> Lambda {
        if beta.is_zero() {
            Lambda::Infinity
        } else {
            Lambda::Finite(beta.recip())
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Lambda::Finite(_))
    }

    pub fn as_finite(&self) -> Option<&Rat> {
        match self {
            Lambda::Finite(r) => Some(r),
            Lambda::Infinity => None,
        }
    }

    /// The reciprocal as a rational, with `1/inf = 0`.
    pub fn inverse(&self) -> Rat {
        match self {
            Lambda::Finite(r) => r.recip(),
            Lambda::Infinity => Rat::zero(),
        }
    }

    pub fn add(&self, other: &Lambda) -> Lambda {
        match (self, other) {
            (Lambda::Finite(a), Lambda::Finite(b)) => Lambda::Finite(a + b),
            _ => Lambda::Infinity,
        }
    }
}

impl PartialOrd for Lambda {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Lambda {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        use Lambda::*;
        match (self, other) {
            (Infinity, Infinity) => std::cmp::Ordering::Equal,
            (Infinity, Finite(_)) => std::cmp::Ordering::Greater,
            (Finite(_), Infinity) => std::cmp::Ordering::Less,
            (Finite(a), Finite(b)) => a.cmp(b),
        }
    }
}

impl std::fmt::Display for Lambda {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Lambda::Finite(r) => write!(f, "{}", format_rat(r)),
            Lambda::Infinity => write!(f, "inf"),
        }
    }
}

/// Exact binomial coefficient.
pub fn binomial(n: u64, k: u64) -> Nat {
    if k > n {
        return Nat::zero();
    }
    let k = k.min(n - k);
    let mut acc = Nat::one();
    for i in 0..k {
        acc = acc * Nat::from(n - i) / Nat::from(i + 1);
    }
    acc
}

/// True iff `r > 0`.
pub fn rat_is_positive(r: &Rat) -> bool {
    r.is_positive()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format_round_trip() {
        for s in ["3/4", "-3/4", "0", "12", "-7/3"] {
            let r = parse_rat(s).unwrap();
            assert_eq!(format_rat(&r), s);
        }
        assert_eq!(format_rat(&parse_rat("6/4").unwrap()), "3/2");
        assert_eq!(format_rat(&parse_rat("3/-4").unwrap()), "-3/4");
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("x").is_err());
    }

    #[test]
    fn lambda_ordering_and_inverse() {
        let l = Lambda::from_inverse(&rat(4, 3));
        assert_eq!(l, Lambda::Finite(rat(3, 4)));
        assert_eq!(Lambda::from_inverse(&Rat::zero()), Lambda::Infinity);
        assert!(Lambda::Infinity > Lambda::Finite(rat(1000, 1)));
        assert_eq!(Lambda::Infinity.inverse(), Rat::zero());
    }

    #[test]
    fn binomial_small_values() {
        assert_eq!(binomial(6, 2), nat(15));
        assert_eq!(binomial(4, 0), nat(1));
        assert_eq!(binomial(4, 4), nat(1));
        assert_eq!(binomial(3, 5), Nat::zero());
    }
}
