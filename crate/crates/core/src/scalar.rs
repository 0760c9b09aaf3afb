//! The exact ordered field every computation in this crate is generic over.
//!
//! Only exact rational types implement [`Scalar`]: comparisons drive pivot
//! selection, hull facets and breakpoints, so floating point is not admitted.
//! `Ratio<i64>` and `Ratio<i128>` are accepted for small inputs; their
//! arithmetic panics on overflow exactly like the underlying integers.

use std::fmt::{Debug, Display};
use std::hash::Hash;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Signed, ToPrimitive, Zero};

pub trait Scalar:
    Clone + Debug + Display + Ord + Hash + Signed + Send + Sync + 'static
{
    fn from_i64(value: i64) -> Self;

    /// `numer / denom`, or `None` when the value does not fit the representation.
    fn from_ratio(numer: &BigInt, denom: &BigInt) -> Option<Self>;

    fn to_big_rational(&self) -> BigRational;

    fn is_integral(&self) -> bool;

    fn from_big_rational(value: &BigRational) -> Option<Self> {
        Self::from_ratio(value.numer(), value.denom())
    }

    fn from_bigint(value: &BigInt) -> Option<Self> {
        Self::from_ratio(value, &BigInt::one())
    }

    fn from_usize(value: usize) -> Self {
        Self::from_i64(i64::try_from(value).expect("usize value exceeds i64"))
    }
}

impl Scalar for BigRational {
    fn from_i64(value: i64) -> Self {
        BigRational::from_integer(BigInt::from(value))
    }

    fn from_ratio(numer: &BigInt, denom: &BigInt) -> Option<Self> {
        if denom.is_zero() {
            return None;
        }
        Some(BigRational::new(numer.clone(), denom.clone()))
    }

    fn to_big_rational(&self) -> BigRational {
        self.clone()
    }

    fn is_integral(&self) -> bool {
        self.is_integer()
    }
}

macro_rules! machine_ratio {
    ($int:ty, $conv:ident) => {
        impl Scalar for Ratio<$int> {
            fn from_i64(value: i64) -> Self {
                Ratio::from_integer(<$int>::from(value))
            }

            fn from_ratio(numer: &BigInt, denom: &BigInt) -> Option<Self> {
                if denom.is_zero() {
                    return None;
                }
                let g = numer.gcd(denom);
                let (n, d) = (numer / &g, denom / &g);
                Some(Ratio::new(n.$conv()?, d.$conv()?))
            }

            fn to_big_rational(&self) -> BigRational {
                BigRational::new(BigInt::from(*self.numer()), BigInt::from(*self.denom()))
            }

            fn is_integral(&self) -> bool {
                self.is_integer()
            }
        }
    };
}

machine_ratio!(i64, to_i64);
machine_ratio!(i128, to_i128);

/// Converts between two scalar types, panicking if the target cannot hold the value.
pub fn convert<F: Scalar, G: Scalar>(value: &F) -> G {
    G::from_big_rational(&value.to_big_rational()).expect("scalar conversion overflow")
}

pub fn numer_denom<F: Scalar>(value: &F) -> (BigInt, BigInt) {
    let r = value.to_big_rational();
    (r.numer().clone(), r.denom().clone())
}

pub fn floor<F: Scalar>(value: &F) -> BigInt {
    value.to_big_rational().floor().to_integer()
}

pub fn ceil<F: Scalar>(value: &F) -> BigInt {
    value.to_big_rational().ceil().to_integer()
}

/// Least common multiple of the denominators of `values` (1 for an empty slice).
pub fn common_denominator<F: Scalar>(values: &[F]) -> BigInt {
    values
        .iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(&numer_denom(v).1))
}

/// Scales a rational vector to the primitive integer vector on the same ray.
/// Returns the zero vector unchanged.
pub fn primitive_integer_vector<F: Scalar>(values: &[F]) -> Vec<BigInt> {
    let den = common_denominator(values);
    let ints: Vec<BigInt> = values
        .iter()
        .map(|v| {
            let (n, d) = numer_denom(v);
            n * (&den / d)
        })
        .collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, v| acc.gcd(v));
    if g.is_zero() {
        return ints;
    }
    ints.into_iter().map(|v| v / &g).collect()
}

/// Formats a scalar as `"p/q"`, always with an explicit denominator.
pub fn to_fraction_string<F: Scalar>(value: &F) -> String {
    let (n, d) = numer_denom(value);
    format!("{n}/{d}")
}

/// Parses `"p/q"` or a bare integer `"p"`.
pub fn parse_fraction<F: Scalar>(text: &str) -> Option<F> {
    let text = text.trim();
    let (n, d) = match text.split_once('/') {
        Some((n, d)) => (n.trim().parse::<BigInt>().ok()?, d.trim().parse::<BigInt>().ok()?),
        None => (text.parse::<BigInt>().ok()?, BigInt::one()),
    };
    F::from_ratio(&n, &d)
}

pub fn to_f64<F: Scalar>(value: &F) -> f64 {
    value.to_big_rational().to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fractions_round_trip() {
        let x: BigRational = parse_fraction("-6/4").unwrap();
        assert_eq!(to_fraction_string(&x), "-3/2");
        let y: Ratio<i64> = parse_fraction("7").unwrap();
        assert_eq!(to_fraction_string(&y), "7/1");
        assert!(parse_fraction::<BigRational>("1/0").is_none());
    }

    #[test]
    fn primitive_vectors() {
        let v = [
            BigRational::from_i64(2),
            BigRational::new(BigInt::from(4), BigInt::from(3)),
        ];
        assert_eq!(
            primitive_integer_vector(&v),
            vec![BigInt::from(3), BigInt::from(2)]
        );
    }

    #[test]
    fn machine_ratio_rejects_overflow() {
        let big = BigInt::from(i64::MAX) * 4;
        assert!(Ratio::<i64>::from_ratio(&big, &BigInt::from(3)).is_none());
        assert!(Ratio::<i128>::from_ratio(&big, &BigInt::from(3)).is_some());
    }

    #[test]
    fn addition_two_routes_agree() {
        // (a/b) + (c/d): cross multiplication against the lcm route.
        let (a, b, c, d) = (7i64, 12i64, -5i64, 18i64);
        let cross = BigRational::new((a * d + c * b).into(), (b * d).into());
        let l = b.lcm(&d);
        let lcm_route = BigRational::new((a * (l / b) + c * (l / d)).into(), l.into());
        let direct = BigRational::new(a.into(), b.into()) + BigRational::new(c.into(), d.into());
        assert_eq!(cross, lcm_route);
        assert_eq!(direct, lcm_route);
    }
}
