//! An exact metric on aggressive assignments and their compositions, plus
//! the regular Cauchy and diagonal sequence constructions.

mod cauchy;
mod distance;

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, Mul};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

pub use cauchy::{
    cauchy_bound, cauchy_threshold, diagonalize, inverse_power_of_two, regular_cauchy, CharacteristicRep,
    DiagonalError, RegularCauchySeq, SignRule,
};
pub use distance::{
    atomic_distance, disagreement_tail, distance_algorithms, distance_composite, distance_empty_ta1,
    distance_ta1, empty_tail, Chain, MetricError,
};

/// Exact nonnegative rational distance.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Distance(BigRational);

impl Distance {
    pub fn zero() -> Distance {
        Distance(BigRational::zero())
    }

    pub fn one() -> Distance {
        Distance(BigRational::one())
    }

    /// Panics on a zero denominator.
    pub fn ratio(numer: i64, denom: i64) -> Distance {
        Distance(BigRational::new(BigInt::from(numer), BigInt::from(denom)))
    }

    pub fn from_rational(value: BigRational) -> Distance {
        assert!(value >= BigRational::zero(), "distances are nonnegative");
        Distance(value)
    }

    pub fn value(&self) -> &BigRational {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }
}

impl fmt::Display for Distance {
    /// Always `p/q`, including `0/1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

impl Add for Distance {
    type Output = Distance;

    fn add(self, rhs: Distance) -> Distance {
        Distance(self.0 + rhs.0)
    }
}

impl<'a> Add<&'a Distance> for &'a Distance {
    type Output = Distance;

    fn add(self, rhs: &Distance) -> Distance {
        Distance(&self.0 + &rhs.0)
    }
}

impl Mul<&BigRational> for Distance {
    type Output = Distance;

    fn mul(self, rhs: &BigRational) -> Distance {
        Distance::from_rational(self.0 * rhs)
    }
}

impl Sum for Distance {
    fn sum<I: Iterator<Item = Distance>>(iter: I) -> Distance {
        iter.fold(Distance::zero(), |acc, d| acc + d)
    }
}

pub(crate) fn pow2(exp: u32) -> BigInt {
    BigInt::one() << exp as usize
}
