use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use thiserror::Error;

use super::{pow2, Distance};
use crate::assignments::{AggressiveComposite, AtomicAssignment, GeneralizedAssignment};
use crate::formula::Sign;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MetricError {
    #[error("distance between two empty parameters is undefined")]
    BothEmpty,
}

fn rat(numer: impl Into<BigInt>, denom: impl Into<BigInt>) -> BigRational {
    BigRational::new(numer.into(), denom.into())
}

/// Distance between atomic assignments; `None` is the empty parameter.
///
/// Opposite signs at `i, j`: `(i+j)/2^(i+j+2)`. Equal signs:
/// `|i-j|/2^(i+j+2)`. Against empty: `i/2^(i+2)`.
pub fn atomic_distance(
    e1: Option<AtomicAssignment>,
    e2: Option<AtomicAssignment>,
) -> Result<Distance, MetricError> {
    let value = match (e1, e2) {
        (None, None) => return Err(MetricError::BothEmpty),
        (Some(e), None) | (None, Some(e)) => rat(e.var, pow2(e.var + 2)),
        (Some(a), Some(b)) => {
            let (i, j) = (a.var, b.var);
            let numer = if a.sign == b.sign { i.abs_diff(j) } else { i + j };
            rat(numer, pow2(i + j + 2))
        }
    };
    Ok(Distance::from_rational(value))
}

/// `Σ_{k ≥ from} k/2^(2k+1)`, the total weight of disagreeing at every
/// position from `from` on: `2(3K+1)/(9·4^K)`.
pub fn disagreement_tail(from: u32) -> Distance {
    assert!(from >= 1);
    Distance::from_rational(rat(2 * (3 * u64::from(from) + 1), 9 * pow2(2 * from)))
}

/// `Σ_{k ≥ from} k/2^(k+2) = (K+1)/2^(K+1)`.
pub fn empty_tail(from: u32) -> Distance {
    assert!(from >= 1);
    Distance::from_rational(rat(from + 1, pow2(from + 1)))
}

/// `Σ_{j ≥ 0} (c+jP)/2^(2(c+jP)+1)`.
fn progression_weight(c: u32, period: u32) -> BigRational {
    let y = rat(1, 4);
    let q = num_traits::pow(y.clone(), period as usize);
    let one_minus_q = BigRational::one() - &q;
    let head = num_traits::pow(y, c as usize);
    let inner = rat(c, 1) / &one_minus_q + rat(period, 1) * &q / (&one_minus_q * &one_minus_q);
    head * inner / rat(2, 1)
}

/// Sum over all positions of the per-position atomic distance. Exact: the
/// disagreement pattern is eventually periodic, and each residue class of
/// the tail contributes an arithmetic-geometric series.
pub fn distance_ta1(a: &GeneralizedAssignment, b: &GeneralizedAssignment) -> Distance {
    let disagree = a.sequence().zip_with(b.sequence(), |x, y| Sign::from_bool(x != y));
    let mut total = BigRational::from_integer(0.into());
    for (i, s) in disagree.prefix().iter().enumerate() {
        if s.is_pos() {
            let k = i as u32 + 1;
            total += rat(k, pow2(2 * k + 1));
        }
    }
    let start = disagree.prefix().len() as u32 + 1;
    let period = disagree.tail().len() as u32;
    for (r, s) in disagree.tail().iter().enumerate() {
        if s.is_pos() {
            total += progression_weight(start + r as u32, period);
        }
    }
    Distance::from_rational(total)
}

/// Distance from any assignment to the empty parameter: `1/2`.
pub fn distance_empty_ta1(_a: &GeneralizedAssignment) -> Distance {
    empty_tail(1)
}

/// Weighted sum `Σ (1/i²)·d(part_i, part'_i)`, with the surplus parts of
/// the longer list measured against the empty parameter.
pub fn distance_composite(c1: &[GeneralizedAssignment], c2: &[GeneralizedAssignment]) -> Distance {
    let len = c1.len().max(c2.len());
    (0..len)
        .map(|i| {
            let d = match (c1.get(i), c2.get(i)) {
                (Some(a), Some(b)) => distance_ta1(a, b),
                (Some(a), None) | (None, Some(a)) => distance_empty_ta1(a),
                (None, None) => unreachable!(),
            };
            let w = (i as u64 + 1) * (i as u64 + 1);
            d * &rat(1, w)
        })
        .sum()
}

/// Distance between `f α` and `f β` for one base procedure; `None` is the
/// bare base.
pub fn distance_algorithms(
    c1: Option<&AggressiveComposite>,
    c2: Option<&AggressiveComposite>,
) -> Distance {
    let parts = |c: Option<&AggressiveComposite>| c.map(|c| c.parts().to_vec()).unwrap_or_default();
    distance_composite(&parts(c1), &parts(c2))
}

/// A base procedure, identified by `family`, followed by a suffix of
/// aggressive assignments.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Chain {
    pub family: u64,
    pub suffix: Vec<GeneralizedAssignment>,
}

impl Chain {
    pub fn bare(family: u64) -> Chain {
        Chain { family, suffix: Vec::new() }
    }

    pub fn new(family: u64, suffix: Vec<GeneralizedAssignment>) -> Chain {
        Chain { family, suffix }
    }

    /// `self` followed by `beta`.
    pub fn then(&self, beta: &[GeneralizedAssignment]) -> Chain {
        let mut suffix = self.suffix.clone();
        suffix.extend_from_slice(beta);
        Chain { family: self.family, suffix }
    }

    pub fn level(&self) -> usize {
        self.suffix.len()
    }

    /// Same family: the composite distance of the suffixes. Different
    /// families: 1.
    pub fn distance(&self, other: &Chain) -> Distance {
        if self.family != other.family {
            return Distance::one();
        }
        distance_composite(&self.suffix, &other.suffix)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::Sign::{Neg, Pos};

    fn at(var: u32, sign: Sign) -> Option<AtomicAssignment> {
        Some(AtomicAssignment::new(var, sign))
    }

    #[test]
    fn atomic_values() {
        assert_eq!(atomic_distance(at(1, Pos), at(1, Neg)).unwrap(), Distance::ratio(1, 8));
        assert_eq!(atomic_distance(at(1, Pos), at(2, Neg)).unwrap(), Distance::ratio(3, 32));
        assert_eq!(atomic_distance(at(1, Pos), at(2, Pos)).unwrap(), Distance::ratio(1, 32));
        assert_eq!(atomic_distance(at(2, Neg), None).unwrap(), Distance::ratio(1, 8));
        assert_eq!(atomic_distance(None, at(2, Pos)).unwrap(), Distance::ratio(1, 8));
        assert!(atomic_distance(at(4, Neg), at(4, Neg)).unwrap().is_zero());
        assert_eq!(atomic_distance(None, None).unwrap_err(), MetricError::BothEmpty);
    }

    #[test]
    fn ta1_values() {
        let pos = GeneralizedAssignment::all_positive();
        let neg = GeneralizedAssignment::all_negative();
        assert_eq!(distance_ta1(&pos, &neg), Distance::ratio(2, 9));
        assert!(distance_ta1(&pos, &pos).is_zero());
        assert_eq!(distance_ta1(&neg, &neg.with_flip(3)), Distance::ratio(3, 128));
        assert_eq!(distance_empty_ta1(&pos), Distance::ratio(1, 2));
    }

    #[test]
    fn periodic_tail_matches_truncated_sum() {
        let a = GeneralizedAssignment::new(vec![Pos, Neg], vec![Pos, Neg, Neg]);
        let b = GeneralizedAssignment::new(vec![], vec![Neg, Pos]);
        let exact = distance_ta1(&a, &b);
        let mut partial = BigRational::from_integer(0.into());
        for k in 1..=80u32 {
            if a.sign(k) != b.sign(k) {
                partial += rat(k, pow2(2 * k + 1));
            }
        }
        let gap = exact.value() - &partial;
        assert!(gap >= BigRational::from_integer(0.into()));
        assert!(gap <= *disagreement_tail(81).value());
    }

    #[test]
    fn tails() {
        assert_eq!(disagreement_tail(1), Distance::ratio(2, 9));
        assert_eq!(empty_tail(1), Distance::ratio(1, 2));
        for k in 1..20u32 {
            let step = rat(k, pow2(2 * k + 1));
            assert_eq!(disagreement_tail(k).value() - disagreement_tail(k + 1).value(), step);
            assert_eq!(empty_tail(k).value() - empty_tail(k + 1).value(), rat(k, pow2(k + 2)));
        }
    }

    #[test]
    fn composite_weights() {
        let a = GeneralizedAssignment::all_negative();
        let b = GeneralizedAssignment::all_positive();
        let c = a.with_flip(1);
        let d = b.with_flip(2);
        let ab = [a.clone(), b.clone()];
        assert!(distance_composite(&ab, &ab).is_zero());
        let expected = distance_ta1(&a, &c) + distance_ta1(&b, &d) * &rat(1, 4);
        assert_eq!(distance_composite(&ab, &[c, d]), expected);
        assert_eq!(distance_composite(std::slice::from_ref(&a), &ab), Distance::ratio(1, 8));
        assert_eq!(distance_composite(&ab, &[a]), Distance::ratio(1, 8));
    }

    #[test]
    fn algorithm_distances() {
        assert!(distance_algorithms(None, None).is_zero());
        let a = AggressiveComposite::single(GeneralizedAssignment::all_negative());
        let b = AggressiveComposite::single(GeneralizedAssignment::all_positive());
        assert_eq!(distance_algorithms(Some(&a), Some(&b)), Distance::ratio(2, 9));
        assert_eq!(distance_algorithms(None, Some(&b)), Distance::ratio(1, 2));
    }

    #[test]
    fn chains() {
        let a = GeneralizedAssignment::all_negative();
        let b = GeneralizedAssignment::all_positive();
        let beta = [a.with_flip(2), b.with_flip(5)];
        let x = Chain::new(0, vec![a.clone()]);
        let y = Chain::new(0, vec![b.clone()]);
        assert_eq!(x.then(&beta).distance(&y.then(&beta)), x.distance(&y));
        assert_eq!(Chain::bare(0).distance(&Chain::bare(0)), Distance::zero());
        assert_eq!(x.distance(&Chain::new(1, vec![a])), Distance::one());
    }
}
