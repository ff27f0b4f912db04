use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use thiserror::Error;

use super::distance::{disagreement_tail, distance_composite};
use super::{pow2, Distance};
use crate::assignments::{
    check_equivalent_composite, guard, AggressiveComposite, DecideError, Decider, GeneralizedAssignment,
};
use crate::formula::{Formula, Sign};

/// Chooses a sign for each 1-based position.
#[derive(Clone)]
pub enum SignRule {
    Constant(Sign),
    /// `signs[i-1]` at position `i`, then `then` forever.
    Listed { signs: Vec<Sign>, then: Sign },
    Custom(Arc<dyn Fn(u32) -> Sign + Send + Sync>),
}

impl SignRule {
    pub fn at(&self, pos: u32) -> Sign {
        assert!(pos >= 1, "positions start at 1");
        match self {
            SignRule::Constant(s) => *s,
            SignRule::Listed { signs, then } => signs.get(pos as usize - 1).copied().unwrap_or(*then),
            SignRule::Custom(f) => f(pos),
        }
    }

    pub fn listed(signs: Vec<Sign>) -> SignRule {
        SignRule::Listed { signs, then: Sign::Neg }
    }
}

impl Default for SignRule {
    fn default() -> SignRule {
        SignRule::Constant(Sign::Neg)
    }
}

impl fmt::Debug for SignRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SignRule::Constant(s) => f.debug_tuple("Constant").field(s).finish(),
            SignRule::Listed { signs, then } => {
                f.debug_struct("Listed").field("signs", signs).field("then", then).finish()
            }
            SignRule::Custom(_) => f.write_str("Custom(..)"),
        }
    }
}

/// A regular Cauchy sequence `f a0 a_1, f a0 a_2, ...`.
///
/// Term `n` is the negative extension of `e_1 ... e_n e_{n+1}` where
/// `e_1 ... e_n` come from `spine` and `e_{n+1}` from `frontier`. Terms `n`
/// and `n+1` therefore agree on the first `n` signs.
#[derive(Debug, Clone)]
pub struct RegularCauchySeq {
    a0: GeneralizedAssignment,
    spine: SignRule,
    frontier: SignRule,
}

/// The sequence whose spine and frontier are both `rule`.
pub fn regular_cauchy(a0: GeneralizedAssignment, rule: SignRule) -> RegularCauchySeq {
    RegularCauchySeq { a0, spine: rule.clone(), frontier: rule }
}

impl RegularCauchySeq {
    pub fn with_rules(a0: GeneralizedAssignment, spine: SignRule, frontier: SignRule) -> RegularCauchySeq {
        RegularCauchySeq { a0, spine, frontier }
    }

    pub fn a0(&self) -> &GeneralizedAssignment {
        &self.a0
    }

    pub fn spine(&self) -> &SignRule {
        &self.spine
    }

    pub fn frontier(&self) -> &SignRule {
        &self.frontier
    }

    /// `a_n`, for `n ≥ 1`.
    pub fn term(&self, n: u32) -> GeneralizedAssignment {
        assert!(n >= 1, "terms start at 1");
        let mut prefix: Vec<Sign> = (1..=n).map(|i| self.spine.at(i)).collect();
        prefix.push(self.frontier.at(n + 1));
        GeneralizedAssignment::negative_extension(prefix)
    }

    /// The suffix `(a0)(a_n)` of `f_n`.
    pub fn element(&self, n: u32) -> AggressiveComposite {
        AggressiveComposite::new(vec![self.a0.clone(), self.term(n)])
    }

    /// `d(f_m, f_n)`.
    pub fn distance(&self, m: u32, n: u32) -> Distance {
        distance_composite(self.element(m).parts(), self.element(n).parts())
    }
}

/// Upper bound on `d(f_n, f_{n+1})`: every position from `n+1` on
/// disagreeing, `(6n+8)/(9·4^(n+1))`.
pub fn cauchy_bound(n: u32) -> Distance {
    disagreement_tail(n + 1)
}

/// Smallest `N` such that `d(f_m, f_n) < eps` for all `m, n > N`, from the
/// tail bound: terms past `N` agree on positions `1..=N+1`.
pub fn cauchy_threshold(eps: &BigRational) -> u32 {
    let quarter = BigRational::new(BigInt::from(1), BigInt::from(4));
    (0..)
        .find(|&n| disagreement_tail(n + 2).value() * &quarter < *eps)
        .expect("the tail bound tends to zero")
}

/// `2^-k` as an exact rational.
pub fn inverse_power_of_two(k: u32) -> BigRational {
    BigRational::new(BigInt::from(1), pow2(k))
}

/// `f*(η) = f a0 a_{n-2}(η)` where `n` is the declared variable count of η.
#[derive(Debug, Clone)]
pub struct CharacteristicRep<D> {
    base: D,
    seq: RegularCauchySeq,
}

impl<D: Decider> CharacteristicRep<D> {
    pub fn new(base: D, seq: RegularCauchySeq) -> CharacteristicRep<D> {
        CharacteristicRep { base, seq }
    }

    pub fn sequence(&self) -> &RegularCauchySeq {
        &self.seq
    }

    /// Index of the term used for inputs over `n` variables.
    pub fn dispatch_index(n: u32) -> Result<u32, DecideError> {
        if n < 3 {
            return Err(DecideError::TooFewVariables(n));
        }
        Ok(n - 2)
    }
}

impl<D: Decider> Decider for CharacteristicRep<D> {
    fn decide(&self, f: &Formula) -> Result<bool, DecideError> {
        let k = Self::dispatch_index(f.num_vars())?;
        guard(guard(&self.base, self.seq.a0.clone()), self.seq.term(k)).decide(f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiagonalError {
    #[error("cannot diagonalize an empty list")]
    Empty,
}

/// A sequence whose `k`-th term negates the `k`-th sign of the `k`-th term
/// of the `k`-th listed sequence, for every listed `k`.
///
/// The output uses the first listed `a0`. The free sign `e_{k+1}` of term
/// `k` is negative unless that would leave `(a0)(a_k)` equivalent to the
/// `k`-th listed element, in which case it is positive. Past the list the
/// spine is negative.
pub fn diagonalize(listed: &[RegularCauchySeq]) -> Result<RegularCauchySeq, DiagonalError> {
    let first = listed.first().ok_or(DiagonalError::Empty)?;
    let a0 = first.a0.clone();
    let spine: Vec<Sign> = listed
        .iter()
        .zip(1u32..)
        .map(|(s, k)| s.term(k).sign(k).negate())
        .collect();

    let mut frontier = vec![Sign::Neg];
    for (s, k) in listed.iter().zip(1u32..) {
        let theirs = s.element(k);
        let candidate = |free: Sign| {
            let mut prefix = spine[..k as usize].to_vec();
            prefix.push(free);
            AggressiveComposite::new(vec![a0.clone(), GeneralizedAssignment::negative_extension(prefix)])
        };
        let equivalent = check_equivalent_composite(&candidate(Sign::Neg), &theirs)
            .expect("both composites have two parts");
        frontier.push(if equivalent { Sign::Pos } else { Sign::Neg });
    }

    Ok(RegularCauchySeq::with_rules(a0, SignRule::listed(spine), SignRule::listed(frontier)))
}
