use std::fmt;

use thiserror::Error;

use super::eval::{eval_alg1, eval_composition, EvalError};
use super::{AggressiveComposite, GeneralizedAssignment, SignSequence};
use crate::classifier::algorithm2;
use crate::formula::{Formula, Sign};

/// A variable sign-flip map. Position `i` holds `Pos` to keep variable `i`
/// and `Neg` to flip it. Every such map is its own inverse.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PiMap {
    flips: SignSequence,
}

impl PiMap {
    pub fn identity() -> PiMap {
        PiMap { flips: SignSequence::constant(Sign::Pos) }
    }

    /// Flips exactly the listed variables.
    pub fn from_flips(vars: &[u32]) -> PiMap {
        let len = vars.iter().copied().max().unwrap_or(0) as usize;
        let mut prefix = vec![Sign::Pos; len];
        for &v in vars {
            assert!(v >= 1, "variables start at 1");
            prefix[v as usize - 1] = Sign::Neg;
        }
        PiMap { flips: SignSequence::new(prefix, vec![Sign::Pos]) }
    }

    pub fn from_sequence(flips: SignSequence) -> PiMap {
        PiMap { flips }
    }

    pub fn sequence(&self) -> &SignSequence {
        &self.flips
    }

    pub fn flips(&self, var: u32) -> bool {
        self.flips.at(var as usize) == Sign::Neg
    }

    pub fn is_identity(&self) -> bool {
        *self == PiMap::identity()
    }

    /// Flipped variables among `1..=n`.
    pub fn flipped_vars(&self, n: u32) -> Vec<u32> {
        (1..=n).filter(|&v| self.flips(v)).collect()
    }

    /// `self` after `other`; flips where exactly one of them flips.
    pub fn compose(&self, other: &PiMap) -> PiMap {
        PiMap { flips: self.flips.zip_with(&other.flips, |x, y| Sign::from_bool(x == y)) }
    }

    /// The same map with the action at `var` toggled.
    pub fn with_extra_flip(&self, var: u32) -> PiMap {
        PiMap { flips: self.flips.flipped_at(var as usize) }
    }

    /// Image of an assignment: `π(e_i) = ¬e_i` exactly where π flips `i`.
    pub fn apply_assignment(&self, a: &GeneralizedAssignment) -> GeneralizedAssignment {
        GeneralizedAssignment::from_sequence(
            a.sequence().zip_with(&self.flips, |s, keep| if keep.is_pos() { s } else { s.negate() }),
        )
    }
}

impl fmt::Display for PiMap {
    /// Assignment-shaped text, negative entries marking flipped variables:
    /// `-1 -2 tail=pos` flips x1 and x2.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        GeneralizedAssignment::from_sequence(self.flips.clone()).fmt(f)
    }
}

/// The map taking `a` to `b`: flip at `i` iff the signs at `i` differ.
pub fn derive_pi(a: &GeneralizedAssignment, b: &GeneralizedAssignment) -> PiMap {
    PiMap { flips: a.sequence().zip_with(b.sequence(), |x, y| Sign::from_bool(x == y)) }
}

/// Negates every literal whose variable `p` flips. Clause and literal order
/// are unchanged.
pub fn apply_pi(p: &PiMap, f: &Formula) -> Formula {
    let clauses = f
        .clauses()
        .iter()
        .map(|c| c.map_literals(|l| if p.flips(l.var()) { l.negate() } else { l }))
        .collect();
    Formula::from_parts_unchecked(f.num_vars(), clauses)
}

/// Whether `a` on each sample and `b` on its image under `pi` produce the
/// same evaluation trace and the same occurrence-check trace.
pub fn traces_agree_under(
    a: &GeneralizedAssignment,
    b: &GeneralizedAssignment,
    pi: &PiMap,
    sample: &[Formula],
    n: u32,
) -> Result<bool, EvalError> {
    for f in sample {
        let g = apply_pi(pi, f);
        if eval_alg1(a, f, n)?.1 != eval_alg1(b, &g, n)?.1 {
            return Ok(false);
        }
        if algorithm2(f, a, n)?.1 != algorithm2(&g, b, n)?.1 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Derives π from `a` and `b` and checks trace agreement under it on the
/// sample.
pub fn check_equivalent_ta1(
    a: &GeneralizedAssignment,
    b: &GeneralizedAssignment,
    sample: &[Formula],
    n: u32,
) -> Result<(PiMap, bool), EvalError> {
    let pi = derive_pi(a, b);
    let agree = traces_agree_under(a, b, &pi, sample, n)?;
    Ok((pi, agree))
}

/// Whether `c1` on each sample and `c2` on its image under `pi` produce the
/// same composite trace.
pub fn composite_traces_agree_under(
    c1: &AggressiveComposite,
    c2: &AggressiveComposite,
    pi: &PiMap,
    sample: &[Formula],
    n: u32,
) -> Result<bool, EvalError> {
    for f in sample {
        let g = apply_pi(pi, f);
        if eval_composition(c1, f, n)?.1 != eval_composition(c2, &g, n)?.1 {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CompositeEquivalenceError {
    #[error("composites have {left} and {right} parts")]
    LengthMismatch { left: usize, right: usize },
}

/// Equivalent iff every pair of corresponding parts derives the same map.
pub fn check_equivalent_composite(
    c1: &AggressiveComposite,
    c2: &AggressiveComposite,
) -> Result<bool, CompositeEquivalenceError> {
    if c1.len() != c2.len() {
        return Err(CompositeEquivalenceError::LengthMismatch { left: c1.len(), right: c2.len() });
    }
    let mut maps = c1.parts().iter().zip(c2.parts()).map(|(a, b)| derive_pi(a, b));
    let first = maps.next().expect("composites are nonempty");
    Ok(maps.all(|m| m == first))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::Sign::{Neg, Pos};

    fn eta1() -> Formula {
        Formula::from_dimacs_rows(3, &[&[-1, -2, -3], &[-1, 2, 3]])
    }

    #[test]
    fn derive_pi_examples() {
        let a = GeneralizedAssignment::negative_extension(vec![Pos, Neg]);
        let b = GeneralizedAssignment::negative_extension(vec![Neg, Pos]);
        let pi = derive_pi(&a, &b);
        assert_eq!(pi, PiMap::from_flips(&[1, 2]));
        assert_eq!(pi.flipped_vars(10), vec![1, 2]);
        assert!(derive_pi(&a, &a).is_identity());
        let total = derive_pi(&GeneralizedAssignment::all_positive(), &GeneralizedAssignment::all_negative());
        assert_eq!(total.sequence().tail(), &[Neg]);
        assert_eq!(total.to_string(), "tail=neg");
        assert_eq!(pi.apply_assignment(&a), b);
    }

    #[test]
    fn apply_pi_on_eta1() {
        let pi = PiMap::from_flips(&[1, 2]);
        let g = apply_pi(&pi, &eta1());
        assert_eq!(g, Formula::from_dimacs_rows(3, &[&[1, 2, -3], &[1, -2, 3]]));
        assert_eq!(apply_pi(&pi, &g), eta1());
        assert_eq!(apply_pi(&PiMap::identity(), &eta1()), eta1());
    }

    #[test]
    fn derived_map_and_perturbation() {
        let a = GeneralizedAssignment::negative_extension(vec![Pos, Neg, Neg, Pos]);
        let b = GeneralizedAssignment::new(vec![Neg], vec![Pos, Neg]);
        let f = eta1().with_num_vars(4).unwrap();
        let sample = [f.clone()];
        let (pi, ok) = check_equivalent_ta1(&a, &b, &sample, 4).unwrap();
        assert!(ok);
        let wrong = pi.with_extra_flip(1);
        assert!(!traces_agree_under(&a, &b, &wrong, &sample, 4).unwrap());
    }

    #[test]
    fn identity_traces_are_literally_equal() {
        let a = GeneralizedAssignment::all_negative();
        let (pi, ok) = check_equivalent_ta1(&a, &a, &[eta1()], 3).unwrap();
        assert!(pi.is_identity() && ok);
    }

    #[test]
    fn four_assignment_example() {
        let a1 = GeneralizedAssignment::negative_extension(vec![Pos, Neg]);
        let a2 = GeneralizedAssignment::negative_extension(vec![Neg, Pos]);
        let b1 = a2.clone();
        let b2 = a1.clone();
        let c1 = AggressiveComposite::new(vec![a1.clone(), a2.clone()]);
        let c2 = AggressiveComposite::new(vec![b1, b2]);
        assert_ne!(a1, a2);
        assert!(check_equivalent_composite(&c1, &c2).unwrap());
        assert!(check_equivalent_composite(&c1, &c1).unwrap());

        let d1 = AggressiveComposite::new(vec![a1.clone(), a1.clone()]);
        let d2 = AggressiveComposite::new(vec![a1.with_flip(1), a1.with_flip(2)]);
        assert!(!check_equivalent_composite(&d1, &d2).unwrap());

        let short = AggressiveComposite::single(a1);
        assert_eq!(
            check_equivalent_composite(&c1, &short).unwrap_err(),
            CompositeEquivalenceError::LengthMismatch { left: 2, right: 1 }
        );
    }

    #[test]
    fn compose_is_xor() {
        let p = PiMap::from_flips(&[1, 3]);
        let q = PiMap::from_flips(&[3, 4]);
        assert_eq!(p.compose(&q), PiMap::from_flips(&[1, 4]));
        assert!(p.compose(&p).is_identity());
    }
}
