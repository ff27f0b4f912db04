//! Truth assignments and their traced evaluation.
//!
//! A [`GeneralizedAssignment`] fixes a sign for every variable index
//! `1, 2, 3, ...` using finite information: an explicit prefix followed by a
//! repeating tail word. Sequences are stored in a canonical form (primitive
//! tail, shortest prefix), so structural equality is equality of the
//! infinite sequences.

mod equivalence;
mod eval;
mod guard;
mod trace;

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::formula::{Literal, Sign};

pub use equivalence::{
    apply_pi, check_equivalent_composite, check_equivalent_ta1, composite_traces_agree_under, derive_pi,
    traces_agree_under,
    CompositeEquivalenceError, PiMap,
};
pub use eval::{
    eval_aggressive, eval_alg1, eval_composition, AggressiveTrace, CompositeTrace, EvalError,
};
pub(crate) use eval::check_bound;
pub use guard::{absorb, from_fn, guard, Absorbed, DecideError, Decider, FromFn, Guarded};
pub use trace::{Trace, TraceBuilder, TraceParseError, TraceStep};

/// `prefix` then `tail` repeated forever. Always held in canonical form.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SignSequence {
    prefix: Vec<Sign>,
    tail: Vec<Sign>,
}

impl SignSequence {
    /// Panics on an empty tail.
    pub fn new(prefix: Vec<Sign>, tail: Vec<Sign>) -> SignSequence {
        assert!(!tail.is_empty(), "tail word must be nonempty");
        let mut seq = SignSequence { prefix, tail };
        seq.canonicalize();
        seq
    }

    pub fn constant(sign: Sign) -> SignSequence {
        SignSequence { prefix: vec![], tail: vec![sign] }
    }

    fn canonicalize(&mut self) {
        let p = primitive_period(&self.tail);
        self.tail.truncate(p);
        while let Some(&last) = self.prefix.last() {
            if last != *self.tail.last().unwrap() {
                break;
            }
            self.prefix.pop();
            self.tail.rotate_right(1);
        }
    }

    /// Sign at 1-based position `i`.
    pub fn at(&self, i: usize) -> Sign {
        assert!(i >= 1, "positions start at 1");
        if i <= self.prefix.len() {
            self.prefix[i - 1]
        } else {
            self.tail[(i - self.prefix.len() - 1) % self.tail.len()]
        }
    }

    pub fn prefix(&self) -> &[Sign] {
        &self.prefix
    }

    pub fn tail(&self) -> &[Sign] {
        &self.tail
    }

    /// Pointwise combination of two sequences.
    pub fn zip_with(&self, other: &SignSequence, f: impl Fn(Sign, Sign) -> Sign) -> SignSequence {
        let len = self.prefix.len().max(other.prefix.len());
        let period = lcm(self.tail.len(), other.tail.len());
        let prefix = (1..=len).map(|i| f(self.at(i), other.at(i))).collect();
        let tail = (len + 1..=len + period).map(|i| f(self.at(i), other.at(i))).collect();
        SignSequence::new(prefix, tail)
    }

    /// Same sequence with position `i` negated.
    pub fn flipped_at(&self, i: usize) -> SignSequence {
        assert!(i >= 1);
        let len = self.prefix.len().max(i);
        let mut prefix: Vec<Sign> = (1..=len).map(|j| self.at(j)).collect();
        prefix[i - 1] = prefix[i - 1].negate();
        let tail = (len + 1..=len + self.tail.len()).map(|j| self.at(j)).collect();
        SignSequence::new(prefix, tail)
    }
}

fn primitive_period(word: &[Sign]) -> usize {
    let n = word.len();
    (1..=n)
        .find(|&p| n.is_multiple_of(p) && word.iter().enumerate().all(|(i, s)| *s == word[i % p]))
        .unwrap_or(n)
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

/// `x_var*` (positive) or `¬x_var*` (negative).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct AtomicAssignment {
    pub var: u32,
    pub sign: Sign,
}

impl AtomicAssignment {
    pub fn new(var: u32, sign: Sign) -> AtomicAssignment {
        assert!(var >= 1);
        AtomicAssignment { var, sign }
    }

    pub fn negate(self) -> AtomicAssignment {
        AtomicAssignment { var: self.var, sign: self.sign.negate() }
    }

    /// `Some(value)` on the assignment's own variable, `None` (undef) on any
    /// other variable.
    pub fn apply(self, lit: Literal) -> Option<bool> {
        (lit.var() == self.var).then(|| lit.eval(self.sign.is_pos()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AssignmentParseError {
    #[error("`{0}` is not a signed integer")]
    BadToken(String),
    #[error("prefix entry {position} must be ±{position}, found {found}")]
    OutOfOrder { position: usize, found: i64 },
    #[error("unknown tail `{0}`; expected neg, pos or word:<+->")]
    BadTail(String),
}

/// An infinite truth assignment `e_1 e_2 e_3 ...` given by finite
/// information.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GeneralizedAssignment {
    signs: SignSequence,
}

impl GeneralizedAssignment {
    /// Explicit prefix for variables `1..=prefix.len()`, then `tail` repeated.
    pub fn new(prefix: Vec<Sign>, tail: Vec<Sign>) -> GeneralizedAssignment {
        GeneralizedAssignment { signs: SignSequence::new(prefix, tail) }
    }

    /// The negative extension of `prefix`.
    pub fn negative_extension(prefix: Vec<Sign>) -> GeneralizedAssignment {
        GeneralizedAssignment::new(prefix, vec![Sign::Neg])
    }

    pub fn positive_extension(prefix: Vec<Sign>) -> GeneralizedAssignment {
        GeneralizedAssignment::new(prefix, vec![Sign::Pos])
    }

    pub fn all_negative() -> GeneralizedAssignment {
        GeneralizedAssignment { signs: SignSequence::constant(Sign::Neg) }
    }

    pub fn all_positive() -> GeneralizedAssignment {
        GeneralizedAssignment { signs: SignSequence::constant(Sign::Pos) }
    }

    pub fn from_sequence(signs: SignSequence) -> GeneralizedAssignment {
        GeneralizedAssignment { signs }
    }

    pub fn sequence(&self) -> &SignSequence {
        &self.signs
    }

    pub fn sign(&self, var: u32) -> Sign {
        self.signs.at(var as usize)
    }

    pub fn atomic(&self, var: u32) -> AtomicAssignment {
        AtomicAssignment::new(var, self.sign(var))
    }

    /// Value of `lit` under this assignment.
    pub fn eval_literal(&self, lit: Literal) -> bool {
        lit.eval(self.sign(lit.var()).is_pos())
    }

    /// First `n` signs as booleans.
    pub fn values(&self, n: u32) -> Vec<bool> {
        (1..=n).map(|v| self.sign(v).is_pos()).collect()
    }

    pub fn with_flip(&self, var: u32) -> GeneralizedAssignment {
        GeneralizedAssignment { signs: self.signs.flipped_at(var as usize) }
    }

    /// Parses the prefix (`1 -2 -3 4`) and tail (`neg`, `pos` or
    /// `word:+-`) separately.
    pub fn parse(prefix: &str, tail: &str) -> Result<GeneralizedAssignment, AssignmentParseError> {
        let mut signs = Vec::new();
        for (i, token) in prefix.split_whitespace().enumerate() {
            let value: i64 = token
                .parse()
                .map_err(|_| AssignmentParseError::BadToken(token.to_string()))?;
            if value.unsigned_abs() != (i + 1) as u64 {
                return Err(AssignmentParseError::OutOfOrder { position: i + 1, found: value });
            }
            signs.push(if value > 0 { Sign::Pos } else { Sign::Neg });
        }
        Ok(GeneralizedAssignment::new(signs, parse_tail(tail)?))
    }
}

fn parse_tail(tail: &str) -> Result<Vec<Sign>, AssignmentParseError> {
    match tail {
        "neg" => Ok(vec![Sign::Neg]),
        "pos" => Ok(vec![Sign::Pos]),
        _ => {
            let word = tail
                .strip_prefix("word:")
                .filter(|w| !w.is_empty())
                .ok_or_else(|| AssignmentParseError::BadTail(tail.to_string()))?;
            word.chars()
                .map(|c| match c {
                    '+' => Ok(Sign::Pos),
                    '-' => Ok(Sign::Neg),
                    _ => Err(AssignmentParseError::BadTail(tail.to_string())),
                })
                .collect()
        }
    }
}

fn format_tail(tail: &[Sign]) -> String {
    match tail {
        [Sign::Neg] => "neg".to_string(),
        [Sign::Pos] => "pos".to_string(),
        word => {
            let w: String = word.iter().map(|s| if s.is_pos() { '+' } else { '-' }).collect();
            format!("word:{w}")
        }
    }
}

impl fmt::Display for GeneralizedAssignment {
    /// Canonical text: `1 -2 -3 4 tail=neg`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.signs.prefix().iter().enumerate() {
            let v = i + 1;
            match s {
                Sign::Pos => write!(f, "{v} ")?,
                Sign::Neg => write!(f, "-{v} ")?,
            }
        }
        write!(f, "tail={}", format_tail(self.signs.tail()))
    }
}

impl FromStr for GeneralizedAssignment {
    type Err = AssignmentParseError;

    /// Accepts `1 -2 tail=pos`; the tail defaults to `neg`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut prefix = Vec::new();
        let mut tail = "neg";
        for token in s.split_whitespace() {
            match token.strip_prefix("tail=") {
                Some(t) => tail = t,
                None => prefix.push(token),
            }
        }
        GeneralizedAssignment::parse(&prefix.join(" "), tail)
    }
}

/// Composition `(a_1)(a_2)...(a_k)`; an element of `TA^k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AggressiveComposite {
    parts: Vec<GeneralizedAssignment>,
}

impl AggressiveComposite {
    /// Panics on an empty list.
    pub fn new(parts: Vec<GeneralizedAssignment>) -> AggressiveComposite {
        assert!(!parts.is_empty(), "a composite has at least one part");
        AggressiveComposite { parts }
    }

    pub fn single(a: GeneralizedAssignment) -> AggressiveComposite {
        AggressiveComposite { parts: vec![a] }
    }

    pub fn parts(&self) -> &[GeneralizedAssignment] {
        &self.parts
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// `self` followed by `suffix`.
    pub fn then(&self, suffix: &AggressiveComposite) -> AggressiveComposite {
        let mut parts = self.parts.clone();
        parts.extend(suffix.parts.iter().cloned());
        AggressiveComposite { parts }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use Sign::{Neg, Pos};

    #[test]
    fn canonical_forms_compare_equal() {
        let a = SignSequence::new(vec![Pos, Neg, Neg], vec![Neg, Neg]);
        let b = SignSequence::new(vec![Pos], vec![Neg]);
        assert_eq!(a, b);
        assert_eq!(a.prefix(), &[Pos]);
        assert_eq!(a.tail(), &[Neg]);

        let alt1 = SignSequence::new(vec![Pos, Neg], vec![Pos, Neg]);
        let alt2 = SignSequence::new(vec![], vec![Pos, Neg, Pos, Neg]);
        assert_eq!(alt1, alt2);
        let shifted = SignSequence::new(vec![Pos], vec![Neg, Pos]);
        assert_eq!(shifted, alt2);
    }

    #[test]
    fn positions_follow_tail() {
        let s = SignSequence::new(vec![Pos], vec![Neg, Neg, Pos]);
        let got: Vec<Sign> = (1..=7).map(|i| s.at(i)).collect();
        assert_eq!(got, vec![Pos, Neg, Neg, Pos, Neg, Neg, Pos]);
    }

    #[test]
    fn zip_covers_both_periods() {
        let a = SignSequence::new(vec![], vec![Pos, Neg]);
        let b = SignSequence::new(vec![Pos], vec![Neg, Neg, Pos]);
        let z = a.zip_with(&b, |x, y| Sign::from_bool(x == y));
        for i in 1..40 {
            assert_eq!(z.at(i), Sign::from_bool(a.at(i) == b.at(i)), "position {i}");
        }
    }

    #[test]
    fn parse_and_display() {
        let a: GeneralizedAssignment = "1 -2 -3 4".parse().unwrap();
        assert_eq!(a.to_string(), "1 -2 -3 4 tail=neg");
        assert_eq!(a.sign(5), Neg);
        let b = GeneralizedAssignment::parse("1 -2", "word:+-").unwrap();
        assert_eq!((1..=6).map(|v| b.sign(v)).collect::<Vec<_>>(), vec![Pos, Neg, Pos, Neg, Pos, Neg]);
        // trailing negative entries fold into the tail
        let c: GeneralizedAssignment = "1 -2 -3".parse().unwrap();
        assert_eq!(c.to_string(), "1 tail=neg");
        assert_eq!(GeneralizedAssignment::all_negative().to_string(), "tail=neg");
    }

    #[test]
    fn parse_errors() {
        assert_eq!(
            GeneralizedAssignment::parse("1 3", "neg").unwrap_err(),
            AssignmentParseError::OutOfOrder { position: 2, found: 3 }
        );
        assert!(matches!(GeneralizedAssignment::parse("x", "neg"), Err(AssignmentParseError::BadToken(_))));
        assert!(matches!(GeneralizedAssignment::parse("", "word:"), Err(AssignmentParseError::BadTail(_))));
        assert!(matches!(GeneralizedAssignment::parse("", "zig"), Err(AssignmentParseError::BadTail(_))));
    }

    #[test]
    fn atomic_semantics() {
        let e = AtomicAssignment::new(2, Neg);
        assert_eq!(e.apply(Literal::neg(2)), Some(true));
        assert_eq!(e.apply(Literal::pos(2)), Some(false));
        assert_eq!(e.apply(Literal::pos(3)), None);
        assert_eq!(e.negate().apply(Literal::pos(2)), Some(true));
    }

    #[test]
    fn flip_changes_one_position() {
        let a = GeneralizedAssignment::all_negative();
        let b = a.with_flip(3);
        assert_eq!(b.to_string(), "-1 -2 3 tail=neg");
        assert_eq!(b.with_flip(3), a);
    }
}
