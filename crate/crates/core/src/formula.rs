//! CNF formulas over indexed variables.
//!
//! A [`Formula`] is an ordered list of [`Clause`]s together with a declared
//! variable count. Clause order and literal order are both significant: the
//! traced evaluators in [`crate::assignments`] walk formulas position by
//! position, so two formulas that differ only in ordering produce different
//! traces.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

/// Polarity of a literal or an atomic truth assignment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Pos,
    Neg,
}

impl Sign {
    pub fn negate(self) -> Sign {
        match self {
            Sign::Pos => Sign::Neg,
            Sign::Neg => Sign::Pos,
        }
    }

    pub fn from_bool(value: bool) -> Sign {
        if value {
            Sign::Pos
        } else {
            Sign::Neg
        }
    }

    pub fn is_pos(self) -> bool {
        self == Sign::Pos
    }
}

/// `x_var` or `¬x_var`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    var: u32,
    sign: Sign,
}

impl Literal {
    /// Panics if `var` is zero.
    pub fn new(var: u32, sign: Sign) -> Literal {
        assert!(var >= 1, "variable indices start at 1");
        Literal { var, sign }
    }

    pub fn pos(var: u32) -> Literal {
        Literal::new(var, Sign::Pos)
    }

    pub fn neg(var: u32) -> Literal {
        Literal::new(var, Sign::Neg)
    }

    /// DIMACS encoding: `3` is `x3`, `-3` is `¬x3`. Returns `None` for zero.
    pub fn from_dimacs(value: i64) -> Option<Literal> {
        let var = u32::try_from(value.unsigned_abs()).ok()?;
        if var == 0 {
            return None;
        }
        Some(Literal::new(var, if value > 0 { Sign::Pos } else { Sign::Neg }))
    }

    pub fn to_dimacs(self) -> i64 {
        match self.sign {
            Sign::Pos => i64::from(self.var),
            Sign::Neg => -i64::from(self.var),
        }
    }

    pub fn var(self) -> u32 {
        self.var
    }

    pub fn sign(self) -> Sign {
        self.sign
    }

    pub fn negate(self) -> Literal {
        Literal { var: self.var, sign: self.sign.negate() }
    }

    /// Truth value of the literal when its variable is set to `value`.
    pub fn eval(self, value: bool) -> bool {
        value == self.sign.is_pos()
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.sign {
            Sign::Pos => write!(f, "x{}", self.var),
            Sign::Neg => write!(f, "¬x{}", self.var),
        }
    }
}

/// A nonempty disjunction of literals.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Clause(Vec<Literal>);

impl Clause {
    /// Panics on an empty literal list.
    pub fn new(literals: Vec<Literal>) -> Clause {
        assert!(!literals.is_empty(), "a clause needs at least one literal");
        Clause(literals)
    }

    /// Builds a clause from DIMACS integers. Panics on zero or an empty list.
    pub fn from_dimacs(values: &[i64]) -> Clause {
        Clause::new(
            values
                .iter()
                .map(|&v| Literal::from_dimacs(v).expect("zero is not a literal"))
                .collect(),
        )
    }

    pub fn literals(&self) -> &[Literal] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn max_var(&self) -> u32 {
        self.0.iter().map(|l| l.var()).max().unwrap_or(0)
    }

    /// Contains both `x` and `¬x` for some variable.
    pub fn is_tautological(&self) -> bool {
        self.0.iter().any(|l| self.0.contains(&l.negate()))
    }

    pub fn distinct_vars(&self) -> usize {
        self.0.iter().map(|l| l.var()).collect::<BTreeSet<_>>().len()
    }

    /// Literals sorted, used as the multiset key for duplicate detection.
    pub(crate) fn multiset_key(&self) -> Vec<Literal> {
        let mut key = self.0.clone();
        key.sort_unstable();
        key
    }

    /// `true` when some literal evaluates to true under `values[var - 1]`.
    pub fn eval(&self, values: &[bool]) -> bool {
        self.0.iter().any(|l| l.eval(values[l.var() as usize - 1]))
    }

    pub(crate) fn map_literals(&self, mut f: impl FnMut(Literal) -> Literal) -> Clause {
        Clause(self.0.iter().map(|&l| f(l)).collect())
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, lit) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ∨ ")?;
            }
            write!(f, "{lit}")?;
        }
        f.write_str(")")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormulaError {
    #[error("clause {clause} uses variable {var}, but only {declared} are declared")]
    VariableOutOfRange { clause: usize, var: u32, declared: u32 },
}

/// A CNF instance: ordered clauses plus a declared variable count.
///
/// `num_vars` may exceed the number of variables that actually occur.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Formula {
    num_vars: u32,
    clauses: Vec<Clause>,
}

impl Formula {
    pub fn new(num_vars: u32, clauses: Vec<Clause>) -> Result<Formula, FormulaError> {
        for (i, clause) in clauses.iter().enumerate() {
            let var = clause.max_var();
            if var > num_vars {
                return Err(FormulaError::VariableOutOfRange {
                    clause: i + 1,
                    var,
                    declared: num_vars,
                });
            }
        }
        Ok(Formula { num_vars, clauses })
    }

    /// Declares exactly as many variables as the largest index used.
    pub fn from_clauses(clauses: Vec<Clause>) -> Formula {
        let num_vars = clauses.iter().map(Clause::max_var).max().unwrap_or(0);
        Formula { num_vars, clauses }
    }

    /// Test and example helper: DIMACS integer rows with the declared count.
    /// Panics when a row is invalid.
    pub fn from_dimacs_rows(num_vars: u32, rows: &[&[i64]]) -> Formula {
        Formula::new(num_vars, rows.iter().map(|r| Clause::from_dimacs(r)).collect())
            .expect("rows respect the declared variable count")
    }

    pub fn num_vars(&self) -> u32 {
        self.num_vars
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    pub fn num_clauses(&self) -> usize {
        self.clauses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clauses.is_empty()
    }

    pub fn literals(&self) -> impl Iterator<Item = Literal> + '_ {
        self.clauses.iter().flat_map(|c| c.literals().iter().copied())
    }

    pub fn max_var(&self) -> u32 {
        self.clauses.iter().map(Clause::max_var).max().unwrap_or(0)
    }

    pub fn max_width(&self) -> usize {
        self.clauses.iter().map(Clause::len).max().unwrap_or(0)
    }

    /// Occurrence counts (positive plus negative), indexed by `var - 1`,
    /// over the declared variables.
    pub fn occurrences(&self) -> Vec<usize> {
        let mut counts = vec![0; self.num_vars as usize];
        for lit in self.literals() {
            counts[lit.var() as usize - 1] += 1;
        }
        counts
    }

    pub fn max_occurrence(&self) -> usize {
        self.occurrences().into_iter().max().unwrap_or(0)
    }

    /// Variables that occur at least once, ascending.
    pub fn occurring_vars(&self) -> BTreeSet<u32> {
        self.literals().map(Literal::var).collect()
    }

    /// Truth value under a total assignment, `values[var - 1]`.
    pub fn eval(&self, values: &[bool]) -> bool {
        self.clauses.iter().all(|c| c.eval(values))
    }

    /// Same clauses with a larger (or equal) declared count.
    pub fn with_num_vars(&self, num_vars: u32) -> Result<Formula, FormulaError> {
        Formula::new(num_vars, self.clauses.clone())
    }

    pub(crate) fn from_parts_unchecked(num_vars: u32, clauses: Vec<Clause>) -> Formula {
        debug_assert!(clauses.iter().all(|c| c.max_var() <= num_vars));
        Formula { num_vars, clauses }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.clauses.is_empty() {
            return f.write_str("⊤");
        }
        for (i, clause) in self.clauses.iter().enumerate() {
            if i > 0 {
                f.write_str(" ∧ ")?;
            }
            write!(f, "{clause}")?;
        }
        Ok(())
    }
}

/// Order-preserving relabeling of occurring variables onto `1..=n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VarMap {
    pairs: Vec<(u32, u32)>,
}

impl VarMap {
    /// `(old, new)` pairs in ascending order of `old`.
    pub fn pairs(&self) -> &[(u32, u32)] {
        &self.pairs
    }

    pub fn is_identity(&self) -> bool {
        self.pairs.iter().all(|(old, new)| old == new)
    }

    pub fn get(&self, old: u32) -> Option<u32> {
        self.pairs
            .binary_search_by_key(&old, |&(o, _)| o)
            .ok()
            .map(|i| self.pairs[i].1)
    }
}

/// Relabels the occurring variables `i_1 < ... < i_n` to `1..=n`.
///
/// The output declares exactly `n` variables. When the input already uses
/// `1..=n` contiguously the map is the identity and the clauses are
/// unchanged.
pub fn compact_variables(f: &Formula) -> (Formula, VarMap) {
    let pairs: Vec<(u32, u32)> =
        f.occurring_vars().into_iter().zip(1..).collect();
    let lookup: HashMap<u32, u32> = pairs.iter().copied().collect();
    let clauses = f
        .clauses()
        .iter()
        .map(|c| c.map_literals(|l| Literal::new(lookup[&l.var()], l.sign())))
        .collect();
    let n = pairs.len() as u32;
    (Formula::from_parts_unchecked(n, clauses), VarMap { pairs })
}

/// Result of [`inspect_normal`]. Positions are 1-based clause indices.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct NormalReport {
    pub tautological_clause_positions: Vec<usize>,
    pub duplicate_clause_positions: Vec<usize>,
    pub non_full_clause_positions: Vec<usize>,
    pub is_normal: bool,
}

/// Checks the three normal-expression conditions for clause width `k`.
///
/// A clause is a duplicate when it equals an earlier clause as a literal
/// multiset; the later position is reported. A clause is non-full when it
/// has fewer than `k` distinct variables.
pub fn inspect_normal(f: &Formula, k: usize) -> NormalReport {
    assert!(k >= 1, "clause width must be positive");
    let mut report = NormalReport::default();
    let mut seen = std::collections::HashSet::new();
    for (i, clause) in f.clauses().iter().enumerate() {
        let pos = i + 1;
        if clause.is_tautological() {
            report.tautological_clause_positions.push(pos);
        }
        if !seen.insert(clause.multiset_key()) {
            report.duplicate_clause_positions.push(pos);
        }
        if clause.distinct_vars() < k {
            report.non_full_clause_positions.push(pos);
        }
    }
    report.is_normal = report.tautological_clause_positions.is_empty()
        && report.duplicate_clause_positions.is_empty()
        && report.non_full_clause_positions.is_empty();
    report
}

/// Normal, and every clause has exactly three literals.
pub fn is_3sat_normal(f: &Formula) -> bool {
    f.clauses().iter().all(|c| c.len() == 3) && inspect_normal(f, 3).is_normal
}
