//! Occurrence reduction from normal 3-CNF to normal (3,4)-CNF.
//!
//! A variable `v` with `k > 4` occurrences is split into `k` fresh copies,
//! one per occurrence, tied together by a cycle of link clauses
//! `(x_i ∨ ¬x_{i+1} ∨ ¬y_i)`. Each link variable `y_i` is forced true by its
//! own nine-clause unit gadget. The copies occur three times, `y_i` four
//! times, and the gadget variables at most four times, so a split never
//! creates a new offender.

use std::fmt;

use thiserror::Error;

use crate::formula::{inspect_normal, Clause, Formula, Literal};
use crate::normalizer::{unit_gadget, FreshVarAllocator};

/// Occurrence bound of the target class.
pub const MAX_OCCURRENCES: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReduceError {
    #[error("variable {var} occurs {count} times; splitting needs more than {MAX_OCCURRENCES}")]
    NotOverBudget { var: u32, count: usize },
    #[error("input is not a normal 3-CNF formula")]
    NotNormal,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitRecord {
    pub split_var: u32,
    pub occurrences: usize,
    pub replacement_vars: Vec<u32>,
    pub link_vars: Vec<u32>,
    pub added_clauses: usize,
}

impl fmt::Display for SplitRecord {
    /// `SPLIT var=<v> k=<k> reps=<list> links=<list>`
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[u32]| v.iter().map(u32::to_string).collect::<Vec<_>>().join(",");
        write!(
            f,
            "SPLIT var={} k={} reps={} links={}",
            self.split_var,
            self.occurrences,
            join(&self.replacement_vars),
            join(&self.link_vars)
        )
    }
}

pub fn format_split_certificate(records: &[SplitRecord]) -> String {
    records.iter().map(|r| format!("{r}\n")).collect()
}

/// Lowest-indexed variable with more than four occurrences.
pub fn needs_reduction(f: &Formula) -> Option<u32> {
    f.occurrences()
        .iter()
        .position(|&c| c > MAX_OCCURRENCES)
        .map(|i| i as u32 + 1)
}

/// Replaces each occurrence of `v` by its own fresh copy, preserving
/// polarity, and appends the link cycle and its forcing gadgets.
///
/// Occurrences are numbered in clause order, then literal order. Fresh
/// indices are drawn as: the `k` copies, then the `k` link variables, then
/// six gadget variables per link. Appended clauses are the `k` link clauses
/// followed by the `k` gadgets in link order.
pub fn split_variable(
    f: &Formula,
    v: u32,
    alloc: &mut FreshVarAllocator,
) -> Result<(Formula, SplitRecord), ReduceError> {
    let k = f.literals().filter(|l| l.var() == v).count();
    if k <= MAX_OCCURRENCES {
        return Err(ReduceError::NotOverBudget { var: v, count: k });
    }
    let reps: Vec<u32> = (0..k).map(|_| alloc.fresh()).collect();
    let links: Vec<u32> = (0..k).map(|_| alloc.fresh()).collect();

    let mut next = 0;
    let mut clauses: Vec<Clause> = f
        .clauses()
        .iter()
        .map(|c| {
            c.map_literals(|l| {
                if l.var() == v {
                    let rep = Literal::new(reps[next], l.sign());
                    next += 1;
                    rep
                } else {
                    l
                }
            })
        })
        .collect();

    for i in 0..k {
        let succ = (i + 1) % k;
        clauses.push(Clause::new(vec![
            Literal::pos(reps[i]),
            Literal::neg(reps[succ]),
            Literal::neg(links[i]),
        ]));
    }
    for &y in &links {
        let (gadget, _) = unit_gadget(Literal::pos(y), alloc);
        clauses.extend(gadget);
    }

    let record = SplitRecord {
        split_var: v,
        occurrences: k,
        replacement_vars: reps,
        link_vars: links,
        added_clauses: 10 * k,
    };
    Ok((Formula::from_parts_unchecked(alloc.high_water(), clauses), record))
}

/// Splits offenders, lowest index first, until every variable occurs at most
/// four times. The input must be normal 3-CNF.
pub fn reduce_to_34(f: &Formula) -> Result<(Formula, Vec<SplitRecord>), ReduceError> {
    if f.clauses().iter().any(|c| c.len() != 3) || !inspect_normal(f, 3).is_normal {
        return Err(ReduceError::NotNormal);
    }
    let mut alloc = FreshVarAllocator::after(f);
    let mut current = f.clone();
    let mut records = Vec::new();
    while let Some(v) = needs_reduction(&current) {
        let (next, record) = split_variable(&current, v, &mut alloc)?;
        current = next;
        records.push(record);
    }
    Ok((current, records))
}
