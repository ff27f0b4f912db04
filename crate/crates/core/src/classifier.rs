//! Occurrence classification of normal 3-CNF formulas.

use std::fmt;

use thiserror::Error;

use crate::assignments::{check_bound, EvalError, GeneralizedAssignment, Trace, TraceBuilder, TraceStep};
use crate::formula::{inspect_normal, Formula};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ClassKind {
    /// Every variable occurs at most three times; always satisfiable.
    Easy,
    /// Maximum occurrence exactly four.
    Hard4,
    /// Some variable occurs more than four times.
    OverBudget,
}

impl ClassKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ClassKind::Easy => "Easy",
            ClassKind::Hard4 => "Hard4",
            ClassKind::OverBudget => "OverBudget",
        }
    }
}

/// `kind` is determined by `s`, the maximum occurrence count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ClassLabel {
    pub kind: ClassKind,
    pub s: usize,
}

impl ClassLabel {
    pub fn from_max_occurrence(s: usize) -> ClassLabel {
        let kind = match s {
            0..=3 => ClassKind::Easy,
            4 => ClassKind::Hard4,
            _ => ClassKind::OverBudget,
        };
        ClassLabel { kind, s }
    }

    /// `Some(true)` for the easy classes, `None` otherwise.
    pub fn known_satisfiable(&self) -> Option<bool> {
        (self.kind == ClassKind::Easy).then_some(true)
    }
}

impl fmt::Display for ClassLabel {
    /// `CLASS kind=<kind> s=<s> satisfiable=<yes|unknown>`
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sat = if self.known_satisfiable().is_some() { "yes" } else { "unknown" };
        write!(f, "CLASS kind={} s={} satisfiable={}", self.kind.as_str(), self.s, sat)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassifyError {
    #[error("clause {position} has {width} literals; width 3 is required")]
    NotWidthThree { position: usize, width: usize },
    #[error("input is not normal (tautological, repeated or non-full clauses)")]
    NotNormal,
}

/// Counts occurrences of each variable `1..=n` with a counter that is reset
/// per variable, returning false as soon as a count exceeds three.
///
/// Per variable `i`: `SetC`, then for each literal position either
/// `Probe(i, var)` or `Decide(i, value), IncC, CheckC`.
pub fn algorithm2(f: &Formula, a: &GeneralizedAssignment, n: u32) -> Result<(bool, Trace), EvalError> {
    check_bound(f, n)?;
    let mut trace = TraceBuilder::default();
    for i in 1..=n {
        trace.push(TraceStep::SetC);
        let mut c = 0usize;
        for lit in f.literals() {
            if lit.var() != i {
                trace.probe(i, lit.var());
                continue;
            }
            trace.decide(i, a.eval_literal(lit));
            c += 1;
            trace.push(TraceStep::IncC);
            trace.push(TraceStep::CheckC);
            if c > 3 {
                let value = trace.ret(false);
                return Ok((value, trace.finish()));
            }
        }
    }
    let value = trace.ret(true);
    Ok((value, trace.finish()))
}

pub fn classify(f: &Formula) -> Result<ClassLabel, ClassifyError> {
    if let Some((i, c)) = f.clauses().iter().enumerate().find(|(_, c)| c.len() != 3) {
        return Err(ClassifyError::NotWidthThree { position: i + 1, width: c.len() });
    }
    if !inspect_normal(f, 3).is_normal {
        return Err(ClassifyError::NotNormal);
    }
    Ok(ClassLabel::from_max_occurrence(f.max_occurrence()))
}
