use thiserror::Error;

use super::trace::{Trace, TraceBuilder, TraceStep};
use super::{AggressiveComposite, GeneralizedAssignment};
use crate::classifier::algorithm2;
use crate::formula::Formula;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("loop bound must be at least 1")]
    ZeroBound,
    #[error("formula uses variable {max_var}, beyond the loop bound {bound}")]
    BoundTooSmall { bound: u32, max_var: u32 },
}

pub(crate) fn check_bound(f: &Formula, n: u32) -> Result<(), EvalError> {
    if n == 0 {
        return Err(EvalError::ZeroBound);
    }
    let max_var = f.max_var();
    if max_var > n {
        return Err(EvalError::BoundTooSmall { bound: n, max_var });
    }
    Ok(())
}

/// Evaluates `f` under `a` literal by literal, recording every atomic
/// evaluation.
///
/// For each literal the inner loop tries `e_1, e_2, ...`: a foreign variable
/// gives `Probe(p, var)` and the literal's own variable gives
/// `Decide(var, value)`. A true literal closes its clause; a false last
/// literal returns false. The result equals ordinary CNF evaluation, and the
/// empty formula is true.
pub fn eval_alg1(a: &GeneralizedAssignment, f: &Formula, n: u32) -> Result<(bool, Trace), EvalError> {
    check_bound(f, n)?;
    let mut trace = TraceBuilder::default();
    'clauses: for clause in f.clauses() {
        for lit in clause.literals() {
            for p in 1..lit.var() {
                trace.probe(p, lit.var());
            }
            let value = a.eval_literal(*lit);
            trace.decide(lit.var(), value);
            if value {
                continue 'clauses;
            }
        }
        let value = trace.ret(false);
        return Ok((value, trace.finish()));
    }
    let value = trace.ret(true);
    Ok((value, trace.finish()))
}

/// Steps of one aggressive evaluation: the literal-by-literal run, then the
/// occurrence check when the first run returned false.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AggressiveTrace {
    pub evaluation: Trace,
    pub classification: Option<Trace>,
}

impl AggressiveTrace {
    pub fn steps(&self) -> impl Iterator<Item = &TraceStep> + '_ {
        self.evaluation
            .steps()
            .iter()
            .chain(self.classification.iter().flat_map(|t| t.steps().iter()))
    }

    pub fn to_text(&self) -> String {
        let mut out = self.evaluation.to_text();
        if let Some(c) = &self.classification {
            out.push_str(&c.to_text());
        }
        out
    }
}

/// Evaluates `a` on `f`; when that is false, reports whether every variable
/// in `1..=n` occurs at most three times.
///
/// Sound on normal 3-CNF input: a true result means `f` is satisfiable. On
/// other input the occurrence check proves nothing, so callers restrict the
/// domain.
pub fn eval_aggressive(
    a: &GeneralizedAssignment,
    f: &Formula,
    n: u32,
) -> Result<(bool, AggressiveTrace), EvalError> {
    let (value, evaluation) = eval_alg1(a, f, n)?;
    if value {
        return Ok((true, AggressiveTrace { evaluation, classification: None }));
    }
    let (easy, classification) = algorithm2(f, a, n)?;
    Ok((easy, AggressiveTrace { evaluation, classification: Some(classification) }))
}

/// Runs of the parts that executed, in execution order, tagged with the
/// 1-based part index.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CompositeTrace {
    pub runs: Vec<(usize, AggressiveTrace)>,
}

impl CompositeTrace {
    pub fn steps(&self) -> impl Iterator<Item = &TraceStep> + '_ {
        self.runs.iter().flat_map(|(_, t)| t.steps())
    }

    pub fn to_text(&self) -> String {
        self.runs.iter().map(|(_, t)| t.to_text()).collect()
    }
}

/// Evaluates `(a_1)(a_2)...(a_k)` right to left: `a_k` first, and each
/// earlier part only while every later part returned false.
pub fn eval_composition(
    c: &AggressiveComposite,
    f: &Formula,
    n: u32,
) -> Result<(bool, CompositeTrace), EvalError> {
    let mut runs = Vec::new();
    for (i, part) in c.parts().iter().enumerate().rev() {
        let (value, trace) = eval_aggressive(part, f, n)?;
        runs.push((i + 1, trace));
        if value {
            return Ok((true, CompositeTrace { runs }));
        }
    }
    Ok((false, CompositeTrace { runs }))
}
