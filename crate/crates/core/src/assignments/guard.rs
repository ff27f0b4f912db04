use thiserror::Error;

use super::eval::{eval_aggressive, EvalError};
use super::GeneralizedAssignment;
use crate::formula::Formula;
use crate::solvers::SolveError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecideError {
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Oracle(#[from] SolveError),
    #[error("input declares {0} variables; at least 3 are required")]
    TooFewVariables(u32),
}

/// A total decision procedure on normal 3-CNF formulas.
pub trait Decider {
    fn decide(&self, f: &Formula) -> Result<bool, DecideError>;
}

impl<D: Decider + ?Sized> Decider for &D {
    fn decide(&self, f: &Formula) -> Result<bool, DecideError> {
        (**self).decide(f)
    }
}

impl<D: Decider + ?Sized> Decider for Box<D> {
    fn decide(&self, f: &Formula) -> Result<bool, DecideError> {
        (**self).decide(f)
    }
}

/// A closure as a decision procedure.
#[derive(Debug, Clone, Copy)]
pub struct FromFn<F>(pub F);

pub fn from_fn<F>(f: F) -> FromFn<F>
where
    F: Fn(&Formula) -> Result<bool, DecideError>,
{
    FromFn(f)
}

impl<F> Decider for FromFn<F>
where
    F: Fn(&Formula) -> Result<bool, DecideError>,
{
    fn decide(&self, f: &Formula) -> Result<bool, DecideError> {
        (self.0)(f)
    }
}

/// `f a`: answers true when the aggressive evaluation of `a` is true,
/// otherwise defers to `base`.
///
/// The loop bound of the aggressive evaluation is the input's declared
/// variable count. Nesting builds right-to-left chains:
/// `guard(guard(f, a), b)` runs `b` first, then `a`, then `f`.
#[derive(Debug, Clone)]
pub struct Guarded<D> {
    base: D,
    layer: GeneralizedAssignment,
}

pub fn guard<D: Decider>(base: D, layer: GeneralizedAssignment) -> Guarded<D> {
    Guarded { base, layer }
}

impl<D> Guarded<D> {
    pub fn base(&self) -> &D {
        &self.base
    }

    pub fn layer(&self) -> &GeneralizedAssignment {
        &self.layer
    }
}

impl<D: Decider> Decider for Guarded<D> {
    fn decide(&self, f: &Formula) -> Result<bool, DecideError> {
        let n = f.num_vars().max(1);
        if eval_aggressive(&self.layer, f, n)?.0 {
            return Ok(true);
        }
        self.base.decide(f)
    }
}

/// `f φ` for an algorithm `φ`: the result is φ's answer alone, `base` is
/// never consulted.
#[derive(Debug, Clone)]
pub struct Absorbed<D, A> {
    base: D,
    algorithm: A,
}

pub fn absorb<D, A: Decider>(base: D, algorithm: A) -> Absorbed<D, A> {
    Absorbed { base, algorithm }
}

impl<D, A> Absorbed<D, A> {
    pub fn base(&self) -> &D {
        &self.base
    }
}

impl<D, A: Decider> Decider for Absorbed<D, A> {
    fn decide(&self, f: &Formula) -> Result<bool, DecideError> {
        self.algorithm.decide(f)
    }
}
