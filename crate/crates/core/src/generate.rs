//! Seeded random instances and assignments for tests and batch runs.

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::assignments::{AggressiveComposite, GeneralizedAssignment};
use crate::formula::{Clause, Formula, Literal, Sign};

pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_sign<R: Rng>(rng: &mut R) -> Sign {
    Sign::from_bool(rng.gen())
}

/// Fresh variables the normalizer introduces for a clause over `distinct`
/// variables.
fn gadget_cost(distinct: usize) -> u32 {
    match distinct {
        1 => 6,
        2 => 3,
        _ => 0,
    }
}

/// Clauses of width 1 to 3 over `vars ≥ 3` variables with independently
/// drawn literals, so tautologies, repeated variables and repeated clauses
/// all occur.
///
/// The total gadget cost of the non-tautological clauses stays within
/// `fresh_budget`, which bounds the variable count after normalization by
/// `vars + fresh_budget`.
pub fn random_small_cnf<R: Rng>(rng: &mut R, vars: u32, clauses: usize, fresh_budget: u32) -> Formula {
    assert!(vars >= 3);
    let mut spent = 0;
    let mut out = Vec::with_capacity(clauses);
    while out.len() < clauses {
        let width = rng.gen_range(1..=3);
        let lits: Vec<Literal> = (0..width)
            .map(|_| Literal::new(rng.gen_range(1..=vars), random_sign(rng)))
            .collect();
        let clause = Clause::new(lits);
        let cost = if clause.is_tautological() { 0 } else { gadget_cost(clause.distinct_vars()) };
        if spent + cost <= fresh_budget {
            spent += cost;
            out.push(clause);
        }
    }
    Formula::from_parts_unchecked(vars, out)
}

/// Shape of a generated normal 3-CNF instance.
#[derive(Debug, Clone)]
pub struct NormalSpec {
    pub vars: u32,
    pub clauses: usize,
    /// No variable occurs more often.
    pub max_occurrence: usize,
    /// Some variable occurs exactly `max_occurrence` times.
    pub reach_max: bool,
    /// At least one clause is false under this assignment.
    pub falsified_by: Option<GeneralizedAssignment>,
}

impl NormalSpec {
    pub fn new(vars: u32, clauses: usize, max_occurrence: usize) -> NormalSpec {
        NormalSpec { vars, clauses, max_occurrence, reach_max: false, falsified_by: None }
    }

    pub fn reaching_max(mut self) -> NormalSpec {
        self.reach_max = true;
        self
    }

    pub fn falsified_by(mut self, a: GeneralizedAssignment) -> NormalSpec {
        self.falsified_by = Some(a);
        self
    }
}

struct NormalBuilder {
    counts: Vec<usize>,
    cap: usize,
    keys: HashSet<Vec<Literal>>,
    clauses: Vec<Clause>,
}

impl NormalBuilder {
    fn open_vars(&self, exclude: &[u32]) -> Vec<u32> {
        (1..=self.counts.len() as u32)
            .filter(|v| self.counts[*v as usize - 1] < self.cap && !exclude.contains(v))
            .collect()
    }

    fn try_push(&mut self, lits: Vec<Literal>) -> bool {
        let clause = Clause::new(lits);
        if !self.keys.insert(clause.multiset_key()) {
            return false;
        }
        for l in clause.literals() {
            self.counts[l.var() as usize - 1] += 1;
        }
        self.clauses.push(clause);
        true
    }

    /// Three distinct open variables including `forced`, if any.
    fn pick<R: Rng>(&self, rng: &mut R, forced: Option<u32>) -> Option<Vec<u32>> {
        let fixed: Vec<u32> = forced.into_iter().collect();
        let open = self.open_vars(&fixed);
        if open.len() + fixed.len() < 3 {
            return None;
        }
        let mut vars = fixed;
        vars.extend(open.choose_multiple(rng, 3 - vars.len()));
        Some(vars)
    }
}

/// A normal 3-CNF instance per `spec`, in random clause order. Generation
/// is best effort: fewer clauses are returned when the occurrence budget
/// runs out.
pub fn random_normal_3cnf<R: Rng>(rng: &mut R, spec: &NormalSpec) -> Formula {
    assert!(spec.vars >= 3 && spec.max_occurrence >= 1);
    let mut b = NormalBuilder {
        counts: vec![0; spec.vars as usize],
        cap: spec.max_occurrence,
        keys: HashSet::new(),
        clauses: Vec::new(),
    };
    const ATTEMPTS: usize = 200;

    if let Some(a) = &spec.falsified_by {
        if let Some(vars) = b.pick(rng, None) {
            b.try_push(vars.iter().map(|&v| Literal::new(v, a.sign(v).negate())).collect());
        }
    }
    if spec.reach_max {
        let target = rng.gen_range(1..=spec.vars);
        let mut attempts = 0;
        while b.counts[target as usize - 1] < spec.max_occurrence && attempts < ATTEMPTS {
            attempts += 1;
            if let Some(vars) = b.pick(rng, Some(target)) {
                b.try_push(vars.iter().map(|&v| Literal::new(v, random_sign(rng))).collect());
            }
        }
    }
    let mut attempts = 0;
    while b.clauses.len() < spec.clauses && attempts < ATTEMPTS * spec.clauses.max(1) {
        attempts += 1;
        match b.pick(rng, None) {
            Some(vars) => {
                b.try_push(vars.iter().map(|&v| Literal::new(v, random_sign(rng))).collect());
            }
            None => break,
        }
    }
    b.clauses.shuffle(rng);
    Formula::from_parts_unchecked(spec.vars, b.clauses)
}

/// Clauses of width 1 or 2 (mostly 2) with independently drawn literals.
pub fn random_2sat<R: Rng>(rng: &mut R, vars: u32, clauses: usize) -> Formula {
    assert!(vars >= 1);
    let out = (0..clauses)
        .map(|_| {
            let width = if rng.gen_bool(0.1) { 1 } else { 2 };
            Clause::new(
                (0..width)
                    .map(|_| Literal::new(rng.gen_range(1..=vars), random_sign(rng)))
                    .collect(),
            )
        })
        .collect();
    Formula::from_parts_unchecked(vars, out)
}

/// Random prefix of length `0..=max_prefix` and random tail word of length
/// `1..=max_period`.
pub fn random_assignment<R: Rng>(rng: &mut R, max_prefix: usize, max_period: usize) -> GeneralizedAssignment {
    let len = rng.gen_range(0..=max_prefix);
    let period = rng.gen_range(1..=max_period.max(1));
    let prefix = (0..len).map(|_| random_sign(rng)).collect();
    let tail = (0..period).map(|_| random_sign(rng)).collect();
    GeneralizedAssignment::new(prefix, tail)
}

/// Random prefix of length `0..=max_prefix`, negative tail.
pub fn random_negative_extension<R: Rng>(rng: &mut R, max_prefix: usize) -> GeneralizedAssignment {
    let len = rng.gen_range(0..=max_prefix);
    GeneralizedAssignment::negative_extension((0..len).map(|_| random_sign(rng)).collect())
}

pub fn random_composite<R: Rng>(
    rng: &mut R,
    parts: usize,
    max_prefix: usize,
    max_period: usize,
) -> AggressiveComposite {
    AggressiveComposite::new((0..parts).map(|_| random_assignment(rng, max_prefix, max_period)).collect())
}
