//! Ground-truth satisfiability: an exhaustive oracle and a linear-time 2SAT
//! procedure.

use std::fmt;

use thiserror::Error;

use crate::assignments::{eval_alg1, DecideError, Decider, GeneralizedAssignment};
use crate::formula::{Formula, Literal};

/// Largest declared variable count the exhaustive oracle accepts.
pub const BRUTE_FORCE_CAP: u32 = 25;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("formula declares {vars} variables; the exhaustive oracle accepts at most {cap}")]
    TooManyVariables { vars: u32, cap: u32 },
    #[error("clause {position} has {width} literals; 2SAT accepts at most 2")]
    ClauseTooWide { position: usize, width: usize },
}

/// `witness[i]` is the value of variable `i+1`; present iff satisfiable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub satisfiable: bool,
    pub witness: Option<Vec<bool>>,
}

impl Verdict {
    pub fn sat(witness: Vec<bool>) -> Verdict {
        Verdict { satisfiable: true, witness: Some(witness) }
    }

    pub fn unsat() -> Verdict {
        Verdict { satisfiable: false, witness: None }
    }
}

impl fmt::Display for Verdict {
    /// `SAT 1 -2 ...` or `UNSAT`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.witness {
            None => f.write_str("UNSAT"),
            Some(w) => {
                f.write_str("SAT")?;
                for (i, &v) in w.iter().enumerate() {
                    write!(f, " {}{}", if v { "" } else { "-" }, i + 1)?;
                }
                Ok(())
            }
        }
    }
}

/// Lane patterns for the six least significant variables of a 64-lane
/// block: lane `j` has bit `p` of `j` at position `p`.
const LANE_PATTERNS: [u64; 6] = [
    0xAAAA_AAAA_AAAA_AAAA,
    0xCCCC_CCCC_CCCC_CCCC,
    0xF0F0_F0F0_F0F0_F0F0,
    0xFF00_FF00_FF00_FF00,
    0xFFFF_0000_FFFF_0000,
    0xFFFF_FFFF_0000_0000,
];

/// Enumerates all assignments in lexicographic order (x1 most significant,
/// false before true) and returns the first model.
///
/// Assignments are evaluated 64 at a time, one per bit lane; index `k` in
/// the enumeration sets `x_v` to bit `n-v` of `k`.
pub fn brute_force_sat(f: &Formula) -> Result<Verdict, SolveError> {
    let n = f.num_vars();
    if n > BRUTE_FORCE_CAP {
        return Err(SolveError::TooManyVariables { vars: n, cap: BRUTE_FORCE_CAP });
    }
    let total: u64 = 1 << n;
    let lanes = total.min(64);
    let valid = if lanes == 64 { u64::MAX } else { (1u64 << lanes) - 1 };
    let clauses: Vec<Vec<(u32, bool)>> = f
        .clauses()
        .iter()
        .map(|c| c.literals().iter().map(|l| (n - l.var(), l.sign().is_pos())).collect())
        .collect();

    let mut masks = vec![0u64; n as usize];
    for block in 0..total / lanes {
        for (p, mask) in masks.iter_mut().enumerate() {
            *mask = if p < 6 {
                LANE_PATTERNS[p]
            } else if (block >> (p - 6)) & 1 == 1 {
                u64::MAX
            } else {
                0
            };
        }
        let mut alive = valid;
        for clause in &clauses {
            let mut sat = 0u64;
            for &(p, positive) in clause {
                let m = masks[p as usize];
                sat |= if positive { m } else { !m };
            }
            alive &= sat;
            if alive == 0 {
                break;
            }
        }
        if alive != 0 {
            let k = block * lanes + u64::from(alive.trailing_zeros());
            let witness = (1..=n).map(|v| (k >> (n - v)) & 1 == 1).collect();
            return Ok(Verdict::sat(witness));
        }
    }
    Ok(Verdict::unsat())
}

/// The exhaustive oracle as a decision procedure.
#[derive(Debug, Clone, Copy, Default)]
pub struct BruteForce;

impl Decider for BruteForce {
    fn decide(&self, f: &Formula) -> Result<bool, DecideError> {
        Ok(brute_force_sat(f)?.satisfiable)
    }
}

fn node(lit: Literal) -> usize {
    2 * (lit.var() as usize - 1) + usize::from(!lit.sign().is_pos())
}

/// The 2n-node implication graph of a 2SAT instance with its strongly
/// connected components. Component ids are in reverse topological order:
/// every edge goes from a higher or equal id to a lower or equal id.
#[derive(Debug, Clone)]
pub struct ImplicationGraph {
    /// Successors of node `v` are `targets[offsets[v]..offsets[v + 1]]`.
    offsets: Vec<u32>,
    targets: Vec<u32>,
    components: Vec<u32>,
    component_count: u32,
}

impl ImplicationGraph {
    /// A unit clause `(l)` contributes the edge `¬l → l`.
    pub fn build(f: &Formula) -> Result<ImplicationGraph, SolveError> {
        let nodes = 2 * f.num_vars() as usize;
        let mut offsets = vec![0u32; nodes + 1];
        for (i, c) in f.clauses().iter().enumerate() {
            if c.len() > 2 {
                return Err(SolveError::ClauseTooWide { position: i + 1, width: c.len() });
            }
            for_each_edge(c.literals(), |from, _| offsets[from + 1] += 1);
        }
        for v in 0..nodes {
            offsets[v + 1] += offsets[v];
        }
        let mut fill = offsets.clone();
        let mut targets = vec![0u32; offsets[nodes] as usize];
        for c in f.clauses() {
            for_each_edge(c.literals(), |from, to| {
                targets[fill[from] as usize] = to as u32;
                fill[from] += 1;
            });
        }
        let (components, component_count) = strong_components(&offsets, &targets);
        Ok(ImplicationGraph { offsets, targets, components, component_count })
    }

    pub fn node_count(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn successors(&self, lit: Literal) -> impl Iterator<Item = u32> + '_ {
        let v = node(lit);
        self.targets[self.offsets[v] as usize..self.offsets[v + 1] as usize].iter().copied()
    }

    pub fn component(&self, lit: Literal) -> u32 {
        self.components[node(lit)]
    }

    pub fn component_count(&self) -> u32 {
        self.component_count
    }
}

/// Edges of a clause of width 1 or 2 as `(from, to)` node pairs.
fn for_each_edge(lits: &[Literal], mut edge: impl FnMut(usize, usize)) {
    match *lits {
        [a] => edge(node(a.negate()), node(a)),
        [a, b] => {
            edge(node(a.negate()), node(b));
            if a != b {
                edge(node(b.negate()), node(a));
            }
        }
        _ => {}
    }
}

/// Iterative single-array variant of Tarjan's algorithm. Components are
/// numbered in completion order.
///
/// `rindex[v]` is 0 before `v` is visited, its lowlink while `v` is open,
/// and `n - 1 - component` once its component is complete, which exceeds
/// every live lowlink.
fn strong_components(offsets: &[u32], targets: &[u32]) -> (Vec<u32>, u32) {
    let n = offsets.len() - 1;
    if n == 0 {
        return (Vec::new(), 0);
    }
    let top = n as u32 - 1;
    let mut rindex = vec![0u32; n];
    let mut index = 1u32;
    let mut next_label = top;
    let mut pending: Vec<u32> = Vec::new();
    // (node, next edge position in `targets`, node is still a root candidate)
    let mut call: Vec<(u32, u32, bool)> = Vec::new();

    for start in 0..n {
        if rindex[start] != 0 {
            continue;
        }
        rindex[start] = index;
        index += 1;
        call.push((start as u32, offsets[start], true));

        while let Some(frame) = call.last_mut() {
            let v = frame.0 as usize;
            if frame.1 < offsets[v + 1] {
                let w = targets[frame.1 as usize] as usize;
                frame.1 += 1;
                if rindex[w] == 0 {
                    rindex[w] = index;
                    index += 1;
                    call.push((w as u32, offsets[w], true));
                } else if rindex[w] < rindex[v] {
                    rindex[v] = rindex[w];
                    frame.2 = false;
                }
                continue;
            }
            let (_, _, is_root) = call.pop().expect("frame is present");
            if is_root {
                index -= 1;
                while let Some(&w) = pending.last() {
                    if rindex[v] > rindex[w as usize] {
                        break;
                    }
                    pending.pop();
                    rindex[w as usize] = next_label;
                    index -= 1;
                }
                rindex[v] = next_label;
                next_label = next_label.wrapping_sub(1);
            } else {
                pending.push(v as u32);
            }
            if let Some(parent) = call.last_mut() {
                let p = parent.0 as usize;
                if rindex[v] < rindex[p] {
                    rindex[p] = rindex[v];
                    parent.2 = false;
                }
            }
        }
    }
    let count = top.wrapping_sub(next_label);
    (rindex.into_iter().map(|r| top - r).collect(), count)
}

fn check_2sat_width(f: &Formula) -> Result<(), SolveError> {
    match f.clauses().iter().position(|c| c.len() > 2) {
        Some(i) => Err(SolveError::ClauseTooWide { position: i + 1, width: f.clauses()[i].len() }),
        None => Ok(()),
    }
}

/// Unsatisfiable iff some variable shares a component with its negation.
/// Otherwise `x` is true iff its component precedes `¬x`'s in completion
/// order.
pub fn solve_2sat(f: &Formula) -> Result<Verdict, SolveError> {
    let g = ImplicationGraph::build(f)?;
    let mut witness = Vec::with_capacity(f.num_vars() as usize);
    for v in 1..=f.num_vars() {
        let (pos, neg) = (g.component(Literal::pos(v)), g.component(Literal::neg(v)));
        if pos == neg {
            return Ok(Verdict::unsat());
        }
        witness.push(pos < neg);
    }
    Ok(Verdict::sat(witness))
}

/// Evaluates `a` on `f`; when that is false, decides `f` outright with the
/// 2SAT procedure. True exactly when `f` is satisfiable.
pub fn aggressive_2sat(a: &GeneralizedAssignment, f: &Formula, n: u32) -> Result<bool, DecideError> {
    check_2sat_width(f)?;
    if eval_alg1(a, f, n)?.0 {
        return Ok(true);
    }
    Ok(solve_2sat(f)?.satisfiable)
}
