#![allow(dead_code)]

use sat3n::assignments::{GeneralizedAssignment, TraceStep};
use sat3n::formula::{Formula, Sign};

/// Backtracking search with unit propagation. Exact, and usable beyond the
/// exhaustive oracle's variable cap.
pub fn dpll(f: &Formula) -> Option<Vec<bool>> {
    let clauses: Vec<Vec<i64>> = f
        .clauses()
        .iter()
        .map(|c| c.literals().iter().map(|l| l.to_dimacs()).collect())
        .collect();
    let mut values = vec![0i8; f.num_vars() as usize + 1];
    if search(&clauses, &mut values) {
        Some(values[1..].iter().map(|&v| v > 0).collect())
    } else {
        None
    }
}

fn lit_value(values: &[i8], lit: i64) -> i8 {
    let v = values[lit.unsigned_abs() as usize];
    if lit > 0 {
        v
    } else {
        -v
    }
}

fn assign(values: &mut [i8], trail: &mut Vec<usize>, lit: i64) {
    let var = lit.unsigned_abs() as usize;
    values[var] = if lit > 0 { 1 } else { -1 };
    trail.push(var);
}

/// Propagates units to a fixpoint. Returns false on conflict.
fn propagate(clauses: &[Vec<i64>], values: &mut [i8], trail: &mut Vec<usize>) -> bool {
    loop {
        let mut changed = false;
        for c in clauses {
            let mut unassigned = None;
            let mut open = 0;
            let mut satisfied = false;
            for &l in c {
                match lit_value(values, l) {
                    1 => {
                        satisfied = true;
                        break;
                    }
                    0 => {
                        open += 1;
                        unassigned = Some(l);
                    }
                    _ => {}
                }
            }
            if satisfied {
                continue;
            }
            match open {
                0 => return false,
                1 => {
                    assign(values, trail, unassigned.unwrap());
                    changed = true;
                }
                _ => {}
            }
        }
        if !changed {
            return true;
        }
    }
}

fn search(clauses: &[Vec<i64>], values: &mut Vec<i8>) -> bool {
    let mut trail = Vec::new();
    if !propagate(clauses, values, &mut trail) {
        undo(values, &trail);
        return false;
    }
    // Branch on a literal of the shortest open clause.
    let mut best: Option<(usize, i64)> = None;
    for c in clauses {
        if c.iter().any(|&l| lit_value(values, l) == 1) {
            continue;
        }
        let open: Vec<i64> = c.iter().copied().filter(|&l| lit_value(values, l) == 0).collect();
        if best.is_none_or(|(n, _)| open.len() < n) {
            best = Some((open.len(), open[0]));
        }
    }
    let Some((_, lit)) = best else {
        for v in values.iter_mut().skip(1) {
            if *v == 0 {
                *v = -1;
            }
        }
        return true;
    };
    for choice in [lit, -lit] {
        let mut local = Vec::new();
        assign(values, &mut local, choice);
        if search(clauses, values) {
            return true;
        }
        undo(values, &local);
    }
    undo(values, &trail);
    false
}

fn undo(values: &mut [i8], trail: &[usize]) {
    for &v in trail {
        values[v] = 0;
    }
}

/// The evaluation loop written out step by step in `e_i(x_j)` / `e_i(¬x_j)`
/// notation, independently of the library's trace builder.
pub fn alg1_steps_in_notation(a: &GeneralizedAssignment, f: &Formula) -> Vec<String> {
    let mut out = Vec::new();
    for clause in f.clauses() {
        let lits = clause.literals();
        let mut clause_true = false;
        for lit in lits {
            let text = if lit.sign().is_pos() { format!("x_{}", lit.var()) } else { format!("¬x_{}", lit.var()) };
            for p in 1..=lit.var() {
                out.push(format!("e_{p}({text})"));
            }
            if a.sign(lit.var()) == lit.sign() {
                clause_true = true;
                break;
            }
        }
        if !clause_true {
            out.push("returning false".to_string());
            return out;
        }
    }
    out.push("returning true".to_string());
    out
}

/// Converts a step written in notation to the canonical encoding, using
/// `a` for the value of `e_i` on a literal of its own variable.
pub fn canonical_step(text: &str, a: &GeneralizedAssignment) -> TraceStep {
    let t = text.trim();
    match t {
        "c = 0" => return TraceStep::SetC,
        "increasing c by 1" => return TraceStep::IncC,
        "checking if c > 3" => return TraceStep::CheckC,
        "returning true" => return TraceStep::ReturnTrue,
        "returning false" => return TraceStep::ReturnFalse,
        _ => {}
    }
    let body = t.strip_prefix("e_").unwrap_or_else(|| panic!("unrecognized step {t}"));
    let (i, rest) = body.split_once('(').expect("e_i(...)");
    let i: u32 = i.parse().expect("assignment index");
    let lit = rest.strip_suffix(')').expect("closing paren");
    let (positive, j) = match lit.strip_prefix('¬') {
        Some(v) => (false, v),
        None => (true, lit),
    };
    let j: u32 = j.strip_prefix("x_").expect("x_j").parse().expect("variable index");
    if i == j {
        let value = a.sign(i).is_pos() == positive;
        TraceStep::Decide { var: i, value }
    } else {
        TraceStep::Probe { assign: i, var: j }
    }
}

pub fn canonical_steps(texts: &[&str], a: &GeneralizedAssignment) -> Vec<TraceStep> {
    texts.iter().map(|t| canonical_step(t, a)).collect()
}

/// The evaluation of `η1 = (¬x1 ∨ ¬x2 ∨ ¬x3) ∧ (¬x1 ∨ x2 ∨ x3)` under
/// `x1* ¬x2* ¬x3* x4*`, as transcribed in the source text.
pub const ETA1_EVALUATION_STEPS: &[&str] = &[
    "e_1(¬x_1)",
    "e_1(¬x_2)",
    "e_2(¬x_2)",
    "e_1(¬x_1)",
    "e_1(x_2)",
    "e_2(x_2)",
    "e_2(x_3)",
    "e_3(x_3)",
    "returning false",
];

/// The occurrence check of `η1` with loop bound 4, as transcribed in the
/// source text.
pub const ETA1_OCCURRENCE_STEPS: &[&str] = &[
    "c = 0",
    "e_1(¬x_1)",
    "increasing c by 1",
    "checking if c > 3",
    "e_1(¬x_2)",
    "e_1(¬x_3)",
    "e_1(¬x_1)",
    "increasing c by 1",
    "checking if c > 3",
    "e_1(x_2)",
    "e_1(x_3)",
    "c = 0",
    "e_2(¬x_1)",
    "e_2(¬x_2)",
    "increasing c by 1",
    "checking if c > 3",
    "e_2(¬x_3)",
    "e_2(¬x_1)",
    "e_2(x_2)",
    "increasing c by 1",
    "checking if c > 3",
    "e_2(x_3)",
    "c = 0",
    "e_3(¬x_1)",
    "e_3(¬x_2)",
    "e_3(¬x_3)",
    "increasing c by 1",
    "checking if c > 3",
    "e_3(¬x_1)",
    "e_3(x_2)",
    "e_3(x_3)",
    "increasing c by 1",
    "checking if c > 3",
    "c = 0",
    "e_4(¬x_1)",
    "e_4(¬x_2)",
    "e_4(¬x_3)",
    "e_4(¬x_1)",
    "e_4(x_2)",
    "e_4(x_3)",
    "returning true",
];

pub fn eta1() -> Formula {
    Formula::from_dimacs_rows(3, &[&[-1, -2, -3], &[-1, 2, 3]])
}

pub fn eta2() -> Formula {
    Formula::from_dimacs_rows(3, &[&[1, 3], &[-1, -3]])
}

/// `x1* ¬x2* ¬x3* x4*`, negative beyond.
pub fn example_assignment() -> GeneralizedAssignment {
    GeneralizedAssignment::negative_extension(vec![Sign::Pos, Sign::Neg, Sign::Neg, Sign::Pos])
}

pub fn all_values(n: u32) -> impl Iterator<Item = Vec<bool>> {
    (0..1u64 << n).map(move |k| (0..n).map(|i| (k >> i) & 1 == 1).collect())
}
