//! Reduction of width-≤3 CNF to normal 3-CNF.
//!
//! The pipeline removes tautological clauses, removes repeated clauses,
//! strips repeated variables inside clauses (then removes repeats again,
//! since stripping can make two clauses equal), and finally replaces every
//! unit or binary clause by a forcing gadget over fresh variables. Every
//! change is logged as a [`TransformRecord`].

use std::collections::HashSet;
use std::fmt;

use thiserror::Error;

use crate::formula::{inspect_normal, Clause, Formula, Literal};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NormalizeError {
    #[error("clause {position} has {width} literals; input must be 3SAT (width ≤ 3)")]
    TooWide { position: usize, width: usize },
    #[error("clause {position} is tautological; remove tautologies before stripping repeats")]
    Tautological { position: usize },
}

/// Hands out variable indices above everything seen so far.
#[derive(Debug, Clone)]
pub struct FreshVarAllocator {
    next: u32,
}

impl FreshVarAllocator {
    /// First index handed out is `f.num_vars() + 1`.
    pub fn after(f: &Formula) -> FreshVarAllocator {
        FreshVarAllocator { next: f.num_vars() + 1 }
    }

    pub fn starting_at(next: u32) -> FreshVarAllocator {
        assert!(next >= 1);
        FreshVarAllocator { next }
    }

    pub fn fresh(&mut self) -> u32 {
        let v = self.next;
        self.next += 1;
        v
    }

    /// Largest index issued so far (or the bound it started above).
    pub fn high_water(&self) -> u32 {
        self.next - 1
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TransformKind {
    TautologyRemoved,
    DuplicateRemoved,
    RepeatStripped,
    UnitExpanded,
    BinaryExpanded,
}

impl TransformKind {
    pub fn as_str(self) -> &'static str {
        match self {
            TransformKind::TautologyRemoved => "TautologyRemoved",
            TransformKind::DuplicateRemoved => "DuplicateRemoved",
            TransformKind::RepeatStripped => "RepeatStripped",
            TransformKind::UnitExpanded => "UnitExpanded",
            TransformKind::BinaryExpanded => "BinaryExpanded",
        }
    }
}

/// One certificate line. `clause_position` is 1-based within the formula the
/// step operated on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransformRecord {
    pub kind: TransformKind,
    pub clause_position: usize,
    pub introduced_vars: Vec<u32>,
    pub introduced_clauses: usize,
}

impl fmt::Display for TransformRecord {
    /// `KIND pos=<i> vars=<comma list> clauses=<k>`
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vars: Vec<String> = self.introduced_vars.iter().map(u32::to_string).collect();
        write!(
            f,
            "{} pos={} vars={} clauses={}",
            self.kind.as_str(),
            self.clause_position,
            vars.join(","),
            self.introduced_clauses
        )
    }
}

/// Renders records one per line.
pub fn format_certificate(records: &[TransformRecord]) -> String {
    records.iter().map(|r| format!("{r}\n")).collect()
}

fn record(kind: TransformKind, position: usize) -> TransformRecord {
    TransformRecord { kind, clause_position: position, introduced_vars: vec![], introduced_clauses: 0 }
}

pub fn remove_tautologies(f: &Formula) -> (Formula, Vec<TransformRecord>) {
    let mut kept = Vec::with_capacity(f.num_clauses());
    let mut records = Vec::new();
    for (i, clause) in f.clauses().iter().enumerate() {
        if clause.is_tautological() {
            records.push(record(TransformKind::TautologyRemoved, i + 1));
        } else {
            kept.push(clause.clone());
        }
    }
    (Formula::from_parts_unchecked(f.num_vars(), kept), records)
}

/// Keeps the first clause of every literal-multiset class.
pub fn dedup_clauses(f: &Formula) -> (Formula, Vec<TransformRecord>) {
    let mut seen = HashSet::new();
    let mut kept = Vec::with_capacity(f.num_clauses());
    let mut records = Vec::new();
    for (i, clause) in f.clauses().iter().enumerate() {
        if seen.insert(clause.multiset_key()) {
            kept.push(clause.clone());
        } else {
            records.push(record(TransformKind::DuplicateRemoved, i + 1));
        }
    }
    (Formula::from_parts_unchecked(f.num_vars(), kept), records)
}

/// Drops repeated literals inside each clause, keeping first occurrences.
pub fn strip_repeated_variables(
    f: &Formula,
) -> Result<(Formula, Vec<TransformRecord>), NormalizeError> {
    let mut out = Vec::with_capacity(f.num_clauses());
    let mut records = Vec::new();
    for (i, clause) in f.clauses().iter().enumerate() {
        if clause.is_tautological() {
            return Err(NormalizeError::Tautological { position: i + 1 });
        }
        let mut stripped: Vec<Literal> = Vec::with_capacity(clause.len());
        for &lit in clause.literals() {
            if !stripped.contains(&lit) {
                stripped.push(lit);
            }
        }
        if stripped.len() < clause.len() {
            records.push(record(TransformKind::RepeatStripped, i + 1));
        }
        out.push(Clause::new(stripped));
    }
    Ok((Formula::from_parts_unchecked(f.num_vars(), out), records))
}

fn clause3(a: Literal, b: Literal, c: Literal) -> Clause {
    Clause::new(vec![a, b, c])
}

/// Nine clauses over `x` and six fresh variables whose models all make `x`
/// true.
///
/// Fresh variables are drawn in the order `a1, b1, d1, a2, b2, d2`. The
/// clauses are, in order: `(x ∨ a_j ∨ b_j)` for `j = 1, 2`; then for each
/// `j` the three clauses `(d_j ∨ ¬a_j ∨ ¬b_j)`, `(d_j ∨ ¬a_j ∨ b_j)`,
/// `(d_j ∨ a_j ∨ ¬b_j)`; then `(¬d_1 ∨ ¬d_2 ∨ x)`.
///
/// Returns the clauses and the six fresh variables.
pub fn unit_gadget(x: Literal, alloc: &mut FreshVarAllocator) -> (Vec<Clause>, Vec<u32>) {
    let mut vars = Vec::with_capacity(6);
    let mut abd = [(0, 0, 0); 2];
    for slot in &mut abd {
        let (a, b, d) = (alloc.fresh(), alloc.fresh(), alloc.fresh());
        vars.extend([a, b, d]);
        *slot = (a, b, d);
    }
    let mut clauses = Vec::with_capacity(9);
    for &(a, b, _) in &abd {
        clauses.push(clause3(x, Literal::pos(a), Literal::pos(b)));
    }
    for &(a, b, d) in &abd {
        clauses.extend(and_gate(a, b, d));
    }
    clauses.push(clause3(Literal::neg(abd[0].2), Literal::neg(abd[1].2), x));
    (clauses, vars)
}

/// `d` is forced true whenever `a ∨ b` holds.
fn and_gate(a: u32, b: u32, d: u32) -> [Clause; 3] {
    let d = Literal::pos(d);
    [
        clause3(d, Literal::neg(a), Literal::neg(b)),
        clause3(d, Literal::neg(a), Literal::pos(b)),
        clause3(d, Literal::pos(a), Literal::neg(b)),
    ]
}

/// Five clauses over `x`, `y` and fresh `a, b, d` whose models all satisfy
/// `x ∨ y`: `(x ∨ y ∨ a)`, the three `d`-clauses over `a, b`, and
/// `(¬d ∨ x ∨ y)`.
///
/// `x` and `y` must be on distinct variables.
pub fn binary_gadget(
    x: Literal,
    y: Literal,
    alloc: &mut FreshVarAllocator,
) -> (Vec<Clause>, Vec<u32>) {
    assert_ne!(x.var(), y.var(), "binary gadget needs two distinct variables");
    let (a, b, d) = (alloc.fresh(), alloc.fresh(), alloc.fresh());
    let mut clauses = Vec::with_capacity(5);
    clauses.push(clause3(x, y, Literal::pos(a)));
    clauses.extend(and_gate(a, b, d));
    clauses.push(clause3(Literal::neg(d), x, y));
    (clauses, vec![a, b, d])
}

/// Output of [`normalize`].
#[derive(Debug, Clone)]
pub struct Normalized {
    pub formula: Formula,
    pub records: Vec<TransformRecord>,
}

/// Transforms a width-≤3 formula into an equisatisfiable normal 3-CNF.
///
/// Fresh variables start at `num_vars + 1`. Unit and binary clauses are
/// removed from their position and their gadget clauses are appended at the
/// end, in the order the short clauses appeared.
pub fn normalize(f: &Formula) -> Result<Normalized, NormalizeError> {
    if let Some((i, c)) = f.clauses().iter().enumerate().find(|(_, c)| c.len() > 3) {
        return Err(NormalizeError::TooWide { position: i + 1, width: c.len() });
    }
    let mut records = Vec::new();
    let (f1, r) = remove_tautologies(f);
    records.extend(r);
    let (f2, r) = dedup_clauses(&f1);
    records.extend(r);
    let (f3, r) = strip_repeated_variables(&f2)?;
    records.extend(r);
    let (f3, r) = dedup_clauses(&f3);
    records.extend(r);

    let mut alloc = FreshVarAllocator::after(&f3);
    let mut kept = Vec::with_capacity(f3.num_clauses());
    let mut appended = Vec::new();
    for (i, clause) in f3.clauses().iter().enumerate() {
        let lits = clause.literals();
        let (gadget, vars, kind) = match *lits {
            [x] => {
                let (g, v) = unit_gadget(x, &mut alloc);
                (g, v, TransformKind::UnitExpanded)
            }
            [x, y] => {
                let (g, v) = binary_gadget(x, y, &mut alloc);
                (g, v, TransformKind::BinaryExpanded)
            }
            _ => {
                kept.push(clause.clone());
                continue;
            }
        };
        records.push(TransformRecord {
            kind,
            clause_position: i + 1,
            introduced_vars: vars,
            introduced_clauses: gadget.len(),
        });
        appended.extend(gadget);
    }
    kept.extend(appended);
    let formula = Formula::from_parts_unchecked(alloc.high_water(), kept);
    debug_assert!(inspect_normal(&formula, 3).is_normal);
    Ok(Normalized { formula, records })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::is_3sat_normal;

    fn rows(n: u32, r: &[&[i64]]) -> Formula {
        Formula::from_dimacs_rows(n, r)
    }

    fn eta1() -> Formula {
        rows(3, &[&[-1, -2, -3], &[-1, 2, 3]])
    }

    #[test]
    fn tautology_removal() {
        let (g, recs) = remove_tautologies(&rows(3, &[&[1, -1, 2], &[1, 2, 3]]));
        assert_eq!(g, rows(3, &[&[1, 2, 3]]));
        assert_eq!(recs, vec![record(TransformKind::TautologyRemoved, 1)]);
        assert_eq!(remove_tautologies(&eta1()).0, eta1());
        let (g, recs) = remove_tautologies(&rows(2, &[&[1, -1], &[2, -2, 1]]));
        assert!(g.is_empty());
        assert_eq!(recs.len(), 2);
    }

    #[test]
    fn dedup_keeps_first() {
        assert_eq!(dedup_clauses(&rows(3, &[&[1, 2, 3], &[1, 2, 3]])).0, rows(3, &[&[1, 2, 3]]));
        let (g, recs) = dedup_clauses(&rows(3, &[&[1, 2, 3], &[2, 1, 3], &[3, 2, 1]]));
        assert_eq!(g, rows(3, &[&[1, 2, 3]]));
        assert_eq!(recs.iter().map(|r| r.clause_position).collect::<Vec<_>>(), vec![2, 3]);
        assert!(dedup_clauses(&eta1()).1.is_empty());
    }

    #[test]
    fn strip_repeats() {
        assert_eq!(strip_repeated_variables(&rows(2, &[&[1, 1, 2]])).unwrap().0, rows(2, &[&[1, 2]]));
        assert_eq!(strip_repeated_variables(&rows(1, &[&[1, 1, 1]])).unwrap().0, rows(1, &[&[1]]));
        assert!(strip_repeated_variables(&eta1()).unwrap().1.is_empty());
        assert_eq!(
            strip_repeated_variables(&rows(2, &[&[1, -1, 2]])).unwrap_err(),
            NormalizeError::Tautological { position: 1 }
        );
    }

    #[test]
    fn unit_gadget_layout() {
        let mut alloc = FreshVarAllocator::starting_at(2);
        let (clauses, vars) = unit_gadget(Literal::pos(1), &mut alloc);
        assert_eq!(vars, vec![2, 3, 4, 5, 6, 7]);
        let expected: Vec<Clause> = [
            [1, 2, 3],
            [1, 5, 6],
            [4, -2, -3],
            [4, -2, 3],
            [4, 2, -3],
            [7, -5, -6],
            [7, -5, 6],
            [7, 5, -6],
            [-4, -7, 1],
        ]
        .iter()
        .map(|r| Clause::from_dimacs(r))
        .collect();
        assert_eq!(clauses, expected);
    }

    #[test]
    fn binary_gadget_layout() {
        let mut alloc = FreshVarAllocator::starting_at(3);
        let (clauses, vars) = binary_gadget(Literal::pos(1), Literal::pos(2), &mut alloc);
        assert_eq!(vars, vec![3, 4, 5]);
        let expected: Vec<Clause> = [[1, 2, 3], [5, -3, -4], [5, -3, 4], [5, 3, -4], [-5, 1, 2]]
            .iter()
            .map(|r| Clause::from_dimacs(r))
            .collect();
        assert_eq!(clauses, expected);
    }

    #[test]
    fn normalize_expands_unit_clause() {
        let f = rows(3, &[&[1], &[1, 2, 3]]);
        let out = normalize(&f).unwrap();
        assert_eq!(out.formula.num_clauses(), 10);
        assert_eq!(out.formula.clauses()[0], Clause::from_dimacs(&[1, 2, 3]));
        assert_eq!(out.formula.num_vars(), 9);
        assert!(is_3sat_normal(&out.formula));
        assert_eq!(out.records.len(), 1);
        assert_eq!(out.records[0].to_string(), "UnitExpanded pos=1 vars=4,5,6,7,8,9 clauses=9");
    }

    #[test]
    fn normalize_fixed_point_on_eta1() {
        let out = normalize(&eta1()).unwrap();
        assert_eq!(out.formula, eta1());
        assert!(out.records.is_empty());
    }

    #[test]
    fn strip_then_dedup_interaction() {
        // (x1 ∨ x1 ∨ x2) and (x1 ∨ x2 ∨ x2) both collapse to (x1 ∨ x2)
        let out = normalize(&rows(3, &[&[1, 1, 2], &[1, 2, 2], &[1, 2, 3]])).unwrap();
        let kinds: Vec<_> = out.records.iter().map(|r| r.kind).collect();
        assert_eq!(
            kinds,
            vec![
                TransformKind::RepeatStripped,
                TransformKind::RepeatStripped,
                TransformKind::DuplicateRemoved,
                TransformKind::BinaryExpanded
            ]
        );
        assert_eq!(out.formula.num_clauses(), 1 + 5);
        assert!(is_3sat_normal(&out.formula));
    }

    #[test]
    fn normalize_rejects_wide_clause() {
        let err = normalize(&rows(4, &[&[1, 2, 3, 4]])).unwrap_err();
        assert_eq!(err, NormalizeError::TooWide { position: 1, width: 4 });
    }

    #[test]
    fn empty_formula_unchanged() {
        let f = Formula::new(2, vec![]).unwrap();
        let out = normalize(&f).unwrap();
        assert_eq!(out.formula, f);
    }

    #[test]
    fn certificate_lines() {
        let recs = vec![
            record(TransformKind::TautologyRemoved, 3),
            TransformRecord {
                kind: TransformKind::BinaryExpanded,
                clause_position: 1,
                introduced_vars: vec![4, 5, 6],
                introduced_clauses: 5,
            },
        ];
        assert_eq!(
            format_certificate(&recs),
            "TautologyRemoved pos=3 vars= clauses=0\nBinaryExpanded pos=1 vars=4,5,6 clauses=5\n"
        );
    }
}
