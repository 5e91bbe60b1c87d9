//! Erasure decoding.
//!
//! The row decoder first repairs every row the base code can handle on its
//! own. The remaining erased rows are ordered by erasure count and combined
//! through a row-reduced Vandermonde matrix on their indices: reduced row `p`
//! is a combination of the first `p + 1` weighted-sum constraints, so it
//! places row `p` of the ordering, plus known multiples of later rows, in a
//! nested row code (or forces it to zero when `p < m - k`). Rows are then
//! recovered from last to first.

use crate::field::{Field, FieldElement};
use crate::linalg::{GfMatrix, Solution};

use super::{ErasureProfile, GpcError, GpcParams, SymbolArray};

/// How one row was recovered.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Recovery {
    /// Directly in the base row code.
    BaseRow,
    /// A combination with later rows, decoded in the row code of `level`.
    Nested { level: usize },
    /// Equal to a combination of later rows, from the column constraints.
    ColumnConstraint,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceStep {
    pub row: usize,
    /// Position in the triangulation order; `None` for base-row repairs.
    pub position: Option<usize>,
    pub erasures: usize,
    pub recovery: Recovery,
}

/// What the row decoder did, for inspection and tests.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DecodeTrace {
    /// Rows still erased after base-row repairs, sorted by erasure count,
    /// followed by the clean rows. Empty if no triangulation was needed.
    pub order: Vec<usize>,
    /// Vandermonde matrix on `alpha^order[j]`, one row per remaining erased row.
    pub system: Option<GfMatrix>,
    /// Its row-reduced form.
    pub triangulated: Option<GfMatrix>,
    /// Steps in execution order.
    pub steps: Vec<TraceStep>,
}

/// A triangulation computed from erasure counts alone, reusable for every
/// array with the same pattern.
#[derive(Debug, Clone)]
pub(crate) struct RowPlan {
    order: Vec<usize>,
    system: GfMatrix,
    triangulated: GfMatrix,
    steps: Vec<(usize, usize, Recovery)>,
}

/// Whether the row decoder succeeds on a pattern with this profile.
///
/// Position `p` of the sorted profile holding more than `u_0` erasures must
/// either lie below `m - k` or fit the row code of the deepest level with at
/// least `p + 1` rows.
pub fn decodable_profile(params: &GpcParams, profile: &ErasureProfile) -> bool {
    let u0 = params.u()[0];
    profile.counts().iter().enumerate().all(|(p, &e)| {
        if e <= u0 || p < params.column_parity() {
            return true;
        }
        let deepest = (0..params.t()).rev().find(|&s| params.s_hat(s) > p);
        matches!(deepest, Some(s) if s >= 1 && e <= params.u()[s])
    })
}

impl RowPlan {
    /// Plans recovery of rows with the given erasure counts, all of which
    /// must exceed `u_0` or be zero. `None` if the profile is not decodable.
    pub(crate) fn build(params: &GpcParams, counts: &[usize]) -> Option<RowPlan> {
        let profile = ErasureProfile::from_counts(counts.to_vec());
        if !decodable_profile(params, &profile) {
            return None;
        }
        let f = params.field();
        let order = profile.rows();
        let erased_rows = counts.iter().filter(|&&e| e > 0).count();
        let nodes: Vec<FieldElement> = order.iter().map(|&r| f.alpha_pow(r as i64)).collect();
        let system = GfMatrix::vandermonde(f, &nodes, erased_rows).expect("distinct row nodes");
        let reduction = system.row_reduce(f);
        debug_assert_eq!(reduction.pivots, (0..erased_rows).collect::<Vec<_>>());
        let steps = (0..erased_rows)
            .rev()
            .map(|p| {
                let row = order[p];
                let recovery = if p < params.column_parity() {
                    Recovery::ColumnConstraint
                } else {
                    let level = params
                        .nested_level_for(counts[row], p + 1)
                        .expect("decodable profile has a level for every row");
                    Recovery::Nested { level }
                };
                (p, row, recovery)
            })
            .collect();
        Some(RowPlan {
            order,
            system,
            triangulated: reduction.reduced,
            steps,
        })
    }

    pub(crate) fn apply(&self, params: &GpcParams, arr: &mut SymbolArray, trace: &mut DecodeTrace) {
        let f = params.field();
        let n = params.n();
        for &(p, row, recovery) in &self.steps {
            let mut comb = vec![FieldElement::ZERO; n];
            for j in p + 1..self.order.len() {
                let g = self.triangulated.get(p, j);
                if g.is_zero() {
                    continue;
                }
                for (a, &x) in comb.iter_mut().zip(arr.row(self.order[j])) {
                    *a = f.add(*a, f.mul(g, x));
                }
            }
            let erased = arr.erased_in_row(row);
            match recovery {
                Recovery::ColumnConstraint => {
                    for &c in &erased {
                        arr.set(row, c, comb[c]);
                    }
                }
                Recovery::Nested { .. } => {
                    let y: Vec<FieldElement> = arr.row(row).iter().zip(&comb).map(|(&a, &b)| f.add(a, b)).collect();
                    let fill = solve_row_erasures(f, &y, &erased);
                    for (&c, &x) in erased.iter().zip(&fill) {
                        arr.set(row, c, f.add(x, comb[c]));
                    }
                }
                Recovery::BaseRow => unreachable!("plans never contain base-row steps"),
            }
            trace.steps.push(TraceStep {
                row,
                position: Some(p),
                erasures: erased.len(),
                recovery,
            });
        }
        trace.order = self.order.clone();
        trace.system = Some(self.system.clone());
        trace.triangulated = Some(self.triangulated.clone());
    }
}

/// Values at `erased` that put `y` in a row code with at least
/// `erased.len()` parities. Entries of `y` at erased positions are ignored.
pub(crate) fn solve_row_erasures(field: &Field, y: &[FieldElement], erased: &[usize]) -> Vec<FieldElement> {
    let e = erased.len();
    if e == 0 {
        return Vec::new();
    }
    let nodes: Vec<FieldElement> = erased.iter().map(|&c| field.alpha_pow(c as i64)).collect();
    let a = GfMatrix::vandermonde(field, &nodes, e).expect("distinct column nodes");
    let rhs: Vec<FieldElement> = (0..e)
        .map(|q| {
            y.iter()
                .enumerate()
                .filter(|(c, _)| !erased.contains(c))
                .fold(FieldElement::ZERO, |acc, (c, &x)| {
                    field.add(acc, field.mul(field.alpha_pow((q * c) as i64), x))
                })
        })
        .collect();
    match a.solve(field, &rhs).expect("square system") {
        Solution::Unique(x) => x,
        other => unreachable!("Vandermonde system on distinct nodes gave {other:?}"),
    }
}

/// Repairs rows with at most `u_0` erasures in the base code.
pub(crate) fn repair_base_rows(params: &GpcParams, arr: &mut SymbolArray, trace: &mut DecodeTrace) {
    let u0 = params.u()[0];
    for row in 0..arr.m() {
        let erased = arr.erased_in_row(row);
        if erased.is_empty() || erased.len() > u0 {
            continue;
        }
        let fill = solve_row_erasures(params.field(), arr.row(row), &erased);
        for (&c, &x) in erased.iter().zip(&fill) {
            arr.set(row, c, x);
        }
        trace.steps.push(TraceStep {
            row,
            position: None,
            erasures: erased.len(),
            recovery: Recovery::BaseRow,
        });
    }
}

/// One row pass. Base-row repairs are kept even when the rest fails.
fn row_pass(params: &GpcParams, arr: &mut SymbolArray) -> Result<DecodeTrace, GpcError> {
    let mut trace = DecodeTrace::default();
    repair_base_rows(params, arr, &mut trace);
    let counts: Vec<usize> = (0..arr.m()).map(|r| arr.erased_in_row(r).len()).collect();
    if counts.iter().all(|&e| e == 0) {
        return Ok(trace);
    }
    let plan = RowPlan::build(params, &counts).ok_or_else(|| GpcError::Uncorrectable {
        remaining: arr.erased_positions(),
    })?;
    plan.apply(params, arr, &mut trace);
    Ok(trace)
}

/// Row decoder, returning the steps it took.
pub fn decode_rows_traced(params: &GpcParams, arr: &SymbolArray) -> Result<(SymbolArray, DecodeTrace), GpcError> {
    params.check_shape(arr)?;
    let mut out = arr.clone();
    let trace = row_pass(params, &mut out)?;
    if !params.syndromes_vanish(&out) {
        return Err(GpcError::Inconsistent);
    }
    Ok((out, trace))
}

/// Row decoder. Fails with [`GpcError::Uncorrectable`] exactly when the
/// pattern's profile is not decodable.
pub fn decode_rows(params: &GpcParams, arr: &SymbolArray) -> Result<SymbolArray, GpcError> {
    decode_rows_traced(params, arr).map(|(a, _)| a)
}

/// Alternates row passes with passes over the transposed code until the
/// array is complete or a round makes no progress, in which case the error
/// carries the partially decoded array.
///
/// Codes with `k = m` have no column code and get row passes only.
pub fn decode_iterative(params: &GpcParams, arr: &SymbolArray) -> Result<SymbolArray, GpcError> {
    params.check_shape(arr)?;
    let columns = params.transpose().ok();
    let mut cur = arr.clone();
    loop {
        let before = cur.erased_count();
        if before == 0 {
            break;
        }
        let _ = row_pass(params, &mut cur);
        if let Some(cp) = &columns {
            if cur.erased_count() > 0 {
                let mut t = cur.transpose();
                let _ = row_pass(cp, &mut t);
                cur = t.transpose();
            }
        }
        if cur.erased_count() == before {
            return Err(GpcError::Stalled {
                remaining: cur.erased_positions(),
                partial: Box::new(cur),
            });
        }
    }
    if !params.syndromes_vanish(&cur) {
        return Err(GpcError::Inconsistent);
    }
    Ok(cur)
}
