//! Generalized product codes.
//!
//! A code `C(n; k, u)` consists of `m x n` arrays whose rows lie in a base
//! Reed-Solomon code `C_0`, whose Vandermonde-weighted row combinations lie in
//! nested subcodes `C_1 ⊃ ... ⊃ C_{t-1}`, and whose columns lie in an
//! `[m, k]` MDS code. Product codes (`t = 1`) and integrated interleaved codes
//! (`k = m`) are both special cases.
//!
//! Levels are indexed `0..t`. Level `i` has `s_i` rows and a row code with
//! `u_i` parity symbols; `s_hat(i)` is the number of rows at level `i` or
//! above, with `s_hat(t) = m - k`.

mod array;
mod codeword;
mod decode;
mod encode;

use std::fmt;

use thiserror::Error;

use crate::field::{Field, FieldElement};
use crate::linalg::GfMatrix;

pub use array::{ErasurePattern, ErasureProfile, SymbolArray};
pub use codeword::min_weight_codeword;
pub use decode::{
    decodable_profile, decode_iterative, decode_rows, decode_rows_traced, DecodeTrace, Recovery, TraceStep,
};
pub use encode::Encoder;

/// A broken construction constraint.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Violation {
    #[error("at least one level is required")]
    NoLevels,
    #[error("s has {s_len} entries but u has {u_len}")]
    LevelCountMismatch { s_len: usize, u_len: usize },
    #[error("u_0 = 0, but every row code needs at least one parity")]
    ZeroRowParity,
    #[error("u must be strictly increasing, but u_{index} = {prev} >= u_{next_index} = {next}", next_index = index + 1)]
    RowParityNotIncreasing { index: usize, prev: usize, next: usize },
    #[error("u_{{t-1}} = {last} exceeds n - 1 = {max}", max = n - 1)]
    RowParityTooLarge { last: usize, n: usize },
    #[error("s_{index} = 0, every level needs at least one row")]
    EmptyLevel { index: usize },
    #[error("s sums to {sum}, expected m = {m}")]
    MultiplicitySum { sum: usize, m: usize },
    #[error("k = {k} exceeds m = {m}")]
    DimensionExceedsRows { k: usize, m: usize },
    #[error("m - k = {parity} must be < s_{{t-1}} = {last}")]
    TooManyColumnParities { parity: usize, last: usize },
    #[error("field has {size} elements, needs more than max(m, n) = {needed}")]
    FieldTooSmall { size: u128, needed: usize },
    #[error("alpha has order {order}, needs at least max(m, n) = {needed}")]
    AlphaOrderTooSmall { order: u64, needed: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GpcError {
    #[error("invalid parameters: {}", join_violations(.0))]
    Invalid(Vec<Violation>),
    #[error("array has erased positions")]
    HasErasures,
    #[error("array is {got_m}x{got_n}, code expects {m}x{n}")]
    ShapeMismatch {
        m: usize,
        n: usize,
        got_m: usize,
        got_n: usize,
    },
    #[error("expected {expected} data symbols, got {got}")]
    DataLength { expected: usize, got: usize },
    #[error("symbol {0:#x} is not in the field")]
    SymbolOutOfField(u64),
    #[error("level {level} does not exist (t = {t})")]
    NoSuchLevel { level: usize, t: usize },
    #[error("expected {expected} distinct in-range indices for this support, got {got:?}")]
    BadSupport { expected: usize, got: Vec<usize> },
    #[error("the column view of an integrated interleaved code (k = m) has no column code")]
    NoColumnCode,
    #[error("erasure pattern exceeds the row decoder's budget; {} positions remain", .remaining.len())]
    Uncorrectable { remaining: Vec<(usize, usize)> },
    #[error("iterative decoding stalled with {} positions erased", .remaining.len())]
    Stalled {
        remaining: Vec<(usize, usize)>,
        partial: Box<SymbolArray>,
    },
    #[error("decoded array fails the code constraints")]
    Inconsistent,
}

fn join_violations(v: &[Violation]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
}

/// Parameters `(m, n, k, s, u)` of a t-level code over a field.
#[derive(Clone, PartialEq, Eq)]
pub struct GpcParams {
    m: usize,
    n: usize,
    k: usize,
    s: Vec<usize>,
    u: Vec<usize>,
    field: Field,
}

impl fmt::Debug for GpcParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self} over {}", self.field)
    }
}

/// `C(n;k,(u_0,...))` with the row-parity vector written out in full.
impl fmt::Display for GpcParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let u: Vec<String> = self.u_vector().iter().map(ToString::to_string).collect();
        write!(f, "C({};{},({}))", self.n, self.k, u.join(","))
    }
}

/// Checks every construction constraint and lists the broken ones.
pub fn validate(m: usize, n: usize, k: usize, s: &[usize], u: &[usize], field: &Field) -> Result<(), Vec<Violation>> {
    let mut v = Vec::new();
    if s.is_empty() || u.is_empty() {
        v.push(Violation::NoLevels);
    }
    if s.len() != u.len() {
        v.push(Violation::LevelCountMismatch {
            s_len: s.len(),
            u_len: u.len(),
        });
    }
    if u.first() == Some(&0) {
        v.push(Violation::ZeroRowParity);
    }
    for (i, w) in u.windows(2).enumerate() {
        if w[0] >= w[1] {
            v.push(Violation::RowParityNotIncreasing {
                index: i,
                prev: w[0],
                next: w[1],
            });
        }
    }
    if let Some(&last) = u.last() {
        if last + 1 > n {
            v.push(Violation::RowParityTooLarge { last, n });
        }
    }
    for (i, &si) in s.iter().enumerate() {
        if si == 0 {
            v.push(Violation::EmptyLevel { index: i });
        }
    }
    let sum: usize = s.iter().sum();
    if sum != m {
        v.push(Violation::MultiplicitySum { sum, m });
    }
    if k > m {
        v.push(Violation::DimensionExceedsRows { k, m });
    } else if let Some(&last) = s.last() {
        if m - k >= last {
            v.push(Violation::TooManyColumnParities { parity: m - k, last });
        }
    }
    let needed = m.max(n);
    if field.size() <= needed as u128 {
        v.push(Violation::FieldTooSmall {
            size: field.size(),
            needed,
        });
    }
    if field.alpha_order() < needed as u64 {
        v.push(Violation::AlphaOrderTooSmall {
            order: field.alpha_order(),
            needed,
        });
    }
    if v.is_empty() {
        Ok(())
    } else {
        Err(v)
    }
}

impl GpcParams {
    pub fn new(m: usize, n: usize, k: usize, s: Vec<usize>, u: Vec<usize>, field: Field) -> Result<Self, GpcError> {
        validate(m, n, k, &s, &u, &field).map_err(GpcError::Invalid)?;
        Ok(GpcParams { m, n, k, s, u, field })
    }

    /// Builds from the expanded row-parity vector `(u_0, ..., u_0, u_1, ...)`
    /// of length `m`, the form used in `C(n; k, u)`.
    pub fn from_u_vector(n: usize, k: usize, u_vector: &[usize], field: Field) -> Result<Self, GpcError> {
        let mut s = Vec::new();
        let mut u = Vec::new();
        for &x in u_vector {
            if u.last() == Some(&x) {
                *s.last_mut().unwrap() += 1;
            } else {
                u.push(x);
                s.push(1);
            }
        }
        GpcParams::new(u_vector.len(), n, k, s, u, field)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Number of levels.
    pub fn t(&self) -> usize {
        self.u.len()
    }

    pub fn s(&self) -> &[usize] {
        &self.s
    }

    pub fn u(&self) -> &[usize] {
        &self.u
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    /// Number of column parities, `m - k`.
    pub fn column_parity(&self) -> usize {
        self.m - self.k
    }

    /// Rows at level `i` or above; `s_hat(t) = m - k`.
    pub fn s_hat(&self, i: usize) -> usize {
        if i >= self.t() {
            self.m - self.k
        } else {
            self.s[i..].iter().sum()
        }
    }

    /// `u_i`, with `u_t = n`.
    pub fn u_at(&self, i: usize) -> usize {
        if i >= self.t() {
            self.n
        } else {
            self.u[i]
        }
    }

    /// Row-parity count of every row, `(u_0, ..., u_0, u_1, ...)`.
    pub fn u_vector(&self) -> Vec<usize> {
        self.s
            .iter()
            .zip(&self.u)
            .flat_map(|(&si, &ui)| std::iter::repeat_n(ui, si))
            .collect()
    }

    pub fn length(&self) -> usize {
        self.m * self.n
    }

    /// `K = kn - sum_{i<t-1} s_i u_i - (s_{t-1} - m + k) u_{t-1}`.
    pub fn dimension(&self) -> usize {
        let t = self.t();
        let lower: usize = (0..t - 1).map(|i| self.s[i] * self.u[i]).sum();
        let top = (self.s[t - 1] + self.k - self.m) * self.u[t - 1];
        self.k * self.n - lower - top
    }

    /// `d = min_i (s_hat(i+1) + 1)(u_i + 1)`.
    pub fn min_distance(&self) -> usize {
        (0..self.t())
            .map(|i| (self.s_hat(i + 1) + 1) * (self.u[i] + 1))
            .min()
            .expect("at least one level")
    }

    /// Parity-check matrix of the level-`i` row code: `u_i x n`, entry
    /// `(r, j) = alpha^(r j)`.
    pub fn component_parity_check(&self, level: usize) -> Result<GfMatrix, GpcError> {
        if level >= self.t() {
            return Err(GpcError::NoSuchLevel { level, t: self.t() });
        }
        Ok(row_code_check(&self.field, self.u[level], self.n))
    }

    /// One matrix over the `mn` row-major symbols whose null space is the
    /// code. Rows are: the base row code on every row, then the nested
    /// constraints level by level, then the column constraints. It is not
    /// full rank.
    pub fn full_parity_matrix(&self) -> GfMatrix {
        let (m, n) = (self.m, self.n);
        let f = &self.field;
        let mut rows: Vec<Vec<FieldElement>> = Vec::new();
        for j in 0..m {
            for q in 0..self.u[0] {
                let mut row = vec![FieldElement::ZERO; m * n];
                for c in 0..n {
                    row[j * n + c] = f.alpha_pow((q * c) as i64);
                }
                rows.push(row);
            }
        }
        for i in 1..self.t() {
            for r in 0..self.s_hat(i) {
                for q in 0..self.u[i] {
                    let mut row = vec![FieldElement::ZERO; m * n];
                    for j in 0..m {
                        for c in 0..n {
                            row[j * n + c] = f.alpha_pow((r * j + q * c) as i64);
                        }
                    }
                    rows.push(row);
                }
            }
        }
        for r in 0..m - self.k {
            for c in 0..n {
                let mut row = vec![FieldElement::ZERO; m * n];
                for j in 0..m {
                    row[j * n + c] = f.alpha_pow((r * j) as i64);
                }
                rows.push(row);
            }
        }
        GfMatrix::from_rows(&rows).expect("rows have equal length")
    }

    /// The systematic parity layout: for each level `i`, the last `u_i`
    /// columns of rows `m - s_hat(i) .. m - s_hat(i+1)`, plus rows `k..m`
    /// entirely.
    pub fn parity_positions(&self) -> ErasurePattern {
        let mut pos = Vec::new();
        for i in 0..self.t() {
            let lo = self.m - self.s_hat(i);
            let hi = self.m - self.s_hat(i + 1);
            for row in lo..hi {
                for c in self.n - self.u[i]..self.n {
                    pos.push((row, c));
                }
            }
        }
        for row in self.k..self.m {
            for c in 0..self.n {
                pos.push((row, c));
            }
        }
        ErasurePattern::new(self.m, self.n, pos)
    }

    /// The same code read column-wise: `C(m; n - u_0, u')` on `n x m` arrays.
    pub fn transpose(&self) -> Result<GpcParams, GpcError> {
        if self.k == self.m {
            return Err(GpcError::NoColumnCode);
        }
        let t = self.t();
        // u'_{t-i} = s_hat(i) for 1 <= i <= t
        let u_t: Vec<usize> = (0..t).map(|j| self.s_hat(t - j)).collect();
        // s'_i = u_{t-i} - u_{t-i-1} for i <= t-2, s'_{t-1} = u_1 (u_t = n)
        let mut s_t: Vec<usize> = (0..t.saturating_sub(1))
            .map(|i| self.u_at(t - i) - self.u_at(t - i - 1))
            .collect();
        s_t.push(self.u_at(1));
        GpcParams::new(self.n, self.m, self.n - self.u[0], s_t, u_t, self.field.clone())
    }

    /// Checks membership by evaluating every syndrome directly.
    pub fn is_member(&self, arr: &SymbolArray) -> Result<bool, GpcError> {
        self.check_shape(arr)?;
        if arr.erased_count() > 0 {
            return Err(GpcError::HasErasures);
        }
        Ok(self.syndromes_vanish(arr))
    }

    pub(crate) fn syndromes_vanish(&self, arr: &SymbolArray) -> bool {
        let f = &self.field;
        let (m, n) = (self.m, self.n);
        for j in 0..m {
            if !in_row_code(f, arr.row(j), self.u[0]) {
                return false;
            }
        }
        let weighted = |r: usize| -> Vec<FieldElement> {
            let mut acc = vec![FieldElement::ZERO; n];
            for j in 0..m {
                let w = f.alpha_pow((r * j) as i64);
                for (a, &x) in acc.iter_mut().zip(arr.row(j)) {
                    *a = f.add(*a, f.mul(w, x));
                }
            }
            acc
        };
        for r in 0..m - self.k {
            if weighted(r).iter().any(|x| !x.is_zero()) {
                return false;
            }
        }
        for i in 1..self.t() {
            for r in 0..self.s_hat(i) {
                if !in_row_code(f, &weighted(r), self.u[i]) {
                    return false;
                }
            }
        }
        true
    }

    pub(crate) fn check_shape(&self, arr: &SymbolArray) -> Result<(), GpcError> {
        if arr.m() != self.m || arr.n() != self.n {
            return Err(GpcError::ShapeMismatch {
                m: self.m,
                n: self.n,
                got_m: arr.m(),
                got_n: arr.n(),
            });
        }
        Ok(())
    }

    /// Smallest level `s >= 1` whose row code corrects `erasures` and whose
    /// nested constraints reach `rows` weighted sums.
    pub(crate) fn nested_level_for(&self, erasures: usize, rows: usize) -> Option<usize> {
        (1..self.t()).find(|&s| self.u[s] >= erasures && self.s_hat(s) >= rows)
    }
}

pub(crate) fn row_code_check(field: &Field, parities: usize, n: usize) -> GfMatrix {
    GfMatrix::from_fn(parities, n, |r, c| field.alpha_pow((r * c) as i64))
}

fn in_row_code(field: &Field, row: &[FieldElement], parities: usize) -> bool {
    (0..parities).all(|r| {
        row.iter()
            .enumerate()
            .fold(FieldElement::ZERO, |acc, (c, &x)| {
                field.add(acc, field.mul(field.alpha_pow((r * c) as i64), x))
            })
            .is_zero()
    })
}
