//! Extended product codes `EP(m, v; n, h; g)`: an `m x n` product code with
//! `v` parities per column and `h` per row, plus `g` global parities.
//!
//! Arrays are flattened row-major, `(i, j) -> i * n + j`, so the global rows
//! of [`build_h2`] and [`build_h3`] carry `alpha^(i n + j)` at cell `(i, j)`.

use thiserror::Error;

use crate::field::{find_construction_prime, Field, FieldElement, FieldError, DEFAULT_PRIME_SEARCH_CAP};
use crate::gpc::{GpcError, GpcParams};
use crate::linalg::{GfMatrix, Solution};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EpcError {
    #[error("EP({m},{v};{n},{h};{g}) needs 1 <= v < m and 1 <= h < n")]
    BadShape {
        m: usize,
        v: usize,
        n: usize,
        h: usize,
        g: usize,
    },
    #[error("no admissible column count a for this shape")]
    EmptyRange,
    #[error("m = {m} leaves no base-level row; need m >= v + 2 = {}", v + 2)]
    NoBaseLevel { m: usize, v: usize },
    #[error("construction needs m, n >= 3, got {m}x{n}")]
    ArrayTooSmall { m: usize, n: usize },
    #[error("alpha has order {order}, the construction needs at least mn = {needed}")]
    AlphaOrderTooSmall { order: u64, needed: usize },
    #[error("parity-check matrix has {cols} columns, expected {expected}")]
    LengthMismatch { cols: usize, expected: usize },
    #[error("erasure pattern is uncorrectable; {} positions remain", .remaining.len())]
    Uncorrectable { remaining: Vec<usize> },
    #[error("known symbols violate the parity checks")]
    Inconsistent,
    #[error("expected {expected} data symbols, got {got}")]
    DataLength { expected: usize, got: usize },
    #[error("symbol {0:#x} is not in the field")]
    SymbolOutOfField(u64),
    #[error(transparent)]
    Gpc(#[from] GpcError),
    #[error(transparent)]
    Field(#[from] FieldError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EpcShape {
    pub m: usize,
    pub v: usize,
    pub n: usize,
    pub h: usize,
    pub g: usize,
}

impl EpcShape {
    pub fn new(m: usize, v: usize, n: usize, h: usize, g: usize) -> Result<Self, EpcError> {
        if v == 0 || v >= m || h == 0 || h >= n {
            return Err(EpcError::BadShape { m, v, n, h, g });
        }
        Ok(EpcShape { m, v, n, h, g })
    }
}

impl std::fmt::Display for EpcShape {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "EP({},{};{},{};{})", self.m, self.v, self.n, self.h, self.g)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceBound {
    /// `(a, d(v, h, g; a))` for every admissible `a`, ascending.
    pub table: Vec<(usize, usize)>,
    pub bound: usize,
}

/// Upper bound on the minimum distance of any code with this shape.
///
/// An `(v + b) x (h + a)` block of erasures, with `a b = g + 1` (plus a
/// partial extra row of `h + r` when `a` does not divide `g + 1`), exceeds
/// the available parities.
pub fn distance_bound(shape: &EpcShape) -> Result<DistanceBound, EpcError> {
    let EpcShape { m, v, n, h, g } = *shape;
    let lo = (g + 1).div_ceil(m - v);
    let hi = (g + 1).min(n - h);
    let table: Vec<(usize, usize)> = (lo..=hi)
        .map(|a| {
            let b = (g + 1) / a;
            let r = g + 1 - a * b;
            let base = (v + b) * (h + a);
            (a, if r == 0 { base } else { base + h + r })
        })
        .collect();
    let bound = table.iter().map(|e| e.1).min().ok_or(EpcError::EmptyRange)?;
    Ok(DistanceBound { table, bound })
}

/// The 2-level code `C(n; m - v, (h^(m-v-1), (h+1)^(v+1)))`, whose distance
/// `min{(v+2)(h+1), (v+1)(h+2)}` meets [`distance_bound`] with `g = 1`.
pub fn build_optimal_g1(m: usize, v: usize, n: usize, h: usize, field: Field) -> Result<GpcParams, EpcError> {
    EpcShape::new(m, v, n, h, 1)?;
    if m < v + 2 {
        return Err(EpcError::NoBaseLevel { m, v });
    }
    Ok(GpcParams::new(
        m,
        n,
        m - v,
        vec![m - v - 1, v + 1],
        vec![h, h + 1],
        field,
    )?)
}

/// A code given by an explicit parity-check matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearCode {
    field: Field,
    h: GfMatrix,
    rank: usize,
    shape: Option<(usize, usize)>,
    data: Vec<usize>,
    parity: Vec<usize>,
}

impl LinearCode {
    pub fn new(field: Field, h: GfMatrix) -> LinearCode {
        let rank = h.rank(&field);
        let parity = greedy_parity_positions(&field, &h, rank);
        let data = (0..h.cols()).filter(|c| !parity.contains(c)).collect();
        LinearCode {
            field,
            h,
            rank,
            shape: None,
            data,
            parity,
        }
    }

    /// Attaches an `m x n` array shape; `m n` must equal the length.
    pub fn with_shape(mut self, m: usize, n: usize) -> Result<LinearCode, EpcError> {
        if m * n != self.length() {
            return Err(EpcError::LengthMismatch {
                cols: self.length(),
                expected: m * n,
            });
        }
        self.shape = Some((m, n));
        Ok(self)
    }

    /// The GPC code as a generic linear code on its flattened arrays.
    pub fn from_gpc(params: &GpcParams) -> LinearCode {
        LinearCode::new(params.field().clone(), params.full_parity_matrix())
            .with_shape(params.m(), params.n())
            .expect("full parity matrix has mn columns")
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn parity_check(&self) -> &GfMatrix {
        &self.h
    }

    pub fn shape(&self) -> Option<(usize, usize)> {
        self.shape
    }

    pub fn length(&self) -> usize {
        self.h.cols()
    }

    pub fn dimension(&self) -> usize {
        self.length() - self.rank
    }

    /// Systematic data positions, ascending.
    pub fn data_positions(&self) -> &[usize] {
        &self.data
    }

    /// Parity positions: the last positions whose parity-check columns are
    /// independent, chosen greedily from the end, ascending.
    pub fn parity_positions(&self) -> &[usize] {
        &self.parity
    }

    pub fn is_codeword(&self, word: &[FieldElement]) -> bool {
        word.len() == self.length()
            && self
                .h
                .mul_vec(&self.field, word)
                .is_ok_and(|s| s.iter().all(|x| x.is_zero()))
    }

    /// Fills the erased positions by solving the parity checks restricted
    /// to them. Fails unless the solution is unique.
    pub fn erasure_decode(&self, word: &[FieldElement], erased: &[bool]) -> Result<Vec<FieldElement>, EpcError> {
        let len = self.length();
        if word.len() != len || erased.len() != len {
            return Err(EpcError::LengthMismatch {
                cols: len,
                expected: word.len().max(erased.len()),
            });
        }
        let unknown: Vec<usize> = (0..len).filter(|&c| erased[c]).collect();
        let f = &self.field;
        let mut syndrome = vec![FieldElement::ZERO; self.h.rows()];
        for c in (0..len).filter(|&c| !erased[c]) {
            for (r, s) in syndrome.iter_mut().enumerate() {
                *s = f.add(*s, f.mul(self.h.get(r, c), word[c]));
            }
        }
        let mut out = word.to_vec();
        if unknown.is_empty() {
            return if syndrome.iter().all(|s| s.is_zero()) {
                Ok(out)
            } else {
                Err(EpcError::Inconsistent)
            };
        }
        match self
            .h
            .select_columns(&unknown)
            .solve(f, &syndrome)
            .expect("syndrome has one entry per row")
        {
            Solution::Unique(x) => {
                for (&c, v) in unknown.iter().zip(x) {
                    out[c] = v;
                }
                Ok(out)
            }
            Solution::Underdetermined => Err(EpcError::Uncorrectable { remaining: unknown }),
            Solution::NoSolution => Err(EpcError::Inconsistent),
        }
    }

    /// Systematic encoding: data at [`data_positions`](Self::data_positions),
    /// parities solved as erasures.
    pub fn encode(&self, data: &[FieldElement]) -> Result<Vec<FieldElement>, EpcError> {
        if data.len() != self.data.len() {
            return Err(EpcError::DataLength {
                expected: self.data.len(),
                got: data.len(),
            });
        }
        if let Some(x) = data.iter().find(|&&x| !self.field.contains(x)) {
            return Err(EpcError::SymbolOutOfField(x.value()));
        }
        let mut word = vec![FieldElement::ZERO; self.length()];
        let mut erased = vec![false; self.length()];
        for (&p, &x) in self.data.iter().zip(data) {
            word[p] = x;
        }
        for &p in &self.parity {
            erased[p] = true;
        }
        self.erasure_decode(&word, &erased)
    }
}

fn greedy_parity_positions(field: &Field, h: &GfMatrix, rank: usize) -> Vec<usize> {
    let mut chosen: Vec<usize> = Vec::with_capacity(rank);
    for c in (0..h.cols()).rev() {
        if chosen.len() == rank {
            break;
        }
        chosen.push(c);
        if h.select_columns(&chosen).rank(field) < chosen.len() {
            chosen.pop();
        }
    }
    chosen.reverse();
    chosen
}

/// Default field for [`build_h2`] and [`build_h3`]: the smallest built-in
/// field whose primitive element has order at least `m n`.
pub fn default_global_field(m: usize, n: usize) -> Result<Field, EpcError> {
    Ok(Field::smallest_default((m * n) as u64)?)
}

/// `GF(2^(p-1))` defined by `M_p(x)` for the smallest suitable prime `p > m n`.
/// Over this field the three-global-parity construction always has distance 9.
pub fn prime_global_field(m: usize, n: usize) -> Result<Field, EpcError> {
    let p = find_construction_prime((m * n) as u64, DEFAULT_PRIME_SEARCH_CAP)?;
    Ok(Field::from_mp(p as u32)?)
}

fn global_rows(m: usize, n: usize, field: &Field, exponents: &[i64]) -> Result<GfMatrix, EpcError> {
    if m < 3 || n < 3 {
        return Err(EpcError::ArrayTooSmall { m, n });
    }
    if field.alpha_order() < (m * n) as u64 {
        return Err(EpcError::AlphaOrderTooSmall {
            order: field.alpha_order(),
            needed: m * n,
        });
    }
    let ones = |len| GfMatrix::ones_row(len);
    let product = GfMatrix::identity(m)
        .kron(field, &ones(n))
        .vstack(&ones(m).kron(field, &GfMatrix::identity(n)))
        .expect("both blocks have mn columns");
    let globals = GfMatrix::from_fn(exponents.len(), m * n, |r, c| field.alpha_pow(exponents[r] * c as i64));
    Ok(product.vstack(&globals).expect("mn columns"))
}

/// Single-parity product code plus two global rows `alpha^e` and
/// `alpha^(-e)`; distance 8 whenever `m n <= order(alpha)`.
pub fn build_h2(m: usize, n: usize, field: Field) -> Result<LinearCode, EpcError> {
    let h = global_rows(m, n, &field, &[1, -1])?;
    LinearCode::new(field, h).with_shape(m, n)
}

/// [`build_h2`] plus a third global row `alpha^(2e)`.
pub fn build_h3(m: usize, n: usize, field: Field) -> Result<LinearCode, EpcError> {
    let h = global_rows(m, n, &field, &[1, -1, 2])?;
    LinearCode::new(field, h).with_shape(m, n)
}

/// A quadruple `(i1, i2, j1, j2)` at which
/// `1 + alpha^(-j1) + alpha^(-i2 n + j2) + alpha^(-(i2 - i1) n + j2)` vanishes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Condition35Violation {
    pub i1: i64,
    pub i2: i64,
    pub j1: i64,
    pub j2: i64,
}

/// Checks the invertibility condition for the hardest 8-erasure patterns
/// of the three-global-parity code over `1 <= i1 < m`, `1 <= |i2| < m`,
/// `1 <= j1 < n`, `1 <= |j2| < n`. Returns the first violation found.
///
/// These ranges include quadruples no erasure pattern produces, so passing
/// guarantees distance 9 but a violation does not rule it out.
pub fn check_condition_35(m: usize, n: usize, field: &Field) -> Result<(), Condition35Violation> {
    let (mi, ni) = (m as i64, n as i64);
    let signed = |bound: i64| (1..bound).flat_map(|x| [-x, x]);
    for i1 in 1..mi {
        for i2 in signed(mi) {
            for j1 in 1..ni {
                for j2 in signed(ni) {
                    let terms = [
                        FieldElement::ONE,
                        field.alpha_pow(-j1),
                        field.alpha_pow(-i2 * ni + j2),
                        field.alpha_pow(-(i2 - i1) * ni + j2),
                    ];
                    let sum = terms.into_iter().fold(FieldElement::ZERO, |a, b| field.add(a, b));
                    if sum.is_zero() {
                        return Err(Condition35Violation { i1, i2, j1, j2 });
                    }
                }
            }
        }
    }
    Ok(())
}
