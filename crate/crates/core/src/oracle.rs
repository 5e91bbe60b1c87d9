//! Brute-force ground truth.
//!
//! An erasure pattern is correctable iff the parity-check columns it covers
//! are independent, and the minimum distance is the size of the smallest
//! dependent column set. Both are answered here by exhaustive linear algebra
//! with no knowledge of code structure.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::epc::LinearCode;
use crate::field::{Field, FieldElement};
use crate::gpc::{decodable_profile, decode_iterative, decode_rows, Encoder, ErasurePattern, GpcParams, SymbolArray};
use crate::linalg::GfMatrix;

/// Default limit on subsets examined by [`brute_min_distance`].
pub const DEFAULT_BUDGET: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("no nonzero codeword of weight <= {cap}")]
    CapExceeded { cap: usize },
    #[error("search needs about {needed} subsets, over the budget of {budget}; use random trials instead")]
    BudgetExceeded { needed: u64, budget: u64 },
}

/// Result of an exhaustive distance search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceReport {
    pub distance: usize,
    /// Support of a minimum-weight codeword: the colex-first dependent
    /// column set of that size.
    pub witness: Vec<usize>,
    pub patterns_examined: u64,
}

/// True iff the columns of `h` at `pattern` are linearly independent.
pub fn correctable(field: &Field, h: &GfMatrix, pattern: &[usize]) -> bool {
    pattern.is_empty() || h.select_columns(pattern).rank(field) == pattern.len()
}

/// [`brute_min_distance_with_budget`] with [`DEFAULT_BUDGET`].
pub fn brute_min_distance(field: &Field, h: &GfMatrix, cap: usize) -> Result<DistanceReport, OracleError> {
    brute_min_distance_with_budget(field, h, cap, DEFAULT_BUDGET)
}

/// Smallest number of dependent columns of `h`, searched exhaustively up
/// to `cap`.
///
/// Column subsets are scanned by size in colex order. When the next size
/// would cost more than listing every codeword of minimal support, the
/// search switches to that: each minimal-support codeword vanishes on a
/// set of `K - 1` generator columns spanning a hyperplane, so scanning all
/// `(K - 1)`-subsets finds them all. Both routes return the same witness.
pub fn brute_min_distance_with_budget(
    field: &Field,
    h: &GfMatrix,
    cap: usize,
    budget: u64,
) -> Result<DistanceReport, OracleError> {
    let reduced = independent_rows(field, h);
    let n = h.cols();
    let k = n - reduced.len();
    if k == 0 {
        return Err(OracleError::CapExceeded { cap });
    }
    let columns: Vec<Vec<FieldElement>> = (0..n).map(|c| reduced.iter().map(|r| r[c]).collect()).collect();
    // rough operation counts: one residual update per internal node, one
    // flag read per leaf
    let (nn, r) = (n as u64, reduced.len().max(1) as u64);
    let walk_cost = |depth: u64, width: u64| {
        let inner = binomial(nn, depth.saturating_sub(1)).saturating_mul(nn * width);
        inner.saturating_add(binomial(nn, depth).saturating_mul(nn))
    };
    let dual_subsets = binomial(nn, (k - 1) as u64);
    let dual_cost = walk_cost((k - 1) as u64, k as u64);
    let mut examined = 0u64;
    for size in 1..=cap.min(n) {
        let subsets = binomial(nn, size as u64);
        if walk_cost(size as u64, r) > dual_cost {
            if examined.saturating_add(dual_subsets) > budget {
                return Err(OracleError::BudgetExceeded {
                    needed: examined.saturating_add(dual_subsets),
                    budget,
                });
            }
            let generator = h.null_space(field);
            let (distance, witness, count) = min_weight_by_hyperplanes(field, &generator, n);
            examined += count;
            if distance > cap {
                return Err(OracleError::CapExceeded { cap });
            }
            return Ok(DistanceReport {
                distance,
                witness,
                patterns_examined: examined,
            });
        }
        if examined.saturating_add(subsets) > budget {
            return Err(OracleError::BudgetExceeded {
                needed: examined.saturating_add(subsets),
                budget,
            });
        }
        let mut search = ColexSearch {
            residuals: Residuals::new(field, &columns, size),
            chosen: Vec::with_capacity(size),
            examined: 0,
        };
        let found = search.first_dependent(size, n);
        examined += search.examined;
        if let Some(mut witness) = found {
            witness.sort_unstable();
            return Ok(DistanceReport {
                distance: size,
                witness,
                patterns_examined: examined,
            });
        }
    }
    Err(OracleError::CapExceeded { cap })
}

fn independent_rows(field: &Field, h: &GfMatrix) -> Vec<Vec<FieldElement>> {
    let rr = h.row_reduce(field);
    (0..rr.rank()).map(|i| rr.reduced.row(i).to_vec()).collect()
}

pub(crate) fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    acc as u64
}

/// Column vectors reduced against a growing basis, one copy per depth.
///
/// Depth `l` holds every column minus its projection on the first `l` chosen
/// columns, so "is column `x` in the span" is a flag lookup at the leaves.
struct Residuals<'a> {
    field: &'a Field,
    dim: usize,
    levels: Vec<Vec<FieldElement>>,
    zero: Vec<Vec<bool>>,
}

impl<'a> Residuals<'a> {
    fn new(field: &'a Field, columns: &[Vec<FieldElement>], depth: usize) -> Self {
        let dim = columns.first().map_or(0, Vec::len);
        let n = columns.len();
        let mut levels = vec![vec![FieldElement::ZERO; n * dim]; depth + 1];
        for (c, col) in columns.iter().enumerate() {
            levels[0][c * dim..(c + 1) * dim].copy_from_slice(col);
        }
        let zero0 = columns.iter().map(|c| c.iter().all(|x| x.is_zero())).collect();
        let mut zero = vec![vec![false; n]; depth + 1];
        zero[0] = zero0;
        Residuals {
            field,
            dim,
            levels,
            zero,
        }
    }

    /// Adds column `x` (nonzero at `level`) to the basis and reduces columns
    /// `0..limit` into `level + 1`.
    fn push(&mut self, level: usize, x: usize, limit: usize) {
        let (dim, f) = (self.dim, self.field);
        let (lower, upper) = self.levels.split_at_mut(level + 1);
        let cur = &lower[level];
        let next = &mut upper[0];
        let pivot_col = &cur[x * dim..(x + 1) * dim];
        let p = pivot_col.iter().position(|v| !v.is_zero()).expect("nonzero residual");
        let inv = f.inv(pivot_col[p]).expect("nonzero pivot");
        for y in 0..limit {
            let src = &cur[y * dim..(y + 1) * dim];
            let dst = &mut next[y * dim..(y + 1) * dim];
            let coef = f.mul(src[p], inv);
            let mut all_zero = true;
            for i in 0..dim {
                let v = f.add(src[i], f.mul(coef, pivot_col[i]));
                all_zero &= v.is_zero();
                dst[i] = v;
            }
            self.zero[level + 1][y] = all_zero;
        }
    }
}

struct ColexSearch<'a> {
    residuals: Residuals<'a>,
    chosen: Vec<usize>,
    examined: u64,
}

impl ColexSearch<'_> {
    /// First `remaining`-element extension (elements below `upper`), in
    /// colex order, that makes the chosen set dependent.
    fn first_dependent(&mut self, remaining: usize, upper: usize) -> Option<Vec<usize>> {
        let level = self.chosen.len();
        if remaining == 1 {
            let hit = self.residuals.zero[level][..upper].iter().position(|&z| z);
            self.examined += hit.map_or(upper, |x| x + 1) as u64;
            return hit.map(|x| {
                let mut set = self.chosen.clone();
                set.push(x);
                set
            });
        }
        for x in remaining - 1..upper {
            // every smaller set is independent, so a partial set never is
            if self.residuals.zero[level][x] {
                continue;
            }
            self.residuals.push(level, x, x);
            self.chosen.push(x);
            let found = self.first_dependent(remaining - 1, x);
            self.chosen.pop();
            if found.is_some() {
                return found;
            }
        }
        None
    }
}

/// Minimum weight over all codewords vanishing on a hyperplane of generator
/// columns. Ties go to the colex-smallest support.
fn min_weight_by_hyperplanes(field: &Field, generator: &[Vec<FieldElement>], n: usize) -> (usize, Vec<usize>, u64) {
    let k = generator.len();
    let columns: Vec<Vec<FieldElement>> = (0..n).map(|c| generator.iter().map(|g| g[c]).collect()).collect();
    let mut walk = HyperplaneWalk {
        residuals: Residuals::new(field, &columns, k - 1),
        n,
        best: None,
        examined: 0,
    };
    walk.descend(0, k - 1, n);
    let (w, s) = walk.best.expect("a nonzero code has a hyperplane");
    (w, s, walk.examined)
}

struct HyperplaneWalk<'a> {
    residuals: Residuals<'a>,
    n: usize,
    best: Option<(usize, Vec<usize>)>,
    examined: u64,
}

impl HyperplaneWalk<'_> {
    fn descend(&mut self, level: usize, remaining: usize, upper: usize) {
        if remaining == 0 {
            self.examined += 1;
            let zero = &self.residuals.zero[level];
            let weight = zero.iter().filter(|&&z| !z).count();
            if self.best.as_ref().is_some_and(|(w, _)| weight > *w) {
                return;
            }
            let support: Vec<usize> = (0..self.n).filter(|&c| !zero[c]).collect();
            let better = match &self.best {
                None => true,
                Some((w, s)) => weight < *w || colex_less(&support, s),
            };
            if better {
                self.best = Some((weight, support));
            }
            return;
        }
        for x in remaining - 1..upper {
            if self.residuals.zero[level][x] {
                continue;
            }
            self.residuals.push(level, x, self.n);
            self.descend(level + 1, remaining - 1, x);
        }
    }
}

/// Colex order on ascending index sets of equal size.
fn colex_less(a: &[usize], b: &[usize]) -> bool {
    a.iter().rev().lt(b.iter().rev())
}

/// Random pattern whose row profile the triangulation decoder accepts.
///
/// Sorted counts are drawn position by position under the acceptance rule,
/// then assigned to a random row order and random columns.
pub fn random_decodable_pattern(params: &GpcParams, rng: &mut impl Rng) -> ErasurePattern {
    let (m, n) = (params.m(), params.n());
    let u0 = params.u()[0];
    let mut counts = Vec::with_capacity(m);
    let mut prev = n;
    for p in 0..m {
        let limit = if p < params.column_parity() {
            n
        } else {
            let deepest = (0..params.t()).rev().find(|&s| params.s_hat(s) > p).unwrap_or(0);
            u0.max(if deepest >= 1 { params.u()[deepest] } else { 0 })
        };
        let e = rng.gen_range(0..=limit.min(prev));
        counts.push(e);
        prev = e;
    }
    let mut rows: Vec<usize> = (0..m).collect();
    rows.shuffle(rng);
    let mut positions = Vec::new();
    for (&row, &e) in rows.iter().zip(&counts) {
        for c in rand::seq::index::sample(rng, n, e) {
            positions.push((row, c));
        }
    }
    let pattern = ErasurePattern::new(m, n, positions);
    debug_assert!(decodable_profile(params, &pattern.profile()));
    pattern
}

/// Uniformly random pattern of uniformly random weight `<= max_weight`.
pub fn random_pattern(m: usize, n: usize, max_weight: usize, rng: &mut impl Rng) -> ErasurePattern {
    let w = rng.gen_range(0..=max_weight.min(m * n));
    ErasurePattern::from_flat(m, n, &rand::seq::index::sample(rng, m * n, w).into_vec())
}

/// Where trial patterns come from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PatternSource {
    Uniform { max_weight: usize },
    Decodable,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Discrepancy {
    pub trial: usize,
    /// Seed reproducing this trial alone.
    pub trial_seed: u64,
    pub pattern: ErasurePattern,
    pub what: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct EquivalenceReport {
    pub seed: u64,
    pub trials: usize,
    pub oracle_correctable: usize,
    pub rows_decoded: usize,
    pub iterative_decoded: usize,
    pub discrepancies: Vec<Discrepancy>,
}

/// Random codewords under random erasures, checked against the oracle.
///
/// A trial is a discrepancy if the oracle solve fails on a correctable
/// pattern, if the row decoder disagrees with [`decodable_profile`], if any
/// decoder output differs from the codeword or is not a member, or if a
/// decoder succeeds where the oracle says the pattern is ambiguous.
pub fn decoder_oracle_equivalence(
    params: &GpcParams,
    trials: usize,
    seed: u64,
    source: PatternSource,
) -> EquivalenceReport {
    let encoder = Encoder::new(params);
    let code = LinearCode::from_gpc(params);
    let field = params.field();
    let mut master = ChaCha8Rng::seed_from_u64(seed);
    let mut report = EquivalenceReport {
        seed,
        trials,
        ..Default::default()
    };
    for trial in 0..trials {
        let trial_seed: u64 = master.gen();
        let mut rng = ChaCha8Rng::seed_from_u64(trial_seed);
        let data: Vec<FieldElement> = (0..params.dimension())
            .map(|_| FieldElement(rng.gen_range(0..field.size() as u64)))
            .collect();
        let codeword = encoder.encode(&data).expect("data in range");
        let pattern = match source {
            PatternSource::Uniform { max_weight } => random_pattern(params.m(), params.n(), max_weight, &mut rng),
            PatternSource::Decodable => random_decodable_pattern(params, &mut rng),
        };
        let mut received = codeword.clone();
        received.apply_erasures(&pattern);
        let mut issues: Vec<String> = Vec::new();
        let mut fail = |what: String| issues.push(what);

        let ok = correctable(field, code.parity_check(), &pattern.flat());
        if ok {
            report.oracle_correctable += 1;
            let mut erased = vec![false; params.length()];
            for i in pattern.flat() {
                erased[i] = true;
            }
            match code.erasure_decode(received.values(), &erased) {
                Ok(v) if v == codeword.values() => {}
                other => fail(format!("oracle solve on a correctable pattern gave {other:?}")),
            }
        }

        let predicted = decodable_profile(params, &pattern.profile());
        match decode_rows(params, &received) {
            Ok(out) => {
                report.rows_decoded += 1;
                check_output(params, &out, &codeword, ok, "row decoder", &mut fail);
                if !predicted {
                    fail("row decoder succeeded on a profile it should reject".into());
                }
            }
            Err(e) => {
                if predicted {
                    fail(format!("row decoder failed on an accepted profile: {e}"));
                }
            }
        }
        if let Ok(out) = decode_iterative(params, &received) {
            report.iterative_decoded += 1;
            check_output(params, &out, &codeword, ok, "iterative decoder", &mut fail);
        }
        report.discrepancies.extend(issues.into_iter().map(|what| Discrepancy {
            trial,
            trial_seed,
            pattern: pattern.clone(),
            what,
        }));
    }
    report
}

fn check_output(
    params: &GpcParams,
    out: &SymbolArray,
    codeword: &SymbolArray,
    oracle_ok: bool,
    who: &str,
    fail: &mut impl FnMut(String),
) {
    if out != codeword {
        fail(format!("{who} output differs from the codeword"));
    }
    if params.is_member(out) != Ok(true) {
        fail(format!("{who} output is not a codeword"));
    }
    if !oracle_ok {
        fail(format!("{who} decoded a pattern the oracle calls ambiguous"));
    }
}

/// Outcome of [`linear_erasure_trials`].
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TrialReport {
    pub seed: u64,
    pub trials: usize,
    pub correctable: usize,
    pub decoded: usize,
    pub discrepancies: Vec<Discrepancy>,
}

/// Random codewords of `code` (laid out as an `m x n` array) under uniform
/// random erasures of weight `<= max_weight`. The solver must succeed
/// exactly on the patterns the oracle calls correctable and return the
/// original word.
pub fn linear_erasure_trials(
    code: &LinearCode,
    m: usize,
    n: usize,
    trials: usize,
    seed: u64,
    max_weight: usize,
) -> TrialReport {
    assert_eq!(m * n, code.length(), "array shape does not match the code length");
    let field = code.field();
    let mut master = ChaCha8Rng::seed_from_u64(seed);
    let mut report = TrialReport {
        seed,
        trials,
        ..Default::default()
    };
    for trial in 0..trials {
        let trial_seed: u64 = master.gen();
        let mut rng = ChaCha8Rng::seed_from_u64(trial_seed);
        let data: Vec<FieldElement> = (0..code.dimension())
            .map(|_| FieldElement(rng.gen_range(0..field.size() as u64)))
            .collect();
        let word = code.encode(&data).expect("data in range");
        let pattern = random_pattern(m, n, max_weight, &mut rng);
        let mut erased = vec![false; code.length()];
        let mut received = word.clone();
        for i in pattern.flat() {
            erased[i] = true;
            received[i] = FieldElement::ZERO;
        }
        let ok = correctable(field, code.parity_check(), &pattern.flat());
        report.correctable += ok as usize;
        let what = match (ok, code.erasure_decode(&received, &erased)) {
            (true, Ok(out)) if out == word => None,
            (true, Ok(_)) => Some("decoded word differs from the codeword".to_string()),
            (true, Err(e)) => Some(format!("correctable pattern rejected: {e}")),
            (false, Ok(_)) => Some("decoded a pattern the oracle calls ambiguous".to_string()),
            (false, Err(_)) => None,
        };
        if ok && what.is_none() {
            report.decoded += 1;
        }
        if let Some(what) = what {
            report.discrepancies.push(Discrepancy {
                trial,
                trial_seed,
                pattern,
                what,
            });
        }
    }
    report
}
