use crate::field::FieldElement;

/// An `m x n` array of symbols, some of which may be erased.
///
/// Erased cells keep a value (zero unless set otherwise) so that
/// arithmetic over whole rows stays simple; only the mask is meaningful.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolArray {
    m: usize,
    n: usize,
    values: Vec<FieldElement>,
    erased: Vec<bool>,
}

impl SymbolArray {
    pub fn zeros(m: usize, n: usize) -> Self {
        SymbolArray {
            m,
            n,
            values: vec![FieldElement::ZERO; m * n],
            erased: vec![false; m * n],
        }
    }

    /// Builds from rows where `None` marks an erasure. Rows must have equal
    /// length.
    pub fn from_rows(rows: &[Vec<Option<FieldElement>>]) -> Option<Self> {
        let m = rows.len();
        let n = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != n) {
            return None;
        }
        let mut a = SymbolArray::zeros(m, n);
        for (r, row) in rows.iter().enumerate() {
            for (c, x) in row.iter().enumerate() {
                match x {
                    Some(v) => a.set(r, c, *v),
                    None => a.erase(r, c),
                }
            }
        }
        Some(a)
    }

    pub fn from_values(m: usize, n: usize, values: Vec<FieldElement>) -> Option<Self> {
        if values.len() != m * n {
            return None;
        }
        Some(SymbolArray {
            m,
            n,
            values,
            erased: vec![false; m * n],
        })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// The symbol at `(r, c)`, or `None` if erased.
    pub fn get(&self, r: usize, c: usize) -> Option<FieldElement> {
        let i = r * self.n + c;
        (!self.erased[i]).then_some(self.values[i])
    }

    /// Sets a symbol and clears its erasure flag.
    pub fn set(&mut self, r: usize, c: usize, v: FieldElement) {
        let i = r * self.n + c;
        self.values[i] = v;
        self.erased[i] = false;
    }

    pub fn erase(&mut self, r: usize, c: usize) {
        let i = r * self.n + c;
        self.values[i] = FieldElement::ZERO;
        self.erased[i] = true;
    }

    pub fn is_erased(&self, r: usize, c: usize) -> bool {
        self.erased[r * self.n + c]
    }

    /// Row values, with erased cells reading as zero.
    pub fn row(&self, r: usize) -> &[FieldElement] {
        &self.values[r * self.n..(r + 1) * self.n]
    }

    /// Row-major values, with erased cells reading as zero.
    pub fn values(&self) -> &[FieldElement] {
        &self.values
    }

    pub fn erased_count(&self) -> usize {
        self.erased.iter().filter(|&&e| e).count()
    }

    pub fn erased_in_row(&self, r: usize) -> Vec<usize> {
        (0..self.n).filter(|&c| self.is_erased(r, c)).collect()
    }

    /// Erased cells in row-major order.
    pub fn erased_positions(&self) -> Vec<(usize, usize)> {
        (0..self.m * self.n)
            .filter(|&i| self.erased[i])
            .map(|i| (i / self.n, i % self.n))
            .collect()
    }

    pub fn erasures(&self) -> ErasurePattern {
        ErasurePattern::new(self.m, self.n, self.erased_positions())
    }

    pub fn apply_erasures(&mut self, pattern: &ErasurePattern) {
        for &(r, c) in pattern.positions() {
            self.erase(r, c);
        }
    }

    pub fn profile(&self) -> ErasureProfile {
        ErasureProfile::from_counts((0..self.m).map(|r| self.erased_in_row(r).len()).collect())
    }

    pub fn transpose(&self) -> SymbolArray {
        let mut t = SymbolArray::zeros(self.n, self.m);
        for r in 0..self.m {
            for c in 0..self.n {
                let i = r * self.n + c;
                let j = c * self.m + r;
                t.values[j] = self.values[i];
                t.erased[j] = self.erased[i];
            }
        }
        t
    }
}

/// A set of cell positions in an `m x n` array, kept in row-major order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ErasurePattern {
    m: usize,
    n: usize,
    positions: Vec<(usize, usize)>,
}

impl ErasurePattern {
    /// Sorts and deduplicates. Panics on an out-of-range position.
    pub fn new(m: usize, n: usize, mut positions: Vec<(usize, usize)>) -> Self {
        assert!(
            positions.iter().all(|&(r, c)| r < m && c < n),
            "position outside a {m}x{n} array"
        );
        positions.sort_unstable();
        positions.dedup();
        ErasurePattern { m, n, positions }
    }

    /// Pattern from flat row-major indices `r * n + c`.
    pub fn from_flat(m: usize, n: usize, flat: &[usize]) -> Self {
        ErasurePattern::new(m, n, flat.iter().map(|&i| (i / n, i % n)).collect())
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn positions(&self) -> &[(usize, usize)] {
        &self.positions
    }

    pub fn flat(&self) -> Vec<usize> {
        self.positions.iter().map(|&(r, c)| r * self.n + c).collect()
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn contains(&self, r: usize, c: usize) -> bool {
        self.positions.binary_search(&(r, c)).is_ok()
    }

    pub fn profile(&self) -> ErasureProfile {
        let mut counts = vec![0; self.m];
        for &(r, _) in &self.positions {
            counts[r] += 1;
        }
        ErasureProfile::from_counts(counts)
    }

    pub fn transpose(&self) -> ErasurePattern {
        ErasurePattern::new(self.n, self.m, self.positions.iter().map(|&(r, c)| (c, r)).collect())
    }
}

/// Per-row erasure counts, sorted non-increasing; ties keep ascending row
/// order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ErasureProfile {
    entries: Vec<(usize, usize)>,
}

impl ErasureProfile {
    pub fn from_counts(counts: Vec<usize>) -> Self {
        let mut entries: Vec<(usize, usize)> = counts.into_iter().enumerate().collect();
        entries.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
        ErasureProfile { entries }
    }

    /// `(row, count)` pairs in sorted order.
    pub fn entries(&self) -> &[(usize, usize)] {
        &self.entries
    }

    pub fn counts(&self) -> Vec<usize> {
        self.entries.iter().map(|e| e.1).collect()
    }

    pub fn rows(&self) -> Vec<usize> {
        self.entries.iter().map(|e| e.0).collect()
    }
}
