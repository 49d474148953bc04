//! Sparse and bit-packed linear algebra over GF(2).
//!
//! [`BinaryMatrix`] stores rows as sorted column indices, which is the right
//! shape for the very sparse boundary operators this crate manipulates
//! (instances reach ~10^5 x 10^5 with 3 entries per column). Elimination
//! converts rows to bit-packed form on demand; [`Echelon`] keeps the reduced
//! form around so that repeated solves and span queries are cheap.

use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum Gf2Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("entry ({row}, {col}) out of range for a {n_rows}x{n_cols} matrix")]
    EntryOutOfRange {
        row: usize,
        col: usize,
        n_rows: usize,
        n_cols: usize,
    },
    #[error("duplicate entry ({0}, {1})")]
    DuplicateEntry(usize, usize),
    #[error("enumeration budget exceeded: need {required} candidates, budget is {budget}")]
    BudgetExceeded { required: u128, budget: u64 },
    #[error("bad matrix text: {0}")]
    BadText(String),
}

const WORD_BITS: usize = 64;

fn words_for(len: usize) -> usize {
    len.div_ceil(WORD_BITS)
}

/// A vector over GF(2), bit-packed.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BitVector {
    len: usize,
    words: Vec<u64>,
}

impl BitVector {
    pub fn zeros(len: usize) -> Self {
        BitVector {
            len,
            words: vec![0; words_for(len)],
        }
    }

    pub fn from_support(len: usize, support: &[usize]) -> Self {
        let mut v = Self::zeros(len);
        for &i in support {
            assert!(i < len, "support index {i} out of range for length {len}");
            v.set(i, true);
        }
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        self.words[i / WORD_BITS] >> (i % WORD_BITS) & 1 == 1
    }

    pub fn set(&mut self, i: usize, value: bool) {
        debug_assert!(i < self.len);
        let mask = 1u64 << (i % WORD_BITS);
        if value {
            self.words[i / WORD_BITS] |= mask;
        } else {
            self.words[i / WORD_BITS] &= !mask;
        }
    }

    pub fn flip(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.words[i / WORD_BITS] ^= 1u64 << (i % WORD_BITS);
    }

    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn xor_assign(&mut self, other: &BitVector) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn xor(&self, other: &BitVector) -> BitVector {
        let mut out = self.clone();
        out.xor_assign(other);
        out
    }

    /// Parity of the intersection of the two supports.
    pub fn dot(&self, other: &BitVector) -> bool {
        debug_assert_eq!(self.len, other.len);
        self.words
            .iter()
            .zip(&other.words)
            .fold(0u32, |acc, (a, b)| acc ^ ((a & b).count_ones() & 1))
            == 1
    }

    /// Lowest set bit, if any.
    pub fn leading_bit(&self) -> Option<usize> {
        for (wi, &w) in self.words.iter().enumerate() {
            if w != 0 {
                return Some(wi * WORD_BITS + w.trailing_zeros() as usize);
            }
        }
        None
    }

    pub fn support(&self) -> Vec<usize> {
        self.iter_support().collect()
    }

    pub fn iter_support(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let b = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(wi * WORD_BITS + b)
                }
            })
        })
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "BitVector(len={}, support={:?})",
            self.len,
            self.support()
        )
    }
}

/// A sparse matrix over GF(2): rows are sorted lists of column indices.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BinaryMatrix {
    n_rows: usize,
    n_cols: usize,
    rows: Vec<Vec<u32>>,
}

impl BinaryMatrix {
    pub fn zeros(n_rows: usize, n_cols: usize) -> Self {
        BinaryMatrix {
            n_rows,
            n_cols,
            rows: vec![Vec::new(); n_rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        BinaryMatrix {
            n_rows: n,
            n_cols: n,
            rows: (0..n as u32).map(|i| vec![i]).collect(),
        }
    }

    /// Builds a matrix from per-row column lists. Rows are sorted here;
    /// duplicate entries within a row are rejected.
    pub fn from_rows(n_rows: usize, n_cols: usize, rows: Vec<Vec<u32>>) -> Result<Self, Gf2Error> {
        if rows.len() != n_rows {
            return Err(Gf2Error::DimensionMismatch(format!(
                "expected {n_rows} rows, got {}",
                rows.len()
            )));
        }
        let mut rows = rows;
        for (r, row) in rows.iter_mut().enumerate() {
            row.sort_unstable();
            for w in row.windows(2) {
                if w[0] == w[1] {
                    return Err(Gf2Error::DuplicateEntry(r, w[0] as usize));
                }
            }
            if let Some(&last) = row.last() {
                if last as usize >= n_cols {
                    return Err(Gf2Error::EntryOutOfRange {
                        row: r,
                        col: last as usize,
                        n_rows,
                        n_cols,
                    });
                }
            }
        }
        Ok(BinaryMatrix {
            n_rows,
            n_cols,
            rows,
        })
    }

    pub fn from_entries(
        n_rows: usize,
        n_cols: usize,
        entries: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self, Gf2Error> {
        let mut rows = vec![Vec::new(); n_rows];
        for (r, c) in entries {
            if r >= n_rows || c >= n_cols {
                return Err(Gf2Error::EntryOutOfRange {
                    row: r,
                    col: c,
                    n_rows,
                    n_cols,
                });
            }
            rows[r].push(c as u32);
        }
        Self::from_rows(n_rows, n_cols, rows)
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn row(&self, r: usize) -> &[u32] {
        &self.rows[r]
    }

    pub fn row_weight(&self, r: usize) -> usize {
        self.rows[r].len()
    }

    pub fn max_row_weight(&self) -> usize {
        self.rows.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn col_weights(&self) -> Vec<usize> {
        let mut w = vec![0; self.n_cols];
        for row in &self.rows {
            for &c in row {
                w[c as usize] += 1;
            }
        }
        w
    }

    pub fn entry_count(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    /// Entries in row-major order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(r, row)| row.iter().map(move |&c| (r, c as usize)))
    }

    pub fn transpose(&self) -> BinaryMatrix {
        let mut rows = vec![Vec::new(); self.n_cols];
        for (r, row) in self.rows.iter().enumerate() {
            for &c in row {
                rows[c as usize].push(r as u32);
            }
        }
        BinaryMatrix {
            n_rows: self.n_cols,
            n_cols: self.n_rows,
            rows,
        }
    }

    pub fn row_as_bitvector(&self, r: usize) -> BitVector {
        let mut v = BitVector::zeros(self.n_cols);
        for &c in &self.rows[r] {
            v.set(c as usize, true);
        }
        v
    }

    /// M * v over GF(2).
    pub fn mul_vec(&self, v: &BitVector) -> BitVector {
        assert_eq!(
            v.len(),
            self.n_cols,
            "mul_vec: vector length {} vs {} columns",
            v.len(),
            self.n_cols
        );
        let mut out = BitVector::zeros(self.n_rows);
        for (r, row) in self.rows.iter().enumerate() {
            let mut parity = false;
            for &c in row {
                parity ^= v.get(c as usize);
            }
            out.set(r, parity);
        }
        out
    }

    pub fn packed_rows(&self) -> Vec<BitVector> {
        (0..self.n_rows).map(|r| self.row_as_bitvector(r)).collect()
    }
}

impl fmt::Debug for BinaryMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BinaryMatrix {}x{}", self.n_rows, self.n_cols)?;
        for row in &self.rows {
            writeln!(f, "  {row:?}")?;
        }
        Ok(())
    }
}

/// Matrix text format: header `rows cols`, then one `r c` pair per line,
/// sorted row-major.
pub fn matrix_to_text(m: &BinaryMatrix) -> String {
    let mut s = format!("{} {}\n", m.n_rows(), m.n_cols());
    for (r, c) in m.entries() {
        s.push_str(&format!("{r} {c}\n"));
    }
    s
}

pub fn matrix_from_text(text: &str) -> Result<BinaryMatrix, Gf2Error> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines
        .next()
        .ok_or_else(|| Gf2Error::BadText("empty input".into()))?;
    let dims: Vec<usize> = header
        .split_whitespace()
        .map(|t| {
            t.parse()
                .map_err(|_| Gf2Error::BadText(format!("bad header `{header}`")))
        })
        .collect::<Result<_, _>>()?;
    if dims.len() != 2 {
        return Err(Gf2Error::BadText(format!("bad header `{header}`")));
    }
    let mut entries = Vec::new();
    for line in lines {
        let pair: Vec<usize> = line
            .split_whitespace()
            .map(|t| {
                t.parse()
                    .map_err(|_| Gf2Error::BadText(format!("bad entry `{line}`")))
            })
            .collect::<Result<_, _>>()?;
        if pair.len() != 2 {
            return Err(Gf2Error::BadText(format!("bad entry `{line}`")));
        }
        entries.push((pair[0], pair[1]));
    }
    BinaryMatrix::from_entries(dims[0], dims[1], entries)
}

/// Text format for a bit vector: header `length`, then one support index per
/// line, sorted.
pub fn vector_to_text(v: &BitVector) -> String {
    let mut s = format!("{}\n", v.len());
    for i in v.iter_support() {
        s.push_str(&format!("{i}\n"));
    }
    s
}

pub fn vector_from_text(text: &str) -> Result<BitVector, Gf2Error> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let len: usize = lines
        .next()
        .ok_or_else(|| Gf2Error::BadText("empty input".into()))?
        .trim()
        .parse()
        .map_err(|_| Gf2Error::BadText("bad length header".into()))?;
    let mut v = BitVector::zeros(len);
    for line in lines {
        let i: usize = line
            .trim()
            .parse()
            .map_err(|_| Gf2Error::BadText(format!("bad index `{line}`")))?;
        if i >= len {
            return Err(Gf2Error::BadText(format!("index {i} out of range {len}")));
        }
        v.set(i, true);
    }
    Ok(v)
}

/// Reduced row echelon form, with optional row-operation transform for
/// solving. Pivoting is leftmost-nonzero column, first available row, so
/// echelon data is reproducible across runs.
pub struct Echelon {
    n_cols: usize,
    n_input_rows: usize,
    rows: Vec<BitVector>,
    pivots: Vec<usize>,
    /// transform[i] expresses echelon row i as a combination of input rows.
    transform: Option<Vec<BitVector>>,
}

impl Echelon {
    pub fn new(m: &BinaryMatrix, with_transform: bool) -> Self {
        let mut e = Echelon {
            n_cols: m.n_cols(),
            n_input_rows: m.n_rows(),
            rows: Vec::new(),
            pivots: Vec::new(),
            transform: with_transform.then(Vec::new),
        };
        for r in 0..m.n_rows() {
            let combo = with_transform.then(|| {
                let mut c = BitVector::zeros(m.n_rows());
                c.set(r, true);
                c
            });
            e.insert(m.row_as_bitvector(r), combo);
        }
        e
    }

    pub fn from_packed_rows(n_cols: usize, rows: impl IntoIterator<Item = BitVector>) -> Self {
        let mut e = Echelon {
            n_cols,
            n_input_rows: 0,
            rows: Vec::new(),
            pivots: Vec::new(),
            transform: None,
        };
        for row in rows {
            e.n_input_rows += 1;
            e.insert(row, None);
        }
        e
    }

    fn insert(&mut self, mut row: BitVector, mut combo: Option<BitVector>) {
        assert_eq!(row.len(), self.n_cols);
        // Fully reduce against current pivots.
        for (i, &p) in self.pivots.iter().enumerate() {
            if row.get(p) {
                row.xor_assign(&self.rows[i]);
                if let (Some(c), Some(t)) = (combo.as_mut(), self.transform.as_ref()) {
                    c.xor_assign(&t[i]);
                }
            }
        }
        let Some(lead) = row.leading_bit() else {
            return;
        };
        // Back-eliminate the new pivot so the form stays fully reduced.
        for j in 0..self.rows.len() {
            if self.rows[j].get(lead) {
                self.rows[j].xor_assign(&row);
                if let (Some(c), Some(t)) = (combo.as_ref(), self.transform.as_mut()) {
                    t[j].xor_assign(c);
                }
            }
        }
        let i = self.pivots.binary_search(&lead).unwrap_err();
        self.pivots.insert(i, lead);
        self.rows.insert(i, row);
        if let (Some(c), Some(t)) = (combo, self.transform.as_mut()) {
            t.insert(i, c);
        }
    }

    /// Grows the echelon by one row; returns true if the rank increased.
    /// No transform tracking in this mode.
    pub fn grow(&mut self, row: BitVector) -> bool {
        let before = self.rows.len();
        self.n_input_rows += 1;
        self.insert(row, None);
        self.rows.len() > before
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn rows(&self) -> &[BitVector] {
        &self.rows
    }

    /// Canonical coset representative of `v + rowspace`: supported off the
    /// pivot columns, zero iff v is in the row space. Linear in v.
    pub fn reduce(&self, v: &BitVector) -> BitVector {
        let mut v = v.clone();
        for (i, &p) in self.pivots.iter().enumerate() {
            if v.get(p) {
                v.xor_assign(&self.rows[i]);
            }
        }
        v
    }

    pub fn contains(&self, v: &BitVector) -> bool {
        self.reduce(v).is_zero()
    }

    /// Coordinates of v in terms of the original input rows, if v is in the
    /// row space. Requires transform tracking.
    pub fn express(&self, v: &BitVector) -> Option<BitVector> {
        let t = self
            .transform
            .as_ref()
            .expect("express() requires an Echelon built with transforms");
        let mut v = v.clone();
        let mut combo = BitVector::zeros(self.n_input_rows);
        for (i, &p) in self.pivots.iter().enumerate() {
            if v.get(p) {
                v.xor_assign(&self.rows[i]);
                combo.xor_assign(&t[i]);
            }
        }
        v.is_zero().then_some(combo)
    }
}

/// A reusable solver for `M x = b` built once from M.
pub struct Solver {
    echelon: Echelon,
}

impl Solver {
    pub fn new(m: &BinaryMatrix) -> Self {
        // Solving M x = b row-reduces the transpose: x coordinates come from
        // expressing b in the column space of M.
        Solver {
            echelon: Echelon::new(&m.transpose(), true),
        }
    }

    /// Any solution of `M x = b`, or None if the system is inconsistent.
    pub fn solve(&self, b: &BitVector) -> Option<BitVector> {
        self.echelon.express(b)
    }
}

pub fn rank(m: &BinaryMatrix) -> usize {
    Echelon::new(m, false).rank()
}

/// A basis of the right kernel `{v : M v = 0}`, deterministic given M.
pub fn kernel_basis(m: &BinaryMatrix) -> Vec<BitVector> {
    let e = Echelon::new(m, false);
    let pivots = e.pivots();
    let mut is_pivot = vec![false; m.n_cols()];
    for &p in pivots {
        is_pivot[p] = true;
    }
    let mut basis = Vec::new();
    for free in 0..m.n_cols() {
        if is_pivot[free] {
            continue;
        }
        let mut v = BitVector::zeros(m.n_cols());
        v.set(free, true);
        for (i, &p) in pivots.iter().enumerate() {
            if e.rows()[i].get(free) {
                v.set(p, true);
            }
        }
        basis.push(v);
    }
    debug_assert!(basis.iter().all(|v| m.mul_vec(v).is_zero()));
    basis
}

pub fn solve(m: &BinaryMatrix, b: &BitVector) -> Option<BitVector> {
    assert_eq!(b.len(), m.n_rows(), "solve: rhs length mismatch");
    Solver::new(m).solve(b)
}

/// True iff v is a GF(2) combination of the rows of `rows`.
pub fn in_span(rows: &BinaryMatrix, v: &BitVector) -> bool {
    assert_eq!(v.len(), rows.n_cols(), "in_span: length mismatch");
    Echelon::new(rows, false).contains(v)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CosetMode {
    /// Every element of the coset was enumerated.
    Exhaustive,
    /// Candidate words of weight <= cap were enumerated.
    WeightBounded,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub enum CosetMin {
    Found {
        weight: usize,
        witness: BitVector,
        mode: CosetMode,
    },
    /// Weight-bounded search proved the minimum exceeds `cap`.
    ExceedsCap { cap: usize },
}

/// Minimum Hamming weight over the coset `{shift + w : w in span(rows)}`.
///
/// Two modes, picked by the budget: full Gray-code enumeration of the coset
/// when `2^dim` fits the budget, otherwise enumeration of all words of weight
/// at most `cap` with a span membership test each. The chosen mode is
/// reported so callers can label the number correctly.
pub fn min_weight_coset(
    span_rows: &BinaryMatrix,
    shift: &BitVector,
    cap: usize,
    budget: u64,
) -> Result<CosetMin, Gf2Error> {
    assert_eq!(
        shift.len(),
        span_rows.n_cols(),
        "min_weight_coset: length mismatch"
    );
    let echelon = Echelon::new(span_rows, false);
    let dim = echelon.rank();
    if dim < 64 && (1u128 << dim) <= budget as u128 {
        return Ok(exhaustive_coset_min(&echelon, shift));
    }
    // Weight-bounded fallback: budget-check the candidate count first.
    let n = shift.len() as u128;
    let refusal = Gf2Error::BudgetExceeded {
        required: 1u128 << dim.min(127),
        budget,
    };
    let mut candidates: u128 = 0;
    let mut binom: u128 = 1;
    for k in 1..=cap.min(shift.len()) {
        binom = match binom.checked_mul(n - k as u128 + 1) {
            Some(x) => x / k as u128,
            None => return Err(refusal),
        };
        candidates = candidates.saturating_add(binom);
        if candidates > budget as u128 {
            return Err(refusal);
        }
    }
    Ok(weight_bounded_coset_min(&echelon, shift, cap))
}

fn exhaustive_coset_min(echelon: &Echelon, shift: &BitVector) -> CosetMin {
    let dim = echelon.rank();
    let mut current = shift.clone();
    let mut best_weight = current.weight();
    let mut best = current.clone();
    // Gray-code walk: flip exactly one basis row per step.
    for g in 1u64..(1u64 << dim) {
        let bit = g.trailing_zeros() as usize;
        current.xor_assign(&echelon.rows()[bit]);
        let w = current.weight();
        if w < best_weight {
            best_weight = w;
            best = current.clone();
        }
    }
    CosetMin::Found {
        weight: best_weight,
        witness: best,
        mode: CosetMode::Exhaustive,
    }
}

fn weight_bounded_coset_min(echelon: &Echelon, shift: &BitVector, cap: usize) -> CosetMin {
    let n = shift.len();
    // v is in the coset iff reduce(v) == reduce(shift).
    let residual_target = echelon.reduce(shift);
    if residual_target.is_zero() {
        return CosetMin::Found {
            weight: 0,
            witness: BitVector::zeros(n),
            mode: CosetMode::WeightBounded,
        };
    }
    for weight in 1..=cap.min(n) {
        let mut indices: Vec<usize> = (0..weight).collect();
        loop {
            let v = BitVector::from_support(n, &indices);
            if echelon.reduce(&v) == residual_target {
                return CosetMin::Found {
                    weight,
                    witness: v,
                    mode: CosetMode::WeightBounded,
                };
            }
            if !next_combination(&mut indices, n) {
                break;
            }
        }
    }
    CosetMin::ExceedsCap { cap }
}

/// Advances `idx` to the next k-combination of {0..n} in lexicographic
/// order; false once exhausted.
pub(crate) fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let k = idx.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if idx[i] < n - k + i {
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}
