//! Exact GF(2) linear algebra on bit-packed vectors and column-sparse
//! binary matrices.
//!
//! Everything downstream (code sampling, coset search, the protocol
//! pipelines) reduces to the operations in this module: vector XOR and
//! popcount, sparse matrix-vector products, Gaussian elimination for rank,
//! and streaming enumeration of the solution set of an affine system
//! `H z = t`.
//!
//! All types are immutable after construction and safe to share across
//! threads. Solution streams are restartable: the elimination is done once
//! when the system is solved, and each iterator walks the affine space
//! independently.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// Errors from GF(2) operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Gf2Error {
    /// Operand lengths (or a vector length and a matrix dimension) disagree.
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    /// The affine system `H z = t` has no solution.
    #[error("inconsistent affine system: target is outside the column space")]
    InconsistentSystem,
    /// A bit-string contained something other than '0' or '1'.
    #[error("invalid bit character at position {position}")]
    ParseBit { position: usize },
}

// ============================================================================
// BinaryVector
// ============================================================================

/// A fixed-length bit sequence over GF(2), packed 64 bits per word.
///
/// Bit `i` lives in `words[i / 64]` at position `i % 64`. Trailing bits of
/// the last word are kept at zero so that weight and equality work directly
/// on the words.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BinaryVector {
    words: Vec<u64>,
    len: usize,
}

impl BinaryVector {
    /// All-zeros vector of the given length.
    pub fn zeros(len: usize) -> Self {
        Self {
            words: vec![0; len.div_ceil(64)],
            len,
        }
    }

    /// Vector with ones exactly at `indices` (duplicates cancel mod 2).
    pub fn from_indices(len: usize, indices: &[usize]) -> Self {
        let mut v = Self::zeros(len);
        for &i in indices {
            assert!(i < len, "bit index {i} out of range (len={len})");
            v.flip(i);
        }
        v
    }

    /// Vector from explicit bits.
    pub fn from_bits(bits: &[u8]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b & 1 == 1 {
                v.flip(i);
            }
        }
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Bit `i`.
    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(
            i < self.len,
            "bit index {i} out of range (len={})",
            self.len
        );
        (self.words[i / 64] >> (i % 64)) & 1 == 1
    }

    /// Sets bit `i` to `value`.
    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(
            i < self.len,
            "bit index {i} out of range (len={})",
            self.len
        );
        let mask = 1u64 << (i % 64);
        if value {
            self.words[i / 64] |= mask;
        } else {
            self.words[i / 64] &= !mask;
        }
    }

    /// Flips bit `i`.
    #[inline]
    pub fn flip(&mut self, i: usize) {
        assert!(
            i < self.len,
            "bit index {i} out of range (len={})",
            self.len
        );
        self.words[i / 64] ^= 1u64 << (i % 64);
    }

    /// Number of ones.
    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// In-place XOR with an equal-length vector.
    ///
    /// # Panics
    /// Panics on length mismatch; use [`BinaryVector::xor`] for a checked
    /// variant.
    #[inline]
    pub fn xor_assign(&mut self, other: &BinaryVector) {
        assert_eq!(self.len, other.len, "xor of unequal lengths");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    /// Checked XOR.
    pub fn xor(&self, other: &BinaryVector) -> Result<BinaryVector, Gf2Error> {
        if self.len != other.len {
            return Err(Gf2Error::DimensionMismatch {
                expected: self.len,
                got: other.len,
            });
        }
        let mut out = self.clone();
        out.xor_assign(other);
        Ok(out)
    }

    /// Bitwise complement.
    pub fn complement(&self) -> BinaryVector {
        let mut out = self.clone();
        for w in &mut out.words {
            *w = !*w;
        }
        out.mask_tail();
        out
    }

    /// Indices of the ones, ascending.
    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(move |&i| self.get(i))
    }

    /// Concatenation `self ++ other`.
    pub fn concat(&self, other: &BinaryVector) -> BinaryVector {
        let mut out = BinaryVector::zeros(self.len + other.len);
        for i in self.ones() {
            out.flip(i);
        }
        for i in other.ones() {
            out.flip(self.len + i);
        }
        out
    }

    /// Draws `len` independent fair bits from `rng`.
    pub fn random<R: rand::Rng>(len: usize, rng: &mut R) -> BinaryVector {
        let mut v = BinaryVector::zeros(len);
        for i in 0..len {
            if rng.gen::<bool>() {
                v.flip(i);
            }
        }
        v
    }

    /// Draws `len` fair bits from a fresh ChaCha12 stream seeded with
    /// `seed` (the crate-wide reproducibility convention).
    pub fn random_from_seed(len: usize, seed: u64) -> BinaryVector {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(seed);
        Self::random(len, &mut rng)
    }

    /// Draws `len` independent Bernoulli(`prob`) bits from `rng`.
    pub fn random_bernoulli<R: rand::Rng>(len: usize, prob: f64, rng: &mut R) -> BinaryVector {
        let mut v = BinaryVector::zeros(len);
        for i in 0..len {
            if rng.gen_bool(prob) {
                v.flip(i);
            }
        }
        v
    }

    fn mask_tail(&mut self) {
        let rem = self.len % 64;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }
}

impl fmt::Debug for BinaryVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BinaryVector({self})")
    }
}

impl fmt::Display for BinaryVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for BinaryVector {
    type Err = Gf2Error;

    /// Parses a bitstring such as `"10110"`; character `k` becomes bit `k`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut v = BinaryVector::zeros(s.len());
        for (i, c) in s.chars().enumerate() {
            match c {
                '0' => {}
                '1' => v.flip(i),
                _ => return Err(Gf2Error::ParseBit { position: i }),
            }
        }
        Ok(v)
    }
}

/// Number of positions where `a` and `b` differ.
pub fn hamming_distance(a: &BinaryVector, b: &BinaryVector) -> Result<usize, Gf2Error> {
    if a.len != b.len {
        return Err(Gf2Error::DimensionMismatch {
            expected: a.len,
            got: b.len,
        });
    }
    Ok(a.words
        .iter()
        .zip(&b.words)
        .map(|(x, y)| (x ^ y).count_ones() as usize)
        .sum())
}

// ============================================================================
// SparseBinaryMatrix
// ============================================================================

/// A column-sparse binary matrix: per column, the sorted row indices of
/// its ones.
///
/// Construction resolves repeated placements mod 2, so a stored support
/// never contains duplicates. This makes the with-replacement sampling of
/// the code ensembles exact: placing the same entry twice cancels it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseBinaryMatrix {
    rows: usize,
    cols: usize,
    column_supports: Vec<Vec<u32>>,
}

impl SparseBinaryMatrix {
    /// Builds from per-column row-index placements; repeated indices cancel
    /// mod 2.
    pub fn from_columns(rows: usize, cols: usize, placements: Vec<Vec<u32>>) -> Self {
        assert_eq!(placements.len(), cols, "one placement list per column");
        let column_supports = placements
            .into_iter()
            .map(|p| cancel_mod2(p, rows))
            .collect();
        Self {
            rows,
            cols,
            column_supports,
        }
    }

    /// Builds from per-row column-index placements; repeated indices cancel
    /// mod 2.
    pub fn from_rows(rows: usize, cols: usize, placements: Vec<Vec<u32>>) -> Self {
        assert_eq!(placements.len(), rows, "one placement list per row");
        let mut cols_acc: Vec<Vec<u32>> = vec![Vec::new(); cols];
        for (r, row) in placements.iter().enumerate() {
            for &c in cancel_mod2(row.clone(), cols).iter() {
                cols_acc[c as usize].push(r as u32);
            }
        }
        // row indices were pushed in ascending row order, already sorted
        Self {
            rows,
            cols,
            column_supports: cols_acc,
        }
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            column_supports: vec![Vec::new(); cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            rows: n,
            cols: n,
            column_supports: (0..n as u32).map(|i| vec![i]).collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Sorted row indices of the ones in column `j`.
    pub fn column_support(&self, j: usize) -> &[u32] {
        &self.column_supports[j]
    }

    /// Sorted column indices of the ones in row `i`, materialized per row.
    pub fn row_supports(&self) -> Vec<Vec<u32>> {
        let mut rows_acc: Vec<Vec<u32>> = vec![Vec::new(); self.rows];
        for (j, support) in self.column_supports.iter().enumerate() {
            for &r in support {
                rows_acc[r as usize].push(j as u32);
            }
        }
        rows_acc
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.column_supports[j].binary_search(&(i as u32)).is_ok()
    }

    /// Total number of stored ones.
    pub fn num_ones(&self) -> usize {
        self.column_supports.iter().map(Vec::len).sum()
    }

    pub fn transpose(&self) -> SparseBinaryMatrix {
        SparseBinaryMatrix {
            rows: self.cols,
            cols: self.rows,
            column_supports: self.row_supports(),
        }
    }

    /// Stacks `self` on top of `other` (both over the same column count).
    pub fn stack(&self, other: &SparseBinaryMatrix) -> Result<SparseBinaryMatrix, Gf2Error> {
        if self.cols != other.cols {
            return Err(Gf2Error::DimensionMismatch {
                expected: self.cols,
                got: other.cols,
            });
        }
        let offset = self.rows as u32;
        let column_supports = self
            .column_supports
            .iter()
            .zip(&other.column_supports)
            .map(|(a, b)| {
                let mut s = a.clone();
                s.extend(b.iter().map(|&r| r + offset));
                s
            })
            .collect();
        Ok(SparseBinaryMatrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            column_supports,
        })
    }

    /// Sub-matrix of rows `lo..hi`.
    pub fn row_slice(&self, lo: usize, hi: usize) -> SparseBinaryMatrix {
        assert!(lo <= hi && hi <= self.rows);
        let column_supports = self
            .column_supports
            .iter()
            .map(|s| {
                s.iter()
                    .filter(|&&r| (r as usize) >= lo && (r as usize) < hi)
                    .map(|&r| r - lo as u32)
                    .collect()
            })
            .collect();
        SparseBinaryMatrix {
            rows: hi - lo,
            cols: self.cols,
            column_supports,
        }
    }

    /// Row-vector product `z . M`: output bit `j` is the parity of the
    /// overlap between `z` and column `j`.
    pub fn left_mul(&self, z: &BinaryVector) -> Result<BinaryVector, Gf2Error> {
        if z.len() != self.rows {
            return Err(Gf2Error::DimensionMismatch {
                expected: self.rows,
                got: z.len(),
            });
        }
        let mut out = BinaryVector::zeros(self.cols);
        for (j, support) in self.column_supports.iter().enumerate() {
            let mut parity = false;
            for &r in support {
                parity ^= z.get(r as usize);
            }
            if parity {
                out.flip(j);
            }
        }
        Ok(out)
    }

    /// Matrix-vector product `M . x`: the XOR of the columns selected by `x`.
    pub fn right_mul(&self, x: &BinaryVector) -> Result<BinaryVector, Gf2Error> {
        if x.len() != self.cols {
            return Err(Gf2Error::DimensionMismatch {
                expected: self.cols,
                got: x.len(),
            });
        }
        let mut out = BinaryVector::zeros(self.rows);
        for j in x.ones() {
            for &r in &self.column_supports[j] {
                out.flip(r as usize);
            }
        }
        Ok(out)
    }

    /// GF(2) rank via Gaussian elimination on bit-packed rows.
    pub fn rank(&self) -> usize {
        Elimination::run(self, None).pivots.len()
    }

    /// Solves the affine system `M z = t`, returning the full solution set.
    ///
    /// The elimination is performed once; the returned [`SolutionSet`]
    /// streams all `2^(cols - rank)` solutions in lexicographic order of
    /// the free-variable assignment.
    pub fn solve_affine(&self, t: &BinaryVector) -> Result<SolutionSet, Gf2Error> {
        if t.len() != self.rows {
            return Err(Gf2Error::DimensionMismatch {
                expected: self.rows,
                got: t.len(),
            });
        }
        let elim = Elimination::run(self, Some(t));
        if elim.inconsistent {
            return Err(Gf2Error::InconsistentSystem);
        }
        Ok(elim.into_solution_set(self.cols))
    }
}

fn cancel_mod2(mut placement: Vec<u32>, bound: usize) -> Vec<u32> {
    placement.sort_unstable();
    let mut out = Vec::with_capacity(placement.len());
    let mut i = 0;
    while i < placement.len() {
        let v = placement[i];
        assert!((v as usize) < bound, "index {v} out of range ({bound})");
        let mut run = 1;
        while i + run < placement.len() && placement[i + run] == v {
            run += 1;
        }
        if run % 2 == 1 {
            out.push(v);
        }
        i += run;
    }
    out
}

// ============================================================================
// Elimination and solution streaming
// ============================================================================

struct Elimination {
    /// Reduced rows, bit-packed over the columns.
    reduced: Vec<BinaryVector>,
    /// Reduced right-hand side, one bit per kept row.
    rhs: Vec<bool>,
    /// Pivot column of each kept row, ascending.
    pivots: Vec<usize>,
    inconsistent: bool,
}

impl Elimination {
    fn run(m: &SparseBinaryMatrix, t: Option<&BinaryVector>) -> Elimination {
        let cols = m.cols;
        // densify rows
        let row_supports = m.row_supports();
        let mut rows: Vec<BinaryVector> = row_supports
            .iter()
            .map(|s| {
                let mut v = BinaryVector::zeros(cols);
                for &c in s {
                    v.flip(c as usize);
                }
                v
            })
            .collect();
        let mut rhs: Vec<bool> = match t {
            Some(t) => (0..m.rows).map(|i| t.get(i)).collect(),
            None => vec![false; m.rows],
        };

        let mut pivots = Vec::new();
        let mut next = 0usize;
        for col in 0..cols {
            let Some(p) = (next..rows.len()).find(|&i| rows[i].get(col)) else {
                continue;
            };
            rows.swap(next, p);
            rhs.swap(next, p);
            let (pivot_row, pivot_rhs) = (rows[next].clone(), rhs[next]);
            for i in 0..rows.len() {
                if i != next && rows[i].get(col) {
                    rows[i].xor_assign(&pivot_row);
                    rhs[i] ^= pivot_rhs;
                }
            }
            pivots.push(col);
            next += 1;
            if next == rows.len() {
                break;
            }
        }
        let inconsistent = (next..rows.len()).any(|i| rhs[i]);
        rows.truncate(next);
        rhs.truncate(next);
        Elimination {
            reduced: rows,
            rhs,
            pivots,
            inconsistent,
        }
    }

    fn into_solution_set(self, cols: usize) -> SolutionSet {
        let mut is_pivot = vec![false; cols];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        let free: Vec<usize> = (0..cols).filter(|&c| !is_pivot[c]).collect();

        let mut particular = BinaryVector::zeros(cols);
        for (j, &p) in self.pivots.iter().enumerate() {
            if self.rhs[j] {
                particular.flip(p);
            }
        }
        let basis = free
            .iter()
            .map(|&f| {
                let mut b = BinaryVector::zeros(cols);
                b.flip(f);
                for (j, &p) in self.pivots.iter().enumerate() {
                    if self.reduced[j].get(f) {
                        b.flip(p);
                    }
                }
                b
            })
            .collect();
        SolutionSet { particular, basis }
    }
}

/// The solution set of a consistent affine system `M z = t`.
///
/// Holds a particular solution plus one basis vector of the homogeneous
/// space per free variable (free columns in ascending order). The set has
/// exactly `2^num_free()` elements; [`SolutionSet::iter`] streams them in
/// lexicographic order of the free-variable assignment without
/// materializing the set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolutionSet {
    particular: BinaryVector,
    basis: Vec<BinaryVector>,
}

impl SolutionSet {
    /// The solution with all free variables zero.
    pub fn particular(&self) -> &BinaryVector {
        &self.particular
    }

    /// Homogeneous basis vectors, one per free variable (ascending column).
    pub fn basis(&self) -> &[BinaryVector] {
        &self.basis
    }

    /// Number of free variables; the set holds `2^num_free()` solutions.
    pub fn num_free(&self) -> usize {
        self.basis.len()
    }

    /// The solution at lexicographic index `idx`.
    ///
    /// Bit `j` of the free assignment (free variables ascending) is bit
    /// `num_free()-1-j` of `idx`, so `idx` counts assignments in
    /// lexicographic order.
    pub fn solution_at(&self, idx: u64) -> BinaryVector {
        let nf = self.basis.len();
        assert!(
            nf >= 64 || idx < (1u64 << nf),
            "solution index out of range"
        );
        let mut z = self.particular.clone();
        for (j, b) in self.basis.iter().enumerate() {
            if (idx >> (nf - 1 - j)) & 1 == 1 {
                z.xor_assign(b);
            }
        }
        z
    }

    /// Streams every solution exactly once, lexicographically.
    pub fn iter(&self) -> SolutionIter<'_> {
        assert!(
            self.basis.len() < 64,
            "solution set too large to enumerate ({} free variables)",
            self.basis.len()
        );
        SolutionIter {
            set: self,
            current: self.particular.clone(),
            next_idx: 0,
            total: 1u64 << self.basis.len(),
        }
    }
}

/// Lexicographic solution stream. Consecutive solutions differ by the
/// basis vectors of the counter bits that flip, so stepping is amortized
/// O(1) vector XORs.
pub struct SolutionIter<'a> {
    set: &'a SolutionSet,
    current: BinaryVector,
    next_idx: u64,
    total: u64,
}

impl Iterator for SolutionIter<'_> {
    type Item = BinaryVector;

    fn next(&mut self) -> Option<BinaryVector> {
        if self.next_idx == self.total {
            return None;
        }
        let out = self.current.clone();
        let idx = self.next_idx;
        self.next_idx += 1;
        if self.next_idx < self.total {
            let nf = self.set.basis.len();
            let changed = idx ^ self.next_idx;
            for j in 0..nf {
                if (changed >> (nf - 1 - j)) & 1 == 1 {
                    self.current.xor_assign(&self.set.basis[j]);
                }
            }
        }
        Some(out)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = (self.total - self.next_idx) as usize;
        (left, Some(left))
    }
}

impl ExactSizeIterator for SolutionIter<'_> {}
