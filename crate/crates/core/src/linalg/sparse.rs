use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::linalg::{inverse_mod, FpMatrix, IntegerMatrix};

/// Column-sparse integer matrix used for structure maps and differentials.
///
/// Each column is a sorted list of `(row, value)` with nonzero values. When a
/// modulus is attached, values are kept reduced in `0..p`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SparseMatrix {
    pub rows: usize,
    pub cols: usize,
    pub modulus: Option<u64>,
    pub columns: Vec<Vec<(usize, i64)>>,
}

impl SparseMatrix {
    pub fn zeros(rows: usize, cols: usize, modulus: Option<u64>) -> Self {
        SparseMatrix { rows, cols, modulus, columns: vec![Vec::new(); cols] }
    }

    pub fn identity(n: usize, modulus: Option<u64>) -> Self {
        let mut m = Self::zeros(n, n, modulus);
        for i in 0..n {
            m.columns[i].push((i, 1));
        }
        m
    }

    fn reduce(&self, v: i64) -> i64 {
        match self.modulus {
            Some(p) => v.rem_euclid(p as i64),
            None => v,
        }
    }

    /// Builds a column from unsorted, possibly repeated entries.
    pub fn set_column<I: IntoIterator<Item = (usize, i64)>>(&mut self, c: usize, entries: I) {
        let mut acc: BTreeMap<usize, i64> = BTreeMap::new();
        for (r, v) in entries {
            debug_assert!(r < self.rows);
            *acc.entry(r).or_default() += v;
        }
        self.columns[c] = acc
            .into_iter()
            .filter_map(|(r, v)| {
                let v = self.reduce(v);
                (v != 0).then_some((r, v))
            })
            .collect();
    }

    /// `self · other`
    pub fn compose(&self, other: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in compose");
        let mut out = SparseMatrix::zeros(self.rows, other.cols, self.modulus.or(other.modulus));
        for (j, col) in other.columns.iter().enumerate() {
            let mut entries = Vec::new();
            for &(k, b) in col {
                for &(r, a) in &self.columns[k] {
                    entries.push((r, a * b));
                }
            }
            out.set_column(j, entries);
        }
        out
    }

    /// `self + k · other`
    pub fn add_scaled(&self, other: &SparseMatrix, k: i64) -> SparseMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = SparseMatrix::zeros(self.rows, self.cols, self.modulus.or(other.modulus));
        for j in 0..self.cols {
            let entries = self.columns[j]
                .iter()
                .copied()
                .chain(other.columns[j].iter().map(|&(r, v)| (r, k * v)));
            out.set_column(j, entries);
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(Vec::is_empty)
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(Vec::len).sum()
    }

    /// Row/column permutation: entry (r, c) moves to (row_perm[r], col_perm[c]).
    pub fn permuted(&self, row_perm: &[usize], col_perm: &[usize]) -> SparseMatrix {
        let mut out = SparseMatrix::zeros(self.rows, self.cols, self.modulus);
        for (c, col) in self.columns.iter().enumerate() {
            out.set_column(col_perm[c], col.iter().map(|&(r, v)| (row_perm[r], v)));
        }
        out
    }

    pub fn to_fp(&self, p: u64) -> FpMatrix {
        let mut m = FpMatrix::zeros(p, self.rows, self.cols);
        for (c, col) in self.columns.iter().enumerate() {
            for &(r, v) in col {
                m.set(r, c, v.rem_euclid(p as i64) as u64);
            }
        }
        m
    }

    pub fn to_integer(&self) -> IntegerMatrix {
        let mut m = IntegerMatrix::zeros(self.rows, self.cols);
        for (c, col) in self.columns.iter().enumerate() {
            for &(r, v) in col {
                m[(r, c)] = BigInt::from(v);
            }
        }
        m
    }

    pub fn from_fp(m: &FpMatrix) -> SparseMatrix {
        let mut out = SparseMatrix::zeros(m.rows(), m.cols(), Some(m.p()));
        for c in 0..m.cols() {
            out.columns[c] =
                (0..m.rows()).filter(|&r| m.get(r, c) != 0).map(|r| (r, m.get(r, c) as i64)).collect();
        }
        out
    }
}

/// A sparse vector over F_p: sorted `(index, value)` with values in `1..p`.
pub type SparseVec = Vec<(usize, u64)>;

/// `v + c·w` over F_p.
pub fn sparse_axpy(v: &[(usize, u64)], c: u64, w: &[(usize, u64)], p: u64) -> SparseVec {
    let mut out = Vec::with_capacity(v.len() + w.len());
    let (mut i, mut j) = (0, 0);
    while i < v.len() || j < w.len() {
        let take_v = j == w.len() || (i < v.len() && v[i].0 < w[j].0);
        let take_w = i == v.len() || (j < w.len() && w[j].0 < v[i].0);
        if take_v {
            out.push(v[i]);
            i += 1;
        } else if take_w {
            out.push((w[j].0, c * w[j].1 % p));
            j += 1;
        } else {
            let x = (v[i].1 + c * w[j].1) % p;
            if x != 0 {
                out.push((v[i].0, x));
            }
            i += 1;
            j += 1;
        }
    }
    out.retain(|&(_, x)| x != 0);
    out
}

/// Incremental column reduction over F_p.
///
/// Columns are reduced against earlier pivots keyed by their lowest row
/// index. When `track` is set, each column also carries the combination of
/// input columns it equals, so dependent columns yield kernel vectors.
#[derive(Debug)]
pub struct FpColumnReducer {
    p: u64,
    track: bool,
    pivots: HashMap<usize, (SparseVec, SparseVec)>,
    columns_seen: usize,
    kernel: Vec<SparseVec>,
}

impl FpColumnReducer {
    pub fn new(p: u64, track: bool) -> Self {
        FpColumnReducer { p, track, pivots: HashMap::new(), columns_seen: 0, kernel: Vec::new() }
    }

    /// Adds the next column; returns whether it raised the rank.
    pub fn push(&mut self, column: SparseVec) -> bool {
        let p = self.p;
        let idx = self.columns_seen;
        self.columns_seen += 1;
        let mut v = column;
        let mut combo: SparseVec = if self.track { vec![(idx, 1)] } else { Vec::new() };
        while let Some(&(lead, c)) = v.first() {
            match self.pivots.get(&lead) {
                Some((pv, pc)) => {
                    let k = p - c;
                    v = sparse_axpy(&v, k, pv, p);
                    if self.track {
                        combo = sparse_axpy(&combo, k, pc, p);
                    }
                }
                None => {
                    let inv = inverse_mod(c, p);
                    v.iter_mut().for_each(|e| e.1 = e.1 * inv % p);
                    combo.iter_mut().for_each(|e| e.1 = e.1 * inv % p);
                    self.pivots.insert(lead, (v, combo));
                    return true;
                }
            }
        }
        if self.track {
            self.kernel.push(combo);
        }
        false
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Kernel vectors found so far. The vector found at column `j` has
    /// largest index `j`, with coefficient 1.
    pub fn kernel(&self) -> &[SparseVec] {
        &self.kernel
    }

    pub fn into_kernel(self) -> Vec<SparseVec> {
        self.kernel
    }
}

/// Column `c` of a matrix as a reduced sparse vector.
pub fn fp_column(m: &SparseMatrix, c: usize, p: u64) -> SparseVec {
    m.columns[c]
        .iter()
        .filter_map(|&(r, v)| {
            let x = v.rem_euclid(p as i64) as u64;
            (x != 0).then_some((r, x))
        })
        .collect()
}

/// Rank over F_p.
pub fn sparse_rank(m: &SparseMatrix, p: u64) -> usize {
    let mut red = FpColumnReducer::new(p, false);
    for c in 0..m.cols {
        red.push(fp_column(m, c, p));
    }
    red.rank()
}

/// Null space over F_p, one vector per dependent column (see
/// [`FpColumnReducer::kernel`]).
pub fn sparse_kernel(m: &SparseMatrix, p: u64) -> Vec<SparseVec> {
    let mut red = FpColumnReducer::new(p, true);
    for c in 0..m.cols {
        red.push(fp_column(m, c, p));
    }
    red.into_kernel()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compose_matches_dense() {
        let mut a = SparseMatrix::zeros(2, 3, Some(5));
        a.set_column(0, [(0, 1), (1, 2)]);
        a.set_column(2, [(1, 4)]);
        let mut b = SparseMatrix::zeros(3, 2, Some(5));
        b.set_column(0, [(0, 3), (2, 1)]);
        b.set_column(1, [(1, 1)]);
        let c = a.compose(&b);
        assert_eq!(c.to_fp(5), a.to_fp(5).mul(&b.to_fp(5)));
    }

    #[test]
    fn repeated_entries_accumulate() {
        let mut a = SparseMatrix::zeros(1, 1, Some(3));
        a.set_column(0, [(0, 1), (0, 2)]);
        assert!(a.is_zero());
    }

    #[test]
    fn sparse_rank_and_kernel_match_dense() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let (rows, cols) = (rng.gen_range(1..9), rng.gen_range(1..9));
            let mut m = SparseMatrix::zeros(rows, cols, Some(5));
            for c in 0..cols {
                let mut entries = Vec::new();
                for r in 0..rows {
                    if rng.gen_bool(0.4) {
                        entries.push((r, rng.gen_range(0..5i64)));
                    }
                }
                m.set_column(c, entries);
            }
            let dense = m.to_fp(5);
            assert_eq!(sparse_rank(&m, 5), dense.rank());
            let kernel = sparse_kernel(&m, 5);
            assert_eq!(kernel.len(), cols - dense.rank());
            for k in kernel {
                let mut x = vec![0u64; cols];
                for (i, v) in k {
                    x[i] = v;
                }
                assert!(dense.mul_vec(&x).iter().all(|&y| y == 0));
            }
        }
    }
}
