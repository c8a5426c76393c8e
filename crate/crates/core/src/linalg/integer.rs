use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{structural, Result};

/// Dense matrix of arbitrary-precision integers, row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct IntegerMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl fmt::Debug for IntegerMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntegerMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|c| self[(r, c)].to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl std::ops::Index<(usize, usize)> for IntegerMatrix {
    type Output = BigInt;
    fn index(&self, (r, c): (usize, usize)) -> &BigInt {
        &self.data[r * self.cols + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntegerMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut BigInt {
        &mut self.data[r * self.cols + c]
    }
}

impl IntegerMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntegerMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_rows<T: Into<BigInt> + Clone>(rows: &[Vec<T>]) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        let mut data = Vec::with_capacity(nrows * ncols);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != ncols {
                return Err(structural!("row {i} has length {} instead of {ncols}", r.len()));
            }
            data.extend(r.iter().cloned().map(Into::into));
        }
        Ok(IntegerMatrix { rows: nrows, cols: ncols, data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, r: usize) -> &[BigInt] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t[(c, r)] = self[(r, c)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntegerMatrix) -> Result<Self> {
        if self.cols != other.rows {
            return Err(structural!(
                "cannot multiply {}x{} by {}x{}",
                self.rows,
                self.cols,
                other.rows,
                other.cols
            ));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(r, k)];
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = &other[(k, c)];
                    if !b.is_zero() {
                        out[(r, c)] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)].clone()).collect()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for r in 0..self.rows {
            self.data.swap(r * self.cols + a, r * self.cols + b);
        }
    }

    /// row[dst] += k * row[src]
    fn add_row_multiple(&mut self, dst: usize, src: usize, k: &BigInt) {
        for c in 0..self.cols {
            let v = &self.data[src * self.cols + c] * k;
            if !v.is_zero() {
                self.data[dst * self.cols + c] += v;
            }
        }
    }

    /// col[dst] += k * col[src]
    fn add_col_multiple(&mut self, dst: usize, src: usize, k: &BigInt) {
        for r in 0..self.rows {
            let v = &self.data[r * self.cols + src] * k;
            if !v.is_zero() {
                self.data[r * self.cols + dst] += v;
            }
        }
    }

    fn negate_row(&mut self, r: usize) {
        for c in 0..self.cols {
            let v = &mut self.data[r * self.cols + c];
            *v = -&*v;
        }
    }
}

/// Result of [`smith_normal_form`]: `u · a · v = d`.
#[derive(Debug, Clone)]
pub struct SmithDecomposition {
    pub d: IntegerMatrix,
    pub u: IntegerMatrix,
    pub v: IntegerMatrix,
}

impl SmithDecomposition {
    /// Nonzero diagonal entries, in order (each divides the next).
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        self.d.diagonal().into_iter().filter(|x| !x.is_zero()).collect()
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors().len()
    }
}

/// Smith normal form with unimodular transforms.
pub fn smith_normal_form(a: &IntegerMatrix) -> SmithDecomposition {
    let mut d = a.clone();
    let mut u = IntegerMatrix::identity(a.rows);
    let mut v = IntegerMatrix::identity(a.cols);
    smith_in_place(&mut d, Some((&mut u, &mut v)));
    SmithDecomposition { d, u, v }
}

/// Diagonal of the Smith normal form, without transforms.
pub fn smith_diagonal(a: &IntegerMatrix) -> Vec<BigInt> {
    let mut d = a.clone();
    smith_in_place(&mut d, None);
    d.diagonal().into_iter().filter(|x| !x.is_zero()).collect()
}

fn smith_in_place(d: &mut IntegerMatrix, mut track: Option<(&mut IntegerMatrix, &mut IntegerMatrix)>) {
    let (m, n) = (d.rows, d.cols);
    for t in 0..m.min(n) {
        loop {
            // smallest nonzero entry of the trailing block becomes the pivot
            let mut best: Option<(usize, usize)> = None;
            for r in t..m {
                for c in t..n {
                    let x = &d[(r, c)];
                    if x.is_zero() {
                        continue;
                    }
                    if best.is_none_or(|(br, bc)| x.abs() < d[(br, bc)].abs()) {
                        best = Some((r, c));
                        if x.abs().is_one() {
                            break;
                        }
                    }
                }
            }
            let Some((pr, pc)) = best else { return };
            d.swap_rows(t, pr);
            d.swap_cols(t, pc);
            if let Some((u, v)) = track.as_mut() {
                u.swap_rows(t, pr);
                v.swap_cols(t, pc);
            }
            let pivot = d[(t, t)].clone();
            let mut clean = true;
            for r in t + 1..m {
                if d[(r, t)].is_zero() {
                    continue;
                }
                let q = -(d[(r, t)].div_floor(&pivot));
                d.add_row_multiple(r, t, &q);
                if let Some((u, _)) = track.as_mut() {
                    u.add_row_multiple(r, t, &q);
                }
                if !d[(r, t)].is_zero() {
                    clean = false;
                }
            }
            for c in t + 1..n {
                if d[(t, c)].is_zero() {
                    continue;
                }
                let q = -(d[(t, c)].div_floor(&pivot));
                d.add_col_multiple(c, t, &q);
                if let Some((_, v)) = track.as_mut() {
                    v.add_col_multiple(c, t, &q);
                }
                if !d[(t, c)].is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            // divisibility: fold an offending row into the pivot row
            let mut offending = None;
            'search: for r in t + 1..m {
                for c in t + 1..n {
                    if !d[(r, c)].is_multiple_of(&pivot) {
                        offending = Some(r);
                        break 'search;
                    }
                }
            }
            match offending {
                Some(r) => {
                    let one = BigInt::one();
                    d.add_row_multiple(t, r, &one);
                    if let Some((u, _)) = track.as_mut() {
                        u.add_row_multiple(t, r, &one);
                    }
                }
                None => {
                    if pivot.is_negative() {
                        d.negate_row(t);
                        if let Some((u, _)) = track.as_mut() {
                            u.negate_row(t);
                        }
                    }
                    break;
                }
            }
        }
    }
}

/// Cokernel of the sublattice of `Z^dim` spanned by `generators`.
///
/// Returns the free rank and the torsion invariant factors (all > 1). The
/// lattice is accumulated in echelon form one generator at a time, so the
/// number of generators may far exceed `dim`.
pub fn lattice_cokernel<I>(dim: usize, generators: I) -> (usize, Vec<BigInt>)
where
    I: IntoIterator<Item = Vec<(usize, BigInt)>>,
{
    let mut basis: Vec<Option<Vec<BigInt>>> = vec![None; dim];
    for sparse in generators {
        let mut v = vec![BigInt::zero(); dim];
        for (i, c) in sparse {
            v[i] += c;
        }
        insert_echelon(&mut basis, v);
    }
    let rows: Vec<Vec<BigInt>> = basis.into_iter().flatten().collect();
    let rank = rows.len();
    if rank == 0 {
        return (dim, Vec::new());
    }
    let m = IntegerMatrix::from_rows(&rows).expect("echelon rows share a length");
    let torsion = smith_diagonal(&m).into_iter().filter(|x| !x.is_one()).collect();
    (dim - rank, torsion)
}

fn insert_echelon(basis: &mut [Option<Vec<BigInt>>], mut v: Vec<BigInt>) {
    let mut start = 0;
    loop {
        let Some(k) = (start..v.len()).find(|&i| !v[i].is_zero()) else { return };
        match &mut basis[k] {
            slot @ None => {
                if v[k].is_negative() {
                    v.iter_mut().for_each(|x| *x = -&*x);
                }
                *slot = Some(v);
                return;
            }
            Some(b) => {
                if v[k].is_multiple_of(&b[k]) {
                    let q = v[k].div_floor(&b[k]);
                    for i in k..v.len() {
                        if !b[i].is_zero() {
                            let t = &b[i] * &q;
                            v[i] -= t;
                        }
                    }
                } else {
                    let e = b[k].extended_gcd(&v[k]);
                    let (bk_g, vk_g) = (&b[k] / &e.gcd, &v[k] / &e.gcd);
                    let mut nb = Vec::with_capacity(v.len());
                    let mut nv = Vec::with_capacity(v.len());
                    for i in 0..v.len() {
                        nb.push(&e.x * &b[i] + &e.y * &v[i]);
                        nv.push(&vk_g * &b[i] - &bk_g * &v[i]);
                    }
                    if nb[k].is_negative() {
                        nb.iter_mut().for_each(|x| *x = -&*x);
                    }
                    *b = nb;
                    v = nv;
                }
                start = k + 1;
            }
        }
    }
}
