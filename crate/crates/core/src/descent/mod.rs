//! Cosimplicial graded modules over F_p, their cochain complexes and the
//! E2 page of the associated descent spectral sequence.
//!
//! All structure maps are homogeneous of degree 0, so every complex splits
//! by internal degree `t` and ranks are computed degree by degree.

mod amitsur;
mod cobar;

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{structural, Error, Result};
use crate::graded::Degree;
use crate::linalg::{fp_column, sparse_kernel, sparse_rank, SparseMatrix, SparseVec};

pub use amitsur::{amitsur_complex, RingMapSpec};
pub use cobar::{adams_e2, adams_e2_oracle, cobar_complex, cosimplicial_cobar, HopfComoduleSpec};

/// Default cap on the number of basis elements of one cochain level.
pub const DEFAULT_LEVEL_BOUND: usize = 500_000;

/// Levels `0..=N` of a cosimplicial graded F_p-vector space with explicit
/// cofaces and codegeneracies.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CosimplicialGradedModule {
    p: u64,
    /// Degree of each basis vector, per level.
    levels: Vec<Vec<Degree>>,
    /// `cofaces[n][i]`: level `n` → `n+1`, `0 ≤ i ≤ n+1`.
    cofaces: Vec<Vec<SparseMatrix>>,
    /// `codegeneracies[n][j]`: level `n+1` → `n`, `0 ≤ j ≤ n`.
    codegeneracies: Vec<Vec<SparseMatrix>>,
}

fn reduced(m: SparseMatrix, p: u64) -> SparseMatrix {
    let mut out = SparseMatrix::zeros(m.rows, m.cols, Some(p));
    for (c, col) in m.columns.into_iter().enumerate() {
        out.set_column(c, col);
    }
    out
}

impl CosimplicialGradedModule {
    /// Validates shapes, homogeneity and the cosimplicial identities.
    pub fn new(
        p: u64,
        levels: Vec<Vec<Degree>>,
        cofaces: Vec<Vec<SparseMatrix>>,
        codegeneracies: Vec<Vec<SparseMatrix>>,
    ) -> Result<Self> {
        if levels.is_empty() {
            return Err(structural!("a cosimplicial module needs at least level 0"));
        }
        let top = levels.len() - 1;
        if cofaces.len() != top || codegeneracies.len() != top {
            return Err(structural!("expected structure maps for {top} level transitions"));
        }
        let cofaces: Vec<Vec<SparseMatrix>> =
            cofaces.into_iter().map(|v| v.into_iter().map(|m| reduced(m, p)).collect()).collect();
        let codegeneracies: Vec<Vec<SparseMatrix>> =
            codegeneracies.into_iter().map(|v| v.into_iter().map(|m| reduced(m, p)).collect()).collect();
        let module = CosimplicialGradedModule { p, levels, cofaces, codegeneracies };
        module.check_shapes()?;
        module.check_identities()?;
        Ok(module)
    }

    fn check_shapes(&self) -> Result<()> {
        for n in 0..self.top_level() {
            let (src, dst) = (&self.levels[n], &self.levels[n + 1]);
            if self.cofaces[n].len() != n + 2 || self.codegeneracies[n].len() != n + 1 {
                return Err(structural!("level {n} needs {} cofaces and {} codegeneracies", n + 2, n + 1));
            }
            for (i, d) in self.cofaces[n].iter().enumerate() {
                check_map(d, src, dst).map_err(|e| structural!("coface d^{i} at level {n}: {e}"))?;
            }
            for (j, s) in self.codegeneracies[n].iter().enumerate() {
                check_map(s, dst, src).map_err(|e| structural!("codegeneracy s^{j} at level {}: {e}", n + 1))?;
            }
        }
        Ok(())
    }

    fn check_identities(&self) -> Result<()> {
        let d = |n: usize, i: usize| &self.cofaces[n][i];
        let s = |n: usize, j: usize| &self.codegeneracies[n][j];
        let fail = |what: String| Err(structural!("cosimplicial identity fails: {what}"));
        for n in 0..self.top_level() {
            if n + 1 < self.top_level() {
                for j in 0..=n + 2 {
                    for i in 0..j {
                        if d(n + 1, j).compose(d(n, i)) != d(n + 1, i).compose(d(n, j - 1)) {
                            return fail(format!("d^{j} d^{i} on level {n}"));
                        }
                    }
                }
                for j in 0..=n {
                    for i in 0..=j {
                        if s(n, j).compose(s(n + 1, i)) != s(n, i).compose(s(n + 1, j + 1)) {
                            return fail(format!("s^{j} s^{i} on level {}", n + 2));
                        }
                    }
                }
            }
            let dim = self.levels[n].len();
            for j in 0..=n {
                for i in 0..=n + 1 {
                    let lhs = s(n, j).compose(d(n, i));
                    let rhs = if i < j {
                        d(n - 1, i).compose(s(n - 1, j - 1))
                    } else if i == j || i == j + 1 {
                        SparseMatrix::identity(dim, Some(self.p))
                    } else {
                        d(n - 1, i - 1).compose(s(n - 1, j))
                    };
                    if lhs != rhs {
                        return fail(format!("s^{j} d^{i} on level {n}"));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn top_level(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn level_degrees(&self, n: usize) -> &[Degree] {
        &self.levels[n]
    }

    pub fn level_dim(&self, n: usize) -> usize {
        self.levels[n].len()
    }

    pub fn coface(&self, n: usize, i: usize) -> &SparseMatrix {
        &self.cofaces[n][i]
    }

    pub fn codegeneracy(&self, n: usize, j: usize) -> &SparseMatrix {
        &self.codegeneracies[n][j]
    }

    /// The same module with every level's basis reordered by a seeded
    /// random permutation.
    pub fn permuted(&self, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let perms: Vec<Vec<usize>> = self
            .levels
            .iter()
            .map(|l| {
                let mut v: Vec<usize> = (0..l.len()).collect();
                v.shuffle(&mut rng);
                v
            })
            .collect();
        let levels = self
            .levels
            .iter()
            .zip(&perms)
            .map(|(l, perm)| {
                let mut out = vec![Degree::ZERO; l.len()];
                for (old, &new) in perm.iter().enumerate() {
                    out[new] = l[old];
                }
                out
            })
            .collect();
        let cofaces = (0..self.top_level())
            .map(|n| self.cofaces[n].iter().map(|m| m.permuted(&perms[n + 1], &perms[n])).collect())
            .collect();
        let codegeneracies = (0..self.top_level())
            .map(|n| self.codegeneracies[n].iter().map(|m| m.permuted(&perms[n], &perms[n + 1])).collect())
            .collect();
        CosimplicialGradedModule { p: self.p, levels, cofaces, codegeneracies }
    }

    /// `Σ_i (−1)^i d^i : level n → n+1`.
    fn alternating_coface(&self, n: usize) -> SparseMatrix {
        let mut total = SparseMatrix::zeros(self.levels[n + 1].len(), self.levels[n].len(), Some(self.p));
        for (i, d) in self.cofaces[n].iter().enumerate() {
            total = total.add_scaled(d, if i % 2 == 0 { 1 } else { -1 });
        }
        total
    }

    /// The full (unnormalized) cochain complex with differential
    /// `Σ_i (−1)^i d^i`.
    pub fn unnormalized_cochains(&self) -> CochainComplex {
        let blocks: Vec<DegreeBlocks> = self.levels.iter().map(|l| DegreeBlocks::new(l)).collect();
        let diffs: Vec<SparseMatrix> = (0..self.top_level()).map(|n| self.alternating_coface(n)).collect();
        let pieces = all_degrees(&blocks)
            .into_par_iter()
            .map(|t| {
                let dims = blocks.iter().map(|b| b.members(t).len()).collect();
                let differentials =
                    (0..self.top_level()).map(|n| blocks[n + 1].restrict(&diffs[n], &blocks[n], t)).collect();
                (t, DegreeComplex { dims, differentials })
            })
            .collect();
        CochainComplex { p: self.p, pieces }
    }

    /// Normalized cochains: the intersection of the kernels of all
    /// codegeneracies, with the restricted alternating differential.
    pub fn normalized_cochains(&self) -> Result<CochainComplex> {
        let p = self.p;
        let top = self.top_level();
        let blocks: Vec<DegreeBlocks> = self.levels.iter().map(|l| DegreeBlocks::new(l)).collect();
        let diffs: Vec<SparseMatrix> = (0..top).map(|n| self.alternating_coface(n)).collect();
        let pieces = all_degrees(&blocks)
            .into_par_iter()
            .map(|t| {
                let kernels: Vec<TriangularBasis> = (0..=top)
                    .map(|n| {
                        let dim = blocks[n].members(t).len();
                        if n == 0 {
                            return TriangularBasis::new((0..dim).map(|i| vec![(i, 1)]).collect());
                        }
                        let parts: Vec<SparseMatrix> =
                            self.codegeneracies[n - 1].iter().map(|s| blocks[n - 1].restrict(s, &blocks[n], t)).collect();
                        TriangularBasis::new(sparse_kernel(&stack(&parts, dim, p), p))
                    })
                    .collect();
                let mut differentials = Vec::with_capacity(top);
                for n in 0..top {
                    let d = blocks[n + 1].restrict(&diffs[n], &blocks[n], t);
                    let mut m = SparseMatrix::zeros(kernels[n + 1].len(), kernels[n].len(), Some(p));
                    for (c, v) in kernels[n].vectors.iter().enumerate() {
                        let image = apply(&d, v, p);
                        let coords = kernels[n + 1].coordinates(&image, p).ok_or_else(|| {
                            Error::Internal(format!(
                                "differential leaves the normalized cochains at level {} in degree {t}",
                                n + 1
                            ))
                        })?;
                        m.set_column(c, coords.into_iter().map(|(r, x)| (r, x as i64)));
                    }
                    differentials.push(m);
                }
                let dims = kernels.iter().map(TriangularBasis::len).collect();
                Ok((t, DegreeComplex { dims, differentials }))
            })
            .collect::<Result<BTreeMap<_, _>>>()?;
        CochainComplex::new(p, pieces)
    }
}

fn check_map(m: &SparseMatrix, src: &[Degree], dst: &[Degree]) -> std::result::Result<(), String> {
    if m.cols != src.len() || m.rows != dst.len() {
        return Err(format!("shape {}x{} does not match {}x{}", m.rows, m.cols, dst.len(), src.len()));
    }
    for (c, col) in m.columns.iter().enumerate() {
        if let Some(&(r, _)) = col.iter().find(|&&(r, _)| dst[r] != src[c]) {
            return Err(format!("entry ({r}, {c}) changes degree"));
        }
    }
    Ok(())
}

/// Basis indices of one level grouped by degree.
struct DegreeBlocks {
    by_degree: BTreeMap<Degree, Vec<usize>>,
    position: Vec<usize>,
}

impl DegreeBlocks {
    fn new(degrees: &[Degree]) -> Self {
        let mut by_degree: BTreeMap<Degree, Vec<usize>> = BTreeMap::new();
        let mut position = vec![0; degrees.len()];
        for (i, &d) in degrees.iter().enumerate() {
            let block = by_degree.entry(d).or_default();
            position[i] = block.len();
            block.push(i);
        }
        DegreeBlocks { by_degree, position }
    }

    fn members(&self, t: Degree) -> &[usize] {
        self.by_degree.get(&t).map_or(&[], Vec::as_slice)
    }

    /// The degree-`t` block of a homogeneous map into this level.
    fn restrict(&self, m: &SparseMatrix, source: &DegreeBlocks, t: Degree) -> SparseMatrix {
        let cols = source.members(t);
        let mut out = SparseMatrix::zeros(self.members(t).len(), cols.len(), m.modulus);
        for (c, &gc) in cols.iter().enumerate() {
            out.columns[c] = m.columns[gc].iter().map(|&(r, v)| (self.position[r], v)).collect();
        }
        out
    }
}

fn all_degrees(blocks: &[DegreeBlocks]) -> Vec<Degree> {
    let mut ts: Vec<Degree> = blocks.iter().flat_map(|b| b.by_degree.keys().copied()).collect();
    ts.sort();
    ts.dedup();
    ts
}

/// Vertical concatenation of maps with a common source.
fn stack(parts: &[SparseMatrix], cols: usize, p: u64) -> SparseMatrix {
    let rows = parts.iter().map(|m| m.rows).sum();
    let mut out = SparseMatrix::zeros(rows, cols, Some(p));
    for c in 0..cols {
        let mut offset = 0;
        let mut col = Vec::new();
        for m in parts {
            col.extend(m.columns[c].iter().map(|&(r, v)| (r + offset, v)));
            offset += m.rows;
        }
        out.columns[c] = col;
    }
    out
}

fn apply(m: &SparseMatrix, v: &SparseVec, p: u64) -> SparseVec {
    let mut acc: BTreeMap<usize, u64> = BTreeMap::new();
    for &(c, x) in v {
        for (r, y) in fp_column(m, c, p) {
            let e = acc.entry(r).or_default();
            *e = (*e + x * y) % p;
        }
    }
    acc.into_iter().filter(|&(_, x)| x != 0).collect()
}

/// A basis of a subspace whose vectors have pairwise distinct largest
/// indices, each with coefficient 1, as produced by column reduction.
struct TriangularBasis {
    vectors: Vec<SparseVec>,
    by_top: HashMap<usize, usize>,
}

impl TriangularBasis {
    fn new(vectors: Vec<SparseVec>) -> Self {
        let by_top = vectors
            .iter()
            .enumerate()
            .map(|(i, v)| {
                let &(top, c) = v.last().expect("basis vectors are nonzero");
                debug_assert_eq!(c, 1);
                (top, i)
            })
            .collect();
        TriangularBasis { vectors, by_top }
    }

    fn len(&self) -> usize {
        self.vectors.len()
    }

    /// Coordinates of `w`, or `None` if it is not in the span.
    fn coordinates(&self, w: &SparseVec, p: u64) -> Option<Vec<(usize, u64)>> {
        let mut w = w.clone();
        let mut coords = Vec::new();
        while let Some(&(top, c)) = w.last() {
            let &i = self.by_top.get(&top)?;
            coords.push((i, c));
            w = crate::linalg::sparse_axpy(&w, p - c, &self.vectors[i], p);
        }
        coords.sort_unstable();
        Some(coords)
    }
}

/// Cochains of one internal degree: levels `0..=L` and `L` differentials.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DegreeComplex {
    pub dims: Vec<usize>,
    pub differentials: Vec<SparseMatrix>,
}

/// A cochain complex of graded F_p-vector spaces, split by internal degree.
///
/// Every degree carries the same number of levels; cohomology is reported
/// for levels with both an incoming and an outgoing differential, i.e.
/// `s < L`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CochainComplex {
    p: u64,
    pieces: BTreeMap<Degree, DegreeComplex>,
}

impl CochainComplex {
    /// Validates shapes and `d² = 0` exactly.
    pub fn new(p: u64, pieces: BTreeMap<Degree, DegreeComplex>) -> Result<Self> {
        let mut length = None;
        for (t, piece) in &pieces {
            if piece.dims.len() != piece.differentials.len() + 1 {
                return Err(structural!("degree {t}: {} levels need {} differentials", piece.dims.len(), piece.dims.len() - 1));
            }
            if *length.get_or_insert(piece.dims.len()) != piece.dims.len() {
                return Err(structural!("degree {t} has a different number of levels"));
            }
            for (s, d) in piece.differentials.iter().enumerate() {
                if d.cols != piece.dims[s] || d.rows != piece.dims[s + 1] {
                    return Err(structural!("degree {t}: differential {s} has the wrong shape"));
                }
            }
            for s in 1..piece.differentials.len() {
                let dd = reduced(piece.differentials[s].compose(&piece.differentials[s - 1]), p);
                if !dd.is_zero() {
                    return Err(structural!("d∘d ≠ 0 in degree {t} from level {}", s - 1));
                }
            }
        }
        Ok(CochainComplex { p, pieces })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn pieces(&self) -> &BTreeMap<Degree, DegreeComplex> {
        &self.pieces
    }

    /// Index `L` of the last level.
    pub fn top_level(&self) -> usize {
        self.pieces.values().next().map_or(0, |p| p.dims.len() - 1)
    }

    pub fn dim(&self, s: usize, t: Degree) -> usize {
        self.pieces.get(&t).and_then(|p| p.dims.get(s).copied()).unwrap_or(0)
    }

    fn ranks(&self) -> BTreeMap<Degree, Vec<usize>> {
        let p = self.p;
        self.pieces
            .par_iter()
            .map(|(&t, piece)| (t, piece.differentials.iter().map(|d| sparse_rank(d, p)).collect()))
            .collect()
    }
}

/// `dim ker − dim im` at every `(s, t)` with `s < L`.
pub fn cohomology(complex: &CochainComplex, provenance: impl Into<String>) -> E2Page {
    let top = complex.top_level();
    let ranks = complex.ranks();
    let mut entries = BTreeMap::new();
    for (&t, piece) in &complex.pieces {
        let r = &ranks[&t];
        for s in 0..top {
            let incoming = if s == 0 { 0 } else { r[s - 1] };
            let h = piece.dims[s] - r[s] - incoming;
            if h > 0 {
                entries.insert((s, t), h);
            }
        }
    }
    E2Page { p: complex.p, max_s: top.checked_sub(1), entries, provenance: provenance.into() }
}

/// Rank-nullity bookkeeping: for each `t`, the alternating sum of cochain
/// dimensions equals that of the cohomology, the top level contributing
/// its cokernel.
pub fn euler_check(complex: &CochainComplex, page: &E2Page) -> Result<()> {
    let top = complex.top_level();
    for (&t, piece) in &complex.pieces {
        let sign = |s: usize| if s.is_multiple_of(2) { 1i64 } else { -1 };
        let chi_cochains: i64 = piece.dims.iter().enumerate().map(|(s, &d)| sign(s) * d as i64).sum();
        let top_rank = piece.differentials.last().map_or(0, |d| sparse_rank(d, complex.p));
        let mut chi_page: i64 = (0..top).map(|s| sign(s) * page.dimension(s, t) as i64).sum();
        chi_page += sign(top) * (piece.dims[top] - top_rank) as i64;
        if chi_cochains != chi_page {
            return Err(Error::Internal(format!(
                "Euler characteristic mismatch in degree {t}: cochains {chi_cochains}, cohomology {chi_page}"
            )));
        }
    }
    Ok(())
}

/// Dimensions `E2^{s,t}`; absent entries are zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct E2Page {
    p: u64,
    /// Largest filtration for which the page is computed (`None`: none).
    max_s: Option<usize>,
    entries: BTreeMap<(usize, Degree), usize>,
    provenance: String,
}

#[derive(Serialize)]
struct PageEntryJson {
    s: usize,
    t: i64,
    stem: i64,
    dimension: usize,
}

#[derive(Serialize)]
struct PageJson<'a> {
    p: u64,
    max_s: Option<usize>,
    provenance: &'a str,
    entries: Vec<PageEntryJson>,
}

impl Serialize for E2Page {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PageJson {
            p: self.p,
            max_s: self.max_s,
            provenance: &self.provenance,
            entries: self
                .entries
                .iter()
                .map(|(&(s, t), &d)| PageEntryJson { s, t: t.0, stem: t.0 - s as i64, dimension: d })
                .collect(),
        }
        .serialize(s)
    }
}

impl E2Page {
    pub fn new(p: u64, max_s: Option<usize>, entries: BTreeMap<(usize, Degree), usize>, provenance: impl Into<String>) -> Self {
        let entries = entries.into_iter().filter(|&(_, d)| d > 0).collect();
        E2Page { p, max_s, entries, provenance: provenance.into() }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn max_s(&self) -> Option<usize> {
        self.max_s
    }

    pub fn provenance(&self) -> &str {
        &self.provenance
    }

    pub fn dimension(&self, s: usize, t: Degree) -> usize {
        self.entries.get(&(s, t)).copied().unwrap_or(0)
    }

    /// Nonzero entries `((s, t), dimension)` sorted by `s`, then `t`.
    pub fn entries(&self) -> &BTreeMap<(usize, Degree), usize> {
        &self.entries
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Dimension data only, ignoring provenance.
    pub fn same_dimensions(&self, other: &E2Page) -> bool {
        self.max_s == other.max_s && self.entries == other.entries
    }

    /// `s,t,stem,dimension` rows sorted by `(s, t)`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("s,t,stem,dimension\n");
        for (&(s, t), &d) in &self.entries {
            let _ = writeln!(out, "{s},{t},{},{d}", t.0 - s as i64);
        }
        out
    }

    /// Aligned chart with stem `t − s` across and filtration `s` up.
    pub fn to_text_chart(&self) -> String {
        let max_s = self.max_s.unwrap_or(0);
        let stems: Vec<i64> = self.entries.keys().map(|&(s, t)| t.0 - s as i64).collect();
        let lo = stems.iter().copied().min().unwrap_or(0).min(0);
        let hi = stems.iter().copied().max().unwrap_or(0).max(0);
        let mut grid: BTreeMap<(usize, i64), usize> = BTreeMap::new();
        for (&(s, t), &d) in &self.entries {
            grid.insert((s, t.0 - s as i64), d);
        }
        let width = grid.values().map(|d| d.to_string().len()).chain(stems.iter().map(|s| s.to_string().len())).max().unwrap_or(1).max(1);
        let mut out = String::new();
        for s in (0..=max_s).rev() {
            let _ = write!(out, "{s:>3} |");
            for stem in lo..=hi {
                let cell = grid.get(&(s, stem)).map_or(".".to_string(), |d| d.to_string());
                let _ = write!(out, " {cell:>width$}");
            }
            out.push('\n');
        }
        let _ = write!(out, "    +");
        for _ in lo..=hi {
            let _ = write!(out, "{}", "-".repeat(width + 1));
        }
        out.push('\n');
        let _ = write!(out, " s/n ");
        for stem in lo..=hi {
            let _ = write!(out, " {stem:>width$}");
        }
        out.push('\n');
        out
    }
}

#[cfg(test)]
mod tests;
