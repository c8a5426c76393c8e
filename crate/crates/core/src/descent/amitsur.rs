use crate::error::{structural, Error, Result};
use crate::graded::{Degree, FiniteAlgebra};
use crate::linalg::SparseMatrix;

use super::CosimplicialGradedModule;

/// A unital map `η: k → E` from the prime field into a finite graded
/// algebra, and a graded k-vector space `V` given by its basis degrees.
#[derive(Debug, Clone)]
pub struct RingMapSpec {
    pub algebra: FiniteAlgebra,
    pub module_degrees: Vec<Degree>,
}

/// Basis of `V ⊗ E^{⊗(n+1)}` within the degree window, as digit tuples
/// `(v, e_0, …, e_n)`.
struct Level {
    tuples: Vec<Vec<usize>>,
    degrees: Vec<Degree>,
    /// Full mixed-radix index → position in the window.
    index: Vec<Option<usize>>,
}

fn encode(tuple: &[usize], dim_e: usize) -> usize {
    tuple[1..].iter().fold(tuple[0], |acc, &d| acc * dim_e + d)
}

fn build_level(spec: &RingMapSpec, n: usize, max_degree: Option<Degree>, bound: usize) -> Result<Level> {
    let dim_v = spec.module_degrees.len();
    let dim_e = spec.algebra.dim();
    let full = (0..=n)
        .try_fold(dim_v, |acc, _| acc.checked_mul(dim_e))
        .filter(|&f| f <= bound)
        .ok_or_else(|| {
            Error::Resource(format!("level {n} of the Amitsur complex has more than {bound} basis elements"))
        })?;
    let mut tuples = Vec::new();
    let mut degrees = Vec::new();
    let mut index = vec![None; full];
    for code in 0..full {
        let mut digits = vec![0usize; n + 2];
        let mut rest = code;
        for slot in (1..=n + 1).rev() {
            digits[slot] = rest % dim_e;
            rest /= dim_e;
        }
        digits[0] = rest;
        let deg = digits[1..]
            .iter()
            .fold(spec.module_degrees[digits[0]], |acc, &e| acc + spec.algebra.degrees()[e]);
        if max_degree.is_some_and(|m| deg > m) {
            continue;
        }
        index[code] = Some(tuples.len());
        tuples.push(digits);
        degrees.push(deg);
    }
    Ok(Level { tuples, degrees, index })
}

/// The cosimplicial module `n ↦ V ⊗_k E^{⊗_k (n+1)}`, levels `0..=levels`,
/// restricted to total degree at most `max_degree`.
///
/// Cofaces insert the unit of `E`, codegeneracies multiply adjacent
/// factors. Both involve only the degree-0 unit or adjacent factors, so no
/// Koszul signs arise.
pub fn amitsur_complex(
    spec: &RingMapSpec,
    levels: usize,
    max_degree: Option<Degree>,
    bound: usize,
) -> Result<CosimplicialGradedModule> {
    let alg = &spec.algebra;
    let p = alg.p();
    let dim_e = alg.dim();
    if alg.unit().iter().all(|&u| u == 0) {
        return Err(structural!("the algebra has a zero unit"));
    }
    let built: Vec<Level> = (0..=levels).map(|n| build_level(spec, n, max_degree, bound)).collect::<Result<_>>()?;
    let unit: Vec<(usize, i64)> =
        alg.unit().iter().enumerate().filter(|(_, &u)| u != 0).map(|(i, &u)| (i, u as i64)).collect();

    let mut cofaces = Vec::with_capacity(levels);
    let mut codegeneracies = Vec::with_capacity(levels);
    for n in 0..levels {
        let (src, dst) = (&built[n], &built[n + 1]);
        let lookup = |t: &[usize]| dst.index[encode(t, dim_e)].expect("degree-preserving maps stay in the window");
        let mut level_cofaces = Vec::with_capacity(n + 2);
        for i in 0..=n + 1 {
            let mut m = SparseMatrix::zeros(dst.tuples.len(), src.tuples.len(), Some(p));
            for (c, t) in src.tuples.iter().enumerate() {
                let entries = unit.iter().map(|&(u, x)| {
                    let mut out = t.clone();
                    out.insert(i + 1, u);
                    (lookup(&out), x)
                });
                m.set_column(c, entries.collect::<Vec<_>>());
            }
            level_cofaces.push(m);
        }
        cofaces.push(level_cofaces);

        let back = |t: &[usize]| src.index[encode(t, dim_e)].expect("degree-preserving maps stay in the window");
        let mut level_codegeneracies = Vec::with_capacity(n + 1);
        for j in 0..=n {
            let mut m = SparseMatrix::zeros(src.tuples.len(), dst.tuples.len(), Some(p));
            for (c, t) in dst.tuples.iter().enumerate() {
                let prod = alg.product_of_basis(t[j + 1], t[j + 2]);
                let entries = prod.iter().enumerate().filter(|(_, &x)| x != 0).map(|(w, &x)| {
                    let mut out = t.clone();
                    out.splice(j + 1..j + 3, [w]);
                    (back(&out), x as i64)
                });
                m.set_column(c, entries.collect::<Vec<_>>());
            }
            level_codegeneracies.push(m);
        }
        codegeneracies.push(level_codegeneracies);
    }
    let degrees = built.into_iter().map(|l| l.degrees).collect();
    CosimplicialGradedModule::new(p, degrees, cofaces, codegeneracies)
}
