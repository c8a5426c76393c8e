use std::collections::{BTreeMap, HashMap};

use crate::error::{domain, Error, Result};
use crate::graded::{Degree, GradedPolynomial};
use crate::linalg::SparseMatrix;
use crate::steenrod::{check_odd_prime, DualSteenrod};

use super::{cohomology, euler_check, CochainComplex, CosimplicialGradedModule, DegreeComplex, E2Page};

/// Cobar data over the dual Steenrod algebra with coefficients in the
/// trivial comodule F_p.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HopfComoduleSpec {
    pub p: u64,
}

/// Milnor basis through a degree, with ψ as `(left, right, coefficient)`
/// triples of element ids. Ids are sorted by degree, then basis order.
struct BasisWithCoproduct {
    degrees: Vec<i64>,
    by_degree: Vec<Vec<u32>>,
    coproduct: Vec<Vec<(u32, u32, i64)>>,
    unit: Option<u32>,
}

impl BasisWithCoproduct {
    /// With `reduced`, the unit is left out and so are the terms `1⊗x`,
    /// `x⊗1` of ψ.
    fn new(p: u64, max_t: i64, reduced: bool) -> Result<Self> {
        let alg = DualSteenrod::new(p, Degree(max_t))?;
        let lowest = if reduced { 1 } else { 0 };
        let mut degrees = Vec::new();
        let mut by_degree = vec![Vec::new(); max_t as usize + 1];
        let mut ids = HashMap::new();
        let mut monomials = Vec::new();
        for d in lowest..=max_t {
            for m in alg.basis_monomials(Degree(d))? {
                let id = degrees.len() as u32;
                ids.insert(m.clone(), id);
                degrees.push(d);
                by_degree[d as usize].push(id);
                monomials.push(m);
            }
        }
        let n = alg.ngens();
        let mut coproduct = Vec::with_capacity(monomials.len());
        for m in &monomials {
            let psi = alg.psi_poly(&GradedPolynomial::monomial(alg.ring(), m.clone(), 1))?;
            let mut terms = Vec::new();
            for (tm, c) in psi.terms() {
                let (l, r) = tm.split_at(n);
                if let (Some(&a), Some(&b)) = (ids.get(&l), ids.get(&r)) {
                    let c: i64 = c.try_into().map_err(|_| Error::Internal("coefficient out of range".into()))?;
                    terms.push((a, b, c));
                }
            }
            coproduct.push(terms);
        }
        let unit = (!reduced).then_some(0);
        Ok(BasisWithCoproduct { degrees, by_degree, coproduct, unit })
    }

    /// Number of `s`-tuples of total degree `t`, for all `s ≤ max_s`, `t ≤ max_t`.
    fn counts(&self, max_s: usize, max_t: usize) -> Vec<Vec<u128>> {
        let mut count = vec![vec![0u128; max_t + 1]; max_s + 1];
        count[0][0] = 1;
        for s in 1..=max_s {
            for t in 0..=max_t {
                count[s][t] = (0..=t).map(|d| self.by_degree[d].len() as u128 * count[s - 1][t - d]).sum();
            }
        }
        count
    }

    /// `s`-tuples of total degree `t` in lexicographic order of ids.
    fn tuples(&self, s: usize, t: i64) -> Vec<Vec<u32>> {
        fn go(b: &BasisWithCoproduct, s: usize, t: i64, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
            if s == 0 {
                if t == 0 {
                    out.push(prefix.clone());
                }
                return;
            }
            for (id, &d) in b.degrees.iter().enumerate() {
                if d > t {
                    break;
                }
                prefix.push(id as u32);
                go(b, s - 1, t - d, prefix, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        go(self, s, t, &mut Vec::with_capacity(s), &mut out);
        out
    }
}

fn check_window(p: u64, max_t: i64) -> Result<()> {
    check_odd_prime(p)?;
    if max_t < 0 {
        return Err(domain!("internal degree bound {max_t} is negative"));
    }
    Ok(())
}

fn check_bound(counts: &[Vec<u128>], bound: usize) -> Result<()> {
    for (s, row) in counts.iter().enumerate() {
        for (t, &c) in row.iter().enumerate() {
            if c > bound as u128 {
                return Err(Error::Resource(format!(
                    "cobar level {s} has {c} basis elements in degree {t}, above the bound {bound}"
                )));
            }
        }
    }
    Ok(())
}

fn index_of(tuples: &[Vec<u32>]) -> HashMap<&[u32], usize> {
    tuples.iter().enumerate().map(|(i, t)| (t.as_slice(), i)).collect()
}

/// The reduced cobar complex `C̄^{⊗s}` for `s ≤ max_s + 1` and internal
/// degree `t ≤ max_t`, with `d = Σ_{1≤i≤s} (−1)^i ψ̄` applied at slot `i`.
///
/// ψ̄ is even and the slots are not reordered, so no further signs arise.
pub fn cobar_complex(spec: HopfComoduleSpec, max_s: usize, max_t: i64, bound: usize) -> Result<CochainComplex> {
    let p = spec.p;
    check_window(p, max_t)?;
    let basis = BasisWithCoproduct::new(p, max_t, true)?;
    let top = max_s + 1;
    check_bound(&basis.counts(top, max_t as usize), bound)?;
    let mut pieces = BTreeMap::new();
    for t in 0..=max_t {
        let levels: Vec<Vec<Vec<u32>>> = (0..=top).map(|s| basis.tuples(s, t)).collect();
        let mut differentials = Vec::with_capacity(top);
        for s in 0..top {
            let target = index_of(&levels[s + 1]);
            let mut m = SparseMatrix::zeros(levels[s + 1].len(), levels[s].len(), Some(p));
            for (c, tuple) in levels[s].iter().enumerate() {
                let mut entries = Vec::new();
                for i in 0..s {
                    let sign = if i % 2 == 0 { -1 } else { 1 };
                    for &(l, r, x) in &basis.coproduct[tuple[i] as usize] {
                        let mut out = Vec::with_capacity(s + 1);
                        out.extend_from_slice(&tuple[..i]);
                        out.extend([l, r]);
                        out.extend_from_slice(&tuple[i + 1..]);
                        entries.push((target[out.as_slice()], sign * x));
                    }
                }
                m.set_column(c, entries);
            }
            differentials.push(m);
        }
        let dims = levels.iter().map(Vec::len).collect();
        pieces.insert(Degree(t), DegreeComplex { dims, differentials });
    }
    CochainComplex::new(p, pieces).map_err(|e| Error::Internal(e.to_string()))
}

/// The cosimplicial cobar object `s ↦ C^{⊗s}` for `s ≤ max_s + 1`, total
/// degree `≤ max_t`: `d^0 = 1⊗−`, `d^{s+1} = −⊗1`, `d^i` applies ψ at
/// slot `i`, and `s^j` applies the counit at slot `j + 1`.
pub fn cosimplicial_cobar(p: u64, max_s: usize, max_t: i64, bound: usize) -> Result<CosimplicialGradedModule> {
    check_window(p, max_t)?;
    let basis = BasisWithCoproduct::new(p, max_t, false)?;
    let unit = basis.unit.expect("unreduced basis contains the unit");
    let top = max_s + 1;
    let counts = basis.counts(top, max_t as usize);
    for (s, row) in counts.iter().enumerate() {
        let total: u128 = row.iter().sum();
        if total > bound as u128 {
            return Err(Error::Resource(format!("cosimplicial cobar level {s} has {total} basis elements, above {bound}")));
        }
    }
    let levels: Vec<Vec<Vec<u32>>> =
        (0..=top).map(|s| (0..=max_t).flat_map(|t| basis.tuples(s, t)).collect()).collect();
    let degree = |tuple: &[u32]| Degree(tuple.iter().map(|&a| basis.degrees[a as usize]).sum());
    let mut cofaces = Vec::with_capacity(top);
    let mut codegeneracies = Vec::with_capacity(top);
    for n in 0..top {
        let target = index_of(&levels[n + 1]);
        let source = index_of(&levels[n]);
        let mut faces = Vec::with_capacity(n + 2);
        for i in 0..=n + 1 {
            let mut m = SparseMatrix::zeros(levels[n + 1].len(), levels[n].len(), Some(p));
            for (c, tuple) in levels[n].iter().enumerate() {
                let entries: Vec<(usize, i64)> = if i == 0 || i == n + 1 {
                    let mut out = tuple.clone();
                    out.insert(if i == 0 { 0 } else { n }, unit);
                    vec![(target[out.as_slice()], 1)]
                } else {
                    basis.coproduct[tuple[i - 1] as usize]
                        .iter()
                        .map(|&(l, r, x)| {
                            let mut out = tuple.clone();
                            out.splice(i - 1..i, [l, r]);
                            (target[out.as_slice()], x)
                        })
                        .collect()
                };
                m.set_column(c, entries);
            }
            faces.push(m);
        }
        cofaces.push(faces);
        let mut degeneracies = Vec::with_capacity(n + 1);
        for j in 0..=n {
            let mut m = SparseMatrix::zeros(levels[n].len(), levels[n + 1].len(), Some(p));
            for (c, tuple) in levels[n + 1].iter().enumerate() {
                if tuple[j] == unit {
                    let mut out = tuple.clone();
                    out.remove(j);
                    m.set_column(c, [(source[out.as_slice()], 1)]);
                }
            }
            degeneracies.push(m);
        }
        codegeneracies.push(degeneracies);
    }
    let degrees = levels.iter().map(|l| l.iter().map(|t| degree(t)).collect()).collect();
    CosimplicialGradedModule::new(p, degrees, cofaces, codegeneracies).map_err(|e| Error::Internal(e.to_string()))
}

/// `E2^{s,t}` of the Adams spectral sequence for `s ≤ max_s`, `t ≤ max_t`:
/// the cohomology of the reduced cobar complex, with a rank-nullity check.
pub fn adams_e2(p: u64, max_s: usize, max_t: i64, bound: usize) -> Result<E2Page> {
    let complex = cobar_complex(HopfComoduleSpec { p }, max_s, max_t, bound)?;
    let page = cohomology(&complex, format!("reduced cobar complex, p = {p}, s <= {max_s}, t <= {max_t}"));
    euler_check(&complex, &page)?;
    Ok(page)
}

/// The same window computed independently: unnormalized cochains of the
/// cosimplicial cobar object, with every level's basis shuffled by `seed`.
pub fn adams_e2_oracle(p: u64, max_s: usize, max_t: i64, seed: u64, bound: usize) -> Result<E2Page> {
    let module = cosimplicial_cobar(p, max_s, max_t, bound)?.permuted(seed);
    let complex = module.unnormalized_cochains();
    let page = cohomology(
        &complex,
        format!("unnormalized cosimplicial cobar, p = {p}, s <= {max_s}, t <= {max_t}, seed {seed}"),
    );
    euler_check(&complex, &page)?;
    Ok(page)
}
