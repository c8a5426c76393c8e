//! Witness checking and bounded witness search for the equational criteria
//! of flatness and faithful flatness.
//!
//! Flatness is never decided here. A witness either checks or it does not,
//! and a search that comes back empty only says nothing was found inside the
//! degree window.

use std::ops::RangeInclusive;

use serde::{Deserialize, Serialize};

use crate::error::{domain, structural, Error, Result};
use crate::graded::{Degree, FiniteAlgebra, GradedRing, Subalgebra, Subring};
use crate::linalg::FpMatrix;

/// The system `Σ_k y_k c_{ki} = d_i` (`rhs` absent means homogeneous).
#[derive(Debug, Clone, PartialEq)]
pub struct LinearSystem<E> {
    /// `coefficients[k][i] = c_{ki}`: one row per unknown, one column per equation.
    pub coefficients: Vec<Vec<E>>,
    pub rhs: Option<Vec<E>>,
}

impl<E> LinearSystem<E> {
    pub fn unknowns(&self) -> usize {
        self.coefficients.len()
    }

    pub fn equations(&self) -> usize {
        self.coefficients
            .first()
            .map(Vec::len)
            .or_else(|| self.rhs.as_ref().map(Vec::len))
            .unwrap_or(0)
    }

    fn check_shape(&self) -> Result<()> {
        let m = self.equations();
        if self.coefficients.iter().any(|row| row.len() != m) {
            return Err(structural!("coefficient rows have differing lengths"));
        }
        if let Some(d) = &self.rhs {
            if d.len() != m {
                return Err(structural!("right side has {} entries for {m} equations", d.len()));
            }
        }
        Ok(())
    }
}

/// `y_k = Σ_j b_j z_{jk}` with each row `z_j` a solution over the base.
#[derive(Debug, Clone, PartialEq)]
pub struct FlatnessWitness<E> {
    pub b: Vec<E>,
    /// `z[j][k]`
    pub z: Vec<Vec<E>>,
}

fn degree_of<R: GradedRing>(ring: &R, e: &R::Elem, what: &str) -> Result<Option<Degree>> {
    ring.degree(e).map_err(|err| match err {
        Error::Structural(msg) => structural!("{what}: {msg}"),
        other => other,
    })
}

/// Checks that every term of `Σ_k x_k c_{ki}` has one degree per equation.
fn equation_degrees<R: GradedRing>(ring: &R, c: &[Vec<R::Elem>], x: &[R::Elem], what: &str) -> Result<Vec<Option<Degree>>> {
    let m = c.first().map_or(0, Vec::len);
    let mut out = vec![None; m];
    for (k, row) in c.iter().enumerate() {
        let Some(dx) = degree_of(ring, &x[k], what)? else { continue };
        for (i, cki) in row.iter().enumerate() {
            let Some(dc) = degree_of(ring, cki, "coefficient")? else { continue };
            let d = dx + dc;
            match out[i] {
                None => out[i] = Some(d),
                Some(e) if e != d => {
                    return Err(structural!("equation {i} mixes degrees {e} and {d} for {what}"));
                }
                _ => {}
            }
        }
    }
    Ok(out)
}

fn apply_system<R: GradedRing>(ring: &R, c: &[Vec<R::Elem>], x: &[R::Elem]) -> Vec<R::Elem> {
    let m = c.first().map_or(0, Vec::len);
    (0..m)
        .map(|i| {
            c.iter()
                .zip(x)
                .fold(ring.zero(), |acc, (row, xk)| ring.add(&acc, &ring.mul(xk, &row[i])))
        })
        .collect()
}

/// True iff the witness expresses `solution` through base-ring solutions.
///
/// Errors when shapes disagree, an element is inhomogeneous, a coefficient
/// lies outside the base, degrees are inconsistent, or `solution` does not
/// solve the system.
pub fn check_flatness_witness<R, S>(
    ring: &R,
    base: &S,
    system: &LinearSystem<R::Elem>,
    solution: &[R::Elem],
    witness: &FlatnessWitness<R::Elem>,
) -> Result<bool>
where
    R: GradedRing,
    S: Subring<R>,
{
    system.check_shape()?;
    if system.rhs.is_some() {
        return Err(structural!("the flatness criterion uses a homogeneous system"));
    }
    let n = system.unknowns();
    if solution.len() != n {
        return Err(structural!("solution has {} entries for {n} unknowns", solution.len()));
    }
    if witness.z.len() != witness.b.len() {
        return Err(structural!("witness has {} multipliers but {} solution rows", witness.b.len(), witness.z.len()));
    }
    if witness.z.iter().any(|row| row.len() != n) {
        return Err(structural!("witness solution rows must have {n} entries"));
    }
    for row in &system.coefficients {
        for c in row {
            degree_of(ring, c, "coefficient")?;
            if !base.contains(ring, c) {
                return Err(structural!("coefficient {c:?} does not lie in the base ring"));
            }
        }
    }
    equation_degrees(ring, &system.coefficients, solution, "solution")?;
    if apply_system(ring, &system.coefficients, solution).iter().any(|v| !ring.is_zero(v)) {
        return Err(domain!("the given vector does not solve the system"));
    }
    // y_k = Σ_j b_j z_jk must be degree-consistent term by term
    for k in 0..n {
        let target = degree_of(ring, &solution[k], "solution")?;
        for (j, bj) in witness.b.iter().enumerate() {
            let (Some(db), Some(dz)) = (degree_of(ring, bj, "multiplier")?, degree_of(ring, &witness.z[j][k], "witness")?) else {
                continue;
            };
            if let Some(t) = target {
                if db + dz != t {
                    return Err(structural!("b_{j} z_{j}{k} has degree {} but y_{k} has degree {t}", db + dz));
                }
            }
        }
    }
    for zrow in &witness.z {
        if zrow.iter().any(|z| !base.contains(ring, z)) {
            return Ok(false);
        }
        equation_degrees(ring, &system.coefficients, zrow, "witness row")?;
        if apply_system(ring, &system.coefficients, zrow).iter().any(|v| !ring.is_zero(v)) {
            return Ok(false);
        }
    }
    for k in 0..n {
        let combo = witness
            .b
            .iter()
            .zip(&witness.z)
            .fold(ring.zero(), |acc, (bj, zrow)| ring.add(&acc, &ring.mul(bj, &zrow[k])));
        if combo != solution[k] {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum SearchOutcome {
    /// A solution `x_k` over the base, one coordinate vector per unknown.
    Found { solution: Vec<Vec<u64>>, degrees: Vec<Option<i64>> },
    NotFoundInWindow,
}

/// Upper bound on the degree assignments tried by the search.
pub const MAX_DEGREE_ASSIGNMENTS: usize = 1 << 16;

/// Exhaustive search for a homogeneous solution over the base `A ⊂ B` of
/// `Σ_k x_k c_{ki} = d_i`, with every `x_k` of degree inside `window`.
pub fn search_faithful_flatness_witness(
    alg: &FiniteAlgebra,
    base: &Subalgebra,
    system: &LinearSystem<Vec<u64>>,
    window: RangeInclusive<i64>,
) -> Result<SearchOutcome> {
    system.check_shape()?;
    if window.is_empty() {
        return Err(Error::Unsupported("empty degree window".into()));
    }
    let rhs = system.rhs.clone().unwrap_or_else(|| vec![alg.zero(); system.equations()]);
    for row in &system.coefficients {
        for c in row {
            alg.degree(c)?;
            if !base.contains(alg, c) {
                return Err(structural!("coefficient {c:?} does not lie in the base ring"));
            }
        }
    }
    let rhs_degrees: Vec<Option<Degree>> = rhs.iter().map(|d| alg.degree(d)).collect::<Result<_>>()?;
    for d in &rhs {
        if !base.contains(alg, d) {
            return Err(structural!("right side {d:?} does not lie in the base ring"));
        }
    }
    let n = system.unknowns();
    // candidate degrees per unknown: where the base is nonzero and homogeneity allows
    let mut candidates: Vec<Vec<(Degree, Vec<Vec<u64>>)>> = Vec::with_capacity(n);
    for k in 0..n {
        let mut cands = Vec::new();
        for d in window.clone() {
            let basis = base.basis_in_degree(alg, Degree(d));
            if basis.is_empty() {
                continue;
            }
            let consistent = system.coefficients[k].iter().zip(&rhs_degrees).all(|(c, rd)| {
                match (alg.degree(c).ok().flatten(), rd) {
                    (Some(dc), Some(rd)) => Degree(d) + dc == *rd,
                    _ => true,
                }
            });
            if consistent {
                cands.push((Degree(d), basis));
            }
        }
        candidates.push(cands);
    }
    let mut total: usize = 1;
    for c in &candidates {
        total = total.saturating_mul(c.len().max(1));
    }
    if total > MAX_DEGREE_ASSIGNMENTS {
        return Err(Error::Resource(format!("{total} degree assignments exceed the search bound")));
    }
    let mut choice = vec![0usize; n];
    loop {
        if let Some(sol) = solve_assignment(alg, system, &rhs, &candidates, &choice) {
            return Ok(sol);
        }
        // odometer over candidate indices
        let mut k = 0;
        loop {
            if k == n {
                return Ok(SearchOutcome::NotFoundInWindow);
            }
            choice[k] += 1;
            if choice[k] < candidates[k].len() {
                break;
            }
            choice[k] = 0;
            k += 1;
        }
    }
}

fn solve_assignment(
    alg: &FiniteAlgebra,
    system: &LinearSystem<Vec<u64>>,
    rhs: &[Vec<u64>],
    candidates: &[Vec<(Degree, Vec<Vec<u64>>)>],
    choice: &[usize],
) -> Option<SearchOutcome> {
    let p = alg.p();
    let dim = alg.dim();
    let m = rhs.len();
    // one column per basis element of each chosen A_δ; one row per (equation, B-coordinate)
    let mut columns: Vec<Vec<u64>> = Vec::new();
    let mut owners: Vec<(usize, usize)> = Vec::new();
    for (k, cands) in candidates.iter().enumerate() {
        let Some((_, basis)) = cands.get(choice[k]) else { continue };
        for (bi, bvec) in basis.iter().enumerate() {
            let mut col = Vec::with_capacity(m * dim);
            for i in 0..m {
                col.extend(alg.mul(bvec, &system.coefficients[k][i]));
            }
            columns.push(col);
            owners.push((k, bi));
        }
    }
    let target: Vec<u64> = rhs.iter().flatten().copied().collect();
    let x = if columns.is_empty() {
        if target.iter().all(|&t| t == 0) {
            Vec::new()
        } else {
            return None;
        }
    } else {
        FpMatrix::from_columns(p, m * dim, &columns).solve(&target)?
    };
    let n = candidates.len();
    let mut solution = vec![alg.zero(); n];
    for (&(k, bi), &coef) in owners.iter().zip(&x) {
        let bvec = &candidates[k][choice[k]].1[bi];
        solution[k] = alg.add(&solution[k], &alg.scale(bvec, coef));
    }
    let degrees = solution.iter().map(|s| alg.degree(s).ok().flatten().map(|d| d.0)).collect();
    Some(SearchOutcome::Found { solution, degrees })
}
