use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::FormalGroupLaw;
use crate::error::{domain, structural, Error, Result};
use crate::graded::{CoefficientDomain, GradedPolynomial, PolyRing};
use crate::linalg::{smith_normal_form, FpMatrix, IntegerMatrix};
use crate::series::{first_difference, substitute, SeriesFamily, SeriesSpace, TruncatedSeries};

type Matrix = Vec<Vec<GradedPolynomial>>;

/// An invertible change of coordinates `g(x)` together with its inverse.
///
/// The linear part must be invertible: its scalar part must be invertible
/// over the base and the remainder nilpotent. [`CoordinateChange::is_strict`]
/// tests the narrower normalization "linear part = identity".
#[derive(Clone, Debug, PartialEq)]
pub struct CoordinateChange {
    map: SeriesFamily,
    inverse: SeriesFamily,
}

impl CoordinateChange {
    pub fn new(map: SeriesFamily) -> Result<Self> {
        let space = map.space().clone();
        let d = space.nvars();
        if map.len() != d {
            return Err(structural!("coordinate change has {} components for {d} variables", map.len()));
        }
        for (s, v) in space.variables().iter().enumerate() {
            if map.target_degrees()[s] != v.degree {
                return Err(domain!("component {s} must have the degree of {:?}", v.name));
            }
            if !map.component(s).constant_term().is_zero() {
                return Err(domain!("component {s} has a nonzero constant term"));
            }
        }
        let lin = linear_part(&map);
        let lin_inv = invert_linear(space.coeff_ring(), &lin, &space)?;
        let inverse = revert(&map, &lin_inv)?;
        Ok(CoordinateChange { map, inverse })
    }

    pub fn identity(space: &Arc<SeriesSpace>) -> Self {
        let id = SeriesFamily::identity(space);
        CoordinateChange { map: id.clone(), inverse: id }
    }

    pub fn map(&self) -> &SeriesFamily {
        &self.map
    }

    pub fn inverse(&self) -> &SeriesFamily {
        &self.inverse
    }

    /// Whether the linear part is the identity matrix.
    pub fn is_strict(&self) -> bool {
        let lin = linear_part(&self.map);
        let ring = self.map.space().coeff_ring();
        lin.iter().enumerate().all(|(s, row)| {
            row.iter().enumerate().all(|(j, c)| {
                let want = if s == j { GradedPolynomial::one(ring) } else { GradedPolynomial::zero(ring) };
                *c == want
            })
        })
    }

    /// The composite `g ∘ self`, i.e. first `self` then `g` on points. With
    /// this orientation `act(g, act(h, F)) = act(h.followed_by(g), F)`.
    pub fn followed_by(&self, g: &CoordinateChange) -> Result<CoordinateChange> {
        let map = substitute(&g.map, &self.map)?;
        let inverse = substitute(&self.inverse, &g.inverse)?;
        Ok(CoordinateChange { map, inverse })
    }

    /// The transported law `g(F(g⁻¹y, g⁻¹z))`.
    pub fn act(&self, law: &FormalGroupLaw) -> Result<FormalGroupLaw> {
        let d = law.dimension();
        if self.map.target_degrees() != law.coordinate_degrees() {
            return Err(structural!("coordinate change does not match the law's coordinates"));
        }
        if !self.map.space().coeff_ring().same_as(law.coeff_ring()) {
            return Err(structural!("coordinate change and law have different coefficient rings"));
        }
        let s2 = law.law().space();
        let degs = law.coordinate_degrees().to_vec();
        let ys = SeriesFamily::new(s2, (0..d).map(|s| TruncatedSeries::variable(s2, s)).collect(), degs.clone())?;
        let zs = SeriesFamily::new(s2, (0..d).map(|s| TruncatedSeries::variable(s2, d + s)).collect(), degs)?;
        let gy = substitute(&self.inverse, &ys)?;
        let gz = substitute(&self.inverse, &zs)?;
        let inner = substitute(law.law(), &gy.concat(&gz.reinterpret(gy.space())?)?)?;
        let outer = substitute(&self.map, &inner)?;
        let out = FormalGroupLaw::new(outer)?;
        debug_assert!(
            !law.check_axioms().map(|r| r.passed()).unwrap_or(false)
                || out.check_axioms().map(|r| r.passed()).unwrap_or(false),
            "transport broke the axioms"
        );
        Ok(out)
    }
}

fn linear_part(map: &SeriesFamily) -> Matrix {
    let d = map.len();
    (0..d)
        .map(|s| {
            let c = map.component(s).coefficients();
            (0..d)
                .map(|j| {
                    let mut e = vec![0u32; d];
                    e[j] = 1;
                    c.get(&e).cloned().unwrap_or_else(|| GradedPolynomial::zero(map.space().coeff_ring()))
                })
                .collect()
        })
        .collect()
}

fn mat_mul(ring: &Arc<PolyRing>, a: &Matrix, b: &Matrix) -> Matrix {
    let d = a.len();
    (0..d)
        .map(|i| {
            (0..d)
                .map(|j| {
                    let mut acc = GradedPolynomial::zero(ring);
                    for (k, bk) in b.iter().enumerate() {
                        acc = &acc + &(&a[i][k] * &bk[j]);
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

fn is_zero_matrix(m: &Matrix) -> bool {
    m.iter().all(|r| r.iter().all(GradedPolynomial::is_zero))
}

/// Inverse of a scalar matrix over the base, if it exists.
fn invert_scalar(domain: CoefficientDomain, m: &[Vec<BigInt>]) -> Option<Vec<Vec<BigInt>>> {
    let d = m.len();
    match domain {
        CoefficientDomain::PrimeField { p } => {
            let rows: Vec<Vec<i64>> = m
                .iter()
                .map(|r| r.iter().map(|c| i64::try_from(domain.reduce(c)).expect("reduced")).collect())
                .collect();
            let a = FpMatrix::from_rows(p, &rows);
            if a.rank() < d {
                return None;
            }
            let mut inv = vec![vec![BigInt::zero(); d]; d];
            for j in 0..d {
                let mut e = vec![0u64; d];
                e[j] = 1;
                let col = a.solve(&e)?;
                for i in 0..d {
                    inv[i][j] = BigInt::from(col[i]);
                }
            }
            Some(inv)
        }
        CoefficientDomain::Integers => {
            let a = IntegerMatrix::from_rows(m).ok()?;
            let snf = smith_normal_form(&a);
            if snf.rank() < d || (0..d).any(|i| !snf.d[(i, i)].abs().is_one()) {
                return None;
            }
            // U A V = S with S = diag(±1), so A⁻¹ = V S U
            let vs = snf.v.mul(&snf.d).ok()?;
            let inv = vs.mul(&snf.u).ok()?;
            Some((0..d).map(|i| (0..d).map(|j| inv[(i, j)].clone()).collect()).collect())
        }
    }
}

fn invert_linear(ring: &Arc<PolyRing>, lin: &Matrix, space: &SeriesSpace) -> Result<Matrix> {
    let d = lin.len();
    let scalar: Vec<Vec<BigInt>> = lin.iter().map(|r| r.iter().map(|c| c.constant_term()).collect()).collect();
    let dinv = invert_scalar(ring.domain(), &scalar)
        .ok_or_else(|| domain!("linear part is not invertible: its scalar part is singular over the base"))?;
    let dinv: Matrix = dinv
        .into_iter()
        .map(|r| r.into_iter().map(|c| GradedPolynomial::constant(ring, c)).collect())
        .collect();
    let nil: Matrix = lin
        .iter()
        .zip(&scalar)
        .map(|(r, sr)| r.iter().zip(sr).map(|(c, s)| c - &GradedPolynomial::constant(ring, s.clone())).collect())
        .collect();
    let m = mat_mul(ring, &dinv, &nil);
    // entries of M^k lie in the k-th power of the augmentation ideal while
    // their degrees stay bounded, so M is nilpotent when L is invertible
    let spread = {
        let degs: Vec<i64> = space.variables().iter().map(|v| v.degree.0).collect();
        let hi = degs.iter().max().copied().unwrap_or(0);
        let lo = degs.iter().min().copied().unwrap_or(0);
        (hi - lo).unsigned_abs() as usize
    };
    let bound = spread + d + 2;
    let id: Matrix = (0..d)
        .map(|i| {
            (0..d)
                .map(|j| if i == j { GradedPolynomial::one(ring) } else { GradedPolynomial::zero(ring) })
                .collect()
        })
        .collect();
    let neg_m: Matrix = m.iter().map(|r| r.iter().map(|c| -c).collect()).collect();
    let mut sum = id.clone();
    let mut power = id;
    for _ in 0..bound {
        power = mat_mul(ring, &power, &neg_m);
        if is_zero_matrix(&power) {
            return Ok(mat_mul(ring, &sum, &dinv));
        }
        sum = sum
            .iter()
            .zip(&power)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x + y).collect())
            .collect();
    }
    Err(domain!("linear part is not invertible: its non-scalar part is not nilpotent"))
}

fn apply_linear(lin: &Matrix, v: &SeriesFamily) -> Result<SeriesFamily> {
    let space = v.space();
    let comps = lin
        .iter()
        .map(|row| {
            let mut acc = TruncatedSeries::zero(space);
            for (c, comp) in row.iter().zip(v.components()) {
                acc = &acc + &comp.scale_left(c)?;
            }
            Ok(acc)
        })
        .collect::<Result<Vec<_>>>()?;
    SeriesFamily::new(space, comps, v.target_degrees().to_vec())
}

/// Solves `g(h(x)) = x` by `h ← h + L⁻¹(x − g(h))`.
fn revert(g: &SeriesFamily, lin_inv: &Matrix) -> Result<SeriesFamily> {
    let x = SeriesFamily::identity(g.space());
    let mut h = apply_linear(lin_inv, &x)?;
    let min_w = g.space().variables().iter().map(|v| v.weight()).min().unwrap_or(1).max(1);
    for _ in 0..g.space().order() / min_w + 2 {
        let gh = substitute(g, &h)?.reinterpret(g.space())?;
        let err = x.sub(&gh)?;
        if err.is_zero() {
            return Ok(h);
        }
        h = SeriesFamily::new(
            g.space(),
            h.components()
                .iter()
                .zip(apply_linear(lin_inv, &err)?.components())
                .map(|(a, b)| a + b)
                .collect(),
            h.target_degrees().to_vec(),
        )?;
    }
    let gh = substitute(g, &h)?;
    match first_difference(&gh, &x) {
        None => Ok(h),
        Some(_) => Err(Error::Internal("series reversion did not converge".into())),
    }
}
