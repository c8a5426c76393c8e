use super::*;
use crate::graded::FiniteAlgebra;
use crate::linalg::FpMatrix;

fn spec(algebra: FiniteAlgebra, module_degrees: Vec<Degree>) -> RingMapSpec {
    RingMapSpec { algebra, module_degrees }
}

/// Cohomology by dense ranks of the full cochain complex.
fn dense_cohomology(c: &CosimplicialGradedModule) -> BTreeMap<(usize, Degree), usize> {
    let p = c.p();
    let top = c.top_level();
    let diff = |n: usize| {
        let mut total = FpMatrix::zeros(p, c.level_dim(n + 1), c.level_dim(n));
        for i in 0..=n + 1 {
            let d = c.coface(n, i).to_fp(p);
            for r in 0..d.rows() {
                for col in 0..d.cols() {
                    let v = if i % 2 == 0 { d.get(r, col) } else { (p - d.get(r, col)) % p };
                    total.add_to(r, col, v);
                }
            }
        }
        total
    };
    let mut degrees: Vec<Degree> = (0..=top).flat_map(|n| c.level_degrees(n).to_vec()).collect();
    degrees.sort();
    degrees.dedup();
    let diffs: Vec<FpMatrix> = (0..top).map(diff).collect();
    let mut out = BTreeMap::new();
    for t in degrees {
        let idx = |n: usize| -> Vec<usize> { (0..c.level_dim(n)).filter(|&i| c.level_degrees(n)[i] == t).collect() };
        let block_rank = |n: usize| {
            let (rows, cols) = (idx(n + 1), idx(n));
            let m: Vec<Vec<i64>> =
                rows.iter().map(|&r| cols.iter().map(|&col| diffs[n].get(r, col) as i64).collect()).collect();
            if rows.is_empty() || cols.is_empty() {
                0
            } else {
                FpMatrix::from_rows(p, &m).rank()
            }
        };
        let ranks: Vec<usize> = (0..top).map(block_rank).collect();
        for s in 0..top {
            let h = idx(s).len() - ranks[s] - if s == 0 { 0 } else { ranks[s - 1] };
            if h > 0 {
                out.insert((s, t), h);
            }
        }
    }
    out
}

#[test]
fn constant_module() {
    let c = amitsur_complex(&spec(FiniteAlgebra::prime_field(3).unwrap(), vec![Degree(0)]), 4, None, 1000).unwrap();
    assert!((0..=4).all(|n| c.level_dim(n) == 1));
    let normalized = c.normalized_cochains().unwrap();
    assert_eq!(normalized.pieces()[&Degree(0)].dims, vec![1, 0, 0, 0, 0]);
    let page = cohomology(&normalized, "constant");
    assert_eq!(page.entries().iter().collect::<Vec<_>>(), vec![(&(0, Degree(0)), &1)]);
}

#[test]
fn split_cover_levels_and_cohomology() {
    let c = amitsur_complex(&spec(FiniteAlgebra::split(3, 2).unwrap(), vec![Degree(0)]), 5, None, 100_000).unwrap();
    for n in 0..=5 {
        assert_eq!(c.level_dim(n), 1 << (n + 1));
    }
    let normalized = cohomology(&c.normalized_cochains().unwrap(), "normalized");
    let unnormalized = cohomology(&c.unnormalized_cochains(), "unnormalized");
    assert!(normalized.same_dimensions(&unnormalized));
    assert_eq!(normalized.entries().clone(), BTreeMap::from([((0, Degree(0)), 1)]));
    assert_eq!(dense_cohomology(&c), BTreeMap::from([((0, Degree(0)), 1)]));
}

#[test]
fn level_zero_differential_is_alternating() {
    let c = amitsur_complex(&spec(FiniteAlgebra::split(3, 2).unwrap(), vec![Degree(0)]), 2, None, 1000).unwrap();
    let expected = c.coface(0, 0).add_scaled(c.coface(0, 1), -1);
    assert_eq!(c.unnormalized_cochains().pieces()[&Degree(0)].differentials[0], expected);
}

#[test]
fn graded_algebra_and_module() {
    // E = F_3[x]/x^3 with |x| = 2 and V in degrees 0 and 3: descent gives V back
    let e = FiniteAlgebra::truncated_polynomial(3, Degree(2), 3).unwrap();
    let c = amitsur_complex(&spec(e, vec![Degree(0), Degree(3)]), 4, Some(Degree(9)), 100_000).unwrap();
    let normalized = cohomology(&c.normalized_cochains().unwrap(), "normalized");
    let expected = BTreeMap::from([((0, Degree(0)), 1), ((0, Degree(3)), 1)]);
    assert_eq!(normalized.entries(), &expected);
    assert_eq!(dense_cohomology(&c), expected);
    assert!(normalized.same_dimensions(&cohomology(&c.unnormalized_cochains(), "")));
}

#[test]
fn zero_module_gives_empty_page() {
    let c = amitsur_complex(&spec(FiniteAlgebra::split(3, 2).unwrap(), vec![]), 3, None, 1000).unwrap();
    let page = cohomology(&c.normalized_cochains().unwrap(), "zero");
    assert!(page.is_empty());
    assert_eq!(page.to_csv(), "s,t,stem,dimension\n");
}

#[test]
fn amitsur_resource_bound() {
    let r = amitsur_complex(&spec(FiniteAlgebra::split(3, 3).unwrap(), vec![Degree(0)]), 8, None, 1000);
    assert!(matches!(r, Err(Error::Resource(_))));
}

#[test]
fn broken_identities_rejected() {
    let c = amitsur_complex(&spec(FiniteAlgebra::split(3, 2).unwrap(), vec![Degree(0)]), 2, None, 1000).unwrap();
    let mut cofaces: Vec<Vec<SparseMatrix>> =
        (0..2).map(|n| (0..=n + 1).map(|i| c.coface(n, i).clone()).collect()).collect();
    let codegeneracies: Vec<Vec<SparseMatrix>> =
        (0..2).map(|n| (0..=n).map(|j| c.codegeneracy(n, j).clone()).collect()).collect();
    cofaces[1].swap(0, 2);
    let levels = (0..=2).map(|n| c.level_degrees(n).to_vec()).collect();
    let r = CosimplicialGradedModule::new(3, levels, cofaces, codegeneracies);
    assert!(matches!(r, Err(Error::Structural(_))), "{r:?}");
}

#[test]
fn nonzero_square_rejected() {
    let mut d0 = SparseMatrix::zeros(1, 1, Some(3));
    d0.set_column(0, [(0, 1)]);
    let piece = DegreeComplex { dims: vec![1, 1, 1], differentials: vec![d0.clone(), d0] };
    let r = CochainComplex::new(3, BTreeMap::from([(Degree(0), piece)]));
    assert!(matches!(r, Err(Error::Structural(_))));
}

#[test]
fn cobar_low_levels() {
    let c = cobar_complex(HopfComoduleSpec { p: 3 }, 1, 5, 1000).unwrap();
    assert_eq!(c.dim(0, Degree(0)), 1);
    assert!((1..=5).all(|t| c.dim(0, Degree(t)) == 0));
    // positive-degree Milnor basis: τ0, ξ1, then τ1 and τ0ξ1
    let level_one: Vec<usize> = (0..=5).map(|t| c.dim(1, Degree(t))).collect();
    assert_eq!(level_one, vec![0, 1, 0, 0, 1, 2]);
}

#[test]
fn adams_window_at_three() {
    let page = adams_e2(3, 4, 16, DEFAULT_LEVEL_BOUND).unwrap();
    for s in 0..=4 {
        assert_eq!(page.dimension(s, Degree(s as i64)), 1, "a0 tower at s = {s}");
    }
    let in_stem = |stem: i64| -> Vec<(usize, usize)> {
        page.entries().iter().filter(|(&(s, t), _)| t.0 - s as i64 == stem).map(|(&(s, _), &d)| (s, d)).collect()
    };
    assert!(in_stem(1).is_empty());
    assert!(in_stem(2).is_empty());
    assert_eq!(in_stem(3), vec![(1, 1)]);
    assert!(page.to_csv().lines().any(|l| l == "1,4,3,1"));
}

#[test]
fn adams_oracle_agrees() {
    let page = adams_e2(3, 3, 12, DEFAULT_LEVEL_BOUND).unwrap();
    for seed in [1, 2] {
        let oracle = adams_e2_oracle(3, 3, 12, seed, DEFAULT_LEVEL_BOUND).unwrap();
        assert!(page.same_dimensions(&oracle), "seed {seed}");
    }
    let normalized = cohomology(&cosimplicial_cobar(3, 3, 12, DEFAULT_LEVEL_BOUND).unwrap().normalized_cochains().unwrap(), "");
    assert!(page.same_dimensions(&normalized));
}

#[test]
fn adams_at_five() {
    let page = adams_e2(5, 3, 10, DEFAULT_LEVEL_BOUND).unwrap();
    // first positive stem is 2p − 3 = 7
    let positive: Vec<_> = page.entries().keys().filter(|&&(s, t)| t.0 > s as i64).collect();
    assert_eq!(positive, vec![&(1, Degree(8))]);
}

#[test]
fn cobar_bound_and_domain_errors() {
    assert!(matches!(cobar_complex(HopfComoduleSpec { p: 3 }, 6, 12, 10), Err(Error::Resource(_))));
    assert!(matches!(adams_e2(2, 2, 8, 1000), Err(Error::Domain(_))));
    assert!(matches!(adams_e2(3, 2, -1, 1000), Err(Error::Domain(_))));
}

#[test]
fn chart_output() {
    let page = E2Page::new(3, Some(0), BTreeMap::from([((0, Degree(0)), 1)]), "single");
    assert_eq!(page.to_csv(), "s,t,stem,dimension\n0,0,0,1\n");
    assert_eq!(page.to_text_chart(), "  0 | 1\n    +--\n s/n  0\n");
    let json = serde_json::to_value(&page).unwrap();
    assert_eq!(json["entries"][0]["stem"], 0);
}

#[test]
fn euler_mismatch_detected() {
    let complex = cobar_complex(HopfComoduleSpec { p: 3 }, 2, 8, 1000).unwrap();
    let page = cohomology(&complex, "");
    assert!(euler_check(&complex, &page).is_ok());
    let mut entries = page.entries().clone();
    entries.insert((1, Degree(2)), 1);
    let wrong = E2Page::new(3, page.max_s(), entries, "");
    assert!(matches!(euler_check(&complex, &wrong), Err(Error::Internal(_))));
}
