//! Acceptance suite: one line per criterion, nonzero exit if any fails.

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::{Command, Stdio};
use std::time::{Duration, Instant};

use dirac_core::descent::{adams_e2, adams_e2_oracle, amitsur_complex, RingMapSpec, DEFAULT_LEVEL_BOUND};
use dirac_core::formal::{CoordinateChange, FormalGroupLaw};
use dirac_core::graded::{sym_power, FiniteAlgebra, GradedModulePresentation, GradedPiece};
use dirac_core::series::{SeriesFamily, TruncatedSeries};
use dirac_core::steenrod::{
    duality_check, psi, verify_hopf, DualityOrientation, MilnorBasisElement, SteenrodElement,
};
use dirac_core::{CoefficientDomain, Degree, GeneratorTable, GradedPolynomial, PolyRing};
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

type Outcome = Result<(), String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)*) => {
        if !$cond {
            return Err(format!($($msg)*));
        }
    };
}

fn fixture(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name).display().to_string()
}

struct CliRun {
    code: i32,
    data: Vec<u8>,
    report: Value,
}

impl CliRun {
    fn json(&self) -> Value {
        serde_json::from_slice(&self.data).expect("json output")
    }
}

/// Runs one job with the data written to a file and returns the data and sidecar.
fn cli(job: &Value, format: &str, threads: usize) -> CliRun {
    let dir = tempfile::tempdir().unwrap();
    let job_path = dir.path().join("job.json");
    std::fs::write(&job_path, job.to_string()).unwrap();
    let out: PathBuf = dir.path().join("out.dat");
    let status = Command::new(env!("CARGO_BIN_EXE_dirac"))
        .args(["--job", job_path.to_str().unwrap(), "--out", out.to_str().unwrap(), "--format", format])
        .args(["--threads", &threads.to_string()])
        .env_remove("DIRAC_CONFIG")
        .stderr(Stdio::null())
        .status()
        .unwrap();
    let report = std::fs::read_to_string(dir.path().join("out.dat.report.json")).unwrap();
    CliRun {
        code: status.code().expect("exited normally"),
        data: std::fs::read(&out).unwrap_or_default(),
        report: serde_json::from_str(&report).unwrap(),
    }
}

fn within(start: Instant, budget: Duration, what: &str) -> Outcome {
    let spent = start.elapsed();
    ensure!(spent < budget, "{what} took {spent:?}, budget {budget:?}");
    Ok(())
}

// ---- 1

/// Coinvariants of the Koszul-signed symmetric group action on the d-fold
/// tensor power of a rank-one odd module: every transposition acts by −1,
/// so the relations are (1 − (−1))·x = 2x as soon as a transposition exists.
fn sym_oracle(d: i64) -> GradedPiece {
    if d >= 2 {
        GradedPiece { rank: 0, torsion: vec![BigInt::from(2)] }
    } else {
        GradedPiece { rank: 1, torsion: vec![] }
    }
}

fn sym_torsion() -> Outcome {
    let start = Instant::now();
    let z = CoefficientDomain::Integers;
    let half = GradedModulePresentation::free(z, vec![Degree(1)]);
    for d in 0..=10 {
        let s = sym_power(&half, d, z).map_err(|e| e.to_string())?;
        let piece = s.graded_piece(Degree(d));
        ensure!(piece == sym_oracle(d), "Sym^{d}: got {piece:?}");
        let elsewhere = s.generator_degrees().into_iter().filter(|&g| g != Degree(d)).count();
        ensure!(elsewhere == 0, "Sym^{d} has generators outside degree {d}");
    }
    within(start, Duration::from_secs(1), "symmetric powers")
}

// ---- 2

/// Exact expansion in `a, c, x, y, z` (exponents in that order) mod 3.
type Dense = BTreeMap<[u32; 5], i64>;

fn dense_mul(p: &Dense, q: &Dense) -> Dense {
    let mut out = Dense::new();
    for (e, a) in p {
        for (f, b) in q {
            let k = std::array::from_fn(|i| e[i] + f[i]);
            *out.entry(k).or_default() += a * b;
        }
    }
    out.retain(|_, v| *v % 3 != 0);
    out
}

fn dense_add(terms: &[&Dense]) -> Dense {
    let mut out = Dense::new();
    for t in terms {
        for (e, v) in t.iter() {
            *out.entry(*e).or_default() += v;
        }
    }
    out.retain(|_, v| v.rem_euclid(3) != 0);
    out
}

fn dense_var(i: usize) -> Dense {
    let mut e = [0; 5];
    e[i] = 1;
    Dense::from([(e, 1)])
}

/// `u + v + a·u·v + c·u²·v²`, the law in the mutated fixture.
fn mutated(u: &Dense, v: &Dense) -> Dense {
    let (a, c) = (dense_var(0), dense_var(1));
    let uv = dense_mul(u, v);
    dense_add(&[u, v, &dense_mul(&a, &uv), &dense_mul(&c, &dense_mul(&uv, &uv))])
}

fn fgl_axioms() -> Outcome {
    let start = Instant::now();
    let x = Degree(-2);
    let zr = PolyRing::new(CoefficientDomain::Integers, GeneratorTable::empty());
    let add = FormalGroupLaw::additive(&zr, &[x], 16).map_err(|e| e.to_string())?;
    ensure!(add.check_axioms().map_err(|e| e.to_string())?.passed(), "additive law fails an axiom");
    let inv = add.inverse_series().map_err(|e| e.to_string())?;
    let inv = inv.component(0).coefficients();
    ensure!(
        inv.len() == 1 && inv[&vec![1]] == GradedPolynomial::constant(&zr, -1),
        "inverse of the additive law is not -x"
    );
    let run = cli(&json!({"command": "fgl-check", "input_paths": [fixture("additive_f3.json")]}), "json", 2);
    ensure!(run.code == 0 && run.report["status"] == "pass", "fgl-check on the additive law did not pass");

    // mutated law: the reported difference must match an exact expansion
    let run = cli(&json!({"command": "fgl-check", "input_paths": [fixture("broken_assoc_f3.json")]}), "json", 2);
    ensure!(run.code == 1 && run.report["status"] == "fail", "mutated law did not fail");
    let w = &run.report["witness"];
    ensure!(w["axiom"] == "associativity", "witness names {}", w["axiom"]);
    let exps: Vec<u32> = serde_json::from_value(w["exponents"].clone()).unwrap();
    let (xs, ys, zs) = (dense_var(2), dense_var(3), dense_var(4));
    let diff = {
        let lhs = mutated(&mutated(&xs, &ys), &zs);
        let rhs = mutated(&xs, &mutated(&ys, &zs));
        let neg: Dense = rhs.into_iter().map(|(e, v)| (e, -v)).collect();
        dense_add(&[&lhs, &neg])
    };
    let min_total = diff.keys().map(|e| e[2] + e[3] + e[4]).min().unwrap_or(0);
    ensure!(exps.iter().sum::<u32>() == min_total, "witness {exps:?} is not of lowest weight {min_total}");
    let mut expected: BTreeMap<String, i64> = BTreeMap::new();
    for (e, v) in diff.iter().filter(|(e, _)| e[2..] == exps[..]) {
        expected.insert(format!("a{}c{}", e[0], e[1]), v.rem_euclid(3));
    }
    let mut reported: BTreeMap<String, i64> = BTreeMap::new();
    for t in w["coefficient"]["terms"].as_array().unwrap() {
        let exp = |n: &str| t["exponents"].get(n).map_or(0, |v| v.as_str().unwrap().parse::<u32>().unwrap());
        let c: i64 = t["coefficient"].as_str().unwrap().parse().unwrap();
        reported.insert(format!("a{}c{}", exp("a"), exp("c")), c.rem_euclid(3));
    }
    ensure!(!expected.is_empty() && expected == reported, "witness {reported:?}, expansion {expected:?}");

    // random coordinate changes transport the additive law to a law
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for case in 0..500 {
        let p = if rng.gen_bool(0.5) { 3 } else { 5 };
        let order = rng.gen_range(2..=12u64);
        let r = PolyRing::new(
            CoefficientDomain::prime_field(p).unwrap(),
            GeneratorTable::new([("u", Degree(2))]).unwrap(),
        );
        let u = GradedPolynomial::var(&r, "u");
        let space = FormalGroupLaw::coordinate_space(&r, &[x], order).map_err(|e| e.to_string())?;
        let lead = GradedPolynomial::constant(&r, rng.gen_range(1..p as i64));
        let mut g = TruncatedSeries::term(&space, &[1], &lead).unwrap();
        for k in 2..=6u32 {
            let c = u.pow(k as u64 - 1).scale(&BigInt::from(rng.gen_range(0..p as i64)));
            g = &g + &TruncatedSeries::term(&space, &[k], &c).unwrap();
        }
        let change = CoordinateChange::new(SeriesFamily::new(&space, vec![g], vec![x]).unwrap())
            .map_err(|e| format!("case {case}: {e}"))?;
        let law = FormalGroupLaw::additive(&r, &[x], order).unwrap();
        let moved = change.act(&law).map_err(|e| format!("case {case}: {e}"))?;
        ensure!(moved.check_axioms().unwrap().passed(), "case {case}: transported law fails an axiom");
    }
    within(start, Duration::from_secs(120), "formal group law checks")
}

// ---- 3

fn partitions(n: usize) -> usize {
    // p(n) by the table of partitions into parts of size at most k
    let mut table = vec![0usize; n + 1];
    table[0] = 1;
    for part in 1..=n {
        for m in part..=n {
            table[m] += table[m - part];
        }
    }
    table[n]
}

fn lazard_ranks() -> Outcome {
    for (max, budget) in [(8, 30), (16, 600)] {
        let start = Instant::now();
        let run = cli(&json!({"command": "lazard-ranks", "params": {"max_degree": max}}), "json", 4);
        ensure!(run.code == 0, "lazard-ranks {max} exited with {}", run.code);
        let ranks = run.json()["ranks"].as_array().unwrap().clone();
        ensure!(ranks.len() == max / 2, "expected {} degrees, got {}", max / 2, ranks.len());
        for (i, r) in ranks.iter().enumerate() {
            let rank: usize = r["rank"].as_str().unwrap().parse().unwrap();
            ensure!(rank == partitions(i + 1), "degree {}: rank {rank}, want {}", 2 * (i + 1), partitions(i + 1));
            ensure!(r["torsion"].as_array().unwrap().is_empty(), "degree {} has torsion", 2 * (i + 1));
        }
        within(start, Duration::from_secs(budget), &format!("Lazard ranks through degree {max}"))?;
    }
    Ok(())
}

// ---- 4

fn hopf() -> Outcome {
    let start = Instant::now();
    for p in [3, 5] {
        let report = verify_hopf(p, Degree(60)).map_err(|e| e.to_string())?;
        ensure!(report.passed(), "p = {p}: {report:?}");
        ensure!(report.basis_checked > 0 && report.pairs_checked > 0, "p = {p}: nothing checked");
    }
    within(start, Duration::from_secs(120), "Hopf verification")
}

// ---- 5

fn duality() -> Outcome {
    let start = Instant::now();
    let report = duality_check(3, Degree(18), DualityOrientation::LeftFirst).map_err(|e| e.to_string())?;
    let names: Vec<&str> = report.entries.iter().map(|e| e.generator.as_str()).collect();
    ensure!(names == ["tau0", "tau1", "tau2", "xi1", "xi2"], "generators {names:?}");
    for e in &report.entries {
        let generator = match e.generator.split_at(e.generator.len() - 1) {
            ("tau", i) => MilnorBasisElement::tau(3, i.parse().unwrap()),
            (_, i) => MilnorBasisElement::xi(3, i.parse().unwrap(), 1),
        };
        let direct = psi(&SteenrodElement::basis(generator)).map_err(|e| e.to_string())?;
        ensure!(e.ok && e.computed == direct, "{}: composite {} but psi {}", e.generator, e.computed, direct);
    }
    let run = cli(&json!({"command": "steenrod-duality", "params": {"p": 3}}), "json", 2);
    ensure!(run.code == 0, "steenrod-duality exited with {}", run.code);
    within(start, Duration::from_secs(60), "duality check")
}

// ---- 6

/// Dimension of the degree-0 cohomology of the cochain complex with
/// differential Σ(−1)^i d^i, from plain Gaussian elimination mod p.
fn dense_rank(mut rows: Vec<Vec<u64>>, p: u64) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(pivot) = (rank..rows.len()).find(|&r| rows[r][c] != 0) else { continue };
        rows.swap(rank, pivot);
        let inv = (1..p).find(|&i| i * rows[rank][c] % p == 1).unwrap();
        let pivot_row: Vec<u64> = rows[rank].iter().map(|&v| v * inv % p).collect();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && row[c] != 0 {
                let f = row[c];
                for (x, &y) in row.iter_mut().zip(&pivot_row) {
                    *x = (*x + (p - f) * y) % p;
                }
            }
        }
        rows[rank] = pivot_row;
        rank += 1;
    }
    rank
}

fn split_descent() -> Outcome {
    let start = Instant::now();
    for n in [2, 3] {
        let run = cli(
            &json!({"command": "amitsur-e2", "params": {"algebra": {"kind": "split", "p": 3, "n": n}, "max_s": 6}}),
            "json",
            4,
        );
        ensure!(run.code == 0, "amitsur-e2 n = {n} exited with {}", run.code);
        let v = run.json();
        ensure!(v["normalized_matches_unnormalized"] == true, "n = {n}: normalized and unnormalized disagree");
        ensure!(v["e2"]["max_s"] == 6, "n = {n}: page stops at {}", v["e2"]["max_s"]);
        let entries = v["e2"]["entries"].clone();
        ensure!(
            entries == json!([{"s": 0, "t": 0, "stem": 0, "dimension": 1}]),
            "n = {n}: entries {entries}"
        );

        let spec = RingMapSpec { algebra: FiniteAlgebra::split(3, n).unwrap(), module_degrees: vec![Degree(0)] };
        let c = amitsur_complex(&spec, 6, None, DEFAULT_LEVEL_BOUND).map_err(|e| e.to_string())?;
        let differential = |k: usize| -> Vec<Vec<u64>> {
            let mut rows = vec![vec![0u64; c.level_dim(k)]; c.level_dim(k + 1)];
            for i in 0..=k + 1 {
                let d = c.coface(k, i).to_fp(3);
                for (r, row) in rows.iter_mut().enumerate() {
                    for (col, x) in row.iter_mut().enumerate() {
                        let v = d.get(r, col);
                        *x = (*x + if i % 2 == 0 { v } else { 3 - v }) % 3;
                    }
                }
            }
            rows
        };
        let ranks: Vec<usize> = (0..6).map(|k| dense_rank(differential(k), 3)).collect();
        for s in 0..6 {
            let h = c.level_dim(s) - ranks[s] - if s == 0 { 0 } else { ranks[s - 1] };
            ensure!(h == usize::from(s == 0), "n = {n}: dense oracle gives dim H^{s} = {h}");
        }
    }
    within(start, Duration::from_secs(30), "split descent")
}

// ---- 7

fn adams_window() -> Outcome {
    let start = Instant::now();
    let run = cli(&json!({"command": "adams-e2", "params": {"p": 3, "max_s": 4, "max_t": 16, "oracle_seed": 11}}), "json", 4);
    ensure!(run.code == 0, "adams-e2 exited with {}", run.code);
    let v = run.json();
    ensure!(v["oracle_agrees"] == true, "cosimplicial oracle disagrees");
    let mut by_stem: BTreeMap<i64, Vec<(u64, u64)>> = BTreeMap::new();
    for e in v["e2"]["entries"].as_array().unwrap() {
        by_stem.entry(e["stem"].as_i64().unwrap()).or_default().push((e["s"].as_u64().unwrap(), e["dimension"].as_u64().unwrap()));
    }
    ensure!(by_stem.get(&0) == Some(&vec![(0, 1), (1, 1), (2, 1), (3, 1), (4, 1)]), "stem 0: {:?}", by_stem.get(&0));
    ensure!(!by_stem.contains_key(&1) && !by_stem.contains_key(&2), "stems 1 and 2 are not empty");
    ensure!(by_stem.get(&3) == Some(&vec![(1, 1)]), "stem 3: {:?}", by_stem.get(&3));
    let csv = cli(&json!({"command": "adams-e2", "params": {"p": 3, "max_s": 4, "max_t": 16}}), "csv", 4);
    ensure!(String::from_utf8(csv.data).unwrap().lines().any(|l| l == "1,4,3,1"), "CSV lacks the row 1,4,3,1");

    let page = adams_e2(3, 4, 16, DEFAULT_LEVEL_BOUND).map_err(|e| e.to_string())?;
    for seed in [1, 2] {
        let oracle = adams_e2_oracle(3, 4, 16, seed, DEFAULT_LEVEL_BOUND).map_err(|e| e.to_string())?;
        ensure!(page.same_dimensions(&oracle), "seed {seed}: oracle page differs");
    }
    within(start, Duration::from_secs(300), "Adams window")
}

// ---- 8

/// Componentwise product in a split algebra.
fn split_solves(doc: &Value, solution: &[Vec<u64>]) -> bool {
    let p = doc["algebra"]["p"].as_u64().unwrap();
    let c: Vec<Vec<Vec<u64>>> = serde_json::from_value(doc["system"]["coefficients"].clone()).unwrap();
    let d: Vec<Vec<u64>> = serde_json::from_value(doc["system"]["rhs"].clone()).unwrap();
    d.iter().enumerate().all(|(i, di)| {
        (0..di.len()).all(|j| c.iter().zip(solution).map(|(row, x)| row[i][j] * x[j]).sum::<u64>() % p == di[j] % p)
    })
}

fn flatness() -> Outcome {
    let start = Instant::now();
    let flat = |name: &str| cli(&json!({"command": "flatness-witness", "input_paths": [fixture(&format!("flatness/{name}.json"))]}), "json", 2);
    for name in ["accept_split2", "accept_split3", "accept_truncated"] {
        let run = flat(name);
        ensure!(run.code == 0 && run.json()["accepted"] == true, "{name} was not accepted");
    }
    for name in ["reject_split2", "reject_split3", "reject_truncated"] {
        let run = flat(name);
        ensure!(run.code == 1 && run.json()["accepted"] == false, "{name} was not rejected");
        ensure!(run.report["witness"].is_object(), "{name}: fail without a witness");
    }
    for name in ["search_split2", "search_split3"] {
        let run = flat(name);
        let outcome = run.json()["outcome"].clone();
        ensure!(run.code == 0 && outcome["status"] == "found", "{name}: {outcome}");
        let doc: Value = serde_json::from_str(&std::fs::read_to_string(fixture(&format!("flatness/{name}.json"))).unwrap()).unwrap();
        let solution: Vec<Vec<u64>> = serde_json::from_value(outcome["solution"].clone()).unwrap();
        ensure!(split_solves(&doc, &solution), "{name}: reported solution does not solve the system");
    }
    let run = flat("search_inconsistent");
    ensure!(run.json()["outcome"]["status"] == "not_found_in_window", "inconsistent system reported a solution");
    within(start, Duration::from_secs(5), "flatness fixtures")
}

// ---- 9

fn determinism() -> Outcome {
    let wide = std::thread::available_parallelism().map_or(4, |n| n.get().max(4));
    let jobs = [
        json!({"command": "fgl-check", "input_paths": [fixture("broken_assoc_f3.json")]}),
        json!({"command": "fgl-invert", "input_paths": [fixture("additive_f3.json")]}),
        json!({"command": "fgl-act", "input_paths": [fixture("additive_f3.json"), fixture("change_f3.json")]}),
        json!({"command": "lazard-ranks", "params": {"max_degree": 12}}),
        json!({"command": "steenrod-psi", "params": {"p": 3, "element": [{"tau": [2]}, {"xi": {"1": 1, "2": 1}, "coefficient": 2}]}}),
        json!({"command": "steenrod-poincare", "params": {"p": 5, "max_degree": 60}}),
        json!({"command": "steenrod-verify", "params": {"p": 3, "max_degree": 36}}),
        json!({"command": "steenrod-duality", "params": {"p": 3, "orientation": "right_first"}}),
        json!({"command": "amitsur-e2", "params": {"algebra": {"kind": "truncated", "p": 3, "degree": 2, "nilpotency": 3}, "module_degrees": [0, 3], "max_s": 3, "max_degree": 9}}),
        json!({"command": "adams-e2", "params": {"p": 3, "max_s": 4, "max_t": 16, "oracle_seed": 3}}),
        json!({"command": "flatness-witness", "input_paths": [fixture("flatness/search_split3.json")]}),
    ];
    for job in &jobs {
        for format in ["json", "csv", "text"] {
            let (a, b) = (cli(job, format, 1), cli(job, format, wide));
            ensure!(a.code == b.code && a.code <= 1, "{}: exit codes {} and {}", job["command"], a.code, b.code);
            ensure!(!a.data.is_empty(), "{} {format}: empty output", job["command"]);
            ensure!(a.data == b.data, "{} {format}: outputs differ between 1 and {wide} threads", job["command"]);
        }
    }
    Ok(())
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("symmetric powers of Z(1/2)", sym_torsion),
        ("formal group law axioms and transport", fgl_axioms),
        ("Lazard ranks are partition numbers", lazard_ranks),
        ("Hopf algebra axioms through degree 60", hopf),
        ("composite of filtered automorphisms reproduces psi", duality),
        ("descent for split covers", split_descent),
        ("Adams E2 window at p = 3", adams_window),
        ("flatness witnesses and search", flatness),
        ("CLI output independent of thread count", determinism),
    ];
    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|e| {
            Err(e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
        });
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(()) => println!("criterion {}: PASS  {name} ({secs:.2}s)", i + 1),
            Err(why) => {
                failures += 1;
                println!("criterion {}: FAIL  {name} ({secs:.2}s): {why}", i + 1);
            }
        }
    }
    if failures > 0 {
        std::process::exit(1);
    }
}
