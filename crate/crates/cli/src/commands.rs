use dirac_core::descent::{
    adams_e2, adams_e2_oracle, amitsur_complex, cohomology, euler_check, E2Page, RingMapSpec,
};
use dirac_core::formal::{lazard_graded_ranks, Axiom, CoordinateChange, FglJson, FglReport, FormalGroupLaw};
use dirac_core::graded::flatness::{check_flatness_witness, search_faithful_flatness_witness, SearchOutcome};
use dirac_core::json::SeriesJson;
use dirac_core::series::{SeriesFamily, TruncatedSeries};
use dirac_core::steenrod::{duality_check, poincare_dims, psi, verify_hopf, DualityOrientation, SteenrodElement};
use dirac_core::{Degree, Error};
use serde::Deserialize;
use serde_json::{json, Value};

use crate::config::Config;
use crate::error::CliError;
use crate::job::{Command, JobSpec};
use crate::output::{csv_table, to_value, Outcome, Status};
use crate::schema::{AlgebraJson, ChangeJson, FlatnessDoc, FlatnessMode, MilnorTermJson};

pub fn run(job: &JobSpec, config: &Config) -> Result<Outcome, CliError> {
    match job.command {
        Command::FglCheck => fgl_check(job),
        Command::FglInvert => fgl_invert(job),
        Command::FglAct => fgl_act(job),
        Command::LazardRanks => lazard_ranks(job, config),
        Command::SteenrodPsi => steenrod_psi(job),
        Command::SteenrodPoincare => steenrod_poincare(job),
        Command::SteenrodVerify => steenrod_verify(job),
        Command::SteenrodDuality => steenrod_duality(job, config),
        Command::AmitsurE2 => amitsur_e2(job, config),
        Command::AdamsE2 => adams(job, config),
        Command::FlatnessWitness => flatness(job),
    }
}

fn status(ok: bool) -> Status {
    if ok {
        Status::Pass
    } else {
        Status::Fail
    }
}

fn no_params(job: &JobSpec) -> Result<(), CliError> {
    #[derive(Deserialize)]
    #[serde(deny_unknown_fields)]
    struct Empty {}
    job.params::<Empty>().map(|_| ())
}

fn load_law(job: &JobSpec, i: usize) -> Result<FormalGroupLaw, CliError> {
    let doc: FglJson = job.input(i, "formal group law")?;
    Ok(FormalGroupLaw::from_json(&doc)?)
}

fn exponents_text(e: &[u32]) -> String {
    e.iter().map(u32::to_string).collect::<Vec<_>>().join(" ")
}

fn axiom_name(a: Axiom) -> &'static str {
    match a {
        Axiom::Unit => "unit",
        Axiom::Associativity => "associativity",
        Axiom::Commutativity => "commutativity",
    }
}

fn axioms_value(report: &FglReport) -> Value {
    json!({
        "passed": report.passed(),
        "unit": report.unit_ok,
        "associativity": report.assoc_ok,
        "commutativity": report.comm_ok,
        "first_failure": report.first_failure.as_ref().map(|f| json!({
            "axiom": f.axiom,
            "component": f.component,
            "exponents": f.exponents,
            "coefficient": f.coefficient.to_json(),
        })),
    })
}

fn axioms_rows(report: &FglReport) -> Vec<Vec<String>> {
    [(Axiom::Unit, report.unit_ok), (Axiom::Associativity, report.assoc_ok), (Axiom::Commutativity, report.comm_ok)]
        .into_iter()
        .map(|(axiom, ok)| {
            let detail = report.first_failure.as_ref().filter(|f| f.axiom == axiom);
            vec![
                axiom_name(axiom).to_string(),
                ok.to_string(),
                detail.map(|f| f.component.to_string()).unwrap_or_default(),
                detail.map(|f| exponents_text(&f.exponents)).unwrap_or_default(),
                detail.map(|f| f.coefficient.to_string()).unwrap_or_default(),
            ]
        })
        .collect()
}

fn axioms_text(report: &FglReport) -> String {
    let mut s = String::new();
    for row in axioms_rows(report) {
        s.push_str(&format!("{:<14}{}\n", row[0], if row[1] == "true" { "ok" } else { "FAILED" }));
    }
    if let Some(f) = &report.first_failure {
        s.push_str(&format!(
            "first failure: {} in component {} at exponents [{}], difference {}\n",
            axiom_name(f.axiom),
            f.component,
            exponents_text(&f.exponents),
            f.coefficient
        ));
    }
    s
}

fn fgl_check(job: &JobSpec) -> Result<Outcome, CliError> {
    no_params(job)?;
    let law = load_law(job, 0)?;
    let report = law.check_axioms()?;
    Ok(Outcome {
        status: status(report.passed()),
        payload: axioms_value(&report),
        witness: report.first_failure.as_ref().map(|_| axioms_value(&report)["first_failure"].clone()),
        csv: csv_table(&["axiom", "ok", "component", "exponents", "coefficient"], axioms_rows(&report)),
        text: axioms_text(&report),
    })
}

fn series_rows(family: &SeriesFamily) -> Vec<Vec<String>> {
    family
        .components()
        .iter()
        .enumerate()
        .flat_map(|(s, c)| {
            c.coefficients()
                .into_iter()
                .map(move |(e, v)| vec![s.to_string(), exponents_text(&e), v.to_string()])
        })
        .collect()
}

fn series_text(family: &SeriesFamily, name: &str) -> String {
    family
        .components()
        .iter()
        .enumerate()
        .map(|(s, c)| format!("{name}{} = {c}\n", s + 1))
        .collect()
}

fn fgl_invert(job: &JobSpec) -> Result<Outcome, CliError> {
    no_params(job)?;
    let law = load_law(job, 0)?;
    let inverse = law.inverse_series()?;
    let components: Vec<SeriesJson> = inverse.components().iter().map(TruncatedSeries::to_json).collect();
    Ok(Outcome {
        status: Status::Pass,
        payload: json!({ "inverse": components }),
        witness: None,
        csv: csv_table(&["component", "exponents", "coefficient"], series_rows(&inverse)),
        text: series_text(&inverse, "i"),
    })
}

fn fgl_act(job: &JobSpec) -> Result<Outcome, CliError> {
    no_params(job)?;
    let law = load_law(job, 0)?;
    let change: ChangeJson = job.input(1, "coordinate change")?;
    let space = FormalGroupLaw::coordinate_space(law.coeff_ring(), law.coordinate_degrees(), law.order())?;
    let comps = change
        .map
        .iter()
        .map(|doc| TruncatedSeries::from_json_in(&space, doc))
        .collect::<dirac_core::Result<Vec<_>>>()?;
    let g = CoordinateChange::new(SeriesFamily::new(&space, comps, law.coordinate_degrees().to_vec())?)?;
    let moved = g.act(&law)?;
    let report = moved.check_axioms()?;
    let mut text = series_text(moved.law(), "f");
    text.push_str(&axioms_text(&report));
    Ok(Outcome {
        status: status(report.passed()),
        payload: json!({
            "law": moved.to_json(),
            "strict": g.is_strict(),
            "axioms": axioms_value(&report),
        }),
        witness: report.first_failure.as_ref().map(|_| axioms_value(&report)["first_failure"].clone()),
        csv: csv_table(&["component", "exponents", "coefficient"], series_rows(moved.law())),
        text,
    })
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MaxDegree {
    max_degree: i64,
}

fn lazard_ranks(job: &JobSpec, config: &Config) -> Result<Outcome, CliError> {
    let MaxDegree { max_degree } = job.params()?;
    let ranks = lazard_graded_ranks(Degree(max_degree), config.lazard_bound)?;
    let torsion = |t: &[dirac_core::json::DecimalBigInt]| t.iter().map(|x| x.0.to_string()).collect::<Vec<_>>().join(" ");
    let rows = ranks.iter().map(|r| vec![r.degree.to_string(), r.rank.to_string(), torsion(&r.torsion)]);
    let text = ranks
        .iter()
        .map(|r| {
            let t = torsion(&r.torsion);
            if t.is_empty() {
                format!("degree {:>3}: Z^{}\n", r.degree, r.rank)
            } else {
                format!("degree {:>3}: Z^{} + torsion {t}\n", r.degree, r.rank)
            }
        })
        .collect();
    Ok(Outcome {
        status: Status::Pass,
        payload: json!({ "ranks": ranks }),
        witness: None,
        csv: csv_table(&["degree", "rank", "torsion"], rows),
        text,
    })
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PsiParams {
    p: u64,
    element: Vec<MilnorTermJson>,
}

fn steenrod_psi(job: &JobSpec) -> Result<Outcome, CliError> {
    let params: PsiParams = job.params()?;
    let terms = params
        .element
        .iter()
        .map(|t| Ok((t.basis(params.p)?, t.coefficient)))
        .collect::<dirac_core::Result<Vec<_>>>()?;
    let x = SteenrodElement::from_terms(params.p, terms)?;
    let image = psi(&x)?;
    let rows = image
        .terms()
        .iter()
        .map(|((l, r), c)| vec![l.to_string(), r.to_string(), c.to_string()]);
    Ok(Outcome {
        status: Status::Pass,
        payload: json!({ "p": params.p, "element": x, "psi": image }),
        witness: None,
        csv: csv_table(&["left", "right", "coefficient"], rows),
        text: format!("psi({x}) = {image}\n"),
    })
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PrimeAndDegree {
    p: u64,
    max_degree: i64,
}

fn steenrod_poincare(job: &JobSpec) -> Result<Outcome, CliError> {
    let PrimeAndDegree { p, max_degree } = job.params()?;
    let dims = poincare_dims(p, Degree(max_degree))?;
    let entries: Vec<Value> = dims.iter().map(|(d, n)| json!({ "degree": d.0, "dimension": n })).collect();
    Ok(Outcome {
        status: Status::Pass,
        payload: json!({ "p": p, "dimensions": entries }),
        witness: None,
        csv: csv_table(&["degree", "dimension"], dims.iter().map(|(d, n)| vec![d.to_string(), n.to_string()])),
        text: dims.iter().map(|(d, n)| format!("{:>4} {n}\n", d.0)).collect(),
    })
}

fn steenrod_verify(job: &JobSpec) -> Result<Outcome, CliError> {
    let PrimeAndDegree { p, max_degree } = job.params()?;
    let report = verify_hopf(p, Degree(max_degree))?;
    let rows = vec![
        vec!["coassociativity".into(), report.basis_checked.to_string(), report.coassociativity_failures.len().to_string()],
        vec!["counit".into(), report.basis_checked.to_string(), report.counit_failures.len().to_string()],
        vec!["algebra_map".into(), report.pairs_checked.to_string(), report.algebra_map_failures.len().to_string()],
    ];
    let text = rows.iter().map(|r| format!("{:<16}{:>8} checked, {} failures\n", r[0], r[1], r[2])).collect();
    let witness = report
        .coassociativity_failures
        .first()
        .map(|m| json!({ "check": "coassociativity", "basis": m }))
        .or_else(|| report.counit_failures.first().map(|m| json!({ "check": "counit", "basis": m })))
        .or_else(|| {
            report.algebra_map_failures.first().map(|(a, b)| json!({ "check": "algebra_map", "left": a, "right": b }))
        });
    Ok(Outcome {
        status: status(report.passed()),
        payload: to_value(&report),
        witness,
        csv: csv_table(&["check", "checked", "failures"], rows),
        text,
    })
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct DualityParams {
    p: u64,
    #[serde(default)]
    jet_degree: Option<i64>,
    #[serde(default)]
    orientation: Option<DualityOrientation>,
}

fn steenrod_duality(job: &JobSpec, config: &Config) -> Result<Outcome, CliError> {
    let params: DualityParams = job.params()?;
    let p = params.p;
    // default: through ξ_2 and τ_2
    let jet = params.jet_degree.unwrap_or_else(|| p.saturating_mul(p).saturating_mul(2).min(i64::MAX as u64) as i64);
    let orientation = params.orientation.unwrap_or(config.duality_orientation);
    let report = duality_check(p, Degree(jet), orientation)?;
    let rows = report
        .entries
        .iter()
        .map(|e| vec![e.generator.clone(), e.ok.to_string(), e.expected.to_string(), e.computed.to_string()]);
    let text = report
        .entries
        .iter()
        .map(|e| format!("{:<6}{}\n", e.generator, if e.ok { "ok" } else { "MISMATCH" }))
        .collect();
    let witness = report.entries.iter().find(|e| !e.ok).map(to_value);
    Ok(Outcome {
        status: status(report.passed()),
        payload: to_value(&report),
        witness,
        csv: csv_table(&["generator", "ok", "expected", "computed"], rows),
        text,
    })
}

fn page_outcome(page: &E2Page, status: Status, payload: Value, witness: Option<Value>) -> Outcome {
    Outcome { status, payload, witness, csv: page.to_csv(), text: page.to_text_chart() }
}

/// First `(s, t)` where two pages disagree.
fn page_difference(a: &E2Page, b: &E2Page) -> Option<Value> {
    let keys: std::collections::BTreeSet<_> = a.entries().keys().chain(b.entries().keys()).collect();
    keys.into_iter().find(|&&(s, t)| a.dimension(s, t) != b.dimension(s, t)).map(|&(s, t)| {
        json!({ "s": s, "t": t.0, "first": a.dimension(s, t), "second": b.dimension(s, t) })
    })
}

fn default_module_degrees() -> Vec<i64> {
    vec![0]
}

fn yes() -> bool {
    true
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct AmitsurParams {
    algebra: AlgebraJson,
    #[serde(default = "default_module_degrees")]
    module_degrees: Vec<i64>,
    max_s: usize,
    #[serde(default)]
    max_degree: Option<i64>,
    #[serde(default = "yes")]
    cross_check: bool,
}

fn internal(e: Error) -> Error {
    match e {
        Error::Structural(m) => Error::Internal(m),
        other => other,
    }
}

fn amitsur_e2(job: &JobSpec, config: &Config) -> Result<Outcome, CliError> {
    let params: AmitsurParams = job.params()?;
    let spec = RingMapSpec {
        algebra: params.algebra.build()?,
        module_degrees: params.module_degrees.iter().map(|&d| Degree(d)).collect(),
    };
    // cohomology at s needs level s + 1
    let module =
        amitsur_complex(&spec, params.max_s + 1, params.max_degree.map(Degree), config.level_bound)?;
    let normalized = module.normalized_cochains().map_err(internal)?;
    let page = cohomology(&normalized, "normalized Amitsur cochains");
    euler_check(&normalized, &page)?;
    let mut witness = None;
    let agrees = if params.cross_check {
        let other = cohomology(&module.unnormalized_cochains(), "unnormalized Amitsur cochains");
        witness = page_difference(&page, &other);
        Some(witness.is_none())
    } else {
        None
    };
    let payload = json!({ "e2": page, "normalized_matches_unnormalized": agrees });
    Ok(page_outcome(&page, status(agrees != Some(false)), payload, witness))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct AdamsParams {
    p: u64,
    max_s: usize,
    max_t: i64,
    #[serde(default)]
    oracle_seed: Option<u64>,
}

fn adams(job: &JobSpec, config: &Config) -> Result<Outcome, CliError> {
    let params: AdamsParams = job.params()?;
    let page = adams_e2(params.p, params.max_s, params.max_t, config.level_bound)?;
    let mut witness = None;
    let agrees = match params.oracle_seed {
        Some(seed) => {
            let oracle = adams_e2_oracle(params.p, params.max_s, params.max_t, seed, config.level_bound)?;
            witness = page_difference(&page, &oracle);
            Some(witness.is_none())
        }
        None => None,
    };
    let payload = json!({ "e2": page, "oracle_agrees": agrees });
    Ok(page_outcome(&page, status(agrees != Some(false)), payload, witness))
}

fn vectors_text(vs: &[Vec<u64>]) -> String {
    vs.iter()
        .map(|v| v.iter().map(u64::to_string).collect::<Vec<_>>().join(" "))
        .collect::<Vec<_>>()
        .join("; ")
}

fn flatness(job: &JobSpec) -> Result<Outcome, CliError> {
    no_params(job)?;
    let doc: FlatnessDoc = job.input(0, "flatness document")?;
    let alg = doc.algebra.build()?;
    let base = doc.base(&alg)?;
    let system = doc.system.system();
    match &doc.mode {
        FlatnessMode::Check { solution, witness } => {
            let ok = check_flatness_witness(&alg, &base, &system, solution, &witness.witness())?;
            let result = if ok { "accepted" } else { "rejected" };
            Ok(Outcome {
                status: status(ok),
                payload: json!({ "mode": "check", "accepted": ok }),
                witness: (!ok).then(|| json!({ "reason": "witness does not express the solution through base solutions" })),
                csv: csv_table(&["mode", "result", "detail"], [vec!["check".into(), result.into(), String::new()]]),
                text: format!("witness {result}\n"),
            })
        }
        FlatnessMode::Search { window } => {
            let outcome = search_faithful_flatness_witness(&alg, &base, &system, window[0]..=window[1])?;
            let (result, detail) = match &outcome {
                SearchOutcome::Found { solution, .. } => ("found", vectors_text(solution)),
                SearchOutcome::NotFoundInWindow => ("not_found_in_window", String::new()),
            };
            let text = if detail.is_empty() { format!("{result}\n") } else { format!("{result}: {detail}\n") };
            Ok(Outcome {
                status: Status::Pass,
                payload: json!({ "mode": "search", "window": window, "outcome": outcome }),
                witness: None,
                csv: csv_table(&["mode", "result", "detail"], [vec!["search".into(), result.into(), detail]]),
                text,
            })
        }
    }
}
