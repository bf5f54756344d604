//! Named scenarios, sweeps and builtins, each turned into a
//! [`ReportDocument`]. This is what the command-line tool drives.

use rand::seq::SliceRandom;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::graphs::{ghz_check, GraphFile, WeightedGraph};
use crate::ks::{self, ks_search, validate_assignment, RaySet};
use crate::magic::{builtin_configurations, parity_contradiction, MagicConfiguration};
use crate::report::{Check, ReportDocument, ReportKind};
use crate::root::Root;
use crate::scenarios::{self as sc, ScenarioReport, Sign, SweepReport};
use crate::state::{joint_projector, Settings};

/// Seed used when `CONTEXTLAB_SEED` is not set.
pub const DEFAULT_SEED: u64 = 20_150_517;

/// Scenario names accepted by [`run_demo`], with one-line descriptions.
pub const DEMOS: &[(&str, &str)] = &[
    (
        "pigeonhole-original",
        "three qubits, |+,+,+> to |0,0,0>_Y, pair tests Z_ab",
    ),
    (
        "pigeonhole-si",
        "pre {X_a}=s, post {Y_a}=t (flags --s, --t)",
    ),
    (
        "magic-square",
        "pre/post anywhere in the +1 eigenspaces of the square's X and Y rows",
    ),
    (
        "cheshire",
        "path and spin prepared in |Phi+>, post-selected on |+>|0>",
    ),
    (
        "cheshire-si",
        "pre {X12,Z12}, post {X1,Z2} (flags --alpha --beta --mu --nu)",
    ),
    (
        "cheshire-success",
        "post-selection success rate with one vs all four outcomes",
    ),
    (
        "ghz-pentagram",
        "pre {X_aZ_bZ_c}=s, post {X_a}=t (flags --s, --t)",
    ),
    (
        "qudit-pigeonhole",
        "GHZ graph, pre {G_a}=w^g, post {X_a}=w^h (flags --graph --g --h)",
    ),
    (
        "qudit-product",
        "GHZ graph, pre {Z_a}=w^s, post {X_a}=w^h (flags --graph --s-exp --h)",
    ),
];

/// Sweep names accepted by [`run_sweep`].
pub const SWEEPS: &[(&str, &str)] = &[
    ("pigeonhole-si", "all 64 sign tuples (s, t)"),
    ("cheshire-si", "all 16 bit tuples (alpha, beta, mu, nu)"),
    ("ghz-pentagram", "all 64 sign tuples, 32 of them feasible"),
    (
        "qudit-pigeonhole",
        "every (g, h) on a GHZ graph (default: triangle, d=2)",
    ),
    (
        "qudit-product",
        "every (s, h) on a GHZ graph (default: triangle, d=2)",
    ),
    (
        "magic-square-random",
        "100 random pre/post pairs inside the two subspaces",
    ),
];

/// Optional parameters of [`run_demo`] and [`run_sweep`].
#[derive(Clone, Debug, Default)]
pub struct DemoParams {
    pub s: Option<Vec<Sign>>,
    pub t: Option<Vec<Sign>>,
    pub bits: [Option<u8>; 4],
    pub graph: Option<WeightedGraph>,
    pub g: Option<Vec<u32>>,
    pub h: Option<Vec<u32>>,
    pub s_exp: Option<Vec<u32>>,
    pub seed: Option<u64>,
}

/// What the caller expects a run to conclude.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Expectation {
    Sat,
    Unsat,
    Feasible,
    Infeasible,
}

impl std::str::FromStr for Expectation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sat" => Ok(Expectation::Sat),
            "unsat" => Ok(Expectation::Unsat),
            "feasible" => Ok(Expectation::Feasible),
            "infeasible" => Ok(Expectation::Infeasible),
            other => Err(Error::Parse(format!(
                "expected sat, unsat, feasible or infeasible, got `{other}`"
            ))),
        }
    }
}

fn expectation_check(expect: Option<Expectation>, positive: bool, what: &str) -> Option<Check> {
    let e = expect?;
    let wanted = match e {
        Expectation::Sat | Expectation::Feasible => true,
        Expectation::Unsat | Expectation::Infeasible => false,
    };
    Some(Check::exact(
        format!("expected {what}: {}", format!("{e:?}").to_lowercase()),
        wanted == positive,
        format!(
            "observed {}",
            if positive { "positive" } else { "negative" }
        ),
    ))
}

fn default_graph() -> WeightedGraph {
    WeightedGraph::triangle(2, 1).expect("triangle")
}

fn signs(p: &Option<Vec<Sign>>) -> Vec<Sign> {
    p.clone().unwrap_or_else(|| vec![Sign::Plus; 3])
}

fn scenario_doc(r: ScenarioReport, expect: Option<Expectation>) -> ReportDocument {
    let mut checks = r.checks.clone();
    checks.extend(expectation_check(expect, r.feasible, "feasibility"));
    let inputs = json!({ "scenario": r.scenario, "parameters": r.parameters });
    let mut derivation = r.derivation.clone();
    for (k, v) in &r.derived {
        derivation.push(format!("{k} = {v}"));
    }
    ReportDocument::new(
        ReportKind::Scenario,
        r.scenario.clone(),
        inputs,
        checks,
        derivation,
        serde_json::to_value(&r).expect("scenario report serializes"),
    )
}

/// Runs one named scenario.
pub fn run_demo(
    name: &str,
    p: &DemoParams,
    settings: &Settings,
    expect: Option<Expectation>,
) -> Result<ReportDocument> {
    let report = match name {
        "pigeonhole-original" => sc::pigeonhole_original(settings)?,
        "pigeonhole-si" => sc::pigeonhole_state_independent(&signs(&p.s), &signs(&p.t), settings)?,
        "magic-square" => sc::magic_square_pigeonhole(None, None, settings)?,
        "cheshire" => sc::cheshire_cat(settings)?,
        "cheshire-si" => {
            let [a, b, m, n] = p.bits.map(|x| x.unwrap_or(0));
            sc::cheshire_cat_state_independent(a, b, m, n, settings)?
        }
        "cheshire-success" => {
            let r = sc::cheshire_success_probability(settings)?;
            let derivation = vec![
                format!("P(+,0 | Phi+) = {}", r.fixed),
                format!("sum over all four (X1, Z2) outcomes = {}", r.all_outcomes),
                format!("increase = {:.3}%", r.increase_percent),
            ];
            return Ok(ReportDocument::new(
                ReportKind::Scenario,
                "cheshire-success",
                json!({ "scenario": "cheshire-success" }),
                r.checks.clone(),
                derivation,
                serde_json::to_value(&r).expect("serializes"),
            ));
        }
        "ghz-pentagram" => sc::ghz_pentagram(&signs(&p.s), &signs(&p.t), settings)?,
        "qudit-pigeonhole" => {
            let graph = p.graph.clone().unwrap_or_else(default_graph);
            let g = p.g.clone().unwrap_or_else(|| vec![0; graph.n()]);
            let h = p.h.clone().unwrap_or_else(|| {
                let mut h = vec![0; graph.n()];
                if let Some(last) = h.last_mut() {
                    *last = graph.d() / 2;
                }
                h
            });
            sc::qudit_pigeonhole(&graph, &g, &h, settings)?
        }
        "qudit-product" => {
            let graph = p.graph.clone().unwrap_or_else(default_graph);
            let s = p.s_exp.clone().unwrap_or_else(|| vec![0; graph.n()]);
            let h = p.h.clone().unwrap_or_else(|| vec![0; graph.n()]);
            sc::qudit_product_prepost(&graph, &s, &h, settings)?
        }
        other => return Err(Error::Unknown(format!("scenario `{other}`"))),
    };
    Ok(scenario_doc(report, expect))
}

fn sweep_doc(r: SweepReport, inputs: Value) -> ReportDocument {
    let mut derivation = vec![format!(
        "{} cases, {} feasible, {} with a contradiction, {} passing",
        r.cases, r.feasible_cases, r.contradictions, r.passed_cases
    )];
    derivation.extend(r.failures.iter().map(|f| format!("failed: {f}")));
    ReportDocument::new(
        ReportKind::Sweep,
        r.name.clone(),
        inputs,
        r.checks.clone(),
        derivation,
        serde_json::to_value(&r).expect("sweep report serializes"),
    )
}

/// Runs one named exhaustive (or seeded random) sweep.
pub fn run_sweep(name: &str, p: &DemoParams, settings: &Settings) -> Result<ReportDocument> {
    let graph = p.graph.clone().unwrap_or_else(default_graph);
    let (report, inputs) = match name {
        "pigeonhole-si" => (sc::sweep_pigeonhole_si(settings)?, json!({ "sweep": name })),
        "cheshire-si" => (sc::sweep_cheshire_si(settings)?, json!({ "sweep": name })),
        "ghz-pentagram" => (sc::sweep_ghz_pentagram(settings)?, json!({ "sweep": name })),
        "qudit-pigeonhole" => (
            sc::sweep_qudit_pigeonhole(&graph, settings)?,
            json!({ "sweep": name, "graph": GraphFile::from(&graph) }),
        ),
        "qudit-product" => (
            sc::sweep_qudit_product(&graph, settings)?,
            json!({ "sweep": name, "graph": GraphFile::from(&graph) }),
        ),
        "magic-square-random" => {
            let seed = p.seed.unwrap_or(DEFAULT_SEED);
            (
                magic_square_random(100, seed, settings)?,
                json!({ "sweep": name, "seed": seed }),
            )
        }
        other => return Err(Error::Unknown(format!("sweep `{other}`"))),
    };
    Ok(sweep_doc(report, inputs))
}

/// Random states inside the pre- and post-selected subspaces of the square
/// scenario; every pair must forbid all three `Z_ab = +1` detectors.
pub fn magic_square_random(pairs: usize, seed: u64, settings: &Settings) -> Result<SweepReport> {
    let mut rng = crate::seeded_rng(seed);
    let pre_ctx = crate::weyl::MeasurementContext::parse(&["X1 X2", "X2 X3", "X1 X3"], 3, 2)?;
    let post_ctx = crate::weyl::MeasurementContext::parse(&["Y1 Y2", "Y2 Y3", "Y1 Y3"], 3, 2)?;
    let p_pre = joint_projector::<f64>(&pre_ctx, &[Root::ONE; 3], settings.max_dim)?;
    let p_post = joint_projector::<f64>(&post_ctx, &[Root::ONE; 3], settings.max_dim)?;
    let mut cases = 0;
    let mut feasible = 0;
    let mut contradictions = 0;
    let mut failures = Vec::new();
    let mut worst = 0.0f64;
    for k in 0..pairs {
        let a = sc::random_state_in(&p_pre, &mut rng)?;
        let b = sc::random_state_in(&p_post, &mut rng)?;
        let r = sc::magic_square_pigeonhole(Some(a), Some(b), settings)?;
        cases += 1;
        feasible += r.feasible as usize;
        contradictions += r.contradiction as usize;
        worst = worst.max(r.worst_predicted_forbidden());
        if !r.passed() && r.feasible {
            failures.push(format!("pair {k}"));
        }
    }
    Ok(SweepReport {
        name: "magic-square-random".into(),
        cases,
        feasible_cases: feasible,
        contradictions,
        passed_cases: cases - failures.len(),
        checks: vec![Check::residual(
            "Z_ab = +1 never fires for any sampled pair",
            worst,
            settings.tolerance,
            format!("{cases} pairs, seed {seed}"),
        )],
        failures,
    })
}

/// Searches a ray set, re-validates any assignment, and re-runs the search
/// under `orderings` random ray orders to confirm the verdict is stable.
pub fn ks_report(
    rs: &RaySet<f64>,
    preassigned: &[(usize, bool)],
    orderings: usize,
    seed: u64,
    expect: Option<Expectation>,
) -> Result<ReportDocument> {
    let started = std::time::Instant::now();
    let result = ks_search(rs, preassigned)?;
    let elapsed = started.elapsed().as_secs_f64();
    let mut checks = Vec::new();
    if let Some(a) = &result.assignment {
        let bad = validate_assignment(rs, a);
        checks.push(Check::exact(
            "assignment obeys both KS rules",
            bad.is_empty(),
            bad.join("; "),
        ));
    }
    let mut rng = crate::seeded_rng(seed);
    let mut agree = 0;
    for _ in 0..orderings {
        let mut order: Vec<usize> = (0..rs.len()).collect();
        order.shuffle(&mut rng);
        let shuffled = rs.reordered(&order)?;
        let mut position = vec![0; rs.len()];
        for (k, &i) in order.iter().enumerate() {
            position[i] = k;
        }
        let pre: Vec<(usize, bool)> = preassigned.iter().map(|&(i, v)| (position[i], v)).collect();
        if ks_search(&shuffled, &pre)?.satisfiable == result.satisfiable {
            agree += 1;
        }
    }
    if orderings > 0 {
        checks.push(Check::exact(
            "verdict stable under random ray orderings",
            agree == orderings,
            format!("{agree} of {orderings} orderings agree"),
        ));
    }
    checks.extend(expectation_check(expect, result.satisfiable, "verdict"));
    let labels: Vec<&str> = preassigned
        .iter()
        .map(|&(i, _)| rs.rays()[i].label.as_str())
        .collect();
    let mut derivation = vec![
        format!(
            "{} rays in dimension {}, {} bases ({})",
            rs.len(),
            rs.dim(),
            rs.bases().len(),
            if rs.bases_declared() {
                "declared"
            } else {
                "discovered"
            }
        ),
        format!(
            "search: {} decisions, {} propagations, {} conflicts, depth {}, {:.3}s",
            result.stats.decisions,
            result.stats.propagations,
            result.stats.conflicts,
            result.stats.max_depth,
            elapsed
        ),
    ];
    derivation.push(match &result.assignment {
        Some(a) => format!(
            "SAT: rays at 1 = [{}]",
            a.ones()
                .iter()
                .map(|&i| rs.rays()[i].label.as_str())
                .collect::<Vec<_>>()
                .join(", ")
        ),
        None => "UNSAT: no KS value assignment exists (exhaustive)".into(),
    });
    let inputs = json!({
        "rays": rs.len(),
        "dimension": rs.dim(),
        "preassigned": preassigned.iter().map(|&(i, v)| json!({ "ray": rs.rays()[i].label, "value": v as u8 })).collect::<Vec<_>>(),
    });
    let body = json!({
        "satisfiable": result.satisfiable,
        "verdict": if result.satisfiable { "SAT" } else { "UNSAT" },
        "ones": result.assignment.as_ref().map(|a| a.ones().iter().map(|&i| rs.rays()[i].label.clone()).collect::<Vec<_>>()),
        "stats": result.stats,
        "bases": rs.bases().len(),
    });
    Ok(ReportDocument::new(
        ReportKind::KsSearch,
        if labels.is_empty() {
            "ks-search".to_string()
        } else {
            format!("ks-search[{}]", labels.join(","))
        },
        inputs,
        checks,
        derivation,
        body,
    ))
}

/// Parses `label=0,label=1` preassignments against a ray set.
pub fn parse_preassignment(rs: &RaySet<f64>, text: &str) -> Result<Vec<(usize, bool)>> {
    let mut out = Vec::new();
    for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (label, value) = item
            .rsplit_once('=')
            .ok_or_else(|| Error::Parse(format!("expected label=0 or label=1, got `{item}`")))?;
        let v = match value.trim() {
            "0" => false,
            "1" => true,
            other => return Err(Error::Parse(format!("KS values are 0 or 1, got `{other}`"))),
        };
        out.extend(rs.resolve(&[(label.trim(), v)])?);
    }
    Ok(out)
}

pub fn config_report(cfg: &MagicConfiguration, settings: &Settings) -> Result<ReportDocument> {
    let r = parity_contradiction::<f64>(cfg, settings)?;
    let mut derivation = r.derivation.clone();
    if cfg.reconstructed {
        derivation.insert(
            0,
            "line layout reconstructed from the named contexts".into(),
        );
    }
    Ok(ReportDocument::new(
        ReportKind::Configuration,
        cfg.name.clone(),
        serde_json::to_value(cfg.to_file()).expect("serializes"),
        r.checks.clone(),
        derivation,
        serde_json::to_value(&r).expect("parity report serializes"),
    ))
}

/// GHZ-graph report; by default the graph is expected to pass the predicate
/// (`--expect infeasible` flips that).
pub fn ghz_report(
    g: &WeightedGraph,
    settings: &Settings,
    expect: Option<Expectation>,
) -> Result<ReportDocument> {
    let r = ghz_check(g, settings)?;
    let mut checks = r.checks.clone();
    let want = !matches!(expect, Some(Expectation::Infeasible | Expectation::Unsat));
    checks.push(Check::exact(
        if want {
            "graph is a GHZ graph"
        } else {
            "graph is not a GHZ graph"
        },
        r.verdict.is_ghz == want,
        format!(
            "d_a mod d = {:?}, W mod d = {}",
            r.verdict.degrees, r.verdict.total_weight
        ),
    ));
    Ok(ReportDocument::new(
        ReportKind::GhzCheck,
        format!("n={} d={}", g.n(), g.d()),
        serde_json::to_value(GraphFile::from(g)).expect("serializes"),
        checks,
        r.derivation.clone(),
        serde_json::to_value(&r).expect("ghz report serializes"),
    ))
}

/// Every shipped construction as `(file name, JSON text)`.
pub fn export_builtins() -> Vec<(String, String)> {
    let mut out = vec![
        (
            "rays34.json".to_string(),
            ks::builtin_34_rays::<f64>().to_file().to_json(),
        ),
        (
            "rays48.json".to_string(),
            ks::builtin_48_rays::<f64>().to_file().to_json(),
        ),
    ];
    for cfg in builtin_configurations() {
        out.push((format!("{}.json", cfg.name), cfg.to_file().to_json()));
    }
    let mut graphs = vec![("triangle_d2".to_string(), default_graph())];
    for d in [4, 6] {
        graphs.push((
            format!("ghz_triangle_d{d}"),
            WeightedGraph::ghz_triangle(d).expect("even d"),
        ));
    }
    graphs.push((
        "four_vertex_d4".into(),
        WeightedGraph::four_vertex_family(4, 1, 0, 1).expect("valid"),
    ));
    for (name, g) in graphs {
        out.push((format!("{name}.json"), GraphFile::from(&g).to_json()));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_demo_runs_and_passes() {
        let s = Settings::default();
        for (name, _) in DEMOS {
            let doc = run_demo(name, &DemoParams::default(), &s, None).unwrap();
            assert!(doc.passed, "{name}: {:#?}", doc.checks);
        }
        assert!(matches!(
            run_demo("nosuch", &DemoParams::default(), &s, None),
            Err(Error::Unknown(_))
        ));
    }

    #[test]
    fn expectations_gate_the_verdict() {
        let s = Settings::default();
        let doc = run_demo(
            "ghz-pentagram",
            &DemoParams::default(),
            &s,
            Some(Expectation::Infeasible),
        )
        .unwrap();
        assert!(doc.passed);
        let doc = run_demo(
            "ghz-pentagram",
            &DemoParams::default(),
            &s,
            Some(Expectation::Feasible),
        )
        .unwrap();
        assert!(!doc.passed);
    }

    #[test]
    fn ks_report_for_the_pigeonhole_rays() {
        let rs = ks::builtin_34_rays::<f64>();
        let pre = parse_preassignment(&rs, "psi_i=1, psi_f=1").unwrap();
        let doc = ks_report(&rs, &pre, 3, 1, Some(Expectation::Unsat)).unwrap();
        assert!(doc.passed, "{:#?}", doc.checks);
        assert!(parse_preassignment(&rs, "psi_i=2").is_err());
        assert!(parse_preassignment(&rs, "nosuch=1").is_err());
    }

    #[test]
    fn exported_files_parse_back() {
        for (name, text) in export_builtins() {
            let v: Value = serde_json::from_str(&text).unwrap();
            assert!(v.is_object(), "{name}");
        }
    }
}
