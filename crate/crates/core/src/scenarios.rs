//! Pre/post-selection paradoxes as executable scenarios.
//!
//! Each scenario prepares a joint eigenstate (or eigenspace) of one context,
//! post-selects on another, and asks which outcomes of the intermediate
//! contexts can fire. An outcome whose transition amplitude vanishes is
//! *forbidden*; an outcome whose siblings are all forbidden is *forced*. The
//! closed-form predictions of the operator-sandwich arguments are compared
//! against those numerical verdicts, and the forced values are then checked
//! against every classical configuration of a reference context.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graphs::{self, is_ghz_graph, WeightedGraph};
use crate::linalg::{CMatrix, C};
use crate::report::Check;
use crate::root::Root;
use crate::scalar::Real;
use crate::state::{
    abl_probability, amplitude, candidate_eigenvalues, context_projectors, joint_projector,
    Settings, StateVector,
};
use crate::weyl::{parse_weyl, product, MeasurementContext, WeylOperator};

/// A `±1` outcome.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl Sign {
    pub fn value(self) -> i8 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn root(self) -> Root {
        Root::sign(self == Sign::Plus)
    }

    pub fn from_root(r: Root) -> Option<Sign> {
        r.as_sign()
            .map(|p| if p { Sign::Plus } else { Sign::Minus })
    }

    /// Parses a comma-separated triple such as `+,-,+`.
    pub fn parse_list(text: &str) -> Result<Vec<Sign>> {
        text.split(',').map(|t| t.trim().parse()).collect()
    }

    /// All `2^k` sign tuples in lexicographic order (`+` before `-`).
    pub fn all_tuples(k: usize) -> Vec<Vec<Sign>> {
        (0..1usize << k)
            .map(|bits| {
                (0..k)
                    .map(|i| {
                        if bits >> (k - 1 - i) & 1 == 0 {
                            Sign::Plus
                        } else {
                            Sign::Minus
                        }
                    })
                    .collect()
            })
            .collect()
    }
}

impl std::ops::Mul for Sign {
    type Output = Sign;

    fn mul(self, rhs: Sign) -> Sign {
        if self == rhs {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

impl std::ops::Neg for Sign {
    type Output = Sign;

    fn neg(self) -> Sign {
        self * Sign::Minus
    }
}

impl FromStr for Sign {
    type Err = Error;

    fn from_str(s: &str) -> Result<Sign> {
        match s {
            "+" | "+1" | "1" => Ok(Sign::Plus),
            "-" | "-1" => Ok(Sign::Minus),
            other => Err(Error::Parse(format!(
                "expected a sign (+ or -), got `{other}`"
            ))),
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        })
    }
}

fn signs_text(s: &[Sign]) -> String {
    s.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

fn three(s: &[Sign], what: &str) -> Result<[Sign; 3]> {
    s.try_into().map_err(|_| {
        Error::ContractViolation(format!("{what} needs exactly three signs, got {}", s.len()))
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Forbidden,
    Forced,
    Possible,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OutcomeReport {
    /// One eigenvalue per observable of the context.
    pub outcome: Vec<Root>,
    pub label: String,
    /// `⟨ψ_i|Π|ψ_f⟩` as `[re, im]`; absent when a side is a subspace.
    pub amplitude: Option<[f64; 2]>,
    /// `|⟨ψ_i|Π|ψ_f⟩|`, or `‖P_pre Π P_post‖` for subspaces.
    pub magnitude: f64,
    pub probability: Option<f64>,
    pub verdict: Verdict,
    pub predicted: Option<Verdict>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ContextReport {
    pub name: String,
    pub observables: Vec<String>,
    pub outcomes: Vec<OutcomeReport>,
}

impl ContextReport {
    pub fn outcome(&self, outcome: &[Root]) -> Option<&OutcomeReport> {
        self.outcomes.iter().find(|o| o.outcome == outcome)
    }

    pub fn forced(&self) -> Option<&OutcomeReport> {
        self.outcomes.iter().find(|o| o.verdict == Verdict::Forced)
    }

    pub fn forbidden(&self) -> Vec<&OutcomeReport> {
        self.outcomes
            .iter()
            .filter(|o| o.verdict == Verdict::Forbidden)
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassicalCheck {
    /// Observables whose joint eigenbasis lists the classical configurations.
    pub reference: Vec<String>,
    pub configurations: usize,
    /// Configurations agreeing with every forced and forbidden value.
    pub consistent: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SelectionMode {
    States,
    Subspaces,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScenarioReport {
    pub scenario: String,
    pub parameters: BTreeMap<String, String>,
    pub mode: SelectionMode,
    pub feasible: bool,
    /// `|⟨ψ_i|ψ_f⟩|`, or `‖P_pre P_post‖` for subspaces.
    pub overlap: f64,
    pub contexts: Vec<ContextReport>,
    /// Named closed-form quantities (`v_12`, `S_1`, ...).
    pub derived: BTreeMap<String, Root>,
    pub classical: Option<ClassicalCheck>,
    pub contradiction: bool,
    pub checks: Vec<Check>,
    pub derivation: Vec<String>,
}

impl ScenarioReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn context(&self, name: &str) -> Option<&ContextReport> {
        self.contexts.iter().find(|c| c.name == name)
    }

    pub fn derived(&self, name: &str) -> Option<Root> {
        self.derived.get(name).copied()
    }

    /// Largest magnitude among outcomes predicted to be forbidden.
    pub fn worst_predicted_forbidden(&self) -> f64 {
        self.contexts
            .iter()
            .flat_map(|c| &c.outcomes)
            .filter(|o| o.predicted == Some(Verdict::Forbidden))
            .map(|o| o.magnitude)
            .fold(0.0, f64::max)
    }
}

/// A preparation or post-selection: joint outcome of a context.
#[derive(Clone, Debug)]
pub struct Selection {
    pub context: MeasurementContext,
    pub outcomes: Vec<Root>,
}

impl Selection {
    pub fn new(context: MeasurementContext, outcomes: Vec<Root>) -> Self {
        Selection { context, outcomes }
    }

    fn describe(&self) -> String {
        self.context
            .labels()
            .iter()
            .zip(&self.outcomes)
            .map(|(l, o)| format!("{l}={o}"))
            .collect::<Vec<_>>()
            .join(", ")
    }
}

#[derive(Clone, Debug)]
pub struct Intermediate {
    pub name: String,
    pub context: MeasurementContext,
    /// Joint outcomes the closed-form argument says can never fire.
    pub predicted_forbidden: Option<Vec<Vec<Root>>>,
}

#[derive(Clone, Debug)]
pub struct PrePostScenario {
    pub name: String,
    pub preparation: Selection,
    pub postselection: Selection,
    pub intermediates: Vec<Intermediate>,
}

/// Explicit pre- or post-selected state overriding the context's eigenspace.
enum Side<T: Real> {
    State(StateVector<T>),
    Subspace(CMatrix<T>),
}

impl<T: Real> Side<T> {
    fn projector(&self) -> CMatrix<T> {
        match self {
            Side::State(v) => CMatrix::outer(v.amplitudes()),
            Side::Subspace(p) => p.clone(),
        }
    }
}

fn resolve_side<T: Real>(sel: &Selection, settings: &Settings, what: &str) -> Result<Side<T>> {
    let p = joint_projector::<T>(&sel.context, &sel.outcomes, settings.max_dim)?;
    let basis = p.column_basis(settings.tolerance);
    match basis.len() {
        0 => Err(Error::ContractViolation(format!(
            "{what} ({}) is an empty joint eigenspace",
            sel.describe()
        ))),
        1 => Ok(Side::State(StateVector::normalized(
            basis.into_iter().next().expect("one vector"),
        )?)),
        _ => Ok(Side::Subspace(p)),
    }
}

fn to_pair<T: Real>(z: Complex<T>) -> [f64; 2] {
    [z.re.as_f64(), z.im.as_f64()]
}

fn outcome_label(labels: &[String], outcome: &[Root]) -> String {
    labels
        .iter()
        .zip(outcome)
        .map(|(l, o)| format!("{l}={o}"))
        .collect::<Vec<_>>()
        .join(", ")
}

impl PrePostScenario {
    /// Evaluates with the contexts' own joint eigenstates or eigenspaces.
    pub fn evaluate<T: Real>(&self, settings: &Settings) -> Result<ScenarioReport> {
        let pre = resolve_side::<T>(&self.preparation, settings, "preparation")?;
        let post = resolve_side::<T>(&self.postselection, settings, "post-selection")?;
        self.evaluate_sides(pre, post, settings)
    }

    /// Evaluates with explicit pre- and post-selected states.
    pub fn evaluate_with_states<T: Real>(
        &self,
        psi_i: StateVector<T>,
        psi_f: StateVector<T>,
        settings: &Settings,
    ) -> Result<ScenarioReport> {
        self.evaluate_sides(Side::State(psi_i), Side::State(psi_f), settings)
    }

    fn evaluate_sides<T: Real>(
        &self,
        pre: Side<T>,
        post: Side<T>,
        settings: &Settings,
    ) -> Result<ScenarioReport> {
        let tol = settings.tolerance;
        let (mode, overlap, states) = match (&pre, &post) {
            (Side::State(i), Side::State(f)) => (
                SelectionMode::States,
                i.inner(f)?.norm().as_f64(),
                Some((i, f)),
            ),
            _ => {
                let m = pre.projector().matmul(&post.projector());
                (SelectionMode::Subspaces, m.operator_norm().as_f64(), None)
            }
        };
        let feasible = overlap > tol;
        let (p_pre, p_post) = match mode {
            SelectionMode::States => (None, None),
            SelectionMode::Subspaces => (Some(pre.projector()), Some(post.projector())),
        };

        let mut contexts = Vec::new();
        for inter in &self.intermediates {
            let projs = context_projectors::<T>(&inter.context, settings.max_dim)?;
            let mut outcomes = Vec::new();
            for p in &projs {
                let (amp, mag) = match states {
                    Some((i, f)) => {
                        let a = amplitude(i, &p.matrix, f)?;
                        (Some(to_pair(a)), a.norm().as_f64())
                    }
                    None => {
                        let m = p_pre
                            .as_ref()
                            .expect("subspace mode")
                            .matmul(&p.matrix)
                            .matmul(p_post.as_ref().expect("subspace mode"));
                        (None, m.operator_norm().as_f64())
                    }
                };
                let predicted = inter.predicted_forbidden.as_ref().map(|list| {
                    if list.contains(&p.outcome) {
                        Verdict::Forbidden
                    } else {
                        Verdict::Possible
                    }
                });
                outcomes.push(OutcomeReport {
                    outcome: p.outcome.clone(),
                    label: outcome_label(inter.context.labels(), &p.outcome),
                    amplitude: amp,
                    magnitude: mag,
                    probability: None,
                    verdict: if mag < tol {
                        Verdict::Forbidden
                    } else {
                        Verdict::Possible
                    },
                    predicted,
                });
            }
            // Forced: the only outcome left standing.
            let open: Vec<usize> = (0..outcomes.len())
                .filter(|&k| outcomes[k].verdict != Verdict::Forbidden)
                .collect();
            if open.len() == 1 {
                outcomes[open[0]].verdict = Verdict::Forced;
            }
            let predicted_open: Vec<usize> = (0..outcomes.len())
                .filter(|&k| outcomes[k].predicted == Some(Verdict::Possible))
                .collect();
            if predicted_open.len() == 1 {
                outcomes[predicted_open[0]].predicted = Some(Verdict::Forced);
            }
            if let (Some((i, f)), true) = (states, feasible) {
                let mats: Vec<CMatrix<T>> = projs.iter().map(|p| p.matrix.clone()).collect();
                if let Ok(probs) = abl_probability(i, f, &mats, settings) {
                    for (o, pr) in outcomes.iter_mut().zip(probs) {
                        o.probability = Some(pr);
                    }
                }
            }
            contexts.push(ContextReport {
                name: inter.name.clone(),
                observables: inter.context.labels().to_vec(),
                outcomes,
            });
        }

        let mut checks = Vec::new();
        let mut derivation = vec![
            format!("preparation: {}", self.preparation.describe()),
            format!("post-selection: {}", self.postselection.describe()),
            match mode {
                SelectionMode::States => format!("|<psi_i|psi_f>| = {overlap:.6e}"),
                SelectionMode::Subspaces => format!("||P_pre P_post|| = {overlap:.6e}"),
            },
        ];
        if !feasible {
            derivation.push(
                "pre- and post-selected states are orthogonal: the scenario never succeeds".into(),
            );
        }
        if feasible {
            for (inter, ctx) in self.intermediates.iter().zip(&contexts) {
                if inter.predicted_forbidden.is_none() {
                    continue;
                }
                let mut agree = true;
                let mut worst = 0.0f64;
                for o in &ctx.outcomes {
                    let predicted_forbidden = o.predicted == Some(Verdict::Forbidden);
                    if predicted_forbidden {
                        worst = worst.max(o.magnitude);
                    }
                    agree &= predicted_forbidden == (o.verdict == Verdict::Forbidden);
                    if o.verdict == Verdict::Forbidden {
                        derivation.push(format!(
                            "{}: amplitude of [{}] vanishes ({:.2e}), never fires",
                            ctx.name, o.label, o.magnitude
                        ));
                    }
                }
                if let Some(f) = ctx.forced() {
                    derivation.push(format!("{}: [{}] is forced", ctx.name, f.label));
                }
                let mut c = Check::residual(
                    format!("{}: predicted forbidden outcomes vanish", ctx.name),
                    worst,
                    tol,
                    "closed-form prediction vs dense amplitude",
                );
                c.passed &= agree;
                if !agree {
                    c.detail = "numerical forbidden set differs from the prediction".into();
                }
                checks.push(c);
            }
        }

        Ok(ScenarioReport {
            scenario: self.name.clone(),
            parameters: BTreeMap::new(),
            mode,
            feasible,
            overlap,
            contexts,
            derived: BTreeMap::new(),
            classical: None,
            contradiction: false,
            checks,
            derivation,
        })
    }
}

/// Counts configurations of a reference context (one per joint eigenvector)
/// that agree with the given forced values and avoid the forbidden ones.
/// Every constrained observable must be diagonal in the reference basis.
pub fn classical_consistency<T: Real>(
    reference: &MeasurementContext,
    forced: &[(WeylOperator, Root)],
    forbidden: &[(WeylOperator, Root)],
    settings: &Settings,
) -> Result<ClassicalCheck> {
    let configs = context_projectors::<T>(reference, settings.max_dim)?;
    let tol = settings.tolerance.max(T::EPSILON_FLOOR) * 100.0;
    let mut mats = Vec::new();
    for (op, _) in forced.iter().chain(forbidden) {
        mats.push((
            op.to_matrix::<T>(settings.max_dim)?,
            candidate_eigenvalues(op),
        ));
    }
    let mut consistent = 0;
    for cfg in &configs {
        if cfg.rank() != 1 {
            return Err(Error::ContractViolation(
                "reference context is not maximal".into(),
            ));
        }
        let basis = cfg.matrix.column_basis(settings.tolerance);
        let e = &basis[0];
        let mut ok = true;
        for (k, (m, cands)) in mats.iter().enumerate() {
            let oe = m.apply(e);
            let mu = crate::linalg::inner(e, &oe);
            let resid = oe
                .iter()
                .zip(e)
                .map(|(a, b)| (*a - mu * *b).norm_sqr())
                .fold(T::zero(), |x, y| x + y);
            if resid.sqrt().as_f64() > tol {
                return Err(Error::ContractViolation(
                    "constrained observable is not diagonal in the reference basis".into(),
                ));
            }
            let value = cands
                .iter()
                .copied()
                .find(|r| (r.to_complex::<T>() - mu).norm().as_f64() < tol)
                .ok_or_else(|| {
                    Error::ContractViolation("eigenvalue off the expected spectrum".into())
                })?;
            let target = if k < forced.len() {
                forced[k].1
            } else {
                forbidden[k - forced.len()].1
            };
            ok &= if k < forced.len() {
                value == target
            } else {
                value != target
            };
        }
        if ok {
            consistent += 1;
        }
    }
    Ok(ClassicalCheck {
        reference: reference.labels().to_vec(),
        configurations: configs.len(),
        consistent,
    })
}

fn ctx(texts: &[&str], n: usize, d: u32) -> MeasurementContext {
    MeasurementContext::parse(texts, n, d).expect("fixed contexts are valid")
}

fn op(text: &str, n: usize, d: u32) -> WeylOperator {
    parse_weyl(text, n, d).expect("fixed operators are valid")
}

fn identity_check(name: &str, lhs: &WeylOperator, rhs: &WeylOperator) -> Check {
    Check::exact(
        format!("identity {name}"),
        lhs == rhs,
        format!("{lhs} vs {rhs}"),
    )
}

fn attach_classical(report: &mut ScenarioReport, classical: ClassicalCheck) {
    report.contradiction = report.feasible && classical.consistent == 0;
    report.checks.push(Check::exact(
        "no classical configuration reproduces the forced values",
        report.contradiction,
        format!(
            "{} of {} configurations of [{}] consistent",
            classical.consistent,
            classical.configurations,
            classical.reference.join(", ")
        ),
    ));
    report.derivation.push(format!(
        "classical check over {} configurations of [{}]: {} consistent",
        classical.configurations,
        classical.reference.join(", "),
        classical.consistent
    ));
    report.classical = Some(classical);
}

fn forced_probability_check(report: &mut ScenarioReport, tol: f64) {
    let worst = report
        .contexts
        .iter()
        .filter_map(|c| c.forced())
        .map(|o| {
            o.probability
                .map(|p| (1.0 - p).abs())
                .unwrap_or(f64::INFINITY)
        })
        .fold(0.0, f64::max);
    report.checks.push(Check::residual(
        "forced outcomes have ABL probability 1",
        worst,
        tol,
        "",
    ));
}

const PAIRS: [(usize, usize); 3] = [(0, 1), (1, 2), (0, 2)];

fn pair_name(a: usize, b: usize) -> String {
    format!("{}{}", a + 1, b + 1)
}

fn pigeonhole_with(
    name: &str,
    s: [Sign; 3],
    t: [Sign; 3],
    settings: &Settings,
) -> Result<ScenarioReport> {
    let pre = ctx(&["X1", "X2", "X3"], 3, 2);
    let post = ctx(&["Y1", "Y2", "Y3"], 3, 2);
    let mut derived = BTreeMap::new();
    let mut intermediates = Vec::new();
    let mut parity = Sign::Plus;
    for (a, b) in PAIRS {
        let v = s[a] * s[b] * t[a] * t[b];
        parity = parity * v;
        derived.insert(format!("v_{}", pair_name(a, b)), v.root());
        intermediates.push(Intermediate {
            name: format!("Z{}", pair_name(a, b)),
            context: ctx(&[&format!("Z{} Z{}", a + 1, b + 1)], 3, 2),
            predicted_forbidden: Some(vec![vec![v.root()]]),
        });
    }
    let scenario = PrePostScenario {
        name: name.into(),
        preparation: Selection::new(pre, s.iter().map(|x| x.root()).collect()),
        postselection: Selection::new(post, t.iter().map(|x| x.root()).collect()),
        intermediates,
    };
    let mut report = scenario.evaluate::<f64>(settings)?;
    report.parameters.insert("s".into(), signs_text(&s));
    report.parameters.insert("t".into(), signs_text(&t));
    derived.insert("v_12*v_23*v_13".into(), parity.root());
    report.derived = derived;

    for (a, b) in PAIRS {
        let (x, y, z) = (
            op(&format!("X{} X{}", a + 1, b + 1), 3, 2),
            op(&format!("Y{} Y{}", a + 1, b + 1), 3, 2),
            op(&format!("- Z{} Z{}", a + 1, b + 1), 3, 2),
        );
        report.checks.push(identity_check(
            &format!("X{0}·Y{0} = -Z{0}", pair_name(a, b)),
            &x.mul(&y)?,
            &z,
        ));
    }
    report.checks.push(Check::exact(
        "parity v_12 v_23 v_13 = +1",
        parity == Sign::Plus,
        format!("product = {parity}"),
    ));
    report.checks.push(Check::exact(
        "pre/post pair is feasible",
        report.feasible,
        "",
    ));
    forced_probability_check(&mut report, settings.tolerance);

    let forced: Vec<(WeylOperator, Root)> = PAIRS
        .iter()
        .map(|&(a, b)| {
            let v = s[a] * s[b] * t[a] * t[b];
            (op(&format!("Z{} Z{}", a + 1, b + 1), 3, 2), (-v).root())
        })
        .collect();
    let classical =
        classical_consistency::<f64>(&ctx(&["Z1", "Z2", "Z3"], 3, 2), &forced, &[], settings)?;
    attach_classical(&mut report, classical);
    report.derivation.push(format!(
        "forced Z_ab values multiply to {}, while every placement of three pigeons in two holes gives +1",
        (-parity).root()
    ));
    Ok(report)
}

/// Three qubits prepared in `|+,+,+⟩`, post-selected on `|0,0,0⟩_Y`, with
/// the pair tests `Z_{ab}` in between.
pub fn pigeonhole_original(settings: &Settings) -> Result<ScenarioReport> {
    let p = [Sign::Plus; 3];
    pigeonhole_with("pigeonhole-original", p, p, settings)
}

/// Preparation `{X_a} = s`, post-selection `{Y_a} = t`. With
/// `v_ab = s_a s_b t_a t_b`, the detector `Π_ab^{v_ab}` never fires.
pub fn pigeonhole_state_independent(
    s: &[Sign],
    t: &[Sign],
    settings: &Settings,
) -> Result<ScenarioReport> {
    pigeonhole_with("pigeonhole-si", three(s, "s")?, three(t, "t")?, settings)
}

/// Pre-selection anywhere in the `+1` eigenspace of `{X12, X23, X13}`,
/// post-selection anywhere in that of `{Y12, Y23, Y13}`. Without explicit
/// vectors the operator identity `P_pre Π_ab^+ P_post = 0` is checked.
pub fn magic_square_pigeonhole(
    pre_vec: Option<StateVector<f64>>,
    post_vec: Option<StateVector<f64>>,
    settings: &Settings,
) -> Result<ScenarioReport> {
    let pre = Selection::new(ctx(&["X1 X2", "X2 X3", "X1 X3"], 3, 2), vec![Root::ONE; 3]);
    let post = Selection::new(ctx(&["Y1 Y2", "Y2 Y3", "Y1 Y3"], 3, 2), vec![Root::ONE; 3]);
    let intermediates = PAIRS
        .iter()
        .map(|&(a, b)| Intermediate {
            name: format!("Z{}", pair_name(a, b)),
            context: ctx(&[&format!("Z{} Z{}", a + 1, b + 1)], 3, 2),
            predicted_forbidden: Some(vec![vec![Root::ONE]]),
        })
        .collect();
    let scenario = PrePostScenario {
        name: "magic-square".into(),
        preparation: pre.clone(),
        postselection: post.clone(),
        intermediates,
    };
    let check_member = |v: &StateVector<f64>, sel: &Selection, what: &str| -> Result<()> {
        let p = joint_projector::<f64>(&sel.context, &sel.outcomes, settings.max_dim)?;
        let pv = v.apply(&p)?;
        let r = pv
            .iter()
            .zip(v.amplitudes())
            .map(|(a, b)| (*a - *b).norm_sqr())
            .sum::<f64>()
            .sqrt();
        if r > settings.tolerance.max(1e-9) {
            return Err(Error::ContractViolation(format!(
                "{what} lies outside its subspace (residual {r:e})"
            )));
        }
        Ok(())
    };
    let explicit = pre_vec.is_some() || post_vec.is_some();
    let mut report = if explicit {
        let p_pre = joint_projector::<f64>(&pre.context, &pre.outcomes, settings.max_dim)?;
        let p_post = joint_projector::<f64>(&post.context, &post.outcomes, settings.max_dim)?;
        let side = |v: Option<StateVector<f64>>,
                    p: CMatrix<f64>,
                    sel: &Selection,
                    what: &str|
         -> Result<Side<f64>> {
            match v {
                Some(v) => {
                    check_member(&v, sel, what)?;
                    Ok(Side::State(v))
                }
                None => Ok(Side::Subspace(p)),
            }
        };
        let a = side(pre_vec, p_pre, &pre, "pre-selected vector")?;
        let b = side(post_vec, p_post, &post, "post-selected vector")?;
        scenario.evaluate_sides(a, b, settings)?
    } else {
        scenario.evaluate::<f64>(settings)?
    };
    for (a, b) in PAIRS {
        let x = op(&format!("X{} X{}", a + 1, b + 1), 3, 2);
        let y = op(&format!("Y{} Y{}", a + 1, b + 1), 3, 2);
        let z = op(&format!("- Z{} Z{}", a + 1, b + 1), 3, 2);
        report.checks.push(identity_check(
            &format!("X{0}·Y{0} = -Z{0}", pair_name(a, b)),
            &x.mul(&y)?,
            &z,
        ));
    }
    report.checks.push(Check::exact(
        "pre/post subspaces are not orthogonal",
        report.feasible,
        "",
    ));
    let forced: Vec<_> = PAIRS
        .iter()
        .map(|&(a, b)| (op(&format!("Z{} Z{}", a + 1, b + 1), 3, 2), Root::MINUS_ONE))
        .collect();
    let classical =
        classical_consistency::<f64>(&ctx(&["Z1", "Z2", "Z3"], 3, 2), &forced, &[], settings)?;
    attach_classical(&mut report, classical);
    report.parameters.insert(
        "pre".into(),
        if report.mode == SelectionMode::States || explicit {
            "explicit".into()
        } else {
            "subspace".into()
        },
    );
    Ok(report)
}

/// Path qubit 1 and spin qubit 2, prepared in `|Φ+⟩` and post-selected on
/// `|+⟩_1|0⟩_2`.
pub fn cheshire_cat(settings: &Settings) -> Result<ScenarioReport> {
    let mut r = cheshire_with("cheshire", [0, 0, 0, 0], settings)?;
    r.derivation.push(
        "the particle travels along path |0>, its spin is up along x, and path and spin are anti-correlated: the spin is found on path |1>".into(),
    );
    Ok(r)
}

/// Preparation `{X12, Z12} = ((-1)^α, (-1)^β)`, post-selection
/// `{X1, Z2} = ((-1)^μ, (-1)^ν)`. Forced path `u = β+ν`, forced spin
/// `v = α+μ`, forbidden correlation outcome `w = α+β+μ+ν` (all mod 2).
pub fn cheshire_cat_state_independent(
    alpha: u8,
    beta: u8,
    mu: u8,
    nu: u8,
    settings: &Settings,
) -> Result<ScenarioReport> {
    for b in [alpha, beta, mu, nu] {
        if b > 1 {
            return Err(Error::ContractViolation(format!(
                "Cheshire parameters are bits, got {b}"
            )));
        }
    }
    cheshire_with("cheshire-si", [alpha, beta, mu, nu], settings)
}

fn cheshire_with(name: &str, bits: [u8; 4], settings: &Settings) -> Result<ScenarioReport> {
    let [alpha, beta, mu, nu] = bits;
    let u = (beta + nu) % 2;
    let v = (alpha + mu) % 2;
    let w = (alpha + beta + mu + nu) % 2;
    let flip = |b: u8| Root::parity(b + 1);
    let scenario = PrePostScenario {
        name: name.into(),
        preparation: Selection::new(
            ctx(&["X1 X2", "Z1 Z2"], 2, 2),
            vec![Root::parity(alpha), Root::parity(beta)],
        ),
        postselection: Selection::new(
            ctx(&["X1", "Z2"], 2, 2),
            vec![Root::parity(mu), Root::parity(nu)],
        ),
        intermediates: vec![
            Intermediate {
                name: "Z1".into(),
                context: ctx(&["Z1"], 2, 2),
                predicted_forbidden: Some(vec![vec![flip(u)]]),
            },
            Intermediate {
                name: "X2".into(),
                context: ctx(&["X2"], 2, 2),
                predicted_forbidden: Some(vec![vec![flip(v)]]),
            },
            Intermediate {
                name: "Z1X2".into(),
                context: ctx(&["Z1 X2"], 2, 2),
                predicted_forbidden: Some(vec![vec![Root::parity(w)]]),
            },
        ],
    };
    let mut report = scenario.evaluate::<f64>(settings)?;
    for (k, b) in ["alpha", "beta", "mu", "nu"].iter().zip(bits) {
        report.parameters.insert(k.to_string(), b.to_string());
    }
    report.derived.insert("path (-1)^u".into(), Root::parity(u));
    report.derived.insert("spin (-1)^v".into(), Root::parity(v));
    report
        .derived
        .insert("forbidden (-1)^w".into(), Root::parity(w));
    report.derived.insert("forced Z1X2".into(), flip(w));

    let o = |s: &str| op(s, 2, 2);
    report.checks.push(identity_check(
        "Z12·Z2 = Z1",
        &o("Z1 Z2").mul(&o("Z2"))?,
        &o("Z1"),
    ));
    report.checks.push(identity_check(
        "X12·X1 = X2",
        &o("X1 X2").mul(&o("X1"))?,
        &o("X2"),
    ));
    report.checks.push(identity_check(
        "Y12 = -X12·Z12",
        &o("Y1 Y2"),
        &o("- X1 X2").mul(&o("Z1 Z2"))?,
    ));
    report.checks.push(identity_check(
        "Y12·X1Z2 = Z1X2",
        &o("Y1 Y2").mul(&o("X1 Z2"))?,
        &o("Z1 X2"),
    ));
    // Spin on the other path: the forced correlation is anti-aligned with
    // the product of the forced path and spin values.
    let anti = flip(w) == Root::MINUS_ONE * Root::parity(u) * Root::parity(v);
    report.checks.push(Check::exact(
        "forced Z1X2 value is anti-aligned with path·spin",
        anti,
        format!(
            "Z1X2 = {}, path·spin = {}",
            flip(w),
            Root::parity(u) * Root::parity(v)
        ),
    ));
    report.checks.push(Check::exact(
        "pre/post pair is feasible",
        report.feasible,
        "",
    ));
    forced_probability_check(&mut report, settings.tolerance);
    let classical = classical_consistency::<f64>(
        &ctx(&["Z1", "X2"], 2, 2),
        &[
            (o("Z1"), Root::parity(u)),
            (o("X2"), Root::parity(v)),
            (o("Z1 X2"), flip(w)),
        ],
        &[],
        settings,
    )?;
    attach_classical(&mut report, classical);
    report.derivation.push(format!(
        "path |{u}>_1, spin |{}>_2 along x, spin correlated with path |{}>_1",
        if v == 0 { "+" } else { "-" },
        (u + 1) % 2
    ));
    Ok(report)
}

/// Preparation in the common eigenstate of `{G_a = X_a Z_b Z_c}` with
/// eigenvalues `s`, post-selection `{X_a} = t`. Feasible only when
/// `s_1 s_2 s_3 t_1 t_2 t_3 = -1`; then `Z_ab` is forced to `v_ab = t_c s_c`.
pub fn ghz_pentagram(s: &[Sign], t: &[Sign], settings: &Settings) -> Result<ScenarioReport> {
    let s = three(s, "s")?;
    let t = three(t, "t")?;
    let st = s[0] * s[1] * s[2] * t[0] * t[1] * t[2];
    let predicted_feasible = st == Sign::Minus;
    let gens = ["X1 Z2 Z3", "Z1 X2 Z3", "Z1 Z2 X3"];
    let mut intermediates = Vec::new();
    let mut derived = BTreeMap::new();
    let mut parity = Sign::Plus;
    for (a, b) in PAIRS {
        let c = 3 - a - b;
        let v = t[c] * s[c];
        parity = parity * v;
        if predicted_feasible {
            derived.insert(format!("v_{}", pair_name(a, b)), v.root());
        }
        intermediates.push(Intermediate {
            name: format!("Z{}", pair_name(a, b)),
            context: ctx(&[&format!("Z{} Z{}", a + 1, b + 1)], 3, 2),
            predicted_forbidden: predicted_feasible.then(|| vec![vec![(-v).root()]]),
        });
    }
    let scenario = PrePostScenario {
        name: "ghz-pentagram".into(),
        preparation: Selection::new(
            MeasurementContext::with_labels(
                gens.iter().map(|g| op(g, 3, 2)).collect(),
                vec!["G1".into(), "G2".into(), "G3".into()],
            )?,
            s.iter().map(|x| x.root()).collect(),
        ),
        postselection: Selection::new(
            ctx(&["X1", "X2", "X3"], 3, 2),
            t.iter().map(|x| x.root()).collect(),
        ),
        intermediates,
    };
    let mut report = scenario.evaluate::<f64>(settings)?;
    report.parameters.insert("s".into(), signs_text(&s));
    report.parameters.insert("t".into(), signs_text(&t));
    derived.insert("st".into(), st.root());
    if predicted_feasible {
        derived.insert("v_12*v_23*v_13".into(), parity.root());
    }
    report.derived = derived;

    let g: Vec<WeylOperator> = gens.iter().map(|x| op(x, 3, 2)).collect();
    report.checks.push(identity_check(
        "G1·G2·G3 = -X123",
        &product(&g)?,
        &op("- X1 X2 X3", 3, 2),
    ));
    for (a, b) in PAIRS {
        let c = 3 - a - b;
        report.checks.push(identity_check(
            &format!("G{}·X{} = Z{}", c + 1, c + 1, pair_name(a, b)),
            &g[c].mul(&op(&format!("X{}", c + 1), 3, 2))?,
            &op(&format!("Z{} Z{}", a + 1, b + 1), 3, 2),
        ));
    }
    report.checks.push(Check::residual(
        "feasibility matches st = -1",
        if report.feasible == predicted_feasible {
            0.0
        } else {
            1.0
        },
        0.5,
        format!("st = {st}, |<psi_i|psi_f>| = {:.3e}", report.overlap),
    ));
    if predicted_feasible {
        report.checks.push(Check::exact(
            "parity v_12 v_23 v_13 = st = -1",
            parity == Sign::Minus,
            format!("product = {parity}"),
        ));
        forced_probability_check(&mut report, settings.tolerance);
        let forced: Vec<_> = PAIRS
            .iter()
            .map(|&(a, b)| {
                let c = 3 - a - b;
                (
                    op(&format!("Z{} Z{}", a + 1, b + 1), 3, 2),
                    (t[c] * s[c]).root(),
                )
            })
            .collect();
        let classical =
            classical_consistency::<f64>(&ctx(&["Z1", "Z2", "Z3"], 3, 2), &forced, &[], settings)?;
        attach_classical(&mut report, classical);
    } else {
        report.derivation.push("infeasible: -s<psi_i|psi_f> = <psi_i|X123|psi_f> = t<psi_i|psi_f> forces the overlap to vanish".into());
    }
    Ok(report)
}

fn require_ghz(graph: &WeightedGraph) -> Result<()> {
    let v = is_ghz_graph(graph);
    if !v.is_ghz {
        return Err(Error::ContractViolation(format!(
            "not a GHZ graph (vertex sums mod d = {:?}, W mod d = {})",
            v.degrees, v.total_weight
        )));
    }
    Ok(())
}

fn exps_text(e: &[u32]) -> String {
    e.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

fn check_exponents(e: &[u32], graph: &WeightedGraph, what: &str) -> Result<()> {
    if e.len() != graph.n() || e.iter().any(|&k| k >= graph.d()) {
        return Err(Error::ContractViolation(format!(
            "{what} needs {} exponents in 0..{}, got [{}]",
            graph.n(),
            graph.d(),
            exps_text(e)
        )));
    }
    Ok(())
}

fn shift_context(graph: &WeightedGraph) -> MeasurementContext {
    MeasurementContext::with_labels(
        (0..graph.n()).map(|a| graph.single_shift(a)).collect(),
        (1..=graph.n()).map(|a| format!("X{a}")).collect(),
    )
    .expect("shifts commute")
}

fn clock_context(graph: &WeightedGraph) -> MeasurementContext {
    MeasurementContext::with_labels(
        (0..graph.n()).map(|a| graph.single_clock(a)).collect(),
        (1..=graph.n()).map(|a| format!("Z{a}")).collect(),
    )
    .expect("clocks commute")
}

/// Qudit pigeonhole paradox on a GHZ graph. Outcomes are exponents `k`
/// standing for `ω^k`: the preparation has `𝒢_a = ω^{g_a}`, the
/// post-selection `𝒳_a = ω^{h_a}`. Feasible iff `∏h = -∏g`; then
/// `𝒵_{N_a}` is forced to `S_a = g_a h_a^*`.
pub fn qudit_pigeonhole(
    graph: &WeightedGraph,
    g: &[u32],
    h: &[u32],
    settings: &Settings,
) -> Result<ScenarioReport> {
    require_ghz(graph)?;
    check_exponents(g, graph, "g")?;
    check_exponents(h, graph, "h")?;
    let (n, d) = (graph.n(), graph.d());
    let sum = |e: &[u32]| e.iter().map(|&k| k as i64).sum::<i64>();
    let predicted_feasible =
        Root::omega_pow(sum(h), d) == Root::MINUS_ONE * Root::omega_pow(sum(g), d);
    let s_vals: Vec<Root> = (0..n)
        .map(|a| Root::omega_pow(g[a] as i64 - h[a] as i64, d))
        .collect();
    let intermediates = (0..n)
        .map(|a| {
            let zn = graph.neighborhood_clock(a);
            let forbidden = predicted_feasible.then(|| {
                candidate_eigenvalues(&zn)
                    .into_iter()
                    .filter(|r| *r != s_vals[a])
                    .map(|r| vec![r])
                    .collect()
            });
            Intermediate {
                name: format!("ZN{}", a + 1),
                context: MeasurementContext::with_labels(vec![zn], vec![format!("ZN{}", a + 1)])
                    .expect("single observable"),
                predicted_forbidden: forbidden,
            }
        })
        .collect();
    let scenario = PrePostScenario {
        name: "qudit-pigeonhole".into(),
        preparation: Selection::new(
            graphs::generator_context(graph),
            g.iter().map(|&k| Root::omega_pow(k as i64, d)).collect(),
        ),
        postselection: Selection::new(
            shift_context(graph),
            h.iter().map(|&k| Root::omega_pow(k as i64, d)).collect(),
        ),
        intermediates,
    };
    let mut report = scenario.evaluate::<f64>(settings)?;
    report.parameters.insert("graph".into(), graph_text(graph));
    report.parameters.insert("g".into(), exps_text(g));
    report.parameters.insert("h".into(), exps_text(h));

    let gens = graphs::stabilizer_generators(graph);
    report.checks.push(identity_check(
        "∏G_a = -X_V",
        &product(&gens)?,
        &graph.x_all().times_phase(d as i64),
    ));
    for (a, ga) in gens.iter().enumerate() {
        report.checks.push(identity_check(
            &format!("G{0}·X{0}† = ZN{0}", a + 1),
            &ga.mul(&graph.single_shift(a).dagger())?,
            &graph.neighborhood_clock(a),
        ));
    }
    report.checks.push(Check::residual(
        "feasibility matches ∏h = -∏g",
        if report.feasible == predicted_feasible {
            0.0
        } else {
            1.0
        },
        0.5,
        format!("|<psi_i|psi_f>| = {:.3e}", report.overlap),
    ));
    if predicted_feasible {
        let prod_s: Root = s_vals.iter().copied().product();
        for (a, s) in s_vals.iter().enumerate() {
            report.derived.insert(format!("S_{}", a + 1), *s);
        }
        report.derived.insert("∏S_a".into(), prod_s);
        report.checks.push(Check::exact(
            "∏S_a = -1",
            prod_s == Root::MINUS_ONE,
            format!("∏S_a = {prod_s}"),
        ));
        forced_probability_check(&mut report, settings.tolerance);
        let forced: Vec<_> = (0..n)
            .map(|a| (graph.neighborhood_clock(a), s_vals[a]))
            .collect();
        let classical =
            classical_consistency::<f64>(&clock_context(graph), &forced, &[], settings)?;
        attach_classical(&mut report, classical);
        let all_plus = classical_products_all_one(graph);
        report.checks.push(Check::exact(
            "every classical configuration gives ∏_a s^{Γ_a} = +1",
            all_plus,
            format!("{} configurations", (d as usize).pow(n as u32)),
        ));
    }
    Ok(report)
}

/// `∏_a ∏_b s_b^{Γ_ab} = ∏_b s_b^{d_b}`, evaluated on every configuration.
fn classical_products_all_one(graph: &WeightedGraph) -> bool {
    let (n, d) = (graph.n(), graph.d());
    let total = (d as usize).pow(n as u32);
    (0..total).all(|mut code| {
        let mut k = vec![0u64; n];
        for a in (0..n).rev() {
            k[a] = (code % d as usize) as u64;
            code /= d as usize;
        }
        let e: u64 = (0..n)
            .map(|a| {
                (0..n)
                    .map(|b| graph.weight(a, b) as u64 * k[b])
                    .sum::<u64>()
            })
            .sum();
        e.is_multiple_of(d as u64)
    })
}

fn graph_text(graph: &WeightedGraph) -> String {
    let edges: Vec<String> = graph
        .edges()
        .iter()
        .map(|(a, b, w)| format!("{}-{}:{w}", a + 1, b + 1))
        .collect();
    format!("n={} d={} [{}]", graph.n(), graph.d(), edges.join(" "))
}

/// Product-state variant: preparation `{𝒵_a} = ω^{s_a}`, post-selection
/// `{𝒳_a} = ω^{h_a}`. Every pair is feasible; `𝒢_a` is forced to
/// `g_a = h_a S_a` with `S_a = ∏_b s_b^{Γ_ab}`.
pub fn qudit_product_prepost(
    graph: &WeightedGraph,
    s: &[u32],
    h: &[u32],
    settings: &Settings,
) -> Result<ScenarioReport> {
    require_ghz(graph)?;
    check_exponents(s, graph, "s")?;
    check_exponents(h, graph, "h")?;
    let (n, d) = (graph.n(), graph.d());
    let s_vals: Vec<Root> = (0..n)
        .map(|a| {
            Root::omega_pow(
                (0..n)
                    .map(|b| graph.weight(a, b) as i64 * s[b] as i64)
                    .sum(),
                d,
            )
        })
        .collect();
    let g_vals: Vec<Root> = (0..n)
        .map(|a| Root::omega_pow(h[a] as i64, d) * s_vals[a])
        .collect();
    let gens = graphs::stabilizer_generators(graph);
    let intermediates = (0..n)
        .map(|a| Intermediate {
            name: format!("G{}", a + 1),
            context: MeasurementContext::with_labels(
                vec![gens[a].clone()],
                vec![format!("G{}", a + 1)],
            )
            .expect("single observable"),
            predicted_forbidden: Some(
                candidate_eigenvalues(&gens[a])
                    .into_iter()
                    .filter(|r| *r != g_vals[a])
                    .map(|r| vec![r])
                    .collect(),
            ),
        })
        .collect();
    let scenario = PrePostScenario {
        name: "qudit-product".into(),
        preparation: Selection::new(
            clock_context(graph),
            s.iter().map(|&k| Root::omega_pow(k as i64, d)).collect(),
        ),
        postselection: Selection::new(
            shift_context(graph),
            h.iter().map(|&k| Root::omega_pow(k as i64, d)).collect(),
        ),
        intermediates,
    };
    let mut report = scenario.evaluate::<f64>(settings)?;
    report.parameters.insert("graph".into(), graph_text(graph));
    report.parameters.insert("s".into(), exps_text(s));
    report.parameters.insert("h".into(), exps_text(h));
    for a in 0..n {
        report.derived.insert(format!("S_{}", a + 1), s_vals[a]);
        report.derived.insert(format!("g_{}", a + 1), g_vals[a]);
    }
    let prod_s: Root = s_vals.iter().copied().product();
    let prod_g: Root = g_vals.iter().copied().product();
    report.derived.insert("∏S_a".into(), prod_s);
    let derived_xv = Root::MINUS_ONE * prod_g;
    report.derived.insert("X_V from {G_a}".into(), derived_xv);

    // Eigenvalue of the post-selected state under X_V, read off numerically.
    let post = crate::state::joint_eigenstate::<f64>(
        &scenario.postselection.context,
        &scenario.postselection.outcomes,
        settings,
    )?;
    let xv = graph.x_all();
    let mu = crate::linalg::inner(
        post.amplitudes(),
        &post.apply(&xv.to_matrix::<f64>(settings.max_dim)?)?,
    );
    let eigen = candidate_eigenvalues(&xv)
        .into_iter()
        .min_by(|a, b| {
            let da = (a.to_complex::<f64>() - mu).norm();
            let db = (b.to_complex::<f64>() - mu).norm();
            da.total_cmp(&db)
        })
        .expect("nonempty spectrum");
    let eigen_resid = (eigen.to_complex::<f64>() - mu).norm();
    report
        .derived
        .insert("X_V eigenvalue of psi_f".into(), eigen);

    report.checks.push(identity_check(
        "∏G_a = -X_V",
        &product(&gens)?,
        &xv.times_phase(d as i64),
    ));
    for (a, ga) in gens.iter().enumerate() {
        report.checks.push(identity_check(
            &format!("ZN{0}·X{0} = G{0}", a + 1),
            &graph.neighborhood_clock(a).mul(&graph.single_shift(a))?,
            ga,
        ));
    }
    report.checks.push(Check::exact(
        "∏S_a = +1",
        prod_s == Root::ONE,
        format!("∏S_a = {prod_s}"),
    ));
    report.checks.push(Check::exact(
        "pre/post pair is feasible",
        report.feasible,
        "",
    ));
    report.checks.push(Check::residual(
        "post-selected state is an X_V eigenstate",
        eigen_resid,
        settings.tolerance,
        format!("eigenvalue {eigen}"),
    ));
    forced_probability_check(&mut report, settings.tolerance);
    report.contradiction = report.feasible && derived_xv != eigen;
    report.checks.push(Check::exact(
        "X_V dilemma: -∏g_a differs from the post-selected eigenvalue ∏h_a",
        report.contradiction,
        format!("-∏g_a = {derived_xv}, ∏h_a = {eigen}"),
    ));
    report.derivation.push(format!(
        "context {{G_a, X_V}} assigns X_V = -∏g_a = {derived_xv}; the post-selected state has X_V = {eigen}"
    ));
    Ok(report)
}

/// Post-selection success rates for the Cheshire cat prepared in `|Φ+⟩`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuccessProbability {
    /// Probability of the single post-selection `|+⟩_1|0⟩_2`.
    pub fixed: f64,
    /// Probability summed over all four `{X1, Z2}` outcomes.
    pub all_outcomes: f64,
    pub increase_percent: f64,
    pub checks: Vec<Check>,
}

/// Accepting every outcome of `{X1, Z2}` instead of only `(+1, +1)`, which
/// the state-independent scenario allows, raises the success rate from 1/4
/// to 1.
pub fn cheshire_success_probability(settings: &Settings) -> Result<SuccessProbability> {
    use crate::state::{joint_eigenstate, postselection_probability, PostSelection};
    let pre = joint_eigenstate::<f64>(
        &ctx(&["X1 X2", "Z1 Z2"], 2, 2),
        &[Root::ONE, Root::ONE],
        settings,
    )?;
    let post = ctx(&["X1", "Z2"], 2, 2);
    let mut probs = Vec::new();
    for outcome in [[0u8, 0], [0, 1], [1, 0], [1, 1]] {
        let f = joint_eigenstate::<f64>(
            &post,
            &[Root::parity(outcome[0]), Root::parity(outcome[1])],
            settings,
        )?;
        probs.push(postselection_probability(&pre, PostSelection::State(&f))?);
    }
    let fixed = probs[0];
    let all_outcomes: f64 = probs.iter().sum();
    let increase_percent = (all_outcomes / fixed - 1.0) * 100.0;
    let checks = vec![
        Check::residual(
            "fixed post-selection succeeds with probability 1/4",
            (fixed - 0.25).abs(),
            1e-12,
            format!("{fixed}"),
        ),
        Check::residual(
            "accepting all four outcomes succeeds with probability 1",
            (all_outcomes - 1.0).abs(),
            1e-12,
            format!("{all_outcomes}"),
        ),
        Check::residual(
            "success probability rises by 300%",
            (increase_percent - 300.0).abs(),
            1e-9,
            format!("{increase_percent:.6}%"),
        ),
    ];
    Ok(SuccessProbability {
        fixed,
        all_outcomes,
        increase_percent,
        checks,
    })
}

/// Outcome of an exhaustive parameter sweep.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub name: String,
    pub cases: usize,
    pub feasible_cases: usize,
    pub contradictions: usize,
    pub passed_cases: usize,
    pub failures: Vec<String>,
    pub checks: Vec<Check>,
}

impl SweepReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

fn aggregate(name: &str, results: Vec<(String, ScenarioReport)>) -> SweepReport {
    let cases = results.len();
    let feasible_cases = results.iter().filter(|(_, r)| r.feasible).count();
    let contradictions = results.iter().filter(|(_, r)| r.contradiction).count();
    let mut failures = Vec::new();
    for (label, r) in &results {
        if !r.passed() {
            let bad: Vec<_> = r
                .checks
                .iter()
                .filter(|c| !c.passed)
                .map(|c| c.name.clone())
                .collect();
            failures.push(format!("{label}: {}", bad.join("; ")));
        }
    }
    let worst = results
        .iter()
        .map(|(_, r)| r.worst_predicted_forbidden())
        .fold(0.0, f64::max);
    SweepReport {
        name: name.into(),
        cases,
        feasible_cases,
        contradictions,
        passed_cases: cases - failures.len(),
        checks: vec![Check::exact(
            format!("{name}: every case passes"),
            failures.is_empty(),
            format!(
                "{} of {cases} cases pass; largest predicted-forbidden amplitude {worst:.2e}",
                cases - failures.len()
            ),
        )],
        failures,
    }
}

/// All 64 `(s, t)` sign tuples of the state-independent pigeonhole.
pub fn sweep_pigeonhole_si(settings: &Settings) -> Result<SweepReport> {
    let mut out = Vec::new();
    for s in Sign::all_tuples(3) {
        for t in Sign::all_tuples(3) {
            let r = pigeonhole_state_independent(&s, &t, settings)?;
            out.push((format!("s={} t={}", signs_text(&s), signs_text(&t)), r));
        }
    }
    let mut rep = aggregate("pigeonhole-si", out.clone());
    let all_even = out
        .iter()
        .all(|(_, r)| r.derived("v_12*v_23*v_13") == Some(Root::ONE));
    rep.checks
        .push(Check::exact("∏v_ab = +1 for all 64 inputs", all_even, ""));
    Ok(rep)
}

/// All 16 `(α, β, μ, ν)` tuples of the state-independent Cheshire cat.
pub fn sweep_cheshire_si(settings: &Settings) -> Result<SweepReport> {
    let mut out = Vec::new();
    for code in 0u8..16 {
        let b = [code >> 3 & 1, code >> 2 & 1, code >> 1 & 1, code & 1];
        let r = cheshire_cat_state_independent(b[0], b[1], b[2], b[3], settings)?;
        out.push((
            format!("alpha={} beta={} mu={} nu={}", b[0], b[1], b[2], b[3]),
            r,
        ));
    }
    Ok(aggregate("cheshire-si", out))
}

/// All 64 `(s, t)` tuples of the pentagram scenario; the 32 with
/// `st = -1` are feasible.
pub fn sweep_ghz_pentagram(settings: &Settings) -> Result<SweepReport> {
    let mut out = Vec::new();
    for s in Sign::all_tuples(3) {
        for t in Sign::all_tuples(3) {
            let r = ghz_pentagram(&s, &t, settings)?;
            out.push((format!("s={} t={}", signs_text(&s), signs_text(&t)), r));
        }
    }
    let mut rep = aggregate("ghz-pentagram", out.clone());
    let odd = out
        .iter()
        .filter(|(_, r)| r.feasible)
        .all(|(_, r)| r.derived("v_12*v_23*v_13") == Some(Root::MINUS_ONE));
    rep.checks
        .push(Check::exact("∏v_ab = -1 for every feasible input", odd, ""));
    rep.checks.push(Check::exact(
        "exactly half of the inputs are feasible",
        rep.feasible_cases == 32,
        format!("{} feasible", rep.feasible_cases),
    ));
    Ok(rep)
}

fn all_exponent_tuples(n: usize, d: u32) -> Vec<Vec<u32>> {
    let total = (d as usize).pow(n as u32);
    (0..total)
        .map(|mut code| {
            let mut v = vec![0u32; n];
            for a in (0..n).rev() {
                v[a] = (code % d as usize) as u32;
                code /= d as usize;
            }
            v
        })
        .collect()
}

/// Every `(g, h)` pair of the qudit pigeonhole on one graph.
pub fn sweep_qudit_pigeonhole(graph: &WeightedGraph, settings: &Settings) -> Result<SweepReport> {
    let tuples = all_exponent_tuples(graph.n(), graph.d());
    let mut out = Vec::new();
    for g in &tuples {
        for h in &tuples {
            let r = qudit_pigeonhole(graph, g, h, settings)?;
            out.push((format!("g={} h={}", exps_text(g), exps_text(h)), r));
        }
    }
    let mut rep = aggregate("qudit-pigeonhole", out.clone());
    let every_feasible_contradicts = out
        .iter()
        .filter(|(_, r)| r.feasible)
        .all(|(_, r)| r.contradiction);
    rep.checks.push(Check::exact(
        "every feasible pair yields a contradiction",
        every_feasible_contradicts,
        "",
    ));
    Ok(rep)
}

/// Every `(s, h)` pair of the product-state qudit scenario on one graph.
pub fn sweep_qudit_product(graph: &WeightedGraph, settings: &Settings) -> Result<SweepReport> {
    let tuples = all_exponent_tuples(graph.n(), graph.d());
    let mut out = Vec::new();
    for s in &tuples {
        for h in &tuples {
            let r = qudit_product_prepost(graph, s, h, settings)?;
            out.push((format!("s={} h={}", exps_text(s), exps_text(h)), r));
        }
    }
    Ok(aggregate("qudit-product", out))
}

/// Draws a Haar-like random unit vector inside the range of a projector.
pub fn random_state_in<R: rand::Rng>(p: &CMatrix<f64>, rng: &mut R) -> Result<StateVector<f64>> {
    let raw: Vec<C<f64>> = (0..p.cols())
        .map(|_| C::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5))
        .collect();
    StateVector::normalized(p.apply(&raw))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s() -> Settings {
        Settings::default()
    }

    #[test]
    fn sign_parsing_and_tuples() {
        assert_eq!(
            Sign::parse_list("+,-,+").unwrap(),
            vec![Sign::Plus, Sign::Minus, Sign::Plus]
        );
        assert!(Sign::parse_list("+,x").is_err());
        let all = Sign::all_tuples(3);
        assert_eq!(all.len(), 8);
        assert_eq!(all[0], vec![Sign::Plus; 3]);
        assert_eq!(all[7], vec![Sign::Minus; 3]);
    }

    #[test]
    fn original_forbids_every_plus_detector() {
        let r = pigeonhole_original(&s()).unwrap();
        for name in ["Z12", "Z23", "Z13"] {
            let c = r.context(name).unwrap();
            assert_eq!(c.outcome(&[Root::ONE]).unwrap().verdict, Verdict::Forbidden);
            let forced = c.forced().unwrap();
            assert_eq!(forced.outcome, vec![Root::MINUS_ONE]);
            assert!((forced.probability.unwrap() - 1.0).abs() < 1e-12);
        }
        assert!(r.contradiction);
        assert!(r.passed(), "{:#?}", r.checks);
    }

    #[test]
    fn original_minus_amplitude_matches_frozen_oracle() {
        // ⟨+++|Π^-_12|000⟩_Y = (-1 + i)/4, from an independent 8×8 numpy computation.
        let r = pigeonhole_original(&s()).unwrap();
        let a = r
            .context("Z12")
            .unwrap()
            .outcome(&[Root::MINUS_ONE])
            .unwrap()
            .amplitude
            .unwrap();
        assert!(
            (a[0] + 0.25).abs() < 1e-12 && (a[1] - 0.25).abs() < 1e-12,
            "{a:?}"
        );
    }

    #[test]
    fn state_independent_example() {
        use Sign::*;
        let r =
            pigeonhole_state_independent(&[Plus, Minus, Plus], &[Plus, Plus, Minus], &s()).unwrap();
        assert_eq!(r.derived("v_12"), Some(Root::MINUS_ONE));
        assert_eq!(r.derived("v_23"), Some(Root::ONE));
        assert_eq!(r.derived("v_13"), Some(Root::MINUS_ONE));
        assert_eq!(r.derived("v_12*v_23*v_13"), Some(Root::ONE));
        assert_eq!(
            r.context("Z12")
                .unwrap()
                .outcome(&[Root::MINUS_ONE])
                .unwrap()
                .verdict,
            Verdict::Forbidden
        );
        assert!(r.passed());
    }

    #[test]
    fn wrong_arity_is_rejected() {
        assert!(pigeonhole_state_independent(&[Sign::Plus], &[Sign::Plus; 3], &s()).is_err());
    }

    #[test]
    fn cheshire_original() {
        let r = cheshire_cat(&s()).unwrap();
        let z1 = r.context("Z1").unwrap();
        assert!(z1.outcome(&[Root::MINUS_ONE]).unwrap().magnitude < 1e-10);
        assert_eq!(z1.forced().unwrap().outcome, vec![Root::ONE]);
        assert_eq!(z1.forced().unwrap().probability, Some(1.0));
        let zx = r.context("Z1X2").unwrap();
        assert!(zx.outcome(&[Root::ONE]).unwrap().magnitude < 1e-10);
        assert!(r.passed() && r.contradiction);
    }

    #[test]
    fn cheshire_success_rate() {
        let p = cheshire_success_probability(&s()).unwrap();
        assert!((p.fixed - 0.25).abs() < 1e-12);
        assert!((p.all_outcomes - 1.0).abs() < 1e-12);
        assert!(p.checks.iter().all(|c| c.passed));
    }

    #[test]
    fn cheshire_example_tuple() {
        let r = cheshire_cat_state_independent(1, 0, 1, 0, &s()).unwrap();
        assert_eq!(r.derived("path (-1)^u"), Some(Root::ONE));
        assert_eq!(r.derived("spin (-1)^v"), Some(Root::ONE));
        assert_eq!(r.derived("forbidden (-1)^w"), Some(Root::ONE));
        assert!(r.passed());
        assert!(cheshire_cat_state_independent(2, 0, 0, 0, &s()).is_err());
    }

    #[test]
    fn pentagram_infeasible_and_feasible() {
        use Sign::*;
        let r = ghz_pentagram(&[Plus; 3], &[Plus; 3], &s()).unwrap();
        assert!(!r.feasible && r.overlap < 1e-10 && !r.contradiction);
        assert!(r.passed());
        let r = ghz_pentagram(&[Plus; 3], &[Minus, Plus, Plus], &s()).unwrap();
        assert!(r.feasible);
        assert_eq!(r.derived("v_23"), Some(Root::MINUS_ONE));
        assert_eq!(r.derived("v_13"), Some(Root::ONE));
        assert_eq!(r.derived("v_12"), Some(Root::ONE));
        assert!(r.contradiction && r.passed());
    }

    #[test]
    fn qudit_triangle_d2() {
        let t = WeightedGraph::triangle(2, 1).unwrap();
        let r = qudit_pigeonhole(&t, &[0, 0, 0], &[0, 0, 1], &s()).unwrap();
        assert!(
            r.feasible && r.contradiction && r.passed(),
            "{:#?}",
            r.checks
        );
        assert_eq!(r.derived("S_3"), Some(Root::MINUS_ONE));
        assert_eq!(r.derived("S_1"), Some(Root::ONE));
        let r = qudit_pigeonhole(&t, &[0, 0, 0], &[0, 0, 0], &s()).unwrap();
        assert!(!r.feasible && r.passed());
    }

    #[test]
    fn qudit_requires_ghz_graph() {
        let t = WeightedGraph::triangle(4, 1).unwrap();
        assert!(matches!(
            qudit_pigeonhole(&t, &[0; 3], &[0; 3], &s()),
            Err(Error::ContractViolation(_))
        ));
    }

    #[test]
    fn qudit_product_examples() {
        let t = WeightedGraph::triangle(2, 1).unwrap();
        let r = qudit_product_prepost(&t, &[0, 0, 0], &[0, 0, 0], &s()).unwrap();
        assert_eq!(r.derived("X_V from {G_a}"), Some(Root::MINUS_ONE));
        assert_eq!(r.derived("X_V eigenvalue of psi_f"), Some(Root::ONE));
        assert!(r.contradiction && r.passed(), "{:#?}", r.checks);
        let r = qudit_product_prepost(&t, &[0, 1, 0], &[0, 0, 0], &s()).unwrap();
        assert_eq!(r.derived("S_1"), Some(Root::MINUS_ONE));
        assert_eq!(r.derived("S_2"), Some(Root::ONE));
        assert_eq!(r.derived("S_3"), Some(Root::MINUS_ONE));
    }
}
