//! Magic configurations and their parity proofs.
//!
//! A configuration is a set of unitary observables (nodes) and a set of
//! lines, each a list of pairwise commuting node occurrences whose product is
//! a scalar. If every node enters the product of all lines in a way that
//! cancels for any unit-modulus value (twice for `±1` observables, or once
//! plain and once daggered), a noncontextual assignment forces that product
//! to be 1. A quantum grand product other than 1 is then a contradiction.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graphs::{stabilizer_generators, WeightedGraph};
use crate::linalg::CMatrix;
use crate::report::Check;
use crate::root::Root;
use crate::scalar::Real;
use crate::state::{candidate_eigenvalues, Settings};
use crate::weyl::{parse_weyl, WeylOperator};

#[derive(Clone, Debug, PartialEq)]
pub struct Node {
    pub label: String,
    pub op: WeylOperator,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Occurrence {
    pub node: usize,
    pub dagger: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Line {
    pub name: String,
    pub members: Vec<Occurrence>,
    /// Claimed product as an exponent of `τ = exp(iπ/d)`, modulo `2d`.
    pub claimed: u32,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MagicConfiguration {
    pub name: String,
    pub n: usize,
    pub d: u32,
    pub nodes: Vec<Node>,
    pub lines: Vec<Line>,
    /// Line memberships rebuilt from the named contexts rather than copied
    /// from a published layout.
    pub reconstructed: bool,
}

impl MagicConfiguration {
    /// Builds a configuration from operator strings. Lines are given as
    /// `(name, [(node, dagger)], claimed τ exponent)`.
    pub fn new(
        name: &str,
        n: usize,
        d: u32,
        nodes: &[(&str, &str)],
        lines: Vec<(String, Vec<(usize, bool)>, i64)>,
    ) -> Result<Self> {
        let nodes = nodes
            .iter()
            .map(|(label, text)| {
                Ok(Node {
                    label: label.to_string(),
                    op: parse_weyl(text, n, d)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let m = 2 * d as i64;
        let lines = lines
            .into_iter()
            .map(|(name, members, claimed)| {
                let members = members
                    .into_iter()
                    .map(|(node, dagger)| {
                        if node >= nodes.len() {
                            return Err(Error::MalformedConfiguration(format!(
                                "line `{name}` refers to missing node {node}"
                            )));
                        }
                        Ok(Occurrence { node, dagger })
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(Line {
                    name,
                    members,
                    claimed: claimed.rem_euclid(m) as u32,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(MagicConfiguration {
            name: name.into(),
            n,
            d,
            nodes,
            lines,
            reconstructed: false,
        })
    }

    fn occurrence_op(&self, o: Occurrence) -> WeylOperator {
        let op = &self.nodes[o.node].op;
        if o.dagger {
            op.dagger()
        } else {
            op.clone()
        }
    }

    fn occurrence_label(&self, o: Occurrence) -> String {
        let l = &self.nodes[o.node].label;
        if o.dagger {
            format!("{l}†")
        } else {
            l.clone()
        }
    }

    pub fn claimed_root(&self, line: &Line) -> Root {
        Root::new(line.claimed as i64, 2 * self.d as u64)
    }

    pub fn line(&self, name: &str) -> Option<&Line> {
        self.lines.iter().find(|l| l.name == name)
    }

    /// Node labels of a line, daggered occurrences marked with `†`.
    pub fn line_labels(&self, line: &Line) -> Vec<String> {
        line.members
            .iter()
            .map(|&o| self.occurrence_label(o))
            .collect()
    }

    /// `(plain, daggered)` occurrence counts per node.
    pub fn occurrences(&self) -> Vec<(usize, usize)> {
        let mut counts = vec![(0, 0); self.nodes.len()];
        for l in &self.lines {
            for o in &l.members {
                if o.dagger {
                    counts[o.node].1 += 1;
                } else {
                    counts[o.node].0 += 1;
                }
            }
        }
        counts
    }

    pub fn to_file(&self) -> ConfigurationFile {
        ConfigurationFile {
            name: self.name.clone(),
            n: self.n,
            d: self.d,
            reconstructed: self.reconstructed,
            nodes: self
                .nodes
                .iter()
                .map(|nd| NodeEntry {
                    label: nd.label.clone(),
                    op: nd.op.to_string(),
                })
                .collect(),
            lines: self
                .lines
                .iter()
                .map(|l| LineEntry {
                    name: l.name.clone(),
                    members: l.members.iter().map(|o| o.node).collect(),
                    dagger: if l.members.iter().any(|o| o.dagger) {
                        Some(l.members.iter().map(|o| o.dagger).collect())
                    } else {
                        None
                    },
                    claimed: l.claimed as i64,
                })
                .collect(),
        }
    }
}

/// Configuration file: node operators in the operator-string grammar, lines
/// as node index lists with optional per-occurrence dagger flags, claimed
/// products as `τ` exponents.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConfigurationFile {
    pub name: String,
    pub n: usize,
    pub d: u32,
    #[serde(default)]
    pub reconstructed: bool,
    pub nodes: Vec<NodeEntry>,
    pub lines: Vec<LineEntry>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NodeEntry {
    pub label: String,
    pub op: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LineEntry {
    pub name: String,
    pub members: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dagger: Option<Vec<bool>>,
    pub claimed: i64,
}

impl ConfigurationFile {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("configuration: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("configurations always serialize")
    }

    pub fn build(&self) -> Result<MagicConfiguration> {
        let nodes: Vec<(&str, &str)> = self
            .nodes
            .iter()
            .map(|n| (n.label.as_str(), n.op.as_str()))
            .collect();
        let mut lines = Vec::new();
        for l in &self.lines {
            let flags = match &l.dagger {
                Some(f) if f.len() != l.members.len() => {
                    return Err(Error::MalformedConfiguration(format!(
                        "line `{}` has {} members but {} dagger flags",
                        l.name,
                        l.members.len(),
                        f.len()
                    )))
                }
                Some(f) => f.clone(),
                None => vec![false; l.members.len()],
            };
            lines.push((
                l.name.clone(),
                l.members.iter().copied().zip(flags).collect(),
                l.claimed,
            ));
        }
        let mut cfg = MagicConfiguration::new(&self.name, self.n, self.d, &nodes, lines)?;
        cfg.reconstructed = self.reconstructed;
        Ok(cfg)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LineResult {
    pub name: String,
    pub members: Vec<String>,
    pub claimed: Root,
    /// Scalar from the exact operator product.
    pub symbolic: Root,
    /// `max |M - symbolic·I|` for the dense product.
    pub matrix_residual: f64,
    pub agrees: bool,
}

/// Multiplies out every line, symbolically and with dense matrices.
pub fn verify_quantum_products<T: Real>(
    cfg: &MagicConfiguration,
    settings: &Settings,
) -> Result<Vec<LineResult>> {
    let mut mats: Vec<Option<CMatrix<T>>> = vec![None; cfg.nodes.len()];
    let mut out = Vec::new();
    for line in &cfg.lines {
        let ops: Vec<WeylOperator> = line.members.iter().map(|&o| cfg.occurrence_op(o)).collect();
        for i in 0..ops.len() {
            for j in i + 1..ops.len() {
                if !ops[i].commutes(&ops[j])? {
                    return Err(Error::MalformedConfiguration(format!(
                        "line `{}`: {} and {} do not commute",
                        line.name,
                        cfg.occurrence_label(line.members[i]),
                        cfg.occurrence_label(line.members[j])
                    )));
                }
            }
        }
        let mut prod = WeylOperator::identity(cfg.n, cfg.d);
        for op in &ops {
            prod = prod.mul(op)?;
        }
        if !prod.is_scalar() {
            return Err(Error::MalformedConfiguration(format!(
                "line `{}` multiplies to {prod}, not a multiple of the identity",
                line.name
            )));
        }
        let symbolic = prod.phase().to_root();

        let mut dense: Option<CMatrix<T>> = None;
        for &o in &line.members {
            if mats[o.node].is_none() {
                mats[o.node] = Some(cfg.nodes[o.node].op.to_matrix::<T>(settings.max_dim)?);
            }
            let m = mats[o.node].as_ref().expect("filled above");
            let m = if o.dagger { m.adjoint() } else { m.clone() };
            dense = Some(match dense {
                None => m,
                Some(acc) => acc.matmul(&m),
            });
        }
        let dense = dense.ok_or_else(|| {
            Error::MalformedConfiguration(format!("line `{}` is empty", line.name))
        })?;
        let target = CMatrix::<T>::identity(dense.rows()).scale(symbolic.to_complex::<T>());
        let residual = (&dense - &target).max_abs().as_f64();
        let claimed = cfg.claimed_root(line);
        out.push(LineResult {
            name: line.name.clone(),
            members: cfg.line_labels(line),
            claimed,
            symbolic,
            matrix_residual: residual,
            agrees: claimed == symbolic && residual < settings.tolerance,
        });
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OccurrenceStructure {
    /// Every node appears an even number of times, never daggered.
    Even,
    /// Every node appears equally often plain and daggered.
    DaggerPaired,
    /// Cancels for every value in each node's spectrum, without fitting
    /// either pattern above.
    Balanced,
    /// Some node survives in the grand product: not a parity proof.
    Unbalanced,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NodeCount {
    pub label: String,
    pub plain: usize,
    pub daggered: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParityReport {
    pub configuration: String,
    pub reconstructed: bool,
    pub lines: Vec<LineResult>,
    pub occurrences: Vec<NodeCount>,
    pub structure: OccurrenceStructure,
    /// Product of the claimed line values.
    pub grand_product: Root,
    /// Product of the computed line values.
    pub quantum_grand_product: Root,
    pub contradiction: bool,
    pub checks: Vec<Check>,
    pub derivation: Vec<String>,
}

impl ParityReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn line(&self, name: &str) -> Option<&LineResult> {
        self.lines.iter().find(|l| l.name == name)
    }
}

fn classify(cfg: &MagicConfiguration) -> OccurrenceStructure {
    let counts = cfg.occurrences();
    if counts.iter().all(|&(p, q)| q == 0 && p % 2 == 0) {
        return OccurrenceStructure::Even;
    }
    if counts.iter().all(|&(p, q)| p == q) {
        return OccurrenceStructure::DaggerPaired;
    }
    // v^(p - q) = 1 for every admissible value v of the node.
    let balanced = counts.iter().zip(&cfg.nodes).all(|(&(p, q), node)| {
        candidate_eigenvalues(&node.op)
            .into_iter()
            .all(|v| v.pow(p as i64 - q as i64) == Root::ONE)
    });
    if balanced {
        OccurrenceStructure::Balanced
    } else {
        OccurrenceStructure::Unbalanced
    }
}

/// Verifies the quantum line products, then decides whether the
/// configuration rules out noncontextual unit-modulus values.
pub fn parity_contradiction<T: Real>(
    cfg: &MagicConfiguration,
    settings: &Settings,
) -> Result<ParityReport> {
    let lines = verify_quantum_products::<T>(cfg, settings)?;
    let counts = cfg.occurrences();
    let structure = classify(cfg);
    let grand_product: Root = cfg.lines.iter().map(|l| cfg.claimed_root(l)).product();
    let quantum_grand_product: Root = lines.iter().map(|l| l.symbolic).product();
    let parity_proof = structure != OccurrenceStructure::Unbalanced;
    let contradiction = parity_proof && grand_product != Root::ONE;

    let mut checks = Vec::new();
    for l in &lines {
        checks.push(Check::exact(
            format!("line {}: claimed product", l.name),
            l.claimed == l.symbolic,
            format!("claimed {}, operator product {}", l.claimed, l.symbolic),
        ));
        checks.push(Check::residual(
            format!("line {}: dense product matches", l.name),
            l.matrix_residual,
            settings.tolerance,
            format!("{} = {}", l.members.join("·"), l.symbolic),
        ));
    }
    let lonely: Vec<&str> = counts
        .iter()
        .zip(&cfg.nodes)
        .filter(|(&(p, q), _)| p + q < 2)
        .map(|(_, n)| n.label.as_str())
        .collect();
    checks.push(Check::exact(
        "every node lies on at least two lines",
        lonely.is_empty(),
        if lonely.is_empty() {
            String::new()
        } else {
            format!("single occurrence: {}", lonely.join(", "))
        },
    ));
    checks.push(Check::exact(
        "noncontextual value assignment impossible",
        contradiction,
        format!("structure {structure:?}, grand product {grand_product}"),
    ));

    let mut derivation: Vec<String> = lines
        .iter()
        .map(|l| format!("{}: {} = {}", l.name, l.members.join("·"), l.symbolic))
        .collect();
    derivation.push(format!("product over all lines = {quantum_grand_product}"));
    derivation.push(match structure {
        OccurrenceStructure::Even => "each observable appears an even number of times: any ±1 values multiply to 1".into(),
        OccurrenceStructure::DaggerPaired => "each observable appears once plain and once daggered: any unit-modulus values multiply to 1".into(),
        OccurrenceStructure::Balanced => "every observable's occurrences cancel on its spectrum: noncontextual values multiply to 1".into(),
        OccurrenceStructure::Unbalanced => "some observable does not cancel: not a parity proof".into(),
    });
    if contradiction {
        derivation.push(format!(
            "1 ≠ {grand_product}: noncontextual value assignment impossible"
        ));
    }
    Ok(ParityReport {
        configuration: cfg.name.clone(),
        reconstructed: cfg.reconstructed,
        lines,
        occurrences: counts
            .iter()
            .zip(&cfg.nodes)
            .map(|(&(plain, daggered), n)| NodeCount {
                label: n.label.clone(),
                plain,
                daggered,
            })
            .collect(),
        structure,
        grand_product,
        quantum_grand_product,
        contradiction,
        checks,
        derivation,
    })
}

fn plain(nodes: &[usize]) -> Vec<(usize, bool)> {
    nodes.iter().map(|&i| (i, false)).collect()
}

/// Two-qubit square; rows and columns are both lines.
pub fn pm_square_2q() -> MagicConfiguration {
    let nodes = [
        ("X1", "X1"),
        ("X2", "X2"),
        ("X12", "X1 X2"),
        ("Z2", "Z2"),
        ("Z1", "Z1"),
        ("Z12", "Z1 Z2"),
        ("X1Z2", "X1 Z2"),
        ("Z1X2", "Z1 X2"),
        ("Y12", "Y1 Y2"),
    ];
    square("pm_square_2q", 2, &nodes, [0, 0, 0], [0, 0, 2])
}

fn square(
    name: &str,
    n: usize,
    nodes: &[(&str, &str)],
    rows: [i64; 3],
    cols: [i64; 3],
) -> MagicConfiguration {
    let k = nodes.len() / 3;
    let mut lines = Vec::new();
    for r in 0..3 {
        lines.push((
            format!("row{}", r + 1),
            plain(&(r * k..(r + 1) * k).collect::<Vec<_>>()),
            rows[r],
        ));
    }
    for c in 0..k {
        lines.push((
            format!("col{}", c + 1),
            plain(&[c, k + c, 2 * k + c]),
            cols[c],
        ));
    }
    MagicConfiguration::new(name, n, 2, nodes, lines).expect("builtin configuration")
}

/// The odd-`n` square: rows of `X_aX_{a+1}`, `Z_aZ_{a+1}`, `Y_aY_{a+1}` over
/// the cyclic pairs, one column per pair.
pub fn pm_square_odd(n: usize) -> Result<MagicConfiguration> {
    if n < 3 || n.is_multiple_of(2) {
        return Err(Error::ContractViolation(format!(
            "the square needs an odd number of qubits ≥ 3, got {n}"
        )));
    }
    let pairs: Vec<(usize, usize)> = (0..n)
        .map(|a| {
            let b = (a + 1) % n;
            (a.min(b) + 1, a.max(b) + 1)
        })
        .collect();
    let mut owned = Vec::new();
    for p in ['X', 'Z', 'Y'] {
        for &(a, b) in &pairs {
            owned.push((format!("{p}{a}{b}"), format!("{p}{a} {p}{b}")));
        }
    }
    let nodes: Vec<(&str, &str)> = owned
        .iter()
        .map(|(l, o)| (l.as_str(), o.as_str()))
        .collect();
    let mut lines = Vec::new();
    for r in 0..3 {
        lines.push((
            format!("row{}", r + 1),
            plain(&(r * n..(r + 1) * n).collect::<Vec<_>>()),
            0,
        ));
    }
    for c in 0..n {
        lines.push((format!("col{}", c + 1), plain(&[c, n + c, 2 * n + c]), 2));
    }
    MagicConfiguration::new(&format!("pm_square_{n}q"), n, 2, &nodes, lines)
}

/// Three-qubit square: rows `{X12, X23, X13}`, `{Z12, Z23, Z13}`,
/// `{Y12, Y23, Y13}`.
pub fn pm_square_3q() -> MagicConfiguration {
    let nodes = [
        ("X12", "X1 X2"),
        ("X23", "X2 X3"),
        ("X13", "X1 X3"),
        ("Z12", "Z1 Z2"),
        ("Z23", "Z2 Z3"),
        ("Z13", "Z1 Z3"),
        ("Y12", "Y1 Y2"),
        ("Y23", "Y2 Y3"),
        ("Y13", "Y1 Y3"),
    ];
    square("pm_square_3q", 3, &nodes, [0, 0, 0], [2, 2, 2])
}

/// Rows `{𝒳_a, 𝒳_V†}`, `{𝒵_{N_a}, I}`, `{𝒢_a†, 𝒳_V}` as plain lines and the
/// `n + 1` columns as daggered lines.
pub fn qudit_config(graph: &WeightedGraph) -> Result<MagicConfiguration> {
    let (n, d) = (graph.n(), graph.d());
    let gens = stabilizer_generators(graph);
    let xv = graph.x_all();
    let mut nodes: Vec<(String, WeylOperator)> = Vec::new();
    for a in 0..n {
        nodes.push((format!("X{}", a + 1), graph.single_shift(a)));
    }
    nodes.push(("XV†".into(), xv.dagger()));
    for a in 0..n {
        nodes.push((format!("ZN{}", a + 1), graph.neighborhood_clock(a)));
    }
    nodes.push(("I".into(), WeylOperator::identity(n, d)));
    for (a, g) in gens.iter().enumerate() {
        nodes.push((format!("G{}†", a + 1), g.dagger()));
    }
    nodes.push(("XV".into(), xv));
    let k = n + 1;
    let mut lines = Vec::new();
    for r in 0..3 {
        let claimed = if r == 2 { d as i64 } else { 0 };
        lines.push((
            format!("row{}", r + 1),
            plain(&(r * k..(r + 1) * k).collect::<Vec<_>>()),
            claimed,
        ));
    }
    for c in 0..k {
        lines.push((
            format!("col{}", c + 1),
            vec![(c, true), (k + c, true), (2 * k + c, true)],
            0,
        ));
    }
    let texts: Vec<(String, String)> = nodes
        .iter()
        .map(|(l, op)| (l.clone(), op.to_string()))
        .collect();
    let refs: Vec<(&str, &str)> = texts
        .iter()
        .map(|(l, o)| (l.as_str(), o.as_str()))
        .collect();
    MagicConfiguration::new(&format!("qudit_config(n={n},d={d})"), n, d, &refs, lines)
}

/// Three-qubit configuration rebuilt from the contexts `{X_a}`, `{Y_a}`,
/// `{Z_a}` and `{X_ab, Y_ab, Z_c}`: for each pair, the lines
/// `{P_a, P_b, P_ab}` (`P = X, Y, Z`) with product `+1` and
/// `{X_ab, Y_ab, Z_ab}` with product `-1`.
pub fn wa_triangle_3q() -> MagicConfiguration {
    let pairs = [(1, 2), (2, 3), (1, 3)];
    let mut owned: Vec<(String, String)> = Vec::new();
    for p in ['X', 'Y', 'Z'] {
        for a in 1..=3 {
            owned.push((format!("{p}{a}"), format!("{p}{a}")));
        }
    }
    for p in ['X', 'Y', 'Z'] {
        for (a, b) in pairs {
            owned.push((format!("{p}{a}{b}"), format!("{p}{a} {p}{b}")));
        }
    }
    let idx = |label: &str| {
        owned
            .iter()
            .position(|(l, _)| l == label)
            .expect("node exists")
    };
    let mut lines = Vec::new();
    for (a, b) in pairs {
        for p in ['X', 'Y', 'Z'] {
            lines.push((
                format!("{p}{a}·{p}{b}·{p}{a}{b}"),
                plain(&[
                    idx(&format!("{p}{a}")),
                    idx(&format!("{p}{b}")),
                    idx(&format!("{p}{a}{b}")),
                ]),
                0,
            ));
        }
        lines.push((
            format!("X{a}{b}·Y{a}{b}·Z{a}{b}"),
            plain(&[
                idx(&format!("X{a}{b}")),
                idx(&format!("Y{a}{b}")),
                idx(&format!("Z{a}{b}")),
            ]),
            2,
        ));
    }
    let refs: Vec<(&str, &str)> = owned
        .iter()
        .map(|(l, o)| (l.as_str(), o.as_str()))
        .collect();
    let mut cfg = MagicConfiguration::new("wa_triangle_3q", 3, 2, &refs, lines)
        .expect("builtin configuration");
    cfg.reconstructed = true;
    cfg
}

/// Ten observables `G_a = X_aZ_bZ_c`, `X_a`, `Z_ab`, `X123` on six lines:
/// `{G_1, G_2, G_3, X123}` (product `-1`), `{X_1, X_2, X_3, X123}`,
/// `{G_c, X_c, Z_ab}` for each `c`, and `{Z12, Z23, Z13}`.
pub fn pentagram_3q() -> MagicConfiguration {
    let nodes = [
        ("G1", "X1 Z2 Z3"),
        ("G2", "Z1 X2 Z3"),
        ("G3", "Z1 Z2 X3"),
        ("X123", "X1 X2 X3"),
        ("X1", "X1"),
        ("X2", "X2"),
        ("X3", "X3"),
        ("Z23", "Z2 Z3"),
        ("Z13", "Z1 Z3"),
        ("Z12", "Z1 Z2"),
    ];
    let lines = vec![
        ("G1·G2·G3·X123".to_string(), plain(&[0, 1, 2, 3]), 2),
        ("X1·X2·X3·X123".to_string(), plain(&[4, 5, 6, 3]), 0),
        ("G1·X1·Z23".to_string(), plain(&[0, 4, 7]), 0),
        ("G2·X2·Z13".to_string(), plain(&[1, 5, 8]), 0),
        ("G3·X3·Z12".to_string(), plain(&[2, 6, 9]), 0),
        ("Z12·Z23·Z13".to_string(), plain(&[9, 7, 8]), 0),
    ];
    let mut cfg = MagicConfiguration::new("pentagram_3q", 3, 2, &nodes, lines)
        .expect("builtin configuration");
    cfg.reconstructed = true;
    cfg
}

/// Every shipped configuration, including the qudit one for the GHZ
/// triangles at `d = 2` and `d = 4`.
pub fn builtin_configurations() -> Vec<MagicConfiguration> {
    let mut out = vec![
        pm_square_2q(),
        pm_square_3q(),
        wa_triangle_3q(),
        pentagram_3q(),
    ];
    for d in [2, 4] {
        let g = WeightedGraph::ghz_triangle(d).expect("even d");
        let mut cfg = qudit_config(&g).expect("GHZ triangle");
        cfg.name = format!("qudit_config_triangle_d{d}");
        out.push(cfg);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s() -> Settings {
        Settings::default()
    }

    #[test]
    fn two_qubit_square() {
        let r = parity_contradiction::<f64>(&pm_square_2q(), &s()).unwrap();
        assert_eq!(r.line("row1").unwrap().symbolic, Root::ONE);
        assert_eq!(r.line("col3").unwrap().symbolic, Root::MINUS_ONE);
        assert_eq!(r.grand_product, Root::MINUS_ONE);
        assert_eq!(r.structure, OccurrenceStructure::Even);
        assert!(r.contradiction && r.passed());
    }

    #[test]
    fn three_qubit_square_and_odd_generalization() {
        let r = parity_contradiction::<f64>(&pm_square_3q(), &s()).unwrap();
        assert!(r
            .lines
            .iter()
            .filter(|l| l.name.starts_with("row"))
            .all(|l| l.symbolic == Root::ONE));
        assert!(r
            .lines
            .iter()
            .filter(|l| l.name.starts_with("col"))
            .all(|l| l.symbolic == Root::MINUS_ONE));
        assert!(r.contradiction && r.passed());
        for n in [3, 5] {
            let r = parity_contradiction::<f64>(&pm_square_odd(n).unwrap(), &s()).unwrap();
            assert!(r.contradiction && r.passed(), "n = {n}");
        }
        assert!(pm_square_odd(4).is_err());
    }

    #[test]
    fn qudit_table_rows() {
        let g = WeightedGraph::ghz_triangle(2).unwrap();
        let cfg = qudit_config(&g).unwrap();
        let row2 = cfg.line("row2").unwrap();
        assert_eq!(cfg.line_labels(row2), ["ZN1", "ZN2", "ZN3", "I"]);
        for d in [2, 4] {
            let g = WeightedGraph::ghz_triangle(d).unwrap();
            let r = parity_contradiction::<f64>(&qudit_config(&g).unwrap(), &s()).unwrap();
            assert_eq!(r.line("row3").unwrap().symbolic, Root::MINUS_ONE);
            assert_eq!(r.structure, OccurrenceStructure::DaggerPaired);
            assert_eq!(r.grand_product, Root::MINUS_ONE);
            assert!(r.contradiction && r.passed(), "d = {d}");
        }
    }

    #[test]
    fn reconstructions_pass() {
        let p = pentagram_3q();
        assert_eq!(p.nodes.len(), 10);
        assert!(p.occurrences().iter().all(|&(a, b)| a + b == 2));
        for cfg in [wa_triangle_3q(), p] {
            let r = parity_contradiction::<f64>(&cfg, &s()).unwrap();
            assert!(r.contradiction && r.passed(), "{}", cfg.name);
        }
    }

    #[test]
    fn line_order_does_not_matter() {
        for mut cfg in builtin_configurations() {
            let before = verify_quantum_products::<f64>(&cfg, &s()).unwrap();
            for l in &mut cfg.lines {
                l.members.reverse();
            }
            let after = verify_quantum_products::<f64>(&cfg, &s()).unwrap();
            for (a, b) in before.iter().zip(&after) {
                assert_eq!(a.symbolic, b.symbolic, "{} {}", cfg.name, a.name);
            }
        }
    }

    #[test]
    fn non_scalar_line_is_malformed() {
        let cfg = MagicConfiguration::new(
            "bad",
            2,
            2,
            &[("X1", "X1"), ("X2", "X2")],
            vec![("l".into(), vec![(0, false), (1, false)], 0)],
        )
        .unwrap();
        assert!(matches!(
            verify_quantum_products::<f64>(&cfg, &s()),
            Err(Error::MalformedConfiguration(_))
        ));
        let cfg = MagicConfiguration::new(
            "bad",
            1,
            2,
            &[("X1", "X1"), ("Z1", "Z1")],
            vec![("l".into(), vec![(0, false), (1, false)], 0)],
        )
        .unwrap();
        assert!(matches!(
            verify_quantum_products::<f64>(&cfg, &s()),
            Err(Error::MalformedConfiguration(_))
        ));
    }

    #[test]
    fn file_round_trip() {
        for cfg in builtin_configurations() {
            let text = cfg.to_file().to_json();
            let back = ConfigurationFile::from_json(&text)
                .unwrap()
                .build()
                .unwrap();
            assert_eq!(back, cfg);
        }
    }

    #[test]
    fn unbalanced_configuration_is_reported_not_refuted() {
        let cfg = MagicConfiguration::new(
            "single",
            1,
            2,
            &[("Z1", "Z1"), ("Z1'", "- Z1")],
            vec![("l".into(), vec![(0, false), (1, false)], 2)],
        )
        .unwrap();
        let r = parity_contradiction::<f64>(&cfg, &s()).unwrap();
        assert_eq!(r.structure, OccurrenceStructure::Unbalanced);
        assert!(!r.contradiction);
    }
}
