//! `ℤ_d`-weighted graphs, the GHZ-graph predicate and qudit graph states.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::C;
use crate::root::Root;
use crate::scalar::Real;
use crate::state::{joint_eigenstate, Settings, StateVector};
use crate::weyl::{product, MeasurementContext, WeylOperator};

/// Undirected weighted graph without self loops; vertices are 0-based.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WeightedGraph {
    d: u32,
    gamma: Vec<Vec<u32>>,
}

impl WeightedGraph {
    pub fn empty(n: usize, d: u32) -> Result<Self> {
        if d < 2 {
            return Err(Error::ContractViolation(format!(
                "graph dimension must be at least 2, got {d}"
            )));
        }
        Ok(WeightedGraph {
            d,
            gamma: vec![vec![0; n]; n],
        })
    }

    /// Builds a graph from `(a, b, weight)` triples; repeated edges add up.
    pub fn from_edges(n: usize, d: u32, edges: &[(usize, usize, i64)]) -> Result<Self> {
        let mut g = Self::empty(n, d)?;
        for &(a, b, w) in edges {
            if a >= n || b >= n {
                return Err(Error::ContractViolation(format!(
                    "edge ({a}, {b}) out of range for {n} vertices"
                )));
            }
            if a == b {
                return Err(Error::ContractViolation(format!("self loop at vertex {a}")));
            }
            let w = (g.gamma[a][b] as i64 + w).rem_euclid(d as i64) as u32;
            g.gamma[a][b] = w;
            g.gamma[b][a] = w;
        }
        Ok(g)
    }

    /// Checks symmetry and the zero diagonal of a full adjacency matrix.
    pub fn from_matrix(d: u32, gamma: Vec<Vec<u32>>) -> Result<Self> {
        let n = gamma.len();
        for (a, row) in gamma.iter().enumerate() {
            if row.len() != n {
                return Err(Error::ContractViolation(
                    "adjacency matrix is not square".into(),
                ));
            }
            if row[a] != 0 {
                return Err(Error::ContractViolation(format!("self loop at vertex {a}")));
            }
            for (b, &w) in row.iter().enumerate() {
                if w >= d {
                    return Err(Error::ContractViolation(format!(
                        "weight {w} not reduced mod {d}"
                    )));
                }
                if gamma[b][a] != w {
                    return Err(Error::ContractViolation(format!(
                        "asymmetric weight at ({a}, {b})"
                    )));
                }
            }
        }
        let mut g = Self::empty(n, d)?;
        g.gamma = gamma;
        Ok(g)
    }

    /// Triangle with the same weight on all three edges.
    pub fn triangle(d: u32, weight: i64) -> Result<Self> {
        Self::from_edges(3, d, &[(0, 1, weight), (1, 2, weight), (0, 2, weight)])
    }

    /// The three-vertex GHZ graph: a triangle with every weight `d/2`.
    /// For three vertices this is the only one.
    pub fn ghz_triangle(d: u32) -> Result<Self> {
        if !d.is_multiple_of(2) {
            return Err(Error::ContractViolation(format!(
                "no GHZ graph exists for odd d={d}"
            )));
        }
        Self::triangle(d, d as i64 / 2)
    }

    /// Complete graph on four vertices with opposite edges differing by `d/2`:
    /// `Γ12 = a, Γ34 = d/2 + a, Γ13 = b, Γ24 = d/2 + b, Γ23 = c, Γ14 = d/2 + c`.
    /// It is a GHZ graph exactly when `a + b + c ≡ d/2 (mod d)`; the labels
    /// are free parameters because the layout is not pinned down otherwise.
    pub fn four_vertex_family(d: u32, a: i64, b: i64, c: i64) -> Result<Self> {
        let h = d as i64 / 2;
        Self::from_edges(
            4,
            d,
            &[
                (0, 1, a),
                (2, 3, h + a),
                (0, 2, b),
                (1, 3, h + b),
                (1, 2, c),
                (0, 3, h + c),
            ],
        )
    }

    pub fn n(&self) -> usize {
        self.gamma.len()
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn weight(&self, a: usize, b: usize) -> u32 {
        self.gamma[a][b]
    }

    pub fn adjacency(&self) -> &[Vec<u32>] {
        &self.gamma
    }

    /// Nonzero edges `(a, b, w)` with `a < b`.
    pub fn edges(&self) -> Vec<(usize, usize, u32)> {
        let n = self.n();
        let mut out = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                if self.gamma[a][b] != 0 {
                    out.push((a, b, self.gamma[a][b]));
                }
            }
        }
        out
    }

    /// `d_a = Σ_b Γ_ab`, unreduced.
    pub fn degrees(&self) -> Vec<u64> {
        self.gamma
            .iter()
            .map(|row| row.iter().map(|&w| w as u64).sum())
            .collect()
    }

    /// `W = Σ_{a>b} Γ_ab`, unreduced.
    pub fn total_weight(&self) -> u64 {
        self.edges().iter().map(|e| e.2 as u64).sum()
    }

    /// `𝒵_{N_a} = ⊗_b 𝒵_b^{Γ_ab}`.
    pub fn neighborhood_clock(&self, a: usize) -> WeylOperator {
        let z = self.gamma[a].iter().map(|&w| w as i64).collect();
        WeylOperator::from_parts(self.d, vec![0; self.n()], z, 0).expect("valid shape")
    }

    /// `𝒳_V = ⊗_a 𝒳_a`.
    pub fn x_all(&self) -> WeylOperator {
        WeylOperator::from_parts(self.d, vec![1; self.n()], vec![0; self.n()], 0)
            .expect("valid shape")
    }

    pub fn single_shift(&self, a: usize) -> WeylOperator {
        WeylOperator::shift(self.n(), self.d, a, 1)
    }

    pub fn single_clock(&self, a: usize) -> WeylOperator {
        WeylOperator::clock(self.n(), self.d, a, 1)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GhzVerdict {
    pub is_ghz: bool,
    /// `d_a mod d` per vertex.
    pub degrees: Vec<u64>,
    /// `W mod d`.
    pub total_weight: u64,
    /// `ω^W`.
    pub omega_w: Root,
    /// Only meaningful when `is_ghz`; a GHZ graph forces even `d`.
    pub even_dimension: bool,
}

/// All vertex sums vanish mod `d` and the total weight does not.
pub fn is_ghz_graph(g: &WeightedGraph) -> GhzVerdict {
    let d = g.d() as u64;
    let degrees: Vec<u64> = g.degrees().into_iter().map(|s| s % d).collect();
    let w = g.total_weight() % d;
    let is_ghz = degrees.iter().all(|&s| s == 0) && w != 0;
    let verdict = GhzVerdict {
        is_ghz,
        degrees,
        total_weight: w,
        omega_w: Root::new(w as i64, d),
        even_dimension: d.is_multiple_of(2),
    };
    if verdict.is_ghz {
        // 2W = Σ d_a ≡ 0 with W ≢ 0 leaves W = d/2 as the only option.
        assert!(verdict.even_dimension && verdict.omega_w == Root::MINUS_ONE);
    }
    verdict
}

/// `𝒢_a = 𝒳_a 𝒵_{N_a}` for every vertex.
pub fn stabilizer_generators(g: &WeightedGraph) -> Vec<WeylOperator> {
    (0..g.n())
        .map(|a| {
            g.single_shift(a)
                .mul(&g.neighborhood_clock(a))
                .expect("same shape")
        })
        .collect()
}

/// `∏_a 𝒢_a` in vertex order.
pub fn stabilizer_product(g: &WeightedGraph) -> WeylOperator {
    product(&stabilizer_generators(g)).expect("at least one vertex")
}

/// The closed form of `∏_a 𝒢_a` for an arbitrary weighted graph:
/// `ω^{-W} 𝒳_V ⊗_a 𝒵_a^{d_a}`. With `XZ = ωZX` each reorder of a
/// `𝒵_b^{Γ_ab}` past `𝒳_b` contributes `ω^{-Γ_ab}`.
pub fn stabilizer_product_closed_form(g: &WeightedGraph) -> WeylOperator {
    let z = g.degrees().into_iter().map(|s| s as i64).collect();
    WeylOperator::from_parts(g.d(), vec![1; g.n()], z, -2 * g.total_weight() as i64)
        .expect("valid shape")
}

pub fn generator_context(g: &WeightedGraph) -> MeasurementContext {
    let labels = (1..=g.n()).map(|a| format!("G{a}")).collect();
    MeasurementContext::with_labels(stabilizer_generators(g), labels)
        .expect("graph stabilizers commute")
}

fn quadratic_form_state<T: Real>(g: &WeightedGraph, dim: usize) -> Vec<C<T>> {
    let n = g.n();
    let d = g.d() as usize;
    let norm = T::one() / T::of(dim as f64).sqrt();
    let mut digits = vec![0usize; n];
    (0..dim)
        .map(|idx| {
            let mut rem = idx;
            for a in (0..n).rev() {
                digits[a] = rem % d;
                rem /= d;
            }
            let mut q = 0u64;
            for (a, b, w) in g.edges() {
                q += w as u64 * digits[a] as u64 * digits[b] as u64;
            }
            Root::new(-(q as i64), d as u64).to_complex::<T>() * norm
        })
        .collect()
}

/// The `+1` joint eigenstate of the stabilizers.
///
/// Built as `Σ_k ω^{-Σ_{a<b} Γ_ab k_a k_b} |k⟩` and then checked against
/// `𝒢_a|G⟩ = |G⟩`; if that check fails the joint-eigenspace projector is
/// used instead.
pub fn graph_state<T: Real>(g: &WeightedGraph, settings: &Settings) -> Result<StateVector<T>> {
    let dim = g
        .x_all()
        .hilbert_dim()
        .filter(|&dim| dim <= settings.max_dim)
        .ok_or(Error::TooLarge {
            dim: g.x_all().hilbert_dim().unwrap_or(usize::MAX),
            cap: settings.max_dim,
        })?;
    let candidate = StateVector::normalized(quadratic_form_state::<T>(g, dim))?;
    if stabilizer_residual(g, &candidate, settings)? < settings.tolerance {
        return Ok(candidate);
    }
    let fallback = eigenstate_family::<T>(g, &vec![0; g.n()], settings)?;
    let r = stabilizer_residual(g, &fallback, settings)?;
    if r >= settings.tolerance {
        return Err(Error::Construction(format!(
            "stabilizer residual {r:e} after projector fallback"
        )));
    }
    Ok(fallback)
}

/// `max_a ‖𝒢_a|ψ⟩ − |ψ⟩‖`.
pub fn stabilizer_residual<T: Real>(
    g: &WeightedGraph,
    psi: &StateVector<T>,
    settings: &Settings,
) -> Result<f64> {
    let mut worst = 0.0f64;
    for op in stabilizer_generators(g) {
        let m = op.to_matrix::<T>(settings.max_dim)?;
        let out = psi.apply(&m)?;
        let diff = out
            .iter()
            .zip(psi.amplitudes())
            .map(|(a, b)| (*a - *b).norm_sqr())
            .fold(T::zero(), |acc, v| acc + v)
            .sqrt()
            .as_f64();
        worst = worst.max(diff);
    }
    Ok(worst)
}

/// Common eigenstate of the stabilizers with eigenvalues `ω^{k_a}`.
pub fn eigenstate_family<T: Real>(
    g: &WeightedGraph,
    exponents: &[u32],
    settings: &Settings,
) -> Result<StateVector<T>> {
    if exponents.len() != g.n() {
        return Err(Error::ContractViolation(format!(
            "{} eigenvalues given for {} vertices",
            exponents.len(),
            g.n()
        )));
    }
    let outcomes: Vec<Root> = exponents
        .iter()
        .map(|&k| Root::omega_pow(k as i64, g.d()))
        .collect();
    joint_eigenstate::<T>(&generator_context(g), &outcomes, settings)
}

/// Every weighted graph on `n` vertices over `ℤ_d` that passes
/// [`is_ghz_graph`]. Brute force over all `d^{n(n-1)/2}` adjacency matrices.
pub fn enumerate_ghz_graphs(n: usize, d: u32) -> Result<Vec<WeightedGraph>> {
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
        .collect();
    let total = (d as u64)
        .checked_pow(pairs.len() as u32)
        .filter(|&t| t <= 10_000_000)
        .ok_or_else(|| {
            Error::ContractViolation(format!("enumeration over n={n}, d={d} is too large"))
        })?;
    let mut out = Vec::new();
    let mut weights = vec![0u32; pairs.len()];
    for mut code in 0..total {
        for w in weights.iter_mut() {
            *w = (code % d as u64) as u32;
            code /= d as u64;
        }
        let mut g = WeightedGraph::empty(n, d)?;
        for (&(a, b), &w) in pairs.iter().zip(&weights) {
            g.gamma[a][b] = w;
            g.gamma[b][a] = w;
        }
        if is_ghz_graph(&g).is_ghz {
            out.push(g);
        }
    }
    Ok(out)
}

/// Everything `ghz-check` reports about one graph.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GhzReport {
    pub verdict: GhzVerdict,
    pub generators: Vec<String>,
    pub product: String,
    pub closed_form: String,
    /// `max_a ‖𝒢_a|G⟩ − |G⟩‖`, when `d^n` fits under the cap.
    pub state_residual: Option<f64>,
    pub checks: Vec<crate::report::Check>,
    pub derivation: Vec<String>,
}

impl GhzReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// Runs the predicate, the stabilizer identities and, if the dimension
/// allows, the graph-state eigen-condition.
pub fn ghz_check(g: &WeightedGraph, settings: &Settings) -> Result<GhzReport> {
    use crate::report::Check;
    let verdict = is_ghz_graph(g);
    let gens = stabilizer_generators(g);
    let prod = stabilizer_product(g);
    let closed = stabilizer_product_closed_form(g);
    let mut checks = vec![Check::exact(
        "∏G_a matches ω^{-W} X_V ⊗ Z_a^{d_a}",
        prod == closed,
        format!("{prod} vs {closed}"),
    )];
    let mut commuting = true;
    for i in 0..gens.len() {
        for j in i + 1..gens.len() {
            commuting &= gens[i].commutes(&gens[j])?;
        }
    }
    checks.push(Check::exact("stabilizers commute pairwise", commuting, ""));
    let minus_xv = g.x_all().times_phase(g.d() as i64);
    let mut derivation = vec![
        format!("d_a mod d = {:?}", verdict.degrees),
        format!(
            "W mod d = {}, ω^W = {}",
            verdict.total_weight, verdict.omega_w
        ),
        format!("∏G_a = {prod}"),
    ];
    if verdict.is_ghz {
        checks.push(Check::exact(
            "∏G_a = -X_V",
            prod == minus_xv,
            format!("{prod}"),
        ));
        checks.push(Check::exact(
            "d is even and ω^W = -1",
            verdict.even_dimension && verdict.omega_w == Root::MINUS_ONE,
            format!("ω^W = {}", verdict.omega_w),
        ));
        derivation.push("GHZ graph: all vertex sums vanish and W ≢ 0, so ∏G_a = -X_V".into());
    } else {
        derivation.push("not a GHZ graph".into());
    }
    let fits = g
        .x_all()
        .hilbert_dim()
        .is_some_and(|dim| dim <= settings.max_dim);
    let state_residual = if fits {
        let psi = graph_state::<f64>(g, settings)?;
        let r = stabilizer_residual(g, &psi, settings)?;
        checks.push(Check::residual(
            "G_a|G> = |G> for every vertex",
            r,
            settings.tolerance,
            "",
        ));
        Some(r)
    } else {
        derivation.push(format!(
            "graph state skipped: d^n exceeds {}",
            settings.max_dim
        ));
        None
    };
    Ok(GhzReport {
        verdict,
        generators: gens.iter().map(|o| o.to_string()).collect(),
        product: prod.to_string(),
        closed_form: closed.to_string(),
        state_residual,
        checks,
        derivation,
    })
}

/// Samples weight matrices uniformly until one is a GHZ graph.
pub fn random_ghz_graph<R: rand::Rng>(n: usize, d: u32, rng: &mut R) -> Result<WeightedGraph> {
    if n < 3 || !d.is_multiple_of(2) {
        return Err(Error::ContractViolation(format!(
            "no GHZ graph on n={n} vertices with d={d}"
        )));
    }
    for _ in 0..1_000_000 {
        let mut g = WeightedGraph::empty(n, d)?;
        for a in 0..n {
            for b in a + 1..n {
                let w = rng.gen_range(0..d);
                g.gamma[a][b] = w;
                g.gamma[b][a] = w;
            }
        }
        if is_ghz_graph(&g).is_ghz {
            return Ok(g);
        }
    }
    Err(Error::Construction(format!(
        "no GHZ graph sampled for n={n}, d={d}"
    )))
}

/// Graph file: `{n, d, edges: [[a, b, weight], ...]}` with 1-based vertices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphFile {
    pub n: usize,
    pub d: u32,
    pub edges: Vec<[i64; 3]>,
}

impl GraphFile {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("graph: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("graphs always serialize")
    }

    pub fn build(&self) -> Result<WeightedGraph> {
        let mut edges = Vec::with_capacity(self.edges.len());
        for &[a, b, w] in &self.edges {
            if a < 1 || b < 1 {
                return Err(Error::Parse(format!(
                    "vertices are numbered from 1, got edge [{a}, {b}, {w}]"
                )));
            }
            edges.push((a as usize - 1, b as usize - 1, w));
        }
        WeightedGraph::from_edges(self.n, self.d, &edges)
    }
}

impl From<&WeightedGraph> for GraphFile {
    fn from(g: &WeightedGraph) -> Self {
        GraphFile {
            n: g.n(),
            d: g.d(),
            edges: g
                .edges()
                .into_iter()
                .map(|(a, b, w)| [a as i64 + 1, b as i64 + 1, w as i64])
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weyl::parse_weyl;

    #[test]
    fn graph_file_round_trip() {
        let g = WeightedGraph::four_vertex_family(4, 1, 0, 1).unwrap();
        let f = GraphFile::from(&g);
        assert_eq!(
            GraphFile::from_json(&f.to_json()).unwrap().build().unwrap(),
            g
        );
        let bad = GraphFile {
            n: 3,
            d: 2,
            edges: vec![[0, 1, 1]],
        };
        assert!(bad.build().is_err());
    }

    #[test]
    fn random_graphs_are_ghz() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for (n, d) in [(3, 2), (3, 4), (4, 2), (4, 4)] {
            let g = random_ghz_graph(n, d, &mut rng).unwrap();
            assert!(is_ghz_graph(&g).is_ghz);
        }
    }

    #[test]
    fn triangle_verdicts() {
        let t2 = is_ghz_graph(&WeightedGraph::triangle(2, 1).unwrap());
        assert!(t2.is_ghz);
        assert_eq!(t2.degrees, vec![0, 0, 0]);
        assert_eq!(t2.total_weight, 1);
        assert!(!is_ghz_graph(&WeightedGraph::triangle(3, 1).unwrap()).is_ghz);
    }

    #[test]
    fn balanced_four_cycle_has_zero_total_weight() {
        for d in [2u32, 3, 4, 6] {
            let w = d as i64 - 1;
            let g = WeightedGraph::from_edges(4, d, &[(0, 1, 1), (1, 2, w), (2, 3, 1), (3, 0, w)])
                .unwrap();
            let v = is_ghz_graph(&g);
            assert_eq!(v.degrees, vec![0; 4]);
            assert_eq!(v.total_weight, 0);
            assert!(!v.is_ghz);
        }
    }

    #[test]
    fn triangle_generators() {
        let gs = stabilizer_generators(&WeightedGraph::triangle(2, 1).unwrap());
        let expected = ["X1 Z2 Z3", "Z1 X2 Z3", "Z1 Z2 X3"].map(|s| parse_weyl(s, 3, 2).unwrap());
        assert_eq!(gs, expected.to_vec());
    }

    #[test]
    fn edgeless_generators_are_shifts() {
        let g = WeightedGraph::empty(3, 4).unwrap();
        for (a, op) in stabilizer_generators(&g).iter().enumerate() {
            assert_eq!(op, &WeylOperator::shift(3, 4, a, 1));
        }
    }

    #[test]
    fn edgeless_single_qubit_state_is_plus() {
        let g = WeightedGraph::empty(1, 2).unwrap();
        let psi = graph_state::<f64>(&g, &Settings::default()).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!((psi.amplitudes()[0].re - h).abs() < 1e-15);
        assert!((psi.amplitudes()[1].re - h).abs() < 1e-15);
    }

    #[test]
    fn four_vertex_family_condition() {
        for d in [2u32, 4, 6] {
            let h = d as i64 / 2;
            for a in 0..d as i64 {
                for b in 0..d as i64 {
                    let good = WeightedGraph::four_vertex_family(d, a, b, h - a - b).unwrap();
                    assert!(is_ghz_graph(&good).is_ghz);
                    let bad = WeightedGraph::four_vertex_family(d, a, b, -a - b).unwrap();
                    assert!(!is_ghz_graph(&bad).is_ghz);
                }
            }
        }
    }

    #[test]
    fn three_vertex_enumeration_finds_only_the_half_weight_triangle() {
        for d in [2u32, 4, 6] {
            let all = enumerate_ghz_graphs(3, d).unwrap();
            assert_eq!(all, vec![WeightedGraph::ghz_triangle(d).unwrap()]);
        }
        assert!(enumerate_ghz_graphs(3, 3).unwrap().is_empty());
    }

    #[test]
    fn asymmetric_matrix_rejected() {
        assert!(WeightedGraph::from_matrix(2, vec![vec![0, 1], vec![0, 0]]).is_err());
        assert!(WeightedGraph::from_matrix(2, vec![vec![1, 0], vec![0, 0]]).is_err());
    }
}
