//! Kochen-Specker value assignments on finite ray sets.
//!
//! A KS assignment gives every ray a value in `{0, 1}` such that no two
//! orthogonal rays are both 1 and every complete basis holds exactly one 1.
//! Rays equal up to a global phase are merged on construction, so a ray gets
//! one value whichever basis it is read in. The search is a plain
//! backtracking solver with unit propagation, exhaustive when it reports
//! UNSAT.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{inner, vec_norm, C};
use crate::root::Root;
use crate::scalar::Real;
use crate::state::{joint_eigenstate, Settings};
use crate::weyl::MeasurementContext;

#[derive(Clone, Debug, PartialEq)]
pub struct Ray<T: Real> {
    pub label: String,
    /// Unit vector with its first nonzero amplitude real and positive.
    pub amplitudes: Vec<C<T>>,
}

#[derive(Clone, Debug)]
pub struct RaySet<T: Real> {
    dim: usize,
    rays: Vec<Ray<T>>,
    adjacency: Vec<Vec<bool>>,
    bases: Vec<Vec<usize>>,
    declared: bool,
    /// Input position → ray index after merging duplicates.
    input_map: Vec<usize>,
}

fn unit_tolerance<T: Real>() -> f64 {
    1e-9f64.max(T::EPSILON_FLOOR * 100.0)
}

/// Rotates the global phase so the first amplitude above the noise floor is
/// real and positive.
pub fn canonical_phase<T: Real>(v: &[C<T>]) -> Vec<C<T>> {
    let floor = T::of(1e-8f64.max(T::EPSILON_FLOOR * 1e3));
    match v.iter().find(|a| a.norm() > floor) {
        None => v.to_vec(),
        Some(lead) => {
            let phase = lead.conj() / C::from(lead.norm());
            v.iter().map(|a| *a * phase).collect()
        }
    }
}

/// Deduplicates `rays` modulo global phase, computes orthogonality, and
/// either validates the declared bases (indices into `rays`) or discovers
/// every orthogonal clique of full size.
pub fn build_rayset<T: Real>(
    rays: Vec<(String, Vec<C<T>>)>,
    bases: Option<Vec<Vec<usize>>>,
    tolerance: f64,
) -> Result<RaySet<T>> {
    let tol = tolerance.max(T::EPSILON_FLOOR * 10.0);
    let dim = match rays.first() {
        Some((_, v)) => v.len(),
        None => return Err(Error::MalformedConfiguration("ray set is empty".into())),
    };
    let mut kept: Vec<Ray<T>> = Vec::new();
    let mut input_map = Vec::with_capacity(rays.len());
    for (label, v) in rays {
        if v.len() != dim {
            return Err(Error::MalformedConfiguration(format!(
                "ray `{label}` has dimension {}, expected {dim}",
                v.len()
            )));
        }
        let n = vec_norm(&v).as_f64();
        if (n - 1.0).abs() > unit_tolerance::<T>() {
            return Err(Error::ContractViolation(format!(
                "ray `{label}` has norm {n}, expected 1"
            )));
        }
        let v = canonical_phase(&v);
        match kept
            .iter()
            .position(|r| (1.0 - inner(&r.amplitudes, &v).norm().as_f64()).abs() < tol)
        {
            Some(k) => input_map.push(k),
            None => {
                input_map.push(kept.len());
                kept.push(Ray {
                    label,
                    amplitudes: v,
                });
            }
        }
    }
    let m = kept.len();
    let mut adjacency = vec![vec![false; m]; m];
    for i in 0..m {
        for j in i + 1..m {
            let o = inner(&kept[i].amplitudes, &kept[j].amplitudes)
                .norm()
                .as_f64()
                < tol;
            adjacency[i][j] = o;
            adjacency[j][i] = o;
        }
    }
    let declared = bases.is_some();
    let bases = match bases {
        Some(list) => {
            let mut out = Vec::new();
            for (k, b) in list.iter().enumerate() {
                let mut mapped = Vec::with_capacity(b.len());
                for &i in b {
                    let r = *input_map.get(i).ok_or_else(|| {
                        Error::MalformedConfiguration(format!(
                            "basis {k} refers to ray {i}, which does not exist"
                        ))
                    })?;
                    mapped.push(r);
                }
                mapped.sort_unstable();
                mapped.dedup();
                if mapped.len() != dim {
                    return Err(Error::MalformedConfiguration(format!(
                        "basis {k} has {} distinct rays, expected {dim}",
                        mapped.len()
                    )));
                }
                for (x, &a) in mapped.iter().enumerate() {
                    for &b in &mapped[x + 1..] {
                        if !adjacency[a][b] {
                            return Err(Error::MalformedConfiguration(format!(
                                "basis {k} is not orthonormal: `{}` and `{}` overlap",
                                kept[a].label, kept[b].label
                            )));
                        }
                    }
                }
                out.push(mapped);
            }
            out
        }
        None => full_cliques(&adjacency, dim),
    };
    Ok(RaySet {
        dim,
        rays: kept,
        adjacency,
        bases,
        declared,
        input_map,
    })
}

/// Every set of `size` pairwise-adjacent vertices, as sorted index lists.
fn full_cliques(adj: &[Vec<bool>], size: usize) -> Vec<Vec<usize>> {
    fn extend(
        adj: &[Vec<bool>],
        size: usize,
        current: &mut Vec<usize>,
        candidates: &[usize],
        out: &mut Vec<Vec<usize>>,
    ) {
        if current.len() == size {
            out.push(current.clone());
            return;
        }
        if current.len() + candidates.len() < size {
            return;
        }
        for (k, &v) in candidates.iter().enumerate() {
            let next: Vec<usize> = candidates[k + 1..]
                .iter()
                .copied()
                .filter(|&u| adj[v][u])
                .collect();
            current.push(v);
            extend(adj, size, current, &next, out);
            current.pop();
        }
    }
    let all: Vec<usize> = (0..adj.len()).collect();
    let mut out = Vec::new();
    extend(adj, size, &mut Vec::new(), &all, &mut out);
    out
}

impl<T: Real> RaySet<T> {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.rays.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rays.is_empty()
    }

    pub fn rays(&self) -> &[Ray<T>] {
        &self.rays
    }

    pub fn bases(&self) -> &[Vec<usize>] {
        &self.bases
    }

    pub fn bases_declared(&self) -> bool {
        self.declared
    }

    pub fn orthogonal(&self, i: usize, j: usize) -> bool {
        self.adjacency[i][j]
    }

    pub fn degree(&self, i: usize) -> usize {
        self.adjacency[i].iter().filter(|&&b| b).count()
    }

    /// Ray index an input position was merged into.
    pub fn input_index(&self, position: usize) -> Option<usize> {
        self.input_map.get(position).copied()
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.rays.iter().position(|r| r.label == label)
    }

    /// Turns `label=value` pairs into ray indices.
    pub fn resolve(&self, assignments: &[(&str, bool)]) -> Result<Vec<(usize, bool)>> {
        assignments
            .iter()
            .map(|(l, v)| {
                self.index_of(l)
                    .map(|i| (i, *v))
                    .ok_or_else(|| Error::Parse(format!("no ray labelled `{l}`")))
            })
            .collect()
    }

    /// The same ray set listed in a different order: ray `k` of the result
    /// is ray `order[k]` of `self`.
    pub fn reordered(&self, order: &[usize]) -> Result<Self> {
        let mut seen = vec![false; self.len()];
        for &i in order {
            if i >= self.len() || std::mem::replace(&mut seen[i], true) {
                return Err(Error::ContractViolation(
                    "ordering is not a permutation".into(),
                ));
            }
        }
        if order.len() != self.len() {
            return Err(Error::ContractViolation(
                "ordering is not a permutation".into(),
            ));
        }
        let mut position = vec![0; self.len()];
        for (k, &i) in order.iter().enumerate() {
            position[i] = k;
        }
        let rays = order.iter().map(|&i| self.rays[i].clone()).collect();
        let adjacency = order
            .iter()
            .map(|&i| order.iter().map(|&j| self.adjacency[i][j]).collect())
            .collect();
        let bases = self
            .bases
            .iter()
            .map(|b| {
                let mut m: Vec<usize> = b.iter().map(|&i| position[i]).collect();
                m.sort_unstable();
                m
            })
            .collect();
        Ok(RaySet {
            dim: self.dim,
            rays,
            adjacency,
            bases,
            declared: self.declared,
            input_map: self.input_map.iter().map(|&i| position[i]).collect(),
        })
    }

    /// Serializable form with bases listed explicitly.
    pub fn to_file(&self) -> RaySetFile {
        RaySetFile {
            rays: self
                .rays
                .iter()
                .map(|r| RayEntry {
                    label: r.label.clone(),
                    amplitudes: r
                        .amplitudes
                        .iter()
                        .map(|a| [a.re.as_f64(), a.im.as_f64()])
                        .collect(),
                })
                .collect(),
            bases: Some(self.bases.clone()),
        }
    }
}

/// Ray-set file: amplitudes as `[re, im]` pairs, optional basis index lists.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RaySetFile {
    pub rays: Vec<RayEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bases: Option<Vec<Vec<usize>>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RayEntry {
    pub label: String,
    pub amplitudes: Vec<[f64; 2]>,
}

impl RaySetFile {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("ray set: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("ray sets always serialize")
    }

    pub fn build<T: Real>(&self, tolerance: f64) -> Result<RaySet<T>> {
        let rays = self
            .rays
            .iter()
            .map(|r| {
                (
                    r.label.clone(),
                    r.amplitudes
                        .iter()
                        .map(|[re, im]| C::new(T::of(*re), T::of(*im)))
                        .collect(),
                )
            })
            .collect();
        build_rayset(rays, self.bases.clone(), tolerance)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KsAssignment {
    pub values: Vec<bool>,
}

impl KsAssignment {
    pub fn ones(&self) -> Vec<usize> {
        (0..self.values.len()).filter(|&i| self.values[i]).collect()
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchStats {
    /// Branching decisions made.
    pub decisions: u64,
    /// Values fixed by propagation.
    pub propagations: u64,
    pub conflicts: u64,
    pub max_depth: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KsResult {
    pub satisfiable: bool,
    pub assignment: Option<KsAssignment>,
    pub stats: SearchStats,
}

/// Partial valuation; `None` is unassigned.
pub type Partial = Vec<Option<bool>>;

fn check_preassignment<T: Real>(rs: &RaySet<T>, pre: &[(usize, bool)]) -> Result<Partial> {
    let mut vals: Partial = vec![None; rs.len()];
    for &(i, v) in pre {
        if i >= rs.len() {
            return Err(Error::ContractViolation(format!(
                "preassigned ray {i} does not exist"
            )));
        }
        match vals[i] {
            Some(old) if old != v => {
                return Err(Error::ContractViolation(format!(
                    "ray `{}` preassigned both 0 and 1",
                    rs.rays[i].label
                )))
            }
            _ => vals[i] = Some(v),
        }
    }
    for i in 0..rs.len() {
        for j in i + 1..rs.len() {
            if vals[i] == Some(true) && vals[j] == Some(true) && rs.adjacency[i][j] {
                return Err(Error::ContractViolation(format!(
                    "orthogonal rays `{}` and `{}` are both preassigned 1",
                    rs.rays[i].label, rs.rays[j].label
                )));
            }
        }
    }
    for b in &rs.bases {
        if b.iter().all(|&i| vals[i] == Some(false)) {
            return Err(Error::ContractViolation(format!(
                "every ray of basis [{}] is preassigned 0",
                b.iter()
                    .map(|&i| rs.rays[i].label.as_str())
                    .collect::<Vec<_>>()
                    .join(", ")
            )));
        }
    }
    Ok(vals)
}

/// Applies both KS rules to a fixpoint. Returns `false` on a conflict.
fn propagate<T: Real>(rs: &RaySet<T>, vals: &mut Partial, stats: &mut SearchStats) -> bool {
    loop {
        let mut changed = false;
        for i in 0..rs.len() {
            if vals[i] != Some(true) {
                continue;
            }
            for j in 0..rs.len() {
                if !rs.adjacency[i][j] {
                    continue;
                }
                match vals[j] {
                    Some(true) => return false,
                    Some(false) => {}
                    None => {
                        vals[j] = Some(false);
                        stats.propagations += 1;
                        changed = true;
                    }
                }
            }
        }
        for b in &rs.bases {
            let mut open = None;
            let mut n_open = 0;
            let mut has_one = false;
            for &i in b {
                match vals[i] {
                    Some(true) => has_one = true,
                    None => {
                        n_open += 1;
                        open = Some(i);
                    }
                    Some(false) => {}
                }
            }
            if has_one {
                continue;
            }
            match (n_open, open) {
                (0, _) => return false,
                (1, Some(i)) => {
                    vals[i] = Some(true);
                    stats.propagations += 1;
                    changed = true;
                }
                _ => {}
            }
        }
        if !changed {
            return true;
        }
    }
}

/// Propagation alone, without branching. `None` means the preassignment
/// already leads to a conflict.
pub fn propagate_only<T: Real>(
    rs: &RaySet<T>,
    preassigned: &[(usize, bool)],
) -> Result<Option<Partial>> {
    let mut vals = check_preassignment(rs, preassigned)?;
    let mut stats = SearchStats::default();
    Ok(propagate(rs, &mut vals, &mut stats).then_some(vals))
}

/// Exhaustive search for a KS assignment extending `preassigned`.
pub fn ks_search<T: Real>(rs: &RaySet<T>, preassigned: &[(usize, bool)]) -> Result<KsResult> {
    let vals = check_preassignment(rs, preassigned)?;
    let mut order: Vec<usize> = (0..rs.len()).collect();
    order.sort_by(|&a, &b| rs.degree(b).cmp(&rs.degree(a)).then(a.cmp(&b)));
    let mut stats = SearchStats::default();
    let found = search(rs, vals, &order, 0, &mut stats);
    let assignment = found.map(|v| KsAssignment {
        values: v
            .into_iter()
            .map(|x| x.expect("complete assignment"))
            .collect(),
    });
    if let Some(a) = &assignment {
        debug_assert!(validate_assignment(rs, a).is_empty());
    }
    Ok(KsResult {
        satisfiable: assignment.is_some(),
        assignment,
        stats,
    })
}

fn search<T: Real>(
    rs: &RaySet<T>,
    mut vals: Partial,
    order: &[usize],
    depth: usize,
    stats: &mut SearchStats,
) -> Option<Partial> {
    stats.max_depth = stats.max_depth.max(depth);
    if !propagate(rs, &mut vals, stats) {
        stats.conflicts += 1;
        return None;
    }
    let Some(&next) = order.iter().find(|&&i| vals[i].is_none()) else {
        return Some(vals);
    };
    for choice in [true, false] {
        stats.decisions += 1;
        let mut branch = vals.clone();
        branch[next] = Some(choice);
        if let Some(done) = search(rs, branch, order, depth + 1, stats) {
            return Some(done);
        }
    }
    None
}

/// Independent re-check of both KS rules. Returns a description of every
/// violation; empty means the assignment is valid.
pub fn validate_assignment<T: Real>(rs: &RaySet<T>, a: &KsAssignment) -> Vec<String> {
    let mut bad = Vec::new();
    if a.values.len() != rs.len() {
        bad.push(format!(
            "assignment covers {} rays, set has {}",
            a.values.len(),
            rs.len()
        ));
        return bad;
    }
    for i in 0..rs.len() {
        for j in i + 1..rs.len() {
            if a.values[i] && a.values[j] && rs.adjacency[i][j] {
                bad.push(format!(
                    "orthogonal `{}` and `{}` both 1",
                    rs.rays[i].label, rs.rays[j].label
                ));
            }
        }
    }
    for b in &rs.bases {
        let ones = b.iter().filter(|&&i| a.values[i]).count();
        if ones != 1 {
            bad.push(format!(
                "basis [{}] holds {ones} ones",
                b.iter()
                    .map(|&i| rs.rays[i].label.as_str())
                    .collect::<Vec<_>>()
                    .join(", ")
            ));
        }
    }
    bad
}

fn real<T: Real>(x: f64) -> C<T> {
    C::new(T::of(x), T::zero())
}

fn product_state<T: Real>(factors: &[[C<T>; 2]]) -> Vec<C<T>> {
    let mut v = vec![C::new(T::one(), T::zero())];
    for f in factors {
        v = v.iter().flat_map(|a| [*a * f[0], *a * f[1]]).collect();
    }
    v
}

/// Embeds a two-qubit vector on sites `(a, b)` and `|mu⟩` on site `c`
/// (0-based) of three qubits.
fn place_pair<T: Real>(pair: &[C<T>; 4], a: usize, b: usize, mu: usize) -> Vec<C<T>> {
    let c = 3 - a - b;
    let mut v = vec![C::new(T::zero(), T::zero()); 8];
    for (k, amp) in pair.iter().enumerate() {
        let bits = [(a, k >> 1), (b, k & 1), (c, mu)];
        let mut idx = 0;
        for (site, bit) in bits {
            idx |= bit << (2 - site);
        }
        v[idx] = *amp;
    }
    v
}

/// Labels of the Bell-type rays in [`builtin_34_rays`].
pub fn bell_ray_label(state: &str, a: usize, b: usize, mu: usize) -> String {
    format!("{state}_{}{}|{mu}>_{}", a + 1, b + 1, 3 - a - b + 1)
}

/// The 34 rays of the three-qubit pigeonhole argument: `psi_i = |+,+,+⟩`,
/// `psi_f = |y+,y+,y+⟩`, the 24 Bell-pair rays `|B⟩_{ab}|mu⟩_c` on pairs
/// (1,2), (2,3), (3,1), and the 8 computational rays. Bases are discovered.
pub fn builtin_34_rays<T: Real>() -> RaySet<T> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let plus = [real::<T>(h), real::<T>(h)];
    let y_plus = [real::<T>(h), C::new(T::zero(), T::of(h))];
    let z = real::<T>(0.0);
    let bells: [(&str, [C<T>; 4]); 4] = [
        ("Phi+", [real(h), z, z, real(h)]),
        ("Phi-", [real(h), z, z, real(-h)]),
        ("Psi+", [z, real(h), real(h), z]),
        ("Psi-", [z, real(h), real(-h), z]),
    ];
    let mut rays = vec![
        ("psi_i".to_string(), product_state(&[plus, plus, plus])),
        (
            "psi_f".to_string(),
            product_state(&[y_plus, y_plus, y_plus]),
        ),
    ];
    for (a, b) in [(0, 1), (1, 2), (2, 0)] {
        for (name, pair) in &bells {
            for mu in 0..2 {
                rays.push((bell_ray_label(name, a, b, mu), place_pair(pair, a, b, mu)));
            }
        }
    }
    for k in 0..8 {
        let mut v = vec![z; 8];
        v[k] = real(1.0);
        rays.push((format!("|{}{}{}>", k >> 2, (k >> 1) & 1, k & 1), v));
    }
    build_rayset(rays, None, 1e-10).expect("builtin ray set is well formed")
}

/// The six three-qubit contexts whose joint eigenstates form the 48-ray set.
pub fn contexts_48() -> Vec<(String, MeasurementContext)> {
    let layout: [(&str, [&str; 3]); 6] = [
        ("X", ["X1", "X2", "X3"]),
        ("Y", ["Y1", "Y2", "Y3"]),
        ("Z", ["Z1", "Z2", "Z3"]),
        ("X12Y12Z3", ["X1 X2", "Y1 Y2", "Z3"]),
        ("X23Y23Z1", ["X2 X3", "Y2 Y3", "Z1"]),
        ("X31Y31Z2", ["X3 X1", "Y3 Y1", "Z2"]),
    ];
    layout.iter()
        .map(|(name, ops)| {
            let ctx = MeasurementContext::parse(ops, 3, 2).expect("builtin context");
            (name.to_string(), ctx)
        })
        .collect()
}

/// 48 rays: the 8 joint eigenstates of each of six maximal contexts, with
/// those six bases declared.
pub fn builtin_48_rays<T: Real>() -> RaySet<T> {
    let settings = Settings::default();
    let mut rays = Vec::new();
    let mut bases = Vec::new();
    for (name, ctx) in contexts_48() {
        let mut basis = Vec::new();
        for bits in 0..8u8 {
            let outcome: Vec<Root> = (0..3).map(|k| Root::parity(bits >> (2 - k) & 1)).collect();
            let signs: String = outcome
                .iter()
                .map(|r| if *r == Root::ONE { '+' } else { '-' })
                .collect();
            let v = joint_eigenstate::<T>(&ctx, &outcome, &settings).expect("maximal context");
            basis.push(rays.len());
            rays.push((format!("{name}:{signs}"), v.amplitudes().to_vec()));
        }
        bases.push(basis);
    }
    build_rayset(rays, Some(bases), 1e-10).expect("builtin ray set is well formed")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn computational(dim: usize) -> Vec<(String, Vec<C<f64>>)> {
        (0..dim)
            .map(|k| {
                let mut v = vec![C::new(0.0, 0.0); dim];
                v[k] = C::new(1.0, 0.0);
                (format!("e{k}"), v)
            })
            .collect()
    }

    #[test]
    fn computational_basis_is_one_clique() {
        let rs = build_rayset(computational(8), None, 1e-10).unwrap();
        assert_eq!(rs.len(), 8);
        assert_eq!(rs.bases(), &[(0..8).collect::<Vec<_>>()]);
        let r = ks_search(&rs, &[]).unwrap();
        assert!(r.satisfiable);
        assert_eq!(r.assignment.unwrap().ones().len(), 1);
    }

    #[test]
    fn phases_are_merged() {
        let mut rays = computational(2);
        rays.push(("minus e0".into(), vec![C::new(0.0, -1.0), C::new(0.0, 0.0)]));
        let rs = build_rayset(rays, Some(vec![vec![2, 1]]), 1e-10).unwrap();
        assert_eq!(rs.len(), 2);
        assert_eq!(rs.input_index(2), Some(0));
        assert_eq!(rs.bases(), &[vec![0, 1]]);
    }

    #[test]
    fn bad_inputs() {
        let mut rays = computational(2);
        rays[0].1[0] = C::new(2.0, 0.0);
        assert!(matches!(
            build_rayset(rays, None, 1e-10),
            Err(Error::ContractViolation(_))
        ));
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let mut rays = computational(2);
        rays.push(("plus".into(), vec![C::new(h, 0.0), C::new(h, 0.0)]));
        assert!(matches!(
            build_rayset(rays, Some(vec![vec![0, 2]]), 1e-10),
            Err(Error::MalformedConfiguration(_))
        ));
    }

    #[test]
    fn inconsistent_preassignment_is_not_unsat() {
        let rs = build_rayset(computational(4), None, 1e-10).unwrap();
        assert!(matches!(
            ks_search(&rs, &[(0, true), (1, true)]),
            Err(Error::ContractViolation(_))
        ));
        let all_zero: Vec<_> = (0..4).map(|i| (i, false)).collect();
        assert!(matches!(
            ks_search(&rs, &all_zero),
            Err(Error::ContractViolation(_))
        ));
    }

    #[test]
    fn counts_of_builtins() {
        let rs = builtin_34_rays::<f64>();
        assert_eq!(rs.len(), 34);
        let rs = builtin_48_rays::<f64>();
        assert_eq!(rs.len(), 48);
        assert_eq!(rs.bases().len(), 6);
        assert!(rs.bases().iter().all(|b| b.len() == 8));
    }

    #[test]
    fn pigeonhole_rays_are_unsat_with_both_states_on() {
        let rs = builtin_34_rays::<f64>();
        let pre = rs.resolve(&[("psi_i", true), ("psi_f", true)]).unwrap();
        let r = ks_search(&rs, &pre).unwrap();
        assert!(!r.satisfiable);
    }

    #[test]
    fn propagation_zeroes_every_phi_ray() {
        let rs = builtin_34_rays::<f64>();
        let pre = rs.resolve(&[("psi_i", true), ("psi_f", true)]).unwrap();
        let vals = propagate_only(&rs, &pre)
            .unwrap()
            .expect("no conflict before branching");
        for r in rs
            .rays()
            .iter()
            .enumerate()
            .filter(|(_, r)| r.label.starts_with("Phi"))
        {
            assert_eq!(vals[r.0], Some(false), "{}", r.1.label);
        }
    }

    #[test]
    fn rays_48_are_unsat() {
        let rs = builtin_48_rays::<f64>();
        let r = ks_search(&rs, &[]).unwrap();
        assert!(!r.satisfiable);
        assert!(r.stats.conflicts > 0);
    }

    #[test]
    fn file_round_trip() {
        let rs = builtin_48_rays::<f64>();
        let file = rs.to_file();
        let back = RaySetFile::from_json(&file.to_json()).unwrap();
        let rs2: RaySet<f64> = back.build(1e-10).unwrap();
        assert_eq!(rs2.len(), 48);
        assert_eq!(rs2.bases(), rs.bases());
    }
}
