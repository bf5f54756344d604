//! Dense states, spectral projectors of Weyl observables, joint eigenspaces
//! and pre/post-selection probabilities.

use num_complex::Complex;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::{inner, kron_vec, vec_norm, CMatrix, C};
use crate::root::Root;
use crate::scalar::Real;
use crate::weyl::{MeasurementContext, WeylOperator};

/// Tolerance and size limits shared by every numerical check.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Settings {
    /// Magnitude below which an amplitude or residual counts as zero.
    pub tolerance: f64,
    /// Cap on `d^n` for dense realizations.
    pub max_dim: usize,
}

impl Default for Settings {
    fn default() -> Self {
        Settings {
            tolerance: 1e-10,
            max_dim: crate::weyl::DEFAULT_MAX_DIM,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct StateVector<T: Real> {
    amps: Vec<C<T>>,
}

impl<T: Real> StateVector<T> {
    /// Wraps a vector that must already have unit norm within `1e-10`
    /// (or the type's precision floor, whichever is looser).
    pub fn new(amps: Vec<C<T>>) -> Result<Self> {
        let n = vec_norm(&amps).as_f64();
        let tol = 1e-10f64.max(T::EPSILON_FLOOR * 10.0);
        if (n - 1.0).abs() > tol {
            return Err(Error::ContractViolation(format!(
                "state vector has norm {n}, expected 1"
            )));
        }
        Ok(StateVector { amps })
    }

    /// Rescales a nonzero vector to unit norm.
    pub fn normalized(mut amps: Vec<C<T>>) -> Result<Self> {
        let n = vec_norm(&amps);
        if n == T::zero() {
            return Err(Error::ContractViolation(
                "cannot normalize the zero vector".into(),
            ));
        }
        for a in amps.iter_mut() {
            *a = *a / C::from(n);
        }
        Ok(StateVector { amps })
    }

    pub fn basis(dim: usize, index: usize) -> Self {
        let mut amps = vec![C::zero(); dim];
        amps[index] = C::new(T::one(), T::zero());
        StateVector { amps }
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[C<T>] {
        &self.amps
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &Self) -> Result<C<T>> {
        check_dims(self.dim(), other.dim())?;
        Ok(inner(&self.amps, &other.amps))
    }

    pub fn tensor(&self, other: &Self) -> Self {
        StateVector {
            amps: kron_vec(&self.amps, &other.amps),
        }
    }

    pub fn apply(&self, m: &CMatrix<T>) -> Result<Vec<C<T>>> {
        check_dims(m.cols(), self.dim())?;
        Ok(m.apply(&self.amps))
    }

    /// Equality up to a global phase: `|⟨a|b⟩| = 1` within `tol`.
    pub fn same_ray(&self, other: &Self, tol: f64) -> bool {
        self.dim() == other.dim()
            && (inner(&self.amps, &other.amps).norm().as_f64() - 1.0).abs() < tol
    }
}

fn check_dims(a: usize, b: usize) -> Result<()> {
    if a != b {
        return Err(Error::IncompatibleOperands(format!("dimension {a} vs {b}")));
    }
    Ok(())
}

/// A projector onto one joint outcome of a context.
#[derive(Clone, Debug, PartialEq)]
pub struct OutcomeProjector<T: Real> {
    pub outcome: Vec<Root>,
    pub matrix: CMatrix<T>,
}

impl<T: Real> OutcomeProjector<T> {
    pub fn rank(&self) -> usize {
        self.matrix.trace().re.as_f64().round() as usize
    }
}

/// Eigenvalues a Weyl operator can have: `A^d = τ^q` forces every
/// eigenvalue to be a `d`-th root of `τ^q`.
pub fn candidate_eigenvalues(op: &WeylOperator) -> Vec<Root> {
    let d = op.d() as i64;
    let q = op.pow(op.d()).phase().value() as i64;
    let mut out: Vec<Root> = (0..d)
        .map(|j| Root::new(q + 2 * d * j, (2 * d * d) as u64))
        .collect();
    out.sort();
    out
}

/// Spectral decomposition `{λ → Π_λ}` of a Weyl observable, sorted by label.
///
/// Uses `Π_λ = (1/d) Σ_k (λ^* A)^k`, which is exact for any operator whose
/// `d`-th power is a scalar. Empty eigenspaces are dropped.
pub fn spectral_projectors<T: Real>(
    op: &WeylOperator,
    max_dim: usize,
) -> Result<Vec<OutcomeProjector<T>>> {
    let a = op.to_matrix::<T>(max_dim)?;
    let dim = a.rows();
    let d = op.d();
    let mut powers = Vec::with_capacity(d as usize);
    powers.push(CMatrix::identity(dim));
    for k in 1..d as usize {
        let next = powers[k - 1].matmul(&a);
        powers.push(next);
    }
    let inv_d = C::from(T::one() / T::of(d as f64));
    let mut out = Vec::new();
    for lambda in candidate_eigenvalues(op) {
        let mut p = CMatrix::zeros(dim, dim);
        for (k, pk) in powers.iter().enumerate() {
            let coeff = lambda.conj().pow(k as i64).to_complex::<T>();
            p = &p + &pk.scale(coeff);
        }
        let p = p.scale(inv_d);
        if p.trace().re.as_f64() > 0.5 {
            out.push(OutcomeProjector {
                outcome: vec![lambda],
                matrix: p,
            });
        }
    }
    Ok(out)
}

/// Projector onto the joint eigenspace of `ctx` with the given eigenvalues.
/// A label that is not an eigenvalue yields the zero projector.
pub fn joint_projector<T: Real>(
    ctx: &MeasurementContext,
    outcomes: &[Root],
    max_dim: usize,
) -> Result<CMatrix<T>> {
    if outcomes.len() != ctx.len() {
        return Err(Error::ContractViolation(format!(
            "{} outcomes given for a context of {} observables",
            outcomes.len(),
            ctx.len()
        )));
    }
    let mut acc: Option<CMatrix<T>> = None;
    for (op, label) in ctx.observables().iter().zip(outcomes) {
        let projs = spectral_projectors::<T>(op, max_dim)?;
        let p = match projs.into_iter().find(|p| p.outcome[0] == *label) {
            Some(p) => p.matrix,
            None => {
                let dim = op.hilbert_dim().unwrap_or(0);
                return Ok(CMatrix::zeros(dim, dim));
            }
        };
        acc = Some(match acc {
            None => p,
            Some(m) => m.matmul(&p),
        });
    }
    Ok(acc.expect("context is nonempty"))
}

/// Orthonormal basis of the joint eigenspace; empty when the joint outcome
/// is infeasible.
pub fn joint_eigenspace<T: Real>(
    ctx: &MeasurementContext,
    outcomes: &[Root],
    settings: &Settings,
) -> Result<Vec<StateVector<T>>> {
    let p = joint_projector::<T>(ctx, outcomes, settings.max_dim)?;
    Ok(p.column_basis(settings.tolerance)
        .into_iter()
        .map(|amps| StateVector { amps })
        .collect())
}

/// The unique joint eigenvector, or a contract violation if the joint
/// eigenspace is not one-dimensional.
pub fn joint_eigenstate<T: Real>(
    ctx: &MeasurementContext,
    outcomes: &[Root],
    settings: &Settings,
) -> Result<StateVector<T>> {
    let mut basis = joint_eigenspace::<T>(ctx, outcomes, settings)?;
    if basis.len() != 1 {
        return Err(Error::ContractViolation(format!(
            "joint eigenspace of [{}] at ({}) has dimension {}, expected 1",
            ctx.labels().join(", "),
            outcomes
                .iter()
                .map(|r| r.to_string())
                .collect::<Vec<_>>()
                .join(", "),
            basis.len()
        )));
    }
    Ok(basis.remove(0))
}

/// Every nonempty joint outcome of a context, with its projector.
pub fn context_projectors<T: Real>(
    ctx: &MeasurementContext,
    max_dim: usize,
) -> Result<Vec<OutcomeProjector<T>>> {
    let mut partial: Vec<OutcomeProjector<T>> = Vec::new();
    for (i, op) in ctx.observables().iter().enumerate() {
        let projs = spectral_projectors::<T>(op, max_dim)?;
        if i == 0 {
            partial = projs;
            continue;
        }
        let mut next = Vec::new();
        for prev in &partial {
            for p in &projs {
                let m = prev.matrix.matmul(&p.matrix);
                if m.trace().re.as_f64() > 0.5 {
                    let mut outcome = prev.outcome.clone();
                    outcome.push(p.outcome[0]);
                    next.push(OutcomeProjector { outcome, matrix: m });
                }
            }
        }
        partial = next;
    }
    Ok(partial)
}

/// `⟨ψ_i|P|ψ_f⟩`.
pub fn amplitude<T: Real>(
    psi_i: &StateVector<T>,
    p: &CMatrix<T>,
    psi_f: &StateVector<T>,
) -> Result<Complex<T>> {
    check_dims(psi_i.dim(), p.rows())?;
    let pf = psi_f.apply(p)?;
    Ok(inner(&psi_i.amps, &pf))
}

/// ABL distribution `P(k) ∝ |⟨ψ_f|Π_k|ψ_i⟩|²` over a complete orthogonal
/// family of projectors. Amplitudes below the tolerance give exactly zero.
pub fn abl_probability<T: Real>(
    psi_i: &StateVector<T>,
    psi_f: &StateVector<T>,
    projectors: &[CMatrix<T>],
    settings: &Settings,
) -> Result<Vec<f64>> {
    let tol = settings.tolerance;
    let dim = psi_i.dim();
    check_dims(dim, psi_f.dim())?;
    let mut sum = CMatrix::<T>::zeros(dim, dim);
    for p in projectors {
        check_dims(dim, p.rows())?;
        sum = &sum + p;
    }
    if !sum.is_identity(tol.max(T::EPSILON_FLOOR) * dim as f64) {
        return Err(Error::ContractViolation(
            "projectors do not sum to the identity".into(),
        ));
    }
    let weights: Vec<f64> = projectors
        .iter()
        .map(|p| {
            let a = amplitude(psi_f, p, psi_i)?.norm().as_f64();
            Ok(if a < tol { 0.0 } else { a * a })
        })
        .collect::<Result<_>>()?;
    let total: f64 = weights.iter().sum();
    if total == 0.0 {
        return Err(Error::UndefinedDistribution);
    }
    Ok(weights.into_iter().map(|w| w / total).collect())
}

/// What the final measurement accepts.
#[derive(Clone, Debug)]
pub enum PostSelection<'a, T: Real> {
    State(&'a StateVector<T>),
    Subspace(&'a CMatrix<T>),
}

/// `|⟨ψ_f|ψ_i⟩|²`, or `⟨ψ_i|P|ψ_i⟩` for a post-selected subspace.
pub fn postselection_probability<T: Real>(
    psi_i: &StateVector<T>,
    post: PostSelection<'_, T>,
) -> Result<f64> {
    match post {
        PostSelection::State(f) => Ok(psi_i.inner(f)?.norm_sqr().as_f64()),
        PostSelection::Subspace(p) => Ok(amplitude(psi_i, p, psi_i)?.re.as_f64()),
    }
}
