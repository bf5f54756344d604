//! Exact symbolic algebra of generalized Pauli (Weyl) operators.
//!
//! An operator is `τ^p · ∏_a X_a^{x_a} Z_a^{z_a}` on `n` qudits of dimension
//! `d`, with `τ = exp(iπ/d)` so that `τ² = ω = exp(2πi/d)`. Per site the shift
//! is written left of the clock. The shift is `X = Σ_k |k⟩⟨k+1|` and the clock
//! `Z = Σ_k ω^k |k⟩⟨k|`, which gives `XZ = ω ZX`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::root::Root;
use crate::scalar::Real;

/// Default cap on `d^n` for dense realizations.
pub const DEFAULT_MAX_DIM: usize = 4096;

/// Exponent of `τ = exp(iπ/d)`, kept modulo `2d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PhaseExponent {
    p: u32,
    d: u32,
}

impl PhaseExponent {
    pub fn new(p: i64, d: u32) -> Self {
        PhaseExponent {
            p: p.rem_euclid(2 * d as i64) as u32,
            d,
        }
    }

    pub fn value(&self) -> u32 {
        self.p
    }

    pub fn modulus(&self) -> u32 {
        2 * self.d
    }

    pub fn to_root(&self) -> Root {
        Root::new(self.p as i64, 2 * self.d as u64)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WeylOperator {
    d: u32,
    x: Vec<u32>,
    z: Vec<u32>,
    phase: u32,
}

fn check_dim(d: u32) -> Result<()> {
    if d < 2 {
        return Err(Error::IncompatibleOperands(format!(
            "qudit dimension must be at least 2, got {d}"
        )));
    }
    Ok(())
}

impl WeylOperator {
    pub fn identity(n: usize, d: u32) -> Self {
        WeylOperator {
            d,
            x: vec![0; n],
            z: vec![0; n],
            phase: 0,
        }
    }

    /// Builds `τ^phase · ∏ X^x Z^z`, reducing every exponent.
    pub fn from_parts(d: u32, x: Vec<i64>, z: Vec<i64>, phase: i64) -> Result<Self> {
        check_dim(d)?;
        if x.len() != z.len() {
            return Err(Error::IncompatibleOperands(format!(
                "shift and clock vectors differ in length ({} vs {})",
                x.len(),
                z.len()
            )));
        }
        let red = |v: Vec<i64>| {
            v.into_iter()
                .map(|e| e.rem_euclid(d as i64) as u32)
                .collect()
        };
        Ok(WeylOperator {
            d,
            x: red(x),
            z: red(z),
            phase: PhaseExponent::new(phase, d).value(),
        })
    }

    /// `X_site^power` (site is 0-based).
    pub fn shift(n: usize, d: u32, site: usize, power: i64) -> Self {
        let mut op = Self::identity(n, d);
        op.x[site] = power.rem_euclid(d as i64) as u32;
        op
    }

    /// `Z_site^power` (site is 0-based).
    pub fn clock(n: usize, d: u32, site: usize, power: i64) -> Self {
        let mut op = Self::identity(n, d);
        op.z[site] = power.rem_euclid(d as i64) as u32;
        op
    }

    /// Qubit `Y = iXZ` on one site.
    pub fn pauli_y(n: usize, site: usize) -> Self {
        let mut op = Self::identity(n, 2);
        op.x[site] = 1;
        op.z[site] = 1;
        op.phase = 1;
        op
    }

    /// Product of single-site operators given as `(site, letter)` pairs.
    pub fn from_paulis(n: usize, d: u32, letters: &[(usize, char)]) -> Result<Self> {
        let mut acc = Self::identity(n, d);
        for &(site, letter) in letters {
            if site >= n {
                return Err(Error::IncompatibleOperands(format!(
                    "site {site} out of range for {n} sites"
                )));
            }
            let f = match letter {
                'X' => Self::shift(n, d, site, 1),
                'Z' => Self::clock(n, d, site, 1),
                'Y' if d == 2 => Self::pauli_y(n, site),
                'I' => Self::identity(n, d),
                other => {
                    return Err(Error::IncompatibleOperands(format!(
                        "unsupported letter {other} for dimension {d}"
                    )))
                }
            };
            acc = acc.mul(&f)?;
        }
        Ok(acc)
    }

    pub fn n(&self) -> usize {
        self.x.len()
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn x(&self) -> &[u32] {
        &self.x
    }

    pub fn z(&self) -> &[u32] {
        &self.z
    }

    pub fn phase(&self) -> PhaseExponent {
        PhaseExponent {
            p: self.phase,
            d: self.d,
        }
    }

    pub fn with_phase(mut self, p: i64) -> Self {
        self.phase = PhaseExponent::new(p, self.d).value();
        self
    }

    /// Multiplies by `τ^p`.
    pub fn times_phase(mut self, p: i64) -> Self {
        self.phase = PhaseExponent::new(self.phase as i64 + p, self.d).value();
        self
    }

    /// True when the operator is a multiple of the identity.
    pub fn is_scalar(&self) -> bool {
        self.x.iter().all(|&e| e == 0) && self.z.iter().all(|&e| e == 0)
    }

    pub fn is_identity(&self) -> bool {
        self.is_scalar() && self.phase == 0
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.d != other.d || self.n() != other.n() {
            return Err(Error::IncompatibleOperands(format!(
                "(n={}, d={}) vs (n={}, d={})",
                self.n(),
                self.d,
                other.n(),
                other.d
            )));
        }
        Ok(())
    }

    /// Normal-ordered product `self · other`.
    ///
    /// Per site, `Z^a X^b = ω^{-ab} X^b Z^a`, i.e. `-2ab` in τ units.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let d = self.d as i64;
        let mut phase = self.phase as i64 + other.phase as i64;
        for (za, xb) in self.z.iter().zip(&other.x) {
            phase -= 2 * (*za as i64) * (*xb as i64);
        }
        let x = self
            .x
            .iter()
            .zip(&other.x)
            .map(|(a, b)| ((a + b) as i64 % d) as u32)
            .collect();
        let z = self
            .z
            .iter()
            .zip(&other.z)
            .map(|(a, b)| ((a + b) as i64 % d) as u32)
            .collect();
        Ok(WeylOperator {
            d: self.d,
            x,
            z,
            phase: PhaseExponent::new(phase, self.d).value(),
        })
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::identity(self.n(), self.d);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base).expect("same shape");
            }
            base = base.mul(&base).expect("same shape");
            k >>= 1;
        }
        acc
    }

    /// Hermitian conjugate; for a unitary Weyl operator this is the inverse.
    pub fn dagger(&self) -> Self {
        let d = self.d as i64;
        let inv = WeylOperator {
            d: self.d,
            x: self
                .x
                .iter()
                .map(|&e| ((d - e as i64) % d) as u32)
                .collect(),
            z: self
                .z
                .iter()
                .map(|&e| ((d - e as i64) % d) as u32)
                .collect(),
            phase: 0,
        };
        // self · inv is a pure phase τ^q; the inverse carries τ^{-q}.
        let q = self.mul(&inv).expect("same shape").phase as i64;
        inv.with_phase(-q)
    }

    /// `s` with `A·B = ω^s B·A`.
    pub fn symplectic_product(&self, other: &Self) -> Result<u32> {
        self.check_compatible(other)?;
        let d = self.d as i64;
        let mut s = 0i64;
        for a in 0..self.n() {
            s += self.x[a] as i64 * other.z[a] as i64 - self.z[a] as i64 * other.x[a] as i64;
        }
        Ok(s.rem_euclid(d) as u32)
    }

    pub fn commutes(&self, other: &Self) -> Result<bool> {
        Ok(self.symplectic_product(other)? == 0)
    }

    /// Hilbert-space dimension `d^n`, or `None` on overflow.
    pub fn hilbert_dim(&self) -> Option<usize> {
        (self.d as usize).checked_pow(self.n() as u32)
    }

    /// Dense `d^n × d^n` matrix, site 1 being the most significant digit.
    pub fn to_matrix<T: Real>(&self, max_dim: usize) -> Result<CMatrix<T>> {
        let dim = match self.hilbert_dim() {
            Some(dim) if dim <= max_dim => dim,
            other => {
                return Err(Error::TooLarge {
                    dim: other.unwrap_or(usize::MAX),
                    cap: max_dim,
                })
            }
        };
        let d = self.d as usize;
        let n = self.n();
        let two_d = 2 * self.d as u64;
        // Precompute τ^q for q in 0..2d.
        let table: Vec<_> = (0..two_d)
            .map(|q| Root::new(q as i64, two_d).to_complex::<T>())
            .collect();
        let mut m = CMatrix::zeros(dim, dim);
        let mut digits = vec![0usize; n];
        for col in 0..dim {
            let mut rem = col;
            for a in (0..n).rev() {
                digits[a] = rem % d;
                rem /= d;
            }
            let mut q = self.phase as u64;
            let mut row = 0usize;
            for a in 0..n {
                q += 2 * self.z[a] as u64 * digits[a] as u64;
                row = row * d + (digits[a] + d - self.x[a] as usize) % d;
            }
            m.set(row, col, table[(q % two_d) as usize]);
        }
        Ok(m)
    }
}

/// Product of a list of operators, left to right.
pub fn product(ops: &[WeylOperator]) -> Result<WeylOperator> {
    let first = ops
        .first()
        .ok_or_else(|| Error::IncompatibleOperands("empty product has no shape".into()))?;
    ops[1..]
        .iter()
        .try_fold(first.clone(), |acc, op| acc.mul(op))
}

/// Parses the operator grammar: whitespace-separated tokens `X3`, `Z2^3`,
/// `Y1` (qubits only) or `I`, optionally preceded by one phase tag
/// (`+`, `-`, `i`, `-i`, `w^k`, `tau^k`, with an optional sign). Sites are
/// 1-based; tokens multiply left to right.
pub fn parse_weyl(text: &str, n: usize, d: u32) -> Result<WeylOperator> {
    check_dim(d)?;
    let mut acc = WeylOperator::identity(n, d);
    let mut tokens = text.split_whitespace().peekable();
    if let Some(first) = tokens.peek() {
        if let Some(p) = parse_phase_tag(first, d)? {
            acc = acc.with_phase(p);
            tokens.next();
        }
    }
    for tok in tokens {
        acc = acc.mul(&parse_factor(tok, n, d)?)?;
    }
    Ok(acc)
}

fn parse_phase_tag(tok: &str, d: u32) -> Result<Option<i64>> {
    let (sign, rest) = match tok.as_bytes().first() {
        Some(b'+') => (0i64, &tok[1..]),
        Some(b'-') => (d as i64, &tok[1..]),
        _ => (0, tok),
    };
    let explicit_sign = rest.len() != tok.len();
    let body = if rest.is_empty() {
        if !explicit_sign {
            return Ok(None);
        }
        0
    } else if rest == "i" {
        if !d.is_multiple_of(2) {
            return Err(Error::Parse(format!(
                "phase tag `i` needs even d, got d={d}"
            )));
        }
        d as i64 / 2
    } else if let Some(k) = rest.strip_prefix("tau^") {
        parse_int(k, tok)?
    } else if let Some(k) = rest.strip_prefix("w^") {
        2 * parse_int(k, tok)?
    } else if explicit_sign {
        return Err(Error::Parse(format!("malformed phase tag `{tok}`")));
    } else {
        return Ok(None);
    };
    Ok(Some(sign + body))
}

fn parse_int(s: &str, tok: &str) -> Result<i64> {
    s.parse::<i64>()
        .map_err(|_| Error::Parse(format!("malformed exponent in `{tok}`")))
}

fn parse_factor(tok: &str, n: usize, d: u32) -> Result<WeylOperator> {
    if tok == "I" {
        return Ok(WeylOperator::identity(n, d));
    }
    let mut chars = tok.chars();
    let letter = chars
        .next()
        .ok_or_else(|| Error::Parse("empty token".into()))?;
    let rest = chars.as_str();
    let (site_txt, power_txt) = match rest.split_once('^') {
        Some((s, p)) => (s, Some(p)),
        None => (rest, None),
    };
    let site: usize = site_txt
        .parse()
        .map_err(|_| Error::Parse(format!("malformed token `{tok}`")))?;
    if site == 0 || site > n {
        return Err(Error::Parse(format!(
            "unknown site index {site} in `{tok}` (n={n})"
        )));
    }
    let power = match power_txt {
        Some(p) => parse_int(p, tok)?,
        None => 1,
    };
    let single = match letter {
        'X' => WeylOperator::shift(n, d, site - 1, 1),
        'Z' => WeylOperator::clock(n, d, site - 1, 1),
        'Y' if d == 2 => WeylOperator::pauli_y(n, site - 1),
        'Y' => {
            return Err(Error::Parse(format!(
                "`{tok}`: Y is only defined for d=2 (d={d})"
            )))
        }
        _ => return Err(Error::Parse(format!("malformed token `{tok}`"))),
    };
    let order = 2 * d as i64;
    Ok(single.pow(power.rem_euclid(order) as u32))
}

impl fmt::Display for WeylOperator {
    /// Emits the same grammar `parse_weyl` reads.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = self.d;
        let mut tokens = Vec::new();
        let mut phase = self.phase as i64;
        for a in 0..self.n() {
            let (x, z) = (self.x[a], self.z[a]);
            if d == 2 && x == 1 && z == 1 {
                tokens.push(format!("Y{}", a + 1));
                phase -= 1;
                continue;
            }
            for (letter, e) in [('X', x), ('Z', z)] {
                match e {
                    0 => {}
                    1 => tokens.push(format!("{letter}{}", a + 1)),
                    e => tokens.push(format!("{letter}{}^{e}", a + 1)),
                }
            }
        }
        let p = phase.rem_euclid(2 * d as i64) as u32;
        let tag = if p == 0 {
            None
        } else if p == d {
            Some("-".to_string())
        } else if d.is_multiple_of(2) && p == d / 2 {
            Some("i".to_string())
        } else if d.is_multiple_of(2) && p == 3 * d / 2 {
            Some("-i".to_string())
        } else if p.is_multiple_of(2) {
            Some(format!("w^{}", p / 2))
        } else {
            Some(format!("tau^{p}"))
        };
        if tokens.is_empty() {
            tokens.push("I".into());
        }
        match tag {
            Some(t) => write!(f, "{t} {}", tokens.join(" ")),
            None => write!(f, "{}", tokens.join(" ")),
        }
    }
}

/// A set of pairwise commuting observables, optionally labeled.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MeasurementContext {
    observables: Vec<WeylOperator>,
    labels: Vec<String>,
}

impl MeasurementContext {
    pub fn new(observables: Vec<WeylOperator>) -> Result<Self> {
        let labels = observables.iter().map(|o| o.to_string()).collect();
        Self::with_labels(observables, labels)
    }

    pub fn with_labels(observables: Vec<WeylOperator>, labels: Vec<String>) -> Result<Self> {
        if observables.is_empty() {
            return Err(Error::ContractViolation(
                "a measurement context needs at least one observable".into(),
            ));
        }
        if labels.len() != observables.len() {
            return Err(Error::ContractViolation(
                "one label per observable is required".into(),
            ));
        }
        for (i, a) in observables.iter().enumerate() {
            for b in &observables[i + 1..] {
                if !a.commutes(b)? {
                    return Err(Error::ContractViolation(format!(
                        "`{a}` and `{b}` do not commute"
                    )));
                }
            }
        }
        Ok(MeasurementContext {
            observables,
            labels,
        })
    }

    /// Parses each entry with the operator grammar.
    pub fn parse(texts: &[&str], n: usize, d: u32) -> Result<Self> {
        let ops = texts
            .iter()
            .map(|t| parse_weyl(t, n, d))
            .collect::<Result<Vec<_>>>()?;
        Self::with_labels(ops, texts.iter().map(|t| t.to_string()).collect())
    }

    pub fn observables(&self) -> &[WeylOperator] {
        &self.observables
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.observables.len()
    }

    pub fn is_empty(&self) -> bool {
        self.observables.is_empty()
    }

    pub fn n(&self) -> usize {
        self.observables[0].n()
    }

    pub fn d(&self) -> u32 {
        self.observables[0].d()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn op(s: &str, n: usize, d: u32) -> WeylOperator {
        parse_weyl(s, n, d).unwrap()
    }

    #[test]
    fn z_times_x_on_a_qubit() {
        let zx = op("Z1", 1, 2).mul(&op("X1", 1, 2)).unwrap();
        assert_eq!(zx.x(), &[1]);
        assert_eq!(zx.z(), &[1]);
        assert_eq!(zx.phase().value(), 2);
    }

    #[test]
    fn triangle_stabilizers_multiply_to_minus_xv() {
        let gs = ["X1 Z2 Z3", "Z1 X2 Z3", "Z1 Z2 X3"].map(|s| op(s, 3, 2));
        let p = product(&gs).unwrap();
        assert_eq!(p.x(), &[1, 1, 1]);
        assert_eq!(p.z(), &[0, 0, 0]);
        assert_eq!(p.phase().value(), 2);
        assert_eq!(p, op("- X1 X2 X3", 3, 2));
    }

    #[test]
    fn identity_is_neutral() {
        let a = op("i X1 Z2^2", 2, 4);
        assert_eq!(a.mul(&WeylOperator::identity(2, 4)).unwrap(), a);
        assert_eq!(WeylOperator::identity(2, 4).mul(&a).unwrap(), a);
    }

    #[test]
    fn dagger_cases() {
        let x = op("X1", 1, 2);
        assert_eq!(x.dagger(), x);
        let y = op("Y1", 1, 2);
        assert_eq!(y.dagger(), y);
        let x4 = op("X1", 1, 4);
        let xd = x4.dagger();
        assert_eq!(xd.x(), &[3]);
        assert!(x4.mul(&xd).unwrap().is_identity());
    }

    #[test]
    fn symplectic_examples() {
        assert_eq!(
            op("X1", 1, 2).symplectic_product(&op("Z1", 1, 2)).unwrap(),
            1
        );
        assert!(op("Z1 Z2", 2, 2).commutes(&op("X1 X2", 2, 2)).unwrap());
        let (x, y, z) = (op("X1 X2", 2, 2), op("Y1 Y2", 2, 2), op("Z1 Z2", 2, 2));
        assert!(x.commutes(&y).unwrap() && y.commutes(&z).unwrap() && x.commutes(&z).unwrap());
    }

    #[test]
    fn mismatched_shapes_are_rejected() {
        let e = op("X1", 1, 2).mul(&op("X1", 1, 3)).unwrap_err();
        assert!(matches!(e, Error::IncompatibleOperands(_)));
        assert!(op("X1", 1, 2).commutes(&op("X1 X2", 2, 2)).is_err());
    }

    #[test]
    fn parse_examples() {
        let g1 = op("X1 Z2 Z3", 3, 2);
        assert_eq!(
            (g1.x(), g1.z(), g1.phase().value()),
            (&[1, 0, 0][..], &[0, 1, 1][..], 0)
        );
        let yy = op("Y1 Y2", 2, 2);
        assert_eq!(
            (yy.x(), yy.z(), yy.phase().value()),
            (&[1, 1][..], &[1, 1][..], 2)
        );
        assert!(op("", 3, 2).is_identity());
        assert_eq!(op("X2^3", 2, 4).x(), &[0, 3]);
        assert_eq!(op("w^1 Z1", 1, 4).phase().value(), 2);
        assert_eq!(op("-i X1", 1, 2).phase().value(), 3);
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(parse_weyl("X4", 3, 2), Err(Error::Parse(_))));
        assert!(matches!(parse_weyl("X0", 3, 2), Err(Error::Parse(_))));
        assert!(matches!(parse_weyl("Y1", 1, 3), Err(Error::Parse(_))));
        assert!(matches!(parse_weyl("Q1", 1, 2), Err(Error::Parse(_))));
        assert!(matches!(parse_weyl("X1^", 1, 2), Err(Error::Parse(_))));
        assert!(matches!(parse_weyl("i X1", 1, 3), Err(Error::Parse(_))));
    }

    #[test]
    fn formatter_output() {
        assert_eq!(op("Y1 Y2", 2, 2).to_string(), "Y1 Y2");
        assert_eq!(op("Z1 X1", 1, 2).to_string(), "i Y1");
        assert_eq!(op("", 2, 3).to_string(), "I");
        assert_eq!(op("X1 Z2^3", 2, 4).dagger().to_string(), "X1^3 Z2");
    }

    #[test]
    fn small_matrices() {
        let z = op("Z1", 1, 2).to_matrix::<f64>(DEFAULT_MAX_DIM).unwrap();
        assert_eq!(z.get(0, 0).re, 1.0);
        assert_eq!(z.get(1, 1).re, -1.0);
        let z4 = op("Z1", 1, 4).to_matrix::<f64>(DEFAULT_MAX_DIM).unwrap();
        let diag: Vec<_> = (0..4).map(|k| z4.get(k, k)).collect();
        assert_eq!(
            diag,
            vec![Root::ONE, Root::I, Root::MINUS_ONE, Root::MINUS_I]
                .into_iter()
                .map(|r| r.to_complex::<f64>())
                .collect::<Vec<_>>()
        );
        let xx = op("X1", 1, 2)
            .mul(&op("X1", 1, 2))
            .unwrap()
            .to_matrix::<f64>(16)
            .unwrap();
        assert!(xx.is_identity(0.0 + 1e-15));
    }

    #[test]
    fn matrix_cap() {
        let big = WeylOperator::identity(13, 2);
        assert!(matches!(
            big.to_matrix::<f64>(DEFAULT_MAX_DIM),
            Err(Error::TooLarge { dim: 8192, .. })
        ));
    }

    #[test]
    fn context_rejects_noncommuting() {
        let e = MeasurementContext::parse(&["X1", "Z1"], 1, 2).unwrap_err();
        assert!(matches!(e, Error::ContractViolation(_)));
        assert_eq!(
            MeasurementContext::parse(&["X1 X2", "Y1 Y2", "Z1 Z2"], 2, 2)
                .unwrap()
                .len(),
            3
        );
    }
}
