//! Dense reference matrices built directly from their definitions, sharing
//! nothing with the library's linear algebra.

#![allow(dead_code)]

use contextlab::WeylOperator;
use num_complex::Complex64 as C;

pub type M = Vec<Vec<C>>;

pub fn c(re: f64, im: f64) -> C {
    C::new(re, im)
}

pub fn eye(n: usize) -> M {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { c(1.0, 0.0) } else { c(0.0, 0.0) })
                .collect()
        })
        .collect()
}

pub fn zeros(n: usize) -> M {
    vec![vec![c(0.0, 0.0); n]; n]
}

pub fn mul(a: &M, b: &M) -> M {
    let n = a.len();
    let mut out = zeros(n);
    for i in 0..n {
        for k in 0..n {
            if a[i][k] == c(0.0, 0.0) {
                continue;
            }
            for j in 0..n {
                out[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    out
}

pub fn add(a: &M, b: &M) -> M {
    a.iter()
        .zip(b)
        .map(|(r, s)| r.iter().zip(s).map(|(x, y)| x + y).collect())
        .collect()
}

pub fn scale(a: &M, s: C) -> M {
    a.iter()
        .map(|r| r.iter().map(|x| x * s).collect())
        .collect()
}

pub fn kron(a: &M, b: &M) -> M {
    let (n, m) = (a.len(), b.len());
    let mut out = zeros(n * m);
    for i in 0..n {
        for j in 0..n {
            for k in 0..m {
                for l in 0..m {
                    out[i * m + k][j * m + l] = a[i][j] * b[k][l];
                }
            }
        }
    }
    out
}

pub fn kron_all(ms: &[M]) -> M {
    ms[1..].iter().fold(ms[0].clone(), |acc, m| kron(&acc, m))
}

pub fn apply(a: &M, v: &[C]) -> Vec<C> {
    a.iter()
        .map(|r| r.iter().zip(v).map(|(x, y)| x * y).sum())
        .collect()
}

pub fn dot(a: &[C], b: &[C]) -> C {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub fn frobenius(a: &M) -> f64 {
    a.iter().flatten().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

pub fn max_diff(a: &M, b: &M) -> f64 {
    a.iter()
        .flatten()
        .zip(b.iter().flatten())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

pub fn vec_diff(a: &[C], b: &[C]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm_sqr())
        .sum::<f64>()
        .sqrt()
}

/// `e^{iπ k/d}`.
pub fn tau(k: i64, d: u32) -> C {
    C::from_polar(1.0, std::f64::consts::PI * k as f64 / d as f64)
}

/// `X|k⟩ = |k-1⟩`.
pub fn shift(d: u32) -> M {
    let d = d as usize;
    let mut m = zeros(d);
    for k in 0..d {
        m[(k + d - 1) % d][k] = c(1.0, 0.0);
    }
    m
}

/// `Z = diag(ω^k)`.
pub fn clock(d: u32) -> M {
    let mut m = zeros(d as usize);
    for k in 0..d as usize {
        m[k][k] = tau(2 * k as i64, d);
    }
    m
}

pub fn power(a: &M, k: u32) -> M {
    (0..k).fold(eye(a.len()), |acc, _| mul(&acc, a))
}

/// `τ^p ⊗_a X^{x_a} Z^{z_a}`, site 1 leftmost.
pub fn weyl(op: &WeylOperator) -> M {
    let d = op.d();
    let sites: Vec<M> = (0..op.n())
        .map(|a| mul(&power(&shift(d), op.x()[a]), &power(&clock(d), op.z()[a])))
        .collect();
    scale(&kron_all(&sites), tau(op.phase().value() as i64, d))
}

pub fn pauli(letter: char) -> M {
    match letter {
        'I' => eye(2),
        'X' => vec![
            vec![c(0.0, 0.0), c(1.0, 0.0)],
            vec![c(1.0, 0.0), c(0.0, 0.0)],
        ],
        'Y' => vec![
            vec![c(0.0, 0.0), c(0.0, -1.0)],
            vec![c(0.0, 1.0), c(0.0, 0.0)],
        ],
        'Z' => vec![
            vec![c(1.0, 0.0), c(0.0, 0.0)],
            vec![c(0.0, 0.0), c(-1.0, 0.0)],
        ],
        _ => panic!("pauli letter {letter}"),
    }
}

/// Pauli string such as `"XIZ"`.
pub fn paulis(word: &str) -> M {
    kron_all(&word.chars().map(pauli).collect::<Vec<_>>())
}

/// `(I + s A)/2` for an involution `A`.
pub fn half(a: &M, s: f64) -> M {
    scale(&add(&eye(a.len()), &scale(a, c(s, 0.0))), c(0.5, 0.0))
}

pub fn product_state(factors: &[[C; 2]]) -> Vec<C> {
    factors.iter().fold(vec![c(1.0, 0.0)], |acc, f| {
        acc.iter()
            .flat_map(|a| f.iter().map(move |b| a * b))
            .collect()
    })
}

/// `±1` eigenvector of X: `(|0⟩ ± |1⟩)/√2`.
pub fn x_eig(s: f64) -> [C; 2] {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    [c(h, 0.0), c(s * h, 0.0)]
}

/// `±1` eigenvector of Y: `(|0⟩ ± i|1⟩)/√2`.
pub fn y_eig(s: f64) -> [C; 2] {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    [c(h, 0.0), c(0.0, s * h)]
}

/// `⟨f|P|i⟩`.
pub fn amp(f: &[C], p: &M, i: &[C]) -> C {
    dot(f, &apply(p, i))
}
