//! Fixed-size real matrix helpers for single- and two-mode covariance matrices.
//!
//! Everything here is closed-form cofactor algebra on 2×2 and 4×4 arrays.
//! The two-mode layout is `(x_A, p_A, x_B, p_B)` with 2×2 blocks
//! `[[A, C], [Cᵀ, B]]`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Mat2 = [[f64; 2]; 2];
pub type Mat4 = [[f64; 4]; 4];

pub const IDENTITY2: Mat2 = [[1.0, 0.0], [0.0, 1.0]];
pub const IDENTITY4: Mat4 = [
    [1.0, 0.0, 0.0, 0.0],
    [0.0, 1.0, 0.0, 0.0],
    [0.0, 0.0, 1.0, 0.0],
    [0.0, 0.0, 0.0, 1.0],
];

/// Slack allowed on eigenvalue-type physicality conditions.
pub const PHYS_TOL: f64 = 1e-9;

/// Global symplectic eigenvalues of a two-mode covariance matrix.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SymplecticSpectrum {
    pub nu_plus: f64,
    pub nu_minus: f64,
}

pub fn det2(m: &Mat2) -> f64 {
    m[0][0] * m[1][1] - m[0][1] * m[1][0]
}

pub fn inv2(m: &Mat2) -> Result<Mat2> {
    let d = det2(m);
    if d.abs() <= 1e-14 * (1.0 + max_abs2(m).powi(2)) {
        return Err(Error::Singular(d));
    }
    Ok([[m[1][1] / d, -m[0][1] / d], [-m[1][0] / d, m[0][0] / d]])
}

fn max_abs2(m: &Mat2) -> f64 {
    m.iter().flatten().fold(0.0_f64, |acc, x| acc.max(x.abs()))
}

pub fn matmul2(a: &Mat2, b: &Mat2) -> Mat2 {
    let mut out = [[0.0; 2]; 2];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            *cell = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

pub fn transpose2(m: &Mat2) -> Mat2 {
    [[m[0][0], m[1][0]], [m[0][1], m[1][1]]]
}

pub fn add2(a: &Mat2, b: &Mat2) -> Mat2 {
    [
        [a[0][0] + b[0][0], a[0][1] + b[0][1]],
        [a[1][0] + b[1][0], a[1][1] + b[1][1]],
    ]
}

pub fn sub2(a: &Mat2, b: &Mat2) -> Mat2 {
    [
        [a[0][0] - b[0][0], a[0][1] - b[0][1]],
        [a[1][0] - b[1][0], a[1][1] - b[1][1]],
    ]
}

pub fn scale2(m: &Mat2, s: f64) -> Mat2 {
    [[m[0][0] * s, m[0][1] * s], [m[1][0] * s, m[1][1] * s]]
}

pub fn matmul4(a: &Mat4, b: &Mat4) -> Mat4 {
    let mut out = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            out[i][j] = (0..4).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    out
}

pub fn transpose4(m: &Mat4) -> Mat4 {
    let mut out = [[0.0; 4]; 4];
    for (i, row) in m.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            out[j][i] = v;
        }
    }
    out
}

/// Cofactor matrix entries via 2×2 minors (Laplace expansion by complementary minors).
pub fn adj4(m: &Mat4) -> Mat4 {
    let s0 = m[0][0] * m[1][1] - m[1][0] * m[0][1];
    let s1 = m[0][0] * m[1][2] - m[1][0] * m[0][2];
    let s2 = m[0][0] * m[1][3] - m[1][0] * m[0][3];
    let s3 = m[0][1] * m[1][2] - m[1][1] * m[0][2];
    let s4 = m[0][1] * m[1][3] - m[1][1] * m[0][3];
    let s5 = m[0][2] * m[1][3] - m[1][2] * m[0][3];

    let c5 = m[2][2] * m[3][3] - m[3][2] * m[2][3];
    let c4 = m[2][1] * m[3][3] - m[3][1] * m[2][3];
    let c3 = m[2][1] * m[3][2] - m[3][1] * m[2][2];
    let c2 = m[2][0] * m[3][3] - m[3][0] * m[2][3];
    let c1 = m[2][0] * m[3][2] - m[3][0] * m[2][2];
    let c0 = m[2][0] * m[3][1] - m[3][0] * m[2][1];

    [
        [
            m[1][1] * c5 - m[1][2] * c4 + m[1][3] * c3,
            -m[0][1] * c5 + m[0][2] * c4 - m[0][3] * c3,
            m[3][1] * s5 - m[3][2] * s4 + m[3][3] * s3,
            -m[2][1] * s5 + m[2][2] * s4 - m[2][3] * s3,
        ],
        [
            -m[1][0] * c5 + m[1][2] * c2 - m[1][3] * c1,
            m[0][0] * c5 - m[0][2] * c2 + m[0][3] * c1,
            -m[3][0] * s5 + m[3][2] * s2 - m[3][3] * s1,
            m[2][0] * s5 - m[2][2] * s2 + m[2][3] * s1,
        ],
        [
            m[1][0] * c4 - m[1][1] * c2 + m[1][3] * c0,
            -m[0][0] * c4 + m[0][1] * c2 - m[0][3] * c0,
            m[3][0] * s4 - m[3][1] * s2 + m[3][3] * s0,
            -m[2][0] * s4 + m[2][1] * s2 - m[2][3] * s0,
        ],
        [
            -m[1][0] * c3 + m[1][1] * c1 - m[1][2] * c0,
            m[0][0] * c3 - m[0][1] * c1 + m[0][2] * c0,
            -m[3][0] * s3 + m[3][1] * s1 - m[3][2] * s0,
            m[2][0] * s3 - m[2][1] * s1 + m[2][2] * s0,
        ],
    ]
}

pub fn det4(m: &Mat4) -> f64 {
    let s0 = m[0][0] * m[1][1] - m[1][0] * m[0][1];
    let s1 = m[0][0] * m[1][2] - m[1][0] * m[0][2];
    let s2 = m[0][0] * m[1][3] - m[1][0] * m[0][3];
    let s3 = m[0][1] * m[1][2] - m[1][1] * m[0][2];
    let s4 = m[0][1] * m[1][3] - m[1][1] * m[0][3];
    let s5 = m[0][2] * m[1][3] - m[1][2] * m[0][3];

    let c5 = m[2][2] * m[3][3] - m[3][2] * m[2][3];
    let c4 = m[2][1] * m[3][3] - m[3][1] * m[2][3];
    let c3 = m[2][1] * m[3][2] - m[3][1] * m[2][2];
    let c2 = m[2][0] * m[3][3] - m[3][0] * m[2][3];
    let c1 = m[2][0] * m[3][2] - m[3][0] * m[2][2];
    let c0 = m[2][0] * m[3][1] - m[3][0] * m[2][1];

    s0 * c5 - s1 * c4 + s2 * c3 + s3 * c2 - s4 * c1 + s5 * c0
}

pub fn inv4(m: &Mat4) -> Result<Mat4> {
    let d = det4(m);
    let scale = m.iter().flatten().fold(0.0_f64, |acc, x| acc.max(x.abs()));
    if d.abs() <= 1e-14 * scale.powi(4).max(1.0) {
        return Err(Error::Singular(d));
    }
    let adj = adj4(m);
    let mut out = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            out[i][j] = adj[i][j] / d;
        }
    }
    Ok(out)
}

/// Quadratic form `uᵀ M v` for 4-vectors.
pub fn bilinear4(u: &[f64; 4], m: &Mat4, v: &[f64; 4]) -> f64 {
    let mut acc = 0.0;
    for i in 0..4 {
        for j in 0..4 {
            acc += u[i] * m[i][j] * v[j];
        }
    }
    acc
}

/// Splits a 4×4 matrix into its `A`, `B`, `C` blocks.
pub fn blocks(m: &Mat4) -> (Mat2, Mat2, Mat2) {
    let a = [[m[0][0], m[0][1]], [m[1][0], m[1][1]]];
    let b = [[m[2][2], m[2][3]], [m[3][2], m[3][3]]];
    let c = [[m[0][2], m[0][3]], [m[1][2], m[1][3]]];
    (a, b, c)
}

pub fn from_blocks(a: &Mat2, b: &Mat2, c: &Mat2) -> Mat4 {
    [
        [a[0][0], a[0][1], c[0][0], c[0][1]],
        [a[1][0], a[1][1], c[1][0], c[1][1]],
        [c[0][0], c[1][0], b[0][0], b[0][1]],
        [c[0][1], c[1][1], b[1][0], b[1][1]],
    ]
}

pub fn is_symmetric4(m: &Mat4, tol: f64) -> bool {
    (0..4).all(|i| (0..i).all(|j| (m[i][j] - m[j][i]).abs() <= tol * (1.0 + m[i][j].abs())))
}

/// `Δ = det A + det B + 2 det C` (seralian) of a two-mode covariance matrix.
pub fn seralian(cm: &Mat4) -> f64 {
    let (a, b, c) = blocks(cm);
    det2(&a) + det2(&b) + 2.0 * det2(&c)
}

/// Global symplectic eigenvalues from `2ν±² = Δ ± √(Δ² − 4 det γ)`.
pub fn symplectic_eigenvalues(cm: &Mat4) -> Result<SymplecticSpectrum> {
    let det = det4(cm);
    spectrum_from_invariants(seralian(cm), det)
}

/// Same as [`symplectic_eigenvalues`] for the partially transposed matrix
/// (`det C` enters with a flipped sign).
pub fn partial_transpose_eigenvalues(cm: &Mat4) -> Result<SymplecticSpectrum> {
    let (a, b, c) = blocks(cm);
    let delta = det2(&a) + det2(&b) - 2.0 * det2(&c);
    spectrum_from_invariants(delta, det4(cm))
}

/// Slack on the uncertainty relation for covariances of magnitude `scale`.
///
/// Storing the entries already perturbs `det γ` by about `ε·scale²`, so the
/// absolute tolerance grows with the square of the largest entry.
pub fn phys_tol(scale: f64) -> f64 {
    PHYS_TOL.max(64.0 * f64::EPSILON * scale * scale)
}

/// `a b − c²` with a single rounding error on the result.
pub fn ab_minus_sq(a: f64, b: f64, c: f64) -> f64 {
    let p = c * c;
    let err = c.mul_add(c, -p);
    a.mul_add(b, -p) - err
}

pub(crate) fn spectrum_from_invariants(delta: f64, det: f64) -> Result<SymplecticSpectrum> {
    spectrum_from_parts(delta, det, delta * delta - 4.0 * det)
}

/// Spectrum from `Δ`, `det γ` and a separately evaluated discriminant
/// `Δ² − 4 det γ`.
pub(crate) fn spectrum_from_parts(delta: f64, det: f64, disc: f64) -> Result<SymplecticSpectrum> {
    if !(det > 0.0) {
        return Err(Error::NonPhysical(format!("det γ = {det:e} is not positive")));
    }
    let mut disc = disc;
    if disc < 0.0 {
        if disc < -PHYS_TOL * delta.abs().max(1.0).powi(2) {
            return Err(Error::NonPhysical(format!(
                "negative discriminant Δ² − 4 det γ = {disc:e}"
            )));
        }
        disc = 0.0;
    }
    let root = disc.sqrt();
    let plus_sq = 0.5 * (delta + root);
    // ν₋² = det / ν₊² avoids the cancellation in Δ − √(...).
    let minus_sq = if plus_sq > 0.0 { det / plus_sq } else { 0.0 };
    if !(plus_sq > 0.0) {
        return Err(Error::NonPhysical(format!("Δ = {delta:e} gives no positive eigenvalue")));
    }
    Ok(SymplecticSpectrum {
        nu_plus: plus_sq.sqrt(),
        nu_minus: minus_sq.sqrt(),
    })
}

/// Single-mode rotation `U(θ) = [[cos θ, sin θ], [−sin θ, cos θ]]`.
pub fn rotation(theta: f64) -> Mat2 {
    let (s, c) = theta.sin_cos();
    [[c, s], [-s, c]]
}

/// Pure single-mode covariance `U(θ) diag(e^{2r}, e^{−2r}) U(θ)ᵀ`.
pub fn squeezed_cm(r: f64, theta: f64) -> Mat2 {
    let u = rotation(theta);
    let v = [[(2.0 * r).exp(), 0.0], [0.0, (-2.0 * r).exp()]];
    matmul2(&matmul2(&u, &v), &transpose2(&u))
}
