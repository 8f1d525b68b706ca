//! Classical correlations under bi-local Gaussian measurements: Gaussian
//! classical mutual information, Gaussian AMID and Gaussian discord.
//!
//! A covariant Gaussian POVM on one mode is generated by a pure seed with
//! covariance `U(θ) diag(e^{2r}, e^{−2r}) U(θ)ᵀ`; `r = 0` is heterodyne
//! detection and `r → ∞` homodyne detection. Homodyne limits are always
//! evaluated through their analytic forms, never by substituting a large `r`.
//!
//! After optimizing the phases, the objective depends on `λ = e^{2r_A}` and
//! `μ = e^{2r_B}` through `h = (I₄′ − I₃²)/(I₁ I₂)` and `f = 1/(1 − h)`, and
//! `I_c^G = ½ ln sup f`.

use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};
use twofloat::TwoFloat;

use crate::entropy::{entropy_f_clamped, entropy_f_resolved, quantum_mutual_information};
use crate::error::{Error, Result};
use crate::linalg::{ab_minus_sq, add2, blocks, Mat2, Mat4};
use crate::real::Real;
use crate::poly::{solve_quadratic, solve_quartic};
use crate::state::StandardFormCM;

/// Default agreement threshold between analytic branches and numeric oracles.
pub const DEFAULT_OPT_TOL: f64 = 1e-6;

/// Relative size below which a covariance counts as zero for branch dispatch.
const BRANCH_TOL: f64 = 1e-14;

const STATIONARITY_GRID: usize = 400;
const LN_LAMBDA_MAX: f64 = 40.0;
const ORACLE_GRID: usize = 25;

mod inf_f64 {
    //! `f64` that serializes `+∞` as the string `"inf"`.
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if *v == f64::INFINITY {
            s.serialize_str("inf")
        } else {
            s.serialize_f64(*v)
        }
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Num(f64),
        Str(String),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        match Repr::deserialize(d)? {
            Repr::Num(x) => Ok(x),
            Repr::Str(s) if s == "inf" => Ok(f64::INFINITY),
            Repr::Str(s) => Err(serde::de::Error::custom(format!("expected number or \"inf\", got {s:?}"))),
        }
    }
}

/// Squeezings and phases of the pure seeds of a bi-local Gaussian POVM.
/// `r = +∞` is homodyne detection, `r = 0` heterodyne detection.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussianSeedPair {
    #[serde(with = "inf_f64")]
    pub r_a: f64,
    #[serde(with = "inf_f64")]
    pub r_b: f64,
    pub theta_a: f64,
    pub theta_b: f64,
}

impl GaussianSeedPair {
    pub fn new(r_a: f64, r_b: f64, theta_a: f64, theta_b: f64) -> Result<Self> {
        for (name, r) in [("r_a", r_a), ("r_b", r_b)] {
            if !(r >= 0.0) {
                return Err(Error::OutOfRange(format!("{name} = {r} must be ≥ 0")));
            }
        }
        let wrap = |t: f64| t.rem_euclid(std::f64::consts::PI);
        Ok(Self {
            r_a,
            r_b,
            theta_a: wrap(theta_a),
            theta_b: wrap(theta_b),
        })
    }

    pub fn heterodyne() -> Self {
        Self {
            r_a: 0.0,
            r_b: 0.0,
            theta_a: 0.0,
            theta_b: 0.0,
        }
    }

    /// Homodyne detection of the quadrature carrying `c₁` on both modes.
    pub fn homodyne() -> Self {
        Self {
            r_a: f64::INFINITY,
            r_b: f64::INFINITY,
            theta_a: FRAC_PI_2,
            theta_b: FRAC_PI_2,
        }
    }

    pub fn is_homodyne_a(&self) -> bool {
        self.r_a.is_infinite()
    }

    pub fn is_homodyne_b(&self) -> bool {
        self.r_b.is_infinite()
    }

    /// `λ = e^{2r_A}`, `μ = e^{2r_B}` (infinite for homodyne).
    pub fn lambda_mu(&self) -> (f64, f64) {
        ((2.0 * self.r_a).exp(), (2.0 * self.r_b).exp())
    }
}

/// Local symplectic invariants of the measured covariance `γ′`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeasurementInvariants {
    pub i1: f64,
    pub i2: f64,
    pub i3: f64,
    pub i4: f64,
}

impl MeasurementInvariants {
    /// Invariants with phase-optimized `I₄′` at finite squeezings.
    pub fn at(sf: &StandardFormCM, r_a: f64, r_b: f64) -> Self {
        let (l, m) = ((2.0 * r_a).exp(), (2.0 * r_b).exp());
        Self {
            i1: (sf.a + l) * (sf.a + 1.0 / l),
            i2: (sf.b + m) * (sf.b + 1.0 / m),
            i3: sf.c1 * sf.c2,
            i4: phase_optimized_i4(sf, r_a, r_b),
        }
    }

    /// `det γ′ = I₁ I₂ + I₃² − I₄`.
    pub fn det(&self) -> f64 {
        self.i1 * self.i2 + self.i3 * self.i3 - self.i4
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OptBranch {
    Product,
    SingleCovariance,
    SqueezedThermalHom,
    SqueezedThermalHet,
    SymmetricQuartic,
    GeneralStationarity,
    Boundary,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptResult {
    pub value: f64,
    pub seeds: GaussianSeedPair,
    pub branch: OptBranch,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PovmOptions {
    /// Largest tolerated gap between an analytic optimum and its checks.
    pub opt_tol: f64,
    /// Run the realized-value and grid-oracle checks after optimizing.
    pub cross_check: bool,
}

impl Default for PovmOptions {
    fn default() -> Self {
        Self {
            opt_tol: DEFAULT_OPT_TOL,
            cross_check: true,
        }
    }
}

// ---------------------------------------------------------------------------
// Mutual information of the outcome distribution

/// Long axis `(cos θ, −sin θ)` of a seed, exact on the quadrature axes.
fn seed_axis(theta: f64) -> [f64; 2] {
    if theta == 0.0 {
        [1.0, 0.0]
    } else if theta == FRAC_PI_2 {
        [0.0, -1.0]
    } else {
        [theta.cos(), -theta.sin()]
    }
}

/// Rotated, squeezed single-mode seed `U(θ) diag(e^{2r}, e^{−2r}) U(θ)ᵀ`.
pub fn seed_cm(r: f64, theta: f64) -> Mat2 {
    let u = seed_axis(theta);
    let v = [-u[1], u[0]];
    let (l, li) = ((2.0 * r).exp(), (-2.0 * r).exp());
    let e = |i: usize, j: usize| l * u[i] * u[j] + li * v[i] * v[j];
    [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
}

/// Entry size beyond which determinants are formed in double-double:
/// they cancel down from terms of order `scale⁴`.
fn needs_extended(scale: f64) -> bool {
    scale.powi(4) * f64::EPSILON > 1e-10
}

fn minor3<T: Real>(m: &[[T; 4]; 4], skip_r: usize, skip_c: usize) -> T {
    let rows: Vec<usize> = (0..4).filter(|&i| i != skip_r).collect();
    let cols: Vec<usize> = (0..4).filter(|&j| j != skip_c).collect();
    let g = |i: usize, j: usize| m[rows[i]][cols[j]];
    g(0, 0) * (g(1, 1) * g(2, 2) - g(1, 2) * g(2, 1)) - g(0, 1) * (g(1, 0) * g(2, 2) - g(1, 2) * g(2, 0))
        + g(0, 2) * (g(1, 0) * g(2, 1) - g(1, 1) * g(2, 0))
}

fn det4_in<T: Real>(m: &[[T; 4]; 4]) -> T {
    (0..4).fold(T::zero(), |acc, j| {
        let t = m[0][j] * minor3(m, 0, j);
        if j % 2 == 0 {
            acc + t
        } else {
            acc - t
        }
    })
}

/// `uᵀ adj(M) v`.
fn adj_bilinear<T: Real>(m: &[[T; 4]; 4], u: &[T; 4], v: &[T; 4]) -> T {
    let mut acc = T::zero();
    for i in 0..4 {
        for j in 0..4 {
            if u[i] == T::zero() || v[j] == T::zero() {
                continue;
            }
            // adj[i][j] = (−1)^{i+j} minor(j, i)
            let c = minor3(m, j, i);
            let t = u[i] * c * v[j];
            acc = if (i + j) % 2 == 0 { acc + t } else { acc - t };
        }
    }
    acc
}

/// `det(X + γ)` for a finite seed, `lim det(X + s uuᵀ)/s = uᵀ adj(X) u` for
/// a homodyne one.
fn local_factor<T: Real>(x: [[T; 2]; 2], r: f64, theta: f64) -> T {
    if r.is_infinite() {
        let u = seed_axis(theta).map(T::lift);
        x[1][1] * u[0] * u[0] - (x[0][1] + x[1][0]) * u[0] * u[1] + x[0][0] * u[1] * u[1]
    } else {
        let g = seed_cm(r, theta);
        let y = |i: usize, j: usize| x[i][j] + T::lift(g[i][j]);
        y(0, 0) * y(1, 1) - y(0, 1) * y(1, 0)
    }
}

fn outcome_ratio<T: Real>(cm: &Mat4, seeds: &GaussianSeedPair) -> (T, T) {
    let mut m = cm.map(|row| row.map(T::lift));
    let block = |m: &[[T; 4]; 4], off: usize| [[m[off][off], m[off][off + 1]], [m[off + 1][off], m[off + 1][off + 1]]];
    let num = local_factor(block(&m, 0), seeds.r_a, seeds.theta_a) * local_factor(block(&m, 2), seeds.r_b, seeds.theta_b);
    for (off, r, theta) in [(0, seeds.r_a, seeds.theta_a), (2, seeds.r_b, seeds.theta_b)] {
        if r.is_finite() {
            let g = seed_cm(r, theta);
            for i in 0..2 {
                for j in 0..2 {
                    m[off + i][off + j] = m[off + i][off + j] + T::lift(g[i][j]);
                }
            }
        }
    }
    let z = T::zero();
    let [a0, a1] = seed_axis(seeds.theta_a).map(T::lift);
    let [b0, b1] = seed_axis(seeds.theta_b).map(T::lift);
    let (ua, ub) = ([a0, a1, z, z], [z, z, b0, b1]);
    let den = match (seeds.is_homodyne_a(), seeds.is_homodyne_b()) {
        (false, false) => det4_in(&m),
        (true, false) => adj_bilinear(&m, &ua, &ua),
        (false, true) => adj_bilinear(&m, &ub, &ub),
        (true, true) => {
            let (uu, vv, uv) = (adj_bilinear(&m, &ua, &ua), adj_bilinear(&m, &ub, &ub), adj_bilinear(&m, &ua, &ub));
            (uu * vv - uv * uv).quot(det4_in(&m))
        }
    };
    (num, den)
}

fn half_log_ratio<T: Real>(num: T, den: T) -> Result<f64> {
    if !(num > T::zero() && den > T::zero()) {
        return Err(Error::NonPhysical(format!(
            "outcome covariance is not positive (numerator {:e}, denominator {:e})",
            num.to_f64().unwrap_or(f64::NAN),
            den.to_f64().unwrap_or(f64::NAN)
        )));
    }
    let ratio = num.quot(den).to_f64().unwrap_or(f64::NAN);
    Ok((0.5 * ratio.ln()).max(0.0))
}

fn entry_scale(cm: &Mat4) -> f64 {
    cm.iter().flatten().fold(1.0_f64, |m, v| m.max(v.abs()))
}

/// `½ ln[det(γ_A + A) det(γ_B + B) / det(γ_A ⊕ γ_B + γ)]` for pure seeds on an
/// arbitrary covariance matrix, evaluated directly from the determinants.
pub fn classical_mi_at_seed_cm(cm: &Mat4, seeds: &GaussianSeedPair) -> Result<f64> {
    let seed_scale = [seeds.r_a, seeds.r_b]
        .iter()
        .filter(|r| r.is_finite())
        .fold(1.0_f64, |m, r| m.max((2.0 * r).exp()));
    if needs_extended(entry_scale(cm).max(seed_scale)) {
        let (n, d) = outcome_ratio::<TwoFloat>(cm, seeds);
        half_log_ratio(n, d)
    } else {
        let (n, d) = outcome_ratio::<f64>(cm, seeds);
        half_log_ratio(n, d)
    }
}

/// Mutual information of the outcomes for seeds applied to a standard form.
pub fn classical_mi_at_seed(sf: &StandardFormCM, seeds: &GaussianSeedPair) -> Result<f64> {
    classical_mi_at_seed_cm(&sf.to_cm(), seeds)
}

fn mixed_ratio<T: Real>(cm: &Mat4, gamma_a: &Mat2, gamma_b: &Mat2) -> (T, T) {
    let mut m = cm.map(|row| row.map(T::lift));
    let det_plus = |off: usize, g: &Mat2| {
        let y = |i: usize, j: usize| T::lift(cm[off + i][off + j]) + T::lift(g[i][j]);
        y(0, 0) * y(1, 1) - y(0, 1) * y(1, 0)
    };
    let num = det_plus(0, gamma_a) * det_plus(2, gamma_b);
    for i in 0..2 {
        for j in 0..2 {
            m[i][j] = m[i][j] + T::lift(gamma_a[i][j]);
            m[2 + i][2 + j] = m[2 + i][2 + j] + T::lift(gamma_b[i][j]);
        }
    }
    (num, det4_in(&m))
}

/// Same quantity for arbitrary, possibly mixed, single-mode seed covariances.
pub fn classical_mi_mixed_seeds(cm: &Mat4, gamma_a: &Mat2, gamma_b: &Mat2) -> Result<f64> {
    let scale = [gamma_a, gamma_b]
        .iter()
        .flat_map(|g| g.iter().flatten())
        .fold(entry_scale(cm), |m, v| m.max(v.abs()));
    if needs_extended(scale) {
        let (n, d) = mixed_ratio::<TwoFloat>(cm, gamma_a, gamma_b);
        half_log_ratio(n, d)
    } else {
        let (n, d) = mixed_ratio::<f64>(cm, gamma_a, gamma_b);
        half_log_ratio(n, d)
    }
}

// ---------------------------------------------------------------------------
// Phase-optimized objective

/// `I₄` maximized over the seed phases at finite squeezings.
pub fn phase_optimized_i4(sf: &StandardFormCM, r_a: f64, r_b: f64) -> f64 {
    let (c1s, c2s) = (sf.c1 * sf.c1, sf.c2 * sf.c2);
    if sf.c2 == 0.0 {
        return c1s * (sf.a + (2.0 * r_a).exp()) * (sf.b + (2.0 * r_b).exp());
    }
    let (ca, sa) = (sf.a + (2.0 * r_a).cosh(), (2.0 * r_a).sinh());
    let (cb, sb) = (sf.b + (2.0 * r_b).cosh(), (2.0 * r_b).sinh());
    (ca * cb + sa * sb) * (c1s + c2s) + (ca * sb + cb * sa) * (c1s - c2s)
}

/// Per-mode pieces of `h`: `(a + cosh 2r, sinh 2r, I, weight of I₃²)`,
/// divided by `λ` in the homodyne limit.
fn mode_terms(x: f64, lam: f64) -> (f64, f64, f64, f64) {
    if lam.is_infinite() {
        (0.5, 0.5, x, 0.0)
    } else {
        let (ch, sh) = (0.5 * (lam + 1.0 / lam), 0.5 * (lam - 1.0 / lam));
        (x + ch, sh, (x + lam) * (x + 1.0 / lam), 1.0)
    }
}

/// `h(λ, μ)` for `λ, μ ∈ [1, ∞]`.
pub fn h_objective(sf: &StandardFormCM, lam: f64, mu: f64) -> f64 {
    let (ca, sa, i1, wa) = mode_terms(sf.a, lam);
    let (cb, sb, i2, wb) = mode_terms(sf.b, mu);
    let (c1s, c2s) = (sf.c1 * sf.c1, sf.c2 * sf.c2);
    let i4 = (ca * cb + sa * sb) * (c1s + c2s) + (ca * sb + cb * sa) * (c1s - c2s);
    let i3 = sf.c1 * sf.c2;
    (i4 - i3 * i3 * wa * wb) / (i1 * i2)
}

/// `1 − h(λ, μ)`, exact on the homodyne edges.
fn one_minus_h(sf: &StandardFormCM, lam: f64, mu: f64) -> f64 {
    let (a, b) = (sf.a, sf.b);
    let d = ab_minus_sq(a, b, sf.c1);
    match (lam.is_infinite(), mu.is_infinite()) {
        (true, true) => d / (a * b),
        (true, false) => (d * mu + a) / (a * (b * mu + 1.0)),
        (false, true) => (d * lam + b) / (b * (a * lam + 1.0)),
        (false, false) => 1.0 - h_objective(sf, lam, mu),
    }
}

/// `½ ln g(λ, μ) = −½ ln(1 − h)`.
pub fn half_log_g(sf: &StandardFormCM, lam: f64, mu: f64) -> f64 {
    (-0.5 * one_minus_h(sf, lam, mu).ln()).max(0.0)
}

/// `g_hom = ab/(ab − c₁²)`. On states pure to within their resolution the
/// denominator is exactly one.
pub fn g_hom(sf: &StandardFormCM) -> f64 {
    let d = if sf.is_symmetric(1e-12) && sf.is_pure(sf.tol()) {
        1.0
    } else {
        ab_minus_sq(sf.a, sf.b, sf.c1)
    };
    sf.a * sf.b / d
}

/// `g_het = [(a+1)(b+1)/((a+1)(b+1) − c²)]²` with `c = c₁`.
pub fn g_het(sf: &StandardFormCM) -> f64 {
    let p = (sf.a + 1.0) * (sf.b + 1.0);
    (p / ab_minus_sq(sf.a + 1.0, sf.b + 1.0, sf.c1)).powi(2)
}

/// Whether homodyne detection is optimal for a squeezed thermal state:
/// `(a + b + 1)² ≥ ab(ab − c²)`.
pub fn sts_prefers_homodyne(a: f64, b: f64, c: f64) -> bool {
    (a + b + 1.0).powi(2) >= a * b * ab_minus_sq(a, b, c)
}

fn r_of(lam: f64) -> f64 {
    if lam.is_infinite() {
        f64::INFINITY
    } else {
        0.5 * lam.ln().max(0.0)
    }
}

/// Seeds realizing `(λ, μ)`, with phases chosen among `{0, π/2}²` by direct
/// evaluation of the outcome mutual information.
fn seeds_for(sf: &StandardFormCM, lam: f64, mu: f64) -> GaussianSeedPair {
    let (r_a, r_b) = (r_of(lam), r_of(mu));
    let mut best = (f64::NEG_INFINITY, GaussianSeedPair::heterodyne());
    for ta in [FRAC_PI_2, 0.0] {
        for tb in [FRAC_PI_2, 0.0] {
            let s = GaussianSeedPair {
                r_a,
                r_b,
                theta_a: if r_a == 0.0 { 0.0 } else { ta },
                theta_b: if r_b == 0.0 { 0.0 } else { tb },
            };
            if let Ok(v) = classical_mi_at_seed(sf, &s) {
                if v > best.0 {
                    best = (v, s);
                }
            }
        }
    }
    best.1
}

#[derive(Debug, Clone, Copy)]
struct Candidate {
    lam: f64,
    mu: f64,
    value: f64,
    stationary: bool,
}

fn candidate(sf: &StandardFormCM, lam: f64, mu: f64, stationary: bool) -> Candidate {
    Candidate {
        lam,
        mu,
        value: half_log_g(sf, lam, mu),
        stationary,
    }
}

fn best_of(cands: impl IntoIterator<Item = Candidate>) -> Candidate {
    cands
        .into_iter()
        .filter(|c| c.value.is_finite())
        .fold(None, |acc: Option<Candidate>, c| match acc {
            Some(b) if b.value >= c.value => Some(b),
            _ => Some(c),
        })
        .expect("at least one finite candidate")
}

fn corners(sf: &StandardFormCM) -> Vec<Candidate> {
    let inf = f64::INFINITY;
    [(1.0, 1.0), (1.0, inf), (inf, 1.0), (inf, inf)]
        .into_iter()
        .map(|(l, m)| candidate(sf, l, m, false))
        .collect()
}

fn finish(sf: &StandardFormCM, c: Candidate, branch: OptBranch) -> OptResult {
    OptResult {
        value: c.value,
        seeds: seeds_for(sf, c.lam, c.mu),
        branch,
    }
}

// ---------------------------------------------------------------------------
// Symmetric states

/// Coefficients `[a₄, a₃, a₂, a₁, a₀]` of the symmetric stationarity quartic.
pub fn symmetric_quartic_coefficients(a: f64, c1: f64, c2: f64) -> [f64; 5] {
    let (c1s, c2s) = (c1 * c1, c2 * c2);
    [
        c1s,
        a * (c1s * c2s + 3.0 * c1s - a * a * c2s),
        3.0 * a * a * (c1s - c2s),
        -a * (c1s * c2s + 3.0 * c2s - a * a * c1s),
        -c2s,
    ]
}

/// Maximizes `h(λ, λ)` for a symmetric state through the quartic's real roots
/// `λ ≥ 1` and the boundaries `λ ∈ {1, ∞}`.
pub fn optimize_symmetric(sf: &StandardFormCM) -> Result<OptResult> {
    if !sf.is_symmetric(1e-12) {
        return Err(Error::OutOfRange(format!(
            "symmetric branch requires a = b, got a = {}, b = {}",
            sf.a, sf.b
        )));
    }
    let [a4, a3, a2, a1, a0] = symmetric_quartic_coefficients(sf.a, sf.c1, sf.c2);
    let mut cands = vec![
        candidate(sf, 1.0, 1.0, false),
        candidate(sf, f64::INFINITY, f64::INFINITY, false),
    ];
    for lam in solve_quartic(a4, a3, a2, a1, a0) {
        if lam >= 1.0 && lam.is_finite() {
            cands.push(candidate(sf, lam, lam, true));
        }
    }
    let best = best_of(cands);
    let branch = if best.stationary {
        OptBranch::SymmetricQuartic
    } else {
        OptBranch::Boundary
    };
    Ok(finish(sf, best, branch))
}

// ---------------------------------------------------------------------------
// General states

/// `∂h/∂λ = 0` up to a positive factor; quadratic in `μ`.
fn eq1(sf: &StandardFormCM, lam: f64, mu: f64) -> f64 {
    let (a4, a3, a2) = eq1_mu_coeffs(sf, lam);
    (a4 * mu + a3) * mu + a2
}

fn eq1_mu_coeffs(sf: &StandardFormCM, lam: f64) -> (f64, f64, f64) {
    let (a, b, c1s, c2s) = (sf.a, sf.b, sf.c1 * sf.c1, sf.c2 * sf.c2);
    let p = (a + lam).powi(2);
    let q = (a * lam + 1.0).powi(2);
    (
        c1s * p,
        c1s * b * p - c2s * b * q + c1s * c2s * a * (lam * lam - 1.0),
        -c2s * q,
    )
}

/// `∂h/∂μ = 0` up to a positive factor; quadratic in `λ`.
fn eq2(sf: &StandardFormCM, lam: f64, mu: f64) -> f64 {
    eq1(&sf.swapped(), mu, lam)
}

/// The unique root `μ ≥ 0` of `eq1(λ, ·)` (the product of the roots is ≤ 0).
fn mu_on_eq1(sf: &StandardFormCM, lam: f64) -> f64 {
    let (qa, qb, qc) = eq1_mu_coeffs(sf, lam);
    let disc = (qb * qb - 4.0 * qa * qc).max(0.0).sqrt();
    if qb <= 0.0 {
        (-qb + disc) / (2.0 * qa)
    } else if disc + qb == 0.0 {
        0.0
    } else {
        2.0 * qc / (-qb - disc)
    }
}

/// Stationary points on the edge `μ = 1` (roots `λ ≥ 1` of `eq1(·, 1)`).
fn edge_points(sf: &StandardFormCM) -> Vec<f64> {
    let (a, b, c1s, c2s) = (sf.a, sf.b, sf.c1 * sf.c1, sf.c2 * sf.c2);
    let k = 1.0 + b;
    solve_quadratic(
        c1s * k - c2s * k * a * a + c1s * c2s * a,
        2.0 * a * k * (c1s - c2s),
        c1s * k * a * a - c2s * k - c1s * c2s * a,
    )
    .into_iter()
    .filter(|l| *l >= 1.0 && l.is_finite())
    .collect()
}

fn refine_root(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let (mut flo, _) = (f(lo), f(hi));
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if (fm < 0.0) == (flo < 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Maximizes `h` over `[1, ∞]²` from the stationarity system, the edge
/// stationary points and the four corners.
pub fn optimize_general(sf: &StandardFormCM) -> Result<OptResult> {
    let mut cands = corners(sf);
    let mut stationary = Vec::new();

    // interior: follow μ(λ) solving eq1, look for sign changes of eq2 in ln λ
    let residual = |t: f64| {
        let lam = t.exp();
        eq2(sf, lam, mu_on_eq1(sf, lam))
    };
    let step = LN_LAMBDA_MAX / (STATIONARITY_GRID - 1) as f64;
    let mut prev = (0.0, residual(0.0));
    for k in 1..STATIONARITY_GRID {
        let t = k as f64 * step;
        let r = residual(t);
        if r == 0.0 || (r < 0.0) != (prev.1 < 0.0) {
            let root = if r == 0.0 { t } else { refine_root(residual, prev.0, t) };
            stationary.push(root.exp());
        }
        prev = (t, r);
    }
    for lam in stationary {
        let mu = mu_on_eq1(sf, lam);
        if mu >= 1.0 && mu.is_finite() {
            cands.push(candidate(sf, lam, mu, true));
        }
    }

    // edges λ = 1 and μ = 1; the homodyne edges are monotone
    for lam in edge_points(sf) {
        cands.push(candidate(sf, lam, 1.0, true));
    }
    for mu in edge_points(&sf.swapped()) {
        cands.push(candidate(sf, 1.0, mu, true));
    }

    let best = best_of(cands);
    let branch = if best.stationary {
        OptBranch::GeneralStationarity
    } else {
        OptBranch::Boundary
    };
    Ok(finish(sf, best, branch))
}

// ---------------------------------------------------------------------------
// Numeric oracle

fn lam_of_t(t: f64) -> f64 {
    if t >= 1.0 {
        f64::INFINITY
    } else {
        (1.0 + t) / (1.0 - t)
    }
}

/// Outcome mutual information maximized over phases in `{0, π/2}²`,
/// evaluated directly from the determinants.
fn direct_objective(sf: &StandardFormCM, ta: f64, tb: f64) -> f64 {
    let (r_a, r_b) = (r_of(lam_of_t(ta)), r_of(lam_of_t(tb)));
    let mut best = 0.0_f64;
    for pa in [0.0, FRAC_PI_2] {
        for pb in [0.0, FRAC_PI_2] {
            let s = GaussianSeedPair {
                r_a,
                r_b,
                theta_a: pa,
                theta_b: pb,
            };
            if let Ok(v) = classical_mi_at_seed(sf, &s) {
                best = best.max(v);
            }
        }
    }
    best
}

/// Brute-force maximization of the outcome mutual information over
/// `t = tanh r ∈ [0, 1]²`: a coarse grid followed by pattern search from
/// the best grid points. Returns `(value, t_A, t_B)`.
pub fn grid_oracle(sf: &StandardFormCM) -> (f64, f64, f64) {
    let n = ORACLE_GRID;
    let mut pts: Vec<(f64, f64, f64)> = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let (ta, tb) = (i as f64 / (n - 1) as f64, j as f64 / (n - 1) as f64);
            pts.push((direct_objective(sf, ta, tb), ta, tb));
        }
    }
    pts.sort_by(|x, y| y.0.total_cmp(&x.0));
    let mut best = pts[0];
    for &(v0, ta0, tb0) in pts.iter().take(3) {
        let (mut v, mut ta, mut tb) = (v0, ta0, tb0);
        let mut h = 1.0 / (n - 1) as f64;
        while h > 1e-13 {
            let mut moved = false;
            for (da, db) in [(h, 0.0), (-h, 0.0), (0.0, h), (0.0, -h), (h, h), (-h, -h), (h, -h), (-h, h)] {
                let (na, nb) = ((ta + da).clamp(0.0, 1.0), (tb + db).clamp(0.0, 1.0));
                let nv = direct_objective(sf, na, nb);
                if nv > v {
                    (v, ta, tb) = (nv, na, nb);
                    moved = true;
                }
            }
            if !moved {
                h *= 0.5;
            }
        }
        if v > best.0 {
            best = (v, ta, tb);
        }
    }
    best
}

fn cross_check(sf: &StandardFormCM, res: &OptResult, opts: &PovmOptions) -> Result<()> {
    let realized = classical_mi_at_seed(sf, &res.seeds)?;
    if (realized - res.value).abs() > opts.opt_tol {
        return Err(Error::OptimizerDisagreement {
            context: "value realized by the reported seeds",
            closed: res.value,
            numeric: realized,
        });
    }
    let (oracle, _, _) = grid_oracle(sf);
    if oracle > res.value + opts.opt_tol {
        return Err(Error::OptimizerDisagreement {
            context: "grid oracle for the Gaussian classical mutual information",
            closed: res.value,
            numeric: oracle,
        });
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Public optimizers

/// `I_c^G = ½ ln sup f` with dispatch over the analytically solvable cases.
pub fn gaussian_classical_mi(sf: &StandardFormCM) -> Result<OptResult> {
    gaussian_classical_mi_with(sf, &PovmOptions::default())
}

pub fn gaussian_classical_mi_with(sf: &StandardFormCM, opts: &PovmOptions) -> Result<OptResult> {
    let scale = sf.a.max(sf.b);
    let tiny = |x: f64| x.abs() <= BRANCH_TOL * scale;
    if tiny(sf.c1) && tiny(sf.c2) {
        return Ok(OptResult {
            value: 0.0,
            seeds: GaussianSeedPair::heterodyne(),
            branch: OptBranch::Product,
        });
    }
    let res = if tiny(sf.c2) {
        OptResult {
            value: 0.5 * g_hom(sf).ln(),
            seeds: GaussianSeedPair::homodyne(),
            branch: OptBranch::SingleCovariance,
        }
    } else if sf.is_squeezed_thermal(BRANCH_TOL) {
        if sts_prefers_homodyne(sf.a, sf.b, sf.c1) {
            OptResult {
                value: 0.5 * g_hom(sf).ln(),
                seeds: GaussianSeedPair::homodyne(),
                branch: OptBranch::SqueezedThermalHom,
            }
        } else {
            OptResult {
                value: 0.5 * g_het(sf).ln(),
                seeds: GaussianSeedPair::heterodyne(),
                branch: OptBranch::SqueezedThermalHet,
            }
        }
    } else if sf.is_symmetric(BRANCH_TOL) {
        optimize_symmetric(sf)?
    } else {
        optimize_general(sf)?
    };
    if opts.cross_check {
        cross_check(sf, &res, opts)?;
    }
    Ok(res)
}

/// Gaussian AMID `A^G = I_q − I_c^G`; the returned seeds and branch are those
/// of the classical optimization.
pub fn gaussian_amid(sf: &StandardFormCM) -> Result<OptResult> {
    gaussian_amid_with(sf, &PovmOptions::default())
}

pub fn gaussian_amid_with(sf: &StandardFormCM, opts: &PovmOptions) -> Result<OptResult> {
    let ic = gaussian_classical_mi_with(sf, opts)?;
    if ic.branch == OptBranch::Product {
        return Ok(ic);
    }
    let iq = quantum_mutual_information(sf)?;
    Ok(OptResult {
        value: (iq - ic.value).max(0.0),
        ..ic
    })
}

fn check_grange(a: f64, nu: f64) -> Result<()> {
    let lower = nu.max((1.0 + nu * nu) / (2.0 * nu));
    if !(nu > 0.0 && a >= lower * (1.0 - 1e-12)) {
        return Err(Error::OutOfRange(format!(
            "(a, ν̃) = ({a}, {nu}) outside a ≥ max(ν̃, (1 + ν̃²)/(2ν̃)), ν̃ > 0"
        )));
    }
    Ok(())
}

/// `2x atanh(1/x)` written as `x ln((x+1)/(x−1))`, combined with `ln(x² − 1)`:
/// `ln(x² − 1) + 2x atanh(1/x) = 2F(x) + ln 4`.
fn entropy_pair(x: f64) -> f64 {
    2.0 * entropy_f_clamped(x) + 4f64.ln()
}

/// Closed-form Gaussian AMID of the symmetric squeezed thermal state with
/// `b = a`, `c₁ = −c₂ = a − ν̃`.
pub fn sts_gamid_closed(a: f64, nu: f64) -> Result<f64> {
    check_grange(a, nu)?;
    let s = (nu * (2.0 * a - nu)).sqrt();
    // −ln((s² − 1)/(a² − 1)) + 2a acoth a − 2s atanh(1/s)
    let head = entropy_pair(a) - entropy_pair(s);
    let c = a - nu;
    let tail = if 1.0 + a * (4.0 + a * (4.0 - 2.0 * a * nu + nu * nu)) >= 0.0 {
        (a / (a * a - c * c).sqrt()).ln()
    } else {
        let p = (a + 1.0).powi(2);
        (p / (p - c * c)).ln()
    };
    Ok((head - tail).max(0.0))
}

/// `x ln x` with the limit 0 at x = 0.
fn xlnx(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        x * x.ln()
    }
}

/// Closed-form one-way Gaussian discord of the symmetric squeezed thermal
/// state with `b = a`, `c₁ = −c₂ = a − ν̃`.
///
/// The logarithms that diverge separately on the pure line `s = 1`
/// (`s² = ν̃(2a − ν̃)`) are grouped so that only `(s − 1) ln(s − 1)` remains.
pub fn sts_discord_closed(a: f64, nu: f64) -> Result<f64> {
    check_grange(a, nu)?;
    let s2 = nu * (2.0 * a - nu);
    let s = s2.sqrt();
    let am1 = a - 1.0;
    let ln_ratio_term = if am1 <= 0.0 {
        0.0
    } else {
        (a * a - 1.0) * ((a + 1.0) / am1).ln()
    };
    let w = s2 + 2.0 * a + 1.0;
    let total = (s2 + 2.0 * a) * w.ln()
        - (s + 1.0) * (s + 2.0 * a + 1.0) * (s + 1.0).ln()
        - (s - 2.0 * a - 1.0) * xlnx(s - 1.0)
        + ln_ratio_term
        + (nu + 1.0).ln()
        + (2.0 * a - nu + 1.0).ln();
    Ok((total / (2.0 * (1.0 + a))).max(0.0))
}

// ---------------------------------------------------------------------------
// Discord

/// Which mode is measured.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DiscordDirection {
    /// `D^←`: measurement on mode B.
    Left,
    /// `D^→`: measurement on mode A.
    Right,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DiscordBranch {
    Product,
    Heterodyne,
    Homodyne,
    Intermediate,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiscordResult {
    pub value: f64,
    pub direction: DiscordDirection,
    /// Squeezing of the seed on the measured mode.
    #[serde(with = "inf_f64")]
    pub r: f64,
    pub theta: f64,
    pub branch: DiscordBranch,
    /// Minimal determinant of the conditional covariance of the other mode.
    pub conditional_det: f64,
}

/// `det(A − C(B + γ_B)⁻¹Cᵀ)` for a standard form, seed `diag(λ, 1/λ)` on B.
/// `t = tanh r ∈ [−1, 1]` with negative `t` meaning the rotated seed.
fn conditional_det(sf: &StandardFormCM, t: f64) -> f64 {
    let (a, b, c1s, c2s) = (sf.a, sf.b, sf.c1 * sf.c1, sf.c2 * sf.c2);
    if t >= 1.0 {
        a * (a - c2s / b)
    } else if t <= -1.0 {
        a * (a - c1s / b)
    } else {
        let lam = (1.0 + t) / (1.0 - t);
        (a - c1s / (b + lam)) * (a - c2s / (b + 1.0 / lam))
    }
}

fn golden_min(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> (f64, f64) {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = hi - g * (hi - lo);
    let mut x2 = lo + g * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..200 {
        if hi - lo <= 1e-14 {
            break;
        }
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = f(x2);
        }
    }
    if f1 <= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Minimizes the conditional determinant over single-mode pure seeds.
fn minimize_conditional(sf: &StandardFormCM) -> (f64, f64) {
    const SCAN: usize = 400;
    let f = |t: f64| conditional_det(sf, t);
    let ts: Vec<f64> = (0..=SCAN).map(|k| -1.0 + 2.0 * k as f64 / SCAN as f64).collect();
    let vals: Vec<f64> = ts.iter().map(|&t| f(t)).collect();
    let k = (0..vals.len())
        .min_by(|&i, &j| vals[i].total_cmp(&vals[j]))
        .unwrap();
    let mut best = (ts[k], vals[k]);
    if k > 0 && k < SCAN {
        let (t, v) = golden_min(f, ts[k - 1], ts[k + 1]);
        if v < best.1 {
            best = (t, v);
        }
    }
    for t in [-1.0, 0.0, 1.0] {
        let v = f(t);
        if v < best.1 {
            best = (t, v);
        }
    }
    best
}

/// One-way Gaussian discord.
pub fn gaussian_discord(sf: &StandardFormCM, direction: DiscordDirection) -> Result<DiscordResult> {
    gaussian_discord_with(sf, direction, &PovmOptions::default())
}

pub fn gaussian_discord_with(
    sf: &StandardFormCM,
    direction: DiscordDirection,
    opts: &PovmOptions,
) -> Result<DiscordResult> {
    let st = match direction {
        DiscordDirection::Left => *sf,
        DiscordDirection::Right => sf.swapped(),
    };
    let spec = st.spectrum()?;
    if spec.nu_minus < 1.0 - st.tol() {
        return Err(Error::NonPhysical(format!("ν₋ = {}", spec.nu_minus)));
    }
    let scale = st.a.max(st.b);
    if st.c1.abs() <= BRANCH_TOL * scale && st.c2.abs() <= BRANCH_TOL * scale {
        return Ok(DiscordResult {
            value: 0.0,
            direction,
            r: 0.0,
            theta: 0.0,
            branch: DiscordBranch::Product,
            conditional_det: st.a * st.a,
        });
    }
    let (t, det) = minimize_conditional(&st);
    let tol = st.tol();
    let base = entropy_f_clamped(st.b) - entropy_f_resolved(spec.nu_plus, tol) - entropy_f_resolved(spec.nu_minus, tol);
    let value = (base + entropy_f_resolved(det.max(1.0).sqrt(), tol)).max(0.0);
    let (r, theta) = if t.abs() >= 1.0 {
        (f64::INFINITY, if t > 0.0 { 0.0 } else { FRAC_PI_2 })
    } else {
        (t.abs().atanh(), if t >= 0.0 { 0.0 } else { FRAC_PI_2 })
    };
    let branch = if r.is_infinite() {
        DiscordBranch::Homodyne
    } else if r < 1e-7 {
        DiscordBranch::Heterodyne
    } else {
        DiscordBranch::Intermediate
    };
    if opts.cross_check && st.is_symmetric(1e-12) && st.c1 > 0.0 && (st.c1 + st.c2).abs() <= 1e-12 * scale {
        let nu = st.a - st.c1;
        if let Ok(closed) = sts_discord_closed(st.a, nu) {
            if (closed - value).abs() > opts.opt_tol {
                return Err(Error::OptimizerDisagreement {
                    context: "discord of a symmetric squeezed thermal state",
                    closed,
                    numeric: value,
                });
            }
        }
    }
    Ok(DiscordResult {
        value,
        direction,
        r,
        theta,
        branch,
        conditional_det: det,
    })
}

/// `D^↔ = max(D^←, D^→)`.
pub fn two_way_discord(sf: &StandardFormCM) -> Result<f64> {
    let l = gaussian_discord(sf, DiscordDirection::Left)?;
    let r = gaussian_discord(sf, DiscordDirection::Right)?;
    Ok(l.value.max(r.value))
}

/// Conditional covariance of mode A after a Gaussian measurement on B with an
/// arbitrary seed, for checks against [`gaussian_discord`].
pub fn conditional_covariance(cm: &Mat4, seed_b: &Mat2) -> Result<Mat2> {
    let (a, b, c) = blocks(cm);
    let inv = crate::linalg::inv2(&add2(&b, seed_b))?;
    let cinv = crate::linalg::matmul2(&c, &inv);
    let corr = crate::linalg::matmul2(&cinv, &crate::linalg::transpose2(&c));
    Ok(crate::linalg::sub2(&a, &corr))
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::mid_pure_closed_form;
    use crate::linalg::det2;
    use crate::state::{make_family, Family};
    use approx::assert_relative_eq;

    fn sf(a: f64, b: f64, c1: f64, c2: f64) -> StandardFormCM {
        StandardFormCM::new(a, b, c1, c2).unwrap()
    }

    #[test]
    fn product_gives_zero() {
        let s = sf(2.0, 3.0, 0.0, 0.0);
        let seeds = GaussianSeedPair::new(0.3, 1.1, 0.4, 2.0).unwrap();
        assert!(classical_mi_at_seed(&s, &seeds).unwrap().abs() < 1e-15);
        let r = gaussian_classical_mi(&s).unwrap();
        assert_eq!((r.value, r.branch), (0.0, OptBranch::Product));
        assert_eq!(gaussian_amid(&s).unwrap().value, 0.0);
    }

    #[test]
    fn double_homodyne_single_covariance() {
        let s = sf(2.0, 2.0, 1.0, 0.0);
        let want = 0.5 * (4.0_f64 / 3.0).ln();
        let v = classical_mi_at_seed(&s, &GaussianSeedPair::homodyne()).unwrap();
        assert_relative_eq!(v, want, max_relative = 1e-14);
        let r = gaussian_classical_mi(&s).unwrap();
        assert_eq!(r.branch, OptBranch::SingleCovariance);
        assert_relative_eq!(r.value, want, max_relative = 1e-14);
        assert!(r.seeds.is_homodyne_a() && r.seeds.is_homodyne_b());
    }

    #[test]
    fn double_heterodyne_value() {
        let s = sf(6.0, 6.0, 2.0, -2.0);
        let v = classical_mi_at_seed(&s, &GaussianSeedPair::heterodyne()).unwrap();
        assert_relative_eq!(v, (49.0_f64 / 45.0).ln(), max_relative = 1e-13);
        let r = gaussian_classical_mi(&s).unwrap();
        assert_eq!(r.branch, OptBranch::SqueezedThermalHet);
        assert_relative_eq!(r.value, (49.0_f64 / 45.0).ln(), max_relative = 1e-13);
    }

    #[test]
    fn phase_optimized_i4_examples() {
        assert_eq!(phase_optimized_i4(&sf(2.0, 3.0, 0.0, 0.0), 0.4, 0.2), 0.0);
        let (a, c) = (3.0, 1.5);
        let s = sf(a, a, c, -c);
        assert_relative_eq!(phase_optimized_i4(&s, 0.0, 0.0), (a + 1.0).powi(2) * 2.0 * c * c);
        let s = sf(2.0, 2.0, 1.0, 0.0);
        assert_relative_eq!(phase_optimized_i4(&s, 0.0, 0.0), 9.0);
    }

    #[test]
    fn h_matches_direct_determinants() {
        // f = 1/(1 − h) against the brute-force phase maximum
        for s in [sf(2.0, 3.0, 1.2, -0.5), sf(2.5, 1.7, 1.1, 0.6), sf(4.0, 4.0, 3.0, -1.0)] {
            for (ra, rb) in [(0.0_f64, 0.0_f64), (0.3, 0.9), (1.2, 0.1)] {
                let (l, m) = ((2.0 * ra).exp(), (2.0 * rb).exp());
                let mut best = 0.0_f64;
                for i in 0..90 {
                    for j in 0..90 {
                        let th = |k: usize| k as f64 * std::f64::consts::PI / 90.0;
                        let seeds = GaussianSeedPair::new(ra, rb, th(i), th(j)).unwrap();
                        best = best.max(classical_mi_at_seed(&s, &seeds).unwrap());
                    }
                }
                assert_relative_eq!(half_log_g(&s, l, m), best, max_relative = 1e-10);
                let inv = MeasurementInvariants::at(&s, ra, rb);
                let g = inv.i1 * inv.i2 / inv.det();
                assert_relative_eq!(0.5 * g.ln(), best, max_relative = 1e-10);
            }
        }
    }

    #[test]
    fn homodyne_limits_are_continuous() {
        let s = sf(2.0, 3.0, 1.2, -0.5);
        for (ta, tb) in [(FRAC_PI_2, 0.0), (0.0, FRAC_PI_2), (FRAC_PI_2, FRAC_PI_2), (0.3, 1.0)] {
            let lim = classical_mi_at_seed(&s, &GaussianSeedPair::new(f64::INFINITY, f64::INFINITY, ta, tb).unwrap()).unwrap();
            let big = classical_mi_at_seed(&s, &GaussianSeedPair::new(9.0, 9.0, ta, tb).unwrap()).unwrap();
            assert!((lim - big).abs() < 1e-6, "{lim} vs {big}");
            let half = classical_mi_at_seed(&s, &GaussianSeedPair::new(f64::INFINITY, 0.4, ta, tb).unwrap()).unwrap();
            let half_big = classical_mi_at_seed(&s, &GaussianSeedPair::new(9.0, 0.4, ta, tb).unwrap()).unwrap();
            assert!((half - half_big).abs() < 1e-6);
        }
        for mu in [1.0, 2.0, 50.0] {
            let want = 0.5 * (1.0 / (1.0 - h_objective(&s, f64::INFINITY, mu))).ln();
            assert_relative_eq!(half_log_g(&s, f64::INFINITY, mu), want, max_relative = 1e-12);
        }
    }

    #[test]
    fn symmetric_quartic_example_has_no_admissible_root() {
        let [a4, a3, a2, a1, a0] = symmetric_quartic_coefficients(2.0, 1.0, 0.0);
        assert_eq!([a4, a3, a2, a1, a0], [1.0, 6.0, 12.0, 8.0, 0.0]);
        let s = sf(2.0, 2.0, 1.0, 0.0);
        let r = optimize_symmetric(&s).unwrap();
        assert_eq!(r.branch, OptBranch::Boundary);
        assert!(r.seeds.is_homodyne_a());
        assert_relative_eq!(r.value, 0.5 * g_hom(&s).ln(), max_relative = 1e-14);
    }

    #[test]
    fn pure_state_amid() {
        for r in [0.25, 0.5, 1.0, 1.5] {
            let s = make_family(&Family::PureTmsv { r }).unwrap();
            let ic = gaussian_classical_mi(&s).unwrap();
            assert_eq!(ic.branch, OptBranch::SqueezedThermalHom);
            assert_relative_eq!(ic.value, (2.0 * r).cosh().ln(), max_relative = 1e-10);
            let ag = gaussian_amid(&s).unwrap().value;
            let want = 2.0 * mid_pure_closed_form(r) - (2.0 * r).cosh().ln();
            assert!((ag - want).abs() < 1e-9, "r = {r}: {ag} vs {want}");
        }
    }

    #[test]
    fn general_path_matches_oracle() {
        for s in [sf(2.0, 3.0, 1.2, -0.5), sf(2.5, 1.7, 1.1, 0.6), sf(5.0, 2.0, 2.5, 0.4), sf(1.5, 8.0, 1.0, -0.9)] {
            let g = optimize_general(&s).unwrap();
            let (o, _, _) = grid_oracle(&s);
            assert!((g.value - o).abs() < 1e-8, "{s:?}: {} vs {o}", g.value);
            assert!(gaussian_classical_mi(&s).is_ok());
        }
    }

    #[test]
    fn symmetric_matches_general() {
        for s in [sf(2.0, 2.0, 1.2, -0.5), sf(3.0, 3.0, 2.0, 1.0), sf(5.0, 5.0, 4.5, -0.3)] {
            let q = optimize_symmetric(&s).unwrap();
            let g = optimize_general(&s).unwrap();
            assert!((q.value - g.value).abs() < 1e-10, "{s:?}: {} vs {}", q.value, g.value);
        }
    }

    #[test]
    fn seeds_serialize_inf() {
        let json = serde_json::to_string(&GaussianSeedPair::homodyne()).unwrap();
        assert!(json.contains("\"r_a\":\"inf\""));
        let back: GaussianSeedPair = serde_json::from_str(&json).unwrap();
        assert_eq!(back, GaussianSeedPair::homodyne());
    }

    fn sts_discord_literal(a: f64, n: f64) -> f64 {
        let s = (n * (2.0 * a - n)).sqrt();
        ((4.0 * a * (n + 1.0) - 2.0 * n * n) * ((a + 1.0) / (2.0 * a * n + a - n * n)).atanh()
            - 4.0 * (a + 1.0) * s * (1.0 / s).atanh()
            + a * a * ((a + 1.0) / (a - 1.0)).ln()
            - ((a + 1.0) * (2.0 * a * n - n * n - 1.0) / ((a - 1.0) * (n + 1.0) * (2.0 * a - n + 1.0))).ln())
            / (2.0 * (1.0 + a))
    }

    fn sts_gamid_literal(a: f64, n: f64) -> f64 {
        let s = (n * (2.0 * a - n)).sqrt();
        let head = -((2.0 * a * n - n * n - 1.0) / (a * a - 1.0)).ln() + 2.0 * a * (1.0 / a).atanh()
            - 2.0 * s * (1.0 / s).atanh();
        let tail = if 1.0 + a * (4.0 + a * (4.0 - 2.0 * a * n + n * n)) >= 0.0 {
            (a / (a * a - (a - n).powi(2)).sqrt()).ln()
        } else {
            ((a + 1.0).powi(2) / ((a + 1.0).powi(2) - (a - n).powi(2))).ln()
        };
        head - tail
    }

    #[test]
    fn closed_forms_match_literal_expressions() {
        for (a, n) in [(3.0, 0.5), (2.0, 0.3), (5.0, 0.2), (10.0, 0.9), (1.5, 1.2), (4.0, 1.7), (50.0, 0.05)] {
            assert_relative_eq!(sts_discord_closed(a, n).unwrap(), sts_discord_literal(a, n), max_relative = 1e-9);
            assert_relative_eq!(sts_gamid_closed(a, n).unwrap(), sts_gamid_literal(a, n), max_relative = 1e-9);
        }
        assert_relative_eq!(sts_gamid_closed(3.0, 0.5).unwrap(), 0.691_837_448_605_88, max_relative = 1e-11);
        assert_relative_eq!(sts_discord_closed(3.0, 0.5).unwrap(), 0.471_916_928_629_79, max_relative = 1e-11);
    }

    #[test]
    fn closed_forms_on_pure_line() {
        for r in [0.25_f64, 0.5, 1.0] {
            let a = (2.0 * r).cosh();
            let nu = a - (a * a - 1.0).sqrt();
            let want = 2.0 * mid_pure_closed_form(r) - a.ln();
            assert!((sts_gamid_closed(a, nu).unwrap() - want).abs() < 1e-7);
            assert!((sts_discord_closed(a, nu).unwrap() - mid_pure_closed_form(r)).abs() < 1e-7);
        }
    }

    #[test]
    fn discord_examples() {
        let p = sf(2.0, 3.0, 0.0, 0.0);
        assert_eq!(two_way_discord(&p).unwrap(), 0.0);

        let g = make_family(&Family::Gmems { a: 3.0, nu: 0.5 }).unwrap();
        let d = gaussian_discord(&g, DiscordDirection::Left).unwrap();
        assert_relative_eq!(d.value, 0.471_916_928_629_79, max_relative = 1e-9);
        assert_eq!(d.branch, DiscordBranch::Heterodyne);

        let t = make_family(&Family::PureTmsv { r: 1.0 }).unwrap();
        let d = two_way_discord(&t).unwrap();
        assert!((d - mid_pure_closed_form(1.0)).abs() < 1e-9);
    }

    #[test]
    fn discord_theta_restriction_is_optimal() {
        let s = sf(2.0, 3.0, 1.2, -0.5);
        let d = gaussian_discord(&s, DiscordDirection::Left).unwrap();
        let mut best = f64::INFINITY;
        for i in 0..60 {
            for k in 0..80 {
                let seed = seed_cm(k as f64 * 0.05, i as f64 * std::f64::consts::PI / 60.0);
                let c = conditional_covariance(&s.to_cm(), &seed).unwrap();
                best = best.min(det2(&c));
            }
        }
        assert!(d.conditional_det <= best + 1e-12);
    }

    #[test]
    fn statistrani_values() {
        for (a, ag, disc) in [(2.0, 0.060_952_5, 0.035_117_7), (10.0, 0.053_362_2, 0.028_097_1)] {
            let s = make_family(&Family::Statistrani { a }).unwrap();
            assert!((gaussian_amid(&s).unwrap().value - ag).abs() < 5e-7);
            assert!((two_way_discord(&s).unwrap() - disc).abs() < 5e-7);
        }
    }
}
