//! Joint photon-number statistics of a two-mode Gaussian state and the
//! measurement-induced disturbance (MID) built from them.
//!
//! The generating function of the distribution is
//! `G(z₁, z₂) = Σ p(m,n) z₁^m z₂^n = [L₁ L₂]^{−1/2}` with
//! `L_j = S_j − (B₁+K_j) z₁ − (B₂+K_j) z₂ + K_j z₁ z₂`.
//! Two evaluation paths are provided:
//!
//! * [`DistributionMethod::Recurrence`] differentiates `P ∂G = α G ∂P` to get a
//!   three-term-per-direction recurrence with positive leading coefficient.
//!   It is stable, O(N²) in time and O(N) in memory when streamed.
//! * [`DistributionMethod::Direct`] expands the closed double sum with
//!   alternating inner terms, escalating to double-double arithmetic when the
//!   cancellation is too strong for `f64`.

use num_traits::Float;
use serde::{Deserialize, Serialize};
use twofloat::TwoFloat;

use crate::entropy::{entropy_f, entropy_f_resolved};
use crate::error::{Error, Result};
use crate::real::Real;
use crate::state::StandardFormCM;

/// Entries below this are treated as genuine precision failures.
const NEGATIVE_FAIL: f64 = -1e-8;
/// Cancellation ratio above which `f64` results are recomputed in double-double.
const ESCALATE_RATIO: f64 = 1e6;
/// Absolute error estimate that is harmless for entropies and normalization.
const ABS_NEGLIGIBLE: f64 = 1e-15;
const INITIAL_CUTOFF: usize = 16;

/// Moments entering the generating function.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhotonGenParams {
    /// Mean thermal photon number of mode A, `(a − 1)/2`.
    pub b1: f64,
    /// Mean thermal photon number of mode B, `(b − 1)/2`.
    pub b2: f64,
    /// Anomalous intermodal moment `(c₁ − c₂)/4`.
    pub d: f64,
    /// Normal intermodal moment `−(c₁ + c₂)/4`.
    pub dbar: f64,
    pub k1: f64,
    pub k2: f64,
}

impl PhotonGenParams {
    pub fn new(sf: &StandardFormCM) -> Self {
        let k = |c: f64| ((sf.a - 1.0) * (sf.b - 1.0) - c * c) / 4.0;
        Self {
            b1: (sf.a - 1.0) / 2.0,
            b2: (sf.b - 1.0) / 2.0,
            d: (sf.c1 - sf.c2) / 4.0,
            dbar: -(sf.c1 + sf.c2) / 4.0,
            k1: k(sf.c1),
            k2: k(sf.c2),
        }
    }

    /// Coefficients of `L_j` indexed `[i][j]` for `z₁^i z₂^j`.
    fn factor(&self, k: f64) -> [[f64; 2]; 2] {
        [
            [1.0 + self.b1 + self.b2 + k, -(self.b2 + k)],
            [-(self.b1 + k), k],
        ]
    }

    /// Ratio of consecutive marginal probabilities, `n̄/(1 + n̄)`.
    fn geometric_ratios(&self) -> (f64, f64) {
        (self.b1 / (1.0 + self.b1), self.b2 / (1.0 + self.b2))
    }

    /// Upper bound on the probability outside `[0, N]²`.
    pub fn tail_bound(&self, cutoff: usize) -> f64 {
        let (qa, qb) = self.geometric_ratios();
        let e = (cutoff + 1) as i32;
        qa.powi(e) + qb.powi(e)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum DistributionMethod {
    #[default]
    Recurrence,
    Direct,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FockOptions {
    pub tail_tol: f64,
    pub max_cutoff: usize,
    pub method: DistributionMethod,
}

impl Default for FockOptions {
    fn default() -> Self {
        Self {
            tail_tol: 1e-10,
            max_cutoff: 512,
            method: DistributionMethod::Recurrence,
        }
    }
}

impl FockOptions {
    /// Defaults for MID, where the streamed recurrence keeps memory linear in
    /// the cutoff and a much larger cap is affordable.
    pub fn for_mid() -> Self {
        Self {
            max_cutoff: 1 << 15,
            ..Self::default()
        }
    }

    pub fn with_tail_tol(mut self, tail_tol: f64) -> Self {
        self.tail_tol = tail_tol;
        self
    }
}

/// Truncated joint distribution on `[0, N]²`, stored row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JointPhotonDistribution {
    pub cutoff: usize,
    pub p: Vec<f64>,
    /// `1 − Σ p`, clamped at zero.
    pub tail_mass: f64,
}

impl JointPhotonDistribution {
    pub fn dim(&self) -> usize {
        self.cutoff + 1
    }

    pub fn get(&self, m: usize, n: usize) -> f64 {
        self.p[m * self.dim() + n]
    }

    pub fn row(&self, m: usize) -> &[f64] {
        let d = self.dim();
        &self.p[m * d..(m + 1) * d]
    }

    pub fn total(&self) -> f64 {
        neumaier_sum(self.p.iter().copied())
    }

    /// `Σ_n p(m, n)` for each `m`.
    pub fn marginal_a(&self) -> Vec<f64> {
        (0..self.dim())
            .map(|m| neumaier_sum(self.row(m).iter().copied()))
            .collect()
    }

    /// `Σ_m p(m, n)` for each `n`.
    pub fn marginal_b(&self) -> Vec<f64> {
        (0..self.dim())
            .map(|n| neumaier_sum((0..self.dim()).map(|m| self.get(m, n))))
            .collect()
    }

    /// Bound on the entropy carried by the discarded tail.
    pub fn tail_entropy_bound(&self) -> f64 {
        tail_entropy_bound(self.tail_mass, self.cutoff)
    }
}

/// `t (ln(1/t) + N)`, zero for an empty tail.
pub fn tail_entropy_bound(tail: f64, cutoff: usize) -> f64 {
    if tail <= 0.0 {
        0.0
    } else {
        tail * (-tail.ln() + cutoff as f64)
    }
}

fn neumaier_sum(it: impl Iterator<Item = f64>) -> f64 {
    let mut acc = NeumaierSum::default();
    for x in it {
        acc.add(x);
    }
    acc.value()
}

#[derive(Debug, Clone, Copy, Default)]
struct NeumaierSum {
    sum: f64,
    comp: f64,
}

impl NeumaierSum {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

fn check_tail_tol(tail_tol: f64) -> Result<()> {
    if tail_tol > 0.0 && tail_tol <= 1e-4 {
        Ok(())
    } else {
        Err(Error::OutOfRange(format!(
            "tail_tol = {tail_tol} must lie in (0, 1e-4]"
        )))
    }
}

/// Smallest cutoff `16·2^k` whose analytic tail bound meets `tail_tol`.
pub fn choose_cutoff(params: &PhotonGenParams, tail_tol: f64, max_cutoff: usize) -> Result<usize> {
    let mut n = INITIAL_CUTOFF.min(max_cutoff.max(1));
    loop {
        if params.tail_bound(n) <= tail_tol {
            return Ok(n);
        }
        if n >= max_cutoff {
            return Err(Error::Convergence {
                cap: max_cutoff,
                tail_mass: params.tail_bound(max_cutoff),
                tail_tol,
            });
        }
        n = (2 * n).min(max_cutoff);
    }
}

/// Clamps round-off negatives and rejects real precision failures.
fn sanitize(value: f64, m: usize, n: usize) -> Result<f64> {
    if value < NEGATIVE_FAIL || !value.is_finite() {
        return Err(Error::Precision { m, n, value });
    }
    Ok(value.max(0.0))
}

/// Coefficients of the generating-function polynomial `P` and its exponent.
///
/// Squeezed thermal states have `K₁ = K₂`, so `G = L⁻¹` with a bilinear `L`.
struct GenPoly {
    p: [[f64; 3]; 3],
    alpha: f64,
}

impl GenPoly {
    fn new(sf: &StandardFormCM) -> Self {
        let params = PhotonGenParams::new(sf);
        let l1 = params.factor(params.k1);
        if sf.is_squeezed_thermal(1e-14) {
            let mut p = [[0.0; 3]; 3];
            for i in 0..2 {
                for j in 0..2 {
                    p[i][j] = l1[i][j];
                }
            }
            return Self { p, alpha: -1.0 };
        }
        let l2 = params.factor(params.k2);
        let mut p = [[0.0; 3]; 3];
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    for l in 0..2 {
                        p[i + k][j + l] += l1[i][j] * l2[k][l];
                    }
                }
            }
        }
        Self { p, alpha: -0.5 }
    }
}

/// Row-by-row evaluation of the generating-function coefficients.
///
/// Row `m + 1` is produced from rows `m` and `m − 1` via
/// `Σ_{ij} P_ij [(m+1−i) − α i] g(m+1−i, n−j) = 0`; row 0 uses the same
/// identity in the second variable.
struct RowStream {
    poly: GenPoly,
    width: usize,
    prev2: Vec<f64>,
    prev: Vec<f64>,
    next_row: usize,
}

impl RowStream {
    fn new(sf: &StandardFormCM, cutoff: usize) -> Self {
        Self {
            poly: GenPoly::new(sf),
            width: cutoff + 1,
            prev2: vec![0.0; cutoff + 1],
            prev: vec![0.0; cutoff + 1],
            next_row: 0,
        }
    }

    /// Produces the next raw row (before clamping).
    fn advance(&mut self) -> &[f64] {
        let p = &self.poly.p;
        let alpha = self.poly.alpha;
        let w = self.width;
        let mut row = vec![0.0; w];
        if self.next_row == 0 {
            row[0] = p[0][0].powf(alpha);
            for n in 0..w - 1 {
                let mut s = 0.0;
                for j in 1..3 {
                    if n + 1 >= j {
                        let k = (n + 1 - j) as f64;
                        s += p[0][j] * (k - alpha * j as f64) * row[n + 1 - j];
                    }
                }
                row[n + 1] = -s / (p[0][0] * (n + 1) as f64);
            }
        } else {
            // computing row m + 1 = next_row
            let m1 = self.next_row;
            let rows: [&[f64]; 2] = [&self.prev, &self.prev2];
            for n in 0..w {
                let mut s = 0.0;
                for j in 1..3 {
                    if n >= j {
                        s += p[0][j] * (m1 as f64) * row[n - j];
                    }
                }
                for i in 1..3 {
                    if m1 < i {
                        continue;
                    }
                    let coef = (m1 - i) as f64 - alpha * i as f64;
                    let src = rows[i - 1];
                    for j in 0..3 {
                        if n >= j && p[i][j] != 0.0 {
                            s += p[i][j] * coef * src[n - j];
                        }
                    }
                }
                row[n] = -s / (p[0][0] * m1 as f64);
            }
        }
        std::mem::swap(&mut self.prev2, &mut self.prev);
        self.prev = row;
        self.next_row += 1;
        &self.prev
    }
}

/// Visits every sanitized row of the truncated distribution.
fn stream_rows(
    sf: &StandardFormCM,
    cutoff: usize,
    mut visit: impl FnMut(usize, &[f64]),
) -> Result<()> {
    let mut stream = RowStream::new(sf, cutoff);
    let mut clean = vec![0.0; cutoff + 1];
    for m in 0..=cutoff {
        let raw = stream.advance();
        for (n, (&v, c)) in raw.iter().zip(clean.iter_mut()).enumerate() {
            *c = sanitize(v, m, n)?;
        }
        visit(m, &clean);
    }
    Ok(())
}

/// Joint photon-number distribution with cutoff grown until the captured
/// mass reaches `1 − tail_tol`.
pub fn joint_photon_distribution(
    sf: &StandardFormCM,
    tail_tol: f64,
) -> Result<JointPhotonDistribution> {
    joint_photon_distribution_with(sf, &FockOptions::default().with_tail_tol(tail_tol))
}

pub fn joint_photon_distribution_with(
    sf: &StandardFormCM,
    opts: &FockOptions,
) -> Result<JointPhotonDistribution> {
    check_tail_tol(opts.tail_tol)?;
    let params = PhotonGenParams::new(sf);
    let cutoff = choose_cutoff(&params, opts.tail_tol, opts.max_cutoff)?;
    distribution_at_cutoff(sf, cutoff, opts.method)
}

/// Distribution on a fixed `[0, N]²` window.
pub fn distribution_at_cutoff(
    sf: &StandardFormCM,
    cutoff: usize,
    method: DistributionMethod,
) -> Result<JointPhotonDistribution> {
    let d = cutoff + 1;
    let p = match method {
        DistributionMethod::Recurrence => {
            let mut p = Vec::with_capacity(d * d);
            stream_rows(sf, cutoff, |_, row| p.extend_from_slice(row))?;
            p
        }
        DistributionMethod::Direct => direct_matrix(sf, cutoff)?,
    };
    let tail_mass = (1.0 - neumaier_sum(p.iter().copied())).max(0.0);
    Ok(JointPhotonDistribution { cutoff, p, tail_mass })
}

// ---------------------------------------------------------------------------
// Direct summation

/// Working precision of the direct sums.
/// Tables of `q̃(α, β) = S^{−1/2} Σ_l (½)_k x^{α−l} y^{β−l} z^l / ((α−l)!(β−l)! l!)`
/// with `k = α + β − l`, plus the matching sums of absolute terms.
struct QTable<T> {
    dim: usize,
    val: Vec<T>,
    abs: Vec<f64>,
}

fn pow_table<T: Float>(x: T, n: usize) -> Vec<T> {
    let mut v = Vec::with_capacity(n + 1);
    let mut acc = T::one();
    for _ in 0..=n {
        v.push(acc);
        acc = acc * x;
    }
    v
}

/// Generating-function coefficients `(x, y, z, S)` for one factor, evaluated
/// from the raw covariances in the working precision so that input rounding
/// is not amplified by the alternating sums.
fn factor_coeffs<T: Real>(a: f64, b: f64, c: f64) -> (T, T, T, T) {
    let f = |v: f64| <T as From<f64>>::from(v);
    let one = T::one();
    let two = f(2.0);
    let (am1, bm1) = (f(a) - one, f(b) - one);
    let b1 = am1.quot(two);
    let b2 = bm1.quot(two);
    let k = (am1 * bm1 - f(c) * f(c)).quot(f(4.0));
    let s = one + b1 + b2 + k;
    ((b1 + k).quot(s), (b2 + k).quot(s), (-k).quot(s), s)
}

fn q_table<T: Real>(a: f64, b: f64, c: f64, dim: usize) -> QTable<T> {
    let one = T::one();
    let (x, y, z, st) = factor_coeffs::<T>(a, b, c);
    let norm = one.quot(st.sqrt());
    let xp = pow_table(x, dim);
    let yp = pow_table(y, dim);
    let zp = pow_table(z, dim);
    let mut inv_fact = vec![one; dim + 1];
    for i in 1..=dim {
        inv_fact[i] = inv_fact[i - 1].quot(<T as From<f64>>::from(i as f64));
    }
    let half = <T as From<f64>>::from(0.5);
    let mut poch = vec![one; 2 * dim + 1];
    for i in 1..poch.len() {
        poch[i] = poch[i - 1] * (half + <T as From<f64>>::from((i - 1) as f64));
    }
    let mut val = vec![T::zero(); dim * dim];
    let mut abs = vec![0.0; dim * dim];
    for al in 0..dim {
        for be in 0..dim {
            let mut sum = T::zero();
            let mut sabs = 0.0;
            for l in 0..=al.min(be) {
                let t = poch[al + be - l]
                    * inv_fact[al - l]
                    * inv_fact[be - l]
                    * inv_fact[l]
                    * xp[al - l]
                    * yp[be - l]
                    * zp[l];
                sum = sum + t;
                sabs += t.abs().to_f64().unwrap_or(f64::INFINITY);
            }
            val[al * dim + be] = sum * norm;
            sabs *= norm.to_f64().unwrap_or(f64::INFINITY);
            abs[al * dim + be] = sabs;
        }
    }
    QTable { dim, val, abs }
}

/// One entry of the convolution `Σ q̃₁(ν₁,ν₂) q̃₂(m−ν₁, n−ν₂)` and its
/// absolute-term sum.
fn convolve<T: Float>(q1: &QTable<T>, q2: &QTable<T>, m: usize, n: usize) -> (T, f64) {
    let d = q1.dim;
    let mut sum = T::zero();
    let mut sabs = 0.0;
    for v1 in 0..=m {
        for v2 in 0..=n {
            let i = v1 * d + v2;
            let j = (m - v1) * d + (n - v2);
            sum = sum + q1.val[i] * q2.val[j];
            sabs += q1.abs[i] * q2.abs[j];
        }
    }
    (sum, sabs)
}

/// `f64` Neumaier variant of [`convolve`].
fn convolve_f64(q1: &QTable<f64>, q2: &QTable<f64>, m: usize, n: usize) -> (f64, f64) {
    let d = q1.dim;
    let mut sum = NeumaierSum::default();
    let mut sabs = 0.0;
    for v1 in 0..=m {
        for v2 in 0..=n {
            let i = v1 * d + v2;
            let j = (m - v1) * d + (n - v2);
            sum.add(q1.val[i] * q2.val[j]);
            sabs += q1.abs[i] * q2.abs[j];
        }
    }
    (sum.value(), sabs)
}

/// Whether a result whose absolute terms sum to `sabs`, computed at unit
/// round-off `eps`, is accurate enough to keep.
fn well_conditioned(value: f64, sabs: f64, eps: f64) -> bool {
    let err = sabs * eps;
    err <= ABS_NEGLIGIBLE || err <= 1e-12 * value.abs()
}

/// First-pass acceptance of an `f64` sum.
fn f64_acceptable(value: f64, sabs: f64) -> bool {
    sabs <= value.abs() * ESCALATE_RATIO || sabs * f64::EPSILON <= ABS_NEGLIGIBLE
}

/// Unit round-off of double-double arithmetic.
const DD_EPS: f64 = 4.93e-32;

struct DirectTables {
    sf: StandardFormCM,
    fast: (QTable<f64>, QTable<f64>),
    extended: Option<(QTable<TwoFloat>, QTable<TwoFloat>)>,
}

impl DirectTables {
    fn new(sf: &StandardFormCM, cutoff: usize) -> Self {
        Self {
            sf: *sf,
            fast: Self::tables(sf, cutoff + 1),
            extended: None,
        }
    }

    fn tables<T: Real>(sf: &StandardFormCM, dim: usize) -> (QTable<T>, QTable<T>) {
        (q_table(sf.a, sf.b, sf.c1, dim), q_table(sf.a, sf.b, sf.c2, dim))
    }

    fn entry(&mut self, m: usize, n: usize) -> Result<f64> {
        let (v, sabs) = convolve_f64(&self.fast.0, &self.fast.1, m, n);
        if f64_acceptable(v, sabs) {
            return sanitize(v, m, n);
        }
        let (sf, dim) = (self.sf, self.fast.0.dim);
        let (q1, q2) = self
            .extended
            .get_or_insert_with(|| Self::tables(&sf, dim));
        let (v, sabs) = convolve(q1, q2, m, n);
        let v = f64::from(v);
        if !well_conditioned(v, sabs, DD_EPS) {
            return Err(Error::Precision { m, n, value: v });
        }
        sanitize(v, m, n)
    }
}

fn direct_matrix(sf: &StandardFormCM, cutoff: usize) -> Result<Vec<f64>> {
    let mut tables = DirectTables::new(sf, cutoff);
    let d = cutoff + 1;
    let mut p = Vec::with_capacity(d * d);
    for m in 0..d {
        for n in 0..d {
            p.push(tables.entry(m, n)?);
        }
    }
    Ok(p)
}

/// Single probability `p(m, n)` by direct summation of the closed form.
pub fn photon_probability_direct(sf: &StandardFormCM, m: usize, n: usize) -> Result<f64> {
    DirectTables::new(sf, m.max(n)).entry(m, n)
}

/// Direct sum specialised to squeezed thermal states (`K₁ = K₂ = K`):
/// `p(m,n) = S⁻¹ Σ_j (m+n−j)!/((m−j)!(n−j)! j!) x^{m−j} y^{n−j} z^j`.
pub fn photon_probability_squeezed_thermal(sf: &StandardFormCM, m: usize, n: usize) -> Result<f64> {
    if !sf.is_squeezed_thermal(1e-12) {
        return Err(Error::OutOfRange(format!(
            "squeezed thermal branch requires c1 = ±c2, got c1 = {}, c2 = {}",
            sf.c1, sf.c2
        )));
    }
    let (v, sabs) = sts_sum::<f64>(sf, m, n);
    if f64_acceptable(v, sabs) {
        return sanitize(v, m, n);
    }
    let (v, sabs) = sts_sum::<TwoFloat>(sf, m, n);
    let v = f64::from(v);
    if !well_conditioned(v, sabs, DD_EPS) {
        return Err(Error::Precision { m, n, value: v });
    }
    sanitize(v, m, n)
}

fn sts_sum<T: Real>(sf: &StandardFormCM, m: usize, n: usize) -> (T, f64) {
    let f = |v: f64| <T as From<f64>>::from(v);
    let (x, y, z, s) = factor_coeffs::<T>(sf.a, sf.b, sf.c1);
    let xp = pow_table(x, m);
    let yp = pow_table(y, n);
    let zp = pow_table(z, m.min(n));
    let mut sum = T::zero();
    let mut sabs = 0.0;
    for j in 0..=m.min(n) {
        // (m+n−j)!/((m−j)!(n−j)! j!) as a product of ratios
        let mut coef = T::one();
        for i in 1..=(m - j) {
            coef = (coef * f((n - j + i) as f64)).quot(f(i as f64));
        }
        for i in 1..=j {
            coef = (coef * f((m + n - 2 * j + i) as f64)).quot(f(i as f64));
        }
        let t = coef * xp[m - j] * yp[n - j] * zp[j];
        sum = sum + t;
        sabs += t.abs().to_f64().unwrap_or(f64::INFINITY);
    }
    let inv_s = T::one().quot(s);
    let scale = inv_s.to_f64().unwrap_or(0.0);
    (sum * inv_s, sabs * scale)
}

// ---------------------------------------------------------------------------
// Entropies

/// `−Σ p ln p` over the stored entries; the tail is excluded and bounded by
/// [`JointPhotonDistribution::tail_entropy_bound`].
pub fn shannon_entropy(dist: &JointPhotonDistribution) -> f64 {
    let mut acc = NeumaierSum::default();
    for &p in &dist.p {
        if p > 0.0 {
            acc.add(-p * p.ln());
        }
    }
    acc.value().max(0.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MidMethod {
    /// No correlations: the measurement leaves the state invariant.
    Product,
    /// Pure state, entropy of entanglement.
    PureClosedForm,
    /// Truncated Shannon entropy of the joint photon distribution.
    Numeric,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MidResult {
    pub value: f64,
    pub method: MidMethod,
    /// Truncated Shannon entropy of the photon statistics (numeric path only).
    pub shannon: Option<f64>,
    pub cutoff: usize,
    pub tail_mass: f64,
    pub tail_entropy_bound: f64,
    /// A marginal is pure (`a = 1` or `b = 1`); the state then factorizes.
    pub degenerate_marginal: bool,
}

impl MidResult {
    fn exact(value: f64, method: MidMethod, degenerate_marginal: bool) -> Self {
        Self {
            value,
            method,
            shannon: None,
            cutoff: 0,
            tail_mass: 0.0,
            tail_entropy_bound: 0.0,
            degenerate_marginal,
        }
    }
}

/// Entropy of entanglement of a pure state with local covariance `a = cosh 2r`:
/// `cosh² r ln cosh² r − sinh² r ln sinh² r`.
pub fn mid_pure_closed_form(r: f64) -> f64 {
    let c2 = r.cosh().powi(2);
    let s2 = r.sinh().powi(2);
    if s2 == 0.0 {
        return 0.0;
    }
    c2 * c2.ln() - s2 * s2.ln()
}

/// MID with default options at the given tail tolerance.
pub fn mid(sf: &StandardFormCM, tail_tol: f64) -> Result<MidResult> {
    mid_with(sf, &FockOptions::for_mid().with_tail_tol(tail_tol))
}

/// MID, taking the closed form on pure states.
pub fn mid_with(sf: &StandardFormCM, opts: &FockOptions) -> Result<MidResult> {
    let degenerate = sf.has_degenerate_marginal();
    if sf.c1 == 0.0 && sf.c2 == 0.0 || degenerate {
        return Ok(MidResult::exact(0.0, MidMethod::Product, degenerate));
    }
    if sf.is_symmetric(1e-12) && sf.is_pure(sf.tol()) {
        return Ok(MidResult::exact(entropy_f(sf.a)?, MidMethod::PureClosedForm, false));
    }
    mid_numeric(sf, opts)
}

/// MID through the truncated photon statistics, regardless of purity.
pub fn mid_numeric(sf: &StandardFormCM, opts: &FockOptions) -> Result<MidResult> {
    check_tail_tol(opts.tail_tol)?;
    let params = PhotonGenParams::new(sf);
    let cutoff = choose_cutoff(&params, opts.tail_tol, opts.max_cutoff)?;
    let spec = sf.spectrum()?;
    let (shannon, mass) = match opts.method {
        DistributionMethod::Recurrence => {
            let mut h = NeumaierSum::default();
            let mut total = NeumaierSum::default();
            stream_rows(sf, cutoff, |_, row| {
                for &p in row {
                    if p > 0.0 {
                        h.add(-p * p.ln());
                        total.add(p);
                    }
                }
            })?;
            (h.value().max(0.0), total.value())
        }
        DistributionMethod::Direct => {
            let dist = distribution_at_cutoff(sf, cutoff, DistributionMethod::Direct)?;
            (shannon_entropy(&dist), dist.total())
        }
    };
    let tail_mass = (1.0 - mass).max(0.0);
    let value = shannon - entropy_f_resolved(spec.nu_plus, sf.tol()) - entropy_f_resolved(spec.nu_minus, sf.tol());
    Ok(MidResult {
        value: value.max(0.0),
        method: MidMethod::Numeric,
        shannon: Some(shannon),
        cutoff,
        tail_mass,
        tail_entropy_bound: tail_entropy_bound(tail_mass, cutoff),
        degenerate_marginal: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::{make_family, Family};
    use approx::assert_relative_eq;

    fn sf(a: f64, b: f64, c1: f64, c2: f64) -> StandardFormCM {
        StandardFormCM::new(a, b, c1, c2).unwrap()
    }

    #[test]
    fn tmsv_distribution() {
        let s = make_family(&Family::PureTmsv { r: 1.0 }).unwrap();
        let d = joint_photon_distribution(&s, 1e-12).unwrap();
        let q2 = 1.0_f64.tanh().powi(2);
        for n in 0..10 {
            assert_relative_eq!(d.get(n, n), (1.0 - q2) * q2.powi(n as i32), max_relative = 1e-12);
            assert!(d.get(n, n + 1).abs() < 1e-15);
        }
        assert_relative_eq!(d.get(0, 0), 0.419_974_341_614_026_1, max_relative = 1e-12);
        assert_relative_eq!(d.get(1, 1), 0.243_595_893_999_891_4, max_relative = 1e-9);
    }

    #[test]
    fn product_thermal_is_geometric() {
        let s = sf(3.0, 1.0, 0.0, 0.0);
        let d = joint_photon_distribution(&s, 1e-12).unwrap();
        for m in 0..20 {
            assert_relative_eq!(d.get(m, 0), 0.5_f64.powi(m as i32 + 1), max_relative = 1e-12);
            assert_eq!(d.get(m, 1), 0.0);
        }
    }

    #[test]
    fn recurrence_matches_independent_quadrature_values() {
        // values from a 4-D Gauss–Hermite quadrature of the Wigner overlap
        let s = sf(2.0, 3.0, 1.2, -0.5);
        let d = distribution_at_cutoff(&s, 8, DistributionMethod::Recurrence).unwrap();
        for (m, n, want) in [
            (0, 0, 0.359_094_785_703_270_7),
            (1, 0, 0.100_829_000_112_04),
            (1, 2, 0.030_943_622_025_305),
            (3, 2, 0.004_090_098_991_403_45),
            (4, 4, 0.000_630_870_267_215_94),
        ] {
            assert_relative_eq!(d.get(m, n), want, max_relative = 1e-9);
        }
    }

    #[test]
    fn direct_agrees_with_recurrence() {
        for s in [sf(2.0, 3.0, 1.2, -0.5), sf(2.5, 2.5, 1.5, 0.7), sf(3.0, 1.5, 0.8, 0.3)] {
            let rec = distribution_at_cutoff(&s, 24, DistributionMethod::Recurrence).unwrap();
            let dir = distribution_at_cutoff(&s, 24, DistributionMethod::Direct).unwrap();
            for (x, y) in rec.p.iter().zip(&dir.p) {
                assert!((x - y).abs() <= 1e-13 + 1e-10 * x.abs(), "{x} vs {y}");
            }
        }
    }

    #[test]
    fn direct_escalates_under_cancellation() {
        // strongly correlated mixed state with K > 0: alternating inner sums
        let s = make_family(&Family::Statistrani { a: 10.0 }).unwrap();
        let rec = distribution_at_cutoff(&s, 40, DistributionMethod::Recurrence).unwrap();
        for (m, n) in [(10, 10), (30, 30), (40, 3)] {
            let v = photon_probability_direct(&s, m, n).unwrap();
            assert_relative_eq!(v, rec.get(m, n), max_relative = 1e-9);
        }
    }

    #[test]
    fn squeezed_thermal_branch_matches_general() {
        for s in [sf(2.0, 3.0, 1.5, -1.5), sf(4.0, 4.0, 2.0, 2.0), sf(1.5, 5.0, 0.6, -0.6)] {
            let rec = distribution_at_cutoff(&s, 20, DistributionMethod::Direct).unwrap();
            for m in 0..=20 {
                for n in 0..=20 {
                    let v = photon_probability_squeezed_thermal(&s, m, n).unwrap();
                    assert!((v - rec.get(m, n)).abs() < 1e-12, "({m},{n}): {v} vs {}", rec.get(m, n));
                }
            }
        }
        assert!(photon_probability_squeezed_thermal(&sf(2.0, 2.0, 1.0, 0.0), 0, 0).is_err());
    }

    #[test]
    fn normalization_and_marginals() {
        let s = sf(2.0, 3.0, 1.2, -0.5);
        let d = joint_photon_distribution(&s, 1e-10).unwrap();
        assert!(d.tail_mass <= 1e-10);
        assert!((d.total() + d.tail_mass - 1.0).abs() < 1e-14);
        let nb = (s.a - 1.0) / 2.0;
        for (m, &pm) in d.marginal_a().iter().enumerate().take(30) {
            let want = nb.powi(m as i32) / (1.0 + nb).powi(m as i32 + 1);
            assert!((pm - want).abs() < 1e-9);
        }
    }

    #[test]
    fn shannon_entropy_examples() {
        let point = JointPhotonDistribution {
            cutoff: 1,
            p: vec![1.0, 0.0, 0.0, 0.0],
            tail_mass: 0.0,
        };
        assert_eq!(shannon_entropy(&point), 0.0);
        let uniform = JointPhotonDistribution {
            cutoff: 1,
            p: vec![0.25; 4],
            tail_mass: 0.0,
        };
        assert_relative_eq!(shannon_entropy(&uniform), 4.0_f64.ln(), max_relative = 1e-15);

        let s = make_family(&Family::PureTmsv { r: 1.0 }).unwrap();
        let d = joint_photon_distribution(&s, 1e-12).unwrap();
        assert!((shannon_entropy(&d) - 1.619_822_092_897_702_5).abs() < 1e-9);
    }

    #[test]
    fn mid_pure_numeric_matches_closed_form() {
        for r in [0.25, 0.5, 1.0] {
            let s = make_family(&Family::PureTmsv { r }).unwrap();
            let closed = mid(&s, 1e-12).unwrap();
            assert_eq!(closed.method, MidMethod::PureClosedForm);
            assert_relative_eq!(closed.value, mid_pure_closed_form(r), max_relative = 1e-12);
            let num = mid_numeric(&s, &FockOptions::for_mid().with_tail_tol(1e-12)).unwrap();
            assert!((num.value - closed.value).abs() < 1e-8);
        }
    }

    #[test]
    fn mid_product_is_zero() {
        let r = mid(&sf(2.0, 5.0, 0.0, 0.0), 1e-10).unwrap();
        assert_eq!(r.value, 0.0);
        assert_eq!(r.method, MidMethod::Product);
    }

    #[test]
    fn mid_tail_refinement_converges() {
        let s = make_family(&Family::StsSym { a: 2.0, cnorm: 1.0 / 3f64.sqrt() }).unwrap();
        let coarse = mid(&s, 1e-8).unwrap();
        let fine = mid(&s, 1e-12).unwrap();
        assert!(fine.value > 0.0);
        assert!((coarse.value - fine.value).abs() <= coarse.tail_entropy_bound + 1e-12);
    }

    #[test]
    fn cutoff_cap_reports_convergence_error() {
        let s = make_family(&Family::Statistrani { a: 1000.0 }).unwrap();
        let err = joint_photon_distribution(&s, 1e-10).unwrap_err();
        assert!(matches!(err, Error::Convergence { cap: 512, .. }));
    }

    #[test]
    fn tail_tol_range() {
        let s = sf(2.0, 2.0, 1.0, 0.0);
        assert!(joint_photon_distribution(&s, 0.1).is_err());
        assert!(joint_photon_distribution(&s, 0.0).is_err());
    }
}
