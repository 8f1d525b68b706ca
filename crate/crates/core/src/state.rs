//! Two-mode Gaussian states in standard form, physicality checks, and the
//! named state families used throughout the crate.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    ab_minus_sq, blocks, det2, det4, from_blocks, is_symmetric4, matmul2,
    partial_transpose_eigenvalues, phys_tol, spectrum_from_parts, symplectic_eigenvalues,
    transpose2, Mat2, Mat4, SymplecticSpectrum, PHYS_TOL,
};

/// Standard-form covariances `(a, b, c₁, c₂)` with `c₁ ≥ |c₂|`.
///
/// Displacements are always zero; none of the measures depend on them.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StandardFormCM {
    pub a: f64,
    pub b: f64,
    pub c1: f64,
    pub c2: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhysicalityReport {
    pub is_positive: bool,
    pub nu_minus: f64,
    pub messages: Vec<String>,
}

impl StandardFormCM {
    /// Builds a standard form and checks every invariant, including the
    /// uncertainty relation.
    pub fn new(a: f64, b: f64, c1: f64, c2: f64) -> Result<Self> {
        let sf = Self { a, b, c1, c2 };
        sf.check()?;
        Ok(sf)
    }

    fn check(&self) -> Result<()> {
        let vals = [self.a, self.b, self.c1, self.c2];
        if vals.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonPhysical(format!("non-finite covariance in {self:?}")));
        }
        if self.a < 1.0 - PHYS_TOL || self.b < 1.0 - PHYS_TOL {
            return Err(Error::NonPhysical(format!(
                "local covariances a = {}, b = {} must be ≥ 1",
                self.a, self.b
            )));
        }
        if self.c1 < self.c2.abs() - PHYS_TOL * self.c1.abs().max(1.0) {
            return Err(Error::NonPhysical(format!(
                "ordering c1 ≥ |c2| violated: c1 = {}, c2 = {}",
                self.c1, self.c2
            )));
        }
        if !(self.a * self.b - self.c1 * self.c1 > 0.0 && self.a * self.b - self.c2 * self.c2 > 0.0) {
            return Err(Error::NonPhysical("matrix is not positive definite".to_string()));
        }
        let nu = self.spectrum()?.nu_minus;
        if nu < 1.0 - self.tol() {
            return Err(Error::NonPhysical(format!(
                "uncertainty relation violated: ν₋ = {nu}"
            )));
        }
        Ok(())
    }

    pub fn to_cm(&self) -> Mat4 {
        let Self { a, b, c1, c2 } = *self;
        [
            [a, 0.0, c1, 0.0],
            [0.0, a, 0.0, c2],
            [c1, 0.0, b, 0.0],
            [0.0, c2, 0.0, b],
        ]
    }

    pub fn det(&self) -> f64 {
        ab_minus_sq(self.a, self.b, self.c1) * ab_minus_sq(self.a, self.b, self.c2)
    }

    /// `Δ² − 4 det γ = (a² − b²)² + 4(a c₁ + b c₂)(b c₁ + a c₂)`, free of the
    /// cancellation that plagues the direct form near pure states.
    fn discriminant(&self, c2: f64) -> f64 {
        let Self { a, b, c1, .. } = *self;
        let d = (a - b) * (a + b);
        d * d + 4.0 * (a * c1 + b * c2) * (b * c1 + a * c2)
    }

    pub fn spectrum(&self) -> Result<SymplecticSpectrum> {
        let delta = self.a * self.a + self.b * self.b + 2.0 * self.c1 * self.c2;
        spectrum_from_parts(delta, self.det(), self.discriminant(self.c2))
    }

    /// Spectrum of the partially transposed state (`c₂ → −c₂`).
    pub fn pt_spectrum(&self) -> Result<SymplecticSpectrum> {
        let delta = self.a * self.a + self.b * self.b - 2.0 * self.c1 * self.c2;
        spectrum_from_parts(delta, self.det(), self.discriminant(-self.c2))
    }

    /// Smallest symplectic eigenvalue of the partial transpose; the state is
    /// entangled iff it is below one.
    pub fn pt_nu_minus(&self) -> Result<f64> {
        Ok(self.pt_spectrum()?.nu_minus)
    }

    /// Physicality slack appropriate for the magnitude of the entries.
    pub fn tol(&self) -> f64 {
        phys_tol(self.a.max(self.b))
    }

    pub fn swapped(&self) -> Self {
        Self {
            a: self.b,
            b: self.a,
            ..*self
        }
    }

    fn scale(&self) -> f64 {
        self.a.max(self.b)
    }

    pub fn is_product(&self, tol: f64) -> bool {
        self.c1.abs() <= tol * self.scale() && self.c2.abs() <= tol * self.scale()
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        (self.a - self.b).abs() <= tol * self.scale()
    }

    /// `c₂ = ±c₁`.
    pub fn is_squeezed_thermal(&self, tol: f64) -> bool {
        (self.c1 - self.c2.abs()).abs() <= tol * self.scale()
    }

    pub fn is_pure(&self, tol: f64) -> bool {
        match self.spectrum() {
            Ok(s) => (s.nu_plus - 1.0).abs() <= tol && (s.nu_minus - 1.0).abs() <= tol,
            Err(_) => false,
        }
    }

    /// A marginal with `a = 1` or `b = 1` is pure and its Fock basis is the
    /// only eigenbasis; flagged so MID callers know the state factorizes.
    pub fn has_degenerate_marginal(&self) -> bool {
        (self.a - 1.0).abs() <= PHYS_TOL || (self.b - 1.0).abs() <= PHYS_TOL
    }
}

/// Positivity and uncertainty-relation check of an arbitrary 4×4 covariance matrix.
pub fn validate(cm: &Mat4) -> PhysicalityReport {
    let mut messages = Vec::new();
    let mut positive = true;
    if !is_symmetric4(cm, 1e-12) {
        messages.push("matrix is not symmetric".to_string());
        positive = false;
    }
    // Sylvester's criterion on the leading principal minors.
    let m1 = cm[0][0];
    let m2 = cm[0][0] * cm[1][1] - cm[0][1] * cm[1][0];
    let m3 = {
        let (a, b, c) = (cm[0], cm[1], cm[2]);
        a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0])
            + a[2] * (b[0] * c[1] - b[1] * c[0])
    };
    let m4 = det4(cm);
    if !(m1 > 0.0 && m2 > 0.0 && m3 > 0.0 && m4 > 0.0) {
        messages.push("matrix is not positive definite".to_string());
        positive = false;
    }
    let nu_minus = match symplectic_eigenvalues(cm) {
        Ok(s) => s.nu_minus,
        Err(e) => {
            messages.push(e.to_string());
            return PhysicalityReport {
                is_positive: false,
                nu_minus: f64::NAN,
                messages,
            };
        }
    };
    let scale = cm.iter().flatten().fold(1.0_f64, |m, v| m.max(v.abs()));
    if nu_minus < 1.0 - phys_tol(scale) {
        messages.push(format!("uncertainty relation violated: ν₋ = {nu_minus}"));
        positive = false;
    }
    PhysicalityReport {
        is_positive: positive,
        nu_minus,
        messages,
    }
}

/// Reduces a physical covariance matrix to standard form using only the
/// local symplectic invariants `det A`, `det B`, `det C` and `det γ`.
pub fn to_standard_form(cm: &Mat4) -> Result<StandardFormCM> {
    let report = validate(cm);
    if !report.is_positive {
        return Err(Error::NonPhysical(report.messages.join("; ")));
    }
    let (ab, bb, cb) = blocks(cm);
    let a = det2(&ab).sqrt();
    let b = det2(&bb).sqrt();
    let det_c = det2(&cb);
    let det = det4(cm);
    let prod = a * b;
    // c₁², c₂² are the roots of t² − s t + det C² = 0.
    let s = (prod * prod + det_c * det_c - det) / prod;
    let p = det_c * det_c;
    let mut disc = s * s - 4.0 * p;
    let scale = s.abs().max(1.0).powi(2);
    if disc < 0.0 {
        if disc < -1e-9 * scale {
            return Err(Error::Degenerate(format!("discriminant {disc:e} < 0")));
        }
        disc = 0.0;
    }
    let x = 0.5 * (s + disc.sqrt());
    if x < -1e-9 * s.abs().max(1.0) {
        return Err(Error::Degenerate(format!("negative c1² = {x:e}")));
    }
    let x = x.max(0.0);
    let y = if x > 0.0 { p / x } else { 0.0 };
    let c1 = x.sqrt();
    let c2 = det_c.signum() * y.sqrt();
    let c2 = if det_c == 0.0 { 0.0 } else { c2 };
    Ok(StandardFormCM { a, b, c1, c2 })
}

/// Applies `S_A ⊕ S_B` to a covariance matrix: `γ ↦ S γ Sᵀ`.
pub fn apply_local(cm: &Mat4, sa: &Mat2, sb: &Mat2) -> Mat4 {
    let (a, b, c) = blocks(cm);
    let a2 = matmul2(&matmul2(sa, &a), &transpose2(sa));
    let b2 = matmul2(&matmul2(sb, &b), &transpose2(sb));
    let c2 = matmul2(&matmul2(sa, &c), &transpose2(sb));
    from_blocks(&a2, &b2, &c2)
}

/// Named state families, addressed by kebab-case name plus a parameter object.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", content = "params", rename_all = "kebab-case")]
pub enum Family {
    /// Two-mode squeezed vacuum, `a = b = cosh 2r`, `c₁ = −c₂ = sinh 2r`.
    PureTmsv { r: f64 },
    /// `c₁ = −c₂ = c`.
    SqueezedThermal { a: f64, b: f64, c: f64 },
    /// Symmetric squeezed thermal state with `c = cnorm·√(a² − 1)`, `cnorm ∈ [0, 1]`.
    StsSym { a: f64, cnorm: f64 },
    /// Uncorrelated thermal modes.
    Product { a: f64, b: f64 },
    /// Boundary family where Gaussian AMID meets two-way discord as `r → ∞`.
    Cmivette { s: f64, r: f64 },
    /// Symmetric, `c₂ = 0`, `c₁ = (a² − 1 − ln a)/a`: vanishing discord but diverging MID.
    Statistrani { a: f64 },
    /// Symmetric squeezed thermal, `c₁ = −c₂ = a − ν̃`.
    Gmems { a: f64, nu: f64 },
    /// Symmetric, `c₁ = a − (1+ν̃²)/(2a)`, `c₂ = a − 2a/(1+ν̃²)`.
    Glems { a: f64, nu: f64 },
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::PureTmsv { .. } => "pure-tmsv",
            Family::SqueezedThermal { .. } => "squeezed-thermal",
            Family::StsSym { .. } => "sts-sym",
            Family::Product { .. } => "product",
            Family::Cmivette { .. } => "cmivette",
            Family::Statistrani { .. } => "statistrani",
            Family::Gmems { .. } => "gmems",
            Family::Glems { .. } => "glems",
        }
    }

    /// Parameter names in the order used by [`Family::from_params`].
    pub fn param_names(name: &str) -> Option<&'static [&'static str]> {
        Some(match name {
            "pure-tmsv" => &["r"],
            "squeezed-thermal" => &["a", "b", "c"],
            "sts-sym" => &["a", "cnorm"],
            "product" => &["a", "b"],
            "cmivette" => &["s", "r"],
            "statistrani" => &["a"],
            "gmems" | "glems" => &["a", "nu"],
            _ => return None,
        })
    }

    /// Builds a family from its name and a parameter lookup.
    pub fn from_params(name: &str, get: impl Fn(&str) -> Option<f64>) -> Result<Self> {
        let names = Self::param_names(name)
            .ok_or_else(|| Error::Parse(format!("unknown family '{name}'")))?;
        let mut vals = Vec::with_capacity(names.len());
        for n in names {
            vals.push(get(n).ok_or_else(|| {
                Error::Parse(format!("family '{name}' requires parameter '{n}'"))
            })?);
        }
        Ok(match name {
            "pure-tmsv" => Family::PureTmsv { r: vals[0] },
            "squeezed-thermal" => Family::SqueezedThermal {
                a: vals[0],
                b: vals[1],
                c: vals[2],
            },
            "sts-sym" => Family::StsSym {
                a: vals[0],
                cnorm: vals[1],
            },
            "product" => Family::Product {
                a: vals[0],
                b: vals[1],
            },
            "cmivette" => Family::Cmivette {
                s: vals[0],
                r: vals[1],
            },
            "statistrani" => Family::Statistrani { a: vals[0] },
            "gmems" => Family::Gmems {
                a: vals[0],
                nu: vals[1],
            },
            _ => Family::Glems {
                a: vals[0],
                nu: vals[1],
            },
        })
    }

    pub fn params(&self) -> Vec<(&'static str, f64)> {
        match *self {
            Family::PureTmsv { r } => vec![("r", r)],
            Family::SqueezedThermal { a, b, c } => vec![("a", a), ("b", b), ("c", c)],
            Family::StsSym { a, cnorm } => vec![("a", a), ("cnorm", cnorm)],
            Family::Product { a, b } => vec![("a", a), ("b", b)],
            Family::Cmivette { s, r } => vec![("s", s), ("r", r)],
            Family::Statistrani { a } => vec![("a", a)],
            Family::Gmems { a, nu } | Family::Glems { a, nu } => vec![("a", a), ("nu", nu)],
        }
    }
}

fn require(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::OutOfRange(msg()))
    }
}

fn check_nu_range(a: f64, nu: f64) -> Result<()> {
    require(nu > 0.0 && nu.is_finite(), || format!("ν̃ = {nu} must be positive"))?;
    let lower = nu.max((1.0 + nu * nu) / (2.0 * nu));
    require(a >= lower * (1.0 - 1e-12), || {
        format!("a = {a} below the admissible minimum {lower} for ν̃ = {nu}")
    })
}

/// Constructs the standard form of a named family member.
pub fn make_family(family: &Family) -> Result<StandardFormCM> {
    let sf = match *family {
        Family::PureTmsv { r } => {
            require(r >= 0.0 && r.is_finite(), || format!("r = {r} must be ≥ 0"))?;
            let (ch, sh) = ((2.0 * r).cosh(), (2.0 * r).sinh());
            StandardFormCM {
                a: ch,
                b: ch,
                c1: sh,
                c2: -sh,
            }
        }
        Family::SqueezedThermal { a, b, c } => {
            require(a >= 1.0 && b >= 1.0, || format!("a = {a}, b = {b} must be ≥ 1"))?;
            require(c >= 0.0, || format!("c = {c} must be ≥ 0"))?;
            StandardFormCM { a, b, c1: c, c2: -c }
        }
        Family::StsSym { a, cnorm } => {
            require(a >= 1.0, || format!("a = {a} must be ≥ 1"))?;
            require((0.0..=1.0).contains(&cnorm), || {
                format!("cnorm = {cnorm} must lie in [0, 1]")
            })?;
            let c = cnorm * (a * a - 1.0).sqrt();
            StandardFormCM {
                a,
                b: a,
                c1: c,
                c2: -c,
            }
        }
        Family::Product { a, b } => {
            require(a >= 1.0 && b >= 1.0, || format!("a = {a}, b = {b} must be ≥ 1"))?;
            StandardFormCM { a, b, c1: 0.0, c2: 0.0 }
        }
        Family::Cmivette { s, r } => {
            require(s >= 0.0 && r >= 0.0, || format!("s = {s}, r = {r} must be ≥ 0"))?;
            let ch2s = (2.0 * s).cosh();
            let c = r.cosh() * (2.0 * s).sinh();
            StandardFormCM {
                a: ch2s,
                b: r.cosh().powi(2) * ch2s + r.sinh().powi(2),
                c1: c,
                c2: -c,
            }
        }
        Family::Statistrani { a } => {
            require(a >= 1.0, || format!("a = {a} must be ≥ 1"))?;
            StandardFormCM {
                a,
                b: a,
                c1: (a * a - 1.0 - a.ln()) / a,
                c2: 0.0,
            }
        }
        Family::Gmems { a, nu } => {
            check_nu_range(a, nu)?;
            StandardFormCM {
                a,
                b: a,
                c1: a - nu,
                c2: -(a - nu),
            }
        }
        Family::Glems { a, nu } => {
            check_nu_range(a, nu)?;
            let t = 1.0 + nu * nu;
            StandardFormCM {
                a,
                b: a,
                c1: a - t / (2.0 * a),
                c2: a - 2.0 * a / t,
            }
        }
    };
    sf.check().map_err(|e| match e {
        Error::NonPhysical(m) => Error::OutOfRange(format!("{}: {m}", family.name())),
        other => other,
    })?;
    Ok(sf)
}

/// Partial-transpose spectrum for an arbitrary covariance matrix.
pub fn pt_spectrum(cm: &Mat4) -> Result<SymplecticSpectrum> {
    partial_transpose_eigenvalues(cm)
}
