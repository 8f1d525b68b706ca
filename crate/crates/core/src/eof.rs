//! Gaussian entanglement of formation of symmetric states and its bounds
//! against the Gaussian AMID.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::povm::gaussian_amid;
use crate::state::StandardFormCM;

/// Absolute slack for the inequality checks.
pub const SANDWICH_TOL: f64 = 1e-8;

/// `ν̃` at which the two upper-bound branches meet.
pub fn upper_bound_split() -> f64 {
    4.0 / std::f64::consts::E - 1.0
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EofParams {
    pub nu_tilde: f64,
}

impl EofParams {
    pub fn new(nu_tilde: f64) -> Result<Self> {
        if !(nu_tilde > 0.0) {
            return Err(Error::OutOfRange(format!("ν̃ = {nu_tilde} must be > 0")));
        }
        Ok(Self { nu_tilde })
    }

    /// Smallest partially transposed symplectic eigenvalue of a symmetric state.
    pub fn from_state(sf: &StandardFormCM) -> Result<Self> {
        if !sf.is_symmetric(1e-12) {
            return Err(Error::OutOfRange(format!(
                "symmetric state required, got a = {}, b = {}",
                sf.a, sf.b
            )));
        }
        Self::new(sf.pt_spectrum()?.nu_minus)
    }

    pub fn is_entangled(&self) -> bool {
        self.nu_tilde < 1.0
    }
}

/// Gaussian EoF of a symmetric state with partially transposed symplectic
/// eigenvalue `ν̃`, in nats.
pub fn eof_symmetric(nu: f64) -> Result<f64> {
    EofParams::new(nu)?;
    if nu >= 1.0 {
        return Ok(0.0);
    }
    let p = (1.0 + nu).powi(2);
    let m = (1.0 - nu).powi(2);
    let q = 4.0 * nu;
    Ok(((p * (p / q).ln() - m * (m / q).ln()) / q).max(0.0))
}

/// Upper bound on the Gaussian AMID at fixed Gaussian EoF: the larger of
/// `1 + 2 ln(1+ν̃) − ln(4ν̃)` and `ln(1+ν̃) − ln ν̃`.
pub fn gamid_upper_bound(nu: f64) -> Result<f64> {
    if !(nu > 0.0 && nu <= 1.0) {
        return Err(Error::OutOfRange(format!("ν̃ = {nu} outside (0, 1]")));
    }
    let moderate = 1.0 + 2.0 * nu.ln_1p() - (4.0 * nu).ln();
    let strong = nu.ln_1p() - nu.ln();
    Ok(moderate.max(strong))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SandwichReport {
    pub nu_tilde: f64,
    pub eof: f64,
    pub amid: f64,
    /// `E_f^G ≤ A^G`.
    pub lower_holds: bool,
    /// Whether `E_f^G` is large enough for the upper relation to be claimed.
    pub upper_applicable: bool,
    /// `A^G ≤ E_f^G + ln 4 − 1` (vacuously true when not applicable).
    pub upper_holds: bool,
    /// `A^G` below the two-branch bound at fixed `ν̃` (entangled states only).
    pub within_gamid_bound: bool,
}

/// Evaluates `E_f^G ≤ A^G ≤ E_f^G + ln 4 − 1` on a symmetric state.
pub fn check_sandwich(sf: &StandardFormCM) -> Result<SandwichReport> {
    let params = EofParams::from_state(sf)?;
    let eof = eof_symmetric(params.nu_tilde)?;
    let amid = gaussian_amid(sf)?.value;
    let applicable = params.is_entangled() && eof >= eof_symmetric(upper_bound_split())?;
    Ok(SandwichReport {
        nu_tilde: params.nu_tilde,
        eof,
        amid,
        lower_holds: eof <= amid + SANDWICH_TOL,
        upper_applicable: applicable,
        upper_holds: !applicable || amid <= eof + 4f64.ln() - 1.0 + SANDWICH_TOL,
        within_gamid_bound: !params.is_entangled() || amid <= gamid_upper_bound(params.nu_tilde)? + SANDWICH_TOL,
    })
}
