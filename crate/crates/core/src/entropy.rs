//! Von Neumann entropy of Gaussian states and the quantum mutual information.
//! All values are in nats.

use crate::error::{Error, Result};
use crate::linalg::{phys_tol, symplectic_eigenvalues, Mat4, PHYS_TOL};
use crate::state::{to_standard_form, StandardFormCM};

/// Below this distance from one a symplectic eigenvalue counts as pure.
const PURE_EPS: f64 = 1e-12;

/// Entropy of a single-mode Gaussian state with symplectic eigenvalue `x`:
/// `((x+1)/2) ln((x+1)/2) − ((x−1)/2) ln((x−1)/2)`.
pub fn entropy_f(x: f64) -> Result<f64> {
    if !(x >= 1.0 - PHYS_TOL) {
        return Err(Error::Domain {
            func: "entropy_f",
            arg: "x",
            value: x,
        });
    }
    let x = x.max(1.0);
    if x - 1.0 <= PURE_EPS {
        return Ok(0.0);
    }
    let p = 0.5 * (x + 1.0);
    let m = 0.5 * (x - 1.0);
    // p ln p − m ln m, with ln p written as ln(1 + m) for accuracy near x = 1.
    Ok(p * m.ln_1p() - m * m.ln())
}

/// `F` for values already known to be physical; clamps round-off.
pub(crate) fn entropy_f_clamped(x: f64) -> f64 {
    entropy_f(x.max(1.0)).unwrap_or(0.0)
}

/// `F` of a symplectic eigenvalue known only to within `tol`: values that
/// cannot be told apart from one count as pure.
pub(crate) fn entropy_f_resolved(x: f64, tol: f64) -> f64 {
    if x - 1.0 <= tol {
        0.0
    } else {
        entropy_f_clamped(x)
    }
}

/// `I_q = F(a) + F(b) − F(ν₊) − F(ν₋)`.
pub fn quantum_mutual_information(sf: &StandardFormCM) -> Result<f64> {
    let s = sf.spectrum()?;
    if s.nu_minus < 1.0 - sf.tol() {
        return Err(Error::NonPhysical(format!("ν₋ = {}", s.nu_minus)));
    }
    if sf.c1 == 0.0 && sf.c2 == 0.0 {
        return Ok(0.0);
    }
    let iq = entropy_f(sf.a)? + entropy_f(sf.b)?
        - entropy_f_resolved(s.nu_plus, sf.tol())
        - entropy_f_resolved(s.nu_minus, sf.tol());
    Ok(iq.max(0.0))
}

/// Mutual information of an arbitrary (not necessarily standard-form) CM.
pub fn quantum_mutual_information_cm(cm: &Mat4) -> Result<f64> {
    quantum_mutual_information(&to_standard_form(cm)?)
}

/// Total von Neumann entropy `F(ν₊) + F(ν₋)`.
pub fn global_entropy(cm: &Mat4) -> Result<f64> {
    let s = symplectic_eigenvalues(cm)?;
    let scale = cm.iter().flatten().fold(1.0_f64, |m, v| m.max(v.abs()));
    if s.nu_minus < 1.0 - phys_tol(scale) {
        return Err(Error::NonPhysical(format!("ν₋ = {}", s.nu_minus)));
    }
    let tol = phys_tol(scale);
    Ok(entropy_f_resolved(s.nu_plus, tol) + entropy_f_resolved(s.nu_minus, tol))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::{make_family, Family};
    use approx::assert_relative_eq;

    #[test]
    fn f_values() {
        assert_eq!(entropy_f(1.0).unwrap(), 0.0);
        assert_relative_eq!(entropy_f(3.0).unwrap(), 2.0 * 2.0_f64.ln(), max_relative = 1e-15);
        // cosh²(1) ln cosh²(1) − sinh²(1) ln sinh²(1)
        assert_relative_eq!(
            entropy_f(2.0_f64.cosh()).unwrap(),
            1.619_822_092_897_702_5,
            max_relative = 1e-14
        );
    }

    #[test]
    fn f_domain() {
        assert!(matches!(entropy_f(0.5), Err(Error::Domain { .. })));
        assert_eq!(entropy_f(1.0 - 1e-11).unwrap(), 0.0);
    }

    #[test]
    fn f_monotone() {
        let mut prev = 0.0;
        for i in 1..200 {
            let v = entropy_f(1.0 + 0.05 * i as f64).unwrap();
            assert!(v > prev);
            prev = v;
        }
    }

    #[test]
    fn mutual_information_examples() {
        let prod = StandardFormCM::new(2.0, 3.0, 0.0, 0.0).unwrap();
        assert_eq!(quantum_mutual_information(&prod).unwrap(), 0.0);

        let tmsv = make_family(&Family::PureTmsv { r: 1.0 }).unwrap();
        assert_relative_eq!(
            quantum_mutual_information(&tmsv).unwrap(),
            2.0 * 1.619_822_092_897_702_5,
            max_relative = 1e-9
        );
    }

    #[test]
    fn mutual_information_symmetric_c2_zero() {
        // a = b = 2, c1 = 1, c2 = 0: det γ = 12, Δ = 8, ν±² = 4 ± 2.
        let sf = StandardFormCM::new(2.0, 2.0, 1.0, 0.0).unwrap();
        let want = 2.0 * entropy_f(2.0).unwrap()
            - entropy_f(6.0_f64.sqrt()).unwrap()
            - entropy_f(2.0_f64.sqrt()).unwrap();
        assert_relative_eq!(quantum_mutual_information(&sf).unwrap(), want, max_relative = 1e-13);
        assert_relative_eq!(want, 0.182_795_589_816_516_95, max_relative = 1e-9);
    }
}
