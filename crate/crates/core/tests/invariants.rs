//! Property tests over random physical states.

use nalgebra::{Matrix4, SymmetricEigen};
use proptest::prelude::*;

use gaussdisturb_core::entropy::quantum_mutual_information_cm;
use gaussdisturb_core::linalg::symplectic_eigenvalues;
use gaussdisturb_core::povm::classical_mi_at_seed;
use gaussdisturb_core::state::apply_local;
use gaussdisturb_core::{
    gaussian_amid, gaussian_classical_mi, gaussian_discord, mid, quantum_mutual_information,
    to_standard_form, DiscordDirection, GaussianSeedPair, Mat2, Mat4, StandardFormCM,
};

/// Physical standard forms with `a, b ∈ [1, 8]`.
fn state() -> impl Strategy<Value = StandardFormCM> {
    (1.0f64..8.0, 1.0f64..8.0, 0.0f64..1.0, -1.0f64..1.0).prop_filter_map("nonphysical", |(a, b, u, v)| {
        let m = (a * b).sqrt();
        let c1 = u * m;
        StandardFormCM::new(a, b, c1, v * c1).ok()
    })
}

fn local(r: f64, phi: f64) -> Mat2 {
    let (s, c) = phi.sin_cos();
    let (e, ie) = (r.exp(), (-r).exp());
    // rotation times diagonal squeezing
    [[c * e, -s * ie], [s * e, c * ie]]
}

fn to_na(m: &Mat4) -> Matrix4<f64> {
    Matrix4::from_fn(|i, j| m[i][j])
}

/// `ν±²` as the doubly degenerate eigenvalues of `γ^{1/2} Ωᵀ γ Ω γ^{1/2}`.
fn nalgebra_spectrum(m: &Mat4) -> (f64, f64) {
    let g = to_na(m);
    let e = SymmetricEigen::new(g);
    let root = e.eigenvectors * Matrix4::from_diagonal(&e.eigenvalues.map(f64::sqrt)) * e.eigenvectors.transpose();
    let w = Matrix4::new(0., 1., 0., 0., -1., 0., 0., 0., 0., 0., 0., 1., 0., 0., -1., 0.);
    let k = root * w.transpose() * g * w * root;
    let mut ev: Vec<f64> = SymmetricEigen::new((k + k.transpose()) * 0.5).eigenvalues.iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    (((ev[2] + ev[3]) * 0.5).sqrt(), ((ev[0] + ev[1]) * 0.5).sqrt())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn spectrum_matches_nalgebra(sf in state(), ra in -1.0f64..1.0, rb in -1.0f64..1.0, pa in 0.0f64..6.3, pb in 0.0f64..6.3) {
        let cm = apply_local(&sf.to_cm(), &local(ra, pa), &local(rb, pb));
        let s = symplectic_eigenvalues(&cm).unwrap();
        let (p, m) = nalgebra_spectrum(&cm);
        let scale = cm.iter().flatten().fold(1.0f64, |x, v| x.max(v.abs()));
        prop_assert!((s.nu_plus - p).abs() < 1e-9 * scale * scale);
        prop_assert!((s.nu_minus - m).abs() < 1e-9 * scale * scale);
    }

    #[test]
    fn standard_form_round_trip(sf in state(), ra in -0.8f64..0.8, rb in -0.8f64..0.8, pa in 0.0f64..6.3, pb in 0.0f64..6.3) {
        let cm = apply_local(&sf.to_cm(), &local(ra, pa), &local(rb, pb));
        let back = to_standard_form(&cm).unwrap();
        let tol = 1e-7 * sf.a.max(sf.b);
        prop_assert!((back.a - sf.a).abs() < tol && (back.b - sf.b).abs() < tol, "{back:?} vs {sf:?}");
        prop_assert!((back.c1 - sf.c1).abs() < tol && (back.c2 - sf.c2).abs() < tol, "{back:?} vs {sf:?}");
        let iq = quantum_mutual_information(&sf).unwrap();
        prop_assert!((quantum_mutual_information_cm(&cm).unwrap() - iq).abs() < 1e-7 * iq.max(1.0));
    }

    #[test]
    fn gaussian_measures_ordered(sf in state()) {
        let iq = quantum_mutual_information(&sf).unwrap();
        let ic = gaussian_classical_mi(&sf).unwrap().value;
        let ag = gaussian_amid(&sf).unwrap().value;
        let dl = gaussian_discord(&sf, DiscordDirection::Left).unwrap().value;
        let dr = gaussian_discord(&sf, DiscordDirection::Right).unwrap().value;
        prop_assert!(iq >= 0.0 && ic >= -1e-12 && ic <= iq + 1e-9);
        prop_assert!(dl >= -1e-9 && dr >= -1e-9);
        prop_assert!(dl.max(dr) <= ag + 1e-9, "D = {} > A = {ag}", dl.max(dr));
    }

    #[test]
    fn optimum_beats_any_seed(sf in state(), ra in 0.0f64..3.0, rb in 0.0f64..3.0, ta in 0.0f64..3.2, tb in 0.0f64..3.2) {
        let best = gaussian_classical_mi(&sf).unwrap().value;
        let at = classical_mi_at_seed(&sf, &GaussianSeedPair::new(ra, rb, ta, tb).unwrap()).unwrap();
        prop_assert!(at <= best + 1e-9, "seed value {at} > optimum {best}");
    }

    #[test]
    fn swap_symmetry(sf in state()) {
        let sw = sf.swapped();
        let a = gaussian_amid(&sf).unwrap().value;
        prop_assert!((gaussian_amid(&sw).unwrap().value - a).abs() < 1e-9 * a.max(1.0));
        let dl = gaussian_discord(&sf, DiscordDirection::Left).unwrap().value;
        let dr_sw = gaussian_discord(&sw, DiscordDirection::Right).unwrap().value;
        prop_assert!((dl - dr_sw).abs() < 1e-9 * dl.max(1.0));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn mid_bounds(sf in state()) {
        let m = mid(&sf, 1e-10).unwrap().value;
        let iq = quantum_mutual_information(&sf).unwrap();
        let dl = gaussian_discord(&sf, DiscordDirection::Left).unwrap().value;
        let dr = gaussian_discord(&sf, DiscordDirection::Right).unwrap().value;
        prop_assert!(m >= -1e-12 && m <= iq + 1e-9, "M = {m}, I_q = {iq}");
        prop_assert!(dl.max(dr) <= m + 1e-9);
    }
}
