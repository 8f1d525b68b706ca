//! Aggregated measures for one state, and the `M = A^G` threshold search on
//! symmetric squeezed thermal states.

use serde::{Deserialize, Serialize};

use crate::entropy::quantum_mutual_information;
use crate::eof::{eof_symmetric, EofParams};
use crate::error::{Error, Result};
use crate::fock::{mid_with, FockOptions, MidMethod};
use crate::povm::{
    gaussian_classical_mi_with, gaussian_discord_with, DiscordBranch, DiscordDirection, GaussianSeedPair,
    OptBranch, PovmOptions,
};
use crate::state::{make_family, Family, StandardFormCM};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Units {
    #[default]
    Nats,
    Bits,
}

impl Units {
    /// Multiplier from nats.
    pub fn factor(self) -> f64 {
        match self {
            Units::Nats => 1.0,
            Units::Bits => 1.0 / std::f64::consts::LN_2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
pub struct ReportOptions {
    pub fock: FockOptions,
    pub povm: PovmOptions,
}

impl ReportOptions {
    pub fn new(tail_tol: f64, max_cutoff: usize, opt_tol: f64) -> Self {
        Self {
            fock: FockOptions {
                tail_tol,
                max_cutoff,
                ..FockOptions::for_mid()
            },
            povm: PovmOptions {
                opt_tol,
                ..PovmOptions::default()
            },
        }
    }

    pub(crate) fn defaults() -> Self {
        Self {
            fock: FockOptions::for_mid(),
            povm: PovmOptions::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BranchTags {
    pub mid: MidMethod,
    pub gaussian: OptBranch,
    pub discord_left: DiscordBranch,
    pub discord_right: DiscordBranch,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub tail_tol: f64,
    pub max_cutoff: usize,
    pub opt_tol: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeasureReport {
    pub state: StandardFormCM,
    pub units: Units,
    pub i_q: f64,
    pub mid: f64,
    pub i_c_fock: f64,
    pub a_g: f64,
    pub i_c_g: f64,
    pub d_left: f64,
    pub d_right: f64,
    pub d_twoway: f64,
    /// Only for symmetric states.
    pub e_f_g: Option<f64>,
    pub seeds: GaussianSeedPair,
    pub branches: BranchTags,
    pub mid_cutoff: usize,
    pub mid_tail_mass: f64,
    pub tolerances: Tolerances,
}

impl MeasureReport {
    pub fn compute(sf: &StandardFormCM, opts: &ReportOptions) -> Result<Self> {
        let i_q = quantum_mutual_information(sf)?;
        let mid = mid_with(sf, &opts.fock)?;
        let ic = gaussian_classical_mi_with(sf, &opts.povm)?;
        let dl = gaussian_discord_with(sf, DiscordDirection::Left, &opts.povm)?;
        let dr = gaussian_discord_with(sf, DiscordDirection::Right, &opts.povm)?;
        let e_f_g = if sf.is_symmetric(1e-12) {
            Some(eof_symmetric(EofParams::from_state(sf)?.nu_tilde)?)
        } else {
            None
        };
        let a_g = if ic.branch == OptBranch::Product {
            0.0
        } else {
            (i_q - ic.value).max(0.0)
        };
        Ok(Self {
            state: *sf,
            units: Units::Nats,
            i_q,
            mid: mid.value,
            i_c_fock: (i_q - mid.value).max(0.0),
            a_g,
            i_c_g: ic.value,
            d_left: dl.value,
            d_right: dr.value,
            d_twoway: dl.value.max(dr.value),
            e_f_g,
            seeds: ic.seeds,
            branches: BranchTags {
                mid: mid.method,
                gaussian: ic.branch,
                discord_left: dl.branch,
                discord_right: dr.branch,
            },
            mid_cutoff: mid.cutoff,
            mid_tail_mass: mid.tail_mass,
            tolerances: Tolerances {
                tail_tol: opts.fock.tail_tol,
                max_cutoff: opts.fock.max_cutoff,
                opt_tol: opts.povm.opt_tol,
            },
        })
    }

    /// Rescales every information quantity from nats.
    pub fn in_units(mut self, units: Units) -> Self {
        let k = units.factor() / self.units.factor();
        for v in [
            &mut self.i_q,
            &mut self.mid,
            &mut self.i_c_fock,
            &mut self.a_g,
            &mut self.i_c_g,
            &mut self.d_left,
            &mut self.d_right,
            &mut self.d_twoway,
        ] {
            *v *= k;
        }
        self.e_f_g = self.e_f_g.map(|e| e * k);
        self.units = units;
        self
    }

    /// Pairs that must satisfy `D^↔ ≤ A^G` and `D^↔ ≤ M`, as `(violation of
    /// the first, violation of the second)`; positive entries are violations.
    pub fn hierarchy_excess(&self) -> (f64, f64) {
        (self.d_twoway - self.a_g, self.d_twoway - self.mid)
    }
}

pub fn measure_report(sf: &StandardFormCM) -> Result<MeasureReport> {
    MeasureReport::compute(sf, &ReportOptions::defaults())
}

/// `M − A^G` on the symmetric squeezed thermal state `(a, cnorm)`.
pub fn mid_minus_amid(a: f64, cnorm: f64, opts: &ReportOptions) -> Result<f64> {
    let sf = make_family(&Family::StsSym { a, cnorm })?;
    let m = mid_with(&sf, &opts.fock)?.value;
    let ic = gaussian_classical_mi_with(&sf, &opts.povm)?.value;
    let ag = (quantum_mutual_information(&sf)? - ic).max(0.0);
    Ok(m - ag)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThresholdRow {
    pub a: f64,
    /// `(a − 1)/a`.
    pub x: f64,
    /// `c*/√(a² − 1)`.
    pub cnorm_star: f64,
    pub c_star: f64,
    /// `M − A^G` at the pure endpoint.
    pub pure_gap: f64,
}

const THRESHOLD_SCAN: usize = 50;

/// Smallest `c` with `M = A^G` on symmetric squeezed thermal states with
/// local covariance `a`: a coarse scan for the first sign change of `M − A^G`
/// followed by bisection.
pub fn threshold(a: f64, opts: &ReportOptions) -> Result<ThresholdRow> {
    if !(a > 1.0 && a.is_finite()) {
        return Err(Error::OutOfRange(format!("a = {a} must be > 1")));
    }
    let f = |x: f64| mid_minus_amid(a, x, opts);
    let pure_gap = f(1.0)?;
    let mut prev = (1.0 / THRESHOLD_SCAN as f64, f(1.0 / THRESHOLD_SCAN as f64)?);
    let mut bracket = None;
    for k in 2..=THRESHOLD_SCAN {
        let x = k as f64 / THRESHOLD_SCAN as f64;
        let v = if k == THRESHOLD_SCAN { pure_gap } else { f(x)? };
        if prev.1 > 0.0 && v <= 0.0 {
            bracket = Some((prev.0, x));
            break;
        }
        prev = (x, v);
    }
    let (mut lo, mut hi) = bracket.ok_or(Error::NoCrossing { a })?;
    while hi - lo > 1e-10 {
        let mid = 0.5 * (lo + hi);
        if f(mid)? > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let cnorm_star = 0.5 * (lo + hi);
    Ok(ThresholdRow {
        a,
        x: (a - 1.0) / a,
        cnorm_star,
        c_star: cnorm_star * (a * a - 1.0).sqrt(),
        pure_gap,
    })
}
