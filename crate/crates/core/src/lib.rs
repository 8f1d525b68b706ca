//! Entropic correlation measures for two-mode Gaussian states.
//!
//! States are described by covariance matrices in standard form. The crate
//! computes the quantum mutual information, the measurement-induced
//! disturbance under local photon counting (MID), the Gaussian ameliorated
//! MID, Gaussian discord, and the Gaussian entanglement of formation of
//! symmetric states. All quantities are in nats.

pub mod entropy;
pub mod eof;
pub mod error;
pub mod fock;
pub mod linalg;
pub mod poly;
pub mod povm;
mod real;
pub mod report;
pub mod sampler;
pub mod state;

pub use entropy::{entropy_f, global_entropy, quantum_mutual_information};
pub use eof::{check_sandwich, eof_symmetric, gamid_upper_bound, EofParams, SandwichReport};
pub use error::{Error, Result};
pub use fock::{joint_photon_distribution, mid, FockOptions, JointPhotonDistribution, MidResult};
pub use linalg::{Mat2, Mat4, SymplecticSpectrum};
pub use povm::{
    gaussian_amid, gaussian_classical_mi, gaussian_discord, two_way_discord, DiscordDirection, GaussianSeedPair,
    OptBranch, OptResult, PovmOptions,
};
pub use report::{measure_report, mid_minus_amid, threshold, MeasureReport, ReportOptions, ThresholdRow, Units};
pub use sampler::{random_state, PurityMode, Sampler, SamplerConfig};
pub use state::{make_family, to_standard_form, validate, Family, PhysicalityReport, StandardFormCM};
