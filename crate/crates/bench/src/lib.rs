//! Benchmark fixtures shared by the criterion targets.

use gaussdisturb_core::{make_family, Family, StandardFormCM};

/// Named states covering the optimizer branches and a range of MID cutoffs.
pub fn fixtures() -> Vec<(&'static str, StandardFormCM)> {
    [
        ("pure-tmsv-r1", Family::PureTmsv { r: 1.0 }),
        ("sts-sym-a2", Family::StsSym { a: 2.0, cnorm: 0.7 }),
        ("squeezed-thermal", Family::SqueezedThermal { a: 3.0, b: 5.0, c: 2.5 }),
        ("gmems-a5", Family::Gmems { a: 5.0, nu: 0.3 }),
        ("glems-a5", Family::Glems { a: 5.0, nu: 0.3 }),
        ("statistrani-a10", Family::Statistrani { a: 10.0 }),
    ]
    .into_iter()
    .map(|(name, f)| (name, make_family(&f).expect("fixture is physical")))
    .collect()
}

/// A generic mixed state, neither symmetric nor squeezed thermal.
pub fn generic() -> StandardFormCM {
    StandardFormCM::new(3.0, 5.0, 2.0, -1.2).expect("fixture is physical")
}
