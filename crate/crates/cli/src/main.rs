mod input;
mod table;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::bail;
use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use gaussdisturb_core::{
    make_family, threshold, Error, Family, FockOptions, MeasureReport, PovmOptions, PurityMode,
    ReportOptions, Sampler, SamplerConfig, StandardFormCM, Units,
};

use crate::input::{family_from_flags, grid, FamilyParams, StateArgs};
use crate::table::{blank_state, measure_cells, num, open_output, state_cells, write_csv};

/// Invalid command-line input; exits with code 2.
#[derive(Debug)]
pub struct Usage(pub String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

#[derive(Parser, Debug)]
#[command(name = "gaussdisturb", version, about = "Correlation and disturbance measures of two-mode Gaussian states")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// All measures of one state, as JSON
    Measures(MeasuresArgs),
    /// Measures along a one-parameter slice of a family, as CSV
    Sweep(SweepArgs),
    /// Measures of randomly sampled states plus boundary-family curves, as CSV
    Scatter(ScatterArgs),
    /// Threshold c*(a) where MID equals Gaussian AMID on symmetric squeezed thermal states, as CSV
    Threshold(ThresholdArgs),
}

#[derive(ValueEnum, Debug, Clone, Copy, Default)]
enum UnitsArg {
    #[default]
    Nats,
    Bits,
}

impl From<UnitsArg> for Units {
    fn from(u: UnitsArg) -> Self {
        match u {
            UnitsArg::Nats => Units::Nats,
            UnitsArg::Bits => Units::Bits,
        }
    }
}

#[derive(Args, Debug, Clone)]
struct CommonArgs {
    /// Output file (default: stdout)
    #[arg(long)]
    out: Option<PathBuf>,

    #[arg(long, value_enum, default_value_t = UnitsArg::Nats)]
    units: UnitsArg,

    /// Photon-number tail mass tolerance for MID
    #[arg(long, default_value_t = FockOptions::for_mid().tail_tol)]
    tail_tol: f64,

    /// Largest photon-number cutoff for MID
    #[arg(long, default_value_t = FockOptions::for_mid().max_cutoff)]
    max_cutoff: usize,

    /// Tolerance of the Gaussian measurement optimizer cross-check
    #[arg(long, default_value_t = PovmOptions::default().opt_tol)]
    opt_tol: f64,
}

impl CommonArgs {
    fn options(&self) -> anyhow::Result<ReportOptions> {
        if !(self.tail_tol > 0.0 && self.tail_tol < 1.0) {
            bail!(Usage(format!("--tail-tol {} must lie in (0, 1)", self.tail_tol)));
        }
        if !(self.opt_tol > 0.0 && self.opt_tol.is_finite()) {
            bail!(Usage(format!("--opt-tol {} must be positive", self.opt_tol)));
        }
        if self.max_cutoff < 1 {
            bail!(Usage("--max-cutoff must be at least 1".into()));
        }
        Ok(ReportOptions::new(self.tail_tol, self.max_cutoff, self.opt_tol))
    }
}

#[derive(Args, Debug)]
struct MeasuresArgs {
    #[command(flatten)]
    state: StateArgs,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[arg(long)]
    family: String,
    #[command(flatten)]
    params: FamilyParams,
    /// Parameter to vary; the others are fixed by their flags
    #[arg(long)]
    vary: String,
    #[arg(long, allow_hyphen_values = true)]
    from: f64,
    #[arg(long, allow_hyphen_values = true)]
    to: f64,
    #[arg(long, default_value_t = 50)]
    steps: usize,
    /// Geometric spacing
    #[arg(long)]
    log: bool,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(ValueEnum, Debug, Clone, Copy)]
enum PurityArg {
    Mixed,
    Pure,
    SymmetricSts,
}

impl From<PurityArg> for PurityMode {
    fn from(p: PurityArg) -> Self {
        match p {
            PurityArg::Mixed => PurityMode::Mixed,
            PurityArg::Pure => PurityMode::Pure,
            PurityArg::SymmetricSts => PurityMode::SymmetricSts,
        }
    }
}

#[derive(Args, Debug)]
struct ScatterArgs {
    /// Number of sampled states
    #[arg(long, default_value_t = 1000)]
    n: usize,
    #[arg(long, default_value_t = SamplerConfig::default().seed)]
    seed: u64,
    #[arg(long, default_value_t = SamplerConfig::default().a_max)]
    a_max: f64,
    #[arg(long, default_value_t = SamplerConfig::default().b_max)]
    b_max: f64,
    #[arg(long, value_enum, default_value_t = PurityArg::Mixed)]
    purity: PurityArg,
    /// Points per boundary-family curve (0 disables the overlay)
    #[arg(long, default_value_t = 25)]
    overlay: usize,
    /// Squeezing r of the cmivette overlay curve
    #[arg(long, default_value_t = 3.0)]
    cmivette_r: f64,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args, Debug)]
struct ThresholdArgs {
    #[arg(long, default_value_t = 1.05)]
    a_from: f64,
    #[arg(long, default_value_t = 20.0)]
    a_to: f64,
    #[arg(long, default_value_t = 20)]
    steps: usize,
    /// Geometric spacing in a
    #[arg(long)]
    log: bool,
    #[command(flatten)]
    common: CommonArgs,
}

fn thread_pool() -> anyhow::Result<rayon::ThreadPool> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var("GAUSSDISTURB_THREADS") {
        let n: usize = v
            .trim()
            .parse()
            .map_err(|_| Usage(format!("GAUSSDISTURB_THREADS = {v:?} is not a count")))?;
        b = b.num_threads(n);
    }
    Ok(b.build()?)
}

/// Evaluates `f` over `items` on the worker pool, keeping input order.
fn par_rows<T: Sync, R: Send>(items: &[T], f: impl Fn(&T) -> R + Sync + Send) -> anyhow::Result<Vec<R>> {
    let pool = thread_pool()?;
    Ok(pool.install(|| items.par_iter().map(f).collect()))
}

fn report_row(sf: &StandardFormCM, opts: &ReportOptions) -> Result<MeasureReport, String> {
    MeasureReport::compute(sf, opts).map_err(|e| e.to_string())
}

fn header(lead: &[&str], tail: &[&str]) -> Vec<String> {
    lead.iter().chain(tail).map(|s| s.to_string()).collect()
}

fn cmd_measures(args: &MeasuresArgs) -> anyhow::Result<()> {
    let opts = args.common.options()?;
    let sf = args.state.resolve()?;
    let report = MeasureReport::compute(&sf, &opts)?.in_units(args.common.units.into());
    let mut out = open_output(args.common.out.as_deref())?;
    serde_json::to_writer_pretty(&mut out, &report)?;
    writeln!(out)?;
    out.flush()?;
    Ok(())
}

fn cmd_sweep(args: &SweepArgs) -> anyhow::Result<()> {
    let opts = args.common.options()?;
    let names = Family::param_names(&args.family)
        .ok_or_else(|| Usage(format!("unknown family '{}'", args.family)))?;
    if !names.contains(&args.vary.as_str()) {
        bail!(Usage(format!(
            "family '{}' has no parameter '{}' (expected one of {})",
            args.family,
            args.vary,
            names.join(", ")
        )));
    }
    let xs = grid(args.from, args.to, args.steps, args.log)?;
    let mut families = Vec::with_capacity(xs.len());
    for &x in &xs {
        let mut p = args.params.clone();
        set_param(&mut p, &args.vary, x);
        families.push(family_from_flags(&args.family, &p)?);
    }
    let units = args.common.units.into();
    let rows = par_rows(&families, |f| {
        let mut row = vec![f.name().to_string()];
        row.extend(f.params().iter().map(|&(_, v)| num(v)));
        match make_family(f) {
            Ok(sf) => {
                row.extend(state_cells(&sf));
                row.extend(measure_cells(&report_row(&sf, &opts), units));
            }
            Err(e) => {
                row.extend(blank_state());
                row.extend(measure_cells(&Err(e.to_string()), units));
            }
        }
        row
    })?;
    let params: Vec<String> = names.iter().map(|n| format!("param_{n}")).collect();
    let mut lead = vec!["family"];
    lead.extend(params.iter().map(String::as_str));
    lead.extend(table::STATE_COLUMNS);
    let mut out = open_output(args.common.out.as_deref())?;
    write_csv(&mut out, units, &header(&lead, &table::MEASURE_COLUMNS), &rows)
}

fn set_param(p: &mut FamilyParams, name: &str, v: f64) {
    let slot = match name {
        "r" => &mut p.r,
        "a" => &mut p.a,
        "b" => &mut p.b,
        "c" => &mut p.c,
        "cnorm" => &mut p.cnorm,
        "s" => &mut p.s,
        _ => &mut p.nu,
    };
    *slot = Some(v);
}

/// Boundary-family curves drawn over the scatter.
fn overlay_families(args: &ScatterArgs) -> anyhow::Result<Vec<Family>> {
    let n = args.overlay;
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut v = Vec::new();
    let r_max = 0.5 * args.a_max.min(args.b_max).acosh();
    v.extend(grid(0.0, r_max, n, false)?.into_iter().map(|r| Family::PureTmsv { r }));
    let r = args.cmivette_r;
    if !(r >= 0.0 && r.is_finite()) {
        bail!(Usage(format!("--cmivette-r {r} must be ≥ 0")));
    }
    v.extend(grid(0.0, r_max, n, false)?.into_iter().map(|s| Family::Cmivette { s, r }));
    let a = args.a_max.min(args.b_max);
    if a > 1.0 {
        let nu_min = a - (a * a - 1.0).sqrt();
        let nus = grid(nu_min, 1.0, n + 1, false)?;
        for &nu in &nus[1..] {
            v.push(Family::Gmems { a, nu });
        }
        for &nu in &nus[1..] {
            v.push(Family::Glems { a, nu });
        }
    }
    Ok(v)
}

fn cmd_scatter(args: &ScatterArgs) -> anyhow::Result<()> {
    let opts = args.common.options()?;
    if args.n == 0 {
        bail!(Usage("--n must be at least 1".into()));
    }
    let cfg = SamplerConfig {
        a_max: args.a_max,
        b_max: args.b_max,
        seed: args.seed,
        purity_mode: args.purity.into(),
    };
    cfg.validate().map_err(|e| Usage(e.to_string()))?;
    let mut items: Vec<(String, Result<StandardFormCM, String>)> = Sampler::new(cfg)?
        .take(args.n)?
        .into_iter()
        .map(|sf| ("sample".to_string(), Ok(sf)))
        .collect();
    for f in overlay_families(args)? {
        items.push((f.name().to_string(), make_family(&f).map_err(|e| e.to_string())));
    }
    let units = args.common.units.into();
    let rows = par_rows(&items, |(source, state)| {
        let mut row = vec![source.clone()];
        match state {
            Ok(sf) => {
                row.extend(state_cells(sf));
                row.push(sf.pt_nu_minus().map(num).unwrap_or_default());
                row.extend(measure_cells(&report_row(sf, &opts), units));
            }
            Err(e) => {
                row.extend(blank_state());
                row.push(String::new());
                row.extend(measure_cells(&Err(e.clone()), units));
            }
        }
        row
    })?;
    let mut lead = vec!["source"];
    lead.extend(table::STATE_COLUMNS);
    lead.push("pt_nu_minus");
    let mut out = open_output(args.common.out.as_deref())?;
    write_csv(&mut out, units, &header(&lead, &table::MEASURE_COLUMNS), &rows)
}

fn cmd_threshold(args: &ThresholdArgs) -> anyhow::Result<()> {
    let opts = args.common.options()?;
    let xs = grid(args.a_from, args.a_to, args.steps, args.log)?;
    if xs.iter().any(|&a| a <= 1.0) {
        bail!(Usage("threshold needs a > 1".into()));
    }
    let units: Units = args.common.units.into();
    let k = units.factor();
    let rows = par_rows(&xs, |&a| match threshold(a, &opts) {
        Ok(t) => vec![
            num(a),
            num(t.x),
            num(t.cnorm_star),
            num(t.c_star),
            num(t.pure_gap * k),
            String::new(),
        ],
        Err(e) => {
            let mut row = vec![num(a), num((a - 1.0) / a), String::new(), String::new(), String::new()];
            row.push(e.to_string());
            row
        }
    })?;
    let cols = ["a", "x", "cnorm_star", "c_star", "pure_gap", "error"];
    let mut out = open_output(args.common.out.as_deref())?;
    write_csv(&mut out, units, &header(&cols, &[]), &rows)
}

fn exit_code(err: &anyhow::Error) -> u8 {
    if err.downcast_ref::<Usage>().is_some() || err.downcast_ref::<serde_json::Error>().is_some() {
        return 2;
    }
    match err.downcast_ref::<Error>() {
        Some(Error::Parse(_)) => 2,
        Some(Error::NonPhysical(_) | Error::OutOfRange(_) | Error::Degenerate(_) | Error::Singular(_)) => 3,
        Some(
            Error::Convergence { .. }
            | Error::Precision { .. }
            | Error::OptimizerDisagreement { .. }
            | Error::SamplingExhausted(_)
            | Error::NoCrossing { .. },
        ) => 4,
        Some(Error::Domain { .. }) => 3,
        None => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match &cli.command {
        Command::Measures(a) => cmd_measures(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::Scatter(a) => cmd_scatter(a),
        Command::Threshold(a) => cmd_threshold(a),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("gaussdisturb: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
