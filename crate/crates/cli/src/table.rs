use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use gaussdisturb_core::{MeasureReport, StandardFormCM, Units};

pub const SCHEMA: &str = "# gaussdisturb v1";

pub const MEASURE_COLUMNS: [&str; 12] = [
    "i_q",
    "mid",
    "i_c_fock",
    "a_g",
    "i_c_g",
    "d_left",
    "d_right",
    "d_twoway",
    "e_f_g",
    "gaussian_branch",
    "mid_cutoff",
    "error",
];

pub const STATE_COLUMNS: [&str; 4] = ["a", "b", "c1", "c2"];

pub fn open_output(out: Option<&Path>) -> io::Result<Box<dyn Write>> {
    Ok(match out {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

pub fn num(v: f64) -> String {
    // no "-0" cells
    format!("{}", if v == 0.0 { 0.0 } else { v })
}

pub fn state_cells(sf: &StandardFormCM) -> Vec<String> {
    [sf.a, sf.b, sf.c1, sf.c2].into_iter().map(num).collect()
}

pub fn blank_state() -> Vec<String> {
    vec![String::new(); STATE_COLUMNS.len()]
}

/// Measure cells in `units`, or blanks plus the error message.
pub fn measure_cells(r: &Result<MeasureReport, String>, units: Units) -> Vec<String> {
    match r {
        Ok(r) => {
            let r = r.in_units(units);
            let branch = serde_json::to_value(r.branches.gaussian)
                .ok()
                .and_then(|v| v.as_str().map(str::to_owned))
                .unwrap_or_default();
            vec![
                num(r.i_q),
                num(r.mid),
                num(r.i_c_fock),
                num(r.a_g),
                num(r.i_c_g),
                num(r.d_left),
                num(r.d_right),
                num(r.d_twoway),
                r.e_f_g.map(num).unwrap_or_default(),
                branch,
                r.mid_cutoff.to_string(),
                String::new(),
            ]
        }
        Err(e) => {
            let mut v = vec![String::new(); MEASURE_COLUMNS.len() - 1];
            v.push(e.clone());
            v
        }
    }
}

/// Writes the schema line, a units line and the CSV body.
pub fn write_csv(
    out: &mut dyn Write,
    units: Units,
    header: &[String],
    rows: &[Vec<String>],
) -> anyhow::Result<()> {
    writeln!(out, "{SCHEMA}")?;
    writeln!(out, "# units: {}", units_name(units))?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(header)?;
    for row in rows {
        w.write_record(row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn units_name(units: Units) -> &'static str {
    match units {
        Units::Nats => "nats",
        Units::Bits => "bits",
    }
}
