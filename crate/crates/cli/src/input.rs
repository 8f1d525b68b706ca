use std::path::Path;

use anyhow::{bail, Context};
use clap::Args;
use serde::Deserialize;

use gaussdisturb_core::{make_family, to_standard_form, Family, Mat4, StandardFormCM};

use crate::Usage;

/// Family parameters; each family reads only the ones it needs.
#[derive(Args, Debug, Clone, Default)]
pub struct FamilyParams {
    #[arg(long, allow_hyphen_values = true)]
    pub r: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub b: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub c: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub cnorm: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub s: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub nu: Option<f64>,
}

impl FamilyParams {
    pub fn get(&self, name: &str) -> Option<f64> {
        match name {
            "r" => self.r,
            "a" => self.a,
            "b" => self.b,
            "c" => self.c,
            "cnorm" => self.cnorm,
            "s" => self.s,
            "nu" => self.nu,
            _ => None,
        }
    }
}

#[derive(Args, Debug, Clone)]
pub struct StateArgs {
    /// Named family: pure-tmsv, squeezed-thermal, sts-sym, product,
    /// cmivette, statistrani, gmems, glems
    #[arg(long, conflicts_with_all = ["cm", "state"])]
    pub family: Option<String>,

    #[command(flatten)]
    pub params: FamilyParams,

    /// 4x4 covariance matrix as a JSON array of rows, or a path to one
    #[arg(long, conflicts_with = "state")]
    pub cm: Option<String>,

    /// JSON state: {"family":..,"params":{..}}, {"a":..,"b":..,"c1":..,"c2":..}
    /// or {"cm":[[..]]}; or a path to such a file
    #[arg(long)]
    pub state: Option<String>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum StateJson {
    Family(Family),
    Cm { cm: Mat4 },
    Standard { a: f64, b: f64, c1: f64, c2: f64 },
}

/// Inline JSON when the text looks like JSON, otherwise a file path.
fn json_text(arg: &str) -> anyhow::Result<String> {
    let t = arg.trim_start();
    if t.starts_with('{') || t.starts_with('[') {
        return Ok(arg.to_string());
    }
    std::fs::read_to_string(Path::new(arg)).with_context(|| format!("reading {arg}"))
}

fn parse_json<T: for<'de> Deserialize<'de>>(arg: &str, what: &str) -> anyhow::Result<T> {
    let text = json_text(arg)?;
    serde_json::from_str(&text).map_err(|e| Usage(format!("invalid {what} JSON: {e}")).into())
}

pub fn family_from_flags(name: &str, params: &FamilyParams) -> anyhow::Result<Family> {
    Ok(Family::from_params(name, |p| params.get(p))?)
}

impl StateArgs {
    pub fn resolve(&self) -> anyhow::Result<StandardFormCM> {
        if let Some(name) = &self.family {
            return Ok(make_family(&family_from_flags(name, &self.params)?)?);
        }
        if let Some(cm) = &self.cm {
            let m: Mat4 = parse_json(cm, "covariance matrix")?;
            return Ok(to_standard_form(&m)?);
        }
        if let Some(s) = &self.state {
            return Ok(match parse_json::<StateJson>(s, "state")? {
                StateJson::Family(f) => make_family(&f)?,
                StateJson::Cm { cm } => to_standard_form(&cm)?,
                StateJson::Standard { a, b, c1, c2 } => StandardFormCM::new(a, b, c1, c2)?,
            });
        }
        bail!(Usage("one of --family, --cm or --state is required".into()))
    }
}

/// `n` points from `from` to `to` inclusive, geometric when `log` is set.
pub fn grid(from: f64, to: f64, n: usize, log: bool) -> anyhow::Result<Vec<f64>> {
    if n == 0 || !from.is_finite() || !to.is_finite() {
        bail!(Usage(format!("bad grid {from}..{to} with {n} points")));
    }
    if log && !(from > 0.0 && to > 0.0) {
        bail!(Usage("a log grid needs positive endpoints".into()));
    }
    if n == 1 {
        return Ok(vec![from]);
    }
    let last = (n - 1) as f64;
    Ok((0..n)
        .map(|k| {
            if k == n - 1 {
                to
            } else if log {
                from * (to / from).powf(k as f64 / last)
            } else {
                from + (to - from) * k as f64 / last
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grids() {
        assert_eq!(grid(0.0, 1.0, 3, false).unwrap(), vec![0.0, 0.5, 1.0]);
        let g = grid(1.0, 100.0, 3, true).unwrap();
        assert!((g[1] - 10.0).abs() < 1e-12 && g[2] == 100.0);
        assert!(grid(0.0, 1.0, 3, true).is_err());
        assert!(grid(0.0, 1.0, 0, false).is_err());
    }

    #[test]
    fn state_json_shapes() {
        let s: StateJson = serde_json::from_str(r#"{"a":2,"b":3,"c1":1,"c2":0.5}"#).unwrap();
        assert!(matches!(s, StateJson::Standard { .. }));
        let s: StateJson = serde_json::from_str(r#"{"family":"pure-tmsv","params":{"r":1}}"#).unwrap();
        assert!(matches!(s, StateJson::Family(Family::PureTmsv { .. })));
        let s: StateJson =
            serde_json::from_str(r#"{"cm":[[1,0,0,0],[0,1,0,0],[0,0,1,0],[0,0,0,1]]}"#).unwrap();
        assert!(matches!(s, StateJson::Cm { .. }));
    }
}
