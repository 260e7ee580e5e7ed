//! Flat `key = value` configuration.
//!
//! Grammar: one `key = value` per line; `#` starts a comment; blank lines are
//! ignored; keys are lowercase with `_` or `-`. List values are comma
//! separated and each item is a number, `2^e`, an integer range `a..b`
//! (inclusive) or a power-of-two range `2^a..2^b`. Real numbers may be
//! written as fractions such as `2/3`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use girg_core::{ModelParams, Norm};

use crate::error::{invalid, CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Scenario {
    Generate,
    Cliques,
    Qk,
    StarCond,
    TriangleCond,
    Bounds,
    TvCurve,
    Covariance,
    Table1Sweep,
    Table2Sweep,
    Table3Sweep,
}

impl Scenario {
    pub fn name(self) -> &'static str {
        match self {
            Scenario::Generate => "generate",
            Scenario::Cliques => "cliques",
            Scenario::Qk => "qk",
            Scenario::StarCond => "star-cond",
            Scenario::TriangleCond => "triangle-cond",
            Scenario::Bounds => "bounds",
            Scenario::TvCurve => "tv-curve",
            Scenario::Covariance => "covariance",
            Scenario::Table1Sweep => "table1-sweep",
            Scenario::Table2Sweep => "table2-sweep",
            Scenario::Table3Sweep => "table3-sweep",
        }
    }

    /// Keys the scenario reads, with their defaults.
    fn defaults(self) -> &'static [(&'static str, &'static str)] {
        match self {
            Scenario::Generate => &[
                ("n", "1000"),
                ("beta", "2.8"),
                ("w0", "1"),
                ("lambda", "1"),
                ("d", "2"),
                ("norm", "inf"),
                ("model", "girg"),
            ],
            Scenario::Cliques => &[
                ("n", "10000"),
                ("beta", "2.5"),
                ("w0", "1"),
                ("lambda", "1"),
                ("d", "2"),
                ("norm", "inf"),
                ("ks", "3,4,5"),
                ("graphs", "1"),
                ("report", "counts"),
                ("dregime", "constant"),
            ],
            Scenario::Qk => &[
                ("trials", "100000"),
                ("n", "100"),
                ("beta", "2.5"),
                ("w0", "1"),
                ("lambda", "1"),
                ("ds", "1,2,4"),
                ("norm", "inf"),
                ("ks", "3,4"),
                ("model", "girg"),
                ("weights", "pareto"),
            ],
            Scenario::StarCond => &[
                ("trials", "100000"),
                ("n", "1000000"),
                ("lambda", "1"),
                ("ks", "3,4"),
                ("ds", "1..6"),
                ("ratio", "1"),
                ("weights", "uniform"),
            ],
            Scenario::TriangleCond => &[
                ("trials", "100000"),
                ("n", "1000"),
                ("arcs", "2/3,0.8,0.9,0.95"),
                ("ds", "1,2,8,32"),
            ],
            Scenario::Bounds => &[
                ("n", "256"),
                ("lambda", "1"),
                ("weight", "1"),
                ("ks", "3,4"),
                ("ds", "1,2,4,8,16,32,64,128"),
                ("c", "1.2"),
                ("ratio", "1.5"),
                ("c1", "1"),
                ("c2", "1"),
                ("epsilon", "0"),
            ],
            Scenario::TvCurve => &[
                ("trials", "100000"),
                ("n", "4"),
                ("beta", "2.5"),
                ("w0", "1"),
                ("lambda", "1"),
                ("norm", "inf"),
                ("weights", "1.2,1.5,1.8,1.4"),
                ("ds", "1,4,16,64,256,1024"),
            ],
            Scenario::Covariance => &[
                ("trials", "1000000"),
                ("spaces", "torus,hypercube"),
                ("pairings", "shared,disjoint"),
            ],
            Scenario::Table1Sweep => &[
                ("betas", "2.5"),
                ("w0", "1"),
                ("lambda", "1"),
                ("norm", "inf"),
                ("ks", "3,5"),
                ("ns", "2^10..2^13"),
                ("ds", "1"),
                ("graphs", "50"),
                ("dregime", "constant"),
            ],
            Scenario::Table2Sweep => &[
                ("betas", "2.2,2.6,3.5"),
                ("w0", "1"),
                ("lambda", "1"),
                ("norm", "inf"),
                ("ns", "2^10..2^13"),
                ("ds", "1"),
                ("graphs", "50"),
                ("dregime", "sublog"),
            ],
            Scenario::Table3Sweep => &[
                ("betas", "2.5,3.5"),
                ("w0", "1"),
                ("lambda", "1"),
                ("norm", "inf"),
                ("ns", "2^10..2^13"),
                ("ds", "2"),
                ("graphs", "50"),
                ("dregime", "constant"),
            ],
        }
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

const COMMON_KEYS: [&str; 4] = ["seed", "trials", "out", "deterministic"];

fn normalize_key(key: &str) -> String {
    key.trim().to_ascii_lowercase().replace('-', "_")
}

/// Parses the config file text into raw key-value pairs.
pub fn parse_config_text(text: &str) -> CliResult<Vec<(String, String)>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| CliError::ConfigSyntax {
            line: i + 1,
            reason: format!("expected `key = value`, got `{line}`"),
        })?;
        let key = normalize_key(k);
        if key.is_empty() {
            return Err(CliError::ConfigSyntax {
                line: i + 1,
                reason: "empty key".into(),
            });
        }
        out.push((key, v.trim().to_string()));
    }
    Ok(out)
}

/// Parses `key=value` from a `--set` flag.
pub fn parse_assignment(s: &str) -> CliResult<(String, String)> {
    let (k, v) = s
        .split_once('=')
        .ok_or_else(|| CliError::Usage(format!("--set expects KEY=VALUE, got `{s}`")))?;
    Ok((normalize_key(k), v.trim().to_string()))
}

/// Resolved settings: scenario defaults, then the config file, then flags.
#[derive(Debug, Clone)]
pub struct Settings {
    scenario: Scenario,
    values: BTreeMap<String, String>,
}

impl Settings {
    pub fn resolve(scenario: Scenario, layers: &[Vec<(String, String)>]) -> CliResult<Self> {
        let mut values: BTreeMap<String, String> = scenario
            .defaults()
            .iter()
            .map(|(k, v)| (k.to_string(), v.to_string()))
            .collect();
        values.entry("seed".into()).or_insert_with(|| "0".into());
        let allowed = |k: &str| COMMON_KEYS.contains(&k) || scenario.defaults().iter().any(|(d, _)| *d == k);
        for layer in layers {
            for (k, v) in layer {
                if k == "scenario" {
                    if v != scenario.name() {
                        return Err(invalid(
                            "scenario",
                            format!("config is for `{v}`, command is `{scenario}`"),
                        ));
                    }
                    continue;
                }
                if !allowed(k) {
                    return Err(CliError::UnknownKey(format!("{k}` for scenario `{scenario}")));
                }
                values.insert(k.clone(), v.clone());
            }
        }
        Ok(Self { scenario, values })
    }

    pub fn scenario(&self) -> Scenario {
        self.scenario
    }

    pub fn values(&self) -> &BTreeMap<String, String> {
        &self.values
    }

    pub fn raw(&self, key: &str) -> CliResult<&str> {
        self.values
            .get(key)
            .map(String::as_str)
            .ok_or_else(|| invalid(key, "missing"))
    }

    pub fn get<T: FromStr>(&self, key: &str) -> CliResult<T>
    where
        T::Err: fmt::Display,
    {
        let raw = self.raw(key)?;
        raw.parse::<T>().map_err(|e| invalid(key, format!("`{raw}`: {e}")))
    }

    pub fn real(&self, key: &str) -> CliResult<f64> {
        parse_real(self.raw(key)?).map_err(|r| invalid(key, r))
    }

    pub fn integer(&self, key: &str) -> CliResult<u64> {
        parse_integer(self.raw(key)?).map_err(|r| invalid(key, r))
    }

    pub fn integers(&self, key: &str) -> CliResult<Vec<u64>> {
        let raw = self.raw(key)?;
        let mut out = Vec::new();
        for item in raw.split(',').map(str::trim) {
            if let Some((a, b)) = item.split_once("..") {
                let (lo, hi) = (
                    parse_integer(a).map_err(|r| invalid(key, r))?,
                    parse_integer(b).map_err(|r| invalid(key, r))?,
                );
                if lo > hi {
                    return Err(invalid(key, format!("empty range `{item}`")));
                }
                if a.trim().starts_with("2^") && b.trim().starts_with("2^") {
                    let mut v = lo;
                    while v <= hi {
                        out.push(v);
                        v *= 2;
                    }
                } else {
                    out.extend(lo..=hi);
                }
            } else {
                out.push(parse_integer(item).map_err(|r| invalid(key, r))?);
            }
        }
        if out.is_empty() {
            return Err(invalid(key, "empty list"));
        }
        Ok(out)
    }

    pub fn usizes(&self, key: &str) -> CliResult<Vec<usize>> {
        Ok(self.integers(key)?.into_iter().map(|v| v as usize).collect())
    }

    pub fn reals(&self, key: &str) -> CliResult<Vec<f64>> {
        let raw = self.raw(key)?;
        let out = raw
            .split(',')
            .map(|s| parse_real(s.trim()).map_err(|r| invalid(key, r)))
            .collect::<CliResult<Vec<f64>>>()?;
        if out.is_empty() {
            return Err(invalid(key, "empty list"));
        }
        Ok(out)
    }

    pub fn words(&self, key: &str) -> CliResult<Vec<String>> {
        let out: Vec<String> = self
            .raw(key)?
            .split(',')
            .map(|s| s.trim().to_string())
            .filter(|s| !s.is_empty())
            .collect();
        if out.is_empty() {
            return Err(invalid(key, "empty list"));
        }
        Ok(out)
    }

    pub fn norm(&self) -> CliResult<Norm> {
        parse_norm(self.raw("norm")?)
    }

    /// Model parameters with `n`, `beta`, `d` taken from the arguments.
    pub fn params(&self, n: usize, beta: f64, d: usize) -> CliResult<ModelParams> {
        let w0 = if self.values.contains_key("w0") {
            self.real("w0")?
        } else {
            1.0
        };
        let lambda = if self.values.contains_key("lambda") {
            self.real("lambda")?
        } else {
            1.0
        };
        let norm = if self.values.contains_key("norm") {
            self.norm()?
        } else {
            Norm::Infinity
        };
        Ok(ModelParams::new(n, beta, w0, lambda, d, norm)?)
    }

    pub fn seed(&self) -> CliResult<u64> {
        self.get("seed")
    }

    pub fn trials(&self) -> CliResult<u64> {
        let t = self.integer("trials")?;
        if t == 0 {
            return Err(invalid("trials", "must be at least 1"));
        }
        Ok(t)
    }
}

pub fn parse_norm(raw: &str) -> CliResult<Norm> {
    match raw.trim() {
        "inf" | "infinity" | "max" => Ok(Norm::Infinity),
        other => {
            let p = parse_real(other).map_err(|r| invalid("norm", r))?;
            if !(p >= 1.0) || !p.is_finite() {
                return Err(invalid(
                    "norm",
                    format!("p = {p} must be a finite value >= 1, or `inf`"),
                ));
            }
            Ok(Norm::P(p))
        }
    }
}

fn parse_integer(s: &str) -> Result<u64, String> {
    let s = s.trim();
    if let Some(e) = s.strip_prefix("2^") {
        let e: u32 = e.parse().map_err(|_| format!("bad exponent in `{s}`"))?;
        return 1u64
            .checked_shl(e)
            .filter(|_| e < 64)
            .ok_or_else(|| format!("`{s}` overflows"));
    }
    if let Some((m, e)) = s.split_once('e') {
        // 1e6 style integers
        let m: u64 = m.parse().map_err(|_| format!("not an integer: `{s}`"))?;
        let e: u32 = e.parse().map_err(|_| format!("not an integer: `{s}`"))?;
        return 10u64
            .checked_pow(e)
            .and_then(|p| p.checked_mul(m))
            .ok_or_else(|| format!("`{s}` overflows"));
    }
    s.parse().map_err(|_| format!("not an integer: `{s}`"))
}

fn parse_real(s: &str) -> Result<f64, String> {
    let s = s.trim();
    let v = if let Some((a, b)) = s.split_once('/') {
        let a: f64 = a.trim().parse().map_err(|_| format!("not a number: `{s}`"))?;
        let b: f64 = b.trim().parse().map_err(|_| format!("not a number: `{s}`"))?;
        a / b
    } else {
        s.parse().map_err(|_| format!("not a number: `{s}`"))?
    };
    if v.is_nan() {
        return Err(format!("not a number: `{s}`"));
    }
    Ok(v)
}
