use std::collections::BTreeMap;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "hedgehog",
    version,
    about = "Extremal point configurations, Chebyshev constants and hedgehog measures"
)]
pub struct Cli {
    #[command(flatten)]
    pub output: OutputArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Csv,
    Json,
}

impl Format {
    pub fn name(self) -> &'static str {
        match self {
            Format::Text => "text",
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Shorthand for `--format json`.
    #[arg(long, global = true, conflicts_with = "csv")]
    pub json: bool,
    /// Shorthand for `--format csv`.
    #[arg(long, global = true)]
    pub csv: bool,
    /// Significant digits for floating-point output.
    #[arg(long, global = true, default_value_t = 10)]
    pub digits: usize,
    /// Write the output to this file, with a run manifest beside it.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

impl OutputArgs {
    pub fn format(&self) -> Format {
        if self.json {
            Format::Json
        } else if self.csv {
            Format::Csv
        } else {
            self.format
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tabulate C_n* = T_n(2^(1/n))^(1/n), its expansion, and (C_n*)^sqrt(n).
    Cstar(CstarArgs),
    /// Hedgehog of a monic integer polynomial: spines, measure, Dubinin bound.
    #[command(alias = "measure")]
    Hedgehog(PolyArgs),
    /// Exact Hankel determinants of the integer square-root series.
    Hankel(HankelArgs),
    /// Multistart minimization of the configuration objective.
    Optimize(OptimizeArgs),
    /// Constructive upper bound C_n <= C_n* together with a multistart search.
    Verify(OptimizeArgs),
    /// Arc maxima and objective of a point configuration read from a file.
    Objective(ObjectiveArgs),
    /// Run every acceptance check and print PASS/FAIL per check.
    Reproduce(ReproduceArgs),
    /// Re-run the command recorded in a manifest and compare its output.
    Replay(ReplayArgs),
}

#[derive(Debug, Clone, Args)]
pub struct CstarArgs {
    /// Values of n: `5`, `1..8` (inclusive), `100,1e4,1e6`, or a mix.
    #[arg(long, default_value = "1..8")]
    pub n: String,
    /// Number of expansion terms beyond 1 (1 + nu h_0 + ... ).
    #[arg(long, default_value_t = 4)]
    pub terms: usize,
    /// Tabulate T_n(2^(1/n) t)^(1/n) against t + sqrt(t^2 - 1) instead.
    #[arg(long)]
    pub t: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct PolyArgs {
    /// Monic integer polynomial: `x^3-x-1` or ascending coefficients `-1,-1,0,1`.
    #[arg(long, allow_hyphen_values = true)]
    pub poly: String,
}

#[derive(Debug, Clone, Args)]
pub struct HankelArgs {
    #[arg(long, allow_hyphen_values = true, default_value = "x^3-x-1")]
    pub poly: String,
    #[arg(long, default_value_t = 150, value_parser = clap::value_parser!(u64).range(1..))]
    pub kmax: u64,
}

#[derive(Debug, Clone, Args)]
pub struct OptimizeArgs {
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub n: u64,
    #[arg(long, default_value_t = 200, value_parser = clap::value_parser!(u64).range(1..))]
    pub starts: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Args)]
pub struct ObjectiveArgs {
    /// File of `angle weight` lines (radians); `#` starts a comment.
    #[arg(long)]
    pub config: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct ReproduceArgs {
    /// Hankel check at kmax = 60 instead of 150.
    #[arg(long)]
    pub quick: bool,
    #[arg(long, default_value_t = hedgehog_core::reproduce::DEFAULT_SEED)]
    pub seed: u64,
}

#[derive(Debug, Clone, Args)]
pub struct ReplayArgs {
    pub manifest: PathBuf,
    /// Overwrite the recorded outputs instead of comparing against them.
    #[arg(long)]
    pub write: bool,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Cstar(_) => "cstar",
            Command::Hedgehog(_) => "hedgehog",
            Command::Hankel(_) => "hankel",
            Command::Optimize(_) => "optimize",
            Command::Verify(_) => "verify",
            Command::Objective(_) => "objective",
            Command::Reproduce(_) => "reproduce",
            Command::Replay(_) => "replay",
        }
    }

    /// Command flags as `--key value` pairs; `"true"` marks a bare switch.
    pub fn parameters(&self) -> BTreeMap<String, String> {
        let mut p = BTreeMap::new();
        let mut put = |k: &str, v: String| {
            p.insert(k.to_string(), v);
        };
        match self {
            Command::Cstar(a) => {
                put("n", a.n.clone());
                put("terms", a.terms.to_string());
                if let Some(t) = a.t {
                    put("t", t.to_string());
                }
            }
            Command::Hedgehog(a) => put("poly", a.poly.clone()),
            Command::Hankel(a) => {
                put("poly", a.poly.clone());
                put("kmax", a.kmax.to_string());
            }
            Command::Optimize(a) | Command::Verify(a) => {
                put("n", a.n.to_string());
                put("starts", a.starts.to_string());
                put("seed", a.seed.to_string());
            }
            Command::Objective(a) => put("config", a.config.display().to_string()),
            Command::Reproduce(a) => {
                if a.quick {
                    put("quick", "true".into());
                }
                put("seed", a.seed.to_string());
            }
            Command::Replay(a) => put("manifest", a.manifest.display().to_string()),
        }
        p
    }

    pub fn seed(&self) -> Option<u64> {
        match self {
            Command::Optimize(a) | Command::Verify(a) => Some(a.seed),
            Command::Reproduce(a) => Some(a.seed),
            _ => None,
        }
    }
}

/// Parses `5`, `1..8`, `1..=8`, `1e6` and comma-separated mixtures.
pub fn parse_n_list(spec: &str) -> Result<Vec<u64>, String> {
    let number = |s: &str| -> Result<u64, String> {
        let s = s.trim();
        if let Ok(v) = s.parse::<u64>() {
            return Ok(v);
        }
        match s.parse::<f64>() {
            Ok(v) if v >= 0.0 && v.fract() == 0.0 && v < 1.8e19 => Ok(v as u64),
            _ => Err(format!("not a nonnegative integer: {s:?}")),
        }
    };
    let mut out = Vec::new();
    for item in spec.split(',') {
        if let Some((a, b)) = item.split_once("..") {
            let (lo, hi) = (number(a)?, number(b.trim_start_matches('='))?);
            if hi < lo {
                return Err(format!("empty range {item:?}"));
            }
            if hi - lo > 1_000_000 {
                return Err(format!("range {item:?} has more than 10^6 values"));
            }
            out.extend(lo..=hi);
        } else {
            out.push(number(item)?);
        }
    }
    if out.contains(&0) {
        return Err("n must be at least 1".into());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn n_lists() {
        assert_eq!(parse_n_list("1..4").unwrap(), vec![1, 2, 3, 4]);
        assert_eq!(parse_n_list("2..=3,1e2, 7").unwrap(), vec![2, 3, 100, 7]);
        assert_eq!(parse_n_list("1e6").unwrap(), vec![1_000_000]);
        assert!(parse_n_list("0..3").is_err());
        assert!(parse_n_list("5..2").is_err());
        assert!(parse_n_list("1.5").is_err());
        assert!(parse_n_list("x").is_err());
    }

    #[test]
    fn parameters_round_trip_through_the_parser() {
        let cli = Cli::try_parse_from(["hedgehog", "optimize", "--n", "5", "--seed", "3"]).unwrap();
        let mut argv = vec!["hedgehog".to_string(), cli.command.name().to_string()];
        for (k, v) in cli.command.parameters() {
            argv.push(format!("--{k}"));
            argv.push(v);
        }
        let again = Cli::try_parse_from(&argv).unwrap();
        assert_eq!(again.command.parameters(), cli.command.parameters());
    }
}
