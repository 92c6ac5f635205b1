use std::f64::consts::PI;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use classicality::integrate::{DEFAULT_WORKERS, WORKERS_ENV};
use classicality::MetricKind;

#[derive(Debug, Parser)]
#[command(
    name = "classicality",
    version,
    about = "Global Wigner-positivity indicators of N-level quantum states"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Relative volume of Wigner-positive states for one representation.
    Indicator(IndicatorArgs),
    /// Qutrit indicator averaged over the moduli angle.
    Average(AverageArgs),
    /// Qutrit moduli angle with the smallest indicator.
    Minimize(MinimizeArgs),
    /// Qubit positivity probability inside Bloch balls of growing radius.
    Curve(CurveArgs),
    /// Eigenvalue spectra drawn from a metric's ensemble.
    Sample(SampleArgs),
    /// Recompute every published value and report pass/fail.
    ReproducePaper(ReproduceArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Closed,
    Quad,
    Mc,
    Mcmc,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Output format; defaults to the extension of --out, else JSON.
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Write to this file instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl OutputArgs {
    pub fn resolved_format(&self, fallback: Format) -> Format {
        self.format
            .unwrap_or_else(|| match self.out.as_ref().and_then(|p| p.extension()) {
                Some(ext) if ext.eq_ignore_ascii_case("csv") => Format::Csv,
                Some(ext) if ext.eq_ignore_ascii_case("json") => Format::Json,
                _ => fallback,
            })
    }
}

#[derive(Debug, Args)]
pub struct SamplingArgs {
    /// Number of samples (kept chain states for MCMC).
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Independent random streams; part of the reproducibility contract.
    #[arg(long, env = WORKERS_ENV, default_value_t = DEFAULT_WORKERS)]
    pub workers: usize,
    /// Run on the calling thread only.
    #[arg(long)]
    pub sequential: bool,
}

#[derive(Debug, Args)]
pub struct QuadratureArgs {
    /// Relative tolerance of the outer quadrature.
    #[arg(long)]
    pub rel_tol: Option<f64>,
}

#[derive(Debug, Args)]
pub struct IndicatorArgs {
    /// Hilbert-space dimension.
    #[arg(long = "n")]
    pub n: usize,
    #[arg(long, value_parser = parse_metric, default_value = "hs")]
    pub metric: MetricKind,
    /// Qutrit moduli angle in radians; accepts literals such as `pi/6`.
    #[arg(long, value_parser = parse_angle, allow_hyphen_values = true)]
    pub zeta: Option<f64>,
    /// Kernel direction for N >= 4: N comma-separated components summing to 0.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub direction: Option<Vec<f64>>,
    #[arg(long, value_enum, default_value = "quad")]
    pub method: Method,
    #[command(flatten)]
    pub sampling: SamplingArgs,
    #[command(flatten)]
    pub quadrature: QuadratureArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct AverageArgs {
    #[arg(long = "n", default_value_t = 3)]
    pub n: usize,
    /// Metric to average; all three when omitted.
    #[arg(long, value_parser = parse_metric)]
    pub metric: Option<MetricKind>,
    #[arg(long, value_enum, default_value = "quad")]
    pub method: Method,
    #[command(flatten)]
    pub sampling: SamplingArgs,
    #[command(flatten)]
    pub quadrature: QuadratureArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct MinimizeArgs {
    #[arg(long = "n", default_value_t = 3)]
    pub n: usize,
    #[arg(long, value_parser = parse_metric, default_value = "hs")]
    pub metric: MetricKind,
    #[arg(long, value_enum, default_value = "quad")]
    pub method: Method,
    #[command(flatten)]
    pub quadrature: QuadratureArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct CurveArgs {
    /// Radii from 0 to 1 inclusive.
    #[arg(long, default_value_t = 200)]
    pub points: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    #[arg(long = "n")]
    pub n: usize,
    #[arg(long, value_parser = parse_metric, default_value = "hs")]
    pub metric: MetricKind,
    #[arg(long, value_enum, default_value = "mc")]
    pub method: Method,
    #[command(flatten)]
    pub sampling: SamplingArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct ReproduceArgs {
    /// Skip the Monte Carlo and MCMC rows.
    #[arg(long)]
    pub skip_sampling: bool,
    #[command(flatten)]
    pub sampling: SamplingArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

fn parse_metric(s: &str) -> Result<MetricKind, String> {
    s.parse().map_err(|e: classicality::Error| e.to_string())
}

/// Parses radians given as a decimal or as a multiple of π such as `pi/6`,
/// `2pi/3`, `-pi/4` or `π/6`.
pub fn parse_angle(s: &str) -> Result<f64, String> {
    let text: String = s
        .chars()
        .filter(|c| !c.is_whitespace())
        .collect::<String>()
        .to_ascii_lowercase()
        .replace('π', "pi");
    let bad = || format!("cannot read '{s}' as an angle (use radians or forms like pi/6, 2pi/3)");
    let Some((coef, rest)) = text.split_once("pi") else {
        return text.parse::<f64>().map_err(|_| bad());
    };
    let coef = coef.strip_suffix('*').unwrap_or(coef);
    let factor = match coef {
        "" | "+" => 1.0,
        "-" => -1.0,
        c => c.parse::<f64>().map_err(|_| bad())?,
    };
    let divisor = match rest {
        "" => 1.0,
        r => r
            .strip_prefix('/')
            .and_then(|d| d.parse::<f64>().ok())
            .filter(|d| *d != 0.0)
            .ok_or_else(bad)?,
    };
    let angle = factor * PI / divisor;
    if angle.is_finite() {
        Ok(angle)
    } else {
        Err(bad())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn angle_literals() {
        assert_eq!(parse_angle("pi/6").unwrap(), PI / 6.0);
        assert_eq!(parse_angle("π/3").unwrap(), PI / 3.0);
        assert_eq!(parse_angle("2pi/3").unwrap(), 2.0 * PI / 3.0);
        assert_eq!(parse_angle("2*pi/3").unwrap(), 2.0 * PI / 3.0);
        assert_eq!(parse_angle("-pi/4").unwrap(), -PI / 4.0);
        assert_eq!(parse_angle("PI").unwrap(), PI);
        assert_eq!(parse_angle("0.25").unwrap(), 0.25);
        for bad in ["", "pi/", "pi/0", "x", "pi6", "2/pi"] {
            assert!(parse_angle(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn format_from_extension() {
        let out = |p: &str| OutputArgs {
            format: None,
            out: Some(PathBuf::from(p)),
        };
        assert_eq!(out("fig1.csv").resolved_format(Format::Json), Format::Csv);
        assert_eq!(out("a.JSON").resolved_format(Format::Csv), Format::Json);
        assert_eq!(out("a.txt").resolved_format(Format::Json), Format::Json);
        let explicit = OutputArgs {
            format: Some(Format::Json),
            out: Some(PathBuf::from("x.csv")),
        };
        assert_eq!(explicit.resolved_format(Format::Csv), Format::Json);
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
