use std::io;

use classicality::integrate::{
    sample_bures_spectrum, sample_hs_spectrum, sample_spectrum_mcmc, Execution, McSpec, McmcSpec,
    QuadratureSpec,
};
use classicality::reproduce::{reproduce_paper, ReproduceOptions};
use classicality::{
    average_indicator, global_indicator, minimize_indicator, positivity_curve, Evaluation,
    MetricKind, ModuliPoint, StateSpectrum,
};
use serde::Serialize;

use crate::args::{
    AverageArgs, CurveArgs, Format, IndicatorArgs, Method, MinimizeArgs, QuadratureArgs,
    ReproduceArgs, SampleArgs, SamplingArgs,
};
use crate::report::{emit, num, sink, write_csv_line, write_json};

const DEFAULT_SAMPLES: usize = 1_000_000;
const DEFAULT_SAMPLE_DRAWS: usize = 1_000;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Numeric(classicality::Error),
    #[error("cannot write output: {0}")]
    Io(#[from] io::Error),
    #[error("{failed} of {total} reproduction checks failed")]
    Reproduction { failed: usize, total: usize },
}

impl From<classicality::Error> for CliError {
    fn from(e: classicality::Error) -> Self {
        match e {
            classicality::Error::Convergence { .. } => Self::Numeric(e),
            other => Self::Usage(other.to_string()),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            Self::Usage(_) => 2,
            _ => 1,
        }
    }
}

fn usage<T>(msg: impl Into<String>) -> Result<T, CliError> {
    Err(CliError::Usage(msg.into()))
}

fn warn(messages: &[String]) {
    for m in messages {
        eprintln!("warning: {m}");
    }
}

fn execution(sequential: bool) -> Execution {
    if sequential {
        Execution::Sequential
    } else {
        Execution::Parallel
    }
}

fn mc_spec(s: &SamplingArgs, default_samples: usize) -> McSpec {
    McSpec::new(s.samples.unwrap_or(default_samples), s.seed)
        .with_workers(s.workers)
        .with_execution(execution(s.sequential))
}

fn quadrature_spec(q: &QuadratureArgs, base: QuadratureSpec) -> Result<QuadratureSpec, CliError> {
    match q.rel_tol {
        Some(t) if !(t > 0.0 && t < 1.0) => usage(format!("--rel-tol must lie in (0, 1), got {t}")),
        Some(t) => Ok(base.with_rel_tol(t)),
        None => Ok(base),
    }
}

/// Maps a method flag to an evaluation. BKM has no matrix model, so `mc`
/// falls back to the Metropolis sampler with a warning.
fn evaluation(
    method: Method,
    metric: MetricKind,
    sampling: &SamplingArgs,
    quad: QuadratureSpec,
    warnings: &mut Vec<String>,
) -> Evaluation {
    let mc = mc_spec(sampling, DEFAULT_SAMPLES);
    match method {
        Method::Closed => Evaluation::ClosedForm,
        Method::Quad => Evaluation::Quadrature(quad.with_execution(execution(sampling.sequential))),
        Method::Mc if metric == MetricKind::Bkm => {
            warnings.push("no matrix-model sampler for BKM; using MCMC".into());
            Evaluation::Mcmc(McmcSpec::from_mc(mc))
        }
        Method::Mc => Evaluation::MonteCarlo(mc),
        Method::Mcmc => Evaluation::Mcmc(McmcSpec::from_mc(mc)),
    }
}

fn moduli_point(a: &IndicatorArgs) -> Result<ModuliPoint, CliError> {
    match (a.n, a.zeta, &a.direction) {
        (0 | 1, _, _) => usage(format!("--n must be at least 2, got {}", a.n)),
        (_, Some(_), Some(_)) => usage("give either --zeta or --direction, not both"),
        (2, None, None) => Ok(ModuliPoint::Qubit),
        (2, _, _) => usage("the qubit kernel is unique; drop --zeta/--direction"),
        (3, Some(z), None) => Ok(ModuliPoint::qutrit(z)?),
        (_, Some(_), None) => usage("--zeta applies only to --n 3"),
        (n, None, Some(d)) if d.len() == n => Ok(ModuliPoint::direction(unit_traceless(d)?)?),
        (n, None, Some(d)) => usage(format!(
            "--direction has {} components, expected {n}",
            d.len()
        )),
        (3, None, None) => usage("--n 3 needs --zeta (e.g. --zeta pi/6)"),
        (n, None, None) => usage(format!("--n {n} needs --direction with {n} components")),
    }
}

/// Projects a direction onto the traceless hyperplane and normalizes it, so
/// `--direction -3,-1,1,3` is accepted.
fn unit_traceless(d: &[f64]) -> Result<Vec<f64>, CliError> {
    let mean = d.iter().sum::<f64>() / d.len() as f64;
    let centred: Vec<f64> = d.iter().map(|x| x - mean).collect();
    let norm = centred.iter().map(|x| x * x).sum::<f64>().sqrt();
    if !(norm > 0.0 && norm.is_finite()) {
        return usage("--direction must not be constant");
    }
    Ok(centred.into_iter().map(|x| x / norm).collect())
}

pub fn cmd_indicator(a: &IndicatorArgs) -> Result<(), CliError> {
    let moduli = moduli_point(a)?;
    let base = if a.n == 2 {
        QuadratureSpec::one_dimensional()
    } else {
        QuadratureSpec::two_dimensional()
    };
    let mut warnings = Vec::new();
    let eval = evaluation(
        a.method,
        a.metric,
        &a.sampling,
        quadrature_spec(&a.quadrature, base)?,
        &mut warnings,
    );
    let mut result = global_indicator(a.metric, &moduli, &eval)?;
    warnings.append(&mut result.warnings);
    warn(&warnings);
    result.warnings = warnings;
    emit(
        &[result],
        true,
        a.output.resolved_format(Format::Json),
        a.output.out.as_deref(),
    )?;
    Ok(())
}

pub fn cmd_average(a: &AverageArgs) -> Result<(), CliError> {
    if a.n != 3 {
        return usage(format!(
            "moduli averages are available for --n 3 only, got {}",
            a.n
        ));
    }
    let metrics = a.metric.map_or(MetricKind::ALL.to_vec(), |m| vec![m]);
    let quad = quadrature_spec(&a.quadrature, QuadratureSpec::two_dimensional())?;
    let mut rows = Vec::new();
    for metric in metrics {
        let mut warnings = Vec::new();
        let eval = evaluation(a.method, metric, &a.sampling, quad, &mut warnings);
        let mut result = average_indicator(metric, &eval)?;
        warnings.append(&mut result.warnings);
        warn(&warnings);
        result.warnings = warnings;
        rows.push(result);
    }
    emit(
        &rows,
        a.metric.is_some(),
        a.output.resolved_format(Format::Json),
        a.output.out.as_deref(),
    )?;
    Ok(())
}

pub fn cmd_minimize(a: &MinimizeArgs) -> Result<(), CliError> {
    if a.n != 3 {
        return usage(format!(
            "minimization is available for --n 3 only, got {}",
            a.n
        ));
    }
    let eval = match a.method {
        Method::Closed => Evaluation::ClosedForm,
        Method::Quad => Evaluation::Quadrature(quadrature_spec(
            &a.quadrature,
            QuadratureSpec::two_dimensional(),
        )?),
        other => {
            return usage(
                format!("minimize needs --method closed or quad, got {other:?}").to_lowercase(),
            )
        }
    };
    let minimum = minimize_indicator(a.metric, &eval)?;
    emit(
        &[minimum],
        true,
        a.output.resolved_format(Format::Json),
        a.output.out.as_deref(),
    )?;
    Ok(())
}

pub fn cmd_curve(a: &CurveArgs) -> Result<(), CliError> {
    let curve = positivity_curve(a.points)?;
    emit(
        &curve,
        false,
        a.output.resolved_format(Format::Csv),
        a.output.out.as_deref(),
    )?;
    Ok(())
}

#[derive(Serialize)]
struct SampleReport<'a> {
    metric: MetricKind,
    #[serde(rename = "N")]
    n: usize,
    method: &'static str,
    seed: u64,
    workers: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    acceptance: Option<f64>,
    #[serde(skip_serializing_if = "<[String]>::is_empty")]
    warnings: &'a [String],
    spectra: &'a [StateSpectrum],
}

pub fn cmd_sample(a: &SampleArgs) -> Result<(), CliError> {
    if a.n < 2 {
        return usage(format!("--n must be at least 2, got {}", a.n));
    }
    let mc = mc_spec(&a.sampling, DEFAULT_SAMPLE_DRAWS);
    let mut warnings = Vec::new();
    let method = match (a.method, a.metric) {
        (Method::Mc, MetricKind::Bkm) => {
            warnings.push("no matrix-model sampler for BKM; using MCMC".to_string());
            Method::Mcmc
        }
        (m @ (Method::Mc | Method::Mcmc), _) => m,
        (other, _) => {
            return usage(format!("sample needs --method mc or mcmc, got {other:?}").to_lowercase())
        }
    };
    let (spectra, acceptance) = match (method, a.metric) {
        (Method::Mc, MetricKind::Hs) => (sample_hs_spectrum(a.n, &mc)?, None),
        (Method::Mc, _) => (sample_bures_spectrum(a.n, &mc)?, None),
        _ => {
            let run = sample_spectrum_mcmc(a.metric, a.n, &McmcSpec::from_mc(mc))?;
            warnings.extend(run.warnings);
            (run.spectra, Some(run.acceptance))
        }
    };
    warn(&warnings);
    let mut w = sink(a.output.out.as_deref())?;
    match a.output.resolved_format(Format::Json) {
        Format::Csv => {
            let header: Vec<String> = (1..=a.n).map(|i| format!("r{i}")).collect();
            write_csv_line(&mut *w, &header)?;
            for s in &spectra {
                write_csv_line(
                    &mut *w,
                    &s.values().iter().map(|v| num(*v)).collect::<Vec<_>>(),
                )?;
            }
        }
        Format::Json => {
            let method = if method == Method::Mc {
                "monte-carlo"
            } else {
                "mcmc"
            };
            let report = SampleReport {
                metric: a.metric,
                n: a.n,
                method,
                seed: mc.seed,
                workers: mc.workers,
                acceptance,
                warnings: &warnings,
                spectra: &spectra,
            };
            write_json(&mut *w, &report)?;
        }
    }
    w.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct ReproduceReport<'a> {
    passed: bool,
    checks: &'a [classicality::reproduce::Check],
}

pub fn cmd_reproduce(a: &ReproduceArgs) -> Result<(), CliError> {
    let exec = execution(a.sampling.sequential);
    let options = ReproduceOptions {
        quadrature: QuadratureSpec::two_dimensional().with_execution(exec),
        sampling: (!a.skip_sampling).then(|| mc_spec(&a.sampling, DEFAULT_SAMPLES)),
    };
    let checks = reproduce_paper(&options)?;
    let failed = checks.iter().filter(|c| !c.passed).count();
    match a.output.resolved_format(Format::Json) {
        Format::Csv => emit(&checks, false, Format::Csv, a.output.out.as_deref())?,
        Format::Json => {
            let mut w = sink(a.output.out.as_deref())?;
            write_json(
                &mut *w,
                &ReproduceReport {
                    passed: failed == 0,
                    checks: &checks,
                },
            )?;
            w.flush()?;
        }
    }
    for c in checks.iter().filter(|c| !c.passed) {
        eprintln!("FAIL {}: {} vs target {}", c.name, c.value, c.target);
    }
    if failed > 0 {
        return Err(CliError::Reproduction {
            failed,
            total: checks.len(),
        });
    }
    Ok(())
}
