//! Metropolis sampler of orbit-space densities.
//!
//! The chain lives on the open simplex and targets the (permutation
//! symmetric) radial density; sorting each kept state folds it onto the
//! ordered simplex. Proposals multiply each coordinate by `exp(σ z_i)` and
//! renormalize, which is a symmetric Gaussian step in centred log-ratio
//! coordinates. The density of those coordinates picks up the Jacobian
//! `∏ x_i`, which enters the acceptance ratio.
//!
//! There is no matrix model for the BKM ensemble, so this is the only
//! sampler for it; for HS and Bures it serves as an independent cross-check.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use super::exec::map_indexed;
use super::sampling::worker_rng;
use super::{FractionEstimate, McSpec, MethodTag};
use crate::error::{domain, Result};
use crate::measures::density_of;
use crate::spectra::{MetricKind, StateSpectrum};

const ADAPT_WINDOW: usize = 100;
const TARGET_ACCEPTANCE: (f64, f64) = (0.3, 0.5);
const HEALTHY_ACCEPTANCE: (f64, f64) = (0.1, 0.9);

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McmcSpec {
    /// Kept samples, seed and worker (chain) count.
    pub mc: McSpec,
    /// Steps discarded per chain while the proposal scale adapts.
    pub burn_in: usize,
    /// Steps between kept samples.
    pub thinning: usize,
    pub initial_scale: f64,
    /// Batches per chain for the batch-means standard error.
    pub batches: usize,
}

impl Default for McmcSpec {
    fn default() -> Self {
        Self::from_mc(McSpec::default())
    }
}

impl McmcSpec {
    pub fn from_mc(mc: McSpec) -> Self {
        Self {
            mc,
            burn_in: 10_000,
            thinning: 10,
            initial_scale: 0.3,
            batches: 20,
        }
    }

    fn validate(&self) -> Result<()> {
        self.mc.validate()?;
        if self.thinning == 0 || self.batches == 0 {
            return domain("thinning and batch count must be positive");
        }
        if !(self.initial_scale > 0.0 && self.initial_scale.is_finite()) {
            return domain(format!(
                "proposal scale {} must be positive",
                self.initial_scale
            ));
        }
        Ok(())
    }
}

struct Chain {
    metric: MetricKind,
    x: Vec<f64>,
    proposal: Vec<f64>,
    log_target: f64,
    scale: f64,
}

fn log_target(metric: MetricKind, x: &[f64]) -> f64 {
    let d = density_of(metric, x);
    if d > 0.0 && d.is_finite() && x.iter().all(|v| *v > 0.0) {
        d.ln() + x.iter().map(|v| v.ln()).sum::<f64>()
    } else {
        f64::NEG_INFINITY
    }
}

impl Chain {
    fn start(metric: MetricKind, n: usize, scale: f64, rng: &mut ChaCha8Rng) -> Self {
        // Uniform point on the simplex; degenerate draws have probability zero.
        loop {
            let e: Vec<f64> = (0..n).map(|_| -(1.0 - rng.random::<f64>()).ln()).collect();
            let total: f64 = e.iter().sum();
            let x: Vec<f64> = e.iter().map(|v| v / total).collect();
            let lt = log_target(metric, &x);
            if lt.is_finite() {
                return Self {
                    metric,
                    proposal: x.clone(),
                    x,
                    log_target: lt,
                    scale,
                };
            }
        }
    }

    fn step(&mut self, rng: &mut ChaCha8Rng) -> bool {
        let mut total = 0.0;
        for (p, x) in self.proposal.iter_mut().zip(&self.x) {
            let z: f64 = StandardNormal.sample(rng);
            *p = x * (self.scale * z).exp();
            total += *p;
        }
        self.proposal.iter_mut().for_each(|p| *p /= total);
        let candidate = log_target(self.metric, &self.proposal);
        let u: f64 = rng.random();
        if candidate.is_finite() && u.ln() < candidate - self.log_target {
            std::mem::swap(&mut self.x, &mut self.proposal);
            self.log_target = candidate;
            true
        } else {
            false
        }
    }

    fn burn_in(&mut self, steps: usize, rng: &mut ChaCha8Rng) {
        let mut accepted = 0;
        for i in 1..=steps {
            accepted += usize::from(self.step(rng));
            if i % ADAPT_WINDOW == 0 {
                let rate = accepted as f64 / ADAPT_WINDOW as f64;
                if rate > TARGET_ACCEPTANCE.1 {
                    self.scale *= 1.25;
                } else if rate < TARGET_ACCEPTANCE.0 {
                    self.scale /= 1.25;
                }
                accepted = 0;
            }
        }
    }

    fn state(&self) -> StateSpectrum {
        StateSpectrum::new(self.x.clone()).expect("chain stays on the simplex")
    }
}

struct ChainOutput<T> {
    acc: T,
    accepted: usize,
    steps: usize,
}

/// Runs one chain per worker; `visit` receives the kept-sample index within
/// the chain and the sorted state.
fn run_chains<T, F>(
    metric: MetricKind,
    n: usize,
    spec: &McmcSpec,
    visit: F,
) -> Result<Vec<ChainOutput<T>>>
where
    T: Default + Send,
    F: Fn(&mut T, usize, usize, StateSpectrum) + Sync + Send,
{
    if n < 2 {
        return domain(format!("dimension must be at least 2, got {n}"));
    }
    spec.validate()?;
    let mc = &spec.mc;
    Ok(map_indexed(mc.workers, mc.execution, |worker| {
        let mut rng = worker_rng(mc.seed, worker);
        let mut chain = Chain::start(metric, n, spec.initial_scale, &mut rng);
        chain.burn_in(spec.burn_in, &mut rng);
        let kept = mc.share(worker);
        let mut out = ChainOutput {
            acc: T::default(),
            accepted: 0,
            steps: 0,
        };
        for i in 0..kept {
            for _ in 0..spec.thinning {
                out.accepted += usize::from(chain.step(&mut rng));
                out.steps += 1;
            }
            visit(&mut out.acc, i, kept, chain.state());
        }
        out
    }))
}

fn acceptance_report<T>(outputs: &[ChainOutput<T>]) -> (f64, Vec<String>) {
    let accepted: usize = outputs.iter().map(|o| o.accepted).sum();
    let steps: usize = outputs.iter().map(|o| o.steps).sum();
    let rate = if steps > 0 {
        accepted as f64 / steps as f64
    } else {
        0.0
    };
    let mut warnings = Vec::new();
    for (w, o) in outputs.iter().enumerate() {
        if o.steps == 0 {
            continue;
        }
        let r = o.accepted as f64 / o.steps as f64;
        if !(HEALTHY_ACCEPTANCE.0..=HEALTHY_ACCEPTANCE.1).contains(&r) {
            warnings.push(format!(
                "chain {w}: acceptance rate {r:.3} outside [0.1, 0.9]"
            ));
        }
    }
    (rate, warnings)
}

/// Kept states of all chains, in worker order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct McmcRun {
    pub spectra: Vec<StateSpectrum>,
    pub acceptance: f64,
    pub warnings: Vec<String>,
}

/// Draws `spec.mc.samples` spectra whose law approaches the metric's
/// orbit-space density.
pub fn sample_spectrum_mcmc(metric: MetricKind, n: usize, spec: &McmcSpec) -> Result<McmcRun> {
    let outputs = run_chains(metric, n, spec, |acc: &mut Vec<StateSpectrum>, _, _, s| {
        acc.push(s)
    })?;
    let (acceptance, warnings) = acceptance_report(&outputs);
    Ok(McmcRun {
        spectra: outputs.into_iter().flat_map(|o| o.acc).collect(),
        acceptance,
        warnings,
    })
}

#[derive(Default)]
struct BatchSums {
    sums: Vec<f64>,
    sizes: Vec<usize>,
}

/// Mean of `observable` over chain states, with a batch-means standard error
/// that accounts for autocorrelation.
pub fn mcmc_mean<F>(
    metric: MetricKind,
    n: usize,
    spec: &McmcSpec,
    observable: F,
) -> Result<FractionEstimate>
where
    F: Fn(&StateSpectrum) -> f64 + Sync + Send,
{
    let batches = spec.batches;
    let outputs = run_chains(metric, n, spec, |acc: &mut BatchSums, i, kept, s| {
        if acc.sizes.is_empty() {
            acc.sums = vec![0.0; batches.min(kept.max(1))];
            acc.sizes = vec![0; acc.sums.len()];
        }
        let b = i * acc.sums.len() / kept;
        acc.sizes[b] += 1;
        acc.sums[b] += observable(&s);
    })?;
    let (acceptance, warnings) = acceptance_report(&outputs);
    let samples = spec.mc.samples;
    let mean = outputs.iter().flat_map(|o| &o.acc.sums).sum::<f64>() / samples as f64;
    let means: Vec<f64> = outputs
        .iter()
        .flat_map(|o| o.acc.sums.iter().zip(&o.acc.sizes))
        .filter(|(_, s)| **s > 0)
        .map(|(h, s)| *h / *s as f64)
        .collect();
    let std_error = if means.len() > 1 {
        let m = means.iter().sum::<f64>() / means.len() as f64;
        let var = means.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (means.len() - 1) as f64;
        (var / means.len() as f64).sqrt()
    } else {
        0.0
    };
    Ok(FractionEstimate {
        value: mean,
        std_error,
        samples,
        method: MethodTag::Mcmc,
        acceptance: Some(acceptance),
        warnings,
    })
}

/// Fraction of chain states satisfying `predicate`.
pub fn mcmc_fraction<P>(
    metric: MetricKind,
    n: usize,
    spec: &McmcSpec,
    predicate: P,
) -> Result<FractionEstimate>
where
    P: Fn(&StateSpectrum) -> bool + Sync + Send,
{
    mcmc_mean(metric, n, spec, |s| if predicate(s) { 1.0 } else { 0.0 })
}
