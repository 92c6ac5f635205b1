//! Numerical engines for orbit-space volumes: adaptive quadrature,
//! random-matrix samplers and a Metropolis chain on the simplex.

pub mod exec;
pub mod mcmc;
pub mod quadrature;
pub mod sampling;
pub mod volume;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

pub use exec::Execution;
pub use mcmc::{mcmc_fraction, mcmc_mean, sample_spectrum_mcmc, McmcRun, McmcSpec};
pub use quadrature::{integrate, integrate_smoothed, Quadrature};
pub use sampling::{
    sample_bures_spectrum, sample_fraction, sample_hs_spectrum, sample_mean, Ensemble,
};
pub use volume::{orbit_volume_qubit, orbit_volume_qutrit, orbit_volume_simplex, QutritRegion};

/// Environment variable holding the default Monte Carlo worker count.
pub const WORKERS_ENV: &str = "CLASSICALITY_WORKERS";

/// Worker count used when neither the caller nor [`WORKERS_ENV`] sets one.
pub const DEFAULT_WORKERS: usize = 8;

/// Tolerances for adaptive quadrature.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
    #[serde(default)]
    pub execution: Execution,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self::one_dimensional()
    }
}

impl QuadratureSpec {
    /// Defaults for one-dimensional integrals.
    pub fn one_dimensional() -> Self {
        Self {
            rel_tol: 1e-8,
            abs_tol: 1e-300,
            max_subdivisions: 2000,
            execution: Execution::default(),
        }
    }

    /// Defaults for nested two-dimensional integrals.
    pub fn two_dimensional() -> Self {
        Self {
            rel_tol: 1e-7,
            ..Self::one_dimensional()
        }
    }

    pub fn with_rel_tol(self, rel_tol: f64) -> Self {
        Self { rel_tol, ..self }
    }

    pub fn with_execution(self, execution: Execution) -> Self {
        Self { execution, ..self }
    }

    pub(crate) fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.abs_tol > 0.0) {
            return domain(format!(
                "quadrature tolerances must be positive (rel {}, abs {})",
                self.rel_tol, self.abs_tol
            ));
        }
        Ok(())
    }

    /// Tolerances for an integral nested inside this one.
    pub(crate) fn inner(&self) -> Self {
        Self {
            rel_tol: (self.rel_tol * 0.01).max(1e-13),
            abs_tol: self.abs_tol,
            max_subdivisions: self.max_subdivisions,
            execution: Execution::Sequential,
        }
    }
}

/// Monte Carlo run parameters.
///
/// Each worker draws from its own ChaCha stream of the master seed, and
/// results are combined in worker order, so `(samples, seed, workers)`
/// fully determines the output regardless of thread scheduling.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McSpec {
    pub samples: usize,
    pub seed: u64,
    pub workers: usize,
    #[serde(default)]
    pub execution: Execution,
}

impl Default for McSpec {
    fn default() -> Self {
        Self {
            samples: 1_000_000,
            seed: 0,
            workers: default_workers(),
            execution: Execution::default(),
        }
    }
}

impl McSpec {
    pub fn new(samples: usize, seed: u64) -> Self {
        Self {
            samples,
            seed,
            ..Self::default()
        }
    }

    pub fn with_workers(self, workers: usize) -> Self {
        Self { workers, ..self }
    }

    pub fn with_execution(self, execution: Execution) -> Self {
        Self { execution, ..self }
    }

    pub(crate) fn validate(&self) -> Result<()> {
        if self.samples == 0 {
            return domain("Monte Carlo needs at least one sample");
        }
        if self.workers == 0 {
            return domain("Monte Carlo needs at least one worker");
        }
        Ok(())
    }

    /// Number of samples assigned to `worker`; the first `samples % workers`
    /// workers take one extra.
    pub(crate) fn share(&self, worker: usize) -> usize {
        self.samples / self.workers + usize::from(worker < self.samples % self.workers)
    }
}

/// Worker count from [`WORKERS_ENV`], falling back to [`DEFAULT_WORKERS`].
pub fn default_workers() -> usize {
    std::env::var(WORKERS_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .filter(|w: &usize| *w > 0)
        .unwrap_or(DEFAULT_WORKERS)
}

/// How a number was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MethodTag {
    ClosedForm,
    Quadrature,
    MonteCarlo,
    Mcmc,
}

impl MethodTag {
    pub fn name(self) -> &'static str {
        match self {
            Self::ClosedForm => "closed-form",
            Self::Quadrature => "quadrature",
            Self::MonteCarlo => "monte-carlo",
            Self::Mcmc => "mcmc",
        }
    }
}

/// An (unnormalized) orbit-space volume.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VolumeEstimate {
    pub value: f64,
    /// Absolute error estimate of the quadrature, or standard error for sampling.
    pub std_error: f64,
    pub method: MethodTag,
}

/// Fraction of sampled spectra that satisfy a predicate.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FractionEstimate {
    pub value: f64,
    pub std_error: f64,
    pub samples: usize,
    pub method: MethodTag,
    /// Mean Metropolis acceptance rate (chains only).
    pub acceptance: Option<f64>,
    pub warnings: Vec<String>,
}
