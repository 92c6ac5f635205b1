//! Random-matrix samplers for the Hilbert-Schmidt and Bures ensembles.
//!
//! * Hilbert-Schmidt: `ϱ = GG† / tr(GG†)` with `G` a square complex Ginibre matrix.
//! * Bures: `ϱ ∝ (I + U) G G† (I + U)†` with `U` Haar-distributed.
//!
//! Both only need the spectrum of `ϱ`, which is what they return.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::exec::map_indexed;
use super::{FractionEstimate, McSpec, MethodTag};
use crate::error::{domain, Result};
use crate::spectra::StateSpectrum;

/// Matrix models with exact samplers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Ensemble {
    Hs,
    Bures,
}

/// Generator for `worker`: the master seed with the worker index as stream.
pub(crate) fn worker_rng(seed: u64, worker: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(worker as u64);
    rng
}

fn ginibre<R: Rng + ?Sized>(n: usize, rng: &mut R) -> DMatrix<Complex64> {
    DMatrix::from_fn(n, n, |_, _| {
        Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    })
}

/// Haar unitary from the QR factorization of a Ginibre matrix, with the
/// phases of `R`'s diagonal moved into `Q`.
fn haar_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> DMatrix<Complex64> {
    let qr = ginibre(n, rng).qr();
    let (mut q, r) = qr.unpack();
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 {
            d / d.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        for i in 0..n {
            q[(i, j)] *= phase;
        }
    }
    q
}

/// Eigenvalues of a Hermitian positive semidefinite matrix, normalized to
/// unit trace.
fn normalized_spectrum(w: DMatrix<Complex64>) -> Result<StateSpectrum> {
    let n = w.nrows();
    let values: Vec<f64> = if n == 2 {
        let (a, d, b) = (w[(0, 0)].re, w[(1, 1)].re, w[(0, 1)]);
        let mean = 0.5 * (a + d);
        let gap = (0.25 * (a - d) * (a - d) + b.norm_sqr()).sqrt();
        vec![mean + gap, (mean - gap).max(0.0)]
    } else {
        w.symmetric_eigenvalues()
            .iter()
            .map(|v| v.max(0.0))
            .collect()
    };
    StateSpectrum::from_weights(values)
}

fn draw<R: Rng + ?Sized>(ensemble: Ensemble, n: usize, rng: &mut R) -> Result<StateSpectrum> {
    let g = ginibre(n, rng);
    let a = match ensemble {
        Ensemble::Hs => g,
        Ensemble::Bures => {
            let mut u = haar_unitary(n, rng);
            for i in 0..n {
                u[(i, i)] += Complex64::new(1.0, 0.0);
            }
            u * g
        }
    };
    let w = &a * a.adjoint();
    normalized_spectrum(w)
}

/// Runs `visit` over every sample of every worker and collects the per-worker
/// results in worker order.
pub(crate) fn for_each_sample<T, F>(
    ensemble: Ensemble,
    n: usize,
    spec: &McSpec,
    visit: F,
) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(&mut T, StateSpectrum) + Sync + Send,
    T: Default,
{
    if n < 2 {
        return domain(format!("dimension must be at least 2, got {n}"));
    }
    spec.validate()?;
    map_indexed(spec.workers, spec.execution, |worker| {
        let mut rng = worker_rng(spec.seed, worker);
        let mut acc = T::default();
        for _ in 0..spec.share(worker) {
            visit(&mut acc, draw(ensemble, n, &mut rng)?);
        }
        Ok(acc)
    })
    .into_iter()
    .collect()
}

fn collect(ensemble: Ensemble, n: usize, spec: &McSpec) -> Result<Vec<StateSpectrum>> {
    let chunks = for_each_sample(ensemble, n, spec, |acc: &mut Vec<StateSpectrum>, s| {
        acc.push(s)
    })?;
    Ok(chunks.into_iter().flatten().collect())
}

/// `spec.samples` spectra of `N`-level Hilbert-Schmidt random states.
pub fn sample_hs_spectrum(n: usize, spec: &McSpec) -> Result<Vec<StateSpectrum>> {
    collect(Ensemble::Hs, n, spec)
}

/// `spec.samples` spectra of `N`-level Bures random states.
pub fn sample_bures_spectrum(n: usize, spec: &McSpec) -> Result<Vec<StateSpectrum>> {
    collect(Ensemble::Bures, n, spec)
}

/// Fraction of matrix-model samples satisfying `predicate`, with binomial
/// standard error.
pub fn sample_fraction<P>(
    ensemble: Ensemble,
    n: usize,
    spec: &McSpec,
    predicate: P,
) -> Result<FractionEstimate>
where
    P: Fn(&StateSpectrum) -> bool + Sync + Send,
{
    let hits = for_each_sample(ensemble, n, spec, |count: &mut usize, s| {
        if predicate(&s) {
            *count += 1;
        }
    })?;
    let total: usize = hits.iter().sum();
    let p = total as f64 / spec.samples as f64;
    Ok(FractionEstimate {
        value: p,
        std_error: (p * (1.0 - p) / spec.samples as f64).sqrt(),
        samples: spec.samples,
        method: MethodTag::MonteCarlo,
        acceptance: None,
        warnings: Vec::new(),
    })
}

#[derive(Default)]
struct Moments {
    sum: f64,
    sum_sq: f64,
}

/// Mean of `observable` over matrix-model samples, with the standard error
/// from the sample variance.
pub fn sample_mean<F>(
    ensemble: Ensemble,
    n: usize,
    spec: &McSpec,
    observable: F,
) -> Result<FractionEstimate>
where
    F: Fn(&StateSpectrum) -> f64 + Sync + Send,
{
    let parts = for_each_sample(ensemble, n, spec, |m: &mut Moments, s| {
        let v = observable(&s);
        m.sum += v;
        m.sum_sq += v * v;
    })?;
    let count = spec.samples as f64;
    let mean = parts.iter().map(|m| m.sum).sum::<f64>() / count;
    let second = parts.iter().map(|m| m.sum_sq).sum::<f64>() / count;
    let var = if spec.samples > 1 {
        (second - mean * mean).max(0.0) * count / (count - 1.0)
    } else {
        0.0
    };
    Ok(FractionEstimate {
        value: mean,
        std_error: (var / count).sqrt(),
        samples: spec.samples,
        method: MethodTag::MonteCarlo,
        acceptance: None,
        warnings: Vec::new(),
    })
}
