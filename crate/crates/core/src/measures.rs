//! Volume densities on the orbit space.
//!
//! For a metric `g` on the state space, integrating out the unitary part of
//! the spectral decomposition leaves a density on the ordered simplex. Up to
//! constant factors (which cancel in every volume ratio):
//!
//! * Hilbert-Schmidt: `∏_{i<j} (r_i - r_j)²`.
//! * Monotone metric with Morozova-Chentsov function `c`:
//!   `∏_i r_i^{-1/2} · ∏_{i<j} c(r_i, r_j) (r_i - r_j)²`.

use crate::error::{domain, Result};
use crate::spectra::{MetricKind, StateSpectrum};

/// Relative separation below which the BKM weight switches to its series.
const BKM_SERIES_CUTOFF: f64 = 1e-9;

/// Morozova-Chentsov weight without argument checks.
#[inline]
pub(crate) fn mc_weight(metric: MetricKind, x: f64, y: f64) -> f64 {
    match metric {
        MetricKind::Hs => 1.0,
        MetricKind::Bures => 2.0 / (x + y),
        MetricKind::Bkm => {
            let diff = x - y;
            let big = x.max(y);
            let eps = diff.abs() / big;
            if eps < BKM_SERIES_CUTOFF {
                // ln(x/y)/(x-y) expanded about x = y in the relative gap.
                (1.0 + eps / 2.0 + eps * eps / 3.0) / big
            } else {
                (diff / y).ln_1p() / diff
            }
        }
    }
}

/// Morozova-Chentsov function `c_f(x, y) = 1 / (y f(x/y))` of the metric.
///
/// Bures uses `f(t) = (1 + t)/2`, BKM `f(t) = (t - 1)/ln t`. The flat
/// Hilbert-Schmidt metric carries no such factor and returns 1.
pub fn morozova_chentsov(metric: MetricKind, x: f64, y: f64) -> Result<f64> {
    if !(x > 0.0 && y > 0.0) || !x.is_finite() || !y.is_finite() {
        return domain(format!(
            "Morozova-Chentsov arguments must be positive, got ({x}, {y})"
        ));
    }
    Ok(mc_weight(metric, x, y))
}

/// Unnormalized orbit-space density at eigenvalues `r`, in any order.
///
/// Callers are responsible for positivity of `r` under the monotone metrics.
#[inline]
pub(crate) fn density_of(metric: MetricKind, r: &[f64]) -> f64 {
    let mut value = 1.0;
    for (i, &a) in r.iter().enumerate() {
        for &b in &r[i + 1..] {
            let d = a - b;
            value *= d * d * mc_weight(metric, a, b);
        }
    }
    match metric {
        MetricKind::Hs => value,
        MetricKind::Bures | MetricKind::Bkm => value / r.iter().product::<f64>().sqrt(),
    }
}

/// Unnormalized volume density of the metric on the ordered simplex.
pub fn radial_density(metric: MetricKind, r: &StateSpectrum) -> Result<f64> {
    if metric != MetricKind::Hs && r.values().iter().any(|v| *v <= 0.0) {
        return domain(format!(
            "the {metric} density is singular on the simplex boundary"
        ));
    }
    Ok(density_of(metric, r.values()))
}

/// Unnormalized density of the qubit Bloch radius.
///
/// `HS: ρ²`, `Bures: ρ²/√(1-ρ²)`, `BKM: ρ artanh(ρ)/√(1-ρ²)`.
pub fn qubit_radial_density(metric: MetricKind, rho: f64) -> Result<f64> {
    let upper_ok = match metric {
        MetricKind::Hs => rho <= 1.0,
        _ => rho < 1.0,
    };
    if !(rho >= 0.0 && upper_ok) {
        return domain(format!(
            "Bloch radius {rho} outside the admissible range for {metric}"
        ));
    }
    Ok(match metric {
        MetricKind::Hs => rho * rho,
        MetricKind::Bures => rho * rho / (1.0 - rho * rho).sqrt(),
        MetricKind::Bkm => rho * rho.atanh() / (1.0 - rho * rho).sqrt(),
    })
}

/// Unnormalized volume of the Bloch ball of radius `radius` under the metric;
/// the antiderivative of [`qubit_radial_density`].
pub fn qubit_ball_volume(metric: MetricKind, radius: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&radius) {
        return domain(format!("Bloch radius {radius} outside [0, 1]"));
    }
    let cos = (1.0 - radius * radius).sqrt();
    Ok(match metric {
        MetricKind::Hs => radius.powi(3) / 3.0,
        MetricKind::Bures => (radius.asin() - radius * cos) / 2.0,
        MetricKind::Bkm if radius == 1.0 => std::f64::consts::FRAC_PI_2,
        MetricKind::Bkm => radius.asin() - cos * radius.atanh(),
    })
}
