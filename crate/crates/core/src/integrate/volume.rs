//! Deterministic orbit-space volumes.
//!
//! Three routes, from specialized to general:
//!
//! * qubit: one integral over the Bloch radius, taken in the angle
//!   `ρ = cos ψ` so the `(1 - ρ²)^{-1/2}` edge of the monotone densities
//!   becomes smooth;
//! * qutrit: polar coordinates `(r, φ)` on the orbit triangle, with the
//!   radial variable measured from the outer boundary as `r = B(1 - u²)`
//!   to absorb the `r_min^{-1/2}` edge singularity;
//! * general `N`: nested integration over the ordered simplex with the
//!   positivity half-space resolved in the innermost variable; outer levels
//!   use [`integrate_smoothed`] since the inner volumes have power-law edges.

use std::f64::consts::{FRAC_PI_2, PI};
use std::sync::Mutex;

use serde::{Deserialize, Serialize};

use super::exec::Execution;
use super::quadrature::{integrate, integrate_smoothed, Quadrature};
use super::{MethodTag, QuadratureSpec, VolumeEstimate};
use crate::error::{domain, Error, Result};
use crate::measures::density_of;
use crate::positivity::{qutrit_orbit_bound, qutrit_positivity_bound};
use crate::spectra::{check_zeta, qutrit_ray_spectrum, KernelSpectrum, MetricKind};

/// Collects failures raised inside a nested integrand.
///
/// Inner non-convergence is tolerated when the worst inner error estimate,
/// integrated over the outer domain, stays within the outer tolerance; tiny
/// inner integrals near degenerate corners often cannot reach a relative
/// tolerance yet contribute nothing measurable.
#[derive(Default)]
struct ErrorSlot(Mutex<Option<Error>>);

impl ErrorSlot {
    /// Unwraps an inner quadrature, keeping the best estimate on failure.
    fn absorb(&self, result: Result<Quadrature>) -> f64 {
        match result {
            Ok(q) => q.value,
            Err(err) => {
                let estimate = match &err {
                    Error::Convergence { estimate, .. } => *estimate,
                    _ => f64::NAN,
                };
                let mut slot = self.0.lock().expect("error slot poisoned");
                let replace = match (&*slot, &err) {
                    (None, _) => true,
                    (
                        Some(Error::Convergence {
                            error_estimate: old,
                            ..
                        }),
                        Error::Convergence {
                            error_estimate: new,
                            ..
                        },
                    ) => new > old,
                    (Some(Error::Convergence { .. }), _) => true,
                    _ => false,
                };
                if replace {
                    *slot = Some(err);
                }
                estimate
            }
        }
    }

    /// Fails if an inner failure could move `total` by more than `tolerance`
    /// when integrated over an outer domain of measure `extent`.
    fn check(self, extent: f64, tolerance: f64) -> Result<()> {
        match self.0.into_inner().expect("error slot poisoned") {
            Some(Error::Convergence { error_estimate, .. })
                if error_estimate * extent <= tolerance =>
            {
                Ok(())
            }
            Some(err) => Err(err),
            None => Ok(()),
        }
    }
}

fn estimate(q: Quadrature) -> VolumeEstimate {
    VolumeEstimate {
        value: q.value,
        std_error: q.error,
        method: MethodTag::Quadrature,
    }
}

/// Volume of the Bloch ball of radius `radius` under `metric`, by quadrature.
///
/// Same normalization as [`crate::measures::qubit_ball_volume`].
pub fn orbit_volume_qubit(
    metric: MetricKind,
    radius: f64,
    spec: &QuadratureSpec,
) -> Result<VolumeEstimate> {
    if !(0.0..=1.0).contains(&radius) {
        return domain(format!("Bloch radius {radius} outside [0, 1]"));
    }
    // ρ = cos ψ, dρ = -sin ψ dψ.
    let integrand = move |psi: f64| {
        let (s, c) = psi.sin_cos();
        match metric {
            MetricKind::Hs => c * c * s,
            MetricKind::Bures => c * c,
            // artanh(cos ψ) = -ln tan(ψ/2)
            MetricKind::Bkm => -c * (0.5 * psi).tan().ln(),
        }
    };
    let q = integrate(
        integrand,
        radius.acos(),
        FRAC_PI_2,
        spec,
        Execution::Sequential,
    )?;
    Ok(estimate(q))
}

/// Region of the qutrit orbit space to integrate over.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "region", rename_all = "snake_case")]
pub enum QutritRegion {
    Full,
    /// Wigner-positive states for the kernel at apex angle `zeta`.
    Positive {
        zeta: f64,
    },
}

/// `1 - B(φ)/r_orbit(φ)`, the relative depth of the region's outer edge
/// below the orbit boundary, written without cancellation.
fn edge_depth(phi: f64, region: QutritRegion) -> f64 {
    match region {
        QutritRegion::Full => 0.0,
        QutritRegion::Positive { zeta } => {
            let theta = phi / 3.0;
            let shifted = (theta + zeta - PI / 3.0).cos();
            let numer = 4.0 * theta.cos() * (zeta / 2.0).sin() * (PI / 3.0 - zeta / 2.0).sin()
                + 2.0 * theta.sin() * (PI / 3.0 - zeta).sin();
            (numer / (2.0 * shifted)).clamp(0.0, 1.0)
        }
    }
}

/// Unnormalized qutrit integrand `density · r` in polar coordinates, with the
/// point given as a relative depth below the orbit boundary.
fn qutrit_polar_integrand(metric: MetricKind, phi: f64, depth: f64) -> f64 {
    let spectrum = qutrit_ray_spectrum(phi, depth);
    if metric != MetricKind::Hs && spectrum.iter().any(|v| *v <= 0.0) {
        return 0.0;
    }
    let r = (1.0 - depth) / (2.0 * 3f64.sqrt() * (phi / 3.0).cos());
    density_of(metric, &spectrum) * r
}

/// Volume of the qutrit orbit space (or its Wigner-positive part) in polar
/// coordinates, measure `density · r dr dφ`.
pub fn orbit_volume_qutrit(
    metric: MetricKind,
    region: QutritRegion,
    spec: &QuadratureSpec,
) -> Result<VolumeEstimate> {
    if let QutritRegion::Positive { zeta } = region {
        check_zeta(zeta)?;
    }
    spec.validate()?;
    let inner_spec = spec.inner();
    let slot = ErrorSlot::default();
    let ray = |phi: f64| -> f64 {
        let orbit = qutrit_orbit_bound(phi).expect("phi within [0, π]");
        let outer = match region {
            QutritRegion::Full => orbit,
            QutritRegion::Positive { zeta } => {
                orbit.min(qutrit_positivity_bound(phi, zeta).expect("validated angles"))
            }
        };
        let floor = edge_depth(phi, region);
        let scale = 1.0 - floor;
        // r = B (1 - u²): depth = floor + scale u², dr = 2 B u du.
        let radial = |u: f64| {
            let depth = floor + scale * u * u;
            qutrit_polar_integrand(metric, phi, depth) * 2.0 * outer * u
        };
        slot.absorb(integrate(
            radial,
            0.0,
            1.0,
            &inner_spec,
            Execution::Sequential,
        ))
    };
    let q = integrate(ray, 0.0, PI, spec, spec.execution)?;
    slot.check(PI, spec.rel_tol * q.value.abs())?;
    Ok(estimate(q))
}

struct NestedSimplex<'a> {
    metric: MetricKind,
    n: usize,
    kernel: Option<&'a [f64]>,
    inner: QuadratureSpec,
    slot: ErrorSlot,
}

impl NestedSimplex<'_> {
    /// Integral over the remaining coordinates given the leading `prefix`.
    fn level(&self, prefix: &[f64]) -> f64 {
        let k = prefix.len();
        let mass = 1.0 - prefix.iter().sum::<f64>();
        let prev = prefix.last().copied().unwrap_or(1.0);
        let remaining = self.n - k;
        let lo = mass / remaining as f64;
        let mut hi = prev.min(mass);
        if remaining == 2 {
            if let Some(pi) = self.kernel {
                let paired: f64 = prefix.iter().zip(pi).map(|(r, p)| r * p).sum();
                let slack = paired + mass * pi[self.n - 1];
                let slope = pi[self.n - 2] - pi[self.n - 1];
                if slope < 0.0 {
                    hi = hi.min(slack / -slope);
                } else if slack < 0.0 {
                    return 0.0;
                }
            }
            if hi <= lo {
                return 0.0;
            }
            let width = hi - lo;
            let spare = mass - hi;
            // x = hi - width v², clustering nodes at the r_N → 0 edge.
            let point = |v: f64| {
                let step = width * v * v;
                let mut r = prefix.to_vec();
                r.push(hi - step);
                r.push(spare + step);
                if self.metric != MetricKind::Hs && r.iter().any(|v| *v <= 0.0) {
                    return 0.0;
                }
                density_of(self.metric, &r) * 2.0 * width * v
            };
            return self.slot.absorb(integrate(
                point,
                0.0,
                1.0,
                &self.inner,
                Execution::Sequential,
            ));
        }
        if hi <= lo {
            return 0.0;
        }
        let next = |x: f64| {
            let mut p = prefix.to_vec();
            p.push(x);
            self.level(&p)
        };
        self.slot.absorb(integrate_smoothed(
            next,
            lo,
            hi,
            &self.inner,
            Execution::Sequential,
        ))
    }
}

/// Volume of the ordered simplex of dimension `n` (or its Wigner-positive
/// part when `kernel` is given), measure `density dr_1 ... dr_{n-1}`.
///
/// Cost grows geometrically with `n`; practical up to about `n = 5` with
/// loose tolerances.
pub fn orbit_volume_simplex(
    metric: MetricKind,
    n: usize,
    kernel: Option<&KernelSpectrum>,
    spec: &QuadratureSpec,
) -> Result<VolumeEstimate> {
    if n < 2 {
        return domain(format!("dimension must be at least 2, got {n}"));
    }
    if let Some(k) = kernel {
        if k.dim() != n {
            return domain(format!(
                "kernel has N = {} but the simplex has N = {n}",
                k.dim()
            ));
        }
    }
    spec.validate()?;
    let nested = NestedSimplex {
        metric,
        n,
        kernel: kernel.map(|k| k.values()),
        inner: spec.inner(),
        slot: ErrorSlot::default(),
    };
    let q = if n == 2 {
        // A single coordinate: the innermost level is the whole integral.
        let value = nested.level(&[]);
        Quadrature {
            value,
            error: 0.0,
            subdivisions: 0,
        }
    } else {
        let hi = 1.0;
        let lo = 1.0 / n as f64;
        let outer = |x: f64| nested.level(&[x]);
        integrate_smoothed(outer, lo, hi, spec, spec.execution)?
    };
    nested.slot.check(1.0, spec.rel_tol * q.value.abs())?;
    Ok(estimate(q))
}
