//! Wigner positivity on the orbit space.
//!
//! The smallest value a Wigner function takes over phase space is the
//! smallest pairing `tr(ϱ U Δ U†)` over unitaries, which by the
//! rearrangement inequality is `Σ r_i π_i` with `r` descending and `π`
//! ascending. A state is Wigner-positive iff that pairing is non-negative.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::spectra::{
    check_zeta, qutrit_orbit_radius, KernelSpectrum, StateSpectrum, INVARIANT_TOL,
};

/// Default classification tolerance for analytically computed inputs.
pub const DEFAULT_POSITIVITY_TOL: f64 = 1e-12;

const SQRT_3: f64 = 1.732_050_807_568_877_2;

/// Bloch vector of a qubit state `(I + ξ·σ)/2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlochVector {
    pub xi: [f64; 3],
}

impl BlochVector {
    pub fn new(xi: [f64; 3]) -> Result<Self> {
        let norm_sq: f64 = xi.iter().map(|x| x * x).sum();
        if !(norm_sq <= 1.0 + INVARIANT_TOL) {
            return domain(format!("Bloch vector has squared length {norm_sq} > 1"));
        }
        Ok(Self { xi })
    }

    pub fn radius(&self) -> f64 {
        self.xi.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    /// Eigenvalues `(1 ± |ξ|)/2`.
    pub fn spectrum(&self) -> StateSpectrum {
        let rho = self.radius().min(1.0);
        StateSpectrum::new(vec![(1.0 + rho) / 2.0, (1.0 - rho) / 2.0])
            .expect("Bloch ball points have valid spectra")
    }
}

/// Minimal pairing of already-sorted slices (`r` descending, `pi` ascending).
#[inline]
pub(crate) fn min_pairing(r: &[f64], pi: &[f64]) -> f64 {
    r.iter().zip(pi).map(|(a, b)| a * b).sum()
}

/// Minimum of the Wigner function of a state with spectrum `r` in the
/// representation with kernel spectrum `k`.
pub fn min_wigner_value(r: &StateSpectrum, k: &KernelSpectrum) -> Result<f64> {
    if r.dim() != k.dim() {
        return domain(format!(
            "state has N = {} but kernel has N = {}",
            r.dim(),
            k.dim()
        ));
    }
    Ok(min_pairing(r.values(), k.values()))
}

/// Whether the state lies in the dual cone, i.e. its Wigner function is
/// non-negative everywhere (up to `tol`).
pub fn in_positive_cone(r: &StateSpectrum, k: &KernelSpectrum, tol: f64) -> Result<bool> {
    if !(tol >= 0.0) {
        return domain(format!("tolerance {tol} must be non-negative"));
    }
    Ok(min_wigner_value(r, k)? >= -tol)
}

fn check_phi(phi: f64) -> Result<()> {
    if !(0.0..=PI).contains(&phi) {
        return domain(format!("phi = {phi} outside [0, π]"));
    }
    Ok(())
}

/// Outer radius of the qutrit orbit space along the ray at angle `phi`.
pub fn qutrit_orbit_bound(phi: f64) -> Result<f64> {
    check_phi(phi)?;
    Ok(qutrit_orbit_radius(phi))
}

/// Outer radius of the Wigner-positive region along the ray at angle `phi`
/// for the kernel at apex angle `zeta`, or `+∞` when the ray never leaves it.
///
/// The orbit bound still applies; integrators take the minimum of the two.
pub fn qutrit_positivity_bound(phi: f64, zeta: f64) -> Result<f64> {
    check_phi(phi)?;
    check_zeta(zeta)?;
    let c = (phi / 3.0 + zeta - PI / 3.0).cos();
    Ok(if c > 0.0 {
        1.0 / (4.0 * SQRT_3 * c)
    } else {
        f64::INFINITY
    })
}

/// Qubit Wigner function `1/2 + (√3/2) ξ·n` on the unit sphere.
pub fn qubit_wigner(xi: &BlochVector, n: [f64; 3]) -> Result<f64> {
    let norm_sq: f64 = n.iter().map(|x| x * x).sum();
    if (norm_sq.sqrt() - 1.0).abs() > INVARIANT_TOL {
        return domain(format!(
            "phase-space point has norm {}, expected 1",
            norm_sq.sqrt()
        ));
    }
    let dot: f64 = xi.xi.iter().zip(n).map(|(a, b)| a * b).sum();
    Ok(0.5 + SQRT_3 / 2.0 * dot)
}
