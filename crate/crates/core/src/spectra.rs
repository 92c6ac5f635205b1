//! Spectral coordinates on the orbit space.
//!
//! A density matrix enters every quantity computed by this crate only through
//! its eigenvalues, and a Stratonovich-Weyl kernel only through its own
//! eigenvalues. Both are stored canonically sorted: states in descending
//! order (a point of the ordered simplex), kernels in ascending order.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

/// Tolerance for the algebraic invariants (trace, purity of kernels).
pub const INVARIANT_TOL: f64 = 1e-12;

const SQRT_3: f64 = 1.732_050_807_568_877_2;

/// Eigenvalues of a density matrix, sorted descending.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct StateSpectrum(Vec<f64>);

impl StateSpectrum {
    /// Builds a spectrum from eigenvalues in any order.
    ///
    /// Entries that are negative by no more than [`INVARIANT_TOL`] are clamped
    /// to zero; anything else outside `[0, 1]`, or a trace that differs from one
    /// by more than the tolerance, is rejected.
    pub fn new(mut values: Vec<f64>) -> Result<Self> {
        if values.len() < 2 {
            return domain(format!(
                "a state spectrum needs at least 2 entries, got {}",
                values.len()
            ));
        }
        for v in values.iter_mut() {
            if !v.is_finite() || *v < -INVARIANT_TOL || *v > 1.0 + INVARIANT_TOL {
                return domain(format!("eigenvalue {v} outside [0, 1]"));
            }
            *v = v.clamp(0.0, 1.0);
        }
        let trace: f64 = values.iter().sum();
        if (trace - 1.0).abs() > INVARIANT_TOL {
            return domain(format!("eigenvalues sum to {trace}, expected 1"));
        }
        values.sort_by(|a, b| b.total_cmp(a));
        Ok(Self(values))
    }

    /// Normalizes non-negative weights to unit trace and sorts them.
    pub fn from_weights(mut weights: Vec<f64>) -> Result<Self> {
        let total: f64 = weights.iter().sum();
        if !(total > 0.0) || weights.iter().any(|w| *w < 0.0 || !w.is_finite()) {
            return domain("weights must be finite, non-negative and not all zero");
        }
        weights.iter_mut().for_each(|w| *w /= total);
        Self::new(weights)
    }

    /// The maximally mixed state of dimension `n`.
    pub fn maximally_mixed(n: usize) -> Result<Self> {
        Self::new(vec![1.0 / n as f64; n])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

impl AsRef<[f64]> for StateSpectrum {
    fn as_ref(&self) -> &[f64] {
        &self.0
    }
}

/// Eigenvalues of a Stratonovich-Weyl kernel, sorted ascending.
///
/// A kernel of dimension `N` has unit trace and `tr X² = N`, so its spectrum
/// lies on a sphere of squared radius `N - 1/N` centred at `(1/N, ..., 1/N)`
/// inside the trace-one hyperplane.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct KernelSpectrum(Vec<f64>);

impl KernelSpectrum {
    pub fn new(mut values: Vec<f64>) -> Result<Self> {
        let n = values.len();
        if n < 2 {
            return domain(format!(
                "a kernel spectrum needs at least 2 entries, got {n}"
            ));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return domain("kernel eigenvalues must be finite");
        }
        let trace: f64 = values.iter().sum();
        let purity: f64 = values.iter().map(|v| v * v).sum();
        if (trace - 1.0).abs() > INVARIANT_TOL {
            return domain(format!("kernel eigenvalues sum to {trace}, expected 1"));
        }
        if (purity - n as f64).abs() > INVARIANT_TOL * n as f64 {
            return domain(format!(
                "kernel eigenvalues have square sum {purity}, expected {n}"
            ));
        }
        values.sort_by(f64::total_cmp);
        Ok(Self(values))
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }
}

impl AsRef<[f64]> for KernelSpectrum {
    fn as_ref(&self) -> &[f64] {
        &self.0
    }
}

/// Label of a Wigner representation within the family of admissible kernels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ModuliPoint {
    /// The qubit kernel is unique.
    Qubit,
    /// Qutrit kernels form a one-parameter family indexed by an apex angle in `[0, π/3]`.
    Qutrit { zeta: f64 },
    /// General `N`: a unit vector with `N` components summing to zero.
    Direction { direction: Vec<f64> },
}

impl ModuliPoint {
    pub fn qutrit(zeta: f64) -> Result<Self> {
        check_zeta(zeta)?;
        Ok(Self::Qutrit { zeta })
    }

    pub fn direction(direction: Vec<f64>) -> Result<Self> {
        check_direction(&direction)?;
        Ok(Self::Direction { direction })
    }

    /// Dimension of the quantum system this moduli point belongs to.
    pub fn dim(&self) -> usize {
        match self {
            Self::Qubit => 2,
            Self::Qutrit { .. } => 3,
            Self::Direction { direction } => direction.len(),
        }
    }

    pub fn zeta(&self) -> Option<f64> {
        match self {
            Self::Qutrit { zeta } => Some(*zeta),
            _ => None,
        }
    }

    /// The kernel spectrum this point labels.
    pub fn kernel(&self) -> Result<KernelSpectrum> {
        match self {
            Self::Qubit => Ok(crate::sw_kernel::qubit_kernel_spectrum()),
            Self::Qutrit { zeta } => crate::sw_kernel::qutrit_kernel_spectrum(*zeta),
            Self::Direction { direction } => {
                crate::sw_kernel::kernel_spectrum_from_direction(direction)
            }
        }
    }
}

pub(crate) fn check_zeta(zeta: f64) -> Result<()> {
    if !(0.0..=PI / 3.0).contains(&zeta) {
        return domain(format!("zeta = {zeta} outside [0, π/3]"));
    }
    Ok(())
}

pub(crate) fn check_direction(u: &[f64]) -> Result<()> {
    if u.len() < 2 {
        return domain("a moduli direction needs at least 2 components");
    }
    let sum: f64 = u.iter().sum();
    let norm: f64 = u.iter().map(|x| x * x).sum::<f64>().sqrt();
    if sum.abs() > 1e-10 {
        return domain(format!("direction components sum to {sum}, expected 0"));
    }
    if (norm - 1.0).abs() > 1e-10 {
        return domain(format!("direction has norm {norm}, expected 1"));
    }
    Ok(())
}

/// Riemannian metric whose volume form weighs the orbit space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MetricKind {
    /// Hilbert-Schmidt (flat).
    Hs,
    /// Bures, the minimal monotone metric.
    Bures,
    /// Bogoliubov-Kubo-Mori.
    Bkm,
}

impl MetricKind {
    pub const ALL: [MetricKind; 3] = [MetricKind::Hs, MetricKind::Bures, MetricKind::Bkm];

    pub fn name(self) -> &'static str {
        match self {
            Self::Hs => "hs",
            Self::Bures => "bures",
            Self::Bkm => "bkm",
        }
    }
}

impl fmt::Display for MetricKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MetricKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "hs" | "hilbert-schmidt" => Ok(Self::Hs),
            "b" | "bures" => Ok(Self::Bures),
            "bkm" | "kubo-mori" => Ok(Self::Bkm),
            other => domain(format!(
                "unknown metric '{other}' (expected hs, bures or bkm)"
            )),
        }
    }
}

/// Polar coordinates of a qutrit spectrum in the trace-one plane.
///
/// The angle `phi` spans `[0, π]`; the physical angle in the eigenvalue plane
/// is `phi / 3`, which sweeps exactly one Weyl chamber.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QutritPolar {
    pub r: f64,
    pub phi: f64,
}

impl QutritPolar {
    pub fn new(r: f64, phi: f64) -> Result<Self> {
        if !(r >= 0.0) || !r.is_finite() {
            return domain(format!("polar radius {r} must be finite and non-negative"));
        }
        if !(0.0..=PI).contains(&phi) {
            return domain(format!("polar angle {phi} outside [0, π]"));
        }
        Ok(Self { r, phi })
    }
}

/// Unsorted eigenvalues `1/3 - (2r/√3) cos((φ + 2πk)/3)` for `k = 0, 1, 2`.
fn polar_eigenvalues(r: f64, phi: f64) -> [f64; 3] {
    let scale = 2.0 * r / SQRT_3;
    [0, 1, 2].map(|k| 1.0 / 3.0 - scale * ((phi + 2.0 * PI * k as f64) / 3.0).cos())
}

/// Qutrit spectrum at polar coordinates `p`.
///
/// Fails when the point lies outside the orbit space (a negative eigenvalue).
pub fn spectrum_from_polar(p: QutritPolar) -> Result<StateSpectrum> {
    let QutritPolar { r, phi } = QutritPolar::new(p.r, p.phi)?;
    let [l0, l1, l2] = polar_eigenvalues(r, phi);
    if l0 < -INVARIANT_TOL {
        return domain(format!(
            "polar point (r = {r}, phi = {phi}) lies outside the qutrit orbit space"
        ));
    }
    // k = 1 is the largest eigenvalue on [0, π], k = 0 the smallest.
    StateSpectrum::new(vec![l1, l2, l0])
}

/// Inverse of [`spectrum_from_polar`]. The centre maps to `phi = 0`.
pub fn polar_from_spectrum(s: &StateSpectrum) -> Result<QutritPolar> {
    if s.dim() != 3 {
        return domain(format!(
            "polar coordinates need a qutrit spectrum, got N = {}",
            s.dim()
        ));
    }
    let v = s.values();
    // Reorder to the k-indexing used by the forward map.
    let offsets = [v[2] - 1.0 / 3.0, v[0] - 1.0 / 3.0, v[1] - 1.0 / 3.0];
    let z: Complex64 = -offsets
        .iter()
        .enumerate()
        .map(|(k, x)| Complex64::from_polar(*x, -2.0 * PI * k as f64 / 3.0))
        .sum::<Complex64>();
    let r = z.norm() / SQRT_3;
    if r < 1e-15 {
        return Ok(QutritPolar { r: 0.0, phi: 0.0 });
    }
    let phi = (3.0 * z.arg()).clamp(0.0, PI);
    Ok(QutritPolar { r, phi })
}

/// Largest polar radius at angle `phi` that still lies in the orbit space.
pub(crate) fn qutrit_orbit_radius(phi: f64) -> f64 {
    1.0 / (2.0 * SQRT_3 * (phi / 3.0).cos())
}

/// Descending qutrit spectrum on the ray at angle `phi`, parametrized by the
/// relative depth `t = 1 - r / r_orbit(phi)` measured from the orbit boundary.
///
/// Written so that eigenvalues which vanish on the boundary are computed
/// without cancellation; quadrature nodes close to the boundary rely on this.
pub(crate) fn qutrit_ray_spectrum(phi: f64, depth: f64) -> [f64; 3] {
    let theta = phi / 3.0;
    let c0 = theta.cos();
    let c1 = (theta + 2.0 * PI / 3.0).cos();
    let c2 = (theta + 4.0 * PI / 3.0).cos();
    let gap1 = SQRT_3 * (theta + PI / 3.0).sin();
    let gap2 = SQRT_3 * ((PI - phi) / 3.0).sin();
    let denom = 3.0 * c0;
    [
        (gap1 + depth * c1) / denom,
        (gap2 + depth * c2) / denom,
        depth * c0 / denom,
    ]
}
