//! Global indicators of Wigner positivity for finite-dimensional quantum
//! states.
//!
//! A Wigner representation of an `N`-level system is fixed by the spectrum
//! of its Stratonovich-Weyl kernel. A state's Wigner function is non-negative
//! everywhere exactly when the minimal pairing between its eigenvalues and
//! the kernel eigenvalues is non-negative. The global indicator `Q_N` is the
//! share of the orbit space (the ordered eigenvalue simplex) where that
//! holds, weighted by the volume density of a Riemannian metric on states.
//!
//! ```
//! use classicality::{global_indicator, Evaluation, MetricKind, ModuliPoint};
//!
//! let q = global_indicator(MetricKind::Hs, &ModuliPoint::Qubit, &Evaluation::ClosedForm).unwrap();
//! assert!((q.value - 1.0 / (3.0 * 3f64.sqrt())).abs() < 1e-12);
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod indicators;
pub mod integrate;
pub mod measures;
pub mod positivity;
pub mod reproduce;
pub mod spectra;
pub mod sw_kernel;

pub use error::{Error, Result};
pub use indicators::{
    average_indicator, global_indicator, minimize_indicator, positive_zeta_fraction,
    positivity_curve, qubit_positivity_probability, qutrit_indicator_closed_form, CurvePoint,
    Evaluation, IndicatorMinimum, IndicatorResult,
};
pub use integrate::{Execution, McSpec, McmcSpec, MethodTag, QuadratureSpec};
pub use positivity::{in_positive_cone, min_wigner_value};
pub use spectra::{KernelSpectrum, MetricKind, ModuliPoint, QutritPolar, StateSpectrum};
