//! Spectra of Stratonovich-Weyl kernels.
//!
//! Every admissible kernel spectrum sits on the sphere `Σπ = 1, Σπ² = N`.
//! The general parametrization is a unit direction in the traceless
//! hyperplane; the qubit and qutrit closed forms are special cases of it.

use crate::error::Result;
use crate::spectra::{check_direction, check_zeta, KernelSpectrum};

/// The unique qubit kernel spectrum `((1 - √3)/2, (1 + √3)/2)`.
pub fn qubit_kernel_spectrum() -> KernelSpectrum {
    let s3 = 3f64.sqrt();
    KernelSpectrum::new(vec![(1.0 - s3) / 2.0, (1.0 + s3) / 2.0])
        .expect("qubit kernel satisfies the trace constraints")
}

/// Qutrit kernel spectrum at apex angle `zeta ∈ [0, π/3]`.
pub fn qutrit_kernel_spectrum(zeta: f64) -> Result<KernelSpectrum> {
    check_zeta(zeta)?;
    let s3 = 3f64.sqrt();
    let (sin, cos) = zeta.sin_cos();
    KernelSpectrum::new(vec![
        1.0 / 3.0 + 2.0 / s3 * sin + 2.0 / 3.0 * cos,
        1.0 / 3.0 - 2.0 / s3 * sin + 2.0 / 3.0 * cos,
        1.0 / 3.0 - 4.0 / 3.0 * cos,
    ])
}

/// Kernel spectrum `π_i = 1/N + √(N - 1/N) u_i` for a unit, traceless `u`.
pub fn kernel_spectrum_from_direction(u: &[f64]) -> Result<KernelSpectrum> {
    check_direction(u)?;
    let n = u.len() as f64;
    // Re-project so the result meets the kernel invariants to rounding.
    let mean = u.iter().sum::<f64>() / n;
    let norm = u.iter().map(|x| (x - mean).powi(2)).sum::<f64>().sqrt();
    let radius = (n - 1.0 / n).sqrt();
    KernelSpectrum::new(
        u.iter()
            .map(|x| 1.0 / n + radius * (x - mean) / norm)
            .collect(),
    )
}

/// Unit direction of a kernel spectrum relative to the uniform point,
/// in the same (ascending) order as the spectrum.
pub fn direction_from_kernel(k: &KernelSpectrum) -> Vec<f64> {
    let n = k.dim() as f64;
    let radius = (n - 1.0 / n).sqrt();
    k.values().iter().map(|p| (p - 1.0 / n) / radius).collect()
}

/// Squared Euclidean distance of a kernel spectrum from `(1/N, ..., 1/N)`.
pub fn distance_sq_from_uniform(k: &KernelSpectrum) -> f64 {
    let n = k.dim() as f64;
    k.values().iter().map(|p| (p - 1.0 / n).powi(2)).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_distr::{Distribution, StandardNormal};
    use std::f64::consts::PI;

    fn assert_on_sphere(k: &KernelSpectrum) {
        let n = k.dim() as f64;
        let v = k.values();
        assert_abs_diff_eq!(v.iter().sum::<f64>(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(v.iter().map(|x| x * x).sum::<f64>(), n, epsilon = 1e-12);
        assert_abs_diff_eq!(distance_sq_from_uniform(k), n - 1.0 / n, epsilon = 1e-12);
        assert!(v.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn qubit_kernel_values() {
        let k = qubit_kernel_spectrum();
        assert_abs_diff_eq!(k.values()[0], -0.366_025_403_784_438_6, epsilon = 1e-15);
        assert_abs_diff_eq!(k.values()[1], 1.366_025_403_784_438_6, epsilon = 1e-15);
        assert_on_sphere(&k);
    }

    #[test]
    fn qutrit_kernel_at_pi_over_six() {
        let k = qutrit_kernel_spectrum(PI / 6.0).unwrap();
        let s3 = 3f64.sqrt();
        let expected = [(1.0 - 2.0 * s3) / 3.0, 1.0 / 3.0, (1.0 + 2.0 * s3) / 3.0];
        for (a, b) in k.values().iter().zip(expected) {
            assert_abs_diff_eq!(*a, b, epsilon = 1e-14);
        }
    }

    #[test]
    fn qutrit_kernel_at_zero() {
        let k = qutrit_kernel_spectrum(0.0).unwrap();
        for (a, b) in k.values().iter().zip([-1.0, 1.0, 1.0]) {
            assert_abs_diff_eq!(*a, b, epsilon = 1e-15);
        }
        assert_on_sphere(&k);
    }

    #[test]
    fn qutrit_kernel_rejects_out_of_range() {
        assert!(qutrit_kernel_spectrum(-1e-3).is_err());
        assert!(qutrit_kernel_spectrum(1.1).is_err());
    }

    #[test]
    fn direction_reproduces_qubit_kernel() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let k = kernel_spectrum_from_direction(&[-h, h]).unwrap();
        for (a, b) in k.values().iter().zip(qubit_kernel_spectrum().values()) {
            assert_abs_diff_eq!(*a, *b, epsilon = 1e-15);
        }
    }

    #[test]
    fn direction_covers_qutrit_family() {
        for i in 0..100 {
            let zeta = PI / 3.0 * i as f64 / 99.0;
            let k = qutrit_kernel_spectrum(zeta).unwrap();
            let u = direction_from_kernel(&k);
            let back = kernel_spectrum_from_direction(&u).unwrap();
            for (a, b) in k.values().iter().zip(back.values()) {
                assert_abs_diff_eq!(*a, *b, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn direction_validation() {
        assert!(kernel_spectrum_from_direction(&[1.0, 0.0, -1.0]).is_err());
        assert!(kernel_spectrum_from_direction(&[0.6, 0.8]).is_err());
        assert!(kernel_spectrum_from_direction(&[1.0]).is_err());
    }

    #[test]
    fn random_directions_stay_on_sphere() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for n in 2..=6 {
            for _ in 0..10_000 {
                let mut u: Vec<f64> = (0..n).map(|_| StandardNormal.sample(&mut rng)).collect();
                // Project twice: one pass loses the trace to cancellation for near-equal draws.
                for _ in 0..2 {
                    let mean = u.iter().sum::<f64>() / n as f64;
                    u.iter_mut().for_each(|x| *x -= mean);
                    let norm = u.iter().map(|x| x * x).sum::<f64>().sqrt();
                    u.iter_mut().for_each(|x| *x /= norm);
                }
                assert_on_sphere(&kernel_spectrum_from_direction(&u).unwrap());
            }
        }
    }

    proptest! {
        #[test]
        fn qutrit_constraints_hold(zeta in 0.0..=PI / 3.0) {
            let k = qutrit_kernel_spectrum(zeta).unwrap();
            let v = k.values();
            prop_assert!((v.iter().sum::<f64>() - 1.0).abs() < 1e-12);
            prop_assert!((v.iter().map(|x| x * x).sum::<f64>() - 3.0).abs() < 1e-12);
        }
    }
}
