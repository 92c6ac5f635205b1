//! Global indicators of Wigner positivity.
//!
//! `Q_N[g | ν]` is the volume of the Wigner-positive part of the orbit space
//! divided by the volume of the whole orbit space, both measured with the
//! density induced by the metric `g`. For qutrits the family of Wigner
//! representations is one-dimensional and the indicator can also be
//! averaged or minimized over it.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::integrate::mcmc::mcmc_fraction;
use crate::integrate::sampling::sample_fraction;
use crate::integrate::volume::{
    orbit_volume_qubit, orbit_volume_qutrit, orbit_volume_simplex, QutritRegion,
};
use crate::integrate::{
    integrate, Ensemble, Execution, FractionEstimate, McSpec, McmcSpec, MethodTag, QuadratureSpec,
};
use crate::measures::qubit_ball_volume;
use crate::positivity::min_pairing;
use crate::spectra::{check_zeta, KernelSpectrum, MetricKind, ModuliPoint, StateSpectrum};
use crate::sw_kernel::qubit_kernel_spectrum;

/// How an indicator is evaluated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Evaluation {
    ClosedForm,
    Quadrature(QuadratureSpec),
    /// Exact matrix-model sampling (Hilbert-Schmidt and Bures only).
    MonteCarlo(McSpec),
    Mcmc(McmcSpec),
}

impl Evaluation {
    pub fn method(&self) -> MethodTag {
        match self {
            Self::ClosedForm => MethodTag::ClosedForm,
            Self::Quadrature(_) => MethodTag::Quadrature,
            Self::MonteCarlo(_) => MethodTag::MonteCarlo,
            Self::Mcmc(_) => MethodTag::Mcmc,
        }
    }
}

/// Value of an indicator with its provenance.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IndicatorResult {
    pub value: f64,
    /// Quadrature error estimate or sampling standard error.
    pub error: f64,
    pub metric: MetricKind,
    #[serde(rename = "N")]
    pub n: usize,
    /// The representation, or `None` for a moduli average.
    pub moduli: Option<ModuliPoint>,
    pub averaged: bool,
    pub method: MethodTag,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub acceptance: Option<f64>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

impl IndicatorResult {
    fn exact(
        value: f64,
        error: f64,
        metric: MetricKind,
        moduli: &ModuliPoint,
        method: MethodTag,
    ) -> Self {
        Self {
            value: value.clamp(0.0, 1.0),
            error: error.abs(),
            metric,
            n: moduli.dim(),
            moduli: Some(moduli.clone()),
            averaged: false,
            method,
            samples: None,
            acceptance: None,
            warnings: Vec::new(),
        }
    }

    fn sampled(
        est: FractionEstimate,
        metric: MetricKind,
        moduli: Option<&ModuliPoint>,
        n: usize,
    ) -> Self {
        Self {
            value: est.value,
            error: est.std_error,
            metric,
            n,
            moduli: moduli.cloned(),
            averaged: moduli.is_none(),
            method: est.method,
            samples: Some(est.samples),
            acceptance: est.acceptance,
            warnings: est.warnings,
        }
    }

    /// The qutrit apex angle, when the result belongs to one.
    pub fn zeta(&self) -> Option<f64> {
        self.moduli.as_ref().and_then(ModuliPoint::zeta)
    }
}

/// `Q₃(ζ)` for the Hilbert-Schmidt qutrit:
/// `(1 + 20 cos²(ζ - π/6)) / (128 (4 cos²(ζ - π/6) - 1)⁵)`.
pub fn qutrit_indicator_closed_form(zeta: f64) -> Result<f64> {
    check_zeta(zeta)?;
    let c2 = (zeta - PI / 6.0).cos().powi(2);
    Ok((1.0 + 20.0 * c2) / (128.0 * (4.0 * c2 - 1.0).powi(5)))
}

/// Largest Bloch radius with a non-negative Wigner function for a qubit kernel.
fn qubit_positive_radius(k: &KernelSpectrum) -> f64 {
    let [lo, hi] = [k.values()[0], k.values()[1]];
    ((lo + hi) / (hi - lo)).clamp(0.0, 1.0)
}

fn ratio(num: (f64, f64), den: (f64, f64)) -> (f64, f64) {
    let value = num.0 / den.0;
    let error = value.abs() * (num.1 / num.0.abs().max(f64::MIN_POSITIVE) + den.1 / den.0.abs());
    (value, error)
}

fn positive_predicate(
    kernel: &KernelSpectrum,
) -> impl Fn(&StateSpectrum) -> bool + Sync + Send + '_ {
    move |s: &StateSpectrum| min_pairing(s.values(), kernel.values()) >= 0.0
}

/// `Q_N[g | ν]`: the relative volume of Wigner-positive states.
pub fn global_indicator(
    metric: MetricKind,
    moduli: &ModuliPoint,
    eval: &Evaluation,
) -> Result<IndicatorResult> {
    let kernel = moduli.kernel()?;
    let n = kernel.dim();
    match eval {
        Evaluation::ClosedForm => match (n, moduli) {
            (2, _) => {
                let radius = qubit_positive_radius(&kernel);
                let value = qubit_ball_volume(metric, radius)? / qubit_ball_volume(metric, 1.0)?;
                Ok(IndicatorResult::exact(
                    value,
                    0.0,
                    metric,
                    moduli,
                    MethodTag::ClosedForm,
                ))
            }
            (3, ModuliPoint::Qutrit { zeta }) if metric == MetricKind::Hs => {
                let value = qutrit_indicator_closed_form(*zeta)?;
                Ok(IndicatorResult::exact(
                    value,
                    0.0,
                    metric,
                    moduli,
                    MethodTag::ClosedForm,
                ))
            }
            _ => Err(Error::Unsupported(format!(
                "no closed form for the {metric} indicator at N = {n}"
            ))),
        },
        Evaluation::Quadrature(spec) => {
            let (value, error) = match (n, moduli) {
                (2, _) => {
                    let pos = orbit_volume_qubit(metric, qubit_positive_radius(&kernel), spec)?;
                    let full = orbit_volume_qubit(metric, 1.0, spec)?;
                    ratio((pos.value, pos.std_error), (full.value, full.std_error))
                }
                (3, ModuliPoint::Qutrit { zeta }) => {
                    let pos =
                        orbit_volume_qutrit(metric, QutritRegion::Positive { zeta: *zeta }, spec)?;
                    let full = orbit_volume_qutrit(metric, QutritRegion::Full, spec)?;
                    ratio((pos.value, pos.std_error), (full.value, full.std_error))
                }
                _ => {
                    let pos = orbit_volume_simplex(metric, n, Some(&kernel), spec)?;
                    let full = orbit_volume_simplex(metric, n, None, spec)?;
                    ratio((pos.value, pos.std_error), (full.value, full.std_error))
                }
            };
            Ok(IndicatorResult::exact(
                value,
                error,
                metric,
                moduli,
                MethodTag::Quadrature,
            ))
        }
        Evaluation::MonteCarlo(mc) => {
            let ensemble = matrix_model(metric)?;
            let est = sample_fraction(ensemble, n, mc, positive_predicate(&kernel))?;
            Ok(IndicatorResult::sampled(est, metric, Some(moduli), n))
        }
        Evaluation::Mcmc(spec) => {
            let est = mcmc_fraction(metric, n, spec, positive_predicate(&kernel))?;
            Ok(IndicatorResult::sampled(est, metric, Some(moduli), n))
        }
    }
}

/// The exact random-matrix ensemble of a metric, where one is known.
pub fn matrix_model(metric: MetricKind) -> Result<Ensemble> {
    match metric {
        MetricKind::Hs => Ok(Ensemble::Hs),
        MetricKind::Bures => Ok(Ensemble::Bures),
        MetricKind::Bkm => Err(Error::Unsupported(
            "the BKM ensemble has no matrix-model sampler; use MCMC".into(),
        )),
    }
}

/// Qutrit indicator as a function of ζ with the full-orbit volume computed once.
struct QutritCurve {
    metric: MetricKind,
    full: f64,
    spec: QuadratureSpec,
}

impl QutritCurve {
    fn new(metric: MetricKind, spec: &QuadratureSpec) -> Result<Self> {
        let spec = spec.with_execution(Execution::Sequential);
        let full = orbit_volume_qutrit(metric, QutritRegion::Full, &spec)?.value;
        Ok(Self { metric, full, spec })
    }

    fn at(&self, zeta: f64) -> Result<f64> {
        Ok(
            orbit_volume_qutrit(self.metric, QutritRegion::Positive { zeta }, &self.spec)?.value
                / self.full,
        )
    }
}

/// Length fraction of `[0, π/3]` on which a qutrit state is Wigner-positive.
///
/// Over that range the kernel eigenvalues keep their order, so the minimal
/// pairing is the sinusoid `1/3 + (4/3)|C| cos(ζ + arg C)`.
pub fn positive_zeta_fraction(s: &StateSpectrum) -> Result<f64> {
    if s.dim() != 3 {
        return domain(format!(
            "positive_zeta_fraction needs a qutrit, got N = {}",
            s.dim()
        ));
    }
    // Ascending kernel offsets are (4/3) cos(ζ + a) for a = π, π/3, -π/3.
    let phases = [PI, PI / 3.0, -PI / 3.0];
    let (mut re, mut im) = (0.0, 0.0);
    for (x, a) in s.values().iter().zip(phases) {
        re += (x - 1.0 / 3.0) * a.cos();
        im += (x - 1.0 / 3.0) * a.sin();
    }
    let amplitude = (re * re + im * im).sqrt();
    if 4.0 * amplitude <= 1.0 {
        return Ok(1.0);
    }
    // Negative where cos(ζ + γ) < -1/(4|C|), an arc centred on π.
    let gamma = im.atan2(re);
    let half_width = (-1.0 / (4.0 * amplitude)).acos();
    let (neg_lo, neg_hi) = (half_width, 2.0 * PI - half_width);
    let start = gamma.rem_euclid(2.0 * PI);
    let end = start + PI / 3.0;
    let overlap = |lo: f64, hi: f64| (end.min(hi) - start.max(lo)).max(0.0);
    let negative = overlap(neg_lo, neg_hi) + overlap(neg_lo + 2.0 * PI, neg_hi + 2.0 * PI);
    Ok(1.0 - negative / (PI / 3.0))
}

/// Average of `Q₃(ζ)` over the qutrit moduli space with the uniform measure
/// `3/π dζ` on `[0, π/3]`.
pub fn average_indicator(metric: MetricKind, eval: &Evaluation) -> Result<IndicatorResult> {
    let averaged = |value: f64, error: f64, method| IndicatorResult {
        value: value.clamp(0.0, 1.0),
        error,
        metric,
        n: 3,
        moduli: None,
        averaged: true,
        method,
        samples: None,
        acceptance: None,
        warnings: Vec::new(),
    };
    match eval {
        Evaluation::ClosedForm => {
            if metric != MetricKind::Hs {
                return Err(Error::Unsupported(format!(
                    "no closed form for the {metric} qutrit indicator"
                )));
            }
            let spec = QuadratureSpec::one_dimensional().with_rel_tol(1e-12);
            let q = integrate(
                |z| qutrit_indicator_closed_form(z).unwrap_or(f64::NAN),
                0.0,
                PI / 3.0,
                &spec,
                Execution::Sequential,
            )?;
            Ok(averaged(
                q.value * 3.0 / PI,
                q.error * 3.0 / PI,
                MethodTag::ClosedForm,
            ))
        }
        Evaluation::Quadrature(spec) => {
            let curve = QutritCurve::new(metric, &spec.inner_for_average())?;
            let failure = std::sync::Mutex::new(None);
            let f = |z: f64| match curve.at(z) {
                Ok(v) => v,
                Err(e) => {
                    failure.lock().expect("poisoned").get_or_insert(e);
                    f64::NAN
                }
            };
            let q = integrate(f, 0.0, PI / 3.0, spec, spec.execution);
            if let Some(e) = failure.into_inner().expect("poisoned") {
                return Err(e);
            }
            let q = q?;
            Ok(averaged(
                q.value * 3.0 / PI,
                q.error * 3.0 / PI,
                MethodTag::Quadrature,
            ))
        }
        Evaluation::MonteCarlo(mc) => {
            let ensemble = matrix_model(metric)?;
            let est = crate::integrate::sampling::sample_mean(ensemble, 3, mc, |s| {
                positive_zeta_fraction(s).expect("qutrit sample")
            })?;
            Ok(IndicatorResult::sampled(est, metric, None, 3))
        }
        Evaluation::Mcmc(spec) => {
            let est = crate::integrate::mcmc::mcmc_mean(metric, 3, spec, |s| {
                positive_zeta_fraction(s).expect("qutrit sample")
            })?;
            Ok(IndicatorResult::sampled(est, metric, None, 3))
        }
    }
}

impl QuadratureSpec {
    /// Tolerances for the per-ζ volumes inside a moduli average.
    fn inner_for_average(&self) -> Self {
        Self {
            rel_tol: (self.rel_tol * 0.1).max(1e-13),
            ..*self
        }
    }
}

/// Location and value of the minimum of `Q₃(ζ)` over `[0, π/3]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IndicatorMinimum {
    pub metric: MetricKind,
    pub zeta: f64,
    pub value: f64,
    pub evaluations: usize,
    pub method: MethodTag,
}

/// Tolerance on ζ for [`minimize_indicator`].
pub const ZETA_TOL: f64 = 1e-6;

/// Golden-section search for the representation minimizing `Q₃`.
pub fn minimize_indicator(metric: MetricKind, eval: &Evaluation) -> Result<IndicatorMinimum> {
    let objective: Box<dyn Fn(f64) -> Result<f64>> = match eval {
        Evaluation::ClosedForm if metric == MetricKind::Hs => {
            Box::new(qutrit_indicator_closed_form)
        }
        Evaluation::Quadrature(spec) => {
            let curve = QutritCurve::new(metric, spec)?;
            Box::new(move |z| curve.at(z))
        }
        _ => {
            return Err(Error::Unsupported(format!(
                "minimization needs a deterministic {metric} evaluation (closed form or quadrature)"
            )))
        }
    };
    let (zeta, value, evaluations) = golden_section(&objective, 0.0, PI / 3.0, ZETA_TOL)?;
    Ok(IndicatorMinimum {
        metric,
        zeta,
        value,
        evaluations,
        method: eval.method(),
    })
}

fn golden_section(
    f: &dyn Fn(f64) -> Result<f64>,
    mut a: f64,
    mut b: f64,
    tol: f64,
) -> Result<(f64, f64, usize)> {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c)?, f(d)?);
    let mut evaluations = 2;
    while (b - a).abs() > tol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d)?;
        }
        evaluations += 1;
    }
    let x = 0.5 * (a + b);
    let fx = f(x)?;
    Ok((x, fx, evaluations + 1))
}

/// Probability that a qubit drawn from the metric's ensemble, conditioned on
/// lying in the Bloch ball of radius `radius`, has a non-negative Wigner
/// function.
pub fn qubit_positivity_probability(metric: MetricKind, radius: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&radius) {
        return domain(format!("Bloch radius {radius} outside [0, 1]"));
    }
    let critical = qubit_positive_radius(&qubit_kernel_spectrum());
    if radius <= critical {
        return Ok(1.0);
    }
    Ok(qubit_ball_volume(metric, critical)? / qubit_ball_volume(metric, radius)?)
}

/// One row of the qubit positivity-probability curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurvePoint {
    pub radius: f64,
    pub hs: f64,
    pub bures: f64,
    pub bkm: f64,
}

/// The curve on `points` equally spaced radii from 0 to 1 inclusive.
pub fn positivity_curve(points: usize) -> Result<Vec<CurvePoint>> {
    if points < 2 {
        return domain(format!("a curve needs at least 2 points, got {points}"));
    }
    (0..points)
        .map(|i| {
            let radius = i as f64 / (points - 1) as f64;
            Ok(CurvePoint {
                radius,
                hs: qubit_positivity_probability(MetricKind::Hs, radius)?,
                bures: qubit_positivity_probability(MetricKind::Bures, radius)?,
                bkm: qubit_positivity_probability(MetricKind::Bkm, radius)?,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::positivity::min_wigner_value;
    use crate::spectra::{spectrum_from_polar, QutritPolar};
    use crate::sw_kernel::qutrit_kernel_spectrum;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    #[test]
    fn closed_form_values() {
        assert_relative_eq!(
            qutrit_indicator_closed_form(PI / 6.0).unwrap(),
            21.0 / 31104.0,
            max_relative = 1e-14
        );
        assert_relative_eq!(
            qutrit_indicator_closed_form(0.0).unwrap(),
            1.0 / 256.0,
            max_relative = 1e-13
        );
        assert!(qutrit_indicator_closed_form(1.2).is_err());
        for i in 0..20 {
            let z = PI / 3.0 * i as f64 / 19.0;
            assert_relative_eq!(
                qutrit_indicator_closed_form(z).unwrap(),
                qutrit_indicator_closed_form(PI / 3.0 - z).unwrap(),
                max_relative = 1e-12
            );
        }
    }

    #[test]
    fn qubit_indicators() {
        let q = |m| {
            global_indicator(m, &ModuliPoint::Qubit, &Evaluation::ClosedForm)
                .unwrap()
                .value
        };
        assert_relative_eq!(
            q(MetricKind::Hs),
            1.0 / (3.0 * 3f64.sqrt()),
            max_relative = 1e-14
        );
        assert_abs_diff_eq!(q(MetricKind::Bures), 0.09172, epsilon = 5e-6);
        assert_abs_diff_eq!(q(MetricKind::Bkm), 0.049_550_6, epsilon = 5e-8);
    }

    #[test]
    fn unsupported_paths_are_reported() {
        let m = ModuliPoint::qutrit(0.3).unwrap();
        assert!(matches!(
            global_indicator(MetricKind::Bures, &m, &Evaluation::ClosedForm),
            Err(Error::Unsupported(_))
        ));
        let mc = Evaluation::MonteCarlo(McSpec::new(10, 0));
        assert!(matches!(
            global_indicator(MetricKind::Bkm, &m, &mc),
            Err(Error::Unsupported(_))
        ));
        assert!(minimize_indicator(MetricKind::Hs, &mc).is_err());
    }

    #[test]
    fn closed_form_matches_quadrature_on_grid() {
        let eval = Evaluation::Quadrature(QuadratureSpec::two_dimensional().with_rel_tol(1e-9));
        for i in 0..10 {
            let zeta = PI / 3.0 * i as f64 / 9.0;
            let m = ModuliPoint::qutrit(zeta).unwrap();
            let quad = global_indicator(MetricKind::Hs, &m, &eval).unwrap();
            let closed = global_indicator(MetricKind::Hs, &m, &Evaluation::ClosedForm).unwrap();
            assert_relative_eq!(quad.value, closed.value, max_relative = 1e-6);
        }
    }

    #[test]
    fn zeta_fraction_matches_grid_scan() {
        let grid = 20_000;
        for (r_frac, phi) in [
            (0.1, 0.3),
            (0.45, 1.0),
            (0.7, 2.5),
            (0.9, 0.05),
            (0.3, 3.1),
            (0.99, 1.7),
        ] {
            let r = r_frac / (2.0 * 3f64.sqrt() * (phi / 3.0_f64).cos());
            let s = spectrum_from_polar(QutritPolar::new(r, phi).unwrap()).unwrap();
            let positive = (0..grid)
                .filter(|i| {
                    let zeta = PI / 3.0 * (*i as f64 + 0.5) / grid as f64;
                    min_wigner_value(&s, &qutrit_kernel_spectrum(zeta).unwrap()).unwrap() >= 0.0
                })
                .count();
            assert_abs_diff_eq!(
                positive_zeta_fraction(&s).unwrap(),
                positive as f64 / grid as f64,
                epsilon = 2e-4
            );
        }
        assert!(positive_zeta_fraction(&StateSpectrum::new(vec![0.5, 0.5]).unwrap()).is_err());
    }

    #[test]
    fn closed_form_average() {
        let avg = average_indicator(MetricKind::Hs, &Evaluation::ClosedForm).unwrap();
        assert_relative_eq!(avg.value, 0.001_363_68, max_relative = 1e-4);
        assert!(avg.averaged && avg.moduli.is_none());
    }

    #[test]
    fn minimum_from_closed_form() {
        let m = minimize_indicator(MetricKind::Hs, &Evaluation::ClosedForm).unwrap();
        assert_abs_diff_eq!(m.zeta, PI / 6.0, epsilon = 1e-4);
        assert_relative_eq!(m.value, 21.0 / 31104.0, max_relative = 1e-8);
    }

    #[test]
    fn probability_curve_properties() {
        let curve = positivity_curve(200).unwrap();
        let critical = 1.0 / 3f64.sqrt();
        for w in curve.windows(2) {
            assert!(w[1].hs <= w[0].hs && w[1].bures <= w[0].bures && w[1].bkm <= w[0].bkm);
        }
        for p in &curve {
            if p.radius <= critical {
                assert_eq!((p.hs, p.bures, p.bkm), (1.0, 1.0, 1.0));
            } else {
                assert!(p.hs >= p.bures && p.bures >= p.bkm);
            }
        }
        let last = curve.last().unwrap();
        assert_relative_eq!(last.hs, 0.192_450_089_729_875_3, max_relative = 1e-12);
        assert_abs_diff_eq!(last.bkm, 0.049_550_6, epsilon = 5e-8);
        assert!(positivity_curve(1).is_err());
        assert!(qubit_positivity_probability(MetricKind::Hs, 1.2).is_err());
        assert_eq!(
            qubit_positivity_probability(MetricKind::Bkm, 0.0).unwrap(),
            1.0
        );
    }
}
