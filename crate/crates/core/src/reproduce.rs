//! The table of published values and how this crate recomputes them.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::Result;
use crate::indicators::{average_indicator, global_indicator, minimize_indicator, Evaluation};
use crate::integrate::{McSpec, McmcSpec, QuadratureSpec};
use crate::spectra::{MetricKind, ModuliPoint};

/// How a computed value is compared with its target.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Tolerance {
    Relative {
        bound: f64,
    },
    Absolute {
        bound: f64,
    },
    /// Within `k` standard errors of the estimate.
    Sigma {
        k: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub target: f64,
    pub value: f64,
    pub error: f64,
    pub tolerance: Tolerance,
    pub passed: bool,
}

impl Check {
    pub fn new(
        name: impl Into<String>,
        target: f64,
        value: f64,
        error: f64,
        tolerance: Tolerance,
    ) -> Self {
        let deviation = (value - target).abs();
        let passed = match tolerance {
            Tolerance::Relative { bound } => deviation <= bound * target.abs(),
            Tolerance::Absolute { bound } => deviation <= bound,
            Tolerance::Sigma { k } => deviation <= k * error,
        } && value.is_finite();
        Self {
            name: name.into(),
            target,
            value,
            error,
            tolerance,
            passed,
        }
    }
}

/// Settings for [`reproduce_paper`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReproduceOptions {
    pub quadrature: QuadratureSpec,
    /// Sampling checks are skipped when `None`.
    pub sampling: Option<McSpec>,
}

impl Default for ReproduceOptions {
    fn default() -> Self {
        Self {
            quadrature: QuadratureSpec::two_dimensional(),
            sampling: Some(McSpec::default()),
        }
    }
}

/// Qubit Bures indicator `(2/π)(arcsin(1/√3) - √2/3)`.
pub fn qubit_bures_target() -> f64 {
    2.0 / PI * ((1.0 / 3f64.sqrt()).asin() - 2f64.sqrt() / 3.0)
}

/// Recomputes every published number and compares it with its target.
pub fn reproduce_paper(options: &ReproduceOptions) -> Result<Vec<Check>> {
    let quad = Evaluation::Quadrature(options.quadrature);
    let fine = Evaluation::Quadrature(
        QuadratureSpec::one_dimensional().with_execution(options.quadrature.execution),
    );
    let qubit = ModuliPoint::Qubit;
    let rel = |bound| Tolerance::Relative { bound };
    let mut checks = Vec::new();

    let qubit_targets = [
        (MetricKind::Hs, 1.0 / (3.0 * 3f64.sqrt()), rel(1e-8)),
        (MetricKind::Bures, qubit_bures_target(), rel(1e-8)),
        (
            MetricKind::Bkm,
            0.049_550_6,
            Tolerance::Absolute { bound: 5e-8 },
        ),
    ];
    for (metric, target, tolerance) in qubit_targets {
        let closed = global_indicator(metric, &qubit, &Evaluation::ClosedForm)?;
        checks.push(Check::new(
            format!("qubit {metric} closed form"),
            target,
            closed.value,
            0.0,
            tolerance,
        ));
        let q = global_indicator(metric, &qubit, &fine)?;
        checks.push(Check::new(
            format!("qubit {metric} quadrature"),
            closed.value,
            q.value,
            q.error,
            rel(1e-8),
        ));
    }
    checks.push(Check::new(
        "qubit Bures printed value",
        0.09172,
        qubit_targets[1].1,
        0.0,
        Tolerance::Absolute { bound: 5e-6 },
    ));

    let min_hs = minimize_indicator(MetricKind::Hs, &Evaluation::ClosedForm)?;
    checks.push(Check::new(
        "qutrit HS minimizer",
        PI / 6.0,
        min_hs.zeta,
        0.0,
        Tolerance::Absolute { bound: 1e-4 },
    ));
    checks.push(Check::new(
        "qutrit HS minimum",
        21.0 / 31104.0,
        min_hs.value,
        0.0,
        rel(1e-8),
    ));
    checks.push(Check::new(
        "qutrit HS minimum printed",
        0.000675,
        min_hs.value,
        0.0,
        Tolerance::Absolute { bound: 5e-7 },
    ));
    let at_min = global_indicator(MetricKind::Hs, &ModuliPoint::qutrit(PI / 6.0)?, &quad)?;
    checks.push(Check::new(
        "qutrit HS quadrature at pi/6",
        21.0 / 31104.0,
        at_min.value,
        at_min.error,
        rel(1e-6),
    ));

    let averages = [
        (MetricKind::Hs, 0.001_363_68, 1e-4),
        (MetricKind::Bures, 0.000_191_65, 1e-2),
        (MetricKind::Bkm, 0.000_027_62, 1e-2),
    ];
    for (metric, target, bound) in averages {
        let avg = average_indicator(metric, &quad)?;
        checks.push(Check::new(
            format!("qutrit {metric} moduli average"),
            target,
            avg.value,
            avg.error,
            rel(bound),
        ));
    }

    if let Some(mc) = options.sampling {
        let sigma = Tolerance::Sigma { k: 3.0 };
        for (metric, target, _) in qubit_targets {
            let eval = match metric {
                MetricKind::Bkm => Evaluation::Mcmc(McmcSpec::from_mc(mc)),
                _ => Evaluation::MonteCarlo(mc),
            };
            let est = global_indicator(metric, &qubit, &eval)?;
            let label = est.method.name();
            checks.push(Check::new(
                format!("qubit {metric} {label}"),
                target,
                est.value,
                est.error,
                sigma,
            ));
        }
    }
    Ok(checks)
}
