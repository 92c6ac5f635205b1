//! Globally adaptive 21-point Gauss-Kronrod quadrature.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use super::exec::{map_points, Execution};
use super::QuadratureSpec;
use crate::error::{domain, Error, Result};

// Kronrod abscissae on [0, 1); the Gauss nodes are the odd-indexed ones.
#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689,
    0.973_906_528_517_171_720_077_964_012_084,
    0.930_157_491_355_708_226_001_207_180_060,
    0.865_063_366_688_984_510_732_096_688_423,
    0.780_817_726_586_416_897_063_717_578_345,
    0.679_409_568_299_024_406_234_327_365_115,
    0.562_757_134_668_604_683_339_000_099_273,
    0.433_395_394_129_247_190_799_265_943_166,
    0.294_392_862_701_460_198_131_126_603_104,
    0.148_874_338_981_631_210_884_826_001_130,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062,
    0.032_558_162_307_964_727_478_818_972_459,
    0.054_755_896_574_351_996_031_381_300_245,
    0.075_039_674_810_919_952_767_043_140_916,
    0.093_125_454_583_697_605_535_065_465_083,
    0.109_387_158_802_297_641_899_210_590_326,
    0.123_491_976_262_065_851_077_208_490_615,
    0.134_709_217_311_473_325_928_054_001_772,
    0.142_775_938_577_060_080_797_094_273_139,
    0.147_739_104_901_338_491_374_841_515_972,
    0.149_445_554_002_916_905_664_936_468_390,
];

#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893,
    0.149_451_349_150_580_593_145_776_339_658,
    0.219_086_362_515_982_043_995_534_934_228,
    0.269_266_719_309_996_355_091_226_921_569,
    0.295_524_224_714_752_870_173_892_994_651,
];

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub value: f64,
    pub error: f64,
    pub subdivisions: usize,
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    /// The error estimate is the roundoff floor; bisection cannot lower it.
    at_roundoff: bool,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}

impl Eq for Panel {}

impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .total_cmp(&other.error)
            .then(other.a.total_cmp(&self.a))
    }
}

/// Abscissae of the 21-point rule on `[a, b]`, left to right.
fn nodes(a: f64, b: f64) -> [f64; 21] {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut x = [0.0; 21];
    for (j, xk) in XGK.iter().enumerate().take(10) {
        x[j] = center - half * xk;
        x[20 - j] = center + half * xk;
    }
    x[10] = center;
    x
}

/// Applies the Gauss-Kronrod pair to function values at [`nodes`].
fn apply_rule(a: f64, b: f64, f: &[f64]) -> Panel {
    let half = 0.5 * (b - a);
    let fc = f[10];
    let mut kronrod = WGK[10] * fc;
    let mut gauss = 0.0;
    let mut abs = WGK[10] * fc.abs();
    for j in 0..10 {
        let (lo, hi) = (f[j], f[20 - j]);
        kronrod += WGK[j] * (lo + hi);
        abs += WGK[j] * (lo.abs() + hi.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (lo + hi);
        }
    }
    let mean = 0.5 * kronrod;
    let mut asc = WGK[10] * (fc - mean).abs();
    for j in 0..10 {
        asc += WGK[j] * ((f[j] - mean).abs() + (f[20 - j] - mean).abs());
    }
    let value = kronrod * half;
    let abs = abs * half.abs();
    let asc = asc * half.abs();
    let mut error = ((kronrod - gauss) * half).abs();
    if asc != 0.0 && error != 0.0 {
        error = asc * (200.0 * error / asc).powf(1.5).min(1.0);
    }
    let floor = 50.0 * f64::EPSILON * abs;
    let at_roundoff = error <= floor;
    if abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(floor);
    }
    Panel {
        a,
        b,
        value,
        error,
        at_roundoff,
    }
}

fn panel<F>(f: &F, a: f64, b: f64, exec: Execution) -> Panel
where
    F: Fn(f64) -> f64 + Sync + Send,
{
    let x = nodes(a, b);
    let values = map_points(&x, exec, f);
    apply_rule(a, b, &values)
}

/// Integrates `f` over `[a, b]` to `max(abs_tol, rel_tol · |I|)`.
///
/// Stops early, and succeeds, once the worst panel's error is at the roundoff
/// floor: the requested tolerance is then below what `f64` can resolve.
/// On failure the returned [`Error::Convergence`] carries the best estimate.
/// With [`Execution::Parallel`] the nodes of each panel are evaluated
/// concurrently, which pays off only when `f` is expensive (e.g. an inner
/// integral).
pub fn integrate<F>(
    f: F,
    a: f64,
    b: f64,
    spec: &QuadratureSpec,
    exec: Execution,
) -> Result<Quadrature>
where
    F: Fn(f64) -> f64 + Sync + Send,
{
    spec.validate()?;
    if !(a.is_finite() && b.is_finite()) {
        return domain(format!("integration limits must be finite, got [{a}, {b}]"));
    }
    if a == b {
        return Ok(Quadrature {
            value: 0.0,
            error: 0.0,
            subdivisions: 0,
        });
    }
    let mut heap = BinaryHeap::new();
    let first = panel(&f, a, b, exec);
    let mut value = first.value;
    let mut error = first.error;
    heap.push(first);
    let mut subdivisions = 0;
    let min_width = 64.0 * f64::EPSILON * (b - a).abs();

    loop {
        let tolerance = spec.abs_tol.max(spec.rel_tol * value.abs());
        if error <= tolerance {
            break;
        }
        if !value.is_finite() {
            return Err(Error::Convergence {
                estimate: value,
                error_estimate: error,
                subdivisions,
            });
        }
        if subdivisions >= spec.max_subdivisions {
            return Err(Error::Convergence {
                estimate: value,
                error_estimate: error,
                subdivisions,
            });
        }
        let worst = heap.pop().expect("heap holds at least one panel");
        if worst.at_roundoff {
            heap.push(worst);
            break;
        }
        if (worst.b - worst.a).abs() < min_width {
            // Cannot refine further; the remaining error is roundoff-limited.
            return Err(Error::Convergence {
                estimate: value,
                error_estimate: error,
                subdivisions,
            });
        }
        let mid = 0.5 * (worst.a + worst.b);
        let (left, right) = if exec.is_parallel() {
            let mut x = nodes(worst.a, mid).to_vec();
            x.extend_from_slice(&nodes(mid, worst.b));
            let values = map_points(&x, exec, &f);
            (
                apply_rule(worst.a, mid, &values[..21]),
                apply_rule(mid, worst.b, &values[21..]),
            )
        } else {
            (panel(&f, worst.a, mid, exec), panel(&f, mid, worst.b, exec))
        };
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        subdivisions += 1;
        // Re-sum periodically so the running totals do not drift.
        if subdivisions % 64 == 0 {
            value = heap.iter().map(|p| p.value).sum();
            error = heap.iter().map(|p| p.error).sum();
        }
    }
    let mut panels: Vec<Panel> = heap.into_vec();
    panels.sort_by(|p, q| p.a.total_cmp(&q.a));
    Ok(Quadrature {
        value: panels.iter().map(|p| p.value).sum(),
        error: panels.iter().map(|p| p.error).sum(),
        subdivisions,
    })
}

/// [`integrate`] after the substitution `x = a + (b - a)(3t² - 2t³)`.
///
/// The map is flat at both ends, turning integrable endpoint singularities
/// such as `(x - a)^{-1/2}` or `ln(b - x)` into bounded integrands.
pub fn integrate_smoothed<F>(
    f: F,
    a: f64,
    b: f64,
    spec: &QuadratureSpec,
    exec: Execution,
) -> Result<Quadrature>
where
    F: Fn(f64) -> f64 + Sync + Send,
{
    let width = b - a;
    let g = |t: f64| {
        let s = 1.0 - t;
        let jacobian = 6.0 * t * s * width;
        if jacobian == 0.0 {
            return 0.0;
        }
        // Evaluate from the nearer end so x keeps full relative precision there.
        let x = if t < 0.5 {
            a + width * t * t * (3.0 - 2.0 * t)
        } else {
            b - width * s * s * (3.0 - 2.0 * s)
        };
        f(x) * jacobian
    };
    integrate(g, 0.0, 1.0, spec, exec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    fn spec() -> QuadratureSpec {
        QuadratureSpec {
            rel_tol: 1e-12,
            abs_tol: 1e-300,
            max_subdivisions: 500,
            ..Default::default()
        }
    }

    #[test]
    fn polynomial_is_exact() {
        let q = integrate(
            |x| x.powi(7) - 3.0 * x * x,
            -1.0,
            2.0,
            &spec(),
            Execution::Sequential,
        )
        .unwrap();
        let exact = (256.0 - 1.0) / 8.0 - (8.0 + 1.0);
        assert_relative_eq!(q.value, exact, max_relative = 1e-14);
        assert_eq!(q.subdivisions, 0);
    }

    #[test]
    fn endpoint_singularities() {
        let q = integrate_smoothed(|x| 1.0 / x.sqrt(), 0.0, 1.0, &spec(), Execution::Sequential)
            .unwrap();
        assert_relative_eq!(q.value, 2.0, max_relative = 1e-11);
        let q = integrate_smoothed(
            |x| 1.0 / (1.0 - x).sqrt(),
            0.0,
            1.0,
            &spec(),
            Execution::Sequential,
        )
        .unwrap();
        assert_relative_eq!(q.value, 2.0, max_relative = 1e-11);
        let q = integrate(|x| x.ln(), 0.0, 1.0, &spec(), Execution::Sequential).unwrap();
        assert_relative_eq!(q.value, -1.0, max_relative = 1e-10);
    }

    #[test]
    fn oscillatory_and_reversed() {
        let q = integrate(
            |x| (10.0 * x).sin(),
            PI,
            0.0,
            &spec(),
            Execution::Sequential,
        )
        .unwrap();
        assert_relative_eq!(
            q.value,
            -(1.0 - (10.0 * PI).cos()) / 10.0,
            max_relative = 1e-11,
            epsilon = 1e-14
        );
    }

    #[test]
    fn parallel_matches_sequential_bitwise() {
        let f = |x: f64| (x * x).exp() / (1.0 + x).sqrt();
        let a = integrate(f, -0.9, 1.5, &spec(), Execution::Sequential).unwrap();
        let b = integrate(f, -0.9, 1.5, &spec(), Execution::Parallel).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn reports_non_convergence() {
        let tight = QuadratureSpec {
            rel_tol: 1e-14,
            abs_tol: 1e-300,
            max_subdivisions: 3,
            ..Default::default()
        };
        match integrate(
            |x| (1.0 / x).sin(),
            1e-4,
            1.0,
            &tight,
            Execution::Sequential,
        ) {
            Err(Error::Convergence {
                estimate,
                subdivisions,
                ..
            }) => {
                assert!(estimate.is_finite());
                assert_eq!(subdivisions, 3);
            }
            other => panic!("expected convergence error, got {other:?}"),
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert!(integrate(|x| x, 0.0, f64::INFINITY, &spec(), Execution::Sequential).is_err());
        let bad = QuadratureSpec {
            rel_tol: 0.0,
            ..spec()
        };
        assert!(integrate(|x| x, 0.0, 1.0, &bad, Execution::Sequential).is_err());
    }
}
