use std::cmp::Ordering;
use std::collections::BinaryHeap;

use super::{NumericsError, Tolerance};

// 21-point Kronrod extension of the 10-point Gauss rule (QUADPACK qk21).
#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];
#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

// Hard cap on the number of live panels, independent of the depth limit.
const MAX_PANELS: usize = 200_000;

/// A subinterval accepted by the adaptive integrator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Panel {
    pub a: f64,
    pub b: f64,
    pub integral: f64,
    pub error: f64,
    pub depth: usize,
}

impl Panel {
    fn new<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, depth: usize) -> Self {
        let (integral, error) = gauss_kronrod21(f, a, b);
        Self {
            a,
            b,
            integral,
            error,
            depth,
        }
    }
}

struct ByError(Panel);

impl PartialEq for ByError {
    fn eq(&self, other: &Self) -> bool {
        self.0.error == other.0.error
    }
}
impl Eq for ByError {}
impl PartialOrd for ByError {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for ByError {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .error
            .total_cmp(&other.0.error)
            // deterministic tie break: leftmost panel first
            .then_with(|| other.0.a.total_cmp(&self.0.a))
    }
}

/// Single 21-point Gauss–Kronrod evaluation on `[a, b]`.
///
/// Returns the Kronrod estimate and a QUADPACK-style error estimate.
pub fn gauss_kronrod21<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    if half == 0.0 {
        return (0.0, 0.0);
    }
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];
    let f_center = f(center);
    let mut res_g = 0.0;
    let mut res_k = f_center * WGK[10];
    let mut res_abs = res_k.abs();
    for (j, wg) in WG.iter().enumerate() {
        let jtw = 2 * j + 1;
        let dx = half * XGK[jtw];
        let (f1, f2) = (f(center - dx), f(center + dx));
        fv1[jtw] = f1;
        fv2[jtw] = f2;
        res_g += wg * (f1 + f2);
        res_k += WGK[jtw] * (f1 + f2);
        res_abs += WGK[jtw] * (f1.abs() + f2.abs());
    }
    for j in 0..5 {
        let jtwm1 = 2 * j;
        let dx = half * XGK[jtwm1];
        let (f1, f2) = (f(center - dx), f(center + dx));
        fv1[jtwm1] = f1;
        fv2[jtwm1] = f2;
        res_k += WGK[jtwm1] * (f1 + f2);
        res_abs += WGK[jtwm1] * (f1.abs() + f2.abs());
    }
    let mean = 0.5 * res_k;
    let mut res_asc = WGK[10] * (f_center - mean).abs();
    for j in 0..10 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let h = half.abs();
    let integral = res_k * half;
    let res_abs = res_abs * h;
    let res_asc = res_asc * h;
    let mut err = ((res_k - res_g) * half).abs();
    if res_asc != 0.0 && err != 0.0 {
        err = res_asc * (1.0f64).min((200.0 * err / res_asc).powf(1.5));
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * res_abs);
    }
    (integral, err)
}

/// Globally adaptive bisection; returns the accepted panels in order of
/// increasing `a`.
///
/// The summed panel error is at most `max(abs_tol, rel_tol * |I|)`. Panels
/// may not be bisected beyond `tol.max_iter` levels.
pub fn adaptive_panels<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    tol: Tolerance,
) -> Result<Vec<Panel>, NumericsError> {
    if !(a <= b) || !a.is_finite() || !b.is_finite() {
        return Err(NumericsError::InvalidInterval { lo: a, hi: b });
    }
    let first = Panel::new(&f, a, b, 0);
    if !first.integral.is_finite() {
        return Err(NumericsError::NonFinite { x: 0.5 * (a + b) });
    }
    let mut total = first.integral;
    let mut total_err = first.error;
    let mut heap = BinaryHeap::new();
    heap.push(ByError(first));

    while total_err > tol.bound_for(total) {
        let Some(ByError(worst)) = heap.pop() else {
            break;
        };
        if worst.depth >= tol.max_iter || heap.len() >= MAX_PANELS {
            return Err(NumericsError::NotConverged {
                estimate: total,
                error_bound: total_err,
            });
        }
        let mid = 0.5 * (worst.a + worst.b);
        let left = Panel::new(&f, worst.a, mid, worst.depth + 1);
        let right = Panel::new(&f, mid, worst.b, worst.depth + 1);
        if !left.integral.is_finite() || !right.integral.is_finite() {
            return Err(NumericsError::NonFinite { x: mid });
        }
        total += left.integral + right.integral - worst.integral;
        total_err += left.error + right.error - worst.error;
        heap.push(ByError(left));
        heap.push(ByError(right));
    }

    let mut panels: Vec<Panel> = heap.into_iter().map(|p| p.0).collect();
    panels.sort_by(|x, y| x.a.total_cmp(&y.a));
    Ok(panels)
}

/// `∫_a^b f` to within `max(abs_tol, rel_tol·|I|)`.
///
/// Accepts `a > b` with the usual orientation sign.
pub fn integrate_adaptive<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    tol: Tolerance,
) -> Result<f64, NumericsError> {
    if a > b {
        return integrate_adaptive(f, b, a, tol).map(|v| -v);
    }
    let panels = adaptive_panels(f, a, b, tol)?;
    // Summing in order keeps the result independent of heap layout.
    Ok(panels.iter().map(|p| p.integral).sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn constant_and_linear() {
        let tol = Tolerance::default();
        assert_abs_diff_eq!(
            integrate_adaptive(|_| 1.0, 0.0, 2.0, tol).unwrap(),
            2.0,
            epsilon = 1e-14
        );
        assert_abs_diff_eq!(
            integrate_adaptive(|x| x, 0.0, 1.0, tol).unwrap(),
            0.5,
            epsilon = 1e-14
        );
    }

    #[test]
    fn kronrod_rule_is_exact_for_degree_31() {
        let (v, _) = gauss_kronrod21(&|x: f64| x.powi(30), -1.0, 1.0);
        assert_abs_diff_eq!(v, 2.0 / 31.0, epsilon = 1e-14);
        let (v, _) = gauss_kronrod21(&|x: f64| x.powi(19) + x.powi(18), -1.0, 1.0);
        assert_abs_diff_eq!(v, 2.0 / 19.0, epsilon = 1e-14);
    }

    #[test]
    fn euclidean_quarter_arc_in_chart() {
        // (z^{p^2-p}(1-z^p)^{1-p}+1)^{1/p} at p = 2 over [0, 2^{-1/2}]
        let f = |z: f64| (z * z / (1.0 - z * z) + 1.0).sqrt();
        let v = integrate_adaptive(f, 0.0, 0.5f64.sqrt(), Tolerance::default()).unwrap();
        assert_abs_diff_eq!(v, std::f64::consts::FRAC_PI_4, epsilon = 1e-10);
    }

    #[test]
    fn endpoint_power_singularity() {
        let v = integrate_adaptive(
            |x: f64| x.powf(-0.5),
            0.0,
            1.0,
            Tolerance::new(1e-10, 1e-10, 200).unwrap(),
        )
        .unwrap();
        assert_abs_diff_eq!(v, 2.0, epsilon = 1e-9);
    }

    #[test]
    fn reversed_limits_flip_sign() {
        let v = integrate_adaptive(|x: f64| x.exp(), 1.0, 0.0, Tolerance::default()).unwrap();
        assert_abs_diff_eq!(v, 1.0 - std::f64::consts::E, epsilon = 1e-12);
    }

    #[test]
    fn non_convergence_reports_estimate() {
        let tol = Tolerance::new(1e-12, 0.0, 3).unwrap();
        match integrate_adaptive(|x: f64| (1.0 / (x + 1e-9)).sin(), 0.0, 1.0, tol) {
            Err(NumericsError::NotConverged {
                estimate,
                error_bound,
            }) => {
                assert!(estimate.is_finite());
                assert!(error_bound > 1e-12);
            }
            other => panic!("expected NotConverged, got {other:?}"),
        }
    }

    #[test]
    fn panels_tile_the_interval() {
        let panels =
            adaptive_panels(|x: f64| (10.0 * x).sin(), 0.0, 3.0, Tolerance::default()).unwrap();
        assert_eq!(panels.first().unwrap().a, 0.0);
        assert_eq!(panels.last().unwrap().b, 3.0);
        for w in panels.windows(2) {
            assert_eq!(w[0].b, w[1].a);
        }
    }

    #[test]
    fn rejects_bad_interval() {
        assert!(matches!(
            adaptive_panels(|x| x, f64::NAN, 1.0, Tolerance::default()),
            Err(NumericsError::InvalidInterval { .. })
        ));
    }
}
