//! Chords subtended by arcs of `C_p`.
//!
//! `σ_p(θ; u)` is the ℓp chord of the arc of length `u` whose midpoint is
//! `ρ_p(θ)`. By the dihedral symmetry of `C_p` every chord length of a
//! length-`u` arc is attained for some `θ ∈ [0, π/4]`, so the minimum chord
//! `𝓛_p(u)` is a one-dimensional minimization over that interval.

use std::f64::consts::FRAC_PI_4;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::evacuation::critical_params_on;
use crate::geometry::{ArcSpec, LpCircle, PExponent, Point2};
use crate::numerics::{minimize_on_grid, Tolerance};

/// Default number of tangential angles sampled by [`min_chord`].
pub const DEFAULT_ANGLE_GRID: usize = 256;
/// Default tolerance of the monotonicity certificates.
pub const DEFAULT_MONOTONE_TOL: f64 = 1e-9;
/// Range of `p` the certificates are calibrated for.
pub const VERIFIED_P_RANGE: (f64, f64) = (1.001, 45.0);

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChordArcSample {
    /// Tangential angle in `[0, π/4]`.
    pub theta: f64,
    pub chord: f64,
    pub arc_len: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Direction {
    Increasing,
    Decreasing,
    /// Range of the samples bounded by the tolerance (`σ_2`).
    Constant,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MonotonicityReport {
    pub p: PExponent,
    pub grid_size: usize,
    pub direction: Direction,
    pub max_violation: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl MonotonicityReport {
    fn from_samples(p: PExponent, direction: Direction, values: &[f64], tolerance: f64) -> Self {
        let max_violation = match direction {
            Direction::Increasing => values
                .windows(2)
                .map(|w| (w[0] - w[1]).max(0.0))
                .fold(0.0, f64::max),
            Direction::Decreasing => values
                .windows(2)
                .map(|w| (w[1] - w[0]).max(0.0))
                .fold(0.0, f64::max),
            Direction::Constant => {
                let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
                hi - lo
            }
        };
        Self {
            p,
            grid_size: values.len(),
            direction,
            max_violation,
            tolerance,
            passed: max_violation <= tolerance,
        }
    }
}

fn warn_outside_verified_range(p: PExponent) {
    let (lo, hi) = VERIFIED_P_RANGE;
    if !(lo..=hi).contains(&p.value()) {
        log::warn!("p = {p} is outside the verified range [{lo}, {hi}]");
    }
}

/// Chord length of a counter-clockwise arc.
pub fn chord_of_arc(circle: &LpCircle, arc: &ArcSpec) -> Result<f64> {
    if arc.length >= circle.perimeter() {
        return Err(Error::domain("arc length", arc.length));
    }
    let a = arc.start(circle);
    let b = arc.end(circle)?;
    Ok(circle.chord_length(a.point, b.point))
}

/// Endpoints of the arc of length `arc_len` centred at `ρ_p(theta)`.
pub fn centred_arc_endpoints(
    circle: &LpCircle,
    theta: f64,
    arc_len: f64,
) -> Result<(Point2, Point2)> {
    let mid = circle.cumulative_length(theta);
    let half = 0.5 * arc_len;
    let a = circle.point_at_length(mid + half)?;
    let b = circle.point_at_length(mid - half)?;
    Ok((a.point, b.point))
}

/// `σ_p(θ)` for an arc of length `arc_len`.
pub fn sigma(circle: &LpCircle, theta: f64, arc_len: f64) -> Result<f64> {
    if !(0.0..=FRAC_PI_4).contains(&theta) {
        return Err(Error::domain("tangential angle", theta));
    }
    if !(arc_len > 0.0 && arc_len < circle.perimeter()) {
        return Err(Error::domain("arc length", arc_len));
    }
    let (a, b) = centred_arc_endpoints(circle, theta, arc_len)?;
    Ok(circle.chord_length(a, b))
}

/// One sample of the coordinate sweep in [`sigma_coordinate_sweep`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepSample {
    /// x-coordinate of the upper endpoint `R`.
    pub x_r: f64,
    /// Linear stand-in for the tangential angle, `(1 - (x_r - w_c)/(x_A - w_c))·π/4`.
    pub stretched_theta: f64,
    /// Tangential angle of the arc `TR`, folded into `[0, π/4]`.
    pub theta: f64,
    pub chord: f64,
}

/// Second route to `σ_p`: sweep the upper endpoint `R` of the arc by its
/// x-coordinate between the tangential-angle-0 arc (`A = (x_A, w_a)`,
/// `B = (x_A, -w_a)`) and the tangential-angle-π/4 arc (`C = (w_c, ·)`,
/// `D` its mirror in `y = x`), and walk back `arc_len` to find `T`.
///
/// Works with the shorter of the two arcs, which subtends the same chord.
pub fn sigma_coordinate_sweep(
    circle: &LpCircle,
    arc_len: f64,
    steps: usize,
) -> Result<Vec<SweepSample>> {
    if !(arc_len > 0.0 && arc_len < circle.perimeter()) {
        return Err(Error::domain("arc length", arc_len));
    }
    if steps < 2 {
        return Err(Error::domain("sweep steps", steps as f64));
    }
    let pi_p = circle.pi_p();
    let len = arc_len.min(circle.perimeter() - arc_len);
    let half = 0.5 * len;

    // A: ∫_{-w}^{w} = len on the chart (x = (1-|t|^p)^{1/p}, t).
    let a_pt = circle.point_at_length(half)?.point;
    let (w_a, x_a) = (a_pt.y, a_pt.x);
    // C: centred at ρ(π/4), lies in the second quadrant iff len > π_p/2.
    let c_pt = circle.point_at_length(0.25 * pi_p + half)?.point;
    let w_c = c_pt.x;
    debug_assert!((w_c < 0.0) == (len > 0.5 * pi_p) || (len - 0.5 * pi_p).abs() < 1e-12);
    let _ = w_a;

    let mut out = Vec::with_capacity(steps);
    for i in 0..steps {
        let frac = i as f64 / (steps - 1) as f64;
        // from A (θ = 0) to C (θ = π/4)
        let x_r = x_a + (w_c - x_a) * frac;
        let y_r = circle.complement(x_r.abs());
        let r = Point2::new(x_r, y_r);
        let r_len = circle.cumulative_length(r.angle());
        let t = circle.point_at_length(r_len - len)?;
        let chord = circle.chord_length(r, t.point);
        let mid = circle.point_at_length(r_len - half)?.phi;
        out.push(SweepSample {
            x_r,
            stretched_theta: (1.0 - (x_r - w_c) / (x_a - w_c)) * FRAC_PI_4,
            theta: fold_to_first_octant(mid),
            chord,
        });
    }
    Ok(out)
}

/// Map an angle to `[0, π/4]` through the symmetries of `C_p`.
fn fold_to_first_octant(phi: f64) -> f64 {
    let r = phi.rem_euclid(std::f64::consts::FRAC_PI_2);
    let r = if r > FRAC_PI_4 {
        std::f64::consts::FRAC_PI_2 - r
    } else {
        r
    };
    r.clamp(0.0, FRAC_PI_4)
}

/// Minimizing tangential angle and chord for arcs of length `u`.
///
/// Uses `𝓛_p(u) = 𝓛_p(2π_p - u)` above `π_p`; the reported `arc_len` is
/// the folded one. Ties resolve to the smallest `θ`.
pub fn min_chord(circle: &LpCircle, u: f64, grid: usize) -> Result<ChordArcSample> {
    let perimeter = circle.perimeter();
    if !(0.0..perimeter).contains(&u) {
        return Err(Error::domain("arc length", u));
    }
    let u = if u > circle.pi_p() { perimeter - u } else { u };
    if u == 0.0 {
        return Ok(ChordArcSample {
            theta: 0.0,
            chord: 0.0,
            arc_len: 0.0,
        });
    }
    let best = minimize_on_grid(
        |theta| sigma(circle, theta, u),
        0.0,
        FRAC_PI_4,
        grid.max(2),
        Tolerance::with_abs(1e-12),
    )?;
    Ok(ChordArcSample {
        theta: best.x,
        chord: best.value,
        arc_len: u,
    })
}

/// `𝓛_p(u) := min { ‖A - B‖_p : A, B ∈ C_p, μ_p(arc AB) = u }`.
pub fn min_chord_l(circle: &LpCircle, u: f64) -> Result<f64> {
    Ok(min_chord(circle, u, DEFAULT_ANGLE_GRID)?.chord)
}

/// Checks that `𝓛_p` is non-decreasing on a uniform grid over `[0, π_p]`.
pub fn verify_l_monotone(
    circle: &LpCircle,
    grid_size: usize,
    tol: f64,
) -> Result<MonotonicityReport> {
    if grid_size < 64 {
        return Err(Error::domain("grid size", grid_size as f64));
    }
    warn_outside_verified_range(circle.p());
    let pi_p = circle.pi_p();
    let values = (0..grid_size)
        .into_par_iter()
        .map(|i| {
            let u = if i == grid_size - 1 {
                pi_p
            } else {
                pi_p * i as f64 / (grid_size - 1) as f64
            };
            min_chord(circle, u, DEFAULT_ANGLE_GRID).map(|s| s.chord)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(MonotonicityReport::from_samples(
        circle.p(),
        Direction::Increasing,
        &values,
        tol,
    ))
}

/// Expected shape of `σ_p` at the critical arc length.
pub fn expected_sigma_direction(p: PExponent) -> Direction {
    match p {
        PExponent::Finite(v) if v < 2.0 => Direction::Increasing,
        PExponent::Finite(2.0) => Direction::Constant,
        _ => Direction::Decreasing,
    }
}

/// `σ_p(θ)` at arc length `e_p` on a uniform θ-grid over `[0, π/4]`.
pub fn sigma_profile(
    circle: &LpCircle,
    arc_len: f64,
    grid_size: usize,
) -> Result<Vec<ChordArcSample>> {
    if grid_size < 2 {
        return Err(Error::domain("grid size", grid_size as f64));
    }
    (0..grid_size)
        .into_par_iter()
        .map(|i| {
            let theta = if i == grid_size - 1 {
                FRAC_PI_4
            } else {
                FRAC_PI_4 * i as f64 / (grid_size - 1) as f64
            };
            Ok(ChordArcSample {
                theta,
                chord: sigma(circle, theta, arc_len)?,
                arc_len,
            })
        })
        .collect()
}

/// Certifies that `σ_p` at arc length `e_p` increases (`p < 2`), is constant
/// (`p = 2`) or decreases (`p > 2`) on `[0, π/4]`.
pub fn verify_sigma_monotone(
    circle: &LpCircle,
    grid_size: usize,
    tol: f64,
) -> Result<MonotonicityReport> {
    if grid_size < 64 {
        return Err(Error::domain("grid size", grid_size as f64));
    }
    warn_outside_verified_range(circle.p());
    let e_p = critical_params_on(circle)?.e_p;
    let values: Vec<f64> = sigma_profile(circle, e_p, grid_size)?
        .into_iter()
        .map(|s| s.chord)
        .collect();
    Ok(MonotonicityReport::from_samples(
        circle.p(),
        expected_sigma_direction(circle.p()),
        &values,
        tol,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evacuation::critical_params_on;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    fn circle(p: f64) -> LpCircle {
        LpCircle::new(PExponent::new(p).unwrap()).unwrap()
    }

    #[test]
    fn chord_of_arc_examples() {
        let c = circle(2.0);
        let zero = ArcSpec::new(&c, 0.4, 0.0).unwrap();
        assert_eq!(chord_of_arc(&c, &zero).unwrap(), 0.0);
        for u in [0.3, 1.0, 2.5, 4.0] {
            let arc = ArcSpec::new(&c, 0.0, u).unwrap();
            assert_abs_diff_eq!(
                chord_of_arc(&c, &arc).unwrap(),
                2.0 * (u / 2.0).sin(),
                epsilon = 1e-8
            );
        }
        for p in [1.0, 1.4, 3.0, 8.0, f64::INFINITY] {
            let c = circle(p);
            for start in [0.0, 0.3, 1.1, 2.0] {
                let arc = ArcSpec::new(&c, start, c.pi_p()).unwrap();
                assert_abs_diff_eq!(chord_of_arc(&c, &arc).unwrap(), 2.0, epsilon = 1e-9);
            }
        }
    }

    #[test]
    fn sigma_euclidean_is_constant() {
        let c = circle(2.0);
        for theta in [0.0, 0.2, 0.5, FRAC_PI_4] {
            assert_abs_diff_eq!(
                sigma(&c, theta, 4.0 * PI / 3.0).unwrap(),
                3f64.sqrt(),
                epsilon = 1e-6
            );
        }
        assert!(sigma(&c, 1.0, 1.0).is_err());
        assert!(sigma(&c, 0.1, 0.0).is_err());
    }

    #[test]
    fn sigma_at_canonical_angles_matches_gamma() {
        let c = circle(1.5);
        let crit = critical_params_on(&c).unwrap();
        assert_abs_diff_eq!(
            sigma(&c, 0.0, crit.e_p).unwrap(),
            crit.gamma_p,
            epsilon = 1e-6
        );
        let c = circle(3.0);
        let crit = critical_params_on(&c).unwrap();
        assert_abs_diff_eq!(
            sigma(&c, FRAC_PI_4, crit.e_p).unwrap(),
            crit.gamma_p,
            epsilon = 1e-6
        );
    }

    #[test]
    fn theta_zero_arc_is_symmetric_about_x_axis() {
        let c = circle(1.5);
        let (a, b) = centred_arc_endpoints(&c, 0.0, 1.3).unwrap();
        assert_abs_diff_eq!(a.x, b.x, epsilon = 1e-12);
        assert_abs_diff_eq!(a.y, -b.y, epsilon = 1e-12);
        let (cc, d) = centred_arc_endpoints(&c, FRAC_PI_4, 1.3).unwrap();
        assert_abs_diff_eq!(cc.x, d.y, epsilon = 1e-12);
        assert_abs_diff_eq!(cc.y, d.x, epsilon = 1e-12);
    }

    #[test]
    fn coordinate_sweep_agrees_with_midpoint_construction() {
        for p in [1.5, 3.0] {
            let c = circle(p);
            let e = critical_params_on(&c).unwrap().e_p;
            let sweep = sigma_coordinate_sweep(&c, e, 33).unwrap();
            assert_abs_diff_eq!(sweep[0].theta, 0.0, epsilon = 1e-9);
            assert_abs_diff_eq!(sweep[32].theta, FRAC_PI_4, epsilon = 1e-9);
            assert_eq!(sweep[0].stretched_theta, 0.0);
            for s in &sweep {
                assert_abs_diff_eq!(s.chord, sigma(&c, s.theta, e).unwrap(), epsilon = 1e-9);
            }
        }
    }

    #[test]
    fn min_chord_examples() {
        let c = circle(2.0);
        for u in [0.0, 0.5, 2.0, PI, 4.5, 6.0] {
            assert_abs_diff_eq!(
                min_chord_l(&c, u).unwrap(),
                2.0 * (u / 2.0).sin(),
                epsilon = 1e-7
            );
        }
        let c = circle(1.5);
        assert_abs_diff_eq!(min_chord_l(&c, c.pi_p()).unwrap(), 2.0, epsilon = 1e-7);
        let crit = critical_params_on(&c).unwrap();
        assert_abs_diff_eq!(
            min_chord_l(&c, crit.e_p).unwrap(),
            crit.gamma_p,
            epsilon = 1e-5
        );
        assert!(min_chord_l(&c, c.perimeter()).is_err());
    }

    #[test]
    fn monotonicity_reports() {
        let r = verify_l_monotone(&circle(2.0), 64, 1e-9).unwrap();
        assert!(r.passed, "{r:?}");
        let r = verify_sigma_monotone(&circle(2.0), 64, 1e-6).unwrap();
        assert_eq!(r.direction, Direction::Constant);
        assert!(r.passed && r.max_violation <= 1e-6);
        let r = verify_sigma_monotone(&circle(1.5), 64, 1e-9).unwrap();
        assert_eq!(r.direction, Direction::Increasing);
        assert!(r.passed);
        let r = verify_sigma_monotone(&circle(3.0), 64, 1e-9).unwrap();
        assert_eq!(r.direction, Direction::Decreasing);
        assert!(r.passed);
        assert!(verify_l_monotone(&circle(2.0), 10, 1e-9).is_err());
    }

    #[test]
    fn report_flags_violations() {
        let r = MonotonicityReport::from_samples(
            PExponent::TWO,
            Direction::Increasing,
            &[0.0, 1.0, 0.5],
            1e-9,
        );
        assert!(!r.passed);
        assert_abs_diff_eq!(r.max_violation, 0.5);
    }
}
