//! The ℓp unit circle: norms, the angular and algebraic parametrizations,
//! perimeter, arc-length measure and its inverse.
//!
//! Arc length is measured through the chart `z ↦ ((1-z^p)^{1/p}, z)`. Its
//! speed blows up at `z → 1`, so every integral is folded across the
//! diagonal and only `z ∈ [0, 2^{-1/p}]` is ever integrated. An [`LpCircle`]
//! holds the adaptive panels of that integral for one `p`; all queries reuse
//! them.

use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::fmt;
use std::ops::Sub;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::numerics::{adaptive_panels, find_root_bracketed, gauss_kronrod21, Tolerance};

/// Above this exponent the chart integrand is steep enough that results
/// should be treated with care.
pub const LARGE_P_WARNING: f64 = 50.0;

/// Norm exponent `p ∈ [1, ∞]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PExponent {
    Finite(f64),
    Infinity,
}

impl PExponent {
    pub const ONE: PExponent = PExponent::Finite(1.0);
    pub const TWO: PExponent = PExponent::Finite(2.0);

    /// `f64::INFINITY` maps to [`PExponent::Infinity`].
    pub fn new(value: f64) -> Result<Self> {
        if value == f64::INFINITY {
            Ok(PExponent::Infinity)
        } else if value >= 1.0 && value.is_finite() {
            Ok(PExponent::Finite(value))
        } else {
            Err(Error::domain("p", value))
        }
    }

    pub fn value(self) -> f64 {
        match self {
            PExponent::Finite(p) => p,
            PExponent::Infinity => f64::INFINITY,
        }
    }

    pub fn finite(self) -> Option<f64> {
        match self {
            PExponent::Finite(p) => Some(p),
            PExponent::Infinity => None,
        }
    }

    /// `1` or `∞`: the piecewise-linear circles.
    pub fn is_polygonal(self) -> bool {
        matches!(self, PExponent::Infinity) || self == PExponent::ONE
    }

    /// Hölder conjugate `q` with `1/p + 1/q = 1`.
    pub fn conjugate(self) -> PExponent {
        match self {
            PExponent::Infinity => PExponent::ONE,
            PExponent::Finite(1.0) => PExponent::Infinity,
            PExponent::Finite(p) => PExponent::Finite(p / (p - 1.0)),
        }
    }

    /// `2^{1/p}`, equal to 1 at infinity.
    pub fn two_pow_inv(self) -> f64 {
        match self {
            PExponent::Finite(p) => 2f64.powf(1.0 / p),
            PExponent::Infinity => 1.0,
        }
    }
}

impl fmt::Display for PExponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PExponent::Finite(p) => write!(f, "{p}"),
            PExponent::Infinity => f.write_str("inf"),
        }
    }
}

impl FromStr for PExponent {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().to_ascii_lowercase();
        if matches!(t.as_str(), "inf" | "infinity" | "∞") {
            return Ok(PExponent::Infinity);
        }
        let v: f64 = t
            .parse()
            .map_err(|_| Error::Unsupported(format!("cannot parse p from {s:?}")))?;
        PExponent::new(v)
    }
}

impl Serialize for PExponent {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            PExponent::Finite(p) => serializer.serialize_f64(*p),
            PExponent::Infinity => serializer.serialize_str("inf"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn norm(self, p: PExponent) -> f64 {
        norm_p(p, self)
    }

    /// Counter-clockwise quarter turn, a symmetry of every `C_p`.
    pub fn quarter_turn(self) -> Self {
        Self::new(-self.y, self.x)
    }

    pub fn angle(self) -> f64 {
        reduce_angle(self.y.atan2(self.x))
    }

    /// The four reflections across `y=0`, `x=0`, `y=x`, `y=-x`.
    pub fn reflections(self) -> [Point2; 4] {
        let Point2 { x, y } = self;
        [
            Point2::new(x, -y),
            Point2::new(-x, y),
            Point2::new(y, x),
            Point2::new(-y, -x),
        ]
    }
}

impl Sub for Point2 {
    type Output = Point2;
    fn sub(self, rhs: Point2) -> Point2 {
        Point2::new(self.x - rhs.x, self.y - rhs.y)
    }
}

/// A point of `C_p` together with its angle parameter in `[0, 2π)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CirclePoint {
    pub phi: f64,
    pub point: Point2,
}

/// Counter-clockwise arc of `C_p` starting at `ρ_p(start_phi)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ArcSpec {
    pub p: PExponent,
    pub start_phi: f64,
    pub length: f64,
}

impl ArcSpec {
    pub fn new(circle: &LpCircle, start_phi: f64, length: f64) -> Result<Self> {
        if !(0.0..=circle.perimeter()).contains(&length) {
            return Err(Error::domain("arc length", length));
        }
        Ok(Self {
            p: circle.p(),
            start_phi,
            length,
        })
    }

    pub fn start(&self, circle: &LpCircle) -> CirclePoint {
        circle.rho(self.start_phi)
    }

    pub fn end(&self, circle: &LpCircle) -> Result<CirclePoint> {
        circle.invert_arc_length(self.start_phi, self.length)
    }

    /// Point at half the arc length.
    pub fn midpoint(&self, circle: &LpCircle) -> Result<CirclePoint> {
        circle.invert_arc_length(self.start_phi, 0.5 * self.length)
    }

    /// Angle `θ` with `ρ_p(θ)` at the arc midpoint.
    pub fn tangential_angle(&self, circle: &LpCircle) -> Result<f64> {
        Ok(self.midpoint(circle)?.phi)
    }
}

/// `(|x|^p + |y|^p)^{1/p}`, or `max(|x|, |y|)` at infinity.
pub fn norm_p(p: PExponent, v: Point2) -> f64 {
    let (ax, ay) = (v.x.abs(), v.y.abs());
    match p {
        PExponent::Infinity => ax.max(ay),
        PExponent::Finite(1.0) => ax + ay,
        PExponent::Finite(p) => {
            // Scale by the larger coordinate so large p neither under- nor overflows.
            let m = ax.max(ay);
            if m == 0.0 {
                return 0.0;
            }
            let (a, b) = (ax / m, ay / m);
            m * (a.powf(p) + b.powf(p)).powf(1.0 / p)
        }
    }
}

/// `N_p(φ) = (|sin φ|^p + |cos φ|^p)^{1/p}`.
pub fn n_p(p: PExponent, phi: f64) -> f64 {
    norm_p(p, Point2::new(phi.cos(), phi.sin()))
}

pub fn reduce_angle(phi: f64) -> f64 {
    let r = phi.rem_euclid(TAU);
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// `ρ_p(φ) = (cos φ, sin φ) / N_p(φ)`.
pub fn rho(p: PExponent, phi: f64) -> CirclePoint {
    let phi = reduce_angle(phi);
    let (s, c) = phi.sin_cos();
    let n = norm_p(p, Point2::new(c, s));
    CirclePoint {
        phi,
        point: Point2::new(c / n, s / n),
    }
}

/// The algebraic chart `r_p(s) = (-s, (1-|s|^p)^{1/p})` of the upper half.
///
/// At `p = ∞` this is the pointwise limit: the top edge of the square, with
/// `y = 0` only at `|s| = 1`.
pub fn r_chart(p: PExponent, s: f64) -> Result<Point2> {
    if !(-1.0..=1.0).contains(&s) {
        return Err(Error::domain("chart coordinate s", s));
    }
    let y = match p {
        PExponent::Infinity => {
            if s.abs() < 1.0 {
                1.0
            } else {
                0.0
            }
        }
        PExponent::Finite(p) => (1.0 - s.abs().powf(p)).max(0.0).powf(1.0 / p),
    };
    Ok(Point2::new(-s, y))
}

/// `‖r_p'(z)‖_p = (z^{p²-p}(1-z^p)^{1-p} + 1)^{1/p}` for `z ∈ [0, 1)`.
///
/// Evaluated as `(t^{p-1} + 1)^{1/p}` with `t = z^p / (1 - z^p)` which stays
/// representable for large `p`.
pub fn arc_speed_s(p: PExponent, z: f64) -> Result<f64> {
    let p = match p {
        PExponent::Finite(p) => p,
        PExponent::Infinity => {
            return Err(Error::Unsupported("chart speed at p = inf".into()));
        }
    };
    if !(0.0..1.0).contains(&z) {
        return Err(Error::domain("chart coordinate z", z));
    }
    Ok(speed_unchecked(p, z))
}

fn speed_unchecked(p: f64, z: f64) -> f64 {
    if p == 1.0 {
        return 2.0;
    }
    if z == 0.0 {
        return 1.0;
    }
    let zp = z.powf(p);
    let t = zp / (1.0 - zp);
    let tp = ((p - 1.0) * t.ln()).exp();
    (tp.ln_1p() / p).exp()
}

/// Half-perimeter `π_p`.
pub fn pi_p(p: PExponent) -> Result<f64> {
    Ok(LpCircle::new(p)?.pi_p())
}

#[derive(Debug, Clone)]
struct ChartPanel {
    a: f64,
    b: f64,
    /// Chart integral from 0 to `a`.
    cumulative: f64,
}

#[derive(Debug, Clone)]
enum Shape {
    Diamond,
    Square,
    Smooth { p: f64, panels: Vec<ChartPanel> },
}

/// `C_p` for a fixed `p` with the chart integral precomputed.
#[derive(Debug, Clone)]
pub struct LpCircle {
    p: PExponent,
    shape: Shape,
    fold: f64,
    pi_p: f64,
}

impl LpCircle {
    pub fn new(p: PExponent) -> Result<Self> {
        let circle = match p {
            PExponent::Infinity => Self {
                p,
                shape: Shape::Square,
                fold: 1.0,
                pi_p: 4.0,
            },
            PExponent::Finite(1.0) => Self {
                p,
                shape: Shape::Diamond,
                fold: 0.5,
                pi_p: 4.0,
            },
            PExponent::Finite(v) => {
                if !(v > 1.0) || !v.is_finite() {
                    return Err(Error::domain("p", v));
                }
                if v > LARGE_P_WARNING {
                    log::warn!("p = {v} exceeds {LARGE_P_WARNING}; chart integrals lose precision");
                }
                let fold = 2f64.powf(-1.0 / v);
                let tol = Tolerance::new(1e-13, 1e-13, 60)?;
                let raw = adaptive_panels(|z| speed_unchecked(v, z), 0.0, fold, tol)?;
                let mut cumulative = 0.0;
                let mut panels = Vec::with_capacity(raw.len());
                for panel in &raw {
                    panels.push(ChartPanel {
                        a: panel.a,
                        b: panel.b,
                        cumulative,
                    });
                    cumulative += panel.integral;
                }
                Self {
                    p,
                    shape: Shape::Smooth { p: v, panels },
                    fold,
                    pi_p: 4.0 * cumulative,
                }
            }
        };
        Ok(circle)
    }

    pub fn p(&self) -> PExponent {
        self.p
    }

    pub fn pi_p(&self) -> f64 {
        self.pi_p
    }

    /// `2π_p`.
    pub fn perimeter(&self) -> f64 {
        2.0 * self.pi_p
    }

    /// `2^{-1/p}`: the chart coordinate of the diagonal point `ρ_p(π/4)`.
    pub fn fold(&self) -> f64 {
        self.fold
    }

    pub fn norm(&self, v: Point2) -> f64 {
        norm_p(self.p, v)
    }

    pub fn rho(&self, phi: f64) -> CirclePoint {
        rho(self.p, phi)
    }

    /// `(1 - t^p)^{1/p}`: the other coordinate of a first-quadrant point.
    pub fn complement(&self, t: f64) -> f64 {
        match self.shape {
            Shape::Square => 1.0,
            Shape::Diamond => 1.0 - t,
            Shape::Smooth { p, .. } => (1.0 - t.powf(p)).max(0.0).powf(1.0 / p),
        }
    }

    /// Chart integral `∫_0^t ‖r_p'(z)‖_p dz` for `t ∈ [0, 2^{-1/p}]`.
    fn chart_integral_lower(&self, t: f64) -> f64 {
        match &self.shape {
            Shape::Diamond => 2.0 * t,
            Shape::Square => t,
            Shape::Smooth { p, panels } => {
                if t >= self.fold {
                    return 0.25 * self.pi_p;
                }
                let i = panels.partition_point(|pn| pn.b <= t).min(panels.len() - 1);
                let pn = &panels[i];
                let p = *p;
                pn.cumulative + gauss_kronrod21(&|z| speed_unchecked(p, z), pn.a, t).0
            }
        }
    }

    /// `∫_0^t ‖r_p'(z)‖_p dz` for `t ∈ [0, 1]`, folded across the diagonal
    /// above `2^{-1/p}`. `chart_integral(1) = π_p / 2`.
    pub fn chart_integral(&self, t: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::domain("chart coordinate", t));
        }
        Ok(if t <= self.fold {
            self.chart_integral_lower(t)
        } else {
            0.5 * self.pi_p - self.chart_integral_lower(self.complement(t))
        })
    }

    /// `∫_a^b ‖r_p'(z)‖_p dz` for `a, b ∈ [-1, 1]` (the speed is even in `z`).
    pub fn chart_arc(&self, a: f64, b: f64) -> Result<f64> {
        let signed = |s: f64| -> Result<f64> { Ok(s.signum() * self.chart_integral(s.abs())?) };
        Ok(signed(b)? - signed(a)?)
    }

    fn panel_integral(&self, i: usize) -> f64 {
        match &self.shape {
            Shape::Smooth { panels, .. } => match panels.get(i + 1) {
                Some(next) => next.cumulative - panels[i].cumulative,
                None => 0.25 * self.pi_p - panels[i].cumulative,
            },
            _ => 0.0,
        }
    }

    /// Inverse of the chart integral on `[0, π_p/4]`.
    fn chart_integral_inverse(&self, target: f64) -> Result<f64> {
        let quarter = 0.25 * self.pi_p;
        let target = target.clamp(0.0, quarter);
        match &self.shape {
            Shape::Diamond => Ok(0.5 * target),
            Shape::Square => Ok(target),
            Shape::Smooth { p, panels } => {
                if target >= quarter {
                    return Ok(self.fold);
                }
                let i = panels
                    .partition_point(|pn| pn.cumulative <= target)
                    .saturating_sub(1);
                let pn = &panels[i];
                let p = *p;
                let residual = |x: f64| {
                    pn.cumulative + gauss_kronrod21(&|z| speed_unchecked(p, z), pn.a, x).0 - target
                };
                // Newton on the panel (the derivative is the speed), bisecting
                // whenever a step leaves the bracket.
                let (mut lo, mut hi) = (pn.a, pn.b);
                let mut x = pn.a
                    + (pn.b - pn.a)
                        * ((target - pn.cumulative) / (self.panel_integral(i) + f64::MIN_POSITIVE))
                            .clamp(0.0, 1.0);
                for _ in 0..100 {
                    let r = residual(x);
                    if r.abs() <= 1e-15 {
                        return Ok(x);
                    }
                    if r > 0.0 {
                        hi = x;
                    } else {
                        lo = x;
                    }
                    let newton = x - r / speed_unchecked(p, x);
                    let next = if newton > lo && newton < hi {
                        newton
                    } else {
                        0.5 * (lo + hi)
                    };
                    if (next - x).abs() <= 4.0 * f64::EPSILON * x.abs()
                        || hi - lo <= 4.0 * f64::EPSILON * hi
                    {
                        return Ok(next);
                    }
                    x = next;
                }
                let tol = Tolerance::new(1e-15, 0.0, 100)?;
                let root = find_root_bracketed(|x| Ok::<_, Error>(residual(x)), lo, hi, tol)?;
                Ok(root.root)
            }
        }
    }

    /// Arc length from `(1, 0)` counter-clockwise to `ρ_p(φ)`, in `[0, 2π_p)`.
    pub fn cumulative_length(&self, phi: f64) -> f64 {
        let phi = reduce_angle(phi);
        // Quadrant boundaries belong to the quadrant on their counter-clockwise side.
        let k = ((phi / FRAC_PI_2).floor() as usize).min(3);
        let psi = phi - k as f64 * FRAC_PI_2;
        let q = rho(self.p, psi).point;
        let within = if q.y <= q.x {
            self.chart_integral_lower(q.y.clamp(0.0, self.fold))
        } else {
            0.5 * self.pi_p - self.chart_integral_lower(q.x.clamp(0.0, self.fold))
        };
        let total = k as f64 * 0.5 * self.pi_p + within;
        if total >= self.perimeter() {
            0.0
        } else {
            total
        }
    }

    /// The point at arc length `length` (any real, taken modulo `2π_p`)
    /// from `(1, 0)` counter-clockwise.
    pub fn point_at_length(&self, length: f64) -> Result<CirclePoint> {
        let half_quarter = 0.25 * self.pi_p;
        let quarter = 0.5 * self.pi_p;
        let l = length.rem_euclid(self.perimeter());
        let k = ((l / quarter).floor() as usize).min(3);
        let rem = (l - k as f64 * quarter).max(0.0);
        let mut pt = if rem <= half_quarter {
            let y = self.chart_integral_inverse(rem)?;
            Point2::new(self.complement(y), y)
        } else {
            let x = self.chart_integral_inverse(quarter - rem)?;
            Point2::new(x, self.complement(x))
        };
        for _ in 0..k {
            pt = pt.quarter_turn();
        }
        Ok(CirclePoint {
            phi: pt.angle(),
            point: pt,
        })
    }

    /// `μ_p` of the counter-clockwise arc from `ρ_p(phi1)` to `ρ_p(phi2)`,
    /// for `phi1 ≤ phi2 ≤ phi1 + 2π`.
    pub fn arc_length(&self, phi1: f64, phi2: f64) -> Result<f64> {
        if !(phi1 <= phi2) || phi2 - phi1 > TAU + 1e-12 {
            return Err(Error::domain("angle span", phi2 - phi1));
        }
        if phi2 - phi1 >= TAU {
            return Ok(self.perimeter());
        }
        let d = (self.cumulative_length(phi2) - self.cumulative_length(phi1))
            .rem_euclid(self.perimeter());
        // Nearly full spans can wrap to ~0 through rounding.
        if d < 1e-12 * self.perimeter() && phi2 - phi1 > PI {
            return Ok(self.perimeter());
        }
        Ok(d)
    }

    /// The point `φ₂` with `arc_length(start_phi, φ₂) = length`.
    pub fn invert_arc_length(&self, start_phi: f64, length: f64) -> Result<CirclePoint> {
        if !(0.0..=self.perimeter()).contains(&length) {
            return Err(Error::domain("arc length", length));
        }
        if length == 0.0 {
            return Ok(self.rho(start_phi));
        }
        self.point_at_length(self.cumulative_length(start_phi) + length)
    }

    /// Shorter of the two arc lengths between `a` and `b`, in `[0, π_p]`.
    pub fn arc_distance(&self, a: &CirclePoint, b: &CirclePoint) -> f64 {
        let d = (self.cumulative_length(b.phi) - self.cumulative_length(a.phi))
            .rem_euclid(self.perimeter());
        d.min(self.perimeter() - d).max(0.0)
    }

    /// `‖a - b‖_p`.
    pub fn chord_length(&self, a: Point2, b: Point2) -> f64 {
        self.norm(a - b)
    }
}
