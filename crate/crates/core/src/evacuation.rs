//! The two-robot wireless search algorithm deployed at `ρ_p(φ)`.
//!
//! Both robots walk from the center to `ρ_p(φ)` (time 1) and then sweep the
//! perimeter in opposite directions at unit ℓp speed. `τ` always denotes the
//! parallel search time measured from arrival at the perimeter. Once the
//! exit is found the other robot walks straight to it, so the evacuation time
//! is `1 + τ + δ(τ)` with `δ` the ℓp distance between the robots.

use std::f64::consts::FRAC_PI_4;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{CirclePoint, LpCircle, PExponent, Point2};
use crate::numerics::{find_root_bracketed, maximize_on_grid, Tolerance};

const ANGLE_EPS: f64 = 1e-12;
// Parallel search times may overshoot π_p by rounding in callers.
const TAU_SLACK: f64 = 1e-12;

/// Deployment of the algorithm: norm exponent and start angle `φ ∈ [0, π/4]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AlgoParams {
    pub p: PExponent,
    pub phi: f64,
}

impl AlgoParams {
    pub fn new(p: PExponent, phi: f64) -> Result<Self> {
        if !(-ANGLE_EPS..=FRAC_PI_4 + ANGLE_EPS).contains(&phi) {
            return Err(Error::domain("deployment angle phi", phi));
        }
        Ok(Self {
            p,
            phi: phi.clamp(0.0, FRAC_PI_4),
        })
    }

    /// `φ = 0` for `p ≤ 2`, `φ = π/4` above.
    pub fn canonical(p: PExponent) -> Self {
        let phi = match Branch::for_p(p) {
            Branch::Phi0 => 0.0,
            Branch::PhiQuarter => FRAC_PI_4,
        };
        Self { p, phi }
    }

    pub fn branch(&self) -> Option<Branch> {
        if self.phi.abs() <= ANGLE_EPS {
            Some(Branch::Phi0)
        } else if (self.phi - FRAC_PI_4).abs() <= ANGLE_EPS {
            Some(Branch::PhiQuarter)
        } else {
            None
        }
    }
}

/// Which deployment a closed form refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Branch {
    /// `φ = 0`, optimal for `p ∈ [1, 2]`.
    Phi0,
    /// `φ = π/4`, optimal for `p ∈ [2, ∞]`.
    PhiQuarter,
}

impl Branch {
    pub fn for_p(p: PExponent) -> Branch {
        match p {
            PExponent::Finite(v) if v <= 2.0 => Branch::Phi0,
            _ => Branch::PhiQuarter,
        }
    }

    pub fn phi(self) -> f64 {
        match self {
            Branch::Phi0 => 0.0,
            Branch::PhiQuarter => FRAC_PI_4,
        }
    }
}

/// Result of running the algorithm against one exit placement.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EvacOutcome {
    pub exit: CirclePoint,
    pub tau: f64,
    /// `(counter-clockwise robot, clockwise robot)` at discovery.
    pub finder_positions: (Point2, Point2),
    pub separation: f64,
    pub total_cost: f64,
}

/// Worst-case exit placement of the canonical deployment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CriticalParams {
    pub p: PExponent,
    /// Root of `w^p + 1 = 2(1-w)^p`; present for the `π/4` branch.
    pub w_p: Option<f64>,
    /// Chart coordinate of the worst-case exit.
    pub s_p: f64,
    /// Explored arc measure when that exit is found.
    pub e_p: f64,
    /// Robot separation when that exit is found.
    pub gamma_p: f64,
    pub branch: Branch,
    /// Set for `p ∈ {1, ∞}`: the worst case is a plateau and `e_p`, `γ_p`,
    /// `s_p` are the limits from the smooth family, not unique maximizers.
    pub limit_values: bool,
}

impl CriticalParams {
    /// `1 + e_p/2 + γ_p`.
    pub fn cost(&self) -> f64 {
        1.0 + 0.5 * self.e_p + self.gamma_p
    }

    /// `e_p / 2π_p`.
    pub fn explored_fraction(&self, circle: &LpCircle) -> f64 {
        self.e_p / circle.perimeter()
    }
}

/// The algorithm on a concrete circle.
#[derive(Debug, Clone)]
pub struct WirelessSearch {
    circle: LpCircle,
    params: AlgoParams,
    start: f64,
}

impl WirelessSearch {
    pub fn new(params: AlgoParams) -> Result<Self> {
        Self::on_circle(LpCircle::new(params.p)?, params.phi)
    }

    pub fn on_circle(circle: LpCircle, phi: f64) -> Result<Self> {
        let params = AlgoParams::new(circle.p(), phi)?;
        let start = circle.cumulative_length(params.phi);
        Ok(Self {
            circle,
            params,
            start,
        })
    }

    pub fn circle(&self) -> &LpCircle {
        &self.circle
    }

    pub fn params(&self) -> AlgoParams {
        self.params
    }

    fn check_tau(&self, tau: f64) -> Result<f64> {
        let pi_p = self.circle.pi_p();
        if !(-TAU_SLACK..=pi_p + TAU_SLACK).contains(&tau) {
            return Err(Error::domain("search time tau", tau));
        }
        Ok(tau.clamp(0.0, pi_p))
    }

    /// Robot positions after parallel search time `tau`: counter-clockwise
    /// robot first.
    pub fn robot_positions(&self, tau: f64) -> Result<(Point2, Point2)> {
        let tau = self.check_tau(tau)?;
        if tau == 0.0 {
            let p = self.circle.rho(self.params.phi).point;
            return Ok((p, p));
        }
        let ccw = self.circle.point_at_length(self.start + tau)?;
        let cw = self.circle.point_at_length(self.start - tau)?;
        Ok((ccw.point, cw.point))
    }

    /// `δ_{p,φ}(τ) = ‖pos₁ - pos₂‖_p`.
    pub fn separation(&self, tau: f64) -> Result<f64> {
        let (a, b) = self.robot_positions(tau)?;
        Ok(self.circle.chord_length(a, b))
    }

    /// `δ` from the position of the counter-clockwise robot only:
    /// `2|y|` for `φ = 0` and `2^{1/p}|x - y|` for `φ = π/4`.
    pub fn separation_closed_form(&self, tau: f64) -> Result<f64> {
        let branch = self.params.branch().ok_or_else(|| {
            Error::Unsupported(format!(
                "closed-form separation at phi = {}",
                self.params.phi
            ))
        })?;
        let (a, _) = self.robot_positions(tau)?;
        Ok(match branch {
            Branch::Phi0 => 2.0 * a.y.abs(),
            Branch::PhiQuarter => self.circle.p().two_pow_inv() * (a.x - a.y).abs(),
        })
    }

    /// `𝓔_{p,φ}(τ) = 1 + τ + δ_{p,φ}(τ)`.
    pub fn evac_time(&self, tau: f64) -> Result<f64> {
        let tau = self.check_tau(tau)?;
        Ok(1.0 + tau + self.separation(tau)?)
    }

    pub fn simulate_exit(&self, exit: &CirclePoint) -> Result<EvacOutcome> {
        let perimeter = self.circle.perimeter();
        let ccw = (self.circle.cumulative_length(exit.phi) - self.start).rem_euclid(perimeter);
        let tau = ccw.min(perimeter - ccw).clamp(0.0, self.circle.pi_p());
        let finder_positions = self.robot_positions(tau)?;
        let separation = self
            .circle
            .chord_length(finder_positions.0, finder_positions.1);
        Ok(EvacOutcome {
            exit: *exit,
            tau,
            finder_positions,
            separation,
            total_cost: 1.0 + tau + separation,
        })
    }

    /// Independent worst case: `n_grid` uniform samples of `𝓔` over
    /// `[0, π_p]`, best cell refined by golden section. Returns `(τ*, cost*)`.
    pub fn worst_case_grid_oracle(&self, n_grid: usize) -> Result<(f64, f64)> {
        if n_grid < 64 {
            return Err(Error::domain("oracle grid size", n_grid as f64));
        }
        let best = maximize_on_grid(
            |tau| self.evac_time(tau),
            0.0,
            self.circle.pi_p(),
            n_grid,
            Tolerance::with_abs(1e-12),
        )?;
        Ok((best.x, best.value))
    }
}

/// Grid oracle for a deployment: `(τ*, cost*)`.
pub fn worst_case_grid_oracle(params: AlgoParams, n_grid: usize) -> Result<(f64, f64)> {
    WirelessSearch::new(params)?.worst_case_grid_oracle(n_grid)
}

/// Unique root of `w^p + 1 = 2(1-w)^p` in `(0, 1)`.
pub fn w_root(p: f64) -> Result<f64> {
    if !(p > 1.0) || !p.is_finite() {
        return Err(Error::domain("p", p));
    }
    let tol = Tolerance::new(1e-15, 0.0, 200)?;
    let r = find_root_bracketed(
        |w: f64| Ok::<_, Error>(w.powf(p) + 1.0 - 2.0 * (1.0 - w).powf(p)),
        0.0,
        1.0,
        tol,
    )?;
    Ok(r.root)
}

/// Critical parameters of one branch, evaluated at any finite `p > 1`.
///
/// The `φ = 0` formulas describe the worst case for `p ≤ 2`, the `π/4`
/// formulas for `p ≥ 2`; both are defined on either side, which is what
/// the continuity check at `p = 2` uses.
pub fn critical_params_for_branch(circle: &LpCircle, branch: Branch) -> Result<CriticalParams> {
    let p = match circle.p() {
        PExponent::Finite(v) if v > 1.0 => v,
        other => {
            return Err(Error::Unsupported(format!(
                "smooth critical parameters need 1 < p < inf, got {other}"
            )))
        }
    };
    let pi_p = circle.pi_p();
    match branch {
        Branch::Phi0 => {
            let s_p = ((2f64.powf(p) - 1.0).powf(1.0 / (p - 1.0)) + 1.0).powf(-1.0 / p);
            let e_p = pi_p + 2.0 * circle.chart_integral(s_p)?;
            let gamma_p = 2.0 * circle.complement(s_p);
            Ok(CriticalParams {
                p: circle.p(),
                w_p: None,
                s_p,
                e_p,
                gamma_p,
                branch,
                limit_values: false,
            })
        }
        Branch::PhiQuarter => {
            let w_p = w_root(p)?;
            let wq = w_p.powf(p / (p - 1.0));
            let s_p = (wq + 1.0).powf(-1.0 / p);
            // (1 - s_p^p)^{1/p} without cancellation.
            let comp = (wq / (1.0 + wq)).powf(1.0 / p);
            // π_p + 2∫_{2^{-1/p}}^{s_p}, folded: ∫_0^{s_p} = π_p/2 - ∫_0^{comp}.
            let e_p = 1.5 * pi_p - 2.0 * circle.chart_integral(comp.min(circle.fold()))?;
            let gamma_p = circle.p().two_pow_inv() * (comp + s_p);
            Ok(CriticalParams {
                p: circle.p(),
                w_p: Some(w_p),
                s_p,
                e_p,
                gamma_p,
                branch,
                limit_values: false,
            })
        }
    }
}

/// Critical parameters of the canonical branch.
///
/// For `p = 1` and `p = ∞` the worst case is the plateau `𝓔 ≡ 5` on
/// `τ ∈ [2, 4]`; the reported values are the `p → 1` and `p → ∞` limits
/// (`e = 24/5, γ = 8/5` and `e = 4, γ = 2`).
pub fn critical_params_on(circle: &LpCircle) -> Result<CriticalParams> {
    let p = circle.p();
    match p {
        PExponent::Infinity => Ok(CriticalParams {
            p,
            w_p: None,
            s_p: 1.0,
            e_p: 4.0,
            gamma_p: 2.0,
            branch: Branch::PhiQuarter,
            limit_values: true,
        }),
        PExponent::Finite(1.0) => Ok(CriticalParams {
            p,
            w_p: None,
            s_p: 0.2,
            e_p: 4.8,
            gamma_p: 1.6,
            branch: Branch::Phi0,
            limit_values: true,
        }),
        _ => critical_params_for_branch(circle, Branch::for_p(p)),
    }
}

pub fn critical_params(p: PExponent) -> Result<CriticalParams> {
    critical_params_on(&LpCircle::new(p)?)
}

/// Worst-case cost of the canonical deployment on `circle`.
pub fn worst_case_cost_on(circle: &LpCircle) -> Result<f64> {
    if circle.p().is_polygonal() {
        return Ok(5.0);
    }
    let crit = critical_params_on(circle)?;
    Ok(match crit.branch {
        Branch::Phi0 => crit.cost(),
        // The interior critical point may be a saddle, in which case the
        // worst case sits at the end of the search.
        Branch::PhiQuarter => crit.cost().max(1.0 + circle.pi_p()),
    })
}

pub fn worst_case_cost(p: PExponent) -> Result<f64> {
    worst_case_cost_on(&LpCircle::new(p)?)
}

/// The cost functions parametrized by the chart coordinate of the exit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitCostFn {
    /// `φ = 0`, exit in the second quadrant, `s ∈ [0, 1]`.
    F,
    /// `φ = π/4`, exit past `ρ_p(3π/4)`, `s ∈ [2^{-1/p}, 1]`.
    F1,
    /// `φ = π/4`, exit in the third quadrant, `s ∈ [-1, -2^{-1/p}]`.
    F2,
}

impl ExitCostFn {
    pub fn domain(self, circle: &LpCircle) -> (f64, f64) {
        let c = circle.fold();
        match self {
            ExitCostFn::F => (0.0, 1.0),
            ExitCostFn::F1 => (c, 1.0),
            ExitCostFn::F2 => (-1.0, -c),
        }
    }
}

/// Total evacuation cost when the exit sits at chart coordinate `s`.
pub fn exit_cost_function(circle: &LpCircle, s: f64, which: ExitCostFn) -> Result<f64> {
    if circle.p().finite().is_none_or(|v| v <= 1.0) {
        return Err(Error::Unsupported(
            "exit cost functions need 1 < p < inf".into(),
        ));
    }
    let (lo, hi) = which.domain(circle);
    // Branch boundaries are computed as 2^{-1/p}; accept rounding-level overshoot.
    if !(lo - 1e-15..=hi + 1e-15).contains(&s) {
        return Err(Error::domain("exit chart coordinate", s));
    }
    let s = s.clamp(lo, hi);
    let pi_p = circle.pi_p();
    let k = circle.p().two_pow_inv();
    Ok(match which {
        ExitCostFn::F => 1.0 + 0.5 * pi_p + circle.chart_integral(s)? + 2.0 * circle.complement(s),
        ExitCostFn::F1 => {
            1.0 + 0.5 * pi_p + circle.chart_arc(circle.fold(), s)? + k * (circle.complement(s) + s)
        }
        ExitCostFn::F2 => {
            1.0 + 0.75 * pi_p + circle.chart_arc(-1.0, s)? - k * (circle.complement(-s) + s)
        }
    })
}
