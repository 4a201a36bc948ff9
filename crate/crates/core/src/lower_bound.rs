//! Lower bounds on the evacuation cost and the optimality gap.

use serde::Serialize;

use crate::chord_arc::{min_chord_l, VERIFIED_P_RANGE};
use crate::error::{Error, Result};
use crate::evacuation::{critical_params_on, worst_case_cost_on};
use crate::geometry::{LpCircle, PExponent};

/// `1 + π_p`: some exit stays unexplored until half the perimeter is searched.
pub fn weak_lower_bound(p: PExponent) -> Result<f64> {
    Ok(weak_lower_bound_on(&LpCircle::new(p)?))
}

pub fn weak_lower_bound_on(circle: &LpCircle) -> f64 {
    1.0 + circle.pi_p()
}

/// `1 + e_p/2 + 𝓛_p(e_p)`.
pub fn generic_lower_bound(p: PExponent) -> Result<f64> {
    generic_lower_bound_on(&LpCircle::new(p)?)
}

pub fn generic_lower_bound_on(circle: &LpCircle) -> Result<f64> {
    if circle.p().is_polygonal() {
        return Err(Error::Unsupported(format!(
            "generic lower bound needs a smooth circle, got p = {}",
            circle.p()
        )));
    }
    let e_p = critical_params_on(circle)?.e_p;
    Ok(1.0 + 0.5 * e_p + min_chord_l(circle, e_p)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OptimalityReport {
    pub p: PExponent,
    pub upper: f64,
    pub weak_lower: f64,
    pub generic_lower: f64,
    /// `upper - generic_lower`.
    pub gap: f64,
    /// `generic_lower` holds the weak bound (polygonal `p` or `p` above the verified range).
    pub substituted: bool,
}

pub fn optimality_report(p: PExponent) -> Result<OptimalityReport> {
    optimality_report_on(&LpCircle::new(p)?)
}

pub fn optimality_report_on(circle: &LpCircle) -> Result<OptimalityReport> {
    let upper = worst_case_cost_on(circle)?;
    let weak_lower = weak_lower_bound_on(circle);
    let substituted = circle.p().is_polygonal() || circle.p().value() > VERIFIED_P_RANGE.1;
    let generic_lower = if substituted {
        weak_lower
    } else {
        generic_lower_bound_on(circle)?
    };
    Ok(OptimalityReport {
        p: circle.p(),
        upper,
        weak_lower,
        generic_lower,
        gap: upper - generic_lower,
        substituted,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    fn p(v: f64) -> PExponent {
        PExponent::new(v).unwrap()
    }

    #[test]
    fn weak_bound_examples() {
        assert_eq!(weak_lower_bound(PExponent::ONE).unwrap(), 5.0);
        assert_eq!(weak_lower_bound(PExponent::Infinity).unwrap(), 5.0);
        assert_abs_diff_eq!(
            weak_lower_bound(PExponent::TWO).unwrap(),
            1.0 + PI,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(
            weak_lower_bound(p(1000.0)).unwrap(),
            4.9972283728,
            epsilon = 1e-5
        );
    }

    #[test]
    fn generic_bound_examples() {
        let g = generic_lower_bound(PExponent::TWO).unwrap();
        assert_abs_diff_eq!(g, 1.0 + 2.0 * PI / 3.0 + 3f64.sqrt(), epsilon = 1e-5);
        for v in [1.5, 3.0] {
            let upper = crate::evacuation::worst_case_cost(p(v)).unwrap();
            assert_abs_diff_eq!(generic_lower_bound(p(v)).unwrap(), upper, epsilon = 1e-4);
        }
        assert!(generic_lower_bound(PExponent::ONE).is_err());
    }

    #[test]
    fn report_examples() {
        let r = optimality_report(PExponent::ONE).unwrap();
        assert_eq!((r.upper, r.generic_lower, r.gap), (5.0, 5.0, 0.0));
        assert!(r.substituted);
        let r = optimality_report(PExponent::TWO).unwrap();
        assert!(r.gap.abs() <= 1e-4 && !r.substituted);
        assert!(r.weak_lower <= r.generic_lower + 1e-6);
        let r = optimality_report(p(1000.0)).unwrap();
        assert!(r.substituted);
        assert!(r.gap >= 0.0 && r.gap <= 0.0021, "{r:?}");
    }
}
