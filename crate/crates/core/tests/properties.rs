use std::f64::consts::{FRAC_PI_4, TAU};
use std::sync::OnceLock;

use proptest::prelude::*;

use lpevac::chord_arc::{min_chord_l, sigma};
use lpevac::geometry::{norm_p, rho};
use lpevac::{AlgoParams, LpCircle, PExponent, WirelessSearch};

const PS: [f64; 6] = [1.0, 1.25, 1.5, 2.0, 3.0, 8.0];

/// Circles are built once and shared across cases.
fn circles() -> &'static Vec<LpCircle> {
    static CIRCLES: OnceLock<Vec<LpCircle>> = OnceLock::new();
    CIRCLES.get_or_init(|| {
        PS.iter()
            .map(|&v| LpCircle::new(PExponent::new(v).unwrap()).unwrap())
            .chain([LpCircle::new(PExponent::Infinity).unwrap()])
            .collect()
    })
}

fn any_circle() -> impl Strategy<Value = &'static LpCircle> {
    (0..circles().len()).prop_map(|i| &circles()[i])
}

fn smooth_circle() -> impl Strategy<Value = &'static LpCircle> {
    (1..PS.len()).prop_map(|i| &circles()[i])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rho_lies_on_the_circle(c in any_circle(), phi in -10.0..10.0f64) {
        let q = rho(c.p(), phi).point;
        prop_assert!((norm_p(c.p(), q) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn point_at_length_inverts_cumulative_length(c in any_circle(), frac in 0.0..1.0f64) {
        let l = frac * c.perimeter();
        let pt = c.point_at_length(l).unwrap();
        prop_assert!((norm_p(c.p(), pt.point) - 1.0).abs() < 1e-12);
        let back = c.cumulative_length(pt.phi);
        let d = (back - l).abs();
        prop_assert!(d.min(c.perimeter() - d) < 1e-9, "{} vs {}", back, l);
    }

    #[test]
    fn arc_length_is_additive(c in any_circle(), a in 0.0..TAU, x in 0.0..1.0f64, y in 0.0..1.0f64) {
        let (lo, hi) = if x < y { (x, y) } else { (y, x) };
        let (b, d) = (a + lo * TAU, a + hi * TAU);
        let whole = c.arc_length(a, d).unwrap();
        let parts = c.arc_length(a, b).unwrap() + c.arc_length(b, d).unwrap();
        prop_assert!((whole - parts).abs() < 1e-9);
    }

    #[test]
    fn arc_distance_bounds_chord(c in any_circle(), a in 0.0..TAU, b in 0.0..TAU) {
        let (pa, pb) = (c.rho(a), c.rho(b));
        prop_assert!(c.chord_length(pa.point, pb.point) <= c.arc_distance(&pa, &pb) + 1e-9);
    }

    #[test]
    fn min_chord_is_symmetric(c in smooth_circle(), frac in 0.01..0.99f64) {
        let u = frac * c.pi_p();
        let a = min_chord_l(c, u).unwrap();
        let b = min_chord_l(c, c.perimeter() - u).unwrap();
        prop_assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn min_chord_is_a_lower_bound(c in smooth_circle(), frac in 0.01..1.0f64, theta in 0.0..FRAC_PI_4) {
        let u = frac * c.pi_p();
        prop_assert!(min_chord_l(c, u).unwrap() <= sigma(c, theta, u).unwrap() + 1e-12);
    }

    #[test]
    fn robots_mirror_each_other(c in smooth_circle(), frac in 0.0..1.0f64) {
        let tau = frac * c.pi_p();
        for phi in [0.0, FRAC_PI_4] {
            let s = WirelessSearch::new(AlgoParams::new(c.p(), phi).unwrap()).unwrap();
            let (a, b) = s.robot_positions(tau).unwrap();
            if phi == 0.0 {
                prop_assert!((a.x - b.x).abs() < 1e-10 && (a.y + b.y).abs() < 1e-10);
            } else {
                prop_assert!((a.x - b.y).abs() < 1e-10 && (a.y - b.x).abs() < 1e-10);
            }
            let closed = s.separation_closed_form(tau).unwrap();
            prop_assert!((closed - s.separation(tau).unwrap()).abs() < 1e-10);
        }
    }

    #[test]
    fn evacuation_time_at_most_worst_case(c in any_circle(), frac in 0.0..1.0f64) {
        let s = WirelessSearch::new(AlgoParams::canonical(c.p())).unwrap();
        let worst = lpevac::evacuation::worst_case_cost_on(c).unwrap();
        prop_assert!(s.evac_time(frac * c.pi_p()).unwrap() <= worst + 1e-9);
    }
}
