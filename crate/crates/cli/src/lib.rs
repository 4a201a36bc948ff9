//! Commands behind the `lpevac` binary. Each returns a table or a
//! serializable report; `main` only parses flags and writes output.

use std::f64::consts::{FRAC_PI_4, PI};

use rayon::prelude::*;
use serde::Serialize;

use lpevac::chord_arc::{
    min_chord, sigma_profile, verify_l_monotone, verify_sigma_monotone, DEFAULT_ANGLE_GRID,
    VERIFIED_P_RANGE,
};
use lpevac::evacuation::critical_params_on;
use lpevac::lower_bound::optimality_report_on;
use lpevac::table::TableError;
use lpevac::{
    AlgoParams, CriticalParams, CurveTable, EvacOutcome, LpCircle, MonotonicityReport,
    OptimalityReport, PExponent, WirelessSearch,
};

pub const DEFAULT_GRID: usize = 512;
pub const DEFAULT_MONOTONE_TOL: f64 = 1e-9;
pub const DEFAULT_GAP_TOL: f64 = 1e-4;
/// Allowed `|𝓛_p(e_p) - γ_p|` in `verify`.
pub const CHORD_MATCH_TOL: f64 = 1e-5;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(lpevac::Error),
    #[error(transparent)]
    Table(#[from] TableError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl From<lpevac::Error> for CliError {
    fn from(e: lpevac::Error) -> Self {
        // Out-of-domain inputs come from the command line.
        match e {
            lpevac::Error::Domain { .. } => CliError::Usage(e.to_string()),
            other => CliError::Core(other),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            _ => 1,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

/// `p` as typed on the command line: a number `≥ 1` or `inf`.
pub fn parse_p(s: &str) -> Result<PExponent, String> {
    s.parse::<PExponent>().map_err(|e| e.to_string())
}

/// Radians, or `[k]pi[/n]` with optional sign (`pi/4`, `-pi/2`, `5pi/4`).
pub fn parse_angle(s: &str) -> Result<f64, String> {
    let t = s
        .to_lowercase()
        .replace(char::is_whitespace, "")
        .replace('π', "pi");
    let bad = || format!("cannot parse angle {s:?}");
    let Some((coef, rest)) = t.split_once("pi") else {
        return t.parse::<f64>().map_err(|_| bad());
    };
    let coef = match coef {
        "" | "+" => 1.0,
        "-" => -1.0,
        c => c.trim_end_matches('*').parse::<f64>().map_err(|_| bad())?,
    };
    let den = match rest {
        "" => 1.0,
        r => r
            .strip_prefix('/')
            .and_then(|d| d.parse::<f64>().ok())
            .filter(|d| *d != 0.0)
            .ok_or_else(bad)?,
    };
    let v = coef * PI / den;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(bad())
    }
}

/// Uniform grid over `[p_min, p_max]`, endpoints included.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PRange {
    pub p_min: f64,
    pub p_max: f64,
    pub steps: usize,
}

impl PRange {
    pub fn new(p_min: f64, p_max: f64, steps: usize) -> CliResult<Self> {
        if !(1.0 <= p_min && p_min <= p_max && p_max.is_finite()) {
            return Err(CliError::Usage(format!(
                "need 1 <= p_min <= p_max < inf, got [{p_min}, {p_max}]"
            )));
        }
        let single = p_min == p_max && steps >= 1;
        if steps < 2 && !single {
            return Err(CliError::Usage(format!(
                "need at least 2 steps, got {steps}"
            )));
        }
        Ok(Self {
            p_min,
            p_max,
            steps,
        })
    }

    pub fn values(&self) -> Vec<f64> {
        if self.p_min == self.p_max {
            return vec![self.p_min; self.steps];
        }
        (0..self.steps)
            .map(|i| grid_point(self.p_min, self.p_max, i, self.steps))
            .collect()
    }

    fn annotate(&self, table: CurveTable) -> CurveTable {
        table
            .with_meta("p_min", self.p_min)
            .with_meta("p_max", self.p_max)
            .with_meta("steps", self.steps)
    }
}

fn grid_point(lo: f64, hi: f64, i: usize, n: usize) -> f64 {
    if i + 1 == n {
        hi
    } else {
        lo + (hi - lo) * i as f64 / (n - 1) as f64
    }
}

fn check_steps(steps: usize) -> CliResult<()> {
    if steps < 2 {
        return Err(CliError::Usage(format!(
            "need at least 2 steps, got {steps}"
        )));
    }
    Ok(())
}

fn base_table(command: &str, columns: &[&str]) -> CurveTable {
    CurveTable::new(columns.iter().copied())
        .with_meta("command", command)
        .with_meta("version", lpevac::VERSION)
}

fn fill(mut table: CurveTable, rows: Vec<Vec<f64>>) -> CliResult<CurveTable> {
    for row in rows {
        table.push_row(row)?;
    }
    Ok(table)
}

fn circle(p: PExponent) -> CliResult<LpCircle> {
    Ok(LpCircle::new(p)?)
}

/// Columns `p, pi_p`.
pub fn cmd_pi(range: PRange) -> CliResult<CurveTable> {
    let rows = range
        .values()
        .into_par_iter()
        .map(|v| Ok(vec![v, circle(PExponent::new(v)?)?.pi_p()]))
        .collect::<CliResult<Vec<_>>>()?;
    fill(range.annotate(base_table("pi", &["p", "pi_p"])), rows)
}

pub const COST_COLUMNS: [&str; 8] = [
    "p",
    "upper_cost",
    "weak_lower",
    "generic_lower",
    "gap",
    "e_p",
    "gamma_p",
    "explored_fraction",
];

/// Upper and lower bounds per `p`. Rows at `p = 1` or above the verified
/// range carry the weak bound in `generic_lower`.
pub fn cmd_cost(range: PRange) -> CliResult<CurveTable> {
    let rows = range
        .values()
        .into_par_iter()
        .map(|v| {
            let c = circle(PExponent::new(v)?)?;
            let r = optimality_report_on(&c)?;
            let k = critical_params_on(&c)?;
            Ok(vec![
                v,
                r.upper,
                r.weak_lower,
                r.generic_lower,
                r.gap,
                k.e_p,
                k.gamma_p,
                k.explored_fraction(&c),
            ])
        })
        .collect::<CliResult<Vec<_>>>()?;
    let table = base_table("cost", &COST_COLUMNS)
        .with_meta("angle_grid", DEFAULT_ANGLE_GRID)
        .with_meta("generic_lower_substituted_above_p", VERIFIED_P_RANGE.1);
    fill(range.annotate(table), rows)
}

/// Columns `tau, delta, evac_time` over `τ ∈ [0, π_p]`; `phi` must be `0` or `π/4`.
pub fn cmd_profile(p: PExponent, phi: f64, steps: usize) -> CliResult<CurveTable> {
    check_steps(steps)?;
    let params = AlgoParams::new(p, phi)?;
    if params.branch().is_none() {
        return Err(CliError::Usage(format!(
            "profile needs phi = 0 or pi/4, got {phi}"
        )));
    }
    let search = WirelessSearch::new(params)?;
    let pi_p = search.circle().pi_p();
    let rows = (0..steps)
        .into_par_iter()
        .map(|i| {
            let tau = grid_point(0.0, pi_p, i, steps);
            let delta = search.separation(tau)?;
            Ok(vec![tau, delta, 1.0 + tau + delta])
        })
        .collect::<CliResult<Vec<_>>>()?;
    let table = base_table("profile", &["tau", "delta", "evac_time"])
        .with_meta("p", p)
        .with_meta("phi", params.phi)
        .with_meta("steps", steps);
    fill(table, rows)
}

/// Columns `theta, sigma` over `θ ∈ [0, π/4]` at arc length `arc_len` (default `e_p`).
pub fn cmd_sigma(p: PExponent, steps: usize, arc_len: Option<f64>) -> CliResult<CurveTable> {
    check_steps(steps)?;
    let c = circle(p)?;
    let arc_len = match arc_len {
        Some(u) => u,
        None => critical_params_on(&c)?.e_p,
    };
    let rows = sigma_profile(&c, arc_len, steps)?
        .into_iter()
        .map(|s| vec![s.theta, s.chord])
        .collect();
    let table = base_table("sigma", &["theta", "sigma"])
        .with_meta("p", p)
        .with_meta("arc_len", arc_len)
        .with_meta("steps", steps);
    fill(table, rows)
}

/// Columns `u, L` over `u ∈ [0, π_p]`.
pub fn cmd_lchord(p: PExponent, steps: usize) -> CliResult<CurveTable> {
    check_steps(steps)?;
    let c = circle(p)?;
    let pi_p = c.pi_p();
    let rows = (0..steps)
        .into_par_iter()
        .map(|i| {
            let u = grid_point(0.0, pi_p, i, steps);
            Ok(vec![u, min_chord(&c, u, DEFAULT_ANGLE_GRID)?.chord])
        })
        .collect::<CliResult<Vec<_>>>()?;
    let table = base_table("lchord", &["u", "L"])
        .with_meta("p", p)
        .with_meta("steps", steps)
        .with_meta("angle_grid", DEFAULT_ANGLE_GRID);
    fill(table, rows)
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct ScalarCheck {
    pub value: f64,
    pub expected: f64,
    pub violation: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl ScalarCheck {
    fn new(value: f64, expected: f64, tolerance: f64) -> Self {
        let violation = (value - expected).abs();
        Self {
            value,
            expected,
            violation,
            tolerance,
            passed: violation <= tolerance,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PVerification {
    pub p: PExponent,
    pub in_verified_range: bool,
    pub l_monotone: MonotonicityReport,
    pub sigma_monotone: MonotonicityReport,
    /// `𝓛_p(e_p)` against `γ_p`.
    pub chord_matches_gamma: ScalarCheck,
    /// `upper` against `generic_lower`.
    pub optimality_gap: ScalarCheck,
    pub report: OptimalityReport,
    pub passed: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub version: &'static str,
    pub grid: usize,
    pub monotone_tol: f64,
    pub gap_tol: f64,
    pub results: Vec<PVerification>,
    pub passed: bool,
}

/// Monotonicity of `𝓛_p` and `σ_p`, `𝓛_p(e_p) = γ_p` and the optimality gap, per `p`.
pub fn cmd_verify(
    ps: &[PExponent],
    grid: usize,
    tol: f64,
    gap_tol: f64,
) -> CliResult<VerifyReport> {
    if ps.is_empty() {
        return Err(CliError::Usage("verify needs at least one p".into()));
    }
    if grid < 64 {
        return Err(CliError::Usage(format!(
            "verify needs --grid >= 64, got {grid}"
        )));
    }
    if !(tol > 0.0 && gap_tol > 0.0) {
        return Err(CliError::Usage("tolerances must be positive".into()));
    }
    if let Some(p) = ps.iter().find(|p| p.is_polygonal()) {
        return Err(CliError::Usage(format!(
            "verify needs 1 < p < inf, got {p}"
        )));
    }
    let results = ps
        .par_iter()
        .map(|&p| verify_one(p, grid, tol, gap_tol))
        .collect::<CliResult<Vec<_>>>()?;
    let passed = results.iter().all(|r| r.passed);
    Ok(VerifyReport {
        version: lpevac::VERSION,
        grid,
        monotone_tol: tol,
        gap_tol,
        results,
        passed,
    })
}

fn verify_one(p: PExponent, grid: usize, tol: f64, gap_tol: f64) -> CliResult<PVerification> {
    let c = circle(p)?;
    let (lo, hi) = VERIFIED_P_RANGE;
    let in_verified_range = (lo..=hi).contains(&p.value());
    let l_monotone = verify_l_monotone(&c, grid, tol)?;
    let sigma_monotone = verify_sigma_monotone(&c, grid, tol)?;
    let k: CriticalParams = critical_params_on(&c)?;
    let chord = min_chord(&c, k.e_p, DEFAULT_ANGLE_GRID)?.chord;
    let chord_matches_gamma = ScalarCheck::new(chord, k.gamma_p, CHORD_MATCH_TOL);
    let report = optimality_report_on(&c)?;
    let optimality_gap = ScalarCheck::new(report.upper, report.generic_lower, gap_tol);
    let passed = l_monotone.passed
        && sigma_monotone.passed
        && chord_matches_gamma.passed
        && optimality_gap.passed;
    Ok(PVerification {
        p,
        in_verified_range,
        l_monotone,
        sigma_monotone,
        chord_matches_gamma,
        optimality_gap,
        report,
        passed,
    })
}

/// Outcome of one exit placement.
pub fn cmd_simulate(p: PExponent, phi: f64, exit_phi: f64) -> CliResult<EvacOutcome> {
    if !(0.0..=FRAC_PI_4 + 1e-12).contains(&phi) {
        return Err(CliError::Usage(format!(
            "phi must lie in [0, pi/4], got {phi}"
        )));
    }
    let search = WirelessSearch::new(AlgoParams::new(p, phi)?)?;
    let exit = search.circle().rho(exit_phi);
    Ok(search.simulate_exit(&exit)?)
}

pub fn cmd_params(p: PExponent) -> CliResult<CriticalParams> {
    Ok(critical_params_on(&circle(p)?)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn angles() {
        assert_eq!(parse_angle("pi/4").unwrap(), FRAC_PI_4);
        assert_eq!(parse_angle("pi").unwrap(), PI);
        assert_eq!(parse_angle("5pi/4").unwrap(), 5.0 * PI / 4.0);
        assert_eq!(parse_angle("-pi/2").unwrap(), -PI / 2.0);
        assert_eq!(parse_angle("0.25").unwrap(), 0.25);
        assert_eq!(parse_angle("π/4").unwrap(), FRAC_PI_4);
        assert_eq!(parse_angle(" 3 pi / 4 ").unwrap(), 3.0 * PI / 4.0);
        for bad in ["pi/0", "pix", "two", "pi/4/2", ""] {
            assert!(parse_angle(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn ranges() {
        assert_eq!(PRange::new(1.0, 1.0, 1).unwrap().values(), vec![1.0]);
        let r = PRange::new(1.0, 2.0, 3).unwrap();
        assert_eq!(r.values(), vec![1.0, 1.5, 2.0]);
        for (a, b, n) in [
            (0.5, 2.0, 3),
            (2.0, 1.0, 3),
            (1.0, 2.0, 1),
            (1.0, f64::INFINITY, 3),
        ] {
            assert_eq!(PRange::new(a, b, n).unwrap_err().exit_code(), 2);
        }
    }

    #[test]
    fn pi_table() {
        let t = cmd_pi(PRange::new(1.0, 1.0, 1).unwrap()).unwrap();
        assert_eq!(t.rows, vec![vec![1.0, 4.0]]);
        let t = cmd_pi(PRange::new(1.5, 2.5, 11).unwrap()).unwrap();
        let pis = t.column("pi_p").unwrap();
        let (imin, _) = pis
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(b.1))
            .unwrap();
        assert_eq!(t.rows[imin][0], 2.0);
        assert!((pis[imin] - PI).abs() < 1e-12);
    }

    #[test]
    fn profile_rejects_other_angles() {
        let e = cmd_profile(PExponent::TWO, 0.3, 10).unwrap_err();
        assert_eq!(e.exit_code(), 2);
        assert_eq!(
            cmd_profile(PExponent::TWO, 0.0, 1).unwrap_err().exit_code(),
            2
        );
    }

    #[test]
    fn simulate_examples() {
        let one = PExponent::ONE;
        assert!((cmd_simulate(one, FRAC_PI_4, PI).unwrap().total_cost - 6.0).abs() < 1e-9);
        assert!((cmd_simulate(one, 0.3, 0.3).unwrap().total_cost - 1.0).abs() < 1e-9);
        let inf = PExponent::Infinity;
        let out = cmd_simulate(inf, FRAC_PI_4, 5.0 * PI / 4.0).unwrap();
        assert!((out.total_cost - 5.0).abs() < 1e-9);
        assert_eq!(cmd_simulate(one, 1.0, 0.0).unwrap_err().exit_code(), 2);
    }

    #[test]
    fn verify_usage_errors() {
        assert_eq!(cmd_verify(&[], 512, 1e-9, 1e-4).unwrap_err().exit_code(), 2);
        assert_eq!(
            cmd_verify(&[PExponent::ONE], 512, 1e-9, 1e-4)
                .unwrap_err()
                .exit_code(),
            2
        );
        assert_eq!(
            cmd_verify(&[PExponent::TWO], 8, 1e-9, 1e-4)
                .unwrap_err()
                .exit_code(),
            2
        );
    }
}
