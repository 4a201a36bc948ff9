use super::{NumericsError, Tolerance};

/// Location and value of a sampled extremum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Extremum {
    pub x: f64,
    pub value: f64,
}

const INV_PHI: f64 = 0.618_033_988_749_894_9;
pub(crate) const DEFAULT_GRID: usize = 4096;
const MIN_GRID: usize = 1024;

/// Golden-section search for a maximum of a unimodal `f` on `[lo, hi]`.
///
/// Returns the best point evaluated (including both ends).
pub fn golden_section_max<F, E>(mut f: F, lo: f64, hi: f64, tol: Tolerance) -> Result<Extremum, E>
where
    F: FnMut(f64) -> Result<f64, E>,
{
    let (mut a, mut b) = (lo, hi);
    let mut best = Extremum { x: a, value: f(a)? };
    let fb = f(b)?;
    if fb > best.value {
        best = Extremum { x: b, value: fb };
    }
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = f(x1)?;
    let mut f2 = f(x2)?;
    for _ in 0..tol.max_iter.max(80) {
        if b - a <= tol.abs_tol.max(4.0 * f64::EPSILON * a.abs().max(b.abs())) {
            break;
        }
        if f1 >= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = f(x1)?;
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = f(x2)?;
        }
    }
    for (x, v) in [(x1, f1), (x2, f2)] {
        if v > best.value || (v == best.value && x < best.x) {
            best = Extremum { x, value: v };
        }
    }
    Ok(best)
}

/// Dense uniform grid of `grid` points, then golden-section refinement of
/// the cells adjacent to the best grid point.
///
/// Global optimality holds only up to grid resolution. On ties the smallest
/// abscissa wins.
pub fn maximize_on_grid<F, E>(
    mut f: F,
    lo: f64,
    hi: f64,
    grid: usize,
    tol: Tolerance,
) -> Result<Extremum, E>
where
    F: FnMut(f64) -> Result<f64, E>,
    E: From<NumericsError>,
{
    if !(lo <= hi) || !lo.is_finite() || !hi.is_finite() || grid < 2 {
        return Err(NumericsError::InvalidInterval { lo, hi }.into());
    }
    if lo == hi {
        return Ok(Extremum {
            x: lo,
            value: f(lo)?,
        });
    }
    let step = (hi - lo) / (grid - 1) as f64;
    let node = |i: usize| {
        if i == grid - 1 {
            hi
        } else {
            lo + step * i as f64
        }
    };
    let mut best_i = 0;
    let mut best_v = f64::NEG_INFINITY;
    for i in 0..grid {
        let v = f(node(i))?;
        if v.is_nan() {
            return Err(NumericsError::NonFinite { x: node(i) }.into());
        }
        if v > best_v {
            best_v = v;
            best_i = i;
        }
    }
    let grid_best = Extremum {
        x: node(best_i),
        value: best_v,
    };
    let a = node(best_i.saturating_sub(1));
    let b = node((best_i + 1).min(grid - 1));
    let refined = golden_section_max(&mut f, a, b, tol)?;
    Ok(if refined.value > grid_best.value {
        refined
    } else {
        grid_best
    })
}

/// Minimization counterpart of [`maximize_on_grid`].
pub fn minimize_on_grid<F, E>(
    mut f: F,
    lo: f64,
    hi: f64,
    grid: usize,
    tol: Tolerance,
) -> Result<Extremum, E>
where
    F: FnMut(f64) -> Result<f64, E>,
    E: From<NumericsError>,
{
    let e = maximize_on_grid(|x| f(x).map(|v| -v), lo, hi, grid, tol)?;
    Ok(Extremum {
        x: e.x,
        value: -e.value,
    })
}

/// Maximize `f` on `[lo, hi]` with the default 4096-point grid.
pub fn maximize_1d<F>(f: F, lo: f64, hi: f64, tol: Tolerance) -> Result<Extremum, NumericsError>
where
    F: Fn(f64) -> f64,
{
    maximize_on_grid(|x| Ok(f(x)), lo, hi, DEFAULT_GRID.max(MIN_GRID), tol)
}
