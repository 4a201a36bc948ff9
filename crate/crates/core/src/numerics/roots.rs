use super::{NumericsError, Tolerance};

/// Root located by [`find_root_bracketed`], together with the final bracket.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BracketedRoot {
    pub lo: f64,
    pub hi: f64,
    pub root: f64,
    pub residual: f64,
}

/// Brent's method (inverse quadratic interpolation / secant with bisection
/// fallback) on a sign-changing bracket.
///
/// Stops once `|f(x)| <= abs_tol` or the bracket is narrower than `abs_tol`.
pub fn find_root_bracketed<F, E>(
    mut f: F,
    lo: f64,
    hi: f64,
    tol: Tolerance,
) -> Result<BracketedRoot, E>
where
    F: FnMut(f64) -> Result<f64, E>,
    E: From<NumericsError>,
{
    if !(lo <= hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(NumericsError::InvalidInterval { lo, hi }.into());
    }
    let (mut a, mut b) = (lo, hi);
    let mut fa = f(a)?;
    let mut fb = f(b)?;
    if !fa.is_finite() {
        return Err(NumericsError::NonFinite { x: a }.into());
    }
    if !fb.is_finite() {
        return Err(NumericsError::NonFinite { x: b }.into());
    }
    if fa.abs() <= tol.abs_tol && fa.abs() <= fb.abs() {
        return Ok(BracketedRoot {
            lo,
            hi,
            root: a,
            residual: fa,
        });
    }
    if fb.abs() <= tol.abs_tol {
        return Ok(BracketedRoot {
            lo,
            hi,
            root: b,
            residual: fb,
        });
    }
    if fa.signum() == fb.signum() {
        return Err(NumericsError::NotBracketed {
            lo,
            hi,
            f_lo: fa,
            f_hi: fb,
        }
        .into());
    }

    let mut c = b;
    let mut fc = fb;
    let mut d = b - a;
    let mut e = d;
    // Brent needs more steps than the quadrature depth limit in bad cases.
    let max_iter = tol.max_iter.max(100);
    for _ in 0..max_iter {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol1 = 2.0 * f64::EPSILON * b.abs() + 0.5 * tol.abs_tol;
        let xm = 0.5 * (c - b);
        if fb.abs() <= tol.abs_tol || xm.abs() <= tol1 || fb == 0.0 {
            let (lo_b, hi_b) = if b < c { (b, c) } else { (c, b) };
            return Ok(BracketedRoot {
                lo: lo_b,
                hi: hi_b,
                root: b,
                residual: fb,
            });
        }
        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                let qa = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * xm * qa * (qa - r) - (b - a) * (r - 1.0));
                q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            }
            p = p.abs();
            let min1 = 3.0 * xm * q - (tol1 * q).abs();
            let min2 = (e * q).abs();
            if 2.0 * p < min1.min(min2) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol1 { d } else { tol1.copysign(xm) };
        fb = f(b)?;
        if !fb.is_finite() {
            return Err(NumericsError::NonFinite { x: b }.into());
        }
    }
    Err(NumericsError::NotConverged {
        estimate: b,
        error_bound: (c - b).abs(),
    }
    .into())
}
