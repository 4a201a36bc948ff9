//! One-dimensional numerical kernels: adaptive quadrature, bracketed root
//! finding and grid-refined scalar optimization.
//!
//! Everything here is a pure function of its inputs.

mod optimize;
mod quadrature;
mod roots;

pub use optimize::{golden_section_max, maximize_1d, maximize_on_grid, minimize_on_grid, Extremum};
pub use quadrature::{adaptive_panels, gauss_kronrod21, integrate_adaptive, Panel};
pub use roots::{find_root_bracketed, BracketedRoot};

use thiserror::Error;

/// Stopping rule shared by the kernels in this module.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// Maximum subdivision depth for quadrature, iteration cap for the
    /// iterative solvers.
    pub max_iter: usize,
}

impl Tolerance {
    pub fn new(abs_tol: f64, rel_tol: f64, max_iter: usize) -> Result<Self, NumericsError> {
        if !(abs_tol > 0.0) || !(rel_tol >= 0.0) || max_iter == 0 || !abs_tol.is_finite() {
            return Err(NumericsError::InvalidTolerance {
                abs_tol,
                rel_tol,
                max_iter,
            });
        }
        Ok(Self {
            abs_tol,
            rel_tol,
            max_iter,
        })
    }

    pub fn with_abs(abs_tol: f64) -> Self {
        Self {
            abs_tol,
            ..Self::default()
        }
    }

    /// `max(abs_tol, rel_tol * |value|)`
    pub fn bound_for(&self, value: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.abs())
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            abs_tol: 1e-10,
            rel_tol: 1e-10,
            max_iter: 60,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NumericsError {
    #[error("invalid tolerance (abs_tol={abs_tol}, rel_tol={rel_tol}, max_iter={max_iter})")]
    InvalidTolerance {
        abs_tol: f64,
        rel_tol: f64,
        max_iter: usize,
    },
    #[error("invalid interval [{lo}, {hi}]")]
    InvalidInterval { lo: f64, hi: f64 },
    #[error("no sign change on [{lo}, {hi}]: f(lo)={f_lo}, f(hi)={f_hi}")]
    NotBracketed {
        lo: f64,
        hi: f64,
        f_lo: f64,
        f_hi: f64,
    },
    #[error("not converged: best estimate {estimate} with error bound {error_bound}")]
    NotConverged { estimate: f64, error_bound: f64 },
    #[error("function returned a non-finite value at x={x}")]
    NonFinite { x: f64 },
}
