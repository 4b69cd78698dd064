//! Numerical tolerance policy.
//!
//! Every operation that makes a floating-point judgement call takes an
//! explicit [`Tolerance`] so callers can tighten or loosen thresholds per
//! call site. There is no global state.

use thiserror::Error;

/// Thresholds used across the collision algebra.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerance {
    /// Root comparison and multiplicity-merge threshold, seconds.
    pub eps_root: f64,
    /// Geometric coincidence threshold, metres.
    pub eps_geom: f64,
    /// Margin used when placing velocities just outside a velocity obstacle
    /// or start times just outside an unsafe interval. Dimensionless scale.
    pub eps_clearance: f64,
}

#[derive(Debug, Error, PartialEq)]
pub enum ToleranceError {
    #[error("tolerance field {name} must be finite and positive, got {value}")]
    NotPositive { name: &'static str, value: f64 },
}

impl Tolerance {
    pub fn new(eps_root: f64, eps_geom: f64, eps_clearance: f64) -> Result<Self, ToleranceError> {
        for (name, value) in [
            ("eps_root", eps_root),
            ("eps_geom", eps_geom),
            ("eps_clearance", eps_clearance),
        ] {
            if !(value.is_finite() && value > 0.0) {
                return Err(ToleranceError::NotPositive { name, value });
            }
        }
        Ok(Self {
            eps_root,
            eps_geom,
            eps_clearance,
        })
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            eps_root: 1e-9,
            eps_geom: 1e-9,
            eps_clearance: 1e-6,
        }
    }
}
