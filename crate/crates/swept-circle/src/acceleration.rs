//! Exact collision detection between motions with constant acceleration.
//!
//! With acceleration the squared edge distance between two agents becomes a
//! quartic in time. Its real roots, paired in sorted order, bound at most
//! two disjoint overlap windows; accelerating agents can close on each other,
//! separate, and close again, which constant-velocity motion cannot do.

use crate::interval::TimeInterval;
use crate::motion::{Motion, PairError};
use crate::roots::{negative_intervals, solve_quartic};
use crate::tolerance::Tolerance;
use crate::vector::VecD;

/// Quartic squared-edge-distance coefficients for a motion pair.
///
/// `eval(tau)` is `|c1(t) - c2(t)|^2 - (r1 + r2)^2` at `t = t0 + tau`, where
/// `t0` is the later of the two segment starts. Absent accelerations count
/// as zero, so for two constant-velocity motions `a` and `b` vanish and
/// `(c, d, e)` coincide with the quadratic coefficients bit for bit.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuarticCoefficients {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub e: f64,
    /// Absolute time the local clock `tau` is measured from: the later of
    /// the two segment starts.
    pub t0: f64,
    /// End of the common window, absolute time. May be infinite.
    pub t_max: f64,
}

impl QuarticCoefficients {
    /// Squared edge distance at local time `tau = t - t0`.
    pub fn eval(&self, tau: f64) -> f64 {
        ((((self.a * tau + self.b) * tau + self.c) * tau + self.d) * tau) + self.e
    }
}

/// Position and velocity of a motion advanced along its own trajectory to
/// absolute time `t0 >= t_start`. For `t0 == t_start` both pass through
/// bit-identically.
fn projected_state<const D: usize>(m: &Motion<D>, t0: f64) -> (VecD<D>, VecD<D>) {
    let ds = t0 - m.t_start;
    let a = m.accel.unwrap_or(VecD::ZERO);
    let p = m.p0 + m.v * ds + a * (0.5 * ds * ds);
    let v = m.v + a * ds;
    (p, v)
}

/// Computes the squared-edge-distance quartic for two motions with optional
/// constant acceleration.
///
/// Both agents are advanced along their own trajectories to the later start
/// `t0`; under acceleration this adjusts the velocity as well as the
/// position. Fails only when the windows share no positive-length span.
pub fn accel_coefficients<const D: usize>(
    m1: &Motion<D>,
    m2: &Motion<D>,
) -> Result<QuarticCoefficients, PairError> {
    let t0 = m1.t_start.max(m2.t_start);
    let t_max = m1.t_end.min(m2.t_end);
    if !(t0 < t_max) {
        return Err(PairError::DisjointWindows);
    }
    let (p1, v1) = projected_state(m1, t0);
    let (p2, v2) = projected_state(m2, t0);
    let dp = p1 - p2;
    let dv = v1 - v2;
    let da = m1.accel.unwrap_or(VecD::ZERO) - m2.accel.unwrap_or(VecD::ZERO);
    let r = m1.radius + m2.radius;
    Ok(QuarticCoefficients {
        a: 0.25 * da.norm_sq(),
        b: da.dot(dv),
        c: da.dot(dp) + dv.norm_sq(),
        d: 2.0 * dv.dot(dp),
        e: dp.norm_sq() - r * r,
        t0,
        t_max,
    })
}

/// The open intervals of absolute times at which two motions with optional
/// constant acceleration overlap. At most two.
///
/// Sorted real roots of the quartic are paired off into candidate windows
/// and each window is kept only if the squared edge distance is actually
/// negative at its midpoint; near-degenerate root patterns cannot produce a
/// spurious interval that way. Grazing contact does not count, an overlap
/// already in progress at `t0` starts there, and disjoint time windows yield
/// no intervals.
pub fn accel_collision_intervals<const D: usize>(
    m1: &Motion<D>,
    m2: &Motion<D>,
    tol: &Tolerance,
) -> Vec<TimeInterval> {
    let q = match accel_coefficients(m1, m2) {
        Ok(q) => q,
        Err(_) => return Vec::new(),
    };
    let horizon = q.t_max - q.t0;
    let roots = match solve_quartic(q.a, q.b, q.c, q.d, q.e, tol) {
        Ok(r) => r,
        // Only reachable if squaring astronomical positions or velocities
        // overflowed f64; report no windows rather than panic.
        Err(_) => return Vec::new(),
    };
    let spans = negative_intervals(&roots, 0.0, horizon, |tau| q.eval(tau));
    debug_assert!(
        spans.len() <= 2,
        "an upward quartic has at most two negative runs"
    );
    spans
        .into_iter()
        .map(|(lo, hi)| {
            let end = if hi == horizon { q.t_max } else { q.t0 + hi };
            TimeInterval::span(q.t0 + lo, end)
        })
        .collect()
}
