//! Exact collision detection between two constant-velocity motions.
//!
//! Two moving discs overlap exactly when the squared distance between their
//! centres drops below the square of their summed radii. For constant
//! velocities that squared edge distance is a quadratic in time, so the
//! collision set is the quadratic's negative region: a single open interval,
//! found in closed form from the coefficients.

use crate::interval::TimeInterval;
use crate::motion::{Motion, PairError};
use crate::roots::{negative_intervals, solve_quadratic};
use crate::tolerance::Tolerance;

/// Quadratic squared-edge-distance coefficients for a motion pair.
///
/// `eval(tau)` is `|c1(t) - c2(t)|^2 - (r1 + r2)^2` at `t = t0 + tau`, where
/// `t0` is the later of the two segment starts. The collision set is the
/// region where this is negative.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadCoefficients {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    /// Absolute time the local clock `tau` is measured from: the later of
    /// the two segment starts.
    pub t0: f64,
    /// End of the common window, absolute time. May be infinite.
    pub t_max: f64,
}

impl QuadCoefficients {
    /// Squared edge distance at local time `tau = t - t0`.
    pub fn eval(&self, tau: f64) -> f64 {
        (self.a * tau + self.b) * tau + self.c
    }
}

/// Computes the squared-edge-distance quadratic for two constant-velocity
/// motions.
///
/// The earlier-starting agent is advanced along its own line to the later
/// start `t0`, so both coefficients and the local clock share one origin.
/// Fails if either motion carries an acceleration term or the windows share
/// no positive-length span.
pub fn cv_coefficients<const D: usize>(
    m1: &Motion<D>,
    m2: &Motion<D>,
) -> Result<QuadCoefficients, PairError> {
    if m1.accel.is_some() || m2.accel.is_some() {
        return Err(PairError::AccelerationPresent);
    }
    let t0 = m1.t_start.max(m2.t_start);
    let t_max = m1.t_end.min(m2.t_end);
    if !(t0 < t_max) {
        return Err(PairError::DisjointWindows);
    }
    // For the later-starting agent the advance is exactly zero, so its
    // position passes through unchanged and swapping the arguments only
    // negates the difference vectors. Every coefficient below is built from
    // products of matching components, which makes the result bit-identical
    // under argument swap.
    let p1 = m1.p0 + m1.v * (t0 - m1.t_start);
    let p2 = m2.p0 + m2.v * (t0 - m2.t_start);
    let dp = p1 - p2;
    let dv = m1.v - m2.v;
    let r = m1.radius + m2.radius;
    Ok(QuadCoefficients {
        a: dv.norm_sq(),
        b: 2.0 * dv.dot(dp),
        c: dp.norm_sq() - r * r,
        t0,
        t_max,
    })
}

/// The open interval of absolute times at which two constant-velocity
/// motions overlap, or `None` if they never do.
///
/// Grazing contact, where the discs touch at exactly one instant, does not
/// count as a collision. Disjoint time windows also yield `None`: agents
/// that never coexist cannot collide.
pub fn cv_collision_interval<const D: usize>(
    m1: &Motion<D>,
    m2: &Motion<D>,
    tol: &Tolerance,
) -> Result<Option<TimeInterval>, PairError> {
    let q = match cv_coefficients(m1, m2) {
        Ok(q) => q,
        Err(PairError::DisjointWindows) => return Ok(None),
        Err(e) => return Err(e),
    };
    let horizon = q.t_max - q.t0;
    let roots =
        solve_quadratic(q.a, q.b, q.c, tol).map_err(|_| PairError::NumericalOverflow)?;
    let mut spans = negative_intervals(&roots, 0.0, horizon, |tau| q.eval(tau));
    debug_assert!(spans.len() <= 1, "a parabola has at most one negative run");
    Ok(spans.pop().map(|(lo, hi)| {
        let end = if hi == horizon { q.t_max } else { q.t0 + hi };
        TimeInterval::span(q.t0 + lo, end)
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vector::vec2;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    fn head_on(t2_start: f64, t_end: f64) -> (Motion<2>, Motion<2>) {
        let m1 = Motion::new(vec2(0.0, 0.0), vec2(1.0, 0.0), None, 0.0, t_end, 1.0).unwrap();
        let m2 = Motion::new(
            vec2(10.0, 0.0),
            vec2(-1.0, 0.0),
            None,
            t2_start,
            t_end,
            1.0,
        )
        .unwrap();
        (m1, m2)
    }

    #[test]
    fn head_on_coefficients_and_interval() {
        let (m1, m2) = head_on(0.0, 20.0);
        let q = cv_coefficients(&m1, &m2).unwrap();
        assert_eq!((q.a, q.b, q.c), (4.0, -40.0, 96.0));
        let w = cv_collision_interval(&m1, &m2, &tol()).unwrap().unwrap();
        assert!((w.start - 4.0).abs() < 1e-12);
        assert!((w.end - 6.0).abs() < 1e-12);
    }

    #[test]
    fn staggered_start_projects_the_earlier_agent() {
        let (m1, m2) = head_on(2.0, 20.0);
        let q = cv_coefficients(&m1, &m2).unwrap();
        assert_eq!((q.a, q.b, q.c), (4.0, -32.0, 60.0));
        assert_eq!(q.t0, 2.0);
        let w = cv_collision_interval(&m1, &m2, &tol()).unwrap().unwrap();
        assert!((w.start - 5.0).abs() < 1e-12);
        assert!((w.end - 7.0).abs() < 1e-12);
    }

    #[test]
    fn window_end_clips_the_interval() {
        let (m1, m2) = head_on(0.0, 5.0);
        let w = cv_collision_interval(&m1, &m2, &tol()).unwrap().unwrap();
        assert!((w.start - 4.0).abs() < 1e-12);
        assert_eq!(w.end, 5.0);
    }

    #[test]
    fn identical_motions_collide_for_the_whole_window() {
        let m = Motion::new(vec2(3.0, -1.0), vec2(0.5, 0.25), None, 1.0, 9.0, 0.75).unwrap();
        let q = cv_coefficients(&m, &m).unwrap();
        assert_eq!((q.a, q.b), (0.0, 0.0));
        assert_eq!(q.c, -(1.5f64 * 1.5));
        let w = cv_collision_interval(&m, &m, &tol()).unwrap().unwrap();
        assert_eq!((w.start, w.end), (1.0, 9.0));
    }

    #[test]
    fn always_overlapping_unbounded_window_yields_unbounded_interval() {
        let m1 = Motion::new(vec2(0.0, 0.0), vec2(1.0, 0.0), None, 0.0, f64::INFINITY, 1.0)
            .unwrap();
        let m2 = Motion::new(vec2(0.5, 0.0), vec2(1.0, 0.0), None, 0.0, f64::INFINITY, 1.0)
            .unwrap();
        let w = cv_collision_interval(&m1, &m2, &tol()).unwrap().unwrap();
        assert_eq!(w.start, 0.0);
        assert_eq!(w.end, f64::INFINITY);
    }

    #[test]
    fn grazing_touch_is_not_a_collision() {
        // Offset lanes whose closest approach equals the radius sum exactly.
        let m1 = Motion::new(vec2(0.0, 0.0), vec2(1.0, 0.0), None, 0.0, 20.0, 1.0).unwrap();
        let m2 = Motion::new(vec2(10.0, 2.0), vec2(-1.0, 0.0), None, 0.0, 20.0, 1.0).unwrap();
        assert!(cv_collision_interval(&m1, &m2, &tol()).unwrap().is_none());
    }

    #[test]
    fn disjoint_windows_yield_none_but_coefficients_error() {
        let m1 = Motion::new(vec2(0.0, 0.0), vec2(1.0, 0.0), None, 0.0, 1.0, 1.0).unwrap();
        let m2 = Motion::new(vec2(0.0, 0.0), vec2(1.0, 0.0), None, 2.0, 3.0, 1.0).unwrap();
        assert_eq!(cv_coefficients(&m1, &m2), Err(PairError::DisjointWindows));
        assert_eq!(cv_collision_interval(&m1, &m2, &tol()), Ok(None));
    }

    #[test]
    fn acceleration_is_rejected() {
        let m1 = Motion::new(
            vec2(0.0, 0.0),
            vec2(1.0, 0.0),
            Some(vec2(0.0, 1.0)),
            0.0,
            5.0,
            1.0,
        )
        .unwrap();
        let m2 = Motion::new(vec2(4.0, 0.0), vec2(0.0, 0.0), None, 0.0, 5.0, 1.0).unwrap();
        assert_eq!(
            cv_coefficients(&m1, &m2),
            Err(PairError::AccelerationPresent)
        );
        assert_eq!(
            cv_collision_interval(&m1, &m2, &tol()),
            Err(PairError::AccelerationPresent)
        );
    }

    #[test]
    fn swapping_agents_gives_bit_identical_coefficients() {
        let m1 = Motion::new(
            vec2(0.3, -2.7),
            vec2(1.9, 0.4),
            None,
            0.25,
            11.0,
            0.6,
        )
        .unwrap();
        let m2 = Motion::new(
            vec2(8.1, 3.3),
            vec2(-0.7, -1.1),
            None,
            1.75,
            9.5,
            1.4,
        )
        .unwrap();
        let q12 = cv_coefficients(&m1, &m2).unwrap();
        let q21 = cv_coefficients(&m2, &m1).unwrap();
        assert_eq!(q12, q21);
    }
}
