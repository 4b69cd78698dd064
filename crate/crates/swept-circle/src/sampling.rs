//! Grid sampling fallback and reference detector.
//!
//! `sample_pair` evaluates the squared edge distance of two motions on a
//! uniform time grid and refines every sign change by bisection. It makes no
//! use of the closed-form machinery, which is exactly why the test suites
//! lean on it: any interval the closed forms report can be cross-examined
//! against an implementation that only ever evaluates positions.
//!
//! Sampling can miss a crossing narrower than the grid step; refinement with
//! a smaller step only ever finds more. Callers pick `dt` accordingly.

use crate::interval::TimeInterval;
use crate::motion::Motion;
use thiserror::Error;

/// What a sampling sweep over a motion pair observed.
#[derive(Clone, Debug, PartialEq)]
pub struct SamplingReport {
    /// Smallest sampled squared edge distance (negative inside a collision).
    pub min_sq_edge_dist: f64,
    /// Grid time at which the minimum was observed.
    pub argmin_time: f64,
    /// Maximal spans where the squared edge distance is negative, with
    /// endpoints bisection-refined to 1e-9 s.
    pub crossing_intervals: Vec<TimeInterval>,
    /// Total distance-function evaluations (grid plus refinement).
    pub samples_used: usize,
}

#[derive(Debug, Error, PartialEq)]
pub enum SampleError {
    #[error("sampling step must be finite and positive, got {0}")]
    NonPositiveStep(f64),
    #[error("motions share no time window")]
    DisjointWindows,
    #[error("shared time window is unbounded; sampling needs a finite range")]
    UnboundedWindow,
}

const REFINE_TOLERANCE: f64 = 1e-9;

/// Samples the squared edge distance of two motions over their shared window.
pub fn sample_pair<const D: usize>(
    m1: &Motion<D>,
    m2: &Motion<D>,
    dt: f64,
) -> Result<SamplingReport, SampleError> {
    if !(dt.is_finite() && dt > 0.0) {
        return Err(SampleError::NonPositiveStep(dt));
    }
    let t0 = m1.t_start.max(m2.t_start);
    let tmax = m1.t_end.min(m2.t_end);
    if !(t0 < tmax) {
        return Err(SampleError::DisjointWindows);
    }
    if !tmax.is_finite() {
        return Err(SampleError::UnboundedWindow);
    }

    let radius_sum = m1.radius + m2.radius;
    let threshold = radius_sum * radius_sum;
    let eval = |t: f64| -> f64 {
        let d1 = t - m1.t_start;
        let d2 = t - m2.t_start;
        let mut p1 = m1.p0 + m1.v * d1;
        if let Some(a) = m1.accel {
            p1 += a * (0.5 * d1 * d1);
        }
        let mut p2 = m2.p0 + m2.v * d2;
        if let Some(a) = m2.accel {
            p2 += a * (0.5 * d2 * d2);
        }
        (p1 - p2).norm_sq() - threshold
    };

    let span = tmax - t0;
    let steps = (span / dt).ceil().max(1.0) as usize;
    let mut samples_used = 0usize;

    let refine = |mut lo: f64, mut hi: f64, samples: &mut usize| -> f64 {
        // Invariant: eval(lo) and eval(hi) have strictly opposite signs.
        let lo_negative = eval(lo) < 0.0;
        *samples += 1;
        while hi - lo > REFINE_TOLERANCE {
            let mid = 0.5 * (lo + hi);
            *samples += 1;
            if (eval(mid) < 0.0) == lo_negative {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    };

    let mut argmin = t0;
    let mut intervals: Vec<TimeInterval> = Vec::new();
    let mut open_since: Option<f64> = None;
    let mut prev_t = t0;
    let mut prev_f = eval(t0);
    samples_used += 1;
    if prev_f < 0.0 {
        open_since = Some(t0);
    }
    let mut min_val = prev_f;

    for i in 1..=steps {
        let t = t0 + span * (i as f64) / (steps as f64);
        let f = eval(t);
        samples_used += 1;
        if f < min_val {
            min_val = f;
            argmin = t;
        }
        // A grid point can land exactly on a root; a touch (zero without a
        // sign change) is not a crossing, but zero acting as the boundary of
        // a negative run opens or closes an interval at that very sample.
        let crossing_in = prev_f > 0.0 && f < 0.0;
        let crossing_out = prev_f < 0.0 && f > 0.0;
        if crossing_in {
            open_since = Some(refine(prev_t, t, &mut samples_used));
        } else if prev_f == 0.0 && f < 0.0 {
            open_since = Some(prev_t);
        } else if crossing_out || (prev_f < 0.0 && f == 0.0) {
            let crossing = if crossing_out {
                refine(prev_t, t, &mut samples_used)
            } else {
                t
            };
            if let Some(start) = open_since.take() {
                if crossing > start {
                    intervals.push(TimeInterval::span(start, crossing));
                }
            }
        }
        prev_t = t;
        prev_f = f;
    }
    if let Some(start) = open_since {
        if tmax > start {
            intervals.push(TimeInterval::span(start, tmax));
        }
    }

    Ok(SamplingReport {
        min_sq_edge_dist: min_val,
        argmin_time: argmin,
        crossing_intervals: intervals,
        samples_used,
    })
}
