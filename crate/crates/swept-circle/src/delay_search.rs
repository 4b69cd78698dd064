//! Iterative unsafe start-time intervals for accelerating agents.
//!
//! Under acceleration the closed-form offset ellipse does not exist, but the
//! collision predicate itself is cheap: shift agent 1's start and ask the
//! quartic detector whether any overlap window remains. The unsafe start
//! set is located by probing for a colliding seed and bisecting outward on
//! both sides until each bracket is narrower than the configured accuracy.
//! Constant-velocity inputs are delegated to the exact closed form.

use crate::acceleration::accel_collision_intervals;
use crate::delay::unsafe_interval_segmented;
use crate::interval::TimeInterval;
use crate::motion::Motion;
use crate::tolerance::Tolerance;

/// Number of uniformly spaced probes used to find a colliding seed when the
/// currently scheduled start is safe. Unsafe sets narrower than the probe
/// spacing can be missed; see `unsafe_interval_accel`.
const SEED_GRID: usize = 64;

/// Termination settings for the start-time bisection.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SearchConfig {
    /// Bisection stops once a bracket is at most this wide, in seconds.
    pub accuracy: f64,
    /// Iteration cap per bracket before reporting a convergence failure.
    pub max_iterations: u32,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            accuracy: 1e-6,
            max_iterations: 128,
        }
    }
}

/// Why the iterative search could not produce an interval.
#[derive(Debug, Clone, Copy, PartialEq, thiserror::Error)]
pub enum SearchError {
    /// A bracket failed to shrink to the requested accuracy within the
    /// iteration cap; carries the bracket at the point of failure.
    #[error(
        "bisection stopped at bracket ({safe}, {colliding}) wider than {required} after {iterations} iterations"
    )]
    ConvergenceFailure {
        safe: f64,
        colliding: f64,
        required: f64,
        iterations: u32,
    },
    /// The feasible start range is unbounded (an infinite activity window),
    /// so grid seeding cannot cover it. Only finite windows are searchable;
    /// constant-velocity pairs with infinite windows have the closed form.
    #[error("iterative unsafe-interval search requires finite activity windows")]
    UnboundedSearchRange,
}

/// Shrinks the gap between a safe and a colliding start time until it is at
/// most `cfg.accuracy` wide, returning the colliding end.
fn bisect_boundary(
    mut safe: f64,
    mut colliding: f64,
    is_colliding: &impl Fn(f64) -> bool,
    cfg: &SearchConfig,
) -> Result<f64, SearchError> {
    let mut iterations = 0u32;
    while (safe - colliding).abs() > cfg.accuracy {
        if iterations >= cfg.max_iterations {
            return Err(SearchError::ConvergenceFailure {
                safe,
                colliding,
                required: cfg.accuracy,
                iterations,
            });
        }
        iterations += 1;
        let mid = 0.5 * (safe + colliding);
        if is_colliding(mid) {
            colliding = mid;
        } else {
            safe = mid;
        }
    }
    Ok(colliding)
}

/// Computes the contiguous interval of agent-1 start times that produce a
/// collision with agent 2 as scheduled, for motions that may accelerate.
///
/// Pairs without effective acceleration — the term absent or exactly zero —
/// take the exact closed form: near the tangency boundary the quartic
/// predicate cannot resolve vanishingly thin overlap windows, so bisecting
/// against it lands a few microseconds inside the true interval, while the
/// closed form is exact. Otherwise the feasible start range (starts whose
/// window overlaps agent 2's) is probed: first at the currently scheduled
/// start, then on a uniform grid of [`SEED_GRID`] candidates. With no
/// colliding probe the result is `None`; unsafe sets narrower than the probe
/// spacing can be missed, and when several disjoint unsafe sets exist the
/// one containing the first colliding probe is returned.
pub fn unsafe_interval_accel<const D: usize>(
    m1: &Motion<D>,
    m2: &Motion<D>,
    cfg: &SearchConfig,
    tol: &Tolerance,
) -> Result<Option<TimeInterval>, SearchError> {
    let coasting = |m: &Motion<D>| m.accel.is_none_or(|a| a.norm_sq() == 0.0);
    if coasting(m1) && coasting(m2) {
        let strip = |m: &Motion<D>| Motion { accel: None, ..*m };
        let result = unsafe_interval_segmented(&strip(m1), &strip(m2), tol)
            .expect("acceleration was checked absent or zero above");
        return Ok(result.unsafe_start_interval);
    }
    // Starts outside (t2 - d1, t2_end) give windows that never coexist.
    let lo_bound = m2.t_start - m1.duration();
    let hi_bound = m2.t_end;
    if !lo_bound.is_finite() || !hi_bound.is_finite() {
        return Err(SearchError::UnboundedSearchRange);
    }
    let is_colliding =
        |s: f64| !accel_collision_intervals(&m1.started_at(s), m2, tol).is_empty();
    let scheduled = m1.t_start;
    let seed = if scheduled > lo_bound && scheduled < hi_bound && is_colliding(scheduled) {
        Some(scheduled)
    } else {
        (0..SEED_GRID)
            .map(|i| {
                lo_bound + (hi_bound - lo_bound) * ((i as f64 + 0.5) / SEED_GRID as f64)
            })
            .find(|&s| is_colliding(s))
    };
    let Some(seed) = seed else {
        return Ok(None);
    };
    let lower = bisect_boundary(lo_bound, seed, &is_colliding, cfg)?;
    let upper = bisect_boundary(hi_bound, seed, &is_colliding, cfg)?;
    if lower < upper {
        Ok(Some(TimeInterval::span(lower, upper)))
    } else {
        // The whole unsafe set is narrower than the accuracy target.
        Ok(Some(TimeInterval::instant(seed)))
    }
}
