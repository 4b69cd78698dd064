//! Time intervals.

use std::fmt;

/// A span of time, `[start, end]`, or a single instant.
///
/// Collision intervals are open sets in this library: edges that merely touch
/// (a double root of the distance polynomial) do not count as a collision, so
/// detector functions return `None` rather than an instantaneous interval.
/// The instantaneous form exists for callers that want to represent a
/// touching time explicitly.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TimeInterval {
    pub start: f64,
    pub end: f64,
    pub instantaneous: bool,
}

impl TimeInterval {
    /// A positive-duration span. `start < end` required.
    pub fn span(start: f64, end: f64) -> Self {
        debug_assert!(start < end, "span requires start < end, got [{start}, {end}]");
        Self {
            start,
            end,
            instantaneous: false,
        }
    }

    /// A single instant.
    pub fn instant(t: f64) -> Self {
        Self {
            start: t,
            end: t,
            instantaneous: true,
        }
    }

    pub fn duration(&self) -> f64 {
        self.end - self.start
    }

    /// Membership in the open interior (instants contain nothing).
    pub fn contains(&self, t: f64) -> bool {
        !self.instantaneous && self.start < t && t < self.end
    }

    /// Intersection with `[lo, hi]`; `None` when the overlap has no interior.
    pub fn clipped(&self, lo: f64, hi: f64) -> Option<Self> {
        if self.instantaneous {
            return None;
        }
        let start = self.start.max(lo);
        let end = self.end.min(hi);
        (start < end).then(|| Self::span(start, end))
    }
}

impl fmt::Display for TimeInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.instantaneous {
            write!(f, "{{{}}}", self.start)
        } else {
            write!(f, "({}, {})", self.start, self.end)
        }
    }
}
