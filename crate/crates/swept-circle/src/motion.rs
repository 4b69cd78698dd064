//! Motion segments and multi-segment paths.

use crate::tolerance::Tolerance;
use crate::vector::VecD;
use thiserror::Error;

/// One motion segment of a circular agent.
///
/// The agent is a disc (2D) or sphere (3D) of fixed `radius` whose centre
/// moves from `p0` with constant velocity `v`, plus constant acceleration
/// when `accel` is present, over the absolute time window
/// `[t_start, t_end]`. `t_end` may be `f64::INFINITY` for open-ended
/// queries; scenario files always carry finite windows.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Motion<const D: usize> {
    pub p0: VecD<D>,
    pub v: VecD<D>,
    pub accel: Option<VecD<D>>,
    pub t_start: f64,
    pub t_end: f64,
    pub radius: f64,
}

#[derive(Debug, Error, PartialEq)]
pub enum MotionError {
    #[error("radius must be finite and positive, got {0}")]
    InvalidRadius(f64),
    #[error("time window requires t_start < t_end, got [{t_start}, {t_end}]")]
    InvalidWindow { t_start: f64, t_end: f64 },
    #[error("motion has a non-finite component")]
    NonFinite,
    #[error("time {t} outside motion window [{t_start}, {t_end}]")]
    TimeOutOfRange { t: f64, t_start: f64, t_end: f64 },
}

/// Why a pair of motion segments cannot be analysed together.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum PairError {
    /// The analysis assumes constant velocity but a segment carries an
    /// acceleration term.
    #[error("motion segment has an acceleration term; use the accelerating-motion analysis")]
    AccelerationPresent,
    /// The segments' time windows share no positive-length span, so there is
    /// no common frame to compare the agents in.
    #[error("motion windows do not overlap")]
    DisjointWindows,
    /// Positions or velocities are so large that the squared-distance
    /// polynomial overflowed. Finite inputs of physical magnitude never hit
    /// this.
    #[error("squared-distance coefficients overflowed f64")]
    NumericalOverflow,
}

impl<const D: usize> Motion<D> {
    pub fn new(
        p0: VecD<D>,
        v: VecD<D>,
        accel: Option<VecD<D>>,
        t_start: f64,
        t_end: f64,
        radius: f64,
    ) -> Result<Self, MotionError> {
        if !(radius.is_finite() && radius > 0.0) {
            return Err(MotionError::InvalidRadius(radius));
        }
        if !p0.is_finite() || !v.is_finite() || !accel.is_none_or(VecD::is_finite) {
            return Err(MotionError::NonFinite);
        }
        if !t_start.is_finite() || t_end.is_nan() || !(t_start < t_end) {
            return Err(MotionError::InvalidWindow { t_start, t_end });
        }
        Ok(Self {
            p0,
            v,
            accel,
            t_start,
            t_end,
            radius,
        })
    }

    /// Centre position at absolute time `t`; `t` must lie in the window.
    pub fn position_at(&self, t: f64) -> Result<VecD<D>, MotionError> {
        if !(t >= self.t_start && t <= self.t_end) {
            return Err(MotionError::TimeOutOfRange {
                t,
                t_start: self.t_start,
                t_end: self.t_end,
            });
        }
        let dt = t - self.t_start;
        let mut p = self.p0 + self.v * dt;
        if let Some(a) = self.accel {
            p += a * (0.5 * dt * dt);
        }
        Ok(p)
    }

    /// Velocity at absolute time `t`; `t` must lie in the window.
    pub fn velocity_at(&self, t: f64) -> Result<VecD<D>, MotionError> {
        if !(t >= self.t_start && t <= self.t_end) {
            return Err(MotionError::TimeOutOfRange {
                t,
                t_start: self.t_start,
                t_end: self.t_end,
            });
        }
        let dt = t - self.t_start;
        Ok(match self.accel {
            Some(a) => self.v + a * dt,
            None => self.v,
        })
    }

    pub fn duration(&self) -> f64 {
        self.t_end - self.t_start
    }

    /// The same trajectory shape, shifted so it starts at `t_start`.
    pub fn started_at(&self, t_start: f64) -> Self {
        let mut m = *self;
        m.t_end = if self.t_end.is_finite() {
            t_start + self.duration()
        } else {
            f64::INFINITY
        };
        m.t_start = t_start;
        m
    }
}

/// A sequence of motion segments executed by one agent.
#[derive(Clone, Debug, PartialEq)]
pub struct Path<const D: usize> {
    pub id: String,
    pub segments: Vec<Motion<D>>,
}

/// A continuity defect between consecutive path segments.
#[derive(Debug, Clone, PartialEq)]
pub enum PathViolation {
    /// Segment `index + 1` does not start where segment `index` ends.
    PositionalGap { index: usize, gap: f64 },
    /// Segment `index + 1` does not start when segment `index` ends.
    TemporalGap { index: usize, gap: f64 },
}

impl std::fmt::Display for PathViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PathViolation::PositionalGap { index, gap } => write!(
                f,
                "segments {index} and {} are positionally discontinuous (gap {gap})",
                index + 1
            ),
            PathViolation::TemporalGap { index, gap } => write!(
                f,
                "segments {index} and {} are temporally discontinuous (gap {gap})",
                index + 1
            ),
        }
    }
}

/// Checks temporal contiguity and positional continuity of a path.
///
/// Consecutive segments must satisfy `t_end[k] == t_start[k+1]` (within
/// `eps_geom` seconds) and the end position of segment `k` must match the
/// start position of segment `k+1` within `eps_geom`.
pub fn validate_path<const D: usize>(path: &Path<D>, tol: &Tolerance) -> Vec<PathViolation> {
    let mut violations = Vec::new();
    for (i, pair) in path.segments.windows(2).enumerate() {
        let (a, b) = (&pair[0], &pair[1]);
        let time_gap = b.t_start - a.t_end;
        if time_gap.abs() > tol.eps_geom || !time_gap.is_finite() {
            violations.push(PathViolation::TemporalGap {
                index: i,
                gap: time_gap,
            });
        }
        if a.t_end.is_finite() {
            // Position comparison only makes sense at a finite hand-off time.
            if let Ok(end_pos) = a.position_at(a.t_end) {
                let gap = (b.p0 - end_pos).norm();
                if gap > tol.eps_geom {
                    violations.push(PathViolation::PositionalGap { index: i, gap });
                }
            }
        }
    }
    violations
}
