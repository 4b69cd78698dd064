//! Unsafe start-time intervals for constant-velocity motion pairs.
//!
//! Shifting one agent's start time changes where along its line it is at any
//! given moment, so the squared edge distance becomes a function of two
//! variables: elapsed time and the start-time offset between the agents. For
//! constant velocities that function is a conic, and for agents whose
//! velocities are linearly independent its zero set is an ellipse. The set
//! of start-time offsets that lead to a collision is the shadow the ellipse
//! casts on the offset axis, narrowed by each agent's activity window; this
//! module computes that shadow exactly and maps it back to unsafe start
//! times.
//!
//! Parallel or stationary agents have no ellipse. Those cases reduce to a
//! one-dimensional problem along the shared motion direction and are solved
//! in closed form as well.

use crate::interval::TimeInterval;
use crate::motion::{Motion, PairError};
use crate::roots::solve_quadratic;
use crate::tolerance::Tolerance;

/// Coefficients of the squared edge distance as a conic in elapsed time `t`
/// and start offset `delta`:
///
/// ```text
/// sq_edge_dist(t, delta) = a t^2 + b t delta + c delta^2 + d t + e delta + f
/// ```
///
/// `t` is measured from agent 2's start, and `delta` is how much later agent
/// 2 starts than agent 1 (`delta = t2 - t1`), so agent 1 has been moving for
/// `t + delta` when agent 2 has been moving for `t`. Both agents enter with
/// the positions at their own segment starts; no projection is applied.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConicCoefficients {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub e: f64,
    pub f: f64,
}

impl ConicCoefficients {
    /// Squared edge distance at elapsed time `t` (since agent 2's start) and
    /// start offset `delta`.
    pub fn eval(&self, t: f64, delta: f64) -> f64 {
        self.a * t * t
            + self.b * t * delta
            + self.c * delta * delta
            + self.d * t
            + self.e * delta
            + self.f
    }

    /// `4ac - b^2`; positive exactly when the zero set is an ellipse, which
    /// happens when the two velocities are linearly independent.
    pub fn ellipse_discriminant(&self) -> f64 {
        4.0 * self.a * self.c - self.b * self.b
    }

    /// Squared speed of agent 1; one of the two degeneracy witnesses.
    fn speed1_sq(&self) -> f64 {
        self.c
    }

    /// Squared speed of agent 2, recovered as `|v1 - v_rel|^2 = a - b + c`.
    fn speed2_sq(&self) -> f64 {
        (self.a - self.b + self.c).max(0.0)
    }
}

/// Which degenerate configuration prevented the ellipse construction.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DegenerateKind {
    /// Both agents move (anti)parallel, so relative position changes along a
    /// fixed line regardless of the offset.
    ParallelMotion,
    /// One agent is (nearly) stationary.
    WaitingAgent,
}

/// The offsets for which an unbounded-window collision exists.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum DelayRange {
    /// The ellipse's extent along the offset axis: offsets strictly inside
    /// collide at some time, offsets outside never do.
    Range { lo: f64, hi: f64 },
    /// The conic has no real points: no offset produces a collision. Only
    /// possible in 3D, where two lines can pass each other at a distance.
    Never,
    /// Parallel or stationary agents; the ellipse does not exist and the
    /// one-dimensional reduction applies instead.
    Degenerate(DegenerateKind),
}

/// Outcome of the segmented unsafe-interval computation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UnsafeDelayResult {
    /// Unbounded-window offset extent of the ellipse, when it exists.
    pub delay_range: Option<(f64, f64)>,
    /// Open interval of agent-1 start times that produce a collision with
    /// agent 2 as scheduled, with both activity windows honored. `None`
    /// when no start time collides.
    pub unsafe_start_interval: Option<TimeInterval>,
    /// Set when the configuration fell into a degenerate case.
    pub degenerate: Option<DegenerateKind>,
}

/// Builds the conic from two constant-velocity motions.
///
/// Start times do not enter: the conic lives in (elapsed time, offset)
/// coordinates. Fails if either motion carries an acceleration term.
pub fn conic_coefficients<const D: usize>(
    m1: &Motion<D>,
    m2: &Motion<D>,
) -> Result<ConicCoefficients, PairError> {
    if m1.accel.is_some() || m2.accel.is_some() {
        return Err(PairError::AccelerationPresent);
    }
    let dp = m1.p0 - m2.p0;
    let dv = m1.v - m2.v;
    let r = m1.radius + m2.radius;
    Ok(ConicCoefficients {
        a: dv.norm_sq(),
        b: 2.0 * m1.v.dot(dv),
        c: m1.v.norm_sq(),
        d: 2.0 * dp.dot(dv),
        e: 2.0 * dp.dot(m1.v),
        f: dp.norm_sq() - r * r,
    })
}

fn classify_parallel(speed1_sq: f64, speed2_sq: f64, tol: &Tolerance) -> DegenerateKind {
    let slow = speed1_sq.min(speed2_sq);
    let fast = speed1_sq.max(speed2_sq);
    if slow <= tol.eps_root * fast.max(1.0) {
        DegenerateKind::WaitingAgent
    } else {
        DegenerateKind::ParallelMotion
    }
}

/// The ellipse's extent along the offset axis, as `(lo, hi, discriminant)`.
/// `None` when the conic has no real points.
fn delta_extent(cc: &ConicCoefficients, k: f64) -> Option<(f64, f64)> {
    // For fixed delta, a collision time exists iff the in-t discriminant
    // (b delta + d)^2 - 4a (c delta^2 + e delta + f) is nonnegative; that
    // expression is a downward parabola in delta whose roots are the extent.
    let lin = 2.0 * cc.b * cc.d - 4.0 * cc.a * cc.e;
    let inner = lin * lin + 4.0 * k * (cc.d * cc.d - 4.0 * cc.a * cc.f);
    if inner <= 0.0 {
        return None;
    }
    let center = lin / (2.0 * k);
    let half = inner.sqrt() / (2.0 * k);
    Some((center - half, center + half))
}

/// The offsets at which a collision exists for some time, ignoring activity
/// windows, or the reason no such range exists.
pub fn delay_range(cc: &ConicCoefficients, tol: &Tolerance) -> DelayRange {
    let k = cc.ellipse_discriminant();
    let scale = (4.0 * cc.a * cc.c).abs().max(cc.b * cc.b);
    if scale == 0.0 || k <= tol.eps_root * scale {
        return DelayRange::Degenerate(classify_parallel(cc.speed1_sq(), cc.speed2_sq(), tol));
    }
    match delta_extent(cc, k) {
        Some((lo, hi)) if lo < hi => DelayRange::Range { lo, hi },
        _ => DelayRange::Never,
    }
}

/// Collision times at the two offset-extent endpoints, `(t at lo, t at hi)`.
///
/// At an extent endpoint the per-offset quadratic has a double root, so the
/// grazing time is `-(b delta + d) / (2a)`. `None` when the configuration
/// is degenerate.
pub fn collision_times_at_extrema(
    cc: &ConicCoefficients,
    range: (f64, f64),
    tol: &Tolerance,
) -> Option<(f64, f64)> {
    if !matches!(delay_range(cc, tol), DelayRange::Range { .. }) {
        return None;
    }
    let time_at = |delta: f64| -(cc.b * delta + cc.d) / (2.0 * cc.a);
    Some((time_at(range.0), time_at(range.1)))
}

/// Both offsets at which the ellipse boundary crosses elapsed time `t`, as
/// `(lower, upper)`. `None` when `t` lies outside the ellipse's time extent.
pub fn delay_branches_at_time(
    cc: &ConicCoefficients,
    t: f64,
    tol: &Tolerance,
) -> Option<(f64, f64)> {
    // Fix t and solve c delta^2 + (b t + e) delta + (a t^2 + d t + f) = 0.
    let lin = cc.b * t + cc.e;
    let cst = (cc.a * t + cc.d) * t + cc.f;
    let disc = lin * lin - 4.0 * cc.c * cst;
    let scale = (lin * lin).max((4.0 * cc.c * cst).abs());
    if disc <= tol.eps_root * scale {
        // Tangent (or outside): at the time extent's edge both branches
        // coincide; beyond it there is no solution.
        if disc < -tol.eps_root * scale {
            return None;
        }
        let both = -lin / (2.0 * cc.c);
        return Some((both, both));
    }
    let sq = disc.sqrt();
    // Split via the sign-matched root to avoid cancellation.
    let q = -0.5 * (lin + lin.signum() * sq);
    let (r1, r2) = if q == 0.0 {
        (-sq / (2.0 * cc.c), sq / (2.0 * cc.c))
    } else {
        (q / cc.c, cst / q)
    };
    Some((r1.min(r2), r1.max(r2)))
}

/// The offset at which the ellipse's lower boundary crosses elapsed time
/// `t`; `None` outside the ellipse's time extent.
pub fn delay_at_time(cc: &ConicCoefficients, t: f64, tol: &Tolerance) -> Option<f64> {
    delay_branches_at_time(cc, t, tol).map(|(lower, _)| lower)
}

/// The ellipse's extent along the elapsed-time axis, `(earliest, latest)`.
/// `None` for degenerate configurations or a conic with no real points.
pub fn collision_time_extent(cc: &ConicCoefficients, tol: &Tolerance) -> Option<(f64, f64)> {
    let k = cc.ellipse_discriminant();
    let scale = (4.0 * cc.a * cc.c).abs().max(cc.b * cc.b);
    if scale == 0.0 || k <= tol.eps_root * scale {
        return None;
    }
    // Mirror image of delta_extent with the roles of t and delta swapped.
    let lin = 2.0 * cc.b * cc.e - 4.0 * cc.c * cc.d;
    let inner = lin * lin + 4.0 * k * (cc.e * cc.e - 4.0 * cc.c * cc.f);
    if inner <= 0.0 {
        return None;
    }
    let center = lin / (2.0 * k);
    let half = inner.sqrt() / (2.0 * k);
    Some((center - half, center + half))
}

/// Earliest elapsed time at which any offset produces contact: the leftmost
/// point of the ellipse. `None` when degenerate or never colliding.
pub fn min_collision_time(cc: &ConicCoefficients, tol: &Tolerance) -> Option<f64> {
    collision_time_extent(cc, tol).map(|(earliest, _)| earliest)
}

/// Offsets produced by intersecting the ellipse with the line
/// `w = w0 + w_slope * delta` (each root is a chord endpoint).
fn chord_deltas(
    cc: &ConicCoefficients,
    w0: f64,
    w_slope: f64,
    tol: &Tolerance,
    out: &mut Vec<(f64, f64)>,
) {
    // Substitute w into the conic and collect the quadratic in delta.
    let qa = (cc.a * w_slope + cc.b) * w_slope + cc.c;
    let qb = 2.0 * cc.a * w0 * w_slope + cc.b * w0 + cc.d * w_slope + cc.e;
    let qc = (cc.a * w0 + cc.d) * w0 + cc.f;
    if let Ok(roots) = solve_quadratic(qa, qb, qc, tol) {
        for (delta, _) in roots.roots() {
            out.push((w0 + w_slope * delta, *delta));
        }
    }
}

/// Exact extent along the offset axis of the ellipse interior intersected
/// with both agents' activity constraints:
///
/// ```text
/// 0 < w < d2          (agent 2 active)
/// 0 < w + delta < d1  (agent 1 active)
/// ```
///
/// The region is convex, so its offset shadow is one interval; its endpoints
/// are attained at an ellipse tangent point, a chord endpoint on one of the
/// four boundary lines, or a boundary-line corner. Infinite durations drop
/// their constraints.
fn clipped_delta_extent(
    cc: &ConicCoefficients,
    full: (f64, f64),
    d1: f64,
    d2: f64,
    tol: &Tolerance,
) -> Option<(f64, f64)> {
    let mut candidates: Vec<(f64, f64)> = Vec::with_capacity(12);

    // Tangent points at the ellipse's own offset extrema.
    for delta in [full.0, full.1] {
        let w = -(cc.b * delta + cc.d) / (2.0 * cc.a);
        candidates.push((w, delta));
    }
    // Chords on the window boundary lines.
    chord_deltas(cc, 0.0, 0.0, tol, &mut candidates);
    if d2.is_finite() {
        chord_deltas(cc, d2, 0.0, tol, &mut candidates);
    }
    chord_deltas(cc, 0.0, -1.0, tol, &mut candidates);
    if d1.is_finite() {
        chord_deltas(cc, d1, -1.0, tol, &mut candidates);
    }
    let feasible = |w: f64, delta: f64| -> bool {
        let slack = tol.eps_geom * (1.0 + w.abs() + delta.abs());
        w >= -slack
            && w + delta >= -slack
            && w <= d2 + slack
            && w + delta <= d1 + slack
    };
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    let mut keep = |delta: f64| {
        lo = lo.min(delta);
        hi = hi.max(delta);
    };
    for (w, delta) in candidates {
        if feasible(w, delta) {
            keep(delta);
        }
    }
    // Corners of the activity window shave the true extremum only when they
    // sit strictly inside the ellipse, so no slack is applied here.
    let mut corner = |w: f64, delta: f64| {
        if cc.eval(w, delta) < 0.0 {
            keep(delta);
        }
    };
    corner(0.0, 0.0);
    if d1.is_finite() {
        corner(0.0, d1);
    }
    if d2.is_finite() {
        corner(d2, -d2);
        if d1.is_finite() {
            corner(d2, d1 - d2);
        }
    }
    let width_eps = tol.eps_root * (1.0 + lo.abs() + hi.abs());
    (hi - lo > width_eps).then_some((lo, hi))
}

/// One-dimensional reduction for parallel or stationary agents.
///
/// Relative position moves along a fixed line; project onto the shared
/// motion direction and require the along-line coordinate to pass within
/// the contact half-width while both agents are active.
fn strip_unsafe_delays<const D: usize>(
    m1: &Motion<D>,
    m2: &Motion<D>,
    tol: &Tolerance,
) -> Option<(f64, f64)> {
    let r = m1.radius + m2.radius;
    let dp = m1.p0 - m2.p0;
    let d1 = m1.duration();
    let d2 = m2.duration();
    // Offsets at which the activity windows overlap at all.
    let (mut lo, mut hi) = (-d2, d1);
    let s1 = m1.v.norm_sq();
    let s2 = m2.v.norm_sq();
    let r_sq = r * r;
    let faster = if s1 >= s2 { m1.v } else { m2.v };
    let u = match faster.normalized() {
        Some(u) => u,
        // Sub-epsilon drift is indistinguishable from two parked agents:
        // they collide for every coexistence offset or for none.
        None => return (dp.norm_sq() < r_sq).then_some((lo, hi)),
    };
    let p_par = dp.dot(u);
    let p_perp_sq = (dp.norm_sq() - p_par * p_par).max(0.0);
    if p_perp_sq >= r_sq {
        return None;
    }
    let h = (r_sq - p_perp_sq).sqrt();
    let alpha = m1.v.dot(u);
    let beta = m2.v.dot(u);
    // Along-line separation: g(w, delta) = p_par + (alpha - beta) w +
    // alpha delta; collision iff |g| < h for some feasible w.
    let slope = alpha - beta;
    let eps_v = tol.eps_root * (alpha.abs() + beta.abs() + 1.0);
    if slope.abs() <= eps_v {
        // Separation is frozen while both agents move; only the offset
        // shifts it.
        if alpha.abs() <= eps_v {
            return (p_par.abs() < h).then_some((lo, hi));
        }
        let da = (-h - p_par) / alpha;
        let db = (h - p_par) / alpha;
        lo = lo.max(da.min(db));
        hi = hi.min(da.max(db));
        return (lo < hi).then_some((lo, hi));
    }
    // w values where g = +-h, each affine in delta with shared slope.
    let inv = 1.0 / slope;
    let (q_sup, q_inf) = if slope > 0.0 {
        ((h - p_par) * inv, (-h - p_par) * inv)
    } else {
        ((-h - p_par) * inv, (h - p_par) * inv)
    };
    let p_w = -alpha * inv;
    let eps_p = tol.eps_root * (1.0 + p_w.abs());
    // Each condition is linear in delta: p delta + q > 0.
    let mut constrain = |p: f64, q: f64| -> bool {
        if p.abs() <= eps_p {
            return q > 0.0;
        }
        if p > 0.0 {
            lo = lo.max(-q / p);
        } else {
            hi = hi.min(-q / p);
        }
        true
    };
    // The contact band (w_inf, w_sup) must overlap the feasible w window
    // (max(0, -delta), min(d2, d1 - delta)); four open comparisons.
    let mut ok = constrain(p_w, q_sup) && constrain(p_w + 1.0, q_sup);
    if ok && d2.is_finite() {
        ok = constrain(-p_w, d2 - q_inf);
    }
    if ok && d1.is_finite() {
        ok = constrain(-(p_w + 1.0), d1 - q_inf);
    }
    (ok && lo < hi).then_some((lo, hi))
}

/// Computes the open interval of agent-1 start times that lead to a
/// collision with agent 2 as scheduled, honoring both activity windows.
///
/// Start times strictly inside the returned interval collide; start times
/// outside it (including at the endpoints, which are grazing contacts) do
/// not. Degenerate parallel or waiting configurations are solved by the
/// one-dimensional reduction and flagged in the result.
pub fn unsafe_interval_segmented<const D: usize>(
    m1: &Motion<D>,
    m2: &Motion<D>,
    tol: &Tolerance,
) -> Result<UnsafeDelayResult, PairError> {
    let cc = conic_coefficients(m1, m2)?;
    let t2 = m2.t_start;
    // Positive offset = agent 2 starts later; a start time s for agent 1
    // realizes offset t2 - s, so the offset interval maps to start times
    // reversed.
    let to_start_interval = |deltas: Option<(f64, f64)>| {
        deltas.map(|(lo, hi)| TimeInterval::span(t2 - hi, t2 - lo))
    };
    match delay_range(&cc, tol) {
        DelayRange::Degenerate(kind) => Ok(UnsafeDelayResult {
            delay_range: None,
            unsafe_start_interval: to_start_interval(strip_unsafe_delays(m1, m2, tol)),
            degenerate: Some(kind),
        }),
        DelayRange::Never => Ok(UnsafeDelayResult {
            delay_range: None,
            unsafe_start_interval: None,
            degenerate: None,
        }),
        DelayRange::Range { lo, hi } => {
            let clipped =
                clipped_delta_extent(&cc, (lo, hi), m1.duration(), m2.duration(), tol);
            Ok(UnsafeDelayResult {
                delay_range: Some((lo, hi)),
                unsafe_start_interval: to_start_interval(clipped),
                degenerate: None,
            })
        }
    }
}
