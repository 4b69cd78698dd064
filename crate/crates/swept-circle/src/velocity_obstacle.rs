//! Velocity obstacles and the minimum-velocity-change avoidance procedure.
//!
//! A velocity obstacle is the cone of agent-1 velocities that lead to a
//! collision with agent 2 at some time in the unbounded future, assuming
//! agent 2 keeps its current velocity. The construction is planar: agent 2's
//! disc is inflated by agent 1's radius (the Minkowski sum of the two
//! shapes), the two tangent directions from agent 1's centre to the inflated
//! disc bound the cone, and the cone is translated so its apex sits at
//! agent 2's velocity.
//!
//! [`min_velocity_change`] combines the cone with the closed-form collision
//! interval and the unsafe start-interval analysis to pick the cheapest
//! single-agent action that resolves a predicted collision: rescale one
//! agent's speed along its fixed travel direction, or postpone agent 1's
//! start. Candidate velocities are restricted to speed rescaling because the
//! path shape is assumed fixed by a planner; only the traversal speed is
//! negotiable.

use thiserror::Error;

use crate::constant_velocity::cv_collision_interval;
use crate::delay::unsafe_interval_segmented;
use crate::motion::{Motion, PairError};
use crate::tolerance::Tolerance;
use crate::vector::{Vec2, VecD};

/// Cone of unsafe velocities for one agent, in velocity space.
///
/// The cone is the set `apex + s·left_ray + t·right_ray` for `s, t ≥ 0`.
/// Rays are unit length; `left_ray` is counterclockwise of the centre
/// direction and `right_ray` clockwise, so the interior lies between them.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VelocityObstacle {
    /// Cone apex: the other agent's velocity.
    pub apex: Vec2,
    /// Unit direction of the counterclockwise cone edge.
    pub left_ray: Vec2,
    /// Unit direction of the clockwise cone edge.
    pub right_ray: Vec2,
}

/// Result of constructing a velocity obstacle.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum VoRegion {
    /// Proper tangent cone; membership is decided by [`vo_contains`].
    Cone(VelocityObstacle),
    /// The agents already overlap, so every velocity is unsafe.
    Total,
}

/// Why a velocity-obstacle operation could not run.
#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum VoError {
    /// Tangent directions are undefined when the agents' centres coincide.
    #[error("velocity obstacle is undefined for coincident agent positions")]
    CoincidentPositions,
    /// An underlying pairwise analysis failed.
    #[error(transparent)]
    Pair(#[from] PairError),
}

/// The cheapest single-agent action that resolves a predicted collision.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum AvoidanceAction {
    /// The pair is already collision-free within its windows.
    NoCollision,
    /// Agent 1 adopts this velocity from the common reference time on; its
    /// remaining path length is preserved, so its end time rescales.
    NewVelocityA(Vec2),
    /// Agent 2 adopts this velocity, same semantics as [`Self::NewVelocityA`].
    NewVelocityB(Vec2),
    /// Agent 1 postpones its segment start by this many seconds.
    WaitDelay(f64),
    /// No speed rescaling fits the kinematic limits and waiting is either
    /// disallowed or unsafe.
    NoSolution,
}

/// Builds the velocity obstacle cast on the agent at `pos_a` by the agent at
/// `pos_b` moving with velocity `v_b`.
///
/// Tangent directions touch the disc of radius `r_a + r_b` centred at
/// `pos_b`, giving the half-angle `asin((r_a + r_b) / |pos_b - pos_a|)`
/// around the centre-to-centre direction. Returns [`VoRegion::Total`] when
/// the centres are within `r_a + r_b` of each other (the agents already
/// overlap), and an error when they coincide outright.
pub fn construct_vo(
    pos_a: Vec2,
    pos_b: Vec2,
    r_a: f64,
    r_b: f64,
    v_b: Vec2,
) -> Result<VoRegion, VoError> {
    let offset = pos_b - pos_a;
    let Some(axis) = offset.normalized() else {
        return Err(VoError::CoincidentPositions);
    };
    let r_sum = r_a + r_b;
    let dist = offset.norm();
    if dist <= r_sum {
        return Ok(VoRegion::Total);
    }
    let half_angle = (r_sum / dist).asin();
    Ok(VoRegion::Cone(VelocityObstacle {
        apex: v_b,
        left_ray: axis.rotated(half_angle),
        right_ray: axis.rotated(-half_angle),
    }))
}

/// Tests whether velocity `v` lies strictly inside the cone.
///
/// The boundary — apex and rays, within `eps_geom` relative to the offset
/// magnitude — counts as outside, mirroring the open-interval touching
/// semantics of the collision detectors: a velocity exactly on a tangent ray
/// grazes the other agent without edge overlap.
pub fn vo_contains(vo: &VelocityObstacle, v: Vec2, tol: &Tolerance) -> bool {
    let w = v - vo.apex;
    let margin = tol.eps_geom * (1.0 + w.norm());
    // Cross products against the unit rays are signed distances from the
    // edge lines; strictly between the rays means counterclockwise of the
    // right edge and clockwise of the left edge.
    vo.right_ray.cross_z(w) > margin && vo.left_ray.cross_z(w) < -margin
}

/// Intersects the candidate-velocity segment `p0 → p0 + v` with both cone
/// edges.
///
/// Returns up to two velocity-space points, ordered along the segment, each
/// nudged `eps_clearance` (relative) outside the cone along that edge's
/// outward normal so that selecting a returned point never lands exactly on
/// the boundary. A segment collinear with an edge contributes no point for
/// that edge.
pub fn segment_ray_intersections(
    p0: Vec2,
    v: Vec2,
    vo: &VelocityObstacle,
    tol: &Tolerance,
) -> Vec<Vec2> {
    // Outward normals: the interior is counterclockwise of the right ray and
    // clockwise of the left ray, so outward is the opposite side of each.
    let edges = [(vo.right_ray, -vo.right_ray.perp()), (vo.left_ray, vo.left_ray.perp())];
    let rhs = vo.apex - p0;
    let slack = tol.eps_geom;
    let mut hits: Vec<(f64, Vec2)> = Vec::new();
    for (ray, outward) in edges {
        // Solve p0 + s·v = apex + u·ray for (s, u) by Cramer's rule.
        let det = ray.cross_z(v);
        if det.abs() <= f64::EPSILON * (1.0 + v.norm()) {
            continue; // parallel or collinear with this edge
        }
        let s = ray.cross_z(rhs) / det;
        let u = v.cross_z(rhs) / det;
        if !(-slack..=1.0 + slack).contains(&s) || u < -slack {
            continue; // beyond the segment or behind the apex
        }
        let point = p0 + v * s;
        let nudge = tol.eps_clearance * (1.0 + point.norm());
        hits.push((s, point + outward * nudge));
    }
    hits.sort_by(|a, b| a.0.total_cmp(&b.0));
    hits.into_iter().map(|(_, p)| p).collect()
}

/// Picks the cheapest single-agent action that avoids a predicted collision
/// between two constant-velocity segments.
///
/// The procedure runs five steps in order and returns at the first success:
///
/// 1. No collision within the windows → [`AvoidanceAction::NoCollision`].
/// 2. Rescale agent 1's speed: candidates are the intersections of the
///    velocity-space segment `0 → dir₁·vmax_a` with agent 1's obstacle cone.
///    A candidate is feasible if its magnitude respects `vmax_a` and it
///    still points along the travel direction; among feasible candidates
///    that verify collision-free, the one closest to the current velocity
///    wins (ties toward the lower speed).
/// 3. The same for agent 2 against agent 1's motion.
/// 4. If `allow_wait`, agent 1 postpones its start to just past the unsafe
///    start interval's upper endpoint (plus `eps_clearance`).
/// 5. Otherwise [`AvoidanceAction::NoSolution`].
///
/// Velocity changes apply from the later of the two segment starts: the
/// replanned agent keeps its position at that instant and its remaining path
/// length, so the segment end time rescales with the new speed. Every
/// returned action is re-verified collision-free before it is returned.
pub fn min_velocity_change(
    m1: &Motion<2>,
    m2: &Motion<2>,
    vmax_a: f64,
    vmax_b: f64,
    allow_wait: bool,
    tol: &Tolerance,
) -> Result<AvoidanceAction, VoError> {
    if m1.accel.is_some() || m2.accel.is_some() {
        return Err(PairError::AccelerationPresent.into());
    }
    if cv_collision_interval(m1, m2, tol)?.is_none() {
        return Ok(AvoidanceAction::NoCollision);
    }
    // A collision interval exists, so the windows overlap and the later
    // start is a valid reference time for both motions.
    let t0 = m1.t_start.max(m2.t_start);
    let pos_a = m1
        .position_at(t0)
        .expect("common reference time lies in both windows when a collision exists");
    let pos_b = m2
        .position_at(t0)
        .expect("common reference time lies in both windows when a collision exists");

    if let Some(v_new) = reroute(m1, m2, pos_a, pos_b, vmax_a, t0, tol)? {
        return Ok(AvoidanceAction::NewVelocityA(v_new));
    }
    if let Some(v_new) = reroute(m2, m1, pos_b, pos_a, vmax_b, t0, tol)? {
        return Ok(AvoidanceAction::NewVelocityB(v_new));
    }
    if allow_wait {
        let unsafe_starts = unsafe_interval_segmented(m1, m2, tol)?.unsafe_start_interval;
        if let Some(window) = unsafe_starts {
            let delay = window.end - m1.t_start + tol.eps_clearance;
            if delay > 0.0 && window.end.is_finite() {
                let waited = m1.started_at(m1.t_start + delay);
                if cv_collision_interval(&waited, m2, tol)?.is_none() {
                    return Ok(AvoidanceAction::WaitDelay(delay));
                }
            }
        }
    }
    Ok(AvoidanceAction::NoSolution)
}

/// Finds the safe speed-rescaling for `agent` (positioned at `pos_agent` at
/// time `t0`) against `other` that minimizes the velocity change, if any.
fn reroute(
    agent: &Motion<2>,
    other: &Motion<2>,
    pos_agent: Vec2,
    pos_other: Vec2,
    vmax: f64,
    t0: f64,
    tol: &Tolerance,
) -> Result<Option<Vec2>, VoError> {
    let Some(dir) = agent.v.normalized() else {
        return Ok(None); // a parked agent has no direction to rescale along
    };
    if !(vmax > 0.0) {
        return Ok(None);
    }
    let cone = match construct_vo(pos_agent, pos_other, agent.radius, other.radius, other.v)? {
        VoRegion::Cone(cone) => cone,
        VoRegion::Total => return Ok(None), // already overlapping; no velocity escapes
    };
    let mut candidates =
        segment_ray_intersections(VecD::zero(), dir * vmax, &cone, tol);
    // The outward nudge can push a candidate slightly past the speed limit
    // or off the travel direction; allow exactly that much slack.
    let speed_cap = vmax + tol.eps_clearance * (1.0 + vmax);
    candidates.retain(|c| c.norm() <= speed_cap && c.dot(dir) > 0.0);
    candidates.sort_by(|p, q| {
        let change_p = (*p - agent.v).norm();
        let change_q = (*q - agent.v).norm();
        change_p
            .total_cmp(&change_q)
            .then(p.norm().total_cmp(&q.norm()))
    });
    for candidate in candidates {
        if replanned_is_safe(agent, other, candidate, t0, tol)? {
            return Ok(Some(candidate));
        }
    }
    Ok(None)
}

/// The motion `agent` follows after adopting `v_new` at `reference_time`:
/// same position at that instant, remaining path length preserved, end time
/// rescaled by the new speed.
///
/// Returns `None` when the reference time lies outside the agent's window or
/// nothing of the segment remains to traverse.
pub fn replanned_motion(
    agent: &Motion<2>,
    reference_time: f64,
    v_new: Vec2,
) -> Option<Motion<2>> {
    let position = agent.position_at(reference_time).ok()?;
    let remaining = agent.v.norm() * (agent.t_end - reference_time);
    let t_end = if remaining.is_finite() {
        reference_time + remaining / v_new.norm()
    } else {
        f64::INFINITY
    };
    if !(reference_time < t_end) {
        return None;
    }
    Some(Motion {
        p0: position,
        v: v_new,
        accel: None,
        t_start: reference_time,
        t_end,
        radius: agent.radius,
    })
}

/// Re-runs detection with `agent` adopting `v_new` from `t0` on.
fn replanned_is_safe(
    agent: &Motion<2>,
    other: &Motion<2>,
    v_new: Vec2,
    t0: f64,
    tol: &Tolerance,
) -> Result<bool, VoError> {
    let Some(replanned) = replanned_motion(agent, t0, v_new) else {
        // The segment was already over at the reference time; nothing left
        // to collide with.
        return Ok(true);
    };
    Ok(cv_collision_interval(&replanned, other, tol)?.is_none())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vector::vec2;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn seg(p0: (f64, f64), v: (f64, f64), t0: f64, t1: f64, r: f64) -> Motion<2> {
        Motion::new(vec2(p0.0, p0.1), vec2(v.0, v.1), None, t0, t1, r).unwrap()
    }

    fn cone_of(region: VoRegion) -> VelocityObstacle {
        match region {
            VoRegion::Cone(cone) => cone,
            VoRegion::Total => panic!("expected a proper cone, got a total obstacle"),
        }
    }

    /// Two unit-radius agents five apart along +y: the tangent half-angle is
    /// asin(2/5) and a parked obstacle leaves the apex at the origin.
    #[test]
    fn tangent_cone_has_the_expected_half_angle() {
        let region =
            construct_vo(vec2(0.0, 0.0), vec2(0.0, 5.0), 1.0, 1.0, vec2(0.0, 0.0)).unwrap();
        let vo = cone_of(region);
        assert_eq!(vo.apex, vec2(0.0, 0.0));

        let half_angle = (2.0f64 / 5.0).asin();
        assert!((half_angle.to_degrees() - 23.578_178_478_201_815).abs() < 1e-9);
        let (sin, cos) = half_angle.sin_cos();
        assert!((vo.left_ray - vec2(-sin, cos)).norm() < 1e-12);
        assert!((vo.right_ray - vec2(sin, cos)).norm() < 1e-12);

        // A moving obstacle translates the apex without touching the rays.
        let moving =
            construct_vo(vec2(0.0, 0.0), vec2(0.0, 5.0), 1.0, 1.0, vec2(1.0, 0.0)).unwrap();
        let moving = cone_of(moving);
        assert_eq!(moving.apex, vec2(1.0, 0.0));
        assert_eq!(moving.left_ray, vo.left_ray);
        assert_eq!(moving.right_ray, vo.right_ray);
    }

    #[test]
    fn overlapping_agents_cast_a_total_obstacle() {
        let region =
            construct_vo(vec2(0.0, 0.0), vec2(1.5, 0.0), 1.0, 1.0, vec2(0.0, 0.0)).unwrap();
        assert_eq!(region, VoRegion::Total);
        // Exact touching is treated as overlap: the tangent cone would span a
        // half-plane and carry no information.
        let touching =
            construct_vo(vec2(0.0, 0.0), vec2(2.0, 0.0), 1.0, 1.0, vec2(0.0, 0.0)).unwrap();
        assert_eq!(touching, VoRegion::Total);
        assert_eq!(
            construct_vo(vec2(3.0, 4.0), vec2(3.0, 4.0), 1.0, 1.0, vec2(0.0, 0.0)),
            Err(VoError::CoincidentPositions)
        );
    }

    #[test]
    fn membership_is_strict_inside_the_cone() {
        let tol = Tolerance::default();
        let vo = cone_of(
            construct_vo(vec2(0.0, 0.0), vec2(0.0, 5.0), 1.0, 1.0, vec2(0.0, 0.0)).unwrap(),
        );
        // Straight at the obstacle is the cone axis.
        assert!(vo_contains(&vo, vec2(0.0, 1.0), &tol));
        // Perpendicular escape is well outside.
        assert!(!vo_contains(&vo, vec2(-1.0, 0.0), &tol));
        // The apex and points on a ray touch the boundary, which is outside.
        assert!(!vo_contains(&vo, vo.apex, &tol));
        assert!(!vo_contains(&vo, vo.apex + vo.left_ray * 3.0, &tol));
        // Rotating a boundary point inward by a milliradian clears the
        // tolerance band and lands inside.
        let inward = (vo.left_ray * 3.0).rotated(-1e-3);
        assert!(vo_contains(&vo, vo.apex + inward, &tol));
    }

    /// The cone answers the unbounded-future question, so membership of the
    /// current velocity must agree with the quadratic detector on
    /// open-ended windows, away from the tangency band.
    #[test]
    fn membership_matches_the_quadratic_on_unbounded_windows() {
        let tol = Tolerance::default();
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0009);
        let mut skipped = 0;
        let mut inside = 0;
        for case in 0..400 {
            let r1 = rng.random_range(0.3..1.2);
            let r2 = rng.random_range(0.3..1.2);
            let pos_a = vec2(rng.random_range(-8.0..8.0), rng.random_range(-8.0..8.0));
            let pos_b = vec2(rng.random_range(-8.0..8.0), rng.random_range(-8.0..8.0));
            if (pos_b - pos_a).norm() <= r1 + r2 + 0.1 {
                continue; // total obstacles have no rays to compare against
            }
            let v_b = vec2(rng.random_range(-2.5..2.5), rng.random_range(-2.5..2.5));
            let v_a = if case % 2 == 0 {
                vec2(rng.random_range(-2.5..2.5), rng.random_range(-2.5..2.5))
            } else {
                // Aim the relative velocity roughly at the obstacle so the
                // colliding side of the cone gets exercised too.
                let aim = (pos_b - pos_a).normalized().unwrap();
                let wobble = rng.random_range(-0.5..0.5);
                v_b + aim.rotated(wobble) * rng.random_range(0.5..2.5)
            };
            let vo = cone_of(construct_vo(pos_a, pos_b, r1, r2, v_b).unwrap());

            let w = v_a - vo.apex;
            let band = 1e-6 * (1.0 + w.norm());
            if w.norm() <= band
                || vo.left_ray.cross_z(w).abs() <= band
                || vo.right_ray.cross_z(w).abs() <= band
            {
                skipped += 1;
                continue; // within the tangency band the verdicts may differ
            }

            let m1 = Motion::new(pos_a, v_a, None, 0.0, f64::INFINITY, r1).unwrap();
            let m2 = Motion::new(pos_b, v_b, None, 0.0, f64::INFINITY, r2).unwrap();
            let collides = cv_collision_interval(&m1, &m2, &tol).unwrap().is_some();
            assert_eq!(
                vo_contains(&vo, v_a, &tol),
                collides,
                "cone membership and quadratic detector disagree: \
                 pos_a={pos_a:?} pos_b={pos_b:?} v_a={v_a:?} v_b={v_b:?}"
            );
            if collides {
                inside += 1;
            }
        }
        assert!(skipped < 20, "tangency band swallowed {skipped} of 400 configs");
        assert!(inside > 30, "only {inside} colliding configs; sampling too thin");
    }

    /// One tangent edge crossed once: the raw solve must sit on both lines to
    /// 1e-9, and the default nudge must push the point just outside.
    #[test]
    fn single_edge_crossing_solves_to_residual_tolerance() {
        let raw_tol = Tolerance::new(1e-9, 1e-9, 1e-30).unwrap();
        let vo = cone_of(
            construct_vo(vec2(0.0, 0.0), vec2(10.0, 0.0), 1.0, 1.0, vec2(0.0, -1.0)).unwrap(),
        );
        assert_eq!(vo.apex, vec2(0.0, -1.0));
        let p0 = vec2(0.0, 0.0);
        let v = vec2(6.0, 0.0);

        // With a negligible nudge the returned point is the raw intersection.
        let raw = segment_ray_intersections(p0, v, &vo, &raw_tol);
        assert_eq!(raw.len(), 1);
        let point = raw[0];
        let expected_x = 5.0 * (1.0 - 0.04f64).sqrt(); // u = 5 along the left ray
        assert!((point - vec2(expected_x, 0.0)).norm() < 1e-9);
        let off_ray = vo.left_ray.cross_z(point - vo.apex).abs();
        let off_segment = v.cross_z(point - p0).abs() / v.norm();
        assert!(off_ray < 1e-9, "ray residual {off_ray}");
        assert!(off_segment < 1e-9, "segment residual {off_segment}");

        // The default nudge moves the point off the ray by eps_clearance
        // (relative) and strictly outside the cone.
        let tol = Tolerance::default();
        let nudged = segment_ray_intersections(p0, v, &vo, &tol);
        assert_eq!(nudged.len(), 1);
        let expected_nudge = tol.eps_clearance * (1.0 + point.norm());
        let moved = vo.left_ray.cross_z(nudged[0] - vo.apex).abs();
        assert!((moved - expected_nudge).abs() < 0.1 * expected_nudge);
        assert!(!vo_contains(&vo, nudged[0], &tol));
    }

    #[test]
    fn segment_inside_the_cone_crosses_nothing() {
        let tol = Tolerance::default();
        // Head-on approach: the candidate segment runs along the cone axis.
        let vo = cone_of(
            construct_vo(vec2(0.0, 0.0), vec2(10.0, 0.0), 1.0, 1.0, vec2(-1.0, 0.0)).unwrap(),
        );
        assert!(segment_ray_intersections(vec2(0.0, 0.0), vec2(1.0, 0.0), &vo, &tol).is_empty());
    }

    #[test]
    fn segment_across_the_cone_crosses_both_edges() {
        let tol = Tolerance::default();
        let vo = cone_of(
            construct_vo(vec2(0.0, 0.0), vec2(0.0, 5.0), 1.0, 1.0, vec2(0.0, 0.0)).unwrap(),
        );
        // A horizontal segment above the apex passes through the whole cone.
        let points = segment_ray_intersections(vec2(-2.0, 1.0), vec2(4.0, 0.0), &vo, &tol);
        assert_eq!(points.len(), 2);
        // Ordered along the segment: left edge first (negative x), then right.
        let x_at_unit_height = 0.4 / (1.0 - 0.16f64).sqrt();
        assert!((points[0].x() + x_at_unit_height).abs() < 1e-5);
        assert!((points[1].x() - x_at_unit_height).abs() < 1e-5);
        for p in points {
            assert!(!vo_contains(&vo, p, &tol));
        }
    }

    #[test]
    fn non_colliding_pair_needs_no_action() {
        let tol = Tolerance::default();
        let m1 = seg((0.0, 0.0), (1.0, 0.0), 0.0, 10.0, 1.0);
        let m2 = seg((0.0, 8.0), (1.0, 0.0), 0.0, 10.0, 1.0);
        assert_eq!(
            min_velocity_change(&m1, &m2, 2.0, 2.0, true, &tol).unwrap(),
            AvoidanceAction::NoCollision
        );
        // Disjoint windows cannot collide either.
        let late = seg((10.0, 0.0), (-1.0, 0.0), 20.0, 30.0, 1.0);
        assert_eq!(
            min_velocity_change(&m1, &late, 2.0, 2.0, true, &tol).unwrap(),
            AvoidanceAction::NoCollision
        );
    }

    /// Perpendicular crossing with room to maneuver: slowing agent 1 to
    /// three quarters speed grazes past the other agent. The alternative
    /// candidate (speeding up to 4/3) is a larger change and must lose.
    #[test]
    fn crossing_reroutes_the_first_agent_with_minimum_change() {
        let tol = Tolerance::default();
        let m1 = seg((0.0, 0.0), (1.0, 0.0), 0.0, 20.0, 1.0);
        let m2 = seg((10.0, -10.0), (0.0, 1.0), 0.0, 20.0, 1.0);
        let action = min_velocity_change(&m1, &m2, 2.0, 2.0, true, &tol).unwrap();
        let AvoidanceAction::NewVelocityA(v_new) = action else {
            panic!("expected a new velocity for agent 1, got {action:?}");
        };
        assert!((v_new - vec2(0.75, 0.0)).norm() < 1e-4);
        assert!(v_new.norm() < 1.0, "the cheaper candidate is the slowdown");

        // Oracle: replay detection with the rescaled motion.
        let t_end = 20.0 / v_new.norm();
        let replanned = Motion::new(vec2(0.0, 0.0), v_new, None, 0.0, t_end, 1.0).unwrap();
        assert_eq!(cv_collision_interval(&replanned, &m2, &tol).unwrap(), None);
    }

    /// Same crossing with speed caps below every cone crossing: neither agent
    /// can rescale its way out, so agent 1 waits out the unsafe start
    /// interval, whose half-width is 2√2 for this symmetric geometry.
    #[test]
    fn capped_speeds_fall_back_to_waiting() {
        let tol = Tolerance::default();
        let m1 = seg((0.0, 0.0), (1.0, 0.0), 0.0, 20.0, 1.0);
        let m2 = seg((10.0, -10.0), (0.0, 1.0), 0.0, 20.0, 1.0);
        let action = min_velocity_change(&m1, &m2, 0.5, 0.5, true, &tol).unwrap();
        let AvoidanceAction::WaitDelay(delay) = action else {
            panic!("expected a wait, got {action:?}");
        };
        let expected = 2.0 * 2.0f64.sqrt() + tol.eps_clearance;
        assert!((delay - expected).abs() < 1e-9, "delay {delay} vs {expected}");
        let waited = m1.started_at(m1.t_start + delay);
        assert_eq!(cv_collision_interval(&waited, &m2, &tol).unwrap(), None);

        // With waiting disallowed the same configuration is unsolvable.
        assert_eq!(
            min_velocity_change(&m1, &m2, 0.5, 0.5, false, &tol).unwrap(),
            AvoidanceAction::NoSolution
        );
    }

    /// Mutual head-on at the speed limit: every feasible rescaling of either
    /// agent keeps the velocity inside the cone, so without waiting there is
    /// no solution. An exhaustive speed grid confirms the verdict.
    #[test]
    fn head_on_at_the_speed_limit_is_unsolvable_without_waiting() {
        let tol = Tolerance::default();
        let m1 = seg((0.0, 0.0), (1.0, 0.0), 0.0, 20.0, 1.0);
        let m2 = seg((10.0, 0.0), (-1.0, 0.0), 0.0, 20.0, 1.0);
        assert_eq!(
            min_velocity_change(&m1, &m2, 1.0, 1.0, false, &tol).unwrap(),
            AvoidanceAction::NoSolution
        );
        // Oracle: every speed either agent may adopt still collides.
        for k in 1..=20 {
            let speed = k as f64 / 20.0;
            let slower1 = Motion::new(m1.p0, vec2(speed, 0.0), None, 0.0, 20.0 / speed, 1.0)
                .unwrap();
            assert!(
                cv_collision_interval(&slower1, &m2, &tol).unwrap().is_some(),
                "agent 1 at speed {speed} should still collide"
            );
            let slower2 = Motion::new(m2.p0, vec2(-speed, 0.0), None, 0.0, 20.0 / speed, 1.0)
                .unwrap();
            assert!(
                cv_collision_interval(&m1, &slower2, &tol).unwrap().is_some(),
                "agent 2 at speed {speed} should still collide"
            );
        }

        // Waiting resolves it: agent 1 is unsafe starting anywhere in
        // (-12, 12) for this geometry, so it waits just past 12 seconds.
        let action = min_velocity_change(&m1, &m2, 1.0, 1.0, true, &tol).unwrap();
        let AvoidanceAction::WaitDelay(delay) = action else {
            panic!("expected a wait, got {action:?}");
        };
        assert!((delay - (12.0 + tol.eps_clearance)).abs() < 1e-9);
        let waited = m1.started_at(m1.t_start + delay);
        assert_eq!(cv_collision_interval(&waited, &m2, &tol).unwrap(), None);
    }

    /// A parked obstacle dead ahead leaves no speed rescaling for either
    /// agent (the parked one has no direction at all), so agent 1 waits for
    /// the obstacle's window to expire.
    #[test]
    fn parked_obstacle_forces_waiting_out_its_window() {
        let tol = Tolerance::default();
        let m1 = seg((0.0, 0.0), (1.0, 0.0), 0.0, 20.0, 1.0);
        let parked = seg((5.0, 0.0), (0.0, 0.0), 0.0, 20.0, 1.0);
        let action = min_velocity_change(&m1, &parked, 2.0, 2.0, true, &tol).unwrap();
        let AvoidanceAction::WaitDelay(delay) = action else {
            panic!("expected a wait, got {action:?}");
        };
        // Contact zone x ∈ (3, 7) is entered 3 s after any start s, so the
        // unsafe starts are (-7, 17): overlap with the obstacle's [0, 20]
        // window ends once s + 3 ≥ 20.
        assert!((delay - (17.0 + tol.eps_clearance)).abs() < 1e-9, "delay {delay}");
        let waited = m1.started_at(m1.t_start + delay);
        assert_eq!(cv_collision_interval(&waited, &parked, &tol).unwrap(), None);
    }

    #[test]
    fn accelerating_segments_are_rejected() {
        let tol = Tolerance::default();
        let m1 = Motion::new(
            vec2(0.0, 0.0),
            vec2(1.0, 0.0),
            Some(vec2(0.1, 0.0)),
            0.0,
            10.0,
            1.0,
        )
        .unwrap();
        let m2 = seg((10.0, 0.0), (-1.0, 0.0), 0.0, 10.0, 1.0);
        assert_eq!(
            min_velocity_change(&m1, &m2, 1.0, 1.0, true, &tol),
            Err(VoError::Pair(PairError::AccelerationPresent))
        );
    }

    /// Every action the procedure returns must survive its own oracle:
    /// re-running detection with the modified motion finds no collision.
    #[test]
    fn returned_actions_are_always_safe() {
        let tol = Tolerance::default();
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_000a);
        let mut velocity_actions = 0;
        let mut waits = 0;
        let mut colliding = 0;
        for case in 0..200 {
            let (m1, m2) = if case % 10 == 0 {
                // Forced head-on: exercises the waiting branch.
                let speed = rng.random_range(0.5..1.5);
                let gap = rng.random_range(6.0..14.0);
                (
                    seg((0.0, 0.0), (speed, 0.0), 0.0, 18.0, 0.8),
                    seg((gap, 0.0), (-speed, 0.0), 0.0, 18.0, 0.8),
                )
            } else {
                // Two agents aimed at a common crossing point near the origin.
                let hit = rng.random_range(4.0..8.0);
                let jitter = rng.random_range(-0.4..0.4);
                let mut toward_origin = |hit_time: f64| {
                    let angle: f64 = rng.random_range(0.0..std::f64::consts::TAU);
                    let speed = rng.random_range(0.5..2.0);
                    let dir = vec2(angle.cos(), angle.sin());
                    let start = dir * (-speed * hit_time);
                    let r = rng.random_range(0.3..0.8);
                    Motion::new(start, dir * speed, None, 0.0, 16.0, r).unwrap()
                };
                (toward_origin(hit), toward_origin(hit + jitter))
            };
            let vmax_a = m1.v.norm() * rng.random_range(0.8..2.5);
            let vmax_b = m2.v.norm() * rng.random_range(0.8..2.5);
            let allow_wait = case % 2 == 0;

            let action = min_velocity_change(&m1, &m2, vmax_a, vmax_b, allow_wait, &tol).unwrap();
            if action != AvoidanceAction::NoCollision {
                colliding += 1;
            }
            let replan = |agent: &Motion<2>, v_new: Vec2| {
                let t0 = m1.t_start.max(m2.t_start);
                let remaining = agent.v.norm() * (agent.t_end - t0);
                Motion::new(
                    agent.position_at(t0).unwrap(),
                    v_new,
                    None,
                    t0,
                    t0 + remaining / v_new.norm(),
                    agent.radius,
                )
                .unwrap()
            };
            match action {
                AvoidanceAction::NoCollision => {
                    assert_eq!(cv_collision_interval(&m1, &m2, &tol).unwrap(), None);
                }
                AvoidanceAction::NewVelocityA(v_new) => {
                    velocity_actions += 1;
                    assert!(v_new.norm() <= vmax_a * (1.0 + 1e-5));
                    assert!(v_new.dot(m1.v) > 0.0);
                    let replanned = replan(&m1, v_new);
                    assert_eq!(cv_collision_interval(&replanned, &m2, &tol).unwrap(), None);
                }
                AvoidanceAction::NewVelocityB(v_new) => {
                    velocity_actions += 1;
                    assert!(v_new.norm() <= vmax_b * (1.0 + 1e-5));
                    assert!(v_new.dot(m2.v) > 0.0);
                    let replanned = replan(&m2, v_new);
                    assert_eq!(cv_collision_interval(&m1, &replanned, &tol).unwrap(), None);
                }
                AvoidanceAction::WaitDelay(delay) => {
                    waits += 1;
                    assert!(delay > 0.0);
                    let waited = m1.started_at(m1.t_start + delay);
                    assert_eq!(cv_collision_interval(&waited, &m2, &tol).unwrap(), None);
                }
                AvoidanceAction::NoSolution => {}
            }
        }
        assert!(colliding > 100, "only {colliding} colliding configs");
        assert!(velocity_actions > 40, "only {velocity_actions} velocity actions");
        assert!(waits > 5, "only {waits} wait actions");
    }
}
