//! Whole-scenario conflict checking.
//!
//! A scenario is a set of agents, each traversing a validated multi-segment
//! path. Conflict checking runs in two phases: a sweep-and-prune broad phase
//! over swept space-time bounding boxes that may emit false candidates but
//! never drops a true conflict, and an exact narrow phase that runs the
//! closed-form collision analysis on every surviving pair.

use std::collections::HashSet;
use std::fmt;

use thiserror::Error;

use crate::acceleration::accel_collision_intervals;
use crate::constant_velocity::cv_collision_interval;
use crate::interval::TimeInterval;
use crate::motion::{validate_path, Motion, PairError, Path, PathViolation};
use crate::tolerance::Tolerance;
use crate::vector::VecD;

/// A named set of agents with multi-segment paths.
#[derive(Clone, Debug, PartialEq)]
pub struct Scenario<const D: usize> {
    pub name: String,
    pub agents: Vec<Path<D>>,
}

/// One way a scenario fails validation.
#[derive(Debug, Clone, PartialEq)]
pub enum ScenarioIssue {
    /// Two agents share an id, so reports would be ambiguous.
    DuplicateAgentId { id: String },
    /// An agent's path is discontinuous in time or space.
    PathDefect {
        agent: String,
        violation: PathViolation,
    },
}

impl fmt::Display for ScenarioIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScenarioIssue::DuplicateAgentId { id } => write!(f, "duplicate agent id {id:?}"),
            ScenarioIssue::PathDefect { agent, violation } => {
                write!(f, "agent {agent:?}: {violation}")
            }
        }
    }
}

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("scenario is invalid: {}", format_issues(.0))]
    Invalid(Vec<ScenarioIssue>),
    #[error(transparent)]
    Pair(#[from] PairError),
}

fn format_issues(issues: &[ScenarioIssue]) -> String {
    issues
        .iter()
        .map(ScenarioIssue::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}

/// A segment pair surviving the broad phase. Indices refer to
/// [`Scenario::agents`] and the agents' `segments`; `agent1 < agent2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CandidatePair {
    pub agent1: usize,
    pub seg1: usize,
    pub agent2: usize,
    pub seg2: usize,
}

/// Which narrow-phase analysis produced a conflict.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConflictKind {
    ConstantVelocity,
    Acceleration,
}

/// One pairwise conflict: the named agents' segments overlap in space during
/// the (nonempty) interval.
#[derive(Clone, Debug, PartialEq)]
pub struct ConflictReport {
    pub agent1: String,
    pub agent2: String,
    pub seg1: usize,
    pub seg2: usize,
    pub interval: TimeInterval,
    pub kind: ConflictKind,
}

/// Collects every validation issue; an empty result means the scenario is
/// well formed.
pub fn validate_scenario<const D: usize>(
    scenario: &Scenario<D>,
    tol: &Tolerance,
) -> Vec<ScenarioIssue> {
    let mut issues = Vec::new();
    let mut seen = HashSet::new();
    for path in &scenario.agents {
        if !seen.insert(path.id.as_str()) {
            issues.push(ScenarioIssue::DuplicateAgentId {
                id: path.id.clone(),
            });
        }
        for violation in validate_path(path, tol) {
            issues.push(ScenarioIssue::PathDefect {
                agent: path.id.clone(),
                violation,
            });
        }
    }
    issues
}

/// Swept space-time bounds of one segment, inflated by the agent radius.
#[derive(Clone, Copy, Debug)]
struct SweptBox<const D: usize> {
    lo: VecD<D>,
    hi: VecD<D>,
    t_start: f64,
    t_end: f64,
    agent: usize,
    seg: usize,
}

/// Per-axis position of the segment end, robust to unbounded windows where
/// `0 · ∞` would otherwise poison the arithmetic.
fn end_coordinate(p0: f64, v: f64, a: f64, dt: f64) -> f64 {
    if dt.is_finite() {
        p0 + v * dt + 0.5 * a * dt * dt
    } else if a != 0.0 {
        p0 + f64::INFINITY * a.signum()
    } else if v != 0.0 {
        p0 + f64::INFINITY * v.signum()
    } else {
        p0
    }
}

fn swept_box<const D: usize>(m: &Motion<D>, agent: usize, seg: usize) -> SweptBox<D> {
    let dt = m.t_end - m.t_start;
    let accel = m.accel.unwrap_or_else(VecD::zero);
    let mut lo = VecD::zero();
    let mut hi = VecD::zero();
    for i in 0..D {
        let start = m.p0[i];
        let end = end_coordinate(start, m.v[i], accel[i], dt);
        let mut axis_lo = start.min(end);
        let mut axis_hi = start.max(end);
        // With acceleration the extent along an axis is not monotone: the
        // coordinate turns around where its velocity component vanishes.
        if accel[i] != 0.0 {
            let turn = -m.v[i] / accel[i];
            if turn > 0.0 && turn < dt {
                let apex = m.p0[i] + m.v[i] * turn + 0.5 * accel[i] * turn * turn;
                axis_lo = axis_lo.min(apex);
                axis_hi = axis_hi.max(apex);
            }
        }
        lo[i] = axis_lo - m.radius;
        hi[i] = axis_hi + m.radius;
    }
    SweptBox {
        lo,
        hi,
        t_start: m.t_start,
        t_end: m.t_end,
        agent,
        seg,
    }
}

fn boxes_touch<const D: usize>(a: &SweptBox<D>, b: &SweptBox<D>) -> bool {
    (0..D).all(|i| a.lo[i] <= b.hi[i] && b.lo[i] <= a.hi[i])
}

/// Emits every segment pair whose swept boxes overlap in space and whose
/// windows share a positive-length span.
///
/// The result is a superset of the true conflicts: boxes are conservative
/// (inclusive spatial test, exact swept extents including acceleration
/// turnaround points), so a pair the narrow phase would flag is never
/// dropped. Pairs are deduplicated, normalized to `agent1 < agent2`, and
/// sorted for determinism.
pub fn broad_phase<const D: usize>(scenario: &Scenario<D>) -> Vec<CandidatePair> {
    let mut boxes = Vec::new();
    for (ai, path) in scenario.agents.iter().enumerate() {
        for (si, segment) in path.segments.iter().enumerate() {
            boxes.push(swept_box(segment, ai, si));
        }
    }
    // Sweep along the time axis: visit segments in start order and test each
    // against the segments whose windows are still open.
    boxes.sort_by(|a, b| {
        a.t_start
            .total_cmp(&b.t_start)
            .then(a.agent.cmp(&b.agent))
            .then(a.seg.cmp(&b.seg))
    });
    let mut active: Vec<usize> = Vec::new();
    let mut out = Vec::new();
    for i in 0..boxes.len() {
        let current = boxes[i];
        // A window ending exactly when the next begins shares a single
        // instant; open-interval collision semantics need interior overlap.
        active.retain(|&j| boxes[j].t_end > current.t_start);
        for &j in &active {
            let other = boxes[j];
            if other.agent != current.agent && boxes_touch(&other, &current) {
                let (first, second) = if other.agent < current.agent {
                    (other, current)
                } else {
                    (current, other)
                };
                out.push(CandidatePair {
                    agent1: first.agent,
                    seg1: first.seg,
                    agent2: second.agent,
                    seg2: second.seg,
                });
            }
        }
        active.push(i);
    }
    out.sort_by_key(|c| (c.agent1, c.seg1, c.agent2, c.seg2));
    out
}

/// Runs the exact narrow phase over every broad-phase candidate.
///
/// Reports are sorted by interval start, then agent ids, then segment
/// indices, so identical scenarios always produce identical report lists.
pub fn check_scenario<const D: usize>(
    scenario: &Scenario<D>,
    tol: &Tolerance,
) -> Result<Vec<ConflictReport>, ScenarioError> {
    let issues = validate_scenario(scenario, tol);
    if !issues.is_empty() {
        return Err(ScenarioError::Invalid(issues));
    }
    let mut reports = Vec::new();
    for pair in broad_phase(scenario) {
        let path1 = &scenario.agents[pair.agent1];
        let path2 = &scenario.agents[pair.agent2];
        let m1 = &path1.segments[pair.seg1];
        let m2 = &path2.segments[pair.seg2];
        let mut push = |interval: TimeInterval, kind: ConflictKind| {
            reports.push(ConflictReport {
                agent1: path1.id.clone(),
                agent2: path2.id.clone(),
                seg1: pair.seg1,
                seg2: pair.seg2,
                interval,
                kind,
            });
        };
        if m1.accel.is_some() || m2.accel.is_some() {
            for interval in accel_collision_intervals(m1, m2, tol) {
                push(interval, ConflictKind::Acceleration);
            }
        } else if let Some(interval) = cv_collision_interval(m1, m2, tol)? {
            push(interval, ConflictKind::ConstantVelocity);
        }
    }
    reports.sort_by(|a, b| {
        a.interval
            .start
            .total_cmp(&b.interval.start)
            .then_with(|| a.agent1.cmp(&b.agent1))
            .then_with(|| a.agent2.cmp(&b.agent2))
            .then(a.seg1.cmp(&b.seg1))
            .then(a.seg2.cmp(&b.seg2))
    });
    Ok(reports)
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

    fn agent(id: &str, segments: Vec<Motion<2>>) -> Path<2> {
        Path {
            id: id.into(),
            segments,
        }
    }

    #[test]
    fn head_on_scenario_reports_one_conflict() {
        let scenario = Scenario {
            name: "head-on".into(),
            agents: vec![
                agent("A", vec![seg((0.0, 0.0), (1.0, 0.0), 0.0, 10.0, 1.0)]),
                agent("B", vec![seg((10.0, 0.0), (-1.0, 0.0), 0.0, 10.0, 1.0)]),
            ],
        };
        let reports = check_scenario(&scenario, &Tolerance::default()).unwrap();
        assert_eq!(reports.len(), 1);
        let r = &reports[0];
        assert_eq!((r.agent1.as_str(), r.agent2.as_str()), ("A", "B"));
        assert_eq!((r.seg1, r.seg2), (0, 0));
        assert_eq!(r.kind, ConflictKind::ConstantVelocity);
        assert!((r.interval.start - 4.0).abs() < 1e-12);
        assert!((r.interval.end - 6.0).abs() < 1e-12);
    }

    /// Crossing diagonals conflict; a parallel corridor overlaps the first
    /// agent's box without ever coming close. The broad phase must emit both
    /// pairs and the narrow phase must keep only the real one.
    #[test]
    fn broad_phase_overreports_and_narrow_phase_prunes() {
        let scenario = Scenario {
            name: String::new(),
            agents: vec![
                agent("A", vec![seg((0.0, 0.0), (1.0, 1.0), 0.0, 10.0, 1.0)]),
                agent("B", vec![seg((10.0, 0.0), (-1.0, 1.0), 0.0, 10.0, 1.0)]),
                agent("C", vec![seg((3.0, 0.0), (1.0, 1.0), 0.0, 10.0, 1.0)]),
            ],
        };
        let candidates = broad_phase(&scenario);
        let has = |a1, a2| {
            candidates
                .iter()
                .any(|c| (c.agent1, c.agent2) == (a1, a2))
        };
        assert!(has(0, 1), "true conflict must be a candidate");
        assert!(has(0, 2), "parallel corridor overlaps in space-time");

        let reports = check_scenario(&scenario, &Tolerance::default()).unwrap();
        // Diagonal corridors 3/√2 ≈ 2.12 apart never conflict at radius 1.
        assert!(reports
            .iter()
            .all(|r| !(r.agent1 == "A" && r.agent2 == "C")));
        assert!(reports
            .iter()
            .any(|r| r.agent1 == "A" && r.agent2 == "B"));
        // B and C cross as well.
        assert!(reports
            .iter()
            .any(|r| r.agent1 == "B" && r.agent2 == "C"));
    }

    #[test]
    fn temporally_disjoint_segments_are_not_candidates() {
        let scenario = Scenario {
            name: String::new(),
            agents: vec![
                agent("A", vec![seg((0.0, 0.0), (1.0, 0.0), 0.0, 10.0, 1.0)]),
                agent("B", vec![seg((0.0, 0.0), (1.0, 0.0), 11.0, 20.0, 1.0)]),
            ],
        };
        assert!(broad_phase(&scenario).is_empty());
        // Windows that merely touch share one instant, not an interval.
        let touching = Scenario {
            name: String::new(),
            agents: vec![
                agent("A", vec![seg((0.0, 0.0), (1.0, 0.0), 0.0, 10.0, 1.0)]),
                agent("B", vec![seg((0.0, 0.0), (1.0, 0.0), 10.0, 20.0, 1.0)]),
            ],
        };
        assert!(broad_phase(&touching).is_empty());
    }

    /// A decelerating agent overshoots its endpoints: x(t) = 2t − t²/2 on
    /// [0, 4] starts and ends at 0 but reaches 2. Endpoint-only boxes would
    /// miss a parked agent at x = 2.8 entirely — a forbidden type II error.
    #[test]
    fn swept_boxes_cover_the_acceleration_turnaround() {
        let turner = Motion::new(
            vec2(0.0, 0.0),
            vec2(2.0, 0.0),
            Some(vec2(-1.0, 0.0)),
            0.0,
            4.0,
            1.0,
        )
        .unwrap();
        let parked = Motion::new(vec2(2.8, 0.0), vec2(0.0, 0.0), None, 0.0, 4.0, 0.5).unwrap();
        let scenario = Scenario {
            name: String::new(),
            agents: vec![
                Path {
                    id: "turner".into(),
                    segments: vec![turner],
                },
                Path {
                    id: "parked".into(),
                    segments: vec![parked],
                },
            ],
        };
        let candidates = broad_phase(&scenario);
        assert_eq!(candidates.len(), 1, "turnaround extent must reach the parked agent");
        let reports = check_scenario(&scenario, &Tolerance::default()).unwrap();
        assert_eq!(reports.len(), 1);
        assert_eq!(reports[0].kind, ConflictKind::Acceleration);
        // Contact while 2t − t²/2 is within 0.8 + 0.7 of 2.8, i.e. around the
        // apex at t = 2.
        assert!(reports[0].interval.contains(2.0));
    }

    #[test]
    fn validation_collects_every_issue() {
        let scenario = Scenario {
            name: String::new(),
            agents: vec![
                agent("A", vec![seg((0.0, 0.0), (1.0, 0.0), 0.0, 5.0, 1.0)]),
                agent(
                    "A",
                    vec![
                        seg((0.0, 10.0), (1.0, 0.0), 0.0, 5.0, 1.0),
                        // starts 1 m away from where the previous segment ends
                        seg((6.0, 10.0), (1.0, 0.0), 5.0, 8.0, 1.0),
                    ],
                ),
            ],
        };
        let issues = validate_scenario(&scenario, &Tolerance::default());
        assert_eq!(issues.len(), 2);
        assert!(issues
            .iter()
            .any(|i| matches!(i, ScenarioIssue::DuplicateAgentId { id } if id == "A")));
        assert!(issues
            .iter()
            .any(|i| matches!(i, ScenarioIssue::PathDefect { .. })));
        let err = check_scenario(&scenario, &Tolerance::default()).unwrap_err();
        assert!(matches!(err, ScenarioError::Invalid(list) if list.len() == 2));
    }

    #[test]
    fn separated_corridors_are_conflict_free() {
        let agents = (0..10)
            .map(|i| {
                agent(
                    &format!("lane-{i}"),
                    vec![seg((0.0, 4.0 * i as f64), (1.0, 0.0), 0.0, 10.0, 1.0)],
                )
            })
            .collect();
        let scenario = Scenario {
            name: "lanes".into(),
            agents,
        };
        assert!(broad_phase(&scenario).is_empty());
        assert!(check_scenario(&scenario, &Tolerance::default())
            .unwrap()
            .is_empty());
    }

    /// The pipeline must agree with a brute-force all-pairs narrow phase:
    /// same conflicts, none lost to the broad phase (zero type II errors).
    #[test]
    fn pipeline_matches_all_pairs_narrow_phase() {
        let tol = Tolerance::default();
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_000b);
        for _ in 0..20 {
            // Continuous three-segment paths around the origin, a third of
            // the segments accelerating.
            let agents: Vec<Path<2>> = (0..12)
                .map(|i| {
                    let mut p = vec2(rng.random_range(-8.0..8.0), rng.random_range(-8.0..8.0));
                    let mut segments = Vec::new();
                    for k in 0..3 {
                        let v = vec2(rng.random_range(-1.5..1.5), rng.random_range(-1.5..1.5));
                        let accel = (rng.random_range(0.0..1.0) < 0.3).then(|| {
                            vec2(rng.random_range(-0.4..0.4), rng.random_range(-0.4..0.4))
                        });
                        let (t0, t1) = (3.0 * k as f64, 3.0 * (k + 1) as f64);
                        let m = Motion::new(p, v, accel, t0, t1, 0.5).unwrap();
                        p = m.position_at(t1).unwrap();
                        segments.push(m);
                    }
                    Path {
                        id: format!("agent-{i:02}"),
                        segments,
                    }
                })
                .collect();
            let scenario = Scenario {
                name: "random".into(),
                agents,
            };

            let mut expected = Vec::new();
            for a1 in 0..scenario.agents.len() {
                for a2 in (a1 + 1)..scenario.agents.len() {
                    for (s1, m1) in scenario.agents[a1].segments.iter().enumerate() {
                        for (s2, m2) in scenario.agents[a2].segments.iter().enumerate() {
                            let intervals: Vec<(TimeInterval, ConflictKind)> =
                                if m1.accel.is_some() || m2.accel.is_some() {
                                    accel_collision_intervals(m1, m2, &tol)
                                        .into_iter()
                                        .map(|iv| (iv, ConflictKind::Acceleration))
                                        .collect()
                                } else {
                                    cv_collision_interval(m1, m2, &tol)
                                        .unwrap()
                                        .into_iter()
                                        .map(|iv| (iv, ConflictKind::ConstantVelocity))
                                        .collect()
                                };
                            for (interval, kind) in intervals {
                                expected.push(ConflictReport {
                                    agent1: scenario.agents[a1].id.clone(),
                                    agent2: scenario.agents[a2].id.clone(),
                                    seg1: s1,
                                    seg2: s2,
                                    interval,
                                    kind,
                                });
                            }
                        }
                    }
                }
            }
            expected.sort_by(|a, b| {
                a.interval
                    .start
                    .total_cmp(&b.interval.start)
                    .then_with(|| a.agent1.cmp(&b.agent1))
                    .then_with(|| a.agent2.cmp(&b.agent2))
                    .then(a.seg1.cmp(&b.seg1))
                    .then(a.seg2.cmp(&b.seg2))
            });

            let reports = check_scenario(&scenario, &tol).unwrap();
            assert_eq!(reports, expected, "pipeline lost or invented conflicts");
            // Determinism: a second run reproduces the list exactly.
            assert_eq!(check_scenario(&scenario, &tol).unwrap(), reports);
        }
    }
}
