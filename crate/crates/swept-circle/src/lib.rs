//! Collision detection for circular agents with piecewise segmented motion.
//!
//! Agents are discs (2D) or spheres (3D) that traverse sequences of motion
//! segments, each with constant velocity or constant acceleration. The crate
//! answers, in closed form where possible:
//!
//! - when do two moving agents' edges overlap (collision intervals),
//! - how does that answer change if one agent starts earlier or later
//!   (unsafe start-time intervals), and
//! - what is the smallest velocity change that avoids a predicted collision
//!   (velocity obstacles).
//!
//! A grid-plus-bisection sampling fallback ([`sampling`]) provides an
//! independent reference for every closed form, and [`scenario`] scales the
//! pairwise tests to many agents with a sweep-and-prune broad phase.

// Negated comparisons like `!(a < b)` are deliberate: unlike `a >= b` they
// reject NaN operands, which is the safe default when validating input.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod acceleration;
pub mod constant_velocity;
pub mod delay;
pub mod delay_search;
pub mod interval;
pub mod motion;
pub mod roots;
pub mod sampling;
pub mod scenario;
pub mod scenario_json;
pub mod tolerance;
pub mod vector;
pub mod velocity_obstacle;

pub use acceleration::{accel_coefficients, accel_collision_intervals, QuarticCoefficients};
pub use constant_velocity::{cv_coefficients, cv_collision_interval, QuadCoefficients};
pub use delay::{
    collision_time_extent, collision_times_at_extrema, conic_coefficients, delay_at_time,
    delay_branches_at_time, delay_range, min_collision_time, unsafe_interval_segmented,
    ConicCoefficients, DegenerateKind, DelayRange, UnsafeDelayResult,
};
pub use delay_search::{unsafe_interval_accel, SearchConfig, SearchError};
pub use interval::TimeInterval;
pub use motion::{validate_path, Motion, MotionError, PairError, Path, PathViolation};
pub use roots::{solve_quadratic, solve_quartic, RealRoots, RootError};
pub use sampling::{sample_pair, SampleError, SamplingReport};
pub use scenario::{
    broad_phase, check_scenario, validate_scenario, CandidatePair, ConflictKind, ConflictReport,
    Scenario, ScenarioError, ScenarioIssue,
};
pub use scenario_json::{
    parse_scenario, scenario_from_file, scenario_to_file, scenario_to_json, AgentFile,
    LoadedScenario, ScenarioFile, ScenarioParseError, SegmentFile,
};
pub use tolerance::{Tolerance, ToleranceError};
pub use vector::{vec2, vec3, Vec2, Vec3, VecD};
pub use velocity_obstacle::{
    construct_vo, min_velocity_change, replanned_motion, segment_ray_intersections, vo_contains,
    AvoidanceAction, VelocityObstacle, VoError, VoRegion,
};
