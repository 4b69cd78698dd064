//! Browser playground for the swept-circle collision library.
//!
//! Every entry point takes a JSON configuration string and returns a JSON
//! result string, so the exact same functions serve two callers: the static
//! page in `www/` through wasm-bindgen when compiled for `wasm32`, and the
//! host-side integration tests that pin the payload contract. Failures never
//! panic across the boundary — they come back as `{"error": "..."}`.
//!
//! Three panels are exposed:
//!
//! - [`collision_lab`]: collision intervals plus the squared-edge-distance
//!   curve and world-space trails for two agents (accelerating or not).
//! - [`delay_explorer`]: the start-offset conic for two constant-velocity
//!   agents — coefficients, offset extent, unsafe start interval, and the
//!   ellipse boundary as a drawable polyline.
//! - [`avoidance_panel`]: the velocity-obstacle cone, the cheapest avoidance
//!   action, and a re-checked preview of the resulting plan.

use serde::Deserialize;
use serde_json::{json, Value};
use swept_circle::{
    accel_collision_intervals, collision_time_extent, conic_coefficients, construct_vo,
    cv_collision_interval, delay_branches_at_time, delay_range, min_velocity_change,
    replanned_motion, unsafe_interval_segmented, vec2, AvoidanceAction, DegenerateKind,
    DelayRange, Motion, TimeInterval, Tolerance, Vec2, VoRegion,
};

#[cfg(target_arch = "wasm32")]
use wasm_bindgen::prelude::wasm_bindgen;

/// One agent as the page submits it: start position, velocity, optional
/// acceleration, activity window, and disc radius.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct AgentSpec {
    p: [f64; 2],
    v: [f64; 2],
    #[serde(default)]
    a: Option<[f64; 2]>,
    window: [f64; 2],
    radius: f64,
}

impl AgentSpec {
    // JSON cannot express non-finite numbers (serde_json rejects them while
    // parsing), so every window that reaches this point is finite and the
    // plotting code may assume as much.
    fn motion(&self) -> Result<Motion<2>, String> {
        Motion::new(
            vec2(self.p[0], self.p[1]),
            vec2(self.v[0], self.v[1]),
            self.a.map(|a| vec2(a[0], a[1])),
            self.window[0],
            self.window[1],
            self.radius,
        )
        .map_err(|err| err.to_string())
    }
}

fn parse_config<'a, T: Deserialize<'a>>(config: &'a str) -> Result<T, String> {
    serde_json::from_str(config).map_err(|err| format!("cannot parse the configuration: {err}"))
}

fn error_payload(message: String) -> String {
    json!({ "error": message }).to_string()
}

fn interval_value(w: &TimeInterval) -> Value {
    json!({ "start": w.start, "end": w.end, "instantaneous": w.instantaneous })
}

fn point_value(p: Vec2) -> Value {
    json!([p.x(), p.y()])
}

/// Samples an agent's position over its own activity window as a polyline
/// for the canvas trail.
fn trail(m: &Motion<2>, steps: usize) -> Value {
    let points: Vec<Value> = (0..=steps)
        .map(|i| {
            let t = m.t_start + m.duration() * (i as f64) / (steps as f64);
            point_value(m.position_at(t).expect("t lies inside the window"))
        })
        .collect();
    Value::Array(points)
}

fn sq_edge_dist(m1: &Motion<2>, m2: &Motion<2>, t: f64) -> f64 {
    let p1 = m1.position_at(t).expect("t lies inside the shared window");
    let p2 = m2.position_at(t).expect("t lies inside the shared window");
    let r_sum = m1.radius + m2.radius;
    (p1 - p2).norm_sq() - r_sum * r_sum
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct LabConfig {
    agent1: AgentSpec,
    agent2: AgentSpec,
    #[serde(default)]
    samples: Option<usize>,
}

fn collision_lab_impl(config: &str) -> Result<Value, String> {
    let cfg: LabConfig = parse_config(config)?;
    let m1 = cfg.agent1.motion()?;
    let m2 = cfg.agent2.motion()?;
    let t_lo = m1.t_start.max(m2.t_start);
    let t_hi = m1.t_end.min(m2.t_end);
    if t_lo >= t_hi {
        return Err(String::from("the agents' activity windows do not overlap"));
    }

    let tol = Tolerance::default();
    let accelerating = m1.accel.is_some() || m2.accel.is_some();
    let intervals: Vec<TimeInterval> = if accelerating {
        accel_collision_intervals(&m1, &m2, &tol)
    } else {
        cv_collision_interval(&m1, &m2, &tol)
            .map_err(|err| err.to_string())?
            .into_iter()
            .collect()
    };

    let steps = cfg.samples.unwrap_or(240).clamp(16, 2000);
    let curve: Vec<Value> = (0..=steps)
        .map(|i| {
            let t = t_lo + (t_hi - t_lo) * (i as f64) / (steps as f64);
            json!([t, sq_edge_dist(&m1, &m2, t)])
        })
        .collect();

    Ok(json!({
        "kind": if accelerating { "accel" } else { "cv" },
        "intervals": intervals.iter().map(interval_value).collect::<Vec<_>>(),
        "window": [t_lo, t_hi],
        "curve": curve,
        "trails": [trail(&m1, 64), trail(&m2, 64)],
        "radii": [m1.radius, m2.radius],
    }))
}

/// Collision intervals, the squared-edge-distance curve over the shared
/// window, and world-space trails for two agents.
#[cfg_attr(target_arch = "wasm32", wasm_bindgen)]
pub fn collision_lab(config: &str) -> String {
    collision_lab_impl(config)
        .map(|v| v.to_string())
        .unwrap_or_else(error_payload)
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ExplorerConfig {
    agent1: AgentSpec,
    agent2: AgentSpec,
    #[serde(default)]
    boundary_samples: Option<usize>,
}

fn delay_explorer_impl(config: &str) -> Result<Value, String> {
    let cfg: ExplorerConfig = parse_config(config)?;
    let m1 = cfg.agent1.motion()?;
    let m2 = cfg.agent2.motion()?;
    let tol = Tolerance::default();

    let cc = conic_coefficients(&m1, &m2).map_err(|err| err.to_string())?;
    let range = delay_range(&cc, &tol);
    let range_value = match range {
        DelayRange::Range { lo, hi } => json!({ "kind": "range", "lo": lo, "hi": hi }),
        DelayRange::Never => json!({ "kind": "never" }),
        DelayRange::Degenerate(kind) => {
            json!({ "kind": "degenerate", "reason": degenerate_tag(kind) })
        }
    };

    let segmented = unsafe_interval_segmented(&m1, &m2, &tol).map_err(|err| err.to_string())?;
    let scheduled = cv_collision_interval(&m1, &m2, &tol).map_err(|err| err.to_string())?;

    // Ellipse boundary as a closed polyline: upper branch left to right,
    // then lower branch back. Tangent columns at the extent edges may yield
    // no branches and are skipped.
    let extent = collision_time_extent(&cc, &tol);
    let boundary = extent.map(|(t_lo, t_hi)| {
        let steps = cfg.boundary_samples.unwrap_or(96).clamp(8, 1000);
        let mut upper = Vec::new();
        let mut lower = Vec::new();
        for i in 0..=steps {
            let t = t_lo + (t_hi - t_lo) * (i as f64) / (steps as f64);
            if let Some((lo_branch, hi_branch)) = delay_branches_at_time(&cc, t, &tol) {
                upper.push(json!([t, hi_branch]));
                lower.push(json!([t, lo_branch]));
            }
        }
        lower.reverse();
        upper.extend(lower);
        Value::Array(upper)
    });

    Ok(json!({
        "conic": { "a": cc.a, "b": cc.b, "c": cc.c, "d": cc.d, "e": cc.e, "f": cc.f },
        "delay_range": range_value,
        "unsafe_starts": segmented.unsafe_start_interval.as_ref().map(interval_value),
        "degenerate": segmented.degenerate.map(degenerate_tag),
        "scheduled_offset": m2.t_start - m1.t_start,
        "scheduled_conflict": scheduled.as_ref().map(interval_value),
        "time_extent": extent.map(|(lo, hi)| json!([lo, hi])),
        "boundary": boundary,
    }))
}

fn degenerate_tag(kind: DegenerateKind) -> &'static str {
    match kind {
        DegenerateKind::ParallelMotion => "parallel-motion",
        DegenerateKind::WaitingAgent => "waiting-agent",
    }
}

/// The start-offset conic for two constant-velocity agents: coefficients,
/// offset extent, window-honest unsafe starts, and the drawable boundary.
#[cfg_attr(target_arch = "wasm32", wasm_bindgen)]
pub fn delay_explorer(config: &str) -> String {
    delay_explorer_impl(config)
        .map(|v| v.to_string())
        .unwrap_or_else(error_payload)
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct AvoidanceConfig {
    agent1: AgentSpec,
    agent2: AgentSpec,
    vmax1: f64,
    vmax2: f64,
    #[serde(default = "default_allow_wait")]
    allow_wait: bool,
}

fn default_allow_wait() -> bool {
    true
}

fn avoidance_panel_impl(config: &str) -> Result<Value, String> {
    let cfg: AvoidanceConfig = parse_config(config)?;
    let m1 = cfg.agent1.motion()?;
    let m2 = cfg.agent2.motion()?;
    let tol = Tolerance::default();

    let t0 = m1.t_start.max(m2.t_start);
    if t0 > m1.t_end.min(m2.t_end) {
        return Err(String::from("the agents' activity windows do not overlap"));
    }
    let pos1 = m1.position_at(t0).map_err(|err| err.to_string())?;
    let pos2 = m2.position_at(t0).map_err(|err| err.to_string())?;

    let vo_value = match construct_vo(pos1, pos2, m1.radius, m2.radius, m2.v) {
        Ok(VoRegion::Total) => json!({ "kind": "total" }),
        Ok(VoRegion::Cone(vo)) => json!({
            "kind": "cone",
            "apex": point_value(vo.apex),
            "left_ray": point_value(vo.left_ray),
            "right_ray": point_value(vo.right_ray),
        }),
        Err(_) => json!({ "kind": "coincident" }),
    };

    let current = cv_collision_interval(&m1, &m2, &tol).map_err(|err| err.to_string())?;
    let action = min_velocity_change(&m1, &m2, cfg.vmax1, cfg.vmax2, cfg.allow_wait, &tol)
        .map_err(|err| err.to_string())?;

    // Re-check whichever plan came back and hand the page a drawable
    // preview of it.
    let mut verified = Value::Null;
    let mut replanned_value = Value::Null;
    let mut recheck_velocity = |agent: usize, own: &Motion<2>, other: &Motion<2>, v: Vec2| {
        if let Some(replanned) = replanned_motion(own, t0, v) {
            let safe = cv_collision_interval(&replanned, other, &tol)
                .map(|w| w.is_none())
                .unwrap_or(false);
            verified = json!(safe);
            replanned_value = json!({
                "agent": agent,
                "window": [replanned.t_start, replanned.t_end],
                "trail": trail(&replanned, 64),
            });
        } else {
            // Nothing left to traverse after the reference time.
            verified = json!(true);
        }
    };
    let action_value = match action {
        AvoidanceAction::NoCollision => json!({ "kind": "no-collision" }),
        AvoidanceAction::NewVelocityA(v) => {
            recheck_velocity(1, &m1, &m2, v);
            json!({ "kind": "new-velocity", "agent": 1, "v": point_value(v) })
        }
        AvoidanceAction::NewVelocityB(v) => {
            recheck_velocity(2, &m2, &m1, v);
            json!({ "kind": "new-velocity", "agent": 2, "v": point_value(v) })
        }
        AvoidanceAction::WaitDelay(delay) => {
            let delayed = m1.started_at(m1.t_start + delay);
            let safe = cv_collision_interval(&delayed, &m2, &tol)
                .map(|w| w.is_none())
                .unwrap_or(false);
            verified = json!(safe);
            replanned_value = json!({
                "agent": 1,
                "window": [delayed.t_start, delayed.t_end],
                "trail": trail(&delayed, 64),
            });
            json!({ "kind": "wait", "delay": delay })
        }
        AvoidanceAction::NoSolution => json!({ "kind": "no-solution" }),
    };

    Ok(json!({
        "reference_time": t0,
        "positions": [point_value(pos1), point_value(pos2)],
        "current_conflict": current.as_ref().map(interval_value),
        "vo": vo_value,
        "action": action_value,
        "replanned": replanned_value,
        "verified": verified,
    }))
}

/// The velocity-obstacle cone for agent 1, the cheapest avoidance action,
/// and a re-checked preview of the adjusted plan.
#[cfg_attr(target_arch = "wasm32", wasm_bindgen)]
pub fn avoidance_panel(config: &str) -> String {
    avoidance_panel_impl(config)
        .map(|v| v.to_string())
        .unwrap_or_else(error_payload)
}
