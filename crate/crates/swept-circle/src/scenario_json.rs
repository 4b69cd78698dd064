//! JSON scenario files.
//!
//! The on-disk schema mirrors [`Scenario`] with plain arrays for vectors:
//!
//! ```json
//! {
//!   "dimension": 2,
//!   "name": "head-on",
//!   "agents": [
//!     {
//!       "id": "A",
//!       "radius": 1.0,
//!       "segments": [
//!         { "p0": [0.0, 0.0], "v": [1.0, 0.0], "t_start": 0.0, "t_end": 10.0 }
//!       ]
//!     }
//!   ]
//! }
//! ```
//!
//! `accel` is optional per segment; `name` is optional; unknown fields are
//! rejected. All times are seconds, all distances meters. Numbers are
//! rounded to nine significant digits on output so serialized files are
//! reproducible byte for byte.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::motion::{Motion, MotionError, Path};
use crate::scenario::Scenario;
use crate::vector::VecD;

/// Raw scenario document as stored on disk.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub dimension: u8,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub agents: Vec<AgentFile>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AgentFile {
    pub id: String,
    pub radius: f64,
    pub segments: Vec<SegmentFile>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SegmentFile {
    pub p0: Vec<f64>,
    pub v: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub accel: Option<Vec<f64>>,
    pub t_start: f64,
    pub t_end: f64,
}

/// A parsed scenario in its dimension-typed form.
#[derive(Clone, Debug, PartialEq)]
pub enum LoadedScenario {
    D2(Scenario<2>),
    D3(Scenario<3>),
}

impl LoadedScenario {
    pub fn dimension(&self) -> u8 {
        match self {
            LoadedScenario::D2(_) => 2,
            LoadedScenario::D3(_) => 3,
        }
    }

    pub fn name(&self) -> &str {
        match self {
            LoadedScenario::D2(s) => &s.name,
            LoadedScenario::D3(s) => &s.name,
        }
    }
}

#[derive(Debug, Error)]
pub enum ScenarioParseError {
    #[error("scenario JSON is malformed")]
    Json(#[from] serde_json::Error),
    #[error("dimension must be 2 or 3, got {0}")]
    UnsupportedDimension(u8),
    #[error("agent {agent:?} segment {segment}: {field} has {got} components, expected {want}")]
    WrongArity {
        agent: String,
        segment: usize,
        field: &'static str,
        got: usize,
        want: usize,
    },
    #[error("agent {agent:?} segment {segment} is invalid: {source}")]
    BadSegment {
        agent: String,
        segment: usize,
        source: MotionError,
    },
}

/// Parses a scenario document from JSON text.
pub fn parse_scenario(json: &str) -> Result<LoadedScenario, ScenarioParseError> {
    let file: ScenarioFile = serde_json::from_str(json)?;
    scenario_from_file(&file)
}

/// Converts a raw document into the dimension-typed scenario.
pub fn scenario_from_file(file: &ScenarioFile) -> Result<LoadedScenario, ScenarioParseError> {
    match file.dimension {
        2 => Ok(LoadedScenario::D2(build_scenario::<2>(file)?)),
        3 => Ok(LoadedScenario::D3(build_scenario::<3>(file)?)),
        d => Err(ScenarioParseError::UnsupportedDimension(d)),
    }
}

fn build_scenario<const D: usize>(
    file: &ScenarioFile,
) -> Result<Scenario<D>, ScenarioParseError> {
    let mut agents = Vec::with_capacity(file.agents.len());
    for agent in &file.agents {
        let mut segments = Vec::with_capacity(agent.segments.len());
        for (index, seg) in agent.segments.iter().enumerate() {
            let p0 = vector_from(&seg.p0, "p0", &agent.id, index)?;
            let v = vector_from(&seg.v, "v", &agent.id, index)?;
            let accel = seg
                .accel
                .as_deref()
                .map(|a| vector_from(a, "accel", &agent.id, index))
                .transpose()?;
            let motion = Motion::new(p0, v, accel, seg.t_start, seg.t_end, agent.radius)
                .map_err(|source| ScenarioParseError::BadSegment {
                    agent: agent.id.clone(),
                    segment: index,
                    source,
                })?;
            segments.push(motion);
        }
        agents.push(Path {
            id: agent.id.clone(),
            segments,
        });
    }
    Ok(Scenario {
        name: file.name.clone().unwrap_or_default(),
        agents,
    })
}

fn vector_from<const D: usize>(
    components: &[f64],
    field: &'static str,
    agent: &str,
    segment: usize,
) -> Result<VecD<D>, ScenarioParseError> {
    if components.len() != D {
        return Err(ScenarioParseError::WrongArity {
            agent: agent.to_string(),
            segment,
            field,
            got: components.len(),
            want: D,
        });
    }
    let mut out = VecD::zero();
    for (i, &x) in components.iter().enumerate() {
        out[i] = x;
    }
    Ok(out)
}

/// Converts a scenario back into its file form, rounding every number to
/// nine significant digits.
pub fn scenario_to_file<const D: usize>(scenario: &Scenario<D>) -> ScenarioFile {
    let agents = scenario
        .agents
        .iter()
        .map(|path| {
            let radius = path
                .segments
                .first()
                .map_or(0.0, |m| round_significant(m.radius));
            AgentFile {
                id: path.id.clone(),
                radius,
                segments: path
                    .segments
                    .iter()
                    .map(|m| SegmentFile {
                        p0: components(m.p0),
                        v: components(m.v),
                        accel: m.accel.map(components),
                        t_start: round_significant(m.t_start),
                        t_end: round_significant(m.t_end),
                    })
                    .collect(),
            }
        })
        .collect();
    ScenarioFile {
        dimension: D as u8,
        name: (!scenario.name.is_empty()).then(|| scenario.name.clone()),
        agents,
    }
}

/// Serializes a scenario to pretty-printed JSON with a trailing newline.
pub fn scenario_to_json<const D: usize>(scenario: &Scenario<D>) -> String {
    let file = scenario_to_file(scenario);
    let mut json = serde_json::to_string_pretty(&file)
        .expect("scenario files contain only finite plain data");
    json.push('\n');
    json
}

fn components<const D: usize>(v: VecD<D>) -> Vec<f64> {
    (0..D).map(|i| round_significant(v[i])).collect()
}

/// Rounds to nine significant decimal digits; used for reproducible output.
fn round_significant(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{x:.8e}").parse().expect("formatted float reparses")
}
