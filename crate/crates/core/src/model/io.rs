//! JSON file formats for instances and plans.
//!
//! Instance: `{"vertices":[{"id":0,"label":"a"}], "edges":[[0,1]],
//! "robots":[{"id":0,"start":0,"goal":1}], "groups":{"0":[1]}}`.
//! Plan: `{"horizon":T, "paths":{"0":[v_0, ..., v_T]}}`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::graph::{Graph, GraphError, VertexId};
use super::instance::{GroupId, InstanceError, MppInstance, Robot, RobotId};
use super::plan::Plan;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("vertex ids must be dense 0..n; position {position} holds id {id}")]
    VertexIdNotDense { position: usize, id: VertexId },
    #[error("invalid graph: {0}")]
    Graph(#[from] GraphError),
    #[error("invalid instance: {0}")]
    Instance(#[from] InstanceError),
    #[error("plan paths must cover robots 0..n exactly")]
    PlanRobots,
    #[error("every plan path must hold horizon + 1 = {expected} vertices (robot {robot} has {got})")]
    PlanLength {
        robot: RobotId,
        expected: usize,
        got: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexRecord {
    pub id: VertexId,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RobotRecord {
    pub id: RobotId,
    pub start: VertexId,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub goal: Option<VertexId>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group: Option<GroupId>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceFile {
    pub vertices: Vec<VertexRecord>,
    pub edges: Vec<[VertexId; 2]>,
    pub robots: Vec<RobotRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub groups: Option<BTreeMap<GroupId, Vec<VertexId>>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlanFile {
    pub horizon: usize,
    pub paths: BTreeMap<RobotId, Vec<VertexId>>,
}

impl From<&MppInstance> for InstanceFile {
    fn from(instance: &MppInstance) -> Self {
        let graph = instance.graph();
        InstanceFile {
            vertices: (0..graph.vertex_count())
                .map(|id| VertexRecord {
                    id,
                    label: graph.label(id).map(str::to_owned),
                })
                .collect(),
            edges: graph.edges().iter().map(|&(u, v)| [u, v]).collect(),
            robots: instance
                .robots()
                .iter()
                .map(|r| RobotRecord {
                    id: r.id,
                    start: r.start,
                    goal: r.goal,
                    group: r.group,
                })
                .collect(),
            groups: (!instance.groups().is_empty()).then(|| instance.groups().clone()),
        }
    }
}

impl TryFrom<InstanceFile> for MppInstance {
    type Error = FormatError;

    fn try_from(file: InstanceFile) -> Result<Self, Self::Error> {
        let mut vertices = file.vertices;
        vertices.sort_by_key(|v| v.id);
        for (position, v) in vertices.iter().enumerate() {
            if v.id != position {
                return Err(FormatError::VertexIdNotDense {
                    position,
                    id: v.id,
                });
            }
        }
        let labels = vertices.into_iter().map(|v| v.label).collect();
        let graph = Graph::with_labels(labels, file.edges.iter().map(|e| (e[0], e[1])))?;
        let mut robots: Vec<Robot> = file
            .robots
            .into_iter()
            .map(|r| Robot {
                id: r.id,
                start: r.start,
                goal: r.goal,
                group: r.group,
            })
            .collect();
        robots.sort_by_key(|r| r.id);
        Ok(MppInstance::new(graph, robots, file.groups.unwrap_or_default())?)
    }
}

impl From<&Plan> for PlanFile {
    fn from(plan: &Plan) -> Self {
        PlanFile {
            horizon: plan.horizon(),
            paths: plan.paths().iter().cloned().enumerate().collect(),
        }
    }
}

impl TryFrom<PlanFile> for Plan {
    type Error = FormatError;

    fn try_from(file: PlanFile) -> Result<Self, Self::Error> {
        if file.paths.is_empty() || file.paths.keys().enumerate().any(|(i, &id)| i != id) {
            return Err(FormatError::PlanRobots);
        }
        for (&robot, path) in &file.paths {
            if path.len() != file.horizon + 1 {
                return Err(FormatError::PlanLength {
                    robot,
                    expected: file.horizon + 1,
                    got: path.len(),
                });
            }
        }
        Plan::from_paths(file.paths.into_values().collect()).ok_or(FormatError::PlanRobots)
    }
}

pub fn instance_to_json(instance: &MppInstance) -> String {
    serde_json::to_string_pretty(&InstanceFile::from(instance)).expect("serializable")
}

pub fn instance_from_json(text: &str) -> Result<MppInstance, FormatError> {
    let file: InstanceFile = serde_json::from_str(text)?;
    file.try_into()
}

pub fn plan_to_json(plan: &Plan) -> String {
    serde_json::to_string_pretty(&PlanFile::from(plan)).expect("serializable")
}

pub fn plan_from_json(text: &str) -> Result<Plan, FormatError> {
    let file: PlanFile = serde_json::from_str(text)?;
    file.try_into()
}
