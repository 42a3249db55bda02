use std::collections::{BTreeMap, BTreeSet, HashSet};

use thiserror::Error;

use super::graph::{Graph, VertexId};

pub type RobotId = usize;
pub type GroupId = usize;

/// How goals are interpreted.
///
/// `Labeled`: every robot has its own goal and freezes there on first arrival.
/// `Grouped`: robots of a group are interchangeable; the plan is complete when
/// the final configuration covers each group's goal set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Semantics {
    Labeled,
    Grouped,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Robot {
    pub id: RobotId,
    pub start: VertexId,
    pub goal: Option<VertexId>,
    pub group: Option<GroupId>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InstanceError {
    #[error("instance has no robots")]
    NoRobots,
    #[error("robot ids must be dense 0..n; position {position} holds id {id}")]
    RobotIdNotDense { position: usize, id: RobotId },
    #[error("robot {robot} references vertex {vertex} which is not in the graph")]
    UnknownVertex { robot: RobotId, vertex: VertexId },
    #[error("robots {0} and {1} share start vertex {2}")]
    SharedStart(RobotId, RobotId, VertexId),
    #[error("robots {0} and {1} share goal vertex {2}")]
    SharedGoal(RobotId, RobotId, VertexId),
    #[error("robot {0} must have exactly one of goal or group")]
    GoalSemantics(RobotId),
    #[error("instance mixes labeled and grouped robots")]
    MixedSemantics,
    #[error("robot {robot} refers to unknown group {group}")]
    UnknownGroup { robot: RobotId, group: GroupId },
    #[error("group {group} has {goals} goals for {robots} robots")]
    GroupSizeMismatch {
        group: GroupId,
        goals: usize,
        robots: usize,
    },
    #[error("goal vertex {0} is claimed by more than one group")]
    OverlappingGroups(VertexId),
    #[error("group goal vertex {0} is not in the graph")]
    UnknownGroupGoal(VertexId),
}

/// A multi-robot path planning instance: graph, robots, and their start/goal data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MppInstance {
    graph: Graph,
    robots: Vec<Robot>,
    groups: BTreeMap<GroupId, Vec<VertexId>>,
    semantics: Semantics,
}

impl MppInstance {
    /// Labeled instance from parallel start/goal vectors; robot `i` gets id `i`.
    pub fn labeled(
        graph: Graph,
        starts: &[VertexId],
        goals: &[VertexId],
    ) -> Result<Self, InstanceError> {
        assert_eq!(starts.len(), goals.len(), "start/goal length mismatch");
        let robots = starts
            .iter()
            .zip(goals)
            .enumerate()
            .map(|(id, (&start, &goal))| Robot {
                id,
                start,
                goal: Some(goal),
                group: None,
            })
            .collect();
        Self::new(graph, robots, BTreeMap::new())
    }

    pub fn new(
        graph: Graph,
        robots: Vec<Robot>,
        groups: BTreeMap<GroupId, Vec<VertexId>>,
    ) -> Result<Self, InstanceError> {
        if robots.is_empty() {
            return Err(InstanceError::NoRobots);
        }
        for (position, robot) in robots.iter().enumerate() {
            if robot.id != position {
                return Err(InstanceError::RobotIdNotDense {
                    position,
                    id: robot.id,
                });
            }
            if robot.goal.is_some() == robot.group.is_some() {
                return Err(InstanceError::GoalSemantics(robot.id));
            }
            for vertex in std::iter::once(robot.start).chain(robot.goal) {
                if !graph.contains(vertex) {
                    return Err(InstanceError::UnknownVertex {
                        robot: robot.id,
                        vertex,
                    });
                }
            }
        }
        let grouped = robots[0].group.is_some();
        if robots.iter().any(|r| r.group.is_some() != grouped) {
            return Err(InstanceError::MixedSemantics);
        }

        let mut seen = vec![None::<RobotId>; graph.vertex_count()];
        for robot in &robots {
            if let Some(other) = seen[robot.start].replace(robot.id) {
                return Err(InstanceError::SharedStart(other, robot.id, robot.start));
            }
        }
        if grouped {
            let mut claimed = HashSet::new();
            for goals in groups.values() {
                for &g in goals {
                    if !graph.contains(g) {
                        return Err(InstanceError::UnknownGroupGoal(g));
                    }
                    if !claimed.insert(g) {
                        return Err(InstanceError::OverlappingGroups(g));
                    }
                }
            }
            for robot in &robots {
                let group = robot.group.unwrap_or_default();
                if !groups.contains_key(&group) {
                    return Err(InstanceError::UnknownGroup {
                        robot: robot.id,
                        group,
                    });
                }
            }
            for (&group, goals) in &groups {
                let members = robots.iter().filter(|r| r.group == Some(group)).count();
                if members != goals.len() {
                    return Err(InstanceError::GroupSizeMismatch {
                        group,
                        goals: goals.len(),
                        robots: members,
                    });
                }
            }
        } else {
            let mut seen = vec![None::<RobotId>; graph.vertex_count()];
            for robot in &robots {
                let goal = robot.goal.unwrap_or_default();
                if let Some(other) = seen[goal].replace(robot.id) {
                    return Err(InstanceError::SharedGoal(other, robot.id, goal));
                }
            }
        }
        let groups = if grouped {
            groups
                .into_iter()
                .map(|(g, mut goals)| {
                    goals.sort_unstable();
                    (g, goals)
                })
                .collect()
        } else {
            BTreeMap::new()
        };
        Ok(MppInstance {
            graph,
            robots,
            groups,
            semantics: if grouped {
                Semantics::Grouped
            } else {
                Semantics::Labeled
            },
        })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn robots(&self) -> &[Robot] {
        &self.robots
    }

    pub fn robot_count(&self) -> usize {
        self.robots.len()
    }

    pub fn groups(&self) -> &BTreeMap<GroupId, Vec<VertexId>> {
        &self.groups
    }

    pub fn semantics(&self) -> Semantics {
        self.semantics
    }

    pub fn starts(&self) -> Vec<VertexId> {
        self.robots.iter().map(|r| r.start).collect()
    }

    /// Per-robot goals; `None` for grouped instances.
    pub fn goals(&self) -> Option<Vec<VertexId>> {
        self.robots.iter().map(|r| r.goal).collect()
    }

    /// Goal vertices acceptable for `robot`: its own goal, or its group's goal set.
    pub fn goal_set(&self, robot: RobotId) -> &[VertexId] {
        let r = &self.robots[robot];
        match (&r.goal, r.group) {
            (Some(goal), _) => std::slice::from_ref(goal),
            (None, Some(group)) => &self.groups[&group],
            (None, None) => &[],
        }
    }

    /// True when the placement covers every goal (labeled: each robot on its goal).
    pub fn is_complete(&self, placement: &[VertexId]) -> bool {
        match self.semantics {
            Semantics::Labeled => self
                .robots
                .iter()
                .all(|r| Some(placement[r.id]) == r.goal),
            Semantics::Grouped => self.robots.iter().all(|r| {
                let group = r.group.unwrap_or_default();
                self.groups[&group].binary_search(&placement[r.id]).is_ok()
            }),
        }
    }

    /// `table[robot][v]` = hop distance from `v` to the nearest goal of `robot`.
    pub fn goal_distance_table(&self) -> Vec<Vec<usize>> {
        let n = self.graph.vertex_count();
        let mut per_goal: BTreeMap<VertexId, Vec<usize>> = BTreeMap::new();
        for robot in &self.robots {
            for &g in self.goal_set(robot.id) {
                per_goal.entry(g).or_insert_with(|| {
                    self.graph
                        .distances_from(g)
                        .into_iter()
                        .map(|d| d.expect("graph is connected"))
                        .collect()
                });
            }
        }
        self.robots
            .iter()
            .map(|robot| {
                (0..n)
                    .map(|v| {
                        self.goal_set(robot.id)
                            .iter()
                            .map(|g| per_goal[g][v])
                            .min()
                            .unwrap_or(0)
                    })
                    .collect()
            })
            .collect()
    }

    /// Shortest start-to-goal distance of each robot (nearest group goal when grouped).
    pub fn shortest_distances(&self) -> Vec<usize> {
        let table = self.goal_distance_table();
        self.robots
            .iter()
            .map(|r| table[r.id][r.start])
            .collect()
    }

    /// The same graph and robots with start and goal roles swapped (labeled only).
    pub fn reversed(&self) -> Option<MppInstance> {
        let goals = self.goals()?;
        MppInstance::labeled(self.graph.clone(), &goals, &self.starts()).ok()
    }

    pub fn group_members(&self, group: GroupId) -> BTreeSet<RobotId> {
        self.robots
            .iter()
            .filter(|r| r.group == Some(group))
            .map(|r| r.id)
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> Graph {
        Graph::new(3, [(0, 1), (1, 2), (2, 0)]).unwrap()
    }

    #[test]
    fn labeled_requires_injective_configurations() {
        assert_eq!(
            MppInstance::labeled(triangle(), &[0, 0], &[1, 2]),
            Err(InstanceError::SharedStart(0, 1, 0))
        );
        assert_eq!(
            MppInstance::labeled(triangle(), &[0, 1], &[2, 2]),
            Err(InstanceError::SharedGoal(0, 1, 2))
        );
        assert!(MppInstance::labeled(triangle(), &[0, 1], &[1, 0]).is_ok());
    }

    #[test]
    fn grouped_validation() {
        let robots = vec![
            Robot { id: 0, start: 0, goal: None, group: Some(0) },
            Robot { id: 1, start: 1, goal: None, group: Some(0) },
        ];
        let mut groups = BTreeMap::new();
        groups.insert(0, vec![2]);
        assert!(matches!(
            MppInstance::new(triangle(), robots.clone(), groups.clone()),
            Err(InstanceError::GroupSizeMismatch { .. })
        ));
        groups.insert(0, vec![2, 1]);
        let inst = MppInstance::new(triangle(), robots, groups).unwrap();
        assert_eq!(inst.semantics(), Semantics::Grouped);
        assert_eq!(inst.goal_set(1), &[1, 2]);
        assert!(inst.is_complete(&[2, 1]));
        assert!(!inst.is_complete(&[0, 1]));
    }

    #[test]
    fn goal_and_group_are_exclusive() {
        let robots = vec![Robot { id: 0, start: 0, goal: Some(1), group: Some(0) }];
        assert_eq!(
            MppInstance::new(triangle(), robots, BTreeMap::new()),
            Err(InstanceError::GoalSemantics(0))
        );
    }
}
