use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use super::graph::VertexId;
use super::instance::{GroupId, MppInstance, RobotId, Semantics};
use super::plan::Plan;

/// One broken feasibility rule. Time `t` on moves refers to the step `t -> t + 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    WrongStart {
        robot: RobotId,
        expected: VertexId,
        found: VertexId,
    },
    UnknownVertex {
        robot: RobotId,
        t: usize,
        vertex: VertexId,
    },
    IllegalMove {
        robot: RobotId,
        t: usize,
        from: VertexId,
        to: VertexId,
    },
    Meet {
        t: usize,
        robots: (RobotId, RobotId),
        vertex: VertexId,
    },
    HeadOn {
        t: usize,
        robots: (RobotId, RobotId),
        edge: (VertexId, VertexId),
    },
    GoalNotReached {
        robot: RobotId,
        goal: VertexId,
    },
    LeftGoal {
        robot: RobotId,
        t: usize,
        goal: VertexId,
    },
    GroupGoalUncovered {
        group: GroupId,
        vertex: VertexId,
    },
}

impl Violation {
    /// Time step the violation is attached to, if any.
    pub fn time(&self) -> Option<usize> {
        match self {
            Violation::WrongStart { .. } => Some(0),
            Violation::UnknownVertex { t, .. }
            | Violation::IllegalMove { t, .. }
            | Violation::Meet { t, .. }
            | Violation::HeadOn { t, .. }
            | Violation::LeftGoal { t, .. } => Some(*t),
            Violation::GoalNotReached { .. } | Violation::GroupGoalUncovered { .. } => None,
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::WrongStart { robot, expected, found } => {
                write!(f, "robot {robot} starts at {found}, expected {expected}")
            }
            Violation::UnknownVertex { robot, t, vertex } => {
                write!(f, "t={t}: robot {robot} at unknown vertex {vertex}")
            }
            Violation::IllegalMove { robot, t, from, to } => {
                write!(f, "t={t}: robot {robot} jumps {from}->{to} without an edge")
            }
            Violation::Meet { t, robots, vertex } => write!(
                f,
                "t={t}: meet collision of robots {} and {} at vertex {vertex}",
                robots.0, robots.1
            ),
            Violation::HeadOn { t, robots, edge } => write!(
                f,
                "t={t}: head-on collision of robots {} and {} on edge ({}, {})",
                robots.0, robots.1, edge.0, edge.1
            ),
            Violation::GoalNotReached { robot, goal } => {
                write!(f, "robot {robot} never reaches goal {goal}")
            }
            Violation::LeftGoal { robot, t, goal } => {
                write!(f, "t={t}: robot {robot} leaves goal {goal} after reaching it")
            }
            Violation::GroupGoalUncovered { group, vertex } => {
                write!(f, "goal {vertex} of group {group} is not covered at the end")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ValidateError {
    #[error("plan has {plan} robots, instance has {instance}")]
    RobotCountMismatch { plan: usize, instance: usize },
    #[error("horizon 0 but the start configuration is not the goal configuration")]
    ZeroHorizon,
}

/// Checks a plan against the instance's feasibility rules and reports every violation.
///
/// Labeled instances apply the freeze rule: a robot that reaches its goal stays there.
/// Grouped instances only require the final configuration to cover each group's goals.
/// Synchronized rotations along fully occupied cycles are legal; only meets and
/// head-on swaps count as collisions.
pub fn validate_plan(
    instance: &MppInstance,
    plan: &Plan,
) -> Result<ValidationReport, ValidateError> {
    if plan.robot_count() != instance.robot_count() {
        return Err(ValidateError::RobotCountMismatch {
            plan: plan.robot_count(),
            instance: instance.robot_count(),
        });
    }
    let graph = instance.graph();
    let horizon = plan.horizon();
    if horizon == 0 && !instance.is_complete(&instance.starts()) {
        return Err(ValidateError::ZeroHorizon);
    }

    let mut violations = Vec::new();
    let mut vertices_ok = true;
    for robot in instance.robots() {
        let path = plan.path(robot.id);
        if path[0] != robot.start {
            violations.push(Violation::WrongStart {
                robot: robot.id,
                expected: robot.start,
                found: path[0],
            });
        }
        for (t, &v) in path.iter().enumerate() {
            if !graph.contains(v) {
                vertices_ok = false;
                violations.push(Violation::UnknownVertex {
                    robot: robot.id,
                    t,
                    vertex: v,
                });
            }
        }
    }
    if !vertices_ok {
        return Ok(ValidationReport { violations });
    }

    for robot in 0..plan.robot_count() {
        for (t, w) in plan.path(robot).windows(2).enumerate() {
            if w[0] != w[1] && !graph.has_edge(w[0], w[1]) {
                violations.push(Violation::IllegalMove {
                    robot,
                    t,
                    from: w[0],
                    to: w[1],
                });
            }
        }
    }

    let mut occupant = vec![None::<RobotId>; graph.vertex_count()];
    for t in 0..=horizon {
        occupant.iter_mut().for_each(|o| *o = None);
        for robot in 0..plan.robot_count() {
            let v = plan.position(robot, t);
            match occupant[v] {
                Some(other) => violations.push(Violation::Meet {
                    t,
                    robots: (other, robot),
                    vertex: v,
                }),
                None => occupant[v] = Some(robot),
            }
        }
        if t == horizon {
            break;
        }
        let mut moves: BTreeMap<(VertexId, VertexId), Vec<RobotId>> = BTreeMap::new();
        for robot in 0..plan.robot_count() {
            let (from, to) = (plan.position(robot, t), plan.position(robot, t + 1));
            if from != to {
                moves.entry((from, to)).or_default().push(robot);
            }
        }
        for (&(from, to), forward) in &moves {
            if from > to {
                continue;
            }
            if let Some(backward) = moves.get(&(to, from)) {
                for &a in forward {
                    for &b in backward {
                        violations.push(Violation::HeadOn {
                            t,
                            robots: (a.min(b), a.max(b)),
                            edge: (from, to),
                        });
                    }
                }
            }
        }
    }

    match instance.semantics() {
        Semantics::Labeled => {
            for robot in instance.robots() {
                let goal = robot.goal.expect("labeled robot has a goal");
                let path = plan.path(robot.id);
                match path.iter().position(|&v| v == goal) {
                    None => violations.push(Violation::GoalNotReached {
                        robot: robot.id,
                        goal,
                    }),
                    Some(arrival) => {
                        if let Some(offset) = path[arrival..].iter().position(|&v| v != goal) {
                            violations.push(Violation::LeftGoal {
                                robot: robot.id,
                                t: arrival + offset - 1,
                                goal,
                            });
                        }
                    }
                }
            }
        }
        Semantics::Grouped => {
            let last = plan.configuration(horizon);
            for (&group, goals) in instance.groups() {
                for &g in goals {
                    let covered = instance
                        .robots()
                        .iter()
                        .any(|r| r.group == Some(group) && last[r.id] == g);
                    if !covered {
                        violations.push(Violation::GroupGoalUncovered { group, vertex: g });
                    }
                }
            }
        }
    }
    Ok(ValidationReport { violations })
}
