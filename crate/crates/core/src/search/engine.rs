//! Best-first search over the joint configuration space.
//!
//! One engine serves every objective: the primary objective is minimized
//! (A* with admissible, consistent per-robot distance bounds) while an optional
//! second objective is held below a bound. The state key carries exactly the
//! information the two objectives need:
//!
//! * `settled`: robots that will never move again. Labeled instances settle a
//!   robot on its first goal visit (freeze rule). Grouped instances only track
//!   settling when total arrival time is involved, and then settling is a choice
//!   made on a robot's last move.
//! * `time`: elapsed steps, when makespan is bounded.
//! * `secondary`: accumulated value of a bounded sum objective.
//! * `dists`: per-robot traversal counts, when max distance is involved.

use std::cmp::Reverse;
use std::collections::hash_map::Entry;
use std::collections::{BinaryHeap, HashMap};
use std::time::Instant;

use crate::model::{MppInstance, Objective, Plan, Semantics};

use super::successors::{for_each_joint_move, RobotSet};
use super::{Budget, SearchError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Query {
    pub primary: Objective,
    pub bound: Option<(Objective, usize)>,
}

impl Query {
    pub fn minimize(primary: Objective) -> Self {
        Query {
            primary,
            bound: None,
        }
    }

    pub fn bounded(primary: Objective, secondary: Objective, limit: usize) -> Self {
        Query {
            primary,
            bound: Some((secondary, limit)),
        }
    }

    fn involves(&self, objective: Objective) -> bool {
        self.primary == objective || self.bound.map(|b| b.0) == Some(objective)
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Found {
    pub plan: Plan,
    pub value: usize,
    pub expanded: usize,
}

#[derive(Debug, Clone, Copy)]
struct Tracking {
    settled: bool,
    time: bool,
    secondary: bool,
    dists: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct Key {
    config: Box<[u16]>,
    settled: u64,
    time: u32,
    secondary: u32,
    dists: Box<[u16]>,
}

struct Node {
    key: Key,
    parent: usize,
    g: usize,
    time: usize,
    closed: bool,
}

const ROOT: usize = usize::MAX;

struct Engine<'a> {
    instance: &'a MppInstance,
    query: Query,
    budget: &'a Budget,
    tracking: Tracking,
    goal_dist: Vec<Vec<u16>>,
    robots: usize,
}

pub(crate) fn run(
    instance: &MppInstance,
    query: Query,
    budget: &Budget,
) -> Result<Found, SearchError> {
    let robots = instance.robot_count();
    if robots > RobotSet::MAX_ROBOTS {
        return Err(SearchError::TooManyRobots(robots));
    }
    if instance.graph().vertex_count() > u16::MAX as usize {
        return Err(SearchError::TooManyVertices(instance.graph().vertex_count()));
    }
    if let Some((secondary, _)) = query.bound {
        assert_ne!(secondary, query.primary, "bound must be on a different objective");
    }
    let grouped = instance.semantics() == Semantics::Grouped;
    let tracking = Tracking {
        settled: !grouped || query.involves(Objective::TotalArrival),
        time: query.bound.map(|b| b.0) == Some(Objective::Makespan),
        secondary: query.bound.is_some_and(|b| b.0.is_sum()),
        dists: query.involves(Objective::MaxDistance),
    };
    let goal_dist = instance
        .goal_distance_table()
        .into_iter()
        .map(|row| row.into_iter().map(|d| d as u16).collect())
        .collect();
    Engine {
        instance,
        query,
        budget,
        tracking,
        goal_dist,
        robots,
    }
    .search()
}

impl Engine<'_> {
    fn d(&self, robot: usize, vertex: u16) -> usize {
        self.goal_dist[robot][vertex as usize] as usize
    }

    fn is_settled(&self, key: &Key, robot: usize) -> bool {
        self.tracking.settled && RobotSet::from_bits(key.settled).contains(robot)
    }

    /// Lower bound on the remaining cost of `objective` from `key`.
    fn remaining(&self, key: &Key, objective: Objective) -> usize {
        let robots = 0..self.robots;
        match objective {
            Objective::TotalArrival => robots
                .filter(|&r| !self.is_settled(key, r))
                .map(|r| self.d(r, key.config[r]).max(1))
                .sum(),
            Objective::Makespan => robots
                .filter(|&r| !self.is_settled(key, r))
                .map(|r| {
                    let d = self.d(r, key.config[r]);
                    if self.tracking.settled {
                        d.max(1)
                    } else {
                        d
                    }
                })
                .max()
                .unwrap_or(0),
            Objective::TotalDistance => robots.map(|r| self.d(r, key.config[r])).sum(),
            Objective::MaxDistance => 0,
        }
    }

    /// Lower bound on the final max distance given traversal counts so far.
    fn max_distance_bound(&self, key: &Key) -> usize {
        (0..self.robots)
            .map(|r| key.dists[r] as usize + self.d(r, key.config[r]))
            .max()
            .unwrap_or(0)
    }

    fn priority(&self, key: &Key, g: usize) -> usize {
        match self.query.primary {
            Objective::MaxDistance => self.max_distance_bound(key).max(g),
            other => g + self.remaining(key, other),
        }
    }

    fn within_bound(&self, key: &Key, time: usize) -> bool {
        let Some((secondary, limit)) = self.query.bound else {
            return true;
        };
        let lower = match secondary {
            Objective::Makespan => time + self.remaining(key, Objective::Makespan),
            Objective::MaxDistance => self.max_distance_bound(key),
            sum => key.secondary as usize + self.remaining(key, sum),
        };
        lower <= limit
    }

    fn is_goal(&self, key: &Key) -> bool {
        if self.tracking.settled {
            RobotSet::from_bits(key.settled).is_full(self.robots)
        } else {
            let placement: Vec<usize> = key.config.iter().map(|&v| v as usize).collect();
            self.instance.is_complete(&placement)
        }
    }

    fn roots(&self) -> Vec<Key> {
        let config: Box<[u16]> = self.instance.starts().iter().map(|&v| v as u16).collect();
        let dists: Box<[u16]> = if self.tracking.dists {
            vec![0; self.robots].into()
        } else {
            Box::new([])
        };
        let base = Key {
            config,
            settled: 0,
            time: 0,
            secondary: 0,
            dists,
        };
        match self.instance.semantics() {
            Semantics::Labeled => {
                let mut key = base;
                for robot in self.instance.robots() {
                    if robot.goal == Some(key.config[robot.id] as usize) {
                        key.settled |= 1 << robot.id;
                    }
                }
                vec![key]
            }
            Semantics::Grouped if self.tracking.settled => {
                let eligible: Vec<usize> = (0..self.robots)
                    .filter(|&r| self.d(r, base.config[r]) == 0)
                    .collect();
                subsets(&eligible)
                    .map(|bits| Key {
                        settled: bits,
                        ..base.clone()
                    })
                    .collect()
            }
            Semantics::Grouped => vec![base],
        }
    }

    fn search(&self) -> Result<Found, SearchError> {
        let started = Instant::now();
        let mut arena: Vec<Node> = Vec::new();
        let mut index: HashMap<Key, usize> = HashMap::new();
        let mut heap: BinaryHeap<Reverse<(usize, usize, usize, usize)>> = BinaryHeap::new();
        let mut seq = 0usize;
        let mut horizon_hit = false;

        for key in self.roots() {
            if !self.within_bound(&key, 0) {
                continue;
            }
            let f = self.priority(&key, 0);
            index.insert(key.clone(), arena.len());
            heap.push(Reverse((f, seq, arena.len(), 0)));
            seq += 1;
            arena.push(Node {
                key,
                parent: ROOT,
                g: 0,
                time: 0,
                closed: false,
            });
        }

        let n = self.robots;
        let graph = self.instance.graph();
        let mut buffer: Vec<u32> = Vec::new();
        let mut expanded = 0usize;

        while let Some(Reverse((f, _, idx, g))) = heap.pop() {
            if arena[idx].closed || g > arena[idx].g {
                continue;
            }
            arena[idx].closed = true;
            if self.is_goal(&arena[idx].key) {
                return Ok(Found {
                    plan: reconstruct(&arena, idx),
                    value: g,
                    expanded,
                });
            }
            expanded += 1;
            if expanded > self.budget.state_limit
                || (expanded.is_multiple_of(256) && started.elapsed() > self.budget.time_limit)
            {
                return Err(SearchError::BudgetExhausted {
                    expanded,
                    best_bound: f,
                });
            }
            let time = arena[idx].time;
            if time >= self.budget.horizon_limit {
                horizon_hit = true;
                continue;
            }

            let key = arena[idx].key.clone();
            let current: Vec<u32> = key.config.iter().map(|&v| v as u32).collect();
            let settled = RobotSet::from_bits(key.settled);
            buffer.clear();
            for_each_joint_move(
                graph,
                &current,
                |r| !(self.tracking.settled && settled.contains(r)),
                |next| buffer.extend_from_slice(next),
            );
            let unsettled_before = if self.tracking.settled {
                n - settled.len()
            } else {
                n
            };

            for next in buffer.chunks(n) {
                let movers: Vec<usize> = (0..n).filter(|&r| next[r] != current[r]).collect();
                if movers.is_empty() {
                    continue;
                }
                let config: Box<[u16]> = next.iter().map(|&v| v as u16).collect();
                let dists: Box<[u16]> = if self.tracking.dists {
                    let mut d = key.dists.clone();
                    for &r in &movers {
                        d[r] += 1;
                    }
                    d
                } else {
                    Box::new([])
                };
                let step_cost = |objective: Objective| match objective {
                    Objective::TotalArrival => unsettled_before,
                    Objective::TotalDistance => movers.len(),
                    _ => 0,
                };
                let new_g = match self.query.primary {
                    Objective::TotalArrival | Objective::TotalDistance => {
                        g + step_cost(self.query.primary)
                    }
                    Objective::Makespan => g + 1,
                    Objective::MaxDistance => dists.iter().copied().max().unwrap_or(0) as usize,
                };
                let secondary = match self.query.bound {
                    Some((sum, _)) if self.tracking.secondary => {
                        key.secondary + step_cost(sum) as u32
                    }
                    _ => 0,
                };
                let new_time = time + 1;

                for settled_bits in self.settle_options(&key, settled, next, &movers) {
                    let child = Key {
                        config: config.clone(),
                        settled: settled_bits,
                        time: if self.tracking.time { new_time as u32 } else { 0 },
                        secondary,
                        dists: dists.clone(),
                    };
                    if !self.within_bound(&child, new_time) {
                        continue;
                    }
                    let f_child = self.priority(&child, new_g);
                    let slot = match index.entry(child) {
                        Entry::Occupied(e) => {
                            let slot = *e.get();
                            let node = &mut arena[slot];
                            if node.closed || node.g <= new_g {
                                continue;
                            }
                            node.g = new_g;
                            node.parent = idx;
                            node.time = new_time;
                            slot
                        }
                        Entry::Vacant(e) => {
                            let slot = arena.len();
                            arena.push(Node {
                                key: e.key().clone(),
                                parent: idx,
                                g: new_g,
                                time: new_time,
                                closed: false,
                            });
                            e.insert(slot);
                            slot
                        }
                    };
                    heap.push(Reverse((f_child, seq, slot, new_g)));
                    seq += 1;
                }
            }
        }
        if horizon_hit {
            Err(SearchError::NoSolutionWithinHorizon {
                horizon: self.budget.horizon_limit,
            })
        } else {
            Err(SearchError::Infeasible)
        }
    }

    /// Settled sets reachable after a move. Labeled: freeze on goal. Grouped with
    /// tracking: any subset of movers that land on one of their group's goals.
    fn settle_options(
        &self,
        key: &Key,
        settled: RobotSet,
        next: &[u32],
        movers: &[usize],
    ) -> Vec<u64> {
        if !self.tracking.settled {
            return vec![0];
        }
        let eligible: Vec<usize> = match self.instance.semantics() {
            Semantics::Labeled => {
                let mut bits = settled;
                for robot in self.instance.robots() {
                    if robot.goal == Some(next[robot.id] as usize) {
                        bits = bits.with(robot.id);
                    }
                }
                return vec![bits.bits()];
            }
            Semantics::Grouped => movers
                .iter()
                .copied()
                .filter(|&r| self.goal_dist[r][next[r] as usize] == 0)
                .collect(),
        };
        subsets(&eligible).map(|bits| key.settled | bits).collect()
    }
}

fn subsets(items: &[usize]) -> impl Iterator<Item = u64> + '_ {
    (0u64..1 << items.len()).map(move |mask| {
        items
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .fold(0u64, |acc, (_, &r)| acc | 1 << r)
    })
}

fn reconstruct(arena: &[Node], mut idx: usize) -> Plan {
    let mut configs = Vec::new();
    loop {
        configs.push(arena[idx].key.config.iter().map(|&v| v as usize).collect::<Vec<_>>());
        if arena[idx].parent == ROOT {
            break;
        }
        idx = arena[idx].parent;
    }
    configs.reverse();
    Plan::from_configurations(&configs).expect("non-empty configuration sequence")
}
