use crate::model::{Graph, MppInstance, Semantics, VertexId};

/// Set of robot ids below 64, used for frozen/settled robots.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct RobotSet(u64);

impl RobotSet {
    pub const MAX_ROBOTS: usize = 64;

    pub fn empty() -> Self {
        RobotSet(0)
    }

    pub(crate) fn from_bits(bits: u64) -> Self {
        RobotSet(bits)
    }

    pub fn contains(self, robot: usize) -> bool {
        self.0 >> robot & 1 == 1
    }

    pub fn with(self, robot: usize) -> Self {
        RobotSet(self.0 | 1 << robot)
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn is_full(self, robots: usize) -> bool {
        self.len() == robots
    }
}

/// A node of the joint configuration space.
///
/// `frozen` marks robots that reached their goal (labeled semantics); it is
/// always empty for grouped instances.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SearchState {
    pub configuration: Vec<VertexId>,
    pub frozen: RobotSet,
}

impl SearchState {
    /// Start state; robots already on their goal are frozen at time 0.
    pub fn initial(instance: &MppInstance) -> Self {
        let configuration = instance.starts();
        let frozen = frozen_on_goals(instance, &configuration, RobotSet::empty());
        SearchState {
            configuration,
            frozen,
        }
    }
}

pub(crate) fn frozen_on_goals(
    instance: &MppInstance,
    configuration: &[VertexId],
    mut frozen: RobotSet,
) -> RobotSet {
    if instance.semantics() == Semantics::Labeled {
        for robot in instance.robots() {
            if robot.goal == Some(configuration[robot.id]) {
                frozen = frozen.with(robot.id);
            }
        }
    }
    frozen
}

/// Every synchronous joint move out of `state`, identity included.
///
/// Each unfrozen robot waits or crosses an edge; the result is injective and
/// contains no head-on swap. Rotations along fully occupied cycles appear
/// naturally. Robots landing on their goal become frozen.
pub fn joint_successors(instance: &MppInstance, state: &SearchState) -> Vec<SearchState> {
    let config: Vec<u32> = state.configuration.iter().map(|&v| v as u32).collect();
    let mut out = Vec::new();
    for_each_joint_move(
        instance.graph(),
        &config,
        |r| !state.frozen.contains(r),
        |next| {
            let configuration: Vec<VertexId> = next.iter().map(|&v| v as VertexId).collect();
            let frozen = frozen_on_goals(instance, &configuration, state.frozen);
            out.push(SearchState {
                configuration,
                frozen,
            });
        },
    );
    out
}

const NONE: u32 = u32::MAX;

/// Enumerates legal joint moves in lexicographic order of the target
/// configuration (robot 0 most significant, smaller vertex ids first).
pub(crate) fn for_each_joint_move(
    graph: &Graph,
    current: &[u32],
    movable: impl Fn(usize) -> bool,
    mut emit: impl FnMut(&[u32]),
) {
    let n = current.len();
    let mut occupant = vec![NONE; graph.vertex_count()];
    for (r, &v) in current.iter().enumerate() {
        occupant[v as usize] = r as u32;
    }
    let options: Vec<Vec<u32>> = current
        .iter()
        .enumerate()
        .map(|(r, &v)| {
            if movable(r) {
                let mut opts: Vec<u32> = graph.neighbors(v as usize).iter().map(|&w| w as u32).collect();
                opts.push(v);
                opts.sort_unstable();
                opts
            } else {
                vec![v]
            }
        })
        .collect();
    let mut claimed = vec![false; graph.vertex_count()];
    let mut target = vec![NONE; n];
    let mut ctx = MoveCtx {
        current,
        occupant: &occupant,
        options: &options,
        claimed: &mut claimed,
        target: &mut target,
    };
    ctx.assign(0, &mut emit);
}

struct MoveCtx<'a> {
    current: &'a [u32],
    occupant: &'a [u32],
    options: &'a [Vec<u32>],
    claimed: &'a mut [bool],
    target: &'a mut [u32],
}

impl MoveCtx<'_> {
    fn assign(&mut self, robot: usize, emit: &mut impl FnMut(&[u32])) {
        if robot == self.current.len() {
            emit(self.target);
            return;
        }
        let from = self.current[robot];
        for k in 0..self.options[robot].len() {
            let to = self.options[robot][k];
            if self.claimed[to as usize] {
                continue;
            }
            if to != from {
                let other = self.occupant[to as usize];
                if other != NONE && (other as usize) < robot && self.target[other as usize] == from {
                    continue;
                }
            }
            self.claimed[to as usize] = true;
            self.target[robot] = to;
            self.assign(robot + 1, emit);
            self.claimed[to as usize] = false;
            self.target[robot] = NONE;
        }
    }
}
