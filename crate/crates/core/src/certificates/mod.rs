//! Strategies as certificates: product graphs, verification and scoring,
//! finite-memory extraction, and simulators for the strategies that need
//! infinite memory.

mod extract;
mod format;
mod interleave;
mod schedule;
mod verify;

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;

use crate::error::{Error, Result};
use crate::game::{EdgeId, GameGraph, Player, StateId};
use crate::graph::Digraph;

pub use extract::{capped_arena, extract_finite_strategy, CappedArena, DEFAULT_ARENA_LIMIT};
pub use format::{parse_certificate, serialize_certificate, CertificateFile, CertificateStrategy};
pub use interleave::{simulate_interleaved_sup, InterleaveTrace, PhaseRecord};
pub use schedule::{pump_schedule_from_witness, simulate_schedule, EpsilonSchedule, PlanStep, ScheduleTrace};
pub use verify::{score_p1_detailed, score_p1_finite_strategy, verify_p2_certificate, ScoredStrategy};

/// A fixed outgoing edge for each state of the owner.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MemorylessStrategy {
    pub owner: Player,
    pub choice: BTreeMap<StateId, EdgeId>,
}

impl MemorylessStrategy {
    pub fn validate(&self, g: &GameGraph) -> Result<()> {
        for s in 0..g.state_count() {
            let mine = g.owner(s) == self.owner;
            match (mine, self.choice.get(&s)) {
                (true, None) => {
                    return Err(Error::MalformedStrategy(format!(
                        "no choice for state `{}`",
                        g.state_name(s)
                    )))
                }
                (false, Some(_)) => {
                    return Err(Error::MalformedStrategy(format!(
                        "state `{}` is not owned by {}",
                        g.state_name(s),
                        self.owner
                    )))
                }
                (true, Some(&e)) if e >= g.edges().len() || g.edge(e).src != s => {
                    return Err(Error::MalformedStrategy(format!(
                        "chosen edge does not leave `{}`",
                        g.state_name(s)
                    )))
                }
                _ => {}
            }
        }
        if let Some(&s) = self.choice.keys().find(|&&s| s >= g.state_count()) {
            return Err(Error::UnknownState(format!("#{s}")));
        }
        Ok(())
    }
}

/// Moore machine: memory is updated on every traversed edge and the next
/// move of the owner depends on the memory and the current state.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MooreStrategy {
    pub owner: Player,
    pub memory: usize,
    pub initial: usize,
    /// `next[m][s]`, set exactly on the owner's states.
    pub next: Vec<Vec<Option<EdgeId>>>,
    /// `update[m][e]`: memory after traversing edge `e` with memory `m`.
    pub update: Vec<Vec<usize>>,
}

impl MooreStrategy {
    pub fn validate(&self, g: &GameGraph) -> Result<()> {
        let bad = |m: String| Err(Error::MalformedStrategy(m));
        if self.memory == 0 || self.initial >= self.memory {
            return bad("initial memory out of range".into());
        }
        if self.next.len() != self.memory || self.update.len() != self.memory {
            return bad("tables do not match the memory size".into());
        }
        for m in 0..self.memory {
            if self.next[m].len() != g.state_count() || self.update[m].len() != g.edges().len() {
                return bad(format!("tables for memory {m} have the wrong size"));
            }
            for s in 0..g.state_count() {
                let mine = g.owner(s) == self.owner;
                match self.next[m][s] {
                    None if mine => return bad(format!("no move for memory {m} at `{}`", g.state_name(s))),
                    Some(_) if !mine => return bad(format!("move given at opponent state `{}`", g.state_name(s))),
                    Some(e) if e >= g.edges().len() || g.edge(e).src != s => {
                        return bad(format!("move for memory {m} does not leave `{}`", g.state_name(s)))
                    }
                    _ => {}
                }
            }
            if self.update[m].iter().any(|&m2| m2 >= self.memory) {
                return bad(format!("update from memory {m} out of range"));
            }
        }
        Ok(())
    }

    pub fn from_memoryless(g: &GameGraph, s: &MemorylessStrategy) -> Self {
        let next = vec![(0..g.state_count()).map(|st| s.choice.get(&st).copied()).collect()];
        MooreStrategy {
            owner: s.owner,
            memory: 1,
            initial: 0,
            next,
            update: vec![vec![0; g.edges().len()]],
        }
    }
}

/// Anything that fixes the owner's moves with finite memory.
pub trait FiniteMemory {
    fn owner(&self) -> Player;
    fn initial_memory(&self) -> usize;
    fn next_edge(&self, memory: usize, state: StateId) -> EdgeId;
    fn next_memory(&self, memory: usize, edge: EdgeId) -> usize;
    fn check(&self, g: &GameGraph) -> Result<()>;
}

impl FiniteMemory for MemorylessStrategy {
    fn owner(&self) -> Player {
        self.owner
    }
    fn initial_memory(&self) -> usize {
        0
    }
    fn next_edge(&self, _: usize, state: StateId) -> EdgeId {
        self.choice[&state]
    }
    fn next_memory(&self, _: usize, _: EdgeId) -> usize {
        0
    }
    fn check(&self, g: &GameGraph) -> Result<()> {
        self.validate(g)
    }
}

impl FiniteMemory for MooreStrategy {
    fn owner(&self) -> Player {
        self.owner
    }
    fn initial_memory(&self) -> usize {
        self.initial
    }
    fn next_edge(&self, memory: usize, state: StateId) -> EdgeId {
        self.next[memory][state].expect("validated strategy")
    }
    fn next_memory(&self, memory: usize, edge: EdgeId) -> usize {
        self.update[memory][edge]
    }
    fn check(&self, g: &GameGraph) -> Result<()> {
        self.validate(g)
    }
}

/// Nonnegative initial energy, one entry per dimension.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CreditVector(pub Vec<u64>);

impl fmt::Display for CreditVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Reachable product of the arena with a strategy. Arc labels are arc
/// indices; `edge_of` maps them to game edges.
#[derive(Clone, Debug)]
pub struct ProductGraph {
    pub nodes: Vec<(usize, StateId)>,
    pub graph: Digraph,
    pub edge_of: Vec<EdgeId>,
    pub start: usize,
}

pub fn product_graph<S: FiniteMemory>(g: &GameGraph, strat: &S, s0: StateId) -> Result<ProductGraph> {
    strat.check(g)?;
    if s0 >= g.state_count() {
        return Err(Error::UnknownState(format!("#{s0}")));
    }
    let mut index: HashMap<(usize, StateId), usize> = HashMap::new();
    let mut nodes = vec![(strat.initial_memory(), s0)];
    index.insert(nodes[0], 0);
    let mut arcs: Vec<(usize, usize, EdgeId)> = Vec::new();
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        let (m, s) = nodes[i];
        let moves: Vec<EdgeId> = if g.owner(s) == strat.owner() {
            vec![strat.next_edge(m, s)]
        } else {
            g.out_edges(s).to_vec()
        };
        for e in moves {
            let key = (strat.next_memory(m, e), g.edge(e).dst);
            let j = *index.entry(key).or_insert_with(|| {
                nodes.push(key);
                queue.push_back(nodes.len() - 1);
                nodes.len() - 1
            });
            arcs.push((i, j, e));
        }
    }
    let mut graph = Digraph::new(nodes.len(), g.dim());
    let mut edge_of = Vec::with_capacity(arcs.len());
    for (l, (i, j, e)) in arcs.into_iter().enumerate() {
        graph.add_arc(i, j, g.edge(e).weight.0.clone(), l);
        edge_of.push(e);
    }
    Ok(ProductGraph {
        nodes,
        graph,
        edge_of,
        start: 0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::GameBuilder;

    pub(crate) fn fig1() -> GameGraph {
        crate::generators::fixture("fig1").unwrap()
    }

    #[test]
    fn memoryless_product_leaves_player1_choices() {
        let g = fig1();
        let l2 = MemorylessStrategy {
            owner: Player::Two,
            choice: [(0, 1)].into_iter().collect(),
        };
        let p = product_graph(&g, &l2, 0).unwrap();
        assert_eq!(p.nodes.len(), 2);
        assert_eq!(p.graph.arcs().len(), 3);
        assert!(p.nodes.iter().all(|&(_, s)| s != 1));
    }

    #[test]
    fn alternating_machine_product_is_bounded() {
        let g = fig1();
        // memory 0 plays `a` next, memory 1 plays `b`; flip on every s2 move.
        let mut update = vec![vec![0; 5], vec![1; 5]];
        update[0][3] = 1;
        update[1][4] = 0;
        let m = MooreStrategy {
            owner: Player::One,
            memory: 2,
            initial: 0,
            next: vec![vec![None, Some(2), Some(3)], vec![None, Some(2), Some(4)]],
            update,
        };
        let p = product_graph(&g, &m, 0).unwrap();
        assert!(p.nodes.len() <= 6);
        assert_eq!(p.nodes.len(), 6);
    }

    #[test]
    fn one_state_product() {
        let mut b = GameBuilder::new(1);
        let s = b.state("s", Player::One);
        b.edge("e", s, s, [0]);
        let g = b.build(s).unwrap();
        let st = MemorylessStrategy {
            owner: Player::One,
            choice: [(0, 0)].into_iter().collect(),
        };
        assert_eq!(product_graph(&g, &st, 0).unwrap().nodes.len(), 1);
    }

    #[test]
    fn malformed_strategies_are_rejected() {
        let g = fig1();
        let wrong_owner = MemorylessStrategy {
            owner: Player::Two,
            choice: [(0, 1), (2, 3)].into_iter().collect(),
        };
        assert!(matches!(product_graph(&g, &wrong_owner, 0), Err(Error::MalformedStrategy(_))));
        let wrong_edge = MemorylessStrategy {
            owner: Player::Two,
            choice: [(0, 3)].into_iter().collect(),
        };
        assert!(wrong_edge.validate(&g).is_err());
    }
}
