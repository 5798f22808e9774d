//! Exhaustive enumeration of memoryless player-2 strategies.

use std::collections::{BTreeMap, VecDeque};

use crate::error::{Error, Result};
use crate::game::{EdgeId, GameGraph, Player, StateId};
use crate::graph::Digraph;
use crate::certificates::MemorylessStrategy;

use super::one_player::{cyclic_components, SccOracle, SccTest};
use super::{SolveOptions, SolveStats};

/// Player-2 states of a subgame and their available edges. States close to
/// the query state come first.
pub(crate) struct Choices {
    pub states: Vec<StateId>,
    pub options: Vec<Vec<EdgeId>>,
    position: Vec<Option<usize>>,
}

impl Choices {
    pub fn new(g: &GameGraph, active: &[bool], from: Option<StateId>) -> Self {
        let n = g.state_count();
        let mut order = Vec::new();
        let mut seen = vec![false; n];
        if let Some(s0) = from {
            let mut queue = VecDeque::from([s0]);
            seen[s0] = true;
            while let Some(s) = queue.pop_front() {
                order.push(s);
                for &e in g.out_edges(s) {
                    let t = g.edge(e).dst;
                    if active[t] && !seen[t] {
                        seen[t] = true;
                        queue.push_back(t);
                    }
                }
            }
        }
        order.extend((0..n).filter(|&s| !seen[s]));
        let mut states = Vec::new();
        let mut options = Vec::new();
        let mut position = vec![None; n];
        for s in order {
            if active[s] && g.owner(s) == Player::Two {
                position[s] = Some(states.len());
                states.push(s);
                options.push(g.out_edges(s).iter().copied().filter(|&e| active[g.edge(e).dst]).collect());
            }
        }
        Choices {
            states,
            options,
            position,
        }
    }

    pub fn count(&self) -> u128 {
        self.options
            .iter()
            .fold(1u128, |acc, o| acc.saturating_mul(o.len() as u128))
    }

    pub fn guard(&self, opts: &SolveOptions) -> Result<()> {
        let count = self.count();
        if count > opts.max_strategies && !opts.force {
            return Err(Error::TooManyStrategies {
                count,
                limit: opts.max_strategies,
            });
        }
        Ok(())
    }

    /// Graph of the subgame once player 2 plays `pick`.
    pub fn graph(&self, g: &GameGraph, active: &[bool], pick: &[usize]) -> Digraph {
        let mut d = Digraph::new(g.state_count(), g.dim());
        for s in 0..g.state_count() {
            if !active[s] {
                continue;
            }
            match self.position[s] {
                Some(i) => {
                    let e = self.options[i][pick[i]];
                    d.add_arc(s, g.edge(e).dst, g.edge(e).weight.0.clone(), e);
                }
                None => {
                    for &e in g.out_edges(s) {
                        if active[g.edge(e).dst] {
                            d.add_arc(s, g.edge(e).dst, g.edge(e).weight.0.clone(), e);
                        }
                    }
                }
            }
        }
        d
    }

    pub fn strategy(&self, pick: &[usize]) -> MemorylessStrategy {
        let choice: BTreeMap<StateId, EdgeId> = self
            .states
            .iter()
            .enumerate()
            .map(|(i, &s)| (s, self.options[i][pick[i]]))
            .collect();
        MemorylessStrategy {
            owner: Player::Two,
            choice,
        }
    }

    /// Moves `pick` to the next assignment that differs somewhere in
    /// positions `0..=pos`. Returns how many assignments were passed over,
    /// or `None` when the enumeration is exhausted.
    fn advance(&self, pick: &mut [usize], pos: usize) -> Option<u128> {
        let skipped = self.options[pos + 1..]
            .iter()
            .fold(1u128, |acc, o| acc.saturating_mul(o.len() as u128))
            - 1;
        for p in pick[pos + 1..].iter_mut() {
            *p = 0;
        }
        let mut p = pos;
        loop {
            pick[p] += 1;
            if pick[p] < self.options[p].len() {
                return Some(skipped);
            }
            pick[p] = 0;
            if p == 0 {
                return None;
            }
            p -= 1;
        }
    }
}

pub(crate) enum Outcome {
    Refutes,
    /// Survives every assignment that agrees on positions `0..=n`; `None`
    /// when the survival does not depend on player 2 at all.
    Survives(Option<usize>),
}

/// Searches for a refuting assignment, skipping every assignment that
/// agrees with a surviving one on the positions its survival depends on.
pub(crate) fn find_refutation(
    choices: &Choices,
    stats: &mut SolveStats,
    mut eval: impl FnMut(&[usize]) -> Outcome,
) -> Option<Vec<usize>> {
    let mut pick = vec![0; choices.states.len()];
    if choices.options.iter().any(|o| o.is_empty()) {
        return None;
    }
    loop {
        stats.strategies += 1;
        match eval(&pick) {
            Outcome::Refutes => return Some(pick),
            Outcome::Survives(None) => return None,
            Outcome::Survives(Some(pos)) => {
                let skipped = choices.advance(&mut pick, pos)?;
                stats.skipped = stats.skipped.saturating_add(skipped)
            },
        }
    }
}

/// Evaluates one choice from `s0`: refutes, or survives with the deepest
/// player-2 position on the path to a good component and inside it.
pub(crate) fn evaluate_from(
    g: &GameGraph,
    choices: &Choices,
    active: &[bool],
    pick: &[usize],
    s0: StateId,
    test: &SccTest,
    oracle: &mut SccOracle,
) -> Outcome {
    let d = choices.graph(g, active, pick);
    let n = g.state_count();
    let mut parent: Vec<Option<usize>> = vec![None; n];
    let mut seen = vec![false; n];
    seen[s0] = true;
    let mut queue = VecDeque::from([s0]);
    while let Some(v) = queue.pop_front() {
        for &a in d.out_arcs(v) {
            let w = d.arc(a).dst;
            if !seen[w] {
                seen[w] = true;
                parent[w] = Some(v);
                queue.push_back(w);
            }
        }
    }
    let mut relevant: Option<Vec<usize>> = None;
    for (members, scc) in cyclic_components(&d, &seen) {
        if oracle.good(test, &scc) {
            let mut nodes = members.clone();
            let mut v = members[0];
            while let Some(p) = parent[v] {
                nodes.push(p);
                v = p;
            }
            relevant = Some(nodes);
            break;
        }
    }
    match relevant {
        None => Outcome::Refutes,
        Some(nodes) => Outcome::Survives(nodes.iter().filter_map(|&v| choices.position[v]).max()),
    }
}
