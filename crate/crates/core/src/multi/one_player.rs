//! Winning regions of one-player graphs (player 2 already fixed).

use std::collections::HashMap;

use crate::graph::Digraph;
use crate::multicycle::{has_nonneg_circuit, nonneg_multicycle};

/// What a strongly connected component must contain to be good for player 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub(crate) enum SccTest {
    /// A nonnegative circuit (energy).
    Circuit,
    /// A nonnegative multi-cycle on these dimensions (liminf mean payoff).
    MultiCycle(Vec<usize>),
}

/// Per-component verdicts cached by the component's arc labels.
#[derive(Debug, Default)]
pub(crate) struct SccOracle {
    cache: HashMap<(SccTest, Vec<usize>), bool>,
    pub lp_calls: u64,
}

impl SccOracle {
    pub fn good(&mut self, test: &SccTest, scc: &Digraph) -> bool {
        let mut key: Vec<usize> = scc.arcs().iter().map(|a| a.label).collect();
        key.sort_unstable();
        let entry = (test.clone(), key);
        if let Some(&v) = self.cache.get(&entry) {
            return v;
        }
        self.lp_calls += 1;
        let v = match test {
            SccTest::Circuit => has_nonneg_circuit(scc, 0).exists,
            SccTest::MultiCycle(dims) => nonneg_multicycle(scc, dims)
                .expect("components are strongly connected")
                .is_some(),
        };
        self.cache.insert(entry, v);
        v
    }
}

/// Cyclic components inside `active`, each with its induced subgraph.
pub(crate) fn cyclic_components(d: &Digraph, active: &[bool]) -> Vec<(Vec<usize>, Digraph)> {
    let nodes: Vec<usize> = (0..d.node_count()).filter(|&v| active[v]).collect();
    let sub = d.induced(&nodes);
    let mut out = Vec::new();
    for comp in sub.graph.sccs() {
        if !sub.graph.component_is_cyclic(&comp) {
            continue;
        }
        let scc = sub.graph.induced(&comp).graph;
        let members = comp.iter().map(|&v| sub.node_map[v]).collect();
        out.push((members, scc));
    }
    out
}

/// Nodes of `active` that reach (inside `active`) a node flagged in `target`.
pub(crate) fn backward_reach(d: &Digraph, active: &[bool], target: &[bool]) -> Vec<bool> {
    let mut mark: Vec<bool> = (0..d.node_count()).map(|v| active[v] && target[v]).collect();
    let mut stack: Vec<usize> = (0..d.node_count()).filter(|&v| mark[v]).collect();
    while let Some(v) = stack.pop() {
        for &a in d.in_arcs(v) {
            let u = d.arc(a).src;
            if active[u] && !mark[u] {
                mark[u] = true;
                stack.push(u);
            }
        }
    }
    mark
}

/// Nodes from which a good component is reachable.
pub(crate) fn good_reach_mask(d: &Digraph, active: &[bool], test: &SccTest, oracle: &mut SccOracle) -> Vec<bool> {
    let mut target = vec![false; d.node_count()];
    for (members, scc) in cyclic_components(d, active) {
        if oracle.good(test, &scc) {
            for v in members {
                target[v] = true;
            }
        }
    }
    backward_reach(d, active, &target)
}

pub(crate) fn energy_mask(d: &Digraph) -> Vec<bool> {
    let active = vec![true; d.node_count()];
    good_reach_mask(d, &active, &SccTest::Circuit, &mut SccOracle::default())
}

pub(crate) fn mp_inf_mask(d: &Digraph, dims: &[usize]) -> Vec<bool> {
    let active = vec![true; d.node_count()];
    good_reach_mask(d, &active, &SccTest::MultiCycle(dims.to_vec()), &mut SccOracle::default())
}

/// Iterative removal over the sup dimensions, each step a liminf test on
/// the inf dimensions plus that one sup dimension.
pub(crate) fn inf_sup_mask(d: &Digraph, inf: &[usize], sup: &[usize]) -> Vec<bool> {
    if sup.is_empty() {
        return mp_inf_mask(d, inf);
    }
    let mut oracle = SccOracle::default();
    let mut active = vec![true; d.node_count()];
    loop {
        let mut changed = false;
        for &l in sup {
            let mut dims = inf.to_vec();
            dims.push(l);
            let win = good_reach_mask(d, &active, &SccTest::MultiCycle(dims), &mut oracle);
            for v in 0..d.node_count() {
                if active[v] && !win[v] {
                    active[v] = false;
                    changed = true;
                }
            }
        }
        if !changed {
            return active;
        }
    }
}
