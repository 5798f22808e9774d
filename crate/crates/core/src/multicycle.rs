//! Cycle structure of multi-weighted graphs: nonnegative multi-cycles,
//! zero circuits and nonnegative circuits.
//!
//! Witnesses name arcs by their label, so they stay meaningful when a
//! subgraph is lifted back to the graph it came from.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::graph::Digraph;
use crate::lp::{self, FeasibilityResult, LinearConstraintSystem, Relation};
use crate::rational::{int, lcm_denominators, Rational};

/// Default length limit for spelling out a zero circuit.
pub const DEFAULT_WITNESS_BOUND: usize = 100_000;

/// Weighted multiset of simple cycles.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiCycleWitness {
    pub cycles: Vec<(Vec<usize>, Rational)>,
}

/// A closed walk, not necessarily simple.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CircuitWitness {
    pub walk: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CircuitAnswer {
    pub exists: bool,
    pub witness: Option<CircuitWitness>,
}

fn label_index(d: &Digraph) -> HashMap<usize, usize> {
    d.arcs().iter().enumerate().map(|(i, a)| (a.label, i)).collect()
}

/// Follows labels through `d`; `None` if a label is unknown or the walk
/// is not connected and closed.
fn closed_walk(d: &Digraph, labels: &[usize], index: &HashMap<usize, usize>) -> Option<Vec<usize>> {
    let arcs: Vec<usize> = labels.iter().map(|l| index.get(l).copied()).collect::<Option<_>>()?;
    if arcs.is_empty() {
        return None;
    }
    for w in arcs.windows(2) {
        if d.arc(w[0]).dst != d.arc(w[1]).src {
            return None;
        }
    }
    if d.arc(*arcs.last()?).dst != d.arc(arcs[0]).src {
        return None;
    }
    Some(arcs)
}

fn walk_sum(d: &Digraph, arcs: &[usize]) -> Vec<i64> {
    let mut sum = vec![0i64; d.dim()];
    for &a in arcs {
        for (s, w) in sum.iter_mut().zip(&d.arc(a).weight) {
            *s += w;
        }
    }
    sum
}

impl MultiCycleWitness {
    /// Simple closed cycles inside one SCC, positive factors, and a weighted
    /// sum that is nonnegative on `dims`.
    pub fn verify(&self, d: &Digraph, dims: &[usize]) -> bool {
        let index = label_index(d);
        if self.cycles.is_empty() {
            return false;
        }
        let sccs = d.sccs();
        let mut comp_of = vec![0; d.node_count()];
        for (c, comp) in sccs.iter().enumerate() {
            for &v in comp {
                comp_of[v] = c;
            }
        }
        let mut comp = None;
        let mut total = vec![Rational::zero(); d.dim()];
        for (labels, factor) in &self.cycles {
            if !factor.is_positive() {
                return false;
            }
            let Some(arcs) = closed_walk(d, labels, &index) else {
                return false;
            };
            let mut nodes: Vec<usize> = arcs.iter().map(|&a| d.arc(a).src).collect();
            let len = nodes.len();
            nodes.sort_unstable();
            nodes.dedup();
            if nodes.len() != len {
                return false;
            }
            for &v in &nodes {
                if *comp.get_or_insert(comp_of[v]) != comp_of[v] {
                    return false;
                }
            }
            for (t, w) in total.iter_mut().zip(walk_sum(d, &arcs)) {
                *t += factor * int(w);
            }
        }
        dims.iter().all(|&i| !total[i].is_negative())
    }

    /// The same multiset with integer multiplicities.
    pub fn integer_scaled(&self) -> Vec<(Vec<usize>, BigInt)> {
        let l = lcm_denominators(self.cycles.iter().map(|(_, f)| f));
        self.cycles
            .iter()
            .map(|(c, f)| (c.clone(), (f * Rational::from_integer(l.clone())).to_integer()))
            .collect()
    }
}

impl CircuitWitness {
    /// Connected closed walk whose weight is nonnegative (or exactly zero).
    pub fn verify(&self, d: &Digraph, exact_zero: bool) -> bool {
        let index = label_index(d);
        let Some(arcs) = closed_walk(d, &self.walk, &index) else {
            return false;
        };
        let sum = walk_sum(d, &arcs);
        if exact_zero {
            sum.iter().all(|&s| s == 0)
        } else {
            sum.iter().all(|&s| s >= 0)
        }
    }
}

/// Flow LP over all arcs: conservation, `x ≥ 0`, `Σ x·w_i rel 0` for the
/// listed dimensions, `Σ x ≥ 1`.
pub fn flow_system(d: &Digraph, dims: &[usize], relation: Relation) -> LinearConstraintSystem {
    let mut lcs = LinearConstraintSystem::new();
    for a in d.arcs() {
        lcs.add_variable(format!("x{}", a.label));
    }
    for v in 0..d.node_count() {
        let mut row: Vec<(usize, Rational)> = Vec::new();
        for &a in d.in_arcs(v) {
            row.push((a, Rational::one()));
        }
        for &a in d.out_arcs(v) {
            row.push((a, -Rational::one()));
        }
        if !row.is_empty() {
            lcs.add_constraint(row, Relation::Eq, Rational::zero());
        }
    }
    for a in 0..d.arcs().len() {
        lcs.add_constraint(vec![(a, Rational::one())], Relation::Ge, Rational::zero());
    }
    for &i in dims {
        let row = d
            .arcs()
            .iter()
            .enumerate()
            .filter(|(_, a)| a.weight[i] != 0)
            .map(|(j, a)| (j, int(a.weight[i])))
            .collect();
        lcs.add_constraint(row, relation, Rational::zero());
    }
    let total = (0..d.arcs().len()).map(|a| (a, Rational::one())).collect();
    lcs.add_constraint(total, Relation::Ge, Rational::one());
    lcs
}

/// Integer flow proportional to `x`.
fn integer_flow(x: &[Rational]) -> Vec<BigInt> {
    let l = Rational::from_integer(lcm_denominators(x));
    x.iter().map(|v| (v * &l).to_integer()).collect()
}

/// Greedy decomposition of a balanced integer flow into simple cycles.
fn decompose(d: &Digraph, mut flow: Vec<BigInt>) -> Vec<(Vec<usize>, BigInt)> {
    let mut cycles = Vec::new();
    while let Some(start) = flow.iter().position(|f| f.is_positive()) {
        let mut path = vec![start];
        let mut pos: HashMap<usize, usize> = HashMap::new();
        pos.insert(d.arc(start).src, 0);
        loop {
            let v = d.arc(*path.last().expect("path nonempty")).dst;
            if let Some(&p) = pos.get(&v) {
                let cycle: Vec<usize> = path[p..].to_vec();
                let m = cycle.iter().map(|&a| flow[a].clone()).min().expect("cycle nonempty");
                for &a in &cycle {
                    flow[a] -= &m;
                }
                cycles.push((cycle, m));
                break;
            }
            pos.insert(v, path.len());
            let next = d
                .out_arcs(v)
                .iter()
                .copied()
                .find(|&a| flow[a].is_positive())
                .expect("balanced flow continues");
            path.push(next);
        }
    }
    cycles
}

/// LP test for a nonnegative multi-cycle on the `dims` dimensions of a
/// strongly connected graph.
pub fn nonneg_multicycle(d: &Digraph, dims: &[usize]) -> Result<Option<MultiCycleWitness>> {
    if !d.is_strongly_connected() {
        return Err(Error::NotStronglyConnected);
    }
    let lcs = flow_system(d, dims, Relation::Ge);
    let FeasibilityResult::Feasible { assignment } = lp::solve_feasibility(&lcs) else {
        return Ok(None);
    };
    let l = lcm_denominators(&assignment);
    let cycles = decompose(d, integer_flow(&assignment))
        .into_iter()
        .map(|(c, m)| {
            let labels = c.iter().map(|&a| d.arc(a).label).collect();
            (labels, Rational::new(m, l.clone()))
        })
        .collect();
    let w = MultiCycleWitness { cycles };
    debug_assert!(w.verify(d, dims));
    Ok(Some(w))
}

/// Euler circuit of a connected balanced integer flow, as arc indices.
fn euler_circuit(d: &Digraph, flow: &[u64]) -> Vec<usize> {
    let mut left = flow.to_vec();
    let start = d.arc(left.iter().position(|&f| f > 0).expect("nonzero flow")).src;
    let mut next_out = vec![0usize; d.node_count()];
    let mut stack: Vec<(usize, Option<usize>)> = vec![(start, None)];
    let mut circuit = Vec::new();
    while let Some(&(v, via)) = stack.last() {
        let outs = d.out_arcs(v);
        while next_out[v] < outs.len() && left[outs[next_out[v]]] == 0 {
            next_out[v] += 1;
        }
        if next_out[v] < outs.len() {
            let a = outs[next_out[v]];
            left[a] -= 1;
            stack.push((d.arc(a).dst, Some(a)));
        } else {
            stack.pop();
            if let Some(a) = via {
                circuit.push(a);
            }
        }
    }
    circuit.reverse();
    circuit
}

/// Positive rational point on a strongly connected support, turned into a
/// circuit if its integer scaling is short enough.
fn circuit_from_point(d: &Digraph, x: &[Rational], bound: usize) -> Option<CircuitWitness> {
    let flow = integer_flow(x);
    let total: BigInt = flow.iter().sum();
    if total > BigInt::from(bound) {
        return None;
    }
    let flow: Vec<u64> = flow.iter().map(|f| f.to_u64().expect("bounded")).collect();
    let walk = euler_circuit(d, &flow).into_iter().map(|a| d.arc(a).label).collect();
    Some(CircuitWitness { walk })
}

fn positive_arcs(x: &[Rational]) -> Vec<usize> {
    (0..x.len()).filter(|&a| x[a].is_positive()).collect()
}

/// Zero circuit inside a strongly connected graph, by the support recursion.
fn zero_circuit_scc(d: &Digraph, bound: usize) -> Option<Option<CircuitWitness>> {
    let all: Vec<usize> = (0..d.dim()).collect();
    let lcs = flow_system(d, &all, Relation::Eq);
    let FeasibilityResult::Feasible { assignment } = lp::solve_feasibility(&lcs) else {
        return None;
    };
    // The support of one solution is often already strongly connected.
    let quick = positive_arcs(&assignment);
    if d.arc_subgraph(&quick).graph.is_strongly_connected() {
        return Some(circuit_from_point(d, &assignment, bound));
    }
    let support = lp::support_edges(&lcs).expect("system is feasible");
    let sub = d.arc_subgraph(&support.variables);
    if sub.graph.is_strongly_connected() {
        // The average of the witnesses is positive on the whole support.
        let n = Rational::from_integer(BigInt::from(support.witnesses.len()));
        let mut avg = vec![Rational::zero(); d.arcs().len()];
        for x in support.witnesses.values() {
            for (acc, v) in avg.iter_mut().zip(x) {
                *acc += v / &n;
            }
        }
        return Some(circuit_from_point(d, &avg, bound));
    }
    zero_circuit_graph(&sub.graph, bound)
}

/// Per component of `d`: the first zero circuit found, if any.
fn zero_circuit_graph(d: &Digraph, bound: usize) -> Option<Option<CircuitWitness>> {
    for comp in d.sccs() {
        if !d.component_is_cyclic(&comp) {
            continue;
        }
        let sub = d.induced(&comp);
        if let Some(w) = zero_circuit_scc(&sub.graph, bound) {
            return Some(w);
        }
    }
    None
}

/// Is there a connected closed walk whose weight is zero in every
/// dimension? A witness is spelled out when it has at most `bound` arcs.
pub fn zero_circuit_exists(d: &Digraph, bound: usize) -> CircuitAnswer {
    match zero_circuit_graph(d, bound) {
        None => CircuitAnswer {
            exists: false,
            witness: None,
        },
        Some(witness) => {
            debug_assert!(witness.as_ref().is_none_or(|w| w.verify(d, true)));
            CircuitAnswer { exists: true, witness }
        }
    }
}

/// `d` plus a `−e_i` self-loop for every node and dimension. Loop labels
/// start above the largest existing label.
pub fn with_decrement_loops(d: &Digraph) -> (Digraph, usize) {
    let mut aug = d.clone();
    let base = d.max_label().map_or(0, |l| l + 1);
    let k = d.dim();
    for v in 0..d.node_count() {
        for i in 0..k {
            let mut w = vec![0; k];
            w[i] = -1;
            aug.add_arc(v, v, w, base + v * k + i);
        }
    }
    (aug, base)
}

/// Nonnegative circuit anywhere in `d`, via zero circuits of the graph
/// with decrement loops. The witness omits the loops.
pub fn has_nonneg_circuit(d: &Digraph, bound: usize) -> CircuitAnswer {
    let (aug, base) = with_decrement_loops(d);
    let mut answer = zero_circuit_exists(&aug, bound);
    if let Some(w) = &mut answer.witness {
        w.walk.retain(|&l| l < base);
        debug_assert!(w.verify(d, false));
    }
    answer
}

/// Nonnegative circuit reachable from `start`.
pub fn nonneg_circuit_reachable(d: &Digraph, start: usize) -> Result<CircuitAnswer> {
    if start >= d.node_count() {
        return Err(Error::UnknownState(format!("#{start}")));
    }
    let reach = d.reachable_from(start);
    let nodes: Vec<usize> = (0..d.node_count()).filter(|&v| reach[v]).collect();
    Ok(has_nonneg_circuit(&d.induced(&nodes).graph, DEFAULT_WITNESS_BOUND))
}
