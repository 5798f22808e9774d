//! Brute-force references.

use crate::game::{GameGraph, Player, StateSet};
use crate::graph::Digraph;
use crate::single::max_mean_cycle;

/// What short closed walks can achieve.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WalkVerdict {
    /// Some closed walk sums to zero in every dimension.
    pub zero: bool,
    /// Some closed walk is nonnegative in every dimension.
    pub nonneg: bool,
}

/// Closed walks of length at most `max_len`, tracked as bitsets over the
/// box of reachable weight vectors (one per start and current node).
pub fn closed_walk_oracle(d: &Digraph, max_len: usize) -> WalkVerdict {
    let k = d.dim();
    let w = d
        .arcs()
        .iter()
        .flat_map(|a| a.weight.iter().map(|x| x.unsigned_abs() as usize))
        .max()
        .unwrap_or(0);
    let r = max_len * w;
    let side = 2 * r + 1;
    let cells = side.pow(k as u32);
    let words = cells.div_ceil(64);
    let origin: usize = (0..k).fold(0, |acc, _| acc * side + r);
    let offset = |wt: &[i64]| -> isize { wt.iter().fold(0isize, |acc, &x| acc * side as isize + x as isize) };
    let in_quadrant = |mut cell: usize| {
        for _ in 0..k {
            if cell % side < r {
                return false;
            }
            cell /= side;
        }
        true
    };
    let nonneg_mask: Vec<u64> = (0..words)
        .map(|i| (0..64).filter(|b| i * 64 + b < cells && in_quadrant(i * 64 + b)).fold(0u64, |m, b| m | 1 << b))
        .collect();
    let shifts: Vec<isize> = d.arcs().iter().map(|a| offset(&a.weight)).collect();
    let mut verdict = WalkVerdict {
        zero: false,
        nonneg: false,
    };
    let n = d.node_count();
    for start in 0..n {
        let mut layer = vec![vec![0u64; words]; n];
        layer[start][origin / 64] |= 1 << (origin % 64);
        for _ in 0..max_len {
            let mut next = vec![vec![0u64; words]; n];
            for (a, arc) in d.arcs().iter().enumerate() {
                shift_or(&layer[arc.src], shifts[a], &mut next[arc.dst]);
            }
            let home = &next[start];
            verdict.zero |= home[origin / 64] >> (origin % 64) & 1 == 1;
            verdict.nonneg |= home.iter().zip(&nonneg_mask).any(|(x, m)| x & m != 0);
            if verdict.zero {
                return WalkVerdict {
                    zero: true,
                    nonneg: true,
                };
            }
            layer = next;
        }
    }
    verdict
}

/// `dst |= src << by` on little-endian word arrays (negative shifts go
/// right); bits pushed out of range are dropped.
fn shift_or(src: &[u64], by: isize, dst: &mut [u64]) {
    let len = src.len() as isize;
    let words = by.div_euclid(64);
    let bits = by.rem_euclid(64) as u32;
    for i in 0..len {
        let x = src[i as usize];
        if x == 0 {
            continue;
        }
        let j = i + words;
        if (0..len).contains(&j) {
            dst[j as usize] |= x << bits;
        }
        if bits > 0 && (0..len).contains(&(j + 1)) {
            dst[(j + 1) as usize] |= x >> (64 - bits);
        }
    }
}

/// Limsup region by brute force: for every memoryless player-2 strategy,
/// a state survives if it reaches a component where each dimension has a
/// cycle of nonnegative mean; the region is what survives them all.
pub fn mp_sup_oracle(g: &GameGraph) -> StateSet {
    let n = g.state_count();
    let p2: Vec<usize> = (0..n).filter(|&s| g.owner(s) == Player::Two).collect();
    let mut pick = vec![0usize; p2.len()];
    let mut region = vec![true; n];
    loop {
        let mut d = Digraph::new(n, g.dim());
        for s in 0..n {
            let edges: Vec<usize> = match p2.iter().position(|&t| t == s) {
                Some(i) => vec![g.out_edges(s)[pick[i]]],
                None => g.out_edges(s).to_vec(),
            };
            for e in edges {
                d.add_arc(s, g.edge(e).dst, g.edge(e).weight.0.clone(), e);
            }
        }
        let mut good = vec![false; n];
        for comp in d.sccs() {
            if !d.component_is_cyclic(&comp) {
                continue;
            }
            let scc = d.induced(&comp).graph;
            let ok = (0..g.dim()).all(|i| {
                max_mean_cycle(&scc, i)
                    .expect("valid dimension")
                    .is_some_and(|m| m >= num_traits::Zero::zero())
            });
            if ok {
                for &v in &comp {
                    good[v] = true;
                }
            }
        }
        for s in 0..n {
            if region[s] && !d.reachable_from(s).iter().zip(&good).any(|(&r, &ok)| r && ok) {
                region[s] = false;
            }
        }
        let mut i = 0;
        loop {
            if i == p2.len() {
                return (0..n).filter(|&s| region[s]).collect();
            }
            pick[i] += 1;
            if pick[i] < g.out_edges(p2[i]).len() {
                break;
            }
            pick[i] = 0;
            i += 1;
        }
    }
}
