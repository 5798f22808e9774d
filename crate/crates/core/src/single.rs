//! One-dimensional building blocks: energy progress measures and Karp's
//! maximum mean cycle.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::game::{EdgeId, GameGraph, Player, StateId, StateSet};
use crate::graph::Digraph;
use crate::rational::Rational;

/// Marker for states where no finite credit suffices.
pub const TOP: i64 = i64::MAX;

/// Least energy progress measure for dimension `dim` of the subgame on
/// `active`. Values above `n·W` collapse to [`TOP`].
pub fn energy_progress_measure(g: &GameGraph, dim: usize, active: &[bool]) -> Vec<i64> {
    let n = g.state_count();
    let active_edges = |s: StateId| {
        g.out_edges(s)
            .iter()
            .copied()
            .filter(move |&e| active[g.edge(e).dst])
    };
    let count = active.iter().filter(|&&a| a).count() as i64;
    let max_drop = (0..n)
        .filter(|&s| active[s])
        .flat_map(|s| active_edges(s))
        .map(|e| (-g.edge(e).weight[dim]).max(0))
        .max()
        .unwrap_or(0);
    let cap = count.saturating_mul(max_drop);
    let mut preds: Vec<Vec<StateId>> = vec![Vec::new(); n];
    for e in g.edges() {
        if active[e.src] && active[e.dst] {
            preds[e.dst].push(e.src);
        }
    }
    let mut f = vec![0i64; n];
    let mut queued = active.to_vec();
    let mut work: Vec<StateId> = (0..n).filter(|&s| active[s]).collect();
    let step = |f: &[i64], e: EdgeId| -> i64 {
        let t = f[g.edge(e).dst];
        if t == TOP {
            return TOP;
        }
        let need = (t - g.edge(e).weight[dim]).max(0);
        if need > cap {
            TOP
        } else {
            need
        }
    };
    while let Some(s) = work.pop() {
        queued[s] = false;
        let vals = active_edges(s).map(|e| step(&f, e));
        let new = match g.owner(s) {
            Player::One => vals.min(),
            Player::Two => vals.max(),
        }
        .unwrap_or(TOP);
        if new > f[s] {
            f[s] = new;
            for &p in &preds[s] {
                if !queued[p] {
                    queued[p] = true;
                    work.push(p);
                }
            }
        }
    }
    f
}

/// Winning region (as a mask) of `MP-sup ≥ 0` in one dimension, inside `active`.
pub(crate) fn single_region_mask(g: &GameGraph, dim: usize, active: &[bool]) -> Vec<bool> {
    let f = energy_progress_measure(g, dim, active);
    (0..g.state_count()).map(|s| active[s] && f[s] != TOP).collect()
}

/// Player-1 winning region for `MP-sup ≥ 0` in dimension `dim` (0-based).
/// In one dimension this coincides with the energy and `MP-inf` regions.
pub fn solve_single_mp_sup(g: &GameGraph, dim: usize) -> Result<StateSet> {
    g.check_dim(dim)?;
    let active = vec![true; g.state_count()];
    let mask = single_region_mask(g, dim, &active);
    Ok((0..g.state_count()).filter(|&s| mask[s]).collect())
}

/// Memoryless player-1 strategy that keeps the progress measure finite on
/// the winning region of dimension `dim`. States outside the region are
/// left unassigned.
pub fn single_dim_strategy(g: &GameGraph, dim: usize) -> Result<BTreeMap<StateId, EdgeId>> {
    g.check_dim(dim)?;
    let active = vec![true; g.state_count()];
    let f = energy_progress_measure(g, dim, &active);
    let mut choice = BTreeMap::new();
    for s in 0..g.state_count() {
        if g.owner(s) != Player::One || f[s] == TOP {
            continue;
        }
        let e = g
            .out_edges(s)
            .iter()
            .copied()
            .find(|&e| {
                let t = f[g.edge(e).dst];
                t != TOP && (t - g.edge(e).weight[dim]).max(0) <= f[s]
            })
            .expect("a finite measure is witnessed by some edge");
        choice.insert(s, e);
    }
    Ok(choice)
}

/// Exact maximum cycle mean of dimension `dim` in a strongly connected
/// graph. `None` when the graph has no cycle (a single node without loop).
pub fn max_mean_cycle(d: &Digraph, dim: usize) -> Result<Option<Rational>> {
    if dim >= d.dim() {
        return Err(Error::BadDimension {
            index: dim + 1,
            dim: d.dim(),
        });
    }
    if !d.is_strongly_connected() {
        return Err(Error::NotStronglyConnected);
    }
    let n = d.node_count();
    if d.arcs().is_empty() {
        return Ok(None);
    }
    // best[k][v]: heaviest walk of exactly k arcs from node 0 to v.
    let mut best: Vec<Vec<Option<i64>>> = vec![vec![None; n]; n + 1];
    best[0][0] = Some(0);
    for k in 1..=n {
        for a in d.arcs() {
            if let Some(x) = best[k - 1][a.src] {
                let y = x + a.weight[dim];
                if best[k][a.dst].is_none_or(|z| y > z) {
                    best[k][a.dst] = Some(y);
                }
            }
        }
    }
    let mut answer: Option<Rational> = None;
    for v in 0..n {
        let Some(top) = best[n][v] else { continue };
        let worst = (0..n)
            .filter_map(|k| best[k][v].map(|x| Rational::new((top - x).into(), ((n - k) as i64).into())))
            .min();
        if let Some(w) = worst {
            if answer.as_ref().is_none_or(|a| w > *a) {
                answer = Some(w);
            }
        }
    }
    Ok(answer)
}
