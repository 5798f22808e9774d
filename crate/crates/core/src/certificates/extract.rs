//! Finite-memory player-1 strategies from a capped energy arena.
//!
//! Arena nodes are pairs (state, energy) with energy in `{0..C}^k`. Gains
//! saturate at `C` and any negative component loses. Winning the capped
//! game is sufficient for the real one since capping only throws energy
//! away.

use std::collections::{BTreeMap, VecDeque};

use super::{score_p1_finite_strategy, CreditVector, MooreStrategy};
use crate::error::{Error, Result};
use crate::game::{GameGraph, Player, StateId};

/// Largest arena solved without an explicit override.
pub const DEFAULT_ARENA_LIMIT: u128 = 4_000_000;

const NONE: u32 = u32::MAX;

/// Solved capped arena.
#[derive(Clone, Debug)]
pub struct CappedArena {
    pub cap: u64,
    dim: usize,
    /// Energy vectors per state.
    block: usize,
    losing: Vec<bool>,
    /// Edge index of a safe move at winning player-1 nodes.
    choice: Vec<u32>,
}

impl CappedArena {
    pub fn size(&self) -> usize {
        self.losing.len()
    }

    fn encode(&self, v: &[u64]) -> usize {
        v.iter().rev().fold(0usize, |acc, &x| acc * (self.cap as usize + 1) + x as usize)
    }

    fn decode(&self, mut ix: usize) -> Vec<u64> {
        let base = self.cap as usize + 1;
        (0..self.dim)
            .map(|_| {
                let x = ix % base;
                ix /= base;
                x as u64
            })
            .collect()
    }

    /// Does player 1 win from `s` holding `credit` (clamped to the cap)?
    pub fn wins(&self, s: StateId, credit: &[u64]) -> bool {
        let v: Vec<u64> = credit.iter().map(|&c| c.min(self.cap)).collect();
        !self.losing[s * self.block + self.encode(&v)]
    }

    /// Moore machine that plays the arena strategy from `s0`, remembering
    /// the capped energy, and its exact credit.
    pub fn strategy(&self, g: &GameGraph, s0: StateId) -> Result<Option<(MooreStrategy, CreditVector)>> {
        // Start from the smallest winning credit rather than the cap.
        let Some(start) = (0..self.block)
            .filter(|&c| !self.losing[s0 * self.block + c])
            .min_by_key(|&c| {
                let v = self.decode(c);
                (v.iter().sum::<u64>(), v)
            })
        else {
            return Ok(None);
        };
        let mut memory: BTreeMap<usize, usize> = BTreeMap::new();
        let mut vectors = vec![start];
        memory.insert(start, 0);
        let mut seen = vec![false; self.losing.len()];
        let mut queue = VecDeque::from([s0 * self.block + start]);
        seen[s0 * self.block + start] = true;
        while let Some(node) = queue.pop_front() {
            let s = node / self.block;
            let v = self.decode(node % self.block);
            let moves: Vec<usize> = match g.owner(s) {
                Player::One => vec![self.choice[node] as usize],
                Player::Two => g.out_edges(s).to_vec(),
            };
            for e in moves {
                let next = step(&v, &g.edge(e).weight, self.cap).expect("winning nodes only move to safe nodes");
                let code = self.encode(&next);
                if let std::collections::btree_map::Entry::Vacant(e) = memory.entry(code) {
                    e.insert(vectors.len());
                    vectors.push(code);
                }
                let t = g.edge(e).dst * self.block + code;
                if !seen[t] {
                    seen[t] = true;
                    queue.push_back(t);
                }
            }
        }
        let m = vectors.len();
        let mut next = vec![vec![None; g.state_count()]; m];
        let mut update = vec![vec![0; g.edges().len()]; m];
        for (i, &code) in vectors.iter().enumerate() {
            let v = self.decode(code);
            for s in 0..g.state_count() {
                if g.owner(s) == Player::One {
                    let node = s * self.block + code;
                    let c = self.choice[node];
                    next[i][s] = Some(if c == NONE { g.out_edges(s)[0] } else { c as usize });
                }
            }
            for (e, edge) in g.edges().iter().enumerate() {
                update[i][e] = step(&v, &edge.weight, self.cap)
                    .and_then(|w| memory.get(&self.encode(&w)).copied())
                    .unwrap_or(i);
            }
        }
        let machine = MooreStrategy {
            owner: Player::One,
            memory: m,
            initial: 0,
            next,
            update,
        };
        let credit = score_p1_finite_strategy(g, &machine, s0)?
            .expect("a winning arena strategy has no negative reachable cycle");
        Ok(Some((machine, credit)))
    }
}

fn step(v: &[u64], w: &[i64], cap: u64) -> Option<Vec<u64>> {
    v.iter()
        .zip(w)
        .map(|(&x, &d)| {
            let y = x as i64 + d;
            (y >= 0).then(|| (y as u64).min(cap))
        })
        .collect()
}

/// Solves the safety game on the capped arena.
pub fn capped_arena(g: &GameGraph, cap: u64, limit: u128) -> Result<CappedArena> {
    let k = g.dim();
    let block = (cap as u128 + 1).checked_pow(k as u32).unwrap_or(u128::MAX);
    let size = block.saturating_mul(g.state_count() as u128);
    if size > limit || size >= NONE as u128 {
        return Err(Error::ArenaTooLarge { size, limit });
    }
    let block = block as usize;
    let size = size as usize;
    let mut arena = CappedArena {
        cap,
        dim: k,
        block,
        losing: vec![false; size],
        choice: vec![NONE; size],
    };
    // Successor lists in CSR form; `NONE` marks an immediately losing move.
    let mut offsets = Vec::with_capacity(size + 1);
    let mut succ: Vec<u32> = Vec::new();
    offsets.push(0u32);
    for node in 0..size {
        let s = node / block;
        let v = arena.decode(node % block);
        for &e in g.out_edges(s) {
            let t = match step(&v, &g.edge(e).weight, cap) {
                Some(w) => (g.edge(e).dst * block + arena.encode(&w)) as u32,
                None => NONE,
            };
            succ.push(t);
        }
        offsets.push(succ.len() as u32);
    }
    let mut pred_count = vec![0u32; size + 1];
    for &t in &succ {
        if t != NONE {
            pred_count[t as usize + 1] += 1;
        }
    }
    for i in 0..size {
        pred_count[i + 1] += pred_count[i];
    }
    let mut fill = pred_count.clone();
    let mut preds = vec![0u32; pred_count[size] as usize];
    for u in 0..size {
        for &t in &succ[offsets[u] as usize..offsets[u + 1] as usize] {
            if t != NONE {
                preds[fill[t as usize] as usize] = u as u32;
                fill[t as usize] += 1;
            }
        }
    }
    let owner = |node: usize| g.owner(node / block);
    let mut alive = vec![0u32; size];
    let mut work = Vec::new();
    for u in 0..size {
        let out = &succ[offsets[u] as usize..offsets[u + 1] as usize];
        let safe = out.iter().filter(|&&t| t != NONE).count() as u32;
        let lost = match owner(u) {
            Player::One => safe == 0,
            Player::Two => safe as usize != out.len(),
        };
        alive[u] = safe;
        if lost {
            arena.losing[u] = true;
            work.push(u);
        }
    }
    while let Some(t) = work.pop() {
        for &p in &preds[pred_count[t] as usize..pred_count[t + 1] as usize] {
            let p = p as usize;
            if arena.losing[p] {
                continue;
            }
            let lost = match owner(p) {
                Player::Two => true,
                Player::One => {
                    alive[p] -= 1;
                    alive[p] == 0
                }
            };
            if lost {
                arena.losing[p] = true;
                work.push(p);
            }
        }
    }
    for u in 0..size {
        if owner(u) == Player::One && !arena.losing[u] {
            let s = u / block;
            let out = &succ[offsets[u] as usize..offsets[u + 1] as usize];
            let pos = out
                .iter()
                .position(|&t| t != NONE && !arena.losing[t as usize])
                .expect("winning node keeps a safe move");
            arena.choice[u] = g.out_edges(s)[pos] as u32;
        }
    }
    Ok(arena)
}

/// Finite-memory winning strategy and its credit, if player 1 wins the
/// capped arena from `s0` with full credit. The cap defaults to `2·n·W`.
pub fn extract_finite_strategy(
    g: &GameGraph,
    s0: StateId,
    cap: Option<u64>,
    limit: u128,
) -> Result<Option<(MooreStrategy, CreditVector)>> {
    if s0 >= g.state_count() {
        return Err(Error::UnknownState(format!("#{s0}")));
    }
    let cap = cap.unwrap_or_else(|| crate::multi::default_cap(g));
    capped_arena(g, cap, limit)?.strategy(g, s0)
}
