//! The round-robin limsup strategy: follow the winning strategy of one
//! dimension until its segment average is back above `−α` after at least
//! `Z = L·W/α` steps, move to the next dimension, halve `α` after every
//! full round.

use num_traits::{One, Zero};

use super::MemorylessStrategy;
use crate::error::{Error, Result};
use crate::game::{GameGraph, Player, StateId};
use crate::rational::{ceil_to_u64, int, Rational};
use crate::single::solve_single_mp_sup;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhaseRecord {
    pub dim: usize,
    pub alpha: Rational,
    pub start_step: u64,
    pub length: u64,
    /// Average of the phase's own segment in its dimension.
    pub segment_average: Rational,
    /// Average of the whole play so far, per dimension, at the phase end.
    pub play_average: Vec<Rational>,
    /// Best whole-play average per dimension seen during the phase.
    pub high_water: Vec<Rational>,
    /// Whole-play average of the phase's dimension is at least `−2α`.
    pub bound_met: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InterleaveTrace {
    pub phases: Vec<PhaseRecord>,
    pub steps: u64,
    /// `α` after the last completed phase.
    pub final_alpha: Rational,
    /// Index of the phase that ran out of steps, if any.
    pub timed_out: Option<usize>,
}

impl InterleaveTrace {
    pub fn all_bounds_met(&self) -> bool {
        self.timed_out.is_none() && self.phases.iter().all(|p| p.bound_met)
    }
}

fn avg(sum: i64, t: u64) -> Rational {
    if t == 0 {
        Rational::zero()
    } else {
        Rational::new(sum.into(), (t as i64).into())
    }
}

/// Runs `phases` phases from `start` with one memoryless strategy per
/// dimension, spending at most `max_steps` steps in total.
pub fn simulate_interleaved_sup(
    g: &GameGraph,
    strategies: &[MemorylessStrategy],
    start: StateId,
    phases: usize,
    max_steps: u64,
) -> Result<InterleaveTrace> {
    if !g.is_one_player() {
        return Err(Error::NotOnePlayer("the game has player-2 states".into()));
    }
    if start >= g.state_count() {
        return Err(Error::UnknownState(format!("#{start}")));
    }
    let k = g.dim();
    if strategies.len() != k {
        return Err(Error::InvalidArgument(format!(
            "expected {k} strategies, found {}",
            strategies.len()
        )));
    }
    for (i, s) in strategies.iter().enumerate() {
        if s.owner != Player::One {
            return Err(Error::MalformedStrategy("strategies must belong to player 1".into()));
        }
        s.validate(g)?;
        if solve_single_mp_sup(g, i)?.len() != g.state_count() || !wins_everywhere(g, s, i) {
            return Err(Error::InvalidArgument(format!(
                "strategy {} does not win dimension {} from every state",
                i + 1,
                i + 1
            )));
        }
    }
    let w = g.max_abs_weight();
    let mut sum = vec![0i64; k];
    let mut t: u64 = 0;
    let mut s = start;
    let mut alpha = Rational::one();
    let mut records = Vec::new();
    for phase in 0..phases {
        let dim = phase % k;
        let z = ceil_to_u64(&(int(t as i64) * int(w) / &alpha))?.max(1);
        let phase_start = t;
        let mut segment = 0i64;
        let mut high: Vec<Rational> = (0..k).map(|i| avg(sum[i], t)).collect();
        loop {
            let depth = t - phase_start;
            if depth >= z && avg(segment, depth) >= -alpha.clone() {
                break;
            }
            if t >= max_steps {
                return Ok(InterleaveTrace {
                    phases: records,
                    steps: t,
                    final_alpha: alpha,
                    timed_out: Some(phase),
                });
            }
            let e = strategies[dim].choice[&s];
            let edge = g.edge(e);
            for i in 0..k {
                sum[i] += edge.weight[i];
            }
            segment += edge.weight[dim];
            t += 1;
            s = edge.dst;
            for i in 0..k {
                let a = avg(sum[i], t);
                if a > high[i] {
                    high[i] = a;
                }
            }
        }
        let play_average: Vec<Rational> = (0..k).map(|i| avg(sum[i], t)).collect();
        let bound = -int(2) * &alpha;
        records.push(PhaseRecord {
            dim,
            alpha: alpha.clone(),
            start_step: phase_start,
            length: t - phase_start,
            segment_average: avg(segment, t - phase_start),
            bound_met: play_average[dim] >= bound,
            play_average,
            high_water: high,
        });
        if dim == k - 1 {
            alpha /= int(2);
        }
    }
    Ok(InterleaveTrace {
        phases: records,
        steps: t,
        final_alpha: alpha,
        timed_out: None,
    })
}

/// Every lasso the strategy produces has a nonnegative cycle in `dim`.
fn wins_everywhere(g: &GameGraph, strat: &MemorylessStrategy, dim: usize) -> bool {
    (0..g.state_count()).all(|s0| {
        let mut index = vec![usize::MAX; g.state_count()];
        let mut path = Vec::new();
        let mut s = s0;
        while index[s] == usize::MAX {
            index[s] = path.len();
            let e = strat.choice[&s];
            path.push(e);
            s = g.edge(e).dst;
        }
        path[index[s]..].iter().map(|&e| g.edge(e).weight[dim]).sum::<i64>() >= 0
    })
}
