//! Pumping schedules: a finite-memory play that cycles through the simple
//! cycles of a nonnegative multi-cycle, each repeated in proportion to its
//! weight, and keeps the running average above `−2α` after a warmup.

use std::collections::VecDeque;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::game::{EdgeId, GameGraph, StateId};
use crate::multicycle::MultiCycleWitness;
use crate::rational::{ceil_to_u64, int, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PlanStep {
    Path(Vec<EdgeId>),
    Repeat { cycle: Vec<EdgeId>, times: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EpsilonSchedule {
    pub alpha: Rational,
    /// Repetition unit.
    pub z: u64,
    /// Path from the start state to the first cycle.
    pub stem: Vec<EdgeId>,
    /// One round, repeated forever.
    pub round: Vec<PlanStep>,
    pub round_length: u64,
    /// Steps after which the running average bound is guaranteed.
    pub warmup: u64,
}

impl EpsilonSchedule {
    /// Repetitions of each cycle in one round.
    pub fn repetitions(&self) -> Vec<u64> {
        self.round
            .iter()
            .filter_map(|p| match p {
                PlanStep::Repeat { times, .. } => Some(*times),
                PlanStep::Path(_) => None,
            })
            .collect()
    }
}

fn shortest_path(g: &GameGraph, from: StateId, to: StateId, allowed: &[bool]) -> Option<Vec<EdgeId>> {
    let mut via: Vec<Option<EdgeId>> = vec![None; g.state_count()];
    let mut seen = vec![false; g.state_count()];
    seen[from] = true;
    let mut queue = VecDeque::from([from]);
    while let Some(s) = queue.pop_front() {
        if s == to {
            let mut path = Vec::new();
            let mut v = to;
            while v != from {
                let e = via[v].expect("visited");
                path.push(e);
                v = g.edge(e).src;
            }
            path.reverse();
            return Some(path);
        }
        for &e in g.out_edges(s) {
            let t = g.edge(e).dst;
            if allowed[t] && !seen[t] {
                seen[t] = true;
                via[t] = Some(e);
                queue.push_back(t);
            }
        }
    }
    None
}

/// Builds the schedule for a multi-cycle witness whose labels are edge
/// indices of `g`. The game must have no player-2 states.
pub fn pump_schedule_from_witness(
    g: &GameGraph,
    start: StateId,
    witness: &MultiCycleWitness,
    alpha: &Rational,
) -> Result<EpsilonSchedule> {
    if !g.is_one_player() {
        return Err(Error::NotOnePlayer("the game has player-2 states".into()));
    }
    if start >= g.state_count() {
        return Err(Error::UnknownState(format!("#{start}")));
    }
    if *alpha <= Rational::zero() {
        return Err(Error::InvalidArgument("alpha must be positive".into()));
    }
    let dims: Vec<usize> = (0..g.dim()).collect();
    if !witness.verify(&g.digraph(), &dims) {
        return Err(Error::WitnessMismatch("witness is not a nonnegative multi-cycle of the game".into()));
    }
    let scaled = witness.integer_scaled();
    let common = scaled.iter().fold(BigInt::zero(), |acc, (_, m)| acc.gcd(m));
    let n = g.state_count() as i64;
    let w = g.max_abs_weight();
    let z = ceil_to_u64(&(int((n + 2) * w) / alpha))?.max(1);

    let component = {
        let d = g.digraph();
        let first = g.edge(scaled[0].0[0]).src;
        d.sccs()
            .into_iter()
            .find(|c| c.contains(&first))
            .expect("every node lies in a component")
    };
    let mut inside = vec![false; g.state_count()];
    for v in component {
        inside[v] = true;
    }
    let anywhere = vec![true; g.state_count()];
    let head = |c: &[EdgeId]| g.edge(c[0]).src;
    let stem = shortest_path(g, start, head(&scaled[0].0), &anywhere)
        .ok_or_else(|| Error::WitnessMismatch("cycles are not reachable from the start".into()))?;

    let mut round = Vec::new();
    let mut length: u64 = 0;
    for (j, (cycle, m)) in scaled.iter().enumerate() {
        let times = (m / &common).to_u64().and_then(|m| m.checked_mul(z)).ok_or(Error::Overflow)?;
        length = length
            .checked_add(times.checked_mul(cycle.len() as u64).ok_or(Error::Overflow)?)
            .ok_or(Error::Overflow)?;
        round.push(PlanStep::Repeat {
            cycle: cycle.clone(),
            times,
        });
        let following = &scaled[(j + 1) % scaled.len()].0;
        let path = shortest_path(g, head(cycle), head(following), &inside).expect("same component");
        length += path.len() as u64;
        if !path.is_empty() {
            round.push(PlanStep::Path(path));
        }
    }
    let warmup = ceil_to_u64(&(int(2 * n * w) * int(length as i64) / alpha))?;
    Ok(EpsilonSchedule {
        alpha: alpha.clone(),
        z,
        stem,
        round,
        round_length: length,
        warmup,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScheduleTrace {
    pub steps: u64,
    pub warmup: u64,
    /// Per dimension, least running average at any step past the warmup.
    pub min_average: Vec<Rational>,
    pub final_average: Vec<Rational>,
    /// `−2α`.
    pub bound: Rational,
    pub bound_met: bool,
}

/// Plays the schedule for `horizon` steps.
pub fn simulate_schedule(g: &GameGraph, sched: &EpsilonSchedule, horizon: u64) -> Result<ScheduleTrace> {
    if horizon < sched.warmup {
        return Err(Error::InvalidArgument(format!(
            "horizon {horizon} is below the warmup {}",
            sched.warmup
        )));
    }
    let k = g.dim();
    let mut sum = vec![0i64; k];
    // Least average as a fraction (numerator, denominator).
    let mut low: Vec<Option<(i64, u64)>> = vec![None; k];
    let mut t: u64 = 0;
    let mut take = |e: EdgeId, t: &mut u64| -> bool {
        if *t >= horizon {
            return false;
        }
        *t += 1;
        for i in 0..k {
            sum[i] += g.edge(e).weight[i];
            if *t >= sched.warmup.max(1) {
                let better = match low[i] {
                    None => true,
                    Some((s, d)) => (sum[i] as i128) * (d as i128) < (s as i128) * (*t as i128),
                };
                if better {
                    low[i] = Some((sum[i], *t));
                }
            }
        }
        true
    };
    for &e in &sched.stem {
        take(e, &mut t);
    }
    if sched.round_length == 0 {
        return Err(Error::InvalidArgument("empty round".into()));
    }
    'outer: while t < horizon {
        for step in &sched.round {
            match step {
                PlanStep::Path(p) => {
                    for &e in p {
                        if !take(e, &mut t) {
                            break 'outer;
                        }
                    }
                }
                PlanStep::Repeat { cycle, times } => {
                    for _ in 0..*times {
                        for &e in cycle {
                            if !take(e, &mut t) {
                                break 'outer;
                            }
                        }
                    }
                }
            }
        }
    }
    let bound = -int(2) * &sched.alpha;
    let min_average: Vec<Rational> = low
        .iter()
        .map(|l| l.map_or_else(Rational::zero, |(s, d)| Rational::new(s.into(), (d as i64).into())))
        .collect();
    let final_average = sum
        .iter()
        .map(|&s| if t == 0 { Rational::zero() } else { Rational::new(s.into(), (t as i64).into()) })
        .collect();
    let bound_met = min_average.iter().all(|m| *m >= bound);
    Ok(ScheduleTrace {
        steps: t,
        warmup: sched.warmup,
        min_average,
        final_average,
        bound,
        bound_met,
    })
}
