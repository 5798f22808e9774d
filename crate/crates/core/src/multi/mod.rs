//! Two-player decision procedures: iterative removal for the limsup
//! objective, memoryless player-2 enumeration for energy and liminf, the
//! mixed objective, and the memoryless player-1 search.

mod enumerate;
pub(crate) mod one_player;

use crate::certificates::{capped_arena, extract_finite_strategy, CreditVector, MemorylessStrategy, MooreStrategy};
use crate::error::{Error, Result};
use crate::game::{attractor_mask, GameGraph, ObjectiveKind, ObjectiveSpec, Player, StateId, StateSet};
use crate::graph::Digraph;
use crate::multicycle::{nonneg_multicycle, MultiCycleWitness};
use crate::single::single_region_mask;

use enumerate::{evaluate_from, find_refutation, Choices, Outcome};
use one_player::{inf_sup_mask, mp_inf_mask, SccOracle, SccTest};

/// Knobs shared by the solvers.
#[derive(Clone, Debug)]
pub struct SolveOptions {
    /// Refuse enumerations over more player-2 strategies than this.
    pub max_strategies: u128,
    /// Enumerate anyway.
    pub force: bool,
    /// Produce a certificate for the verdict when one exists.
    pub certificate: bool,
    /// Also compute the verdict of every state.
    pub full_region: bool,
    /// Energy cap of the capped arena; `2·n·W` when unset.
    pub cap: Option<u64>,
    pub arena_limit: u128,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            max_strategies: 1 << 20,
            force: false,
            certificate: false,
            full_region: false,
            cap: None,
            arena_limit: crate::certificates::DEFAULT_ARENA_LIMIT,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SolveStats {
    /// Player-2 strategies evaluated.
    pub strategies: u128,
    /// Strategies skipped because an evaluated one already covered them.
    pub skipped: u128,
    /// Component verdicts that needed a linear program or circuit search.
    pub lp_solves: u64,
    /// Removal rounds of the iterative solvers.
    pub iterations: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Certificate {
    Player2(MemorylessStrategy),
    Player1 { strategy: MooreStrategy, credit: CreditVector },
}

#[derive(Clone, Debug)]
pub struct SolveReport {
    pub objective: ObjectiveSpec,
    pub from: StateId,
    pub winning: bool,
    /// Player-1 winning region, when computed.
    pub region: Option<StateSet>,
    pub certificate: Option<Certificate>,
    pub method: &'static str,
    pub stats: SolveStats,
}

fn mask_to_set(mask: &[bool]) -> StateSet {
    (0..mask.len()).filter(|&s| mask[s]).collect()
}

fn check_state(g: &GameGraph, s: StateId) -> Result<()> {
    if s >= g.state_count() {
        return Err(Error::UnknownState(format!("#{s}")));
    }
    Ok(())
}

/// Limsup region on the given dimensions inside `active`: repeatedly drop
/// the player-2 attractor of every state lost in a single dimension.
pub(crate) fn mp_sup_region_mask(g: &GameGraph, dims: &[usize], active: &[bool], stats: &mut SolveStats) -> Vec<bool> {
    let n = g.state_count();
    let mut active = active.to_vec();
    loop {
        stats.iterations += 1;
        let mut losing = vec![false; n];
        let mut found = false;
        for &i in dims {
            let win = single_region_mask(g, i, &active);
            for s in 0..n {
                if active[s] && !win[s] {
                    losing[s] = true;
                    found = true;
                }
            }
        }
        if !found {
            return active;
        }
        let attr = attractor_mask(g, Player::Two, &losing, Some(&active));
        for s in 0..n {
            if attr[s] {
                active[s] = false;
            }
        }
    }
}

/// Player-1 region for `MP-sup ≥ 0` in every dimension.
pub fn solve_mp_sup_region(g: &GameGraph) -> SolveReport {
    let dims: Vec<usize> = (0..g.dim()).collect();
    let mut stats = SolveStats::default();
    let mask = mp_sup_region_mask(g, &dims, &vec![true; g.state_count()], &mut stats);
    SolveReport {
        objective: ObjectiveSpec::new(ObjectiveKind::MPSup, g.dim()),
        from: g.initial(),
        winning: mask[g.initial()],
        region: Some(mask_to_set(&mask)),
        certificate: None,
        method: "iterative-removal",
        stats,
    }
}

/// Liminf objective on a graph without player-2 states.
pub fn solve_one_player_mp_inf(g: &GameGraph, s0: StateId) -> Result<bool> {
    check_state(g, s0)?;
    if !g.is_one_player() {
        return Err(Error::NotOnePlayer("the game has player-2 states".into()));
    }
    let dims: Vec<usize> = (0..g.dim()).collect();
    Ok(mp_inf_mask(&g.digraph(), &dims)[s0])
}

/// Searches for a memoryless player-2 strategy under which `s0` reaches no
/// good component inside `active`.
fn refute_from(
    g: &GameGraph,
    active: &[bool],
    s0: StateId,
    test: &SccTest,
    oracle: &mut SccOracle,
    opts: &SolveOptions,
    stats: &mut SolveStats,
) -> Result<Option<MemorylessStrategy>> {
    let choices = Choices::new(g, active, Some(s0));
    choices.guard(opts)?;
    let pick = find_refutation(&choices, stats, |pick| evaluate_from(g, &choices, active, pick, s0, test, oracle));
    Ok(pick.map(|p| complete(g, choices.strategy(&p))))
}

/// Fills in the states outside the enumerated subgame.
fn complete(g: &GameGraph, mut l2: MemorylessStrategy) -> MemorylessStrategy {
    for s in 0..g.state_count() {
        if g.owner(s) == Player::Two {
            l2.choice.entry(s).or_insert(g.out_edges(s)[0]);
        }
    }
    l2
}

/// Region inside `active` of a component test, one enumeration per state.
fn enumerated_region(
    g: &GameGraph,
    active: &[bool],
    test: &SccTest,
    oracle: &mut SccOracle,
    opts: &SolveOptions,
    stats: &mut SolveStats,
) -> Result<Vec<bool>> {
    let mut mask = vec![false; g.state_count()];
    for s in 0..g.state_count() {
        if active[s] {
            mask[s] = refute_from(g, active, s, test, oracle, opts, stats)?.is_none();
        }
    }
    Ok(mask)
}

fn enumeration_solver(
    g: &GameGraph,
    s0: StateId,
    opts: &SolveOptions,
    test: SccTest,
    objective: ObjectiveSpec,
) -> Result<SolveReport> {
    check_state(g, s0)?;
    let mut stats = SolveStats::default();
    let mut oracle = SccOracle::default();
    let all = vec![true; g.state_count()];
    let refutation = refute_from(g, &all, s0, &test, &mut oracle, opts, &mut stats)?;
    let region = if opts.full_region {
        Some(mask_to_set(&enumerated_region(g, &all, &test, &mut oracle, opts, &mut stats)?))
    } else {
        None
    };
    stats.lp_solves = oracle.lp_calls;
    let winning = refutation.is_none();
    let certificate = match refutation {
        Some(l2) if opts.certificate => Some(Certificate::Player2(l2)),
        None if opts.certificate && test == SccTest::Circuit => {
            match extract_finite_strategy(g, s0, opts.cap, opts.arena_limit) {
                Ok(Some((strategy, credit))) => Some(Certificate::Player1 { strategy, credit }),
                Ok(None) | Err(Error::ArenaTooLarge { .. }) => None,
                Err(e) => return Err(e),
            }
        }
        _ => None,
    };
    Ok(SolveReport {
        objective,
        from: s0,
        winning,
        region,
        certificate,
        method: "enumeration",
        stats,
    })
}

/// Energy with unknown initial credit: YES iff no memoryless player-2
/// strategy avoids every reachable nonnegative circuit.
pub fn solve_energy_unknown_credit(g: &GameGraph, s0: StateId, opts: &SolveOptions) -> Result<SolveReport> {
    let objective = ObjectiveSpec::new(ObjectiveKind::EnergyUnknownCredit, g.dim());
    enumeration_solver(g, s0, opts, SccTest::Circuit, objective)
}

/// Finite-memory mean payoff, decided on the capped energy arena.
pub fn solve_finite_memory_mp(g: &GameGraph, s0: StateId, opts: &SolveOptions) -> Result<SolveReport> {
    check_state(g, s0)?;
    let cap = opts.cap.unwrap_or_else(|| default_cap(g));
    let arena = capped_arena(g, cap, opts.arena_limit)?;
    let full = vec![cap; g.dim()];
    let winning = arena.wins(s0, &full);
    let region = Some((0..g.state_count()).filter(|&s| arena.wins(s, &full)).collect());
    let mut stats = SolveStats::default();
    let certificate = if !opts.certificate {
        None
    } else if winning {
        arena
            .strategy(g, s0)?
            .map(|(strategy, credit)| Certificate::Player1 { strategy, credit })
    } else {
        let mut oracle = SccOracle::default();
        let all = vec![true; g.state_count()];
        let l2 = refute_from(g, &all, s0, &SccTest::Circuit, &mut oracle, opts, &mut stats)?;
        stats.lp_solves = oracle.lp_calls;
        l2.map(Certificate::Player2)
    };
    Ok(SolveReport {
        objective: ObjectiveSpec::new(ObjectiveKind::FiniteMemoryMP, g.dim()),
        from: s0,
        winning,
        region,
        certificate,
        method: "capped-arena",
        stats,
    })
}

/// Default cap `2·n·W` of the capped arena.
pub fn default_cap(g: &GameGraph) -> u64 {
    2 * g.state_count() as u64 * g.max_abs_weight() as u64
}

/// Liminf mean payoff: YES iff every memoryless player-2 strategy leaves a
/// reachable component with a nonnegative multi-cycle.
pub fn solve_mp_inf(g: &GameGraph, s0: StateId, opts: &SolveOptions) -> Result<SolveReport> {
    let dims: Vec<usize> = (0..g.dim()).collect();
    let objective = ObjectiveSpec::new(ObjectiveKind::MPInf, g.dim());
    enumeration_solver(g, s0, opts, SccTest::MultiCycle(dims), objective)
}

/// Liminf on `inf` together with limsup on `sup` (0-based dimensions).
pub fn solve_mp_infsup(
    g: &GameGraph,
    inf: &StateSet,
    sup: &StateSet,
    s0: StateId,
    opts: &SolveOptions,
) -> Result<SolveReport> {
    check_state(g, s0)?;
    let objective = ObjectiveSpec::inf_sup(g.dim(), inf.iter().copied(), sup.iter().copied()).normalized();
    objective.validate()?;
    if !objective.inf_dims.is_disjoint(&objective.sup_dims) {
        return Err(Error::InvalidArgument("inf and sup dimensions overlap".into()));
    }
    let inf: Vec<usize> = objective.inf_dims.iter().copied().collect();
    let sup: Vec<usize> = objective.sup_dims.iter().copied().collect();
    if inf.is_empty() {
        let mut stats = SolveStats::default();
        let mask = mp_sup_region_mask(g, &sup, &vec![true; g.state_count()], &mut stats);
        return Ok(SolveReport {
            objective,
            from: s0,
            winning: mask[s0],
            region: Some(mask_to_set(&mask)),
            certificate: None,
            method: "iterative-removal",
            stats,
        });
    }
    if sup.is_empty() {
        // The other branches always yield a region, so this one does too.
        let opts = SolveOptions {
            full_region: true,
            ..opts.clone()
        };
        return enumeration_solver(g, s0, &opts, SccTest::MultiCycle(inf), objective);
    }
    let n = g.state_count();
    let mut stats = SolveStats::default();
    let mut oracle = SccOracle::default();
    let mut active = vec![true; n];
    loop {
        stats.iterations += 1;
        let mut changed = false;
        for &l in &sup {
            let mut dims = inf.clone();
            dims.push(l);
            let win = enumerated_region(g, &active, &SccTest::MultiCycle(dims), &mut oracle, opts, &mut stats)?;
            for s in 0..n {
                if active[s] && !win[s] {
                    active[s] = false;
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    stats.lp_solves = oracle.lp_calls;
    let winning = active[s0];
    let certificate = if opts.certificate && !winning {
        infsup_refutation(g, s0, &inf, &sup, opts, &mut stats)?.map(Certificate::Player2)
    } else {
        None
    };
    Ok(SolveReport {
        objective,
        from: s0,
        winning,
        region: Some(mask_to_set(&active)),
        certificate,
        method: "iterative-removal",
        stats,
    })
}

/// Memoryless player-2 strategy whose one-player graph fails the mixed
/// objective from `s0`, if there is one.
fn infsup_refutation(
    g: &GameGraph,
    s0: StateId,
    inf: &[usize],
    sup: &[usize],
    opts: &SolveOptions,
    stats: &mut SolveStats,
) -> Result<Option<MemorylessStrategy>> {
    let all = vec![true; g.state_count()];
    let choices = Choices::new(g, &all, Some(s0));
    choices.guard(opts)?;
    let last = choices.states.len().checked_sub(1);
    let pick = find_refutation(&choices, stats, |pick| {
        let d = choices.graph(g, &all, pick);
        if inf_sup_mask(&d, inf, sup)[s0] {
            match last {
                Some(l) => Outcome::Survives(Some(l)),
                None => Outcome::Survives(None),
            }
        } else {
            Outcome::Refutes
        }
    });
    Ok(pick.map(|p| complete(g, choices.strategy(&p))))
}

/// Nonnegative multi-cycle (over every dimension) in some component
/// reachable from `s0` of a game without player-2 states. Cycle labels are
/// edge indices of `g`.
pub fn reachable_multicycle(g: &GameGraph, s0: StateId) -> Result<Option<MultiCycleWitness>> {
    check_state(g, s0)?;
    if !g.is_one_player() {
        return Err(Error::NotOnePlayer("the game has player-2 states".into()));
    }
    let d = g.digraph();
    let reach = d.reachable_from(s0);
    let dims: Vec<usize> = (0..g.dim()).collect();
    for (_, scc) in one_player::cyclic_components(&d, &reach) {
        if let Some(w) = nonneg_multicycle(&scc, &dims)? {
            return Ok(Some(w));
        }
    }
    Ok(None)
}

/// A memoryless player-1 strategy that wins energy with unknown credit
/// from `s0`: every cycle reachable under it is nonnegative in every
/// dimension.
pub fn solve_memoryless_player1(g: &GameGraph, s0: StateId) -> Result<Option<MemorylessStrategy>> {
    check_state(g, s0)?;
    let mut search = Player1Search {
        g,
        choice: vec![None; g.state_count()],
        reached: vec![false; g.state_count()],
        order: Vec::new(),
    };
    search.reach(s0);
    if !search.run() {
        return Ok(None);
    }
    let choice = (0..g.state_count())
        .filter(|&s| g.owner(s) == Player::One)
        .map(|s| (s, search.choice[s].unwrap_or(g.out_edges(s)[0])))
        .collect();
    Ok(Some(MemorylessStrategy {
        owner: Player::One,
        choice,
    }))
}

struct Player1Search<'a> {
    g: &'a GameGraph,
    choice: Vec<Option<usize>>,
    reached: Vec<bool>,
    order: Vec<StateId>,
}

impl Player1Search<'_> {
    /// Marks `s` reached and follows every edge already fixed from it.
    fn reach(&mut self, s: StateId) {
        if self.reached[s] {
            return;
        }
        self.reached[s] = true;
        self.order.push(s);
        if self.g.owner(s) == Player::Two {
            for &e in self.g.out_edges(s) {
                self.reach(self.g.edge(e).dst);
            }
        }
    }

    fn run(&mut self) -> bool {
        if self.has_negative_cycle() {
            return false;
        }
        let Some(&s) = self
            .order
            .iter()
            .find(|&&s| self.g.owner(s) == Player::One && self.choice[s].is_none())
        else {
            return true;
        };
        for &e in self.g.out_edges(s) {
            let saved = (self.reached.clone(), self.order.len());
            self.choice[s] = Some(e);
            self.reach(self.g.edge(e).dst);
            if self.run() {
                return true;
            }
            self.choice[s] = None;
            self.reached = saved.0;
            self.order.truncate(saved.1);
        }
        false
    }

    /// Negative cycle in some dimension among the edges fixed so far.
    fn has_negative_cycle(&self) -> bool {
        let g = self.g;
        let mut d = Digraph::new(g.state_count(), g.dim());
        for &s in &self.order {
            let edges: Vec<usize> = match g.owner(s) {
                Player::One => self.choice[s].into_iter().collect(),
                Player::Two => g.out_edges(s).to_vec(),
            };
            for e in edges {
                d.add_arc(s, g.edge(e).dst, g.edge(e).weight.0.clone(), e);
            }
        }
        (0..g.dim()).any(|i| negative_cycle(&d, i))
    }
}

/// Bellman-Ford from a virtual source joined to every node.
fn negative_cycle(d: &Digraph, dim: usize) -> bool {
    let n = d.node_count();
    let mut dist = vec![0i64; n];
    for _ in 0..=n {
        let mut changed = false;
        for a in d.arcs() {
            let cand = dist[a.src] + a.weight[dim];
            if cand < dist[a.dst] {
                dist[a.dst] = cand;
                changed = true;
            }
        }
        if !changed {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certificates::{score_p1_finite_strategy, verify_p2_certificate};
    use crate::game::{shift_weights, GameBuilder};
    use crate::generators::{fixture, from_3sat, random_game, CnfFormula};
    use crate::rational::int;

    fn fig3(t: i64) -> GameGraph {
        shift_weights(&fixture("fig3").unwrap(), &[int(t), int(t)]).unwrap()
    }

    fn with_cert() -> SolveOptions {
        SolveOptions {
            certificate: true,
            ..SolveOptions::default()
        }
    }

    fn set(v: &[usize]) -> StateSet {
        v.iter().copied().collect()
    }

    #[test]
    fn mp_sup_examples() {
        assert_eq!(solve_mp_sup_region(&fig3(2)).region.unwrap(), set(&[0, 1]));
        assert!(solve_mp_sup_region(&fig3(3)).region.unwrap().is_empty());
        let g = shift_weights(&fixture("fig3").unwrap(), &[int(3), int(2)]).unwrap();
        assert!(!solve_mp_sup_region(&g).winning);
    }

    #[test]
    fn one_player_mp_inf() {
        assert!(solve_one_player_mp_inf(&fig3(1), 0).unwrap());
        let mut b = GameBuilder::new(2);
        let s = b.state("s", Player::One);
        b.edge("l", s, s, [-1, 1]);
        assert!(!solve_one_player_mp_inf(&b.build(s).unwrap(), 0).unwrap());
        assert!(solve_one_player_mp_inf(&fixture("fig1").unwrap(), 0).is_err());
    }

    #[test]
    fn energy_examples() {
        let g = fixture("fig1").unwrap();
        let r = solve_energy_unknown_credit(&g, 0, &with_cert()).unwrap();
        assert!(r.winning);
        let Some(Certificate::Player1 { strategy, credit }) = r.certificate else {
            panic!("expected a player-1 certificate")
        };
        assert_eq!(score_p1_finite_strategy(&g, &strategy, 0).unwrap(), Some(credit));

        let r = solve_energy_unknown_credit(&fig3(1), 0, &with_cert()).unwrap();
        assert!(!r.winning);

        let phi = CnfFormula::new(1, vec![[1, 1, 1]]).unwrap();
        let g = from_3sat(&phi);
        let r = solve_energy_unknown_credit(&g, g.initial(), &with_cert()).unwrap();
        assert!(!r.winning);
        let Some(Certificate::Player2(l2)) = r.certificate else { panic!() };
        let energy = ObjectiveSpec::new(ObjectiveKind::EnergyUnknownCredit, g.dim());
        assert!(verify_p2_certificate(&g, &l2, g.initial(), &energy).unwrap());

        let phi = CnfFormula::new(1, vec![[1, 1, 1], [-1, -1, -1]]).unwrap();
        let g = from_3sat(&phi);
        assert!(solve_energy_unknown_credit(&g, g.initial(), &SolveOptions::default()).unwrap().winning);
    }

    #[test]
    fn finite_memory_examples() {
        assert!(solve_finite_memory_mp(&fixture("fig1").unwrap(), 0, &with_cert()).unwrap().winning);
        let r = solve_finite_memory_mp(&fig3(1), 0, &with_cert()).unwrap();
        assert!(!r.winning);
        let Some(Certificate::Player2(l2)) = r.certificate else { panic!() };
        assert!(l2.choice.is_empty());
    }

    #[test]
    fn mp_inf_examples() {
        assert!(solve_mp_inf(&fig3(1), 0, &SolveOptions::default()).unwrap().winning);
        let mut b = GameBuilder::new(2);
        let s = b.state("s", Player::Two);
        let t = b.state("t", Player::One);
        let u = b.state("u", Player::One);
        b.edge("st", s, t, [0, 0]);
        b.edge("su", s, u, [0, 0]);
        b.edge("tt", t, t, [-1, 1]);
        b.edge("uu", u, u, [-1, 1]);
        let g = b.build(s).unwrap();
        let r = solve_mp_inf(&g, 0, &with_cert()).unwrap();
        assert!(!r.winning);
        assert!(matches!(r.certificate, Some(Certificate::Player2(_))));
    }

    #[test]
    fn infsup_examples() {
        let g = fig3(1);
        let opts = SolveOptions::default();
        assert!(solve_mp_infsup(&g, &set(&[0]), &set(&[1]), 0, &opts).unwrap().winning);
        assert!(solve_mp_infsup(&g, &set(&[]), &set(&[0, 1]), 0, &opts).unwrap().winning);
        let both = solve_mp_infsup(&g, &set(&[0, 1]), &set(&[]), 0, &opts).unwrap();
        assert_eq!(both.winning, solve_mp_inf(&g, 0, &opts).unwrap().winning);
    }

    #[test]
    fn memoryless_player1_examples() {
        let mut b = GameBuilder::new(1);
        let s = b.state("s", Player::One);
        b.edge("z", s, s, [0]);
        let g = b.build(s).unwrap();
        assert_eq!(solve_memoryless_player1(&g, 0).unwrap().unwrap().choice, [(0, 0)].into_iter().collect());
        assert!(solve_memoryless_player1(&fig3(1), 0).unwrap().is_none());
        assert!(solve_memoryless_player1(&fig3(0), 0).unwrap().is_some());
    }

    #[test]
    fn guard_refuses_large_enumerations() {
        let g = random_game(12, 2, 2, 1.0, 4);
        let opts = SolveOptions {
            max_strategies: 8,
            ..SolveOptions::default()
        };
        assert!(matches!(
            solve_energy_unknown_credit(&g, 0, &opts),
            Err(Error::TooManyStrategies { .. })
        ));
    }

    #[test]
    fn backjumping_matches_plain_enumeration() {
        for seed in 0..60 {
            let g = random_game(5, 2, 2, 0.6, seed);
            let all = vec![true; g.state_count()];
            for s0 in 0..g.state_count() {
                let fast = solve_energy_unknown_credit(&g, s0, &SolveOptions::default()).unwrap().winning;
                let choices = Choices::new(&g, &all, Some(s0));
                let mut stats = SolveStats::default();
                let mut oracle = SccOracle::default();
                let last = choices.states.len().checked_sub(1);
                let slow = find_refutation(&choices, &mut stats, |pick| {
                    match evaluate_from(&g, &choices, &all, pick, s0, &SccTest::Circuit, &mut oracle) {
                        Outcome::Refutes => Outcome::Refutes,
                        Outcome::Survives(_) => Outcome::Survives(last),
                    }
                })
                .is_none();
                assert_eq!(fast, slow, "seed {seed} state {s0}");
            }
        }
    }
}
