//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure.

use std::collections::BTreeSet;
use std::process::{Command, ExitCode};
use std::sync::atomic::{AtomicU64, AtomicUsize, Ordering};
use std::time::{Duration, Instant};

use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use mwgames::certificates::*;
use mwgames::generators::*;
use mwgames::multicycle::{nonneg_multicycle, zero_circuit_exists, DEFAULT_WITNESS_BOUND};
use mwgames::rational::{int, ratio};
use mwgames::single::single_dim_strategy;
use mwgames::*;

/// Walk length explored by the closed-walk oracle.
const WALK_BOUND: usize = 12;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn timed(limit: Option<Duration>, f: impl FnOnce() -> Outcome) -> Outcome {
    let start = Instant::now();
    let mut o = f();
    let spent = start.elapsed();
    if let Some(limit) = limit {
        if spent > limit {
            o.pass = false;
        }
        o.detail = format!("{}; {:.2?} (limit {:?})", o.detail, spent, limit);
    } else {
        o.detail = format!("{}; {:.2?}", o.detail, spent);
    }
    o
}

fn shifted(name: &str, t: &[i64]) -> GameGraph {
    let t: Vec<BigRational> = t.iter().map(|&x| int(x)).collect();
    shift_weights(&fixture(name).unwrap(), &t).unwrap()
}

/// Small seeded game: 2 to 5 states, 1 or 2 dimensions, weights in [-2,2].
fn small_game(seed: u64) -> GameGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(2..=5);
    let k = rng.gen_range(1..=2);
    random_game(n, k, 2, 0.5, seed)
}

fn region(r: Option<StateSet>) -> StateSet {
    r.expect("region computed")
}

fn full_region() -> SolveOptions {
    SolveOptions {
        full_region: true,
        ..SolveOptions::default()
    }
}

fn fig1_suite() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("fig1.mwg");
    std::fs::write(&path, serialize_game(&fixture("fig1").unwrap())).unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_mwg"))
        .args(["solve", "--obj", "energy", path.to_str().unwrap(), "--from", "s0"])
        .output()
        .unwrap();
    let cli_yes = out.status.code() == Some(0) && String::from_utf8_lossy(&out.stdout).lines().next() == Some("YES");

    let g = fixture("fig1").unwrap();
    let alternating = |first: usize| {
        let other = 7 - first;
        let mut update = vec![vec![0; 5], vec![1; 5]];
        update[0][first] = 1;
        update[1][other] = 0;
        MooreStrategy {
            owner: Player::One,
            memory: 2,
            initial: 0,
            next: vec![vec![None, Some(2), Some(first)], vec![None, Some(2), Some(other)]],
            update,
        }
    };
    let c1 = score_p1_finite_strategy(&g, &alternating(4), 0).unwrap();
    let c2 = score_p1_finite_strategy(&g, &alternating(3), 0).unwrap();
    let left = MemorylessStrategy {
        owner: Player::Two,
        choice: [(0, 0)].into_iter().collect(),
    };
    let energy = ObjectiveSpec::new(ObjectiveKind::EnergyUnknownCredit, 2);
    let left_refutes = verify_p2_certificate(&g, &left, 0, &energy).unwrap();
    let pass = cli_yes
        && c1 == Some(CreditVector(vec![2, 1]))
        && c2 == Some(CreditVector(vec![3, 0]))
        && !left_refutes;
    outcome(
        pass,
        format!(
            "cli {} credits {:?} {:?} always-left refutes={}",
            if cli_yes { "YES" } else { "not YES" },
            c1.map(|c| c.to_string()),
            c2.map(|c| c.to_string()),
            left_refutes
        ),
    )
}

fn fig3_suite() -> Outcome {
    let opts = SolveOptions::default();
    let fin = solve_finite_memory_mp(&shifted("fig3", &[1, 1]), 0, &opts).unwrap().winning;
    let inf = solve_mp_inf(&shifted("fig3", &[1, 1]), 0, &opts).unwrap().winning;
    let sup = solve_mp_sup_region(&shifted("fig3", &[2, 2])).winning;
    let sup_above = solve_mp_sup_region(&shifted("fig3", &[3, 2])).winning;
    outcome(
        !fin && inf && sup && !sup_above,
        format!("mp-fin(1,1)={fin} mp-inf(1,1)={inf} mp-sup(2,2)={sup} mp-sup(3,2)={sup_above}"),
    )
}

fn sat_reduction() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(36);
    let mut agree = 0;
    let mut unsat = 0;
    for i in 0..50 {
        // Few variables and repeated literals keep unsatisfiable formulas common.
        let vars = rng.gen_range(1..=3);
        let clauses = rng.gen_range(3..=6);
        let phi = random_cnf(vars, clauses, 1000 + i);
        let g = from_3sat(&phi);
        let yes = solve_energy_unknown_credit(&g, g.initial(), &SolveOptions::default()).unwrap().winning;
        let sat = brute_force_sat(&phi).unwrap();
        unsat += usize::from(!sat);
        agree += usize::from(yes == !sat);
    }
    outcome(agree == 50, format!("{agree}/50 agree ({unsat} unsatisfiable)"))
}

fn capped_equivalence() -> Outcome {
    let mut agree = 0;
    let mut states = 0;
    let mut bad = Vec::new();
    for seed in 0..100 {
        let g = small_game(seed);
        let mut same = true;
        for s in 0..g.state_count() {
            let a = solve_energy_unknown_credit(&g, s, &SolveOptions::default()).unwrap().winning;
            let b = solve_finite_memory_mp(&g, s, &SolveOptions::default()).unwrap().winning;
            same &= a == b;
            states += 1;
        }
        if same {
            agree += 1;
        } else {
            bad.push(seed);
        }
    }
    outcome(agree == 100, format!("{agree}/100 games agree on all {states} states; mismatches {bad:?}"))
}

fn infsup_collapse() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(49);
    let mut agree = 0;
    let mut checks = 0;
    for seed in 0..50 {
        let g = random_game(rng.gen_range(2..=5), 2, 2, 0.5, 7000 + seed);
        // Random partition of {0,1} with a nonempty sup side.
        let (inf, sup): (BTreeSet<usize>, BTreeSet<usize>) = match rng.gen_range(0..3) {
            0 => ([].into(), [0, 1].into()),
            1 => ([0].into(), [1].into()),
            _ => ([1].into(), [0].into()),
        };
        let mut same = true;
        for &l in &sup {
            let one: BTreeSet<usize> = [l].into();
            let mixed = region(solve_mp_infsup(&g, &inf, &one, 0, &SolveOptions::default()).unwrap().region);
            let mut dims = inf.clone();
            dims.insert(l);
            let plain = if dims.len() == g.dim() {
                region(solve_mp_inf(&g, 0, &full_region()).unwrap().region)
            } else {
                region(solve_mp_infsup(&g, &dims, &BTreeSet::new(), 0, &SolveOptions::default()).unwrap().region)
            };
            checks += 1;
            same &= mixed == plain;
        }
        agree += usize::from(same);
    }
    outcome(agree == 50, format!("{agree}/50 games, {checks} region comparisons"))
}

fn containment() -> Outcome {
    let mut violations = 0;
    for seed in 0..100 {
        let g = small_game(seed);
        let energy = region(solve_energy_unknown_credit(&g, 0, &full_region()).unwrap().region);
        let inf = region(solve_mp_inf(&g, 0, &full_region()).unwrap().region);
        let sup = region(solve_mp_sup_region(&g).region);
        violations += usize::from(!energy.is_subset(&inf)) + usize::from(!inf.is_subset(&sup));
        let k = g.dim();
        for mask in 0..(1u32 << k) {
            let i: StateSet = (0..k).filter(|d| mask >> d & 1 == 1).collect();
            let j: StateSet = (0..k).filter(|d| mask >> d & 1 == 0).collect();
            let mixed = region(solve_mp_infsup(&g, &i, &j, 0, &SolveOptions::default()).unwrap().region);
            violations += usize::from(!inf.is_subset(&mixed)) + usize::from(!mixed.is_subset(&sup));
        }
    }
    outcome(violations == 0, format!("{violations} violations over 100 games"))
}

fn limsup_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let mut agree = 0;
    for seed in 0..50 {
        let g = random_game(rng.gen_range(2..=6), rng.gen_range(1..=2), 2, 0.5, 9000 + seed);
        agree += usize::from(solve_mp_sup_region(&g).region.unwrap() == mp_sup_oracle(&g));
    }
    outcome(agree == 50, format!("{agree}/50 regions equal"))
}

/// Symmetries of the arc universe: vertex permutations, per-dimension
/// negation and, for two dimensions, swapping them. Each maps an arc id to
/// an arc id.
fn symmetry_tables(k: usize) -> Vec<Vec<u8>> {
    let wcodes = 3usize.pow(k as u32);
    let decode = |c: usize| -> Vec<i64> {
        let mut c = c;
        let mut w = vec![0; k];
        for x in w.iter_mut().rev() {
            *x = (c % 3) as i64 - 1;
            c /= 3;
        }
        w
    };
    let encode = |w: &[i64]| w.iter().fold(0usize, |acc, &x| acc * 3 + (x + 1) as usize);
    let perms: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    let swaps: &[bool] = if k == 2 { &[false, true] } else { &[false] };
    let mut tables = Vec::new();
    for p in perms {
        for signs in 0..(1usize << k) {
            for &swap in swaps {
                let mut t = Vec::with_capacity(9 * wcodes);
                for pair in 0..9 {
                    let (s, d) = (pair / 3, pair % 3);
                    for c in 0..wcodes {
                        let mut w = decode(c);
                        for (i, x) in w.iter_mut().enumerate() {
                            if signs >> i & 1 == 1 {
                                *x = -*x;
                            }
                        }
                        if swap {
                            w.swap(0, 1);
                        }
                        t.push(((p[s] * 3 + p[d]) * wcodes + encode(&w)) as u8);
                    }
                }
                tables.push(t);
            }
        }
    }
    tables
}

fn is_canonical(set: &[u8], tables: &[Vec<u8>]) -> bool {
    let mut img = [0u8; 5];
    let n = set.len();
    for t in &tables[1..] {
        for (i, &a) in set.iter().enumerate() {
            img[i] = t[a as usize];
        }
        img[..n].sort_unstable();
        if img[..n] < *set {
            return false;
        }
    }
    true
}

#[derive(Default)]
struct FamilyCount {
    sets: AtomicU64,
    canonical: AtomicU64,
    with_circuit: AtomicU64,
    disagree: AtomicU64,
    /// Disagreements where only the solver found a zero circuit.
    solver_only: AtomicU64,
    /// Longest shortest zero walk among the disagreements.
    longest: AtomicU64,
    bad_witness: AtomicU64,
}

fn check_family(k: usize, count: &FamilyCount) {
    let tables = symmetry_tables(k);
    let wcodes = 3usize.pow(k as u32);
    let universe = 9 * wcodes;
    let graph = |set: &[u8]| {
        let mut d = Digraph::new(3, k);
        for (l, &a) in set.iter().enumerate() {
            let a = a as usize;
            let (pair, c) = (a / wcodes, a % wcodes);
            let mut w = vec![0i64; k];
            let mut c = c;
            for x in w.iter_mut().rev() {
                *x = (c % 3) as i64 - 1;
                c /= 3;
            }
            d.add_arc(pair / 3, pair % 3, w, l);
        }
        d
    };
    let next_first = AtomicUsize::new(0);
    let threads = std::thread::available_parallelism().map_or(2, |n| n.get()).min(16);
    std::thread::scope(|scope| {
        for _ in 0..threads {
            scope.spawn(|| loop {
                let first = next_first.fetch_add(1, Ordering::Relaxed);
                if first > universe {
                    return;
                }
                // `first == universe` stands for the empty set.
                let mut stack: Vec<u8> = Vec::with_capacity(5);
                let mut visit = |set: &[u8]| {
                    count.sets.fetch_add(1, Ordering::Relaxed);
                    if !is_canonical(set, &tables) {
                        return;
                    }
                    count.canonical.fetch_add(1, Ordering::Relaxed);
                    let d = graph(set);
                    let answer = zero_circuit_exists(&d, DEFAULT_WITNESS_BOUND);
                    let oracle = closed_walk_oracle(&d, WALK_BOUND).zero;
                    if answer.exists {
                        count.with_circuit.fetch_add(1, Ordering::Relaxed);
                        if !answer.witness.as_ref().is_some_and(|w| w.verify(&d, true)) {
                            count.bad_witness.fetch_add(1, Ordering::Relaxed);
                        }
                    }
                    if answer.exists != oracle {
                        count.disagree.fetch_add(1, Ordering::Relaxed);
                        if answer.exists {
                            count.solver_only.fetch_add(1, Ordering::Relaxed);
                            if let Some(len) = (WALK_BOUND + 1..=64).find(|&l| closed_walk_oracle(&d, l).zero) {
                                count.longest.fetch_max(len as u64, Ordering::Relaxed);
                            }
                        }
                    }
                };
                if first == universe {
                    visit(&[]);
                    continue;
                }
                fn extend(stack: &mut Vec<u8>, from: usize, universe: usize, visit: &mut dyn FnMut(&[u8])) {
                    visit(stack);
                    if stack.len() == 5 {
                        return;
                    }
                    for a in from..universe {
                        stack.push(a as u8);
                        extend(stack, a + 1, universe, visit);
                        stack.pop();
                    }
                }
                stack.push(first as u8);
                extend(&mut stack, first + 1, universe, &mut visit);
            });
        }
    });
}

fn zero_circuits() -> Outcome {
    let mut parts = Vec::new();
    let mut pass = true;
    for k in [1, 2] {
        let count = FamilyCount::default();
        check_family(k, &count);
        let disagree = count.disagree.load(Ordering::Relaxed);
        let bad = count.bad_witness.load(Ordering::Relaxed);
        pass &= disagree == 0 && bad == 0;
        let mut line = format!(
            "k={k}: {} sets, {} up to symmetry, {} with a zero circuit, {disagree} disagreements, {bad} bad witnesses",
            count.sets.load(Ordering::Relaxed),
            count.canonical.load(Ordering::Relaxed),
            count.with_circuit.load(Ordering::Relaxed),
        );
        if disagree > 0 {
            line += &format!(
                " ({} solver-only, shortest zero walk there up to length {})",
                count.solver_only.load(Ordering::Relaxed),
                count.longest.load(Ordering::Relaxed)
            );
        }
        parts.push(line);
    }
    let b = fixture("barrier").unwrap().digraph();
    let circuit = zero_circuit_exists(&b, DEFAULT_WITNESS_BOUND).exists;
    let multicycle = nonneg_multicycle(&b, &[0, 1, 2]).unwrap().is_some();
    pass &= !circuit && multicycle;
    parts.push(format!("barrier: zero circuit={circuit}, multi-cycle LP feasible={multicycle}"));
    outcome(pass, parts.join("; "))
}

fn lp_audit() -> Outcome {
    let a = mwgames::lp::audit();
    outcome(
        a.failures == 0 && a.verified == a.solves && a.solves > 0,
        format!("{} solves, {} self-checked, {} failures", a.solves, a.verified, a.failures),
    )
}

fn pumping() -> Outcome {
    let g = shifted("fig3", &[1, 1]);
    let witness = reachable_multicycle(&g, 0).unwrap().expect("fig3 at (1,1) has a multi-cycle");
    let mut pass = true;
    let mut parts = Vec::new();
    for alpha in [ratio(1, 2), ratio(1, 4)] {
        let sched = pump_schedule_from_witness(&g, 0, &witness, &alpha).unwrap();
        let tr = simulate_schedule(&g, &sched, 10_000).unwrap();
        let bound = tr.bound.clone();
        let ok = tr.bound_met && tr.min_average.iter().all(|m| *m >= bound);
        pass &= ok;
        let mins: Vec<String> = tr.min_average.iter().map(|m| m.to_string()).collect();
        parts.push(format!(
            "alpha {alpha}: Z={} round={} warmup={} min post-warmup averages [{}] vs {bound}",
            sched.z,
            sched.round_length,
            sched.warmup,
            mins.join(", ")
        ));
    }
    outcome(pass, parts.join("; "))
}

fn interleaving() -> Outcome {
    let g = shifted("fig3", &[2, 2]);
    let strategies: Vec<MemorylessStrategy> = (0..2)
        .map(|i| MemorylessStrategy {
            owner: Player::One,
            choice: single_dim_strategy(&g, i).unwrap(),
        })
        .collect();
    let tr = simulate_interleaved_sup(&g, &strategies, 0, 6, 1_000_000).unwrap();
    let met = tr.phases.iter().filter(|p| p.bound_met).count();
    outcome(
        tr.phases.len() == 6 && tr.all_bounds_met() && tr.steps <= 1_000_000,
        format!(
            "{} phases in {} steps, {met} boundaries meet -2*alpha, final alpha {}",
            tr.phases.len(),
            tr.steps,
            tr.final_alpha
        ),
    )
}

fn disjoint_paths() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut agree = 0;
    let mut positive = 0;
    for seed in 0..30 {
        let n = rng.gen_range(4..=8);
        let graph = random_digraph(n, rng.gen_range(0.2..0.45), 300 + seed);
        let truth = brute_force_disjoint_paths(&graph, 0, 1, 2, 3).unwrap();
        let g = from_disjoint_paths(&graph, 0, 1, 2, 3, false).unwrap();
        let found = solve_memoryless_player1(&g, g.initial()).unwrap().is_some();
        positive += usize::from(truth);
        agree += usize::from(truth == found);
    }
    outcome(agree == 30, format!("{agree}/30 agree ({positive} with disjoint paths)"))
}

fn main() -> ExitCode {
    type Criterion = (&'static str, Option<Duration>, fn() -> Outcome);
    let criteria: [Criterion; 12] = [
        ("fig1 credits and verdict", Some(Duration::from_secs(1)), fig1_suite),
        ("fig3 verdicts", Some(Duration::from_secs(1)), fig3_suite),
        ("3SAT reduction", Some(Duration::from_secs(60)), sat_reduction),
        ("energy vs capped arena", Some(Duration::from_secs(120)), capped_equivalence),
        ("one sup dimension vs liminf", None, infsup_collapse),
        ("objective containment", None, containment),
        ("limsup region vs brute force", None, limsup_oracle),
        ("zero circuits vs closed walks", None, zero_circuits),
        ("LP self-check", None, lp_audit),
        ("pumping schedule", None, pumping),
        ("interleaving strategy", None, interleaving),
        ("disjoint-paths reduction", None, disjoint_paths),
    ];
    // The LP audit covers every other criterion, so it runs last.
    let order = [0, 1, 2, 3, 4, 5, 6, 7, 9, 10, 11, 8];
    let mut results: Vec<Option<Outcome>> = (0..12).map(|_| None).collect();
    for i in order {
        let (_, limit, f) = criteria[i];
        results[i] = Some(timed(limit, f));
    }
    let mut failed = 0;
    for (i, r) in results.into_iter().enumerate() {
        let r = r.unwrap();
        failed += usize::from(!r.pass);
        println!(
            "[{}] {:>2}. {}: {}",
            if r.pass { "PASS" } else { "FAIL" },
            i + 1,
            criteria[i].0,
            r.detail
        );
    }
    println!("{} of 12 criteria pass", 12 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
