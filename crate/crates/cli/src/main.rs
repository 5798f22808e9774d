//! `mwg`: command-line front end for the multi-weighted game solvers.
//!
//! The first line on stdout is the verdict (`YES`, `NO`, `VALID` or
//! `INVALID`) when the command has one; exit code 0 for YES/VALID, 1 for
//! NO/INVALID, 2 for usage and input errors.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use mwgames::certificates::{
    parse_certificate, pump_schedule_from_witness, score_p1_finite_strategy, serialize_certificate,
    simulate_interleaved_sup, simulate_schedule, verify_p2_certificate, CertificateFile, CertificateStrategy,
    MemorylessStrategy, DEFAULT_ARENA_LIMIT,
};
use mwgames::generators::{
    fixture, from_3sat, from_disjoint_paths, parse_dimacs, parse_edge_list, random_cnf, random_game, to_dimacs,
};
use mwgames::rational::{format_rational, parse_rational};
use mwgames::single::single_dim_strategy;
use mwgames::*;

#[derive(Parser)]
#[command(name = "mwg", version, about = "Solve multi-dimensional energy and mean-payoff games")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide an objective from one state.
    Solve(SolveArgs),
    /// Check a certificate against a game and objective.
    Verify(VerifyArgs),
    /// Write a game to stdout.
    Generate {
        #[command(subcommand)]
        what: Generate,
    },
    /// Mean payoff of an ultimately periodic play.
    Eval {
        /// States of the stem, `/`, states of the loop, e.g. "s0 s1 / s2 s3".
        #[arg(long)]
        lasso: String,
        game: PathBuf,
    },
    /// Run one of the infinite-memory strategies for a finite horizon.
    Simulate {
        #[command(subcommand)]
        what: Simulate,
    },
}

#[derive(Args, Clone)]
struct ObjectiveArgs {
    /// energy, mp-fin, mp-sup, mp-inf or mp-infsup.
    #[arg(long)]
    obj: String,
    /// Liminf dimensions (1-based), for mp-infsup.
    #[arg(long, value_delimiter = ',')]
    inf: Vec<usize>,
    /// Limsup dimensions (1-based), for mp-infsup.
    #[arg(long, value_delimiter = ',')]
    sup: Vec<usize>,
    /// Per-dimension thresholds such as `1,1/2`; weights are shifted before solving.
    #[arg(long, value_delimiter = ',')]
    threshold: Vec<String>,
    /// Query state; the declared initial state by default.
    #[arg(long)]
    from: Option<String>,
}

#[derive(Clone, Copy, ValueEnum, PartialEq, Eq)]
enum Method {
    Auto,
    Enum,
    Capped,
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    objective: ObjectiveArgs,
    /// Write the certificate of the verdict here.
    #[arg(long)]
    cert: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "auto")]
    method: Method,
    /// Enumerate even beyond the strategy-count guard.
    #[arg(long)]
    force: bool,
    /// Energy cap of the capped arena (default 2·n·W).
    #[arg(long)]
    cap: Option<u64>,
    /// Also print the winning region.
    #[arg(long)]
    region: bool,
    game: PathBuf,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    objective: ObjectiveArgs,
    #[arg(long)]
    game: PathBuf,
    #[arg(long)]
    cert: PathBuf,
}

#[derive(Subcommand)]
enum Generate {
    /// Game of a 3-CNF formula (DIMACS file or seeded random formula).
    #[command(name = "3sat")]
    Sat {
        #[arg(long, conflicts_with = "vars")]
        dimacs: Option<PathBuf>,
        #[arg(long, requires = "clauses")]
        vars: Option<usize>,
        #[arg(long)]
        clauses: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Print the random formula in DIMACS instead of the game.
        #[arg(long)]
        formula: bool,
    },
    /// Game of a disjoint-paths instance.
    DisjointPaths {
        /// Edge-list file: `vertices <n>` then `<u> <v>` lines.
        #[arg(long)]
        graph: PathBuf,
        /// w,x,y,z.
        #[arg(long, value_delimiter = ',', num_args = 1)]
        terminals: Vec<usize>,
        /// Use only weights in {-1,0,1}.
        #[arg(long)]
        unit: bool,
    },
    /// A named reference game: fig1, fig3 or barrier.
    Fixture { name: String },
    /// Seeded random game.
    Random {
        #[arg(long, default_value_t = 4)]
        states: usize,
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[arg(long, default_value_t = 2)]
        max_weight: i64,
        #[arg(long, default_value_t = 0.5)]
        p2: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Subcommand)]
enum Simulate {
    /// Pump the cycles of a nonnegative multi-cycle (one-player games).
    Pump {
        #[arg(long, value_delimiter = ',')]
        threshold: Vec<String>,
        #[arg(long)]
        from: Option<String>,
        #[arg(long, default_value = "1/2")]
        alpha: String,
        #[arg(long, default_value_t = 10_000)]
        horizon: u64,
        game: PathBuf,
    },
    /// Round-robin over per-dimension limsup strategies (one-player games).
    Interleave {
        #[arg(long, value_delimiter = ',')]
        threshold: Vec<String>,
        #[arg(long)]
        from: Option<String>,
        #[arg(long, default_value_t = 6)]
        phases: usize,
        #[arg(long, default_value_t = 1_000_000)]
        max_steps: u64,
        game: PathBuf,
    },
}

/// What the command printed first, for the exit code.
enum Verdict {
    Positive,
    Negative,
    None,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut out = String::new();
    match run(cli.command, &mut out) {
        Ok(v) => {
            print!("{out}");
            match v {
                Verdict::Positive | Verdict::None => ExitCode::SUCCESS,
                Verdict::Negative => ExitCode::from(1),
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            if matches!(e.downcast_ref::<Error>(), Some(Error::TooManyStrategies { .. })) {
                eprintln!("hint: pass --force to enumerate anyway");
            }
            ExitCode::from(2)
        }
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn load_game(path: &Path) -> Result<GameGraph> {
    parse_game(&read(path)?).with_context(|| format!("in {}", path.display()))
}

fn shifted(g: GameGraph, threshold: &[String]) -> Result<GameGraph> {
    if threshold.is_empty() {
        return Ok(g);
    }
    let t = threshold
        .iter()
        .map(|s| parse_rational(s.trim()).with_context(|| format!("bad threshold `{s}`")))
        .collect::<Result<Vec<_>>>()?;
    if t.len() != g.dim() {
        bail!("{} thresholds for a game of dimension {}", t.len(), g.dim());
    }
    Ok(shift_weights(&g, &t)?)
}

fn query_state(g: &GameGraph, from: &Option<String>) -> Result<StateId> {
    match from {
        Some(name) => Ok(g.state_id(name)?),
        None => Ok(g.initial()),
    }
}

fn dims(g: &GameGraph, list: &[usize]) -> Result<BTreeSet<usize>> {
    list.iter()
        .map(|&d| {
            if d == 0 || d > g.dim() {
                bail!("dimension {d} outside 1..={}", g.dim());
            }
            Ok(d - 1)
        })
        .collect()
}

fn objective(g: &GameGraph, args: &ObjectiveArgs) -> Result<ObjectiveSpec> {
    let kind = ObjectiveKind::from_name(&args.obj)?;
    if kind == ObjectiveKind::MPInfSup {
        if args.inf.is_empty() && args.sup.is_empty() {
            bail!("mp-infsup needs --inf and/or --sup");
        }
        let spec = ObjectiveSpec::inf_sup(g.dim(), dims(g, &args.inf)?, dims(g, &args.sup)?);
        spec.validate()?;
        return Ok(spec);
    }
    if !args.inf.is_empty() || !args.sup.is_empty() {
        bail!("--inf and --sup only apply to mp-infsup");
    }
    Ok(ObjectiveSpec::new(kind, g.dim()))
}

fn names(g: &GameGraph, set: &StateSet) -> String {
    set.iter().map(|&s| g.state_name(s)).collect::<Vec<_>>().join(" ")
}

fn run(command: Command, out: &mut String) -> Result<Verdict> {
    match command {
        Command::Solve(args) => solve(args, out),
        Command::Verify(args) => verify(args, out),
        Command::Generate { what } => {
            generate(what, out)?;
            Ok(Verdict::None)
        }
        Command::Eval { lasso, game } => {
            let g = load_game(&game)?;
            let (stem, cycle) = lasso
                .split_once('/')
                .context("expected `stem states / loop states`")?;
            let ids = |part: &str| -> Result<Vec<StateId>> {
                part.split_whitespace().map(|n| Ok(g.state_id(n)?)).collect()
            };
            let (play, ambiguous) = LassoPlay::from_states(&g, &ids(stem)?, &ids(cycle)?)?;
            if ambiguous {
                eprintln!("note: parallel edges; the first declared edge was taken");
            }
            let mp = lasso_mean_payoff(&g, &play)?;
            let parts: Vec<String> = mp.iter().map(format_rational).collect();
            writeln!(out, "{}", parts.join(" "))?;
            Ok(Verdict::None)
        }
        Command::Simulate { what } => simulate(what, out),
    }
}

fn solve(args: SolveArgs, out: &mut String) -> Result<Verdict> {
    let g = shifted(load_game(&args.game)?, &args.objective.threshold)?;
    let s0 = query_state(&g, &args.objective.from)?;
    let spec = objective(&g, &args.objective)?;
    let opts = SolveOptions {
        force: args.force,
        certificate: args.cert.is_some(),
        full_region: args.region,
        cap: args.cap,
        ..SolveOptions::default()
    };
    let capped_fits = || {
        let cap = args.cap.unwrap_or_else(|| default_cap(&g));
        (cap as u128 + 1)
            .checked_pow(g.dim() as u32)
            .and_then(|b| b.checked_mul(g.state_count() as u128))
            .is_some_and(|size| size <= DEFAULT_ARENA_LIMIT)
    };
    let report = match spec.kind {
        ObjectiveKind::EnergyUnknownCredit | ObjectiveKind::FiniteMemoryMP => {
            let capped = match args.method {
                Method::Capped => true,
                Method::Enum => false,
                Method::Auto => capped_fits(),
            };
            if capped {
                solve_finite_memory_mp(&g, s0, &opts)?
            } else {
                solve_energy_unknown_credit(&g, s0, &opts)?
            }
        }
        ObjectiveKind::MPSup => {
            let mut r = solve_mp_sup_region(&g);
            r.from = s0;
            r.winning = r.region.as_ref().is_some_and(|reg| reg.contains(&s0));
            r
        }
        ObjectiveKind::MPInf => solve_mp_inf(&g, s0, &opts)?,
        ObjectiveKind::MPInfSup => solve_mp_infsup(&g, &spec.inf_dims, &spec.sup_dims, s0, &opts)?,
    };
    writeln!(out, "{}", if report.winning { "YES" } else { "NO" })?;
    writeln!(out, "method {}", report.method)?;
    if args.region {
        if let Some(r) = &report.region {
            writeln!(out, "region {}", names(&g, r))?;
        }
    }
    let st = &report.stats;
    eprintln!(
        "strategies {} skipped {} lp {} iterations {}",
        st.strategies, st.skipped, st.lp_solves, st.iterations
    );
    if let Some(path) = &args.cert {
        match report.certificate {
            Some(c) => {
                let file = match c {
                    Certificate::Player2(s) => CertificateFile {
                        strategy: CertificateStrategy::Player2(s),
                        credit: None,
                    },
                    Certificate::Player1 { strategy, credit } => {
                        writeln!(out, "credit {}", credit)?;
                        CertificateFile {
                            strategy: CertificateStrategy::Player1(strategy),
                            credit: Some(credit),
                        }
                    }
                };
                fs::write(path, serialize_certificate(&g, &file)?)
                    .with_context(|| format!("cannot write {}", path.display()))?;
            }
            None => eprintln!("note: no certificate is available for this verdict"),
        }
    }
    Ok(if report.winning { Verdict::Positive } else { Verdict::Negative })
}

fn verify(args: VerifyArgs, out: &mut String) -> Result<Verdict> {
    let g = shifted(load_game(&args.game)?, &args.objective.threshold)?;
    let s0 = query_state(&g, &args.objective.from)?;
    let spec = objective(&g, &args.objective)?;
    let cert = parse_certificate(&g, &read(&args.cert)?).with_context(|| format!("in {}", args.cert.display()))?;
    let valid = match &cert.strategy {
        CertificateStrategy::Player2(l2) => verify_p2_certificate(&g, l2, s0, &spec)?,
        CertificateStrategy::Player1(m) => match score_p1_finite_strategy(&g, m, s0)? {
            None => false,
            Some(need) => {
                writeln!(out, "credit {need}").ok();
                cert.credit
                    .as_ref()
                    .is_none_or(|c| c.0.iter().zip(&need.0).all(|(have, need)| have >= need))
            }
        },
    };
    // The verdict goes first.
    let details = std::mem::take(out);
    writeln!(out, "{}", if valid { "VALID" } else { "INVALID" })?;
    out.push_str(&details);
    Ok(if valid { Verdict::Positive } else { Verdict::Negative })
}

fn generate(what: Generate, out: &mut String) -> Result<()> {
    let g = match what {
        Generate::Sat {
            dimacs,
            vars,
            clauses,
            seed,
            formula,
        } => {
            let phi = match (dimacs, vars, clauses) {
                (Some(path), _, _) => parse_dimacs(&read(&path)?)?,
                (None, Some(v), Some(c)) => random_cnf(v, c, seed),
                _ => bail!("give --dimacs FILE or --vars N --clauses M"),
            };
            if formula {
                out.push_str(&to_dimacs(&phi));
                return Ok(());
            }
            from_3sat(&phi)
        }
        Generate::DisjointPaths { graph, terminals, unit } => {
            let [w, x, y, z] = terminals[..] else {
                bail!("--terminals needs four vertices w,x,y,z");
            };
            from_disjoint_paths(&parse_edge_list(&read(&graph)?)?, w, x, y, z, unit)?
        }
        Generate::Fixture { name } => fixture(&name)?,
        Generate::Random {
            states,
            dim,
            max_weight,
            p2,
            seed,
        } => random_game(states, dim, max_weight, p2, seed),
    };
    out.push_str(&serialize_game(&g));
    Ok(())
}

fn simulate(what: Simulate, out: &mut String) -> Result<Verdict> {
    let ok = match what {
        Simulate::Pump {
            threshold,
            from,
            alpha,
            horizon,
            game,
        } => {
            let g = shifted(load_game(&game)?, &threshold)?;
            let s0 = query_state(&g, &from)?;
            let alpha = parse_rational(&alpha).context("bad alpha")?;
            let Some(witness) = reachable_multicycle(&g, s0)? else {
                bail!("no nonnegative multi-cycle is reachable; nothing to pump");
            };
            let sched = pump_schedule_from_witness(&g, s0, &witness, &alpha)?;
            let trace = simulate_schedule(&g, &sched, horizon)?;
            let avg: Vec<String> = trace.min_average.iter().map(format_rational).collect();
            let mut body = String::new();
            writeln!(body, "z {} round {} warmup {}", sched.z, sched.round_length, sched.warmup)?;
            writeln!(body, "bound {}", format_rational(&trace.bound))?;
            writeln!(body, "min-average {}", avg.join(" "))?;
            out.push_str(if trace.bound_met { "VALID\n" } else { "INVALID\n" });
            out.push_str(&body);
            trace.bound_met
        }
        Simulate::Interleave {
            threshold,
            from,
            phases,
            max_steps,
            game,
        } => {
            let g = shifted(load_game(&game)?, &threshold)?;
            let s0 = query_state(&g, &from)?;
            let strategies = (0..g.dim())
                .map(|i| {
                    let choice = single_dim_strategy(&g, i)?;
                    Ok(MemorylessStrategy {
                        owner: Player::One,
                        choice,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            let trace = simulate_interleaved_sup(&g, &strategies, s0, phases, max_steps)?;
            let ok = trace.all_bounds_met();
            out.push_str(if ok { "VALID\n" } else { "INVALID\n" });
            for p in &trace.phases {
                let avg: Vec<String> = p.play_average.iter().map(format_rational).collect();
                writeln!(
                    out,
                    "phase dim {} alpha {} length {} average {}",
                    p.dim + 1,
                    format_rational(&p.alpha),
                    p.length,
                    avg.join(" ")
                )?;
            }
            if let Some(i) = trace.timed_out {
                writeln!(out, "timeout in phase {}", i + 1)?;
            }
            writeln!(out, "steps {} final-alpha {}", trace.steps, format_rational(&trace.final_alpha))?;
            ok
        }
    };
    Ok(if ok { Verdict::Positive } else { Verdict::Negative })
}
