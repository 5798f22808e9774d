//! Text form of strategy certificates.
//!
//! ```text
//! cert p2-memoryless
//! choose s0 right
//!
//! cert p1-moore
//! memory 2
//! initmem 0
//! next 0 s2 a
//! update 0 s2 1        # every edge leaving s2, from memory 0
//! update 1 s2 0 b      # only edge b
//! credit 2 1
//! ```
//!
//! Updates not listed keep the memory unchanged.

use std::collections::BTreeMap;
use std::fmt::Write;

use super::{CreditVector, MemorylessStrategy, MooreStrategy};
use crate::error::{Error, Result};
use crate::game::format::{syntax, tokens};
use crate::game::{GameGraph, Player};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CertificateStrategy {
    Player2(MemorylessStrategy),
    Player1(MooreStrategy),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertificateFile {
    pub strategy: CertificateStrategy,
    pub credit: Option<CreditVector>,
}

fn number<T: std::str::FromStr>(line: usize, (col, tok): (usize, &str)) -> Result<T> {
    tok.parse()
        .map_err(|_| syntax(line, col, format!("expected a number, found `{tok}`")))
}

pub fn parse_certificate(g: &GameGraph, text: &str) -> Result<CertificateFile> {
    let mut kind: Option<Player> = None;
    let mut choice = BTreeMap::new();
    let mut memory: Option<usize> = None;
    let mut initial = 0usize;
    let mut nexts = Vec::new();
    let mut updates = Vec::new();
    let mut credit = None;
    let state = |line: usize, (col, tok): (usize, &str)| {
        g.state_id(tok)
            .map_err(|_| syntax(line, col, format!("unknown state `{tok}`")))
    };
    let edge = |line: usize, (col, tok): (usize, &str)| {
        g.edge_id(tok).map_err(|_| syntax(line, col, format!("unknown edge `{tok}`")))
    };
    for (n, raw) in text.lines().enumerate() {
        let line = n + 1;
        let toks = tokens(raw);
        let Some(&(col, head)) = toks.first() else { continue };
        let args = &toks[1..];
        let arity = |want: &[usize]| {
            if want.contains(&args.len()) {
                Ok(())
            } else {
                Err(syntax(line, col, format!("wrong number of arguments for `{head}`")))
            }
        };
        if kind.is_none() {
            if head != "cert" || args.len() != 1 {
                return Err(syntax(line, col, "expected `cert p2-memoryless` or `cert p1-moore`"));
            }
            kind = Some(match args[0].1 {
                "p2-memoryless" => Player::Two,
                "p1-moore" => Player::One,
                other => return Err(syntax(line, args[0].0, format!("unknown certificate kind `{other}`"))),
            });
            continue;
        }
        let p1 = kind == Some(Player::One);
        match head {
            "choose" if !p1 => {
                arity(&[2])?;
                let s = state(line, args[0])?;
                if choice.insert(s, edge(line, args[1])?).is_some() {
                    return Err(syntax(line, col, "state chosen twice"));
                }
            }
            "memory" if p1 => {
                arity(&[1])?;
                let m: usize = number(line, args[0])?;
                if m == 0 {
                    return Err(syntax(line, args[0].0, "memory must be positive"));
                }
                memory = Some(m);
            }
            "initmem" if p1 => {
                arity(&[1])?;
                initial = number(line, args[0])?;
            }
            "next" if p1 => {
                arity(&[3])?;
                nexts.push((line, col, number::<usize>(line, args[0])?, state(line, args[1])?, edge(line, args[2])?));
            }
            "update" if p1 => {
                arity(&[3, 4])?;
                let e = args.get(3).map(|&a| edge(line, a)).transpose()?;
                updates.push((
                    line,
                    col,
                    number::<usize>(line, args[0])?,
                    state(line, args[1])?,
                    number::<usize>(line, args[2])?,
                    e,
                ));
            }
            "credit" => {
                arity(&[g.dim()])?;
                let c = args.iter().map(|&a| number(line, a)).collect::<Result<Vec<u64>>>()?;
                credit = Some(CreditVector(c));
            }
            _ => return Err(syntax(line, col, format!("unexpected `{head}`"))),
        }
    }
    let strategy = match kind {
        None => return Err(syntax(1, 1, "empty certificate")),
        Some(Player::Two) => {
            let s = MemorylessStrategy {
                owner: Player::Two,
                choice,
            };
            s.validate(g)?;
            CertificateStrategy::Player2(s)
        }
        Some(Player::One) => {
            let m = memory.ok_or_else(|| syntax(1, 1, "missing `memory`"))?;
            let mut next = vec![vec![None; g.state_count()]; m];
            let mut update: Vec<Vec<usize>> = (0..m).map(|i| vec![i; g.edges().len()]).collect();
            for (line, col, mem, s, e) in nexts {
                if mem >= m {
                    return Err(syntax(line, col, "memory out of range"));
                }
                next[mem][s] = Some(e);
            }
            // Whole-state updates first so that edge overrides win.
            updates.sort_by_key(|u| u.5.is_some());
            for (line, col, mem, s, to, e) in updates {
                if mem >= m || to >= m {
                    return Err(syntax(line, col, "memory out of range"));
                }
                match e {
                    Some(e) if g.edge(e).src != s => {
                        return Err(syntax(line, col, "edge does not leave the state"));
                    }
                    Some(e) => update[mem][e] = to,
                    None => {
                        for &e in g.out_edges(s) {
                            update[mem][e] = to;
                        }
                    }
                }
            }
            let s = MooreStrategy {
                owner: Player::One,
                memory: m,
                initial,
                next,
                update,
            };
            s.validate(g)?;
            CertificateStrategy::Player1(s)
        }
    };
    Ok(CertificateFile { strategy, credit })
}

pub fn serialize_certificate(g: &GameGraph, cert: &CertificateFile) -> Result<String> {
    let mut out = String::new();
    match &cert.strategy {
        CertificateStrategy::Player2(s) => {
            s.validate(g)?;
            out.push_str("cert p2-memoryless\n");
            for (&st, &e) in &s.choice {
                writeln!(out, "choose {} {}", g.state_name(st), g.edge(e).id).unwrap();
            }
        }
        CertificateStrategy::Player1(s) => {
            s.validate(g)?;
            if s.owner != Player::One {
                return Err(Error::MalformedStrategy("machine must belong to player 1".into()));
            }
            writeln!(out, "cert p1-moore\nmemory {}\ninitmem {}", s.memory, s.initial).unwrap();
            for m in 0..s.memory {
                for st in 0..g.state_count() {
                    if let Some(e) = s.next[m][st] {
                        writeln!(out, "next {m} {} {}", g.state_name(st), g.edge(e).id).unwrap();
                    }
                }
            }
            for m in 0..s.memory {
                for st in 0..g.state_count() {
                    let edges = g.out_edges(st);
                    let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
                    for &e in edges {
                        *counts.entry(s.update[m][e]).or_default() += 1;
                    }
                    let (&common, _) = counts.iter().max_by_key(|&(&to, &c)| (c, to == m)).expect("no sinks");
                    if common != m {
                        writeln!(out, "update {m} {} {common}", g.state_name(st)).unwrap();
                    }
                    for &e in edges {
                        if s.update[m][e] != common {
                            writeln!(out, "update {m} {} {} {}", g.state_name(st), s.update[m][e], g.edge(e).id).unwrap();
                        }
                    }
                }
            }
        }
    }
    if let Some(c) = &cert.credit {
        let parts: Vec<String> = c.0.iter().map(|x| x.to_string()).collect();
        writeln!(out, "credit {}", parts.join(" ")).unwrap();
    }
    Ok(out)
}
