//! The line-oriented `.mwg` text format.

use std::collections::HashMap;
use std::fmt::Write;

use super::{valid_name, Edge, GameGraph, Player, State, WeightVector};
use crate::error::{Error, Result};

pub(crate) fn syntax(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Syntax {
        line,
        column,
        message: message.into(),
    }
}

/// Whitespace-separated tokens with their 1-based columns, comments removed.
pub(crate) fn tokens(line: &str) -> Vec<(usize, &str)> {
    let line = match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    };
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in line.char_indices() {
        match (c.is_whitespace(), start) {
            (true, Some(s)) => {
                out.push((s + 1, &line[s..i]));
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((s + 1, &line[s..]));
    }
    out
}

struct PendingEdge {
    line: usize,
    id: String,
    src: (usize, String),
    dst: (usize, String),
    weight: Vec<i64>,
}

pub fn parse_game(text: &str) -> Result<GameGraph> {
    let mut header = false;
    let mut dim: Option<usize> = None;
    let mut states: Vec<State> = Vec::new();
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut pending: Vec<PendingEdge> = Vec::new();
    let mut init: Option<(usize, usize, String)> = None;
    let mut last_line = 0;

    for (n, raw) in text.lines().enumerate() {
        let line = n + 1;
        last_line = line;
        let toks = tokens(raw);
        let Some(&(col, keyword)) = toks.first() else {
            continue;
        };
        let arity = |want: usize| -> Result<()> {
            if toks.len() == want {
                Ok(())
            } else {
                let column = toks.get(want).map_or(raw.len() + 1, |t| t.0);
                Err(syntax(line, column, format!("`{keyword}` takes {} arguments", want - 1)))
            }
        };
        let name_at = |i: usize| -> Result<String> {
            let (c, t) = toks[i];
            if valid_name(t) {
                Ok(t.to_string())
            } else {
                Err(syntax(line, c, format!("invalid name `{t}`")))
            }
        };
        if !header {
            if keyword != "mwg" {
                return Err(syntax(line, col, "expected `mwg 1` header"));
            }
            arity(2)?;
            if toks[1].1 != "1" {
                return Err(syntax(line, toks[1].0, "unsupported format version"));
            }
            header = true;
            continue;
        }
        match keyword {
            "dim" => {
                arity(2)?;
                if dim.is_some() {
                    return Err(syntax(line, col, "repeated `dim`"));
                }
                let k: usize = toks[1]
                    .1
                    .parse()
                    .ok()
                    .filter(|&k| k > 0)
                    .ok_or_else(|| syntax(line, toks[1].0, "dimension must be a positive integer"))?;
                dim = Some(k);
            }
            "state" => {
                arity(3)?;
                let name = name_at(1)?;
                let owner = match toks[2].1 {
                    "1" => Player::One,
                    "2" => Player::Two,
                    _ => return Err(syntax(line, toks[2].0, "owner must be 1 or 2")),
                };
                if index.insert(name.clone(), states.len()).is_some() {
                    return Err(Error::DuplicateState(name));
                }
                states.push(State { name, owner });
            }
            "edge" => {
                let k = dim.ok_or_else(|| syntax(line, col, "`edge` before `dim`"))?;
                if toks.len() < 4 {
                    return Err(syntax(line, raw.len() + 1, "`edge` needs id, source and target"));
                }
                let id = name_at(1)?;
                let src = (toks[2].0, name_at(2)?);
                let dst = (toks[3].0, name_at(3)?);
                let weight = toks[4..]
                    .iter()
                    .map(|&(c, t)| t.parse::<i64>().map_err(|_| syntax(line, c, format!("bad weight `{t}`"))))
                    .collect::<Result<Vec<i64>>>()?;
                if weight.len() != k {
                    return Err(Error::DimensionMismatch {
                        edge: id,
                        expected: k,
                        found: weight.len(),
                    });
                }
                pending.push(PendingEdge {
                    line,
                    id,
                    src,
                    dst,
                    weight,
                });
            }
            "init" => {
                arity(2)?;
                if init.is_some() {
                    return Err(syntax(line, col, "repeated `init`"));
                }
                init = Some((line, toks[1].0, name_at(1)?));
            }
            _ => return Err(syntax(line, col, format!("unknown statement `{keyword}`"))),
        }
    }

    let end = last_line.max(1);
    if !header {
        return Err(syntax(end, 1, "missing `mwg 1` header"));
    }
    let dim = dim.ok_or_else(|| syntax(end, 1, "missing `dim`"))?;
    let (il, ic, iname) = init.ok_or_else(|| syntax(end, 1, "missing `init`"))?;
    let lookup = |line: usize, (col, name): &(usize, String)| {
        index
            .get(name)
            .copied()
            .ok_or_else(|| syntax(line, *col, format!("unknown state `{name}`")))
    };
    let mut edges = Vec::with_capacity(pending.len());
    for p in &pending {
        edges.push(Edge {
            id: p.id.clone(),
            src: lookup(p.line, &p.src)?,
            dst: lookup(p.line, &p.dst)?,
            weight: WeightVector(p.weight.clone()),
        });
    }
    let initial = lookup(il, &(ic, iname))?;
    GameGraph::new(dim, states, edges, initial)
}

/// Canonical text: header, dimension, states, edges, initial state, each in
/// declaration order.
pub fn serialize_game(g: &GameGraph) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "mwg 1");
    let _ = writeln!(out, "dim {}", g.dim());
    for s in g.states() {
        let _ = writeln!(out, "state {} {}", s.name, s.owner.number());
    }
    for e in g.edges() {
        let _ = write!(out, "edge {} {} {}", e.id, g.state_name(e.src), g.state_name(e.dst));
        for w in e.weight.iter() {
            let _ = write!(out, " {w}");
        }
        out.push('\n');
    }
    let _ = writeln!(out, "init {}", g.state_name(g.initial()));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const FIG1: &str = "\
mwg 1
# the figure-1 arena
dim 2
state s0 2
state s1 1
state s2 1
edge left s0 s1 -2 0
edge right s0 s2 0 0
edge stay s1 s1 0 0   # sink loop
edge a s2 s0 -1 1
edge b s2 s0 1 -1
init s0
";

    #[test]
    fn parses_figure_one() {
        let g = parse_game(FIG1).unwrap();
        assert_eq!(g.dim(), 2);
        assert_eq!(g.state_count(), 3);
        assert_eq!(g.edges().len(), 5);
        assert_eq!(g.owner(0), Player::Two);
        assert_eq!(g.out_edges(2).len(), 2);
        assert_eq!(parse_game(&serialize_game(&g)).unwrap(), g);
    }

    #[test]
    fn minimal_graph() {
        let g = parse_game("mwg 1\ndim 1\nstate s 1\nedge e s s 0\ninit s\n").unwrap();
        assert_eq!(g.state_count(), 1);
        assert_eq!(parse_game(&serialize_game(&g)).unwrap(), g);
    }

    #[test]
    fn rejects_sink() {
        let text = "mwg 1\ndim 1\nstate s0 1\nstate s1 1\nedge e s0 s1 0\ninit s0\n";
        assert_eq!(parse_game(text), Err(Error::SinkState("s1".into())));
    }

    #[test]
    fn rejects_duplicates_and_mismatches() {
        let dup = "mwg 1\ndim 1\nstate s 1\nedge e s s 0\nedge e s s 1\ninit s\n";
        assert_eq!(parse_game(dup), Err(Error::DuplicateEdge("e".into())));
        let short = "mwg 1\ndim 2\nstate s 1\nedge e s s 0\ninit s\n";
        assert!(matches!(parse_game(short), Err(Error::DimensionMismatch { found: 1, .. })));
    }

    #[test]
    fn syntax_errors_carry_position() {
        let text = "mwg 1\ndim 1\nstate s 1\nedge e s s x\ninit s\n";
        assert_eq!(
            parse_game(text),
            Err(Error::Syntax {
                line: 4,
                column: 12,
                message: "bad weight `x`".into()
            })
        );
        let text = "mwg 1\ndim 1\nstate s 1\nedge e s t 0\ninit s\n";
        assert!(matches!(parse_game(text), Err(Error::Syntax { line: 4, column: 10, .. })));
        assert!(matches!(parse_game("dim 1\n"), Err(Error::Syntax { line: 1, column: 1, .. })));
        assert!(matches!(parse_game("mwg 1\nfoo\n"), Err(Error::Syntax { line: 2, .. })));
    }
}
