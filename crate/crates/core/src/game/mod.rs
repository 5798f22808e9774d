//! Game arenas, objectives and plays.

pub(crate) mod format;
mod ops;

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::ops::Deref;

use crate::error::{Error, Result};
use crate::graph::Digraph;
use crate::rational::Rational;

pub use format::{parse_game, serialize_game};
pub use ops::{
    attractor, attractor_mask, energy_level, lasso_mean_payoff, restrict, scc_decomposition,
    shift_weights, LassoPlay, PlayPrefix,
};

pub type StateId = usize;
pub type EdgeId = usize;
pub type StateSet = BTreeSet<StateId>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Player {
    One,
    Two,
}

impl Player {
    pub fn opponent(self) -> Player {
        match self {
            Player::One => Player::Two,
            Player::Two => Player::One,
        }
    }

    pub fn number(self) -> u8 {
        match self {
            Player::One => 1,
            Player::Two => 2,
        }
    }
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "player {}", self.number())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WeightVector(pub Vec<i64>);

impl Deref for WeightVector {
    type Target = [i64];

    fn deref(&self) -> &[i64] {
        &self.0
    }
}

impl From<Vec<i64>> for WeightVector {
    fn from(v: Vec<i64>) -> Self {
        WeightVector(v)
    }
}

impl fmt::Display for WeightVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|w| w.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct State {
    pub name: String,
    pub owner: Player,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub id: String,
    pub src: StateId,
    pub dst: StateId,
    pub weight: WeightVector,
}

/// Finite two-player arena with `k`-dimensional integer weights. Immutable
/// once built; every state has a successor.
#[derive(Clone, Debug)]
pub struct GameGraph {
    dim: usize,
    states: Vec<State>,
    edges: Vec<Edge>,
    initial: StateId,
    out: Vec<Vec<EdgeId>>,
    state_index: HashMap<String, StateId>,
    edge_index: HashMap<String, EdgeId>,
}

impl PartialEq for GameGraph {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim
            && self.states == other.states
            && self.edges == other.edges
            && self.initial == other.initial
    }
}

impl Eq for GameGraph {}

pub(crate) fn valid_name(name: &str) -> bool {
    !name.is_empty() && name.bytes().all(|b| b.is_ascii_alphanumeric() || b == b'_')
}

impl GameGraph {
    pub fn new(dim: usize, states: Vec<State>, edges: Vec<Edge>, initial: StateId) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidArgument("dimension must be positive".into()));
        }
        let mut state_index = HashMap::new();
        for (i, s) in states.iter().enumerate() {
            if !valid_name(&s.name) {
                return Err(Error::InvalidArgument(format!("bad state name `{}`", s.name)));
            }
            if state_index.insert(s.name.clone(), i).is_some() {
                return Err(Error::DuplicateState(s.name.clone()));
            }
        }
        let mut edge_index = HashMap::new();
        let mut out = vec![Vec::new(); states.len()];
        for (i, e) in edges.iter().enumerate() {
            if !valid_name(&e.id) {
                return Err(Error::InvalidArgument(format!("bad edge id `{}`", e.id)));
            }
            if edge_index.insert(e.id.clone(), i).is_some() {
                return Err(Error::DuplicateEdge(e.id.clone()));
            }
            if e.weight.len() != dim {
                return Err(Error::DimensionMismatch {
                    edge: e.id.clone(),
                    expected: dim,
                    found: e.weight.len(),
                });
            }
            if e.src >= states.len() || e.dst >= states.len() {
                return Err(Error::UnknownState(format!("#{}", e.src.max(e.dst))));
            }
            out[e.src].push(i);
        }
        if let Some(s) = (0..states.len()).find(|&s| out[s].is_empty()) {
            return Err(Error::SinkState(states[s].name.clone()));
        }
        if initial >= states.len() {
            return Err(Error::UnknownState(format!("#{initial}")));
        }
        Ok(GameGraph {
            dim,
            states,
            edges,
            initial,
            out,
            state_index,
            edge_index,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn states(&self) -> &[State] {
        &self.states
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    pub fn state(&self, s: StateId) -> &State {
        &self.states[s]
    }

    pub fn edge(&self, e: EdgeId) -> &Edge {
        &self.edges[e]
    }

    pub fn owner(&self, s: StateId) -> Player {
        self.states[s].owner
    }

    pub fn initial(&self) -> StateId {
        self.initial
    }

    pub fn out_edges(&self, s: StateId) -> &[EdgeId] {
        &self.out[s]
    }

    pub fn state_id(&self, name: &str) -> Result<StateId> {
        self.state_index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownState(name.to_string()))
    }

    pub fn edge_id(&self, id: &str) -> Result<EdgeId> {
        self.edge_index
            .get(id)
            .copied()
            .ok_or_else(|| Error::UnknownEdge(id.to_string()))
    }

    pub fn state_name(&self, s: StateId) -> &str {
        &self.states[s].name
    }

    pub fn with_initial(&self, s: StateId) -> GameGraph {
        let mut g = self.clone();
        g.initial = s;
        g
    }

    /// Largest absolute weight over all edges and dimensions.
    pub fn max_abs_weight(&self) -> i64 {
        self.edges
            .iter()
            .flat_map(|e| e.weight.iter())
            .map(|w| w.abs())
            .max()
            .unwrap_or(0)
    }

    pub fn is_one_player(&self) -> bool {
        self.states.iter().all(|s| s.owner == Player::One)
    }

    pub fn first_player2_state(&self) -> Option<StateId> {
        (0..self.states.len()).find(|&s| self.states[s].owner == Player::Two)
    }

    /// Graph view: node = state, arc label = edge index.
    pub fn digraph(&self) -> Digraph {
        let mut d = Digraph::new(self.states.len(), self.dim);
        for (i, e) in self.edges.iter().enumerate() {
            d.add_arc(e.src, e.dst, e.weight.0.clone(), i);
        }
        d
    }

    /// Graph view keeping only the listed edges.
    pub fn digraph_of_edges(&self, edges: impl IntoIterator<Item = EdgeId>) -> Digraph {
        let mut d = Digraph::new(self.states.len(), self.dim);
        for i in edges {
            let e = &self.edges[i];
            d.add_arc(e.src, e.dst, e.weight.0.clone(), i);
        }
        d
    }

    pub(crate) fn check_dim(&self, index: usize) -> Result<()> {
        if index < self.dim {
            Ok(())
        } else {
            Err(Error::BadDimension {
                index: index + 1,
                dim: self.dim,
            })
        }
    }
}

/// Incremental construction of a [`GameGraph`].
#[derive(Clone, Debug, Default)]
pub struct GameBuilder {
    dim: usize,
    states: Vec<State>,
    edges: Vec<Edge>,
}

impl GameBuilder {
    pub fn new(dim: usize) -> Self {
        GameBuilder {
            dim,
            ..Default::default()
        }
    }

    pub fn state(&mut self, name: impl Into<String>, owner: Player) -> StateId {
        self.states.push(State {
            name: name.into(),
            owner,
        });
        self.states.len() - 1
    }

    pub fn edge(
        &mut self,
        id: impl Into<String>,
        src: StateId,
        dst: StateId,
        weight: impl Into<Vec<i64>>,
    ) -> EdgeId {
        self.edges.push(Edge {
            id: id.into(),
            src,
            dst,
            weight: WeightVector(weight.into()),
        });
        self.edges.len() - 1
    }

    /// Adds an edge named `e<index>`.
    pub fn auto_edge(&mut self, src: StateId, dst: StateId, weight: impl Into<Vec<i64>>) -> EdgeId {
        let id = format!("e{}", self.edges.len());
        self.edge(id, src, dst, weight)
    }

    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    pub fn build(self, initial: StateId) -> Result<GameGraph> {
        GameGraph::new(self.dim, self.states, self.edges, initial)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ObjectiveKind {
    EnergyUnknownCredit,
    FiniteMemoryMP,
    MPSup,
    MPInf,
    MPInfSup,
}

impl ObjectiveKind {
    pub fn name(self) -> &'static str {
        match self {
            ObjectiveKind::EnergyUnknownCredit => "energy",
            ObjectiveKind::FiniteMemoryMP => "mp-fin",
            ObjectiveKind::MPSup => "mp-sup",
            ObjectiveKind::MPInf => "mp-inf",
            ObjectiveKind::MPInfSup => "mp-infsup",
        }
    }

    pub fn from_name(name: &str) -> Result<Self> {
        Ok(match name {
            "energy" => ObjectiveKind::EnergyUnknownCredit,
            "mp-fin" => ObjectiveKind::FiniteMemoryMP,
            "mp-sup" => ObjectiveKind::MPSup,
            "mp-inf" => ObjectiveKind::MPInf,
            "mp-infsup" => ObjectiveKind::MPInfSup,
            _ => return Err(Error::InvalidArgument(format!("unknown objective `{name}`"))),
        })
    }
}

/// Objective plus thresholds. Dimension indices are 0-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ObjectiveSpec {
    pub kind: ObjectiveKind,
    pub inf_dims: BTreeSet<usize>,
    pub sup_dims: BTreeSet<usize>,
    pub thresholds: Vec<Rational>,
}

impl ObjectiveSpec {
    /// The objective over all `dim` dimensions at threshold zero. For
    /// `MPInfSup` this starts with every dimension in the inf set.
    pub fn new(kind: ObjectiveKind, dim: usize) -> Self {
        let all: BTreeSet<usize> = (0..dim).collect();
        let (inf_dims, sup_dims) = match kind {
            ObjectiveKind::MPSup => (BTreeSet::new(), all),
            _ => (all, BTreeSet::new()),
        };
        ObjectiveSpec {
            kind,
            inf_dims,
            sup_dims,
            thresholds: vec![Rational::default(); dim],
        }
    }

    pub fn inf_sup(dim: usize, inf: impl IntoIterator<Item = usize>, sup: impl IntoIterator<Item = usize>) -> Self {
        ObjectiveSpec {
            kind: ObjectiveKind::MPInfSup,
            inf_dims: inf.into_iter().collect(),
            sup_dims: sup.into_iter().collect(),
            thresholds: vec![Rational::default(); dim],
        }
    }

    pub fn with_thresholds(mut self, thresholds: Vec<Rational>) -> Self {
        self.thresholds = thresholds;
        self
    }

    /// Drops sup dimensions that are also inf dimensions.
    pub fn normalized(&self) -> Self {
        let mut n = self.clone();
        n.sup_dims = &self.sup_dims - &self.inf_dims;
        n
    }

    pub fn dim(&self) -> usize {
        self.thresholds.len()
    }

    pub fn validate(&self) -> Result<()> {
        let k = self.dim();
        if let Some(&d) = self.inf_dims.iter().chain(&self.sup_dims).find(|&&d| d >= k) {
            return Err(Error::BadDimension { index: d + 1, dim: k });
        }
        Ok(())
    }
}
