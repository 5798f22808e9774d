//! Plain weighted digraphs with labelled arcs. Game graphs, one-player
//! graphs and product graphs are all analysed through this view.

use petgraph::graph::{DiGraph, NodeIndex};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arc {
    pub src: usize,
    pub dst: usize,
    pub weight: Vec<i64>,
    /// Caller-chosen identifier, unique within a graph. Game edges use their index.
    pub label: usize,
}

#[derive(Clone, Debug, Default)]
pub struct Digraph {
    dim: usize,
    arcs: Vec<Arc>,
    out: Vec<Vec<usize>>,
    inc: Vec<Vec<usize>>,
}

/// A subgraph together with the maps back to its parent.
#[derive(Clone, Debug)]
pub struct SubDigraph {
    pub graph: Digraph,
    pub node_map: Vec<usize>,
    pub arc_map: Vec<usize>,
}

impl Digraph {
    pub fn new(nodes: usize, dim: usize) -> Self {
        Digraph {
            dim,
            arcs: Vec::new(),
            out: vec![Vec::new(); nodes],
            inc: vec![Vec::new(); nodes],
        }
    }

    pub fn add_node(&mut self) -> usize {
        self.out.push(Vec::new());
        self.inc.push(Vec::new());
        self.out.len() - 1
    }

    pub fn add_arc(&mut self, src: usize, dst: usize, weight: Vec<i64>, label: usize) -> usize {
        debug_assert_eq!(weight.len(), self.dim);
        let ix = self.arcs.len();
        self.arcs.push(Arc {
            src,
            dst,
            weight,
            label,
        });
        self.out[src].push(ix);
        self.inc[dst].push(ix);
        ix
    }

    pub fn node_count(&self) -> usize {
        self.out.len()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    pub fn arc(&self, ix: usize) -> &Arc {
        &self.arcs[ix]
    }

    pub fn out_arcs(&self, node: usize) -> &[usize] {
        &self.out[node]
    }

    pub fn in_arcs(&self, node: usize) -> &[usize] {
        &self.inc[node]
    }

    pub fn arc_by_label(&self, label: usize) -> Option<usize> {
        self.arcs.iter().position(|a| a.label == label)
    }

    pub fn max_label(&self) -> Option<usize> {
        self.arcs.iter().map(|a| a.label).max()
    }

    /// Maximal strongly connected components in reverse topological order
    /// (sinks first). Nodes inside a component are sorted.
    pub fn sccs(&self) -> Vec<Vec<usize>> {
        let mut pg: DiGraph<(), ()> = DiGraph::with_capacity(self.node_count(), self.arcs.len());
        for _ in 0..self.node_count() {
            pg.add_node(());
        }
        for a in &self.arcs {
            pg.add_edge(NodeIndex::new(a.src), NodeIndex::new(a.dst), ());
        }
        petgraph::algo::tarjan_scc(&pg)
            .into_iter()
            .map(|c| {
                let mut c: Vec<usize> = c.into_iter().map(|n| n.index()).collect();
                c.sort_unstable();
                c
            })
            .collect()
    }

    /// True when the graph has at least one node and a single component.
    pub fn is_strongly_connected(&self) -> bool {
        self.node_count() > 0 && self.sccs().len() == 1
    }

    /// Whether the component contains a cycle (more than one node, or a self-loop).
    pub fn component_is_cyclic(&self, comp: &[usize]) -> bool {
        comp.len() > 1 || self.out[comp[0]].iter().any(|&a| self.arcs[a].dst == comp[0])
    }

    pub fn reachable_from(&self, start: usize) -> Vec<bool> {
        let mut seen = vec![false; self.node_count()];
        let mut stack = vec![start];
        seen[start] = true;
        while let Some(v) = stack.pop() {
            for &a in &self.out[v] {
                let w = self.arcs[a].dst;
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen
    }

    /// Subgraph on `nodes` keeping only arcs with both ends inside.
    pub fn induced(&self, nodes: &[usize]) -> SubDigraph {
        let mut local = vec![usize::MAX; self.node_count()];
        for (i, &v) in nodes.iter().enumerate() {
            local[v] = i;
        }
        let mut graph = Digraph::new(nodes.len(), self.dim);
        let mut arc_map = Vec::new();
        for &v in nodes {
            for &a in &self.out[v] {
                let arc = &self.arcs[a];
                if local[arc.dst] != usize::MAX {
                    graph.add_arc(local[arc.src], local[arc.dst], arc.weight.clone(), arc.label);
                    arc_map.push(a);
                }
            }
        }
        SubDigraph {
            graph,
            node_map: nodes.to_vec(),
            arc_map,
        }
    }

    /// Subgraph made of the given arcs and the nodes they touch.
    pub fn arc_subgraph(&self, arcs: &[usize]) -> SubDigraph {
        let mut local = vec![usize::MAX; self.node_count()];
        let mut node_map = Vec::new();
        for &a in arcs {
            for v in [self.arcs[a].src, self.arcs[a].dst] {
                if local[v] == usize::MAX {
                    local[v] = node_map.len();
                    node_map.push(v);
                }
            }
        }
        let mut graph = Digraph::new(node_map.len(), self.dim);
        for &a in arcs {
            let arc = &self.arcs[a];
            graph.add_arc(local[arc.src], local[arc.dst], arc.weight.clone(), arc.label);
        }
        SubDigraph {
            graph,
            node_map,
            arc_map: arcs.to_vec(),
        }
    }
}
