use std::ops::Range;

use super::{Flavor, Node, SpExpression};
use crate::digraph::{uniquify, OrientedDigraph, VertexId};
use crate::error::ExprError;

/// The digraph defined by an expression, with the leaf-to-graph mapping.
#[derive(Clone, Debug)]
pub struct Evaluation {
    pub graph: OrientedDigraph,
    /// `esp`: leaf k (in node order) is arc k. `msp`: leaf k is vertex k.
    /// Either way the k-th leaf's graph object has id k.
    pub leaf_count: usize,
    /// `msp` only: arcs created by each series node, indexed by node.
    pub series_arcs: Vec<Range<usize>>,
}

/// Terminal annotation of one expression node.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Terminals {
    Esp { source: VertexId, sink: VertexId },
    Msp { sources: Vec<VertexId>, sinks: Vec<VertexId> },
}

/// An expression annotated, node by node, with the terminals of the
/// subgraph it defines (as ids of the full evaluation).
#[derive(Clone, Debug)]
pub struct DecompositionTree {
    pub expr: SpExpression,
    pub graph: OrientedDigraph,
    pub terminals: Vec<Terminals>,
}

impl DecompositionTree {
    pub fn root(&self) -> &Terminals {
        self.terminals.last().unwrap()
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, mut x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        while self.parent[x] != root {
            let next = self.parent[x];
            self.parent[x] = root;
            x = next;
        }
        root
    }

    /// Keeps the smaller representative.
    fn union(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        if a != b {
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            self.parent[hi] = lo;
        }
    }
}

/// Endpoint classes of an `esp` expression. Leaf k owns the provisional
/// endpoints 2k and 2k+1; identification merges them. Returns, per node,
/// the provisional (source, sink) and the union-find holding the merges.
fn esp_identify(x: &SpExpression) -> (Vec<(usize, usize)>, UnionFind, usize) {
    let leaves = x.leaf_count();
    let mut uf = UnionFind::new(2 * leaves);
    let mut ends: Vec<(usize, usize)> = Vec::with_capacity(x.nodes().len());
    let mut k = 0;
    for node in x.nodes() {
        let e = match *node {
            Node::Arc { .. } => {
                k += 1;
                (2 * k - 2, 2 * k - 1)
            }
            Node::Parallel(l, r) => {
                uf.union(ends[l].0, ends[r].0);
                uf.union(ends[l].1, ends[r].1);
                ends[l]
            }
            Node::Series(l, r) => {
                uf.union(ends[l].1, ends[r].0);
                (ends[l].0, ends[r].1)
            }
            Node::Vertex(_) => unreachable!("esp expression"),
        };
        ends.push(e);
    }
    (ends, uf, leaves)
}

/// Canonical vertex index (first appearance in leaf order) of every
/// provisional endpoint.
fn canonical_classes(uf: &mut UnionFind, leaves: usize) -> (Vec<usize>, usize) {
    let mut class_of_root = vec![usize::MAX; 2 * leaves];
    let mut canon = vec![0; 2 * leaves];
    let mut count = 0;
    for (p, slot) in canon.iter_mut().enumerate() {
        let root = uf.find(p);
        if class_of_root[root] == usize::MAX {
            class_of_root[root] = count;
            count += 1;
        }
        *slot = class_of_root[root];
    }
    (canon, count)
}

/// Canonical (tail, head) vertex indices of every arc leaf.
pub(crate) fn esp_leaf_classes(x: &SpExpression) -> Vec<(usize, usize)> {
    let (_, mut uf, leaves) = esp_identify(x);
    let (canon, _) = canonical_classes(&mut uf, leaves);
    (0..leaves).map(|k| (canon[2 * k], canon[2 * k + 1])).collect()
}

fn evaluate_esp(x: &SpExpression, strict: bool) -> Result<(Evaluation, Vec<Terminals>), ExprError> {
    let (ends, mut uf, leaves) = esp_identify(x);
    let (canon, count) = canonical_classes(&mut uf, leaves);
    let mut labels: Vec<Option<&str>> = vec![None; count];
    let mut k = 0;
    for node in x.nodes() {
        if let Node::Arc { tail, head } = node {
            for (p, name) in [(2 * k, tail), (2 * k + 1, head)] {
                let class = canon[p];
                match labels[class] {
                    None => labels[class] = Some(name),
                    Some(existing) if strict && existing != name => {
                        return Err(ExprError::NameMismatch(format!(
                            "`{existing}` identified with `{name}`"
                        )))
                    }
                    _ => {}
                }
            }
            k += 1;
        }
    }
    let names: Vec<String> = labels.iter().map(|l| l.unwrap().to_string()).collect();
    if strict {
        let mut sorted = names.clone();
        sorted.sort();
        if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
            return Err(ExprError::NameMismatch(format!("`{}` names two distinct vertices", w[0])));
        }
    }
    let arcs = (0..leaves)
        .map(|k| (VertexId(canon[2 * k]), VertexId(canon[2 * k + 1])))
        .collect();
    let graph = OrientedDigraph::new(uniquify(names), arcs)?;
    let terminals = ends
        .iter()
        .map(|&(s, t)| Terminals::Esp { source: VertexId(canon[s]), sink: VertexId(canon[t]) })
        .collect();
    Ok((Evaluation { graph, leaf_count: leaves, series_arcs: Vec::new() }, terminals))
}

fn evaluate_msp(x: &SpExpression, annotate: bool) -> Result<(Evaluation, Vec<Terminals>), ExprError> {
    let nodes = x.nodes();
    let mut names = Vec::new();
    let mut arcs = Vec::new();
    let mut series_arcs = vec![0..0; nodes.len()];
    let mut bounds: Vec<Option<(Vec<VertexId>, Vec<VertexId>)>> = Vec::with_capacity(nodes.len());
    let mut terminals = Vec::new();
    for (i, node) in nodes.iter().enumerate() {
        let b = match *node {
            Node::Vertex(ref name) => {
                names.push(name.clone());
                let v = VertexId(names.len() - 1);
                (vec![v], vec![v])
            }
            Node::Parallel(l, r) => {
                let (mut src, mut snk) = bounds[l].take().unwrap();
                let (src2, snk2) = bounds[r].take().unwrap();
                src.extend(src2);
                snk.extend(snk2);
                (src, snk)
            }
            Node::Series(l, r) => {
                let (src, snk1) = bounds[l].take().unwrap();
                let (src2, snk) = bounds[r].take().unwrap();
                let start = arcs.len();
                for &a in &snk1 {
                    for &b in &src2 {
                        arcs.push((a, b));
                    }
                }
                series_arcs[i] = start..arcs.len();
                (src, snk)
            }
            Node::Arc { .. } => unreachable!("msp expression"),
        };
        if annotate {
            let (mut sources, mut sinks) = b.clone();
            sources.sort_unstable();
            sinks.sort_unstable();
            terminals.push(Terminals::Msp { sources, sinks });
        }
        bounds.push(Some(b));
    }
    let leaf_count = names.len();
    let graph = OrientedDigraph::new(names, arcs)?;
    Ok((Evaluation { graph, leaf_count, series_arcs }, terminals))
}

/// The digraph defined by `x`. For `esp`, endpoint names are labels only:
/// identified endpoints take the first name seen, and repeated names of
/// distinct vertices get a `#k` suffix.
pub fn evaluate(x: &SpExpression) -> Result<Evaluation, ExprError> {
    match x.flavor() {
        Flavor::Esp => evaluate_esp(x, false).map(|e| e.0),
        Flavor::Msp => evaluate_msp(x, false).map(|e| e.0),
    }
}

/// Like [`evaluate`], but an `esp` expression must name identified
/// endpoints consistently and distinct vertices differently.
pub fn evaluate_strict(x: &SpExpression) -> Result<Evaluation, ExprError> {
    match x.flavor() {
        Flavor::Esp => evaluate_esp(x, true).map(|e| e.0),
        Flavor::Msp => evaluate_msp(x, false).map(|e| e.0),
    }
}

pub fn decomposition_tree(x: &SpExpression) -> Result<DecompositionTree, ExprError> {
    let (eval, terminals) = match x.flavor() {
        Flavor::Esp => evaluate_esp(x, false)?,
        Flavor::Msp => evaluate_msp(x, true)?,
    };
    Ok(DecompositionTree { expr: x.clone(), graph: eval.graph, terminals })
}
