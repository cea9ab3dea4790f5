//! Series-parallel expressions.
//!
//! An expression is stored as an arena of [`Node`]s in post-order: children
//! always precede their parent and the root is the last node. Every pass
//! over an expression (evaluation, both dynamic programs, printing) is a
//! loop over that arena, so million-leaf expressions never recurse.

pub(crate) mod eval;
mod generate;
mod parse;
mod recognize;

use std::fmt;

use rustc_hash::FxHashSet;
use serde::{Deserialize, Serialize};

use crate::error::ExprError;

pub use eval::{decomposition_tree, evaluate, evaluate_strict, DecompositionTree, Evaluation, Terminals};
pub use generate::{
    enumerate_shapes, esp_cycle_rev, esp_path, fixture, fixture_names, msp_bipartite, msp_chain,
    msp_rooted_tree, msp_x6, msp_y, random_expression, Generator, RootedTree, FIXTURES,
};
pub use parse::{parse, parse_fixture_file};
pub use recognize::{recognize_esp, Recognition};

/// Arc leaves (`esp`) or vertex leaves (`msp`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Flavor {
    Esp,
    Msp,
}

impl Flavor {
    pub fn as_str(self) -> &'static str {
        match self {
            Flavor::Esp => "esp",
            Flavor::Msp => "msp",
        }
    }
}

impl fmt::Display for Flavor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Flavor {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "esp" => Ok(Flavor::Esp),
            "msp" => Ok(Flavor::Msp),
            other => Err(format!("unknown flavor `{other}` (expected esp or msp)")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Node {
    Arc { tail: String, head: String },
    Vertex(String),
    /// `left + right`
    Parallel(usize, usize),
    /// `left * right`
    Series(usize, usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SpExpression {
    flavor: Flavor,
    nodes: Vec<Node>,
}

impl SpExpression {
    /// Validates the arena layout: post-order, every non-root node used once,
    /// leaves matching the flavor, and unique vertex names for `msp`.
    pub fn from_nodes(flavor: Flavor, nodes: Vec<Node>) -> Result<Self, ExprError> {
        if nodes.is_empty() {
            return Err(ExprError::Malformed("empty expression".into()));
        }
        let mut parents = vec![0u32; nodes.len()];
        let mut names = FxHashSet::default();
        for (i, node) in nodes.iter().enumerate() {
            match node {
                Node::Arc { .. } if flavor == Flavor::Msp => {
                    return Err(ExprError::FlavorMismatch("arc", "msp"))
                }
                Node::Vertex(_) if flavor == Flavor::Esp => {
                    return Err(ExprError::FlavorMismatch("vertex", "esp"))
                }
                Node::Vertex(name) => {
                    if !names.insert(name.as_str()) {
                        return Err(ExprError::DuplicateLeaf(name.clone()));
                    }
                }
                Node::Arc { .. } => {}
                &Node::Parallel(l, r) | &Node::Series(l, r) => {
                    if l >= i || r >= i || l == r {
                        return Err(ExprError::Malformed(format!("node {i} has invalid children")));
                    }
                    parents[l] += 1;
                    parents[r] += 1;
                }
            }
        }
        let root = nodes.len() - 1;
        if let Some(bad) = (0..nodes.len()).find(|&i| parents[i] != u32::from(i != root)) {
            return Err(ExprError::Malformed(format!("node {bad} is not used exactly once")));
        }
        Ok(SpExpression { flavor, nodes: left_first_postorder(nodes) })
    }

    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn root(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn leaf_count(&self) -> usize {
        self.nodes.iter().filter(|n| matches!(n, Node::Arc { .. } | Node::Vertex(_))).count()
    }

    /// Same operator tree with every leaf turned into a vertex leaf named
    /// `e1, e2, ...` in leaf order. For an `esp` expression this describes
    /// the line digraph of its evaluation.
    pub fn to_msp_shape(&self) -> SpExpression {
        let mut k = 0;
        let nodes = self
            .nodes
            .iter()
            .map(|n| match n {
                Node::Arc { .. } | Node::Vertex(_) => {
                    k += 1;
                    Node::Vertex(format!("e{k}"))
                }
                other => other.clone(),
            })
            .collect();
        SpExpression { flavor: Flavor::Msp, nodes }
    }

    /// Renames `esp` leaves after the vertices they evaluate to (`v1..`), so
    /// that identified endpoints carry equal names.
    pub fn with_canonical_names(&self) -> SpExpression {
        match self.flavor {
            Flavor::Msp => {
                let mut k = 0;
                let nodes = self
                    .nodes
                    .iter()
                    .map(|n| match n {
                        Node::Vertex(_) => {
                            k += 1;
                            Node::Vertex(format!("v{k}"))
                        }
                        other => other.clone(),
                    })
                    .collect();
                SpExpression { flavor: Flavor::Msp, nodes }
            }
            Flavor::Esp => {
                let ends = eval::esp_leaf_classes(self);
                let mut k = 0;
                let nodes = self
                    .nodes
                    .iter()
                    .map(|n| match n {
                        Node::Arc { .. } => {
                            let (t, h) = ends[k];
                            k += 1;
                            Node::Arc { tail: format!("v{}", t + 1), head: format!("v{}", h + 1) }
                        }
                        other => other.clone(),
                    })
                    .collect();
                SpExpression { flavor: Flavor::Esp, nodes }
            }
        }
    }
}

/// Reorders a valid arena into left-first post-order, the order the parser
/// produces, so that equal trees have equal arenas.
fn left_first_postorder(nodes: Vec<Node>) -> Vec<Node> {
    let root = nodes.len() - 1;
    let mut new_index = vec![usize::MAX; nodes.len()];
    let mut order = Vec::with_capacity(nodes.len());
    let mut stack = vec![(root, false)];
    while let Some((i, expanded)) = stack.pop() {
        match nodes[i] {
            Node::Parallel(l, r) | Node::Series(l, r) if !expanded => {
                stack.push((i, true));
                stack.push((r, false));
                stack.push((l, false));
            }
            _ => {
                new_index[i] = order.len();
                order.push(i);
            }
        }
    }
    if order.iter().enumerate().all(|(k, &i)| k == i) {
        return nodes;
    }
    let mut slots: Vec<Option<Node>> = nodes.into_iter().map(Some).collect();
    order
        .iter()
        .map(|&i| match slots[i].take().unwrap() {
            Node::Parallel(l, r) => Node::Parallel(new_index[l], new_index[r]),
            Node::Series(l, r) => Node::Series(new_index[l], new_index[r]),
            leaf => leaf,
        })
        .collect()
}

/// Canonical text: `*` binds tighter than `+`, both associate to the left,
/// and parentheses appear only where the tree needs them, so printing and
/// re-parsing gives back the same tree.
impl fmt::Display for SpExpression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        enum Task {
            Node(usize),
            Text(&'static str),
        }
        let needs_parens = |parent: &Node, child: usize, right: bool| -> bool {
            match (parent, &self.nodes[child]) {
                (Node::Series(..), Node::Parallel(..)) => true,
                (Node::Series(..), Node::Series(..)) | (Node::Parallel(..), Node::Parallel(..)) => right,
                _ => false,
            }
        };
        let mut stack = vec![Task::Node(self.root())];
        while let Some(task) = stack.pop() {
            match task {
                Task::Text(s) => f.write_str(s)?,
                Task::Node(i) => match &self.nodes[i] {
                    Node::Arc { tail, head } => write!(f, "{tail}->{head}")?,
                    Node::Vertex(name) => f.write_str(name)?,
                    parent @ (Node::Parallel(l, r) | Node::Series(l, r)) => {
                        let op = if matches!(parent, Node::Parallel(..)) { " + " } else { " * " };
                        // pushed in reverse
                        let (pl, pr) = (needs_parens(parent, *l, false), needs_parens(parent, *r, true));
                        if pr {
                            stack.push(Task::Text(")"));
                        }
                        stack.push(Task::Node(*r));
                        if pr {
                            stack.push(Task::Text("("));
                        }
                        stack.push(Task::Text(op));
                        if pl {
                            stack.push(Task::Text(")"));
                        }
                        stack.push(Task::Node(*l));
                        if pl {
                            stack.push(Task::Text("("));
                        }
                    }
                },
            }
        }
        Ok(())
    }
}

/// Incremental post-order construction.
#[derive(Debug)]
pub struct ExprBuilder {
    flavor: Flavor,
    nodes: Vec<Node>,
}

impl ExprBuilder {
    pub fn new(flavor: Flavor) -> Self {
        ExprBuilder { flavor, nodes: Vec::new() }
    }

    fn push(&mut self, node: Node) -> usize {
        self.nodes.push(node);
        self.nodes.len() - 1
    }

    pub fn arc(&mut self, tail: impl Into<String>, head: impl Into<String>) -> usize {
        self.push(Node::Arc { tail: tail.into(), head: head.into() })
    }

    pub fn vertex(&mut self, name: impl Into<String>) -> usize {
        self.push(Node::Vertex(name.into()))
    }

    pub fn parallel(&mut self, l: usize, r: usize) -> usize {
        self.push(Node::Parallel(l, r))
    }

    pub fn series(&mut self, l: usize, r: usize) -> usize {
        self.push(Node::Series(l, r))
    }

    /// Folds `items` left to right with the given composition.
    pub fn fold(&mut self, items: &[usize], series: bool) -> usize {
        let mut acc = items[0];
        for &x in &items[1..] {
            acc = if series { self.series(acc, x) } else { self.parallel(acc, x) };
        }
        acc
    }

    pub fn finish(self) -> Result<SpExpression, ExprError> {
        SpExpression::from_nodes(self.flavor, self.nodes)
    }
}
