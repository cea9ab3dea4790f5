//! Oriented chromatic number of edge series-parallel digraphs.
//!
//! Every expression node gets the set F of triples (H, ℓ, r): H is the
//! color graph (homomorphic image) of some oriented coloring of the
//! subgraph with at most 7 colors, and ℓ, r are the colors of its source and
//! sink. Leaves, parallel and series compositions combine these sets
//! directly; χ_o is the fewest labels of any H at the root. Color
//! permutations are deliberately kept distinct, since the combine steps
//! match on concrete colors.
//!
//! By default the same recursion is run against one fixed tournament T at a
//! time, one per isomorphism class on k = 2, 3, ... colors. Every color
//! graph on k labels lies inside some such T, and with T fixed a state
//! reduces to the pair (ℓ, r): F becomes a relation on colors, series
//! composition is relational composition and parallel composition is
//! intersection.

use std::hash::BuildHasherDefault;

use indexmap::IndexMap;
use rustc_hash::FxHasher;

use crate::colorgraph::{tournaments, ColorGraph, MAX_COLORS};
use crate::digraph::{compact_colors, VertexColoring};
use crate::error::{ExprError, NotAnArc};
use crate::expr::{Flavor, Node, SpExpression};
use crate::DpOptions;

type FxIndexMap<K, V> = IndexMap<K, V, BuildHasherDefault<FxHasher>>;

/// QR₇: arc (i,j) iff j − i ≡ 1, 2 or 4 (mod 7).
pub fn qr7() -> ColorGraph {
    let mut h = ColorGraph::EMPTY;
    for i in 1..=MAX_COLORS {
        for d in [1u8, 2, 4] {
            h = h.with_arc(i, (i - 1 + d) % 7 + 1);
        }
    }
    h
}

/// Smallest b with (a,b) and (b,c) both arcs of QR₇, for an arc (a,c).
pub fn qr7_middle(a: u8, c: u8) -> Result<u8, NotAnArc> {
    let h = qr7();
    if !(1..=MAX_COLORS).contains(&a) || !(1..=MAX_COLORS).contains(&c) || !h.has_arc(a, c) {
        return Err(NotAnArc(a, c));
    }
    Ok((1..=MAX_COLORS)
        .find(|&b| h.has_arc(a, b) && h.has_arc(b, c))
        .expect("every arc of QR7 lies on a 2-path"))
}

/// Homomorphism into QR₇ with the source colored 1 and the sink 2: each
/// series split colors the middle vertex with [`qr7_middle`].
pub fn color_esp_qr7(x: &SpExpression) -> Result<VertexColoring, ExprError> {
    if x.flavor() != Flavor::Esp {
        return Err(ExprError::FlavorMismatch("vertex", "esp"));
    }
    let nodes = x.nodes();
    let mut ends = vec![(0u8, 0u8); nodes.len()];
    ends[x.root()] = (1, 2);
    let mut leaf_ends = Vec::with_capacity(x.leaf_count());
    for i in (0..nodes.len()).rev() {
        let (a, c) = ends[i];
        match nodes[i] {
            Node::Parallel(l, r) => {
                ends[l] = (a, c);
                ends[r] = (a, c);
            }
            Node::Series(l, r) => {
                let b = qr7_middle(a, c).expect("invariant: terminal colors form an arc of QR7");
                ends[l] = (a, b);
                ends[r] = (b, c);
            }
            Node::Arc { .. } => leaf_ends.push((a, c)),
            Node::Vertex(_) => unreachable!("esp expression"),
        }
    }
    leaf_ends.reverse();
    let classes = crate::expr::eval::esp_leaf_classes(x);
    let n = classes.iter().map(|&(t, h)| t.max(h) + 1).max().unwrap_or(0);
    let mut colors = vec![0u32; n];
    for (&(t, h), &(a, c)) in classes.iter().zip(&leaf_ends) {
        colors[t] = a as u32;
        colors[h] = c as u32;
    }
    Ok(VertexColoring::new(colors, MAX_COLORS as u32))
}

/// One DP state: color graph, source color, sink color.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct OcnTriple {
    pub h: ColorGraph,
    pub ell: u8,
    pub r: u8,
}

/// A deduplicated set of triples. `back[k]` names the pair of child states
/// that produced state k (unused for leaves).
#[derive(Clone, Debug, Default)]
pub struct OcnStateSet {
    states: Vec<OcnTriple>,
    back: Vec<(u32, u32)>,
}

impl OcnStateSet {
    fn from_map(map: FxIndexMap<OcnTriple, (u32, u32)>) -> Self {
        let (states, back) = map.into_iter().unzip();
        OcnStateSet { states, back }
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn states(&self) -> &[OcnTriple] {
        &self.states
    }

    pub fn back(&self, k: usize) -> (usize, usize) {
        let (a, b) = self.back[k];
        (a as usize, b as usize)
    }

    pub fn contains(&self, t: &OcnTriple) -> bool {
        self.states.contains(t)
    }

    /// Fewest labels over all states, with the first state attaining it.
    pub fn best(&self) -> Option<(u32, usize)> {
        self.states
            .iter()
            .enumerate()
            .map(|(k, s)| (s.h.label_count(), k))
            .min_by_key(|&(v, k)| (v, k))
    }

    /// Drops every triple for which another triple with the same ℓ and r
    /// has a color graph contained in its own.
    pub fn prune_dominated(&mut self) {
        let mut groups: FxIndexMap<(u8, u8), Vec<usize>> = FxIndexMap::default();
        for (k, s) in self.states.iter().enumerate() {
            groups.entry((s.ell, s.r)).or_default().push(k);
        }
        let mut keep = vec![false; self.states.len()];
        for members in groups.values_mut() {
            members.sort_by_key(|&k| (self.states[k].h.label_count() + self.states[k].h.arc_count(), k));
            let mut kept: Vec<ColorGraph> = Vec::new();
            for &k in members.iter() {
                let h = self.states[k].h;
                if !kept.iter().any(|g| g.is_subgraph_of(h)) {
                    kept.push(h);
                    keep[k] = true;
                }
            }
        }
        let mut i = 0;
        self.states.retain(|_| {
            i += 1;
            keep[i - 1]
        });
        let mut i = 0;
        self.back.retain(|_| {
            i += 1;
            keep[i - 1]
        });
    }
}

/// F of a single arc: all 42 ordered pairs of distinct colors.
pub fn ocn_leaf() -> OcnStateSet {
    let mut map = FxIndexMap::default();
    for i in 1..=MAX_COLORS {
        for j in 1..=MAX_COLORS {
            if i != j {
                map.insert(OcnTriple { h: ColorGraph::EMPTY.with_arc(i, j), ell: i, r: j }, (0, 0));
            }
        }
    }
    OcnStateSet::from_map(map)
}

/// Parallel composition: equal terminal colors, oriented union.
pub fn ocn_parallel(f1: &OcnStateSet, f2: &OcnStateSet) -> OcnStateSet {
    let mut by_ends: FxIndexMap<(u8, u8), Vec<u32>> = FxIndexMap::default();
    for (k, s) in f2.states.iter().enumerate() {
        by_ends.entry((s.ell, s.r)).or_default().push(k as u32);
    }
    let mut map = FxIndexMap::default();
    for (i, s1) in f1.states.iter().enumerate() {
        let Some(partners) = by_ends.get(&(s1.ell, s1.r)) else { continue };
        for &j in partners {
            let h = s1.h.union(f2.states[j as usize].h);
            if h.is_oriented() {
                map.entry(OcnTriple { h, ell: s1.ell, r: s1.r }).or_insert((i as u32, j));
            }
        }
    }
    OcnStateSet::from_map(map)
}

/// Series composition: sink color of the first equals source color of the
/// second, oriented union.
pub fn ocn_series(f1: &OcnStateSet, f2: &OcnStateSet) -> OcnStateSet {
    let mut by_source: Vec<Vec<u32>> = vec![Vec::new(); MAX_COLORS as usize + 1];
    for (k, s) in f2.states.iter().enumerate() {
        by_source[s.ell as usize].push(k as u32);
    }
    let mut map = FxIndexMap::default();
    for (i, s1) in f1.states.iter().enumerate() {
        for &j in &by_source[s1.r as usize] {
            let s2 = &f2.states[j as usize];
            let h = s1.h.union(s2.h);
            if h.is_oriented() {
                map.entry(OcnTriple { h, ell: s1.ell, r: s2.r }).or_insert((i as u32, j));
            }
        }
    }
    OcnStateSet::from_map(map)
}

#[derive(Clone, Debug)]
pub struct OcnSolution {
    /// χ_o of the evaluated digraph.
    pub value: u32,
    /// Coloring with colors 1..=value, indexed like the evaluation's vertices.
    pub witness: Option<VertexColoring>,
    /// Color graph of the optimal root state, on the DP's own labels.
    pub color_graph: ColorGraph,
    /// Largest state set seen at any node.
    pub max_states: usize,
}

/// All state sets, indexed by node. With `prune`, every set is pruned
/// before its parent combines it.
pub fn ocn_tables(x: &SpExpression, prune: bool) -> Result<Vec<OcnStateSet>, ExprError> {
    if x.flavor() != Flavor::Esp {
        return Err(ExprError::FlavorMismatch("vertex", "esp"));
    }
    let leaf = ocn_leaf();
    let mut sets: Vec<OcnStateSet> = Vec::with_capacity(x.nodes().len());
    for node in x.nodes() {
        let mut f = match *node {
            Node::Arc { .. } => leaf.clone(),
            Node::Parallel(l, r) => ocn_parallel(&sets[l], &sets[r]),
            Node::Series(l, r) => ocn_series(&sets[l], &sets[r]),
            Node::Vertex(_) => unreachable!(),
        };
        if prune {
            f.prune_dominated();
        }
        sets.push(f);
    }
    Ok(sets)
}

/// How [`chi_o_esp_with`] searches.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum OcnMode {
    /// One pass per tournament class on k = 2, 3, ... colors.
    #[default]
    Tournaments,
    /// A single pass over all triples (H, ℓ, r).
    Triples,
}

/// χ_o of the digraph defined by an `esp` expression.
pub fn chi_o_esp(x: &SpExpression, opts: DpOptions) -> Result<OcnSolution, ExprError> {
    chi_o_esp_with(x, opts, OcnMode::Tournaments)
}

/// [`chi_o_esp`] with an explicit search mode. `prune` only affects
/// [`OcnMode::Triples`].
pub fn chi_o_esp_with(x: &SpExpression, opts: DpOptions, mode: OcnMode) -> Result<OcnSolution, ExprError> {
    if x.flavor() != Flavor::Esp {
        return Err(ExprError::FlavorMismatch("vertex", "esp"));
    }
    match mode {
        OcnMode::Tournaments => Ok(tournament_search(x, opts.witness)),
        OcnMode::Triples => triple_search(x, opts),
    }
}

/// Pairs of colors as a 49-bit set: (i, j) at bit 7(i-1) + (j-1).
type Relation = u64;

const ROW: u64 = 0x7f;

#[inline]
fn row(rel: Relation, i: usize) -> u64 {
    (rel >> (7 * i)) & ROW
}

/// Pairs (i, j) with (i, c) in `a` and (c, j) in `b` for some c.
fn compose(a: Relation, b: Relation) -> Relation {
    let mut out = 0;
    for i in 0..7 {
        let mut mids = row(a, i);
        let mut acc = 0;
        while mids != 0 {
            let c = mids.trailing_zeros() as usize;
            mids &= mids - 1;
            acc |= row(b, c);
        }
        out |= acc << (7 * i);
    }
    out
}

fn arc_relation(t: ColorGraph) -> Relation {
    t.arcs().fold(0, |acc, (i, j)| acc | 1 << ((i - 1) as u32 * 7 + (j - 1) as u32))
}

/// Source/sink color pairs of all homomorphisms into `t`, per node. Stops
/// with an empty root at the first empty relation.
fn relations(x: &SpExpression, t: ColorGraph) -> Vec<Relation> {
    let leaf = arc_relation(t);
    let nodes = x.nodes();
    let mut rel: Vec<Relation> = Vec::with_capacity(nodes.len());
    for node in nodes {
        let f = match *node {
            Node::Arc { .. } => leaf,
            Node::Parallel(l, r) => rel[l] & rel[r],
            Node::Series(l, r) => compose(rel[l], rel[r]),
            Node::Vertex(_) => unreachable!(),
        };
        rel.push(f);
        if f == 0 {
            rel.resize(nodes.len(), 0);
            break;
        }
    }
    rel
}

/// Root relation and largest relation size, keeping just the pending child
/// relations: in post-order the children of a node are the top two entries.
fn root_relation(x: &SpExpression, t: ColorGraph) -> (Relation, usize) {
    let leaf = arc_relation(t);
    let mut stack: Vec<Relation> = Vec::new();
    let mut max_states = 0;
    for node in x.nodes() {
        let f = match node {
            Node::Arc { .. } => leaf,
            Node::Parallel(..) | Node::Series(..) => {
                let b = stack.pop().unwrap();
                let a = stack.pop().unwrap();
                if matches!(node, Node::Parallel(..)) {
                    a & b
                } else {
                    compose(a, b)
                }
            }
            Node::Vertex(_) => unreachable!(),
        };
        if f == 0 {
            return (0, max_states);
        }
        max_states = max_states.max(f.count_ones() as usize);
        stack.push(f);
    }
    (stack.pop().unwrap(), max_states)
}

fn tournament_search(x: &SpExpression, witness: bool) -> OcnSolution {
    for k in 2..=MAX_COLORS {
        for &t in tournaments(k) {
            if !witness {
                let (root, max_states) = root_relation(x, t);
                if root != 0 {
                    return OcnSolution { value: k as u32, witness: None, color_graph: t, max_states };
                }
                continue;
            }
            let rel = relations(x, t);
            let root = rel[x.root()];
            if root == 0 {
                continue;
            }
            let max_states = rel.iter().map(|r| r.count_ones() as usize).max().unwrap_or(0);
            let witness = Some(relation_witness(x, &rel));
            return OcnSolution { value: k as u32, witness, color_graph: t, max_states };
        }
    }
    unreachable!("QR7 is a tournament on 7 colors that every esp-digraph maps into")
}

/// Top-down choice of terminal colors inside the relations: the first root
/// pair, and for a series node the smallest middle color that fits both
/// halves.
fn relation_witness(x: &SpExpression, rel: &[Relation]) -> VertexColoring {
    let nodes = x.nodes();
    let pos = rel[x.root()].trailing_zeros() as usize;
    let mut ends = vec![(0usize, 0usize); nodes.len()];
    ends[x.root()] = (pos / 7, pos % 7);
    let mut leaf_ends = Vec::with_capacity(x.leaf_count());
    for i in (0..nodes.len()).rev() {
        let (a, c) = ends[i];
        match nodes[i] {
            Node::Parallel(l, r) => {
                ends[l] = (a, c);
                ends[r] = (a, c);
            }
            Node::Series(l, r) => {
                let b = (0..7)
                    .find(|&b| row(rel[l], a) >> b & 1 != 0 && row(rel[r], b) >> c & 1 != 0)
                    .expect("a pair of the composition has a middle color");
                ends[l] = (a, b);
                ends[r] = (b, c);
            }
            Node::Arc { .. } => leaf_ends.push((a, c)),
            Node::Vertex(_) => unreachable!(),
        }
    }
    leaf_ends.reverse();
    let classes = crate::expr::eval::esp_leaf_classes(x);
    let n = classes.iter().map(|&(t, h)| t.max(h) + 1).max().unwrap_or(0);
    let mut colors = vec![0u32; n];
    for (&(t, h), &(a, c)) in classes.iter().zip(&leaf_ends) {
        colors[t] = a as u32 + 1;
        colors[h] = c as u32 + 1;
    }
    let count = compact_colors(&mut colors);
    VertexColoring::new(colors, count)
}

fn triple_search(x: &SpExpression, opts: DpOptions) -> Result<OcnSolution, ExprError> {
    if opts.witness {
        let sets = ocn_tables(x, opts.prune)?;
        let max_states = sets.iter().map(OcnStateSet::len).max().unwrap_or(0);
        let root = sets.last().unwrap();
        let (value, best) = root.best().expect("an esp-digraph is 7-colorable");
        let witness = extract_witness(x, &sets, best);
        debug_assert_eq!(witness.count, value);
        return Ok(OcnSolution { value, witness: Some(witness), color_graph: root.states[best].h, max_states });
    }
    // value only: free each child set as soon as its parent is built
    let leaf = ocn_leaf();
    let mut sets: Vec<Option<OcnStateSet>> = Vec::with_capacity(x.nodes().len());
    let mut max_states = 0;
    for node in x.nodes() {
        let mut f = match *node {
            Node::Arc { .. } => leaf.clone(),
            Node::Parallel(l, r) | Node::Series(l, r) => {
                let a = sets[l].take().unwrap();
                let b = sets[r].take().unwrap();
                if matches!(node, Node::Parallel(..)) {
                    ocn_parallel(&a, &b)
                } else {
                    ocn_series(&a, &b)
                }
            }
            Node::Vertex(_) => unreachable!(),
        };
        if opts.prune {
            f.prune_dominated();
        }
        max_states = max_states.max(f.len());
        sets.push(Some(f));
    }
    let root = sets.pop().unwrap().unwrap();
    let (value, best) = root.best().expect("an esp-digraph is 7-colorable");
    Ok(OcnSolution { value, witness: None, color_graph: root.states[best].h, max_states })
}

/// Follows back-pointers from `best` at the root down to the leaves and
/// colors every arc's endpoints with its leaf triple.
fn extract_witness(x: &SpExpression, sets: &[OcnStateSet], best: usize) -> VertexColoring {
    let nodes = x.nodes();
    let mut chosen = vec![usize::MAX; nodes.len()];
    chosen[x.root()] = best;
    let mut leaf_states = Vec::with_capacity(x.leaf_count());
    for i in (0..nodes.len()).rev() {
        let k = chosen[i];
        match nodes[i] {
            Node::Parallel(l, r) | Node::Series(l, r) => {
                let (a, b) = sets[i].back(k);
                chosen[l] = a;
                chosen[r] = b;
            }
            _ => leaf_states.push(sets[i].states[k]),
        }
    }
    leaf_states.reverse();
    let classes = crate::expr::eval::esp_leaf_classes(x);
    let n = classes.iter().map(|&(t, h)| t.max(h) + 1).max().unwrap_or(0);
    let mut colors = vec![0u32; n];
    for (&(t, h), s) in classes.iter().zip(&leaf_states) {
        debug_assert!(colors[t] == 0 || colors[t] == s.ell as u32);
        debug_assert!(colors[h] == 0 || colors[h] == s.r as u32);
        colors[t] = s.ell as u32;
        colors[h] = s.r as u32;
    }
    let count = compact_colors(&mut colors);
    VertexColoring::new(colors, count)
}
