//! Oriented multidigraphs and the structural operations the solvers share.
//!
//! Vertices and arcs are dense indices ([`VertexId`], [`ArcId`]); every
//! vertex additionally carries a unique display name used by the JSON and
//! DOT formats. Parallel arcs are allowed, loops and opposite arcs are not.

use std::collections::HashMap;
use std::fmt;

use rustc_hash::{FxHashMap, FxHashSet};
use serde::{Deserialize, Serialize};

use crate::error::GraphError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct VertexId(pub usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ArcId(pub usize);

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for ArcId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Largest input accepted by [`isomorphic`].
pub const ISOMORPHISM_CAP: usize = 200;
/// Largest input accepted by [`undirected_chromatic_number`].
pub const CHROMATIC_CAP: usize = 20;

/// A loop-free digraph without opposite arcs. Arc multiplicity is explicit:
/// two arcs with the same tail and head are distinct [`ArcId`]s.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrientedDigraph {
    names: Vec<String>,
    arcs: Vec<(VertexId, VertexId)>,
    out_arcs: Vec<Vec<ArcId>>,
    in_arcs: Vec<Vec<ArcId>>,
}

impl OrientedDigraph {
    /// Builds a digraph, checking the orientation invariants.
    pub fn new(names: Vec<String>, arcs: Vec<(VertexId, VertexId)>) -> Result<Self, GraphError> {
        let n = names.len();
        let mut seen = FxHashSet::default();
        for name in &names {
            if !seen.insert(name.as_str()) {
                return Err(GraphError::DuplicateVertex(name.clone()));
            }
        }
        let mut pairs = FxHashSet::default();
        let mut out_arcs = vec![Vec::new(); n];
        let mut in_arcs = vec![Vec::new(); n];
        for (id, &(tail, head)) in arcs.iter().enumerate() {
            if tail.0 >= n || head.0 >= n {
                return Err(GraphError::UnknownEndpoint { arc: ArcId(id) });
            }
            if tail == head {
                return Err(GraphError::Loop { arc: ArcId(id), vertex: names[tail.0].clone() });
            }
            if pairs.contains(&(head, tail)) {
                return Err(GraphError::OppositeArcs {
                    tail: names[tail.0].clone(),
                    head: names[head.0].clone(),
                });
            }
            pairs.insert((tail, head));
            out_arcs[tail.0].push(ArcId(id));
            in_arcs[head.0].push(ArcId(id));
        }
        Ok(OrientedDigraph { names, arcs, out_arcs, in_arcs })
    }

    /// Vertices named `v1..vn`.
    pub fn with_vertex_count(n: usize, arcs: Vec<(usize, usize)>) -> Result<Self, GraphError> {
        let names = (1..=n).map(|i| format!("v{i}")).collect();
        Self::new(names, arcs.into_iter().map(|(t, h)| (VertexId(t), VertexId(h))).collect())
    }

    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        (0..self.names.len()).map(VertexId)
    }

    pub fn arcs(&self) -> &[(VertexId, VertexId)] {
        &self.arcs
    }

    pub fn arc(&self, a: ArcId) -> (VertexId, VertexId) {
        self.arcs[a.0]
    }

    pub fn name(&self, v: VertexId) -> &str {
        &self.names[v.0]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn vertex_by_name(&self, name: &str) -> Option<VertexId> {
        self.names.iter().position(|n| n == name).map(VertexId)
    }

    pub fn out_arcs(&self, v: VertexId) -> &[ArcId] {
        &self.out_arcs[v.0]
    }

    pub fn in_arcs(&self, v: VertexId) -> &[ArcId] {
        &self.in_arcs[v.0]
    }

    pub fn outdegree(&self, v: VertexId) -> usize {
        self.out_arcs[v.0].len()
    }

    pub fn indegree(&self, v: VertexId) -> usize {
        self.in_arcs[v.0].len()
    }

    /// Distinct successors N⁺(v), in id order.
    pub fn successors(&self, v: VertexId) -> Vec<VertexId> {
        let mut s: Vec<_> = self.out_arcs[v.0].iter().map(|&a| self.arcs[a.0].1).collect();
        s.sort_unstable();
        s.dedup();
        s
    }

    /// Distinct predecessors N⁻(v), in id order.
    pub fn predecessors(&self, v: VertexId) -> Vec<VertexId> {
        let mut s: Vec<_> = self.in_arcs[v.0].iter().map(|&a| self.arcs[a.0].0).collect();
        s.sort_unstable();
        s.dedup();
        s
    }

    /// Vertices of indegree 0.
    pub fn sources(&self) -> Vec<VertexId> {
        self.vertices().filter(|&v| self.indegree(v) == 0).collect()
    }

    /// Vertices of outdegree 0.
    pub fn sinks(&self) -> Vec<VertexId> {
        self.vertices().filter(|&v| self.outdegree(v) == 0).collect()
    }

    pub fn is_acyclic(&self) -> bool {
        let mut indeg: Vec<usize> = self.in_arcs.iter().map(Vec::len).collect();
        let mut stack: Vec<usize> = (0..indeg.len()).filter(|&v| indeg[v] == 0).collect();
        let mut seen = 0;
        while let Some(v) = stack.pop() {
            seen += 1;
            for &a in &self.out_arcs[v] {
                let h = self.arcs[a.0].1 .0;
                indeg[h] -= 1;
                if indeg[h] == 0 {
                    stack.push(h);
                }
            }
        }
        seen == self.names.len()
    }

    /// Same graph with vertices renumbered: old vertex `v` becomes `perm[v]`.
    /// Arc order is kept.
    pub fn permuted(&self, perm: &[usize]) -> OrientedDigraph {
        assert_eq!(perm.len(), self.names.len());
        let mut names = vec![String::new(); perm.len()];
        for (old, &new) in perm.iter().enumerate() {
            names[new] = self.names[old].clone();
        }
        let arcs = self.arcs.iter().map(|&(t, h)| (VertexId(perm[t.0]), VertexId(perm[h.0]))).collect();
        OrientedDigraph::new(names, arcs).expect("relabeling preserves orientation")
    }

    pub fn to_json(&self) -> DigraphJson {
        DigraphJson {
            vertices: self.names.clone(),
            arcs: self
                .arcs
                .iter()
                .map(|&(t, h)| [self.names[t.0].clone(), self.names[h.0].clone()])
                .collect(),
        }
    }

    pub fn from_json(doc: &DigraphJson) -> Result<Self, GraphError> {
        let index: HashMap<&str, usize> =
            doc.vertices.iter().enumerate().map(|(i, n)| (n.as_str(), i)).collect();
        let mut arcs = Vec::with_capacity(doc.arcs.len());
        for (id, [t, h]) in doc.arcs.iter().enumerate() {
            let (Some(&t), Some(&h)) = (index.get(t.as_str()), index.get(h.as_str())) else {
                return Err(GraphError::UnknownEndpoint { arc: ArcId(id) });
            };
            arcs.push((VertexId(t), VertexId(h)));
        }
        Self::new(doc.vertices.clone(), arcs)
    }

    /// Graphviz rendering, one edge line per arc instance.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph G {\n");
        for name in &self.names {
            s.push_str(&format!("  {};\n", dot_id(name)));
        }
        for &(t, h) in &self.arcs {
            s.push_str(&format!("  {} -> {};\n", dot_id(&self.names[t.0]), dot_id(&self.names[h.0])));
        }
        s.push_str("}\n");
        s
    }
}

fn dot_id(name: &str) -> String {
    if !name.is_empty()
        && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
        && !name.starts_with(|c: char| c.is_ascii_digit())
    {
        name.to_string()
    } else {
        format!("\"{}\"", name.replace('\\', "\\\\").replace('"', "\\\""))
    }
}

/// Wire format: `{"vertices": [...], "arcs": [[tail, head], ...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DigraphJson {
    pub vertices: Vec<String>,
    pub arcs: Vec<[String; 2]>,
}

/// Makes every name unique by suffixing repeats with `#k`.
pub(crate) fn uniquify(names: Vec<String>) -> Vec<String> {
    let mut used: FxHashSet<String> = names.iter().cloned().collect();
    let mut first: FxHashSet<String> = FxHashSet::default();
    let mut out = Vec::with_capacity(names.len());
    for name in names {
        if first.insert(name.clone()) {
            out.push(name);
            continue;
        }
        let mut k = 2;
        let fresh = loop {
            let candidate = format!("{name}#{k}");
            if !used.contains(&candidate) {
                break candidate;
            }
            k += 1;
        };
        used.insert(fresh.clone());
        first.insert(fresh.clone());
        out.push(fresh);
    }
    out
}

/// LD(g): one vertex per arc, and an arc a→b whenever head(a) = tail(b).
pub fn line_digraph(g: &OrientedDigraph) -> Result<OrientedDigraph, GraphError> {
    let names = uniquify(
        g.arcs
            .iter()
            .map(|&(t, h)| format!("{}->{}", g.names[t.0], g.names[h.0]))
            .collect(),
    );
    let mut arcs = Vec::new();
    for (a, &(_, head)) in g.arcs.iter().enumerate() {
        for &b in &g.out_arcs[head.0] {
            arcs.push((VertexId(a), VertexId(b.0)));
        }
    }
    OrientedDigraph::new(names, arcs)
}

/// Simple undirected graph; edges are stored with the smaller endpoint first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UndirectedGraph {
    pub vertex_count: usize,
    pub edges: Vec<(VertexId, VertexId)>,
}

impl UndirectedGraph {
    pub fn neighbors(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.vertex_count];
        for &(u, v) in &self.edges {
            adj[u.0].push(v.0);
            adj[v.0].push(u.0);
        }
        adj
    }
}

/// un(g), with parallel arcs collapsed. Edges are sorted.
pub fn underlying_graph(g: &OrientedDigraph) -> UndirectedGraph {
    let mut edges: Vec<_> = g
        .arcs
        .iter()
        .map(|&(t, h)| if t < h { (t, h) } else { (h, t) })
        .collect();
    edges.sort_unstable();
    edges.dedup();
    UndirectedGraph { vertex_count: g.vertex_count(), edges }
}

/// Colors are `1..=count`, indexed by [`VertexId`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexColoring {
    pub colors: Vec<u32>,
    pub count: u32,
}

/// Colors are `1..=count`, indexed by [`ArcId`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArcColoring {
    pub colors: Vec<u32>,
    pub count: u32,
}

impl VertexColoring {
    pub fn new(colors: Vec<u32>, count: u32) -> Self {
        VertexColoring { colors, count }
    }

    pub fn color(&self, v: VertexId) -> u32 {
        self.colors[v.0]
    }

    /// Number of distinct colors actually used.
    pub fn used(&self) -> usize {
        distinct(&self.colors)
    }

    /// `{"name": color, ...}` in vertex order.
    pub fn to_json(&self, g: &OrientedDigraph) -> serde_json::Value {
        let mut map = serde_json::Map::new();
        for v in g.vertices() {
            map.insert(g.name(v).to_string(), self.colors[v.0].into());
        }
        serde_json::Value::Object(map)
    }
}

impl ArcColoring {
    pub fn new(colors: Vec<u32>, count: u32) -> Self {
        ArcColoring { colors, count }
    }

    pub fn color(&self, a: ArcId) -> u32 {
        self.colors[a.0]
    }

    pub fn used(&self) -> usize {
        distinct(&self.colors)
    }

    /// `{"arcId": color, ...}` in arc order.
    pub fn to_json(&self) -> serde_json::Value {
        let mut map = serde_json::Map::new();
        for (a, &c) in self.colors.iter().enumerate() {
            map.insert(a.to_string(), c.into());
        }
        serde_json::Value::Object(map)
    }
}

fn distinct(colors: &[u32]) -> usize {
    let mut c = colors.to_vec();
    c.sort_unstable();
    c.dedup();
    c.len()
}

/// Renumbers colors to `1..=k` keeping their relative order.
pub(crate) fn compact_colors(colors: &mut [u32]) -> u32 {
    let mut used: Vec<u32> = colors.to_vec();
    used.sort_unstable();
    used.dedup();
    for c in colors.iter_mut() {
        *c = used.binary_search(c).unwrap() as u32 + 1;
    }
    used.len() as u32
}

/// Why a vertex coloring is not an oriented coloring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum VertexViolation {
    /// Both endpoints of the arc share a color.
    MonochromaticArc(ArcId),
    /// Arc `first` runs class a→b and arc `second` runs b→a.
    OppositeDirections { first: ArcId, second: ArcId },
}

/// Why an arc coloring is not an oriented arc coloring. Pairs are
/// consecutive arcs `(in, out)` sharing a middle vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ArcViolation {
    ConsecutiveSameColor { first: ArcId, second: ArcId },
    OppositeDirections { first: (ArcId, ArcId), second: (ArcId, ArcId) },
}

fn check_range(colors: &[u32], expected: usize, count: u32) -> Result<(), GraphError> {
    if colors.len() != expected {
        return Err(GraphError::PartialColoring { expected, got: colors.len() });
    }
    if let Some(&bad) = colors.iter().find(|&&c| c == 0 || c > count) {
        return Err(GraphError::ColorOutOfRange { color: bad, count });
    }
    Ok(())
}

/// Checks both oriented-coloring conditions. The first violation in arc id
/// order is reported; for a direction conflict `second` is the later arc and
/// `first` the earliest arc realizing the opposite class pair.
pub fn validate_vertex_coloring(
    g: &OrientedDigraph,
    c: &VertexColoring,
) -> Result<Option<VertexViolation>, GraphError> {
    check_range(&c.colors, g.vertex_count(), c.count)?;
    let mut direction: FxHashMap<(u32, u32), ArcId> = FxHashMap::default();
    for (id, &(t, h)) in g.arcs.iter().enumerate() {
        let (a, b) = (c.colors[t.0], c.colors[h.0]);
        if a == b {
            return Ok(Some(VertexViolation::MonochromaticArc(ArcId(id))));
        }
        if let Some(&first) = direction.get(&(b, a)) {
            return Ok(Some(VertexViolation::OppositeDirections { first, second: ArcId(id) }));
        }
        direction.entry((a, b)).or_insert(ArcId(id));
    }
    Ok(None)
}

/// Checks that `c` maps every arc onto an arc of the target: `has_arc(a, b)`
/// must hold for every arc (u,v) with c(u)=a, c(v)=b.
pub fn validate_homomorphism(
    g: &OrientedDigraph,
    c: &VertexColoring,
    has_arc: impl Fn(u32, u32) -> bool,
) -> Result<Option<ArcId>, GraphError> {
    check_range(&c.colors, g.vertex_count(), c.count)?;
    Ok(g.arcs
        .iter()
        .position(|&(t, h)| !has_arc(c.colors[t.0], c.colors[h.0]))
        .map(ArcId))
}

/// Arc-coloring counterpart of [`validate_vertex_coloring`], evaluated
/// directly on consecutive arc pairs in `(in, out)` id order.
pub fn validate_arc_coloring(
    g: &OrientedDigraph,
    c: &ArcColoring,
) -> Result<Option<ArcViolation>, GraphError> {
    check_range(&c.colors, g.arc_count(), c.count)?;
    let mut direction: FxHashMap<(u32, u32), (ArcId, ArcId)> = FxHashMap::default();
    for (id, &(_, head)) in g.arcs.iter().enumerate() {
        for &next in &g.out_arcs[head.0] {
            let pair = (ArcId(id), next);
            let (a, b) = (c.colors[id], c.colors[next.0]);
            if a == b {
                return Ok(Some(ArcViolation::ConsecutiveSameColor { first: pair.0, second: pair.1 }));
            }
            if let Some(&first) = direction.get(&(b, a)) {
                return Ok(Some(ArcViolation::OppositeDirections { first, second: pair }));
            }
            direction.entry((a, b)).or_insert(pair);
        }
    }
    Ok(None)
}

/// Exact χ(un(g)) by backtracking; at most [`CHROMATIC_CAP`] vertices.
pub fn undirected_chromatic_number(g: &OrientedDigraph) -> Result<u32, GraphError> {
    let n = g.vertex_count();
    if n > CHROMATIC_CAP {
        return Err(GraphError::SizeCap { limit: CHROMATIC_CAP, actual: n });
    }
    if n == 0 {
        return Ok(0);
    }
    let un = underlying_graph(g);
    let adj = un.neighbors();
    let order = connected_order(&adj);
    let mut pos = vec![0; n];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    // earlier neighbors only
    let back: Vec<Vec<usize>> = order
        .iter()
        .map(|&v| adj[v].iter().copied().filter(|&w| pos[w] < pos[v]).collect())
        .collect();
    let mut colors = vec![0u32; n];
    for k in 1..=n as u32 {
        if color_search(&order, &back, &mut colors, 0, 0, k) {
            return Ok(k);
        }
    }
    unreachable!("n colors always suffice")
}

fn color_search(
    order: &[usize],
    back: &[Vec<usize>],
    colors: &mut [u32],
    i: usize,
    max_used: u32,
    k: u32,
) -> bool {
    if i == order.len() {
        return true;
    }
    let v = order[i];
    for c in 1..=(max_used + 1).min(k) {
        if back[i].iter().all(|&w| colors[w] != c) {
            colors[v] = c;
            if color_search(order, back, colors, i + 1, max_used.max(c), k) {
                return true;
            }
        }
    }
    colors[v] = 0;
    false
}

/// Vertex order where each vertex (after the first of its component) has
/// the most neighbors among those already placed; ties go to higher degree.
pub(crate) fn connected_order(adj: &[Vec<usize>]) -> Vec<usize> {
    let n = adj.len();
    let mut placed = vec![false; n];
    let mut weight = vec![0usize; n];
    let mut order = Vec::with_capacity(n);
    for _ in 0..n {
        let v = (0..n)
            .filter(|&v| !placed[v])
            .max_by_key(|&v| (weight[v], adj[v].len(), std::cmp::Reverse(v)))
            .unwrap();
        placed[v] = true;
        order.push(v);
        for &w in &adj[v] {
            weight[w] += 1;
        }
    }
    order
}

/// Multiplicity-respecting isomorphism test by refinement plus backtracking;
/// both graphs must have at most [`ISOMORPHISM_CAP`] vertices.
pub fn isomorphic(g1: &OrientedDigraph, g2: &OrientedDigraph) -> Result<bool, GraphError> {
    for g in [g1, g2] {
        if g.vertex_count() > ISOMORPHISM_CAP {
            return Err(GraphError::SizeCap { limit: ISOMORPHISM_CAP, actual: g.vertex_count() });
        }
    }
    let n = g1.vertex_count();
    if n != g2.vertex_count() || g1.arc_count() != g2.arc_count() {
        return Ok(false);
    }
    let (c1, c2) = refine_pair(g1, g2);
    let mut h1 = c1.clone();
    let mut h2 = c2.clone();
    h1.sort_unstable();
    h2.sort_unstable();
    if h1 != h2 {
        return Ok(false);
    }
    let m1 = multiplicities(g1);
    let m2 = multiplicities(g2);
    let und: Vec<Vec<usize>> = {
        let mut adj = vec![Vec::new(); n];
        for &(t, h) in g1.arcs() {
            adj[t.0].push(h.0);
            adj[h.0].push(t.0);
        }
        adj
    };
    let order = connected_order(&und);
    let mut matcher = Matcher {
        n,
        order: &order,
        c1: &c1,
        c2: &c2,
        m1: &m1,
        m2: &m2,
        map: vec![usize::MAX; n],
        used: vec![false; n],
    };
    Ok(matcher.search(0))
}

fn multiplicities(g: &OrientedDigraph) -> Vec<u16> {
    let n = g.vertex_count();
    let mut m = vec![0u16; n * n];
    for &(t, h) in g.arcs() {
        m[t.0 * n + h.0] += 1;
    }
    m
}

/// Joint color refinement of both graphs so that colors are comparable.
fn refine_pair(g1: &OrientedDigraph, g2: &OrientedDigraph) -> (Vec<usize>, Vec<usize>) {
    let n = g1.vertex_count();
    let mut colors: Vec<usize> = vec![0; 2 * n];
    let mut classes = 1;
    loop {
        let mut sigs: Vec<(usize, Vec<(bool, usize)>)> = Vec::with_capacity(2 * n);
        for (offset, g) in [(0, g1), (n, g2)] {
            for v in g.vertices() {
                let mut nb: Vec<(bool, usize)> = g
                    .out_arcs(v)
                    .iter()
                    .map(|&a| (true, colors[offset + g.arc(a).1 .0]))
                    .chain(g.in_arcs(v).iter().map(|&a| (false, colors[offset + g.arc(a).0 .0])))
                    .collect();
                nb.sort_unstable();
                sigs.push((colors[offset + v.0], nb));
            }
        }
        let mut distinct: Vec<&(usize, Vec<(bool, usize)>)> = sigs.iter().collect();
        distinct.sort();
        distinct.dedup();
        let next: Vec<usize> =
            sigs.iter().map(|s| distinct.binary_search(&s).unwrap()).collect();
        let count = distinct.len();
        colors = next;
        if count == classes {
            break;
        }
        classes = count;
    }
    let c2 = colors.split_off(n);
    (colors, c2)
}

struct Matcher<'a> {
    n: usize,
    order: &'a [usize],
    c1: &'a [usize],
    c2: &'a [usize],
    m1: &'a [u16],
    m2: &'a [u16],
    map: Vec<usize>,
    used: Vec<bool>,
}

impl Matcher<'_> {
    fn search(&mut self, i: usize) -> bool {
        if i == self.order.len() {
            return true;
        }
        let v = self.order[i];
        let n = self.n;
        for w in 0..n {
            if self.used[w] || self.c1[v] != self.c2[w] {
                continue;
            }
            let consistent = self.order[..i].iter().all(|&u| {
                let fu = self.map[u];
                self.m1[u * n + v] == self.m2[fu * n + w] && self.m1[v * n + u] == self.m2[w * n + fu]
            });
            if !consistent {
                continue;
            }
            self.map[v] = w;
            self.used[w] = true;
            if self.search(i + 1) {
                return true;
            }
            self.used[w] = false;
        }
        self.map[v] = usize::MAX;
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path3() -> OrientedDigraph {
        OrientedDigraph::with_vertex_count(3, vec![(0, 1), (1, 2)]).unwrap()
    }

    #[test]
    fn sources_and_sinks() {
        let g = OrientedDigraph::with_vertex_count(2, vec![(0, 1)]).unwrap();
        assert_eq!(g.sources(), vec![VertexId(0)]);
        assert_eq!(g.sinks(), vec![VertexId(1)]);
        let e = OrientedDigraph::with_vertex_count(3, vec![]).unwrap();
        assert_eq!(e.sources().len(), 3);
        assert_eq!(e.sinks().len(), 3);
    }

    #[test]
    fn rejects_loops_and_opposites() {
        assert!(matches!(
            OrientedDigraph::with_vertex_count(2, vec![(0, 0)]),
            Err(GraphError::Loop { .. })
        ));
        assert!(matches!(
            OrientedDigraph::with_vertex_count(2, vec![(0, 1), (1, 0)]),
            Err(GraphError::OppositeArcs { .. })
        ));
        assert!(matches!(
            OrientedDigraph::with_vertex_count(2, vec![(0, 2)]),
            Err(GraphError::UnknownEndpoint { .. })
        ));
        // parallel arcs are fine
        assert!(OrientedDigraph::with_vertex_count(2, vec![(0, 1), (0, 1)]).is_ok());
    }

    #[test]
    fn line_digraph_small() {
        let single = OrientedDigraph::with_vertex_count(2, vec![(0, 1)]).unwrap();
        let ld = line_digraph(&single).unwrap();
        assert_eq!((ld.vertex_count(), ld.arc_count()), (1, 0));
        let ld = line_digraph(&path3()).unwrap();
        assert_eq!(ld.vertex_count(), 2);
        assert_eq!(ld.arcs(), &[(VertexId(0), VertexId(1))]);
        // parallel arcs become distinct vertices
        let multi = OrientedDigraph::with_vertex_count(3, vec![(0, 1), (0, 1), (1, 2)]).unwrap();
        let ld = line_digraph(&multi).unwrap();
        assert_eq!(ld.vertex_count(), 3);
        assert_eq!(ld.arc_count(), 2);
        assert_eq!(ld.names()[1], "v1->v2#2");
    }

    #[test]
    fn underlying_collapses_parallel_arcs() {
        let multi = OrientedDigraph::with_vertex_count(2, vec![(0, 1), (0, 1)]).unwrap();
        assert_eq!(underlying_graph(&multi).edges, vec![(VertexId(0), VertexId(1))]);
    }

    #[test]
    fn vertex_coloring_validation() {
        let arc = OrientedDigraph::with_vertex_count(2, vec![(0, 1)]).unwrap();
        assert_eq!(validate_vertex_coloring(&arc, &VertexColoring::new(vec![1, 2], 2)).unwrap(), None);
        let p = path3();
        assert_eq!(
            validate_vertex_coloring(&p, &VertexColoring::new(vec![1, 2, 1], 2)).unwrap(),
            Some(VertexViolation::OppositeDirections { first: ArcId(0), second: ArcId(1) })
        );
        assert_eq!(
            validate_vertex_coloring(&p, &VertexColoring::new(vec![1, 1, 2], 2)).unwrap(),
            Some(VertexViolation::MonochromaticArc(ArcId(0)))
        );
        assert!(matches!(
            validate_vertex_coloring(&p, &VertexColoring::new(vec![1, 2], 2)),
            Err(GraphError::PartialColoring { .. })
        ));
        assert!(matches!(
            validate_vertex_coloring(&p, &VertexColoring::new(vec![1, 2, 3], 2)),
            Err(GraphError::ColorOutOfRange { .. })
        ));
    }

    #[test]
    fn arc_coloring_validation() {
        let p = path3();
        assert_eq!(validate_arc_coloring(&p, &ArcColoring::new(vec![1, 2], 2)).unwrap(), None);
        assert_eq!(
            validate_arc_coloring(&p, &ArcColoring::new(vec![1, 1], 1)).unwrap(),
            Some(ArcViolation::ConsecutiveSameColor { first: ArcId(0), second: ArcId(1) })
        );
    }

    #[test]
    fn chromatic_numbers() {
        let arc = OrientedDigraph::with_vertex_count(2, vec![(0, 1)]).unwrap();
        assert_eq!(undirected_chromatic_number(&arc).unwrap(), 2);
        let tri = OrientedDigraph::with_vertex_count(3, vec![(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(undirected_chromatic_number(&tri).unwrap(), 3);
        let big = OrientedDigraph::with_vertex_count(21, vec![]).unwrap();
        assert!(matches!(undirected_chromatic_number(&big), Err(GraphError::SizeCap { .. })));
    }

    #[test]
    fn isomorphism_basics() {
        let p = path3();
        assert!(isomorphic(&p, &p).unwrap());
        assert!(isomorphic(&p, &p.permuted(&[2, 0, 1])).unwrap());
        let arc = OrientedDigraph::with_vertex_count(2, vec![(0, 1)]).unwrap();
        let dot = OrientedDigraph::with_vertex_count(1, vec![]).unwrap();
        assert!(!isomorphic(&arc, &dot).unwrap());
        // out-star vs in-star
        let out = OrientedDigraph::with_vertex_count(3, vec![(0, 1), (0, 2)]).unwrap();
        let inn = OrientedDigraph::with_vertex_count(3, vec![(1, 0), (2, 0)]).unwrap();
        assert!(!isomorphic(&out, &inn).unwrap());
        // multiplicity matters
        let m1 = OrientedDigraph::with_vertex_count(3, vec![(0, 1), (0, 1), (1, 2)]).unwrap();
        let m2 = OrientedDigraph::with_vertex_count(3, vec![(0, 1), (1, 2), (1, 2)]).unwrap();
        assert!(!isomorphic(&m1, &m2).unwrap());
    }

    #[test]
    fn json_and_dot() {
        let p = path3();
        let doc = p.to_json();
        assert_eq!(serde_json::to_string(&doc).unwrap(), r#"{"vertices":["v1","v2","v3"],"arcs":[["v1","v2"],["v2","v3"]]}"#);
        assert_eq!(OrientedDigraph::from_json(&doc).unwrap(), p);
        assert_eq!(p.to_dot(), "digraph G {\n  v1;\n  v2;\n  v3;\n  v1 -> v2;\n  v2 -> v3;\n}\n");
    }
}
