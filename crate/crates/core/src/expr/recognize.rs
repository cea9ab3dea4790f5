//! Recognition of edge series-parallel digraphs by series/parallel
//! reduction: parallel arcs are merged into a parallel node, and a vertex
//! with exactly one incoming and one outgoing arc is contracted into a
//! series node. The graph is esp iff a single arc remains.

use rustc_hash::FxHashMap;

use super::{ExprBuilder, Flavor, SpExpression};
use crate::digraph::OrientedDigraph;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Recognition {
    Esp(SpExpression),
    NotEsp,
}

impl Recognition {
    pub fn expression(&self) -> Option<&SpExpression> {
        match self {
            Recognition::Esp(x) => Some(x),
            Recognition::NotEsp => None,
        }
    }
}

struct Reducer {
    builder: ExprBuilder,
    /// out[u][w] = expression node of the (merged) arc u→w
    out: Vec<FxHashMap<usize, usize>>,
    inn: Vec<FxHashMap<usize, usize>>,
    arcs: usize,
}

impl Reducer {
    fn insert(&mut self, u: usize, w: usize, node: usize) {
        match self.out[u].get(&w).copied() {
            Some(existing) => {
                let merged = self.builder.parallel(existing, node);
                self.out[u].insert(w, merged);
                self.inn[w].insert(u, merged);
            }
            None => {
                self.out[u].insert(w, node);
                self.inn[w].insert(u, node);
                self.arcs += 1;
            }
        }
    }
}

pub fn recognize_esp(g: &OrientedDigraph) -> Recognition {
    let n = g.vertex_count();
    if g.arc_count() == 0 {
        return Recognition::NotEsp;
    }
    let mut r = Reducer {
        builder: ExprBuilder::new(Flavor::Esp),
        out: vec![FxHashMap::default(); n],
        inn: vec![FxHashMap::default(); n],
        arcs: 0,
    };
    for &(t, h) in g.arcs() {
        let leaf = r.builder.arc(g.name(t), g.name(h));
        r.insert(t.0, h.0, leaf);
    }
    let mut alive = n;
    let mut removed = vec![false; n];
    let mut work: Vec<usize> = (0..n).rev().collect();
    while let Some(v) = work.pop() {
        if removed[v] || r.inn[v].len() != 1 || r.out[v].len() != 1 {
            continue;
        }
        let (&u, &e_in) = r.inn[v].iter().next().unwrap();
        let (&w, &e_out) = r.out[v].iter().next().unwrap();
        if u == w {
            // u→v→u: a directed cycle
            return Recognition::NotEsp;
        }
        r.inn[v].clear();
        r.out[v].clear();
        r.out[u].remove(&v);
        r.inn[w].remove(&v);
        r.arcs -= 2;
        removed[v] = true;
        alive -= 1;
        let s = r.builder.series(e_in, e_out);
        r.insert(u, w, s);
        work.push(u);
        work.push(w);
    }
    if alive != 2 || r.arcs != 1 {
        return Recognition::NotEsp;
    }
    match r.builder.finish() {
        Ok(x) => Recognition::Esp(x),
        Err(_) => Recognition::NotEsp,
    }
}
