//! Color graphs on the labels 1..=7, packed into two words.
//!
//! `fwd` holds the arc (i,j) at bit `7(i-1) + (j-1)` and the label set in
//! bits 49..56; `rev` holds the transposed arc matrix. A graph is oriented
//! iff `fwd & rev` has no arc bits, which also rules out loops.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::OnceLock;

pub const MAX_COLORS: u8 = 7;
const ARC_BITS: u64 = (1 << 49) - 1;
const LABEL_SHIFT: u32 = 49;

#[inline]
const fn bit(i: u8, j: u8) -> u64 {
    1 << ((i - 1) as u32 * 7 + (j - 1) as u32)
}

#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ColorGraph {
    fwd: u64,
    rev: u64,
}

impl ColorGraph {
    pub const EMPTY: ColorGraph = ColorGraph { fwd: 0, rev: 0 };

    /// Bit `c-1` set for every label `c`.
    #[inline]
    pub fn label_mask(self) -> u8 {
        (self.fwd >> LABEL_SHIFT) as u8
    }

    #[inline]
    pub fn label_count(self) -> u32 {
        self.label_mask().count_ones()
    }

    pub fn labels(self) -> impl Iterator<Item = u8> {
        let m = self.label_mask();
        (1..=MAX_COLORS).filter(move |&c| m & (1 << (c - 1)) != 0)
    }

    #[inline]
    pub fn has_label(self, c: u8) -> bool {
        self.label_mask() & (1 << (c - 1)) != 0
    }

    #[inline]
    pub fn with_label(self, c: u8) -> Self {
        ColorGraph { fwd: self.fwd | (1u64 << (LABEL_SHIFT + c as u32 - 1)), rev: self.rev }
    }

    /// Adds the arc (i,j) and both labels; (i,i) records a loop.
    #[inline]
    pub fn with_arc(self, i: u8, j: u8) -> Self {
        debug_assert!((1..=MAX_COLORS).contains(&i) && (1..=MAX_COLORS).contains(&j));
        ColorGraph { fwd: self.fwd | bit(i, j), rev: self.rev | bit(j, i) }
            .with_label(i)
            .with_label(j)
    }

    #[inline]
    pub fn has_arc(self, i: u8, j: u8) -> bool {
        self.fwd & bit(i, j) != 0
    }

    pub fn arcs(self) -> impl Iterator<Item = (u8, u8)> {
        (1..=MAX_COLORS)
            .flat_map(|i| (1..=MAX_COLORS).map(move |j| (i, j)))
            .filter(move |&(i, j)| self.has_arc(i, j))
    }

    #[inline]
    pub fn arc_count(self) -> u32 {
        (self.fwd & ARC_BITS).count_ones()
    }

    /// H₁ + H₂: union of labels and arcs.
    #[inline]
    pub fn union(self, other: Self) -> Self {
        ColorGraph { fwd: self.fwd | other.fwd, rev: self.rev | other.rev }
    }

    /// No loop and no pair of opposite arcs.
    #[inline]
    pub fn is_oriented(self) -> bool {
        self.fwd & self.rev & ARC_BITS == 0
    }

    #[inline]
    pub fn has_loop(self) -> bool {
        const DIAG: u64 = {
            let mut d = 0;
            let mut i = 1;
            while i <= MAX_COLORS {
                d |= bit(i, i);
                i += 1;
            }
            d
        };
        self.fwd & DIAG != 0
    }

    /// Labels and arcs of `self` are contained in those of `other`.
    #[inline]
    pub fn is_subgraph_of(self, other: Self) -> bool {
        self.fwd & !other.fwd == 0
    }

    pub fn is_tournament(self) -> bool {
        let labels: Vec<u8> = self.labels().collect();
        self.is_oriented()
            && labels.iter().all(|&i| {
                labels.iter().all(|&j| i == j || self.has_arc(i, j) || self.has_arc(j, i))
            })
    }

    pub fn out_neighbors(self, i: u8) -> Vec<u8> {
        (1..=MAX_COLORS).filter(|&j| self.has_arc(i, j)).collect()
    }

    pub fn in_neighbors(self, j: u8) -> Vec<u8> {
        (1..=MAX_COLORS).filter(|&i| self.has_arc(i, j)).collect()
    }

    /// Arcs R×{k}: every color of `set` (bit c-1 for color c) points to k.
    pub fn fan_in(set: u8, k: u8) -> Self {
        let mut g = ColorGraph::EMPTY.with_label(k);
        for c in 1..=MAX_COLORS {
            if set & (1 << (c - 1)) != 0 {
                g = g.with_arc(c, k);
            }
        }
        g
    }

    /// Arcs {k}×L.
    pub fn fan_out(k: u8, set: u8) -> Self {
        let mut g = ColorGraph::EMPTY.with_label(k);
        for c in 1..=MAX_COLORS {
            if set & (1 << (c - 1)) != 0 {
                g = g.with_arc(k, c);
            }
        }
        g
    }

    pub fn to_dot(self) -> String {
        let mut s = String::from("digraph H {\n");
        for c in self.labels() {
            s.push_str(&format!("  c{c};\n"));
        }
        for (i, j) in self.arcs() {
            s.push_str(&format!("  c{i} -> c{j};\n"));
        }
        s.push_str("}\n");
        s
    }
}

impl fmt::Debug for ColorGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let labels: Vec<u8> = self.labels().collect();
        let arcs: Vec<(u8, u8)> = self.arcs().collect();
        write!(f, "H({labels:?}, {arcs:?})")
    }
}

/// One representative of every isomorphism class of tournaments on the
/// colors 1..=k, k ≤ 7 (1, 1, 1, 2, 4, 12, 56, 456 classes).
pub fn tournaments(k: u8) -> &'static [ColorGraph] {
    static CLASSES: OnceLock<Vec<Vec<ColorGraph>>> = OnceLock::new();
    let all = CLASSES.get_or_init(|| {
        let mut all = vec![vec![ColorGraph::EMPTY]];
        for k in 1..=MAX_COLORS {
            let mut by_code = BTreeMap::new();
            for &t in &all[k as usize - 1] {
                for mask in 0..1u32 << (k - 1) {
                    let mut g = t.with_label(k);
                    for i in 1..k {
                        g = if mask & (1 << (i - 1)) != 0 { g.with_arc(i, k) } else { g.with_arc(k, i) };
                    }
                    by_code.entry(canonical_code(g, k)).or_insert(g);
                }
            }
            all.push(by_code.into_values().collect());
        }
        all
    });
    &all[k as usize]
}

/// Smallest arc code over relabelings that list vertices by ascending
/// out-degree; equal for isomorphic tournaments.
fn canonical_code(t: ColorGraph, k: u8) -> u32 {
    let score: Vec<usize> = (1..=k).map(|i| t.out_neighbors(i).len()).collect();
    fn go(t: ColorGraph, k: u8, score: &[usize], perm: &mut Vec<u8>, used: u8, best: &mut u32) {
        if perm.len() == k as usize {
            let mut code = 0u32;
            let mut bit = 0;
            for i in 0..perm.len() {
                for j in i + 1..perm.len() {
                    if t.has_arc(perm[i], perm[j]) {
                        code |= 1 << bit;
                    }
                    bit += 1;
                }
            }
            *best = (*best).min(code);
            return;
        }
        let floor = perm.last().map_or(0, |&v| score[v as usize - 1]);
        for v in 1..=k {
            if used & (1 << v) == 0 && score[v as usize - 1] >= floor {
                perm.push(v);
                go(t, k, score, perm, used | (1 << v), best);
                perm.pop();
            }
        }
    }
    let mut best = u32::MAX;
    go(t, k, &score, &mut Vec::new(), 0, &mut best);
    best
}
