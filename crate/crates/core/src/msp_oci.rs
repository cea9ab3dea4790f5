//! Oriented chromatic index of minimal series-parallel digraphs.
//!
//! Every expression node gets the set F of triples (H, 𝓛, 𝓡): H is the color
//! graph of an arc coloring of the subgraph, 𝓛 holds the outgoing color sets
//! of its sources and 𝓡 the incoming color sets of its sinks. A series
//! composition picks one new color u for every pair (R, L) ∈ 𝓡₁ × 𝓛₂; all
//! arcs from a sink with incoming colors R to a source with outgoing colors
//! L get that color. χ'_o is the fewest labels of any oriented H at the root.
//!
//! By default the search runs once per candidate target: χ'_o ≤ k iff the
//! coloring's color graph fits inside some tournament on k colors, so the
//! same rules are applied with every new arc checked against one fixed
//! tournament from each isomorphism class, k = 1, 2, ... Then H carries no
//! information and a state is just (𝓛, 𝓡), with each color set replaced by
//! the colors a later arc next to it may still take. The unrestricted rules
//! remain available through [`OciMode`].

use std::hash::BuildHasherDefault;

use indexmap::IndexMap;
use rustc_hash::FxHasher;

use crate::colorgraph::{tournaments, ColorGraph, MAX_COLORS};
use crate::digraph::{compact_colors, ArcColoring};
use crate::error::ExprError;
use crate::expr::{evaluate, Flavor, Node, SpExpression};
use crate::DpOptions;

type FxIndexMap<K, V> = IndexMap<K, V, BuildHasherDefault<FxHasher>>;

/// A set of color sets: bit `m` is set when the color set with mask `m`
/// (bit c-1 for color c) is a member. Bit 0 is the empty set.
pub type ColorSetFamily = u128;

/// Members of a family as color-set masks, ascending.
pub fn family_members(f: ColorSetFamily) -> impl Iterator<Item = u8> {
    (0..128u8).filter(move |&m| f & (1u128 << m) != 0)
}

#[inline]
fn singleton(mask: u8) -> ColorSetFamily {
    1u128 << mask
}

/// One DP state: color graph, source out-color sets, sink in-color sets.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct OciTriple {
    pub h: ColorGraph,
    pub big_l: ColorSetFamily,
    pub big_r: ColorSetFamily,
}

/// When states with a loop or an opposite arc pair are discarded.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum OrientFilter {
    /// As soon as they appear. Arcs are never removed, so this is safe.
    #[default]
    Early,
    /// Only when taking the final minimum.
    Final,
}

/// How [`chi_o_index_msp_with`] searches.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum OciMode {
    /// One run per tournament class on k = 1, 2, ... colors.
    #[default]
    Tournaments,
    /// A single run over all color graphs on 1..=7.
    ColorGraphs(OrientFilter),
}

/// Deduplicated states with, per state, the generating child states and
/// (series only) the colors chosen for the pairs of 𝓡₁ × 𝓛₂ in
/// lexicographic order.
#[derive(Clone, Debug, Default)]
pub struct OciStateSet {
    states: Vec<OciTriple>,
    back: Vec<(u32, u32)>,
    assignments: Vec<Box<[u8]>>,
}

type Record = ((u32, u32), Box<[u8]>);

impl OciStateSet {
    fn from_map(map: FxIndexMap<OciTriple, Record>) -> Self {
        let mut set = OciStateSet::default();
        for (s, (b, a)) in map {
            set.states.push(s);
            set.back.push(b);
            set.assignments.push(a);
        }
        set
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn states(&self) -> &[OciTriple] {
        &self.states
    }

    pub fn back(&self, k: usize) -> (usize, usize) {
        let (a, b) = self.back[k];
        (a as usize, b as usize)
    }

    pub fn assignment(&self, k: usize) -> &[u8] {
        &self.assignments[k]
    }

    pub fn contains(&self, t: &OciTriple) -> bool {
        self.states.contains(t)
    }

    /// Fewest labels over oriented states, with the first state attaining it.
    pub fn best(&self) -> Option<(u32, usize)> {
        self.states
            .iter()
            .enumerate()
            .filter(|(_, s)| s.h.is_oriented())
            .map(|(k, s)| (s.h.label_count(), k))
            .min()
    }

    /// Keeps only minimal triples: a triple is dropped when another one has
    /// a subgraph H and subfamilies 𝓛 and 𝓡 of its own. Both combine rules
    /// and the final minimum are monotone in all three, so no value is lost.
    pub fn prune_dominated(&mut self) {
        let mut order: Vec<usize> = (0..self.states.len()).collect();
        let weight = |t: &OciTriple| t.h.label_count() + t.h.arc_count() + t.big_l.count_ones() + t.big_r.count_ones();
        order.sort_by_key(|&k| (weight(&self.states[k]), k));
        let mut kept: Vec<OciTriple> = Vec::new();
        let mut keep = vec![false; self.states.len()];
        for k in order {
            let t = self.states[k];
            let dominated = kept.iter().any(|d| {
                d.h.is_subgraph_of(t.h) && d.big_l & !t.big_l == 0 && d.big_r & !t.big_r == 0
            });
            if !dominated {
                kept.push(t);
                keep[k] = true;
            }
        }
        let mut out = OciStateSet::default();
        for (k, keep) in keep.into_iter().enumerate() {
            if keep {
                out.states.push(self.states[k]);
                out.back.push(self.back[k]);
                out.assignments.push(std::mem::take(&mut self.assignments[k]));
            }
        }
        *self = out;
    }
}

/// F of a single vertex: ((∅,∅), {∅}, {∅}).
pub fn oci_leaf() -> OciStateSet {
    let mut map = FxIndexMap::default();
    map.insert(OciTriple { h: ColorGraph::EMPTY, big_l: singleton(0), big_r: singleton(0) }, ((0, 0), Box::default()));
    OciStateSet::from_map(map)
}

/// Disjoint union: union of all three components.
pub fn oci_parallel(f1: &OciStateSet, f2: &OciStateSet, filter: OrientFilter) -> OciStateSet {
    let mut map = FxIndexMap::default();
    for (i, a) in f1.states.iter().enumerate() {
        for (j, b) in f2.states.iter().enumerate() {
            let h = a.h.union(b.h);
            if filter == OrientFilter::Early && !h.is_oriented() {
                continue;
            }
            let t = OciTriple { h, big_l: a.big_l | b.big_l, big_r: a.big_r | b.big_r };
            map.entry(t).or_insert(((i as u32, j as u32), Box::default()));
        }
    }
    OciStateSet::from_map(map)
}

/// Series composition. Assignments are built one pair of 𝓡₁ × 𝓛₂ at a
/// time; partial assignments that agree on H and on the colors collected
/// for U₁,∅ and U₂,∅ are merged, keeping the first.
pub fn oci_series(f1: &OciStateSet, f2: &OciStateSet, filter: OrientFilter, keep_assignments: bool) -> OciStateSet {
    let early = filter == OrientFilter::Early;
    let mut map: FxIndexMap<OciTriple, Record> = FxIndexMap::default();
    for (i, a) in f1.states.iter().enumerate() {
        let rs: Vec<u8> = family_members(a.big_r).collect();
        let track1 = a.big_l & 1 != 0;
        for (j, b) in f2.states.iter().enumerate() {
            let base = a.h.union(b.h);
            if early && !base.is_oriented() {
                continue;
            }
            let ls: Vec<u8> = family_members(b.big_l).collect();
            let track2 = b.big_r & 1 != 0;
            // (H, U₁,∅, U₂,∅) -> colors chosen so far
            let mut frontier: FxIndexMap<(ColorGraph, u8, u8), Vec<u8>> = FxIndexMap::default();
            frontier.insert((base, 0, 0), Vec::new());
            for &r in &rs {
                for &l in &ls {
                    let mut next: FxIndexMap<(ColorGraph, u8, u8), Vec<u8>> = FxIndexMap::default();
                    for ((h, u1, u2), chosen) in &frontier {
                        for u in 1..=MAX_COLORS {
                            let h = h.union(ColorGraph::fan_in(r, u)).union(ColorGraph::fan_out(u, l));
                            if early && !h.is_oriented() {
                                continue;
                            }
                            let bit = 1u8 << (u - 1);
                            let u1 = if r == 0 && track1 { u1 | bit } else { *u1 };
                            let u2 = if l == 0 && track2 { u2 | bit } else { *u2 };
                            next.entry((h, u1, u2)).or_insert_with(|| {
                                if keep_assignments {
                                    let mut c = chosen.clone();
                                    c.push(u);
                                    c
                                } else {
                                    Vec::new()
                                }
                            });
                        }
                    }
                    frontier = next;
                }
            }
            for ((h, u1, u2), chosen) in frontier {
                let big_l = if track1 { (a.big_l & !1) | singleton(u1) } else { a.big_l };
                let big_r = if track2 { (b.big_r & !1) | singleton(u2) } else { b.big_r };
                map.entry(OciTriple { h, big_l, big_r })
                    .or_insert_with(|| ((i as u32, j as u32), chosen.into_boxed_slice()));
            }
        }
    }
    OciStateSet::from_map(map)
}

#[derive(Clone, Debug)]
pub struct OciSolution {
    /// χ'_o of the evaluated digraph.
    pub value: u32,
    /// Arc coloring with colors 1..=value, indexed like the evaluation's arcs.
    pub witness: Option<ArcColoring>,
    /// Color graph of the optimal root state, on the DP's own labels; with
    /// [`OciMode::Tournaments`], the target tournament.
    pub color_graph: ColorGraph,
    /// Largest state set seen at any node.
    pub max_states: usize,
}

/// All state sets, indexed by node.
pub fn oci_tables(
    x: &SpExpression,
    prune: bool,
    filter: OrientFilter,
    keep_assignments: bool,
) -> Result<Vec<OciStateSet>, ExprError> {
    if x.flavor() != Flavor::Msp {
        return Err(ExprError::FlavorMismatch("arc", "msp"));
    }
    let mut sets: Vec<OciStateSet> = Vec::with_capacity(x.nodes().len());
    for node in x.nodes() {
        let mut f = match *node {
            Node::Vertex(_) => oci_leaf(),
            Node::Parallel(l, r) => oci_parallel(&sets[l], &sets[r], filter),
            Node::Series(l, r) => oci_series(&sets[l], &sets[r], filter, keep_assignments),
            Node::Arc { .. } => unreachable!(),
        };
        if prune {
            f.prune_dominated();
        }
        sets.push(f);
    }
    Ok(sets)
}

/// χ'_o of the digraph defined by an `msp` expression. An arcless graph
/// has index 0.
pub fn chi_o_index_msp(x: &SpExpression, opts: DpOptions) -> Result<OciSolution, ExprError> {
    chi_o_index_msp_with(x, opts, OciMode::Tournaments)
}

pub fn chi_o_index_msp_with(x: &SpExpression, opts: DpOptions, mode: OciMode) -> Result<OciSolution, ExprError> {
    if x.flavor() != Flavor::Msp {
        return Err(ExprError::FlavorMismatch("arc", "msp"));
    }
    let OciMode::ColorGraphs(filter) = mode else {
        return tournament_search(x, opts);
    };
    let (sets, max_states) = run_dp(
        x,
        opts,
        &oci_leaf(),
        |f| {
            if opts.prune {
                f.prune_dominated()
            }
        },
        |a, b| oci_parallel(a, b, filter),
        |a, b| oci_series(a, b, filter, opts.witness),
    );
    let root = sets.last().unwrap().as_ref().unwrap();
    let (value, best) = root.best().expect("an msp-digraph has an oriented 7-arc-coloring");
    let color_graph = root.states[best].h;
    let witness = if opts.witness {
        let sets: Vec<OciStateSet> = sets.into_iter().map(Option::unwrap).collect();
        let exact = |members: &[u8], set: u8| members.binary_search(&set).expect("color set is a member");
        let w = extract_witness(x, &sets, best, exact, exact)?;
        debug_assert_eq!(w.count, value);
        Some(w)
    } else {
        None
    };
    Ok(OciSolution { value, witness, color_graph, max_states })
}

/// One bottom-up pass with the given combine steps. Without a witness,
/// child sets are freed as soon as their parent is built. The pass stops
/// early, leaving an empty root, once any set is empty.
fn run_dp(
    x: &SpExpression,
    opts: DpOptions,
    leaf: &OciStateSet,
    prune: impl Fn(&mut OciStateSet),
    parallel: impl Fn(&OciStateSet, &OciStateSet) -> OciStateSet,
    series: impl Fn(&OciStateSet, &OciStateSet) -> OciStateSet,
) -> (Vec<Option<OciStateSet>>, usize) {
    let mut sets: Vec<Option<OciStateSet>> = Vec::with_capacity(x.nodes().len());
    let mut max_states = 0;
    for node in x.nodes() {
        let mut f = match *node {
            Node::Vertex(_) => leaf.clone(),
            Node::Parallel(l, r) | Node::Series(l, r) => {
                let (a, b) = (sets[l].as_ref().unwrap(), sets[r].as_ref().unwrap());
                let f = if matches!(node, Node::Parallel(..)) { parallel(a, b) } else { series(a, b) };
                if !opts.witness {
                    sets[l] = None;
                    sets[r] = None;
                }
                f
            }
            Node::Arc { .. } => unreachable!(),
        };
        prune(&mut f);
        max_states = max_states.max(f.len());
        let empty = f.is_empty();
        sets.push(Some(f));
        if empty {
            sets.resize_with(x.nodes().len(), || Some(OciStateSet::default()));
            break;
        }
    }
    (sets, max_states)
}

/// Arc constraints of one fixed target: `after[m]` are the colors every
/// color of m points to, `before[m]` the colors pointing to every color of
/// m. Both are all k colors (`full`) exactly for the empty set.
struct Target {
    full: u8,
    after: [u8; 128],
    before: [u8; 128],
}

impl Target {
    fn new(t: ColorGraph, k: u8) -> Self {
        let full = ((1u16 << k) - 1) as u8;
        let mask = |cs: Vec<u8>| cs.iter().fold(0u8, |a, &x| a | 1 << (x - 1));
        let out: Vec<u8> = (1..=MAX_COLORS).map(|c| if c <= k { mask(t.out_neighbors(c)) } else { 0 }).collect();
        let inn: Vec<u8> = (1..=MAX_COLORS).map(|c| if c <= k { mask(t.in_neighbors(c)) } else { 0 }).collect();
        let mut after = [full; 128];
        let mut before = [full; 128];
        for m in 1..128usize {
            for c in 0..MAX_COLORS as usize {
                if m & (1 << c) != 0 {
                    after[m] &= out[c];
                    before[m] &= inn[c];
                }
            }
        }
        Target { full, after, before }
    }

    /// Leaf state: one isolated vertex.
    fn leaf(&self) -> OciStateSet {
        let mut map = FxIndexMap::default();
        let t = OciTriple { h: ColorGraph::EMPTY, big_l: singleton(self.full), big_r: singleton(self.full) };
        map.insert(t, ((0, 0), Box::default()));
        OciStateSet::from_map(map)
    }
}

// With a fixed target, a sink's incoming color set R only matters through
// after[R], the colors a new arc leaving it may take, and a source's
// outgoing set L only through before[L]. So in this mode 𝓡 is stored as the
// family of after-masks and 𝓛 as the family of before-masks; the full mask
// stands for the empty set, i.e. an isolated vertex.

/// Every mask containing some member.
fn up_closure(f: ColorSetFamily) -> ColorSetFamily {
    let mut out = 0;
    for m in 0..128u8 {
        if family_members(f).any(|b| b & !m == 0) {
            out |= singleton(m);
        }
    }
    out
}

/// Keeps the full mask and the minimal other members. A member containing
/// another one adds no constraint: the color chosen for the smaller mask is
/// admissible for it too.
fn minimal_members(f: ColorSetFamily, full: u8) -> ColorSetFamily {
    let members: Vec<u8> = family_members(f).filter(|&m| m != full).collect();
    let mut out = f & singleton(full);
    for &m in &members {
        if !members.iter().any(|&n| n != m && n & !m == 0) {
            out |= singleton(m);
        }
    }
    out
}

/// Shrinks every family to its minimal masks and, with `dominance`, drops
/// states that are more constraining than a kept one. State A is at most as constraining as B when
/// both have an isolated vertex or neither has, and every mask of A
/// contains a mask of B; any extension of B can then be copied pair by
/// pair onto A.
fn prune_covered(f: &mut OciStateSet, full: u8, dominance: bool) {
    let iso = singleton(full);
    let mut seen = FxIndexMap::default();
    for (k, t) in f.states.iter_mut().enumerate() {
        t.big_l = minimal_members(t.big_l, full);
        t.big_r = minimal_members(t.big_r, full);
        seen.entry(*t).or_insert(k);
    }
    let ups: Vec<(ColorSetFamily, ColorSetFamily)> =
        f.states.iter().map(|t| (up_closure(t.big_l & !iso), up_closure(t.big_r & !iso))).collect();
    let mut order: Vec<usize> = seen.into_values().collect();
    order.sort_by_key(|&k| (ups[k].0.count_ones() + ups[k].1.count_ones(), k));
    let mut kept: [Vec<(ColorSetFamily, ColorSetFamily)>; 2] = Default::default();
    let mut keep = vec![false; f.states.len()];
    for k in order {
        let t = f.states[k];
        let bucket = &mut kept[(t.big_l & iso != 0) as usize];
        let (ul, ur) = ups[k];
        if !dominance || !bucket.iter().any(|&(dl, dr)| dl & !ul == 0 && dr & !ur == 0) {
            bucket.push((t.big_l & !iso, t.big_r & !iso));
            keep[k] = true;
        }
    }
    let mut out = OciStateSet::default();
    for (k, keep) in keep.into_iter().enumerate() {
        if keep {
            out.states.push(f.states[k]);
            out.back.push(f.back[k]);
            out.assignments.push(std::mem::take(&mut f.assignments[k]));
        }
    }
    *f = out;
}

fn target_parallel(f1: &OciStateSet, f2: &OciStateSet) -> OciStateSet {
    let mut map = FxIndexMap::default();
    for (i, a) in f1.states.iter().enumerate() {
        for (j, b) in f2.states.iter().enumerate() {
            let t = OciTriple { h: ColorGraph::EMPTY, big_l: a.big_l | b.big_l, big_r: a.big_r | b.big_r };
            map.entry(t).or_insert(((i as u32, j as u32), Box::default()));
        }
    }
    OciStateSet::from_map(map)
}

/// Series composition against a fixed target. Only pairs touching an
/// isolated vertex change the result; every other pair takes its smallest
/// admissible color. With `minimal`, partial choices that are more
/// constraining than another one in both tracked masks are dropped.
fn target_series(f1: &OciStateSet, f2: &OciStateSet, target: &Target, keep_assignments: bool, minimal: bool) -> OciStateSet {
    let full = target.full;
    let iso = singleton(full);
    let mut map: FxIndexMap<OciTriple, Record> = FxIndexMap::default();
    for (i, a) in f1.states.iter().enumerate() {
        let rs: Vec<u8> = family_members(a.big_r).collect();
        let track1 = a.big_l & iso != 0;
        'pairs: for (j, b) in f2.states.iter().enumerate() {
            let ls: Vec<u8> = family_members(b.big_l).collect();
            let track2 = b.big_r & iso != 0;
            let mut fixed = vec![0u8; rs.len() * ls.len()];
            let mut tracked = Vec::new();
            for (ri, &r) in rs.iter().enumerate() {
                for (li, &l) in ls.iter().enumerate() {
                    let allowed = r & l;
                    if allowed == 0 {
                        continue 'pairs;
                    }
                    if r == full || l == full {
                        tracked.push(ri * ls.len() + li);
                    } else {
                        fixed[ri * ls.len() + li] = allowed.trailing_zeros() as u8 + 1;
                    }
                }
            }
            // (before[U₁,∅], after[U₂,∅]) -> colors chosen for tracked pairs
            let mut frontier: FxIndexMap<(u8, u8), Vec<u8>> = FxIndexMap::default();
            frontier.insert((full, full), Vec::new());
            for &p in &tracked {
                let (r, l) = (rs[p / ls.len()], ls[p % ls.len()]);
                let mut next: FxIndexMap<(u8, u8), Vec<u8>> = FxIndexMap::default();
                for (&(b1, a2), chosen) in &frontier {
                    let mut allowed = r & l;
                    while allowed != 0 {
                        let bit = allowed & allowed.wrapping_neg();
                        allowed ^= bit;
                        let b1 = if r == full { b1 & target.before[bit as usize] } else { b1 };
                        let a2 = if l == full { a2 & target.after[bit as usize] } else { a2 };
                        next.entry((b1, a2)).or_insert_with(|| {
                            if keep_assignments {
                                let mut c = chosen.clone();
                                c.push(bit.trailing_zeros() as u8 + 1);
                                c
                            } else {
                                Vec::new()
                            }
                        });
                    }
                }
                if minimal {
                    let keys: Vec<(u8, u8)> = next.keys().copied().collect();
                    next.retain(|&(b1, a2), _| {
                        !keys.iter().any(|&(c1, c2)| (c1, c2) != (b1, a2) && c1 & b1 == b1 && c2 & a2 == a2)
                    });
                }
                frontier = next;
            }
            for ((b1, a2), chosen) in frontier {
                let big_l = if track1 { (a.big_l & !iso) | singleton(b1) } else { a.big_l };
                let big_r = if track2 { (b.big_r & !iso) | singleton(a2) } else { b.big_r };
                map.entry(OciTriple { h: ColorGraph::EMPTY, big_l, big_r }).or_insert_with(|| {
                    let assignment = if keep_assignments {
                        let mut full_choice = fixed.clone();
                        for (&p, &u) in tracked.iter().zip(&chosen) {
                            full_choice[p] = u;
                        }
                        full_choice.into_boxed_slice()
                    } else {
                        Box::default()
                    };
                    ((i as u32, j as u32), assignment)
                });
            }
        }
    }
    OciStateSet::from_map(map)
}

/// Tries every tournament class on k = 1, 2, ... colors and stops at the
/// first target some coloring maps into.
fn tournament_search(x: &SpExpression, opts: DpOptions) -> Result<OciSolution, ExprError> {
    if !x.nodes().iter().any(|n| matches!(n, Node::Series(..))) {
        let witness = if opts.witness {
            let arcs = evaluate(x)?.graph.arc_count();
            Some(ArcColoring::new(vec![0; arcs], 0))
        } else {
            None
        };
        return Ok(OciSolution { value: 0, witness, color_graph: ColorGraph::EMPTY, max_states: 1 });
    }
    let mut max_states = 0;
    for k in 1..=MAX_COLORS {
        for &t in tournaments(k) {
            let target = Target::new(t, k);
            let (sets, states) = run_dp(
                x,
                opts,
                &target.leaf(),
                |f| prune_covered(f, target.full, opts.prune),
                target_parallel,
                |a, b| target_series(a, b, &target, opts.witness, opts.prune),
            );
            max_states = max_states.max(states);
            if sets.last().unwrap().as_ref().unwrap().is_empty() {
                continue;
            }
            let witness = if opts.witness {
                let sets: Vec<OciStateSet> = sets.into_iter().map(Option::unwrap).collect();
                let w = extract_witness(
                    x,
                    &sets,
                    0,
                    |m, set| covering_member(m, target.after[set as usize]),
                    |m, set| covering_member(m, target.before[set as usize]),
                )?;
                debug_assert_eq!(w.count, k as u32);
                Some(w)
            } else {
                None
            };
            return Ok(OciSolution { value: k as u32, witness, color_graph: t, max_states });
        }
    }
    unreachable!("every msp-digraph has an oriented 7-arc-coloring")
}

/// The member equal to `mask`, else the first one inside it.
fn covering_member(members: &[u8], mask: u8) -> usize {
    members
        .iter()
        .position(|&m| m == mask)
        .or_else(|| members.iter().position(|&m| m & !mask == 0))
        .expect("the chosen state covers every color set")
}

/// Picks one state per node top-down, then colors the arcs of each series
/// node bottom-up: the arc a→b gets the color chosen for the pair of a's
/// incoming color set and b's outgoing color set, located among the
/// members of the chosen child states by `locate_r` and `locate_l`.
fn extract_witness(
    x: &SpExpression,
    sets: &[OciStateSet],
    best: usize,
    locate_r: impl Fn(&[u8], u8) -> usize,
    locate_l: impl Fn(&[u8], u8) -> usize,
) -> Result<ArcColoring, ExprError> {
    let nodes = x.nodes();
    let eval = evaluate(x)?;
    let g = &eval.graph;
    let mut chosen = vec![usize::MAX; nodes.len()];
    chosen[x.root()] = best;
    for i in (0..nodes.len()).rev() {
        if let Node::Parallel(l, r) | Node::Series(l, r) = nodes[i] {
            let (a, b) = sets[i].back(chosen[i]);
            chosen[l] = a;
            chosen[r] = b;
        }
    }
    let mut in_colors = vec![0u8; g.vertex_count()];
    let mut out_colors = vec![0u8; g.vertex_count()];
    let mut colors = vec![0u32; g.arc_count()];
    for (i, node) in nodes.iter().enumerate() {
        let Node::Series(l, r) = *node else { continue };
        let rs: Vec<u8> = family_members(sets[l].states[chosen[l]].big_r).collect();
        let ls: Vec<u8> = family_members(sets[r].states[chosen[r]].big_l).collect();
        let assignment = sets[i].assignment(chosen[i]);
        let range = eval.series_arcs[i].clone();
        let pairs: Vec<(u8, u8)> = range
            .clone()
            .map(|a| {
                let (t, h) = g.arc(crate::digraph::ArcId(a));
                (in_colors[t.0], out_colors[h.0])
            })
            .collect();
        for (a, (rset, lset)) in range.zip(pairs) {
            let u = assignment[locate_r(&rs, rset) * ls.len() + locate_l(&ls, lset)];
            let (t, h) = g.arc(crate::digraph::ArcId(a));
            colors[a] = u as u32;
            out_colors[t.0] |= 1 << (u - 1);
            in_colors[h.0] |= 1 << (u - 1);
        }
    }
    let count = compact_colors(&mut colors);
    Ok(ArcColoring::new(colors, count))
}
