//! Brute-force ground truth for small instances, and encodings of the two
//! decision problems for external solvers.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::digraph::{
    compact_colors, connected_order, line_digraph, undirected_chromatic_number, underlying_graph,
    ArcColoring, OrientedDigraph, VertexColoring, CHROMATIC_CAP,
};
use crate::error::{EncodingError, GraphError};

/// Largest graph [`chi_o_exact`] accepts.
pub const ORACLE_CAP: usize = 30;
/// Most variables [`check_cnf_small`] will enumerate.
pub const CNF_VARIABLE_CAP: usize = 64;

struct Search<'a> {
    order: &'a [usize],
    /// per position: earlier neighbors as (vertex, arc leaves the current vertex)
    back: &'a [Vec<(usize, bool)>],
    r: usize,
    colors: Vec<usize>,
    /// dir[a * r + b] = number of placed arcs from class a to class b
    dir: Vec<u32>,
}

impl Search<'_> {
    fn run(&mut self, i: usize, max_used: usize) -> bool {
        if i == self.order.len() {
            return true;
        }
        let v = self.order[i];
        let r = self.r;
        for c in 0..(max_used + 1).min(r) {
            let mut placed = 0;
            let mut ok = true;
            for &(w, outgoing) in &self.back[i] {
                let d = self.colors[w];
                let (a, b) = if outgoing { (c, d) } else { (d, c) };
                if c == d || self.dir[b * r + a] > 0 {
                    ok = false;
                    break;
                }
                self.dir[a * r + b] += 1;
                placed += 1;
            }
            if ok {
                self.colors[v] = c;
                if self.run(i + 1, max_used.max(c + 1)) {
                    return true;
                }
            }
            for &(w, outgoing) in &self.back[i][..placed] {
                let d = self.colors[w];
                let (a, b) = if outgoing { (c, d) } else { (d, c) };
                self.dir[a * r + b] -= 1;
            }
        }
        false
    }
}

/// Exact χ_o with a witness, by backtracking over color assignments with an
/// incremental class-direction matrix. Colors are introduced in order
/// (a vertex may only open the next unused color), which removes color
/// permutations from the search.
pub fn chi_o_exact(g: &OrientedDigraph) -> Result<(u32, VertexColoring), GraphError> {
    let n = g.vertex_count();
    if n > ORACLE_CAP {
        return Err(GraphError::SizeCap { limit: ORACLE_CAP, actual: n });
    }
    if n == 0 {
        return Ok((0, VertexColoring::new(Vec::new(), 0)));
    }
    let un = underlying_graph(g);
    let order = connected_order(&un.neighbors());
    let mut pos = vec![0; n];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    let back: Vec<Vec<(usize, bool)>> = order
        .iter()
        .map(|&v| {
            let vid = crate::digraph::VertexId(v);
            g.out_arcs(vid)
                .iter()
                .map(|&a| (g.arc(a).1 .0, true))
                .chain(g.in_arcs(vid).iter().map(|&a| (g.arc(a).0 .0, false)))
                .filter(|&(w, _)| pos[w] < pos[v])
                .collect()
        })
        .collect();
    let lower = if n <= CHROMATIC_CAP {
        undirected_chromatic_number(g)? as usize
    } else if g.arc_count() > 0 {
        2
    } else {
        1
    };
    for r in lower.max(1)..=n {
        let mut s = Search { order: &order, back: &back, r, colors: vec![0; n], dir: vec![0; r * r] };
        if s.run(0, 0) {
            let mut colors: Vec<u32> = s.colors.iter().map(|&c| c as u32 + 1).collect();
            let count = compact_colors(&mut colors);
            return Ok((count, VertexColoring::new(colors, count)));
        }
    }
    unreachable!("n distinct colors always work")
}

/// Exact χ'_o as χ_o of the line digraph, pulled back to an arc coloring.
/// An arcless graph has index 0.
pub fn chi_o_index_exact(g: &OrientedDigraph) -> Result<(u32, ArcColoring), GraphError> {
    if g.arc_count() > ORACLE_CAP {
        return Err(GraphError::SizeCap { limit: ORACLE_CAP, actual: g.arc_count() });
    }
    let ld = line_digraph(g)?;
    let (value, c) = chi_o_exact(&ld)?;
    Ok((value, ArcColoring::new(c.colors, c.count)))
}

/// A CNF formula over variables `1..=num_vars`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Cnf {
    pub num_vars: usize,
    pub clauses: Vec<Vec<i32>>,
    pub comments: Vec<String>,
}

impl Cnf {
    /// DIMACS text: comment lines, `p cnf VARS CLAUSES`, then one
    /// 0-terminated clause per line.
    pub fn to_dimacs(&self) -> String {
        let mut s = String::new();
        for c in &self.comments {
            let _ = writeln!(s, "c {c}");
        }
        let _ = writeln!(s, "p cnf {} {}", self.num_vars, self.clauses.len());
        for clause in &self.clauses {
            for lit in clause {
                let _ = write!(s, "{lit} ");
            }
            s.push_str("0\n");
        }
        s
    }

    pub fn parse_dimacs(text: &str) -> Result<Cnf, EncodingError> {
        let mut cnf = Cnf::default();
        let mut declared = None;
        let mut current = Vec::new();
        for (ln, line) in text.lines().enumerate() {
            let err = |m: &str| EncodingError::Dimacs { line: ln + 1, message: m.to_string() };
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(c) = line.strip_prefix('c') {
                cnf.comments.push(c.trim_start().to_string());
                continue;
            }
            if let Some(p) = line.strip_prefix("p cnf") {
                let nums: Vec<usize> =
                    p.split_whitespace().map(|t| t.parse().map_err(|_| err("bad header"))).collect::<Result<_, _>>()?;
                let [vars, clauses] = nums[..] else { return Err(err("bad header")) };
                cnf.num_vars = vars;
                declared = Some(clauses);
                continue;
            }
            if declared.is_none() {
                return Err(err("clause before header"));
            }
            for tok in line.split_whitespace() {
                let lit: i32 = tok.parse().map_err(|_| err("bad literal"))?;
                if lit == 0 {
                    cnf.clauses.push(std::mem::take(&mut current));
                } else {
                    if lit.unsigned_abs() as usize > cnf.num_vars {
                        return Err(err("literal out of range"));
                    }
                    current.push(lit);
                }
            }
        }
        if !current.is_empty() {
            cnf.clauses.push(current);
        }
        match declared {
            Some(k) if k == cnf.clauses.len() => Ok(cnf),
            Some(_) => Err(EncodingError::Dimacs { line: 0, message: "clause count mismatch".into() }),
            None => Err(EncodingError::Dimacs { line: 0, message: "missing header".into() }),
        }
    }
}

/// Decides satisfiability by enumerating assignments in variable order,
/// abandoning a branch as soon as a clause has all literals false. At most
/// [`CNF_VARIABLE_CAP`] variables.
pub fn check_cnf_small(cnf: &Cnf) -> Result<bool, EncodingError> {
    if cnf.num_vars > CNF_VARIABLE_CAP {
        return Err(EncodingError::TooManyVariables { limit: CNF_VARIABLE_CAP, actual: cnf.num_vars });
    }
    if cnf.clauses.iter().any(Vec::is_empty) {
        return Ok(false);
    }
    // clauses become decidable once their largest variable is assigned
    let mut by_last: Vec<Vec<&[i32]>> = vec![Vec::new(); cnf.num_vars + 1];
    for c in &cnf.clauses {
        let last = c.iter().map(|l| l.unsigned_abs() as usize).max().unwrap();
        by_last[last].push(c);
    }
    fn go(var: usize, n: usize, value: &mut [bool], by_last: &[Vec<&[i32]>]) -> bool {
        if var > n {
            return true;
        }
        for choice in [false, true] {
            value[var] = choice;
            let ok = by_last[var]
                .iter()
                .all(|c| c.iter().any(|&l| value[l.unsigned_abs() as usize] == (l > 0)));
            if ok && go(var + 1, n, value, by_last) {
                return true;
            }
        }
        false
    }
    let mut value = vec![false; cnf.num_vars + 1];
    Ok(go(1, cnf.num_vars, &mut value, &by_last))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EncodingFormat {
    Cnf,
    Lp,
}

impl std::str::FromStr for EncodingFormat {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "cnf" => Ok(EncodingFormat::Cnf),
            "lp" => Ok(EncodingFormat::Lp),
            other => Err(format!("unknown format `{other}`")),
        }
    }
}

/// Unordered pairs of distinct arcs (a,b), (x,y) whose coloring must not
/// satisfy both c(b)=c(x) and c(a)=c(y). Each pair is reported once as
/// the two vertex pairs that may not be simultaneously monochromatic;
/// a pair with equal vertices is always monochromatic and is dropped.
fn direction_constraints(g: &OrientedDigraph) -> BTreeSet<Vec<(usize, usize)>> {
    let arcs = g.arcs();
    let mut out = BTreeSet::new();
    for i in 0..arcs.len() {
        for j in i + 1..arcs.len() {
            let (a, b) = (arcs[i].0 .0, arcs[i].1 .0);
            let (x, y) = (arcs[j].0 .0, arcs[j].1 .0);
            if (a, b) == (x, y) {
                // parallel arcs: covered by the arc constraints
                continue;
            }
            let mut pairs: Vec<(usize, usize)> = [(b, x), (a, y)]
                .into_iter()
                .filter(|&(p, q)| p != q)
                .map(|(p, q)| (p.min(q), p.max(q)))
                .collect();
            pairs.sort_unstable();
            pairs.dedup();
            out.insert(pairs);
        }
    }
    out
}

fn coloring_cnf(g: &OrientedDigraph, r: usize, label: &dyn Fn(usize) -> String) -> Cnf {
    let n = g.vertex_count();
    let var = |v: usize, c: usize| (v * r + c + 1) as i32;
    let mut comments = vec![
        format!("oriented {r}-coloring of {n} objects, {} adjacencies", g.arc_count()),
    ];
    for v in 0..n {
        for c in 0..r {
            comments.push(format!("varmap {} {} {}", var(v, c), label(v), c + 1));
        }
    }
    let mut clauses: BTreeSet<Vec<i32>> = BTreeSet::new();
    let mut ordered: Vec<Vec<i32>> = Vec::new();
    let mut add = |mut c: Vec<i32>, clauses: &mut BTreeSet<Vec<i32>>| {
        c.sort_unstable_by_key(|l| (l.unsigned_abs(), *l));
        c.dedup();
        if clauses.insert(c.clone()) {
            ordered.push(c);
        }
    };
    for v in 0..n {
        add((0..r).map(|c| var(v, c)).collect(), &mut clauses);
        for c1 in 0..r {
            for c2 in c1 + 1..r {
                add(vec![-var(v, c1), -var(v, c2)], &mut clauses);
            }
        }
    }
    for &(t, h) in g.arcs() {
        for c in 0..r {
            add(vec![-var(t.0, c), -var(h.0, c)], &mut clauses);
        }
    }
    for pairs in direction_constraints(g) {
        // every way of making all listed pairs monochromatic is forbidden
        let mut combos: Vec<Vec<i32>> = vec![Vec::new()];
        for &(p, q) in &pairs {
            combos = combos
                .into_iter()
                .flat_map(|base| {
                    (0..r).map(move |c| {
                        let mut next = base.clone();
                        next.push(-var(p, c));
                        next.push(-var(q, c));
                        next
                    })
                })
                .collect();
        }
        for c in combos {
            add(c, &mut clauses);
        }
    }
    Cnf { num_vars: n * r, clauses: ordered, comments }
}

fn coloring_lp(g: &OrientedDigraph, r: usize, label: &dyn Fn(usize) -> String) -> String {
    let n = g.vertex_count();
    let mut s = String::new();
    let _ = writeln!(s, "\\ oriented {r}-coloring of {n} objects, {} adjacencies", g.arc_count());
    for v in 0..n {
        for c in 1..=r {
            let _ = writeln!(s, "\\ varmap x_{v}_{c} {} {c}", label(v));
        }
    }
    let _ = writeln!(s, "Minimize");
    let ys: Vec<String> = (1..=r).map(|c| format!("y_{c}")).collect();
    let _ = writeln!(s, " obj: {}", ys.join(" + "));
    let _ = writeln!(s, "Subject To");
    for v in 0..n {
        let xs: Vec<String> = (1..=r).map(|c| format!("x_{v}_{c}")).collect();
        let _ = writeln!(s, " assign_{v}: {} = 1", xs.join(" + "));
    }
    for (e, &(t, h)) in g.arcs().iter().enumerate() {
        for c in 1..=r {
            let _ = writeln!(s, " arc_{e}_{c}: x_{}_{c} + x_{}_{c} - y_{c} <= 0", t.0, h.0);
        }
    }
    let constraints = direction_constraints(g);
    let same: BTreeSet<(usize, usize)> = constraints.iter().flatten().copied().collect();
    for &(p, q) in &same {
        for c in 1..=r {
            let _ = writeln!(s, " same_{p}_{q}_{c}: x_{p}_{c} + x_{q}_{c} - s_{p}_{q} <= 1");
        }
    }
    for (k, pairs) in constraints.iter().enumerate() {
        let terms: Vec<String> = pairs.iter().map(|(p, q)| format!("s_{p}_{q}")).collect();
        let bound = pairs.len() - 1;
        let _ = writeln!(s, " dir_{k}: {} <= {bound}", terms.join(" + "));
    }
    let _ = writeln!(s, "Binaries");
    for v in 0..n {
        for c in 1..=r {
            let _ = writeln!(s, " x_{v}_{c}");
        }
    }
    for y in &ys {
        let _ = writeln!(s, " {y}");
    }
    for (p, q) in &same {
        let _ = writeln!(s, " s_{p}_{q}");
    }
    let _ = writeln!(s, "End");
    s
}

/// CNF that is satisfiable iff `g` has an oriented `r`-vertex-coloring.
/// Variable `v*r + c` (1-based color c) means "vertex v gets color c".
pub fn ocn_cnf(g: &OrientedDigraph, r: usize) -> Cnf {
    coloring_cnf(g, r, &|v| format!("vertex {}", g.names()[v]))
}

/// CNF that is satisfiable iff `g` has an oriented `r`-arc-coloring; the
/// variables range over arcs instead of vertices.
pub fn oci_cnf(g: &OrientedDigraph, r: usize) -> Result<Cnf, GraphError> {
    let ld = line_digraph(g)?;
    Ok(coloring_cnf(&ld, r, &|a| format!("arc {a}")))
}

/// Oriented `r`-vertex-coloring as DIMACS CNF or as an LP-format binary
/// program (minimizing the used colors among 1..=r).
pub fn emit_ocn_decision(g: &OrientedDigraph, r: usize, format: EncodingFormat) -> String {
    match format {
        EncodingFormat::Cnf => ocn_cnf(g, r).to_dimacs(),
        EncodingFormat::Lp => coloring_lp(g, r, &|v| format!("vertex {}", g.names()[v])),
    }
}

/// Oriented `r`-arc-coloring, same formats as [`emit_ocn_decision`].
pub fn emit_oci_decision(
    g: &OrientedDigraph,
    r: usize,
    format: EncodingFormat,
) -> Result<String, GraphError> {
    Ok(match format {
        EncodingFormat::Cnf => oci_cnf(g, r)?.to_dimacs(),
        EncodingFormat::Lp => {
            let ld = line_digraph(g)?;
            coloring_lp(&ld, r, &|a| format!("arc {a}"))
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::digraph::{validate_arc_coloring, validate_vertex_coloring};

    fn path(n: usize) -> OrientedDigraph {
        OrientedDigraph::with_vertex_count(n, (0..n - 1).map(|i| (i, i + 1)).collect()).unwrap()
    }

    /// Every r-coloring of the vertices, checked with the validator.
    fn brute_force_chi_o(g: &OrientedDigraph) -> u32 {
        let n = g.vertex_count();
        for r in 1..=n as u32 {
            let total = (r as usize).pow(n as u32);
            for code in 0..total {
                let mut c = code;
                let colors: Vec<u32> = (0..n)
                    .map(|_| {
                        let x = (c % r as usize) as u32 + 1;
                        c /= r as usize;
                        x
                    })
                    .collect();
                if validate_vertex_coloring(g, &VertexColoring::new(colors, r)).unwrap().is_none() {
                    return r;
                }
            }
        }
        0
    }

    #[test]
    fn small_exact_values() {
        let arc = path(2);
        assert_eq!(chi_o_exact(&arc).unwrap().0, 2);
        assert_eq!(brute_force_chi_o(&path(3)), 3);
        let (v, w) = chi_o_exact(&path(3)).unwrap();
        assert_eq!(v, 3);
        assert_eq!(validate_vertex_coloring(&path(3), &w).unwrap(), None);
        // directed 4-path still needs only 3 (1→2→3→1 is a 3-cycle image)
        assert_eq!(brute_force_chi_o(&path(4)), 3);
        assert_eq!(chi_o_exact(&path(4)).unwrap().0, 3);
        let big = OrientedDigraph::with_vertex_count(31, vec![]).unwrap();
        assert!(chi_o_exact(&big).is_err());
    }

    #[test]
    fn index_values() {
        let (v, w) = chi_o_index_exact(&path(2)).unwrap();
        assert_eq!((v, w.colors.clone()), (1, vec![1]));
        let (v, w) = chi_o_index_exact(&path(3)).unwrap();
        assert_eq!(v, 2);
        assert_eq!(validate_arc_coloring(&path(3), &w).unwrap(), None);
        let empty = OrientedDigraph::with_vertex_count(2, vec![]).unwrap();
        assert_eq!(chi_o_index_exact(&empty).unwrap().0, 0);
    }

    #[test]
    fn cnf_decisions() {
        assert!(check_cnf_small(&ocn_cnf(&path(2), 2)).unwrap());
        assert!(!check_cnf_small(&ocn_cnf(&path(3), 2)).unwrap());
        assert!(check_cnf_small(&ocn_cnf(&path(3), 3)).unwrap());
        assert!(!check_cnf_small(&oci_cnf(&path(3), 1).unwrap()).unwrap());
        assert!(check_cnf_small(&oci_cnf(&path(3), 2).unwrap()).unwrap());
        assert!(check_cnf_small(&Cnf::default()).unwrap());
        let too_big = Cnf { num_vars: CNF_VARIABLE_CAP + 1, ..Cnf::default() };
        assert!(matches!(check_cnf_small(&too_big), Err(EncodingError::TooManyVariables { .. })));
    }

    #[test]
    fn dimacs_layout() {
        let text = emit_ocn_decision(&path(2), 2, EncodingFormat::Cnf);
        assert!(text.starts_with("c oriented 2-coloring of 2 objects, 1 adjacencies\nc varmap 1 vertex v1 1\n"));
        assert!(text.contains("\np cnf 4 "));
        let parsed = Cnf::parse_dimacs(&text).unwrap();
        assert_eq!(parsed.num_vars, 4);
        assert_eq!(parsed.to_dimacs(), text);
        assert!(Cnf::parse_dimacs("1 0\n").is_err());
        assert!(Cnf::parse_dimacs("p cnf 1 2\n1 0\n").is_err());
    }

    #[test]
    fn lp_layout() {
        let lp = emit_ocn_decision(&path(3), 3, EncodingFormat::Lp);
        assert!(lp.contains("Minimize\n obj: y_1 + y_2 + y_3\nSubject To\n"));
        assert!(lp.contains(" assign_0: x_0_1 + x_0_2 + x_0_3 = 1\n"));
        assert!(lp.contains(" arc_0_1: x_0_1 + x_1_1 - y_1 <= 0\n"));
        // the two arcs of the path force c(v1) != c(v3)
        assert!(lp.contains(" same_0_2_1: x_0_1 + x_2_1 - s_0_2 <= 1\n"));
        assert!(lp.contains(" dir_0: s_0_2 <= 0\n"));
        assert!(lp.ends_with("End\n"));
        assert_eq!(lp, emit_ocn_decision(&path(3), 3, EncodingFormat::Lp));
    }
}
