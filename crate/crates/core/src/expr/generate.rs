//! Expression families and the bundled fixtures.

use rand::{Rng, SeedableRng};

use super::{parse_fixture_file, ExprBuilder, Flavor, Node, SpExpression};
use crate::error::ExprError;

/// Bundled fixtures: name, flavor, file contents.
pub const FIXTURES: [(&str, Flavor, &str); 6] = [
    ("X1", Flavor::Esp, include_str!("../../data/fixtures/X1.sp")),
    ("X2", Flavor::Esp, include_str!("../../data/fixtures/X2.sp")),
    ("X3", Flavor::Esp, include_str!("../../data/fixtures/X3.sp")),
    ("X4", Flavor::Msp, include_str!("../../data/fixtures/X4.sp")),
    ("X5", Flavor::Msp, include_str!("../../data/fixtures/X5.sp")),
    ("X6", Flavor::Msp, include_str!("../../data/fixtures/X6.sp")),
];

pub fn fixture_names() -> impl Iterator<Item = &'static str> {
    FIXTURES.iter().map(|f| f.0)
}

pub fn fixture(name: &str) -> Result<SpExpression, ExprError> {
    let (_, _, text) = FIXTURES
        .iter()
        .find(|f| f.0 == name)
        .ok_or_else(|| ExprError::UnknownFixture(name.to_string()))?;
    parse_fixture_file(text)
}

fn param(ok: bool, msg: impl FnOnce() -> String) -> Result<(), ExprError> {
    if ok {
        Ok(())
    } else {
        Err(ExprError::Parameter(msg()))
    }
}

/// Oriented path v1→…→vn, composed left to right.
pub fn esp_path(n: usize) -> Result<SpExpression, ExprError> {
    param(n >= 2, || format!("path needs n >= 2, got {n}"))?;
    let mut b = ExprBuilder::new(Flavor::Esp);
    let mut acc = b.arc("v1", "v2");
    for i in 2..n {
        let a = b.arc(format!("v{i}"), format!("v{}", i + 1));
        acc = b.series(acc, a);
    }
    b.finish()
}

/// Oriented cycle with one reversed arc: the path v1→…→vn in parallel with v1→vn.
pub fn esp_cycle_rev(n: usize) -> Result<SpExpression, ExprError> {
    param(n >= 3, || format!("cycle needs n >= 3, got {n}"))?;
    let path = esp_path(n)?;
    let mut nodes = path.nodes().to_vec();
    let root = nodes.len() - 1;
    nodes.push(Node::Arc { tail: "v1".into(), head: format!("v{n}") });
    nodes.push(Node::Parallel(root, root + 1));
    SpExpression::from_nodes(Flavor::Esp, nodes)
}

/// (v1 + … + vn) * (w1 + … + wm): every v_i points to every w_j.
pub fn msp_bipartite(n: usize, m: usize) -> Result<SpExpression, ExprError> {
    param(n >= 1 && m >= 1, || format!("bipartite sides must be nonempty, got {n},{m}"))?;
    let mut b = ExprBuilder::new(Flavor::Msp);
    let left: Vec<usize> = (1..=n).map(|i| b.vertex(format!("v{i}"))).collect();
    let l = b.fold(&left, false);
    let right: Vec<usize> = (1..=m).map(|i| b.vertex(format!("w{i}"))).collect();
    let r = b.fold(&right, false);
    b.series(l, r);
    b.finish()
}

/// Directed path as an msp expression: v1 * v2 * … * vn.
pub fn msp_chain(n: usize) -> Result<SpExpression, ExprError> {
    param(n >= 1, || "chain needs n >= 1".to_string())?;
    let mut b = ExprBuilder::new(Flavor::Msp);
    let items: Vec<usize> = (1..=n).map(|i| b.vertex(format!("v{i}"))).collect();
    b.fold(&items, true);
    b.finish()
}

/// A rooted tree given by child lists; vertex 0 is the root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootedTree {
    pub children: Vec<Vec<usize>>,
}

impl RootedTree {
    /// From a parent array where `parent[0]` is ignored (the root).
    pub fn from_parents(parent: &[usize]) -> Self {
        let mut children = vec![Vec::new(); parent.len()];
        for (v, &p) in parent.iter().enumerate().skip(1) {
            children[p].push(v);
        }
        RootedTree { children }
    }
}

/// Out-rooted tree (arcs point away from the root): a leaf is `v`, an
/// inner vertex is `v * (X_c1 + … + X_ck)`. Vertex i is named `v{i+1}`.
pub fn msp_rooted_tree(tree: &RootedTree) -> Result<SpExpression, ExprError> {
    let n = tree.children.len();
    param(n >= 1, || "tree needs a vertex".to_string())?;
    let mut seen = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut stack = vec![(0usize, false)];
    while let Some((v, expanded)) = stack.pop() {
        if expanded {
            order.push(v);
            continue;
        }
        param(v < n && !seen[v], || format!("vertex {v} reached twice or out of range"))?;
        seen[v] = true;
        stack.push((v, true));
        for &c in tree.children[v].iter().rev() {
            stack.push((c, false));
        }
    }
    param(seen.iter().all(|&s| s), || "tree is not connected to the root".to_string())?;
    let mut b = ExprBuilder::new(Flavor::Msp);
    let mut expr_of = vec![0usize; n];
    for v in order {
        let me = b.vertex(format!("v{}", v + 1));
        expr_of[v] = if tree.children[v].is_empty() {
            me
        } else {
            let subs: Vec<usize> = tree.children[v].iter().map(|&c| expr_of[c]).collect();
            let p = b.fold(&subs, false);
            b.series(me, p)
        };
    }
    b.finish()
}

fn push_y(b: &mut ExprBuilder, i: usize, next: &mut usize) -> usize {
    *next += 1;
    let y0 = b.vertex(format!("v{next}"));
    if i == 0 {
        return y0;
    }
    let l = push_y(b, i - 1, next);
    let r = push_y(b, i - 1, next);
    let s = b.series(l, r);
    b.parallel(y0, s)
}

/// Y_0 is one vertex and Y_i = Y_0 + Y_(i-1) * Y_(i-1), every operand
/// expanded with fresh vertices.
pub fn msp_y(i: usize) -> Result<SpExpression, ExprError> {
    param(i <= 20, || format!("Y_{i} is too large"))?;
    let mut b = ExprBuilder::new(Flavor::Msp);
    push_y(&mut b, i, &mut 0);
    b.finish()
}

/// Y0 * Y0 * Y6 * Y0 * Y0 (131 vertices).
pub fn msp_x6() -> SpExpression {
    let mut b = ExprBuilder::new(Flavor::Msp);
    let mut next = 0;
    let parts: Vec<usize> = [0, 0, 6, 0, 0].iter().map(|&i| push_y(&mut b, i, &mut next)).collect();
    b.fold(&parts, true);
    // from_nodes brings the arena into parse order
    b.finish().expect("well-formed")
}

#[derive(Clone, Debug)]
enum Shape {
    Leaf,
    Op(bool, Box<Shape>, Box<Shape>),
}

fn shapes(leaves: usize, memo: &mut Vec<Option<Vec<Shape>>>) -> Vec<Shape> {
    if let Some(s) = &memo[leaves] {
        return s.clone();
    }
    let out = if leaves == 1 {
        vec![Shape::Leaf]
    } else {
        let mut out = Vec::new();
        for left in 1..leaves {
            let ls = shapes(left, memo);
            let rs = shapes(leaves - left, memo);
            for series in [false, true] {
                for l in &ls {
                    for r in &rs {
                        out.push(Shape::Op(series, Box::new(l.clone()), Box::new(r.clone())));
                    }
                }
            }
        }
        out
    };
    memo[leaves] = Some(out.clone());
    out
}

fn emit(shape: &Shape, flavor: Flavor, b: &mut ExprBuilder, k: &mut usize) -> usize {
    match shape {
        Shape::Leaf => {
            *k += 1;
            match flavor {
                Flavor::Esp => b.arc(format!("t{k}"), format!("h{k}")),
                Flavor::Msp => b.vertex(format!("v{k}")),
            }
        }
        Shape::Op(series, l, r) => {
            let l = emit(l, flavor, b, k);
            let r = emit(r, flavor, b, k);
            if *series {
                b.series(l, r)
            } else {
                b.parallel(l, r)
            }
        }
    }
}

/// Every expression tree with exactly `leaves` leaves (all binary trees,
/// every inner node either composition), with canonical leaf names.
pub fn enumerate_shapes(flavor: Flavor, leaves: usize) -> Vec<SpExpression> {
    if leaves == 0 {
        return Vec::new();
    }
    let mut memo = vec![None; leaves + 1];
    shapes(leaves, &mut memo)
        .iter()
        .map(|s| {
            let mut b = ExprBuilder::new(flavor);
            emit(s, flavor, &mut b, &mut 0);
            b.finish().expect("well-formed").with_canonical_names()
        })
        .collect()
}

/// Random expression with `leaves` leaves: each inner node splits its leaf
/// count uniformly and picks a composition with equal odds.
pub fn random_expression(flavor: Flavor, leaves: usize, rng: &mut impl Rng) -> SpExpression {
    assert!(leaves >= 1);
    fn build(n: usize, flavor: Flavor, b: &mut ExprBuilder, k: &mut usize, rng: &mut impl Rng) -> usize {
        if n == 1 {
            *k += 1;
            return match flavor {
                Flavor::Esp => b.arc(format!("t{k}"), format!("h{k}")),
                Flavor::Msp => b.vertex(format!("v{k}")),
            };
        }
        let split = rng.gen_range(1..n);
        let series = rng.gen_bool(0.5);
        let l = build(split, flavor, b, k, rng);
        let r = build(n - split, flavor, b, k, rng);
        if series {
            b.series(l, r)
        } else {
            b.parallel(l, r)
        }
    }
    let mut b = ExprBuilder::new(flavor);
    build(leaves, flavor, &mut b, &mut 0, rng);
    b.finish().expect("well-formed").with_canonical_names()
}

/// Named generator, as accepted on the command line: `esp_path:N`,
/// `esp_cycle_rev:N`, `msp_bipartite:N,M`, `msp_chain:N`, `msp_y:I`,
/// `msp_x6`, `fixture:NAME`, and the seeded `random_esp:N` / `random_msp:N`
/// (N leaves).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Generator {
    EspPath(usize),
    EspCycleRev(usize),
    MspBipartite(usize, usize),
    MspChain(usize),
    MspY(usize),
    MspX6,
    Fixture(String),
    RandomEsp(usize),
    RandomMsp(usize),
}

impl Generator {
    pub fn build(&self) -> Result<SpExpression, ExprError> {
        self.build_seeded(0)
    }

    /// Like [`Generator::build`]; `seed` only affects the random generators.
    pub fn build_seeded(&self, seed: u64) -> Result<SpExpression, ExprError> {
        let random = |flavor, n: usize| {
            param(n >= 1, || "random expression needs a leaf".to_string())?;
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            Ok(random_expression(flavor, n, &mut rng))
        };
        match self {
            Generator::RandomEsp(n) => random(Flavor::Esp, *n),
            Generator::RandomMsp(n) => random(Flavor::Msp, *n),
            Generator::EspPath(n) => esp_path(*n),
            Generator::EspCycleRev(n) => esp_cycle_rev(*n),
            Generator::MspBipartite(n, m) => msp_bipartite(*n, *m),
            Generator::MspChain(n) => msp_chain(*n),
            Generator::MspY(i) => msp_y(*i),
            Generator::MspX6 => Ok(msp_x6()),
            Generator::Fixture(name) => fixture(name),
        }
    }
}

impl std::str::FromStr for Generator {
    type Err = ExprError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (kind, args) = s.split_once(':').unwrap_or((s, ""));
        let nums = || -> Result<Vec<usize>, ExprError> {
            args.split(',')
                .map(|a| a.trim().parse::<usize>().map_err(|_| ExprError::Parameter(format!("bad number `{a}`"))))
                .collect()
        };
        let one = || -> Result<usize, ExprError> {
            match nums()?.as_slice() {
                [n] => Ok(*n),
                _ => Err(ExprError::Parameter(format!("`{kind}` takes one number"))),
            }
        };
        match kind {
            "esp_path" => Ok(Generator::EspPath(one()?)),
            "esp_cycle_rev" => Ok(Generator::EspCycleRev(one()?)),
            "msp_chain" => Ok(Generator::MspChain(one()?)),
            "msp_y" => Ok(Generator::MspY(one()?)),
            "msp_x6" => Ok(Generator::MspX6),
            "random_esp" => Ok(Generator::RandomEsp(one()?)),
            "random_msp" => Ok(Generator::RandomMsp(one()?)),
            "msp_bipartite" => match nums()?.as_slice() {
                [n, m] => Ok(Generator::MspBipartite(*n, *m)),
                _ => Err(ExprError::Parameter("`msp_bipartite` takes N,M".into())),
            },
            "fixture" => Ok(Generator::Fixture(args.to_string())),
            other => Err(ExprError::Parameter(format!("unknown generator `{other}`"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::evaluate;

    #[test]
    fn path_text() {
        assert_eq!(esp_path(3).unwrap().to_string(), "v1->v2 * v2->v3");
        assert!(esp_path(1).is_err());
        assert!(esp_cycle_rev(2).is_err());
    }

    #[test]
    fn cycle_with_reversed_arc() {
        let g = evaluate(&esp_cycle_rev(4).unwrap()).unwrap().graph;
        assert_eq!((g.vertex_count(), g.arc_count()), (4, 4));
        assert_eq!(g.sources().len(), 1);
    }

    #[test]
    fn bipartite() {
        assert_eq!(msp_bipartite(1, 1).unwrap().to_string(), "v1 * w1");
        let g = evaluate(&msp_bipartite(3, 4).unwrap()).unwrap().graph;
        assert_eq!(g.arc_count(), 12);
    }

    #[test]
    fn rooted_tree_points_away_from_root() {
        let t = RootedTree::from_parents(&[0, 0, 0, 1]);
        let x = msp_rooted_tree(&t).unwrap();
        let g = evaluate(&x).unwrap().graph;
        assert_eq!(g.arc_count(), 3);
        let root = g.vertex_by_name("v1").unwrap();
        assert_eq!(g.sources(), vec![root]);
        assert_eq!(g.outdegree(root), 2);
        assert_eq!(g.indegree(g.vertex_by_name("v4").unwrap()), 1);
    }

    #[test]
    fn y_sizes_and_x6() {
        let sizes: Vec<usize> = (0..=6).map(|i| msp_y(i).unwrap().leaf_count()).collect();
        assert_eq!(sizes, vec![1, 3, 7, 15, 31, 63, 127]);
        let x6 = msp_x6();
        assert_eq!(evaluate(&x6).unwrap().graph.vertex_count(), 131);
        assert_eq!(fixture("X6").unwrap(), x6);
    }

    #[test]
    fn shape_counts() {
        // Catalan(k-1) * 2^(k-1)
        let counts: Vec<usize> = (1..=5).map(|k| enumerate_shapes(Flavor::Msp, k).len()).collect();
        assert_eq!(counts, vec![1, 2, 8, 40, 224]);
    }

    #[test]
    fn generator_strings() {
        assert_eq!("esp_path:5".parse::<Generator>().unwrap(), Generator::EspPath(5));
        assert_eq!("msp_bipartite:2,3".parse::<Generator>().unwrap(), Generator::MspBipartite(2, 3));
        assert!("nope:1".parse::<Generator>().is_err());
        assert!("esp_path:x".parse::<Generator>().is_err());
    }

    #[test]
    fn all_fixtures_parse() {
        for (name, flavor, _) in FIXTURES {
            assert_eq!(fixture(name).unwrap().flavor(), flavor);
        }
        assert!(fixture("X7").is_err());
    }
}
