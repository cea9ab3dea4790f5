//! Acceptance suite: one PASS/FAIL line per criterion. Run with
//! `cargo test -p spcolor --test acceptance`.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use spcolor::digraph::{
    isomorphic, line_digraph, undirected_chromatic_number, validate_arc_coloring, validate_homomorphism,
    validate_vertex_coloring, OrientedDigraph,
};
use spcolor::esp_ocn::{qr7, qr7_middle};
use spcolor::expr::{
    decomposition_tree, enumerate_shapes, esp_path, evaluate, fixture, random_expression, ExprBuilder, Terminals,
};
use spcolor::oracle::{
    check_cnf_small, chi_o_exact, chi_o_index_exact, emit_oci_decision, emit_ocn_decision, Cnf, EncodingFormat,
    ORACLE_CAP,
};
use spcolor::{chi_o_esp, chi_o_index_msp, color_esp_qr7, DpOptions, Flavor, SpExpression};

const SEED: u64 = 0;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn graph(x: &SpExpression) -> OrientedDigraph {
    evaluate(x).expect("generated expressions evaluate").graph
}

fn value_only() -> DpOptions {
    DpOptions { prune: true, witness: false }
}

fn with_witness() -> DpOptions {
    DpOptions { prune: true, witness: true }
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let t = Instant::now();
    let v = f();
    (v, t.elapsed())
}

fn samples(flavor: Flavor, count: usize, leaves: std::ops::RangeInclusive<usize>, stream: u64) -> Vec<SpExpression> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    rng.set_stream(stream);
    (0..count)
        .map(|_| {
            let n = rng.gen_range(leaves.clone());
            random_expression(flavor, n, &mut rng)
        })
        .collect()
}

fn fixture_tightness_vertex() -> Outcome {
    let limit = Duration::from_secs(60);
    let x3 = fixture("X3").unwrap();
    let (dp, t1) = timed(|| chi_o_esp(&x3, with_witness()).unwrap());
    check(dp.value == 7, || format!("chi_o_esp(X3) = {}", dp.value))?;
    let w = dp.witness.unwrap();
    check(validate_vertex_coloring(&graph(&x3), &w).unwrap().is_none(), || "X3 witness rejected".into())?;
    let (exact3, t2) = timed(|| chi_o_exact(&graph(&x3)).unwrap().0);
    check(exact3 == 7, || format!("chi_o_exact(X3) = {exact3}"))?;
    let (exact5, t3) = timed(|| chi_o_exact(&graph(&fixture("X5").unwrap())).unwrap().0);
    check(exact5 == 7, || format!("chi_o_exact(X5) = {exact5}"))?;
    for (what, t) in [("chi_o_esp(X3)", t1), ("chi_o_exact(X3)", t2), ("chi_o_exact(X5)", t3)] {
        check(t < limit, || format!("{what} took {t:.1?}"))?;
    }
    Ok(format!("7, 7, 7 in {t1:.2?}, {t2:.2?}, {t3:.2?}"))
}

fn fixture_tightness_arc() -> Outcome {
    let start = Instant::now();
    let x6 = fixture("X6").unwrap();
    let g6 = graph(&x6);
    check(g6.vertex_count() == 131, || format!("X6 has {} vertices", g6.vertex_count()))?;
    let (sol, t6) = timed(|| chi_o_index_msp(&x6, with_witness()).unwrap());
    check(sol.value == 7, || format!("chi_o_index_msp(X6) = {}", sol.value))?;
    let w = sol.witness.unwrap();
    check(w.count == 7 && validate_arc_coloring(&g6, &w).unwrap().is_none(), || "X6 witness rejected".into())?;
    let ld2 = line_digraph(&graph(&fixture("X2").unwrap())).unwrap();
    let (v2, _) = chi_o_exact(&ld2).unwrap();
    check(v2 == 7, || format!("chi_o_exact(LD(X2)) = {v2}"))?;
    check(isomorphic(&ld2, &graph(&fixture("X5").unwrap())).unwrap(), || "LD(X2) is not isomorphic to X5".into())?;
    let total = start.elapsed();
    check(total < Duration::from_secs(600), || format!("took {total:.1?}"))?;
    Ok(format!("X6 = 7 in {t6:.1?}; LD(X2) = 7 and isomorphic to X5; total {total:.1?}"))
}

fn dp_oracle_equivalence() -> Outcome {
    let mut esp: Vec<SpExpression> = (1..=7).flat_map(|n| enumerate_shapes(Flavor::Esp, n)).collect();
    let exhaustive_esp = esp.len();
    esp.extend(samples(Flavor::Esp, 200, 8..=12, 1));
    for x in &esp {
        let dp = chi_o_esp(x, value_only()).unwrap().value;
        let exact = chi_o_exact(&graph(x)).unwrap().0;
        check(dp == exact, || format!("{x}: dp {dp}, oracle {exact}"))?;
    }
    let mut msp: Vec<SpExpression> = (1..=6).flat_map(|n| enumerate_shapes(Flavor::Msp, n)).collect();
    let exhaustive_msp = msp.len();
    msp.extend(samples(Flavor::Msp, 200, 7..=10, 2));
    for x in &msp {
        let dp = chi_o_index_msp(x, value_only()).unwrap().value;
        let exact = chi_o_index_exact(&graph(x)).unwrap().0;
        check(dp == exact, || format!("{x}: dp {dp}, oracle {exact}"))?;
    }
    Ok(format!("esp {exhaustive_esp} shapes + 200 samples, msp {exhaustive_msp} shapes + 200 samples, 0 mismatches"))
}

fn bound_properties() -> Outcome {
    let mut compared = 0;
    for x in samples(Flavor::Esp, 500, 1..=20, 3) {
        let g = graph(&x);
        let chi = chi_o_esp(&x, value_only()).unwrap().value;
        check(chi <= 7, || format!("{x}: chi_o = {chi}"))?;
        let un = undirected_chromatic_number(&g).unwrap();
        check(un <= chi, || format!("{x}: chi(un) = {un} > chi_o = {chi}"))?;
        if g.arc_count() <= ORACLE_CAP {
            let idx = chi_o_index_exact(&g).unwrap().0;
            check(idx <= chi, || format!("{x}: index {idx} > chi_o {chi}"))?;
            compared += 1;
        }
    }
    for x in samples(Flavor::Msp, 500, 1..=14, 4) {
        let g = graph(&x);
        let idx = chi_o_index_msp(&x, value_only()).unwrap().value;
        check(idx <= 7, || format!("{x}: index = {idx}"))?;
        if g.vertex_count() <= ORACLE_CAP {
            let chi = chi_o_exact(&g).unwrap().0;
            let un = undirected_chromatic_number(&g).unwrap();
            check(idx <= chi, || format!("{x}: index {idx} > chi_o {chi}"))?;
            check(un <= chi, || format!("{x}: chi(un) = {un} > chi_o = {chi}"))?;
            compared += 1;
        }
    }
    Ok(format!("1000 expressions, {compared} with both values, 0 violations"))
}

fn constructive_coloring() -> Outcome {
    let h = qr7();
    for x in samples(Flavor::Esp, 500, 1..=20, 3) {
        let g = graph(&x);
        let c = color_esp_qr7(&x).unwrap();
        check(validate_homomorphism(&g, &c, |a, b| h.has_arc(a as u8, b as u8)).unwrap().is_none(), || {
            format!("{x}: not a homomorphism into QR7")
        })?;
        check(validate_vertex_coloring(&g, &c).unwrap().is_none(), || format!("{x}: not oriented"))?;
        let tree = decomposition_tree(&x).unwrap();
        let Terminals::Esp { source, sink } = tree.root() else { unreachable!() };
        check(c.color(*source) == 1 && c.color(*sink) == 2, || format!("{x}: terminal colors"))?;
    }
    let mut arcs = 0;
    for (a, c) in h.arcs() {
        let b = qr7_middle(a, c).map_err(|e| format!("qr7_middle({a},{c}): {e}"))?;
        check(h.has_arc(a, b) && h.has_arc(b, c), || format!("qr7_middle({a},{c}) = {b}"))?;
        arcs += 1;
    }
    check(arcs == 21, || format!("QR7 has {arcs} arcs"))?;
    Ok("500 samples valid; qr7_middle total on 21 arcs".into())
}

fn solve(doc: &str) -> Option<bool> {
    check_cnf_small(&Cnf::parse_dimacs(doc).expect("emitted DIMACS parses")).ok()
}

fn encoding_correctness() -> Outcome {
    let mut graphs: Vec<OrientedDigraph> = Vec::new();
    for flavor in [Flavor::Esp, Flavor::Msp] {
        for n in 1..=5 {
            for x in enumerate_shapes(flavor, n) {
                graphs.push(graph(&x));
            }
        }
    }
    let (mut ocn, mut oci) = (0, 0);
    for g in &graphs {
        if g.vertex_count() <= 5 {
            let chi = chi_o_exact(g).unwrap().0 as usize;
            for r in 1..=4 {
                if let Some(sat) = solve(&emit_ocn_decision(g, r, EncodingFormat::Cnf)) {
                    check(sat == (chi <= r), || format!("ocn r={r}: sat {sat}, chi_o {chi}"))?;
                    ocn += 1;
                }
            }
        }
        if g.arc_count() <= 4 {
            let idx = chi_o_index_exact(g).unwrap().0 as usize;
            for r in 1..=4 {
                if let Some(sat) = solve(&emit_oci_decision(g, r, EncodingFormat::Cnf).unwrap()) {
                    check(sat == (idx <= r), || format!("oci r={r}: sat {sat}, index {idx}"))?;
                    oci += 1;
                }
            }
        }
    }
    check(ocn > 0 && oci > 0, || "nothing checked".into())?;
    Ok(format!("{ocn} vertex and {oci} arc instances, 0 mismatches"))
}

fn linear_scaling() -> Outcome {
    spcolor::colorgraph::tournaments(7);
    let sizes = [10_000usize, 100_000, 1_000_000];
    let mut times = Vec::new();
    for &n in &sizes {
        let x = esp_path(n).unwrap();
        let mut runs: Vec<Duration> = (0..5)
            .map(|_| {
                let (sol, t) = timed(|| chi_o_esp(&x, value_only()).unwrap());
                assert_eq!(sol.value, 3);
                assert!(sol.max_states <= 49);
                t
            })
            .collect();
        runs.sort();
        times.push(runs[2]);
    }
    let ratios: Vec<f64> = times.windows(2).map(|w| w[1].as_secs_f64() / w[0].as_secs_f64().max(1e-9)).collect();
    let report = format!("medians {times:.2?}, ratios {ratios:.1?}");
    check(ratios.iter().all(|&r| r <= 20.0), || report.clone())?;
    Ok(report)
}

/// Binary tree shapes with `n` leaves in post-order: `true` is a leaf.
fn tree_shapes(n: usize) -> Vec<Vec<bool>> {
    if n == 1 {
        return vec![vec![true]];
    }
    let mut out = Vec::new();
    for k in 1..n {
        for l in tree_shapes(k) {
            for r in tree_shapes(n - k) {
                let mut s = l.clone();
                s.extend(&r);
                s.push(false);
                out.push(s);
            }
        }
    }
    out
}

fn build_esp(shape: &[bool], ops: u32) -> SpExpression {
    let mut b = ExprBuilder::new(Flavor::Esp);
    let (mut stack, mut leaf, mut inner) = (Vec::new(), 0, 0);
    for &is_leaf in shape {
        if is_leaf {
            leaf += 1;
            stack.push(b.arc(format!("t{leaf}"), format!("h{leaf}")));
        } else {
            let r = stack.pop().unwrap();
            let l = stack.pop().unwrap();
            stack.push(if ops >> inner & 1 == 1 { b.series(l, r) } else { b.parallel(l, r) });
            inner += 1;
        }
    }
    b.finish().unwrap().with_canonical_names()
}

fn line_digraph_bridge() -> Outcome {
    let mut count = 0u64;
    let mut iso_checked = 0u64;
    for n in 1..=10 {
        for shape in tree_shapes(n) {
            for ops in 0..1u32 << (n - 1) {
                let x = build_esp(&shape, ops);
                let ld = line_digraph(&graph(&x)).unwrap();
                let m = graph(&x.to_msp_shape());
                // leaf k is arc k of x and vertex k of the msp expression
                let mut a: Vec<_> = ld.arcs().iter().map(|&(t, h)| (t.0, h.0)).collect();
                let mut b: Vec<_> = m.arcs().iter().map(|&(t, h)| (t.0, h.0)).collect();
                a.sort_unstable();
                b.sort_unstable();
                check(ld.vertex_count() == m.vertex_count() && a == b, || format!("{x}: LD differs"))?;
                if n <= 7 || count.is_multiple_of(97) {
                    check(isomorphic(&ld, &m).unwrap(), || format!("{x}: not isomorphic"))?;
                    iso_checked += 1;
                }
                count += 1;
            }
        }
    }
    Ok(format!("{count} expressions equal under the leaf map, {iso_checked} also through isomorphic()"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("fixture tightness, vertex coloring", fixture_tightness_vertex),
        ("fixture tightness, arc coloring", fixture_tightness_arc),
        ("dp-oracle equivalence", dp_oracle_equivalence),
        ("bound properties", bound_properties),
        ("constructive coloring", constructive_coloring),
        ("encoding correctness", encoding_correctness),
        ("linear scaling", linear_scaling),
        ("line-digraph bridge", line_digraph_bridge),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            Err(e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
        });
        match outcome {
            Ok(detail) => println!("criterion {}: PASS {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL {name}: {why}", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
