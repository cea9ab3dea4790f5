use spcolor::cli::run;

fn spcolor(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("spcolor").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn eval_prints_dot() {
    let (code, out, _) = spcolor(&["eval", "--flavor", "esp", "--expr", "v1->v2 * v2->v3", "--out", "dot"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("digraph"));
    assert!(out.contains("v1 -> v2;") && out.contains("v2 -> v3;"));
    assert_eq!(out.matches("->").count(), 2);
}

#[test]
fn chi_o_of_x3() {
    let (code, out, _) = spcolor(&["chi-o", "--flavor", "esp", "--fixture", "X3"]);
    assert_eq!((code, out.as_str()), (0, "7\n"));
}

#[test]
fn chi_o_index_of_x6() {
    let (code, out, _) = spcolor(&["chi-o-index", "--flavor", "msp", "--fixture", "X6"]);
    assert_eq!((code, out.as_str()), (0, "7\n"));
}

#[test]
fn witness_json() {
    let (code, out, _) = spcolor(&["chi-o", "--expr", "a->b * b->c", "--witness", "--out", "json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["value"], 3);
    assert_eq!(v["witness"].as_object().unwrap().len(), 3);
}

#[test]
fn exact_and_dp_agree() {
    for (dp, exact, expr) in [("chi-o", "chi-o-exact", "(a->b * b->c) + a->c"), ("chi-o-index", "chi-o-index-exact", "a * (b + c) * d")] {
        let (_, x, _) = spcolor(&[dp, "--expr", expr]);
        let (_, y, _) = spcolor(&[exact, "--expr", expr]);
        assert_eq!(x, y, "{expr}");
    }
}

#[test]
fn fixtures_are_listed() {
    let (code, out, _) = spcolor(&["--list-fixtures"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().collect::<Vec<_>>(), ["X1", "X2", "X3", "X4", "X5", "X6"]);
    let (code, out, _) = spcolor(&["fixtures"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().count(), 6);
    for name in ["X1", "X2", "X3", "X4", "X5", "X6"] {
        assert_eq!(spcolor(&["eval", "--fixture", name]).0, 0);
    }
}

#[test]
fn bench_tables() {
    let (code, out, _) = spcolor(&["bench", "--sizes", ""]);
    assert_eq!((code, out.as_str()), (0, "n\tvalue\tseconds\tratio\n"));
    let (code, out, _) = spcolor(&["bench", "--generator", "esp_path", "--sizes", "1000,10000,100000"]);
    assert_eq!(code, 0);
    let rows: Vec<Vec<&str>> = out.lines().skip(1).map(|l| l.split('\t').collect()).collect();
    assert_eq!(rows.len(), 3);
    assert_eq!(rows.iter().map(|r| r[0]).collect::<Vec<_>>(), ["1000", "10000", "100000"]);
    assert!(rows.iter().all(|r| r[1] == "3" && r.len() == 4));
    assert_eq!(rows[0][3], "-");
    assert!(rows[1][3].parse::<f64>().is_ok());
    assert_eq!(spcolor(&["bench", "--sizes", "10,5"]).0, 2);
}

#[test]
fn encodings() {
    let (code, out, _) = spcolor(&["emit-cnf", "--expr", "a->b * b->c", "--r", "3"]);
    assert_eq!(code, 0);
    assert!(out.lines().any(|l| l.starts_with("p cnf 9 ")));
    let (code, out, _) = spcolor(&["emit-lp", "--expr", "a * b", "--r", "2", "--problem", "oci"]);
    assert_eq!(code, 0);
    assert!(out.contains("Binaries"));
}

#[test]
fn recognition() {
    let (code, out, _) = spcolor(&["recognize-esp", "--flavor", "esp", "--expr", "(a->b * b->c) + a->c"]);
    assert_eq!(code, 0);
    assert!(out.contains("->"));
}

#[test]
fn exit_codes() {
    assert_eq!(spcolor(&["bogus"]).0, 2);
    assert_eq!(spcolor(&["chi-o", "--out", "xml", "--expr", "a->b"]).0, 2);
    assert_eq!(spcolor(&["--help"]).0, 0);
    let (code, _, err) = spcolor(&["chi-o", "--expr", "a->"]);
    assert_eq!(code, 1);
    assert!(!err.is_empty());
    assert_eq!(spcolor(&["chi-o", "--fixture", "X9"]).0, 1);
    assert_eq!(spcolor(&["chi-o", "--fixture", "X4"]).0, 1);
}

#[test]
fn output_is_deterministic() {
    for seed in ["0", "7"] {
        let args = ["--seed", seed, "chi-o-index", "--generator", "random_msp:9", "--witness", "--out", "json"];
        let a = spcolor(&args);
        assert_eq!(a.0, 0);
        assert_eq!(a, spcolor(&args));
    }
    let a = spcolor(&["--seed", "1", "parse", "--generator", "random_esp:12"]).1;
    let b = spcolor(&["--seed", "2", "parse", "--generator", "random_esp:12"]).1;
    assert_ne!(a, b);
}
