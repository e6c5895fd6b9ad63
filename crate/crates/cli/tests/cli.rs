use std::process::Command;

use serde_json::Value;
use tiltlab_core::{parse_rational, QuadValue};

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("tiltlab").chain(args.iter().copied());
    let code = tiltlab::run(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn ok(args: &[&str]) -> String {
    let (code, out, err) = run(args);
    assert_eq!(code, 0, "{args:?} failed: {err}");
    out
}

fn json(args: &[&str]) -> Value {
    serde_json::from_str(&ok(args)).unwrap()
}

#[test]
fn wall_example() {
    assert_eq!(
        ok(&["wall", "--v", "1,0,-1", "--w", "1,-1,1/2", "--n", "3", "--hn", "1"]),
        "{\"kind\":\"circle\",\"s\":\"-3/2\",\"rsq\":\"1/4\",\"type\":1}\n"
    );
}

#[test]
fn kodaira_example() {
    assert_eq!(
        ok(&["vanishing", "top", "--v", "1,1,1/2", "--hn", "1", "--n", "3"]),
        "{\"min_l\":0}\n"
    );
    assert_eq!(ok(&["vanishing", "h1", "--v", "1,-1,1/2"]), "{\"min_l\":0}\n");
}

#[test]
fn rank_two_example() {
    assert_eq!(
        ok(&["p3", "rank2", "--c1", "0", "--c2", "2", "--mu-max-large", "--reflexive"]),
        "{\"paper\":\"6\",\"hartshorne\":\"4\",\"best\":\"4\"}\n"
    );
    let v = json(&["p3", "rank2", "--c1", "0", "--c2", "2"]);
    assert!(v.get("hartshorne").is_none());
    let paper: QuadValue = serde_json::from_value(v["paper"].clone()).unwrap();
    assert_eq!(paper.square(), QuadValue::from(parse_rational("512/27").unwrap()));
}

#[test]
fn wall_kinds_and_types() {
    assert_eq!(
        json(&["wall", "--v", "1,0,-1", "--w", "1,0,-2"])["kind"],
        "vertical"
    );
    assert_eq!(json(&["type", "--v", "1,0,-1", "--w", "1,-1,1/2"])["type"], 1);
    // Roles are assigned by slope order.
    assert_eq!(json(&["type", "--w", "1,0,-1", "--v", "1,-1,1/2"])["type"], 1);
    let m = json(&["modify", "--v", "1,0,-1", "--w", "2,-1,0"]);
    assert_eq!(m["type"], 1);
    assert_eq!(m["modified"]["s"], "-9/4");
    assert_eq!(m["modified"]["rsq"], "49/16");
}

#[test]
fn ellipse_worked_instance() {
    let v = json(&["ellipse", "--v", "1,0,-1", "--w", "2,-1,0"]);
    assert_eq!(v["rhs"], "4");
    assert_eq!(v["intersection"]["beta_plus"], "-1");
    assert_eq!(v["intersection"]["alpha_sq_plus"], "3/2");
    assert_eq!(v["intersection"]["contact"], "crossing");
    assert_eq!(v["intersection"]["intersects"], true);
    let p = json(&["ellipse", "--v", "1,0,-1", "--beta", "3", "--alpha-sq", "1"]);
    assert_eq!(p["rank_bound_holds"], true);
}

#[test]
fn regions_and_bounds() {
    let r = json(&["region", "--v", "1,0,-1", "--mu-max", "-1"]);
    assert_eq!(r["kind"], "vray");
    assert_eq!(r["conditional_on"], "mu-max<=-1");
    let strip = json(&["region", "--v", "1,0,-1", "--mu-max", "-1/4"]);
    assert_eq!(strip["kind"], "left-strip");
    let shift = json(&["region", "--v", "1,0,-1", "--shift", "--mu-min", "1/4"]);
    assert_eq!(shift["kind"], "right-strip");
    assert_eq!(strip["beta"]["q"], "-8");
    assert_eq!(shift["beta"]["q"], "8");
    let reg = json(&["regularity", "--factor", "1,3,0", "--factor", "1,2,0"]);
    assert_eq!(reg["m"], 1);
    let o = json(&["regularity", "--sheaf", "1,0,0,0"]);
    assert_eq!(o["m"], 0);
    let s = json(&["serre", "--factor", "3,2/3,4"]);
    assert_eq!(s["bound"], "22/3");
    assert_eq!(s["weak"], "10/3");
    let c = json(&["p3", "ch3", "--rank", "2", "--c1", "0", "--c2", "2", "--mu-max", "-1/2"]);
    assert_eq!(c["case"], "large");
    let b = json(&["p3", "bmt", "--v", "1,1,1/2,1/6", "--beta", "1/3", "--alpha-sq", "2"]);
    assert_eq!(b["value"], "0");
}

#[test]
fn scan_lists_walls_by_nesting() {
    let walls = json(&["scan", "--v", "1,0,-1", "--rank-max", "3", "--window", "-4,0"]);
    let walls = walls.as_array().unwrap();
    assert!(!walls.is_empty());
    let centers: Vec<_> = walls
        .iter()
        .map(|w| parse_rational(w["s"].as_str().unwrap()).unwrap())
        .collect();
    assert!(centers.windows(2).all(|p| p[0] >= p[1]));
    assert!(walls.iter().all(|w| w["type"] != 2));
    let d = json(&["scan", "--v", "1,0,-1", "--rank-max", "3", "--window", "-4,0", "--diagnostics"]);
    assert_eq!(d["walls"].as_array().unwrap().len(), walls.len());
    assert_eq!(d["diagnostics"]["accepted"], walls.len() as u64);
}

#[test]
fn usage_errors_exit_with_one() {
    for args in [
        &["wall", "--v", "1,0,-1"][..],
        &["wall", "--v", "1,0", "--w", "1,0,0"],
        &["wall", "--v", "1,x,0", "--w", "1,0,0"],
        &["region", "--v", "1,0,-1", "--mu-max", "1/0"],
        &["scan", "--v", "1,0,-1", "--rank-max", "2", "--window", "0,-1"],
        &["serre"],
        &["plot", "--v", "1,0,-1"],
        &[],
    ] {
        let (code, out, err) = run(args);
        assert_eq!(code, 1, "{args:?}: {out}{err}");
        assert!(!err.is_empty());
    }
}

#[test]
fn domain_errors_exit_with_two() {
    let (code, _, err) = run(&["region", "--v", "1,0,-1", "--mu-max", "1"]);
    assert_eq!(code, 2);
    assert!(err.contains("must be below mu(E)"), "{err}");
    let (code, _, err) = run(&["wall", "--v", "1,0,-1", "--w", "2,0,-2"]);
    assert_eq!(code, 2);
    assert!(err.contains("proportional"), "{err}");
    let (code, _, _) = run(&["wall", "--v", "1,0,1", "--w", "1,1,0"]);
    assert_eq!(code, 2);
    let (code, _, _) = run(&["p3", "rank2", "--c1", "1", "--c2", "2"]);
    assert_eq!(code, 2);
    let (code, _, _) = run(&["p3", "bmt", "--v", "1,0,0", "--beta", "0", "--alpha-sq", "1"]);
    assert_eq!(code, 2);
    let (code, _, _) = run(&["ellipse", "--v", "1,0,-1", "--beta", "0", "--alpha-sq", "0"]);
    assert_eq!(code, 2);
}

#[test]
fn help_and_version_exit_with_zero() {
    let (code, out, _) = run(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("Usage"));
    assert_eq!(run(&["--version"]).0, 0);
}

#[test]
fn text_output() {
    let out = ok(&["--text", "wall", "--v", "1,0,-1", "--w", "1,-1,1/2"]);
    assert_eq!(out, "W(w, v): semicircle center -3/2 radius^2 1/4, type 1\n");
    let out = ok(&["vanishing", "top", "--v", "1,1,1/2", "--text"]);
    assert!(out.contains("smallest such l = 0"), "{out}");
}

#[test]
fn json_round_trips() {
    let cases: [&[&str]; 6] = [
        &["wall", "--v", "1,0,-1", "--w", "2,-1,0"],
        &["ellipse", "--v", "2,1,-3", "--w", "1,-1,0"],
        &["region", "--v", "2,1,-3"],
        &["serre", "--factor", "2,1/2,5", "--factor", "1,-1,2"],
        &["p3", "ch3", "--rank", "3", "--c1", "1", "--c2", "3"],
        &["scan", "--v", "2,1,-3", "--rank-max", "2", "--window", "-6,1", "--diagnostics"],
    ];
    for args in cases {
        let text = ok(args);
        let value: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(format!("{value}\n"), text, "{args:?}");
        check_exact_fields(&value);
    }
}

/// Every `"p/q"` string and every `{"q","s","d"}` object parses back.
fn check_exact_fields(value: &Value) {
    match value {
        Value::Object(map) if map.contains_key("q") && map.contains_key("d") => {
            let q: QuadValue = serde_json::from_value(value.clone()).unwrap();
            assert_eq!(serde_json::to_value(&q).unwrap(), *value);
        }
        Value::Object(map) => {
            for (key, v) in map {
                if let (Some(s), true) = (v.as_str(), ["s", "rsq", "beta_plus", "mu"].contains(&key.as_str())) {
                    parse_rational(s).unwrap();
                }
                check_exact_fields(v);
            }
        }
        Value::Array(items) => items.iter().for_each(check_exact_fields),
        _ => {}
    }
}

#[test]
fn identical_invocations_are_byte_identical() {
    for args in [
        &["scan", "--v", "2,1,-3", "--rank-max", "2", "--window", "-6,1"][..],
        &["plot", "--v", "1,0,-1", "--w", "2,-1,0", "--w", "1,-1,1/2", "--ellipse", "--modified"],
    ] {
        assert_eq!(ok(args), ok(args));
    }
}

fn paths(svg: &str) -> Vec<&str> {
    svg.lines().filter(|l| l.starts_with("<path")).collect()
}

#[test]
fn plot_of_a_wall_and_an_ellipse() {
    let svg = ok(&["plot", "--v", "1,0,-1", "--w", "1,-1,1/2", "--ellipse"]);
    assert!(svg.starts_with("<?xml"));
    assert!(svg.trim_end().ends_with("</svg>"));
    assert_eq!(paths(&svg).len(), 2);
    assert!(svg.contains("<line class=\"axis\""));
    assert!(svg.contains("s=-3/2 rsq=1/4"));
    assert!(svg.contains("extremal ellipse mu=0 rhs=4"));
}

#[test]
fn plot_sample_count_sets_segments() {
    let svg = ok(&["plot", "--v", "1,0,-1", "--w", "1,-1,1/2", "--ellipse", "--samples", "4"]);
    for p in paths(&svg) {
        let d = p.split("d=\"").nth(1).unwrap().split('"').next().unwrap();
        assert_eq!(d.matches('L').count(), 4, "{p}");
    }
    let svg = ok(&["plot", "--v", "1,0,-1", "--w", "1,-1,1/2"]);
    assert_eq!(paths(&svg)[0].matches('L').count(), 128);
}

#[test]
fn plot_marks_the_worked_crossing() {
    let svg = ok(&["plot", "--v", "1,0,-1", "--w", "2,-1,0", "--ellipse", "--modified"]);
    assert!(svg.contains("<title>crossing beta=-1 alpha^2=3/2</title>"), "{svg}");
    assert!(svg.contains("modified wall w=(2, -1, 0) s=-9/4 rsq=49/16"));
}

#[test]
fn svg_out_writes_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("wall.svg");
    let p = path.to_str().unwrap();
    let out = ok(&["wall", "--v", "1,0,-1", "--w", "1,-1,1/2", "--svg-out", p]);
    assert!(out.starts_with("{\"kind\":\"circle\""));
    let svg = std::fs::read_to_string(&path).unwrap();
    assert_eq!(paths(&svg).len(), 1);
    let plot_path = dir.path().join("plot.svg");
    let out = ok(&["plot", "--v", "1,0,-1", "--mu-max", "-1", "--svg-out", plot_path.to_str().unwrap()]);
    assert!(out.is_empty());
    assert!(std::fs::read_to_string(&plot_path).unwrap().contains("class=\"vertical\""));
    let (code, _, _) = run(&["serre", "--factor", "1,3,0", "--svg-out", p]);
    assert_eq!(code, 1);
}

#[test]
fn binary_honours_the_guard_variable() {
    let bin = env!("CARGO_BIN_EXE_tiltlab");
    let args = ["scan", "--v", "1,0,-1", "--rank-max", "3", "--window", "-4,0"];
    let refused = Command::new(bin).args(args).env("TILTLAB_GUARD", "1").output().unwrap();
    assert_eq!(refused.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&refused.stderr).contains("refused"));
    let bad = Command::new(bin).args(args).env("TILTLAB_GUARD", "lots").output().unwrap();
    assert_eq!(bad.status.code(), Some(1));
    let fine = Command::new(bin).args(args).env_remove("TILTLAB_GUARD").output().unwrap();
    assert_eq!(fine.status.code(), Some(0));
    assert_eq!(
        String::from_utf8(fine.stdout).unwrap(),
        ok(&args)
    );
}
