use std::path::PathBuf;

use evenshell::cli::{run, EXIT_BUDGET, EXIT_DOMAIN, EXIT_OK, EXIT_USAGE};
use serde_json::{json, Value};

fn dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests")
}

fn fixture(name: &str) -> String {
    dir().join("fixtures").join(name).to_string_lossy().into_owned()
}

fn cli(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("evenshell").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json_of(args: &[&str]) -> Value {
    let (code, out, err) = cli(args);
    assert_eq!(code, EXIT_OK, "{args:?}: {err}");
    serde_json::from_str(&out).unwrap()
}

/// Compares against tests/golden/<name>; set UPDATE_GOLDEN=1 to rewrite.
fn golden(name: &str, got: &str) {
    let path = dir().join("golden").join(name);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::create_dir_all(path.parent().unwrap()).unwrap();
        std::fs::write(&path, got).unwrap();
        return;
    }
    let want = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    assert_eq!(got, want, "golden mismatch for {name}");
}

#[test]
fn classify_bundle_path() {
    let v = json_of(&["classify", &fixture("bundle_path8.graph")]);
    assert_eq!(v, json!({"in_g_star": true, "components": ["P̃_{8,2}"]}));
}

#[test]
fn classify_outside_family_reports_witness() {
    let v = json_of(&["classify", &fixture("inner_bundle.graph")]);
    assert_eq!(v["in_g_star"], json!(false));
    let w = &v["witness"];
    assert_eq!(w["A"], json!("1 2 3 4 a b"));
    assert_eq!(w["interval"], json!(["∅", "1234ab"]));
}

#[test]
fn falling_chains_under_explicit_ordering() {
    let v = json_of(&["falling", &fixture("odd_path.graph"), "--A", "2 3 4 5 a1 a2", "--ordering", "explicit"]);
    assert_eq!(
        v["falling_chains"],
        json!([
            "∅<23<123b1<1234a1b1<12345a1a2b1",
            "∅<23<123b1<1234a2b1<12345a1a2b1",
            "∅<34<2345<12345b1<12345a1a2b1",
            "∅<45<2345<12345b1<12345a1a2b1",
        ])
    );
    assert_eq!(v["ordering"], json!("explicit"));
    assert_eq!(v["verified"], json!(false));
    let auto = json_of(&["falling", &fixture("odd_path.graph"), "--A", "2 3 4 5 a1 a2"]);
    assert_eq!(auto["verified"], json!(true));
    assert_eq!(auto["count"], json!(4));
}

#[test]
fn falling_csv() {
    let (code, out, _) = cli(&["falling", &fixture("even_path.graph"), "--A", "3 4 a1 a2", "--format", "csv"]);
    assert_eq!(code, EXIT_OK);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "length,chain");
    assert_eq!(lines.len(), 4);
    assert!(lines[1..].iter().all(|l| l.starts_with("5,")));
}

#[test]
fn table4_csv_shape() {
    let (code, out, _) = cli(&["table4", "--format", "csv"]);
    assert_eq!(code, EXIT_OK);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 10);
    assert_eq!(lines[0], "i,2,3,4,5,6,7,8,9,10,11,12,13,14,15");
    assert_eq!(lines[1], "0,1,1,1,1,1,1,1,1,1,1,1,1,1,1");
    assert!(lines.iter().skip(1).all(|l| l.split(',').count() == 15));
    let j = json_of(&["table4"]);
    assert_eq!(j["rows"].as_array().unwrap().len(), 9);
}

#[test]
fn shell_and_homology() {
    let v = json_of(&["shell", &fixture("middle_bundle.graph"), "--A", "1 2 3 4 c d"]);
    assert_eq!(v["shellable"], json!(false));
    let v = json_of(&["shell", &fixture("end_bundle.graph"), "--A", "1 2 3 4 a b"]);
    assert_eq!(v["shellable"], json!(true));
    let v = json_of(&["homology", &fixture("even_path.graph"), "--A", "3 4 a1 a2"]);
    assert_eq!(v["wedge"], json!("⋁3S^3"));
}

#[test]
fn poset_formats() {
    let v = json_of(&["poset", &fixture("end_bundle.graph"), "--A", "1 2 3 4 a b"]);
    assert!(v.is_object());
    let (code, out, _) = cli(&["poset", &fixture("end_bundle.graph"), "--A", "1 2 3 4 a b", "--format", "dot"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.starts_with("digraph"));
}

#[test]
fn betti_matches_known_vector() {
    let v = json_of(&["betti", &fixture("end_bundle.graph"), "--jobs", "2"]);
    assert_eq!(v["betti"], json!([1, 4, 7, 2]));
    let (code, out, _) = cli(&["betti", &fixture("path4.graph"), "--format", "csv"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out, "i,betti\n0,1\n1,3\n2,2\n");
}

#[test]
fn exit_codes() {
    assert_eq!(cli(&[]).0, EXIT_USAGE);
    assert_eq!(cli(&["frobnicate"]).0, EXIT_USAGE);
    assert_eq!(cli(&["classify", "/definitely/not/here.graph"]).0, EXIT_USAGE);
    assert_eq!(cli(&["poset", &fixture("path4.graph")]).0, EXIT_USAGE);
    assert_eq!(cli(&["classify", &fixture("path4.graph"), "--format", "dot"]).0, EXIT_USAGE);
    assert_eq!(cli(&["poset", &fixture("path4.graph"), "--A", "1 2"]).0, EXIT_DOMAIN);
    assert_eq!(cli(&["poset", &fixture("path4.graph"), "--A", "1 9"]).0, EXIT_DOMAIN);
    assert_eq!(cli(&["witness", &fixture("two_bundles.graph"), "--budget", "1"]).0, EXIT_BUDGET);
    let (code, out, _) = cli(&["classify", &fixture("two_bundles.graph"), "--budget", "1"]);
    assert_eq!(code, EXIT_BUDGET);
    assert_eq!(serde_json::from_str::<Value>(&out).unwrap()["witness"], json!("unknown"));
    assert_eq!(cli(&["--help"]).0, EXIT_OK);
}

#[test]
fn out_flag_writes_file() {
    let path = std::env::temp_dir().join(format!("evenshell-cli-{}.json", std::process::id()));
    let p = path.to_string_lossy().into_owned();
    let (code, out, _) = cli(&["classify", &fixture("path4.graph"), "--out", &p]);
    assert_eq!(code, EXIT_OK);
    assert!(out.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["in_g_star"], json!(true));
    std::fs::remove_file(path).unwrap();
}

#[test]
fn golden_reports() {
    let fixtures = [
        ("bundle_path8", None),
        ("two_bundles", None),
        ("path4", Some("1 2 3 4")),
        ("end_bundle", Some("1 2 3 4 a b")),
        ("middle_bundle", Some("1 2 3 4 c d")),
        ("odd_path", Some("2 3 4 5 a1 a2")),
        ("even_path", Some("1 2 3 4 a1 a2")),
        ("inner_bundle", Some("1 3 4 5 a b")),
        ("inner_bundle_sub", Some("3 4 a b")),
    ];
    for (name, a) in fixtures {
        let file = fixture(&format!("{name}.graph"));
        let (code, out, err) = cli(&["classify", &file]);
        assert_eq!(code, EXIT_OK, "{name}: {err}");
        golden(&format!("{name}.classify.json"), &out);
        if let Some(a) = a {
            for sub in ["poset", "shell", "falling", "homology"] {
                let (code, out, err) = cli(&[sub, &file, "--A", a]);
                let text = if code == EXIT_OK { out } else { format!("exit {code}\n{err}") };
                golden(&format!("{name}.{sub}.json"), &text);
            }
        }
    }
    let (_, out, _) = cli(&["table4", "--format", "csv"]);
    golden("table4.csv", &out);
}
