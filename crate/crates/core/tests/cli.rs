use std::path::PathBuf;

use semimagic::cli::{run, EXIT_BUDGET, EXIT_FAILED, EXIT_OK, EXIT_USAGE};

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
        .display()
        .to_string()
}

fn sm(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("semimagic").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn temp_file(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("semimagic-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, contents).unwrap();
    p
}

#[test]
fn powers_prints_all_three_squares() {
    let (code, out, _) = sm(&["powers", "--m", "4", "--base", &fixture("m4.txt")]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("powersquare m=4 modulus=32 kind=T\n1 29 27 7\n"));
    assert!(out.contains("sums e=4 o=8 t=0"));
    let (_, out, _) = sm(&["powers", "--m", "5", "--translate", "1", "--base", &fixture("m5.txt")]);
    assert!(out.starts_with("intsquare m=5\n18 25 2 9 16\n"));
}

#[test]
fn gen_and_verify() {
    let (code, out, err) = sm(&["gen", "--m", "5", "--translate", "1", "--base", &fixture("m5.txt")]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out, std::fs::read_to_string(fixture("d50_side10_translated.txt")).unwrap());
    assert!(err.contains("magic constant r^25"));

    let (code, out, _) = sm(&["verify", &fixture("d50_side10_translated.txt"), "--ordering", "semicircular"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("magic constant: r^25"));
    assert!(out.contains("reachable constants: r^5 r^25"));

    let (code, out, _) = sm(&["verify", &fixture("d32_side8.txt"), "--ordering", "semicircular", "--magic", "--json"]);
    assert_eq!(code, EXIT_OK);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["verdict"], "semi_magic_square");
    assert_eq!(v["magic_constant"], "r^8");
    assert_eq!(v["diagonal_products"].as_array().unwrap().len(), 2);
    assert_eq!(v["row_witnesses"][5], serde_json::json!([1, 5]));
}

#[test]
fn json_output_parses_back() {
    let (_, json, _) = sm(&["gen", "--m", "4", "--format", "json"]);
    let p = temp_file("g.json", &json);
    let (code, out, _) = sm(&["verify", p.to_str().unwrap(), "--ordering", "semicircular", "--block-side", "4"]);
    assert_eq!(code, EXIT_OK, "{out}");
}

#[test]
fn failing_verification_exits_one() {
    let (code, out, _) = sm(&["verify", &fixture("d32_side8.txt"), "--ordering", "linear"]);
    assert_eq!(code, EXIT_FAILED);
    assert!(out.contains("verdict: not_magic"));
    let (code, _, _) = sm(&["verify", &fixture("d4_rect2x4.txt"), "--ordering", "any"]);
    assert_eq!(code, EXIT_OK);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(sm(&["gen"]).0, EXIT_USAGE);
    assert_eq!(sm(&["frobnicate"]).0, EXIT_USAGE);
    assert_eq!(sm(&["gen", "--m", "4", "--bogus"]).0, EXIT_USAGE);
    let (code, _, err) = sm(&["gen", "--m", "2"]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("no construction for m=2"));
    let (code, _, err) = sm(&["verify", "/nonexistent/file", "--ordering", "linear"]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("cannot read"));
    let bad = temp_file("bad.txt", "dihedral k=4 rows=1 cols=2\nr^0 r^9.s\n");
    let (code, _, err) = sm(&["verify", bad.to_str().unwrap(), "--ordering", "linear"]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("cell (0, 1)"), "{err}");
    assert_eq!(sm(&["--help"]).0, EXIT_OK);
}

#[test]
fn search_exit_codes() {
    let (code, out, _) = sm(&["search", "sms2"]);
    assert_eq!(code, EXIT_FAILED);
    assert!(out.contains("\"configurations_examined\": 24"));
    let (code, _, _) = sm(&["search", "sms2", "--group", "cyclic4"]);
    assert_eq!(code, EXIT_FAILED);
    let (code, out, _) = sm(&["search", "rect"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("\"kind\": \"found\""));
    let (code, _, _) = sm(&["search", "sms4", "--budget", "0"]);
    assert_eq!(code, EXIT_BUDGET);
    let (code, out, _) = sm(&["search", "linear", "--input", &fixture("d32_side8.txt"), "--budget", "20", "--seed", "9"]);
    assert_eq!(code, EXIT_BUDGET);
    assert!(out.contains("best_partial"));
    assert_eq!(sm(&["search", "linear"]).0, EXIT_USAGE);
}

#[test]
fn spectrum_and_selftest() {
    let (code, out, _) = sm(&["spectrum", "--m", "4", "--include-duals"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("constants: r^8 r^24\n"));
    assert!(out.contains("with duals: r^4 r^8 r^24\n"));
    let (code, out, _) = sm(&["selftest"]);
    assert_eq!(code, EXIT_OK, "{out}");
    assert_eq!(out.lines().filter(|l| l.starts_with("[PASS]")).count(), 12);
}
