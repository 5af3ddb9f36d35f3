use std::process::Command;

use braidbound::symprod::elementary_model;
use braidbound::BoundReport;

const LINK: [&str; 8] = ["--k", "2", "--g", "1", "--p", "1", "--lambda", "2/5"];
const LINK2: [&str; 8] = ["--k", "2", "--g", "1", "--p", "2", "--lambda", "2/5"];

struct Output {
    code: i32,
    out: String,
    err: String,
}

fn run(cmd: &str, link: &[&str], extra: &[&str]) -> Output {
    let mut args = vec!["braidbound", cmd];
    args.extend_from_slice(link);
    args.extend_from_slice(extra);
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = braidbound_cli::run(args, &mut out, &mut err);
    Output {
        code,
        out: String::from_utf8(out).unwrap(),
        err: String::from_utf8(err).unwrap(),
    }
}

fn field<'a>(text: &'a str, label: &str) -> &'a str {
    text.lines()
        .find_map(|l| l.strip_prefix(label))
        .map(str::trim)
        .unwrap_or_else(|| panic!("no {label} line in {text}"))
}

#[test]
fn bound_on_a_single_crossing() {
    let o = run("bound", &LINK, &["--word", "s1"]);
    assert_eq!(o.code, 0, "{}", o.err);
    assert_eq!(field(&o.out, "half_bound"), "1/180");
    assert_eq!(field(&o.out, "f_max"), "1/90");
    assert_eq!(field(&o.out, "witness"), "v1=(0/1) v2=(1/5)");
}

#[test]
fn empty_word_has_zero_bound() {
    let o = run("bound", &LINK, &["--word", ""]);
    assert_eq!(o.code, 0, "{}", o.err);
    assert_eq!(field(&o.out, "half_bound"), "0/1");
}

#[test]
fn json_reports_round_trip() {
    for word in ["s1", "", "a1^3 c1 s1^-2", "s1 s1 a1^-1"] {
        let o = run("bound", &LINK, &["--word", word, "--json"]);
        assert_eq!(o.code, 0, "{}", o.err);
        let text = o.out.trim_end();
        let report: BoundReport = serde_json::from_str(text).unwrap();
        assert_eq!(serde_json::to_string(&report).unwrap(), text);
    }
    let others = [
        run("eval", &LINK2, &["--word", "z1 s1", "--v1", "1/10,0", "--v2", "0,1/5", "--json"]),
        run("maximize", &LINK2, &["--word", "a1 z1^-2", "--vertices", "--json"]),
        run("intersect", &[], &["--model", "elementary", "--grid", "16", "--json"]),
    ];
    for o in others {
        assert_eq!(o.code, 0, "{}", o.err);
        let text = o.out.trim_end();
        let value: serde_json::Value = serde_json::from_str(text).unwrap();
        assert_eq!(serde_json::to_string(&value).unwrap(), text);
    }
}

#[test]
fn eval_matches_generator_value() {
    // f(s1) = -(eta_2 - eta_1)/(k+g); eta moves by -1/30 from 0 to 1/5.
    let o = run("eval", &LINK, &["--word", "s1", "--v1", "0", "--v2", "1/5", "--json"]);
    assert_eq!(o.code, 0, "{}", o.err);
    let v: serde_json::Value = serde_json::from_str(&o.out).unwrap();
    assert_eq!(v["value"], "1/90");
    assert_eq!(v["eta_diff"], "-1/30");
}

#[test]
fn maximize_reports_both_maxima() {
    let o = run("maximize", &LINK2, &["--word", "a1 z1^-2", "--json"]);
    assert_eq!(o.code, 0, "{}", o.err);
    let v: serde_json::Value = serde_json::from_str(&o.out).unwrap();
    assert_eq!(v["closed"]["value"], v["lp"]["value"]);
    assert_eq!(v["agree"], true);
    assert!(v.get("vertices").is_none());
}

#[test]
fn expand_prints_last_boundary_loop() {
    let o = run("expand", &LINK2, &["--word", "c1^2 s1"]);
    assert_eq!(o.code, 0, "{}", o.err);
    assert_eq!(field(&o.out, "expanded"), "b1^-1 a1^2 b1 s1");
    assert_eq!(field(&o.out, "z2 "), "c1 a1^-1 s1^2 z1^-1");
}

#[test]
fn relation_checks_pass() {
    let o = run("check-relations", &LINK2, &[]);
    assert_eq!(o.code, 0, "{}{}", o.out, o.err);
    assert!(o.out.lines().all(|l| l.starts_with("[PASS]")), "{}", o.out);
    let o = run("check-relations", &["--k", "4", "--g", "2", "--p", "3", "--lambda", "2/9"], &["--seed", "3"]);
    assert_eq!(o.code, 0, "{}{}", o.out, o.err);
}

#[test]
fn config_file_and_flag_override() {
    let dir = std::env::temp_dir().join(format!("braidbound-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("link.json");
    std::fs::write(&path, r#"{"k":2,"g":1,"p":1,"lambda":"2/5"}"#).unwrap();
    let cfg = path.to_str().unwrap();
    let o = run("bound", &["--config", cfg], &["--word", "s1"]);
    assert_eq!(field(&o.out, "half_bound"), "1/180");
    // Overriding k alone leaves lambda outside the admissible range.
    let o = run("bound", &["--config", cfg, "--k", "3"], &["--word", "s1"]);
    assert_eq!(o.code, 2);
    std::fs::write(&path, r#"{"k":2,"g":1,"p":1,"lambda":"2/5","colour":1}"#).unwrap();
    let o = run("bound", &["--config", cfg], &["--word", "s1"]);
    assert_eq!(o.code, 2);
    assert!(o.err.starts_with("error:"));
}

#[test]
fn usage_errors_exit_two() {
    let cases: [(&str, &[&str], &[&str]); 6] = [
        ("bound", &LINK, &[]),
        ("bound", &LINK, &["--word", "b1"]),
        ("bound", &LINK, &["--word", "s2"]),
        ("bound", &["--k", "2", "--g", "1", "--p", "1", "--lambda", "1"], &["--word", "s1"]),
        ("eval", &LINK, &["--word", "s1", "--v1", "1/2", "--v2", "0"]),
        ("frobnicate", &[], &[]),
    ];
    for (cmd, link, extra) in cases {
        let o = run(cmd, link, extra);
        assert_eq!(o.code, 2, "{cmd} {extra:?}");
        assert!(o.err.starts_with("error:"), "{}", o.err);
        assert!(o.out.is_empty());
    }
}

#[test]
fn intersect_models() {
    let o = run("intersect", &[], &["--model", "elementary", "--grid", "32"]);
    assert_eq!(o.code, 0, "{}", o.err);
    assert_eq!(field(&o.out, "signed total"), "1");
    let o = run("intersect", &[], &["--model", "sigma", "--grid", "64"]);
    assert_eq!(o.code, 0, "{}", o.err);
    assert_eq!(field(&o.out, "signed total"), "-1");
    assert_eq!(field(&o.out, "boundary winding"), "-1");
    let o = run("intersect", &[], &["--model", "elementary", "--tol", "0"]);
    assert_eq!(o.code, 2);
}

#[test]
fn intersect_reads_homotopy_files() {
    let dir = std::env::temp_dir().join(format!("braidbound-h-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("h.json");
    std::fs::write(&path, elementary_model(9, 9).unwrap().to_json()).unwrap();
    let o = run("intersect", &[], &["--homotopy", path.to_str().unwrap(), "--json"]);
    assert_eq!(o.code, 0, "{}", o.err);
    let v: serde_json::Value = serde_json::from_str(&o.out).unwrap();
    assert_eq!(v["total"], 1);

    // Zero sitting on the boundary of the square is a failed check, not a usage error.
    let h = braidbound::symprod::Homotopy::from_discriminant(8, 8, |s, t| {
        num_complex::Complex64::new(s, t - 0.5)
    })
    .unwrap();
    std::fs::write(&path, h.to_json()).unwrap();
    let o = run("intersect", &[], &["--homotopy", path.to_str().unwrap()]);
    assert_eq!(o.code, 1);
    assert!(o.err.starts_with("error:"), "{}", o.err);

    std::fs::write(&path, "{\"M\":1}").unwrap();
    let o = run("intersect", &[], &["--homotopy", path.to_str().unwrap()]);
    assert_eq!(o.code, 2);
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_braidbound");
    let ok = Command::new(bin)
        .args(["bound", "--k", "2", "--g", "1", "--p", "1", "--lambda", "2/5", "--word", "s1"])
        .output()
        .unwrap();
    assert_eq!(ok.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&ok.stdout).contains("1/180"));
    let bad = Command::new(bin).args(["bound", "--word", "s1"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad.stderr).starts_with("error:"));
}
