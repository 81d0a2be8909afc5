use std::process::{Command, Output};

use cfsum::cfrac::{parse_xi, DigitWord};
use cfsum::exactnum::parse_surd;
use serde_json::Value;

fn cfsum(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cfsum")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let mut full = vec!["--format", "json"];
    full.extend_from_slice(args);
    let out = cfsum(&full);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v: Value = serde_json::from_slice(&out.stdout).expect("valid JSON");
    assert_eq!(v["schema"], 1);
    v
}

fn text(v: &Value) -> &str {
    v.as_str().expect("string field")
}

#[test]
fn expand_golden_ratio() {
    let v = json(&["expand", "(1+sqrt(5))/2"]);
    assert_eq!(v["command"], "expand");
    assert_eq!(v["word"], "[;1]");
    let w = DigitWord::parse(text(&v["word"])).unwrap();
    assert_eq!(cfsum::cfrac::surd_from_expansion(&w).unwrap(), parse_surd("(1+sqrt(5))/2").unwrap());
}

#[test]
fn errorsum_silver_ratio() {
    let v = json(&["errorsum", "[;2]", "--s", "2"]);
    let f = parse_surd(text(&v["f"]["exact"])).unwrap();
    assert_eq!(f, parse_surd("1+sqrt(2)").unwrap());
    let xi = parse_surd(text(&v["xi"]["exact"])).unwrap();
    assert_eq!(f, xi);
    let v = json(&["errorsum", "[;2]", "--s", "3"]);
    assert_eq!(parse_surd(text(&v["f"]["exact"])).unwrap(), parse_surd("(8+5*sqrt(2))/7").unwrap());
}

#[test]
fn errorsum_fractional_exponent_is_numeric() {
    let v = json(&["errorsum", "[;1]", "--s", "3/2"]);
    assert_eq!(v["mode"], "numeric");
    let out = cfsum(&["errorsum", "[;1]", "--s", "1/2"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn pell_for_six() {
    let v = json(&["pell", "--xi", "[;2,4]", "--n", "2"]);
    let sols = v["solutions"].as_array().unwrap();
    let pairs: Vec<(&str, &str)> = sols.iter().map(|s| (text(&s["x"]), text(&s["y"]))).collect();
    assert_eq!(pairs, [("1", "0"), ("5", "2"), ("49", "20")]);
    for s in sols {
        let x: i64 = text(&s["x"]).parse().unwrap();
        let y: i64 = text(&s["y"]).parse().unwrap();
        assert_eq!(x * x - 6 * y * y, 1);
    }
}

#[test]
fn unit_round_trips() {
    let v = json(&["unit", "[;1,1,1,4]"]);
    assert_eq!(parse_surd(text(&v["u"]["exact"])).unwrap(), parse_surd("8+3*sqrt(7)").unwrap());
    assert_eq!(v["norm"], 1);
    let (xi, _) = parse_xi(text(&v["xi"]["exact"])).unwrap();
    assert_eq!(xi, cfsum::cfrac::surd_from_word(&[1, 1, 1, 4].map(Into::into)).unwrap());
}

#[test]
fn euler_instances() {
    let v = json(&["euler", "--instance", "pi", "--terms", "200"]);
    assert_eq!(v["command"], "euler");
    let v = json(&["euler", "--instance", "ln2", "--terms", "200"]);
    assert_eq!(v["command"], "euler");
}

#[test]
fn jpa_cubic_verifies() {
    let v = json(&["jpa", "--poly", "1,-4,0,-1", "--steps", "8", "--verify"]);
    assert_eq!(v["dimension"], 3);
    assert_eq!(v["digits"][0], serde_json::json!(["4", "16"]));
    assert_eq!(v["digits"][1], serde_json::json!(["8", "16"]));
}

#[test]
fn table_format_is_default() {
    let out = cfsum(&["expand", "[1;2]"]);
    assert_eq!(out.status.code(), Some(0));
    let s = String::from_utf8(out.stdout).unwrap();
    assert!(s.contains("[1;2]"), "{s}");
}

#[test]
fn exit_codes() {
    assert_eq!(cfsum(&["expand", "(1+sqrt(4))/2"]).status.code(), Some(2));
    assert_eq!(cfsum(&["unit", "[1;2]"]).status.code(), Some(2));
    assert_eq!(cfsum(&["expand", "nonsense"]).status.code(), Some(2));
    assert_eq!(cfsum(&["expand", "[;1]", "--bogus"]).status.code(), Some(64));
    assert_eq!(cfsum(&["frobnicate"]).status.code(), Some(64));
    assert_eq!(cfsum(&["--help"]).status.code(), Some(0));
}

#[test]
fn domain_error_names_precondition() {
    let out = cfsum(&["--format", "json", "errorsum", "[1;2]"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["schema"], 1);
    assert_eq!(v["error"]["kind"], "domain");
}

#[test]
fn verify_is_reproducible() {
    let args = ["--format", "json", "verify", "--seed", "7", "--cases", "12"];
    let a = cfsum(&args);
    let b = cfsum(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}
