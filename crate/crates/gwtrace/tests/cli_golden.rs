use gwtrace::cli::{EXIT_DOMAIN, EXIT_OK, EXIT_PARSE};
use gwtrace::run;
use serde_json::Value;

fn gw(args: &[&str]) -> (i32, String) {
    run(std::iter::once("gwtrace").chain(args.iter().copied()))
}

fn ok(args: &[&str]) -> String {
    let (code, out) = gw(args);
    assert_eq!(code, EXIT_OK, "{args:?}: {out}");
    out.trim_end().to_string()
}

#[test]
fn euler_values() {
    assert_eq!(ok(&["euler", "Flag(A2)", "--field", "F5"]), "6*<1>");
    assert_eq!(ok(&["euler", "Gm^3"]), "0");
    assert_eq!(ok(&["euler", "P^2"]), "3*<1>");
    assert_eq!(ok(&["euler", "GmodNT(G2)", "--field", "F13"]), "<1>");
    assert_eq!(ok(&["euler", "A^4 * Strat[pt, pt]"]), "2*<1>");
    assert_eq!(ok(&["euler", "TorusAction[T:P^1, N:Flag(A2)]"]), "2*<1>");
}

#[test]
fn gated_rules_are_domain_errors() {
    let (code, out) = gw(&["euler", "Flag(A2)", "--field", "F3"]);
    assert_eq!(code, EXIT_DOMAIN);
    assert!(out.contains("sqrt(-1)"), "{out}");
    assert_eq!(gw(&["euler", "P^1", "--field", "R"]).0, EXIT_DOMAIN);
    assert_eq!(gw(&["euler", "pt", "--field", "F15"]).0, EXIT_DOMAIN);
}

#[test]
fn parse_errors_report_positions() {
    let (code, out) = gw(&["euler", "P^2 * Flg(A2)"]);
    assert_eq!(code, EXIT_PARSE);
    assert!(out.contains("line 1, column 7"), "{out}");
    assert_eq!(gw(&["nonsense"]).0, EXIT_PARSE);
    assert_eq!(gw(&["--help"]).0, EXIT_OK);
}

#[test]
fn gw_arithmetic() {
    assert_eq!(ok(&["gw", "add", "<2>", "<3>", "--field", "Q"]), "<2> + <3>");
    assert_eq!(ok(&["gw", "mul", "<2>", "<3>", "--field", "Q"]), "<6>");
    assert_eq!(ok(&["gw", "sub", "<1>", "<1>", "--field", "Q"]), "0");
    assert_eq!(ok(&["gw", "equal", "<1> + <-1>", "2*<1>", "--field", "F5"]), "true");
    assert_eq!(ok(&["gw", "equal", "<1> + <-1>", "2*<1>", "--field", "F7"]), "false");
    assert_eq!(ok(&["gw", "equal", "<1> + <1>", "<2> + <2>", "--field", "Q"]), "true");
    assert_eq!(ok(&["gw", "neg", "-<2>", "--field", "Q"]), "<2>");
    assert_eq!(ok(&["gw", "scale", "-3", "<5>", "--field", "Q"]), "-3*<5>");
    assert_eq!(ok(&["gw", "hilbert", "-1", "-1", "--place", "2"]), "-1");
    assert_eq!(ok(&["gw", "hilbert", "2", "5", "--place", "5"]), "-1");
    assert_eq!(ok(&["gw", "hilbert", "-1", "-1", "--place", "inf"]), "-1");
    let inv = ok(&["gw", "invariants", "<1> + <1>", "--field", "R"]);
    assert!(inv.starts_with("rank: 2\n"), "{inv}");
    assert!(inv.contains("signature: 2"), "{inv}");
}

#[test]
fn weyl_and_transfer_queries() {
    assert_eq!(ok(&["weyl", "order", "E6"]), "51840");
    assert_eq!(ok(&["weyl", "lengths", "A2"]), "0: 1\n1: 2\n2: 2\n3: 1");
    assert_eq!(ok(&["weyl", "cosets", "A2", "--parabolic", "{1}"]).lines().count(), 3);
    assert_eq!(ok(&["dcoset", "torus", "B2"]).lines().count(), 8);
    assert_eq!(ok(&["dcoset", "torus", "A1"]), "C[e]\nC[s1]");
    assert_eq!(ok(&["dcoset", "maxrank", "A3", "--parabolic", "{1,3}"]).lines().count(), 6);
    assert_eq!(gw(&["dcoset", "maxrank", "A3"]).0, EXIT_DOMAIN);
    let report = ok(&["invariants-check", "B2", "--degree", "4"]);
    assert!(report.contains("image dims: [1,0,1,0,2]"), "{report}");
    assert!(report.contains("match: yes"), "{report}");
    assert_eq!(gw(&["invariants-check", "A1", "--degree", "13"]).0, EXIT_DOMAIN);
}

#[test]
fn smp_check_certificate() {
    let out = ok(&["smp-check", "3"]);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 18);
    assert!(lines.contains(&"f(2,1) . g(1,3) => Proj(1)"));
    assert_eq!(&lines[16..], ["TRIANGULAR: yes", "DIAGONAL: yes"]);
    assert_eq!(gw(&["smp-check", "13"]).0, EXIT_DOMAIN);
}

#[test]
fn selftest_is_seeded() {
    let a = ok(&["selftest", "--seed", "42", "--cases", "50"]);
    assert_eq!(a, ok(&["selftest", "--seed", "42", "--cases", "50"]));
    for line in a.lines() {
        assert!(line.ends_with("50/50"), "{line}");
    }
}

fn json(args: &[&str]) -> Value {
    let mut argv = vec!["--json"];
    argv.extend_from_slice(args);
    serde_json::from_str(&ok(&argv)).expect("valid JSON")
}

#[test]
fn json_agrees_with_text() {
    let cases: [&[&str]; 5] = [
        &["euler", "Flag(B2)", "--field", "F5"],
        &["gw", "add", "<2>", "<-2>", "--field", "Q"],
        &["gw", "mul", "<3>", "<3>", "--field", "F7"],
        &["euler", "PartialFlag(A3;{1})"],
        &["euler", "Gm * P^3"],
    ];
    for args in cases {
        let doc = json(args);
        assert_eq!(doc["result"]["element"].as_str().unwrap(), ok(args), "{args:?}");
        assert!(doc["metadata"]["field"].is_string());
    }
    let doc = json(&["euler", "Flag(A2)", "--field", "F5"]);
    assert_eq!(doc["command"], "euler");
    assert_eq!(doc["result"]["rank"], 6);
    assert_eq!(doc["metadata"]["p_inverted"], true);
    assert_eq!(json(&["euler", "pt"])["metadata"]["p_inverted"], false);

    let doc = json(&["dcoset", "maxrank", "B3", "--parabolic", "{1,2}"]);
    assert_eq!(doc["result"]["term_count"], 8);
    let doc = json(&["smp-check", "4"]);
    assert_eq!(doc["result"]["holds"], true);
    assert_eq!(doc["result"]["entries"][2][2], "Proj(2)");
    let doc = json(&["invariants-check", "A2", "--degree", "6"]);
    assert_eq!(doc["result"]["image_dims"], serde_json::json!([1, 0, 1, 1, 1, 1, 2]));
}

#[test]
fn json_errors_carry_exit_codes() {
    let (code, out) = gw(&["--json", "euler", "Flag(A2)", "--field", "F7"]);
    assert_eq!(code, EXIT_DOMAIN);
    let doc: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(doc["exit_code"], EXIT_DOMAIN);
}
