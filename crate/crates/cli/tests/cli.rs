use std::path::Path;
use std::process::Command;

fn ordaut(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_ordaut")).args(args).output().expect("runs");
    (
        out.status.code().expect("exit code"),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

const WORD_ORDER: &str = "presentation {\n  shape: w^2;\n  domain: gen:finite-words;\n  relation </2: gen:word-order;\n}\n";

#[test]
fn member_empty_word() {
    let dir = tempfile::tempdir().unwrap();
    let aut = dir.path().join("ex1.aut");
    let aut = aut.to_str().unwrap();
    assert_eq!(ordaut(&["gen", "finite-words", "-o", aut]).0, 0);
    let (code, out, _) = ordaut(&["member", aut, ""]);
    assert_eq!(code, 0);
    assert_eq!(out, "accepted: true\n");
}

#[test]
fn member_rejects_with_exit_one() {
    let (code, out, _) = ordaut(&["member", "gen:rank-probe:1", "", "--k", "2"]);
    assert_eq!(code, 1);
    assert_eq!(out, "accepted: false\n");
    assert_eq!(ordaut(&["member", "gen:rank-probe:1", "", "--k", "w"]).0, 0);
}

#[test]
fn cmpwords() {
    let (code, out, _) = ordaut(&["cmpwords", "a@4", "a@w", "--k", "2"]);
    assert_eq!((code, out.as_str()), (0, "LT\n"));
    let (_, out, _) = ordaut(&["cmpwords", "a@0,a@2", "a@1,a@2"]);
    assert_eq!(out, "LT\n");
    let (_, out, _) = ordaut(&["cmpwords", "a@w", "a@w"]);
    assert_eq!(out, "EQ\n");
}

#[test]
fn encode_and_decode() {
    let (code, out, _) = ordaut(&["enc", "w*2+3", "--k", "2"]);
    assert_eq!(code, 0);
    assert_eq!(out, "{a@0, a@1, a@2, a@w, a@w+1}\n");
    let (_, out, _) = ordaut(&["dec", "a@0,a@1,a@2,a@w,a@w+1", "--k", "2"]);
    assert_eq!(out, "w*2+3\n");
    assert_eq!(ordaut(&["enc", "w^w", "--k", "2"]).0, 2);
}

#[test]
fn gaps_and_behavior() {
    let (code, out, _) = ordaut(&["gaps", "gen:rank-probe:1", "w^2"]);
    assert_eq!((code, out.as_str()), (1, "relation: {}\n"));
    let (code, out, _) = ordaut(&["behavior", "gen:finite-words", "a@w", "0", "w+1"]);
    assert_eq!(code, 0);
    assert!(out.contains("(n, p)"), "{out}");
}

#[test]
fn generated_file_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let (_, text, _) = ordaut(&["gen", "rank-probe", "2"]);
    let p = write(dir.path(), "c2.aut", &text);
    let (code, out, _) = ordaut(&["member", &p, "", "--k", "2"]);
    assert_eq!((code, out.as_str()), (0, "accepted: true\n"));
}

#[test]
fn malformed_automaton_reports_position() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "bad.aut", "automaton {\n  states: p;\n  bogus: p;\n}\n");
    let (code, _, err) = ordaut(&["member", &p, ""]);
    assert_eq!(code, 2);
    assert!(err.contains("3:"), "{err}");
}

#[test]
fn fo_sentences_and_open_formulas() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "wo.pres", WORD_ORDER);
    let (code, out, _) = ordaut(&["fo", &p, "forall x forall y (x<y | y<x | x=y)"]);
    assert_eq!((code, out.as_str()), (0, "value: true\n"));
    let (code, out, _) = ordaut(&["fo", &p, "exists x (x < x)"]);
    assert_eq!((code, out.as_str()), (1, "value: false\n"));
    let (code, out, _) = ordaut(&["fo", &p, "exists y (y < x)"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("free: x\n"), "{out}");
    let f = write(dir.path(), "least.fo", "forall y (x < y | x = y)\n");
    let (code, out, _) = ordaut(&["fo", &p, &format!("@{f}")]);
    assert_eq!(code, 0);
    assert!(out.contains("witness x: {}"), "{out}");
    let (code, _, err) = ordaut(&["fo", &p, "exists x (x <"]);
    assert_eq!(code, 2);
    assert!(err.contains("column"), "{err}");
}

#[test]
fn presentation_errors() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "bad.pres", "presentation {\n  shape: w^2;\n  domain: gen:nope;\n}\n");
    let (code, _, err) = ordaut(&["fo", &p, "exists x (x = x)"]);
    assert_eq!(code, 2);
    assert!(err.contains("nope"), "{err}");
}

#[test]
fn decompose_interval() {
    let dir = tempfile::tempdir().unwrap();
    let pres = write(dir.path(), "wo.pres", WORD_ORDER);
    let args = [
        "decompose",
        &pres,
        "--edge",
        "<",
        "--param",
        "gen:interval",
        "--p",
        "(a,_)@w,(_,a)@w*2",
        "--cuts",
        "w,w*3",
        "--positions",
        "1,w,w+1,w*2,w*2+1,w*3+1",
    ];
    let (code, out, _) = ordaut(&args);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("verdict: tame\n"));
    assert!(out.contains("segments: 3\n"));
    let mut outside = args.to_vec();
    outside[7] = "(a,_)@0,(_,a)@w*2";
    assert_eq!(ordaut(&outside).0, 2);
}

#[test]
fn forest_ranks() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "t.forest", "node r\nnode a\nnode b # middle\nedge a b\nedge b r\n");
    let (code, out, _) = ordaut(&["rank", &p]);
    assert_eq!(code, 0);
    assert!(out.contains("rank r: 2\nrank a: 0\nrank b: 1\ntotal: 3\n"), "{out}");
    let cyc = write(dir.path(), "c.forest", "node a\nnode b\nedge a b\nedge b a\n");
    assert_eq!(ordaut(&["rank", &cyc]).0, 2);
}

#[test]
fn growth_sets_and_audit() {
    let (code, out, _) = ordaut(&["growth", "--m", "1", "--x", "0"]);
    assert_eq!(code, 0);
    assert!(out.contains("iterate.1: size=4 stated_bound=1 holds=false value_count_bound=4 holds=true"), "{out}");
    assert!(out.contains("elements: {0, 1, w, w+1}"));
    let dir = tempfile::tempdir().unwrap();
    let p = write(
        dir.path(),
        "enc.pres",
        "presentation { shape: w^2; domain: gen:enc-domain; relation succ/2: gen:enc-successor; }\n",
    );
    let (code, out, _) = ordaut(&["growth", "--audit", &p]);
    assert_eq!(code, 0);
    assert!(out.contains("verdict: contained"));
    assert_eq!(ordaut(&["growth", "--x", "w^w"]).0, 2);
}

#[test]
fn stabilization() {
    let (code, out, _) = ordaut(&["stab", "gen:finite-words"]);
    assert_eq!(code, 0);
    assert!(out.contains("stabilization_level: 1\n"));
}

#[test]
fn verify_suites() {
    let (code, out, _) = ordaut(&["verify", "stabilization"]);
    assert_eq!(code, 0);
    assert!(out.ends_with("result: pass\n"));
    let (_, again, _) = ordaut(&["verify", "stabilization", "--sequential"]);
    assert_eq!(out, again);
    let (code, out, _) = ordaut(&["verify", "list"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().count(), 10);
    assert_eq!(ordaut(&["verify", "growth"]).0, 1);
    assert_eq!(ordaut(&["verify", "nope"]).0, 2);
}

#[test]
fn usage_errors() {
    assert_eq!(ordaut(&[]).0, 2);
    assert_eq!(ordaut(&["member"]).0, 2);
    assert_eq!(ordaut(&["enc", "3", "--k", "x"]).0, 2);
}

#[test]
fn gen_list() {
    let (code, out, _) = ordaut(&["gen", "list"]);
    assert_eq!(code, 0);
    assert!(out.contains("rank-probe"));
    assert_eq!(ordaut(&["gen", "nope"]).0, 2);
}
