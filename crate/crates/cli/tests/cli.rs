use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../core/tests/fixtures")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn fixture_names() -> Vec<String> {
    let mut names: Vec<String> = std::fs::read_dir(fixture(""))
        .unwrap()
        .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
        .collect();
    names.sort();
    names
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_netdyn"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn eval_answers_through_exit_code() {
    let mt = fixture("mt.json");
    let yes = run(&["eval", &mt, "[diff] has(b,f)"]);
    assert_eq!(yes.status.code(), Some(0));
    assert_eq!(stdout(&yes), "true\n");
    let no = run(&["eval", &mt, "has(b,f)"]);
    assert_eq!(no.status.code(), Some(1));
    assert_eq!(stdout(&no), "false\n");
    let bad = run(&["eval", &mt, "has(b,"]);
    assert_eq!(bad.status.code(), Some(2));
    assert!(stderr(&bad).starts_with("error:"));
    let unknown = run(&["eval", &mt, "has(z,f)"]);
    assert_eq!(unknown.status.code(), Some(2));
}

#[test]
fn update_and_stabilize_print_documents() {
    let mt = fixture("mt.json");
    let out = run(&["update", &mt, "--seq", "diff"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let dir = tempfile::tempdir().unwrap();
    let next = dir.path().join("next.json");
    std::fs::write(&next, &text).unwrap();
    let check = run(&["eval", next.to_str().unwrap(), "has(b,f)"]);
    assert_eq!(check.status.code(), Some(0));

    let st = run(&["stabilize", &mt, "--op", "net"]);
    assert_eq!(st.status.code(), Some(0));
    assert!(stderr(&st).contains("steps: 1"));
    assert!(run(&["update", &mt, "--seq", "later"]).status.code() == Some(2));
}

#[test]
fn reduce_prints_static_formula() {
    let mt = fixture("mt.json");
    let out = run(&["reduce", "--model", &mt, "[net] has(a,f)"]);
    assert_eq!(stdout(&out), "has(a,f)\n");
    let traced = run(&["reduce", "--model", &mt, "--trace", "[sync] N(a,b)"]);
    assert_eq!(stdout(&traced), "N(a,b) | sim(a,b)\n");
    assert!(!stderr(&traced).is_empty());
    let expanded = run(&["reduce", "--model", &mt, "--expand", "[sync] N(a,b)"]);
    assert!(!stdout(&expanded).contains("sim("));
}

#[test]
fn equiv_reports_a_difference() {
    let mt = fixture("mt.json");
    let same = run(&["equiv", &mt, "--seq1", "sync", "--seq2", "diff,net"]);
    assert_eq!(same.status.code(), Some(0));
    assert_eq!(stdout(&same), "equivalent\n");
    let differ = run(&["equiv", &mt, "--seq1", "sync", "--seq2", "diff"]);
    assert_eq!(differ.status.code(), Some(1));
    assert!(stdout(&differ).starts_with("differ at "));
}

#[test]
fn replace_verdicts() {
    let mt = run(&["replace", &fixture("mt.json")]);
    assert_eq!(mt.status.code(), Some(0));
    assert_eq!(stdout(&mt), "diff,net\n");
    let w = run(&["replace", &fixture("irreplaceable_3x3.json")]);
    assert_eq!(w.status.code(), Some(1));
    assert_eq!(
        stdout(&w),
        "irreplaceable: psi_diff, psi_net, psi_diffnet, psi_netdiff(1), psi_netdiff(2)\n"
    );
    // the mode flag overrides the document
    let lit = run(&["--mode", "literal", "replace", &fixture("identity.json")]);
    assert_eq!(stdout(&lit), "net\n");
}

#[test]
fn replace_and_oracle_agree_on_fixtures() {
    for name in fixture_names() {
        let path = fixture(&name);
        let r = run(&["replace", &path]);
        let o = run(&["oracle", &path]);
        assert_eq!(r.status.code(), o.status.code(), "{name}");
        assert_ne!(r.status.code(), Some(2), "{name}");
    }
}

#[test]
fn repeated_sync() {
    let id = run(&["replace-multi", &fixture("identity.json"), "--m", "2"]);
    assert_eq!(id.status.code(), Some(0));
    assert_eq!(stdout(&id), "diff,diff\n");
    let late = run(&[
        "replace-multi",
        &fixture("late_irreplaceable.json"),
        "--m",
        "2",
    ]);
    assert_eq!(late.status.code(), Some(1));
    assert_eq!(stdout(&late), "none\n");
    let quiet = run(&[
        "-q",
        "replace-multi",
        &fixture("late_irreplaceable.json"),
        "--m",
        "2",
    ]);
    assert!(stderr(&quiet).is_empty());
}

#[test]
fn counterexample_search_is_deterministic() {
    let args = [
        "search-counterexample",
        "--agents",
        "3",
        "--features",
        "3",
        "--omega",
        "1/2",
        "--tau",
        "1/2",
    ];
    let first = run(&args);
    assert_eq!(first.status.code(), Some(0));
    assert!(stderr(&first).contains("examined 37 candidates"));
    let second = run(&args);
    assert_eq!(stdout(&first), stdout(&second));
    let on_disk = std::fs::read_to_string(fixture("irreplaceable_3x3.json")).unwrap();
    assert_eq!(stdout(&first), on_disk);

    let mut starved = args.to_vec();
    starved.extend(["--budget", "1", "--seed", "1"]);
    assert_eq!(run(&starved).status.code(), Some(1));
    let bad = run(&[
        "search-counterexample",
        "--agents",
        "3",
        "--features",
        "3",
        "--omega",
        "3/2",
        "--tau",
        "1/2",
    ]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn dot_export() {
    let out = run(&["export-dot", &fixture("mt.json")]);
    assert_eq!(
        stdout(&out),
        "digraph model {\n  a [label=\"a {f}\"];\n  b [label=\"b {}\"];\n  a -> b;\n}\n"
    );
    let missing = run(&["export-dot", "/nonexistent/model.json"]);
    assert_eq!(missing.status.code(), Some(2));
}
