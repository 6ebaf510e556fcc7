use std::process::{Command, Output};

fn nullcone(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nullcone"))
        .args(args)
        .env_remove("NULLCONE_SEED")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

#[test]
fn classify_inline_tuple() {
    let out = nullcone(&["classify", "[[0,0,0],[0,0,0],[1,0,0]];[[0,0,0],[2,0,0],[0,2,0]]"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.starts_with("B[inf,1/4]\n"), "{text}");
    assert!(text.contains("orbit dimension: 6"));
    assert!(text.contains("G-orbit: B[inf,1]"));
}

#[test]
fn classify_zero_and_json() {
    let out = nullcone(&[
        "--json",
        "classify",
        "[[0,0,0],[0,0,0],[0,0,0]];[[0,0,0],[0,0,0],[0,0,0]]",
    ]);
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["label"], "O");
    assert_eq!(v["orbit_dim"], 0);
    assert_eq!(v["stratum"], "beta5");
}

#[test]
fn classify_witness_is_printed() {
    let out = nullcone(&["--seed", "7", "classify", "A[2,3]", "--witness"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("witness: "));
}

#[test]
fn exit_codes() {
    // Not nilpotent.
    let out = nullcone(&["classify", "[[0,1,0],[0,0,0],[0,0,0]];[[0,0,0],[1,0,0],[0,0,0]]"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("not in nullcone"));
    // Bad label, excluded parameter, ragged matrix, unknown flag.
    assert_eq!(code(&nullcone(&["classify", "X"])), 3);
    assert_eq!(code(&nullcone(&["classify", "A[1,0]"])), 3);
    assert_eq!(code(&nullcone(&["classify", "[[0,0],[1]]"])), 3);
    assert_eq!(code(&nullcone(&["classify", "C", "--bogus"])), 3);
    assert_eq!(code(&nullcone(&["--help"])), 0);
}

#[test]
fn representative_document_round_trips() {
    let dir = std::env::temp_dir().join(format!("nullcone-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    for label in [
        "A[2,-1]",
        "A[1/2,inf]",
        "A[inf,3]",
        "B[0,1]",
        "B[inf,-2]",
        "C",
        "D",
        "E[5]",
        "E[inf]",
        "O",
    ] {
        let out = nullcone(&["rep", label]);
        assert_eq!(code(&out), 0, "{label}");
        let path = dir.join("doc.json");
        std::fs::write(&path, stdout(&out)).unwrap();
        let out = nullcone(&["classify", path.to_str().unwrap()]);
        assert_eq!(code(&out), 0, "{label}");
        assert_eq!(stdout(&out).lines().next(), Some(label));
    }
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn gfp_documents() {
    let out = nullcone(&["--prime", "101", "rep", "E[3]"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["field"], "gfp");
    assert_eq!(v["prime"], 101);
    assert_eq!(code(&nullcone(&["--prime", "100", "classify", "C"])), 3);
}

#[test]
fn compare_orders() {
    let out = nullcone(&["compare", "A[1,2]", "C"]);
    assert_eq!(stdout(&out).trim(), "true");
    let out = nullcone(&["compare", "C", "D"]);
    assert_eq!(stdout(&out).trim(), "false");
    let out = nullcone(&["compare", "D", "C", "--order", "hom"]);
    let text = stdout(&out);
    assert!(text.starts_with("false\nwitness: phi = [[x1, x2]]"), "{text}");
    let out = nullcone(&["compare", "A[0,1]", "E[inf]", "--group", "gl3h"]);
    assert_eq!(stdout(&out).trim(), "true");
    let out = nullcone(&["compare", "O", "C", "--group", "gl32"]);
    assert_eq!(stdout(&out).trim(), "false");
    assert_eq!(
        code(&nullcone(&["compare", "C", "D", "--order", "hom", "--group", "gl32"])),
        2
    );
}

#[test]
fn homdim_kronrank_deg2() {
    assert_eq!(stdout(&nullcone(&["homdim", "O", "O"])).trim(), "9");
    assert_eq!(stdout(&nullcone(&["kronrank", "C", "--phi", "x1"])).trim(), "1");
    let out = nullcone(&["kronrank", "D", "--pencil", "[[0]]", "[[1]]", "[[1]]"]);
    assert_eq!(stdout(&out).trim(), "1");
    let out = nullcone(&["deg2", "[[0,1],[0,0]];[[0,0],[0,0]]", "[[0,0],[0,0]];[[0,0],[0,0]]"]);
    assert_eq!(stdout(&out).trim(), "true");
    let out = nullcone(&["deg2", "[[0,0],[0,0]];[[0,0],[0,0]]", "[[0,1],[0,0]];[[0,0],[0,0]]"]);
    assert_eq!(stdout(&out).trim(), "false");
}

#[test]
fn export_hasse_diagrams() {
    let out = nullcone(&["export-hasse"]);
    let text = stdout(&out);
    assert!(text.starts_with("digraph "));
    assert!(text.contains("\"B[inf,l]\" -> \"E[inf]\";"));
    for d in ["gl3h", "gl32", "strata"] {
        let out = nullcone(&["export-hasse", "--diagram", d, "--format", "dot"]);
        assert_eq!(code(&out), 0);
        assert_eq!(stdout(&out).matches('{').count(), 1);
    }
}

#[test]
fn verify_paper_grids() {
    let out = nullcone(&["verify-paper", "--grid", "0"]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    assert!(stdout(&out).lines().all(|l| !l.starts_with("FAIL")));
    // Grids containing 0 and a nonzero value meet the locus where the printed
    // witness x2 - l*x1 for row A1 drops to rank 1 at the target.
    let out = nullcone(&["verify-paper", "--grid", "-1,0,1"]);
    assert_eq!(code(&out), 1);
    let fails: Vec<String> = stdout(&out)
        .lines()
        .filter(|l| l.starts_with("FAIL"))
        .map(String::from)
        .collect();
    assert_eq!(fails, ["FAIL orbit separation table (193/201)"]);
}

#[test]
fn seed_from_environment() {
    let a = Command::new(env!("CARGO_BIN_EXE_nullcone"))
        .args(["classify", "C", "--witness"])
        .env("NULLCONE_SEED", "11")
        .output()
        .unwrap();
    let b = nullcone(&["--seed", "11", "classify", "C", "--witness"]);
    assert_eq!(stdout(&a), stdout(&b));
}
