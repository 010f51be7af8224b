use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_chaingraph"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn validate() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "g.txt", "A -> B\nB -- C\n");
    let o = run(&["validate", s(&g)]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("components: {A} {B,C}"), "{out}");
    assert!(out.contains("chain: {A} {B,C}"), "{out}");

    let bad = write(&dir, "bad.txt", "A -> B\nB -> A\n");
    let o = run(&["validate", s(&bad)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));

    let empty = write(&dir, "empty.txt", "");
    assert_eq!(run(&["validate", s(&empty)]).status.code(), Some(0));

    let cyclic = write(&dir, "cyc.txt", "A -> B\nB -- C\nC -> A\n");
    let o = run(&["validate", s(&cyclic)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("chain graph: no"));
}

#[test]
fn separate() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "g.txt", "A -> B\nB -- C\nD -> C\n");
    let o = run(&["separate", s(&g), "--x", "A", "--y", "D", "--oracle", "all"]);
    assert_eq!((o.status.code(), stdout(&o).trim()), (Some(0), "true"));
    let o = run(&[
        "separate",
        s(&g),
        "--x",
        "A",
        "--y",
        "D",
        "--z",
        "B",
        "--oracle",
        "all",
    ]);
    assert_eq!((o.status.code(), stdout(&o).trim()), (Some(0), "false"));
    for oracle in ["reach", "brute", "moral"] {
        let o = run(&[
            "separate",
            s(&g),
            "--x",
            "A",
            "--y",
            "D",
            "--z",
            "B",
            "--oracle",
            oracle,
        ]);
        assert_eq!(stdout(&o).trim(), "false");
    }
    let ab = write(&dir, "ab.txt", "A -- B\n");
    let o = run(&["separate", s(&ab), "--x", "A", "--y", "B"]);
    assert_eq!(stdout(&o).trim(), "false");
    let o = run(&["separate", s(&ab), "--x", "A", "--y", "A"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn components_and_model() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "g.txt", "A -> B\nB -- C\nD -> C\n");
    let o = run(&["components", s(&g)]);
    assert_eq!(stdout(&o), "A\nB C\nD\n");
    let o = run(&["model", s(&g)]);
    assert_eq!(stdout(&o), "A ; C | B D\nA ; D |\nB ; D | A C\n");
    let o = run(&["model", s(&g), "--max-nodes", "3"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(
        run(&["model", s(&g), "--max-nodes", "0"]).status.code(),
        Some(1)
    );
}

#[test]
fn imap_check() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "g.txt", "A -> B\nB -- C\nD -> C\n");
    let o = run(&["imap-check", s(&g), s(&g)]);
    assert_eq!((o.status.code(), stdout(&o).trim()), (Some(0), "true"));
    let empty = write(&dir, "e.txt", "node A\nnode B\nnode C\nnode D\n");
    let o = run(&["imap-check", s(&empty), s(&g)]);
    assert_eq!(stdout(&o).trim(), "false");
}

#[test]
fn g2h_then_verify() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "g.txt", "A -> B\n");
    let h = write(&dir, "h.txt", "A -- B\n");
    let trace = dir.path().join("trace.jsonl");
    let o = run(&["g2h", s(&g), s(&h), "--out", s(&trace)]);
    assert_eq!(o.status.code(), Some(0));
    let text = fs::read_to_string(&trace).unwrap();
    let ops: Vec<&str> = text
        .lines()
        .filter(|l| l.contains("\"record\":\"op\""))
        .collect();
    assert_eq!(ops.len(), 1);
    assert!(ops[0].contains("\"kind\":\"merge\""));

    let o = run(&["verify-trace", s(&trace), s(&h)]);
    assert_eq!((o.status.code(), stdout(&o).trim()), (Some(0), "valid"));

    let o = run(&["verify-trace", s(&trace), s(&g)]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn verify_trace_rejects_tampering() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "g.txt", "A -> B\n");
    let h = write(&dir, "h.txt", "A -- B\n");
    let o = run(&["g2h", s(&g), s(&h)]);
    let text = stdout(&o);
    let mut lines: Vec<String> = text.lines().map(String::from).collect();
    lines.insert(
        1,
        r#"{"record":"op","kind":"delete-edge","edge":["A","B"]}"#.into(),
    );
    let tampered = write(&dir, "t.jsonl", &(lines.join("\n") + "\n"));
    let o = run(&["verify-trace", s(&tampered), s(&h)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("corrupt trace"));
}

#[test]
fn semi_directed_cycle_in_trace() {
    let dir = TempDir::new().unwrap();
    let h = write(&dir, "h.txt", "A -> B\nB -> C\nA -> C\n");
    let trace = concat!(
        r#"{"record":"header","initial":{"nodes":["A","B","C"],"directed":[["B","C"]],"undirected":[["A","C"]]},"chain":[["B"],["A","C"]]}"#,
        "\n",
        r#"{"record":"op","kind":"add-directed","edge":["A","B"]}"#,
        "\n",
        r#"{"record":"trailer","final_hash":"0"}"#,
        "\n"
    );
    let t = write(&dir, "t.jsonl", trace);
    let o = run(&["verify-trace", s(&t), s(&h)]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout(&o).trim(), "not a CG at step 1");
}

#[test]
fn b3_and_mimap() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "g.txt", "A -> B\n");
    let one = write(&dir, "one.txt", "A B\n");
    let trace = dir.path().join("b3.jsonl");
    let o = run(&["b3", s(&g), s(&one), "--trace", s(&trace)]);
    assert_eq!(stdout(&o), "A -- B\n");
    assert!(fs::read_to_string(&trace)
        .unwrap()
        .contains("\"kind\":\"merge\""));

    let o = run(&["mimap", s(&one), "--graph", s(&g)]);
    assert_eq!(stdout(&o), "A -- B\n");

    let model = write(&dir, "m.txt", "A ; B |\n");
    let two = write(&dir, "two.txt", "A\nB\n");
    let o = run(&["mimap", s(&two), "--model", s(&model)]);
    assert_eq!(
        (o.status.code(), stdout(&o)),
        (Some(0), "node A\nnode B\n".into())
    );
}

#[test]
fn fbsplit_and_fbmerge() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "g.txt", "A -- B\nB -- C\n");
    let ops = dir.path().join("ops.jsonl");
    let o = run(&[
        "fbsplit",
        s(&g),
        "--block",
        "A,B,C",
        "--part",
        "B",
        "--ops",
        s(&ops),
    ]);
    assert_eq!(stdout(&o), "A -> B\nC -> B\nA -- C\n");
    assert_eq!(fs::read_to_string(&ops).unwrap().lines().count(), 2);

    let g = write(&dir, "m.txt", "A -> B\n");
    let o = run(&["fbmerge", s(&g), "--left", "A", "--right", "B"]);
    assert_eq!(stdout(&o), "A -- B\n");
}

#[test]
fn failures_leave_no_output_file() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "g.txt", "A -- B\n");
    let h = write(&dir, "h.txt", "node A\nnode B\n");
    let out = dir.path().join("trace.jsonl");
    let o = run(&["g2h", s(&g), s(&h), "--out", s(&out)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("not an independence map"));
    assert!(!out.exists());
    let leftovers: Vec<_> = fs::read_dir(dir.path()).unwrap().collect();
    assert_eq!(leftovers.len(), 2);
}

#[test]
fn random_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let o = run(&["random", "--seed", "1", "--nodes", "1"]);
    assert_eq!(stdout(&o), "node A\n");

    let a = run(&[
        "random",
        "--seed",
        "9",
        "--nodes",
        "5",
        "--kind",
        "imap-pair",
    ]);
    let b = run(&[
        "random",
        "--seed",
        "9",
        "--nodes",
        "5",
        "--kind",
        "imap-pair",
    ]);
    assert_eq!(a.stdout, b.stdout);

    let (g, h) = (dir.path().join("g.txt"), dir.path().join("h.txt"));
    let o = run(&[
        "random",
        "--seed",
        "4",
        "--nodes",
        "5",
        "--kind",
        "imap-pair",
        "--out",
        s(&g),
        "--out-h",
        s(&h),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let o = run(&["imap-check", s(&h), s(&g)]);
    assert_eq!(stdout(&o).trim(), "true");
    let trace = dir.path().join("t.jsonl");
    run(&["g2h", s(&g), s(&h), "--out", s(&trace)]);
    let o = run(&["verify-trace", s(&trace), s(&h)]);
    assert_eq!(stdout(&o).trim(), "valid");

    assert_eq!(run(&["random", "--nodes", "0"]).status.code(), Some(1));
}
