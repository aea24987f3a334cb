use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use fivelist::cycle_canvas::CycleCanvas;
use fivelist::store::serialize_cycle;

fn fivelist(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fivelist")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn arg(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// The record of `text` with vertex `v` renamed `perm[v]` and the key line dropped.
fn relabel_record(text: &str, perm: &[usize]) -> String {
    let map = |s: &str| {
        s.split_whitespace().map(|x| perm[x.parse::<usize>().unwrap()].to_string()).collect::<Vec<_>>().join(" ")
    };
    let mut head = Vec::new();
    let mut rots = Vec::new();
    for line in text.lines() {
        if let Some(rest) = line.strip_prefix("boundary:") {
            head.push(format!("boundary: {}", map(rest)));
        } else if let Some(rest) = line.strip_prefix("rot ") {
            let (v, nbrs) = rest.split_once(':').unwrap();
            let v = perm[v.parse::<usize>().unwrap()];
            rots.push((v, format!("rot {v}: {}", map(nbrs))));
        } else if !line.starts_with("key:") && !line.is_empty() {
            head.push(line.to_string());
        }
    }
    rots.sort();
    head.extend(rots.into_iter().map(|(_, l)| l));
    head.join("\n") + "\n"
}

#[test]
fn gen_cycles_then_stats() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("run");
    let o = fivelist(&["gen-cycles", "--max-circ", "7", "--out", arg(&out), "--jobs", "1"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let o = fivelist(&["stats", arg(&out)]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "3\t0\t-\n4\t0\t-\n5\t1\t6\n6\t4\t9\n7\t17\t11\n");
}

#[test]
fn check_and_canon_on_the_wheel() {
    let dir = tempfile::tempdir().unwrap();
    let text = serialize_cycle(&CycleCanvas::wheel5());
    let a = dir.path().join("a.txt");
    let b = dir.path().join("b.txt");
    fs::write(&a, &text).unwrap();
    fs::write(&b, relabel_record(&text, &[3, 4, 0, 1, 2, 5])).unwrap();

    let o = fivelist(&["check", "--input", arg(&b)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("\tPossiblyCritical\t"), "{}", stdout(&o));

    let ka = stdout(&fivelist(&["canon", "--input", arg(&a)]));
    let kb = stdout(&fivelist(&["canon", "--input", arg(&b)]));
    assert_eq!(ka, kb);
    assert_eq!(ka.trim(), CycleCanvas::wheel5().key().to_hex());
}

#[test]
fn malformed_input_fails() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.txt");
    for text in ["cycle 6 10 5\nboundary: 0 1 2 3 4\nrot 0: 1 9\n", "prism x y z\n", "cycle 6 10 5\nboundary: 0 1 2\n"]
    {
        fs::write(&bad, text).unwrap();
        let o = fivelist(&["check", "--input", arg(&bad)]);
        assert!(!o.status.success(), "accepted {text:?}");
        assert!(!o.stderr.is_empty());
    }
    // an empty file is an empty class
    fs::write(&bad, "").unwrap();
    let o = fivelist(&["check", "--input", arg(&bad)]);
    assert!(o.status.success() && o.stdout.is_empty());
    // a wrong key is an error, not a silent fix
    let key = CycleCanvas::wheel5().key().to_hex();
    let flipped = match key.strip_prefix('0') {
        Some(rest) => format!("1{rest}"),
        None => format!("0{}", &key[1..]),
    };
    let text = serialize_cycle(&CycleCanvas::wheel5()).replace(&key, &flipped);
    assert_ne!(text, serialize_cycle(&CycleCanvas::wheel5()));
    fs::write(&bad, text).unwrap();
    assert!(!fivelist(&["canon", "--input", arg(&bad)]).status.success());
}

#[test]
fn bad_arguments_fail() {
    assert!(!fivelist(&["gen-cycles", "--max-circ", "5", "--frobnicate"]).status.success());
    assert!(!fivelist(&["no-such-command"]).status.success());
    assert!(!fivelist(&["stats"]).status.success());
    assert!(!fivelist(&["check", "--input", "/nonexistent/file"]).status.success());
}

#[test]
fn prisms_need_a_complete_library() {
    let dir = tempfile::tempdir().unwrap();
    let cycles = dir.path().join("cycles");
    assert!(fivelist(&["gen-cycles", "--max-circ", "6", "--out", arg(&cycles)]).status.success());
    let out = dir.path().join("prisms");
    let o = fivelist(&["gen-prisms", "--max-spacing", "1", "--cycles", arg(&cycles), "--out", arg(&out)]);
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("circumference"), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn small_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let cycles = dir.path().join("cycles");
    let prisms = dir.path().join("prisms");
    let glued = dir.path().join("glued");
    let report = dir.path().join("torus.tsv");
    assert!(fivelist(&["gen-cycles", "--max-circ", "8", "--out", arg(&cycles)]).status.success());
    let o = fivelist(&["gen-prisms", "--max-spacing", "1", "--cycles", arg(&cycles), "--out", arg(&prisms)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(stdout(&fivelist(&["stats", arg(&prisms)])), "0\t14\t8\n1\t510\t12\n");

    let o = fivelist(&[
        "glue-prisms",
        "--in",
        arg(&prisms),
        "--cycles",
        arg(&cycles),
        "--out",
        arg(&glued),
        "--max-spacing",
        "1",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("new\t0\n"), "{}", stdout(&o));

    let o = fivelist(&["glue-torus", "--in", arg(&prisms), "--out", arg(&report), "--max-spacing", "1"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("unresolved\t0\n"), "{}", stdout(&o));
    let rows = fs::read_to_string(&report).unwrap();
    assert!(rows.lines().all(|l| l.split('\t').count() == 4));
}
