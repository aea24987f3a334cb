//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion; a failing
//! criterion is reported, not panicked on.

mod common;

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::Instant;

use common::{cycle_soundness, parity_difference_by_subsets, prism_soundness, random_graph, random_lists};
use fivelist::colorability::oracle::oracle_exact_colorable;
use fivelist::colorability::*;
use fivelist::graph::Graph;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

/// (circumference, candidates, max vertices) for 3..=10.
const CYCLE_TABLE: [(usize, usize, Option<usize>); 8] = [
    (3, 0, None),
    (4, 0, None),
    (5, 1, Some(6)),
    (6, 4, Some(9)),
    (7, 17, Some(11)),
    (8, 144, Some(14)),
    (9, 1259, Some(16)),
    (10, 12517, Some(19)),
];
const PRISM_COUNTS: [(usize, usize); 2] = [(1, 510), (2, 2719)];
/// Spacing bound the glue closure must never reach.
const SPACING_CEILING: usize = 5;
/// Oracle suites stop at this many vertices.
const ORACLE_MAX_N: usize = 9;
const PARITY_MAX_EDGES: usize = 12;
const PARITY_CORPUS: usize = 300;
const RANDOM_LIST_TRIALS: usize = 200;

struct Outcome {
    results: Vec<(String, bool)>,
}

impl Outcome {
    fn record(&mut self, id: &str, ok: bool, detail: impl AsRef<str>) {
        println!("{} {id}: {}", if ok { "PASS" } else { "FAIL" }, detail.as_ref());
        self.results.push((id.to_string(), ok));
    }
}

/// Runs the binary; on failure returns its stderr.
fn fivelist(args: &[&str]) -> Result<String, String> {
    let t = Instant::now();
    let o = Command::new(env!("CARGO_BIN_EXE_fivelist")).args(args).output().map_err(|e| e.to_string())?;
    eprintln!("  fivelist {} ({:.1}s)", args.join(" "), t.elapsed().as_secs_f64());
    if o.status.success() {
        Ok(String::from_utf8_lossy(&o.stdout).into_owned())
    } else {
        Err(String::from_utf8_lossy(&o.stderr).trim().to_string())
    }
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// `param -> (count, maxV)` from `stats` output.
fn stats(dir: &Path) -> Result<BTreeMap<usize, (usize, Option<usize>)>, String> {
    let text = fivelist(&["stats", s(dir)])?;
    let mut out = BTreeMap::new();
    for line in text.lines() {
        let f: Vec<&str> = line.split('\t').collect();
        let bad = || format!("bad stats line {line:?}");
        let param = f.first().and_then(|x| x.parse().ok()).ok_or_else(bad)?;
        let count = f.get(1).and_then(|x| x.parse().ok()).ok_or_else(bad)?;
        out.insert(param, (count, f.get(2).and_then(|x| x.parse().ok())));
    }
    Ok(out)
}

/// `name -> value` from tab-separated summary lines.
fn summary(text: &str) -> BTreeMap<String, String> {
    text.lines().filter_map(|l| l.split_once('\t')).map(|(k, v)| (k.to_string(), v.to_string())).collect()
}

fn cycle_rows(st: &BTreeMap<usize, (usize, Option<usize>)>, ls: std::ops::RangeInclusive<usize>) -> (bool, String) {
    let mut ok = true;
    let mut parts = Vec::new();
    for &(l, count, max_v) in CYCLE_TABLE.iter().filter(|r| ls.contains(&r.0)) {
        let got = st.get(&l).copied();
        ok &= got == Some((count, max_v));
        let shown = got.map_or("missing".into(), |(c, v)| format!("{c}/{}", v.map_or("-".into(), |v| v.to_string())));
        parts.push(format!("l={l} {shown}"));
    }
    (ok, parts.join(", "))
}

/// Class files of `a` that differ from `b`, byte for byte. Journals are skipped.
fn differing_classes(a: &Path, b: &Path) -> Vec<String> {
    let mut names: Vec<String> = fs::read_dir(a)
        .unwrap()
        .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
        .filter(|n| n != "journal.txt")
        .collect();
    names.sort();
    names.into_iter().filter(|n| fs::read(a.join(n)).ok() != fs::read(b.join(n)).ok()).collect()
}

fn alon_tarsi_suite() -> (bool, String) {
    let mut rng = StdRng::seed_from_u64(7);
    let mut parity_bad = 0;
    let mut checked = 0;
    while checked < PARITY_CORPUS {
        let n = rng.gen_range(2..8);
        let g = random_graph(&mut rng, n, 0.5);
        if g.m() > PARITY_MAX_EDGES {
            continue;
        }
        let arcs = g.edges().into_iter().map(|(u, v)| if rng.gen_bool(0.5) { (u, v) } else { (v, u) }).collect();
        let o = Orientation::new(n, arcs);
        parity_bad += (eulerian_parity_difference(&o) != parity_difference_by_subsets(&o)) as usize;
        checked += 1;
    }

    let mut wheel = Graph::empty(6).unwrap();
    for i in 1..6 {
        wheel.add_edge(0, i);
        wheel.add_edge(i, if i == 5 { 1 } else { i + 1 });
    }
    let cfg = AlonTarsiConfig::default();
    let wheel_certified = alon_tarsi_certify(&wheel, &SizeFunction(vec![5, 3, 3, 2, 2, 2]), &cfg);
    let c4_certified = alon_tarsi_certify(&Graph::cycle(4), &SizeFunction::constant(4, 2), &cfg);

    let mut rng = StdRng::seed_from_u64(11);
    let mut certified = 0;
    let mut unsound = 0;
    for _ in 0..400 {
        let n = rng.gen_range(1..9);
        let p = rng.gen_range(0.2..0.8);
        let g = random_graph(&mut rng, n, p);
        let sizes = SizeFunction((0..n).map(|_| rng.gen_range(1..5)).collect());
        if !(alon_tarsi_certify(&g, &sizes, &cfg) || greedy_certify(&g, &sizes)) {
            continue;
        }
        certified += 1;
        let bad =
            (0..RANDOM_LIST_TRIALS).any(|_| !oracle_exact_colorable(&g, &random_lists(&mut rng, &sizes.0, 6)).unwrap());
        unsound += bad as usize;
    }
    let ok = parity_bad == 0 && !wheel_certified && c4_certified && unsound == 0 && certified > 0;
    let detail = format!(
        "parity mismatches {parity_bad}/{PARITY_CORPUS} (m<={PARITY_MAX_EDGES}); wheel certified {wheel_certified}; \
         C4 s=2 certified {c4_certified}; certified graphs with an uncolorable random assignment {unsound}/{certified}"
    );
    (ok, detail)
}

fn main() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = |n: &str| -> PathBuf { tmp.path().join(n) };
    let mut out = Outcome { results: Vec::new() };

    // 1 and 2
    let c9 = dir("c9");
    match fivelist(&["gen-cycles", "--max-circ", "9", "--out", s(&c9), "--jobs", "1"]).and_then(|_| stats(&c9)) {
        Ok(st) => {
            let (ok, detail) = cycle_rows(&st, 3..=9);
            out.record("C1 cycle candidates l<=9 (exact)", ok, detail);
        }
        Err(e) => out.record("C1 cycle candidates l<=9 (exact)", false, e),
    }
    let c10 = dir("c10");
    let c10_ok = match fivelist(&["gen-cycles", "--max-circ", "10", "--out", s(&c10), "--jobs", "1"])
        .and_then(|_| stats(&c10))
    {
        Ok(st) => {
            let (ok, detail) = cycle_rows(&st, 10..=10);
            out.record("C2 cycle candidates l=10 (exact)", ok, detail);
            true
        }
        Err(e) => {
            out.record("C2 cycle candidates l=10 (exact)", false, e);
            false
        }
    };

    // 3
    let p2 = dir("p2");
    let p2_ok = c10_ok
        && match fivelist(&["gen-prisms", "--max-spacing", "2", "--cycles", s(&c10), "--out", s(&p2), "--jobs", "1"])
            .and_then(|_| stats(&p2))
        {
            Ok(st) => {
                let ok = PRISM_COUNTS.iter().all(|&(d, c)| st.get(&d).map(|x| x.0) == Some(c));
                let detail =
                    st.iter().map(|(d, (c, v))| format!("d={d} {c}/{}", v.unwrap_or(0))).collect::<Vec<_>>().join(", ");
                out.record("C3 prism candidates d=1,2 (exact)", ok, detail);
                true
            }
            Err(e) => {
                out.record("C3 prism candidates d=1,2 (exact)", false, e);
                false
            }
        };
    if !c10_ok {
        out.record("C3 prism candidates d=1,2 (exact)", false, "no cycle library");
    }

    // 4
    if p2_ok {
        let g2 = dir("g2");
        let args = ["glue-prisms", "--in", s(&p2), "--cycles", s(&c10), "--out", s(&g2), "--max-spacing", "2"];
        match fivelist(&args) {
            Ok(text) => {
                let m = summary(&text);
                let new = m.get("new").cloned().unwrap_or_default();
                let max = m.get("max-spacing").cloned().unwrap_or_default();
                let ok = new == "0" && max.parse::<usize>().map_or(max == "-", |d| d < SPACING_CEILING);
                let detail = format!(
                    "new {new}, largest surviving spacing {max}, examined {}, face-fill discards {}, over-limit {}",
                    m.get("examined").map_or("?", String::as_str),
                    m.get("face-fill-discards").map_or("?", String::as_str),
                    m.get("over-limit").map_or("?", String::as_str),
                );
                out.record("C4 glue closure adds nothing", ok, detail);
            }
            Err(e) => out.record("C4 glue closure adds nothing", false, e),
        }
    } else {
        out.record("C4 glue closure adds nothing", false, "no prism sets");
    }

    // 5
    if p2_ok {
        let tsv = dir("torus.tsv");
        match fivelist(&["glue-torus", "--in", s(&p2), "--out", s(&tsv), "--max-spacing", "2"]) {
            Ok(text) => {
                let m = summary(&text);
                let rows = fs::read_to_string(&tsv).unwrap_or_default();
                let is_k7 = rows.lines().filter(|l| l.split('\t').nth(1) == Some("is-K7")).count();
                let traced = rows
                    .lines()
                    .filter(|l| l.split('\t').nth(1) == Some("is-K7"))
                    .all(|l| l.split('\t').nth(3).is_some_and(|p| p.starts_with("S0:")));
                let unresolved = m.get("unresolved").cloned().unwrap_or_default();
                let counts: Vec<String> = m
                    .iter()
                    .filter(|(k, _)| !["unresolved", "k7-from-spacing"].contains(&k.as_str()))
                    .map(|(k, v)| format!("{k} {v}"))
                    .collect();
                let detail = format!(
                    "{} candidates: {}; unresolved {unresolved}; is-K7 rows {is_k7}; graphs isomorphic to K7 came from spacing {} \
                     and were classified by their K6",
                    rows.lines().count(),
                    counts.join(", "),
                    m.get("k7-from-spacing").map_or("?", String::as_str),
                );
                out.record("C5 torus dichotomy at d<=2", unresolved == "0" && traced, detail);
            }
            Err(e) => out.record("C5 torus dichotomy at d<=2", false, e),
        }
    } else {
        out.record("C5 torus dichotomy at d<=2", false, "no prism sets");
    }

    // 6
    let (cc, critical, cf) = cycle_soundness(9, ORACLE_MAX_N);
    let (pc, pf) = prism_soundness(1, ORACLE_MAX_N);
    out.record(
        "C6 oracle vs filter",
        cf.is_empty() && pf.is_empty(),
        format!(
            "{cc} cycle-canvases ({critical} oracle-critical) and {pc} prism-canvases with <= {ORACLE_MAX_N} vertices; \
             false discards {:?}",
            cf.iter().chain(&pf).collect::<Vec<_>>()
        ),
    );

    // 7
    let (ok, detail) = alon_tarsi_suite();
    out.record("C7 Alon-Tarsi suite", ok, detail);

    // 8
    let c10k = dir("c10-k2");
    let p2k = dir("p2-k2");
    let runs = fivelist(&["gen-cycles", "--max-circ", "10", "--out", s(&c10k), "--jobs", "2"]).and_then(|_| {
        fivelist(&["gen-prisms", "--max-spacing", "2", "--cycles", s(&c10k), "--out", s(&p2k), "--jobs", "2"])
    });
    match runs {
        Ok(_) if c10_ok && p2_ok => {
            let mut diff = differing_classes(&c10, &c10k);
            diff.extend(differing_classes(&c9, &c10k));
            diff.extend(differing_classes(&p2, &p2k));
            out.record("C8 1 vs 2 workers byte-identical", diff.is_empty(), format!("differing class files {diff:?}"));
        }
        Ok(_) => out.record("C8 1 vs 2 workers byte-identical", false, "single-worker runs missing"),
        Err(e) => out.record("C8 1 vs 2 workers byte-identical", false, e),
    }

    let failed: Vec<&str> = out.results.iter().filter(|r| !r.1).map(|r| r.0.as_str()).collect();
    println!(
        "{} of {} criteria pass{}",
        out.results.len() - failed.len(),
        out.results.len(),
        if failed.is_empty() { String::new() } else { format!("; failing: {}", failed.join(", ")) }
    );
}
