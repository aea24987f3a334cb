//! Text records, the on-disk candidate store and its progress journal.
//!
//! A record is
//! ```text
//! cycle 6 10 5
//! boundary: 0 1 2 3 4
//! rot 0: 1 5 4
//! ...
//! key: <hex>
//! ```
//! with two `boundary:` lines for prisms. Records in a file are separated by blank lines.

use std::collections::{BTreeMap, HashSet};
use std::fs::{self, File, OpenOptions};
use std::io::Write;
use std::path::{Path, PathBuf};

use crate::cycle_canvas::CycleCanvas;
use crate::error::{io_err, Error, Result};
use crate::graph::Graph;
use crate::plane_graph::PlaneGraph;
use crate::prism_canvas::PrismCanvas;
use crate::work::{ClassSink, Discard};

#[derive(Clone, Debug)]
pub enum Record {
    Cycle(CycleCanvas),
    Prism(PrismCanvas),
    /// An abstract graph glued from a prism-canvas of spacing `spacing`; `key` names it.
    Torus {
        graph: Graph,
        spacing: usize,
        key: String,
    },
}

impl Record {
    pub fn key_hex(&self) -> String {
        match self {
            Record::Cycle(c) => c.key().to_hex(),
            Record::Prism(p) => p.key().to_hex(),
            Record::Torus { key, .. } => key.clone(),
        }
    }

    pub fn n(&self) -> usize {
        match self {
            Record::Cycle(c) => c.n(),
            Record::Prism(p) => p.n(),
            Record::Torus { graph, .. } => graph.n(),
        }
    }

    pub fn to_text(&self) -> String {
        match self {
            Record::Cycle(c) => serialize_cycle(c),
            Record::Prism(p) => serialize_prism(p),
            Record::Torus { graph, spacing, key } => {
                let mut s = format!("torus {} {} {}\n", graph.n(), graph.m(), spacing);
                for v in 0..graph.n() {
                    s.push_str(&format!("rot {v}:{}\n", join(graph.neighbors(v))));
                }
                s.push_str(&format!("key: {key}\n"));
                s
            }
        }
    }
}

fn join(it: impl IntoIterator<Item = usize>) -> String {
    it.into_iter().map(|v| format!(" {v}")).collect()
}

fn rotation_lines(g: &PlaneGraph) -> String {
    (0..g.n()).map(|v| format!("rot {v}:{}\n", join(g.rotation(v).iter().copied()))).collect()
}

pub fn serialize_cycle(c: &CycleCanvas) -> String {
    let g = c.graph();
    format!(
        "cycle {} {} {}\nboundary:{}\n{}key: {}\n",
        g.n(),
        g.m(),
        c.circumference(),
        join(c.boundary().iter().copied()),
        rotation_lines(g),
        c.key().to_hex()
    )
}

pub fn serialize_prism(p: &PrismCanvas) -> String {
    let g = p.graph();
    format!(
        "prism {} {} {}\nboundary:{}\nboundary:{}\n{}key: {}\n",
        g.n(),
        g.m(),
        p.spacing(),
        join(p.t1()),
        join(p.t2()),
        rotation_lines(g),
        p.key().to_hex()
    )
}

fn perr(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

fn numbers(s: &str, line: usize) -> Result<Vec<usize>> {
    s.split_whitespace().map(|x| x.parse().map_err(|_| perr(line, format!("bad number `{x}`")))).collect()
}

/// Parses every record in `text`. A `key:` line is optional; when present it must
/// match the recomputed key.
pub fn parse_records(text: &str) -> Result<Vec<Record>> {
    let mut out = Vec::new();
    let lines: Vec<(usize, &str)> = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())).collect();
    let mut i = 0;
    while i < lines.len() {
        if lines[i].1.is_empty() {
            i += 1;
            continue;
        }
        let start = i;
        while i < lines.len() && !lines[i].1.is_empty() {
            i += 1;
        }
        out.push(parse_one(&lines[start..i])?);
    }
    if out.is_empty() {
        return Err(perr(1, "no records"));
    }
    Ok(out)
}

fn parse_one(lines: &[(usize, &str)]) -> Result<Record> {
    let (hl, header) = lines[0];
    let parts: Vec<&str> = header.split_whitespace().collect();
    let [kind, n, m, param] = parts[..] else { return Err(perr(hl, "expected `kind n m param`")) };
    let [n, m, param] = [n, m, param].map(|x| x.parse::<usize>().map_err(|_| perr(hl, format!("bad number `{x}`"))));
    let (n, m, param) = (n?, m?, param?);
    let mut boundaries = Vec::new();
    let mut rot = vec![None; n];
    let mut key = None;
    for &(ln, l) in &lines[1..] {
        if let Some(rest) = l.strip_prefix("boundary:") {
            boundaries.push(numbers(rest, ln)?);
        } else if let Some(rest) = l.strip_prefix("rot ") {
            let (v, nbrs) = rest.split_once(':').ok_or_else(|| perr(ln, "expected `rot v: ...`"))?;
            let v: usize = v.trim().parse().map_err(|_| perr(ln, "bad vertex"))?;
            if v >= n || rot[v].is_some() {
                return Err(perr(ln, format!("vertex {v} out of range or repeated")));
            }
            let nbrs = numbers(nbrs, ln)?;
            if nbrs.iter().any(|&u| u >= n) {
                return Err(perr(ln, "neighbor out of range"));
            }
            rot[v] = Some(nbrs);
        } else if let Some(rest) = l.strip_prefix("key:") {
            key = Some(rest.trim().to_string());
        } else {
            return Err(perr(ln, format!("unexpected line `{l}`")));
        }
    }
    let rot: Vec<Vec<usize>> = rot
        .into_iter()
        .enumerate()
        .map(|(v, r)| r.ok_or_else(|| perr(hl, format!("no rotation for {v}"))))
        .collect::<Result<_>>()?;
    let check_key = |actual: String| -> Result<()> {
        match &key {
            Some(k) if *k != actual => Err(perr(hl, format!("key mismatch: record says {k}, computed {actual}"))),
            _ => Ok(()),
        }
    };
    let rec = match kind {
        "cycle" => {
            let [b] = &boundaries[..] else { return Err(perr(hl, "cycle records need one boundary line")) };
            let g = PlaneGraph::new(rot)?;
            if b.len() != param {
                return Err(perr(hl, "boundary length differs from the header"));
            }
            let c = CycleCanvas::new(&g, b)?;
            check_key(c.key().to_hex())?;
            Record::Cycle(c)
        }
        "prism" => {
            let [b1, b2] = &boundaries[..] else { return Err(perr(hl, "prism records need two boundary lines")) };
            let tri = |b: &Vec<usize>| -> Result<[usize; 3]> {
                b.as_slice().try_into().map_err(|_| perr(hl, "prism boundaries are triangles"))
            };
            let g = PlaneGraph::new(rot)?;
            let p = PrismCanvas::new(&g, tri(b1)?, tri(b2)?)?;
            if p.spacing() != param {
                return Err(perr(hl, format!("header spacing {param}, actual {}", p.spacing())));
            }
            check_key(p.key().to_hex())?;
            Record::Prism(p)
        }
        "torus" => {
            let mut edges = Vec::new();
            for (v, r) in rot.iter().enumerate() {
                edges.extend(r.iter().filter(|&&u| u > v).map(|&u| (v, u)));
            }
            let graph = Graph::from_edges(n, &edges)?;
            Record::Torus { graph, spacing: param, key: key.ok_or_else(|| perr(hl, "torus records need a key"))? }
        }
        _ => return Err(perr(hl, format!("unknown record kind `{kind}`"))),
    };
    let real_m = match &rec {
        Record::Cycle(c) => c.graph().m(),
        Record::Prism(p) => p.graph().m(),
        Record::Torus { graph, .. } => graph.m(),
    };
    if real_m != m {
        return Err(perr(hl, format!("header says {m} edges, found {real_m}")));
    }
    Ok(rec)
}

pub fn read_records(path: &Path) -> Result<Vec<Record>> {
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    parse_records(&text).map_err(|e| match e {
        Error::Parse { line, msg } => Error::Parse { line, msg: format!("{}: {msg}", path.display()) },
        e => e,
    })
}

pub fn cycle_class_name(l: usize) -> String {
    format!("cycle-L{l:02}")
}

pub fn prism_class_name(d: usize) -> String {
    format!("prism-S{d}")
}

const JOURNAL: &str = "journal.txt";

/// Candidates of a run directory, one file per class, plus an append-only journal of
/// `class <name>`, `done <item>` and `complete <name>` lines.
pub struct DedupStore {
    dir: PathBuf,
    keys: BTreeMap<String, HashSet<String>>,
    done: HashSet<String>,
    complete: HashSet<String>,
    journal: Option<File>,
    log_discards: bool,
}

impl DedupStore {
    /// Opens `dir`, creating it when needed. With `resume` an existing journal and its
    /// class files are loaded; without it the directory must hold no journal.
    pub fn open(dir: &Path, resume: bool, log_discards: bool) -> Result<Self> {
        fs::create_dir_all(dir).map_err(io_err(dir))?;
        let jpath = dir.join(JOURNAL);
        let mut store = DedupStore {
            dir: dir.to_path_buf(),
            keys: BTreeMap::new(),
            done: HashSet::new(),
            complete: HashSet::new(),
            journal: None,
            log_discards,
        };
        if jpath.exists() {
            if !resume {
                return Err(Error::CorruptJournal {
                    path: jpath,
                    msg: "directory holds an earlier run; pass --resume or choose another directory".into(),
                });
            }
            store.replay(&jpath)?;
        }
        store.journal = Some(OpenOptions::new().create(true).append(true).open(&jpath).map_err(io_err(&jpath))?);
        Ok(store)
    }

    fn replay(&mut self, jpath: &Path) -> Result<()> {
        let text = fs::read_to_string(jpath).map_err(io_err(jpath))?;
        let corrupt = |msg: String| Error::CorruptJournal { path: jpath.to_path_buf(), msg };
        if !text.is_empty() && !text.ends_with('\n') {
            return Err(corrupt("last line is incomplete".into()));
        }
        for (i, line) in text.lines().enumerate() {
            match line.split_once(' ') {
                Some(("class", name)) => {
                    let path = self.class_path(name);
                    if !path.exists() {
                        return Err(corrupt(format!("class file {} is missing", path.display())));
                    }
                    let keys = read_records(&path)?.iter().map(Record::key_hex).collect();
                    self.keys.insert(name.to_string(), keys);
                }
                Some(("done", item)) => {
                    self.done.insert(item.to_string());
                }
                Some(("complete", name)) if self.keys.contains_key(name) => {
                    self.complete.insert(name.to_string());
                }
                _ => return Err(corrupt(format!("line {}: unrecognized entry `{line}`", i + 1))),
            }
        }
        Ok(())
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn class_path(&self, name: &str) -> PathBuf {
        self.dir.join(format!("{name}.txt"))
    }

    fn journal_line(&mut self, line: &str) -> Result<()> {
        let path = self.dir.join(JOURNAL);
        let j = self.journal.as_mut().expect("journal is open after construction");
        j.write_all(format!("{line}\n").as_bytes()).map_err(io_err(&path))?;
        j.flush().map_err(io_err(&path))
    }

    /// Registers class `name`, creating its file. Existing classes are left alone.
    pub fn begin_class(&mut self, name: &str) -> Result<()> {
        if self.keys.contains_key(name) {
            return Ok(());
        }
        let path = self.class_path(name);
        File::create(&path).map_err(io_err(&path))?;
        self.keys.insert(name.to_string(), HashSet::new());
        self.journal_line(&format!("class {name}"))
    }

    pub fn is_complete(&self, name: &str) -> bool {
        self.complete.contains(name)
    }

    pub fn mark_complete(&mut self, name: &str) -> Result<()> {
        self.complete.insert(name.to_string());
        self.journal_line(&format!("complete {name}"))
    }

    pub fn is_done(&self, item: &str) -> bool {
        self.done.contains(item)
    }

    /// Appends the records not yet stored in class `name`; returns how many were new.
    pub fn insert(&mut self, name: &str, records: &[Record]) -> Result<usize> {
        let path = self.class_path(name);
        let keys = self.keys.get_mut(name).ok_or_else(|| Error::InvalidGraph(format!("class {name} not begun")))?;
        let mut text = String::new();
        let mut added = 0;
        for r in records {
            if keys.insert(r.key_hex()) {
                if !text.is_empty() || path.metadata().map(|m| m.len() > 0).unwrap_or(false) {
                    text.push('\n');
                }
                text.push_str(&r.to_text());
                added += 1;
            }
        }
        if added > 0 {
            let mut f = OpenOptions::new().append(true).open(&path).map_err(io_err(&path))?;
            f.write_all(text.as_bytes()).map_err(io_err(&path))?;
            f.flush().map_err(io_err(&path))?;
        }
        Ok(added)
    }

    fn log_discards(&mut self, name: &str, discards: &[(Record, String)]) -> Result<()> {
        if !self.log_discards || discards.is_empty() {
            return Ok(());
        }
        let path = self.dir.join(format!("discards-{name}.txt"));
        let mut f = OpenOptions::new().create(true).append(true).open(&path).map_err(io_err(&path))?;
        let mut text = String::new();
        for (r, w) in discards {
            text.push_str(&format!("# witness: {w}\n{}\n", r.to_text()));
        }
        f.write_all(text.as_bytes()).map_err(io_err(&path))
    }

    fn mark_done(&mut self, item: &str) -> Result<()> {
        self.done.insert(item.to_string());
        self.journal_line(&format!("done {item}"))
    }

    /// Class `name` as stored on disk.
    pub fn load_class(&self, name: &str) -> Result<Vec<Record>> {
        let path = self.class_path(name);
        if !path.exists() {
            return Ok(Vec::new());
        }
        read_records(&path)
    }

    /// A sink that writes one class of this store.
    pub fn sink<'a>(&'a mut self, name: &str) -> StoreSink<'a> {
        StoreSink { store: self, class: name.to_string() }
    }
}

pub struct StoreSink<'a> {
    store: &'a mut DedupStore,
    class: String,
}

pub trait ToRecord: Clone {
    fn to_record(&self) -> Record;
}

impl ToRecord for CycleCanvas {
    fn to_record(&self) -> Record {
        Record::Cycle(self.clone())
    }
}

impl ToRecord for PrismCanvas {
    fn to_record(&self) -> Record {
        Record::Prism(self.clone())
    }
}

impl<C: ToRecord> ClassSink<C> for StoreSink<'_> {
    fn is_done(&self, item: &str) -> bool {
        self.store.is_done(item)
    }

    fn record(&mut self, item: &str, kept: &[C], discarded: &[Discard<C>]) -> Result<()> {
        let recs: Vec<Record> = kept.iter().map(ToRecord::to_record).collect();
        self.store.insert(&self.class, &recs)?;
        let disc: Vec<(Record, String)> =
            discarded.iter().map(|d| (d.canvas.to_record(), d.witness.to_string())).collect();
        self.store.log_discards(&self.class, &disc)?;
        self.store.mark_done(item)
    }
}

/// `param<TAB>count<TAB>maxV` for every class file in `dir`, sorted by kind and
/// parameter; `maxV` is `-` for an empty class.
pub fn stats(dir: &Path) -> Result<String> {
    let mut rows = Vec::new();
    for entry in fs::read_dir(dir).map_err(io_err(dir))? {
        let path = entry.map_err(io_err(dir))?.path();
        let Some(name) = path.file_stem().and_then(|s| s.to_str()) else { continue };
        let param =
            name.strip_prefix("cycle-L").map(|p| (0, p)).or_else(|| name.strip_prefix("prism-S").map(|p| (1, p)));
        let Some((kind, p)) = param else { continue };
        let Ok(p) = p.parse::<usize>() else { continue };
        let recs = read_records(&path)?;
        let keys: HashSet<String> = recs.iter().map(Record::key_hex).collect();
        let max_v = recs.iter().map(Record::n).max();
        rows.push((kind, p, keys.len(), max_v));
    }
    rows.sort();
    Ok(rows
        .into_iter()
        .map(|(_, p, c, m)| format!("{p}\t{c}\t{}\n", m.map_or("-".to_string(), |m| m.to_string())))
        .collect())
}

/// Reads the cycle classes `5..=max_l` (smaller ones are empty) from a run directory.
pub fn load_cycle_library(dir: &Path, max_l: usize) -> Result<crate::cycle_canvas::CycleLibrary> {
    let mut lib = crate::cycle_canvas::CycleLibrary::new();
    for l in 3..=max_l {
        let path = dir.join(format!("{}.txt", cycle_class_name(l)));
        if !path.exists() {
            if l < 5 {
                lib.insert(l, Vec::new());
                continue;
            }
            return Err(Error::IncompleteLibrary(format!("{} has no circumference {l} class", dir.display())));
        }
        let mut v = Vec::new();
        for r in read_records(&path)? {
            match r {
                Record::Cycle(c) => v.push(c),
                _ => return Err(Error::InvalidGraph(format!("{} holds a non-cycle record", path.display()))),
            }
        }
        v.sort_by(|a, b| a.key().cmp(b.key()));
        lib.insert(l, v);
    }
    Ok(lib)
}

/// Reads every `prism-S*` class in `dir` up to spacing `max_d`.
pub fn load_prisms(dir: &Path, max_d: usize) -> Result<crate::prism_canvas::PrismLibrary> {
    let mut lib = crate::prism_canvas::PrismLibrary::new();
    for d in 0..=max_d {
        let path = dir.join(format!("{}.txt", prism_class_name(d)));
        if !path.exists() {
            continue;
        }
        let mut v = Vec::new();
        for r in read_records(&path)? {
            match r {
                Record::Prism(p) => v.push(p),
                _ => return Err(Error::InvalidGraph(format!("{} holds a non-prism record", path.display()))),
            }
        }
        v.sort_by(|a, b| a.key().cmp(b.key()));
        lib.insert(d, v);
    }
    Ok(lib)
}
