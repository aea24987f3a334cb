//! Toroidal candidates: the two boundary triangles of a prism-canvas identified,
//! then classified against the 6-critical toroidal graphs.

use std::fmt;
use std::path::Path;

use rayon::prelude::*;

use crate::colorability::{
    alon_tarsi_orientation, greedy_certify, reducibility_search, FilterConfig, SizeFunction, Verdict, Witness,
};
use crate::error::{io_err, Error, Result};
use crate::graph::{find_subgraph, isomorphic, Graph};
use crate::plane_graph::PlaneGraph;
use crate::prism_canvas::{PrismCanvas, PrismLibrary};
use crate::work::item_key;

/// How `t1` is laid onto `t2`: `t1[i]` goes to `t2[(rotation - i) mod 3]`, or to
/// `t2[(rotation + i) mod 3]` when `reflected`. Unreflected gluings keep the surface
/// orientable, so they are the ones that yield the torus.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Bijection {
    pub rotation: usize,
    pub reflected: bool,
}

impl Bijection {
    pub const ALL: [Bijection; 6] = [
        Bijection { rotation: 0, reflected: false },
        Bijection { rotation: 1, reflected: false },
        Bijection { rotation: 2, reflected: false },
        Bijection { rotation: 0, reflected: true },
        Bijection { rotation: 1, reflected: true },
        Bijection { rotation: 2, reflected: true },
    ];

    pub fn image(&self, i: usize) -> usize {
        if self.reflected {
            (self.rotation + i) % 3
        } else {
            (self.rotation + 3 - i) % 3
        }
    }

    pub fn is_orientable(&self) -> bool {
        !self.reflected
    }
}

impl fmt::Display for Bijection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "r{}{}", self.rotation, if self.reflected { "m" } else { "" })
    }
}

#[derive(Clone, Debug)]
pub struct TorusCandidate {
    pub graph: Graph,
    pub source: PrismCanvas,
    pub bijection: Bijection,
}

impl TorusCandidate {
    pub fn provenance(&self) -> String {
        format!("S{}:{}:{}", self.source.spacing(), self.source.key().to_hex(), self.bijection)
    }

    /// Stable name derived from the provenance.
    pub fn key(&self) -> String {
        item_key(&self.provenance())
    }
}

/// Identifies `t1` with `t2` under `b`. `None` when the triangles share a vertex or the
/// identification creates a loop or a parallel edge.
pub fn glue_with(pc: &PrismCanvas, b: Bijection) -> Option<Graph> {
    let (t1, t2) = (pc.t1(), pc.t2());
    if t1.iter().any(|v| t2.contains(v)) {
        return None;
    }
    let n = pc.n();
    let mut target: Vec<usize> = (0..n).collect();
    for i in 0..3 {
        target[t2[b.image(i)]] = t1[i];
    }
    let mut id = vec![usize::MAX; n];
    let mut next = 0;
    for v in 0..n {
        if target[v] == v {
            id[v] = next;
            next += 1;
        }
    }
    let mut g = Graph::empty(next).ok()?;
    for (u, v) in pc.graph().edges() {
        if t2.contains(&u) && t2.contains(&v) {
            continue;
        }
        let (x, y) = (id[target[u]], id[target[v]]);
        if x == y || g.has_edge(x, y) {
            return None;
        }
        g.add_edge(x, y);
    }
    Some(g)
}

/// Every gluing of the ends of `pc`, one per distinct resulting graph. With
/// `orientable_only` the reflected bijections are skipped.
pub fn glue_ends(pc: &PrismCanvas, orientable_only: bool) -> Vec<TorusCandidate> {
    let mut out: Vec<TorusCandidate> = Vec::new();
    for b in Bijection::ALL {
        if orientable_only && !b.is_orientable() {
            continue;
        }
        let Some(g) = glue_with(pc, b) else { continue };
        if out.iter().any(|c| isomorphic(&c.graph, &g)) {
            continue;
        }
        out.push(TorusCandidate { graph: g, source: pc.clone(), bijection: b });
    }
    out
}

/// Cuts a toroidal embedding (rotation system of Euler characteristic 0) along the
/// non-contractible triangle `tri`, giving the prism-canvas between the two copies.
pub fn cut_torus(rot: &[Vec<usize>], tri: [usize; 3]) -> Result<PrismCanvas> {
    let g = PlaneGraph::from_rotation_unchecked(rot.to_vec());
    g.validate_simple()?;
    if g.euler_characteristic() != 0 {
        return Err(Error::InvalidRotation("not a toroidal embedding".into()));
    }
    let n = g.n();
    // copies: w keeps the side clockwise from its successor, n + i takes the other
    let mut new_rot: Vec<Vec<usize>> = vec![Vec::new(); n + 3];
    let other = [n, n + 1, n + 2];
    let idx = |w: usize| tri.iter().position(|&t| t == w);
    let mut a_side = vec![Vec::new(); 3];
    for i in 0..3 {
        let (w, p, q) = (tri[i], tri[(i + 2) % 3], tri[(i + 1) % 3]);
        if !g.has_edge(w, p) || !g.has_edge(w, q) {
            return Err(Error::NotACycle(tri.to_vec()));
        }
        let r = g.rotation(w);
        let d = r.len();
        let iq = g.position(w, q).expect("edge checked");
        let ip = g.position(w, p).expect("edge checked");
        let a: Vec<usize> = (1..d).map(|k| r[(iq + k) % d]).take_while(|&u| u != p).collect();
        let b: Vec<usize> = (1..d).map(|k| r[(ip + k) % d]).take_while(|&u| u != q).collect();
        let mut ra = vec![q];
        ra.extend(&a);
        ra.push(p);
        let mut rb = vec![p];
        rb.extend(b.iter().copied());
        rb.push(q);
        new_rot[w] = ra;
        new_rot[other[i]] = rb.iter().map(|&u| idx(u).map_or(u, |j| other[j])).collect();
        a_side[i] = a;
    }
    for (u, slot) in new_rot.iter_mut().enumerate().take(n) {
        if idx(u).is_some() {
            continue;
        }
        *slot = g
            .rotation(u)
            .iter()
            .map(|&w| match idx(w) {
                Some(i) if !a_side[i].contains(&u) => other[i],
                _ => w,
            })
            .collect();
    }
    let cut = PlaneGraph::new(new_rot).map_err(|_| Error::Rejected("triangle is contractible or one-sided"))?;
    PrismCanvas::new(&cut, tri, other)
}

/// Named graphs that force six colors.
#[derive(Clone, Debug)]
pub struct ObstructionSet {
    pub graphs: Vec<(String, Graph)>,
}

const BUILTIN: &str = include_str!("../data/obstructions.txt");

impl ObstructionSet {
    /// The four 6-critical graphs that embed in the torus, shipped with the crate.
    pub fn builtin() -> Self {
        Self::parse(BUILTIN).expect("bundled obstruction data is valid")
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(io_err(path))?;
        Self::parse(&text)
    }

    /// Blocks `name n m` followed by `m` lines `u v`; `#` starts a comment. An optional
    /// last line `checksum <sha256 hex>` covers all bytes before it.
    pub fn parse(text: &str) -> Result<Self> {
        let perr = |line: usize, msg: &str| Error::Parse { line, msg: msg.to_string() };
        let mut body = text;
        if let Some(pos) = text.trim_end().rfind('\n') {
            let last = text[pos + 1..].trim();
            if let Some(hexsum) = last.strip_prefix("checksum ") {
                use sha2::{Digest, Sha256};
                body = &text[..pos + 1];
                if hex::encode(Sha256::digest(body.as_bytes())) != hexsum.trim() {
                    return Err(perr(text[..pos].lines().count() + 1, "checksum mismatch"));
                }
            }
        }
        let mut lines =
            body.lines().enumerate().filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'));
        let mut graphs = Vec::new();
        while let Some((ln, header)) = lines.next() {
            let parts: Vec<&str> = header.split_whitespace().collect();
            let [name, n, m] = parts[..] else { return Err(perr(ln + 1, "expected `name n m`")) };
            let n: usize = n.parse().map_err(|_| perr(ln + 1, "bad vertex count"))?;
            let m: usize = m.parse().map_err(|_| perr(ln + 1, "bad edge count"))?;
            let mut edges = Vec::with_capacity(m);
            for _ in 0..m {
                let (ln, l) = lines.next().ok_or_else(|| perr(ln + 1, "missing edges"))?;
                let uv: Vec<usize> = l
                    .split_whitespace()
                    .map(|x| x.parse().map_err(|_| perr(ln + 1, "bad vertex")))
                    .collect::<Result<_>>()?;
                let [u, v] = uv[..] else { return Err(perr(ln + 1, "expected `u v`")) };
                edges.push((u, v));
            }
            let g = Graph::from_edges(n, &edges)?;
            if g.m() != m {
                return Err(perr(ln + 1, "repeated edge"));
            }
            graphs.push((name.to_string(), g));
        }
        if !graphs.iter().any(|(_, g)| isomorphic(g, &Graph::complete(6))) {
            return Err(Error::InvalidGraph("obstruction set lacks K6".into()));
        }
        Ok(ObstructionSet { graphs })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Classification {
    ContainsObstruction(String),
    IsK7,
    Certified5Choosable,
    Unresolved,
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Classification::ContainsObstruction(name) => write!(f, "contains-{name}"),
            Classification::IsK7 => write!(f, "is-K7"),
            Classification::Certified5Choosable => write!(f, "5-choosable"),
            Classification::Unresolved => write!(f, "unresolved"),
        }
    }
}

/// Proves `g` 5-choosable by peeling. A colorable part (spare color, greedy,
/// Alon–Tarsi, the wheel) can be colored after everything else and is removed; for the
/// fan, which is reducible but not colorable, deleting its reducing edge keeps
/// choosability equivalent. When the search finds nothing, one vertex is colored
/// first and the rest tried as a single colorable part. Returns the steps in order,
/// on the ids of `g`.
pub fn certify_choosable(g: &Graph, cfg: &FilterConfig) -> Option<Vec<Witness>> {
    let mut cur = g.clone();
    let mut current = g.all_mask();
    let mut steps = Vec::new();
    while current != 0 {
        let (h, ids) = cur.induced(current);
        let w = match reducibility_search(&h, &SizeFunction::constant(h.n(), 5), cfg) {
            Verdict::PossiblyCritical => crate::colorability::relabel_witness(all_but_one(&h, cfg)?, &ids),
            Verdict::ProvablyReducible(w) => crate::colorability::relabel_witness(w, &ids),
        };
        match &w {
            Witness::EqualsBoundary | Witness::FaceFill { .. } => return None,
            Witness::SpareColor { vertex } => current &= !(1 << vertex),
            Witness::Special { config, vertices } => match config.reducing_edge() {
                Some((a, b)) => cur.remove_edge(vertices[a], vertices[b]),
                None => vertices.iter().for_each(|&v| current &= !(1 << v)),
            },
            Witness::Greedy { vertices } | Witness::AlonTarsi { vertices, .. } => {
                vertices.iter().for_each(|&v| current &= !(1 << v))
            }
        }
        steps.push(w);
    }
    Some(steps)
}

/// A colorable part `h - v` once `v` is colored, trying high degrees first.
fn all_but_one(h: &Graph, cfg: &FilterConfig) -> Option<Witness> {
    let mut order: Vec<usize> = (0..h.n()).collect();
    order.sort_by_key(|&v| std::cmp::Reverse(h.degree(v)));
    order.into_iter().find_map(|v| {
        let (rest, ids) = h.induced(h.all_mask() & !(1 << v));
        let s = SizeFunction(ids.iter().map(|&u| 5 - h.has_edge(u, v) as i32).collect());
        if cfg.use_greedy && greedy_certify(&rest, &s) {
            return Some(Witness::Greedy { vertices: ids });
        }
        let o = alon_tarsi_orientation(&rest, &s, &cfg.at)?;
        Some(Witness::AlonTarsi { vertices: ids, outdegrees: o.outdegrees().iter().map(|&d| d as u8).collect() })
    })
}

/// Obstruction containment first, then K7, then a choosability proof.
pub fn classify(g: &Graph, obs: &ObstructionSet, cfg: &FilterConfig) -> (Classification, String) {
    for (name, o) in &obs.graphs {
        if let Some(map) = find_subgraph(o, g) {
            let s: Vec<String> = map.iter().map(usize::to_string).collect();
            return (Classification::ContainsObstruction(name.clone()), s.join(","));
        }
    }
    if isomorphic(g, &Graph::complete(7)) {
        return (Classification::IsK7, String::new());
    }
    match certify_choosable(g, cfg) {
        Some(steps) => {
            let s: Vec<String> = steps.iter().map(Witness::to_string).collect();
            (Classification::Certified5Choosable, s.join(";"))
        }
        None => (Classification::Unresolved, String::new()),
    }
}

#[derive(Clone, Debug)]
pub struct ReportRow {
    pub key: String,
    pub class: Classification,
    pub witness: String,
    pub provenance: String,
    pub spacing: usize,
    pub isomorphic_to_k7: bool,
}

#[derive(Clone, Debug, Default)]
pub struct TorusReport {
    pub rows: Vec<ReportRow>,
}

impl TorusReport {
    pub fn count(&self, pred: impl Fn(&Classification) -> bool) -> usize {
        self.rows.iter().filter(|r| pred(&r.class)).count()
    }

    pub fn unresolved(&self) -> usize {
        self.count(|c| *c == Classification::Unresolved)
    }

    /// Spacings of the prism-canvases whose gluing gave K7.
    pub fn k7_sources(&self) -> Vec<usize> {
        self.rows.iter().filter(|r| r.isomorphic_to_k7).map(|r| r.spacing).collect()
    }

    /// `candidateKey classification witness provenance`, one line per candidate.
    pub fn to_tsv(&self) -> String {
        let mut s = String::new();
        for r in &self.rows {
            s.push_str(&format!("{}\t{}\t{}\t{}\n", r.key, r.class, r.witness, r.provenance));
        }
        s
    }

    /// Totals per classification, as `classification<TAB>count` lines.
    pub fn summary(&self) -> String {
        let mut counts = std::collections::BTreeMap::new();
        for r in &self.rows {
            *counts.entry(r.class.to_string()).or_insert(0usize) += 1;
        }
        counts.iter().map(|(k, v)| format!("{k}\t{v}\n")).collect()
    }
}

#[derive(Clone, Copy, Debug)]
pub struct TorusConfig {
    pub filter: FilterConfig,
    pub orientable_only: bool,
}

/// Alon–Tarsi edge cutoff for whole toroidal graphs; they have up to about 40 edges,
/// well above what canvas filtering needs.
pub const TORUS_AT_CUTOFF: usize = 60;

/// The filter settings used for classification.
pub fn torus_filter() -> FilterConfig {
    let mut f = FilterConfig::default();
    f.at.edge_cutoff = TORUS_AT_CUTOFF;
    f
}

impl Default for TorusConfig {
    fn default() -> Self {
        TorusConfig { filter: torus_filter(), orientable_only: true }
    }
}

/// Glues the ends of every prism-canvas and classifies the results. Rows come out
/// sorted by key.
pub fn run_torus_pipeline(prisms: &PrismLibrary, obs: &ObstructionSet, cfg: &TorusConfig) -> TorusReport {
    let all: Vec<&PrismCanvas> = prisms.values().flatten().collect();
    let k7 = Graph::complete(7);
    let mut rows: Vec<ReportRow> = all
        .par_iter()
        .flat_map_iter(|pc| glue_ends(pc, cfg.orientable_only))
        .map(|c| {
            let (class, witness) = classify(&c.graph, obs, &cfg.filter);
            ReportRow {
                key: c.key(),
                class,
                witness,
                provenance: c.provenance(),
                spacing: c.source.spacing(),
                isomorphic_to_k7: isomorphic(&c.graph, &k7),
            }
        })
        .collect();
    rows.sort_by(|a, b| a.key.cmp(&b.key));
    TorusReport { rows }
}
