//! Chordless cycle-canvas candidates, built by adding tripods outside smaller ones.

use std::collections::{BTreeMap, HashSet};

use rayon::prelude::*;

use crate::colorability::{criticality_filter, relabel_witness, FilterConfig, Verdict};
use crate::error::{Error, Result};
use crate::plane_graph::{CanonicalKey, Dart, PlaneGraph};
use crate::work::{item_key, ClassSink};

/// A plane graph whose outer face is bounded by an induced cycle, stored in canonical
/// labeling: the boundary is `0, 1, ..., l-1` in outer-walk order.
#[derive(Clone, Debug)]
pub struct CycleCanvas {
    graph: PlaneGraph,
    boundary: Vec<usize>,
    key: CanonicalKey,
}

impl PartialEq for CycleCanvas {
    fn eq(&self, other: &Self) -> bool {
        self.key == other.key
    }
}

impl Eq for CycleCanvas {}

impl CycleCanvas {
    /// Canonicalizes `graph` with outer walk `boundary`. The boundary must be a face walk
    /// and an induced cycle.
    pub fn new(graph: &PlaneGraph, boundary: &[usize]) -> Result<Self> {
        if boundary.len() < 3 || graph.face_with_walk(boundary).is_none() {
            return Err(Error::NotACycle(boundary.to_vec()));
        }
        if !crate::plane_graph::is_induced_cycle(graph, boundary)? {
            return Err(Error::NotACycle(boundary.to_vec()));
        }
        Ok(Self::canonical(graph, boundary))
    }

    fn canonical(graph: &PlaneGraph, boundary: &[usize]) -> Self {
        let l = boundary.len();
        let anchors: Vec<Dart> = (0..l).map(|i| (boundary[i], boundary[(i + 1) % l])).collect();
        let form = graph.canonical_form(&anchors).expect("boundary darts are valid anchors");
        let g = graph.relabeled(&form.order, form.mirrored);
        let walk: Vec<usize> = (0..l).collect();
        debug_assert!(g.face_with_walk(&walk).is_some(), "canonical boundary is not 0..l");
        CycleCanvas { graph: g, boundary: walk, key: form.key }
    }

    pub fn graph(&self) -> &PlaneGraph {
        &self.graph
    }

    pub fn boundary(&self) -> &[usize] {
        &self.boundary
    }

    pub fn key(&self) -> &CanonicalKey {
        &self.key
    }

    pub fn circumference(&self) -> usize {
        self.boundary.len()
    }

    /// Key under which a canvas and its mirror image coincide.
    pub fn unoriented_key(&self) -> CanonicalKey {
        let l = self.boundary.len();
        let anchors: Vec<Dart> = (0..l).map(|i| (self.boundary[i], self.boundary[(i + 1) % l])).collect();
        self.graph.canonical_form_unoriented(&anchors).expect("boundary darts are valid anchors").key
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }

    pub fn boundary_mask(&self) -> u64 {
        self.boundary.iter().fold(0, |m, &v| m | 1 << v)
    }

    pub fn boundary_edges(&self) -> Vec<(usize, usize)> {
        let l = self.boundary.len();
        (0..l).map(|i| (self.boundary[i], self.boundary[(i + 1) % l])).collect()
    }

    /// Runs the criticality filter relative to the boundary cycle with lists of size 5.
    ///
    /// The search's tie-breaks depend on vertex ids, so it runs on the labeling of the
    /// reflection-invariant canonical form; a canvas and its mirror image then always
    /// get the same verdict. Witness ids refer to this canvas.
    pub fn filter(&self, cfg: &FilterConfig) -> Verdict {
        let l = self.boundary.len();
        let anchors: Vec<Dart> = (0..l).map(|i| (self.boundary[i], self.boundary[(i + 1) % l])).collect();
        let form = self.graph.canonical_form_unoriented(&anchors).expect("boundary darts are valid anchors");
        let mut new_id = vec![0; self.n()];
        for (i, &v) in form.order.iter().enumerate() {
            new_id[v] = i;
        }
        let g = self.graph.to_graph().expect("canvas graphs are simple").permuted(&new_id);
        let t_mask = self.boundary.iter().fold(0u64, |m, &v| m | 1 << new_id[v]);
        let t_edges: Vec<(usize, usize)> =
            self.boundary_edges().into_iter().map(|(a, b)| (new_id[a], new_id[b])).collect();
        match criticality_filter(&g, t_mask, &t_edges, 5, cfg) {
            Verdict::ProvablyReducible(w) => Verdict::ProvablyReducible(relabel_witness(w, &form.order)),
            v => v,
        }
    }

    /// The 5-wheel canvas.
    pub fn wheel5() -> Self {
        let w = crate::plane_graph::wheel(5);
        CycleCanvas::new(&w, &[0, 1, 2, 3, 4]).unwrap()
    }
}

/// A tripod vertex `v` outside the old canvases: its neighbors on the new cycle split
/// it into arcs, and at most one of the faces between consecutive spokes is filled.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TripodPattern {
    pub arcs: Vec<usize>,
    pub filled: Option<usize>,
}

impl TripodPattern {
    pub fn circumference(&self) -> usize {
        self.arcs.iter().sum()
    }

    /// Consecutive neighbors `c0 c1 c2` with the long face filled.
    pub fn consecutive(l: usize) -> Self {
        TripodPattern { arcs: vec![1, 1, l - 2], filled: Some(2) }
    }

    fn validate(&self) -> Result<()> {
        if self.arcs.len() < 3 || self.arcs.contains(&0) {
            return Err(Error::BadPattern(format!("{:?}", self.arcs)));
        }
        if let Some(j) = self.filled {
            if j >= self.arcs.len() || self.arcs[j] < 3 {
                return Err(Error::BadPattern(format!("fill index {j} of {:?}", self.arcs)));
            }
        }
        Ok(())
    }
}

impl std::fmt::Display for TripodPattern {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let arcs: Vec<String> = self.arcs.iter().map(usize::to_string).collect();
        match self.filled {
            Some(j) => write!(f, "{}/{}", arcs.join(","), j),
            None => write!(f, "{}/-", arcs.join(",")),
        }
    }
}

/// The cycle `c_0 .. c_{l-1}` (vertices `0..l`) plus the tripod vertex `l`, and the
/// face walks between consecutive spokes.
fn tripod_frame(arcs: &[usize]) -> (PlaneGraph, Vec<Vec<usize>>) {
    let l: usize = arcs.iter().sum();
    let v = l;
    let mut spokes = Vec::with_capacity(arcs.len());
    let mut p = 0;
    for &a in arcs {
        spokes.push(p);
        p += a;
    }
    let mut rot: Vec<Vec<usize>> = (0..l).map(|i| vec![(i + l - 1) % l, (i + 1) % l]).collect();
    for &s in &spokes {
        rot[s].push(v);
    }
    rot.push(spokes.clone());
    let g = PlaneGraph::from_rotation_unchecked(rot);
    let faces = (0..arcs.len())
        .map(|j| {
            let from = spokes[j];
            let to = from + arcs[j];
            let mut walk = vec![v];
            walk.extend((from..=to).rev().map(|i| i % l));
            walk
        })
        .collect();
    (g, faces)
}

/// Where and how an inner canvas goes into the filled face.
#[derive(Clone, Copy, Debug)]
pub struct Placement {
    pub offset: usize,
    pub mirrored: bool,
}

/// Builds the canvas for one tripod pattern. `fill` is required exactly when the
/// pattern has a filled face.
pub fn apply_tripod(
    target: usize,
    pattern: &TripodPattern,
    fill: Option<(&CycleCanvas, Placement)>,
) -> Result<CycleCanvas> {
    pattern.validate()?;
    if pattern.circumference() != target {
        return Err(Error::BadPattern(format!("arcs {:?} do not sum to {target}", pattern.arcs)));
    }
    let (frame, faces) = tripod_frame(&pattern.arcs);
    let boundary: Vec<usize> = (0..target).collect();
    let g = match (pattern.filled, fill) {
        (None, None) => frame,
        (Some(j), Some((inner, place))) => {
            let host = &faces[j];
            if inner.circumference() != host.len() {
                return Err(Error::Rejected("inner canvas circumference does not match the face"));
            }
            let (guest, walk) = oriented(inner, place.mirrored);
            frame.paste(host, &guest, &walk, place.offset % host.len())?.0
        }
        _ => return Err(Error::BadPattern("fill does not match the pattern".into())),
    };
    Ok(CycleCanvas::canonical(&g, &boundary))
}

/// The canvas graph and its outer walk, reflected when `mirrored`.
pub(crate) fn oriented(c: &CycleCanvas, mirrored: bool) -> (PlaneGraph, Vec<usize>) {
    if mirrored {
        let l = c.circumference();
        let mut walk = vec![c.boundary[0]];
        walk.extend((1..l).rev().map(|i| c.boundary[i]));
        (c.graph.mirror(), walk)
    } else {
        (c.graph.clone(), c.boundary.clone())
    }
}

/// Every canvas from `pattern` with `inner` in all positions, deduplicated.
pub fn tripod_variants(target: usize, pattern: &TripodPattern, inner: Option<&CycleCanvas>) -> Vec<CycleCanvas> {
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    match inner {
        None => {
            if let Ok(c) = apply_tripod(target, pattern, None) {
                out.push(c);
            }
        }
        Some(inner) => {
            for mirrored in [false, true] {
                for offset in 0..inner.circumference() {
                    if let Ok(c) = apply_tripod(target, pattern, Some((inner, Placement { offset, mirrored }))) {
                        if seen.insert(c.key.clone()) {
                            out.push(c);
                        }
                    }
                }
            }
        }
    }
    out
}

/// Compositions of `l` into at least three parts, each at most `l - 3`, up to
/// rotation (lexicographically least representative). Reflections are kept apart
/// because mirror-image canvases are distinct.
pub fn tripod_shapes(l: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if l < 3 {
        return out;
    }
    fn rec(left: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if left == 0 {
            if cur.len() >= 3 && is_least_rotation(cur) {
                out.push(cur.clone());
            }
            return;
        }
        for a in 1..=left.min(max) {
            cur.push(a);
            rec(left - a, max, cur, out);
            cur.pop();
        }
    }
    rec(l, l.saturating_sub(3), &mut Vec::new(), &mut out);
    out
}

fn is_least_rotation(a: &[usize]) -> bool {
    let k = a.len();
    (1..k).all(|r| a.iter().copied().le((0..k).map(|i| a[(i + r) % k])))
}

/// Per-circumference candidate sets, sorted by key.
pub type CycleLibrary = BTreeMap<usize, Vec<CycleCanvas>>;

/// A unit of generation work: one pattern with one inner canvas (or none).
#[derive(Clone, Debug)]
pub struct WorkItem {
    pub pattern: TripodPattern,
    pub inner: Option<CycleCanvas>,
}

impl WorkItem {
    /// Stable identifier used by the journal.
    pub fn key(&self) -> String {
        let seed = self.inner.as_ref().map(|c| c.key.to_hex()).unwrap_or_else(|| "-".into());
        item_key(&format!("{}|{}", self.pattern, seed))
    }
}

pub type Discard = crate::work::Discard<CycleCanvas>;
pub type MemorySink = crate::work::MemorySink<CycleCanvas>;

#[derive(Clone, Copy, Debug)]
pub struct GenConfig {
    pub filter: FilterConfig,
    /// Work items expanded per parallel batch.
    pub batch: usize,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig { filter: FilterConfig::default(), batch: 64 }
    }
}

/// Work items whose every face is shorter than `l`.
pub fn smaller_items(l: usize, library: &CycleLibrary) -> Vec<WorkItem> {
    let mut items = Vec::new();
    for arcs in tripod_shapes(l) {
        items.push(WorkItem { pattern: TripodPattern { arcs: arcs.clone(), filled: None }, inner: None });
        for (j, &a) in arcs.iter().enumerate() {
            if a < 3 {
                continue;
            }
            for inner in library.get(&(a + 2)).map(Vec::as_slice).unwrap_or(&[]) {
                items.push(WorkItem {
                    pattern: TripodPattern { arcs: arcs.clone(), filled: Some(j) },
                    inner: Some(inner.clone()),
                });
            }
        }
    }
    items
}

/// Generation state for one circumference.
struct ClassRun<'a> {
    l: usize,
    cfg: GenConfig,
    seen: HashSet<CanonicalKey>,
    kept: Vec<CycleCanvas>,
    sink: &'a mut dyn ClassSink<CycleCanvas>,
}

impl ClassRun<'_> {
    /// Expands, deduplicates and filters `items`; returns the new survivors.
    fn process(&mut self, items: Vec<WorkItem>) -> Result<Vec<CycleCanvas>> {
        let mut fresh = Vec::new();
        let items: Vec<WorkItem> = items.into_iter().filter(|it| !self.sink.is_done(&it.key())).collect();
        for chunk in items.chunks(self.cfg.batch.max(1)) {
            let raw: Vec<Vec<CycleCanvas>> =
                chunk.par_iter().map(|it| tripod_variants(self.l, &it.pattern, it.inner.as_ref())).collect();
            let unseen: Vec<Vec<CycleCanvas>> = raw
                .into_iter()
                .map(|cs| cs.into_iter().filter(|c| self.seen.insert(c.key.clone())).collect())
                .collect();
            let filter = self.cfg.filter;
            let verdicts: Vec<Vec<Verdict>> =
                unseen.par_iter().map(|cs| cs.iter().map(|c| c.filter(&filter)).collect()).collect();
            for ((it, cs), vs) in chunk.iter().zip(unseen).zip(verdicts) {
                let mut kept = Vec::new();
                let mut discarded = Vec::new();
                for (c, v) in cs.into_iter().zip(vs) {
                    match v {
                        Verdict::PossiblyCritical => kept.push(c),
                        Verdict::ProvablyReducible(witness) => discarded.push(Discard { canvas: c, witness }),
                    }
                }
                kept.sort_by(|a, b| a.key.cmp(&b.key));
                discarded.sort_by(|a, b| a.canvas.key.cmp(&b.canvas.key));
                self.sink.record(&it.key(), &kept, &discarded)?;
                fresh.extend(kept);
            }
        }
        self.kept.extend(fresh.iter().cloned());
        Ok(fresh)
    }

    fn close(&mut self, mut queue: Vec<CycleCanvas>) -> Result<()> {
        while !queue.is_empty() {
            queue.sort_by(|a, b| a.key.cmp(&b.key));
            let pattern = TripodPattern::consecutive(self.l);
            let items = queue.into_iter().map(|c| WorkItem { pattern: pattern.clone(), inner: Some(c) }).collect();
            queue = self.process(items)?;
        }
        Ok(())
    }
}

/// Runs one circumference class: tripods over smaller canvases, then the closure under
/// consecutive tripods. `resumed` holds survivors already recorded by an earlier run;
/// their closure items are redone unless the sink reports them done.
pub fn run_class(
    l: usize,
    library: &CycleLibrary,
    resumed: Vec<CycleCanvas>,
    cfg: &GenConfig,
    sink: &mut dyn ClassSink<CycleCanvas>,
) -> Result<Vec<CycleCanvas>> {
    for k in 5..l {
        if !library.contains_key(&k) {
            return Err(Error::IncompleteLibrary(format!("circumference {k} missing for {l}")));
        }
    }
    let mut run = ClassRun { l, cfg: *cfg, seen: HashSet::new(), kept: Vec::new(), sink };
    for c in &resumed {
        run.seen.insert(c.key.clone());
    }
    run.kept.extend(resumed.iter().cloned());
    let mut queue = resumed;
    queue.extend(run.process(smaller_items(l, library))?);
    run.close(queue)?;
    let mut kept = run.kept;
    kept.sort_by(|a, b| a.key.cmp(&b.key));
    Ok(kept)
}

/// Canvases from one tripod over smaller ones, deduplicated and filtered.
pub fn enumerate_from_smaller(l: usize, library: &CycleLibrary, cfg: &GenConfig) -> Result<Vec<CycleCanvas>> {
    let mut sink = MemorySink::default();
    let mut run = ClassRun { l, cfg: *cfg, seen: HashSet::new(), kept: Vec::new(), sink: &mut sink };
    let mut out = run.process(smaller_items(l, library))?;
    out.sort_by(|a, b| a.key.cmp(&b.key));
    Ok(out)
}

/// `seeds` together with everything reachable by consecutive tripods that survives
/// the filter.
pub fn consecutive_tripod_closure(l: usize, seeds: Vec<CycleCanvas>, cfg: &GenConfig) -> Result<Vec<CycleCanvas>> {
    let mut sink = MemorySink::default();
    let mut run = ClassRun { l, cfg: *cfg, seen: HashSet::new(), kept: Vec::new(), sink: &mut sink };
    for c in &seeds {
        run.seen.insert(c.key.clone());
    }
    run.kept.extend(seeds.iter().cloned());
    run.close(seeds)?;
    let mut kept = run.kept;
    kept.sort_by(|a, b| a.key.cmp(&b.key));
    Ok(kept)
}

/// All classes `3..=max_l`.
pub fn enumerate_all(max_l: usize, cfg: &GenConfig) -> Result<CycleLibrary> {
    let mut library = CycleLibrary::new();
    for l in 3..=max_l {
        let class = run_class(l, &library, Vec::new(), cfg, &mut MemorySink::default())?;
        library.insert(l, class);
    }
    Ok(library)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn frame_faces_are_faces() {
        let (g, faces) = tripod_frame(&[1, 2, 3]);
        g.validate().unwrap();
        for f in &faces {
            assert!(g.face_with_walk(f).is_some(), "{f:?}");
        }
        assert_eq!(faces.iter().map(Vec::len).collect::<Vec<_>>(), vec![3, 4, 5]);
        assert!(g.face_with_walk(&[0, 1, 2, 3, 4, 5]).is_some());
    }

    #[test]
    fn five_wheel_from_tripod() {
        let p = TripodPattern { arcs: vec![1; 5], filled: None };
        let c = apply_tripod(5, &p, None).unwrap();
        assert_eq!(c.n(), 6);
        assert_eq!(c.key(), CycleCanvas::wheel5().key());
        assert!(c.graph().face_with_walk(&[0, 1, 2, 3, 4]).is_some());
    }

    #[test]
    fn canonical_boundary_after_mirror() {
        let w = crate::plane_graph::wheel(5).mirror();
        let c = CycleCanvas::new(&w, &[0, 4, 3, 2, 1]).unwrap();
        assert_eq!(c.key(), CycleCanvas::wheel5().key());
        assert!(c.graph().face_with_walk(&[0, 1, 2, 3, 4]).is_some());
    }

    #[test]
    fn fill_with_wheel() {
        let p = TripodPattern { arcs: vec![1, 2, 3], filled: Some(2) };
        let w = CycleCanvas::wheel5();
        let c = apply_tripod(6, &p, Some((&w, Placement { offset: 0, mirrored: false }))).unwrap();
        // six cycle vertices, the tripod vertex and the wheel's center
        assert_eq!(c.n(), 8);
        assert!(c.graph().is_spherical());
        assert!(crate::plane_graph::is_induced_cycle(c.graph(), c.boundary()).unwrap());
    }

    #[test]
    fn consecutive_shape_needs_equal_inner() {
        let w = CycleCanvas::wheel5();
        let bad = TripodPattern { arcs: vec![1, 1, 4], filled: Some(2) };
        assert!(apply_tripod(6, &bad, Some((&w, Placement { offset: 0, mirrored: false }))).is_err());
    }

    #[test]
    fn shapes_small() {
        assert!(tripod_shapes(3).is_empty());
        assert_eq!(tripod_shapes(4), vec![vec![1, 1, 1, 1]]);
        assert_eq!(tripod_shapes(5), vec![vec![1, 1, 1, 1, 1], vec![1, 1, 1, 2], vec![1, 2, 2]]);
        // a shape and its reversal are different
        let six = tripod_shapes(6);
        assert!(six.contains(&vec![1, 2, 3]) && six.contains(&vec![1, 3, 2]));
    }

    #[test]
    fn small_classes() {
        let lib = enumerate_all(6, &GenConfig::default()).unwrap();
        let counts: Vec<usize> = (3..=6).map(|l| lib[&l].len()).collect();
        assert_eq!(counts, vec![0, 0, 1, 4]);
        assert_eq!(lib[&5][0].key(), CycleCanvas::wheel5().key());
        assert_eq!(lib[&6].iter().map(CycleCanvas::n).max(), Some(9));
    }

    #[test]
    fn wheel_closure_adds_nothing() {
        let out = consecutive_tripod_closure(5, vec![CycleCanvas::wheel5()], &GenConfig::default()).unwrap();
        assert_eq!(out.len(), 1);
        assert!(consecutive_tripod_closure(5, vec![], &GenConfig::default()).unwrap().is_empty());
    }
}
