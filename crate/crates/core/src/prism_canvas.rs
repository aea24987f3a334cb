//! Prism-canvases: plane graphs with two distinguished triangular faces `t1`, `t2`.
//! Candidates come from skeletons with cycle-canvases pasted into their faces, and
//! from gluing two candidates along a shared triangle.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashSet};

use rayon::prelude::*;

use crate::colorability::{criticality_filter, relabel_witness, FilterConfig, Verdict, Witness};
use crate::cycle_canvas::{oriented, CycleCanvas, CycleLibrary, Placement};
use crate::error::{Error, Result};
use crate::plane_graph::{graph_distance, CanonicalKey, Dart, PlaneGraph};
use crate::work::{item_key, ClassSink, Discard};

#[derive(Clone, Debug)]
pub struct PrismCanvas {
    graph: PlaneGraph,
    t1: [usize; 3],
    t2: [usize; 3],
    key: CanonicalKey,
    spacing: usize,
}

impl PartialEq for PrismCanvas {
    fn eq(&self, other: &Self) -> bool {
        self.key == other.key
    }
}

impl Eq for PrismCanvas {}

pub type Skeleton = PrismCanvas;

struct PrismForm {
    key: Vec<u8>,
    mirrored: bool,
    swapped: bool,
    order: Vec<usize>,
}

/// Minimal `transcript ++ sorted numbers of the other triangle` over anchors on both
/// triangles (read clockwise, plus counterclockwise when `reflect`).
fn prism_form(g: &PlaneGraph, t1: &[usize; 3], t2: &[usize; 3], reflect: bool) -> PrismForm {
    let mut best: Option<PrismForm> = None;
    let mut best_t: Vec<u8> = Vec::new();
    for (tri, other, swapped) in [(t1, t2, false), (t2, t1, true)] {
        for i in 0..3 {
            let (x, y) = (tri[i], tri[(i + 1) % 3]);
            let starts = [((x, y), false), ((y, x), true)];
            for &(dart, mirrored) in &starts[..if reflect { 2 } else { 1 }] {
                let bound = best.as_ref().map(|_| best_t.as_slice());
                let Some((t, order)) = g.transcript(dart, mirrored, bound) else { continue };
                let mut num = vec![0u8; g.n()];
                for (k, &v) in order.iter().enumerate() {
                    num[v] = k as u8;
                }
                let mut tail: Vec<u8> = other.iter().map(|&v| num[v]).collect();
                tail.sort_unstable();
                let better = match &best {
                    None => true,
                    Some(b) => match t.cmp(&best_t) {
                        Ordering::Less => true,
                        Ordering::Equal => tail.as_slice() < &b.key[t.len()..],
                        Ordering::Greater => false,
                    },
                };
                if better {
                    let mut key = t.clone();
                    key.extend_from_slice(&tail);
                    best_t = t;
                    best = Some(PrismForm { key, mirrored, swapped, order });
                }
            }
        }
    }
    best.expect("triangles have darts")
}

fn face_walk_of(g: &PlaneGraph, tri: [usize; 3]) -> Option<[usize; 3]> {
    [tri, [tri[0], tri[2], tri[1]]].into_iter().find(|t| g.face_with_walk(t).is_some())
}

fn rotate_to_min(t: [usize; 3]) -> [usize; 3] {
    let i = (0..3).min_by_key(|&i| t[i]).unwrap();
    [t[i], t[(i + 1) % 3], t[(i + 2) % 3]]
}

impl PrismCanvas {
    /// Canonicalizes `graph` with face walks `t1`, `t2`. The triangles must bound
    /// distinct faces (either walk direction is accepted).
    pub fn new(graph: &PlaneGraph, t1: [usize; 3], t2: [usize; 3]) -> Result<Self> {
        let w1 = face_walk_of(graph, t1).ok_or_else(|| Error::NotACycle(t1.to_vec()))?;
        let w2 = face_walk_of(graph, t2).ok_or_else(|| Error::NotACycle(t2.to_vec()))?;
        let mut s1 = w1;
        let mut s2 = w2;
        s1.sort_unstable();
        s2.sort_unstable();
        if s1 == s2 {
            return Err(Error::InvalidGraph("boundary triangles coincide".into()));
        }
        Ok(Self::canonical(graph, w1, w2))
    }

    fn canonical(graph: &PlaneGraph, w1: [usize; 3], w2: [usize; 3]) -> Self {
        let form = prism_form(graph, &w1, &w2, false);
        let g = graph.relabeled(&form.order, form.mirrored);
        let mut new_id = vec![0; graph.n()];
        for (i, &v) in form.order.iter().enumerate() {
            new_id[v] = i;
        }
        let (a, b) = if form.swapped { (w2, w1) } else { (w1, w2) };
        let map = |t: [usize; 3]| {
            let m = [new_id[t[0]], new_id[t[1]], new_id[t[2]]];
            if form.mirrored {
                [m[0], m[2], m[1]]
            } else {
                m
            }
        };
        let t1 = rotate_to_min(map(a));
        let t2 = rotate_to_min(map(b));
        debug_assert!(g.face_with_walk(&t1).is_some() && g.face_with_walk(&t2).is_some());
        let spacing = graph_distance(&g, &t1, &t2).expect("prism canvases are connected");
        PrismCanvas { graph: g, t1, t2, key: CanonicalKey(form.key), spacing }
    }

    pub fn graph(&self) -> &PlaneGraph {
        &self.graph
    }

    pub fn t1(&self) -> [usize; 3] {
        self.t1
    }

    pub fn t2(&self) -> [usize; 3] {
        self.t2
    }

    pub fn key(&self) -> &CanonicalKey {
        &self.key
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }

    /// Distance between the two boundary triangles.
    pub fn spacing(&self) -> usize {
        self.spacing
    }

    /// Key under which a prism-canvas and its mirror image coincide.
    pub fn unoriented_key(&self) -> CanonicalKey {
        CanonicalKey(prism_form(&self.graph, &self.t1, &self.t2, true).key)
    }

    pub fn boundary_mask(&self) -> u64 {
        self.t1.iter().chain(&self.t2).fold(0, |m, &v| m | 1 << v)
    }

    pub fn boundary_edges(&self) -> Vec<(usize, usize)> {
        let mut e = Vec::with_capacity(6);
        for t in [self.t1, self.t2] {
            for i in 0..3 {
                e.push((t[i], t[(i + 1) % 3]));
            }
        }
        e
    }

    /// Criticality filter relative to `t1 ∪ t2`, run on the reflection-invariant
    /// labeling so mirror images get the same verdict.
    pub fn filter(&self, cfg: &FilterConfig) -> Verdict {
        let form = prism_form(&self.graph, &self.t1, &self.t2, true);
        let mut new_id = vec![0; self.n()];
        for (i, &v) in form.order.iter().enumerate() {
            new_id[v] = i;
        }
        let g = self.graph.to_graph().expect("prism graphs are simple").permuted(&new_id);
        let t_mask = self.t1.iter().chain(&self.t2).fold(0u64, |m, &v| m | 1 << new_id[v]);
        let t_edges: Vec<(usize, usize)> =
            self.boundary_edges().into_iter().map(|(a, b)| (new_id[a], new_id[b])).collect();
        match criticality_filter(&g, t_mask, &t_edges, 5, cfg) {
            Verdict::ProvablyReducible(w) => Verdict::ProvablyReducible(relabel_witness(w, &form.order)),
            v => v,
        }
    }

    /// Face walks other than the two boundary triangles.
    pub fn inner_faces(&self) -> Vec<Vec<usize>> {
        let d1 = (self.t1[0], self.t1[1]);
        let d2 = (self.t2[0], self.t2[1]);
        self.graph
            .trace_faces()
            .into_iter()
            .filter(|f| !f.darts.contains(&d1) && !f.darts.contains(&d2))
            .map(|f| f.vertices())
            .collect()
    }
}

/// Every rotation system of a small graph: each vertex's first neighbor fixed, the
/// rest permuted.
fn rotation_systems(n: usize, edges: &[(usize, usize)]) -> Vec<PlaneGraph> {
    let mut nbrs = vec![Vec::new(); n];
    for &(u, v) in edges {
        nbrs[u].push(v);
        nbrs[v].push(u);
    }
    let choices: Vec<Vec<Vec<usize>>> = nbrs.iter().map(|ns| cyclic_orders(ns)).collect();
    let mut out = Vec::new();
    let mut idx = vec![0usize; n];
    loop {
        let rot: Vec<Vec<usize>> = (0..n).map(|v| choices[v][idx[v]].clone()).collect();
        out.push(PlaneGraph::from_rotation_unchecked(rot));
        let mut v = 0;
        while v < n {
            idx[v] += 1;
            if idx[v] < choices[v].len() {
                break;
            }
            idx[v] = 0;
            v += 1;
        }
        if v == n {
            break;
        }
    }
    out
}

fn cyclic_orders(ns: &[usize]) -> Vec<Vec<usize>> {
    if ns.len() <= 2 {
        return vec![ns.to_vec()];
    }
    let mut out = Vec::new();
    let mut rest: Vec<usize> = ns[1..].to_vec();
    permutations(&mut rest, 0, &mut |p| {
        let mut o = vec![ns[0]];
        o.extend_from_slice(p);
        out.push(o);
    });
    out
}

fn permutations(a: &mut Vec<usize>, k: usize, f: &mut dyn FnMut(&[usize])) {
    if k == a.len() {
        f(a);
        return;
    }
    for i in k..a.len() {
        a.swap(k, i);
        permutations(a, k + 1, f);
        a.swap(k, i);
    }
}

/// A base graph, its two triangles, and the edges a skeleton may add.
struct SkeletonShape {
    n: usize,
    edges: Vec<(usize, usize)>,
    t1: [usize; 3],
    t2: [usize; 3],
    extra: Vec<(usize, usize)>,
}

fn skeleton_shapes(d: usize) -> Vec<SkeletonShape> {
    let tri = |a: usize, b: usize, c: usize| vec![(a, b), (b, c), (a, c)];
    match d {
        0 => {
            // bowtie: a0 = b0
            let mut e1 = tri(0, 1, 2);
            e1.extend(tri(0, 3, 4));
            let bowtie = SkeletonShape {
                n: 5,
                edges: e1,
                t1: [0, 1, 2],
                t2: [0, 3, 4],
                extra: vec![(1, 3), (1, 4), (2, 3), (2, 4)],
            };
            // theta: a0 = b0, a1 = b1
            let mut e2 = tri(0, 1, 2);
            e2.extend([(0, 3), (1, 3)]);
            let theta = SkeletonShape { n: 4, edges: e2, t1: [0, 1, 2], t2: [0, 1, 3], extra: vec![(2, 3)] };
            vec![bowtie, theta]
        }
        1 => {
            let mut e = tri(0, 1, 2);
            e.extend(tri(3, 4, 5));
            e.push((0, 3));
            let extra = (0..3).flat_map(|a| (3..6).map(move |b| (a, b))).filter(|&p| p != (0, 3)).collect();
            vec![SkeletonShape { n: 6, edges: e, t1: [0, 1, 2], t2: [3, 4, 5], extra }]
        }
        _ => {
            // a0 a1 a2 = 0 1 2, path 0 = u0, u1 .. u_{d-1} = 3 .. d+1, u_d = b0 = d+2
            let b0 = d + 2;
            let mut e = tri(0, 1, 2);
            e.extend(tri(b0, b0 + 1, b0 + 2));
            let mut prev = 0;
            for u in 3..=b0 {
                e.push((prev, u));
                prev = u;
            }
            let (u1, ul) = (3, d + 1);
            let extra = vec![(1, u1), (2, u1), (b0 + 1, ul), (b0 + 2, ul)];
            vec![SkeletonShape { n: d + 5, edges: e, t1: [0, 1, 2], t2: [b0, b0 + 1, b0 + 2], extra }]
        }
    }
}

/// All skeletons with boundary distance exactly `d`, up to orientation-preserving
/// isomorphism.
pub fn enumerate_skeletons(d: usize) -> Vec<Skeleton> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for shape in skeleton_shapes(d) {
        let mut queue: Vec<(PlaneGraph, [usize; 3], [usize; 3])> = Vec::new();
        for g in rotation_systems(shape.n, &shape.edges) {
            if !g.is_spherical() {
                continue;
            }
            let (Some(w1), Some(w2)) = (face_walk_of(&g, shape.t1), face_walk_of(&g, shape.t2)) else { continue };
            if g.face_of((w1[0], w1[1])).darts.contains(&(w2[0], w2[1])) {
                continue;
            }
            let p = PrismCanvas::canonical(&g, w1, w2);
            if seen.insert(p.key.clone()) {
                queue.push((g, w1, w2));
                out.push(p);
            }
        }
        // add allowed edges inside inner faces in every possible way
        while let Some((g, w1, w2)) = queue.pop() {
            let d1 = (w1[0], w1[1]);
            let d2 = (w2[0], w2[1]);
            for face in g.trace_faces() {
                if face.darts.contains(&d1) || face.darts.contains(&d2) {
                    continue;
                }
                for &(x, y) in &shape.extra {
                    if g.has_edge(x, y) {
                        continue;
                    }
                    let corners_x: Vec<usize> = face.darts.iter().filter(|dt| dt.1 == x).map(|dt| dt.0).collect();
                    let corners_y: Vec<usize> = face.darts.iter().filter(|dt| dt.1 == y).map(|dt| dt.0).collect();
                    for &px in &corners_x {
                        for &py in &corners_y {
                            let Ok(h) = g.with_edge_in_corners(x, px, y, py) else { continue };
                            let p = PrismCanvas::canonical(&h, w1, w2);
                            if seen.insert(p.key.clone()) {
                                queue.push((h, w1, w2));
                                out.push(p);
                            }
                        }
                    }
                }
            }
        }
    }
    out.retain(|p| p.spacing == d);
    out.sort_by(|a, b| a.key.cmp(&b.key));
    out
}

/// One way to fill a face: nothing, or a canvas in a placement.
type FaceFill<'a> = Option<(&'a CycleCanvas, Placement)>;

fn face_options<'a>(len: usize, library: &'a CycleLibrary) -> Vec<FaceFill<'a>> {
    let mut v: Vec<FaceFill<'a>> = vec![None];
    for c in library.get(&len).map(Vec::as_slice).unwrap_or(&[]) {
        for mirrored in [false, true] {
            for offset in 0..len {
                v.push(Some((c, Placement { offset, mirrored })));
            }
        }
    }
    v
}

fn paste_fill(g: &PlaneGraph, walk: &[usize], fill: FaceFill<'_>) -> Result<PlaneGraph> {
    match fill {
        None => Ok(g.clone()),
        Some((c, place)) => {
            let (guest, gw) = oriented(c, place.mirrored);
            Ok(g.paste(walk, &guest, &gw, place.offset)?.0)
        }
    }
}

/// Fills the remaining faces (after the first) in every way; results with spacing
/// other than `d` are dropped.
fn fill_rest(
    g: &PlaneGraph,
    sk: &Skeleton,
    faces: &[Vec<usize>],
    options: &[Vec<FaceFill<'_>>],
    k: usize,
    d: usize,
    out: &mut Vec<PrismCanvas>,
) {
    if k == faces.len() {
        let p = PrismCanvas::canonical(g, sk.t1, sk.t2);
        if p.spacing == d {
            out.push(p);
        }
        return;
    }
    for &fill in &options[k] {
        if let Ok(h) = paste_fill(g, &faces[k], fill) {
            fill_rest(&h, sk, faces, options, k + 1, d, out);
        }
    }
}

/// Every prism-canvas obtained from `sk` by pasting library canvases (or nothing)
/// into its inner faces and keeping the spacing, deduplicated but not filtered.
pub fn paste_into_faces(sk: &Skeleton, library: &CycleLibrary) -> Vec<PrismCanvas> {
    let (faces, options) = skeleton_faces(sk, library);
    let mut out = Vec::new();
    fill_rest(&sk.graph, sk, &faces, &options, 0, sk.spacing, &mut out);
    dedup(out)
}

fn skeleton_faces<'a>(sk: &Skeleton, library: &'a CycleLibrary) -> (Vec<Vec<usize>>, Vec<Vec<FaceFill<'a>>>) {
    let faces = sk.inner_faces();
    let options = faces.iter().map(|f| face_options(f.len(), library)).collect();
    (faces, options)
}

fn dedup(mut v: Vec<PrismCanvas>) -> Vec<PrismCanvas> {
    v.sort_by(|a, b| a.key.cmp(&b.key));
    v.dedup_by(|a, b| a.key == b.key);
    v
}

/// Glues an end of `q2` into an end face of `q1`, in every way: either triangle of
/// each part, three rotations, and `q2` mirrored or not. The glued triangle becomes
/// interior. Results are deduplicated but not filtered.
pub fn glue_prisms(q1: &PrismCanvas, q2: &PrismCanvas) -> Vec<PrismCanvas> {
    let mut out = Vec::new();
    for (host, kept) in [(q1.t2, q1.t1), (q1.t1, q1.t2)] {
        for (end, far) in [(q2.t1, q2.t2), (q2.t2, q2.t1)] {
            for mirrored in [false, true] {
                let (guest, end, far) = if mirrored {
                    (q2.graph.mirror(), [end[0], end[2], end[1]], [far[0], far[2], far[1]])
                } else {
                    (q2.graph.clone(), end, far)
                };
                for offset in 0..3 {
                    let Ok((g, map)) = q1.graph.paste(&host, &guest, &end, offset) else { continue };
                    let new_far = [map[far[0]], map[far[1]], map[far[2]]];
                    if let Ok(p) = PrismCanvas::new(&g, kept, new_far) {
                        out.push(p);
                    }
                }
            }
        }
    }
    dedup(out)
}

/// Triangles other than `t1`, `t2` whose removal separates the two boundary faces,
/// each given as a face-walk-ordered triple of the `t1` side.
pub fn separating_triangles(q: &PrismCanvas) -> Vec<[usize; 3]> {
    let g = q.graph.to_graph().expect("prism graphs are simple");
    let faces = q.graph.trace_faces();
    let mut face_of = std::collections::HashMap::new();
    for (i, f) in faces.iter().enumerate() {
        for &dt in &f.darts {
            face_of.insert(dt, i);
        }
    }
    let f1 = face_of[&(q.t1[0], q.t1[1])];
    let f2 = face_of[&(q.t2[0], q.t2[1])];
    let mut out = Vec::new();
    let mut b1 = q.t1;
    b1.sort_unstable();
    let mut b2 = q.t2;
    b2.sort_unstable();
    for (a, b) in g.edges() {
        for c in crate::graph::bits(g.nbr_mask(a) & g.nbr_mask(b)) {
            if c <= b {
                continue;
            }
            let tri = [a, b, c];
            if tri == b1 || tri == b2 {
                continue;
            }
            let side = face_sides(&q.graph, &faces, &face_of, |u, v| tri.contains(&u) && tri.contains(&v));
            if side[f1] != side[f2] {
                out.push(tri);
            }
        }
    }
    out
}

/// Union of faces across every edge not on `tri`; returns a component id per face.
fn face_sides(
    g: &PlaneGraph,
    faces: &[crate::plane_graph::FaceWalk],
    face_of: &std::collections::HashMap<Dart, usize>,
    wall: impl Fn(usize, usize) -> bool,
) -> Vec<usize> {
    let mut parent: Vec<usize> = (0..faces.len()).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut y = x;
        while p[y] != r {
            let nx = p[y];
            p[y] = r;
            y = nx;
        }
        r
    }
    for (u, v) in g.edges() {
        if wall(u, v) {
            continue;
        }
        let (x, y) = (find(&mut parent, face_of[&(u, v)]), find(&mut parent, face_of[&(v, u)]));
        parent[x] = y;
    }
    (0..faces.len()).map(|i| find(&mut parent, i)).collect()
}

/// Unoriented keys of a cycle library by circumference; the reference for
/// [`skeleton_check`].
#[derive(Clone, Debug, Default)]
pub struct FillIndex {
    keys: BTreeMap<usize, HashSet<CanonicalKey>>,
}

impl FillIndex {
    pub fn new(library: &CycleLibrary) -> Self {
        let keys = library.iter().map(|(&l, cs)| (l, cs.iter().map(CycleCanvas::unoriented_key).collect())).collect();
        FillIndex { keys }
    }

    fn knows(&self, l: usize) -> bool {
        self.keys.contains_key(&l)
    }

    fn contains(&self, l: usize, key: &CanonicalKey) -> bool {
        self.keys.get(&l).is_some_and(|s| s.contains(key))
    }
}

/// Vertex sets of the shortest paths from `t1` to `t2` (at most `cap` of them).
fn shortest_paths(g: &PlaneGraph, t1: &[usize; 3], t2: &[usize; 3], cap: usize) -> Vec<Vec<usize>> {
    let bfs = |src: &[usize; 3]| {
        let mut dist = vec![usize::MAX; g.n()];
        let mut queue = std::collections::VecDeque::new();
        for &v in src {
            if dist[v] != 0 {
                dist[v] = 0;
                queue.push_back(v);
            }
        }
        while let Some(v) = queue.pop_front() {
            for &u in g.rotation(v) {
                if dist[u] == usize::MAX {
                    dist[u] = dist[v] + 1;
                    queue.push_back(u);
                }
            }
        }
        dist
    };
    let (from1, from2) = (bfs(t1), bfs(t2));
    let d = t2.iter().map(|&v| from1[v]).min().unwrap_or(usize::MAX);
    let mut out = Vec::new();
    let mut path = Vec::new();
    #[allow(clippy::too_many_arguments)]
    fn extend(
        g: &PlaneGraph,
        v: usize,
        from1: &[usize],
        from2: &[usize],
        d: usize,
        cap: usize,
        path: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if out.len() >= cap {
            return;
        }
        path.push(v);
        if from2[v] == 0 {
            out.push(path.clone());
        } else {
            for &u in g.rotation(v) {
                if from1[u] == from1[v] + 1 && from1[u] + from2[u] == d {
                    extend(g, u, from1, from2, d, cap, path, out);
                }
            }
        }
        path.pop();
    }
    for &v in t1 {
        if from2[v] == d {
            extend(g, v, &from1, &from2, d, cap, &mut path, &mut out);
        }
    }
    out
}

/// Shortest paths between the boundary triangles of `q`, each as its vertex sequence.
pub fn shortest_path_sets(q: &PrismCanvas) -> Vec<Vec<usize>> {
    shortest_paths(&q.graph, &q.t1, &q.t2, SKELETON_CAP)
}

/// Skeletons tried per canvas by [`skeleton_check`].
const SKELETON_CAP: usize = 64;

/// Looks for a skeleton of `q` with a face whose contents are neither empty nor a
/// candidate of `index`; such a canvas is not critical. Faces whose length `index`
/// does not cover are skipped.
pub fn skeleton_check(q: &PrismCanvas, index: &FillIndex) -> Option<Vec<usize>> {
    let g = &q.graph;
    let faces = g.trace_faces();
    let mut face_of = std::collections::HashMap::new();
    for (i, f) in faces.iter().enumerate() {
        for &dt in &f.darts {
            face_of.insert(dt, i);
        }
    }
    let mut tried = HashSet::new();
    for path in shortest_paths(g, &q.t1, &q.t2, SKELETON_CAP) {
        let mut in_h = vec![false; g.n()];
        for &v in q.t1.iter().chain(&q.t2).chain(&path) {
            in_h[v] = true;
        }
        if !tried.insert(in_h.clone()) {
            continue;
        }
        let side = face_sides(g, &faces, &face_of, |u, v| in_h[u] && in_h[v]);
        let ids: Vec<usize> = (0..g.n()).filter(|&v| in_h[v]).collect();
        let mut local = vec![usize::MAX; g.n()];
        for (i, &v) in ids.iter().enumerate() {
            local[v] = i;
        }
        let rot: Vec<Vec<usize>> =
            ids.iter().map(|&v| g.rotation(v).iter().filter(|&&u| in_h[u]).map(|&u| local[u]).collect()).collect();
        let Ok(h) = PlaneGraph::new(rot) else { continue };
        for walk in h.trace_faces() {
            let w: Vec<usize> = walk.vertices().iter().map(|&i| ids[i]).collect();
            let l = w.len();
            let region = side[face_of[&(w[0], w[1])]];
            let inside: Vec<usize> = (0..faces.len())
                .filter(|&f| side[f] == region)
                .flat_map(|f| faces[f].vertices())
                .filter(|&v| !in_h[v])
                .collect::<std::collections::BTreeSet<_>>()
                .into_iter()
                .collect();
            if inside.is_empty() || !index.knows(l) {
                continue;
            }
            if !fill_is_known(g, &w, &inside, index) {
                return Some(w);
            }
        }
    }
    None
}

/// Whether the face with walk `w` and interior vertices `inside`, cut open along the
/// walk (one copy per occurrence of a vertex), is a candidate of `index`.
fn fill_is_known(g: &PlaneGraph, w: &[usize], inside: &[usize], index: &FillIndex) -> bool {
    let l = w.len();
    let mut local = vec![usize::MAX; g.n()];
    for (i, &x) in inside.iter().enumerate() {
        local[x] = l + i;
    }
    // corner of occurrence i: neighbors strictly between w[i-1] and w[i+1]
    let mut corner_of = std::collections::HashMap::new();
    let mut rot = vec![Vec::new(); l + inside.len()];
    for i in 0..l {
        let (p, v, q) = (w[(i + l - 1) % l], w[i], w[(i + 1) % l]);
        let r = g.rotation(v);
        let Some(start) = g.position(v, p) else { return true };
        rot[i].push((i + l - 1) % l);
        for k in 1..r.len() {
            let x = r[(start + k) % r.len()];
            if x == q {
                break;
            }
            if local[x] == usize::MAX {
                return true;
            }
            corner_of.insert((v, x), i);
            rot[i].push(local[x]);
        }
        rot[i].push((i + 1) % l);
    }
    for (j, &x) in inside.iter().enumerate() {
        for &u in g.rotation(x) {
            let id = if local[u] != usize::MAX {
                local[u]
            } else {
                match corner_of.get(&(u, x)) {
                    Some(&i) => i,
                    None => return true,
                }
            };
            rot[l + j].push(id);
        }
    }
    let Ok(fill) = PlaneGraph::new(rot) else { return true };
    let forward: Vec<usize> = (0..l).collect();
    let backward: Vec<usize> = (0..l).rev().collect();
    match CycleCanvas::new(&fill, &forward).or_else(|_| CycleCanvas::new(&fill, &backward)) {
        Ok(c) => index.contains(l, &c.unoriented_key()),
        // a disk that is not a chordless cycle-canvas proves nothing here
        Err(_) => true,
    }
}

/// Splits `q` along a separating triangle into the part between `t1` and `tri` and
/// the part between `tri` and `t2`.
pub fn cut_at(q: &PrismCanvas, tri: [usize; 3]) -> Result<(PrismCanvas, PrismCanvas)> {
    let faces = q.graph.trace_faces();
    let mut face_of = std::collections::HashMap::new();
    for (i, f) in faces.iter().enumerate() {
        for &dt in &f.darts {
            face_of.insert(dt, i);
        }
    }
    let side = face_sides(&q.graph, &faces, &face_of, |u, v| tri.contains(&u) && tri.contains(&v));
    let s1 = side[face_of[&(q.t1[0], q.t1[1])]];
    let s2 = side[face_of[&(q.t2[0], q.t2[1])]];
    if s1 == s2 {
        return Err(Error::InvalidGraph("triangle does not separate the boundary".into()));
    }
    let part = |s: usize| -> (PlaneGraph, Vec<usize>) {
        let rot: Vec<Vec<usize>> = (0..q.n())
            .map(|x| {
                q.graph
                    .rotation(x)
                    .iter()
                    .copied()
                    .filter(|&y| side[face_of[&(x, y)]] == s || side[face_of[&(y, x)]] == s)
                    .collect()
            })
            .collect();
        let keep: Vec<usize> = (0..q.n()).filter(|&x| !rot[x].is_empty()).collect();
        let mut id = vec![usize::MAX; q.n()];
        for (i, &x) in keep.iter().enumerate() {
            id[x] = i;
        }
        let rot = keep.iter().map(|&x| rot[x].iter().map(|&y| id[y]).collect()).collect();
        (PlaneGraph::from_rotation_unchecked(rot), id)
    };
    let (g1, id1) = part(s1);
    let (g2, id2) = part(s2);
    let m = |id: &[usize], t: [usize; 3]| [id[t[0]], id[t[1]], id[t[2]]];
    let q1 = PrismCanvas::new(&g1, m(&id1, q.t1), m(&id1, tri))?;
    let q2 = PrismCanvas::new(&g2, m(&id2, tri), m(&id2, q.t2))?;
    Ok((q1, q2))
}

/// Per-spacing candidate sets, sorted by key.
pub type PrismLibrary = BTreeMap<usize, Vec<PrismCanvas>>;

#[derive(Clone, Copy, Debug)]
pub struct PrismConfig {
    pub filter: FilterConfig,
    /// First-face fillings expanded per work item.
    pub batch: usize,
}

impl Default for PrismConfig {
    fn default() -> Self {
        PrismConfig { filter: FilterConfig::default(), batch: 256 }
    }
}

/// Filters `raw` against `seen`, recording survivors and discards under `item`.
fn settle(
    raw: Vec<PrismCanvas>,
    seen: &mut HashSet<CanonicalKey>,
    cfg: &FilterConfig,
    item: &str,
    sink: &mut dyn ClassSink<PrismCanvas>,
) -> Result<Vec<PrismCanvas>> {
    settle_glued(raw, None, seen, cfg, item, sink, &mut 0)
}

/// Like [`settle`], with the skeleton check (when `fills` is given) before the filter.
fn settle_glued(
    raw: Vec<PrismCanvas>,
    fills: Option<&FillIndex>,
    seen: &mut HashSet<CanonicalKey>,
    cfg: &FilterConfig,
    item: &str,
    sink: &mut dyn ClassSink<PrismCanvas>,
    face_fill_discards: &mut usize,
) -> Result<Vec<PrismCanvas>> {
    let fresh: Vec<PrismCanvas> = raw.into_iter().filter(|p| seen.insert(p.key.clone())).collect();
    let verdicts: Vec<Verdict> = fresh
        .par_iter()
        .map(|p| match fills.and_then(|f| skeleton_check(p, f)) {
            Some(face) => Verdict::ProvablyReducible(Witness::FaceFill { face }),
            None => p.filter(cfg),
        })
        .collect();
    let mut kept = Vec::new();
    let mut discarded = Vec::new();
    for (p, v) in fresh.into_iter().zip(verdicts) {
        match v {
            Verdict::PossiblyCritical => kept.push(p),
            Verdict::ProvablyReducible(witness) => {
                *face_fill_discards += matches!(witness, Witness::FaceFill { .. }) as usize;
                discarded.push(Discard { canvas: p, witness });
            }
        }
    }
    kept.sort_by(|a, b| a.key.cmp(&b.key));
    discarded.sort_by(|a, b| a.canvas.key.cmp(&b.canvas.key));
    sink.record(item, &kept, &discarded)?;
    Ok(kept)
}

/// Checks that the cycle library covers every face a spacing-`d` skeleton can have.
pub fn check_library(d: usize, library: &CycleLibrary) -> Result<()> {
    for l in 5..=2 * d + 6 {
        if !library.contains_key(&l) {
            return Err(Error::IncompleteLibrary(format!("spacing {d} needs circumference {l}")));
        }
    }
    Ok(())
}

/// All candidates of spacing `d` from skeletons. `resumed` holds candidates recorded
/// earlier; skeletons the sink reports done are skipped.
pub fn run_spacing(
    d: usize,
    library: &CycleLibrary,
    resumed: Vec<PrismCanvas>,
    cfg: &PrismConfig,
    sink: &mut dyn ClassSink<PrismCanvas>,
) -> Result<Vec<PrismCanvas>> {
    check_library(d, library)?;
    let mut seen: HashSet<CanonicalKey> = resumed.iter().map(|p| p.key.clone()).collect();
    let mut kept = resumed;
    for sk in enumerate_skeletons(d) {
        let (faces, options) = skeleton_faces(&sk, library);
        if faces.is_empty() {
            let item = item_key(&format!("skeleton|{}", sk.key.to_hex()));
            if !sink.is_done(&item) {
                kept.extend(settle(vec![sk.clone()], &mut seen, &cfg.filter, &item, sink)?);
            }
            continue;
        }
        // one work item per batch of first-face fillings
        for (i, chunk) in options[0].chunks(cfg.batch.max(1)).enumerate() {
            let item = item_key(&format!("skeleton|{}|{i}", sk.key.to_hex()));
            if sink.is_done(&item) {
                continue;
            }
            let raw: Vec<PrismCanvas> = chunk
                .par_iter()
                .flat_map_iter(|&fill| {
                    let mut out = Vec::new();
                    if let Ok(h) = paste_fill(&sk.graph, &faces[0], fill) {
                        fill_rest(&h, &sk, &faces, &options, 1, d, &mut out);
                    }
                    out.retain(|p| !seen.contains(&p.key));
                    dedup(out)
                })
                .collect();
            kept.extend(settle(dedup(raw), &mut seen, &cfg.filter, &item, sink)?);
        }
    }
    kept.sort_by(|a, b| a.key.cmp(&b.key));
    Ok(kept)
}

/// Every spacing class `0..=max_d`.
pub fn enumerate_prisms(max_d: usize, library: &CycleLibrary, cfg: &PrismConfig) -> Result<PrismLibrary> {
    let mut out = PrismLibrary::new();
    for d in 0..=max_d {
        let mut sink = crate::work::MemorySink::default();
        out.insert(d, run_spacing(d, library, Vec::new(), cfg, &mut sink)?);
    }
    Ok(out)
}

/// Outcome of the glue closure.
#[derive(Debug, Default)]
pub struct GlueReport {
    /// Surviving glued candidates not in the input, by spacing.
    pub new: PrismLibrary,
    /// Largest spacing among all surviving glued candidates.
    pub max_spacing: Option<usize>,
    /// Glued candidates examined (after dedup).
    pub examined: usize,
    /// Glued canvases left out for having spacing above the limit.
    pub over_limit: usize,
    /// Examined canvases rejected by the skeleton check.
    pub face_fill_discards: usize,
    /// Rounds run; the closure stops early when a round adds nothing.
    pub rounds: usize,
}

/// Closes `sets` under gluing pairs whose spacings sum to at most `max_d` (a glued
/// canvas has spacing at least that sum); results of spacing above `max_d` are
/// dropped. With `fills`, survivors of the filter must also pass [`skeleton_check`].
/// New survivors join later rounds.
/// `max_rounds` bounds the iteration.
pub fn glue_closure(
    sets: &PrismLibrary,
    fills: Option<&FillIndex>,
    max_d: usize,
    max_rounds: usize,
    cfg: &PrismConfig,
    sink: &mut dyn ClassSink<PrismCanvas>,
) -> Result<GlueReport> {
    let mut all: Vec<PrismCanvas> = sets.values().flatten().cloned().collect();
    let mut seen: HashSet<CanonicalKey> = all.iter().map(|p| p.key.clone()).collect();
    let mut report = GlueReport::default();
    let mut frontier_start = 0;
    let mut first = true;
    while report.rounds < max_rounds {
        let old_len = all.len();
        let mut added = Vec::new();
        // pairs with at least one member from the frontier
        for i in 0..old_len {
            let q1 = &all[i];
            let partners: Vec<&PrismCanvas> = all[..old_len]
                .iter()
                .enumerate()
                .filter(|&(j, q2)| {
                    (first || i >= frontier_start || j >= frontier_start) && q1.spacing + q2.spacing <= max_d
                })
                .map(|(_, q2)| q2)
                .collect();
            if partners.is_empty() {
                continue;
            }
            let item = item_key(&format!("glue|{}|{}", report.rounds, q1.key.to_hex()));
            if sink.is_done(&item) {
                continue;
            }
            let raw: Vec<PrismCanvas> = partners.par_iter().flat_map_iter(|q2| glue_prisms(q1, q2)).collect();
            let (raw, over): (Vec<PrismCanvas>, Vec<PrismCanvas>) =
                dedup(raw).into_iter().filter(|p| !seen.contains(&p.key)).partition(|p| p.spacing <= max_d);
            report.over_limit += over.len();
            report.examined += raw.len();
            let kept = settle_glued(raw, fills, &mut seen, &cfg.filter, &item, sink, &mut report.face_fill_discards)?;
            for p in &kept {
                report.max_spacing = report.max_spacing.max(Some(p.spacing));
            }
            added.extend(kept);
        }
        report.rounds += 1;
        first = false;
        if added.is_empty() {
            break;
        }
        for p in &added {
            report.new.entry(p.spacing).or_default().push(p.clone());
        }
        frontier_start = old_len;
        all.extend(added.into_iter().filter(|p| p.spacing <= max_d));
    }
    for v in report.new.values_mut() {
        v.sort_by(|a, b| a.key.cmp(&b.key));
    }
    Ok(report)
}
