//! Plane graphs given by rotation systems.
//!
//! `rot[v]` lists the neighbors of `v` in clockwise order. Faces are traced with the
//! rule: after arriving at `v` along `u -> v`, leave along the edge that follows `u`
//! in `rot[v]`. Every directed edge (dart) lies on exactly one face walk.

use std::cmp::Ordering;
use std::collections::VecDeque;
use std::fmt;

use crate::error::{Error, Result};
use crate::graph::Graph;

/// A directed edge `(tail, head)`.
pub type Dart = (usize, usize);

/// Transcript token emitted when the traversal discovers a new vertex.
pub const TOKEN_NEW: u8 = 0xFD;
/// Transcript token following the number of an already visited vertex.
pub const TOKEN_BACK: u8 = 0xFE;
/// Transcript token emitted when the traversal retreats from a vertex.
pub const TOKEN_UP: u8 = 0xFF;
/// Largest vertex count for which visit numbers fit below the reserved tokens.
pub const MAX_CANON_VERTICES: usize = TOKEN_NEW as usize;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PlaneGraph {
    rot: Vec<Vec<usize>>,
}

/// The closed boundary walk of one face, as the sequence of its darts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FaceWalk {
    pub darts: Vec<Dart>,
}

impl FaceWalk {
    pub fn len(&self) -> usize {
        self.darts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.darts.is_empty()
    }

    /// Vertex occurrences along the walk (tails of the darts), possibly repeated.
    pub fn vertices(&self) -> Vec<usize> {
        self.darts.iter().map(|d| d.0).collect()
    }
}

/// Lexicographically minimal traversal transcript of an anchored plane graph.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalKey(pub Vec<u8>);

impl CanonicalKey {
    pub fn to_hex(&self) -> String {
        hex::encode(&self.0)
    }

    pub fn from_hex(s: &str) -> Option<Self> {
        hex::decode(s).ok().map(CanonicalKey)
    }
}

impl fmt::Debug for CanonicalKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let hex = self.to_hex();
        if hex.len() > 24 {
            write!(f, "CanonicalKey({}..)", &hex[..24])
        } else {
            write!(f, "CanonicalKey({hex})")
        }
    }
}

/// The winning start of a canonical traversal, enough to relabel the graph.
#[derive(Clone, Debug)]
pub struct CanonicalForm {
    pub key: CanonicalKey,
    pub anchor: Dart,
    pub mirrored: bool,
    /// Vertices in first-visit order of the winning traversal.
    pub order: Vec<usize>,
}

impl PlaneGraph {
    /// Builds a plane graph, checking simplicity, symmetry, connectivity and genus 0.
    pub fn new(rot: Vec<Vec<usize>>) -> Result<Self> {
        let g = PlaneGraph { rot };
        g.validate()?;
        Ok(g)
    }

    pub(crate) fn from_rotation_unchecked(rot: Vec<Vec<usize>>) -> Self {
        PlaneGraph { rot }
    }

    /// Checks the combinatorial invariants without requiring genus 0.
    pub fn validate_simple(&self) -> Result<()> {
        let n = self.n();
        for (v, nbrs) in self.rot.iter().enumerate() {
            for (i, &u) in nbrs.iter().enumerate() {
                if u >= n {
                    return Err(Error::InvalidRotation(format!("vertex {v} has out-of-range neighbor {u}")));
                }
                if u == v {
                    return Err(Error::InvalidRotation(format!("self-loop at {v}")));
                }
                if nbrs[..i].contains(&u) {
                    return Err(Error::InvalidRotation(format!("repeated neighbor {u} around {v}")));
                }
                if !self.rot[u].contains(&v) {
                    return Err(Error::InvalidRotation(format!("{u} in rot({v}) but {v} not in rot({u})")));
                }
            }
        }
        if !self.is_connected() {
            return Err(Error::InvalidRotation("graph is not connected".into()));
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        self.validate_simple()?;
        if !self.is_spherical() {
            return Err(Error::InvalidRotation(format!(
                "rotation system is not spherical: n - m + f = {}",
                self.euler_characteristic()
            )));
        }
        Ok(())
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.rot.len()
    }

    pub fn m(&self) -> usize {
        self.rot.iter().map(Vec::len).sum::<usize>() / 2
    }

    #[inline]
    pub fn rotation(&self, v: usize) -> &[usize] {
        &self.rot[v]
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.rot[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.rot[u].contains(&v)
    }

    #[inline]
    pub fn position(&self, v: usize, u: usize) -> Option<usize> {
        self.rot[v].iter().position(|&x| x == u)
    }

    /// Next dart along the same face.
    #[inline]
    pub fn next_dart(&self, (u, v): Dart) -> Dart {
        let r = &self.rot[v];
        let i = r.iter().position(|&x| x == u).expect("dart not in graph");
        (v, r[(i + 1) % r.len()])
    }

    pub fn face_of(&self, start: Dart) -> FaceWalk {
        let mut darts = vec![start];
        let mut d = self.next_dart(start);
        while d != start {
            darts.push(d);
            d = self.next_dart(d);
        }
        FaceWalk { darts }
    }

    /// All face walks. Each dart appears in exactly one walk.
    pub fn trace_faces(&self) -> Vec<FaceWalk> {
        let mut seen: Vec<Vec<bool>> = self.rot.iter().map(|r| vec![false; r.len()]).collect();
        let mut faces = Vec::new();
        for u in 0..self.n() {
            for i in 0..self.rot[u].len() {
                if seen[u][i] {
                    continue;
                }
                let walk = self.face_of((u, self.rot[u][i]));
                for &(a, b) in &walk.darts {
                    let j = self.position(a, b).unwrap();
                    seen[a][j] = true;
                }
                faces.push(walk);
            }
        }
        if self.n() == 1 {
            // An isolated vertex bounds a single face with an empty walk.
            faces.push(FaceWalk { darts: Vec::new() });
        }
        faces
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.n() as i64 - self.m() as i64 + self.trace_faces().len() as i64
    }

    pub fn is_spherical(&self) -> bool {
        self.euler_characteristic() == 2
    }

    pub fn is_connected(&self) -> bool {
        if self.n() == 0 {
            return true;
        }
        let mut seen = vec![false; self.n()];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for &u in &self.rot[v] {
                if !seen[u] {
                    seen[u] = true;
                    count += 1;
                    stack.push(u);
                }
            }
        }
        count == self.n()
    }

    /// Whether some face walk is exactly the closed sequence `cycle` (in walk direction).
    pub fn face_with_walk(&self, cycle: &[usize]) -> Option<FaceWalk> {
        if cycle.len() < 2 || !self.has_edge(cycle[0], cycle[1]) {
            return None;
        }
        let walk = self.face_of((cycle[0], cycle[1]));
        (walk.vertices() == cycle).then_some(walk)
    }

    /// The reflected embedding: every rotation reversed.
    pub fn mirror(&self) -> PlaneGraph {
        PlaneGraph { rot: self.rot.iter().map(|r| r.iter().rev().copied().collect()).collect() }
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.m());
        for (u, r) in self.rot.iter().enumerate() {
            for &v in r {
                if u < v {
                    out.push((u, v));
                }
            }
        }
        out
    }

    pub fn to_graph(&self) -> Result<Graph> {
        Graph::from_edges(self.n(), &self.edges())
    }

    /// Adds the edge `u w` inside the face containing the corners `(pu -> u)` and `(pw -> w)`:
    /// `w` is placed right after `pu` in `rot[u]` and `u` right after `pw` in `rot[w]`.
    pub fn with_edge_in_corners(&self, u: usize, pu: usize, w: usize, pw: usize) -> Result<PlaneGraph> {
        if u == w || self.has_edge(u, w) {
            return Err(Error::Rejected("edge insertion would create a loop or parallel edge"));
        }
        let mut rot = self.rot.clone();
        let iu = self.position(u, pu).ok_or(Error::BadAnchor((pu, u)))?;
        rot[u].insert(iu + 1, w);
        let iw = self.position(w, pw).ok_or(Error::BadAnchor((pw, w)))?;
        rot[w].insert(iw + 1, u);
        Ok(PlaneGraph { rot })
    }

    /// Relabels so that `order[i]` becomes vertex `i`, reflecting when `mirrored`.
    /// Each rotation list is rotated to start at its smallest neighbor.
    pub fn relabeled(&self, order: &[usize], mirrored: bool) -> PlaneGraph {
        let mut new_id = vec![usize::MAX; self.n()];
        for (i, &v) in order.iter().enumerate() {
            new_id[v] = i;
        }
        let mut rot = vec![Vec::new(); self.n()];
        for (v, r) in self.rot.iter().enumerate() {
            let mut mapped: Vec<usize> = r.iter().map(|&u| new_id[u]).collect();
            if mirrored {
                mapped.reverse();
            }
            if let Some(min_pos) = mapped.iter().enumerate().min_by_key(|(_, &x)| x).map(|(i, _)| i) {
                mapped.rotate_left(min_pos);
            }
            rot[new_id[v]] = mapped;
        }
        PlaneGraph { rot }
    }

    /// Relabels vertices by an arbitrary permutation, preserving rotations.
    pub fn permuted(&self, perm: &[usize]) -> PlaneGraph {
        let mut rot = vec![Vec::new(); self.n()];
        for (v, r) in self.rot.iter().enumerate() {
            rot[perm[v]] = r.iter().map(|&u| perm[u]).collect();
        }
        PlaneGraph { rot }
    }

    /// Shortest-path distance between two vertex sets (0 when they meet).
    pub fn distance(&self, a: &[usize], b: &[usize]) -> Option<usize> {
        let mut dist = vec![usize::MAX; self.n()];
        let mut queue = VecDeque::new();
        for &v in a {
            if dist[v] != 0 {
                dist[v] = 0;
                queue.push_back(v);
            }
        }
        let mut is_target = vec![false; self.n()];
        for &v in b {
            is_target[v] = true;
        }
        while let Some(v) = queue.pop_front() {
            if is_target[v] {
                return Some(dist[v]);
            }
            for &u in &self.rot[v] {
                if dist[u] == usize::MAX {
                    dist[u] = dist[v] + 1;
                    queue.push_back(u);
                }
            }
        }
        None
    }

    /// DFS transcript starting along `anchor`, reading rotations clockwise or, when
    /// `mirrored`, counterclockwise. If `bound` is given, returns `None` as soon as the
    /// transcript is known to be lexicographically greater than `bound`.
    pub fn transcript(&self, anchor: Dart, mirrored: bool, bound: Option<&[u8]>) -> Option<(Vec<u8>, Vec<usize>)> {
        let n = self.n();
        assert!(n <= MAX_CANON_VERTICES, "graph too large for canonical transcripts");
        let mut out: Vec<u8> = Vec::with_capacity(4 * self.m() + 2);
        let mut cmp = if bound.is_some() { Ordering::Equal } else { Ordering::Less };
        let mut num = vec![u8::MAX; n];
        let mut order = Vec::with_capacity(n);
        // (vertex, start index, processed count)
        let mut frames: Vec<(usize, usize, usize)> = Vec::with_capacity(n);

        macro_rules! emit {
            ($tok:expr) => {{
                let t: u8 = $tok;
                if cmp == Ordering::Equal {
                    let b = bound.unwrap();
                    match b.get(out.len()) {
                        Some(&x) if t < x => cmp = Ordering::Less,
                        Some(&x) if t > x => return None,
                        Some(_) => {}
                        None => return None,
                    }
                }
                out.push(t);
            }};
        }

        let (root, first) = anchor;
        num[root] = 0;
        order.push(root);
        emit!(TOKEN_NEW);
        let start = self.position(root, first).expect("anchor is not a dart");
        frames.push((root, start, 0));
        while let Some(top) = frames.last_mut() {
            let (v, s, k) = *top;
            let deg = self.rot[v].len();
            if k == deg {
                frames.pop();
                emit!(TOKEN_UP);
                continue;
            }
            top.2 += 1;
            let idx = if mirrored { (s + deg - k) % deg } else { (s + k) % deg };
            let y = self.rot[v][idx];
            if num[y] == u8::MAX {
                num[y] = order.len() as u8;
                order.push(y);
                emit!(TOKEN_NEW);
                let py = self.position(y, v).unwrap();
                let dy = self.rot[y].len();
                let sy = if mirrored { (py + dy - 1) % dy } else { (py + 1) % dy };
                frames.push((y, sy, 0));
            } else {
                emit!(num[y]);
                emit!(TOKEN_BACK);
            }
        }
        if cmp == Ordering::Equal {
            // identical to the bound
            if bound.map(|b| b.len()) != Some(out.len()) {
                return None;
            }
        }
        Some((out, order))
    }

    /// Minimal transcript over the given anchors, each read clockwise. Mirror images
    /// get different keys unless the graph has a reflective symmetry.
    pub fn canonical_form(&self, anchors: &[Dart]) -> Result<CanonicalForm> {
        self.minimal_transcript(anchors, false)
    }

    /// Like [`canonical_form`](Self::canonical_form), but each anchor's reversal is also
    /// read counterclockwise, so a mirror image yields the same key.
    pub fn canonical_form_unoriented(&self, anchors: &[Dart]) -> Result<CanonicalForm> {
        self.minimal_transcript(anchors, true)
    }

    fn minimal_transcript(&self, anchors: &[Dart], reflect: bool) -> Result<CanonicalForm> {
        if anchors.is_empty() {
            return Err(Error::InvalidGraph("empty anchor set".into()));
        }
        if self.n() > MAX_CANON_VERTICES {
            return Err(Error::TooLarge { what: "plane graph", size: self.n(), limit: MAX_CANON_VERTICES });
        }
        let mut best: Option<CanonicalForm> = None;
        for &(u, v) in anchors {
            if u >= self.n() || v >= self.n() || !self.has_edge(u, v) {
                return Err(Error::BadAnchor((u, v)));
            }
            let starts = [((u, v), false), ((v, u), true)];
            for &(dart, mirrored) in &starts[..if reflect { 2 } else { 1 }] {
                let bound = best.as_ref().map(|b| b.key.0.as_slice());
                if let Some((t, order)) = self.transcript(dart, mirrored, bound) {
                    let better = match &best {
                        None => true,
                        Some(b) => t < b.key.0,
                    };
                    if better {
                        best = Some(CanonicalForm { key: CanonicalKey(t), anchor: dart, mirrored, order });
                    }
                }
            }
        }
        Ok(best.unwrap())
    }

    /// Pastes `guest` into a face of `self`.
    ///
    /// `host_walk` lists the vertex occurrences of a face walk of `self` (darts
    /// `host_walk[j] -> host_walk[j+1]`), and `guest_walk` a face walk of `guest` whose
    /// vertices are distinct. Guest walk vertex `guest_walk[i]` is identified with
    /// `host_walk[(offset - i) mod L]` and the rest of the guest is drawn inside the host
    /// face. Returns the new graph and the image of every guest vertex.
    pub fn paste(
        &self,
        host_walk: &[usize],
        guest: &PlaneGraph,
        guest_walk: &[usize],
        offset: usize,
    ) -> Result<(PlaneGraph, Vec<usize>)> {
        let len = host_walk.len();
        if len != guest_walk.len() || len < 3 {
            return Err(Error::Rejected("face walk length mismatch"));
        }
        let mut on_walk = vec![usize::MAX; guest.n()];
        for (i, &b) in guest_walk.iter().enumerate() {
            if on_walk[b] != usize::MAX {
                return Err(Error::Rejected("guest face walk repeats a vertex"));
            }
            on_walk[b] = i;
        }
        let at = |walk: &[usize], i: isize| walk[i.rem_euclid(len as isize) as usize];

        let mut map = vec![usize::MAX; guest.n()];
        for (i, &b) in guest_walk.iter().enumerate() {
            map[b] = at(host_walk, offset as isize - i as isize);
        }
        let mut next = self.n();
        for m in map.iter_mut().filter(|m| **m == usize::MAX) {
            *m = next;
            next += 1;
        }
        let mut rot = self.rot.clone();
        rot.resize(next, Vec::new());
        for v in 0..guest.n() {
            if on_walk[v] == usize::MAX {
                rot[map[v]] = guest.rot[v].iter().map(|&u| map[u]).collect();
            }
        }
        for (i, &b) in guest_walk.iter().enumerate() {
            let ii = i as isize;
            let b_next = at(guest_walk, ii + 1);
            let b_prev = at(guest_walk, ii - 1);
            let gr = &guest.rot[b];
            let gd = gr.len();
            let gp = guest.position(b, b_next).ok_or(Error::Rejected("guest walk is not a face walk"))?;
            if gr[(gp + gd - 1) % gd] != b_prev {
                return Err(Error::Rejected("guest walk is not a face walk"));
            }
            let block: Vec<usize> = (1..gd - 1).map(|k| map[gr[(gp + k) % gd]]).collect();
            let j = offset as isize - ii;
            let x = at(host_walk, j);
            let p = at(host_walk, j - 1);
            let nx = at(host_walk, j + 1);
            let hp = rot[x].iter().position(|&y| y == p).ok_or(Error::Rejected("host walk is not a face walk"))?;
            if rot[x][(hp + 1) % rot[x].len()] != nx {
                return Err(Error::Rejected("host walk is not a face walk"));
            }
            if !block.is_empty() {
                let tail = rot[x].split_off(hp + 1);
                rot[x].extend(block);
                rot[x].extend(tail);
            }
        }
        for (v, r) in rot.iter().enumerate() {
            for (i, &u) in r.iter().enumerate() {
                if u == v || r[..i].contains(&u) {
                    return Err(Error::Rejected("pasting creates a loop or parallel edge"));
                }
            }
        }
        let g = PlaneGraph { rot };
        debug_assert!(g.is_spherical(), "pasting broke the sphere embedding");
        Ok((g, map))
    }
}

impl fmt::Debug for PlaneGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PlaneGraph{:?}", self.rot)
    }
}

/// Whether `cycle` is an induced cycle of `g`.
pub fn is_induced_cycle(g: &PlaneGraph, cycle: &[usize]) -> Result<bool> {
    let k = cycle.len();
    let mut seen = vec![false; g.n()];
    if k < 3 {
        return Err(Error::NotACycle(cycle.to_vec()));
    }
    for (i, &v) in cycle.iter().enumerate() {
        if v >= g.n() || seen[v] || !g.has_edge(v, cycle[(i + 1) % k]) {
            return Err(Error::NotACycle(cycle.to_vec()));
        }
        seen[v] = true;
    }
    for (i, &v) in cycle.iter().enumerate() {
        let prev = cycle[(i + k - 1) % k];
        let next = cycle[(i + 1) % k];
        if g.rotation(v).iter().any(|&u| seen[u] && u != prev && u != next) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Shortest-path distance between vertex sets `a` and `b`; `None` if disconnected.
pub fn graph_distance(g: &PlaneGraph, a: &[usize], b: &[usize]) -> Option<usize> {
    g.distance(a, b)
}

/// Rotation system of the wheel: rim `0..k` with outer walk `0,1,..,k-1`, hub `k`.
pub fn wheel(k: usize) -> PlaneGraph {
    let mut rot = Vec::with_capacity(k + 1);
    for i in 0..k {
        rot.push(vec![(i + k - 1) % k, (i + 1) % k, k]);
    }
    rot.push((0..k).collect());
    PlaneGraph { rot }
}

/// A bare cycle `0..k` whose walk `0,1,..,k-1` is one of its two faces.
pub fn cycle(k: usize) -> PlaneGraph {
    PlaneGraph { rot: (0..k).map(|i| vec![(i + k - 1) % k, (i + 1) % k]).collect() }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k3_faces() {
        let g = cycle(3);
        let f = g.trace_faces();
        assert_eq!(f.len(), 2);
        assert!(f.iter().all(|w| w.len() == 3));
    }

    #[test]
    fn k2_faces() {
        let g = PlaneGraph::new(vec![vec![1], vec![0]]).unwrap();
        let f = g.trace_faces();
        assert_eq!(f.len(), 1);
        assert_eq!(f[0].len(), 2);
    }

    #[test]
    fn wheel_faces() {
        let g = wheel(5);
        g.validate().unwrap();
        let mut lens: Vec<usize> = g.trace_faces().iter().map(FaceWalk::len).collect();
        lens.sort();
        assert_eq!(lens, vec![3, 3, 3, 3, 3, 5]);
        assert_eq!(g.face_of((0, 1)).vertices(), vec![0, 1, 2, 3, 4]);
    }

    #[test]
    fn non_spherical_rotation_rejected() {
        // K4 with one vertex's rotation flipped has genus 1
        let rot = vec![vec![1, 2, 3], vec![0, 3, 2], vec![0, 1, 3], vec![0, 2, 1]];
        let g = PlaneGraph::from_rotation_unchecked(rot.clone());
        g.validate_simple().unwrap();
        assert!(g.is_spherical());
        let mut bad = rot;
        bad[3] = vec![0, 1, 2];
        let b = PlaneGraph::from_rotation_unchecked(bad);
        assert_ne!(g.is_spherical(), b.is_spherical());
    }

    #[test]
    fn induced_cycle_checks() {
        let w = wheel(5);
        assert!(is_induced_cycle(&w, &[0, 1, 2, 3, 4]).unwrap());
        // C4 plus chord 0-2
        let c = PlaneGraph::new(vec![vec![3, 1, 2], vec![0, 2], vec![1, 3, 0], vec![2, 0]]).unwrap();
        assert!(!is_induced_cycle(&c, &[0, 1, 2, 3]).unwrap());
        assert!(is_induced_cycle(&w, &[0, 2, 4]).is_err());
    }

    #[test]
    fn k3_keys_symmetric() {
        let g = cycle(3);
        let mut ts = Vec::new();
        for i in 0..3 {
            ts.push(g.transcript((i, (i + 1) % 3), false, None).unwrap().0);
            ts.push(g.transcript(((i + 1) % 3, i), true, None).unwrap().0);
        }
        assert!(ts.windows(2).all(|w| w[0] == w[1]));
    }

    #[test]
    fn transcript_bound_prunes() {
        let g = wheel(5);
        let (t, _) = g.transcript((0, 1), false, None).unwrap();
        assert!(g.transcript((0, 1), false, Some(&t)).is_some());
        let mut smaller = t.clone();
        smaller[1] = 0;
        assert!(g.transcript((0, 1), false, Some(&smaller)).is_none());
    }

    #[test]
    fn paste_wheel_into_cycle_face() {
        // A hexagon's inner face receives a 6-wheel: result is the 6-wheel.
        let host = cycle(6);
        let inner = host.face_of((1, 0)).vertices();
        let w = wheel(6);
        let (g, map) = host.paste(&inner, &w, &[0, 1, 2, 3, 4, 5], 0).unwrap();
        assert!(g.is_spherical());
        assert_eq!(g.n(), 7);
        assert_eq!(map[6], 6);
        assert_eq!(g.face_of((0, 1)).len(), 6);
    }

    #[test]
    fn paste_detects_parallel_edges() {
        // Walk of a path 0-1-2 (length 4: 0 1 2 1) receives a 4-wheel whose hub
        // would touch vertex 1 twice.
        let host = PlaneGraph::new(vec![vec![1], vec![0, 2], vec![1]]).unwrap();
        let walk = host.face_of((0, 1)).vertices();
        assert_eq!(walk.len(), 4);
        let w = wheel(4);
        assert!(host.paste(&walk, &w, &[0, 1, 2, 3], 0).is_err());
    }
}
