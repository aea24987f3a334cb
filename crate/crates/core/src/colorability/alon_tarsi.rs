//! Alon–Tarsi orientations.
//!
//! An orientation whose outdegrees stay below the list sizes and whose even and odd
//! spanning Eulerian subgraphs differ in number certifies colorability. All
//! orientations with the same outdegree sequence share that difference up to sign,
//! and the signed number of orientations with a given outdegree sequence equals it
//! as well. The search therefore branches on edges while merging partial
//! orientations with equal outdegree vectors, and re-checks the winner by counting
//! Eulerian subgraphs of one concrete orientation.

use rustc_hash::FxHashMap;

use super::SizeFunction;
use crate::graph::Graph;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AlonTarsiConfig {
    /// Graphs (components) with more edges are not searched; the test is then inconclusive.
    pub edge_cutoff: usize,
    /// Abort a component search once this many partial outdegree vectors are live.
    pub state_limit: usize,
}

impl Default for AlonTarsiConfig {
    fn default() -> Self {
        AlonTarsiConfig { edge_cutoff: 25, state_limit: 2_000_000 }
    }
}

/// An orientation of a graph on vertices `0..n`; each arc is `(tail, head)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Orientation {
    n: usize,
    arcs: Vec<(usize, usize)>,
    outdeg: Vec<u32>,
}

impl Orientation {
    pub fn new(n: usize, arcs: Vec<(usize, usize)>) -> Self {
        let mut outdeg = vec![0; n];
        for &(t, h) in &arcs {
            assert!(t < n && h < n && t != h);
            outdeg[t] += 1;
        }
        Orientation { n, arcs, outdeg }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn arcs(&self) -> &[(usize, usize)] {
        &self.arcs
    }

    pub fn outdegree(&self, v: usize) -> u32 {
        self.outdeg[v]
    }

    pub fn outdegrees(&self) -> &[u32] {
        &self.outdeg
    }
}

/// Number of even spanning Eulerian subgraphs minus the number of odd ones.
///
/// Dynamic programming over the arcs with per-vertex balances; a vertex drops out of
/// the state once all its arcs are decided, so only the active frontier is tracked.
pub fn eulerian_parity_difference(o: &Orientation) -> i128 {
    let n = o.n;
    if o.arcs.is_empty() {
        return 1;
    }
    // Order arcs by a BFS vertex order to keep the frontier narrow.
    let mut adj = vec![Vec::new(); n];
    for (i, &(t, h)) in o.arcs.iter().enumerate() {
        adj[t].push((h, i));
        adj[h].push((t, i));
    }
    let mut pos = vec![usize::MAX; n];
    let mut order = Vec::with_capacity(n);
    for root in 0..n {
        if pos[root] != usize::MAX {
            continue;
        }
        pos[root] = order.len();
        order.push(root);
        let mut head = order.len() - 1;
        while head < order.len() {
            let v = order[head];
            head += 1;
            for &(u, _) in &adj[v] {
                if pos[u] == usize::MAX {
                    pos[u] = order.len();
                    order.push(u);
                }
            }
        }
    }
    let mut arcs: Vec<(usize, usize)> = o.arcs.clone();
    arcs.sort_by_key(|&(t, h)| (pos[t].max(pos[h]), pos[t].min(pos[h])));
    let mut last = vec![usize::MAX; n];
    for (i, &(t, h)) in arcs.iter().enumerate() {
        last[t] = i;
        last[h] = i;
    }

    let mut states: FxHashMap<Vec<i8>, i128> = FxHashMap::default();
    states.insert(vec![0; n], 1);
    for (i, &(t, h)) in arcs.iter().enumerate() {
        let mut next: FxHashMap<Vec<i8>, i128> = FxHashMap::default();
        for (state, w) in states {
            let mut taken = state.clone();
            taken[t] += 1;
            taken[h] -= 1;
            for (st, wt) in [(state, w), (taken, -w)] {
                let closed = |v: usize| last[v] == i && st[v] != 0;
                if closed(t) || closed(h) {
                    continue;
                }
                *next.entry(st).or_insert(0) += wt;
            }
        }
        next.retain(|_, w| *w != 0);
        states = next;
    }
    states.get(&vec![0; n]).copied().unwrap_or(0)
}

/// Searches for an orientation with `outdeg(v) <= s(v) - 1` everywhere and a nonzero
/// Eulerian parity difference. `Some` certifies `s`-colorability; `None` is inconclusive.
pub fn alon_tarsi_orientation(g: &Graph, s: &SizeFunction, cfg: &AlonTarsiConfig) -> Option<Orientation> {
    assert_eq!(g.n(), s.len());
    if (0..g.n()).any(|v| s.get(v) <= 0) {
        return None;
    }
    let mut arcs = Vec::with_capacity(g.m());
    for comp in g.components(g.all_mask()) {
        let (h, ids) = g.induced(comp);
        let sizes: Vec<i32> = ids.iter().map(|&v| s.get(v)).collect();
        let local = component_orientation(&h, &sizes, cfg)?;
        arcs.extend(local.into_iter().map(|(t, hd)| (ids[t], ids[hd])));
    }
    let o = Orientation::new(g.n(), arcs);
    let diff = eulerian_parity_difference(&o);
    debug_assert!(diff != 0, "outdegree coefficient nonzero but parity difference zero");
    (diff != 0).then_some(o)
}

pub fn alon_tarsi_certify(g: &Graph, s: &SizeFunction, cfg: &AlonTarsiConfig) -> bool {
    alon_tarsi_orientation(g, s, cfg).is_some()
}

const BITS: u32 = 4;
const MAX_PACKED: usize = 128 / BITS as usize;

fn component_orientation(g: &Graph, s: &[i32], cfg: &AlonTarsiConfig) -> Option<Vec<(usize, usize)>> {
    let n = g.n();
    let m = g.m();
    if m == 0 {
        return Some(Vec::new());
    }
    if m > cfg.edge_cutoff || n > MAX_PACKED {
        return None;
    }
    let cap: Vec<u32> = s.iter().map(|&x| (x - 1).clamp(0, 15) as u32).collect();
    if cap.iter().map(|&c| c as usize).sum::<usize>() < m {
        return None;
    }
    let mut edges = g.edges();
    // Finish low-numbered vertices first; degrees are small so any local order works.
    edges.sort_by_key(|&(u, v)| (u.max(v), u.min(v)));

    let get = |st: u128, v: usize| ((st >> (BITS as usize * v)) & 0xF) as u32;
    let mut states: FxHashMap<u128, i128> = FxHashMap::default();
    states.insert(0, 1);
    for &(u, v) in &edges {
        let mut next: FxHashMap<u128, i128> = FxHashMap::with_capacity_and_hasher(states.len() * 2, Default::default());
        for (&st, &w) in &states {
            if get(st, u) < cap[u] {
                *next.entry(st + (1u128 << (BITS as usize * u))).or_insert(0) += w;
            }
            if get(st, v) < cap[v] {
                *next.entry(st + (1u128 << (BITS as usize * v))).or_insert(0) -= w;
            }
        }
        next.retain(|_, w| *w != 0);
        if next.is_empty() || next.len() > cfg.state_limit {
            return None;
        }
        states = next;
    }
    let best = states.keys().copied().min()?;
    let outdeg: Vec<u32> = (0..n).map(|v| get(best, v)).collect();
    realize_outdegrees(n, &edges, &outdeg)
}

/// Orients `edges` so that vertex `v` has outdegree exactly `outdeg[v]`: start from any
/// orientation and reverse directed paths from overfull to underfull vertices.
fn realize_outdegrees(n: usize, edges: &[(usize, usize)], outdeg: &[u32]) -> Option<Vec<(usize, usize)>> {
    if outdeg.iter().map(|&d| d as usize).sum::<usize>() != edges.len() {
        return None;
    }
    let mut arcs: Vec<(usize, usize)> = edges.to_vec();
    let mut cur = vec![0u32; n];
    for &(t, _) in &arcs {
        cur[t] += 1;
    }
    while let Some(x) = (0..n).find(|&v| cur[v] > outdeg[v]) {
        // BFS along arcs from x until an underfull vertex is reached.
        let mut via = vec![usize::MAX; n];
        let mut seen = vec![false; n];
        seen[x] = true;
        let mut queue = std::collections::VecDeque::from([x]);
        let mut target = None;
        while let Some(v) = queue.pop_front() {
            if cur[v] < outdeg[v] {
                target = Some(v);
                break;
            }
            for (i, &(t, h)) in arcs.iter().enumerate() {
                if t == v && !seen[h] {
                    seen[h] = true;
                    via[h] = i;
                    queue.push_back(h);
                }
            }
        }
        let mut v = target?;
        while v != x {
            let i = via[v];
            let (t, h) = arcs[i];
            arcs[i] = (h, t);
            v = t;
        }
        cur[x] -= 1;
        cur[target.unwrap()] += 1;
    }
    Some(arcs)
}

/// Brute-force parity difference over all arc subsets; test oracle only.
#[cfg(test)]
pub(crate) fn parity_difference_brute(o: &Orientation) -> i128 {
    let m = o.arcs.len();
    assert!(m <= 22);
    let mut total = 0i128;
    for mask in 0u32..(1 << m) {
        let mut bal = vec![0i32; o.n];
        for (i, &(t, h)) in o.arcs.iter().enumerate() {
            if mask >> i & 1 == 1 {
                bal[t] += 1;
                bal[h] -= 1;
            }
        }
        if bal.iter().all(|&b| b == 0) {
            total += if mask.count_ones() % 2 == 0 { 1 } else { -1 };
        }
    }
    total
}
