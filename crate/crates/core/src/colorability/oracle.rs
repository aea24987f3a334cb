//! Exact brute-force oracles for small graphs. Used to validate the conservative
//! tests; never on the generation path.

use super::SizeFunction;
use crate::error::{Error, Result};
use crate::graph::{bits, Graph};

/// Largest graph handed to [`oracle_exact_colorable`].
pub const COLORABLE_GUARD: usize = 20;
/// Largest number of non-boundary vertices handed to [`oracle_exact_critical`].
pub const CRITICAL_GUARD: usize = 9;
/// Largest palette the oracles enumerate lists from.
pub const PALETTE_GUARD: usize = 16;

/// A list of colors per vertex; colors are bit positions.
pub type ListAssignment = Vec<u64>;

/// Exact backtracking decision of `L`-colorability.
pub fn oracle_exact_colorable(g: &Graph, lists: &[u64]) -> Result<bool> {
    if g.n() > COLORABLE_GUARD {
        return Err(Error::OracleGuard(format!("{} vertices > {COLORABLE_GUARD}", g.n())));
    }
    assert_eq!(lists.len(), g.n());
    Ok(colorable(g, lists, g.all_mask()))
}

/// Backtracking over the vertices in `mask`, most constrained first.
pub(crate) fn colorable(g: &Graph, lists: &[u64], mask: u64) -> bool {
    let mut colors = vec![u64::MAX; g.n()];
    fn rec(g: &Graph, lists: &[u64], left: u64, colors: &mut [u64]) -> bool {
        if left == 0 {
            return true;
        }
        let avail = |v: usize, colors: &[u64]| {
            let mut a = lists[v];
            for u in bits(g.nbr_mask(v)) {
                if colors[u] != u64::MAX {
                    a &= !colors[u];
                }
            }
            a
        };
        let v = bits(left).min_by_key(|&v| avail(v, colors).count_ones()).unwrap();
        let a = avail(v, colors);
        for c in bits(a) {
            colors[v] = 1 << c;
            if rec(g, lists, left & !(1 << v), colors) {
                colors[v] = u64::MAX;
                return true;
            }
        }
        colors[v] = u64::MAX;
        false
    }
    rec(g, lists, mask, &mut colors)
}

/// Calls `f` for every assignment of lists with `|L(v)| = sizes[i]` to `vertices`
/// from `0..palette`, up to renaming colors (new colors are introduced in order).
/// Stops early when `f` returns `false`; the result tells whether it ran to the end.
pub(crate) fn for_each_list_assignment(sizes: &[usize], palette: usize, f: &mut dyn FnMut(&[u64]) -> bool) -> bool {
    fn rec(
        i: usize,
        used: usize,
        sizes: &[usize],
        palette: usize,
        cur: &mut Vec<u64>,
        f: &mut dyn FnMut(&[u64]) -> bool,
    ) -> bool {
        if i == sizes.len() {
            return f(cur);
        }
        let k = sizes[i];
        // j fresh colors, k - j old ones
        for j in 0..=k.min(palette - used) {
            if k - j > used {
                continue;
            }
            let fresh: u64 = ((1u64 << j) - 1) << used;
            let mut ok = true;
            for_each_subset(used, k - j, &mut |old| {
                cur.push(old | fresh);
                let go = rec(i + 1, used + j, sizes, palette, cur, f);
                cur.pop();
                ok = go;
                go
            });
            if !ok {
                return false;
            }
        }
        true
    }
    rec(0, 0, sizes, palette, &mut Vec::with_capacity(sizes.len()), f)
}

/// Calls `f` on every `k`-subset of `0..n` as a bitmask; stops when `f` returns false.
fn for_each_subset(n: usize, k: usize, f: &mut dyn FnMut(u64) -> bool) -> bool {
    fn rec(start: usize, n: usize, k: usize, acc: u64, f: &mut dyn FnMut(u64) -> bool) -> bool {
        if k == 0 {
            return f(acc);
        }
        for c in start..n {
            if n - c < k {
                break;
            }
            if !rec(c + 1, n, k - 1, acc | 1 << c, f) {
                return false;
            }
        }
        true
    }
    rec(0, n, k, 0, f)
}

/// Whether `g` is colorable from every list assignment with `|L(v)| = s(v)` drawn from
/// a palette of `palette` colors. Nonpositive sizes give empty lists.
pub fn is_s_colorable(g: &Graph, s: &SizeFunction, palette: usize) -> Result<bool> {
    if g.n() > COLORABLE_GUARD || palette > PALETTE_GUARD {
        return Err(Error::OracleGuard(format!("n={} palette={palette}", g.n())));
    }
    if (0..g.n()).any(|v| s.get(v) <= 0) {
        return Ok(g.n() == 0);
    }
    let sizes: Vec<usize> = s.0.iter().map(|&x| x as usize).collect();
    if sizes.iter().any(|&k| k > palette) {
        return Err(Error::OracleGuard("list size exceeds palette".into()));
    }
    let all = g.all_mask();
    Ok(for_each_list_assignment(&sizes, palette, &mut |lists| colorable(g, lists, all)))
}

/// Whether some list assignment from a palette of `palette` colors, with lists of size
/// exactly `s(v)` off the boundary subgraph `t` and the whole palette on it, makes `g`
/// `t`-critical. Boundary vertices may also take colors outside the palette, which
/// never clash with anything.
///
/// `t` is given by its vertex mask and edge list. Criticality is checked against the
/// maximal proper subgraphs containing `t`: `g - e` for each edge `e` outside `t`, and
/// `g - v` for each isolated vertex `v` outside `t`.
pub fn oracle_exact_critical(
    g: &Graph,
    t_mask: u64,
    t_edges: &[(usize, usize)],
    s: &SizeFunction,
    palette: usize,
) -> Result<bool> {
    let all = g.all_mask();
    let inner = all & !t_mask;
    if inner.count_ones() as usize > CRITICAL_GUARD || palette > PALETTE_GUARD || g.n() > 64 {
        return Err(Error::OracleGuard(format!("{} inner vertices, palette {palette}", inner.count_ones())));
    }
    let in_t = |u: usize, v: usize| t_edges.iter().any(|&(a, b)| (a, b) == (u, v) || (a, b) == (v, u));
    let extra_edges: Vec<(usize, usize)> = g.edges().into_iter().filter(|&(u, v)| !in_t(u, v)).collect();
    let isolated: Vec<usize> = bits(inner).filter(|&v| g.degree(v) == 0).collect();
    if extra_edges.is_empty() && isolated.is_empty() {
        // g equals t
        return Ok(false);
    }
    let deletions = extra_edges.len() + isolated.len();
    if deletions > 64 {
        return Err(Error::OracleGuard("too many deletions".into()));
    }
    // Boundary vertices that touch anything outside t's edges.
    let mut relevant = 0u64;
    for &(u, v) in &extra_edges {
        relevant |= (1 << u | 1 << v) & t_mask;
    }
    let relevant: Vec<usize> = bits(relevant).collect();
    if relevant.len() > 8 {
        return Err(Error::OracleGuard(format!("{} boundary vertices in play", relevant.len())));
    }
    let inner_ids: Vec<usize> = bits(inner).collect();
    let sizes: Vec<usize> = inner_ids.iter().map(|&v| s.get(v).max(0) as usize).collect();
    if sizes.iter().any(|&k| k > palette) {
        return Err(Error::OracleGuard("list size exceeds palette".into()));
    }
    let fresh = palette; // any color id >= palette is unique to its boundary vertex
    let t_adj = |u: usize, v: usize| in_t(u, v) && g.has_edge(u, v);

    let mut critical = false;
    for_each_list_assignment(&sizes, palette, &mut |inner_lists| {
        let mut lists = vec![0u64; g.n()];
        for (i, &v) in inner_ids.iter().enumerate() {
            lists[v] = inner_lists[i];
        }
        let mut satisfied = 0u64;
        let goal = if deletions == 64 { u64::MAX } else { (1u64 << deletions) - 1 };
        let mut psi = vec![usize::MAX; g.n()];
        let mut check = |psi: &[usize]| -> bool {
            if extends(g, &lists, psi, &inner_ids, None) {
                return true;
            }
            for d in 0..deletions {
                if satisfied >> d & 1 == 1 {
                    continue;
                }
                let removed = if d < extra_edges.len() {
                    Removed::Edge(extra_edges[d])
                } else {
                    Removed::Vertex(isolated[d - extra_edges.len()])
                };
                if extends(g, &lists, psi, &inner_ids, Some(removed)) {
                    satisfied |= 1 << d;
                }
            }
            satisfied != goal
        };
        precolor(0, &relevant, palette, fresh, &t_adj, &mut psi, &mut check);
        if satisfied == goal {
            critical = true;
            return false;
        }
        true
    });
    Ok(critical)
}

/// Whether `g` is `s`-irreducible for lists of exactly the given sizes drawn from
/// `0..palette`: for every maximal proper subgraph `H` (one edge removed, or one
/// isolated vertex removed) some assignment colors `H` but not `g`.
/// Nonpositive sizes are empty lists.
pub fn oracle_exact_irreducible(g: &Graph, s: &SizeFunction, palette: usize) -> Result<bool> {
    if g.n() > CRITICAL_GUARD || palette > PALETTE_GUARD {
        return Err(Error::OracleGuard(format!("n={} palette={palette}", g.n())));
    }
    let edges = g.edges();
    let isolated: Vec<usize> = (0..g.n()).filter(|&v| g.degree(v) == 0).collect();
    let total = edges.len() + isolated.len();
    if total == 0 {
        // only the null graph is a proper subgraph, and it is always colorable
        return Ok(false);
    }
    let sizes: Vec<usize> = s.0.iter().map(|&x| x.max(0) as usize).collect();
    if sizes.iter().any(|&k| k > palette) {
        return Err(Error::OracleGuard("list size exceeds palette".into()));
    }
    let goal: u128 = if total == 128 { u128::MAX } else { (1u128 << total) - 1 };
    let mut witnessed: u128 = 0;
    let all = g.all_mask();
    for_each_list_assignment(&sizes, palette, &mut |lists| {
        if colorable(g, lists, all) {
            return true;
        }
        for (i, &(u, v)) in edges.iter().enumerate() {
            if witnessed >> i & 1 == 0 {
                let mut h = g.clone();
                h.remove_edge(u, v);
                if colorable(&h, lists, all) {
                    witnessed |= 1 << i;
                }
            }
        }
        for (i, &v) in isolated.iter().enumerate() {
            let bit = edges.len() + i;
            if witnessed >> bit & 1 == 0 && colorable(g, lists, all & !(1 << v)) {
                witnessed |= 1 << bit;
            }
        }
        witnessed != goal
    });
    Ok(witnessed == goal)
}

#[derive(Clone, Copy)]
enum Removed {
    Edge((usize, usize)),
    Vertex(usize),
}

/// Enumerates proper precolorings of the relevant boundary vertices; `fresh + i` is a
/// color private to the i-th relevant vertex. Stops when `f` returns false.
fn precolor(
    i: usize,
    relevant: &[usize],
    palette: usize,
    fresh: usize,
    t_adj: &dyn Fn(usize, usize) -> bool,
    psi: &mut [usize],
    f: &mut dyn FnMut(&[usize]) -> bool,
) -> bool {
    if i == relevant.len() {
        return f(psi);
    }
    let v = relevant[i];
    for c in (0..palette).chain(std::iter::once(fresh + i)) {
        if relevant[..i].iter().any(|&u| psi[u] == c && t_adj(u, v)) {
            continue;
        }
        psi[v] = c;
        if !precolor(i + 1, relevant, palette, fresh, t_adj, psi, f) {
            psi[v] = usize::MAX;
            return false;
        }
    }
    psi[v] = usize::MAX;
    true
}

/// Whether the precoloring `psi` extends to `g` (minus `removed`) from `lists`.
fn extends(g: &Graph, lists: &[u64], psi: &[usize], inner: &[usize], removed: Option<Removed>) -> bool {
    let is_removed_edge =
        |u: usize, v: usize| matches!(removed, Some(Removed::Edge((a, b))) if (a, b) == (u, v) || (a, b) == (v, u));
    // boundary-boundary edges outside t must be proper under psi
    for (u, v) in g.edges() {
        if psi[u] != usize::MAX && psi[v] != usize::MAX && psi[u] == psi[v] && !is_removed_edge(u, v) {
            // t-edges are proper by construction, so this is an extra edge
            return false;
        }
    }
    let mut h = g.clone();
    if let Some(Removed::Edge((a, b))) = removed {
        h.remove_edge(a, b);
    }
    let mut mask = 0u64;
    let mut local = lists.to_vec();
    for &v in inner {
        if matches!(removed, Some(Removed::Vertex(x)) if x == v) {
            continue;
        }
        mask |= 1 << v;
        for u in bits(h.nbr_mask(v)) {
            if psi[u] != usize::MAX && psi[u] < 64 {
                local[v] &= !(1u64 << psi[u]);
            }
        }
    }
    colorable(&h, &local, mask)
}
