//! Shrinking search for a reducible induced subgraph, and the canvas filter built on it.

use super::alon_tarsi::alon_tarsi_orientation;
use super::{find_special_config, greedy_certify, residual_sizes, AlonTarsiConfig, SizeFunction, Verdict, Witness};
use crate::graph::{bits, Graph};

#[derive(Clone, Copy, Debug)]
pub struct FilterConfig {
    pub at: AlonTarsiConfig,
    pub use_special: bool,
    pub use_greedy: bool,
    /// Accept a single vertex whose size exceeds its degree.
    pub use_spare: bool,
}

impl Default for FilterConfig {
    fn default() -> Self {
        FilterConfig { at: AlonTarsiConfig::default(), use_special: true, use_greedy: true, use_spare: true }
    }
}

/// Looks for an induced subgraph `G'` of `g` that is colorable for sizes
/// `s(v) - d_{g - V(G')}(v)`, or that contains a special configuration.
///
/// Starting from `G_0 = g`, each round tries `G_i` as a whole; when that fails, a
/// subgraph `B_i` of `G_i` on which the Alon–Tarsi test still fails is carved out by
/// deleting vertices, and the search continues on `G_i - V(B_i)`.
pub fn reducibility_search(g: &Graph, s: &SizeFunction, cfg: &FilterConfig) -> Verdict {
    assert_eq!(g.n(), s.len());
    if let Some(v) = (0..g.n()).find(|&v| cfg.use_spare && s.get(v) > g.degree(v) as i32) {
        return Verdict::ProvablyReducible(Witness::SpareColor { vertex: v });
    }
    if cfg.use_special {
        if let Some((config, vertices)) = find_special_config(g, s) {
            return Verdict::ProvablyReducible(Witness::Special { config, vertices });
        }
    }

    let mut current = g.all_mask();
    loop {
        if current == 0 {
            return Verdict::PossiblyCritical;
        }
        let (gi, ids) = g.induced(current);
        let (si, _) = residual_sizes(g, g.all_mask() & !current, s);
        if cfg.use_greedy && greedy_certify(&gi, &si) {
            return Verdict::ProvablyReducible(Witness::Greedy { vertices: ids });
        }
        if let Some(o) = alon_tarsi_orientation(&gi, &si, &cfg.at) {
            let outdegrees = o.outdegrees().iter().map(|&d| d as u8).collect();
            return Verdict::ProvablyReducible(Witness::AlonTarsi { vertices: ids, outdegrees });
        }

        // carve B_i: drop vertices while the test stays negative, sizes fixed
        let mut b = current;
        for v in bits(current).collect::<Vec<_>>().into_iter().rev() {
            let trial = b & !(1 << v);
            if trial == 0 {
                continue;
            }
            let keep: Vec<usize> =
                ids.iter().enumerate().filter(|&(_, &x)| trial >> x & 1 == 1).map(|(i, _)| i).collect();
            let local = keep.iter().fold(0u64, |m, &i| m | 1 << i);
            let (h, _) = gi.induced(local);
            if alon_tarsi_orientation(&h, &si.restrict(&keep), &cfg.at).is_none() {
                b = trial;
            }
        }
        current &= !b;
    }
}

/// Conservative test whether `g` can be critical relative to the subgraph `t` (vertex
/// mask plus edges) for some list assignment with lists of size `base`.
/// `ProvablyReducible` means it never is.
pub fn criticality_filter(
    g: &Graph,
    t_mask: u64,
    t_edges: &[(usize, usize)],
    base: i32,
    cfg: &FilterConfig,
) -> Verdict {
    let inner = g.all_mask() & !t_mask;
    if inner == 0 {
        let t_has = |u: usize, v: usize| t_edges.iter().any(|&e| e == (u, v) || e == (v, u));
        if g.edges().into_iter().all(|(u, v)| t_has(u, v)) {
            return Verdict::ProvablyReducible(Witness::EqualsBoundary);
        }
        return Verdict::PossiblyCritical;
    }
    let (f, ids) = g.induced(inner);
    let s = SizeFunction(ids.iter().map(|&v| base - (g.nbr_mask(v) & t_mask).count_ones() as i32).collect());
    match reducibility_search(&f, &s, cfg) {
        Verdict::PossiblyCritical => Verdict::PossiblyCritical,
        Verdict::ProvablyReducible(w) => Verdict::ProvablyReducible(relabel(w, &ids)),
    }
}

/// Maps witness vertex `i` to `ids[i]`.
pub(crate) fn relabel(w: Witness, ids: &[usize]) -> Witness {
    let map = |vs: Vec<usize>| vs.into_iter().map(|v| ids[v]).collect();
    match w {
        Witness::EqualsBoundary => Witness::EqualsBoundary,
        Witness::SpareColor { vertex } => Witness::SpareColor { vertex: ids[vertex] },
        Witness::Special { config, vertices } => Witness::Special { config, vertices: map(vertices) },
        Witness::Greedy { vertices } => Witness::Greedy { vertices: map(vertices) },
        Witness::AlonTarsi { vertices, outdegrees } => Witness::AlonTarsi { vertices: map(vertices), outdegrees },
        Witness::FaceFill { face } => Witness::FaceFill { face: map(face) },
    }
}
