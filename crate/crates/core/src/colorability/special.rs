//! Two small configurations that are reducible but not always caught by the
//! Alon–Tarsi test.

use std::fmt;

use super::SizeFunction;
use crate::graph::{bits, Graph};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SpecialConfig {
    /// 5-wheel, center needs 5, rim needs 3,3,2,2,2 in cyclic order.
    Wheel5,
    /// `u` joined to a path `v w x y`; `u` needs 4, the path 2 each.
    Fan4,
}

impl fmt::Display for SpecialConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SpecialConfig::Wheel5 => "wheel5",
            SpecialConfig::Fan4 => "fan4",
        })
    }
}

impl SpecialConfig {
    pub const ALL: [SpecialConfig; 2] = [SpecialConfig::Wheel5, SpecialConfig::Fan4];

    /// For a configuration that is reducible without being colorable, the pattern
    /// edge whose removal keeps colorability equivalent.
    pub fn reducing_edge(self) -> Option<(usize, usize)> {
        match self {
            SpecialConfig::Wheel5 => None,
            SpecialConfig::Fan4 => Some((2, 3)),
        }
    }

    /// The pattern graph and its required sizes, vertex by vertex.
    pub fn pattern(self) -> (Graph, Vec<i32>) {
        match self {
            SpecialConfig::Wheel5 => {
                // rim 0..5, center 5
                let mut e: Vec<(usize, usize)> = (0..5).map(|i| (i, (i + 1) % 5)).collect();
                e.extend((0..5).map(|i| (i, 5)));
                (Graph::from_edges(6, &e).unwrap(), vec![3, 3, 2, 2, 2, 5])
            }
            SpecialConfig::Fan4 => {
                // u=0, v=1, w=2, x=3, y=4
                let e = [(0, 1), (0, 2), (0, 3), (0, 4), (1, 2), (2, 3), (3, 4)];
                (Graph::from_edges(5, &e).unwrap(), vec![4, 2, 2, 2, 2])
            }
        }
    }
}

/// Looks for an induced copy of a special configuration in `g` where each vertex `h`
/// has `s(h) - (deg_g(h) - deg_pattern(h))` at least the required size. The returned
/// vertices follow the pattern's order.
pub fn find_special_config(g: &Graph, s: &SizeFunction) -> Option<(SpecialConfig, Vec<usize>)> {
    SpecialConfig::ALL.into_iter().find_map(|c| find_one(g, s, c).map(|vs| (c, vs)))
}

pub fn known_special_configs(g: &Graph, s: &SizeFunction) -> bool {
    find_special_config(g, s).is_some()
}

fn find_one(g: &Graph, s: &SizeFunction, config: SpecialConfig) -> Option<Vec<usize>> {
    let (p, req) = config.pattern();
    if p.n() > g.n() {
        return None;
    }
    // most constrained pattern vertex first, then neighbors of placed ones
    let mut order: Vec<usize> = Vec::with_capacity(p.n());
    let first = (0..p.n()).max_by_key(|&i| (p.degree(i), req[i])).unwrap();
    order.push(first);
    while order.len() < p.n() {
        let placed: u64 = order.iter().fold(0, |m, &i| m | 1 << i);
        let next = (0..p.n())
            .filter(|&i| placed >> i & 1 == 0)
            .max_by_key(|&i| ((p.nbr_mask(i) & placed).count_ones(), p.degree(i)))
            .unwrap();
        order.push(next);
    }
    let fits = |h: usize, i: usize| {
        let deg_g = g.degree(h) as i32;
        let deg_p = p.degree(i) as i32;
        deg_g >= deg_p && s.get(h) - (deg_g - deg_p) >= req[i]
    };
    let mut map = vec![usize::MAX; p.n()];
    fn rec(
        k: usize,
        order: &[usize],
        p: &Graph,
        g: &Graph,
        used: u64,
        map: &mut [usize],
        fits: &dyn Fn(usize, usize) -> bool,
    ) -> bool {
        if k == order.len() {
            return true;
        }
        let i = order[k];
        for h in bits(g.all_mask() & !used) {
            if !fits(h, i) {
                continue;
            }
            let ok = order[..k].iter().all(|&j| p.has_edge(i, j) == g.has_edge(h, map[j]));
            if !ok {
                continue;
            }
            map[i] = h;
            if rec(k + 1, order, p, g, used | 1 << h, map, fits) {
                return true;
            }
        }
        map[i] = usize::MAX;
        false
    }
    if rec(0, &order, &p, g, 0, &mut map, &fits) {
        Some(map)
    } else {
        None
    }
}
