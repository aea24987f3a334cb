//! Greedy list-coloring simulation that is valid for every list assignment.
//!
//! `r(v)` is a lower bound on the colors still available at `v`. Vertices whose
//! bound exceeds their remaining degree are set aside and colored last. Otherwise the
//! most constrained vertex `u` is relieved by one of two moves:
//!
//! - color a neighbor `v` with `r(v) > r(u)` using a color outside `u`'s list, so `u`
//!   keeps its bound while losing a neighbor;
//! - color two non-adjacent neighbors `v`, `w` with `r(v) + r(w) > r(u)` so that `u`
//!   loses at most one color for two neighbors.
//!
//! When neither applies the smallest-bound vertex is colored with the plain decrease.

use super::SizeFunction;
use crate::graph::{bits, Graph};

pub fn greedy_certify(g: &Graph, s: &SizeFunction) -> bool {
    assert_eq!(g.n(), s.len());
    let mut r: Vec<i32> = s.0.clone();
    let mut alive = g.all_mask();
    let deg = |alive: u64, v: usize| (g.nbr_mask(v) & alive).count_ones() as i32;

    loop {
        // set aside vertices with a spare color
        loop {
            let spare = bits(alive).filter(|&v| r[v] > deg(alive, v)).fold(0u64, |m, v| m | 1 << v);
            if spare == 0 {
                break;
            }
            alive &= !spare;
        }
        if alive == 0 {
            return true;
        }
        if bits(alive).any(|v| r[v] <= 0) {
            return false;
        }

        let mut targets: Vec<usize> = bits(alive).collect();
        targets.sort_by_key(|&v| (r[v] - deg(alive, v), r[v], v));

        let mut moved = false;
        'targets: for &u in &targets {
            let nbrs = g.nbr_mask(u) & alive;
            // protect u by coloring a neighbor with a longer list
            if let Some(v) = bits(nbrs).filter(|&v| r[v] > r[u]).max_by_key(|&v| (r[v] - deg(alive, v), usize::MAX - v))
            {
                alive &= !(1 << v);
                for x in bits(g.nbr_mask(v) & alive) {
                    if x != u {
                        r[x] -= 1;
                    }
                }
                moved = true;
                break 'targets;
            }
            // two non-adjacent neighbors cost u a single color
            for v in bits(nbrs) {
                for w in bits(nbrs & !g.nbr_mask(v) & above(v)) {
                    if r[v] + r[w] > r[u] {
                        alive &= !(1 << v | 1 << w);
                        r[u] -= 1;
                        for x in bits((g.nbr_mask(v) | g.nbr_mask(w)) & alive) {
                            if x != u {
                                r[x] -= (g.has_edge(x, v) as i32) + (g.has_edge(x, w) as i32);
                            }
                        }
                        moved = true;
                        break 'targets;
                    }
                }
            }
        }
        if !moved {
            let v = bits(alive).min_by_key(|&v| (r[v], v)).unwrap();
            alive &= !(1 << v);
            for x in bits(g.nbr_mask(v) & alive) {
                r[x] -= 1;
            }
        }
    }
}

#[inline]
fn above(v: usize) -> u64 {
    if v >= 63 {
        0
    } else {
        !((1u64 << (v + 1)) - 1)
    }
}
