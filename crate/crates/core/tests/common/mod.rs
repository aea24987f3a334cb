#![allow(dead_code)]

use fivelist::colorability::oracle::oracle_exact_critical;
use fivelist::colorability::{Orientation, SizeFunction};
use fivelist::cycle_canvas::{run_class, CycleCanvas, CycleLibrary, Discard, GenConfig, MemorySink};
use fivelist::graph::Graph;
use fivelist::prism_canvas::{run_spacing, PrismConfig};
use rand::Rng;

/// Signed count of Eulerian subgraphs (even minus odd edge count) by listing every
/// subset of arcs.
pub fn parity_difference_by_subsets(o: &Orientation) -> i128 {
    let arcs = o.arcs();
    assert!(arcs.len() <= 20);
    let mut total = 0i128;
    for mask in 0u32..1 << arcs.len() {
        let mut bal = vec![0i32; o.n()];
        for (i, &(u, v)) in arcs.iter().enumerate() {
            if mask >> i & 1 == 1 {
                bal[u] += 1;
                bal[v] -= 1;
            }
        }
        if bal.iter().all(|&b| b == 0) {
            total += if mask.count_ones() % 2 == 0 { 1 } else { -1 };
        }
    }
    total
}

pub fn random_graph(rng: &mut impl Rng, n: usize, p: f64) -> Graph {
    let mut g = Graph::empty(n).unwrap();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                g.add_edge(u, v);
            }
        }
    }
    g
}

/// Lists of the given sizes drawn uniformly from `0..palette`, as bit masks.
pub fn random_lists(rng: &mut impl Rng, sizes: &[i32], palette: usize) -> Vec<u64> {
    sizes
        .iter()
        .map(|&k| {
            let mut colors: Vec<usize> = (0..palette).collect();
            let mut m = 0u64;
            for i in 0..k.max(0) as usize {
                let j = rng.gen_range(i..palette);
                colors.swap(i, j);
                m |= 1 << colors[i];
            }
            m
        })
        .collect()
}

/// Library of `3..=max_l` together with every discarded canvas.
pub fn cycles_with_discards(max_l: usize) -> (CycleLibrary, Vec<Discard>) {
    let mut lib = CycleLibrary::new();
    let mut discards = Vec::new();
    for l in 3..=max_l {
        let mut sink = MemorySink::default();
        let kept = run_class(l, &lib, Vec::new(), &GenConfig::default(), &mut sink).unwrap();
        discards.extend(sink.discarded);
        lib.insert(l, kept);
    }
    (lib, discards)
}

pub fn rim(k: usize) -> Vec<(usize, usize)> {
    (0..k).map(|i| (i, (i + 1) % k)).collect()
}

/// Boundary vertices as a mask and the boundary cycle edges of a cycle-canvas.
pub fn boundary_of(c: &CycleCanvas) -> (u64, Vec<(usize, usize)>) {
    (c.boundary_mask(), c.boundary_edges())
}

const ORACLE_PALETTE: usize = 6;

fn oracle_critical(g: &Graph, t_mask: u64, t_edges: &[(usize, usize)]) -> bool {
    let s = SizeFunction((0..g.n()).map(|v| if t_mask >> v & 1 == 1 { 0 } else { 5 }).collect());
    oracle_exact_critical(g, t_mask, t_edges, &s, ORACLE_PALETTE).unwrap()
}

/// Oracle pass over every cycle-canvas with at most `max_n` vertices, kept or discarded,
/// up to circumference `max_l`: (checked, oracle-critical, false discards).
pub fn cycle_soundness(max_l: usize, max_n: usize) -> (usize, usize, Vec<String>) {
    let (lib, discards) = cycles_with_discards(max_l);
    let mut checked = 0;
    let mut critical = 0;
    let mut false_discards = Vec::new();
    for c in lib.values().flatten().filter(|c| c.n() <= max_n) {
        checked += 1;
        let g = c.graph().to_graph().unwrap();
        critical += oracle_critical(&g, c.boundary_mask(), &c.boundary_edges()) as usize;
    }
    for d in discards.iter().filter(|d| d.canvas.n() <= max_n) {
        checked += 1;
        let g = d.canvas.graph().to_graph().unwrap();
        if oracle_critical(&g, d.canvas.boundary_mask(), &d.canvas.boundary_edges()) {
            false_discards.push(format!("{} ({})", d.canvas.key().to_hex(), d.witness));
        }
    }
    (checked, critical, false_discards)
}

/// Same for prism-canvases of spacing `0..=max_d`: (checked, false discards).
pub fn prism_soundness(max_d: usize, max_n: usize) -> (usize, Vec<String>) {
    let (lib, _) = cycles_with_discards(2 * max_d + 6);
    let mut checked = 0;
    let mut false_discards = Vec::new();
    for d in 0..=max_d {
        let mut sink = fivelist::work::MemorySink::default();
        let kept = run_spacing(d, &lib, Vec::new(), &PrismConfig::default(), &mut sink).unwrap();
        checked += kept.iter().filter(|p| p.n() <= max_n).count();
        for x in sink.discarded.iter().filter(|x| x.canvas.n() <= max_n) {
            checked += 1;
            let g = x.canvas.graph().to_graph().unwrap();
            if oracle_critical(&g, x.canvas.boundary_mask(), &x.canvas.boundary_edges()) {
                false_discards.push(format!("{} ({})", x.canvas.key().to_hex(), x.witness));
            }
        }
    }
    (checked, false_discards)
}
