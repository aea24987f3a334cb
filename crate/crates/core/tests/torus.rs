mod common;

use common::{random_graph, random_lists};
use fivelist::colorability::oracle::oracle_exact_colorable;
use fivelist::colorability::FilterConfig;
use fivelist::graph::{isomorphic, subgraph_isomorphic, Graph};
use fivelist::torus::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn five_colorable(g: &Graph) -> bool {
    oracle_exact_colorable(g, &vec![0b11111; g.n()]).unwrap()
}

#[test]
fn obstructions_are_six_critical() {
    for (name, g) in ObstructionSet::builtin().graphs {
        assert!(!five_colorable(&g), "{name} is 5-colorable");
        for (u, v) in g.edges() {
            let mut h = g.clone();
            h.remove_edge(u, v);
            assert!(five_colorable(&h), "{name} - {u}{v} still needs six colors");
        }
    }
}

#[test]
fn containment_examples() {
    let obs = ObstructionSet::builtin();
    let get = |n: &str| obs.graphs.iter().find(|(m, _)| m == n).unwrap().1.clone();
    assert!(subgraph_isomorphic(&get("K6"), &Graph::complete(7)));
    assert!(!subgraph_isomorphic(&get("C3+C5"), &Graph::complete(7)));
    let mut w5 = Graph::empty(6).unwrap();
    for i in 0..5 {
        w5.add_edge(i, (i + 1) % 5);
        w5.add_edge(i, 5);
    }
    assert!(!subgraph_isomorphic(&get("K6"), &w5));
}

#[test]
fn certified_graphs_color_from_random_lists() {
    let mut rng = StdRng::seed_from_u64(19);
    let obs = ObstructionSet::builtin();
    let mut certified = 0;
    for _ in 0..150 {
        let n = rng.gen_range(5..12);
        let p = rng.gen_range(0.4..0.9);
        let g = random_graph(&mut rng, n, p);
        if classify(&g, &obs, &torus_filter()).0 != Classification::Certified5Choosable {
            continue;
        }
        certified += 1;
        for _ in 0..100 {
            let lists = random_lists(&mut rng, &vec![5; n], 10);
            assert!(oracle_exact_colorable(&g, &lists).unwrap(), "{g:?}");
        }
    }
    assert!(certified > 20, "{certified}");
}

#[test]
fn classification_ignores_labels() {
    let mut rng = StdRng::seed_from_u64(23);
    let obs = ObstructionSet::builtin();
    for _ in 0..60 {
        let n = rng.gen_range(5..10);
        let g = random_graph(&mut rng, n, 0.7);
        let mut perm: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            perm.swap(i, rng.gen_range(0..=i));
        }
        let cfg = FilterConfig::default();
        let a = classify(&g, &obs, &cfg).0;
        let b = classify(&g.permuted(&perm), &obs, &cfg).0;
        // the certifier's search may differ by labeling; the obstruction verdict may not
        if matches!(a, Classification::ContainsObstruction(_)) || matches!(b, Classification::ContainsObstruction(_)) {
            assert_eq!(a, b);
        }
    }
}

fn k7_on_torus() -> Vec<Vec<usize>> {
    (0..7).map(|i| [1, 3, 2, 6, 4, 5].iter().map(|d| (i + d) % 7).collect()).collect()
}

#[test]
fn k7_fragment_spacing_and_gluing() {
    let rot = k7_on_torus();
    let mut spacings = Vec::new();
    for a in 0..7 {
        for b in a + 1..7 {
            for c in b + 1..7 {
                for tri in [[a, b, c], [a, c, b]] {
                    let Ok(pc) = cut_torus(&rot, tri) else { continue };
                    spacings.push(pc.spacing());
                    let glued = glue_ends(&pc, true);
                    assert!(glued.iter().all(|t| t.graph.n() == pc.n() - 3));
                    assert!(glued.iter().any(|t| isomorphic(&t.graph, &Graph::complete(7))));
                }
            }
        }
    }
    // every fragment of K7 has its two triangles joined only through the other four vertices
    assert!(!spacings.is_empty());
    assert!(spacings.iter().all(|&d| d == 2), "{spacings:?}");
}

#[test]
fn empty_pipeline() {
    let r = run_torus_pipeline(&Default::default(), &ObstructionSet::builtin(), &TorusConfig::default());
    assert!(r.rows.is_empty());
    assert_eq!(r.unresolved(), 0);
}

/// A torus triangulation where no part is found from the whole graph down; coloring
/// one vertex first leaves a colorable rest.
fn stubborn_triangulation() -> Graph {
    let edges = [
        (0, 1),
        (0, 2),
        (0, 3),
        (0, 4),
        (0, 5),
        (0, 8),
        (0, 9),
        (0, 10),
        (0, 12),
        (1, 2),
        (1, 4),
        (1, 5),
        (1, 6),
        (1, 7),
        (1, 10),
        (1, 11),
        (2, 3),
        (2, 6),
        (2, 7),
        (2, 8),
        (2, 9),
        (2, 11),
        (2, 12),
        (3, 4),
        (3, 9),
        (3, 10),
        (4, 5),
        (4, 10),
        (4, 11),
        (5, 6),
        (5, 11),
        (6, 7),
        (6, 11),
        (6, 12),
        (7, 8),
        (7, 12),
        (8, 9),
        (8, 12),
        (9, 10),
    ];
    Graph::from_edges(13, &edges).unwrap()
}

#[test]
fn one_vertex_first_certificate_holds() {
    let g = stubborn_triangulation();
    let steps = certify_choosable(&g, &torus_filter()).expect("certified");
    assert!(steps[0].to_string().starts_with("alon-tarsi:"), "{}", steps[0]);
    let mut rng = StdRng::seed_from_u64(5);
    for _ in 0..100 {
        let lists = random_lists(&mut rng, &[5; 13], 10);
        assert!(oracle_exact_colorable(&g, &lists).unwrap());
    }
}
