use std::sync::OnceLock;

use fivelist::cycle_canvas::{enumerate_all, CycleCanvas, CycleLibrary, GenConfig};
use fivelist::plane_graph::PlaneGraph;
use fivelist::prism_canvas::{enumerate_skeletons, PrismCanvas};
use fivelist::store::{parse_records, Record, ToRecord};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

fn library() -> &'static CycleLibrary {
    static LIB: OnceLock<CycleLibrary> = OnceLock::new();
    LIB.get_or_init(|| enumerate_all(8, &GenConfig::default()).unwrap())
}

fn all_cycles() -> Vec<CycleCanvas> {
    library().values().flatten().cloned().collect()
}

/// Relabels by `perm` and rotates every rotation list by `shift[v]`.
fn scramble(g: &PlaneGraph, perm: &[usize], shift: &[usize]) -> PlaneGraph {
    let n = g.n();
    let mut rot = vec![Vec::new(); n];
    for v in 0..n {
        let mut r: Vec<usize> = g.rotation(v).iter().map(|&u| perm[u]).collect();
        let len = r.len().max(1);
        r.rotate_left(shift[v] % len);
        rot[perm[v]] = r;
    }
    PlaneGraph::new(rot).unwrap()
}

fn scramble_params(n: usize, seed: u64) -> (Vec<usize>, Vec<usize>) {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(&mut rng);
    (perm, (0..n).map(|_| rng.gen_range(0..8)).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn cycle_key_survives_relabeling(idx in 0usize..166, seed in any::<u64>()) {
        let cs = all_cycles();
        let c = &cs[idx % cs.len()];
        let n = c.n();
        let (perm, shift) = scramble_params(n, seed);
        let g = scramble(c.graph(), &perm, &shift);
        let l = c.circumference();
        let start = (seed as usize) % l;
        let boundary: Vec<usize> = (0..l).map(|i| perm[c.boundary()[(start + i) % l]]).collect();
        let d = CycleCanvas::new(&g, &boundary).unwrap();
        prop_assert_eq!(d.key(), c.key());
    }

    #[test]
    fn prism_key_survives_relabeling(d in 0usize..4, idx in 0usize..64, seed in any::<u64>()) {
        let sks = enumerate_skeletons(d);
        let p = &sks[idx % sks.len()];
        let n = p.n();
        let (perm, shift) = scramble_params(n, seed);
        let g = scramble(p.graph(), &perm, &shift);
        let map = |t: [usize; 3]| {
            let r = (seed as usize) % 3;
            [perm[t[r]], perm[t[(r + 1) % 3]], perm[t[(r + 2) % 3]]]
        };
        let (a, b) = if seed % 2 == 0 { (map(p.t1()), map(p.t2())) } else { (map(p.t2()), map(p.t1())) };
        let q = PrismCanvas::new(&g, a, b).unwrap();
        prop_assert_eq!(q.key(), p.key());
        prop_assert_eq!(q.spacing(), p.spacing());
    }
}

fn mirror_of(c: &CycleCanvas) -> CycleCanvas {
    let b = c.boundary();
    let walk: Vec<usize> = std::iter::once(b[0]).chain(b[1..].iter().rev().copied()).collect();
    CycleCanvas::new(&c.graph().mirror(), &walk).unwrap()
}

#[test]
fn mirror_images() {
    let mut chiral = 0;
    for c in all_cycles() {
        let m = mirror_of(&c);
        assert_eq!(m.unoriented_key(), c.unoriented_key());
        if m.key() != c.key() {
            chiral += 1;
        }
        // candidate sets are closed under reflection
        let l = c.circumference();
        assert!(library()[&l].iter().any(|x| x.key() == m.key()));
    }
    // at l=7 two of the 17 candidates are mirror images of each other
    assert!(chiral >= 2);
}

#[test]
fn records_round_trip() {
    for c in all_cycles().into_iter().filter(|c| c.circumference() <= 7) {
        let text = c.to_record().to_text();
        let back = parse_records(&text).unwrap();
        assert_eq!(back.len(), 1);
        assert_eq!(back[0].key_hex(), c.key().to_hex());
        assert_eq!(back[0].to_text(), text);
    }
    for d in 0..3 {
        for p in enumerate_skeletons(d) {
            let text = p.to_record().to_text();
            let back = parse_records(&text).unwrap();
            match &back[0] {
                Record::Prism(q) => assert_eq!(q.key(), p.key()),
                _ => panic!("wrong kind"),
            }
            assert_eq!(back[0].to_text(), text);
        }
    }
}
