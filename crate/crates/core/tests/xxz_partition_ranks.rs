//! Ranks of XXZ partitions, frozen from an exact rational-arithmetic closure.

use lierank_core::models::{xxz_2x2_with, OneBodyTerm};
use lierank_core::partitions::{generators_from_partition, Partition};
use lierank_core::close_algebra;

const CASES: &[(&[&[usize]], usize)] = &[
    (&[&[0, 1, 2, 4, 5], &[3, 7, 11, 12], &[6, 9], &[8, 10]], 43),
    (&[&[0, 2, 4, 7, 10, 11], &[1, 3], &[5, 6, 8, 9], &[12]], 50),
    (&[&[0, 8, 11, 12], &[1, 3, 4, 7, 9], &[2], &[5, 6, 10]], 56),
    (&[&[0, 3], &[1, 4, 5, 12], &[2], &[6], &[7, 9], &[8], &[10], &[11]], 53),
];

#[test]
fn exact_closure_matches_rational_ranks() {
    for (j, delta) in [(0.1, -2.0), (1.0, -20.0)] {
        let spec = xxz_2x2_with(j, delta, OneBodyTerm::Offset { c: 1.0 }).unwrap();
        for (blocks, rank) in CASES {
            let p = Partition::new(13, blocks.iter().map(|b| b.to_vec()).collect()).unwrap();
            let gens = generators_from_partition(&spec, &p).unwrap();
            assert_eq!(close_algebra(&gens, None).unwrap().final_rank(), *rank, "{blocks:?} at J = {j}");
        }
    }
}

#[test]
fn singleton_terms_reach_sixty_one() {
    let spec = xxz_2x2_with(1.0, -20.0, OneBodyTerm::Offset { c: 1.0 }).unwrap();
    assert_eq!(close_algebra(&spec.singleton_generators(), None).unwrap().final_rank(), 61);
}
