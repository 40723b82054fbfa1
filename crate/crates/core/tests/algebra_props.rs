mod common;

use common::*;
use lierank_core::dense::CMatrix;
use lierank_core::{PauliOperator, PauliString};
use num_complex::Complex64;
use proptest::prelude::*;

fn minus_i_commutator(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.matmul(b).sub(&b.matmul(a)).scale(Complex64::new(0.0, -1.0))
}

#[test]
fn single_qubit_product_table() {
    let letters = ["I", "X", "Y", "Z"];
    for a in letters {
        for b in letters {
            let (p, q): (PauliString, PauliString) = (a.parse().unwrap(), b.parse().unwrap());
            let r = p.multiply(&q).unwrap();
            assert_eq!(dense_string(&r), dense_string(&p).matmul(&dense_string(&q)), "{a}{b}");
        }
    }
    let x: PauliString = "X".parse().unwrap();
    let y: PauliString = "Y".parse().unwrap();
    assert_eq!(x.multiply(&y).unwrap().to_string(), "iZ");
    assert_eq!(y.multiply(&x).unwrap().to_string(), "-iZ");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn product_matches_dense((p, q) in (1usize..=4).prop_flat_map(|n| (string(n), string(n)))) {
        let r = p.multiply(&q).unwrap();
        let expected = dense_string(&p).matmul(&dense_string(&q));
        prop_assert!(dense_string(&r).max_abs_diff(&expected) <= 1e-12);
        let swapped = dense_string(&q).matmul(&dense_string(&p));
        prop_assert_eq!(p.commutes_with(&q), expected.max_abs_diff(&swapped) <= 1e-12);
    }

    #[test]
    fn commutator_is_antisymmetric(a in operator(3, 6), b in operator(3, 6)) {
        let ab = a.commutator(&b).unwrap();
        let ba = b.commutator(&a).unwrap();
        prop_assert!(ab.add(&ba).unwrap().norm() <= 1e-12);
    }

    #[test]
    fn jacobi_identity(a in operator(3, 4), b in operator(3, 4), c in operator(3, 4)) {
        let t1 = a.commutator(&b.commutator(&c).unwrap()).unwrap();
        let t2 = b.commutator(&c.commutator(&a).unwrap()).unwrap();
        let t3 = c.commutator(&a.commutator(&b).unwrap()).unwrap();
        prop_assert!(t1.add(&t2).unwrap().add(&t3).unwrap().norm() <= 1e-10);
    }

    #[test]
    fn commutator_matches_dense(a in operator(3, 6), b in operator(3, 6)) {
        let sparse = a.commutator(&b).unwrap().to_dense().unwrap();
        let dense = minus_i_commutator(&a.to_dense().unwrap(), &b.to_dense().unwrap());
        prop_assert!(sparse.max_abs_diff(&dense) <= 1e-12);
    }

    #[test]
    fn inner_product_is_normalized_trace(a in operator(3, 6), b in operator(3, 6)) {
        let (da, db) = (a.to_dense().unwrap(), b.to_dense().unwrap());
        let tr = da.adjoint().matmul(&db).trace() / 8.0;
        prop_assert!((a.hs_inner(&b).unwrap() - tr.re).abs() <= 1e-12);
        prop_assert!(tr.im.abs() <= 1e-12);
    }

    #[test]
    fn dense_round_trip(a in operator(4, 8)) {
        let back = PauliOperator::from_dense(&a.to_dense().unwrap()).unwrap();
        prop_assert!(back.add(&a.scale(-1.0)).unwrap().norm() <= 1e-12);
    }

    #[test]
    fn labels_round_trip(s in string(6)) {
        let parsed: PauliString = s.to_string().parse().unwrap();
        prop_assert_eq!(parsed, s);
    }
}
