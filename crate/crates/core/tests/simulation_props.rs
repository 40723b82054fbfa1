mod common;

use common::*;
use lierank_core::dense::{expm_taylor, CMatrix};
use lierank_core::models::{exact_ground_energy, xxz_2x2};
use lierank_core::partitions::sample_partition;
use lierank_core::seed::task_rng;
use lierank_core::statevector::{run_ansatz, Observable};
use lierank_core::vqe::optimize;
use lierank_core::{AnsatzSpec, GeneratorGate, StateVector, VqeSettings};
use num_complex::Complex64;
use proptest::prelude::*;

fn random_state(n: usize, seed: u64) -> StateVector {
    let mut rng = task_rng(seed, &[]);
    let amps: Vec<Complex64> = (0..1usize << n)
        .map(|_| {
            let mut u = || (rand_core::RngCore::next_u64(&mut rng) >> 11) as f64 / (1u64 << 53) as f64 - 0.5;
            Complex64::new(u(), u())
        })
        .collect();
    let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    StateVector::from_amplitudes(amps.iter().map(|a| a / norm).collect()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn gates_are_unitary(g in operator(3, 6), theta in -4.0f64..4.0, seed in any::<u64>()) {
        let gate = GeneratorGate::new(g.clone()).unwrap();
        let u = gate.unitary(theta);
        prop_assert!(u.adjoint().matmul(&u).max_abs_diff(&CMatrix::identity(8)) <= 1e-12);
        let reference = expm_taylor(&g.to_dense().unwrap().scale(Complex64::new(0.0, theta)));
        prop_assert!(u.max_abs_diff(&reference) <= 1e-10);
        let psi = random_state(3, seed);
        let out = psi.apply_exp(&gate, theta).unwrap();
        prop_assert!((out.norm() - 1.0).abs() <= 1e-12);
        let direct = u.mat_vec(psi.amplitudes());
        let diff = out.amplitudes().iter().zip(&direct).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        prop_assert!(diff <= 1e-12);
    }

    #[test]
    fn expectation_matches_dense(h in operator(3, 8), seed in any::<u64>()) {
        let psi = random_state(3, seed);
        let e = Observable::new(&h).unwrap().expectation(&psi).unwrap();
        let hv = h.to_dense().unwrap().mat_vec(psi.amplitudes());
        let reference: Complex64 = psi.amplitudes().iter().zip(&hv).map(|(a, b)| a.conj() * b).sum();
        prop_assert!((e - reference.re).abs() <= 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn energies_respect_the_variational_bound(m in 1usize..=13, p in 1usize..=3, seed in any::<u64>()) {
        let spec = xxz_2x2(0.1, -2.0, 1.0).unwrap();
        let ground = exact_ground_energy(&spec).unwrap();
        let partition = sample_partition(spec.len(), m, &mut task_rng(seed, &[0])).unwrap();
        let ansatz = AnsatzSpec::vha(&spec, &partition, p).unwrap();
        let mut rng = task_rng(seed, &[1]);
        let params: Vec<f64> = (0..ansatz.n_params())
            .map(|_| (rand_core::RngCore::next_u64(&mut rng) % 1000) as f64 / 100.0 - 5.0)
            .collect();
        let psi = run_ansatz(&ansatz, &params, &StateVector::zero_state(4).unwrap()).unwrap();
        prop_assert!((psi.norm() - 1.0).abs() <= 1e-10);
        let e = Observable::from_spec(&spec).unwrap().expectation(&psi).unwrap();
        prop_assert!(e >= ground - 1e-10);
    }
}

#[test]
fn layers_apply_generators_in_order() {
    let spec = xxz_2x2(0.1, -2.0, 1.0).unwrap();
    let partition = sample_partition(spec.len(), 3, &mut task_rng(3, &[])).unwrap();
    let ansatz = AnsatzSpec::vha(&spec, &partition, 2).unwrap();
    let params = [0.3, -0.2, 0.7, 0.1, 0.5, -0.4];
    let mut psi = StateVector::zero_state(4).unwrap();
    for (k, theta) in params.iter().enumerate() {
        let gate = GeneratorGate::new(ansatz.generators()[k % 3].clone()).unwrap();
        psi = psi.apply_exp(&gate, *theta).unwrap();
    }
    let run = run_ansatz(&ansatz, &params, &StateVector::zero_state(4).unwrap()).unwrap();
    assert!((run.fidelity(&psi) - 1.0).abs() <= 1e-12);
}

#[test]
fn optimization_is_deterministic_and_bounded() {
    let spec = xxz_2x2(0.1, -2.0, 1.0).unwrap();
    let ground = exact_ground_energy(&spec).unwrap();
    let partition = sample_partition(spec.len(), 4, &mut task_rng(11, &[])).unwrap();
    let ansatz = AnsatzSpec::vha(&spec, &partition, 2).unwrap();
    let settings = VqeSettings { restarts: 3, ..VqeSettings::vha_default() };
    let a = optimize(&spec, &ansatz, &settings, 99).unwrap();
    let b = optimize(&spec, &ansatz, &settings, 99).unwrap();
    assert_eq!(a, b);
    assert!(a.best_energy >= ground - 1e-10);
    assert!(a.energy_history.windows(2).all(|w| w[1] <= w[0]));
}
