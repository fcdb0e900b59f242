//! Randomized structural invariants, driven by proptest over seeds and
//! shapes so failures shrink to small reproducible cases.

use holevo_core::ensemble::{CorrelationMatrix, Ensemble};
use holevo_core::linalg::{
    kron, polar_left, random_ginibre, random_haar_unitary, random_probabilities, svd, trial_rng,
    ComplexMatrix,
};
use holevo_core::state::{random_density, DensityMatrix};
use holevo_core::Tolerances;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::Rng;

fn tol() -> Tolerances {
    Tolerances::default()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn kron_respects_the_mixed_product(seed in 0u64..1 << 20, da in 2usize..4, db in 2usize..4) {
        let mut rng = trial_rng(0, seed);
        let a = random_ginibre(da, da, &mut rng);
        let b = random_ginibre(db, db, &mut rng);
        let c = random_ginibre(da, da, &mut rng);
        let d = random_ginibre(db, db, &mut rng);
        let left = kron(&a, &b).matmul(&kron(&c, &d));
        let right = kron(&a.matmul(&c), &b.matmul(&d));
        prop_assert!(left.dist_frobenius(&right) < 1e-10);
    }

    #[test]
    fn fidelity_is_symmetric_bounded_and_reflexive(seed in 0u64..1 << 20, d in 2usize..5) {
        let t = tol();
        let mut rng = trial_rng(1, seed);
        let ra = rng.random_range(1..=d);
        let rb = rng.random_range(1..=d);
        let rho = random_density(d, ra, &mut rng, &t).unwrap();
        let sigma = random_density(d, rb, &mut rng, &t).unwrap();
        let f_ab = rho.fidelity(&sigma, &t).unwrap();
        let f_ba = sigma.fidelity(&rho, &t).unwrap();
        prop_assert!((f_ab - f_ba).abs() < 1e-9);
        prop_assert!((-1e-10..=1.0 + 1e-10).contains(&f_ab));
        prop_assert!((rho.fidelity(&rho, &t).unwrap() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn entropy_is_invariant_under_basis_change(seed in 0u64..1 << 20, d in 2usize..5) {
        let t = tol();
        let mut rng = trial_rng(2, seed);
        let rank = rng.random_range(1..=d);
        let rho = random_density(d, rank, &mut rng, &t).unwrap();
        let u = random_haar_unitary(d, &mut rng);
        let rotated = DensityMatrix::new(
            u.matmul(rho.mat()).matmul(&u.dagger()).hermitize(),
            &t,
        )
        .unwrap();
        let s0 = rho.von_neumann_entropy(&t).unwrap();
        let s1 = rotated.von_neumann_entropy(&t).unwrap();
        prop_assert!((s0 - s1).abs() < 1e-9);
        prop_assert!(s0 >= -1e-12 && s0 <= (d as f64).log2() + 1e-9);
    }

    #[test]
    fn marginals_of_a_product_are_its_factors(seed in 0u64..1 << 20, da in 2usize..4, db in 2usize..4) {
        let t = tol();
        let mut rng = trial_rng(3, seed);
        let ra = rng.random_range(1..=da);
        let rb = rng.random_range(1..=db);
        let rho_a = random_density(da, ra, &mut rng, &t).unwrap();
        let rho_b = random_density(db, rb, &mut rng, &t).unwrap();
        let joint = DensityMatrix::new(kron(rho_a.mat(), rho_b.mat()), &t)
            .unwrap()
            .into_split(da, db)
            .unwrap();
        let got_a = joint.partial_trace(holevo_core::state::Subsystem::A, &t).unwrap();
        let got_b = joint.partial_trace(holevo_core::state::Subsystem::B, &t).unwrap();
        prop_assert!(got_a.mat().dist_frobenius(rho_a.mat()) < 1e-10);
        prop_assert!(got_b.mat().dist_frobenius(rho_b.mat()) < 1e-10);
    }

    #[test]
    fn svd_and_polar_reconstruct_their_input(seed in 0u64..1 << 20, rows in 1usize..6, cols in 1usize..6) {
        let mut rng = trial_rng(4, seed);
        let x = random_ginibre(rows, cols, &mut rng);
        let f = svd(&x).unwrap();
        let k = rows.min(cols);
        let sigma = ComplexMatrix::from_fn(rows, cols, |i, j| {
            if i == j && i < k {
                Complex64::new(f.singular[i], 0.0)
            } else {
                Complex64::ZERO
            }
        });
        let rebuilt = f.u.matmul(&sigma).matmul(&f.v.dagger());
        prop_assert!(rebuilt.dist_frobenius(&x) < 1e-9);
        prop_assert!(f.singular.iter().all(|&s| s >= 0.0));
        prop_assert!(f.singular.windows(2).all(|w| w[0] >= w[1]));
        if rows == cols {
            let polar = polar_left(&x).unwrap();
            let rebuilt = polar.positive.matmul(&polar.unitary);
            prop_assert!(rebuilt.dist_frobenius(&x) < 1e-9);
            let gram = polar.unitary.dagger().matmul(&polar.unitary);
            prop_assert!(gram.dist_frobenius(&ComplexMatrix::identity(rows)) < 1e-9);
        }
    }

    #[test]
    fn holevo_quantity_sits_between_zero_and_average_entropy(seed in 0u64..1 << 20, n in 2usize..5, d in 2usize..4) {
        let t = tol();
        let mut rng = trial_rng(5, seed);
        let probs = random_probabilities(n, &mut rng);
        let states = (0..n)
            .map(|_| {
                let rank = rng.random_range(1..=d);
                random_density(d, rank, &mut rng, &t).unwrap()
            })
            .collect();
        let ens = Ensemble::from_parts(&probs, states).unwrap();
        let rep = ens.holevo(&t).unwrap();
        prop_assert!(rep.chi >= -1e-10);
        prop_assert!(rep.chi <= rep.average_entropy + 1e-9);
    }

    #[test]
    fn correlation_matrix_has_unit_trace_and_probability_diagonal(seed in 0u64..1 << 20, n in 2usize..6, d in 2usize..4) {
        let t = tol();
        let mut rng = trial_rng(6, seed);
        let probs = random_probabilities(n, &mut rng);
        let states = (0..n)
            .map(|_| {
                let rank = rng.random_range(1..=d);
                random_density(d, rank, &mut rng, &t).unwrap()
            })
            .collect();
        let ens = Ensemble::from_parts(&probs, states).unwrap();
        let corr = CorrelationMatrix::from_ensemble(&ens, &t).unwrap();
        prop_assert!((corr.mat().trace() - Complex64::ONE).norm() < 1e-9);
        for (i, &p) in probs.iter().enumerate() {
            prop_assert!((corr.mat().get(i, i).re - p).abs() < 1e-9);
            for j in 0..n {
                let z = corr.mat().get(i, j);
                prop_assert!(z.im.abs() < 1e-12);
                prop_assert!((z - corr.mat().get(j, i)).norm() < 1e-12);
            }
        }
    }
}
