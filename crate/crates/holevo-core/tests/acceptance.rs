//! Acceptance suite: one test per verified claim, each printing a
//! `criterion NN …: PASS` line (visible with `--nocapture`).
//!
//! Run with `cargo test --test acceptance -- --nocapture`.

use holevo_core::blockpos::{
    chain_to_p, forms_equivalence_check, lemma1_decompose, lemma2_check, projector_check,
    stack_from_chain, Block3, ChainForm, UnitaryChain,
};
use holevo_core::channel::{naimark_dilate, KrausChannel};
use holevo_core::ensemble::{
    check_refinement, check_theorem1, counterexample_search, induce_ensemble,
    induced_agreement_residual, two_state_equality_check, CorrelationMatrix, Ensemble,
};
use holevo_core::harness::{run_campaign, run_trials, CampaignConfig, ReportFormat, Scenario, Verdict};
use holevo_core::linalg::{
    kron, random_ginibre, random_haar_unitary, random_probabilities, trial_rng, ComplexMatrix,
};
use holevo_core::state::{random_bipartite, random_density, random_pure, DensityMatrix};
use holevo_core::Tolerances;
use num_complex::Complex64;
use rand::Rng;

fn pass(criterion: u32, what: &str) {
    println!("criterion {criterion:02} ({what}): PASS");
}

#[test]
fn criterion_01_entropy_bound_holds_over_random_campaign() {
    let tol = Tolerances::default();
    let mut cfg = CampaignConfig::new(Scenario::Theorem1, 42);
    cfg.trials = 1000;
    let rows = run_trials(&cfg).expect("campaign runs");
    assert_eq!(rows.len(), 1000);
    for row in &rows {
        assert_eq!(row.verdict, Verdict::Pass, "trial {} failed", row.trial);
        assert!(
            row.margin.unwrap() >= -tol.theorem,
            "trial {}: margin {}",
            row.trial,
            row.margin.unwrap()
        );
    }
    pass(1, "chi bounded by both marginal entropies over 1000 random trials");
}

#[test]
fn criterion_02_tightness_witnesses() {
    let tol = Tolerances::default();
    // Maximally entangled two-qubit state, measured in the B basis: the
    // bound is saturated at exactly one bit on both sides.
    let half = Complex64::new(0.5, 0.0);
    let mut bell = ComplexMatrix::zeros(4, 4);
    for (i, j) in [(0, 0), (0, 3), (3, 0), (3, 3)] {
        bell.set(i, j, half);
    }
    let bell = DensityMatrix::new(bell, &tol)
        .unwrap()
        .into_split(2, 2)
        .unwrap();
    let mut e0 = ComplexMatrix::zeros(2, 2);
    e0.set(0, 0, Complex64::ONE);
    let mut e1 = ComplexMatrix::zeros(2, 2);
    e1.set(1, 1, Complex64::ONE);
    let basis = KrausChannel::new(vec![e0, e1], None, &tol).unwrap();
    let rep = check_theorem1(&bell, &basis, &tol).unwrap();
    assert!((rep.chi - 1.0).abs() < 1e-9);
    assert!((rep.entropy_a - 1.0).abs() < 1e-9);
    assert!((rep.entropy_b - 1.0).abs() < 1e-9);

    // Product states carry no correlations: chi vanishes for any channel.
    let mut rng = trial_rng(2, 0);
    for _ in 0..20 {
        let d_a = rng.random_range(2..=3);
        let d_b = rng.random_range(2..=3);
        let rho_a = random_density(d_a, d_a, &mut rng, &tol).unwrap();
        let rho_b = random_density(d_b, d_b, &mut rng, &tol).unwrap();
        let product = DensityMatrix::new(kron(rho_a.mat(), rho_b.mat()), &tol)
            .unwrap()
            .into_split(d_a, d_b)
            .unwrap();
        let kraus = rng.random_range(1..=d_b * d_b);
        let channel = KrausChannel::random(d_b, kraus, &mut rng, &tol).unwrap();
        let rep = check_theorem1(&product, &channel, &tol).unwrap();
        assert!(rep.chi <= 1e-9, "product state chi = {}", rep.chi);
    }
    pass(2, "maximally entangled state saturates at 1 bit; product states give chi = 0");
}

#[test]
fn criterion_03_refining_outcomes_never_lowers_chi() {
    let tol = Tolerances::default();
    for trial in 0..200u64 {
        let mut rng = trial_rng(3, trial);
        let d_a = rng.random_range(2..=4);
        let d_b = rng.random_range(2..=4);
        let rank = rng.random_range(1..=d_a * d_b);
        let kraus = rng.random_range(2..=d_b * d_b);
        let rho = random_bipartite(d_a, d_b, rank, &mut rng, &tol).unwrap();
        let channel = KrausChannel::random(d_b, kraus, &mut rng, &tol).unwrap();
        let kept = induce_ensemble(&rho, &channel, &tol).unwrap().ensemble.len();
        // Random partition of the induced outcomes into contiguous parts.
        let mut parts: Vec<Vec<usize>> = Vec::new();
        let mut current = Vec::new();
        for idx in 0..kept {
            current.push(idx);
            if rng.random_range(0..2) == 0 {
                parts.push(std::mem::take(&mut current));
            }
        }
        if !current.is_empty() {
            parts.push(current);
        }
        let rep = check_refinement(&rho, &channel, &parts, &tol).unwrap();
        assert!(
            rep.margin >= -1e-9,
            "trial {trial}: coarse chi exceeded fine chi by {}",
            -rep.margin
        );
    }
    pass(3, "chi is monotone under outcome refinement over 200 partitions");
}

#[test]
fn criterion_04_dilated_measurements_match_the_original() {
    let tol = Tolerances::default();
    for trial in 0..200u64 {
        let mut rng = trial_rng(4, trial);
        let d_a = rng.random_range(2..=3);
        let d_b = rng.random_range(2..=4);
        let kraus = rng.random_range(1..=6);
        let rank = rng.random_range(1..=d_a * d_b);
        let channel = KrausChannel::random(d_b, kraus, &mut rng, &tol).unwrap();
        let dilation = naimark_dilate(&channel, &tol).unwrap();

        for (mu, m) in channel.kraus().iter().enumerate() {
            let povm = m.dagger().matmul(m);
            let residual = dilation.compress(mu).dist_frobenius(&povm);
            assert!(residual <= 1e-8, "trial {trial}: compression {residual}");
        }
        let dim_bc = d_b * kraus;
        let mut total = ComplexMatrix::zeros(dim_bc, dim_bc);
        for p in dilation.projectors() {
            assert!(p.matmul(p).dist_frobenius(p) <= 1e-9);
            assert!(p.dagger().dist_frobenius(p) <= 1e-9);
            total = total.add(p);
        }
        assert!(total.dist_frobenius(&ComplexMatrix::identity(dim_bc)) <= 1e-9);

        let rho = random_bipartite(d_a, d_b, rank, &mut rng, &tol).unwrap();
        let direct = induce_ensemble(&rho, &channel, &tol).unwrap();
        let embedded = dilation.embed_bipartite(&rho, &tol).unwrap();
        let dilated =
            induce_ensemble(&embedded, &dilation.projective_channel(&tol).unwrap(), &tol).unwrap();
        let agreement = induced_agreement_residual(&direct, &dilated);
        assert!(agreement <= 1e-8, "trial {trial}: agreement {agreement}");
    }
    pass(4, "200 dilations: projective, complete, compressing, same induced ensembles");
}

#[test]
fn criterion_05_small_ensembles_have_psd_correlation_matrices() {
    let tol = Tolerances::default();
    for (n, seed) in [(2usize, 52u64), (3, 53)] {
        for trial in 0..500u64 {
            let mut rng = trial_rng(seed, trial);
            let d = rng.random_range(2..=4);
            let probs = random_probabilities(n, &mut rng);
            let states = (0..n)
                .map(|i| {
                    // Alternate pure and mixed entries.
                    let rank = if (trial as usize + i) % 2 == 0 {
                        1
                    } else {
                        rng.random_range(1..=d)
                    };
                    random_density(d, rank, &mut rng, &tol).unwrap()
                })
                .collect();
            let ens = Ensemble::from_parts(&probs, states).unwrap();
            let corr = CorrelationMatrix::from_ensemble(&ens, &tol).unwrap();
            assert!(
                corr.min_eigenvalue() >= -1e-9,
                "N={n} trial {trial}: min eig {}",
                corr.min_eigenvalue()
            );
        }
    }
    pass(5, "1000 random two- and three-state ensembles: correlation matrix PSD");
}

#[test]
fn criterion_06_four_state_search_finds_an_indefinite_witness() {
    let tol = Tolerances::default();
    let witness = counterexample_search(4, 2, 10000, 42, &tol)
        .expect("search runs")
        .expect("a violating four-ensemble exists within the budget");
    assert!(witness.min_eig < -1e-6, "min eig {}", witness.min_eig);

    // Independent re-verification: rebuild the matrix from the witness
    // ensemble and evaluate the Rayleigh quotient of the stored vector with
    // plain matrix arithmetic, avoiding the eigensolver entirely.
    let corr = CorrelationMatrix::from_ensemble(&witness.ensemble, &tol).unwrap();
    let n = witness.eigenvector.len();
    let mut x = ComplexMatrix::zeros(n, 1);
    for (i, &z) in witness.eigenvector.iter().enumerate() {
        x.set(i, 0, z);
    }
    let num = x.dagger().matmul(corr.mat()).matmul(&x).get(0, 0).re;
    let den = x.dagger().matmul(&x).get(0, 0).re;
    let rayleigh = num / den;
    assert!(
        rayleigh < -1e-6,
        "re-verified Rayleigh quotient {rayleigh} not negative enough"
    );
    pass(6, "four pure qubit states can break positivity; witness re-verified");
}

#[test]
fn criterion_07_two_pure_states_give_equal_chi_and_correlation_entropy() {
    let tol = Tolerances::default();
    for trial in 0..200u64 {
        let mut rng = trial_rng(7, trial);
        let d = rng.random_range(2..=4);
        let probs = random_probabilities(2, &mut rng);
        let states = vec![
            random_pure(d, &mut rng, &tol).unwrap(),
            random_pure(d, &mut rng, &tol).unwrap(),
        ];
        let ens = Ensemble::from_parts(&probs, states).unwrap();
        let rep = two_state_equality_check(&ens, &tol).unwrap();
        assert!(
            rep.gap.abs() <= 1e-9,
            "trial {trial}: |chi - S(C)| = {}",
            rep.gap.abs()
        );
    }
    pass(7, "200 pure pairs: chi equals the correlation-matrix entropy");
}

#[test]
fn criterion_08_three_state_extension_pipeline() {
    let mut cfg = CampaignConfig::new(Scenario::Theorem2, 8);
    cfg.trials = 500;
    let rows = run_trials(&cfg).expect("campaign runs");
    assert_eq!(rows.len(), 500);
    for row in &rows {
        assert_eq!(row.verdict, Verdict::Pass, "trial {} failed", row.trial);
        assert!(row.residual_uvw.unwrap() <= 1e-10);
        let residuals = row.residuals.as_ref().unwrap();
        assert!(residuals["block_min_eig_defect"] <= 1e-8);
        assert!(residuals["marginal_barycenter"] <= 1e-8);
        assert!(residuals["marginal_correlation"] <= 1e-8);
        assert!(row.margin.unwrap() >= -1e-7);
    }
    pass(8, "500 commuting qutrit triples: extension state exists and bounds chi");
}

#[test]
fn criterion_09_unitary_product_condition_is_sharp() {
    let tol = Tolerances::default();
    let d = 3;
    for trial in 0..200u64 {
        let mut rng = trial_rng(9, trial);
        let u = random_haar_unitary(d, &mut rng);
        let w = random_haar_unitary(d, &mut rng);
        let rep = lemma2_check(&u, &u.matmul(&w), &w, &tol).unwrap();
        assert!(rep.condition_holds && rep.is_psd && rep.consistent);
        assert!(rep.min_eig >= -1e-9, "trial {trial}: min eig {}", rep.min_eig);
    }
    for trial in 0..200u64 {
        let mut rng = trial_rng(90, trial);
        let u = random_haar_unitary(d, &mut rng);
        let w = random_haar_unitary(d, &mut rng);
        let v = random_haar_unitary(d, &mut rng);
        let rep = lemma2_check(&u, &v, &w, &tol).unwrap();
        assert!(
            rep.residual_vuw > 0.1,
            "trial {trial}: independent factors came out aligned"
        );
        assert!(rep.min_eig < 0.0, "trial {trial}: min eig {}", rep.min_eig);
        assert!(rep.consistent);
    }
    pass(9, "400 unitary triples: block PSD exactly when V = UW");
}

#[test]
fn criterion_10_contraction_witnesses_recover_every_psd_block() {
    let tol = Tolerances::default();
    for trial in 0..200u64 {
        let mut rng = trial_rng(10, trial);
        let d1 = rng.random_range(1..=3);
        let d2 = rng.random_range(1..=3);
        let d3 = rng.random_range(1..=3);
        let total = d1 + d2 + d3;
        let rank = rng.random_range(1..=total);
        let x = random_ginibre(rank, total, &mut rng);
        let gram = x.dagger().matmul(&x).hermitize();
        // Unit-normalize so the tolerance scale matches the data scale.
        let scale = 1.0 / gram.trace().re.max(1e-12);
        let gram = gram.scale(Complex64::new(scale, 0.0));
        let block = Block3::from_assembled(&gram, (d1, d2, d3), &tol).unwrap();
        let witness = lemma1_decompose(&block, &tol).unwrap();
        for (k, norm) in witness.norms.iter().enumerate() {
            assert!(
                *norm <= 1.0 + 1e-8,
                "trial {trial}: operator {} has norm {norm}",
                k + 1
            );
        }
        assert!(witness.residual_d <= 1e-7, "trial {trial}: D {}", witness.residual_d);
        assert!(witness.residual_f <= 1e-7, "trial {trial}: F {}", witness.residual_f);
        assert!(witness.residual_e <= 1e-7, "trial {trial}: E {}", witness.residual_e);
    }
    pass(10, "200 random Gram blocks: contractive witnesses reconstruct all corners");
}

#[test]
fn criterion_11_chain_forms_agree_and_square_to_k_times_p() {
    let tol = Tolerances::default();
    for k in 3..=5usize {
        for d in 2..=3usize {
            let mut rng = trial_rng(11, (k * 10 + d) as u64);
            let factors: Vec<ComplexMatrix> =
                (0..k - 1).map(|_| random_haar_unitary(d, &mut rng)).collect();
            let chain = UnitaryChain::new(factors, ChainForm::Chain, &tol).unwrap();
            let p = chain_to_p(&chain).unwrap();
            let report = projector_check(&p, k).unwrap();
            assert!(
                report.projector_residual <= 1e-8,
                "K={k} d={d}: P^2 - KP = {}",
                report.projector_residual
            );
            let stack = stack_from_chain(&chain, &tol).unwrap();
            let gap = forms_equivalence_check(&chain, &stack).unwrap();
            assert!(gap <= 1e-9, "K={k} d={d}: forms disagree by {gap}");
        }
    }
    pass(11, "K in 3..5, d in 2..3: both chain forms give the same K-projector");
}

#[test]
fn criterion_12_identical_configs_give_byte_identical_reports() {
    let dir = tempfile::tempdir().unwrap();
    for scenario in [Scenario::Theorem1, Scenario::Counterexample, Scenario::Lemma2] {
        let mut cfg = CampaignConfig::new(scenario, 42);
        cfg.trials = match scenario {
            Scenario::Counterexample => 300,
            _ => 50,
        };
        let path_a = dir.path().join(format!("{scenario}_a.jsonl"));
        let path_b = dir.path().join(format!("{scenario}_b.jsonl"));
        run_campaign(&cfg, Some(&path_a), ReportFormat::Jsonl).unwrap();
        run_campaign(&cfg, Some(&path_b), ReportFormat::Jsonl).unwrap();
        let a = std::fs::read(&path_a).unwrap();
        let b = std::fs::read(&path_b).unwrap();
        assert!(!a.is_empty());
        assert_eq!(a, b, "{scenario} reports differ between identical runs");
    }
    pass(12, "repeated campaigns with one config produce byte-identical reports");
}
