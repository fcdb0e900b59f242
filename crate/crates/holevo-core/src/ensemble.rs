//! Ensembles of quantum states and the quantities defined on them: the
//! Holevo quantity, measurement-induced ensembles, the entropy bound
//! `χ ≤ min{S(ρ_A), S(ρ_B)}`, and the square-root-fidelity correlation
//! matrix together with its three-state positivity certificate.

use crate::channel::KrausChannel;
use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::linalg::{
    hermitian_eig, kron, polar_left, random_probabilities, random_unit_vector, trial_rng,
    ComplexMatrix, LabRng, PsdSpectral,
};
use crate::state::{entropy_of_spectrum, DensityMatrix, Subsystem};
use num_complex::Complex64;

/// Absolute tolerance on `|Σ p_i − 1|`.
const PROB_SUM_TOL: f64 = 1e-10;

/// Minimum negative eigenvalue magnitude for a correlation matrix to count
/// as a genuine positivity violation rather than round-off.
pub const VIOLATION_THRESHOLD: f64 = 1e-6;

/// A finite ensemble `{(p_i, ρ_i)}` of states on a common space, with
/// non-negative probabilities summing to one.
#[derive(Debug, Clone)]
pub struct Ensemble {
    entries: Vec<(f64, DensityMatrix)>,
}

impl Ensemble {
    pub fn new(entries: Vec<(f64, DensityMatrix)>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::BadProbabilities {
                reason: "ensemble is empty".into(),
            });
        }
        let dim = entries[0].1.dim();
        let mut total = 0.0;
        for (i, (p, rho)) in entries.iter().enumerate() {
            if !p.is_finite() || *p < 0.0 {
                return Err(Error::BadProbabilities {
                    reason: format!("entry {i} has probability {p}"),
                });
            }
            if rho.dim() != dim {
                return Err(Error::DimensionMismatch {
                    context: format!("entry {i} has dimension {}, expected {dim}", rho.dim()),
                });
            }
            total += p;
        }
        if (total - 1.0).abs() > PROB_SUM_TOL {
            return Err(Error::BadProbabilities {
                reason: format!("probabilities sum to {total:.12}"),
            });
        }
        Ok(Ensemble { entries })
    }

    pub fn from_parts(probs: &[f64], states: Vec<DensityMatrix>) -> Result<Self> {
        if probs.len() != states.len() {
            return Err(Error::DimensionMismatch {
                context: format!("{} probabilities for {} states", probs.len(), states.len()),
            });
        }
        Ensemble::new(probs.iter().copied().zip(states).collect())
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.entries[0].1.dim()
    }

    pub fn entries(&self) -> &[(f64, DensityMatrix)] {
        &self.entries
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.entries.iter().map(|(p, _)| *p).collect()
    }

    /// The barycenter `ρ̄ = Σ p_i ρ_i`.
    pub fn average_state(&self, tol: &Tolerances) -> Result<DensityMatrix> {
        let mut avg = ComplexMatrix::zeros(self.dim(), self.dim());
        for (p, rho) in &self.entries {
            avg = avg.add(&rho.mat().scale_re(*p));
        }
        DensityMatrix::new(avg, tol)
    }

    /// Holevo quantity `χ = S(ρ̄) − Σ p_i S(ρ_i)` and its two pieces.
    pub fn holevo(&self, tol: &Tolerances) -> Result<HolevoReport> {
        let average_entropy = self.average_state(tol)?.von_neumann_entropy(tol)?;
        let mut conditional_entropy = 0.0;
        for (p, rho) in &self.entries {
            if *p > 0.0 {
                conditional_entropy += p * rho.von_neumann_entropy(tol)?;
            }
        }
        Ok(HolevoReport {
            chi: average_entropy - conditional_entropy,
            average_entropy,
            conditional_entropy,
        })
    }

    /// Merge entries according to `parts` (a partition of the entry index
    /// range): part `k` becomes one entry with probability `Σ p_i` and state
    /// `Σ p_i ρ_i / Σ p_i`. Parts that collect zero probability are kept
    /// with a maximally mixed placeholder only if their total is positive;
    /// otherwise they are rejected.
    pub fn coarse_grain(&self, parts: &[Vec<usize>], tol: &Tolerances) -> Result<Ensemble> {
        let n = self.len();
        let mut seen = vec![false; n];
        for part in parts {
            for &i in part {
                if i >= n {
                    return Err(Error::NotPartition {
                        reason: format!("entry index {i} is out of range for {n} entries"),
                    });
                }
                if seen[i] {
                    return Err(Error::NotPartition {
                        reason: format!("entry index {i} appears in more than one part"),
                    });
                }
                seen[i] = true;
            }
        }
        if let Some(missing) = seen.iter().position(|&s| !s) {
            return Err(Error::NotPartition {
                reason: format!("entry index {missing} is not covered"),
            });
        }
        let mut merged = Vec::with_capacity(parts.len());
        for part in parts {
            let total: f64 = part.iter().map(|&i| self.entries[i].0).sum();
            if total <= 0.0 {
                return Err(Error::BadProbabilities {
                    reason: "coarse-grained outcome has zero probability".into(),
                });
            }
            let mut mix = ComplexMatrix::zeros(self.dim(), self.dim());
            for &i in part {
                mix = mix.add(&self.entries[i].1.mat().scale_re(self.entries[i].0 / total));
            }
            merged.push((total, DensityMatrix::new(mix, tol)?));
        }
        Ensemble::new(merged)
    }

    /// Square-root-fidelity correlation matrix of the ensemble.
    pub fn correlation_matrix(&self, tol: &Tolerances) -> Result<CorrelationMatrix> {
        CorrelationMatrix::from_ensemble(self, tol)
    }
}

/// The Holevo quantity and the two entropies it is assembled from.
#[derive(Debug, Clone, Copy)]
pub struct HolevoReport {
    pub chi: f64,
    /// `S(ρ̄)`, entropy of the barycenter.
    pub average_entropy: f64,
    /// `Σ p_i S(ρ_i)`, mean entropy of the members.
    pub conditional_entropy: f64,
}

/// Ensemble induced on subsystem A by measuring subsystem B of a bipartite
/// state: `p_μ = Tr[(1 ⊗ M_μ) ρ (1 ⊗ M†_μ)]` with post-measurement states
/// `ρ_{A,μ} = Tr_B[(1 ⊗ M_μ) ρ (1 ⊗ M†_μ)] / p_μ`.
#[derive(Debug, Clone)]
pub struct InducedEnsemble {
    pub ensemble: Ensemble,
    /// Original measurement outcome behind each ensemble entry, in order.
    pub outcome_indices: Vec<usize>,
    /// Probability for every original outcome, including dropped ones.
    pub raw_probabilities: Vec<f64>,
    /// Total probability removed by the floor, before renormalization.
    pub dropped_mass: f64,
}

pub fn induce_ensemble(
    rho: &DensityMatrix,
    channel: &KrausChannel,
    tol: &Tolerances,
) -> Result<InducedEnsemble> {
    let (dim_a, dim_b) = rho.split().ok_or(Error::NoBipartiteSplit)?;
    if channel.dim() != dim_b {
        return Err(Error::DimensionMismatch {
            context: format!(
                "measurement dim {} does not match subsystem B dim {dim_b}",
                channel.dim()
            ),
        });
    }
    let id_a = ComplexMatrix::identity(dim_a);
    let mut raw_probabilities = Vec::with_capacity(channel.num_outcomes());
    let mut kept: Vec<(usize, f64, ComplexMatrix)> = Vec::new();
    for (mu, m) in channel.kraus().iter().enumerate() {
        let lifted = kron(&id_a, m);
        let sandwiched = lifted.matmul(rho.mat()).matmul(&lifted.dagger());
        let p = sandwiched.trace().re;
        raw_probabilities.push(p.max(0.0));
        if p > tol.prob_floor {
            // Unnormalized reduction to A: trace out B.
            let reduced = ComplexMatrix::from_fn(dim_a, dim_a, |a, a2| {
                (0..dim_b)
                    .map(|b| sandwiched.get(a * dim_b + b, a2 * dim_b + b))
                    .sum()
            });
            kept.push((mu, p, reduced));
        }
    }
    if kept.is_empty() {
        return Err(Error::BadProbabilities {
            reason: "every measurement outcome fell below the probability floor".into(),
        });
    }
    let kept_mass: f64 = kept.iter().map(|(_, p, _)| *p).sum();
    let dropped_mass = (1.0 - kept_mass).max(0.0);
    let mut entries = Vec::with_capacity(kept.len());
    let mut outcome_indices = Vec::with_capacity(kept.len());
    for (mu, p, reduced) in kept {
        let state = DensityMatrix::new(reduced.scale_re(1.0 / p), tol)?;
        entries.push((p / kept_mass, state));
        outcome_indices.push(mu);
    }
    Ok(InducedEnsemble {
        ensemble: Ensemble::new(entries)?,
        outcome_indices,
        raw_probabilities,
        dropped_mass,
    })
}

/// Largest disagreement between two induced ensembles over the same
/// measurement: max over outcomes of the probability gap, plus the largest
/// Frobenius distance between post-measurement states kept by both.
pub fn induced_agreement_residual(left: &InducedEnsemble, right: &InducedEnsemble) -> f64 {
    let outcomes = left.raw_probabilities.len().max(right.raw_probabilities.len());
    let mut prob_gap: f64 = 0.0;
    for mu in 0..outcomes {
        let pl = left.raw_probabilities.get(mu).copied().unwrap_or(0.0);
        let pr = right.raw_probabilities.get(mu).copied().unwrap_or(0.0);
        prob_gap = prob_gap.max((pl - pr).abs());
    }
    let mut state_gap: f64 = 0.0;
    for (slot_l, &mu) in left.outcome_indices.iter().enumerate() {
        if let Some(slot_r) = right.outcome_indices.iter().position(|&m| m == mu) {
            let dl = &left.ensemble.entries()[slot_l].1;
            let dr = &right.ensemble.entries()[slot_r].1;
            state_gap = state_gap.max(dl.mat().dist_frobenius(dr.mat()));
        }
    }
    prob_gap + state_gap
}

/// Verdict data for the entropy bound on one bipartite state and measurement.
#[derive(Debug, Clone)]
pub struct Theorem1Report {
    pub chi: f64,
    /// Entropy of the unmeasured marginal `ρ_A`.
    pub entropy_a: f64,
    /// Entropy of the measured marginal `ρ_B`.
    pub entropy_b: f64,
    /// `min(S_A, S_B) − χ`; the bound holds when this is ≥ −tol.theorem.
    pub margin: f64,
    /// `‖Σ p_μ ρ_{A,μ} − ρ_A‖_F`, consistency of the induced barycenter.
    pub barycenter_residual: f64,
    pub dropped_mass: f64,
    pub outcomes_kept: usize,
}

/// Check `χ({p_μ, ρ_{A,μ}}) ≤ min{S(ρ_A), S(ρ_B)}` for the ensemble induced
/// by measuring subsystem B.
pub fn check_theorem1(
    rho: &DensityMatrix,
    channel: &KrausChannel,
    tol: &Tolerances,
) -> Result<Theorem1Report> {
    let induced = induce_ensemble(rho, channel, tol)?;
    let holevo = induced.ensemble.holevo(tol)?;
    let rho_a = rho.partial_trace(Subsystem::A, tol)?;
    let rho_b = rho.partial_trace(Subsystem::B, tol)?;
    let entropy_a = rho_a.von_neumann_entropy(tol)?;
    let entropy_b = rho_b.von_neumann_entropy(tol)?;
    let barycenter_residual = induced
        .ensemble
        .average_state(tol)?
        .mat()
        .dist_frobenius(rho_a.mat());
    Ok(Theorem1Report {
        chi: holevo.chi,
        entropy_a,
        entropy_b,
        margin: entropy_a.min(entropy_b) - holevo.chi,
        barycenter_residual,
        dropped_mass: induced.dropped_mass,
        outcomes_kept: induced.ensemble.len(),
    })
}

/// Verdict data for the coarse-graining monotonicity of χ.
#[derive(Debug, Clone)]
pub struct RefinementReport {
    pub chi_fine: f64,
    pub chi_coarse: f64,
    /// `χ_fine − χ_coarse`; refinement can only increase χ, so this is
    /// ≥ −tol.theorem when the claim holds.
    pub margin: f64,
}

/// Check that merging measurement outcomes never increases the Holevo
/// quantity: `parts` partitions the induced ensemble's entries.
pub fn check_refinement(
    rho: &DensityMatrix,
    channel: &KrausChannel,
    parts: &[Vec<usize>],
    tol: &Tolerances,
) -> Result<RefinementReport> {
    let induced = induce_ensemble(rho, channel, tol)?;
    let chi_fine = induced.ensemble.holevo(tol)?.chi;
    let chi_coarse = induced.ensemble.coarse_grain(parts, tol)?.holevo(tol)?.chi;
    Ok(RefinementReport {
        chi_fine,
        chi_coarse,
        margin: chi_fine - chi_coarse,
    })
}

/// The square-root-fidelity correlation matrix
/// `C_ij = √(p_i p_j F(ρ_i, ρ_j))`: real symmetric, unit trace, diagonal
/// `p_i`.
#[derive(Debug, Clone)]
pub struct CorrelationMatrix {
    matrix: ComplexMatrix,
    eigenvalues: Vec<f64>,
    probabilities: Vec<f64>,
}

impl CorrelationMatrix {
    pub fn from_ensemble(ens: &Ensemble, tol: &Tolerances) -> Result<Self> {
        let n = ens.len();
        let entries = ens.entries();
        let mut matrix = ComplexMatrix::zeros(n, n);
        for i in 0..n {
            matrix.set(i, i, Complex64::new(entries[i].0, 0.0));
            for j in (i + 1)..n {
                let f = entries[i].1.fidelity(&entries[j].1, tol)?;
                let value = (entries[i].0 * entries[j].0 * f).sqrt();
                matrix.set(i, j, Complex64::new(value, 0.0));
                matrix.set(j, i, Complex64::new(value, 0.0));
            }
        }
        let eigenvalues = hermitian_eig(&matrix, tol)?.values;
        Ok(CorrelationMatrix {
            matrix,
            eigenvalues,
            probabilities: ens.probabilities(),
        })
    }

    pub fn mat(&self) -> &ComplexMatrix {
        &self.matrix
    }

    /// The source probabilities; these sit on the diagonal.
    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    /// Eigenvalues in descending order.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn min_eigenvalue(&self) -> f64 {
        *self.eigenvalues.last().expect("correlation matrix is non-empty")
    }

    /// Entropy of the (clamped) spectrum; the spectrum sums to one, so this
    /// is directly comparable to a state entropy.
    pub fn entropy(&self, tol: &Tolerances) -> f64 {
        let clamped: Vec<f64> = self.eigenvalues.iter().map(|&v| v.max(0.0)).collect();
        entropy_of_spectrum(&clamped, tol.log_base)
    }

    /// Eigenvector of the smallest eigenvalue.
    pub fn min_eigenvector(&self, tol: &Tolerances) -> Result<Vec<Complex64>> {
        let eig = hermitian_eig(&self.matrix, tol)?;
        Ok(eig.vectors.column(self.matrix.rows() - 1))
    }

    /// Rayleigh quotient `v†Cv / v†v` for the eigenvector of the smallest
    /// eigenvalue, recomputed with direct arithmetic. A genuinely negative
    /// value certifies indefiniteness independently of the eigensolver.
    pub fn rayleigh_recheck(&self, tol: &Tolerances) -> Result<f64> {
        let v = self.min_eigenvector(tol)?;
        let cv = self.matrix.mul_vec(&v);
        let num: f64 = v
            .iter()
            .zip(&cv)
            .map(|(a, b)| (a.conj() * b).re)
            .sum();
        let den: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        Ok(num / den)
    }
}

/// The three pairwise polar unitaries of a state triple, with the chain
/// residual `‖V − U W‖_F` that gates the block construction.
#[derive(Debug, Clone)]
pub struct PolarTriple {
    /// Unitary factor of `√ρ_1 √ρ_2`.
    pub u: ComplexMatrix,
    /// Unitary factor of `√ρ_1 √ρ_3`.
    pub v: ComplexMatrix,
    /// Unitary factor of `√ρ_2 √ρ_3`.
    pub w: ComplexMatrix,
    /// `‖V − U W‖_F`.
    pub residual_uvw: f64,
    /// Numerical rank of each product `√ρ_i √ρ_j`; polar unitaries are
    /// only unique on the product's support, so rank-deficient pairs make
    /// borderline condition verdicts auditable.
    pub product_ranks: [usize; 3],
}

/// Polar factorization `X = P Ω` (positive times unitary) from one SVD,
/// returning also the factorization residual `‖P − Ω X†‖_F` and the
/// numerical rank of `X`.
fn polar_factor(x: &ComplexMatrix, tol: &Tolerances) -> Result<(ComplexMatrix, f64, usize)> {
    let factors = polar_left(x)?;
    // Ω X† = Ω Ω† P = P exactly, so this residual certifies the factors.
    let residual = factors
        .positive
        .dist_frobenius(&factors.unitary.matmul(&x.dagger()));
    let spectrum = PsdSpectral::new(&x.matmul(&x.dagger()).hermitize(), tol)?;
    // Eigenvalues of XX† are squared singular values.
    let rank = spectrum.rank(tol.rank * tol.rank);
    Ok((factors.unitary, residual, rank))
}

/// Compute the polar unitaries `U, V, W` of the products `√ρ_i √ρ_j` for
/// the pairs (1,2), (1,3), (2,3). With `X = P Ω`, the factor Ω is the
/// trace-aligning unitary: `Tr[√ρ_i Ω √ρ_j] = Tr P = √F(ρ_i, ρ_j)`.
pub fn polar_triple(states: &[DensityMatrix], tol: &Tolerances) -> Result<PolarTriple> {
    if states.len() != 3 {
        return Err(Error::DimensionMismatch {
            context: format!("polar triple needs exactly 3 states, got {}", states.len()),
        });
    }
    let dim = states[0].dim();
    if states.iter().any(|s| s.dim() != dim) {
        return Err(Error::DimensionMismatch {
            context: "polar triple states must share one dimension".into(),
        });
    }
    let roots: Vec<ComplexMatrix> = states
        .iter()
        .map(|s| PsdSpectral::new(s.mat(), tol).map(|d| d.sqrt()))
        .collect::<Result<_>>()?;
    let (u, res_u, rank_u) = polar_factor(&roots[0].matmul(&roots[1]), tol)?;
    let (v, res_v, rank_v) = polar_factor(&roots[0].matmul(&roots[2]), tol)?;
    let (w, res_w, rank_w) = polar_factor(&roots[1].matmul(&roots[2]), tol)?;
    let worst = res_u.max(res_v).max(res_w);
    if worst > 1e-8 {
        return Err(Error::ReconstructionFailure {
            context: "polar factorization of a state-root product".into(),
            residual: worst,
        });
    }
    let residual_uvw = v.dist_frobenius(&u.matmul(&w));
    Ok(PolarTriple {
        u,
        v,
        w,
        residual_uvw,
        product_ranks: [rank_u, rank_v, rank_w],
    })
}

/// Assemble the bipartite extension state whose label-indexed blocks are
/// `G_ij = √(p_i p_j) · √ρ_i U_ij √ρ_j` with `U_ii = 1`, `U_12 = U`,
/// `U_13 = V`, `U_23 = W`, as a density matrix with split (d, 3).
///
/// The block layout indexes the 3×3 structure by the label subsystem B with
/// the system A inside each block; storage is A-major, so entry
/// `((a,i), (a',j))` of the returned state is `G_ij[a, a']`. Tracing out B
/// gives the barycenter `Σ p_i ρ_i` and tracing out A gives the correlation
/// matrix.
///
/// Requires the chain condition: `triple.residual_uvw ≤ tol.condition`,
/// the hypothesis under which positivity is guaranteed.
pub fn build_rho_ab_theorem2(
    ens: &Ensemble,
    triple: &PolarTriple,
    tol: &Tolerances,
) -> Result<DensityMatrix> {
    if ens.len() != 3 {
        return Err(Error::DimensionMismatch {
            context: format!("block extension is defined for 3 states, got {}", ens.len()),
        });
    }
    if triple.residual_uvw > tol.condition {
        return Err(Error::ConditionViolated {
            residual: triple.residual_uvw,
            tol: tol.condition,
        });
    }
    let d = ens.dim();
    let probs = ens.probabilities();
    let roots: Vec<ComplexMatrix> = ens
        .entries()
        .iter()
        .map(|(_, s)| PsdSpectral::new(s.mat(), tol).map(|sp| sp.sqrt()))
        .collect::<Result<_>>()?;

    let id = ComplexMatrix::identity(d);
    let links = |i: usize, j: usize| -> &ComplexMatrix {
        match (i, j) {
            (0, 1) => &triple.u,
            (0, 2) => &triple.v,
            (1, 2) => &triple.w,
            _ => &id,
        }
    };
    // Upper-triangle blocks; lower blocks by conjugate transpose.
    let mut blocks: Vec<Vec<ComplexMatrix>> = vec![vec![ComplexMatrix::zeros(d, d); 3]; 3];
    for i in 0..3 {
        for j in i..3 {
            let weight = (probs[i] * probs[j]).sqrt();
            let g = roots[i].matmul(links(i, j)).matmul(&roots[j]).scale_re(weight);
            blocks[j][i] = g.dagger();
            blocks[i][j] = g;
        }
    }
    let block = ComplexMatrix::from_fn(3 * d, 3 * d, |r, c| {
        let (a, i) = (r / 3, r % 3);
        let (a2, j) = (c / 3, c % 3);
        blocks[i][j].get(a, a2)
    })
    .hermitize();
    // Density validation certifies Hermiticity, unit trace, and positivity.
    DensityMatrix::new(block, tol)?.into_split(d, 3)
}

/// Both sides of the conditioned three-state entropy inequality, plus the
/// diagnostics of the extension state that proves it.
#[derive(Debug, Clone)]
pub struct Theorem2Report {
    /// `‖V − U W‖_F` for the polar triple.
    pub residual_uvw: f64,
    /// Whether the residual passed `tol.condition`; the inequality is only
    /// asserted when it did.
    pub condition_met: bool,
    pub chi: f64,
    /// Entropy of the correlation-matrix spectrum.
    pub correlation_entropy: f64,
    /// `S(C) − χ`; pass iff ≥ −tol.theorem when the condition holds.
    pub margin: f64,
    /// Smallest eigenvalue of the correlation matrix.
    pub corr_min_eig: f64,
    /// Smallest eigenvalue of the assembled extension state (condition met
    /// only).
    pub block_min_eig: Option<f64>,
    /// `‖Tr_B ρ_AB − Σ p_i ρ_i‖_F` (condition met only).
    pub barycenter_marginal_residual: Option<f64>,
    /// `‖Tr_A ρ_AB − C‖_F` (condition met only).
    pub correlation_marginal_residual: Option<f64>,
}

/// Check `χ ≤ S(C)` for a three-state ensemble whose polar triple satisfies
/// the chain condition, constructing the extension state and verifying both
/// of its marginals. When the condition fails, the entropies are still
/// reported but the inequality is not asserted.
pub fn check_theorem2(ens: &Ensemble, tol: &Tolerances) -> Result<Theorem2Report> {
    let states: Vec<DensityMatrix> = ens.entries().iter().map(|(_, s)| s.clone()).collect();
    let triple = polar_triple(&states, tol)?;
    let condition_met = triple.residual_uvw <= tol.condition;
    let chi = ens.holevo(tol)?.chi;
    let corr = ens.correlation_matrix(tol)?;
    let correlation_entropy = corr.entropy(tol);

    let mut report = Theorem2Report {
        residual_uvw: triple.residual_uvw,
        condition_met,
        chi,
        correlation_entropy,
        margin: correlation_entropy - chi,
        corr_min_eig: corr.min_eigenvalue(),
        block_min_eig: None,
        barycenter_marginal_residual: None,
        correlation_marginal_residual: None,
    };
    if condition_met {
        let rho_ab = build_rho_ab_theorem2(ens, &triple, tol)?;
        report.block_min_eig = Some(
            *hermitian_eig(rho_ab.mat(), tol)?
                .values
                .last()
                .expect("extension state is non-empty"),
        );
        let barycenter = ens.average_state(tol)?;
        let marginal_a = rho_ab.partial_trace(Subsystem::A, tol)?;
        let marginal_b = rho_ab.partial_trace(Subsystem::B, tol)?;
        report.barycenter_marginal_residual =
            Some(marginal_a.mat().dist_frobenius(barycenter.mat()));
        report.correlation_marginal_residual =
            Some(marginal_b.mat().dist_frobenius(corr.mat()));
    }
    Ok(report)
}

/// Verdict data for the two-pure-state equality `S(ρ̄) = H(spec C)`.
#[derive(Debug, Clone, Copy)]
pub struct EqualityReport {
    pub average_entropy: f64,
    pub correlation_entropy: f64,
    /// `|S(ρ̄) − H(spec C)|`.
    pub gap: f64,
}

/// For an ensemble of exactly two pure states, the correlation matrix and
/// the barycenter share their nonzero spectrum, so the entropies agree.
pub fn two_state_equality_check(ens: &Ensemble, tol: &Tolerances) -> Result<EqualityReport> {
    if ens.len() != 2 {
        return Err(Error::DimensionMismatch {
            context: format!("equality check needs exactly 2 states, got {}", ens.len()),
        });
    }
    for (_, state) in ens.entries() {
        state.require_pure(tol)?;
    }
    let average_entropy = ens.average_state(tol)?.von_neumann_entropy(tol)?;
    let correlation_entropy = ens.correlation_matrix(tol)?.entropy(tol);
    Ok(EqualityReport {
        average_entropy,
        correlation_entropy,
        gap: (average_entropy - correlation_entropy).abs(),
    })
}

/// One randomized positivity trial: sample `n` Haar-random pure states in
/// the given dimension with random weights and test the correlation matrix
/// for a negative eigenvalue. A violation is only reported when the
/// independent Rayleigh-quotient recheck confirms it.
#[derive(Debug, Clone)]
pub struct PositivityTrial {
    pub ensemble: Ensemble,
    pub correlation: CorrelationMatrix,
    pub min_eig: f64,
    pub rayleigh: f64,
    pub violated: bool,
}

pub fn sample_pure_positivity_trial(
    n: usize,
    dim: usize,
    rng: &mut LabRng,
    tol: &Tolerances,
) -> Result<PositivityTrial> {
    let probs = random_probabilities(n, rng);
    let states: Vec<DensityMatrix> = (0..n)
        .map(|_| DensityMatrix::from_pure(&random_unit_vector(dim, rng), tol))
        .collect::<Result<_>>()?;
    let ensemble = Ensemble::from_parts(&probs, states)?;
    let correlation = ensemble.correlation_matrix(tol)?;
    let min_eig = correlation.min_eigenvalue();
    let rayleigh = correlation.rayleigh_recheck(tol)?;
    let violated = min_eig < -VIOLATION_THRESHOLD && rayleigh < -VIOLATION_THRESHOLD / 2.0;
    Ok(PositivityTrial {
        ensemble,
        correlation,
        min_eig,
        rayleigh,
        violated,
    })
}

/// A confirmed positivity violation found by randomized search.
#[derive(Debug, Clone)]
pub struct CounterexampleWitness {
    /// Index of the trial that produced it; with the master seed this
    /// regenerates the inputs exactly.
    pub trial_index: u64,
    pub ensemble: Ensemble,
    pub min_eig: f64,
    /// Independent Rayleigh-quotient confirmation of the negative direction.
    pub rayleigh: f64,
    /// Eigenvector of the smallest eigenvalue.
    pub eigenvector: Vec<Complex64>,
}

/// Search seeded random pure-state ensembles of size `n` for a correlation
/// matrix with an eigenvalue below −[`VIOLATION_THRESHOLD`], returning the
/// first confirmed violator or `None` when the budget is exhausted. Each
/// trial draws from its own stream of the master seed, so the outcome does
/// not depend on execution order. For n ≤ 3 the matrix is always PSD and
/// the search comes back empty.
pub fn counterexample_search(
    n: usize,
    dim: usize,
    trials: u64,
    seed: u64,
    tol: &Tolerances,
) -> Result<Option<CounterexampleWitness>> {
    if n < 2 {
        return Err(Error::Config(format!("search needs an ensemble of ≥ 2 states, got {n}")));
    }
    for trial_index in 0..trials {
        let mut rng = trial_rng(seed, trial_index);
        let trial = sample_pure_positivity_trial(n, dim, &mut rng, tol)?;
        if trial.violated {
            let eigenvector = trial.correlation.min_eigenvector(tol)?;
            return Ok(Some(CounterexampleWitness {
                trial_index,
                ensemble: trial.ensemble,
                min_eig: trial.min_eig,
                rayleigh: trial.rayleigh,
                eigenvector,
            }));
        }
    }
    Ok(None)
}
