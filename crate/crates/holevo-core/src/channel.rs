//! Quantum channels in Kraus form, projective measurements, and the Naimark
//! dilation that realizes a general measurement as a projective one on an
//! enlarged space.
//!
//! Index convention for the dilated space B ⊗ C: the system index is major
//! and the ancilla index minor, so basis vector `(i_B, μ)` sits at
//! `i_B * ancilla_dim + μ`.

use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::linalg::{
    kron, orthonormal_completion, random_haar_unitary, ComplexMatrix, LabRng, PsdSpectral,
};
use crate::state::DensityMatrix;
use num_complex::Complex64;

/// Kraus operators below this Frobenius norm are rejected as degenerate.
const DEGENERATE_KRAUS: f64 = 1e-12;

/// A completely positive trace-preserving map `ρ ↦ Σ_μ M_μ ρ M†_μ`,
/// equivalently a generalized measurement with outcomes indexed by μ.
#[derive(Debug, Clone)]
pub struct KrausChannel {
    kraus: Vec<ComplexMatrix>,
    label: Option<String>,
}

impl KrausChannel {
    /// Validate completeness `Σ M†_μ M_μ = 1` within `tol.kraus` and wrap.
    pub fn new(kraus: Vec<ComplexMatrix>, label: Option<String>, tol: &Tolerances) -> Result<Self> {
        if kraus.is_empty() {
            return Err(Error::Config("channel needs at least one Kraus operator".into()));
        }
        let dim = kraus[0].rows();
        for (mu, m) in kraus.iter().enumerate() {
            if m.rows() != dim || m.cols() != dim {
                return Err(Error::DimensionMismatch {
                    context: format!(
                        "Kraus operator {mu} is {}x{}, expected {dim}x{dim}",
                        m.rows(),
                        m.cols()
                    ),
                });
            }
            if !m.is_finite() {
                return Err(Error::Config(format!("Kraus operator {mu} has non-finite entries")));
            }
            if m.frobenius_norm() < DEGENERATE_KRAUS {
                return Err(Error::Config(format!("Kraus operator {mu} is numerically zero")));
            }
        }
        let mut sum = ComplexMatrix::zeros(dim, dim);
        for m in &kraus {
            sum = sum.add(&m.dagger().matmul(m));
        }
        let defect = sum.dist_frobenius(&ComplexMatrix::identity(dim));
        if defect > tol.kraus {
            return Err(Error::Config(format!(
                "Kraus completeness defect {defect:.3e} exceeds {:.1e}",
                tol.kraus
            )));
        }
        Ok(KrausChannel { kraus, label })
    }

    pub fn kraus(&self) -> &[ComplexMatrix] {
        &self.kraus
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn dim(&self) -> usize {
        self.kraus[0].rows()
    }

    pub fn num_outcomes(&self) -> usize {
        self.kraus.len()
    }

    /// Apply the channel: `ρ ↦ Σ_μ M_μ ρ M†_μ`.
    pub fn apply(&self, rho: &DensityMatrix, tol: &Tolerances) -> Result<DensityMatrix> {
        if rho.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                context: format!("channel dim {} vs state dim {}", self.dim(), rho.dim()),
            });
        }
        let mut out = ComplexMatrix::zeros(self.dim(), self.dim());
        for m in &self.kraus {
            out = out.add(&m.matmul(rho.mat()).matmul(&m.dagger()));
        }
        DensityMatrix::new(out, tol)
    }

    /// Rank-one projective measurement onto the columns of `basis`, which
    /// must be unitary (an orthonormal basis).
    pub fn projective_from_basis(basis: &ComplexMatrix, tol: &Tolerances) -> Result<Self> {
        if !basis.is_square() {
            return Err(Error::DimensionMismatch {
                context: "measurement basis must be square".into(),
            });
        }
        let dim = basis.rows();
        let defect = basis
            .dagger()
            .matmul(basis)
            .dist_frobenius(&ComplexMatrix::identity(dim));
        if defect > tol.unitary {
            return Err(Error::NotOrthonormal { residual: defect });
        }
        let kraus = (0..dim)
            .map(|mu| {
                let col = basis.column(mu);
                ComplexMatrix::outer(&col, &col)
            })
            .collect();
        KrausChannel::new(kraus, None, tol)
    }

    /// Coarse projective measurement: outcome `k` projects onto the span of
    /// the standard basis vectors listed in `parts[k]`. The parts must
    /// partition `0..dim`.
    pub fn projectors_from_partition(
        dim: usize,
        parts: &[Vec<usize>],
        tol: &Tolerances,
    ) -> Result<Self> {
        let mut seen = vec![false; dim];
        for part in parts {
            for &i in part {
                if i >= dim {
                    return Err(Error::NotPartition {
                        reason: format!("index {i} is out of range for dimension {dim}"),
                    });
                }
                if seen[i] {
                    return Err(Error::NotPartition {
                        reason: format!("index {i} appears in more than one part"),
                    });
                }
                seen[i] = true;
            }
        }
        if let Some(missing) = seen.iter().position(|&s| !s) {
            return Err(Error::NotPartition {
                reason: format!("index {missing} is not covered by any part"),
            });
        }
        let kraus = parts
            .iter()
            .map(|part| {
                let mut p = ComplexMatrix::zeros(dim, dim);
                for &i in part {
                    p.set(i, i, Complex64::ONE);
                }
                p
            })
            .collect();
        KrausChannel::new(kraus, None, tol)
    }

    /// Random channel with `num_kraus` operators: the Kraus blocks of a Haar
    /// random isometry ℂ^dim → ℂ^dim ⊗ ℂ^num_kraus, so completeness holds by
    /// construction.
    pub fn random(
        dim: usize,
        num_kraus: usize,
        rng: &mut LabRng,
        tol: &Tolerances,
    ) -> Result<Self> {
        if dim == 0 || num_kraus == 0 {
            return Err(Error::Config("channel dimensions must be positive".into()));
        }
        let big = random_haar_unitary(dim * num_kraus, rng);
        // Columns (j, μ=0) of a Haar unitary form a Haar random isometry.
        let kraus = (0..num_kraus)
            .map(|mu| {
                ComplexMatrix::from_fn(dim, dim, |i, j| big.get(i * num_kraus + mu, j * num_kraus))
            })
            .collect();
        KrausChannel::new(kraus, None, tol)
    }
}

/// Naimark dilation of a Kraus measurement: a unitary `U` on B ⊗ C and
/// projectors `P_μ = U† (1_B ⊗ |μ⟩⟨μ|) U` whose compression to the
/// `|0_C⟩` block reproduces the POVM elements `M†_μ M_μ`.
#[derive(Debug, Clone)]
pub struct NaimarkDilation {
    system_dim: usize,
    ancilla_dim: usize,
    isometry: ComplexMatrix,
    unitary: ComplexMatrix,
    projectors: Vec<ComplexMatrix>,
}

/// Dilate a measurement to a projective one on B ⊗ C with C of dimension
/// equal to the number of outcomes.
///
/// The isometry is `W|ψ⟩ = Σ_μ (√(M†_μ M_μ) |ψ⟩) ⊗ |μ⟩`; its columns are
/// completed to a unitary, anchored so that `U (|ψ⟩ ⊗ |0_C⟩) = W|ψ⟩`.
pub fn naimark_dilate(channel: &KrausChannel, tol: &Tolerances) -> Result<NaimarkDilation> {
    let d = channel.dim();
    let k = channel.num_outcomes();
    let total = d * k;

    // POVM square roots E_μ = √(M†_μ M_μ).
    let mut roots = Vec::with_capacity(k);
    for m in channel.kraus() {
        let povm = m.dagger().matmul(m).hermitize();
        roots.push(PsdSpectral::new(&povm, tol)?.sqrt());
    }

    // W is total × d with W[(i,μ), j] = (E_μ)[i, j].
    let mut isometry = ComplexMatrix::zeros(total, d);
    for (mu, e) in roots.iter().enumerate() {
        for i in 0..d {
            for j in 0..d {
                isometry.set(i * k + mu, j, e.get(i, j));
            }
        }
    }
    let gram_defect = isometry
        .dagger()
        .matmul(&isometry)
        .dist_frobenius(&ComplexMatrix::identity(d));
    if gram_defect > tol.kraus {
        return Err(Error::NotOrthonormal { residual: gram_defect });
    }

    // Complete to a unitary. Column (j, μ=0) of U must equal column j of W
    // so that U restricted to the |0_C⟩ block is W; the completion fills the
    // remaining slots in index order. A single-outcome channel needs no
    // ancilla directions: the isometry is already square.
    let mut unitary = ComplexMatrix::zeros(total, total);
    for j in 0..d {
        for r in 0..total {
            unitary.set(r, j * k, isometry.get(r, j));
        }
    }
    if total > d {
        let fresh = orthonormal_completion(&isometry)?;
        let mut next = 0;
        for col in 0..total {
            if col % k == 0 {
                continue;
            }
            for r in 0..total {
                unitary.set(r, col, fresh.get(r, next));
            }
            next += 1;
        }
    }
    let u_defect = unitary
        .dagger()
        .matmul(&unitary)
        .dist_frobenius(&ComplexMatrix::identity(total));
    if u_defect > tol.unitary {
        return Err(Error::CompletionFailure {
            reason: format!("completed operator has unitarity defect {u_defect:.3e}"),
        });
    }

    // P_μ = U† (1_B ⊗ |μ⟩⟨μ|) U.
    let projectors = (0..k)
        .map(|mu| {
            let mut marker = ComplexMatrix::zeros(k, k);
            marker.set(mu, mu, Complex64::ONE);
            let lifted = kron(&ComplexMatrix::identity(d), &marker);
            unitary.dagger().matmul(&lifted).matmul(&unitary).hermitize()
        })
        .collect();

    Ok(NaimarkDilation {
        system_dim: d,
        ancilla_dim: k,
        isometry,
        unitary,
        projectors,
    })
}

impl NaimarkDilation {
    pub fn system_dim(&self) -> usize {
        self.system_dim
    }

    pub fn ancilla_dim(&self) -> usize {
        self.ancilla_dim
    }

    pub fn isometry(&self) -> &ComplexMatrix {
        &self.isometry
    }

    pub fn unitary(&self) -> &ComplexMatrix {
        &self.unitary
    }

    pub fn projectors(&self) -> &[ComplexMatrix] {
        &self.projectors
    }

    /// Compress projector `μ` back to the system: the d×d block
    /// `⟨0_C| P_μ |0_C⟩`, which must equal `M†_μ M_μ`.
    pub fn compress(&self, mu: usize) -> ComplexMatrix {
        let (d, k) = (self.system_dim, self.ancilla_dim);
        let p = &self.projectors[mu];
        ComplexMatrix::from_fn(d, d, |i, j| p.get(i * k, j * k))
    }

    /// The dilated measurement as a projective Kraus channel on B ⊗ C.
    pub fn projective_channel(&self, tol: &Tolerances) -> Result<KrausChannel> {
        KrausChannel::new(self.projectors.clone(), None, tol)
    }

    /// Embed a state of B into B ⊗ C as `ρ ⊗ |0_C⟩⟨0_C|`.
    pub fn embed_state(&self, rho: &DensityMatrix, tol: &Tolerances) -> Result<DensityMatrix> {
        if rho.dim() != self.system_dim {
            return Err(Error::DimensionMismatch {
                context: format!(
                    "state dim {} does not match system dim {}",
                    rho.dim(),
                    self.system_dim
                ),
            });
        }
        let mut anchor = ComplexMatrix::zeros(self.ancilla_dim, self.ancilla_dim);
        anchor.set(0, 0, Complex64::ONE);
        DensityMatrix::new(kron(rho.mat(), &anchor), tol)
    }

    /// Embed a bipartite state on A ⊗ B into A ⊗ (B ⊗ C) as
    /// `ρ_AB ⊗ |0_C⟩⟨0_C|`, with the split set so the dilated measurement
    /// acts on the enlarged second subsystem. The A-major layout makes
    /// `ρ_AB ⊗ |0⟩⟨0|` index the enlarged side as (b·k + c), matching the
    /// dilated projectors.
    pub fn embed_bipartite(&self, rho: &DensityMatrix, tol: &Tolerances) -> Result<DensityMatrix> {
        let (dim_a, dim_b) = rho.split().ok_or(Error::NoBipartiteSplit)?;
        if dim_b != self.system_dim {
            return Err(Error::DimensionMismatch {
                context: format!(
                    "split B dim {} does not match system dim {}",
                    dim_b, self.system_dim
                ),
            });
        }
        let mut anchor = ComplexMatrix::zeros(self.ancilla_dim, self.ancilla_dim);
        anchor.set(0, 0, Complex64::ONE);
        DensityMatrix::new(kron(rho.mat(), &anchor), tol)?
            .into_split(dim_a, dim_b * self.ancilla_dim)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::seeded_rng;
    use crate::state::random_density;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn computational_basis_measurement_dephases() {
        let t = tol();
        let channel = KrausChannel::projective_from_basis(&ComplexMatrix::identity(2), &t).unwrap();
        let s = 1.0 / 2f64.sqrt();
        let plus = DensityMatrix::from_pure(&[c(s, 0.0), c(s, 0.0)], &t).unwrap();
        let out = channel.apply(&plus, &t).unwrap();
        assert!(out.mat().dist_frobenius(&ComplexMatrix::diag_re(&[0.5, 0.5])) < 1e-13);
    }

    #[test]
    fn completeness_is_enforced() {
        let t = tol();
        let half = ComplexMatrix::identity(2).scale_re(0.5);
        assert!(KrausChannel::new(vec![half], None, &t).is_err());
        let ok = KrausChannel::new(vec![ComplexMatrix::identity(2)], None, &t);
        assert!(ok.is_ok());
    }

    #[test]
    fn zero_kraus_operator_is_rejected() {
        let t = tol();
        let kraus = vec![ComplexMatrix::identity(2), ComplexMatrix::zeros(2, 2)];
        assert!(KrausChannel::new(kraus, None, &t).is_err());
    }

    #[test]
    fn partition_projectors_validate_cover() {
        let t = tol();
        let ok = KrausChannel::projectors_from_partition(4, &[vec![0, 2], vec![1, 3]], &t);
        assert!(ok.is_ok());
        assert!(KrausChannel::projectors_from_partition(4, &[vec![0, 1], vec![1, 2, 3]], &t).is_err());
        assert!(KrausChannel::projectors_from_partition(4, &[vec![0, 1], vec![2]], &t).is_err());
        assert!(KrausChannel::projectors_from_partition(4, &[vec![0, 5], vec![1, 2, 3]], &t).is_err());
    }

    #[test]
    fn random_channel_is_complete() {
        let t = tol();
        let ch = KrausChannel::random(3, 4, &mut seeded_rng(31), &t).unwrap();
        assert_eq!(ch.dim(), 3);
        assert_eq!(ch.num_outcomes(), 4);
        let rho = random_density(3, 3, &mut seeded_rng(32), &t).unwrap();
        // apply() revalidates: trace preserved, PSD preserved.
        ch.apply(&rho, &t).unwrap();
    }

    #[test]
    fn dilation_of_projective_measurement() {
        let t = tol();
        let ch = KrausChannel::projective_from_basis(&ComplexMatrix::identity(2), &t).unwrap();
        let dil = naimark_dilate(&ch, &t).unwrap();
        assert_eq!(dil.unitary().rows(), 4);
        for mu in 0..2 {
            let povm = ch.kraus()[mu].dagger().matmul(&ch.kraus()[mu]);
            assert!(dil.compress(mu).dist_frobenius(&povm) < 1e-12);
        }
    }

    #[test]
    fn dilation_invariants_for_random_channel() {
        let t = tol();
        let ch = KrausChannel::random(2, 3, &mut seeded_rng(77), &t).unwrap();
        let dil = naimark_dilate(&ch, &t).unwrap();
        let total = 6;
        let id = ComplexMatrix::identity(total);
        // Unitary.
        assert!(dil.unitary().dagger().matmul(dil.unitary()).dist_frobenius(&id) < 1e-12);
        // Projectors: Hermitian, idempotent, resolve the identity.
        let mut sum = ComplexMatrix::zeros(total, total);
        for p in dil.projectors() {
            assert!(p.hermiticity_defect() < 1e-12);
            assert!(p.matmul(p).dist_frobenius(p) < 1e-12);
            sum = sum.add(p);
        }
        assert!(sum.dist_frobenius(&id) < 1e-12);
        // Compression reproduces the POVM.
        for (mu, m) in ch.kraus().iter().enumerate() {
            let povm = m.dagger().matmul(m);
            assert!(dil.compress(mu).dist_frobenius(&povm) < 1e-11);
        }
        // Anchored: U (|ψ⟩ ⊗ |0_C⟩) = W |ψ⟩ for basis states.
        for j in 0..2 {
            let mut col = vec![Complex64::ZERO; total];
            for r in 0..total {
                col[r] = dil.unitary().get(r, j * 3);
            }
            let w_col = dil.isometry().column(j);
            for (a, b) in col.iter().zip(&w_col) {
                assert!((a - b).norm() < 1e-13);
            }
        }
    }

    #[test]
    fn embed_state_puts_ancilla_at_zero() {
        let t = tol();
        let ch = KrausChannel::random(2, 2, &mut seeded_rng(5), &t).unwrap();
        let dil = naimark_dilate(&ch, &t).unwrap();
        let rho = random_density(2, 2, &mut seeded_rng(6), &t).unwrap();
        let embedded = dil.embed_state(&rho, &t).unwrap();
        assert_eq!(embedded.dim(), 4);
        // Entry ((i,0),(j,0)) = ρ_ij, entries with ancilla 1 vanish.
        assert!((embedded.mat().get(0, 0) - rho.mat().get(0, 0)).norm() < 1e-14);
        assert_eq!(embedded.mat().get(1, 1), Complex64::ZERO);
    }
}
