//! Positivity of structured block operators.
//!
//! Three related tools live here:
//! * the constructive characterization of 3×3 block positivity through
//!   contraction witnesses `R₁, R₂, R₃` (with support projections handling
//!   rank-deficient corners),
//! * the unitary 3×3 criterion — `[[1,U,V],[U†,1,W],[V†,W†,1]] ≥ 0` exactly
//!   when `V = UW`,
//! * the K×K unitary-block forms: the chain form generated by
//!   `U_1, …, U_{K−1}`, the stack form `P = [V_i][V_j†]`, and the
//!   identification `U_i = V_i V_{i+1}†` between them.

use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eig, operator_norm, ComplexMatrix, PsdSpectral};

/// Absolute floor on the minimum eigenvalue for the PSD verdict; block
/// operators here are kept at unit scale.
pub const BLOCK_PSD_TOL: f64 = 1e-8;
/// Residual threshold for the chain condition `‖V − UW‖_F`.
pub const CHAIN_CONDITION_TOL: f64 = 1e-7;
/// Reconstruction tolerance for the D and F witness equations.
const DF_RESIDUAL_TOL: f64 = 1e-8;
/// Reconstruction tolerance for the E witness equation.
const E_RESIDUAL_TOL: f64 = 1e-7;
/// Slack allowed on contraction operator norms.
const CONTRACTION_SLACK: f64 = 1e-8;

/// A 3×3 block operator `[[A, D, E], [D†, B, F], [E†, F†, C]]` on
/// H₁ ⊕ H₂ ⊕ H₃, specified by its upper triangle.
#[derive(Debug, Clone)]
pub struct Block3 {
    pub a: ComplexMatrix,
    pub b: ComplexMatrix,
    pub c: ComplexMatrix,
    pub d: ComplexMatrix,
    pub e: ComplexMatrix,
    pub f: ComplexMatrix,
}

impl Block3 {
    /// Validate shapes (`A: d₁×d₁`, `B: d₂×d₂`, `C: d₃×d₃`, `D: d₁×d₂`,
    /// `E: d₁×d₃`, `F: d₂×d₃`) and Hermiticity of the corners.
    pub fn new(
        a: ComplexMatrix,
        b: ComplexMatrix,
        c: ComplexMatrix,
        d: ComplexMatrix,
        e: ComplexMatrix,
        f: ComplexMatrix,
        tol: &Tolerances,
    ) -> Result<Self> {
        for (name, m) in [("A", &a), ("B", &b), ("C", &c)] {
            m.require_hermitian(tol.hermiticity).map_err(|_| Error::DimensionMismatch {
                context: format!("corner block {name} must be square Hermitian"),
            })?;
        }
        let (d1, d2, d3) = (a.rows(), b.rows(), c.rows());
        let shapes = [
            ("D", &d, d1, d2),
            ("E", &e, d1, d3),
            ("F", &f, d2, d3),
        ];
        for (name, m, rows, cols) in shapes {
            if m.rows() != rows || m.cols() != cols {
                return Err(Error::DimensionMismatch {
                    context: format!(
                        "cross block {name} is {}x{}, expected {rows}x{cols}",
                        m.rows(),
                        m.cols()
                    ),
                });
            }
        }
        Ok(Block3 { a, b, c, d, e, f })
    }

    pub fn dims(&self) -> (usize, usize, usize) {
        (self.a.rows(), self.b.rows(), self.c.rows())
    }

    /// Total dimension d₁ + d₂ + d₃.
    pub fn total_dim(&self) -> usize {
        let (d1, d2, d3) = self.dims();
        d1 + d2 + d3
    }

    /// Assemble the full Hermitian operator.
    pub fn assemble(&self) -> ComplexMatrix {
        let (d1, d2, d3) = self.dims();
        let mut m = ComplexMatrix::zeros(d1 + d2 + d3, d1 + d2 + d3);
        m.set_block(0, 0, &self.a);
        m.set_block(d1, d1, &self.b);
        m.set_block(d1 + d2, d1 + d2, &self.c);
        m.set_block(0, d1, &self.d);
        m.set_block(0, d1 + d2, &self.e);
        m.set_block(d1, d1 + d2, &self.f);
        m.set_block(d1, 0, &self.d.dagger());
        m.set_block(d1 + d2, 0, &self.e.dagger());
        m.set_block(d1 + d2, d1, &self.f.dagger());
        m
    }

    /// Split an assembled operator back into blocks.
    pub fn from_assembled(
        m: &ComplexMatrix,
        dims: (usize, usize, usize),
        tol: &Tolerances,
    ) -> Result<Self> {
        let (d1, d2, d3) = dims;
        if m.rows() != d1 + d2 + d3 || !m.is_square() {
            return Err(Error::DimensionMismatch {
                context: format!(
                    "assembled operator is {}x{}, expected square of size {}",
                    m.rows(),
                    m.cols(),
                    d1 + d2 + d3
                ),
            });
        }
        m.require_hermitian(tol.hermiticity)?;
        Block3::new(
            m.block(0, 0, d1, d1),
            m.block(d1, d1, d2, d2),
            m.block(d1 + d2, d1 + d2, d3, d3),
            m.block(0, d1, d1, d2),
            m.block(0, d1 + d2, d1, d3),
            m.block(d1, d1 + d2, d2, d3),
            tol,
        )
    }
}

/// Eigenvalue verdict on a block operator.
#[derive(Debug, Clone, Copy)]
pub struct PsdVerdict {
    pub is_psd: bool,
    pub min_eig: f64,
}

/// Direct eigenvalue test of the assembled operator against the absolute
/// floor [`BLOCK_PSD_TOL`].
pub fn is_psd_block(block: &Block3, tol: &Tolerances) -> Result<PsdVerdict> {
    let eig = hermitian_eig(&block.assemble(), tol)?;
    let min_eig = *eig.values.last().expect("block is non-empty");
    Ok(PsdVerdict {
        is_psd: min_eig >= -BLOCK_PSD_TOL,
        min_eig,
    })
}

/// The contraction triple certifying positivity of a 3×3 block operator,
/// together with the reconstruction residuals it achieves.
#[derive(Debug, Clone)]
pub struct ContractionWitness {
    pub r1: ComplexMatrix,
    pub r2: ComplexMatrix,
    pub r3: ComplexMatrix,
    /// Operator norms of R₁, R₂, R₃; each must be ≤ 1 + 1e−8.
    pub norms: [f64; 3],
    /// `‖D − √A R₁ √B‖_F`.
    pub residual_d: f64,
    /// `‖F − √B R₂ √C‖_F`.
    pub residual_f: f64,
    /// Residual of the full E equation.
    pub residual_e: f64,
}

/// Recover contraction witnesses from a PSD block operator:
/// `R₁ = √A⁺ D √B⁺`, `R₂ = √B⁺ F √C⁺`, and `R₃` as the minimal-norm
/// solution of
/// `E = √A R₁ supp(B) R₂ √C + L R₃ M` with
/// `L = √(A − √A R₁ supp(B) R₁† √A)` and
/// `M = √(C − √C R₂† supp(B) R₂ √C)`.
///
/// Pseudo-inverses treat singular values below `tol.rank` (relative) as
/// zero, so the witnesses vanish outside the corner supports.
pub fn lemma1_decompose(block: &Block3, tol: &Tolerances) -> Result<ContractionWitness> {
    let verdict = is_psd_block(block, tol)?;
    if !verdict.is_psd {
        return Err(Error::NotPsd {
            min_eig: verdict.min_eig,
        });
    }
    let spec_a = PsdSpectral::new(&block.a.hermitize(), tol)?;
    let spec_b = PsdSpectral::new(&block.b.hermitize(), tol)?;
    let spec_c = PsdSpectral::new(&block.c.hermitize(), tol)?;
    let sqrt_a = spec_a.sqrt();
    let sqrt_b = spec_b.sqrt();
    let sqrt_c = spec_c.sqrt();
    let supp_b = spec_b.support(tol.rank);

    let r1 = spec_a
        .sqrt_pinv(tol.rank)
        .matmul(&block.d)
        .matmul(&spec_b.sqrt_pinv(tol.rank));
    let r2 = spec_b
        .sqrt_pinv(tol.rank)
        .matmul(&block.f)
        .matmul(&spec_c.sqrt_pinv(tol.rank));

    let residual_d = sqrt_a.matmul(&r1).matmul(&sqrt_b).dist_frobenius(&block.d);
    let residual_f = sqrt_b.matmul(&r2).matmul(&sqrt_c).dist_frobenius(&block.f);

    // Through-B part of E and the two residual factors.
    let core = sqrt_a
        .matmul(&r1)
        .matmul(&supp_b)
        .matmul(&r2)
        .matmul(&sqrt_c);
    let l_sq = block
        .a
        .sub(&sqrt_a.matmul(&r1).matmul(&supp_b).matmul(&r1.dagger()).matmul(&sqrt_a))
        .hermitize();
    let m_sq = block
        .c
        .sub(&sqrt_c.matmul(&r2.dagger()).matmul(&supp_b).matmul(&r2).matmul(&sqrt_c))
        .hermitize();
    let spec_l = PsdSpectral::new(&l_sq, tol).map_err(|err| match err {
        Error::NotPsd { min_eig } => Error::ReconstructionFailure {
            context: "left residual factor A − √A R₁ supp(B) R₁† √A is indefinite".into(),
            residual: min_eig.abs(),
        },
        other => other,
    })?;
    let spec_m = PsdSpectral::new(&m_sq, tol).map_err(|err| match err {
        Error::NotPsd { min_eig } => Error::ReconstructionFailure {
            context: "right residual factor C − √C R₂† supp(B) R₂ √C is indefinite".into(),
            residual: min_eig.abs(),
        },
        other => other,
    })?;
    let l = spec_l.sqrt();
    let m = spec_m.sqrt();

    // Minimal-norm solution of L R₃ M = E − core.  L² and M² are
    // differences of same-scale terms, so their noise floor sits at the
    // scale of the parent corners A and C — anchor the pseudo-inverse
    // cutoffs there, not at the residual factors' own norms.
    let scale_a = spec_a.values().first().copied().unwrap_or(0.0).max(1e-300);
    let scale_c = spec_c.values().first().copied().unwrap_or(0.0).max(1e-300);
    let gap = block.e.sub(&core);
    let r3 = spec_l
        .sqrt_pinv_at(tol.rank * scale_a)
        .matmul(&gap)
        .matmul(&spec_m.sqrt_pinv_at(tol.rank * scale_c));
    let residual_e = core.add(&l.matmul(&r3).matmul(&m)).dist_frobenius(&block.e);

    let norms = [
        operator_norm(&r1)?,
        operator_norm(&r2)?,
        operator_norm(&r3)?,
    ];

    if residual_d > DF_RESIDUAL_TOL || residual_f > DF_RESIDUAL_TOL {
        return Err(Error::ReconstructionFailure {
            context: "witness equations for D or F".into(),
            residual: residual_d.max(residual_f),
        });
    }
    if residual_e > E_RESIDUAL_TOL {
        return Err(Error::ReconstructionFailure {
            context: "witness equation for E".into(),
            residual: residual_e,
        });
    }
    if let Some(&worst) = norms
        .iter()
        .filter(|&&n| n > 1.0 + CONTRACTION_SLACK)
        .max_by(|a, b| a.total_cmp(b))
    {
        return Err(Error::ReconstructionFailure {
            context: "recovered operator is not a contraction".into(),
            residual: worst - 1.0,
        });
    }

    Ok(ContractionWitness {
        r1,
        r2,
        r3,
        norms,
        residual_d,
        residual_f,
        residual_e,
    })
}

/// Both sides of the unitary 3×3 positivity criterion on one instance.
#[derive(Debug, Clone, Copy)]
pub struct Lemma2Report {
    pub min_eig: f64,
    /// `‖V − U W‖_F`.
    pub residual_vuw: f64,
    /// `min_eig ≥ −1e−8`.
    pub is_psd: bool,
    /// `residual_vuw ≤ 1e−7`.
    pub condition_holds: bool,
    /// The two sides agree — positivity exactly when the condition holds.
    pub consistent: bool,
}

fn require_unitary(name: &str, u: &ComplexMatrix, dim: usize, tol: &Tolerances) -> Result<()> {
    if u.rows() != dim || u.cols() != dim {
        return Err(Error::DimensionMismatch {
            context: format!("{name} is {}x{}, expected {dim}x{dim}", u.rows(), u.cols()),
        });
    }
    let defect = u
        .dagger()
        .matmul(u)
        .dist_frobenius(&ComplexMatrix::identity(dim));
    if defect > tol.unitary {
        return Err(Error::NotUnitary { residual: defect });
    }
    Ok(())
}

/// Assemble `[[1, U, V], [U†, 1, W], [V†, W†, 1]]` and report both the
/// eigenvalue verdict and the chain condition `V = UW`.
pub fn lemma2_check(
    u: &ComplexMatrix,
    v: &ComplexMatrix,
    w: &ComplexMatrix,
    tol: &Tolerances,
) -> Result<Lemma2Report> {
    let dim = u.rows();
    require_unitary("U", u, dim, tol)?;
    require_unitary("V", v, dim, tol)?;
    require_unitary("W", w, dim, tol)?;
    let id = ComplexMatrix::identity(dim);
    let block = Block3::new(
        id.clone(),
        id.clone(),
        id,
        u.clone(),
        v.clone(),
        w.clone(),
        tol,
    )?;
    let verdict = is_psd_block(&block, tol)?;
    let residual_vuw = v.dist_frobenius(&u.matmul(w));
    let condition_holds = residual_vuw <= CHAIN_CONDITION_TOL;
    Ok(Lemma2Report {
        min_eig: verdict.min_eig,
        residual_vuw,
        is_psd: verdict.is_psd,
        condition_holds,
        consistent: verdict.is_psd == condition_holds,
    })
}

/// Which K×K form a factor list describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChainForm {
    /// K−1 generators `U_1, …, U_{K−1}`; block (i, j) for i < j is
    /// `U_{i+1} ⋯ U_j` (1-based `U_i ⋯ U_{j−1}`).
    Chain,
    /// K factors `V_1, …, V_K`; block (i, j) is `V_i V_j†`.
    Stack,
}

/// A validated list of unitary factors in one of the two K×K forms.
#[derive(Debug, Clone)]
pub struct UnitaryChain {
    factors: Vec<ComplexMatrix>,
    form: ChainForm,
}

impl UnitaryChain {
    pub fn new(factors: Vec<ComplexMatrix>, form: ChainForm, tol: &Tolerances) -> Result<Self> {
        let needed = match form {
            ChainForm::Chain => 2, // K − 1 factors, K ≥ 3
            ChainForm::Stack => 3,
        };
        if factors.len() < needed {
            return Err(Error::Config(format!(
                "form needs at least {needed} factors for K ≥ 3, got {}",
                factors.len()
            )));
        }
        let dim = factors[0].rows();
        for (i, u) in factors.iter().enumerate() {
            require_unitary(&format!("factor {i}"), u, dim, tol)?;
        }
        Ok(UnitaryChain { factors, form })
    }

    pub fn form(&self) -> ChainForm {
        self.form
    }

    pub fn factors(&self) -> &[ComplexMatrix] {
        &self.factors
    }

    pub fn dim(&self) -> usize {
        self.factors[0].rows()
    }

    /// Number of block rows K.
    pub fn k(&self) -> usize {
        match self.form {
            ChainForm::Chain => self.factors.len() + 1,
            ChainForm::Stack => self.factors.len(),
        }
    }
}

/// Build the K×K block matrix from chain generators: the (i, j) block for
/// i < j is the ordered product `U_{i+1} ⋯ U_j` of generators i..j
/// (0-based), the diagonal is the identity, and the lower triangle is the
/// conjugate transpose.
pub fn chain_to_p(chain: &UnitaryChain) -> Result<ComplexMatrix> {
    if chain.form() != ChainForm::Chain {
        return Err(Error::Config("chain_to_p needs a chain-form factor list".into()));
    }
    let k = chain.k();
    let d = chain.dim();
    let id = ComplexMatrix::identity(d);
    // products[i][j] = U_i ⋯ U_{j−1} for i ≤ j (empty product = identity).
    let mut blocks: Vec<Vec<ComplexMatrix>> = vec![vec![id.clone(); k]; k];
    for i in 0..k {
        for j in (i + 1)..k {
            blocks[i][j] = blocks[i][j - 1].matmul(&chain.factors()[j - 1]);
        }
    }
    Ok(ComplexMatrix::from_fn(k * d, k * d, |r, c| {
        let (i, a) = (r / d, r % d);
        let (j, b) = (c / d, c % d);
        if i <= j {
            blocks[i][j].get(a, b)
        } else {
            blocks[j][i].get(b, a).conj()
        }
    }))
}

/// Build the K×K block matrix from stack factors: block (i, j) is
/// `V_i V_j†`, i.e. `P = [V_1; …; V_K] [V_1†, …, V_K†]`.
pub fn stack_to_p(chain: &UnitaryChain) -> Result<ComplexMatrix> {
    if chain.form() != ChainForm::Stack {
        return Err(Error::Config("stack_to_p needs a stack-form factor list".into()));
    }
    let k = chain.k();
    let d = chain.dim();
    let factors = chain.factors();
    let mut blocks: Vec<Vec<ComplexMatrix>> = Vec::with_capacity(k);
    for i in 0..k {
        let mut row = Vec::with_capacity(k);
        for j in 0..k {
            row.push(factors[i].matmul(&factors[j].dagger()));
        }
        blocks.push(row);
    }
    Ok(ComplexMatrix::from_fn(k * d, k * d, |r, c| {
        blocks[r / d][c / d].get(r % d, c % d)
    }))
}

/// Convert chain generators to stack factors through the identification
/// `U_i = V_i V_{i+1}†`, anchored at `V_K = 1`:
/// `V_i = U_i U_{i+1} ⋯ U_{K−1}`.
pub fn stack_from_chain(chain: &UnitaryChain, tol: &Tolerances) -> Result<UnitaryChain> {
    if chain.form() != ChainForm::Chain {
        return Err(Error::Config("stack_from_chain needs a chain-form factor list".into()));
    }
    let k = chain.k();
    let d = chain.dim();
    let mut factors = vec![ComplexMatrix::identity(d); k];
    for i in (0..k - 1).rev() {
        factors[i] = chain.factors()[i].matmul(&factors[i + 1]);
    }
    UnitaryChain::new(factors, ChainForm::Stack, tol)
}

/// Convert stack factors to chain generators: `U_i = V_i V_{i+1}†`.
pub fn chain_from_stack(stack: &UnitaryChain, tol: &Tolerances) -> Result<UnitaryChain> {
    if stack.form() != ChainForm::Stack {
        return Err(Error::Config("chain_from_stack needs a stack-form factor list".into()));
    }
    let factors = stack
        .factors()
        .windows(2)
        .map(|pair| pair[0].matmul(&pair[1].dagger()))
        .collect();
    UnitaryChain::new(factors, ChainForm::Chain, tol)
}

/// `‖P_a − P_b‖_F` for two factor lists describing the same K and d.
pub fn forms_equivalence_check(a: &UnitaryChain, b: &UnitaryChain) -> Result<f64> {
    if a.k() != b.k() || a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            context: format!(
                "form shapes differ: K={}, d={} vs K={}, d={}",
                a.k(),
                a.dim(),
                b.k(),
                b.dim()
            ),
        });
    }
    let pa = match a.form() {
        ChainForm::Chain => chain_to_p(a)?,
        ChainForm::Stack => stack_to_p(a)?,
    };
    let pb = match b.form() {
        ChainForm::Chain => chain_to_p(b)?,
        ChainForm::Stack => stack_to_p(b)?,
    };
    Ok(pa.dist_frobenius(&pb))
}

/// Structural residuals of a K×K unitary-block matrix `P`: it must satisfy
/// `P = P†`, `P² = K·P`, `Tr P = K·d`, so `P / K` is a rank-d projector.
#[derive(Debug, Clone, Copy)]
pub struct ProjectorReport {
    /// `‖P² − K·P‖_F`.
    pub projector_residual: f64,
    /// `|Tr P − K·d|`.
    pub trace_residual: f64,
    /// `‖P − P†‖_F`.
    pub hermiticity_residual: f64,
}

pub fn projector_check(p: &ComplexMatrix, k: usize) -> Result<ProjectorReport> {
    if !p.is_square() || k == 0 || p.rows() % k != 0 {
        return Err(Error::DimensionMismatch {
            context: format!("operator of size {} is not K={k} blocks", p.rows()),
        });
    }
    let d = p.rows() / k;
    let projector_residual = p.matmul(p).dist_frobenius(&p.scale_re(k as f64));
    let trace = p.trace();
    let trace_residual =
        ((trace.re - (k * d) as f64).powi(2) + trace.im.powi(2)).sqrt();
    let hermiticity_residual = p.dist_frobenius(&p.dagger());
    Ok(ProjectorReport {
        projector_residual,
        trace_residual,
        hermiticity_residual,
    })
}
