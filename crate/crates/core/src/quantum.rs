//! Density matrices, projection-valued measures and the logical entropy
//! quantities defined on them.
//!
//! The central identity is `L(ρ) = tr[ρ(I - ρ)] = 1 - tr ρ²`: the probability
//! that two copies of `ρ`, measured in the eigenbasis of `ρ`, give different
//! outcomes. Measuring in any other non-degenerate basis can only raise this
//! two-draw distinction probability, which is what [`pvm_logical_entropy`]
//! computes for an arbitrary (possibly coarse) PVM.

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::linalg::{
    clamp_psd_spectrum, hermitian_eig, partial_trace, psd_sqrt, tensor_product,
    BipartiteDims, Matrix, Subsystem, C64, EQ_TOL, HERMITICITY_TOL,
};

/// Allowed drift of `tr ρ` from 1 before a matrix is rejected.
pub const TRACE_TOL: f64 = 1e-9;
/// Tolerance for idempotence, orthogonality and completeness of PVM blocks.
pub const PVM_TOL: f64 = 1e-9;
/// Conditional outcomes with probability at or below this are dropped.
pub const OUTCOME_CUTOFF: f64 = 1e-12;

/// A validated quantum state: Hermitian, PSD and unit trace.
///
/// Optionally tagged with the dimensions of its tensor factors, e.g. `[2, 3]`
/// for a qubit–qutrit state or `[2, 2, 2]` for three qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    mat: Matrix,
    dims: Option<Vec<usize>>,
}

impl DensityMatrix {
    /// Validates `mat` as a state.
    ///
    /// Eigenvalues in `[-1e-9, 0)` are clamped to zero and a trace within
    /// `1e-9` of one is renormalized; anything further out is rejected.
    pub fn new(mat: Matrix) -> Result<Self> {
        if !mat.is_finite() {
            return Err(Error::InvalidArgument("matrix has non-finite entries".into()));
        }
        let defect = mat.hermiticity_defect();
        if defect > HERMITICITY_TOL {
            return Err(Error::NotHermitian(defect));
        }
        let tr = mat.trace().re;
        if (tr - 1.0).abs() > TRACE_TOL {
            return Err(Error::InvalidTrace(tr));
        }
        let mut eig = hermitian_eig(&mat)?;
        let min = *eig.eigenvalues.last().expect("non-empty spectrum");
        let mut herm = mat.hermitian_part();
        if min < 0.0 {
            clamp_psd_spectrum(&mut eig)?;
            herm = eig.reconstruct().hermitian_part();
        }
        let tr = herm.trace().re;
        Ok(Self {
            mat: herm.scale_real(1.0 / tr),
            dims: None,
        })
    }

    /// Skips validation; for states built from valid states by operations
    /// that preserve validity.
    pub(crate) fn from_trusted(mat: Matrix, dims: Option<Vec<usize>>) -> Self {
        Self { mat, dims }
    }

    /// Attaches tensor-factor dimensions; their product must equal the matrix dimension.
    pub fn with_dims(mut self, dims: Vec<usize>) -> Result<Self> {
        let total: usize = dims.iter().product();
        if dims.is_empty() || dims.contains(&0) || total != self.mat.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.mat.dim(),
                got: total,
            });
        }
        self.dims = Some(dims);
        Ok(self)
    }

    pub fn pure(psi: &[C64]) -> Result<Self> {
        let n = crate::linalg::norm(psi);
        if (n - 1.0).abs() > EQ_TOL {
            return Err(Error::NotNormalized(n));
        }
        Ok(Self::from_trusted(Matrix::projector(psi), None))
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self::from_trusted(Matrix::maximally_mixed(dim), None)
    }

    /// `Σ w_k ρ_k`; weights must form a probability vector.
    pub fn mixture(components: &[(f64, &DensityMatrix)]) -> Result<Self> {
        let first = components
            .first()
            .ok_or_else(|| Error::InvalidArgument("empty mixture".into()))?;
        let dim = first.1.dim();
        let mut acc = Matrix::zeros(dim);
        let mut total = 0.0;
        for &(w, rho) in components {
            if rho.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: rho.dim(),
                });
            }
            if !(0.0..=1.0).contains(&w) {
                return Err(Error::InvalidProbabilities(format!("weight {w}")));
            }
            acc += &rho.mat.scale_real(w);
            total += w;
        }
        if (total - 1.0).abs() > TRACE_TOL {
            return Err(Error::InvalidProbabilities(format!("weights sum to {total}")));
        }
        Ok(Self::from_trusted(acc, first.1.dims.clone()))
    }

    /// `ρ ⊗ σ` with concatenated factor dimensions.
    pub fn tensor(&self, other: &Self) -> Self {
        let dims = [self.factor_dims(), other.factor_dims()].concat();
        Self::from_trusted(tensor_product(&self.mat, &other.mat), Some(dims))
    }

    /// `U ρ U†`; `U` must be unitary within `1e-9`.
    pub fn evolve(&self, u: &Matrix) -> Result<Self> {
        check_dim(self.dim(), u.dim())?;
        let defect = u.unitarity_defect();
        if defect > EQ_TOL {
            return Err(Error::NotUnitary(defect));
        }
        Ok(Self::from_trusted(
            self.mat.conjugate_by(u).hermitian_part(),
            self.dims.clone(),
        ))
    }

    pub fn matrix(&self) -> &Matrix {
        &self.mat
    }

    pub fn dim(&self) -> usize {
        self.mat.dim()
    }

    pub fn dims(&self) -> Option<&[usize]> {
        self.dims.as_deref()
    }

    /// Factor dimensions, or `[dim]` when untagged.
    pub fn factor_dims(&self) -> Vec<usize> {
        self.dims.clone().unwrap_or_else(|| vec![self.dim()])
    }

    /// Bipartite split of a two-factor state.
    pub fn bipartite_dims(&self) -> Result<BipartiteDims> {
        match self.dims.as_deref() {
            Some([a, b]) => BipartiteDims::new(*a, *b),
            _ => Err(Error::MissingDims),
        }
    }

    /// Bipartite view grouping the first `split` factors into `A`.
    pub fn split_dims(&self, split: usize) -> Result<BipartiteDims> {
        let dims = self.dims.as_deref().ok_or(Error::MissingDims)?;
        if split == 0 || split >= dims.len() {
            return Err(Error::InvalidArgument(format!(
                "cannot split {} factors at {split}",
                dims.len()
            )));
        }
        BipartiteDims::new(dims[..split].iter().product(), dims[split..].iter().product())
    }

    /// Reduced state of the first `split` factors (`keep = A`) or the rest (`keep = B`).
    pub fn reduce(&self, split: usize, keep: Subsystem) -> Result<Self> {
        let bd = self.split_dims(split)?;
        let dims = self.dims.as_deref().expect("checked by split_dims");
        let kept = match keep {
            Subsystem::A => dims[..split].to_vec(),
            Subsystem::B => dims[split..].to_vec(),
        };
        let m = partial_trace(&self.mat, bd, keep)?;
        Ok(Self::from_trusted(m.hermitian_part(), Some(kept)))
    }

    /// `tr_B ρ_AB` of a bipartite state.
    pub fn reduced_a(&self) -> Result<Self> {
        self.bipartite_dims()?;
        self.reduce(1, Subsystem::A)
    }

    /// `tr_A ρ_AB` of a bipartite state.
    pub fn reduced_b(&self) -> Result<Self> {
        self.bipartite_dims()?;
        self.reduce(1, Subsystem::B)
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eig(&self.mat)
            .map(|e| e.eigenvalues)
            .expect("density matrix is Hermitian")
    }
}

fn check_dim(expected: usize, got: usize) -> Result<()> {
    if expected != got {
        return Err(Error::DimensionMismatch { expected, got });
    }
    Ok(())
}

/// Projection-valued measure: orthogonal projectors summing to the identity.
#[derive(Clone, Debug, PartialEq)]
pub struct Pvm {
    blocks: Vec<Matrix>,
    non_degenerate: bool,
}

impl Pvm {
    pub fn new(blocks: Vec<Matrix>) -> Result<Self> {
        let first = blocks
            .first()
            .ok_or_else(|| Error::InvalidPvm("no blocks".into()))?;
        let dim = first.dim();
        let mut sum = Matrix::zeros(dim);
        for (i, b) in blocks.iter().enumerate() {
            check_dim(dim, b.dim())?;
            let h = b.hermiticity_defect();
            if h > PVM_TOL {
                return Err(Error::InvalidPvm(format!("block {i} is not Hermitian ({h:e})")));
            }
            let idem = (b * b).max_abs_diff(b);
            if idem > PVM_TOL {
                return Err(Error::InvalidPvm(format!("block {i} is not idempotent ({idem:e})")));
            }
            for (j, other) in blocks.iter().enumerate().skip(i + 1) {
                let overlap = (b * other).max_abs();
                if overlap > PVM_TOL {
                    return Err(Error::InvalidPvm(format!(
                        "blocks {i} and {j} are not orthogonal ({overlap:e})"
                    )));
                }
            }
            sum += b;
        }
        let completeness = sum.max_abs_diff(&Matrix::identity(dim));
        if completeness > PVM_TOL {
            return Err(Error::InvalidPvm(format!(
                "blocks do not sum to the identity ({completeness:e})"
            )));
        }
        let non_degenerate = blocks.iter().all(|b| (b.trace().re - 1.0).abs() <= PVM_TOL);
        Ok(Self {
            blocks,
            non_degenerate,
        })
    }

    /// Rank-one PVM on the columns of a unitary.
    pub fn from_basis(u: &Matrix) -> Result<Self> {
        let ones = vec![1; u.dim()];
        Self::from_basis_grouped(u, &ones)
    }

    /// PVM whose blocks project onto consecutive groups of columns of `u`.
    pub fn from_basis_grouped(u: &Matrix, groups: &[usize]) -> Result<Self> {
        let defect = u.unitarity_defect();
        if defect > PVM_TOL {
            return Err(Error::NotUnitary(defect));
        }
        if groups.contains(&0) || groups.iter().sum::<usize>() != u.dim() {
            return Err(Error::InvalidPvm(format!(
                "group sizes {groups:?} do not partition dimension {}",
                u.dim()
            )));
        }
        let mut start = 0;
        let blocks = groups
            .iter()
            .map(|&g| {
                let mut p = Matrix::zeros(u.dim());
                for k in start..start + g {
                    p += &Matrix::projector(&u.column(k));
                }
                start += g;
                p
            })
            .collect();
        Self::new(blocks)
    }

    pub fn computational(dim: usize) -> Self {
        Self::from_basis(&Matrix::identity(dim)).expect("identity is unitary")
    }

    /// The single-block PVM `{I}`.
    pub fn trivial(dim: usize) -> Self {
        Self {
            blocks: vec![Matrix::identity(dim)],
            non_degenerate: dim == 1,
        }
    }

    pub fn blocks(&self) -> &[Matrix] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.blocks[0].dim()
    }

    pub fn is_non_degenerate(&self) -> bool {
        self.non_degenerate
    }

    /// `B_i ⊗ I_b` for each block.
    pub fn extend_with_identity(&self, dim_b: usize) -> Vec<Matrix> {
        let id = Matrix::identity(dim_b);
        self.blocks.iter().map(|b| tensor_product(b, &id)).collect()
    }
}

/// A scalar result together with what it was computed from.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EntropyReport {
    pub quantity: String,
    pub value: ReportValue,
    pub inputs_digest: String,
    pub tolerance: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(untagged)]
pub enum ReportValue {
    Real(f64),
    /// `[re, im]`
    Complex([f64; 2]),
}

impl ReportValue {
    pub fn is_finite(&self) -> bool {
        match self {
            ReportValue::Real(x) => x.is_finite(),
            ReportValue::Complex([a, b]) => a.is_finite() && b.is_finite(),
        }
    }
}

impl From<f64> for ReportValue {
    fn from(x: f64) -> Self {
        ReportValue::Real(x)
    }
}

impl From<C64> for ReportValue {
    fn from(z: C64) -> Self {
        ReportValue::Complex([z.re, z.im])
    }
}

impl EntropyReport {
    pub fn new(
        quantity: impl Into<String>,
        value: impl Into<ReportValue>,
        inputs: &[&Matrix],
        tolerance: f64,
    ) -> Result<Self> {
        let value = value.into();
        if !value.is_finite() {
            return Err(Error::InvalidArgument("non-finite report value".into()));
        }
        Ok(Self {
            quantity: quantity.into(),
            value,
            inputs_digest: matrix_digest(inputs),
            tolerance,
        })
    }
}

/// SHA-256 over the little-endian bytes of every entry, hex encoded.
pub fn matrix_digest(inputs: &[&Matrix]) -> String {
    let mut h = Sha256::new();
    for m in inputs {
        h.update((m.dim() as u64).to_le_bytes());
        for z in m.entries() {
            h.update(z.re.to_le_bytes());
            h.update(z.im.to_le_bytes());
        }
    }
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

// ---------------------------------------------------------------------------
// entropies

/// `γ(ρ) = tr ρ²`.
pub fn purity(rho: &DensityMatrix) -> f64 {
    rho.mat.trace_product(&rho.mat).re
}

/// `L(ρ) = tr[ρ(I - ρ)] = 1 - tr ρ²`.
pub fn logical_entropy(rho: &DensityMatrix) -> f64 {
    1.0 - purity(rho)
}

/// `ρ' = Σ_i B_i ρ B_i`.
pub fn measured_state(rho: &DensityMatrix, pvm: &Pvm) -> Result<DensityMatrix> {
    check_dim(rho.dim(), pvm.dim())?;
    let mut out = Matrix::zeros(rho.dim());
    for b in pvm.blocks() {
        out += &(&(b * &rho.mat) * b);
    }
    Ok(DensityMatrix::from_trusted(out.hermitian_part(), rho.dims.clone()))
}

/// `q_i = tr(B_i ρ)`.
pub fn outcome_probabilities(rho: &DensityMatrix, pvm: &Pvm) -> Result<Vec<f64>> {
    check_dim(rho.dim(), pvm.dim())?;
    Ok(pvm
        .blocks()
        .iter()
        .map(|b| b.trace_product(&rho.mat).re.clamp(0.0, 1.0))
        .collect())
}

/// `L_π(ρ) = Σ_i q_i (1 - q_i)` with `q_i = tr(B_i ρ)`.
///
/// This is the probability that two copies measured with the PVM land in
/// different blocks. For rank-one PVMs it equals `tr[ρ'(I - ρ')]`; for coarse
/// blocks `ρ'` keeps intra-block coherences and the two differ.
pub fn pvm_logical_entropy(rho: &DensityMatrix, pvm: &Pvm) -> Result<f64> {
    let q = outcome_probabilities(rho, pvm)?;
    Ok(q.iter().map(|qi| qi * (1.0 - qi)).sum())
}

/// PVM onto the eigenbasis of `ρ`, ordered by non-increasing eigenvalue.
pub fn eigenbasis_pvm(rho: &DensityMatrix) -> Pvm {
    let eig = hermitian_eig(&rho.mat).expect("density matrix is Hermitian");
    Pvm::from_basis(&eig.eigenvectors).expect("Jacobi eigenvectors are orthonormal")
}

/// Minimum of `L_π(ρ)` over non-degenerate PVMs, attained in the eigenbasis:
/// `1 - Σ λ_i²`.
pub fn min_logical_entropy(rho: &DensityMatrix) -> f64 {
    let eig = hermitian_eig(&rho.mat).expect("density matrix is Hermitian");
    1.0 - eig.eigenvalues.iter().map(|l| l * l).sum::<f64>()
}

/// Splits `tr ρ²` in the PVM basis into `(tr ρ'², Σ_{i≠j} |ρ_ij|²)`.
pub fn basis_decomposition_check(rho: &DensityMatrix, pvm: &Pvm) -> Result<(f64, f64)> {
    check_dim(rho.dim(), pvm.dim())?;
    if let Some((block, b)) = pvm
        .blocks()
        .iter()
        .enumerate()
        .find(|(_, b)| (b.trace().re - 1.0).abs() > PVM_TOL)
    {
        return Err(Error::DegeneratePvm {
            block,
            rank: b.trace().re,
        });
    }
    // |ρ_ij|² = ⟨b_i|ρ|b_j⟩⟨b_j|ρ|b_i⟩ = tr(B_i ρ B_j ρ)
    let products: Vec<Matrix> = pvm.blocks().iter().map(|b| b * &rho.mat).collect();
    let mut diagonal = 0.0;
    let mut off = 0.0;
    for (i, pi) in products.iter().enumerate() {
        for (j, pj) in products.iter().enumerate() {
            let v = pi.trace_product(pj).re;
            if i == j {
                diagonal += v;
            } else {
                off += v;
            }
        }
    }
    Ok((diagonal, off))
}

/// Three algebraically equal forms of the logical divergence.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DivergenceForms {
    /// `2 tr ρ(I - σ) - L(ρ) - L(σ)`
    pub definitional: f64,
    /// `tr(ρ - σ)²`
    pub hilbert_schmidt: f64,
    /// `γ(ρ) + γ(σ) - 2 tr(ρσ)`
    pub purity_form: f64,
}

pub fn logical_divergence_forms(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<DivergenceForms> {
    check_dim(rho.dim(), sigma.dim())?;
    let cross = rho.mat.trace_product(&sigma.mat).re;
    let definitional =
        2.0 * (rho.mat.trace().re - cross) - logical_entropy(rho) - logical_entropy(sigma);
    let diff = &rho.mat - &sigma.mat;
    let hilbert_schmidt = diff.trace_product(&diff).re;
    let purity_form = purity(rho) + purity(sigma) - 2.0 * cross;
    Ok(DivergenceForms {
        definitional,
        hilbert_schmidt,
        purity_form,
    })
}

/// `d(ρ‖σ) = 2 tr ρ(I - σ) - L(ρ) - L(σ)`.
pub fn logical_divergence(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    logical_divergence_forms(rho, sigma).map(|f| f.definitional)
}

/// Relative logical entropy with the two candidate divergence identities.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RelativeEntropyReport {
    /// `L(ρ_AB) - L(I/d ⊗ ρ_B)`, `d = dim A`.
    pub value: f64,
    /// `-d(ρ_AB ‖ I/d ⊗ ρ_B)`
    pub minus_divergence: f64,
    /// `-(1/4) d(ρ_AB ‖ I/d ⊗ ρ_B)`
    pub minus_quarter_divergence: f64,
    pub matches_unit_factor: bool,
    pub matches_quarter_factor: bool,
    pub tolerance: f64,
}

pub fn relative_logical_entropy(rho_ab: &DensityMatrix) -> Result<RelativeEntropyReport> {
    let dims = rho_ab.bipartite_dims()?;
    let rho_b = rho_ab.reduced_b()?;
    let reference = DensityMatrix::maximally_mixed(dims.dim_a).tensor(&rho_b);
    let value = logical_entropy(rho_ab) - logical_entropy(&reference);
    let div = logical_divergence(rho_ab, &reference)?;
    let tol = EQ_TOL;
    Ok(RelativeEntropyReport {
        value,
        minus_divergence: -div,
        minus_quarter_divergence: -0.25 * div,
        matches_unit_factor: (value + div).abs() <= tol,
        matches_quarter_factor: (value + 0.25 * div).abs() <= tol,
        tolerance: tol,
    })
}

/// `F(ρ, σ) = (tr √(√σ ρ √σ))²`, clamped to `[0, 1]`.
pub fn fidelity(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    check_dim(rho.dim(), sigma.dim())?;
    let s = psd_sqrt(&sigma.mat)?;
    let inner = (&(&s * &rho.mat) * &s).hermitian_part();
    let root = psd_sqrt(&inner)?;
    Ok(root.trace().re.powi(2).clamp(0.0, 1.0))
}

/// One outcome of a PVM applied to subsystem `A`.
#[derive(Clone, Debug, PartialEq)]
pub struct ConditionalState {
    pub outcome: usize,
    pub probability: f64,
    pub state: DensityMatrix,
}

/// `p_k = tr(A_k ρ_A)` and `ρ_B^(k) = tr_A[(A_k ⊗ I) ρ_AB] / p_k` for each outcome
/// with `p_k > 1e-12`.
pub fn conditional_states(rho_ab: &DensityMatrix, pvm_on_a: &Pvm) -> Result<Vec<ConditionalState>> {
    let dims = rho_ab.bipartite_dims()?;
    check_dim(dims.dim_a, pvm_on_a.dim())?;
    let mut out = Vec::new();
    for (k, block) in pvm_on_a.extend_with_identity(dims.dim_b).iter().enumerate() {
        let sandwiched = &(block * &rho_ab.mat) * block;
        let unnormalized = partial_trace(&sandwiched, dims, Subsystem::B)?.hermitian_part();
        let p = unnormalized.trace().re;
        if p > OUTCOME_CUTOFF {
            out.push(ConditionalState {
                outcome: k,
                probability: p,
                state: DensityMatrix::from_trusted(unnormalized.scale_real(1.0 / p), None),
            });
        }
    }
    Ok(out)
}
