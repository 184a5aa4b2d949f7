//! Unital channels, POVM implementations, purification, Schmidt
//! decomposition, system–reservoir interaction blocks and the subsystem
//! twirl.

use std::f64::consts::TAU;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{
    c, cr, hermitian_eig, kron_vec, norm, partial_trace, psd_sqrt, tensor_product,
    BipartiteDims, Matrix, Subsystem, C64, EQ_TOL, PSD_TOL,
};
use crate::quantum::{logical_entropy, DensityMatrix, Pvm};

/// Kraus-sum residual allowed for trace preservation and unitality.
pub const KRAUS_TOL: f64 = 1e-9;
/// Schmidt terms with `s_k² <= SCHMIDT_CUTOFF` are dropped.
pub const SCHMIDT_CUTOFF: f64 = 1e-12;

fn kraus_sums(ops: &[Matrix]) -> (f64, f64) {
    let dim = ops[0].dim();
    let mut tp = Matrix::zeros(dim);
    let mut un = Matrix::zeros(dim);
    for m in ops {
        let md = m.adjoint();
        tp += &(&md * m);
        un += &(m * &md);
    }
    let id = Matrix::identity(dim);
    (tp.max_abs_diff(&id), un.max_abs_diff(&id))
}

/// Channel `ρ ↦ Σ M_i ρ M_i†` with `Σ M_i†M_i = Σ M_i M_i† = I`.
#[derive(Clone, Debug, PartialEq)]
pub struct UnitalChannel {
    kraus_ops: Vec<Matrix>,
}

impl UnitalChannel {
    pub fn new(kraus_ops: Vec<Matrix>) -> Result<Self> {
        let first = kraus_ops
            .first()
            .ok_or_else(|| Error::InvalidArgument("channel has no Kraus operators".into()))?;
        if let Some(bad) = kraus_ops.iter().find(|m| m.dim() != first.dim()) {
            return Err(Error::DimensionMismatch {
                expected: first.dim(),
                got: bad.dim(),
            });
        }
        let (tp, un) = kraus_sums(&kraus_ops);
        if tp > KRAUS_TOL {
            return Err(Error::NotTracePreserving(tp));
        }
        if un > KRAUS_TOL {
            return Err(Error::NotUnital(un));
        }
        Ok(Self { kraus_ops })
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            kraus_ops: vec![Matrix::identity(dim)],
        }
    }

    /// `Σ p_k U_k ρ U_k†`, i.e. Kraus operators `√p_k U_k`.
    pub fn unitary_mixture(components: &[(f64, Matrix)]) -> Result<Self> {
        Self::new(
            components
                .iter()
                .map(|(p, u)| u.scale_real(p.max(0.0).sqrt()))
                .collect(),
        )
    }

    /// Non-selective measurement `ρ ↦ Σ B_i ρ B_i`.
    pub fn dephasing(pvm: &Pvm) -> Self {
        Self {
            kraus_ops: pvm.blocks().to_vec(),
        }
    }

    pub fn kraus_ops(&self) -> &[Matrix] {
        &self.kraus_ops
    }

    pub fn dim(&self) -> usize {
        self.kraus_ops[0].dim()
    }
}

pub fn apply_channel(ch: &UnitalChannel, rho: &DensityMatrix) -> Result<DensityMatrix> {
    if ch.dim() != rho.dim() {
        return Err(Error::DimensionMismatch {
            expected: ch.dim(),
            got: rho.dim(),
        });
    }
    let mut out = Matrix::zeros(rho.dim());
    for m in ch.kraus_ops() {
        out += &rho.matrix().conjugate_by(m);
    }
    Ok(DensityMatrix::from_trusted(
        out.hermitian_part(),
        rho.dims().map(<[usize]>::to_vec),
    ))
}

/// Positive operator-valued measure.
#[derive(Clone, Debug, PartialEq)]
pub struct Povm {
    effects: Vec<Matrix>,
}

impl Povm {
    pub fn new(effects: Vec<Matrix>) -> Result<Self> {
        let first = effects
            .first()
            .ok_or_else(|| Error::InvalidPovm("no effects".into()))?;
        let dim = first.dim();
        let mut sum = Matrix::zeros(dim);
        for (i, e) in effects.iter().enumerate() {
            if e.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: e.dim(),
                });
            }
            let eig = hermitian_eig(e)
                .map_err(|_| Error::InvalidPovm(format!("effect {i} is not Hermitian")))?;
            let min = *eig.eigenvalues.last().expect("non-empty spectrum");
            if min < -PSD_TOL {
                return Err(Error::InvalidPovm(format!(
                    "effect {i} has negative eigenvalue {min:e}"
                )));
            }
            sum += e;
        }
        let defect = sum.max_abs_diff(&Matrix::identity(dim));
        if defect > KRAUS_TOL {
            return Err(Error::InvalidPovm(format!(
                "effects do not sum to the identity ({defect:e})"
            )));
        }
        Ok(Self { effects })
    }

    pub fn from_pvm(pvm: &Pvm) -> Self {
        Self {
            effects: pvm.blocks().to_vec(),
        }
    }

    pub fn effects(&self) -> &[Matrix] {
        &self.effects
    }
}

/// The implementation with Kraus operators `M_i = √E_i`.
///
/// `Σ √E_i √E_i† = Σ E_i = I`, so [`Error::NotUnital`] here means the square
/// roots were numerically corrupted rather than that the POVM is unusual.
pub fn povm_unital_implementation(povm: &Povm) -> Result<UnitalChannel> {
    let kraus = povm
        .effects()
        .iter()
        .map(psd_sqrt)
        .collect::<Result<Vec<_>>>()?;
    UnitalChannel::new(kraus)
}

/// `|Ψ⟩ = Σ_i √λ_i |λ_i⟩|i⟩` on `d²` dimensions, system factor first, with
/// eigenvalues in non-increasing order and the computational ancilla basis.
pub fn purify(rho: &DensityMatrix) -> Vec<C64> {
    let d = rho.dim();
    let eig = hermitian_eig(rho.matrix()).expect("density matrix is Hermitian");
    let mut psi = vec![cr(0.0); d * d];
    for (i, &l) in eig.eigenvalues.iter().enumerate() {
        let w = l.max(0.0).sqrt();
        if w == 0.0 {
            continue;
        }
        let v = eig.eigenvector(i);
        for (s, vs) in v.iter().enumerate() {
            psi[s * d + i] += vs * w;
        }
    }
    psi
}

/// `ψ = Σ_k s_k |a_k⟩|b_k⟩`.
#[derive(Clone, Debug)]
pub struct SchmidtDecomposition {
    /// Non-increasing, strictly positive.
    pub coefficients: Vec<f64>,
    pub basis_a: Vec<Vec<C64>>,
    pub basis_b: Vec<Vec<C64>>,
}

impl SchmidtDecomposition {
    pub fn rank(&self) -> usize {
        self.coefficients.len()
    }

    pub fn reconstruct(&self) -> Vec<C64> {
        let n = self.basis_a[0].len() * self.basis_b[0].len();
        let mut out = vec![cr(0.0); n];
        for ((s, a), b) in self.coefficients.iter().zip(&self.basis_a).zip(&self.basis_b) {
            for (o, x) in out.iter_mut().zip(kron_vec(a, b)) {
                *o += x * *s;
            }
        }
        out
    }
}

pub fn schmidt_decompose(psi: &[C64], dims: BipartiteDims) -> Result<SchmidtDecomposition> {
    dims.check(psi.len())?;
    let n = norm(psi);
    if (n - 1.0).abs() > EQ_TOL {
        return Err(Error::NotNormalized(n));
    }
    let rho_a = partial_trace(&Matrix::projector(psi), dims, Subsystem::A)?;
    let eig = hermitian_eig(&rho_a)?;
    let BipartiteDims { dim_a, dim_b } = dims;
    let mut out = SchmidtDecomposition {
        coefficients: Vec::new(),
        basis_a: Vec::new(),
        basis_b: Vec::new(),
    };
    for (k, &l) in eig.eigenvalues.iter().enumerate() {
        if l <= SCHMIDT_CUTOFF {
            break;
        }
        let s = l.sqrt();
        let a = eig.eigenvector(k);
        // |b_k⟩ = (⟨a_k| ⊗ I)|ψ⟩ / s_k
        let b: Vec<C64> = (0..dim_b)
            .map(|j| (0..dim_a).map(|i| a[i].conj() * psi[i * dim_b + j]).sum::<C64>() / s)
            .collect();
        out.coefficients.push(s);
        out.basis_a.push(a);
        out.basis_b.push(b);
    }
    Ok(out)
}

/// Blocks `B_ij = ⟨i|ρ'_SR|j⟩` of a joint state over an orthonormal basis of `R`.
#[derive(Clone, Debug)]
pub struct InteractionBlocks {
    dim_s: usize,
    dim_r: usize,
    blocks: Vec<Matrix>,
}

impl InteractionBlocks {
    /// Slices a joint `S ⊗ R` matrix in the computational basis of `R`.
    pub fn from_joint(joint: &Matrix, dims: BipartiteDims) -> Result<Self> {
        dims.check(joint.dim())?;
        let BipartiteDims {
            dim_a: ds,
            dim_b: dr,
        } = dims;
        let mut blocks = Vec::with_capacity(dr * dr);
        for i in 0..dr {
            for j in 0..dr {
                blocks.push(Matrix::from_fn(ds, |a, b| joint[(a * dr + i, b * dr + j)]));
            }
        }
        let out = Self {
            dim_s: ds,
            dim_r: dr,
            blocks,
        };
        out.check()?;
        Ok(out)
    }

    fn check(&self) -> Result<()> {
        let mut worst = 0.0f64;
        for i in 0..self.dim_r {
            for j in 0..self.dim_r {
                worst = worst.max(self.block(j, i).max_abs_diff(&self.block(i, j).adjoint()));
            }
        }
        if worst > EQ_TOL {
            return Err(Error::NotHermitian(worst));
        }
        let tr: f64 = (0..self.dim_r).map(|i| self.block(i, i).trace().re).sum();
        if (tr - 1.0).abs() > EQ_TOL {
            return Err(Error::InvalidTrace(tr));
        }
        Ok(())
    }

    pub fn block(&self, i: usize, j: usize) -> &Matrix {
        &self.blocks[i * self.dim_r + j]
    }

    pub fn dim_s(&self) -> usize {
        self.dim_s
    }

    pub fn dim_r(&self) -> usize {
        self.dim_r
    }

    /// `ρ'_S = Σ_i B_ii`.
    pub fn reduced_s(&self) -> DensityMatrix {
        let mut s = Matrix::zeros(self.dim_s);
        for i in 0..self.dim_r {
            s += self.block(i, i);
        }
        DensityMatrix::from_trusted(s.hermitian_part(), None)
    }
}

/// Evolves `ρ_SR` by `U` and slices the result into [`InteractionBlocks`].
pub fn interaction_blocks(rho_sr: &DensityMatrix, u: &Matrix) -> Result<InteractionBlocks> {
    let dims = rho_sr.bipartite_dims()?;
    let evolved = rho_sr.evolve(u)?;
    InteractionBlocks::from_joint(evolved.matrix(), dims)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct InteractionBounds {
    /// `2 Σ_i Σ_{j<i} { tr(B_ij B_ij†) - Re tr(B_ii B_jj) }`
    pub lower: f64,
    /// `2 Σ_i Σ_{j<i} tr(B_ij B_ij†)`, valid only for pure joint states.
    pub upper: Option<f64>,
    /// `L(ρ'_S)`.
    pub entropy: f64,
    /// `1 - Σ_i tr(B_ii²)`.
    pub diagonal_impurity: f64,
}

pub fn prop6_bounds(blocks: &InteractionBlocks, joint_pure: bool) -> InteractionBounds {
    let r = blocks.dim_r();
    let mut cross = 0.0;
    let mut overlap = 0.0;
    let mut diag_sq = 0.0;
    for i in 0..r {
        let bii = blocks.block(i, i);
        diag_sq += bii.trace_product(bii).re;
        for j in 0..i {
            let bij = blocks.block(i, j);
            cross += bij.frobenius_norm_sq();
            overlap += bii.trace_product(blocks.block(j, j)).re;
        }
    }
    InteractionBounds {
        lower: 2.0 * (cross - overlap),
        upper: joint_pure.then_some(2.0 * cross),
        entropy: logical_entropy(&blocks.reduced_s()),
        diagonal_impurity: 1.0 - diag_sq,
    }
}

/// Discrete Weyl operator `X^a Z^c` on dimension `b`, with `X|k⟩ = |k+1⟩` and
/// `Z|k⟩ = ω^k |k⟩`, `ω = e^{2πi/b}`.
pub fn weyl_operator(b: usize, a: usize, cc: usize) -> Matrix {
    let mut m = Matrix::zeros(b);
    for k in 0..b {
        let phase = TAU * ((cc * k) % b) as f64 / b as f64;
        m[((k + a) % b, k)] = c(phase.cos(), phase.sin());
    }
    m
}

/// Uniform mixture of `(I ⊗ W) ρ_AB (I ⊗ W)†` over the `b²` Weyl operators on `B`,
/// which equals `ρ_A ⊗ I/b`.
pub fn twirl_subsystem(rho_ab: &DensityMatrix) -> Result<DensityMatrix> {
    let dims = rho_ab.bipartite_dims()?;
    let b = dims.dim_b;
    let id_a = Matrix::identity(dims.dim_a);
    let mut acc = Matrix::zeros(rho_ab.dim());
    for a in 0..b {
        for cc in 0..b {
            let w = tensor_product(&id_a, &weyl_operator(b, a, cc));
            acc += &rho_ab.matrix().conjugate_by(&w);
        }
    }
    let out = acc.scale_real(1.0 / (b * b) as f64).hermitian_part();
    Ok(DensityMatrix::from_trusted(out, Some(vec![dims.dim_a, dims.dim_b])))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{basis_vector, normalized};
    use crate::quantum::{logical_entropy, measured_state};

    const S: f64 = std::f64::consts::FRAC_1_SQRT_2;

    fn plus() -> DensityMatrix {
        DensityMatrix::pure(&[cr(S), cr(S)]).unwrap()
    }

    fn zero() -> DensityMatrix {
        DensityMatrix::pure(&[cr(1.0), cr(0.0)]).unwrap()
    }

    fn cnot() -> Matrix {
        Matrix::from_real_rows(&[
            &[1.0, 0.0, 0.0, 0.0],
            &[0.0, 1.0, 0.0, 0.0],
            &[0.0, 0.0, 0.0, 1.0],
            &[0.0, 0.0, 1.0, 0.0],
        ])
        .unwrap()
    }

    fn swap() -> Matrix {
        Matrix::from_real_rows(&[
            &[1.0, 0.0, 0.0, 0.0],
            &[0.0, 0.0, 1.0, 0.0],
            &[0.0, 1.0, 0.0, 0.0],
            &[0.0, 0.0, 0.0, 1.0],
        ])
        .unwrap()
    }

    #[test]
    fn channel_examples() {
        let r = plus();
        let out = apply_channel(&UnitalChannel::identity(2), &r).unwrap();
        assert!(out.matrix().max_abs_diff(r.matrix()) < 1e-15);

        let deph = UnitalChannel::dephasing(&Pvm::computational(2));
        let out = apply_channel(&deph, &r).unwrap();
        let oracle = measured_state(&r, &Pvm::computational(2)).unwrap();
        assert!(out.matrix().max_abs_diff(oracle.matrix()) < 1e-15);

        let x = Matrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]).unwrap();
        let ch = UnitalChannel::unitary_mixture(&[(0.3, Matrix::identity(2)), (0.7, x)]).unwrap();
        let mm = DensityMatrix::maximally_mixed(2);
        let out = apply_channel(&ch, &mm).unwrap();
        assert!(out.matrix().max_abs_diff(mm.matrix()) < 1e-15);
    }

    #[test]
    fn channel_validation() {
        // amplitude damping is trace preserving but not unital
        let g: f64 = 0.3;
        let k0 = Matrix::diag(&[1.0, (1.0 - g).sqrt()]);
        let k1 = Matrix::from_real_rows(&[&[0.0, g.sqrt()], &[0.0, 0.0]]).unwrap();
        assert!(matches!(UnitalChannel::new(vec![k0, k1]), Err(Error::NotUnital(_))));
        assert!(matches!(
            UnitalChannel::new(vec![Matrix::diag(&[1.0, 0.5])]),
            Err(Error::NotTracePreserving(_))
        ));
        assert!(apply_channel(&UnitalChannel::identity(3), &plus()).is_err());
    }

    #[test]
    fn povm_implementations() {
        let pvm = Pvm::computational(2);
        let ch = povm_unital_implementation(&Povm::from_pvm(&pvm)).unwrap();
        for (k, p) in ch.kraus_ops().iter().zip(pvm.blocks()) {
            assert!(k.max_abs_diff(p) < 1e-12);
        }

        let half = Matrix::maximally_mixed(2);
        let ch = povm_unital_implementation(&Povm::new(vec![half.clone(), half]).unwrap()).unwrap();
        for k in ch.kraus_ops() {
            assert!(k.max_abs_diff(&Matrix::identity(2).scale_real(S)) < 1e-12);
        }
        let out = apply_channel(&ch, &plus()).unwrap();
        assert!(out.matrix().max_abs_diff(plus().matrix()) < 1e-12);

        assert!(Povm::new(vec![Matrix::diag(&[1.0, 0.5])]).is_err());
        assert!(Povm::new(vec![Matrix::diag(&[1.5, 1.0]), Matrix::diag(&[-0.5, 0.0])]).is_err());
    }

    #[test]
    fn purification_examples() {
        let r = DensityMatrix::pure(&normalized(&[cr(1.0), c(0.0, 2.0)])).unwrap();
        let psi = purify(&r);
        let back = partial_trace(&Matrix::projector(&psi), BipartiteDims::new(2, 2).unwrap(), Subsystem::A).unwrap();
        assert!(back.max_abs_diff(r.matrix()) < 1e-12);
        // rank one: ancilla left in |0⟩
        assert!(psi[1].norm() < 1e-12 && psi[3].norm() < 1e-12);

        for rho in [DensityMatrix::maximally_mixed(2), DensityMatrix::new(Matrix::diag(&[0.75, 0.25])).unwrap()] {
            let psi = purify(&rho);
            assert!((norm(&psi) - 1.0).abs() < 1e-12);
            let back = partial_trace(&Matrix::projector(&psi), BipartiteDims::new(2, 2).unwrap(), Subsystem::A).unwrap();
            assert!(back.max_abs_diff(rho.matrix()) < 1e-12);
        }
    }

    #[test]
    fn schmidt_examples() {
        let dims = BipartiteDims::new(2, 2).unwrap();
        let prod = kron_vec(&basis_vector(2, 0), &basis_vector(2, 1));
        let sd = schmidt_decompose(&prod, dims).unwrap();
        assert_eq!(sd.rank(), 1);
        assert!((sd.coefficients[0] - 1.0).abs() < 1e-12);

        let bell = vec![cr(S), cr(0.0), cr(0.0), cr(S)];
        let sd = schmidt_decompose(&bell, dims).unwrap();
        assert_eq!(sd.rank(), 2);
        for s in &sd.coefficients {
            assert!((s - S).abs() < 1e-12);
        }
        let rec = sd.reconstruct();
        assert!(rec.iter().zip(&bell).all(|(a, b)| (a - b).norm() < 1e-12));

        let psi = vec![cr(0.75f64.sqrt()), cr(0.0), cr(0.0), cr(0.5)];
        let sd = schmidt_decompose(&psi, dims).unwrap();
        assert!((sd.coefficients[0] - 0.75f64.sqrt()).abs() < 1e-12);
        assert!((sd.coefficients[1] - 0.5).abs() < 1e-12);

        assert!(matches!(
            schmidt_decompose(&[cr(1.0), cr(1.0), cr(0.0), cr(0.0)], dims),
            Err(Error::NotNormalized(_))
        ));
    }

    #[test]
    fn interaction_block_examples() {
        let rho_s = DensityMatrix::new(Matrix::diag(&[0.75, 0.25])).unwrap();
        let joint = rho_s.tensor(&zero());
        let blocks = interaction_blocks(&joint, &Matrix::identity(4)).unwrap();
        assert!(blocks.block(0, 0).max_abs_diff(rho_s.matrix()) < 1e-15);
        assert!(blocks.block(0, 1).max_abs() < 1e-15);
        assert!(blocks.block(1, 1).max_abs() < 1e-15);
        let b = prop6_bounds(&blocks, false);
        assert_eq!(b.lower, 0.0);

        let joint = plus().tensor(&zero());
        let blocks = interaction_blocks(&joint, &swap()).unwrap();
        assert!(blocks.reduced_s().matrix().max_abs_diff(zero().matrix()) < 1e-15);

        let blocks = interaction_blocks(&joint, &cnot()).unwrap();
        let rs = blocks.reduced_s();
        assert!(rs.matrix().max_abs_diff(&Matrix::maximally_mixed(2)) < 1e-15);
        let b = prop6_bounds(&blocks, true);
        assert!((b.entropy - 0.5).abs() < 1e-15);
        assert!(b.lower <= 0.5 + 1e-12);
        assert!(0.5 <= b.upper.unwrap() + 1e-12);
        assert!((b.upper.unwrap() - b.diagonal_impurity).abs() < 1e-12);

        assert!(interaction_blocks(&joint, &Matrix::diag(&[1.0, 1.0, 1.0, 0.5])).is_err());
    }

    #[test]
    fn twirl_examples() {
        let ra = DensityMatrix::new(Matrix::diag(&[0.75, 0.25])).unwrap();
        let prod = ra.tensor(&plus());
        let t = twirl_subsystem(&prod).unwrap();
        let expected = tensor_product(ra.matrix(), &Matrix::maximally_mixed(2));
        assert!(t.matrix().max_abs_diff(&expected) < 1e-14);

        let bell = DensityMatrix::pure(&[cr(S), cr(0.0), cr(0.0), cr(S)])
            .unwrap()
            .with_dims(vec![2, 2])
            .unwrap();
        let t = twirl_subsystem(&bell).unwrap();
        assert!(t.matrix().max_abs_diff(&Matrix::maximally_mixed(4)) < 1e-14);
        assert!((logical_entropy(&t) - 0.75).abs() < 1e-14);

        assert!(matches!(
            twirl_subsystem(&DensityMatrix::maximally_mixed(4)),
            Err(Error::MissingDims)
        ));
    }

    #[test]
    fn weyl_operators_are_unitary() {
        for b in 1..5 {
            for a in 0..b {
                for cc in 0..b {
                    assert!(weyl_operator(b, a, cc).unitarity_defect() < 1e-14);
                }
            }
        }
    }
}
