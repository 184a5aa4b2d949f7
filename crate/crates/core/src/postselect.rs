//! Pre- and post-selected systems: the generalized density matrix
//! `ρ_{ψ|φ} = |ψ⟩⟨φ| / ⟨φ|ψ⟩`, weak values, ABL weights, and the two logical
//! entropies built from them.
//!
//! The post-selected entropy `Σ|w_i|²|1-w_i|²` and the weak entropy
//! `Σ w_i(1-w_i)` are both computed from their definitions.
//! [`relation_diagnostic`] compares the former against `|weak|²` and reports
//! whether they agree. The two coincide in degenerate cases but not in
//! general (for `ψ = |+⟩`, `φ = (|0⟩ + i|1⟩)/√2` they are 1/2 and 1), so the
//! comparison is reported rather than assumed.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{cr, inner, norm, Matrix, C64, EQ_TOL};
use crate::quantum::Pvm;

/// Pairs with `|⟨φ|ψ⟩|` at or below this are rejected as orthogonal.
pub const OVERLAP_CUTOFF: f64 = 1e-12;

/// Pre-selected `|ψ⟩` and post-selected `|φ⟩`, both unit norm and non-orthogonal.
#[derive(Clone, Debug, PartialEq)]
pub struct PrePostPair {
    pre: Vec<C64>,
    post: Vec<C64>,
    overlap: C64,
}

impl PrePostPair {
    pub fn new(pre: Vec<C64>, post: Vec<C64>) -> Result<Self> {
        if pre.len() != post.len() {
            return Err(Error::DimensionMismatch {
                expected: pre.len(),
                got: post.len(),
            });
        }
        for v in [&pre, &post] {
            let n = norm(v);
            if (n - 1.0).abs() > EQ_TOL {
                return Err(Error::NotNormalized(n));
            }
        }
        let overlap = inner(&post, &pre);
        if overlap.norm() <= OVERLAP_CUTOFF {
            return Err(Error::OrthogonalSelection(overlap.norm()));
        }
        Ok(Self { pre, post, overlap })
    }

    pub fn pre(&self) -> &[C64] {
        &self.pre
    }

    pub fn post(&self) -> &[C64] {
        &self.post
    }

    /// `⟨φ|ψ⟩`.
    pub fn overlap(&self) -> C64 {
        self.overlap
    }

    pub fn dim(&self) -> usize {
        self.pre.len()
    }
}

/// `ρ_{ψ|φ}`; unit trace, rank one, not Hermitian in general.
#[derive(Clone, Debug, PartialEq)]
pub struct GeneralizedDensity {
    mat: Matrix,
}

impl GeneralizedDensity {
    pub fn matrix(&self) -> &Matrix {
        &self.mat
    }

    pub fn dim(&self) -> usize {
        self.mat.dim()
    }
}

pub fn pre_post_state(pair: &PrePostPair) -> GeneralizedDensity {
    let outer = Matrix::outer(&pair.pre, &pair.post).expect("pair vectors share a dimension");
    GeneralizedDensity {
        mat: outer.scale(cr(1.0) / pair.overlap),
    }
}

fn check_dims(rho: &GeneralizedDensity, pvm: &Pvm) -> Result<()> {
    if rho.dim() != pvm.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            got: pvm.dim(),
        });
    }
    Ok(())
}

/// `w_i = tr(B_i ρ_{ψ|φ})`; these sum to one.
pub fn weak_values(rho: &GeneralizedDensity, pvm: &Pvm) -> Result<Vec<C64>> {
    check_dims(rho, pvm)?;
    Ok(pvm.blocks().iter().map(|b| b.trace_product(&rho.mat)).collect())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AblProbabilities {
    /// `|w_i|²` as given, which need not sum to one.
    pub unnormalized: Vec<f64>,
    /// `|w_i|² / Σ_j |w_j|²`.
    pub normalized: Vec<f64>,
}

pub fn abl_probabilities(rho: &GeneralizedDensity, pvm: &Pvm) -> Result<AblProbabilities> {
    let unnormalized: Vec<f64> = weak_values(rho, pvm)?.iter().map(|w| w.norm_sqr()).collect();
    let total: f64 = unnormalized.iter().sum();
    if total < 1e-15 {
        return Err(Error::VanishingAbl(total));
    }
    let normalized = unnormalized.iter().map(|p| p / total).collect();
    Ok(AblProbabilities {
        unnormalized,
        normalized,
    })
}

/// `Σ_i |w_i|² |1 - w_i|²`.
pub fn postselected_logical_entropy(rho: &GeneralizedDensity, pvm: &Pvm) -> Result<f64> {
    Ok(weak_values(rho, pvm)?
        .iter()
        .map(|w| w.norm_sqr() * (cr(1.0) - w).norm_sqr())
        .sum())
}

/// `Σ_i |w_i (1 - w_i)|²`, the same quantity factored differently.
pub fn postselected_logical_entropy_product_form(rho: &GeneralizedDensity, pvm: &Pvm) -> Result<f64> {
    Ok(weak_values(rho, pvm)?
        .iter()
        .map(|w| (w * (cr(1.0) - w)).norm_sqr())
        .sum())
}

/// `Σ_i w_i (1 - w_i)`; complex in general.
pub fn weak_logical_entropy(rho: &GeneralizedDensity, pvm: &Pvm) -> Result<C64> {
    Ok(weak_values(rho, pvm)?.iter().map(|w| w * (cr(1.0) - w)).sum())
}

/// `tr[ρ'(I - ρ')]` with `ρ' = Σ_i B_i ρ_{ψ|φ} B_i`.
///
/// Equals [`weak_logical_entropy`] for rank-one PVMs.
pub fn weak_logical_entropy_measured_form(rho: &GeneralizedDensity, pvm: &Pvm) -> Result<C64> {
    check_dims(rho, pvm)?;
    let mut measured = Matrix::zeros(rho.dim());
    for b in pvm.blocks() {
        measured += &(&(b * &rho.mat) * b);
    }
    Ok(measured.trace() - measured.trace_product(&measured))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RelationDiagnostic {
    pub postselected: f64,
    /// `[re, im]`
    pub weak: [f64; 2],
    pub weak_modulus_squared: f64,
    pub abs_difference: f64,
    pub agree: bool,
    pub tolerance: f64,
}

/// Compares `Σ|w_i|²|1-w_i|²` with `|Σ w_i(1-w_i)|²`.
pub fn relation_diagnostic(rho: &GeneralizedDensity, pvm: &Pvm) -> Result<RelationDiagnostic> {
    let postselected = postselected_logical_entropy(rho, pvm)?;
    let weak = weak_logical_entropy(rho, pvm)?;
    let weak_modulus_squared = weak.norm_sqr();
    let abs_difference = (postselected - weak_modulus_squared).abs();
    Ok(RelationDiagnostic {
        postselected,
        weak: [weak.re, weak.im],
        weak_modulus_squared,
        abs_difference,
        agree: abs_difference <= EQ_TOL,
        tolerance: EQ_TOL,
    })
}
