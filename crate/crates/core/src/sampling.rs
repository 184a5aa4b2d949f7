//! Random states, unitaries, measurements and channels.
//!
//! The `random_*` functions draw from a caller-supplied generator; the
//! `sample_*` functions wrap them with a generator keyed by `(seed, dim, …)`
//! so a given seed always yields the same instance.

use rand::Rng;
use rand_distr::{Exp1, StandardNormal};

use crate::channels::{Povm, UnitalChannel};
use crate::error::{Error, Result};
use crate::linalg::{c, hermitian_eig, inner, Matrix, C64};
use crate::quantum::{DensityMatrix, Pvm};
use crate::rng::{keyed, Stream};

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    c(re, im)
}

/// Uniformly distributed unit vector.
pub fn random_state_vector<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Vec<C64> {
    loop {
        let v: Vec<C64> = (0..dim).map(|_| gaussian(rng)).collect();
        let n = crate::linalg::norm(&v);
        if n > 1e-12 {
            return v.into_iter().map(|z| z / n).collect();
        }
    }
}

/// `G G† / tr(G G†)` for a `dim × rank` complex Gaussian `G`.
///
/// `rank = dim` gives the Hilbert–Schmidt measure; `rank = 1` a Haar-random pure state.
pub fn random_density<R: Rng + ?Sized>(rng: &mut R, dim: usize, rank: usize) -> DensityMatrix {
    assert!(dim >= 1 && (1..=dim).contains(&rank), "rank must be in 1..=dim");
    let g: Vec<Vec<C64>> = (0..dim)
        .map(|_| (0..rank).map(|_| gaussian(rng)).collect())
        .collect();
    let mut m = Matrix::from_fn(dim, |i, j| {
        g[i].iter().zip(&g[j]).map(|(a, b)| a * b.conj()).sum()
    });
    let tr = m.trace().re;
    m = m.scale_real(1.0 / tr).hermitian_part();
    DensityMatrix::from_trusted(m, None)
}

/// Density matrix with rank drawn uniformly from `1..=dim`.
pub fn random_density_any_rank<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> DensityMatrix {
    let rank = rng.random_range(1..=dim);
    random_density(rng, dim, rank)
}

pub fn random_bipartite<R: Rng + ?Sized>(rng: &mut R, dim_a: usize, dim_b: usize) -> DensityMatrix {
    random_density_any_rank(rng, dim_a * dim_b)
        .with_dims(vec![dim_a, dim_b])
        .expect("dims multiply to the state dimension")
}

/// Haar unitary: Gram–Schmidt on a complex Gaussian matrix, which fixes every
/// diagonal entry of the triangular factor to be real and positive.
pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Matrix {
    loop {
        let mut cols: Vec<Vec<C64>> = (0..dim)
            .map(|_| (0..dim).map(|_| gaussian(rng)).collect())
            .collect();
        let mut ok = true;
        for j in 0..dim {
            for k in 0..j {
                let proj = inner(&cols[k], &cols[j]);
                let (head, tail) = cols.split_at_mut(j);
                for (x, y) in tail[0].iter_mut().zip(&head[k]) {
                    *x -= proj * y;
                }
            }
            let n = crate::linalg::norm(&cols[j]);
            if n < 1e-10 {
                ok = false;
                break;
            }
            cols[j].iter_mut().for_each(|z| *z /= n);
        }
        if ok {
            return Matrix::from_columns(&cols).expect("square");
        }
    }
}

/// Random PVM in a Haar basis; `groups` lists the ranks of consecutive blocks
/// (all ones when `None`).
pub fn random_pvm<R: Rng + ?Sized>(rng: &mut R, dim: usize, groups: Option<&[usize]>) -> Result<Pvm> {
    if let Some(g) = groups {
        if g.contains(&0) || g.iter().sum::<usize>() != dim {
            return Err(Error::InvalidPvm(format!(
                "group sizes {g:?} do not partition dimension {dim}"
            )));
        }
    }
    let u = random_unitary(rng, dim);
    match groups {
        Some(g) => Pvm::from_basis_grouped(&u, g),
        None => Pvm::from_basis(&u),
    }
}

/// Random composition of `total` into `parts` positive integers.
pub fn random_composition<R: Rng + ?Sized>(rng: &mut R, total: usize, parts: usize) -> Vec<usize> {
    assert!((1..=total).contains(&parts));
    let mut cuts: Vec<usize> = rand::seq::index::sample(rng, total - 1, parts - 1)
        .into_iter()
        .map(|i| i + 1)
        .collect();
    cuts.sort_unstable();
    let mut out = Vec::with_capacity(parts);
    let mut prev = 0;
    for c in cuts.into_iter().chain(std::iter::once(total)) {
        out.push(c - prev);
        prev = c;
    }
    out
}

/// Symmetric Dirichlet(1) weights.
pub fn random_weights<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<f64> {
    let e: Vec<f64> = (0..n).map(|_| rng.sample::<f64, _>(Exp1)).collect();
    let s: f64 = e.iter().sum();
    e.into_iter().map(|x| x / s).collect()
}

/// Mixture of `n` Haar unitaries with Dirichlet weights.
pub fn random_unitary_mixture<R: Rng + ?Sized>(rng: &mut R, dim: usize, n: usize) -> UnitalChannel {
    let w = random_weights(rng, n);
    let comps: Vec<(f64, Matrix)> = w.into_iter().map(|p| (p, random_unitary(rng, dim))).collect();
    UnitalChannel::unitary_mixture(&comps).expect("mixtures of unitaries are unital")
}

/// `E_k = S^{-1/2} G_k S^{-1/2}` with `G_k` Wishart and `S = Σ G_k`.
pub fn random_povm<R: Rng + ?Sized>(rng: &mut R, dim: usize, outcomes: usize) -> Result<Povm> {
    let gs: Vec<Matrix> = (0..outcomes)
        .map(|_| random_density(rng, dim, dim).matrix().clone())
        .collect();
    let mut s = Matrix::zeros(dim);
    for g in &gs {
        s += g;
    }
    let eig = hermitian_eig(&s)?;
    let inv_sqrt = eig.map_spectrum(|l| 1.0 / l.sqrt());
    let effects = gs
        .iter()
        .map(|g| (&(&inv_sqrt * g) * &inv_sqrt).hermitian_part())
        .collect();
    Povm::new(effects)
}

/// Seeded [`random_density`]; `rank = None` means full rank.
pub fn sample_density(seed: u64, dim: usize, rank: Option<usize>) -> Result<DensityMatrix> {
    let rank = rank.unwrap_or(dim);
    if dim == 0 || rank == 0 || rank > dim {
        return Err(Error::InvalidArgument(format!("need 1 <= rank <= dim, got rank {rank}, dim {dim}")));
    }
    let mut rng = keyed(seed, Stream::Sampler, dim as u64, rank as u64);
    Ok(random_density(&mut rng, dim, rank))
}

pub fn sample_unitary(seed: u64, dim: usize) -> Result<Matrix> {
    if dim == 0 {
        return Err(Error::InvalidArgument("dimension must be at least 1".into()));
    }
    let mut rng = keyed(seed, Stream::Sampler, dim as u64, u64::MAX);
    Ok(random_unitary(&mut rng, dim))
}

pub fn sample_pvm(seed: u64, dim: usize, groups: Option<&[usize]>) -> Result<Pvm> {
    if dim == 0 {
        return Err(Error::InvalidArgument("dimension must be at least 1".into()));
    }
    let mut rng = keyed(seed, Stream::Sampler, dim as u64, u64::MAX - 1);
    random_pvm(&mut rng, dim, groups)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::{logical_entropy, purity};

    #[test]
    fn rank_one_is_pure() {
        for seed in 0..20 {
            let r = sample_density(seed, 4, Some(1)).unwrap();
            assert!(logical_entropy(&r).abs() < 1e-9);
        }
    }

    #[test]
    fn samples_are_valid_states() {
        for seed in 0..20 {
            for d in 1..6 {
                let r = sample_density(seed, d, None).unwrap();
                let checked = DensityMatrix::new(r.matrix().clone()).unwrap();
                assert!(checked.matrix().max_abs_diff(r.matrix()) < 1e-12);
            }
        }
    }

    #[test]
    fn samples_are_deterministic() {
        let a = sample_density(42, 2, None).unwrap();
        let b = sample_density(42, 2, None).unwrap();
        assert_eq!(a, b);
        assert_eq!(sample_unitary(5, 3).unwrap(), sample_unitary(5, 3).unwrap());
        assert_ne!(sample_density(43, 2, None).unwrap(), a);
    }

    #[test]
    fn unitaries() {
        let u = sample_unitary(1, 1).unwrap();
        assert!((u[(0, 0)].norm() - 1.0).abs() < 1e-12);
        for seed in 0..50 {
            for d in 1..9 {
                assert!(sample_unitary(seed, d).unwrap().unitarity_defect() <= 1e-9);
            }
        }
    }

    #[test]
    fn pvms() {
        let p = sample_pvm(3, 4, Some(&[2, 2])).unwrap();
        assert_eq!(p.len(), 2);
        assert!(!p.is_non_degenerate());
        for b in p.blocks() {
            assert!((b.trace().re - 2.0).abs() < 1e-9);
        }
        let p = sample_pvm(3, 3, None).unwrap();
        assert_eq!(p.len(), 3);
        assert!(p.is_non_degenerate());
        assert!(sample_pvm(3, 3, Some(&[2, 2])).is_err());
    }

    #[test]
    fn povm_samples_are_valid() {
        let mut rng = keyed(9, Stream::Sampler, 0, 0);
        for _ in 0..20 {
            let p = random_povm(&mut rng, 3, 3).unwrap();
            assert_eq!(p.effects().len(), 3);
        }
    }

    #[test]
    fn compositions_and_weights() {
        let mut rng = keyed(1, Stream::Sampler, 0, 0);
        for _ in 0..100 {
            let c = random_composition(&mut rng, 5, 3);
            assert_eq!(c.len(), 3);
            assert_eq!(c.iter().sum::<usize>(), 5);
            assert!(c.iter().all(|&x| x > 0));
            let w = random_weights(&mut rng, 4);
            assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        }
    }

    /// Mean purity of Hilbert–Schmidt qubit states: 10⁴ samples against a
    /// 10⁶-sample bootstrap reference.
    #[test]
    fn hilbert_schmidt_mean_purity() {
        let mean = |n: u64, stream_seed: u64| -> (f64, f64) {
            let mut rng = keyed(stream_seed, Stream::Sampler, 2, 2);
            let xs: Vec<f64> = (0..n).map(|_| purity(&random_density(&mut rng, 2, 2))).collect();
            let m = xs.iter().sum::<f64>() / n as f64;
            let var = xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1) as f64;
            (m, var)
        };
        let (reference, _) = mean(1_000_000, 777);
        let (m, var) = mean(10_000, 11);
        let sigma = (var / 10_000.0).sqrt();
        assert!((m - reference).abs() <= 3.0 * sigma, "{m} vs {reference} ± {sigma}");
    }
}
