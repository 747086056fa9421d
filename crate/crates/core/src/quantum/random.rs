use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use super::operator::{c, CMatrix, DensityMatrix, Operator};

fn ginibre<R: Rng + ?Sized>(dim: usize, cols: usize, rng: &mut R) -> CMatrix {
    CMatrix::from_fn(dim, cols, |_, _| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
}

/// Random mixed state `G G^dag / Tr{G G^dag}` with `G` a `dim x rank` complex Gaussian matrix.
pub fn random_state<R: Rng + ?Sized>(dim: usize, rank: usize, rng: &mut R) -> DensityMatrix {
    let g = ginibre(dim, rank.max(1), rng);
    let m = &g * g.adjoint();
    let tr: f64 = (0..dim).map(|k| m[(k, k)].re).sum();
    DensityMatrix::from_trusted(m * c(1.0 / tr))
}

/// Random Hermitian operator `(G + G^dag) / 2` scaled by `scale`.
pub fn random_hermitian<R: Rng + ?Sized>(dim: usize, scale: f64, rng: &mut R) -> Operator {
    let g = ginibre(dim, dim, rng);
    Operator::hermitian((&g + g.adjoint()) * c(0.5 * scale)).expect("symmetrized by construction")
}

/// Random diagonal Hamiltonian with sorted energies in `[0, spread]`, ground at 0.
pub fn random_levels<R: Rng + ?Sized>(dim: usize, spread: f64, rng: &mut R) -> Operator {
    let mut e: Vec<f64> = (0..dim).map(|k| if k == 0 { 0.0 } else { rng.random::<f64>() * spread }).collect();
    e.sort_by(f64::total_cmp);
    Operator::diagonal(&e)
}
