//! Seeded random objects: Gaussian vectors, Haar states and unitaries, simplex points.
//!
//! Every stream is a ChaCha8 generator. Independent trials draw from
//! `trial_rng(seed, t)`, which selects ChaCha stream `t` under key `seed`, so a
//! trial's draws do not depend on how trials are scheduled.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::matrixcore::{inner, vector_norm, ComplexMatrix, C64};

pub type StreamRng = ChaCha8Rng;

pub fn seeded_rng(seed: u64) -> StreamRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn trial_rng(seed: u64, trial: u64) -> StreamRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Standard complex Gaussian, `E|z|² = 1`.
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn gaussian_vector<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Vec<C64> {
    (0..dim).map(|_| complex_gaussian(rng)).collect()
}

/// Haar-distributed unit vector.
pub fn haar_vector<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Vec<C64> {
    loop {
        let v = gaussian_vector(dim, rng);
        let norm = vector_norm(&v);
        if norm > 0.0 {
            return v.into_iter().map(|z| z / norm).collect();
        }
    }
}

/// Ginibre matrix with i.i.d. standard complex Gaussian entries.
pub fn ginibre<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ComplexMatrix {
    ComplexMatrix::from_fn(dim, |_, _| complex_gaussian(rng))
}

/// Haar unitary: Gram–Schmidt on Ginibre columns (QR with positive `R` diagonal).
pub fn haar_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ComplexMatrix {
    let g = ginibre(dim, rng);
    let mut cols: Vec<Vec<C64>> = Vec::with_capacity(dim);
    for j in 0..dim {
        let mut v = g.column(j);
        for _ in 0..2 {
            for b in &cols {
                let c = inner(b, &v);
                for (x, y) in v.iter_mut().zip(b) {
                    *x -= c * y;
                }
            }
        }
        let n = vector_norm(&v);
        cols.push(v.into_iter().map(|z| z / n).collect());
    }
    ComplexMatrix::from_fn(dim, |i, j| cols[j][i])
}

/// Uniform point on the probability simplex via sorted uniform spacings.
pub fn simplex_point<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<f64> {
    assert!(n >= 1);
    let mut cuts: Vec<f64> = (0..n - 1).map(|_| rng.random::<f64>()).collect();
    cuts.sort_by(f64::total_cmp);
    let mut out = Vec::with_capacity(n);
    let mut prev = 0.0;
    for c in cuts {
        out.push(c - prev);
        prev = c;
    }
    out.push(1.0 - prev);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let a: Vec<u64> = (0..4).map(|_| trial_rng(9, 3).random()).collect();
        let b: Vec<u64> = (0..4).map(|_| trial_rng(9, 3).random()).collect();
        assert_eq!(a, b);
        let x: u64 = trial_rng(9, 3).random();
        let y: u64 = trial_rng(9, 4).random();
        assert_ne!(x, y);
    }

    #[test]
    fn haar_unitary_is_unitary() {
        let mut rng = seeded_rng(1);
        for dim in 1..6 {
            let u = haar_unitary(dim, &mut rng);
            let r = (&(&u.adjoint() * &u) - &ComplexMatrix::identity(dim)).frobenius_norm();
            assert!(r < 1e-13);
        }
    }

    #[test]
    fn simplex_points_sum_to_one() {
        let mut rng = seeded_rng(2);
        for n in 1..9 {
            let p = simplex_point(n, &mut rng);
            assert_eq!(p.len(), n);
            assert!(p.iter().all(|&x| x >= 0.0));
            assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-15);
        }
    }
}
