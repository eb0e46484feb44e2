use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::dataio::SparseDataset;
use crate::error::{Error, Result};
use crate::linalg::{norm, norm_sq};

/// Largest singular value of `A` by power iteration on `A^T A`.
///
/// Stops once the Rayleigh quotient changes by less than `tol` relative to
/// its value. The start vector is drawn from `seed`, so the result is
/// deterministic.
pub fn estimate_sigma_max(
    data: &SparseDataset,
    tol: f64,
    max_iters: usize,
    seed: u64,
) -> Result<f64> {
    if data.rows() == 0 || data.cols() == 0 {
        return Err(Error::invalid("empty dataset"));
    }
    if !(tol > 0.0) {
        return Err(Error::invalid("tolerance must be positive"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut q: Vec<f64> = (0..data.cols()).map(|_| StandardNormal.sample(&mut rng)).collect();
    let mut prev = 0.0f64;
    for _ in 0..max_iters {
        let nq = norm(&q);
        if nq == 0.0 {
            return Ok(0.0);
        }
        q.iter_mut().for_each(|v| *v /= nq);
        let aq = data.matvec(&q);
        let rayleigh = norm_sq(&aq);
        if rayleigh == 0.0 {
            return Ok(0.0);
        }
        if (rayleigh - prev).abs() <= tol * rayleigh {
            return Ok(rayleigh.sqrt());
        }
        prev = rayleigh;
        q = data.rmatvec(&aq);
    }
    Err(Error::NoConvergence { iterations: max_iters, last_estimate: prev.sqrt() })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_and_rank_one() {
        let d = SparseDataset::from_dense(&[vec![3.0, 0.0], vec![0.0, 1.0]], vec![1.0, -1.0]).unwrap();
        let s = estimate_sigma_max(&d, 1e-12, 10_000, 0).unwrap();
        assert!((s - 3.0).abs() < 1e-9, "{s}");

        let d = SparseDataset::from_dense(&[vec![1.0, 1.0], vec![1.0, 1.0]], vec![1.0, -1.0]).unwrap();
        let s = estimate_sigma_max(&d, 1e-12, 10_000, 0).unwrap();
        assert!((s - 2.0).abs() < 1e-9, "{s}");
    }

    #[test]
    fn reports_non_convergence() {
        let d = SparseDataset::from_dense(&[vec![1.0, 0.0], vec![0.0, 0.999]], vec![1.0, -1.0]).unwrap();
        match estimate_sigma_max(&d, 1e-15, 2, 1) {
            Err(Error::NoConvergence { iterations: 2, last_estimate }) => assert!(last_estimate > 0.0),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn deterministic_under_seed() {
        let d = SparseDataset::from_dense(&[vec![1.0, 2.0], vec![0.5, -1.0], vec![0.1, 0.3]], vec![1.0; 3])
            .unwrap();
        let a = estimate_sigma_max(&d, 1e-6, 1000, 7).unwrap();
        let b = estimate_sigma_max(&d, 1e-6, 1000, 7).unwrap();
        assert_eq!(a.to_bits(), b.to_bits());
    }
}
