//! Seeded generators for SPD matrices with a prescribed spectrum and for
//! perturbation directions of a prescribed size.

use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::linalg::{SpdMatrix, SymMatrix};

/// Square matrix with i.i.d. standard normal entries.
pub fn gaussian_matrix<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> DMatrix<f64> {
    DMatrix::from_fn(dim, dim, |_, _| rng.sample(StandardNormal))
}

/// Haar-distributed orthogonal matrix: `Q` from the QR factorization of a
/// Gaussian matrix, with column signs fixed by `sign(R_ii)`.
pub fn random_orthogonal<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> DMatrix<f64> {
    let qr = gaussian_matrix(rng, dim).qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..dim {
        if r[(j, j)] < 0.0 {
            q.column_mut(j).neg_mut();
        }
    }
    q
}

/// `log-uniform` sample in `[lo, hi]`.
pub fn log_uniform<R: Rng + ?Sized>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    assert!(lo > 0.0 && hi >= lo);
    if hi == lo {
        return lo;
    }
    (rng.random_range(lo.ln()..=hi.ln())).exp()
}

/// `Q diag(d) Q^T` for a random orthogonal `Q`.
pub fn with_spectrum<R: Rng + ?Sized>(rng: &mut R, eigenvalues: &[f64]) -> SymMatrix {
    let q = random_orthogonal(rng, eigenvalues.len());
    let mut scaled = q.clone();
    for (j, d) in eigenvalues.iter().enumerate() {
        scaled.column_mut(j).scale_mut(*d);
    }
    SymMatrix::project(&scaled * q.transpose())
}

/// Random SPD matrix whose eigenvalues are drawn log-uniformly from
/// `[lambda_lo, lambda_hi]`.
pub fn random_spd<R: Rng + ?Sized>(
    rng: &mut R,
    dim: usize,
    lambda_lo: f64,
    lambda_hi: f64,
) -> SpdMatrix {
    let eigenvalues: Vec<f64> = (0..dim)
        .map(|_| log_uniform(rng, lambda_lo, lambda_hi))
        .collect();
    let m = with_spectrum(rng, &eigenvalues);
    // the spectrum is bounded away from zero by construction
    SpdMatrix::new(m).expect("generated matrix is SPD")
}

/// Symmetric `(G + G^T)` with standard normal `G`, unnormalized.
pub fn random_symmetric<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> SymMatrix {
    let g = gaussian_matrix(rng, dim);
    SymMatrix::project(&g + g.transpose())
}

/// `H = rho λ_min (G + G^T) / ||G + G^T||_2`, so that `||H||_2 = rho λ_min`.
pub fn random_direction<R: Rng + ?Sized>(rng: &mut R, lambda_min: f64, dim: usize, rho: f64) -> SymMatrix {
    let g = random_symmetric(rng, dim);
    let norm = g.spectral();
    if norm == 0.0 {
        return SymMatrix::zeros(dim);
    }
    g.scale(rho * lambda_min / norm)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn orthogonal_is_orthogonal() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in [1, 3, 10] {
            let q = random_orthogonal(&mut rng, n);
            let defect = (q.transpose() * &q - DMatrix::<f64>::identity(n, n)).norm();
            assert!(defect < 1e-13);
        }
    }

    #[test]
    fn spectrum_is_respected() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let a = random_spd(&mut rng, 6, 0.5, 2.0);
        assert!(a.lambda_min() >= 0.5 - 1e-12);
        assert!(a.lambda_max() <= 2.0 + 1e-12);

        let m = with_spectrum(&mut rng, &[1.0, 2.0, 3.0]);
        let eig = crate::linalg::eig_sym(&m).unwrap();
        assert_relative_eq!(eig.eigenvalues[0], 1.0, max_relative = 1e-13);
        assert_relative_eq!(eig.eigenvalues[2], 3.0, max_relative = 1e-13);
    }

    #[test]
    fn direction_has_requested_size() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let h = random_direction(&mut rng, 2.0, 5, 0.3);
        assert_relative_eq!(h.spectral(), 0.6, max_relative = 1e-12);
    }

    #[test]
    fn seeded_generation_is_reproducible() {
        let a = random_spd(&mut ChaCha8Rng::seed_from_u64(42), 4, 0.1, 10.0);
        let b = random_spd(&mut ChaCha8Rng::seed_from_u64(42), 4, 0.1, 10.0);
        assert_eq!(a, b);
    }
}
