#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sqrtx::random::{random_direction, random_spd};
use sqrtx::{SpdMatrix, SymMatrix};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random SPD `A` with spectrum in [0.1, 10] and `H` with `||H||_2 = rho λ_min(A)`.
pub fn instance(rng: &mut ChaCha8Rng, dim: usize, rho: f64) -> (SpdMatrix, SymMatrix) {
    let a = random_spd(rng, dim, 0.1, 10.0);
    let h = random_direction(rng, a.lambda_min(), dim, rho);
    (a, h)
}

pub fn random_dim(rng: &mut ChaCha8Rng, max: usize) -> usize {
    rng.random_range(1..=max)
}

pub fn rel(a: &SymMatrix, b: &SymMatrix) -> f64 {
    (a - b).frobenius() / b.frobenius().max(f64::MIN_POSITIVE)
}

/// Least-squares slope of `log y` against `log x`.
pub fn log_log_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

/// Five relative steps `δ = ε ||H||_2 / λ_min`, log-spaced over
/// [10^-1.5, 10^-0.5]. Smaller steps hit the roundoff floor for third
/// differences when the derivative happens to be small.
pub fn fd_relative_steps() -> Vec<f64> {
    (0..5).map(|j| 10f64.powf(-1.5 + j as f64 / 4.0)).collect()
}
