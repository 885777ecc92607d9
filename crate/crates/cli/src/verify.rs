//! Randomized verification run: remainder-bound domination, three-way
//! first-derivative agreement, scalar saturation of the derivative bound and
//! the Ando-Hemmen inequality, on seeded random instances.
//!
//! Each case draws from its own ChaCha stream (`seed`, stream = case index),
//! so a case's outcome does not depend on the ones before it.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sqrtx::oracles::{lyapunov_quadrature, resolvent_frechet};
use sqrtx::random::{log_uniform, random_direction, random_spd};
use sqrtx::taylor::{json_f64, sqrt_distance};
use sqrtx::{
    ando_hemmen_bound, assert_spd, derivative_norm_bound, derivative_stack, frechet_first, report,
    NormKind, QuadratureSpec, SymMatrix, BOUND_SLACK,
};

/// Relative tolerance for pairwise first-derivative agreement.
pub const ORACLE_TOLERANCE: f64 = 1e-6;
/// Relative tolerance for scalar bound saturation.
pub const SATURATION_TOLERANCE: f64 = 1e-12;
/// Relative Sylvester residual tolerance.
pub const RESIDUAL_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub cases: usize,
    pub dim_max: usize,
    /// `||H||_2 / λ_min(A)`, in `[0, 1)`.
    pub rho: f64,
    pub seed: u64,
    /// Largest Taylor order checked (orders `0..=max_order`).
    pub max_order: usize,
    pub lambda_lo: f64,
    pub lambda_hi: f64,
    /// Multiplies every bound before comparison. `1` in normal runs; values
    /// below one exist to exercise the failure path.
    pub bound_scale: f64,
    pub lyapunov: QuadratureSpec,
    pub resolvent: QuadratureSpec,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            cases: 200,
            dim_max: 10,
            rho: 0.3,
            seed: 42,
            max_order: 6,
            lambda_lo: 0.1,
            lambda_hi: 10.0,
            bound_scale: 1.0,
            lyapunov: QuadratureSpec::LYAPUNOV,
            resolvent: QuadratureSpec::RESOLVENT,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), String> {
        if self.dim_max == 0 {
            return Err("dim-max must be at least 1".into());
        }
        if !(0.0..1.0).contains(&self.rho) {
            return Err(format!("rho must lie in [0, 1), got {}", self.rho));
        }
        if !(self.lambda_lo > 0.0 && self.lambda_hi >= self.lambda_lo) {
            return Err("need 0 < lambda-lo <= lambda-hi".into());
        }
        if self.max_order > sqrtx::MAX_ORDER - 1 {
            return Err(format!("max-order must be at most {}", sqrtx::MAX_ORDER - 1));
        }
        if self.bound_scale.is_nan() || self.bound_scale <= 0.0 {
            return Err("bound-scale must be positive".into());
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifySummary {
    pub cases: usize,
    pub failures: usize,
    pub max_bound_ratio: f64,
    pub max_oracle_disagreement: f64,
    pub seed: u64,
}

impl VerifySummary {
    pub fn to_json(&self) -> String {
        format!(
            "{{\"cases\": {}, \"failures\": {}, \"max_bound_ratio\": {}, \"max_oracle_disagreement\": {}, \"seed\": {}}}",
            self.cases,
            self.failures,
            json_f64(self.max_bound_ratio),
            json_f64(self.max_oracle_disagreement),
            self.seed
        )
    }
}

/// Outcome of one random case.
#[derive(Debug, Clone, PartialEq)]
pub struct CaseResult {
    pub index: usize,
    pub dim: usize,
    pub failed_checks: Vec<&'static str>,
    pub max_bound_ratio: f64,
    pub oracle_disagreement: f64,
}

fn relative(a: &SymMatrix, b: &SymMatrix) -> f64 {
    let scale = a.frobenius().max(b.frobenius());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).frobenius() / scale
    }
}

pub fn run_case(config: &RunConfig, index: usize) -> sqrtx::Result<CaseResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    rng.set_stream(index as u64);

    let dim = rng.random_range(1..=config.dim_max);
    let a = random_spd(&mut rng, dim, config.lambda_lo, config.lambda_hi);
    let h = random_direction(&mut rng, a.lambda_min(), dim, config.rho);
    let slack = 1.0 + BOUND_SLACK;
    let mut failed = Vec::new();

    // remainder bound domination
    let mut max_ratio = 0.0_f64;
    for n in 0..=config.max_order {
        for kind in [NormKind::Spectral, NormKind::Frobenius] {
            let rep = report(a.as_sym(), &h, n, kind)?;
            match (rep.actual_error, rep.remainder_bound) {
                (Some(err), Some(bound)) => {
                    let bound = bound * config.bound_scale;
                    if bound > 0.0 {
                        max_ratio = max_ratio.max(err / bound);
                    }
                    if err > bound * slack {
                        failed.push("remainder_bound");
                    }
                    if rep.sylvester_residual.unwrap_or(0.0) > RESIDUAL_TOLERANCE {
                        failed.push("sylvester_residual");
                    }
                }
                _ => failed.push("gate"),
            }
        }
    }

    // three routes to the first derivative
    let sylvester = frechet_first(&a, &h)?;
    let lyapunov = lyapunov_quadrature(&a, &h, config.lyapunov)?;
    let resolvent = resolvent_frechet(&a, &h, config.resolvent)?;
    let disagreement = relative(&sylvester, &lyapunov)
        .max(relative(&sylvester, &resolvent))
        .max(relative(&lyapunov, &resolvent));
    if disagreement > ORACLE_TOLERANCE {
        failed.push("oracle_agreement");
    }

    // the derivative bound is attained by scalars
    let scalar_a = log_uniform(&mut rng, config.lambda_lo, config.lambda_hi);
    let scalar_h = if rng.random::<bool>() { 1.0 } else { -1.0 } * rng.random_range(0.1..1.0);
    let stack = derivative_stack(
        &assert_spd(&SymMatrix::scalar(scalar_a))?,
        &SymMatrix::scalar(scalar_h),
        config.max_order + 1,
    )?;
    for n in 0..=config.max_order {
        let actual =
            stack.derivative(n + 1).get(0, 0).abs() / scalar_h.abs().powi(n as i32 + 1);
        let bound = derivative_norm_bound(n, scalar_a, 1.0) * config.bound_scale;
        if (actual - bound).abs() > SATURATION_TOLERANCE * bound {
            failed.push("scalar_saturation");
            break;
        }
    }

    // Lipschitz bound between the endpoints
    let b = assert_spd(&(a.as_sym() + &h))?;
    for kind in [NormKind::Spectral, NormKind::Frobenius] {
        let actual = sqrt_distance(&a, &b, kind)?;
        let bound = ando_hemmen_bound(&a, &b, kind)? * config.bound_scale;
        if actual > bound * slack {
            failed.push("ando_hemmen");
        }
    }

    failed.dedup();
    Ok(CaseResult {
        index,
        dim,
        failed_checks: failed,
        max_bound_ratio: max_ratio,
        oracle_disagreement: disagreement,
    })
}

/// Runs every case in index order and aggregates.
pub fn run(config: &RunConfig) -> sqrtx::Result<VerifySummary> {
    let mut summary = VerifySummary {
        cases: config.cases,
        failures: 0,
        max_bound_ratio: 0.0,
        max_oracle_disagreement: 0.0,
        seed: config.seed,
    };
    for index in 0..config.cases {
        let case = run_case(config, index)?;
        if !case.failed_checks.is_empty() {
            summary.failures += 1;
        }
        summary.max_bound_ratio = summary.max_bound_ratio.max(case.max_bound_ratio);
        summary.max_oracle_disagreement =
            summary.max_oracle_disagreement.max(case.oracle_disagreement);
    }
    Ok(summary)
}
