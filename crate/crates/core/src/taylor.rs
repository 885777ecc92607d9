//! Taylor partial sums of `φ(A + H)` with a-priori remainder bounds.
//!
//! For SPD `A` and `A + H`, the order-`n` remainder of the expansion of the
//! matrix square root around `A` satisfies
//!
//! ```text
//! ||φ(A+H) - φ(A) - Σ_{k<=n} s_k||  <=  K^n (n+1) C_n 2^{-2n} λ_min(A)^{-(n+1/2)} ||H||^{n+1}
//! ```
//!
//! with `K = 1` for the spectral norm and `K = sqrt(r)` for Frobenius.

use std::fmt;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::frechet::{catalan, derivative_stack, principal_sqrt, MAX_ORDER};
use crate::linalg::{assert_spd, eig_sym, NormKind, SpdMatrix, SymMatrix};

/// Multiplicative slack for bound comparisons; scalar cases hit equality.
pub const BOUND_SLACK: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GateVerdict {
    /// Both `A` and `A + H` pass [`assert_spd`]; the whole segment is SPD.
    Strict,
    /// Only the sufficient condition `||H||_2 < λ_min(A)` holds.
    Weyl,
    Failed,
}

impl GateVerdict {
    pub fn as_str(self) -> &'static str {
        match self {
            GateVerdict::Strict => "strict",
            GateVerdict::Weyl => "weyl",
            GateVerdict::Failed => "failed",
        }
    }
}

impl fmt::Display for GateVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Outcome of checking that the segment `A + εH`, `ε ∈ [0, 1]`, stays SPD.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PerturbationGate {
    pub lambda_min_a: f64,
    pub lambda_min_b: f64,
    pub spectral_norm_h: f64,
    pub verdict: GateVerdict,
}

impl PerturbationGate {
    pub fn is_strict(&self) -> bool {
        self.verdict == GateVerdict::Strict
    }
}

pub fn gate(a: &SymMatrix, h: &SymMatrix) -> Result<PerturbationGate> {
    a.check_dim(h)?;
    let lambda_min_a = eig_sym(a)?.eigenvalues[0];
    let b = a + h;
    let lambda_min_b = eig_sym(&b)?.eigenvalues[0];
    let spectral_norm_h = h.spectral();

    let verdict = if assert_spd(a).is_ok() && assert_spd(&b).is_ok() {
        GateVerdict::Strict
    } else if lambda_min_a > 0.0 && spectral_norm_h < lambda_min_a {
        GateVerdict::Weyl
    } else {
        GateVerdict::Failed
    };
    Ok(PerturbationGate {
        lambda_min_a,
        lambda_min_b,
        spectral_norm_h,
        verdict,
    })
}

fn require_not_failed(a: &SpdMatrix, h: &SymMatrix) -> Result<PerturbationGate> {
    let g = gate(a.as_sym(), h)?;
    if g.verdict == GateVerdict::Failed {
        return Err(Error::GateFailed { verdict: g.verdict });
    }
    Ok(g)
}

/// `φ(A) + Σ_{1<=k<=n} s_k`; `n = 0` gives `φ(A)`.
pub fn taylor_sum(a: &SpdMatrix, h: &SymMatrix, n: usize) -> Result<SymMatrix> {
    require_not_failed(a, h)?;
    if n == 0 {
        return Ok(principal_sqrt(a).into_sym());
    }
    Ok(derivative_stack(a, h, n)?.partial_sum(n))
}

/// The remainder bound as a plain formula, given `λ_min(A)`, `K` and `||H||`.
pub fn remainder_bound_value(n: usize, lambda_min: f64, norm_const: f64, norm_h: f64) -> f64 {
    let c = catalan(n).expect("order within table") as f64;
    norm_const.powi(n as i32) * (n as f64 + 1.0) * c * 0.25f64.powi(n as i32)
        * lambda_min.powf(-(n as f64 + 0.5))
        * norm_h.powi(n as i32 + 1)
}

/// A-priori bound on the order-`n` Taylor remainder in the given norm.
pub fn remainder_bound(a: &SpdMatrix, h: &SymMatrix, n: usize, kind: NormKind) -> Result<f64> {
    if n > MAX_ORDER {
        return Err(Error::OrderTooLarge {
            order: n,
            max: MAX_ORDER,
        });
    }
    require_not_failed(a, h)?;
    Ok(remainder_bound_value(
        n,
        a.lambda_min(),
        kind.constant(a.dim()),
        h.norm(kind),
    ))
}

/// Lipschitz bound `||A - B|| / (λ_min(A)^{1/2} + λ_min(B)^{1/2})` on
/// `||φ(A) - φ(B)||`.
pub fn ando_hemmen_bound(a: &SpdMatrix, b: &SpdMatrix, kind: NormKind) -> Result<f64> {
    a.as_sym().check_dim(b.as_sym())?;
    let diff = a.as_sym() - b.as_sym();
    Ok(diff.norm(kind) / (a.lambda_min().sqrt() + b.lambda_min().sqrt()))
}

/// `||φ(A) - φ(B)||`, the quantity [`ando_hemmen_bound`] controls.
pub fn sqrt_distance(a: &SpdMatrix, b: &SpdMatrix, kind: NormKind) -> Result<f64> {
    a.as_sym().check_dim(b.as_sym())?;
    let diff = principal_sqrt(a).into_sym() - principal_sqrt(b).into_sym();
    Ok(diff.norm(kind))
}

/// Comparison of a Taylor partial sum against the directly computed root.
///
/// When the gate is not strict the approximation-related fields are `None`.
#[derive(Debug, Clone)]
pub struct TaylorReport {
    pub dim: usize,
    pub order: usize,
    pub norm_kind: NormKind,
    pub gate: PerturbationGate,
    pub lambda_min_a: f64,
    pub norm_h: f64,
    pub approx: Option<SymMatrix>,
    pub truth: Option<SymMatrix>,
    pub actual_error: Option<f64>,
    pub remainder_bound: Option<f64>,
    pub bound_satisfied: Option<bool>,
    pub ando_hemmen_bound: Option<f64>,
    pub sylvester_residual: Option<f64>,
}

impl TaylorReport {
    /// `actual_error / remainder_bound`, or `0` for a zero bound with zero error.
    pub fn bound_ratio(&self) -> Option<f64> {
        match (self.actual_error, self.remainder_bound) {
            (Some(e), Some(b)) if b > 0.0 => Some(e / b),
            (Some(e), Some(_)) => Some(if e == 0.0 { 0.0 } else { f64::INFINITY }),
            _ => None,
        }
    }

    /// One JSON object, numbers at 17 significant digits, fixed key order.
    pub fn to_json(&self) -> String {
        let mut out = String::from("{");
        let mut first = true;
        let mut field = |key: &str, value: String| {
            if !first {
                out.push_str(", ");
            }
            first = false;
            let _ = write!(out, "\"{key}\": {value}");
        };
        field("dim", self.dim.to_string());
        field("order", self.order.to_string());
        field("norm", json_str(self.norm_kind.as_str()));
        field("lambda_min_A", json_f64(self.lambda_min_a));
        field("norm_H", json_f64(self.norm_h));
        field("actual_error", json_opt(self.actual_error));
        field("remainder_bound", json_opt(self.remainder_bound));
        field(
            "bound_satisfied",
            self.bound_satisfied
                .map_or_else(|| "null".to_string(), |b| b.to_string()),
        );
        field("gate", json_str(self.gate.verdict.as_str()));
        field("ando_hemmen_bound", json_opt(self.ando_hemmen_bound));
        field("sylvester_residual", json_opt(self.sylvester_residual));
        out.push('}');
        out
    }
}

/// A finite float at 17 significant digits; non-finite values become `null`.
pub fn json_f64(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        "null".to_string()
    }
}

fn json_opt(x: Option<f64>) -> String {
    x.map_or_else(|| "null".to_string(), json_f64)
}

fn json_str(s: &str) -> String {
    format!("\"{s}\"")
}

/// Builds a [`TaylorReport`] for `φ(A + H)` at order `n`.
///
/// Only dimension mismatches, eigensolver failures and `n > 30` are errors;
/// a non-SPD endpoint is recorded in the gate verdict.
pub fn report(a: &SymMatrix, h: &SymMatrix, n: usize, kind: NormKind) -> Result<TaylorReport> {
    if n > MAX_ORDER {
        return Err(Error::OrderTooLarge {
            order: n,
            max: MAX_ORDER,
        });
    }
    let g = gate(a, h)?;
    let mut rep = TaylorReport {
        dim: a.dim(),
        order: n,
        norm_kind: kind,
        gate: g,
        lambda_min_a: g.lambda_min_a,
        norm_h: h.norm(kind),
        approx: None,
        truth: None,
        actual_error: None,
        remainder_bound: None,
        bound_satisfied: None,
        ando_hemmen_bound: None,
        sylvester_residual: None,
    };
    if !g.is_strict() {
        return Ok(rep);
    }

    let a_spd = assert_spd(a)?;
    let b_spd = assert_spd(&(a + h))?;
    // order 1 is needed for the residual even when n = 0
    let stack = derivative_stack(&a_spd, h, n.max(1))?;
    let approx = stack.partial_sum(n);
    let truth = principal_sqrt(&b_spd).into_sym();
    let actual_error = (&truth - &approx).norm(kind);
    let bound = remainder_bound_value(n, a_spd.lambda_min(), kind.constant(a.dim()), rep.norm_h);

    rep.actual_error = Some(actual_error);
    rep.remainder_bound = Some(bound);
    rep.bound_satisfied = Some(actual_error <= bound * (1.0 + BOUND_SLACK));
    rep.ando_hemmen_bound = Some(ando_hemmen_bound(&a_spd, &b_spd, kind)?);
    rep.sylvester_residual = Some(stack.first_order_residual());
    rep.approx = Some(approx);
    rep.truth = Some(truth);
    Ok(rep)
}
