//! Principal square root and its Fréchet derivatives of every order.
//!
//! The first derivative `X = Dφ(A)·H` is the unique symmetric solution of
//! `φ(A) X + X φ(A) = H`. Higher derivatives along a single direction come
//! from a quadratic recursion in which each new term costs one more solve of
//! that same equation. Terms are stored scaled by `1/k!`, which turns the
//! recursion coefficient-free:
//!
//! ```text
//! s_1 = L(H)
//! s_n = -L( Σ_{p+q=n-2} s_{p+1} s_{q+1} ),   L(M) = solution of φ(A) X + X φ(A) = M
//! ```
//!
//! so `s_k` is exactly the `k`-th Taylor coefficient of `ε ↦ φ(A + εH)`.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::linalg::{EigenDecomposition, SpdMatrix, SymMatrix};

/// Largest supported derivative order; `C_30` still fits in an `i64`.
pub const MAX_ORDER: usize = 30;

/// `φ(A) = U diag(sqrt(d)) U^T`.
pub fn principal_sqrt(a: &SpdMatrix) -> SpdMatrix {
    let eig = a.eigen();
    let root = EigenDecomposition {
        basis: eig.basis.clone(),
        eigenvalues: eig.eigenvalues.iter().map(|d| d.sqrt()).collect(),
    };
    let s = root.apply(|d| d);
    SpdMatrix::from_parts(s, root)
}

/// Solves `S X + X S = H` for SPD `S`.
///
/// In the eigenbasis of `S` the equation decouples entrywise:
/// `X_ij = G_ij / (d_i + d_j)` with `G = U^T H U`. All divisors are positive,
/// so repeated eigenvalues need no special treatment.
pub fn sylvester_sqrt_solve(s: &SpdMatrix, h: &SymMatrix) -> Result<SymMatrix> {
    s.as_sym().check_dim(h)?;
    let eig = s.eigen();
    let d = &eig.eigenvalues;
    let mut g = eig.to_eigenbasis(h);
    let n = g.nrows();
    for i in 0..n {
        for j in 0..n {
            g[(i, j)] /= d[i] + d[j];
        }
    }
    Ok(eig.from_eigenbasis(&g))
}

/// `||S X + X S - H||_F`.
pub fn sylvester_residual(s: &SymMatrix, x: &SymMatrix, h: &SymMatrix) -> f64 {
    let sx = s.as_matrix() * x.as_matrix();
    (&sx + sx.transpose() - h.as_matrix()).norm()
}

/// First Fréchet derivative `Dφ(A)·H`.
pub fn frechet_first(a: &SpdMatrix, h: &SymMatrix) -> Result<SymMatrix> {
    sylvester_sqrt_solve(&principal_sqrt(a), h)
}

/// Scaled directional derivatives `s_k = Dᵏφ(A)·H^{⊗k} / k!`, `k = 1..=n`.
#[derive(Debug, Clone)]
pub struct DerivativeStack {
    base: SpdMatrix,
    sqrt: SpdMatrix,
    direction: SymMatrix,
    terms: Vec<SymMatrix>,
}

impl DerivativeStack {
    pub fn order(&self) -> usize {
        self.terms.len()
    }

    pub fn base(&self) -> &SpdMatrix {
        &self.base
    }

    /// `φ(A)`, computed once for the whole stack.
    pub fn sqrt(&self) -> &SpdMatrix {
        &self.sqrt
    }

    pub fn direction(&self) -> &SymMatrix {
        &self.direction
    }

    /// All scaled terms, `terms()[k - 1] == s_k`.
    pub fn terms(&self) -> &[SymMatrix] {
        &self.terms
    }

    /// `s_k` for `1 <= k <= order`.
    pub fn scaled(&self, k: usize) -> &SymMatrix {
        assert!(k >= 1 && k <= self.order(), "term {k} outside 1..={}", self.order());
        &self.terms[k - 1]
    }

    /// The unscaled derivative `Dᵏφ(A)·H^{⊗k} = k! s_k`.
    pub fn derivative(&self, k: usize) -> SymMatrix {
        self.scaled(k).scale(factorial(k))
    }

    /// `φ(A) + Σ_{k<=n} s_k`.
    pub fn partial_sum(&self, n: usize) -> SymMatrix {
        assert!(n <= self.order());
        self.terms[..n]
            .iter()
            .fold(self.sqrt.as_sym().clone(), |acc, s| acc + s.clone())
    }

    /// Relative residual of `s_1` in its Sylvester equation,
    /// `||φ(A) s_1 + s_1 φ(A) - H||_F / ||H||_F` (zero when `H = 0`).
    pub fn first_order_residual(&self) -> f64 {
        let h_norm = self.direction.frobenius();
        let res = sylvester_residual(self.sqrt.as_sym(), &self.terms[0], &self.direction);
        if h_norm == 0.0 {
            res
        } else {
            res / h_norm
        }
    }
}

/// Runs the scaled derivative recursion up to order `n`.
pub fn derivative_stack(a: &SpdMatrix, h: &SymMatrix, n: usize) -> Result<DerivativeStack> {
    if n == 0 {
        return Err(Error::ZeroOrder);
    }
    if n > MAX_ORDER {
        return Err(Error::OrderTooLarge {
            order: n,
            max: MAX_ORDER,
        });
    }
    a.as_sym().check_dim(h)?;
    let sqrt = principal_sqrt(a);
    let mut terms: Vec<SymMatrix> = Vec::with_capacity(n);
    terms.push(sylvester_sqrt_solve(&sqrt, h)?);

    let dim = a.dim();
    for m in 2..=n {
        let mut bracket = DMatrix::<f64>::zeros(dim, dim);
        for p in 0..=(m - 2) {
            let q = m - 2 - p;
            bracket += terms[p].as_matrix() * terms[q].as_matrix();
        }
        let bracket = SymMatrix::project(bracket);
        terms.push(-sylvester_sqrt_solve(&sqrt, &bracket)?);
    }

    Ok(DerivativeStack {
        base: a.clone(),
        sqrt,
        direction: h.clone(),
        terms,
    })
}

/// `D²φ(A)·(H1, H2)` by polarization of the diagonal
/// `D²φ(A)·(H, H) = -2 L((L H)²)`.
pub fn frechet_second_bidirectional(
    a: &SpdMatrix,
    h1: &SymMatrix,
    h2: &SymMatrix,
) -> Result<SymMatrix> {
    a.as_sym().check_dim(h1)?;
    a.as_sym().check_dim(h2)?;
    let sqrt = principal_sqrt(a);
    let diagonal = |h: &SymMatrix| -> Result<SymMatrix> {
        let first = sylvester_sqrt_solve(&sqrt, h)?;
        Ok(sylvester_sqrt_solve(&sqrt, &first.square())?.scale(-2.0))
    };
    let plus = diagonal(&(h1 + h2))?;
    let minus = diagonal(&(h1 - h2))?;
    Ok((plus - minus).scale(0.25))
}

/// Catalan numbers `C_0..=C_n`, built from `C_{k+1} = Σ_{p+q=k} C_p C_q`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CatalanTable {
    values: Vec<u64>,
}

impl CatalanTable {
    pub fn new(n: usize) -> Result<Self> {
        if n > MAX_ORDER {
            return Err(Error::OrderTooLarge {
                order: n,
                max: MAX_ORDER,
            });
        }
        let mut values = vec![1u64];
        for k in 0..n {
            let next = (0..=k).map(|p| values[p] * values[k - p]).sum();
            values.push(next);
        }
        Ok(CatalanTable { values })
    }

    pub fn get(&self, n: usize) -> u64 {
        self.values[n]
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }
}

/// `C_n` via the convolution recursion.
pub fn catalan(n: usize) -> Result<u64> {
    Ok(CatalanTable::new(n)?.get(n))
}

/// `C_n = binom(2n, n) / (n + 1)`.
pub fn catalan_closed_form(n: usize) -> Result<u64> {
    if n > MAX_ORDER {
        return Err(Error::OrderTooLarge {
            order: n,
            max: MAX_ORDER,
        });
    }
    // binom(n + i, i) stays integral at every step
    let mut binom: u128 = 1;
    for i in 1..=n as u128 {
        binom = binom * (n as u128 + i) / i;
    }
    Ok((binom / (n as u128 + 1)) as u64)
}

pub(crate) fn factorial(k: usize) -> f64 {
    (1..=k).fold(1.0, |acc, i| acc * i as f64)
}

/// Operator-norm bound on the `(n+1)`-th derivative:
/// `K^n (n+1)! C_n 2^{-(2n+1)} λ_min^{-(n+1/2)}`.
///
/// Attained with equality for `1 x 1` matrices with `K = 1`.
pub fn derivative_norm_bound(n: usize, lambda_min: f64, k: f64) -> f64 {
    let c = catalan(n).expect("order within table") as f64;
    k.powi(n as i32) * factorial(n + 1) * c * 0.5f64.powi(2 * n as i32 + 1)
        / lambda_min.powf(n as f64 + 0.5)
}

/// Bound on `||s_k||` implied by [`derivative_norm_bound`]:
/// `K^{k-1} C_{k-1} 2^{-(2k-1)} λ_min^{-(k-1/2)} ||H||^k`.
pub fn scaled_term_bound(k: usize, lambda_min: f64, norm_const: f64, norm_h: f64) -> f64 {
    assert!(k >= 1);
    derivative_norm_bound(k - 1, lambda_min, norm_const) / factorial(k) * norm_h.powi(k as i32)
}
