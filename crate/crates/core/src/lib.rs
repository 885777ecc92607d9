//! Principal square root of symmetric positive-definite matrices, its
//! Fréchet derivatives of any order, and Taylor expansions of `sqrt(A + H)`
//! with a-priori remainder bounds.
//!
//! ```
//! use sqrtx::{assert_spd, derivative_stack, NormKind, SymMatrix};
//!
//! let a = assert_spd(&SymMatrix::from_rows(&[[4.0, 1.0], [1.0, 3.0]])?)?;
//! let h = SymMatrix::from_rows(&[[0.1, 0.0], [0.0, -0.2]])?;
//!
//! let stack = derivative_stack(&a, &h, 4)?;
//! let approx = stack.partial_sum(4);
//! let report = sqrtx::report(a.as_sym(), &h, 4, NormKind::Spectral)?;
//! assert_eq!(report.bound_satisfied, Some(true));
//! # let _ = approx;
//! # Ok::<(), sqrtx::Error>(())
//! ```
//!
//! The modules mirror the layers of the computation:
//!
//! - [`linalg`]: symmetric matrices, Jacobi eigensolver, norms, SPD gate;
//! - [`frechet`]: square root, Sylvester solve, the derivative recursion;
//! - [`taylor`]: partial sums, remainder bounds, reports;
//! - [`oracles`]: independent quadrature and finite-difference routes;
//! - [`random`]: seeded SPD fixtures.

pub mod error;
pub mod frechet;
pub mod linalg;
pub mod oracles;
pub mod random;
pub mod taylor;

pub use error::{Error, Result};
pub use frechet::{
    catalan, catalan_closed_form, derivative_norm_bound, derivative_stack,
    frechet_first, frechet_second_bidirectional, principal_sqrt, scaled_term_bound,
    sylvester_residual, sylvester_sqrt_solve, CatalanTable, DerivativeStack, MAX_ORDER,
};
pub use linalg::{
    assert_spd, eig_sym, lambda_min, norm, symmetrize, EigenDecomposition, NormKind, SpdMatrix,
    SymMatrix,
};
pub use oracles::QuadratureSpec;
pub use taylor::{
    ando_hemmen_bound, gate, remainder_bound, report, taylor_sum, GateVerdict, PerturbationGate,
    TaylorReport, BOUND_SLACK,
};

// The guide in book/ is compiled as doc-tests so its snippets stay current.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/square-root.md")]
    mod square_root {}
    #[doc = include_str!("../../../book/src/derivatives.md")]
    mod derivatives {}
    #[doc = include_str!("../../../book/src/taylor.md")]
    mod taylor {}
    #[doc = include_str!("../../../book/src/oracles.md")]
    mod oracles {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
