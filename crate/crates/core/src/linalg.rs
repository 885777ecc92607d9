//! Dense symmetric matrices, the cyclic Jacobi eigensolver, norms and the
//! SPD membership gate.
//!
//! Every matrix that is symmetric in exact arithmetic is stored as a
//! [`SymMatrix`], whose entries satisfy `m[(i, j)] == m[(j, i)]` bit for bit.
//! Arithmetic that can break this in floating point (products, congruences)
//! re-symmetrizes its result before handing it back.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Relative asymmetry accepted by [`symmetrize`].
pub const SYMMETRY_TOLERANCE: f64 = 1e-8;

/// Maximum number of Jacobi sweeps before giving up.
pub const MAX_SWEEPS: usize = 100;

/// Which matrix norm to measure with.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum NormKind {
    /// Largest absolute eigenvalue (the operator 2-norm for symmetric matrices).
    #[default]
    Spectral,
    /// `sqrt(tr(A^2))`.
    Frobenius,
}

impl NormKind {
    /// The norm-equivalence constant `K` in the derivative and remainder
    /// bounds: `1` for the spectral norm, `sqrt(r)` for Frobenius.
    pub fn constant(self, dim: usize) -> f64 {
        match self {
            NormKind::Spectral => 1.0,
            NormKind::Frobenius => (dim as f64).sqrt(),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            NormKind::Spectral => "spectral",
            NormKind::Frobenius => "frobenius",
        }
    }
}

impl fmt::Display for NormKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for NormKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "spectral" | "l2" | "2" => Ok(NormKind::Spectral),
            "frobenius" | "fro" | "F" => Ok(NormKind::Frobenius),
            other => Err(format!("unknown norm `{other}` (expected spectral or frobenius)")),
        }
    }
}

/// A dense real symmetric `r x r` matrix with `r >= 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix {
    inner: DMatrix<f64>,
}

/// Largest `|m[i][j] - m[j][i]|` over all entries.
pub fn max_asymmetry(raw: &DMatrix<f64>) -> f64 {
    let n = raw.nrows().min(raw.ncols());
    let mut worst = 0.0_f64;
    for i in 0..n {
        for j in (i + 1)..n {
            worst = worst.max((raw[(i, j)] - raw[(j, i)]).abs());
        }
    }
    worst
}

/// Returns `(M + M^T) / 2`, rejecting inputs whose asymmetry exceeds
/// `1e-8 * max(1, max|M_ij|)`.
pub fn symmetrize(raw: &DMatrix<f64>) -> Result<SymMatrix> {
    if raw.nrows() != raw.ncols() {
        return Err(Error::NotSquare {
            rows: raw.nrows(),
            cols: raw.ncols(),
        });
    }
    if raw.nrows() == 0 {
        return Err(Error::Empty);
    }
    if raw.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite);
    }
    let scale = raw.iter().fold(1.0_f64, |acc, x| acc.max(x.abs()));
    let tolerance = SYMMETRY_TOLERANCE * scale;
    let asymmetry = max_asymmetry(raw);
    if asymmetry > tolerance {
        return Err(Error::NotSymmetric {
            asymmetry,
            tolerance,
        });
    }
    Ok(SymMatrix::project(raw.clone()))
}

impl SymMatrix {
    /// Symmetric part of `m` with no tolerance check. Used on results that
    /// are symmetric in exact arithmetic.
    pub(crate) fn project(mut m: DMatrix<f64>) -> Self {
        let n = m.nrows();
        debug_assert_eq!(n, m.ncols());
        for i in 0..n {
            for j in (i + 1)..n {
                let (a, b) = (m[(i, j)], m[(j, i)]);
                let avg = if a == b { a } else { 0.5 * a + 0.5 * b };
                m[(i, j)] = avg;
                m[(j, i)] = avg;
            }
        }
        SymMatrix { inner: m }
    }

    pub fn from_matrix(m: &DMatrix<f64>) -> Result<Self> {
        symmetrize(m)
    }

    /// Builds from row slices; rows must all have length `rows.len()`.
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::Empty);
        }
        let mut data = Vec::with_capacity(n * n);
        for row in rows {
            let row = row.as_ref();
            if row.len() != n {
                return Err(Error::NotSquare {
                    rows: n,
                    cols: row.len(),
                });
            }
            data.extend_from_slice(row);
        }
        symmetrize(&DMatrix::from_row_slice(n, n, &data))
    }

    pub fn zeros(dim: usize) -> Self {
        SymMatrix {
            inner: DMatrix::zeros(dim, dim),
        }
    }

    pub fn identity(dim: usize) -> Self {
        SymMatrix {
            inner: DMatrix::identity(dim, dim),
        }
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        let n = diag.len();
        let mut m = DMatrix::zeros(n, n);
        for (i, d) in diag.iter().enumerate() {
            m[(i, i)] = *d;
        }
        SymMatrix { inner: m }
    }

    /// The `1 x 1` matrix `[a]`.
    pub fn scalar(a: f64) -> Self {
        Self::from_diagonal(&[a])
    }

    pub fn dim(&self) -> usize {
        self.inner.nrows()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.inner[(i, j)]
    }

    pub fn as_matrix(&self) -> &DMatrix<f64> {
        &self.inner
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.inner
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.dim()).map(|i| self.inner[(i, i)]).collect()
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.inner
            .row_iter()
            .map(|r| r.iter().copied().collect())
            .collect()
    }

    pub fn is_diagonal(&self) -> bool {
        let n = self.dim();
        (0..n).all(|i| (0..n).all(|j| i == j || self.inner[(i, j)] == 0.0))
    }

    pub fn scale(&self, alpha: f64) -> Self {
        SymMatrix {
            inner: &self.inner * alpha,
        }
    }

    /// Symmetric part of the product `self * other`.
    pub fn sym_product(&self, other: &SymMatrix) -> Self {
        SymMatrix::project(&self.inner * &other.inner)
    }

    /// `self^2`, symmetrized.
    pub fn square(&self) -> Self {
        self.sym_product(self)
    }

    pub fn frobenius(&self) -> f64 {
        self.inner.norm()
    }

    pub fn spectral(&self) -> f64 {
        let (eig, _) = jacobi(&self.inner);
        eig.eigenvalues
            .iter()
            .fold(0.0_f64, |acc, d| acc.max(d.abs()))
    }

    pub fn norm(&self, kind: NormKind) -> f64 {
        norm(self, kind)
    }

    pub(crate) fn check_dim(&self, other: &SymMatrix) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(())
    }
}

impl<'a> Add<&'a SymMatrix> for &'a SymMatrix {
    type Output = SymMatrix;
    fn add(self, rhs: &SymMatrix) -> SymMatrix {
        SymMatrix {
            inner: &self.inner + &rhs.inner,
        }
    }
}

impl<'a> Sub<&'a SymMatrix> for &'a SymMatrix {
    type Output = SymMatrix;
    fn sub(self, rhs: &SymMatrix) -> SymMatrix {
        SymMatrix {
            inner: &self.inner - &rhs.inner,
        }
    }
}

impl Add for SymMatrix {
    type Output = SymMatrix;
    fn add(self, rhs: SymMatrix) -> SymMatrix {
        &self + &rhs
    }
}

impl Sub for SymMatrix {
    type Output = SymMatrix;
    fn sub(self, rhs: SymMatrix) -> SymMatrix {
        &self - &rhs
    }
}

impl Mul<f64> for &SymMatrix {
    type Output = SymMatrix;
    fn mul(self, rhs: f64) -> SymMatrix {
        self.scale(rhs)
    }
}

impl Mul<f64> for SymMatrix {
    type Output = SymMatrix;
    fn mul(self, rhs: f64) -> SymMatrix {
        self.scale(rhs)
    }
}

impl Neg for &SymMatrix {
    type Output = SymMatrix;
    fn neg(self) -> SymMatrix {
        self.scale(-1.0)
    }
}

impl Neg for SymMatrix {
    type Output = SymMatrix;
    fn neg(self) -> SymMatrix {
        self.scale(-1.0)
    }
}

/// Orthogonal eigenbasis and ascending eigenvalues of a symmetric matrix:
/// `A = U diag(d) U^T`.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenDecomposition {
    /// Eigenvectors as columns.
    pub basis: DMatrix<f64>,
    /// Eigenvalues in ascending order, matching the columns of `basis`.
    pub eigenvalues: Vec<f64>,
}

impl EigenDecomposition {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// `U diag(f(d)) U^T`.
    pub fn apply(&self, f: impl Fn(f64) -> f64) -> SymMatrix {
        let mut scaled = self.basis.clone();
        for (j, d) in self.eigenvalues.iter().enumerate() {
            let fd = f(*d);
            scaled.column_mut(j).scale_mut(fd);
        }
        SymMatrix::project(&scaled * self.basis.transpose())
    }

    /// `U^T M U` for a symmetric `M` given in the standard basis.
    pub fn to_eigenbasis(&self, m: &SymMatrix) -> DMatrix<f64> {
        self.basis.transpose() * m.as_matrix() * &self.basis
    }

    /// `U M U^T` for `M` given in the eigenbasis.
    pub fn from_eigenbasis(&self, m: &DMatrix<f64>) -> SymMatrix {
        SymMatrix::project(&self.basis * m * self.basis.transpose())
    }

    /// `||U^T U - I||_F`.
    pub fn orthogonality_defect(&self) -> f64 {
        let n = self.dim();
        (self.basis.transpose() * &self.basis - DMatrix::<f64>::identity(n, n)).norm()
    }

    /// `||A U - U diag(d)||_F`.
    pub fn residual(&self, a: &SymMatrix) -> f64 {
        let mut ud = self.basis.clone();
        for (j, d) in self.eigenvalues.iter().enumerate() {
            ud.column_mut(j).scale_mut(*d);
        }
        (a.as_matrix() * &self.basis - ud).norm()
    }
}

fn off_diagonal_mass(a: &DMatrix<f64>) -> f64 {
    let n = a.nrows();
    let mut sum = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                sum += a[(i, j)] * a[(i, j)];
            }
        }
    }
    sum.sqrt()
}

struct JacobiStatus {
    converged: bool,
    sweeps: usize,
    off_diagonal: f64,
    target: f64,
}

// Cyclic Jacobi. Returns the (sorted) decomposition even when the sweep cap
// is hit so that callers that only need eigenvalue estimates can use it.
fn jacobi(input: &DMatrix<f64>) -> (EigenDecomposition, JacobiStatus) {
    let n = input.nrows();
    let mut a = input.clone();
    let mut v = DMatrix::<f64>::identity(n, n);
    let target = n as f64 * f64::EPSILON * input.norm();

    let mut status = JacobiStatus {
        converged: false,
        sweeps: 0,
        off_diagonal: off_diagonal_mass(&a),
        target,
    };

    while status.sweeps <= MAX_SWEEPS {
        status.off_diagonal = off_diagonal_mass(&a);
        if status.off_diagonal <= target {
            status.converged = true;
            break;
        }
        if status.sweeps == MAX_SWEEPS {
            break;
        }
        status.sweeps += 1;

        for p in 0..n.saturating_sub(1) {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
                let t = if theta.abs() > 1e150 {
                    0.5 / theta
                } else {
                    theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;

                a[(p, p)] -= t * apq;
                a[(q, q)] += t * apq;
                a[(p, q)] = 0.0;
                a[(q, p)] = 0.0;
                for k in 0..n {
                    if k == p || k == q {
                        continue;
                    }
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    let new_kp = c * akp - s * akq;
                    let new_kq = s * akp + c * akq;
                    a[(k, p)] = new_kp;
                    a[(p, k)] = new_kp;
                    a[(k, q)] = new_kq;
                    a[(q, k)] = new_kq;
                }
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].total_cmp(&a[(j, j)]));
    let eigenvalues = order.iter().map(|&i| a[(i, i)]).collect();
    let basis = DMatrix::from_fn(n, n, |row, col| v[(row, order[col])]);

    (EigenDecomposition { basis, eigenvalues }, status)
}

/// Symmetric eigendecomposition by cyclic Jacobi rotations.
///
/// Converges when the off-diagonal Frobenius mass drops to
/// `r * eps * ||A||_F`; fails after [`MAX_SWEEPS`] sweeps.
pub fn eig_sym(a: &SymMatrix) -> Result<EigenDecomposition> {
    let (eig, status) = jacobi(a.as_matrix());
    if !status.converged {
        return Err(Error::NoConvergence {
            sweeps: status.sweeps,
            off_diagonal: status.off_diagonal,
            target: status.target,
        });
    }
    Ok(eig)
}

pub fn norm(a: &SymMatrix, kind: NormKind) -> f64 {
    match kind {
        NormKind::Spectral => a.spectral(),
        NormKind::Frobenius => a.frobenius(),
    }
}

pub fn lambda_min(a: &SymMatrix) -> Result<f64> {
    Ok(eig_sym(a)?.eigenvalues[0])
}

/// A symmetric positive-definite matrix together with its eigendecomposition.
#[derive(Debug, Clone, PartialEq)]
pub struct SpdMatrix {
    base: SymMatrix,
    eig: EigenDecomposition,
}

impl SpdMatrix {
    /// Wraps a known decomposition; caller guarantees positivity.
    pub(crate) fn from_parts(base: SymMatrix, eig: EigenDecomposition) -> Self {
        debug_assert!(eig.eigenvalues[0] > 0.0);
        SpdMatrix { base, eig }
    }

    pub fn new(a: SymMatrix) -> Result<Self> {
        assert_spd(&a)
    }

    pub fn lambda_min(&self) -> f64 {
        self.eig.eigenvalues[0]
    }

    pub fn lambda_max(&self) -> f64 {
        self.eig.eigenvalues[self.eig.dim() - 1]
    }

    pub fn dim(&self) -> usize {
        self.base.dim()
    }

    pub fn as_sym(&self) -> &SymMatrix {
        &self.base
    }

    pub fn eigen(&self) -> &EigenDecomposition {
        &self.eig
    }

    pub fn into_sym(self) -> SymMatrix {
        self.base
    }
}

impl AsRef<SymMatrix> for SpdMatrix {
    fn as_ref(&self) -> &SymMatrix {
        &self.base
    }
}

/// Accepts `A` iff `lambda_min(A) > r * eps * ||A||_2`.
pub fn assert_spd(a: &SymMatrix) -> Result<SpdMatrix> {
    let eig = eig_sym(a)?;
    let lo = eig.eigenvalues[0];
    let hi = eig.eigenvalues[eig.dim() - 1];
    let spectral = lo.abs().max(hi.abs());
    let threshold = a.dim() as f64 * f64::EPSILON * spectral;
    if lo.is_nan() || lo <= threshold {
        return Err(Error::NotPositiveDefinite { lambda_min: lo });
    }
    Ok(SpdMatrix {
        base: a.clone(),
        eig,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn sample(n: usize, seed: u64) -> SymMatrix {
        // Deterministic pseudo-random fill, good enough for solver tests.
        let mut state = seed.wrapping_mul(6364136223846793005).wrapping_add(1);
        let mut next = || {
            state = state
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            ((state >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
        };
        let m = DMatrix::from_fn(n, n, |_, _| next());
        SymMatrix::project(&m + m.transpose())
    }

    #[test]
    fn symmetrize_examples() {
        let ok = symmetrize(&DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 1.0])).unwrap();
        assert_eq!(ok.rows(), vec![vec![1.0, 2.0], vec![2.0, 1.0]]);

        let nearly =
            symmetrize(&DMatrix::from_row_slice(2, 2, &[1.0, 2.0 + 1e-13, 2.0, 1.0])).unwrap();
        assert_abs_diff_eq!(nearly.get(0, 1), 2.0, epsilon = 1e-13);
        assert_eq!(nearly.get(0, 1), nearly.get(1, 0));

        let big = symmetrize(&DMatrix::from_row_slice(2, 2, &[0.0, -f64::MAX, -f64::MAX, 0.0]));
        assert_eq!(big.unwrap().get(0, 1), -f64::MAX);

        let bad = symmetrize(&DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 0.0, 0.0]));
        assert!(matches!(bad, Err(Error::NotSymmetric { .. })));
    }

    #[test]
    fn symmetrize_rejects_shape_problems() {
        assert!(matches!(
            symmetrize(&DMatrix::<f64>::zeros(2, 3)),
            Err(Error::NotSquare { .. })
        ));
        assert!(matches!(
            symmetrize(&DMatrix::<f64>::zeros(0, 0)),
            Err(Error::Empty)
        ));
        assert!(matches!(
            symmetrize(&DMatrix::from_row_slice(1, 1, &[f64::NAN])),
            Err(Error::NonFinite)
        ));
    }

    #[test]
    fn eig_identity_and_diagonal() {
        let eig = eig_sym(&SymMatrix::identity(3)).unwrap();
        assert_eq!(eig.eigenvalues, vec![1.0, 1.0, 1.0]);
        assert!(eig.orthogonality_defect() < 1e-15);

        let eig = eig_sym(&SymMatrix::from_diagonal(&[9.0, 4.0])).unwrap();
        assert_eq!(eig.eigenvalues, vec![4.0, 9.0]);
        // signed permutation
        for v in eig.basis.iter() {
            assert!(*v == 0.0 || v.abs() == 1.0);
        }
    }

    #[test]
    fn eig_residual_invariants() {
        for (n, seed) in [(1, 1), (2, 2), (8, 3), (20, 4), (50, 5)] {
            let a = sample(n, seed);
            let eig = eig_sym(&a).unwrap();
            let eps = f64::EPSILON;
            assert!(eig.orthogonality_defect() <= 10.0 * n as f64 * eps);
            assert!(eig.residual(&a) <= 100.0 * n as f64 * eps * a.frobenius());
            assert!(eig.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
        }
    }

    #[test]
    fn eig_handles_repeated_eigenvalues() {
        let a = SymMatrix::from_rows(&[[2.0, 1.0, 0.0], [1.0, 2.0, 0.0], [0.0, 0.0, 3.0]]).unwrap();
        let eig = eig_sym(&a).unwrap();
        assert_abs_diff_eq!(eig.eigenvalues[0], 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(eig.eigenvalues[1], 3.0, epsilon = 1e-14);
        assert_abs_diff_eq!(eig.eigenvalues[2], 3.0, epsilon = 1e-14);
    }

    #[test]
    fn norms() {
        let a = SymMatrix::from_diagonal(&[3.0, -4.0]);
        assert_abs_diff_eq!(norm(&a, NormKind::Spectral), 4.0, epsilon = 1e-15);
        assert_abs_diff_eq!(norm(&a, NormKind::Frobenius), 5.0, epsilon = 1e-15);
        for r in 1..6 {
            assert_abs_diff_eq!(
                SymMatrix::identity(r).norm(NormKind::Frobenius),
                (r as f64).sqrt(),
                epsilon = 1e-15
            );
        }
        assert_eq!(NormKind::Frobenius.constant(4), 2.0);
        assert_eq!(NormKind::Spectral.constant(4), 1.0);
    }

    #[test]
    fn lambda_min_examples() {
        assert_eq!(lambda_min(&SymMatrix::from_diagonal(&[2.0, 5.0])).unwrap(), 2.0);
        assert_eq!(lambda_min(&SymMatrix::identity(4)).unwrap(), 1.0);
    }

    #[test]
    fn spd_gate() {
        let ok = assert_spd(&SymMatrix::from_diagonal(&[1.0, 2.0])).unwrap();
        assert_eq!(ok.lambda_min(), 1.0);
        assert!(matches!(
            assert_spd(&SymMatrix::from_diagonal(&[1.0, 0.0])),
            Err(Error::NotPositiveDefinite { lambda_min }) if lambda_min == 0.0
        ));
        assert!(matches!(
            assert_spd(&SymMatrix::from_diagonal(&[1.0, -1.0])),
            Err(Error::NotPositiveDefinite { lambda_min }) if lambda_min == -1.0
        ));
        // relative threshold: tiny but well-conditioned matrices pass
        assert!(assert_spd(&SymMatrix::identity(3).scale(1e-200)).is_ok());
    }

    #[test]
    fn apply_reconstructs() {
        let a = sample(6, 11);
        let eig = eig_sym(&a).unwrap();
        let back = eig.apply(|d| d);
        assert!((&back - &a).frobenius() < 1e-13 * a.frobenius());
    }

    #[test]
    fn norm_kind_parses() {
        assert_eq!("spectral".parse::<NormKind>().unwrap(), NormKind::Spectral);
        assert_eq!("frobenius".parse::<NormKind>().unwrap(), NormKind::Frobenius);
        assert!("max".parse::<NormKind>().is_err());
    }
}
