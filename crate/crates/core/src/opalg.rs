//! Dense complex operator algebra.
//!
//! [`Operator`] is a square complex matrix tagged with the tensor-product basis
//! it acts on. Ungraded operators live on `Fock ⊗ spin`; graded operators carry
//! an extra two-dimensional grading factor placed outermost, so a graded
//! operator is the 2×2 block matrix `[[upper, upper→lower], [.., lower]]` with
//! the `β = +1` sector first. Within a sector the index is `n * spin_dim + s`.
//!
//! Matrix functions (square root, inverse square root, sign) all go through a
//! full Hermitian eigendecomposition. Degenerate eigenvalues need no special
//! treatment: the spectral function is applied per eigenvalue and is therefore
//! constant on every eigenspace, whatever basis the solver picked inside it.

use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type C64 = Complex64;
pub type Matrix = DMatrix<C64>;
pub type Vector = DVector<C64>;

pub const I: C64 = C64::new(0.0, 1.0);

/// Shape of the tensor-product basis an operator acts on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BasisTag {
    pub n_fock: usize,
    pub spin_dim: usize,
    pub graded: bool,
}

impl BasisTag {
    pub fn new(n_fock: usize, spin_dim: usize, graded: bool) -> Self {
        BasisTag {
            n_fock,
            spin_dim,
            graded,
        }
    }

    pub fn ungraded(n_fock: usize, spin_dim: usize) -> Self {
        Self::new(n_fock, spin_dim, false)
    }

    /// Dimension of one grading sector, `n_fock * spin_dim`.
    pub fn sector_dim(&self) -> usize {
        self.n_fock * self.spin_dim
    }

    pub fn dim(&self) -> usize {
        self.sector_dim() * if self.graded { 2 } else { 1 }
    }

    pub fn to_graded(self) -> Self {
        Self { graded: true, ..self }
    }

    pub fn to_ungraded(self) -> Self {
        Self {
            graded: false,
            ..self
        }
    }

    pub fn with_n_fock(self, n_fock: usize) -> Self {
        Self { n_fock, ..self }
    }

    /// Flat index of `(sector, n, s)`; `sector` is 0 for `β = +1`, 1 for `β = -1`.
    pub fn index(&self, sector: usize, n: usize, s: usize) -> usize {
        sector * self.sector_dim() + n * self.spin_dim + s
    }

    /// Indices of all basis states whose Fock level is below `levels`.
    pub fn level_indices(&self, levels: usize) -> Vec<usize> {
        let sectors = if self.graded { 2 } else { 1 };
        let levels = levels.min(self.n_fock);
        let mut out = Vec::with_capacity(sectors * levels * self.spin_dim);
        for sector in 0..sectors {
            for n in 0..levels {
                for s in 0..self.spin_dim {
                    out.push(self.index(sector, n, s));
                }
            }
        }
        out
    }
}

/// Grading sector of a graded operator.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sector {
    /// `β = +1`, the positive-energy sector.
    Plus,
    /// `β = -1`, the negative-energy sector.
    Minus,
}

impl Sector {
    fn offset(self, sector_dim: usize) -> usize {
        match self {
            Sector::Plus => 0,
            Sector::Minus => sector_dim,
        }
    }
}

/// Residual thresholds shared by all verification suites.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Tolerances {
    /// Relative residual for identities that hold exactly in the truncated space.
    pub identity_tol: f64,
    /// Relative residual for identities that only hold inside the interior window.
    pub interior_tol: f64,
    /// Kernel membership threshold relative to the largest eigenvalue.
    pub kernel_rel: f64,
    /// Minimum admissible distance of a shift from the spectrum.
    pub shift_margin: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            identity_tol: 1e-12,
            interior_tol: 1e-10,
            kernel_rel: 1e-8,
            shift_margin: 1e-6,
        }
    }
}

impl Tolerances {
    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("identity_tol", self.identity_tol),
            ("interior_tol", self.interior_tol),
            ("kernel_rel", self.kernel_rel),
            ("shift_margin", self.shift_margin),
        ];
        for (name, value) in fields {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "{name} must be strictly positive, got {value}"
                )));
            }
        }
        if self.kernel_rel >= 1.0 {
            return Err(Error::InvalidParameter(format!(
                "kernel_rel must be < 1, got {}",
                self.kernel_rel
            )));
        }
        Ok(())
    }
}

/// A dense complex square matrix together with its basis metadata.
#[derive(Clone, Debug, PartialEq)]
pub struct Operator {
    basis: BasisTag,
    entries: Matrix,
}

impl Operator {
    pub fn new(basis: BasisTag, entries: Matrix) -> Result<Self> {
        let expected = basis.dim();
        if entries.nrows() != expected || entries.ncols() != expected || expected == 0 {
            return Err(Error::DimensionMismatch {
                basis,
                expected,
                rows: entries.nrows(),
                cols: entries.ncols(),
            });
        }
        Ok(Operator { basis, entries })
    }

    /// Builds an operator from a matrix whose shape is known to match.
    pub(crate) fn from_parts(basis: BasisTag, entries: Matrix) -> Self {
        debug_assert_eq!(entries.nrows(), basis.dim());
        debug_assert_eq!(entries.ncols(), basis.dim());
        Operator { basis, entries }
    }

    pub fn from_fn(basis: BasisTag, f: impl FnMut(usize, usize) -> C64) -> Self {
        let d = basis.dim();
        Self::from_parts(basis, Matrix::from_fn(d, d, f))
    }

    pub fn zeros(basis: BasisTag) -> Self {
        let d = basis.dim();
        Self::from_parts(basis, Matrix::zeros(d, d))
    }

    pub fn identity(basis: BasisTag) -> Self {
        let d = basis.dim();
        Self::from_parts(basis, Matrix::identity(d, d))
    }

    /// Real diagonal operator; `diag` must yield exactly `basis.dim()` values.
    pub fn diagonal(basis: BasisTag, diag: impl IntoIterator<Item = f64>) -> Result<Self> {
        let values: Vec<C64> = diag.into_iter().map(C64::from).collect();
        Self::new(basis, Matrix::from_diagonal(&Vector::from_vec(values)))
    }

    /// The grading operator `β = diag(I, -I)` on a graded basis.
    pub fn grading(basis: BasisTag) -> Result<Self> {
        if !basis.graded {
            return Err(Error::NotGraded(basis));
        }
        let half = basis.sector_dim();
        Self::diagonal(
            basis,
            (0..basis.dim()).map(|i| if i < half { 1.0 } else { -1.0 }),
        )
    }

    pub fn basis(&self) -> BasisTag {
        self.basis
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &Matrix {
        &self.entries
    }

    pub fn into_entries(self) -> Matrix {
        self.entries
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.entries[(row, col)]
    }

    pub fn adjoint(&self) -> Self {
        Self::from_parts(self.basis, self.entries.adjoint())
    }

    pub fn scale(&self, factor: impl Into<C64>) -> Self {
        Self::from_parts(self.basis, &self.entries * factor.into())
    }

    /// `self + shift * I`.
    pub fn shifted(&self, shift: impl Into<C64>) -> Self {
        let shift = shift.into();
        let mut m = self.entries.clone();
        for i in 0..m.nrows() {
            m[(i, i)] += shift;
        }
        Self::from_parts(self.basis, m)
    }

    fn check_basis(&self, other: &Operator) -> Result<()> {
        if self.basis != other.basis {
            return Err(Error::BasisMismatch {
                left: self.basis,
                right: other.basis,
            });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Operator) -> Result<Self> {
        self.check_basis(other)?;
        Ok(Self::from_parts(self.basis, &self.entries + &other.entries))
    }

    pub fn checked_sub(&self, other: &Operator) -> Result<Self> {
        self.check_basis(other)?;
        Ok(Self::from_parts(self.basis, &self.entries - &other.entries))
    }

    pub fn checked_mul(&self, other: &Operator) -> Result<Self> {
        self.check_basis(other)?;
        Ok(Self::from_parts(self.basis, &self.entries * &other.entries))
    }

    pub fn apply(&self, v: &Vector) -> Vector {
        &self.entries * v
    }

    /// Spectral norm of `X - X†` relative to `max(1, ‖X‖)`.
    pub fn hermiticity_residual(&self) -> f64 {
        let diff = &self.entries - self.entries.adjoint();
        relative(matrix_norm(&diff), op_norm(self))
    }

    /// `(X + X†) / 2`.
    pub fn hermitian_part(&self) -> Self {
        Self::from_parts(
            self.basis,
            (&self.entries + self.entries.adjoint()) * C64::from(0.5),
        )
    }

    /// Tensor product `fock ⊗ spin` of a pure Fock operator and a pure spin operator.
    pub fn fock_spin(fock: &Operator, spin: &Operator) -> Result<Self> {
        let fb = fock.basis;
        let sb = spin.basis;
        if fb.spin_dim != 1 || fb.graded || sb.n_fock != 1 || sb.graded {
            return Err(Error::InvalidParameter(format!(
                "fock_spin expects a Fock-only and a spin-only operator, got {fb:?} and {sb:?}"
            )));
        }
        let basis = BasisTag::ungraded(fb.n_fock, sb.spin_dim);
        Ok(Self::from_parts(basis, fock.entries.kronecker(&spin.entries)))
    }

    /// Graded operator `[[upper_left, upper_right], [lower_left, lower_right]]`.
    pub fn from_blocks(
        upper_left: &Operator,
        upper_right: &Operator,
        lower_left: &Operator,
        lower_right: &Operator,
    ) -> Result<Self> {
        for b in [upper_right, lower_left, lower_right] {
            upper_left.check_basis(b)?;
        }
        let inner = upper_left.basis;
        if inner.graded {
            return Err(Error::InvalidParameter(
                "blocks of a graded operator must be ungraded".into(),
            ));
        }
        let h = inner.dim();
        let mut m = Matrix::zeros(2 * h, 2 * h);
        m.view_mut((0, 0), (h, h)).copy_from(&upper_left.entries);
        m.view_mut((0, h), (h, h)).copy_from(&upper_right.entries);
        m.view_mut((h, 0), (h, h)).copy_from(&lower_left.entries);
        m.view_mut((h, h), (h, h)).copy_from(&lower_right.entries);
        Ok(Self::from_parts(inner.to_graded(), m))
    }

    /// `diag(upper, lower)` as a graded operator.
    pub fn block_diagonal(upper: &Operator, lower: &Operator) -> Result<Self> {
        let zero = Operator::zeros(upper.basis);
        Self::from_blocks(upper, &zero, &zero, lower)
    }

    /// The `(row, col)` sector block of a graded operator.
    pub fn block(&self, row: Sector, col: Sector) -> Result<Self> {
        if !self.basis.graded {
            return Err(Error::NotGraded(self.basis));
        }
        let h = self.basis.sector_dim();
        let m = self
            .entries
            .view((row.offset(h), col.offset(h)), (h, h))
            .into_owned();
        Ok(Self::from_parts(self.basis.to_ungraded(), m))
    }

    /// Keeps the two diagonal sector blocks, zeroing the off-diagonal ones.
    pub fn block_diagonal_part(&self) -> Result<Self> {
        let upper = self.block(Sector::Plus, Sector::Plus)?;
        let lower = self.block(Sector::Minus, Sector::Minus)?;
        Self::block_diagonal(&upper, &lower)
    }

    /// Keeps the two off-diagonal sector blocks.
    pub fn off_diagonal_part(&self) -> Result<Self> {
        Ok(Self::from_parts(
            self.basis,
            &self.entries - self.block_diagonal_part()?.entries,
        ))
    }

    /// Restriction to the lowest `n_fock` Fock levels in every spin/grading sector.
    pub fn truncate_fock(&self, n_fock: usize) -> Result<Self> {
        if n_fock == 0 || n_fock > self.basis.n_fock {
            return Err(Error::InvalidParameter(format!(
                "cannot truncate {} Fock levels to {n_fock}",
                self.basis.n_fock
            )));
        }
        let idx = self.basis.level_indices(n_fock);
        Ok(Self::from_parts(
            self.basis.with_n_fock(n_fock),
            self.compress(&idx),
        ))
    }

    /// Submatrix on the given index set (rows and columns).
    pub fn compress(&self, indices: &[usize]) -> Matrix {
        let k = indices.len();
        Matrix::from_fn(k, k, |i, j| self.entries[(indices[i], indices[j])])
    }
}

impl Add for &Operator {
    type Output = Operator;

    /// # Panics
    /// On basis mismatch; use [`Operator::checked_add`] for a fallible version.
    fn add(self, rhs: &Operator) -> Operator {
        self.checked_add(rhs).expect("operator addition")
    }
}

impl Sub for &Operator {
    type Output = Operator;

    fn sub(self, rhs: &Operator) -> Operator {
        self.checked_sub(rhs).expect("operator subtraction")
    }
}

impl Mul for &Operator {
    type Output = Operator;

    fn mul(self, rhs: &Operator) -> Operator {
        self.checked_mul(rhs).expect("operator product")
    }
}

impl Mul<f64> for &Operator {
    type Output = Operator;

    fn mul(self, rhs: f64) -> Operator {
        self.scale(rhs)
    }
}

impl Mul<C64> for &Operator {
    type Output = Operator;

    fn mul(self, rhs: C64) -> Operator {
        self.scale(rhs)
    }
}

impl Neg for &Operator {
    type Output = Operator;

    fn neg(self) -> Operator {
        self.scale(-1.0)
    }
}

/// `XY - YX`.
pub fn commutator(x: &Operator, y: &Operator) -> Result<Operator> {
    Ok(&x.checked_mul(y)? - &y.checked_mul(x)?)
}

/// `XY + YX`.
pub fn anticommutator(x: &Operator, y: &Operator) -> Result<Operator> {
    Ok(&x.checked_mul(y)? + &y.checked_mul(x)?)
}

/// Largest singular value of a plain matrix.
pub fn matrix_norm(m: &Matrix) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.clone()
        .singular_values()
        .iter()
        .copied()
        .fold(0.0, f64::max)
}

/// Spectral norm (largest singular value).
pub fn op_norm(x: &Operator) -> f64 {
    matrix_norm(&x.entries)
}

/// `residual / max(1, reference)`, the convention used for every reported residual.
pub fn relative(residual: f64, reference: f64) -> f64 {
    residual / reference.max(1.0)
}

/// Hermitian eigendecomposition with eigenvalues sorted ascending.
#[derive(Clone, Debug)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    /// Eigenvectors as columns, in the order of `values`.
    pub vectors: Matrix,
}

impl HermitianEigen {
    /// Reassembles `V f(Λ) V†`.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Matrix {
        let scaled = Matrix::from_fn(self.vectors.nrows(), self.vectors.ncols(), |i, j| {
            self.vectors[(i, j)] * f(self.values[j])
        });
        scaled * self.vectors.adjoint()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()))
    }

    pub fn min(&self) -> f64 {
        self.values.first().copied().unwrap_or(0.0)
    }
}

/// Eigendecomposition of a plain Hermitian matrix (Hermiticity is not checked).
pub fn eigh(m: &Matrix) -> HermitianEigen {
    let sym = (m + m.adjoint()) * C64::from(0.5);
    let eig = SymmetricEigen::new(sym);
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = Matrix::from_fn(m.nrows(), order.len(), |r, c| {
        eig.eigenvectors[(r, order[c])]
    });
    HermitianEigen { values, vectors }
}

/// Index ranges of runs of sorted `values` whose consecutive gaps are at most
/// `tol · max(1, |v|)`.
pub fn degenerate_clusters(values: &[f64], tol: f64) -> Vec<std::ops::Range<usize>> {
    let mut out = Vec::new();
    let mut start = 0;
    for i in 1..=values.len() {
        let split = i == values.len()
            || (values[i] - values[i - 1]).abs() > tol * values[i].abs().max(1.0);
        if split {
            out.push(start..i);
            start = i;
        }
    }
    out
}

/// One vector of a simultaneous eigenbasis.
#[derive(Clone, Debug)]
pub struct JointEigenvector {
    pub primary: f64,
    /// Rayleigh quotient of the secondary matrix.
    pub secondary: f64,
    pub vector: Vector,
}

/// Eigenvectors of `primary` which also diagonalise `secondary` inside every
/// degenerate cluster of `primary`. Both matrices must be Hermitian.
pub fn joint_eigen(primary: &Matrix, secondary: &Matrix, cluster_tol: f64) -> Vec<JointEigenvector> {
    let eig = eigh(primary);
    let mut out = Vec::with_capacity(eig.values.len());
    for range in degenerate_clusters(&eig.values, cluster_tol) {
        let basis = eig.vectors.columns(range.start, range.len()).into_owned();
        let reduced = basis.adjoint() * secondary * &basis;
        let inner = eigh(&reduced);
        let mean = eig.values[range.clone()].iter().sum::<f64>() / range.len() as f64;
        for (k, &value) in inner.values.iter().enumerate() {
            let v = &basis * inner.vectors.column(k);
            out.push(JointEigenvector {
                primary: if range.len() == 1 { eig.values[range.start] } else { mean },
                secondary: value,
                vector: v,
            });
        }
    }
    out
}

/// Checked Hermitian eigendecomposition.
pub fn hermitian_eigen(x: &Operator, tol: &Tolerances) -> Result<HermitianEigen> {
    let residual = x.hermiticity_residual();
    if residual > tol.identity_tol {
        return Err(Error::NotHermitian {
            residual,
            tolerance: tol.identity_tol,
        });
    }
    Ok(eigh(&x.entries))
}

fn psd_eigen(x: &Operator, tol: &Tolerances) -> Result<HermitianEigen> {
    let eig = hermitian_eigen(x, tol)?;
    let threshold = -tol.identity_tol * eig.max_abs();
    if eig.min() < threshold {
        return Err(Error::NegativeSpectrum {
            min_eigenvalue: eig.min(),
            threshold,
        });
    }
    Ok(eig)
}

/// Unique positive-semidefinite square root of a Hermitian PSD operator.
///
/// Eigenvalues down to `-identity_tol * ‖X‖` are treated as rounding noise and
/// clamped to zero; anything more negative is a [`Error::NegativeSpectrum`].
pub fn hermitian_sqrt_psd(x: &Operator, tol: &Tolerances) -> Result<Operator> {
    let eig = psd_eigen(x, tol)?;
    Ok(Operator::from_parts(x.basis, eig.map(|v| v.max(0.0).sqrt())))
}

/// `X^{-1/2}` for Hermitian positive definite `X` whose smallest eigenvalue
/// exceeds `shift_margin * ‖X‖`.
pub fn hermitian_inverse_sqrt(x: &Operator, tol: &Tolerances) -> Result<Operator> {
    let eig = psd_eigen(x, tol)?;
    let threshold = tol.shift_margin * eig.max_abs();
    if eig.min() <= threshold {
        return Err(Error::NearSingular {
            min_eigenvalue: eig.min(),
            threshold,
        });
    }
    Ok(Operator::from_parts(x.basis, eig.map(|v| 1.0 / v.sqrt())))
}

/// `sgn H = H (H²)^{-1/2}` with `H²` computed as the matrix product.
///
/// `H` itself need not be Hermitian (pseudo-Hermitian bosons); only `H²` must be.
pub fn sign_operator(h: &Operator, tol: &Tolerances) -> Result<Operator> {
    let h2 = h * h;
    sign_operator_with_square(h, &h2, tol)
}

/// `sgn H` with a caller-supplied `H²`.
pub fn sign_operator_with_square(
    h: &Operator,
    h_squared: &Operator,
    tol: &Tolerances,
) -> Result<Operator> {
    let inv_abs = hermitian_inverse_sqrt(h_squared, tol)?;
    h.checked_mul(&inv_abs)
}

/// Kernel of a Hermitian PSD operator.
#[derive(Clone, Debug)]
pub struct Kernel {
    pub dim: usize,
    /// Absolute eigenvalue threshold used for membership.
    pub threshold: f64,
    /// Orthonormal kernel basis.
    pub vectors: Vec<Vector>,
}

/// Kernel of a plain Hermitian PSD matrix, see [`kernel_dim`].
pub fn matrix_kernel(m: &Matrix, kernel_rel: f64) -> Kernel {
    let eig = eigh(m);
    let scale = eig.values.last().copied().unwrap_or(0.0);
    let threshold = kernel_rel * if scale > 0.0 { scale } else { 1.0 };
    let vectors: Vec<Vector> = eig
        .values
        .iter()
        .enumerate()
        .filter(|(_, v)| **v <= threshold)
        .map(|(i, _)| eig.vectors.column(i).into_owned())
        .collect();
    Kernel {
        dim: vectors.len(),
        threshold,
        vectors,
    }
}

/// Counts eigenvalues at most `kernel_rel` times the largest eigenvalue
/// (absolute threshold `kernel_rel` when the operator is zero).
pub fn kernel_dim(x: &Operator, kernel_rel: f64, tol: &Tolerances) -> Result<Kernel> {
    let residual = x.hermiticity_residual();
    if residual > tol.identity_tol {
        return Err(Error::NotHermitian {
            residual,
            tolerance: tol.identity_tol,
        });
    }
    Ok(matrix_kernel(&x.entries, kernel_rel))
}

/// Smallest singular value of a plain matrix.
pub fn smallest_singular_value(m: &Matrix) -> f64 {
    m.clone()
        .singular_values()
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min)
}

/// `(M - zI)^{-1}` for a plain matrix, refusing shifts within `margin` of the spectrum.
pub fn solve_shifted_matrix(m: &Matrix, z: C64, margin: f64) -> Result<Matrix> {
    let mut shifted = m.clone();
    for i in 0..shifted.nrows() {
        shifted[(i, i)] -= z;
    }
    let distance = smallest_singular_value(&shifted);
    let shift_error = || Error::ShiftOnSpectrum {
        re: z.re,
        im: z.im,
        distance,
        margin,
    };
    if distance <= margin {
        return Err(shift_error());
    }
    shifted.lu().try_inverse().ok_or_else(shift_error)
}

/// Resolvent `(X - zI)^{-1}`.
pub fn solve_shifted(x: &Operator, z: C64, tol: &Tolerances) -> Result<Operator> {
    let inv = solve_shifted_matrix(&x.entries, z, tol.shift_margin)?;
    Ok(Operator::from_parts(x.basis, inv))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clusters_split_on_gaps() {
        let r = degenerate_clusters(&[0.0, 1e-12, 1.0, 2.0, 2.0], 1e-8);
        assert_eq!(r, vec![0..2, 2..3, 3..5]);
        assert!(degenerate_clusters(&[], 1e-8).is_empty());
    }

    #[test]
    fn joint_eigen_resolves_degeneracy() {
        // primary = diag(1, 1, 2), secondary mixes the degenerate pair
        let p = Matrix::from_diagonal(&Vector::from_vec(vec![C64::from(1.0), C64::from(1.0), C64::from(2.0)]));
        let mut q = Matrix::zeros(3, 3);
        q[(0, 1)] = C64::from(1.0);
        q[(1, 0)] = C64::from(1.0);
        let j = joint_eigen(&p, &q, 1e-10);
        let sec: Vec<f64> = j.iter().map(|e| e.secondary).collect();
        assert!((sec[0] + 1.0).abs() < 1e-14 && (sec[1] - 1.0).abs() < 1e-14);
        for e in &j {
            let r = &p * &e.vector - &e.vector * C64::from(e.primary);
            assert!(r.norm() < 1e-14);
            let r = &q * &e.vector - &e.vector * C64::from(e.secondary);
            assert!(r.norm() < 1e-14);
        }
    }

    fn pauli() -> [Operator; 3] {
        let b = BasisTag::ungraded(1, 2);
        let z = C64::from(0.0);
        let one = C64::from(1.0);
        [
            Operator::new(b, Matrix::from_row_slice(2, 2, &[z, one, one, z])).unwrap(),
            Operator::new(b, Matrix::from_row_slice(2, 2, &[z, -I, I, z])).unwrap(),
            Operator::new(b, Matrix::from_row_slice(2, 2, &[one, z, z, -one])).unwrap(),
        ]
    }

    fn diag(values: &[f64]) -> Operator {
        Operator::diagonal(BasisTag::ungraded(values.len(), 1), values.iter().copied()).unwrap()
    }

    fn ladder(n: usize) -> Operator {
        Operator::from_fn(BasisTag::ungraded(n, 1), |i, j| {
            if j == i + 1 {
                C64::from((j as f64).sqrt())
            } else {
                C64::from(0.0)
            }
        })
    }

    fn close(a: &Operator, b: &Operator, tol: f64) -> bool {
        op_norm(&(a - b)) <= tol
    }

    #[test]
    fn pauli_commutator_and_anticommutator() {
        let [sx, sy, sz] = pauli();
        let c = commutator(&sx, &sy).unwrap();
        assert!(close(&c, &sz.scale(2.0 * I), 1e-15));
        let ac = anticommutator(&sx, &sy).unwrap();
        assert!(op_norm(&ac) < 1e-15);
    }

    #[test]
    fn identity_commutes() {
        let [sx, ..] = pauli();
        let id = Operator::identity(sx.basis());
        assert_eq!(op_norm(&commutator(&id, &sx).unwrap()), 0.0);
    }

    #[test]
    fn truncated_ladder_commutator_signature() {
        let a = ladder(4);
        let c = commutator(&a, &a.adjoint()).unwrap();
        assert!(close(&c, &diag(&[1.0, 1.0, 1.0, -3.0]), 1e-14));
    }

    #[test]
    fn ladder_anticommutator_interior() {
        let a = ladder(4);
        let ac = anticommutator(&a, &a.adjoint()).unwrap();
        let window = ac.compress(&[0, 1, 2]);
        let expected = diag(&[1.0, 3.0, 5.0]);
        assert!(matrix_norm(&(window - expected.entries())) < 1e-14);
    }

    #[test]
    fn beta_anticommutator_is_two() {
        let beta = Operator::grading(BasisTag::new(2, 1, true)).unwrap();
        let ac = anticommutator(&beta, &beta).unwrap();
        assert!(close(&ac, &Operator::identity(beta.basis()).scale(2.0), 0.0));
    }

    #[test]
    fn basis_mismatch_is_an_error() {
        let a = ladder(3);
        let b = ladder(4);
        assert!(matches!(
            commutator(&a, &b),
            Err(Error::BasisMismatch { .. })
        ));
        let s = Operator::identity(BasisTag::ungraded(3, 1).to_graded());
        assert!(a.checked_add(&s).is_err());
    }

    #[test]
    fn sqrt_examples() {
        let tol = Tolerances::default();
        let r = hermitian_sqrt_psd(&diag(&[4.0, 9.0]), &tol).unwrap();
        assert!(close(&r, &diag(&[2.0, 3.0]), 1e-14));
        let id = Operator::identity(BasisTag::ungraded(5, 1));
        assert!(close(&hermitian_sqrt_psd(&id, &tol).unwrap(), &id, 1e-14));
    }

    #[test]
    fn sqrt_rejects_non_hermitian_and_negative() {
        let tol = Tolerances::default();
        let a = ladder(3);
        assert!(matches!(
            hermitian_sqrt_psd(&a, &tol),
            Err(Error::NotHermitian { .. })
        ));
        assert!(matches!(
            hermitian_sqrt_psd(&diag(&[1.0, -0.5]), &tol),
            Err(Error::NegativeSpectrum { .. })
        ));
        // rounding-level negatives are clamped
        let r = hermitian_sqrt_psd(&diag(&[1.0, -1e-14]), &tol).unwrap();
        assert_eq!(r.get(1, 1), C64::from(0.0));
    }

    #[test]
    fn sign_examples() {
        let tol = Tolerances::default();
        let s = sign_operator(&diag(&[3.0, -2.0]), &tol).unwrap();
        assert!(close(&s, &diag(&[1.0, -1.0]), 1e-15));
        let [sx, ..] = pauli();
        let s = sign_operator(&sx, &tol).unwrap();
        assert!(close(&s, &sx, 1e-15));
        assert!(matches!(
            sign_operator(&diag(&[1.0, 0.0]), &tol),
            Err(Error::NearSingular { .. })
        ));
    }

    #[test]
    fn kernel_examples() {
        let tol = Tolerances::default();
        let zero = Operator::zeros(BasisTag::ungraded(3, 1));
        assert_eq!(kernel_dim(&zero, 1e-8, &tol).unwrap().dim, 3);
        let k = kernel_dim(&diag(&[0.0, 1.0, 2.0]), 1e-8, &tol).unwrap();
        assert_eq!(k.dim, 1);
        assert!((k.vectors[0][0].norm() - 1.0).abs() < 1e-14);
        assert!(kernel_dim(&ladder(3), 1e-8, &tol).is_err());
    }

    #[test]
    fn solve_shifted_examples() {
        let tol = Tolerances::default();
        let g = solve_shifted(&diag(&[1.0, 2.0]), C64::from(0.0), &tol).unwrap();
        assert!(close(&g, &diag(&[1.0, 0.5]), 1e-15));
        let id = Operator::identity(BasisTag::ungraded(3, 1));
        let g = solve_shifted(&id, C64::from(2.0), &tol).unwrap();
        assert!(close(&g, &id.scale(-1.0), 1e-15));
        assert!(matches!(
            solve_shifted(&diag(&[1.0, 2.0]), C64::from(2.0), &tol),
            Err(Error::ShiftOnSpectrum { .. })
        ));
    }

    #[test]
    fn norm_examples() {
        assert!((op_norm(&diag(&[1.0, -3.0])) - 3.0).abs() < 1e-15);
        assert_eq!(op_norm(&Operator::zeros(BasisTag::ungraded(2, 1))), 0.0);
        let ones = Operator::from_fn(BasisTag::ungraded(2, 1), |_, _| C64::from(1.0));
        assert!((op_norm(&ones) - 2.0).abs() < 1e-15);
    }

    #[test]
    fn tolerances_validation() {
        assert!(Tolerances::default().validate().is_ok());
        let bad = Tolerances {
            kernel_rel: 1.5,
            ..Tolerances::default()
        };
        assert!(bad.validate().is_err());
        let bad = Tolerances {
            interior_tol: 0.0,
            ..Tolerances::default()
        };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn blocks_round_trip() {
        let b = BasisTag::ungraded(2, 1);
        let ops: Vec<Operator> = (0..4)
            .map(|k| Operator::from_fn(b, |i, j| C64::new((k * 4 + i * 2 + j) as f64, 0.0)))
            .collect();
        let g = Operator::from_blocks(&ops[0], &ops[1], &ops[2], &ops[3]).unwrap();
        assert_eq!(g.block(Sector::Plus, Sector::Minus).unwrap(), ops[1]);
        assert_eq!(g.block(Sector::Minus, Sector::Plus).unwrap(), ops[2]);
        let off = g.off_diagonal_part().unwrap();
        assert_eq!(off.block(Sector::Plus, Sector::Plus).unwrap(), Operator::zeros(b));
    }
}
