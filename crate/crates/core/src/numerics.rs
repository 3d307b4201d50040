//! Dense complex linear algebra at desk scale.
//!
//! Vectors and matrices here are small (dimension ≤ 128), so everything is
//! plain `Vec<Complex64>` storage with explicit loops. Tolerances are always
//! passed in explicitly through [`Tolerances`].

use std::fmt;
use std::ops::Index;

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type ComplexScalar = Complex64;

/// ω = e^{2πi/3}, the primitive cube root of unity.
pub fn omega() -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI / 3.0)
}

/// Relative window inside which two moduli count as tied when choosing the
/// canonical phase reference entry.
const PHASE_TIE_WINDOW: f64 = 1e-12;

/// Numerical thresholds used by every check in the crate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances {
    /// Orthogonality threshold on overlap moduli and Gram deviations.
    pub orth: f64,
    /// Normalization threshold on `|<v|v> - 1|`.
    pub unit: f64,
    /// Singular-value cutoff for numeric rank.
    pub rank: f64,
    /// Ray equality: `|<x|y>| >= 1 - ray`.
    pub ray: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            orth: 1e-9,
            unit: 1e-9,
            rank: 1e-8,
            ray: 1e-8,
        }
    }
}

impl Tolerances {
    pub fn new(orth: f64, unit: f64, rank: f64, ray: f64) -> Result<Self> {
        let tol = Tolerances {
            orth,
            unit,
            rank,
            ray,
        };
        tol.validate()?;
        Ok(tol)
    }

    pub fn with_orth(self, orth: f64) -> Result<Self> {
        Tolerances::new(orth, self.unit, self.rank, self.ray)
    }

    pub fn with_rank(self, rank: f64) -> Result<Self> {
        Tolerances::new(self.orth, self.unit, rank, self.ray)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, value) in [
            ("orth", self.orth),
            ("unit", self.unit),
            ("rank", self.rank),
            ("ray", self.ray),
        ] {
            if !(value > 0.0 && value < 1e-3) {
                return Err(Error::InvalidTolerance(format!(
                    "{name} = {value} must lie in (0, 1e-3)"
                )));
            }
        }
        Ok(())
    }
}

/* Vectors ********************************************************************/

#[derive(Clone, Debug, PartialEq)]
pub struct ComplexVector {
    entries: Vec<Complex64>,
}

impl ComplexVector {
    /// Wraps entries produced by arithmetic on finite data.
    ///
    /// Panics on an empty vector. Use [`ComplexVector::try_new`] for data
    /// coming from outside the crate.
    pub fn new(entries: Vec<Complex64>) -> Self {
        assert!(!entries.is_empty(), "complex vector must have dim >= 1");
        ComplexVector { entries }
    }

    pub fn try_new(entries: Vec<Complex64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::Shape("vector must have at least one entry".into()));
        }
        if entries
            .iter()
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::NonFinite);
        }
        Ok(ComplexVector { entries })
    }

    pub fn from_real(values: &[f64]) -> Self {
        ComplexVector::new(values.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    /// Standard basis vector `e_k` of `C^dim`.
    pub fn basis(dim: usize, k: usize) -> Self {
        let mut entries = vec![Complex64::new(0.0, 0.0); dim];
        entries[k] = Complex64::new(1.0, 0.0);
        ComplexVector::new(entries)
    }

    pub fn zeros(dim: usize) -> Self {
        ComplexVector::new(vec![Complex64::new(0.0, 0.0); dim])
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<Complex64> {
        self.entries
    }

    pub fn norm_sqr(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn is_unit(&self, tol: &Tolerances) -> bool {
        (self.norm_sqr() - 1.0).abs() <= tol.unit
    }

    pub fn scale(&self, c: Complex64) -> Self {
        ComplexVector::new(self.entries.iter().map(|&z| z * c).collect())
    }

    /// Returns `None` for the zero vector.
    pub fn normalized(&self) -> Option<Self> {
        let norm = self.norm();
        if norm == 0.0 || !norm.is_finite() {
            return None;
        }
        Some(self.scale(Complex64::new(1.0 / norm, 0.0)))
    }

    /// `self - c·other`, assuming equal dimensions.
    fn sub_scaled(&mut self, c: Complex64, other: &ComplexVector) {
        for (x, y) in self.entries.iter_mut().zip(&other.entries) {
            *x -= c * y;
        }
    }

    /// The unit scalar `p` such that `self * conj(p)` has its reference entry
    /// real and positive. The reference entry is the first one whose modulus
    /// is within a relative 1e-12 of the largest modulus.
    pub fn phase_reference(&self) -> Complex64 {
        let max = self.entries.iter().map(|z| z.norm()).fold(0.0, f64::max);
        if max == 0.0 {
            return Complex64::new(1.0, 0.0);
        }
        let z = self
            .entries
            .iter()
            .find(|z| z.norm() >= max * (1.0 - PHASE_TIE_WINDOW))
            .expect("some entry attains the maximum");
        z / z.norm()
    }

    /// Multiplies by a unit scalar so that the largest-modulus entry is real
    /// and positive (ties go to the lowest index).
    pub fn canonical_phase(&self) -> Self {
        self.scale(self.phase_reference().conj())
    }

    pub fn max_abs_diff(&self, other: &ComplexVector) -> f64 {
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max)
    }
}

impl Index<usize> for ComplexVector {
    type Output = Complex64;

    fn index(&self, idx: usize) -> &Complex64 {
        &self.entries[idx]
    }
}

impl From<Vec<Complex64>> for ComplexVector {
    fn from(entries: Vec<Complex64>) -> Self {
        ComplexVector::new(entries)
    }
}

impl fmt::Display for ComplexVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, z) in self.entries.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write_scalar(f, *z)?;
        }
        write!(f, ")")
    }
}

fn write_scalar(f: &mut fmt::Formatter<'_>, z: Complex64) -> fmt::Result {
    let clean = |x: f64| if x.abs() < 5e-13 { 0.0 } else { x };
    let (re, im) = (clean(z.re), clean(z.im));
    match (re == 0.0, im == 0.0) {
        (_, true) => write!(f, "{re:.6}"),
        (true, false) => write!(f, "{im:.6}i"),
        (false, false) => write!(f, "{re:.6}{im:+.6}i"),
    }
}

/// ⟨x|y⟩ = Σ conj(x_k)·y_k.
pub fn inner(x: &ComplexVector, y: &ComplexVector) -> Result<Complex64> {
    if x.dim() != y.dim() {
        return Err(Error::DimMismatch {
            left: x.dim(),
            right: y.dim(),
        });
    }
    Ok(inner_unchecked(x, y))
}

pub(crate) fn inner_unchecked(x: &ComplexVector, y: &ComplexVector) -> Complex64 {
    x.entries
        .iter()
        .zip(&y.entries)
        .map(|(a, b)| a.conj() * b)
        .sum()
}

/// Largest `| <v_i|v_j> - δ_ij |` over a family of equal-dimension vectors.
pub fn gram_residual(vs: &[ComplexVector]) -> f64 {
    let mut worst: f64 = 0.0;
    for (i, x) in vs.iter().enumerate() {
        for (j, y) in vs.iter().enumerate().skip(i) {
            let g = inner_unchecked(x, y);
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((g - target).norm());
        }
    }
    worst
}

/* Matrices *******************************************************************/

/// Row-major dense complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        ComplexMatrix {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = ComplexMatrix::zeros(dim, dim);
        for k in 0..dim {
            m[(k, k)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_row_major(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if rows == 0 || cols == 0 || data.len() != rows * cols {
            return Err(Error::Shape(format!(
                "{} entries cannot fill a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(ComplexMatrix { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Shape("ragged rows".into()));
        }
        ComplexMatrix::from_row_major(rows.len(), cols, rows.concat())
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(columns: &[ComplexVector]) -> Result<Self> {
        let rows = columns.first().map_or(0, ComplexVector::dim);
        if let Some(bad) = columns.iter().find(|c| c.dim() != rows) {
            return Err(Error::DimMismatch {
                left: rows,
                right: bad.dim(),
            });
        }
        if columns.is_empty() {
            return Err(Error::Shape("no columns".into()));
        }
        let mut m = ComplexMatrix::zeros(rows, columns.len());
        for (c, col) in columns.iter().enumerate() {
            for r in 0..rows {
                m[(r, c)] = col[r];
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn column(&self, c: usize) -> ComplexVector {
        ComplexVector::new((0..self.rows).map(|r| self[(r, c)]).collect())
    }

    pub fn columns(&self) -> Vec<ComplexVector> {
        (0..self.cols).map(|c| self.column(c)).collect()
    }

    pub fn scale(&self, c: Complex64) -> Self {
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| z * c).collect(),
        }
    }

    pub fn adjoint(&self) -> Self {
        let mut out = ComplexMatrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out[(c, r)] = self[(r, c)].conj();
            }
        }
        out
    }

    pub fn matmul(&self, rhs: &ComplexMatrix) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::DimMismatch {
                left: self.cols,
                right: rhs.rows,
            });
        }
        let mut out = ComplexMatrix::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(r, k)];
                for c in 0..rhs.cols {
                    out[(r, c)] += a * rhs[(k, c)];
                }
            }
        }
        Ok(out)
    }

    /// Kronecker product `self ⊗ rhs`.
    pub fn kron(&self, rhs: &ComplexMatrix) -> Self {
        let mut out = ComplexMatrix::zeros(self.rows * rhs.rows, self.cols * rhs.cols);
        for r1 in 0..self.rows {
            for c1 in 0..self.cols {
                let a = self[(r1, c1)];
                for r2 in 0..rhs.rows {
                    for c2 in 0..rhs.cols {
                        out[(r1 * rhs.rows + r2, c1 * rhs.cols + c2)] = a * rhs[(r2, c2)];
                    }
                }
            }
        }
        out
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entrywise modulus of `self - rhs`.
    pub fn max_abs_diff(&self, rhs: &ComplexMatrix) -> f64 {
        self.data
            .iter()
            .zip(&rhs.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Largest entrywise modulus of `selfᴴ·self - I`.
    pub fn unitarity_residual(&self) -> f64 {
        gram_residual(&self.columns())
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    fn index(&self, (r, c): (usize, usize)) -> &Complex64 {
        &self.data[r * self.cols + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Complex64 {
        &mut self.data[r * self.cols + c]
    }
}

/* Orthonormalization and subspaces *******************************************/

/// A subspace of `C^ambient_dim`, stored as a matrix with orthonormal columns.
#[derive(Clone, Debug, PartialEq)]
pub struct Subspace {
    basis: ComplexMatrix,
}

impl Subspace {
    pub fn ambient_dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn basis(&self) -> &ComplexMatrix {
        &self.basis
    }

    pub fn basis_vectors(&self) -> Vec<ComplexVector> {
        self.basis.columns()
    }

    /// Orthogonal projector `basis·basisᴴ`.
    pub fn projector(&self) -> ComplexMatrix {
        self.basis
            .matmul(&self.basis.adjoint())
            .expect("shapes agree by construction")
    }

    /// Largest overlap modulus between the two subspaces' basis vectors; zero
    /// when the subspaces are mutually orthogonal.
    pub fn max_cross_overlap(&self, other: &Subspace) -> f64 {
        let cross = self
            .basis
            .adjoint()
            .matmul(&other.basis)
            .expect("ambient dims checked by caller");
        cross.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

/// Modified Gram–Schmidt with one re-orthogonalization pass.
///
/// Vectors whose residual norm falls below `tol.rank` (relative to the
/// largest input norm) are dropped, so the output dimension is the numeric
/// rank of the input.
pub fn orthonormalize(vs: &[ComplexVector], tol: &Tolerances) -> Result<Subspace> {
    let first = vs.first().ok_or(Error::ZeroSpan)?;
    let dim = first.dim();
    if let Some(bad) = vs.iter().find(|v| v.dim() != dim) {
        return Err(Error::DimMismatch {
            left: dim,
            right: bad.dim(),
        });
    }
    let scale = vs.iter().map(ComplexVector::norm).fold(0.0, f64::max);
    if scale == 0.0 {
        return Err(Error::ZeroSpan);
    }

    let mut out: Vec<ComplexVector> = Vec::with_capacity(dim);
    for v in vs {
        if out.len() == dim {
            break;
        }
        let mut w = v.clone();
        for _pass in 0..2 {
            for q in &out {
                let c = inner_unchecked(q, &w);
                w.sub_scaled(c, q);
            }
        }
        let norm = w.norm();
        if norm > tol.rank * scale {
            out.push(w.scale(Complex64::new(1.0 / norm, 0.0)));
        }
    }
    if out.is_empty() {
        return Err(Error::ZeroSpan);
    }
    Ok(Subspace {
        basis: ComplexMatrix::from_columns(&out)?,
    })
}

/// Singular values `σ₁ ≥ σ₂ ≥ 0` of a 2×n matrix.
///
/// Uses the eigenvalues of the 2×2 Gram `M·Mᴴ`: the larger from the
/// trace/discriminant formula and the smaller as `det/λ₁`, with the
/// determinant summed over 2×2 minors (Cauchy–Binet) so that nearly
/// rank-one inputs keep full relative accuracy in σ₂.
pub fn singular_values_2xn(m: &ComplexMatrix) -> Result<(f64, f64)> {
    if m.rows() != 2 {
        return Err(Error::Shape(format!(
            "expected a 2xn matrix, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    let n = m.cols();
    let (mut p, mut q) = (0.0, 0.0);
    let mut c = Complex64::new(0.0, 0.0);
    for j in 0..n {
        p += m[(0, j)].norm_sqr();
        q += m[(1, j)].norm_sqr();
        c += m[(0, j)] * m[(1, j)].conj();
    }
    let mut det = 0.0;
    for j in 0..n {
        for k in (j + 1)..n {
            det += (m[(0, j)] * m[(1, k)] - m[(0, k)] * m[(1, j)]).norm_sqr();
        }
    }
    let half_gap = 0.5 * (p - q);
    let lambda1 = 0.5 * (p + q) + (half_gap * half_gap + c.norm_sqr()).sqrt();
    if lambda1 == 0.0 {
        return Ok((0.0, 0.0));
    }
    let lambda2 = (det / lambda1).min(lambda1);
    Ok((lambda1.sqrt(), lambda2.max(0.0).sqrt()))
}

/// Whether two subspaces coincide: equal dimension and projector Frobenius
/// distance at most `sqrt(2·dim)·tol.orth`.
pub fn subspace_equal(s: &Subspace, t: &Subspace, tol: &Tolerances) -> Result<bool> {
    if s.ambient_dim() != t.ambient_dim() {
        return Err(Error::DimMismatch {
            left: s.ambient_dim(),
            right: t.ambient_dim(),
        });
    }
    if s.dim() != t.dim() {
        return Ok(false);
    }
    Ok(projector_distance(s, t) <= (2.0 * s.dim() as f64).sqrt() * tol.orth)
}

pub fn projector_distance(s: &Subspace, t: &Subspace) -> f64 {
    let (ps, pt) = (s.projector(), t.projector());
    ps.data
        .iter()
        .zip(&pt.data)
        .map(|(a, b)| (a - b).norm_sqr())
        .sum::<f64>()
        .sqrt()
}
