//! Kronecker products on C² ⊗ Cⁿ and their inverse.
//!
//! Coordinates follow the qubit-major convention: entry `k·n + j` of
//! `a ⊗ b` is `a_k·b_j`, so a vector of `C^{2n}` reshapes row-major into a
//! 2×n matrix whose rows belong to the qubit basis states.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::{singular_values_2xn, ComplexMatrix, ComplexVector, Tolerances};

/// A pure product state `a ⊗ b` with `a ∈ C²`, `b ∈ Cⁿ`.
#[derive(Clone, Debug, PartialEq)]
pub struct ProductVector {
    /// Qubit factor, unit and phase-canonical.
    pub a: ComplexVector,
    /// Qudit factor, unit and phase-canonical.
    pub b: ComplexVector,
    /// `kron(a, b)`.
    pub full: ComplexVector,
    /// Unit scalar with `input ≈ phase · full`.
    pub phase: Complex64,
}

impl ProductVector {
    pub fn n(&self) -> usize {
        self.b.dim()
    }
}

/// Outcome of [`factorize`].
#[derive(Clone, Debug, PartialEq)]
pub enum Factorization {
    Product(ProductVector),
    /// The vector is entangled; carries the measured second singular value.
    NotProduct {
        sigma2: f64,
    },
}

impl Factorization {
    pub fn product(&self) -> Option<&ProductVector> {
        match self {
            Factorization::Product(p) => Some(p),
            Factorization::NotProduct { .. } => None,
        }
    }

    pub fn is_product(&self) -> bool {
        matches!(self, Factorization::Product(_))
    }
}

/// `a ⊗ b`.
pub fn kron(a: &ComplexVector, b: &ComplexVector) -> ComplexVector {
    let mut out = Vec::with_capacity(a.dim() * b.dim());
    for ak in a.entries() {
        out.extend(b.entries().iter().map(|bj| ak * bj));
    }
    ComplexVector::new(out)
}

/// Reshapes a vector of `C^{2n}` into its 2×n coefficient matrix.
pub fn reshape_2xn(v: &ComplexVector) -> Result<ComplexMatrix> {
    if !v.dim().is_multiple_of(2) {
        return Err(Error::OddDimension(v.dim()));
    }
    ComplexMatrix::from_row_major(2, v.dim() / 2, v.entries().to_vec())
}

/// Splits a unit vector of `C^{2n}` into `a ⊗ b` if its Schmidt rank is one.
///
/// The vector is accepted iff the second singular value of its 2×n reshape
/// is at most `tol.rank`.
pub fn factorize(v: &ComplexVector, tol: &Tolerances) -> Result<Factorization> {
    let m = reshape_2xn(v)?;
    let deviation = (v.norm_sqr() - 1.0).abs();
    if deviation > tol.unit {
        return Err(Error::NotNormalized { deviation });
    }
    let (_, sigma2) = singular_values_2xn(&m)?;
    if sigma2 > tol.rank {
        return Ok(Factorization::NotProduct { sigma2 });
    }

    let n = m.cols();
    let a = dominant_left_vector(&m).canonical_phase();
    // b = aᴴ·M; with a canonical, kron(a, b) reproduces v with no extra phase.
    let b_raw = ComplexVector::new(
        (0..n)
            .map(|j| a[0].conj() * m[(0, j)] + a[1].conj() * m[(1, j)])
            .collect(),
    );
    let b_norm = b_raw.norm();
    let b_unit = b_raw.scale(Complex64::new(1.0 / b_norm, 0.0));
    let phase = b_unit.phase_reference();
    let b = b_unit.scale(phase.conj());
    let full = kron(&a, &b);
    Ok(Factorization::Product(ProductVector { a, b, full, phase }))
}

/// Unit eigenvector for the larger eigenvalue of `M·Mᴴ`, M being 2×n.
fn dominant_left_vector(m: &ComplexMatrix) -> ComplexVector {
    let (mut p, mut q) = (0.0, 0.0);
    let mut c = Complex64::new(0.0, 0.0);
    for j in 0..m.cols() {
        p += m[(0, j)].norm_sqr();
        q += m[(1, j)].norm_sqr();
        c += m[(0, j)] * m[(1, j)].conj();
    }
    let half_gap = 0.5 * (p - q);
    let lambda1 = 0.5 * (p + q) + (half_gap * half_gap + c.norm_sqr()).sqrt();
    // Two candidate eigenvectors of [[p, c], [c̄, q]]; take the better scaled one.
    let first = ComplexVector::new(vec![c, Complex64::new(lambda1 - p, 0.0)]);
    let second = ComplexVector::new(vec![Complex64::new(lambda1 - q, 0.0), c.conj()]);
    let pick = if first.norm_sqr() >= second.norm_sqr() {
        first
    } else {
        second
    };
    pick.normalized()
        .unwrap_or_else(|| ComplexVector::basis(2, 0))
}

/// The unique (up to phase) qubit state orthogonal to `a`, phase-canonical.
pub fn qubit_orthogonal(a: &ComplexVector) -> Result<ComplexVector> {
    if a.dim() != 2 {
        return Err(Error::DimMismatch {
            left: a.dim(),
            right: 2,
        });
    }
    let raw = ComplexVector::new(vec![-a[1].conj(), a[0].conj()]);
    Ok(raw.normalized().ok_or(Error::ZeroVector)?.canonical_phase())
}
