//! 3×3 complex Hermitian algebra and the Gell-Mann-type basis `e_0 … e_8`.
//!
//! Every [`Hermitian3`] is exactly Hermitian: the constructor symmetrizes its
//! input as `(M + M†)/2` and zeroes the imaginary part of the diagonal, after
//! rejecting inputs whose anti-Hermitian part is larger than
//! [`HERMITICITY_TOLERANCE`] (relative to the entry scale).

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{Matrix3, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// General complex 3×3 matrix (products of Hermitian matrices land here).
pub type Matrix3c = Matrix3<Complex64>;

/// Largest anti-Hermitian part tolerated by [`Hermitian3::new`], relative to `max(1, max|m_ij|)`.
pub const HERMITICITY_TOLERANCE: f64 = 1e-12;

#[cfg(test)]
const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// A 3×3 complex Hermitian matrix.
#[derive(Clone, Copy, PartialEq)]
pub struct Hermitian3(Matrix3c);

impl Hermitian3 {
    /// Validates and symmetrizes `m`.
    ///
    /// Fails when an entry is not finite or when `|m_ij − conj(m_ji)|` exceeds the
    /// tolerance; a large anti-Hermitian part is a defect upstream, not rounding.
    pub fn new(m: Matrix3c) -> Result<Self> {
        if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Argument("non-finite matrix entry".into()));
        }
        let scale = m.iter().map(|z| z.norm()).fold(1.0_f64, f64::max);
        let mut defect = 0.0_f64;
        for i in 0..3 {
            for j in 0..3 {
                defect = defect.max((m[(i, j)] - m[(j, i)].conj()).norm());
            }
        }
        if defect > HERMITICITY_TOLERANCE * scale {
            return Err(Error::Argument(format!(
                "matrix is not Hermitian (anti-Hermitian part {defect:.3e})"
            )));
        }
        Ok(Self::symmetrized(m))
    }

    pub(crate) fn symmetrized(m: Matrix3c) -> Self {
        let mut h = (m + m.adjoint()).scale(0.5);
        for i in 0..3 {
            h[(i, i)].im = 0.0;
        }
        Hermitian3(h)
    }

    pub fn zero() -> Self {
        Hermitian3(Matrix3c::zeros())
    }

    pub fn identity() -> Self {
        Hermitian3(Matrix3c::identity())
    }

    /// Real diagonal matrix `diag(d_0, d_1, d_2)`.
    pub fn from_diagonal(d: [f64; 3]) -> Self {
        let mut m = Matrix3c::zeros();
        for (i, v) in d.iter().enumerate() {
            m[(i, i)] = Complex64::new(*v, 0.0);
        }
        Hermitian3(m)
    }

    /// Builds a matrix from rows of `(re, im)` pairs. Convenience for tests and fixtures.
    pub fn from_rows(rows: [[(f64, f64); 3]; 3]) -> Result<Self> {
        let mut m = Matrix3c::zeros();
        for i in 0..3 {
            for j in 0..3 {
                m[(i, j)] = Complex64::new(rows[i][j].0, rows[i][j].1);
            }
        }
        Self::new(m)
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.0[(i, j)]
    }

    #[inline]
    pub fn as_matrix(&self) -> &Matrix3c {
        &self.0
    }

    pub fn into_matrix(self) -> Matrix3c {
        self.0
    }

    /// `max_ij |h_ij|`.
    pub fn max_abs(&self) -> f64 {
        self.0.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn scale(&self, c: f64) -> Self {
        Hermitian3(self.0.scale(c))
    }

    /// `H·H`, which is again Hermitian.
    pub fn square(&self) -> Self {
        Self::symmetrized(self.0 * self.0)
    }

    pub fn trace(&self) -> f64 {
        (0..3).map(|i| self.0[(i, i)].re).sum()
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> [f64; 3] {
        let eig = SymmetricEigen::new(self.0);
        let mut ev = [eig.eigenvalues[0], eig.eigenvalues[1], eig.eigenvalues[2]];
        ev.sort_by(f64::total_cmp);
        ev
    }

    /// Relabels rows and columns: the result has entry `(i, j)` equal to `self(perm[i], perm[j])`.
    ///
    /// This is conjugation `Π H Πᵀ` by the permutation matrix with `Π_{i, perm[i]} = 1`.
    pub fn permuted(&self, perm: [usize; 3]) -> Self {
        let mut m = Matrix3c::zeros();
        for i in 0..3 {
            for j in 0..3 {
                m[(i, j)] = self.0[(perm[i], perm[j])];
            }
        }
        Hermitian3(m)
    }

    /// Entrywise max-modulus distance.
    pub fn max_abs_diff(&self, other: &Hermitian3) -> f64 {
        (self.0 - other.0).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

impl fmt::Debug for Hermitian3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("Hermitian3[")?;
        for i in 0..3 {
            f.write_str(if i == 0 { "[" } else { ", [" })?;
            for j in 0..3 {
                let z = self.0[(i, j)];
                if j > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{}{:+}i", z.re, z.im)?;
            }
            f.write_str("]")?;
        }
        f.write_str("]")
    }
}

impl Add for Hermitian3 {
    type Output = Hermitian3;
    fn add(self, rhs: Hermitian3) -> Hermitian3 {
        Hermitian3(self.0 + rhs.0)
    }
}

impl Sub for Hermitian3 {
    type Output = Hermitian3;
    fn sub(self, rhs: Hermitian3) -> Hermitian3 {
        Hermitian3(self.0 - rhs.0)
    }
}

impl Neg for Hermitian3 {
    type Output = Hermitian3;
    fn neg(self) -> Hermitian3 {
        Hermitian3(-self.0)
    }
}

impl Mul<Hermitian3> for f64 {
    type Output = Hermitian3;
    fn mul(self, rhs: Hermitian3) -> Hermitian3 {
        rhs.scale(self)
    }
}

/// Serialized as three rows of `[re, im]` pairs.
impl Serialize for Hermitian3 {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: [[[f64; 2]; 3]; 3] = std::array::from_fn(|i| {
            std::array::from_fn(|j| {
                let z = self.0[(i, j)];
                [z.re, z.im]
            })
        });
        rows.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Hermitian3 {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows = <[[[f64; 2]; 3]; 3]>::deserialize(d)?;
        let mut m = Matrix3c::zeros();
        for i in 0..3 {
            for j in 0..3 {
                m[(i, j)] = Complex64::new(rows[i][j][0], rows[i][j][1]);
            }
        }
        Hermitian3::new(m).map_err(serde::de::Error::custom)
    }
}

/// Gell-Mann-type basis element `e_index`; `e_0` is the identity.
///
/// Indexing follows the subscripts of the basis used by the catalog:
/// `e_1, e_4, e_6` are the real symmetric off-diagonal units on (1,2), (1,3), (2,3),
/// `e_2, e_5, e_7` the imaginary antisymmetric ones on the same pairs,
/// `e_3 = diag(1, −1, 0)` and `e_8 = diag(0, 0, 1)`.
pub fn basis_element(index: usize) -> Result<Hermitian3> {
    let mut m = Matrix3c::zeros();
    match index {
        0 => return Ok(Hermitian3::identity()),
        1 => {
            m[(0, 1)] = ONE;
            m[(1, 0)] = ONE;
        }
        2 => {
            m[(0, 1)] = -I;
            m[(1, 0)] = I;
        }
        3 => {
            m[(0, 0)] = ONE;
            m[(1, 1)] = -ONE;
        }
        4 => {
            m[(0, 2)] = ONE;
            m[(2, 0)] = ONE;
        }
        5 => {
            m[(0, 2)] = -I;
            m[(2, 0)] = I;
        }
        6 => {
            m[(1, 2)] = ONE;
            m[(2, 1)] = ONE;
        }
        7 => {
            m[(1, 2)] = -I;
            m[(2, 1)] = I;
        }
        8 => {
            m[(2, 2)] = ONE;
        }
        _ => {
            return Err(Error::Argument(format!(
                "basis index {index} out of range 0..=8"
            )))
        }
    }
    Ok(Hermitian3(m))
}

/// `e(index)` for indices known to be valid.
pub(crate) fn e(index: usize) -> Hermitian3 {
    basis_element(index).expect("basis index in range")
}

/// Real linear combination `Σ c_i M_i`; the empty sum is the zero matrix.
pub fn combine(terms: &[(f64, Hermitian3)]) -> Hermitian3 {
    terms
        .iter()
        .fold(Hermitian3::zero(), |acc, (c, m)| acc + m.scale(*c))
}

/// Ordinary matrix product. Not Hermitian in general.
pub fn matmul(a: &Hermitian3, b: &Hermitian3) -> Matrix3c {
    a.0 * b.0
}

/// `{A, B} = AB + BA`.
pub fn anticommutator(a: &Hermitian3, b: &Hermitian3) -> Hermitian3 {
    let m = a.0 * b.0 + b.0 * a.0;
    debug_assert!(
        (0..3).all(|i| (0..3).all(|j| (m[(i, j)] - m[(j, i)].conj()).norm()
            <= HERMITICITY_TOLERANCE * m.iter().map(|z| z.norm()).fold(1.0, f64::max))),
        "anticommutator lost Hermiticity"
    );
    Hermitian3::symmetrized(m)
}
