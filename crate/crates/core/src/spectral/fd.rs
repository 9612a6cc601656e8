use nalgebra::{DMatrix, Matrix3, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::grid::uniform_grid;
use super::potential;
use crate::catalog::SuperpotentialInstance;
use crate::error::{Error, Result};
use crate::hermitian::Hermitian3;

/// Block-tridiagonal `−∂² ⊗ I + V` on `N` interior points with Dirichlet ends.
///
/// Diagonal blocks are `V(x_i) + 2/h² I`, the couplings between neighbours `−I/h²`.
#[derive(Clone, Debug)]
pub struct FdHamiltonian {
    pub xs: Vec<f64>,
    pub h: f64,
    pub diag: Vec<Hermitian3>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FDSpectrum {
    pub grid_size: usize,
    pub eigenvalues: Vec<f64>,
    pub a: f64,
    pub b: f64,
}

const DENSE_MAX_POINTS: usize = 200;
const PAIR_TOLERANCE: f64 = 1e-9;

pub fn fd_hamiltonian(inst: &SuperpotentialInstance, grid_size: usize) -> Result<FdHamiltonian> {
    if grid_size < 16 {
        return Err(Error::Argument(format!("grid_size must be ≥ 16, got {grid_size}")));
    }
    let d = inst.domain;
    let h = d.width() / (grid_size + 1) as f64;
    if !(h > 0.0 && h.is_finite()) || h < 1e-12 * d.a.abs().max(d.b.abs()).max(1.0) {
        return Err(Error::Argument(format!(
            "domain ({}, {}) too small for {grid_size} points",
            d.a, d.b
        )));
    }
    let xs = uniform_grid(&d, grid_size);
    let shift = Hermitian3::identity().scale(2.0 / (h * h));
    let diag = xs
        .iter()
        .map(|&x| {
            let v = potential(inst, x)?;
            if !v.max_abs().is_finite() {
                return Err(Error::Numeric(format!("potential not finite at x = {x}")));
            }
            Ok(v + shift)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(FdHamiltonian { xs, h, diag })
}

impl FdHamiltonian {
    pub fn size(&self) -> usize {
        3 * self.xs.len()
    }

    /// The full `3N × 3N` complex matrix.
    pub fn dense(&self) -> DMatrix<Complex64> {
        let n = self.size();
        let mut m = DMatrix::zeros(n, n);
        let off = Complex64::new(-1.0 / (self.h * self.h), 0.0);
        for (i, block) in self.diag.iter().enumerate() {
            for r in 0..3 {
                for c in 0..3 {
                    m[(3 * i + r, 3 * i + c)] = block.get(r, c);
                }
                if i + 1 < self.diag.len() {
                    m[(3 * i + r, 3 * (i + 1) + r)] = off;
                    m[(3 * (i + 1) + r, 3 * i + r)] = off;
                }
            }
        }
        m
    }

    /// Real symmetric embedding `[[Re, −Im], [Im, Re]]` of size `6N`.
    pub fn doubled(&self) -> DMatrix<f64> {
        let h = self.dense();
        let n = h.nrows();
        let mut m = DMatrix::zeros(2 * n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                let z = h[(i, j)];
                m[(i, j)] = z.re;
                m[(i + n, j + n)] = z.re;
                m[(i, j + n)] = -z.im;
                m[(i + n, j)] = z.im;
            }
        }
        m
    }

    /// All eigenvalues of the doubled matrix, ascending; each physical eigenvalue appears twice.
    pub fn doubled_eigenvalues(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = SymmetricEigen::new(self.doubled()).eigenvalues.iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        ev
    }

    /// Number of eigenvalues strictly below `sigma`, from the inertia of the block
    /// LDL† factorization `S_i = D_i − σ − S_{i−1}^{-1}/h⁴`.
    pub fn count_below(&self, sigma: f64) -> usize {
        let h4 = self.h.powi(4);
        let shift = Matrix3::<Complex64>::identity() * Complex64::from(sigma);
        let mut prev_inv: Option<Matrix3<Complex64>> = None;
        let mut count = 0;
        for d in &self.diag {
            let mut s = d.as_matrix() - shift;
            if let Some(inv) = prev_inv {
                s -= inv / Complex64::from(h4);
            }
            // Hermitize to keep the characteristic polynomial real
            let s = (s + s.adjoint()) * Complex64::from(0.5);
            count += negative_count(&s);
            prev_inv = Some(invert_or_nudge(&s));
        }
        count
    }
}

/// Negative eigenvalues of a 3×3 Hermitian matrix: sign changes of the coefficients of
/// `det(μ + S)`, exact for real-rooted polynomials.
fn negative_count(s: &Matrix3<Complex64>) -> usize {
    let a = |i: usize, j: usize| s[(i, j)];
    let c2 = a(0, 0).re + a(1, 1).re + a(2, 2).re;
    let c1 = a(0, 0).re * a(1, 1).re - a(0, 1).norm_sqr() + a(0, 0).re * a(2, 2).re
        - a(0, 2).norm_sqr()
        + a(1, 1).re * a(2, 2).re
        - a(1, 2).norm_sqr();
    let c0 = s.determinant().re;
    let mut changes = 0;
    let mut last = 1.0f64;
    for c in [c2, c1, c0] {
        if c != 0.0 {
            if c.signum() != last.signum() {
                changes += 1;
            }
            last = c;
        }
    }
    changes
}

fn invert_or_nudge(s: &Matrix3<Complex64>) -> Matrix3<Complex64> {
    if let Some(inv) = s.try_inverse() {
        if inv.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            return inv;
        }
    }
    let scale = s.iter().map(|z| z.norm()).fold(1.0, f64::max);
    let nudged = s + Matrix3::identity() * Complex64::from(scale * f64::EPSILON);
    nudged.try_inverse().unwrap_or_else(Matrix3::zeros)
}

/// Lowest `m` eigenvalues through the doubling embedding and a dense real symmetric solver.
pub fn fd_spectrum_dense(inst: &SuperpotentialInstance, grid_size: usize, m: usize) -> Result<FDSpectrum> {
    let op = fd_hamiltonian(inst, grid_size)?;
    let doubled = op.doubled_eigenvalues();
    if doubled.iter().any(|v| !v.is_finite()) {
        return Err(Error::Numeric("dense eigensolver returned non-finite values".into()));
    }
    let mut ev = Vec::with_capacity(doubled.len() / 2);
    let mut i = 0;
    while i + 1 < doubled.len() && ev.len() < m {
        let (a, b) = (doubled[i], doubled[i + 1]);
        if (a - b).abs() > PAIR_TOLERANCE * a.abs().max(1.0) {
            return Err(Error::Numeric(format!(
                "doubled spectrum not paired at {a} / {b}"
            )));
        }
        ev.push(0.5 * (a + b));
        i += 2;
    }
    Ok(FDSpectrum {
        grid_size,
        eigenvalues: ev,
        a: inst.domain.a,
        b: inst.domain.b,
    })
}

/// Lowest `m` eigenvalues by inertia-count bisection on the block-tridiagonal operator.
pub fn fd_spectrum_banded(inst: &SuperpotentialInstance, grid_size: usize, m: usize) -> Result<FDSpectrum> {
    let op = fd_hamiltonian(inst, grid_size)?;
    let m = m.min(op.size());
    let coupling = 2.0 / (op.h * op.h);
    let lo = op
        .diag
        .iter()
        .map(|d| d.eigenvalues()[0])
        .fold(f64::INFINITY, f64::min)
        - coupling;
    let mut hi = lo + 1.0;
    let mut guard = 0;
    while op.count_below(hi) < m {
        hi = lo + 2.0 * (hi - lo);
        guard += 1;
        if guard > 200 || !hi.is_finite() {
            return Err(Error::Numeric("could not bracket the requested eigenvalues".into()));
        }
    }
    let mut ev = Vec::with_capacity(m);
    let mut left = lo;
    for j in 0..m {
        // smallest σ with count_below(σ) > j
        let (mut a, mut b) = (left, hi);
        for _ in 0..200 {
            let mid = 0.5 * (a + b);
            if mid <= a || mid >= b || b - a <= 1e-13 * mid.abs().max(1.0) {
                break;
            }
            if op.count_below(mid) > j {
                b = mid;
            } else {
                a = mid;
            }
        }
        let value = 0.5 * (a + b);
        ev.push(value);
        left = a;
    }
    Ok(FDSpectrum {
        grid_size,
        eigenvalues: ev,
        a: inst.domain.a,
        b: inst.domain.b,
    })
}

/// Lowest `m` eigenvalues, dense for small grids and by bisection otherwise.
pub fn fd_spectrum(inst: &SuperpotentialInstance, grid_size: usize, m: usize) -> Result<FDSpectrum> {
    if grid_size <= DENSE_MAX_POINTS {
        fd_spectrum_dense(inst, grid_size, m)
    } else {
        fd_spectrum_banded(inst, grid_size, m)
    }
}
