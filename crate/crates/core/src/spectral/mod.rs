//! Hamiltonians `H_k = −∂² + W_k² − W_k' + c_k`, ladder states and a finite-difference oracle.

mod compare;
mod fd;
mod grid;
mod ladder;

pub use compare::{compare_spectra, ComparisonRow, SpectrumComparison};
pub use fd::{
    fd_hamiltonian, fd_spectrum, fd_spectrum_banded, fd_spectrum_dense, FdHamiltonian, FDSpectrum,
};
pub use grid::{uniform_grid, GridFunction3, Vector3c};
pub use ladder::{
    apply_annihilation, apply_creation, apply_hamiltonian, eigen_residual, excited_state,
    ground_space, ground_state, ladder_level, GroundSpace, LadderResult,
};

use crate::catalog::SuperpotentialInstance;
use crate::error::Result;
use crate::hermitian::Hermitian3;
use crate::verifier::c_constant;

/// `c_k` of the instance's superpotential at shape parameter `k`.
pub fn energy(inst: &SuperpotentialInstance, k: f64) -> Result<f64> {
    c_constant(inst.nu(), inst.omega(), k)
}

/// `V_k(x) = W_k² − W_k' + c_k I` at the instance's k.
pub fn potential(inst: &SuperpotentialInstance, x: f64) -> Result<Hermitian3> {
    potential_at(inst, inst.k, x)
}

/// As [`potential`] at another shape parameter.
pub fn potential_at(inst: &SuperpotentialInstance, k: f64, x: f64) -> Result<Hermitian3> {
    let w = inst.w_at(k, x)?;
    let dw = inst.w_prime_at(k, x)?;
    Ok(w.square() - dw + Hermitian3::identity().scale(energy(inst, k)?))
}
