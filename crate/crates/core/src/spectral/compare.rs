use std::io::Write;

use serde::{Deserialize, Serialize};

use super::fd::fd_spectrum;
use super::grid::uniform_grid;
use super::ladder::ladder_level;
use super::energy;
use crate::catalog::SuperpotentialInstance;
use crate::error::{Error, Result};
use crate::verifier::check_shape_invariance;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub level: usize,
    pub algebraic: f64,
    pub fd: f64,
    pub abs_diff: f64,
    /// Distance to the closest computed eigenvalue, whatever its rank.
    pub nearest_abs_diff: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumComparison {
    pub entry_id: String,
    pub k: f64,
    pub grid_size: usize,
    /// `c_{k+1} − c_k`, the scale the tolerance is relative to.
    pub first_gap: f64,
    pub tol: f64,
    /// Number of admissible ladder states for each level n.
    pub degeneracies: Vec<usize>,
    pub rows: Vec<ComparisonRow>,
    pub pass: bool,
}

impl SpectrumComparison {
    /// CSV with columns `level, algebraic, fd, abs_diff`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["level", "algebraic", "fd", "abs_diff"])?;
        for r in &self.rows {
            w.write_record([
                r.level.to_string(),
                r.algebraic.to_string(),
                r.fd.to_string(),
                r.abs_diff.to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Algebraic energies `c_{k+n}` (each repeated by the number of admissible ladder states
/// at level n) against the lowest finite-difference eigenvalues on the instance domain.
///
/// A row passes when `|fd − c| ≤ tol · (c_{k+1} − c_k)`.
pub fn compare_spectra(
    inst: &SuperpotentialInstance,
    n_levels: usize,
    grid_size: usize,
    tol: f64,
) -> Result<SpectrumComparison> {
    let shape = check_shape_invariance(inst, 200, 1e-9)?;
    if !shape.pass {
        return Err(Error::Precondition(format!(
            "{} is not shape invariant at k = {} (residual {:e})",
            inst.entry_id(),
            inst.k,
            shape.sup_norm
        )));
    }
    let xs = uniform_grid(&inst.domain, grid_size);
    let k = inst.k;
    let mut degeneracies = Vec::with_capacity(n_levels + 1);
    let mut expected = Vec::new();
    for level in 0..=n_levels {
        let states = ladder_level(inst, level, &xs)?;
        if states.is_empty() {
            return Err(Error::LadderTruncated {
                level,
                reason: format!(
                    "no admissible state from the ground space at k = {}",
                    k + level as f64
                ),
            });
        }
        degeneracies.push(states.len());
        for s in &states {
            expected.push((level, s.energy));
        }
    }
    let first_gap = energy(inst, k + 1.0)? - energy(inst, k)?;
    // enough eigenvalues to pass the top algebraic level, for the nearest-level diagnostic
    let top = expected.iter().map(|e| e.1).fold(f64::NEG_INFINITY, f64::max);
    let mut m = expected.len() + 4;
    let spectrum = loop {
        let s = fd_spectrum(inst, grid_size, m)?;
        let reached = s.eigenvalues.last().is_some_and(|v| *v > top + first_gap.abs());
        if reached || m >= 4 * expected.len() + 16 || s.eigenvalues.len() < m {
            break s;
        }
        m *= 2;
    };
    let rows: Vec<ComparisonRow> = expected
        .iter()
        .zip(&spectrum.eigenvalues)
        .map(|(&(level, algebraic), &fd)| {
            let abs_diff = (fd - algebraic).abs();
            let nearest_abs_diff = spectrum
                .eigenvalues
                .iter()
                .map(|v| (v - algebraic).abs())
                .fold(f64::INFINITY, f64::min);
            ComparisonRow {
                level,
                algebraic,
                fd,
                abs_diff,
                nearest_abs_diff,
                pass: abs_diff <= tol * first_gap.abs(),
            }
        })
        .collect();
    let pass = rows.len() == expected.len() && rows.iter().all(|r| r.pass);
    Ok(SpectrumComparison {
        entry_id: inst.entry_id(),
        k,
        grid_size,
        first_gap,
        tol,
        degeneracies,
        rows,
        pass,
    })
}
