//! Residuals of the determining equations and of the shape-invariance identity.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::catalog::{EndKind, NuClass, SuperpotentialInstance};
use crate::error::{Error, Result};
use crate::hermitian::{anticommutator, Hermitian3};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EquationId {
    QEq,
    PEq,
    RConst,
    RSquare,
    PRAnti,
    ShapeInv,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub a: f64,
    pub b: f64,
    pub points: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResidualReport {
    pub entry_id: String,
    pub k: f64,
    pub equation_id: EquationId,
    pub sup_norm: f64,
    pub tol: f64,
    pub pass: bool,
    pub grid: GridSpec,
}

/// Gauge-fixed energy constant `c_k = νk² − ω²/k²`.
pub fn c_constant(nu: f64, omega: f64, k: f64) -> Result<f64> {
    if k == 0.0 || !k.is_finite() {
        return Err(Error::Argument(format!("c_k needs finite k ≠ 0, got {k}")));
    }
    Ok(nu * k * k - omega * omega / (k * k))
}

/// Window on which residuals are sampled.
///
/// Singular ends are pulled in by `0.1/λ` (0.1 for rational families) and truncated
/// ends are brought to within `5/λ` (40 for rational families) so that the largest
/// sampled entries of `W` stay moderate; absolute residuals near a pole or deep in an
/// exponential tail only measure cancellation error.
pub fn verification_window(inst: &SuperpotentialInstance) -> (f64, f64) {
    let sp = &inst.superpotential;
    let (margin, clip) = match sp.nu_class() {
        NuClass::Zero => (0.1, 40.0),
        _ => (0.1 / sp.lambda(), 5.0 / sp.lambda()),
    };
    let d = inst.domain;
    let margin = margin.min(0.1 * d.width());
    let mut a = d.a;
    let mut b = d.b;
    if d.left == EndKind::Singular {
        a += margin;
    }
    if d.right == EndKind::Singular {
        b -= margin;
    }
    if d.left == EndKind::Truncated {
        a = a.max((-clip).min(b - clip));
    }
    if d.right == EndKind::Truncated {
        b = b.min(clip.max(a + clip));
    }
    (a, b)
}

/// `n` Chebyshev–Gauss points in `(a, b)`, ascending, endpoints excluded.
pub fn chebyshev_grid(a: f64, b: f64, n: usize) -> Vec<f64> {
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    (0..n)
        .rev()
        .map(|j| mid + half * (PI * (2 * j + 1) as f64 / (2 * n) as f64).cos())
        .collect()
}

fn grid_for(inst: &SuperpotentialInstance, points: usize) -> Result<(GridSpec, Vec<f64>)> {
    if points < 2 {
        return Err(Error::Argument(format!("need at least 2 grid points, got {points}")));
    }
    let (a, b) = verification_window(inst);
    if !(a < b) {
        return Err(Error::Domain(format!("empty verification window ({a}, {b})")));
    }
    Ok((GridSpec { a, b, points }, chebyshev_grid(a, b, points)))
}

fn report(
    inst: &SuperpotentialInstance,
    k: f64,
    equation_id: EquationId,
    sup_norm: f64,
    tol: f64,
    grid: GridSpec,
) -> ResidualReport {
    ResidualReport {
        entry_id: inst.entry_id(),
        k,
        equation_id,
        sup_norm,
        tol,
        pass: sup_norm < tol,
        grid,
    }
}

fn sup(acc: f64, m: &Hermitian3) -> f64 {
    let v = m.max_abs();
    // NaN must win so that a broken evaluation never passes
    if v.is_nan() || acc.is_nan() {
        f64::NAN
    } else {
        acc.max(v)
    }
}

/// One report per determining equation (μ = κ = 0), in the order
/// QEq, PEq, RConst, RSquare, PRAnti.
pub fn check_determining(
    inst: &SuperpotentialInstance,
    grid_points: usize,
    tol: f64,
) -> Result<Vec<ResidualReport>> {
    let (spec, xs) = grid_for(inst, grid_points)?;
    let sp = &inst.superpotential;
    let nu_i = Hermitian3::identity().scale(sp.nu);
    let r = sp.r;
    let r0 = inst.evaluate_r();
    let mut q_eq = 0.0;
    let mut p_eq = 0.0;
    let mut r_const = 0.0;
    let mut pr = 0.0;
    for &x in &xs {
        let q = inst.evaluate_q(x)?;
        let dq = inst.evaluate_q_derivative(x)?;
        let p = inst.evaluate_p(x)?;
        let dp = inst.evaluate_p_derivative(x)?;
        q_eq = sup(q_eq, &(dq - q.square() - nu_i));
        p_eq = sup(p_eq, &(dp - anticommutator(&p, &q).scale(0.5)));
        r_const = sup(r_const, &(inst.evaluate_r() - r0));
        pr = sup(pr, &anticommutator(&p, &r));
    }
    let r_sq = (r.square() - Hermitian3::identity().scale(sp.omega * sp.omega)).max_abs();
    let k = inst.k;
    Ok(vec![
        report(inst, k, EquationId::QEq, q_eq, tol, spec),
        report(inst, k, EquationId::PEq, p_eq, tol, spec),
        report(inst, k, EquationId::RConst, r_const, tol, spec),
        report(inst, k, EquationId::RSquare, r_sq, tol, spec),
        report(inst, k, EquationId::PRAnti, pr, tol, spec),
    ])
}

/// Sup-norm of `W_k² + W_k' − W_{k+1}² + W_{k+1}' − C_k I` at the instance's k.
pub fn check_shape_invariance(
    inst: &SuperpotentialInstance,
    grid_points: usize,
    tol: f64,
) -> Result<ResidualReport> {
    let (spec, xs) = grid_for(inst, grid_points)?;
    let k = inst.k;
    let sp = &inst.superpotential;
    let ck = c_constant(sp.nu, sp.omega, k + 1.0)? - c_constant(sp.nu, sp.omega, k)?;
    let ck_i = Hermitian3::identity().scale(ck);
    let mut res = 0.0;
    for &x in &xs {
        let w0 = inst.w_at(k, x)?;
        let dw0 = inst.w_prime_at(k, x)?;
        let w1 = inst.w_at(k + 1.0, x)?;
        let dw1 = inst.w_prime_at(k + 1.0, x)?;
        res = sup(res, &(w0.square() + dw0 - w1.square() + dw1 - ck_i));
    }
    Ok(report(inst, k, EquationId::ShapeInv, res, tol, spec))
}

pub fn reports_to_json(reports: &[ResidualReport]) -> Result<String> {
    Ok(serde_json::to_string_pretty(reports)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{
        enumerate_catalog, find_entry, PTerm, Envelope, ProfileKind, ScalarProfile, Superpotential,
    };
    use crate::hermitian::e;

    /// The energy step as printed, with μ = κ = 0.
    fn printed_step(nu: f64, omega: f64, k: f64) -> f64 {
        (2.0 * k + 1.0) * nu + (2.0 * k + 1.0) * omega * omega / (k * k * (k + 1.0) * (k + 1.0))
    }

    #[test]
    fn c_constant_examples() {
        assert_eq!(c_constant(1.0, 1.0, 1.0).unwrap(), 0.0);
        assert_eq!(c_constant(-1.0, 1.0, 2.0).unwrap(), -4.25);
        assert!(c_constant(1.0, 1.0, 0.0).is_err());
        for k in [0.5, 1.0, 2.0, 3.5, 10.0] {
            for (nu, om) in [(1.0, 1.0), (-2.0, 0.3), (0.0, 1.7)] {
                let d = c_constant(nu, om, k + 1.0).unwrap() - c_constant(nu, om, k).unwrap();
                assert!((d - printed_step(nu, om, k)).abs() < 1e-12, "k = {k}");
            }
        }
    }

    #[test]
    fn chebyshev_points_are_interior_and_ascending() {
        let xs = chebyshev_grid(-1.0, 2.0, 50);
        assert!(xs.windows(2).all(|w| w[0] < w[1]));
        assert!(xs[0] > -1.0 && xs[49] < 2.0);
    }

    #[test]
    fn default_catalog_passes() {
        for entry in enumerate_catalog() {
            let inst = SuperpotentialInstance::with_defaults(&entry, 1.0).unwrap();
            for r in check_determining(&inst, 200, 1e-10).unwrap() {
                assert!(r.pass, "{} {:?}: {:e}", entry.id, r.equation_id, r.sup_norm);
            }
            let r = check_shape_invariance(&inst, 200, 1e-9).unwrap();
            assert!(r.pass, "{} shape: {:e}", entry.id, r.sup_norm);
        }
    }

    #[test]
    fn perturbed_p_fails() {
        let entry = find_entry("P.b1.02+Q.h1.ddd+R.11p").unwrap();
        let mut inst = SuperpotentialInstance::with_defaults(&entry, 1.0).unwrap();
        inst.superpotential.p.push(PTerm {
            coeff: 0.01,
            matrix: e(1),
            envelope: Envelope::constant(),
        });
        let reps = check_determining(&inst, 200, 1e-10).unwrap();
        assert!(reps
            .iter()
            .any(|r| matches!(r.equation_id, EquationId::PEq | EquationId::PRAnti) && !r.pass));
    }

    #[test]
    fn non_scalar_r_square_fails() {
        let q = ScalarProfile::new(ProfileKind::NegTanh, 1.0, 0.0).unwrap();
        let sp = Superpotential::with_inferred_omega([q; 3], vec![], Hermitian3::from_diagonal([1.0, 1.0, 2.0]))
            .unwrap();
        let inst = SuperpotentialInstance::free_form(sp, 1.0).unwrap();
        let reps = check_determining(&inst, 50, 1e-10).unwrap();
        let rsq = reps.iter().find(|r| r.equation_id == EquationId::RSquare).unwrap();
        assert!(!rsq.pass);
    }
}
