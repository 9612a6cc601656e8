use nalgebra::{Matrix3, OMatrix, SVD, U3, U6};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::grid::{GridFunction3, Vector3c};
use super::{energy, potential_at};
use crate::catalog::{EndKind, SuperpotentialInstance};
use crate::error::{Error, Result};
use crate::verifier::check_determining;

type M3 = Matrix3<Complex64>;

/// A ladder state together with its bookkeeping.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LadderResult {
    pub state: GridFunction3,
    pub level: usize,
    pub energy: f64,
    pub normalizable: bool,
    /// `‖Hψ − Eψ‖₂ / ‖ψ‖₂` with `H` applied by finite differences.
    pub residual: f64,
    /// Largest end sample over the largest sample.
    pub boundary_amplitude: f64,
}

/// All zero modes of `a_k` found on a grid, plus the best non-normalizable candidate.
#[derive(Clone, Debug)]
pub struct GroundSpace {
    pub k: f64,
    pub energy: f64,
    /// Normalized, mutually orthogonal at the midpoint, in order of boundary smallness.
    pub states: Vec<GridFunction3>,
    pub boundary_amplitudes: Vec<f64>,
    /// The least-growing candidate when `states` is empty.
    pub fallback: Option<(GridFunction3, f64)>,
}

impl GroundSpace {
    pub fn degeneracy(&self) -> usize {
        self.states.len()
    }
}

/// Boundary amplitudes above this are never treated as vanishing, whatever the end type.
const CAP: f64 = 1e12;
/// Singular values of an end-to-midpoint propagator below this fraction of the largest
/// are treated as directions that blow up toward the end.
const RANK_THRESHOLD: f64 = 1e-8;
/// Minimal local power `ψ ~ d^α` at a pole for a solution to count as vanishing there.
const POLE_EXPONENT: f64 = 0.75;
const TRUNCATED_AMPLITUDE: f64 = 1e-4;
const FIXED_AMPLITUDE: f64 = 1e-10;

fn w_matrix(inst: &SuperpotentialInstance, k: f64, x: f64) -> Result<M3> {
    Ok(*inst.w_at(k, x)?.as_matrix())
}

/// Propagator of `Φ' = −WΦ` along `path` (grid indices), with `Φ = I` at the first point.
/// Returns normalized matrices and their accumulated log scales.
fn propagate(inst: &SuperpotentialInstance, k: f64, xs: &[f64], path: &[usize]) -> Result<Vec<(M3, f64)>> {
    let mut out = Vec::with_capacity(path.len());
    let mut phi = M3::identity();
    let mut log_scale = 0.0;
    out.push((phi, log_scale));
    let mut w_here = w_matrix(inst, k, xs[path[0]])?;
    for pair in path.windows(2) {
        let (x0, x1) = (xs[pair[0]], xs[pair[1]]);
        let w_next = w_matrix(inst, k, x1)?;
        let size = w_here.iter().chain(w_next.iter()).map(|z| z.norm()).fold(0.0, f64::max);
        let steps = ((12.0 * size * (x1 - x0).abs()).ceil() as usize).clamp(1, 200_000);
        let dx = (x1 - x0) / steps as f64;
        let mut x = x0;
        let mut w0 = w_here;
        for s in 0..steps {
            let xe = if s + 1 == steps { x1 } else { x + dx };
            let wm = w_matrix(inst, k, x + 0.5 * dx)?;
            let we = if s + 1 == steps { w_next } else { w_matrix(inst, k, xe)? };
            let c = Complex64::from(dx);
            let k1 = -(w0 * phi);
            let k2 = -(wm * (phi + k1 * (c * 0.5)));
            let k3 = -(wm * (phi + k2 * (c * 0.5)));
            let k4 = -(we * (phi + k3 * c));
            let two = Complex64::from(2.0);
            phi += (k1 + k2 * two + k3 * two + k4) * (c / 6.0);
            x = xe;
            w0 = we;
            let m = phi.iter().map(|z| z.norm()).fold(0.0, f64::max);
            if m > 1e100 || (m < 1e-100 && m > 0.0) {
                phi /= Complex64::from(m);
                log_scale += m.ln();
            }
        }
        let m = phi.iter().map(|z| z.norm()).fold(0.0, f64::max);
        if !(m.is_finite() && m > 0.0) {
            return Err(Error::Numeric(format!(
                "fundamental matrix overflowed between x = {x0} and x = {x1}"
            )));
        }
        phi /= Complex64::from(m);
        log_scale += m.ln();
        out.push((phi, log_scale));
        w_here = w_next;
    }
    Ok(out)
}

struct EndData {
    /// Propagated matrices along the path from the end to the midpoint.
    steps: Vec<(M3, f64)>,
    /// SVD of the normalized end-to-midpoint propagator.
    u: M3,
    sigma: [f64; 3],
    v: M3,
    log_scale: f64,
}

fn end_data(steps: Vec<(M3, f64)>) -> EndData {
    let (f, log_scale) = *steps.last().expect("non-empty path");
    let svd = SVD::new(f, true, true);
    let u = svd.u.expect("u requested");
    let v = svd.v_t.expect("v requested").adjoint();
    let s = svd.singular_values;
    EndData {
        steps,
        u,
        sigma: [s[0], s[1], s[2]],
        v,
        log_scale,
    }
}

impl EndData {
    /// Rows mapping a midpoint value to (capped) end amplitudes along the singular directions.
    fn amplitude_rows(&self) -> M3 {
        let mut rows = self.u.adjoint();
        for i in 0..3 {
            let c = ((-self.log_scale).exp() / self.sigma[i]).min(CAP);
            let c = if c.is_finite() { c } else { CAP };
            for j in 0..3 {
                rows[(i, j)] *= Complex64::from(c);
            }
        }
        rows
    }

    /// Weight of `v` along directions that blow up toward this end.
    fn weak_overlap(&self, v: &Vector3c) -> f64 {
        let coords = self.u.adjoint() * v;
        (0..3)
            .filter(|&i| self.sigma[i] < RANK_THRESHOLD * self.sigma[0])
            .map(|i| coords[i].norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Samples along the path for the solution with midpoint value `v`, as
    /// (log-magnitude offset, vector) pairs.
    fn reconstruct(&self, v: &Vector3c) -> Vec<(f64, Vector3c)> {
        let coords = self.u.adjoint() * v;
        let mut y = Vector3c::zeros();
        for i in 0..3 {
            if self.sigma[i] >= RANK_THRESHOLD * self.sigma[0] {
                y += self.v.column(i) * (coords[i] / Complex64::from(self.sigma[i]));
            }
        }
        self.steps
            .iter()
            .map(|(phi, s)| (s - self.log_scale, phi * y))
            .collect()
    }
}

fn classify_end(values: &[Vector3c], xs: &[f64], end: f64, kind: EndKind, at_start: bool) -> bool {
    let n = values.len();
    let max = values.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let (i0, i1) = if at_start { (0, 1) } else { (n - 1, n - 2) };
    let a0 = values[i0].norm();
    let a1 = values[i1].norm();
    match kind {
        EndKind::Singular => {
            if a0 == 0.0 {
                return true;
            }
            let d0 = (xs[i0] - end).abs();
            let d1 = (xs[i1] - end).abs();
            (a1 / a0).ln() / (d1 / d0).ln() >= POLE_EXPONENT
        }
        EndKind::Truncated => a0 <= TRUNCATED_AMPLITUDE * max && a0 < a1,
        EndKind::Fixed => a0 < FIXED_AMPLITUDE * max,
    }
}

fn check_grid(xs: &[f64]) -> Result<f64> {
    if xs.len() < 5 {
        return Err(Error::Argument(format!("need at least 5 grid points, got {}", xs.len())));
    }
    let h = (xs[xs.len() - 1] - xs[0]) / (xs.len() - 1) as f64;
    let uniform = xs
        .windows(2)
        .all(|w| ((w[1] - w[0]) - h).abs() <= 1e-9 * h);
    if !uniform {
        return Err(Error::Argument("ladder operators need a uniform grid".into()));
    }
    Ok(h)
}

/// Zero modes of `a_k = ∂ + W_k` on the grid `xs` (uniform, strictly inside the domain).
pub fn ground_space(inst: &SuperpotentialInstance, k: f64, xs: &[f64]) -> Result<GroundSpace> {
    check_grid(xs)?;
    if !(inst.domain.contains(xs[0]) && inst.domain.contains(xs[xs.len() - 1])) {
        return Err(Error::Domain("grid leaves the instance domain".into()));
    }
    let n = xs.len();
    let mid = n / 2;
    let left_path: Vec<usize> = (0..=mid).collect();
    let right_path: Vec<usize> = (mid..n).rev().collect();
    let left = end_data(propagate(inst, k, xs, &left_path)?);
    let right = end_data(propagate(inst, k, xs, &right_path)?);

    let mut g = OMatrix::<Complex64, U6, U3>::zeros();
    g.fixed_view_mut::<3, 3>(0, 0).copy_from(&left.amplitude_rows());
    g.fixed_view_mut::<3, 3>(3, 0).copy_from(&right.amplitude_rows());
    let svd = SVD::new(g, false, true);
    let vt = svd.v_t.expect("v requested");
    let mut order: Vec<usize> = (0..3).collect();
    order.sort_by(|&i, &j| svd.singular_values[i].total_cmp(&svd.singular_values[j]));

    let e0 = energy(inst, k)?;
    let mut states = Vec::new();
    let mut amps = Vec::new();
    let mut fallback = None;
    for idx in order {
        let v: Vector3c = vt.row(idx).adjoint();
        let lv = left.reconstruct(&v);
        let rv = right.reconstruct(&v);
        let top = lv.iter().chain(&rv).map(|(t, _)| *t).fold(f64::NEG_INFINITY, f64::max);
        let mut values = vec![Vector3c::zeros(); n];
        for (p, (t, y)) in left_path.iter().zip(&lv) {
            values[*p] = y * Complex64::from((t - top).exp());
        }
        for (p, (t, y)) in right_path.iter().zip(&rv) {
            if *p != mid {
                values[*p] = y * Complex64::from((t - top).exp());
            }
        }
        let d = inst.domain;
        let ok = left.weak_overlap(&v) < 1e-6
            && right.weak_overlap(&v) < 1e-6
            && classify_end(&values, xs, d.a, d.left, true)
            && classify_end(&values, xs, d.b, d.right, false);
        let mut state = GridFunction3::new(xs.to_vec(), values)?;
        if state.normalize().is_err() {
            // underflowed everywhere: nothing to classify
            continue;
        }
        let amp = boundary_amplitude(&state);
        if ok {
            states.push(state);
            amps.push(amp);
        } else if fallback.is_none() {
            fallback = Some((state, amp));
        }
    }
    Ok(GroundSpace {
        k,
        energy: e0,
        states,
        boundary_amplitudes: amps,
        fallback,
    })
}

fn boundary_amplitude(state: &GridFunction3) -> f64 {
    let max = state.max_amplitude();
    let n = state.len();
    state.values[0].norm().max(state.values[n - 1].norm()) / max
}

/// Ground state of `H_k` on the grid; `normalizable = false` returns the least-growing solution.
pub fn ground_state(inst: &SuperpotentialInstance, xs: &[f64]) -> Result<LadderResult> {
    let space = ground_space(inst, inst.k, xs)?;
    let (state, normalizable, amp) = match space.states.first() {
        Some(s) => (s.clone(), true, space.boundary_amplitudes[0]),
        None => {
            let (s, a) = space.fallback.clone().expect("three candidates");
            (s, false, a)
        }
    };
    let residual = eigen_residual(inst, inst.k, &state, space.energy)?;
    Ok(LadderResult {
        state,
        level: 0,
        energy: space.energy,
        normalizable,
        residual,
        boundary_amplitude: amp,
    })
}

/// `ψ_k^n ∝ a_k† ⋯ a_{k+n−1}† ψ_{k+n}^0` for the first ground state of `H_{k+n}` whose
/// image still vanishes at both ends of the domain.
pub fn excited_state(inst: &SuperpotentialInstance, n: usize, xs: &[f64]) -> Result<LadderResult> {
    if n == 0 {
        return ground_state(inst, xs);
    }
    ladder_level(inst, n, xs)?
        .into_iter()
        .next()
        .ok_or_else(|| Error::LadderTruncated {
            level: n,
            reason: format!(
                "no ground state at k = {} maps to a state vanishing at the domain ends",
                inst.k + n as f64
            ),
        })
}

/// Every admissible level-`n` state: images of the ground space of `H_{k+n}` that vanish
/// at both ends by the same tests used for zero modes. For `n = 0` this is the ground space.
///
/// Images of zero modes with a fractional power at a pole can lose that property (the
/// power drops by one per step) and then belong to no Dirichlet problem; they are dropped.
pub fn ladder_level(inst: &SuperpotentialInstance, n: usize, xs: &[f64]) -> Result<Vec<LadderResult>> {
    let k = inst.k;
    if n > 0 {
        // the images are built from the determining equations, so they must hold
        let bad: Vec<_> = check_determining(inst, 200, 1e-8)?
            .into_iter()
            .filter(|r| !r.pass)
            .map(|r| r.equation_id)
            .collect();
        if !bad.is_empty() {
            return Err(Error::Precondition(format!(
                "{} violates {bad:?}; ladder images would be wrong",
                inst.entry_id()
            )));
        }
    }
    let seed = ground_space(inst, k + n as f64, xs)?;
    let e = energy(inst, k + n as f64)?;
    let d = inst.domain;
    let mut out = Vec::new();
    for top in &seed.states {
        let state = if n == 0 { top.clone() } else { climb_down(inst, k, n, top)? };
        if n > 0
            && !(classify_end(&state.values, xs, d.a, d.left, true)
                && classify_end(&state.values, xs, d.b, d.right, false))
        {
            continue;
        }
        let residual = eigen_residual(inst, k, &state, e)?;
        let amp = boundary_amplitude(&state);
        out.push(LadderResult {
            state,
            level: n,
            energy: e,
            normalizable: true,
            residual,
            boundary_amplitude: amp,
        });
    }
    Ok(out)
}

/// Applies `a_{k+n−1}†` down to `a_k†` to a ground state of `H_{k+n}` and normalizes.
///
/// Nothing is differentiated on the grid. Since `ψ' = −W_{k+n}ψ` for the seed, every image
/// is `M(x)ψ(x)` for a matrix `M` built pointwise from `Q`, `P`, `R` and their derivatives,
/// which follow from `Q' = Q² + ν` and `P' = ½{P,Q}`. Repeated finite differences would
/// amplify the rounding noise of the seed by `h^{−1}` per step.
pub(crate) fn climb_down(inst: &SuperpotentialInstance, k: f64, n: usize, seed: &GridFunction3) -> Result<GridFunction3> {
    let values = seed
        .xs
        .iter()
        .zip(&seed.values)
        .map(|(&x, v)| Ok(ladder_multiplier(inst, k, n, x)? * v))
        .collect::<Result<Vec<_>>>()?;
    let mut psi = GridFunction3::new(seed.xs.clone(), values)?;
    psi.normalize()?;
    Ok(psi)
}

/// `M` with `a_k† ⋯ a_{k+n−1}† ψ = Mψ` whenever `ψ' = −W_{k+n}ψ`.
fn ladder_multiplier(inst: &SuperpotentialInstance, k: f64, n: usize, x: f64) -> Result<M3> {
    let sp = &inst.superpotential;
    inst.w_at(k, x)?; // domain guard
    // derivatives of Q and P up to order n
    let mut q = vec![*sp.q(x).as_matrix(), *sp.q_prime(x).as_matrix()];
    let mut p = vec![*sp.p(x)?.as_matrix(), *sp.p_prime(x)?.as_matrix()];
    for m in 1..n {
        let mut qn = M3::zeros();
        let mut pn = M3::zeros();
        for i in 0..=m {
            let c = Complex64::from(binomial(m, i));
            qn += q[i] * q[m - i] * c;
            pn += (p[i] * q[m - i] + q[m - i] * p[i]) * (c * 0.5);
        }
        q.push(qn);
        p.push(pn);
    }
    let r = *sp.r.as_matrix();
    let w = |kk: f64, m: usize| -> M3 {
        let base = q[m] * Complex64::from(kk) + p[m];
        if m == 0 {
            base + r / Complex64::from(kk)
        } else {
            base
        }
    };
    let top = k + n as f64;
    let w_top: Vec<M3> = (0..=n).map(|m| w(top, m)).collect();
    // derivatives of the running multiplier, starting from the identity
    let mut mult = vec![M3::zeros(); n + 1];
    mult[0] = M3::identity();
    for j in (0..n).rev() {
        let kappa = k + j as f64;
        let w_here: Vec<M3> = (0..mult.len()).map(|m| w(kappa, m)).collect();
        let next: Vec<M3> = (0..mult.len() - 1)
            .map(|m| {
                let mut acc = -mult[m + 1];
                for i in 0..=m {
                    let c = Complex64::from(binomial(m, i));
                    acc += (mult[i] * w_top[m - i] + w_here[m - i] * mult[i]) * c;
                }
                acc
            })
            .collect();
        mult = next;
    }
    Ok(mult[0])
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Fourth-order derivative on a uniform grid; one-sided stencils at the two outer points.
fn derivative(values: &[Vector3c], h: f64) -> Vec<Vector3c> {
    let n = values.len();
    let comb = |terms: &[(usize, f64)]| {
        terms
            .iter()
            .fold(Vector3c::zeros(), |acc, &(i, c)| acc + values[i] * Complex64::from(c / (12.0 * h)))
    };
    (0..n)
        .map(|i| {
            if i >= 2 && i + 2 < n {
                comb(&[(i - 2, 1.0), (i - 1, -8.0), (i + 1, 8.0), (i + 2, -1.0)])
            } else if i == 0 {
                comb(&[(0, -25.0), (1, 48.0), (2, -36.0), (3, 16.0), (4, -3.0)])
            } else if i == 1 {
                comb(&[(0, -3.0), (1, -10.0), (2, 18.0), (3, -6.0), (4, 1.0)])
            } else if i == n - 2 {
                comb(&[(n - 1, 3.0), (n - 2, 10.0), (n - 3, -18.0), (n - 4, 6.0), (n - 5, -1.0)])
            } else {
                comb(&[(n - 1, 25.0), (n - 2, -48.0), (n - 3, 36.0), (n - 4, -16.0), (n - 5, 3.0)])
            }
        })
        .collect()
}

fn apply_first_order(inst: &SuperpotentialInstance, k: f64, psi: &GridFunction3, sign: f64) -> Result<GridFunction3> {
    let h = check_grid(&psi.xs)?;
    let d = derivative(&psi.values, h);
    let values = psi
        .xs
        .iter()
        .zip(&psi.values)
        .zip(d)
        .map(|((&x, v), dv)| Ok(dv * Complex64::from(sign) + w_matrix(inst, k, x)? * v))
        .collect::<Result<Vec<_>>>()?;
    GridFunction3::new(psi.xs.clone(), values)
}

/// `a_k ψ = ψ' + W_k ψ`.
pub fn apply_annihilation(inst: &SuperpotentialInstance, k: f64, psi: &GridFunction3) -> Result<GridFunction3> {
    apply_first_order(inst, k, psi, 1.0)
}

/// `a_k† ψ = −ψ' + W_k ψ`.
pub fn apply_creation(inst: &SuperpotentialInstance, k: f64, psi: &GridFunction3) -> Result<GridFunction3> {
    apply_first_order(inst, k, psi, -1.0)
}

/// `H_k ψ` with the three-point Laplacian and zero Dirichlet ghosts.
pub fn apply_hamiltonian(inst: &SuperpotentialInstance, k: f64, psi: &GridFunction3) -> Result<GridFunction3> {
    let h = check_grid(&psi.xs)?;
    let n = psi.len();
    let inv_h2 = Complex64::from(1.0 / (h * h));
    let values = (0..n)
        .map(|i| {
            let prev = if i > 0 { psi.values[i - 1] } else { Vector3c::zeros() };
            let next = if i + 1 < n { psi.values[i + 1] } else { Vector3c::zeros() };
            let lap = (prev - psi.values[i] * Complex64::from(2.0) + next) * inv_h2;
            let v = potential_at(inst, k, psi.xs[i])?;
            Ok(v.as_matrix() * psi.values[i] - lap)
        })
        .collect::<Result<Vec<_>>>()?;
    GridFunction3::new(psi.xs.clone(), values)
}

/// `‖H_k ψ − Eψ‖₂ / ‖ψ‖₂`.
pub fn eigen_residual(inst: &SuperpotentialInstance, k: f64, psi: &GridFunction3, e: f64) -> Result<f64> {
    let hpsi = apply_hamiltonian(inst, k, psi)?;
    let values = hpsi
        .values
        .iter()
        .zip(&psi.values)
        .map(|(a, b)| a - b * Complex64::from(e))
        .collect();
    let diff = GridFunction3::new(psi.xs.clone(), values)?;
    Ok(diff.norm() / psi.norm())
}
