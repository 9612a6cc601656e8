//! Randomized checks of the identities every catalog instance has to satisfy.

use std::collections::HashSet;

use proptest::prelude::*;

use matsusy::catalog::{
    compile_unchecked, enumerate_catalog, find_entry, formula_count, validate, CatalogEntry, InstanceParams,
    SuperpotentialInstance, ALL_R_FORMS,
};
use matsusy::spectral::{apply_annihilation, apply_hamiltonian, uniform_grid, GridFunction3, Vector3c};
use matsusy::verifier::{c_constant, verification_window};
use matsusy::{anticommutator, Hermitian3};
use num_complex::Complex64;

fn catalog() -> &'static [CatalogEntry] {
    use std::sync::OnceLock;
    static CAT: OnceLock<Vec<CatalogEntry>> = OnceLock::new();
    CAT.get_or_init(enumerate_catalog)
}

fn instance(i: usize, k: f64) -> SuperpotentialInstance {
    let e = &catalog()[i % catalog().len()];
    SuperpotentialInstance::with_defaults(e, k).unwrap()
}

/// Maps `u ∈ (0, 1)` into the residual window of the instance.
fn point(inst: &SuperpotentialInstance, u: f64) -> f64 {
    let (a, b) = verification_window(inst);
    a + u * (b - a)
}

fn scale(ms: &[&Hermitian3]) -> f64 {
    ms.iter().map(|m| m.max_abs()).fold(1.0, f64::max)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn q_solves_its_riccati_equation(i in 0usize..1000, u in 0.0f64..1.0) {
        let inst = instance(i, 1.0);
        let x = point(&inst, u);
        let sp = &inst.superpotential;
        let q = sp.q(x);
        let lhs = sp.q_prime(x);
        let rhs = q.square() + Hermitian3::identity().scale(sp.nu);
        prop_assert!(lhs.max_abs_diff(&rhs) <= 1e-12 * scale(&[&lhs, &rhs]), "{} at {x}", inst.entry_id());
    }

    #[test]
    fn p_follows_q_and_anticommutes_with_r(i in 0usize..1000, u in 0.0f64..1.0) {
        let inst = instance(i, 1.0);
        let x = point(&inst, u);
        let sp = &inst.superpotential;
        let p = sp.p(x).unwrap();
        let dp = sp.p_prime(x).unwrap();
        let half = anticommutator(&p, &sp.q(x)).scale(0.5);
        prop_assert!(dp.max_abs_diff(&half) <= 1e-12 * scale(&[&dp, &half]), "P′ at {x} for {}", inst.entry_id());
        let pr = anticommutator(&p, &sp.r);
        prop_assert!(pr.max_abs() <= 1e-12 * scale(&[&p, &sp.r]), "{{P,R}} at {x} for {}", inst.entry_id());
    }

    #[test]
    fn w_is_hermitian_and_w_prime_matches_central_difference(
        i in 0usize..1000,
        u in 0.05f64..0.95,
        k in prop_oneof![0.3f64..4.0, -4.0f64..-0.3],
    ) {
        let inst = instance(i, k);
        let x = point(&inst, u);
        let w = inst.superpotential(x).unwrap();
        prop_assert_eq!(w.as_matrix(), &w.as_matrix().adjoint());
        let h = 1e-5;
        let fd = (inst.superpotential(x + h).unwrap() - inst.superpotential(x - h).unwrap()).scale(0.5 / h);
        let dw = inst.superpotential_derivative(x).unwrap();
        prop_assert!(dw.max_abs_diff(&fd) <= 1e-6 * scale(&[&dw, &w]), "{} at {x}", inst.entry_id());
    }

    #[test]
    fn relabeling_components_commutes_with_w(
        i in 0usize..1000,
        u in 0.0f64..1.0,
        perm in Just([0usize, 1, 2]).prop_shuffle(),
    ) {
        let inst = instance(i, 1.5);
        let x = point(&inst, u);
        let sp = &inst.superpotential;
        let moved = sp.permuted([perm[0], perm[1], perm[2]]);
        let direct = moved.w(1.5, x).unwrap();
        let conj = sp.w(1.5, x).unwrap().permuted([perm[0], perm[1], perm[2]]);
        prop_assert!(direct.max_abs_diff(&conj) <= 1e-12 * scale(&[&direct]));
        // the shape identity holds for the relabeled superpotential as well
        let c = c_constant(sp.nu, sp.omega, 2.5).unwrap() - c_constant(sp.nu, sp.omega, 1.5).unwrap();
        let w0 = moved.w(1.5, x).unwrap();
        let w1 = moved.w(2.5, x).unwrap();
        let res = w0.square() + moved.w_prime(1.5, x).unwrap() - w1.square() + moved.w_prime(2.5, x).unwrap()
            - Hermitian3::identity().scale(c);
        prop_assert!(res.max_abs() <= 1e-12 * scale(&[&w0.square(), &w1.square()]));
    }

    #[test]
    fn c_differences_match_the_step_formula(
        k in prop_oneof![0.05f64..20.0, -20.0f64..-1.05],
        nu in -4.0f64..4.0,
        omega in 0.0f64..3.0,
    ) {
        let step = c_constant(nu, omega, k + 1.0).unwrap() - c_constant(nu, omega, k).unwrap();
        let printed = nu * (2.0 * k + 1.0) + omega * omega * (1.0 / (k * k) - 1.0 / ((k + 1.0) * (k + 1.0)));
        let size = (nu * k * k).abs() + (omega * omega / (k * k)).abs() + 1.0;
        prop_assert!((step - printed).abs() <= 1e-12 * size);
    }

    #[test]
    fn r_squares_to_omega_squared(
        omega in 0.1f64..5.0,
        theta in 0.0f64..std::f64::consts::TAU,
        signs in prop::collection::vec(prop_oneof![Just(1i8), Just(-1i8)], 2),
    ) {
        let (r, eps) = (omega * theta.cos(), omega * theta.sin());
        for form in ALL_R_FORMS {
            let m = form.build(omega, r, eps, &signs[..form.sign_count()]).unwrap();
            let target = Hermitian3::identity().scale(omega * omega);
            prop_assert!(m.square().max_abs_diff(&target) <= 1e-12 * omega * omega, "{form:?}");
        }
    }

    #[test]
    fn r_eps_off_the_circle_is_rejected(i in 0usize..1000, bump in prop_oneof![1e-6f64..0.5, -0.5f64..-1e-6]) {
        let entries: Vec<&CatalogEntry> = catalog().iter().filter(|e| e.r().uses_r_eps()).collect();
        let e = entries[i % entries.len()];
        let mut p = InstanceParams::defaults_for(e);
        p.r *= 1.0 + bump;
        prop_assert!(validate(e, &p).is_err());
        prop_assert!(compile_unchecked(e, &p).is_ok());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    /// `a_k H_k ψ = H_{k+1} a_k ψ` for smooth ψ supported well inside the domain.
    #[test]
    fn annihilation_intertwines_partner_hamiltonians(
        i in 0usize..1000,
        k in prop_oneof![0.5f64..3.0, -3.0f64..-0.5],
        c in prop::array::uniform3(-1.0f64..1.0),
    ) {
        let inst = instance(i, k);
        let (a, b) = verification_window(&inst);
        let mid = 0.5 * (a + b);
        let width = 0.15 * (b - a);
        let xs = uniform_grid(&inst.domain, 3000);
        let values: Vec<Vector3c> = xs
            .iter()
            .map(|&x| {
                let g = (-((x - mid) / width).powi(2)).exp();
                Vector3c::new(
                    Complex64::new(c[0] * g, 0.0),
                    Complex64::new(c[1] * g, c[2] * g),
                    Complex64::new(g, 0.0),
                )
            })
            .collect();
        let psi = GridFunction3::new(xs.clone(), values).unwrap();
        let lhs = apply_annihilation(&inst, k, &apply_hamiltonian(&inst, k, &psi).unwrap()).unwrap();
        let rhs = apply_hamiltonian(&inst, k + 1.0, &apply_annihilation(&inst, k, &psi).unwrap()).unwrap();
        // compare away from the ends, where the one-sided stencils act on the tails
        let n = xs.len();
        let mut diff = 0.0f64;
        let mut size = 0.0f64;
        for j in n / 10..n - n / 10 {
            diff = diff.max((lhs.values[j] - rhs.values[j]).norm());
            size = size.max(lhs.values[j].norm()).max(rhs.values[j].norm());
        }
        prop_assert!(diff <= 1e-3 * size.max(1e-300), "{}: {diff:e} vs {size:e}", inst.entry_id());
    }
}

#[test]
fn catalog_ids_are_unique_and_resolvable() {
    let cat = catalog();
    let ids: HashSet<&str> = cat.iter().map(|e| e.id.as_str()).collect();
    assert_eq!(ids.len(), cat.len());
    assert_eq!(formula_count(cat), 70);
    for e in cat {
        assert_eq!(&find_entry(&e.id).unwrap(), e);
        assert!(e.id.starts_with(&format!("P.b{}.{:02}+", e.p_block, e.p_index)));
    }
    assert!(find_entry("P.b9.01+Q.tan.ddd+R.11p").is_err());
}
