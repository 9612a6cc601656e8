use matsusy::catalog::{find_entry, InstanceParams, ProfileKind, ScalarProfile, Superpotential, SuperpotentialInstance};
use matsusy::spectral::{compare_spectra, energy, excited_state, fd_spectrum, ground_state, ladder_level, uniform_grid};
use matsusy::Hermitian3;

fn equal_shift_tan() -> SuperpotentialInstance {
    let e = find_entry("P.b1.01+Q.tan.ddd+R.11p").unwrap();
    let mut p = InstanceParams::defaults_for(&e);
    p.gammas = [0.0; 3];
    SuperpotentialInstance::from_entry(&e, &p, 1.0).unwrap()
}

#[test]
fn ladder_energies_sit_in_the_fd_spectrum() {
    // the ladder energies appear in the finite-difference spectrum, interleaved with
    // levels the ladder does not reach
    let inst = equal_shift_tan();
    let cmp = compare_spectra(&inst, 3, 2000, 5e-3).unwrap();
    assert_eq!(cmp.degeneracies, vec![1, 1, 1, 1]);
    for row in &cmp.rows {
        assert!(row.nearest_abs_diff < 1e-3 * cmp.first_gap, "{row:?}");
    }
    assert!(!cmp.pass);
}

#[test]
fn excited_states_are_eigenvectors() {
    let inst = equal_shift_tan();
    let xs = uniform_grid(&inst.domain, 4000);
    for n in 0..=3 {
        let s = excited_state(&inst, n, &xs).unwrap();
        assert!(s.normalizable);
        assert_eq!(s.energy, energy(&inst, 1.0 + n as f64).unwrap());
        assert!(s.residual < 5e-4, "level {n}: {}", s.residual);
    }
}

#[test]
fn distinct_shifts_leave_no_zero_mode() {
    let e = find_entry("P.b1.01+Q.tan.ddd+R.11p").unwrap();
    let inst = SuperpotentialInstance::with_defaults(&e, 1.0).unwrap();
    let xs = uniform_grid(&inst.domain, 1000);
    assert!(!ground_state(&inst, &xs).unwrap().normalizable);
    assert!(ladder_level(&inst, 0, &xs).unwrap().is_empty());
    assert!(compare_spectra(&inst, 3, 1000, 5e-3).is_err());
}

#[test]
fn hyperbolic_wells_bind_for_negative_k() {
    let e = find_entry("P.b2.09+Q.h10.ddd+R.12p").unwrap();
    let inst = SuperpotentialInstance::with_defaults(&e, -2.0).unwrap();
    let xs = uniform_grid(&inst.domain, 2000);
    let g = ground_state(&inst, &xs).unwrap();
    let fd = fd_spectrum(&inst, 2000, 1).unwrap();
    assert!(g.normalizable);
    assert!((fd.eigenvalues[0] - g.energy).abs() < 1e-2 * g.energy.abs().max(1.0), "{fd:?} vs {}", g.energy);
}

#[test]
fn scalar_tan_ladder_matches_closed_form() {
    let q = ScalarProfile::new(ProfileKind::Tan, 1.0, 0.0).unwrap();
    let sp = Superpotential::new([q; 3], vec![], Hermitian3::zero(), 0.0).unwrap();
    let inst = SuperpotentialInstance::free_form(sp, 1.0).unwrap();
    let cmp = compare_spectra(&inst, 2, 3000, 5e-3).unwrap();
    assert_eq!(cmp.degeneracies, vec![3, 3, 3]);
    assert!(cmp.pass, "{cmp:?}");
    let fd: Vec<f64> = cmp.rows.iter().map(|r| r.fd).collect();
    for (j, v) in fd.iter().enumerate() {
        let n = (j / 3 + 1) as f64;
        assert!((v - n * n).abs() < 2e-3);
    }
}
