mod common;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use synclcs::examples::magic_square;
use synclcs::graph::build_game_graph;
use synclcs::group::{build_presentation, relation_residuals};
use synclcs::report::ResidualCheck;
use synclcs::star::{
    build_projection_family, check_iso_relations, check_mutual_inverse, iso_generator_images, iso_sum_checks,
    load_representation, pauli_magic_square_rep, phi_checks, rep_to_json, scalar_rep_from_solution, spectral_checks,
    Cyclotomic, Matrix, ProjectionFamily, Representation,
};
use synclcs::Error;

use common::{random_system, random_unitary, CAP};

const TOL: f64 = 1e-9;

#[test]
fn scalar_reps_are_exact_for_p5() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let mut checked = 0;
    while checked < 20 {
        let sys = random_system(&mut rng, 5, 3);
        let Some(set) = sys.solve().affine_set().cloned() else { continue };
        checked += 1;
        let rep: Representation<Cyclotomic> = scalar_rep_from_solution(&sys, &set.particular).unwrap();
        let rel = relation_residuals(&rep, &build_presentation(&sys), 0.0).unwrap();
        assert_eq!(rel.max_residual(), 0.0);
        let fam = build_projection_family(&rep, &sys, CAP, 0.0).unwrap();
        let mut all: Vec<ResidualCheck> = spectral_checks(&rep, 0.0);
        all.extend(phi_checks(&fam, 0.0));
        all.extend(check_mutual_inverse(&rep, &sys, CAP, 0.0).unwrap());
        for c in all {
            assert_eq!(c.max_residual, 0.0, "{} on {sys}", c.name);
        }
    }
}

#[test]
fn pauli_rep_round_trips_through_json() {
    let rep = pauli_magic_square_rep();
    let text = rep_to_json(&rep);
    let loaded = load_representation(&text, TOL, true).unwrap();
    assert_eq!(loaded.rep, rep);
    assert!(loaded.warnings.is_empty());
    assert_eq!(rep_to_json(&loaded.rep), text);
}

#[test]
fn corrupted_rep_file_fails_named_relation() {
    let rep = pauli_magic_square_rep();
    let scaled = rep.g(4).scale(&Complex64::new(1.01, 0.0));
    let bad = rep.clone().with_generator(4, scaled);
    assert!(matches!(
        load_representation(&rep_to_json(&bad), TOL, true),
        Err(Error::UnitarityViolation { ref generator, .. }) if generator == "g4"
    ));
    let rel = relation_residuals(&bad, &build_presentation(&magic_square()), TOL).unwrap();
    let failing = rel.relations.iter().find(|r| !r.passed).unwrap();
    assert_eq!(failing.text, "g4^2");
}

#[test]
fn conjugation_preserves_every_residual() {
    let rep = pauli_magic_square_rep();
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let u = random_unitary(&mut rng, 4, 2);
    assert!(u.mul(&u.adjoint()).distance(&Matrix::identity(4, 2)) < 1e-12);
    let conj = rep.conjugated(&u);

    let base = suite(&rep);
    let moved = suite(&conj);
    assert_eq!(base.len(), moved.len());
    for (a, b) in base.iter().zip(&moved) {
        assert_eq!(a.name, b.name);
        assert_eq!(a.passed(), b.passed());
        assert!((a.max_residual - b.max_residual).abs() <= 1e-9, "{}", a.name);
    }

    fn suite(rep: &Representation<Complex64>) -> Vec<ResidualCheck> {
        let sys = magic_square();
        let mut out = relation_residuals(rep, &build_presentation(&sys), TOL).unwrap().by_family();
        out.extend(spectral_checks(rep, TOL));
        let fam = ProjectionFamily::from_representation(rep, &sys, CAP, TOL).unwrap();
        out.extend(fam.invariant_checks(TOL));
        out.extend(phi_checks(&fam, TOL));
        out.extend(check_mutual_inverse(rep, &sys, CAP, TOL).unwrap());
        out
    }
}

#[test]
fn iso_family_for_scalar_rep_on_random_systems() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut checked = 0;
    while checked < 15 {
        let sys = random_system(&mut rng, 3, 3);
        let Some(set) = sys.solve().affine_set().cloned() else { continue };
        checked += 1;
        let rep: Representation<Cyclotomic> = scalar_rep_from_solution(&sys, &set.particular).unwrap();
        let fam = build_projection_family(&rep, &sys, CAP, 0.0).unwrap();
        let g = build_game_graph(&sys, false, CAP).unwrap();
        let h = build_game_graph(&sys, true, CAP).unwrap();
        let e = iso_generator_images(&fam, &g, &h).unwrap();
        for c in iso_sum_checks(&e, &fam, &g, &h, 0.0) {
            assert_eq!(c.max_residual, 0.0, "{}", c.name);
        }
        for c in check_iso_relations(&e, &g, &h, 0.0).checks {
            assert_eq!(c.max_residual, 0.0, "{}", c.name);
        }
    }
}

#[test]
fn unidentified_j_is_a_warning_when_opted_out() {
    let sys = synclcs::examples::one_eq();
    let x = synclcs::ZpVector::new(2, &[0, 0]).unwrap();
    let rep: Representation<Complex64> = scalar_rep_from_solution(&sys, &x).unwrap();
    let rep = Representation::new(2, vec![rep.g(1).clone(), rep.g(2).clone()], rep.identity(), true).unwrap();
    let text = rep_to_json(&rep);
    assert!(matches!(load_representation(&text, TOL, true), Err(Error::JNotIdentified { .. })));
    let loaded = load_representation(&text, TOL, false).unwrap();
    assert_eq!(loaded.warnings.len(), 1);
    assert!(!loaded.rep.j_identified());
}
