//! Hamiltonian evaluation, disc embeddings and the triviality search.

use std::time::Instant;

use airy_engine::{
    build_residue_constraint_tensors, build_tr_variant_tensors, embed_disc, eval_hamiltonians,
    eval_hamiltonians_from_tensors, max_abs_value, triviality_search, AiryError, ModeIndex, RamLabels,
    TrivialitySearchConfig, Variant, WElement,
};
use laurent_core::{LaurentSeries, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rc(rng: &mut ChaCha8Rng, r: f64) -> C64 {
    C64::new(rng.random_range(-r..r), rng.random_range(-r..r))
}

fn double_factorial(n: i64) -> f64 {
    if n <= 0 { 1.0 } else { (1..=n).rev().step_by(2).map(|x| x as f64).product() }
}

fn factorial(n: u32) -> f64 {
    (1..=n).map(|x| x as f64).product()
}

#[test]
fn zero_element_solves_everything() {
    let ram = RamLabels::numbered(2);
    for variant in [Variant::ResidueConstraints, Variant::TrVariant] {
        let h = eval_hamiltonians(&WElement::zero(ram.clone()), variant, 15).unwrap();
        assert_eq!(h.len(), 30);
        assert_eq!(max_abs_value(&h), 0.0);
    }
}

#[test]
fn linear_term_is_minus_y() {
    let ram = RamLabels::single();
    let w = WElement::from_coordinates(ram, &[], &[(ModeIndex::new(2, 0), C64::new(1.0, 0.0))]);
    let h = eval_hamiltonians(&w, Variant::ResidueConstraints, 6).unwrap();
    assert!((h[&ModeIndex::new(2, 0)] + C64::new(1.0, 0.0)).norm() < 1e-15);
    assert!(h[&ModeIndex::new(4, 0)].norm() < 1e-15);
}

#[test]
fn tensor_assembly_matches_residues() {
    let ram = RamLabels::numbered(2);
    let kmax = 15;
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let cases = [
        (Variant::ResidueConstraints, build_residue_constraint_tensors(kmax, &ram)),
        (Variant::TrVariant, build_tr_variant_tensors(kmax, &ram)),
    ];
    for (variant, t) in cases {
        for _ in 0..10 {
            let mut x = Vec::new();
            let mut y = Vec::new();
            for alpha in 0..2 {
                for k in 1..=8 {
                    x.push((ModeIndex::new(k, alpha), rc(&mut rng, 1.0)));
                    y.push((ModeIndex::new(k, alpha), rc(&mut rng, 1.0)));
                }
            }
            let w = WElement::from_coordinates(ram.clone(), &x, &y);
            let direct = eval_hamiltonians(&w, variant, kmax).unwrap();
            let assembled = eval_hamiltonians_from_tensors(&w, &t).unwrap();
            for (m, v) in &direct {
                assert!((v - assembled[m]).norm() < 1e-12, "{variant:?} {m}: {v} vs {}", assembled[m]);
            }
        }
    }
}

fn random_disc_polynomial(rng: &mut ChaCha8Rng) -> LaurentSeries {
    let degree = rng.random_range(1..=4);
    let mut coeffs: Vec<C64> = (0..=degree).map(|_| rc(rng, 0.5)).collect();
    coeffs[1] += C64::new(1.0, 0.0);
    LaurentSeries::exact(0, coeffs)
}

#[test]
fn discs_satisfy_the_constraints() {
    let start = Instant::now();
    let ram = RamLabels::numbered(2);
    let mut rng = ChaCha8Rng::seed_from_u64(33);
    for trial in 0..20 {
        let a = C64::from_polar(rng.random_range(0.0..0.1), rng.random_range(0.0..6.28));
        let y = random_disc_polynomial(&mut rng);
        let w = embed_disc(a, &y, trial % 2, &ram, 15).unwrap();
        let h = eval_hamiltonians(&w, Variant::ResidueConstraints, 15).unwrap();
        assert!(max_abs_value(&h) < 1e-10, "trial {trial}: {:e}", max_abs_value(&h));
    }
    assert!(start.elapsed().as_secs_f64() < 5.0);
}

#[test]
fn airy_disc_has_closed_form_coordinates() {
    let ram = RamLabels::single();
    let a = C64::new(0.07, -0.03);
    let y = LaurentSeries::monomial(1, C64::new(1.0, 0.0));
    let w = embed_disc(a, &y, 0, &ram, 15).unwrap();
    assert!((w.j(0, -1).unwrap() - a).norm() < 1e-12);
    for k in 1..=6u32 {
        let expected = a.powu(k) * (double_factorial(2 * k as i64 - 3) / (factorial(k) * 2f64.powi(k as i32 - 1)));
        let got = w.j(0, 2 * k as i32 - 3).unwrap();
        assert!((got - expected).norm() < 1e-12, "k = {k}: {got} vs {expected}");
    }
    // Undeformed disc is the origin.
    let w0 = embed_disc(C64::new(0.0, 0.0), &y, 0, &ram, 15).unwrap();
    assert!(w0.part(0).base.max_abs() < 1e-15);
}

#[test]
fn degenerate_discs_are_rejected() {
    let ram = RamLabels::single();
    let y = LaurentSeries::exact(0, vec![C64::new(1.0, 0.0), C64::new(0.0, 0.0), C64::new(1.0, 0.0)]);
    assert!(matches!(embed_disc(C64::new(0.01, 0.0), &y, 0, &ram, 9), Err(AiryError::DegenerateDisc)));
}

#[test]
fn finite_elements_with_nonzero_x1_are_not_solutions() {
    let start = Instant::now();
    let report = triviality_search(&TrivialitySearchConfig::default());
    eprintln!("triviality search: {} evaluations, min max abs H = {:e}", report.evaluations, report.min_max_abs_h);
    assert!(report.min_max_abs_h >= 1e-8, "found max |H| = {:e}", report.min_max_abs_h);
    assert!(start.elapsed().as_secs_f64() < 5.0, "took {:?}", start.elapsed());
}

mod properties {
    use super::*;
    use proptest::prelude::*;

    fn coords() -> impl Strategy<Value = Vec<(f64, f64)>> {
        prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 12)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn quadratic_expansion_is_exact(xs in coords(), ys in coords()) {
            let ram = RamLabels::single();
            let t = build_residue_constraint_tensors(13, &ram);
            let x: Vec<(ModeIndex, C64)> = xs.iter().enumerate().map(|(i, &(re, im))| (ModeIndex::new(i as u32 + 1, 0), C64::new(re, im))).collect();
            let y: Vec<(ModeIndex, C64)> = ys.iter().enumerate().map(|(i, &(re, im))| (ModeIndex::new(i as u32 + 1, 0), C64::new(re, im))).collect();
            let w = WElement::from_coordinates(ram, &x, &y);
            let direct = eval_hamiltonians(&w, Variant::ResidueConstraints, 13).unwrap();
            let assembled = eval_hamiltonians_from_tensors(&w, &t).unwrap();
            for (m, v) in &direct {
                prop_assert!((v - assembled[m]).norm() < 1e-12);
            }
        }

        #[test]
        fn small_discs_lie_on_the_zero_locus(re in -0.07..0.07f64, im in -0.07..0.07f64, b0 in -0.5..0.5f64, b2 in -0.5..0.5f64) {
            let y = LaurentSeries::exact(0, vec![C64::new(b0, 0.0), C64::new(1.0, 0.0), C64::new(b2, 0.0)]);
            let w = embed_disc(C64::new(re, im), &y, 0, &RamLabels::single(), 15).unwrap();
            let h = eval_hamiltonians(&w, Variant::ResidueConstraints, 15).unwrap();
            prop_assert!(max_abs_value(&h) < 1e-10);
        }
    }
}
