//! B-period contraction of recursion outputs.

use std::f64::consts::PI;

use airy_engine::{ModeIndex, RamLabels, SgnTable};
use laurent_core::C64;
use nalgebra::DMatrix;
use prepotential_cli::{bperiod_contract, contracted, CliError, Reference, VerifyConfig};
use spectral_recursion::{eo_run, omega_eval, LocalSpectralCurve};

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn reference(genus: usize, u: &[C64]) -> Reference {
    let cfg = VerifyConfig::for_point(genus, Some(u));
    Reference::build(genus, u, c(1.0, 0.0), &cfg).unwrap()
}

#[test]
fn zero_tensor_contracts_to_zero() {
    let mut table = SgnTable::new(RamLabels::numbered(2), "bergman", 5);
    table.cell_mut(0, 3);
    let coeffs = DMatrix::from_fn(10, 2, |i, j| c(i as f64 + 1.0, j as f64));
    let map = bperiod_contract(&table, &coeffs).unwrap();
    assert_eq!(map.len(), 4);
    assert!(map.values().all(|v| v.norm() == 0.0));
}

#[test]
fn vanishing_periods_contract_to_zero() {
    let o = eo_run(&LocalSpectralCurve::airy(RamLabels::single(), 5), 1).unwrap();
    let map = bperiod_contract(o.table(), &DMatrix::from_element(5, 1, c(0.0, 0.0))).unwrap();
    assert!(!map.is_empty());
    assert!(map.values().all(|v| v.norm() == 0.0));
}

#[test]
fn non_bergman_tables_are_rejected() {
    let table = SgnTable::new(RamLabels::single(), "airy", 5);
    let err = bperiod_contract(&table, &DMatrix::from_element(5, 1, c(1.0, 0.0))).unwrap_err();
    assert!(matches!(err, CliError::BasisMismatch { ref found } if found == "airy"));
}

#[test]
fn short_coefficient_tables_are_rejected() {
    let o = eo_run(&LocalSpectralCurve::airy(RamLabels::single(), 5), 1).unwrap();
    let err = bperiod_contract(o.table(), &DMatrix::from_element(2, 1, c(1.0, 0.0))).unwrap_err();
    assert!(matches!(err, CliError::ShapeMismatch(_)));
}

#[test]
fn single_point_contraction_by_hand() {
    // ω_{0,3} = (1/2) ē^1 ē^1 ē^1 and ω_{1,1} = (1/16) ē^3 for the Airy curve.
    let o = eo_run(&LocalSpectralCurve::airy(RamLabels::single(), 5), 1).unwrap();
    let coeffs = DMatrix::from_fn(5, 2, |f, j| c(0.3 * (f + 1) as f64, 0.1 * (j as f64 - 0.5)));
    let map = bperiod_contract(o.table(), &coeffs).unwrap();
    let tpi = c(0.0, 2.0 * PI);
    for (j1, j2, j3) in [(0, 0, 0), (0, 0, 1), (0, 1, 1), (1, 1, 1)] {
        let expected = tpi.powu(3) * 0.5 * coeffs[(0, j1)] * coeffs[(0, j2)] * coeffs[(0, j3)];
        let got = contracted(&map, 0, 3, &[j3, j1, j2]);
        assert!((got - expected).norm() < 1e-12 * expected.norm(), "{got} vs {expected}");
    }
    let expected = tpi * (1.0 / 16.0) * coeffs[(2, 1)];
    assert!((contracted(&map, 1, 1, &[1]) - expected).norm() < 1e-12 * expected.norm());
}

#[test]
fn contraction_is_symmetric_in_the_cycle_indices() {
    let r = reference(2, &[c(0.2, 0.1), c(-0.3, 0.15)]);
    let o = r.recursion(1).unwrap();
    let map = bperiod_contract(o.table(), r.expansions.c()).unwrap();
    // Only sorted keys are stored; every ordering must read the same entry.
    let v = contracted(&map, 0, 3, &[0, 1, 1]);
    for p in [[1, 0, 1], [1, 1, 0]] {
        assert_eq!(contracted(&map, 0, 3, &p), v);
    }
    assert!(v.norm() > 0.0);
}

/// `∫_0^{η̄} ω_j` along a straight segment in the chart, by composite Simpson.
fn primitive(r: &Reference, alpha: usize, j: usize, etabar: C64) -> C64 {
    let ch = &r.charts[alpha];
    let steps = 64;
    let mut acc = c(0.0, 0.0);
    for s in 0..=steps {
        let t = etabar * (s as f64 / steps as f64);
        let (z, y) = ch.point_at(t);
        let w = r.periods.omega(&r.curve, z, y)[j] * ch.dz_detabar.eval(t);
        let weight = if s == 0 || s == steps { 1.0 } else if s % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * weight;
    }
    acc * etabar / (3.0 * steps as f64)
}

#[test]
fn triple_b_period_matches_nested_contour_quadrature() {
    // ∮_B ē = 2πi Σ_β Res_β (∫ω) ē, so the triple B-period of ω_{0,3} equals
    // (2πi)^3 Σ_{β1 β2 β3} Res Res Res Φ(η̄1) Φ(η̄2) Φ(η̄3) ω_{0,3}(η̄1, η̄2, η̄3).
    let r = reference(1, &[c(0.1, 0.05)]);
    let rho = r.charts.iter().map(|ch| ch.r_extract).fold(f64::INFINITY, f64::min) * 0.5;
    let le = &r.expansions;
    let local = LocalSpectralCurve::with_s(le.ram().clone(), le.kmax(), le.s().clone()).unwrap().with_annulus(0.5 * rho, 2.0 * rho);
    let o = eo_run(&local, 1).unwrap();
    let nodes = 24;
    let nram = r.charts.len();
    let circle: Vec<C64> = (0..nodes).map(|n| C64::from_polar(rho, 2.0 * PI * (n as f64 + 0.5) / nodes as f64)).collect();
    let phi: Vec<Vec<C64>> = (0..nram).map(|b| circle.iter().map(|&e| primitive(&r, b, 0, e)).collect()).collect();
    let mut total = c(0.0, 0.0);
    for b1 in 0..nram {
        for b2 in 0..nram {
            for b3 in 0..nram {
                for (n1, &e1) in circle.iter().enumerate() {
                    for (n2, &e2) in circle.iter().enumerate() {
                        for (n3, &e3) in circle.iter().enumerate() {
                            let w = omega_eval(&o, 0, 3, &[(b1, e1), (b2, e2), (b3, e3)]).unwrap();
                            total += w * phi[b1][n1] * phi[b2][n2] * phi[b3][n3] * e1 * e2 * e3;
                        }
                    }
                }
            }
        }
    }
    let oracle = total * c(0.0, 2.0 * PI).powu(3) / (nodes as f64).powi(3);
    let map = bperiod_contract(o.table(), le.c()).unwrap();
    let got = contracted(&map, 0, 3, &[0, 0, 0]);
    assert!((got - oracle).norm() < 1e-4 * oracle.norm(), "{got} vs {oracle}");
    // The contraction only sees the k = 1 rows.
    let sum: C64 = (0..nram).map(|b| le.c_at(ModeIndex::new(1, b), 0).powu(3) * 0.5).sum();
    assert!((got - sum * c(0.0, 2.0 * PI).powu(3)).norm() < 1e-12 * got.norm());
}
