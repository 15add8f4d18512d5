//! The normalized Bergman kernel: symmetry, A-normalization, B-periods and the
//! genus-one theta-function oracle.

#[path = "support/elliptic.rs"]
mod elliptic;

use std::f64::consts::PI;

use hyperelliptic_sw::bergman::kernel_periods;
use hyperelliptic_sw::{bergman_kernel, build_cycles, new_curve, periods, BergmanData, PeriodData, SWCurve};
use laurent_core::C64;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn setup(g: usize, u: &[C64]) -> (SWCurve, hyperelliptic_sw::CycleBasis, PeriodData, BergmanData) {
    let curve = new_curve(g, u, c(1.0, 0.0)).unwrap();
    let cyc = build_cycles(&curve).unwrap();
    let pd = periods(&curve, &cyc).unwrap();
    let b = bergman_kernel(&curve, &cyc, &pd).unwrap();
    (curve, cyc, pd, b)
}

/// Points away from branch points, on the sheet selected by a reference value.
fn sample(curve: &SWCurve, count: usize, offset: f64) -> Vec<(C64, C64)> {
    (0..count)
        .map(|k| {
            let t = offset + 0.7 * k as f64;
            let z = C64::from_polar(0.6 + 0.9 * ((1.3 * k as f64).sin()).abs(), t);
            let reference = if k % 2 == 0 { z * z } else { -z * z };
            (z, curve.y_near(z, reference))
        })
        .filter(|(z, _)| curve.branch_points().iter().all(|b| (b - z).norm() > 0.2))
        .collect()
}

fn check_contract(g: usize, u: &[C64]) {
    let (curve, cyc, _pd, b) = setup(g, u);
    let pts = sample(&curve, 12, 0.2);
    for (i, p) in pts.iter().enumerate() {
        for q in pts.iter().skip(i + 1) {
            if (p.0 - q.0).norm() < 0.05 {
                continue;
            }
            let d = (b.eval(*p, *q) - b.eval(*q, *p)).norm();
            assert!(d < 1e-9 * (1.0 + b.eval(*p, *q).norm()), "asymmetric kernel: {d:e}");
        }
    }
    let qs: Vec<(C64, C64)> = pts.iter().take(4).copied().collect();
    let (ka, kb) = kernel_periods(&b, &cyc, &qs).unwrap();
    let two_pi_i = c(0.0, 2.0 * PI);
    for (m, q) in qs.iter().enumerate() {
        let om = b.omega(*q);
        for i in 0..g {
            assert!(ka[i][m].norm() < 1e-8, "A-period {i} at sample {m}: {:e}", ka[i][m].norm());
            let target = two_pi_i * om[i];
            assert!((kb[i][m] - target).norm() < 1e-6 * target.norm(), "B-period {i} at sample {m}");
        }
    }
}

#[test]
fn genus_one_kernel_contract() {
    check_contract(1, &[c(0.3, 0.1)]);
}

#[test]
fn genus_two_kernel_contract() {
    check_contract(2, &[c(0.2, 0.1), c(-0.3, 0.15)]);
}

#[test]
fn correction_is_symmetric_and_fits_exactly() {
    let (_, _, _, b) = setup(2, &[c(0.2, 0.1), c(-0.3, 0.15)]);
    assert!(b.correction_asymmetry() < 1e-10);
    assert!(b.fit_residual() < 1e-10);
}

fn check_theta_oracle(u: C64) {
    let (curve, _cyc, pd, b) = setup(1, &[u]);
    let omega_a = pd.hol_a[(0, 0)];
    let tau = pd.tau[(0, 0)];
    let pairs: Vec<(C64, C64)> = (0..40)
        .map(|k| {
            let k = k as f64;
            (C64::from_polar(0.5 + 0.3 * (k * 0.37).sin().abs(), 0.4 + 1.1 * k), C64::from_polar(0.9 + 0.4 * (k * 0.61).cos().abs(), 2.1 + 0.8 * k))
        })
        .filter(|(zq, zp)| {
            // the segment stays away from every branch point
            curve.branch_points().iter().all(|e| {
                let d = zp - zq;
                let t = (((e - zq) * d.conj()).re / d.norm_sqr()).clamp(0.0, 1.0);
                (zq + d * t - e).norm() > 0.25
            }) && (zp - zq).norm() > 0.3
        })
        .take(20)
        .collect();
    assert_eq!(pairs.len(), 20, "not enough admissible sample pairs");
    for (zq, zp) in pairs {
        let yq = curve.y_near(zq, zq * zq);
        let (yp, oracle) = elliptic::theta_kernel(&curve, omega_a, tau, zq, yq, zp);
        let value = b.eval((zp, yp), (zq, yq));
        assert!((value - oracle).norm() < 1e-6 * oracle.norm(), "{value} vs {oracle} at ({zp}, {zq})");
    }
}

#[test]
fn genus_one_kernel_matches_theta_oracle_at_the_origin() {
    check_theta_oracle(c(0.0, 0.0));
}

#[test]
fn genus_one_kernel_matches_theta_oracle_off_the_origin() {
    check_theta_oracle(c(0.3, 0.1));
}
