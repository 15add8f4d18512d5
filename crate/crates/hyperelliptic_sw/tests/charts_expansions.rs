//! Standard charts at the ramification points and the local expansions of the
//! kernel and the normalized differentials.

use std::f64::consts::PI;

use airy_engine::ModeIndex;
use hyperelliptic_sw::charts::fit_to_cycles;
use hyperelliptic_sw::{
    bergman_kernel, build_cycles, ebar_periods, local_expansions, new_curve, periods, standard_charts, BergmanData,
    CycleBasis, LocalExpansions, PeriodData, QuadOptions, SWCurve, StandardChart, SwError,
};
use laurent_core::{symplectic_pairing, LaurentSeries, SeriesDifferential, C64};

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

struct Setup {
    curve: SWCurve,
    cyc: CycleBasis,
    pd: PeriodData,
    b: BergmanData,
    charts: Vec<StandardChart>,
    le: LocalExpansions,
}

fn setup(g: usize, u: &[C64], kmax: u32) -> Setup {
    let curve = new_curve(g, u, c(1.0, 0.0)).unwrap();
    let cyc = build_cycles(&curve).unwrap();
    let pd = periods(&curve, &cyc).unwrap();
    let b = bergman_kernel(&curve, &cyc, &pd).unwrap();
    let mut charts = standard_charts(&curve, &curve).unwrap();
    fit_to_cycles(&mut charts, &cyc);
    let le = local_expansions(&b, &charts, kmax).unwrap();
    Setup { curve, cyc, pd, b, charts, le }
}

fn g1() -> Setup {
    setup(1, &[c(0.3, 0.1)], 5)
}

fn g2() -> Setup {
    setup(2, &[c(0.2, 0.1), c(-0.3, 0.15)], 5)
}

#[test]
fn reference_chart_is_in_darboux_form() {
    for s in [g1(), g2()] {
        for ch in &s.charts {
            let d = ch.darboux_defect().unwrap();
            for m in 0..=15 {
                assert!(d.coeff(m).norm() < 1e-10, "{}: coefficient {m} is {}", ch.point.label, d.coeff(m));
            }
        }
    }
}

#[test]
fn odd_part_of_the_differential_is_four_etabar_squared() {
    for s in [g1(), g2()] {
        for ch in &s.charts {
            let diff = &ch.ds_odd_difference().unwrap() - &LaurentSeries::monomial(2, c(4.0, 0.0));
            for m in 0..=15 {
                assert!(diff.coeff(m).norm() < 1e-10, "{}: coefficient {m} is {}", ch.point.label, diff.coeff(m));
            }
        }
    }
}

#[test]
fn leading_chart_coefficient() {
    // F(P) = (2 / (P'' y_i^2))^{1/3} (P - P_i) + ..., fixed up to a cube root of unity.
    for s in [g1(), g2()] {
        for ch in &s.charts {
            let z = ch.point.z;
            let h = 1e-3;
            let p2 = (s.curve.p(z + h) - s.curve.p(z) * 2.0 + s.curve.p(z - h)) / (h * h);
            let expected = c(2.0, 0.0) / (p2 * ch.point.y * ch.point.y);
            let f1 = ch.f_series.coeff(1);
            assert!((f1 * f1 * f1 - expected).norm() < 1e-5 * expected.norm());
        }
    }
}

#[test]
fn chart_series_parametrize_the_curve() {
    let s = g2();
    for ch in &s.charts {
        for k in 0..8 {
            let e = C64::from_polar(0.8 * ch.r_extract, 0.3 + k as f64);
            let (z, y) = ch.point_at(e);
            assert!((y * y - s.curve.q(z)).norm() < 1e-12 * (1.0 + y.norm_sqr()));
            let eta = ch.eta_of_etabar.eval(e);
            assert!((s.curve.p(z) - ch.point.p_value - eta * eta).norm() < 1e-12);
        }
    }
}

#[test]
fn distant_curve_is_out_of_the_neighbourhood() {
    let reference = new_curve(1, &[c(0.3, 0.1)], c(1.0, 0.0)).unwrap();
    let far = new_curve(1, &[c(0.9, -0.4)], c(1.0, 0.0)).unwrap();
    match standard_charts(&far, &reference) {
        Err(SwError::OutOfNeighbourhood { label, .. }) => assert_eq!(label, "1+"),
        other => panic!("expected OutOfNeighbourhood, got {other:?}"),
    }
}

#[test]
fn extracted_regular_part_is_symmetric() {
    for s in [g1(), g2()] {
        let scale = s.le.s().iter().map(|x| x.norm()).fold(0.0, f64::max);
        assert!(s.le.s_asymmetry() * scale < 1e-9, "asymmetry {:e}", s.le.s_asymmetry() * scale);
    }
}

#[test]
fn differentials_have_parity_between_sheets() {
    // η̄ at i- is minus η̄ at i+ on the same leaf, so c^{k,i-} = (-1)^{k-1} c^{k,i+}.
    for s in [g1(), g2()] {
        let g = s.curve.genus();
        for i in 0..g {
            let (plus, minus) = (2 * i, 2 * i + 1);
            for k in 1..=5u32 {
                let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
                for j in 0..g {
                    let a = s.le.c_at(ModeIndex::new(k, plus), j);
                    let b = s.le.c_at(ModeIndex::new(k, minus), j);
                    assert!((b - a * sign).norm() < 1e-9, "k = {k}, point {i}, j = {j}: {a} vs {b}");
                }
            }
        }
    }
}

#[test]
fn leading_coefficients_form_an_invertible_matrix() {
    let s = g2();
    let m = nalgebra::DMatrix::from_fn(2, 2, |i, j| s.le.c_at(ModeIndex::new(1, 2 * i), j));
    let scale = m.iter().map(|x| x.norm()).fold(0.0, f64::max);
    assert!(m.determinant().norm() > 1e-8 * scale * scale);
}

#[test]
fn b_periods_of_ebar_match_taylor_coefficients() {
    for s in [g1(), g2()] {
        let (a, b) = ebar_periods(&s.b, &s.charts, &s.cyc, 5, &QuadOptions::default()).unwrap();
        let two_pi_i = c(0.0, 2.0 * PI);
        let g = s.curve.genus();
        let mut num: f64 = 0.0;
        let mut den: f64 = 0.0;
        for f in 0..a.len() {
            for j in 0..g {
                assert!(a[f][j].norm() < 1e-8, "A-period of ē {f} on cycle {j}");
                num = num.max((b[f][j] - two_pi_i * s.le.c()[(f, j)]).norm());
                den = den.max((two_pi_i * s.le.c()[(f, j)]).norm());
            }
        }
        assert!(num < 1e-6 * den, "relative error {:e}", num / den);
    }
}

#[test]
fn riemann_bilinear_pairing() {
    for s in [g1(), g2()] {
        let g = s.curve.genus();
        let nr = s.le.ram().len();
        let (ea, eb) = ebar_periods(&s.b, &s.charts, &s.cyc, 5, &QuadOptions::default()).unwrap();
        let two_pi_i = c(0.0, 2.0 * PI);
        for k in 1..=5u32 {
            for alpha in 0..nr {
                let m = ModeIndex::new(k, alpha);
                let f = m.flat(nr);
                for j in 0..g {
                    let mut local = c(0.0, 0.0);
                    for beta in 0..nr {
                        let xi1 = SeriesDifferential::new(s.le.ebar_local(m, beta));
                        let xi2 = SeriesDifferential::new(s.le.omega_local(j, beta));
                        local += symplectic_pairing(&xi1, &xi2).unwrap();
                    }
                    let mut global = c(0.0, 0.0);
                    for i in 0..g {
                        let om_a = if i == j { c(1.0, 0.0) } else { c(0.0, 0.0) };
                        let om_b = s.pd.tau[(j, i)];
                        global += om_a * eb[f][i] - om_b * ea[f][i];
                    }
                    global /= two_pi_i;
                    let scale = global.norm().max(local.norm()).max(1e-3);
                    assert!((local - global).norm() < 1e-6 * scale, "k = {k}, label {alpha}, j = {j}: {local} vs {global}");
                }
            }
        }
    }
}
