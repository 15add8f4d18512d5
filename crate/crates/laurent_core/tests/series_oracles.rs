//! Oracle and property tests for the series algebra.
//!
//! The oracles are written against plain coefficient vectors so that they do
//! not share code paths with the library.

use laurent_core::*;
use proptest::prelude::*;

fn one() -> C64 {
    c64(1.0, 0.0)
}

/// Power-series product on plain vectors, truncated to `n` terms.
fn vmul(a: &[C64], b: &[C64], n: usize) -> Vec<C64> {
    let mut out = vec![c64(0.0, 0.0); n];
    for (i, x) in a.iter().enumerate().take(n) {
        for (j, y) in b.iter().enumerate() {
            if i + j < n {
                out[i + j] += x * y;
            }
        }
    }
    out
}

/// Power-series reciprocal by long division on plain vectors.
fn vrecip(a: &[C64], n: usize) -> Vec<C64> {
    let mut q = vec![c64(0.0, 0.0); n];
    let mut rem = vec![c64(0.0, 0.0); n];
    rem[0] = one();
    for k in 0..n {
        q[k] = rem[k] / a[0];
        for (j, aj) in a.iter().enumerate() {
            if k + j < n {
                rem[k + j] -= q[k] * aj;
            }
        }
    }
    q
}

/// log(1 + u) for u with u(0) = 0, via the Mercator series.
fn vlog1p(u: &[C64], n: usize) -> Vec<C64> {
    let mut out = vec![c64(0.0, 0.0); n];
    let mut pw = vec![c64(0.0, 0.0); n];
    pw[0] = one();
    for k in 1..n {
        pw = vmul(&pw, u, n);
        let s = if k % 2 == 1 { 1.0 } else { -1.0 } / k as f64;
        for i in 0..n {
            out[i] += pw[i] * s;
        }
    }
    out
}

/// exp(v) for v with v(0) = 0, via the exponential series.
fn vexp(v: &[C64], n: usize) -> Vec<C64> {
    let mut out = vec![c64(0.0, 0.0); n];
    let mut term = vec![c64(0.0, 0.0); n];
    term[0] = one();
    out[0] = one();
    for k in 1..n {
        term = vmul(&term, v, n);
        for t in term.iter_mut() {
            *t /= k as f64;
        }
        for i in 0..n {
            out[i] += term[i];
        }
    }
    out
}

fn series_from(min: i32, c: &[C64], trunc: i32) -> LaurentSeries {
    LaurentSeries::truncated(min, c.to_vec(), trunc)
}

fn close(a: C64, b: C64, tol: f64) -> bool {
    (a - b).norm() <= tol * (1.0 + b.norm())
}

#[test]
fn ring_examples() {
    let a = LaurentSeries::exact(1, vec![one(), one()]);
    let b = LaurentSeries::monomial(1, -one());
    let s = ring_ops(&a, &b, RingOp::Add).unwrap();
    assert_eq!(s, LaurentSeries::monomial(2, one()));

    let m = ring_ops(&LaurentSeries::monomial(-2, one()), &LaurentSeries::monomial(3, one()), RingOp::Mul).unwrap();
    assert_eq!(m, LaurentSeries::monomial(1, one()));
}

#[test]
fn geometric_series_by_long_division() {
    let n = 20;
    let den = LaurentSeries::truncated(0, vec![one(), -one()], n);
    let q = ring_ops(&LaurentSeries::constant(one()), &den, RingOp::Div).unwrap();
    assert_eq!(q.trunc_order(), Some(n));
    let oracle = vrecip(&[one(), -one()], (n + 1) as usize);
    for k in 0..=n {
        assert!(close(q.coeff(k), oracle[k as usize], 1e-15));
        assert!(close(q.coeff(k), one(), 1e-15));
    }
}

#[test]
fn division_by_zero_series_is_reported() {
    let z = LaurentSeries::zero_until(5);
    let r = ring_ops(&LaurentSeries::constant(one()), &z, RingOp::Div);
    assert_eq!(r, Err(SeriesError::DivisionByZeroSeries));
}

#[test]
fn exact_division_by_polynomial_needs_truncation() {
    let den = LaurentSeries::exact(0, vec![one(), -one()]);
    let r = LaurentSeries::constant(one()).div_series(&den);
    assert_eq!(r, Err(SeriesError::TruncationRequired));
}

#[test]
fn truncation_bookkeeping_for_products() {
    // (z^-1 + O(z^3)) * (z^2 + O(z^5)) is known up to z^4.
    let a = LaurentSeries::truncated(-1, vec![one()], 3);
    let b = LaurentSeries::truncated(2, vec![one()], 5);
    let p = &a * &b;
    assert_eq!(p.trunc_order(), Some(4));
    assert_eq!(p.coeff(1), one());
}

#[test]
fn inverse_examples() {
    let id = LaurentSeries::monomial(1, one());
    assert_eq!(functional_inverse(&id).unwrap(), id);
    let c = c64(2.0, -1.0);
    let inv = functional_inverse(&LaurentSeries::monomial(1, c)).unwrap();
    assert!(close(inv.coeff(1), c.inv(), 1e-15));

    let f = LaurentSeries::truncated(1, vec![one(), one()], 12);
    let h = compose_invert(&f, ComposeMode::FunctionalInverse).unwrap();
    let expected = [1.0, -1.0, 2.0, -5.0, 14.0, -42.0, 132.0, -429.0, 1430.0];
    for (i, e) in expected.iter().enumerate() {
        assert!(close(h.coeff(i as i32 + 1), c64(*e, 0.0), 1e-13), "k={} got {:?}", i + 1, h.coeff(i as i32 + 1));
    }
}

#[test]
fn not_invertible_without_linear_term() {
    let f = LaurentSeries::truncated(2, vec![one()], 10);
    assert!(matches!(functional_inverse(&f), Err(SeriesError::NotInvertible(_))));
}

/// Lagrange inversion: h_n = (1/n) [w^{n-1}] (w / f(w))^n.
fn lagrange_inverse(f: &[C64], n: usize) -> Vec<C64> {
    // f[0] is the linear coefficient: f(w) = w * (f[0] + f[1] w + ...).
    let phi = vrecip(f, n);
    let mut out = vec![c64(0.0, 0.0); n + 1];
    let mut pw = vec![c64(0.0, 0.0); n];
    pw[0] = one();
    for k in 1..=n {
        pw = vmul(&pw, &phi, n);
        out[k] = pw[k - 1] / k as f64;
    }
    out
}

#[test]
fn inverse_matches_lagrange_oracle_on_fixed_series() {
    let coeffs = [c64(0.7, 0.2), c64(-0.3, 0.5), c64(0.25, -0.1), c64(0.05, 0.3), c64(-0.2, 0.0)];
    let n = 16;
    let f = series_from(1, &coeffs, n as i32);
    let h = functional_inverse(&f).unwrap();
    let oracle = lagrange_inverse(&coeffs, n);
    for k in 1..=n {
        assert!(close(h.coeff(k as i32), oracle[k], 1e-11), "k={k}");
    }
}

#[test]
fn pow_frac_examples() {
    let f = LaurentSeries::truncated(0, vec![one(), one()], 10);
    let g = pow_frac(&f, 1, 2, 0).unwrap();
    assert!(close(g.coeff(0), one(), 1e-15));
    assert!(close(g.coeff(1), c64(0.5, 0.0), 1e-15));
    assert!(close(g.coeff(2), c64(-0.125, 0.0), 1e-15));

    let z2 = LaurentSeries::monomial(2, one());
    assert_eq!(pow_frac(&z2, 1, 2, 0).unwrap(), LaurentSeries::monomial(1, one()));

    let f = LaurentSeries::truncated(3, vec![one(), one()], 14);
    let g = pow_frac(&f, 2, 3, 0).unwrap();
    assert_eq!(g.valuation(), Some(2));
    assert!(close(g.coeff(2), one(), 1e-15));
    assert!(close(g.coeff(3), c64(2.0 / 3.0, 0.0), 1e-15));
    assert!(close(g.coeff(4), c64(-1.0 / 9.0, 0.0), 1e-15));
    // Oracle: exp((2/3) log(1+z)).
    let n = 12;
    let mut u = vec![c64(0.0, 0.0); n];
    u[1] = one();
    let l = vlog1p(&u, n);
    let v: Vec<C64> = l.iter().map(|x| x * (2.0 / 3.0)).collect();
    let e = vexp(&v, n);
    for k in 0..n {
        assert!(close(g.coeff(k as i32 + 2), e[k], 1e-13), "k={k}");
    }
}

#[test]
fn pow_frac_branch_undefined() {
    let f = LaurentSeries::truncated(1, vec![one(), one()], 8);
    assert_eq!(pow_frac(&f, 1, 2, 0), Err(SeriesError::BranchUndefined { m: 1, p: 1, q: 2 }));
}

#[test]
fn pow_frac_branch_of_minus_one() {
    // The root of c^p with principal argument: (-1)^{2/3} on branch 0 is +1.
    let f = LaurentSeries::truncated(3, vec![-one(), c64(0.3, 0.0)], 10);
    let g = pow_frac(&f, 2, 3, 0).unwrap();
    assert!(close(g.coeff(2), one(), 1e-15));
}

#[test]
fn residue_and_primitive_examples() {
    let dz_over_z = SeriesDifferential::new(LaurentSeries::monomial(-1, one()));
    assert_eq!(integrate_residue(&dz_over_z, IntegrateMode::Residue).unwrap(), IntegrateOutput::Residue(one()));
    for k in [-4, -2, 0, 1, 3] {
        let d = SeriesDifferential::new(LaurentSeries::monomial(k, one()));
        assert_eq!(d.residue().unwrap(), c64(0.0, 0.0));
    }
    let two_z = SeriesDifferential::new(LaurentSeries::monomial(1, c64(2.0, 0.0)));
    assert_eq!(two_z.primitive().unwrap(), LaurentSeries::monomial(2, one()));
    assert!(matches!(dz_over_z.primitive(), Err(SeriesError::NonzeroResidue { .. })));
}

#[test]
fn pairing_on_basis() {
    let e1 = SeriesDifferential::e_basis(1);
    let e2 = SeriesDifferential::e_basis(2);
    let f1 = SeriesDifferential::f_basis(1);
    assert!(close(symplectic_pairing(&e1, &f1).unwrap(), one(), 1e-15));
    assert_eq!(symplectic_pairing(&e1, &e2).unwrap(), c64(0.0, 0.0));
    for i in 1..6 {
        for j in 1..6 {
            let v = symplectic_pairing(&SeriesDifferential::e_basis(i), &SeriesDifferential::f_basis(j)).unwrap();
            let d = if i == j { 1.0 } else { 0.0 };
            assert!(close(v, c64(d, 0.0), 1e-15));
            let w = symplectic_pairing(&SeriesDifferential::f_basis(i), &SeriesDifferential::f_basis(j)).unwrap();
            assert_eq!(w, c64(0.0, 0.0));
        }
    }
}

#[test]
fn sqrt_shift_flow_examples() {
    let a = c64(0.3, -0.2);
    // z d(z^2) = 2 z^2 dz.
    let f = SeriesDifferential::new(LaurentSeries::monomial(2, c64(2.0, 0.0)));
    let same = sqrt_shift_flow(&f, c64(0.0, 0.0), -30);
    assert_eq!(same, f);
    let g = sqrt_shift_flow(&f, a, -30);
    assert!(close(g.base.coeff(2), c64(2.0, 0.0), 1e-15));
    assert!(close(g.base.coeff(0), a, 1e-15));
    assert!(close(g.base.coeff(-2), -a * a / 4.0, 1e-15));
    assert!(close(g.base.coeff(-4), a * a * a / 8.0, 1e-15));
    assert!(g.residue().unwrap().norm() < 1e-15);
}

#[test]
fn parity_split_example() {
    let f = LaurentSeries::exact(1, vec![one(), one()]);
    let (odd, even) = f.parity_split();
    assert_eq!(odd, LaurentSeries::monomial(1, one()));
    assert_eq!(even, LaurentSeries::monomial(2, one()));
    let e = LaurentSeries::exact(-2, vec![one(), c64(0.0, 0.0), c64(3.0, 0.0)]);
    let (o, ev) = e.parity_split();
    assert!(o.valuation().is_none());
    assert_eq!(ev, e);
}

fn arb_coeffs(len: usize) -> impl Strategy<Value = Vec<C64>> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), len).prop_map(|v| v.into_iter().map(|(a, b)| c64(a, b)).collect())
}

fn arb_series() -> impl Strategy<Value = LaurentSeries> {
    (-3i32..3, arb_coeffs(8)).prop_map(|(m, c)| LaurentSeries::truncated(m, c, m + 10))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_axioms(a in arb_series(), b in arb_series(), c in arb_series()) {
        let l = &(&a * &b) * &c;
        let r = &a * &(&b * &c);
        prop_assert_eq!(l.trunc_order(), r.trunc_order());
        prop_assert!(l.max_diff(&r) <= 1e-13 * (1.0 + l.max_abs()));
        let d1 = &a * &(&b + &c);
        let d2 = &(&a * &b) + &(&a * &c);
        prop_assert!(d1.max_diff(&d2) <= 1e-13 * (1.0 + d1.max_abs()));
    }

    #[test]
    fn division_inverts_multiplication(a in arb_series(), b in arb_coeffs(6)) {
        let mut b = b;
        b[0] += c64(1.5, 0.0);
        let bs = LaurentSeries::truncated(-1, b, 9);
        let q = a.div_series(&bs).unwrap();
        let back = &q * &bs;
        prop_assert!(back.max_diff(&a) <= 1e-12 * (1.0 + a.max_abs()));
    }

    #[test]
    fn compose_with_inverse_is_identity(c in arb_coeffs(10)) {
        let mut c = c;
        c[0] = c[0] * 0.2 + c64(1.5, 0.3);
        let f = LaurentSeries::truncated(1, c, 14);
        let h = functional_inverse(&f).unwrap();
        let id = compose(&f, &h).unwrap();
        let z = LaurentSeries::monomial(1, one());
        let scale = 1.0 + h.max_abs();
        prop_assert!(id.max_diff(&z) < 1e-12 * scale);
        prop_assert_eq!(id.trunc_order(), Some(14));
        let oracle = lagrange_inverse(&f.terms().map(|(_, x)| x).collect::<Vec<_>>(), 14);
        for k in 1..=14 {
            prop_assert!((h.coeff(k) - oracle[k as usize]).norm() < 1e-11 * scale);
        }
    }

    #[test]
    fn pow_frac_power_identity(c in arb_coeffs(8), m in 0i32..4, p in 1i32..4, q in 1i32..4) {
        let mut c = c;
        c[0] = c[0] * 0.2 + c64(1.5, 0.0);
        let mm = m * q;
        let f = LaurentSeries::truncated(mm, c, mm + 12);
        let g = pow_frac(&f, p, q, 0).unwrap();
        let mut gq = LaurentSeries::constant(one());
        for _ in 0..q { gq = &gq * &g; }
        let mut fp = LaurentSeries::constant(one());
        for _ in 0..p { fp = &fp * &f; }
        prop_assert!(gq.max_diff(&fp) <= 1e-12 * (1.0 + fp.max_abs()));
    }

    #[test]
    fn pairing_is_antisymmetric_and_bilinear(a in arb_coeffs(6), b in arb_coeffs(6), c in arb_coeffs(6), s in -2.0f64..2.0) {
        // Residue-free differentials supported on exponents -4..1 except -1.
        let mk = |v: &Vec<C64>| {
            let mut w = v.clone();
            w[3] = c64(0.0, 0.0);
            SeriesDifferential::new(LaurentSeries::exact(-4, w))
        };
        let (fa, fb, fc) = (mk(&a), mk(&b), mk(&c));
        let ab = symplectic_pairing(&fa, &fb).unwrap();
        let ba = symplectic_pairing(&fb, &fa).unwrap();
        prop_assert!((ab + ba).norm() < 1e-13);
        let lin = symplectic_pairing(&fa.add(&fc.scale(c64(s, 0.0))), &fb).unwrap();
        let sep = ab + symplectic_pairing(&fc, &fb).unwrap() * s;
        prop_assert!((lin - sep).norm() < 1e-13);
    }

    #[test]
    fn flow_round_trip(c in arb_coeffs(6), re in -0.1f64..0.1, im in -0.1f64..0.1) {
        let a = c64(re, im);
        let mut c = c;
        c[3] = c64(0.0, 0.0);
        let f = SeriesDifferential::new(LaurentSeries::exact(-4, c));
        let g = sqrt_shift_flow(&f, a, -60);
        let back = sqrt_shift_flow(&g, -a, -60);
        let d = back.base.drop_below(-20).max_diff(&f.base);
        prop_assert!(d < 1e-12, "difference {}", d);
        prop_assert!(g.residue().unwrap().norm() < 1e-14);
    }
}
