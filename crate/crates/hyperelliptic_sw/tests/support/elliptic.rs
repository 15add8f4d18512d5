//! Normalized genus-one kernel from Jacobi's theta function.
//!
//! With `v = ∫ dz / y` divided by the A-period `ω_A` and `τ` the ratio of the
//! B-period to the A-period, the normalized kernel is
//! `B = ∂_{v_p} ∂_{v_q} log θ_1(π (v_p - v_q) | τ) dv_p dv_q
//!    = -π^2 (log θ_1)''(π (v_p - v_q)) dz_p dz_q / (ω_A^2 y_p y_q)`.

use std::f64::consts::PI;

use hyperelliptic_sw::{integrate_path, QuadOptions, SWCurve, SegmentPath};
use laurent_core::C64;

/// `θ_1(x | τ)` and its first two derivatives in `x`.
pub fn theta1(x: C64, tau: C64) -> (C64, C64, C64) {
    let iq = C64::new(0.0, PI) * tau;
    let mut t = C64::new(0.0, 0.0);
    let mut t1 = C64::new(0.0, 0.0);
    let mut t2 = C64::new(0.0, 0.0);
    for n in 0..60 {
        let m = (2 * n + 1) as f64;
        let q = (iq * ((n as f64 + 0.5) * (n as f64 + 0.5))).exp() * if n % 2 == 0 { 2.0 } else { -2.0 };
        let arg = x * m;
        t += q * arg.sin();
        t1 += q * arg.cos() * m;
        t2 -= q * arg.sin() * (m * m);
    }
    (t, t1, t2)
}

/// Oracle kernel at `(z_p, y_p)` and `(z_q, y_q)`, where `y_p` is the value
/// continued from `y_q` along the straight segment; returns `(y_p, B)`.
pub fn theta_kernel(c: &SWCurve, omega_a: C64, tau: C64, zq: C64, yq: C64, zp: C64) -> (C64, C64) {
    let seg = SegmentPath { from: zq, to: zp, y_start: yq };
    let f = |_z: C64, y: C64, out: &mut [C64]| out[0] = y.inv();
    let r = integrate_path(c, &seg, 1, &f, &QuadOptions::default()).expect("Abel integral converges");
    let v = r.values[0] / omega_a;
    let (t, t1, t2) = theta1(v * PI, tau);
    let second = t2 / t - (t1 / t) * (t1 / t);
    let b = -second * PI * PI / (omega_a * omega_a * r.y_end * yq);
    (r.y_end, b)
}
