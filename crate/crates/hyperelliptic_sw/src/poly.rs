//! Dense complex polynomials in ascending coefficient order.

use laurent_core::C64;
use nalgebra::DMatrix;

/// Horner evaluation of `Σ c_m z^m`.
pub fn eval(coeffs: &[C64], z: C64) -> C64 {
    coeffs.iter().rev().fold(C64::new(0.0, 0.0), |acc, &c| acc * z + c)
}

/// Coefficients of the derivative.
pub fn derivative(coeffs: &[C64]) -> Vec<C64> {
    coeffs.iter().enumerate().skip(1).map(|(m, &c)| c * m as f64).collect()
}

/// Product of two polynomials.
pub fn mul(a: &[C64], b: &[C64]) -> Vec<C64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![C64::new(0.0, 0.0); a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Taylor coefficients of `p(z0 + t)` in `t`.
pub fn taylor_shift(coeffs: &[C64], z0: C64) -> Vec<C64> {
    let mut out = coeffs.to_vec();
    let n = out.len();
    // repeated synthetic division
    for k in 0..n {
        for j in (k..n - 1).rev() {
            let next = out[j + 1];
            out[j] += z0 * next;
        }
    }
    out
}

/// Roots of a polynomial with nonzero leading coefficient.
///
/// Seeds come from the eigenvalues of the companion matrix (points on a
/// circle if the eigen-solver fails); all roots are then refined together by
/// Aberth iteration on the original polynomial.
pub fn roots(coeffs: &[C64]) -> Vec<C64> {
    let deg = coeffs.len() - 1;
    if deg == 0 {
        return Vec::new();
    }
    let lead = coeffs[deg];
    let mut comp = DMatrix::from_element(deg, deg, C64::new(0.0, 0.0));
    for i in 1..deg {
        comp[(i, i - 1)] = C64::new(1.0, 0.0);
    }
    for i in 0..deg {
        comp[(i, deg - 1)] = -coeffs[i] / lead;
    }
    let radius = 1.0 + coeffs[..deg].iter().map(|c| (c / lead).norm()).fold(0.0, f64::max);
    let mut z: Vec<C64> = match comp.eigenvalues() {
        Some(v) => v.iter().copied().collect(),
        None => (0..deg)
            .map(|k| C64::from_polar(radius, 0.4 + 2.0 * std::f64::consts::PI * k as f64 / deg as f64))
            .collect(),
    };
    let d = derivative(coeffs);
    for _ in 0..100 {
        let mut moved = 0.0f64;
        for i in 0..deg {
            let p = eval(coeffs, z[i]);
            let dp = eval(&d, z[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let repel: C64 = (0..deg).filter(|&j| j != i).map(|j| (z[i] - z[j]).inv()).sum();
            let step = ratio / (C64::new(1.0, 0.0) - ratio * repel);
            z[i] -= step;
            moved = moved.max(step.norm() / z[i].norm().max(1.0));
        }
        if moved < 1e-16 {
            break;
        }
    }
    z
}

/// Sorts points by real part, then imaginary part.
pub fn sort_points(v: &mut [C64]) {
    v.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
}
