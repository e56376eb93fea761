//! Quadrature rules.

use std::f64::consts::PI;

/// Gauss–Legendre nodes and weights on [−1, 1].
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let p = if n == 0 { 1.0 } else { p1 };
            let pm = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (z * p - pm) / (z * z - 1.0);
            let dz = p / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        w[n - 1 - i] = w[i];
    }
    (x, w)
}

/// Gauss–Legendre rule mapped to [a, b].
pub fn gl_interval(n: usize, a: f64, b: f64) -> Vec<(f64, f64)> {
    let (x, w) = gauss_legendre(n);
    let (c, r) = (0.5 * (a + b), 0.5 * (b - a));
    x.iter().zip(&w).map(|(&xi, &wi)| (c + r * xi, r * wi)).collect()
}

/// Double-exponential trapezoid nodes for ∫_ℝ g(x)dx with g of algebraic decay:
/// x = sinh((π/2)·sinh t), t ∈ [−L, L].
pub fn de_trapezoid(n: usize, l: f64) -> Vec<(f64, f64)> {
    let h = 2.0 * l / (n - 1) as f64;
    (0..n)
        .map(|k| {
            let t = -l + k as f64 * h;
            let end = if k == 0 || k == n - 1 { 0.5 } else { 1.0 };
            let s = 0.5 * PI * t.sinh();
            (s.sinh(), end * h * 0.5 * PI * t.cosh() * s.cosh())
        })
        .collect()
}

/// Uniform periodic trapezoid nodes on [0, 2π).
pub fn periodic(n: usize) -> Vec<(f64, f64)> {
    let h = 2.0 * PI / n as f64;
    (0..n).map(|k| (k as f64 * h, h)).collect()
}

/// Tanh-sinh nodes on (−π/2, π/2): θ = (π/2)·tanh((π/2)·sinh t), t ∈ [−L, L].
pub fn tanh_sinh_half_pi(n: usize, l: f64) -> Vec<(f64, f64)> {
    let h = 2.0 * l / (n - 1) as f64;
    (0..n)
        .map(|k| {
            let t = -l + k as f64 * h;
            let u = 0.5 * PI * t.sinh();
            let c = u.cosh();
            (0.5 * PI * u.tanh(), h * 0.25 * PI * PI * t.cosh() / (c * c))
        })
        .filter(|&(th, _)| 0.5 * PI - th.abs() > 1e-10)
        .collect()
}
