//! Independent reference computations. Nothing here calls the library's
//! special functions or quadrature.

#![allow(dead_code)]

use std::f64::consts::PI;

/// High-precision reference values computed offline at 30 digits.
pub mod frozen {
    pub const GAMMA_HALF: f64 = 1.772_453_850_905_516;
    pub const GAMMA_MINUS_HALF: f64 = -3.544_907_701_811_032;
    pub const K_03_AT_07: f64 = 0.689_562_489_756_975_017;
    pub const K_25_AT_3: f64 = 0.084_060_631_974_117_382_7;
    pub const K_42_AT_1EM3: f64 = 283_773_842_706_171.905_645_528;
    pub const K_07_AT_40: f64 = 8.443_794_235_895_236_538e-19;
    pub const HYP_075_025_1_M4: f64 = 0.723_889_265_669_904_235;
    pub const HYP_06_01_15_M1E4: f64 = 0.472_051_595_672_172_720;
    pub const HYP_125_025_2_M1E10: f64 = 0.003_796_066_896_503_565_532_582;
    pub const C_GAMMA_025: f64 = 2.092_099_240_106_203_30;
    pub const D_GAMMA_025: f64 = -1.046_049_620_053_101_65;
    pub const PROFILE_03_AT_12: f64 = 0.187_950_644_429_719_953;
    pub const D_GAMMA_03: f64 = -1.047_960_875_115_015_08;
    pub const D_GAMMA_02: f64 = -1.040_628_756_282_319_96;
    /// `2^{0.6} 3^{0.4} / (d_{0.3} d_{0.2})`
    pub const S22_FACTOR_2_3: f64 = 2.156_878_133_544_388_01;
    /// `Γ(20.8) / Γ(20.2) / 20^{0.6}`
    pub const STIRLING_RATIO_20: f64 = 1.000_039_986_017_9;
}

/// Composite Simpson rule with `panels` (even) subintervals.
pub fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    let n = panels + panels % 2;
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for j in 1..n {
        let w = if j % 2 == 1 { 4.0 } else { 2.0 };
        s += w * f(a + j as f64 * h);
    }
    s * h / 3.0
}

/// `K_ν(z)` from `∫₀^T e^{-z cosh t} cosh(νt) dt` by Simpson's rule.
pub fn bessel_k_simpson(nu: f64, z: f64) -> f64 {
    // integrand below 1e-300 relative beyond T
    let t_max = ((700.0 + nu * 20.0) / z).acosh().max(1.0) + 2.0;
    simpson(|t| (-z * t.cosh()).exp() * (nu * t).cosh(), 0.0, t_max, 200_000)
}

/// Tanh-sinh quadrature on `(a, b)`; tolerant of integrable endpoint
/// singularities. `f` receives `(x, distance to a, distance to b)` so
/// singular factors can be evaluated without cancellation.
pub fn tanh_sinh(f: impl Fn(f64, f64, f64) -> f64, a: f64, b: f64) -> f64 {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let h = 1.0 / 64.0;
    let mut sum = 0.0;
    for k in -(6 * 64)..=(6 * 64) {
        let t = k as f64 * h;
        let u = 0.5 * PI * t.sinh();
        let x = u.tanh();
        let w = 0.5 * PI * t.cosh() / u.cosh().powi(2);
        // distances from the endpoints, computed stably
        let e = (-2.0 * u.abs()).exp();
        let near = half * 2.0 * e / (1.0 + e);
        let (da, db) = if x < 0.0 { (near, 2.0 * half - near) } else { (2.0 * half - near, near) };
        if da <= 0.0 || db <= 0.0 {
            continue;
        }
        let v = f(mid + half * x, da, db);
        if v.is_finite() {
            sum += w * v;
        }
    }
    sum * half * h
}

/// `₂F₁(a, b; c; z)` for `c > b > 0`, `z ≤ 0`, from Euler's integral
/// divided by its value at `z = 0` (which is the Beta function).
pub fn hyp2f1_euler(a: f64, b: f64, c: f64, z: f64) -> f64 {
    let kernel = |zz: f64| {
        move |t: f64, dt0: f64, dt1: f64| dt0.powf(b - 1.0) * dt1.powf(c - b - 1.0) * (1.0 - zz * t).powf(-a)
    };
    tanh_sinh(kernel(z), 0.0, 1.0) / tanh_sinh(kernel(0.0), 0.0, 1.0)
}

/// Profile `θ_γ(z)` by integrating `θ'' + (1-2γ)/z θ' - θ = 0` backward
/// from the decaying asymptotic state at large z with RK4, then fixing the
/// scale from the behavior near 0:
/// `θ ≈ A (1 + z²/(4(1-γ))) + B z^{2γ} (1 + z²/(4(1+γ)))`, `A = θ(0)`.
pub fn profile_ode(gamma: f64, z_eval: f64) -> f64 {
    let z_start: f64 = 40.0;
    // u = z^γ K_γ(z) ~ z^{γ-1/2} e^{-z} (1 + (4γ²-1)/(8z)), scale dropped
    let mu = 4.0 * gamma * gamma;
    let amp = |z: f64| z.powf(gamma - 0.5) * (1.0 + (mu - 1.0) / (8.0 * z) + (mu - 1.0) * (mu - 9.0) / (128.0 * z * z));
    let e0 = (-(z_start - 30.0)).exp();
    let dz = 1e-6;
    let f0 = amp(z_start) * e0;
    let fp = (amp(z_start + dz) * (-(z_start + dz - 30.0)).exp() - amp(z_start - dz) * (-(z_start - dz - 30.0)).exp()) / (2.0 * dz);
    let rhs = |z: f64, y: [f64; 2]| [y[1], y[0] - (1.0 - 2.0 * gamma) / z * y[1]];
    let mut z = z_start;
    let mut y = [f0, fp];
    let targets = [z_eval, 2e-3, 1e-3];
    let mut found = [0.0; 3];
    let mut stops: Vec<(usize, f64)> = targets.iter().copied().enumerate().collect();
    stops.sort_by(|a, b| b.1.total_cmp(&a.1));
    for (idx, target) in stops {
        while z > target {
            let h = -(z - target).min((z / 400.0).max(1e-6)).min(1e-3);
            let k1 = rhs(z, y);
            let k2 = rhs(z + 0.5 * h, [y[0] + 0.5 * h * k1[0], y[1] + 0.5 * h * k1[1]]);
            let k3 = rhs(z + 0.5 * h, [y[0] + 0.5 * h * k2[0], y[1] + 0.5 * h * k2[1]]);
            let k4 = rhs(z + h, [y[0] + h * k3[0], y[1] + h * k3[1]]);
            y[0] += h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]);
            y[1] += h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]);
            z += h;
        }
        found[idx] = y[0];
    }
    let basis = |z: f64| {
        (
            1.0 + z * z / (4.0 * (1.0 - gamma)),
            z.powf(2.0 * gamma) * (1.0 + z * z / (4.0 * (1.0 + gamma))),
        )
    };
    let (p1, q1) = basis(2e-3);
    let (p2, q2) = basis(1e-3);
    let a = (found[1] * q2 - found[2] * q1) / (p1 * q2 - p2 * q1);
    found[0] / a
}

/// Coefficients `a_j` of the regular part `Σ a_j z^{2j}` of the profile:
/// `a_0 = 1`, `a_j = a_{j-1} / (4 j (j - γ))`.
pub fn regular_part_coefficients(gamma: f64, terms: usize) -> Vec<f64> {
    let mut out = vec![1.0];
    for j in 1..terms {
        let jf = j as f64;
        out.push(out[j - 1] / (4.0 * jf * (jf - gamma)));
    }
    out
}

/// Splitmix-style deterministic generator for test data.
pub struct Lcg(u64);

impl Lcg {
    pub fn new(seed: u64) -> Self {
        Self(seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ 0xD1B5_4A32_D192_ED03)
    }

    /// Uniform in [-1, 1).
    pub fn next(&mut self) -> f64 {
        self.0 = self.0.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^= z >> 31;
        2.0 * ((z >> 11) as f64 / (1u64 << 53) as f64) - 1.0
    }
}

/// Random trigonometric polynomial with modes `1..=max_mode` per axis.
pub fn band_limited(seed: u64, sizes: &[usize], max_mode: usize) -> frax_core::GridFunction {
    let mut rng = Lcg::new(seed);
    let dim = sizes.len();
    let mut terms = Vec::new();
    match dim {
        1 => {
            for k in 0..=max_mode {
                terms.push((vec![k as f64], rng.next(), rng.next() * PI));
            }
        }
        _ => {
            for k1 in 0..=max_mode {
                for k2 in 0..=max_mode {
                    terms.push((vec![k1 as f64, k2 as f64], rng.next(), rng.next() * PI));
                }
            }
        }
    }
    let periods = vec![2.0 * PI; dim];
    frax_core::grid::sample(
        |x| {
            terms
                .iter()
                .map(|(k, a, ph)| {
                    let arg: f64 = k.iter().zip(x).map(|(k, x)| k * x).sum();
                    if dim == 1 {
                        a * (arg + ph).cos()
                    } else {
                        a * (k[0] * x[0] + ph).cos() * (k[1] * x[1] - ph).cos()
                    }
                })
                .sum()
        },
        sizes,
        &periods,
    )
    .expect("valid grid")
}

/// Largest DFT-coefficient gap relative to the peak coefficient of `want`,
/// taken over the modes where `want` carries at least `1e-9` of that peak.
/// Repeated spectral derivatives lift roundoff in empty high modes by powers
/// of `k_max`, so grid-space maxima overstate the error of resolved content.
#[allow(dead_code)]
pub fn resolved_mode_gap(got: &frax_core::GridFunction, want: &frax_core::GridFunction) -> f64 {
    let g = got.spectrum();
    let w = want.spectrum();
    let peak = w.iter().map(|c| c.norm()).fold(0.0, f64::max);
    if peak == 0.0 {
        return g.iter().map(|c| c.norm()).fold(0.0, f64::max);
    }
    g.iter()
        .zip(&w)
        .filter(|(_, w)| w.norm() > 1e-9 * peak)
        .map(|(g, w)| (g - w).norm() / peak)
        .fold(0.0, f64::max)
}
