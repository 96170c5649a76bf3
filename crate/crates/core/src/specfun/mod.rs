//! Special functions and the normalization constants built from them.

mod bessel;
mod gamma;
mod hyp2f1;

pub use bessel::bessel_k;
pub use gamma::{gamma_fn, gamma_ratio, is_nonpositive_integer, ln_gamma, ln_gamma_signed, rgamma};
pub use hyp2f1::hyp2f1;

use crate::error::{Error, Result};

/// The two constants relating the weighted normal derivative and the
/// scattering coefficient to `(-Δ)^γ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormalizationConstants {
    /// `c_γ = -2^{2γ-1} Γ(γ) / (γ Γ(-γ))`
    pub c_gamma: f64,
    /// `d_γ = 2^{2γ} Γ(γ) / Γ(-γ)`
    pub d_gamma: f64,
}

impl NormalizationConstants {
    /// Residual of the identity `c_γ = -d_γ / (2γ)`.
    pub fn identity_residual(&self, gamma: f64) -> f64 {
        self.c_gamma + self.d_gamma / (2.0 * gamma)
    }
}

pub fn normalization_constants(gamma: f64) -> Result<NormalizationConstants> {
    if !(gamma > 0.0 && gamma < 1.0) {
        return Err(Error::Domain(format!(
            "normalization constants need gamma in (0, 1), got {gamma}"
        )));
    }
    // Γ(γ)/Γ(-γ) = -γ Γ(γ)/Γ(1-γ); exact at γ = 1/2
    let ratio = -gamma * gamma_ratio(gamma, 1.0 - gamma)?;
    let pow = 2f64.powf(2.0 * gamma);
    Ok(NormalizationConstants {
        c_gamma: -0.5 * pow * ratio / gamma,
        d_gamma: pow * ratio,
    })
}

/// Eigenvalue of the round-sphere scattering operator on degree-`k`
/// spherical harmonics of S^n: `Γ(k + n/2 + γ) / Γ(k + n/2 - γ)`.
pub fn sphere_scattering_eigenvalue(k: u32, n: u32, gamma: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::Domain("sphere dimension must be >= 1".into()));
    }
    let base = k as f64 + 0.5 * n as f64;
    gamma_ratio(base + gamma, base - gamma)
}

/// Rank-one root data for the real, complex, quaternionic and octonionic
/// hyperbolic spaces.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootDatum {
    d: u32,
    n: u32,
}

impl RootDatum {
    /// `d` is the real dimension of the division algebra (1, 2, 4 or 8).
    pub fn new(d: u32, n: u32) -> Result<Self> {
        if !matches!(d, 1 | 2 | 4 | 8) {
            return Err(Error::Domain(format!("division algebra dimension {d}")));
        }
        if n == 0 {
            return Err(Error::Domain("n must be >= 1".into()));
        }
        Ok(Self { d, n })
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn m_alpha(&self) -> f64 {
        (self.d * self.n) as f64
    }

    pub fn m_2alpha(&self) -> f64 {
        (self.d - 1) as f64
    }

    /// Half-sum of positive roots paired with the normalized root.
    pub fn rho(&self) -> f64 {
        0.5 * self.m_alpha() + self.m_2alpha()
    }
}

/// Parameters of the radial hypergeometric equation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HypTriple {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

pub fn hypergeometric_params(datum: &RootDatum, gamma: f64) -> HypTriple {
    let half_ma = 0.5 * datum.m_alpha();
    let m2 = datum.m_2alpha();
    HypTriple {
        a: 0.5 * (half_ma + m2 + gamma),
        b: 0.5 * (half_ma + m2 - gamma),
        c: 0.5 * (datum.m_alpha() + m2 + 1.0),
    }
}

/// Leading behavior of `Γ(arg + slope·ε)` as `ε → 0`: the coefficient and
/// the order of the pole in `ε` (0 or 1).
fn gamma_leading(arg: f64, slope: f64) -> Result<(f64, i32)> {
    if is_nonpositive_integer(arg) {
        // Γ(-k + δ) = (-1)^k / (k! δ) + O(1)
        let k = -arg;
        let sign = if k % 2.0 == 0.0 { 1.0 } else { -1.0 };
        Ok((sign * rgamma(k + 1.0) / slope, 1))
    } else {
        Ok((gamma_fn(arg)?, 0))
    }
}

/// Gamma-product part of the rank-one c-function before normalization.
/// Where numerator and denominator poles cancel the removable value is
/// returned; an uncancelled denominator pole gives 0.
fn c_function_unnormalized(datum: &RootDatum, x: f64) -> Result<f64> {
    let half_ma = 0.5 * datum.m_alpha();
    let m2 = datum.m_2alpha();
    let (num, num_order) = gamma_leading(x, 1.0)?;
    let (den1, den1_order) = gamma_leading(0.5 * (half_ma + 1.0 + x), 0.5)?;
    let (den2, den2_order) = gamma_leading(0.5 * (half_ma + m2 + x), 0.5)?;
    match num_order - den1_order - den2_order {
        order if order > 0 => Err(Error::Pole(format!("c-function numerator Γ({x})"))),
        order if order < 0 => Ok(0.0),
        _ => Ok(2f64.powf(-x) * num / (den1 * den2)),
    }
}

/// Rank-one Harish-Chandra c-function at spectral parameter `gamma`.
///
/// The constant c₀ is fixed by `c(ρ) = 1`, the value at which the
/// spherical function is identically one (so that
/// `c(γ) = lim_{t→∞} e^{(ρ-γ)t} φ_γ(t)` holds with the same constant).
pub fn hc_c_function(datum: &RootDatum, gamma: f64) -> Result<f64> {
    let norm = c_function_unnormalized(datum, datum.rho())?;
    Ok(c_function_unnormalized(datum, gamma)? / norm)
}
