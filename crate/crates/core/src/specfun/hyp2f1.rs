//! Gauss hypergeometric function ₂F₁(a, b; c; z) on the negative real axis.
//!
//! For -1 <= z <= 0 the Pfaff transformation maps the argument into
//! [0, 1/2] where the power series converges quickly. For z < -1 the
//! 1/z connection formula brings the argument back into (-1, 0). When
//! b - a is an integer the two connection terms merge and the logarithmic
//! form of the formula is used instead.

use super::gamma::{digamma, digamma_over_gamma, gamma_fn, is_nonpositive_integer, rgamma};
use crate::error::{Error, Result};

const SERIES_MAX_TERMS: usize = 5_000_000;

/// ₂F₁(a, b; c; z) for z <= 0.
pub fn hyp2f1(a: f64, b: f64, c: f64, z: f64) -> Result<f64> {
    if is_nonpositive_integer(c) {
        return Err(Error::Pole(format!("hyp2f1 with c = {c}")));
    }
    if !(z <= 0.0) {
        return Err(Error::Domain(format!("hyp2f1 implemented for z <= 0, got {z}")));
    }
    if z == 0.0 || a == 0.0 || b == 0.0 {
        return Ok(1.0);
    }
    // terminating series
    if is_nonpositive_integer(a) || is_nonpositive_integer(b) {
        return power_series(a, b, c, z);
    }
    if z >= -1.0 {
        return pfaff(a, b, c, z);
    }
    let diff = b - a;
    if diff == diff.round() {
        if z >= -2.0 {
            return pfaff(a, b, c, z);
        }
        // symmetric in a and b, so take b = a + m with m >= 0
        return if diff >= 0.0 {
            connection_logarithmic(a, diff as u32, c, z)
        } else {
            connection_logarithmic(b, (-diff) as u32, c, z)
        };
    }
    connection_inverse(a, b, c, z)
}

fn pfaff(a: f64, b: f64, c: f64, z: f64) -> Result<f64> {
    let w = z / (z - 1.0);
    Ok((1.0 - z).powf(-a) * power_series(a, c - b, c, w)?)
}

fn connection_inverse(a: f64, b: f64, c: f64, z: f64) -> Result<f64> {
    let gc = gamma_fn(c)?;
    let inv = 1.0 / z;
    let mz = -z;
    let t1 = if rgamma(b) == 0.0 || rgamma(c - a) == 0.0 {
        0.0
    } else {
        gc * gamma_fn(b - a)? * rgamma(b) * rgamma(c - a)
            * mz.powf(-a)
            * hyp2f1(a, a - c + 1.0, a - b + 1.0, inv)?
    };
    let t2 = if rgamma(a) == 0.0 || rgamma(c - b) == 0.0 {
        0.0
    } else {
        gc * gamma_fn(a - b)? * rgamma(a) * rgamma(c - b)
            * mz.powf(-b)
            * hyp2f1(b, b - c + 1.0, b - a + 1.0, inv)?
    };
    Ok(t1 + t2)
}

/// `₂F₁(a, a + m; c; z)` for `z < -1`:
/// `Γ(c)(-z)^{-a} [ Σ_{k<m} (a)_k (m-k-1)! / (k! Γ(a+m) Γ(c-a-k)) z^{-k}
///  + Σ_k (a+m)_k (-1)^k z^{-k-m} / (k! (k+m)! Γ(a))
///    · (L_k / Γ(c-a-k-m) - ψ(c-a-k-m)/Γ(c-a-k-m)) ]`
/// with `L_k = ln(-z) + ψ(1+m+k) + ψ(1+k) - ψ(a+m+k)`.
fn connection_logarithmic(a: f64, m: u32, c: f64, z: f64) -> Result<f64> {
    let mz = -z;
    let inv = 1.0 / z;
    let mf = m as f64;

    let mut finite = 0.0;
    if m > 0 {
        // (a)_k (m-k-1)! / k! z^{-k}, built up from k = 0
        let mut rising = 1.0;
        let mut power = 1.0;
        let mut kfact = 1.0;
        for k in 0..m {
            let kf = k as f64;
            let tail_fact = gamma_fn(mf - kf)?;
            finite += rising * tail_fact / kfact * rgamma(c - a - kf) * power;
            rising *= a + kf;
            power *= inv;
            kfact *= kf + 1.0;
        }
        finite *= rgamma(a + mf);
    }

    let log_mz = mz.ln();
    // (a+m)_k / (k! (k+m)!) (-1)^k z^{-k-m}
    let mut coef = rgamma(mf + 1.0) * inv.powi(m as i32);
    let mut series = 0.0;
    let mut quiet = 0;
    for k in 0..SERIES_MAX_TERMS {
        let kf = k as f64;
        let x = c - a - kf - mf;
        let bracket = (log_mz + digamma(1.0 + mf + kf)? + digamma(1.0 + kf)?
            - digamma(a + mf + kf)?)
            * rgamma(x)
            - digamma_over_gamma(x)?;
        let term = coef * bracket;
        series += term;
        if term.abs() <= 1e-17 * series.abs() {
            quiet += 1;
            if quiet >= 3 {
                break;
            }
        } else {
            quiet = 0;
        }
        coef *= -(a + mf + kf) * inv / ((kf + 1.0) * (kf + 1.0 + mf));
        if coef == 0.0 {
            break;
        }
    }
    series *= rgamma(a);
    Ok(gamma_fn(c)? * mz.powf(-a) * (finite + series))
}

fn power_series(a: f64, b: f64, c: f64, z: f64) -> Result<f64> {
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut small_streak = 0;
    for n in 0..SERIES_MAX_TERMS {
        let nf = n as f64;
        term *= (a + nf) * (b + nf) / ((c + nf) * (nf + 1.0)) * z;
        if term == 0.0 {
            return Ok(sum);
        }
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() {
            small_streak += 1;
            if small_streak >= 2 {
                return Ok(sum);
            }
        } else {
            small_streak = 0;
        }
    }
    Err(Error::NoConvergence(format!(
        "hyp2f1 series ({a}, {b}; {c}; {z}) did not converge"
    )))
}
