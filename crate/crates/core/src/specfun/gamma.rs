//! Gamma function via the Lanczos approximation (g = 7, nine terms) with
//! reflection for arguments below one half.

use std::f64::consts::PI;

use crate::error::{Error, Result};

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// `true` when `x` is one of 0, -1, -2, ...
pub fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && x == x.round()
}

/// sin(pi x) with exact zeros at the integers.
pub(crate) fn sin_pi(x: f64) -> f64 {
    let mut r = x % 2.0;
    if r < 0.0 {
        r += 2.0;
    }
    // r in [0, 2)
    if r == 0.0 || r == 1.0 {
        return 0.0;
    }
    if r <= 0.25 {
        (PI * r).sin()
    } else if r <= 0.75 {
        (PI * (0.5 - r)).cos()
    } else if r <= 1.25 {
        (PI * (1.0 - r)).sin()
    } else if r <= 1.75 {
        -(PI * (r - 1.5)).cos()
    } else {
        (PI * (r - 2.0)).sin()
    }
}

fn lanczos_sum(x: f64) -> f64 {
    // x >= 0.5 here; the series is in terms of x - 1.
    let xm1 = x - 1.0;
    let mut acc = LANCZOS_COEF[0];
    for (i, c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        acc += c / (xm1 + i as f64);
    }
    acc
}

/// Γ(x) for real `x` away from the poles.
pub fn gamma_fn(x: f64) -> Result<f64> {
    if x.is_nan() {
        return Err(Error::Domain("gamma of NaN".into()));
    }
    if is_nonpositive_integer(x) {
        return Err(Error::Pole(format!("gamma at {x}")));
    }
    Ok(gamma_unchecked(x))
}

fn gamma_unchecked(x: f64) -> f64 {
    if x < 0.5 {
        PI / (sin_pi(x) * gamma_unchecked(1.0 - x))
    } else if x == x.round() && x <= 23.0 {
        // exact factorials
        let mut f = 1.0;
        let mut k = 2.0;
        while k < x {
            f *= k;
            k += 1.0;
        }
        f
    } else {
        let xm1 = x - 1.0;
        let t = xm1 + LANCZOS_G + 0.5;
        (2.0 * PI).sqrt() * t.powf(xm1 + 0.5) * (-t).exp() * lanczos_sum(x)
    }
}

/// 1/Γ(x), which is entire: returns 0 at the poles of Γ.
pub fn rgamma(x: f64) -> f64 {
    if is_nonpositive_integer(x) {
        0.0
    } else if x > 171.0 {
        let (lg, s) = ln_gamma_signed(x);
        s * (-lg).exp()
    } else {
        1.0 / gamma_unchecked(x)
    }
}

/// ln|Γ(x)| together with the sign of Γ(x).
///
/// Poles yield `(+inf, 1.0)`.
pub fn ln_gamma_signed(x: f64) -> (f64, f64) {
    if is_nonpositive_integer(x) {
        return (f64::INFINITY, 1.0);
    }
    if x < 0.5 {
        let s = sin_pi(x);
        let (lg, sg) = ln_gamma_signed(1.0 - x);
        let sign = if s < 0.0 { -sg } else { sg };
        return (PI.ln() - s.abs().ln() - lg, sign);
    }
    let xm1 = x - 1.0;
    let t = xm1 + LANCZOS_G + 0.5;
    let lg = 0.5 * (2.0 * PI).ln() + (xm1 + 0.5) * t.ln() - t + lanczos_sum(x).ln();
    (lg, 1.0)
}

/// ln Γ(x) for x > 0.
pub fn ln_gamma(x: f64) -> Result<f64> {
    if x <= 0.0 || x.is_nan() {
        return Err(Error::Domain(format!("ln_gamma requires x > 0, got {x}")));
    }
    Ok(ln_gamma_signed(x).0)
}

/// Γ(a)/Γ(b), computed through logarithms when either argument is large.
pub fn gamma_ratio(a: f64, b: f64) -> Result<f64> {
    if is_nonpositive_integer(a) {
        return Err(Error::Pole(format!("gamma({a}) in numerator")));
    }
    if is_nonpositive_integer(b) {
        return Err(Error::Pole(format!("gamma({b}) in denominator")));
    }
    if a.abs() < 30.0 && b.abs() < 30.0 {
        return Ok(gamma_unchecked(a) / gamma_unchecked(b));
    }
    let (la, sa) = ln_gamma_signed(a);
    let (lb, sb) = ln_gamma_signed(b);
    Ok(sa * sb * (la - lb).exp())
}

/// Digamma `ψ(x) = Γ'(x)/Γ(x)`; reflection below 1/2, upward recurrence
/// to `x ≥ 12`, then the Stirling series.
pub(crate) fn digamma(x: f64) -> Result<f64> {
    if is_nonpositive_integer(x) {
        return Err(Error::Pole(format!("digamma({x})")));
    }
    if x < 0.5 {
        // ψ(1 - x) - ψ(x) = π cot(πx)
        let cot = cos_pi(x) / sin_pi(x);
        return Ok(digamma(1.0 - x)? - PI * cot);
    }
    let mut acc = 0.0;
    let mut x = x;
    while x < 12.0 {
        acc -= 1.0 / x;
        x += 1.0;
    }
    let inv2 = 1.0 / (x * x);
    let tail = inv2
        * (1.0 / 12.0
            - inv2 * (1.0 / 120.0 - inv2 * (1.0 / 252.0 - inv2 * (1.0 / 240.0 - inv2 / 132.0))));
    Ok(acc + x.ln() - 0.5 / x - tail)
}

/// `ψ(x)/Γ(x)`, extended continuously to the poles where it equals
/// `(-1)^{k+1} k!` at `x = -k`.
pub(crate) fn digamma_over_gamma(x: f64) -> Result<f64> {
    if is_nonpositive_integer(x) {
        let k = -x;
        let sign = if k % 2.0 == 0.0 { -1.0 } else { 1.0 };
        return Ok(sign * gamma_fn(k + 1.0)?);
    }
    Ok(digamma(x)? * rgamma(x))
}

fn cos_pi(x: f64) -> f64 {
    sin_pi(x + 0.5)
}
