//! Radial eigenfunctions, minimal Poisson kernels and boundary limits on
//! hyperbolic space and products of two hyperbolic spaces.
//!
//! Kernels here are unnormalized; residuals and limits do not see the
//! constant.

use crate::error::{Error, Result};
use crate::grid::{FracParams, ProductParams};
use crate::specfun::{bessel_k, hyp2f1, hypergeometric_params, RootDatum};

/// A point `(x, y)` of the upper half-space, `y > 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct HalfSpacePoint {
    x: Vec<f64>,
    y: f64,
}

impl HalfSpacePoint {
    pub fn new(x: Vec<f64>, y: f64) -> Result<Self> {
        if !(y > 0.0) {
            return Err(Error::Domain(format!("half-space point needs y > 0, got {y}")));
        }
        Ok(Self { x, y })
    }

    pub fn x(&self) -> &[f64] {
        &self.x
    }

    pub fn y(&self) -> f64 {
        self.y
    }

    fn shifted(&self, coord: usize, delta: f64) -> Self {
        let mut p = self.clone();
        if coord < p.x.len() {
            p.x[coord] += delta;
        } else {
            p.y += delta;
        }
        p
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PowerBranch {
    /// `y^{n/2 + γ}`
    Decaying,
    /// `y^{n/2 - γ}`
    Growing,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HalfSpaceVariant {
    /// `y²φ'' - (n-1)yφ' + μφ = 0` on a power solution.
    Euler(PowerBranch),
    /// `y²φ'' - (n-1)yφ' - y²φ + μφ = 0` on `y^{n/2} K_γ(y)`.
    Bessel,
}

/// Residual divided by the sum of the magnitudes of its terms.
fn relative(terms: &[f64]) -> f64 {
    let scale: f64 = terms.iter().map(|t| t.abs()).sum();
    let sum: f64 = terms.iter().sum();
    if scale == 0.0 {
        0.0
    } else {
        sum.abs() / scale
    }
}

/// Relative residual of the half-space radial equation on its exact solution.
pub fn radial_residual_halfspace(y: f64, params: &FracParams, variant: HalfSpaceVariant) -> Result<f64> {
    if !(y > 0.0) {
        return Err(Error::Domain(format!("y must be > 0, got {y}")));
    }
    let n = params.nf();
    let gamma = params.gamma();
    let mu = params.mu();
    match variant {
        HalfSpaceVariant::Euler(branch) => {
            let m = match branch {
                PowerBranch::Decaying => 0.5 * n + gamma,
                PowerBranch::Growing => 0.5 * n - gamma,
            };
            let phi = y.powf(m);
            let d1 = m * y.powf(m - 1.0);
            let d2 = m * (m - 1.0) * y.powf(m - 2.0);
            Ok(relative(&[y * y * d2, -(n - 1.0) * y * d1, mu * phi]))
        }
        HalfSpaceVariant::Bessel => {
            let k = |order: f64| bessel_k(order.abs(), y);
            let k0 = k(gamma)?;
            let k1 = -0.5 * (k(gamma - 1.0)? + k(gamma + 1.0)?);
            let k2 = 0.25 * (k(gamma - 2.0)? + 2.0 * k0 + k(gamma + 2.0)?);
            let h = 0.5 * n;
            let w = y.powf(h);
            let phi = w * k0;
            let d1 = h * w / y * k0 + w * k1;
            let d2 = h * (h - 1.0) * w / (y * y) * k0 + n * w / y * k1 + w * k2;
            Ok(relative(&[y * y * d2, -(n - 1.0) * y * d1, -y * y * phi, mu * phi]))
        }
    }
}

/// Spherical function `₂F₁(a, b; c; -sinh² t)` of a rank-one space.
pub fn spherical_function(datum: &RootDatum, gamma: f64, t: f64) -> Result<f64> {
    let p = hypergeometric_params(datum, gamma);
    hyp2f1(p.a, p.b, p.c, -t.sinh().powi(2))
}

/// `e^{(ρ - γ)t} φ_γ(t)`, which tends to a multiple of the c-function.
pub fn spherical_function_scaled(datum: &RootDatum, gamma: f64, t: f64) -> Result<f64> {
    Ok(((datum.rho() - gamma) * t).exp() * spherical_function(datum, gamma, t)?)
}

/// Relative residual of `φ'' + n coth(t) φ' + (n²/4 - γ²) φ = 0` on
/// `φ(t) = ₂F₁(a, b; c; -sinh² t)` for real hyperbolic space of boundary
/// dimension `n`.
pub fn radial_residual_hyperboloid(t: f64, params: &FracParams) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::Domain(format!("t must be > 0, got {t}")));
    }
    let n = params.nf();
    let gamma = params.gamma();
    let p = hypergeometric_params(&RootDatum::new(1, params.n())?, gamma);
    let (a, b, c) = (p.a, p.b, p.c);
    let z = -t.sinh().powi(2);
    let dz = -(2.0 * t).sinh();
    let ddz = -2.0 * (2.0 * t).cosh();
    let f0 = hyp2f1(a, b, c, z)?;
    let f1 = a * b / c * hyp2f1(a + 1.0, b + 1.0, c + 1.0, z)?;
    let f2 = a * (a + 1.0) * b * (b + 1.0) / (c * (c + 1.0)) * hyp2f1(a + 2.0, b + 2.0, c + 2.0, z)?;
    let d1 = f1 * dz;
    let d2 = f2 * dz * dz + f1 * ddz;
    let coth = 1.0 / t.tanh();
    Ok(relative(&[d2, n * coth * d1, (0.25 * n * n - gamma * gamma) * f0]))
}

/// Minimal kernel `(y / (|x - b|² + y²))^{n/2 + γ}`.
pub fn minimal_kernel(z: &HalfSpacePoint, b: &[f64], params: &FracParams) -> Result<f64> {
    if z.x.len() != params.n() as usize || b.len() != z.x.len() {
        return Err(Error::Dimension { expected: params.n() as usize, found: z.x.len().max(b.len()) });
    }
    let r2: f64 = z.x.iter().zip(b).map(|(x, b)| (x - b) * (x - b)).sum();
    Ok((z.y / (r2 + z.y * z.y)).powf(params.s()))
}

/// Product of the two rank-one minimal kernels.
pub fn product_poisson_eval(
    z1: &HalfSpacePoint,
    z2: &HalfSpacePoint,
    b1: &[f64],
    b2: &[f64],
    params: &ProductParams,
) -> Result<f64> {
    Ok(minimal_kernel(z1, b1, &params.p1)? * minimal_kernel(z2, b2, &params.p2)?)
}

/// `(-Δ_{g⁺} - μ) u` at `z` by second-order central differences, with
/// `Δ_{g⁺} = y² Δ_{x,y} - (n-1) y ∂_y`.
pub fn harmonicity_residual(
    u: impl Fn(&HalfSpacePoint) -> f64,
    z: &HalfSpacePoint,
    params: &FracParams,
    h: f64,
) -> Result<f64> {
    if z.x.len() != params.n() as usize {
        return Err(Error::Dimension { expected: params.n() as usize, found: z.x.len() });
    }
    if !(h > 0.0 && h < z.y) {
        return Err(Error::Domain(format!("step {h} must lie in (0, y)")));
    }
    let center = u(z);
    let mut lap = 0.0;
    for coord in 0..=z.x.len() {
        lap += (u(&z.shifted(coord, h)) - 2.0 * center + u(&z.shifted(coord, -h))) / (h * h);
    }
    let dy = (u(&z.shifted(z.x.len(), h)) - u(&z.shifted(z.x.len(), -h))) / (2.0 * h);
    let y = z.y;
    let lap_g = y * y * lap - (params.nf() - 1.0) * y * dy;
    Ok(-lap_g - params.mu() * center)
}

/// Richardson combination `(4 R(h/2) - R(h)) / 3`, fourth order in `h`.
pub fn harmonicity_residual_extrapolated(
    u: impl Fn(&HalfSpacePoint) -> f64,
    z: &HalfSpacePoint,
    params: &FracParams,
    h: f64,
) -> Result<f64> {
    let coarse = harmonicity_residual(&u, z, params, h)?;
    let fine = harmonicity_residual(&u, z, params, 0.5 * h)?;
    Ok((4.0 * fine - coarse) / 3.0)
}

/// Residuals of both component equations `(-Δ_{g⁺_i} - μ_i) u = 0` for a
/// function on the product, each with the other point held fixed.
pub fn product_harmonicity_residuals(
    u: impl Fn(&HalfSpacePoint, &HalfSpacePoint) -> f64,
    z1: &HalfSpacePoint,
    z2: &HalfSpacePoint,
    params: &ProductParams,
    h: f64,
) -> Result<(f64, f64)> {
    let r1 = harmonicity_residual(|p| u(p, z2), z1, &params.p1, h)?;
    let r2 = harmonicity_residual(|p| u(z1, p), z2, &params.p2, h)?;
    Ok((r1, r2))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LimitBehavior {
    Converges,
    Diverges,
}

/// Ratio `θ = lim y₁/y₂`, possibly infinite.
fn check_theta(theta: f64) -> Result<()> {
    if theta >= 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("theta must lie in [0, inf], got {theta}")))
    }
}

fn check_order(gpair: (f64, f64), gbar: (f64, f64)) -> Result<()> {
    if gpair.0 + gpair.1 > gbar.0 + gbar.1 {
        Ok(())
    } else {
        Err(Error::Ordering(format!(
            "need gamma1 + gamma2 > gamma1_bar + gamma2_bar, got {gpair:?} and {gbar:?}"
        )))
    }
}

/// Behavior of `y₁^{-(n₁/2+γ̄₁)} y₂^{-(n₂/2+γ̄₂)} ũ` for the superposition
/// of two strong solutions, as `y₁, y₂ → 0` with `y₁/y₂ → θ`.
///
/// Finite positive `θ` always converges. `θ = 0` converges iff `γ₁ > γ̄₁`;
/// `θ = ∞` converges iff `γ₂ > γ̄₂`.
pub fn mixed_limit_classify(gpair: (f64, f64), gbar: (f64, f64), theta: f64) -> Result<LimitBehavior> {
    check_order(gpair, gbar)?;
    check_theta(theta)?;
    let converges = if theta == 0.0 {
        gpair.0 > gbar.0
    } else if theta.is_infinite() {
        gpair.1 > gbar.1
    } else {
        true
    };
    Ok(if converges { LimitBehavior::Converges } else { LimitBehavior::Diverges })
}

/// Numerical outcome of following the normalized superposition to the corner.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LimitWitness {
    pub behavior: LimitBehavior,
    /// Limit value when the sequence settles.
    pub limit: Option<f64>,
}

const LADDER_STEPS: usize = 60;
const LADDER_DECADES: i32 = 5;
const BLOWUP: f64 = 1e6;

/// Follows a sequence `g(10^{-5j})`, `j = 1, …, 60`, and decides whether it
/// settles or blows up.
fn follow(g: impl Fn(f64) -> f64) -> Result<Option<f64>> {
    let seq: Vec<f64> = (1..=LADDER_STEPS)
        .map(|j| g(10f64.powi(-LADDER_DECADES * j as i32)))
        .collect();
    let last = seq[seq.len() - 1];
    let prev = seq[seq.len() - 2];
    if !last.is_finite() || last.abs() > BLOWUP {
        return Ok(None);
    }
    if (last - prev).abs() <= 1e-6 * (1.0 + last.abs()) {
        return Ok(Some(last));
    }
    Err(Error::NoConvergence(format!(
        "ladder neither settled nor blew up (last {last:e}, previous {prev:e})"
    )))
}

/// Numerical witness for [`mixed_limit_classify`]: evaluates the normalized
/// model `f̄ + y₁^{γ₁-γ̄₁} y₂^{γ₂-γ̄₂} f` along `y₁ = θ y₂` for finite
/// `θ > 0`, and as iterated limits (`y₁` first for `θ = 0`, `y₂` first for
/// `θ = ∞`). Both extensions are replaced by their boundary values.
pub fn mixed_limit_witness(
    gpair: (f64, f64),
    gbar: (f64, f64),
    theta: f64,
    f: f64,
    f_bar: f64,
) -> Result<LimitWitness> {
    check_order(gpair, gbar)?;
    check_theta(theta)?;
    let (e1, e2) = (gpair.0 - gbar.0, gpair.1 - gbar.1);
    // powers evaluated in log space so that tiny heights do not underflow
    let model = |y1: f64, y2: f64| f_bar + (e1 * y1.ln() + e2 * y2.ln()).exp() * f;
    let settled = if theta == 0.0 || theta.is_infinite() {
        let inner_first = theta == 0.0;
        let inner = |outer: f64| -> Result<Option<f64>> {
            follow(|y| if inner_first { model(y, outer) } else { model(outer, y) })
        };
        let diverged = std::cell::Cell::new(false);
        let outer = follow(|y| match inner(y) {
            Ok(Some(v)) => v,
            _ => {
                diverged.set(true);
                f64::INFINITY
            }
        })?;
        if diverged.get() {
            None
        } else {
            outer
        }
    } else {
        follow(|y2| model(theta * y2, y2))?
    };
    Ok(match settled {
        Some(v) => LimitWitness { behavior: LimitBehavior::Converges, limit: Some(v) },
        None => LimitWitness { behavior: LimitBehavior::Diverges, limit: None },
    })
}
