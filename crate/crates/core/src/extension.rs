//! Extension problems in one and two extension variables, solved exactly
//! in frequency space, plus the weighted Poisson kernel in physical space.
//!
//! A boundary mode `e^{ik·x}` extends to `θ_γ(|k| y) e^{ik·x}` where
//! `θ_γ(z) = 2^{1-γ}/Γ(γ) · z^γ K_γ(z)` is the bounded solution of
//! `θ'' + (1-2γ)/z θ' - θ = 0` with `θ(0) = 1`.

use std::collections::HashMap;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::grid::{apply_axis_tables, apply_multiplier, FracParams, GridFunction, ProductParams};
use crate::quad::{integrate, wynn_epsilon};
use crate::specfun::{bessel_k, gamma_fn, gamma_ratio, normalization_constants};

fn check_unit_gamma(gamma: f64) -> Result<()> {
    if gamma > 0.0 && gamma < 1.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("extension needs gamma in (0, 1), got {gamma}")))
    }
}

/// `θ_γ(z)`; equals `e^{-z}` at γ = 1/2.
pub fn extension_profile(gamma: f64, z: f64) -> Result<f64> {
    check_unit_gamma(gamma)?;
    if !(z >= 0.0) {
        return Err(Error::Domain(format!("profile argument must be >= 0, got {z}")));
    }
    if z == 0.0 {
        return Ok(1.0);
    }
    if gamma == 0.5 {
        return Ok((-z).exp());
    }
    Ok(2f64.powf(1.0 - gamma) / gamma_fn(gamma)? * z.powf(gamma) * bessel_k(gamma, z)?)
}

/// `θ_γ'(z) = -2^{1-γ}/Γ(γ) · z^γ K_{1-γ}(z)`.
pub fn extension_profile_derivative(gamma: f64, z: f64) -> Result<f64> {
    check_unit_gamma(gamma)?;
    if !(z > 0.0) {
        return Err(Error::Domain(format!("profile derivative needs z > 0, got {z}")));
    }
    if gamma == 0.5 {
        return Ok(-(-z).exp());
    }
    Ok(-(2f64.powf(1.0 - gamma) / gamma_fn(gamma)?) * z.powf(gamma) * bessel_k(1.0 - gamma, z)?)
}

/// Applies a multiplier depending only on `|k|`, evaluating it once per
/// distinct radius.
fn apply_radial(f: &GridFunction, symbol: impl Fn(f64) -> Result<f64>) -> Result<GridFunction> {
    let radius = |k: &[f64]| k.iter().map(|v| v * v).sum::<f64>().sqrt();
    let ks: Vec<Vec<f64>> = (0..f.dim()).map(|a| f.wave_numbers(a)).collect();
    let mut table: HashMap<u64, f64> = HashMap::new();
    let mut visit = |k: &[f64]| -> Result<()> {
        let r = radius(k);
        if let std::collections::hash_map::Entry::Vacant(e) = table.entry(r.to_bits()) {
            e.insert(symbol(r)?);
        }
        Ok(())
    };
    match f.dim() {
        1 => ks[0].iter().try_for_each(|&k| visit(&[k]))?,
        _ => {
            for &k1 in &ks[0] {
                for &k2 in &ks[1] {
                    visit(&[k1, k2])?;
                }
            }
        }
    }
    Ok(apply_multiplier(f, |k| table[&radius(k).to_bits()]))
}

fn check_dim(f: &GridFunction, params: &FracParams) -> Result<()> {
    if params.n() as usize != f.dim() {
        return Err(Error::Dimension { expected: params.n() as usize, found: f.dim() });
    }
    Ok(())
}

/// `U(·, y)` for boundary data `f`; requires `params.n() == f.dim()`.
pub fn extend(f: &GridFunction, params: &FracParams, y: f64) -> Result<GridFunction> {
    check_dim(f, params)?;
    check_unit_gamma(params.gamma())?;
    if !(y > 0.0) {
        return Err(Error::Domain(format!("height must be > 0, got {y}")));
    }
    apply_radial(f, |k| extension_profile(params.gamma(), k * y))
}

/// Rank-two extension `U(x₁, y₁, x₂, y₂)` on a 2-D grid whose axes carry
/// one-dimensional boundary factors.
pub fn extend2(f: &GridFunction, params: &ProductParams, y1: f64, y2: f64) -> Result<GridFunction> {
    if f.dim() != 2 {
        return Err(Error::Dimension { expected: 2, found: f.dim() });
    }
    if params.p1.n() != 1 || params.p2.n() != 1 {
        return Err(Error::Dimension {
            expected: 1,
            found: params.p1.n().max(params.p2.n()) as usize,
        });
    }
    if !(y1 > 0.0 && y2 > 0.0) {
        return Err(Error::Domain(format!("heights must be > 0, got ({y1}, {y2})")));
    }
    let table = |axis: usize, gamma: f64, y: f64| -> Result<Vec<f64>> {
        f.wave_numbers(axis)
            .iter()
            .map(|&k| extension_profile(gamma, k * y))
            .collect()
    };
    let (g1, g2) = params.gammas();
    apply_axis_tables(f, &[table(0, g1, y1)?, table(1, g2, y2)?])
}

/// Boundary data together with its extension at fixed heights.
#[derive(Debug, Clone)]
pub struct ExtensionField {
    pub boundary: GridFunction,
    pub heights: Heights,
    pub slice: GridFunction,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Heights {
    Single { params: FracParams, y: f64 },
    Product { params: ProductParams, y1: f64, y2: f64 },
}

impl ExtensionField {
    pub fn single(f: &GridFunction, params: FracParams, y: f64) -> Result<Self> {
        Ok(Self {
            slice: extend(f, &params, y)?,
            boundary: f.clone(),
            heights: Heights::Single { params, y },
        })
    }

    pub fn product(f: &GridFunction, params: ProductParams, y1: f64, y2: f64) -> Result<Self> {
        Ok(Self {
            slice: extend2(f, &params, y1, y2)?,
            boundary: f.clone(),
            heights: Heights::Product { params, y1, y2 },
        })
    }

    /// `‖U(·, heights) - f‖_∞`.
    pub fn boundary_gap(&self) -> f64 {
        self.slice.max_abs_diff(&self.boundary)
    }
}

/// Constant turning `lim y^{1-2γ} ∂_y U` into `(-Δ)^γ f`. Equals `-c_γ`.
pub fn dtn_constant(gamma: f64) -> Result<f64> {
    Ok(-normalization_constants(gamma)?.c_gamma)
}

/// `(-Δ)^γ f` from the leading singular coefficient of the profile:
/// `y^{1-2γ} ∂_y θ_γ(|k|y) → 2γ · 2^{-2γ}Γ(-γ)/Γ(γ) · |k|^{2γ}`.
pub fn dtn(f: &GridFunction, params: &FracParams) -> Result<GridFunction> {
    check_dim(f, params)?;
    let gamma = params.gamma();
    check_unit_gamma(gamma)?;
    let singular_coeff = 2f64.powf(-2.0 * gamma) * gamma_ratio(-gamma, gamma)?;
    let factor = dtn_constant(gamma)? * 2.0 * gamma * singular_coeff;
    Ok(apply_multiplier(f, |k| {
        let k2: f64 = k.iter().map(|v| v * v).sum();
        if k2 == 0.0 {
            0.0
        } else {
            factor * k2.powf(gamma)
        }
    }))
}

/// Samples of `y^{1-2γ} ∂_y U(·, y)`.
pub fn weighted_normal_derivative(f: &GridFunction, params: &FracParams, y: f64) -> Result<GridFunction> {
    check_dim(f, params)?;
    let gamma = params.gamma();
    check_unit_gamma(gamma)?;
    if !(y > 0.0) {
        return Err(Error::Domain(format!("height must be > 0, got {y}")));
    }
    let weight = y.powf(1.0 - 2.0 * gamma);
    apply_radial(f, |k| {
        if k == 0.0 {
            Ok(0.0)
        } else {
            Ok(weight * k * extension_profile_derivative(gamma, k * y)?)
        }
    })
}

/// Number of rungs in the fitted-DtN height ladder.
pub const DTN_LADDER_LEN: usize = 7;

/// `(-Δ)^γ f` by fitting `y^{1-2γ} ∂_y U ≈ A + B y^{2-2γ}` at each node over
/// the ladder `y_j = y₀ 2^{-j}` and keeping `A`. `y₀` is chosen so that
/// `|k| y₀ ≤ 0.01` for every resolved mode.
pub fn dtn_fitted(f: &GridFunction, params: &FracParams) -> Result<GridFunction> {
    let k_max = (0..f.dim())
        .map(|a| f.wave_numbers(a).into_iter().fold(0.0, f64::max).powi(2))
        .sum::<f64>()
        .sqrt();
    let y0 = if k_max > 0.0 { (0.01 / k_max).min(0.1) } else { 0.1 };
    dtn_fitted_with_ladder(f, params, y0)
}

pub fn dtn_fitted_with_ladder(f: &GridFunction, params: &FracParams, y0: f64) -> Result<GridFunction> {
    let gamma = params.gamma();
    let heights: Vec<f64> = (0..DTN_LADDER_LEN).map(|j| y0 * 0.5f64.powi(j as i32)).collect();
    let samples = heights
        .iter()
        .map(|&y| weighted_normal_derivative(f, params, y))
        .collect::<Result<Vec<_>>>()?;
    // columns [1, t] with t = (y / y0)^{2-2γ} in (0, 1]
    let ts: Vec<f64> = heights.iter().map(|y| (y / y0).powf(2.0 - 2.0 * gamma)).collect();
    let m = ts.len() as f64;
    let st: f64 = ts.iter().sum();
    let stt: f64 = ts.iter().map(|t| t * t).sum();
    let det = m * stt - st * st;
    let c = dtn_constant(gamma)?;
    let values = (0..f.len())
        .map(|i| {
            let sg: f64 = samples.iter().map(|s| s.values()[i]).sum();
            let stg: f64 = samples.iter().zip(&ts).map(|(s, t)| t * s.values()[i]).sum();
            c * (stt * sg - st * stg) / det
        })
        .collect();
    f.with_values(values)
}

/// `c_{n,γ} = Γ((n+2γ)/2) / (π^{n/2} Γ(γ))`.
pub fn poisson_kernel_constant(params: &FracParams) -> Result<f64> {
    let n = params.nf();
    let gamma = params.gamma();
    Ok(gamma_ratio(0.5 * n + gamma, gamma)? / PI.powf(0.5 * n))
}

/// Weighted kernel `K(x, y) = c_{n,γ} y^{2γ} / (|x|² + y²)^{(n+2γ)/2}`.
pub fn poisson_kernel(x: &[f64], y: f64, params: &FracParams) -> Result<f64> {
    if x.len() != params.n() as usize {
        return Err(Error::Dimension { expected: params.n() as usize, found: x.len() });
    }
    if !(y > 0.0) {
        return Err(Error::Domain(format!("height must be > 0, got {y}")));
    }
    let gamma = params.gamma();
    let r2: f64 = x.iter().map(|v| v * v).sum();
    let q = 0.5 * params.nf() + gamma;
    Ok(poisson_kernel_constant(params)? * y.powf(2.0 * gamma) / (r2 + y * y).powf(q))
}

/// `∫_L^∞ u^{n-1} (1+u²)^{-q} du` with `q = n/2 + γ`, by the binomial
/// series in `u^{-2}` (valid for `L > 1`).
fn algebraic_tail(n: f64, gamma: f64, l: f64) -> f64 {
    let q = 0.5 * n + gamma;
    let inv_l2 = 1.0 / (l * l);
    let mut coeff = 1.0;
    let mut power = l.powf(-2.0 * gamma);
    let mut sum = 0.0;
    for m in 0..200 {
        let mf = m as f64;
        let term = coeff * power / (2.0 * gamma + 2.0 * mf);
        sum += term;
        if term.abs() < 1e-18 * sum.abs() {
            break;
        }
        coeff *= -(q + mf) / (mf + 1.0);
        power *= inv_l2;
    }
    sum
}

/// `∫_{ℝⁿ} K(x, y) dx` by radial quadrature with an analytic far tail.
pub fn poisson_kernel_mass(params: &FracParams, y: f64) -> Result<f64> {
    if !(y > 0.0) {
        return Err(Error::Domain(format!("height must be > 0, got {y}")));
    }
    let n = params.nf();
    let gamma = params.gamma();
    let c = poisson_kernel_constant(params)?;
    let q = 0.5 * n + gamma;
    let radial = |r: f64| c * y.powf(2.0 * gamma) * r.powf(n - 1.0) / (r * r + y * y).powf(q);
    const CUT: f64 = 20.0;
    let near = integrate(radial, 0.0, y, 1e-15)? + integrate(radial, y, CUT * y, 1e-15)?;
    let far = c * algebraic_tail(n, gamma, CUT);
    let sphere = 2.0 * PI.powf(0.5 * n) / gamma_fn(0.5 * n)?;
    Ok(sphere * (near + far))
}

/// `∫₀^∞ (1+u²)^{-(1/2+γ)} cos(ωu) du`. Half-period panels between zeros
/// of the cosine are summed and the alternating partial sums accelerated.
fn marginal_cosine_transform(gamma: f64, omega: f64) -> Result<f64> {
    const TOL: f64 = 1e-14;
    let q = 0.5 + gamma;
    if omega == 0.0 {
        const CUT: f64 = 20.0;
        let head = integrate(|u: f64| (1.0 + u * u).powf(-q), 0.0, CUT, TOL)?;
        return Ok(head + algebraic_tail(1.0, gamma, CUT));
    }
    let g = |u: f64| (1.0 + u * u).powf(-q) * (omega * u).cos();
    let half = PI / omega;
    let mut edge = 0.5 * half;
    let mut sum = integrate(g, 0.0, edge, TOL)?;
    let mut partials = Vec::with_capacity(64);
    partials.push(sum);
    const MIN_PANELS: usize = 12;
    const MAX_PANELS: usize = 400;
    for j in 1..=MAX_PANELS {
        sum += integrate(g, edge, edge + half, TOL)?;
        edge += half;
        partials.push(sum);
        if j >= MIN_PANELS {
            let window = &partials[partials.len().saturating_sub(24)..];
            let (value, err) = wynn_epsilon(window);
            if err <= 1e-13 * value.abs().max(1e-3) {
                return Ok(value);
            }
        }
    }
    Err(Error::NoConvergence(format!(
        "kernel cosine transform at omega = {omega} did not settle"
    )))
}

/// Fourier symbol of `K(·, y)` at frequency magnitude `|k|`, computed from
/// the physical kernel by quadrature. The one-dimensional marginal of the
/// n-dimensional kernel is the n = 1 kernel with the same γ, so the symbol
/// depends on `n` only through `|k|`.
pub fn poisson_kernel_symbol(gamma: f64, k: f64, y: f64) -> Result<f64> {
    check_unit_gamma(gamma)?;
    let c1 = poisson_kernel_constant(&FracParams::new(1, gamma)?)?;
    Ok(2.0 * c1 * marginal_cosine_transform(gamma, k * y)?)
}

/// `K(·, y) * f` realized through the quadrature-computed kernel symbol.
pub fn kernel_convolve(f: &GridFunction, params: &FracParams, y: f64) -> Result<GridFunction> {
    check_dim(f, params)?;
    check_unit_gamma(params.gamma())?;
    if !(y > 0.0) {
        return Err(Error::Domain(format!("height must be > 0, got {y}")));
    }
    apply_radial(f, |k| poisson_kernel_symbol(params.gamma(), k, y))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{frac_laplacian, sample};

    const TAU: f64 = 2.0 * PI;

    #[test]
    fn profile_at_half_is_exponential() {
        for z in [0.0, 0.3, 2.0, 17.0] {
            assert!((extension_profile(0.5, z).unwrap() - (-z).exp()).abs() < 1e-15);
        }
    }

    #[test]
    fn profile_starts_at_one() {
        assert_eq!(extension_profile(0.3, 0.0).unwrap(), 1.0);
        let v = extension_profile(0.3, 1e-9).unwrap();
        assert!((v - 1.0).abs() < 1e-4);
    }

    #[test]
    fn derivative_matches_difference_quotient() {
        let (g, z, h) = (0.35, 0.8, 1e-5);
        let fd = (extension_profile(g, z + h).unwrap() - extension_profile(g, z - h).unwrap()) / (2.0 * h);
        assert!((fd - extension_profile_derivative(g, z).unwrap()).abs() < 1e-9);
    }

    #[test]
    fn dtn_of_cosine() {
        let f = sample(|x| (2.0 * x[0]).cos(), &[64], &[TAU]).unwrap();
        let p = FracParams::new(1, 0.3).unwrap();
        let d = dtn(&f, &p).unwrap();
        let expect = f.scale(2f64.powf(0.6));
        assert!(d.max_abs_diff(&expect) < 1e-12);
    }

    #[test]
    fn fitted_dtn_close_to_spectral() {
        let f = sample(|x| (3.0 * x[0]).cos() + 0.5 * x[0].sin(), &[32], &[TAU]).unwrap();
        let p = FracParams::new(1, 0.7).unwrap();
        let d = dtn_fitted(&f, &p).unwrap();
        let exact = frac_laplacian(&f, 0.7).unwrap();
        assert!(d.rel_diff(&exact) < 1e-4);
    }

    #[test]
    fn kernel_mass_is_one() {
        for (n, g) in [(1, 0.3), (2, 0.6), (3, 0.5)] {
            let p = FracParams::new(n, g).unwrap();
            let m = poisson_kernel_mass(&p, 0.7).unwrap();
            assert!((m - 1.0).abs() < 1e-10, "n={n} g={g} m={m}");
        }
    }

    #[test]
    fn kernel_symbol_at_half_is_exponential() {
        for w in [0.0, 0.01, 0.5, 3.0, 20.0] {
            let s = poisson_kernel_symbol(0.5, w, 1.0).unwrap();
            assert!((s - (-w).exp()).abs() < 1e-11, "w={w} s={s}");
        }
    }

    #[test]
    fn extend2_rejects_one_dimensional_data() {
        let f = sample(|x| x[0].cos(), &[16], &[TAU]).unwrap();
        let p = ProductParams::planar(0.3, 0.4).unwrap();
        assert!(matches!(extend2(&f, &p, 0.1, 0.1), Err(Error::Dimension { .. })));
    }
}
