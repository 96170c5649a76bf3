//! The rank-two scattering matrix
//! `[[Id, S⁽²⁾], [S⁽¹⁾, S⁽¹⁾S⁽²⁾]]` on the distinguished boundary.
//!
//! Entries follow the normalization `d_γ S = (-Δ)^γ`. Since `d_γ < 0` on
//! (0, 1), the off-diagonal entries are negative multiples of fractional
//! Laplacians and the corner entry is a positive one.

use crate::error::{Error, Result};
use crate::expansion::{expansion_fit, height_ladder, FitOutcome, HeightSample};
use crate::extension::extend2;
use crate::grid::{axis_frac_laplacian, dilate, frac_laplacian, GridFunction, ProductParams};
use crate::specfun::normalization_constants;

#[derive(Debug, Clone)]
pub struct ScatteringQuad {
    pub s11: GridFunction,
    pub s12: GridFunction,
    pub s21: GridFunction,
    pub s22: GridFunction,
    pub params: ProductParams,
}

impl ScatteringQuad {
    /// Entries rescaled by the `d` constants, i.e. the fractional
    /// Laplacians `(-Δ_{x₂})^{γ₂} f`, `(-Δ_{x₁})^{γ₁} f` and their product.
    pub fn unnormalized(&self) -> Result<ScatteringQuad> {
        let (d1, d2) = d_pair(&self.params)?;
        Ok(ScatteringQuad {
            s11: self.s11.clone(),
            s12: self.s12.scale(d2),
            s21: self.s21.scale(d1),
            s22: self.s22.scale(d1 * d2),
            params: self.params,
        })
    }

    pub fn entries(&self) -> [&GridFunction; 4] {
        [&self.s11, &self.s12, &self.s21, &self.s22]
    }

    /// Largest entrywise relative deviation from `other`.
    pub fn max_rel_diff(&self, other: &ScatteringQuad) -> f64 {
        self.entries()
            .iter()
            .zip(other.entries())
            .map(|(a, b)| a.rel_diff(b))
            .fold(0.0, f64::max)
    }
}

fn d_pair(params: &ProductParams) -> Result<(f64, f64)> {
    let (g1, g2) = params.gammas();
    Ok((normalization_constants(g1)?.d_gamma, normalization_constants(g2)?.d_gamma))
}

fn check_planar(f: &GridFunction) -> Result<()> {
    if f.dim() != 2 {
        return Err(Error::Dimension { expected: 2, found: f.dim() });
    }
    Ok(())
}

/// Scattering entries from the Fourier multipliers.
pub fn scattering_matrix_spectral(f: &GridFunction, params: &ProductParams) -> Result<ScatteringQuad> {
    check_planar(f)?;
    let (g1, g2) = params.gammas();
    let (d1, d2) = d_pair(params)?;
    let along2 = axis_frac_laplacian(f, 1, g2)?;
    let along1 = axis_frac_laplacian(f, 0, g1)?;
    let both = axis_frac_laplacian(&along2, 0, g1)?;
    Ok(ScatteringQuad {
        s11: f.clone(),
        s12: along2.scale(1.0 / d2),
        s21: along1.scale(1.0 / d1),
        s22: both.scale(1.0 / (d1 * d2)),
        params: *params,
    })
}

/// Even correction orders per axis carried by the extension-based fit.
/// Without them the corner entry sees an `O(y)` truncation bias at γ = ½.
pub const EXTENSION_CORRECTIONS: usize = 1;

/// Default tensor ladder for [`scattering_from_extension`]: 25 height
/// pairs from `5·10⁻³` down by halves.
pub fn extension_heights() -> Vec<(f64, f64)> {
    height_ladder(5e-3, 5)
}

/// Scattering entries read off from a fit of
/// `u = y₁^{n₁/2-γ₁} y₂^{n₂/2-γ₂} U` sampled at the given heights,
/// with [`EXTENSION_CORRECTIONS`] even corrections per axis.
pub fn scattering_from_extension(
    f: &GridFunction,
    params: &ProductParams,
    heights: &[(f64, f64)],
) -> Result<(ScatteringQuad, FitOutcome)> {
    check_planar(f)?;
    let (g1, g2) = params.gammas();
    let e1 = 0.5 * params.p1.nf() - g1;
    let e2 = 0.5 * params.p2.nf() - g2;
    let samples = heights
        .iter()
        .map(|&(y1, y2)| {
            let u = extend2(f, params, y1, y2)?;
            Ok(HeightSample { y1, y2, values: u.scale(y1.powf(e1) * y2.powf(e2)) })
        })
        .collect::<Result<Vec<_>>>()?;
    let fit = expansion_fit(&samples, params, EXTENSION_CORRECTIONS)?;
    let quad = ScatteringQuad {
        s11: fit.quad.dirichlet.clone(),
        s12: fit.quad.second_axis.clone(),
        s21: fit.quad.first_axis.clone(),
        s22: fit.quad.corner.clone(),
        params: *params,
    };
    Ok((quad, fit))
}

pub const COVARIANCE_TOLERANCE: f64 = 1e-11;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CovarianceReport {
    pub deviation: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl CovarianceReport {
    fn new(deviation: f64) -> Self {
        Self { deviation, tolerance: COVARIANCE_TOLERANCE, passed: deviation <= COVARIANCE_TOLERANCE }
    }
}

fn relative_gap(lhs: &GridFunction, rhs: &GridFunction) -> f64 {
    let scale = rhs.max_abs();
    let gap = lhs.max_abs_diff(rhs);
    if scale > 0.0 {
        gap / scale
    } else {
        gap
    }
}

/// `(-Δ)^γ (f∘λ) = λ^{2γ} ((-Δ)^γ f)∘λ`, with the dilation applied on the
/// grid (all axes by `lam`). Exact when every mode of `f` stays resolved
/// after scaling by `lam`.
pub fn covariance_check(f: &GridFunction, gamma: f64, lam: usize) -> Result<CovarianceReport> {
    let factors = vec![lam; f.dim()];
    let lhs = frac_laplacian(&dilate(f, &factors)?, gamma)?;
    let rhs = dilate(&frac_laplacian(f, gamma)?, &factors)?.scale((lam as f64).powf(2.0 * gamma));
    Ok(CovarianceReport::new(relative_gap(&lhs, &rhs)))
}

/// Componentwise covariance of the scattering matrix under the per-axis
/// dilation `(λ₁, λ₂)`: entry `S_ab` picks up `λ₁^{2γ₁}` when it acts in the
/// first variable and `λ₂^{2γ₂}` when it acts in the second.
pub fn covariance_check_product(
    f: &GridFunction,
    params: &ProductParams,
    lams: (usize, usize),
) -> Result<CovarianceReport> {
    check_planar(f)?;
    let factors = [lams.0, lams.1];
    let (g1, g2) = params.gammas();
    let w1 = (lams.0 as f64).powf(2.0 * g1);
    let w2 = (lams.1 as f64).powf(2.0 * g2);
    let lhs = scattering_matrix_spectral(&dilate(f, &factors)?, params)?;
    let base = scattering_matrix_spectral(f, params)?;
    let weights = [1.0, w2, w1, w1 * w2];
    let mut worst = 0.0f64;
    for ((l, b), w) in lhs.entries().iter().zip(base.entries()).zip(weights) {
        let rhs = dilate(b, &factors)?.scale(w);
        worst = worst.max(relative_gap(l, &rhs));
    }
    Ok(CovarianceReport::new(worst))
}
