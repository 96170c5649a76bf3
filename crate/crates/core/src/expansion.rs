//! Boundary expansions: the flat-model Taylor recursion, the four-power
//! least-squares extraction of a rank-two expansion, and the inditial
//! polynomials.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::grid::{apply_multiplier, FracParams, GridFunction, ProductParams};
use crate::specfun::rgamma;

/// Coefficients `f_0, …, f_{i_max}` of the even expansion
/// `U ~ Σ f_i y^i` in the flat model, from
/// `f_i = Δ f_{i-2} / (i (2s - n - i))` with `Δ cos(kx) = -k² cos(kx)`.
/// Odd coefficients vanish.
pub fn taylor_coefficients(f: &GridFunction, params: &FracParams, i_max: usize) -> Result<Vec<GridFunction>> {
    if params.n() as usize != f.dim() {
        return Err(Error::Dimension { expected: params.n() as usize, found: f.dim() });
    }
    recursion(f, None, params, i_max)
}

/// The same recursion in one axis of a 2-D grid, with `Δ` the Laplacian in
/// that axis only.
pub fn taylor_coefficients_axis(
    f: &GridFunction,
    axis: usize,
    params: &FracParams,
    i_max: usize,
) -> Result<Vec<GridFunction>> {
    recursion(f, Some(axis), params, i_max)
}

fn recursion(f: &GridFunction, axis: Option<usize>, params: &FracParams, i_max: usize) -> Result<Vec<GridFunction>> {
    if let Some(a) = axis {
        if a >= f.dim() {
            return Err(Error::Dimension { expected: a + 1, found: f.dim() });
        }
    }
    let two_gamma = 2.0 * params.gamma();
    // denominators i (2s - n - i) of the even steps
    let mut steps = Vec::with_capacity(i_max / 2);
    for i in (2..=i_max).step_by(2) {
        let fi = i as f64;
        let gap = two_gamma - fi;
        if gap.abs() < 1e-12 {
            return Err(Error::Pole(format!("recursion step i = {i} hits 2s - n = {two_gamma}")));
        }
        steps.push(fi * gap);
    }
    let zero = f.map(|_| 0.0);
    let mut out: Vec<GridFunction> = Vec::with_capacity(i_max + 1);
    out.push(f.clone());
    for i in 1..=i_max {
        if i % 2 == 1 {
            out.push(zero.clone());
            continue;
        }
        // Δ^{i/2} and the accumulated denominators as one multiplier, so
        // each coefficient costs a single round trip
        let depth = i / 2;
        out.push(apply_multiplier(f, |k| {
            let symbol = match axis {
                Some(a) => -k[a] * k[a],
                None => -k.iter().map(|v| v * v).sum::<f64>(),
            };
            steps[..depth].iter().fold(1.0, |acc, d| acc * symbol / d)
        }));
    }
    Ok(out)
}

/// Mixed coefficients `f_{ij}` from running the recursion along
/// `first_axis` and then along the other axis.
pub fn mixed_taylor_coefficients(
    f: &GridFunction,
    params: &ProductParams,
    i_max: usize,
    j_max: usize,
    first_axis: usize,
) -> Result<Vec<Vec<GridFunction>>> {
    if f.dim() != 2 {
        return Err(Error::Dimension { expected: 2, found: f.dim() });
    }
    let (outer_axis, outer, inner, outer_max, inner_max) = match first_axis {
        0 => (0, &params.p1, &params.p2, i_max, j_max),
        1 => (1, &params.p2, &params.p1, j_max, i_max),
        _ => return Err(Error::Dimension { expected: 2, found: first_axis + 1 }),
    };
    let first = taylor_coefficients_axis(f, outer_axis, outer, outer_max)?;
    let nested = first
        .iter()
        .map(|c| taylor_coefficients_axis(c, 1 - outer_axis, inner, inner_max))
        .collect::<Result<Vec<_>>>()?;
    if first_axis == 0 {
        return Ok(nested);
    }
    // reindex as [i][j] with i along axis 0
    Ok((0..=i_max)
        .map(|i| (0..=j_max).map(|j| nested[j][i].clone()).collect())
        .collect())
}

/// `Σ_i f_i y^i`.
pub fn taylor_partial_sum(coefficients: &[GridFunction], y: f64) -> Result<GridFunction> {
    let first = coefficients
        .first()
        .ok_or_else(|| Error::Domain("no coefficients".into()))?;
    let mut acc = vec![0.0; first.len()];
    let mut power = 1.0;
    for c in coefficients {
        for (a, v) in acc.iter_mut().zip(c.values()) {
            *a += power * v;
        }
        power *= y;
    }
    first.with_values(acc)
}

/// Regular (even-power) part of the extension profile,
/// `Γ(1-γ) Σ_j (z/2)^{2j} / (j! Γ(j+1-γ))`.
pub fn profile_regular_part(gamma: f64, z: f64) -> Result<f64> {
    if !(gamma > 0.0 && gamma < 1.0) {
        return Err(Error::Domain(format!("gamma must be in (0, 1), got {gamma}")));
    }
    let w = 0.25 * z * z;
    let mut term = 1.0;
    let mut sum = 1.0;
    for j in 1..500 {
        let jf = j as f64;
        term *= w / (jf * (jf - gamma));
        sum += term;
        if term.abs() < 1e-17 * sum.abs() {
            return Ok(sum);
        }
    }
    Err(Error::NoConvergence(format!("regular part series at z = {z}")))
}

/// Boundary coefficients of
/// `u = F y₁^{a₋} y₂^{b₋} + G y₁^{a₋} y₂^{b₊} + H y₁^{a₊} y₂^{b₋} + I y₁^{a₊} y₂^{b₊}`
/// with `a_± = n₁/2 ± γ₁`, `b_± = n₂/2 ± γ₂`.
#[derive(Debug, Clone)]
pub struct ExpansionQuad {
    /// `F`, the Dirichlet datum.
    pub dirichlet: GridFunction,
    /// `G`, singular in the second variable only.
    pub second_axis: GridFunction,
    /// `H`, singular in the first variable only.
    pub first_axis: GridFunction,
    /// `I`, singular in both.
    pub corner: GridFunction,
    pub params: ProductParams,
}

#[derive(Debug, Clone)]
pub struct FitOutcome {
    pub quad: ExpansionQuad,
    /// Root-mean-square residual of the fit at each boundary node.
    pub residual: GridFunction,
    /// 2-norm condition number of the column-scaled power matrix.
    pub condition: f64,
}

/// A rank-two solution sampled at heights `(y1, y2)`.
#[derive(Debug, Clone)]
pub struct HeightSample {
    pub y1: f64,
    pub y2: f64,
    pub values: GridFunction,
}

pub const MAX_CONDITION: f64 = 1e8;

/// Exponent pairs of the four powers, in the order F, G, H, I.
pub fn expansion_exponents(params: &ProductParams) -> [(f64, f64); 4] {
    let (g1, g2) = params.gammas();
    let h1 = 0.5 * params.p1.nf();
    let h2 = 0.5 * params.p2.nf();
    [(h1 - g1, h2 - g2), (h1 - g1, h2 + g2), (h1 + g1, h2 - g2), (h1 + g1, h2 + g2)]
}

/// Pointwise least-squares fit of the four powers to the samples.
pub fn four_term_fit(samples: &[HeightSample], params: &ProductParams) -> Result<FitOutcome> {
    expansion_fit(samples, params, 0)
}

/// Like [`four_term_fit`], but each of the four coefficients also carries
/// its even Taylor corrections `y₁^{2p} y₂^{2q}`, `p, q ≤ corrections`, `p + q ≥ 1`,
/// as extra unknowns. Only the four leading coefficients are returned.
pub fn expansion_fit(samples: &[HeightSample], params: &ProductParams, corrections: usize) -> Result<FitOutcome> {
    let (g1, g2) = params.gammas();
    if !(g1 > 0.0 && g2 > 0.0) {
        return Err(Error::Exceptional(format!(
            "exponents collide for gamma = ({g1}, {g2})"
        )));
    }
    let mut columns: Vec<(f64, f64)> = expansion_exponents(params).to_vec();
    for p in 0..=corrections {
        for q in 0..=corrections {
            if p + q == 0 {
                continue;
            }
            for (e1, e2) in expansion_exponents(params) {
                columns.push((e1 + 2.0 * p as f64, e2 + 2.0 * q as f64));
            }
        }
    }
    let width = columns.len();
    if samples.len() < width {
        return Err(Error::Domain(format!("need >= {width} samples, got {}", samples.len())));
    }
    let grid = &samples[0].values;
    if samples.iter().any(|s| !s.values.same_grid(grid)) {
        return Err(Error::InvalidGrid("samples live on different grids".into()));
    }
    if samples.iter().any(|s| !(s.y1 > 0.0 && s.y2 > 0.0)) {
        return Err(Error::Domain("heights must be > 0".into()));
    }

    let m = samples.len();
    let mut design = DMatrix::from_fn(m, width, |r, c| {
        let (e1, e2) = columns[c];
        (e1 * samples[r].y1.ln() + e2 * samples[r].y2.ln()).exp()
    });
    let scales: Vec<f64> = (0..width).map(|c| design.column(c).amax()).collect();
    for (c, s) in scales.iter().enumerate() {
        design.column_mut(c).scale_mut(1.0 / s);
    }
    let svd = design.clone().svd(true, true);
    let sv = &svd.singular_values;
    let condition = sv.max() / sv.min();
    if !(condition <= MAX_CONDITION) {
        return Err(Error::IllConditioned(condition));
    }

    let nodes = grid.len();
    let mut coeffs = vec![vec![0.0; nodes]; 4];
    let mut residual = vec![0.0; nodes];
    let mut rhs = DVector::zeros(m);
    for node in 0..nodes {
        for (r, s) in samples.iter().enumerate() {
            rhs[r] = s.values.values()[node];
        }
        let sol = svd
            .solve(&rhs, 0.0)
            .map_err(|e| Error::NoConvergence(format!("least-squares solve: {e}")))?;
        let fitted = &design * &sol;
        residual[node] = ((&fitted - &rhs).norm_squared() / m as f64).sqrt();
        for c in 0..4 {
            coeffs[c][node] = sol[c] / scales[c];
        }
    }
    let [f, g, h, i]: [Vec<f64>; 4] = coeffs.try_into().expect("four leading columns");
    Ok(FitOutcome {
        quad: ExpansionQuad {
            dirichlet: grid.with_values(f)?,
            second_axis: grid.with_values(g)?,
            first_axis: grid.with_values(h)?,
            corner: grid.with_values(i)?,
            params: *params,
        },
        residual: grid.with_values(residual)?,
        condition,
    })
}

/// `y0 · 2^{-j}` for `j < rungs` in each variable, all pairs.
pub fn height_ladder(y0: f64, rungs: usize) -> Vec<(f64, f64)> {
    let ys: Vec<f64> = (0..rungs).map(|j| y0 * 0.5f64.powi(j as i32)).collect();
    ys.iter().flat_map(|&a| ys.iter().map(move |&b| (a, b))).collect()
}

/// Inditial polynomial value `P₁(ζ₁) + P₂(ζ₂)` with
/// `P_α(ζ) = ζ² + n_α ζ + s_α(n_α - s_α)`, and whether `(ζ₁, ζ₂)` lies on
/// its zero circle `(ζ₁ + n₁/2)² + (ζ₂ + n₂/2)² = γ₁² + γ₂²`.
pub fn inditial(zeta1: f64, zeta2: f64, params: &ProductParams) -> (f64, bool) {
    let poly = |z: f64, p: &FracParams| z * z + p.nf() * z + p.mu();
    let value = poly(zeta1, &params.p1) + poly(zeta2, &params.p2);
    let (g1, g2) = params.gammas();
    let radius2 = g1 * g1 + g2 * g2;
    let lhs = (zeta1 + 0.5 * params.p1.nf()).powi(2) + (zeta2 + 0.5 * params.p2.nf()).powi(2);
    (value, (lhs - radius2).abs() <= 1e-12 * radius2.max(1.0))
}

/// Leading coefficient of the singular part of the profile,
/// `2^{-2γ} Γ(-γ)/Γ(γ)`; equals `1/d_γ`.
pub fn profile_singular_coefficient(gamma: f64) -> Result<f64> {
    if !(gamma > 0.0 && gamma < 1.0) {
        return Err(Error::Domain(format!("gamma must be in (0, 1), got {gamma}")));
    }
    // Γ(-γ) = -Γ(1-γ)/γ
    Ok(-2f64.powf(-2.0 * gamma) / (gamma * rgamma(1.0 - gamma)) * rgamma(gamma))
}
