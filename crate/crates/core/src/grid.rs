//! Periodic grid functions on the 1-D and 2-D torus and spectral
//! (Fourier-multiplier) operators acting on them.

use std::cell::RefCell;
use std::f64::consts::PI;
use std::sync::Arc;

use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

fn plan(len: usize, inverse: bool) -> Arc<dyn Fft<f64>> {
    PLANNER.with(|p| {
        let mut p = p.borrow_mut();
        if inverse {
            p.plan_fft_inverse(len)
        } else {
            p.plan_fft_forward(len)
        }
    })
}

/// Real samples of a periodic function on a uniform grid, row-major with
/// the first axis slowest.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    sizes: Vec<usize>,
    periods: Vec<f64>,
    values: Vec<f64>,
}

impl GridFunction {
    pub fn new(sizes: Vec<usize>, periods: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if sizes.is_empty() || sizes.len() > 2 {
            return Err(Error::InvalidGrid(format!("dimension {} not in {{1, 2}}", sizes.len())));
        }
        if periods.len() != sizes.len() {
            return Err(Error::InvalidGrid("one period per axis required".into()));
        }
        for &n in &sizes {
            if n < 8 || !n.is_power_of_two() {
                return Err(Error::InvalidGrid(format!("size {n} is not a power of two >= 8")));
            }
        }
        if periods.iter().any(|p| !(p.is_finite() && *p > 0.0)) {
            return Err(Error::InvalidGrid("periods must be positive".into()));
        }
        let total: usize = sizes.iter().product();
        if values.len() != total {
            return Err(Error::InvalidGrid(format!(
                "expected {total} values, got {}",
                values.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidGrid("values must be finite".into()));
        }
        Ok(Self { sizes, periods, values })
    }

    /// Same grid, new values (length must match).
    pub fn with_values(&self, values: Vec<f64>) -> Result<Self> {
        Self::new(self.sizes.clone(), self.periods.clone(), values)
    }

    pub fn dim(&self) -> usize {
        self.sizes.len()
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn periods(&self) -> &[f64] {
        &self.periods
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn same_grid(&self, other: &GridFunction) -> bool {
        self.sizes == other.sizes && self.periods == other.periods
    }

    /// Coordinates of node `index`.
    pub fn node(&self, index: usize) -> Vec<f64> {
        let mut coords = vec![0.0; self.dim()];
        let mut rem = index;
        for axis in (0..self.dim()).rev() {
            let n = self.sizes[axis];
            coords[axis] = (rem % n) as f64 * self.periods[axis] / n as f64;
            rem /= n;
        }
        coords
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn max_abs_diff(&self, other: &GridFunction) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .fold(0.0, |m, (a, b)| m.max((a - b).abs()))
    }

    /// Sup-norm distance relative to the sup norm of `reference`
    /// (absolute when the reference vanishes).
    pub fn rel_diff(&self, reference: &GridFunction) -> f64 {
        let scale = reference.max_abs();
        let d = self.max_abs_diff(reference);
        if scale > 0.0 {
            d / scale
        } else {
            d
        }
    }

    /// Discrete inner product, weighted by the cell volume.
    pub fn dot(&self, other: &GridFunction) -> f64 {
        let cell: f64 = self
            .sizes
            .iter()
            .zip(&self.periods)
            .map(|(&n, &p)| p / n as f64)
            .product();
        cell * self.values.iter().zip(&other.values).map(|(a, b)| a * b).sum::<f64>()
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> GridFunction {
        GridFunction {
            sizes: self.sizes.clone(),
            periods: self.periods.clone(),
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn scale(&self, factor: f64) -> GridFunction {
        self.map(|v| v * factor)
    }

    /// Normalized DFT coefficients `f̂(k) = N⁻¹ Σ f_j e^{-i k·x_j}`.
    pub fn spectrum(&self) -> Vec<Complex64> {
        let mut buf: Vec<Complex64> = self.values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        transform(&mut buf, &self.sizes, false);
        let inv = 1.0 / self.values.len() as f64;
        buf.iter_mut().for_each(|c| *c *= inv);
        buf
    }

    /// Absolute wave numbers `|k_axis| · 2π / period` for each DFT index
    /// along `axis`.
    pub fn wave_numbers(&self, axis: usize) -> Vec<f64> {
        let n = self.sizes[axis];
        let scale = 2.0 * PI / self.periods[axis];
        (0..n)
            .map(|j| {
                let k = if j <= n / 2 { j } else { n - j };
                k as f64 * scale
            })
            .collect()
    }
}

fn transform(buf: &mut [Complex64], sizes: &[usize], inverse: bool) {
    match sizes {
        [n] => plan(*n, inverse).process(buf),
        [n1, n2] => {
            let (n1, n2) = (*n1, *n2);
            let row = plan(n2, inverse);
            for chunk in buf.chunks_exact_mut(n2) {
                row.process(chunk);
            }
            let col = plan(n1, inverse);
            let mut tmp = vec![Complex64::new(0.0, 0.0); n1];
            for j in 0..n2 {
                for i in 0..n1 {
                    tmp[i] = buf[i * n2 + j];
                }
                col.process(&mut tmp);
                for i in 0..n1 {
                    buf[i * n2 + j] = tmp[i];
                }
            }
        }
        _ => unreachable!("grid dimension validated at construction"),
    }
}

/// Applies a Fourier multiplier that depends on the absolute wave numbers
/// along each axis. Such multipliers are even in every frequency, so the
/// output is real; the residual imaginary part is discarded.
pub fn apply_multiplier(f: &GridFunction, multiplier: impl Fn(&[f64]) -> f64) -> GridFunction {
    let mut buf: Vec<Complex64> = f.values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    transform(&mut buf, &f.sizes, false);
    let ks: Vec<Vec<f64>> = (0..f.dim()).map(|a| f.wave_numbers(a)).collect();
    match f.dim() {
        1 => {
            for (j, c) in buf.iter_mut().enumerate() {
                *c *= multiplier(&[ks[0][j]]);
            }
        }
        _ => {
            let n2 = f.sizes[1];
            let mut per_axis = Vec::with_capacity(n2);
            for (i, &k1) in ks[0].iter().enumerate() {
                per_axis.clear();
                per_axis.extend(ks[1].iter().map(|&k2| multiplier(&[k1, k2])));
                for (j, m) in per_axis.iter().enumerate() {
                    buf[i * n2 + j] *= *m;
                }
            }
        }
    }
    transform(&mut buf, &f.sizes, true);
    let inv = 1.0 / buf.len() as f64;
    GridFunction {
        sizes: f.sizes.clone(),
        periods: f.periods.clone(),
        values: buf.iter().map(|c| c.re * inv).collect(),
    }
}

/// Applies a tensor-product multiplier given as one table per axis,
/// indexed by DFT index: `f̂(k₁, k₂) ↦ t₁[k₁] t₂[k₂] f̂(k₁, k₂)`.
pub fn apply_axis_tables(f: &GridFunction, tables: &[Vec<f64>]) -> Result<GridFunction> {
    if tables.len() != f.dim() {
        return Err(Error::Dimension { expected: f.dim(), found: tables.len() });
    }
    for (t, &n) in tables.iter().zip(&f.sizes) {
        if t.len() != n {
            return Err(Error::InvalidGrid(format!("table of length {} for axis of size {n}", t.len())));
        }
    }
    let mut buf: Vec<Complex64> = f.values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    transform(&mut buf, &f.sizes, false);
    match f.dim() {
        1 => buf.iter_mut().zip(&tables[0]).for_each(|(c, m)| *c *= *m),
        _ => {
            let n2 = f.sizes[1];
            for (i, m1) in tables[0].iter().enumerate() {
                for (j, m2) in tables[1].iter().enumerate() {
                    buf[i * n2 + j] *= m1 * m2;
                }
            }
        }
    }
    transform(&mut buf, &f.sizes, true);
    let inv = 1.0 / buf.len() as f64;
    Ok(GridFunction {
        sizes: f.sizes.clone(),
        periods: f.periods.clone(),
        values: buf.iter().map(|c| c.re * inv).collect(),
    })
}

/// Samples `func` at the uniform nodes `x_j = j · period / size`.
pub fn sample(
    func: impl Fn(&[f64]) -> f64,
    sizes: &[usize],
    periods: &[f64],
) -> Result<GridFunction> {
    let total: usize = sizes.iter().product();
    let shell = GridFunction {
        sizes: sizes.to_vec(),
        periods: periods.to_vec(),
        values: Vec::new(),
    };
    let values = (0..total).map(|i| func(&shell.node(i))).collect();
    GridFunction::new(sizes.to_vec(), periods.to_vec(), values)
}

/// `(-Δ)^γ` with symbol `|k|^{2γ}`; the zero mode maps to zero.
pub fn frac_laplacian(f: &GridFunction, gamma: f64) -> Result<GridFunction> {
    if !(gamma > 0.0) {
        return Err(Error::Domain(format!("fractional order must be > 0, got {gamma}")));
    }
    Ok(apply_multiplier(f, |k| {
        let k2: f64 = k.iter().map(|v| v * v).sum();
        if k2 == 0.0 {
            0.0
        } else {
            k2.powf(gamma)
        }
    }))
}

/// `(-Δ_{x_axis})^γ` acting along a single axis of a 2-D grid function.
pub fn axis_frac_laplacian(f: &GridFunction, axis: usize, gamma: f64) -> Result<GridFunction> {
    if axis >= f.dim() {
        return Err(Error::Dimension { expected: axis + 1, found: f.dim() });
    }
    if !(gamma > 0.0) {
        return Err(Error::Domain(format!("fractional order must be > 0, got {gamma}")));
    }
    Ok(apply_multiplier(f, |k| {
        let ka = k[axis];
        if ka == 0.0 {
            0.0
        } else {
            ka.powf(2.0 * gamma)
        }
    }))
}

/// `(-Δ_{x₂})^{γ₂}(-Δ_{x₁})^{γ₁}` on a 2-D grid: symbol `|k₁|^{2γ₁}|k₂|^{2γ₂}`.
pub fn product_frac_laplacian(f: &GridFunction, gamma1: f64, gamma2: f64) -> Result<GridFunction> {
    if f.dim() != 2 {
        return Err(Error::Dimension { expected: 2, found: f.dim() });
    }
    if !(gamma1 > 0.0 && gamma2 > 0.0) {
        return Err(Error::Domain("fractional orders must be > 0".into()));
    }
    Ok(apply_multiplier(f, |k| {
        if k[0] == 0.0 || k[1] == 0.0 {
            0.0
        } else {
            k[0].powf(2.0 * gamma1) * k[1].powf(2.0 * gamma2)
        }
    }))
}

/// Flat Laplacian along the chosen axes (all axes when `axis` is `None`),
/// with the convention `Δ cos(kx) = -k² cos(kx)`.
pub fn laplacian(f: &GridFunction, axis: Option<usize>) -> Result<GridFunction> {
    if let Some(a) = axis {
        if a >= f.dim() {
            return Err(Error::Dimension { expected: a + 1, found: f.dim() });
        }
    }
    Ok(apply_multiplier(f, |k| match axis {
        Some(a) => -k[a] * k[a],
        None => -k.iter().map(|v| v * v).sum::<f64>(),
    }))
}

/// Composition with the dilation `x ↦ λx` (per-axis integer factors),
/// realized exactly on the grid as the index map `j ↦ λj mod N`.
pub fn dilate(f: &GridFunction, factors: &[usize]) -> Result<GridFunction> {
    if factors.len() != f.dim() {
        return Err(Error::Dimension { expected: f.dim(), found: factors.len() });
    }
    if factors.contains(&0) {
        return Err(Error::Domain("dilation factors must be >= 1".into()));
    }
    let values = match f.dim() {
        1 => {
            let n = f.sizes[0];
            (0..n).map(|j| f.values[(factors[0] * j) % n]).collect()
        }
        _ => {
            let (n1, n2) = (f.sizes[0], f.sizes[1]);
            let mut v = Vec::with_capacity(n1 * n2);
            for i in 0..n1 {
                for j in 0..n2 {
                    v.push(f.values[((factors[0] * i) % n1) * n2 + (factors[1] * j) % n2]);
                }
            }
            v
        }
    };
    Ok(GridFunction {
        sizes: f.sizes.clone(),
        periods: f.periods.clone(),
        values,
    })
}

/// Boundary dimension and fractional order of a one-boundary problem,
/// with the derived spectral parameters `s = n/2 + γ` and `μ = s(n - s)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FracParams {
    n: u32,
    gamma: f64,
}

impl FracParams {
    pub fn new(n: u32, gamma: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::Domain("boundary dimension must be >= 1".into()));
        }
        // gamma >= n/2 (mu <= 0) is allowed: the extension problem only
        // needs gamma in (0, 1) whatever n is. Operations check their own ranges.
        if !(gamma > 0.0 && gamma.is_finite()) {
            return Err(Error::Domain(format!("gamma must be positive, got {gamma}")));
        }
        Ok(Self { n, gamma })
    }

    /// From the eigenvalue `μ < n²/4`, taking `γ = √(n²/4 - μ)`.
    pub fn from_mu(n: u32, mu: f64) -> Result<Self> {
        let disc = 0.25 * (n as f64).powi(2) - mu;
        if !(disc > 0.0) {
            return Err(Error::Domain(format!("mu = {mu} not below n^2/4")));
        }
        Self::new(n, disc.sqrt())
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn nf(&self) -> f64 {
        self.n as f64
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn s(&self) -> f64 {
        0.5 * self.nf() + self.gamma
    }

    pub fn mu(&self) -> f64 {
        let s = self.s();
        s * (self.nf() - s)
    }
}

/// Two one-boundary parameter sets for the product of two hyperbolic spaces.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProductParams {
    pub p1: FracParams,
    pub p2: FracParams,
}

impl ProductParams {
    pub fn new(p1: FracParams, p2: FracParams) -> Self {
        Self { p1, p2 }
    }

    /// Both factors one-dimensional (the distinguished boundary is a 2-torus).
    pub fn planar(gamma1: f64, gamma2: f64) -> Result<Self> {
        Ok(Self::new(FracParams::new(1, gamma1)?, FracParams::new(1, gamma2)?))
    }

    pub fn mu(&self) -> f64 {
        self.p1.mu() + self.p2.mu()
    }

    pub fn gammas(&self) -> (f64, f64) {
        (self.p1.gamma(), self.p2.gamma())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const TAU: f64 = 2.0 * PI;

    #[test]
    fn rejects_bad_sizes() {
        assert!(GridFunction::new(vec![12], vec![TAU], vec![0.0; 12]).is_err());
        assert!(GridFunction::new(vec![4], vec![TAU], vec![0.0; 4]).is_err());
        assert!(GridFunction::new(vec![8], vec![TAU], vec![0.0; 7]).is_err());
        assert!(GridFunction::new(vec![8], vec![TAU], vec![f64::NAN; 8]).is_err());
        assert!(GridFunction::new(vec![8, 8, 8], vec![TAU; 3], vec![0.0; 512]).is_err());
    }

    #[test]
    fn constant_sample() {
        let f = sample(|_| 1.0, &[16], &[TAU]).unwrap();
        assert!(f.values().iter().all(|&v| v == 1.0));
    }

    #[test]
    fn cosine_has_two_coefficients() {
        let f = sample(|x| x[0].cos(), &[64], &[TAU]).unwrap();
        let nonzero = f.spectrum().iter().filter(|c| c.norm() > 1e-12).count();
        assert_eq!(nonzero, 2);
    }

    #[test]
    fn product_cosine_has_four_coefficients() {
        let f = sample(|x| (3.0 * x[0]).cos() * (2.0 * x[1]).cos(), &[32, 32], &[TAU, TAU]).unwrap();
        let nonzero = f.spectrum().iter().filter(|c| c.norm() > 1e-12).count();
        assert_eq!(nonzero, 4);
    }

    #[test]
    fn frac_laplacian_eigenfunctions() {
        let f = sample(|x| (2.0 * x[0]).cos(), &[64], &[TAU]).unwrap();
        let g = frac_laplacian(&f, 0.5).unwrap();
        assert!(g.max_abs_diff(&f.scale(2.0)) < 1e-13);
        let g = frac_laplacian(&f, 1.0).unwrap();
        assert!(g.max_abs_diff(&f.scale(4.0)) < 1e-12);
        let c = sample(|_| 3.0, &[64], &[TAU]).unwrap();
        assert!(frac_laplacian(&c, 0.3).unwrap().max_abs() < 1e-14);
    }

    #[test]
    fn product_multiplier_annihilates_axis_constants() {
        let f = sample(|x| (3.0 * x[0]).cos(), &[16, 16], &[TAU, TAU]).unwrap();
        assert!(product_frac_laplacian(&f, 0.25, 0.5).unwrap().max_abs() < 1e-14);
        let one_d = sample(|x| x[0].cos(), &[16], &[TAU]).unwrap();
        assert!(matches!(
            product_frac_laplacian(&one_d, 0.2, 0.2),
            Err(Error::Dimension { expected: 2, found: 1 })
        ));
    }

    #[test]
    fn frac_params_relations() {
        let p = FracParams::new(3, 0.7).unwrap();
        assert!((p.s() - 2.2).abs() < 1e-15);
        assert!((p.mu() - (2.25 - 0.49)).abs() < 1e-14);
        let q = FracParams::from_mu(3, p.mu()).unwrap();
        assert!((q.gamma() - 0.7).abs() < 1e-14);
        assert!(FracParams::new(1, 0.7).is_ok());
        assert!(FracParams::new(1, 0.0).is_err());
        assert!(FracParams::new(0, 0.3).is_err());
    }

    #[test]
    fn nodes_are_row_major() {
        let f = sample(|x| 10.0 * x[0] + x[1], &[8, 16], &[8.0, 16.0]).unwrap();
        assert_eq!(f.values()[1], 1.0);
        assert_eq!(f.values()[16], 10.0);
        assert_eq!(f.node(17), vec![1.0, 1.0]);
    }
}
