//! The verification suite: every module invariant as a named, independently
//! seeded check with a metric and a tolerance.

use std::collections::BTreeMap;
use std::f64::consts::TAU;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use frax_core::expansion::{
    expansion_exponents, four_term_fit, height_ladder, inditial, mixed_taylor_coefficients,
    profile_regular_part, taylor_coefficients, taylor_partial_sum,
};
use frax_core::extension::{
    dtn, dtn_fitted, extend, extension_profile, kernel_convolve, poisson_kernel_mass,
};
use frax_core::grid::{axis_frac_laplacian, frac_laplacian, product_frac_laplacian, sample};
use frax_core::hyperbolic::{
    mixed_limit_classify, mixed_limit_witness, product_harmonicity_residuals, product_poisson_eval,
    radial_residual_halfspace, radial_residual_hyperboloid, spherical_function_scaled,
    HalfSpaceVariant, PowerBranch,
};
use frax_core::scattering::{
    covariance_check, covariance_check_product, extension_heights, scattering_from_extension,
    scattering_matrix_spectral,
};
use frax_core::specfun::{
    bessel_k, gamma_fn, hc_c_function, hyp2f1, normalization_constants, sphere_scattering_eigenvalue,
};
use frax_core::{FracParams, GridFunction, HalfSpacePoint, HeightSample, ProductParams, RootDatum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::CliError;
use crate::report::{CheckEntry, VerificationReport};

pub const THREADS_ENV: &str = "FRAX_THREADS";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Specfun,
    Spectral,
    Extension,
    Expansion,
    Scattering,
    Hyperbolic,
}

impl Suite {
    pub const ALL: [Suite; 6] = [
        Suite::Specfun,
        Suite::Spectral,
        Suite::Extension,
        Suite::Expansion,
        Suite::Scattering,
        Suite::Hyperbolic,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Specfun => "specfun",
            Suite::Spectral => "spectral",
            Suite::Extension => "extension",
            Suite::Expansion => "expansion",
            Suite::Scattering => "scattering",
            Suite::Hyperbolic => "hyperbolic",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| CliError::Config(format!("unknown suite {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SuiteConfig {
    pub suites: Vec<Suite>,
    /// Grid resolutions; two-dimensional checks cap these at 64.
    pub sizes: Vec<usize>,
    pub gammas: Vec<f64>,
    /// Replaces every per-check tolerance when set.
    pub tolerance_override: Option<f64>,
    pub seed: u64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            suites: Suite::ALL.to_vec(),
            sizes: vec![64, 128],
            gammas: vec![0.1, 0.3, 0.5, 0.7, 0.9],
            tolerance_override: None,
            seed: 42,
        }
    }
}

impl SuiteConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let config: Self = serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.suites.is_empty() {
            return Err(CliError::Config("no suites selected".into()));
        }
        if self.sizes.is_empty() || self.gammas.is_empty() {
            return Err(CliError::Config("sizes and gammas must be non-empty".into()));
        }
        if let Some(&n) = self.sizes.iter().find(|&&n| n < 16 || !n.is_power_of_two()) {
            return Err(CliError::Config(format!("size {n} is not a power of two >= 16")));
        }
        if let Some(&g) = self.gammas.iter().find(|&&g| !(g > 0.0 && g < 1.0)) {
            return Err(CliError::Config(format!("gamma {g} outside (0, 1)")));
        }
        if let Some(t) = self.tolerance_override {
            if !(t >= 0.0 && t.is_finite()) {
                return Err(CliError::Config(format!("tolerance {t} must be finite and >= 0")));
            }
        }
        Ok(())
    }
}

type Metric = frax_core::Result<f64>;
type Runner = Box<dyn Fn(&mut ChaCha8Rng) -> Metric + Send + Sync>;

struct Check {
    id: String,
    params: BTreeMap<String, Value>,
    tolerance: f64,
    run: Runner,
}

fn check(
    suite: Suite,
    name: &str,
    params: Value,
    tolerance: f64,
    run: impl Fn(&mut ChaCha8Rng) -> Metric + Send + Sync + 'static,
) -> Check {
    let params: BTreeMap<String, Value> = match params {
        Value::Object(map) => map.into_iter().collect(),
        _ => BTreeMap::new(),
    };
    let mut id = format!("{suite}.{name}");
    if !params.is_empty() {
        let tags: Vec<String> = params.iter().map(|(k, v)| format!("{k}={v}")).collect();
        id.push_str(&format!("[{}]", tags.join(",")));
    }
    Check { id, params, tolerance, run: Box::new(run) }
}

/// FNV-1a, so each check draws from a stream fixed by its id alone.
fn stream_id(id: &str) -> u64 {
    id.bytes()
        .fold(0xcbf2_9ce4_8422_2325, |h, b| (h ^ b as u64).wrapping_mul(0x0100_0000_01b3))
}

/// Cap from `FRAX_THREADS`; `None` leaves the pool size to rayon.
pub fn thread_cap() -> Result<Option<usize>, CliError> {
    match std::env::var(THREADS_ENV) {
        Err(_) => Ok(None),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(CliError::Config(format!("{THREADS_ENV}={v:?} is not a positive integer"))),
        },
    }
}

pub fn run_verification_suite(config: &SuiteConfig) -> Result<VerificationReport, CliError> {
    config.validate()?;
    let checks: Vec<Check> = config.suites.iter().flat_map(|&s| build_suite(s, config)).collect();
    let mut seen = std::collections::HashSet::new();
    if let Some(dup) = checks.iter().find(|c| !seen.insert(c.id.as_str())) {
        return Err(CliError::Config(format!("duplicate check id {} (repeated gamma or size?)", dup.id)));
    }

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(thread_cap()?.unwrap_or(0))
        .build()
        .map_err(|e| CliError::Config(format!("thread pool: {e}")))?;
    let entries = pool.install(|| checks.par_iter().map(|c| execute(c, config)).collect());
    Ok(VerificationReport { entries })
}

fn execute(check: &Check, config: &SuiteConfig) -> CheckEntry {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed ^ stream_id(&check.id));
    let clock = Instant::now();
    let outcome = (check.run)(&mut rng);
    let runtime_ms = clock.elapsed().as_secs_f64() * 1e3;
    let (metric, error) = match outcome {
        Ok(m) if m.is_finite() => (m, None),
        Ok(m) => (f64::MAX, Some(format!("non-finite metric {m}"))),
        Err(e) => (f64::MAX, Some(e.to_string())),
    };
    let tolerance = config.tolerance_override.unwrap_or(check.tolerance);
    CheckEntry {
        check_id: check.id.clone(),
        params: check.params.clone(),
        metric,
        tolerance,
        passed: metric <= tolerance,
        runtime_ms,
        error,
    }
}

fn build_suite(suite: Suite, config: &SuiteConfig) -> Vec<Check> {
    match suite {
        Suite::Specfun => specfun_checks(config),
        Suite::Spectral => spectral_checks(config),
        Suite::Extension => extension_checks(config),
        Suite::Expansion => expansion_checks(config),
        Suite::Scattering => scattering_checks(config),
        Suite::Hyperbolic => hyperbolic_checks(config),
    }
}

/// Neighbouring sweep values paired cyclically.
fn gamma_pairs(gammas: &[f64]) -> Vec<(f64, f64)> {
    let n = gammas.len();
    if n == 1 {
        return vec![(gammas[0], gammas[0])];
    }
    (0..n).map(|i| (gammas[i], gammas[(i + 1) % n])).collect()
}

fn planar_sizes(config: &SuiteConfig) -> Vec<usize> {
    let mut sizes: Vec<usize> = config.sizes.iter().map(|&n| n.min(64)).collect();
    sizes.sort_unstable();
    sizes.dedup();
    sizes
}

/// Random real trigonometric polynomial with modes `0..=max_mode` per axis.
pub fn random_band_limited(rng: &mut impl Rng, sizes: &[usize], max_mode: usize) -> frax_core::Result<GridFunction> {
    let modes: Vec<(Vec<f64>, f64, f64)> = match sizes.len() {
        1 => (0..=max_mode)
            .map(|k| (vec![k as f64], rng.random_range(-1.0..1.0), rng.random_range(0.0..TAU)))
            .collect(),
        _ => (0..=max_mode)
            .flat_map(|k1| (0..=max_mode).map(move |k2| (k1, k2)))
            .map(|(k1, k2)| {
                (vec![k1 as f64, k2 as f64], rng.random_range(-1.0..1.0), rng.random_range(0.0..TAU))
            })
            .collect(),
    };
    let periods = vec![TAU; sizes.len()];
    sample(
        |x| {
            modes
                .iter()
                .map(|(k, a, phase)| a * (k.iter().zip(x).map(|(k, x)| k * x).sum::<f64>() + phase).cos())
                .sum()
        },
        sizes,
        &periods,
    )
}

fn cosine(k: f64, n: usize) -> frax_core::Result<GridFunction> {
    sample(|x| (k * x[0]).cos(), &[n], &[TAU])
}

/// Largest DFT-coefficient gap over the modes `want` actually carries,
/// relative to its peak coefficient. Empty high modes only hold roundoff
/// lifted by the symbol, which grid-space norms would report as error.
fn resolved_mode_gap(got: &GridFunction, want: &GridFunction) -> f64 {
    let (g, w) = (got.spectrum(), want.spectrum());
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

fn max_of(values: impl IntoIterator<Item = frax_core::Result<f64>>) -> Metric {
    values.into_iter().try_fold(0.0f64, |m, v| Ok(m.max(v?)))
}

fn specfun_checks(config: &SuiteConfig) -> Vec<Check> {
    let s = Suite::Specfun;
    let mut out = vec![
        check(s, "gamma_recurrence", json!({}), 1e-12, |_| {
            max_of((0..=990).map(|j| {
                let x = 0.1 + 0.01 * j as f64;
                let lhs = gamma_fn(x + 1.0)?;
                Ok(((lhs - x * gamma_fn(x)?) / lhs).abs())
            }))
        }),
        check(s, "bessel_half_order", json!({}), 1e-10, |_| {
            max_of((0..=199).map(|j| {
                let z = 0.1 + 0.1 * j as f64;
                let half = (std::f64::consts::PI / (2.0 * z)).sqrt() * (-z).exp();
                let three_halves = half * (1.0 + 1.0 / z);
                let gap = |got: f64, want: f64| ((got - want) / want).abs();
                Ok(gap(bessel_k(0.5, z)?, half).max(gap(bessel_k(1.5, z)?, three_halves)))
            }))
        }),
        check(s, "hyp2f1_symmetry", json!({}), 1e-12, |rng| {
            let draws: Vec<[f64; 4]> = (0..100)
                .map(|_| {
                    [
                        rng.random_range(-2.0..3.0),
                        rng.random_range(-2.0..3.0),
                        rng.random_range(0.6..4.0),
                        rng.random_range(-8.0..0.0),
                    ]
                })
                .collect();
            max_of(draws.into_iter().map(|[a, b, c, z]| {
                let ab = hyp2f1(a, b, c, z)?;
                Ok((ab - hyp2f1(b, a, c, z)?).abs() / ab.abs().max(1.0))
            }))
        }),
        check(s, "half_order_constants", json!({}), 0.0, |_| {
            let k = normalization_constants(0.5)?;
            Ok((k.c_gamma - 1.0).abs() + (k.d_gamma + 1.0).abs())
        }),
        check(s, "sphere_growth", json!({ "k": 20 }), 0.05, |_| {
            max_of([1u32, 2].into_iter().flat_map(|n| {
                (1..=9).map(move |j| {
                    let g = 0.1 * j as f64;
                    Ok((sphere_scattering_eigenvalue(20, n, g)? / 20f64.powf(2.0 * g) - 1.0).abs())
                })
            }))
        }),
        check(s, "c_function_ratio", json!({ "t": 12.0 }), 1e-3, |_| {
            let data = [(1, 1), (1, 2), (1, 3), (2, 1), (2, 2), (4, 1), (4, 2), (8, 1)];
            max_of(data.into_iter().flat_map(|(d, n)| {
                [(0.5, 0.8), (0.6, 1.0)].into_iter().map(move |(ga, gb)| {
                    let datum = RootDatum::new(d, n)?;
                    let lim = spherical_function_scaled(&datum, ga, 12.0)?
                        / spherical_function_scaled(&datum, gb, 12.0)?;
                    let want = hc_c_function(&datum, ga)? / hc_c_function(&datum, gb)?;
                    Ok((lim / want - 1.0).abs())
                })
            }))
        }),
    ];
    for &g in &config.gammas {
        out.push(check(s, "normalization_identity", json!({ "gamma": g }), 1e-12, move |_| {
            let k = normalization_constants(g)?;
            Ok((k.identity_residual(g) / k.c_gamma).abs())
        }));
        out.push(check(s, "sphere_inversion", json!({ "gamma": g }), 1e-12, move |_| {
            max_of((1..=6u32).flat_map(|n| {
                (1..=30u32).map(move |k| {
                    Ok((sphere_scattering_eigenvalue(k, n, g)? * sphere_scattering_eigenvalue(k, n, -g)? - 1.0).abs())
                })
            }))
        }));
    }
    out
}

fn spectral_checks(config: &SuiteConfig) -> Vec<Check> {
    let s = Suite::Spectral;
    let mut out = Vec::new();
    for &n in &config.sizes {
        let modes = n / 8;
        for &g in &config.gammas {
            out.push(check(s, "eigenfunction", json!({ "n": n, "gamma": g }), 1e-12, move |_| {
                max_of((1..=8).map(|k| {
                    let f = cosine(k as f64, n)?;
                    Ok(frac_laplacian(&f, g)?.rel_diff(&f.scale((k as f64).powf(2.0 * g))))
                }))
            }));
            out.push(check(s, "semigroup", json!({ "n": n, "gamma": g }), 1e-12, move |rng| {
                let f = random_band_limited(rng, &[n], modes)?;
                let g2 = 1.0 - 0.5 * g;
                let twice = frac_laplacian(&frac_laplacian(&f, g)?, g2)?;
                Ok(twice.rel_diff(&frac_laplacian(&f, g + g2)?))
            }));
            out.push(check(s, "symmetry", json!({ "n": n, "gamma": g }), 1e-12, move |rng| {
                let m = n.min(64);
                let f = random_band_limited(rng, &[m, m], m / 8)?;
                let h = random_band_limited(rng, &[m, m], m / 8)?;
                let lf = frac_laplacian(&f, g)?;
                let lhs = lf.dot(&h);
                let rhs = f.dot(&frac_laplacian(&h, g)?);
                Ok((lhs - rhs).abs() / (lf.dot(&lf) * h.dot(&h)).sqrt())
            }));
            out.push(check(s, "dilation", json!({ "n": n, "gamma": g }), 1e-12, move |rng| {
                let line = random_band_limited(rng, &[n], modes)?;
                let m = n.min(64);
                let plane = random_band_limited(rng, &[m, m], m / 8)?;
                Ok(covariance_check(&line, g, 2)?.deviation.max(covariance_check(&plane, g, 2)?.deviation))
            }));
        }
    }
    for m in planar_sizes(config) {
        for (g1, g2) in gamma_pairs(&config.gammas) {
            let params = json!({ "n": m, "gamma1": g1, "gamma2": g2 });
            out.push(check(s, "axis_commutation", params, 1e-13, move |rng| {
                let f = random_band_limited(rng, &[m, m], m / 8)?;
                let a = axis_frac_laplacian(&axis_frac_laplacian(&f, 0, g1)?, 1, g2)?;
                let b = axis_frac_laplacian(&axis_frac_laplacian(&f, 1, g2)?, 0, g1)?;
                Ok(a.rel_diff(&b))
            }));
        }
    }
    out
}

fn extension_checks(config: &SuiteConfig) -> Vec<Check> {
    let s = Suite::Extension;
    let mut out = vec![check(s, "half_order_profile_semigroup", json!({}), 1e-12, |rng| {
        max_of((0..200).map(|_| {
            let (z1, z2) = (rng.random_range(0.0..10.0), rng.random_range(0.0..10.0));
            let want = extension_profile(0.5, z1 + z2)?;
            Ok((extension_profile(0.5, z1)? * extension_profile(0.5, z2)? - want).abs() / want)
        }))
    })];
    for &n in &config.sizes {
        for &g in &config.gammas {
            let params = json!({ "n": n, "gamma": g });
            out.push(check(s, "dtn_analytic", params.clone(), 1e-8, move |rng| {
                let f = random_band_limited(rng, &[n], n / 16)?;
                Ok(dtn(&f, &FracParams::new(1, g)?)?.rel_diff(&frac_laplacian(&f, g)?))
            }));
            out.push(check(s, "dtn_fitted", params.clone(), 1e-4, move |rng| {
                let f = random_band_limited(rng, &[n], n / 16)?;
                Ok(dtn_fitted(&f, &FracParams::new(1, g)?)?.rel_diff(&frac_laplacian(&f, g)?))
            }));
            out.push(check(s, "kernel_vs_fourier", params, 1e-6, move |rng| {
                let f = random_band_limited(rng, &[n], n / 16)?;
                let p = FracParams::new(1, g)?;
                max_of([0.05, 0.3, 1.0].map(|y| Ok(kernel_convolve(&f, &p, y)?.rel_diff(&extend(&f, &p, y)?))))
            }));
        }
    }
    for &g in &config.gammas {
        out.push(check(s, "kernel_mass", json!({ "gamma": g }), 1e-6, move |_| {
            max_of([1u32, 2].into_iter().flat_map(|dim| {
                [0.2, 1.0].into_iter().map(move |y| Ok((poisson_kernel_mass(&FracParams::new(dim, g)?, y)? - 1.0).abs()))
            }))
        }));
    }
    out
}

/// `a_j` with `θ_γ`'s regular part equal to `Σ a_j z^{2j}`.
fn regular_coefficients(gamma: f64, count: usize) -> Vec<f64> {
    let mut a = vec![1.0];
    for j in 1..count {
        let jf = j as f64;
        a.push(a[j - 1] / (4.0 * jf * (jf - gamma)));
    }
    a
}

fn expansion_checks(config: &SuiteConfig) -> Vec<Check> {
    let s = Suite::Expansion;
    let mut out = Vec::new();
    for &g in &config.gammas {
        out.push(check(s, "taylor_coefficients", json!({ "gamma": g }), 1e-10, move |_| {
            let p = FracParams::new(1, g)?;
            let a = regular_coefficients(g, 5);
            max_of([1.0, 3.0].into_iter().flat_map(|k| {
                let coeffs = cosine(k, 64).and_then(|f| Ok((taylor_coefficients(&f, &p, 8)?, f)));
                let a = a.clone();
                (0..=4).map(move |j| {
                    let (c, f) = coeffs.as_ref().map_err(Clone::clone)?;
                    Ok(resolved_mode_gap(&c[2 * j], &f.scale(a[j] * k.powi(2 * j as i32))))
                })
            }))
        }));
        out.push(check(s, "taylor_order", json!({ "gamma": g }), 0.3, move |_| {
            let p = FracParams::new(1, g)?;
            let f = cosine(1.0, 64)?;
            let c = taylor_coefficients(&f, &p, 8)?;
            let err = |i_max: usize, y: f64| -> Metric {
                let sum = taylor_partial_sum(&c[..=i_max], y)?;
                Ok(sum.max_abs_diff(&f.scale(profile_regular_part(g, y)?)))
            };
            max_of([2usize, 4, 6, 8].map(|i_max| Ok(((err(i_max, 0.8)? / err(i_max, 0.4)?).log2() - (i_max + 2) as f64).abs())))
        }));
    }
    for (g1, g2) in gamma_pairs(&config.gammas) {
        let params = json!({ "gamma1": g1, "gamma2": g2 });
        out.push(check(s, "mixed_commutation", params.clone(), 1e-12, move |rng| {
            let p = ProductParams::planar(g1, g2)?;
            let f = random_band_limited(rng, &[32, 32], 3)?;
            let a = mixed_taylor_coefficients(&f, &p, 4, 4, 0)?;
            let b = mixed_taylor_coefficients(&f, &p, 4, 4, 1)?;
            Ok(a.iter().flatten().zip(b.iter().flatten()).map(|(x, y)| resolved_mode_gap(x, y)).fold(0.0, f64::max))
        }));
        out.push(check(s, "four_term_synthetic", params.clone(), 1e-8, move |rng| {
            let p = ProductParams::planar(g1, g2)?;
            let base = random_band_limited(rng, &[16, 16], 2)?;
            let coeffs: [f64; 4] = std::array::from_fn(|_| rng.random_range(-2.0..2.0));
            let exps = expansion_exponents(&p);
            let samples: Vec<HeightSample> = height_ladder(0.1, 3)
                .into_iter()
                .map(|(y1, y2)| {
                    let v: f64 = coeffs.iter().zip(exps).map(|(c, (e1, e2))| c * y1.powf(e1) * y2.powf(e2)).sum();
                    HeightSample { y1, y2, values: base.scale(v) }
                })
                .collect();
            let q = four_term_fit(&samples, &p)?.quad;
            let got = [&q.dirichlet, &q.second_axis, &q.first_axis, &q.corner];
            Ok(got.iter().zip(coeffs).map(|(g, c)| g.max_abs_diff(&base.scale(c))).fold(0.0, f64::max))
        }));
        out.push(check(s, "inditial_roots", params, 0.0, move |_| {
            let mut misses = 0.0;
            for (n1, n2) in [(1, 1), (1, 2), (2, 3), (3, 3)] {
                let p = ProductParams::new(FracParams::new(n1, g1)?, FracParams::new(n2, g2)?);
                let roots = |q: &FracParams| [-q.s(), -(q.nf() - q.s())];
                for z1 in roots(&p.p1) {
                    for z2 in roots(&p.p2) {
                        if !inditial(z1, z2, &p).1 {
                            misses += 1.0;
                        }
                    }
                }
            }
            Ok(misses)
        }));
    }
    out
}

fn scattering_checks(config: &SuiteConfig) -> Vec<Check> {
    let s = Suite::Scattering;
    let mut out = Vec::new();
    let pairs = gamma_pairs(&config.gammas);
    for m in planar_sizes(config) {
        for &(g1, g2) in &pairs {
            let params = json!({ "n": m, "gamma1": g1, "gamma2": g2 });
            out.push(check(s, "identities", params.clone(), 1e-12, move |rng| {
                let p = ProductParams::planar(g1, g2)?;
                let f = random_band_limited(rng, &[m, m], m / 8)?;
                let q = scattering_matrix_spectral(&f, &p)?;
                let d1 = normalization_constants(g1)?.d_gamma;
                let d2 = normalization_constants(g2)?.d_gamma;
                let ident = q.s22.scale(d1 * d2).rel_diff(&product_frac_laplacian(&f, g1, g2)?);
                let factor = axis_frac_laplacian(&q.s12, 0, g1)?.scale(1.0 / d1).rel_diff(&q.s22);
                Ok(ident.max(factor))
            }));
            out.push(check(s, "entry_commutation", params.clone(), 1e-13, move |rng| {
                let p = ProductParams::planar(g1, g2)?;
                let f = random_band_limited(rng, &[m, m], m / 8)?;
                let q = scattering_matrix_spectral(&f, &p)?;
                let d1 = normalization_constants(g1)?.d_gamma;
                let d2 = normalization_constants(g2)?.d_gamma;
                let a = axis_frac_laplacian(&q.s12, 0, g1)?.scale(1.0 / d1);
                let b = axis_frac_laplacian(&q.s21, 1, g2)?.scale(1.0 / d2);
                Ok(a.rel_diff(&b))
            }));
            out.push(check(s, "covariance", params, 1e-11, move |rng| {
                let p = ProductParams::planar(g1, g2)?;
                let f = random_band_limited(rng, &[m, m], m / 8)?;
                let one = covariance_check(&f, g1, 2)?.deviation;
                Ok(one.max(covariance_check_product(&f, &p, (2, 2))?.deviation))
            }));
        }
    }
    let m = planar_sizes(config).last().copied().unwrap_or(64);
    for &(g1, g2) in &pairs {
        let params = json!({ "n": m, "gamma1": g1, "gamma2": g2 });
        out.push(check(s, "extension_vs_spectral", params, 1e-4, move |rng| {
            let p = ProductParams::planar(g1, g2)?;
            let f = random_band_limited(rng, &[m, m], 3)?;
            let (q, _) = scattering_from_extension(&f, &p, &extension_heights())?;
            Ok(q.max_rel_diff(&scattering_matrix_spectral(&f, &p)?))
        }));
    }
    out
}

fn radial_points() -> impl Iterator<Item = f64> {
    (0..50).map(|j| 0.1 * 100f64.powf(j as f64 / 49.0))
}

fn hyperbolic_checks(config: &SuiteConfig) -> Vec<Check> {
    let s = Suite::Hyperbolic;
    let mut out = Vec::new();
    for n in 1..=3u32 {
        let mut gammas = config.gammas.clone();
        if n >= 3 {
            gammas.extend([1.2, 1.7]);
        }
        for g in gammas {
            let params = json!({ "n": n, "gamma": g });
            out.push(check(s, "euler_residual", params.clone(), 1e-12, move |_| {
                let p = FracParams::new(n, g)?;
                max_of(radial_points().flat_map(|y| {
                    [PowerBranch::Decaying, PowerBranch::Growing]
                        .map(|b| radial_residual_halfspace(y, &p, HalfSpaceVariant::Euler(b)))
                }))
            }));
            out.push(check(s, "bessel_residual", params.clone(), 1e-8, move |_| {
                let p = FracParams::new(n, g)?;
                max_of(radial_points().map(|y| radial_residual_halfspace(y, &p, HalfSpaceVariant::Bessel)))
            }));
            out.push(check(s, "hyperboloid_residual", params, 1e-7, move |_| {
                let p = FracParams::new(n, g)?;
                max_of(radial_points().map(|t| radial_residual_hyperboloid(t, &p)))
            }));
        }
    }
    for (g1, g2) in gamma_pairs(&config.gammas) {
        let params = json!({ "gamma1": g1, "gamma2": g2 });
        out.push(check(s, "fd_order", params.clone(), 0.2, move |rng| {
            let p = ProductParams::planar(g1, g2)?;
            let z1 = HalfSpacePoint::new(vec![rng.random_range(-0.5..0.5)], rng.random_range(0.8..1.2))?;
            let z2 = HalfSpacePoint::new(vec![rng.random_range(-0.5..0.5)], rng.random_range(0.8..1.2))?;
            let u = |a: &HalfSpacePoint, b: &HalfSpacePoint| product_poisson_eval(a, b, &[0.1], &[0.2], &p).unwrap_or(f64::NAN);
            let residual = |h: f64| -> Metric {
                let (r1, r2) = product_harmonicity_residuals(u, &z1, &z2, &p, h)?;
                Ok(r1.abs().max(r2.abs()))
            };
            max_of([0.1, 0.05].map(|h| Ok(((residual(h)? / residual(0.5 * h)?).log2() - 2.0).abs())))
        }));
        out.push(check(s, "strong_harmonicity", params, 1e-4, move |rng| {
            let p = ProductParams::planar(g1, g2)?;
            let z1 = HalfSpacePoint::new(vec![rng.random_range(-1.0..1.0)], rng.random_range(0.5..2.0))?;
            let z2 = HalfSpacePoint::new(vec![rng.random_range(-1.0..1.0)], rng.random_range(0.5..2.0))?;
            let u = |a: &HalfSpacePoint, b: &HalfSpacePoint| product_poisson_eval(a, b, &[0.3], &[-0.2], &p).unwrap_or(f64::NAN);
            let (r1, r2) = product_harmonicity_residuals(u, &z1, &z2, &p, 1e-3)?;
            Ok(r1.abs().max(r2.abs()) / u(&z1, &z2))
        }));
    }
    out.push(check(s, "limit_lattice", json!({ "points": 27 }), 0.0, |_| {
        let mut disagreements = 0.0;
        for g1 in [0.2, 0.5, 0.8] {
            for b1 in [0.35, 0.65, 0.95] {
                for theta in [0.0, 1.0, f64::INFINITY] {
                    let want = mixed_limit_classify((g1, 0.9), (b1, 0.1), theta)?;
                    let got = mixed_limit_witness((g1, 0.9), (b1, 0.1), theta, 1.0, 0.25)?;
                    if got.behavior != want {
                        disagreements += 1.0;
                    }
                }
            }
        }
        Ok(disagreements)
    }));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("spectrum".parse::<Suite>().is_err());
    }

    #[test]
    fn config_validation() {
        assert!(SuiteConfig::default().validate().is_ok());
        let bad = SuiteConfig { sizes: vec![100], ..SuiteConfig::default() };
        assert!(bad.validate().is_err());
        let bad = SuiteConfig { gammas: vec![1.0], ..SuiteConfig::default() };
        assert!(bad.validate().is_err());
        assert!(SuiteConfig::from_json(r#"{"suites": ["spectral"], "sizes": [32]}"#).is_ok());
        assert!(SuiteConfig::from_json(r#"{"suite": ["spectral"]}"#).is_err());
    }

    #[test]
    fn pairs_wrap_around() {
        assert_eq!(gamma_pairs(&[0.1, 0.2, 0.3]), vec![(0.1, 0.2), (0.2, 0.3), (0.3, 0.1)]);
        assert_eq!(gamma_pairs(&[0.4]), vec![(0.4, 0.4)]);
    }
}
