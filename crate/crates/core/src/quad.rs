//! Adaptive Gauss–Kronrod quadrature and Wynn's epsilon algorithm.

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// One 7/15-point Gauss–Kronrod panel: (Kronrod estimate, error estimate).
fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for (j, &x) in XGK.iter().take(7).enumerate() {
        let dx = half * x;
        let s = f(center - dx) + f(center + dx);
        kronrod += WGK[j] * s;
        if j % 2 == 1 {
            gauss += WG[j / 2] * s;
        }
    }
    (kronrod * half, ((kronrod - gauss) * half).abs())
}

/// Globally adaptive integral of `f` over `[a, b]` to absolute tolerance
/// `tol`: the panel with the largest error estimate is bisected until the
/// summed estimate drops below `tol`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> Result<f64> {
    const MAX_PANELS: usize = 20_000;
    let (v, e) = gk15(&f, a, b);
    let mut panels = vec![(a, b, v, e)];
    let mut total_err = e;
    while total_err > tol.max(4.0 * f64::EPSILON * panels.iter().map(|p| p.2.abs()).sum::<f64>()) {
        if panels.len() >= MAX_PANELS {
            return Err(Error::NoConvergence(format!(
                "quadrature on [{a}, {b}] stalled (error {total_err:.2e})"
            )));
        }
        let (idx, _) = panels
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.total_cmp(&y.1 .3))
            .unwrap();
        let (lo, hi, _, _) = panels.swap_remove(idx);
        let mid = 0.5 * (lo + hi);
        let (v1, e1) = gk15(&f, lo, mid);
        let (v2, e2) = gk15(&f, mid, hi);
        panels.push((lo, mid, v1, e1));
        panels.push((mid, hi, v2, e2));
        total_err = panels.iter().map(|p| p.3).sum();
    }
    Ok(panels.iter().map(|p| p.2).sum())
}

/// Wynn's epsilon acceleration of a sequence of partial sums.
///
/// Returns the extrapolated limit and a crude error estimate (difference
/// between the last two even-column entries).
pub fn wynn_epsilon(partial_sums: &[f64]) -> (f64, f64) {
    let n = partial_sums.len();
    if n < 3 {
        let last = partial_sums.last().copied().unwrap_or(0.0);
        return (last, f64::INFINITY);
    }
    // eps[k][j]: column k, row j
    let mut prev: Vec<f64> = vec![0.0; n + 1];
    let mut cur: Vec<f64> = partial_sums.to_vec();
    let mut best = *partial_sums.last().unwrap();
    let mut best_err = (partial_sums[n - 1] - partial_sums[n - 2]).abs();
    let mut col = 0usize;
    while cur.len() > 1 {
        let mut next = Vec::with_capacity(cur.len() - 1);
        for j in 0..cur.len() - 1 {
            let d = cur[j + 1] - cur[j];
            let e = if d == 0.0 { f64::INFINITY } else { 1.0 / d };
            next.push(prev[j + 1] + e);
        }
        col += 1;
        if col.is_multiple_of(2) && next.len() >= 2 && next.iter().all(|v| v.is_finite()) {
            let l = next.len();
            let err = (next[l - 1] - next[l - 2]).abs();
            if err < best_err {
                best_err = err;
                best = next[l - 1];
            }
        }
        prev = cur;
        cur = next;
    }
    (best, best_err)
}
