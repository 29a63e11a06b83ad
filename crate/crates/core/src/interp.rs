//! Real interpolation between `L^p` and `W^{1,p}`: K-functionals and the
//! `(theta, q; K)` norm.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{check_p, Error, Result};
use crate::field::{lp_norm, Field};
use crate::fourier::Mode;
use crate::grid::Region;
use crate::scalar::Real;
use crate::spectral::{apply_multiplier, exact_gradient, power_spectrum, Multiplier};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "snake_case")]
pub enum KMethod {
    /// Closed form of `K_2(t) = inf (||x_0||_2^2 + t^2 ||x_1||_{H^1}^2)^{1/2}`;
    /// `K_2 <= K <= sqrt(2) K_2`.
    ExactHilbertP2,
    /// Upper bound from splittings `u = (u - G_sigma * u) + G_sigma * u`
    /// with Gaussian and Bessel kernels `G_sigma`.
    MollifierFamily,
}

/// The `W^{1,p}`-type norm `(||v||_p^p + gradient_weight^p ||grad v||_p^p)^{1/p}`.
/// A zero weight gives the degenerate couple `(L^p, L^p)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct KOptions {
    pub gradient_weight: f64,
    /// Mollifier widths, log-spaced from `spacing / 8` to the extent.
    pub sigma_count: usize,
}

impl Default for KOptions {
    fn default() -> Self {
        KOptions { gradient_weight: 1.0, sigma_count: 80 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KCurve {
    pub t_grid: Vec<f64>,
    pub values: Vec<f64>,
    pub method: KMethod,
}

/// `count` log-spaced points from `lo` to `hi` inclusive.
pub fn log_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    if count == 1 {
        return vec![lo];
    }
    let (a, b) = (lo.ln(), hi.ln());
    (0..count).map(|k| (a + (b - a) * k as f64 / (count - 1) as f64).exp()).collect()
}

/// The default curve grid: 200 points in `[1e-6, 1e6]`.
pub fn default_t_grid() -> Vec<f64> {
    log_grid(1e-6, 1e6, 200)
}

pub fn k_functional<T: Real>(u: &Field<T>, t: f64, p: f64, method: KMethod) -> Result<f64> {
    k_functional_with(u, t, p, method, &KOptions::default())
}

pub fn k_functional_with<T: Real>(u: &Field<T>, t: f64, p: f64, method: KMethod, options: &KOptions) -> Result<f64> {
    Ok(k_curve_with(u, &[t], p, method, options)?.values[0])
}

pub fn k_curve<T: Real>(u: &Field<T>, t_grid: &[f64], p: f64, method: KMethod) -> Result<KCurve> {
    k_curve_with(u, t_grid, p, method, &KOptions::default())
}

pub fn k_curve_with<T: Real>(u: &Field<T>, t_grid: &[f64], p: f64, method: KMethod, options: &KOptions) -> Result<KCurve> {
    check_p(p)?;
    if !u.is_scalar() {
        return Err(Error::RankMismatch("scalar field required"));
    }
    if let Some(&t) = t_grid.iter().find(|&&t| !(t > 0.0 && t.is_finite())) {
        return Err(Error::OutOfRange { name: "t", value: t, range: "(0, inf)" });
    }
    if !(options.gradient_weight >= 0.0) {
        return Err(Error::OutOfRange { name: "gradient_weight", value: options.gradient_weight, range: "[0, inf)" });
    }
    let values = match method {
        KMethod::ExactHilbertP2 => {
            if p != 2.0 {
                return Err(Error::MethodMismatch(format!("exact Hilbert K-functional needs p = 2, got {p}")));
            }
            exact_hilbert(u, t_grid, options.gradient_weight)?
        }
        KMethod::MollifierFamily => mollifier(u, t_grid, p, options)?,
    };
    Ok(KCurve { t_grid: t_grid.to_vec(), values, method })
}

fn hilbert_weight<T: Real>(m: &Mode<T>, gradient_weight: f64) -> f64 {
    let w = 2.0 * std::f64::consts::PI * m.norm().as_f64() * gradient_weight;
    1.0 + w * w
}

fn exact_hilbert<T: Real>(u: &Field<T>, t_grid: &[f64], gradient_weight: f64) -> Result<Vec<f64>> {
    let (modes, energy) = power_spectrum(u)?;
    let pairs: Vec<(f64, f64)> = modes
        .iter()
        .zip(&energy)
        .filter(|(_, e)| e.as_f64() > 0.0)
        .map(|(m, e)| (hilbert_weight(m, gradient_weight), e.as_f64()))
        .collect();
    Ok(t_grid
        .iter()
        .map(|&t| {
            let t2 = t * t;
            pairs.iter().map(|&(w, e)| e * t2 * w / (1.0 + t2 * w)).sum::<f64>().sqrt()
        })
        .collect())
}

/// Positive unit-mass kernels of width `sigma`: the Gaussian with symbol
/// `exp(-2 pi^2 sigma^2 |xi|^2)` and the Bessel kernel with symbol
/// `1 / (1 + 4 pi^2 sigma^2 |xi|^2)`.
#[derive(Clone, Copy)]
enum MollifierShape {
    Gaussian,
    Bessel,
}

/// Norm of `x_0` and `W^{1,p}` norm of `x_1` for one splitting.
struct Split {
    low: f64,
    high: f64,
}

fn mollifier<T: Real>(u: &Field<T>, t_grid: &[f64], p: f64, options: &KOptions) -> Result<Vec<f64>> {
    let grid = *u.grid();
    let full = Region::FullTorus;
    let pt = T::lit(p);
    let gamma = options.gradient_weight;
    let w1p = |v: &Field<T>| -> Result<f64> {
        let a = lp_norm(v, pt, &full)?.as_f64();
        if gamma == 0.0 {
            return Ok(a);
        }
        let b = gamma * lp_norm(&exact_gradient(v)?, pt, &full)?.as_f64();
        let m = a.max(b);
        Ok(if m == 0.0 { 0.0 } else { m * ((a / m).powf(p) + (b / m).powf(p)).powf(1.0 / p) })
    };
    let norm_u = lp_norm(u, pt, &full)?.as_f64();
    // endpoints: x_1 = 0 and x_0 = 0
    let mut splits = vec![Split { low: norm_u, high: 0.0 }, Split { low: 0.0, high: w1p(u)? }];
    let h = grid.spacing().as_f64();
    let l = grid.extent().as_f64();
    let modes = crate::fourier::modes(&grid);
    let pi2 = std::f64::consts::PI * std::f64::consts::PI;
    for sigma in log_grid(h / 8.0, l, options.sigma_count.max(1)) {
        let c = pi2 * sigma * sigma;
        for shape in [MollifierShape::Gaussian, MollifierShape::Bessel] {
            let symbol = modes
                .iter()
                .map(|m| {
                    let r2 = m.norm().as_f64().powi(2);
                    let v = match shape {
                        MollifierShape::Gaussian => (-2.0 * c * r2).exp(),
                        MollifierShape::Bessel => 1.0 / (1.0 + 4.0 * c * r2),
                    };
                    Complex::new(T::lit(v), T::zero())
                })
                .collect();
            let smooth = apply_multiplier(u, &Multiplier::Custom(symbol))?;
            let rough = u.sub(&smooth)?;
            splits.push(Split { low: lp_norm(&rough, pt, &full)?.as_f64(), high: w1p(&smooth)? });
        }
    }
    Ok(t_grid
        .iter()
        .map(|&t| splits.iter().map(|sp| sp.low + t * sp.high).fold(f64::INFINITY, f64::min))
        .collect())
}

/// `(int_0^inf (t^{-theta} K(t))^q dt/t)^{1/q}` from a K-curve.
///
/// The curve is integrated by the trapezoid rule in `log t`; the tails use
/// `K(t) ~ K(t_0) t / t_0` below the grid and `K(t) ~ K(t_end)` above it,
/// after checking that the end slopes of `log K` are close to 1 and 0.
pub fn interpolation_norm_from_curve(curve: &KCurve, theta: f64, q: f64) -> Result<f64> {
    if !(theta > 0.0 && theta < 1.0) {
        return Err(Error::OutOfRange { name: "theta", value: theta, range: "(0, 1)" });
    }
    if !(q >= 1.0 && q.is_finite()) {
        return Err(Error::OutOfRange { name: "q", value: q, range: "[1, inf)" });
    }
    let (t, k) = (&curve.t_grid, &curve.values);
    if t.len() < 3 || t.len() != k.len() {
        return Err(Error::Precondition("K-curve needs at least three points".into()));
    }
    let last = t.len() - 1;
    let peak = k.iter().fold(0.0f64, |m, v| m.max(*v));
    if peak == 0.0 {
        return Ok(0.0);
    }
    let slope = |i: usize, j: usize| (k[j] / k[i]).ln() / (t[j] / t[i]).ln();
    const SLOPE_SLACK: f64 = 0.02;
    if k[0] <= 0.0 || (slope(0, 1) - 1.0).abs() > SLOPE_SLACK {
        return Err(Error::NonConvergentTail(format!("K is not linear at t = {:e}", t[0])));
    }
    if slope(last - 1, last).abs() > SLOPE_SLACK {
        return Err(Error::NonConvergentTail(format!("K is not constant at t = {:e}", t[last])));
    }
    let f: Vec<f64> = t.iter().zip(k).map(|(&t, &k)| (t.powf(-theta) * k / peak).powf(q)).collect();
    let mut sum = 0.0;
    for i in 0..last {
        sum += 0.5 * (f[i] + f[i + 1]) * (t[i + 1] / t[i]).ln();
    }
    sum += f[0] / ((1.0 - theta) * q) + f[last] / (theta * q);
    Ok(peak * sum.powf(1.0 / q))
}

/// `(L^p, W^{1,p})_{theta, q}` norm of `u` over the default t-grid, with the
/// exact Hilbert curve for `p = 2` and the mollifier bound otherwise.
pub fn interpolation_norm<T: Real>(u: &Field<T>, theta: f64, q: f64, p: f64) -> Result<f64> {
    let method = if p == 2.0 { KMethod::ExactHilbertP2 } else { KMethod::MollifierFamily };
    let curve = k_curve(u, &default_t_grid(), p, method)?;
    interpolation_norm_from_curve(&curve, theta, q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::make_grid;

    #[test]
    fn log_grid_endpoints() {
        let g = log_grid(1e-6, 1e6, 200);
        assert_eq!(g.len(), 200);
        assert!((g[0] - 1e-6).abs() < 1e-18 && (g[199] - 1e6).abs() < 1e-6);
    }

    #[test]
    fn exact_method_requires_p2() {
        let g = make_grid(1, 32, 8.0).unwrap();
        let u = Field::from_fn(g, |x: [f64; 2]| (-x[0] * x[0]).exp());
        assert!(matches!(k_functional(&u, 1.0, 3.0, KMethod::ExactHilbertP2), Err(Error::MethodMismatch(_))));
    }

    #[test]
    fn zero_field_has_zero_norm() {
        let g = make_grid(1, 32, 8.0).unwrap();
        let u = Field::<f64>::zeros(g, crate::field::Rank::Scalar);
        assert_eq!(interpolation_norm(&u, 0.5, 2.0, 2.0).unwrap(), 0.0);
    }
}
