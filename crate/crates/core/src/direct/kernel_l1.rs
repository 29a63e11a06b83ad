//! `int |K(x) - K(x - e_1)| dx` for `K(x) = x / |x|^{n+1-s}`.

use super::quadrature::QuadratureSpec;
use super::special::gauss_legendre;
use crate::corpus::smooth_cutoff;
use crate::error::{check_s, Error, Result};

/// Smallest radius resolved around each singularity, relative to the patch size.
const INNER_FLOOR: f64 = 1e-14;
/// Radius of the patches around the two singular points.
const PATCH: f64 = 0.45;

pub fn kernel_translation_l1(n: usize, s: f64, q: &QuadratureSpec) -> Result<f64> {
    kernel_translation_l1_at_level(n, s, q, 2)
}

/// Same integral with quadrature density scaled by `level` (1 = coarse).
pub fn kernel_translation_l1_at_level(n: usize, s: f64, q: &QuadratureSpec, level: usize) -> Result<f64> {
    if n != 1 && n != 2 {
        return Err(Error::UnsupportedDimension(n));
    }
    check_s(s)?;
    if !(q.outer_radius >= 4.0) {
        return Err(Error::OutOfRange { name: "outer_radius", value: q.outer_radius, range: "[4, inf)" });
    }
    let level = level.max(1);
    let beta = n as f64 + 1.0 - s;
    let kernel = |x: [f64; 2]| {
        let r = (x[0] * x[0] + x[1] * x[1]).sqrt();
        let w = r.powf(-beta);
        [x[0] * w, x[1] * w]
    };
    let integrand = |x: [f64; 2]| {
        let a = kernel(x);
        let b = kernel([x[0] - 1.0, x[1]]);
        ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)).sqrt()
    };
    let psi0 = |x: [f64; 2]| smooth_cutoff((x[0] * x[0] + x[1] * x[1]).sqrt() / PATCH);
    let psi1 = |x: [f64; 2]| smooth_cutoff(((x[0] - 1.0).powi(2) + x[1] * x[1]).sqrt() / PATCH);
    let rule = gauss_legendre(8 * level + 8);
    let angles = if n == 1 { 2 } else { 128 * level };

    let polar = |center: [f64; 2], weight: &dyn Fn([f64; 2]) -> f64, radii: &[(f64, f64)], angles: usize| {
        let mut total = 0.0;
        for &(lo, hi) in radii {
            let half = (hi - lo) / 2.0;
            let mid = (hi + lo) / 2.0;
            for &(t, wt) in &rule {
                let r = mid + half * t;
                let ring = ring_integral(n, angles, |dir| {
                    let x = [center[0] + r * dir[0], center[1] + r * dir[1]];
                    integrand(x) * weight(x)
                });
                total += wt * half * ring * r.powi(n as i32 - 1);
            }
        }
        total
    };

    // patches around both singular points, geometric panels toward the center
    let panels = (-(INNER_FLOOR.log2())).ceil() as usize;
    let near: Vec<(f64, f64)> = (0..panels).map(|k| (PATCH * 0.5f64.powi(k as i32 + 1), PATCH * 0.5f64.powi(k as i32))).collect();
    let floor = PATCH * 0.5f64.powi(panels as i32);
    // |f| ~ r^{s-n} inside the floor disk; integrate the leading term exactly
    let sphere = if n == 1 { 2.0 } else { std::f64::consts::TAU };
    let core = sphere * floor.powf(s) / s;
    let patch0 = polar([0.0, 0.0], &psi0, &near, angles) + core;
    let patch1 = polar([1.0, 0.0], &psi1, &near, angles) + core;

    // remainder: smooth, vanishes near both singular points
    let rest_weight = |x: [f64; 2]| 1.0 - psi0(x) - psi1(x);
    let body: Vec<(f64, f64)> = {
        let m = 32 * level;
        let (lo, hi) = (PATCH / 2.0, 2.0);
        (0..m).map(|k| (lo + (hi - lo) * k as f64 / m as f64, lo + (hi - lo) * (k + 1) as f64 / m as f64)).collect()
    };
    let fine_angles = if n == 1 { 2 } else { 512 * level };
    let mut rest = polar([0.0, 0.0], &rest_weight, &body, fine_angles);
    let mut far = Vec::new();
    let mut r = 2.0;
    while r < q.outer_radius {
        let next = (r * 1.5).min(q.outer_radius);
        far.push((r, next));
        r = next;
    }
    rest += polar([0.0, 0.0], &rest_weight, &far, angles);

    // beyond R: |f| ~ |d_1 K| = r^{s-n-1} |e_1 - beta theta_1 theta|
    let directional = ring_integral(n, 4096, |dir| (1.0 + beta * (beta - 2.0) * dir[0] * dir[0]).sqrt());
    let big_r = q.outer_radius;
    let tail = big_r.powf(s - 1.0) / (1.0 - s) * directional;
    let tail_error = tail * (beta + 2.0) / big_r;
    if tail_error > q.tail_tolerance {
        return Err(Error::TailBound { bound: tail_error, tolerance: q.tail_tolerance });
    }
    Ok(patch0 + patch1 + rest + tail)
}

/// `int_{S^{n-1}} f(theta) d theta` (two points for `n = 1`, trapezoid otherwise).
fn ring_integral(n: usize, m: usize, f: impl Fn([f64; 2]) -> f64) -> f64 {
    if n == 1 {
        return f([1.0, 0.0]) + f([-1.0, 0.0]);
    }
    let dt = std::f64::consts::TAU / m as f64;
    (0..m).map(|k| f([(k as f64 * dt).cos(), (k as f64 * dt).sin()])).sum::<f64>() * dt
}
