//! Special functions evaluated in double precision.

use crate::error::{Error, Result};
use crate::scalar::Real;

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// Euler Gamma function for positive arguments (Lanczos approximation).
pub fn gamma_fn<T: Real>(x: T) -> Result<T> {
    gamma(x.as_f64()).map(T::lit)
}

pub fn gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::GammaArgument(x));
    }
    if x < 0.5 {
        return Ok(gamma(x + 1.0)? / x);
    }
    let z = x - 1.0;
    let mut a = LANCZOS[0];
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        a += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    Ok((std::f64::consts::TAU).sqrt() * t.powf(z + 0.5) * (-t).exp() * a)
}

const BERNOULLI_OVER_FACTORIAL: [f64; 10] = [
    1.0 / 6.0 / 2.0,
    -1.0 / 30.0 / 24.0,
    1.0 / 42.0 / 720.0,
    -1.0 / 30.0 / 40_320.0,
    5.0 / 66.0 / 3_628_800.0,
    -691.0 / 2730.0 / 479_001_600.0,
    7.0 / 6.0 / 87_178_291_200.0,
    -3617.0 / 510.0 / 20_922_789_888_000.0,
    43_867.0 / 798.0 / 6_402_373_705_728_000.0,
    -174_611.0 / 330.0 / 2_432_902_008_176_640_000.0,
];

/// Hurwitz zeta `zeta(sigma, a) = sum_{k>=0} (k + a)^{-sigma}`, analytically
/// continued to all real `sigma != 1`, for `a > 0`.
pub fn hurwitz_zeta(sigma: f64, a: f64) -> f64 {
    debug_assert!(a > 0.0 && sigma != 1.0);
    const SHIFT: usize = 16;
    let mut sum = 0.0;
    for k in 0..SHIFT {
        sum += (k as f64 + a).powf(-sigma);
    }
    let x = SHIFT as f64 + a;
    sum += x.powf(1.0 - sigma) / (sigma - 1.0) + 0.5 * x.powf(-sigma);
    // rising factorial sigma (sigma+1) ... (sigma+2j-2) times x^{-sigma-2j+1}
    let mut rising = sigma;
    let mut power = x.powf(-sigma - 1.0);
    let inv_x2 = 1.0 / (x * x);
    for (j, c) in BERNOULLI_OVER_FACTORIAL.iter().enumerate() {
        sum += c * rising * power;
        let m = 2.0 * j as f64;
        rising *= (sigma + m + 1.0) * (sigma + m + 2.0);
        power *= inv_x2;
    }
    sum
}

pub fn riemann_zeta(sigma: f64) -> f64 {
    hurwitz_zeta(sigma, 1.0)
}

/// Dirichlet beta `sum_{k>=0} (-1)^k (2k+1)^{-sigma}`, continued.
pub fn dirichlet_beta(sigma: f64) -> f64 {
    4f64.powf(-sigma) * (hurwitz_zeta(sigma, 0.25) - hurwitz_zeta(sigma, 0.75))
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let k = k as f64;
                let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        out.push((x, 2.0 / ((1.0 - x * x) * dp * dp)));
    }
    out
}

/// Composite Gauss-Legendre integral of `f` over `[lo, hi]`.
pub fn integrate(f: impl Fn(f64) -> f64, lo: f64, hi: f64, panels: usize, rule: &[(f64, f64)]) -> f64 {
    let width = (hi - lo) / panels as f64;
    let mut total = 0.0;
    for k in 0..panels {
        let a = lo + k as f64 * width;
        let mid = a + width / 2.0;
        total += rule.iter().map(|&(x, w)| w * f(mid + x * width / 2.0)).sum::<f64>() * width / 2.0;
    }
    total
}
