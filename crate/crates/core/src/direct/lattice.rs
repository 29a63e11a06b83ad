//! Regularized lattice sums `Z(phi) = "sum_{j in Z^n, j != 0} phi(j)"` for
//! homogeneous `phi`, the constants of the lattice Euler-Maclaurin expansion.

use super::special::{dirichlet_beta, gauss_legendre, integrate, riemann_zeta};
use crate::corpus::smooth_cutoff;

/// Numerical value of `Z(phi)` for `phi` positively homogeneous of degree
/// `degree > -dim`.
///
/// Uses `sum' phi(j) chi(|j|/R) - int phi chi`, with a cutoff `chi` equal to
/// one near the origin; the difference converges to `Z(phi)` faster than any
/// power of `R`.
pub fn lattice_zeta(dim: usize, degree: f64, phi: &dyn Fn([f64; 2]) -> f64) -> f64 {
    const FLAT: f64 = 0.1;
    let chi = |t: f64| {
        if t <= FLAT {
            1.0
        } else {
            smooth_cutoff(0.5 + 0.5 * (t - FLAT) / (1.0 - FLAT))
        }
    };
    let radius: f64 = if dim == 1 { 4000.0 } else { 96.0 };
    let reach = radius as i64;
    let mut sum = 0.0;
    if dim == 1 {
        for j in 1..=reach {
            let w = chi(j as f64 / radius);
            sum += (phi([j as f64, 0.0]) + phi([-(j as f64), 0.0])) * w;
        }
    } else {
        for j0 in -reach..=reach {
            for j1 in -reach..=reach {
                let r = ((j0 * j0 + j1 * j1) as f64).sqrt();
                if r > 0.0 && r < radius {
                    sum += phi([j0 as f64, j1 as f64]) * chi(r / radius);
                }
            }
        }
    }
    let angular = if dim == 1 {
        phi([1.0, 0.0]) + phi([-1.0, 0.0])
    } else {
        let m = 4096;
        let dt = std::f64::consts::TAU / m as f64;
        (0..m).map(|k| phi([(k as f64 * dt).cos(), (k as f64 * dt).sin()])).sum::<f64>() * dt
    };
    let a = degree + dim as f64 - 1.0;
    let inner = FLAT * radius;
    let rule = gauss_legendre(48);
    let radial = inner.powf(a + 1.0) / (a + 1.0) + integrate(|r| r.powf(a) * chi(r / radius), inner, radius, 16, &rule);
    sum - angular * radial
}

/// `sum'_{j in Z^n} |j|^{-sigma}`, continued in `sigma`.
pub fn power_sum(dim: usize, sigma: f64) -> f64 {
    if dim == 1 {
        2.0 * riemann_zeta(sigma)
    } else {
        let w = sigma / 2.0;
        4.0 * riemann_zeta(w) * dirichlet_beta(w)
    }
}

/// Regularized lattice moments `Z(j_0^{p_0} j_1^{p_1} |j|^{-b})` for even
/// `p_0, p_1` with `p_0 + p_1 <= 6`, the constants multiplying the Taylor
/// terms of an odd kernel `z |z|^{-b}`.
#[derive(Clone, Debug)]
pub struct OddMoments {
    dim: usize,
    /// Indexed by `[p_0 / 2][p_1 / 2]`.
    values: [[f64; 4]; 4],
}

impl OddMoments {
    pub fn new(dim: usize, b: f64) -> Self {
        let mut values = [[0.0; 4]; 4];
        if dim == 1 {
            for k in 1..4 {
                values[k][0] = power_sum(1, b - 2.0 * k as f64);
            }
        } else {
            let mixed22 = lattice_zeta(2, 4.0 - b, &|z| z[0] * z[0] * z[1] * z[1] * norm(z).powf(-b));
            let mixed42 = lattice_zeta(2, 6.0 - b, &|z| z[0].powi(4) * z[1] * z[1] * norm(z).powf(-b));
            let half = |sigma: f64| 0.5 * power_sum(2, sigma);
            let pure2 = half(b - 2.0);
            let pure4 = half(b - 4.0) - mixed22;
            let pure6 = half(b - 6.0) - 3.0 * mixed42;
            values[1][0] = pure2;
            values[0][1] = pure2;
            values[2][0] = pure4;
            values[0][2] = pure4;
            values[1][1] = mixed22;
            values[3][0] = pure6;
            values[0][3] = pure6;
            values[2][1] = mixed42;
            values[1][2] = mixed42;
        }
        OddMoments { dim, values }
    }

    /// `Z(j_0^{p_0} j_1^{p_1} |j|^{-b})`; zero unless both powers are even.
    pub fn get(&self, p0: usize, p1: usize) -> f64 {
        if p0 % 2 == 1 || p1 % 2 == 1 || p0 + p1 > 6 || (self.dim == 1 && p1 > 0) {
            return 0.0;
        }
        self.values[p0 / 2][p1 / 2]
    }

    /// Removes the contribution of explicit lattice offsets `excluded`.
    pub fn without(&self, b: f64, excluded: &[[i64; 2]]) -> Self {
        let mut out = self.clone();
        for j in excluded {
            let z = [j[0] as f64, j[1] as f64];
            let w = norm(z).powf(-b);
            for a in 0..4 {
                for c in 0..4 {
                    if a + c == 0 || a + c > 3 || (self.dim == 1 && c > 0) {
                        continue;
                    }
                    out.values[a][c] -= z[0].powi(2 * a as i32) * z[1].powi(2 * c as i32) * w;
                }
            }
        }
        out
    }
}

fn norm(z: [f64; 2]) -> f64 {
    (z[0] * z[0] + z[1] * z[1]).sqrt()
}

/// Nonzero lattice offsets with `|j| <= radius` (in spacings).
pub fn offsets_within(dim: usize, radius: f64) -> Vec<[i64; 2]> {
    let r = radius.floor() as i64;
    let mut out = Vec::new();
    let second = if dim == 2 { -r..=r } else { 0..=0 };
    for j0 in -r..=r {
        for j1 in second.clone() {
            if (j0, j1) != (0, 0) && ((j0 * j0 + j1 * j1) as f64) <= radius * radius {
                out.push([j0, j1]);
            }
        }
    }
    out
}
