//! Lattice tables of the singular kernels, either periodized (torus
//! semantics) or truncated to a ball (free-space semantics).

use super::special::{gauss_legendre, hurwitz_zeta, integrate};
use crate::grid::GridSpec;

#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) enum Support {
    Periodic,
    Truncated(f64),
}

const IMAGES: i64 = 8;

/// Offsets of table entry `flat` in spacings, wrapped to `[-N/2, N/2)`.
pub(crate) fn offset(grid: &GridSpec<f64>, flat: usize) -> [i64; 2] {
    let a = grid.axes(flat);
    [grid.wrapped_offset(a[0]), if grid.dim() == 2 { grid.wrapped_offset(a[1]) } else { 0 }]
}

fn norm(z: [f64; 2]) -> f64 {
    (z[0] * z[0] + z[1] * z[1]).sqrt()
}

/// Component tables of the odd kernel `z |z|^{-b}` at every lattice offset.
/// Entry 0 (the diagonal) is 0.
pub(crate) fn odd_kernel(grid: &GridSpec<f64>, b: f64, support: Support) -> Vec<Vec<f64>> {
    let n = grid.points_per_axis();
    let h = grid.spacing();
    let l = grid.extent();
    if grid.dim() == 1 {
        let mut t = vec![0.0; n];
        for (k, v) in t.iter_mut().enumerate() {
            let j = grid.wrapped_offset(k);
            if j == 0 || j == -(n as i64) / 2 {
                continue;
            }
            let z = j as f64 * h;
            *v = match support {
                Support::Periodic => {
                    let y = z.abs() / l;
                    z.signum() * l.powf(1.0 - b) * (hurwitz_zeta(b - 1.0, y) - hurwitz_zeta(b - 1.0, 1.0 - y))
                }
                Support::Truncated(r) if z.abs() <= r => z.signum() * z.abs().powf(1.0 - b),
                Support::Truncated(_) => 0.0,
            };
        }
        return vec![t];
    }
    let half = n / 2;
    let rule = gauss_legendre(24);
    // first component on the quadrant j0, j1 in [0, N/2]; the rest by symmetry
    let mut quad = vec![0.0; (half + 1) * (half + 1)];
    for j0 in 0..=half {
        for j1 in 0..=half {
            if j0 == 0 || j0 == half {
                continue;
            }
            let z = [j0 as f64 * h, j1 as f64 * h];
            quad[j0 * (half + 1) + j1] = match support {
                Support::Periodic => periodic_odd_2d(z, b, l, &rule),
                Support::Truncated(r) if norm(z) <= r => z[0] * norm(z).powf(-b),
                Support::Truncated(_) => 0.0,
            };
        }
    }
    let mut k0 = vec![0.0; n * n];
    let mut k1 = vec![0.0; n * n];
    for flat in 0..n * n {
        let j = offset(grid, flat);
        let (a0, a1) = (j[0].unsigned_abs() as usize, j[1].unsigned_abs() as usize);
        k0[flat] = j[0].signum() as f64 * quad[a0 * (half + 1) + a1];
        k1[flat] = j[1].signum() as f64 * quad[a1 * (half + 1) + a0];
    }
    vec![k0, k1]
}

/// First component of `sum_m K(z + m L)` in two dimensions, images inside
/// `|m|_inf <= IMAGES` plus the continuum remainder written as a boundary
/// flux.
fn periodic_odd_2d(z: [f64; 2], b: f64, l: f64, rule: &[(f64, f64)]) -> f64 {
    let mut sum = 0.0;
    for m0 in -IMAGES..=IMAGES {
        for m1 in -IMAGES..=IMAGES {
            let w = [z[0] + m0 as f64 * l, z[1] + m1 as f64 * l];
            sum += w[0] * norm(w).powf(-b);
        }
    }
    let a = (IMAGES as f64 + 0.5) * l;
    let side = |x0: f64| integrate(|t| norm([x0, z[1] + t]).powf(2.0 - b), -a, a, 4, rule);
    sum + (side(z[0] + a) - side(z[0] - a)) / (l * l * (b - 2.0))
}

/// Table of the even weight `|z|^{-a}` (`a > n`) at every lattice offset;
/// entry 0 is 0.
pub(crate) fn even_weight(grid: &GridSpec<f64>, a: f64, support: Support) -> Vec<f64> {
    let n = grid.points_per_axis();
    let h = grid.spacing();
    let l = grid.extent();
    if grid.dim() == 1 {
        return (0..n)
            .map(|k| {
                let j = grid.wrapped_offset(k);
                if j == 0 {
                    return 0.0;
                }
                let z = (j as f64 * h).abs();
                match support {
                    Support::Periodic => l.powf(-a) * (hurwitz_zeta(a, z / l) + hurwitz_zeta(a, 1.0 - z / l)),
                    Support::Truncated(r) if z <= r => z.powf(-a),
                    Support::Truncated(_) => 0.0,
                }
            })
            .collect();
    }
    let half = n / 2;
    let rule = gauss_legendre(24);
    let mut quad = vec![0.0; (half + 1) * (half + 1)];
    for j0 in 0..=half {
        for j1 in 0..=j0 {
            if j0 == 0 && j1 == 0 {
                continue;
            }
            let z = [j0 as f64 * h, j1 as f64 * h];
            let v = match support {
                Support::Periodic => periodic_even_2d(z, a, l, &rule),
                Support::Truncated(r) if norm(z) <= r => norm(z).powf(-a),
                Support::Truncated(_) => 0.0,
            };
            quad[j0 * (half + 1) + j1] = v;
            quad[j1 * (half + 1) + j0] = v;
        }
    }
    (0..n * n)
        .map(|flat| {
            let j = offset(grid, flat);
            quad[j[0].unsigned_abs() as usize * (half + 1) + j[1].unsigned_abs() as usize]
        })
        .collect()
}

fn periodic_even_2d(z: [f64; 2], a: f64, l: f64, rule: &[(f64, f64)]) -> f64 {
    let mut sum = 0.0;
    for m0 in -IMAGES..=IMAGES {
        for m1 in -IMAGES..=IMAGES {
            sum += norm([z[0] + m0 as f64 * l, z[1] + m1 as f64 * l]).powf(-a);
        }
    }
    let half = (IMAGES as f64 + 0.5) * l;
    // flux of w |w|^{-a} through the four sides of the shifted square
    let mut flux = 0.0;
    for axis in 0..2 {
        let other = 1 - axis;
        for sign in [-1.0, 1.0] {
            let x = z[axis] + sign * half;
            flux += integrate(
                |t| {
                    let mut w = [0.0; 2];
                    w[axis] = x;
                    w[other] = z[other] + t;
                    sign * x * norm(w).powf(-a)
                },
                -half,
                half,
                4,
                rule,
            );
        }
    }
    sum + flux / (l * l * (a - 2.0))
}
