//! Direct lattice quadrature of the Riesz gradient and of the reconstruction
//! convolution.
//!
//! Both integrals are written in symmetrized form and summed over lattice
//! offsets. The singular part is handled by the lattice Euler-Maclaurin
//! expansion: the lattice sum of `(local Taylor polynomial) x kernel`
//! differs from the integral by explicit multiples of regularized lattice
//! sums, which are subtracted using finite-difference derivatives of the
//! integrand at the target. Offsets within `inner_exclusion` spacings are
//! replaced by that same local model.

use serde::{Deserialize, Serialize};

use super::constants::c_signed;
use super::kernel::{odd_kernel, Support};
use super::lattice::{offsets_within, OddMoments};
use crate::error::{check_s, Error, Result};
use crate::field::{Field, Rank};
use crate::grid::GridSpec;
use crate::scalar::Real;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Boundary {
    /// Kernel summed over all periodic images: the torus operator.
    Periodic,
    /// Kernel truncated at `outer_radius`, field extended by zero.
    FreeSpace,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    /// Radius, in spacings, of the offsets replaced by the local model.
    pub inner_exclusion: f64,
    /// Truncation radius in length units (free space only).
    pub outer_radius: f64,
    pub tail_tolerance: f64,
    pub boundary: Boundary,
}

impl QuadratureSpec {
    pub fn periodic(extent: f64) -> Self {
        QuadratureSpec { inner_exclusion: 1.0, outer_radius: extent / 2.0, tail_tolerance: 1e-8, boundary: Boundary::Periodic }
    }

    pub fn free_space(outer_radius: f64, tail_tolerance: f64) -> Self {
        QuadratureSpec { inner_exclusion: 1.0, outer_radius, tail_tolerance, boundary: Boundary::FreeSpace }
    }

    /// Settings for the kernel translation integral: radial tail integrated
    /// numerically out to `1e6`.
    pub fn kernel_l1() -> Self {
        QuadratureSpec { inner_exclusion: 1.0, outer_radius: 1e9, tail_tolerance: 1e-6, boundary: Boundary::FreeSpace }
    }

    pub fn validate<T: Real>(&self, grid: &GridSpec<T>) -> Result<()> {
        if !(self.inner_exclusion >= 0.5) {
            return Err(Error::OutOfRange { name: "inner_exclusion", value: self.inner_exclusion, range: "[0.5, inf)" });
        }
        let half = grid.extent().as_f64() / 2.0;
        if !(self.outer_radius > 0.0 && self.outer_radius <= half) {
            return Err(Error::OutOfRange { name: "outer_radius", value: self.outer_radius, range: "(0, extent/2]" });
        }
        if !(self.tail_tolerance > 0.0) {
            return Err(Error::OutOfRange { name: "tail_tolerance", value: self.tail_tolerance, range: "(0, inf)" });
        }
        let reach = self.inner_exclusion * grid.spacing().as_f64();
        if reach >= self.outer_radius {
            return Err(Error::Precondition("inner exclusion reaches past the outer radius".into()));
        }
        Ok(())
    }

    fn support(&self) -> Support {
        match self.boundary {
            Boundary::Periodic => Support::Periodic,
            Boundary::FreeSpace => Support::Truncated(self.outer_radius),
        }
    }
}

/// `D^s u` by lattice quadrature of
/// `(c_{n,s}/2) int (u(x+z) - u(x-z)) z / |z|^{n+s+1} dz`.
pub fn riesz_gradient_quadrature<T: Real>(u: &Field<T>, s: T, q: &QuadratureSpec) -> Result<Field<T>> {
    let s = s.as_f64();
    check_s(s)?;
    if !u.is_scalar() {
        return Err(Error::RankMismatch("scalar field required"));
    }
    let grid = u.grid().to_f64();
    q.validate(&grid)?;
    let n = grid.dim();
    let b = n as f64 + s + 1.0;
    let c = c_signed(n, s)?;
    let samples: Vec<f64> = u.samples().iter().map(|x| x.as_f64()).collect();
    let reference = samples[0];
    let centered: Vec<f64> = samples.iter().map(|x| x - reference).collect();
    if q.boundary == Boundary::FreeSpace {
        free_space_guards(&grid, &[&centered], c, b, q)?;
    }
    let plan = LocalPlan::new(&grid, b, q);
    let hn = grid.spacing().powi(n as i32);
    let local = plan.local_terms(&grid, &centered);
    let mut out = Vec::with_capacity(n * grid.node_count());
    for i in 0..n {
        let mut comp = correlate(&grid, &centered, &plan.tables[i], q.boundary);
        for (v, corr) in comp.iter_mut().zip(&local[i]) {
            *v = c * (hn * *v - 0.5 * corr);
        }
        out.extend(comp);
    }
    Field::new(*u.grid(), Rank::Vector, out.into_iter().map(T::lit).collect())
}

/// `c_{n,-s} int g(y) . (x - y) / |x - y|^{n-s+1} dy` by lattice quadrature.
pub fn ftc_convolution_quadrature<T: Real>(g: &Field<T>, s: T, q: &QuadratureSpec) -> Result<Field<T>> {
    let s = s.as_f64();
    check_s(s)?;
    if g.is_scalar() {
        return Err(Error::RankMismatch("vector field required"));
    }
    let grid = g.grid().to_f64();
    q.validate(&grid)?;
    let n = grid.dim();
    let b = n as f64 - s + 1.0;
    let c = c_signed(n, -s)?;
    let comps: Vec<Vec<f64>> = (0..n)
        .map(|j| {
            let comp = g.component(j);
            let reference = comp[0].as_f64();
            comp.iter().map(|x| x.as_f64() - reference).collect()
        })
        .collect();
    if q.boundary == Boundary::FreeSpace {
        let refs: Vec<&[f64]> = comps.iter().map(|v| v.as_slice()).collect();
        free_space_guards(&grid, &refs, c, b, q)?;
    }
    let plan = LocalPlan::new(&grid, b, q);
    let hn = grid.spacing().powi(n as i32);
    let mut total = vec![0.0; grid.node_count()];
    for (j, comp) in comps.iter().enumerate() {
        let sum = correlate(&grid, comp, &plan.tables[j], q.boundary);
        let local = plan.local_terms(&grid, comp);
        // sum_y g(x - y) K(y) = -sum_y g(y) K(y - x)
        for ((t, v), corr) in total.iter_mut().zip(&sum).zip(&local[j]) {
            *t += c * (-hn * v + 0.5 * corr);
        }
    }
    Field::new(*g.grid(), Rank::Scalar, total.into_iter().map(T::lit).collect())
}

struct LocalPlan {
    tables: Vec<Vec<f64>>,
    moments: OddMoments,
    b: f64,
}

impl LocalPlan {
    fn new(grid: &GridSpec<f64>, b: f64, q: &QuadratureSpec) -> Self {
        let n = grid.dim();
        let mut tables = odd_kernel(grid, b, q.support());
        let excluded = offsets_within(n, q.inner_exclusion);
        let np = grid.points_per_axis() as i64;
        for j in &excluded {
            let flat = grid.flat([j[0].rem_euclid(np) as usize, j[1].rem_euclid(np) as usize]);
            for t in tables.iter_mut() {
                t[flat] = 0.0;
            }
        }
        let moments = OddMoments::new(n, b).without(b, &excluded);
        LocalPlan { tables, moments, b }
    }

    /// Lattice-sum defect of `(f(x+z) - f(x-z)) z_i |z|^{-b}` for each kernel
    /// component `i`, from the odd Taylor terms of orders 1, 3 and 5.
    fn local_terms(&self, grid: &GridSpec<f64>, f: &[f64]) -> Vec<Vec<f64>> {
        let n = grid.dim();
        let h = grid.spacing();
        let d = Derivatives::new(grid, f);
        let mut out = vec![vec![0.0; grid.node_count()]; n];
        for order in [1usize, 3, 5] {
            let scale = 2.0 / factorial(order) * h.powf(n as f64 + order as f64 + 1.0 - self.b);
            let splits: Vec<usize> = if n == 1 { vec![order] } else { (0..=order).collect() };
            for k in splits {
                let m = order - k;
                let weight = binomial(order, k) as f64 * scale;
                let z: Vec<f64> = (0..n).map(|i| self.moments.get(k + (i == 0) as usize, m + (i == 1) as usize)).collect();
                if z.iter().all(|v| *v == 0.0) {
                    continue;
                }
                let partial = d.partial(k, m, order);
                for i in 0..n {
                    if z[i] == 0.0 {
                        continue;
                    }
                    for (o, p) in out[i].iter_mut().zip(&partial) {
                        *o += weight * z[i] * p;
                    }
                }
            }
        }
        out
    }
}

fn factorial(k: usize) -> f64 {
    (1..=k).map(|v| v as f64).product()
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Rejects free-space sums whose truncation tail or boundary leakage is not
/// negligible.
fn free_space_guards(grid: &GridSpec<f64>, fields: &[&[f64]], c: f64, b: f64, q: &QuadratureSpec) -> Result<()> {
    let n = grid.points_per_axis();
    let mut peak = 0.0f64;
    let mut band = 0.0f64;
    let mut l1 = 0.0;
    for f in fields {
        for (flat, &v) in f.iter().enumerate() {
            peak = peak.max(v.abs());
            l1 += v.abs();
            let a = grid.axes(flat);
            let edge = |i: usize| i < 2 || i >= n - 2;
            if edge(a[0]) || (grid.dim() == 2 && edge(a[1])) {
                band = band.max(v.abs());
            }
        }
    }
    if peak > 0.0 && band > 1e-12 * peak {
        return Err(Error::SupportLeak(band / peak));
    }
    let bound = c * q.outer_radius.powf(1.0 - b) * l1 * grid.cell_volume();
    if bound > q.tail_tolerance {
        return Err(Error::TailBound { bound, tolerance: q.tail_tolerance });
    }
    Ok(())
}

/// `out[x] = sum_y src[y] table[y - x]`, accumulated source by source.
fn correlate(grid: &GridSpec<f64>, src: &[f64], table: &[f64], boundary: Boundary) -> Vec<f64> {
    let n = grid.points_per_axis();
    let peak = src.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let floor = 1e-16 * peak;
    // reversed[k] = table[-k], so out[x] += v * reversed[x - y]
    let reversed: Vec<f64> = (0..grid.node_count())
        .map(|flat| {
            let a = grid.axes(flat);
            table[grid.flat([(n - a[0]) % n, (n - a[1]) % n])]
        })
        .collect();
    let mut out = vec![0.0; grid.node_count()];
    let free = boundary == Boundary::FreeSpace;
    // x ranges whose unwrapped offset x - y stays in [-N/2, N/2)
    let window = |y: usize| if free { (y.saturating_sub(n / 2), (y + n / 2).min(n)) } else { (0, n) };
    let shifted_add = |dst: &mut [f64], row: &[f64], y: usize, v: f64, lo: usize, hi: usize| {
        for x in lo..hi {
            dst[x] += v * row[(x + n - y) % n];
        }
    };
    let contiguous_add = |dst: &mut [f64], row: &[f64], y: usize, v: f64| {
        let (head, tail) = dst.split_at_mut(y);
        for (d, r) in tail.iter_mut().zip(&row[..n - y]) {
            *d += v * r;
        }
        for (d, r) in head.iter_mut().zip(&row[n - y..]) {
            *d += v * r;
        }
    };
    if grid.dim() == 1 {
        for (y, &v) in src.iter().enumerate() {
            if v.abs() <= floor {
                continue;
            }
            if free {
                let (lo, hi) = window(y);
                shifted_add(&mut out, &reversed, y, v, lo, hi);
            } else {
                contiguous_add(&mut out, &reversed, y, v);
            }
        }
        return out;
    }
    for (flat, &v) in src.iter().enumerate() {
        if v.abs() <= floor {
            continue;
        }
        let [y0, y1] = grid.axes(flat);
        let (lo0, hi0) = window(y0);
        for x0 in lo0..hi0 {
            let r = (x0 + n - y0) % n;
            let row = &reversed[r * n..(r + 1) * n];
            let dst = &mut out[x0 * n..(x0 + 1) * n];
            if free {
                let (lo1, hi1) = window(y1);
                shifted_add(dst, row, y1, v, lo1, hi1);
            } else {
                contiguous_add(dst, row, y1, v);
            }
        }
    }
    out
}

/// Periodic finite differences. Partials of total order 1, 3 and 5 are
/// accurate to orders 6, 4 and 2 respectively.
struct Derivatives<'a> {
    grid: &'a GridSpec<f64>,
    f: &'a [f64],
    h: f64,
}

/// Central stencil `(offsets -r..=r)` for derivative `order` at the given
/// accuracy.
fn stencil(order: usize, accuracy: usize) -> &'static [f64] {
    match (order, accuracy.min(match order { 0 => 0, 1 => 6, 2 | 3 => 4, _ => 2 })) {
        (0, _) => &[1.0],
        (1, 6) => &[-1.0 / 60.0, 9.0 / 60.0, -45.0 / 60.0, 0.0, 45.0 / 60.0, -9.0 / 60.0, 1.0 / 60.0],
        (1, 4) => &[1.0 / 12.0, -8.0 / 12.0, 0.0, 8.0 / 12.0, -1.0 / 12.0],
        (1, _) => &[-0.5, 0.0, 0.5],
        (2, 4) => &[-1.0 / 12.0, 16.0 / 12.0, -30.0 / 12.0, 16.0 / 12.0, -1.0 / 12.0],
        (2, _) => &[1.0, -2.0, 1.0],
        (3, 4) => &[1.0 / 8.0, -1.0, 13.0 / 8.0, 0.0, -13.0 / 8.0, 1.0, -1.0 / 8.0],
        (3, _) => &[-0.5, 1.0, 0.0, -1.0, 0.5],
        (4, _) => &[1.0, -4.0, 6.0, -4.0, 1.0],
        (5, _) => &[-0.5, 2.0, -2.5, 0.0, 2.5, -2.0, 0.5],
        _ => unreachable!("unsupported derivative order"),
    }
}

impl<'a> Derivatives<'a> {
    fn new(grid: &'a GridSpec<f64>, f: &'a [f64]) -> Self {
        Derivatives { grid, f, h: grid.spacing() }
    }

    /// `d_0^k0 d_1^k1 f` at every node; `total` selects the accuracy.
    fn partial(&self, k0: usize, k1: usize, total: usize) -> Vec<f64> {
        let accuracy = match total {
            1 => 6,
            3 => 4,
            _ => 2,
        };
        let s0 = stencil(k0, accuracy);
        let s1 = stencil(k1, accuracy);
        let r0 = (s0.len() / 2) as i64;
        let r1 = (s1.len() / 2) as i64;
        let n = self.grid.points_per_axis() as i64;
        let two_d = self.grid.dim() == 2;
        let scale = self.h.powi(-((k0 + k1) as i32));
        (0..self.grid.node_count())
            .map(|x| {
                let a = self.grid.axes(x);
                let mut acc = 0.0;
                for (p, w0) in s0.iter().enumerate() {
                    if *w0 == 0.0 {
                        continue;
                    }
                    let i0 = (a[0] as i64 + p as i64 - r0).rem_euclid(n) as usize;
                    for (q, w1) in s1.iter().enumerate() {
                        if *w1 == 0.0 {
                            continue;
                        }
                        let i1 = if two_d { (a[1] as i64 + q as i64 - r1).rem_euclid(n) as usize } else { 0 };
                        acc += w0 * w1 * self.f[self.grid.flat([i0, i1])];
                    }
                }
                acc * scale
            })
            .collect()
    }
}
