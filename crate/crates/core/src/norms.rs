//! Gagliardo and Hölder seminorms, the `D^s`-norm and translation moduli.

use rand::distributions::{Distribution, WeightedIndex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::direct::lattice::lattice_zeta;
use crate::direct::special::{dirichlet_beta, riemann_zeta};
use crate::direct::{even_weight, Support};
use crate::error::{check_p, check_s, Error, Result};
use crate::field::{lp_norm, translate, Field, Rank};
use crate::grid::{GridSpec, Region};
use crate::scalar::Real;
use crate::spectral::{exact_gradient, riesz_gradient_spectral};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NormKind {
    Gagliardo { s: f64, p: f64 },
    Holder { mu: f64 },
    Dsp { s: f64, p: f64 },
    Lp { p: f64 },
    TranslationModulus { p: f64, h: Vec<f64> },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "snake_case")]
pub enum NormMethod {
    /// Every lattice pair (1-d grids up to 1024 points).
    FullDoubleSum,
    /// Pairs `(x, x + z)` with `x` uniform and `z` drawn proportionally to
    /// the weight.
    MonteCarlo { samples: usize, seed: u64 },
    GridPairs,
}

impl NormMethod {
    pub fn monte_carlo(seed: u64) -> Self {
        NormMethod::MonteCarlo { samples: 1_000_000, seed }
    }

    /// Full sum where allowed, Monte Carlo otherwise.
    pub fn default_for<T: Real>(grid: &GridSpec<T>, seed: u64) -> Self {
        if grid.dim() == 1 && grid.points_per_axis() <= FULL_SUM_LIMIT {
            NormMethod::FullDoubleSum
        } else {
            NormMethod::monte_carlo(seed)
        }
    }
}

const FULL_SUM_LIMIT: usize = 1024;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormReport {
    pub kind: NormKind,
    pub value: f64,
    /// One standard deviation of the sampling error, Monte Carlo only.
    pub std_error: Option<f64>,
    pub region: Region,
    pub method: NormMethod,
}

/// `(int int |u(x) - u(y)|^p / |x - y|^{n + sp} dx dy)^{1/p}` on the torus.
///
/// The lattice sum over pairs uses the periodized weight; the missing
/// near-diagonal mass is restored by the leading lattice Euler-Maclaurin
/// term `h^{p(1-s)} Z(|grad u . z|^p |z|^{-n-sp})`.
pub fn gagliardo_seminorm<T: Real>(u: &Field<T>, s: T, p: T, method: NormMethod) -> Result<NormReport> {
    let (s, p) = (s.as_f64(), p.as_f64());
    check_s(s)?;
    check_p(p)?;
    if !u.is_scalar() {
        return Err(Error::RankMismatch("scalar field required"));
    }
    let grid = u.grid().to_f64();
    let n = grid.dim();
    let samples: Vec<f64> = u.samples().iter().map(|x| x.as_f64()).collect();
    let peak = samples.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let report = |value: f64, std_error: Option<f64>| NormReport {
        kind: NormKind::Gagliardo { s, p },
        value,
        std_error,
        region: Region::FullTorus,
        method,
    };
    if peak == 0.0 {
        return Ok(report(0.0, matches!(method, NormMethod::MonteCarlo { .. }).then_some(0.0)));
    }
    let unit: Vec<f64> = samples.iter().map(|x| x / peak).collect();
    let a = n as f64 + s * p;
    let weight = even_weight(&grid, a, Support::Periodic);
    let hn = grid.cell_volume();
    let (raw, raw_error) = match method {
        NormMethod::FullDoubleSum => {
            if n != 1 || grid.points_per_axis() > FULL_SUM_LIMIT {
                return Err(Error::MethodMismatch(format!(
                    "full double sum needs a 1-d grid of at most {FULL_SUM_LIMIT} points"
                )));
            }
            (full_sum(&unit, &weight, p) * hn * hn, 0.0)
        }
        NormMethod::MonteCarlo { samples, seed } => {
            if samples == 0 {
                return Err(Error::MethodMismatch("Monte Carlo needs at least one sample".into()));
            }
            let (mean, err) = monte_carlo(&grid, &unit, &weight, p, samples, seed)?;
            let total: f64 = weight.iter().sum();
            let scale = grid.node_count() as f64 * total * hn * hn;
            (mean * scale, err * scale)
        }
        NormMethod::GridPairs => return Err(Error::MethodMismatch("grid pairs apply to the Hölder seminorm".into())),
    };
    let unit_field = Field::from_parts(grid, Rank::Scalar, unit);
    let correction = diagonal_correction(&unit_field, s, p)?;
    let integral = (raw - correction).max(0.0);
    let value = peak * integral.powf(1.0 / p);
    let std_error = match method {
        NormMethod::MonteCarlo { .. } if integral > 0.0 => Some(peak * raw_error / (p * integral.powf(1.0 - 1.0 / p))),
        NormMethod::MonteCarlo { .. } => Some(0.0),
        _ => None,
    };
    Ok(report(value, std_error))
}

fn full_sum(u: &[f64], weight: &[f64], p: f64) -> f64 {
    let n = u.len();
    let mut total = 0.0;
    for k in 1..n {
        let w = weight[k];
        let mut acc = 0.0;
        for x in 0..n {
            acc += (u[(x + k) % n] - u[x]).abs().powf(p);
        }
        total += w * acc;
    }
    total
}

fn monte_carlo(grid: &GridSpec<f64>, u: &[f64], weight: &[f64], p: f64, samples: usize, seed: u64) -> Result<(f64, f64)> {
    let table = WeightedIndex::new(weight).map_err(|e| Error::Precondition(e.to_string()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let nodes = grid.node_count();
    let np = grid.points_per_axis();
    let (mut sum, mut sum_sq) = (0.0, 0.0);
    for _ in 0..samples {
        let x = rng.gen_range(0..nodes);
        let z = table.sample(&mut rng);
        let [x0, x1] = grid.axes(x);
        let [z0, z1] = grid.axes(z);
        let y = grid.flat([(x0 + z0) % np, (x1 + z1) % np]);
        let v = (u[y] - u[x]).abs().powf(p);
        sum += v;
        sum_sq += v * v;
    }
    let m = samples as f64;
    let mean = sum / m;
    let var = (sum_sq / m - mean * mean).max(0.0);
    Ok((mean, (var / m).sqrt()))
}

/// `sum_x h^n h^{p(1-s)} Z(|grad u(x) . z|^p |z|^{-n-sp})`.
fn diagonal_correction(u: &Field<f64>, s: f64, p: f64) -> Result<f64> {
    let grid = u.grid();
    let n = grid.dim();
    let h = grid.spacing();
    let grad = exact_gradient(u)?;
    let scale = grid.cell_volume() * h.powf(p * (1.0 - s));
    if n == 1 {
        let z = 2.0 * riemann_zeta(1.0 + s * p - p);
        let sum: f64 = grad.component(0).iter().map(|g| g.abs().powf(p)).sum();
        return Ok(scale * z * sum);
    }
    let (g0, g1) = (grad.component(0), grad.component(1));
    let mut sum = 0.0;
    if p == 2.0 {
        let z = 2.0 * riemann_zeta(s) * dirichlet_beta(s);
        for (a, b) in g0.iter().zip(g1) {
            sum += z * (a * a + b * b);
        }
        return Ok(scale * sum);
    }
    let table = AngularZeta::new(s, p);
    for (a, b) in g0.iter().zip(g1) {
        let m = (a * a + b * b).sqrt();
        if m > 0.0 {
            sum += m.powf(p) * table.at(b.atan2(*a));
        }
    }
    Ok(scale * sum)
}

/// `theta -> Z(|cos(theta) z_0 + sin(theta) z_1|^p |z|^{-2-sp})`, tabulated on
/// `[0, pi/4]` and extended by the symmetries of the square lattice.
struct AngularZeta {
    values: Vec<f64>,
}

impl AngularZeta {
    const NODES: usize = 17;

    fn new(s: f64, p: f64) -> Self {
        let b = 2.0 + s * p;
        let values = (0..Self::NODES)
            .map(|k| {
                let t = std::f64::consts::FRAC_PI_4 * k as f64 / (Self::NODES - 1) as f64;
                let (c, sn) = (t.cos(), t.sin());
                lattice_zeta(2, p - b, &|z| {
                    let r2 = z[0] * z[0] + z[1] * z[1];
                    (c * z[0] + sn * z[1]).abs().powf(p) * r2.powf(-b / 2.0)
                })
            })
            .collect();
        AngularZeta { values }
    }

    fn at(&self, theta: f64) -> f64 {
        let quarter = std::f64::consts::FRAC_PI_2;
        let t = theta.rem_euclid(quarter);
        let t = t.min(quarter - t);
        let x = t / std::f64::consts::FRAC_PI_4 * (Self::NODES - 1) as f64;
        let k = (x.floor() as usize).min(Self::NODES - 2);
        let f = x - k as f64;
        self.values[k] * (1.0 - f) + self.values[k + 1] * f
    }
}

/// `max |u(x) - u(y)| / |x - y|^mu` over node pairs in `region` at distance
/// at least two spacings.
///
/// On the full torus distances are periodic. 1-d grids use every pair; 2-d
/// grids use a deterministic stencil of all offsets up to 8 spacings plus
/// geometric rays in 32 directions.
pub fn holder_seminorm<T: Real>(u: &Field<T>, mu: T, region: &Region) -> Result<T> {
    let mu = mu.as_f64();
    if !(mu > 0.0 && mu < 1.0) {
        return Err(Error::OutOfRange { name: "mu", value: mu, range: "(0, 1)" });
    }
    if !u.is_scalar() {
        return Err(Error::RankMismatch("scalar field required"));
    }
    region.validate(u.grid())?;
    let grid = u.grid().to_f64();
    let h = grid.spacing();
    if region.diameter(&grid) < 4.0 * h {
        return Err(Error::InvalidRegion("region spans fewer than 4 spacings".into()));
    }
    let f: Vec<f64> = u.samples().iter().map(|x| x.as_f64()).collect();
    let inside = region.mask(&grid);
    let np = grid.points_per_axis() as i64;
    let torus = matches!(region, Region::FullTorus);
    let mut best = 0.0f64;
    let mut visit = |x: usize, j: [i64; 2]| {
        let a = grid.axes(x);
        let (t0, t1) = (a[0] as i64 + j[0], a[1] as i64 + j[1]);
        if !torus && (t0 < 0 || t0 >= np || t1 < 0 || t1 >= np) {
            return;
        }
        let y = grid.flat([t0.rem_euclid(np) as usize, t1.rem_euclid(np) as usize]);
        if !inside[y] {
            return;
        }
        let d = ((j[0] * j[0] + j[1] * j[1]) as f64).sqrt() * h;
        best = best.max((f[y] - f[x]).abs() / d.powf(mu));
    };
    let offsets = holder_offsets(grid.dim(), grid.points_per_axis());
    for x in (0..grid.node_count()).filter(|&x| inside[x]) {
        for &j in &offsets {
            visit(x, j);
        }
    }
    Ok(T::lit(best))
}

/// Offsets `j` with `|j| >= 2`, one of each `{j, -j}` pair, within half a
/// period per axis.
fn holder_offsets(dim: usize, np: usize) -> Vec<[i64; 2]> {
    let half = (np / 2) as i64;
    let keep = |j: [i64; 2]| j[0] * j[0] + j[1] * j[1] >= 4 && (j[0] > 0 || (j[0] == 0 && j[1] > 0));
    if dim == 1 {
        return (2..=half).map(|k| [k, 0]).collect();
    }
    let mut out: Vec<[i64; 2]> = Vec::new();
    for j0 in -8..=8i64 {
        for j1 in -8..=8i64 {
            if keep([j0, j1]) {
                out.push([j0, j1]);
            }
        }
    }
    let mut r = 9.0f64;
    while r <= half as f64 {
        for k in 0..32 {
            let t = std::f64::consts::TAU * k as f64 / 32.0;
            let j = [(r * t.cos()).round() as i64, (r * t.sin()).round() as i64];
            if keep(j) && j[0].abs() <= half && j[1].abs() <= half && !out.contains(&j) {
                out.push(j);
            }
        }
        r *= 1.25;
    }
    out
}

/// `||u||_p + ||D^s u||_p` over the torus.
pub fn dsp_norm<T: Real>(u: &Field<T>, s: T, p: T) -> Result<T> {
    check_s(s.as_f64())?;
    check_p(p.as_f64())?;
    let full = Region::FullTorus;
    Ok(lp_norm(u, p, &full)? + lp_norm(&riesz_gradient_spectral(u, s)?, p, &full)?)
}

/// `||u(. + h) - u||_p` over the torus for each shift, in input order.
pub fn translation_modulus<T: Real>(u: &Field<T>, p: T, shifts: &[Vec<T>]) -> Result<Vec<(Vec<T>, T)>> {
    check_p(p.as_f64())?;
    let limit = u.grid().extent() / T::lit(4.0);
    shifts
        .iter()
        .map(|h| {
            let norm = h.iter().map(|&x| x * x).sum::<T>().sqrt();
            if !(norm < limit) {
                return Err(Error::ShiftTooLarge { norm: norm.as_f64(), limit: limit.as_f64() });
            }
            let diff = translate(u, h)?.sub(u)?;
            Ok((h.clone(), lp_norm(&diff, p, &Region::FullTorus)?))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::make_grid;

    fn gaussian(dim: usize, n: usize, sigma: f64) -> Field<f64> {
        let g = make_grid(dim, n, 16.0).unwrap();
        Field::from_fn(g, |x| (-(x[0] * x[0] + x[1] * x[1]) / (2.0 * sigma * sigma)).exp())
    }

    #[test]
    fn constant_fields_have_zero_seminorms() {
        let g = make_grid(1, 64, 16.0).unwrap();
        let c = Field::constant(g, 3.0);
        assert_eq!(gagliardo_seminorm(&c, 0.5, 2.0, NormMethod::FullDoubleSum).unwrap().value, 0.0);
        assert_eq!(holder_seminorm(&c, 0.5, &Region::FullTorus).unwrap(), 0.0);
    }

    #[test]
    fn full_sum_rejected_in_two_dimensions() {
        let u = gaussian(2, 32, 1.0);
        assert!(matches!(gagliardo_seminorm(&u, 0.5, 2.0, NormMethod::FullDoubleSum), Err(Error::MethodMismatch(_))));
    }

    #[test]
    fn monte_carlo_agrees_with_full_sum() {
        let u = gaussian(1, 256, 1.0);
        let full = gagliardo_seminorm(&u, 0.5, 2.0, NormMethod::FullDoubleSum).unwrap();
        let mc = gagliardo_seminorm(&u, 0.5, 2.0, NormMethod::MonteCarlo { samples: 200_000, seed: 3 }).unwrap();
        let err = mc.std_error.unwrap();
        assert!((mc.value - full.value).abs() < 5.0 * err + 1e-12, "{} vs {} +- {}", mc.value, full.value, err);
    }

    #[test]
    fn holder_of_linear_function_is_diameter_power() {
        let g = make_grid(1, 256, 16.0).unwrap();
        let u = Field::from_fn(g, |x| x[0]);
        let region = Region::ball(4.0);
        let v = holder_seminorm(&u, 0.5, &region).unwrap();
        let inside: Vec<f64> = (0..256).filter(|&i| region.contains(&g, i)).map(|i| g.coordinate(i)).collect();
        let span = inside.last().unwrap() - inside[0];
        assert!((v - span.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn translation_limit_is_a_quarter_period() {
        let u = gaussian(1, 64, 1.0);
        assert!(translation_modulus(&u, 2.0, &[vec![4.0]]).is_err());
        assert!(translation_modulus(&u, 2.0, &[vec![3.9]]).is_ok());
    }
}
