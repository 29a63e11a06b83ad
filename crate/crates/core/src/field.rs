use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{check_p, Error, Result};
use crate::fourier::{modes, FourierPlan};
use crate::grid::{GridSpec, Region};
use crate::scalar::Real;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Rank {
    Scalar,
    /// One component per grid dimension.
    Vector,
}

/// Samples of a scalar or vector function on a grid.
///
/// Vector fields are stored component-major: all samples of component 0,
/// then component 1.
#[derive(Clone, Debug, PartialEq)]
pub struct Field<T> {
    grid: GridSpec<T>,
    rank: Rank,
    samples: Vec<T>,
    mean_removed: bool,
}

impl<T: Real> Field<T> {
    pub fn new(grid: GridSpec<T>, rank: Rank, samples: Vec<T>) -> Result<Self> {
        let expected = grid.node_count() * rank_width(&grid, rank);
        if samples.len() != expected {
            return Err(Error::SampleCount { expected, got: samples.len() });
        }
        if let Some(i) = samples.iter().position(|x| !x.is_finite()) {
            return Err(Error::NonFinite(i));
        }
        Ok(Field { grid, rank, samples, mean_removed: false })
    }

    pub fn zeros(grid: GridSpec<T>, rank: Rank) -> Self {
        let len = grid.node_count() * rank_width(&grid, rank);
        Field { grid, rank, samples: vec![T::zero(); len], mean_removed: false }
    }

    pub fn constant(grid: GridSpec<T>, value: T) -> Self {
        Field { grid, rank: Rank::Scalar, samples: vec![value; grid.node_count()], mean_removed: false }
    }

    /// Scalar field sampled from a function of position.
    pub fn from_fn(grid: GridSpec<T>, f: impl Fn([T; 2]) -> T) -> Self {
        let samples = (0..grid.node_count()).map(|i| f(grid.position(i))).collect();
        Field { grid, rank: Rank::Scalar, samples, mean_removed: false }
    }

    /// Vector field from per-component sample vectors.
    pub fn from_components(grid: GridSpec<T>, components: Vec<Vec<T>>) -> Result<Self> {
        if components.len() != grid.dim() {
            return Err(Error::RankMismatch("vector field needs one component per dimension"));
        }
        Field::new(grid, Rank::Vector, components.concat())
    }

    pub(crate) fn from_parts(grid: GridSpec<T>, rank: Rank, samples: Vec<T>) -> Self {
        debug_assert_eq!(samples.len(), grid.node_count() * rank_width(&grid, rank));
        Field { grid, rank, samples, mean_removed: false }
    }

    pub fn grid(&self) -> &GridSpec<T> {
        &self.grid
    }

    pub fn rank(&self) -> Rank {
        self.rank
    }

    pub fn samples(&self) -> &[T] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<T> {
        self.samples
    }

    pub fn mean_removed(&self) -> bool {
        self.mean_removed
    }

    pub fn is_scalar(&self) -> bool {
        self.rank == Rank::Scalar
    }

    pub fn component_count(&self) -> usize {
        rank_width(&self.grid, self.rank)
    }

    pub fn component(&self, c: usize) -> &[T] {
        let n = self.grid.node_count();
        &self.samples[c * n..(c + 1) * n]
    }

    /// Scalar field holding component `c`.
    pub fn component_field(&self, c: usize) -> Field<T> {
        Field::from_parts(self.grid, Rank::Scalar, self.component(c).to_vec())
    }

    pub fn map(&self, f: impl Fn(T) -> T) -> Result<Field<T>> {
        Field::new(self.grid, self.rank, self.samples.iter().map(|&x| f(x)).collect())
    }

    pub fn scale(&self, c: T) -> Field<T> {
        let mut out = Field::from_parts(self.grid, self.rank, self.samples.iter().map(|&x| x * c).collect());
        out.mean_removed = self.mean_removed;
        out
    }

    fn zip(&self, other: &Field<T>, f: impl Fn(T, T) -> T) -> Result<Field<T>> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch);
        }
        if self.rank != other.rank {
            return Err(Error::RankMismatch("operands must have the same rank"));
        }
        let samples = self.samples.iter().zip(&other.samples).map(|(&a, &b)| f(a, b)).collect();
        Field::new(self.grid, self.rank, samples)
    }

    pub fn add(&self, other: &Field<T>) -> Result<Field<T>> {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Field<T>) -> Result<Field<T>> {
        self.zip(other, |a, b| a - b)
    }

    /// Mean of each component over the period.
    pub fn mean(&self) -> Vec<T> {
        let n = T::from_usize_lossy(self.grid.node_count());
        (0..self.component_count()).map(|c| self.component(c).iter().copied().sum::<T>() / n).collect()
    }

    pub fn without_mean(&self) -> Field<T> {
        let means = self.mean();
        let n = self.grid.node_count();
        let samples = self.samples.iter().enumerate().map(|(i, &x)| x - means[i / n]).collect();
        let mut out = Field::from_parts(self.grid, self.rank, samples);
        out.mean_removed = true;
        out
    }

    /// Discrete L2 inner product `sum u.v h^n`.
    pub fn inner(&self, other: &Field<T>) -> Result<T> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch);
        }
        if self.rank != other.rank {
            return Err(Error::RankMismatch("inner product needs equal ranks"));
        }
        let s: T = self.samples.iter().zip(&other.samples).map(|(&a, &b)| a * b).sum();
        Ok(s * self.grid.cell_volume())
    }

    pub fn max_abs(&self) -> T {
        self.magnitude().into_iter().fold(T::zero(), T::max)
    }

    /// Pointwise Euclidean magnitude.
    pub fn magnitude(&self) -> Vec<T> {
        match self.rank {
            Rank::Scalar => self.samples.iter().map(|x| x.abs()).collect(),
            Rank::Vector => {
                let n = self.grid.node_count();
                (0..n)
                    .map(|i| {
                        (0..self.component_count())
                            .map(|c| self.samples[c * n + i] * self.samples[c * n + i])
                            .sum::<T>()
                            .sqrt()
                    })
                    .collect()
            }
        }
    }
}

fn rank_width<T: Real>(grid: &GridSpec<T>, rank: Rank) -> usize {
    match rank {
        Rank::Scalar => 1,
        Rank::Vector => grid.dim(),
    }
}

/// `(sum_{x in region} |u(x)|^p h^n)^{1/p}`.
pub fn lp_norm<T: Real>(u: &Field<T>, p: T, region: &Region) -> Result<T> {
    check_p(p.as_f64())?;
    region.validate(u.grid())?;
    let g = u.grid();
    let mag = u.magnitude();
    let peak = mag.iter().copied().fold(T::zero(), T::max);
    if peak == T::zero() {
        return Ok(T::zero());
    }
    let full = matches!(region, Region::FullTorus);
    let mut acc = T::zero();
    for (i, &m) in mag.iter().enumerate() {
        if full || region.contains(g, i) {
            acc = acc + (m / peak).powf(p);
        }
    }
    Ok(peak * (acc * g.cell_volume()).powf(T::one() / p))
}

/// `u(. + h)` on the torus.
///
/// Shifts that are whole multiples of the spacing along every axis are exact
/// cyclic permutations; other shifts use the spectral phase `e^{2 pi i xi.h}`.
pub fn translate<T: Real>(u: &Field<T>, h: &[T]) -> Result<Field<T>> {
    let g = *u.grid();
    if h.len() != g.dim() {
        return Err(Error::Precondition(format!("shift has {} components, grid has dimension {}", h.len(), g.dim())));
    }
    let norm = h.iter().map(|&x| x * x).sum::<T>().sqrt();
    let limit = g.extent() / T::lit(2.0);
    if !(norm < limit) {
        return Err(Error::ShiftTooLarge { norm: norm.as_f64(), limit: limit.as_f64() });
    }
    let spacing = g.spacing();
    let lattice: Option<Vec<i64>> = h
        .iter()
        .map(|&x| {
            let k = (x / spacing).round();
            (k * spacing == x).then(|| k.to_i64().unwrap())
        })
        .collect();
    let mut out = match lattice {
        Some(k) => lattice_shift(u, &k),
        None => spectral_shift(u, h)?,
    };
    out.mean_removed = u.mean_removed;
    Ok(out)
}

fn lattice_shift<T: Real>(u: &Field<T>, k: &[i64]) -> Field<T> {
    let g = u.grid();
    let n = g.points_per_axis() as i64;
    let nodes = g.node_count();
    let wrap = |i: usize, d: i64| ((i as i64 + d).rem_euclid(n)) as usize;
    let mut samples = vec![T::zero(); u.samples.len()];
    for c in 0..u.component_count() {
        let src = u.component(c);
        let dst = &mut samples[c * nodes..(c + 1) * nodes];
        for (flat, d) in dst.iter_mut().enumerate() {
            let a = g.axes(flat);
            let from = if g.dim() == 1 { [wrap(a[0], k[0]), 0] } else { [wrap(a[0], k[0]), wrap(a[1], k[1])] };
            *d = src[g.flat(from)];
        }
    }
    Field::from_parts(*g, u.rank, samples)
}

fn spectral_shift<T: Real>(u: &Field<T>, h: &[T]) -> Result<Field<T>> {
    let g = u.grid();
    let plan = FourierPlan::new(g);
    let phases: Vec<Complex<T>> = modes(g)
        .iter()
        .map(|m| {
            let mut z = Complex::new(T::one(), T::zero());
            for (a, &ha) in h.iter().enumerate() {
                let theta = T::TAU() * m.xi[a] * ha;
                z = z * if m.nyquist[a] { Complex::new(theta.cos(), T::zero()) } else { Complex::from_polar(T::one(), theta) };
            }
            z
        })
        .collect();
    let mut samples = Vec::with_capacity(u.samples.len());
    for c in 0..u.component_count() {
        let mut spec = plan.forward(u.component(c));
        for (s, z) in spec.iter_mut().zip(&phases) {
            *s = *s * z;
        }
        let (real, _) = plan.inverse(spec);
        samples.extend(real);
    }
    Field::new(*g, u.rank, samples)
}
