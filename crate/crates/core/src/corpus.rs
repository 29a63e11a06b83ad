use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::field::Field;
use crate::grid::GridSpec;
use crate::scalar::Real;

/// Parametric test-function families. Lengths are physical units.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Family {
    /// `exp(-|x|^2 / (2 sigma^2))`.
    Gaussian { sigma: f64 },
    /// `exp(k - k / (1 - |x|^2/R^2))` inside the ball of radius `R`, peak 1.
    Bump { radius: f64, smoothness: f64 },
    /// `eta(|x|/cutoff) * max(|x|, h/2)^(-a)` with a smooth cutoff `eta`.
    PowerTail { exponent: f64, cutoff: f64 },
    /// `cos(2 pi k x_0) exp(-|x|^2 / (2 sigma^2))`.
    Oscillatory { frequency: f64, sigma: f64 },
    /// Random trigonometric polynomial with mode indices `|m|_inf <= band`,
    /// normalized to unit peak.
    RandomBandlimited { seed: u64, band: usize },
}

#[derive(Clone, Debug)]
pub struct CorpusEntry<T> {
    pub label: String,
    pub family: Family,
    pub field: Field<T>,
}

impl Family {
    pub fn sample<T: Real>(&self, grid: &GridSpec<T>) -> Field<T> {
        let r2 = |x: [T; 2]| (x[0] * x[0] + x[1] * x[1]).as_f64();
        match *self {
            Family::Gaussian { sigma } => Field::from_fn(*grid, |x| T::lit((-r2(x) / (2.0 * sigma * sigma)).exp())),
            Family::Bump { radius, smoothness } => Field::from_fn(*grid, |x| {
                let t = r2(x) / (radius * radius);
                if t < 1.0 {
                    T::lit((smoothness - smoothness / (1.0 - t)).exp())
                } else {
                    T::zero()
                }
            }),
            Family::PowerTail { exponent, cutoff } => {
                let floor = grid.spacing().as_f64() / 2.0;
                Field::from_fn(*grid, |x| {
                    let r = r2(x).sqrt();
                    T::lit(smooth_cutoff(r / cutoff) * r.max(floor).powf(-exponent))
                })
            }
            Family::Oscillatory { frequency, sigma } => Field::from_fn(*grid, |x| {
                let x0 = x[0].as_f64();
                T::lit((std::f64::consts::TAU * frequency * x0).cos() * (-r2(x) / (2.0 * sigma * sigma)).exp())
            }),
            Family::RandomBandlimited { seed, band } => random_bandlimited(grid, seed, band),
        }
    }

    /// Infinitely differentiable members.
    pub fn is_smooth(&self) -> bool {
        !matches!(self, Family::PowerTail { .. })
    }

    /// Whether the continuum function has finite `D^s`-norm in `L^p(R^n)`.
    pub fn admissible(&self, n: usize, s: f64, p: f64) -> bool {
        match *self {
            Family::PowerTail { exponent, .. } => (exponent + s) * p < n as f64,
            _ => true,
        }
    }

    pub fn is_compactly_supported(&self) -> bool {
        !matches!(self, Family::RandomBandlimited { .. })
    }
}

/// `1` on `[0, 1/2]`, `0` on `[1, inf)`, infinitely smooth in between.
pub(crate) fn smooth_cutoff(t: f64) -> f64 {
    if t <= 0.5 {
        1.0
    } else if t >= 1.0 {
        0.0
    } else {
        let u = 2.0 * t - 1.0;
        let a = (-1.0 / (1.0 - u)).exp();
        let b = (-1.0 / u).exp();
        a / (a + b)
    }
}

fn random_bandlimited<T: Real>(grid: &GridSpec<T>, seed: u64, band: usize) -> Field<T> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let b = band as i64;
    let mut terms = Vec::new();
    let second = if grid.dim() == 2 { -b..=b } else { 0..=0 };
    for m0 in -b..=b {
        for m1 in second.clone() {
            if m0 > 0 || (m0 == 0 && m1 > 0) {
                let a: f64 = rng.gen_range(-1.0..1.0);
                let c: f64 = rng.gen_range(-1.0..1.0);
                terms.push(([m0 as f64, m1 as f64], a, c));
            }
        }
    }
    let l = grid.extent().as_f64();
    let raw: Vec<f64> = (0..grid.node_count())
        .map(|i| {
            let x = grid.position(i);
            let x = [x[0].as_f64(), x[1].as_f64()];
            terms
                .iter()
                .map(|(m, a, c)| {
                    let theta = std::f64::consts::TAU * (m[0] * x[0] + m[1] * x[1]) / l;
                    a * theta.cos() + c * theta.sin()
                })
                .sum()
        })
        .collect();
    let peak = raw.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let scale = if peak > 0.0 { 1.0 / peak } else { 0.0 };
    Field::from_parts(*grid, crate::field::Rank::Scalar, raw.into_iter().map(|x| T::lit(x * scale)).collect())
}

/// Default families for a grid, with lengths scaled to the period.
pub fn default_families(extent: f64, seed: u64) -> Vec<(String, Family)> {
    let u = extent / 16.0;
    vec![
        ("gaussian".into(), Family::Gaussian { sigma: 0.5 * u }),
        ("gaussian_narrow".into(), Family::Gaussian { sigma: 0.35 * u }),
        ("bump".into(), Family::Bump { radius: 3.5 * u, smoothness: 1.0 }),
        ("bump_steep".into(), Family::Bump { radius: 2.0 * u, smoothness: 3.0 }),
        ("power_tail".into(), Family::PowerTail { exponent: 0.25, cutoff: 2.0 * u }),
        ("oscillatory".into(), Family::Oscillatory { frequency: 1.0 / u, sigma: 0.5 * u }),
        ("oscillatory_fast".into(), Family::Oscillatory { frequency: 1.5 / u, sigma: 0.5 * u }),
        ("random_bandlimited".into(), Family::RandomBandlimited { seed, band: 6 }),
    ]
}

/// The default eight-entry corpus, one or more per family.
pub fn sample_corpus<T: Real>(grid: &GridSpec<T>, seed: u64) -> Vec<CorpusEntry<T>> {
    default_families(grid.extent().as_f64(), seed)
        .into_iter()
        .map(|(label, family)| {
            let field = family.sample(grid);
            debug_assert!(!family.is_compactly_supported() || support_fits(&field), "{label} escapes the support box");
            CorpusEntry { label, family, field }
        })
        .collect()
}

/// Whether every sample above `1e-12` of the peak lies in the centered box
/// of half-width `extent / 4`.
pub fn support_fits<T: Real>(u: &Field<T>) -> bool {
    let g = u.grid();
    let mag = u.magnitude();
    let peak = mag.iter().copied().fold(T::zero(), T::max);
    let half = g.extent() / T::lit(4.0);
    mag.iter().enumerate().all(|(i, &m)| {
        if m <= peak * T::lit(1e-12) {
            return true;
        }
        let x = g.position(i);
        x[..g.dim()].iter().all(|c| c.abs() <= half)
    })
}

/// Entries whose family is smooth.
pub fn smooth_entries<T: Real>(corpus: &[CorpusEntry<T>]) -> Vec<&CorpusEntry<T>> {
    corpus.iter().filter(|e| e.family.is_smooth()).collect()
}
