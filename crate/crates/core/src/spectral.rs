//! Fourier-multiplier operators on periodic grids.
//!
//! Odd symbols use the factor `i xi_j`; along an axis at its Nyquist index
//! that factor is replaced by `|xi_j|`, which keeps every symbol conjugate
//! symmetric (real output) while preserving the exact identities
//! `sum_j K_j G_j = 1` and `div^s = -(D^s)^*`.

use num_complex::Complex;

use crate::error::{check_p, check_s, Error, Result};
use crate::field::{lp_norm, Field, Rank};
use crate::fourier::{modes, FourierPlan, Mode};
use crate::grid::Region;
use crate::scalar::Real;

#[derive(Clone, Debug, PartialEq)]
pub enum Multiplier<T> {
    /// `(1 + 4 pi^2 |xi|^2)^{-s/2}`, any real `s`.
    Bessel(T),
    /// `(1 + 4 pi^2 |xi|^2)^{s/2}`.
    InverseBessel(T),
    /// `2 pi i xi_j |2 pi xi|^{s-1}`, scalar to vector.
    RieszGradient(T),
    /// Negative adjoint of the Riesz gradient, vector to scalar.
    RieszDivergence(T),
    /// `-i xi_j / |xi| |2 pi xi|^{-s}`, vector to scalar.
    FtcKernel(T),
    /// `|2 pi xi|^{-sigma}`.
    RieszPotential(T),
    /// `2 pi i xi_j`, scalar to vector.
    ExactGradient,
    /// Scalar symbol table in storage order.
    Custom(Vec<Complex<T>>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Shape {
    ScalarToScalar,
    ScalarToVector,
    VectorToScalar,
}

fn odd_factor<T: Real>(m: &Mode<T>, j: usize) -> Complex<T> {
    if m.nyquist[j] {
        Complex::new(m.xi[j].abs(), T::zero())
    } else {
        Complex::new(T::zero(), m.xi[j])
    }
}

impl<T: Real> Multiplier<T> {
    pub fn shape(&self) -> Shape {
        match self {
            Multiplier::Bessel(_) | Multiplier::InverseBessel(_) | Multiplier::RieszPotential(_) | Multiplier::Custom(_) => {
                Shape::ScalarToScalar
            }
            Multiplier::RieszGradient(_) | Multiplier::ExactGradient => Shape::ScalarToVector,
            Multiplier::RieszDivergence(_) | Multiplier::FtcKernel(_) => Shape::VectorToScalar,
        }
    }

    /// Value assigned at `xi = 0` (per component for vector symbols).
    pub fn zero_mode_value(&self) -> Complex<T> {
        match self {
            Multiplier::Bessel(_) | Multiplier::InverseBessel(_) => Complex::new(T::one(), T::zero()),
            Multiplier::Custom(t) => t.first().copied().unwrap_or_default(),
            _ => Complex::new(T::zero(), T::zero()),
        }
    }

    /// Symbol at one mode; scalar symbols use component 0 only.
    pub fn symbol(&self, m: &Mode<T>, flat: usize, dim: usize) -> [Complex<T>; 2] {
        let zero = Complex::new(T::zero(), T::zero());
        let real = |x: T| Complex::new(x, T::zero());
        if m.is_zero() {
            let z = self.zero_mode_value();
            return match self.shape() {
                Shape::ScalarToScalar => [z, zero],
                _ => [z, if dim == 2 { z } else { zero }],
            };
        }
        let w = m.angular_norm();
        let bessel = |e: T| real((T::one() + w * w).powf(e / T::lit(2.0)));
        let per_axis = |f: &dyn Fn(usize) -> Complex<T>| [f(0), if dim == 2 { f(1) } else { zero }];
        match self {
            Multiplier::Bessel(s) => [bessel(-*s), zero],
            Multiplier::InverseBessel(s) => [bessel(*s), zero],
            Multiplier::RieszPotential(sigma) => [real(w.powf(-*sigma)), zero],
            Multiplier::RieszGradient(s) => {
                let amp = T::TAU() * w.powf(*s - T::one());
                per_axis(&|j| odd_factor(m, j) * amp)
            }
            Multiplier::RieszDivergence(s) => {
                let amp = T::TAU() * w.powf(*s - T::one());
                per_axis(&|j| -(odd_factor(m, j) * amp).conj())
            }
            Multiplier::FtcKernel(s) => {
                let amp = w.powf(-*s) / m.norm();
                per_axis(&|j| odd_factor(m, j).conj() * amp)
            }
            Multiplier::ExactGradient => per_axis(&|j| odd_factor(m, j) * T::TAU()),
            Multiplier::Custom(t) => [t[flat], zero],
        }
    }
}

/// Applies a multiplier diagonally in frequency space.
pub fn apply_multiplier<T: Real>(u: &Field<T>, m: &Multiplier<T>) -> Result<Field<T>> {
    let g = *u.grid();
    let shape = m.shape();
    match (shape, u.rank()) {
        (Shape::ScalarToScalar | Shape::ScalarToVector, Rank::Scalar) | (Shape::VectorToScalar, Rank::Vector) => {}
        _ => return Err(Error::RankMismatch("field rank does not match multiplier input")),
    }
    if let Multiplier::Custom(t) = m {
        if t.len() != g.node_count() {
            return Err(Error::SampleCount { expected: g.node_count(), got: t.len() });
        }
    }
    let plan = FourierPlan::new(&g);
    let modes = modes(&g);
    let dim = g.dim();
    let inputs: Vec<Vec<Complex<T>>> = (0..u.component_count()).map(|c| plan.forward(u.component(c))).collect();
    let out_components = if shape == Shape::ScalarToVector { dim } else { 1 };
    let mut spectra = vec![vec![Complex::new(T::zero(), T::zero()); g.node_count()]; out_components];
    for (k, mode) in modes.iter().enumerate() {
        let sym = m.symbol(mode, k, dim);
        match shape {
            Shape::ScalarToScalar => spectra[0][k] = sym[0] * inputs[0][k],
            Shape::ScalarToVector => {
                for (j, spec) in spectra.iter_mut().enumerate() {
                    spec[k] = sym[j] * inputs[0][k];
                }
            }
            Shape::VectorToScalar => {
                spectra[0][k] = (0..dim).fold(Complex::new(T::zero(), T::zero()), |acc, j| acc + sym[j] * inputs[j][k]);
            }
        }
    }
    let mut samples = Vec::with_capacity(out_components * g.node_count());
    let mut residue = T::zero();
    for spec in spectra {
        let (real, imag) = plan.inverse(spec);
        residue = residue + imag * imag;
        samples.extend(real);
    }
    let residue = residue.sqrt();
    let scale = l2(u.samples()) + l2(&samples);
    let tolerance = T::noise_floor() * scale;
    if residue > tolerance && residue > T::min_positive_value() {
        return Err(Error::ImaginaryResidue { residue: residue.as_f64(), tolerance: tolerance.as_f64() });
    }
    let rank = if shape == Shape::ScalarToVector { Rank::Vector } else { Rank::Scalar };
    Field::new(g, rank, samples)
}

fn l2<T: Real>(x: &[T]) -> T {
    x.iter().map(|&v| v * v).sum::<T>().sqrt()
}

fn scalar_only<T: Real>(u: &Field<T>) -> Result<()> {
    if u.is_scalar() {
        Ok(())
    } else {
        Err(Error::RankMismatch("scalar field required"))
    }
}

fn vector_only<T: Real>(u: &Field<T>) -> Result<()> {
    if u.is_scalar() {
        Err(Error::RankMismatch("vector field required"))
    } else {
        Ok(())
    }
}

/// `Lambda_s u`.
pub fn bessel_potential<T: Real>(u: &Field<T>, s: T) -> Result<Field<T>> {
    scalar_only(u)?;
    if !s.is_finite() {
        return Err(Error::OutOfRange { name: "s", value: s.as_f64(), range: "finite reals" });
    }
    apply_multiplier(u, &Multiplier::Bessel(s))
}

/// `||Lambda_{-s} u||_p` over the torus.
pub fn bessel_norm<T: Real>(u: &Field<T>, s: T, p: T) -> Result<T> {
    check_s(s.as_f64())?;
    check_p(p.as_f64())?;
    lp_norm(&bessel_potential(u, -s)?, p, &Region::FullTorus)
}

/// Riesz fractional gradient `D^s u`.
pub fn riesz_gradient_spectral<T: Real>(u: &Field<T>, s: T) -> Result<Field<T>> {
    check_s(s.as_f64())?;
    scalar_only(u)?;
    apply_multiplier(u, &Multiplier::RieszGradient(s))
}

/// Fractional divergence `div^s psi`, the negative adjoint of `D^s`.
pub fn riesz_divergence_spectral<T: Real>(psi: &Field<T>, s: T) -> Result<Field<T>> {
    check_s(s.as_f64())?;
    vector_only(psi)?;
    apply_multiplier(psi, &Multiplier::RieszDivergence(s))
}

/// Reconstruction kernel of the fractional fundamental theorem of calculus.
pub fn ftc_kernel_apply<T: Real>(g: &Field<T>, s: T) -> Result<Field<T>> {
    check_s(s.as_f64())?;
    vector_only(g)?;
    apply_multiplier(g, &Multiplier::FtcKernel(s))
}

/// Riesz potential `I_sigma u` with symbol `|2 pi xi|^{-sigma}`.
pub fn riesz_potential<T: Real>(u: &Field<T>, sigma: T) -> Result<Field<T>> {
    scalar_only(u)?;
    apply_multiplier(u, &Multiplier::RieszPotential(sigma))
}

/// Spectrally exact gradient.
pub fn exact_gradient<T: Real>(u: &Field<T>) -> Result<Field<T>> {
    scalar_only(u)?;
    apply_multiplier(u, &Multiplier::ExactGradient)
}

/// Per-mode energies `|u_hat|^2 h^n / N^n`, summing to `||u||_2^2`.
pub fn power_spectrum<T: Real>(u: &Field<T>) -> Result<(Vec<Mode<T>>, Vec<T>)> {
    scalar_only(u)?;
    let g = u.grid();
    let plan = FourierPlan::new(g);
    let scale = g.cell_volume() / T::from_usize_lossy(g.node_count());
    let energy = plan.forward(u.samples()).iter().map(|c| c.norm_sqr() * scale).collect();
    Ok((modes(g), energy))
}

/// `(sum_xi weight(xi) |u_hat|^2 h^n / N^n)^{1/2}`.
pub fn weighted_spectral_norm<T: Real>(u: &Field<T>, weight: impl Fn(&Mode<T>) -> T) -> Result<T> {
    let (modes, energy) = power_spectrum(u)?;
    Ok(modes.iter().zip(&energy).map(|(m, &e)| weight(m) * e).sum::<T>().sqrt())
}

/// Frequency-side seminorm `(sum |2 pi xi|^{2s} |u_hat|^2)^{1/2}`.
pub fn frequency_seminorm<T: Real>(u: &Field<T>, s: T) -> Result<T> {
    weighted_spectral_norm(u, |m| if m.is_zero() { T::zero() } else { m.angular_norm().powf(T::lit(2.0) * s) })
}
