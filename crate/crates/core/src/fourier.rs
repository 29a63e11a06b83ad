use std::sync::Arc;

use num_complex::Complex;
use rustfft::{Fft, FftPlanner};

use crate::grid::GridSpec;
use crate::scalar::Real;

/// Reusable forward/inverse transform pair for one grid.
///
/// The forward transform is unnormalized; the inverse carries the `1/N^dim`
/// factor. Mode `k` along an axis has frequency `m/L` with `m = k` for
/// `k < N/2` and `m = k - N` otherwise, so index `N/2` is the Nyquist mode.
#[derive(Clone)]
pub struct FourierPlan<T: Real> {
    grid: GridSpec<T>,
    forward: Arc<dyn Fft<T>>,
    inverse: Arc<dyn Fft<T>>,
}

impl<T: Real> FourierPlan<T> {
    pub fn new(grid: &GridSpec<T>) -> Self {
        let mut planner = FftPlanner::new();
        let n = grid.points_per_axis();
        FourierPlan { grid: *grid, forward: planner.plan_fft_forward(n), inverse: planner.plan_fft_inverse(n) }
    }

    pub fn grid(&self) -> &GridSpec<T> {
        &self.grid
    }

    pub fn forward(&self, samples: &[T]) -> Vec<Complex<T>> {
        let mut buf: Vec<Complex<T>> = samples.iter().map(|&x| Complex::new(x, T::zero())).collect();
        self.transform(&mut buf, &self.forward);
        buf
    }

    /// Inverse transform returning the real part and the L2 norm of the
    /// discarded imaginary part.
    pub fn inverse(&self, mut spectrum: Vec<Complex<T>>) -> (Vec<T>, T) {
        self.transform(&mut spectrum, &self.inverse);
        let scale = T::one() / T::from_usize_lossy(self.grid.node_count());
        let mut imag = T::zero();
        let real = spectrum
            .iter()
            .map(|c| {
                imag = imag + c.im * c.im;
                c.re * scale
            })
            .collect();
        (real, imag.sqrt() * scale)
    }

    fn transform(&self, buf: &mut [Complex<T>], fft: &Arc<dyn Fft<T>>) {
        let n = self.grid.points_per_axis();
        let mut scratch = vec![Complex::new(T::zero(), T::zero()); fft.get_inplace_scratch_len()];
        fft.process_with_scratch(buf, &mut scratch);
        if self.grid.dim() == 2 {
            let mut column = vec![Complex::new(T::zero(), T::zero()); n];
            for c in 0..n {
                for r in 0..n {
                    column[r] = buf[r * n + c];
                }
                fft.process_with_scratch(&mut column, &mut scratch);
                for r in 0..n {
                    buf[r * n + c] = column[r];
                }
            }
        }
    }
}

/// Frequency data of one Fourier mode.
#[derive(Clone, Copy, Debug)]
pub struct Mode<T> {
    /// Frequency vector `m / L` (unused axes 0).
    pub xi: [T; 2],
    /// Whether the mode index along each axis is the Nyquist index.
    pub nyquist: [bool; 2],
}

impl<T: Real> Mode<T> {
    pub fn norm(&self) -> T {
        (self.xi[0] * self.xi[0] + self.xi[1] * self.xi[1]).sqrt()
    }

    /// `|2 pi xi|`.
    pub fn angular_norm(&self) -> T {
        T::TAU() * self.norm()
    }

    pub fn is_zero(&self) -> bool {
        self.xi[0] == T::zero() && self.xi[1] == T::zero()
    }
}

/// Signed frequency index of axis index `k`.
pub fn signed_index(n: usize, k: usize) -> i64 {
    if k < n / 2 {
        k as i64
    } else {
        k as i64 - n as i64
    }
}

/// All modes of a grid in storage order.
pub fn modes<T: Real>(grid: &GridSpec<T>) -> Vec<Mode<T>> {
    let n = grid.points_per_axis();
    let inv_l = T::one() / grid.extent();
    let axis = |k: usize| (T::from_i64(signed_index(n, k)).unwrap() * inv_l, k == n / 2);
    (0..grid.node_count())
        .map(|flat| {
            let a = grid.axes(flat);
            let (x0, n0) = axis(a[0]);
            if grid.dim() == 1 {
                Mode { xi: [x0, T::zero()], nyquist: [n0, false] }
            } else {
                let (x1, n1) = axis(a[1]);
                Mode { xi: [x0, x1], nyquist: [n0, n1] }
            }
        })
        .collect()
}
