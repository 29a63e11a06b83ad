use super::special::gamma;
use crate::error::{check_s, Error, Result};
use crate::scalar::Real;

/// Normalization constants of the Riesz fractional gradient and of the
/// reconstruction kernel.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GammaConstants<T> {
    /// `c_{n,s}`.
    pub c_ns: T,
    /// `gamma_{1+s}`; only defined for `n = 2` (its Gamma argument
    /// `(n-1-s)/2` is negative when `n = 1`).
    pub gamma_1ps: Option<T>,
    /// `c_{n,-s}`.
    pub c_n_minus_s: T,
}

/// `c_{n,s} = 2 Gamma((n+s+1)/2) / (pi^{n/2} 2^{1-s} Gamma((1-s)/2))`, valid for
/// `|s| < 1`.
pub(crate) fn c_signed(n: usize, s: f64) -> Result<f64> {
    let n = n as f64;
    let pi = std::f64::consts::PI;
    Ok(2.0 * gamma((n + s + 1.0) / 2.0)? / (pi.powf(n / 2.0) * 2f64.powf(1.0 - s) * gamma((1.0 - s) / 2.0)?))
}

pub fn constants<T: Real>(n: usize, s: T) -> Result<GammaConstants<T>> {
    if n != 1 && n != 2 {
        return Err(Error::UnsupportedDimension(n));
    }
    let s = s.as_f64();
    check_s(s)?;
    let pi = std::f64::consts::PI;
    let gamma_1ps = if n == 2 {
        let nf = n as f64;
        let arg = (nf - 1.0 - s) / 2.0;
        Some(T::lit(pi.powf(nf / 2.0) * 2f64.powf(1.0 + s) * gamma((1.0 + s) / 2.0)? / gamma(arg)?))
    } else {
        None
    };
    Ok(GammaConstants { c_ns: T::lit(c_signed(n, s)?), gamma_1ps, c_n_minus_s: T::lit(c_signed(n, -s)?) })
}
