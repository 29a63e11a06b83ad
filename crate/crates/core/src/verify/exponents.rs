use serde::{Deserialize, Serialize};

use crate::error::{check_p, check_s, Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    /// `sp < n`
    Subcritical,
    /// `sp = n`
    Critical,
    /// `sp > n`
    Supercritical,
}

/// Exponent bookkeeping for `H^{s,p}(R^n)`. Members that are undefined in
/// the current regime are `None`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Exponents {
    pub n: usize,
    pub s: f64,
    pub p: f64,
    pub regime: Regime,
    /// `np / (n - sp)`
    pub p_star_s: Option<f64>,
    /// `s - n/p`
    pub mu_star_s: Option<f64>,
    /// Classical Sobolev exponent `np / (n - p)` of `W^{1,p}`, for `p < n`.
    pub p_star: Option<f64>,
}

pub fn exponents(n: usize, s: f64, p: f64) -> Result<Exponents> {
    if n != 1 && n != 2 {
        return Err(Error::UnsupportedDimension(n));
    }
    check_s(s)?;
    check_p(p)?;
    let nf = n as f64;
    let sp = s * p;
    let regime = if sp < nf {
        Regime::Subcritical
    } else if sp == nf {
        Regime::Critical
    } else {
        Regime::Supercritical
    };
    Ok(Exponents {
        n,
        s,
        p,
        regime,
        p_star_s: (regime == Regime::Subcritical).then(|| nf * p / (nf - sp)),
        mu_star_s: (regime == Regime::Supercritical).then(|| s - nf / p),
        p_star: (p < nf).then(|| nf * p / (nf - p)),
    })
}

impl Exponents {
    /// `r_s(q)` with `1/r = (1-s)/p + s/q`; `q = inf` is allowed.
    pub fn r_s(&self, q: f64) -> f64 {
        1.0 / ((1.0 - self.s) / self.p + self.s / q)
    }

    /// Weight `alpha` with `1/q = (1-alpha)/p + alpha/p*_s`, i.e.
    /// `n(q-p) / (sqp)`. Subcritical only.
    pub fn alpha(&self, q: f64) -> Option<f64> {
        self.p_star_s?;
        Some(self.n as f64 * (q - self.p) / (self.s * q * self.p))
    }

    /// Weight with `1/q = (1-alpha)(1-s)/p + alpha/p*_s`, used when
    /// `sp < n < p` and `q` lies between `p/(1-s)` and `p*_s`.
    pub fn alpha_upper(&self, q: f64) -> Option<f64> {
        let nf = self.n as f64;
        if self.p_star_s.is_none() || self.p <= nf {
            return None;
        }
        Some(nf * (q * (1.0 - self.s) - self.p) / (self.s * q * (self.p - nf)))
    }

    /// Weight with `1/q = (1-beta)/p + beta/r`, i.e. `r(q-p) / (q(r-p))`.
    pub fn beta(&self, q: f64, r: f64) -> f64 {
        r * (q - self.p) / (q * (r - self.p))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn regimes_from_examples() {
        let e = exponents(2, 0.5, 2.0).unwrap();
        assert_eq!(e.regime, Regime::Subcritical);
        assert_eq!(e.p_star_s, Some(4.0));
        let e = exponents(1, 0.5, 2.0).unwrap();
        assert_eq!(e.regime, Regime::Critical);
        assert_eq!(e.p_star_s, None);
        let e = exponents(1, 0.75, 2.0).unwrap();
        assert_eq!(e.regime, Regime::Supercritical);
        assert!((e.mu_star_s.unwrap() - 0.25).abs() < 1e-15);
    }

    #[test]
    fn r_s_hits_the_fractional_exponent_at_the_classical_one() {
        let e = exponents(2, 0.3, 1.5).unwrap();
        let limit = e.r_s(e.p_star.unwrap());
        assert!((limit - e.p_star_s.unwrap()).abs() < 1e-12 * limit);
        assert!((e.r_s(e.p) - e.p).abs() < 1e-12);
    }

    #[test]
    fn alpha_reproduces_the_interpolation_identity() {
        let e = exponents(2, 0.5, 3.0).unwrap();
        let q = 8.0;
        let a = e.alpha_upper(q).unwrap();
        let lhs = 1.0 / q;
        let rhs = (1.0 - a) * (1.0 - e.s) / e.p + a / e.p_star_s.unwrap();
        assert!((lhs - rhs).abs() < 1e-14);
    }
}
