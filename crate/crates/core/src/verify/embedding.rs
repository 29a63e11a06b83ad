//! Embedding inequalities, norm equivalences at `p = 2`, K-functional
//! invariants and log-convexity of Lebesgue norms.

use serde::{Deserialize, Serialize};
use serde_json::json;

use super::exponents::exponents;
use super::report::{Bound, CheckReport, PassRule};
use super::{default_region, params, CorpusSource};
use crate::corpus::{smooth_entries, CorpusEntry, Family};
use crate::direct::gamma_fn;
use crate::error::{Error, Result};
use crate::field::{lp_norm, Field};
use crate::grid::Region;
use crate::interp::{default_t_grid, k_curve, KCurve, KMethod};
use crate::norms::{dsp_norm, gagliardo_seminorm, holder_seminorm, NormMethod};
use crate::spectral::{bessel_norm, exact_gradient, frequency_seminorm};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "target", rename_all = "snake_case")]
pub enum EmbeddingTarget {
    Lebesgue { q: f64 },
    Holder { mu: f64 },
}

fn validate_target(n: usize, s: f64, p: f64, target: EmbeddingTarget) -> Result<()> {
    let e = exponents(n, s, p)?;
    match target {
        EmbeddingTarget::Lebesgue { q } => {
            if !(q >= p && q.is_finite()) {
                return Err(Error::OutOfRange { name: "q", value: q, range: "[p, inf)" });
            }
            if let Some(ps) = e.p_star_s {
                if q >= ps {
                    return Err(Error::Precondition(format!("q = {q} is not below p*_s = {ps}")));
                }
            }
        }
        EmbeddingTarget::Holder { mu } => {
            let Some(ms) = e.mu_star_s else {
                return Err(Error::Precondition(format!("Hölder target needs sp > n (regime {:?})", e.regime)));
            };
            if !(mu > 0.0 && mu < ms) {
                return Err(Error::Precondition(format!("mu = {mu} is not in (0, mu*_s = {ms})")));
            }
        }
    }
    Ok(())
}

fn embedding_ratio(u: &Field<f64>, s: f64, p: f64, target: EmbeddingTarget, region: &Region) -> Result<f64> {
    let d = dsp_norm(u, s, p)?;
    if d == 0.0 {
        return Ok(0.0);
    }
    let top = match target {
        EmbeddingTarget::Lebesgue { q } => lp_norm(u, q, region)?,
        EmbeddingTarget::Holder { mu } => holder_seminorm(u, mu, region)?,
    };
    Ok(top / d)
}

fn max_ratio(entries: &[CorpusEntry<f64>], s: f64, p: f64, target: EmbeddingTarget) -> Result<Vec<(String, f64)>> {
    entries
        .iter()
        .map(|e| Ok((e.label.clone(), embedding_ratio(&e.field, s, p, target, &default_region(e.field.grid()))?)))
        .collect()
}

/// `max ||u||_{L^q(Omega)} / ||u||_{D^s,p}` (or the Hölder seminorm on
/// `Omega` in place of the `L^q` norm) over the admissible corpus, at the
/// source grid and one refinement. The constant is existential; the check
/// asks for a finite ratio that moves by less than a factor 2. For `q = p`
/// the ratio is also bounded by 1.
pub fn check_embedding(source: &CorpusSource, s: f64, p: f64, target: EmbeddingTarget) -> Result<CheckReport> {
    let n = source.grid.dim();
    validate_target(n, s, p, target)?;
    let mut r = CheckReport::new(
        "embedding",
        params(json!({ "s": s, "p": p, "target": target, "corpus": source.describe(), "region": "ball(extent/8)" })),
    );
    let admissible = |src: &CorpusSource| -> Vec<CorpusEntry<f64>> {
        src.corpus().into_iter().filter(|e| e.family.admissible(n, s, p)).collect()
    };
    let base = max_ratio(&admissible(source), s, p, target)?;
    let fine = max_ratio(&admissible(&source.refined()), s, p, target)?;
    for (label, v) in &base {
        r.measure(format!("ratio[{label}]"), *v);
    }
    let top = |v: &[(String, f64)]| v.iter().map(|x| x.1).fold(0.0, f64::max);
    let (a, b) = (top(&base), top(&fine));
    r.measure("ratio", a).measure("ratio_refined", b).measure("stability", a.max(b) / a.min(b));
    let mut rules = vec![PassRule::finite("ratio"), PassRule::at_most("stability", 2.0)];
    if target == (EmbeddingTarget::Lebesgue { q: p }) {
        rules.push(PassRule::at_most("ratio", 1.0 + 1e-12));
    }
    r.conclude(Bound::Existential, PassRule::AllOf { rules });
    Ok(r)
}

/// Converse probe beyond `p*_s`: the ratio of [`check_embedding`] along
/// `u_a = eta |x|^{-a}` with `a_k = (n/q)(1 - 2^{-k})`, `k = 1..=6`, must grow
/// by a factor 10. For `q < p*_s` this is [`check_embedding`].
pub fn check_blowup_family(source: &CorpusSource, s: f64, p: f64, q: f64) -> Result<CheckReport> {
    let n = source.grid.dim();
    let e = exponents(n, s, p)?;
    let Some(ps) = e.p_star_s else {
        return Err(Error::Precondition(format!("blow-up probe needs sp < n (regime {:?})", e.regime)));
    };
    if q == ps {
        return Err(Error::Precondition(format!("q = p*_s = {ps} is not probed")));
    }
    if q < ps {
        return check_embedding(source, s, p, EmbeddingTarget::Lebesgue { q });
    }
    let mut r =
        CheckReport::new("blowup_family", params(json!({ "s": s, "p": p, "q": q, "p_star_s": ps, "corpus": source.describe() })));
    let cutoff = source.grid.extent() / 8.0;
    let target = EmbeddingTarget::Lebesgue { q };
    let mut ratios = Vec::new();
    for k in 1..=6 {
        let a = n as f64 / q * (1.0 - 0.5f64.powi(k));
        let family = Family::PowerTail { exponent: a, cutoff };
        if !family.admissible(n, s, p) {
            r.note(format!("a = {a:.4} skipped: D^s u_a not in L^p"));
            continue;
        }
        let u = family.sample(&source.grid);
        let ratio = embedding_ratio(&u, s, p, target, &default_region(&source.grid))?;
        if !ratio.is_finite() {
            r.note(format!("a = {a:.4} skipped: non-finite ratio"));
            continue;
        }
        r.measure(format!("ratio@a={a:.4}"), ratio);
        ratios.push(ratio);
    }
    if ratios.len() < 2 {
        r.note("fewer than two admissible family members");
        r.conclude(Bound::Value(10.0), PassRule::Never);
        return Ok(r);
    }
    r.measure("growth", ratios[ratios.len() - 1] / ratios[0]);
    r.conclude(Bound::Value(10.0), PassRule::at_least("growth", 10.0));
    Ok(r)
}

/// Spread (max / min) over the corpus of
/// `(||u||_2 + [u]_{W^{s,2}}) / ||u||_{H^{s,2}}`.
pub fn check_contiguity_p2(source: &CorpusSource, s: f64) -> Result<CheckReport> {
    let mut r = CheckReport::new("contiguity_p2", params(json!({ "s": s, "corpus": source.describe() })));
    let method = NormMethod::default_for(&source.grid, source.seed);
    let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
    for e in source.corpus() {
        let l2 = lp_norm(&e.field, 2.0, &Region::FullTorus)?;
        let g = gagliardo_seminorm(&e.field, s, 2.0, method)?.value;
        let ratio = (l2 + g) / bessel_norm(&e.field, s, 2.0)?;
        r.measure(format!("ratio[{}]", e.label), ratio);
        lo = lo.min(ratio);
        hi = hi.max(ratio);
    }
    r.measure("spread", hi / lo);
    r.conclude(Bound::Value(10.0), PassRule::at_most("spread", 10.0));
    Ok(r)
}

/// `[u]_{W^{s,2}}^2 = C(n, s) sum |2 pi xi|^{2s} |u_hat|^2` with
/// `C = 2 pi^{n/2} |Gamma(-s)| / (4^s Gamma(n/2 + s))`.
pub fn gagliardo_constant(n: usize, s: f64) -> Result<f64> {
    let half = n as f64 / 2.0;
    // |Gamma(-s)| = Gamma(1 - s) / s
    let g = gamma_fn(1.0 - s)? / s;
    Ok(2.0 * std::f64::consts::PI.powf(half) * g / (4f64.powf(s) * gamma_fn(half + s)?))
}

/// Coefficient of variation of `[u]^2 / (sum |2 pi xi|^{2s} |u_hat|^2)` over
/// the smooth corpus.
pub fn check_gagliardo_proportionality(source: &CorpusSource, s: f64) -> Result<CheckReport> {
    let n = source.grid.dim();
    let mut r = CheckReport::new("gagliardo_proportionality", params(json!({ "s": s, "corpus": source.describe() })));
    let method = NormMethod::default_for(&source.grid, source.seed);
    let corpus = source.corpus();
    let mut ratios = Vec::new();
    for e in smooth_entries(&corpus) {
        let g = gagliardo_seminorm(&e.field, s, 2.0, method)?.value;
        let f = frequency_seminorm(&e.field, s)?;
        let ratio = (g * g) / (f * f);
        r.measure(format!("ratio[{}]", e.label), ratio);
        ratios.push(ratio);
    }
    let m = ratios.iter().sum::<f64>() / ratios.len() as f64;
    let var = ratios.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / ratios.len() as f64;
    let c = gagliardo_constant(n, s)?;
    r.measure("mean_ratio", m)
        .measure("coefficient_of_variation", var.sqrt() / m)
        .measure("expected_constant", c)
        .measure("constant_deviation", (m - c).abs() / c);
    r.conclude(Bound::Value(0.02), PassRule::at_most("coefficient_of_variation", 0.02));
    Ok(r)
}

/// Largest violations of monotonicity, concavity (`K(t)/t` nonincreasing)
/// and the endpoint bound `K <= min(||u||_0, t ||u||_1)`, relative to
/// `||u||_0`.
fn curve_defects(curve: &KCurve, e0: f64, e1: f64) -> [f64; 3] {
    let (t, k) = (&curve.t_grid, &curve.values);
    let scale = if e0 > 0.0 { e0 } else { 1.0 };
    let mut out = [0.0f64; 3];
    for i in 0..t.len() {
        if k[i] < 0.0 {
            out[0] = out[0].max(-k[i] / scale);
        }
        if i + 1 < t.len() {
            out[0] = out[0].max((k[i] - k[i + 1]) / scale);
            out[1] = out[1].max((k[i + 1] / t[i + 1] - k[i] / t[i]) * t[i] / scale);
        }
        out[2] = out[2].max((k[i] - e0.min(t[i] * e1)) / scale);
    }
    out
}

fn w1p_norm(u: &Field<f64>, p: f64) -> Result<f64> {
    let full = Region::FullTorus;
    let a = lp_norm(u, p, &full)?;
    let b = lp_norm(&exact_gradient(u)?, p, &full)?;
    Ok((a.powf(p) + b.powf(p)).powf(1.0 / p))
}

/// Invariants of K-curves on the corpus. For `p = 2` the exact Hilbert
/// curve is checked and the mollifier bound must lie in
/// `[K_2, sqrt(2) K_2 (1 + 5%)]`; otherwise the mollifier curve is checked.
pub fn check_k_functional(source: &CorpusSource, p: f64) -> Result<CheckReport> {
    const SLACK: f64 = 1e-9;
    let mut r = CheckReport::new("k_functional", params(json!({ "p": p, "corpus": source.describe(), "slack": SLACK })));
    let t = default_t_grid();
    let names = ["monotonicity_defect", "concavity_defect", "endpoint_defect"];
    let mut worst = [0.0f64; 3];
    let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
    for e in source.corpus() {
        let e0 = lp_norm(&e.field, p, &Region::FullTorus)?;
        let e1 = w1p_norm(&e.field, p)?;
        let main = if p == 2.0 { KMethod::ExactHilbertP2 } else { KMethod::MollifierFamily };
        let curve = k_curve(&e.field, &t, p, main)?;
        for (w, d) in worst.iter_mut().zip(curve_defects(&curve, e0, e1)) {
            *w = w.max(d);
        }
        if p == 2.0 {
            let upper = k_curve(&e.field, &t, p, KMethod::MollifierFamily)?;
            let (mut a, mut b) = (f64::INFINITY, 0.0f64);
            for (m, x) in upper.values.iter().zip(&curve.values) {
                if *x > 0.0 {
                    a = a.min(m / x);
                    b = b.max(m / x);
                }
            }
            r.measure(format!("sandwich_max[{}]", e.label), b);
            lo = lo.min(a);
            hi = hi.max(b);
        }
    }
    let mut rules = Vec::new();
    for (name, w) in names.iter().zip(worst) {
        r.measure(*name, w);
        rules.push(PassRule::at_most(name, SLACK));
    }
    if p == 2.0 {
        let top = std::f64::consts::SQRT_2 * 1.05;
        r.measure("sandwich_min", lo).measure("sandwich_max", hi);
        rules.push(PassRule::at_least("sandwich_min", 1.0 - SLACK));
        rules.push(PassRule::at_most("sandwich_max", top));
    }
    r.conclude(Bound::Value(SLACK), PassRule::AllOf { rules });
    Ok(r)
}

/// `||u||_q / (||u||_p^{1-a} ||u||_r^a)` on `region`, with
/// `1/q = (1-a)/p + a/r`; at most 1.
pub fn check_lyapunov(u: &Field<f64>, p: f64, q: f64, r: f64, region: &Region) -> CheckReport {
    let mut rep = CheckReport::new("lyapunov", params(json!({ "p": p, "q": q, "r": r, "region": region })));
    match lyapunov_ratio(u, p, q, r, region) {
        Ok(v) => {
            rep.measure("ratio", v).conclude(Bound::Value(1.0 + 1e-9), PassRule::at_most("ratio", 1.0 + 1e-9));
        }
        Err(e) => {
            rep.fail(e);
        }
    }
    rep
}

fn lyapunov_ratio(u: &Field<f64>, p: f64, q: f64, r: f64, region: &Region) -> Result<f64> {
    if !(1.0 <= p && p < q && q < r && r.is_finite()) {
        return Err(Error::Precondition(format!("need 1 <= p < q < r < inf, got ({p}, {q}, {r})")));
    }
    let a = r * (q - p) / (q * (r - p));
    let nq = lp_norm(u, q, region)?;
    if nq == 0.0 {
        return Ok(0.0);
    }
    Ok(nq / (lp_norm(u, p, region)?.powf(1.0 - a) * lp_norm(u, r, region)?.powf(a)))
}

/// [`check_lyapunov`] on every corpus entry over the default region.
pub fn check_lyapunov_corpus(source: &CorpusSource, p: f64, q: f64, r: f64) -> Result<CheckReport> {
    let mut rep = CheckReport::new("lyapunov", params(json!({ "p": p, "q": q, "r": r, "corpus": source.describe() })));
    let region = default_region(&source.grid);
    let mut worst = 0.0f64;
    for e in source.corpus() {
        let v = lyapunov_ratio(&e.field, p, q, r, &region)?;
        rep.measure(format!("ratio[{}]", e.label), v);
        worst = worst.max(v);
    }
    rep.measure("max_ratio", worst).conclude(Bound::Value(1.0 + 1e-9), PassRule::at_most("max_ratio", 1.0 + 1e-9));
    Ok(rep)
}

pub(crate) fn validate_embedding(n: usize, s: f64, p: f64, target: EmbeddingTarget) -> Result<()> {
    validate_target(n, s, p, target)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::Regime;

    #[test]
    fn target_validation_follows_regime() {
        assert!(validate_target(2, 0.5, 2.0, EmbeddingTarget::Lebesgue { q: 3.0 }).is_ok());
        assert!(validate_target(2, 0.5, 2.0, EmbeddingTarget::Lebesgue { q: 5.0 }).is_err());
        assert!(validate_target(1, 0.5, 2.0, EmbeddingTarget::Lebesgue { q: 50.0 }).is_ok());
        assert!(validate_target(1, 0.75, 2.0, EmbeddingTarget::Holder { mu: 0.2 }).is_ok());
        assert!(validate_target(1, 0.75, 2.0, EmbeddingTarget::Holder { mu: 0.3 }).is_err());
        assert!(validate_target(2, 0.5, 2.0, EmbeddingTarget::Holder { mu: 0.1 }).is_err());
    }

    #[test]
    fn regime_enum_is_used_in_errors() {
        let err = validate_target(2, 0.5, 2.0, EmbeddingTarget::Holder { mu: 0.1 }).unwrap_err();
        assert!(err.to_string().contains(&format!("{:?}", Regime::Subcritical)));
    }
}
