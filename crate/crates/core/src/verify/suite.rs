//! Declarative suites of checks.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::compactness::{bump_family, check_frechet_kolmogorov, check_holder_ladder, normalized_bandlimited_family};
use super::embedding::{
    check_blowup_family, check_contiguity_p2, check_embedding, check_gagliardo_proportionality, check_k_functional,
    check_lyapunov_corpus, validate_embedding, EmbeddingTarget,
};
use super::exponents::exponents;
use super::operators::{
    check_ftc_corpus, check_gradient_cross_validation, check_integration_by_parts_pairs, check_s_limit_corpus,
    check_translation_estimate, FtcPath,
};
use super::report::CheckReport;
use super::{default_region, params, CorpusSource};
use crate::error::{check_p, check_s, Error, Result};
use crate::grid::{GridConfig, GridSpec};

/// One configured check. `grid` overrides the suite grid.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "check", rename_all = "snake_case", deny_unknown_fields)]
pub enum CheckSpec {
    FtcRoundtrip {
        s: f64,
        path: FtcPath,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        grid: Option<GridConfig>,
    },
    GradientCrossValidation {
        s: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        grid: Option<GridConfig>,
    },
    TranslationEstimate {
        s: f64,
        p: f64,
        h: Vec<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        grid: Option<GridConfig>,
    },
    Embedding {
        s: f64,
        p: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        q: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        mu: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        grid: Option<GridConfig>,
    },
    BlowupFamily {
        s: f64,
        p: f64,
        q: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        grid: Option<GridConfig>,
    },
    ContiguityP2 {
        s: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        grid: Option<GridConfig>,
    },
    GagliardoProportionality {
        s: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        grid: Option<GridConfig>,
    },
    KFunctional {
        p: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        grid: Option<GridConfig>,
    },
    IntegrationByParts {
        s: f64,
        pairs: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        grid: Option<GridConfig>,
    },
    SLimit {
        p: f64,
        s_list: Vec<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        grid: Option<GridConfig>,
    },
    FrechetKolmogorov {
        s: f64,
        p: f64,
        eps: f64,
        members: usize,
        max_band: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        grid: Option<GridConfig>,
    },
    Lyapunov {
        p: f64,
        q: f64,
        r: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        grid: Option<GridConfig>,
    },
    HolderLadder {
        alpha: f64,
        beta: f64,
        members: usize,
        pairs: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        grid: Option<GridConfig>,
    },
}

impl CheckSpec {
    /// Identifier used in reports and in configuration shorthands.
    pub fn id(&self) -> &'static str {
        match self {
            CheckSpec::FtcRoundtrip { .. } => "ftc_roundtrip",
            CheckSpec::GradientCrossValidation { .. } => "gradient_cross_validation",
            CheckSpec::TranslationEstimate { .. } => "translation_estimate",
            CheckSpec::Embedding { .. } => "embedding",
            CheckSpec::BlowupFamily { .. } => "blowup_family",
            CheckSpec::ContiguityP2 { .. } => "contiguity_p2",
            CheckSpec::GagliardoProportionality { .. } => "gagliardo_proportionality",
            CheckSpec::KFunctional { .. } => "k_functional",
            CheckSpec::IntegrationByParts { .. } => "integration_by_parts",
            CheckSpec::SLimit { .. } => "s_limit",
            CheckSpec::FrechetKolmogorov { .. } => "frechet_kolmogorov",
            CheckSpec::Lyapunov { .. } => "lyapunov",
            CheckSpec::HolderLadder { .. } => "holder_ladder",
        }
    }

    fn grid_override(&self) -> Option<GridConfig> {
        match self {
            CheckSpec::FtcRoundtrip { grid, .. }
            | CheckSpec::GradientCrossValidation { grid, .. }
            | CheckSpec::TranslationEstimate { grid, .. }
            | CheckSpec::Embedding { grid, .. }
            | CheckSpec::BlowupFamily { grid, .. }
            | CheckSpec::ContiguityP2 { grid, .. }
            | CheckSpec::GagliardoProportionality { grid, .. }
            | CheckSpec::KFunctional { grid, .. }
            | CheckSpec::IntegrationByParts { grid, .. }
            | CheckSpec::SLimit { grid, .. }
            | CheckSpec::FrechetKolmogorov { grid, .. }
            | CheckSpec::Lyapunov { grid, .. }
            | CheckSpec::HolderLadder { grid, .. } => *grid,
        }
    }

    fn target(q: Option<f64>, mu: Option<f64>) -> Result<EmbeddingTarget> {
        match (q, mu) {
            (Some(q), None) => Ok(EmbeddingTarget::Lebesgue { q }),
            (None, Some(mu)) => Ok(EmbeddingTarget::Holder { mu }),
            _ => Err(Error::Precondition("embedding needs exactly one of q and mu".into())),
        }
    }

    /// Checks parameters against the preconditions of the check on `grid`.
    pub fn validate(&self, grid: &GridSpec<f64>) -> Result<()> {
        let n = grid.dim();
        match self {
            CheckSpec::FtcRoundtrip { s, .. }
            | CheckSpec::GradientCrossValidation { s, .. }
            | CheckSpec::ContiguityP2 { s, .. }
            | CheckSpec::GagliardoProportionality { s, .. }
            | CheckSpec::IntegrationByParts { s, .. } => check_s(*s)?,
            CheckSpec::TranslationEstimate { s, p, h, .. } => {
                check_s(*s)?;
                check_p(*p)?;
                if h.is_empty() {
                    return Err(Error::Precondition("empty shift sweep".into()));
                }
                for &x in h {
                    if !(x > 0.0 && x < grid.extent() / 4.0) {
                        return Err(Error::OutOfRange { name: "h", value: x, range: "(0, extent/4)" });
                    }
                }
            }
            CheckSpec::Embedding { s, p, q, mu, .. } => validate_embedding(n, *s, *p, Self::target(*q, *mu)?)?,
            CheckSpec::BlowupFamily { s, p, q, .. } => {
                let e = exponents(n, *s, *p)?;
                match e.p_star_s {
                    Some(ps) if *q > ps => {}
                    Some(ps) if *q < ps => validate_embedding(n, *s, *p, EmbeddingTarget::Lebesgue { q: *q })?,
                    _ => return Err(Error::Precondition(format!("blow-up probe needs sp < n and q != p*, got q = {q}"))),
                }
            }
            CheckSpec::KFunctional { p, .. } => check_p(*p)?,
            CheckSpec::SLimit { p, s_list, .. } => {
                check_p(*p)?;
                for &s in s_list {
                    check_s(s)?;
                }
                if s_list.len() < 2 || s_list.windows(2).any(|w| w[1] <= w[0]) {
                    return Err(Error::Precondition("s list must be ascending with at least two entries".into()));
                }
            }
            CheckSpec::FrechetKolmogorov { s, p, eps, members, max_band, .. } => {
                check_s(*s)?;
                check_p(*p)?;
                if !(*eps > 0.0) || *members < 2 || *max_band == 0 {
                    return Err(Error::Precondition("need eps > 0, members >= 2, max_band >= 1".into()));
                }
            }
            CheckSpec::Lyapunov { p, q, r, .. } => {
                if !(1.0 <= *p && p < q && q < r && r.is_finite()) {
                    return Err(Error::Precondition(format!("need 1 <= p < q < r < inf, got ({p}, {q}, {r})")));
                }
            }
            CheckSpec::HolderLadder { alpha, beta, members, .. } => {
                if !(0.0 < *alpha && alpha < beta && *beta < 1.0) || *members < 2 {
                    return Err(Error::Precondition("need 0 < alpha < beta < 1 and members >= 2".into()));
                }
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuiteConfig {
    pub grid: GridConfig,
    pub seed: u64,
    pub checks: Vec<CheckSpec>,
}

const LADDER: [f64; 3] = [0.25, 0.5, 0.75];

impl SuiteConfig {
    /// The default suite on a 1-d grid of 512 points over `[-8, 8)`, with
    /// 2-d checks on `256^2`. The blow-up probe is not included.
    pub fn default_suite(seed: u64) -> Self {
        let grid = GridConfig { dim: 1, points_per_axis: 512, extent: 16.0 };
        let plane = Some(GridConfig { dim: 2, points_per_axis: 256, extent: 16.0 });
        let plane_coarse = Some(GridConfig { dim: 2, points_per_axis: 128, extent: 16.0 });
        let h: Vec<f64> = (1..=7).map(|k| 0.5f64.powi(k)).collect();
        let mut checks = Vec::new();
        for s in LADDER {
            checks.push(CheckSpec::FtcRoundtrip { s, path: FtcPath::Spectral, grid: None });
            checks.push(CheckSpec::FtcRoundtrip { s, path: FtcPath::Quadrature, grid: None });
        }
        for s in LADDER {
            checks.push(CheckSpec::GradientCrossValidation { s, grid: None });
            checks.push(CheckSpec::GradientCrossValidation { s, grid: plane });
        }
        for s in LADDER {
            for p in [1.0, 2.0, 3.0] {
                checks.push(CheckSpec::TranslationEstimate { s, p, h: h.clone(), grid: None });
            }
        }
        checks.push(CheckSpec::Embedding { s: 0.5, p: 2.0, q: Some(3.0), mu: None, grid: plane_coarse });
        checks.push(CheckSpec::Embedding { s: 0.5, p: 2.0, q: Some(2.0), mu: None, grid: plane_coarse });
        checks.push(CheckSpec::Embedding { s: 0.5, p: 2.0, q: Some(6.0), mu: None, grid: None });
        checks.push(CheckSpec::Embedding { s: 0.75, p: 2.0, q: None, mu: Some(0.2), grid: None });
        for s in LADDER {
            checks.push(CheckSpec::ContiguityP2 { s, grid: None });
            checks.push(CheckSpec::GagliardoProportionality { s, grid: None });
        }
        for p in [1.5, 2.0, 3.0] {
            checks.push(CheckSpec::KFunctional { p, grid: None });
        }
        for s in LADDER {
            checks.push(CheckSpec::IntegrationByParts { s, pairs: 100, grid: None });
        }
        checks.push(CheckSpec::SLimit { p: 2.0, s_list: vec![0.9, 0.95, 0.99], grid: None });
        checks.push(CheckSpec::FrechetKolmogorov { s: 0.5, p: 2.0, eps: 0.1, members: 64, max_band: 16, grid: plane_coarse });
        checks.push(CheckSpec::Lyapunov { p: 2.0, q: 3.0, r: 6.0, grid: None });
        checks.push(CheckSpec::HolderLadder { alpha: 0.3, beta: 0.6, members: 64, pairs: 10_000, grid: None });
        SuiteConfig { grid, seed, checks }
    }

    fn grid_for(&self, spec: &CheckSpec) -> Result<GridSpec<f64>> {
        spec.grid_override().unwrap_or(self.grid).build()
    }

    /// Validates the grid and every check before anything runs.
    pub fn validate(&self) -> Result<()> {
        self.grid.build::<f64>()?;
        for (i, spec) in self.checks.iter().enumerate() {
            let grid = self.grid_for(spec)?;
            spec.validate(&grid).map_err(|e| Error::Precondition(format!("checks[{i}] ({}): {e}", spec.id())))?;
        }
        Ok(())
    }
}

/// Runs one check; errors become failed reports.
pub fn run_check(spec: &CheckSpec, grid: &GridSpec<f64>, seed: u64) -> CheckReport {
    let start = Instant::now();
    let mut report = match execute(spec, grid, seed) {
        Ok(r) => r,
        Err(e) => {
            let mut r = CheckReport::new(spec.id(), params(serde_json::to_value(spec).unwrap_or_default()));
            r.fail(e);
            r
        }
    };
    report.runtime_ms = start.elapsed().as_millis() as u64;
    report
}

fn execute(spec: &CheckSpec, grid: &GridSpec<f64>, seed: u64) -> Result<CheckReport> {
    spec.validate(grid)?;
    let source = CorpusSource::new(*grid, seed);
    match spec {
        CheckSpec::FtcRoundtrip { s, path, .. } => check_ftc_corpus(&source, *s, *path),
        CheckSpec::GradientCrossValidation { s, .. } => check_gradient_cross_validation(&source, *s),
        CheckSpec::TranslationEstimate { s, p, h, .. } => check_translation_estimate(&source, *s, *p, h),
        CheckSpec::Embedding { s, p, q, mu, .. } => check_embedding(&source, *s, *p, CheckSpec::target(*q, *mu)?),
        CheckSpec::BlowupFamily { s, p, q, .. } => check_blowup_family(&source, *s, *p, *q),
        CheckSpec::ContiguityP2 { s, .. } => check_contiguity_p2(&source, *s),
        CheckSpec::GagliardoProportionality { s, .. } => check_gagliardo_proportionality(&source, *s),
        CheckSpec::KFunctional { p, .. } => check_k_functional(&source, *p),
        CheckSpec::IntegrationByParts { s, pairs, .. } => check_integration_by_parts_pairs(grid, seed, *s, *pairs),
        CheckSpec::SLimit { p, s_list, .. } => check_s_limit_corpus(&source, *p, s_list),
        CheckSpec::FrechetKolmogorov { s, p, eps, members, max_band, .. } => {
            let family = normalized_bandlimited_family(grid, seed, *members, *max_band, *s, *p)?;
            check_frechet_kolmogorov(&family, *s, *p, &default_region(grid), *eps, 1.0 + 1e-9)
        }
        CheckSpec::Lyapunov { p, q, r, .. } => check_lyapunov_corpus(&source, *p, *q, *r),
        CheckSpec::HolderLadder { alpha, beta, members, pairs, .. } => {
            let family = bump_family(grid, seed, *members);
            check_holder_ladder(&family, *alpha, *beta, &default_region(grid), *pairs, seed, 1e3)
        }
    }
}

/// Validates `config`, then runs its checks in order.
pub fn run_suite(config: &SuiteConfig) -> Result<Vec<CheckReport>> {
    config.validate()?;
    config
        .checks
        .iter()
        .map(|spec| Ok(run_check(spec, &config.grid_for(spec)?, config.seed)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_suite_is_empty() {
        let cfg = SuiteConfig { grid: GridConfig { dim: 1, points_per_axis: 64, extent: 16.0 }, seed: 1, checks: vec![] };
        assert!(run_suite(&cfg).unwrap().is_empty());
    }

    #[test]
    fn unknown_check_is_a_parse_error() {
        let text = r#"{"grid":{"dim":1,"points_per_axis":64,"extent":16.0},"seed":1,"checks":[{"check":"nope"}]}"#;
        assert!(serde_json::from_str::<SuiteConfig>(text).is_err());
    }

    #[test]
    fn embedding_beyond_critical_exponent_fails_validation() {
        let mut cfg = SuiteConfig::default_suite(1);
        cfg.checks = vec![CheckSpec::Embedding {
            s: 0.5,
            p: 2.0,
            q: Some(5.0),
            mu: None,
            grid: Some(GridConfig { dim: 2, points_per_axis: 64, extent: 16.0 }),
        }];
        assert!(matches!(run_suite(&cfg), Err(Error::Precondition(_))));
    }

    #[test]
    fn default_suite_validates() {
        SuiteConfig::default_suite(7).validate().unwrap();
    }
}
