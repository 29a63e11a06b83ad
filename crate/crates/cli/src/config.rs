use std::path::{Path, PathBuf};

use fracspace::verify::{CheckSpec, FtcPath, SuiteConfig};
use fracspace::GridConfig;
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

/// Parameter lists. An absent list falls back to the command default; an
/// empty list is an empty grid.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Params {
    pub s: Option<Vec<f64>>,
    pub p: Option<Vec<f64>>,
    pub q: Option<Vec<f64>>,
    pub mu: Option<Vec<f64>>,
    pub h: Option<Vec<f64>>,
    pub eps: Option<Vec<f64>>,
}

/// A check given by id (expanded over `params`) or spelled out in full.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CheckEntry {
    Id(String),
    Spec(CheckSpec),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub grid: GridConfig,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default)]
    pub params: Params,
    /// Absent: the default suite.
    #[serde(default)]
    pub checks: Option<Vec<CheckEntry>>,
    #[serde(default = "default_output")]
    pub output_dir: PathBuf,
    #[serde(default = "default_formats")]
    pub formats: Vec<Format>,
}

fn default_seed() -> u64 {
    42
}

fn default_output() -> PathBuf {
    PathBuf::from("out")
}

fn default_formats() -> Vec<Format> {
    vec![Format::Csv, Format::Json]
}

impl Default for RunConfig {
    fn default() -> Self {
        let suite = SuiteConfig::default_suite(default_seed());
        RunConfig {
            grid: suite.grid,
            seed: suite.seed,
            params: Params::default(),
            checks: None,
            output_dir: default_output(),
            formats: default_formats(),
        }
    }
}

pub const S_LADDER: [f64; 3] = [0.25, 0.5, 0.75];

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            CliError::Config(format!("at `{path}`: {}", e.into_inner()))
        })
    }

    pub fn wants(&self, f: Format) -> bool {
        self.formats.contains(&f)
    }

    fn list(v: &Option<Vec<f64>>, default: &[f64]) -> Vec<f64> {
        v.clone().unwrap_or_else(|| default.to_vec())
    }

    pub fn s_list(&self) -> Vec<f64> {
        Self::list(&self.params.s, &S_LADDER)
    }

    pub fn p_list(&self, default: &[f64]) -> Vec<f64> {
        Self::list(&self.params.p, default)
    }

    pub fn h_list(&self) -> Vec<f64> {
        self.params.h.clone().unwrap_or_else(|| (1..=7).map(|k| 0.5f64.powi(k)).collect())
    }

    /// The check list of the suite: explicit specs kept, ids expanded.
    pub fn suite(&self) -> Result<SuiteConfig, CliError> {
        let checks = match &self.checks {
            None => {
                let mut d = SuiteConfig::default_suite(self.seed);
                d.grid = self.grid;
                return Ok(d);
            }
            Some(list) => {
                let mut out = Vec::new();
                for (i, entry) in list.iter().enumerate() {
                    match entry {
                        CheckEntry::Spec(spec) => out.push(spec.clone()),
                        CheckEntry::Id(id) => out.extend(
                            self.expand(id).map_err(|e| CliError::Config(format!("at `checks[{i}]`: {e}")))?,
                        ),
                    }
                }
                out
            }
        };
        Ok(SuiteConfig { grid: self.grid, seed: self.seed, checks })
    }

    fn expand(&self, id: &str) -> Result<Vec<CheckSpec>, String> {
        let s = self.s_list();
        let mut out = Vec::new();
        match id {
            "ftc_roundtrip" => {
                for &s in &s {
                    for path in [FtcPath::Spectral, FtcPath::Quadrature] {
                        out.push(CheckSpec::FtcRoundtrip { s, path, grid: None });
                    }
                }
            }
            "gradient_cross_validation" => {
                out.extend(s.iter().map(|&s| CheckSpec::GradientCrossValidation { s, grid: None }));
            }
            "translation_estimate" => {
                for &s in &s {
                    for p in self.p_list(&[1.0, 2.0, 3.0]) {
                        out.push(CheckSpec::TranslationEstimate { s, p, h: self.h_list(), grid: None });
                    }
                }
            }
            "embedding" | "blowup_family" => {
                let qs = self.params.q.clone().unwrap_or_default();
                let mus = if id == "embedding" { self.params.mu.clone().unwrap_or_default() } else { vec![] };
                if qs.is_empty() && mus.is_empty() {
                    return Err(format!("`{id}` needs params.q{}", if id == "embedding" { " or params.mu" } else { "" }));
                }
                for &s in &s {
                    for p in self.p_list(&[2.0]) {
                        for &q in &qs {
                            out.push(if id == "embedding" {
                                CheckSpec::Embedding { s, p, q: Some(q), mu: None, grid: None }
                            } else {
                                CheckSpec::BlowupFamily { s, p, q, grid: None }
                            });
                        }
                        for &mu in &mus {
                            out.push(CheckSpec::Embedding { s, p, q: None, mu: Some(mu), grid: None });
                        }
                    }
                }
            }
            "contiguity_p2" => out.extend(s.iter().map(|&s| CheckSpec::ContiguityP2 { s, grid: None })),
            "gagliardo_proportionality" => {
                out.extend(s.iter().map(|&s| CheckSpec::GagliardoProportionality { s, grid: None }))
            }
            "k_functional" => {
                out.extend(self.p_list(&[1.5, 2.0, 3.0]).into_iter().map(|p| CheckSpec::KFunctional { p, grid: None }))
            }
            "integration_by_parts" => {
                out.extend(s.iter().map(|&s| CheckSpec::IntegrationByParts { s, pairs: 100, grid: None }))
            }
            "s_limit" => out.extend(
                self.p_list(&[2.0])
                    .into_iter()
                    .map(|p| CheckSpec::SLimit { p, s_list: vec![0.9, 0.95, 0.99], grid: None }),
            ),
            "frechet_kolmogorov" => {
                let max_band = (self.grid.points_per_axis / 8).max(1);
                for &s in &s {
                    for p in self.p_list(&[2.0]) {
                        for eps in self.params.eps.clone().unwrap_or_else(|| vec![0.1]) {
                            out.push(CheckSpec::FrechetKolmogorov { s, p, eps, members: 64, max_band, grid: None });
                        }
                    }
                }
            }
            "lyapunov" => out.push(CheckSpec::Lyapunov { p: 2.0, q: 3.0, r: 6.0, grid: None }),
            "holder_ladder" => {
                out.push(CheckSpec::HolderLadder { alpha: 0.3, beta: 0.6, members: 64, pairs: 10_000, grid: None })
            }
            other => return Err(format!("unknown check id `{other}`")),
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_and_specs_mix() {
        let cfg = RunConfig::parse(
            r#"{"grid":{"dim":1,"points_per_axis":128,"extent":16.0},
                "params":{"s":[0.5]},
                "checks":["integration_by_parts",{"check":"lyapunov","p":2.0,"q":3.0,"r":6.0}]}"#,
        )
        .unwrap();
        let suite = cfg.suite().unwrap();
        assert_eq!(suite.checks.len(), 2);
        assert_eq!(cfg.formats, vec![Format::Csv, Format::Json]);
    }

    #[test]
    fn schema_errors_name_the_field() {
        let err = RunConfig::parse(r#"{"grid":{"dim":1,"points_per_axis":"x","extent":16.0}}"#).unwrap_err();
        assert!(err.to_string().contains("grid.points_per_axis"), "{err}");
    }

    #[test]
    fn unknown_id_is_a_config_error() {
        let cfg = RunConfig::parse(r#"{"grid":{"dim":1,"points_per_axis":64,"extent":16.0},"checks":["nope"]}"#).unwrap();
        assert!(matches!(cfg.suite(), Err(CliError::Config(_))));
    }
}
