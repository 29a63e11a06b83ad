//! Numerical checks of the inequalities and identities of the theory, each
//! producing a self-contained [`CheckReport`].

mod compactness;
mod embedding;
mod exponents;
mod operators;
mod report;
mod suite;

use std::collections::BTreeMap;

pub use compactness::{bump_family, check_frechet_kolmogorov, check_holder_ladder, normalized_bandlimited_family};
pub use embedding::{
    check_blowup_family, check_contiguity_p2, check_embedding, check_gagliardo_proportionality, check_k_functional,
    check_lyapunov, check_lyapunov_corpus, gagliardo_constant, EmbeddingTarget,
};
pub use exponents::{exponents, Exponents, Regime};
pub use operators::{
    check_ftc_corpus, check_ftc_roundtrip, check_gradient_cross_validation, check_integration_by_parts,
    check_integration_by_parts_pairs, check_s_limit, check_s_limit_corpus, check_translation_estimate, FtcPath,
};
pub use report::{Bound, CheckReport, PassRule};
pub use suite::{run_check, run_suite, CheckSpec, SuiteConfig};

use crate::corpus::{sample_corpus, CorpusEntry};
use crate::error::Result;
use crate::field::{lp_norm, Field};
use crate::grid::{GridSpec, Region};

/// Grid and seed from which a corpus is sampled, possibly on refined grids.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CorpusSource {
    pub grid: GridSpec<f64>,
    pub seed: u64,
}

impl CorpusSource {
    pub fn new(grid: GridSpec<f64>, seed: u64) -> Self {
        CorpusSource { grid, seed }
    }

    pub fn corpus(&self) -> Vec<CorpusEntry<f64>> {
        sample_corpus(&self.grid, self.seed)
    }

    pub fn refined(&self) -> Self {
        CorpusSource { grid: self.grid.refined(), seed: self.seed }
    }

    /// Same corpus at `points_per_axis / 2^levels`.
    pub fn coarsened(&self, levels: u32) -> Result<Self> {
        let n = self.grid.points_per_axis() >> levels;
        Ok(CorpusSource { grid: GridSpec::new(self.grid.dim(), n, self.grid.extent())?, seed: self.seed })
    }

    pub(crate) fn describe(&self) -> serde_json::Value {
        serde_json::json!({
            "dim": self.grid.dim(),
            "points_per_axis": self.grid.points_per_axis(),
            "extent": self.grid.extent(),
            "seed": self.seed,
        })
    }
}

/// `Omega`: the centered ball of radius `extent / 8`.
pub fn default_region(grid: &GridSpec<f64>) -> Region {
    Region::ball(grid.extent() / 8.0)
}

pub(crate) fn params(value: serde_json::Value) -> BTreeMap<String, serde_json::Value> {
    match value {
        serde_json::Value::Object(map) => map.into_iter().collect(),
        other => BTreeMap::from([("value".to_string(), other)]),
    }
}

/// `||a - b||_2 / ||b||_2`, and `||a||_2` when `b = 0`.
pub(crate) fn relative_l2(a: &Field<f64>, b: &Field<f64>) -> Result<f64> {
    let full = Region::FullTorus;
    let diff = lp_norm(&a.sub(b)?, 2.0, &full)?;
    let scale = lp_norm(b, 2.0, &full)?;
    Ok(if scale == 0.0 { diff } else { diff / scale })
}
