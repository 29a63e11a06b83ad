//! Fractional calculus on periodic grids: Bessel potentials, the Riesz
//! fractional gradient and divergence, Gagliardo and Hölder seminorms,
//! K-functionals, and a harness of numerical checks for the embedding
//! theory of Bessel potential spaces.
//!
//! Numeric kernels are generic over [`Real`] (`f32` or `f64`); the
//! verification harness works in `f64`.

pub mod corpus;
pub mod direct;
pub mod error;
pub mod field;
pub mod fourier;
pub mod grid;
pub mod interp;
pub mod io;
pub mod norms;
pub mod scalar;
pub mod spectral;
pub mod verify;

pub use corpus::{sample_corpus, CorpusEntry, Family};
pub use error::{Error, Result};
pub use field::{lp_norm, translate, Field, Rank};
pub use grid::{make_grid, GridConfig, GridSpec, Region};
pub use scalar::Real;

pub type Grid64 = GridSpec<f64>;
pub type Grid32 = GridSpec<f32>;
pub type Field64 = Field<f64>;
pub type Field32 = Field<f32>;
