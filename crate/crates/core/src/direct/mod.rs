//! Real-space realizations: Gamma constants, lattice quadrature of the Riesz
//! gradient and of the reconstruction convolution, and the kernel
//! translation integral.

mod constants;
mod kernel;
mod kernel_l1;
pub mod lattice;
mod quadrature;
pub mod special;

pub use constants::{constants, GammaConstants};
pub use kernel_l1::{kernel_translation_l1, kernel_translation_l1_at_level};
pub use quadrature::{ftc_convolution_quadrature, riesz_gradient_quadrature, Boundary, QuadratureSpec};
pub use special::gamma_fn;

pub(crate) use kernel::{even_weight, Support};
