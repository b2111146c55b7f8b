//! Numerical kernels shared by the rest of the crate.

mod eigen;
mod quadrature;
mod roots;
mod special;

pub use eigen::{sym_eig_min, SymTridiagonal, SymmetricMatrix};
pub use quadrature::{integrate_adaptive, integrate_piecewise, QuadratureError, QuadratureSpec};
pub use roots::find_root;
pub use special::{bessel_i0, bessel_i0_scaled, ln_bessel_i0, log_sinhc, sinc};

pub(crate) use eigen::dot;
