//! Numerical geometry of surfaces in Riemann-Cartan 3-manifolds.
//!
//! Ambients are given on a chart of ℝ³ either by a global frame (Weitzenböck)
//! or by metric and connection coefficients. Surfaces are closed-form maps
//! `X(u,v)`. Everything downstream of user input is differentiated exactly
//! through [`expr::Expr`].
//!
//! Index conventions, fixed once for the whole crate:
//!
//! * `gamma[k][i][j] = Γ^k_{ij}` with `∇_{∂i} ∂j = Γ^k_{ij} ∂k`.
//! * `riem[l][k][i][j] = R^l_{kij}` with `R(∂i,∂j)∂k = R^l_{kij} ∂l`.
//! * `ric[j][k] = R^i_{kij}`, not assumed symmetric.
//! * Lowered curvature `R(W,X,Y,Z) = ⟨R(W,X)Y, Z⟩`.
//! * A frame matrix `F` has the frame vectors as columns, `E_i = F^j_i ∂j`.
#![cfg_attr(not(feature = "std"), no_std)]
#![allow(clippy::needless_range_loop, clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod ambient;
pub mod error;
pub mod expr;
pub mod extrinsic;
pub mod gaussmap;
pub mod holo;
pub mod jet;
pub mod so3;
pub mod surface;
pub mod tape;

pub use error::{Error, Result};
pub use num_complex::Complex64;

mod prelude {
    #[cfg(not(feature = "std"))]
    pub use num_traits::Float;
}
