//! Numerical boundary controllability for one-dimensional linear hyperbolic
//! systems
//!
//! ```text
//! ∂t w = Σ(x) ∂x w + C(x) w,   Σ = diag(-λ_1, …, -λ_k, λ_{k+1}, …, λ_{k+m}),
//! w_-(t, 0) = B w_+(t, 0),     w_+(t, 1) = W(t)  (control).
//! ```
//!
//! * [`model`]: system data, travel times, optimal time, boundary classes.
//! * [`solver`]: upwind primal solver and its discrete adjoint.
//! * [`hum`]: control operator, Gramian, HUM control synthesis and
//!   observability estimates.
//! * [`experiments`]: reproducible studies that write CSV records.
//! * [`cli`]: configuration format and command dispatch for `hyperctl`.

// `!(x > 0.0)` style guards are intentional: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod experiments;
pub mod hum;
pub mod model;
pub mod solver;

pub use error::{Error, Result};
