//! Truncated graded Hardy-space models with exact monomial norms.
//!
//! * `Ball(d)`: the Hardy space of the unit sphere in `C^d`.
//! * `RankOne(r, s)`: the Hardy space of the rank-one boundary manifold of
//!   `r x s` matrices, realised on the product of spheres through
//!   `z = xi1 xi2^T`. Basis monomials are `xi1^alpha xi2^beta` with
//!   `|alpha| = |beta| = m`.
//! * `SubHardy(r, s)`: the same monomials carrying the norms of the sub-Hardy
//!   space of the Shilov boundary, i.e. the rank-one norms times
//!   [`unitary_weight`]. In these coordinates multiplication by a
//!   holomorphic polynomial is exact.

mod basis;
pub mod haar;
mod operator;
mod toeplitz;

pub use basis::{compositions, sphere_monomial_norm_sq, BasisElement, GradedBasis, ModelKind};
pub use operator::TruncatedOperator;
pub use toeplitz::{
    build_ball_model, build_rank_one_model, build_sub_hardy_model, derivative_operator,
    holomorphic_derivative, lambda_operator, lambda_resolvent, level_function, sub_toeplitz,
    sub_toeplitz_linear, toeplitz_matrix, unitary_weight, unitary_weight_for,
};
