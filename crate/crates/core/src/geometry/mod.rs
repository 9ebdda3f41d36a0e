//! Boundary geometry of the manifold `S1` of rank-one tripotents: Peirce
//! frames, the boundary Poisson bracket, Poisson extension, Gindikin gamma
//! constants and Monte-Carlo integration over `S1`.
//!
//! Symbols on `S1` are written in boundary coordinates: `z` itself for the
//! ball, and `(xi1, xi2)` with `c = xi1 xi2^T` for `r x s` matrices. Ambient
//! matrix symbols are moved there with [`to_boundary`] or
//! [`poisson_extension_symbol`].

mod constants;
mod extension;
mod frame;
mod sampling;

pub use constants::{
    a2_branch, ball_shell_asymptote, ball_shell_oracle, ball_shell_sum, dixmier_constant, gamma_quotient_branch,
    gindikin_gamma,
};
pub use extension::{poisson_extension, poisson_extension_symbol, to_boundary};
pub use frame::{boundary_bracket, peirce_frame, BoundaryKind, BoundaryPoint, BracketKernel, PeirceFrame};
pub use sampling::{
    calibrate_phase, sample_s1, trace_formula_constant, trace_formula_integral, trace_formula_rhs, Phase, TraceFormulaRhs,
    CONVENTION, PINNED_PHASE,
};

#[cfg(test)]
mod tests;
