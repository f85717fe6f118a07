//! Variable-exponent Lebesgue modulars, Luxemburg norms and the mixed
//! `l_q(.)(L_p(.))` norm on finitely partitioned domains.
//!
//! Domains are finite lists of weighted cells and every function or exponent
//! is constant on each cell, so all integrals are exact sums. Infima are
//! located by bisection on monotone feasibility indicators, which tolerates
//! the jumps to `+inf` produced by infinite exponents.

pub mod bisect;
pub mod cli;
pub mod error;
pub mod mixed;
pub mod properties;
pub mod search;
pub mod space;
pub mod xreal;

pub use error::{Error, Result};
pub use mixed::{
    inner_infimum, mixed_modular, mixed_modular_alt, mixed_norm, phi_identity_residual, Branch,
    FunctionSequence, InnerInfimumResult,
};
pub use properties::{
    classify_regime, convexity_residual, holder_form_residual, triangle_residual, HolderKind,
    HolderTerms, Regime, TriangleCheck, ViolationWitness, VIOLATION_THRESHOLD,
};
pub use search::{
    bounded_q_instance, bounded_q_sweep, bounded_q_threshold, counterexample_instance,
    fuzz_identities, gen_instance, search_violations, GenConfig, Instance, UniformRegime,
};
pub use space::{
    luxemburg_norm, modular, phi, Estimate, ExponentPair, Partition, SimpleFunction, DEFAULT_TOL,
};
pub use xreal::{Exponent, XReal};
