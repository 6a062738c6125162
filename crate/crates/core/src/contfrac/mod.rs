//! Simple continued fractions of rationals and quadratic irrationals, done
//! in exact integer arithmetic, and the partial-quotient diagnostics for
//! the scaled numbers `p^k u`.

mod criterion;
mod expand;
mod quad;

pub use criterion::{mt_liminf_witnesses_from_cf, scaled_quotient_sup, CfBudget, CfWitness, QuotientSup};
pub use expand::{
    cf_expand, cf_expand_quad, cf_expand_rational, CFExpansion, Convergents, ExactReal, SurdQuotients,
    SurdState,
};
pub use quad::QuadIrr;
