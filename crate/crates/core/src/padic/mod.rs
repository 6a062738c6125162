//! Exact and finite-precision arithmetic: primes, `Z[1/p]`, p-adic
//! valuations and approximations, `D`-adic pseudo-valuations, nearest-integer
//! distance, and the extended real format used near records.
//!
//! All values are immutable once built and every operation is a pure
//! function, so everything here is safe to share across threads.

mod approx;
mod dseq;
mod norm;
mod prime;
mod real;
mod zinvp;

pub use approx::{NormBound, PAdicApprox, DEFAULT_PRECISION};
pub use dseq::{d_adic_norm, DSeq};
pub use norm::{
    dist_nearest_int, dist_nearest_int_exact, nearest_int_exact, padic_norm, padic_norm_f64,
    split_i128, valuation, valuation_i128,
};
pub use prime::Prime;
pub use real::{ExtReal, PrecisionMode, EXTENDED_THRESHOLD, EXT_FRAC_BITS};
pub use zinvp::ZInvP;
