//! The four products `q|q|_p<qu>`, `|q||qu - q0||qv - q0|_p`,
//! `q|q|_p1|q|_p2<qu>` and `q|q|_D<qu>`, their record-minimum scans, and
//! the algebraic identities used to pass between them.

mod padic_eval;
mod param;
mod product;
mod records;
mod scan;

pub use padic_eval::{PAdicEval, ScaledResidues};
pub use param::{RealEval, RealParam};
pub use product::{
    dadic_multiplier, dadic_product, f_delta_invariance_check, furstenberg_multiplier,
    furstenberg_product, gmt_dual_product, gmt_product, mt_multiplier, mt_product, reduction_check,
    InvarianceVerdict, ProductValue, ReductionBranch, ReductionVerdict,
};
pub use records::{Record, RecordSequence};
pub use scan::{
    dadic_record_scan, furstenberg_record_scan, gmt_best_for_q, gmt_record_scan, mt_record_scan,
    record_scan, Flavor, ProductQuery, Q0Window,
};
