//! Base-set extraction: G-collections, elementary Γ̂ subfamilies, the extraction loop,
//! the recursive driver and its audits.

mod audit;
mod collection;
mod constants;
mod engine;
mod process;

pub use audit::{audit_remark_g, AuditLine, ConsistencyLine, LineStatus, RemarkGReport, SandwichLine};
pub use collection::GCollection;
pub use constants::{Constants, ConstantsFile, Mode, ThresholdF, LOG_SPACE_SWITCH, THRESHOLD_TOLERANCE};
pub use engine::{
    audit_output, base_sets, is_elementary_gamma_hat, meets_input_floor, meets_size_bound, AuditCheck,
    BaseSetsFailure, BaseSetsOutput, BaseSetsReport, ElementaryGammaHat, GammaHatVerdict, LevelSummary,
    OutputAudit, PartReport, TraceRecord, Variant,
};
pub use process::{process_r, ProcessFailure, ProcessOutcome, ProcessReport, ProcessStep, StepReport};
