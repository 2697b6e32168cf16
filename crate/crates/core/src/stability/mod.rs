//! Hecke stability: candidate spaces, the largest stable submodule,
//! eigenforms, and runs over `Z[1/S]` with reductions mod `p`.

mod candidate;
mod eigen;
mod multichar;
mod squaring;

pub use candidate::{
    candidate_space, default_schedule, largest_stable_submodule, prime_list, span_contains, CandidateSpace, CutRecord, PivotRecord,
};
pub use eigen::{eigenforms, Eigenform};
pub use multichar::{
    base_ring, run_multicharacteristic, sturm_heuristic, Assumption, Escalation, MultiOutcome, MultiRun, Rerun, StabilityReport,
    SturmPlan, ESCALATION,
};
pub use squaring::{squaring_test, Verification};
