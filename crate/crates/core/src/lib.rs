//! Laboratory for studying how the cutoff time and performance metric shape
//! the tuning of the (1+1) EA's mutation rate.
//!
//! The crate is organised around four pillars:
//!
//! * [`problems`] — the Ridge and LeadingOnes pseudo-Boolean benchmarks and
//!   their XOR-mask instance families,
//! * [`ea`] — the (1+1) EA with standard bit mutation, run under a cutoff
//!   with full bookkeeping for both comparison metrics,
//! * [`configurator`] — the ParamRLS local-search tuner with best-fitness and
//!   optimisation-time comparison subroutines,
//! * [`recurrence`] — the deterministic engine that iterates the
//!   leading-constant fitness-bound recurrences, certifies unimodality of the
//!   parameter landscape, and certifies which configuration finishes first.
//!
//! [`campaign`] ties the pieces together into seeded, reproducible tuning
//! campaigns, and [`stats`] provides the statistical checks used by the
//! experiment harness.

pub mod bitstring;
pub mod campaign;
pub mod configurator;
pub mod ea;
pub mod golden;
pub mod params;
pub mod problems;
pub mod recurrence;
pub mod sampler;
pub mod seeding;
pub mod stats;

pub use bitstring::BitString;
pub use configurator::{
    blind_walk_oracle, eval_f, eval_t, mutate_param, param_rls, ComparisonOutcome, EvalParams,
    Metric, Proposal, TuningTrace, Winner,
};
pub use ea::{run_ea, InitScheme, RunOutput, RunRecord, TraceSchedule};
pub use params::{Configuration, ParameterSpace};
pub use problems::{MaskSpec, ProblemInstance, ProblemKind};
pub use recurrence::{
    certify_finishes_first, certify_landscape, iterate_recurrence, ridge_blindness_threshold,
    ridge_drift, LandscapeReport, RecurrenceState,
};
