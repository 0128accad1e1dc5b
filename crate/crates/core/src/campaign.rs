//! Seeded batches of tuning campaigns with campaign-level parallelism.
//!
//! Every campaign's randomness is fixed by `(master_seed, campaign_id)`,
//! so the worker count and scheduling order never change any result; the
//! output vector is indexed by campaign id regardless of completion order.

use rayon::prelude::*;
use serde::Serialize;

use crate::configurator::{param_rls, TuningParams, TuningTrace};
use crate::params::Configuration;

/// One CSV row per campaign.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct CampaignRow {
    pub campaign_id: u64,
    pub initial_chi: f64,
    pub final_chi: f64,
    pub comparisons: u64,
    pub evaluations: u64,
}

impl CampaignRow {
    pub fn from_trace(campaign_id: u64, trace: &TuningTrace) -> Self {
        Self {
            campaign_id,
            initial_chi: trace.initial.chi(),
            final_chi: trace.final_config.chi(),
            comparisons: trace.comparisons_used,
            evaluations: trace.budget_evaluations,
        }
    }
}

fn with_pool<T: Send>(workers: usize, job: impl FnOnce() -> T + Send) -> T {
    if workers == 0 {
        job()
    } else {
        rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .expect("thread pool")
            .install(job)
    }
}

/// Runs `n_campaigns` full tuning campaigns. `workers = 0` uses the global
/// thread pool's default.
pub fn run_campaign_traces(
    params: &TuningParams,
    master: u64,
    n_campaigns: u64,
    workers: usize,
) -> Vec<TuningTrace> {
    with_pool(workers, || {
        (0..n_campaigns)
            .into_par_iter()
            .map(|campaign| param_rls(params, master, campaign))
            .collect()
    })
}

pub fn run_campaigns(
    params: &TuningParams,
    master: u64,
    n_campaigns: u64,
    workers: usize,
) -> Vec<CampaignRow> {
    run_campaign_traces(params, master, n_campaigns, workers)
        .iter()
        .enumerate()
        .map(|(id, trace)| CampaignRow::from_trace(id as u64, trace))
        .collect()
}

/// Comparison index (1-based) at which the active parameter first equals
/// `target`, or None if it never does. The initial configuration counts as
/// comparison 0.
pub fn first_reach(trace: &TuningTrace, target: Configuration) -> Option<u64> {
    if trace.initial == target {
        return Some(0);
    }
    let mut current = trace.initial;
    for (idx, step) in trace.steps.iter().enumerate() {
        if step.accepted {
            if let crate::configurator::Proposal::InBounds(c) = step.proposal {
                current = c;
            }
        }
        if current == target {
            return Some(idx as u64 + 1);
        }
    }
    None
}
