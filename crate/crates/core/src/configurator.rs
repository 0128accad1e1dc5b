//! ParamRLS: a random local search over the mutation-rate grid, comparing
//! the incumbent against a +-1/d neighbour with either the best-fitness
//! metric (eval-F) or the capped-optimisation-time metric (eval-T).

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::ea::{run_ea, InitScheme, RunRecord};
use crate::params::{Configuration, ParameterSpace};
use crate::problems::ProblemInstance;
use crate::seeding::{derive_seed, rng_from_seed, SeedCtx, STREAM_CTRL};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    /// eval-F: higher fitness after the cutoff wins, ties broken by the
    /// earlier last improvement.
    BestFitness,
    /// eval-T: smaller total capped optimisation time wins (PAR penalty).
    OptTime,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Winner {
    A,
    B,
    CoinFlipA,
    CoinFlipB,
}

impl Winner {
    pub fn favours_a(self) -> bool {
        matches!(self, Winner::A | Winner::CoinFlipA)
    }
}

#[derive(Debug, Clone)]
pub struct ComparisonOutcome {
    pub wins_a: u32,
    pub wins_b: u32,
    pub draws: u32,
    pub winner: Winner,
    pub per_run: Vec<(RunRecord, RunRecord)>,
}

/// Result of the +-1/d proposal step. A step off either end of the grid is
/// auto-rejected but still consumes one comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Proposal {
    InBounds(Configuration),
    OutOfBounds,
}

/// Proposes `theta +- 1/d`, each direction with probability 1/2.
pub fn mutate_param<R: Rng>(
    theta: Configuration,
    space: &ParameterSpace,
    rng: &mut R,
) -> Proposal {
    let up = rng.gen_bool(0.5);
    let z = theta.z();
    if up {
        if z + 1 > space.size() {
            Proposal::OutOfBounds
        } else {
            Proposal::InBounds(space.config(z + 1).expect("in range"))
        }
    } else if z == 1 {
        Proposal::OutOfBounds
    } else {
        Proposal::InBounds(space.config(z - 1).expect("in range"))
    }
}

/// Everything a single comparison needs besides the two configurations.
#[derive(Debug, Clone, Copy)]
pub struct EvalParams<'a> {
    pub instance: &'a ProblemInstance,
    pub init: InitScheme,
    pub kappa: u64,
    pub r: u32,
    /// PAR penalty factor for eval-T (capped runs charged `penalty * kappa`).
    pub penalty: f64,
}

/// eval-F per-run decision: `Some(true)` if `a` wins, `Some(false)` if `b`
/// wins, `None` for a draw.
fn fitness_run_winner(a: &RunRecord, b: &RunRecord) -> Option<bool> {
    if a.best_fitness != b.best_fitness {
        return Some(a.best_fitness > b.best_fitness);
    }
    if a.last_improvement_time != b.last_improvement_time {
        return Some(a.last_improvement_time < b.last_improvement_time);
    }
    None
}

fn capped_time(rec: &RunRecord, penalty: f64, kappa: u64) -> f64 {
    match rec.optimum_hit_time {
        Some(t) => t as f64,
        None => penalty * kappa as f64,
    }
}

fn overall_winner<R: Rng>(score_a: f64, score_b: f64, rng: &mut R) -> Winner {
    if score_a > score_b {
        Winner::A
    } else if score_b > score_a {
        Winner::B
    } else if rng.gen_bool(0.5) {
        Winner::CoinFlipA
    } else {
        Winner::CoinFlipB
    }
}

/// eval-F: r independent runs per arm; per-run winner has the higher
/// fitness, ties broken by the smaller last-improvement time, equal on both
/// counts as a draw for neither arm. Overall winner by win counts, overall
/// tie resolved by a fair coin from `rng`. `seed_fn(run, arm)` supplies the
/// run seeds (arm 0 = a, arm 1 = b).
pub fn eval_f<R: Rng>(
    a: Configuration,
    b: Configuration,
    ev: &EvalParams,
    seed_fn: impl Fn(u64, u64) -> u64,
    rng: &mut R,
) -> ComparisonOutcome {
    let mut wins_a = 0;
    let mut wins_b = 0;
    let mut draws = 0;
    let mut per_run = Vec::with_capacity(ev.r as usize);
    for run in 0..ev.r as u64 {
        let ra = run_ea(ev.instance, a, ev.init, ev.kappa, seed_fn(run, 0), None).record;
        let rb = run_ea(ev.instance, b, ev.init, ev.kappa, seed_fn(run, 1), None).record;
        match fitness_run_winner(&ra, &rb) {
            Some(true) => wins_a += 1,
            Some(false) => wins_b += 1,
            None => draws += 1,
        }
        per_run.push((ra, rb));
    }
    let winner = overall_winner(wins_a as f64, wins_b as f64, rng);
    ComparisonOutcome {
        wins_a,
        wins_b,
        draws,
        winner,
        per_run,
    }
}

/// eval-T: each arm's score is the sum over r runs of the optimum-hit time,
/// with capped runs charged `penalty * kappa`; the smaller total wins and
/// equal totals are resolved by a fair coin. Win/draw counters record the
/// per-run capped-time comparisons for reporting; the winner is decided by
/// the totals alone.
pub fn eval_t<R: Rng>(
    a: Configuration,
    b: Configuration,
    ev: &EvalParams,
    seed_fn: impl Fn(u64, u64) -> u64,
    rng: &mut R,
) -> ComparisonOutcome {
    let mut wins_a = 0;
    let mut wins_b = 0;
    let mut draws = 0;
    let mut total_a = 0.0;
    let mut total_b = 0.0;
    let mut per_run = Vec::with_capacity(ev.r as usize);
    for run in 0..ev.r as u64 {
        let ra = run_ea(ev.instance, a, ev.init, ev.kappa, seed_fn(run, 0), None).record;
        let rb = run_ea(ev.instance, b, ev.init, ev.kappa, seed_fn(run, 1), None).record;
        let ta = capped_time(&ra, ev.penalty, ev.kappa);
        let tb = capped_time(&rb, ev.penalty, ev.kappa);
        total_a += ta;
        total_b += tb;
        if ta < tb {
            wins_a += 1;
        } else if tb < ta {
            wins_b += 1;
        } else {
            draws += 1;
        }
        per_run.push((ra, rb));
    }
    // smaller total is better, so negate for the shared helper
    let winner = overall_winner(-total_a, -total_b, rng);
    ComparisonOutcome {
        wins_a,
        wins_b,
        draws,
        winner,
        per_run,
    }
}

#[derive(Debug, Clone)]
pub struct TuningStep {
    pub proposal: Proposal,
    /// Absent for out-of-bounds proposals (no runs are executed).
    pub outcome: Option<ComparisonOutcome>,
    pub accepted: bool,
}

#[derive(Debug, Clone)]
pub struct TuningTrace {
    pub initial: Configuration,
    pub steps: Vec<TuningStep>,
    pub final_config: Configuration,
    pub comparisons_used: u64,
    /// Total evaluation budget `2 * T * kappa * r` (one instance).
    pub budget_evaluations: u64,
}

#[derive(Debug, Clone, Copy)]
pub struct TuningParams<'a> {
    pub space: ParameterSpace,
    pub metric: Metric,
    pub instance: &'a ProblemInstance,
    pub init: InitScheme,
    pub kappa: u64,
    pub r: u32,
    pub penalty: f64,
    pub max_comparisons: u64,
}

/// ParamRLS outer loop with a pluggable comparison: `eval(incumbent,
/// proposal, comparison_index, rng)` returns the outcome. Used directly by
/// tests that stub the evaluation; campaigns go through [`param_rls`].
pub fn param_rls_with<R, F>(
    space: &ParameterSpace,
    max_comparisons: u64,
    ctrl: &mut R,
    mut eval: F,
) -> TuningTrace
where
    R: Rng,
    F: FnMut(Configuration, Configuration, u64, &mut R) -> ComparisonOutcome,
{
    let z0 = ctrl.gen_range(1..=space.size());
    let initial = space.config(z0).expect("uniform draw is in range");
    let mut theta = initial;
    let mut steps = Vec::with_capacity(max_comparisons as usize);
    for comparison in 0..max_comparisons {
        let proposal = mutate_param(theta, space, ctrl);
        match proposal {
            Proposal::OutOfBounds => {
                // loses with probability 1: rejected, one comparison spent
                steps.push(TuningStep {
                    proposal,
                    outcome: None,
                    accepted: false,
                });
            }
            Proposal::InBounds(candidate) => {
                let outcome = eval(theta, candidate, comparison, ctrl);
                // incumbent is arm A, so the proposal wins as arm B
                let accepted = !outcome.winner.favours_a();
                if accepted {
                    theta = candidate;
                }
                steps.push(TuningStep {
                    proposal,
                    outcome: Some(outcome),
                    accepted,
                });
            }
        }
    }
    TuningTrace {
        initial,
        steps,
        final_config: theta,
        comparisons_used: max_comparisons,
        budget_evaluations: 0,
    }
}

/// One full ParamRLS campaign. All randomness derives from `(master,
/// campaign)`: the control stream drives initialisation, proposal coins and
/// tie-break coins, and each run's seed is fixed by its (comparison, run,
/// arm) indices, so results do not depend on scheduling.
pub fn param_rls(params: &TuningParams, master: u64, campaign: u64) -> TuningTrace {
    let mut ctrl = rng_from_seed(derive_seed(master, &[STREAM_CTRL, campaign]));
    let ev = EvalParams {
        instance: params.instance,
        init: params.init,
        kappa: params.kappa,
        r: params.r,
        penalty: params.penalty,
    };
    let metric = params.metric;
    let mut trace = param_rls_with(
        &params.space,
        params.max_comparisons,
        &mut ctrl,
        |incumbent, candidate, comparison, rng| {
            let ctx = SeedCtx {
                master,
                campaign,
                comparison,
            };
            let seed_fn = |run, arm| ctx.run_seed(run, arm);
            match metric {
                Metric::BestFitness => eval_f(incumbent, candidate, &ev, seed_fn, rng),
                Metric::OptTime => eval_t(incumbent, candidate, &ev, seed_fn, rng),
            }
        },
    );
    trace.budget_evaluations = 2 * params.max_comparisons * params.kappa * params.r as u64;
    trace
}

/// Reference distribution for the blindness test: ParamRLS where every
/// in-bounds comparison is decided by a fair coin (boundary proposals still
/// auto-rejected). Returns final-configuration counts indexed by `z - 1`.
pub fn blind_walk_oracle<R: Rng>(
    space: &ParameterSpace,
    max_comparisons: u64,
    n_samples: u64,
    rng: &mut R,
) -> Vec<u64> {
    let size = space.size();
    let mut counts = vec![0u64; size as usize];
    for _ in 0..n_samples {
        let mut z = rng.gen_range(1..=size);
        for _ in 0..max_comparisons {
            let up = rng.gen_bool(0.5);
            let cand = if up { z + 1 } else { z.wrapping_sub(1) };
            if cand >= 1 && cand <= size && rng.gen_bool(0.5) {
                z = cand;
            }
        }
        counts[(z - 1) as usize] += 1;
    }
    counts
}
