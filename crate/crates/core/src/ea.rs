//! The (1+1) EA with standard bit mutation at rate `chi/n`, run under a
//! cutoff with the bookkeeping both comparison metrics need.
//!
//! Iteration counting: the initial evaluation is iteration 0 and does not
//! consume the cutoff; each mutate+select step consumes 1. The recorded
//! last-improvement time counts only strict fitness increases; accepted
//! equal-fitness moves do not update it. After the optimum is hit the run
//! performs no further iterations.
//!
//! Two engines produce identical `RunRecord` distributions:
//!
//! * [`run_ea_reference`] executes every iteration on an explicit bit string
//!   and works for any instance, mask and initialisation;
//! * an event-jump engine handles the two standard setups (Ridge from the
//!   all-zero string on the canonical mask, and LeadingOnes from a uniform
//!   start) by sampling the waiting time between strict improvements
//!   directly. On Ridge the current solution provably stays on the ridge, so
//!   acceptance depends only on the ridge position; on LeadingOnes with a
//!   uniform start the bits beyond the first zero remain uniformly
//!   distributed at all times, so an improvement gains 1 plus a fair-coin
//!   run of free riders. Both arguments are exact, not approximations, and
//!   the engines are cross-checked against the reference in tests.
//!
//! [`run_ea`] picks the event engine when it applies and the reference
//! engine otherwise; the choice depends only on the run's inputs, so
//! identical inputs always produce identical output.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::bitstring::BitString;
use crate::params::Configuration;
use crate::problems::{ProblemInstance, ProblemKind};
use crate::sampler::FlipSampler;
use crate::seeding::rng_from_seed;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitScheme {
    /// The Ridge default: start from the all-zero string.
    AllZeros,
    /// The LeadingOnes default: start from a uniform random string.
    UniformRandom,
}

/// Outcome of one capped run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunRecord {
    pub best_fitness: u64,
    /// Iteration index of the last strict improvement (0 if none).
    pub last_improvement_time: u64,
    pub optimum_hit_time: Option<u64>,
    pub iterations_used: u64,
    pub seed: u64,
}

/// Opt-in trajectory sampling: record fitness every `every` iterations.
#[derive(Debug, Clone, Copy)]
pub struct TraceSchedule {
    pub every: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TracePoint {
    pub t: u64,
    pub fitness: u64,
}

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub record: RunRecord,
    pub samples: Vec<TracePoint>,
}

/// Emits the checkpoints in `(*next_cp, upto]` at the current fitness.
struct Tracer {
    every: u64,
    next: u64,
    kappa: u64,
    samples: Vec<TracePoint>,
}

impl Tracer {
    fn new(trace: Option<&TraceSchedule>, kappa: u64) -> Self {
        let every = trace.map(|t| t.every).unwrap_or(0);
        Self {
            every,
            next: every,
            kappa,
            samples: Vec::new(),
        }
    }

    /// Record all checkpoints at times <= `upto` with fitness `fitness`.
    #[inline]
    fn advance(&mut self, upto: u64, fitness: u64) {
        if self.every == 0 {
            return;
        }
        while self.next <= upto && self.next <= self.kappa {
            self.samples.push(TracePoint {
                t: self.next,
                fitness,
            });
            self.next += self.every;
        }
    }
}

/// Runs the EA, choosing the fastest exact engine for the given setup.
pub fn run_ea(
    instance: &ProblemInstance,
    config: Configuration,
    init: InitScheme,
    kappa: u64,
    seed: u64,
    trace: Option<&TraceSchedule>,
) -> RunOutput {
    let chi = config.chi();
    let n = instance.n();
    assert!(chi > 0.0 && chi <= n as f64, "need 0 < chi <= n");
    match (instance.kind(), init) {
        (ProblemKind::Ridge, InitScheme::AllZeros)
            if instance.mask_is_zero() && chi < n as f64 / 2.0 =>
        {
            run_ridge_events(n, chi, kappa, seed, trace)
        }
        (ProblemKind::LeadingOnes, InitScheme::UniformRandom) => {
            run_lo_events(n, chi, kappa, seed, trace)
        }
        _ => run_ea_reference(instance, config, init, kappa, seed, trace),
    }
}

/// Step-by-step engine: explicit bit string, full evaluation each iteration.
pub fn run_ea_reference(
    instance: &ProblemInstance,
    config: Configuration,
    init: InitScheme,
    kappa: u64,
    seed: u64,
    trace: Option<&TraceSchedule>,
) -> RunOutput {
    let chi = config.chi();
    let n = instance.n();
    let mut rng = rng_from_seed(seed);
    let mut x = match init {
        InitScheme::AllZeros => BitString::zeros(n),
        InitScheme::UniformRandom => BitString::random(n, &mut rng),
    };
    let mut fitness = instance.evaluate(&x).expect("length fixed by construction");
    let optimum = instance.optimum_fitness();
    let sampler = FlipSampler::new(n, chi);
    let mut positions = Vec::new();
    let mut tracer = Tracer::new(trace, kappa);
    let mut last_improvement = 0u64;
    let mut hit = if fitness == optimum { Some(0) } else { None };
    let mut t = 0u64;
    while hit.is_none() && t < kappa {
        t += 1;
        let k = sampler.sample_flip_count(&mut rng);
        sampler.sample_positions(k, &mut rng, &mut positions);
        for &pos in &positions {
            x.flip(pos);
        }
        let candidate = instance.evaluate(&x).expect("length unchanged");
        if candidate >= fitness {
            if candidate > fitness {
                last_improvement = t;
                fitness = candidate;
            }
        } else {
            for &pos in &positions {
                x.flip(pos);
            }
        }
        tracer.advance(t, fitness);
        if fitness == optimum {
            hit = Some(t);
        }
    }
    tracer.advance(kappa, fitness);
    RunOutput {
        record: RunRecord {
            best_fitness: fitness,
            last_improvement_time: last_improvement,
            optimum_hit_time: hit,
            iterations_used: hit.unwrap_or(kappa),
            seed,
        },
        samples: tracer.samples,
    }
}

/// Waiting time (in iterations, >= 1) until an event of probability `p`.
#[inline]
fn geometric<R: Rng>(p: f64, rng: &mut R) -> f64 {
    debug_assert!(p > 0.0 && p < 1.0);
    let u: f64 = 1.0 - rng.gen::<f64>(); // (0, 1]
    (u.ln() / (-p).ln_1p()).ceil().max(1.0)
}

/// Event-jump engine for Ridge started at `0^n` on the canonical mask.
///
/// The current solution is always `1^i 0^(n-i)`: an offspring is accepted
/// iff its flips are a contiguous block starting at position `i` (or no
/// flips at all), so the state only changes on strict improvements. The
/// improvement probability from position `i` is
/// `sum_{h=1}^{n-i} q^h (1-q)^(n-h)` with `q = chi/n`, and the jump size is
/// geometric with ratio `q/(1-q)`, truncated at `n-i`.
fn run_ridge_events(
    n: usize,
    chi: f64,
    kappa: u64,
    seed: u64,
    trace: Option<&TraceSchedule>,
) -> RunOutput {
    let mut rng = rng_from_seed(seed);
    let q = chi / n as f64;
    let ratio = q / (1.0 - q);
    let base = (1.0 - q).powi(n as i32);
    let n_f = n as u64;
    let mut tracer = Tracer::new(trace, kappa);
    let mut i = 0usize;
    let mut t = 0u64;
    let mut last_improvement = 0u64;
    let mut hit = None;
    while i < n {
        let m = n - i;
        let norm = ratio * (1.0 - ratio.powi(m as i32)) / (1.0 - ratio);
        let p = base * norm;
        let g = geometric(p, &mut rng);
        if g > (kappa - t) as f64 {
            break;
        }
        let g = g as u64;
        tracer.advance(t + g - 1, n_f + i as u64);
        t += g;
        // jump size h in 1..=m with P(h) proportional to ratio^h
        let u: f64 = rng.gen();
        let mut h = 1usize;
        let mut term = ratio;
        let mut acc = term / norm;
        while u >= acc && h < m {
            term *= ratio;
            acc += term / norm;
            h += 1;
        }
        i += h;
        last_improvement = t;
        if i == n {
            hit = Some(t);
        }
        tracer.advance(t, n_f + i as u64);
    }
    tracer.advance(kappa, n_f + i as u64 + if i == n { n_f - i as u64 } else { 0 });
    let fitness = if i == n { 2 * n_f } else { n_f + i as u64 };
    RunOutput {
        record: RunRecord {
            best_fitness: fitness,
            last_improvement_time: last_improvement,
            optimum_hit_time: hit,
            iterations_used: hit.unwrap_or(kappa),
            seed,
        },
        samples: tracer.samples,
    }
}

/// Event-jump engine for LeadingOnes from a uniform start.
///
/// With a uniform initial string the bits beyond the first zero stay
/// uniformly distributed throughout the run (acceptance never looks at
/// them, and XOR with an independent flip set preserves uniformity), so the
/// run is fully described by the fitness `k`: an improvement occurs with
/// probability `(chi/n) * (1-chi/n)^k` per iteration and gains `1 +
/// Geometric(1/2)` levels, capped at the optimum.
fn run_lo_events(
    n: usize,
    chi: f64,
    kappa: u64,
    seed: u64,
    trace: Option<&TraceSchedule>,
) -> RunOutput {
    let mut rng = rng_from_seed(seed);
    let q = chi / n as f64;
    let mut tracer = Tracer::new(trace, kappa);
    let mut k = 0usize;
    while k < n && rng.gen_bool(0.5) {
        k += 1;
    }
    let mut t = 0u64;
    let mut last_improvement = 0u64;
    let mut hit = if k == n { Some(0) } else { None };
    while k < n {
        let p = q * (1.0 - q).powi(k as i32);
        let g = geometric(p, &mut rng);
        if g > (kappa - t) as f64 {
            break;
        }
        let g = g as u64;
        tracer.advance(t + g - 1, k as u64);
        t += g;
        k += 1;
        while k < n && rng.gen_bool(0.5) {
            k += 1;
        }
        last_improvement = t;
        if k == n {
            hit = Some(t);
        }
        tracer.advance(t, k as u64);
    }
    tracer.advance(kappa, k as u64);
    RunOutput {
        record: RunRecord {
            best_fitness: k as u64,
            last_improvement_time: last_improvement,
            optimum_hit_time: hit,
            iterations_used: hit.unwrap_or(kappa),
            seed,
        },
        samples: tracer.samples,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::ParameterSpace;
    use crate::problems::MaskSpec;

    fn cfg(z: u32, d: u32, phi: u32) -> Configuration {
        ParameterSpace::new(d, phi).unwrap().config(z).unwrap()
    }

    #[test]
    fn zero_cutoff_returns_initial_state() {
        let inst = ProblemInstance::canonical(ProblemKind::Ridge, 50);
        let out = run_ea(&inst, cfg(10, 10, 3), InitScheme::AllZeros, 0, 5, None);
        assert_eq!(out.record.best_fitness, 50);
        assert_eq!(out.record.last_improvement_time, 0);
        assert_eq!(out.record.optimum_hit_time, None);
        assert_eq!(out.record.iterations_used, 0);
    }

    #[test]
    fn identical_seeds_are_bit_identical() {
        let inst = ProblemInstance::canonical(ProblemKind::LeadingOnes, 80);
        let c = cfg(16, 10, 3);
        let a = run_ea(&inst, c, InitScheme::UniformRandom, 5000, 77, None);
        let b = run_ea(&inst, c, InitScheme::UniformRandom, 5000, 77, None);
        assert_eq!(a.record, b.record);
        assert_eq!(a.samples, b.samples);
    }

    #[test]
    fn reference_engine_is_elitist_and_consistent() {
        let inst = ProblemInstance::canonical(ProblemKind::LeadingOnes, 30);
        let c = cfg(15, 10, 3);
        let tr = TraceSchedule { every: 10 };
        for seed in 0..20 {
            let out = run_ea_reference(&inst, c, InitScheme::UniformRandom, 2000, seed, Some(&tr));
            let mut prev = 0;
            for p in &out.samples {
                assert!(p.fitness >= prev, "fitness must be non-decreasing");
                prev = p.fitness;
            }
            let r = out.record;
            assert!(r.last_improvement_time <= r.iterations_used);
            if let Some(h) = r.optimum_hit_time {
                assert_eq!(r.best_fitness, 30);
                assert_eq!(h, r.last_improvement_time);
            }
        }
    }

    #[test]
    fn engines_agree_in_distribution_on_ridge() {
        // mean optimum-hit time of the event engine vs the step-by-step
        // engine; n small enough for the reference to be cheap
        let n = 30;
        let inst = ProblemInstance::canonical(ProblemKind::Ridge, n);
        let c = cfg(10, 10, 3);
        let runs = 400;
        let mean = |f: &dyn Fn(u64) -> RunOutput| -> f64 {
            (0..runs)
                .map(|s| f(s).record.optimum_hit_time.unwrap() as f64)
                .sum::<f64>()
                / runs as f64
        };
        let fast = mean(&|s| run_ea(&inst, c, InitScheme::AllZeros, u64::MAX / 2, s, None));
        let slow =
            mean(&|s| run_ea_reference(&inst, c, InitScheme::AllZeros, u64::MAX / 2, s + 10_000, None));
        // expected hitting time is ~ e n^2 ~ 2450; allow generous sampling slack
        let rel = (fast - slow).abs() / slow;
        assert!(rel < 0.15, "event {fast} vs reference {slow}");
    }

    #[test]
    fn engines_agree_in_distribution_on_leading_ones() {
        let n = 30;
        let inst = ProblemInstance::canonical(ProblemKind::LeadingOnes, n);
        let c = cfg(16, 10, 3);
        let runs = 400;
        let mean_fast = (0..runs)
            .map(|s| {
                run_ea(&inst, c, InitScheme::UniformRandom, u64::MAX / 2, s, None)
                    .record
                    .optimum_hit_time
                    .unwrap() as f64
            })
            .sum::<f64>()
            / runs as f64;
        let mean_ref = (0..runs)
            .map(|s| {
                run_ea_reference(&inst, c, InitScheme::UniformRandom, u64::MAX / 2, s + 10_000, None)
                    .record
                    .optimum_hit_time
                    .unwrap() as f64
            })
            .sum::<f64>()
            / runs as f64;
        let rel = (mean_fast - mean_ref).abs() / mean_ref;
        assert!(rel < 0.15, "event {mean_fast} vs reference {mean_ref}");
    }

    #[test]
    fn masked_instances_use_the_reference_engine_correctly() {
        let n = 20;
        let mask = MaskSpec::Random { seed: 3 }.build(n).unwrap();
        let inst = ProblemInstance::new(ProblemKind::LeadingOnes, n, mask).unwrap();
        let c = cfg(10, 10, 3);
        let out = run_ea(&inst, c, InitScheme::AllZeros, 100_000, 9, None);
        assert!(out.record.optimum_hit_time.is_some());
        assert_eq!(out.record.best_fitness, n as u64);
    }

    #[test]
    fn ridge_improvement_frequency_peaks_at_chi_one() {
        // one-step improvement frequency from a ridge point is maximised at
        // chi = 1 across {0.5, 1.0, 1.5, 2.0}, matching argmax chi(1-chi/n)^(n-1)
        let n = 100;
        let inst = ProblemInstance::canonical(ProblemKind::Ridge, n);
        let space = ParameterSpace::new(2, 1).unwrap();
        let _ = space;
        let kappa = 3000u64;
        let freq = |z: u32| -> f64 {
            let c = cfg(z, 2, 2);
            (0..200u64)
                .map(|s| {
                    let r = run_ea(&inst, c, InitScheme::AllZeros, kappa, 1000 + s, None).record;
                    (r.best_fitness - n as u64) as f64
                })
                .sum::<f64>()
                / (200.0 * kappa as f64)
        };
        let f = [freq(1), freq(2), freq(3), freq(4)]; // chi = 0.5, 1.0, 1.5, 2.0
        let best = f
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .unwrap()
            .0;
        assert_eq!(best, 1, "improvement frequencies {f:?}");
    }
}
