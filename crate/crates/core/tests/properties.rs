//! Randomised property tests for the run/record contracts and the
//! instance-class invariances.

use proptest::prelude::*;

use paramlab_core::ea::{run_ea, run_ea_reference, InitScheme, TraceSchedule};
use paramlab_core::params::ParameterSpace;
use paramlab_core::problems::{MaskSpec, ProblemInstance, ProblemKind};
use paramlab_core::seeding::rng_from_seed;
use paramlab_core::BitString;

fn any_kind() -> impl Strategy<Value = ProblemKind> {
    prop_oneof![Just(ProblemKind::Ridge), Just(ProblemKind::LeadingOnes)]
}

fn any_init() -> impl Strategy<Value = InitScheme> {
    prop_oneof![Just(InitScheme::AllZeros), Just(InitScheme::UniformRandom)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn run_records_satisfy_their_invariants(
        kind in any_kind(),
        init in any_init(),
        n in 4usize..64,
        z in 1u32..=30,
        kappa in 0u64..3000,
        seed in 0u64..1000,
        mask_seed in proptest::option::of(0u64..100),
    ) {
        let mask = match mask_seed {
            None => BitString::zeros(n),
            Some(s) => MaskSpec::Random { seed: s }.build(n).unwrap(),
        };
        let inst = ProblemInstance::new(kind, n, mask).unwrap();
        let cfg = ParameterSpace::new(10, 3).unwrap().config(z).unwrap();
        let out = run_ea(&inst, cfg, init, kappa, seed, None);
        let r = out.record;
        prop_assert!(r.last_improvement_time <= r.iterations_used);
        prop_assert!(r.iterations_used <= kappa);
        prop_assert!(r.best_fitness <= inst.optimum_fitness());
        match r.optimum_hit_time {
            Some(h) => {
                prop_assert_eq!(r.best_fitness, inst.optimum_fitness());
                prop_assert_eq!(h, r.last_improvement_time);
                prop_assert_eq!(h, r.iterations_used);
            }
            None => prop_assert!(r.best_fitness < inst.optimum_fitness()),
        }
        // identical inputs, identical outputs
        let again = run_ea(&inst, cfg, init, kappa, seed, None);
        prop_assert_eq!(r, again.record);
    }

    #[test]
    fn traced_fitness_is_monotone_and_bracketed_by_the_record(
        kind in any_kind(),
        n in 4usize..48,
        z in 1u32..=30,
        seed in 0u64..500,
    ) {
        let inst = ProblemInstance::canonical(kind, n);
        let cfg = ParameterSpace::new(10, 3).unwrap().config(z).unwrap();
        let kappa = 2000;
        let out = run_ea_reference(
            &inst,
            cfg,
            InitScheme::UniformRandom,
            kappa,
            seed,
            Some(&TraceSchedule { every: 100 }),
        );
        let mut prev = 0u64;
        for p in &out.samples {
            prop_assert!(p.fitness >= prev);
            prop_assert!(p.fitness <= out.record.best_fitness);
            prop_assert!(p.t % 100 == 0 && p.t <= kappa);
            prev = p.fitness;
        }
    }

    #[test]
    fn masked_evaluation_equals_canonical_on_unmasked_point(
        kind in any_kind(),
        n in 1usize..32,
        x_bits in proptest::collection::vec(any::<bool>(), 1..32),
        mask_seed in 0u64..1000,
    ) {
        let n = n.min(x_bits.len());
        let x = BitString::from_bits(x_bits[..n].iter().map(|&b| b as u8).collect());
        let mask = BitString::random(n, &mut rng_from_seed(mask_seed));
        let inst = ProblemInstance::new(kind, n, mask.clone()).unwrap();
        let canonical = ProblemInstance::canonical(kind, n);
        prop_assert_eq!(
            inst.evaluate(&x).unwrap(),
            canonical.evaluate(&x.xor(&mask)).unwrap()
        );
    }
}
