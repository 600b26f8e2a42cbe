use guillotine_core::search::SharedIncumbent;
use guillotine_core::{restart_loop, Budget, Objective, WorkerConfig};
use guillotine_toolkit::generate::{random_first_cut, random_instance, variant_grid, RandomSpec};
use guillotine_toolkit::oracle::{
    brute_force_optimum, pattern_family_optimum, OracleCaps, OracleError,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn solver_and_both_oracles_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let caps = OracleCaps::default();
    let mut infeasible = 0;
    for _ in 0..15 {
        for objective in [Objective::Knapsack, Objective::BinPacking, Objective::StripPacking] {
            for variant in variant_grid(objective) {
                let variant = variant.with_first_cut(random_first_cut(&mut rng));
                let inst = random_instance(&mut rng, RandomSpec::default(), variant);
                let context = format!("{} {:?}", inst.variant().name(), inst.items());
                let brute = brute_force_optimum(&inst, caps);
                let dp = pattern_family_optimum(&inst, caps);
                let sink = SharedIncumbent::new(&inst);
                let config = WorkerConfig::new(inst.variant().guide, 2);
                let report = restart_loop(&inst, &config, 0, &Budget::unlimited(), &sink);
                assert!(report.certified, "{context}");
                match brute {
                    Ok(brute) => {
                        assert_eq!(Ok(brute.primary), dp, "{context}");
                        assert_eq!(sink.value().map(|v| v.primary), Some(brute.primary), "{context}");
                    }
                    Err(e) => {
                        // exact strips with fixed vertical first cuts may not fit side by side
                        assert_eq!(e, OracleError::Infeasible, "{context}");
                        assert_eq!(dp, Err(OracleError::Infeasible), "{context}");
                        assert_eq!(objective, Objective::StripPacking, "{context}");
                        assert!(sink.value().is_none(), "{context}");
                        infeasible += 1;
                    }
                }
            }
        }
    }
    assert!(infeasible < 40);
}
