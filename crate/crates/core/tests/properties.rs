use num_bigint::BigUint;
use num_traits::One;
use proptest::prelude::*;

use permtab::clt::{run_mc, ExperimentConfig, Normalization, Source, Statistic};
use permtab::dist::{distribution_pgf, factorial, pgf_superfluous};
use permtab::growth::{
    apply_extension, extension_moves, extensions, last_move, parent, sample_uniform, SamplerConfig,
};
use permtab::poly::ExactPoly;
use permtab::tableau::{decode, validate, TableauStat};
use permtab::Tableau;

fn tableau(n: usize, seed: u64) -> Tableau {
    sample_uniform(SamplerConfig { n, seed })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn sampled_tableaux_are_valid(n in 1usize..40, seed in any::<u64>()) {
        let t = tableau(n, seed);
        prop_assert_eq!(t.length(), n);
        prop_assert!(validate(t.shape().row_lengths().to_vec(), t.rows().to_vec()).is_ok());
        let s = t.stats();
        prop_assert_eq!(s.total_ones, s.superfluous + s.columns);
        prop_assert!(s.unrestricted >= 1 && s.first_row_ones <= s.columns);
    }

    #[test]
    fn text_form_round_trips(n in 1usize..30, seed in any::<u64>()) {
        let t = tableau(n, seed);
        prop_assert_eq!(decode(&t.encode()).unwrap(), t.clone());
        prop_assert_eq!(t.to_string().parse::<Tableau>().unwrap(), t);
    }

    #[test]
    fn parent_inverts_every_extension(n in 1usize..12, seed in any::<u64>()) {
        let t = tableau(n, seed);
        let u = t.stats().unrestricted;
        let kids = extensions(&t);
        prop_assert_eq!(kids.len(), 1usize << u);
        for (child, mv) in kids.iter().zip(extension_moves(u)) {
            prop_assert_eq!(parent(child), Some(t.clone()));
            prop_assert_eq!(child.stats().unrestricted, mv.new_unrestricted(u));
            prop_assert_eq!(last_move(child), Some(mv.clone()));
            prop_assert_eq!(&apply_extension(&t, &mv).unwrap(), child);
        }
    }

    #[test]
    fn pgf_counts_sum_to_factorial(n in 1usize..40) {
        for stat in [TableauStat::Unrestricted, TableauStat::Rows, TableauStat::Superfluous] {
            let t = distribution_pgf(stat, n).unwrap();
            prop_assert_eq!(t.total(), &factorial(n));
        }
        let p: ExactPoly = pgf_superfluous(n).unwrap();
        prop_assert!(p.eval(&One::one()).is_one());
    }

    #[test]
    fn row_law_is_symmetric(n in 1usize..60) {
        let t = distribution_pgf(TableauStat::Rows, n).unwrap();
        for (v, c) in t.iter() {
            prop_assert_eq!(c, &t.get(n as u64 + 1 - v));
        }
        prop_assert!(t.get(0) == BigUint::default());
    }
}

#[test]
fn experiments_do_not_depend_on_thread_count() {
    let cfg = ExperimentConfig {
        statistic: Statistic::S,
        source: Source::Permutation,
        n: 200,
        trials: 10_000,
        seed: 3,
        normalization: Normalization::Exact,
    };
    let one = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap()
        .install(|| run_mc(&cfg).unwrap());
    let three = rayon::ThreadPoolBuilder::new()
        .num_threads(3)
        .build()
        .unwrap()
        .install(|| run_mc(&cfg).unwrap());
    assert_eq!(one, three);
}

#[test]
fn doubling_trials_keeps_the_mean() {
    let base = ExperimentConfig {
        statistic: Statistic::R,
        source: Source::TableauSampler,
        n: 100,
        trials: 20_000,
        seed: 8,
        normalization: Normalization::Exact,
    };
    let a = run_mc(&base).unwrap();
    let b = run_mc(&ExperimentConfig {
        trials: 40_000,
        ..base
    })
    .unwrap();
    assert!((a.mean - b.mean).abs() < 6.0 / (20_000f64).sqrt());
}
