mod common;

use std::collections::HashMap;

use common::{all_masks, raw_dataset, Raw, SET_ORACLES};
use featsel_core::cutoff::{Cutoff, RankedScores};
use featsel_core::registry::{build_measure, Spec};
use featsel_core::search::{
    exhaustive_bfs, exhaustive_dfs, genetic_algorithm, las_vegas_wrapper, sbs, sfbs, sffs, sfs, tabu_search,
    GaConfig, HillClimbingConfig, LvwConfig, Search, TabuConfig,
};
use featsel_core::{read_csv, ColumnType, Dataset, FeatureMask, Measure, TaskKind};
use proptest::prelude::*;

fn measure(name: &str) -> Measure {
    build_measure(&Spec::named(name), TaskKind::Classification, 0).unwrap()
}

fn config() -> ProptestConfig {
    ProptestConfig {
        cases: 64,
        ..ProptestConfig::default()
    }
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn set_measures_match_naive_references(raw in raw_dataset(4, 25)) {
        let d = raw.dataset();
        for (name, oracle) in SET_ORACLES {
            let m = measure(name);
            for mask in all_masks(raw.n_features()) {
                let got = m.as_set().unwrap().evaluate(&d, &mask).unwrap();
                let want = oracle(&raw, &mask);
                prop_assert!((got - want).abs() < 1e-9, "{name} {mask}: {got} vs {want}");
            }
        }
    }

    #[test]
    fn chi_squared_matches_naive_reference(raw in raw_dataset(4, 25)) {
        let d = raw.dataset();
        let features: Vec<usize> = (0..raw.n_features()).collect();
        let got = measure("chiSquared").score_features(&d, &features).unwrap();
        for f in features {
            let want = common::chi_squared(&raw, f);
            prop_assert!((got[f] - want).abs() < 1e-9, "feature {f}: {} vs {want}", got[f]);
        }
    }

    #[test]
    fn monotone_measures_grow_with_the_subset(raw in raw_dataset(5, 30)) {
        let d = raw.dataset();
        let masks = all_masks(raw.n_features());
        for name in ["binaryConsistency", "IEConsistency", "roughsetConsistency", "mutualInformation"] {
            let m = measure(name);
            let values: HashMap<&FeatureMask, f64> = masks
                .iter()
                .map(|k| (k, m.as_set().unwrap().evaluate(&d, k).unwrap()))
                .collect();
            for s in &masks {
                for t in &masks {
                    if s.is_subset_of(t) {
                        prop_assert!(values[s] <= values[t], "{name}: m({s})={} > m({t})={}", values[s], values[t]);
                    }
                }
            }
        }
    }

    #[test]
    fn consistency_measures_agree_on_full_consistency(raw in raw_dataset(4, 25)) {
        let d = raw.dataset();
        let names = ["binaryConsistency", "IEConsistency", "IEPConsistency", "roughsetConsistency"];
        for mask in all_masks(raw.n_features()) {
            let ones: Vec<bool> = names
                .iter()
                .map(|n| measure(n).as_set().unwrap().evaluate(&d, &mask).unwrap() == 1.0)
                .collect();
            prop_assert!(ones.iter().all(|&b| b == ones[0]), "{mask}: {ones:?}");
        }
    }

    #[test]
    fn exhaustive_orders_match_brute_force(raw in raw_dataset(5, 25)) {
        let d = raw.dataset();
        let m = measure("giniIndex");
        let set = m.as_set().unwrap();
        let scored: Vec<(FeatureMask, f64)> = all_masks(raw.n_features())
            .into_iter()
            .map(|k| { let v = set.evaluate(&d, &k).unwrap(); (k, v) })
            .collect();
        let best = scored.iter().map(|(_, v)| *v).fold(f64::NEG_INFINITY, f64::max);
        let mut want: Vec<FeatureMask> = scored.iter().filter(|(_, v)| *v == best).map(|(k, _)| k.clone()).collect();
        want.sort();
        for r in [exhaustive_bfs(&d, set).unwrap(), exhaustive_dfs(&d, set).unwrap()] {
            let mut got = r.best_masks.clone();
            got.sort();
            prop_assert_eq!(r.best_value, best);
            prop_assert_eq!(got, want.clone());
        }
    }

    #[test]
    fn heuristics_never_beat_the_optimum_and_reevaluate_exactly(raw in raw_dataset(5, 25), seed in 0u64..1000) {
        let d = raw.dataset();
        let m = measure("mutualInformation");
        let set = m.as_set().unwrap();
        let optimum = exhaustive_bfs(&d, set).unwrap().best_value;
        let runs = [
            sfs(&d, set).unwrap(),
            sbs(&d, set).unwrap(),
            sffs(&d, set).unwrap(),
            sfbs(&d, set).unwrap(),
            tabu_search(&d, set, &TabuConfig { iter: 8, seed, ..Default::default() }).unwrap(),
            genetic_algorithm(&d, set, &GaConfig { pop_size: 6, max_iter: 4, seed, ..Default::default() }).unwrap(),
            las_vegas_wrapper(&d, set, &LvwConfig { max_stale_iter: 10, seed }).unwrap(),
            HillClimbingConfig { seed, ..Default::default() }.search(&d, set, None).unwrap(),
        ];
        for r in runs {
            prop_assert!(r.best_value <= optimum);
            for k in &r.best_masks {
                prop_assert_eq!(set.evaluate(&d, k).unwrap().to_bits(), r.best_value.to_bits());
            }
        }
    }

    #[test]
    fn floating_variants_do_not_lose_to_plain_ones(raw in raw_dataset(6, 30)) {
        let d = raw.dataset();
        for name in ["giniIndex", "mutualInformation", "IEConsistency"] {
            let m = measure(name);
            let set = m.as_set().unwrap();
            prop_assert!(sffs(&d, set).unwrap().best_value >= sfs(&d, set).unwrap().best_value, "{name} forward");
            prop_assert!(sfbs(&d, set).unwrap().best_value >= sbs(&d, set).unwrap().best_value, "{name} backward");
        }
    }

    #[test]
    fn hill_climbing_ends_in_a_local_optimum(raw in raw_dataset(5, 25), seed in 0u64..1000) {
        let d = raw.dataset();
        let m = measure("giniIndex");
        let set = m.as_set().unwrap();
        let r = HillClimbingConfig { seed, ..Default::default() }.search(&d, set, None).unwrap();
        let last = r.trace.last().unwrap();
        let (end, value) = (&last.masks[0], last.values[0]);
        for i in 0..end.width() {
            let n = end.flipped(i);
            if !n.is_empty() {
                prop_assert!(set.evaluate(&d, &n).unwrap() <= value);
            }
        }
    }

    #[test]
    fn tabu_moves_respect_the_list(raw in raw_dataset(5, 25), seed in 0u64..1000, size in 1usize..4) {
        let d = raw.dataset();
        let m = measure("giniIndex");
        let cfg = TabuConfig { iter: 12, tabu_size: size, seed, ..Default::default() };
        let r = tabu_search(&d, m.as_set().unwrap(), &cfg).unwrap();
        let mut list: Vec<FeatureMask> = Vec::new();
        let mut best = f64::NEG_INFINITY;
        let mut forced = false;
        let mut stage = String::new();
        for e in &r.trace {
            match e.label.as_str() {
                "forcedAcceptance" => forced = true,
                "bestNeighbor" => {
                    let (mask, v) = (&e.masks[0], e.values[0]);
                    let phase_start = e.stage != stage;
                    if !phase_start && list.contains(mask) {
                        prop_assert!(forced || v > best, "tabu move to {mask} without aspiration");
                    }
                    stage = e.stage.clone();
                    forced = false;
                    best = best.max(v);
                }
                "tabuList" => {
                    prop_assert!(e.masks.len() <= size);
                    list = e.masks.clone();
                }
                _ => {}
            }
        }
    }

    #[test]
    fn ga_keeps_shape_and_elite(raw in raw_dataset(5, 25), seed in 0u64..1000) {
        let d = raw.dataset();
        let m = measure("giniIndex");
        let cfg = GaConfig { pop_size: 8, max_iter: 6, elitism: 2, seed, ..Default::default() };
        let r = genetic_algorithm(&d, m.as_set().unwrap(), &cfg).unwrap();
        prop_assert_eq!(r.trace.len(), 6);
        let mut prev = f64::NEG_INFINITY;
        for e in &r.trace {
            prop_assert_eq!(e.masks.len(), 8);
            prop_assert!(e.masks.iter().all(|k| !k.is_empty()));
            let best = e.values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            prop_assert!(best >= prev);
            prev = best;
        }
    }

    #[test]
    fn lvw_incumbent_never_regresses(raw in raw_dataset(5, 25), seed in 0u64..1000) {
        let d = raw.dataset();
        let m = measure("IEConsistency");
        let r = las_vegas_wrapper(&d, m.as_set().unwrap(), &LvwConfig { max_stale_iter: 15, seed }).unwrap();
        let keys: Vec<(f64, i64)> = r.trace.iter().map(|e| (e.values[0], -(e.masks[0].count() as i64))).collect();
        prop_assert!(keys.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn searches_are_deterministic(raw in raw_dataset(5, 25), seed in 0u64..1000) {
        let d = raw.dataset();
        let m = measure("giniIndex");
        let set = m.as_set().unwrap();
        let ts = TabuConfig { iter: 6, seed, ..Default::default() };
        prop_assert_eq!(tabu_search(&d, set, &ts).unwrap(), tabu_search(&d, set, &ts).unwrap());
        let ga = GaConfig { pop_size: 6, max_iter: 3, seed, ..Default::default() };
        prop_assert_eq!(genetic_algorithm(&d, set, &ga).unwrap(), genetic_algorithm(&d, set, &ga).unwrap());
    }

    #[test]
    fn cutoff_algebra(scores in prop::collection::vec(-10.0f64..10.0, 1..12), a in -10.0f64..10.0, b in -10.0f64..10.0, s in 0.0f64..20.0) {
        let n = scores.len();
        let names = (0..n).map(|i| format!("f{i}")).collect();
        let r = RankedScores::new(names, &scores, true);
        let mut prev = FeatureMask::empty(n);
        for k in 1..=n {
            let m = Cutoff::KBest { k }.apply(&r).unwrap().mask;
            prop_assert!(prev.is_subset_of(&m));
            prop_assert_eq!(m.count(), k);
            prev = m;
        }
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let loose = Cutoff::Threshold { threshold: lo }.apply(&r).unwrap().mask;
        let tight = Cutoff::Threshold { threshold: hi }.apply(&r).unwrap().mask;
        prop_assert!(tight.is_subset_of(&loose));
        let slope = Cutoff::Slope { s_cut: s }.apply(&r).unwrap().mask;
        let diff = Cutoff::Difference { d_cut: s / n as f64 }.apply(&r).unwrap().mask;
        prop_assert_eq!(slope, diff);
    }

    #[test]
    fn csv_round_trip(raw in raw_dataset(4, 20)) {
        let d = raw.dataset();
        let mut buf = Vec::new();
        d.write_csv(&mut buf).unwrap();
        let hints: HashMap<String, ColumnType> = d.type_hints();
        let back: Dataset = read_csv(buf.as_slice(), "class", &hints).unwrap();
        prop_assert_eq!(back.n_rows(), d.n_rows());
        let mut again = Vec::new();
        back.write_csv(&mut again).unwrap();
        prop_assert_eq!(buf, again);
    }
}

/// A pattern group with classes (a,a,a,b) has pair consistency 1/2; adding
/// a feature that splits it into (a,a,b) + (a) lowers it to 1/3.
#[test]
fn pair_consistency_can_drop_when_features_are_added() {
    let raw = Raw {
        rows: vec![vec![0, 0], vec![0, 0], vec![0, 0], vec![0, 1]],
        class: vec![0, 0, 1, 0],
    };
    let d = raw.dataset();
    let m = measure("IEPConsistency");
    let small = m.as_set().unwrap().evaluate(&d, &FeatureMask::parse("10").unwrap()).unwrap();
    let large = m.as_set().unwrap().evaluate(&d, &FeatureMask::parse("11").unwrap()).unwrap();
    assert_eq!(small, 0.5);
    assert!((large - 1.0 / 3.0).abs() < 1e-12);
}
