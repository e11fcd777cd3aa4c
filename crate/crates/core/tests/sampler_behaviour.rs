mod common;

use std::ops::ControlFlow;

use esloo::baselines::lhs_maximin;
use esloo::benchfns::{BenchFunction, FunctionId};
use esloo::gp::min_pairwise_distance;
use esloo::sampler::{evaluate_design, run_adaptive, FnOracle, Sampler, SamplerConfig, Strategy};
use esloo::DesignSet;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn franke_init(n: usize, seed: u64) -> DesignSet {
    let f = BenchFunction::new(FunctionId::Franke);
    evaluate_design(&f, lhs_maximin(n, 2, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap()).unwrap()
}

fn additions(strategy: Strategy, seed: u64, budget: usize) -> Vec<Vec<f64>> {
    let f = BenchFunction::new(FunctionId::Franke);
    let state = run_adaptive(&f, franke_init(6, seed), SamplerConfig::new(strategy, budget).seed(seed)).unwrap();
    state.history.into_iter().map(|h| h.point).collect()
}

#[test]
fn steep_sigmoid_attracts_points() {
    let sigmoid = FnOracle::new(1, |x: &[f64]| 1.0 / (1.0 + (-40.0 * (x[0] - 0.5)).exp()));
    let init = evaluate_design(&sigmoid, vec![vec![0.05], vec![0.35], vec![0.65], vec![0.95]]).unwrap();
    let state = run_adaptive(&sigmoid, init, SamplerConfig::new(Strategy::EsLoo, 14).seed(4)).unwrap();
    let near = state.history.iter().filter(|h| (h.point[0] - 0.5).abs() < 0.2).count();
    assert!(2 * near > state.history.len(), "{near} of {} additions near the jump", state.history.len());
    common::check_interpolation(&state.main_model).unwrap();
}

#[test]
fn one_batch_of_five_is_spread_out() {
    let f = BenchFunction::new(FunctionId::Franke);
    let init = franke_init(6, 3);
    let mut sampler = Sampler::new(&f, init.clone(), SamplerConfig::new(Strategy::EsLoo, 11).batch_size(5).seed(9)).unwrap();
    let batch = sampler.propose_batch(5).unwrap();
    assert_eq!(batch.len(), 5);
    assert!(min_pairwise_distance(&batch) > 0.05, "{batch:?}");
    for x in &batch {
        assert!(init.nearest_within(x, 1e-6).is_none());
    }
}

#[test]
fn budget_is_met_exactly_for_both_batch_sizes() {
    let f = BenchFunction::new(FunctionId::Franke);
    for q in [1, 4] {
        let mut batches = Vec::new();
        let state = Sampler::new(&f, franke_init(6, 1), SamplerConfig::new(Strategy::EsLoo, 60).batch_size(q).seed(2))
            .unwrap()
            .run(|s| {
                batches.push(s.design.len());
                ControlFlow::Continue(())
            })
            .unwrap();
        assert_eq!(state.design.len(), 60);
        assert_eq!(state.history.len(), 54);
        let expected: Vec<usize> = if q == 1 {
            (6..=60).collect()
        } else {
            (0..=13).map(|k| 6 + 4 * k).chain([60]).collect()
        };
        assert_eq!(batches, expected);
        assert_eq!(min_pairwise_distance(&state.design.points().collect::<Vec<_>>()) > 0.0, true);
    }
}

#[test]
fn runs_are_deterministic() {
    let a = additions(Strategy::EsLoo, 5, 14);
    let b = additions(Strategy::EsLoo, 5, 14);
    let bits = |v: &Vec<Vec<f64>>| v.iter().flatten().map(|x| x.to_bits()).collect::<Vec<_>>();
    assert_eq!(bits(&a), bits(&b));
    assert_ne!(bits(&a), bits(&additions(Strategy::EsLoo, 6, 14)));
}

#[test]
fn pei_spreads_more_than_plain_ei() {
    let wins = (0..5)
        .filter(|&s| min_pairwise_distance(&additions(Strategy::EsLoo, s, 16)) > min_pairwise_distance(&additions(Strategy::EiOnly, s, 16)))
        .count();
    assert!(wins >= 3, "{wins}/5");
}

#[test]
fn repulsion_diversifies_eigf() {
    for s in 0..3 {
        let adds = additions(Strategy::EigfRf, s, 16);
        let init = franke_init(6, s);
        // repulsion vanishes at the design, so every pick keeps its distance
        let mut all: Vec<Vec<f64>> = init.points().map(<[f64]>::to_vec).collect();
        all.extend(adds);
        assert!(min_pairwise_distance(&all) > 1e-3);
    }
}
