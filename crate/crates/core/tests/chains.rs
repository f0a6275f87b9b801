//! Multi-step chains: stepwise application against fold-composition, and
//! chain layouts against input order.

use crossmap::transform::{apply, apply_chain};
use crossmap::viz::{self, LayoutPlan};
use crossmap::{build_crossmap, Crossmap, IndexedSeries, MultiStepChain};
use proptest::prelude::*;

/// One step from layer `from` to layer `to`: source `i` sends its mass to
/// the targets picked by `picks[i]` in equal shares.
fn step(from: &str, to: &str, n_src: usize, n_tgt: usize, picks: &[Vec<usize>]) -> Crossmap {
    let mut links = Vec::new();
    for (s, choice) in picks.iter().take(n_src).enumerate() {
        let mut targets: Vec<usize> = choice.iter().map(|c| c % n_tgt).collect();
        targets.sort();
        targets.dedup();
        let share = 1.0 / targets.len() as f64;
        for t in targets {
            links.push((format!("{from}{s}"), format!("{to}{t}"), share));
        }
    }
    build_crossmap(from, to, links).unwrap()
}

fn arb_chain() -> impl Strategy<Value = MultiStepChain> {
    (1usize..=8, 1usize..=8, 1usize..=8, 1usize..=8).prop_flat_map(|(n0, n1, n2, n3)| {
        let picks = |n: usize| prop::collection::vec(prop::collection::vec(0usize..64, 1..=3), n);
        (picks(n0), picks(n1), picks(n2)).prop_map(move |(p0, p1, p2)| {
            let a = step("a", "b", n0, n1, &p0);
            let b = step("b", "c", n1, n2, &p1);
            let c = step("c", "d", n2, n3, &p2);
            MultiStepChain::new(vec![a, b, c]).unwrap()
        })
    })
}

/// Pairwise crossing count between adjacent columns.
fn brute_crossings(plan: &LayoutPlan) -> usize {
    let mut n = 0;
    for (i, a) in plan.edges.iter().enumerate() {
        for b in &plan.edges[i + 1..] {
            if a.from.0 != b.from.0 {
                continue;
            }
            let (u1, v1, u2, v2) = (a.from.1, a.to.1, b.from.1, b.to.1);
            if (u1 < u2 && v1 > v2) || (u1 > u2 && v1 < v2) {
                n += 1;
            }
        }
    }
    n
}

/// Crossings with every column in first-appearance order.
fn input_order_crossings(chain: &MultiStepChain) -> usize {
    let mut columns: Vec<Vec<String>> = vec![chain.steps()[0].sources().iter().map(|s| s.to_string()).collect()];
    for (i, step) in chain.steps().iter().enumerate() {
        let mut column: Vec<String> = step.targets().iter().map(|s| s.to_string()).collect();
        if let Some(next) = chain.steps().get(i + 1) {
            for s in next.sources() {
                if !column.iter().any(|c| c == s.as_str()) {
                    column.push(s.to_string());
                }
            }
        }
        columns.push(column);
    }
    let row = |col: &[String], label: &str| col.iter().position(|c| c == label).unwrap();
    let mut n = 0;
    for (i, step) in chain.steps().iter().enumerate() {
        let edges: Vec<(usize, usize)> = step
            .links()
            .iter()
            .map(|l| (row(&columns[i], l.from.as_str()), row(&columns[i + 1], l.to.as_str())))
            .collect();
        for (j, a) in edges.iter().enumerate() {
            for b in &edges[j + 1..] {
                if (a.0 < b.0 && a.1 > b.1) || (a.0 > b.0 && a.1 < b.1) {
                    n += 1;
                }
            }
        }
    }
    n
}

proptest! {
    #[test]
    fn chain_matches_composition(chain in arb_chain(), values in prop::collection::vec(-500.0f64..500.0, 8)) {
        let first = &chain.steps()[0];
        let data = IndexedSeries::new(
            "a",
            first.sources().iter().map(|s| s.as_str()).zip(values.iter().copied()),
        ).unwrap();
        let stepwise = apply_chain(&chain, &data).unwrap();
        let composed = apply(&chain.compose().unwrap(), &data, false).unwrap();
        let scale: f64 = values.iter().map(|v| v.abs()).sum::<f64>().max(1.0);
        for (key, v) in stepwise.iter() {
            let c = composed.get(key.as_str()).unwrap_or(0.0);
            prop_assert!((v - c).abs() <= 1e-9 * scale, "{}: {} vs {}", key, v, c);
        }
    }

    #[test]
    fn chain_layout_never_adds_crossings(chain in arb_chain(), sweeps in 1usize..6) {
        let plan = viz::layout_chain(&chain, sweeps);
        prop_assert_eq!(plan.columns.len(), 4);
        prop_assert_eq!(plan.crossings(), brute_crossings(&plan));
        prop_assert!(brute_crossings(&plan) <= input_order_crossings(&chain));
        prop_assert_eq!(&plan, &viz::layout_chain(&chain, sweeps));
    }
}

#[test]
fn composed_chain_keeps_taxonomy_names() {
    let a = build_crossmap("anzsco", "isco", [("111111", "1112", 0.5), ("111111", "1114", 0.5)]).unwrap();
    let b = build_crossmap("isco", "major", [("1112", "1", 1.0), ("1114", "1", 1.0)]).unwrap();
    let chain = MultiStepChain::new(vec![a, b]).unwrap();
    assert_eq!(chain.taxonomies(), ["anzsco", "isco", "major"]);
    let composed = chain.compose().unwrap();
    assert_eq!(composed.source_taxonomy(), "anzsco");
    assert_eq!(composed.target_taxonomy(), "major");
    assert_eq!(composed.weight("111111", "1"), Some(1.0));
}
