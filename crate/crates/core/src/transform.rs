//! Applying crossmaps to data, and the algebra of crossmaps themselves.
//!
//! Applying a crossmap renames each source category to its targets,
//! multiplies the value by the link weight, and sums the products per target.
//! Every reduction walks links sorted by `(from, to)` and runs sequentially,
//! so results are bit-identical across runs.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::crossmap::{Crossmap, CrossmapError, Link};
use crate::label::CategoryLabel;
use crate::series::IndexedSeries;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TransformError {
    #[error("taxonomy mismatch: expected {expected:?}, found {found:?}")]
    TaxonomyMismatch { expected: String, found: String },
    #[error("category {0} has no outgoing link; its value would be lost")]
    MissingSourceMapping(CategoryLabel),
    #[error("intermediate category {0} is not a source of the next crossmap")]
    UncoveredIntermediate(CategoryLabel),
    #[error("crossmap is not invertible: {0}")]
    NotBijective(NotBijective),
    #[error("a chain needs at least one crossmap")]
    EmptyChain,
    #[error("nothing to harmonise")]
    EmptyHarmonisation,
    #[error("duplicate unit {0:?}")]
    DuplicateUnit(String),
    #[error("unit {unit:?} maps to {found:?}, other units map to {expected:?}")]
    TargetTaxonomyMismatch {
        unit: String,
        expected: String,
        found: String,
    },
    #[error("unit {unit:?}: {error}")]
    Unit {
        unit: String,
        #[source]
        error: Box<TransformError>,
    },
    #[error(transparent)]
    Crossmap(#[from] CrossmapError),
}

/// The structural feature that prevents inversion.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NotBijective {
    #[error("source {0} splits into several targets")]
    Split(CategoryLabel),
    #[error("target {0} aggregates several sources")]
    Aggregate(CategoryLabel),
}

type Result<T> = std::result::Result<T, TransformError>;

/// Output of [`apply_with_report`].
#[derive(Debug, Clone, PartialEq)]
pub struct Transformed {
    pub series: IndexedSeries,
    /// Data categories with no outgoing link, in key order. Their mass is
    /// excluded from `series`. Always empty in strict mode.
    pub unmatched: Vec<CategoryLabel>,
}

/// Transforms `data` from the crossmap's source taxonomy into its target
/// taxonomy.
///
/// The output has an entry for every target category of `map`, zero when
/// nothing flows into it. Source categories missing from `data` contribute
/// zero. A data category the crossmap does not know is an error unless
/// `allow_unmatched` is set, in which case its value is dropped.
pub fn apply(map: &Crossmap, data: &IndexedSeries, allow_unmatched: bool) -> Result<IndexedSeries> {
    apply_with_report(map, data, allow_unmatched).map(|t| t.series)
}

/// Like [`apply`], also reporting which data categories were dropped.
pub fn apply_with_report(map: &Crossmap, data: &IndexedSeries, allow_unmatched: bool) -> Result<Transformed> {
    if data.taxonomy() != map.source_taxonomy() {
        return Err(TransformError::TaxonomyMismatch {
            expected: map.source_taxonomy().to_string(),
            found: data.taxonomy().to_string(),
        });
    }
    let unmatched: Vec<CategoryLabel> = data.keys().filter(|k| !map.has_source(k.as_str())).cloned().collect();
    if !allow_unmatched {
        if let Some(first) = unmatched.first() {
            return Err(TransformError::MissingSourceMapping(first.clone()));
        }
    }

    let mut out: BTreeMap<CategoryLabel, f64> = map.targets().iter().map(|t| (t.clone(), 0.0)).collect();
    for link in map.sorted_links() {
        if let Some(value) = data.get(link.from.as_str()) {
            *out.get_mut(&link.to).expect("target registered above") += link.weight * value;
        }
    }
    Ok(Transformed {
        series: IndexedSeries::from_map(map.target_taxonomy(), out),
        unmatched,
    })
}

/// Sequential composition: the crossmap equivalent to applying `first` and
/// then `second`.
///
/// The composed weight of `s -> u` is the sum over intermediate categories
/// `m` of `first(s -> m) * second(m -> u)`. Every target of `first` must be a
/// source of `second`; weights are never renormalised to hide a gap.
pub fn compose(first: &Crossmap, second: &Crossmap) -> Result<Crossmap> {
    if first.target_taxonomy() != second.source_taxonomy() {
        return Err(TransformError::TaxonomyMismatch {
            expected: first.target_taxonomy().to_string(),
            found: second.source_taxonomy().to_string(),
        });
    }
    check_coverage(first, second)?;

    let second_out = adjacency(second);
    let first_out = adjacency(first);
    let mut links = Vec::new();
    for source in first.sources() {
        let mut acc: BTreeMap<&CategoryLabel, f64> = BTreeMap::new();
        for a in &first_out[source] {
            for b in &second_out[&a.to] {
                *acc.entry(&b.to).or_insert(0.0) += a.weight * b.weight;
            }
        }
        for (to, weight) in acc {
            // A single composed link can exceed 1 by an ulp after summing
            // shares that add to exactly one.
            links.push(Link::new(source.clone(), to.clone(), weight.min(1.0)));
        }
    }
    Ok(Crossmap::new(first.source_taxonomy(), second.target_taxonomy(), links)?)
}

fn check_coverage(first: &Crossmap, second: &Crossmap) -> Result<()> {
    let mut uncovered: Vec<&CategoryLabel> = first
        .targets()
        .iter()
        .filter(|t| !second.has_source(t.as_str()))
        .collect();
    uncovered.sort();
    match uncovered.first() {
        Some(label) => Err(TransformError::UncoveredIntermediate((*label).clone())),
        None => Ok(()),
    }
}

/// Outgoing links per source, each list sorted by target.
fn adjacency(map: &Crossmap) -> BTreeMap<&CategoryLabel, Vec<&Link>> {
    let mut out: BTreeMap<&CategoryLabel, Vec<&Link>> = BTreeMap::new();
    for link in map.sorted_links() {
        out.entry(&link.from).or_default().push(link);
    }
    out
}

/// Reverses a one-to-one crossmap, swapping its taxonomies.
///
/// Only bijections can be inverted: split weights are shares of source mass
/// and say nothing about how a target's mass would flow back.
pub fn invert(map: &Crossmap) -> Result<Crossmap> {
    let mut sources: Vec<&CategoryLabel> = map.sources().iter().collect();
    sources.sort();
    if let Some(s) = sources.into_iter().find(|s| map.out_degree(s.as_str()) > 1) {
        return Err(TransformError::NotBijective(NotBijective::Split(s.clone())));
    }
    let mut targets: Vec<&CategoryLabel> = map.targets().iter().collect();
    targets.sort();
    if let Some(t) = targets.into_iter().find(|t| map.in_degree(t.as_str()) > 1) {
        return Err(TransformError::NotBijective(NotBijective::Aggregate(t.clone())));
    }
    let links = map
        .links()
        .iter()
        .map(|l| Link::new(l.to.clone(), l.from.clone(), l.weight))
        .collect();
    Ok(Crossmap::new(map.target_taxonomy(), map.source_taxonomy(), links)?)
}

/// A sequence of crossmaps through `k` taxonomy layers (`k - 1` steps).
///
/// Consecutive steps agree on the taxonomy between them, and every target of
/// one step is a source of the next, so no mass can get stranded mid-chain.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiStepChain {
    steps: Vec<Crossmap>,
}

impl MultiStepChain {
    pub fn new(steps: Vec<Crossmap>) -> Result<Self> {
        if steps.is_empty() {
            return Err(TransformError::EmptyChain);
        }
        for pair in steps.windows(2) {
            if pair[0].target_taxonomy() != pair[1].source_taxonomy() {
                return Err(TransformError::TaxonomyMismatch {
                    expected: pair[0].target_taxonomy().to_string(),
                    found: pair[1].source_taxonomy().to_string(),
                });
            }
            check_coverage(&pair[0], &pair[1])?;
        }
        Ok(Self { steps })
    }

    pub fn steps(&self) -> &[Crossmap] {
        &self.steps
    }

    /// Number of taxonomy layers, one more than the number of steps.
    pub fn layer_count(&self) -> usize {
        self.steps.len() + 1
    }

    /// Taxonomy names from the first source to the final target.
    pub fn taxonomies(&self) -> Vec<&str> {
        std::iter::once(self.steps[0].source_taxonomy())
            .chain(self.steps.iter().map(|s| s.target_taxonomy()))
            .collect()
    }

    /// Folds all steps into a single crossmap.
    pub fn compose(&self) -> Result<Crossmap> {
        let mut acc = self.steps[0].clone();
        for step in &self.steps[1..] {
            acc = compose(&acc, step)?;
        }
        Ok(acc)
    }
}

/// Applies every step of `chain` in turn, strictly.
pub fn apply_chain(chain: &MultiStepChain, data: &IndexedSeries) -> Result<IndexedSeries> {
    let mut current = apply(&chain.steps[0], data, false)?;
    for step in &chain.steps[1..] {
        current = apply(step, &current, false)?;
    }
    Ok(current)
}

/// One row of a long-format panel.
#[derive(Debug, Clone, PartialEq)]
pub struct PanelRow {
    pub unit: String,
    pub key: CategoryLabel,
    pub value: f64,
}

/// Several units' data expressed in one shared target taxonomy.
#[derive(Debug, Clone, PartialEq)]
pub struct HarmonisedPanel {
    pub target_taxonomy: String,
    pub rows: Vec<PanelRow>,
}

impl HarmonisedPanel {
    pub fn units(&self) -> Vec<&str> {
        let mut seen = BTreeSet::new();
        self.rows
            .iter()
            .map(|r| r.unit.as_str())
            .filter(|u| seen.insert(*u))
            .collect()
    }

    pub fn unit_total(&self, unit: &str) -> f64 {
        self.rows.iter().filter(|r| r.unit == unit).map(|r| r.value).sum()
    }
}

/// Transforms each unit's data with its own crossmap into a common target
/// taxonomy and stacks the results in long format.
///
/// Rows follow input unit order, then ascending key. Each transformation is
/// strict; failures are wrapped in [`TransformError::Unit`].
pub fn harmonise<'a, I>(inputs: I) -> Result<HarmonisedPanel>
where
    I: IntoIterator<Item = (&'a str, &'a Crossmap, &'a IndexedSeries)>,
{
    let mut target: Option<&str> = None;
    let mut units = BTreeSet::new();
    let mut rows = Vec::new();
    for (unit, map, data) in inputs {
        if !units.insert(unit) {
            return Err(TransformError::DuplicateUnit(unit.to_string()));
        }
        match target {
            None => target = Some(map.target_taxonomy()),
            Some(expected) if expected != map.target_taxonomy() => {
                return Err(TransformError::TargetTaxonomyMismatch {
                    unit: unit.to_string(),
                    expected: expected.to_string(),
                    found: map.target_taxonomy().to_string(),
                });
            }
            Some(_) => {}
        }
        let out = apply(map, data, false).map_err(|error| TransformError::Unit {
            unit: unit.to_string(),
            error: Box::new(error),
        })?;
        rows.extend(out.iter().map(|(key, value)| PanelRow {
            unit: unit.to_string(),
            key: key.clone(),
            value,
        }));
    }
    let target_taxonomy = target.ok_or(TransformError::EmptyHarmonisation)?.to_string();
    Ok(HarmonisedPanel { target_taxonomy, rows })
}

#[cfg(test)]
mod tests {
    use std::collections::HashMap;

    use proptest::prelude::*;

    use super::*;
    use crate::crossmap::build_crossmap;
    use crate::fixtures::{countries, identity};

    fn series(tax: &str, entries: &[(&str, f64)]) -> IndexedSeries {
        IndexedSeries::new(tax, entries.iter().copied()).unwrap()
    }

    fn countries_data() -> IndexedSeries {
        series(
            "ctry_old",
            &[("BLX", 10.0), ("E.GER", 5.0), ("W.GER", 7.0), ("AUS", 3.0)],
        )
    }

    /// Rename, multiply, group-sum over raw triples with a hash map.
    fn expand_group_sum(triples: &[(&str, &str, f64)], data: &[(&str, f64)]) -> HashMap<String, f64> {
        let mut expanded = Vec::new();
        for &(from, to, w) in triples {
            for &(key, value) in data {
                if key == from {
                    expanded.push((to.to_string(), w * value));
                }
            }
        }
        let mut out = HashMap::new();
        for (to, v) in expanded {
            *out.entry(to).or_insert(0.0) += v;
        }
        out
    }

    #[test]
    fn apply_countries_matches_oracle() {
        let triples = [
            ("BLX", "BEL", 0.5),
            ("BLX", "LUX", 0.5),
            ("E.GER", "DEU", 1.0),
            ("W.GER", "DEU", 1.0),
            ("AUS", "AUS", 1.0),
        ];
        let data = [("BLX", 10.0), ("E.GER", 5.0), ("W.GER", 7.0), ("AUS", 3.0)];
        let oracle = expand_group_sum(&triples, &data);
        assert_eq!(oracle["DEU"], 12.0);
        let out = apply(&countries(), &countries_data(), false).unwrap();
        assert_eq!(out.taxonomy(), "ctry_new");
        assert_eq!(out.len(), oracle.len());
        for (k, v) in out.iter() {
            assert_eq!(v, oracle[k.as_str()]);
        }
        assert_eq!(out.get("BEL"), Some(5.0));
        assert_eq!(out.get("LUX"), Some(5.0));
        assert_eq!(out.get("DEU"), Some(12.0));
        assert_eq!(out.get("AUS"), Some(3.0));
    }

    #[test]
    fn apply_identity() {
        let out = apply(&identity(), &series("a", &[("A", 42.0)]), false).unwrap();
        assert_eq!(out, series("a", &[("A", 42.0)]));
    }

    #[test]
    fn absent_sources_contribute_zero() {
        let map = build_crossmap("s", "t", [("A", "X", 0.5), ("A", "Y", 0.5), ("B", "X", 1.0)]).unwrap();
        let out = apply(&map, &series("s", &[("A", 2.0)]), false).unwrap();
        assert_eq!(out, series("t", &[("X", 1.0), ("Y", 1.0)]));
    }

    #[test]
    fn all_targets_present_even_when_zero() {
        let out = apply(&countries(), &series("ctry_old", &[("AUS", 3.0)]), false).unwrap();
        assert_eq!(out.len(), 4);
        assert_eq!(out.get("BEL"), Some(0.0));
    }

    #[test]
    fn strict_apply_rejects_unmatched() {
        let data = series("ctry_old", &[("AUS", 3.0), ("FRA", 1.0)]);
        let err = apply(&countries(), &data, false).unwrap_err();
        assert_eq!(
            err,
            TransformError::MissingSourceMapping(CategoryLabel::new("FRA").unwrap())
        );
        let report = apply_with_report(&countries(), &data, true).unwrap();
        assert_eq!(report.unmatched.len(), 1);
        assert_eq!(report.series.total(), 3.0);
    }

    #[test]
    fn apply_checks_taxonomy() {
        let err = apply(&countries(), &series("other", &[("AUS", 1.0)]), false).unwrap_err();
        assert!(matches!(err, TransformError::TaxonomyMismatch { .. }));
    }

    #[test]
    fn compose_identity_is_neutral() {
        let x = build_crossmap("a", "b", [("A", "P", 0.25), ("A", "Q", 0.75)]).unwrap();
        let composed = compose(&identity(), &x).unwrap();
        assert_eq!(composed, x);
    }

    #[test]
    fn compose_forced_by_product() {
        let a = build_crossmap("x", "y", [("A", "B", 1.0)]).unwrap();
        let b = build_crossmap("y", "z", [("B", "C", 0.5), ("B", "D", 0.5)]).unwrap();
        let c = compose(&a, &b).unwrap();
        assert_eq!(c, build_crossmap("x", "z", [("A", "C", 0.5), ("A", "D", 0.5)]).unwrap());
    }

    #[test]
    fn compose_errors() {
        let a = build_crossmap("x", "y", [("A", "B", 0.5), ("A", "E", 0.5)]).unwrap();
        let b = build_crossmap("y", "z", [("B", "C", 1.0)]).unwrap();
        assert_eq!(
            compose(&a, &b),
            Err(TransformError::UncoveredIntermediate(CategoryLabel::new("E").unwrap()))
        );
        let other = build_crossmap("w", "z", [("B", "C", 1.0)]).unwrap();
        assert!(matches!(
            compose(&a, &other),
            Err(TransformError::TaxonomyMismatch { .. })
        ));
    }

    #[test]
    fn compose_clamps_rounding_above_one() {
        let a = build_crossmap("x", "y", [("A", "P", 0.1), ("A", "Q", 0.2), ("A", "R", 0.7)]).unwrap();
        let b = build_crossmap("y", "z", [("P", "U", 1.0), ("Q", "U", 1.0), ("R", "U", 1.0)]).unwrap();
        let c = compose(&a, &b).unwrap();
        assert_eq!(c.links().len(), 1);
        assert!(c.links()[0].weight <= 1.0);
    }

    #[test]
    fn invert_iso_codes_iso() {
        let iso = build_crossmap(
            "ISO2",
            "ISO3",
            [
                ("AF", "AFG", 1.0),
                ("AL", "ALB", 1.0),
                ("DZ", "DZA", 1.0),
                ("AS", "ASM", 1.0),
                ("AD", "AND", 1.0),
            ],
        )
        .unwrap();
        let inv = invert(&iso).unwrap();
        assert_eq!(inv.source_taxonomy(), "ISO3");
        assert_eq!(inv.target_taxonomy(), "ISO2");
        assert_eq!(inv.weight("AFG", "AF"), Some(1.0));
        assert_eq!(inv.links().len(), 5);
        assert_eq!(invert(&inv).unwrap(), iso);
    }

    #[test]
    fn invert_rejects_countries() {
        assert_eq!(
            invert(&countries()),
            Err(TransformError::NotBijective(NotBijective::Split(
                CategoryLabel::new("BLX").unwrap()
            )))
        );
        let agg = build_crossmap("a", "b", [("E", "D", 1.0), ("W", "D", 1.0)]).unwrap();
        assert!(matches!(
            invert(&agg),
            Err(TransformError::NotBijective(NotBijective::Aggregate(_)))
        ));
        assert_eq!(invert(&identity()).unwrap().links(), identity().links());
    }

    #[test]
    fn chain_validation() {
        assert_eq!(MultiStepChain::new(vec![]), Err(TransformError::EmptyChain));
        let a = build_crossmap("x", "y", [("A", "B", 1.0)]).unwrap();
        let b = build_crossmap("q", "z", [("B", "C", 1.0)]).unwrap();
        assert!(matches!(
            MultiStepChain::new(vec![a.clone(), b]),
            Err(TransformError::TaxonomyMismatch { .. })
        ));
        let c = build_crossmap("y", "z", [("D", "C", 1.0)]).unwrap();
        assert!(matches!(
            MultiStepChain::new(vec![a, c]),
            Err(TransformError::UncoveredIntermediate(_))
        ));
    }

    #[test]
    fn chain_with_identity_tail() {
        let tail = build_crossmap(
            "ctry_new",
            "ctry_new",
            [
                ("BEL", "BEL", 1.0),
                ("LUX", "LUX", 1.0),
                ("DEU", "DEU", 1.0),
                ("AUS", "AUS", 1.0),
            ],
        )
        .unwrap();
        let chain = MultiStepChain::new(vec![countries(), tail]).unwrap();
        assert_eq!(chain.layer_count(), 3);
        let out = apply_chain(&chain, &countries_data()).unwrap();
        assert_eq!(
            out,
            series("ctry_new", &[("BEL", 5.0), ("LUX", 5.0), ("DEU", 12.0), ("AUS", 3.0)])
        );
        let single = MultiStepChain::new(vec![countries()]).unwrap();
        assert_eq!(
            apply_chain(&single, &countries_data()).unwrap(),
            apply(&countries(), &countries_data(), false).unwrap()
        );
    }

    #[test]
    fn harmonise_two_units() {
        let m1 = build_crossmap("s1", "T", [("A", "X", 1.0)]).unwrap();
        let m2 = build_crossmap("s2", "T", [("B", "X", 1.0)]).unwrap();
        let d1 = series("s1", &[("A", 2.0)]);
        let d2 = series("s2", &[("B", 3.0)]);
        let panel = harmonise([("u1", &m1, &d1), ("u2", &m2, &d2)]).unwrap();
        let rows: Vec<(&str, &str, f64)> = panel
            .rows
            .iter()
            .map(|r| (r.unit.as_str(), r.key.as_str(), r.value))
            .collect();
        assert_eq!(rows, [("u1", "X", 2.0), ("u2", "X", 3.0)]);
        assert_eq!(panel.units(), ["u1", "u2"]);
    }

    #[test]
    fn harmonise_single_unit_matches_apply() {
        let map = countries();
        let data = countries_data();
        let panel = harmonise([("AUS", &map, &data)]).unwrap();
        let expected = apply(&map, &data, false).unwrap();
        assert_eq!(panel.rows.len(), expected.len());
        for (row, (k, v)) in panel.rows.iter().zip(expected.iter()) {
            assert_eq!((&row.key, row.value), (k, v));
        }
        assert_eq!(panel.unit_total("AUS"), data.total());
    }

    #[test]
    fn harmonise_errors() {
        let m1 = build_crossmap("s1", "T", [("A", "X", 1.0)]).unwrap();
        let m2 = build_crossmap("s2", "U", [("B", "X", 1.0)]).unwrap();
        let d1 = series("s1", &[("A", 2.0)]);
        let d2 = series("s2", &[("B", 3.0)]);
        assert!(matches!(
            harmonise([("u1", &m1, &d1), ("u2", &m2, &d2)]),
            Err(TransformError::TargetTaxonomyMismatch { ref unit, .. }) if unit == "u2"
        ));
        assert_eq!(
            harmonise([("u1", &m1, &d1), ("u1", &m1, &d1)]),
            Err(TransformError::DuplicateUnit("u1".into()))
        );
        let bad = series("s1", &[("Z", 1.0)]);
        assert!(matches!(
            harmonise([("u1", &m1, &bad)]),
            Err(TransformError::Unit { ref unit, .. }) if unit == "u1"
        ));
        assert_eq!(harmonise([]), Err(TransformError::EmptyHarmonisation));
    }

    /// Random crossmap over `n_src` sources and `n_tgt` targets named with the
    /// given prefixes; each source picks 1..=3 targets with random positive shares.
    fn arb_map(src: &'static str, tgt: &'static str, n_src: usize, n_tgt: usize) -> impl Strategy<Value = Crossmap> {
        prop::collection::vec(
            (
                prop::collection::btree_set(0..n_tgt, 1..=n_tgt.min(3)),
                prop::collection::vec(1u32..10, 3),
            ),
            n_src,
        )
        .prop_map(move |rows| {
            let mut links = Vec::new();
            for (s, (targets, raw)) in rows.iter().enumerate() {
                let total: u32 = raw[..targets.len()].iter().sum();
                for (t, r) in targets.iter().zip(raw) {
                    links.push((
                        format!("{src}{s}"),
                        format!("{tgt}{t}"),
                        f64::from(*r) / f64::from(total),
                    ));
                }
            }
            build_crossmap(src, tgt, links).unwrap()
        })
    }

    fn full_cover(n_mid: usize) -> impl Strategy<Value = (Crossmap, Crossmap)> {
        (1usize..6, 1usize..6)
            .prop_flat_map(move |(n_src, n_out)| (arb_map("a", "m", n_src, n_mid), arb_map("m", "z", n_mid, n_out)))
    }

    fn close(a: f64, b: f64, rel: f64) -> bool {
        (a - b).abs() <= rel * a.abs().max(b.abs()).max(1.0)
    }

    proptest! {
        #[test]
        fn functor_law((a, b) in full_cover(4), values in prop::collection::vec(-100.0f64..100.0, 6)) {
            let data = IndexedSeries::new("a", a.sources().iter().map(|s| s.as_str()).zip(values.iter().copied())).unwrap();
            let composed = compose(&a, &b).unwrap();
            let direct = apply(&composed, &data, false).unwrap();
            let stepwise = apply(&b, &apply(&a, &data, false).unwrap(), false).unwrap();
            // Targets of `b` reachable only through intermediates `a` never
            // feeds show up as zeros in the stepwise result.
            for (k, v) in stepwise.iter() {
                prop_assert!(close(direct.get(k.as_str()).unwrap_or(0.0), v, 1e-9));
            }
            for (k, _) in direct.iter() {
                prop_assert!(stepwise.get(k.as_str()).is_some());
            }
        }

        #[test]
        fn compose_is_associative(
            a in arb_map("a", "b", 4, 3),
            b in arb_map("b", "c", 3, 3),
            c in arb_map("c", "d", 3, 4),
        ) {
            let left = compose(&compose(&a, &b).unwrap(), &c).unwrap();
            let right = compose(&a, &compose(&b, &c).unwrap()).unwrap();
            let mut lp: Vec<_> = left.links().iter().map(|l| (&l.from, &l.to)).collect();
            let mut rp: Vec<_> = right.links().iter().map(|l| (&l.from, &l.to)).collect();
            lp.sort();
            rp.sort();
            prop_assert_eq!(lp, rp);
            for l in left.links() {
                let r = right.weight(l.from.as_str(), l.to.as_str()).unwrap();
                prop_assert!((l.weight - r).abs() <= 1e-12);
            }
        }

        #[test]
        fn linearity(
            map in arb_map("s", "t", 5, 4),
            u in prop::collection::vec(-50.0f64..50.0, 5),
            v in prop::collection::vec(-50.0f64..50.0, 5),
            alpha in -3.0f64..3.0,
            beta in -3.0f64..3.0,
        ) {
            let keys: Vec<&str> = map.sources().iter().map(|s| s.as_str()).collect();
            let mk = |vals: Vec<f64>| IndexedSeries::new("s", keys.iter().copied().zip(vals)).unwrap();
            let combo = mk(u.iter().zip(&v).map(|(x, y)| alpha * x + beta * y).collect());
            let lhs = apply(&map, &combo, false).unwrap();
            let au = apply(&map, &mk(u.clone()), false).unwrap();
            let av = apply(&map, &mk(v.clone()), false).unwrap();
            for (((k, l), (_, x)), (_, y)) in lhs.iter().zip(au.iter()).zip(av.iter()) {
                let rhs = alpha * x + beta * y;
                prop_assert!(close(l, rhs, 1e-9), "{}: {} vs {}", k, l, rhs);
            }
        }

        #[test]
        fn invert_is_involution(n in 1usize..12, offset in 0usize..5) {
            let links: Vec<(String, String, f64)> =
                (0..n).map(|i| (format!("k{i}"), format!("v{}", (i + offset) % n), 1.0)).collect();
            let map = build_crossmap("p", "q", links).unwrap();
            prop_assert_eq!(invert(&invert(&map).unwrap()).unwrap(), map);
        }

        #[test]
        fn harmonise_preserves_unit_totals(
            m1 in arb_map("a", "t", 4, 3),
            m2 in arb_map("b", "t", 3, 3),
            values in prop::collection::vec(0.0f64..1000.0, 7),
        ) {
            let d1 = IndexedSeries::new("a", m1.sources().iter().map(|s| s.as_str()).zip(values[..4].iter().copied())).unwrap();
            let d2 = IndexedSeries::new("b", m2.sources().iter().map(|s| s.as_str()).zip(values[4..].iter().copied())).unwrap();
            let panel = harmonise([("one", &m1, &d1), ("two", &m2, &d2)]).unwrap();
            prop_assert!(close(panel.unit_total("one"), d1.total(), 1e-9));
            prop_assert!(close(panel.unit_total("two"), d2.total(), 1e-9));
        }
    }
}
