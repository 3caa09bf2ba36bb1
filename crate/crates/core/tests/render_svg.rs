use std::path::PathBuf;

use donut_core::aggregate::{aggregate_in, AggregationConfig};
use donut_core::model::DonutAggregate;
use donut_core::render::{color_for, render_donut, DonutStyle};
use donut_core::synth::{generate_clustered, ClusterSpec};
use donut_core::{Direction, DistanceBucket, Thresholds, Viewport};
use proptest::prelude::*;

fn golden_path() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden/clustered_seed42.svg")
}

fn clustered_42() -> DonutAggregate {
    let net = generate_clustered(&ClusterSpec::with_seed(42)).unwrap();
    aggregate_in(&net, None, &AggregationConfig::default()).unwrap()
}

/// Regenerate with `UPDATE_GOLDEN=1 cargo test -p donut-core --test render_svg`.
#[test]
fn clustered_seed42_matches_golden() {
    let svg = render_donut(&clustered_42(), &DonutStyle::default());
    let path = golden_path();
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, &svg).unwrap();
    }
    let golden = std::fs::read_to_string(&path).expect("golden file present");
    assert_eq!(svg, golden);
}

#[test]
fn two_node_donut_fills() {
    let mut a = DonutAggregate::empty(Viewport::new(-1.0, -1.0, 2.0, 1.0).unwrap(), Thresholds::default(), false);
    a.counts[Direction::E.index()][DistanceBucket::Near.index()] = 1;
    a.counts[Direction::W.index()][DistanceBucket::Near.index()] = 1;
    a.node_count = 2;
    a.contribution_total = 2;
    let svg = render_donut(&a, &DonutStyle::default());
    let doc = roxmltree::Document::parse(&svg).unwrap();
    let filled: Vec<_> = doc
        .descendants()
        .filter(|n| n.has_tag_name("path") && n.attribute("fill") != Some("#ffffff"))
        .map(|n| (n.attribute("data-direction").unwrap(), n.attribute("data-bucket").unwrap(), n.attribute("fill").unwrap()))
        .collect();
    assert_eq!(filled, vec![("E", "near", "#08306b"), ("W", "near", "#08306b")]);
    let center = doc.descendants().find(|n| n.attribute("id") == Some("node-count")).unwrap();
    assert_eq!(center.text(), Some("2"));
}

fn aggregate_strategy() -> impl Strategy<Value = DonutAggregate> {
    (prop::collection::vec(0u64..500, 24), 0u64..1000).prop_map(|(cells, nodes)| {
        let mut a = DonutAggregate::empty(Viewport::new(0.0, 0.0, 1.0, 1.0).unwrap(), Thresholds::default(), false);
        for (i, c) in cells.iter().enumerate() {
            a.counts[i / 3][i % 3] = *c;
        }
        a.contribution_total = cells.iter().sum();
        a.node_count = nodes;
        a
    })
}

proptest! {
    #[test]
    fn well_formed_and_stable(a in aggregate_strategy()) {
        let style = DonutStyle::default();
        let svg = render_donut(&a, &style);
        prop_assert_eq!(&svg, &render_donut(&a, &style));
        let doc = roxmltree::Document::parse(&svg).unwrap();
        prop_assert_eq!(doc.descendants().filter(|n| n.has_tag_name("path")).count(), 24);
        prop_assert_eq!(doc.descendants().filter(|n| n.has_tag_name("text")).count(), 9);
        // wedges in canonical order, near to far
        let order: Vec<_> = doc
            .descendants()
            .filter(|n| n.has_tag_name("path"))
            .map(|n| (n.attribute("data-direction").unwrap().to_string(), n.attribute("data-bucket").unwrap().to_string()))
            .collect();
        let expected: Vec<_> = Direction::ALL
            .iter()
            .flat_map(|d| DistanceBucket::ALL.iter().map(move |b| (d.label().to_string(), b.label().to_string())))
            .collect();
        prop_assert_eq!(order, expected);
    }

    #[test]
    fn darker_means_more(max in 1u64..=190, a in 1u64..=190, b in 1u64..=190) {
        prop_assume!(a <= max && b <= max && a != b);
        let style = DonutStyle::default();
        let (lo, hi) = (a.min(b), a.max(b));
        prop_assert!(color_for(lo, max, &style).luminance() > color_for(hi, max, &style).luminance());
    }
}
