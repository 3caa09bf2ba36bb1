use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{CountMatrix, DonutAggregate, Thresholds, Viewport};

// Field order here is the on-disk key order.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AggregateDoc {
    node_count: u64,
    contribution_total: u64,
    directed: bool,
    viewport: [f64; 4],
    length_min: Option<f64>,
    length_max: Option<f64>,
    thresholds: ThresholdsDoc,
    counts: CountsDoc,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ThresholdsDoc {
    near_max: f64,
    medium_max: f64,
}

#[derive(Serialize, Deserialize, Clone, Copy)]
#[serde(deny_unknown_fields)]
struct BucketsDoc {
    near: u64,
    medium: u64,
    far: u64,
}

impl From<[u64; 3]> for BucketsDoc {
    fn from([near, medium, far]: [u64; 3]) -> Self {
        Self { near, medium, far }
    }
}

impl From<BucketsDoc> for [u64; 3] {
    fn from(b: BucketsDoc) -> Self {
        [b.near, b.medium, b.far]
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
#[allow(non_snake_case)]
struct CountsDoc {
    N: BucketsDoc,
    NE: BucketsDoc,
    E: BucketsDoc,
    SE: BucketsDoc,
    S: BucketsDoc,
    SW: BucketsDoc,
    W: BucketsDoc,
    NW: BucketsDoc,
}

impl From<&CountMatrix> for CountsDoc {
    fn from(m: &CountMatrix) -> Self {
        let b = |i: usize| BucketsDoc::from(m[i]);
        Self {
            N: b(0),
            NE: b(1),
            E: b(2),
            SE: b(3),
            S: b(4),
            SW: b(5),
            W: b(6),
            NW: b(7),
        }
    }
}

impl From<CountsDoc> for CountMatrix {
    fn from(c: CountsDoc) -> Self {
        [c.N, c.NE, c.E, c.SE, c.S, c.SW, c.W, c.NW].map(Into::into)
    }
}

/// Compact, deterministic JSON for an aggregate.
pub fn write_aggregate(aggregate: &DonutAggregate) -> String {
    let doc = AggregateDoc {
        node_count: aggregate.node_count,
        contribution_total: aggregate.contribution_total,
        directed: aggregate.directed,
        viewport: aggregate.viewport.to_array(),
        length_min: aggregate.length_min,
        length_max: aggregate.length_max,
        thresholds: ThresholdsDoc {
            near_max: aggregate.thresholds.near_max(),
            medium_max: aggregate.thresholds.medium_max(),
        },
        counts: (&aggregate.counts).into(),
    };
    serde_json::to_string(&doc).expect("aggregate serialization cannot fail")
}

pub fn parse_aggregate(text: &str) -> Result<DonutAggregate> {
    let doc: AggregateDoc = serde_json::from_str(text)?;
    let [a, b, c, d] = doc.viewport;
    let aggregate = DonutAggregate {
        counts: doc.counts.into(),
        node_count: doc.node_count,
        contribution_total: doc.contribution_total,
        length_min: doc.length_min,
        length_max: doc.length_max,
        thresholds: Thresholds::new(doc.thresholds.near_max, doc.thresholds.medium_max)?,
        viewport: Viewport::new(a, b, c, d)?,
        directed: doc.directed,
    };
    if aggregate.cell_sum() != aggregate.contribution_total {
        return Err(Error::Json("counts do not sum to contribution_total".into()));
    }
    if aggregate.length_min.is_some() != aggregate.length_max.is_some() {
        return Err(Error::Json("length_min and length_max must both be present or both null".into()));
    }
    Ok(aggregate)
}
