//! Straight-line reference implementation of the donut counting rules.
//!
//! Deliberately shares no code with `donut-core`: it works on plain tuples,
//! walks every node and edge with nested loops, and classifies angles by
//! testing each sector interval in turn. Test suites compare the production
//! aggregation against it cell for cell.

/// Sector names in serialization order.
pub const ORDER: [&str; 8] = ["N", "NE", "E", "SE", "S", "SW", "W", "NW"];

#[derive(Debug, Clone, Copy)]
pub struct Query {
    /// `[min_x, min_y, max_x, max_y]`
    pub bbox: [f64; 4],
    pub near_max: f64,
    pub medium_max: f64,
    pub self_loops: bool,
    pub directed: bool,
    /// lon/lat degrees with great-circle metres when true
    pub geographic: bool,
}

impl Query {
    pub fn new(bbox: [f64; 4], directed: bool) -> Self {
        Self {
            bbox,
            near_max: 0.35,
            medium_max: 0.60,
            self_loops: false,
            directed,
            geographic: false,
        }
    }
}

/// One counted edge end, before bucketing.
#[derive(Debug, Clone, PartialEq)]
pub struct Event {
    pub edge: usize,
    pub origin: usize,
    /// Name from [`ORDER`].
    pub sector: &'static str,
    pub length: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Donut {
    /// `counts[i]` = `[near, medium, far]` for `ORDER[i]`.
    pub counts: [[u64; 3]; 8],
    pub node_count: u64,
    pub total: u64,
    pub length_min: Option<f64>,
    pub length_max: Option<f64>,
    /// Bucket index (0 near, 1 medium, 2 far) of every event, in event order.
    pub buckets: Vec<usize>,
    pub events: Vec<Event>,
}

fn visible(bbox: &[f64; 4], p: (f64, f64)) -> bool {
    p.0 >= bbox[0] && p.0 <= bbox[2] && p.1 >= bbox[1] && p.1 <= bbox[3]
}

/// Sector name for `p` seen from `c`.
pub fn sector(p: (f64, f64), c: (f64, f64)) -> &'static str {
    let dx = p.0 - c.0;
    let dy = p.1 - c.1;
    if dx == 0.0 && dy == 0.0 {
        return "E";
    }
    let mut deg = dy.atan2(dx).to_degrees();
    while deg < 0.0 {
        deg += 360.0;
    }
    while deg >= 360.0 {
        deg -= 360.0;
    }
    // counter-clockwise from east, each centered on a multiple of 45 degrees
    let ccw = ["E", "NE", "N", "NW", "W", "SW", "S", "SE"];
    for (k, name) in ccw.iter().enumerate() {
        let lo = 45.0 * k as f64 - 22.5;
        let hi = 45.0 * k as f64 + 22.5;
        if k == 0 {
            // wraps through zero: [337.5, 360) and [0, 22.5)
            if deg < hi || lo + 360.0 <= deg {
                return name;
            }
        } else if lo <= deg && deg < hi {
            return name;
        }
    }
    unreachable!("angle {deg} not covered")
}

pub fn length(a: (f64, f64), b: (f64, f64), geographic: bool) -> f64 {
    if geographic {
        let r = 6_371_008.8_f64;
        let to_rad = std::f64::consts::PI / 180.0;
        let (phi1, phi2) = (a.1 * to_rad, b.1 * to_rad);
        let dphi = phi2 - phi1;
        let dlambda = (b.0 - a.0) * to_rad;
        let h = (dphi / 2.0).sin() * (dphi / 2.0).sin()
            + phi1.cos() * phi2.cos() * (dlambda / 2.0).sin() * (dlambda / 2.0).sin();
        2.0 * r * h.sqrt().atan2((1.0 - h).max(0.0).sqrt())
    } else {
        ((b.0 - a.0) * (b.0 - a.0) + (b.1 - a.1) * (b.1 - a.1)).sqrt()
    }
}

pub fn donut(points: &[(f64, f64)], edges: &[(usize, usize)], q: &Query) -> Donut {
    let c = ((q.bbox[0] + q.bbox[2]) / 2.0, (q.bbox[1] + q.bbox[3]) / 2.0);

    let mut node_count = 0;
    for p in points {
        if visible(&q.bbox, *p) {
            node_count += 1;
        }
    }

    let mut events = Vec::new();
    for (i, &(u, v)) in edges.iter().enumerate() {
        let ends: Vec<usize> = if u == v {
            if q.self_loops {
                vec![u]
            } else {
                vec![]
            }
        } else if q.directed {
            vec![u]
        } else {
            vec![u, v]
        };
        for o in ends {
            if visible(&q.bbox, points[o]) {
                events.push(Event {
                    edge: i,
                    origin: o,
                    sector: sector(points[o], c),
                    length: length(points[u], points[v], q.geographic),
                });
            }
        }
    }

    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for e in &events {
        if e.length < lo {
            lo = e.length;
        }
        if e.length > hi {
            hi = e.length;
        }
    }

    let mut counts = [[0u64; 3]; 8];
    let mut buckets = Vec::new();
    for e in &events {
        let norm = if hi > lo { (e.length - lo) / (hi - lo) } else { 0.0 };
        let b = if norm <= q.near_max {
            0
        } else if norm <= q.medium_max {
            1
        } else {
            2
        };
        let row = ORDER.iter().position(|s| *s == e.sector).unwrap();
        counts[row][b] += 1;
        buckets.push(b);
    }

    Donut {
        counts,
        node_count,
        total: events.len() as u64,
        length_min: if events.is_empty() { None } else { Some(lo) },
        length_max: if events.is_empty() { None } else { Some(hi) },
        buckets,
        events,
    }
}
