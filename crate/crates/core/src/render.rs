//! Deterministic SVG donut.
//!
//! Eight sectors, each split into three concentric wedges (near innermost,
//! far outermost), eight direction labels with North at the top, and the
//! node count in the hole. All 24 wedges are always emitted; empty ones use
//! the zero fill so an absent bucket is visible as such.

use std::f64::consts::PI;
use std::fmt::{self, Write};

use crate::model::{Direction, DistanceBucket, DonutAggregate};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Rgb(pub u8, pub u8, pub u8);

impl Rgb {
    pub const fn from_hex(v: u32) -> Self {
        Rgb((v >> 16) as u8, (v >> 8) as u8, v as u8)
    }

    /// Relative luminance (sRGB coefficients, no gamma).
    pub fn luminance(self) -> f64 {
        0.2126 * self.0 as f64 + 0.7152 * self.1 as f64 + 0.0722 * self.2 as f64
    }
}

impl fmt::Display for Rgb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{:02x}{:02x}{:02x}", self.0, self.1, self.2)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DonutStyle {
    /// Side length of the square image in pixels.
    pub size: u32,
    /// Outer radius of each band as a fraction of the chart radius; the near
    /// band starts at `hole_radius_frac`.
    pub hole_radius_frac: f64,
    pub near_outer_frac: f64,
    pub medium_outer_frac: f64,
    pub far_outer_frac: f64,
    pub zero_fill: Rgb,
    pub zero_stroke: Rgb,
    pub ramp_low: Rgb,
    pub ramp_high: Rgb,
    pub label_font_size: u32,
}

impl Default for DonutStyle {
    fn default() -> Self {
        Self {
            size: 512,
            hole_radius_frac: 0.20,
            near_outer_frac: 0.45,
            medium_outer_frac: 0.70,
            far_outer_frac: 0.95,
            zero_fill: Rgb::from_hex(0xffffff),
            zero_stroke: Rgb::from_hex(0xcccccc),
            ramp_low: Rgb::from_hex(0xc6dbef),
            ramp_high: Rgb::from_hex(0x08306b),
            label_font_size: 14,
        }
    }
}

impl DonutStyle {
    pub fn is_valid(&self) -> bool {
        self.size > 0
            && 0.0 < self.hole_radius_frac
            && self.hole_radius_frac < self.near_outer_frac
            && self.near_outer_frac < self.medium_outer_frac
            && self.medium_outer_frac < self.far_outer_frac
            && self.far_outer_frac <= 1.0
    }

    /// Inner and outer radius fractions of a bucket's band.
    pub fn band(&self, bucket: DistanceBucket) -> (f64, f64) {
        match bucket {
            DistanceBucket::Near => (self.hole_radius_frac, self.near_outer_frac),
            DistanceBucket::Medium => (self.near_outer_frac, self.medium_outer_frac),
            DistanceBucket::Far => (self.medium_outer_frac, self.far_outer_frac),
        }
    }

    fn center(&self) -> f64 {
        self.size as f64 / 2.0
    }

    /// Chart radius; leaves a margin outside the far band for the labels.
    fn chart_radius(&self) -> f64 {
        self.center() - 1.5 * self.label_font_size as f64
    }
}

/// Fill for a wedge holding `count` when the busiest wedge holds `max_count`.
///
/// Zero maps to the zero fill; otherwise each channel is interpolated
/// linearly from `ramp_low` towards `ramp_high` at `t = count / max_count`
/// and rounded half-up.
pub fn color_for(count: u64, max_count: u64, style: &DonutStyle) -> Rgb {
    if count == 0 || max_count == 0 {
        return style.zero_fill;
    }
    let t = (count as f64 / max_count as f64).min(1.0);
    let lerp = |lo: u8, hi: u8| {
        let v = lo as f64 + (hi as f64 - lo as f64) * t;
        (v + 0.5).floor().clamp(0.0, 255.0) as u8
    };
    let (lo, hi) = (style.ramp_low, style.ramp_high);
    Rgb(lerp(lo.0, hi.0), lerp(lo.1, hi.1), lerp(lo.2, hi.2))
}

struct Num(f64);

impl fmt::Display for Num {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = format!("{:.6}", self.0);
        match s.strip_prefix('-') {
            Some(rest) if rest.bytes().all(|b| b == b'0' || b == b'.') => f.write_str(rest),
            _ => f.write_str(&s),
        }
    }
}

/// Screen position of a point at `radius` and data-space `degrees`
/// (counter-clockwise from east, y up).
fn polar(style: &DonutStyle, radius: f64, degrees: f64) -> (Num, Num) {
    let a = degrees * PI / 180.0;
    let c = style.center();
    (Num(c + radius * a.cos()), Num(c - radius * a.sin()))
}

fn wedge_path(style: &DonutStyle, direction: Direction, bucket: DistanceBucket) -> String {
    let r = style.chart_radius();
    let (fi, fo) = style.band(bucket);
    let (ri, ro) = (fi * r, fo * r);
    let (a0, a1) = (direction.center_degrees() - 22.5, direction.center_degrees() + 22.5);
    let (ox0, oy0) = polar(style, ro, a0);
    let (ox1, oy1) = polar(style, ro, a1);
    let (ix1, iy1) = polar(style, ri, a1);
    let (ix0, iy0) = polar(style, ri, a0);
    // outer arc runs counter-clockwise on screen (sweep 0), inner arc back (sweep 1)
    format!(
        "M {ox0} {oy0} A {ro} {ro} 0 0 0 {ox1} {oy1} L {ix1} {iy1} A {ri} {ri} 0 0 1 {ix0} {iy0} Z",
        ro = Num(ro),
        ri = Num(ri),
    )
}

pub fn render_donut(aggregate: &DonutAggregate, style: &DonutStyle) -> String {
    let size = style.size;
    let max_count = aggregate.max_cell();
    let mut svg = String::with_capacity(8 * 1024);

    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{size}" height="{size}" viewBox="0 0 {size} {size}">"#
    );
    let _ = writeln!(svg, r##"<rect x="0" y="0" width="{size}" height="{size}" fill="#ffffff"/>"##);

    svg.push_str("<g id=\"wedges\">\n");
    for direction in Direction::ALL {
        for bucket in DistanceBucket::ALL {
            let count = aggregate.count(direction, bucket);
            let fill = color_for(count, max_count, style);
            let (stroke, width) = if count == 0 {
                (style.zero_stroke, "1")
            } else {
                (style.zero_fill, "0.5")
            };
            let _ = writeln!(
                svg,
                r#"<path d="{}" fill="{fill}" stroke="{stroke}" stroke-width="{width}" data-direction="{direction}" data-bucket="{bucket}" data-count="{count}"/>"#,
                wedge_path(style, direction, bucket),
            );
        }
    }
    svg.push_str("</g>\n");

    let font = style.label_font_size;
    let _ = writeln!(
        svg,
        r##"<g id="labels" font-family="sans-serif" font-size="{font}" fill="#333333" text-anchor="middle" dominant-baseline="central">"##
    );
    let label_radius = style.far_outer_frac * style.chart_radius() + font as f64;
    for direction in Direction::ALL {
        let (x, y) = polar(style, label_radius, direction.center_degrees());
        let _ = writeln!(svg, r#"<text x="{x}" y="{y}">{direction}</text>"#);
    }
    svg.push_str("</g>\n");

    let c = Num(style.center());
    let _ = writeln!(
        svg,
        r##"<text id="node-count" x="{c}" y="{c}" font-family="sans-serif" font-size="{}" font-weight="bold" fill="#08306b" text-anchor="middle" dominant-baseline="central">{}</text>"##,
        font * 2,
        aggregate.node_count
    );
    svg.push_str("</svg>\n");
    svg
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Thresholds, Viewport};

    fn empty() -> DonutAggregate {
        DonutAggregate::empty(Viewport::new(0.0, 0.0, 1.0, 1.0).unwrap(), Thresholds::default(), false)
    }

    #[test]
    fn color_examples() {
        let s = DonutStyle::default();
        assert_eq!(color_for(0, 5, &s), s.zero_fill);
        assert_eq!(color_for(5, 5, &s).to_string(), "#08306b");
        assert_eq!(color_for(1, 2, &s).to_string(), "#6786ad");
    }

    #[test]
    fn empty_donut() {
        let svg = render_donut(&empty(), &DonutStyle::default());
        assert_eq!(svg.matches("<path ").count(), 24);
        assert_eq!(svg.matches(r##"fill="#ffffff" stroke="#cccccc""##).count(), 24);
        assert_eq!(svg.matches("<text ").count(), 9);
        assert!(svg.contains(r#"dominant-baseline="central">0</text>"#));
    }

    #[test]
    fn north_renders_up_and_east_right() {
        let svg = render_donut(&empty(), &DonutStyle::default());
        let label = |d: &str| {
            let end = format!(">{d}</text>");
            let line = svg.lines().find(|l| l.ends_with(&end)).unwrap();
            let num = |key: &str| -> f64 {
                let start = line.find(key).unwrap() + key.len();
                line[start..].split('"').next().unwrap().parse().unwrap()
            };
            (num("x=\""), num("y=\""))
        };
        let (nx, ny) = label("N");
        assert!((nx - 256.0).abs() < 1e-6 && ny < 40.0);
        let (ex, ey) = label("E");
        assert!(ex > 470.0 && (ey - 256.0).abs() < 1e-6);
        let (_, sy) = label("S");
        assert!(sy > 470.0);
    }

    #[test]
    fn negative_zero_is_normalized() {
        assert_eq!(Num(-0.0).to_string(), "0.000000");
        assert_eq!(Num(-1e-9).to_string(), "0.000000");
        assert_eq!(Num(-1.5).to_string(), "-1.500000");
    }

    #[test]
    fn default_style_is_valid() {
        assert!(DonutStyle::default().is_valid());
        let bad = DonutStyle {
            near_outer_frac: 0.8,
            ..DonutStyle::default()
        };
        assert!(!bad.is_valid());
    }
}
