use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::types::{Point2, PointCloud};

/// Cluster fill colors, cycled when there are more clusters than entries.
pub const PALETTE: [&str; 10] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
    "#bcbd22", "#17becf",
];

const PX_PER_M: f64 = 20.0;
const MARGIN_M: f64 = 1.0;
const TITLE_PX: f64 = 32.0;

/// Scatter plot of the clustered scan: one circle per point colored by
/// label, a 1 m grid, and a cross at the sensor origin.
pub fn svg_string(cloud: &PointCloud, labels: &[usize]) -> Result<String> {
    if labels.len() != cloud.len() {
        return Err(Error::param(
            "labels",
            format!("{} labels for {} points", labels.len(), cloud.len()),
        ));
    }

    // Bounds always include the sensor; snapped outward to whole meters.
    let (mut lo, mut hi) = (Point2::ORIGIN, Point2::ORIGIN);
    for p in cloud {
        lo = Point2::new(lo.x.min(p.x), lo.y.min(p.y));
        hi = Point2::new(hi.x.max(p.x), hi.y.max(p.y));
    }
    let min_x = (lo.x - MARGIN_M).floor();
    let min_y = (lo.y - MARGIN_M).floor();
    let max_x = (hi.x + MARGIN_M).ceil();
    let max_y = (hi.y + MARGIN_M).ceil();
    let width = (max_x - min_x) * PX_PER_M;
    let height = (max_y - min_y) * PX_PER_M + TITLE_PX;
    let to_px = |p: Point2| {
        (
            (p.x - min_x) * PX_PER_M,
            (max_y - p.y) * PX_PER_M + TITLE_PX,
        )
    };

    let mut distinct: Vec<usize> = labels.to_vec();
    distinct.sort_unstable();
    distinct.dedup();
    let k = distinct.len();

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {width:.0} {height:.0}" width="{width:.0}" height="{height:.0}">"#
    );
    let _ = writeln!(
        s,
        r#"<rect x="0" y="0" width="{width:.0}" height="{height:.0}" fill="white"/>"#
    );
    let _ = writeln!(
        s,
        r#"<text x="{:.1}" y="22" font-family="sans-serif" font-size="18" text-anchor="middle">{k} junctions</text>"#,
        width / 2.0
    );

    let _ = write!(
        s,
        r##"<path stroke="#e0e0e0" stroke-width="1" fill="none" d=""##
    );
    let mut gx = min_x;
    while gx <= max_x {
        let (x, _) = to_px(Point2::new(gx, 0.0));
        let _ = write!(s, "M{x:.1} {TITLE_PX:.1}V{height:.1}");
        gx += 1.0;
    }
    let mut gy = min_y;
    while gy <= max_y {
        let (_, y) = to_px(Point2::new(0.0, gy));
        let _ = write!(s, "M0 {y:.1}H{width:.1}");
        gy += 1.0;
    }
    s.push_str("\"/>\n");

    for (p, &l) in cloud.iter().zip(labels) {
        let (x, y) = to_px(*p);
        let rank = distinct.binary_search(&l).expect("label collected above");
        let _ = writeln!(
            s,
            r#"<circle cx="{x:.2}" cy="{y:.2}" r="2.5" fill="{}"/>"#,
            PALETTE[rank % PALETTE.len()]
        );
    }

    let (ox, oy) = to_px(Point2::ORIGIN);
    let _ = writeln!(
        s,
        r#"<path stroke="black" stroke-width="2" d="M{:.1} {oy:.1}H{:.1}M{ox:.1} {:.1}V{:.1}"/>"#,
        ox - 6.0,
        ox + 6.0,
        oy - 6.0,
        oy + 6.0
    );
    s.push_str("</svg>\n");
    Ok(s)
}

pub fn render_svg(cloud: &PointCloud, labels: &[usize], path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, svg_string(cloud, labels)?).map_err(|e| Error::io(path, e))
}
