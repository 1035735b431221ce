//! File formats: scans, environments, JSON reports and SVG plots.

mod environment;
mod report;
mod scan;
mod svg;

pub use environment::{format_environment, load_environment, parse_environment, save_environment};
pub use report::{read_report, report_to_json, write_report, ReportFile};
pub use scan::{
    format_xy_csv, load_cloud, load_cloud_with_range, parse_cloud, save_cloud, ScanFileFormat,
};
pub use svg::{render_svg, svg_string, PALETTE};
