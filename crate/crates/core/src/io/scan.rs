use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::types::{Point2, PointCloud};

/// On-disk scan layouts. Blank lines and lines starting with `#` are ignored
/// in both.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScanFileFormat {
    /// `x,y` in meters, sensor frame.
    XyCsv,
    /// `angle_deg,range_m`; a range of `inf` is a beam with no return.
    PolarCsv,
}

impl FromStr for ScanFileFormat {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "xy-csv" => Ok(ScanFileFormat::XyCsv),
            "polar-csv" => Ok(ScanFileFormat::PolarCsv),
            other => Err(format!(
                "unknown scan format `{other}` (expected xy-csv or polar-csv)"
            )),
        }
    }
}

impl std::fmt::Display for ScanFileFormat {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ScanFileFormat::XyCsv => "xy-csv",
            ScanFileFormat::PolarCsv => "polar-csv",
        })
    }
}

pub fn load_cloud(path: impl AsRef<Path>, format: ScanFileFormat) -> Result<PointCloud> {
    load_cloud_with_range(path, format, None)
}

/// Like [`load_cloud`]; in polar files, ranges at or beyond `max_range` are
/// treated as no-returns.
pub fn load_cloud_with_range(
    path: impl AsRef<Path>,
    format: ScanFileFormat,
    max_range: Option<f64>,
) -> Result<PointCloud> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let cloud = parse_cloud(&text, format, max_range).map_err(|e| match e {
        Error::Parse { line, message, .. } => Error::Parse {
            path: path.to_path_buf(),
            line,
            message,
        },
        other => other,
    })?;
    if cloud.is_empty() {
        return Err(Error::EmptyFile(path.to_path_buf()));
    }
    Ok(cloud)
}

/// Parses scan text. Errors carry 1-based line numbers and an empty path.
pub fn parse_cloud(
    text: &str,
    format: ScanFileFormat,
    max_range: Option<f64>,
) -> Result<PointCloud> {
    let mut points = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |message: String| Error::Parse {
            path: Default::default(),
            line: idx + 1,
            message,
        };
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != 2 {
            return Err(err(format!(
                "expected 2 comma-separated fields, found {}",
                fields.len()
            )));
        }
        match format {
            ScanFileFormat::XyCsv => {
                let x = parse_finite(fields[0]).map_err(&err)?;
                let y = parse_finite(fields[1]).map_err(&err)?;
                points.push(Point2::new(x, y));
            }
            ScanFileFormat::PolarCsv => {
                let angle = parse_finite(fields[0]).map_err(&err)?;
                let range: f64 = fields[1]
                    .parse()
                    .map_err(|_| err(format!("invalid range `{}`", fields[1])))?;
                if range.is_nan() || range < 0.0 {
                    return Err(err(format!(
                        "range must be non-negative, got `{}`",
                        fields[1]
                    )));
                }
                if range.is_infinite() || max_range.is_some_and(|m| range >= m) {
                    continue;
                }
                points.push(Point2::from_angle(angle.to_radians()) * range);
            }
        }
    }
    PointCloud::new(points)
}

fn parse_finite(field: &str) -> std::result::Result<f64, String> {
    match field.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(format!("invalid number `{field}`")),
    }
}

/// xy-csv text. Coordinates use the shortest representation that parses
/// back to the identical `f64`.
pub fn format_xy_csv(cloud: &PointCloud) -> String {
    let mut out = String::with_capacity(cloud.len() * 40);
    out.push_str("# x_m,y_m\n");
    for p in cloud {
        let _ = writeln!(out, "{},{}", p.x, p.y);
    }
    out
}

pub fn save_cloud(cloud: &PointCloud, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, format_xy_csv(cloud)).map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn xy_csv_two_points() {
        let c = parse_cloud("0,0\n1,0\n", ScanFileFormat::XyCsv, None).unwrap();
        assert_eq!(c.points(), &[Point2::new(0.0, 0.0), Point2::new(1.0, 0.0)]);
    }

    #[test]
    fn polar_conversion() {
        let c = parse_cloud("0,5.0\n90,5.0\n", ScanFileFormat::PolarCsv, None).unwrap();
        assert_eq!(c.len(), 2);
        assert_abs_diff_eq!(c.points()[0].x, 5.0, epsilon = 1e-9);
        assert_abs_diff_eq!(c.points()[0].y, 0.0, epsilon = 1e-9);
        assert_abs_diff_eq!(c.points()[1].x, 0.0, epsilon = 1e-9);
        assert_abs_diff_eq!(c.points()[1].y, 5.0, epsilon = 1e-9);
    }

    #[test]
    fn polar_no_returns_dropped() {
        let c = parse_cloud("0,inf\n90,5.0\n", ScanFileFormat::PolarCsv, None).unwrap();
        assert_eq!(c.len(), 1);
        let c = parse_cloud("0,15\n90,5.0\n", ScanFileFormat::PolarCsv, Some(15.0)).unwrap();
        assert_eq!(c.len(), 1);
    }

    #[test]
    fn parse_errors_report_line() {
        let err = parse_cloud("# header\n1,2\n3;4\n", ScanFileFormat::XyCsv, None).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err}");
        let err = parse_cloud("1,nan\n", ScanFileFormat::XyCsv, None).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
        let err = parse_cloud("0,-1\n", ScanFileFormat::PolarCsv, None).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
    }

    #[test]
    fn empty_and_missing_files() {
        let dir = tempfile::tempdir().unwrap();
        let empty = dir.path().join("empty.csv");
        fs::write(&empty, "# nothing\n").unwrap();
        assert!(matches!(
            load_cloud(&empty, ScanFileFormat::XyCsv),
            Err(Error::EmptyFile(_))
        ));
        let missing = dir.path().join("missing.csv");
        assert!(matches!(
            load_cloud(&missing, ScanFileFormat::XyCsv),
            Err(Error::Io { .. })
        ));
    }

    #[test]
    fn format_names() {
        assert_eq!(
            "polar-csv".parse::<ScanFileFormat>(),
            Ok(ScanFileFormat::PolarCsv)
        );
        assert_eq!(ScanFileFormat::XyCsv.to_string(), "xy-csv");
        assert!("xyz".parse::<ScanFileFormat>().is_err());
    }
}
