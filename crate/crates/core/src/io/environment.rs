use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::scan_sim::{Environment, Segment};
use crate::types::Point2;

/// Parses `wall x1 y1 x2 y2` lines; `#` starts a comment.
pub fn parse_environment(text: &str, name: &str) -> Result<Environment> {
    let mut walls = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |message: String| Error::Parse {
            path: Default::default(),
            line: idx + 1,
            message,
        };
        let mut tokens = line.split_whitespace();
        match tokens.next() {
            Some("wall") => {}
            Some(other) => return Err(err(format!("unknown directive `{other}`"))),
            None => unreachable!("line is non-empty"),
        }
        let coords: Vec<f64> = tokens
            .map(|t| {
                t.parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| err(format!("invalid coordinate `{t}`")))
            })
            .collect::<Result<_>>()?;
        if coords.len() != 4 {
            return Err(err(format!(
                "`wall` takes 4 coordinates, got {}",
                coords.len()
            )));
        }
        let seg = Segment::new(
            Point2::new(coords[0], coords[1]),
            Point2::new(coords[2], coords[3]),
        )
        .map_err(|e| err(e.to_string()))?;
        walls.push(seg);
    }
    Environment::new(name, walls)
}

pub fn format_environment(env: &Environment) -> String {
    let mut out = format!("# environment: {}\n", env.name());
    for w in env.walls() {
        let (a, b) = (w.a(), w.b());
        let _ = writeln!(out, "wall {} {} {} {}", a.x, a.y, b.x, b.y);
    }
    out
}

/// Loads an environment file; the file stem becomes its name.
pub fn load_environment(path: impl AsRef<Path>) -> Result<Environment> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    parse_environment(&text, &name).map_err(|e| match e {
        Error::Parse { line, message, .. } => Error::Parse {
            path: path.to_path_buf(),
            line,
            message,
        },
        other => other,
    })
}

pub fn save_environment(env: &Environment, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, format_environment(env)).map_err(|e| Error::io(path, e))
}
