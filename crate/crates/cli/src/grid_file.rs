//! Plain-text grid files:
//!
//! ```text
//! # dim=2 sizes=64,64 period=6.283185307179586,6.283185307179586
//! 0.12
//! ...
//! ```
//!
//! One value per line in row-major order (last axis fastest).

use std::fs;
use std::path::Path;

use frax_core::GridFunction;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

pub fn parse_grid(text: &str) -> Result<GridFunction, CliError> {
    let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
    let header = lines.next().ok_or_else(|| CliError::Grid("empty file".into()))?;
    let header = header
        .strip_prefix('#')
        .ok_or_else(|| CliError::Grid(format!("expected '# dim=...' header, got {header:?}")))?;

    let (mut dim, mut sizes, mut periods) = (None, None, None);
    for field in header.split_whitespace() {
        let (key, value) = field
            .split_once('=')
            .ok_or_else(|| CliError::Grid(format!("header field {field:?} is not key=value")))?;
        match key {
            "dim" => dim = Some(parse_list::<usize>(value, "dim")?),
            "sizes" => sizes = Some(parse_list::<usize>(value, "sizes")?),
            "period" => periods = Some(parse_list::<f64>(value, "period")?),
            other => return Err(CliError::Grid(format!("unknown header key {other:?}"))),
        }
    }
    let dim = match dim.as_deref() {
        Some([d]) => *d,
        _ => return Err(CliError::Grid("header needs a single dim".into())),
    };
    let sizes = sizes.ok_or_else(|| CliError::Grid("header lacks sizes".into()))?;
    let periods = periods.ok_or_else(|| CliError::Grid("header lacks period".into()))?;
    if sizes.len() != dim || periods.len() != dim {
        return Err(CliError::Grid(format!("dim={dim} but {} sizes and {} periods", sizes.len(), periods.len())));
    }

    let values = lines
        .filter(|l| !l.starts_with('#'))
        .map(|l| l.parse::<f64>().map_err(|e| CliError::Grid(format!("value {l:?}: {e}"))))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(GridFunction::new(sizes, periods, values)?)
}

fn parse_list<T: std::str::FromStr>(value: &str, key: &str) -> Result<Vec<T>, CliError>
where
    T::Err: std::fmt::Display,
{
    value
        .split(',')
        .map(|v| v.parse::<T>().map_err(|e| CliError::Grid(format!("{key}={value}: {e}"))))
        .collect()
}

fn join<T: ToString>(items: &[T]) -> String {
    items.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}

pub fn render_grid(f: &GridFunction) -> String {
    let mut out = format!("# dim={} sizes={} period={}\n", f.dim(), join(f.sizes()), join(f.periods()));
    for v in f.values() {
        out.push_str(&v.to_string());
        out.push('\n');
    }
    out
}

/// JSON mirror of the text format.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridDocument {
    pub dim: usize,
    pub sizes: Vec<usize>,
    pub period: Vec<f64>,
    pub values: Vec<f64>,
}

impl From<&GridFunction> for GridDocument {
    fn from(f: &GridFunction) -> Self {
        Self {
            dim: f.dim(),
            sizes: f.sizes().to_vec(),
            period: f.periods().to_vec(),
            values: f.values().to_vec(),
        }
    }
}

pub fn read_grid(path: &Path) -> Result<GridFunction, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    parse_grid(&text)
}

pub fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| CliError::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use frax_core::grid::sample;

    #[test]
    fn round_trip_is_exact() {
        let f = sample(|x| (x[0] * 3.0).sin() + x[1].cos() / 7.0, &[8, 16], &[1.5, 2.0]).unwrap();
        assert_eq!(parse_grid(&render_grid(&f)).unwrap(), f);
    }

    #[test]
    fn header_errors() {
        assert!(parse_grid("").is_err());
        assert!(parse_grid("dim=1 sizes=8 period=1\n").is_err());
        assert!(parse_grid("# dim=2 sizes=8 period=1\n").is_err());
        assert!(parse_grid("# dim=1 sizes=8 period=1 colour=red\n").is_err());
        let short = "# dim=1 sizes=8 period=1\n1\n2\n";
        assert!(matches!(parse_grid(short), Err(CliError::Core(_))));
    }
}
