//! Human-readable fixture files in the expression grammar: the catalog
//! operators, the canonical maps and the obstruction candidates are
//! checked into the repository and re-validated against the programmatic
//! constructions at test time. The `solve` subcommand emits the same
//! format.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::exact::{parse_scalar, Context, Scalar};
use crate::tensor::TensorField11;

pub const CATALOG_FIXTURE: &str = include_str!("../fixtures/catalog.txt");
pub const MAPS_FIXTURE: &str = include_str!("../fixtures/maps.txt");
pub const OBSTRUCTION_FIXTURE: &str = include_str!("../fixtures/obstruction.txt");

/// Parsed content of one fixture file.
#[derive(Debug, Default)]
pub struct FixtureFile {
    pub ctx: Option<Context>,
    pub scalars: BTreeMap<String, Scalar>,
    pub tensors: BTreeMap<String, TensorField11>,
    /// `Q1, Q2, P1, P2`
    pub maps: BTreeMap<String, [Scalar; 4]>,
    /// `Q1, Q2`
    pub candidates: BTreeMap<String, [Scalar; 2]>,
}

impl FixtureFile {
    pub fn context(&self) -> Result<&Context> {
        self.ctx
            .as_ref()
            .ok_or_else(|| Error::Fixture("missing context line".into()))
    }
}

pub fn parse_fixture(input: &str) -> Result<FixtureFile> {
    let mut out = FixtureFile::default();
    let mut lines = input.lines().enumerate().peekable();
    let err = |n: usize, msg: &str| Error::Fixture(format!("line {}: {}", n + 1, msg));
    while let Some((n, raw)) = lines.next() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(rest) = line.strip_prefix("context ") {
            let names: Vec<&str> = rest.split_whitespace().collect();
            out.ctx = Some(Context::new(&names)?);
        } else if let Some(rest) = line.strip_prefix("scalar ") {
            let ctx = out.context()?.clone();
            let (name, expr) = rest
                .split_once('=')
                .ok_or_else(|| err(n, "expected `scalar name = expr`"))?;
            out.scalars
                .insert(name.trim().to_string(), parse_scalar(&ctx, expr)?);
        } else if let Some(name) = line.strip_prefix("tensor ") {
            let ctx = out.context()?.clone();
            let mut rows: Vec<Vec<Scalar>> = Vec::new();
            for (m, raw_row) in lines.by_ref() {
                let row_line = raw_row.trim();
                if row_line == "end" {
                    break;
                }
                let body = row_line
                    .strip_prefix("row ")
                    .ok_or_else(|| err(m, "expected `row ...` or `end`"))?;
                let cells: Result<Vec<Scalar>> =
                    body.split(',').map(|c| parse_scalar(&ctx, c)).collect();
                rows.push(cells?);
            }
            if rows.len() != 4 || rows.iter().any(|r| r.len() != 4) {
                return Err(err(n, "tensor must have four rows of four entries"));
            }
            out.tensors
                .insert(name.trim().to_string(), TensorField11::from_rows(&ctx, rows));
        } else if let Some(name) = line.strip_prefix("map ") {
            let ctx = out.context()?.clone();
            let mut entries: BTreeMap<String, Scalar> = BTreeMap::new();
            for (m, raw_row) in lines.by_ref() {
                let row_line = raw_row.trim();
                if row_line == "end" {
                    break;
                }
                let (key, expr) = row_line
                    .split_once('=')
                    .ok_or_else(|| err(m, "expected `Qi = expr` or `end`"))?;
                entries.insert(key.trim().to_string(), parse_scalar(&ctx, expr)?);
            }
            let get = |k: &str| {
                entries
                    .get(k)
                    .cloned()
                    .ok_or_else(|| err(n, &format!("map is missing `{k}`")))
            };
            out.maps.insert(
                name.trim().to_string(),
                [get("Q1")?, get("Q2")?, get("P1")?, get("P2")?],
            );
        } else if let Some(name) = line.strip_prefix("candidate ") {
            let ctx = out.context()?.clone();
            let mut entries: BTreeMap<String, Scalar> = BTreeMap::new();
            for (m, raw_row) in lines.by_ref() {
                let row_line = raw_row.trim();
                if row_line == "end" {
                    break;
                }
                let (key, expr) = row_line
                    .split_once('=')
                    .ok_or_else(|| err(m, "expected `Qi = expr` or `end`"))?;
                entries.insert(key.trim().to_string(), parse_scalar(&ctx, expr)?);
            }
            let get = |k: &str| {
                entries
                    .get(k)
                    .cloned()
                    .ok_or_else(|| err(n, &format!("candidate is missing `{k}`")))
            };
            out.candidates
                .insert(name.trim().to_string(), [get("Q1")?, get("Q2")?]);
        } else {
            return Err(err(n, &format!("unrecognized directive `{line}`")));
        }
    }
    Ok(out)
}

/// Render a tensor as a fixture block (used by the `solve` output).
pub fn render_tensor(name: &str, k: &TensorField11) -> String {
    let mut out = format!("tensor {name}\n");
    for row in k.rows() {
        let cells: Vec<String> = row.iter().map(|s| s.to_string()).collect();
        out.push_str(&format!("row {}\n", cells.join(", ")));
    }
    out.push_str("end\n");
    out
}

/// Render a context line.
pub fn render_context(ctx: &Context) -> String {
    format!("context {}\n", ctx.names().join(" "))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_all_shipped_fixtures() {
        let cat = parse_fixture(CATALOG_FIXTURE).unwrap();
        assert_eq!(cat.tensors.len(), 7);
        assert_eq!(cat.scalars.len(), 8);
        let maps = parse_fixture(MAPS_FIXTURE).unwrap();
        assert_eq!(maps.maps.len(), 5);
        let obs = parse_fixture(OBSTRUCTION_FIXTURE).unwrap();
        assert_eq!(obs.candidates.len(), 3);
    }

    #[test]
    fn render_roundtrip() {
        let cat = parse_fixture(CATALOG_FIXTURE).unwrap();
        let ctx = cat.context().unwrap();
        let k = cat.tensors.get("K_J2").unwrap();
        let rendered = format!("{}{}", render_context(ctx), render_tensor("K_J2", k));
        let back = parse_fixture(&rendered).unwrap();
        assert!(back.tensors.get("K_J2").unwrap().equals(k));
    }
}
