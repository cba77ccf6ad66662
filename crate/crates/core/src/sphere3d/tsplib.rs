//! TSPLIB interchange for external TSP solvers: explicit full-matrix
//! problems and `.tour` files.

use std::fmt::Write as _;

use super::paths::PhantomMatrix;
use crate::error::{Error, Result};
use crate::tsp::SquareMatrix;

/// Radians are stored as integers in micro-radians.
pub const WEIGHT_SCALE: f64 = 1e6;

/// Renders a phantom instance as a TSPLIB problem. Node indices in the
/// COMMENT line are 1-based, as in TSPLIB tours.
pub fn write_problem(name: &str, instance: &PhantomMatrix) -> String {
    let m = &instance.matrix;
    let n = m.len();
    let mut s = String::new();
    let _ = writeln!(s, "NAME: {name}");
    let _ = writeln!(s, "TYPE: TSP");
    let _ = writeln!(
        s,
        "COMMENT: start={} phantom={} scale={}",
        instance.start_index + 1,
        instance.phantom_index + 1,
        WEIGHT_SCALE
    );
    let _ = writeln!(s, "DIMENSION: {n}");
    let _ = writeln!(s, "EDGE_WEIGHT_TYPE: EXPLICIT");
    let _ = writeln!(s, "EDGE_WEIGHT_FORMAT: FULL_MATRIX");
    let _ = writeln!(s, "EDGE_WEIGHT_SECTION");
    for i in 0..n {
        let row: Vec<String> = (0..n)
            .map(|j| format!("{}", (m.get(i, j) * WEIGHT_SCALE).round() as i64))
            .collect();
        let _ = writeln!(s, "{}", row.join(" "));
    }
    s.push_str("EOF\n");
    s
}

#[derive(Debug, Clone)]
pub struct TsplibProblem {
    pub name: String,
    pub comment: Option<String>,
    /// Integer weights as written in the file.
    pub weights: SquareMatrix,
}

impl TsplibProblem {
    /// `(start, phantom)` as 0-based indices, if recorded in the comment.
    pub fn phantom_nodes(&self) -> Option<(usize, usize)> {
        let c = self.comment.as_deref()?;
        let field = |key: &str| -> Option<usize> {
            c.split_whitespace()
                .find_map(|tok| tok.strip_prefix(key))
                .and_then(|v| v.parse::<usize>().ok())
                .and_then(|v| v.checked_sub(1))
        };
        Some((field("start=")?, field("phantom=")?))
    }
}

/// Parses an explicit FULL_MATRIX TSPLIB problem.
pub fn parse_problem(text: &str) -> Result<TsplibProblem> {
    let mut name = String::new();
    let mut comment = None;
    let mut dimension = None;
    let mut lines = text.lines();
    let mut in_weights = false;
    for line in lines.by_ref() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if line == "EDGE_WEIGHT_SECTION" {
            in_weights = true;
            break;
        }
        let (key, value) = line
            .split_once(':')
            .map(|(k, v)| (k.trim(), v.trim()))
            .ok_or_else(|| Error::Tsplib(format!("unexpected line {line:?}")))?;
        match key {
            "NAME" => name = value.to_string(),
            "COMMENT" => comment = Some(value.to_string()),
            "TYPE" if value != "TSP" => {
                return Err(Error::Tsplib(format!("unsupported TYPE {value}")))
            }
            "DIMENSION" => {
                dimension = Some(
                    value
                        .parse::<usize>()
                        .map_err(|_| Error::Tsplib(format!("bad DIMENSION {value:?}")))?,
                )
            }
            "EDGE_WEIGHT_TYPE" if value != "EXPLICIT" => {
                return Err(Error::Tsplib(format!("unsupported EDGE_WEIGHT_TYPE {value}")))
            }
            "EDGE_WEIGHT_FORMAT" if value != "FULL_MATRIX" => {
                return Err(Error::Tsplib(format!("unsupported EDGE_WEIGHT_FORMAT {value}")))
            }
            _ => {}
        }
    }
    if !in_weights {
        return Err(Error::Tsplib("missing EDGE_WEIGHT_SECTION".into()));
    }
    let n = dimension.ok_or_else(|| Error::Tsplib("missing DIMENSION".into()))?;
    let mut values = Vec::with_capacity(n * n);
    'outer: for line in lines {
        for tok in line.split_whitespace() {
            if tok == "EOF" {
                break 'outer;
            }
            if values.len() == n * n {
                break 'outer;
            }
            values.push(
                tok.parse::<f64>()
                    .map_err(|_| Error::Tsplib(format!("bad weight {tok:?}")))?,
            );
        }
    }
    if values.len() != n * n {
        return Err(Error::Tsplib(format!(
            "expected {} weights, found {}",
            n * n,
            values.len()
        )));
    }
    Ok(TsplibProblem {
        name,
        comment,
        weights: SquareMatrix::from_fn(n, |i, j| values[i * n + j]),
    })
}

/// Reads the TOUR_SECTION of a TSPLIB tour file into 0-based node indices.
pub fn parse_tour(text: &str) -> Result<Vec<usize>> {
    let mut tour = Vec::new();
    let mut in_section = false;
    for line in text.lines() {
        let line = line.trim();
        if !in_section {
            in_section = line == "TOUR_SECTION";
            continue;
        }
        for tok in line.split_whitespace() {
            if tok == "-1" || tok == "EOF" {
                return Ok(tour);
            }
            let v: usize = tok
                .parse()
                .map_err(|_| Error::Tsplib(format!("bad tour node {tok:?}")))?;
            if v == 0 {
                return Err(Error::Tsplib("tour nodes are 1-based".into()));
            }
            tour.push(v - 1);
        }
    }
    if !in_section {
        return Err(Error::Tsplib("missing TOUR_SECTION".into()));
    }
    Ok(tour)
}

/// Renders a tour (0-based) as a TSPLIB tour file.
pub fn write_tour(name: &str, tour: &[usize]) -> String {
    let mut s = format!("NAME: {name}\nTYPE: TOUR\nDIMENSION: {}\nTOUR_SECTION\n", tour.len());
    for v in tour {
        let _ = writeln!(s, "{}", v + 1);
    }
    s.push_str("-1\nEOF\n");
    s
}
