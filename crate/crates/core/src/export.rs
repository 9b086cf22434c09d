//! CSV schemas: row-per-sample feature tables and per-class edge lists.

use std::path::Path;

use ndarray::Array2;

use crate::error::{Error, Result};
use crate::netbuild::DistanceGraph;
use crate::types::{FeatureVector, Label};

/// Formats `x` with `digits` significant digits, like C's `%.{digits}g`.
pub fn format_significant(x: f64, digits: usize) -> String {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { "0".into() } else { x.to_string() };
    }
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -5 || exp >= digits as i32 {
        let mantissa = trim_zeros(mantissa);
        format!("{mantissa}e{}{:02}", if exp < 0 { '-' } else { '+' }, exp.abs())
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{:.*}", decimals, x)).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn write_bytes(path: &Path, bytes: &[u8]) -> Result<()> {
    std::fs::write(path, bytes).map_err(|e| Error::io(path, e))
}

/// Serializes a feature table: `sample_id`, the named features with six
/// decimals, then `label` as `1.0`/`0.0`. Rows are ordered by sample id.
pub fn features_csv(names: &[String], vectors: &[FeatureVector]) -> Result<Vec<u8>> {
    let mut sorted: Vec<&FeatureVector> = vectors.iter().collect();
    sorted.sort_by_key(|v| v.sample_id);

    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["sample_id".to_string()];
    header.extend(names.iter().cloned());
    header.push("label".into());
    w.write_record(&header)?;
    for v in sorted {
        if v.dim() != names.len() {
            return Err(Error::MixedDimensions {
                expected: names.len(),
                found: v.dim(),
            });
        }
        let mut row = Vec::with_capacity(names.len() + 2);
        row.push(v.sample_id.to_string());
        row.extend(v.values.iter().map(|x| format!("{x:.6}")));
        row.push(format!("{:.1}", v.label.as_f64()));
        w.write_record(&row)?;
    }
    w.into_inner()
        .map_err(|e| Error::io("<features csv>", e.into_error()))
}

pub fn export_features(names: &[String], vectors: &[FeatureVector], out: &Path) -> Result<Vec<u8>> {
    let bytes = features_csv(names, vectors)?;
    write_bytes(out, &bytes)?;
    Ok(bytes)
}

/// Parses a feature table written by [`features_csv`]. Returns the feature
/// names (without `sample_id` and `label`) and the vectors.
pub fn parse_features(data: &[u8]) -> Result<(Vec<String>, Vec<FeatureVector>)> {
    let mut rdr = csv::Reader::from_reader(data);
    let header = rdr.headers()?.clone();
    let n = header.len();
    if n < 2 || &header[0] != "sample_id" || &header[n - 1] != "label" {
        return Err(Error::MalformedRow {
            line: 1,
            reason: "feature table header must start with `sample_id` and end with `label`".into(),
        });
    }
    let names = header.iter().skip(1).take(n - 2).map(String::from).collect();
    let mut vectors = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        let line = rec.position().map_or(0, |p| p.line() as usize);
        let bad = |reason: String| Error::MalformedRow { line, reason };
        let sample_id = rec[0]
            .parse::<usize>()
            .map_err(|e| bad(format!("sample_id: {e}")))?;
        let values = (1..n - 1)
            .map(|k| rec[k].parse::<f64>().map_err(|e| bad(format!("column {k}: {e}"))))
            .collect::<Result<Vec<_>>>()?;
        let label = match &rec[n - 1] {
            "1" | "1.0" => Label::Positive,
            "0" | "0.0" => Label::Negative,
            other => {
                return Err(Error::InvalidLabel {
                    line,
                    value: other.into(),
                })
            }
        };
        vectors.push(FeatureVector::new(sample_id, label, values));
    }
    Ok((names, vectors))
}

pub fn read_features(path: &Path) -> Result<(Vec<String>, Vec<FeatureVector>)> {
    let data = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    parse_features(&data)
}

/// Edge list `src,dst,distance,kept`, one row per upper-triangle pair,
/// distances to nine significant digits.
pub fn edge_list_csv(g: &DistanceGraph) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["src", "dst", "distance", "kept"])?;
    for e in g.upper_edges() {
        w.write_record([
            e.src.to_string(),
            e.dst.to_string(),
            format_significant(e.distance, 9),
            u8::from(e.kept).to_string(),
        ])?;
    }
    w.into_inner()
        .map_err(|e| Error::io("<edge list>", e.into_error()))
}

pub fn export_edge_list(g: &DistanceGraph, out: &Path) -> Result<Vec<u8>> {
    let bytes = edge_list_csv(g)?;
    write_bytes(out, &bytes)?;
    Ok(bytes)
}

/// Rebuilds an adjacency matrix from an edge list. Node order is ascending
/// sample id; with `filtered`, edges marked `kept = 0` are zeroed.
pub fn read_edge_list(path: &Path, filtered: bool) -> Result<(Vec<usize>, Array2<f64>)> {
    let data = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    parse_edge_list(&data, filtered)
}

pub fn parse_edge_list(data: &[u8], filtered: bool) -> Result<(Vec<usize>, Array2<f64>)> {
    let mut rdr = csv::Reader::from_reader(data);
    let mut edges = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        let line = rec.position().map_or(0, |p| p.line() as usize);
        let bad = |reason: &str| Error::MalformedRow {
            line,
            reason: reason.into(),
        };
        if rec.len() != 4 {
            return Err(bad("expected src,dst,distance,kept"));
        }
        let src: usize = rec[0].parse().map_err(|_| bad("src"))?;
        let dst: usize = rec[1].parse().map_err(|_| bad("dst"))?;
        let d: f64 = rec[2].parse().map_err(|_| bad("distance"))?;
        let kept = match &rec[3] {
            "1" => true,
            "0" => false,
            _ => return Err(bad("kept must be 0 or 1")),
        };
        edges.push((src, dst, d, kept));
    }
    let mut nodes: Vec<usize> = edges.iter().flat_map(|e| [e.0, e.1]).collect();
    nodes.sort_unstable();
    nodes.dedup();
    let index = |id: usize| nodes.binary_search(&id).expect("node collected above");
    let mut m = Array2::zeros((nodes.len(), nodes.len()));
    for (src, dst, d, kept) in edges {
        if filtered && !kept {
            continue;
        }
        let (i, j) = (index(src), index(dst));
        m[[i, j]] = d;
        m[[j, i]] = d;
    }
    Ok((nodes, m))
}
