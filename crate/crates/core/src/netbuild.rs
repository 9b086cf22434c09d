//! Per-class distance networks and median-threshold sparsification.

use ndarray::Array2;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::types::{FeatureVector, Label};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scaling {
    #[default]
    None,
    Zscore,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FilterMode {
    /// Keep edges whose distance is at most the median.
    #[default]
    KeepBelow,
    /// Keep edges whose distance is at least the median.
    KeepAbove,
}

/// Complete weighted graph over one class's samples, plus an edge mask.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceGraph {
    label: Label,
    nodes: Vec<usize>,
    weights: Array2<f64>,
    mask: Array2<bool>,
    median_distance: f64,
}

impl DistanceGraph {
    pub fn label(&self) -> Label {
        self.label
    }

    pub fn n(&self) -> usize {
        self.nodes.len()
    }

    /// Sample ids in ascending order; index `i` of the matrices is `nodes[i]`.
    pub fn nodes(&self) -> &[usize] {
        &self.nodes
    }

    pub fn weights(&self) -> &Array2<f64> {
        &self.weights
    }

    pub fn mask(&self) -> &Array2<bool> {
        &self.mask
    }

    pub fn median_distance(&self) -> f64 {
        self.median_distance
    }

    pub fn edge_count(&self) -> usize {
        let n = self.n();
        n * (n - 1) / 2
    }

    pub fn kept_edge_count(&self) -> usize {
        self.upper_edges().filter(|e| e.kept).count()
    }

    pub fn is_complete(&self) -> bool {
        self.upper_edges().all(|e| e.kept)
    }

    /// Upper-triangle edges in row-major order.
    pub fn upper_edges(&self) -> impl Iterator<Item = Edge> + '_ {
        let n = self.n();
        (0..n).flat_map(move |i| {
            (i + 1..n).map(move |j| Edge {
                src: self.nodes[i],
                dst: self.nodes[j],
                distance: self.weights[[i, j]],
                kept: self.mask[[i, j]],
            })
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub src: usize,
    pub dst: usize,
    pub distance: f64,
    pub kept: bool,
}

/// Per-dimension z-scores; dimensions with zero variance are left as-is.
pub fn zscore(vectors: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let Some(dim) = vectors.first().map(Vec::len) else {
        return Vec::new();
    };
    let n = vectors.len() as f64;
    let mut out = vectors.to_vec();
    for k in 0..dim {
        let mean = vectors.iter().map(|v| v[k]).sum::<f64>() / n;
        let var = vectors.iter().map(|v| (v[k] - mean).powi(2)).sum::<f64>() / n;
        if var > 0.0 {
            let sd = var.sqrt();
            for v in &mut out {
                v[k] = (v[k] - mean) / sd;
            }
        }
    }
    out
}

fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// Lower median of a non-empty slice.
fn lower_median(values: &mut [f64]) -> f64 {
    let mid = (values.len() - 1) / 2;
    *values
        .select_nth_unstable_by(mid, |a, b| a.total_cmp(b))
        .1
}

/// Builds the complete Euclidean-distance graph over one class.
pub fn pairwise_distances(vectors: &[FeatureVector], scaling: Scaling) -> Result<DistanceGraph> {
    if vectors.len() < 2 {
        return Err(Error::TooFewNodes(vectors.len()));
    }
    let label = vectors[0].label;
    let dim = vectors[0].dim();
    for v in vectors {
        if v.label != label {
            return Err(Error::MixedLabels);
        }
        if v.dim() != dim {
            return Err(Error::MixedDimensions {
                expected: dim,
                found: v.dim(),
            });
        }
        v.check_finite()?;
    }

    let mut sorted: Vec<&FeatureVector> = vectors.iter().collect();
    sorted.sort_by_key(|v| v.sample_id);
    let nodes: Vec<usize> = sorted.iter().map(|v| v.sample_id).collect();
    let raw: Vec<Vec<f64>> = sorted.iter().map(|v| v.values.clone()).collect();
    let points = match scaling {
        Scaling::None => raw,
        Scaling::Zscore => zscore(&raw),
    };

    let n = points.len();
    let rows: Vec<Vec<f64>> = (0..n)
        .into_par_iter()
        .map(|i| (0..n).map(|j| euclidean(&points[i], &points[j])).collect())
        .collect();
    let mut weights = Array2::<f64>::zeros((n, n));
    for i in 0..n {
        for j in i + 1..n {
            // use the upper-triangle value for both halves so W is exactly symmetric
            let d = rows[i][j];
            weights[[i, j]] = d;
            weights[[j, i]] = d;
        }
    }

    let mut upper: Vec<f64> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .map(|(i, j)| weights[[i, j]])
        .collect();
    let median_distance = lower_median(&mut upper);
    let mask = Array2::from_shape_fn((n, n), |(i, j)| i != j);

    Ok(DistanceGraph {
        label,
        nodes,
        weights,
        mask,
        median_distance,
    })
}

/// Keeps the edges on one side of the median distance (ties are kept).
pub fn median_filter(g: &DistanceGraph, mode: FilterMode) -> Result<DistanceGraph> {
    if !g.is_complete() {
        return Err(Error::AlreadyFiltered);
    }
    let m = g.median_distance;
    let mask = Array2::from_shape_fn(g.weights.raw_dim(), |(i, j)| {
        i != j
            && match mode {
                FilterMode::KeepBelow => g.weights[[i, j]] <= m,
                FilterMode::KeepAbove => g.weights[[i, j]] >= m,
            }
    });
    Ok(DistanceGraph {
        mask,
        ..g.clone()
    })
}

/// Weighted adjacency matrix; masked-out edges (when `filtered`) are zero.
pub fn adjacency_matrix(g: &DistanceGraph, filtered: bool) -> Array2<f64> {
    Array2::from_shape_fn(g.weights.raw_dim(), |(i, j)| {
        if i == j || (filtered && !g.mask[[i, j]]) {
            0.0
        } else {
            g.weights[[i, j]]
        }
    })
}

/// Splits vectors by label and builds one graph per class present.
pub fn class_graphs(vectors: &[FeatureVector], scaling: Scaling) -> Result<Vec<DistanceGraph>> {
    Label::ALL
        .iter()
        .filter_map(|&label| {
            let class: Vec<FeatureVector> =
                vectors.iter().filter(|v| v.label == label).cloned().collect();
            (!class.is_empty()).then(|| pairwise_distances(&class, scaling))
        })
        .collect()
}
