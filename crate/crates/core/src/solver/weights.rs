//! Clique weights, their JSON form, and independent coverage verification.

use std::collections::HashMap;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::cliques::CliqueList;
use crate::error::{Error, Result};
use crate::graph::{EdgeKey, MultipartiteGraph, Vertex};
use crate::scheme::EdgeVector;

/// Entries of `y` in `[−CLIP_TOLERANCE, 0)` are treated as zero.
pub const CLIP_TOLERANCE: f64 = 1e-12;

/// A non-negative weight on every `K_s` copy of `G`.
#[derive(Clone, Debug)]
pub struct FractionalDecomposition {
    pub s: usize,
    pub cliques: Vec<Vec<Vertex>>,
    pub weights: Vec<f64>,
    /// smallest entry of `y` before clipping
    pub min_y: f64,
    pub clipped: usize,
}

/// One line of a weights file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeightRecord {
    pub clique: Vec<[usize; 2]>,
    pub weight: f64,
}

impl WeightRecord {
    pub fn vertices(&self) -> Vec<Vertex> {
        self.clique.iter().map(|&[p, i]| Vertex::new(p, i)).collect()
    }
}

/// `w(K) = Σ_{e ∈ K} y(e)`, after clipping tiny negative entries of `y`.
pub fn extract_weights(y: &EdgeVector, cliques: &CliqueList, present: &[bool]) -> Result<FractionalDecomposition> {
    let layout = y.layout();
    let mut clean = y.values().to_vec();
    let mut min_y = f64::INFINITY;
    let mut clipped = 0;
    for (i, x) in clean.iter_mut().enumerate() {
        if !present[i] {
            *x = 0.0;
            continue;
        }
        min_y = min_y.min(*x);
        if *x < -CLIP_TOLERANCE || !x.is_finite() {
            return Err(Error::NegativeWeight { edge: layout.edge_at(i), value: *x });
        }
        if *x < 0.0 {
            *x = 0.0;
            clipped += 1;
        }
    }
    let weights = (0..cliques.len())
        .map(|k| cliques.clique_edges(k).iter().map(|&e| clean[e as usize]).sum())
        .collect();
    Ok(FractionalDecomposition {
        s: cliques.s(),
        cliques: (0..cliques.len()).map(|k| cliques.clique_vertices(k)).collect(),
        weights,
        min_y: if min_y.is_finite() { min_y } else { 0.0 },
        clipped,
    })
}

impl FractionalDecomposition {
    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn min_weight(&self) -> f64 {
        self.weights.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn records(&self, include_zero: bool) -> Vec<WeightRecord> {
        self.cliques
            .iter()
            .zip(&self.weights)
            .filter(|(_, w)| include_zero || **w != 0.0)
            .map(|(k, &weight)| WeightRecord { clique: k.iter().map(|v| [v.part, v.index]).collect(), weight })
            .collect()
    }

    pub fn write(&self, path: &Path, include_zero: bool) -> Result<()> {
        write_records(&self.records(include_zero), path)
    }
}

pub fn write_records(records: &[WeightRecord], path: &Path) -> Result<()> {
    let mut text = serde_json::to_string_pretty(records)?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

pub fn read_records(path: &Path) -> Result<Vec<WeightRecord>> {
    Ok(serde_json::from_str(&fs::read_to_string(path)?)?)
}

#[derive(Clone, Debug, Serialize)]
pub struct Verification {
    pub passed: bool,
    pub tolerance: f64,
    pub edges_checked: usize,
    pub max_edge_sum_error: f64,
    /// edge with the largest coverage error, ties broken lexicographically
    pub worst_edge: Option<String>,
    pub worst_edge_sum: f64,
    pub min_weight: f64,
    pub problems: Vec<String>,
}

/// Recomputes `Σ_{K ∋ e} w(K)` for every edge of `graph` directly from the
/// records, and checks each record names a `K_s` of `graph` with a
/// non-negative weight.
pub fn verify_records(graph: &MultipartiteGraph, records: &[WeightRecord], tolerance: f64) -> Verification {
    let st = graph.structure();
    let mut sums: HashMap<EdgeKey, f64> = HashMap::new();
    let mut problems = Vec::new();
    let mut min_weight = f64::INFINITY;
    for (idx, rec) in records.iter().enumerate() {
        let vs = rec.vertices();
        min_weight = min_weight.min(rec.weight);
        if rec.weight < 0.0 || !rec.weight.is_finite() {
            problems.push(format!("record {idx} has weight {}", rec.weight));
        }
        if vs.len() != st.s {
            problems.push(format!("record {idx} has {} vertices, expected {}", vs.len(), st.s));
            continue;
        }
        if let Some(v) = vs.iter().find(|v| st.check_vertex(**v).is_err()) {
            problems.push(format!("record {idx} names vertex {v} outside the graph"));
            continue;
        }
        for a in 0..vs.len() {
            for b in a + 1..vs.len() {
                match EdgeKey::new(vs[a], vs[b]) {
                    Ok(e) if graph.has_edge(&e) => *sums.entry(e).or_insert(0.0) += rec.weight,
                    Ok(e) => problems.push(format!("record {idx} uses missing edge {e}")),
                    Err(_) => problems.push(format!("record {idx} has two vertices in part {}", vs[a].part)),
                }
            }
        }
    }
    let mut worst: Option<(EdgeKey, f64, f64)> = None;
    let mut checked = 0;
    for e in graph.layout().edges().filter(|e| graph.has_edge(e)) {
        checked += 1;
        let sum = sums.get(&e).copied().unwrap_or(0.0);
        let err = (sum - 1.0).abs();
        if worst.as_ref().is_none_or(|w| err > w.1) {
            worst = Some((e, err, sum));
        }
    }
    let max_err = worst.as_ref().map_or(0.0, |w| w.1);
    Verification {
        passed: problems.is_empty() && max_err <= tolerance,
        tolerance,
        edges_checked: checked,
        max_edge_sum_error: max_err,
        worst_edge: worst.as_ref().map(|w| w.0.to_string()),
        worst_edge_sum: worst.as_ref().map_or(0.0, |w| w.2),
        min_weight: if min_weight.is_finite() { min_weight } else { 0.0 },
        problems,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::cliques::CliqueList;

    #[test]
    fn uniform_weights_on_complete_host() {
        let g = MultipartiteGraph::complete(4, 3, 2).unwrap();
        let cl = CliqueList::enumerate(&g);
        let y = EdgeVector::constant(g.layout(), 1.0 / 12.0);
        let fd = extract_weights(&y, &cl, g.present_mask()).unwrap();
        assert_eq!(fd.len(), 32);
        assert!(fd.weights.iter().all(|w| (w - 0.25).abs() < 1e-15));
        let v = verify_records(&g, &fd.records(false), 1e-8);
        assert!(v.passed, "{v:?}");
        assert!(v.max_edge_sum_error < 1e-14);
    }

    #[test]
    fn clipping_and_hard_failure() {
        let g = MultipartiteGraph::complete(4, 3, 1).unwrap();
        let cl = CliqueList::enumerate(&g);
        let mut vals = vec![1.0 / 3.0; 6];
        vals[0] = -5e-13;
        let fd = extract_weights(&EdgeVector::from_values(g.layout(), vals.clone()), &cl, g.present_mask()).unwrap();
        assert_eq!(fd.clipped, 1);
        assert_eq!(fd.min_y, -5e-13);
        vals[0] = -1e-9;
        let err = extract_weights(&EdgeVector::from_values(g.layout(), vals), &cl, g.present_mask()).unwrap_err();
        assert!(matches!(err, Error::NegativeWeight { .. }));
    }

    #[test]
    fn perturbed_weight_is_caught() {
        let g = MultipartiteGraph::complete(4, 3, 2).unwrap();
        let cl = CliqueList::enumerate(&g);
        let y = EdgeVector::constant(g.layout(), 1.0 / 12.0);
        let mut recs = extract_weights(&y, &cl, g.present_mask()).unwrap().records(false);
        recs[3].weight += 1e-3;
        let v = verify_records(&g, &recs, 1e-8);
        assert!(!v.passed);
        assert!((v.max_edge_sum_error - 1e-3).abs() < 1e-12);
        assert!(v.worst_edge.is_some());
    }

    #[test]
    fn record_naming_a_missing_edge_is_rejected() {
        let mut g = MultipartiteGraph::complete(4, 3, 1).unwrap();
        let e = EdgeKey::new(Vertex::new(0, 0), Vertex::new(1, 0)).unwrap();
        g.delete_edges(&[e]).unwrap();
        let rec = WeightRecord { clique: vec![[0, 0], [1, 0], [2, 0]], weight: 0.5 };
        let v = verify_records(&g, &[rec], 1e-8);
        assert!(!v.passed);
        assert!(v.problems[0].contains("missing edge"));
    }
}
