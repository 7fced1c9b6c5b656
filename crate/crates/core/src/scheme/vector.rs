//! Edge-indexed vectors and the aggregate sums behind matrix-free `A_i v`.
//!
//! For `e = {u ∈ V_i, w ∈ V_j}` and the aggregates `T` (total), `P(i,j)`
//! (part-pair sums), `S_i = Σ_k P(i,k)`, `Q(u,k)` (sum over edges from `u`
//! into `V_k`) and `Q_tot(u) = Σ_k Q(u,k)`:
//!
//! ```text
//! A₁v(e) = Q(u,j) + Q(w,i) − 2v(e)
//! A₂v(e) = P(i,j) − Q(u,j) − Q(w,i) + v(e)
//! A₃v(e) = Q_tot(u) − Q(u,j) + Q_tot(w) − Q(w,i)
//! A₄v(e) = S_i + S_j − 2P(i,j) − A₃v(e)
//! A₅v(e) = T − S_i − S_j + P(i,j)
//! ```

use std::sync::OnceLock;

use rayon::prelude::*;

use crate::graph::EdgeLayout;

#[derive(Clone, Debug)]
pub struct Aggregates {
    pub total: f64,
    /// `pair[i * r + j] = P(i,j)`, symmetric, zero diagonal
    pub pair: Vec<f64>,
    /// `part[i] = S_i`
    pub part: Vec<f64>,
    /// `vertex[vid * r + k] = Q(v,k)`
    pub vertex: Vec<f64>,
    /// `vertex_total[vid] = Q_tot(v)`
    pub vertex_total: Vec<f64>,
}

impl Aggregates {
    pub fn compute(layout: EdgeLayout, values: &[f64]) -> Self {
        let (r, n) = (layout.r, layout.n);
        let nn = n * n;
        let mut pair = vec![0.0; r * r];
        let mut vertex = vec![0.0; r * n * r];
        for (pidx, (p1, p2)) in layout.part_pairs().enumerate() {
            let block = &values[pidx * nn..(pidx + 1) * nn];
            let mut sum = 0.0;
            for i1 in 0..n {
                let row = &block[i1 * n..(i1 + 1) * n];
                let row_sum: f64 = row.iter().sum();
                vertex[(p1 * n + i1) * r + p2] += row_sum;
                sum += row_sum;
                for (i2, x) in row.iter().enumerate() {
                    vertex[(p2 * n + i2) * r + p1] += x;
                }
            }
            pair[p1 * r + p2] = sum;
            pair[p2 * r + p1] = sum;
        }
        let part: Vec<f64> = (0..r).map(|i| pair[i * r..(i + 1) * r].iter().sum()).collect();
        let vertex_total: Vec<f64> = vertex.chunks(r).map(|c| c.iter().sum()).collect();
        let total = part.iter().sum::<f64>() / 2.0;
        Self { total, pair, part, vertex, vertex_total }
    }
}

/// A real vector on `E(Γ)` in lexicographic edge order. Aggregates are
/// computed lazily and dropped on every mutable access.
#[derive(Clone, Debug)]
pub struct EdgeVector {
    layout: EdgeLayout,
    values: Vec<f64>,
    aggregates: OnceLock<Aggregates>,
}

impl EdgeVector {
    pub fn from_values(layout: EdgeLayout, values: Vec<f64>) -> Self {
        assert_eq!(values.len(), layout.num_edges(), "vector length does not match |E(Γ)|");
        Self { layout, values, aggregates: OnceLock::new() }
    }

    pub fn zeros(layout: EdgeLayout) -> Self {
        Self::constant(layout, 0.0)
    }

    pub fn constant(layout: EdgeLayout, value: f64) -> Self {
        Self::from_values(layout, vec![value; layout.num_edges()])
    }

    /// `1_G`: one on present edges, zero elsewhere.
    pub fn indicator(layout: EdgeLayout, mask: &[bool]) -> Self {
        Self::from_values(layout, mask.iter().map(|&b| if b { 1.0 } else { 0.0 }).collect())
    }

    pub fn layout(&self) -> EdgeLayout {
        self.layout
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        self.aggregates = OnceLock::new();
        &mut self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn aggregates(&self) -> &Aggregates {
        self.aggregates.get_or_init(|| Aggregates::compute(self.layout, &self.values))
    }

    pub fn inf_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    /// `max |self − other|`.
    pub fn max_diff(&self, other: &EdgeVector) -> f64 {
        self.values.iter().zip(&other.values).fold(0.0, |m, (a, b)| m.max((a - b).abs()))
    }

    /// Zeroes the entries where `keep` is false.
    pub fn masked(&self, keep: &[bool]) -> EdgeVector {
        let values = self.values.iter().zip(keep).map(|(x, &k)| if k { *x } else { 0.0 }).collect();
        EdgeVector::from_values(self.layout, values)
    }

    pub fn axpy(&mut self, alpha: f64, other: &EdgeVector) {
        for (x, y) in self.values_mut().iter_mut().zip(&other.values) {
            *x += alpha * y;
        }
    }

    pub fn scaled(&self, alpha: f64) -> EdgeVector {
        EdgeVector::from_values(self.layout, self.values.iter().map(|x| alpha * x).collect())
    }
}

pub(crate) fn apply_fused(c: &[f64; 6], v: &EdgeVector) -> Vec<f64> {
    let layout = v.layout();
    let (r, n) = (layout.r, layout.n);
    let nn = n * n;
    let agg = v.aggregates();
    let x = v.values();
    let pairs: Vec<(usize, usize)> = layout.part_pairs().collect();
    let mut out = vec![0.0; x.len()];
    out.par_chunks_mut(nn).enumerate().for_each(|(pidx, block)| {
        let (p1, p2) = pairs[pidx];
        let pp = agg.pair[p1 * r + p2];
        let (s1, s2) = (agg.part[p1], agg.part[p2]);
        let a5 = agg.total - s1 - s2 + pp;
        let base = &x[pidx * nn..(pidx + 1) * nn];
        for i1 in 0..n {
            let u = p1 * n + i1;
            let qu = agg.vertex[u * r + p2];
            let qtu = agg.vertex_total[u] - qu;
            for i2 in 0..n {
                let w = p2 * n + i2;
                let qw = agg.vertex[w * r + p1];
                let xe = base[i1 * n + i2];
                let a1 = qu + qw - 2.0 * xe;
                let a2 = pp - qu - qw + xe;
                let a3 = qtu + agg.vertex_total[w] - qw;
                let a4 = s1 + s2 - 2.0 * pp - a3;
                block[i1 * n + i2] = c[0] * xe + c[1] * a1 + c[2] * a2 + c[3] * a3 + c[4] * a4 + c[5] * a5;
            }
        }
    });
    out
}
