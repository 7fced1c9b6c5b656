//! The 5-class association scheme on the edges of the balanced complete
//! `r`-partite graph, and matrix-free application of its Bose–Mesner algebra.

mod tables;
mod vector;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{EdgeKey, EdgeLayout};
use crate::rational::{self, Rational};

pub use tables::{
    intersection_number, intersection_table, is_identity, mat_mul, valencies, valency, Eigenmatrices, Matrix6,
};
pub use vector::{Aggregates, EdgeVector};

/// Relation class between two edges of `Γ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Relation {
    /// identical edges
    Identity,
    /// same two parts, one shared vertex
    SamePairsAdjacent,
    /// same two parts, disjoint
    SamePairsDisjoint,
    /// one shared part, one shared vertex
    OnePartAdjacent,
    /// one shared part, disjoint
    OnePartDisjoint,
    /// no shared part
    Apart,
}

impl Relation {
    pub const ALL: [Relation; 6] = [
        Relation::Identity,
        Relation::SamePairsAdjacent,
        Relation::SamePairsDisjoint,
        Relation::OnePartAdjacent,
        Relation::OnePartDisjoint,
        Relation::Apart,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Result<Self> {
        Self::ALL
            .get(i)
            .copied()
            .ok_or_else(|| Error::InvalidParameters(format!("relation index {i} out of range")))
    }
}

pub fn classify(e1: &EdgeKey, e2: &EdgeKey) -> Relation {
    let (a1, b1) = e1.parts();
    let (a2, b2) = e2.parts();
    let shared_parts = [a1, b1].iter().filter(|p| **p == a2 || **p == b2).count();
    let shared_vertices = [e1.lo(), e1.hi()].iter().filter(|v| e2.contains(**v)).count();
    match (shared_parts, shared_vertices) {
        (2, 2) => Relation::Identity,
        (2, 1) => Relation::SamePairsAdjacent,
        (2, _) => Relation::SamePairsDisjoint,
        (1, 1) => Relation::OnePartAdjacent,
        (1, _) => Relation::OnePartDisjoint,
        _ => Relation::Apart,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Basis {
    /// coefficients of `A_0..A_5`
    Adjacency,
    /// coefficients of `E_0..E_5`
    Idempotent,
}

/// Element of the Bose–Mesner algebra with exact coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct SchemeElement {
    pub basis: Basis,
    pub coeffs: [Rational; 6],
}

impl SchemeElement {
    pub fn adjacency(coeffs: [Rational; 6]) -> Self {
        Self { basis: Basis::Adjacency, coeffs }
    }

    pub fn idempotent(coeffs: [Rational; 6]) -> Self {
        Self { basis: Basis::Idempotent, coeffs }
    }

    /// `A_i` itself.
    pub fn unit_adjacency(i: Relation) -> Self {
        Self::adjacency(std::array::from_fn(|j| rational::int((j == i.index()) as i64)))
    }

    /// `E_i` itself.
    pub fn unit_idempotent(i: usize) -> Self {
        Self::idempotent(std::array::from_fn(|j| rational::int((j == i) as i64)))
    }

    /// Σ a_i A_i = Σ_j (Σ_i a_i C(i,j)) E_j
    pub fn to_idempotent_basis(&self, em: &Eigenmatrices) -> Self {
        match self.basis {
            Basis::Idempotent => self.clone(),
            Basis::Adjacency => Self::idempotent(std::array::from_fn(|j| {
                (0..6).map(|i| &self.coeffs[i] * &em.c[i][j]).sum()
            })),
        }
    }

    /// Σ μ_i E_i = Σ_j (Σ_i μ_i D(i,j)) A_j
    pub fn to_adjacency_basis(&self, em: &Eigenmatrices) -> Self {
        match self.basis {
            Basis::Adjacency => self.clone(),
            Basis::Idempotent => Self::adjacency(std::array::from_fn(|j| {
                (0..6).map(|i| &self.coeffs[i] * &em.d[i][j]).sum()
            })),
        }
    }

    pub fn adjacency_coeffs_f64(&self, em: &Eigenmatrices) -> [f64; 6] {
        let a = self.to_adjacency_basis(em);
        std::array::from_fn(|j| rational::to_f64(&a.coeffs[j]))
    }
}

/// Matrix-free action of the algebra on `ℝ^{E(Γ)}` for a fixed `(r, n)`.
#[derive(Clone, Debug)]
pub struct SchemeOperator {
    layout: EdgeLayout,
    eig: Eigenmatrices,
}

impl SchemeOperator {
    pub fn new(r: usize, n: usize) -> Result<Self> {
        Ok(Self { layout: EdgeLayout::new(r, n), eig: Eigenmatrices::new(r, n)? })
    }

    pub fn layout(&self) -> EdgeLayout {
        self.layout
    }

    pub fn eigenmatrices(&self) -> &Eigenmatrices {
        &self.eig
    }

    pub fn apply_adjacency(&self, i: Relation, v: &EdgeVector) -> EdgeVector {
        let mut coeffs = [0.0; 6];
        coeffs[i.index()] = 1.0;
        self.apply_coefficients(&coeffs, v)
    }

    /// `E_i v = Σ_j D(i,j) A_j v`.
    pub fn apply_idempotent(&self, i: usize, v: &EdgeVector) -> EdgeVector {
        let coeffs: [f64; 6] = std::array::from_fn(|j| rational::to_f64(&self.eig.d[i][j]));
        self.apply_coefficients(&coeffs, v)
    }

    pub fn apply_element(&self, elem: &SchemeElement, v: &EdgeVector) -> EdgeVector {
        self.apply_coefficients(&elem.adjacency_coeffs_f64(&self.eig), v)
    }

    /// `(Σ_j a_j A_j) v` in one pass over the edges, using the cached
    /// aggregates of `v`.
    pub fn apply_coefficients(&self, a: &[f64; 6], v: &EdgeVector) -> EdgeVector {
        assert_eq!(v.layout(), self.layout, "edge vector built for a different host graph");
        EdgeVector::from_values(self.layout, vector::apply_fused(a, v))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Vertex;

    fn e(p1: usize, i1: usize, p2: usize, i2: usize) -> EdgeKey {
        EdgeKey::new(Vertex::new(p1, i1), Vertex::new(p2, i2)).unwrap()
    }

    #[test]
    fn classify_examples() {
        let base = e(0, 0, 1, 0);
        assert_eq!(classify(&base, &base), Relation::Identity);
        assert_eq!(classify(&base, &e(0, 0, 1, 1)), Relation::SamePairsAdjacent);
        assert_eq!(classify(&base, &e(0, 1, 1, 1)), Relation::SamePairsDisjoint);
        assert_eq!(classify(&base, &e(1, 0, 2, 0)), Relation::OnePartAdjacent);
        assert_eq!(classify(&base, &e(0, 1, 3, 0)), Relation::OnePartDisjoint);
        assert_eq!(classify(&base, &e(2, 0, 3, 0)), Relation::Apart);
    }

    #[test]
    fn basis_round_trip_is_exact() {
        let em = Eigenmatrices::new(5, 3).unwrap();
        let elem = SchemeElement::adjacency([
            rational::frac(3, 7),
            rational::int(-2),
            rational::frac(1, 11),
            rational::int(5),
            rational::frac(-4, 9),
            rational::int(1),
        ]);
        let back = elem.to_idempotent_basis(&em).to_adjacency_basis(&em);
        assert_eq!(back, elem);
    }

    #[test]
    fn ones_are_eigenvectors_of_each_adjacency() {
        let op = SchemeOperator::new(5, 3).unwrap();
        let ones = EdgeVector::constant(op.layout(), 1.0);
        let val = valencies(5, 3).unwrap();
        for rel in Relation::ALL {
            let out = op.apply_adjacency(rel, &ones);
            for x in out.values() {
                assert!((x - val[rel.index()] as f64).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn identity_relation_is_identity() {
        let op = SchemeOperator::new(4, 2).unwrap();
        let v = EdgeVector::from_values(op.layout(), (0..24).map(|i| (i as f64).sin()).collect());
        let out = op.apply_adjacency(Relation::Identity, &v);
        assert_eq!(out.values(), v.values());
    }

    #[test]
    fn e2_kills_the_ones_vector() {
        let op = SchemeOperator::new(4, 3).unwrap();
        let ones = EdgeVector::constant(op.layout(), 1.0);
        assert!(op.apply_idempotent(2, &ones).inf_norm() < 1e-12);
    }
}
