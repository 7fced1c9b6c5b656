//! Fractional `K_s`-decompositions of dense balanced `r`-partite graphs.
//!
//! The host graph `Γ` is the balanced complete `r`-partite graph with parts of
//! size `n`; a subgraph `G` is stored as `Γ` minus a set of missing edges. The
//! clique-pair matrix `M_Γ` lives in the Bose–Mesner algebra of a 5-class
//! association scheme on `E(Γ)`, so `M_Γ`, its inverse and the primitive
//! idempotents are applied to edge vectors in `O(|E|)` time without ever
//! materialising an `|E| × |E|` matrix. The solver combines those operators
//! with the defect operator `ΔM` in a contractive fixed-point iteration and
//! turns the result into clique weights.
//!
//! Module map:
//!
//! * [`graph`]: partite structure, missing-edge graphs, admissibility,
//!   threshold constants, instance generation, JSON graph files.
//! * [`scheme`]: relation classes, intersection numbers, eigenmatrices and
//!   matrix-free application of `A_i` / `E_i`.
//! * [`spectral`]: `M_Γ` and its `η`-shifted variant, closed-form spectra and
//!   infinity-norm formulas.
//! * [`solver`]: clique enumeration, `M_G`, `ΔM`, the fixed-point iteration,
//!   weight extraction and verification.
//! * [`oracle`]: dense brute-force constructions used to cross-check
//!   everything above at desk scale.

pub mod cli;
pub mod error;
pub mod graph;
pub mod oracle;
pub mod rational;
pub mod scheme;
pub mod solver;
pub mod spectral;

pub use error::{Error, Result};
pub use graph::{EdgeKey, MultipartiteGraph, PartiteStructure, Vertex};
pub use rational::Rational;
