//! Fractional `K_s`-decomposition of a subgraph `G ⊆ Γ`.
//!
//! The system `(M + ΔM) z = 1` on `ℝ^{E(Γ)}` is solved by the fixed-point
//! iteration `z ← M⁻¹(1 − ΔM z)`, with `M = M_Γ` for `r ≥ s+2` and
//! `M = M_Γ + η E₂` for `r = s+1`. `M⁻¹` is applied through the scheme,
//! `M_G` through the clique list. The restriction `y = z|_{E(G)}` then gives
//! clique weights `w(K) = Σ_{e ∈ K} y(e)`.

mod cliques;
mod weights;

use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{check_admissible, partite_defect, threshold_c, MultipartiteGraph, PartiteStructure};
use crate::rational::{self, Rational};
use crate::scheme::EdgeVector;
use crate::spectral::{contraction_bound, eta_star, HostOperator};

pub use cliques::CliqueList;
pub use weights::{
    extract_weights, read_records, verify_records, write_records, FractionalDecomposition, Verification,
    WeightRecord, CLIP_TOLERANCE,
};

/// `M_G v` for `v` on `E(Γ)`; entries of `v` off `E(G)` are never read
/// and the output vanishes there.
pub fn apply_mg(cliques: &CliqueList, v: &EdgeVector) -> EdgeVector {
    let m = cliques.edges_per_clique();
    let x = v.values();
    let sigma: Vec<f64> = cliques
        .flat_edges()
        .par_chunks(m)
        .map(|k| k.iter().map(|&e| x[e as usize]).sum())
        .collect();
    let mut out = vec![0.0; x.len()];
    out.par_iter_mut().enumerate().for_each(|(e, o)| {
        *o = cliques.cliques_through(e).iter().map(|&k| sigma[k as usize]).sum();
    });
    EdgeVector::from_values(v.layout(), out)
}

/// `M`, `ΔM` and the clique list for one instance.
pub struct DefectSystem {
    structure: PartiteStructure,
    present: Vec<bool>,
    cliques: CliqueList,
    plain: HostOperator,
    host: HostOperator,
    eta: Option<Rational>,
}

impl DefectSystem {
    /// `eta` is ignored unless `r = s+1`, where it defaults to `η*`.
    pub fn new(graph: &MultipartiteGraph, eta: Option<Rational>) -> Result<Self> {
        Self::with_cliques(graph, CliqueList::enumerate(graph), eta)
    }

    pub fn with_cliques(graph: &MultipartiteGraph, cliques: CliqueList, eta: Option<Rational>) -> Result<Self> {
        let st = graph.structure();
        if st.r < st.s + 1 {
            return Err(Error::InvalidParameters(format!(
                "solving needs r ≥ s + 1, got r = {}, s = {}",
                st.r, st.s
            )));
        }
        let eta = if st.r == st.s + 1 { Some(eta.unwrap_or_else(|| eta_star(st.s, st.n))) } else { None };
        if eta.as_ref().is_some_and(|e| *e <= rational::int(0)) {
            return Err(Error::InvalidParameters("η must be positive".into()));
        }
        let plain = HostOperator::new(&st, None)?;
        let host = HostOperator::new(&st, eta.clone())?;
        Ok(Self { structure: st, present: graph.present_mask().to_vec(), cliques, plain, host, eta })
    }

    pub fn structure(&self) -> PartiteStructure {
        self.structure
    }

    pub fn cliques(&self) -> &CliqueList {
        &self.cliques
    }

    pub fn host(&self) -> &HostOperator {
        &self.host
    }

    pub fn eta(&self) -> Option<&Rational> {
        self.eta.as_ref()
    }

    pub fn present(&self) -> &[bool] {
        &self.present
    }

    pub fn apply_mg(&self, v: &EdgeVector) -> EdgeVector {
        apply_mg(&self.cliques, v)
    }

    /// `(ΔM z)|_G = M_G z|_G − (M_Γ z)|_G`, zero on missing edges.
    pub fn apply_delta(&self, z: &EdgeVector) -> EdgeVector {
        let mg = self.apply_mg(z);
        let mz = self.plain.apply(z);
        let vals = mg
            .values()
            .iter()
            .zip(mz.values())
            .zip(&self.present)
            .map(|((a, b), &p)| if p { a - b } else { 0.0 })
            .collect();
        EdgeVector::from_values(z.layout(), vals)
    }

    /// `ΔM z − η (E₂ ẑ)|_G` with `ẑ` equal to `z` on missing edges and zero
    /// on `E(G)`.
    pub fn apply_delta_eta(&self, z: &EdgeVector, eta: f64) -> EdgeVector {
        let mut out = self.apply_delta(z);
        let absent: Vec<bool> = self.present.iter().map(|p| !p).collect();
        let e2 = self.host.apply_e2(&z.masked(&absent));
        for ((o, x), &p) in out.values_mut().iter_mut().zip(e2.values()).zip(&self.present) {
            if p {
                *o -= eta * x;
            }
        }
        out
    }

    /// `ΔM z` or `ΔM^η z`, matching the host operator.
    pub fn apply_defect(&self, z: &EdgeVector) -> EdgeVector {
        match &self.eta {
            Some(eta) => self.apply_delta_eta(z, rational::to_f64(eta)),
            None => self.apply_delta(z),
        }
    }

    /// `(M + ΔM) z`.
    pub fn apply_system(&self, z: &EdgeVector) -> EdgeVector {
        let mut out = self.host.apply(z);
        out.axpy(1.0, &self.apply_defect(z));
        out
    }

    /// `M_G (E₂[G,G] v)`: vanishes for admissible `G` when `r = s+1`.
    pub fn apply_mg_e2(&self, v: &EdgeVector) -> EdgeVector {
        let inner = self.host.apply_e2(&v.masked(&self.present)).masked(&self.present);
        self.apply_mg(&inner)
    }

    pub fn neumann_solve(&self, tol: f64, max_iter: usize) -> Result<NeumannOutcome> {
        let layout = self.structure.layout();
        let ones = EdgeVector::constant(layout, 1.0);
        let mut z = self.host.apply_inverse(&ones)?;
        let mut iterations = 1;
        let mut history = Vec::new();
        let mut contraction: f64 = 0.0;
        let mut prev_step: Option<f64> = None;
        loop {
            let d = self.apply_defect(&z);
            let mut res = self.host.apply(&z);
            res.axpy(1.0, &d);
            res.axpy(-1.0, &ones);
            let residual = res.inf_norm();
            history.push(residual);
            if residual < tol {
                return Ok(NeumannOutcome { z, iterations, residual, contraction, history });
            }
            let diverging = !residual.is_finite() || residual > 1e8 * history[0].max(1.0);
            if iterations >= max_iter || diverging {
                return Err(Error::NonConvergence { iterations, residual });
            }
            let mut rhs = ones.clone();
            rhs.axpy(-1.0, &d);
            let next = self.host.apply_inverse(&rhs)?;
            let step = next.max_diff(&z);
            if let Some(prev) = prev_step.filter(|p| *p > 0.0) {
                contraction = contraction.max(step / prev);
            }
            prev_step = Some(step);
            z = next;
            iterations += 1;
        }
    }
}

#[derive(Clone, Debug)]
pub struct NeumannOutcome {
    pub z: EdgeVector,
    /// applications of `M⁻¹`, counting the starting point `M⁻¹1`
    pub iterations: usize,
    pub residual: f64,
    /// largest ratio of successive step sizes; 0 when fewer than two steps
    pub contraction: f64,
    pub history: Vec<f64>,
}

#[derive(Clone, Debug)]
pub struct SolveOptions {
    pub tol: f64,
    pub max_iter: usize,
    /// overrides `η*` on the `r = s+1` path
    pub eta: Option<Rational>,
    pub verify_tol: f64,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self { tol: 1e-10, max_iter: 200, eta: None, verify_tol: 1e-8 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Guarantee {
    Certified,
    Attempted,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Timings {
    pub enumerate_s: f64,
    pub solve_s: f64,
    pub extract_s: f64,
    pub verify_s: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct SolveReport {
    pub r: usize,
    pub s: usize,
    pub n: usize,
    pub edges: usize,
    pub missing_edges: usize,
    pub cliques: usize,
    pub partite_min_degree: usize,
    pub admissible: bool,
    pub guarantee: Guarantee,
    #[serde(serialize_with = "rational::ser::one")]
    pub c_actual: Rational,
    #[serde(serialize_with = "rational::ser::one")]
    pub c_bound: Rational,
    /// `‖M⁻¹‖∞ · ‖ΔM‖∞` bound at `c_actual`
    pub contraction_bound: f64,
    #[serde(serialize_with = "rational::ser::opt")]
    pub eta: Option<Rational>,
    pub iterations: usize,
    pub final_residual_inf: f64,
    pub measured_contraction: f64,
    pub residual_history: Vec<f64>,
    /// `‖M_G y − 1‖∞` on `E(G)`
    pub mg_residual_inf: f64,
    pub min_y: f64,
    pub clipped: usize,
    pub min_weight: f64,
    pub max_edge_sum_error: f64,
    pub worst_edge: Option<String>,
    pub verified: bool,
    pub verification_problems: Vec<String>,
    pub timings: Timings,
}

#[derive(Clone, Debug)]
pub struct Decomposition {
    pub weights: FractionalDecomposition,
    pub report: SolveReport,
    pub z: EdgeVector,
}

/// `certified` when `δ̂ ≥ (1 − c)n` for the exact threshold `c`, the graph
/// is admissible, and the `r = s+1` path uses `η*`.
pub fn guarantee_for(graph: &MultipartiteGraph, admissible: bool, eta: Option<&Rational>) -> Result<(Guarantee, Rational, Rational)> {
    let st = graph.structure();
    let c_actual = partite_defect(graph);
    let c_bound = threshold_c(st.r, st.s)?.exact;
    let eta_ok = eta.is_none_or(|e| *e == eta_star(st.s, st.n));
    let g = if admissible && eta_ok && c_actual <= c_bound { Guarantee::Certified } else { Guarantee::Attempted };
    Ok((g, c_actual, c_bound))
}

/// Admissibility → threshold comparison → Neumann solve → weights →
/// independent verification.
pub fn decompose(graph: &MultipartiteGraph, opts: &SolveOptions) -> Result<Decomposition> {
    let st = graph.structure();
    if st.r < st.s + 1 {
        return Err(Error::InvalidParameters(format!("decompose needs r ≥ s + 1, got r = s = {}", st.s)));
    }
    let adm = check_admissible(graph);
    if st.r == st.s + 1 && !adm.is_admissible() {
        return Err(Error::Inadmissible(adm.describe_failure().unwrap_or_default()));
    }
    let mut timings = Timings::default();

    let t = Instant::now();
    let cliques = CliqueList::enumerate(graph);
    timings.enumerate_s = t.elapsed().as_secs_f64();

    let t = Instant::now();
    let system = DefectSystem::with_cliques(graph, cliques, opts.eta.clone())?;
    let (guarantee, c_actual, c_bound) = guarantee_for(graph, adm.is_admissible(), system.eta())?;
    let bound = contraction_bound(&st, &c_actual).map(|b| rational::to_f64(&b))?;
    let out = system.neumann_solve(opts.tol, opts.max_iter)?;
    timings.solve_s = t.elapsed().as_secs_f64();

    let t = Instant::now();
    let y = out.z.masked(system.present());
    let weights = extract_weights(&y, system.cliques(), system.present())?;
    timings.extract_s = t.elapsed().as_secs_f64();

    let t = Instant::now();
    let records = weights.records(true);
    let ver = verify_records(graph, &records, opts.verify_tol);
    let mgy = system.apply_mg(&y);
    let mg_residual = mgy
        .values()
        .iter()
        .zip(system.present())
        .filter(|(_, p)| **p)
        .fold(0.0f64, |m, (x, _)| m.max((x - 1.0).abs()));
    timings.verify_s = t.elapsed().as_secs_f64();

    let report = SolveReport {
        r: st.r,
        s: st.s,
        n: st.n,
        edges: graph.edge_count(),
        missing_edges: graph.missing().len(),
        cliques: weights.len(),
        partite_min_degree: graph.partite_min_degree(),
        admissible: adm.is_admissible(),
        guarantee,
        c_actual,
        c_bound,
        contraction_bound: bound,
        eta: system.eta().cloned(),
        iterations: out.iterations,
        final_residual_inf: out.residual,
        measured_contraction: out.contraction,
        residual_history: out.history,
        mg_residual_inf: mg_residual,
        min_y: weights.min_y,
        clipped: weights.clipped,
        min_weight: ver.min_weight,
        max_edge_sum_error: ver.max_edge_sum_error,
        worst_edge: ver.worst_edge,
        verified: ver.passed,
        verification_problems: ver.problems,
        timings,
    };
    Ok(Decomposition { weights, report, z: out.z })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate_admissible_instance, DefectPlan, EdgeKey, Vertex};

    #[test]
    fn mg_on_ones_matches_lambda0() {
        let g = MultipartiteGraph::complete(4, 3, 2).unwrap();
        let cl = CliqueList::enumerate(&g);
        let out = apply_mg(&cl, &EdgeVector::constant(g.layout(), 1.0));
        assert!(out.values().iter().all(|x| *x == 12.0));
    }

    #[test]
    fn mg_on_indicator_counts_shared_cliques() {
        let g = MultipartiteGraph::complete(5, 3, 2).unwrap();
        let cl = CliqueList::enumerate(&g);
        let layout = g.layout();
        let e = EdgeKey::new(Vertex::new(0, 0), Vertex::new(1, 0)).unwrap();
        let mut v = EdgeVector::zeros(layout);
        v.values_mut()[layout.index_of(&e)] = 1.0;
        let out = apply_mg(&cl, &v);
        let f = |a: Vertex, b: Vertex| out.values()[layout.index_of(&EdgeKey::new(a, b).unwrap())];
        assert_eq!(f(Vertex::new(0, 0), Vertex::new(1, 0)), 6.0);
        assert_eq!(f(Vertex::new(0, 0), Vertex::new(2, 1)), 1.0);
        assert_eq!(f(Vertex::new(0, 1), Vertex::new(2, 1)), 0.0);
    }

    #[test]
    fn delta_vanishes_on_complete_host() {
        let g = MultipartiteGraph::complete(5, 3, 2).unwrap();
        let sys = DefectSystem::new(&g, None).unwrap();
        let z = EdgeVector::from_values(g.layout(), (0..40).map(|i| (i as f64).cos()).collect());
        assert!(sys.apply_delta(&z).inf_norm() < 1e-12);
    }

    #[test]
    fn eta_defect_equals_plain_on_g_supported_vectors() {
        let st = PartiteStructure::new(4, 3, 4).unwrap();
        let g = generate_admissible_instance(st, DefectPlan::new(1, 1), 3).unwrap();
        let sys = DefectSystem::new(&g, None).unwrap();
        let z = EdgeVector::from_values(g.layout(), (0..96).map(|i| (i as f64 * 0.3).sin()).collect())
            .masked(g.present_mask());
        let a = sys.apply_delta(&z);
        let b = sys.apply_delta_eta(&z, 0.75);
        assert!(a.max_diff(&b) < 1e-13);
    }

    #[test]
    fn complete_host_converges_at_once() {
        let g = MultipartiteGraph::complete(5, 3, 2).unwrap();
        let out = DefectSystem::new(&g, None).unwrap().neumann_solve(1e-10, 200).unwrap();
        assert_eq!(out.iterations, 1);
        assert!(out.z.values().iter().all(|x| (x - 1.0 / 18.0).abs() < 1e-14));
    }

    #[test]
    fn decompose_complete_6_4_3() {
        let g = MultipartiteGraph::complete(6, 4, 3).unwrap();
        let d = decompose(&g, &SolveOptions::default()).unwrap();
        assert_eq!(d.report.guarantee, Guarantee::Certified);
        assert!(d.report.verified);
        assert!(d.weights.weights.iter().all(|w| (w - 1.0 / 54.0).abs() < 1e-14));
    }

    #[test]
    fn beyond_threshold_is_labelled_attempted() {
        let st = PartiteStructure::new(4, 3, 8).unwrap();
        let g = generate_admissible_instance(st, DefectPlan::new(1, 1), 7).unwrap();
        let d = decompose(&g, &SolveOptions::default()).unwrap();
        assert_eq!(d.report.guarantee, Guarantee::Attempted);
        assert_eq!(d.report.c_actual, rational::frac(1, 8));
        assert!(d.report.verified, "{:?}", d.report);
        assert!(d.report.mg_residual_inf < 1e-8);
    }

    #[test]
    fn inadmissible_eta_path_is_rejected() {
        let mut g = MultipartiteGraph::complete(4, 3, 2).unwrap();
        g.delete_edges(&[EdgeKey::new(Vertex::new(0, 0), Vertex::new(1, 0)).unwrap()]).unwrap();
        assert!(matches!(decompose(&g, &SolveOptions::default()), Err(Error::Inadmissible(_))));
    }

    #[test]
    fn r_equal_s_is_out_of_scope() {
        let g = MultipartiteGraph::complete(4, 4, 2).unwrap();
        assert!(decompose(&g, &SolveOptions::default()).is_err());
    }
}
