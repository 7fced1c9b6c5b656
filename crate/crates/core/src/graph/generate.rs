//! Seeded generation of admissible defected instances.
//!
//! For `r = s+1` the generator deletes edge-disjoint transversal cliques:
//! each one removes exactly one edge from every part pair and one edge from
//! each chosen vertex to every other part, so the pair-count identity is
//! preserved exactly. For `r ≥ s+2` it deletes uniformly random edges.
//! Either way `cap` bounds the number of edges a vertex may lose towards any
//! single part, so `δ̂(G) ≥ n − cap`.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{check_admissible, EdgeKey, MultipartiteGraph, PartiteStructure, Vertex};
use crate::error::{Error, Result};
use crate::rational::{self, Rational};

const ATTEMPTS_PER_DEFECT: usize = 1000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DefectPlan {
    /// Transversal cliques when `r = s+1`, single edges otherwise.
    pub count: usize,
    /// Maximum number of edges a vertex may lose towards one part.
    pub cap: usize,
}

impl DefectPlan {
    pub fn new(count: usize, cap: usize) -> Self {
        Self { count, cap }
    }

    /// Largest cap compatible with `δ̂ ≥ (1 − c)n`, i.e. `⌊c·n⌋`.
    pub fn for_target_c(count: usize, c: &Rational, n: usize) -> Result<Self> {
        let cap = rational::floor_to_usize(&(c * rational::int(n as i64)));
        if count > 0 && cap == 0 {
            return Err(Error::InfeasibleBudget(format!(
                "c = {c} with n = {n} allows no missing edge per vertex and part, but {count} defect(s) were requested"
            )));
        }
        Ok(Self { count, cap })
    }
}

pub fn generate_admissible_instance(
    structure: PartiteStructure,
    plan: DefectPlan,
    seed: u64,
) -> Result<MultipartiteGraph> {
    let mut graph = MultipartiteGraph::complete_from(structure);
    if plan.count == 0 {
        return Ok(graph);
    }
    if plan.cap == 0 {
        return Err(Error::InfeasibleBudget("cap 0 forbids any deletion".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    if structure.r == structure.s + 1 {
        delete_transversals(&mut graph, plan, &mut rng)?;
    } else {
        delete_random_edges(&mut graph, plan, &mut rng)?;
    }
    let report = check_admissible(&graph);
    if !report.is_admissible() {
        return Err(Error::InfeasibleBudget(format!(
            "cap {} is too large for admissibility: {}",
            plan.cap,
            report.describe_failure().unwrap_or_default()
        )));
    }
    Ok(graph)
}

fn delete_transversals(graph: &mut MultipartiteGraph, plan: DefectPlan, rng: &mut ChaCha8Rng) -> Result<()> {
    let st = graph.structure();
    let layout = graph.layout();
    let mut usage = vec![0usize; st.num_vertices()];
    let mut placed = 0;
    let mut attempts = 0;
    while placed < plan.count {
        attempts += 1;
        if attempts > ATTEMPTS_PER_DEFECT * plan.count {
            return Err(Error::InfeasibleBudget(format!(
                "placed {placed} of {} transversal cliques under cap {}",
                plan.count, plan.cap
            )));
        }
        let pick: Vec<Vertex> = (0..st.r).map(|p| Vertex::new(p, rng.gen_range(0..st.n))).collect();
        if pick.iter().any(|v| usage[layout.vertex_id(*v)] >= plan.cap) {
            continue;
        }
        let disjoint = (0..st.r)
            .flat_map(|a| (a + 1..st.r).map(move |b| (a, b)))
            .all(|(a, b)| graph.has_edge_between(pick[a], pick[b]));
        if !disjoint {
            continue;
        }
        graph.delete_transversal_clique(&pick)?;
        for v in &pick {
            usage[layout.vertex_id(*v)] += 1;
        }
        placed += 1;
    }
    Ok(())
}

fn delete_random_edges(graph: &mut MultipartiteGraph, plan: DefectPlan, rng: &mut ChaCha8Rng) -> Result<()> {
    let st = graph.structure();
    let n = st.n;
    let mut placed = 0;
    let mut attempts = 0;
    while placed < plan.count {
        attempts += 1;
        if attempts > ATTEMPTS_PER_DEFECT * plan.count {
            return Err(Error::InfeasibleBudget(format!(
                "placed {placed} of {} edges under cap {}",
                plan.count, plan.cap
            )));
        }
        let p1 = rng.gen_range(0..st.r);
        let mut p2 = rng.gen_range(0..st.r - 1);
        if p2 >= p1 {
            p2 += 1;
        }
        let a = Vertex::new(p1, rng.gen_range(0..n));
        let b = Vertex::new(p2, rng.gen_range(0..n));
        let e = EdgeKey::new(a, b)?;
        if !graph.has_edge(&e) {
            continue;
        }
        if n - graph.degree_to_part(a, p2) >= plan.cap || n - graph.degree_to_part(b, p1) >= plan.cap {
            continue;
        }
        graph.delete_edges(&[e])?;
        placed += 1;
    }
    Ok(())
}
