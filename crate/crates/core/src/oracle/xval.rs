//! Oracle cross-validation of every closed form for one `(r, s, n)`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::*;
use crate::graph::{generate_admissible_instance, partite_defect, DefectPlan};
use crate::scheme::{EdgeVector, SchemeOperator};
use crate::solver::{apply_mg, CliqueList, DefectSystem};
use crate::spectral::{
    eta_star, mgamma_element, norm_delta_bound, norm_delta_eta_bound, norm_mgamma_eta_inverse, norm_mgamma_inverse,
    spectrum, HostOperator,
};

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    /// largest deviation observed, or the measured quantity for bound checks
    pub value: f64,
    pub detail: String,
}

impl Check {
    fn tol(name: &str, err: f64, tol: f64) -> Self {
        Self { name: name.into(), passed: err <= tol, value: err, detail: format!("max deviation {err:.3e} (tol {tol:e})") }
    }

    fn flag(name: &str, passed: bool, value: f64, detail: String) -> Self {
        Self { name: name.into(), passed, value, detail }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct XvalRow {
    pub r: usize,
    pub s: usize,
    pub n: usize,
    pub edges: usize,
    pub passed: bool,
    pub checks: Vec<Check>,
}

fn max_abs_diff(a: &DenseMatrix, b: &DenseMatrix) -> f64 {
    (a - b).amax()
}

fn random_vector(layout: crate::graph::EdgeLayout, rng: &mut ChaCha8Rng) -> EdgeVector {
    EdgeVector::from_values(layout, (0..layout.num_edges()).map(|_| rng.gen_range(-1.0..1.0)).collect())
}

fn dense_apply(mat: &DenseMatrix, v: &[f64]) -> Vec<f64> {
    (mat * DVector::from_column_slice(v)).iter().copied().collect()
}

fn vec_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}

/// Numeric spectrum of `mat` against the closed-form table, with
/// multiplicities. Eigenvalues are grouped at `1e−6·λ₀`.
pub fn spectrum_check(name: &str, mat: &DenseMatrix, expected: &[(f64, u64)], tol: f64) -> Check {
    let lambda0 = expected.iter().map(|e| e.0.abs()).fold(0.0, f64::max).max(1.0);
    let found = group_eigenvalues(&numeric_spectrum(mat), 1e-6 * lambda0);
    let mut want: Vec<(f64, u64)> = Vec::new();
    for &(v, m) in expected {
        match want.iter_mut().find(|w| (w.0 - v).abs() <= 1e-6 * lambda0) {
            Some(w) => w.1 += m,
            None => want.push((v, m)),
        }
    }
    want.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite"));
    let mut err: f64 = 0.0;
    let mut ok = found.len() == want.len();
    for ((fv, fm), (wv, wm)) in found.iter().zip(&want) {
        err = err.max((fv - wv).abs());
        ok &= *fm as u64 == *wm;
    }
    let fmt = |xs: Vec<String>| xs.join(" ");
    Check::flag(
        name,
        ok && err <= tol,
        err,
        format!(
            "found [{}], expected [{}]",
            fmt(found.iter().map(|(v, m)| format!("{v:.6}^{m}")).collect()),
            fmt(want.iter().map(|(v, m)| format!("{v:.6}^{m}")).collect())
        ),
    )
}

/// Every oracle comparison applicable at `(r, s, n)`. Requires `r ≥ 4`,
/// `r ≥ s+1` and `C(r,2)n² ≤ cap`.
pub fn cross_validate(r: usize, s: usize, n: usize, cap: usize, seed: u64) -> Result<XvalRow> {
    let st = PartiteStructure::new(r, s, n)?;
    if r < 4 || r < s + 1 {
        return Err(Error::InvalidParameters(format!("xval needs r ≥ max(4, s+1), got ({r},{s},{n})")));
    }
    check_cap(st.num_edges(), cap)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checks = Vec::new();
    let layout = st.layout();

    let census = brute_relation_census(r, n, cap)?;
    checks.push(Check::flag(
        "intersection_numbers",
        census.passed(),
        census.mismatches.len() as f64,
        match census.mismatches.first() {
            None => format!("{} entries over {} anchor pairs", census.entries_checked, census.anchor_pairs_checked),
            Some(m) => format!("p_{}{}^{} at (r,n)=({},{}): table {} found {}", m.i, m.j, m.k, m.r, m.n, m.expected, m.found),
        },
    ));

    let em = Eigenmatrices::new(r, n)?;
    checks.push(Check::flag(
        "c_times_d_identity",
        crate::scheme::is_identity(&em.product_cd()) && crate::scheme::is_identity(&em.product_dc()),
        0.0,
        "exact rational product".into(),
    ));

    let adj = dense_adjacency(r, n, cap)?;
    let idem = dense_idempotents(r, n, cap)?;
    let m = st.num_edges();
    let mut err_idem: f64 = 0.0;
    let mut sum = DenseMatrix::zeros(m, m);
    for i in 0..6 {
        sum += &idem[i];
        for j in 0..6 {
            let prod = &idem[i] * &idem[j];
            let target = if i == j { idem[i].clone() } else { DenseMatrix::zeros(m, m) };
            err_idem = err_idem.max(max_abs_diff(&prod, &target));
        }
    }
    err_idem = err_idem.max(max_abs_diff(&sum, &DenseMatrix::identity(m, m)));
    checks.push(Check::tol("idempotent_identities", err_idem, 1e-10));

    let mults = em.multiplicities();
    let traces: Vec<f64> = idem.iter().map(|e| e.trace()).collect();
    let err_tr = traces.iter().zip(&mults).fold(0.0f64, |a, (t, q)| a.max((t - rational::to_f64(q)).abs()));
    checks.push(Check::tol("multiplicities_equal_traces", err_tr, 1e-8));

    let six = six_class_matrix(r, n, cap)?;
    let six_eigs = six_class_eigenvalues(r, n);
    let six_expected: Vec<(f64, u64)> =
        six_eigs.iter().zip(&mults).map(|(v, q)| (*v, rational::to_f64(q).round() as u64)).collect();
    checks.push(spectrum_check("adjacency_combination_spectrum", &six, &six_expected, 1e-8));

    let mgamma = brute_mgamma(r, s, n, cap)?;
    let elem = mgamma_element(r, s, n);
    let coeffs: [f64; 6] = std::array::from_fn(|i| rational::to_f64(&elem.coeffs[i]));
    checks.push(Check::tol("mgamma_scheme_expansion", max_abs_diff(&mgamma, &combine(&coeffs, &adj)), 0.0));

    let table = spectrum(r, s, n, None)?;
    let expected: Vec<(f64, u64)> =
        table.eigenvalues_f64.iter().copied().zip(table.multiplicities.iter().copied()).collect();
    checks.push(spectrum_check("mgamma_spectrum", &mgamma, &expected, 1e-8));

    let scheme = SchemeOperator::new(r, n)?;
    let v = random_vector(layout, &mut rng);
    let mut err_apply: f64 = 0.0;
    for (rel, a) in crate::scheme::Relation::ALL.iter().zip(&adj) {
        err_apply = err_apply.max(vec_diff(scheme.apply_adjacency(*rel, &v).values(), &dense_apply(a, v.values())));
    }
    for (i, e) in idem.iter().enumerate() {
        err_apply = err_apply.max(vec_diff(scheme.apply_idempotent(i, &v).values(), &dense_apply(e, v.values())));
    }
    checks.push(Check::tol("matrix_free_scheme_apply", err_apply, 1e-10));

    let eta = (r == s + 1).then(|| eta_star(s, n));
    let mut host_dense = mgamma.clone();
    if let Some(eta) = &eta {
        host_dense += &idem[2] * rational::to_f64(eta);
    }
    let host = HostOperator::new(&st, eta.clone())?;
    let inv = dense_inverse(&host_dense)?;
    let err_inv = vec_diff(host.apply_inverse(&v)?.values(), &dense_apply(&inv, v.values()));
    checks.push(Check::tol("matrix_free_host_inverse", err_inv, 1e-10));

    let (name, closed) = if r >= s + 2 {
        ("inverse_norm", norm_mgamma_inverse(r, s, n)?)
    } else {
        ("eta_inverse_norm", norm_mgamma_eta_inverse(s, n)?)
    };
    let dense_norm = dense_inf_norm(&inv);
    let mut c = Check::tol(name, (dense_norm - rational::to_f64(&closed)).abs(), 1e-8);
    c.detail = format!("dense {dense_norm:.12}, closed form {closed} ({})", c.detail);
    checks.push(c);

    // one defected instance
    let plan = if r == s + 1 { DefectPlan::new(1, 1) } else { DefectPlan::new(2.min(n * n), 1) };
    let graph = generate_admissible_instance(st, plan, seed)?;
    let ord = graph.edge_ordering();
    let cliques = CliqueList::enumerate(&graph);
    let mg_dense = brute_mg(&graph, cap)?;
    let w = random_vector(layout, &mut rng).masked(graph.present_mask());
    let mg_free = apply_mg(&cliques, &w);
    let g = ord.graph_edges;
    let w_g: Vec<f64> = ord.order[..g].iter().map(|&i| w.values()[i]).collect();
    let mg_d = dense_apply(&mg_dense, &w_g);
    let mg_f: Vec<f64> = ord.order[..g].iter().map(|&i| mg_free.values()[i]).collect();
    checks.push(Check::tol("matrix_free_mg_apply", vec_diff(&mg_f, &mg_d), 1e-10));

    let sys = DenseSystem::build(&graph, eta.as_ref(), cap)?;
    let free = DefectSystem::with_cliques(&graph, cliques, eta.clone())?;
    let z = random_vector(layout, &mut rng);
    let dz_dense = from_g_first(&(&sys.delta * to_g_first(z.values(), &ord)), &ord);
    checks.push(Check::tol("matrix_free_defect_apply", vec_diff(free.apply_defect(&z).values(), &dz_dense), 1e-10));

    let c_actual = partite_defect(&graph);
    let bound = match &eta {
        None => norm_delta_bound(r, s, n, &c_actual),
        Some(e) => norm_delta_eta_bound(s, n, &c_actual, e),
    };
    let dnorm = dense_inf_norm(&sys.delta);
    checks.push(Check::flag(
        "defect_norm_bound",
        dnorm <= rational::to_f64(&bound) + 1e-9,
        dnorm,
        format!("‖ΔM‖∞ = {dnorm:.6} ≤ {:.6} at c = {c_actual}", rational::to_f64(&bound)),
    ));

    let z_dense = sys.solve()?;
    match free.neumann_solve(1e-10, 200) {
        Ok(out) => checks.push(Check::tol("solve_matches_dense", vec_diff(out.z.values(), &z_dense), 1e-8)),
        Err(e) => checks.push(Check::flag("solve_matches_dense", false, f64::NAN, e.to_string())),
    }

    if eta.is_some() {
        let ones_g = EdgeVector::indicator(layout, graph.present_mask());
        let e2 = host.apply_e2(&ones_g).inf_norm();
        checks.push(Check::tol("e2_kills_indicator", e2, 1e-10));
        let u = random_vector(layout, &mut rng);
        checks.push(Check::tol("mg_times_e2_block_vanishes", free.apply_mg_e2(&u).inf_norm(), 1e-8));
    }

    let passed = checks.iter().all(|c| c.passed);
    Ok(XvalRow { r, s, n, edges: m, passed, checks })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_grid_passes() {
        for (r, s, n) in [(4, 3, 2), (5, 3, 2)] {
            let row = cross_validate(r, s, n, DEFAULT_CAP, 1).unwrap();
            for c in &row.checks {
                assert!(c.passed, "({r},{s},{n}) {}: {}", c.name, c.detail);
            }
        }
    }
}
