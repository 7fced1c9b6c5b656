use fracclique::graph::{generate_admissible_instance, partite_defect, DefectPlan, PartiteStructure};
use fracclique::oracle::xval::spectrum_check;
use fracclique::oracle::{self, dense_idempotents, dense_inf_norm, dense_inverse, DenseSystem, DEFAULT_CAP};
use fracclique::rational::{self, frac, int};
use fracclique::scheme::{EdgeVector, Eigenmatrices};
use fracclique::spectral::{
    eta_star, norm_delta_bound, norm_delta_eta_bound, norm_mgamma_eta_inverse, norm_mgamma_inverse, spectrum,
    HostOperator,
};

#[test]
fn multiplicities_sum_to_edge_count() {
    for r in 4..=6 {
        for n in 1..=4 {
            let mults = Eigenmatrices::new(r, n).unwrap().multiplicities();
            let total: rational::Rational = mults.iter().sum();
            assert_eq!(total, int((r * (r - 1) / 2 * n * n) as i64));
        }
    }
}

#[test]
fn numeric_spectrum_matches_closed_form() {
    for (r, s, n) in [(4, 3, 2), (5, 3, 2), (5, 4, 2), (6, 4, 2), (6, 3, 2)] {
        let dense = oracle::brute_mgamma(r, s, n, DEFAULT_CAP).unwrap();
        let table = spectrum(r, s, n, None).unwrap();
        let expected: Vec<(f64, u64)> =
            table.eigenvalues_f64.iter().copied().zip(table.multiplicities.iter().copied()).collect();
        let c = spectrum_check("spectrum", &dense, &expected, 1e-8);
        assert!(c.passed, "({r},{s},{n}) {}", c.detail);
    }
}

#[test]
fn zero_eigenvalue_when_r_is_s_plus_one() {
    for (r, s, n) in [(4, 3, 2), (5, 4, 2)] {
        let table = spectrum(r, s, n, None).unwrap();
        assert_eq!(table.eigenvalues[2], int(0));
        let dense = oracle::brute_mgamma(r, s, n, DEFAULT_CAP).unwrap();
        let eig = oracle::numeric_spectrum(&dense);
        let zeros = eig.iter().filter(|x| x.abs() < 1e-8).count() as u64;
        assert_eq!(zeros, table.multiplicities[2]);
    }
}

#[test]
fn inverse_norm_closed_form_matches_dense() {
    for (r, s, n) in [(5, 3, 2), (6, 4, 2), (6, 3, 2)] {
        let inv = dense_inverse(&oracle::brute_mgamma(r, s, n, DEFAULT_CAP).unwrap()).unwrap();
        let closed = norm_mgamma_inverse(r, s, n).unwrap();
        assert!((dense_inf_norm(&inv) - rational::to_f64(&closed)).abs() < 1e-8, "({r},{s},{n})");
    }
    assert_eq!(norm_mgamma_inverse(5, 3, 2).unwrap(), frac(8, 9));
}

#[test]
fn shifted_inverse_norm_closed_form_matches_dense() {
    for (r, s, n) in [(4, 3, 2), (5, 4, 2), (4, 3, 3)] {
        let eta = eta_star(s, n);
        let mut host = oracle::brute_mgamma(r, s, n, DEFAULT_CAP).unwrap();
        host += &dense_idempotents(r, n, DEFAULT_CAP).unwrap()[2] * rational::to_f64(&eta);
        let inv = dense_inverse(&host).unwrap();
        let closed = norm_mgamma_eta_inverse(s, n).unwrap();
        assert!((dense_inf_norm(&inv) - rational::to_f64(&closed)).abs() < 1e-8, "({r},{s},{n})");
    }
}

#[test]
fn defect_norms_respect_bounds() {
    for (r, s, n, count) in [(5, 3, 4, 2), (5, 3, 4, 5), (4, 3, 4, 1), (4, 3, 4, 2), (6, 4, 3, 3), (5, 4, 3, 1)] {
        let st = PartiteStructure::new(r, s, n).unwrap();
        for seed in 0..4 {
            let g = generate_admissible_instance(st, DefectPlan::new(count, 1), seed).unwrap();
            let c = partite_defect(&g);
            let eta = (r == s + 1).then(|| eta_star(s, n));
            let sys = DenseSystem::build(&g, eta.as_ref(), DEFAULT_CAP).unwrap();
            let bound = match &eta {
                None => norm_delta_bound(r, s, n, &c),
                Some(e) => norm_delta_eta_bound(s, n, &c, e),
            };
            let measured = dense_inf_norm(&sys.delta);
            assert!(measured <= rational::to_f64(&bound) + 1e-9, "({r},{s},{n}) seed {seed}: {measured} > {bound}");
        }
    }
}

#[test]
fn host_applied_to_ones_is_lambda0() {
    for (r, s, n) in [(5, 3, 8), (6, 4, 4), (4, 3, 8)] {
        let st = PartiteStructure::new(r, s, n).unwrap();
        let host = HostOperator::new(&st, None).unwrap();
        let lambda0 = rational::to_f64(&host.spectrum().eigenvalues[0]);
        let out = host.apply(&EdgeVector::constant(st.layout(), 1.0));
        assert!(out.values().iter().all(|x| (x - lambda0).abs() <= 1e-12 * lambda0));
    }
}

#[test]
fn matrix_free_inverse_matches_dense() {
    for (r, s, n) in [(5, 3, 3), (4, 3, 3)] {
        let st = PartiteStructure::new(r, s, n).unwrap();
        let eta = (r == s + 1).then(|| eta_star(s, n));
        let host = HostOperator::new(&st, eta.clone()).unwrap();
        let mut dense = oracle::brute_mgamma(r, s, n, DEFAULT_CAP).unwrap();
        if let Some(e) = &eta {
            dense += &dense_idempotents(r, n, DEFAULT_CAP).unwrap()[2] * rational::to_f64(e);
        }
        let v: Vec<f64> = (0..st.num_edges()).map(|i| ((i * 7919) % 13) as f64 - 6.0).collect();
        let got = host.apply_inverse(&EdgeVector::from_values(st.layout(), v.clone())).unwrap();
        let want = dense_inverse(&dense).unwrap() * nalgebra::DVector::from_column_slice(&v);
        let err = got.values().iter().zip(want.iter()).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        assert!(err < 1e-10, "({r},{s},{n}) {err}");
    }
}
