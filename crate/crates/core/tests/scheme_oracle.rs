use fracclique::oracle::{self, brute_relation_census, dense_adjacency, dense_idempotents, DenseMatrix, DEFAULT_CAP};
use fracclique::rational;
use fracclique::scheme::{
    intersection_table, is_identity, valencies, EdgeVector, Eigenmatrices, Relation, SchemeElement, SchemeOperator,
};
use fracclique::spectral::mgamma_element;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_vector(op: &SchemeOperator, rng: &mut ChaCha8Rng) -> EdgeVector {
    let m = op.layout().num_edges();
    EdgeVector::from_values(op.layout(), (0..m).map(|_| rng.gen_range(-1.0..1.0)).collect())
}

#[test]
fn every_pair_gets_one_class_with_valency_counts() {
    for (r, n) in [(4, 2), (5, 2), (4, 3)] {
        let census = brute_relation_census(r, n, DEFAULT_CAP).unwrap();
        let m = (r * (r - 1) / 2 * n * n) as u64;
        let val = valencies(r, n).unwrap();
        assert_eq!(census.class_counts.iter().sum::<u64>(), m * m);
        for j in 0..6 {
            assert_eq!(census.class_counts[j], m * val[j] as u64, "class {j} at ({r},{n})");
        }
    }
}

#[test]
fn intersection_numbers_by_full_enumeration() {
    for (r, n) in [(4, 2), (5, 2), (4, 3), (6, 2)] {
        let census = brute_relation_census(r, n, DEFAULT_CAP).unwrap();
        assert!(census.passed(), "({r},{n}): {:?}", census.mismatches);
        assert_eq!(census.entries_checked, 216);
    }
}

#[test]
fn single_vertex_parts_leave_three_classes_empty() {
    let census = brute_relation_census(4, 1, DEFAULT_CAP).unwrap();
    assert!(census.passed());
    for j in [1, 2, 4] {
        assert_eq!(census.class_counts[j], 0);
    }
}

#[test]
fn products_expand_by_intersection_numbers() {
    let (r, n) = (4, 2);
    let op = SchemeOperator::new(r, n).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let tables: Vec<_> = (0..6).map(|k| intersection_table(k, r, n).unwrap()).collect();
    for _ in 0..10 {
        let v = random_vector(&op, &mut rng);
        for i in Relation::ALL {
            for j in Relation::ALL {
                let lhs = op.apply_adjacency(i, &op.apply_adjacency(j, &v));
                let coeffs: [f64; 6] = std::array::from_fn(|k| tables[k][i.index()][j.index()] as f64);
                let rhs = op.apply_coefficients(&coeffs, &v);
                assert!(lhs.max_diff(&rhs) < 1e-9, "A{}A{}", i.index(), j.index());
            }
        }
    }
}

#[test]
fn idempotents_as_operators() {
    for (r, n) in [(4, 2), (5, 3), (6, 4)] {
        let op = SchemeOperator::new(r, n).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let v = random_vector(&op, &mut rng);
        let parts: Vec<EdgeVector> = (0..6).map(|i| op.apply_idempotent(i, &v)).collect();
        let mut sum = EdgeVector::zeros(op.layout());
        for p in &parts {
            sum.axpy(1.0, p);
        }
        assert!(sum.max_diff(&v) < 1e-9);
        for i in 0..6 {
            for j in 0..6 {
                let twice = op.apply_idempotent(i, &parts[j]);
                let want = if i == j { parts[i].clone() } else { EdgeVector::zeros(op.layout()) };
                assert!(twice.max_diff(&want) < 1e-9, "E{i}E{j} at ({r},{n})");
            }
        }
    }
}

#[test]
fn dense_idempotent_residuals() {
    for (r, n) in [(4, 2), (5, 2)] {
        let idem = dense_idempotents(r, n, DEFAULT_CAP).unwrap();
        let m = idem[0].nrows();
        let mut sum = DenseMatrix::zeros(m, m);
        for e in &idem {
            assert!((e * e - e).amax() < 1e-10);
            assert!((e - e.transpose()).amax() < 1e-15);
            sum += e;
        }
        assert!((sum - DenseMatrix::identity(m, m)).amax() < 1e-10);
    }
}

#[test]
fn eigenmatrices_are_inverse_exactly() {
    for r in 4..=6 {
        for n in 1..=4 {
            let em = Eigenmatrices::new(r, n).unwrap();
            assert!(is_identity(&em.product_cd()), "({r},{n})");
            assert!(is_identity(&em.product_dc()), "({r},{n})");
        }
    }
}

#[test]
fn mgamma_equals_its_scheme_expansion_entrywise() {
    for (r, s, n) in [(4, 3, 2), (5, 3, 2), (5, 4, 2), (6, 4, 2), (4, 3, 3)] {
        let brute = oracle::brute_mgamma(r, s, n, DEFAULT_CAP).unwrap();
        let adj = dense_adjacency(r, n, DEFAULT_CAP).unwrap();
        let elem = mgamma_element(r, s, n);
        let coeffs: [f64; 6] = std::array::from_fn(|i| rational::to_f64(&elem.coeffs[i]));
        let expansion = oracle::combine(&coeffs, &adj);
        assert_eq!(brute, expansion, "({r},{s},{n})");
    }
}

#[test]
fn matrix_free_adjacency_matches_dense() {
    for (r, n) in [(4, 2), (5, 3), (6, 2)] {
        let op = SchemeOperator::new(r, n).unwrap();
        let adj = dense_adjacency(r, n, DEFAULT_CAP).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(r as u64 * 10 + n as u64);
        let v = random_vector(&op, &mut rng);
        let dv = nalgebra::DVector::from_column_slice(v.values());
        for rel in Relation::ALL {
            let want = &adj[rel.index()] * &dv;
            let got = op.apply_adjacency(rel, &v);
            let err = got.values().iter().zip(want.iter()).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
            assert!(err < 1e-10, "A{} at ({r},{n}): {err}", rel.index());
        }
    }
}

#[test]
fn adjacency_combination_has_six_stated_eigenvalues() {
    for (r, n) in [(4, 2), (5, 2)] {
        let mat = oracle::six_class_matrix(r, n, DEFAULT_CAP).unwrap();
        let groups = oracle::group_eigenvalues(&oracle::numeric_spectrum(&mat), 1e-6);
        assert_eq!(groups.len(), 6);
        let mut want = oracle::six_class_eigenvalues(r, n).to_vec();
        want.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for ((got, _), w) in groups.iter().zip(&want) {
            assert!((got - w).abs() < 1e-8, "({r},{n}): {got} vs {w}");
        }
    }
}

#[test]
fn basis_conversion_is_exact_for_mgamma() {
    let em = Eigenmatrices::new(6, 3).unwrap();
    let m = mgamma_element(6, 4, 3);
    assert_eq!(m.to_idempotent_basis(&em).to_adjacency_basis(&em), m);
    let e = SchemeElement::unit_idempotent(4);
    assert_eq!(e.to_adjacency_basis(&em).to_idempotent_basis(&em), e);
}
