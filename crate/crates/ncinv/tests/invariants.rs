//! Cross-module property suites: equivariance of the canonical maps,
//! stability of the T-ideal, external-import generation, and the filtration
//! dimension identity.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::Zero;
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use ncinv::assoc::{
    iota_alpha, nf_f, omega, pbw_monomials, words_of_degree, Arena, NCPolynomial, RelFreeContext,
};
use ncinv::comm::{
    apply_lie_matrix, monomials_of_std_degree, CommMonomial, CommPolynomial, GeneratorFileEntry,
    GeneratorFileTerm,
};
use ncinv::freelie::{LieContext, LieElement, Word};
use ncinv::group::{apply_to_enveloping, apply_to_relfree, apply_to_tensor, MatrixGroup};
use ncinv::linalg::{rref, Matrix, Subspace};
use ncinv::pipeline::{construct_invariants_f, CommSource, PipelineOptions};
use ncinv::scalar::{format_scalar, int, parse_scalar, Scalar};

fn random_invertible(n: usize, rng: &mut StdRng) -> Matrix {
    loop {
        let m = Matrix::from_rows(
            (0..n).map(|_| (0..n).map(|_| int(rng.random_range(-2..=2))).collect()).collect(),
        )
        .unwrap();
        if m.inverse().is_ok() {
            return m;
        }
    }
}

/// Matrix of an invertible transformation on the full Lyndon basis.
fn lie_matrix_of(ctx: &Arc<LieContext>, g: &Matrix) -> Matrix {
    let dim = ctx.dim();
    let mut m = Matrix::zero(dim, dim);
    for j in 0..dim {
        let el = LieElement::from_coeffs(ctx, BTreeMap::from([(j, int(1))]));
        let image = ctx.gl_action(g, &el).unwrap();
        for (i, c) in image.coeffs() {
            *m.get_mut(*i, j) = c.clone();
        }
    }
    m
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn scalar_wire_format_round_trips(num in -1000i64..1000, den in 1i64..60) {
        let s = ncinv::scalar::frac(num, den);
        let text = format_scalar(&s);
        prop_assert_eq!(parse_scalar(&text).unwrap(), s);
    }

    #[test]
    fn rref_is_idempotent_and_rank_symmetric(
        rows in 1usize..5,
        cols in 1usize..5,
        entries in proptest::collection::vec(-5i64..=5, 16),
    ) {
        let m = Matrix::from_rows(
            (0..rows).map(|r| (0..cols).map(|c| int(entries[(r * cols + c) % entries.len()])).collect()).collect(),
        ).unwrap();
        let (red, pivots) = rref(&m);
        let (again, pivots2) = rref(&red);
        prop_assert_eq!(&red, &again);
        prop_assert_eq!(pivots.clone(), pivots2);
        prop_assert_eq!(pivots.len(), m.transpose().rank());
    }
}

#[test]
fn subspace_modular_identity_random() {
    let mut rng = StdRng::seed_from_u64(101);
    for _ in 0..20 {
        let ambient = rng.random_range(2..=8);
        fn mk(rng: &mut StdRng, ambient: usize, k: usize) -> Subspace {
            Subspace::from_vectors(
                ambient,
                (0..k)
                    .map(|_| (0..ambient).map(|_| int(rng.random_range(-2..=2))).collect())
                    .collect(),
            )
            .unwrap()
        }
        let ka = rng.random_range(1..=4);
        let a = mk(&mut rng, ambient, ka);
        let kb = rng.random_range(1..=4);
        let b = mk(&mut rng, ambient, kb);
        let sum = a.sum(&b).unwrap();
        let meet = a.intersection(&b).unwrap();
        assert_eq!(sum.dim() + meet.dim(), a.dim() + b.dim());
        assert!(sum.contains_subspace(&a) && sum.contains_subspace(&b));
        assert!(a.contains_subspace(&meet) && b.contains_subspace(&meet));
    }
}

#[test]
fn span_coordinates_recompose_exactly() {
    let mut rng = StdRng::seed_from_u64(103);
    for _ in 0..20 {
        let ambient = rng.random_range(1..=6);
        let s = Subspace::from_vectors(
            ambient,
            (0..rng.random_range(1..=3))
                .map(|_| (0..ambient).map(|_| int(rng.random_range(-3..=3))).collect())
                .collect(),
        )
        .unwrap();
        // a vector constructed inside the span must come back exactly
        let mut v = vec![Scalar::zero(); ambient];
        for b in s.basis() {
            let c = int(rng.random_range(-3..=3));
            for (x, y) in v.iter_mut().zip(b) {
                *x += &c * y;
            }
        }
        let coords = s.span_contains(&v).unwrap().expect("in span by construction");
        let mut rebuilt = vec![Scalar::zero(); ambient];
        for (c, b) in coords.iter().zip(s.basis()) {
            for (x, y) in rebuilt.iter_mut().zip(b) {
                *x += c * y;
            }
        }
        assert_eq!(rebuilt, v);
    }
}

#[test]
fn tideal_component_is_gl_stable() {
    let mut rng = StdRng::seed_from_u64(107);
    for (n, p, d) in [(2usize, 1usize, 3usize), (2, 2, 4), (2, 2, 3), (3, 1, 3)] {
        let rf = RelFreeContext::new(n, p, d);
        let ideal = rf.tideal_component(d).unwrap();
        let words = words_of_degree(n, d);
        for _ in 0..3 {
            let g = random_invertible(n, &mut rng);
            for row in ideal.basis() {
                let poly = NCPolynomial::from_terms(
                    Arena::tensor(n),
                    words.iter().cloned().zip(row.iter().cloned()),
                );
                let acted = apply_to_tensor(&g, &poly).unwrap();
                let mut v = vec![Scalar::zero(); words.len()];
                for (w, c) in acted.terms() {
                    v[ncinv::assoc::word_index(n, w)] = c.clone();
                }
                assert!(ideal.contains(&v), "n={n} p={p} d={d}");
            }
        }
    }
}

#[test]
fn canonical_maps_are_equivariant_under_random_gl() {
    let mut rng = StdRng::seed_from_u64(109);
    let ctx = LieContext::new(2, 2);
    let rf = RelFreeContext::new(2, 2, 6);
    for _ in 0..6 {
        let g = random_invertible(2, &mut rng);
        let lie_mat = lie_matrix_of(&ctx, &g);

        // pi_F(g . t) = g . pi_F(t) on random tensor polynomials
        let len = rng.random_range(1..=4);
        let word = Word((0..len).map(|_| rng.random_range(0..2)).collect());
        let t = NCPolynomial::from_terms(Arena::tensor(2), [(word, int(rng.random_range(1..=3)))]);
        let lhs = nf_f(&rf, &apply_to_tensor(&g, &t).unwrap()).unwrap();
        let rhs = apply_to_relfree(&g, &nf_f(&rf, &t).unwrap()).unwrap();
        assert_eq!(lhs, rhs);

        // omega(g . s) = g . omega(s) on random multihomogeneous inputs
        for mono in monomials_of_std_degree(&ctx, rng.random_range(1..=3)) {
            let s = CommPolynomial::from_terms([(mono, int(1))]);
            let lhs = omega(&ctx, &apply_lie_matrix(&lie_mat, &s));
            let rhs = apply_to_enveloping(&lie_mat, &omega(&ctx, &s)).unwrap();
            assert_eq!(lhs, rhs);
        }

        // iota is equivariant as well: iota(g . s) = g . iota(s)
        for mono in monomials_of_std_degree(&ctx, 2) {
            let s = CommPolynomial::from_terms([(mono, int(1))]);
            let acted = apply_lie_matrix(&lie_mat, &s);
            if acted.multidegree(&ctx).is_none() {
                continue;
            }
            let lhs = iota_alpha(&ctx, &acted).unwrap();
            let rhs = apply_to_tensor(&g, &iota_alpha(&ctx, &s).unwrap()).unwrap();
            assert_eq!(lhs, rhs);
        }
    }
}

#[test]
fn hand_written_invariants_import_and_generate() {
    // {x0^2 + x1^2, x0 x1} is the classical generating system of the
    // invariants of the order-4 group generated by -I and the coordinate
    // swap. Imported from wire entries and validated against that group,
    // the pipeline certifies generation through degree 6.
    let entries = vec![
        GeneratorFileEntry {
            alpha: vec![2],
            terms: vec![
                GeneratorFileTerm {
                    exps: BTreeMap::from([("0".to_string(), 2)]),
                    coeff: "1".into(),
                },
                GeneratorFileTerm {
                    exps: BTreeMap::from([("1".to_string(), 2)]),
                    coeff: "1".into(),
                },
            ],
        },
        GeneratorFileEntry {
            alpha: vec![2],
            terms: vec![GeneratorFileTerm {
                exps: BTreeMap::from([("0".to_string(), 1), ("1".to_string(), 1)]),
                coeff: "1".into(),
            }],
        },
    ];
    let ctx = LieContext::new(2, 1);
    let rf = RelFreeContext::new(2, 1, 6);
    let klein = MatrixGroup::close(
        2,
        vec![Matrix::from_i64(&[&[-1, 0], &[0, -1]]), Matrix::from_i64(&[&[0, 1], &[1, 0]])],
        16,
    )
    .unwrap();
    assert_eq!(klein.order(), 4);
    let lie = ncinv::group::lie_basis_action(&klein, &ctx).unwrap();
    let records = ncinv::comm::import_generators(&entries, &ctx, Some(&lie)).unwrap();
    assert_eq!(records.len(), 2);
    let result = construct_invariants_f(
        &klein,
        &ctx,
        &rf,
        CommSource::Imported(records),
        &PipelineOptions { degree_bound: Some(4), verify_degree: Some(6), max_degree: 6 },
    )
    .unwrap();
    assert!(result.verification.pass, "{:?}", result.verification.rows);

    // against the cyclic rotation group the mixed quadratic is not
    // invariant, and validation with the group supplied rejects it
    let c4 = MatrixGroup::close(2, vec![Matrix::from_i64(&[&[0, -1], &[1, 0]])], 8).unwrap();
    let lie_c4 = ncinv::group::lie_basis_action(&c4, &ctx).unwrap();
    assert!(ncinv::comm::import_generators(&entries, &ctx, Some(&lie_c4)).is_err());
}

#[test]
fn filtration_layer_dimensions_match_symmetric_algebra() {
    // the number of PBW monomials of word length d equals the dimension of
    // the degree-d part of the symmetric algebra on the Lie algebra; this is
    // the dimension content of the graded pieces of the canonical filtration
    for (n, p) in [(2usize, 2usize), (2, 3), (3, 2)] {
        let ctx = LieContext::new(n, p);
        for d in 0..=4usize {
            let pbw_of_length: usize = (0..=d * p)
                .map(|lie_deg| {
                    pbw_monomials(&ctx, lie_deg)
                        .iter()
                        .filter(|w| w.degree() == d)
                        .count()
                })
                .sum();
            let s_dim = monomials_of_std_degree(&ctx, d).len();
            assert_eq!(pbw_of_length, s_dim, "n={n} p={p} d={d}");
        }
    }
}

#[test]
fn values_are_send_and_sync() {
    fn assert_send_sync<T: Send + Sync>() {}
    assert_send_sync::<Scalar>();
    assert_send_sync::<Matrix>();
    assert_send_sync::<Subspace>();
    assert_send_sync::<Word>();
    assert_send_sync::<LieElement>();
    assert_send_sync::<LieContext>();
    assert_send_sync::<NCPolynomial>();
    assert_send_sync::<RelFreeContext>();
    assert_send_sync::<CommPolynomial>();
    assert_send_sync::<MatrixGroup>();
    assert_send_sync::<ncinv::group::GradedAction>();
}

#[test]
fn distinct_degrees_populate_concurrently() {
    // the per-degree cache admits concurrent population of distinct degrees
    let rf = RelFreeContext::new(2, 2, 6);
    let handles: Vec<_> = (0..=6usize)
        .map(|d| {
            let rf = rf.clone();
            std::thread::spawn(move || rf.dim_f(d).unwrap())
        })
        .collect();
    let dims: Vec<usize> = handles.into_iter().map(|h| h.join().unwrap()).collect();
    assert_eq!(dims, vec![1, 2, 4, 6, 8, 10, 12]);
}

#[test]
fn omega_is_a_linear_section_of_the_filtration() {
    // omega of a standard-degree-d element always has leading word length d
    // with the same leading coefficients as the symmetrization
    let ctx = LieContext::new(2, 2);
    for d in 1..=3usize {
        for mono in monomials_of_std_degree(&ctx, d) {
            let s = CommPolynomial::from_terms([(mono.clone(), int(1))]);
            let u = omega(&ctx, &s);
            let lead: Vec<(Word, Scalar)> = u
                .terms()
                .filter(|(w, _)| w.degree() == d)
                .map(|(w, c)| (w.clone(), c.clone()))
                .collect();
            assert!(!lead.is_empty(), "omega lost its leading layer on {mono}");
            // the leading layer, read commutatively, is the input monomial
            let mut collapsed = CommPolynomial::zero();
            for (w, c) in lead {
                collapsed = collapsed.add(&CommPolynomial::from_terms([(
                    CommMonomial::from_exps(w.0.iter().map(|&l| (l, 1u32))),
                    c,
                )]));
            }
            assert_eq!(collapsed, CommPolynomial::from_terms([(mono, int(1))]));
        }
    }
}
