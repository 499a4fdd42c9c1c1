//! Seeded randomized property suites, runnable from the command line. The
//! seed affects only these checks, never pipeline output.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use ncinv::freelie::{LieContext, LieElement};
use ncinv::group::{tensor_action, MatrixGroup};
use ncinv::linalg::{rref, Matrix, Subspace};
use ncinv::scalar::{int, Scalar};

pub struct SelftestOutcome {
    pub pass: bool,
    pub log: String,
}

fn random_matrix(rng: &mut StdRng, rows: usize, cols: usize) -> Matrix {
    Matrix::from_rows(
        (0..rows).map(|_| (0..cols).map(|_| int(rng.random_range(-4..=4))).collect()).collect(),
    )
    .expect("rectangular")
}

fn check(log: &mut String, pass: &mut bool, name: &str, ok: bool) {
    let _ = writeln!(log, "  [{}] {name}", if ok { "ok" } else { "FAIL" });
    *pass &= ok;
}

pub fn run(seed: u64) -> SelftestOutcome {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut log = String::new();
    let mut pass = true;
    let _ = writeln!(log, "selftest (seed {seed})");

    // Row reduction: idempotence and rank symmetry on random matrices.
    let mut ok = true;
    for _ in 0..8 {
        let rows = rng.random_range(1..=5);
        let cols = rng.random_range(1..=5);
        let m = random_matrix(&mut rng, rows, cols);
        let (red, _) = rref(&m);
        ok &= rref(&red).0 == red;
        ok &= m.rank() == m.transpose().rank();
    }
    check(&mut log, &mut pass, "rref idempotence and rank(M) = rank(M^T)", ok);

    // Modular sum/intersection dimension identity on random subspaces.
    let mut ok = true;
    for _ in 0..6 {
        let ambient = rng.random_range(2..=6);
        let a = Subspace::from_vectors(
            ambient,
            (0..rng.random_range(1..=3)).map(|_| {
                (0..ambient).map(|_| int(rng.random_range(-2..=2))).collect::<Vec<Scalar>>()
            }).collect(),
        )
        .unwrap();
        let b = Subspace::from_vectors(
            ambient,
            (0..rng.random_range(1..=3)).map(|_| {
                (0..ambient).map(|_| int(rng.random_range(-2..=2))).collect::<Vec<Scalar>>()
            }).collect(),
        )
        .unwrap();
        let sum = a.sum(&b).unwrap().dim();
        let meet = a.intersection(&b).unwrap().dim();
        ok &= sum + meet == a.dim() + b.dim();
    }
    check(&mut log, &mut pass, "dim(a+b) + dim(a∩b) = dim a + dim b", ok);

    // Lie algebra laws on random elements.
    let ctx = LieContext::new(2, 3);
    let random_el = |rng: &mut StdRng| {
        let mut coeffs = BTreeMap::new();
        for i in 0..ctx.dim() {
            if rng.random_range(0..2) == 0 {
                coeffs.insert(i, int(rng.random_range(-3..=3)));
            }
        }
        LieElement::from_coeffs(&ctx, coeffs)
    };
    let mut ok = true;
    for _ in 0..6 {
        let a = random_el(&mut rng);
        let b = random_el(&mut rng);
        let c = random_el(&mut rng);
        let ab = ctx.bracket(&a, &b).unwrap();
        ok &= ab == ctx.bracket(&b, &a).unwrap().scale(&int(-1));
        let jac = ctx
            .bracket(&ab, &c)
            .unwrap()
            .add(&ctx.bracket(&ctx.bracket(&b, &c).unwrap(), &a).unwrap())
            .unwrap()
            .add(&ctx.bracket(&ctx.bracket(&c, &a).unwrap(), &b).unwrap())
            .unwrap();
        ok &= jac.is_zero();
    }
    check(&mut log, &mut pass, "antisymmetry and Jacobi identity", ok);

    // Reynolds idempotence and the double dimension oracle.
    let groups = [
        MatrixGroup::close(2, vec![Matrix::from_i64(&[&[0, -1], &[1, 0]])], 16).unwrap(),
        MatrixGroup::close(
            2,
            vec![Matrix::from_i64(&[&[0, -1], &[1, 0]]), Matrix::from_i64(&[&[1, 0], &[0, -1]])],
            16,
        )
        .unwrap(),
    ];
    let mut ok = true;
    for group in &groups {
        for d in 1..=3 {
            let action = tensor_action(group, d).unwrap();
            let v: Vec<Scalar> =
                (0..action.dim()).map(|_| int(rng.random_range(-3..=3))).collect();
            let once = action.reynolds(&v).unwrap();
            ok &= action.reynolds(&once).unwrap() == once;
            ok &= action.invariant_dimension_checked().is_ok();
        }
    }
    check(&mut log, &mut pass, "Reynolds idempotence and dimension oracle agreement", ok);

    let _ = writeln!(log, "selftest: {}", if pass { "PASS" } else { "FAIL" });
    SelftestOutcome { pass, log }
}
