//! Noncommutative Weyl polarization: the general-linear action on the copy
//! space of a split module, closure of a generating set under infinitesimal
//! polarization operators, and desk-scale verification runs.
//!
//! The orbit of a generating set under the full copy-mixing group is infinite;
//! degreewise and in characteristic zero its span equals the closure under
//! the coefficients of one-parameter unipotent substitutions, which is what
//! gets computed here.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::Zero;

use crate::assoc::{Arena, NCPolynomial, RelFreeContext};
use crate::error::{Error, Result};
use crate::freelie::{LieContext, Word};
use crate::group::{apply_to_tensor, relfree_action, MatrixGroup};
use crate::linalg::{Matrix, Subspace};
use crate::pipeline::{
    construct_invariants_f, relfree_from_vector, relfree_vector, subalgebra_spans_f, CommSource,
    DegreeCheck, PipelineOptions, PipelineResult, VerificationReport,
};

/// A module split as `U + m W`: the first `dim_u` letters carry `U`, followed
/// by `m` contiguous copies of `W`. A smaller copy count embeds into a larger
/// one letter-for-letter (zero padding of the trailing copies).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitModule {
    pub dim_u: usize,
    pub dim_w: usize,
    pub copies: usize,
    /// Height of the Capelli identity satisfied by the variety; supplied by
    /// the caller (1 in the commutative case, unknown in general).
    pub capelli_h: usize,
}

impl SplitModule {
    pub fn new(dim_u: usize, dim_w: usize, copies: usize, capelli_h: usize) -> Result<Self> {
        if dim_w == 0 || copies == 0 || capelli_h == 0 {
            return Err(Error::Validation(
                "split module needs dim_w >= 1, copies >= 1, and h >= 1".into(),
            ));
        }
        Ok(SplitModule { dim_u, dim_w, copies, capelli_h })
    }

    pub fn total_dim(&self) -> usize {
        self.dim_u + self.copies * self.dim_w
    }

    /// Letter index of coordinate `coord` in copy `copy`.
    pub fn letter(&self, coord: usize, copy: usize) -> usize {
        debug_assert!(coord < self.dim_w && copy < self.copies);
        self.dim_u + copy * self.dim_w + coord
    }

    /// `(coord, copy)` for a copy-block letter, `None` for a `U` letter.
    pub fn split_letter(&self, letter: usize) -> Option<(usize, usize)> {
        if letter < self.dim_u {
            return None;
        }
        let off = letter - self.dim_u;
        Some((off % self.dim_w, off / self.dim_w))
    }

    pub fn with_copies(&self, copies: usize) -> Result<SplitModule> {
        SplitModule::new(self.dim_u, self.dim_w, copies, self.capelli_h)
    }
}

/// Act by an invertible copy-mixing matrix: every copy-block variable is
/// substituted by the matching coordinate of the image copy combination, `U`
/// variables stay fixed, and the result is renormalized. An algebra
/// automorphism of the relatively free algebra.
pub fn gl_km_action(
    rf: &Arc<RelFreeContext>,
    module: &SplitModule,
    g: &Matrix,
    f: &NCPolynomial,
) -> Result<NCPolynomial> {
    let m = module.copies;
    if rf.n() != module.total_dim() {
        return Err(Error::DimensionMismatch { expected: module.total_dim(), found: rf.n() });
    }
    if g.rows() != m || g.cols() != m {
        return Err(Error::DimensionMismatch { expected: m, found: g.rows() });
    }
    g.inverse()?;
    if !matches!(f.arena(), Arena::RelFree(c) if c.n() == rf.n() && c.p() == rf.p()) {
        return Err(Error::ArenaMismatch);
    }
    let total = module.total_dim();
    let mut subst = Matrix::zero(total, total);
    for u in 0..module.dim_u {
        *subst.get_mut(u, u) = crate::scalar::int(1);
    }
    for coord in 0..module.dim_w {
        for k in 0..m {
            for l in 0..m {
                let e = g.get(l, k);
                if !e.is_zero() {
                    *subst.get_mut(module.letter(coord, l), module.letter(coord, k)) = e.clone();
                }
            }
        }
    }
    let acted = apply_to_tensor(&subst, &f.lift_to_tensor()?)?;
    crate::assoc::nf_f(rf, &acted)
}

fn combinations(items: &[usize], r: usize) -> Vec<Vec<usize>> {
    fn rec(items: &[usize], start: usize, r: usize, acc: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if r == 0 {
            out.push(acc.clone());
            return;
        }
        for k in start..=items.len().saturating_sub(r) {
            acc.push(items[k]);
            rec(items, k + 1, r - 1, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    if r <= items.len() {
        rec(items, 0, r, &mut Vec::new(), &mut out);
    }
    out
}

/// The classical polarization operator: the coefficient of `t^r` in the
/// substitution that sends each copy-`from` variable to itself plus `t` times
/// the matching copy-`to` variable. On a word, this replaces `r` of the
/// copy-`from` letters by their copy-`to` counterparts, summed over all
/// choices.
pub fn polarization_coefficient(
    rf: &Arc<RelFreeContext>,
    module: &SplitModule,
    to_copy: usize,
    from_copy: usize,
    r: usize,
    f: &NCPolynomial,
) -> Result<NCPolynomial> {
    if to_copy == from_copy || to_copy >= module.copies || from_copy >= module.copies {
        return Err(Error::Validation("polarization needs two distinct copy indices".into()));
    }
    if r == 0 {
        return Err(Error::Validation("polarization order must be at least 1".into()));
    }
    let lifted = f.lift_to_tensor()?;
    let mut acc = NCPolynomial::zero(Arena::tensor(rf.n()));
    for (w, c) in lifted.terms() {
        let positions: Vec<usize> = w
            .0
            .iter()
            .enumerate()
            .filter(|(_, &l)| matches!(module.split_letter(l), Some((_, copy)) if copy == from_copy))
            .map(|(k, _)| k)
            .collect();
        for subset in combinations(&positions, r) {
            let mut letters = w.0.clone();
            for k in subset {
                let (coord, _) = module.split_letter(letters[k]).unwrap();
                letters[k] = module.letter(coord, to_copy);
            }
            acc = acc.add(&NCPolynomial::from_terms(
                Arena::tensor(rf.n()),
                [(Word(letters), c.clone())],
            ))?;
        }
    }
    crate::assoc::nf_f(rf, &acc)
}

/// Include an element of the relatively free algebra on an initial segment of
/// the letters into a larger one (the zero-padding identification of fewer
/// copies inside more copies).
pub fn embed_into(rf_target: &Arc<RelFreeContext>, f: &NCPolynomial) -> Result<NCPolynomial> {
    let Arena::RelFree(src) = f.arena() else {
        return Err(Error::ArenaMismatch);
    };
    if src.p() != rf_target.p() || src.n() > rf_target.n() {
        return Err(Error::ContextMismatch);
    }
    let lifted = NCPolynomial::from_terms(
        Arena::tensor(rf_target.n()),
        f.terms().map(|(w, c)| (w.clone(), c.clone())),
    );
    crate::assoc::nf_f(rf_target, &lifted)
}

/// Close a set of elements under the elementary polarization operators until
/// the span stabilizes in each degree, and return the canonical echelon basis
/// of the closure per degree. The output spans the degreewise copy-mixing
/// submodule generated by the input.
pub fn polarize_set(
    rf: &Arc<RelFreeContext>,
    module: &SplitModule,
    elems: &[NCPolynomial],
) -> Result<Vec<NCPolynomial>> {
    let m = module.copies;
    let mut by_degree: BTreeMap<usize, Vec<NCPolynomial>> = BTreeMap::new();
    for f in elems {
        for d in f.degrees() {
            if d > 0 {
                by_degree.entry(d).or_default().push(f.component(d));
            }
        }
    }
    let mut out = Vec::new();
    for (d, polys) in by_degree {
        let data = rf.degree_data(d)?;
        let dim = data.rep_words.len();
        let mut span = Subspace::zero(dim);
        let mut worklist: Vec<NCPolynomial> = Vec::new();
        let absorb = |poly: NCPolynomial,
                          span: &mut Subspace,
                          worklist: &mut Vec<NCPolynomial>|
         -> Result<()> {
            let v = relfree_vector(rf, &poly, d)?;
            if !span.contains(&v) {
                *span = span.sum(&Subspace::from_vectors(dim, vec![v])?)?;
                worklist.push(poly);
            }
            Ok(())
        };
        for poly in polys {
            absorb(poly, &mut span, &mut worklist)?;
        }
        let mut cursor = 0;
        while cursor < worklist.len() {
            let cur = worklist[cursor].clone();
            cursor += 1;
            for to_copy in 0..m {
                for from_copy in 0..m {
                    if to_copy == from_copy {
                        continue;
                    }
                    for r in 1..=d {
                        let img =
                            polarization_coefficient(rf, module, to_copy, from_copy, r, &cur)?;
                        if !img.is_zero() {
                            absorb(img, &mut span, &mut worklist)?;
                        }
                    }
                }
            }
        }
        for row in span.basis() {
            out.push(relfree_from_vector(rf, d, row)?);
        }
    }
    Ok(out)
}

/// One paired generator block of the split-module group: how it acts on `U`
/// and on `W`.
#[derive(Debug, Clone)]
pub struct SplitGenerator {
    pub on_u: Matrix,
    pub on_w: Matrix,
}

fn blow_up(gen: &SplitGenerator, dim_u: usize, dim_w: usize, copies: usize) -> Result<Matrix> {
    if gen.on_u.rows() != dim_u || gen.on_u.cols() != dim_u {
        return Err(Error::DimensionMismatch { expected: dim_u, found: gen.on_u.rows() });
    }
    if gen.on_w.rows() != dim_w || gen.on_w.cols() != dim_w {
        return Err(Error::DimensionMismatch { expected: dim_w, found: gen.on_w.rows() });
    }
    let total = dim_u + copies * dim_w;
    let mut m = Matrix::zero(total, total);
    for r in 0..dim_u {
        for c in 0..dim_u {
            *m.get_mut(r, c) = gen.on_u.get(r, c).clone();
        }
    }
    for k in 0..copies {
        let off = dim_u + k * dim_w;
        for r in 0..dim_w {
            for c in 0..dim_w {
                *m.get_mut(off + r, off + c) = gen.on_w.get(r, c).clone();
            }
        }
    }
    Ok(m)
}

/// Configuration of a polarization verification run.
#[derive(Debug, Clone)]
pub struct PolarizeRunConfig {
    pub dim_u: usize,
    pub dim_w: usize,
    pub copies_source: usize,
    pub copies_target: usize,
    pub capelli_h: usize,
    pub p: usize,
    pub generators: Vec<SplitGenerator>,
    pub group_cap: usize,
    pub max_degree: usize,
    pub verify_degree: usize,
}

#[derive(Debug)]
pub struct PolarizationRun {
    /// The pipeline run on the source copy count.
    pub source: PipelineResult,
    /// Closure of the source generators under polarization, over the target.
    pub polarized: Vec<NCPolynomial>,
    /// Degreewise comparison against the target invariants. Asserted only in
    /// the commutative case; for higher nilpotency the correct Capelli height
    /// is not known and the run is a report.
    pub report: VerificationReport,
    pub target_group_order: usize,
}

/// Run the pipeline on `U + copies_source * W`, polarize the resulting
/// generators to `copies_target` copies, and compare the generated
/// subalgebra degreewise against the invariants of the target.
pub fn verify_polarization(cfg: &PolarizeRunConfig) -> Result<PolarizationRun> {
    if cfg.copies_source > cfg.copies_target {
        return Err(Error::Validation(format!(
            "source copies {} exceed target copies {}",
            cfg.copies_source, cfg.copies_target
        )));
    }
    let src_module = SplitModule::new(cfg.dim_u, cfg.dim_w, cfg.copies_source, cfg.capelli_h)?;
    let tgt_module = src_module.with_copies(cfg.copies_target)?;

    let src_gens: Vec<Matrix> = cfg
        .generators
        .iter()
        .map(|g| blow_up(g, cfg.dim_u, cfg.dim_w, cfg.copies_source))
        .collect::<Result<_>>()?;
    let tgt_gens: Vec<Matrix> = cfg
        .generators
        .iter()
        .map(|g| blow_up(g, cfg.dim_u, cfg.dim_w, cfg.copies_target))
        .collect::<Result<_>>()?;
    let src_group = MatrixGroup::close(src_module.total_dim(), src_gens, cfg.group_cap)?;
    let tgt_group = MatrixGroup::close(tgt_module.total_dim(), tgt_gens, cfg.group_cap)?;

    let ctx_src = LieContext::new(src_module.total_dim(), cfg.p);
    let rf_src = RelFreeContext::new(src_module.total_dim(), cfg.p, cfg.max_degree);
    let source = construct_invariants_f(
        &src_group,
        &ctx_src,
        &rf_src,
        CommSource::Minimal,
        &PipelineOptions {
            degree_bound: None,
            verify_degree: Some(cfg.verify_degree),
            max_degree: cfg.max_degree,
        },
    )?;

    let rf_tgt = RelFreeContext::new(tgt_module.total_dim(), cfg.p, cfg.max_degree);
    let embedded: Vec<NCPolynomial> = source
        .generators
        .iter()
        .map(|g| embed_into(&rf_tgt, &g.nc))
        .collect::<Result<_>>()?;
    debug_assert!(embedded.iter().all(|f| !f.is_zero()));
    let polarized = polarize_set(&rf_tgt, &tgt_module, &embedded)?;

    let spans = subalgebra_spans_f(&rf_tgt, &polarized, cfg.verify_degree)?;
    let mut rows = Vec::new();
    for d in 1..=cfg.verify_degree {
        let dim_subalgebra = spans[&d].dim();
        let action = relfree_action(&tgt_group, &rf_tgt, d)?;
        let dim_invariants = action.invariant_dimension_checked()?;
        rows.push(DegreeCheck {
            degree: d,
            dim_subalgebra,
            dim_invariants,
            equal: dim_subalgebra == dim_invariants,
        });
    }
    let pass = rows.iter().all(|r| r.equal);
    let report = VerificationReport { rows, max_checked_degree: cfg.verify_degree, pass };
    Ok(PolarizationRun { source, polarized, report, target_group_order: tgt_group.order() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assoc::nf_f;
    use crate::scalar::{int, Scalar};
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn two_copies_p2() -> (Arc<RelFreeContext>, SplitModule) {
        // W = K^1, m = 2 copies, no U block, inside the nilpotency-2 variety
        let module = SplitModule::new(0, 1, 2, 1).unwrap();
        let rf = RelFreeContext::new(2, 2, 6);
        (rf, module)
    }

    fn word_poly(rf: &Arc<RelFreeContext>, letters: &[usize]) -> NCPolynomial {
        nf_f(
            rf,
            &NCPolynomial::from_terms(Arena::tensor(rf.n()), [(Word(letters.to_vec()), int(1))]),
        )
        .unwrap()
    }

    #[test]
    fn gl_km_action_examples() {
        let (rf, module) = two_copies_p2();
        let f = word_poly(&rf, &[0, 0]); // w1^2

        let id = Matrix::identity(2);
        assert_eq!(gl_km_action(&rf, &module, &id, &f).unwrap(), f);

        let swap = Matrix::from_i64(&[&[0, 1], &[1, 0]]);
        assert_eq!(gl_km_action(&rf, &module, &swap, &f).unwrap(), word_poly(&rf, &[1, 1]));

        // the unipotent substitution w1 -> w1 + w2 expands the square fully
        let unipotent = Matrix::from_i64(&[&[1, 0], &[1, 1]]);
        let image = gl_km_action(&rf, &module, &unipotent, &f).unwrap();
        let expected = word_poly(&rf, &[0, 0])
            .add(&word_poly(&rf, &[0, 1]))
            .unwrap()
            .add(&word_poly(&rf, &[1, 0]))
            .unwrap()
            .add(&word_poly(&rf, &[1, 1]))
            .unwrap();
        assert_eq!(image, expected);

        let singular = Matrix::from_i64(&[&[1, 1], &[1, 1]]);
        assert!(gl_km_action(&rf, &module, &singular, &f).is_err());
    }

    #[test]
    fn gl_km_action_is_algebra_map_and_functorial() {
        let (rf, module) = two_copies_p2();
        let mut rng = StdRng::seed_from_u64(41);
        let random_poly = |rng: &mut StdRng| {
            let mut acc = NCPolynomial::zero(Arena::RelFree(rf.clone()));
            for _ in 0..2 {
                let len = rng.random_range(1..=2);
                let letters: Vec<usize> = (0..len).map(|_| rng.random_range(0..2)).collect();
                acc = acc.add(&word_poly(&rf, &letters).scale(&int(rng.random_range(-2..=2)))).unwrap();
            }
            acc
        };
        let random_invertible = |rng: &mut StdRng| loop {
            let m = Matrix::from_rows(
                (0..2).map(|_| (0..2).map(|_| int(rng.random_range(-2..=2))).collect()).collect(),
            )
            .unwrap();
            if m.inverse().is_ok() {
                return m;
            }
        };
        for _ in 0..6 {
            let g = random_invertible(&mut rng);
            let h = random_invertible(&mut rng);
            let f1 = random_poly(&mut rng);
            let f2 = random_poly(&mut rng);
            // algebra homomorphism
            let lhs = gl_km_action(&rf, &module, &g, &f1.nc_mul(&f2).unwrap()).unwrap();
            let rhs = gl_km_action(&rf, &module, &g, &f1)
                .unwrap()
                .nc_mul(&gl_km_action(&rf, &module, &g, &f2).unwrap())
                .unwrap();
            assert_eq!(lhs, rhs);
            // composition
            let gh = g.mul(&h).unwrap();
            let lhs = gl_km_action(&rf, &module, &g, &gl_km_action(&rf, &module, &h, &f1).unwrap())
                .unwrap();
            let rhs = gl_km_action(&rf, &module, &gh, &f1).unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn polarization_coefficient_examples() {
        let (rf, module) = two_copies_p2();
        // first-order polarization of w1^2 toward copy 2
        let f = word_poly(&rf, &[0, 0]);
        let img = polarization_coefficient(&rf, &module, 1, 0, 1, &f).unwrap();
        let expected = word_poly(&rf, &[0, 1]).add(&word_poly(&rf, &[1, 0])).unwrap();
        assert_eq!(img, expected);
        // second order replaces both letters
        let img = polarization_coefficient(&rf, &module, 1, 0, 2, &f).unwrap();
        assert_eq!(img, word_poly(&rf, &[1, 1]));
        // beyond the number of available letters everything vanishes
        assert!(polarization_coefficient(&rf, &module, 1, 0, 3, &f).unwrap().is_zero());
    }

    #[test]
    fn u_block_is_untouched() {
        // U = K^1 and W = K^1 in two copies: letters u=0, w1=1, w2=2
        let module = SplitModule::new(1, 1, 2, 1).unwrap();
        let rf = RelFreeContext::new(3, 1, 4);
        let uw = word_poly(&rf, &[0, 1]);
        let img = polarization_coefficient(&rf, &module, 1, 0, 1, &uw).unwrap();
        assert_eq!(img, word_poly(&rf, &[0, 2]));
        // a pure-U word has no polarization image
        let uu = word_poly(&rf, &[0, 0]);
        assert!(polarization_coefficient(&rf, &module, 1, 0, 1, &uu).unwrap().is_zero());
        // and the copy-mixing action fixes it
        let g = Matrix::from_i64(&[&[1, 0], &[1, 1]]);
        assert_eq!(gl_km_action(&rf, &module, &g, &uu).unwrap(), uu);
    }

    #[test]
    fn polarize_set_weyl_example() {
        // commutative sign invariants of one variable polarized to two copies
        let module = SplitModule::new(0, 1, 2, 1).unwrap();
        let rf = RelFreeContext::new(2, 1, 4);
        let rf_src = RelFreeContext::new(1, 1, 4);
        let b = word_poly(&rf_src, &[0, 0]); // w1^2 over one copy
        let embedded = embed_into(&rf, &b).unwrap();
        let closed = polarize_set(&rf, &module, &[embedded]).unwrap();
        // span{w1^2, w1 w2, w2^2} in the commutative quotient
        assert_eq!(closed.len(), 3);
        let spans = subalgebra_spans_f(&rf, &closed, 2).unwrap();
        assert_eq!(spans[&2].dim(), 3);
        for target in [vec![0, 0], vec![0, 1], vec![1, 1]] {
            let v = relfree_vector(&rf, &word_poly(&rf, &target), 2).unwrap();
            assert!(spans[&2].contains(&v));
        }
    }

    #[test]
    fn polarize_single_copy_has_no_new_operators() {
        // with one copy there are no elementary operators, so the closure is
        // just the echelonized input span
        let module = SplitModule::new(0, 1, 1, 1).unwrap();
        let rf = RelFreeContext::new(1, 1, 4);
        let b = word_poly(&rf, &[0, 0]);
        let closed = polarize_set(&rf, &module, &[b.clone(), b.scale(&int(2))]).unwrap();
        assert_eq!(closed.len(), 1);
        let spans = subalgebra_spans_f(&rf, &closed, 2).unwrap();
        let v = relfree_vector(&rf, &b, 2).unwrap();
        assert!(spans[&2].contains(&v));
    }

    #[test]
    fn polarize_set_output_is_operator_stable() {
        let module = SplitModule::new(0, 1, 3, 1).unwrap();
        let rf = RelFreeContext::new(3, 2, 4);
        let rf_src = RelFreeContext::new(1, 2, 4);
        let b = word_poly(&rf_src, &[0, 0]);
        let embedded = embed_into(&rf, &b).unwrap();
        let closed = polarize_set(&rf, &module, &[embedded]).unwrap();
        let degrees: std::collections::BTreeSet<usize> =
            closed.iter().flat_map(|f| f.degrees()).collect();
        for d in degrees {
            let comp: Vec<NCPolynomial> = closed
                .iter()
                .map(|f| f.component(d))
                .filter(|f| !f.is_zero())
                .collect();
            let rows: Vec<Vec<Scalar>> = comp
                .iter()
                .map(|f| relfree_vector(&rf, f, d).unwrap())
                .collect();
            let dim = rf.degree_data(d).unwrap().rep_words.len();
            let span = Subspace::from_vectors(dim, rows).unwrap();
            for f in &comp {
                for i in 0..module.copies {
                    for j in 0..module.copies {
                        if i == j {
                            continue;
                        }
                        for r in 1..=d {
                            let img =
                                polarization_coefficient(&rf, &module, i, j, r, f).unwrap();
                            if !img.is_zero() {
                                let v = relfree_vector(&rf, &img, d).unwrap();
                                assert!(span.contains(&v), "operator escaped the closure");
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn verify_polarization_commutative_sign_case() {
        // p = 1, h = 1, the sign group on W = K^1, one copy to two copies
        let cfg = PolarizeRunConfig {
            dim_u: 0,
            dim_w: 1,
            copies_source: 1,
            copies_target: 2,
            capelli_h: 1,
            p: 1,
            generators: vec![SplitGenerator {
                on_u: Matrix::identity(0),
                on_w: Matrix::from_i64(&[&[-1]]),
            }],
            group_cap: 16,
            max_degree: 4,
            verify_degree: 4,
        };
        let run = verify_polarization(&cfg).unwrap();
        assert!(run.source.verification.pass);
        assert!(run.report.pass, "{:?}", run.report.rows);
    }

    #[test]
    fn verify_polarization_rejects_shrinking() {
        let cfg = PolarizeRunConfig {
            dim_u: 0,
            dim_w: 1,
            copies_source: 3,
            copies_target: 2,
            capelli_h: 1,
            p: 1,
            generators: vec![],
            group_cap: 4,
            max_degree: 3,
            verify_degree: 3,
        };
        assert!(verify_polarization(&cfg).is_err());
    }
}
