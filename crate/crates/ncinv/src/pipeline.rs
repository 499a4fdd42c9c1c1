//! The constructive engine: transform commutative invariant generators into
//! generators of the invariant algebra of the relatively free algebra or of
//! the enveloping algebra, verify invariance and generation degreewise, and
//! report degree bounds.
//!
//! Verification is deliberately two-sided: the subalgebra generated by the
//! produced elements is spanned degree by degree and compared against
//! invariant dimensions computed by trace averaging, which itself must agree
//! with the Reynolds-rank oracle on every constructed action.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::assoc::{
    dim_u, gamma, iota_alpha, nf_f, omega, pbw_monomials, vectorize, Arena, NCPolynomial,
    RelFreeContext,
};
use crate::comm::{beta_commutative, minimal_generators, GeneratorRecord};
use crate::error::{Error, Result};
use crate::freelie::{LieContext, Word};
use crate::group::{
    apply_to_enveloping, apply_to_relfree, enveloping_action, lie_basis_action, relfree_action,
    GradedAction, MatrixGroup,
};
use crate::linalg::Subspace;
use crate::scalar::Scalar;

/// One produced noncommutative invariant generator with its commutative
/// source record.
#[derive(Debug, Clone)]
pub struct NcGenerator {
    pub nc: NCPolynomial,
    pub source: GeneratorRecord,
    /// Degree of the image, `sum of i * alpha_i` of the source multidegree.
    pub f_degree: usize,
}

/// Per-degree comparison of the generated subalgebra against the invariants.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeCheck {
    pub degree: usize,
    pub dim_subalgebra: usize,
    pub dim_invariants: usize,
    pub equal: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub rows: Vec<DegreeCheck>,
    pub max_checked_degree: usize,
    pub pass: bool,
}

/// Observed degree bounds and the inequalities they must satisfy.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundReport {
    /// Maximum standard degree among the commutative generators used.
    pub beta_comm: usize,
    /// Maximum degree among the produced noncommutative generators.
    pub beta_nc: usize,
    pub p: usize,
    pub group_order: Option<usize>,
    /// `beta_nc <= p * beta_comm`.
    pub inequality_pbeta: bool,
    /// `beta_nc <= p * |G|` for finite groups.
    pub inequality_noether: Option<bool>,
}

#[derive(Debug, Clone)]
pub struct PipelineOptions {
    /// Standard-degree search bound for commutative generators; defaults to
    /// the group order (the Noether bound).
    pub degree_bound: Option<usize>,
    /// Degree up to which generation is verified. Defaults to
    /// `min(p * degree_bound, max_degree)`; beyond `p * D` generation is
    /// implied rather than checked.
    pub verify_degree: Option<usize>,
    /// Hard cap on any materialized degree; images above it are counted but
    /// not expanded.
    pub max_degree: usize,
}

impl PipelineOptions {
    pub fn with_cap(max_degree: usize) -> Self {
        PipelineOptions { degree_bound: None, verify_degree: None, max_degree }
    }
}

/// Where the commutative generators come from.
pub enum CommSource {
    /// Compute a minimal multihomogeneous system for the group.
    Minimal,
    /// Externally supplied records (already validated by the importer).
    Imported(Vec<GeneratorRecord>),
}

#[derive(Debug)]
pub struct PipelineResult {
    pub generators: Vec<NcGenerator>,
    /// The commutative source system.
    pub records: Vec<GeneratorRecord>,
    /// Records whose induced degree exceeded the materialization cap; their
    /// images are not expanded and cannot occur in any verified degree.
    pub skipped_above_cap: usize,
    /// Generators dropped by pruning (redundant in the target algebra).
    pub pruned: usize,
    pub verification: VerificationReport,
    pub bounds: BoundReport,
}

/// Coordinates of the degree-`d` component over the representative basis.
pub fn relfree_vector(rf: &Arc<RelFreeContext>, poly: &NCPolynomial, d: usize) -> Result<Vec<Scalar>> {
    let data = rf.degree_data(d)?;
    vectorize(
        poly.terms().filter(|(w, _)| w.degree() == d),
        &data.rep_pos,
        data.rep_words.len(),
    )
}

pub fn relfree_from_vector(rf: &Arc<RelFreeContext>, d: usize, v: &[Scalar]) -> Result<NCPolynomial> {
    let data = rf.degree_data(d)?;
    Ok(NCPolynomial::from_terms(
        Arena::RelFree(rf.clone()),
        data.rep_words.iter().zip(v.iter()).map(|(w, c)| (w.clone(), c.clone())),
    ))
}

/// Coordinates of the Lie-degree-`d` component over the PBW monomial basis.
pub fn env_vector(ctx: &Arc<LieContext>, poly: &NCPolynomial, d: usize) -> Result<Vec<Scalar>> {
    let basis = pbw_monomials(ctx, d);
    let pos: BTreeMap<Word, usize> = basis.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect();
    vectorize(
        poly.terms().filter(|(w, _)| ctx.lie_degree(w) == d),
        &pos,
        basis.len(),
    )
}

pub fn env_from_vector(ctx: &Arc<LieContext>, d: usize, v: &[Scalar]) -> Result<NCPolynomial> {
    let basis = pbw_monomials(ctx, d);
    Ok(NCPolynomial::from_terms(
        Arena::Enveloping(ctx.clone()),
        basis.iter().zip(v.iter()).map(|(w, c)| (w.clone(), c.clone())),
    ))
}

/// Degreewise spans of the unital subalgebra generated by the given elements
/// of the relatively free algebra, for degrees `1..=up_to`. Uses the linear
/// recursion `A_d = G_d + sum over e of A_e * G_(d-e)`, which is exact
/// because spans multiply through bases.
pub fn subalgebra_spans_f(
    rf: &Arc<RelFreeContext>,
    gens: &[NCPolynomial],
    up_to: usize,
) -> Result<BTreeMap<usize, Subspace>> {
    let by_degree = split_homogeneous(gens);
    let mut spans: BTreeMap<usize, Subspace> = BTreeMap::new();
    for d in 1..=up_to {
        let data = rf.degree_data(d)?;
        let dim = data.rep_words.len();
        let mut rows: Vec<Vec<Scalar>> = Vec::new();
        for g in by_degree.get(&d).into_iter().flatten() {
            rows.push(relfree_vector(rf, g, d)?);
        }
        for e in 1..d {
            let Some(a_e) = spans.get(&e) else { continue };
            if a_e.dim() == 0 {
                continue;
            }
            let Some(right) = by_degree.get(&(d - e)) else { continue };
            for b in a_e.basis() {
                let left = relfree_from_vector(rf, e, b)?;
                for g in right {
                    let prod = left.nc_mul(g)?;
                    rows.push(relfree_vector(rf, &prod, d)?);
                }
            }
        }
        spans.insert(d, Subspace::from_vectors(dim, rows)?);
    }
    Ok(spans)
}

/// Same recursion inside the enveloping algebra, graded by Lie degree.
pub fn subalgebra_spans_u(
    ctx: &Arc<LieContext>,
    gens: &[NCPolynomial],
    up_to: usize,
) -> Result<BTreeMap<usize, Subspace>> {
    let by_degree = split_env_homogeneous(ctx, gens);
    let mut spans: BTreeMap<usize, Subspace> = BTreeMap::new();
    for d in 1..=up_to {
        let dim = dim_u(ctx, d);
        let mut rows: Vec<Vec<Scalar>> = Vec::new();
        for g in by_degree.get(&d).into_iter().flatten() {
            rows.push(env_vector(ctx, g, d)?);
        }
        for e in 1..d {
            let Some(a_e) = spans.get(&e) else { continue };
            if a_e.dim() == 0 {
                continue;
            }
            let Some(right) = by_degree.get(&(d - e)) else { continue };
            for b in a_e.basis() {
                let left = env_from_vector(ctx, e, b)?;
                for g in right {
                    let prod = left.nc_mul(g)?;
                    rows.push(env_vector(ctx, &prod, d)?);
                }
            }
        }
        spans.insert(d, Subspace::from_vectors(dim, rows)?);
    }
    Ok(spans)
}

fn split_homogeneous(gens: &[NCPolynomial]) -> BTreeMap<usize, Vec<NCPolynomial>> {
    let mut by_degree: BTreeMap<usize, Vec<NCPolynomial>> = BTreeMap::new();
    for g in gens {
        for d in g.degrees() {
            if d == 0 {
                continue;
            }
            by_degree.entry(d).or_default().push(g.component(d));
        }
    }
    by_degree
}

fn split_env_homogeneous(
    ctx: &Arc<LieContext>,
    gens: &[NCPolynomial],
) -> BTreeMap<usize, Vec<NCPolynomial>> {
    let mut by_degree: BTreeMap<usize, Vec<NCPolynomial>> = BTreeMap::new();
    for g in gens {
        let mut split: BTreeMap<usize, Vec<(Word, Scalar)>> = BTreeMap::new();
        for (w, c) in g.terms() {
            split.entry(ctx.lie_degree(w)).or_default().push((w.clone(), c.clone()));
        }
        for (d, terms) in split {
            if d == 0 {
                continue;
            }
            by_degree
                .entry(d)
                .or_default()
                .push(NCPolynomial::from_terms(g.arena().clone(), terms));
        }
    }
    by_degree
}

/// Drop generators that already lie in the subalgebra generated by the kept
/// ones up to their own degree. The surjection from the symmetric side can
/// introduce relations, so minimality upstairs does not imply minimality
/// here.
fn prune<FSpan>(gens: Vec<NcGenerator>, mut span_contains: FSpan) -> Result<(Vec<NcGenerator>, usize)>
where
    FSpan: FnMut(&[NcGenerator], &NcGenerator) -> Result<bool>,
{
    let mut order: Vec<usize> = (0..gens.len()).collect();
    order.sort_by_key(|&i| gens[i].f_degree);
    let mut kept: Vec<NcGenerator> = Vec::new();
    let mut dropped = 0;
    for i in order {
        let cand = &gens[i];
        if span_contains(&kept, cand)? {
            dropped += 1;
        } else {
            kept.push(cand.clone());
        }
    }
    Ok((kept, dropped))
}

/// Observed degree bounds of a run: the maxima and the inequalities they are
/// required to satisfy, instantiated per run rather than over module classes.
pub fn bound_report(
    records: &[GeneratorRecord],
    gens: &[NcGenerator],
    p: usize,
    group_order: Option<usize>,
) -> BoundReport {
    let beta_comm = beta_commutative(records);
    let beta_nc = gens.iter().map(|g| g.f_degree).max().unwrap_or(0);
    BoundReport {
        beta_comm,
        beta_nc,
        p,
        group_order,
        inequality_pbeta: beta_nc <= p * beta_comm,
        inequality_noether: group_order.map(|o| beta_nc <= p * o),
    }
}

/// Generation check in the relatively free algebra: for every degree up to
/// `d_max`, the span of products of the generators must match the invariant
/// dimension exactly (trace average cross-checked against Reynolds rank).
pub fn verify_generation_f(
    group: &Arc<MatrixGroup>,
    rf: &Arc<RelFreeContext>,
    gens: &[NCPolynomial],
    d_max: usize,
) -> Result<VerificationReport> {
    let spans = subalgebra_spans_f(rf, gens, d_max)?;
    let mut rows = Vec::new();
    for d in 1..=d_max {
        let dim_subalgebra = spans[&d].dim();
        let action = relfree_action(group, rf, d)?;
        let dim_invariants = action.invariant_dimension_checked()?;
        rows.push(DegreeCheck { degree: d, dim_subalgebra, dim_invariants, equal: dim_subalgebra == dim_invariants });
    }
    let pass = rows.iter().all(|r| r.equal);
    Ok(VerificationReport { rows, max_checked_degree: d_max, pass })
}

/// Generation check inside the enveloping algebra, per Lie degree.
pub fn verify_generation_u(
    lie_action: &GradedAction,
    ctx: &Arc<LieContext>,
    gens: &[NCPolynomial],
    d_max: usize,
) -> Result<VerificationReport> {
    let spans = subalgebra_spans_u(ctx, gens, d_max)?;
    let mut rows = Vec::new();
    for d in 1..=d_max {
        let dim_subalgebra = spans[&d].dim();
        let action = enveloping_action(lie_action, ctx, d)?;
        let dim_invariants = action.invariant_dimension_checked()?;
        rows.push(DegreeCheck { degree: d, dim_subalgebra, dim_invariants, equal: dim_subalgebra == dim_invariants });
    }
    let pass = rows.iter().all(|r| r.equal);
    Ok(VerificationReport { rows, max_checked_degree: d_max, pass })
}

/// Exact invariance of every generator under every group element (generators
/// of the group would suffice; the full element list is cheap at this scale).
pub fn verify_invariance_f(group: &Arc<MatrixGroup>, gens: &[NCPolynomial]) -> Result<bool> {
    for g in group.elements() {
        for f in gens {
            if apply_to_relfree(g, f)? != *f {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

pub fn verify_invariance_u(lie_action: &GradedAction, gens: &[NCPolynomial]) -> Result<bool> {
    for m in lie_action.matrices() {
        for f in gens {
            if apply_to_enveloping(m, f)? != *f {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn resolve_records(
    lie_action: &GradedAction,
    ctx: &Arc<LieContext>,
    source: CommSource,
    degree_bound: usize,
) -> Result<Vec<GeneratorRecord>> {
    match source {
        CommSource::Minimal => minimal_generators(lie_action, ctx, degree_bound),
        CommSource::Imported(records) => Ok(records),
    }
}

/// Construct generators of the invariants of the relatively free algebra by
/// symmetrizing a multihomogeneous commutative generating system and pushing
/// it through the equivariant surjection. Exact zeros are dropped, redundant
/// images are pruned, and the result carries its verification and bound
/// reports.
pub fn construct_invariants_f(
    group: &Arc<MatrixGroup>,
    ctx: &Arc<LieContext>,
    rf: &Arc<RelFreeContext>,
    source: CommSource,
    opts: &PipelineOptions,
) -> Result<PipelineResult> {
    if ctx.n() != rf.n() || ctx.p() != rf.p() {
        return Err(Error::ContextMismatch);
    }
    if group.n() != ctx.n() {
        return Err(Error::DimensionMismatch { expected: ctx.n(), found: group.n() });
    }
    let p = ctx.p();
    let lie_action = lie_basis_action(group, ctx)?;
    let degree_bound = opts.degree_bound.unwrap_or(group.order());
    let verify_degree = opts.verify_degree.unwrap_or((p * degree_bound).min(opts.max_degree));
    if verify_degree > opts.max_degree {
        return Err(Error::DegreeCapExceeded { requested: verify_degree, cap: opts.max_degree });
    }
    let records = resolve_records(&lie_action, ctx, source, degree_bound)?;

    let (gens, skipped_above_cap) = transform_records_f(ctx, rf, &records, opts.max_degree)?;
    let (gens, pruned) = prune_generators_f(rf, gens)?;

    let polys: Vec<NCPolynomial> = gens.iter().map(|g| g.nc.clone()).collect();
    debug_assert!(verify_invariance_f(group, &polys)?);
    let verification = verify_generation_f(group, rf, &polys, verify_degree)?;
    let bounds = bound_report(&records, &gens, p, Some(group.order()));
    Ok(PipelineResult { generators: gens, records, skipped_above_cap, pruned, verification, bounds })
}

/// Symmetrize and project each record whose induced degree fits under the
/// cap, dropping exact zeros. Returns the images and the skipped count.
pub fn transform_records_f(
    ctx: &Arc<LieContext>,
    rf: &Arc<RelFreeContext>,
    records: &[GeneratorRecord],
    max_degree: usize,
) -> Result<(Vec<NcGenerator>, usize)> {
    let mut gens = Vec::new();
    let mut skipped_above_cap = 0;
    for r in records {
        if r.f_degree > max_degree {
            skipped_above_cap += 1;
            continue;
        }
        let symmetrized = iota_alpha(ctx, &r.poly)?;
        let nc = nf_f(rf, &symmetrized)?;
        if nc.is_zero() {
            continue;
        }
        debug_assert!(nc.degrees() == vec![r.f_degree]);
        gens.push(NcGenerator { nc, source: r.clone(), f_degree: r.f_degree });
    }
    Ok((gens, skipped_above_cap))
}

/// Apply the canonical bijection to each record under the cap. The bijection
/// is injective, so no image can vanish.
pub fn transform_records_u(
    ctx: &Arc<LieContext>,
    records: &[GeneratorRecord],
    max_degree: usize,
) -> Result<(Vec<NcGenerator>, usize)> {
    let mut gens = Vec::new();
    let mut skipped_above_cap = 0;
    for r in records {
        if r.f_degree > max_degree {
            skipped_above_cap += 1;
            continue;
        }
        let nc = omega(ctx, &r.poly);
        if nc.is_zero() {
            continue;
        }
        gens.push(NcGenerator { nc, source: r.clone(), f_degree: r.f_degree });
    }
    Ok((gens, skipped_above_cap))
}

pub fn prune_generators_f(
    rf: &Arc<RelFreeContext>,
    gens: Vec<NcGenerator>,
) -> Result<(Vec<NcGenerator>, usize)> {
    prune(gens, |kept, cand| {
        let polys: Vec<NCPolynomial> = kept.iter().map(|g| g.nc.clone()).collect();
        let spans = subalgebra_spans_f(rf, &polys, cand.f_degree)?;
        let v = relfree_vector(rf, &cand.nc, cand.f_degree)?;
        Ok(spans[&cand.f_degree].contains(&v))
    })
}

pub fn prune_generators_u(
    ctx: &Arc<LieContext>,
    gens: Vec<NcGenerator>,
) -> Result<(Vec<NcGenerator>, usize)> {
    prune(gens, |kept, cand| {
        let polys: Vec<NCPolynomial> = kept.iter().map(|g| g.nc.clone()).collect();
        let spans = subalgebra_spans_u(ctx, &polys, cand.f_degree)?;
        let v = env_vector(ctx, &cand.nc, cand.f_degree)?;
        Ok(spans[&cand.f_degree].contains(&v))
    })
}

/// The enveloping-algebra variant: the canonical bijection applied to the
/// same commutative source, verified per Lie degree through the grading that
/// the filtration induces.
pub fn construct_invariants_u(
    lie_action: &GradedAction,
    ctx: &Arc<LieContext>,
    source: CommSource,
    opts: &PipelineOptions,
) -> Result<PipelineResult> {
    let group = lie_action.group().clone();
    let p = ctx.p();
    let degree_bound = opts.degree_bound.unwrap_or(group.order());
    let verify_degree = opts.verify_degree.unwrap_or((p * degree_bound).min(opts.max_degree));
    if verify_degree > opts.max_degree {
        return Err(Error::DegreeCapExceeded { requested: verify_degree, cap: opts.max_degree });
    }
    let records = resolve_records(lie_action, ctx, source, degree_bound)?;

    let (gens, skipped_above_cap) = transform_records_u(ctx, &records, opts.max_degree)?;
    let (gens, pruned) = prune_generators_u(ctx, gens)?;

    let polys: Vec<NCPolynomial> = gens.iter().map(|g| g.nc.clone()).collect();
    debug_assert!(verify_invariance_u(lie_action, &polys)?);
    let verification = verify_generation_u(lie_action, ctx, &polys, verify_degree)?;
    let bounds = bound_report(&records, &gens, p, Some(group.order()));
    Ok(PipelineResult { generators: gens, records, skipped_above_cap, pruned, verification, bounds })
}

/// Push an enveloping-side result through the surjection onto the relatively
/// free algebra, for cross-checking the two pipelines against each other.
pub fn gamma_images(
    ctx: &Arc<LieContext>,
    rf: &Arc<RelFreeContext>,
    result: &PipelineResult,
) -> Result<Vec<NCPolynomial>> {
    result.generators.iter().map(|g| gamma(ctx, rf, &g.nc)).collect()
}
