//! The multigraded commutative polynomial algebra on the Lyndon basis
//! variables and minimal multihomogeneous generating systems of its invariant
//! rings under finite groups.
//!
//! Variables are indexed by the Lyndon basis of the nilpotent free Lie
//! algebra; a variable of Lie degree `i` contributes to slot `i` of the
//! multidegree. Minimality of generating systems is obtained degree by degree
//! as a complement of the decomposables, which is the standard fact for
//! graded connected algebras.

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::assoc::MultiDegree;
use crate::error::{Error, Result};
use crate::freelie::LieContext;
use crate::group::{s_alpha_action, GradedAction};
use crate::linalg::{Matrix, Subspace};
use crate::scalar::{format_scalar, parse_scalar, Scalar};

/// A commutative monomial: exponents over Lie basis variable indices, sorted,
/// with no zero entries stored.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CommMonomial {
    exps: Vec<(usize, u32)>,
}

impl CommMonomial {
    pub fn one() -> Self {
        CommMonomial { exps: Vec::new() }
    }

    pub fn variable(v: usize) -> Self {
        CommMonomial { exps: vec![(v, 1)] }
    }

    pub fn from_exps(iter: impl IntoIterator<Item = (usize, u32)>) -> Self {
        let mut map: BTreeMap<usize, u32> = BTreeMap::new();
        for (v, e) in iter {
            if e > 0 {
                *map.entry(v).or_insert(0) += e;
            }
        }
        CommMonomial { exps: map.into_iter().collect() }
    }

    pub fn exps(&self) -> &[(usize, u32)] {
        &self.exps
    }

    pub fn is_one(&self) -> bool {
        self.exps.is_empty()
    }

    /// Variable indices expanded with multiplicity, ascending.
    pub fn letters(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for &(v, e) in &self.exps {
            out.extend(std::iter::repeat_n(v, e as usize));
        }
        out
    }

    /// Number of variable factors, `|alpha|`.
    pub fn std_degree(&self) -> usize {
        self.exps.iter().map(|&(_, e)| e as usize).sum()
    }

    pub fn multidegree(&self, ctx: &LieContext) -> MultiDegree {
        let mut alpha = vec![0usize; ctx.p()];
        for &(v, e) in &self.exps {
            alpha[ctx.basis_degree(v) - 1] += e as usize;
        }
        MultiDegree(alpha)
    }

    /// The induced degree in the relatively free algebra,
    /// `sum of exp * (Lie degree of the variable)`.
    pub fn f_degree(&self, ctx: &LieContext) -> usize {
        self.exps.iter().map(|&(v, e)| e as usize * ctx.basis_degree(v)).sum()
    }

    pub fn mul(&self, other: &CommMonomial) -> CommMonomial {
        CommMonomial::from_exps(self.exps.iter().chain(other.exps.iter()).copied())
    }
}

impl std::fmt::Display for CommMonomial {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.exps.is_empty() {
            return write!(f, "1");
        }
        for (k, (v, e)) in self.exps.iter().enumerate() {
            if k > 0 {
                write!(f, "*")?;
            }
            if *e == 1 {
                write!(f, "y{v}")?;
            } else {
                write!(f, "y{v}^{e}")?;
            }
        }
        Ok(())
    }
}

/// A commutative polynomial in the Lie basis variables.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CommPolynomial {
    terms: BTreeMap<CommMonomial, Scalar>,
}

impl CommPolynomial {
    pub fn zero() -> Self {
        CommPolynomial { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        CommPolynomial::from_terms([(CommMonomial::one(), crate::scalar::int(1))])
    }

    pub fn variable(v: usize) -> Self {
        CommPolynomial::from_terms([(CommMonomial::variable(v), crate::scalar::int(1))])
    }

    pub fn from_terms(iter: impl IntoIterator<Item = (CommMonomial, Scalar)>) -> Self {
        let mut terms: BTreeMap<CommMonomial, Scalar> = BTreeMap::new();
        for (m, c) in iter {
            if c.is_zero() {
                continue;
            }
            let entry = terms.entry(m).or_insert_with(Scalar::zero);
            *entry += c;
        }
        terms.retain(|_, c| !c.is_zero());
        CommPolynomial { terms }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&CommMonomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &CommMonomial) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn add(&self, other: &CommPolynomial) -> CommPolynomial {
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            let entry = terms.entry(m.clone()).or_insert_with(Scalar::zero);
            *entry += c;
            if entry.is_zero() {
                terms.remove(m);
            }
        }
        CommPolynomial { terms }
    }

    pub fn sub(&self, other: &CommPolynomial) -> CommPolynomial {
        self.add(&other.scale(&crate::scalar::int(-1)))
    }

    pub fn scale(&self, s: &Scalar) -> CommPolynomial {
        if s.is_zero() {
            return CommPolynomial::zero();
        }
        CommPolynomial { terms: self.terms.iter().map(|(m, c)| (m.clone(), c * s)).collect() }
    }

    pub fn mul(&self, other: &CommPolynomial) -> CommPolynomial {
        let mut terms: BTreeMap<CommMonomial, Scalar> = BTreeMap::new();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let m = m1.mul(m2);
                let entry = terms.entry(m).or_insert_with(Scalar::zero);
                *entry += c1 * c2;
            }
        }
        terms.retain(|_, c| !c.is_zero());
        CommPolynomial { terms }
    }

    /// The common multidegree of all terms, or `None` when the polynomial is
    /// zero or not multihomogeneous.
    pub fn multidegree(&self, ctx: &LieContext) -> Option<MultiDegree> {
        let mut it = self.terms.keys();
        let first = it.next()?.multidegree(ctx);
        for m in it {
            if m.multidegree(ctx) != first {
                return None;
            }
        }
        Some(first)
    }
}

impl std::fmt::Display for CommPolynomial {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({}) {m}", format_scalar(c))?;
        }
        Ok(())
    }
}

/// Substitute every variable by the image column of a (graded) matrix on the
/// Lie basis and expand; the algebra-map extension of a basis action.
pub fn apply_lie_matrix(m: &Matrix, poly: &CommPolynomial) -> CommPolynomial {
    let mut acc = CommPolynomial::zero();
    for (mono, c) in poly.terms() {
        let mut prod = CommPolynomial::from_terms([(CommMonomial::one(), c.clone())]);
        for &(v, e) in mono.exps() {
            let column = CommPolynomial::from_terms(
                (0..m.rows()).map(|r| (CommMonomial::variable(r), m.get(r, v).clone())),
            );
            for _ in 0..e {
                prod = prod.mul(&column);
            }
        }
        acc = acc.add(&prod);
    }
    acc
}

/// All monomials of the given multidegree, in canonical (monomial order)
/// ascending order.
pub fn monomials_of_multidegree(ctx: &LieContext, alpha: &MultiDegree) -> Vec<CommMonomial> {
    assert_eq!(alpha.0.len(), ctx.p());
    // Multisets of size alpha_i from the degree-i variables, per degree.
    fn multisets(range: std::ops::Range<usize>, size: usize) -> Vec<Vec<(usize, u32)>> {
        fn rec(
            lo: usize,
            hi: usize,
            size: usize,
            acc: &mut Vec<(usize, u32)>,
            out: &mut Vec<Vec<(usize, u32)>>,
        ) {
            if size == 0 {
                out.push(acc.clone());
                return;
            }
            if lo >= hi {
                return;
            }
            for e in (0..=size as u32).rev() {
                if e > 0 {
                    acc.push((lo, e));
                }
                rec(lo + 1, hi, size - e as usize, acc, out);
                if e > 0 {
                    acc.pop();
                }
            }
        }
        let mut out = Vec::new();
        rec(range.start, range.end, size, &mut Vec::new(), &mut out);
        out
    }

    let mut partial: Vec<Vec<(usize, u32)>> = vec![Vec::new()];
    for d in 1..=ctx.p() {
        let need = alpha.0[d - 1];
        if need == 0 {
            continue;
        }
        let options = multisets(ctx.degree_range(d), need);
        let mut next = Vec::with_capacity(partial.len() * options.len());
        for base in &partial {
            for opt in &options {
                let mut combined = base.clone();
                combined.extend(opt.iter().copied());
                next.push(combined);
            }
        }
        partial = next;
    }
    let mut out: Vec<CommMonomial> =
        partial.into_iter().map(CommMonomial::from_exps).collect();
    out.sort();
    out
}

/// All monomials of standard degree `d` (any multidegree), ascending.
pub fn monomials_of_std_degree(ctx: &LieContext, d: usize) -> Vec<CommMonomial> {
    let mut out = Vec::new();
    for alpha in MultiDegree::compositions(d, ctx.p()) {
        out.extend(monomials_of_multidegree(ctx, &alpha));
    }
    out.sort();
    out
}

/// Coordinates of a polynomial over an indexed monomial list.
pub fn vectorize_comm(
    poly: &CommPolynomial,
    pos: &BTreeMap<CommMonomial, usize>,
    len: usize,
) -> Result<Vec<Scalar>> {
    let mut v = vec![Scalar::zero(); len];
    for (m, c) in poly.terms() {
        match pos.get(m) {
            Some(&i) => v[i] = c.clone(),
            None => {
                return Err(Error::Validation(format!("monomial {m} outside the component basis")))
            }
        }
    }
    Ok(v)
}

fn poly_from_vector(monos: &[CommMonomial], v: &[Scalar]) -> CommPolynomial {
    CommPolynomial::from_terms(
        monos.iter().zip(v.iter()).filter(|(_, c)| !c.is_zero()).map(|(m, c)| (m.clone(), c.clone())),
    )
}

/// A multihomogeneous invariant generator together with its degree data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorRecord {
    pub poly: CommPolynomial,
    pub alpha: MultiDegree,
    pub std_degree: usize,
    /// The induced degree `sum of i * alpha_i` of the image in the
    /// relatively free algebra.
    pub f_degree: usize,
}

impl GeneratorRecord {
    pub fn new(ctx: &LieContext, poly: CommPolynomial) -> Result<Self> {
        let alpha = poly
            .multidegree(ctx)
            .ok_or_else(|| Error::NotHomogeneous(format!("{poly} is not multihomogeneous")))?;
        let std_degree = alpha.total();
        let f_degree = alpha.induced_degree();
        Ok(GeneratorRecord { poly, alpha, std_degree, f_degree })
    }
}

/// Echelon basis of the invariants of the multidegree-`alpha` component under
/// the induced action. The trace-average and Reynolds-rank dimension oracles
/// are both evaluated and must agree.
pub fn invariant_basis_alpha(
    lie_action: &GradedAction,
    ctx: &LieContext,
    alpha: &MultiDegree,
) -> Result<Vec<CommPolynomial>> {
    let monos = monomials_of_multidegree(ctx, alpha);
    if monos.is_empty() {
        return Ok(Vec::new());
    }
    let action = s_alpha_action(lie_action, ctx, alpha)?;
    let dim = action.invariant_dimension_checked()?;
    let inv = action.invariant_subspace()?;
    debug_assert_eq!(inv.dim(), dim);
    Ok(inv.basis().iter().map(|v| poly_from_vector(&monos, v)).collect())
}

/// A minimal multihomogeneous generating system of the invariant ring, found
/// degree by degree up to the standard-degree bound: in each multidegree the
/// new generators are a deterministic complement of the decomposables inside
/// the invariants.
pub fn minimal_generators(
    lie_action: &GradedAction,
    ctx: &LieContext,
    degree_bound: usize,
) -> Result<Vec<GeneratorRecord>> {
    let p = ctx.p();
    let mut records: Vec<GeneratorRecord> = Vec::new();
    // Full invariant bases per (std degree, multidegree), for decomposables.
    let mut inv_bases: BTreeMap<(usize, MultiDegree), Vec<CommPolynomial>> = BTreeMap::new();

    for d in 1..=degree_bound {
        for alpha in MultiDegree::compositions(d, p) {
            let monos = monomials_of_multidegree(ctx, &alpha);
            if monos.is_empty() {
                continue;
            }
            let inv = invariant_basis_alpha(lie_action, ctx, &alpha)?;
            if inv.is_empty() {
                continue;
            }
            let pos: BTreeMap<CommMonomial, usize> =
                monos.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
            let inv_vectors: Vec<Vec<Scalar>> = inv
                .iter()
                .map(|f| vectorize_comm(f, &pos, monos.len()))
                .collect::<Result<_>>()?;
            let inv_span = Subspace::from_vectors(monos.len(), inv_vectors)?;

            // Decomposables: products of lower-degree invariants with
            // complementary multidegrees.
            let mut prods: Vec<Vec<Scalar>> = Vec::new();
            for e in 1..d {
                for beta in MultiDegree::compositions(e, p) {
                    if beta.0.iter().zip(&alpha.0).any(|(b, a)| b > a) {
                        continue;
                    }
                    let rest = MultiDegree(
                        alpha.0.iter().zip(&beta.0).map(|(a, b)| a - b).collect(),
                    );
                    let (Some(left), Some(right)) = (
                        inv_bases.get(&(e, beta.clone())),
                        inv_bases.get(&(d - e, rest.clone())),
                    ) else {
                        continue;
                    };
                    for f in left {
                        for g in right {
                            prods.push(vectorize_comm(&f.mul(g), &pos, monos.len())?);
                        }
                    }
                }
            }
            let decomp = Subspace::from_vectors(monos.len(), prods)?;
            debug_assert!(inv_span.contains_subspace(&decomp));
            let fresh = inv_span.quotient_complement(&decomp)?;
            for v in fresh.basis() {
                let poly = poly_from_vector(&monos, v);
                records.push(GeneratorRecord {
                    poly,
                    alpha: alpha.clone(),
                    std_degree: d,
                    f_degree: alpha.induced_degree(),
                });
            }
            // Every invariant of this multidegree now lies in the generated
            // subalgebra.
            debug_assert_eq!(decomp.dim() + fresh.dim(), inv_span.dim());
            inv_bases.insert((d, alpha), inv);
        }
    }
    Ok(records)
}

/// Maximum standard degree among the records (0 when empty).
pub fn beta_commutative(records: &[GeneratorRecord]) -> usize {
    records.iter().map(|r| r.std_degree).max().unwrap_or(0)
}

/// Wire format of one generator in a generator file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorFileEntry {
    pub alpha: Vec<usize>,
    pub terms: Vec<GeneratorFileTerm>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorFileTerm {
    pub exps: BTreeMap<String, u32>,
    pub coeff: String,
}

pub fn export_generators(records: &[GeneratorRecord]) -> Vec<GeneratorFileEntry> {
    records
        .iter()
        .map(|r| GeneratorFileEntry {
            alpha: r.alpha.0.clone(),
            terms: r
                .poly
                .terms()
                .map(|(m, c)| GeneratorFileTerm {
                    exps: m.exps().iter().map(|&(v, e)| (v.to_string(), e)).collect(),
                    coeff: format_scalar(c),
                })
                .collect(),
        })
        .collect()
}

/// Parse and validate generator file entries: every polynomial must be
/// multihomogeneous of its declared multidegree, and invariant under the
/// supplied action when one is given (a finite group is required for that
/// check; imports for non-finite groups pass with homogeneity checks only).
pub fn import_generators(
    entries: &[GeneratorFileEntry],
    ctx: &LieContext,
    lie_action: Option<&GradedAction>,
) -> Result<Vec<GeneratorRecord>> {
    let mut records = Vec::new();
    for (k, entry) in entries.iter().enumerate() {
        if entry.alpha.len() != ctx.p() {
            return Err(Error::Validation(format!(
                "generator {k}: alpha has {} slots, expected {}",
                entry.alpha.len(),
                ctx.p()
            )));
        }
        let mut terms = Vec::new();
        for t in &entry.terms {
            let mut exps = Vec::new();
            for (var, e) in &t.exps {
                let v: usize = var
                    .parse()
                    .map_err(|_| Error::Validation(format!("generator {k}: bad variable {var:?}")))?;
                if v >= ctx.dim() {
                    return Err(Error::Validation(format!(
                        "generator {k}: variable index {v} out of range (basis size {})",
                        ctx.dim()
                    )));
                }
                exps.push((v, *e));
            }
            terms.push((CommMonomial::from_exps(exps), parse_scalar(&t.coeff)?));
        }
        let poly = CommPolynomial::from_terms(terms);
        if poly.is_zero() {
            return Err(Error::Validation(format!("generator {k} is zero")));
        }
        let declared = MultiDegree(entry.alpha.clone());
        match poly.multidegree(ctx) {
            Some(alpha) if alpha == declared => {}
            Some(alpha) => {
                return Err(Error::Validation(format!(
                    "generator {k}: multidegree {alpha:?} does not match declared {declared:?}"
                )))
            }
            None => {
                return Err(Error::NotHomogeneous(format!("generator {k} is not multihomogeneous")))
            }
        }
        if let Some(action) = lie_action {
            for mat in action.matrices() {
                if apply_lie_matrix(mat, &poly) != poly {
                    return Err(Error::Validation(format!(
                        "generator {k} is not invariant under the supplied group"
                    )));
                }
            }
        }
        records.push(GeneratorRecord {
            poly,
            alpha: declared.clone(),
            std_degree: declared.total(),
            f_degree: declared.induced_degree(),
        });
    }
    Ok(records)
}

/// Collapse a word over the Lie basis variables into a commutative monomial:
/// the degreewise collapse map from the tensor side onto the symmetric side.
pub fn collapse_word(letters: &[usize]) -> CommMonomial {
    CommMonomial::from_exps(letters.iter().map(|&l| (l, 1u32)))
}
