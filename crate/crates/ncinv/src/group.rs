//! Finite rational matrix groups: breadth-first closure from generators,
//! induced actions on every graded component, Reynolds averaging, invariant
//! subspaces, and double-checked invariant-dimension oracles.

use std::collections::HashMap;
use std::sync::Arc;

use num_traits::{One, ToPrimitive, Zero};

use crate::assoc::{pbw_monomials, words_of_degree, Arena, MultiDegree, NCPolynomial, RelFreeContext};
use crate::comm::{apply_lie_matrix, monomials_of_multidegree, vectorize_comm};
use crate::error::{Error, Result};
use crate::freelie::{LieContext, LieElement, Word};
use crate::linalg::{kernel, Matrix, Subspace};
use crate::scalar::{format_scalar, int, Scalar};

/// A finite group of exact-rational invertible matrices, closed under
/// products. Elements are listed in breadth-first discovery order, which is
/// the deterministic order used in every output.
pub struct MatrixGroup {
    n: usize,
    generators: Vec<Matrix>,
    elements: Vec<Matrix>,
    index: HashMap<Matrix, usize>,
    /// For each non-identity element, `(parent, generator)` with
    /// `element = elements[parent] * generators[generator]`.
    provenance: Vec<Option<(usize, usize)>>,
    generator_elements: Vec<usize>,
}

impl MatrixGroup {
    /// Breadth-first closure of the generators under multiplication. Errors
    /// if a generator is singular or not `n x n`, or if more than `cap`
    /// elements are found (the group is then not verified finite).
    pub fn close(n: usize, generators: Vec<Matrix>, cap: usize) -> Result<Arc<MatrixGroup>> {
        for g in &generators {
            if g.rows() != n || g.cols() != n {
                return Err(Error::DimensionMismatch { expected: n, found: g.rows() });
            }
            g.inverse()?;
        }
        let mut elements = vec![Matrix::identity(n)];
        let mut index = HashMap::new();
        index.insert(elements[0].clone(), 0);
        let mut provenance: Vec<Option<(usize, usize)>> = vec![None];
        let mut cursor = 0;
        while cursor < elements.len() {
            for gi in 0..generators.len() {
                let prod = elements[cursor].mul(&generators[gi])?;
                if !index.contains_key(&prod) {
                    if elements.len() >= cap {
                        return Err(Error::GroupCapExceeded { cap });
                    }
                    index.insert(prod.clone(), elements.len());
                    elements.push(prod);
                    provenance.push(Some((cursor, gi)));
                }
            }
            cursor += 1;
        }
        let generator_elements = generators.iter().map(|g| index[g]).collect();
        Ok(Arc::new(MatrixGroup { n, generators, elements, index, provenance, generator_elements }))
    }

    pub fn trivial(n: usize) -> Arc<MatrixGroup> {
        MatrixGroup::close(n, Vec::new(), 1).expect("the trivial group always closes")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn generators(&self) -> &[Matrix] {
        &self.generators
    }

    pub fn elements(&self) -> &[Matrix] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &Matrix {
        &self.elements[i]
    }

    pub fn element_index(&self, m: &Matrix) -> Option<usize> {
        self.index.get(m).copied()
    }

    pub fn provenance(&self, i: usize) -> Option<(usize, usize)> {
        self.provenance[i]
    }

    /// Element index of the `gi`-th generator.
    pub fn generator_element(&self, gi: usize) -> usize {
        self.generator_elements[gi]
    }
}

impl std::fmt::Debug for MatrixGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("MatrixGroup")
            .field("n", &self.n)
            .field("order", &self.order())
            .finish()
    }
}

/// Which graded component a [`GradedAction`] lives on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ActionTarget {
    /// Degree-`d` component of the tensor algebra, word basis.
    TensorDeg(usize),
    /// Degree-`d` component of the relatively free algebra, representative
    /// word basis.
    RelFreeDeg(usize),
    /// The multidegree-`alpha` component of the symmetric algebra on the Lie
    /// basis, monomial basis.
    SAlpha(MultiDegree),
    /// The Lyndon basis of the nilpotent free Lie algebra.
    LieBasis,
    /// The Lie-degree-`d` graded component of the enveloping algebra, PBW
    /// monomial basis.
    EnvelopingDeg(usize),
}

/// Per-element action matrices of a finite group on one graded component, in
/// the component's canonical basis and the group's element order.
pub struct GradedAction {
    group: Arc<MatrixGroup>,
    target: ActionTarget,
    dim: usize,
    matrices: Vec<Matrix>,
}

impl GradedAction {
    pub fn group(&self) -> &Arc<MatrixGroup> {
        &self.group
    }

    pub fn target(&self) -> &ActionTarget {
        &self.target
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self, i: usize) -> &Matrix {
        &self.matrices[i]
    }

    pub fn matrices(&self) -> &[Matrix] {
        &self.matrices
    }

    /// The averaging projection `(1/|G|) sum of rho(g) v` onto the invariant
    /// subspace.
    pub fn reynolds(&self, v: &[Scalar]) -> Result<Vec<Scalar>> {
        if v.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: v.len() });
        }
        let mut acc = vec![Scalar::zero(); self.dim];
        for m in &self.matrices {
            for (a, x) in acc.iter_mut().zip(m.mul_vec(v)?) {
                *a += x;
            }
        }
        let scale = crate::scalar::frac(1, self.group.order() as i64);
        for a in &mut acc {
            *a *= &scale;
        }
        Ok(acc)
    }

    /// The averaged projector matrix.
    pub fn reynolds_matrix(&self) -> Matrix {
        let mut acc = Matrix::zero(self.dim, self.dim);
        for m in &self.matrices {
            acc = acc.add(m).expect("equal dims");
        }
        acc.scale(&crate::scalar::frac(1, self.group.order() as i64))
    }

    /// Image of the Reynolds projector, echelonized.
    pub fn invariant_subspace(&self) -> Result<Subspace> {
        let p = self.reynolds_matrix();
        let cols: Vec<Vec<Scalar>> = (0..self.dim).map(|c| p.col(c)).collect();
        Subspace::from_vectors(self.dim, cols)
    }

    /// The same subspace computed independently as the kernel of the stacked
    /// system `rho(g) - I` over all elements.
    pub fn invariant_subspace_kernel_route(&self) -> Result<Subspace> {
        let rows = self.dim * self.group.order();
        let mut stacked = Matrix::zero(rows, self.dim);
        for (k, m) in self.matrices.iter().enumerate() {
            for r in 0..self.dim {
                for c in 0..self.dim {
                    let mut v = m.get(r, c).clone();
                    if r == c {
                        v -= Scalar::one();
                    }
                    *stacked.get_mut(k * self.dim + r, c) = v;
                }
            }
        }
        Subspace::from_vectors(self.dim, kernel(&stacked))
    }

    /// Exact invariant dimension by trace averaging; a non-integer average is
    /// reported as an implementation bug.
    pub fn invariant_dimension(&self) -> Result<usize> {
        let mut total = Scalar::zero();
        for m in &self.matrices {
            total += m.trace();
        }
        let avg = total / int(self.group.order() as i64);
        if !avg.is_integer() || avg < Scalar::zero() {
            return Err(Error::NonIntegerTrace(format_scalar(&avg)));
        }
        avg.to_integer()
            .to_usize()
            .ok_or_else(|| Error::NonIntegerTrace(format_scalar(&avg)))
    }

    /// Both invariant-dimension oracles (trace average and Reynolds rank);
    /// any disagreement aborts the computation.
    pub fn invariant_dimension_checked(&self) -> Result<usize> {
        let trace = self.invariant_dimension()?;
        let rank = self.invariant_subspace()?.dim();
        if trace != rank {
            return Err(Error::OracleMismatch { trace, rank });
        }
        Ok(trace)
    }
}

impl std::fmt::Debug for GradedAction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("GradedAction")
            .field("target", &self.target)
            .field("dim", &self.dim)
            .field("order", &self.group.order())
            .finish()
    }
}

/// Build per-element matrices from per-generator matrices using the BFS
/// provenance: each element's matrix is its parent's times a generator's.
fn action_from_generators(
    group: &Arc<MatrixGroup>,
    target: ActionTarget,
    dim: usize,
    gen_mats: Vec<Matrix>,
) -> Result<GradedAction> {
    let mut matrices = Vec::with_capacity(group.order());
    matrices.push(Matrix::identity(dim));
    for idx in 1..group.order() {
        let (parent, gi) = group.provenance(idx).expect("non-identity element");
        let m = matrices[parent].mul(&gen_mats[gi])?;
        matrices.push(m);
    }
    Ok(GradedAction { group: group.clone(), target, dim, matrices })
}

/// Dense coefficient expansion of a group element acting on one word: entry
/// `i` is the coefficient of the `i`-th word of the same degree.
fn expand_word_action(g: &Matrix, word: &Word) -> Vec<Scalar> {
    let n = g.rows();
    let mut cur = vec![Scalar::one()];
    for &letter in &word.0 {
        let mut next = vec![Scalar::zero(); cur.len() * n];
        for (idx, coeff) in cur.iter().enumerate() {
            if coeff.is_zero() {
                continue;
            }
            for r in 0..n {
                let e = g.get(r, letter);
                if !e.is_zero() {
                    next[idx * n + r] += coeff * e;
                }
            }
        }
        cur = next;
    }
    cur
}

/// Induced action on the degree-`d` tensor component.
pub fn tensor_action(group: &Arc<MatrixGroup>, d: usize) -> Result<GradedAction> {
    let n = group.n();
    let words = words_of_degree(n, d);
    let dim = words.len();
    let mut gen_mats = Vec::new();
    for g in group.generators() {
        let mut m = Matrix::zero(dim, dim);
        for (j, w) in words.iter().enumerate() {
            for (i, c) in expand_word_action(g, w).into_iter().enumerate() {
                if !c.is_zero() {
                    *m.get_mut(i, j) = c;
                }
            }
        }
        gen_mats.push(m);
    }
    action_from_generators(group, ActionTarget::TensorDeg(d), dim, gen_mats)
}

/// Induced action on the degree-`d` component of the relatively free algebra:
/// the tensor action pushed through the normal form. Well defined because the
/// T-ideal component is stable under the full general linear group.
pub fn relfree_action(
    group: &Arc<MatrixGroup>,
    rf: &Arc<RelFreeContext>,
    d: usize,
) -> Result<GradedAction> {
    if group.n() != rf.n() {
        return Err(Error::DimensionMismatch { expected: rf.n(), found: group.n() });
    }
    let data = rf.degree_data(d)?;
    let dim = data.rep_words.len();
    let mut gen_mats = Vec::new();
    for g in group.generators() {
        let mut m = Matrix::zero(dim, dim);
        for (j, w) in data.rep_words.iter().enumerate() {
            for (widx, c) in expand_word_action(g, w).into_iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                for (pos, r) in data.reduce_word(widx) {
                    *m.get_mut(*pos, j) += &c * r;
                }
            }
        }
        gen_mats.push(m);
    }
    action_from_generators(group, ActionTarget::RelFreeDeg(d), dim, gen_mats)
}

/// Lift a group acting on the degree-one space to the full Lyndon basis of
/// the nilpotent free Lie algebra.
pub fn lie_basis_action(group: &Arc<MatrixGroup>, ctx: &Arc<LieContext>) -> Result<GradedAction> {
    if group.n() != ctx.n() {
        return Err(Error::DimensionMismatch { expected: ctx.n(), found: group.n() });
    }
    let dim = ctx.dim();
    let mut gen_mats = Vec::new();
    for g in group.generators() {
        let mut m = Matrix::zero(dim, dim);
        for j in 0..dim {
            let el = LieElement::from_coeffs(ctx, std::collections::BTreeMap::from([(j, int(1))]));
            let image = ctx.gl_action_unchecked(g, &el)?;
            for (i, c) in image.coeffs() {
                *m.get_mut(*i, j) = c.clone();
            }
        }
        gen_mats.push(m);
    }
    action_from_generators(group, ActionTarget::LieBasis, dim, gen_mats)
}

/// Accept a group given directly by matrices on the Lie basis. Each matrix
/// must be graded (no mixing between Lie degrees) and a Lie algebra
/// automorphism against the stored structure constants; the closure then
/// happens on the basis matrices themselves.
pub fn lie_action_from_automorphisms(
    ctx: &Arc<LieContext>,
    mats: Vec<Matrix>,
    cap: usize,
) -> Result<(Arc<MatrixGroup>, GradedAction)> {
    let dim = ctx.dim();
    for (k, m) in mats.iter().enumerate() {
        if m.rows() != dim || m.cols() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: m.rows() });
        }
        for r in 0..dim {
            for c in 0..dim {
                if ctx.basis_degree(r) != ctx.basis_degree(c) && !m.get(r, c).is_zero() {
                    return Err(Error::Validation(format!(
                        "matrix {k} mixes Lie degrees {} and {}; only graded automorphisms are accepted",
                        ctx.basis_degree(c),
                        ctx.basis_degree(r)
                    )));
                }
            }
        }
        let column = |j: usize| {
            LieElement::from_coeffs(
                ctx,
                (0..dim).filter(|&r| !m.get(r, j).is_zero()).map(|r| (r, m.get(r, j).clone())).collect(),
            )
        };
        for i in 0..dim {
            for j in (i + 1)..dim {
                let lhs = {
                    let bracket = ctx.basis_bracket(i, j);
                    let mut acc = LieElement::zero(ctx);
                    for (idx, c) in bracket.coeffs() {
                        acc = acc.add(&column(*idx).scale(c))?;
                    }
                    acc
                };
                let rhs = ctx.bracket(&column(i), &column(j))?;
                if lhs != rhs {
                    return Err(Error::Validation(format!(
                        "matrix {k} is not a Lie algebra automorphism: fails on basis pair ({i}, {j})"
                    )));
                }
            }
        }
    }
    let group = MatrixGroup::close(dim, mats, cap)?;
    let matrices = group.elements().to_vec();
    let action = GradedAction { group: group.clone(), target: ActionTarget::LieBasis, dim, matrices };
    Ok((group, action))
}

/// Extend a Lie-basis action multiplicatively to the multidegree-`alpha`
/// component of the symmetric algebra.
pub fn s_alpha_action(
    lie_action: &GradedAction,
    ctx: &LieContext,
    alpha: &MultiDegree,
) -> Result<GradedAction> {
    if lie_action.target != ActionTarget::LieBasis {
        return Err(Error::Validation("expected a Lie basis action".into()));
    }
    let group = lie_action.group.clone();
    let monos = monomials_of_multidegree(ctx, alpha);
    let dim = monos.len();
    let pos: std::collections::BTreeMap<crate::comm::CommMonomial, usize> =
        monos.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
    let mut gen_mats = Vec::new();
    for gi in 0..group.generators().len() {
        let lie_mat = lie_action.matrix(group.generator_element(gi));
        let mut m = Matrix::zero(dim, dim);
        for (j, mono) in monos.iter().enumerate() {
            let image = apply_lie_matrix(
                lie_mat,
                &crate::comm::CommPolynomial::from_terms([(mono.clone(), int(1))]),
            );
            for (i, c) in vectorize_comm(&image, &pos, dim)?.into_iter().enumerate() {
                if !c.is_zero() {
                    *m.get_mut(i, j) = c;
                }
            }
        }
        gen_mats.push(m);
    }
    action_from_generators(&group, ActionTarget::SAlpha(alpha.clone()), dim, gen_mats)
}

/// Extend a Lie-basis action to the Lie-degree-`d` graded component of the
/// enveloping algebra in the PBW basis.
pub fn enveloping_action(
    lie_action: &GradedAction,
    ctx: &Arc<LieContext>,
    d: usize,
) -> Result<GradedAction> {
    if lie_action.target != ActionTarget::LieBasis {
        return Err(Error::Validation("expected a Lie basis action".into()));
    }
    let group = lie_action.group.clone();
    let basis = pbw_monomials(ctx, d);
    let dim = basis.len();
    let pos: std::collections::BTreeMap<Word, usize> =
        basis.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect();
    let mut gen_mats = Vec::new();
    for gi in 0..group.generators().len() {
        let lie_mat = lie_action.matrix(group.generator_element(gi));
        let mut m = Matrix::zero(dim, dim);
        for (j, mono) in basis.iter().enumerate() {
            let image = apply_lie_matrix_to_enveloping(lie_mat, ctx, mono)?;
            for (w, c) in image.terms() {
                *m.get_mut(pos[w], j) = c.clone();
            }
        }
        gen_mats.push(m);
    }
    action_from_generators(&group, ActionTarget::EnvelopingDeg(d), dim, gen_mats)
}

/// Apply a Lie-basis matrix to a PBW monomial: the product of the images of
/// its letters, straightened.
pub fn apply_lie_matrix_to_enveloping(
    lie_mat: &Matrix,
    ctx: &Arc<LieContext>,
    word: &Word,
) -> Result<NCPolynomial> {
    let arena = Arena::Enveloping(ctx.clone());
    let mut prod = NCPolynomial::one(arena.clone());
    for &letter in &word.0 {
        let factor = NCPolynomial::from_terms(
            arena.clone(),
            (0..ctx.dim()).map(|r| (Word::letter(r), lie_mat.get(r, letter).clone())),
        );
        prod = prod.nc_mul(&factor)?;
    }
    Ok(prod)
}

/// Apply a group element to a tensor polynomial as an algebra automorphism
/// (substitute each letter by its image).
pub fn apply_to_tensor(g: &Matrix, t: &NCPolynomial) -> Result<NCPolynomial> {
    let Arena::Tensor { n } = t.arena() else {
        return Err(Error::ArenaMismatch);
    };
    let n = *n;
    if g.rows() != n || g.cols() != n {
        return Err(Error::DimensionMismatch { expected: n, found: g.rows() });
    }
    let mut out = NCPolynomial::zero(t.arena().clone());
    for (w, c) in t.terms() {
        let coeffs = expand_word_action(g, w);
        let words = words_of_degree(n, w.degree());
        let terms: Vec<(Word, Scalar)> = coeffs
            .into_iter()
            .enumerate()
            .filter(|(_, x)| !x.is_zero())
            .map(|(i, x)| (words[i].clone(), c * x))
            .collect();
        out = out.add(&NCPolynomial::from_terms(t.arena().clone(), terms))?;
    }
    Ok(out)
}

/// Apply a group element to a relatively free element: act on a tensor lift
/// and renormalize.
pub fn apply_to_relfree(g: &Matrix, t: &NCPolynomial) -> Result<NCPolynomial> {
    let Arena::RelFree(rf) = t.arena().clone() else {
        return Err(Error::ArenaMismatch);
    };
    let acted = apply_to_tensor(g, &t.lift_to_tensor()?)?;
    crate::assoc::nf_f(&rf, &acted)
}

/// Apply a Lie-basis matrix to an enveloping element.
pub fn apply_to_enveloping(lie_mat: &Matrix, u: &NCPolynomial) -> Result<NCPolynomial> {
    let Arena::Enveloping(ctx) = u.arena().clone() else {
        return Err(Error::ArenaMismatch);
    };
    let mut out = NCPolynomial::zero(u.arena().clone());
    for (w, c) in u.terms() {
        let image = apply_lie_matrix_to_enveloping(lie_mat, &ctx, w)?;
        out = out.add(&image.scale(c))?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assoc::nf_f;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn rotation() -> Matrix {
        Matrix::from_i64(&[&[0, -1], &[1, 0]])
    }

    fn neg_identity() -> Matrix {
        Matrix::from_i64(&[&[-1, 0], &[0, -1]])
    }

    fn dihedral_generators() -> Vec<Matrix> {
        vec![rotation(), Matrix::from_i64(&[&[1, 0], &[0, -1]])]
    }

    #[test]
    fn closure_examples() {
        assert_eq!(MatrixGroup::close(2, vec![], 8).unwrap().order(), 1);
        assert_eq!(MatrixGroup::close(2, vec![neg_identity()], 8).unwrap().order(), 2);

        let c4 = MatrixGroup::close(2, vec![rotation()], 8).unwrap();
        assert_eq!(c4.order(), 4);
        // BFS discovery order: I, R, R^2, R^3
        let r = rotation();
        assert_eq!(c4.element(0), &Matrix::identity(2));
        assert_eq!(c4.element(1), &r);
        assert_eq!(c4.element(2), &r.mul(&r).unwrap());
        assert_eq!(c4.element(3), &r.mul(&r).unwrap().mul(&r).unwrap());

        assert_eq!(MatrixGroup::close(2, dihedral_generators(), 16).unwrap().order(), 8);
    }

    #[test]
    fn closure_rejects_bad_input() {
        let singular = Matrix::from_i64(&[&[1, 0], &[0, 0]]);
        assert!(matches!(
            MatrixGroup::close(2, vec![singular], 8),
            Err(Error::SingularMatrix)
        ));

        // an infinite group hits the cap
        let shear = Matrix::from_i64(&[&[1, 1], &[0, 1]]);
        assert!(matches!(
            MatrixGroup::close(2, vec![shear], 64),
            Err(Error::GroupCapExceeded { cap: 64 })
        ));
    }

    #[test]
    fn tensor_action_examples() {
        // the trivial group acts by identity matrices
        let trivial = MatrixGroup::trivial(2);
        let action = tensor_action(&trivial, 2).unwrap();
        assert_eq!(action.matrices(), &[Matrix::identity(4)]);

        // -I acts trivially in even degree
        let sign = MatrixGroup::close(2, vec![neg_identity()], 8).unwrap();
        let action = tensor_action(&sign, 2).unwrap();
        assert_eq!(action.matrix(1), &Matrix::identity(4));
        assert_eq!(action.invariant_dimension_checked().unwrap(), 4);

        // and by -1 in odd degree
        let action = tensor_action(&sign, 1).unwrap();
        assert_eq!(action.invariant_dimension_checked().unwrap(), 0);
    }

    #[test]
    fn representation_property_random() {
        let mut rng = StdRng::seed_from_u64(17);
        let group = MatrixGroup::close(2, dihedral_generators(), 16).unwrap();
        let action = tensor_action(&group, 3).unwrap();
        for _ in 0..10 {
            let i = rng.random_range(0..group.order());
            let j = rng.random_range(0..group.order());
            let gh = group.element(i).mul(group.element(j)).unwrap();
            let k = group.element_index(&gh).unwrap();
            assert_eq!(action.matrix(i).mul(action.matrix(j)).unwrap(), *action.matrix(k));
        }
    }

    #[test]
    fn reynolds_is_idempotent_and_projects() {
        let mut rng = StdRng::seed_from_u64(19);
        let group = MatrixGroup::close(2, vec![rotation()], 8).unwrap();
        let action = tensor_action(&group, 2).unwrap();
        for _ in 0..5 {
            let v: Vec<Scalar> = (0..action.dim()).map(|_| int(rng.random_range(-3..=3))).collect();
            let once = action.reynolds(&v).unwrap();
            let twice = action.reynolds(&once).unwrap();
            assert_eq!(once, twice);
            // images are invariant under every element
            for m in action.matrices() {
                assert_eq!(m.mul_vec(&once).unwrap(), once);
            }
        }
        // invariant vectors are fixed
        let sign = MatrixGroup::close(2, vec![neg_identity()], 8).unwrap();
        let odd = tensor_action(&sign, 1).unwrap();
        let x = vec![int(1), int(0)];
        assert_eq!(odd.reynolds(&x).unwrap(), vec![int(0), int(0)]);
    }

    #[test]
    fn invariant_subspace_routes_agree() {
        for gens in [vec![neg_identity()], vec![rotation()], dihedral_generators()] {
            let group = MatrixGroup::close(2, gens, 16).unwrap();
            for d in 1..=3 {
                let action = tensor_action(&group, d).unwrap();
                let a = action.invariant_subspace().unwrap();
                let b = action.invariant_subspace_kernel_route().unwrap();
                assert_eq!(a, b, "order {} degree {d}", group.order());
                assert_eq!(a.dim(), action.invariant_dimension_checked().unwrap());
            }
        }
    }

    #[test]
    fn relfree_action_examples() {
        // -I on F(N_2, K^2)_3: odd degree kills everything
        let sign = MatrixGroup::close(2, vec![neg_identity()], 8).unwrap();
        let rf = RelFreeContext::new(2, 2, 8);
        let action = relfree_action(&sign, &rf, 3).unwrap();
        assert_eq!(action.dim(), 6);
        assert_eq!(action.invariant_dimension_checked().unwrap(), 0);

        let action = relfree_action(&sign, &rf, 2).unwrap();
        assert_eq!(action.invariant_dimension_checked().unwrap(), 4);
    }

    #[test]
    fn lie_and_s_alpha_actions() {
        let ctx = LieContext::new(2, 2);
        let sign = MatrixGroup::close(2, vec![neg_identity()], 8).unwrap();
        let lie = lie_basis_action(&sign, &ctx).unwrap();
        // -I fixes the bracket variable (degree 2) and negates the letters
        let m = lie.matrix(1);
        assert_eq!(m.get(0, 0), &int(-1));
        assert_eq!(m.get(2, 2), &int(1));

        // on the component of the bracket variable the action is trivial
        let alpha = MultiDegree(vec![0, 1]);
        let action = s_alpha_action(&lie, &ctx, &alpha).unwrap();
        assert_eq!(action.matrices()[1], Matrix::identity(1));
        assert_eq!(action.invariant_dimension_checked().unwrap(), 1);
    }

    #[test]
    fn enveloping_action_respects_grading() {
        let ctx = LieContext::new(2, 2);
        let group = MatrixGroup::close(2, dihedral_generators(), 16).unwrap();
        let lie = lie_basis_action(&group, &ctx).unwrap();
        for d in 1..=4 {
            let action = enveloping_action(&lie, &ctx, d).unwrap();
            assert_eq!(action.dim(), crate::assoc::dim_u(&ctx, d));
            // double oracle agreement on every constructed action
            action.invariant_dimension_checked().unwrap();
        }
    }

    #[test]
    fn automorphism_input_validation() {
        let ctx = LieContext::new(2, 2);
        // the lift of -I is a genuine graded automorphism
        let lifted = Matrix::from_rows(vec![
            vec![int(-1), int(0), int(0)],
            vec![int(0), int(-1), int(0)],
            vec![int(0), int(0), int(1)],
        ])
        .unwrap();
        let (group, action) = lie_action_from_automorphisms(&ctx, vec![lifted], 8).unwrap();
        assert_eq!(group.order(), 2);
        assert_eq!(action.matrices().len(), 2);

        // flipping the sign on the bracket variable breaks the automorphism law
        let wrong = Matrix::from_rows(vec![
            vec![int(-1), int(0), int(0)],
            vec![int(0), int(-1), int(0)],
            vec![int(0), int(0), int(-1)],
        ])
        .unwrap();
        assert!(lie_action_from_automorphisms(&ctx, vec![wrong], 8).is_err());

        // mixing degrees is rejected
        let mixing = Matrix::from_rows(vec![
            vec![int(1), int(0), int(1)],
            vec![int(0), int(1), int(0)],
            vec![int(0), int(0), int(1)],
        ])
        .unwrap();
        assert!(lie_action_from_automorphisms(&ctx, vec![mixing], 8).is_err());
    }

    #[test]
    fn normal_form_is_equivariant() {
        // nf(g . t) = g . nf(t) for all elements of a dihedral group
        let mut rng = StdRng::seed_from_u64(29);
        let group = MatrixGroup::close(2, dihedral_generators(), 16).unwrap();
        let rf = RelFreeContext::new(2, 2, 6);
        for _ in 0..5 {
            let len = rng.random_range(3..=4);
            let word = Word((0..len).map(|_| rng.random_range(0..2)).collect());
            let t = NCPolynomial::from_terms(Arena::tensor(2), [(word, int(1))]);
            let t_nf = nf_f(&rf, &t).unwrap();
            for g in group.elements() {
                let lhs = nf_f(&rf, &apply_to_tensor(g, &t).unwrap()).unwrap();
                let rhs = apply_to_relfree(g, &t_nf).unwrap();
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn s_alpha_action_matches_multiplicative_extension() {
        // acting on a product of variables equals the product of the acted
        // variables, for the rotation group on a quadratic component
        let ctx = LieContext::new(2, 2);
        let group = MatrixGroup::close(2, vec![rotation()], 8).unwrap();
        let lie = lie_basis_action(&group, &ctx).unwrap();
        let alpha = MultiDegree(vec![2, 0]);
        let monos = monomials_of_multidegree(&ctx, &alpha);
        let action = s_alpha_action(&lie, &ctx, &alpha).unwrap();
        let pos: std::collections::BTreeMap<_, _> =
            monos.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        for (k, lie_mat) in lie.matrices().iter().enumerate() {
            for (j, mono) in monos.iter().enumerate() {
                let image = apply_lie_matrix(
                    lie_mat,
                    &crate::comm::CommPolynomial::from_terms([(mono.clone(), int(1))]),
                );
                let v = vectorize_comm(&image, &pos, monos.len()).unwrap();
                for (i, c) in v.iter().enumerate() {
                    assert_eq!(action.matrix(k).get(i, j), c);
                }
            }
        }
    }
}
