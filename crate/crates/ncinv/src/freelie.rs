//! Lyndon-word bases of free Lie algebras, the relatively free nilpotent Lie
//! algebra of a fixed nilpotency index, structure constants, and the induced
//! general-linear action.
//!
//! The degree-`d` Lie component inside the tensor algebra is realized through
//! the classical right standard factorization of Lyndon words: the bracketing
//! of the Lyndon words of length `d` is a basis, triangular against the word
//! order, which keeps the projection back from tensors a solvable system.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::assoc::{words_of_degree, Arena, NCPolynomial};
use crate::error::{Error, Result};
use crate::linalg::{rref_with_transform, Matrix, Subspace};
use crate::scalar::Scalar;

/// A word over generator indices `0..n`.
///
/// Ordered by degree first, then lexicographically; this is the term order
/// used for every monomial key in the crate.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Word(pub Vec<usize>);

impl Word {
    pub fn empty() -> Word {
        Word(Vec::new())
    }

    pub fn letter(i: usize) -> Word {
        Word(vec![i])
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl std::fmt::Display for Word {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(")?;
        for (k, l) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{l}")?;
        }
        write!(f, ")")
    }
}

/// A nonempty word strictly smaller (lexicographically) than every proper
/// rotation of itself.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LyndonWord(Word);

impl LyndonWord {
    pub fn new(w: Word) -> Result<Self> {
        if is_lyndon(&w) {
            Ok(LyndonWord(w))
        } else {
            Err(Error::Validation(format!("{w} is not a Lyndon word")))
        }
    }

    pub fn word(&self) -> &Word {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.degree()
    }

    /// Right standard factorization `w = u v` with `v` the lexicographically
    /// least proper suffix; both factors are again Lyndon.
    pub fn standard_factorization(&self) -> (LyndonWord, LyndonWord) {
        let letters = &self.0 .0;
        assert!(letters.len() >= 2, "single letters do not factor");
        let mut best = 1;
        for s in 2..letters.len() {
            if letters[s..] < letters[best..] {
                best = s;
            }
        }
        (
            LyndonWord(Word(letters[..best].to_vec())),
            LyndonWord(Word(letters[best..].to_vec())),
        )
    }
}

/// Lexicographic comparison against all proper rotations, strict.
pub fn is_lyndon(w: &Word) -> bool {
    let v = &w.0;
    if v.is_empty() {
        return false;
    }
    for r in 1..v.len() {
        let rotation = v[r..].iter().chain(v[..r].iter());
        if !(v.iter().lt(rotation)) {
            return false;
        }
    }
    true
}

/// All Lyndon words of length `d` over `n` letters, in lexicographic order.
/// The count equals [`witt`]`(n, d)`.
pub fn lyndon_words(n: usize, d: usize) -> Vec<LyndonWord> {
    assert!(n >= 1 && d >= 1);
    // Duval's generation of Lyndon words of length <= d in lex order.
    let mut out = Vec::new();
    let mut w: Vec<usize> = vec![0];
    loop {
        if w.len() == d {
            out.push(LyndonWord(Word(w.clone())));
        }
        let m = w.len();
        while w.len() < d {
            let next = w[w.len() % m];
            w.push(next);
        }
        while w.last() == Some(&(n - 1)) {
            w.pop();
        }
        if w.is_empty() {
            break;
        }
        *w.last_mut().unwrap() += 1;
    }
    out
}

/// Dimension of the degree-`d` component of the free Lie algebra on `n`
/// generators: `(1/d) * sum over e | d of moebius(e) * n^(d/e)`.
pub fn witt(n: usize, d: usize) -> usize {
    assert!(n >= 1 && d >= 1);
    let mut total: i128 = 0;
    for e in 1..=d {
        if d % e != 0 {
            continue;
        }
        let mu = moebius(e);
        if mu != 0 {
            total += i128::from(mu) * (n as i128).pow((d / e) as u32);
        }
    }
    debug_assert!(total >= 0 && total % d as i128 == 0);
    (total / d as i128) as usize
}

fn moebius(mut m: usize) -> i32 {
    let mut sign = 1;
    let mut q = 2;
    while q * q <= m {
        if m % q == 0 {
            m /= q;
            if m % q == 0 {
                return 0;
            }
            sign = -sign;
        }
        q += 1;
    }
    if m > 1 {
        sign = -sign;
    }
    sign
}

/// Expand the standard bracketing of a Lyndon word into the tensor algebra on
/// `n` letters: single letters map to themselves, and `w = u v` maps to the
/// commutator of the factors' bracketings. All coefficients are integers.
pub fn bracketing(w: &LyndonWord, n: usize) -> NCPolynomial {
    let arena = Arena::tensor(n);
    if w.degree() == 1 {
        return NCPolynomial::generator(arena, w.word().0[0]);
    }
    let (u, v) = w.standard_factorization();
    let a = bracketing(&u, n);
    let b = bracketing(&v, n);
    let ab = a.nc_mul(&b).expect("same arena");
    let ba = b.nc_mul(&a).expect("same arena");
    ab.sub(&ba).expect("same arena")
}

/// An element of the nilpotent free Lie algebra: an exact-rational linear
/// combination of Lyndon basis elements, keyed by basis index. The `(n, p)`
/// stamp guards against mixing contexts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LieElement {
    n: usize,
    p: usize,
    coeffs: BTreeMap<usize, Scalar>,
}

impl LieElement {
    pub fn zero(ctx: &LieContext) -> Self {
        LieElement { n: ctx.n, p: ctx.p, coeffs: BTreeMap::new() }
    }

    pub fn from_coeffs(ctx: &LieContext, coeffs: BTreeMap<usize, Scalar>) -> Self {
        let coeffs = coeffs.into_iter().filter(|(i, c)| {
            assert!(*i < ctx.dim(), "basis index out of range");
            !c.is_zero()
        });
        LieElement { n: ctx.n, p: ctx.p, coeffs: coeffs.collect() }
    }

    /// The `i`-th degree-one generator as a Lie element.
    pub fn generator(ctx: &LieContext, i: usize) -> Self {
        assert!(i < ctx.n);
        LieElement::from_coeffs(ctx, BTreeMap::from([(i, crate::scalar::int(1))]))
    }

    pub fn matches(&self, ctx: &LieContext) -> bool {
        self.n == ctx.n && self.p == ctx.p
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeffs(&self) -> &BTreeMap<usize, Scalar> {
        &self.coeffs
    }

    pub fn add(&self, other: &LieElement) -> Result<LieElement> {
        if self.n != other.n || self.p != other.p {
            return Err(Error::ContextMismatch);
        }
        let mut coeffs = self.coeffs.clone();
        for (i, c) in &other.coeffs {
            let entry = coeffs.entry(*i).or_insert_with(Scalar::zero);
            *entry += c;
            if entry.is_zero() {
                coeffs.remove(i);
            }
        }
        Ok(LieElement { n: self.n, p: self.p, coeffs })
    }

    pub fn scale(&self, s: &Scalar) -> LieElement {
        if s.is_zero() {
            return LieElement { n: self.n, p: self.p, coeffs: BTreeMap::new() };
        }
        LieElement {
            n: self.n,
            p: self.p,
            coeffs: self.coeffs.iter().map(|(i, c)| (*i, c * s)).collect(),
        }
    }

    /// Dense coordinates over the full Lyndon basis of the context.
    pub fn to_vector(&self, ctx: &LieContext) -> Vec<Scalar> {
        let mut v = vec![Scalar::zero(); ctx.dim()];
        for (i, c) in &self.coeffs {
            v[*i] = c.clone();
        }
        v
    }

    pub fn from_vector(ctx: &LieContext, v: &[Scalar]) -> Self {
        LieElement::from_coeffs(
            ctx,
            v.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, c)| (i, c.clone())).collect(),
        )
    }
}

/// The relatively free nilpotent Lie algebra on `n` generators with all
/// brackets of degree above `p` truncated to zero.
///
/// Construction eagerly precomputes the Lyndon basis, the tensor expansion of
/// every basis bracketing, the echelonized Lie span per degree (for
/// projecting tensors back onto the basis), and the full structure-constant
/// table.
pub struct LieContext {
    n: usize,
    p: usize,
    basis: Vec<LyndonWord>,
    index: BTreeMap<Word, usize>,
    degree_start: Vec<usize>,
    bracket_images: Vec<NCPolynomial>,
    spans: Vec<DegreeSpan>,
    table: BTreeMap<(usize, usize), LieElement>,
}

struct DegreeSpan {
    subspace: Subspace,
    /// Change of basis from echelon coordinates back to bracketing
    /// coordinates: `transform * bracket_rows = echelon_rows`.
    transform: Matrix,
}

impl LieContext {
    pub fn new(n: usize, p: usize) -> Arc<LieContext> {
        assert!(n >= 1 && p >= 1);
        let mut basis = Vec::new();
        let mut degree_start = vec![0usize; p + 2];
        for d in 1..=p {
            degree_start[d] = basis.len();
            basis.extend(lyndon_words(n, d));
        }
        degree_start[p + 1] = basis.len();
        // degree_start[0] unused; keep it 0.
        let index: BTreeMap<Word, usize> =
            basis.iter().enumerate().map(|(i, w)| (w.word().clone(), i)).collect();
        let bracket_images: Vec<NCPolynomial> = basis.iter().map(|w| bracketing(w, n)).collect();

        let mut spans = Vec::new();
        for d in 1..=p {
            let words = words_of_degree(n, d);
            let word_pos: BTreeMap<&Word, usize> =
                words.iter().enumerate().map(|(i, w)| (w, i)).collect();
            let lo = degree_start[d];
            let hi = degree_start[d + 1];
            let rows: Vec<Vec<Scalar>> = (lo..hi)
                .map(|i| {
                    let mut row = vec![Scalar::zero(); words.len()];
                    for (w, c) in bracket_images[i].terms() {
                        row[word_pos[w]] = c.clone();
                    }
                    row
                })
                .collect();
            let k = rows.len();
            let m = Matrix::from_rows(rows).expect("rectangular");
            let (red, pivots, transform) = rref_with_transform(&m);
            assert_eq!(pivots.len(), k, "Lyndon bracketings must be independent");
            let echelon_rows: Vec<Vec<Scalar>> = (0..k).map(|r| red.row(r).to_vec()).collect();
            let subspace = Subspace::from_echelon_unchecked(words.len(), echelon_rows, pivots);
            spans.push(DegreeSpan { subspace, transform });
        }

        let mut ctx = LieContext {
            n,
            p,
            basis,
            index,
            degree_start,
            bracket_images,
            spans,
            table: BTreeMap::new(),
        };

        // Structure constants for i < j; antisymmetry fills the rest, and
        // pairs whose total degree exceeds p truncate to zero per the
        // definition of the algebra.
        let dim = ctx.basis.len();
        let mut table = BTreeMap::new();
        for i in 0..dim {
            for j in (i + 1)..dim {
                let d = ctx.basis[i].degree() + ctx.basis[j].degree();
                if d > p {
                    continue;
                }
                let a = &ctx.bracket_images[i];
                let b = &ctx.bracket_images[j];
                let comm = a.nc_mul(b).unwrap().sub(&b.nc_mul(a).unwrap()).unwrap();
                let el = ctx.project_to_lie(&comm, d).expect("bracket of Lie elements is Lie");
                table.insert((i, j), el);
            }
        }
        ctx.table = table;
        Arc::new(ctx)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> usize {
        self.p
    }

    /// Number of basis elements, `sum of witt(n, d) for d = 1..=p`.
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[LyndonWord] {
        &self.basis
    }

    pub fn basis_word(&self, i: usize) -> &LyndonWord {
        &self.basis[i]
    }

    pub fn basis_index(&self, w: &Word) -> Option<usize> {
        self.index.get(w).copied()
    }

    pub fn basis_degree(&self, i: usize) -> usize {
        self.basis[i].degree()
    }

    /// Basis indices of the degree-`d` slice.
    pub fn degree_range(&self, d: usize) -> std::ops::Range<usize> {
        assert!(d >= 1 && d <= self.p);
        self.degree_start[d]..self.degree_start[d + 1]
    }

    /// Tensor-algebra expansion of the `i`-th basis bracketing.
    pub fn bracket_image(&self, i: usize) -> &NCPolynomial {
        &self.bracket_images[i]
    }

    /// The bracket `[b_i, b_j]` of two basis elements, from the table.
    pub fn basis_bracket(&self, i: usize, j: usize) -> LieElement {
        if i == j {
            return LieElement { n: self.n, p: self.p, coeffs: BTreeMap::new() };
        }
        let (a, b, flip) = if i < j { (i, j, false) } else { (j, i, true) };
        match self.table.get(&(a, b)) {
            None => LieElement { n: self.n, p: self.p, coeffs: BTreeMap::new() },
            Some(el) => {
                if flip {
                    el.scale(&crate::scalar::int(-1))
                } else {
                    el.clone()
                }
            }
        }
    }

    /// Total Lie degree of a word over basis indices.
    pub fn lie_degree(&self, w: &Word) -> usize {
        w.0.iter().map(|&i| self.basis_degree(i)).sum()
    }

    /// Express a homogeneous degree-`d` tensor in the Lyndon bracketing
    /// basis, failing with `NotLieElement` when it lies outside the Lie
    /// component.
    pub fn project_to_lie(&self, t: &NCPolynomial, d: usize) -> Result<LieElement> {
        if !matches!(t.arena(), Arena::Tensor { n } if *n == self.n) {
            return Err(Error::ArenaMismatch);
        }
        if d < 1 || d > self.p {
            return Err(Error::DegreeCapExceeded { requested: d, cap: self.p });
        }
        let mut v = vec![Scalar::zero(); self.n.pow(d as u32)];
        for (w, c) in t.terms() {
            if w.degree() != d {
                return Err(Error::NotHomogeneous(format!(
                    "term {w} has degree {}, expected {d}",
                    w.degree()
                )));
            }
            v[crate::assoc::word_index(self.n, w)] = c.clone();
        }
        let span = &self.spans[d - 1];
        let Some(ech_coords) = span.subspace.span_contains(&v)? else {
            return Err(Error::NotLieElement);
        };
        // Convert echelon coordinates to bracketing coordinates.
        let k = span.transform.rows();
        let mut coeffs = BTreeMap::new();
        for col in 0..k {
            let mut c = Scalar::zero();
            for (row, e) in ech_coords.iter().enumerate() {
                if !e.is_zero() {
                    let t = span.transform.get(row, col);
                    if !t.is_zero() {
                        c += e * t;
                    }
                }
            }
            if !c.is_zero() {
                coeffs.insert(self.degree_start[d] + col, c);
            }
        }
        Ok(LieElement { n: self.n, p: self.p, coeffs })
    }

    /// Bilinear bracket with truncation above degree `p`.
    pub fn bracket(&self, a: &LieElement, b: &LieElement) -> Result<LieElement> {
        if !a.matches(self) || !b.matches(self) {
            return Err(Error::ContextMismatch);
        }
        let mut acc = LieElement::zero(self);
        for (i, ci) in &a.coeffs {
            for (j, cj) in &b.coeffs {
                let term = self.basis_bracket(*i, *j);
                if !term.is_zero() {
                    acc = acc.add(&term.scale(&(ci * cj)))?;
                }
            }
        }
        Ok(acc)
    }

    /// Act on degree-one letters by `g` and extend as a Lie algebra
    /// automorphism: act diagonally on the bracketing image in the tensor
    /// algebra and project back onto the basis.
    pub fn gl_action(&self, g: &Matrix, a: &LieElement) -> Result<LieElement> {
        if g.rows() != self.n || g.cols() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: g.rows() });
        }
        g.inverse()?; // singular matrices are rejected
        if !a.matches(self) {
            return Err(Error::ContextMismatch);
        }
        self.gl_action_unchecked(g, a)
    }

    /// Same as [`Self::gl_action`] without the invertibility check; used by
    /// action builders that validate the group once up front.
    pub(crate) fn gl_action_unchecked(&self, g: &Matrix, a: &LieElement) -> Result<LieElement> {
        let mut by_degree: BTreeMap<usize, Vec<Scalar>> = BTreeMap::new();
        for (i, c) in &a.coeffs {
            let d = self.basis_degree(*i);
            let vec = by_degree
                .entry(d)
                .or_insert_with(|| vec![Scalar::zero(); self.n.pow(d as u32)]);
            for (w, x) in self.bracket_images[*i].terms() {
                // Expand g acting letterwise on the word w.
                let mut cur = vec![c * x];
                for &letter in &w.0 {
                    let mut next = vec![Scalar::zero(); cur.len() * self.n];
                    for (idx, coeff) in cur.iter().enumerate() {
                        if coeff.is_zero() {
                            continue;
                        }
                        for r in 0..self.n {
                            let e = g.get(r, letter);
                            if !e.is_zero() {
                                next[idx * self.n + r] += coeff * e;
                            }
                        }
                    }
                    cur = next;
                }
                for (idx, coeff) in cur.into_iter().enumerate() {
                    if !coeff.is_zero() {
                        vec[idx] += coeff;
                    }
                }
            }
        }
        let mut acc = LieElement::zero(self);
        for (d, v) in by_degree {
            let span = &self.spans[d - 1];
            let Some(ech_coords) = span.subspace.span_contains(&v)? else {
                return Err(Error::NotLieElement);
            };
            let k = span.transform.rows();
            for col in 0..k {
                let mut c = Scalar::zero();
                for (row, e) in ech_coords.iter().enumerate() {
                    if !e.is_zero() {
                        let t = span.transform.get(row, col);
                        if !t.is_zero() {
                            c += e * t;
                        }
                    }
                }
                if !c.is_zero() {
                    acc = acc.add(&LieElement::from_coeffs(
                        self,
                        BTreeMap::from([(self.degree_start[d] + col, c)]),
                    ))?;
                }
            }
        }
        Ok(acc)
    }
}

impl std::fmt::Debug for LieContext {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("LieContext")
            .field("n", &self.n)
            .field("p", &self.p)
            .field("dim", &self.basis.len())
            .finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    /// Brute-force oracle: enumerate all words of length d and keep the ones
    /// strictly smaller than each proper rotation.
    fn lyndon_brute(n: usize, d: usize) -> Vec<Word> {
        let mut out = Vec::new();
        let total = n.pow(d as u32);
        for code in 0..total {
            let mut letters = Vec::with_capacity(d);
            let mut c = code;
            for _ in 0..d {
                letters.push(c % n);
                c /= n;
            }
            letters.reverse();
            let w = Word(letters);
            if is_lyndon(&w) {
                out.push(w);
            }
        }
        out
    }

    #[test]
    fn lyndon_examples() {
        let ws: Vec<Word> = lyndon_words(2, 2).into_iter().map(|w| w.word().clone()).collect();
        assert_eq!(ws, vec![Word(vec![0, 1])]);
        assert!(lyndon_words(1, 2).is_empty());
        let ws: Vec<Word> = lyndon_words(2, 3).into_iter().map(|w| w.word().clone()).collect();
        assert_eq!(ws, vec![Word(vec![0, 0, 1]), Word(vec![0, 1, 1])]);
    }

    #[test]
    fn lyndon_matches_brute_force_and_witt() {
        for n in 1..=3 {
            for d in 1..=6 {
                let fast: Vec<Word> =
                    lyndon_words(n, d).into_iter().map(|w| w.word().clone()).collect();
                let brute = lyndon_brute(n, d);
                assert_eq!(fast, brute, "n={n} d={d}");
                assert_eq!(fast.len(), witt(n, d), "count vs witt, n={n} d={d}");
            }
        }
    }

    #[test]
    fn witt_small_values() {
        assert_eq!(witt(2, 1), 2);
        assert_eq!(witt(5, 1), 5);
        assert_eq!(witt(2, 2), 1);
        assert_eq!(witt(2, 3), 2);
        assert_eq!(witt(3, 3), 8);
    }

    #[test]
    fn bracketing_examples() {
        let x0 = LyndonWord::new(Word(vec![0])).unwrap();
        let b = bracketing(&x0, 2);
        assert_eq!(b, NCPolynomial::generator(Arena::tensor(2), 0));

        let w = LyndonWord::new(Word(vec![0, 1])).unwrap();
        let b = bracketing(&w, 2);
        let expected = NCPolynomial::from_terms(
            Arena::tensor(2),
            [(Word(vec![0, 1]), int(1)), (Word(vec![1, 0]), int(-1))],
        );
        assert_eq!(b, expected);

        let w = LyndonWord::new(Word(vec![0, 0, 1])).unwrap();
        let b = bracketing(&w, 2);
        let expected = NCPolynomial::from_terms(
            Arena::tensor(2),
            [
                (Word(vec![0, 0, 1]), int(1)),
                (Word(vec![0, 1, 0]), int(-2)),
                (Word(vec![1, 0, 0]), int(1)),
            ],
        );
        assert_eq!(b, expected);
    }

    #[test]
    fn bracketing_images_independent() {
        for n in 1..=3 {
            for d in 1..=5 {
                let words = lyndon_words(n, d);
                if words.is_empty() {
                    continue;
                }
                let cols = n.pow(d as u32);
                let rows: Vec<Vec<Scalar>> = words
                    .iter()
                    .map(|w| {
                        let mut row = vec![Scalar::zero(); cols];
                        for (t, c) in bracketing(w, n).terms() {
                            row[crate::assoc::word_index(n, t)] = c.clone();
                        }
                        row
                    })
                    .collect();
                let m = Matrix::from_rows(rows).unwrap();
                assert_eq!(m.rank(), words.len(), "n={n} d={d}");
            }
        }
    }

    #[test]
    fn project_to_lie_round_trip() {
        let ctx = LieContext::new(2, 2);
        let w = LyndonWord::new(Word(vec![0, 1])).unwrap();
        let t = bracketing(&w, 2);
        let el = ctx.project_to_lie(&t, 2).unwrap();
        let idx = ctx.basis_index(&Word(vec![0, 1])).unwrap();
        assert_eq!(el.coeffs(), &BTreeMap::from([(idx, int(1))]));
    }

    #[test]
    fn project_to_lie_rejects_symmetric_tensor() {
        let ctx = LieContext::new(2, 2);
        let t = NCPolynomial::from_terms(
            Arena::tensor(2),
            [(Word(vec![0, 1]), int(1)), (Word(vec![1, 0]), int(1))],
        );
        assert!(matches!(ctx.project_to_lie(&t, 2), Err(Error::NotLieElement)));
    }

    #[test]
    fn project_to_lie_left_normed_example() {
        // [[x0,x1], x0] expanded in the tensor algebra equals -1 * b((0,0,1)).
        let ctx = LieContext::new(2, 3);
        let z = bracketing(&LyndonWord::new(Word(vec![0, 1])).unwrap(), 2);
        let x0 = NCPolynomial::generator(Arena::tensor(2), 0);
        let t = z.nc_mul(&x0).unwrap().sub(&x0.nc_mul(&z).unwrap()).unwrap();
        let el = ctx.project_to_lie(&t, 3).unwrap();
        let idx = ctx.basis_index(&Word(vec![0, 0, 1])).unwrap();
        assert_eq!(el.coeffs(), &BTreeMap::from([(idx, int(-1))]));
    }

    #[test]
    fn bracket_examples() {
        let ctx = LieContext::new(2, 2);
        let x0 = LieElement::generator(&ctx, 0);
        let x1 = LieElement::generator(&ctx, 1);
        let z = ctx.bracket(&x0, &x1).unwrap();
        let idx = ctx.basis_index(&Word(vec![0, 1])).unwrap();
        assert_eq!(z.coeffs(), &BTreeMap::from([(idx, int(1))]));

        // degree 3 > p = 2 truncates to zero
        assert!(ctx.bracket(&z, &x0).unwrap().is_zero());

        // in L_3 the bracket [x0, [x0,x1]] is the basis element (0,0,1)
        let ctx3 = LieContext::new(2, 3);
        let x0 = LieElement::generator(&ctx3, 0);
        let x1 = LieElement::generator(&ctx3, 1);
        let z = ctx3.bracket(&x0, &x1).unwrap();
        let c = ctx3.bracket(&x0, &z).unwrap();
        let idx = ctx3.basis_index(&Word(vec![0, 0, 1])).unwrap();
        assert_eq!(c.coeffs(), &BTreeMap::from([(idx, int(1))]));
    }

    #[test]
    fn gl_action_examples() {
        let ctx = LieContext::new(2, 2);
        let idx = ctx.basis_index(&Word(vec![0, 1])).unwrap();
        let z = LieElement::from_coeffs(&ctx, BTreeMap::from([(idx, int(1))]));

        let id = Matrix::identity(2);
        assert_eq!(ctx.gl_action(&id, &z).unwrap(), z);

        // -I picks up (-1)^2 on a degree-2 bracket
        let neg = Matrix::from_i64(&[&[-1, 0], &[0, -1]]);
        assert_eq!(ctx.gl_action(&neg, &z).unwrap(), z);

        // the transposition swaps the letters, so the bracket flips sign
        let swap = Matrix::from_i64(&[&[0, 1], &[1, 0]]);
        assert_eq!(ctx.gl_action(&swap, &z).unwrap(), z.scale(&int(-1)));

        let singular = Matrix::from_i64(&[&[1, 0], &[0, 0]]);
        assert!(ctx.gl_action(&singular, &z).is_err());
    }

    fn random_element(ctx: &LieContext, rng: &mut StdRng) -> LieElement {
        let mut coeffs = BTreeMap::new();
        for i in 0..ctx.dim() {
            if rng.random_range(0..3) == 0 {
                coeffs.insert(i, int(rng.random_range(-3..=3)));
            }
        }
        LieElement::from_coeffs(ctx, coeffs)
    }

    #[test]
    fn antisymmetry_and_jacobi_random() {
        let mut rng = StdRng::seed_from_u64(7);
        for (n, p) in [(2, 3), (3, 4), (2, 4)] {
            let ctx = LieContext::new(n, p);
            for _ in 0..8 {
                let a = random_element(&ctx, &mut rng);
                let b = random_element(&ctx, &mut rng);
                let c = random_element(&ctx, &mut rng);
                let ab = ctx.bracket(&a, &b).unwrap();
                let ba = ctx.bracket(&b, &a).unwrap();
                assert_eq!(ab, ba.scale(&int(-1)), "antisymmetry n={n} p={p}");

                let j1 = ctx.bracket(&ab, &c).unwrap();
                let j2 = ctx.bracket(&ctx.bracket(&b, &c).unwrap(), &a).unwrap();
                let j3 = ctx.bracket(&ctx.bracket(&c, &a).unwrap(), &b).unwrap();
                let total = j1.add(&j2).unwrap().add(&j3).unwrap();
                assert!(total.is_zero(), "jacobi n={n} p={p}");
            }
        }
    }

    fn random_invertible(n: usize, rng: &mut StdRng) -> Matrix {
        loop {
            let rows: Vec<Vec<Scalar>> = (0..n)
                .map(|_| (0..n).map(|_| int(rng.random_range(-2..=2))).collect())
                .collect();
            let m = Matrix::from_rows(rows).unwrap();
            if m.inverse().is_ok() {
                return m;
            }
        }
    }

    #[test]
    fn gl_action_is_functorial() {
        let mut rng = StdRng::seed_from_u64(11);
        let ctx = LieContext::new(2, 3);
        for _ in 0..6 {
            let g = random_invertible(2, &mut rng);
            let h = random_invertible(2, &mut rng);
            let a = random_element(&ctx, &mut rng);
            let gh = g.mul(&h).unwrap();
            let lhs = ctx.gl_action(&gh, &a).unwrap();
            let rhs = ctx.gl_action(&g, &ctx.gl_action(&h, &a).unwrap()).unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn gl_action_is_automorphism() {
        // g.[a,b] = [g.a, g.b] for random data
        let mut rng = StdRng::seed_from_u64(13);
        let ctx = LieContext::new(2, 3);
        for _ in 0..6 {
            let g = random_invertible(2, &mut rng);
            let a = random_element(&ctx, &mut rng);
            let b = random_element(&ctx, &mut rng);
            let lhs = ctx.gl_action(&g, &ctx.bracket(&a, &b).unwrap()).unwrap();
            let rhs = ctx
                .bracket(&ctx.gl_action(&g, &a).unwrap(), &ctx.gl_action(&g, &b).unwrap())
                .unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn context_mismatch_is_an_error() {
        let a_ctx = LieContext::new(2, 2);
        let b_ctx = LieContext::new(2, 3);
        let a = LieElement::generator(&a_ctx, 0);
        let b = LieElement::generator(&b_ctx, 0);
        assert!(matches!(a_ctx.bracket(&a, &b), Err(Error::ContextMismatch)));
        assert!(matches!(a.add(&b), Err(Error::ContextMismatch)));
    }

    #[test]
    fn context_dimensions() {
        let ctx = LieContext::new(2, 3);
        assert_eq!(ctx.dim(), 2 + 1 + 2);
        assert_eq!(ctx.degree_range(1), 0..2);
        assert_eq!(ctx.degree_range(2), 2..3);
        assert_eq!(ctx.degree_range(3), 3..5);
    }
}
