//! The tensor algebra, the relatively free algebra of the Lie nilpotent
//! variety via degreewise T-ideal normal forms, the universal enveloping
//! algebra via PBW straightening, and the canonical maps between them.
//!
//! The relatively free algebra is represented degreewise: the span of all
//! substitution instances of the defining left-normed commutator identity is
//! echelonized once per degree, and the words at non-pivot coordinates serve
//! as canonical representatives. This is complete and terminating at desk
//! scale and avoids any rewriting-confluence machinery.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::{Arc, RwLock};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::comm::CommPolynomial;
use crate::error::{Error, Result};
use crate::freelie::{LieContext, Word};
use crate::linalg::Subspace;
use crate::scalar::{frac, Scalar};

/// All words of length `d` over `n` letters, in lexicographic order.
pub fn words_of_degree(n: usize, d: usize) -> Vec<Word> {
    let mut out = Vec::with_capacity(n.pow(d as u32));
    let mut letters = vec![0usize; d];
    loop {
        out.push(Word(letters.clone()));
        let mut k = d;
        loop {
            if k == 0 {
                return out;
            }
            k -= 1;
            if letters[k] + 1 < n {
                letters[k] += 1;
                for l in &mut letters[k + 1..] {
                    *l = 0;
                }
                break;
            }
        }
    }
}

/// Position of `w` in [`words_of_degree`]`(n, w.degree())`: its base-`n` value.
pub fn word_index(n: usize, w: &Word) -> usize {
    w.0.iter().fold(0, |acc, &l| acc * n + l)
}

/// A multidegree `(alpha_1, ..., alpha_p)` counting variables of each Lie
/// degree. The induced degree in the relatively free algebra is
/// `sum of i * alpha_i`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct MultiDegree(pub Vec<usize>);

impl MultiDegree {
    /// Standard degree `|alpha|`.
    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }

    /// The induced degree `sum of i * alpha_i` (with `i` starting at 1).
    pub fn induced_degree(&self) -> usize {
        self.0.iter().enumerate().map(|(i, a)| (i + 1) * a).sum()
    }

    /// The standard basis multidegree with a single 1 in (1-based) slot `i`.
    pub fn unit(p: usize, i: usize) -> Self {
        assert!(i >= 1 && i <= p);
        let mut v = vec![0; p];
        v[i - 1] = 1;
        MultiDegree(v)
    }

    /// All multidegrees of standard degree `total` in `p` slots, in
    /// lexicographic order.
    pub fn compositions(total: usize, p: usize) -> Vec<MultiDegree> {
        fn rec(rest: usize, slots: usize, acc: &mut Vec<usize>, out: &mut Vec<MultiDegree>) {
            if slots == 1 {
                acc.push(rest);
                out.push(MultiDegree(acc.clone()));
                acc.pop();
                return;
            }
            for a in 0..=rest {
                acc.push(a);
                rec(rest - a, slots - 1, acc, out);
                acc.pop();
            }
        }
        let mut out = Vec::new();
        rec(total, p, &mut Vec::new(), &mut out);
        out
    }
}

/// Which algebra a noncommutative polynomial lives in; carries the context
/// needed to normalize products.
#[derive(Clone)]
pub enum Arena {
    /// Free associative algebra on `n` letters; keys are arbitrary words.
    Tensor { n: usize },
    /// Relatively free algebra of the Lie nilpotent variety; keys are the
    /// echelon representative words of their degree.
    RelFree(Arc<RelFreeContext>),
    /// Universal enveloping algebra; keys are nondecreasing words over Lie
    /// basis indices (PBW monomials).
    Enveloping(Arc<LieContext>),
}

impl Arena {
    pub fn tensor(n: usize) -> Arena {
        Arena::Tensor { n }
    }

    pub fn compatible(&self, other: &Arena) -> bool {
        match (self, other) {
            (Arena::Tensor { n: a }, Arena::Tensor { n: b }) => a == b,
            (Arena::RelFree(a), Arena::RelFree(b)) => a.n() == b.n() && a.p() == b.p(),
            (Arena::Enveloping(a), Arena::Enveloping(b)) => a.n() == b.n() && a.p() == b.p(),
            _ => false,
        }
    }
}

impl PartialEq for Arena {
    fn eq(&self, other: &Self) -> bool {
        self.compatible(other)
    }
}

impl Eq for Arena {}

impl std::fmt::Debug for Arena {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Arena::Tensor { n } => write!(f, "Tensor(n={n})"),
            Arena::RelFree(rf) => write!(f, "RelFree(n={}, p={})", rf.n(), rf.p()),
            Arena::Enveloping(ctx) => write!(f, "Enveloping(n={}, p={})", ctx.n(), ctx.p()),
        }
    }
}

/// A linear combination of monomial keys with exact rational coefficients.
/// Zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NCPolynomial {
    arena: Arena,
    terms: BTreeMap<Word, Scalar>,
}

impl NCPolynomial {
    pub fn zero(arena: Arena) -> Self {
        NCPolynomial { arena, terms: BTreeMap::new() }
    }

    pub fn one(arena: Arena) -> Self {
        NCPolynomial { arena, terms: BTreeMap::from([(Word::empty(), Scalar::one())]) }
    }

    /// The `i`-th degree-one generator. For the enveloping arena the letter
    /// is a Lie basis index.
    pub fn generator(arena: Arena, i: usize) -> Self {
        NCPolynomial { arena, terms: BTreeMap::from([(Word::letter(i), Scalar::one())]) }
    }

    pub fn from_terms(arena: Arena, terms: impl IntoIterator<Item = (Word, Scalar)>) -> Self {
        let mut map: BTreeMap<Word, Scalar> = BTreeMap::new();
        for (w, c) in terms {
            if c.is_zero() {
                continue;
            }
            let entry = map.entry(w).or_insert_with(Scalar::zero);
            *entry += c;
        }
        map.retain(|_, c| !c.is_zero());
        NCPolynomial { arena, terms: map }
    }

    pub fn arena(&self) -> &Arena {
        &self.arena
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Scalar)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, w: &Word) -> Scalar {
        self.terms.get(w).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &NCPolynomial) -> Result<NCPolynomial> {
        if !self.arena.compatible(&other.arena) {
            return Err(Error::ArenaMismatch);
        }
        let mut terms = self.terms.clone();
        for (w, c) in &other.terms {
            let entry = terms.entry(w.clone()).or_insert_with(Scalar::zero);
            *entry += c;
            if entry.is_zero() {
                terms.remove(w);
            }
        }
        Ok(NCPolynomial { arena: self.arena.clone(), terms })
    }

    pub fn sub(&self, other: &NCPolynomial) -> Result<NCPolynomial> {
        self.add(&other.scale(&crate::scalar::int(-1)))
    }

    pub fn scale(&self, s: &Scalar) -> NCPolynomial {
        if s.is_zero() {
            return NCPolynomial::zero(self.arena.clone());
        }
        NCPolynomial {
            arena: self.arena.clone(),
            terms: self.terms.iter().map(|(w, c)| (w.clone(), c * s)).collect(),
        }
    }

    /// Product, normalized in the arena: word concatenation, then T-ideal
    /// reduction for the relatively free arena, then straightening for the
    /// enveloping arena.
    pub fn nc_mul(&self, other: &NCPolynomial) -> Result<NCPolynomial> {
        if !self.arena.compatible(&other.arena) {
            return Err(Error::ArenaMismatch);
        }
        match &self.arena {
            Arena::Tensor { .. } => {
                let mut terms: BTreeMap<Word, Scalar> = BTreeMap::new();
                for (w1, c1) in &self.terms {
                    for (w2, c2) in &other.terms {
                        let w = w1.concat(w2);
                        let entry = terms.entry(w).or_insert_with(Scalar::zero);
                        *entry += c1 * c2;
                    }
                }
                terms.retain(|_, c| !c.is_zero());
                Ok(NCPolynomial { arena: self.arena.clone(), terms })
            }
            Arena::RelFree(rf) => {
                let raw = self.lift_to_tensor()?.nc_mul(&other.lift_to_tensor()?)?;
                nf_f(rf, &raw)
            }
            Arena::Enveloping(ctx) => {
                let mut acc = NCPolynomial::zero(self.arena.clone());
                for (w1, c1) in &self.terms {
                    for (w2, c2) in &other.terms {
                        let s = straighten(ctx, &w1.concat(w2));
                        acc = acc.add(&s.scale(&(c1 * c2)))?;
                    }
                }
                Ok(acc)
            }
        }
    }

    /// Reinterpret a relatively free element as the tensor polynomial on its
    /// representative words (a section of the natural surjection). Tensor
    /// inputs pass through unchanged.
    pub fn lift_to_tensor(&self) -> Result<NCPolynomial> {
        match &self.arena {
            Arena::Tensor { .. } => Ok(self.clone()),
            Arena::RelFree(rf) => Ok(NCPolynomial {
                arena: Arena::tensor(rf.n()),
                terms: self.terms.clone(),
            }),
            Arena::Enveloping(_) => Err(Error::ArenaMismatch),
        }
    }

    /// Terms of word length `d`.
    pub fn component(&self, d: usize) -> NCPolynomial {
        NCPolynomial {
            arena: self.arena.clone(),
            terms: self.terms.iter().filter(|(w, _)| w.degree() == d).map(|(w, c)| (w.clone(), c.clone())).collect(),
        }
    }

    /// Word lengths present, ascending.
    pub fn degrees(&self) -> Vec<usize> {
        let set: BTreeSet<usize> = self.terms.keys().map(Word::degree).collect();
        set.into_iter().collect()
    }
}

impl std::fmt::Display for NCPolynomial {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let letter = |i: usize| match self.arena {
            Arena::Enveloping(_) => format!("b{i}"),
            _ => format!("x{i}"),
        };
        for (k, (w, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            let mono = if w.0.is_empty() {
                "1".to_string()
            } else {
                w.0.iter().map(|&i| letter(i)).collect::<Vec<_>>().join("*")
            };
            write!(f, "({}) {mono}", crate::scalar::format_scalar(c))?;
        }
        Ok(())
    }
}

/// Coordinates of a set of terms over an indexed monomial basis.
pub fn vectorize<'a>(
    terms: impl Iterator<Item = (&'a Word, &'a Scalar)>,
    pos: &BTreeMap<Word, usize>,
    len: usize,
) -> Result<Vec<Scalar>> {
    let mut v = vec![Scalar::zero(); len];
    for (w, c) in terms {
        match pos.get(w) {
            Some(&i) => v[i] = c.clone(),
            None => {
                return Err(Error::Validation(format!("monomial {w} outside the component basis")))
            }
        }
    }
    Ok(v)
}

/// Rewrite a word over Lie basis indices into the PBW basis: the leftmost
/// out-of-order adjacent pair `b_j b_i` (j > i in the basis order) is
/// replaced by `b_i b_j + [b_j, b_i]` until every word is nondecreasing.
/// Terminates because the bracket term strictly shortens the word at fixed
/// total Lie degree.
pub fn straighten(ctx: &Arc<LieContext>, word: &Word) -> NCPolynomial {
    let arena = Arena::Enveloping(ctx.clone());
    let mut out: BTreeMap<Word, Scalar> = BTreeMap::new();
    let mut stack: Vec<(Vec<usize>, Scalar)> = vec![(word.0.clone(), Scalar::one())];
    while let Some((w, c)) = stack.pop() {
        match (0..w.len().saturating_sub(1)).find(|&k| w[k] > w[k + 1]) {
            None => {
                let entry = out.entry(Word(w)).or_insert_with(Scalar::zero);
                *entry += c;
            }
            Some(k) => {
                let (j, i) = (w[k], w[k + 1]);
                let mut swapped = w.clone();
                swapped.swap(k, k + 1);
                let bracket = ctx.basis_bracket(j, i);
                for (idx, coeff) in bracket.coeffs() {
                    let mut shorter = w.clone();
                    shorter.remove(k + 1);
                    shorter[k] = *idx;
                    stack.push((shorter, &c * coeff));
                }
                stack.push((swapped, c));
            }
        }
    }
    out.retain(|_, c| !c.is_zero());
    NCPolynomial { arena, terms: out }
}

/// PBW monomials of total Lie degree `d`: nondecreasing words over basis
/// indices, ordered by length then lexicographically. `d = 0` gives the empty
/// monomial.
pub fn pbw_monomials(ctx: &LieContext, d: usize) -> Vec<Word> {
    fn rec(ctx: &LieContext, min_idx: usize, rest: usize, acc: &mut Vec<usize>, out: &mut Vec<Word>) {
        if rest == 0 {
            out.push(Word(acc.clone()));
            return;
        }
        for i in min_idx..ctx.dim() {
            let deg = ctx.basis_degree(i);
            if deg <= rest {
                acc.push(i);
                rec(ctx, i, rest - deg, acc, out);
                acc.pop();
            }
        }
    }
    let mut out = Vec::new();
    rec(ctx, 0, d, &mut Vec::new(), &mut out);
    out.sort();
    out
}

/// Dimension of the Lie-degree-`d` graded component of the enveloping
/// algebra: coefficient extraction from the product of `1/(1 - t^deg)` over
/// the Lyndon basis.
pub fn dim_u(ctx: &LieContext, d: usize) -> usize {
    let mut f = vec![0u128; d + 1];
    f[0] = 1;
    for i in 0..ctx.dim() {
        let deg = ctx.basis_degree(i);
        for j in deg..=d {
            f[j] += f[j - deg];
        }
    }
    f[d] as usize
}

/// Per-degree echelon data for the T-ideal of the left-normed commutator
/// identity.
pub struct DegreeData {
    /// Dimension of the T-ideal component.
    pub dim_tideal: usize,
    /// Word indices carrying pivots of the echelonized ideal, ascending.
    pub pivots: Vec<usize>,
    /// Non-pivot words: the canonical representative basis of the quotient.
    pub rep_words: Vec<Word>,
    pub rep_pos: BTreeMap<Word, usize>,
    /// `reduce[w]` is the normal form of the basis word `w` in representative
    /// coordinates, stored sparsely.
    reduce: Vec<Vec<(usize, Scalar)>>,
}

impl DegreeData {
    pub fn dim_quotient(&self) -> usize {
        self.rep_words.len()
    }

    pub fn reduce_word(&self, idx: usize) -> &[(usize, Scalar)] {
        &self.reduce[idx]
    }
}

/// The relatively free algebra of the variety defined by the vanishing of the
/// left-normed commutator of `p + 1` arguments, on `n` generators,
/// represented degreewise up to the configured cap.
pub struct RelFreeContext {
    n: usize,
    p: usize,
    max_degree: usize,
    cache: RwLock<BTreeMap<usize, Arc<DegreeData>>>,
}

impl RelFreeContext {
    pub fn new(n: usize, p: usize, max_degree: usize) -> Arc<RelFreeContext> {
        assert!(n >= 1 && p >= 1);
        Arc::new(RelFreeContext { n, p, max_degree, cache: RwLock::new(BTreeMap::new()) })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn degree_data(&self, d: usize) -> Result<Arc<DegreeData>> {
        if d > self.max_degree {
            return Err(Error::DegreeCapExceeded { requested: d, cap: self.max_degree });
        }
        if let Some(data) = self.cache.read().unwrap().get(&d) {
            return Ok(data.clone());
        }
        let built = Arc::new(build_degree_data(self.n, self.p, d));
        let mut guard = self.cache.write().unwrap();
        Ok(guard.entry(d).or_insert(built).clone())
    }

    /// `dim F_d = n^d - dim(T-ideal component)`.
    pub fn dim_f(&self, d: usize) -> Result<usize> {
        Ok(self.degree_data(d)?.dim_quotient())
    }

    /// Representative words of degree `d`, ascending.
    pub fn rep_words(&self, d: usize) -> Result<Vec<Word>> {
        Ok(self.degree_data(d)?.rep_words.clone())
    }

    /// The degree-`d` component of the T-ideal as a dense echelon subspace of
    /// the degree-`d` tensor component, materialized from the cached
    /// reduction data.
    pub fn tideal_component(&self, d: usize) -> Result<Subspace> {
        let data = self.degree_data(d)?;
        let total = self.n.pow(d as u32);
        let mut rows = Vec::with_capacity(data.pivots.len());
        for &pc in &data.pivots {
            let mut row = vec![Scalar::zero(); total];
            row[pc] = Scalar::one();
            // e_pivot - nf(e_pivot)
            for (pos, c) in &data.reduce[pc] {
                let widx = word_index(self.n, &data.rep_words[*pos]);
                row[widx] = -c.clone();
            }
            rows.push(row);
        }
        Ok(Subspace::from_echelon_unchecked(total, rows, data.pivots.clone()))
    }
}

impl std::fmt::Debug for RelFreeContext {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("RelFreeContext")
            .field("n", &self.n)
            .field("p", &self.p)
            .field("max_degree", &self.max_degree)
            .finish()
    }
}

/// Incremental sparse row-echelon accumulator keyed by pivot column. Only
/// used while assembling a T-ideal component; the public subspace type stays
/// dense.
struct SparseRef {
    rows: BTreeMap<usize, Vec<(usize, Scalar)>>,
}

impl SparseRef {
    fn new() -> Self {
        SparseRef { rows: BTreeMap::new() }
    }

    fn insert(&mut self, mut v: BTreeMap<usize, Scalar>) -> bool {
        loop {
            let Some((&lead, _)) = v.first_key_value() else {
                return false;
            };
            match self.rows.get(&lead) {
                Some(row) => {
                    let factor = v.remove(&lead).unwrap();
                    for (col, coeff) in &row[1..] {
                        let delta = &factor * coeff;
                        let entry = v.entry(*col).or_insert_with(Scalar::zero);
                        *entry -= delta;
                        if entry.is_zero() {
                            v.remove(col);
                        }
                    }
                }
                None => {
                    let lead_val = v.first_key_value().unwrap().1.clone();
                    let row: Vec<(usize, Scalar)> =
                        v.into_iter().map(|(c, x)| (c, x / &lead_val)).collect();
                    self.rows.insert(lead, row);
                    return true;
                }
            }
        }
    }

    /// Back-substitute to full reduced echelon form.
    fn into_rref(self) -> BTreeMap<usize, Vec<(usize, Scalar)>> {
        let pivot_cols: Vec<usize> = self.rows.keys().copied().collect();
        let pivot_set: BTreeSet<usize> = pivot_cols.iter().copied().collect();
        let mut pending = self.rows;
        let mut done: BTreeMap<usize, Vec<(usize, Scalar)>> = BTreeMap::new();
        for &pc in pivot_cols.iter().rev() {
            let row = pending.remove(&pc).unwrap();
            let mut acc: BTreeMap<usize, Scalar> = row.into_iter().collect();
            let targets: Vec<usize> =
                acc.keys().copied().filter(|c| *c != pc && pivot_set.contains(c)).collect();
            for t in targets {
                let Some(factor) = acc.remove(&t) else { continue };
                if factor.is_zero() {
                    continue;
                }
                for (col, coeff) in done[&t].iter().skip(1) {
                    let delta = &factor * coeff;
                    let entry = acc.entry(*col).or_insert_with(Scalar::zero);
                    *entry -= delta;
                    if entry.is_zero() {
                        acc.remove(col);
                    }
                }
            }
            done.insert(pc, acc.into_iter().collect());
        }
        done
    }
}

/// Signed word expansion of the left-normed commutator of the given words.
fn left_normed_commutator(ws: &[Word]) -> BTreeMap<Word, i64> {
    let mut cur = BTreeMap::from([(ws[0].clone(), 1i64)]);
    for w in &ws[1..] {
        let mut next: BTreeMap<Word, i64> = BTreeMap::new();
        for (t, s) in &cur {
            *next.entry(t.concat(w)).or_insert(0) += s;
            *next.entry(w.concat(t)).or_insert(0) -= s;
        }
        next.retain(|_, s| *s != 0);
        cur = next;
    }
    cur
}

/// Compositions `(lens, rest)` with `lens` of length `k`, each part >= 1 and
/// `sum(lens) + rest = d`.
fn commutator_shapes(d: usize, k: usize) -> Vec<(Vec<usize>, usize)> {
    fn rec(rest: usize, slots: usize, acc: &mut Vec<usize>, out: &mut Vec<(Vec<usize>, usize)>) {
        if slots == 0 {
            out.push((acc.clone(), rest));
            return;
        }
        for a in 1..=(rest + 1).saturating_sub(slots) {
            acc.push(a);
            rec(rest - a, slots - 1, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    if d >= k {
        rec(d, k, &mut Vec::new(), &mut out);
    }
    out
}

fn build_degree_data(n: usize, p: usize, d: usize) -> DegreeData {
    let total = n.pow(d as u32);
    let words = words_of_degree(n, d);
    if d <= p {
        // The identity has degree p + 1; nothing to reduce.
        let rep_pos: BTreeMap<Word, usize> =
            words.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect();
        let reduce = (0..total).map(|i| vec![(i, Scalar::one())]).collect();
        return DegreeData { dim_tideal: 0, pivots: Vec::new(), rep_words: words, rep_pos, reduce };
    }

    let k = p + 1;
    let mut echelon = SparseRef::new();
    for (lens, rest) in commutator_shapes(d, k) {
        let arg_words: Vec<Vec<Word>> = lens.iter().map(|&l| words_of_degree(n, l)).collect();
        let mut tuple_indices = vec![0usize; k];
        'tuples: loop {
            let ws: Vec<&Word> = tuple_indices.iter().zip(&arg_words).map(|(&i, v)| &v[i]).collect();
            // The commutator is antisymmetric in its first two arguments;
            // keep only w1 < w2 in the word order.
            if ws[0] < ws[1] {
                let owned: Vec<Word> = ws.iter().map(|w| (*w).clone()).collect();
                let comm = left_normed_commutator(&owned);
                if !comm.is_empty() {
                    let comm_idx: Vec<(usize, i64)> =
                        comm.iter().map(|(t, s)| (word_index(n, t), *s)).collect();
                    let mid_len: usize = lens.iter().sum();
                    for a in 0..=rest {
                        let b = rest - a;
                        let shift_mid = n.pow(b as u32);
                        let shift_u = n.pow((mid_len + b) as u32);
                        for u in 0..n.pow(a as u32) {
                            for v in 0..n.pow(b as u32) {
                                let mut cand: BTreeMap<usize, Scalar> = BTreeMap::new();
                                for (t, s) in &comm_idx {
                                    let idx = u * shift_u + t * shift_mid + v;
                                    let entry = cand.entry(idx).or_insert_with(Scalar::zero);
                                    *entry += crate::scalar::int(*s);
                                }
                                cand.retain(|_, c| !c.is_zero());
                                echelon.insert(cand);
                            }
                        }
                    }
                }
            }
            // advance the tuple odometer
            let mut slot = k;
            loop {
                if slot == 0 {
                    break 'tuples;
                }
                slot -= 1;
                tuple_indices[slot] += 1;
                if tuple_indices[slot] < arg_words[slot].len() {
                    break;
                }
                tuple_indices[slot] = 0;
            }
        }
    }

    let rref_rows = echelon.into_rref();
    let pivots: Vec<usize> = rref_rows.keys().copied().collect();
    let pivot_set: BTreeSet<usize> = pivots.iter().copied().collect();
    let rep_indices: Vec<usize> = (0..total).filter(|i| !pivot_set.contains(i)).collect();
    let rep_words: Vec<Word> = rep_indices.iter().map(|&i| words[i].clone()).collect();
    let rep_pos: BTreeMap<Word, usize> =
        rep_words.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect();
    let index_to_rep: BTreeMap<usize, usize> =
        rep_indices.iter().copied().enumerate().map(|(q, i)| (i, q)).collect();
    let mut reduce: Vec<Vec<(usize, Scalar)>> = vec![Vec::new(); total];
    for (q, &i) in rep_indices.iter().enumerate() {
        reduce[i] = vec![(q, Scalar::one())];
    }
    for (&pc, row) in &rref_rows {
        let mut nf: Vec<(usize, Scalar)> = Vec::with_capacity(row.len() - 1);
        for (col, coeff) in row {
            if *col == pc {
                continue;
            }
            debug_assert!(!pivot_set.contains(col));
            nf.push((index_to_rep[col], -coeff.clone()));
        }
        reduce[pc] = nf;
    }
    DegreeData { dim_tideal: pivots.len(), pivots, rep_words, rep_pos, reduce }
}

/// Reduce each homogeneous component of a tensor polynomial modulo the
/// T-ideal, producing the canonical representative in the relatively free
/// algebra. This is the natural surjection expressed on representatives.
pub fn nf_f(rf: &Arc<RelFreeContext>, t: &NCPolynomial) -> Result<NCPolynomial> {
    match t.arena() {
        Arena::Tensor { n } if *n == rf.n() => {}
        Arena::RelFree(other) if other.n() == rf.n() && other.p() == rf.p() => {
            return Ok(NCPolynomial { arena: Arena::RelFree(rf.clone()), terms: t.terms.clone() })
        }
        _ => return Err(Error::ArenaMismatch),
    }
    let mut by_degree: BTreeMap<usize, Arc<DegreeData>> = BTreeMap::new();
    let mut terms: BTreeMap<Word, Scalar> = BTreeMap::new();
    for (w, c) in t.terms() {
        let d = w.degree();
        let data = match by_degree.get(&d) {
            Some(data) => data.clone(),
            None => {
                let data = rf.degree_data(d)?;
                by_degree.insert(d, data.clone());
                data
            }
        };
        let idx = word_index(rf.n(), w);
        for (pos, r) in data.reduce_word(idx) {
            let key = data.rep_words[*pos].clone();
            let entry = terms.entry(key).or_insert_with(Scalar::zero);
            *entry += c * r;
        }
    }
    terms.retain(|_, c| !c.is_zero());
    Ok(NCPolynomial { arena: Arena::RelFree(rf.clone()), terms })
}

/// The equivariant algebra surjection from the tensor algebra on the graded
/// Lie components onto the relatively free algebra, on inputs already
/// expanded over the base tensor algebra (see [`iota_alpha`]). A
/// multihomogeneous input of multidegree `alpha` lands in degree
/// `sum of i * alpha_i`.
pub fn pi_f(rf: &Arc<RelFreeContext>, t: &NCPolynomial) -> Result<NCPolynomial> {
    nf_f(rf, t)
}

/// Distinct rearrangements of a sorted letter multiset, each weighted by
/// `1 / (number of rearrangements)`, i.e. full symmetrization.
pub(crate) fn symmetrize_letters(letters: &[usize]) -> Vec<(Vec<usize>, Scalar)> {
    let mut sorted = letters.to_vec();
    sorted.sort_unstable();
    let mut arrangements = Vec::new();
    loop {
        arrangements.push(sorted.clone());
        // next lexicographic permutation
        let Some(k) = (0..sorted.len().saturating_sub(1)).rev().find(|&k| sorted[k] < sorted[k + 1])
        else {
            break;
        };
        let l = (k + 1..sorted.len()).rev().find(|&l| sorted[k] < sorted[l]).unwrap();
        sorted.swap(k, l);
        sorted[k + 1..].reverse();
    }
    let weight = frac(1, arrangements.len() as i64);
    arrangements.into_iter().map(|a| (a, weight.clone())).collect()
}

/// Full symmetrization of a multihomogeneous commutative polynomial in the
/// Lie basis variables, embedded into the base tensor algebra by expanding
/// every variable through its bracketing. Linear, and a section of the
/// symmetrization-collapse map degree by degree.
pub fn iota_alpha(ctx: &Arc<LieContext>, s: &CommPolynomial) -> Result<NCPolynomial> {
    let arena = Arena::tensor(ctx.n());
    if s.is_zero() {
        return Ok(NCPolynomial::zero(arena));
    }
    if s.multidegree(ctx).is_none() {
        return Err(Error::NotHomogeneous("input is not multihomogeneous".into()));
    }
    let mut acc = NCPolynomial::zero(arena.clone());
    for (mono, c) in s.terms() {
        for (arrangement, weight) in symmetrize_letters(&mono.letters()) {
            let mut prod = NCPolynomial::one(arena.clone());
            for idx in arrangement {
                prod = prod.nc_mul(ctx.bracket_image(idx))?;
            }
            acc = acc.add(&prod.scale(&(c * &weight)))?;
        }
    }
    Ok(acc)
}

/// The canonical linear bijection from the symmetric algebra on the Lie
/// algebra to its enveloping algebra: symmetrize each monomial, read the
/// letters as enveloping generators, and straighten. Not an algebra map.
pub fn omega(ctx: &Arc<LieContext>, s: &CommPolynomial) -> NCPolynomial {
    let arena = Arena::Enveloping(ctx.clone());
    let mut acc = NCPolynomial::zero(arena);
    for (mono, c) in s.terms() {
        for (arrangement, weight) in symmetrize_letters(&mono.letters()) {
            let st = straighten(ctx, &Word(arrangement));
            acc = acc.add(&st.scale(&(c * &weight))).expect("same arena");
        }
    }
    acc
}

/// The algebra homomorphism from the enveloping algebra onto the relatively
/// free algebra: each PBW monomial expands as the product of its letters'
/// bracketings, reduced to normal form. Surjective; injectivity is neither
/// assumed nor used anywhere.
pub fn gamma(ctx: &Arc<LieContext>, rf: &Arc<RelFreeContext>, u: &NCPolynomial) -> Result<NCPolynomial> {
    if ctx.n() != rf.n() || ctx.p() != rf.p() {
        return Err(Error::ContextMismatch);
    }
    if !matches!(u.arena(), Arena::Enveloping(c) if c.n() == ctx.n() && c.p() == ctx.p()) {
        return Err(Error::ArenaMismatch);
    }
    let tensor = Arena::tensor(ctx.n());
    let mut acc = NCPolynomial::zero(tensor.clone());
    for (w, c) in u.terms() {
        let mut prod = NCPolynomial::one(tensor.clone());
        for &idx in &w.0 {
            prod = prod.nc_mul(ctx.bracket_image(idx))?;
        }
        acc = acc.add(&prod.scale(c))?;
    }
    nf_f(rf, &acc)
}
