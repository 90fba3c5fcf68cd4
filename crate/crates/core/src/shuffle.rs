//! Quantum shuffle algebras.
//!
//! The shuffle algebra attached to a symmetrizable Cartan datum has a basis
//! of words in the vertex alphabet.  The product of two words is a sum over
//! all interleavings, each weighted by a power of `v^(1/2)` read off from
//! the symmetric bilinear form on the crossing and non-crossing letter
//! pairs.  The same form twists a deconcatenation comultiplication and a
//! pair of letter-removal operators, making the algebra a twisted bialgebra
//! carrying left and right skew derivations.
//!
//! Elements are generic over the coefficient ring: formal Laurent fractions
//! for symbolic identities, fixed-field scalars for numeric evaluation.

use std::collections::BTreeMap;
use std::fmt;

use crate::cartan::{unit_vector, CartanData, DimVector};
use crate::coeff::{bar_qfact_in, Scalar};

// ---------------------------------------------------------------------------
// Words.
// ---------------------------------------------------------------------------

/// A word in the vertex alphabet, the basis element of the shuffle algebra.
/// Words order by length first, then lexicographically.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Word(Vec<usize>);

impl Word {
    pub fn new(letters: Vec<usize>) -> Self {
        Word(letters)
    }

    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn single(i: usize) -> Self {
        Word(vec![i])
    }

    /// The isotypic word `(i, i, ..., i)` of length `r`.
    pub fn repeated(i: usize, r: usize) -> Self {
        Word(vec![i; r])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[usize] {
        &self.0
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = self.0.clone();
        letters.extend_from_slice(&other.0);
        Word(letters)
    }

    /// Split into the length-`r` prefix and the complementary suffix.
    pub fn split_at(&self, r: usize) -> (Word, Word) {
        assert!(r <= self.len());
        (Word(self.0[..r].to_vec()), Word(self.0[r..].to_vec()))
    }

    /// The word whose letter at position `p` is the `sigma[p]`-th letter of
    /// `self`.
    pub fn permuted(&self, sigma: &[usize]) -> Word {
        assert_eq!(sigma.len(), self.len());
        Word(sigma.iter().map(|&k| self.0[k]).collect())
    }

    /// The degree of the word: the vector counting letter multiplicities.
    pub fn weight(&self, rank: usize) -> DimVector {
        let mut wt = vec![0i64; rank];
        for &j in &self.0 {
            assert!(j < rank, "letter out of range");
            wt[j] += 1;
        }
        wt
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, j) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{j}")?;
        }
        write!(f, ")")
    }
}

// ---------------------------------------------------------------------------
// Shuffle enumeration and the crossing exponent.
// ---------------------------------------------------------------------------

/// All interleavings of the blocks `0..r` and `r..r+s`, each given as the
/// ordering `sigma` with `sigma[p]` the original index placed at output
/// position `p`.  Both blocks stay in their internal order.
pub fn enumerate_shuffles(r: usize, s: usize) -> Vec<Vec<usize>> {
    let n = r + s;
    let mut out = Vec::new();
    // Iterate over the r-subsets of 0..n (positions taken by the first
    // block) in lexicographic order.
    let mut comb: Vec<usize> = (0..r).collect();
    loop {
        let mut sigma = vec![usize::MAX; n];
        for (k, &p) in comb.iter().enumerate() {
            sigma[p] = k;
        }
        let mut next = r;
        for slot in sigma.iter_mut() {
            if *slot == usize::MAX {
                *slot = next;
                next += 1;
            }
        }
        out.push(sigma);
        // Advance the combination odometer; comb[k] ranges up to k + s.
        let mut k = r;
        while k > 0 && comb[k - 1] == k - 1 + s {
            k -= 1;
        }
        if k == 0 {
            break;
        }
        comb[k - 1] += 1;
        for j in k..r {
            comb[j] = comb[j - 1] + 1;
        }
    }
    out
}

/// The crossing exponent of a shuffle, returned as an exponent of
/// `v^(1/2)`.  `word` is the concatenation of the two blocks, `r` the
/// length of the first, and `sigma` an ordering as produced by
/// [`enumerate_shuffles`]: inverted cross pairs contribute the bilinear
/// form of their letters positively, non-inverted pairs negatively.
pub fn zeta(cartan: &CartanData, word: &Word, r: usize, sigma: &[usize]) -> i64 {
    let n = word.len();
    assert!(r <= n, "first block longer than the word");
    assert_eq!(sigma.len(), n, "ordering length mismatch");
    let mut pos = vec![usize::MAX; n];
    for (p, &k) in sigma.iter().enumerate() {
        assert!(k < n, "ordering entry out of range");
        assert!(pos[k] == usize::MAX, "ordering repeats an index");
        pos[k] = p;
    }
    for block in [&pos[..r], &pos[r..]] {
        for pair in block.windows(2) {
            assert!(pair[0] < pair[1], "blocks must stay in internal order");
        }
    }
    let letters = word.letters();
    let mut half_exp = 0i64;
    for k in 0..r {
        for l in r..n {
            let pairing = cartan.sym(letters[k], letters[l]);
            if pos[l] < pos[k] {
                half_exp += pairing;
            } else {
                half_exp -= pairing;
            }
        }
    }
    half_exp
}

// ---------------------------------------------------------------------------
// Shuffle algebra elements.
// ---------------------------------------------------------------------------

/// A finitely supported linear combination of words.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShuffleElt<S: Scalar> {
    terms: BTreeMap<Word, S>,
}

impl<S: Scalar> ShuffleElt<S> {
    pub fn zero() -> Self {
        ShuffleElt {
            terms: BTreeMap::new(),
        }
    }

    /// The empty word with coefficient one: the unit of the algebra.
    pub fn unit() -> Self {
        Self::from_term(Word::empty(), S::one())
    }

    pub fn from_word(w: Word) -> Self {
        Self::from_term(w, S::one())
    }

    pub fn from_term(w: Word, c: S) -> Self {
        let mut out = Self::zero();
        out.add_term(w, c);
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Word, &S)> {
        self.terms.iter()
    }

    pub fn coeff(&self, w: &Word) -> S {
        self.terms.get(w).cloned().unwrap_or_else(S::zero)
    }

    /// Add `c * w` into this element, dropping the term if it cancels.
    pub fn add_term(&mut self, w: Word, c: S) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(w) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get().add(&c);
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (w, c) in other.iter() {
            out.add_term(w.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        ShuffleElt {
            terms: self
                .terms
                .iter()
                .map(|(w, c)| (w.clone(), c.neg()))
                .collect(),
        }
    }

    pub fn scale(&self, c: &S) -> Self {
        let mut out = Self::zero();
        for (w, a) in self.iter() {
            out.add_term(w.clone(), a.mul(c));
        }
        out
    }

    /// Multiply every coefficient by `v^(half_exp/2)`.
    pub fn mul_v_half_pow(&self, half_exp: i64) -> Self {
        let mut out = Self::zero();
        for (w, a) in self.iter() {
            out.add_term(w.clone(), a.mul_v_half_pow(half_exp));
        }
        out
    }

    /// Apply `f` to every coefficient, dropping terms that map to zero.
    pub fn map_coeffs<T: Scalar>(&self, mut f: impl FnMut(&S) -> T) -> ShuffleElt<T> {
        let mut out = ShuffleElt::zero();
        for (w, c) in self.iter() {
            out.add_term(w.clone(), f(c));
        }
        out
    }
}

impl<S: Scalar> fmt::Display for ShuffleElt<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (w, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})*{w}")?;
        }
        Ok(())
    }
}

/// The shuffle product: every pair of words contributes all of its
/// interleavings, weighted by the crossing exponent.
pub fn shuffle_mul<S: Scalar>(
    cartan: &CartanData,
    a: &ShuffleElt<S>,
    b: &ShuffleElt<S>,
) -> ShuffleElt<S> {
    let mut out = ShuffleElt::zero();
    for (wa, ca) in a.iter() {
        for (wb, cb) in b.iter() {
            let joined = wa.concat(wb);
            let c0 = ca.mul(cb);
            for sigma in enumerate_shuffles(wa.len(), wb.len()) {
                let e = zeta(cartan, &joined, wa.len(), &sigma);
                out.add_term(joined.permuted(&sigma), c0.mul_v_half_pow(e));
            }
        }
    }
    out
}

/// The `r`-th power of the single-letter word `(i)` under the shuffle
/// product.  `ctx` fixes the coefficient context (pass `S::one()` for
/// formal coefficients, or a fixed-field unit).
pub fn power_of_single<S: Scalar>(
    cartan: &CartanData,
    i: usize,
    r: usize,
    ctx: &S,
) -> ShuffleElt<S> {
    let single = ShuffleElt::from_term(Word::single(i), ctx.v_half_pow_like(0));
    let mut out = ShuffleElt::from_term(Word::empty(), ctx.v_half_pow_like(0));
    for _ in 0..r {
        out = shuffle_mul(cartan, &out, &single);
    }
    out
}

/// The divided power `(i)^r / [r]!_{v^(d_i)}`, which collapses to the
/// isotypic word `(i^r)`.
pub fn divided_power<S: Scalar>(cartan: &CartanData, i: usize, r: usize, ctx: &S) -> ShuffleElt<S> {
    let fact = bar_qfact_in(ctx, r as u32, cartan.symmetrizer(i) as u32);
    let inv = fact.invert().expect("balanced factorial is invertible");
    power_of_single(cartan, i, r, ctx).scale(&inv)
}

/// Sum of signed mixed divided-power products that must vanish for every
/// off-diagonal vertex pair; returns whether it does.
pub fn serre_check<S: Scalar>(cartan: &CartanData, i: usize, j: usize, ctx: &S) -> bool {
    assert!(i != j, "the relation needs two distinct vertices");
    let n = (1 - cartan.entry(i, j)) as usize;
    let single_j = ShuffleElt::from_term(Word::single(j), ctx.v_half_pow_like(0));
    let mut sum = ShuffleElt::zero();
    for r in 0..=n {
        let left = shuffle_mul(cartan, &divided_power(cartan, i, r, ctx), &single_j);
        let term = shuffle_mul(cartan, &left, &divided_power(cartan, i, n - r, ctx));
        if r % 2 == 0 {
            sum = sum.add(&term);
        } else {
            sum = sum.sub(&term);
        }
    }
    sum.is_zero()
}

// ---------------------------------------------------------------------------
// Comultiplication and the twisted tensor square.
// ---------------------------------------------------------------------------

/// A finitely supported linear combination of pairs of words, the ambient
/// space of the comultiplication.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TensorElt<S: Scalar> {
    terms: BTreeMap<(Word, Word), S>,
}

impl<S: Scalar> TensorElt<S> {
    pub fn zero() -> Self {
        TensorElt {
            terms: BTreeMap::new(),
        }
    }

    pub fn from_term(w1: Word, w2: Word, c: S) -> Self {
        let mut out = Self::zero();
        out.add_term(w1, w2, c);
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(Word, Word), &S)> {
        self.terms.iter()
    }

    pub fn coeff(&self, w1: &Word, w2: &Word) -> S {
        self.terms
            .get(&(w1.clone(), w2.clone()))
            .cloned()
            .unwrap_or_else(S::zero)
    }

    pub fn add_term(&mut self, w1: Word, w2: Word, c: S) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry((w1, w2)) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get().add(&c);
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for ((w1, w2), c) in other.iter() {
            out.add_term(w1.clone(), w2.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for ((w1, w2), c) in other.iter() {
            out.add_term(w1.clone(), w2.clone(), c.neg());
        }
        out
    }

    /// The simple tensor `a (x) b`.
    pub fn tensor(a: &ShuffleElt<S>, b: &ShuffleElt<S>) -> Self {
        let mut out = Self::zero();
        for (wa, ca) in a.iter() {
            for (wb, cb) in b.iter() {
                out.add_term(wa.clone(), wb.clone(), ca.mul(cb));
            }
        }
        out
    }
}

impl<S: Scalar> fmt::Display for TensorElt<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, ((w1, w2), c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})*{w1}(x){w2}")?;
        }
        Ok(())
    }
}

/// Deconcatenation comultiplication: every split of a word contributes,
/// weighted by half the bilinear form of the two degrees.
pub fn comult<S: Scalar>(cartan: &CartanData, x: &ShuffleElt<S>) -> TensorElt<S> {
    let rank = cartan.rank();
    let mut out = TensorElt::zero();
    for (w, c) in x.iter() {
        for r in 0..=w.len() {
            let (w1, w2) = w.split_at(r);
            let e = cartan.sym_form(&w1.weight(rank), &w2.weight(rank));
            out.add_term(w1, w2, c.mul_v_half_pow(e));
        }
    }
    out
}

/// Multiplication on the tensor square, twisted by the full bilinear form
/// of the inner degrees.
pub fn tensor_mul<S: Scalar>(
    cartan: &CartanData,
    x: &TensorElt<S>,
    y: &TensorElt<S>,
) -> TensorElt<S> {
    let rank = cartan.rank();
    let mut out = TensorElt::zero();
    for ((a1, a2), ca) in x.iter() {
        for ((b1, b2), cb) in y.iter() {
            let twist = 2 * cartan.sym_form(&a2.weight(rank), &b1.weight(rank));
            let c0 = ca.mul(cb).mul_v_half_pow(twist);
            let left = shuffle_mul(
                cartan,
                &ShuffleElt::from_word(a1.clone()),
                &ShuffleElt::from_word(b1.clone()),
            );
            let right = shuffle_mul(
                cartan,
                &ShuffleElt::from_word(a2.clone()),
                &ShuffleElt::from_word(b2.clone()),
            );
            for (w1, c1) in left.iter() {
                for (w2, c2) in right.iter() {
                    out.add_term(w1.clone(), w2.clone(), c0.mul(c1).mul(c2));
                }
            }
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Letter-removal operators.
// ---------------------------------------------------------------------------

/// Remove a trailing letter `i`, weighted by half the bilinear form of the
/// remaining degree against the letter; words not ending in `i` map to zero.
pub fn theta<S: Scalar>(cartan: &CartanData, i: usize, x: &ShuffleElt<S>) -> ShuffleElt<S> {
    let rank = cartan.rank();
    let alpha_i = unit_vector(rank, i);
    let mut out = ShuffleElt::zero();
    for (w, c) in x.iter() {
        let Some((&last, rest)) = w.letters().split_last() else {
            continue;
        };
        if last != i {
            continue;
        }
        let mut wt = w.weight(rank);
        wt[i] -= 1;
        let e = cartan.sym_form(&wt, &alpha_i);
        out.add_term(Word::new(rest.to_vec()), c.mul_v_half_pow(e));
    }
    out
}

/// Remove a leading letter `i`; the mirror of [`theta`].
pub fn theta_star<S: Scalar>(cartan: &CartanData, i: usize, x: &ShuffleElt<S>) -> ShuffleElt<S> {
    let rank = cartan.rank();
    let alpha_i = unit_vector(rank, i);
    let mut out = ShuffleElt::zero();
    for (w, c) in x.iter() {
        let Some((&first, rest)) = w.letters().split_first() else {
            continue;
        };
        if first != i {
            continue;
        }
        let mut wt = w.weight(rank);
        wt[i] -= 1;
        let e = cartan.sym_form(&alpha_i, &wt);
        out.add_term(Word::new(rest.to_vec()), c.mul_v_half_pow(e));
    }
    out
}
