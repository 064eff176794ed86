//! Free *-algebra on self-adjoint generators `q^{ks}_{ir}` with field coefficients.
//!
//! Generators are indexed by a row slot `(k,s)` and a column slot `(i,r)`.
//! Because every generator is a self-adjoint projection, words carry no star
//! decorations and the involution simply reverses words.

mod prove;
mod rules;
mod text;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::Serialize;

use crate::multigraph::Slot;
use crate::scalar::Coefficient;

pub use prove::{
    apply_insertion, candidate_moves, closure, closure_collapse_first, prove_equal, prove_zero, replay, Family, Insertion, ProofBudget, ProofOutcome, ProofStatus, ReplayError,
    Side, Step,
};
pub use rules::{RuleSet, RvSpec, ZeroLemma};
pub use text::{format_generator, format_poly, format_word, parse_generator, parse_poly, TextError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct GeneratorId {
    pub row: Slot,
    pub col: Slot,
}

impl GeneratorId {
    pub fn new(row: Slot, col: Slot) -> Self {
        GeneratorId { row, col }
    }

    /// The generator with row and column exchanged.
    pub fn transpose(&self) -> Self {
        GeneratorId {
            row: self.col,
            col: self.row,
        }
    }
}

impl fmt::Display for GeneratorId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "q[{},{}|{},{}]",
            self.row.vertex, self.row.label, self.col.vertex, self.col.label
        )
    }
}

/// A monomial; the empty word is the unit.
///
/// Ordered graded-lexicographically: shorter words first, then by generators.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize)]
pub struct Word(pub Vec<GeneratorId>);

impl Word {
    pub fn unit() -> Self {
        Word(Vec::new())
    }

    pub fn is_unit(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = Vec::with_capacity(self.len() + other.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn reversed(&self) -> Word {
        Word(self.0.iter().rev().copied().collect())
    }

    /// `prefix · g · suffix`
    pub fn splice(prefix: &[GeneratorId], g: GeneratorId, suffix: &[GeneratorId]) -> Word {
        let mut v = Vec::with_capacity(prefix.len() + suffix.len() + 1);
        v.extend_from_slice(prefix);
        v.push(g);
        v.extend_from_slice(suffix);
        Word(v)
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl From<GeneratorId> for Word {
    fn from(g: GeneratorId) -> Self {
        Word(vec![g])
    }
}

impl FromIterator<GeneratorId> for Word {
    fn from_iter<I: IntoIterator<Item = GeneratorId>>(iter: I) -> Self {
        Word(iter.into_iter().collect())
    }
}

/// Finite linear combination of words; zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq)]
pub struct NCPolynomial<C> {
    terms: BTreeMap<Word, C>,
}

impl<C: Coefficient> Default for NCPolynomial<C> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<C: Coefficient> NCPolynomial<C> {
    pub fn zero() -> Self {
        NCPolynomial {
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        Self::monomial(Word::unit(), C::one())
    }

    pub fn monomial(w: Word, c: C) -> Self {
        let mut p = Self::zero();
        p.add_term(w, c);
        p
    }

    pub fn generator(g: GeneratorId) -> Self {
        Self::monomial(Word::from(g), C::one())
    }

    pub fn word(gens: &[GeneratorId]) -> Self {
        Self::monomial(Word(gens.to_vec()), C::one())
    }

    pub fn from_terms<I: IntoIterator<Item = (Word, C)>>(terms: I) -> Self {
        let mut p = Self::zero();
        for (w, c) in terms {
            p.add_term(w, c);
        }
        p
    }

    /// Sum of the given generators with unit coefficients.
    pub fn sum_of<I: IntoIterator<Item = GeneratorId>>(gens: I) -> Self {
        Self::from_terms(gens.into_iter().map(|g| (Word::from(g), C::one())))
    }

    pub fn add_term(&mut self, w: Word, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&w) {
            Some(existing) => {
                let s = existing.clone() + c;
                if s.is_zero() {
                    self.terms.remove(&w);
                } else {
                    *existing = s;
                }
            }
            None => {
                self.terms.insert(w, c);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &C)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, w: &Word) -> Option<&C> {
        self.terms.get(w)
    }

    pub fn max_word_len(&self) -> usize {
        self.terms.keys().map(Word::len).max().unwrap_or(0)
    }

    pub fn scale(&self, c: &C) -> Self {
        Self::from_terms(self.terms.iter().map(|(w, d)| (w.clone(), d.clone() * c.clone())))
    }

    /// Bilinear extension of word concatenation.
    pub fn multiply(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                out.add_term(a.concat(b), ca.clone() * cb.clone());
            }
        }
        out
    }

    /// The involution: reverses words; generators are self-adjoint and
    /// coefficients are real.
    pub fn adjoint(&self) -> Self {
        Self::from_terms(self.terms.iter().map(|(w, c)| (w.reversed(), c.clone())))
    }

    pub fn generators(&self) -> impl Iterator<Item = GeneratorId> + '_ {
        self.terms.keys().flat_map(|w| w.0.iter().copied())
    }

    /// Evaluates with a scalar-valued assignment of generators (commutative targets).
    pub fn evaluate<F: FnMut(GeneratorId) -> C>(&self, mut value: F) -> C {
        let mut acc = C::zero();
        for (w, c) in &self.terms {
            let mut t = c.clone();
            for g in &w.0 {
                if t.is_zero() {
                    break;
                }
                t = t * value(*g);
            }
            acc = acc + t;
        }
        acc
    }

    pub(crate) fn terms_map(&self) -> &BTreeMap<Word, C> {
        &self.terms
    }
}

impl<C: Coefficient> Add for NCPolynomial<C> {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        for (w, c) in rhs.terms {
            self.add_term(w, c);
        }
        self
    }
}

impl<C: Coefficient> Sub for NCPolynomial<C> {
    type Output = Self;
    fn sub(mut self, rhs: Self) -> Self {
        for (w, c) in rhs.terms {
            self.add_term(w, -c);
        }
        self
    }
}

impl<C: Coefficient> Neg for NCPolynomial<C> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::from_terms(self.terms.into_iter().map(|(w, c)| (w, -c)))
    }
}

impl<C: Coefficient> Mul for NCPolynomial<C> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        self.multiply(&rhs)
    }
}

impl<C: Coefficient> fmt::Display for NCPolynomial<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (n, (w, c)) in self.terms.iter().enumerate() {
            if n > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{}", c)?;
            for g in &w.0 {
                write!(f, "*{}", g)?;
            }
        }
        Ok(())
    }
}

/// Two-leg tensor combination of words, used for coproduct identities.
#[derive(Clone, Debug, PartialEq)]
pub struct TensorPolynomial<C> {
    terms: BTreeMap<(Word, Word), C>,
}

impl<C: Coefficient> Default for TensorPolynomial<C> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<C: Coefficient> TensorPolynomial<C> {
    pub fn zero() -> Self {
        TensorPolynomial {
            terms: BTreeMap::new(),
        }
    }

    pub fn add_term(&mut self, left: Word, right: Word, c: C) {
        if c.is_zero() {
            return;
        }
        let key = (left, right);
        match self.terms.get_mut(&key) {
            Some(e) => {
                let s = e.clone() + c;
                if s.is_zero() {
                    self.terms.remove(&key);
                } else {
                    *e = s;
                }
            }
            None => {
                self.terms.insert(key, c);
            }
        }
    }

    /// `a ⊗ b` for polynomials `a`, `b`.
    pub fn tensor(a: &NCPolynomial<C>, b: &NCPolynomial<C>) -> Self {
        let mut t = Self::zero();
        for (wa, ca) in a.terms() {
            for (wb, cb) in b.terms() {
                t.add_term(wa.clone(), wb.clone(), ca.clone() * cb.clone());
            }
        }
        t
    }

    /// Legwise product `(a⊗b)(c⊗d) = ac ⊗ bd`.
    pub fn multiply(&self, other: &Self) -> Self {
        let mut t = Self::zero();
        for ((a, b), c1) in &self.terms {
            for ((c, d), c2) in &other.terms {
                t.add_term(a.concat(c), b.concat(d), c1.clone() * c2.clone());
            }
        }
        t
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(Word, Word), &C)> {
        self.terms.iter()
    }

    /// Evaluates leg-wise with two scalar assignments.
    pub fn evaluate<F, G>(&self, mut left: F, mut right: G) -> C
    where
        F: FnMut(GeneratorId) -> C,
        G: FnMut(GeneratorId) -> C,
    {
        let mut acc = C::zero();
        for ((a, b), c) in &self.terms {
            let mut t = c.clone();
            for g in &a.0 {
                t = t * left(*g);
            }
            for g in &b.0 {
                t = t * right(*g);
            }
            acc = acc + t;
        }
        acc
    }
}

impl<C: Coefficient> Sub for TensorPolynomial<C> {
    type Output = Self;
    fn sub(mut self, rhs: Self) -> Self {
        for ((a, b), c) in rhs.terms {
            self.add_term(a, b, -c);
        }
        self
    }
}

impl<C: Coefficient> Add for TensorPolynomial<C> {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        for ((a, b), c) in rhs.terms {
            self.add_term(a, b, c);
        }
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;
    use proptest::prelude::*;

    fn g(k: u32, s: u32, i: u32, r: u32) -> GeneratorId {
        GeneratorId::new(
            Slot { vertex: k, label: s },
            Slot { vertex: i, label: r },
        )
    }

    type P = NCPolynomial<Rational>;

    #[test]
    fn unit_law_and_adjoint() {
        let p = P::word(&[g(0, 1, 1, 1), g(1, 1, 0, 1)]) + P::generator(g(0, 1, 0, 1)).scale(&Rational::new(-3, 1));
        assert_eq!(P::one().multiply(&p), p);
        assert_eq!(p.multiply(&P::one()), p);
        assert_eq!(P::one().adjoint(), P::one());
        let gh = P::word(&[g(0, 1, 0, 1), g(1, 1, 1, 1)]);
        assert_eq!(gh.adjoint(), P::word(&[g(1, 1, 1, 1), g(0, 1, 0, 1)]));
        let q = gh.scale(&Rational::from_integer(2)) - P::generator(g(1, 1, 1, 1)).scale(&Rational::from_integer(3));
        let expected = P::word(&[g(1, 1, 1, 1), g(0, 1, 0, 1)]).scale(&Rational::from_integer(2))
            - P::generator(g(1, 1, 1, 1)).scale(&Rational::from_integer(3));
        assert_eq!(q.adjoint(), expected);
    }

    #[test]
    fn graded_order() {
        let a = Word(vec![g(1, 1, 1, 1)]);
        let b = Word(vec![g(0, 1, 0, 1), g(0, 1, 0, 1)]);
        assert!(Word::unit() < a && a < b);
    }

    fn arb_poly() -> impl Strategy<Value = P> {
        let gen = (0u32..2, 1u32..3, 0u32..2, 1u32..3).prop_map(|(k, s, i, r)| g(k, s, i, r));
        let term = (proptest::collection::vec(gen, 0..4), -4i64..5);
        proptest::collection::vec(term, 0..5)
            .prop_map(|ts| P::from_terms(ts.into_iter().map(|(w, c)| (Word(w), Rational::from_integer(c)))))
    }

    proptest! {
        #[test]
        fn adjoint_is_involutive_antihomomorphism(p in arb_poly(), q in arb_poly()) {
            prop_assert_eq!(p.adjoint().adjoint(), p.clone());
            prop_assert_eq!(p.multiply(&q).adjoint(), q.adjoint().multiply(&p.adjoint()));
        }

        #[test]
        fn no_zero_coefficients(p in arb_poly(), q in arb_poly()) {
            let r = (p.clone() - q.clone()) + q - p;
            prop_assert!(r.is_zero());
        }
    }
}
