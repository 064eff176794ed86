use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use super::prove::{Family, Insertion, Step};
use super::{GeneratorId, NCPolynomial, Word};
use crate::multigraph::Slot;
use crate::scalar::Coefficient;

/// The s-independence relations `Σ_r q^{ks}_{ir} = Σ_r q^{ks'}_{ir}`.
///
/// `labels[v]` lists the labels of vertex `v` that occur in the index set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RvSpec {
    pub labels: Vec<Vec<u32>>,
}

impl RvSpec {
    /// Every vertex carries the same label range `1..=n` and the index set is the full grid.
    pub fn is_full(&self) -> bool {
        match self.labels.first() {
            Some(first) => {
                let n = first.len() as u32;
                self.labels
                    .iter()
                    .all(|l| l.len() as u32 == n && l.iter().copied().eq(1..=n))
            }
            None => false,
        }
    }
}

/// A generator shown to vanish by a single unit insertion.
#[derive(Clone, Debug, PartialEq)]
pub struct ZeroLemma<C> {
    pub generator: GeneratorId,
    /// Fixpoint round; the proof only uses lemmas of earlier rounds.
    pub round: usize,
    pub trace: Vec<Step<C>>,
}

/// Monomial relations of a magic unitary plus graph-derived vanishing pairs.
///
/// Same-row and same-column distinct pairs are orthogonal by construction; the
/// explicit `vanishing` set holds the remaining pairs, closed under reversal
/// (`gh = 0` implies `hg = (gh)* = 0`).
#[derive(Clone, Debug)]
pub struct RuleSet<C> {
    slots: Vec<Slot>,
    slot_set: HashSet<Slot>,
    vanishing: HashSet<(GeneratorId, GeneratorId)>,
    zero: BTreeSet<GeneratorId>,
    lemmas: BTreeMap<GeneratorId, ZeroLemma<C>>,
    rv: Option<RvSpec>,
    right_partners: HashMap<Slot, Vec<Slot>>,
    left_partners: HashMap<Slot, Vec<Slot>>,
}

impl<C: Coefficient> RuleSet<C> {
    /// `slots` is the index set of rows and columns; `pairs` are the vanishing
    /// pairs beyond the magic ones. A pair `(g, g)` makes `g` itself zero.
    pub fn new(slots: Vec<Slot>, pairs: impl IntoIterator<Item = (GeneratorId, GeneratorId)>) -> Self {
        let slot_set: HashSet<Slot> = slots.iter().copied().collect();
        let mut vanishing = HashSet::new();
        let mut zero = BTreeSet::new();
        for (a, b) in pairs {
            if a == b {
                zero.insert(a);
            } else {
                vanishing.insert((a, b));
                vanishing.insert((b, a));
            }
        }
        RuleSet {
            slots,
            slot_set,
            vanishing,
            zero,
            lemmas: BTreeMap::new(),
            rv: None,
            right_partners: HashMap::new(),
            left_partners: HashMap::new(),
        }
    }

    pub fn with_rv(mut self, rv: RvSpec) -> Self {
        self.rv = Some(rv);
        self
    }

    /// Registers the edge structure used by partner insertions: for an edge
    /// `(i,j)r` the column slot `(i,r)` has right partner `(j,r)` and `(j,r)`
    /// has left partner `(i,r)`.
    pub fn with_partners(mut self, edges: impl IntoIterator<Item = (Slot, Slot)>) -> Self {
        for (a, b) in edges {
            let r = self.right_partners.entry(a).or_default();
            if !r.contains(&b) {
                r.push(b);
            }
            let l = self.left_partners.entry(b).or_default();
            if !l.contains(&a) {
                l.push(a);
            }
        }
        self
    }

    pub fn slots(&self) -> &[Slot] {
        &self.slots
    }

    pub fn contains_slot(&self, s: Slot) -> bool {
        self.slot_set.contains(&s)
    }

    pub fn is_generator(&self, g: GeneratorId) -> bool {
        self.contains_slot(g.row) && self.contains_slot(g.col)
    }

    pub fn generators(&self) -> Vec<GeneratorId> {
        let mut v = Vec::with_capacity(self.slots.len() * self.slots.len());
        for &r in &self.slots {
            for &c in &self.slots {
                v.push(GeneratorId::new(r, c));
            }
        }
        v
    }

    pub fn rv(&self) -> Option<&RvSpec> {
        self.rv.as_ref()
    }

    pub fn right_partner(&self, col: Slot) -> Option<Slot> {
        self.right_partners.get(&col).and_then(|v| v.first().copied())
    }

    pub fn left_partner(&self, col: Slot) -> Option<Slot> {
        self.left_partners.get(&col).and_then(|v| v.first().copied())
    }

    /// Explicit vanishing pairs, each unordered pair once, plus zero generators as `(g,g)`.
    pub fn vanishing_pairs(&self) -> Vec<(GeneratorId, GeneratorId)> {
        let mut v: Vec<_> = self.vanishing.iter().filter(|(a, b)| a < b).copied().collect();
        v.extend(self.zero.iter().map(|&g| (g, g)));
        v.sort();
        v
    }

    pub fn is_vanishing_pair(&self, a: GeneratorId, b: GeneratorId) -> bool {
        if a == b {
            self.zero.contains(&a)
        } else {
            self.vanishing.contains(&(a, b))
        }
    }

    pub fn base_zero_generators(&self) -> &BTreeSet<GeneratorId> {
        &self.zero
    }

    pub fn lemmas(&self) -> impl Iterator<Item = &ZeroLemma<C>> {
        self.lemmas.values()
    }

    pub fn is_zero_generator(&self, g: GeneratorId) -> bool {
        self.zero.contains(&g) || self.lemmas.contains_key(&g)
    }

    /// `gh = 0` by the magic relations or an explicit pair (not counting zero generators).
    pub fn orthogonal(&self, a: GeneratorId, b: GeneratorId) -> bool {
        (a.row == b.row && a.col != b.col) || (a.col == b.col && a.row != b.row) || self.vanishing.contains(&(a, b))
    }

    pub fn family_members(&self, f: Family) -> impl Iterator<Item = GeneratorId> + '_ {
        self.slots.iter().map(move |&s| match f {
            Family::Row(r) => GeneratorId::new(r, s),
            Family::Col(c) => GeneratorId::new(s, c),
        })
    }

    /// Normal form of a single word under idempotency and orthogonality;
    /// `None` when the word vanishes.
    pub fn reduce_word(&self, w: &[GeneratorId]) -> Option<Word> {
        if w.iter().any(|g| self.is_zero_generator(*g)) {
            return None;
        }
        let mut v = w.to_vec();
        'scan: loop {
            for p in 0..v.len().saturating_sub(1) {
                let (a, b) = (v[p], v[p + 1]);
                if a == b {
                    v.remove(p + 1);
                    continue 'scan;
                }
                if self.orthogonal(a, b) {
                    return None;
                }
            }
            return Some(Word(v));
        }
    }

    /// Leftmost-innermost fixpoint of idempotency and orthogonality rewrites.
    pub fn reduce(&self, p: &NCPolynomial<C>) -> NCPolynomial<C> {
        let mut out = NCPolynomial::zero();
        for (w, c) in p.terms() {
            if let Some(r) = self.reduce_word(&w.0) {
                out.add_term(r, c.clone());
            }
        }
        out
    }

    /// The rule set restricted to lemmas proved before `round`.
    pub fn with_lemmas_before(&self, round: usize) -> Self {
        let mut r = self.clone();
        r.lemmas.retain(|_, l| l.round < round);
        r
    }

    /// Adds every generator that vanishes after one partner-family insertion,
    /// iterating until no new lemma appears.
    pub fn derive_zero_lemmas(&mut self) {
        let gens = self.generators();
        let mut round = 0;
        loop {
            let mut found = Vec::new();
            for &g in &gens {
                if self.is_zero_generator(g) {
                    continue;
                }
                if let Some(trace) = self.single_insertion_zero(g) {
                    found.push(ZeroLemma {
                        generator: g,
                        round,
                        trace,
                    });
                }
            }
            if found.is_empty() {
                break;
            }
            for l in found {
                self.lemmas.insert(l.generator, l);
            }
            round += 1;
        }
    }

    fn single_insertion_zero(&self, g: GeneratorId) -> Option<Vec<Step<C>>> {
        let rights = self.right_partners.get(&g.col).cloned().unwrap_or_default();
        for partner in rights {
            let fam = Family::Col(partner);
            if self.family_members(fam).all(|m| self.reduce_word(&[g, m]).is_none()) {
                return Some(vec![Step::Insert(Insertion::Right(fam)), Step::Reduce]);
            }
        }
        let lefts = self.left_partners.get(&g.col).cloned().unwrap_or_default();
        for partner in lefts {
            let fam = Family::Col(partner);
            if self.family_members(fam).all(|m| self.reduce_word(&[m, g]).is_none()) {
                return Some(vec![Step::Insert(Insertion::Left(fam)), Step::Reduce]);
            }
        }
        None
    }
}
