//! Classical characters: permutation matrices on the index set satisfying
//! every relation of a presentation.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::multigraph::{automorphisms, Multigraph, MultigraphAutomorphism, Slot};
use crate::ncalg::{GeneratorId, NCPolynomial};
use crate::presentation::{vertex_matrix, EdgeMatrix, Presentation};
use crate::scalar::Coefficient;

pub const DEFAULT_CHARACTER_BUDGET: u64 = 10_000_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CharacterError {
    #[error("search budget exceeded after {nodes} nodes ({found} characters found)")]
    SearchBudgetExceeded { nodes: u64, found: usize },
    #[error("edge image of column {0} is not unique")]
    NotAPermutation(usize),
    #[error("character and automorphism sets differ: {unmatched_characters} characters and {unmatched_automorphisms} automorphisms unmatched")]
    MismatchFound {
        unmatched_characters: usize,
        unmatched_automorphisms: usize,
    },
    #[error(transparent)]
    Graph(#[from] crate::multigraph::GraphError),
}

/// `image[c] = r` means `χ(q^{slot r}_{slot c}) = 1`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Character {
    slots: Vec<Slot>,
    image: Vec<usize>,
}

impl Character {
    /// `slots` must be strictly increasing, as presentation slots are.
    pub fn from_image(slots: Vec<Slot>, image: Vec<usize>) -> Self {
        debug_assert!(slots.windows(2).all(|w| w[0] < w[1]));
        Character { slots, image }
    }

    pub fn identity(slots: Vec<Slot>) -> Self {
        debug_assert!(slots.windows(2).all(|w| w[0] < w[1]));
        let image = (0..slots.len()).collect();
        Character { slots, image }
    }

    pub fn slots(&self) -> &[Slot] {
        &self.slots
    }

    pub fn image(&self) -> &[usize] {
        &self.image
    }

    fn index(&self, s: Slot) -> Option<usize> {
        self.slots.binary_search(&s).ok()
    }

    pub fn value(&self, g: GeneratorId) -> bool {
        match (self.index(g.row), self.index(g.col)) {
            (Some(r), Some(c)) => self.image[c] == r,
            _ => false,
        }
    }

    pub fn evaluate<C: Coefficient>(&self, p: &NCPolynomial<C>) -> C {
        let mut acc = C::zero();
        for (w, c) in p.terms() {
            if w.0.iter().all(|&g| self.value(g)) {
                acc = acc + c.clone();
            }
        }
        acc
    }

    /// `(self ∘ other)(q^x_y) = Σ_z self(q^x_z)·other(q^z_y)`, the convolution product.
    pub fn compose(&self, other: &Character) -> Character {
        let image = other.image.iter().map(|&z| self.image[z]).collect();
        Character {
            slots: self.slots.clone(),
            image,
        }
    }

    /// Every relation checked by direct evaluation.
    pub fn satisfies<C: Coefficient>(&self, p: &Presentation<C>) -> bool {
        if self.slots != p.slots() {
            return false;
        }
        let mut seen = vec![false; self.image.len()];
        for &r in &self.image {
            if r >= seen.len() || seen[r] {
                return false;
            }
            seen[r] = true;
        }
        let rules = p.rules();
        for (a, b) in rules.vanishing_pairs() {
            if self.value(a) && self.value(b) {
                return false;
            }
        }
        p.linear_relations().iter().all(|rel| self.evaluate(rel).is_zero())
    }

    /// Cycle notation on the index set, e.g. `((a,1) (a,2))`; `()` for the identity.
    pub fn cycles(&self, names: &[String]) -> String {
        let n = self.image.len();
        let mut seen = vec![false; n];
        let mut out = String::new();
        for start in 0..n {
            if seen[start] || self.image[start] == start {
                continue;
            }
            let mut cyc = Vec::new();
            let mut c = start;
            while !seen[c] {
                seen[c] = true;
                let s = self.slots[c];
                cyc.push(format!("({},{})", names[s.v()], s.label));
                c = self.image[c];
            }
            out.push('(');
            out.push_str(&cyc.join(" "));
            out.push(')');
        }
        if out.is_empty() {
            out.push_str("()");
        }
        out
    }
}

struct Enumerator<'a, C> {
    p: &'a Presentation<C>,
    slots: &'a [Slot],
    budget: u64,
    /// `allowed[r][c]`: the generator `q^r_c` is not a base zero.
    allowed: Vec<Vec<bool>>,
    rv_labels: Option<Vec<usize>>,
}

struct State {
    image: Vec<usize>,
    used: Vec<bool>,
    /// Column vertex feeding each row vertex, under the s-independence relations.
    block: Vec<Option<u32>>,
    nodes: u64,
    found: Vec<Vec<usize>>,
}

impl<C: Coefficient> Enumerator<'_, C> {
    fn compatible(&self, st: &State, r: usize, c: usize) -> bool {
        if st.used[r] || !self.allowed[r][c] {
            return false;
        }
        if self.rv_labels.is_some() {
            let k = self.slots[r].v();
            if let Some(b) = st.block[k] {
                if b != self.slots[c].vertex {
                    return false;
                }
            }
        }
        let g = GeneratorId::new(self.slots[r], self.slots[c]);
        let rules = self.p.rules();
        st.image.iter().enumerate().all(|(c2, &r2)| {
            let h = GeneratorId::new(self.slots[r2], self.slots[c2]);
            !rules.is_vanishing_pair(g, h)
        })
    }

    fn search(&self, st: &mut State) -> Result<(), ()> {
        st.nodes += 1;
        if st.nodes > self.budget {
            return Err(());
        }
        let c = st.image.len();
        if c == self.slots.len() {
            st.found.push(st.image.clone());
            return Ok(());
        }
        for r in 0..self.slots.len() {
            if !self.compatible(st, r, c) {
                continue;
            }
            let k = self.slots[r].v();
            let prev = st.block[k];
            st.block[k] = Some(self.slots[c].vertex);
            st.used[r] = true;
            st.image.push(r);
            let res = self.search(st);
            st.image.pop();
            st.used[r] = false;
            st.block[k] = prev;
            res?;
        }
        Ok(())
    }
}

/// Nodes visited below one first-column choice and the images found there;
/// `Err` when the budget ran out.
type Subtree = (u64, Result<Vec<Vec<usize>>, ()>);

/// All characters, in lexicographic order of their column images.
///
/// The first column's candidates are searched in parallel; every subtree counts
/// its own nodes so the outcome does not depend on scheduling.
pub fn enumerate_characters<C: Coefficient>(
    p: &Presentation<C>,
    budget: u64,
) -> Result<Vec<Character>, CharacterError> {
    let slots = p.slots();
    let n = slots.len();
    let rules = p.rules();
    let allowed: Vec<Vec<bool>> = (0..n)
        .map(|r| {
            (0..n)
                .map(|c| !rules.is_vanishing_pair(GeneratorId::new(slots[r], slots[c]), GeneratorId::new(slots[r], slots[c])))
                .collect()
        })
        .collect();
    let e = Enumerator {
        p,
        slots,
        budget,
        allowed,
        rv_labels: rules.rv().map(|rv| rv.labels.iter().map(Vec::len).collect()),
    };
    let nv = p.names().len();
    let fresh = || State {
        image: Vec::with_capacity(n),
        used: vec![false; n],
        block: vec![None; nv],
        nodes: 0,
        found: Vec::new(),
    };
    if n == 0 {
        return Ok(vec![Character::from_image(Vec::new(), Vec::new())]);
    }
    let parts: Vec<Subtree> = (0..n)
        .into_par_iter()
        .map(|r| {
            let mut st = fresh();
            if !e.compatible(&st, r, 0) {
                return (0, Ok(Vec::new()));
            }
            st.block[slots[r].v()] = Some(slots[0].vertex);
            st.used[r] = true;
            st.image.push(r);
            let res = e.search(&mut st);
            (st.nodes, res.map(|_| st.found))
        })
        .collect();
    let nodes: u64 = parts.iter().map(|(n, _)| n).sum();
    let mut out = Vec::new();
    let mut failed = false;
    for (_, res) in parts {
        match res {
            Ok(found) => out.extend(found),
            Err(()) => failed = true,
        }
    }
    if failed || nodes > budget {
        return Err(CharacterError::SearchBudgetExceeded {
            nodes,
            found: out.len(),
        });
    }
    Ok(out
        .into_iter()
        .map(|image| Character::from_image(slots.to_vec(), image))
        .collect())
}

/// `τ ↦ σ` with `χ(u^σ_τ) = 1`.
pub fn edge_action_of<C: Coefficient>(c: &Character, em: &EdgeMatrix<C>) -> Result<Vec<usize>, CharacterError> {
    let n = em.size();
    let mut out = Vec::with_capacity(n);
    let mut hit = vec![false; n];
    for tau in 0..n {
        let rows: Vec<usize> = (0..n).filter(|&s| !c.evaluate(em.entry(s, tau)).is_zero()).collect();
        match rows.as_slice() {
            [s] if !hit[*s] => {
                hit[*s] = true;
                out.push(*s);
            }
            _ => return Err(CharacterError::NotAPermutation(tau)),
        }
    }
    Ok(out)
}

/// `i ↦ k` with `χ(Q^k_i) = 1`; `None` if the evaluation is not a permutation.
pub fn vertex_action_of<C: Coefficient>(c: &Character, p: &Presentation<C>) -> Option<Vec<usize>> {
    let vm = vertex_matrix(p);
    let nv = vm.size();
    let mut out = Vec::with_capacity(nv);
    let mut hit = vec![false; nv];
    for i in 0..nv {
        let mut row = None;
        for k in 0..nv {
            let v = c.evaluate(vm.entry(k, i));
            if v == C::one() {
                if row.is_some() {
                    return None;
                }
                row = Some(k);
            } else if !v.is_zero() {
                return None;
            }
        }
        let k = row?;
        if hit[k] {
            return None;
        }
        hit[k] = true;
        out.push(k);
    }
    Some(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct FaithfulnessReport {
    pub character_count: usize,
    pub distinct_actions: usize,
    /// Pairs of character indices with identical vertex and edge actions; each
    /// class contributes its first member paired with every other member.
    pub kernel_pairs: Vec<(usize, usize)>,
}

impl FaithfulnessReport {
    pub fn is_faithful(&self) -> bool {
        self.kernel_pairs.is_empty()
    }
}

type Action = (Vec<usize>, Vec<usize>);

fn actions<C: Coefficient>(
    chars: &[Character],
    p: &Presentation<C>,
    em: &EdgeMatrix<C>,
) -> Result<Vec<Action>, CharacterError> {
    chars
        .par_iter()
        .map(|c| {
            let v = vertex_action_of(c, p).ok_or(CharacterError::NotAPermutation(usize::MAX))?;
            Ok((v, edge_action_of(c, em)?))
        })
        .collect()
}

pub fn faithfulness_report<C: Coefficient>(
    chars: &[Character],
    p: &Presentation<C>,
    g: &Multigraph,
) -> Result<FaithfulnessReport, CharacterError> {
    let em = crate::presentation::edge_matrix(p, g);
    let acts = actions(chars, p, &em)?;
    let mut classes: BTreeMap<&Action, Vec<usize>> = BTreeMap::new();
    for (n, a) in acts.iter().enumerate() {
        classes.entry(a).or_default().push(n);
    }
    let mut kernel_pairs: Vec<(usize, usize)> = classes
        .values()
        .flat_map(|members| members[1..].iter().map(move |&m| (members[0], m)))
        .collect();
    kernel_pairs.sort();
    Ok(FaithfulnessReport {
        character_count: chars.len(),
        distinct_actions: classes.len(),
        kernel_pairs,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct AutomorphismMatch {
    pub character_count: usize,
    pub automorphism_count: usize,
    /// `matching[n]` is the automorphism index of character `n`.
    pub matching: Vec<usize>,
}

/// The automorphism a character induces through its vertex and edge actions.
pub fn induced_automorphism<C: Coefficient>(
    c: &Character,
    p: &Presentation<C>,
    em: &EdgeMatrix<C>,
) -> Result<MultigraphAutomorphism, CharacterError> {
    let vertex_map = vertex_action_of(c, p).ok_or(CharacterError::NotAPermutation(usize::MAX))?;
    let ea = edge_action_of(c, em)?;
    let mut edge_maps: BTreeMap<(usize, usize), Vec<u32>> = BTreeMap::new();
    for e in em.edges.iter() {
        edge_maps.entry((e.src, e.dst)).or_default();
    }
    let mut sorted: Vec<usize> = (0..em.edges.len()).collect();
    sorted.sort_by_key(|&t| em.edges[t]);
    for t in sorted {
        let e = em.edges[t];
        let img = em.edges[ea[t]];
        if (img.src, img.dst) != (vertex_map[e.src], vertex_map[e.dst]) {
            return Err(CharacterError::NotAPermutation(t));
        }
        let labels = edge_maps.get_mut(&(e.src, e.dst)).expect("arc present");
        labels.push(img.label);
    }
    Ok(MultigraphAutomorphism {
        vertex_map,
        edge_maps,
    })
}

/// Checks that `χ ↦ (vertex action, edge action)` is a bijection onto the automorphisms.
pub fn compare_with_automorphisms<C: Coefficient>(
    chars: &[Character],
    p: &Presentation<C>,
    g: &Multigraph,
    budget: u128,
) -> Result<AutomorphismMatch, CharacterError> {
    let auts = automorphisms(g, budget)?;
    let index: HashMap<&MultigraphAutomorphism, usize> = auts.iter().enumerate().map(|(n, a)| (a, n)).collect();
    let em = crate::presentation::edge_matrix(p, g);
    let induced: Vec<Option<usize>> = chars
        .par_iter()
        .map(|c| induced_automorphism(c, p, &em).ok().and_then(|a| index.get(&a).copied()))
        .collect();
    let hit: BTreeSet<usize> = induced.iter().flatten().copied().collect();
    let unmatched_characters = induced.iter().filter(|m| m.is_none()).count() + (induced.iter().flatten().count() - hit.len());
    let unmatched_automorphisms = auts.len() - hit.len();
    if unmatched_characters > 0 || unmatched_automorphisms > 0 {
        return Err(CharacterError::MismatchFound {
            unmatched_characters,
            unmatched_automorphisms,
        });
    }
    Ok(AutomorphismMatch {
        character_count: chars.len(),
        automorphism_count: auts.len(),
        matching: induced.into_iter().flatten().collect(),
    })
}
