//! Relation catalogues for the quantum automorphism object of a multigraph,
//! its permissible subalgebra and the lift of the vertex quantum automorphism group.

mod export;

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::multigraph::{Edge, Multigraph, Slot};
use crate::ncalg::{prove_zero, GeneratorId, NCPolynomial, ProofBudget, ProofOutcome, RuleSet, RvSpec, TensorPolynomial, Word};
use crate::scalar::Coefficient;
use crate::Rational;

pub use export::{ExportError, PresentationJson};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PresentationKind {
    Uniform,
    NonUniform,
    BanicaLift,
}

/// Which index set the generators range over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Scope {
    Full,
    Permissible,
}

/// Generators, monomial relations and linear side relations of one presentation.
#[derive(Clone, Debug)]
pub struct Presentation<C = Rational> {
    pub kind: PresentationKind,
    pub scope: Scope,
    names: Vec<String>,
    n_max: u32,
    /// Column slots `(i,r)`, `(j,r)` of every edge `(i,j)r`, in edge order.
    edge_slots: Vec<(Slot, Slot)>,
    rules: RuleSet<C>,
    linear: Vec<NCPolynomial<C>>,
    /// `q^{ks}_{ir} ↦ δ_{sr}·u^k_i`; empty unless this is a lift.
    substitutions: Vec<(GeneratorId, Option<GeneratorId>)>,
}

/// Coproduct terms of a retained generator that leave the permissible index set.
#[derive(Clone, Debug)]
pub struct ClosureEntry {
    pub generator: GeneratorId,
    pub via: Slot,
    /// Outcome for the right leg `q^{via}_{col}` being zero.
    pub outcome: ProofOutcome<Rational>,
}

#[derive(Clone, Debug)]
pub struct ClosureReport {
    pub entries: Vec<ClosureEntry>,
    /// Edge words `q^{ks}_{ir} q^{ls}_{jr}` of the alternative generating set.
    pub edge_words: Vec<NCPolynomial<Rational>>,
}

impl ClosureReport {
    pub fn all_proved(&self) -> bool {
        self.entries.iter().all(|e| e.outcome.is_proved())
    }
}

/// Rows `σ` and columns `τ` range over the labeled edges.
#[derive(Clone, Debug)]
pub struct EdgeMatrix<C = Rational> {
    pub edges: Vec<Edge>,
    pub entries: Vec<Vec<NCPolynomial<C>>>,
}

impl<C: Coefficient> EdgeMatrix<C> {
    pub fn size(&self) -> usize {
        self.edges.len()
    }

    pub fn entry(&self, sigma: usize, tau: usize) -> &NCPolynomial<C> {
        &self.entries[sigma][tau]
    }
}

/// `entries[k][i] = Q^k_i`.
#[derive(Clone, Debug)]
pub struct VertexMatrix<C = Rational> {
    pub entries: Vec<Vec<NCPolynomial<C>>>,
}

impl<C: Coefficient> VertexMatrix<C> {
    pub fn size(&self) -> usize {
        self.entries.len()
    }

    pub fn entry(&self, k: usize, i: usize) -> &NCPolynomial<C> {
        &self.entries[k][i]
    }
}

fn edge_slots(g: &Multigraph) -> Vec<(Slot, Slot)> {
    g.edges().iter().map(|e| (e.source_slot(), e.target_slot())).collect()
}

/// Relations (2)–(4): for an edge `(i,j)r`, `q^{ks}_{ir} q^{ls'}_{jr} = 0` unless
/// `(k,l)s` is itself an edge and `s = s'`.
pub fn edge_vanishes(g: &Multigraph, k: Slot, l: Slot) -> bool {
    let m = g.mult(k.v(), l.v());
    m == 0 || k.label != l.label || k.label > m
}

fn graph_pairs(g: &Multigraph, slots: &[Slot]) -> Vec<(GeneratorId, GeneratorId)> {
    let mut pairs = BTreeSet::new();
    for e in g.edges() {
        let (a, b) = (e.source_slot(), e.target_slot());
        for &k in slots {
            for &l in slots {
                if edge_vanishes(g, k, l) {
                    pairs.insert((GeneratorId::new(k, a), GeneratorId::new(l, b)));
                }
            }
        }
    }
    pairs.into_iter().collect()
}

fn rv_spec(names_len: usize, slots: &[Slot]) -> RvSpec {
    let mut labels = vec![Vec::new(); names_len];
    for s in slots {
        labels[s.v()].push(s.label);
    }
    RvSpec { labels }
}

fn rv_relations<C: Coefficient>(rules: &RuleSet<C>, rv: &RvSpec) -> Vec<NCPolynomial<C>> {
    let mut out = Vec::new();
    for (k, ks) in rv.labels.iter().enumerate() {
        for (i, is) in rv.labels.iter().enumerate() {
            for w in ks.windows(2) {
                let sum = |s: u32| {
                    NCPolynomial::sum_of(is.iter().map(|&r| GeneratorId::new(Slot::new(k, s), Slot::new(i, r))))
                };
                let rel = sum(w[0]) - sum(w[1]);
                if !rules.reduce(&rel).is_zero() {
                    out.push(rel);
                }
            }
        }
    }
    out
}

/// The presentation of `Q_(V,E)` over `V×{1..N}`.
pub fn build_presentation<C: Coefficient>(g: &Multigraph, include_rv: bool) -> Presentation<C> {
    let slots = g.all_slots();
    let pairs = graph_pairs(g, &slots);
    assemble(g, slots, pairs, include_rv, Scope::Full)
}

fn assemble<C: Coefficient>(
    g: &Multigraph,
    slots: Vec<Slot>,
    pairs: Vec<(GeneratorId, GeneratorId)>,
    include_rv: bool,
    scope: Scope,
) -> Presentation<C> {
    let es = edge_slots(g);
    let mut rules = RuleSet::new(slots.clone(), pairs).with_partners(es.iter().copied());
    let mut linear = Vec::new();
    if include_rv {
        let rv = rv_spec(g.vertex_count(), &slots);
        linear = rv_relations(&rules, &rv);
        rules = rules.with_rv(rv);
    }
    rules.derive_zero_lemmas();
    Presentation {
        kind: if g.is_uniform() {
            PresentationKind::Uniform
        } else {
            PresentationKind::NonUniform
        },
        scope,
        names: g.names().to_vec(),
        n_max: g.max_multiplicity(),
        edge_slots: es,
        rules,
        linear,
        substitutions: Vec::new(),
    }
}

/// The lift `q^{ks}_{ir} = δ_{sr}·u^k_i` of a magic unitary `U` commuting with
/// the adjacency matrix, with `u^k_i u^l_j = 0` whenever `|E^k_l| ≠ |E^i_j|`.
///
/// Generator `u^k_i` is stored as `q[k,1|i,1]`.
pub fn banica_lift<C: Coefficient>(g: &Multigraph) -> Presentation<C> {
    let nv = g.vertex_count();
    let slots: Vec<Slot> = (0..nv).map(|v| Slot::new(v, 1)).collect();
    let u = |k: usize, i: usize| GeneratorId::new(Slot::new(k, 1), Slot::new(i, 1));
    let mut pairs = Vec::new();
    for k in 0..nv {
        for l in 0..nv {
            for i in 0..nv {
                for j in 0..nv {
                    if g.mult(k, l) != g.mult(i, j) {
                        pairs.push((u(k, i), u(l, j)));
                    }
                }
            }
        }
    }
    let arcs: Vec<(Slot, Slot)> = g
        .underlying()
        .arcs
        .iter()
        .map(|&((i, j), _)| (Slot::new(i, 1), Slot::new(j, 1)))
        .collect();
    let mut rules = RuleSet::new(slots, pairs).with_partners(arcs.iter().copied());
    rules.derive_zero_lemmas();
    let adj = g.underlying().adjacency();
    let mut linear = Vec::new();
    for k in 0..nv {
        for j in 0..nv {
            let mut rel = NCPolynomial::zero();
            for i in 0..nv {
                if adj[i][j] != 0 {
                    rel.add_term(Word(vec![u(k, i)]), C::one());
                }
            }
            for l in 0..nv {
                if adj[k][l] != 0 {
                    rel.add_term(Word(vec![u(l, j)]), -C::one());
                }
            }
            if !rel.is_zero() {
                linear.push(rel);
            }
        }
    }
    let mut substitutions = Vec::new();
    for x in g.all_slots() {
        for y in g.all_slots() {
            let image = (x.label == y.label).then(|| u(x.v(), y.v()));
            substitutions.push((GeneratorId::new(x, y), image));
        }
    }
    Presentation {
        kind: PresentationKind::BanicaLift,
        scope: Scope::Full,
        names: g.names().to_vec(),
        n_max: g.max_multiplicity(),
        edge_slots: arcs,
        rules,
        linear,
        substitutions,
    }
}

/// The generators of `Q′` with both indices permissible, and the report that the
/// coproduct restricts: every dropped term `q^x_z ⊗ q^z_y` has `q^z_y = 0`.
pub fn permissible_subpresentation(
    p: &Presentation<Rational>,
    g: &Multigraph,
    budget: ProofBudget,
) -> (Presentation<Rational>, ClosureReport) {
    let perm = g.permissible_pairs();
    let slots: Vec<Slot> = p.slots().iter().copied().filter(|s| perm.contains(s)).collect();
    let pairs: Vec<_> = graph_pairs(g, &slots);
    let sub = assemble(g, slots.clone(), pairs, p.rules.rv().is_some(), Scope::Permissible);
    let dropped: Vec<Slot> = p.slots().iter().copied().filter(|s| !perm.contains(s)).collect();
    let mut entries = Vec::new();
    for &x in &slots {
        for &y in &slots {
            for &z in &dropped {
                let leg = NCPolynomial::generator(GeneratorId::new(z, y));
                entries.push(ClosureEntry {
                    generator: GeneratorId::new(x, y),
                    via: z,
                    outcome: prove_zero(&leg, &p.rules, budget),
                });
            }
        }
    }
    let edge_words = g
        .edges()
        .iter()
        .flat_map(|t| {
            g.edges().iter().map(move |s| {
                NCPolynomial::word(&[
                    GeneratorId::new(s.source_slot(), t.source_slot()),
                    GeneratorId::new(s.target_slot(), t.target_slot()),
                ])
            })
        })
        .collect();
    (sub, ClosureReport { entries, edge_words })
}

impl<C: Coefficient> Presentation<C> {
    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn max_multiplicity(&self) -> u32 {
        self.n_max
    }

    pub fn rules(&self) -> &RuleSet<C> {
        &self.rules
    }

    pub fn slots(&self) -> &[Slot] {
        self.rules.slots()
    }

    pub fn generators(&self) -> Vec<GeneratorId> {
        self.rules.generators()
    }

    pub fn generator_count(&self) -> usize {
        self.slots().len() * self.slots().len()
    }

    pub fn has_rv(&self) -> bool {
        self.rules.rv().is_some()
    }

    /// The RV relations (or, for a lift, the commutation relations with the adjacency matrix).
    pub fn linear_relations(&self) -> &[NCPolynomial<C>] {
        &self.linear
    }

    pub fn substitutions(&self) -> &[(GeneratorId, Option<GeneratorId>)] {
        &self.substitutions
    }

    pub fn edge_slots(&self) -> &[(Slot, Slot)] {
        &self.edge_slots
    }

    pub fn is_lift(&self) -> bool {
        self.kind == PresentationKind::BanicaLift
    }

    /// Rewrites a polynomial in the `q` generators of the full presentation into
    /// this presentation's generators (identity unless this is a lift).
    pub fn substitute(&self, p: &NCPolynomial<C>) -> NCPolynomial<C> {
        if !self.is_lift() {
            return p.clone();
        }
        let mut out = NCPolynomial::zero();
        'terms: for (w, c) in p.terms() {
            let mut v = Vec::with_capacity(w.len());
            for g in &w.0 {
                match self.lift_of(*g) {
                    Some(u) => v.push(u),
                    None => continue 'terms,
                }
            }
            out.add_term(Word(v), c.clone());
        }
        out
    }

    fn lift_of(&self, g: GeneratorId) -> Option<GeneratorId> {
        (g.row.label == g.col.label).then(|| GeneratorId::new(Slot::new(g.row.v(), 1), Slot::new(g.col.v(), 1)))
    }

    /// First label of vertex `v` in the index set.
    fn representative(&self, v: usize) -> Option<u32> {
        self.slots().iter().find(|s| s.v() == v).map(|s| s.label)
    }

    fn labels_of(&self, v: usize) -> Vec<u32> {
        self.slots().iter().filter(|s| s.v() == v).map(|s| s.label).collect()
    }

    /// `Q^k_i = Σ_r q^{k s₀}_{ir}` with `s₀` the first label of `k`.
    pub fn vertex_entry(&self, k: usize, i: usize) -> NCPolynomial<C> {
        let Some(s0) = self.representative(k) else {
            return NCPolynomial::zero();
        };
        NCPolynomial::sum_of(
            self.labels_of(i)
                .into_iter()
                .map(|r| GeneratorId::new(Slot::new(k, s0), Slot::new(i, r))),
        )
    }

    /// `Σ_r q^{ks}_{ir}` for an arbitrary row label `s`.
    pub fn vertex_entry_at(&self, k: usize, s: u32, i: usize) -> NCPolynomial<C> {
        NCPolynomial::sum_of(
            self.labels_of(i)
                .into_iter()
                .map(|r| GeneratorId::new(Slot::new(k, s), Slot::new(i, r))),
        )
    }

    pub fn vertex_labels(&self, v: usize) -> Vec<u32> {
        self.labels_of(v)
    }
}

pub fn vertex_matrix<C: Coefficient>(p: &Presentation<C>) -> VertexMatrix<C> {
    let nv = p.names.len();
    VertexMatrix {
        entries: (0..nv).map(|k| (0..nv).map(|i| p.vertex_entry(k, i)).collect()).collect(),
    }
}

/// `u^{(k,l)s}_{(i,j)r} = q^{ks}_{ir} q^{ls}_{jr}`, substituted into the lift when `p` is one.
pub fn edge_matrix<C: Coefficient>(p: &Presentation<C>, g: &Multigraph) -> EdgeMatrix<C> {
    let edges = g.edges().to_vec();
    let entries = edges
        .iter()
        .map(|s| {
            edges
                .iter()
                .map(|t| {
                    let w = NCPolynomial::word(&[
                        GeneratorId::new(s.source_slot(), t.source_slot()),
                        GeneratorId::new(s.target_slot(), t.target_slot()),
                    ]);
                    p.substitute(&w)
                })
                .collect()
        })
        .collect();
    EdgeMatrix { edges, entries }
}

/// `Δ(q^x_y) = Σ_z q^x_z ⊗ q^z_y` over the presentation's index set.
pub fn coproduct<C: Coefficient>(gen: GeneratorId, p: &Presentation<C>) -> TensorPolynomial<C> {
    let mut t = TensorPolynomial::zero();
    for &z in p.slots() {
        t.add_term(
            Word(vec![GeneratorId::new(gen.row, z)]),
            Word(vec![GeneratorId::new(z, gen.col)]),
            C::one(),
        );
    }
    t
}
