//! Verification suites: each proposition instantiated as a list of polynomial
//! identities, each attempted by the proof engine.

use rayon::prelude::*;
use serde::Serialize;

use crate::characters::Character;
use crate::matmodel::MatrixModel;
use crate::multigraph::{Multigraph, Slot};
use crate::ncalg::{
    format_poly, prove_zero, replay, GeneratorId, NCPolynomial, ProofBudget, ProofOutcome, ProofStatus, RuleSet,
    TensorPolynomial, Word,
};
use crate::presentation::{banica_lift, build_presentation, coproduct, edge_matrix, vertex_matrix, Presentation};
use crate::{Polynomial, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Status {
    Proved,
    DischargedNumerically,
    Undecided,
}

/// `lhs − rhs`, the expression that must vanish.
#[derive(Clone, Debug)]
pub enum Identity {
    Poly(Polynomial),
    Tensor(TensorPolynomial<Rational>),
}

#[derive(Clone, Debug)]
pub struct Obligation {
    pub id: String,
    pub description: String,
    pub identity: Identity,
    pub outcome: ProofOutcome<Rational>,
    pub tensor_residual: Option<TensorPolynomial<Rational>>,
    pub status: Status,
}

#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub suite: &'static str,
    pub obligations: Vec<Obligation>,
    pub notes: Vec<String>,
    /// The rules the obligations were proved under.
    pub rules: RuleSet<Rational>,
    /// Vertex names, for rendering.
    pub names: Vec<String>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub total: usize,
    pub proved: usize,
    pub discharged: usize,
    pub undecided: usize,
}

/// Characters and models used to discharge identities the engine leaves undecided.
pub struct NumericOracle<'a> {
    pub characters: &'a [Character],
    pub models: &'a [MatrixModel<f64>],
    pub tol: f64,
}

impl Identity {
    pub fn evaluate_character(&self, c: &Character) -> Rational {
        match self {
            Identity::Poly(p) => c.evaluate(p),
            Identity::Tensor(t) => t.evaluate(|g| if c.value(g) { 1.into() } else { 0.into() }, |g| {
                if c.value(g) {
                    1.into()
                } else {
                    0.into()
                }
            }),
        }
    }

    pub fn render(&self, names: &[String]) -> String {
        match self {
            Identity::Poly(p) => format_poly(p, names),
            Identity::Tensor(t) => {
                if t.is_zero() {
                    return "0".into();
                }
                t.terms()
                    .map(|((l, r), c)| {
                        format!(
                            "{}*({})⊗({})",
                            c,
                            format_poly(&NCPolynomial::monomial(l.clone(), Rational::from_integer(1)), names),
                            format_poly(&NCPolynomial::monomial(r.clone(), Rational::from_integer(1)), names)
                        )
                    })
                    .collect::<Vec<_>>()
                    .join(" + ")
            }
        }
    }
}

impl SuiteReport {
    pub fn summary(&self) -> Summary {
        let mut s = Summary {
            total: self.obligations.len(),
            ..Summary::default()
        };
        for o in &self.obligations {
            match o.status {
                Status::Proved => s.proved += 1,
                Status::DischargedNumerically => s.discharged += 1,
                Status::Undecided => s.undecided += 1,
            }
        }
        s
    }

    pub fn all_proved(&self) -> bool {
        self.obligations.iter().all(|o| o.status == Status::Proved)
    }

    pub fn max_depth(&self) -> usize {
        self.obligations.iter().map(|o| o.outcome.depth_used).max().unwrap_or(0)
    }

    /// Every proved obligation replays to zero, and so does every zero lemma it may rely on.
    pub fn replays(&self) -> bool {
        lemmas_replay(&self.rules)
            && self
                .obligations
                .iter()
                .filter(|o| o.status == Status::Proved)
                .all(|o| match &o.identity {
                    Identity::Poly(p) => replay(p, &o.outcome.trace, &self.rules).is_ok_and(|r| r.is_zero()),
                    Identity::Tensor(t) => tensor_reduce(t, &self.rules).is_zero(),
                })
    }

    pub fn find(&self, id: &str) -> Option<&Obligation> {
        self.obligations.iter().find(|o| o.id == id)
    }

    pub fn explain(&self, id: &str) -> Option<String> {
        let o = self.find(id)?;
        let mut out = format!("{}: {}\n", o.id, o.description);
        out.push_str(&format!("identity: {} = 0\n", o.identity.render(&self.names)));
        out.push_str(&format!("status: {:?}, depth {}\n", o.status, o.outcome.depth_used));
        let mut cur = match &o.identity {
            Identity::Poly(p) => Some(p.clone()),
            Identity::Tensor(_) => None,
        };
        for (n, step) in o.outcome.trace.iter().enumerate() {
            let pos = step.position().map(|p| format!(" @{p}")).unwrap_or_default();
            out.push_str(&format!("  {:>3}. {}{}", n + 1, step.name(), pos));
            if let Some(p) = cur.take() {
                match replay(&p, std::slice::from_ref(step), &self.rules) {
                    Ok(next) => {
                        out.push_str(&format!("  => {}", format_poly(&next, &self.names)));
                        cur = Some(next);
                    }
                    Err(e) => out.push_str(&format!("  !! {e}")),
                }
            }
            out.push('\n');
        }
        if o.status != Status::Proved {
            let residual = match &o.tensor_residual {
                Some(t) => Identity::Tensor(t.clone()).render(&self.names),
                None => format_poly(&o.outcome.residual, &self.names),
            };
            out.push_str(&format!("residual: {residual}\n"));
        }
        Some(out)
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        let obligations: Vec<serde_json::Value> = self
            .obligations
            .iter()
            .map(|o| {
                serde_json::json!({
                    "id": o.id,
                    "description": o.description,
                    "status": o.status,
                    "depth": o.outcome.depth_used,
                    "trace_length": o.outcome.trace.len(),
                })
            })
            .collect();
        serde_json::json!({
            "suite": self.suite,
            "summary": self.summary(),
            "notes": self.notes,
            "obligations": obligations,
        })
    }
}

/// Leg-wise reduction of a tensor: a term dies when either leg does.
pub fn tensor_reduce(t: &TensorPolynomial<Rational>, rules: &RuleSet<Rational>) -> TensorPolynomial<Rational> {
    let mut out = TensorPolynomial::zero();
    for ((l, r), c) in t.terms() {
        if let (Some(l), Some(r)) = (rules.reduce_word(&l.0), rules.reduce_word(&r.0)) {
            out.add_term(l, r, *c);
        }
    }
    out
}

/// Each zero lemma's trace replays to zero using only earlier lemmas.
pub fn lemmas_replay(rules: &RuleSet<Rational>) -> bool {
    rules.lemmas().all(|l| {
        let earlier = rules.with_lemmas_before(l.round);
        replay(&NCPolynomial::generator(l.generator), &l.trace, &earlier).is_ok_and(|r| r.is_zero())
    })
}

struct Pending {
    id: String,
    description: String,
    identity: Identity,
}

fn pending(suite: &str, n: usize, description: String, identity: Identity) -> Pending {
    Pending {
        id: format!("{suite}/{n}"),
        description,
        identity,
    }
}

fn settle(
    suite: &'static str,
    items: Vec<Pending>,
    rules: RuleSet<Rational>,
    names: &[String],
    budget: ProofBudget,
    notes: Vec<String>,
) -> SuiteReport {
    let obligations = items
        .into_par_iter()
        .map(|it| {
            let (outcome, tensor_residual) = match &it.identity {
                Identity::Poly(p) => (prove_zero(p, &rules, budget), None),
                Identity::Tensor(t) => {
                    let r = tensor_reduce(t, &rules);
                    let status = if r.is_zero() {
                        ProofStatus::Proved
                    } else {
                        ProofStatus::Undecided
                    };
                    let outcome = ProofOutcome {
                        status,
                        trace: vec![crate::ncalg::Step::Reduce],
                        depth_used: 0,
                        residual: NCPolynomial::zero(),
                        nodes: 1,
                    };
                    (outcome, (!r.is_zero()).then_some(r))
                }
            };
            let status = if outcome.is_proved() {
                Status::Proved
            } else {
                Status::Undecided
            };
            Obligation {
                id: it.id,
                description: it.description,
                identity: it.identity,
                outcome,
                tensor_residual,
                status,
            }
        })
        .collect();
    SuiteReport {
        suite,
        obligations,
        notes,
        rules,
        names: names.to_vec(),
    }
}

fn one() -> Polynomial {
    NCPolynomial::one()
}

fn delta(a: bool, p: &Polynomial) -> Polynomial {
    if a {
        p.clone()
    } else {
        NCPolynomial::zero()
    }
}

const UNIFORM_NOTE: &str = "uniform means all nonzero multiplicities are equal";

pub fn verify_vertex_magic(p: &Presentation, budget: ProofBudget) -> SuiteReport {
    const S: &str = "vertex_magic";
    let names = p.names();
    let vm = vertex_matrix(p);
    let nv = vm.size();
    let q = |k: usize, i: usize| format!("Q[{}|{}]", names[k], names[i]);
    let mut items = Vec::new();
    let mut push = |d: String, id: Polynomial| {
        let n = items.len();
        items.push(pending(S, n, d, Identity::Poly(id)));
    };
    for k in 0..nv {
        for i in 0..nv {
            push(format!("{}* = {}", q(k, i), q(k, i)), vm.entry(k, i).adjoint() - vm.entry(k, i).clone());
        }
    }
    for k in 0..nv {
        for i in 0..nv {
            for i2 in 0..nv {
                let lhs = vm.entry(k, i).multiply(vm.entry(k, i2));
                push(
                    format!("{}·{} = {}", q(k, i), q(k, i2), if i == i2 { q(k, i) } else { "0".into() }),
                    lhs - delta(i == i2, vm.entry(k, i)),
                );
            }
        }
    }
    for i in 0..nv {
        for k in 0..nv {
            for k2 in 0..nv {
                let lhs = vm.entry(k, i).multiply(vm.entry(k2, i));
                push(
                    format!("{}·{} = {}", q(k, i), q(k2, i), if k == k2 { q(k, i) } else { "0".into() }),
                    lhs - delta(k == k2, vm.entry(k, i)),
                );
            }
        }
    }
    for k in 0..nv {
        let sum = (0..nv).fold(NCPolynomial::zero(), |acc, i| acc + vm.entry(k, i).clone());
        push(format!("Σ_i Q[{}|i] = 1", names[k]), sum - one());
    }
    for i in 0..nv {
        let sum = (0..nv).fold(NCPolynomial::zero(), |acc, k| acc + vm.entry(k, i).clone());
        push(format!("Σ_k Q[k|{}] = 1", names[i]), sum - one());
    }
    for k in 0..nv {
        let labels = p.vertex_labels(k);
        for &s in labels.iter().skip(1) {
            for i in 0..nv {
                push(
                    format!("Σ_r q[{},{}|{},r] = {}", names[k], s, names[i], q(k, i)),
                    p.vertex_entry_at(k, s, i) - vm.entry(k, i).clone(),
                );
            }
        }
    }
    let mut notes = vec![UNIFORM_NOTE.to_string()];
    if !p.has_rv() {
        notes.push("s-independence relations are not assumed; those obligations are attempted from the magic and edge relations alone".into());
    }
    settle(S, items, p.rules().clone(), names, budget, notes)
}

fn u_name(g: &Multigraph, s: usize, t: usize) -> String {
    let e = g.edges();
    format!("u[{}|{}]", g.edge_name(&e[s]), g.edge_name(&e[t]))
}

pub fn verify_bimodule(p: &Presentation, g: &Multigraph, budget: ProofBudget) -> SuiteReport {
    const S: &str = "bimodule";
    let names = p.names();
    let vm = vertex_matrix(p);
    let em = edge_matrix(p, g);
    let edges = g.edges();
    let nv = g.vertex_count();
    let mut items = Vec::new();
    for (s, es) in edges.iter().enumerate() {
        for (t, et) in edges.iter().enumerate() {
            let u = em.entry(s, t);
            for k in 0..nv {
                let lhs = vm.entry(es.src, k).multiply(u);
                let d = format!(
                    "Q[{}|{}]·{} = {}",
                    names[es.src],
                    names[k],
                    u_name(g, s, t),
                    if k == et.src { "u" } else { "0" }
                );
                items.push(pending(S, items.len(), d, Identity::Poly(lhs - delta(k == et.src, u))));
            }
            for l in 0..nv {
                let lhs = u.multiply(vm.entry(es.dst, l));
                let d = format!(
                    "{}·Q[{}|{}] = {}",
                    u_name(g, s, t),
                    names[es.dst],
                    names[l],
                    if l == et.dst { "u" } else { "0" }
                );
                items.push(pending(S, items.len(), d, Identity::Poly(lhs - delta(l == et.dst, u))));
            }
        }
    }
    settle(S, items, p.rules().clone(), names, budget, Vec::new())
}

fn slot_word(a: Slot, b: Slot, c: Slot, d: Slot) -> Word {
    Word(vec![GeneratorId::new(a, b), GeneratorId::new(c, d)])
}

pub fn verify_coproduct_identity(p: &Presentation, g: &Multigraph) -> SuiteReport {
    const S: &str = "coproduct";
    let names = p.names();
    let edges = g.edges();
    let mut items = Vec::new();
    for (s, es) in edges.iter().enumerate() {
        for (t, et) in edges.iter().enumerate() {
            let a = coproduct(GeneratorId::new(es.source_slot(), et.source_slot()), p);
            let b = coproduct(GeneratorId::new(es.target_slot(), et.target_slot()), p);
            let mut id = a.multiply(&b);
            for e in edges {
                id.add_term(
                    slot_word(es.source_slot(), e.source_slot(), es.target_slot(), e.target_slot()),
                    slot_word(e.source_slot(), et.source_slot(), e.target_slot(), et.target_slot()),
                    Rational::from_integer(-1),
                );
            }
            let d = format!("Δ({}) = Σ u⊗u", u_name(g, s, t));
            items.push(pending(S, items.len(), d, Identity::Tensor(id)));
        }
    }
    settle(S, items, p.rules().clone(), names, ProofBudget::default(), Vec::new())
}

pub fn verify_restricted_orthogonality(p: &Presentation, g: &Multigraph, budget: ProofBudget) -> SuiteReport {
    const S: &str = "restricted_orthogonality";
    let names = p.names();
    let em = edge_matrix(p, g);
    let edges = g.edges();
    let mut items = Vec::new();
    for (s1, e1) in edges.iter().enumerate() {
        for (s2, e2) in edges.iter().enumerate() {
            if (e1.src, e1.dst) != (e2.src, e2.dst) || e1.label == e2.label {
                continue;
            }
            for t in 0..edges.len() {
                let (a, b) = (em.entry(s1, t), em.entry(s2, t));
                let d1 = format!("{}·{}* = 0", u_name(g, s1, t), u_name(g, s2, t));
                items.push(pending(S, items.len(), d1, Identity::Poly(a.multiply(&b.adjoint()))));
                let d2 = format!("{}*·{} = 0", u_name(g, s1, t), u_name(g, s2, t));
                items.push(pending(S, items.len(), d2, Identity::Poly(a.adjoint().multiply(b))));
            }
        }
    }
    settle(S, items, p.rules().clone(), names, budget, Vec::new())
}

pub fn verify_xi_fixed(p: &Presentation, g: &Multigraph, budget: ProofBudget) -> SuiteReport {
    const S: &str = "xi_fixed";
    let names = p.names();
    let em = edge_matrix(p, g);
    let mut items = Vec::new();
    for t in 0..em.size() {
        let sum = (0..em.size()).fold(NCPolynomial::zero(), |acc, s| acc + em.entry(s, t).clone());
        let d = format!("Σ_σ u[σ|{}] = 1", g.edge_name(&em.edges[t]));
        items.push(pending(S, items.len(), d, Identity::Poly(sum - one())));
    }
    let notes = vec!["the fixed vector is read on the edge space: every column of the edge matrix sums to 1".into()];
    settle(S, items, p.rules().clone(), names, budget, notes)
}

/// Bi-unitarity of the edge matrix and its conjugate; identities left
/// undecided are checked against the oracle.
pub fn verify_biunitarity(
    p: &Presentation,
    g: &Multigraph,
    budget: ProofBudget,
    oracle: Option<&NumericOracle>,
) -> SuiteReport {
    const S: &str = "biunitarity";
    let names = p.names();
    let em = edge_matrix(p, g);
    let n = em.size();
    let e = |x: usize| g.edge_name(&em.edges[x]);
    let mut items = Vec::new();
    for a in 0..n {
        for b in 0..n {
            let d = |x: &Polynomial| x.clone() - delta(a == b, &one());
            let mut s1 = NCPolynomial::zero();
            let mut s2 = NCPolynomial::zero();
            let mut s3 = NCPolynomial::zero();
            let mut s4 = NCPolynomial::zero();
            for k in 0..n {
                s1 = s1 + em.entry(a, k).multiply(&em.entry(b, k).adjoint());
                s2 = s2 + em.entry(k, a).adjoint().multiply(em.entry(k, b));
                s3 = s3 + em.entry(a, k).adjoint().multiply(em.entry(b, k));
                s4 = s4 + em.entry(k, a).multiply(&em.entry(k, b).adjoint());
            }
            let (ea, eb) = (e(a), e(b));
            items.push(pending(S, items.len(), format!("Σ_τ u[{ea}|τ]u[{eb}|τ]* = δ"), Identity::Poly(d(&s1))));
            items.push(pending(S, items.len(), format!("Σ_σ u[σ|{ea}]*u[σ|{eb}] = δ"), Identity::Poly(d(&s2))));
            items.push(pending(S, items.len(), format!("Σ_τ u[{ea}|τ]*u[{eb}|τ] = δ"), Identity::Poly(d(&s3))));
            items.push(pending(S, items.len(), format!("Σ_σ u[σ|{ea}]u[σ|{eb}]* = δ"), Identity::Poly(d(&s4))));
        }
    }
    let mut report = settle(S, items, p.rules().clone(), names, budget, Vec::new());
    if let Some(o) = oracle {
        discharge(&mut report, o);
    }
    report
}

/// Upgrades undecided obligations that vanish exactly in every character and
/// within tolerance in every model.
pub fn discharge(report: &mut SuiteReport, oracle: &NumericOracle) {
    if oracle.characters.is_empty() {
        return;
    }
    report.obligations.par_iter_mut().for_each(|o| {
        if o.status != Status::Undecided {
            return;
        }
        let Identity::Poly(p) = &o.identity else { return };
        let exact = oracle.characters.iter().all(|c| c.evaluate(p) == Rational::from_integer(0));
        let numeric = oracle
            .models
            .iter()
            .all(|m| m.evaluate(p).frobenius() <= oracle.tol);
        if exact && numeric {
            o.status = Status::DischargedNumerically;
        }
    });
}

pub fn verify_permissible_preservation(p: &Presentation, g: &Multigraph, budget: ProofBudget) -> SuiteReport {
    const S: &str = "permissible_preservation";
    let names = p.names();
    let base = p.rules().with_lemmas_before(0);
    let mut items = Vec::new();
    if !g.is_uniform() {
        let perm = g.permissible_pairs();
        let (ok, bad): (Vec<Slot>, Vec<Slot>) = p.slots().iter().partition(|s| perm.contains(s));
        for &x in &bad {
            for &y in &ok {
                let gen = GeneratorId::new(x, y);
                let d = format!(
                    "q[{},{}|{},{}] = 0",
                    names[x.v()],
                    x.label,
                    names[y.v()],
                    y.label
                );
                items.push(pending(S, items.len(), d, Identity::Poly(NCPolynomial::generator(gen))));
            }
        }
    }
    settle(S, items, base, names, budget, vec![UNIFORM_NOTE.to_string()])
}

/// Images of the relations of the full presentation under `q^{ks}_{ir} ↦ δ_{sr}·u^k_i`.
pub fn verify_banica_lift_membership(g: &Multigraph, budget: ProofBudget) -> SuiteReport {
    const S: &str = "banica_lift_membership";
    let q: Presentation = build_presentation(g, true);
    let lift: Presentation = banica_lift(g);
    let names = q.names();
    let fmt = |x: GeneratorId| crate::ncalg::format_generator(x, names);
    let mut items = Vec::new();
    for (a, b) in q.rules().vanishing_pairs() {
        let img = lift.substitute(&NCPolynomial::word(&[a, b]));
        let d = if a == b {
            format!("image of {} = 0", fmt(a))
        } else {
            format!("image of {}·{} = 0", fmt(a), fmt(b))
        };
        items.push(pending(S, items.len(), d, Identity::Poly(img)));
    }
    for &s in q.slots() {
        for (tag, fam) in [("row", crate::ncalg::Family::Row(s)), ("column", crate::ncalg::Family::Col(s))] {
            let sum = NCPolynomial::sum_of(q.rules().family_members(fam)) - one();
            let d = format!("image of {tag} sum ({},{}) = 1", names[s.v()], s.label);
            items.push(pending(S, items.len(), d, Identity::Poly(lift.substitute(&sum))));
        }
    }
    for rel in q.linear_relations() {
        let d = format!("image of {} = 0", format_poly(rel, names));
        items.push(pending(S, items.len(), d, Identity::Poly(lift.substitute(rel))));
    }
    settle(S, items, lift.rules().clone(), names, budget, Vec::new())
}

/// All suites on the full presentation, in a fixed order.
pub fn run_all(g: &Multigraph, include_rv: bool, budget: ProofBudget, oracle: Option<&NumericOracle>) -> Vec<SuiteReport> {
    let p: Presentation = build_presentation(g, include_rv);
    vec![
        verify_vertex_magic(&p, budget),
        verify_bimodule(&p, g, budget),
        verify_coproduct_identity(&p, g),
        verify_restricted_orthogonality(&p, g, budget),
        verify_xi_fixed(&p, g, budget),
        verify_biunitarity(&p, g, budget, oracle),
        verify_permissible_preservation(&p, g, budget),
        verify_banica_lift_membership(g, budget),
    ]
}
