//! Bounded proof search for `p = 0`.
//!
//! Free moves are applied greedily after every change (the *closure*):
//! monomial reduction, collapse of a complete row/column family back to the
//! unit, and the two consequences of the s-independence relations (relabeling
//! an `r`-group to another row label, and collapsing a full vertex column).
//! The only budgeted move is a unit insertion, searched by iterative deepening.

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;
use thiserror::Error;

use super::{GeneratorId, NCPolynomial, RuleSet, Word};
use crate::multigraph::Slot;
use crate::scalar::Coefficient;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Family {
    /// `Σ_y q^x_y`, summing to 1.
    Row(Slot),
    /// `Σ_x q^x_y`, summing to 1.
    Col(Slot),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Side {
    /// Family chosen from the generator just left of the boundary (edge `(i,j)r`, insert column `(j,r)`).
    LeftNeighbor,
    /// Family chosen from the generator just right of the boundary (edge `(j,i)r`, insert column `(j,r)`).
    RightNeighbor,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Insertion {
    /// `p ↦ (Σ family) · p`
    Left(Family),
    /// `p ↦ p · (Σ family)`
    Right(Family),
    /// In every term long enough, insert at `boundary` the edge-partner column family
    /// of the neighbouring generator; terms without a partner are unchanged.
    Partner { boundary: usize, side: Side },
}

#[derive(Clone, Debug, PartialEq)]
pub enum Step<C> {
    Reduce,
    Insert(Insertion),
    /// `c·prefix·(Σ family)·suffix ↦ c·prefix·suffix`
    Collapse {
        prefix: Word,
        suffix: Word,
        family: Family,
        coef: C,
    },
    /// `c·prefix·(Σ_k Σ_r q^{k s_k}_{ir})·suffix ↦ c·prefix·suffix`, one row slot per vertex.
    RvCollapse {
        prefix: Word,
        suffix: Word,
        col_vertex: u32,
        rows: Vec<Slot>,
        coef: C,
    },
    /// `c·prefix·(Σ_r q^{ks}_{ir})·suffix ↦ c·prefix·(Σ_r q^{ks'}_{ir})·suffix`
    RvRelabel {
        prefix: Word,
        suffix: Word,
        row: Slot,
        to: u32,
        col_vertex: u32,
        coef: C,
    },
}

impl<C: Coefficient> Step<C> {
    pub fn name(&self) -> &'static str {
        match self {
            Step::Reduce => "reduce",
            Step::Insert(_) => "unit-insertion",
            Step::Collapse { .. } => "sum-collapse",
            Step::RvCollapse { .. } => "rv-collapse",
            Step::RvRelabel { .. } => "rv-relabel",
        }
    }

    /// Word position the step acts at, when it has one.
    pub fn position(&self) -> Option<usize> {
        match self {
            Step::Reduce => None,
            Step::Insert(Insertion::Partner { boundary, .. }) => Some(*boundary),
            Step::Insert(Insertion::Left(_)) => Some(0),
            Step::Insert(Insertion::Right(_)) => None,
            Step::Collapse { prefix, .. } | Step::RvCollapse { prefix, .. } | Step::RvRelabel { prefix, .. } => {
                Some(prefix.len())
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ProofStatus {
    Proved,
    Undecided,
}

#[derive(Clone, Debug)]
pub struct ProofOutcome<C> {
    pub status: ProofStatus,
    pub trace: Vec<Step<C>>,
    pub depth_used: usize,
    /// Best reduction of the input (zero when proved).
    pub residual: NCPolynomial<C>,
    pub nodes: usize,
}

impl<C> ProofOutcome<C> {
    pub fn is_proved(&self) -> bool {
        self.status == ProofStatus::Proved
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ProofBudget {
    pub max_insertions: usize,
    pub word_cap: usize,
    pub node_cap: usize,
}

impl Default for ProofBudget {
    fn default() -> Self {
        ProofBudget {
            max_insertions: 3,
            word_cap: 12,
            node_cap: 400,
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ReplayError {
    #[error("step {0}: s-independence relations are not part of the rule set")]
    NoRv(usize),
    #[error("step {0}: malformed step ({1})")]
    Malformed(usize, String),
}

fn group_terms<C: Coefficient>(
    rules: &RuleSet<C>,
    words: impl IntoIterator<Item = Word>,
    coef: &C,
    into: &mut BTreeMap<Word, C>,
) {
    for w in words {
        if let Some(r) = rules.reduce_word(&w.0) {
            let e = into.entry(r).or_insert_with(C::zero);
            *e = e.clone() + coef.clone();
        }
    }
    into.retain(|_, c| !c.is_zero());
}

fn matches<C: Coefficient>(p: &NCPolynomial<C>, req: &BTreeMap<Word, C>) -> bool {
    !req.is_empty() && req.iter().all(|(w, c)| p.coefficient(w) == Some(c))
}

fn apply_delta<C: Coefficient>(
    rules: &RuleSet<C>,
    p: &NCPolynomial<C>,
    minus: &BTreeMap<Word, C>,
    plus: impl IntoIterator<Item = Word>,
    coef: &C,
) -> NCPolynomial<C> {
    let mut terms = p.terms_map().clone();
    let mut out = NCPolynomial::zero();
    for (w, c) in minus {
        if let Some(e) = terms.get_mut(w) {
            *e = e.clone() - c.clone();
        } else {
            out.add_term(w.clone(), -c.clone());
        }
    }
    for (w, c) in terms {
        out.add_term(w, c);
    }
    for w in plus {
        if let Some(r) = rules.reduce_word(&w.0) {
            out.add_term(r, coef.clone());
        }
    }
    out
}

fn rv_rows_members<'a>(
    prefix: &'a [GeneratorId],
    suffix: &'a [GeneratorId],
    row: Slot,
    col_vertex: u32,
    labels: &'a [u32],
) -> impl Iterator<Item = Word> + 'a {
    labels.iter().map(move |&r| {
        Word::splice(
            prefix,
            GeneratorId::new(row, Slot {
                vertex: col_vertex,
                label: r,
            }),
            suffix,
        )
    })
}

/// Reduced member words of a group with coefficient `coef`, or `None` as soon as
/// one of them is missing from `p`.
fn present_group<C: Coefficient>(
    p: &NCPolynomial<C>,
    rules: &RuleSet<C>,
    words: impl IntoIterator<Item = Word>,
    coef: &C,
    into: &mut BTreeMap<Word, C>,
) -> Option<()> {
    for w in words {
        if let Some(r) = rules.reduce_word(&w.0) {
            p.coefficient(&r)?;
            let e = into.entry(r).or_insert_with(C::zero);
            *e = e.clone() + coef.clone();
        }
    }
    into.retain(|_, c| !c.is_zero());
    Some(())
}

type Found<C> = Option<(Step<C>, NCPolynomial<C>)>;

fn collapse_at<C: Coefficient>(p: &NCPolynomial<C>, rules: &RuleSet<C>, w: &Word, c: &C, pos: usize) -> Found<C> {
    let g = w.0[pos];
    let (prefix, suffix) = (&w.0[..pos], &w.0[pos + 1..]);
    for family in [Family::Row(g.row), Family::Col(g.col)] {
        let mut req = BTreeMap::new();
        let members = rules.family_members(family).map(|m| Word::splice(prefix, m, suffix));
        if present_group(p, rules, members, c, &mut req).is_some() && matches(p, &req) {
            let plus = Word(prefix.iter().chain(suffix).copied().collect());
            let next = apply_delta(rules, p, &req, [plus], c);
            let step = Step::Collapse {
                prefix: Word(prefix.to_vec()),
                suffix: Word(suffix.to_vec()),
                family,
                coef: c.clone(),
            };
            return Some((step, next));
        }
    }
    None
}

fn rv_collapse_at<C: Coefficient>(p: &NCPolynomial<C>, rules: &RuleSet<C>, w: &Word, c: &C, pos: usize) -> Found<C> {
    let rv = rules.rv().filter(|rv| rv.is_full())?;
    let g = w.0[pos];
    let (prefix, suffix) = (&w.0[..pos], &w.0[pos + 1..]);
    let col_labels = &rv.labels[g.col.v()];
    let mut req = BTreeMap::new();
    let mut rows = Vec::with_capacity(rv.labels.len());
    for k in 0..rv.labels.len() {
        let candidates: &[u32] = if k == g.row.v() {
            std::slice::from_ref(&g.row.label)
        } else {
            &rv.labels[k]
        };
        let mut chosen = None;
        for &s in candidates {
            let row = Slot::new(k, s);
            let mut trial = req.clone();
            let members = rv_rows_members(prefix, suffix, row, g.col.vertex, col_labels);
            if present_group(p, rules, members, c, &mut trial).is_some()
                && trial.iter().all(|(w, tc)| p.coefficient(w) == Some(tc))
            {
                chosen = Some((row, trial));
                break;
            }
        }
        let (row, trial) = chosen?;
        rows.push(row);
        req = trial;
    }
    if !matches(p, &req) {
        return None;
    }
    let plus = Word(prefix.iter().chain(suffix).copied().collect());
    let next = apply_delta(rules, p, &req, [plus], c);
    let step = Step::RvCollapse {
        prefix: Word(prefix.to_vec()),
        suffix: Word(suffix.to_vec()),
        col_vertex: g.col.vertex,
        rows,
        coef: c.clone(),
    };
    Some((step, next))
}

/// Term count after replacing `req` by `plus` (all with coefficient `c`), computed locally.
fn count_after<C: Coefficient>(
    p: &NCPolynomial<C>,
    req: &BTreeMap<Word, C>,
    plus: &BTreeMap<Word, C>,
) -> usize {
    let mut count = p.len() - req.len();
    for (w, c) in plus {
        let base = match (p.coefficient(w), req.get(w)) {
            (Some(pc), Some(rc)) => pc.clone() - rc.clone(),
            (Some(pc), None) => pc.clone(),
            (None, _) => C::zero(),
        };
        let before = !base.is_zero();
        let after = !(base + c.clone()).is_zero();
        match (before, after) {
            (false, true) => count += 1,
            (true, false) => count -= 1,
            _ => {}
        }
    }
    count
}

fn relabel_at<C: Coefficient>(p: &NCPolynomial<C>, rules: &RuleSet<C>, w: &Word, c: &C, pos: usize) -> Found<C> {
    let rv = rules.rv()?;
    let g = w.0[pos];
    let (prefix, suffix) = (&w.0[..pos], &w.0[pos + 1..]);
    let col_labels = &rv.labels[g.col.v()];
    let row_labels = &rv.labels[g.row.v()];
    if !col_labels.contains(&g.col.label) || !row_labels.contains(&g.row.label) {
        return None;
    }
    let mut req = BTreeMap::new();
    let members = rv_rows_members(prefix, suffix, g.row, g.col.vertex, col_labels);
    present_group(p, rules, members, c, &mut req)?;
    if !matches(p, &req) {
        return None;
    }
    let mut best: Option<(usize, u32, BTreeMap<Word, C>)> = None;
    for &to in row_labels {
        if to == g.row.label {
            continue;
        }
        let mut plus = BTreeMap::new();
        group_terms(
            rules,
            rv_rows_members(prefix, suffix, Slot::new(g.row.v(), to), g.col.vertex, col_labels),
            c,
            &mut plus,
        );
        let n = count_after(p, &req, &plus);
        if n < p.len() && best.as_ref().is_none_or(|b| n < b.0) {
            best = Some((n, to, plus));
        }
    }
    let (_, to, plus) = best?;
    let mut next = apply_delta(rules, p, &req, [], c);
    for (pw, pc) in plus {
        next.add_term(pw, pc);
    }
    let step = Step::RvRelabel {
        prefix: Word(prefix.to_vec()),
        suffix: Word(suffix.to_vec()),
        row: g.row,
        to,
        col_vertex: g.col.vertex,
        coef: c.clone(),
    };
    Some((step, next))
}

type Anchored<C> = fn(&NCPolynomial<C>, &RuleSet<C>, &Word, &C, usize) -> Found<C>;

/// One pass over a snapshot of the terms, applying `mv` wherever it fits.
fn sweep<C: Coefficient>(cur: &mut NCPolynomial<C>, steps: &mut Vec<Step<C>>, rules: &RuleSet<C>, mv: Anchored<C>) -> bool {
    let words: Vec<Word> = cur.terms().map(|(w, _)| w.clone()).collect();
    let mut changed = false;
    for w in words {
        let Some(c) = cur.coefficient(&w).cloned() else { continue };
        for pos in 0..w.len() {
            if let Some((step, next)) = mv(cur, rules, &w, &c, pos) {
                steps.push(step);
                *cur = next;
                changed = true;
                break;
            }
        }
        if cur.is_zero() {
            break;
        }
    }
    changed
}

/// Reduces and then applies free moves until none applies: relabels that
/// shrink the term count first, then family collapses, then vertex collapses.
pub fn closure<C: Coefficient>(p: &NCPolynomial<C>, rules: &RuleSet<C>) -> (NCPolynomial<C>, Vec<Step<C>>) {
    closure_ordered(p, rules, false)
}

/// The same moves with family collapses ahead of relabels.
pub fn closure_collapse_first<C: Coefficient>(p: &NCPolynomial<C>, rules: &RuleSet<C>) -> (NCPolynomial<C>, Vec<Step<C>>) {
    closure_ordered(p, rules, true)
}

fn closure_ordered<C: Coefficient>(
    p: &NCPolynomial<C>,
    rules: &RuleSet<C>,
    collapse_first: bool,
) -> (NCPolynomial<C>, Vec<Step<C>>) {
    let mut cur = rules.reduce(p);
    let mut steps = vec![Step::Reduce];
    loop {
        if collapse_first && sweep(&mut cur, &mut steps, rules, collapse_at) {
            continue;
        }
        while sweep(&mut cur, &mut steps, rules, relabel_at) {}
        if sweep(&mut cur, &mut steps, rules, collapse_at) {
            continue;
        }
        if sweep(&mut cur, &mut steps, rules, rv_collapse_at) {
            continue;
        }
        break;
    }
    (cur, steps)
}

fn family_sum<C: Coefficient>(rules: &RuleSet<C>, f: Family) -> NCPolynomial<C> {
    NCPolynomial::sum_of(rules.family_members(f))
}

/// Applies an insertion without reducing.
pub fn apply_insertion<C: Coefficient>(p: &NCPolynomial<C>, ins: Insertion, rules: &RuleSet<C>) -> NCPolynomial<C> {
    match ins {
        Insertion::Left(f) => family_sum(rules, f).multiply(p),
        Insertion::Right(f) => p.multiply(&family_sum(rules, f)),
        Insertion::Partner { boundary, side } => {
            let mut out = NCPolynomial::zero();
            for (w, c) in p.terms() {
                let partner = match side {
                    Side::LeftNeighbor if boundary >= 1 && boundary <= w.len() => {
                        rules.right_partner(w.0[boundary - 1].col)
                    }
                    Side::RightNeighbor if boundary < w.len() => rules.left_partner(w.0[boundary].col),
                    _ => None,
                };
                match partner {
                    Some(ps) => {
                        let (a, b) = w.0.split_at(boundary);
                        for m in rules.family_members(Family::Col(ps)) {
                            out.add_term(Word::splice(a, m, b), c.clone());
                        }
                    }
                    None => out.add_term(w.clone(), c.clone()),
                }
            }
            out
        }
    }
}

/// Partner insertions at every boundary where at least one term has a partner.
pub fn candidate_moves<C: Coefficient>(p: &NCPolynomial<C>, rules: &RuleSet<C>) -> Vec<Insertion> {
    let mut moves = Vec::new();
    let maxlen = p.max_word_len();
    for boundary in 0..=maxlen {
        for side in [Side::LeftNeighbor, Side::RightNeighbor] {
            let applies = p.terms().any(|(w, _)| match side {
                Side::LeftNeighbor => {
                    boundary >= 1 && boundary <= w.len() && rules.right_partner(w.0[boundary - 1].col).is_some()
                }
                Side::RightNeighbor => boundary < w.len() && rules.left_partner(w.0[boundary].col).is_some(),
            });
            if applies {
                moves.push(Insertion::Partner { boundary, side });
            }
        }
    }
    moves
}

struct Search<'a, C> {
    rules: &'a RuleSet<C>,
    budget: ProofBudget,
    nodes: usize,
    memo: HashMap<String, usize>,
}

impl<C: Coefficient> Search<'_, C> {
    fn dfs(&mut self, cur: &NCPolynomial<C>, remaining: usize) -> Option<Vec<Step<C>>> {
        if self.nodes >= self.budget.node_cap {
            return None;
        }
        self.nodes += 1;
        let key = cur.to_string();
        if self.memo.get(&key).is_some_and(|&r| r >= remaining) {
            return None;
        }
        self.memo.insert(key, remaining);
        for mv in candidate_moves(cur, self.rules) {
            let raw = apply_insertion(cur, mv, self.rules);
            if raw.max_word_len() > self.budget.word_cap {
                continue;
            }
            let (next, steps) = closure(&raw, self.rules);
            if next == *cur {
                continue;
            }
            if next.is_zero() {
                let mut t = vec![Step::Insert(mv)];
                t.extend(steps);
                return Some(t);
            }
            if remaining > 1 {
                if let Some(tail) = self.dfs(&next, remaining - 1) {
                    let mut t = vec![Step::Insert(mv)];
                    t.extend(steps);
                    t.extend(tail);
                    return Some(t);
                }
            }
            if self.nodes >= self.budget.node_cap {
                return None;
            }
        }
        None
    }
}

/// Iterative-deepening search for a move sequence taking `p` to zero.
///
/// Moves are tried in a fixed canonical order and the first proof found is
/// returned, so outcomes are deterministic.
pub fn prove_zero<C: Coefficient>(p: &NCPolynomial<C>, rules: &RuleSet<C>, budget: ProofBudget) -> ProofOutcome<C> {
    let (start, steps0) = closure(p, rules);
    let (alt, alt_steps) = if start.is_zero() {
        (start.clone(), steps0.clone())
    } else {
        closure_collapse_first(p, rules)
    };
    if alt.is_zero() {
        return ProofOutcome {
            status: ProofStatus::Proved,
            trace: alt_steps,
            depth_used: 0,
            residual: alt,
            nodes: 1,
        };
    }
    let mut search = Search {
        rules,
        budget,
        nodes: 0,
        memo: HashMap::new(),
    };
    for depth in 1..=budget.max_insertions {
        search.memo.clear();
        if let Some(tail) = search.dfs(&start, depth) {
            let mut trace = steps0;
            trace.extend(tail);
            return ProofOutcome {
                status: ProofStatus::Proved,
                trace,
                depth_used: depth,
                residual: NCPolynomial::zero(),
                nodes: search.nodes,
            };
        }
        if search.nodes >= budget.node_cap {
            break;
        }
    }
    ProofOutcome {
        status: ProofStatus::Undecided,
        trace: steps0,
        depth_used: 0,
        residual: start,
        nodes: search.nodes,
    }
}

pub fn prove_equal<C: Coefficient>(
    p: &NCPolynomial<C>,
    q: &NCPolynomial<C>,
    rules: &RuleSet<C>,
    budget: ProofBudget,
) -> ProofOutcome<C> {
    prove_zero(&(p.clone() - q.clone()), rules, budget)
}

/// Re-executes a trace from `p`; a sound proof replays to the zero polynomial.
pub fn replay<C: Coefficient>(
    p: &NCPolynomial<C>,
    trace: &[Step<C>],
    rules: &RuleSet<C>,
) -> Result<NCPolynomial<C>, ReplayError> {
    let mut cur = p.clone();
    for (n, step) in trace.iter().enumerate() {
        cur = match step {
            Step::Reduce => rules.reduce(&cur),
            Step::Insert(ins) => apply_insertion(&cur, *ins, rules),
            Step::Collapse {
                prefix,
                suffix,
                family,
                coef,
            } => {
                let members: Vec<Word> = rules
                    .family_members(*family)
                    .map(|m| Word::splice(&prefix.0, m, &suffix.0))
                    .collect();
                let mut minus = BTreeMap::new();
                group_terms(rules, members, coef, &mut minus);
                apply_delta(rules, &cur, &minus, [prefix.concat(suffix)], coef)
            }
            Step::RvCollapse {
                prefix,
                suffix,
                col_vertex,
                rows,
                coef,
            } => {
                let rv = rules.rv().ok_or(ReplayError::NoRv(n))?;
                if !rv.is_full() {
                    return Err(ReplayError::Malformed(n, "rv-collapse needs the full index grid".into()));
                }
                let mut verts: Vec<u32> = rows.iter().map(|s| s.vertex).collect();
                verts.sort();
                if verts != (0..rv.labels.len() as u32).collect::<Vec<_>>()
                    || rows.iter().any(|s| !rv.labels[s.v()].contains(&s.label))
                {
                    return Err(ReplayError::Malformed(n, "rows must pick one label per vertex".into()));
                }
                let col_labels = &rv.labels[*col_vertex as usize];
                let mut minus = BTreeMap::new();
                for &row in rows {
                    group_terms(
                        rules,
                        rv_rows_members(&prefix.0, &suffix.0, row, *col_vertex, col_labels),
                        coef,
                        &mut minus,
                    );
                }
                apply_delta(rules, &cur, &minus, [prefix.concat(suffix)], coef)
            }
            Step::RvRelabel {
                prefix,
                suffix,
                row,
                to,
                col_vertex,
                coef,
            } => {
                let rv = rules.rv().ok_or(ReplayError::NoRv(n))?;
                let row_labels = &rv.labels[row.v()];
                if !row_labels.contains(&row.label) || !row_labels.contains(to) {
                    return Err(ReplayError::Malformed(n, "relabel outside the label set".into()));
                }
                let col_labels = &rv.labels[*col_vertex as usize];
                let mut minus = BTreeMap::new();
                group_terms(
                    rules,
                    rv_rows_members(&prefix.0, &suffix.0, *row, *col_vertex, col_labels),
                    coef,
                    &mut minus,
                );
                let plus: Vec<Word> = rv_rows_members(
                    &prefix.0,
                    &suffix.0,
                    Slot::new(row.v(), *to),
                    *col_vertex,
                    col_labels,
                )
                .collect();
                apply_delta(rules, &cur, &minus, plus, coef)
            }
        };
    }
    Ok(cur)
}
