mod common;

use common::*;
use qsym::characters::{enumerate_characters, Character};
use qsym::multigraph::Multigraph;
use qsym::presentation::{
    banica_lift, build_presentation, coproduct, edge_matrix, permissible_subpresentation, vertex_matrix, PresentationKind,
    Scope,
};
use qsym::ncalg::ProofBudget;
use qsym::{GeneratorId, Polynomial, Presentation, Rational, Slot};

fn pres(g: &Multigraph) -> Presentation {
    build_presentation(g, true)
}

#[test]
fn generator_counts() {
    assert_eq!(pres(&loop_graph()).generator_count(), 1);
    assert_eq!(pres(&single_edge()).generator_count(), 4);
    // (|V|·N)² generators: a 4×4 magic matrix for two vertices with N = 2
    assert_eq!(pres(&two_arc()).generator_count(), 16);
    assert_eq!(pres(&figure1()).generator_count(), 400);
}

#[test]
fn kinds() {
    assert_eq!(pres(&two_arc()).kind, PresentationKind::Uniform);
    assert_eq!(pres(&figure1()).kind, PresentationKind::NonUniform);
    assert_eq!(banica_lift::<Rational>(&figure1()).kind, PresentationKind::BanicaLift);
    assert_eq!(pres(&figure1()).scope, Scope::Full);
}

#[test]
fn loop_generator_is_unit() {
    let g = loop_graph();
    let p = pres(&g);
    let x = q(&g, "v", 1, "v", 1);
    // the only magic matrix of size 1 is the unit
    let chars = enumerate_characters(&p, 100).unwrap();
    assert_eq!(chars.len(), 1);
    assert!(chars[0].value(x));
    assert_eq!(vertex_matrix(&p).entries[0][0], Polynomial::generator(x));
}

/// Expected vanishing status of `q^{ks}_{ir} q^{ls'}_{jr}` for an edge `(i,j)r`,
/// written straight from the relation list.
fn expected_vanishing(g: &Multigraph, k: Slot, l: Slot) -> bool {
    let m = g.mult(k.v(), l.v());
    m == 0 || k.label != l.label || k.label > m
}

#[test]
fn vanishing_pairs_partition() {
    for g in [single_edge(), two_arc(), figure1(), corpus("triangle2.txt")] {
        let p = pres(&g);
        let rules = p.rules();
        for e in g.edges() {
            let (a, b) = (e.source_slot(), e.target_slot());
            for &k in p.slots() {
                for &l in p.slots() {
                    let (x, y) = (GeneratorId::new(k, a), GeneratorId::new(l, b));
                    let magic = k == l && a != b;
                    let actual = magic || rules.is_vanishing_pair(x, y);
                    assert_eq!(actual, expected_vanishing(&g, k, l), "{g}: {x} {y}");
                }
            }
        }
    }
}

#[test]
fn figure1_mismatch_pair() {
    let g = figure1();
    let p = pres(&g);
    assert!(p.rules().is_vanishing_pair(q(&g, "c", 3, "a", 1), q(&g, "d", 3, "b", 1)));
    // a genuine edge with matching labels survives
    assert!(!p.rules().is_vanishing_pair(q(&g, "c", 2, "a", 1), q(&g, "d", 2, "b", 1)));
}

#[test]
fn two_arc_has_no_label_overflow_pairs() {
    let g = two_arc();
    let p = pres(&g);
    for (x, y) in p.rules().vanishing_pairs() {
        let (k, l) = (x.row, y.row);
        let m = g.mult(k.v(), l.v());
        assert!(!(m > 0 && k.label == l.label && k.label > m));
    }
}

#[test]
fn vertex_matrix_shapes() {
    let vm = vertex_matrix(&pres(&two_arc()));
    assert_eq!(vm.size(), 2);
    assert!(vm.entries.iter().flatten().all(|e| e.len() == 2));
    let vm = vertex_matrix(&pres(&figure1()));
    assert_eq!(vm.size(), 4);
    assert!(vm.entries.iter().flatten().all(|e| e.len() == 5));
}

#[test]
fn edge_matrix_shapes() {
    let g = loop_graph();
    let em = edge_matrix(&pres(&g), &g);
    assert_eq!(em.size(), 1);
    let x = q(&g, "v", 1, "v", 1);
    assert_eq!(pres(&g).rules().reduce(em.entry(0, 0)), Polynomial::generator(x));

    let g = single_edge();
    let em = edge_matrix(&pres(&g), &g);
    assert_eq!(em.size(), 1);
    assert_eq!(em.entry(0, 0), &Polynomial::word(&[q(&g, "a", 1, "a", 1), q(&g, "b", 1, "b", 1)]));

    let g = two_arc();
    assert_eq!(edge_matrix(&pres(&g), &g).size(), 4);
}

#[test]
fn coproduct_terms_and_counit() {
    let g = two_arc();
    let p = pres(&g);
    let x = q(&g, "a", 1, "b", 2);
    let d = coproduct(x, &p);
    assert_eq!(d.len(), 4);
    let chars = enumerate_characters(&p, 100_000).unwrap();
    let id = Character::identity(p.slots().to_vec());
    let one = |b: bool| if b { Rational::from_integer(1) } else { Rational::from_integer(0) };
    for c in &chars {
        let left = d.evaluate(|h| one(id.value(h)), |h| one(c.value(h)));
        let right = d.evaluate(|h| one(c.value(h)), |h| one(id.value(h)));
        assert_eq!(left, one(c.value(x)));
        assert_eq!(right, one(c.value(x)));
    }
    let gl = loop_graph();
    assert_eq!(coproduct(q(&gl, "v", 1, "v", 1), &pres(&gl)).len(), 1);
}

#[test]
fn permissible_subsets() {
    let budget = ProofBudget::default();
    let g = two_arc();
    let (sub, report) = permissible_subpresentation(&pres(&g), &g, budget);
    assert_eq!(sub.generator_count(), 16);
    assert!(report.entries.is_empty());

    let g = single_edge();
    let (sub, _) = permissible_subpresentation(&pres(&g), &g, budget);
    assert_eq!(sub.generator_count(), 4);

    let g = figure1();
    let (sub, report) = permissible_subpresentation(&pres(&g), &g, budget);
    assert_eq!(sub.scope, Scope::Permissible);
    assert_eq!(sub.generator_count(), 196);
    assert_eq!(report.entries.len(), 196 * 6);
    assert!(report.all_proved());
}

#[test]
fn lift_relations() {
    let g = loop_graph();
    assert_eq!(banica_lift::<Rational>(&g).generator_count(), 1);

    let g = figure1();
    let lift: Presentation = banica_lift(&g);
    let u = |k: &str, i: &str| q(&g, k, 1, i, 1);
    assert!(lift.rules().is_vanishing_pair(u("a", "c"), u("b", "d")));
    assert!(!lift.rules().is_vanishing_pair(u("a", "a"), u("b", "b")));

    // all arc weights agree, so every mismatch pair is already killed by the magic relations
    let g = k4_doubled();
    let lift: Presentation = banica_lift(&g);
    for (x, y) in lift.rules().vanishing_pairs() {
        assert!(x.row == y.row || x.col == y.col, "{x} {y}");
    }
    assert!(!lift.linear_relations().is_empty());
}

#[test]
fn lift_edge_entries_carry_label_delta() {
    let g = two_arc();
    let lift: Presentation = banica_lift(&g);
    let em = edge_matrix(&lift, &g);
    for (s, es) in em.edges.iter().enumerate() {
        for (t, et) in em.edges.iter().enumerate() {
            let e = em.entry(s, t);
            if es.label != et.label {
                assert!(e.is_zero());
            } else {
                let u = |k: usize, i: usize| GeneratorId::new(Slot::new(k, 1), Slot::new(i, 1));
                assert_eq!(e, &Polynomial::word(&[u(es.src, et.src), u(es.dst, et.dst)]));
            }
        }
    }
}

#[test]
fn json_round_trip() {
    for g in [loop_graph(), two_arc(), figure1()] {
        for p in [pres(&g), build_presentation(&g, false), banica_lift(&g)] {
            let text = p.to_json();
            let back = Presentation::from_json(&text).unwrap();
            assert_eq!(back.to_json(), text);
            assert_eq!(back.generators(), p.generators());
            assert_eq!(back.rules().vanishing_pairs(), p.rules().vanishing_pairs());
            assert_eq!(back.linear_relations(), p.linear_relations());
        }
    }
    assert!(Presentation::<Rational>::from_json("{}").is_err());
}

#[test]
fn rv_toggle() {
    let g = two_arc();
    let with: Presentation = build_presentation(&g, true);
    let without: Presentation = build_presentation(&g, false);
    assert!(with.has_rv());
    assert!(!without.has_rv());
    assert!(without.linear_relations().is_empty());
    assert!(!with.linear_relations().is_empty());
}
