mod common;

use std::collections::BTreeSet;

use common::*;
use qsym::characters::{
    compare_with_automorphisms, edge_action_of, enumerate_characters, faithfulness_report, vertex_action_of, Character,
    CharacterError,
};
use qsym::multigraph::{automorphisms, Multigraph, DEFAULT_AUTOMORPHISM_BUDGET};
use qsym::presentation::{build_presentation, edge_matrix, permissible_subpresentation};
use qsym::ncalg::ProofBudget;
use qsym::{Presentation, Slot};

const BUDGET: u64 = 10_000_000;

fn pres(g: &Multigraph) -> Presentation {
    build_presentation(g, true)
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for at in 0..=p.len() {
            let mut q = p.clone();
            q.insert(at, n - 1);
            out.push(q);
        }
    }
    out
}

/// Slot permutations satisfying the edge relations and s-independence, checked
/// straight from the graph: `image[c]` is the row slot of column slot `c`.
fn brute_force(g: &Multigraph) -> BTreeSet<Vec<usize>> {
    let slots = g.all_slots();
    let index = |s: Slot| slots.iter().position(|&t| t == s).unwrap();
    let mut out = BTreeSet::new();
    for image in permutations(slots.len()) {
        let row = |s: Slot| slots[image[index(s)]];
        let edges_ok = g.edges().iter().all(|e| {
            let (k, l) = (row(e.source_slot()), row(e.target_slot()));
            let m = g.mult(k.v(), l.v());
            m > 0 && k.label == l.label && k.label <= m
        });
        let rv_ok = (0..g.vertex_count()).all(|k| {
            (0..g.vertex_count()).all(|i| {
                let counts: Vec<usize> = (1..=g.max_multiplicity())
                    .map(|s| {
                        (1..=g.max_multiplicity())
                            .filter(|&r| row(Slot::new(i, r)) == Slot::new(k, s))
                            .count()
                    })
                    .collect();
                counts.windows(2).all(|w| w[0] == w[1])
            })
        });
        if edges_ok && rv_ok {
            out.insert(image);
        }
    }
    out
}

#[test]
fn trivial_counts() {
    assert_eq!(enumerate_characters(&pres(&loop_graph()), BUDGET).unwrap().len(), 1);
    assert_eq!(enumerate_characters(&pres(&single_edge()), BUDGET).unwrap().len(), 1);
}

#[test]
fn matches_brute_force() {
    for g in [loop_graph(), single_edge(), two_arc(), corpus("triangle2.txt")] {
        let p = pres(&g);
        let found: BTreeSet<Vec<usize>> = enumerate_characters(&p, BUDGET)
            .unwrap()
            .iter()
            .map(|c| c.image().to_vec())
            .collect();
        assert_eq!(found, brute_force(&g), "{g}");
    }
}

#[test]
fn characters_satisfy_relations_post_hoc() {
    for g in [two_arc(), corpus("triangle2.txt"), k4_doubled()] {
        let p = pres(&g);
        for c in enumerate_characters(&p, BUDGET).unwrap() {
            assert!(c.satisfies(&p));
            assert!(vertex_action_of(&c, &p).is_some());
        }
    }
}

#[test]
fn budget_exhaustion_is_reported() {
    let p = pres(&corpus("triangle2.txt"));
    assert!(matches!(
        enumerate_characters(&p, 3),
        Err(CharacterError::SearchBudgetExceeded { .. })
    ));
}

#[test]
fn independent_of_worker_count() {
    let p = pres(&k4_doubled());
    let run = |n: usize| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .unwrap()
            .install(|| enumerate_characters(&p, BUDGET).unwrap())
    };
    assert_eq!(run(1), run(4));
}

#[test]
fn identity_acts_trivially() {
    let g = two_arc();
    let p = pres(&g);
    let em = edge_matrix(&p, &g);
    let id = Character::identity(p.slots().to_vec());
    assert_eq!(edge_action_of(&id, &em).unwrap(), (0..em.size()).collect::<Vec<_>>());
}

#[test]
fn label_swap_swaps_parallel_edges() {
    let g = two_arc();
    let p = pres(&g);
    let em = edge_matrix(&p, &g);
    let swap = |s: Slot| Slot::new(s.v(), 3 - s.label);
    let image: Vec<usize> = p
        .slots()
        .iter()
        .map(|&s| p.slots().iter().position(|&t| t == swap(s)).unwrap())
        .collect();
    let c = Character::from_image(p.slots().to_vec(), image);
    assert!(c.satisfies(&p));
    let act = edge_action_of(&c, &em).unwrap();
    for (t, e) in em.edges.iter().enumerate() {
        let f = em.edges[act[t]];
        assert_eq!((f.src, f.dst, f.label), (e.src, e.dst, 3 - e.label));
    }
}

#[test]
fn edge_action_is_functorial() {
    for g in [two_arc(), corpus("triangle2.txt")] {
        let p = pres(&g);
        let em = edge_matrix(&p, &g);
        let chars = enumerate_characters(&p, BUDGET).unwrap();
        for a in &chars {
            for b in &chars {
                let ab = edge_action_of(&a.compose(b), &em).unwrap();
                let (ea, eb) = (edge_action_of(a, &em).unwrap(), edge_action_of(b, &em).unwrap());
                let expected: Vec<usize> = eb.iter().map(|&t| ea[t]).collect();
                assert_eq!(ab, expected);
            }
        }
    }
}

#[test]
fn uniform_reports_agree_with_permissible_restriction() {
    let g = two_arc();
    let p = pres(&g);
    let (sub, _) = permissible_subpresentation(&p, &g, ProofBudget::default());
    let a = faithfulness_report(&enumerate_characters(&p, BUDGET).unwrap(), &p, &g).unwrap();
    let b = faithfulness_report(&enumerate_characters(&sub, BUDGET).unwrap(), &sub, &g).unwrap();
    assert_eq!(a.character_count, b.character_count);
    assert_eq!(a.kernel_pairs, b.kernel_pairs);
}

#[test]
fn characters_inject_into_automorphisms() {
    // every character induces a distinct automorphism; the converse is checked by the acceptance run
    for g in [single_edge(), two_arc(), corpus("triangle2.txt")] {
        let p = pres(&g);
        let chars = enumerate_characters(&p, BUDGET).unwrap();
        match compare_with_automorphisms(&chars, &p, &g, DEFAULT_AUTOMORPHISM_BUDGET) {
            Ok(m) => assert_eq!(m.character_count, m.automorphism_count),
            Err(CharacterError::MismatchFound {
                unmatched_characters, ..
            }) => assert_eq!(unmatched_characters, 0, "{g}"),
            Err(e) => panic!("{e}"),
        }
    }
}

#[test]
fn figure1_structure() {
    let g = figure1();
    let p = pres(&g);
    let chars = enumerate_characters(&p, BUDGET).unwrap();
    assert!(chars.iter().all(|c| c.satisfies(&p)));
    let em = edge_matrix(&p, &g);
    let report = faithfulness_report(&chars, &p, &g).unwrap();
    assert!(!report.kernel_pairs.is_empty());
    assert_eq!(report.distinct_actions, automorphisms(&g, DEFAULT_AUTOMORPHISM_BUDGET).unwrap().len());

    // a character moving only non-permissible slots acts as the identity on edges
    let perm = g.permissible_pairs();
    let identity: Vec<usize> = (0..em.size()).collect();
    let hidden = chars.iter().find(|c| {
        c.image().iter().enumerate().any(|(col, &row)| col != row)
            && c.image()
                .iter()
                .enumerate()
                .all(|(col, &row)| col == row || !perm.contains(&c.slots()[col]))
    });
    let hidden = hidden.expect("a character permuting non-permissible slots only");
    assert_eq!(edge_action_of(hidden, &em).unwrap(), identity);

    let (sub, _) = permissible_subpresentation(&p, &g, ProofBudget::default());
    let sub_chars = enumerate_characters(&sub, BUDGET).unwrap();
    let sub_report = faithfulness_report(&sub_chars, &sub, &g).unwrap();
    assert!(sub_report.is_faithful());
    let m = compare_with_automorphisms(&sub_chars, &sub, &g, DEFAULT_AUTOMORPHISM_BUDGET).unwrap();
    assert_eq!((m.character_count, m.automorphism_count), (240, 240));
}
