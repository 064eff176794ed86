#![allow(dead_code)]

use std::path::PathBuf;

use qsym::multigraph::read_graph;
use qsym::{GeneratorId, Multigraph, Slot};

pub const CORPUS: [&str; 5] = ["loop.txt", "single_edge.txt", "two_arc.json", "triangle2.txt", "figure1.json"];

pub fn corpus_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus").join(name)
}

pub fn corpus(name: &str) -> Multigraph {
    read_graph(&corpus_path(name)).expect("corpus graph parses")
}

pub fn loop_graph() -> Multigraph {
    Multigraph::build(&["v"], &[("v", "v")]).unwrap()
}

pub fn single_edge() -> Multigraph {
    Multigraph::build(&["a", "b"], &[("a", "b")]).unwrap()
}

pub fn two_arc() -> Multigraph {
    Multigraph::build(&["a", "b"], &[("a", "b"), ("a", "b"), ("b", "a"), ("b", "a")]).unwrap()
}

pub fn figure1() -> Multigraph {
    let mut pairs = vec![("a", "b"); 5];
    pairs.extend([("c", "d"); 2]);
    Multigraph::build(&["a", "b", "c", "d"], &pairs).unwrap()
}

pub fn k4_doubled() -> Multigraph {
    let vs = ["a", "b", "c", "d"];
    let mut pairs = Vec::new();
    for i in vs {
        for j in vs {
            if i != j {
                pairs.push((i, j));
                pairs.push((i, j));
            }
        }
    }
    Multigraph::build(&vs, &pairs).unwrap()
}

pub fn slot(g: &Multigraph, v: &str, label: u32) -> Slot {
    Slot::new(g.vertex_index(v).unwrap(), label)
}

/// `q^{ks}_{ir}`.
pub fn q(g: &Multigraph, k: &str, s: u32, i: &str, r: u32) -> GeneratorId {
    GeneratorId::new(slot(g, k, s), slot(g, i, r))
}
