use std::collections::BTreeMap;

use serde::Serialize;

use super::{Edge, GraphError, Multigraph};

pub const DEFAULT_AUTOMORPHISM_BUDGET: u128 = 10_000_000;

/// A vertex permutation preserving multiplicities together with a label
/// bijection for every arc.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct MultigraphAutomorphism {
    pub vertex_map: Vec<usize>,
    /// `edge_maps[(i,j)][r-1]` is the label of the image of `(i,j)r` in arc `(σi,σj)`.
    pub edge_maps: BTreeMap<(usize, usize), Vec<u32>>,
}

impl MultigraphAutomorphism {
    pub fn identity(g: &Multigraph) -> Self {
        let arcs = g.underlying().arcs;
        MultigraphAutomorphism {
            vertex_map: (0..g.vertex_count()).collect(),
            edge_maps: arcs
                .into_iter()
                .map(|(a, m)| (a, (1..=m).collect()))
                .collect(),
        }
    }

    pub fn apply(&self, e: &Edge) -> Edge {
        Edge {
            src: self.vertex_map[e.src],
            dst: self.vertex_map[e.dst],
            label: self.edge_maps[&(e.src, e.dst)][e.label as usize - 1],
        }
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Self) -> Self {
        let vertex_map = other.vertex_map.iter().map(|&v| self.vertex_map[v]).collect();
        let edge_maps = other
            .edge_maps
            .iter()
            .map(|(&(i, j), labels)| {
                let mid = (other.vertex_map[i], other.vertex_map[j]);
                let outer = &self.edge_maps[&mid];
                ((i, j), labels.iter().map(|&l| outer[l as usize - 1]).collect())
            })
            .collect();
        MultigraphAutomorphism {
            vertex_map,
            edge_maps,
        }
    }

    pub fn inverse(&self) -> Self {
        let n = self.vertex_map.len();
        let mut vertex_map = vec![0; n];
        for (v, &w) in self.vertex_map.iter().enumerate() {
            vertex_map[w] = v;
        }
        let mut edge_maps = BTreeMap::new();
        for (&(i, j), labels) in &self.edge_maps {
            let mut inv = vec![0; labels.len()];
            for (r, &l) in labels.iter().enumerate() {
                inv[l as usize - 1] = r as u32 + 1;
            }
            edge_maps.insert((self.vertex_map[i], self.vertex_map[j]), inv);
        }
        MultigraphAutomorphism {
            vertex_map,
            edge_maps,
        }
    }
}

fn vertex_permutations(g: &Multigraph) -> Vec<Vec<usize>> {
    fn extend(g: &Multigraph, map: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        let n = g.vertex_count();
        let v = map.len();
        if v == n {
            out.push(map.clone());
            return;
        }
        for w in 0..n {
            if used[w] {
                continue;
            }
            let ok = g.mult(v, v) == g.mult(w, w)
                && (0..v).all(|u| g.mult(u, v) == g.mult(map[u], w) && g.mult(v, u) == g.mult(w, map[u]));
            if ok {
                used[w] = true;
                map.push(w);
                extend(g, map, used, out);
                map.pop();
                used[w] = false;
            }
        }
    }
    let mut out = Vec::new();
    extend(g, &mut Vec::new(), &mut vec![false; g.vertex_count()], &mut out);
    out
}

/// Lexicographic successor; false when `p` was the last permutation.
pub(crate) fn next_permutation<T: Ord>(p: &mut [T]) -> bool {
    if p.len() < 2 {
        return false;
    }
    let mut i = p.len() - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = p.len() - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

fn factorial(m: u32) -> u128 {
    (1..=m as u128).product()
}

/// All automorphisms, ordered by vertex map then by per-arc label maps
/// (arcs in `(i,j)` order, each label map lexicographic).
pub fn automorphisms(g: &Multigraph, budget: u128) -> Result<Vec<MultigraphAutomorphism>, GraphError> {
    let vperms = vertex_permutations(g);
    let arcs = g.underlying().arcs;
    let per_vertex_map: u128 = arcs.iter().map(|(_, m)| factorial(*m)).product();
    let total = per_vertex_map.saturating_mul(vperms.len() as u128);
    if total > budget {
        return Err(GraphError::SearchBudgetExceeded(total, budget));
    }
    let mut out = Vec::with_capacity(total as usize);
    for vmap in vperms {
        let mut label_maps: Vec<Vec<u32>> = arcs.iter().map(|(_, m)| (1..=*m).collect()).collect();
        'odometer: loop {
            out.push(MultigraphAutomorphism {
                vertex_map: vmap.clone(),
                edge_maps: arcs
                    .iter()
                    .zip(&label_maps)
                    .map(|((a, _), l)| (*a, l.clone()))
                    .collect(),
            });
            // last arc varies fastest
            let mut k = label_maps.len();
            loop {
                if k == 0 {
                    break 'odometer;
                }
                k -= 1;
                if next_permutation(&mut label_maps[k]) {
                    continue 'odometer;
                }
                label_maps[k].sort();
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    fn two_arc() -> Multigraph {
        Multigraph::build(&["a", "b"], &[("a", "b"), ("a", "b"), ("b", "a"), ("b", "a")]).unwrap()
    }

    fn figure1() -> Multigraph {
        let mut e = vec![("a", "b"); 5];
        e.extend([("c", "d"); 2]);
        Multigraph::build(&["a", "b", "c", "d"], &e).unwrap()
    }

    /// Oracle: all vertex permutations x all label assignments, filtered by
    /// "maps the edge multiset onto itself".
    fn brute_force_count(g: &Multigraph) -> usize {
        let n = g.vertex_count();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut count = 0;
        loop {
            let preserves = (0..n).all(|i| (0..n).all(|j| g.mult(i, j) == g.mult(perm[i], perm[j])));
            if preserves {
                count += g
                    .underlying()
                    .arcs
                    .iter()
                    .map(|(_, m)| factorial(*m) as usize)
                    .product::<usize>();
            }
            if !next_permutation(&mut perm) {
                break;
            }
        }
        count
    }

    #[test]
    fn counts() {
        assert_eq!(automorphisms(&figure1(), DEFAULT_AUTOMORPHISM_BUDGET).unwrap().len(), 240);
        assert_eq!(brute_force_count(&figure1()), 240);
        assert_eq!(automorphisms(&two_arc(), DEFAULT_AUTOMORPHISM_BUDGET).unwrap().len(), 8);
        assert_eq!(brute_force_count(&two_arc()), 8);
        let single = Multigraph::build(&["a", "b"], &[("a", "b")]).unwrap();
        assert_eq!(automorphisms(&single, 10).unwrap().len(), 1);
    }

    #[test]
    fn budget_guard() {
        assert_eq!(
            automorphisms(&figure1(), 100),
            Err(GraphError::SearchBudgetExceeded(240, 100))
        );
    }

    #[test]
    fn group_axioms() {
        for g in [figure1(), two_arc()] {
            let auts = automorphisms(&g, DEFAULT_AUTOMORPHISM_BUDGET).unwrap();
            let set: BTreeSet<_> = auts.iter().cloned().collect();
            assert_eq!(set.len(), auts.len());
            assert!(set.contains(&MultigraphAutomorphism::identity(&g)));
            for a in auts.iter().step_by(7) {
                assert!(set.contains(&a.inverse()));
                assert_eq!(a.compose(&a.inverse()), MultigraphAutomorphism::identity(&g));
                for b in auts.iter().step_by(11) {
                    assert!(set.contains(&a.compose(b)));
                }
                // images are edges and the action is a bijection
                let imgs: BTreeSet<_> = g.edges().iter().map(|e| a.apply(e)).collect();
                assert_eq!(imgs.len(), g.edges().len());
                assert!(imgs.iter().all(|e| g.has_edge(e)));
            }
        }
    }
}
