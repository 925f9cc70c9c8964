use crate::bitset::VertexSet;
use crate::graph::Graph;
use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt;

/// Induced patterns the classifier looks for: complete graphs, stars, and
/// paths on a fixed number of vertices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pattern {
    /// `K_r`
    Clique(usize),
    /// `K_{1,r}`: a center joined to `r` pairwise nonadjacent leaves
    Star(usize),
    /// Induced path on `k` vertices
    Path(usize),
}

impl Pattern {
    pub fn vertex_count(&self) -> usize {
        match *self {
            Pattern::Clique(r) => r,
            Pattern::Star(r) => r + 1,
            Pattern::Path(k) => k,
        }
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Pattern::Clique(r) => write!(f, "K{r}"),
            Pattern::Star(r) => write!(f, "K1,{r}"),
            Pattern::Path(k) => write!(f, "P{k}"),
        }
    }
}

/// First induced copy of `pattern` in a fixed search order, or `None`.
/// Clique witnesses come back ascending, star witnesses center first, path
/// witnesses in path order.
pub fn has_induced(g: &Graph, pattern: Pattern) -> Option<Vec<usize>> {
    let size = pattern.vertex_count();
    if size == 0 || size > g.n() {
        return if size == 0 { Some(Vec::new()) } else { None };
    }
    match pattern {
        Pattern::Clique(r) => {
            let mut chosen = Vec::with_capacity(r);
            find_clique(g, r, g.full_vertex_set(), &mut chosen).then_some(chosen)
        }
        Pattern::Star(r) => (0..g.n()).find_map(|c| {
            let mut chosen = vec![c];
            find_independent(g, r, g.neighbors(c).clone(), &mut chosen).then_some(chosen)
        }),
        Pattern::Path(k) => {
            let mut path = Vec::with_capacity(k);
            (0..g.n()).find_map(|s| {
                path.clear();
                path.push(s);
                extend_induced_path(g, k, &mut path).then(|| path.clone())
            })
        }
    }
}

fn find_clique(g: &Graph, r: usize, candidates: VertexSet, chosen: &mut Vec<usize>) -> bool {
    if chosen.len() == r {
        return true;
    }
    if chosen.len() + candidates.len() < r {
        return false;
    }
    for v in candidates.iter() {
        let mut next = candidates.intersection(g.neighbors(v));
        next.remove_below(v + 1);
        chosen.push(v);
        if find_clique(g, r, next, chosen) {
            return true;
        }
        chosen.pop();
    }
    false
}

fn find_independent(g: &Graph, r: usize, candidates: VertexSet, chosen: &mut Vec<usize>) -> bool {
    if chosen.len() == r + 1 {
        return true;
    }
    for v in candidates.iter() {
        let mut next = candidates.difference(g.closed_neighbors(v));
        next.remove_below(v);
        chosen.push(v);
        if find_independent(g, r, next, chosen) {
            return true;
        }
        chosen.pop();
    }
    false
}

fn extend_induced_path(g: &Graph, k: usize, path: &mut Vec<usize>) -> bool {
    if path.len() == k {
        return true;
    }
    let last = *path.last().unwrap();
    for v in g.neighbors(last).iter() {
        if path.contains(&v) || path[..path.len() - 1].iter().any(|&p| g.has_edge(p, v)) {
            continue;
        }
        path.push(v);
        if extend_induced_path(g, k, path) {
            return true;
        }
        path.pop();
    }
    false
}

/// Checks that `witness`, read in the order conventions of `has_induced`,
/// induces exactly `pattern` in `g`.
pub fn witness_matches(g: &Graph, pattern: Pattern, witness: &[usize]) -> bool {
    if witness.len() != pattern.vertex_count() {
        return false;
    }
    if witness.iter().any(|&v| v >= g.n()) {
        return false;
    }
    let mut sorted = witness.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != witness.len() {
        return false;
    }
    let want_edge = |i: usize, j: usize| match pattern {
        Pattern::Clique(_) => true,
        Pattern::Star(_) => i == 0 || j == 0,
        Pattern::Path(_) => i.abs_diff(j) == 1,
    };
    for i in 0..witness.len() {
        for j in i + 1..witness.len() {
            if g.has_edge(witness[i], witness[j]) != want_edge(i, j) {
                return false;
            }
        }
    }
    true
}

/// Forbidden-subgraph profile of a graph. Map keys are the pattern
/// parameter: `k_free[r]` says no induced `K_r`, `star_free[r]` no induced
/// `K_{1,r}`, `path_free[k]` no induced `P_k`. Witnesses certify the false
/// verdicts, keyed by pattern name.
#[derive(Debug, Clone, Serialize)]
pub struct ClassProfile {
    pub triangle_free: bool,
    pub claw_free: bool,
    pub k_free: BTreeMap<usize, bool>,
    pub star_free: BTreeMap<usize, bool>,
    pub path_free: BTreeMap<usize, bool>,
    pub witnesses: BTreeMap<String, Vec<usize>>,
}

impl ClassProfile {
    pub fn is_k_free(&self, r: usize) -> Option<bool> {
        self.k_free.get(&r).copied()
    }

    pub fn is_star_free(&self, r: usize) -> Option<bool> {
        self.star_free.get(&r).copied()
    }

    pub fn is_path_free(&self, k: usize) -> Option<bool> {
        self.path_free.get(&k).copied()
    }

    /// Smallest `r` in the computed range with no induced `K_r`.
    pub fn smallest_free_clique(&self) -> Option<usize> {
        self.k_free.iter().find(|(_, &free)| free).map(|(&r, _)| r)
    }

    /// Smallest `r` in the computed range with no induced `K_{1,r}`.
    pub fn smallest_free_star(&self) -> Option<usize> {
        self.star_free.iter().find(|(_, &free)| free).map(|(&r, _)| r)
    }
}

/// Fills a [`ClassProfile`] for `r` up to `r_max` (at least 3) and path
/// lengths 4, 5, 6.
pub fn classify(g: &Graph, r_max: usize) -> ClassProfile {
    assert!(r_max >= 3, "r_max must be at least 3");
    let mut witnesses = BTreeMap::new();
    let mut scan = |pattern: Pattern| {
        if let Some(w) = has_induced(g, pattern) {
            witnesses.insert(pattern.to_string(), w);
            false
        } else {
            true
        }
    };
    let k_free: BTreeMap<usize, bool> =
        (2..=r_max).map(|r| (r, scan(Pattern::Clique(r)))).collect();
    let star_free: BTreeMap<usize, bool> =
        (2..=r_max).map(|r| (r, scan(Pattern::Star(r)))).collect();
    let path_free: BTreeMap<usize, bool> =
        (4..=6).map(|k| (k, scan(Pattern::Path(k)))).collect();
    ClassProfile {
        triangle_free: k_free[&3],
        claw_free: star_free[&3],
        k_free,
        star_free,
        path_free,
        witnesses,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{complete, cycle, path, star};

    #[test]
    fn clique_search() {
        let k4 = complete(4).unwrap();
        assert_eq!(has_induced(&k4, Pattern::Clique(4)), Some(vec![0, 1, 2, 3]));
        assert_eq!(has_induced(&k4, Pattern::Clique(5)), None);
        let c5 = cycle(5).unwrap();
        assert_eq!(has_induced(&c5, Pattern::Clique(3)), None);
        assert!(has_induced(&c5, Pattern::Clique(2)).is_some());
    }

    #[test]
    fn star_search() {
        let s4 = star(4).unwrap();
        let w = has_induced(&s4, Pattern::Star(4)).unwrap();
        assert_eq!(w[0], 0);
        assert!(witness_matches(&s4, Pattern::Star(4), &w));
        assert_eq!(has_induced(&s4, Pattern::Star(5)), None);
        // no claws in a cycle, max degree is 2
        assert_eq!(has_induced(&cycle(6).unwrap(), Pattern::Star(3)), None);
        let k13 = star(3).unwrap();
        assert!(has_induced(&k13, Pattern::Star(3)).is_some());
    }

    #[test]
    fn path_search() {
        let c5 = cycle(5).unwrap();
        let w = has_induced(&c5, Pattern::Path(4)).unwrap();
        assert!(witness_matches(&c5, Pattern::Path(4), &w));
        assert_eq!(has_induced(&c5, Pattern::Path(5)), None);
        let p6 = path(6).unwrap();
        assert_eq!(has_induced(&p6, Pattern::Path(6)), Some(vec![0, 1, 2, 3, 4, 5]));
        // complete graphs have no induced P_3
        assert_eq!(has_induced(&complete(5).unwrap(), Pattern::Path(3)), None);
    }

    #[test]
    fn witness_checker_rejects_wrong_shapes() {
        let c4 = cycle(4).unwrap();
        assert!(!witness_matches(&c4, Pattern::Path(3), &[0, 2, 1]));
        assert!(witness_matches(&c4, Pattern::Path(3), &[0, 1, 2]));
        assert!(!witness_matches(&c4, Pattern::Path(3), &[0, 1, 1]));
        assert!(!witness_matches(&c4, Pattern::Clique(2), &[0, 2]));
    }

    #[test]
    fn classify_c5() {
        let p = classify(&cycle(5).unwrap(), 6);
        assert!(p.triangle_free);
        assert!(p.claw_free);
        assert_eq!(p.is_path_free(5), Some(true));
        assert_eq!(p.is_path_free(4), Some(false));
        let w = &p.witnesses["P4"];
        assert!(witness_matches(&cycle(5).unwrap(), Pattern::Path(4), w));
    }

    #[test]
    fn classify_p6_and_stars() {
        let p = classify(&path(6).unwrap(), 6);
        assert_eq!(p.is_path_free(6), Some(false));
        assert_eq!(p.witnesses["P6"], vec![0, 1, 2, 3, 4, 5]);

        let s = classify(&star(4).unwrap(), 6);
        assert_eq!(s.is_star_free(4), Some(false));
        assert_eq!(s.is_star_free(5), Some(true));
        assert!(s.triangle_free);
    }

    #[test]
    fn classify_triangle() {
        let p = classify(&complete(3).unwrap(), 6);
        assert!(!p.triangle_free);
        let w = &p.witnesses["K3"];
        assert!(witness_matches(&complete(3).unwrap(), Pattern::Clique(3), w));
    }

    #[test]
    fn every_false_has_a_sound_witness() {
        let g = crate::graph6::decode_graph6("DQc").unwrap();
        let p = classify(&g, 6);
        for (r, &free) in &p.k_free {
            if !free {
                assert!(witness_matches(&g, Pattern::Clique(*r), &p.witnesses[&format!("K{r}")]));
            }
        }
        for (r, &free) in &p.star_free {
            if !free {
                assert!(witness_matches(&g, Pattern::Star(*r), &p.witnesses[&format!("K1,{r}")]));
            }
        }
        for (k, &free) in &p.path_free {
            if !free {
                assert!(witness_matches(&g, Pattern::Path(*k), &p.witnesses[&format!("P{k}")]));
            }
        }
    }
}
