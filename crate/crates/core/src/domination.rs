use crate::bitset::VertexSet;
use crate::graph::Graph;
use crate::{Budget, Work};
use serde::Serialize;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DominationError {
    #[error("search budget exhausted after {expanded} node expansions, result would be inexact")]
    BudgetExhausted { expanded: u64 },
    #[error("enumeration cap of {cap} sets exceeded")]
    EnumerationCapExceeded { cap: usize },
    #[error("set does not dominate the graph, vertex {undominated} is uncovered")]
    NotDominating { undominated: usize },
    #[error("vertex {v} out of range for graph on {n} vertices")]
    VertexOutOfRange { v: usize, n: usize },
    #[error("vertex {v} listed twice")]
    DuplicateVertex { v: usize },
}

fn spend(work: &mut Work) -> Result<(), DominationError> {
    if work.spend() {
        Ok(())
    } else {
        Err(DominationError::BudgetExhausted { expanded: work.used })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct DominationCertificate {
    pub gamma: usize,
    pub one_gamma_set: VertexSet,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub all_gamma_sets: Option<Vec<VertexSet>>,
}

pub fn dominates(g: &Graph, d: &VertexSet) -> bool {
    first_undominated(g, d).is_none()
}

fn coverage(g: &Graph, d: &VertexSet) -> VertexSet {
    let mut c = VertexSet::empty(g.n());
    for v in d.iter() {
        c.union_with(g.closed_neighbors(v));
    }
    c
}

fn first_undominated(g: &Graph, d: &VertexSet) -> Option<usize> {
    coverage(g, d).complement().first()
}

/// Greedy max-coverage dominating set, ties to the lowest vertex index.
fn greedy_dominating_set(g: &Graph) -> VertexSet {
    let mut chosen = VertexSet::empty(g.n());
    let mut dominated = VertexSet::empty(g.n());
    let full = g.full_vertex_set();
    while dominated != full {
        let v = g
            .vertices()
            .max_by_key(|&v| {
                let gain = g.closed_neighbors(v).difference(&dominated).len();
                // max_by_key keeps the later of equal keys, so bias to low index
                (gain, std::cmp::Reverse(v))
            })
            .unwrap();
        chosen.insert(v);
        dominated.union_with(g.closed_neighbors(v));
    }
    chosen
}

/// `⌈undominated / best single-vertex coverage⌉`, an admissible bound on how
/// many more vertices any dominating extension needs. `eligible` restricts
/// which vertices may still be picked.
fn coverage_lower_bound(g: &Graph, undominated: &VertexSet, eligible: impl Iterator<Item = usize>) -> usize {
    let need = undominated.len();
    if need == 0 {
        return 0;
    }
    let best = eligible
        .map(|v| g.closed_neighbors(v).intersection_len(undominated))
        .max()
        .unwrap_or(0);
    if best == 0 {
        usize::MAX
    } else {
        need.div_ceil(best)
    }
}

/// Undominated vertex with the smallest closed neighborhood, lowest index on
/// ties: the branch vertex with the fewest candidate dominators.
fn branch_vertex(g: &Graph, undominated: &VertexSet) -> usize {
    undominated
        .iter()
        .min_by_key(|&v| (g.closed_neighbors(v).len(), v))
        .expect("caller checks for undominated vertices")
}

struct GammaSearch<'a> {
    g: &'a Graph,
    work: Work,
    best: VertexSet,
    best_size: usize,
    /// When set, chosen vertices must stay pairwise nonadjacent.
    independent_only: bool,
}

impl GammaSearch<'_> {
    fn run(&mut self, chosen: &mut VertexSet, chosen_size: usize, dominated: &VertexSet) -> Result<(), DominationError> {
        spend(&mut self.work)?;
        let undominated = dominated.complement();
        if undominated.is_empty() {
            if chosen_size < self.best_size {
                self.best = chosen.clone();
                self.best_size = chosen_size;
            }
            return Ok(());
        }
        let lb = {
            let eligible = self
                .g
                .vertices()
                .filter(|&v| !self.independent_only || chosen.is_disjoint(self.g.closed_neighbors(v)));
            coverage_lower_bound(self.g, &undominated, eligible)
        };
        if lb == usize::MAX || chosen_size.saturating_add(lb) >= self.best_size {
            return Ok(());
        }
        let b = branch_vertex(self.g, &undominated);
        for u in self.g.closed_neighbors(b).iter() {
            if self.independent_only && !chosen.is_disjoint(self.g.closed_neighbors(u)) {
                continue;
            }
            let mut next_dominated = dominated.clone();
            next_dominated.union_with(self.g.closed_neighbors(u));
            chosen.insert(u);
            self.run(chosen, chosen_size + 1, &next_dominated)?;
            chosen.remove(u);
        }
        Ok(())
    }
}

/// Exact domination number by branch and bound. Branches on a
/// minimum-closed-degree undominated vertex, trying each of its closed
/// neighbors as the next dominator; greedy seed above, single-vertex
/// coverage bound below.
pub fn domination_number(g: &Graph, budget: &Budget) -> Result<DominationCertificate, DominationError> {
    let seed = greedy_dominating_set(g);
    let mut search = GammaSearch {
        g,
        work: Work::new(budget),
        best_size: seed.len(),
        best: seed,
        independent_only: false,
    };
    search.run(&mut VertexSet::empty(g.n()), 0, &VertexSet::empty(g.n()))?;
    debug_assert!(dominates(g, &search.best));
    Ok(DominationCertificate {
        gamma: search.best_size,
        one_gamma_set: search.best,
        all_gamma_sets: None,
    })
}

/// Minimum size of a dominating set that is also independent. Same search
/// as [`domination_number`] with the dominator choices restricted to
/// vertices nonadjacent to everything already chosen.
pub fn independent_domination_number(g: &Graph, budget: &Budget) -> Result<usize, DominationError> {
    let seed = greedy_independent_dominating_set(g);
    let mut search = GammaSearch {
        g,
        work: Work::new(budget),
        best_size: seed.len(),
        best: seed,
        independent_only: true,
    };
    search.run(&mut VertexSet::empty(g.n()), 0, &VertexSet::empty(g.n()))?;
    Ok(search.best_size)
}

/// Greedy maximal independent set by coverage; maximal independent sets
/// dominate, so this always terminates with a valid seed.
fn greedy_independent_dominating_set(g: &Graph) -> VertexSet {
    let mut chosen = VertexSet::empty(g.n());
    let mut dominated = VertexSet::empty(g.n());
    let full = g.full_vertex_set();
    while dominated != full {
        let v = g
            .vertices()
            .filter(|&v| chosen.is_disjoint(g.closed_neighbors(v)))
            .max_by_key(|&v| {
                let gain = g.closed_neighbors(v).difference(&dominated).len();
                (gain, std::cmp::Reverse(v))
            })
            .expect("an undominated vertex is always an eligible pick");
        chosen.insert(v);
        dominated.union_with(g.closed_neighbors(v));
    }
    chosen
}

/// All dominating sets of size exactly γ(G), in ascending member-sequence
/// order.
pub fn enumerate_gamma_sets(g: &Graph, budget: &Budget) -> Result<Vec<VertexSet>, DominationError> {
    let gamma = domination_number(g, budget)?.gamma;
    let mut out = Vec::new();
    let mut enumerate = GammaEnumeration {
        g,
        gamma,
        work: Work::new(budget),
        cap: budget.enum_cap,
        // max member of each closed neighborhood: once the scan position
        // passes it, that vertex can no longer be dominated
        last_dominator: g
            .vertices()
            .map(|v| g.closed_neighbors(v).iter().last().unwrap())
            .collect(),
        out: &mut out,
    };
    enumerate.run(0, &mut VertexSet::empty(g.n()), 0, &VertexSet::empty(g.n()))?;
    Ok(out)
}

struct GammaEnumeration<'a> {
    g: &'a Graph,
    gamma: usize,
    work: Work,
    cap: usize,
    last_dominator: Vec<usize>,
    out: &'a mut Vec<VertexSet>,
}

impl GammaEnumeration<'_> {
    fn run(
        &mut self,
        start: usize,
        chosen: &mut VertexSet,
        chosen_size: usize,
        dominated: &VertexSet,
    ) -> Result<(), DominationError> {
        spend(&mut self.work)?;
        let undominated = dominated.complement();
        if chosen_size == self.gamma {
            if undominated.is_empty() {
                if self.out.len() >= self.cap {
                    return Err(DominationError::EnumerationCapExceeded { cap: self.cap });
                }
                self.out.push(chosen.clone());
            }
            return Ok(());
        }
        let remaining = self.gamma - chosen_size;
        if undominated.iter().any(|u| self.last_dominator[u] < start) {
            return Ok(());
        }
        if coverage_lower_bound(self.g, &undominated, start..self.g.n()) > remaining {
            return Ok(());
        }
        for v in start..self.g.n() {
            // a vertex covering nothing new cannot sit in a minimum
            // dominating set: dropping it would leave a smaller one
            if self.g.closed_neighbors(v).is_subset(dominated) {
                continue;
            }
            let mut next_dominated = dominated.clone();
            next_dominated.union_with(self.g.closed_neighbors(v));
            chosen.insert(v);
            self.run(v + 1, chosen, chosen_size + 1, &next_dominated)?;
            chosen.remove(v);
        }
        Ok(())
    }
}

/// `max_v |D ∩ N[v]|`: how concentrated the dominating set looks from the
/// busiest vertex. Errors when `d` does not dominate.
pub fn allegiance(g: &Graph, d: &VertexSet) -> Result<usize, DominationError> {
    if let Some(v) = first_undominated(g, d) {
        return Err(DominationError::NotDominating { undominated: v });
    }
    Ok(g
        .vertices()
        .map(|v| d.intersection_len(g.closed_neighbors(v)))
        .max()
        .expect("graph is nonempty"))
}

/// Minimum allegiance over all γ-sets, with the first minimizing set in
/// enumeration order as witness.
pub fn power_with_witness(g: &Graph, budget: &Budget) -> Result<(usize, VertexSet), DominationError> {
    let mut best: Option<(usize, VertexSet)> = None;
    for d in enumerate_gamma_sets(g, budget)? {
        let a = allegiance(g, &d).expect("enumerated sets dominate");
        if best.as_ref().is_none_or(|(b, _)| a < *b) {
            best = Some((a, d));
        }
    }
    Ok(best.expect("every nonempty graph has a gamma-set"))
}

pub fn power(g: &Graph, budget: &Budget) -> Result<usize, DominationError> {
    power_with_witness(g, budget).map(|(p, _)| p)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum WitnessKind {
    Clique,
    P3,
}

#[derive(Debug, Clone, Serialize)]
pub struct CliqueOrP3Witness {
    pub kind: WitnessKind,
    pub vertices: VertexSet,
}

/// Searches for a dominating set inducing a complete graph or a 3-vertex
/// path, by ascending cardinality (cliques before paths at size 3), so a
/// returned clique is a minimum dominating clique. `None` means no such set
/// exists.
pub fn dominating_clique_or_p3(
    g: &Graph,
    budget: &Budget,
) -> Result<Option<CliqueOrP3Witness>, DominationError> {
    let mut work = Work::new(budget);
    for size in 1..=g.n() {
        let mut chosen = VertexSet::empty(g.n());
        if let Some(vertices) =
            dominating_clique(g, size, g.full_vertex_set(), &mut chosen, &mut work)?
        {
            return Ok(Some(CliqueOrP3Witness {
                kind: WitnessKind::Clique,
                vertices,
            }));
        }
        if size == 3 {
            for a in 0..g.n() {
                for b in a + 1..g.n() {
                    for c in b + 1..g.n() {
                        spend(&mut work)?;
                        let edges = g.has_edge(a, b) as u8 + g.has_edge(a, c) as u8 + g.has_edge(b, c) as u8;
                        if edges != 2 {
                            continue;
                        }
                        let d = VertexSet::from_members(g.n(), [a, b, c]);
                        if dominates(g, &d) {
                            return Ok(Some(CliqueOrP3Witness {
                                kind: WitnessKind::P3,
                                vertices: d,
                            }));
                        }
                    }
                }
            }
        }
    }
    Ok(None)
}

fn dominating_clique(
    g: &Graph,
    size: usize,
    candidates: VertexSet,
    chosen: &mut VertexSet,
    work: &mut Work,
) -> Result<Option<VertexSet>, DominationError> {
    spend(work)?;
    if chosen.len() == size {
        return Ok(dominates(g, chosen).then(|| chosen.clone()));
    }
    if chosen.len() + candidates.len() < size {
        return Ok(None);
    }
    for v in candidates.iter() {
        let mut next = candidates.intersection(g.neighbors(v));
        next.remove_below(v + 1);
        chosen.insert(v);
        if let Some(hit) = dominating_clique(g, size, next, chosen, work)? {
            return Ok(Some(hit));
        }
        chosen.remove(v);
    }
    Ok(None)
}

/// Vertices outside `Γ` whose only `Γ`-neighbors are the positions in
/// `positions` (two or more of them).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SharedSet {
    pub positions: Vec<usize>,
    pub vertices: VertexSet,
}

/// Partition of `V − Γ` by open `Γ`-neighborhood: `private[i]` holds the
/// vertices seeing exactly `Γ[i]`, each [`SharedSet`] the vertices seeing
/// exactly that set of positions. Only nonempty shared sets are stored.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StructureDecomposition {
    pub gamma_set: Vec<usize>,
    pub private: Vec<VertexSet>,
    pub shared: Vec<SharedSet>,
}

impl StructureDecomposition {
    fn universe(&self) -> usize {
        self.private
            .first()
            .map(|s| s.universe())
            .expect("a dominating set is nonempty")
    }

    /// `Q_i`: the dominator at position `i` together with its private
    /// neighbors.
    pub fn cell(&self, i: usize) -> VertexSet {
        let mut q = self.private[i].clone();
        q.insert(self.gamma_set[i]);
        q
    }

    pub fn shared_for(&self, positions: &[usize]) -> Option<&VertexSet> {
        self.shared
            .iter()
            .find(|s| s.positions == positions)
            .map(|s| &s.vertices)
    }

    /// Union of the cells at `positions` plus every shared set whose
    /// position set lies inside `positions`.
    pub fn chamber(&self, positions: &[usize]) -> VertexSet {
        let mut out = VertexSet::empty(self.universe());
        for &i in positions {
            out.insert(self.gamma_set[i]);
            out.union_with(&self.private[i]);
        }
        for s in &self.shared {
            if s.positions.iter().all(|p| positions.contains(p)) {
                out.union_with(&s.vertices);
            }
        }
        out
    }
}

/// True when no two members of `d` are adjacent.
pub fn is_independent(g: &Graph, d: &VertexSet) -> bool {
    d.iter().all(|v| g.neighbors(v).is_disjoint(d))
}

pub fn decompose(g: &Graph, gamma_set: &[usize]) -> Result<StructureDecomposition, DominationError> {
    let mut gamma = VertexSet::empty(g.n());
    for &v in gamma_set {
        if v >= g.n() {
            return Err(DominationError::VertexOutOfRange { v, n: g.n() });
        }
        if gamma.contains(v) {
            return Err(DominationError::DuplicateVertex { v });
        }
        gamma.insert(v);
    }
    if let Some(v) = first_undominated(g, &gamma) {
        return Err(DominationError::NotDominating { undominated: v });
    }
    let mut private = vec![VertexSet::empty(g.n()); gamma_set.len()];
    let mut shared: BTreeMap<Vec<usize>, VertexSet> = BTreeMap::new();
    for w in g.vertices() {
        if gamma.contains(w) {
            continue;
        }
        let positions: Vec<usize> = gamma_set
            .iter()
            .enumerate()
            .filter(|&(_, &v)| g.has_edge(w, v))
            .map(|(i, _)| i)
            .collect();
        debug_assert!(
            !positions.is_empty(),
            "a dominated vertex outside the set has a neighbor in it"
        );
        if positions.len() == 1 {
            private[positions[0]].insert(w);
        } else {
            shared
                .entry(positions)
                .or_insert_with(|| VertexSet::empty(g.n()))
                .insert(w);
        }
    }
    Ok(StructureDecomposition {
        gamma_set: gamma_set.to_vec(),
        private,
        shared: shared
            .into_iter()
            .map(|(positions, vertices)| SharedSet { positions, vertices })
            .collect(),
    })
}
