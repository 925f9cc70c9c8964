use crate::bitset::VertexSet;
use crate::graph::Graph;
use crate::{Budget, Work};
use serde::Serialize;
use thiserror::Error;

/// Hard guard for the brute-force fair domination number: the family search
/// is super-exponential in the vertex count.
pub const MAX_FAIR_BRUTEFORCE_N: usize = 7;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FairError {
    #[error("no sets given")]
    NoSets,
    #[error("set {index} is empty")]
    EmptySet { index: usize },
    #[error("sets {a} and {b} overlap at vertex {v}")]
    Overlap { a: usize, b: usize, v: usize },
    #[error("vertex {v} out of range for graph on {n} vertices")]
    VertexOutOfRange { v: usize, n: usize },
    #[error("graph is disconnected")]
    Disconnected,
    #[error("graph has {n} vertices, above the brute-force guard of {max}")]
    TooLarge { n: usize, max: usize },
    #[error("verification budget exhausted while working on set choice {choice:?}")]
    BudgetExhausted { choice: Vec<usize> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "construction", rename_all = "snake_case")]
pub enum Provenance {
    /// Built by the diameter level-set constructor.
    LevelSets { residue: u8, origin: usize },
    UserSupplied,
}

/// An ordered family `S_1..S_k` of disjoint nonempty vertex sets, with
/// `Z` holding the leftover vertices. `verified` is stamped only by
/// [`verify_fair_reception`].
#[derive(Debug, Clone, Serialize)]
pub struct FairReception {
    pub sets: Vec<VertexSet>,
    pub z: VertexSet,
    pub k: usize,
    pub verified: bool,
    pub provenance: Provenance,
}

impl FairReception {
    pub fn new(g: &Graph, sets: Vec<VertexSet>) -> Result<FairReception, FairError> {
        if sets.is_empty() {
            return Err(FairError::NoSets);
        }
        let mut union = VertexSet::empty(g.n());
        for (i, s) in sets.iter().enumerate() {
            if s.is_empty() {
                return Err(FairError::EmptySet { index: i });
            }
            if let Some(v) = s.iter().find(|&v| union.contains(v)) {
                let a = sets[..i]
                    .iter()
                    .position(|t| t.contains(v))
                    .expect("overlap vertex is in an earlier set");
                return Err(FairError::Overlap { a, b: i, v });
            }
            union.union_with(s);
        }
        Ok(FairReception {
            z: union.complement(),
            k: sets.len(),
            sets,
            verified: false,
            provenance: Provenance::UserSupplied,
        })
    }

    /// Builds from plain vertex lists, range-checking each entry.
    pub fn from_vertex_lists(g: &Graph, lists: &[Vec<usize>]) -> Result<FairReception, FairError> {
        let mut sets = Vec::with_capacity(lists.len());
        for list in lists {
            let mut s = VertexSet::empty(g.n());
            for &v in list {
                if v >= g.n() {
                    return Err(FairError::VertexOutOfRange { v, n: g.n() });
                }
                s.insert(v);
            }
            sets.push(s);
        }
        FairReception::new(g, sets)
    }
}

/// `D` externally dominates `A` when every vertex of `A` has a neighbor in
/// `D − A`.
pub fn externally_dominates(g: &Graph, d: &VertexSet, a: &VertexSet) -> bool {
    let outside = d.difference(a);
    a.iter().all(|v| !g.neighbors(v).is_disjoint(&outside))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FairCounterexample {
    /// Indices of the chosen sets.
    pub choice: Vec<usize>,
    /// A set externally dominating the chosen union with too small a score.
    pub witness: VertexSet,
    pub score: usize,
    pub required: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum FairVerdict {
    Verified,
    Failed { counterexample: FairCounterexample },
}

/// Checks Definition-style fairness: for every choice of `ℓ` sets, every
/// `D` externally dominating their union has fair score
/// `|D∩Z| + Σ_j (|S_j∩D| − 1)` at least `ℓ`. On success the reception's
/// `verified` flag is set. Choices are scanned by ascending `ℓ`, then
/// lexicographically; the first failing choice is reported with a
/// minimum-score witness.
pub fn verify_fair_reception(
    g: &Graph,
    fr: &mut FairReception,
    budget: &Budget,
) -> Result<FairVerdict, FairError> {
    let mut work = Work::new(budget);
    match find_counterexample(g, &fr.sets, &fr.z, &mut work)? {
        None => {
            fr.verified = true;
            Ok(FairVerdict::Verified)
        }
        Some(counterexample) => Ok(FairVerdict::Failed { counterexample }),
    }
}

pub(crate) fn find_counterexample(
    g: &Graph,
    sets: &[VertexSet],
    z: &VertexSet,
    work: &mut Work,
) -> Result<Option<FairCounterexample>, FairError> {
    let mut set_of = vec![None; g.n()];
    for (j, s) in sets.iter().enumerate() {
        for v in s.iter() {
            set_of[v] = Some(j);
        }
    }
    let mut checker = Checker {
        g,
        sets,
        z,
        set_of,
        work,
    };
    for ell in 1..=sets.len() {
        let mut choice = Vec::with_capacity(ell);
        if let Some(cex) = checker.choices(0, ell, &mut choice)? {
            return Ok(Some(cex));
        }
    }
    Ok(None)
}

struct Checker<'a> {
    g: &'a Graph,
    sets: &'a [VertexSet],
    z: &'a VertexSet,
    set_of: Vec<Option<usize>>,
    work: &'a mut Work,
}

impl Checker<'_> {
    fn spend(&mut self, choice: &[usize]) -> Result<(), FairError> {
        if self.work.spend() {
            Ok(())
        } else {
            Err(FairError::BudgetExhausted {
                choice: choice.to_vec(),
            })
        }
    }

    fn choices(
        &mut self,
        start: usize,
        remaining: usize,
        choice: &mut Vec<usize>,
    ) -> Result<Option<FairCounterexample>, FairError> {
        if remaining == 0 {
            return self.check_choice(choice);
        }
        for i in start..=self.sets.len() - remaining {
            choice.push(i);
            if let Some(cex) = self.choices(i + 1, remaining - 1, choice)? {
                return Ok(Some(cex));
            }
            choice.pop();
        }
        Ok(None)
    }

    fn check_choice(&mut self, choice: &[usize]) -> Result<Option<FairCounterexample>, FairError> {
        self.spend(choice)?;
        let mut a = VertexSet::empty(self.g.n());
        for &i in choice {
            a.union_with(&self.sets[i]);
        }
        // a vertex with all neighbors inside the union can never be
        // externally dominated, so the condition holds vacuously
        if a.iter().any(|v| self.g.neighbors(v).is_subset(&a)) {
            return Ok(None);
        }
        // a minimum-score external dominator never needs vertices outside
        // N(A) − A: members of A do not help and only raise the score, and
        // the same goes for vertices seeing no one in A
        let mut candidates = VertexSet::empty(self.g.n());
        for v in a.iter() {
            candidates.union_with(self.g.neighbors(v));
        }
        candidates.difference_with(&a);
        let candidates = candidates.to_vec();

        let ell = choice.len();
        let mut best: Option<(usize, VertexSet)> = None;
        let mut current = VertexSet::empty(self.g.n());
        self.min_score(&a, &candidates, 0, &mut current, 0, ell, &mut best, choice)?;
        Ok(best.map(|(score, witness)| FairCounterexample {
            choice: choice.to_vec(),
            witness,
            score,
            required: ell,
        }))
    }

    /// Branch and bound for the smallest fair score among external
    /// dominators, caring only about scores below `ell`. The score is
    /// monotone under adding vertices, which gives the prune; inclusion is
    /// tried before exclusion so earlier-member witnesses surface first.
    #[allow(clippy::too_many_arguments)]
    fn min_score(
        &mut self,
        a: &VertexSet,
        candidates: &[usize],
        idx: usize,
        current: &mut VertexSet,
        score: usize,
        ell: usize,
        best: &mut Option<(usize, VertexSet)>,
        choice: &[usize],
    ) -> Result<(), FairError> {
        self.spend(choice)?;
        let bound = best.as_ref().map_or(ell, |(s, _)| *s);
        if score >= bound {
            return Ok(());
        }
        if idx == candidates.len() {
            if externally_dominates(self.g, current, a) {
                *best = Some((score, current.clone()));
            }
            return Ok(());
        }
        let v = candidates[idx];
        let delta = if self.z.contains(v) {
            1
        } else {
            let j = self.set_of[v].expect("non-Z vertex belongs to a set");
            usize::from(current.intersection_len(&self.sets[j]) > 0)
        };
        current.insert(v);
        self.min_score(a, candidates, idx + 1, current, score + delta, ell, best, choice)?;
        current.remove(v);
        self.min_score(a, candidates, idx + 1, current, score, ell, best, choice)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LevelSets {
    pub origin: usize,
    /// `levels[i]` holds the vertices at distance `i` from the origin.
    pub levels: Vec<VertexSet>,
}

pub fn build_level_sets(g: &Graph, origin: usize) -> Result<LevelSets, FairError> {
    if origin >= g.n() {
        return Err(FairError::VertexOutOfRange {
            v: origin,
            n: g.n(),
        });
    }
    let dist = g.distances_from(origin);
    let mut levels: Vec<VertexSet> = Vec::new();
    for (v, d) in dist.iter().enumerate() {
        let d = d.ok_or(FairError::Disconnected)?;
        if levels.len() <= d {
            levels.resize(d + 1, VertexSet::empty(g.n()));
        }
        levels[d].insert(v);
    }
    Ok(LevelSets { origin, levels })
}

/// Groups the BFS levels from the lowest-index diametral vertex into
/// `⌊d/3⌋ + 1` sets with `Z = ∅`: a leading pair of levels when
/// `d mod 3 ≠ 2`, then consecutive level triples, and for `d mod 3 = 0` a
/// trailing pair.
pub fn level_set_fair_reception(g: &Graph) -> Result<FairReception, FairError> {
    let diameter = g.diameter().map_err(|_| FairError::Disconnected)?;
    let origin = g
        .vertices()
        .find(|&v| g.eccentricity(v).expect("connectivity checked") == diameter)
        .expect("some vertex attains the diameter");
    let levels = build_level_sets(g, origin)?.levels;
    debug_assert_eq!(levels.len(), diameter + 1);

    let mut grouped: Vec<VertexSet> = Vec::with_capacity(diameter / 3 + 1);
    let take = |range: std::ops::Range<usize>| {
        let mut s = VertexSet::empty(g.n());
        for i in range {
            s.union_with(&levels[i]);
        }
        s
    };
    match diameter % 3 {
        0 if diameter == 0 => grouped.push(take(0..1)),
        0 => {
            grouped.push(take(0..2));
            let mut i = 2;
            while i + 3 < diameter {
                grouped.push(take(i..i + 3));
                i += 3;
            }
            grouped.push(take(diameter - 1..diameter + 1));
        }
        _ => {
            let mut i = if diameter % 3 == 1 {
                grouped.push(take(0..2));
                2
            } else {
                0
            };
            while i <= diameter {
                grouped.push(take(i..i + 3));
                i += 3;
            }
        }
    }
    debug_assert_eq!(grouped.len(), diameter / 3 + 1);

    let mut fr = FairReception::new(g, grouped)?;
    fr.provenance = Provenance::LevelSets {
        residue: (diameter % 3) as u8,
        origin,
    };
    debug_assert!(fr.z.is_empty());
    Ok(fr)
}

/// Exact fair domination number by exhausting all families of disjoint
/// nonempty sets (assignments with a distinguished leftover class) and
/// keeping the largest verified size. Guarded to at most
/// [`MAX_FAIR_BRUTEFORCE_N`] vertices.
pub fn fair_domination_number_bruteforce(g: &Graph, budget: &Budget) -> Result<usize, FairError> {
    let n = g.n();
    if n > MAX_FAIR_BRUTEFORCE_N {
        return Err(FairError::TooLarge {
            n,
            max: MAX_FAIR_BRUTEFORCE_N,
        });
    }
    let mut work = Work::new(budget);
    let mut assign = vec![0usize; n];
    let mut best = 0;
    families(g, &mut assign, 0, 0, &mut best, &mut work)?;
    Ok(best)
}

/// Restricted-growth enumeration: class 0 is the leftover `Z`, classes
/// `1..=kmax` are the sets in order of first appearance, so each family is
/// produced exactly once.
fn families(
    g: &Graph,
    assign: &mut Vec<usize>,
    v: usize,
    kmax: usize,
    best: &mut usize,
    work: &mut Work,
) -> Result<(), FairError> {
    let n = g.n();
    if v == n {
        // a family can only improve the maximum when it is larger than the
        // best verified one so far
        if kmax <= *best {
            return Ok(());
        }
        let mut sets = vec![VertexSet::empty(n); kmax];
        let mut z = VertexSet::empty(n);
        for (u, &c) in assign.iter().enumerate() {
            if c == 0 {
                z.insert(u);
            } else {
                sets[c - 1].insert(u);
            }
        }
        if find_counterexample(g, &sets, &z, work)?.is_none() {
            *best = kmax;
        }
        return Ok(());
    }
    for class in 0..=kmax + 1 {
        assign[v] = class;
        families(g, assign, v + 1, kmax.max(class), best, work)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{complete, cycle, path, star, Graph};

    fn b() -> Budget {
        Budget::default()
    }

    fn vs(n: usize, members: &[usize]) -> VertexSet {
        VertexSet::from_members(n, members.iter().copied())
    }

    #[test]
    fn external_domination_cases() {
        let c4 = cycle(4).unwrap();
        assert!(externally_dominates(&c4, &vs(4, &[1]), &vs(4, &[])));
        assert!(externally_dominates(&c4, &vs(4, &[1]), &vs(4, &[0])));
        let p4 = path(4).unwrap();
        assert!(!externally_dominates(&p4, &vs(4, &[0, 1]), &vs(4, &[0, 1])));
    }

    #[test]
    fn construction_validates() {
        let c4 = cycle(4).unwrap();
        assert!(matches!(
            FairReception::new(&c4, vec![]),
            Err(FairError::NoSets)
        ));
        assert!(matches!(
            FairReception::new(&c4, vec![vs(4, &[])]),
            Err(FairError::EmptySet { index: 0 })
        ));
        assert!(matches!(
            FairReception::new(&c4, vec![vs(4, &[0, 1]), vs(4, &[1, 2])]),
            Err(FairError::Overlap { a: 0, b: 1, v: 1 })
        ));
        assert!(matches!(
            FairReception::from_vertex_lists(&c4, &[vec![0, 9]]),
            Err(FairError::VertexOutOfRange { v: 9, n: 4 })
        ));
        let fr = FairReception::from_vertex_lists(&c4, &[vec![0], vec![2]]).unwrap();
        assert_eq!(fr.k, 2);
        assert_eq!(fr.z.to_vec(), vec![1, 3]);
        assert!(!fr.verified);
    }

    #[test]
    fn whole_vertex_set_is_fair() {
        let g = cycle(5).unwrap();
        let mut fr = FairReception::new(&g, vec![g.full_vertex_set()]).unwrap();
        assert_eq!(verify_fair_reception(&g, &mut fr, &b()).unwrap(), FairVerdict::Verified);
        assert!(fr.verified);
    }

    #[test]
    fn c4_singleton_pair_fails_at_two() {
        let c4 = cycle(4).unwrap();
        let mut fr = FairReception::from_vertex_lists(&c4, &[vec![0], vec![2]]).unwrap();
        let verdict = verify_fair_reception(&c4, &mut fr, &b()).unwrap();
        let FairVerdict::Failed { counterexample } = verdict else {
            panic!("expected failure");
        };
        assert_eq!(counterexample.choice, vec![0, 1]);
        assert_eq!(counterexample.required, 2);
        assert_eq!(counterexample.score, 1);
        assert_eq!(counterexample.witness.to_vec(), vec![1]);
        assert!(!fr.verified);
    }

    #[test]
    fn level_sets_small_cases() {
        let p4 = path(4).unwrap();
        let ls = build_level_sets(&p4, 0).unwrap();
        assert_eq!(ls.levels.iter().map(|l| l.len()).collect::<Vec<_>>(), vec![1, 1, 1, 1]);
        let s3 = star(3).unwrap();
        let ls = build_level_sets(&s3, 0).unwrap();
        assert_eq!(ls.levels.iter().map(|l| l.len()).collect::<Vec<_>>(), vec![1, 3]);
        let c6 = cycle(6).unwrap();
        let ls = build_level_sets(&c6, 0).unwrap();
        assert_eq!(ls.levels.iter().map(|l| l.len()).collect::<Vec<_>>(), vec![1, 2, 2, 1]);
        let two = Graph::from_edges(2, &[]).unwrap();
        assert_eq!(build_level_sets(&two, 0), Err(FairError::Disconnected));
    }

    #[test]
    fn level_reception_residue_zero() {
        let p7 = path(7).unwrap();
        let fr = level_set_fair_reception(&p7).unwrap();
        assert_eq!(fr.k, 3);
        assert_eq!(fr.sets[0].to_vec(), vec![0, 1]);
        assert_eq!(fr.sets[1].to_vec(), vec![2, 3, 4]);
        assert_eq!(fr.sets[2].to_vec(), vec![5, 6]);
        assert!(fr.z.is_empty());
        assert_eq!(
            fr.provenance,
            Provenance::LevelSets {
                residue: 0,
                origin: 0
            }
        );
    }

    #[test]
    fn level_reception_residue_one_and_two() {
        let p2 = path(2).unwrap();
        let fr = level_set_fair_reception(&p2).unwrap();
        assert_eq!(fr.k, 1);
        assert_eq!(fr.sets[0].to_vec(), vec![0, 1]);

        let p5 = path(5).unwrap();
        let fr = level_set_fair_reception(&p5).unwrap();
        assert_eq!(fr.k, 2);
        assert_eq!(fr.sets[0].to_vec(), vec![0, 1]);
        assert_eq!(fr.sets[1].to_vec(), vec![2, 3, 4]);

        let p3 = path(3).unwrap();
        let fr = level_set_fair_reception(&p3).unwrap();
        assert_eq!(fr.k, 1);
        assert_eq!(fr.sets[0].to_vec(), vec![0, 1, 2]);

        let k1 = complete(1).unwrap();
        let fr = level_set_fair_reception(&k1).unwrap();
        assert_eq!(fr.k, 1);
        assert_eq!(fr.sets[0].to_vec(), vec![0]);
    }

    #[test]
    fn level_receptions_verify() {
        for g in [
            path(2).unwrap(),
            path(5).unwrap(),
            path(7).unwrap(),
            cycle(6).unwrap(),
            cycle(7).unwrap(),
            cycle(12).unwrap(),
            star(4).unwrap(),
            complete(5).unwrap(),
        ] {
            let mut fr = level_set_fair_reception(&g).unwrap();
            let d = g.diameter().unwrap();
            assert_eq!(fr.k, d / 3 + 1);
            assert_eq!(
                verify_fair_reception(&g, &mut fr, &b()).unwrap(),
                FairVerdict::Verified
            );
        }
    }

    #[test]
    fn fair_domination_small_cases() {
        assert_eq!(fair_domination_number_bruteforce(&complete(1).unwrap(), &b()).unwrap(), 1);
        assert_eq!(fair_domination_number_bruteforce(&complete(3).unwrap(), &b()).unwrap(), 1);
        assert_eq!(fair_domination_number_bruteforce(&path(4).unwrap(), &b()).unwrap(), 2);
    }

    #[test]
    fn fair_domination_guard() {
        assert_eq!(
            fair_domination_number_bruteforce(&path(8).unwrap(), &b()),
            Err(FairError::TooLarge { n: 8, max: 7 })
        );
    }

    #[test]
    fn verifier_budget() {
        let c4 = cycle(4).unwrap();
        let mut fr = FairReception::from_vertex_lists(&c4, &[vec![0], vec![2]]).unwrap();
        let starved = Budget {
            max_nodes: 0,
            ..Budget::default()
        };
        assert_eq!(
            verify_fair_reception(&c4, &mut fr, &starved),
            Err(FairError::BudgetExhausted { choice: vec![0] })
        );
    }
}
