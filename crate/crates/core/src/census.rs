use crate::graph::Graph;
use crate::graph6::encode_graph6;
use std::collections::BTreeSet;

/// Upper limit for the enumeration routines; the augmentation scheme is
/// exhaustive and the counts explode quickly past this.
pub const MAX_CENSUS_N: usize = 10;

/// Canonical key of a graph: the lexicographically smallest column-major
/// upper-triangle bit string over all vertex orderings. Entry `d` is the
/// adjacency column of the vertex placed at position `d + 1` toward the
/// vertices placed before it, earliest placement in the highest bit.
pub fn canonical_key(g: &Graph) -> Vec<u64> {
    canonicalize(g).0
}

/// The same graph relabeled into its canonical ordering.
pub fn canonical_form(g: &Graph) -> Graph {
    let (_, perm) = canonicalize(g);
    let n = g.n();
    let mut edges = Vec::new();
    for p in 0..n {
        for q in p + 1..n {
            if g.has_edge(perm[p], perm[q]) {
                edges.push((p, q));
            }
        }
    }
    Graph::from_edges(n, &edges).expect("relabeling keeps the graph simple")
}

fn canonicalize(g: &Graph) -> (Vec<u64>, Vec<usize>) {
    let n = g.n();
    assert!(n <= 64, "canonical labeling is for small graphs");
    if n <= 1 {
        return (Vec::new(), (0..n).collect());
    }
    let identity: Vec<usize> = (0..n).collect();
    let mut search = CanonSearch {
        g,
        perm: Vec::with_capacity(n),
        used: vec![false; n],
        best: (1..n).map(|v| column(g, &identity[..v], v)).collect(),
        best_perm: identity,
    };
    search.descend();
    (search.best, search.best_perm)
}

fn column(g: &Graph, placed: &[usize], v: usize) -> u64 {
    let mut col = 0;
    for &p in placed {
        col = col << 1 | g.has_edge(p, v) as u64;
    }
    col
}

struct CanonSearch<'a> {
    g: &'a Graph,
    perm: Vec<usize>,
    used: Vec<bool>,
    /// Incumbent key. Within the subtree of a strictly smaller column the
    /// tail is relaxed to all-ones, so the search below it proceeds on the
    /// equal-prefix invariant and rebuilds the tail column by column.
    best: Vec<u64>,
    best_perm: Vec<usize>,
}

impl CanonSearch<'_> {
    fn descend(&mut self) {
        let n = self.g.n();
        let depth = self.perm.len();
        if depth == n {
            // equal prefix all the way down: the incumbent equals this key,
            // only the ordering needs recording
            self.best_perm.copy_from_slice(&self.perm);
            return;
        }
        for v in 0..n {
            if self.used[v] {
                continue;
            }
            if depth > 0 {
                let col = column(self.g, &self.perm, v);
                match col.cmp(&self.best[depth - 1]) {
                    std::cmp::Ordering::Greater => continue,
                    std::cmp::Ordering::Less => {
                        self.best[depth - 1] = col;
                        for w in self.best[depth..].iter_mut() {
                            *w = u64::MAX;
                        }
                    }
                    std::cmp::Ordering::Equal => {}
                }
            }
            self.used[v] = true;
            self.perm.push(v);
            self.descend();
            self.perm.pop();
            self.used[v] = false;
        }
    }
}

fn dedup_level(children: impl IntoIterator<Item = Graph>) -> Vec<Graph> {
    let seen: BTreeSet<String> = children
        .into_iter()
        .map(|g| encode_graph6(&canonical_form(&g)).unwrap())
        .collect();
    seen.iter()
        .map(|s| crate::graph6::decode_graph6(s).unwrap())
        .collect()
}

/// All connected graphs on exactly `n` vertices, one per isomorphism class,
/// in canonical form, sorted by graph6 encoding. Grown by attaching a new
/// vertex to every nonempty subset of a smaller member: every connected
/// graph has a vertex whose removal keeps it connected, so each class on
/// `n` vertices is reached.
pub fn connected_graphs(n: usize) -> Vec<Graph> {
    assert!((1..=MAX_CENSUS_N).contains(&n));
    let mut level = vec![Graph::from_edges(1, &[]).unwrap()];
    for size in 2..=n {
        let children = level.iter().flat_map(|parent| {
            let base = parent.edges();
            (1u64..1 << (size - 1)).map(move |mask| {
                let mut edges = base.clone();
                for u in 0..size - 1 {
                    if mask >> u & 1 == 1 {
                        edges.push((u, size - 1));
                    }
                }
                Graph::from_edges(size, &edges).unwrap()
            })
        });
        level = dedup_level(children);
    }
    level
}

/// All trees on exactly `n` vertices, one per isomorphism class, in
/// canonical form, sorted by graph6 encoding. Grown by leaf attachment.
pub fn trees(n: usize) -> Vec<Graph> {
    assert!((1..=MAX_CENSUS_N).contains(&n));
    let mut level = vec![Graph::from_edges(1, &[]).unwrap()];
    for size in 2..=n {
        let children = level.iter().flat_map(|parent| {
            let base = parent.edges();
            (0..size - 1).map(move |u| {
                let mut edges = base.clone();
                edges.push((u, size - 1));
                Graph::from_edges(size, &edges).unwrap()
            })
        });
        level = dedup_level(children);
    }
    level
}
