use crate::bitset::VertexSet;
use std::collections::VecDeque;
use thiserror::Error;

/// Largest vertex count a Cartesian product may have unless the caller raises
/// the cap explicitly.
pub const DEFAULT_PRODUCT_CAP: usize = 1024;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("graph must have at least one vertex")]
    EmptyGraph,
    #[error("vertex {v} out of range for graph on {n} vertices")]
    VertexOutOfRange { v: usize, n: usize },
    #[error("self-loop at vertex {v}")]
    SelfLoop { v: usize },
    #[error("duplicate edge {{{u},{v}}}")]
    DuplicateEdge { u: usize, v: usize },
    #[error("product would have {vertices} vertices, above the cap of {cap}")]
    ProductTooLarge { vertices: usize, cap: usize },
    #[error("graph is disconnected")]
    Disconnected,
    #[error("bad generator spec: {0}")]
    BadGenerator(String),
}

/// Simple undirected graph on vertices `0..n`, with both open and closed
/// neighborhoods kept as bitsets.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    adj: Vec<VertexSet>,
    closed: Vec<VertexSet>,
}

impl Graph {
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Graph, GraphError> {
        if n == 0 {
            return Err(GraphError::EmptyGraph);
        }
        let mut adj = vec![VertexSet::empty(n); n];
        for &(u, v) in edges {
            for w in [u, v] {
                if w >= n {
                    return Err(GraphError::VertexOutOfRange { v: w, n });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop { v: u });
            }
            if adj[u].contains(v) {
                return Err(GraphError::DuplicateEdge { u, v });
            }
            adj[u].insert(v);
            adj[v].insert(u);
        }
        let closed = adj
            .iter()
            .enumerate()
            .map(|(v, nb)| {
                let mut c = nb.clone();
                c.insert(v);
                c
            })
            .collect();
        Ok(Graph { n, adj, closed })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn vertices(&self) -> std::ops::Range<usize> {
        0..self.n
    }

    pub fn neighbors(&self, v: usize) -> &VertexSet {
        &self.adj[v]
    }

    pub fn closed_neighbors(&self, v: usize) -> &VertexSet {
        &self.closed[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].contains(v)
    }

    /// Edges as `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for u in 0..self.n {
            for v in self.adj[u].iter() {
                if u < v {
                    out.push((u, v));
                }
            }
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|s| s.len()).sum::<usize>() / 2
    }

    pub fn full_vertex_set(&self) -> VertexSet {
        VertexSet::full(self.n)
    }

    /// BFS distances from `from`; unreachable vertices come back as `None`.
    pub fn distances_from(&self, from: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.n];
        dist[from] = Some(0);
        let mut queue = VecDeque::from([from]);
        while let Some(u) = queue.pop_front() {
            let du = dist[u].unwrap();
            for v in self.adj[u].iter() {
                if dist[v].is_none() {
                    dist[v] = Some(du + 1);
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    pub fn is_connected(&self) -> bool {
        self.distances_from(0).iter().all(|d| d.is_some())
    }

    pub fn eccentricity(&self, v: usize) -> Result<usize, GraphError> {
        self.distances_from(v)
            .into_iter()
            .map(|d| d.ok_or(GraphError::Disconnected))
            .try_fold(0, |acc, d| Ok(acc.max(d?)))
    }

    pub fn diameter(&self) -> Result<usize, GraphError> {
        (0..self.n).try_fold(0, |acc, v| Ok(acc.max(self.eccentricity(v)?)))
    }
}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Graph(n={}, edges={:?})", self.n, self.edges())
    }
}

pub fn path(n: usize) -> Result<Graph, GraphError> {
    let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
    Graph::from_edges(n, &edges)
}

pub fn cycle(n: usize) -> Result<Graph, GraphError> {
    if n < 3 {
        return Err(GraphError::BadGenerator(format!(
            "cycle needs at least 3 vertices, got {n}"
        )));
    }
    let mut edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
    edges.push((n - 1, 0));
    Graph::from_edges(n, &edges)
}

pub fn complete(n: usize) -> Result<Graph, GraphError> {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            edges.push((u, v));
        }
    }
    Graph::from_edges(n, &edges)
}

/// Star `K_{1,r}` on `r + 1` vertices; the center is vertex 0.
pub fn star(r: usize) -> Result<Graph, GraphError> {
    if r < 1 {
        return Err(GraphError::BadGenerator(
            "star needs at least 1 leaf".into(),
        ));
    }
    let edges: Vec<_> = (1..=r).map(|i| (0, i)).collect();
    Graph::from_edges(r + 1, &edges)
}

/// `K_{a,b}` with parts `0..a` and `a..a+b`.
pub fn complete_bipartite(a: usize, b: usize) -> Result<Graph, GraphError> {
    if a < 1 || b < 1 {
        return Err(GraphError::BadGenerator(
            "complete_bipartite needs both parts nonempty".into(),
        ));
    }
    let mut edges = Vec::new();
    for u in 0..a {
        for v in a..a + b {
            edges.push((u, v));
        }
    }
    Graph::from_edges(a + b, &edges)
}

/// Builds a graph from a `name:params` spec such as `path:6`, `cycle:5`,
/// `complete:4`, `star:3`, or `complete_bipartite:2,3`.
pub fn generate(spec: &str) -> Result<Graph, GraphError> {
    let bad = |msg: &str| GraphError::BadGenerator(format!("{spec:?}: {msg}"));
    let (name, params) = spec
        .split_once(':')
        .ok_or_else(|| bad("expected name:params"))?;
    let nums: Vec<usize> = params
        .split(',')
        .map(|p| p.trim().parse::<usize>())
        .collect::<Result<_, _>>()
        .map_err(|e| bad(&format!("bad parameter: {e}")))?;
    let want = |k: usize| {
        if nums.len() == k {
            Ok(())
        } else {
            Err(bad(&format!("expected {k} parameter(s), got {}", nums.len())))
        }
    };
    match name {
        "path" => want(1).and_then(|_| path(nums[0])),
        "cycle" => want(1).and_then(|_| cycle(nums[0])),
        "complete" => want(1).and_then(|_| complete(nums[0])),
        "star" => want(1).and_then(|_| star(nums[0])),
        "complete_bipartite" => want(2).and_then(|_| complete_bipartite(nums[0], nums[1])),
        other => Err(bad(&format!("unknown generator {other:?}"))),
    }
}

/// Cartesian product. Vertex `(u, v)` of `g x h` gets index `u * h.n() + v`;
/// copies of `h` sit at consecutive indices.
pub fn cartesian_product(g: &Graph, h: &Graph, cap: usize) -> Result<Graph, GraphError> {
    let vertices = g.n() * h.n();
    if vertices > cap {
        return Err(GraphError::ProductTooLarge { vertices, cap });
    }
    let hn = h.n();
    let mut edges = Vec::with_capacity(g.n() * h.edge_count() + h.n() * g.edge_count());
    for u in g.vertices() {
        for (a, b) in h.edges() {
            edges.push((u * hn + a, u * hn + b));
        }
    }
    for (u, w) in g.edges() {
        for v in h.vertices() {
            edges.push((u * hn + v, w * hn + v));
        }
    }
    Graph::from_edges(vertices, &edges)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn from_edges_validates() {
        assert_eq!(Graph::from_edges(0, &[]), Err(GraphError::EmptyGraph));
        assert_eq!(
            Graph::from_edges(3, &[(0, 0)]),
            Err(GraphError::SelfLoop { v: 0 })
        );
        assert_eq!(
            Graph::from_edges(3, &[(0, 1), (1, 0)]),
            Err(GraphError::DuplicateEdge { u: 1, v: 0 })
        );
        assert_eq!(
            Graph::from_edges(3, &[(0, 3)]),
            Err(GraphError::VertexOutOfRange { v: 3, n: 3 })
        );
    }

    #[test]
    fn generator_shapes() {
        let p4 = path(4).unwrap();
        assert_eq!(p4.edges(), vec![(0, 1), (1, 2), (2, 3)]);
        let c5 = cycle(5).unwrap();
        assert_eq!(c5.edge_count(), 5);
        assert!(c5.has_edge(4, 0));
        let k4 = complete(4).unwrap();
        assert_eq!(k4.edge_count(), 6);
        let s3 = star(3).unwrap();
        assert_eq!(s3.n(), 4);
        assert_eq!(s3.degree(0), 3);
        assert_eq!(s3.degree(1), 1);
        let k23 = complete_bipartite(2, 3).unwrap();
        assert_eq!(k23.edge_count(), 6);
        assert!(!k23.has_edge(0, 1));
        assert!(k23.has_edge(0, 2));
        assert!(cycle(2).is_err());
        assert!(star(0).is_err());
    }

    #[test]
    fn generate_specs() {
        assert_eq!(generate("path:6").unwrap().n(), 6);
        assert_eq!(generate("complete_bipartite:2,3").unwrap().n(), 5);
        assert!(generate("path").is_err());
        assert!(generate("path:x").is_err());
        assert!(generate("path:1,2").is_err());
        assert!(generate("blob:3").is_err());
    }

    #[test]
    fn closed_neighborhoods() {
        let p3 = path(3).unwrap();
        assert_eq!(p3.neighbors(1).to_vec(), vec![0, 2]);
        assert_eq!(p3.closed_neighbors(1).to_vec(), vec![0, 1, 2]);
        assert_eq!(p3.closed_neighbors(0).to_vec(), vec![0, 1]);
    }

    #[test]
    fn product_edge_count_and_indexing() {
        let c4 = cycle(4).unwrap();
        let k2 = complete(2).unwrap();
        let q = cartesian_product(&c4, &k2, DEFAULT_PRODUCT_CAP).unwrap();
        assert_eq!(q.n(), 8);
        assert_eq!(q.edge_count(), c4.n() * k2.edge_count() + k2.n() * c4.edge_count());
        // (u,v) with v in the K2 layer: vertex (1,0) is index 2, (1,1) is 3
        assert!(q.has_edge(2, 3));
        // (0,0)-(1,0) along the cycle
        assert!(q.has_edge(0, 2));
        assert!(!q.has_edge(0, 3));
    }

    #[test]
    fn product_with_k1_is_identity() {
        let h = cycle(5).unwrap();
        let k1 = complete(1).unwrap();
        assert_eq!(cartesian_product(&k1, &h, 64).unwrap(), h);
        assert_eq!(cartesian_product(&h, &k1, 64).unwrap(), h);
    }

    #[test]
    fn product_cap() {
        let k40 = complete(40).unwrap();
        assert_eq!(
            cartesian_product(&k40, &k40, 1024),
            Err(GraphError::ProductTooLarge {
                vertices: 1600,
                cap: 1024
            })
        );
    }

    #[test]
    fn metrics() {
        let p5 = path(5).unwrap();
        assert_eq!(
            p5.distances_from(0),
            vec![Some(0), Some(1), Some(2), Some(3), Some(4)]
        );
        assert_eq!(p5.eccentricity(2).unwrap(), 2);
        assert_eq!(p5.diameter().unwrap(), 4);
        assert_eq!(cycle(6).unwrap().diameter().unwrap(), 3);
        assert_eq!(complete(1).unwrap().diameter().unwrap(), 0);

        let two = Graph::from_edges(2, &[]).unwrap();
        assert!(!two.is_connected());
        assert_eq!(two.diameter(), Err(GraphError::Disconnected));
        assert_eq!(two.eccentricity(0), Err(GraphError::Disconnected));
    }
}
