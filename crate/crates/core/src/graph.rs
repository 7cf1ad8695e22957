//! Undirected graph representation, benchmark-family generators, and
//! conductance/volume computations.
//!
//! Graphs are simple (no self-loops, no parallel edges) and immutable after
//! construction; adjacency lists are sorted so lookups can binary-search.

use std::collections::BTreeSet;
use std::fmt;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Attempts before the pairing-model regular-graph sampler gives up.
const RANDOM_REGULAR_RETRY_CAP: usize = 1000;

/// Simple undirected graph with sorted adjacency lists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adjacency: Vec<Vec<usize>>,
    edge_count: usize,
}

impl Graph {
    /// Builds a graph from an unordered edge list, validating endpoints,
    /// rejecting self-loops and duplicate edges (in either orientation).
    pub fn from_edge_list(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if n == 0 {
            return Err(Error::InfeasibleParams("graph needs at least one node".into()));
        }
        if edges.is_empty() {
            return Err(Error::InfeasibleParams("graph needs at least one edge".into()));
        }
        let mut adjacency = vec![Vec::new(); n];
        let mut seen = BTreeSet::new();
        for &(a, b) in edges {
            if a >= n {
                return Err(Error::OutOfRange { id: a, n });
            }
            if b >= n {
                return Err(Error::OutOfRange { id: b, n });
            }
            if a == b {
                return Err(Error::SelfLoop(a));
            }
            let (u, v) = if a < b { (a, b) } else { (b, a) };
            if !seen.insert((u, v)) {
                return Err(Error::DuplicateEdge(u, v));
            }
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        Ok(Graph { adjacency, edge_count: edges.len() })
    }

    pub fn node_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    /// Volume of the full vertex set, `2m`.
    pub fn total_volume(&self) -> usize {
        2 * self.edge_count
    }

    pub fn degree(&self, u: usize) -> usize {
        self.adjacency[u].len()
    }

    pub fn neighbors(&self, u: usize) -> &[usize] {
        &self.adjacency[u]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.node_count() && self.adjacency[u].binary_search(&v).is_ok()
    }

    /// Iterates all edges as `(u, v)` pairs with `u < v`, ascending.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adjacency.iter().enumerate().flat_map(|(u, nbrs)| {
            nbrs.iter().filter(move |&&v| v > u).map(move |&v| (u, v))
        })
    }

    /// Hop distances from `src`; `None` for unreachable nodes.
    pub fn bfs_distances(&self, src: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.node_count()];
        let mut queue = std::collections::VecDeque::new();
        dist[src] = Some(0);
        queue.push_back(src);
        while let Some(u) = queue.pop_front() {
            let du = dist[u].unwrap();
            for &v in &self.adjacency[u] {
                if dist[v].is_none() {
                    dist[v] = Some(du + 1);
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    pub fn is_connected(&self) -> bool {
        self.bfs_distances(0).iter().all(|d| d.is_some())
    }

    /// Returns `Some(d)` when every node has degree `d`.
    pub fn is_regular(&self) -> Option<usize> {
        let d = self.degree(0);
        if self.adjacency.iter().all(|nbrs| nbrs.len() == d) {
            Some(d)
        } else {
            None
        }
    }

    /// Two-colorability check; every component is examined.
    pub fn is_bipartite(&self) -> bool {
        let n = self.node_count();
        let mut color = vec![None; n];
        for start in 0..n {
            if color[start].is_some() {
                continue;
            }
            color[start] = Some(false);
            let mut queue = std::collections::VecDeque::from([start]);
            while let Some(u) = queue.pop_front() {
                let cu = color[u].unwrap();
                for &v in &self.adjacency[u] {
                    match color[v] {
                        None => {
                            color[v] = Some(!cu);
                            queue.push_back(v);
                        }
                        Some(cv) if cv == cu => return false,
                        Some(_) => {}
                    }
                }
            }
        }
        true
    }

    /// Maximum eccentricity; `None` when the graph is disconnected.
    pub fn diameter(&self) -> Option<usize> {
        let mut diameter = 0;
        for src in 0..self.node_count() {
            for d in self.bfs_distances(src) {
                diameter = diameter.max(d?);
            }
        }
        Some(diameter)
    }

    /// Conductance of a proper nonempty subset,
    /// `|E(S, V\S)| / min(vol(S), vol(V\S))`, as an exact integer ratio.
    pub fn conductance(&self, s: &NodeSubset) -> Result<Ratio> {
        let n = self.node_count();
        if s.is_empty() || s.len() == n {
            return Err(Error::EmptyOrFullSubset);
        }
        let mut crossing = 0u64;
        for &u in s.members() {
            for &v in &self.adjacency[u] {
                if !s.contains(v) {
                    crossing += 1;
                }
            }
        }
        let vol = s.volume() as u64;
        let co_vol = self.total_volume() as u64 - vol;
        Ok(Ratio::new(crossing, vol.min(co_vol)))
    }

    /// Serializes to the edge-list text format: a `n m` header line followed
    /// by one `u v` line per edge with `u < v`.
    pub fn to_edge_list_string(&self) -> String {
        let mut out = format!("{} {}\n", self.node_count(), self.edge_count());
        for (u, v) in self.edges() {
            out.push_str(&format!("{u} {v}\n"));
        }
        out
    }

    /// Parses the edge-list text format emitted by [`Graph::to_edge_list_string`].
    pub fn parse_edge_list(text: &str) -> Result<Self> {
        let tokens: Vec<&str> = text.split_whitespace().collect();
        let parse_int = |t: &str| -> Result<usize> {
            t.parse()
                .map_err(|_| Error::Parse(format!("expected an integer, found `{t}`")))
        };
        if tokens.len() < 2 {
            return Err(Error::Parse("missing `n m` header".into()));
        }
        let n = parse_int(tokens[0])?;
        let m = parse_int(tokens[1])?;
        if tokens.len() != 2 + 2 * m {
            return Err(Error::Parse(format!(
                "expected {} edge tokens after the header, found {}",
                2 * m,
                tokens.len() - 2
            )));
        }
        let mut edges = Vec::with_capacity(m);
        for i in 0..m {
            let u = parse_int(tokens[2 + 2 * i])?;
            let v = parse_int(tokens[3 + 2 * i])?;
            if u >= v {
                return Err(Error::Parse(format!("edge {i}: expected u < v, found {u} {v}")));
            }
            edges.push((u, v));
        }
        Self::from_edge_list(n, &edges)
    }
}

/// A set of nodes with its volume `vol(S) = sum of degrees` cached.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeSubset {
    members: Vec<usize>,
    volume: usize,
}

impl NodeSubset {
    pub fn new(g: &Graph, members: impl IntoIterator<Item = usize>) -> Result<Self> {
        let set: BTreeSet<usize> = members.into_iter().collect();
        let n = g.node_count();
        if let Some(&id) = set.iter().find(|&&id| id >= n) {
            return Err(Error::OutOfRange { id, n });
        }
        let volume = set.iter().map(|&u| g.degree(u)).sum();
        Ok(NodeSubset { members: set.into_iter().collect(), volume })
    }

    /// Sorted member ids.
    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn volume(&self) -> usize {
        self.volume
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, u: usize) -> bool {
        self.members.binary_search(&u).is_ok()
    }
}

/// Exact ratio of two non-negative counts. Kept unreduced so the raw counts
/// stay visible; equality compares cross-products.
#[derive(Debug, Clone, Copy)]
pub struct Ratio {
    pub numer: u64,
    pub denom: u64,
}

impl Ratio {
    pub fn new(numer: u64, denom: u64) -> Self {
        Ratio { numer, denom }
    }

    pub fn to_f64(self) -> f64 {
        self.numer as f64 / self.denom as f64
    }
}

impl PartialEq for Ratio {
    fn eq(&self, other: &Self) -> bool {
        u128::from(self.numer) * u128::from(other.denom)
            == u128::from(other.numer) * u128::from(self.denom)
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numer, self.denom)
    }
}

/// Parameterized benchmark families.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GraphKind {
    Complete { n: usize },
    Cycle { n: usize },
    Path { n: usize },
    RandomRegular { n: usize, d: usize },
    Barbell { cliques: usize, size: usize },
}

/// Dispatches to the family generators; `seed` only matters for
/// `RandomRegular`.
pub fn generate(kind: &GraphKind, seed: u64) -> Result<Graph> {
    match *kind {
        GraphKind::Complete { n } => complete(n),
        GraphKind::Cycle { n } => cycle(n),
        GraphKind::Path { n } => path(n),
        GraphKind::RandomRegular { n, d } => random_regular(n, d, seed),
        GraphKind::Barbell { cliques, size } => barbell(cliques, size),
    }
}

/// Complete graph `K_n`, `n >= 2`.
pub fn complete(n: usize) -> Result<Graph> {
    if n < 2 {
        return Err(Error::InfeasibleParams("complete graph needs n >= 2".into()));
    }
    let mut edges = Vec::with_capacity(n * (n - 1) / 2);
    for u in 0..n {
        for v in (u + 1)..n {
            edges.push((u, v));
        }
    }
    Graph::from_edge_list(n, &edges)
}

/// Cycle `C_n`, `n >= 3`.
pub fn cycle(n: usize) -> Result<Graph> {
    if n < 3 {
        return Err(Error::InfeasibleParams("cycle needs n >= 3".into()));
    }
    let edges: Vec<_> = (0..n).map(|u| (u.min((u + 1) % n), u.max((u + 1) % n))).collect();
    Graph::from_edge_list(n, &edges)
}

/// Path on `n >= 2` nodes.
pub fn path(n: usize) -> Result<Graph> {
    if n < 2 {
        return Err(Error::InfeasibleParams("path needs n >= 2".into()));
    }
    let edges: Vec<_> = (0..n - 1).map(|u| (u, u + 1)).collect();
    Graph::from_edge_list(n, &edges)
}

/// Seeded random `d`-regular graph via the pairing (configuration) model:
/// stubs are shuffled and paired, pairs forming self-loops or repeated edges
/// are thrown back and re-shuffled, and the attempt restarts when no valid
/// pair remains. Disconnected samples are rejected too; gives up after
/// [`RANDOM_REGULAR_RETRY_CAP`] attempts.
pub fn random_regular(n: usize, d: usize, seed: u64) -> Result<Graph> {
    if d == 0 || d >= n || (n * d) % 2 != 0 {
        return Err(Error::InfeasibleParams(format!(
            "random regular graph needs 0 < d < n and n*d even, got n={n} d={d}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let all_stubs: Vec<usize> = (0..n).flat_map(|u| std::iter::repeat(u).take(d)).collect();
    'attempt: for _ in 0..RANDOM_REGULAR_RETRY_CAP {
        let mut stubs = all_stubs.clone();
        let mut edges = BTreeSet::new();
        while !stubs.is_empty() {
            stubs.shuffle(&mut rng);
            let mut rest = Vec::new();
            for pair in stubs.chunks(2) {
                let (a, b) = (pair[0].min(pair[1]), pair[0].max(pair[1]));
                if a == b || !edges.insert((a, b)) {
                    rest.push(pair[0]);
                    rest.push(pair[1]);
                }
            }
            if rest.len() == stubs.len() {
                continue 'attempt; // only invalid pairings remain
            }
            stubs = rest;
        }
        let edges: Vec<_> = edges.into_iter().collect();
        let g = Graph::from_edge_list(n, &edges)?;
        if g.is_connected() {
            return Ok(g);
        }
    }
    Err(Error::InfeasibleParams(format!(
        "no simple connected {d}-regular graph found in {RANDOM_REGULAR_RETRY_CAP} attempts"
    )))
}

/// Path of `cliques` copies of `K_size` joined by single bridge edges.
/// Clique `i` occupies ids `i*size .. (i+1)*size`; its locally-highest node
/// connects to clique `i+1`'s locally-lowest node.
pub fn barbell(cliques: usize, size: usize) -> Result<Graph> {
    if cliques < 1 || size < 3 {
        return Err(Error::InfeasibleParams(
            "barbell needs at least one clique of size >= 3".into(),
        ));
    }
    let mut edges = Vec::new();
    for i in 0..cliques {
        let base = i * size;
        for u in 0..size {
            for v in (u + 1)..size {
                edges.push((base + u, base + v));
            }
        }
        if i + 1 < cliques {
            edges.push((base + size - 1, base + size));
        }
    }
    Graph::from_edge_list(cliques * size, &edges)
}
