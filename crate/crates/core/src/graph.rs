//! Simple undirected graphs with bit-set adjacency rows, plus the
//! connectivity and neighbourhood primitives everything else is built on.
//!
//! Vertex identity is the 0-based input index; that index order is the fixed
//! vertex enumeration used by every tie-breaking rule in the crate.

use crate::error::{Error, Result};
use crate::vset::{VertexSet, MAX_VERTICES};

/// A simple, loopless, undirected graph on `{0, …, n-1}`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Graph {
    n: usize,
    adj: Vec<VertexSet>,
}

impl Graph {
    /// The edgeless graph on `n` vertices.
    pub fn new(n: usize) -> Result<Self> {
        if n > MAX_VERTICES {
            return Err(Error::cap("graph vertex count", MAX_VERTICES));
        }
        Ok(Graph {
            n,
            adj: vec![VertexSet::EMPTY; n],
        })
    }

    /// Builds a graph from an edge list. Loops and out-of-range endpoints are
    /// rejected; repeated edges are merged.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Graph::new(n)?;
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    /// Adds the edge `uv` (idempotent).
    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<()> {
        if u >= self.n || v >= self.n {
            return Err(Error::InvalidInput(format!(
                "edge {u}-{v} out of range for n={}",
                self.n
            )));
        }
        if u == v {
            return Err(Error::InvalidInput(format!("self-loop at {u}")));
        }
        self.adj[u].insert(v);
        self.adj[v].insert(u);
        Ok(())
    }

    /// Removes the edge `uv` if present.
    pub fn remove_edge(&mut self, u: usize, v: usize) {
        self.adj[u].remove(v);
        self.adj[v].remove(u);
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of edges.
    pub fn m(&self) -> usize {
        self.adj.iter().map(|a| a.len()).sum::<usize>() / 2
    }

    /// `V(G)`.
    #[inline]
    pub fn vertices(&self) -> VertexSet {
        VertexSet::full(self.n)
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].contains(v)
    }

    /// `N(v)`.
    #[inline]
    pub fn neighbors(&self, v: usize) -> VertexSet {
        self.adj[v]
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for u in 0..self.n {
            for v in self.adj[u].iter().filter(|&v| v > u) {
                out.push((u, v));
            }
        }
        out
    }

    /// Non-adjacent pairs `(u, v)` with `u < v`, in lexicographic order.
    pub fn non_edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for u in 0..self.n {
            for v in u + 1..self.n {
                if !self.has_edge(u, v) {
                    out.push((u, v));
                }
            }
        }
        out
    }

    /// `N[S] = S ∪ N(S)`.
    pub fn closed_neighborhood(&self, s: VertexSet) -> VertexSet {
        let mut out = s;
        for v in s {
            out |= self.adj[v];
        }
        out
    }

    /// `N(S) = N[S] ∖ S`.
    pub fn open_neighborhood(&self, s: VertexSet) -> VertexSet {
        self.closed_neighborhood(s) - s
    }

    /// `N[v]`.
    #[inline]
    pub fn closed_nbhd_of(&self, v: usize) -> VertexSet {
        self.adj[v].with(v)
    }

    /// Components of `G[within]`, ordered by minimum vertex.
    pub fn components_of(&self, within: VertexSet) -> Vec<VertexSet> {
        let mut rest = within;
        let mut out = Vec::new();
        while let Some(v) = rest.min() {
            let comp = self.component_from(v, within);
            rest -= comp;
            out.push(comp);
        }
        out
    }

    /// Vertex set of the component of `G[within]` containing `start`.
    pub fn component_from(&self, start: usize, within: VertexSet) -> VertexSet {
        let mut comp = VertexSet::singleton(start);
        let mut frontier = comp;
        while !frontier.is_empty() {
            let mut next = VertexSet::EMPTY;
            for v in frontier {
                next |= self.adj[v];
            }
            next &= within - comp;
            comp |= next;
            frontier = next;
        }
        comp
    }

    /// Components of `G − removed`, ordered by minimum vertex.
    pub fn connected_components(&self, removed: VertexSet) -> Vec<VertexSet> {
        self.components_of(self.vertices() - removed)
    }

    /// Whether `G[s]` is connected (the empty graph counts as connected).
    pub fn is_connected(&self, s: VertexSet) -> bool {
        match s.min() {
            None => true,
            Some(v) => self.component_from(v, s) == s,
        }
    }

    /// Components of the complement of `G[s]`, ordered by minimum vertex.
    /// `G[s]` is mesh exactly when there are at least two of them.
    pub fn co_components(&self, s: VertexSet) -> Vec<VertexSet> {
        let mut rest = s;
        let mut out = Vec::new();
        while let Some(start) = rest.min() {
            let mut comp = VertexSet::singleton(start);
            let mut frontier = comp;
            while !frontier.is_empty() {
                let mut next = VertexSet::EMPTY;
                for v in frontier {
                    next |= s - self.adj[v] - comp;
                }
                next -= comp;
                comp |= next;
                frontier = next;
            }
            rest -= comp;
            out.push(comp);
        }
        out
    }

    /// Whether `G[s]` is mesh (its complement is disconnected).
    pub fn is_mesh(&self, s: VertexSet) -> bool {
        self.co_components(s).len() >= 2
    }

    /// Whether `s` is a clique.
    pub fn is_clique(&self, s: VertexSet) -> bool {
        s.iter().all(|v| (s - self.adj[v]) == VertexSet::singleton(v))
    }

    /// Whether `s` is an independent set.
    pub fn is_independent(&self, s: VertexSet) -> bool {
        s.iter().all(|v| !self.adj[v].intersects(s))
    }

    /// Whether no edge joins `a` and `b`.
    pub fn anticomplete(&self, a: VertexSet, b: VertexSet) -> bool {
        !self.open_neighborhood(a).intersects(b) && !a.intersects(b)
    }

    /// Whether every vertex of `a` is adjacent to every vertex of `b`.
    pub fn complete_to(&self, a: VertexSet, b: VertexSet) -> bool {
        a.iter().all(|v| b.is_subset(self.adj[v]))
    }

    /// Number of edges of `G[s]`.
    pub fn edges_within(&self, s: VertexSet) -> usize {
        s.iter().map(|v| (self.adj[v] & s).len()).sum::<usize>() / 2
    }

    /// Whether `G[s]` is a forest.
    pub fn is_acyclic(&self, s: VertexSet) -> bool {
        self.edges_within(s) + self.components_of(s).len() == s.len()
    }

    /// The complement graph.
    pub fn complement(&self) -> Graph {
        let all = self.vertices();
        Graph {
            n: self.n,
            adj: (0..self.n).map(|v| all - self.adj[v] - VertexSet::singleton(v)).collect(),
        }
    }

    /// The graph obtained by relabelling vertex `v` to `perm[v]`.
    pub fn permuted(&self, perm: &[usize]) -> Graph {
        let mut g = Graph {
            n: self.n,
            adj: vec![VertexSet::EMPTY; self.n],
        };
        for (u, v) in self.edges() {
            g.adj[perm[u]].insert(perm[v]);
            g.adj[perm[v]].insert(perm[u]);
        }
        g
    }

    /// An induced path on `t` vertices, if one exists.
    pub fn find_induced_path(&self, t: usize) -> Option<Vec<usize>> {
        if t == 0 {
            return Some(Vec::new());
        }
        let mut path = Vec::with_capacity(t);
        for start in 0..self.n {
            path.push(start);
            if self.extend_path(&mut path, VertexSet::singleton(start), t) {
                return Some(path);
            }
            path.pop();
        }
        None
    }

    /// `blocked` holds the path vertices and every neighbour of a path vertex
    /// other than the current end, i.e. exactly the vertices that cannot
    /// extend the path while keeping it induced.
    fn extend_path(&self, path: &mut Vec<usize>, blocked: VertexSet, t: usize) -> bool {
        if path.len() == t {
            return true;
        }
        let end = *path.last().expect("non-empty path");
        for x in self.adj[end] - blocked {
            path.push(x);
            let next_blocked = blocked | self.adj[end] | VertexSet::singleton(x);
            if self.extend_path(path, next_blocked, t) {
                return true;
            }
            path.pop();
        }
        false
    }

    /// Whether the graph has no induced path on `t` vertices.
    pub fn is_pt_free(&self, t: usize) -> bool {
        assert!(t >= 1, "induced path length must be positive");
        self.find_induced_path(t).is_none()
    }

    /// Serialises in the graph text format (`n m`, then one `u v` per line).
    pub fn to_text(&self) -> String {
        let edges = self.edges();
        let mut out = format!("{} {}\n", self.n, edges.len());
        for (u, v) in edges {
            out.push_str(&format!("{u} {v}\n"));
        }
        out
    }

    /// Parses the graph text format: line 1 `n m`, then `m` lines `u v` with
    /// `0 ≤ u < v < n`. Duplicate edges are rejected. Blank lines and lines
    /// starting with `#` are ignored.
    pub fn parse(text: &str) -> Result<Graph> {
        let mut lines = content_lines(text);
        let (line_no, header) = lines
            .next()
            .ok_or_else(|| Error::parse(1, "missing header line `n m`"))?;
        let nums = parse_numbers(line_no, header, 2)?;
        let (n, m) = (nums[0], nums[1]);
        if n > MAX_VERTICES {
            return Err(Error::parse(
                line_no,
                format!("n={n} exceeds the vertex cap {MAX_VERTICES}"),
            ));
        }
        let mut g = Graph::new(n)?;
        let mut seen = 0usize;
        for (line_no, line) in lines {
            let uv = parse_numbers(line_no, line, 2)?;
            let (u, v) = (uv[0], uv[1]);
            if !(u < v && v < n) {
                return Err(Error::parse(
                    line_no,
                    format!("edge `{u} {v}` must satisfy 0 <= u < v < n"),
                ));
            }
            if g.has_edge(u, v) {
                return Err(Error::parse(line_no, format!("duplicate edge `{u} {v}`")));
            }
            g.add_edge(u, v)?;
            seen += 1;
        }
        if seen != m {
            return Err(Error::parse(
                0,
                format!("header announces {m} edges but {seen} were given"),
            ));
        }
        Ok(g)
    }
}

/// Positive integral vertex weights.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct WeightMap {
    w: Vec<u64>,
}

impl WeightMap {
    /// Validates that every weight is at least one.
    pub fn new(w: Vec<u64>) -> Result<Self> {
        if let Some(v) = w.iter().position(|&x| x == 0) {
            return Err(Error::InvalidInput(format!(
                "weight of vertex {v} must be positive"
            )));
        }
        Ok(WeightMap { w })
    }

    /// All-ones weights on `n` vertices.
    pub fn unit(n: usize) -> Self {
        WeightMap { w: vec![1; n] }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.w.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.w.is_empty()
    }

    #[inline]
    pub fn get(&self, v: usize) -> u64 {
        self.w[v]
    }

    /// Total weight of a set.
    pub fn of(&self, s: VertexSet) -> u64 {
        s.iter().map(|v| self.w[v]).sum()
    }

    pub fn as_slice(&self) -> &[u64] {
        &self.w
    }

    /// Parses `n` positive integers, one per line.
    pub fn parse(text: &str, n: usize) -> Result<WeightMap> {
        let mut w = Vec::with_capacity(n);
        for (line_no, line) in content_lines(text) {
            let x: u64 = line
                .trim()
                .parse()
                .map_err(|_| Error::parse(line_no, format!("`{line}` is not an integer")))?;
            if x == 0 {
                return Err(Error::parse(line_no, "weights must be positive"));
            }
            w.push(x);
        }
        if w.len() != n {
            return Err(Error::parse(
                0,
                format!("expected {n} weights, found {}", w.len()),
            ));
        }
        Ok(WeightMap { w })
    }

    /// One weight per line.
    pub fn to_text(&self) -> String {
        self.w.iter().map(|x| format!("{x}\n")).collect()
    }
}

/// Non-blank, non-comment lines with 1-based line numbers.
pub(crate) fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_numbers(line_no: usize, line: &str, expected: usize) -> Result<Vec<usize>> {
    let nums: Vec<usize> = line
        .split_whitespace()
        .map(|tok| {
            tok.parse::<usize>()
                .map_err(|_| Error::parse(line_no, format!("`{tok}` is not a non-negative integer")))
        })
        .collect::<Result<_>>()?;
    if nums.len() != expected {
        return Err(Error::parse(
            line_no,
            format!("expected {expected} integers, found {}", nums.len()),
        ));
    }
    Ok(nums)
}

/// Parses a comma-separated vertex list such as `0,3,5` (whitespace allowed;
/// the empty string is the empty set).
pub fn parse_vertex_list(text: &str, n: usize) -> Result<VertexSet> {
    let mut s = VertexSet::EMPTY;
    for tok in text.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        let v: usize = tok
            .parse()
            .map_err(|_| Error::parse(0, format!("`{tok}` is not a vertex index")))?;
        if v >= n {
            return Err(Error::parse(0, format!("vertex {v} out of range for n={n}")));
        }
        s.insert(v);
    }
    Ok(s)
}

/// Small named graphs used throughout tests, docs and the CLI.
pub mod named {
    use super::Graph;

    /// The cycle `0-1-…-(n-1)-0`.
    pub fn cycle(n: usize) -> Graph {
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::from_edges(n, &edges).expect("valid cycle")
    }

    /// The path `0-1-…-(n-1)`.
    pub fn path(n: usize) -> Graph {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Graph::from_edges(n, &edges).expect("valid path")
    }

    /// The complete graph.
    pub fn complete(n: usize) -> Graph {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                edges.push((u, v));
            }
        }
        Graph::from_edges(n, &edges).expect("valid clique")
    }

    /// The star with centre 0 and `leaves` leaves.
    pub fn star(leaves: usize) -> Graph {
        let edges: Vec<_> = (1..=leaves).map(|i| (0, i)).collect();
        Graph::from_edges(leaves + 1, &edges).expect("valid star")
    }

    /// Two edges `{0,1}` and `{4,5}` both complete to the pair `{2,3}`; the
    /// pair is a minimal separator whose two full sides are mesh.
    pub fn mesh_example() -> Graph {
        let edges = [
            (0, 1),
            (4, 5),
            (0, 2),
            (0, 3),
            (1, 2),
            (1, 3),
            (2, 4),
            (2, 5),
            (3, 4),
            (3, 5),
        ];
        Graph::from_edges(6, &edges).expect("valid mesh example")
    }
}
