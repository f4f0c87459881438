//! Rooted forests, treedepth-d structures, neat-ification, maximality and the
//! tie-breaking quasi-orders over partial solutions.

use std::cmp::Ordering;

use rand::seq::IndexedRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::{content_lines, Graph, WeightMap};
use crate::vset::VertexSet;

const NONE: u8 = u8::MAX;

/// A rooted forest whose nodes are graph vertices.
///
/// `parent[v]` is meaningful only for `v ∈ nodes`; roots have no parent.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RootedForest {
    nodes: VertexSet,
    parent: Vec<u8>,
}

impl RootedForest {
    /// The empty forest over a universe of `n` vertices.
    pub fn empty(n: usize) -> Self {
        RootedForest {
            nodes: VertexSet::EMPTY,
            parent: vec![NONE; n],
        }
    }

    /// Builds a forest from `(node, parent)` pairs. Fails if a parent is not
    /// itself listed as a node, a node is listed twice, or the parent
    /// relation has a cycle.
    pub fn from_parents(n: usize, entries: &[(usize, Option<usize>)]) -> Result<Self> {
        let mut f = RootedForest::empty(n);
        for &(v, p) in entries {
            if v >= n || p.is_some_and(|p| p >= n) {
                return Err(Error::InvalidInput(format!("forest entry {v} out of range")));
            }
            if f.nodes.contains(v) {
                return Err(Error::InvalidInput(format!("vertex {v} listed twice")));
            }
            f.nodes.insert(v);
            f.parent[v] = p.map_or(NONE, |p| p as u8);
        }
        for v in f.nodes {
            if let Some(p) = f.parent(v) {
                if !f.nodes.contains(p) {
                    return Err(Error::InvalidInput(format!(
                        "parent {p} of {v} is not a node"
                    )));
                }
            }
        }
        if !f.is_acyclic() {
            return Err(Error::InvalidInput("parent relation has a cycle".into()));
        }
        Ok(f)
    }

    fn is_acyclic(&self) -> bool {
        let limit = self.nodes.len();
        self.nodes.iter().all(|v| {
            let mut cur = v;
            for _ in 0..=limit {
                match self.parent(cur) {
                    None => return true,
                    Some(p) => cur = p,
                }
            }
            false
        })
    }

    /// Size of the vertex universe.
    #[inline]
    pub fn universe(&self) -> usize {
        self.parent.len()
    }

    #[inline]
    pub fn nodes(&self) -> VertexSet {
        self.nodes
    }

    #[inline]
    pub fn contains(&self, v: usize) -> bool {
        self.nodes.contains(v)
    }

    #[inline]
    pub fn parent(&self, v: usize) -> Option<usize> {
        debug_assert!(self.nodes.contains(v));
        let p = self.parent[v];
        (p != NONE).then_some(p as usize)
    }

    #[inline]
    pub fn is_root(&self, v: usize) -> bool {
        self.parent[v] == NONE
    }

    pub fn roots(&self) -> VertexSet {
        self.nodes.iter().filter(|&v| self.is_root(v)).collect()
    }

    /// Children of `v` (or the roots when `v` is `None`).
    pub fn children(&self, v: Option<usize>) -> VertexSet {
        let key = v.map_or(NONE, |v| v as u8);
        self.nodes.iter().filter(|&c| self.parent[c] == key).collect()
    }

    /// Depth of a node; roots have depth 1.
    pub fn depth(&self, v: usize) -> usize {
        let mut d = 1;
        let mut cur = v;
        while let Some(p) = self.parent(cur) {
            d += 1;
            cur = p;
        }
        d
    }

    /// Maximum depth (0 for the empty forest).
    pub fn height(&self) -> usize {
        self.nodes.iter().map(|v| self.depth(v)).max().unwrap_or(0)
    }

    /// Strict ancestors of `v`.
    pub fn ancestors(&self, v: usize) -> VertexSet {
        let mut out = VertexSet::EMPTY;
        let mut cur = v;
        while let Some(p) = self.parent(cur) {
            out.insert(p);
            cur = p;
        }
        out
    }

    /// `v` together with its strict ancestors.
    pub fn ancestors_inclusive(&self, v: usize) -> VertexSet {
        self.ancestors(v).with(v)
    }

    /// Ancestor closure of a set of nodes (each node plus all its ancestors).
    pub fn ancestor_closure(&self, s: VertexSet) -> VertexSet {
        let mut out = VertexSet::EMPTY;
        for v in s & self.nodes {
            if !out.contains(v) {
                out |= self.ancestors_inclusive(v);
            }
        }
        out
    }

    /// `v` together with all its descendants.
    pub fn descendants_inclusive(&self, v: usize) -> VertexSet {
        self.nodes
            .iter()
            .filter(|&u| self.ancestors_inclusive(u).contains(v))
            .collect()
    }

    /// Whether `a` is a (non-strict) ancestor of `v`.
    pub fn is_ancestor_or_self(&self, a: usize, v: usize) -> bool {
        self.ancestors_inclusive(v).contains(a)
    }

    /// Whether `u` and `v` lie on a common root-to-leaf path.
    pub fn comparable(&self, u: usize, v: usize) -> bool {
        self.is_ancestor_or_self(u, v) || self.is_ancestor_or_self(v, u)
    }

    /// Whether `s` is contained in a single vertical path.
    pub fn is_vertical(&self, s: VertexSet) -> bool {
        let s = s & self.nodes;
        match s.iter().max_by_key(|&v| self.depth(v)) {
            None => true,
            Some(deepest) => s.is_subset(self.ancestors_inclusive(deepest)),
        }
    }

    /// Nodes without children.
    pub fn leaves(&self) -> VertexSet {
        let mut inner = VertexSet::EMPTY;
        for v in self.nodes {
            if let Some(p) = self.parent(v) {
                inner.insert(p);
            }
        }
        self.nodes - inner
    }

    /// `[depth-1 nodes, depth-2 nodes, …, depth-levels nodes]`.
    pub fn depth_sets(&self, levels: usize) -> Vec<VertexSet> {
        let mut out = vec![VertexSet::EMPTY; levels];
        for v in self.nodes {
            let d = self.depth(v);
            if d <= levels {
                out[d - 1].insert(v);
            }
        }
        out
    }

    /// Adds `v` as a child of `parent` (or as a root).
    pub fn add(&mut self, v: usize, parent: Option<usize>) {
        debug_assert!(!self.nodes.contains(v));
        debug_assert!(parent.is_none_or(|p| self.nodes.contains(p)));
        self.nodes.insert(v);
        self.parent[v] = parent.map_or(NONE, |p| p as u8);
    }

    /// Re-points the parent of an existing node.
    pub fn set_parent(&mut self, v: usize, parent: Option<usize>) {
        debug_assert!(self.nodes.contains(v));
        self.parent[v] = parent.map_or(NONE, |p| p as u8);
    }

    /// Subforest induced by an ancestor-closed node set.
    pub fn restrict(&self, keep: VertexSet) -> RootedForest {
        let keep = keep & self.nodes;
        let mut f = RootedForest::empty(self.universe());
        f.nodes = keep;
        for v in keep {
            f.parent[v] = self.parent[v];
            debug_assert!(self.parent(v).is_none_or(|p| keep.contains(p)));
        }
        f
    }

    /// `(node, parent)` pairs in node order.
    pub fn entries(&self) -> Vec<(usize, Option<usize>)> {
        self.nodes.iter().map(|v| (v, self.parent(v))).collect()
    }

    /// Whether the two forests agree on the parent of every shared node and
    /// their symmetric-difference parts are anticomplete in `g`.
    pub fn compatible(&self, other: &RootedForest, g: &Graph) -> bool {
        let shared = self.nodes & other.nodes;
        if shared.iter().any(|v| self.parent[v] != other.parent[v]) {
            return false;
        }
        let only_a = self.nodes - other.nodes;
        let only_b = other.nodes - self.nodes;
        !g.open_neighborhood(only_a).intersects(only_b)
    }

    /// The union of two compatible forests.
    pub fn union(&self, other: &RootedForest) -> RootedForest {
        let mut f = self.clone();
        for v in other.nodes - self.nodes {
            f.nodes.insert(v);
            f.parent[v] = other.parent[v];
        }
        f
    }

    /// Forest text format: one `v p` line per node, `p = -1` for roots.
    pub fn to_text(&self) -> String {
        self.entries()
            .into_iter()
            .map(|(v, p)| match p {
                Some(p) => format!("{v} {p}\n"),
                None => format!("{v} -1\n"),
            })
            .collect()
    }

    /// Parses the forest text format over a universe of `n` vertices.
    pub fn parse(text: &str, n: usize) -> Result<RootedForest> {
        let mut entries = Vec::new();
        for (line_no, line) in content_lines(text) {
            let toks: Vec<&str> = line.split_whitespace().collect();
            if toks.len() != 2 {
                return Err(Error::parse(line_no, "expected `v p`"));
            }
            let v: usize = toks[0]
                .parse()
                .map_err(|_| Error::parse(line_no, format!("bad vertex `{}`", toks[0])))?;
            let p: i64 = toks[1]
                .parse()
                .map_err(|_| Error::parse(line_no, format!("bad parent `{}`", toks[1])))?;
            if v >= n || p >= n as i64 || p < -1 {
                return Err(Error::parse(line_no, "index out of range"));
            }
            entries.push((v, (p >= 0).then_some(p as usize)));
        }
        RootedForest::from_parents(n, &entries).map_err(|e| Error::parse(0, e.to_string()))
    }
}

impl std::fmt::Debug for RootedForest {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_map().entries(self.entries()).finish()
    }
}

/// A rooted forest of height at most `d` that is an elimination forest of the
/// subgraph induced by its nodes.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct TreedepthStructure {
    pub forest: RootedForest,
    pub d: usize,
}

impl TreedepthStructure {
    pub fn new(forest: RootedForest, d: usize) -> Self {
        TreedepthStructure { forest, d }
    }

    /// The empty structure.
    pub fn empty(n: usize, d: usize) -> Self {
        TreedepthStructure {
            forest: RootedForest::empty(n),
            d,
        }
    }

    #[inline]
    pub fn nodes(&self) -> VertexSet {
        self.forest.nodes()
    }

    /// Nodes at depth exactly `d`.
    pub fn deepest_level(&self) -> VertexSet {
        self.forest
            .nodes()
            .iter()
            .filter(|&v| self.forest.depth(v) == self.d)
            .collect()
    }

    /// Where `u ∉ nodes` could be appended: `Some(None)` as a new root,
    /// `Some(Some(x))` below the shallowest admissible node `x`, or `None`
    /// when no placement keeps the structure valid.
    pub fn append_slot(&self, g: &Graph, u: usize) -> Option<Option<usize>> {
        let f = &self.forest;
        let attach = g.neighbors(u) & f.nodes();
        let deepest = attach.iter().max_by_key(|&v| f.depth(v));
        match deepest {
            None => Some(None),
            Some(w) => {
                (attach.is_subset(f.ancestors_inclusive(w)) && f.depth(w) < self.d).then_some(Some(w))
            }
        }
    }
}

/// `(𝒯, X, Sol)` with `X ⊆ Sol ⊆ V(𝒯)`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct PartialSolution {
    pub t: TreedepthStructure,
    pub x: VertexSet,
    pub sol: VertexSet,
}

impl PartialSolution {
    pub fn new(t: TreedepthStructure, x: VertexSet, sol: VertexSet) -> Self {
        debug_assert!(x.is_subset(sol) && sol.is_subset(t.nodes()));
        PartialSolution { t, x, sol }
    }
}

/// Whether `t` is a treedepth-`d` structure in `g`.
pub fn validate_structure(g: &Graph, t: &TreedepthStructure) -> bool {
    let f = &t.forest;
    if f.universe() != g.n() || !f.nodes().is_subset(g.vertices()) || !f.is_acyclic() {
        return false;
    }
    if f.nodes().iter().any(|v| f.parent(v).is_some_and(|p| !f.contains(p))) {
        return false;
    }
    if f.height() > t.d {
        return false;
    }
    let nodes = f.nodes();
    nodes.iter().all(|v| {
        let anc = f.ancestors(v);
        // Edges to shallower-or-equal nodes must go to ancestors; checking
        // from both endpoints covers every edge.
        (g.neighbors(v) & nodes).iter().all(|u| anc.contains(u) || f.ancestors(u).contains(v))
    })
}

/// Whether the descendants of every node induce a connected subgraph.
pub fn is_neat(g: &Graph, t: &TreedepthStructure) -> bool {
    let f = &t.forest;
    f.nodes().iter().all(|v| match f.parent(v) {
        None => true,
        Some(p) => g.neighbors(p).intersects(f.descendants_inclusive(v)),
    })
}

/// Makes a structure neat without increasing any depth.
///
/// Repeatedly takes the deepest node `v` (lowest index on ties) whose subtree
/// has no neighbour of its parent `u`, and lifts that subtree to `u`'s parent
/// (or to the root level). Each lift lowers the depth of at least one node,
/// so at most `n²` lifts happen; exceeding that is reported as an invariant
/// violation.
pub fn neatify(g: &Graph, t: &TreedepthStructure) -> Result<TreedepthStructure> {
    let mut f = t.forest.clone();
    let cap = g.n() * g.n();
    for _ in 0..=cap {
        let violating = f
            .nodes()
            .iter()
            .filter(|&v| match f.parent(v) {
                None => false,
                Some(p) => !g.neighbors(p).intersects(f.descendants_inclusive(v)),
            })
            .max_by(|&a, &b| f.depth(a).cmp(&f.depth(b)).then(b.cmp(&a)));
        match violating {
            None => return Ok(TreedepthStructure::new(f, t.d)),
            Some(v) => {
                let u = f.parent(v).expect("violating node has a parent");
                let grand = f.parent(u);
                f.set_parent(v, grand);
            }
        }
    }
    Err(Error::Invariant(format!(
        "neatify exceeded {cap} improvement steps"
    )))
}

/// Whether no vertex outside `t` can be appended as a leaf or new root.
pub fn is_maximal(g: &Graph, t: &TreedepthStructure) -> bool {
    (g.vertices() - t.nodes())
        .iter()
        .all(|u| t.append_slot(g, u).is_none())
}

/// Outcome of [`compare_solutions`] from the first argument's viewpoint.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Comparison {
    Better,
    Worse,
    Tie,
}

/// The total order on vertex sets used for tie-breaking: larger sets first,
/// then the set containing the least index of the symmetric difference.
/// `Less` means `a` is better.
pub fn prec1(a: VertexSet, b: VertexSet) -> Ordering {
    match b.len().cmp(&a.len()) {
        Ordering::Equal => match ((a - b) | (b - a)).min() {
            None => Ordering::Equal,
            Some(v) if a.contains(v) => Ordering::Less,
            Some(_) => Ordering::Greater,
        },
        other => other,
    }
}

/// The quasi-order on structures: compare `V(𝒯)`, then the depth-1 set, the
/// depth-2 set, … with [`prec1`]. `Less` means `a` is better.
pub fn prec2(a: &RootedForest, b: &RootedForest, levels: usize) -> Ordering {
    let first = prec1(a.nodes(), b.nodes());
    if first != Ordering::Equal {
        return first;
    }
    let (da, db) = (a.depth_sets(levels), b.depth_sets(levels));
    da.iter()
        .zip(&db)
        .map(|(x, y)| prec1(*x, *y))
        .find(|o| *o != Ordering::Equal)
        .unwrap_or(Ordering::Equal)
}

/// Full partial-solution order. `Less` means `a` is better.
pub fn solution_order(a: &PartialSolution, b: &PartialSolution, w: &WeightMap) -> Ordering {
    w.of(b.x)
        .cmp(&w.of(a.x))
        .then_with(|| prec1(a.x, b.x))
        .then_with(|| prec1(a.sol, b.sol))
        .then_with(|| {
            let levels = a.t.d.max(b.t.d).max(a.t.forest.height()).max(b.t.forest.height());
            prec2(&a.t.forest, &b.t.forest, levels)
        })
}

/// Compares two partial solutions under the tie-breaking quasi-order.
pub fn compare_solutions(a: &PartialSolution, b: &PartialSolution, w: &WeightMap) -> Comparison {
    match solution_order(a, b, w) {
        Ordering::Less => Comparison::Better,
        Ordering::Greater => Comparison::Worse,
        Ordering::Equal => Comparison::Tie,
    }
}

/// Default cap on the number of structures [`enumerate_maximal_structures`]
/// may produce.
pub const DEFAULT_STRUCTURE_CAP: usize = 2_000_000;

/// Every maximal treedepth-`d` structure of `g`, each exactly once.
///
/// Structures are built level by level: level `i` is a set of vertices, each
/// given a parent on level `i-1`, whose neighbours among already placed
/// vertices are all ancestors. A parent map determines its levels, so no
/// structure is produced twice.
pub fn enumerate_maximal_structures(
    g: &Graph,
    d: usize,
    cap: usize,
) -> Result<Vec<TreedepthStructure>> {
    level_search(g, d, cap, true)
}

/// Every treedepth-`d` structure of `g` (maximal or not), each exactly once.
pub fn enumerate_structures(g: &Graph, d: usize, cap: usize) -> Result<Vec<TreedepthStructure>> {
    level_search(g, d, cap, false)
}

fn level_search(g: &Graph, d: usize, cap: usize, maximal_only: bool) -> Result<Vec<TreedepthStructure>> {
    let mut out = Vec::new();
    let mut forest = RootedForest::empty(g.n());
    let mut search = LevelSearch {
        g,
        d,
        cap,
        maximal_only,
        out: &mut out,
    };
    search.level(&mut forest, 1, VertexSet::EMPTY)?;
    Ok(out)
}

struct LevelSearch<'a> {
    g: &'a Graph,
    d: usize,
    cap: usize,
    maximal_only: bool,
    out: &'a mut Vec<TreedepthStructure>,
}

impl LevelSearch<'_> {
    /// Chooses the contents of level `depth`; `prev` is level `depth-1`.
    fn level(&mut self, forest: &mut RootedForest, depth: usize, prev: VertexSet) -> Result<()> {
        let candidates: Vec<usize> = (self.g.vertices() - forest.nodes()).iter().collect();
        self.place(forest, depth, prev, &candidates, 0, VertexSet::EMPTY)
    }

    fn place(
        &mut self,
        forest: &mut RootedForest,
        depth: usize,
        prev: VertexSet,
        candidates: &[usize],
        idx: usize,
        placed: VertexSet,
    ) -> Result<()> {
        if idx == candidates.len() {
            if placed.is_empty() || depth == self.d {
                let t = TreedepthStructure::new(forest.clone(), self.d);
                if !self.maximal_only || is_maximal(self.g, &t) {
                    if self.out.len() >= self.cap {
                        return Err(Error::cap("structure enumeration", self.cap));
                    }
                    self.out.push(t);
                }
                return Ok(());
            }
            return self.level(forest, depth + 1, placed);
        }
        let u = candidates[idx];
        // Option 1: u is not on this level.
        self.place(forest, depth, prev, candidates, idx + 1, placed)?;
        // Option 2: u is on this level below some parent in `prev`.
        let nbrs = self.g.neighbors(u);
        if nbrs.intersects(placed) {
            return Ok(());
        }
        let used = forest.nodes() - placed;
        let parents: Vec<Option<usize>> = if depth == 1 {
            vec![None]
        } else {
            prev.iter().map(Some).collect()
        };
        for p in parents {
            let anc = p.map_or(VertexSet::EMPTY, |p| forest.ancestors_inclusive(p));
            if (nbrs & used).is_subset(anc) {
                forest.add(u, p);
                let r = self.place(forest, depth, prev, candidates, idx + 1, placed.with(u));
                remove_node(forest, u);
                r?;
            }
        }
        Ok(())
    }
}

fn remove_node(f: &mut RootedForest, v: usize) {
    f.nodes.remove(v);
    f.parent[v] = NONE;
}

/// A random maximal treedepth-`d` structure: vertices are appended in random
/// order at a uniformly chosen admissible position until none fits.
pub fn random_maximal_structure<R: Rng + ?Sized>(
    g: &Graph,
    d: usize,
    rng: &mut R,
) -> TreedepthStructure {
    let mut t = TreedepthStructure::empty(g.n(), d);
    loop {
        let mut options: Vec<(usize, Option<usize>)> = Vec::new();
        for u in g.vertices() - t.nodes() {
            let attach = g.neighbors(u) & t.nodes();
            if attach.is_empty() {
                options.push((u, None));
            }
            for x in t.nodes() {
                if t.forest.depth(x) < d && attach.is_subset(t.forest.ancestors_inclusive(x)) {
                    options.push((u, Some(x)));
                }
            }
        }
        match options.choose(rng) {
            None => return t,
            Some(&(u, p)) => t.forest.add(u, p),
        }
    }
}
