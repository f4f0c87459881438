//! Chordality testing, minimal and structure-aligned chordal completions,
//! clique trees, the orientation-based clique-tree normalisation, and
//! potential-maximal-clique verification.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::forest::TreedepthStructure;
use crate::graph::Graph;
use crate::separators::{SeparatorClass, SeparatorIndex};
use crate::vset::VertexSet;

/// A set of fill pairs `(u, v)` with `u < v`, all non-edges of the base graph.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Completion {
    pub fill: BTreeSet<(usize, usize)>,
}

impl Completion {
    pub fn new<I: IntoIterator<Item = (usize, usize)>>(pairs: I) -> Self {
        Completion {
            fill: pairs
                .into_iter()
                .map(|(u, v)| (u.min(v), u.max(v)))
                .collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.fill.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fill.is_empty()
    }

    pub fn contains(&self, u: usize, v: usize) -> bool {
        self.fill.contains(&(u.min(v), u.max(v)))
    }

    /// `g + fill`.
    pub fn apply(&self, g: &Graph) -> Result<Graph> {
        let mut h = g.clone();
        for &(u, v) in &self.fill {
            if g.has_edge(u, v) {
                return Err(Error::Precondition(format!("fill pair {u}-{v} is an edge")));
            }
            h.add_edge(u, v)?;
        }
        Ok(h)
    }
}

/// Maximum-cardinality-search order, reversed so that it is a candidate
/// perfect elimination order.
fn mcs_elimination_order(g: &Graph) -> Vec<usize> {
    let n = g.n();
    let mut weight = vec![0usize; n];
    let mut numbered = VertexSet::EMPTY;
    let mut visit = Vec::with_capacity(n);
    for _ in 0..n {
        let v = (g.vertices() - numbered)
            .iter()
            .max_by(|&a, &b| weight[a].cmp(&weight[b]).then(b.cmp(&a)))
            .expect("unnumbered vertex");
        numbered.insert(v);
        visit.push(v);
        for u in g.neighbors(v) - numbered {
            weight[u] += 1;
        }
    }
    visit.reverse();
    visit
}

/// Whether `order` is a perfect elimination order of `g`.
pub fn is_perfect_elimination_order(g: &Graph, order: &[usize]) -> bool {
    let mut later: VertexSet = order.iter().copied().collect();
    for &v in order {
        later.remove(v);
        if !g.is_clique(g.neighbors(v) & later) {
            return false;
        }
    }
    true
}

/// Chordality test; returns a perfect elimination order when chordal.
pub fn is_chordal(g: &Graph) -> (bool, Option<Vec<usize>>) {
    let order = mcs_elimination_order(g);
    if is_perfect_elimination_order(g, &order) {
        (true, Some(order))
    } else {
        (false, None)
    }
}

fn chordal(g: &Graph) -> bool {
    is_chordal(g).0
}

/// Removes fill pairs in ascending lexicographic order while the result
/// stays chordal, repeating passes until no single pair is removable.
pub fn minimalize_completion(g: &Graph, fill: &Completion) -> Result<Completion> {
    let mut h = fill.apply(g)?;
    if !chordal(&h) {
        return Err(Error::Precondition("g + fill is not chordal".into()));
    }
    let mut current = fill.clone();
    loop {
        let mut changed = false;
        for (u, v) in current.fill.clone() {
            h.remove_edge(u, v);
            if chordal(&h) {
                current.fill.remove(&(u, v));
                changed = true;
            } else {
                h.add_edge(u, v)?;
            }
        }
        if !changed {
            return Ok(current);
        }
    }
}

/// Whether `fill` is an inclusion-minimal chordal completion of `g`.
pub fn is_minimal_completion(g: &Graph, fill: &Completion) -> Result<bool> {
    let mut h = fill.apply(g)?;
    if !chordal(&h) {
        return Ok(false);
    }
    for &(u, v) in &fill.fill {
        h.remove_edge(u, v);
        let ok = chordal(&h);
        h.add_edge(u, v)?;
        if ok {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Whether no fill pair touches a depth-`d` node or joins two incomparable
/// structure nodes.
pub fn is_aligned(t: &TreedepthStructure, fill: &Completion) -> bool {
    let deep = t.deepest_level();
    let nodes = t.nodes();
    fill.fill.iter().all(|&(u, v)| {
        !deep.contains(u)
            && !deep.contains(v)
            && !(nodes.contains(u) && nodes.contains(v) && !t.forest.comparable(u, v))
    })
}

/// A minimal chordal completion with no fill incident to depth-`d` nodes and
/// none between incomparable structure nodes.
pub fn aligned_minimal_completion(g: &Graph, t: &TreedepthStructure) -> Result<Completion> {
    let deep = t.deepest_level();
    let nodes = t.nodes();
    let start = Completion::new(g.non_edges().into_iter().filter(|&(u, v)| {
        !deep.contains(u)
            && !deep.contains(v)
            && !(nodes.contains(u) && nodes.contains(v) && !t.forest.comparable(u, v))
    }));
    if !chordal(&start.apply(g)?) {
        return Err(Error::Invariant(
            "aligned starting fill is not chordal; is the structure maximal?".into(),
        ));
    }
    minimalize_completion(g, &start)
}

/// Maximal cliques of `g + c`, sorted by mask.
pub fn maximal_cliques_chordal(g: &Graph, c: &Completion) -> Result<Vec<VertexSet>> {
    let h = c.apply(g)?;
    let order = is_chordal(&h)
        .1
        .ok_or_else(|| Error::Precondition("g + fill is not chordal".into()))?;
    let mut later: VertexSet = h.vertices();
    let mut cands = Vec::with_capacity(order.len());
    for &v in &order {
        later.remove(v);
        cands.push((h.neighbors(v) & later).with(v));
    }
    let mut out: Vec<VertexSet> = cands
        .iter()
        .copied()
        .filter(|&c| !cands.iter().any(|&o| c.is_proper_subset(o)))
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    out.sort();
    Ok(out)
}

/// A clique tree of a chordal completion: bags are the maximal cliques of
/// `g + fill`, tree edges are index pairs `(a, b)` with `a < b`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CliqueTree {
    pub completion: Completion,
    pub bags: Vec<VertexSet>,
    pub edges: Vec<(usize, usize)>,
}

impl CliqueTree {
    pub fn len(&self) -> usize {
        self.bags.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bags.is_empty()
    }

    pub fn adhesion(&self, a: usize, b: usize) -> VertexSet {
        self.bags[a] & self.bags[b]
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.edges.contains(&(a.min(b), a.max(b)))
    }

    pub fn tree_neighbors(&self, a: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .edges
            .iter()
            .filter_map(|&(x, y)| {
                if x == a {
                    Some(y)
                } else if y == a {
                    Some(x)
                } else {
                    None
                }
            })
            .collect();
        out.sort_unstable();
        out
    }

    /// Tree nodes on `a`'s side of the edge `ab`.
    pub fn side_nodes(&self, a: usize, b: usize) -> Vec<usize> {
        let mut seen = vec![false; self.bags.len()];
        seen[a] = true;
        seen[b] = true;
        let mut stack = vec![a];
        let mut out = vec![a];
        while let Some(x) = stack.pop() {
            for y in self.tree_neighbors(x) {
                if !seen[y] {
                    seen[y] = true;
                    out.push(y);
                    stack.push(y);
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Vertices in bags on `a`'s side of `ab`, minus the adhesion.
    pub fn side_vertices(&self, a: usize, b: usize) -> VertexSet {
        let s = self.adhesion(a, b);
        self.side_nodes(a, b)
            .into_iter()
            .fold(VertexSet::EMPTY, |acc, x| acc | self.bags[x])
            - s
    }

    /// The component of `g − σ(ab)` containing `bag(a) ∖ σ(ab)`.
    pub fn side_full_component(&self, g: &Graph, a: usize, b: usize) -> Option<VertexSet> {
        let s = self.adhesion(a, b);
        let v = (self.bags[a] - s).min()?;
        Some(g.component_from(v, g.vertices() - s))
    }

    /// Whether this is a tree decomposition of `g + fill` with bags exactly
    /// its maximal cliques.
    pub fn is_valid(&self, g: &Graph) -> Result<bool> {
        let cliques = maximal_cliques_chordal(g, &self.completion)?;
        let mut bags = self.bags.clone();
        bags.sort();
        if bags != cliques || self.edges.len() + 1 != self.bags.len().max(1) {
            return Ok(false);
        }
        let nb = self.bags.len();
        if nb == 0 {
            return Ok(true);
        }
        // Connected (hence a tree, given the edge count).
        let mut seen = vec![false; nb];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(x) = stack.pop() {
            for y in self.tree_neighbors(x) {
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        if seen.iter().any(|&s| !s) {
            return Ok(false);
        }
        // Running intersection: nodes containing each vertex are connected.
        for v in g.vertices() {
            let holders: Vec<usize> = (0..nb).filter(|&i| self.bags[i].contains(v)).collect();
            if holders.is_empty() {
                return Ok(false);
            }
            let inside = |i: usize| self.bags[i].contains(v);
            let mut seen = vec![false; nb];
            let mut stack = vec![holders[0]];
            seen[holders[0]] = true;
            let mut count = 1;
            while let Some(x) = stack.pop() {
                for y in self.tree_neighbors(x) {
                    if !seen[y] && inside(y) {
                        seen[y] = true;
                        count += 1;
                        stack.push(y);
                    }
                }
            }
            if count != holders.len() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Renders as `bag i: {..}` and `edge a b σ={..}` lines.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (i, b) in self.bags.iter().enumerate() {
            out.push_str(&format!("bag {i} {b}\n"));
        }
        for &(a, b) in &self.edges {
            out.push_str(&format!("edge {a} {b} {}\n", self.adhesion(a, b)));
        }
        out
    }
}

/// Maximum-weight spanning tree of the clique intersection graph, edges
/// ranked by weight then by the lower index pair.
pub fn build_clique_tree(g: &Graph, c: &Completion) -> Result<CliqueTree> {
    let bags = maximal_cliques_chordal(g, c)?;
    let k = bags.len();
    let mut cand: Vec<(usize, usize, usize)> = Vec::new();
    for i in 0..k {
        for j in i + 1..k {
            cand.push(((bags[i] & bags[j]).len(), i, j));
        }
    }
    cand.sort_by(|a, b| b.0.cmp(&a.0).then((a.1, a.2).cmp(&(b.1, b.2))));
    let mut parent: Vec<usize> = (0..k).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut y = x;
        while p[y] != r {
            let next = p[y];
            p[y] = r;
            y = next;
        }
        r
    }
    let mut edges = Vec::new();
    for (_, i, j) in cand {
        let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
        if ri != rj {
            parent[ri] = rj;
            edges.push((i, j));
        }
    }
    edges.sort_unstable();
    Ok(CliqueTree {
        completion: c.clone(),
        bags,
        edges,
    })
}

/// Orientation of a tree edge whose adhesion is a mixed separator: the node
/// whose side holds the non-mesh full component.
fn head_of(g: &Graph, ct: &CliqueTree, index: &SeparatorIndex, a: usize, b: usize) -> Result<Option<usize>> {
    let s = ct.adhesion(a, b);
    let sep = index
        .get(s)
        .ok_or_else(|| Error::Invariant(format!("adhesion {s} is not a minimal separator")))?;
    if sep.class != SeparatorClass::Mixed {
        return Ok(None);
    }
    let side_b = ct
        .side_full_component(g, b, a)
        .ok_or_else(|| Error::Invariant("bag contained in adhesion".into()))?;
    Ok(Some(if g.is_mesh(side_b) { a } else { b }))
}

/// A violating pair `(s, t, u)`: distinct tree edges `st`, `tu` with
/// `σ(st) ⊆ σ(tu)` and `tu` oriented towards `u`.
pub fn find_spade_violation(
    g: &Graph,
    ct: &CliqueTree,
    index: &SeparatorIndex,
) -> Result<Option<(usize, usize, usize)>> {
    for &(a, b) in &ct.edges {
        let Some(u) = head_of(g, ct, index, a, b)? else {
            continue;
        };
        let t = if u == a { b } else { a };
        let big = ct.adhesion(t, u);
        for s in ct.tree_neighbors(t) {
            if s != u && ct.adhesion(s, t).is_subset(big) {
                return Ok(Some((s, t, u)));
            }
        }
    }
    Ok(None)
}

/// Whether the clique tree has no violating pair.
pub fn satisfies_spade(g: &Graph, ct: &CliqueTree, index: &SeparatorIndex) -> Result<bool> {
    Ok(find_spade_violation(g, ct, index)?.is_none())
}

/// Repeatedly reattaches `st` as `su` for a violating pair until none
/// remains; more than `n²` moves is reported as an invariant violation.
pub fn enforce_spade(g: &Graph, ct: &CliqueTree, index: &SeparatorIndex) -> Result<CliqueTree> {
    let mut out = ct.clone();
    let limit = g.n() * g.n();
    let mut moves = 0;
    while let Some((s, t, u)) = find_spade_violation(g, &out, index)? {
        moves += 1;
        if moves > limit {
            return Err(Error::Invariant(format!(
                "clique-tree normalisation exceeded {limit} moves"
            )));
        }
        out.edges.retain(|&e| e != (s.min(t), s.max(t)));
        out.edges.push((s.min(u), s.max(u)));
        out.edges.sort_unstable();
    }
    Ok(out)
}

/// Potential maximal clique test by the component characterisation.
pub fn is_pmc(g: &Graph, omega: VertexSet) -> bool {
    let comps = g.connected_components(omega);
    let nbhds: Vec<VertexSet> = comps.iter().map(|&d| g.open_neighborhood(d)).collect();
    if nbhds.iter().any(|&nd| !nd.is_proper_subset(omega)) {
        return false;
    }
    omega.iter().all(|u| {
        (omega - g.closed_nbhd_of(u))
            .iter()
            .filter(|&v| v > u)
            .all(|v| nbhds.iter().any(|&nd| nd.contains(u) && nd.contains(v)))
    })
}

/// Every adhesion is a minimal separator with, on each side `x`, a full
/// component containing `bag(x) ∖ σ` and lying within that side.
pub fn check_adhesion_full_sides(g: &Graph, ct: &CliqueTree) -> bool {
    ct.edges.iter().all(|&(a, b)| {
        [(a, b), (b, a)].iter().all(|&(x, y)| {
            let s = ct.adhesion(x, y);
            let side = ct.side_vertices(x, y);
            g.connected_components(s).into_iter().any(|d| {
                d.is_subset(side)
                    && g.open_neighborhood(d) == s
                    && (ct.bags[x] - s).is_subset(d)
            })
        })
    })
}

/// For each edge `st` there is a component `D` of `g − bag(t)` with
/// `N(D) = σ(st)` inside the `s`-side.
pub fn check_adhesion_witness_components(g: &Graph, ct: &CliqueTree) -> bool {
    ct.edges.iter().all(|&(a, b)| {
        [(a, b), (b, a)].iter().all(|&(s, t)| {
            let sigma = ct.adhesion(s, t);
            let side = ct.side_vertices(s, t);
            g.connected_components(ct.bags[t])
                .into_iter()
                .any(|d| d.is_subset(side) && g.open_neighborhood(d) == sigma)
        })
    })
}

/// Every minimal separator of `g` that is a clique of `g + fill` is the
/// adhesion of a tree edge separating the bags of its two full sides.
pub fn check_separator_edges(g: &Graph, ct: &CliqueTree, seps: &[VertexSet]) -> Result<bool> {
    let h = ct.completion.apply(g)?;
    for &s in seps {
        if !h.is_clique(s) {
            continue;
        }
        let full = crate::separators::full_components(g, s);
        let ok = full.iter().enumerate().all(|(i, &fa)| {
            full[i + 1..].iter().all(|&fb| {
                ct.edges.iter().any(|&(x, y)| {
                    ct.adhesion(x, y) == s && {
                        let sx = ct.side_vertices(x, y);
                        let sy = ct.side_vertices(y, x);
                        (fa.is_subset(sx) && fb.is_subset(sy)) || (fa.is_subset(sy) && fb.is_subset(sx))
                    }
                })
            })
        });
        if !ok {
            return Ok(false);
        }
    }
    Ok(true)
}

/// No fill pair joins two components of `g − S` for cliques `S` of
/// `g + fill`; checks every sub-clique of bags of at most 12 vertices and
/// the bags and adhesions of larger ones.
pub fn check_fill_within_components(g: &Graph, ct: &CliqueTree) -> bool {
    let mut cliques: BTreeSet<VertexSet> = BTreeSet::new();
    for &b in &ct.bags {
        if b.len() <= 12 {
            cliques.extend(b.all_subsets());
        } else {
            cliques.insert(b);
        }
    }
    for &(a, b) in &ct.edges {
        cliques.insert(ct.adhesion(a, b));
    }
    cliques.into_iter().all(|s| {
        let comps = g.connected_components(s);
        ct.completion.fill.iter().all(|&(u, v)| {
            s.contains(u)
                || s.contains(v)
                || comps.iter().any(|d| d.contains(u) && d.contains(v))
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forest::RootedForest;
    use crate::graph::named::*;
    use crate::harness::{gen_random_p6free, minimal_triangulations_brute, pmcs_brute, random_graph};
    use crate::separators::DEFAULT_SEPARATOR_CAP;
    use crate::vset::vset;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn chordality_examples() {
        assert!(!is_chordal(&cycle(4)).0);
        assert!(is_chordal(&complete(4)).0);
        let mut g = cycle(4);
        g.add_edge(0, 2).unwrap();
        let (ok, order) = is_chordal(&g);
        assert!(ok && is_perfect_elimination_order(&g, &order.unwrap()));
    }

    #[test]
    fn chordality_matches_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in 1..=9 {
            for _ in 0..30 {
                let g = random_graph(n, 0.5, &mut rng);
                assert_eq!(is_chordal(&g).0, crate::harness::is_chordal_brute(&g), "{g:?}");
            }
        }
    }

    #[test]
    fn minimalize_examples() {
        let c4 = cycle(4);
        let out = minimalize_completion(&c4, &Completion::new([(0, 2), (1, 3)])).unwrap();
        assert_eq!(out, Completion::new([(1, 3)]));
        let p4 = path(4);
        assert!(minimalize_completion(&p4, &Completion::default()).unwrap().is_empty());
        let c5 = cycle(5);
        let all = Completion::new(c5.non_edges());
        let out = minimalize_completion(&c5, &all).unwrap();
        assert_eq!(out.len(), 2);
        let tris = minimal_triangulations_brute(&c5).unwrap();
        assert!(tris.iter().any(|f| Completion::new(f.iter().copied()) == out));
        assert!(minimalize_completion(&c4, &Completion::default()).is_err());
    }

    #[test]
    fn minimalize_is_minimal_on_random_graphs() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for n in 3..=8 {
            for _ in 0..10 {
                let g = random_graph(n, 0.4, &mut rng);
                let out = minimalize_completion(&g, &Completion::new(g.non_edges())).unwrap();
                assert!(is_minimal_completion(&g, &out).unwrap());
                let tris = minimal_triangulations_brute(&g).unwrap();
                assert!(tris.iter().any(|f| Completion::new(f.iter().copied()) == out));
            }
        }
    }

    #[test]
    fn aligned_examples() {
        let c4 = cycle(4);
        let t = TreedepthStructure::new(RootedForest::from_parents(4, &[(0, None)]).unwrap(), 1);
        assert_eq!(aligned_minimal_completion(&c4, &t).unwrap(), Completion::new([(1, 3)]));
        let empty = TreedepthStructure::empty(4, 1);
        assert_eq!(aligned_minimal_completion(&c4, &empty).unwrap(), Completion::new([(1, 3)]));
        let p5 = path(5);
        assert!(aligned_minimal_completion(&p5, &t).unwrap().is_empty());
    }

    #[test]
    fn aligned_on_maximal_structures() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for seed in 0..20 {
            let g = gen_random_p6free(8, 0.4, seed).unwrap();
            for d in 1..=3 {
                let t = crate::forest::random_maximal_structure(&g, d, &mut rng);
                let c = aligned_minimal_completion(&g, &t).unwrap();
                assert!(is_aligned(&t, &c));
                assert!(is_minimal_completion(&g, &c).unwrap());
            }
        }
    }

    #[test]
    fn clique_examples() {
        let c4 = cycle(4);
        let c = Completion::new([(1, 3)]);
        assert_eq!(
            maximal_cliques_chordal(&c4, &c).unwrap(),
            vec![vset(&[0, 1, 3]), vset(&[1, 2, 3])]
        );
        assert_eq!(
            maximal_cliques_chordal(&complete(3), &Completion::default()).unwrap(),
            vec![vset(&[0, 1, 2])]
        );
        assert_eq!(
            maximal_cliques_chordal(&path(3), &Completion::default()).unwrap(),
            vec![vset(&[0, 1]), vset(&[1, 2])]
        );
    }

    #[test]
    fn clique_tree_examples() {
        let c4 = cycle(4);
        let ct = build_clique_tree(&c4, &Completion::new([(1, 3)])).unwrap();
        assert_eq!(ct.edges.len(), 1);
        assert_eq!(ct.adhesion(0, 1), vset(&[1, 3]));
        let k4 = build_clique_tree(&complete(4), &Completion::default()).unwrap();
        assert_eq!((k4.bags.len(), k4.edges.len()), (1, 0));
        let p4 = build_clique_tree(&path(4), &Completion::default()).unwrap();
        assert_eq!(p4.bags, vec![vset(&[0, 1]), vset(&[1, 2]), vset(&[2, 3])]);
        assert_eq!(p4.edges, vec![(0, 1), (1, 2)]);
        assert!(p4.is_valid(&path(4)).unwrap());
    }

    fn check_tree(g: &Graph, ct: &CliqueTree, seps: &[VertexSet]) {
        assert!(ct.is_valid(g).unwrap());
        assert!(ct.bags.len() <= g.n().max(1));
        assert!(check_adhesion_full_sides(g, ct), "{g:?} {ct:?}");
        assert!(check_adhesion_witness_components(g, ct));
        assert!(check_separator_edges(g, ct, seps).unwrap());
        assert!(check_fill_within_components(g, ct));
        for &(a, b) in &ct.edges {
            assert!(seps.contains(&ct.adhesion(a, b)));
        }
    }

    #[test]
    fn clique_tree_properties_on_random_completions() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for seed in 0..25 {
            let g = gen_random_p6free(9, 0.35, seed).unwrap();
            let index = SeparatorIndex::build(&g, DEFAULT_SEPARATOR_CAP).unwrap();
            let seps: Vec<VertexSet> = index.iter().map(|s| s.s).collect();
            for d in 1..=3 {
                let t = crate::forest::random_maximal_structure(&g, d, &mut rng);
                let c = aligned_minimal_completion(&g, &t).unwrap();
                let ct = build_clique_tree(&g, &c).unwrap();
                check_tree(&g, &ct, &seps);
                let fixed = enforce_spade(&g, &ct, &index).unwrap();
                check_tree(&g, &fixed, &seps);
                assert!(satisfies_spade(&g, &fixed, &index).unwrap());
            }
        }
    }

    #[test]
    fn spade_repairs_a_violating_tree() {
        // σ(st) = {2} is inside the mixed σ(tu) = {2,3}, whose non-mesh full
        // side is at u = {3,4}... built below as a concrete graph.
        // Vertices: A = {0,1} edge (mesh), S = {2,3}, B = {4} (non-mesh),
        // plus a pendant 5 on 2 that hangs off a bag containing 2 only.
        let g = Graph::from_edges(
            6,
            &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 4), (3, 4), (2, 5)],
        )
        .unwrap();
        let index = SeparatorIndex::build(&g, DEFAULT_SEPARATOR_CAP).unwrap();
        assert_eq!(index.get(vset(&[2, 3])).unwrap().class, SeparatorClass::Mixed);
        let c = Completion::new([(2, 3)]);
        let bags = maximal_cliques_chordal(&g, &c).unwrap();
        let idx = |s: VertexSet| bags.iter().position(|&b| b == s).unwrap();
        let (ta, tb, tp) = (idx(vset(&[0, 1, 2, 3])), idx(vset(&[2, 3, 4])), idx(vset(&[2, 5])));
        let edge = |a: usize, b: usize| (a.min(b), a.max(b));
        // Pendant bag attached at the mesh side: σ = {2} ⊆ {2,3}, edge
        // (A-bag → B-bag) oriented towards the non-mesh side.
        let mut edges = vec![edge(ta, tb), edge(tp, ta)];
        edges.sort_unstable();
        let ct = CliqueTree { completion: c, bags, edges };
        assert!(ct.is_valid(&g).unwrap());
        assert_eq!(find_spade_violation(&g, &ct, &index).unwrap(), Some((tp, ta, tb)));
        let fixed = enforce_spade(&g, &ct, &index).unwrap();
        assert!(fixed.has_edge(tp, tb) && !fixed.has_edge(tp, ta));
        assert!(fixed.is_valid(&g).unwrap());
        assert!(satisfies_spade(&g, &fixed, &index).unwrap());
        // Single-edge trees are left alone.
        let c4 = cycle(4);
        let c4i = SeparatorIndex::build(&c4, DEFAULT_SEPARATOR_CAP).unwrap();
        let one = build_clique_tree(&c4, &Completion::new([(1, 3)])).unwrap();
        assert_eq!(enforce_spade(&c4, &one, &c4i).unwrap(), one);
    }

    #[test]
    fn pmc_examples() {
        let c4 = cycle(4);
        assert!(is_pmc(&c4, vset(&[0, 1, 3])));
        assert!(!is_pmc(&c4, vset(&[0, 1])));
        assert!(is_pmc(&complete(3), vset(&[0, 1, 2])));
    }

    #[test]
    fn pmc_matches_triangulation_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for n in 1..=7 {
            for _ in 0..8 {
                let g = random_graph(n, 0.45, &mut rng);
                let expected = pmcs_brute(&g).unwrap();
                for omega in g.vertices().all_subsets().filter(|s| !s.is_empty()) {
                    assert_eq!(is_pmc(&g, omega), expected.contains(&omega), "{g:?} {omega}");
                }
            }
        }
    }
}
