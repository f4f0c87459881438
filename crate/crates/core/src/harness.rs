//! Brute-force oracles and instance generators.
//!
//! Everything here is deliberately naive: these routines are the independent
//! reference the solver pipeline is checked against, so they share as little
//! logic with it as possible.

use std::collections::HashMap;

use rand::{Rng, RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forest::prec1;
use crate::graph::{Graph, WeightMap};
use crate::vset::VertexSet;

/// Supported optimisation problems.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Problem {
    /// Maximum weight independent set.
    Mwis,
    /// Maximum weight induced forest (complement of a minimum weight
    /// feedback vertex set).
    Fvs,
}

impl Problem {
    pub fn name(self) -> &'static str {
        match self {
            Problem::Mwis => "mwis",
            Problem::Fvs => "fvs",
        }
    }

    /// Whether `G[sol]` satisfies the problem predicate.
    pub fn feasible(self, g: &Graph, sol: VertexSet) -> bool {
        match self {
            Problem::Mwis => g.is_independent(sol),
            Problem::Fvs => g.is_acyclic(sol),
        }
    }
}

/// A weighted problem instance.
#[derive(Clone, Debug)]
pub struct Instance {
    pub g: Graph,
    pub w: WeightMap,
    pub problem: Problem,
}

/// An optimum found by exhaustive search.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct BruteForceOptimum {
    pub sol: VertexSet,
    pub x: VertexSet,
    pub weight: u64,
}

/// Largest `n` accepted by [`brute_force_solve`] for each problem.
pub fn brute_force_cap(problem: Problem) -> usize {
    match problem {
        Problem::Mwis => 16,
        Problem::Fvs => 14,
    }
}

/// Exhaustive optimum over all `Sol ⊆ V` with `X = Sol`, the problem
/// predicate, and treedepth of `G[Sol]` at most `d`. Among optimal sets the
/// one that is first in the set tie-breaking order is returned, which makes
/// the result directly comparable with the solver's. `None` means
/// infeasible (never the case for these problems: the empty set qualifies).
pub fn brute_force_solve(inst: &Instance, d: usize) -> Result<Option<BruteForceOptimum>> {
    let n = inst.g.n();
    let cap = brute_force_cap(inst.problem);
    if n > cap {
        return Err(Error::cap("brute-force instance size", cap));
    }
    let mut td = TreedepthOracle::new(&inst.g);
    let mut best: Option<BruteForceOptimum> = None;
    for bits in 0..(1u64 << n) {
        let sol = VertexSet::from_bits(bits);
        if !inst.problem.feasible(&inst.g, sol) {
            continue;
        }
        let weight = inst.w.of(sol);
        let improves = match &best {
            None => true,
            Some(b) => {
                weight > b.weight || (weight == b.weight && prec1(sol, b.sol).is_lt())
            }
        };
        if improves && td.treedepth(sol) <= d {
            best = Some(BruteForceOptimum {
                sol,
                x: sol,
                weight,
            });
        }
    }
    Ok(best)
}

/// Memoised exact treedepth of induced subgraphs.
pub struct TreedepthOracle<'a> {
    g: &'a Graph,
    memo: HashMap<VertexSet, usize>,
}

impl<'a> TreedepthOracle<'a> {
    pub fn new(g: &'a Graph) -> Self {
        TreedepthOracle {
            g,
            memo: HashMap::new(),
        }
    }

    /// `td(G[s])`: 0 for the empty graph, the maximum over components, and
    /// `1 + min_v td(H − v)` for a connected `H`.
    pub fn treedepth(&mut self, s: VertexSet) -> usize {
        if s.is_empty() {
            return 0;
        }
        if let Some(&v) = self.memo.get(&s) {
            return v;
        }
        let comps = self.g.components_of(s);
        let result = if comps.len() > 1 {
            comps.into_iter().map(|c| self.treedepth(c)).max().unwrap_or(0)
        } else {
            1 + s
                .iter()
                .map(|v| self.treedepth(s.without(v)))
                .min()
                .unwrap_or(0)
        };
        self.memo.insert(s, result);
        result
    }
}

/// Erdős–Rényi graph `G(n, p)`.
pub fn random_graph<R: Rng + ?Sized>(n: usize, p: f64, rng: &mut R) -> Graph {
    let mut g = Graph::new(n).expect("n within cap");
    for u in 0..n {
        for v in u + 1..n {
            if rng.random_bool(p) {
                g.add_edge(u, v).expect("valid edge");
            }
        }
    }
    g
}

/// Number of rejection-sampling attempts before falling back to a planted
/// construction.
pub const RANDOM_RETRY_BUDGET: usize = 500;

/// A random P6-free graph, deterministic in `seed`.
///
/// Rejection-samples `G(n, p)`; after [`RANDOM_RETRY_BUDGET`] failures it
/// falls back to planted P6-free constructions (split graphs and cographs),
/// which are P6-free by construction (and re-checked).
pub fn gen_random_p6free(n: usize, p: f64, seed: u64) -> Result<Graph> {
    if n > 24 {
        return Err(Error::cap("random P6-free generator size", 24));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..RANDOM_RETRY_BUDGET {
        let g = random_graph(n, p, &mut rng);
        if g.is_pt_free(6) {
            return Ok(g);
        }
    }
    for _ in 0..RANDOM_RETRY_BUDGET {
        let g = if rng.random_bool(0.5) {
            random_split_graph(n, p, &mut rng)
        } else {
            random_cograph(n, &mut rng)
        };
        if g.is_pt_free(6) {
            return Ok(g);
        }
    }
    Err(Error::InvalidInput(format!(
        "could not generate a P6-free graph on {n} vertices"
    )))
}

/// A clique on a random part, an independent set on the rest, random edges
/// between. Split graphs are P5-free.
pub fn random_split_graph<R: Rng + ?Sized>(n: usize, p: f64, rng: &mut R) -> Graph {
    let mut g = Graph::new(n).expect("n within cap");
    let clique: VertexSet = (0..n).filter(|_| rng.random_bool(0.5)).collect();
    for u in 0..n {
        for v in u + 1..n {
            let both = clique.contains(u) && clique.contains(v);
            let mixed = clique.contains(u) != clique.contains(v);
            if both || (mixed && rng.random_bool(p)) {
                g.add_edge(u, v).expect("valid edge");
            }
        }
    }
    g
}

/// A random cograph built by disjoint unions and joins. Cographs are
/// P4-free.
pub fn random_cograph<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Graph {
    let mut g = Graph::new(n).expect("n within cap");
    let mut parts: Vec<VertexSet> = (0..n).map(VertexSet::singleton).collect();
    while parts.len() > 1 {
        let i = rng.random_range(0..parts.len());
        let a = parts.swap_remove(i);
        let j = rng.random_range(0..parts.len());
        let b = parts.swap_remove(j);
        if rng.random_bool(0.5) {
            for u in a {
                for v in b {
                    g.add_edge(u, v).expect("valid edge");
                }
            }
        }
        parts.push(a | b);
    }
    g
}

/// The introduction's example: cliques-of-parts `A_i`, `B_i` plus one vertex
/// `v_K` per family member.
#[derive(Clone, Debug)]
pub struct Fig1Instance {
    pub graph: Graph,
    /// `A_1 … A_n` (index 0 holds `A_1`).
    pub a_parts: Vec<VertexSet>,
    /// `B_1 … B_n`.
    pub b_parts: Vec<VertexSet>,
    /// `v_K` for each family member, in family order.
    pub v_k: Vec<usize>,
    /// The family, with 1-based part indices as given.
    pub family: Vec<Vec<usize>>,
    /// The chosen `i₀` (1-based).
    pub i0: usize,
}

impl Fig1Instance {
    /// `S_J = ⋃_{i∈J} A_i ∪ ⋃_{i∉J} B_i` for a 1-based index set `J`.
    pub fn s_j(&self, j: &[usize]) -> VertexSet {
        let mut s = VertexSet::EMPTY;
        for i in 1..=self.a_parts.len() {
            s |= if j.contains(&i) {
                self.a_parts[i - 1]
            } else {
                self.b_parts[i - 1]
            };
        }
        s
    }

    /// `B_J = ⋃_{i∈J} B_i`.
    pub fn b_j(&self, j: &[usize]) -> VertexSet {
        j.iter().map(|&i| self.b_parts[i - 1]).fold(VertexSet::EMPTY, |a, b| a | b)
    }

    /// `A_J = ⋃_{i∉J} A_i ∪ {v_K : K ⊄ J}`.
    pub fn a_j(&self, j: &[usize]) -> VertexSet {
        let mut s = VertexSet::EMPTY;
        for i in 1..=self.a_parts.len() {
            if !j.contains(&i) {
                s |= self.a_parts[i - 1];
            }
        }
        for (k, &v) in self.family.iter().zip(&self.v_k) {
            if !k.iter().all(|i| j.contains(i)) {
                s.insert(v);
            }
        }
        s
    }

    /// `I₀ ∪ {v_K}` for a maximal independent set `I₀` of `B_{i₀}`.
    pub fn independent_set(&self, i0_set: VertexSet) -> VertexSet {
        self.v_k.iter().fold(i0_set, |s, &v| s.with(v))
    }
}

/// Builds the introduction's example with `n` index positions, the given
/// `i₀`, family `fam` (1-based, covering `1..=n`) and part sizes (`A_i` and
/// `B_i` both get `part_sizes[i-1]` independent vertices). Vertex layout:
/// all `A` parts, then all `B` parts, then the `v_K`. The output is checked
/// to be P6-free.
pub fn gen_fig1(
    n: usize,
    i0: usize,
    fam: &[Vec<usize>],
    part_sizes: &[usize],
) -> Result<Fig1Instance> {
    if n == 0 || !(1..=n).contains(&i0) || part_sizes.len() != n {
        return Err(Error::InvalidInput(
            "need n ≥ 1, 1 ≤ i0 ≤ n and one part size per index".into(),
        ));
    }
    let covered: VertexSet = fam.iter().flatten().copied().collect();
    if covered != (1..=n).collect::<VertexSet>() || fam.iter().flatten().any(|&i| i == 0 || i > n) {
        return Err(Error::InvalidInput("family must cover exactly 1..=n".into()));
    }
    if part_sizes.contains(&0) {
        return Err(Error::InvalidInput("parts must be non-empty".into()));
    }
    let total = 2 * part_sizes.iter().sum::<usize>() + fam.len();
    let mut g = Graph::new(total)?;
    let mut next = 0usize;
    let mut block = |size: usize| {
        let s: VertexSet = (next..next + size).collect();
        next += size;
        s
    };
    let a_parts: Vec<VertexSet> = part_sizes.iter().map(|&s| block(s)).collect();
    let b_parts: Vec<VertexSet> = part_sizes.iter().map(|&s| block(s)).collect();
    let v_k: Vec<usize> = (0..fam.len()).map(|_| block(1).min().expect("one vertex")).collect();
    let join = |g: &mut Graph, x: VertexSet, y: VertexSet| -> Result<()> {
        for u in x {
            for v in y {
                g.add_edge(u, v)?;
            }
        }
        Ok(())
    };
    for i in 0..n {
        for j in 0..n {
            if i < j {
                join(&mut g, a_parts[i], a_parts[j])?;
                join(&mut g, b_parts[i], b_parts[j])?;
            }
        }
        join(&mut g, a_parts[i], b_parts[i])?;
    }
    for (k, &v) in fam.iter().zip(&v_k) {
        for &i in k {
            join(&mut g, VertexSet::singleton(v), a_parts[i - 1])?;
        }
    }
    if let Some(path) = g.find_induced_path(6) {
        return Err(Error::Invariant(format!(
            "generated example has an induced P6 {path:?}"
        )));
    }
    Ok(Fig1Instance {
        graph: g,
        a_parts,
        b_parts,
        v_k,
        family: fam.to_vec(),
        i0,
    })
}

/// The caption instance: `n = 7`, `i₀ = 2`, family `{1,2},{2,3,4,5},{5,6,7}`,
/// singleton parts.
pub fn fig1_caption_instance() -> Fig1Instance {
    gen_fig1(7, 2, &[vec![1, 2], vec![2, 3, 4, 5], vec![5, 6, 7]], &[1; 7])
        .expect("caption instance is valid")
}

/// `n` hexagons plus two hubs `a`, `b`.
#[derive(Clone, Debug)]
pub struct GnInstance {
    pub graph: Graph,
    /// `cycles[i][j]` is `v_{i+1,j}`.
    pub cycles: Vec<[usize; 6]>,
    pub a: usize,
    pub b: usize,
}

impl GnInstance {
    /// `I_f = {v_{i,f(i)}, v_{i,f(i)+3}}` for `f(i) ∈ {0,2,4}`.
    pub fn i_f(&self, f: &[usize]) -> VertexSet {
        let mut s = VertexSet::EMPTY;
        for (c, &fi) in self.cycles.iter().zip(f) {
            s.insert(c[fi % 6]);
            s.insert(c[(fi + 3) % 6]);
        }
        s
    }

    /// `S_f = {v_{i,f(i)+1}, v_{i,f(i)+2}, v_{i,f(i)+4}, v_{i,f(i)+5}}`.
    pub fn s_f(&self, f: &[usize]) -> VertexSet {
        let mut s = VertexSet::EMPTY;
        for (c, &fi) in self.cycles.iter().zip(f) {
            for off in [1, 2, 4, 5] {
                s.insert(c[(fi + off) % 6]);
            }
        }
        s
    }

    /// `A_f = {a} ∪ {v_{i,f(i)}}`.
    pub fn a_f(&self, f: &[usize]) -> VertexSet {
        let mut s = VertexSet::singleton(self.a);
        for (c, &fi) in self.cycles.iter().zip(f) {
            s.insert(c[fi % 6]);
        }
        s
    }

    /// `B_f = {b} ∪ {v_{i,f(i)+3}}`.
    pub fn b_f(&self, f: &[usize]) -> VertexSet {
        let mut s = VertexSet::singleton(self.b);
        for (c, &fi) in self.cycles.iter().zip(f) {
            s.insert(c[(fi + 3) % 6]);
        }
        s
    }
}

/// The hexagon family: vertices `6i..6i+5` form the `(i+1)`-th cycle,
/// `a = 6n`, `b = 6n+1`. Checked to be P7-free (it is not P6-free in
/// general, so it is only used by oracle and stress tests).
pub fn gen_gn(n: usize) -> Result<GnInstance> {
    if n == 0 {
        return Err(Error::InvalidInput("need n ≥ 1".into()));
    }
    let total = 6 * n + 2;
    let mut g = Graph::new(total)?;
    let a = 6 * n;
    let b = 6 * n + 1;
    let mut cycles = Vec::new();
    for i in 0..n {
        let c: [usize; 6] = std::array::from_fn(|j| 6 * i + j);
        for j in 0..6 {
            g.add_edge(c[j], c[(j + 1) % 6])?;
        }
        for j in [0, 2, 4] {
            g.add_edge(a, c[j])?;
            g.add_edge(b, c[j + 1])?;
        }
        cycles.push(c);
    }
    if let Some(path) = g.find_induced_path(7) {
        return Err(Error::Invariant(format!(
            "hexagon family has an induced P7 {path:?}"
        )));
    }
    Ok(GnInstance {
        graph: g,
        cycles,
        a,
        b,
    })
}

/// All maximal cliques of a graph by subset enumeration (tiny graphs only).
pub fn maximal_cliques_brute(g: &Graph) -> Vec<VertexSet> {
    let all = g.vertices();
    let mut out = Vec::new();
    for s in all.all_subsets() {
        if s.is_empty() || !g.is_clique(s) {
            continue;
        }
        let extendable = (all - s).iter().any(|v| s.is_subset(g.neighbors(v)));
        if !extendable {
            out.push(s);
        }
    }
    out.sort();
    out
}

/// Whether a graph is chordal, by checking every vertex subset of size ≥ 4
/// for an induced cycle through the definition (tiny graphs only).
pub fn is_chordal_brute(g: &Graph) -> bool {
    // A graph is chordal iff repeatedly deleting simplicial vertices empties
    // it; this is independent of the MCS-based test in the chordal module.
    let mut rest = g.vertices();
    loop {
        if rest.is_empty() {
            return true;
        }
        let simplicial = rest.iter().find(|&v| g.is_clique(g.neighbors(v) & rest));
        match simplicial {
            Some(v) => rest.remove(v),
            None => return false,
        }
    }
}

/// Every minimal triangulation of `g` (as fill edge sets), by eliminating
/// along all `n!` vertex orders and keeping the inclusion-minimal fills.
/// Intended for `n ≤ 8`.
pub fn minimal_triangulations_brute(g: &Graph) -> Result<Vec<Vec<(usize, usize)>>> {
    let n = g.n();
    if n > 9 {
        return Err(Error::cap("triangulation enumeration size", 9));
    }
    let mut fills: Vec<Vec<(usize, usize)>> = Vec::new();
    let mut order: Vec<usize> = (0..n).collect();
    let mut seen = std::collections::HashSet::new();
    permute(&mut order, 0, &mut |ord| {
        let fill = elimination_fill(g, ord);
        if seen.insert(fill.clone()) {
            fills.push(fill);
        }
    });
    // Keep the inclusion-minimal fills.
    let sets: Vec<std::collections::HashSet<(usize, usize)>> =
        fills.iter().map(|f| f.iter().copied().collect()).collect();
    let mut out = Vec::new();
    for (i, f) in sets.iter().enumerate() {
        let dominated = sets
            .iter()
            .enumerate()
            .any(|(j, h)| j != i && h.len() < f.len() && h.is_subset(f));
        if !dominated {
            let mut v: Vec<_> = f.iter().copied().collect();
            v.sort();
            out.push(v);
        }
    }
    out.sort();
    Ok(out)
}

fn permute(order: &mut Vec<usize>, k: usize, visit: &mut dyn FnMut(&[usize])) {
    if k == order.len() {
        visit(order);
        return;
    }
    for i in k..order.len() {
        order.swap(k, i);
        permute(order, k + 1, visit);
        order.swap(k, i);
    }
}

fn elimination_fill(g: &Graph, order: &[usize]) -> Vec<(usize, usize)> {
    let mut h = g.clone();
    let mut fill = Vec::new();
    let mut alive = g.vertices();
    for &v in order {
        let nb: Vec<usize> = (h.neighbors(v) & alive).iter().collect();
        for (i, &a) in nb.iter().enumerate() {
            for &b in &nb[i + 1..] {
                if !h.has_edge(a, b) {
                    h.add_edge(a, b).expect("valid edge");
                    fill.push((a.min(b), a.max(b)));
                }
            }
        }
        alive.remove(v);
    }
    fill.sort();
    fill
}

/// Potential maximal cliques as the union of the maximal cliques of all
/// minimal triangulations.
pub fn pmcs_brute(g: &Graph) -> Result<Vec<VertexSet>> {
    let mut out = std::collections::BTreeSet::new();
    for fill in minimal_triangulations_brute(g)? {
        let mut h = g.clone();
        for (u, v) in fill {
            h.add_edge(u, v)?;
        }
        out.extend(maximal_cliques_brute(&h));
    }
    Ok(out.into_iter().collect())
}

/// Minimal separators straight from the definition: sets with at least two
/// full components.
pub fn minimal_separators_brute(g: &Graph) -> Vec<VertexSet> {
    let mut out = Vec::new();
    for s in g.vertices().all_subsets() {
        let full = g
            .connected_components(s)
            .into_iter()
            .filter(|d| g.open_neighborhood(*d) == s)
            .count();
        if full >= 2 {
            out.push(s);
        }
    }
    out.sort();
    out
}

/// Canonical form of a graph under relabelling (lexicographically smallest
/// adjacency over all permutations). Tiny graphs only.
pub fn canonical_form(g: &Graph) -> Vec<u64> {
    let n = g.n();
    let mut best: Option<Vec<u64>> = None;
    let mut order: Vec<usize> = (0..n).collect();
    permute(&mut order, 0, &mut |perm| {
        let h = g.permuted(perm);
        let key: Vec<u64> = (0..n).map(|v| h.neighbors(v).bits()).collect();
        if best.as_ref().is_none_or(|b| key < *b) {
            best = Some(key);
        }
    });
    best.unwrap_or_default()
}

/// One representative of every isomorphism class of graphs on `n` vertices.
pub fn graphs_up_to_isomorphism(n: usize) -> Vec<Graph> {
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .collect();
    let mut seen = std::collections::HashSet::new();
    let mut out = Vec::new();
    for mask in 0u64..(1u64 << pairs.len()) {
        let edges: Vec<_> = pairs
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &e)| e)
            .collect();
        let g = Graph::from_edges(n, &edges).expect("valid edges");
        if seen.insert(canonical_form(&g)) {
            out.push(g);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::named::*;
    use crate::vset::vset;

    fn solve(g: Graph, problem: Problem, d: usize) -> u64 {
        let n = g.n();
        let inst = Instance {
            g,
            w: WeightMap::unit(n),
            problem,
        };
        brute_force_solve(&inst, d).unwrap().unwrap().weight
    }

    #[test]
    fn brute_force_examples() {
        assert_eq!(solve(cycle(5), Problem::Mwis, 1), 2);
        assert_eq!(solve(cycle(4), Problem::Fvs, 3), 3);
        assert_eq!(solve(complete(6), Problem::Mwis, 1), 1);
        // An induced P4 needs treedepth 3.
        assert_eq!(solve(path(4), Problem::Fvs, 2), 3);
        assert_eq!(solve(path(4), Problem::Fvs, 3), 4);
    }

    #[test]
    fn brute_force_is_relabelling_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..20 {
            let g = random_graph(8, 0.4, &mut rng);
            let mut perm: Vec<usize> = (0..8).collect();
            for i in (1..8).rev() {
                perm.swap(i, rng.random_range(0..=i));
            }
            let h = g.permuted(&perm);
            for p in [Problem::Mwis, Problem::Fvs] {
                assert_eq!(solve(g.clone(), p, 3), solve(h.clone(), p, 3));
            }
        }
    }

    #[test]
    fn treedepth_known_values() {
        for (n, td) in [(1, 1), (2, 2), (3, 2), (4, 3), (7, 3), (8, 4)] {
            let g = path(n);
            assert_eq!(TreedepthOracle::new(&g).treedepth(g.vertices()), td, "P{n}");
        }
        let k4 = complete(4);
        assert_eq!(TreedepthOracle::new(&k4).treedepth(k4.vertices()), 4);
    }

    #[test]
    fn random_generator_is_deterministic_and_p6_free() {
        for seed in 0..10 {
            let a = gen_random_p6free(9, 0.3, seed).unwrap();
            let b = gen_random_p6free(9, 0.3, seed).unwrap();
            assert_eq!(a, b);
            assert!(a.is_pt_free(6));
        }
        assert!(gen_random_p6free(4, 0.5, 3).unwrap().is_pt_free(6));
    }

    #[test]
    fn fig1_small() {
        let inst = gen_fig1(1, 1, &[vec![1]], &[1]).unwrap();
        assert_eq!(inst.graph.n(), 3);
        let cap = fig1_caption_instance();
        assert_eq!(cap.graph.n(), 17);
        assert!(cap.graph.is_pt_free(6));
    }

    #[test]
    fn gn_counts() {
        let g1 = gen_gn(1).unwrap();
        assert_eq!((g1.graph.n(), g1.graph.m()), (8, 12));
        let g2 = gen_gn(2).unwrap();
        assert_eq!((g2.graph.n(), g2.graph.m()), (14, 24));
    }

    #[test]
    fn triangulation_oracle_on_cycles() {
        assert_eq!(minimal_triangulations_brute(&cycle(4)).unwrap().len(), 2);
        assert_eq!(minimal_triangulations_brute(&cycle(5)).unwrap().len(), 5);
        assert_eq!(minimal_triangulations_brute(&complete(4)).unwrap(), vec![vec![]]);
        assert_eq!(
            pmcs_brute(&cycle(4)).unwrap(),
            vec![vset(&[0, 1, 2]), vset(&[0, 1, 3]), vset(&[0, 2, 3]), vset(&[1, 2, 3])]
        );
    }

    #[test]
    fn isomorphism_classes() {
        let counts: Vec<usize> = (1..=5).map(|n| graphs_up_to_isomorphism(n).len()).collect();
        assert_eq!(counts, vec![1, 2, 4, 11, 34]);
    }
}
