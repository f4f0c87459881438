//! The carver-driven dynamic program: templates, valid extensions, the
//! combining step, the subroutine over a sequence of components, the main
//! loops and the finalizing step.
//!
//! Internally every structure handled by the table is a *chain extension*:
//! the template forest `𝒯` is a single root path `P` (possibly empty) whose
//! deepest node lies in the carver `C`. This is all the correctness argument
//! needs, because the carver witnesses meet the target structure in a
//! vertical set, whose ancestor closure is such a path. Entries are keyed by
//! the chain and the component `D` rather than by `C`: whether a partial
//! solution is a valid extension never depends on `C`.

use std::cmp::Ordering;
use std::collections::hash_map::Entry;
use std::collections::{BTreeMap, HashMap};
use std::hash::Hash;

use rustc_hash::{FxBuildHasher, FxHashSet};

use serde::Serialize;

use crate::automata::{cap, label_structure, run, CappedMultiset, Label, ThresholdAutomaton};
use crate::carvers::CarverFamily;
use crate::error::{Error, Result};
use crate::forest::{prec1, validate_structure, PartialSolution, RootedForest, TreedepthStructure};
use crate::graph::{Graph, WeightMap};
use crate::vset::VertexSet;

/// Deterministic hashing keeps runs (and their counters) reproducible.
type Map<K, V> = HashMap<K, V, FxBuildHasher>;

const NO_PARENT: u8 = u8::MAX;

/// Structures are never deeper than the labeller allows.
const MAX_DEPTH_SETS: usize = crate::automata::MAX_LABEL_DEPTH;

/// Default cap on the number of simple pre-templates.
pub const DEFAULT_PRE_TEMPLATE_CAP: usize = 5_000_000;

/// Default cap on the number of non-`⊥` table entries.
pub const DEFAULT_TABLE_CAP: usize = 10_000_000;

/// Tuning knobs of [`solve`].
#[derive(Clone, Debug, Serialize)]
pub struct SolveOptions {
    /// Depth bound of the structures.
    pub d: usize,
    /// Defect: at most `k` vertices of a template forest lie in its carver.
    pub k: usize,
    /// Number of main-phase loops; `None` means `|V(G)|`.
    pub max_loops: Option<usize>,
    /// Stop the main phase early once a loop changes no entry (later loops
    /// would recompute exactly the same values).
    pub stop_at_fixpoint: bool,
    pub pre_template_cap: usize,
    pub table_cap: usize,
}

impl SolveOptions {
    pub fn new(d: usize, k: usize) -> Self {
        SolveOptions {
            d,
            k,
            max_loops: None,
            stop_at_fixpoint: true,
            pre_template_cap: DEFAULT_PRE_TEMPLATE_CAP,
            table_cap: DEFAULT_TABLE_CAP,
        }
    }
}

/// Progress and size counters of a run.
#[derive(Clone, Debug, Default, Serialize, PartialEq, Eq)]
pub struct SolveStats {
    pub chains: usize,
    pub pre_templates: usize,
    pub groups: usize,
    pub loops: usize,
    pub table_entries: usize,
    pub updates: usize,
    pub pairs: usize,
    pub subroutine_runs: usize,
    pub candidates: usize,
}

/// An optimal solution found by the program.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solution {
    pub x: VertexSet,
    pub sol: VertexSet,
    pub weight: u64,
    pub structure: TreedepthStructure,
}

/// Result of [`solve`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Optimal(Solution),
    Infeasible,
}

/// Sparse multistate assignment: `None` stands for the extra element `∅`
/// (new roots), `Some(v)` for node `v`; absent keys map to the empty
/// multiset.
pub type MultistateAssignment<S> = BTreeMap<Option<usize>, CappedMultiset<S>>;

/// One subroutine level: each reached `ξ` with its best extension.
pub type SubroutineLevel<S> = Vec<(MultistateAssignment<S>, PartialSolution)>;

/// `(𝒯, X, Sol, C)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PreTemplate {
    pub ps: PartialSolution,
    pub c: VertexSet,
}

/// `(𝒯, X, Sol, C, D, ξ)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Template<S: Ord> {
    pub ps: PartialSolution,
    pub c: VertexSet,
    pub d_union: VertexSet,
    pub xi: MultistateAssignment<S>,
}

/// `(ξ₁ ∪ ξ₂)`, pointwise union followed by capping.
pub fn union_assignments<S: Ord + Clone>(
    a: &MultistateAssignment<S>,
    b: &MultistateAssignment<S>,
    tau: usize,
) -> MultistateAssignment<S> {
    let mut out = a.clone();
    for (k, m) in b {
        let merged = match out.get(k) {
            Some(prev) => prev.union(m),
            None => CappedMultiset::from_counts(tau, m.iter().map(|(s, c)| (s.clone(), c))),
        };
        out.insert(*k, merged);
    }
    out.retain(|_, m| !m.is_empty());
    out
}

/// Whether `cand` is an extension of `base`: `𝒯` is an induced subforest
/// of `𝒯'` keeping every parent (so roots stay roots) and `X`, `Sol` agree
/// on `V(𝒯)`.
pub fn is_extension(g: &Graph, base: &PartialSolution, cand: &PartialSolution) -> bool {
    let (f, f2) = (&base.t.forest, &cand.t.forest);
    let nodes = f.nodes();
    validate_structure(g, &cand.t)
        && nodes.is_subset(f2.nodes())
        && nodes.iter().all(|v| f.parent(v) == f2.parent(v))
        && cand.x & nodes == base.x
        && cand.sol & nodes == base.sol
        && cand.x.is_subset(cand.sol)
        && cand.sol.is_subset(f2.nodes())
}

/// Whether `cand` is a valid extension of `template`: it extends the
/// template's partial solution only into `D`, and the run of `a` on its
/// labelled forest gives the new roots and the new children of every
/// template node exactly the multisets prescribed by `ξ`.
pub fn is_valid_extension<A: ThresholdAutomaton>(
    g: &Graph,
    template: &Template<A::State>,
    cand: &PartialSolution,
    a: &A,
) -> bool {
    if !is_extension(g, &template.ps, cand) {
        return false;
    }
    let old = template.ps.t.forest.nodes();
    let f = &cand.t.forest;
    let new = f.nodes() - old;
    if !new.is_subset(template.d_union) {
        return false;
    }
    let Ok(lf) = label_structure(g, cand) else {
        return false;
    };
    let Ok((states, _)) = run(a, &lf) else {
        return false;
    };
    let tau = a.tau();
    let mut found: MultistateAssignment<A::State> = BTreeMap::new();
    let mut raw: BTreeMap<Option<usize>, Vec<A::State>> = BTreeMap::new();
    for v in new {
        let slot = f.parent(v);
        if slot.is_some_and(|p| !old.contains(p)) {
            continue;
        }
        raw.entry(slot).or_default().push(states[v].clone().expect("every node has a state"));
    }
    for (slot, items) in raw {
        found.insert(slot, CappedMultiset::from_items(tau, items));
    }
    let mut expected = template.xi.clone();
    expected.retain(|_, m| !m.is_empty());
    found == expected
}

/// The union of two extensions of the same pre-template into disjoint parts
/// of `G − C`; fails if the two forests are not compatible.
pub fn combine<S: Ord + Clone>(
    g: &Graph,
    e1: &PartialSolution,
    e2: &PartialSolution,
    t1: &Template<S>,
    t2: &Template<S>,
) -> Result<PartialSolution> {
    if t1.ps != t2.ps || t1.c != t2.c {
        return Err(Error::Precondition("templates are over different pre-templates".into()));
    }
    if t1.d_union.intersects(t2.d_union) {
        return Err(Error::Precondition("template parts overlap".into()));
    }
    let (f1, f2) = (&e1.t.forest, &e2.t.forest);
    if !f1.compatible(f2, g) {
        return Err(Error::Invariant("extensions have incompatible forests".into()));
    }
    let d = e1.t.d.max(e2.t.d);
    Ok(PartialSolution::new(
        TreedepthStructure::new(f1.union(f2), d),
        e1.x | e2.x,
        e1.sol | e2.sol,
    ))
}

/// A partial solution in compact form; `parent` is indexed by vertex.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
struct Ext {
    nodes: VertexSet,
    x: VertexSet,
    sol: VertexSet,
    weight: u64,
    parent: [u8; 64],
}

impl Ext {
    fn depth(&self, v: usize) -> usize {
        let mut h = 1;
        let mut cur = self.parent[v];
        while cur != NO_PARENT {
            h += 1;
            cur = self.parent[cur as usize];
        }
        h
    }

    fn depth_sets(&self) -> [VertexSet; MAX_DEPTH_SETS] {
        let mut out = [VertexSet::EMPTY; MAX_DEPTH_SETS];
        for v in self.nodes {
            let h = self.depth(v);
            if h <= MAX_DEPTH_SETS {
                out[h - 1].insert(v);
            }
        }
        out
    }

    /// The ancestor closure of `s`.
    fn closure(&self, s: VertexSet) -> VertexSet {
        let mut out = VertexSet::EMPTY;
        for v in s {
            let mut cur = v;
            loop {
                if out.contains(cur) {
                    break;
                }
                out.insert(cur);
                let p = self.parent[cur];
                if p == NO_PARENT {
                    break;
                }
                cur = p as usize;
            }
        }
        out
    }

    fn to_partial(&self, n: usize, d: usize) -> PartialSolution {
        let entries: Vec<(usize, Option<usize>)> = self
            .nodes
            .iter()
            .map(|v| (v, (self.parent[v] != NO_PARENT).then(|| self.parent[v] as usize)))
            .collect();
        let f = RootedForest::from_parents(n, &entries).expect("compact extension is a forest");
        PartialSolution::new(TreedepthStructure::new(f, d), self.x, self.sol)
    }
}

/// The tie-breaking order on compact extensions; `Less` means `a` is better.
fn ext_order(a: &Ext, b: &Ext, d: usize) -> Ordering {
    b.weight
        .cmp(&a.weight)
        .then_with(|| prec1(a.x, b.x))
        .then_with(|| prec1(a.sol, b.sol))
        .then_with(|| prec1(a.nodes, b.nodes))
        .then_with(|| {
            let (da, db) = (a.depth_sets(), b.depth_sets());
            (0..d.min(MAX_DEPTH_SETS))
                .map(|i| prec1(da[i], db[i]))
                .find(|o| o.is_ne())
                .unwrap_or(Ordering::Equal)
        })
}

struct Interner<T> {
    map: Map<T, u32>,
    items: Vec<T>,
}

impl<T: Hash + Eq + Clone> Interner<T> {
    fn new() -> Self {
        Interner {
            map: Map::default(),
            items: Vec::new(),
        }
    }

    fn id(&mut self, t: T) -> u32 {
        match self.map.entry(t) {
            Entry::Occupied(e) => *e.get(),
            Entry::Vacant(e) => {
                let id = self.items.len() as u32;
                self.items.push(e.key().clone());
                e.insert(id);
                id
            }
        }
    }

    fn get(&self, id: u32) -> &T {
        &self.items[id as usize]
    }
}

impl<X: Hash + Eq + Clone> Interner<Vec<X>> {
    /// Like [`Interner::id`], allocating only for unseen keys.
    fn id_slice(&mut self, key: &[X]) -> u32 {
        match self.map.get(key) {
            Some(&id) => id,
            None => self.id(key.to_vec()),
        }
    }
}

/// A root path `seq[0] → seq[1] → …` with its `X` and `Sol`.
#[derive(Clone, Debug)]
struct Chain {
    seq: Vec<u8>,
    set: VertexSet,
    x: VertexSet,
    sol: VertexSet,
}

impl Chain {
    fn parent_of(&self, v: usize) -> u8 {
        match self.seq.iter().position(|&u| usize::from(u) == v) {
            Some(0) | None => NO_PARENT,
            Some(i) => self.seq[i - 1],
        }
    }

    fn position(&self, v: usize) -> Option<usize> {
        self.seq.iter().position(|&u| usize::from(u) == v)
    }

    /// Vertices on the path up to and including `v`.
    fn prefix_through(&self, v: usize) -> VertexSet {
        let i = self.position(v).expect("vertex on chain");
        self.seq[..=i].iter().map(|&u| usize::from(u)).collect()
    }
}

/// Table entries sharing a chain and a component.
struct Group {
    chain: u32,
    d: VertexSet,
    carvers: Vec<usize>,
    entries: Map<u32, Ext>,
}

/// Capped multisets of interned states, `ξ` assignments, and memoised
/// transitions.
struct Algebra<'a, A: ThresholdAutomaton> {
    a: &'a A,
    tau: usize,
    states: Interner<A::State>,
    multisets: Interner<Vec<(u32, u8)>>,
    xis: Interner<Vec<(u8, u32)>>,
    delta_memo: Map<(Label, u32), u32>,
    ms_union: Map<(u32, u32), u32>,
    xi_union: Map<(u32, u32), u32>,
}

impl<'a, A: ThresholdAutomaton> Algebra<'a, A> {
    fn new(a: &'a A) -> Self {
        let mut alg = Algebra {
            a,
            tau: a.tau(),
            states: Interner::new(),
            multisets: Interner::new(),
            xis: Interner::new(),
            delta_memo: Map::default(),
            ms_union: Map::default(),
            xi_union: Map::default(),
        };
        alg.multisets.id(Vec::new());
        alg.xis.id(Vec::new());
        alg
    }

    /// The capped multiset of `items` (which gets sorted in place).
    fn multiset_of(&mut self, items: &mut [u32]) -> u32 {
        if items.is_empty() {
            return 0;
        }
        items.sort_unstable();
        let mut buf = [(0u32, 0u8); 64];
        let mut len = 0;
        for &s in items.iter() {
            if len > 0 && buf[len - 1].0 == s {
                buf[len - 1].1 = buf[len - 1].1.saturating_add(1);
            } else {
                buf[len] = (s, 1);
                len += 1;
            }
        }
        self.capped(&mut buf[..len])
    }

    fn capped(&mut self, raw: &mut [(u32, u8)]) -> u32 {
        let tau = self.tau;
        let mut len = 0;
        for i in 0..raw.len() {
            let (s, c) = raw[i];
            let c = cap(usize::from(c), tau) as u8;
            if c > 0 {
                raw[len] = (s, c);
                len += 1;
            }
        }
        self.multisets.id_slice(&raw[..len])
    }

    fn generic_multiset(&self, id: u32) -> CappedMultiset<A::State> {
        CappedMultiset::from_counts(
            self.tau,
            self.multisets.get(id).iter().map(|&(s, c)| (self.states.get(s).clone(), usize::from(c))),
        )
    }

    fn delta(&mut self, label: Label, children: u32) -> Result<u32> {
        if let Some(&s) = self.delta_memo.get(&(label, children)) {
            return Ok(s);
        }
        let ms = self.generic_multiset(children);
        let state = self.a.delta(label, &ms)?;
        let id = self.states.id(state);
        self.delta_memo.insert((label, children), id);
        Ok(id)
    }

    fn accepts(&self, roots: u32) -> bool {
        self.a.accepts(&self.generic_multiset(roots))
    }

    fn union_ms(&mut self, a: u32, b: u32) -> u32 {
        if a == 0 {
            return b;
        }
        if b == 0 {
            return a;
        }
        let key = if a <= b { (a, b) } else { (b, a) };
        if let Some(&u) = self.ms_union.get(&key) {
            return u;
        }
        let (x, y) = (self.multisets.get(a).clone(), self.multisets.get(b).clone());
        let mut raw: BTreeMap<u32, u8> = BTreeMap::new();
        for (s, c) in x.into_iter().chain(y) {
            let e = raw.entry(s).or_default();
            *e = e.saturating_add(c);
        }
        let mut raw: Vec<(u32, u8)> = raw.into_iter().collect();
        let u = self.capped(&mut raw);
        self.ms_union.insert(key, u);
        u
    }

    fn union_xi(&mut self, a: u32, b: u32) -> u32 {
        if a == 0 {
            return b;
        }
        if b == 0 {
            return a;
        }
        let key = if a <= b { (a, b) } else { (b, a) };
        if let Some(&u) = self.xi_union.get(&key) {
            return u;
        }
        let (x, y) = (self.xis.get(a).clone(), self.xis.get(b).clone());
        let mut slots: BTreeMap<u8, u32> = BTreeMap::new();
        for (slot, m) in x.into_iter().chain(y) {
            let prev = slots.get(&slot).copied().unwrap_or(0);
            let merged = self.union_ms(prev, m);
            slots.insert(slot, merged);
        }
        let u = self.xis.id(slots.into_iter().filter(|&(_, m)| m != 0).collect());
        self.xi_union.insert(key, u);
        u
    }
}

/// The engine state: chains, pre-templates, the table and the algebra.
pub struct DpEngine<'a, A: ThresholdAutomaton> {
    g: &'a Graph,
    w: &'a WeightMap,
    fam: &'a CarverFamily,
    opts: SolveOptions,
    alg: Algebra<'a, A>,
    chains: Vec<Chain>,
    chain_index: Map<(Vec<u8>, VertexSet, VertexSet), u32>,
    /// Family indices `C` with `(chain, C)` a simple pre-template.
    pres: Vec<Vec<usize>>,
    /// Components of `G − C` per family index.
    comps: Vec<Vec<VertexSet>>,
    groups: Vec<Group>,
    group_index: Map<(u32, VertexSet), u32>,
    /// Compatible chains, each with the vertices appendable to the union.
    compat: Vec<Vec<(u32, VertexSet)>>,
    list_ids: Interner<Vec<u32>>,
    list_arena: Vec<u32>,
    useful_memo: Map<(u32, VertexSet), (usize, usize)>,
    /// Loop index (1-based) in which some group over the chain last changed;
    /// 0 means only the preliminary phase has touched it.
    changed_in: Vec<usize>,
    stats: SolveStats,
}



impl<'a, A: ThresholdAutomaton> DpEngine<'a, A> {
    /// Enumerates the simple pre-templates and runs the preliminary phase.
    pub fn new(g: &'a Graph, w: &'a WeightMap, fam: &'a CarverFamily, a: &'a A, opts: SolveOptions) -> Result<Self> {
        let n = g.n();
        if w.len() != n {
            return Err(Error::InvalidInput(format!("{} weights for {n} vertices", w.len())));
        }
        if opts.d == 0 {
            return Err(Error::Precondition("depth must be at least 1".into()));
        }
        if opts.d > crate::automata::MAX_LABEL_DEPTH {
            return Err(Error::cap("structure depth", crate::automata::MAX_LABEL_DEPTH));
        }
        let mut eng = DpEngine {
            g,
            w,
            fam,
            opts,
            alg: Algebra::new(a),
            chains: Vec::new(),
            chain_index: Map::default(),
            pres: Vec::new(),
            comps: fam.sets.iter().map(|&c| g.connected_components(c)).collect(),
            groups: Vec::new(),
            group_index: Map::default(),
            compat: Vec::new(),
            list_ids: Interner::new(),
            list_arena: Vec::new(),
            useful_memo: Map::default(),
            changed_in: Vec::new(),
            stats: SolveStats::default(),
        };
        eng.enumerate_chains();
        eng.build_groups()?;
        eng.build_compat();
        eng.changed_in = vec![0; eng.chains.len()];
        Ok(eng)
    }

    pub fn stats(&self) -> &SolveStats {
        &self.stats
    }

    fn label_in_chain(&self, seq: &[u8], i: usize, x: VertexSet, sol: VertexSet) -> Label {
        let v = usize::from(seq[i]);
        let mut f = 0u16;
        for (j, &u) in seq[..i].iter().enumerate() {
            if self.g.has_edge(v, usize::from(u)) {
                f |= 1 << j;
            }
        }
        Label {
            h: (i + 1) as u8,
            f,
            in_x: x.contains(v),
            in_sol: sol.contains(v),
        }
    }

    fn enumerate_chains(&mut self) {
        let n = self.g.n();
        let d = self.opts.d;
        let mut seqs: Vec<Vec<u8>> = vec![Vec::new()];
        let mut frontier: Vec<Vec<u8>> = vec![Vec::new()];
        for _ in 0..d {
            let mut next = Vec::new();
            for s in &frontier {
                for v in 0..n {
                    if !s.contains(&(v as u8)) {
                        let mut t = s.clone();
                        t.push(v as u8);
                        next.push(t);
                    }
                }
            }
            seqs.extend(next.iter().cloned());
            frontier = next;
        }
        for seq in seqs {
            let set: VertexSet = seq.iter().map(|&u| usize::from(u)).collect();
            for sol in set.all_subsets() {
                for x in sol.all_subsets() {
                    let ok = (0..seq.len()).all(|i| self.alg.a.admits(self.label_in_chain(&seq, i, x, sol)));
                    if ok {
                        let id = self.chains.len() as u32;
                        self.chain_index.insert((seq.clone(), x, sol), id);
                        self.chains.push(Chain {
                            seq: seq.clone(),
                            set,
                            x,
                            sol,
                        });
                    }
                }
            }
        }
    }

    fn build_groups(&mut self) -> Result<()> {
        let k = self.opts.k;
        let mut pre_count = 0usize;
        for ci in 0..self.chains.len() {
            let chain = &self.chains[ci];
            let mut pres = Vec::new();
            for (fi, &c) in self.fam.sets.iter().enumerate() {
                let deepest_in = chain.seq.last().is_none_or(|&v| c.contains(usize::from(v)));
                if deepest_in && (chain.set & c).len() <= k {
                    pres.push(fi);
                }
            }
            pre_count += pres.len();
            if pre_count > self.opts.pre_template_cap {
                return Err(Error::cap("simple pre-templates", self.opts.pre_template_cap));
            }
            self.pres.push(pres);
        }
        self.stats.chains = self.chains.len();
        self.stats.pre_templates = pre_count;
        for ci in 0..self.chains.len() {
            let base = self.base_ext(ci as u32);
            for &fi in &self.pres[ci] {
                for &dcomp in &self.comps[fi] {
                    match self.group_index.entry((ci as u32, dcomp)) {
                        Entry::Occupied(e) => self.groups[*e.get() as usize].carvers.push(fi),
                        Entry::Vacant(e) => {
                            e.insert(self.groups.len() as u32);
                            let mut entries = Map::default();
                            entries.insert(0, base.clone());
                            self.groups.push(Group {
                                chain: ci as u32,
                                d: dcomp,
                                carvers: vec![fi],
                                entries,
                            });
                        }
                    }
                }
            }
        }
        self.stats.groups = self.groups.len();
        self.stats.table_entries = self.groups.len();
        if self.stats.table_entries > self.opts.table_cap {
            return Err(Error::cap("table entries", self.opts.table_cap));
        }
        Ok(())
    }

    fn build_compat(&mut self) {
        let g = self.g;
        let useful: Vec<bool> = self.pres.iter().map(|p| !p.is_empty()).collect();
        let mut compat = vec![Vec::new(); self.chains.len()];
        for (i, a) in self.chains.iter().enumerate() {
            if !useful[i] {
                continue;
            }
            for (j, b) in self.chains.iter().enumerate() {
                if !useful[j] {
                    continue;
                }
                let l = a.seq.iter().zip(&b.seq).take_while(|(x, y)| x == y).count();
                let prefix: VertexSet = a.seq[..l].iter().map(|&u| usize::from(u)).collect();
                if a.set & b.set != prefix
                    || a.x & prefix != b.x & prefix
                    || a.sol & prefix != b.sol & prefix
                    || !g.anticomplete(a.set - prefix, b.set - prefix)
                {
                    continue;
                }
                compat[i].push((j as u32, VertexSet::EMPTY));
            }
        }
        for (i, list) in compat.iter_mut().enumerate() {
            for entry in list.iter_mut() {
                entry.1 = self.appendable(i as u32, entry.0, self.g.vertices());
            }
        }
        self.compat = compat;
    }

    fn base_ext(&self, ci: u32) -> Ext {
        let c = &self.chains[ci as usize];
        let mut parent = [NO_PARENT; 64];
        for i in 1..c.seq.len() {
            parent[usize::from(c.seq[i])] = c.seq[i - 1];
        }
        Ext {
            nodes: c.set,
            x: c.x,
            sol: c.sol,
            weight: self.w.of(c.x),
            parent,
        }
    }

    fn label_of(&self, e: &Ext, v: usize) -> Label {
        let mut anc: [u8; 16] = [0; 16];
        let mut len = 0;
        let mut cur = e.parent[v];
        while cur != NO_PARENT {
            anc[len] = cur;
            len += 1;
            cur = e.parent[usize::from(cur)];
        }
        // anc[len-1] is the root (depth 1), anc[0] the parent.
        let mut f = 0u16;
        for (i, &u) in anc[..len].iter().enumerate() {
            if self.g.has_edge(v, usize::from(u)) {
                f |= 1 << (len - 1 - i);
            }
        }
        Label {
            h: (len + 1) as u8,
            f,
            in_x: e.x.contains(v),
            in_sol: e.sol.contains(v),
        }
    }

    /// Runs the automaton on the nodes `part` of `e` (a union of subtrees)
    /// and returns each node's state, indexed by vertex.
    fn run_part(&mut self, e: &Ext, part: VertexSet) -> Result<[u32; 64]> {
        let mut order = [(0u8, 0u8); 64];
        let mut len = 0;
        for v in part {
            order[len] = (e.depth(v) as u8, v as u8);
            len += 1;
        }
        order[..len].sort_unstable_by(|a, b| b.cmp(a));
        let mut state = [0u32; 64];
        let mut children = [0u32; 64];
        for &(_, v) in &order[..len] {
            let v = usize::from(v);
            let mut c = 0;
            for u in part {
                if usize::from(e.parent[u]) == v {
                    children[c] = state[u];
                    c += 1;
                }
            }
            let ms = self.alg.multiset_of(&mut children[..c]);
            let label = self.label_of(e, v);
            state[v] = self.alg.delta(label, ms)?;
        }
        Ok(state)
    }

    /// `ξ` of `e` relative to the chain `ci`, reading the states of the new
    /// nodes.
    fn xi_of(&mut self, ci: u32, e: &Ext) -> Result<u32> {
        let chain = &self.chains[ci as usize];
        let chain_set = chain.set;
        let mut slot_of = [u8::MAX; 64];
        for (i, &u) in chain.seq.iter().enumerate() {
            slot_of[usize::from(u)] = (i + 1) as u8;
        }
        let new = e.nodes - chain_set;
        let state = self.run_part(e, new)?;
        let mut pairs = [(0u8, 0u32); 64];
        let mut len = 0;
        for v in new {
            let p = e.parent[v];
            let slot = if p == NO_PARENT { 0 } else { slot_of[usize::from(p)] };
            if slot != u8::MAX {
                pairs[len] = (slot, state[v]);
                len += 1;
            }
        }
        pairs[..len].sort_unstable();
        let mut xi = [(0u8, 0u32); 17];
        let mut xl = 0;
        let mut i = 0;
        let mut items = [0u32; 64];
        while i < len {
            let slot = pairs[i].0;
            let mut c = 0;
            while i < len && pairs[i].0 == slot {
                items[c] = pairs[i].1;
                c += 1;
                i += 1;
            }
            let m = self.alg.multiset_of(&mut items[..c]);
            if m != 0 {
                xi[xl] = (slot, m);
                xl += 1;
            }
        }
        Ok(self.alg.xis.id_slice(&xi[..xl]))
    }

    /// Vertices of `within` that can be appended to the union of the chains
    /// `ci` and `cj` (which must be compatible).
    fn appendable(&self, ci: u32, cj: u32, within: VertexSet) -> VertexSet {
        let (a, b) = (&self.chains[ci as usize], &self.chains[cj as usize]);
        let union = a.set | b.set;
        let d = self.opts.d;
        let mut out = VertexSet::EMPTY;
        for v in within - union {
            let attach = self.g.neighbors(v) & union;
            if attach.is_empty() {
                out.insert(v);
                continue;
            }
            let ok = [a, b].iter().any(|ch| {
                let on = attach & ch.set;
                if on != attach {
                    return false;
                }
                let deepest = ch
                    .seq
                    .iter()
                    .rposition(|&u| on.contains(usize::from(u)))
                    .expect("attach is nonempty");
                deepest + 1 < d && on.is_subset(ch.prefix_through(usize::from(ch.seq[deepest])))
            });
            if ok {
                out.insert(v);
            }
        }
        out
    }

    /// The distinct lists of groups `(cj, D₀)` over the pre-templates
    /// `(cj, C₀)`, where `D₀` ranges over the components of `G − C₀` meeting
    /// `z`.
    fn useful_lists(&mut self, cj: u32, z: VertexSet) -> (usize, usize) {
        if let Some(&r) = self.useful_memo.get(&(cj, z)) {
            return r;
        }
        let mut ids: Vec<u32> = Vec::new();
        for idx in 0..self.pres[cj as usize].len() {
            let fi = self.pres[cj as usize][idx];
            let list: Vec<u32> = self.comps[fi]
                .iter()
                .filter(|c| c.intersects(z))
                .map(|&c| self.group_index[&(cj, c)])
                .collect();
            let id = self.list_ids.id(list);
            if !ids.contains(&id) {
                ids.push(id);
            }
        }
        ids.sort_unstable();
        let r = (self.list_arena.len(), ids.len());
        self.list_arena.extend(ids);
        self.useful_memo.insert((cj, z), r);
        r
    }

    /// The last level of the subroutine for chain `cj` over the groups in
    /// `list` (all over the same chain): `ξ ↦` best combined extension.
    fn subroutine_last(&mut self, cj: u32, list: &[u32]) -> Map<u32, Ext> {
        self.stats.subroutine_runs += 1;
        let base = self.base_ext(cj);
        let base_set = base.nodes;
        let base_weight = base.weight;
        let mut cur: Map<u32, Ext> = Map::default();
        cur.insert(0, base);
        let d = self.opts.d;
        for &gid in list {
            let mut next: Map<u32, Ext> = Map::default();
            let group = &self.groups[gid as usize];
            debug_assert_eq!(group.chain, cj);
            for (&xl, el) in &cur {
                for (&xe, ee) in &group.entries {
                    let xi = self.alg.union_xi(xl, xe);
                    let mut comb = el.clone();
                    for v in ee.nodes - base_set {
                        comb.parent[v] = ee.parent[v];
                    }
                    comb.nodes |= ee.nodes;
                    comb.x |= ee.x;
                    comb.sol |= ee.sol;
                    comb.weight = el.weight + ee.weight - base_weight;
                    match next.entry(xi) {
                        Entry::Vacant(e) => {
                            e.insert(comb);
                        }
                        Entry::Occupied(mut e) => {
                            if ext_order(&comb, e.get(), d).is_lt() {
                                e.insert(comb);
                            }
                        }
                    }
                }
            }
            cur = next;
        }
        cur
    }

    /// Appends to `out` the ids of the distinct pieces `(𝒯₀'[A], X₀' ∩ A,
    /// Sol₀' ∩ A)` of `results`, where `A` is the ancestor closure of the
    /// nodes in `dset`.
    fn pieces(results: &[Ext], dset: VertexSet, ids: &mut Interner<Ext>, out: &mut Vec<u32>) {
        let start = out.len();
        for e0 in results {
            let in_d = e0.nodes & dset;
            if in_d.is_empty() {
                continue;
            }
            let a = e0.closure(in_d);
            let mut piece = Ext {
                nodes: a,
                x: e0.x & a,
                sol: e0.sol & a,
                weight: 0,
                parent: [NO_PARENT; 64],
            };
            for v in a {
                piece.parent[v] = e0.parent[v];
            }
            out.push(ids.id(piece));
        }
        let mut fresh = out.split_off(start);
        fresh.sort_unstable();
        fresh.dedup();
        out.extend(fresh);
    }

    /// Merges a piece (see [`Self::pieces`]) into the group's chain, or
    /// `None` if the result would not be a valid extension into `dset`.
    fn merge_piece(&self, ci: u32, dset: VertexSet, piece: &Ext) -> Option<Ext> {
        let chain = &self.chains[ci as usize];
        let p = chain.set;
        let a = piece.nodes;
        let new = a - p;
        if !(a & dset).intersects(new) || !new.is_subset(dset) {
            return None;
        }
        if (a & p).iter().any(|v| piece.parent[v] != chain.parent_of(v)) {
            return None;
        }
        if !self.g.anticomplete(new, p - a) {
            return None;
        }
        if !(piece.x & p).is_subset(chain.x) || !(piece.sol & p).is_subset(chain.sol) {
            return None;
        }
        let mut cand = self.base_ext(ci);
        for v in new {
            cand.parent[v] = piece.parent[v];
        }
        cand.nodes |= new;
        cand.x |= piece.x & new;
        cand.sol |= piece.sol & new;
        cand.weight = self.w.of(cand.x);
        Some(cand)
    }

    /// One main-phase loop; returns the number of improved entries.
    pub fn run_main_loop(&mut self) -> Result<usize> {
        let mut updates = 0usize;
        let empty_list = self.list_ids.id(Vec::new());
        // Per loop: subroutine results, restricted pieces (interned), and
        // the piece ids per (result, component).
        let mut results: Vec<Vec<Ext>> = Vec::new();
        let mut result_index: Map<(u32, u32), usize> = Map::default();
        let mut piece_ids: Interner<Ext> = Interner::new();
        let mut piece_cache: Map<(usize, VertexSet), (usize, usize)> = Map::default();
        let mut piece_arena: Vec<u32> = Vec::new();
        let mut union_cache: Map<(u32, VertexSet, VertexSet, bool), (usize, usize)> = Map::default();
        let mut union_arena: Vec<u32> = Vec::new();
        // `stamp[pid] == gid + 1` marks pieces already tried for group `gid`.
        let mut stamp: Vec<u32> = Vec::new();
        let d = self.opts.d;
        // Subroutine results over a chain depend only on the groups over that
        // chain. Results computed in the previous loop reflected every change
        // made before it started, so pairs whose chain has not changed since
        // then would reproduce exactly the same candidates.
        let this_loop = self.stats.loops + 1;
        let stale_before = this_loop.saturating_sub(1);
        let first = self.stats.loops == 0;
        for gid in 0..self.groups.len() {
            let (ci, dset) = (self.groups[gid].chain, self.groups[gid].d);
            let p = self.chains[ci as usize].set;
            let mut found: Vec<(u32, Ext)> = Vec::new();
            for idx in 0..self.compat[ci as usize].len() {
                let (cj, app) = self.compat[ci as usize][idx];
                if !first && self.changed_in[cj as usize] < stale_before {
                    continue;
                }
                self.stats.pairs += 1;
                let p0 = self.chains[cj as usize].set;
                let z = app & dset;
                let no_list = z.is_empty();
                if no_list && ((p0 - p) & dset).is_empty() {
                    continue;
                }
                let own_chain_in_d = !((p0 - p) & dset).is_empty();
                let (us, ul) = match union_cache.get(&(cj, z, dset, own_chain_in_d)) {
                    Some(&r) => r,
                    None => {
                        let (start, len) = if no_list { (usize::MAX, 1) } else { self.useful_lists(cj, z) };
                        let mut union: Vec<u32> = Vec::new();
                        let mut local: FxHashSet<u32> = FxHashSet::default();
                        for li in 0..len {
                            let list_id = if start == usize::MAX { empty_list } else { self.list_arena[start + li] };
                            if list_id == empty_list && !own_chain_in_d {
                                continue;
                            }
                            let ri = match result_index.get(&(cj, list_id)) {
                                Some(&ri) => ri,
                                None => {
                                    let list = self.list_ids.get(list_id).clone();
                                    results.push(self.subroutine_last(cj, &list).into_values().collect());
                                    result_index.insert((cj, list_id), results.len() - 1);
                                    results.len() - 1
                                }
                            };
                            let (ps, pl) = *piece_cache.entry((ri, dset)).or_insert_with(|| {
                                let s = piece_arena.len();
                                Self::pieces(&results[ri], dset, &mut piece_ids, &mut piece_arena);
                                (s, piece_arena.len() - s)
                            });
                            for &pid in &piece_arena[ps..ps + pl] {
                                if local.insert(pid) {
                                    union.push(pid);
                                }
                            }
                        }
                        let r = (union_arena.len(), union.len());
                        union_arena.extend(union);
                        union_cache.insert((cj, z, dset, own_chain_in_d), r);
                        r
                    }
                };
                if stamp.len() < piece_ids.items.len() {
                    stamp.resize(piece_ids.items.len(), 0);
                }
                for &pid in &union_arena[us..us + ul] {
                    if stamp[pid as usize] == gid as u32 + 1 {
                        continue;
                    }
                    stamp[pid as usize] = gid as u32 + 1;
                    let Some(cand) = self.merge_piece(ci, dset, piece_ids.get(pid)) else {
                        continue;
                    };
                    self.stats.candidates += 1;
                    let xi = self.xi_of(ci, &cand)?;
                    found.push((xi, cand));
                }
            }
            let before = updates;
            for (xi, cand) in found {
                let entries = &mut self.groups[gid].entries;
                match entries.entry(xi) {
                    Entry::Vacant(e) => {
                        e.insert(cand);
                        updates += 1;
                        self.stats.table_entries += 1;
                    }
                    Entry::Occupied(mut e) => {
                        if ext_order(&cand, e.get(), d).is_lt() {
                            e.insert(cand);
                            updates += 1;
                        }
                    }
                }
            }
            if updates > before {
                self.changed_in[ci as usize] = this_loop;
            }
            if self.stats.table_entries > self.opts.table_cap {
                return Err(Error::cap("table entries", self.opts.table_cap));
            }
        }
        self.stats.loops += 1;
        self.stats.updates += updates;
        Ok(updates)
    }

    /// Runs the main phase: `|V(G)|` loops (or `max_loops`), stopping early
    /// at a fixpoint when allowed.
    pub fn run_main_phase(&mut self) -> Result<()> {
        let loops = self.opts.max_loops.unwrap_or(self.g.n());
        for _ in 0..loops {
            let changed = self.run_main_loop()?;
            if changed == 0 && self.opts.stop_at_fixpoint {
                break;
            }
        }
        Ok(())
    }

    /// The finalizing step: the best accepted combination over all simple
    /// pre-templates and all components of `G − C`.
    pub fn finalize(&mut self) -> Result<Outcome> {
        let mut best: Option<Ext> = None;
        let mut seen: Map<(u32, Vec<u32>), ()> = Map::default();
        let d = self.opts.d;
        for ci in 0..self.chains.len() as u32 {
            for idx in 0..self.pres[ci as usize].len() {
                let fi = self.pres[ci as usize][idx];
                let list: Vec<u32> = self.comps[fi].iter().map(|&c| self.group_index[&(ci, c)]).collect();
                if seen.insert((ci, list.clone()), ()).is_some() {
                    continue;
                }
                let res = self.subroutine_last(ci, &list);
                let mut res: Vec<Ext> = res.into_values().collect();
                res.sort_by(|a, b| ext_order(a, b, d));
                for e in res {
                    if best.as_ref().is_some_and(|b| ext_order(&e, b, d).is_ge()) {
                        break;
                    }
                    let state = self.run_part(&e, e.nodes)?;
                    let mut roots: Vec<u32> =
                        e.nodes.iter().filter(|&v| e.parent[v] == NO_PARENT).map(|v| state[v]).collect();
                    let ms = self.alg.multiset_of(&mut roots);
                    if self.alg.accepts(ms) {
                        best = Some(e);
                        break;
                    }
                }
            }
        }
        Ok(match best {
            None => Outcome::Infeasible,
            Some(e) => Outcome::Optimal(Solution {
                x: e.x,
                sol: e.sol,
                weight: e.weight,
                structure: e.to_partial(self.g.n(), d).t,
            }),
        })
    }

    fn chain_of(&self, ps: &PartialSolution) -> Result<u32> {
        let f = &ps.t.forest;
        let nodes = f.nodes();
        let mut seq: Vec<u8> = Vec::new();
        let mut cur: Option<usize> = None;
        while seq.len() < nodes.len() {
            let next = nodes.iter().find(|&v| f.parent(v) == cur);
            let Some(v) = next else { break };
            seq.push(v as u8);
            cur = Some(v);
        }
        if seq.len() != nodes.len() || (nodes.iter().filter(|&v| f.parent(v) == cur).count() > 0) {
            return Err(Error::Precondition("template forest is not a root path".into()));
        }
        self.chain_index
            .get(&(seq, ps.x, ps.sol))
            .copied()
            .ok_or_else(|| Error::Precondition("partial solution is not a table chain".into()))
    }

    fn generic_xi(&self, ci: u32, xi: u32) -> MultistateAssignment<A::State> {
        let chain = &self.chains[ci as usize];
        self.alg
            .xis
            .get(xi)
            .iter()
            .map(|&(slot, m)| {
                let key = if slot == 0 { None } else { Some(usize::from(chain.seq[usize::from(slot) - 1])) };
                (key, self.alg.generic_multiset(m))
            })
            .collect()
    }

    /// The subroutine on the pre-template `pre` and the components `comps`
    /// of `G − C`: level `j` maps each `ξ` to the best valid extension of
    /// `(pre, D≤j, ξ)` found.
    pub fn run_subroutine(
        &mut self,
        pre: &PreTemplate,
        comps: &[VertexSet],
    ) -> Result<Vec<SubroutineLevel<A::State>>> {
        let ci = self.chain_of(&pre.ps)?;
        let fi = self
            .fam
            .sets
            .iter()
            .position(|&c| c == pre.c)
            .filter(|fi| self.pres[ci as usize].contains(fi))
            .ok_or_else(|| Error::Precondition("not a simple pre-template".into()))?;
        let mut list = Vec::new();
        for c in comps {
            if !self.comps[fi].contains(c) {
                return Err(Error::Precondition("sequence member is not a component of G − C".into()));
            }
            if list.contains(&self.group_index[&(ci, *c)]) {
                return Err(Error::Precondition("components must be pairwise distinct".into()));
            }
            list.push(self.group_index[&(ci, *c)]);
        }
        let mut levels = Vec::new();
        for j in 0..=list.len() {
            let last = self.subroutine_last(ci, &list[..j]);
            let mut level: Vec<(u32, Ext)> = last.into_iter().collect();
            level.sort_by_key(|&(xi, _)| xi);
            levels.push(
                level
                    .into_iter()
                    .map(|(xi, e)| (self.generic_xi(ci, xi), e.to_partial(self.g.n(), self.opts.d)))
                    .collect(),
            );
        }
        Ok(levels)
    }

    /// Every non-`⊥` table entry with its (simple) template; the reported
    /// carver is the first family member yielding the entry's component.
    pub fn table_entries(&self) -> Vec<(Template<A::State>, PartialSolution)> {
        let n = self.g.n();
        let d = self.opts.d;
        let mut out = Vec::new();
        for group in &self.groups {
            let base = self.base_ext(group.chain).to_partial(n, d);
            let mut entries: Vec<(&u32, &Ext)> = group.entries.iter().collect();
            entries.sort_by_key(|&(xi, _)| *xi);
            for (&xi, e) in entries {
                let t = Template {
                    ps: base.clone(),
                    c: self.fam.sets[group.carvers[0]],
                    d_union: group.d,
                    xi: self.generic_xi(group.chain, xi),
                };
                out.push((t, e.to_partial(n, d)));
            }
        }
        out
    }

    /// The simple pre-templates as public values.
    pub fn pre_templates(&self) -> Vec<PreTemplate> {
        let n = self.g.n();
        let d = self.opts.d;
        let mut out = Vec::new();
        for (ci, pres) in self.pres.iter().enumerate() {
            let ps = self.base_ext(ci as u32).to_partial(n, d);
            for &fi in pres {
                out.push(PreTemplate {
                    ps: ps.clone(),
                    c: self.fam.sets[fi],
                });
            }
        }
        out
    }
}

/// A solution together with the run's counters.
#[derive(Clone, Debug)]
pub struct SolveReport {
    pub outcome: Outcome,
    pub stats: SolveStats,
}

/// Runs the full program: preliminary phase, main phase, finalizing step.
pub fn solve<A: ThresholdAutomaton>(
    g: &Graph,
    w: &WeightMap,
    fam: &CarverFamily,
    a: &A,
    opts: SolveOptions,
) -> Result<SolveReport> {
    let mut eng = DpEngine::new(g, w, fam, a, opts)?;
    eng.run_main_phase()?;
    let outcome = eng.finalize()?;
    Ok(SolveReport {
        outcome,
        stats: eng.stats.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::{forest_automaton, mwis_automaton, ForestState, MwisState};
    use crate::carvers::build_family;
    use crate::forest::{enumerate_structures, solution_order};
    use crate::graph::named::*;
    use crate::harness::{brute_force_solve, gen_random_p6free, graphs_up_to_isomorphism, Instance, Problem};
    use crate::vset::vset;

    fn empty_ps(n: usize, d: usize) -> PartialSolution {
        PartialSolution::new(TreedepthStructure::empty(n, d), VertexSet::EMPTY, VertexSet::EMPTY)
    }

    fn ps_from(n: usize, d: usize, entries: &[(usize, Option<usize>)], x: VertexSet, sol: VertexSet) -> PartialSolution {
        let f = RootedForest::from_parents(n, entries).unwrap();
        PartialSolution::new(TreedepthStructure::new(f, d), x, sol)
    }

    /// Every partial solution of depth `d` whose labels the automaton admits.
    fn all_partial_solutions<A: ThresholdAutomaton>(g: &Graph, d: usize, a: &A) -> Vec<PartialSolution> {
        let mut out = Vec::new();
        for t in enumerate_structures(g, d, 1_000_000).unwrap() {
            for sol in t.nodes().all_subsets() {
                for x in sol.all_subsets() {
                    let ps = PartialSolution::new(t.clone(), x, sol);
                    let lf = label_structure(g, &ps).unwrap();
                    if t.nodes().iter().all(|v| a.admits(lf.label(v).unwrap())) {
                        out.push(ps);
                    }
                }
            }
        }
        out
    }

    /// `ξ` of `cand` relative to `base`, by running the automaton on the
    /// whole labelled forest.
    fn xi_relative<A: ThresholdAutomaton>(
        g: &Graph,
        base: &PartialSolution,
        cand: &PartialSolution,
        a: &A,
    ) -> MultistateAssignment<A::State> {
        let (states, _) = run(a, &label_structure(g, cand).unwrap()).unwrap();
        let old = base.t.nodes();
        let f = &cand.t.forest;
        let mut raw: BTreeMap<Option<usize>, Vec<A::State>> = BTreeMap::new();
        for v in f.nodes() - old {
            let p = f.parent(v);
            if p.is_none_or(|p| old.contains(p)) {
                raw.entry(p).or_default().push(states[v].clone().unwrap());
            }
        }
        raw.into_iter().map(|(k, items)| (k, CappedMultiset::from_items(a.tau(), items))).collect()
    }

    fn accepted<A: ThresholdAutomaton>(g: &Graph, ps: &PartialSolution, a: &A) -> bool {
        run(a, &label_structure(g, ps).unwrap()).unwrap().1
    }

    fn weight_of(outcome: &Outcome) -> Option<u64> {
        match outcome {
            Outcome::Optimal(s) => Some(s.weight),
            Outcome::Infeasible => None,
        }
    }

    fn solve_mwis(g: &Graph, w: &WeightMap) -> SolveReport {
        let fam = build_family(g, 1, 1).unwrap();
        solve(g, w, &fam, &mwis_automaton(1).unwrap(), SolveOptions::new(1, 1)).unwrap()
    }

    fn solve_forest(g: &Graph, w: &WeightMap, d: usize) -> SolveReport {
        let fam = build_family(g, d, d).unwrap();
        solve(g, w, &fam, &forest_automaton(d).unwrap(), SolveOptions::new(d, d)).unwrap()
    }

    #[test]
    fn independent_set_of_five_cycle() {
        let g = cycle(5);
        let rep = solve_mwis(&g, &WeightMap::unit(5));
        let Outcome::Optimal(s) = rep.outcome else { panic!("infeasible") };
        assert_eq!(s.weight, 2);
        assert!(g.is_independent(s.x));
        assert_eq!(s.x, s.sol);
    }

    #[test]
    fn induced_forest_of_four_cycle() {
        let g = cycle(4);
        let rep = solve_forest(&g, &WeightMap::unit(4), 3);
        let Outcome::Optimal(s) = rep.outcome else { panic!("infeasible") };
        assert_eq!(s.weight, 3);
        assert!(g.is_acyclic(s.sol));
        assert!(validate_structure(&g, &s.structure));
    }

    #[test]
    fn solutions_match_brute_force_on_all_small_graphs() {
        for n in 1..=5 {
            for g in graphs_up_to_isomorphism(n) {
                let w = WeightMap::new((0..n).map(|v| 1 + (v as u64 * 5) % 3).collect()).unwrap();
                let bf = |problem, d| {
                    brute_force_solve(&Instance { g: g.clone(), w: w.clone(), problem }, d)
                        .unwrap()
                        .map(|o| o.weight)
                };
                assert_eq!(weight_of(&solve_mwis(&g, &w).outcome), bf(Problem::Mwis, 1), "{g:?}");
                assert_eq!(weight_of(&solve_forest(&g, &w, 2).outcome), bf(Problem::Fvs, 2), "{g:?}");
            }
        }
    }

    #[test]
    fn random_graphs_match_brute_force() {
        for seed in 0..12 {
            let n = 6 + (seed as usize % 3);
            let g = gen_random_p6free(n, 0.35, seed).unwrap();
            let w = WeightMap::new((0..n).map(|v| 1 + (v as u64 * 7 + seed) % 4).collect()).unwrap();
            let rep = solve_mwis(&g, &w);
            let bf = brute_force_solve(&Instance { g: g.clone(), w: w.clone(), problem: Problem::Mwis }, 1).unwrap();
            assert_eq!(weight_of(&rep.outcome), bf.map(|o| o.weight), "seed {seed}");
            if let Outcome::Optimal(s) = rep.outcome {
                assert!(g.is_independent(s.x));
                assert_eq!(w.of(s.x), s.weight);
            }
        }
        for seed in 0..4 {
            let g = gen_random_p6free(6, 0.4, 100 + seed).unwrap();
            let w = WeightMap::unit(6);
            let rep = solve_forest(&g, &w, 3);
            let bf = brute_force_solve(&Instance { g: g.clone(), w: w.clone(), problem: Problem::Fvs }, 3).unwrap();
            assert_eq!(weight_of(&rep.outcome), bf.map(|o| o.weight), "seed {seed}");
        }
    }

    #[test]
    fn table_entries_are_valid_extensions() {
        let g = mesh_example();
        let w = WeightMap::new(vec![3, 1, 2, 2, 1, 3]).unwrap();
        let fam = build_family(&g, 1, 1).unwrap();
        let a = mwis_automaton(1).unwrap();
        let mut eng = DpEngine::new(&g, &w, &fam, &a, SolveOptions::new(1, 1)).unwrap();
        eng.run_main_phase().unwrap();
        let entries = eng.table_entries();
        assert!(entries.len() > eng.stats().groups);
        for (t, e) in &entries {
            assert!(is_valid_extension(&g, t, e, &a), "{t:?} {e:?}");
        }

        let g = gen_random_p6free(5, 0.5, 3).unwrap();
        let w = WeightMap::unit(5);
        let fam = build_family(&g, 2, 2).unwrap();
        let a = forest_automaton(2).unwrap();
        let mut eng = DpEngine::new(&g, &w, &fam, &a, SolveOptions::new(2, 2)).unwrap();
        eng.run_main_phase().unwrap();
        for (t, e) in &eng.table_entries() {
            assert!(is_valid_extension(&g, t, e, &a), "{t:?} {e:?}");
        }
    }

    #[test]
    fn valid_extension_examples() {
        let g = path(3);
        let a = mwis_automaton(1).unwrap();
        let base = empty_ps(3, 1);
        let template = |d_union, xi| Template::<MwisState> {
            ps: base.clone(),
            c: vset(&[1]),
            d_union,
            xi,
        };
        // No new nodes and the empty assignment.
        assert!(is_valid_extension(&g, &template(vset(&[0]), BTreeMap::new()), &base, &a));
        // A new node outside D.
        let two = ps_from(3, 1, &[(2, None)], vset(&[2]), vset(&[2]));
        let ok_root: MultistateAssignment<MwisState> =
            [(None, CappedMultiset::from_items(1, [MwisState::Ok]))].into_iter().collect();
        assert!(!is_valid_extension(&g, &template(vset(&[0]), ok_root.clone()), &two, &a));
        // One new root whose run state matches ξ(∅).
        assert!(is_valid_extension(&g, &template(vset(&[2]), ok_root), &two, &a));
        let bad_root: MultistateAssignment<MwisState> =
            [(None, CappedMultiset::from_items(1, [MwisState::Bad]))].into_iter().collect();
        assert!(!is_valid_extension(&g, &template(vset(&[2]), bad_root), &two, &a));
        assert!(!is_valid_extension(&g, &template(vset(&[2]), BTreeMap::new()), &two, &a));
    }

    #[test]
    fn combine_examples() {
        // 0-1, 2-3 with C = {} : two components.
        let g = Graph::from_edges(4, &[(0, 1), (2, 3)]).unwrap();
        let a = forest_automaton(2).unwrap();
        let base = empty_ps(4, 2);
        let t = |d_union| Template::<ForestState> {
            ps: base.clone(),
            c: VertexSet::EMPTY,
            d_union,
            xi: BTreeMap::new(),
        };
        let (t1, t2) = (t(vset(&[0, 1])), t(vset(&[2, 3])));
        let e1 = ps_from(4, 2, &[(0, None), (1, Some(0))], vset(&[0, 1]), vset(&[0, 1]));
        assert_eq!(combine(&g, &e1, &base, &t1, &t2).unwrap(), e1);
        assert_eq!(combine(&g, &base, &base, &t1, &t2).unwrap(), base);
        let r1 = ps_from(4, 2, &[(0, None)], vset(&[0]), vset(&[0]));
        let r2 = ps_from(4, 2, &[(3, None)], vset(&[3]), vset(&[3]));
        let both = combine(&g, &r1, &r2, &t1, &t2).unwrap();
        assert_eq!(both.t.forest.roots(), vset(&[0, 3]));
        let mut tu = t(vset(&[0, 1, 2, 3]));
        tu.xi = union_assignments(
            &xi_relative(&g, &base, &r1, &a),
            &xi_relative(&g, &base, &r2, &a),
            a.tau(),
        );
        assert!(is_valid_extension(&g, &tu, &both, &a));
        // Overlapping parts and incompatible forests are rejected.
        assert!(combine(&g, &r1, &r2, &t1, &t1).is_err());
        let clash = ps_from(4, 2, &[(1, None), (0, Some(1))], vset(&[0, 1]), vset(&[0, 1]));
        assert!(matches!(combine(&g, &e1, &clash, &t1, &t2), Err(Error::Invariant(_))));
    }

    #[test]
    fn subroutine_levels_zero_and_one() {
        let g = path(3);
        let w = WeightMap::unit(3);
        let fam = CarverFamily::new([vset(&[1])], 1, 1);
        let a = mwis_automaton(1).unwrap();
        let mut eng = DpEngine::new(&g, &w, &fam, &a, SolveOptions::new(1, 1)).unwrap();
        let pre = PreTemplate {
            ps: empty_ps(3, 1),
            c: vset(&[1]),
        };
        let levels = eng.run_subroutine(&pre, &[]).unwrap();
        assert_eq!(levels.len(), 1);
        assert_eq!(levels[0], vec![(BTreeMap::new(), empty_ps(3, 1))]);
        // Before the main phase only the ξ ≡ ∅ entries exist.
        let levels = eng.run_subroutine(&pre, &[vset(&[0])]).unwrap();
        assert_eq!(levels.len(), 2);
        assert_eq!(levels[1], vec![(BTreeMap::new(), empty_ps(3, 1))]);
        assert!(eng.run_subroutine(&pre, &[vset(&[0, 1])]).is_err());
        assert!(eng.run_subroutine(&pre, &[vset(&[0]), vset(&[0])]).is_err());
    }

    #[test]
    fn subroutine_two_components_matches_exhaustive_search() {
        for (g, c) in [(path(3), vset(&[1])), (star(3), vset(&[0])), (path(5), vset(&[2]))] {
            let n = g.n();
            let w = WeightMap::unit(n);
            let built = build_family(&g, 1, 1).unwrap();
            let fam = CarverFamily::new(built.sets.into_iter().chain([c]), 1, 1);
            let a = mwis_automaton(1).unwrap();
            let mut eng = DpEngine::new(&g, &w, &fam, &a, SolveOptions::new(1, 1)).unwrap();
            eng.run_main_phase().unwrap();
            let comps = g.connected_components(c);
            let pre = PreTemplate { ps: empty_ps(n, 1), c };
            let levels = eng.run_subroutine(&pre, &comps[..2]).unwrap();
            let d_union = comps[0] | comps[1];
            // The best valid extension for every assignment, exhaustively.
            type Key = Vec<(Option<usize>, Vec<(MwisState, usize)>)>;
            let mut best: BTreeMap<Key, PartialSolution> = BTreeMap::new();
            let key = |xi: &MultistateAssignment<MwisState>| -> Key {
                xi.iter().map(|(k, m)| (*k, m.iter().map(|(s, c)| (*s, c)).collect())).collect()
            };
            for cand in all_partial_solutions(&g, 1, &a) {
                if !cand.t.nodes().is_subset(d_union) {
                    continue;
                }
                let xi = xi_relative(&g, &pre.ps, &cand, &a);
                let slot = best.entry(key(&xi)).or_insert_with(|| cand.clone());
                if solution_order(&cand, slot, &w).is_lt() {
                    *slot = cand;
                }
            }
            assert_eq!(levels[2].len(), best.len(), "{g:?}");
            for (xi, e) in &levels[2] {
                let t = Template { ps: pre.ps.clone(), c, d_union, xi: xi.clone() };
                assert!(is_valid_extension(&g, &t, e, &a));
                assert_eq!(&best[&key(xi)], e, "{g:?} {xi:?}");
            }
        }
    }

    #[test]
    fn compact_order_agrees_with_partial_solution_order() {
        let g = cycle(5);
        let w = WeightMap::new(vec![2, 1, 1, 2, 1]).unwrap();
        let a = forest_automaton(2).unwrap();
        let all = all_partial_solutions(&g, 2, &a);
        let compact = |ps: &PartialSolution| {
            let mut parent = [NO_PARENT; 64];
            for v in ps.t.nodes() {
                parent[v] = ps.t.forest.parent(v).map_or(NO_PARENT, |p| p as u8);
            }
            Ext { nodes: ps.t.nodes(), x: ps.x, sol: ps.sol, weight: w.of(ps.x), parent }
        };
        for (i, p) in all.iter().enumerate().step_by(7) {
            for q in all.iter().skip(i % 13).step_by(11) {
                assert_eq!(ext_order(&compact(p), &compact(q), 2), solution_order(p, q, &w));
            }
        }
    }

    #[test]
    fn optimal_partial_solution_is_unique() {
        for n in 1..=4 {
            for g in graphs_up_to_isomorphism(n) {
                let w = WeightMap::unit(n);
                let a = forest_automaton(2).unwrap();
                let feasible: Vec<PartialSolution> =
                    all_partial_solutions(&g, 2, &a).into_iter().filter(|ps| accepted(&g, ps, &a)).collect();
                let best = feasible.iter().min_by(|p, q| solution_order(p, q, &w)).unwrap();
                let ties = feasible.iter().filter(|p| solution_order(p, best, &w).is_eq()).count();
                assert_eq!(ties, 1, "{g:?}");
                assert!(crate::forest::is_maximal(&g, &best.t) && crate::forest::is_neat(&g, &best.t));
            }
        }
    }

    #[test]
    fn rejects_bad_configuration() {
        let g = path(3);
        let fam = CarverFamily::new([vset(&[1])], 1, 1);
        let a = mwis_automaton(1).unwrap();
        assert!(DpEngine::new(&g, &WeightMap::unit(2), &fam, &a, SolveOptions::new(1, 1)).is_err());
        assert!(DpEngine::new(&g, &WeightMap::unit(3), &fam, &a, SolveOptions::new(0, 1)).is_err());
        let mut tight = SolveOptions::new(1, 1);
        tight.pre_template_cap = 1;
        assert!(matches!(
            DpEngine::new(&g, &WeightMap::unit(3), &fam, &a, tight),
            Err(Error::SizeCap { .. })
        ));
    }
}
