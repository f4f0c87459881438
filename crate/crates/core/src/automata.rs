//! Threshold tree automata over labelled rooted forests: capped multisets,
//! the depth/adjacency labeller, runs, and the automata for independent sets
//! and induced forests.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt::Debug;
use std::hash::Hash;

use crate::error::{Error, Result};
use crate::forest::{PartialSolution, RootedForest};
use crate::graph::Graph;

/// Largest depth supported by the labeller (adjacency bits fit in a `u16`).
pub const MAX_LABEL_DEPTH: usize = 16;

/// Largest depth accepted by [`forest_automaton`].
pub const FOREST_AUTOMATON_MAX_DEPTH: usize = 8;

/// Reduces a multiplicity: `k` itself when `k ≤ 2τ`, otherwise the unique
/// value in `τ+1..=2τ` congruent to `k` modulo `τ`. With `τ = 0` every
/// multiplicity becomes `0`.
pub fn cap(k: usize, tau: usize) -> usize {
    if tau == 0 {
        0
    } else if k <= 2 * tau {
        k
    } else {
        k - tau * ((k - tau - 1) / tau)
    }
}

/// A multiset of states whose multiplicities are kept reduced by [`cap`].
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CappedMultiset<S: Ord> {
    counts: BTreeMap<S, usize>,
    tau: usize,
}

impl<S: Ord + Clone> CappedMultiset<S> {
    pub fn empty(tau: usize) -> Self {
        CappedMultiset {
            counts: BTreeMap::new(),
            tau,
        }
    }

    /// The reduced multiset of `items`.
    pub fn from_items<I: IntoIterator<Item = S>>(tau: usize, items: I) -> Self {
        let mut raw: BTreeMap<S, usize> = BTreeMap::new();
        for s in items {
            *raw.entry(s).or_default() += 1;
        }
        Self::from_counts(tau, raw)
    }

    /// The reduced multiset with the given raw multiplicities.
    pub fn from_counts<I: IntoIterator<Item = (S, usize)>>(tau: usize, counts: I) -> Self {
        let counts = counts
            .into_iter()
            .map(|(s, k)| (s, cap(k, tau)))
            .filter(|&(_, k)| k > 0)
            .collect();
        CappedMultiset { counts, tau }
    }

    pub fn tau(&self) -> usize {
        self.tau
    }

    pub fn count(&self, s: &S) -> usize {
        self.counts.get(s).copied().unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    /// `(state, multiplicity)` pairs with positive multiplicity.
    pub fn iter(&self) -> impl Iterator<Item = (&S, usize)> {
        self.counts.iter().map(|(s, &k)| (s, k))
    }

    /// Adds one occurrence of `s`, then reduces.
    pub fn insert(&mut self, s: S) {
        let k = self.count(&s) + 1;
        let k = cap(k, self.tau);
        if k == 0 {
            self.counts.remove(&s);
        } else {
            self.counts.insert(s, k);
        }
    }

    /// `(self ∪ other) ∧ τ`.
    pub fn union(&self, other: &Self) -> Self {
        let mut raw = self.counts.clone();
        for (s, &k) in &other.counts {
            *raw.entry(s.clone()).or_default() += k;
        }
        Self::from_counts(self.tau, raw)
    }
}

impl<S: Ord + Debug> Debug for CappedMultiset<S> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_map().entries(self.counts.iter()).finish()
    }
}

/// Every reduced multiset over `states` (there are `(2τ+1)^|states|`).
pub fn all_multisets<S: Ord + Clone>(states: &[S], tau: usize) -> Vec<CappedMultiset<S>> {
    let mut out = vec![CappedMultiset::empty(tau)];
    for s in states {
        out = out
            .into_iter()
            .flat_map(|m| {
                (0..=2 * tau).map(move |k| {
                    let mut m = m.clone();
                    if k > 0 {
                        m.counts.insert(s.clone(), k);
                    }
                    m
                })
            })
            .collect();
    }
    out
}

/// The label of a node: its depth `h ≥ 1`, adjacency bits `f` (bit `i − 1`
/// set iff the node is adjacent to its depth-`i` ancestor, `i < h`), and
/// membership in `X` and `Sol`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Label {
    pub h: u8,
    pub f: u16,
    pub in_x: bool,
    pub in_sol: bool,
}

impl Label {
    pub fn new(h: usize, f: u16, in_x: bool, in_sol: bool) -> Result<Self> {
        if h == 0 || h > MAX_LABEL_DEPTH {
            return Err(Error::InvalidInput(format!("label depth {h} out of range")));
        }
        if u32::from(f) >> (h - 1) != 0 {
            return Err(Error::InvalidInput(format!(
                "adjacency bits {f:#b} reach depth {h} or deeper"
            )));
        }
        Ok(Label {
            h: h as u8,
            f,
            in_x,
            in_sol,
        })
    }

    pub fn depth(&self) -> usize {
        usize::from(self.h)
    }

    /// Whether the node is adjacent to its depth-`i` ancestor.
    pub fn adjacent_to_depth(&self, i: usize) -> bool {
        i >= 1 && i < self.depth() && self.f >> (i - 1) & 1 == 1
    }
}

/// Every label of depth at most `d`.
pub fn alphabet(d: usize) -> Vec<Label> {
    let mut out = Vec::new();
    for h in 1..=d.min(MAX_LABEL_DEPTH) {
        for f in 0..1u32 << (h - 1) {
            for (in_x, in_sol) in [(false, false), (false, true), (true, false), (true, true)] {
                out.push(Label {
                    h: h as u8,
                    f: f as u16,
                    in_x,
                    in_sol,
                });
            }
        }
    }
    out
}

/// A rooted forest with a label on every node.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LabelledForest {
    pub forest: RootedForest,
    labels: Vec<Option<Label>>,
}

impl LabelledForest {
    /// Fails unless exactly the nodes of `forest` carry labels.
    pub fn new(forest: RootedForest, labels: Vec<Option<Label>>) -> Result<Self> {
        if labels.len() != forest.universe()
            || (0..labels.len()).any(|v| labels[v].is_some() != forest.contains(v))
        {
            return Err(Error::InvalidInput("labels must cover exactly the forest nodes".into()));
        }
        Ok(LabelledForest { forest, labels })
    }

    pub fn label(&self, v: usize) -> Option<Label> {
        self.labels.get(v).copied().flatten()
    }
}

/// The label of node `v` of `ps` in `g`.
pub fn label_of(g: &Graph, ps: &PartialSolution, v: usize) -> Label {
    let f = &ps.t.forest;
    let mut bits = 0u16;
    let mut depth_of_anc = f.depth(v);
    let mut cur = f.parent(v);
    while let Some(a) = cur {
        depth_of_anc -= 1;
        if g.has_edge(v, a) {
            bits |= 1 << (depth_of_anc - 1);
        }
        cur = f.parent(a);
    }
    Label {
        h: f.depth(v) as u8,
        f: bits,
        in_x: ps.x.contains(v),
        in_sol: ps.sol.contains(v),
    }
}

/// Labels every node of the structure by depth, adjacency to its ancestors
/// and membership in `X` and `Sol`.
pub fn label_structure(g: &Graph, ps: &PartialSolution) -> Result<LabelledForest> {
    let f = &ps.t.forest;
    if f.height() > MAX_LABEL_DEPTH {
        return Err(Error::cap("labelled forest height", MAX_LABEL_DEPTH));
    }
    let labels = (0..f.universe())
        .map(|v| f.contains(v).then(|| label_of(g, ps, v)))
        .collect();
    LabelledForest::new(f.clone(), labels)
}

/// A deterministic bottom-up threshold automaton reading [`Label`]s.
pub trait ThresholdAutomaton {
    type State: Clone + Eq + Ord + Hash + Debug;

    /// The threshold `τ` applied to children multisets.
    fn tau(&self) -> usize;

    /// The state of a node with `label` whose children reached `children`.
    fn delta(&self, label: Label, children: &CappedMultiset<Self::State>) -> Result<Self::State>;

    /// Whether the reduced multiset of root states is accepting.
    fn accepts(&self, roots: &CappedMultiset<Self::State>) -> bool;

    /// `false` only for labels that make every forest containing them
    /// rejected; partial solutions using such labels may be discarded early.
    fn admits(&self, _label: Label) -> bool {
        true
    }
}

/// The run of `a` on `lf`: the state of every node (indexed by vertex) and
/// whether the forest is accepted.
pub fn run<A: ThresholdAutomaton>(a: &A, lf: &LabelledForest) -> Result<(Vec<Option<A::State>>, bool)> {
    let f = &lf.forest;
    let mut states: Vec<Option<A::State>> = vec![None; f.universe()];
    let mut order: Vec<usize> = f.nodes().iter().collect();
    order.sort_by_key(|&v| std::cmp::Reverse(f.depth(v)));
    for v in order {
        let children = CappedMultiset::from_items(
            a.tau(),
            f.children(Some(v)).iter().map(|c| states[c].clone().expect("children run first")),
        );
        let label = lf
            .label(v)
            .ok_or_else(|| Error::Automaton(format!("node {v} has no label")))?;
        states[v] = Some(a.delta(label, &children)?);
    }
    let roots = CappedMultiset::from_items(
        a.tau(),
        f.roots().iter().map(|r| states[r].clone().expect("every node has a state")),
    );
    let accepted = a.accepts(&roots);
    Ok((states, accepted))
}

/// An automaton given by explicit tables; missing transitions are errors.
#[derive(Clone, Debug)]
pub struct TableAutomaton {
    pub tau: usize,
    pub delta: HashMap<(Label, CappedMultiset<u32>), u32>,
    pub accept: HashSet<CappedMultiset<u32>>,
}

impl ThresholdAutomaton for TableAutomaton {
    type State = u32;

    fn tau(&self) -> usize {
        self.tau
    }

    fn delta(&self, label: Label, children: &CappedMultiset<u32>) -> Result<u32> {
        self.delta
            .get(&(label, children.clone()))
            .copied()
            .ok_or_else(|| Error::Automaton(format!("no transition for {label:?} on {children:?}")))
    }

    fn accepts(&self, roots: &CappedMultiset<u32>) -> bool {
        self.accept.contains(roots)
    }
}

/// States of [`MwisAutomaton`].
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum MwisState {
    Ok,
    Bad,
}

/// Accepts exactly the forests whose nodes all lie in both `X` and `Sol`.
#[derive(Clone, Copy, Debug)]
pub struct MwisAutomaton;

/// The independent-set automaton; only depth 1 is meaningful.
pub fn mwis_automaton(d: usize) -> Result<MwisAutomaton> {
    if d != 1 {
        return Err(Error::Precondition(format!(
            "the independent-set automaton needs depth 1, got {d}"
        )));
    }
    Ok(MwisAutomaton)
}

impl ThresholdAutomaton for MwisAutomaton {
    type State = MwisState;

    fn tau(&self) -> usize {
        1
    }

    fn delta(&self, label: Label, children: &CappedMultiset<MwisState>) -> Result<MwisState> {
        let good = label.in_x && label.in_sol && children.count(&MwisState::Bad) == 0;
        Ok(if good { MwisState::Ok } else { MwisState::Bad })
    }

    fn accepts(&self, roots: &CappedMultiset<MwisState>) -> bool {
        roots.count(&MwisState::Bad) == 0
    }

    fn admits(&self, label: Label) -> bool {
        label.in_x && label.in_sol
    }
}

/// A connected piece of `Sol` inside a subtree, seen from above: `att` has
/// bit `i − 1` set when some vertex of the piece is adjacent to the strict
/// ancestor at depth `i`; `dup` marks depths reached by two or more edges.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Block {
    pub att: u8,
    pub dup: u8,
}

/// State of [`ForestAutomaton`]: either a violation was seen (`X ≠ Sol` or
/// a cycle in `Sol`), or the sorted blocks that may still close a cycle,
/// each kept at most twice.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum ForestState {
    Bad,
    Open(Vec<Block>),
}

/// Accepts exactly the labelled forests with `X = Sol` and `G[Sol]` acyclic,
/// where `G` is recovered from the adjacency bits.
#[derive(Clone, Copy, Debug)]
pub struct ForestAutomaton {
    pub d: usize,
}

/// The induced-forest automaton for structures of depth at most `d`.
pub fn forest_automaton(d: usize) -> Result<ForestAutomaton> {
    if d == 0 || d > FOREST_AUTOMATON_MAX_DEPTH {
        return Err(Error::cap("induced-forest automaton depth", FOREST_AUTOMATON_MAX_DEPTH));
    }
    Ok(ForestAutomaton { d })
}

impl ThresholdAutomaton for ForestAutomaton {
    type State = ForestState;

    fn tau(&self) -> usize {
        2
    }

    fn delta(&self, label: Label, children: &CappedMultiset<ForestState>) -> Result<ForestState> {
        let h = label.depth();
        if h > self.d {
            return Err(Error::Automaton(format!("label depth {h} exceeds {}", self.d)));
        }
        if label.in_x != label.in_sol || children.count(&ForestState::Bad) > 0 {
            return Ok(ForestState::Bad);
        }
        let own_bit = 1u8 << (h - 1);
        let below = own_bit - 1;
        // Pieces attached to this node merge with it when it is in Sol;
        // the other pieces pass through with the edge to this node dropped.
        let mut merged = Block {
            att: if label.in_sol { label.f as u8 } else { 0 },
            dup: 0,
        };
        let mut through: Vec<Block> = Vec::new();
        for (state, k) in children.iter() {
            let ForestState::Open(blocks) = state else {
                unreachable!("bad children handled above")
            };
            for _ in 0..k.min(2) {
                for &b in blocks {
                    if label.in_sol && b.att & own_bit != 0 {
                        if b.dup & own_bit != 0 {
                            return Ok(ForestState::Bad);
                        }
                        merged.dup |= b.dup | (merged.att & b.att);
                        merged.att |= b.att;
                    } else {
                        through.push(Block {
                            att: b.att & below,
                            dup: b.dup & below,
                        });
                    }
                }
            }
        }
        if label.in_sol {
            through.push(Block {
                att: merged.att & below,
                dup: merged.dup & below,
            });
        }
        through.retain(|b| b.att != 0);
        through.sort();
        // Two equal pieces behave like any larger number of them.
        let mut blocks: Vec<Block> = Vec::with_capacity(through.len());
        for b in through {
            let n = blocks.len();
            if n >= 2 && blocks[n - 1] == b && blocks[n - 2] == b {
                continue;
            }
            blocks.push(b);
        }
        Ok(ForestState::Open(blocks))
    }

    fn accepts(&self, roots: &CappedMultiset<ForestState>) -> bool {
        roots.count(&ForestState::Bad) == 0
    }

    fn admits(&self, label: Label) -> bool {
        label.in_x == label.in_sol && label.depth() <= self.d
    }
}
