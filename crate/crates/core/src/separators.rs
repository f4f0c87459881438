//! Minimal separators: enumeration, full components, the four-way type
//! classification (subordinate / mesh / mixed / non-mesh), maximal strong
//! modules, footprint vertices and the carve-away predicate.

use std::collections::{BTreeSet, HashMap, VecDeque};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::forest::TreedepthStructure;
use crate::graph::Graph;
use crate::vset::VertexSet;

/// Default cap on the number of minimal separators enumerated.
pub const DEFAULT_SEPARATOR_CAP: usize = 200_000;

/// Separator type.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SeparatorClass {
    /// Inside a larger separator with a full component escaping two of its
    /// full sides.
    Subordinate,
    /// Not subordinate; both full components mesh.
    Mesh,
    /// Not subordinate; exactly one full component mesh.
    Mixed,
    /// Not subordinate; no full component mesh.
    NonMesh,
}

impl SeparatorClass {
    pub fn name(self) -> &'static str {
        match self {
            SeparatorClass::Subordinate => "subordinate",
            SeparatorClass::Mesh => "mesh",
            SeparatorClass::Mixed => "mixed",
            SeparatorClass::NonMesh => "nonmesh",
        }
    }
}

/// A classified minimal separator.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Separator {
    pub s: VertexSet,
    pub full_components: Vec<VertexSet>,
    pub class: SeparatorClass,
}

impl Separator {
    /// The mesh full component of a mixed separator.
    pub fn mesh_side(&self, g: &Graph) -> Option<VertexSet> {
        (self.class == SeparatorClass::Mixed)
            .then(|| self.full_components.iter().copied().find(|&a| g.is_mesh(a)))
            .flatten()
    }
}

/// Components `D` of `g − s` with `N(D) = s`.
pub fn full_components(g: &Graph, s: VertexSet) -> Vec<VertexSet> {
    g.connected_components(s)
        .into_iter()
        .filter(|&d| g.open_neighborhood(d) == s)
        .collect()
}

/// Whether `s` is a minimal separator (has at least two full components).
pub fn is_minimal_separator(g: &Graph, s: VertexSet) -> bool {
    full_components(g, s).len() >= 2
}

/// Every minimal separator exactly once, sorted by mask.
///
/// Seeds with `N(D)` for the components `D` of `g − N[v]`, then closes under
/// `S ↦ N(D′)` for the components `D′` of `g − (S ∪ N[x])`, `x ∈ S`.
/// The empty set is included exactly when `g` is disconnected.
pub fn enumerate_minimal_separators(g: &Graph, cap: usize) -> Result<Vec<VertexSet>> {
    let mut seen: BTreeSet<VertexSet> = BTreeSet::new();
    let mut queue = VecDeque::new();
    let push = |s: VertexSet, seen: &mut BTreeSet<VertexSet>, queue: &mut VecDeque<VertexSet>| {
        if seen.insert(s) {
            queue.push_back(s);
        }
        if seen.len() > cap {
            Err(Error::cap("minimal separators", cap))
        } else {
            Ok(())
        }
    };
    for v in g.vertices() {
        for d in g.connected_components(g.closed_nbhd_of(v)) {
            push(g.open_neighborhood(d), &mut seen, &mut queue)?;
        }
    }
    while let Some(s) = queue.pop_front() {
        for x in s {
            for d in g.connected_components(s | g.closed_nbhd_of(x)) {
                push(g.open_neighborhood(d), &mut seen, &mut queue)?;
            }
        }
    }
    for &s in &seen {
        if !is_minimal_separator(g, s) {
            return Err(Error::Invariant(format!(
                "enumerated set {s} is not a minimal separator"
            )));
        }
    }
    Ok(seen.into_iter().collect())
}

/// Classifies `s` against the full list of minimal separators.
pub fn classify_separator(g: &Graph, s: VertexSet, all: &[VertexSet]) -> Result<Separator> {
    let full = full_components(g, s);
    if full.len() < 2 {
        return Err(Error::Precondition(format!("{s} is not a minimal separator")));
    }
    let subordinate = all.iter().filter(|&&sp| s.is_subset(sp)).any(|&sp| {
        let sides = full_components(g, sp);
        sides.iter().enumerate().any(|(i, &a)| {
            sides[i + 1..].iter().any(|&b| {
                let covered = a | sp | b;
                full.iter().any(|&d| !d.intersects(covered))
            })
        })
    });
    let class = if subordinate {
        SeparatorClass::Subordinate
    } else {
        if full.len() != 2 {
            return Err(Error::Invariant(format!(
                "non-subordinate separator {s} has {} full components",
                full.len()
            )));
        }
        match full.iter().filter(|&&d| g.is_mesh(d)).count() {
            2 => SeparatorClass::Mesh,
            1 => SeparatorClass::Mixed,
            _ => SeparatorClass::NonMesh,
        }
    };
    Ok(Separator {
        s,
        full_components: full,
        class,
    })
}

/// All minimal separators of a graph, classified, with lookup by set.
#[derive(Clone, Debug)]
pub struct SeparatorIndex {
    pub separators: Vec<Separator>,
    by_set: HashMap<VertexSet, usize>,
}

impl SeparatorIndex {
    pub fn build(g: &Graph, cap: usize) -> Result<Self> {
        let all = enumerate_minimal_separators(g, cap)?;
        let separators = all
            .iter()
            .map(|&s| classify_separator(g, s, &all))
            .collect::<Result<Vec<_>>>()?;
        let by_set = separators.iter().enumerate().map(|(i, s)| (s.s, i)).collect();
        Ok(SeparatorIndex { separators, by_set })
    }

    pub fn get(&self, s: VertexSet) -> Option<&Separator> {
        self.by_set.get(&s).map(|&i| &self.separators[i])
    }

    pub fn iter(&self) -> impl Iterator<Item = &Separator> {
        self.separators.iter()
    }

    pub fn len(&self) -> usize {
        self.separators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.separators.is_empty()
    }
}

/// Whether `m` is a module of `g[within]`.
pub fn is_module(g: &Graph, within: VertexSet, m: VertexSet) -> bool {
    (within - m).iter().all(|v| {
        let nm = g.neighbors(v) & m;
        nm.is_empty() || nm == m
    })
}

/// The smallest module of `g[within]` containing `seed`.
fn module_closure(g: &Graph, within: VertexSet, seed: VertexSet) -> VertexSet {
    let mut m = seed;
    loop {
        let splitter = (within - m).iter().find(|&v| {
            let nm = g.neighbors(v) & m;
            !nm.is_empty() && nm != m
        });
        match splitter {
            Some(v) => m.insert(v),
            None => return m,
        }
    }
}

/// The maximal strong modules of `g[comp]`, ordered by minimum vertex.
///
/// Mesh graphs use their co-components; disconnected inputs their
/// components; otherwise (connected and co-connected) the block of `v` is
/// the union of the smallest modules containing `{v, u}` that are proper.
pub fn maximal_strong_modules(g: &Graph, comp: VertexSet) -> Vec<VertexSet> {
    if comp.len() <= 1 {
        return if comp.is_empty() { vec![] } else { vec![comp] };
    }
    if !g.is_connected(comp) {
        return g.components_of(comp);
    }
    let co = g.co_components(comp);
    if co.len() >= 2 {
        return co;
    }
    let mut blocks: Vec<VertexSet> = Vec::new();
    let mut assigned = VertexSet::EMPTY;
    for v in comp {
        if assigned.contains(v) {
            continue;
        }
        let mut block = VertexSet::singleton(v);
        for u in comp.without(v) {
            let m = module_closure(g, comp, VertexSet::singleton(v).with(u));
            if m != comp {
                block |= m;
            }
        }
        assigned |= block;
        blocks.push(block);
    }
    blocks
}

/// Whether `s ∩ V(𝒯)` lies on one vertical path and avoids depth-`d` nodes.
pub fn is_t_avoiding(t: &TreedepthStructure, s: VertexSet) -> bool {
    let st = s & t.nodes();
    t.forest.is_vertical(st) && !st.intersects(t.deepest_level())
}

/// Footprint vertices of a full component.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Footprint {
    /// The deepest 𝒯-vertex of the component (lowest index on ties).
    pub p: usize,
    /// A neighbour of `p` in another maximal strong module, if `|A| > 1`.
    pub q: Option<usize>,
    /// `N(p) ∩ A ∩ V(𝒯)`.
    pub t_a: VertexSet,
}

/// Footprint of a full component `a` of a 𝒯-avoiding minimal separator for
/// a maximal structure.
pub fn footprint(g: &Graph, t: &TreedepthStructure, a: VertexSet) -> Result<Footprint> {
    let at = a & t.nodes();
    let p = at
        .iter()
        .max_by(|&x, &y| t.forest.depth(x).cmp(&t.forest.depth(y)).then(y.cmp(&x)))
        .ok_or_else(|| Error::Invariant(format!("component {a} avoids the structure")))?;
    let t_a = g.neighbors(p) & at;
    if t_a.len() + 1 > t.d {
        return Err(Error::Invariant(format!(
            "footprint vertex {p} has {} structure neighbours in {a}",
            t_a.len()
        )));
    }
    let q = if a.len() > 1 {
        let blocks = maximal_strong_modules(g, a);
        let own = blocks.iter().copied().find(|b| b.contains(p)).unwrap_or_default();
        let q = VertexSet::min(g.neighbors(p) & (a - own));
        if q.is_none() {
            return Err(Error::Invariant(format!(
                "vertex {p} has no neighbour outside its strong module in {a}"
            )));
        }
        q
    } else {
        None
    };
    Ok(Footprint { p, q, t_a })
}

/// Whether `s_tilde` carves away the component `d0` of `g − s`: no
/// component of `g − s_tilde` meets both `d0` and another component of
/// `g − s`.
pub fn carves_away(g: &Graph, s: VertexSet, s_tilde: VertexSet, d0: VertexSet) -> bool {
    let others = g.vertices() - s - d0;
    g.connected_components(s_tilde)
        .into_iter()
        .all(|k| !(k.intersects(d0) && k.intersects(others)))
}

/// The 𝒯-carver definition for a classified 𝒯-avoiding separator.
pub fn is_t_carver(g: &Graph, sep: &Separator, t: &TreedepthStructure, cand: VertexSet) -> bool {
    let tn = t.nodes();
    if cand & tn != sep.s & tn {
        return false;
    }
    match sep.class {
        SeparatorClass::Subordinate | SeparatorClass::NonMesh => cand == sep.s,
        SeparatorClass::Mixed => match sep.mesh_side(g) {
            Some(a) => carves_away(g, sep.s, cand, a),
            None => false,
        },
        SeparatorClass::Mesh => g
            .connected_components(sep.s)
            .into_iter()
            .all(|d| carves_away(g, sep.s, cand, d)),
    }
}

/// Every full component of every non-mesh minimal separator.
pub fn nonmesh_components_oracle(index: &SeparatorIndex) -> Vec<VertexSet> {
    let mut out: BTreeSet<VertexSet> = BTreeSet::new();
    for sep in index.iter().filter(|s| s.class == SeparatorClass::NonMesh) {
        out.extend(sep.full_components.iter().copied());
    }
    out.into_iter().collect()
}

/// For each mixed separator, its mesh full component (its own fuzzy
/// version).
pub fn fuzzy_versions_oracle(g: &Graph, index: &SeparatorIndex) -> Vec<VertexSet> {
    let out: BTreeSet<VertexSet> = index.iter().filter_map(|s| s.mesh_side(g)).collect();
    out.into_iter().collect()
}
