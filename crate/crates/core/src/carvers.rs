//! Carver and container families: separator carvers, the mixed-separator
//! improver, leafy and not-two-sided containers, carvers for two-sided
//! potential maximal cliques, the assembled family, and its validity check.
//!
//! Every "guess" of the underlying constructions is realised as an explicit
//! enumeration. Where a guess describes an unknown minimal separator or
//! potential maximal clique (its full sides, its witnessing components), the
//! enumeration ranges over the separators and PMCs actually present in the
//! graph, which are enumerated exhaustively at this scale; the guessed
//! vertices are then drawn from those known sides.

use std::collections::{BTreeSet, HashMap, HashSet};

use crate::chordal::{aligned_minimal_completion, build_clique_tree, enforce_spade, is_pmc, CliqueTree};
use crate::error::{Error, Result};
use crate::forest::TreedepthStructure;
use crate::graph::{content_lines, parse_vertex_list, Graph};
use crate::separators::{
    carves_away, footprint, is_t_avoiding, is_t_carver, maximal_strong_modules,
    nonmesh_components_oracle, Separator, SeparatorClass, SeparatorIndex, DEFAULT_SEPARATOR_CAP,
};
use crate::vset::VertexSet;

/// Largest graph for which PMCs are enumerated by subset filtering.
pub const PMC_SUBSET_LIMIT: usize = 22;

/// Budget for the guessed (neighbouring carver, removed set) combinations
/// tried per two-sided PMC of the last orientation case.
pub const CASE_FOUR_TWO_WORK_CAP: usize = 20_000_000;

/// Default cap on the number of family members.
pub const DEFAULT_FAMILY_CAP: usize = 2_000_000;

/// A deduplicated family of vertex sets with its depth bound and defect.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CarverFamily {
    pub sets: Vec<VertexSet>,
    pub d: usize,
    pub k: usize,
}

impl CarverFamily {
    pub fn new<I: IntoIterator<Item = VertexSet>>(sets: I, d: usize, k: usize) -> Self {
        let sets: BTreeSet<VertexSet> = sets.into_iter().collect();
        CarverFamily {
            sets: sets.into_iter().collect(),
            d,
            k,
        }
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    /// One set per line as a comma-separated list; `-` is the empty set.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for s in &self.sets {
            if s.is_empty() {
                out.push('-');
            } else {
                out.push_str(&s.to_csv());
            }
            out.push('\n');
        }
        out
    }

    /// Parses [`CarverFamily::to_text`] output for a graph on `n` vertices.
    pub fn parse(text: &str, n: usize, d: usize, k: usize) -> Result<Self> {
        let mut sets = Vec::new();
        for (line_no, line) in content_lines(text) {
            if line == "-" {
                sets.push(VertexSet::EMPTY);
                continue;
            }
            let s = parse_vertex_list(line, n).map_err(|e| match e {
                Error::Parse { msg, .. } => Error::Parse { line: line_no, msg },
                other => other,
            })?;
            sets.push(s);
        }
        Ok(CarverFamily::new(sets, d, k))
    }
}

fn require_p6_free(g: &Graph) -> Result<()> {
    match g.find_induced_path(6) {
        Some(p) => Err(Error::InvalidInput(format!(
            "graph is not P6-free (induced path {p:?})"
        ))),
        None => Ok(()),
    }
}

/// All sets `N(D)` for components `D` of `g − N(A″ ∪ B″)` over guesses
/// `|A″|, |B″| ≤ 3`, kept when they are subordinate minimal separators.
pub fn subordinate_family(g: &Graph, index: &SeparatorIndex) -> Vec<VertexSet> {
    let small = g.vertices().subsets_up_to(3);
    let mut covers: HashSet<VertexSet> = HashSet::new();
    for (i, &a) in small.iter().enumerate() {
        for &b in &small[i..] {
            covers.insert(g.open_neighborhood(a | b));
        }
    }
    let mut out: BTreeSet<VertexSet> = BTreeSet::new();
    for cover in covers {
        for d in g.connected_components(cover) {
            let s = g.open_neighborhood(d);
            if index
                .get(s)
                .is_some_and(|sep| sep.class == SeparatorClass::Subordinate)
            {
                out.insert(s);
            }
        }
    }
    out.into_iter().collect()
}

/// `(p, T_p)` guesses: `p ∈ side` and `T_p ⊆ N(p) ∩ side` with
/// `|T_p| ≤ d − 1`.
fn anchor_guesses(g: &Graph, side: VertexSet, d: usize) -> Vec<(usize, VertexSet)> {
    let mut out = Vec::new();
    for p in side {
        for tp in (g.neighbors(p) & side).subsets_up_to(d.saturating_sub(1)) {
            out.push((p, tp));
        }
    }
    out
}

/// Neighbours of `p` inside `side` lying in another maximal strong module;
/// `[p]` itself when the side is a single vertex.
fn partner_guesses(g: &Graph, side: VertexSet, modules: &[VertexSet], p: usize) -> Vec<usize> {
    if side.len() == 1 {
        return vec![p];
    }
    let own = modules
        .iter()
        .copied()
        .find(|m| m.contains(p))
        .unwrap_or_default();
    (g.neighbors(p) & (side - own)).to_vec()
}

/// Carver candidates for one mixed or mesh separator, following the
/// guess-and-extend construction; candidates failing the structure-free part
/// of the carver definition (the carve-away condition) are dropped.
pub fn separator_candidates(g: &Graph, sep: &Separator, d: usize) -> Vec<VertexSet> {
    let s = sep.s;
    match sep.class {
        SeparatorClass::Subordinate | SeparatorClass::NonMesh => return vec![s],
        SeparatorClass::Mixed | SeparatorClass::Mesh => {}
    }
    let (a, b) = (sep.full_components[0], sep.full_components[1]);
    let keep = |cand: VertexSet| -> bool {
        match sep.class {
            SeparatorClass::Mixed => {
                let mesh = if g.is_mesh(a) { a } else { b };
                carves_away(g, s, cand, mesh)
            }
            _ => g
                .connected_components(s)
                .into_iter()
                .all(|comp| carves_away(g, s, cand, comp)),
        }
    };
    let mods_a = maximal_strong_modules(g, a);
    let mods_b = maximal_strong_modules(g, b);
    let zs = s.subsets_up_to(d.saturating_sub(1));
    let mut out: HashSet<VertexSet> = HashSet::new();
    // Case-4 additions depend only on the six anchor vertices.
    let mut mesh_extra: HashMap<[usize; 6], VertexSet> = HashMap::new();
    let mut mesh_extras = |pa: usize, qa: usize, pb: usize, qb: usize| -> Vec<VertexSet> {
        let mut v = Vec::new();
        for ra in a {
            for rb in b {
                let key = [pa, qa, ra, pb, qb, rb];
                let e = *mesh_extra.entry(key).or_insert_with(|| {
                    let six: VertexSet = key.iter().copied().collect();
                    let closed = g.closed_neighborhood(six);
                    let mut add = VertexSet::EMPTY;
                    for comp in g.connected_components(closed) {
                        add |= g.open_neighborhood(comp);
                    }
                    let qra = g.closed_neighborhood(VertexSet::singleton(qa).with(ra));
                    let qrb = g.closed_neighborhood(VertexSet::singleton(qb).with(rb));
                    add | (qra & qrb)
                });
                v.push(e);
            }
        }
        v
    };
    let anchors_a = anchor_guesses(g, a, d);
    let anchors_b = anchor_guesses(g, b, d);
    for &(pa, ta) in &anchors_a {
        let na = g.neighbors(pa) - ta;
        for &(pb, tb) in &anchors_b {
            let base = na | (g.neighbors(pb) - tb);
            if a.len() == 1 || b.len() == 1 {
                for &z in &zs {
                    if keep(base | z) {
                        out.insert(base | z);
                    }
                }
                continue;
            }
            for qa in partner_guesses(g, a, &mods_a, pa) {
                let cover_a = g.open_neighborhood(ta.with(pa).with(qa));
                for qb in partner_guesses(g, b, &mods_b, pb) {
                    let cover_b = g.open_neighborhood(tb.with(pb).with(qb));
                    let s1 = base | (cover_a & cover_b);
                    let extras = if sep.class == SeparatorClass::Mesh {
                        mesh_extras(pa, qa, pb, qb)
                    } else {
                        vec![VertexSet::EMPTY]
                    };
                    for e in extras {
                        for &z in &zs {
                            let cand = s1 | e | z;
                            if !out.contains(&cand) && keep(cand) {
                                out.insert(cand);
                            }
                        }
                    }
                }
            }
        }
    }
    let mut v: Vec<VertexSet> = out.into_iter().collect();
    v.sort();
    v
}

/// Shared, lazily filled context for the family constructions.
pub struct FamilyBuilder<'g> {
    pub g: &'g Graph,
    pub d: usize,
    pub index: SeparatorIndex,
    sep_cands: HashMap<VertexSet, Vec<VertexSet>>,
    pmcs: Option<Vec<VertexSet>>,
}

impl<'g> FamilyBuilder<'g> {
    pub fn new(g: &'g Graph, d: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::Precondition("depth bound must be positive".into()));
        }
        let index = SeparatorIndex::build(g, DEFAULT_SEPARATOR_CAP)?;
        Ok(FamilyBuilder {
            g,
            d,
            index,
            sep_cands: HashMap::new(),
            pmcs: None,
        })
    }

    /// Carver candidates for the minimal separator `s` (cached).
    pub fn candidates_for(&mut self, s: VertexSet) -> Result<&[VertexSet]> {
        if !self.sep_cands.contains_key(&s) {
            let sep = self
                .index
                .get(s)
                .ok_or_else(|| Error::Invariant(format!("{s} is not a minimal separator")))?;
            let c = separator_candidates(self.g, sep, self.d);
            self.sep_cands.insert(s, c);
        }
        Ok(&self.sep_cands[&s])
    }

    /// All potential maximal cliques, sorted by mask.
    pub fn pmcs(&mut self) -> Result<&[VertexSet]> {
        if self.pmcs.is_none() {
            self.pmcs = Some(enumerate_pmcs(self.g)?);
        }
        Ok(self.pmcs.as_deref().unwrap_or_default())
    }

    /// The separator carver family: subordinate separators, non-mesh
    /// separators, and candidates for every mixed and mesh separator.
    pub fn separator_carver_family(&mut self) -> Result<Vec<VertexSet>> {
        let mut out: BTreeSet<VertexSet> = subordinate_family(self.g, &self.index).into_iter().collect();
        for comp in nonmesh_components_oracle(&self.index) {
            out.insert(self.g.open_neighborhood(comp));
        }
        let seps: Vec<VertexSet> = self
            .index
            .iter()
            .filter(|s| matches!(s.class, SeparatorClass::Mixed | SeparatorClass::Mesh))
            .map(|s| s.s)
            .collect();
        for s in seps {
            out.extend(self.candidates_for(s)?.iter().copied());
        }
        Ok(out.into_iter().collect())
    }

    /// Carvers for two-sided PMCs.
    pub fn two_sided_carver_family(&mut self, earlier: &[VertexSet]) -> Result<Vec<VertexSet>> {
        let g = self.g;
        let mut out: BTreeSet<VertexSet> = g.vertices().iter().map(|v| g.closed_nbhd_of(v)).collect();
        let pmcs = self.pmcs()?.to_vec();
        let mut deferred: Vec<TwoSidedContext> = Vec::new();
        for &omega in &pmcs {
            let Some(ctx) = TwoSidedContext::new(g, &self.index, omega)? else {
                continue;
            };
            if ctx.case == TwoSidedCase::FourTwo {
                deferred.push(ctx);
                continue;
            }
            for c in self.carvers_for(&ctx)? {
                out.insert(c);
            }
        }
        // Carvers built so far serve as the neighbouring carvers guessed in
        // the last case.
        let mut pool: Vec<VertexSet> = earlier.iter().copied().chain(out.iter().copied()).collect();
        pool.sort();
        pool.dedup();
        for ctx in &deferred {
            for c in self.case_four_two(ctx, &pool)? {
                out.insert(c);
            }
        }
        Ok(out.into_iter().collect())
    }

    fn carvers_for(&mut self, ctx: &TwoSidedContext) -> Result<Vec<VertexSet>> {
        let g = self.g;
        let d = self.d;
        let c0 = self.candidates_for(g.open_neighborhood(ctx.d0))?.to_vec();
        let c1 = self.candidates_for(g.open_neighborhood(ctx.d1))?.to_vec();
        let mut pre: HashSet<VertexSet> = HashSet::new();
        let extras: Vec<VertexSet> = match ctx.case {
            TwoSidedCase::One | TwoSidedCase::Three => vec![VertexSet::EMPTY],
            TwoSidedCase::Two => case_two_extras(g, ctx, d),
            TwoSidedCase::FourOne => case_four_one_extras(g, ctx, d, &self.index),
            TwoSidedCase::FourTwo => unreachable!("handled after the other cases"),
        };
        for &s0 in &c0 {
            for &s1 in &c1 {
                for &e in &extras {
                    let cand = s0 | s1 | e;
                    if ctx.keeps_sides_apart(g, cand) {
                        pre.insert(cand);
                    }
                }
            }
        }
        let mut out: HashSet<VertexSet> = pre.clone();
        for &k in &ctx.improve_wrt {
            let dk = if k == 0 { ctx.d0 } else { ctx.d1 };
            let s = g.open_neighborhood(dk);
            let sep = self
                .index
                .get(s)
                .ok_or_else(|| Error::Invariant(format!("{s} is not a minimal separator")))?
                .clone();
            for &p in &pre {
                for c in improve_for_separator(g, p, &sep, d) {
                    if ctx.keeps_sides_apart(g, c) {
                        out.insert(c);
                    }
                }
            }
        }
        let mut v: Vec<VertexSet> = out.into_iter().collect();
        v.sort();
        Ok(v)
    }

    fn case_four_two(&mut self, ctx: &TwoSidedContext, pool: &[VertexSet]) -> Result<Vec<VertexSet>> {
        let g = self.g;
        let c0 = self.candidates_for(g.open_neighborhood(ctx.d0))?.to_vec();
        let c1 = self.candidates_for(g.open_neighborhood(ctx.d1))?.to_vec();
        let unions: HashSet<VertexSet> = c0.iter().flat_map(|&s0| c1.iter().map(move |&s1| s0 | s1)).collect();
        // The neighbouring bag lies within Ω plus the D1-side region.
        let region = ctx.omega | ctx.d1 | ctx.inner_region;
        let mut seen: HashSet<VertexSet> = HashSet::new();
        let mut out: Vec<VertexSet> = Vec::new();
        let mut work = 0usize;
        for &c1_bag in pool {
            let outside = c1_bag - ctx.omega;
            if !outside.intersects(ctx.d1) || !outside.is_subset(region - ctx.omega) {
                continue;
            }
            for a1 in (outside & ctx.d1).subsets_up_to(self.d) {
                // The removed vertices lie outside Ω, hence outside both
                // witness carvers.
                for &u in unions.iter().filter(|u| !u.intersects(a1)) {
                    work += 1;
                    if work > CASE_FOUR_TWO_WORK_CAP {
                        return Err(Error::cap("neighbouring-carver guesses", CASE_FOUR_TWO_WORK_CAP));
                    }
                    let cand = (u | c1_bag) - a1;
                    if seen.insert(cand) && ctx.keeps_sides_apart(g, cand) {
                        out.push(cand);
                    }
                }
            }
        }
        out.sort();
        Ok(out)
    }

    /// The assembled family (leafy ∪ not-two-sided ∪ two-sided).
    pub fn build(&mut self, k: usize) -> Result<CarverFamily> {
        let leafy = leafy_containers(self.g, self.d);
        let pmcs = self.pmcs()?.to_vec();
        let nts = not_two_sided_from(self.g, &pmcs);
        let earlier: Vec<VertexSet> = leafy.iter().chain(nts.iter()).copied().collect();
        let two = self.two_sided_carver_family(&earlier)?;
        let fam = CarverFamily::new(earlier.into_iter().chain(two), self.d, k);
        if fam.len() > DEFAULT_FAMILY_CAP {
            return Err(Error::cap("carver family", DEFAULT_FAMILY_CAP));
        }
        Ok(fam)
    }
}

/// Orientation case of a two-sided PMC with witnesses `D0`, `D1`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum TwoSidedCase {
    /// Some witness separator is not mixed.
    One,
    /// Both witness separators mixed with mesh witness sides.
    Two,
    /// Both witness separators mixed with non-mesh witness sides.
    Three,
    /// One of each, and another component touches the private part of the
    /// mesh witness.
    FourOne,
    /// One of each, and every other component lies under the non-mesh
    /// witness's separator.
    FourTwo,
}

/// A two-sided PMC with an ordered witness pair and derived data.
#[derive(Clone, Debug)]
struct TwoSidedContext {
    omega: VertexSet,
    d0: VertexSet,
    d1: VertexSet,
    comps: Vec<VertexSet>,
    case: TwoSidedCase,
    /// Witness indices whose separators the improver targets.
    improve_wrt: Vec<usize>,
    /// Components `D ∉ {D0, D1}` with `N(D) ⊆ N(D0) ∩ N(D1)`.
    inner_region: VertexSet,
}

impl TwoSidedContext {
    /// `None` for PMCs that are not two-sided or equal some `N[v]`.
    fn new(g: &Graph, index: &SeparatorIndex, omega: VertexSet) -> Result<Option<Self>> {
        if omega.iter().any(|v| g.closed_nbhd_of(v) == omega) {
            return Ok(None);
        }
        let comps = g.connected_components(omega);
        let Some((i0, i1)) = two_sided_witness(g, &comps) else {
            return Ok(None);
        };
        let class = |d: VertexSet| -> Result<SeparatorClass> {
            let s = g.open_neighborhood(d);
            index
                .get(s)
                .map(|sep| sep.class)
                .ok_or_else(|| Error::Invariant(format!("{s} is not a minimal separator")))
        };
        let (mut d0, mut d1) = (comps[i0], comps[i1]);
        let (k0, k1) = (class(d0)?, class(d1)?);
        let mixed0 = k0 == SeparatorClass::Mixed;
        let mixed1 = k1 == SeparatorClass::Mixed;
        let mut improve_wrt = Vec::new();
        let case = if !mixed0 || !mixed1 {
            // The other witness, if mixed with a mesh side, is pointed at Ω.
            if mixed0 && g.is_mesh(d0) {
                improve_wrt.push(0);
            }
            if mixed1 && g.is_mesh(d1) {
                improve_wrt.push(1);
            }
            TwoSidedCase::One
        } else {
            match (g.is_mesh(d0), g.is_mesh(d1)) {
                (true, true) => {
                    improve_wrt = vec![0, 1];
                    TwoSidedCase::Two
                }
                (false, false) => {
                    improve_wrt = vec![0, 1];
                    TwoSidedCase::Three
                }
                (m0, _) => {
                    // Normalise: D0 non-mesh, D1 mesh.
                    if m0 {
                        std::mem::swap(&mut d0, &mut d1);
                    }
                    let n0 = g.open_neighborhood(d0);
                    let n1 = g.open_neighborhood(d1);
                    let private1 = n1 - n0;
                    let touches = comps
                        .iter()
                        .any(|&c| c != d1 && g.open_neighborhood(c).intersects(private1));
                    if touches {
                        improve_wrt = vec![1];
                        TwoSidedCase::FourOne
                    } else {
                        TwoSidedCase::FourTwo
                    }
                }
            }
        };
        let n0 = g.open_neighborhood(d0);
        let n1 = g.open_neighborhood(d1);
        let inner_region = comps
            .iter()
            .copied()
            .filter(|&c| c != d0 && c != d1 && g.open_neighborhood(c).is_subset(n0 & n1))
            .fold(VertexSet::EMPTY, |acc, c| acc | c);
        Ok(Some(TwoSidedContext {
            omega,
            d0,
            d1,
            comps,
            case,
            improve_wrt,
            inner_region,
        }))
    }

    /// Necessary condition for any carver of Ω: no component of `g − c`
    /// meets two components of `g − Ω` whose neighbourhoods cover Ω (such
    /// components always hang off different neighbours of Ω's node).
    fn keeps_sides_apart(&self, g: &Graph, c: VertexSet) -> bool {
        g.connected_components(c).into_iter().all(|k| {
            let hit: Vec<VertexSet> = self
                .comps
                .iter()
                .copied()
                .filter(|&d| d.intersects(k))
                .map(|d| g.open_neighborhood(d))
                .collect();
            hit.iter().enumerate().all(|(i, &x)| {
                hit[i + 1..].iter().all(|&y| (x | y) != self.omega)
            })
        })
    }
}

/// First pair `(i, j)`, `i < j`, of components witnessing two-sidedness.
fn two_sided_witness(g: &Graph, comps: &[VertexSet]) -> Option<(usize, usize)> {
    let nb: Vec<VertexSet> = comps.iter().map(|&d| g.open_neighborhood(d)).collect();
    for i in 0..comps.len() {
        for j in i + 1..comps.len() {
            if nb.iter().all(|&x| x.is_subset(nb[i]) || x.is_subset(nb[j])) {
                return Some((i, j));
            }
        }
    }
    None
}

/// Whether `omega` is a two-sided PMC.
pub fn is_two_sided(g: &Graph, omega: VertexSet) -> bool {
    two_sided_witness(g, &g.connected_components(omega)).is_some()
}

/// Unions of at most `d` co-components of `g[side]` (non-empty ones).
fn cocomponent_unions(g: &Graph, side: VertexSet, d: usize) -> Vec<VertexSet> {
    let co = g.co_components(side);
    let idx: VertexSet = (0..co.len()).collect();
    idx.subsets_up_to(d)
        .into_iter()
        .filter(|s| !s.is_empty())
        .map(|s| s.iter().fold(VertexSet::EMPTY, |acc, i| acc | co[i]))
        .collect()
}

/// `N[D0′ ∪ D1′] ∖ (M0 ∪ M1)` over covering guesses `D0′ ⊆ D0`, `D1′ ⊆ D1`
/// (at most four each) and unions `M0`, `M1` of at most `d` co-components.
fn case_two_extras(g: &Graph, ctx: &TwoSidedContext, d: usize) -> Vec<VertexSet> {
    let (d0, d1) = (ctx.d0, ctx.d1);
    let must = d0 | d1 | (g.open_neighborhood(d0) & g.open_neighborhood(d1));
    let mut closures: HashSet<VertexSet> = HashSet::new();
    let g0 = d0.subsets_up_to(4);
    let g1 = d1.subsets_up_to(4);
    for &x in &g0 {
        let cx = g.closed_neighborhood(x);
        for &y in &g1 {
            let c = cx | g.closed_neighborhood(y);
            if must.is_subset(c) {
                closures.insert(c);
            }
        }
    }
    let m0 = cocomponent_unions(g, d0, d);
    let m1 = cocomponent_unions(g, d1, d);
    let mut out: HashSet<VertexSet> = HashSet::new();
    for &c in &closures {
        for &a in &m0 {
            for &b in &m1 {
                out.insert(c - a - b);
            }
        }
    }
    out.into_iter().collect()
}

/// `(N(p0)∖A0) ∪ (N(p1)∖A1) ∪ (N(q0) ∩ N({v, q1})) ∪ N(D)` over the
/// anchors of both witnesses, `v` in the private part of `N(D1)`, and a
/// component `D ≠ D1` adjacent to `v`.
fn case_four_one_extras(g: &Graph, ctx: &TwoSidedContext, d: usize, index: &SeparatorIndex) -> Vec<VertexSet> {
    let (d0, d1) = (ctx.d0, ctx.d1);
    let n0 = g.open_neighborhood(d0);
    let n1 = g.open_neighborhood(d1);
    let mut tails: HashSet<(usize, VertexSet)> = HashSet::new();
    for v in n1 - n0 {
        for &c in &ctx.comps {
            let nd = g.open_neighborhood(c);
            if c != d1 && nd.contains(v) && index.get(nd).is_some() {
                tails.insert((v, nd));
            }
        }
    }
    let mods0 = maximal_strong_modules(g, d0);
    let mods1 = maximal_strong_modules(g, d1);
    let anchors0 = anchor_guesses(g, d0, d);
    let anchors1 = anchor_guesses(g, d1, d);
    let mut out: HashSet<VertexSet> = HashSet::new();
    for &(p0, a0) in &anchors0 {
        for &(p1, a1) in &anchors1 {
            let base = (g.neighbors(p0) - a0) | (g.neighbors(p1) - a1);
            for q0 in partner_guesses(g, d0, &mods0, p0) {
                for q1 in partner_guesses(g, d1, &mods1, p1) {
                    for &(v, nd) in &tails {
                        let pinch = g.neighbors(q0) & g.open_neighborhood(VertexSet::singleton(v).with(q1));
                        out.insert(base | pinch | nd);
                    }
                }
            }
        }
    }
    out.into_iter().collect()
}

/// Improved carvers for the precarver `s_tilde` with respect to one mixed
/// separator. Each output contains `s_tilde`; outputs that leave some
/// clarified component straddling two components of `g − S` are dropped.
pub fn improve_for_separator(g: &Graph, s_tilde: VertexSet, sep: &Separator, d: usize) -> Vec<VertexSet> {
    if sep.class != SeparatorClass::Mixed {
        return vec![s_tilde];
    }
    let s = sep.s;
    let (a, b) = if g.is_mesh(sep.full_components[0]) {
        (sep.full_components[0], sep.full_components[1])
    } else {
        (sep.full_components[1], sep.full_components[0])
    };
    let clarified: Vec<VertexSet> = g
        .connected_components(s_tilde)
        .into_iter()
        .filter(|c| !c.intersects(a | b))
        .collect();
    let s_comps = g.connected_components(s);
    let satisfies = |cand: VertexSet| -> bool {
        clarified.iter().all(|&dt| {
            g.components_of(dt - cand).into_iter().all(|piece| {
                s_comps.iter().filter(|c| c.intersects(piece)).count() <= 1
            })
        })
    };
    let mut out: HashSet<VertexSet> = HashSet::new();
    if satisfies(s_tilde) {
        out.insert(s_tilde);
        return out.into_iter().collect();
    }
    let co = g.co_components(a);
    for m in cocomponent_unions(g, a, d) {
        let nm = g.open_neighborhood(m);
        for (pb, tb) in anchor_guesses(g, b, d) {
            let x = s_tilde | nm | (g.neighbors(pb) - tb);
            if satisfies(x) {
                out.insert(x);
                continue;
            }
            let rest = s - x;
            for qb in b {
                let nq = g.neighbors(qb);
                if !rest.is_subset(nq) {
                    continue;
                }
                // Components of g − X − N(q_B) and of g[N(q_B) ∖ X].
                let outer = g.connected_components(x | nq);
                let inner = g.components_of(nq - x);
                for &mi in &co {
                    let base = x | (g.open_neighborhood(mi) & nq);
                    for xv in rest & g.open_neighborhood(mi) {
                        let mut add = VertexSet::EMPTY;
                        for &dd in &outer {
                            if !g.open_neighborhood(dd).contains(xv) {
                                continue;
                            }
                            let ndd = g.open_neighborhood(dd);
                            for &h in &inner {
                                if h.intersects(ndd) {
                                    add |= h;
                                }
                            }
                        }
                        let cand = base | add;
                        if satisfies(cand) {
                            out.insert(cand);
                        }
                    }
                }
            }
        }
    }
    let mut v: Vec<VertexSet> = out.into_iter().collect();
    v.sort();
    v
}

/// Improver over every mixed separator of `g`.
pub fn improve_mixed_carver(g: &Graph, s_tilde: VertexSet, d: usize, index: &SeparatorIndex) -> Vec<VertexSet> {
    let mut out: BTreeSet<VertexSet> = BTreeSet::new();
    for sep in index.iter().filter(|s| s.class == SeparatorClass::Mixed) {
        out.extend(improve_for_separator(g, s_tilde, sep, d));
    }
    if out.is_empty() {
        out.insert(s_tilde);
    }
    out.into_iter().collect()
}

/// `N[v] ∖ X` for every `v` and `X ⊆ N(v)` with `|X| ≤ d − 1`.
pub fn leafy_containers(g: &Graph, d: usize) -> Vec<VertexSet> {
    let mut out: BTreeSet<VertexSet> = BTreeSet::new();
    for v in g.vertices() {
        let closed = g.closed_nbhd_of(v);
        for x in g.neighbors(v).subsets_up_to(d.saturating_sub(1)) {
            out.insert(closed - x);
        }
    }
    out.into_iter().collect()
}

/// Every potential maximal clique (subset filtering), sorted by mask.
pub fn enumerate_pmcs(g: &Graph) -> Result<Vec<VertexSet>> {
    if g.n() > PMC_SUBSET_LIMIT {
        return Err(Error::cap("PMC enumeration (vertices)", PMC_SUBSET_LIMIT));
    }
    let mut out: Vec<VertexSet> = g
        .vertices()
        .all_subsets()
        .filter(|&s| !s.is_empty() && is_pmc(g, s))
        .collect();
    out.sort();
    Ok(out)
}

fn not_two_sided_from(g: &Graph, pmcs: &[VertexSet]) -> Vec<VertexSet> {
    pmcs.iter().copied().filter(|&o| !is_two_sided(g, o)).collect()
}

/// Every PMC that is not two-sided (each is its own container).
pub fn not_two_sided_containers(g: &Graph) -> Result<Vec<VertexSet>> {
    Ok(not_two_sided_from(g, &enumerate_pmcs(g)?))
}

/// Separator carver family of a P6-free graph.
pub fn separator_carver_family(g: &Graph, d: usize) -> Result<Vec<VertexSet>> {
    require_p6_free(g)?;
    FamilyBuilder::new(g, d)?.separator_carver_family()
}

/// Carvers for two-sided PMCs of a P6-free graph.
pub fn two_sided_carver_family(g: &Graph, d: usize) -> Result<Vec<VertexSet>> {
    require_p6_free(g)?;
    let mut b = FamilyBuilder::new(g, d)?;
    let pmcs = b.pmcs()?.to_vec();
    let earlier: Vec<VertexSet> = leafy_containers(g, d)
        .into_iter()
        .chain(not_two_sided_from(g, &pmcs))
        .collect();
    b.two_sided_carver_family(&earlier)
}

/// The treedepth-`d` carver family of defect `k` for a P6-free graph.
pub fn build_family(g: &Graph, d: usize, k: usize) -> Result<CarverFamily> {
    require_p6_free(g)?;
    FamilyBuilder::new(g, d)?.build(k)
}

/// Outcome of checking a family against one structure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyReport {
    pub ok: bool,
    /// Bags (of the normalised clique tree) without a carver.
    pub failing_bags: Vec<VertexSet>,
    /// Largest `|C ∩ V(𝒯)|` over the chosen witnesses.
    pub max_defect_used: usize,
    /// Whether every chosen witness has `C ∩ V(𝒯)` on one vertical path.
    pub vertical_witnesses: bool,
    pub bags: usize,
}

/// Whether `c` is a carver for bag `t` of the clique tree with respect to
/// the structure nodes `tn`.
pub fn is_tree_carver(g: &Graph, ct: &CliqueTree, side_sets: &[Vec<VertexSet>], t: usize, c: VertexSet, tn: VertexSet, k: usize) -> bool {
    let bag = ct.bags[t];
    let ct_t = c & tn;
    if !(bag & tn).is_subset(ct_t) || ct_t.len() > k {
        return false;
    }
    g.connected_components(c).into_iter().all(|comp| {
        (comp - bag).is_empty() || side_sets[t].iter().any(|&side| (comp - bag).is_subset(side))
    })
}

/// For each node `t` and each neighbour, the vertices of bags in that
/// neighbour's subtree.
pub fn subtree_vertex_sets(ct: &CliqueTree) -> Vec<Vec<VertexSet>> {
    (0..ct.len())
        .map(|t| {
            ct.tree_neighbors(t)
                .into_iter()
                .map(|s| {
                    ct.side_nodes(s, t)
                        .into_iter()
                        .fold(VertexSet::EMPTY, |acc, x| acc | ct.bags[x])
                })
                .collect()
        })
        .collect()
}

/// The normalised witness clique tree for a structure: aligned minimal
/// completion, clique tree, orientation repair.
pub fn witness_tree(g: &Graph, t: &TreedepthStructure, index: &SeparatorIndex) -> Result<CliqueTree> {
    let c = aligned_minimal_completion(g, t)?;
    let ct = build_clique_tree(g, &c)?;
    enforce_spade(g, &ct, index)
}

/// Checks the family on the witness clique tree of `t`.
pub fn validate_family_report(g: &Graph, fam: &CarverFamily, t: &TreedepthStructure) -> Result<FamilyReport> {
    let index = SeparatorIndex::build(g, DEFAULT_SEPARATOR_CAP)?;
    validate_family_with(g, fam, t, &index)
}

/// [`validate_family_report`] with a prebuilt separator index.
pub fn validate_family_with(g: &Graph, fam: &CarverFamily, t: &TreedepthStructure, index: &SeparatorIndex) -> Result<FamilyReport> {
    let ct = witness_tree(g, t, index)?;
    let sides = subtree_vertex_sets(&ct);
    let tn = t.nodes();
    let mut report = FamilyReport {
        ok: true,
        failing_bags: Vec::new(),
        max_defect_used: 0,
        vertical_witnesses: true,
        bags: ct.len(),
    };
    for i in 0..ct.len() {
        // Prefer witnesses with the smallest structure intersection.
        let best = fam
            .sets
            .iter()
            .copied()
            .filter(|&c| is_tree_carver(g, &ct, &sides, i, c, tn, fam.k))
            .min_by_key(|&c| ((c & tn).len(), !t.forest.is_vertical(c & tn)));
        match best {
            Some(c) => {
                report.max_defect_used = report.max_defect_used.max((c & tn).len());
                report.vertical_witnesses &= t.forest.is_vertical(c & tn);
            }
            None => {
                report.ok = false;
                report.failing_bags.push(ct.bags[i]);
            }
        }
    }
    Ok(report)
}

/// Whether the family has a carver for every bag of the witness tree of `t`.
pub fn validate_family(g: &Graph, fam: &CarverFamily, t: &TreedepthStructure) -> Result<bool> {
    Ok(validate_family_report(g, fam, t)?.ok)
}

/// Certificate-mode carvers for the separators of `g` given the structure:
/// for each structure-avoiding separator the carver the construction
/// builds from the true footprint vertices.
pub fn certificate_separator_carvers(g: &Graph, t: &TreedepthStructure, index: &SeparatorIndex) -> Result<Vec<(VertexSet, VertexSet)>> {
    let tn = t.nodes();
    let mut out = Vec::new();
    for sep in index.iter().filter(|s| is_t_avoiding(t, s.s)) {
        let s = sep.s;
        let carver = match sep.class {
            SeparatorClass::Subordinate | SeparatorClass::NonMesh => s,
            SeparatorClass::Mixed | SeparatorClass::Mesh => {
                let (a, b) = (sep.full_components[0], sep.full_components[1]);
                let fa = footprint(g, t, a)?;
                let fb = footprint(g, t, b)?;
                let mut c = (s & tn) | (g.neighbors(fa.p) - fa.t_a) | (g.neighbors(fb.p) - fb.t_a);
                if let (Some(qa), Some(qb)) = (fa.q, fb.q) {
                    let ca = g.open_neighborhood(fa.t_a.with(fa.p).with(qa));
                    let cb = g.open_neighborhood(fb.t_a.with(fb.p).with(qb));
                    c |= ca & cb;
                    if sep.class == SeparatorClass::Mesh {
                        let found = a.iter().flat_map(|ra| b.iter().map(move |rb| (ra, rb))).find(|&(ra, rb)| {
                            let six: VertexSet = [fa.p, qa, ra, fb.p, qb, rb].into_iter().collect();
                            s.is_subset(g.open_neighborhood(six))
                        });
                        let (ra, rb) = found.ok_or_else(|| {
                            Error::Invariant(format!("no covering anchors for mesh separator {s}"))
                        })?;
                        let six: VertexSet = [fa.p, qa, ra, fb.p, qb, rb].into_iter().collect();
                        for comp in g.connected_components(g.closed_neighborhood(six)) {
                            c |= g.open_neighborhood(comp);
                        }
                        c |= g.closed_neighborhood(VertexSet::singleton(qa).with(ra))
                            & g.closed_neighborhood(VertexSet::singleton(qb).with(rb));
                    }
                }
                c
            }
        };
        if !is_t_carver(g, sep, t, carver) {
            return Err(Error::Invariant(format!(
                "certificate carver {carver} fails for separator {s}"
            )));
        }
        out.push((s, carver));
    }
    Ok(out)
}
