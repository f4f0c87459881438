//! Acceptance suite: one PASS/FAIL line per criterion, each checked against
//! an independent oracle. Runs without the libtest harness so every line is
//! printed; the process fails if any criterion fails.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

use carving::automata::{
    all_multisets, cap, forest_automaton, label_structure, run, CappedMultiset,
};
use carving::carvers::{build_family, separator_carver_family, validate_family_with};
use carving::chordal::{
    aligned_minimal_completion, build_clique_tree, find_spade_violation, is_chordal, is_pmc,
    minimalize_completion, satisfies_spade, Completion,
};
use carving::cli::solve_problem;
use carving::dp::Outcome;
use carving::forest::{
    enumerate_maximal_structures, enumerate_structures, random_maximal_structure, PartialSolution,
    TreedepthStructure,
};
use carving::graph::named::{cycle, mesh_example, star};
use carving::graph::{Graph, WeightMap};
use carving::harness::{
    brute_force_solve, fig1_caption_instance, gen_fig1, gen_gn, gen_random_p6free, graphs_up_to_isomorphism,
    pmcs_brute, Instance, Problem,
};
use carving::separators::{is_minimal_separator, is_t_avoiding, is_t_carver, SeparatorIndex, DEFAULT_SEPARATOR_CAP};
use carving::vset::VertexSet;

type Verdict = Result<String, String>;

/// Fails the criterion with a message unless `cond` holds.
macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn lib<T>(r: carving::error::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

struct Named {
    name: String,
    g: Graph,
    w: WeightMap,
}

fn random_weights(n: usize, seed: u64) -> WeightMap {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    WeightMap::new((0..n).map(|_| rng.random_range(1..=9)).collect()).expect("weights are positive")
}

/// The end-to-end corpus: 210 seeded random P6-free graphs with `n` cycling
/// through 4..=10 and four edge densities, plus the named examples.
fn solve_corpus() -> Vec<Named> {
    let mut out = Vec::new();
    for i in 0..210u64 {
        let n = 4 + (i % 7) as usize;
        let p = [0.25, 0.4, 0.55, 0.7][(i / 7 % 4) as usize];
        let g = gen_random_p6free(n, p, 1000 + i).expect("generator succeeds");
        out.push(Named { name: format!("random#{i}(n={n},p={p})"), w: random_weights(n, i), g });
    }
    let fig1_small = gen_fig1(3, 2, &[vec![1, 2], vec![2, 3]], &[1; 3]).expect("valid parameters").graph;
    let fig1_four = gen_fig1(4, 2, &[vec![1, 2], vec![2, 3, 4]], &[1; 4]).expect("valid parameters").graph;
    for (name, g) in [
        ("C4", cycle(4)),
        ("C5", cycle(5)),
        ("C6", cycle(6)),
        ("K1,3", star(3)),
        ("mesh", mesh_example()),
        ("fig1(n=3)", fig1_small),
        ("fig1(n=4)", fig1_four),
    ] {
        let n = g.n();
        out.push(Named { name: name.into(), w: WeightMap::unit(n), g: g.clone() });
        out.push(Named { name: format!("{name}/weighted"), w: random_weights(n, n as u64), g });
    }
    out
}

/// The 50-instance structural corpus, `n` in 6..=10.
fn structure_corpus() -> Vec<Graph> {
    (0..50u64)
        .map(|i| {
            let n = 6 + (i % 5) as usize;
            let p = [0.3, 0.45, 0.6][(i % 3) as usize];
            gen_random_p6free(n, p, 5000 + i).expect("generator succeeds")
        })
        .collect()
}

fn end_to_end(problem: Problem, max_n: usize, min_count: usize, per_instance: Duration) -> Verdict {
    let mut count = 0;
    let mut slowest = (Duration::ZERO, String::new());
    for inst in solve_corpus().into_iter().filter(|i| i.g.n() <= max_n) {
        let start = Instant::now();
        let got = lib(solve_problem(&inst.g, &inst.w, problem, None, None))?;
        let took = start.elapsed();
        let oracle = lib(brute_force_solve(
            &Instance { g: inst.g.clone(), w: inst.w.clone(), problem },
            got.depth,
        ))?;
        match (&got.report.outcome, oracle) {
            (Outcome::Optimal(s), Some(b)) => {
                ensure!(s.weight == b.weight, "{}: weight {} but oracle {}", inst.name, s.weight, b.weight);
                ensure!(
                    s.x == s.sol && problem.feasible(&inst.g, s.x) && inst.w.of(s.x) == s.weight,
                    "{}: returned set {} is not a feasible solution of weight {}",
                    inst.name,
                    s.x,
                    s.weight
                );
            }
            (Outcome::Infeasible, None) => {}
            (o, b) => return Err(format!("{}: solver {o:?} vs oracle {b:?}", inst.name)),
        }
        ensure!(took <= per_instance, "{}: took {took:?}", inst.name);
        if took > slowest.0 {
            slowest = (took, inst.name.clone());
        }
        count += 1;
    }
    ensure!(count >= min_count, "only {count} instances");
    Ok(format!("{count} instances exact; slowest {} in {:.1?}", slowest.1, slowest.0))
}

fn criterion_1() -> Verdict {
    end_to_end(Problem::Mwis, 10, 200, Duration::from_secs(300))
}

/// The n ≤ 9 part of the same corpus (192 instances).
fn criterion_2() -> Verdict {
    end_to_end(Problem::Fvs, 9, 190, Duration::from_secs(600))
}

fn criterion_3() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (mut d1, mut d2) = (0, 0);
    for (i, g) in structure_corpus().iter().enumerate() {
        let index = lib(SeparatorIndex::build(g, DEFAULT_SEPARATOR_CAP))?;
        let fam1 = lib(build_family(g, 1, 1))?;
        for t in lib(enumerate_maximal_structures(g, 1, 1_000_000))? {
            ensure!(lib(validate_family_with(g, &fam1, &t, &index))?.ok, "graph #{i}: d=1 fails for {t:?}");
            d1 += 1;
        }
        let fam2 = lib(build_family(g, 2, 2))?;
        let mut seen = BTreeSet::new();
        for _ in 0..200 {
            if seen.len() == 20 {
                break;
            }
            let t = random_maximal_structure(g, 2, &mut rng);
            if seen.insert(t.forest.entries()) {
                ensure!(lib(validate_family_with(g, &fam2, &t, &index))?.ok, "graph #{i}: d=2 fails for {t:?}");
                d2 += 1;
            }
        }
        // Graphs with fewer than 20 distinct maximal depth-2 structures are
        // covered exhaustively instead.
        if seen.len() < 20 {
            for t in lib(enumerate_maximal_structures(g, 2, 1_000_000))? {
                if seen.insert(t.forest.entries()) {
                    ensure!(lib(validate_family_with(g, &fam2, &t, &index))?.ok, "graph #{i}: d=2 fails");
                    d2 += 1;
                }
            }
        }
    }
    Ok(format!("{d1} depth-1 and {d2} depth-2 structures validated on 50 graphs"))
}

fn criterion_4() -> Verdict {
    let mut checks = 0;
    for (i, g) in structure_corpus().iter().enumerate() {
        let index = lib(SeparatorIndex::build(g, DEFAULT_SEPARATOR_CAP))?;
        let fam = lib(separator_carver_family(g, 1))?;
        for t in lib(enumerate_maximal_structures(g, 1, 1_000_000))? {
            for sep in index.iter().filter(|s| is_t_avoiding(&t, s.s)) {
                ensure!(
                    fam.iter().any(|&c| is_t_carver(g, sep, &t, c)),
                    "graph #{i}: no carver for {} ({}) and independent set {}",
                    sep.s,
                    sep.class.name(),
                    t.nodes()
                );
                checks += 1;
            }
        }
    }
    Ok(format!("{checks} (independent set, separator) pairs carved"))
}

fn criterion_5() -> Verdict {
    let mut graphs: Vec<Graph> = solve_corpus().into_iter().map(|i| i.g).collect();
    graphs.extend(structure_corpus());
    let mut seen = BTreeSet::new();
    let (mut count, mut sets) = (0, 0);
    for g in graphs.into_iter().filter(|g| g.n() <= 8) {
        if !seen.insert(g.edges()) || g.n() == 0 {
            continue;
        }
        let pmcs: BTreeSet<VertexSet> = lib(pmcs_brute(&g))?.into_iter().collect();
        for omega in g.vertices().all_subsets().filter(|s| !s.is_empty()) {
            ensure!(is_pmc(&g, omega) == pmcs.contains(&omega), "{g:?}: disagreement on {omega}");
            sets += 1;
        }
        count += 1;
    }
    Ok(format!("{count} graphs, {sets} vertex sets agree"))
}

/// `g + fill` is chordal and dropping any single fill edge breaks that.
fn single_edge_irremovable(g: &Graph, fill: &Completion) -> Result<bool, String> {
    if !is_chordal(&lib(fill.apply(g))?).0 {
        return Ok(false);
    }
    for &e in &fill.fill {
        let smaller = Completion::new(fill.fill.iter().copied().filter(|&f| f != e));
        if is_chordal(&lib(smaller.apply(g))?).0 {
            return Ok(false);
        }
    }
    Ok(true)
}

fn pairs(rng: &mut ChaCha8Rng, count: usize) -> Vec<(Graph, TreedepthStructure)> {
    let graphs = structure_corpus();
    (0..count)
        .map(|i| {
            let g = graphs[i % graphs.len()].clone();
            let d = 1 + i % 3;
            let t = random_maximal_structure(&g, d, rng);
            (g, t)
        })
        .collect()
}

fn criterion_6() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut fills = 0;
    for (g, t) in pairs(&mut rng, 100) {
        let fill = lib(aligned_minimal_completion(&g, &t))?;
        ensure!(single_edge_irremovable(&g, &fill)?, "{g:?}: completion not minimal");
        let deep = t.deepest_level();
        for &(u, v) in &fill.fill {
            ensure!(!deep.contains(u) && !deep.contains(v), "{g:?}: fill {u}-{v} touches a deepest node");
            if t.nodes().contains(u) && t.nodes().contains(v) {
                ensure!(t.forest.comparable(u, v), "{g:?}: fill {u}-{v} joins incomparable nodes");
            }
        }
        fills += fill.len();
    }
    Ok(format!("100 aligned completions ({fills} fill edges) minimal and aligned"))
}

fn criterion_7() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut max_moves = 0;
    let mut instances = pairs(&mut rng, 50)
        .into_iter()
        .map(|(g, t)| aligned_minimal_completion(&g, &t).map(|c| (g, c)))
        .collect::<carving::error::Result<Vec<_>>>()
        .map_err(|e| e.to_string())?;
    // Also minimal completions reached from the complete fill, which need
    // not be aligned with any structure.
    for g in structure_corpus() {
        let c = lib(minimalize_completion(&g, &Completion::new(g.non_edges())))?;
        instances.push((g, c));
    }
    ensure!(instances.len() == 100, "corpus has {} completions", instances.len());
    for (g, c) in &instances {
        let index = lib(SeparatorIndex::build(g, DEFAULT_SEPARATOR_CAP))?;
        let mut ct = lib(build_clique_tree(g, c))?;
        let mut moves = 0;
        while let Some((s, t, u)) = lib(find_spade_violation(g, &ct, &index))? {
            moves += 1;
            ensure!(moves <= g.n() * g.n(), "{g:?}: more than n² moves");
            ct.edges.retain(|&e| e != (s.min(t), s.max(t)));
            ct.edges.push((s.min(u), s.max(u)));
            ct.edges.sort_unstable();
        }
        ensure!(lib(ct.is_valid(g))?, "{g:?}: repaired tree is not a clique tree");
        ensure!(lib(satisfies_spade(g, &ct, &index))?, "{g:?}: property does not hold");
        max_moves = max_moves.max(moves);
    }
    Ok(format!("100 clique trees normalised, at most {max_moves} moves"))
}

/// Reference reduction: subtract `τ` until the value is at most `2τ`.
fn cap_oracle(k: usize, tau: usize) -> usize {
    if tau == 0 {
        return 0;
    }
    let mut c = k;
    while c > 2 * tau {
        c -= tau;
    }
    c
}

fn criterion_8() -> Verdict {
    for tau in 0..=5 {
        for k in 0..=50 {
            ensure!(cap(k, tau) == cap_oracle(k, tau), "cap({k},{tau}) = {}", cap(k, tau));
        }
    }
    for q in 0..=3usize {
        let states: Vec<usize> = (0..q).collect();
        for tau in 1..=3usize {
            let all = all_multisets(&states, tau);
            let expect = (2 * tau + 1).pow(q as u32);
            ensure!(all.len() == expect, "|Multi| = {} for |Q|={q}, τ={tau}", all.len());
            let distinct: BTreeSet<_> = all.iter().cloned().collect();
            ensure!(distinct.len() == expect, "duplicate multisets for |Q|={q}, τ={tau}");
        }
    }
    // cap(cap(a) + cap(b)) = cap(a + b), and unions of capped multisets
    // agree with capping the raw sum.
    for tau in 1..=3usize {
        for a in 0..=6 * tau {
            for b in 0..=6 * tau {
                ensure!(
                    cap(cap(a, tau) + cap(b, tau), tau) == cap(a + b, tau),
                    "union identity fails at a={a}, b={b}, τ={tau}"
                );
                let ma = CappedMultiset::from_counts(tau, [(0u8, a), (1, b)]);
                let mb = CappedMultiset::from_counts(tau, [(0u8, b), (1, a + 1)]);
                let raw = CappedMultiset::from_counts(tau, [(0u8, a + b), (1, a + b + 1)]);
                ensure!(ma.union(&mb) == raw, "multiset union fails at a={a}, b={b}, τ={tau}");
            }
        }
    }
    Ok("cap formula, multiset counts and union identity exact".into())
}

fn criterion_9() -> Verdict {
    let a = lib(forest_automaton(3))?;
    let (mut graphs, mut structures, mut runs) = (0, 0, 0u64);
    for n in 0..=6 {
        for g in graphs_up_to_isomorphism(n) {
            for t in lib(enumerate_structures(&g, 3, 10_000_000))? {
                for sol in t.nodes().all_subsets() {
                    let ps = PartialSolution::new(t.clone(), sol, sol);
                    let accepted = lib(run(&a, &lib(label_structure(&g, &ps))?))?.1;
                    ensure!(accepted == g.is_acyclic(sol), "{g:?}: {t:?} with Sol {sol}");
                    runs += 1;
                }
                structures += 1;
            }
            graphs += 1;
        }
    }
    Ok(format!("{graphs} graphs (up to isomorphism), {structures} structures, {runs} runs agree"))
}

fn is_maximal_independent(g: &Graph, s: VertexSet) -> bool {
    g.is_independent(s) && (g.vertices() - s).iter().all(|v| g.neighbors(v).intersects(s))
}

fn criterion_10() -> Verdict {
    let fig = fig1_caption_instance();
    let g = &fig.graph;
    ensure!(g.n() == 17 && g.is_pt_free(6), "caption instance is not a P6-free 17-vertex graph");
    // Parts are singletons, so B_{i₀} is its own maximal independent set;
    // check every choice of i₀.
    for b in &fig.b_parts {
        ensure!(is_maximal_independent(g, fig.independent_set(*b)), "I for part {b} is not maximal independent");
    }
    let n = fig.a_parts.len();
    let mut separators = 0;
    for mask in 1..(1u32 << n) - 1 {
        let j: Vec<usize> = (1..=n).filter(|i| mask >> (i - 1) & 1 == 1).collect();
        if fig.family.iter().any(|k| j.iter().all(|i| k.contains(i))) {
            continue;
        }
        let s = fig.s_j(&j);
        ensure!(is_minimal_separator(g, s), "S_J not a minimal separator for J={j:?}");
        let comps: BTreeSet<VertexSet> = g.connected_components(s).into_iter().collect();
        let full: BTreeSet<VertexSet> = comps.iter().copied().filter(|c| g.open_neighborhood(*c) == s).collect();
        let expected: BTreeSet<VertexSet> = [fig.b_j(&j), fig.a_j(&j)].into_iter().collect();
        ensure!(full == expected, "full components differ for J={j:?}");
        ensure!(comps.iter().all(|c| full.contains(c) || c.len() == 1), "extra component for J={j:?}");
        separators += 1;
    }
    let mut fs = 0;
    for k in 1..=3 {
        let gn = lib(gen_gn(k))?;
        let g = &gn.graph;
        ensure!(g.n() == 6 * k + 2 && g.is_pt_free(7), "G_{k} is not a P7-free graph on {} vertices", 6 * k + 2);
        let mut f = vec![0usize; k];
        loop {
            let i_f = gn.i_f(&f);
            ensure!(is_maximal_independent(g, i_f), "G_{k}: I_f not maximal independent for {f:?}");
            let s = gn.s_f(&f);
            ensure!(is_minimal_separator(g, s), "G_{k}: S_f not a minimal separator for {f:?}");
            let full: BTreeSet<VertexSet> = g
                .connected_components(s)
                .into_iter()
                .filter(|c| g.open_neighborhood(*c) == s)
                .collect();
            let expected: BTreeSet<VertexSet> = [gn.a_f(&f), gn.b_f(&f)].into_iter().collect();
            ensure!(full == expected, "G_{k}: full sides differ for {f:?}");
            ensure!(full.iter().all(|c| g.is_mesh(*c)), "G_{k}: a full side is not mesh for {f:?}");
            fs += 1;
            // Next f : [k] → {0, 2, 4}.
            let Some(pos) = f.iter().position(|&x| x < 4) else { break };
            f[pos] += 2;
            f[..pos].iter_mut().for_each(|x| *x = 0);
        }
    }
    Ok(format!("caption instance: {separators} separators S_J checked; G_1..G_3: {fs} functions f checked"))
}

fn main() {
    type Criterion = (&'static str, fn() -> Verdict);
    let criteria: [Criterion; 10] = [
        ("end-to-end MWIS", criterion_1),
        ("end-to-end FVS", criterion_2),
        ("carver-family validity", criterion_3),
        ("separator carvers", criterion_4),
        ("PMC characterisation", criterion_5),
        ("aligned completions", criterion_6),
        ("clique-tree normalisation", criterion_7),
        ("automaton algebra", criterion_8),
        ("forest automaton", criterion_9),
        ("generator fidelity", criterion_10),
    ];
    // `cargo test acceptance -- <numbers>` runs a subset.
    let only: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let id = i + 1;
        if !only.is_empty() && !only.contains(&id) {
            continue;
        }
        let start = Instant::now();
        let verdict = check();
        let secs = start.elapsed().as_secs_f64();
        match verdict {
            Ok(detail) => println!("criterion {id:>2} PASS [{name}] {detail} ({secs:.1}s)"),
            Err(why) => {
                failed += 1;
                println!("criterion {id:>2} FAIL [{name}] {why} ({secs:.1}s)");
            }
        }
    }
    if failed > 0 {
        eprintln!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
