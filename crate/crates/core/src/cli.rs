//! Command-line front end. `cli_main` is the whole program minus process
//! plumbing, so tests can drive it in-process.
//!
//! Exit codes: 0 success, 2 malformed input or usage error, 3 a `--verify`
//! mismatch, 1 any other failure (an internal error or an exceeded cap).

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::automata::{forest_automaton, mwis_automaton};
use crate::carvers::{build_family, validate_family_report, CarverFamily};
use crate::chordal::{build_clique_tree, is_chordal, is_pmc, minimalize_completion, Completion};
use crate::dp::{solve, Outcome, SolveOptions, SolveReport};
use crate::error::{Error, Result};
use crate::forest::{validate_structure, RootedForest, TreedepthStructure};
use crate::graph::{parse_vertex_list, Graph, WeightMap};
use crate::harness::{brute_force_cap, brute_force_solve, gen_fig1, gen_gn, gen_random_p6free, Instance, Problem};
use crate::separators::{enumerate_minimal_separators, SeparatorIndex, DEFAULT_SEPARATOR_CAP};

/// Version of the JSON documents printed on stdout.
pub const SCHEMA_VERSION: u32 = 1;

/// Default treedepth bound for the induced-forest problem. Induced forests
/// of P6-free graphs contain no P6, and P6-free forests have treedepth at
/// most 3, so this bound loses no solutions.
pub const DEFAULT_FVS_DEPTH: usize = 3;

#[derive(Parser, Debug)]
#[command(name = "carving", version, about = "Exact MWIS / induced-forest solver for P6-free graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Solve an instance and print the optimum as JSON.
    Solve(SolveArgs),
    /// Run one of the structural checks.
    #[command(subcommand)]
    Check(CheckCommand),
    /// Build or validate a carver family.
    #[command(subcommand)]
    Family(FamilyCommand),
    /// Print a generated graph in the graph text format.
    #[command(subcommand)]
    Gen(GenCommand),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ProblemArg {
    Mwis,
    Fvs,
}

impl From<ProblemArg> for Problem {
    fn from(p: ProblemArg) -> Problem {
        match p {
            ProblemArg::Mwis => Problem::Mwis,
            ProblemArg::Fvs => Problem::Fvs,
        }
    }
}

#[derive(Args, Debug)]
struct SolveArgs {
    #[arg(long, value_enum)]
    problem: ProblemArg,
    #[arg(long)]
    graph: PathBuf,
    /// One positive weight per line; all-ones when omitted.
    #[arg(long)]
    weights: Option<PathBuf>,
    /// Treedepth bound (ignored for mwis, which always uses 1).
    #[arg(long)]
    depth: Option<usize>,
    /// Defect bound of the carver family; defaults to the depth.
    #[arg(long)]
    defect: Option<usize>,
    /// Cross-check the optimum against exhaustive search.
    #[arg(long)]
    verify: bool,
}

#[derive(Args, Debug)]
struct GraphArg {
    #[arg(long)]
    graph: PathBuf,
}

#[derive(Subcommand, Debug)]
enum CheckCommand {
    /// Whether the graph has no induced path on `t` vertices.
    P6free {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, default_value_t = 6)]
        t: usize,
    },
    /// Chordality, with an elimination order or a minimal completion.
    Chordal(GraphArg),
    /// Whether a vertex set is a potential maximal clique.
    Pmc {
        #[arg(long)]
        graph: PathBuf,
        /// Comma-separated vertex list.
        #[arg(long)]
        set: String,
    },
    /// Classified minimal separators, one per line.
    Separators(GraphArg),
    /// Validate a family against a structure (same as `family validate`).
    Family(ValidateArgs),
    /// Clique tree of a minimal completion.
    Cliquetree(GraphArg),
}

#[derive(Subcommand, Debug)]
enum FamilyCommand {
    /// Print the carver family, one comma-separated set per line.
    Build {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        depth: usize,
        #[arg(long)]
        defect: Option<usize>,
    },
    /// Check a family against one treedepth structure.
    Validate(ValidateArgs),
}

#[derive(Args, Debug)]
struct ValidateArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    family: PathBuf,
    /// Forest file: one `v p` line per node, `p = -1` for roots.
    #[arg(long)]
    forest: PathBuf,
    /// Depth bound; defaults to the forest height.
    #[arg(long)]
    depth: Option<usize>,
    #[arg(long)]
    defect: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum GenCommand {
    /// The introduction's construction.
    Fig1 {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        i0: usize,
        /// Family members separated by `;`, each a comma-separated list of
        /// 1-based indices, e.g. `1,2;2,3,4,5;5,6,7`.
        #[arg(long)]
        family: String,
        /// Size of every part; `--sizes` overrides it per index.
        #[arg(long, default_value_t = 1)]
        part_size: usize,
        /// Comma-separated part sizes, one per index.
        #[arg(long)]
        sizes: Option<String>,
    },
    /// `n` hexagons with two hubs.
    Gn {
        #[arg(long)]
        n: usize,
    },
    /// A seeded random P6-free graph.
    Random {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0.3)]
        p: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

/// Failure of a subcommand, carrying its exit code.
#[derive(Debug)]
struct Failure {
    code: i32,
    msg: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse { .. } | Error::InvalidInput(_) | Error::Precondition(_) => 2,
            _ => 1,
        };
        Failure { code, msg: e.to_string() }
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure { code: 2, msg: msg.into() }
}

/// Runs the program on `argv` (including the program name), writing the
/// result to `out` and diagnostics to `err`; returns the exit code.
pub fn cli_main<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    let result = match cli.command {
        Command::Solve(args) => run_solve(&args, out),
        Command::Check(cmd) => run_check(&cmd, out),
        Command::Family(cmd) => run_family(&cmd, out),
        Command::Gen(cmd) => run_gen(&cmd, out),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.msg);
            f.code
        }
    }
}

fn read_file(path: &Path) -> std::result::Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))
}

fn read_graph(path: &Path) -> std::result::Result<Graph, Failure> {
    Ok(Graph::parse(&read_file(path)?)?)
}

fn emit(out: &mut dyn Write, v: &Value) -> std::result::Result<i32, Failure> {
    writeln!(out, "{}", serde_json::to_string_pretty(v).expect("JSON values serialise"))
        .map_err(|e| Failure { code: 1, msg: e.to_string() })?;
    Ok(0)
}

fn emit_text(out: &mut dyn Write, text: &str) -> std::result::Result<i32, Failure> {
    write!(out, "{text}").map_err(|e| Failure { code: 1, msg: e.to_string() })?;
    Ok(0)
}

/// Result of `solve` before rendering.
#[derive(Clone, Debug)]
pub struct SolveSummary {
    pub problem: Problem,
    pub depth: usize,
    pub defect: usize,
    pub family_size: usize,
    pub report: SolveReport,
}

/// Builds the family and runs the solver for `problem`, picking the depth
/// (`mwis` always uses 1, `fvs` defaults to [`DEFAULT_FVS_DEPTH`]) and the
/// defect (defaults to the depth).
pub fn solve_problem(
    g: &Graph,
    w: &WeightMap,
    problem: Problem,
    depth: Option<usize>,
    defect: Option<usize>,
) -> Result<SolveSummary> {
    let depth = match problem {
        Problem::Mwis => 1,
        Problem::Fvs => depth.unwrap_or(DEFAULT_FVS_DEPTH),
    };
    let defect = defect.unwrap_or(depth);
    let fam = build_family(g, depth, defect)?;
    let opts = SolveOptions::new(depth, defect);
    let report = match problem {
        Problem::Mwis => solve(g, w, &fam, &mwis_automaton(depth)?, opts)?,
        Problem::Fvs => solve(g, w, &fam, &forest_automaton(depth)?, opts)?,
    };
    Ok(SolveSummary {
        problem,
        depth,
        defect,
        family_size: fam.len(),
        report,
    })
}

fn run_solve(args: &SolveArgs, out: &mut dyn Write) -> std::result::Result<i32, Failure> {
    let g = read_graph(&args.graph)?;
    let w = match &args.weights {
        Some(p) => WeightMap::parse(&read_file(p)?, g.n())?,
        None => WeightMap::unit(g.n()),
    };
    let problem = Problem::from(args.problem);
    let start = Instant::now();
    let summary = solve_problem(&g, &w, problem, args.depth, args.defect)?;
    let elapsed_ms = start.elapsed().as_millis() as u64;
    let solution = match &summary.report.outcome {
        Outcome::Optimal(s) => Some(s),
        Outcome::Infeasible => None,
    };
    let mut mismatch = false;
    let verified = if args.verify {
        if g.n() > brute_force_cap(problem) {
            return Err(usage(format!(
                "--verify supports at most {} vertices for {}",
                brute_force_cap(problem),
                problem.name()
            )));
        }
        let inst = Instance {
            g: g.clone(),
            w: w.clone(),
            problem,
        };
        let bf = brute_force_solve(&inst, summary.depth)?;
        let ok = match (solution, &bf) {
            (Some(s), Some(b)) => s.weight == b.weight && s.x == s.sol && problem.feasible(&g, s.sol) && w.of(s.x) == s.weight,
            (None, None) => true,
            _ => false,
        };
        mismatch = !ok;
        Value::Bool(ok)
    } else {
        Value::Null
    };
    let mut doc = json!({
        "schema": SCHEMA_VERSION,
        "problem": problem.name(),
        "n": g.n(),
        "depth": summary.depth,
        "defect": summary.defect,
        "optimum_weight": solution.map(|s| s.weight),
        "X": solution.map(|s| s.x.to_vec()),
        "Sol": solution.map(|s| s.sol.to_vec()),
        "family_size": summary.family_size,
        "elapsed_ms": elapsed_ms,
        "verified": verified,
        "stats": serde_json::to_value(summary.report.stats).expect("stats serialise"),
    });
    if let (Problem::Fvs, Some(s)) = (problem, solution) {
        let fvs = g.vertices() - s.sol;
        doc["feedback_vertex_set"] = json!(fvs.to_vec());
        doc["feedback_vertex_set_weight"] = json!(w.of(fvs));
    }
    emit(out, &doc)?;
    Ok(if mismatch { 3 } else { 0 })
}

fn run_check(cmd: &CheckCommand, out: &mut dyn Write) -> std::result::Result<i32, Failure> {
    match cmd {
        CheckCommand::P6free { graph, t } => {
            let g = read_graph(graph)?;
            if *t == 0 {
                return Err(usage("--t must be positive"));
            }
            let witness = g.find_induced_path(*t);
            emit(
                out,
                &json!({
                    "schema": SCHEMA_VERSION,
                    "check": "p6free",
                    "t": t,
                    "result": witness.is_none(),
                    "induced_path": witness,
                }),
            )
        }
        CheckCommand::Chordal(GraphArg { graph }) => {
            let g = read_graph(graph)?;
            let (chordal, order) = is_chordal(&g);
            let fill = if chordal {
                Vec::new()
            } else {
                let all = Completion::new(g.non_edges());
                minimalize_completion(&g, &all)?.fill.into_iter().collect()
            };
            emit(
                out,
                &json!({
                    "schema": SCHEMA_VERSION,
                    "check": "chordal",
                    "result": chordal,
                    "elimination_order": order,
                    "minimal_fill": fill,
                }),
            )
        }
        CheckCommand::Pmc { graph, set } => {
            let g = read_graph(graph)?;
            let omega = parse_vertex_list(set, g.n())?;
            emit(
                out,
                &json!({
                    "schema": SCHEMA_VERSION,
                    "check": "pmc",
                    "set": omega.to_vec(),
                    "result": is_pmc(&g, omega),
                }),
            )
        }
        CheckCommand::Separators(GraphArg { graph }) => {
            let g = read_graph(graph)?;
            let index = SeparatorIndex::build(&g, DEFAULT_SEPARATOR_CAP)?;
            let mut text = String::new();
            for sep in index.iter() {
                let full: Vec<String> = sep.full_components.iter().map(|c| c.to_csv()).collect();
                text.push_str(&format!("{} {} {}\n", sep.s.to_csv(), sep.class.name(), full.join(";")));
            }
            emit_text(out, &text)
        }
        CheckCommand::Family(args) => run_validate(args, out),
        CheckCommand::Cliquetree(GraphArg { graph }) => {
            let g = read_graph(graph)?;
            let fill = minimalize_completion(&g, &Completion::new(g.non_edges()))?;
            let ct = build_clique_tree(&g, &fill)?;
            let seps = enumerate_minimal_separators(&g, DEFAULT_SEPARATOR_CAP)?;
            let adhesions_ok = ct
                .edges
                .iter()
                .all(|&(a, b)| seps.contains(&ct.adhesion(a, b)));
            emit(
                out,
                &json!({
                    "schema": SCHEMA_VERSION,
                    "check": "cliquetree",
                    "fill": fill.fill.iter().collect::<Vec<_>>(),
                    "bags": ct.bags.iter().map(|b| b.to_vec()).collect::<Vec<_>>(),
                    "edges": ct.edges,
                    "valid": ct.is_valid(&g)?,
                    "adhesions_are_minimal_separators": adhesions_ok,
                }),
            )
        }
    }
}

fn run_validate(args: &ValidateArgs, out: &mut dyn Write) -> std::result::Result<i32, Failure> {
    let g = read_graph(&args.graph)?;
    let forest = RootedForest::parse(&read_file(&args.forest)?, g.n())?;
    let d = args.depth.unwrap_or(forest.height().max(1));
    let k = args.defect.unwrap_or(d);
    let t = TreedepthStructure::new(forest, d);
    if !validate_structure(&g, &t) {
        return Err(usage(format!("the forest is not a treedepth-{d} structure of the graph")));
    }
    let fam = CarverFamily::parse(&read_file(&args.family)?, g.n(), d, k)?;
    let report = validate_family_report(&g, &fam, &t)?;
    emit(
        out,
        &json!({
            "schema": SCHEMA_VERSION,
            "check": "family",
            "result": report.ok,
            "bags": report.bags,
            "failing_bags": report.failing_bags.iter().map(|b| b.to_vec()).collect::<Vec<_>>(),
            "max_defect_used": report.max_defect_used,
            "vertical_witnesses": report.vertical_witnesses,
        }),
    )
}

fn run_family(cmd: &FamilyCommand, out: &mut dyn Write) -> std::result::Result<i32, Failure> {
    match cmd {
        FamilyCommand::Build { graph, depth, defect } => {
            let g = read_graph(graph)?;
            let fam = build_family(&g, *depth, defect.unwrap_or(*depth))?;
            emit_text(out, &fam.to_text())
        }
        FamilyCommand::Validate(args) => run_validate(args, out),
    }
}

fn parse_index_list(text: &str) -> std::result::Result<Vec<usize>, Failure> {
    text.split(',')
        .map(|s| s.trim().parse::<usize>().map_err(|_| usage(format!("bad index `{s}`"))))
        .collect()
}

fn run_gen(cmd: &GenCommand, out: &mut dyn Write) -> std::result::Result<i32, Failure> {
    let g = match cmd {
        GenCommand::Fig1 {
            n,
            i0,
            family,
            part_size,
            sizes,
        } => {
            let fam = family
                .split(';')
                .map(parse_index_list)
                .collect::<std::result::Result<Vec<_>, _>>()?;
            let sizes = match sizes {
                Some(s) => parse_index_list(s)?,
                None => vec![*part_size; *n],
            };
            gen_fig1(*n, *i0, &fam, &sizes)?.graph
        }
        GenCommand::Gn { n } => gen_gn(*n)?.graph,
        GenCommand::Random { n, p, seed } => {
            if !(0.0..=1.0).contains(p) {
                return Err(usage("--p must lie in [0, 1]"));
            }
            gen_random_p6free(*n, *p, *seed)?
        }
    };
    emit_text(out, &g.to_text())
}
