//! Command-line driver for the exact-distance and group-action tools.
//!
//! Every subcommand prints either human-readable lines or, with `--json`, a
//! full [`report::Report`]. Exit codes are part of the interface: `0` on
//! success, `1` when an input describes an invalid object (bad metric,
//! vector outside the cone, sizes the requested computation rejects), `2`
//! on I/O, parse, or usage trouble, and `3` when a search exhausts its
//! trial budget without finding anything.

mod report;

use std::path::{Path, PathBuf};
use std::process::exit;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use ghlab::{
    bijection_gap_search, classify, count_edge_pairs, gh_bijective, gh_exact,
    gh_to_simplex_closed, gh_to_simplex_enum, load_dist_vector, load_space, normalizer_probe,
    save_witness, search_non_induced, star_to_cycle_perm, DistVector, EdgePermutation,
    FiniteMetricSpace, LoadError, SimplexSpec, WitnessRecord, DEFAULT_DIST_RANGE,
    DEFAULT_TOLERANCE, GAP_THRESHOLD,
};
use report::{Report, ReportBuilder};

const EXIT_INVALID: i32 = 1;
const EXIT_IO: i32 = 2;
const EXIT_EXHAUSTED: i32 = 3;

/// Exact distances, simplex formulas, and symmetry checks for finite metric
/// spaces.
#[derive(Parser)]
#[command(name = "ghlab", version, about)]
struct Cli {
    /// Emit a machine-readable JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check that a file describes a valid finite metric space.
    Validate { file: PathBuf },
    /// Distance between two spaces, by exact search and/or best bijection.
    Dist {
        x: PathBuf,
        y: PathBuf,
        #[arg(long, value_enum, default_value_t = DistMethod::Exact)]
        method: DistMethod,
    },
    /// Distance from a space to the simplex with `n` points at distance `t`.
    Simplex {
        file: PathBuf,
        /// Simplex point count.
        #[arg(long)]
        n: usize,
        /// Simplex side length.
        #[arg(long)]
        t: f64,
        #[arg(long, value_enum, default_value_t = SimplexMethod::All)]
        method: SimplexMethod,
    },
    /// Classify a distance vector: stabilizer, tight triangles, genericity.
    Classify {
        file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
        tol: f64,
    },
    /// Orbit and stabilizer of a distance vector under point relabelings.
    Orbit {
        file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
        tol: f64,
    },
    /// Run a complete-graph edge-permutation check.
    Graph {
        /// Vertex count.
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum)]
        check: GraphCheck,
    },
    /// Hunt random pairs for a gap between bijection and exact distance.
    Search {
        /// Points per sampled space (at least 3).
        #[arg(long)]
        points: usize,
        /// Trial budget.
        #[arg(long)]
        trials: u64,
        /// RNG seed; identical seeds reproduce identical runs.
        #[arg(long)]
        seed: u64,
        /// Write the witness to this file as JSON.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum DistMethod {
    Exact,
    Bijection,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum SimplexMethod {
    Closed,
    Enum,
    Solver,
    All,
}

#[derive(Clone, Copy, ValueEnum)]
enum GraphCheck {
    Lemma81,
    Lemma84,
    Remark82,
    Normalizer,
}

struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self { code: EXIT_IO, message: message.into() }
    }
}

impl From<LoadError> for Failure {
    fn from(e: LoadError) -> Self {
        let code = match &e {
            LoadError::Io { .. } | LoadError::Parse { .. } => EXIT_IO,
            LoadError::Metric(_) => EXIT_INVALID,
        };
        Self { code, message: e.to_string() }
    }
}

impl From<ghlab::Error> for Failure {
    fn from(e: ghlab::Error) -> Self {
        Self { code: EXIT_INVALID, message: e.to_string() }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Self { code: EXIT_IO, message: e.to_string() }
    }
}

/// A finished subcommand: the report, its text rendering, and the exit code.
struct Outcome {
    report: Report,
    lines: Vec<String>,
    code: i32,
}

fn main() {
    let cli = Cli::parse();
    if let Err(f) = init_threads() {
        fail(f);
    }
    match run(cli.command) {
        Ok(outcome) => {
            let text = if cli.json {
                serde_json::to_string_pretty(&outcome.report).expect("serializable")
            } else {
                let mut t = outcome.lines.join("\n");
                t.push_str(&format!("\ndigest: {}", outcome.report.digest));
                t
            };
            emit(&text);
            exit(outcome.code);
        }
        Err(f) => fail(f),
    }
}

/// Writes the rendered output. A closed stdout (the consumer stopped
/// reading, e.g. `| head`) truncates quietly instead of panicking; the
/// command's own exit code still stands.
fn emit(text: &str) {
    use std::io::{ErrorKind, Write};
    let mut out = std::io::stdout().lock();
    match writeln!(out, "{text}").and_then(|()| out.flush()) {
        Ok(()) => {}
        Err(e) if e.kind() == ErrorKind::BrokenPipe => {}
        Err(e) => fail(Failure::from(e)),
    }
}

fn fail(f: Failure) -> ! {
    use std::io::Write;
    // Best effort: a failing stderr must not mask the exit code.
    let _ = writeln!(std::io::stderr().lock(), "error: {}", f.message);
    exit(f.code);
}

/// Applies `GHLAB_THREADS` to the global worker pool; `0` or unset means
/// automatic.
fn init_threads() -> Result<(), Failure> {
    let Ok(raw) = std::env::var("GHLAB_THREADS") else {
        return Ok(());
    };
    let threads: usize = raw
        .parse()
        .map_err(|_| Failure::usage(format!("GHLAB_THREADS must be a non-negative integer, got {raw:?}")))?;
    // A second initialization (e.g. in tests) is harmless; results never
    // depend on the pool size.
    let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    Ok(())
}

fn run(command: Command) -> Result<Outcome, Failure> {
    match command {
        Command::Validate { file } => cmd_validate(&file),
        Command::Dist { x, y, method } => cmd_dist(&x, &y, method),
        Command::Simplex { file, n, t, method } => cmd_simplex(&file, n, t, method),
        Command::Classify { file, tol } => cmd_classify(&file, tol),
        Command::Orbit { file, tol } => cmd_orbit(&file, tol),
        Command::Graph { n, check } => cmd_graph(n, check),
        Command::Search { points, trials, seed, out } => {
            cmd_search(points, trials, seed, out.as_deref())
        }
    }
}

fn space_summary(space: &FiniteMetricSpace) -> Value {
    json!({
        "n": space.len(),
        "diameter": space.diameter(),
        "min_distance": if space.len() > 1 { Value::from(space.min_distance().expect("two points")) } else { Value::Null },
    })
}

fn cmd_validate(file: &Path) -> Result<Outcome, Failure> {
    let mut builder = ReportBuilder::new("validate", json!({ "file": file.display().to_string() }));
    builder.add_input(file)?;
    let space = load_space(file)?;
    let results = json!({
        "valid": true,
        "space": space_summary(&space),
        "labels": space.labels(),
    });
    let lines = vec![
        format!("valid metric space on {} points", space.len()),
        format!("diameter     = {}", space.diameter()),
        match space.len() {
            1 => "min distance = (none)".to_string(),
            _ => format!("min distance = {}", space.min_distance().expect("two points")),
        },
    ];
    Ok(Outcome { report: builder.finish(results), lines, code: 0 })
}

fn cmd_dist(x_path: &Path, y_path: &Path, method: DistMethod) -> Result<Outcome, Failure> {
    let method_name = match method {
        DistMethod::Exact => "exact",
        DistMethod::Bijection => "bijection",
        DistMethod::Both => "both",
    };
    let mut builder = ReportBuilder::new(
        "dist",
        json!({
            "x": x_path.display().to_string(),
            "y": y_path.display().to_string(),
            "method": method_name,
        }),
    );
    builder.add_input(x_path)?;
    builder.add_input(y_path)?;
    let x = load_space(x_path)?;
    let y = load_space(y_path)?;

    let mut results = serde_json::Map::new();
    let mut lines = vec![format!("|X| = {}, |Y| = {}", x.len(), y.len())];
    let mut exact_value = None;
    if matches!(method, DistMethod::Exact | DistMethod::Both) {
        let (d, witness) = gh_exact(&x, &y);
        exact_value = Some(d);
        results.insert("exact".into(), json!(d));
        results.insert("correspondence".into(), json!(witness.expand()));
        results.insert("blocks".into(), json!(witness.k()));
        lines.push(format!("exact distance     = {d}"));
        lines.push(format!(
            "correspondence     = {}",
            witness
                .expand()
                .iter()
                .map(|(a, b)| format!("({a},{b})"))
                .collect::<Vec<_>>()
                .join(" ")
        ));
    }
    if matches!(method, DistMethod::Bijection | DistMethod::Both) {
        let (d, sigma) = gh_bijective(&x, &y)?;
        results.insert("bijective".into(), json!(d));
        results.insert("permutation".into(), json!(sigma.images()));
        lines.push(format!("bijection distance = {d}"));
        if let Some(e) = exact_value {
            let gap = d - e;
            results.insert("gap".into(), json!(gap));
            results.insert("gap_above_threshold".into(), json!(gap > GAP_THRESHOLD));
            lines.push(format!(
                "gap                = {gap}{}",
                if gap > GAP_THRESHOLD { " (above threshold)" } else { "" }
            ));
        }
    }
    Ok(Outcome { report: builder.finish(Value::Object(results)), lines, code: 0 })
}

fn cmd_simplex(file: &Path, n: usize, t: f64, method: SimplexMethod) -> Result<Outcome, Failure> {
    if n == 0 {
        return Err(Failure::usage("--n must be at least 1"));
    }
    if !(t > 0.0 && t.is_finite()) {
        return Err(Failure::usage("--t must be a positive finite number"));
    }
    let method_name = match method {
        SimplexMethod::Closed => "closed",
        SimplexMethod::Enum => "enum",
        SimplexMethod::Solver => "solver",
        SimplexMethod::All => "all",
    };
    let mut builder = ReportBuilder::new(
        "simplex",
        json!({
            "file": file.display().to_string(),
            "n": n,
            "t": t,
            "method": method_name,
        }),
    );
    builder.add_input(file)?;
    let x = load_space(file)?;
    let spec = SimplexSpec::new(n, t)?;

    let mut results = serde_json::Map::new();
    let mut lines = vec![format!("distance from {} points to the {n}-simplex at side {t}", x.len())];
    let mut values = Vec::new();
    if matches!(method, SimplexMethod::Closed | SimplexMethod::All) {
        let (d, case) = gh_to_simplex_closed(&spec, &x)?;
        results.insert("closed".into(), json!({ "value": d, "case": case.to_string() }));
        lines.push(format!("closed form, case \"{case}\": {d}"));
        values.push(d);
    }
    if matches!(method, SimplexMethod::Enum | SimplexMethod::All) {
        if spec.n <= x.len() {
            let d = gh_to_simplex_enum(&spec, &x)?;
            results.insert("enum".into(), json!({ "value": d }));
            lines.push(format!("partition enumeration: {d}"));
            values.push(d);
        } else if matches!(method, SimplexMethod::Enum) {
            // Explicitly requesting the inapplicable backend is an error;
            // under `all` the other backends still answer.
            return Err(ghlab::Error::TooManySimplexPoints.into());
        } else {
            lines.push("partition enumeration: n/a (simplex larger than the space)".into());
        }
    }
    if matches!(method, SimplexMethod::Solver | SimplexMethod::All) {
        let (d, _) = gh_exact(&spec.space(), &x);
        results.insert("solver".into(), json!({ "value": d }));
        lines.push(format!("exact solver: {d}"));
        values.push(d);
    }
    if matches!(method, SimplexMethod::All) {
        let spread = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
            - values.iter().cloned().fold(f64::INFINITY, f64::min);
        let agree = spread <= 1e-9;
        results.insert("agree".into(), json!(agree));
        lines.push(format!("backends agree: {agree}"));
    }
    Ok(Outcome { report: builder.finish(Value::Object(results)), lines, code: 0 })
}

fn load_vector_checked(file: &Path, limit: usize) -> Result<DistVector, Failure> {
    let rho = load_dist_vector(file)?;
    if rho.n() > limit {
        return Err(Failure::usage(format!(
            "vector describes {} points; this command supports at most {limit}",
            rho.n()
        )));
    }
    Ok(rho)
}

fn cmd_classify(file: &Path, tol: f64) -> Result<Outcome, Failure> {
    let mut builder = ReportBuilder::new(
        "classify",
        json!({ "file": file.display().to_string(), "tol": tol }),
    );
    builder.add_input(file)?;
    let rho = load_vector_checked(file, 8)?;
    let report = classify(&rho, tol)?;
    let yes_no = |b: bool| if b { "yes" } else { "no" };
    let lines = vec![
        format!("distance vector on {} points ({} coordinates)", rho.n(), rho.coords().len()),
        format!("regular    : {} (stabilizer order {})", yes_no(report.regular), report.stabilizer.len()),
        format!("degenerate : {} ({} tight triples)", yes_no(report.degenerate), report.degenerate_triples.len()),
        format!("generic    : {}", yes_no(report.generic)),
    ];
    let results = json!({
        "n": rho.n(),
        "classification": report,
    });
    Ok(Outcome { report: builder.finish(results), lines, code: 0 })
}

fn cmd_orbit(file: &Path, tol: f64) -> Result<Outcome, Failure> {
    let mut builder = ReportBuilder::new(
        "orbit",
        json!({ "file": file.display().to_string(), "tol": tol }),
    );
    builder.add_input(file)?;
    let rho = load_vector_checked(file, 8)?;
    let orbit = rho.orbit()?;
    let stabilizer = rho.stabilizer(tol)?;
    let group_order = ghlab::factorial(rho.n());
    let product_ok = orbit.len() as u64 * stabilizer.len() as u64 == group_order;
    let results = json!({
        "n": rho.n(),
        "orbit_size": orbit.len(),
        "stabilizer_order": stabilizer.len(),
        "stabilizer": stabilizer,
        "group_order": group_order,
        "orbit_stabilizer_product_ok": product_ok,
    });
    let lines = vec![
        format!("distance vector on {} points", rho.n()),
        format!("orbit size       = {}", orbit.len()),
        format!("stabilizer order = {}", stabilizer.len()),
        format!(
            "{} x {} = {} {} {}! = {}",
            orbit.len(),
            stabilizer.len(),
            orbit.len() as u64 * stabilizer.len() as u64,
            if product_ok { "=" } else { "!=" },
            rho.n(),
            group_order,
        ),
    ];
    Ok(Outcome { report: builder.finish(results), lines, code: 0 })
}

fn perm_json(p: &ghlab::Perm) -> Value {
    json!(p.images())
}

fn edge_perm_json(e: &EdgePermutation) -> Value {
    json!(e.perm().images())
}

fn cmd_graph(n: usize, check: GraphCheck) -> Result<Outcome, Failure> {
    let check_name = match check {
        GraphCheck::Lemma81 => "lemma81",
        GraphCheck::Lemma84 => "lemma84",
        GraphCheck::Remark82 => "remark82",
        GraphCheck::Normalizer => "normalizer",
    };
    let builder = ReportBuilder::new("graph", json!({ "n": n, "check": check_name }));
    let (results, lines) = match check {
        GraphCheck::Lemma81 => {
            require_range(n, 3, 6, check_name)?;
            let search = search_non_induced(n)?;
            let all_induced = search.non_induced.is_empty();
            let results = json!({
                "n": n,
                "preserving": search.preserving,
                "non_induced_count": search.non_induced.len(),
                "non_induced": search.non_induced.iter().map(edge_perm_json).collect::<Vec<_>>(),
                "visited": search.visited,
                "all_induced": all_induced,
            });
            let lines = vec![
                format!("vertices: {n} ({} edges)", ghlab::pair_count(n)),
                format!("adjacency-preserving edge permutations: {}", search.preserving),
                format!("not induced by any vertex permutation:  {}", search.non_induced.len()),
                format!("search nodes visited: {}", search.visited),
                if all_induced {
                    "every adjacency-preserving edge permutation is induced".to_string()
                } else {
                    format!(
                        "{} adjacency-preserving edge permutations are not induced",
                        search.non_induced.len()
                    )
                },
            ];
            (results, lines)
        }
        GraphCheck::Lemma84 => {
            require_range(n, 2, 12, check_name)?;
            let counts = count_edge_pairs(n)?;
            let comparison = match counts.disjoint.cmp(&counts.adjacent) {
                std::cmp::Ordering::Less => "adjacent pairs outnumber disjoint pairs",
                std::cmp::Ordering::Equal => "adjacent and disjoint pairs are equally many",
                std::cmp::Ordering::Greater => "disjoint pairs outnumber adjacent pairs",
            };
            let results = json!({
                "n": n,
                "adjacent": counts.adjacent,
                "disjoint": counts.disjoint,
                "total": counts.total(),
                "comparison": comparison,
            });
            let lines = vec![
                format!("vertices: {n} ({} edges, {} edge pairs)", ghlab::pair_count(n), counts.total()),
                format!("pairs sharing a vertex = {}", counts.adjacent),
                format!("vertex-disjoint pairs  = {}", counts.disjoint),
                comparison.to_string(),
            ];
            (results, lines)
        }
        GraphCheck::Remark82 => {
            if n != 4 {
                return Err(Failure::usage(format!(
                    "remark82 concerns the four-vertex graph; got --n {n}"
                )));
            }
            let alpha = star_to_cycle_perm();
            let star_images: Vec<Value> = (0..4)
                .map(|v| {
                    let edges: Vec<Value> = (0..4)
                        .filter(|&j| j != v)
                        .map(|j| {
                            let image = alpha.apply(ghlab::pair_index(4, v, j));
                            let (a, b) = alpha.endpoints(image);
                            json!([a, b])
                        })
                        .collect();
                    json!({ "vertex": v, "image_edges": edges })
                })
                .collect();
            let results = json!({
                "n": 4,
                "images": alpha.perm().images(),
                "adjacency_preserving": alpha.is_adjacency_preserving(),
                "induced": alpha.inducing_vertex_perm().is_some(),
                "star_images": star_images,
            });
            let lines = vec![
                format!("exceptional edge permutation: {:?}", alpha.perm().images()),
                format!("adjacency-preserving: {}", alpha.is_adjacency_preserving()),
                format!("induced by a vertex permutation: {}", alpha.inducing_vertex_perm().is_some()),
                "each vertex star maps onto a triangle".to_string(),
            ];
            (results, lines)
        }
        GraphCheck::Normalizer => {
            require_range(n, 3, 6, check_name)?;
            let search = search_non_induced(n)?;
            let mut probes = Vec::new();
            let mut all_normalize = true;
            for alpha in &search.non_induced {
                let probe = normalizer_probe(alpha)?;
                all_normalize &= probe.normalizes;
                probes.push(json!({
                    "images": alpha.perm().images(),
                    "in_group": probe.in_group,
                    "normalizes": probe.normalizes,
                    "violating": probe.violating.as_ref().map(perm_json),
                }));
            }
            let results = json!({
                "n": n,
                "outside_count": search.non_induced.len(),
                "all_outside_normalize": all_normalize,
                "probes": probes,
            });
            let lines = vec![
                format!("vertices: {n}"),
                format!(
                    "adjacency-preserving permutations outside the induced group: {}",
                    search.non_induced.len()
                ),
                if search.non_induced.is_empty() {
                    "nothing to probe: the induced group is everything".to_string()
                } else if all_normalize {
                    "every outside element normalizes the induced group".to_string()
                } else {
                    "some outside element fails to normalize the induced group".to_string()
                },
            ];
            (results, lines)
        }
    };
    Ok(Outcome { report: builder.finish(results), lines, code: 0 })
}

fn require_range(n: usize, lo: usize, hi: usize, check: &str) -> Result<(), Failure> {
    if n < lo || n > hi {
        return Err(Failure::usage(format!(
            "{check} requires {lo} <= n <= {hi}, got --n {n}"
        )));
    }
    Ok(())
}

fn cmd_search(
    points: usize,
    trials: u64,
    seed: u64,
    out: Option<&Path>,
) -> Result<Outcome, Failure> {
    if points < 3 {
        return Err(Failure::usage("--points must be at least 3; smaller spaces never gap"));
    }
    let builder = ReportBuilder::new(
        "search",
        json!({
            "points": points,
            "trials": trials,
            "seed": seed,
            "out": out.map(|p| p.display().to_string()),
            "dist_range": [DEFAULT_DIST_RANGE.0, DEFAULT_DIST_RANGE.1],
        }),
    );
    match bijection_gap_search(points, trials, seed, DEFAULT_DIST_RANGE)? {
        Some(witness) => {
            let record = WitnessRecord::from(&witness);
            let mut lines = vec![
                format!("gap found at trial {} ({} points, seed {seed})", record.trial, points),
                format!("exact distance     = {}", record.exact),
                format!("bijection distance = {}", record.bijective),
                format!("gap                = {}", record.gap),
            ];
            if let Some(path) = out {
                save_witness(path, &witness)?;
                lines.push(format!("witness written to {}", path.display()));
            }
            let results = json!({
                "found": true,
                "witness": record,
            });
            Ok(Outcome { report: builder.finish(results), lines, code: 0 })
        }
        None => {
            let results = json!({
                "found": false,
                "trials": trials,
            });
            let lines = vec![format!(
                "no gap above {GAP_THRESHOLD} in {trials} trials ({points} points, seed {seed})"
            )];
            Ok(Outcome { report: builder.finish(results), lines, code: EXIT_EXHAUSTED })
        }
    }
}
