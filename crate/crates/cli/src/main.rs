//! `coprime-density`: densities of integer tuples under pairwise-
//! coprimality constraints, with exact local factors, rigorous error
//! bounds, and empirical verification.

use std::path::Path;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use coprime_density::density::{
    build_iso_table, density_A, density_at_least_r, density_exact_r, density_pairwise_coprime,
    density_pairwise_noncoprime, DensityReport,
};
use coprime_density::empirical::{
    convergence_diagnostic, count_delta_exact, monte_carlo, PairMode, Target,
};
use coprime_density::graph::{named_graph, parse_graph, CoprimalityGraph, VertexSet};
use coprime_density::local_factor::{
    factor_by_edge_subsets, factor_by_independent_sets, factor_by_vertex_cover,
};
use coprime_density::report::decimal20;

#[derive(Parser)]
#[command(name = "coprime-density", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Evaluate Euler products over primes up to this bound.
    #[arg(
        long,
        global = true,
        default_value_t = 10_000_000,
        env = "COPRIME_DENSITY_PRIME_LIMIT"
    )]
    prime_limit: u64,

    #[arg(long, global = true, value_enum, default_value_t = Format::Human)]
    format: Format,

    /// Monte Carlo seed.
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,

    /// Worker thread cap; defaults to all cores.
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Human,
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum TupleMode {
    /// Exactly r coprime pairs.
    Exact,
    /// At least r coprime pairs.
    Atleast,
    /// No coprime pair at all (C_k).
    Noncoprime,
    /// Every pair coprime (A_k).
    Coprime,
}

#[derive(Subcommand)]
enum Command {
    /// Density A_G of tuples satisfying a constraint graph.
    Density {
        /// Graph file path, or a built-in name (c4, path3, example2, k4, empty3, ...).
        #[arg(long)]
        graph: String,
    },
    /// Densities C_{k,r} / C'_{k,r} / C_k / A_k by coprime-pair count.
    Tuples {
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 0)]
        r: usize,
        #[arg(long, value_enum)]
        mode: TupleMode,
    },
    /// Local-factor polynomials of a graph from all three formulas.
    LocalFactor {
        #[arg(long)]
        graph: String,
        /// Vertex cover for the primed-sum formula: "auto" (lexicographically
        /// least minimum cover), "all", or a comma-separated vertex list.
        #[arg(long, default_value = "auto")]
        cover: String,
    },
    /// Check a computed density against exact counting or Monte Carlo.
    Verify(VerifyArgs),
    /// Isomorphism classes of constraint graphs on k vertices.
    Classes {
        #[arg(long)]
        k: usize,
    },
}

#[derive(Args)]
struct VerifyArgs {
    /// Graph target (file path or built-in name).
    #[arg(long, conflicts_with = "k")]
    graph: Option<String>,
    /// Pair-count target: number of vertices.
    #[arg(long, requires = "r")]
    k: Option<usize>,
    /// Pair-count target: number of coprime pairs.
    #[arg(long)]
    r: Option<usize>,
    /// Pair-count target mode.
    #[arg(long, value_enum, default_value_t = PairTargetMode::Exact)]
    mode: PairTargetMode,
    /// Monte Carlo estimate over [1,X]^k.
    #[arg(long, conflicts_with = "exact")]
    mc: bool,
    /// Exact count over [1,x]^k.
    #[arg(long)]
    exact: bool,
    #[arg(long = "X", default_value_t = 1_000_000)]
    x_big: u64,
    #[arg(long, default_value_t = 1_000_000)]
    samples: u64,
    /// Box bound for --exact.
    #[arg(long)]
    x: Option<u64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum PairTargetMode {
    Exact,
    Atleast,
}

fn load_graph(spec: &str) -> Result<CoprimalityGraph, String> {
    if Path::new(spec).exists() {
        let text = std::fs::read_to_string(spec).map_err(|e| format!("{spec}: {e}"))?;
        return parse_graph(&text).map_err(|e| format!("{spec}: {e}"));
    }
    named_graph(spec).ok_or_else(|| format!("{spec}: not a file and not a built-in graph name"))
}

fn poly_string(coeffs: &[i64]) -> String {
    let inner: Vec<String> = coeffs.iter().map(|c| c.to_string()).collect();
    format!("[{}]", inner.join(", "))
}

fn print_density(report: &DensityReport, format: Format) {
    match format {
        Format::Json => println!("{}", report.to_json()),
        Format::Csv => {
            println!("label,k,r,value,error_bound,prime_limit,num_classes");
            println!(
                "{},{},{},{},{},{},{}",
                report.label.as_str(),
                report.k,
                report.r.map_or(String::new(), |r| r.to_string()),
                decimal20(report.value),
                decimal20(report.error_bound),
                report.prime_limit,
                report.num_classes
            );
        }
        Format::Human => {
            let r = report.r.map_or(String::new(), |r| format!(" (r = {r})"));
            println!("{} for k = {}{}", report.label.as_str(), report.k, r);
            println!("  value       {}", decimal20(report.value));
            println!("  error bound {}", decimal20(report.error_bound));
            println!(
                "  primes up to {} across {} factor classes",
                report.prime_limit, report.num_classes
            );
        }
    }
}

fn run(cli: &Cli) -> Result<bool, String> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err("--threads must be at least 1".into());
        }
        coprime_density::configure_threads(n);
    }
    let p = cli.prime_limit;
    if p < 100 {
        return Err("--prime-limit must be at least 100".into());
    }
    match &cli.command {
        Command::Density { graph } => {
            let g = load_graph(graph)?;
            let report = density_A(&g, p).map_err(|e| e.to_string())?;
            let factor =
                factor_by_independent_sets(&g, g.all_vertices()).map_err(|e| e.to_string())?;
            match cli.format {
                Format::Json => println!(
                    "{}",
                    json!({"report": report.to_json(), "polynomial": factor.to_json()})
                ),
                _ => {
                    print_density(&report, cli.format);
                    if cli.format == Format::Human {
                        println!("  local factor {}", poly_string(factor.coeffs()));
                    }
                }
            }
            Ok(true)
        }
        Command::Tuples { k, r, mode } => {
            let report = match mode {
                TupleMode::Exact => density_exact_r(*k, *r, p),
                TupleMode::Atleast => density_at_least_r(*k, *r, p),
                TupleMode::Noncoprime => density_pairwise_noncoprime(*k, p),
                TupleMode::Coprime => density_pairwise_coprime(*k, p),
            }
            .map_err(|e| e.to_string())?;
            print_density(&report, cli.format);
            Ok(true)
        }
        Command::LocalFactor { graph, cover } => cmd_local_factor(cli, graph, cover),
        Command::Verify(args) => cmd_verify(cli, args),
        Command::Classes { k } => cmd_classes(cli, *k),
    }
}

fn parse_cover(g: &CoprimalityGraph, spec: &str) -> Result<VertexSet, String> {
    let cover = match spec {
        "auto" => g.min_vertex_cover(),
        "all" => g.all_vertices(),
        list => {
            let vs: Result<Vec<usize>, _> = list.split(',').map(|t| t.trim().parse()).collect();
            let vs = vs.map_err(|e| format!("bad cover list {list:?}: {e}"))?;
            if vs.iter().any(|&v| v < 1 || v > g.k()) {
                return Err(format!(
                    "cover list {list:?} has vertices outside 1..={}",
                    g.k()
                ));
            }
            VertexSet::from_vertices(vs)
        }
    };
    if !g.is_vertex_cover(cover) {
        return Err(format!(
            "{:?} is not a vertex cover of the graph",
            cover.to_vec()
        ));
    }
    Ok(cover)
}

fn cmd_local_factor(cli: &Cli, graph: &str, cover: &str) -> Result<bool, String> {
    let g = load_graph(graph)?;
    let cover = parse_cover(&g, cover)?;
    let by_indep = factor_by_independent_sets(&g, g.all_vertices()).map_err(|e| e.to_string())?;
    let by_edges = factor_by_edge_subsets(&g).map_err(|e| e.to_string())?;
    let by_cover = factor_by_vertex_cover(&g, cover).map_err(|e| e.to_string())?;
    let agree = by_indep.coeffs() == by_edges.collapse().coeffs()
        && by_indep.coeffs() == by_cover.collapse().coeffs();
    match cli.format {
        Format::Json => println!(
            "{}",
            json!({
                "k": g.k(),
                "cover": cover.to_vec(),
                "univariate": by_indep.to_json(),
                "multivariate_edge_subsets": by_edges.to_json(),
                "multivariate_vertex_cover": by_cover.to_json(),
                "formulas_agree": agree,
            })
        ),
        Format::Csv => {
            println!("formula,polynomial");
            println!("independent_sets,\"{}\"", poly_string(by_indep.coeffs()));
            println!(
                "edge_subsets,\"{}\"",
                poly_string(by_edges.collapse().coeffs())
            );
            println!(
                "vertex_cover,\"{}\"",
                poly_string(by_cover.collapse().coeffs())
            );
            println!("agree,{agree}");
        }
        Format::Human => {
            println!("k = {}, cover = {:?}", g.k(), cover.to_vec());
            println!(
                "univariate (independent sets)  {}",
                poly_string(by_indep.coeffs())
            );
            println!(
                "univariate (edge subsets)      {}",
                poly_string(by_edges.collapse().coeffs())
            );
            println!(
                "univariate (vertex cover)      {}",
                poly_string(by_cover.collapse().coeffs())
            );
            println!("multivariate (vertex cover):");
            for (s, c) in by_cover.terms() {
                println!("  {:+} on {:?}", c, s.to_vec());
            }
            println!("formulas agree: {agree}");
        }
    }
    if !agree {
        return Err("local-factor formulas disagree".into());
    }
    Ok(true)
}

fn verify_target(args: &VerifyArgs) -> Result<(Target, DensityReportSource), String> {
    if let Some(spec) = &args.graph {
        let g = load_graph(spec)?;
        return Ok((Target::Graph(g.clone()), DensityReportSource::Graph(g)));
    }
    let k = args.k.ok_or("verify needs either --graph or --k/--r")?;
    let r = args.r.ok_or("verify needs --r together with --k")?;
    let mode = match args.mode {
        PairTargetMode::Exact => PairMode::ExactR,
        PairTargetMode::Atleast => PairMode::AtLeastR,
    };
    Ok((
        Target::Pairs { k, r, mode },
        DensityReportSource::Pairs { k, r, mode },
    ))
}

enum DensityReportSource {
    Graph(CoprimalityGraph),
    Pairs { k: usize, r: usize, mode: PairMode },
}

impl DensityReportSource {
    fn density(&self, prime_limit: u64) -> Result<DensityReport, String> {
        match self {
            DensityReportSource::Graph(g) => density_A(g, prime_limit),
            DensityReportSource::Pairs { k, r, mode } => match mode {
                PairMode::ExactR => density_exact_r(*k, *r, prime_limit),
                PairMode::AtLeastR => density_at_least_r(*k, *r, prime_limit),
            },
        }
        .map_err(|e| e.to_string())
    }
}

fn cmd_verify(cli: &Cli, args: &VerifyArgs) -> Result<bool, String> {
    let (target, source) = verify_target(args)?;
    let density = source.density(cli.prime_limit)?;
    if args.mc || !args.exact {
        let mc =
            monte_carlo(&target, args.x_big, args.samples, cli.seed).map_err(|e| e.to_string())?;
        let ci = mc.ci_halfwidth.unwrap_or(0.0);
        let gap = (mc.estimate - density.value).abs();
        let brackets = gap <= ci;
        match cli.format {
            Format::Json => println!(
                "{}",
                json!({
                    "count": mc.to_json(),
                    "density": density.to_json(),
                    "brackets": brackets,
                })
            ),
            _ => {
                println!(
                    "estimate {} from {} samples in [1,{}]^k",
                    decimal20(mc.estimate),
                    args.samples,
                    args.x_big
                );
                println!("ci (4 se) {}", decimal20(ci));
                println!(
                    "density  {} +- {}",
                    decimal20(density.value),
                    decimal20(density.error_bound)
                );
                println!("brackets: {brackets}");
            }
        }
        Ok(brackets)
    } else {
        let x = args.x.ok_or("--exact needs --x")?;
        let count = match &source {
            DensityReportSource::Graph(g) => count_delta_exact(g, x),
            DensityReportSource::Pairs { k, r, mode } => {
                coprime_density::empirical::count_beta_exact(*k, *r, *mode, x)
            }
        }
        .map_err(|e| e.to_string())?;
        let remainder = match &source {
            DensityReportSource::Graph(g) => convergence_diagnostic(g, density.value, &[x])
                .map_err(|e| e.to_string())?
                .pop()
                .map(|row| row.normalized_remainder),
            DensityReportSource::Pairs { .. } => None,
        };
        match cli.format {
            Format::Json => println!(
                "{}",
                json!({
                    "count": count.to_json(),
                    "density": density.to_json(),
                    "normalized_remainder": remainder.map(decimal20),
                })
            ),
            _ => {
                println!(
                    "count {} of {}^k tuples, estimate {}",
                    count.count,
                    x,
                    decimal20(count.estimate)
                );
                println!(
                    "density {} +- {}",
                    decimal20(density.value),
                    decimal20(density.error_bound)
                );
                if let Some(rem) = remainder {
                    println!("normalized remainder {}", decimal20(rem));
                }
            }
        }
        Ok(true)
    }
}

fn cmd_classes(cli: &Cli, k: usize) -> Result<bool, String> {
    let table = build_iso_table(k).map_err(|e| e.to_string())?;
    match cli.format {
        Format::Json => {
            let rows: Vec<_> = table
                .classes
                .iter()
                .map(|c| {
                    json!({
                        "edges": c.representative.edges().iter()
                            .map(|&(i, j)| vec![i, j]).collect::<Vec<_>>(),
                        "edge_count": c.edge_count,
                        "multiplicity": c.multiplicity,
                        "polynomial": c.factor.to_json(),
                    })
                })
                .collect();
            println!("{}", json!({"k": k, "classes": rows}));
        }
        Format::Csv => {
            println!("edge_count,multiplicity,edges,polynomial");
            for c in &table.classes {
                let edges: Vec<String> = c
                    .representative
                    .edges()
                    .iter()
                    .map(|&(i, j)| format!("{i}-{j}"))
                    .collect();
                println!(
                    "{},{},\"{}\",\"{}\"",
                    c.edge_count,
                    c.multiplicity,
                    edges.join(" "),
                    poly_string(c.factor.coeffs())
                );
            }
        }
        Format::Human => {
            println!(
                "{} isomorphism classes on {} vertices:",
                table.classes.len(),
                k
            );
            for c in &table.classes {
                println!(
                    "  {} edges x{:<4} {:?} {}",
                    c.edge_count,
                    c.multiplicity,
                    c.representative.edges(),
                    poly_string(c.factor.coeffs())
                );
            }
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::FAILURE
        }
    }
}
