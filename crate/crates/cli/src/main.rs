use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use lagrangia::edge_list::{parse_edge_list, write_edge_list};
use lagrangia::hypergraph::{colex_graph, colex_rank, colex_unrank, complete_graph};
use lagrangia::lagrangian::{certify, lagrangian, Certificate, LagrangianOptions, OptRecord};
use lagrangia::structure::{
    clique_number, compress, count_left_compressed, is_left_compressed, maximum_clique,
    DominancePoset,
};
use lagrangia::theorems::{verify, TheoremId, TheoremReport, Verdict, VerifyOptions, VerifyParams};
use lagrangia::{Edge, Hypergraph};

const SEED_ENV: &str = "LAGRANGIA_SEED";

const EXIT_USAGE: u8 = 3;
const EXIT_IO: u8 = 4;

#[derive(Parser, Debug)]
#[command(
    name = "lagrangia",
    version,
    about = "Lagrangians of uniform hypergraphs, colex graphs, left-compressed families and clique bounds"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// Equality tolerance for Lagrangian comparisons.
    #[arg(long, global = true, default_value_t = 1e-7)]
    tol: f64,
    /// Required gap for strict inequalities.
    #[arg(long, global = true, default_value_t = 1e-6)]
    margin: f64,
    /// Seed for random restarts (LAGRANGIA_SEED overrides it).
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, default_value_t = 4)]
    random_starts: usize,
    /// Iteration cap for each ascent run.
    #[arg(long, global = true, default_value_t = 200_000)]
    max_iters: usize,
    /// Worker threads for verification sweeps (default: logical cores).
    #[arg(long, global = true)]
    parallelism: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    /// Violation tables of `verify` only.
    Csv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compute the Lagrangian of a graph.
    Lagrangian(Source),
    /// Clique number and a maximum clique.
    Clique(Source),
    /// Left-compress a graph.
    Compress(Source),
    /// Colex ranking, unranking and colex graphs.
    Colex {
        #[command(subcommand)]
        op: ColexOp,
    },
    /// List the left-compressed r-graphs on [t] with m edges.
    Enumerate {
        t: usize,
        r: usize,
        m: usize,
        #[arg(long)]
        count_only: bool,
    },
    /// Run a theorem verifier.
    Verify {
        #[arg(value_parser = parse_id)]
        id: TheoremId,
        #[arg(long)]
        t: usize,
        #[arg(long)]
        a: Option<usize>,
        #[arg(long)]
        r: Option<usize>,
        #[arg(long)]
        p: Option<usize>,
        /// Largest C(t, 3) an enumerating verifier may search.
        #[arg(long)]
        max_ground: Option<u64>,
    },
}

#[derive(Args, Debug)]
struct Source {
    /// Edge-list file.
    #[arg(required_unless_present_any = ["colex", "complete"], conflicts_with_all = ["colex", "complete"])]
    file: Option<PathBuf>,
    /// Colex graph C_{r,m}.
    #[arg(long, num_args = 2, value_names = ["R", "M"], conflicts_with = "complete")]
    colex: Option<Vec<u64>>,
    /// Complete graph [t]^(r).
    #[arg(long, num_args = 2, value_names = ["T", "R"])]
    complete: Option<Vec<usize>>,
}

#[derive(Subcommand, Debug)]
enum ColexOp {
    /// Colex rank of a set of vertices.
    Rank {
        #[arg(required = true)]
        vertices: Vec<u32>,
    },
    /// The r-set of colex rank k (0-based).
    Unrank { r: usize, k: u64 },
    /// Edge list of C_{r,m}.
    Generate { r: usize, m: u64 },
}

fn parse_id(s: &str) -> Result<TheoremId, String> {
    s.parse().map_err(|e: lagrangia::Error| e.to_string())
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Io(String),
}

impl From<lagrangia::Error> for Failure {
    fn from(e: lagrangia::Error) -> Self {
        match e {
            lagrangia::Error::Parse { .. } => Failure::Io(e.to_string()),
            other => Failure::Usage(other.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

type Outcome = Result<u8, Failure>;

#[derive(Serialize)]
struct RunInfo {
    tool: &'static str,
    version: &'static str,
    seed: u64,
    tol: f64,
    margin: f64,
    random_starts: usize,
    max_iters: usize,
}

#[derive(Serialize)]
struct LagrangianOut<'a> {
    run: &'a RunInfo,
    r: usize,
    n: usize,
    m: usize,
    result: OptRecord,
    certificate: Certificate,
}

#[derive(Serialize)]
struct CliqueOut<'a> {
    run: &'a RunInfo,
    clique_number: usize,
    maximum_clique: Vec<u32>,
    left_compressed: bool,
}

#[derive(Serialize)]
struct CompressOut<'a> {
    run: &'a RunInfo,
    r: usize,
    n: usize,
    edges: Vec<Vec<u32>>,
    steps: Vec<(Vec<u32>, Vec<u32>)>,
    fixed_point: bool,
}

struct Ctx {
    global: Global,
    seed: u64,
    out: Box<dyn Write>,
}

impl Ctx {
    fn info(&self) -> RunInfo {
        RunInfo {
            tool: lagrangia::theorems::TOOL,
            version: lagrangia::theorems::VERSION,
            seed: self.seed,
            tol: self.global.tol,
            margin: self.global.margin,
            random_starts: self.global.random_starts,
            max_iters: self.global.max_iters,
        }
    }

    fn lagrangian_options(&self) -> LagrangianOptions {
        let mut opts = LagrangianOptions {
            seed: self.seed,
            random_starts: self.global.random_starts,
            ..LagrangianOptions::default()
        };
        opts.ascent.max_iters = self.global.max_iters;
        opts
    }

    fn json(&mut self, value: &impl Serialize) -> Result<(), Failure> {
        serde_json::to_writer_pretty(&mut self.out, value)?;
        writeln!(self.out)?;
        Ok(())
    }

    fn no_csv(&self, command: &str) -> Result<(), Failure> {
        if self.global.format == Format::Csv {
            return Err(Failure::Usage(format!(
                "csv output is only available for verify (not {command})"
            )));
        }
        Ok(())
    }
}

fn load_edge_list(path: &Path) -> Result<Hypergraph, Failure> {
    let text =
        fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
    parse_edge_list(&text).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn load(src: &Source) -> Result<Hypergraph, Failure> {
    if let Some(path) = &src.file {
        return load_edge_list(path);
    }
    if let Some(v) = &src.colex {
        return Ok(colex_graph(v[0] as usize, v[1])?);
    }
    if let Some(v) = &src.complete {
        return Ok(complete_graph(v[0], v[1])?);
    }
    Err(Failure::Usage("no graph given".into()))
}

fn edges_of(g: &Hypergraph) -> Vec<Vec<u32>> {
    g.edges().iter().map(|e| e.to_vec()).collect()
}

fn set_string(e: Edge) -> String {
    let vs: Vec<String> = e.vertices().map(|v| v.to_string()).collect();
    format!("{{{}}}", vs.join(","))
}

fn run_lagrangian(ctx: &mut Ctx, src: &Source) -> Outcome {
    ctx.no_csv("lagrangian")?;
    let g = load(src)?;
    let res = lagrangian(&g, &ctx.lagrangian_options());
    let cert = certify(&g, &res, ctx.global.tol);
    if ctx.global.format == Format::Json {
        let info = ctx.info();
        ctx.json(&LagrangianOut {
            run: &info,
            r: g.r(),
            n: g.n(),
            m: g.edge_count(),
            result: res.record(),
            certificate: cert,
        })?;
        return Ok(0);
    }
    let out = &mut ctx.out;
    writeln!(
        out,
        "graph: r = {}, n = {}, m = {}",
        g.r(),
        g.n(),
        g.edge_count()
    )?;
    writeln!(out, "value: {:.17}", res.value)?;
    writeln!(out, "method: {}", res.method)?;
    writeln!(out, "kkt_residual: {:.3e}", res.kkt_residual)?;
    writeln!(out, "support: {}", set_string(res.support()))?;
    let weights: Vec<String> = res
        .weighting
        .as_slice()
        .iter()
        .map(|w| format!("{w:.12}"))
        .collect();
    writeln!(out, "weights: {}", weights.join(" "))?;
    writeln!(
        out,
        "certificate: {} (kkt {}, pair cover {}, exchange {}{})",
        if cert.passed() { "ok" } else { "not certified" },
        cert.kkt_ok,
        cert.pair_cover_ok,
        cert.exchange_ok,
        match cert.monotone_ok {
            Some(ok) => format!(", monotone {ok}"),
            None => String::new(),
        }
    )?;
    writeln!(out, "seed: {}", ctx.seed)?;
    Ok(0)
}

fn run_clique(ctx: &mut Ctx, src: &Source) -> Outcome {
    ctx.no_csv("clique")?;
    let g = load(src)?;
    let omega = clique_number(&g);
    let best = maximum_clique(&g);
    if ctx.global.format == Format::Json {
        let info = ctx.info();
        ctx.json(&CliqueOut {
            run: &info,
            clique_number: omega,
            maximum_clique: best.to_vec(),
            left_compressed: is_left_compressed(&g),
        })?;
    } else {
        writeln!(ctx.out, "clique_number: {omega}")?;
        writeln!(ctx.out, "maximum_clique: {}", set_string(best))?;
    }
    Ok(0)
}

fn run_compress(ctx: &mut Ctx, src: &Source) -> Outcome {
    ctx.no_csv("compress")?;
    let g = load(src)?;
    let (h, trace) = compress(&g);
    if ctx.global.format == Format::Json {
        let info = ctx.info();
        ctx.json(&CompressOut {
            run: &info,
            r: h.r(),
            n: h.n(),
            edges: edges_of(&h),
            steps: trace
                .steps
                .iter()
                .map(|(a, b)| (a.to_vec(), b.to_vec()))
                .collect(),
            fixed_point: trace.fixed_point,
        })?;
    } else {
        write!(ctx.out, "{}", write_edge_list(&h))?;
        eprintln!("{} shifts", trace.steps.len());
    }
    Ok(0)
}

fn run_colex(ctx: &mut Ctx, op: &ColexOp) -> Outcome {
    ctx.no_csv("colex")?;
    let json = ctx.global.format == Format::Json;
    match op {
        ColexOp::Rank { vertices } => {
            let rank = colex_rank(Edge::new(vertices)?);
            if json {
                ctx.json(&serde_json::json!({ "vertices": vertices, "rank": rank }))?;
            } else {
                writeln!(ctx.out, "{rank}")?;
            }
        }
        ColexOp::Unrank { r, k } => {
            let e = colex_unrank(*r, *k)?;
            if json {
                ctx.json(&serde_json::json!({ "r": r, "rank": k, "vertices": e.to_vec() }))?;
            } else {
                writeln!(ctx.out, "{e}")?;
            }
        }
        ColexOp::Generate { r, m } => {
            let g = colex_graph(*r, *m)?;
            if json {
                ctx.json(&serde_json::json!({ "r": g.r(), "n": g.n(), "edges": edges_of(&g) }))?;
            } else {
                write!(ctx.out, "{}", write_edge_list(&g))?;
            }
        }
    }
    Ok(0)
}

fn run_enumerate(ctx: &mut Ctx, t: usize, r: usize, m: usize, count_only: bool) -> Outcome {
    ctx.no_csv("enumerate")?;
    let json = ctx.global.format == Format::Json;
    if count_only {
        let count = count_left_compressed(t, r, m)?;
        if json {
            ctx.json(&serde_json::json!({ "t": t, "r": r, "m": m, "count": count }))?;
        } else {
            writeln!(ctx.out, "{count}")?;
        }
        return Ok(0);
    }
    let poset = DominancePoset::new(t, r)?;
    let mut first = true;
    if json {
        write!(ctx.out, "[")?;
    }
    for g in poset.ideals(m) {
        if json {
            let sep = if first { "" } else { "," };
            write!(
                ctx.out,
                "{sep}\n  {}",
                serde_json::to_string(&edges_of(&g))?
            )?;
        } else {
            if !first {
                writeln!(ctx.out)?;
            }
            write!(ctx.out, "{}", write_edge_list(&g))?;
        }
        first = false;
    }
    if json {
        writeln!(ctx.out, "{}]", if first { "" } else { "\n" })?;
    }
    Ok(0)
}

fn write_report_text(out: &mut dyn Write, rep: &TheoremReport) -> io::Result<()> {
    let mut header = format!("{} t = {}", rep.theorem_id, rep.params.t);
    for (name, v) in [
        ("r", rep.params.r),
        ("a", rep.params.a),
        ("p", rep.params.p),
    ] {
        if let Some(v) = v {
            header.push_str(&format!(", {name} = {v}"));
        }
    }
    if let Some(range) = &rep.params.range {
        header.push_str(&format!(", m in {}..={}", range.m_low, range.m_high));
    }
    writeln!(out, "{header}")?;
    writeln!(out, "search space: {}", rep.search_space)?;
    writeln!(
        out,
        "{} {}, seed {}, tol {:e}, margin {:e}",
        rep.tool, rep.version, rep.seed, rep.tolerances.tol, rep.tolerances.margin
    )?;
    writeln!(out, "instances checked: {}", rep.instances_checked)?;
    for note in &rep.notes {
        writeln!(out, "note: {note}")?;
    }
    for (label, list) in [
        ("violation", &rep.violations),
        ("indeterminate", &rep.indeterminate),
    ] {
        for inst in list {
            let edges: Vec<String> = inst
                .edges
                .iter()
                .map(|e| e.iter().map(u32::to_string).collect())
                .collect();
            writeln!(
                out,
                "{label}: m = {}, observed {:.17}, target {:.17}{} [{}]",
                inst.m,
                inst.observed,
                inst.target,
                inst.note
                    .as_deref()
                    .map(|n| format!(" ({n})"))
                    .unwrap_or_default(),
                edges.join(" ")
            )?;
        }
    }
    writeln!(out, "verdict: {}", rep.verdict)
}

fn write_report_csv(out: &mut dyn Write, rep: &TheoremReport) -> Result<(), Failure> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "theorem_id",
        "kind",
        "n",
        "m",
        "observed",
        "target",
        "margin",
        "edges",
        "note",
    ])?;
    for (kind, list) in [
        ("violation", &rep.violations),
        ("indeterminate", &rep.indeterminate),
    ] {
        for inst in list {
            let edges: Vec<String> = inst
                .edges
                .iter()
                .map(|e| e.iter().map(u32::to_string).collect())
                .collect();
            w.write_record([
                rep.theorem_id.as_str(),
                kind,
                &inst.n.to_string(),
                &inst.m.to_string(),
                &inst.observed.to_string(),
                &inst.target.to_string(),
                &inst.margin.to_string(),
                &edges.join(" "),
                inst.note.as_deref().unwrap_or(""),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}

fn run_verify(
    ctx: &mut Ctx,
    id: TheoremId,
    params: VerifyParams,
    max_ground: Option<u64>,
) -> Outcome {
    let mut opts = VerifyOptions {
        tol: ctx.global.tol,
        margin: ctx.global.margin,
        lagrangian: ctx.lagrangian_options(),
        ..VerifyOptions::default()
    };
    if let Some(g) = max_ground {
        opts.max_ground = g;
    }
    let rep = verify(id, params, &opts)?;
    match ctx.global.format {
        Format::Json => ctx.json(&rep)?,
        Format::Text => write_report_text(&mut ctx.out, &rep)?,
        Format::Csv => write_report_csv(&mut ctx.out, &rep)?,
    }
    Ok(match rep.verdict {
        Verdict::Pass => 0,
        Verdict::Fail => 1,
        Verdict::Indeterminate | Verdict::Vacuous => 2,
    })
}

fn run(cli: Cli) -> Outcome {
    let g = &cli.global;
    if !(g.tol > 0.0 && g.margin > 0.0) {
        return Err(Failure::Usage("tolerances must be positive".into()));
    }
    let seed = match std::env::var(SEED_ENV) {
        Ok(v) => v.trim().parse().map_err(|_| {
            Failure::Usage(format!("{SEED_ENV} must be an unsigned integer, got {v:?}"))
        })?,
        Err(_) => g.seed,
    };
    if let Some(threads) = g.parallelism {
        if threads == 0 {
            return Err(Failure::Usage("--parallelism must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| Failure::Usage(e.to_string()))?;
    }
    let out: Box<dyn Write> = match &g.output {
        Some(path) => Box::new(BufWriter::new(
            fs::File::create(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    let mut ctx = Ctx {
        global: cli.global,
        seed,
        out,
    };
    let code = match &cli.command {
        Command::Lagrangian(src) => run_lagrangian(&mut ctx, src),
        Command::Clique(src) => run_clique(&mut ctx, src),
        Command::Compress(src) => run_compress(&mut ctx, src),
        Command::Colex { op } => run_colex(&mut ctx, op),
        Command::Enumerate {
            t,
            r,
            m,
            count_only,
        } => run_enumerate(&mut ctx, *t, *r, *m, *count_only),
        Command::Verify {
            id,
            t,
            a,
            r,
            p,
            max_ground,
        } => run_verify(
            &mut ctx,
            *id,
            VerifyParams {
                t: *t,
                a: *a,
                r: *r,
                p: *p,
            },
            *max_ground,
        ),
    }?;
    ctx.out.flush()?;
    Ok(code)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_IO)
        }
    }
}
