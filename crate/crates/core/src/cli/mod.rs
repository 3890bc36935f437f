//! `kstool`: command-line front end emitting JSON certificates.
//!
//! Exit codes: 0 when the claim checked by the command holds, 1 when it is
//! refuted, 2 on malformed input, budget refusals and other errors. The
//! certificate goes to standard output, a one-line summary to standard
//! error.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::channels::{self, Channel, EaStrategy};
use crate::coloring::{self, QuantumColoring};
use crate::error::{Error, Result};
use crate::games;
use crate::graphs::{self, io as graph_io, Graph};
use crate::ks::{self, OperatorSet};
use crate::linalg::TolerancePolicy;
use crate::theta;

pub const THREADS_ENV: &str = "KSTOOL_THREADS";

#[derive(Parser, Debug)]
#[command(name = "kstool", version, about = "Kochen-Specker sets, quantum colourings and zero-error capacity certificates")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct GlobalOpts {
    /// Zero tolerance of the two-band guard.
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub tol: f64,
    /// Guard band width as a multiple of the zero tolerance.
    #[arg(long, global = true, default_value_t = 100.0)]
    pub ambiguity_factor: f64,
    /// Vertex budget for exact independence / chromatic number solvers.
    #[arg(long, global = true)]
    pub max_vertices: Option<usize>,
    /// Target gap of the theta SDP.
    #[arg(long, global = true, default_value_t = theta::DEFAULT_THETA_EPS)]
    pub sdp_eps: f64,
    /// Worker threads (0 = all cores).
    #[arg(long, global = true, env = THREADS_ENV, default_value_t = 0)]
    pub threads: usize,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum ProductKind {
    Cartesian,
    Strong,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum FixtureName {
    Cabello18,
    Peres24,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Classify an operator set (claim: it is KS).
    VerifyKs { set: PathBuf },
    /// Replace each projector by a basis of its range (claim: the input is KS).
    WeakFromProjective {
        set: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Orthogonality graph of the measurement multiset of a set.
    OrthoGraph {
        set: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Hadamard graph, optionally verifying its quantum n-colouring.
    Hadamard {
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Verify the Hadamard colouring (claim: zero violations).
        #[arg(long)]
        verify_coloring: bool,
        /// Edges to sample when the graph is too large to materialise.
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Cartesian or strong product of two graphs.
    Product {
        left: PathBuf,
        right: PathBuf,
        #[arg(long, value_enum, default_value_t = ProductKind::Cartesian)]
        kind: ProductKind,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact independence number.
    Alpha { graph: PathBuf },
    /// Exact chromatic number.
    Chi { graph: PathBuf },
    /// Lovász theta with certified bounds.
    Theta {
        #[arg(long)]
        graph: PathBuf,
    },
    /// Canonical channel whose confusability graph is the input graph.
    BuildChannel {
        graph: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Entanglement-assisted versus classical one-shot capacity
    /// (claim: c0 < number of messages, with a verified strategy).
    CertifySeparation {
        #[arg(long, conflicts_with_all = ["from_coloring", "hadamard"])]
        from_ks: Option<PathBuf>,
        /// Quantum colouring JSON; requires --graph.
        #[arg(long, requires = "graph")]
        from_coloring: Option<PathBuf>,
        #[arg(long)]
        graph: Option<PathBuf>,
        /// Use the Hadamard colouring of Omega_n.
        #[arg(long, conflicts_with = "from_coloring")]
        hadamard: Option<usize>,
        /// Also compute theta of the confusability graph.
        #[arg(long)]
        theta: bool,
    },
    /// Nonlocal game from a KS set (claim: pseudo-telepathy) or the
    /// colouring game of a graph.
    Game {
        #[arg(long, conflicts_with = "coloring")]
        from_ks: Option<PathBuf>,
        #[arg(long, requires = "colors")]
        coloring: Option<PathBuf>,
        #[arg(long)]
        colors: Option<usize>,
        /// Quantum colouring JSON to play the colouring game with.
        #[arg(long, requires = "coloring")]
        quantum: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Verify an entanglement-assisted strategy against a channel.
    SimulateStrategy {
        #[arg(long)]
        channel: PathBuf,
        #[arg(long)]
        strategy: PathBuf,
    },
    /// Write a built-in operator set as JSON.
    ExportFixture {
        #[arg(value_enum)]
        name: FixtureName,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::VerifyKs { .. } => "verify-ks",
            Command::WeakFromProjective { .. } => "weak-from-projective",
            Command::OrthoGraph { .. } => "ortho-graph",
            Command::Hadamard { .. } => "hadamard",
            Command::Product { .. } => "product",
            Command::Alpha { .. } => "alpha",
            Command::Chi { .. } => "chi",
            Command::Theta { .. } => "theta",
            Command::BuildChannel { .. } => "build-channel",
            Command::CertifySeparation { .. } => "certify-separation",
            Command::Game { .. } => "game",
            Command::SimulateStrategy { .. } => "simulate-strategy",
            Command::ExportFixture { .. } => "export-fixture",
        }
    }
}

/// Outcome of a command before it is wrapped into a certificate.
struct Outcome {
    holds: bool,
    summary: String,
    verdicts: Value,
    witnesses: Value,
}

struct Ctx {
    opts: GlobalOpts,
    tol: TolerancePolicy,
    inputs: Vec<(String, Vec<u8>)>,
}

impl Ctx {
    fn read(&mut self, path: &Path) -> Result<String> {
        let bytes = std::fs::read(path)?;
        let text = String::from_utf8(bytes.clone())
            .map_err(|_| Error::Parse(format!("{} is not UTF-8", path.display())))?;
        self.inputs.push((path.display().to_string(), bytes));
        Ok(text)
    }

    fn set(&mut self, path: &Path) -> Result<OperatorSet> {
        let text = self.read(path)?;
        OperatorSet::from_json_str(&text, self.tol)
    }

    fn graph(&mut self, path: &Path) -> Result<Graph> {
        let text = self.read(path)?;
        graph_io::parse_graph(&text)
    }

    fn mis_budget(&self) -> usize {
        self.opts.max_vertices.unwrap_or(graphs::DEFAULT_MIS_BUDGET)
    }

    fn chi_budget(&self) -> usize {
        self.opts.max_vertices.unwrap_or(graphs::DEFAULT_CHROMATIC_BUDGET)
    }

    fn digest(&self) -> String {
        let mut h = Sha256::new();
        for (name, bytes) in &self.inputs {
            h.update((name.len() as u64).to_le_bytes());
            h.update(name.as_bytes());
            h.update((bytes.len() as u64).to_le_bytes());
            h.update(bytes);
        }
        format!("{:x}", h.finalize())
    }
}

fn write_or_embed(out: &Option<PathBuf>, text: &str) -> Result<Value> {
    match out {
        Some(p) => {
            std::fs::write(p, text)?;
            Ok(json!({ "written_to": p.display().to_string() }))
        }
        None => Ok(Value::String(text.to_string())),
    }
}

fn to_value<T: serde::Serialize>(t: &T) -> Result<Value> {
    Ok(serde_json::to_value(t)?)
}

fn exit_code_for(err: &Error) -> i32 {
    let _ = err;
    2
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = write!(stderr, "{e}");
            return code;
        }
    };
    run_cli(cli, stdout, stderr)
}

pub fn run_cli(cli: Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let start = Instant::now();
    let name = cli.command.name();
    let tol = match TolerancePolicy::new(cli.global.tol, cli.global.ambiguity_factor) {
        Ok(t) => t,
        Err(e) => {
            let _ = writeln!(stderr, "kstool {name}: error: {e}");
            return 2;
        }
    };
    let mut ctx = Ctx {
        opts: cli.global.clone(),
        tol,
        inputs: Vec::new(),
    };
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(cli.global.threads).build() {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(stderr, "kstool {name}: error: thread pool: {e}");
            return 2;
        }
    };
    let result = pool.install(|| dispatch(&cli.command, &mut ctx));
    let wall_ms = start.elapsed().as_secs_f64() * 1e3;
    let (code, mut cert, summary) = match result {
        Ok(o) => (
            if o.holds { 0 } else { 1 },
            json!({
                "status": if o.holds { "verified" } else { "refuted" },
                "verdicts": o.verdicts,
                "witnesses": o.witnesses,
            }),
            o.summary,
        ),
        Err(e) => {
            let kind = match e {
                Error::Budget { .. } => "budget_refusal",
                Error::Precondition(_) => "precondition",
                Error::Integrity(_) => "integrity",
                Error::Parse(_) | Error::Json(_) | Error::Io(_) => "input",
                _ => "error",
            };
            (
                exit_code_for(&e),
                json!({ "status": "error", "error": { "kind": kind, "message": e.to_string() } }),
                format!("error: {e}"),
            )
        }
    };
    let obj = cert.as_object_mut().expect("object");
    obj.insert("command".into(), json!(name));
    obj.insert("tool_version".into(), json!(env!("CARGO_PKG_VERSION")));
    obj.insert("inputs_digest".into(), json!(ctx.digest()));
    obj.insert(
        "inputs".into(),
        json!(ctx.inputs.iter().map(|(n, _)| n.clone()).collect::<Vec<_>>()),
    );
    obj.insert("tolerance".into(), json!(tol));
    obj.insert("sdp_eps".into(), json!(ctx.opts.sdp_eps));
    obj.insert("wall_time_ms".into(), json!(wall_ms));
    let _ = writeln!(stdout, "{}", serde_json::to_string_pretty(&cert).expect("serialisable"));
    let _ = writeln!(stderr, "kstool {name}: {summary}");
    code
}

fn dispatch(cmd: &Command, ctx: &mut Ctx) -> Result<Outcome> {
    match cmd {
        Command::VerifyKs { set } => verify_ks(ctx, set),
        Command::WeakFromProjective { set, out } => weak_from_projective(ctx, set, out),
        Command::OrthoGraph { set, out } => ortho_graph(ctx, set, out),
        Command::Hadamard {
            n,
            out,
            verify_coloring,
            samples,
            seed,
        } => hadamard(ctx, *n, out, *verify_coloring, *samples, *seed),
        Command::Product { left, right, kind, out } => product(ctx, left, right, *kind, out),
        Command::Alpha { graph } => alpha(ctx, graph),
        Command::Chi { graph } => chi(ctx, graph),
        Command::Theta { graph } => theta_cmd(ctx, graph),
        Command::BuildChannel { graph, out } => build_channel(ctx, graph, out),
        Command::CertifySeparation {
            from_ks,
            from_coloring,
            graph,
            hadamard,
            theta,
        } => certify_separation(ctx, from_ks, from_coloring, graph, *hadamard, *theta),
        Command::Game {
            from_ks,
            coloring,
            colors,
            quantum,
            out,
        } => game(ctx, from_ks, coloring, *colors, quantum, out),
        Command::SimulateStrategy { channel, strategy } => simulate_strategy(ctx, channel, strategy),
        Command::ExportFixture { name, out } => export_fixture(*name, out),
    }
}

fn verify_ks(ctx: &mut Ctx, path: &Path) -> Result<Outcome> {
    let set = ctx.set(path)?;
    let verdict = ks::classify(&set)?;
    let holds = verdict.classification.is_ks();
    let mut verdicts = json!({
        "classification": verdict.classification,
        "elements": set.len(),
        "dim": set.dim(),
        "kind": set.kind(),
        "measurements": verdict.cover.len(),
        "parity_obstruction": ks::parity_obstruction(&verdict.cover, set.len()),
    });
    if let Some(m) = verdict.marking() {
        let check = ks::validate_marking(&set, &verdict.cover, ks::forbid_for(set.kind()), m)?;
        verdicts["marking_revalidated"] = json!(check.is_ok());
    }
    Ok(Outcome {
        holds,
        summary: format!("{:?} ({} elements, {} measurements)", verdict.classification, set.len(), verdict.cover.len()),
        verdicts,
        witnesses: json!({ "certificate": verdict.certificate, "cover": verdict.cover }),
    })
}

fn weak_from_projective(ctx: &mut Ctx, path: &Path, out: &Option<PathBuf>) -> Result<Outcome> {
    let set = ctx.set(path)?;
    let verdict = ks::classify(&set)?;
    if !verdict.classification.is_ks() {
        return Ok(Outcome {
            holds: false,
            summary: "input is not KS; no weak set produced".into(),
            verdicts: json!({ "input_classification": verdict.classification }),
            witnesses: json!({ "certificate": verdict.certificate }),
        });
    }
    let weak = ks::weak_from_projective_unchecked(&set)?;
    let weak_verdict = ks::classify(&weak)?;
    Ok(Outcome {
        holds: weak_verdict.classification.is_ks(),
        summary: format!("{} vectors, {:?}", weak.len(), weak_verdict.classification),
        verdicts: json!({
            "input_classification": verdict.classification,
            "output_classification": weak_verdict.classification,
            "vectors": weak.len(),
            "measurements": weak_verdict.cover.len(),
        }),
        witnesses: json!({ "set": write_or_embed(out, &weak.to_json()?)?, "certificate": weak_verdict.certificate }),
    })
}

fn ortho_graph(ctx: &mut Ctx, path: &Path, out: &Option<PathBuf>) -> Result<Outcome> {
    let set = ctx.set(path)?;
    let cover = ks::enumerate_measurements(&set)?;
    let g = graphs::orthogonality_graph(&set, &cover)?;
    Ok(Outcome {
        holds: true,
        summary: format!("{} vertices, {} edges", g.n_vertices(), g.n_edges()),
        verdicts: json!({ "vertices": g.n_vertices(), "edges": g.n_edges(), "cliques": cover.len() }),
        witnesses: json!({ "graph": write_or_embed(out, &graph_io::write_graph(&g))?, "labels": g.labels() }),
    })
}

fn hadamard(
    ctx: &mut Ctx,
    n: usize,
    out: &Option<PathBuf>,
    verify: bool,
    samples: usize,
    seed: u64,
) -> Result<Outcome> {
    let mut verdicts = json!({ "n": n, "vertices": 1u64 << n.min(63) });
    let mut witnesses = json!({});
    let materialise = n <= graphs::HADAMARD_MATERIALIZE_MAX;
    let mut holds = true;
    let mut summary = format!("Omega_{n}");
    if materialise {
        let g = graphs::hadamard_graph(n)?;
        verdicts["edges"] = json!(g.n_edges());
        if out.is_some() {
            witnesses["graph"] = write_or_embed(out, &graph_io::write_graph(&g))?;
        }
        if verify {
            let report = coloring::verify_normal_form(&g, &coloring::hadamard_coloring(n)?, &ctx.tol)?;
            holds = report.is_valid();
            summary = format!("Omega_{n}: {} violations over all {} edges", report.violations.len(), report.edges_checked);
            verdicts["coloring"] = to_value(&report)?;
        }
    } else {
        if out.is_some() {
            return Err(Error::budget("Hadamard graph dimension (materialized)", graphs::HADAMARD_MATERIALIZE_MAX, n));
        }
        let report = coloring::verify_hadamard_sampled(n, if verify { samples } else { 0 }, seed)?;
        holds = report.is_valid();
        summary = format!("Omega_{n}: {} violations over {} sampled edges", report.violations.len(), report.edges_checked);
        verdicts["coloring"] = to_value(&report)?;
    }
    Ok(Outcome {
        holds,
        summary,
        verdicts,
        witnesses,
    })
}

fn product(ctx: &mut Ctx, left: &Path, right: &Path, kind: ProductKind, out: &Option<PathBuf>) -> Result<Outcome> {
    let g = ctx.graph(left)?;
    let h = ctx.graph(right)?;
    let p = match kind {
        ProductKind::Cartesian => graphs::cartesian_product(&g, &h),
        ProductKind::Strong => graphs::strong_product(&g, &h),
    };
    Ok(Outcome {
        holds: true,
        summary: format!("{} vertices, {} edges", p.n_vertices(), p.n_edges()),
        verdicts: json!({ "vertices": p.n_vertices(), "edges": p.n_edges() }),
        witnesses: json!({ "graph": write_or_embed(out, &graph_io::write_graph(&p))? }),
    })
}

fn alpha(ctx: &mut Ctx, path: &Path) -> Result<Outcome> {
    let g = ctx.graph(path)?;
    let r = graphs::independence_number_with_budget(&g, ctx.mis_budget())?;
    Ok(Outcome {
        holds: graphs::is_independent_set(&g, &r.witness),
        summary: format!("alpha = {}", r.alpha),
        verdicts: json!({ "alpha": r.alpha, "nodes": r.nodes }),
        witnesses: json!({ "independent_set": r.witness }),
    })
}

fn chi(ctx: &mut Ctx, path: &Path) -> Result<Outcome> {
    let g = ctx.graph(path)?;
    let r = graphs::chromatic_number_with_budget(&g, ctx.chi_budget())?;
    Ok(Outcome {
        holds: graphs::is_proper_coloring(&g, &r.coloring, r.chi),
        summary: format!("chi = {}", r.chi),
        verdicts: json!({ "chi": r.chi, "nodes": r.nodes }),
        witnesses: json!({ "coloring": r.coloring }),
    })
}

fn theta_cmd(ctx: &mut Ctx, path: &Path) -> Result<Outcome> {
    let g = ctx.graph(path)?;
    let t = theta::lovasz_theta(&g, ctx.opts.sdp_eps)?;
    Ok(Outcome {
        holds: true,
        summary: format!("theta in [{:.8}, {:.8}] (gap {:.2e})", t.value, t.dual_bound, t.gap),
        verdicts: json!({
            "value": t.value,
            "dual_bound": t.dual_bound,
            "gap": t.gap,
            "iterations": t.iterations,
            "formulation": t.formulation,
            "eps": ctx.opts.sdp_eps,
        }),
        witnesses: json!({ "primal_matrix": t.primal_matrix, "dual_matrix": t.dual_matrix }),
    })
}

fn build_channel(ctx: &mut Ctx, path: &Path, out: &Option<PathBuf>) -> Result<Outcome> {
    let g = ctx.graph(path)?;
    let ch = channels::canonical_channel(&g);
    let round_trip = channels::confusability_graph(&ch).same_edges(&g);
    Ok(Outcome {
        holds: round_trip,
        summary: format!("{} inputs, {} outputs", ch.inputs().len(), ch.outputs().len()),
        verdicts: json!({ "inputs": ch.inputs().len(), "outputs": ch.outputs().len(), "round_trip": round_trip }),
        witnesses: json!({ "channel": write_or_embed(out, &ch.to_json()?)? }),
    })
}

fn certify_separation(
    ctx: &mut Ctx,
    from_ks: &Option<PathBuf>,
    from_coloring: &Option<PathBuf>,
    graph: &Option<PathBuf>,
    hadamard: Option<usize>,
    with_theta: bool,
) -> Result<Outcome> {
    let tol = ctx.tol;
    let (construction, source) = if let Some(p) = from_ks {
        let set = ctx.set(p)?;
        (channels::strategy_from_ks(&set)?, json!({ "from_ks": set.len() }))
    } else if let Some(n) = hadamard {
        if n > graphs::HADAMARD_MATERIALIZE_MAX {
            return Err(Error::budget("Hadamard graph dimension (materialized)", graphs::HADAMARD_MATERIALIZE_MAX, n));
        }
        let g = graphs::hadamard_graph(n)?;
        let qc = coloring::hadamard_coloring(n)?;
        (channels::strategy_from_coloring(&g, &qc, &tol)?, json!({ "hadamard": n }))
    } else if let (Some(cp), Some(gp)) = (from_coloring, graph) {
        let g = ctx.graph(gp)?;
        let qc = QuantumColoring::from_json_str(&ctx.read(cp)?)?;
        (
            channels::strategy_from_coloring(&g, &qc, &tol)?,
            json!({ "from_coloring": { "vertices": g.n_vertices(), "colors": qc.n_colors() } }),
        )
    } else {
        return Err(Error::Invalid("give --from-ks, --hadamard, or --from-coloring with --graph".into()));
    };
    let report = channels::verify_ea_strategy(&construction.channel, &construction.strategy, &tol)?;
    let alpha = channels::c0_with_budget(&construction.channel, ctx.mis_budget())?;
    let q = construction.strategy.n_messages();
    let separated = alpha.alpha < q;
    let mut verdicts = json!({
        "source": source,
        "vertices": construction.graph.n_vertices(),
        "edges": construction.graph.n_edges(),
        "c0": alpha.alpha,
        "k": q,
        "strategy_valid": report.is_valid(),
        "c0_star_lower_bound": if report.is_valid() { q } else { 0 },
        "separated": separated && report.is_valid(),
    });
    if with_theta {
        let t = theta::lovasz_theta(&construction.graph, ctx.opts.sdp_eps)?;
        verdicts["theta"] = json!({ "value": t.value, "dual_bound": t.dual_bound, "gap": t.gap, "eps": ctx.opts.sdp_eps });
    }
    Ok(Outcome {
        holds: separated && report.is_valid(),
        summary: format!("c0 = {} vs k = {q}; strategy valid: {}", alpha.alpha, report.is_valid()),
        verdicts,
        witnesses: json!({ "independent_set": alpha.witness, "strategy_report": report }),
    })
}

fn game(
    ctx: &mut Ctx,
    from_ks: &Option<PathBuf>,
    coloring_graph: &Option<PathBuf>,
    colors: Option<usize>,
    quantum: &Option<PathBuf>,
    out: &Option<PathBuf>,
) -> Result<Outcome> {
    let tol = ctx.tol;
    if let Some(p) = from_ks {
        let set = ctx.set(p)?;
        let (g, qs, _) = games::game_from_ks(&set)?;
        let r = games::is_pseudo_telepathy(&g, &qs, &tol)?;
        return Ok(Outcome {
            holds: r.is_pseudo_telepathy,
            summary: format!(
                "pseudo-telepathy: {} (classical value {})",
                r.is_pseudo_telepathy,
                r.classical.as_ref().map_or("not enumerated".to_string(), |c| c.value.to_string())
            ),
            verdicts: json!({
                "is_pseudo_telepathy": r.is_pseudo_telepathy,
                "quantum_never_loses": r.quantum.never_loses(),
                "classical_value": r.classical.as_ref().map(|c| c.value),
                "perfect_classical_exists": r.perfect_classical_exists,
            }),
            witnesses: json!({ "game": write_or_embed(out, &g.to_json()?)?, "report": r }),
        });
    }
    let (Some(gp), Some(c)) = (coloring_graph, colors) else {
        return Err(Error::Invalid("give --from-ks or --coloring with --colors".into()));
    };
    let g = ctx.graph(gp)?;
    let game = games::coloring_game(&g, c)?;
    let cv = games::classical_value(&game)?;
    let mut verdicts = json!({ "classical_value": cv.value, "colors": c });
    let mut holds = true;
    if let Some(qp) = quantum {
        let qc = QuantumColoring::from_json_str(&ctx.read(qp)?)?;
        let rep = games::quantum_loses_probability_zero(&game, &games::coloring_strategy(&qc), &tol)?;
        holds = rep.never_loses();
        verdicts["quantum_never_loses"] = json!(holds);
        verdicts["quantum_report"] = to_value(&rep)?;
    }
    Ok(Outcome {
        holds,
        summary: format!("colouring game with {c} colours: classical value {}", cv.value),
        verdicts,
        witnesses: json!({ "game": write_or_embed(out, &game.to_json()?)?, "classical": cv }),
    })
}

fn simulate_strategy(ctx: &mut Ctx, channel: &Path, strategy: &Path) -> Result<Outcome> {
    let ch = Channel::from_json_str(&ctx.read(channel)?)?;
    let s = EaStrategy::from_json_str(&ctx.read(strategy)?)?;
    let report = channels::verify_ea_strategy(&ch, &s, &ctx.tol)?;
    Ok(Outcome {
        holds: report.is_valid(),
        summary: format!("{} messages, valid: {}", s.n_messages(), report.is_valid()),
        verdicts: json!({ "valid": report.is_valid(), "messages": s.n_messages() }),
        witnesses: json!({ "report": report }),
    })
}

fn export_fixture(name: FixtureName, out: &Option<PathBuf>) -> Result<Outcome> {
    let set = match name {
        FixtureName::Cabello18 => ks::fixture_cabello18(),
        FixtureName::Peres24 => ks::fixture_peres24(),
    };
    Ok(Outcome {
        holds: true,
        summary: format!("{} elements", set.len()),
        verdicts: json!({ "elements": set.len(), "dim": set.dim() }),
        witnesses: json!({ "set": write_or_embed(out, &set.to_json()?)? }),
    })
}
