//! `spexlab`: command-line drivers over the core library — graph inspection,
//! curve/walk/evolving-set experiments, gap reports, hypercube reports, and
//! the named check registry.
//!
//! Exit codes: 0 success, 1 failed check, 2 usage error, 3 capacity guard.

use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use spexlab_core::battery::standard_battery;
use spexlab_core::curve::{curve_of, mixing_envelope};
use spexlab_core::esp::{esp_run, Termination};
use spexlab_core::gaps::{
    comb_gap, comb_gap_delta, comb_gap_fractional, graph_certified_pair, psi_graph,
    GapCertificate, GapMethod, GapWitness, DEFAULT_ITER_CAP, DEFAULT_RESTARTS,
};
use spexlab_core::graph::{
    expansion, parse_graph, small_set_expansion, VertexSet, WeightedGraph, MAX_BRUTE_N,
};
use spexlab_core::hypercube::{
    ball_step, coordinate_cut_expansion, counterexample_report, weight_chain, HypercubeModel,
};
use spexlab_core::verify::run_verify;
use spexlab_core::walks::{sweep_cut, walk_step, MassVector};
use spexlab_core::{Error, Result};

#[derive(Parser)]
#[command(
    name = "spexlab",
    version,
    about = "Experiment drivers for unit-regular graph walks, evolving sets, and hypercube cuts"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate a built-in graph or inspect a graph file
    Graph(GraphCmd),
    /// Cumulative mass curves of a walk, with the per-step envelope
    Curve(CurveCmd),
    /// Random walk from a vertex with a sweep cut after every step
    Walk(WalkCmd),
    /// Evolving-set trajectory from a vertex
    Esp(EspCmd),
    /// Gap quantities with witnesses
    Gaps(GapsCmd),
    /// Noisy hypercube model reports
    Hypercube(HypercubeCmd),
    /// Run every named check over the built-in battery
    Verify(VerifyCmd),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

fn main() {
    let cli = Cli::parse();
    let code = match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Capacity(_) => 3,
                _ => 2,
            }
        }
    };
    std::process::exit(code);
}

fn dispatch(cli: Cli) -> Result<i32> {
    match cli.cmd {
        Cmd::Graph(c) => run_graph(c),
        Cmd::Curve(c) => run_curve(c),
        Cmd::Walk(c) => run_walk(c),
        Cmd::Esp(c) => run_esp(c),
        Cmd::Gaps(c) => run_gaps(c),
        Cmd::Hypercube(c) => run_hypercube(c),
        Cmd::Verify(c) => run_verify_cmd(c),
    }
}

fn read_graph(path: &PathBuf) -> Result<WeightedGraph> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::invalid(format!("cannot read {}: {e}", path.display())))?;
    parse_graph(&text)
}

fn emit(out: &Option<PathBuf>, payload: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, payload)
            .map_err(|e| Error::invalid(format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{payload}");
            Ok(())
        }
    }
}

fn json_payload<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    s
}

/// Expansion when defined (nonempty set of at most half the volume).
fn expansion_opt(g: &WeightedGraph, s: &VertexSet) -> Option<f64> {
    if s.is_empty() || s.volume() > g.volume() / 2.0 + 1e-9 {
        None
    } else {
        expansion(g, s).ok()
    }
}

// ---------------------------------------------------------------------------
// graph

#[derive(Args)]
struct GraphCmd {
    /// Built-in graph to generate (a battery name such as cycle5 or rand8)
    name: Option<String>,
    /// Graph file to inspect instead
    #[arg(long)]
    graph: Option<PathBuf>,
    /// Seed for the random battery entries
    #[arg(long)]
    seed: Option<u64>,
    /// Write the output here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Serialize)]
struct GraphReport {
    source: String,
    n: usize,
    edge_count: usize,
    volume: f64,
    unit_regular: bool,
    lazy: bool,
    connected: bool,
    bipartite: bool,
}

fn graph_report(source: String, g: &WeightedGraph) -> GraphReport {
    GraphReport {
        source,
        n: g.n(),
        edge_count: g.edge_count(),
        volume: g.volume(),
        unit_regular: g.is_unit_regular(),
        lazy: g.is_lazy(),
        connected: g.is_connected(),
        bipartite: g.is_bipartite(),
    }
}

fn run_graph(c: GraphCmd) -> Result<i32> {
    match (&c.name, &c.graph) {
        (Some(_), Some(_)) => Err(Error::invalid(
            "pass either a battery name or --graph, not both",
        )),
        (None, None) => Err(Error::invalid(
            "pass a battery name to generate or --graph PATH to inspect",
        )),
        (None, Some(path)) => {
            let g = read_graph(path)?;
            emit(&c.out, &json_payload(&graph_report(path.display().to_string(), &g)))?;
            Ok(0)
        }
        (Some(name), None) => {
            if name.starts_with("rand") && c.seed.is_none() {
                return Err(Error::invalid(format!(
                    "generation of {name} is stochastic; pass --seed"
                )));
            }
            let battery = standard_battery(c.seed.unwrap_or(0))?;
            match battery.iter().find(|b| b.name == *name) {
                Some(b) => {
                    emit(&c.out, &b.graph.to_text())?;
                    Ok(0)
                }
                None => {
                    let names: Vec<&str> = battery.iter().map(|b| b.name.as_str()).collect();
                    Err(Error::invalid(format!(
                        "unknown graph {name}; built-ins: {}",
                        names.join(", ")
                    )))
                }
            }
        }
    }
}

// ---------------------------------------------------------------------------
// curve

#[derive(Args)]
struct CurveCmd {
    /// Graph file
    #[arg(long)]
    graph: PathBuf,
    /// Start the walk from this vertex
    #[arg(long, default_value_t = 0)]
    seed_vertex: usize,
    /// Number of walk steps
    #[arg(long)]
    steps: usize,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Exhaustive-enumeration guard override
    #[arg(long)]
    max_n: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Serialize)]
struct CurveRow {
    t: usize,
    x: usize,
    curve: f64,
    envelope: f64,
}

#[derive(Serialize)]
struct CurveReport {
    graph: GraphReport,
    seed_vertex: usize,
    gap: f64,
    rows: Vec<CurveRow>,
}

fn guard_exhaustive(g: &WeightedGraph, max_n: Option<usize>, hint: &str) -> Result<()> {
    let cap = max_n.unwrap_or(MAX_BRUTE_N);
    if g.n() > cap {
        return Err(Error::capacity(format!(
            "n = {} exceeds the exhaustive guard {cap}; {hint}",
            g.n()
        )));
    }
    Ok(())
}

fn run_curve(c: CurveCmd) -> Result<i32> {
    let g = read_graph(&c.graph)?;
    guard_exhaustive(&g, c.max_n, "the envelope needs the exhaustively computed gap")?;
    let gap = comb_gap(&g)?.value;
    let n = g.n();
    let mut p = MassVector::indicator(n, c.seed_vertex)?;
    let mut rows = Vec::new();
    for t in 0..=c.steps {
        let curve = curve_of(&g, &p)?;
        for x in 0..=n {
            rows.push(CurveRow {
                t,
                x,
                curve: curve.eval(x as f64),
                envelope: mixing_envelope(gap, t as u32, x as f64, n),
            });
        }
        if t < c.steps {
            p = walk_step(&g, &p)?;
        }
    }
    let payload = match c.format {
        Format::Csv => {
            let mut s = String::from("t,x,curve,envelope\n");
            for r in &rows {
                s.push_str(&format!("{},{},{},{}\n", r.t, r.x, r.curve, r.envelope));
            }
            s
        }
        Format::Json => json_payload(&CurveReport {
            graph: graph_report(c.graph.display().to_string(), &g),
            seed_vertex: c.seed_vertex,
            gap,
            rows,
        }),
    };
    emit(&c.out, &payload)?;
    Ok(0)
}

// ---------------------------------------------------------------------------
// walk

#[derive(Args)]
struct WalkCmd {
    /// Graph file
    #[arg(long)]
    graph: PathBuf,
    /// Start the walk from this vertex
    #[arg(long)]
    seed_vertex: usize,
    /// Number of walk steps
    #[arg(long)]
    steps: usize,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Serialize)]
struct WalkRow {
    t: usize,
    l1_to_uniform: f64,
    sweep_expansion: f64,
    sweep_size: usize,
}

#[derive(Serialize)]
struct WalkReport {
    graph: GraphReport,
    seed_vertex: usize,
    rows: Vec<WalkRow>,
}

fn run_walk(c: WalkCmd) -> Result<i32> {
    let g = read_graph(&c.graph)?;
    let mut p = MassVector::indicator(g.n(), c.seed_vertex)?;
    let mut rows = Vec::new();
    for t in 0..=c.steps {
        let (best, phi) = sweep_cut(&g, &p, g.n() / 2)?;
        rows.push(WalkRow {
            t,
            l1_to_uniform: p.l1_distance_to_uniform(),
            sweep_expansion: phi,
            sweep_size: best.size(),
        });
        if t < c.steps {
            p = walk_step(&g, &p)?;
        }
    }
    let payload = match c.format {
        Format::Csv => {
            let mut s = String::from("t,l1_to_uniform,sweep_expansion,sweep_size\n");
            for r in &rows {
                s.push_str(&format!(
                    "{},{},{},{}\n",
                    r.t, r.l1_to_uniform, r.sweep_expansion, r.sweep_size
                ));
            }
            s
        }
        Format::Json => json_payload(&WalkReport {
            graph: graph_report(c.graph.display().to_string(), &g),
            seed_vertex: c.seed_vertex,
            rows,
        }),
    };
    emit(&c.out, &payload)?;
    Ok(0)
}

// ---------------------------------------------------------------------------
// esp

#[derive(Args)]
struct EspCmd {
    /// Graph file
    #[arg(long)]
    graph: PathBuf,
    /// Start from this vertex's singleton set
    #[arg(long)]
    seed_vertex: usize,
    /// Step cap
    #[arg(long)]
    steps: usize,
    /// Stop once the set's volume exceeds this budget
    #[arg(long)]
    budget: f64,
    /// RNG seed for the threshold draws
    #[arg(long)]
    seed: u64,
    /// Run the volume-biased variant
    #[arg(long)]
    volume_biased: bool,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Serialize)]
struct EspRow {
    t: usize,
    size: usize,
    volume: f64,
    expansion: Option<f64>,
    u: Option<f64>,
}

#[derive(Serialize)]
struct EspSummary {
    seed: u64,
    volume_biased: bool,
    termination: &'static str,
    best_step: Option<usize>,
    best_size: Option<usize>,
    best_expansion: Option<f64>,
    best_set: Vec<usize>,
}

#[derive(Serialize)]
struct EspReport {
    graph: GraphReport,
    seed_vertex: usize,
    rows: Vec<EspRow>,
    summary: EspSummary,
}

fn termination_name(t: Termination) -> &'static str {
    match t {
        Termination::TargetReached => "target_reached",
        Termination::BudgetExceeded => "budget_exceeded",
        Termination::StepCapReached => "step_cap_reached",
        Termination::ReachedEmpty => "reached_empty",
        Termination::ReachedFull => "reached_full",
    }
}

fn run_esp(c: EspCmd) -> Result<i32> {
    let g = read_graph(&c.graph)?;
    let start = VertexSet::singleton(&g, c.seed_vertex)?;
    let traj = esp_run(&g, &start, c.steps, c.seed, c.volume_biased, Some(c.budget), None)?;

    let mut rows = vec![EspRow {
        t: 0,
        size: start.size(),
        volume: start.volume(),
        expansion: expansion_opt(&g, &start),
        u: None,
    }];
    for (i, step) in traj.steps.iter().enumerate() {
        rows.push(EspRow {
            t: i + 1,
            size: step.set.size(),
            volume: step.set.volume(),
            expansion: step.expansion,
            u: Some(step.u),
        });
    }

    let mut best: Option<(usize, f64)> = None;
    for r in &rows {
        if let Some(phi) = r.expansion {
            if best.map_or(true, |(_, b)| phi < b) {
                best = Some((r.t, phi));
            }
        }
    }
    let best_set = match best {
        Some((0, _)) => start.members().to_vec(),
        Some((t, _)) => traj.steps[t - 1].set.members().to_vec(),
        None => Vec::new(),
    };
    let summary = EspSummary {
        seed: c.seed,
        volume_biased: c.volume_biased,
        termination: termination_name(traj.termination),
        best_step: best.map(|(t, _)| t),
        best_size: best.map(|(t, _)| rows[t].size),
        best_expansion: best.map(|(_, phi)| phi),
        best_set,
    };

    let payload = match c.format {
        Format::Csv => {
            let mut s = String::from("t,size,volume,expansion,u\n");
            for r in &rows {
                let phi = r.expansion.map_or(String::new(), |v| v.to_string());
                let u = r.u.map_or(String::new(), |v| v.to_string());
                s.push_str(&format!("{},{},{},{},{}\n", r.t, r.size, r.volume, phi, u));
            }
            s.push_str(&serde_json::to_string(&summary).expect("summary serializes"));
            s.push('\n');
            s
        }
        Format::Json => json_payload(&EspReport {
            graph: graph_report(c.graph.display().to_string(), &g),
            seed_vertex: c.seed_vertex,
            rows,
            summary,
        }),
    };
    emit(&c.out, &payload)?;
    Ok(0)
}

// ---------------------------------------------------------------------------
// gaps

#[derive(Args)]
struct GapsCmd {
    /// Graph file
    #[arg(long)]
    graph: PathBuf,
    /// Also report the size-restricted quantities at this delta
    #[arg(long)]
    delta: Option<f64>,
    /// Run the fractional heuristic as well
    #[arg(long)]
    fractional: bool,
    /// Restarts for the heuristic
    #[arg(long)]
    restarts: Option<usize>,
    /// RNG seed for the heuristic
    #[arg(long)]
    seed: Option<u64>,
    /// Exhaustive-enumeration guard override
    #[arg(long)]
    max_n: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Serialize)]
struct GapOut {
    value: f64,
    method: &'static str,
    witness_s: Vec<usize>,
    witness_t: Vec<usize>,
}

#[derive(Serialize)]
struct ExpansionOut {
    value: f64,
    witness: Vec<usize>,
}

#[derive(Serialize)]
struct VertexOut {
    psi: f64,
    psi_witness: Vec<usize>,
    certified_a: f64,
    certified_b: f64,
}

#[derive(Serialize)]
struct FractionalOut {
    value: f64,
    method: &'static str,
    chi_s: Vec<f64>,
    chi_t: Vec<f64>,
    restarts: usize,
    seed: u64,
}

#[derive(Serialize)]
struct ExhaustiveOut {
    comb_gap: GapOut,
    expansion: ExpansionOut,
    delta: Option<f64>,
    delta_comb_gap: Option<GapOut>,
    delta_expansion: Option<ExpansionOut>,
    vertex: Option<VertexOut>,
}

#[derive(Serialize)]
struct GapsReport {
    graph: GraphReport,
    exhaustive: Option<ExhaustiveOut>,
    fractional: Option<FractionalOut>,
}

fn method_name(m: GapMethod) -> &'static str {
    match m {
        GapMethod::Exhaustive => "exhaustive",
        GapMethod::Heuristic => "heuristic",
    }
}

fn gap_out(cert: &GapCertificate) -> GapOut {
    let (s, t) = match &cert.witness {
        GapWitness::Sets { s, t } => (s.members().to_vec(), t.members().to_vec()),
        GapWitness::Fractional { .. } => (Vec::new(), Vec::new()),
    };
    GapOut {
        value: cert.value,
        method: method_name(cert.method),
        witness_s: s,
        witness_t: t,
    }
}

fn run_gaps(c: GapsCmd) -> Result<i32> {
    let g = read_graph(&c.graph)?;
    let cap = c.max_n.unwrap_or(MAX_BRUTE_N);
    let exhaustive_ok = g.n() <= cap;
    if !exhaustive_ok && !c.fractional {
        return Err(Error::capacity(format!(
            "n = {} exceeds the exhaustive guard {cap}; pass --fractional for the heuristic",
            g.n()
        )));
    }

    let exhaustive = if exhaustive_ok {
        let cert = comb_gap(&g)?;
        let (phi, phi_set) = small_set_expansion(&g, 0.5)?;
        let (delta_comb_gap, delta_expansion) = match c.delta {
            Some(d) => {
                let dc = comb_gap_delta(&g, d)?;
                let (dphi, dset) = small_set_expansion(&g, d)?;
                (
                    Some(gap_out(&dc)),
                    Some(ExpansionOut { value: dphi, witness: dset.members().to_vec() }),
                )
            }
            None => (None, None),
        };
        let vertex = if g.is_lazy() {
            let (psi, psi_set) = psi_graph(&g)?;
            let (a, b) = graph_certified_pair(&g)?;
            Some(VertexOut {
                psi,
                psi_witness: psi_set.members().to_vec(),
                certified_a: a,
                certified_b: b,
            })
        } else {
            None
        };
        Some(ExhaustiveOut {
            comb_gap: gap_out(&cert),
            expansion: ExpansionOut { value: phi, witness: phi_set.members().to_vec() },
            delta: c.delta,
            delta_comb_gap,
            delta_expansion,
            vertex,
        })
    } else {
        None
    };

    let fractional = if c.fractional {
        let seed = c.seed.ok_or_else(|| {
            Error::invalid("the fractional heuristic is stochastic; pass --seed")
        })?;
        let restarts = c.restarts.unwrap_or(DEFAULT_RESTARTS);
        let cert = comb_gap_fractional(&g, restarts, DEFAULT_ITER_CAP, seed)?;
        let (chi_s, chi_t) = match &cert.witness {
            GapWitness::Fractional { chi_s, chi_t } => (chi_s.clone(), chi_t.clone()),
            GapWitness::Sets { .. } => (Vec::new(), Vec::new()),
        };
        Some(FractionalOut {
            value: cert.value,
            method: method_name(cert.method),
            chi_s,
            chi_t,
            restarts,
            seed,
        })
    } else {
        None
    };

    let report = GapsReport {
        graph: graph_report(c.graph.display().to_string(), &g),
        exhaustive,
        fractional,
    };
    emit(&c.out, &json_payload(&report))?;
    Ok(0)
}

// ---------------------------------------------------------------------------
// hypercube

#[derive(Args)]
struct HypercubeCmd {
    /// Alphabet size per coordinate
    #[arg(long)]
    k: u32,
    /// Number of coordinates
    #[arg(long)]
    dim: u32,
    /// Per-coordinate rerandomization probability
    #[arg(long)]
    eps: f64,
    /// Cut-versus-balls report
    #[arg(long)]
    report: bool,
    /// Ball size-fraction cap for the report
    #[arg(long)]
    cap: Option<f64>,
    /// Run a ball-shaped evolving-set trajectory
    #[arg(long)]
    esp: bool,
    /// Step cap for the trajectory
    #[arg(long)]
    steps: Option<usize>,
    /// RNG seed for the trajectory
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Serialize)]
struct BallOut {
    radius: usize,
    size_fraction: f64,
    expansion: f64,
}

#[derive(Serialize)]
struct CubeReportOut {
    k: u32,
    dim: u32,
    eps: f64,
    delta_target: f64,
    coordinate_cut_fraction: f64,
    coordinate_cut_expansion: f64,
    cut_expansion_leq_eps: bool,
    cap: f64,
    balls: Vec<BallOut>,
    largest_in_cap_radius: Option<usize>,
    min_ball_expansion: Option<f64>,
    min_ball_radius: Option<usize>,
    separation_holds: Option<bool>,
    vacuous: bool,
    degenerate_eps: bool,
    summary: String,
}

#[derive(Serialize)]
struct CubeEspRow {
    t: usize,
    radius: i64,
    size_fraction: f64,
    u: f64,
}

#[derive(Serialize)]
struct CubeSummaryOut {
    k: u32,
    dim: u32,
    eps: f64,
    p_same: f64,
    p_diff: f64,
    monotone_regime: bool,
    coordinate_cut_expansion: f64,
    coordinate_cut_fraction: f64,
}

fn run_hypercube(c: HypercubeCmd) -> Result<i32> {
    let m = HypercubeModel::new(c.k, c.dim, c.eps)?;
    if c.report && c.esp {
        return Err(Error::invalid("pass --report or --esp, not both"));
    }

    if c.report {
        let rep = counterexample_report(&m, 1.0 / c.k as f64, c.cap.unwrap_or(0.01), None)?;
        let balls: Vec<BallOut> = rep
            .balls
            .iter()
            .map(|b| BallOut {
                radius: b.radius,
                size_fraction: b.size_fraction,
                expansion: b.expansion,
            })
            .collect();
        let payload = match c.format {
            Format::Csv => {
                let mut s = String::from("r,size_fraction,expansion\n");
                for b in &balls {
                    s.push_str(&format!("{},{},{}\n", b.radius, b.size_fraction, b.expansion));
                }
                s
            }
            Format::Json => json_payload(&CubeReportOut {
                k: c.k,
                dim: c.dim,
                eps: c.eps,
                delta_target: rep.delta_target,
                coordinate_cut_fraction: rep.coordinate_cut_fraction,
                coordinate_cut_expansion: rep.coordinate_cut_expansion,
                cut_expansion_leq_eps: rep.cut_expansion_leq_eps,
                cap: rep.cap,
                balls,
                largest_in_cap_radius: rep.largest_in_cap_radius,
                min_ball_expansion: rep.min_ball_expansion,
                min_ball_radius: rep.min_ball_radius,
                separation_holds: rep.separation_holds,
                vacuous: rep.vacuous,
                degenerate_eps: rep.degenerate_eps,
                summary: rep.summary.clone(),
            }),
        };
        emit(&c.out, &payload)?;
        return Ok(0);
    }

    if c.esp {
        let steps = c
            .steps
            .ok_or_else(|| Error::invalid("--esp needs --steps"))?;
        let seed = c
            .seed
            .ok_or_else(|| Error::invalid("the trajectory is stochastic; pass --seed"))?;
        let kernel = weight_chain(&m)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut radius = 0usize;
        let mut rows = Vec::new();
        for t in 1..=steps {
            let u = 1.0 - rng.gen::<f64>();
            let next = ball_step(&kernel, radius, u)?;
            rows.push(CubeEspRow {
                t,
                radius: next,
                size_fraction: if next < 0 { 0.0 } else { kernel.ball_fraction(next as usize) },
                u,
            });
            if next < 0 {
                break; // absorbed at the empty set
            }
            radius = next as usize;
        }
        let payload = match c.format {
            Format::Csv => {
                let mut s = String::from("t,radius,size_fraction,u\n");
                for r in &rows {
                    s.push_str(&format!("{},{},{},{}\n", r.t, r.radius, r.size_fraction, r.u));
                }
                s
            }
            Format::Json => json_payload(&rows),
        };
        emit(&c.out, &payload)?;
        return Ok(0);
    }

    let (cut_exp, cut_frac) = coordinate_cut_expansion(&m);
    emit(
        &c.out,
        &json_payload(&CubeSummaryOut {
            k: c.k,
            dim: c.dim,
            eps: c.eps,
            p_same: m.p_same(),
            p_diff: m.p_diff(),
            monotone_regime: m.monotone_regime(),
            coordinate_cut_expansion: cut_exp,
            coordinate_cut_fraction: cut_frac,
        }),
    )?;
    Ok(0)
}

// ---------------------------------------------------------------------------
// verify

#[derive(Args)]
struct VerifyCmd {
    /// Battery seed
    #[arg(long)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Serialize)]
struct CheckOut {
    name: String,
    pass: bool,
    cases: usize,
    max_violation: f64,
    detail: String,
}

#[derive(Serialize)]
struct VerifyReport {
    seed: u64,
    all_pass: bool,
    checks: Vec<CheckOut>,
}

fn run_verify_cmd(c: VerifyCmd) -> Result<i32> {
    let results = run_verify(c.seed);
    let all_pass = results.iter().all(|r| r.pass);
    for r in &results {
        if r.pass {
            eprintln!(
                "PASS {}  cases={}  max_violation={:e}",
                r.name, r.cases, r.max_violation
            );
        } else {
            eprintln!(
                "FAIL {}  cases={}  max_violation={:e}  {}",
                r.name, r.cases, r.max_violation, r.detail
            );
        }
    }
    eprintln!(
        "{}/{} checks passed",
        results.iter().filter(|r| r.pass).count(),
        results.len()
    );
    let report = VerifyReport {
        seed: c.seed,
        all_pass,
        checks: results
            .into_iter()
            .map(|r| CheckOut {
                name: r.name,
                pass: r.pass,
                cases: r.cases,
                max_violation: r.max_violation,
                detail: r.detail,
            })
            .collect(),
    };
    emit(&c.out, &json_payload(&report))?;
    Ok(if all_pass { 0 } else { 1 })
}
