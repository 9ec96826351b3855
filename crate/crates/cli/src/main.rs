//! Command-line front end: analyze games, generate families, export
//! game graphs, and hunt for α = θ conjecture data.
//!
//! Exit codes: 0 success, 2 bad input or internal failure, 3 the exact
//! certificate and the SDP disagree about quantum advantage.

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde_json::{json, Value};

use xorgame_cli::report::{analyze, render_text, AnalyzeOptions};
use xorgame::certificate::{no_advantage, pm_one_singular_check, DEFAULT_CERT_TOL};
use xorgame::families::{
    compose_tensor, gen_anticirculant4, gen_chsh, gen_example_ex, gen_nlc, gen_pq_pattern,
    gen_symmetric_row_sum, transform_orthogonal,
};
use xorgame::game::{game_from_json, game_to_json};
use xorgame::graph::{adjacency_json, build_graph_rules, independence_number, to_dot};
use xorgame::rational::parse_ratio;
use xorgame::theta::{lovasz_theta, CLASS1_TOL};
use xorgame::{Error, GeneratedGame, SignedPermutation, XorGame};

#[derive(Parser)]
#[command(
    name = "xorgame",
    version,
    about = "Classical/quantum analysis of two-party XOR games",
    propagate_version = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the full pipeline on a game file.
    Analyze(AnalyzeArgs),
    /// Emit a game from one of the built-in families.
    Generate(GenerateArgs),
    /// Export the 2m²-vertex game graph.
    Graph(GraphArgs),
    /// Sample games certified to have no quantum advantage but no ±1
    /// singular pair, and log whether α = θ holds for each.
    Conjecture(ConjectureArgs),
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Game JSON file(s) ({"m":…, "signs":…, "probs":…}); several files
    /// are analyzed in parallel and reported in input order.
    #[arg(required = true)]
    games: Vec<PathBuf>,
    /// SDP solver tolerance.
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
    /// Certificate tolerance for |ρ − 1|.
    #[arg(long, default_value_t = DEFAULT_CERT_TOL)]
    cert_tol: f64,
    /// Largest vertex count for the exact independence number.
    #[arg(long, default_value_t = 50)]
    alpha_cap: usize,
    /// Skip the graph and capacity stages.
    #[arg(long)]
    no_graph: bool,
    /// Machine-readable JSON instead of text.
    #[arg(long)]
    json: bool,
    /// Pretty-print the JSON report.
    #[arg(long)]
    pretty: bool,
    /// Include wall-clock stage timings (makes output non-deterministic).
    #[arg(long)]
    timings: bool,
}

#[derive(Args)]
struct GenerateArgs {
    #[command(subcommand)]
    family: Family,
    /// Write to a file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Pretty-print the generated JSON.
    #[arg(long, global = true)]
    pretty: bool,
}

#[derive(Subcommand)]
enum Family {
    /// The 2×2 game with one anti-correlated question pair.
    Chsh,
    /// The 4×4 no-advantage game whose optimal diagonals are unequal.
    ExampleEx,
    /// H·diag(d)·H/m for the m×m Sylvester Hadamard H (m = 2, 4, 8, 16).
    Nlc {
        #[arg(long)]
        m: usize,
        /// Comma-separated rational diagonal, e.g. "1/2,1/4,1/8,1/8".
        #[arg(long, allow_hyphen_values = true)]
        diagonal: String,
    },
    /// Symmetric ±1 circulant with constant row sum r (uniform game).
    RowSum {
        #[arg(long)]
        m: usize,
        #[arg(long, allow_negative_numbers = true)]
        row_sum: i64,
    },
    /// 4×4 anticirculant with entries γ_{(x+y) mod 4}.
    Anticirculant4 {
        /// Comma-separated γ₀,γ₁,γ₂,γ₃ with Σ|γ| = 1/4.
        #[arg(long, allow_hyphen_values = true)]
        gamma: String,
    },
    /// The anticirculant (p, q, q, −p) with |p| + |q| = 1/8.
    Pq {
        #[arg(long, allow_hyphen_values = true)]
        p: String,
        #[arg(long, allow_hyphen_values = true)]
        q: String,
    },
    /// Tensor product of two game files.
    Tensor {
        #[arg(long)]
        left: PathBuf,
        #[arg(long)]
        right: PathBuf,
    },
    /// Signed-permutation transform U Φ̃ Vᵀ of a game file.
    Transform {
        #[arg(long)]
        game: PathBuf,
        /// Comma-separated row permutation, e.g. "1,0" (default identity).
        #[arg(long)]
        row_perm: Option<String>,
        /// Row signs as a +/- string, e.g. "+-" (default all +).
        #[arg(long)]
        row_signs: Option<String>,
        #[arg(long)]
        col_perm: Option<String>,
        #[arg(long)]
        col_signs: Option<String>,
    },
}

#[derive(Args)]
struct GraphArgs {
    /// Game JSON file.
    game: PathBuf,
    /// Emit Graphviz DOT (the default).
    #[arg(long, conflicts_with = "adjacency")]
    dot: bool,
    /// Emit the adjacency matrix as JSON.
    #[arg(long)]
    adjacency: bool,
    /// Write to a file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ConjectureArgs {
    /// Number of random games to sample.
    #[arg(long, default_value_t = 100)]
    samples: usize,
    /// Question-set size of the sampled games (≤ 4).
    #[arg(long, default_value_t = 3)]
    m: usize,
    /// RNG seed; fixed seed ⇒ identical output.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write JSON lines to a file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run() -> Result<ExitCode, Error> {
    let cli = Cli::parse();
    match cli.command {
        Command::Analyze(args) => cmd_analyze(&args),
        Command::Generate(args) => cmd_generate(&args).map(|()| ExitCode::SUCCESS),
        Command::Graph(args) => cmd_graph(&args).map(|()| ExitCode::SUCCESS),
        Command::Conjecture(args) => cmd_conjecture(&args),
    }
}

/// Reads a game file, tolerating the extra annotation keys that
/// `generate` adds ("family", "note") by dropping them.
fn load_game(path: &Path) -> Result<(XorGame, Option<String>), Error> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::Schema(format!("cannot read {}: {e}", path.display())))?;
    let mut value: Value =
        serde_json::from_str(&text).map_err(|e| Error::Schema(e.to_string()))?;
    if let Some(obj) = value.as_object_mut() {
        obj.remove("family");
        obj.remove("note");
    }
    game_from_json(&value.to_string())
}

fn write_output(out: Option<&Path>, content: &str) -> Result<(), Error> {
    match out {
        Some(path) => fs::write(path, content)
            .map_err(|e| Error::Schema(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn cmd_analyze(args: &AnalyzeArgs) -> Result<ExitCode, Error> {
    let opts = AnalyzeOptions {
        tol: args.tol,
        cert_tol: args.cert_tol,
        alpha_cap: args.alpha_cap,
        no_graph: args.no_graph,
        timings: args.timings,
    };
    // Pipeline stages run sequentially per game; several games run in
    // parallel. Output stays in input order regardless of completion.
    let results = std::thread::scope(|scope| {
        let handles: Vec<_> = args
            .games
            .iter()
            .map(|path| {
                scope.spawn(move || -> Result<_, Error> {
                    let (game, name) = load_game(path)?;
                    analyze(&game, name, &opts)
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("analysis thread panicked"))
            .collect::<Vec<_>>()
    });

    let batch = args.games.len() > 1;
    let mut any_inconsistent = false;
    for (path, result) in args.games.iter().zip(results) {
        let (report, inconsistent) = result?;
        if args.json {
            let text = if args.pretty {
                serde_json::to_string_pretty(&report)
            } else {
                serde_json::to_string(&report)
            }
            .expect("report serializes");
            println!("{text}");
        } else {
            if batch {
                println!("== {}", path.display());
            }
            print!("{}", render_text(&report));
            if batch {
                println!();
            }
        }
        if inconsistent {
            eprintln!(
                "error: {}: exact certificate and SDP disagree about quantum advantage; \
                 see certificates.thm1.inconsistency in the report",
                path.display()
            );
            any_inconsistent = true;
        }
    }
    Ok(if any_inconsistent {
        ExitCode::from(3)
    } else {
        ExitCode::SUCCESS
    })
}

fn parse_ratio_list(text: &str) -> Result<Vec<xorgame::rational::Ratio>, Error> {
    text.split(',').map(|s| parse_ratio(s.trim())).collect()
}

fn parse_perm(text: &str) -> Result<Vec<usize>, Error> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse::<usize>()
                .map_err(|e| Error::Schema(format!("bad permutation entry {s:?}: {e}")))
        })
        .collect()
}

fn parse_signs(text: &str) -> Result<Vec<i8>, Error> {
    text.chars()
        .map(|c| match c {
            '+' => Ok(1),
            '-' => Ok(-1),
            other => Err(Error::Schema(format!(
                "bad sign character {other:?}: expected '+' or '-'"
            ))),
        })
        .collect()
}

fn signed_permutation(
    n: usize,
    perm: Option<&String>,
    signs: Option<&String>,
) -> Result<SignedPermutation, Error> {
    let perm = match perm {
        Some(p) => parse_perm(p)?,
        None => (0..n).collect(),
    };
    let signs = match signs {
        Some(s) => parse_signs(s)?,
        None => vec![1; n],
    };
    SignedPermutation::new(perm, signs)
}

fn cmd_generate(args: &GenerateArgs) -> Result<(), Error> {
    let generated: GeneratedGame = match &args.family {
        Family::Chsh => gen_chsh(),
        Family::ExampleEx => gen_example_ex(),
        Family::Nlc { m, diagonal } => gen_nlc(*m, &parse_ratio_list(diagonal)?)?,
        Family::RowSum { m, row_sum } => gen_symmetric_row_sum(*m, *row_sum)?,
        Family::Anticirculant4 { gamma } => {
            let list = parse_ratio_list(gamma)?;
            let arr: [xorgame::rational::Ratio; 4] = list.try_into().map_err(|_| {
                Error::Schema("--gamma needs exactly four comma-separated rationals".into())
            })?;
            gen_anticirculant4(&arr)?
        }
        Family::Pq { p, q } => gen_pq_pattern(&parse_ratio(p)?, &parse_ratio(q)?)?,
        Family::Tensor { left, right } => {
            let (g1, _) = load_game(left)?;
            let (g2, _) = load_game(right)?;
            compose_tensor(&g1, &g2)?
        }
        Family::Transform {
            game,
            row_perm,
            row_signs,
            col_perm,
            col_signs,
        } => {
            let (g, _) = load_game(game)?;
            let u = signed_permutation(g.m(), row_perm.as_ref(), row_signs.as_ref())?;
            let v = signed_permutation(g.m(), col_perm.as_ref(), col_signs.as_ref())?;
            transform_orthogonal(&g, &u, &v)?
        }
    };

    let name = serde_json::to_value(generated.spec.kind)
        .ok()
        .and_then(|v| v.as_str().map(str::to_string))
        .unwrap_or_else(|| "generated".into());
    let mut doc: Value =
        serde_json::from_str(&game_to_json(&generated.game, Some(&name), false))
            .expect("game JSON parses");
    let obj = doc.as_object_mut().expect("game JSON is an object");
    obj.insert(
        "family".into(),
        serde_json::to_value(&generated.spec).expect("spec serializes"),
    );
    if let Some(note) = &generated.note {
        obj.insert("note".into(), Value::String(note.clone()));
    }
    let mut text = if args.pretty {
        serde_json::to_string_pretty(&doc).expect("doc serializes")
    } else {
        doc.to_string()
    };
    text.push('\n');
    write_output(args.out.as_deref(), &text)
}

fn cmd_graph(args: &GraphArgs) -> Result<(), Error> {
    let (game, _) = load_game(&args.game)?;
    let gg = build_graph_rules(&game.sign_rows())?;
    let content = if args.adjacency {
        adjacency_json(&gg)
    } else {
        to_dot(&gg)
    };
    write_output(args.out.as_deref(), &content)
}

/// One JSON line of the conjecture hunt.
fn conjecture_line(
    index: usize,
    forced: bool,
    game: &XorGame,
    tol: f64,
) -> Result<(Value, bool), Error> {
    let thm1 = no_advantage(game, DEFAULT_CERT_TOL, tol)?;
    let cor1 = pm_one_singular_check(game)?;
    let candidate = thm1.no_advantage && !cor1.is_pm_one && !cor1.indeterminate;
    let mut line = json!({
        "index": index,
        "forced": forced,
        "m": game.m(),
        "signs": game.sign_rows(),
        "thm1_pass": thm1.no_advantage,
        "cor1_pass": cor1.is_pm_one,
        "sdp_agrees": thm1.sdp_agrees,
        "candidate": candidate,
    });
    if candidate {
        let gg = build_graph_rules(&game.sign_rows())?;
        let (alpha, _) = independence_number(&gg)?;
        let theta = lovasz_theta(&gg.graph, tol)?.primal_value;
        let obj = line.as_object_mut().expect("line is an object");
        obj.insert("alpha".into(), json!(alpha));
        obj.insert("theta".into(), json!(theta));
        obj.insert(
            "alpha_eq_theta".into(),
            json!((theta - alpha as f64).abs() <= CLASS1_TOL),
        );
        obj.insert("theta_gap".into(), json!(theta - alpha as f64));
    }
    Ok((line, candidate))
}

fn cmd_conjecture(args: &ConjectureArgs) -> Result<ExitCode, Error> {
    if args.m == 0 || args.m > 4 {
        eprintln!(
            "error: conjecture sampling supports 1 ≤ m ≤ 4, got m = {}",
            args.m
        );
        return Ok(ExitCode::from(2));
    }
    let tol = 1e-8;
    let mut rng = StdRng::seed_from_u64(args.seed);
    let mut lines = Vec::with_capacity(args.samples + 2);
    let mut candidates = 0usize;
    let mut holds = 0usize;

    // The known candidate goes first so the log is never empty.
    let forced = gen_example_ex();
    let (line, is_candidate) = conjecture_line(0, true, &forced.game, tol)?;
    if is_candidate {
        candidates += 1;
        if line["alpha_eq_theta"] == json!(true) {
            holds += 1;
        }
    }
    lines.push(line);

    for i in 0..args.samples {
        let signs: Vec<Vec<i64>> = (0..args.m)
            .map(|_| {
                (0..args.m)
                    .map(|_| if rng.random::<bool>() { 1 } else { -1 })
                    .collect()
            })
            .collect();
        let game = XorGame::uniform_from_signs(signs)?;
        let (line, is_candidate) = conjecture_line(i + 1, false, &game, tol)?;
        if is_candidate {
            candidates += 1;
            if line["alpha_eq_theta"] == json!(true) {
                holds += 1;
            }
        }
        lines.push(line);
    }

    lines.push(json!({
        "summary": {
            "samples": args.samples,
            "m": args.m,
            "seed": args.seed,
            "candidates": candidates,
            "alpha_eq_theta": holds,
            "counterexamples": candidates - holds,
        }
    }));

    let mut text = String::new();
    for line in &lines {
        text.push_str(&line.to_string());
        text.push('\n');
    }
    match &args.out {
        Some(path) => fs::write(path, &text)
            .map_err(|e| Error::Schema(format!("cannot write {}: {e}", path.display())))?,
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            lock.write_all(text.as_bytes())
                .map_err(|e| Error::Schema(format!("stdout: {e}")))?;
        }
    }
    Ok(ExitCode::SUCCESS)
}
