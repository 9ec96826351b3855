//! Analysis report: the full pipeline result as a stable, serializable
//! tree. Exact rationals travel as strings; every numeric block states
//! the tolerance it was computed under. With timings disabled
//! (default), identical input and flags produce byte-identical JSON.

use std::collections::BTreeMap;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use xorgame::certificate::{
    no_advantage, pm_one_singular_check, symmetric_reduction_check, AGREEMENT_TOL,
};
use xorgame::game::classical_value;
use xorgame::graph::{
    build_graph_rules, independence_number, spectrum_formula, structural_checks,
    INDEPENDENCE_CAP,
};
use xorgame::quantum::{norm_bound_check, quantum_value};
use xorgame::rational::format_ratio;
use xorgame::theta::{class1_certify, CLASS1_TOL};
use xorgame::{Definiteness, Error, Strategy, XorGame};

/// Vertex count above which the graph-spectrum cross-check is skipped
/// (the dense eigensolve dominates the runtime beyond this).
const SPECTRUM_CAP: usize = 800;
/// Side-length cap of the quantum SDP block matrix.
const QUANTUM_DIM_CAP: usize = 256;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub game: GameEcho,
    pub classical: Option<ClassicalReport>,
    pub quantum: Option<QuantumReport>,
    pub certificates: Option<CertificatesReport>,
    pub graph: Option<GraphReport>,
    pub capacity: Option<CapacityReport>,
    /// Strict quantum advantage (`ω_q − ω_c > 1e-6`); absent when the
    /// pipeline could not decide or detected an inconsistency.
    pub advantage: Option<bool>,
    /// Stages not run, with reasons.
    pub skipped: Vec<String>,
    pub provenance: Provenance,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GameEcho {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub m: usize,
    pub signs: Vec<Vec<i8>>,
    pub probs: Vec<Vec<String>>,
    pub uniform: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ClassicalReport {
    /// Exact bias ε_c as a reduced fraction.
    pub bias: String,
    pub bias_float: f64,
    /// Exact winning probability ω_c.
    pub value: String,
    pub value_float: f64,
    /// Optimal deterministic strategy pairs, e.g. "+--+".
    pub strategies: Vec<StrategyPair>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StrategyPair {
    pub alice: String,
    pub bob: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct QuantumReport {
    pub bias: f64,
    pub value: f64,
    pub dual_value: f64,
    pub gap: f64,
    pub iterations: usize,
    pub tolerance: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub norm_saturation: Option<NormSaturationReport>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NormSaturationReport {
    pub bias: f64,
    pub norm_over_m: f64,
    pub saturated: bool,
    pub tolerance: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CertificatesReport {
    pub thm1: NoAdvantageSection,
    pub cor1: PmOneSection,
    pub symmetric_reduction: SymmetricReductionSection,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NoAdvantageSection {
    pub passes: bool,
    pub certificates_evaluated: usize,
    pub best: CertificateDetail,
    pub classical_bias: String,
    pub quantum_bias: f64,
    pub sdp_agrees: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub inconsistency: Option<String>,
    pub tolerance: f64,
    pub agreement_tolerance: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CertificateDetail {
    pub alice: String,
    pub bob: String,
    pub sigma: Vec<String>,
    pub lambda: Vec<String>,
    pub definiteness: String,
    /// Spectral radius; absent when the diagonals are indefinite (ρ
    /// is then undefined and the certificate fails).
    pub rho: Option<f64>,
    pub rho_deviation: Option<f64>,
    pub rho_relative_deviation: Option<f64>,
    pub passes: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PmOneSection {
    pub is_pm_one: bool,
    pub max_singular_value: f64,
    pub top_space_dim: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub matched_alice: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub matched_bob: Option<String>,
    pub indeterminate: bool,
    pub tolerance: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SymmetricReductionSection {
    pub applicable: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub passes: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    pub tolerance: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GraphReport {
    pub vertices: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha_witness: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha_skipped: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spectrum: Option<SpectrumSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spectrum_skipped: Option<String>,
    pub structural: StructuralSection,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpectrumSection {
    pub max_deviation: f64,
    pub eta_max_residual: f64,
    pub neat_trick_max_deviation: f64,
    pub matches: bool,
    pub tolerance: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StructuralSection {
    pub regular_degree: Option<usize>,
    pub expected_degree: usize,
    pub triangle_free: bool,
    pub matching_ok: bool,
    pub all_ok: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CapacityReport {
    pub alpha: usize,
    pub alpha_exact: bool,
    pub theta: f64,
    pub class1: bool,
    pub gap: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessSection>,
    pub solver: SolverSection,
    pub tolerance: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WitnessSection {
    pub a: f64,
    pub b: f64,
    pub lambda_max: f64,
    pub valid: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SolverSection {
    pub gap: f64,
    pub iterations: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Provenance {
    pub tool: String,
    pub version: String,
    pub tolerances: Tolerances,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings_s: Option<BTreeMap<String, f64>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Tolerances {
    pub solver: f64,
    pub certificate: f64,
    pub agreement: f64,
    pub class1: f64,
    pub alpha_cap: usize,
}

#[derive(Debug, Clone, Copy)]
pub struct AnalyzeOptions {
    pub tol: f64,
    pub cert_tol: f64,
    pub alpha_cap: usize,
    pub no_graph: bool,
    pub timings: bool,
}

fn strategy_string(s: &Strategy) -> String {
    s.entries
        .iter()
        .map(|&v| if v == 1 { '+' } else { '-' })
        .collect()
}

/// JSON cannot carry NaN; undefined values become `null`.
fn finite(v: f64) -> Option<f64> {
    v.is_finite().then_some(v)
}

/// Runs the full pipeline. Besides the report, returns whether a
/// certificate-vs-SDP inconsistency was detected (exit code 3).
pub fn analyze(
    game: &XorGame,
    name: Option<String>,
    opts: &AnalyzeOptions,
) -> Result<(AnalysisReport, bool), Error> {
    let m = game.m();
    let mut skipped = Vec::new();
    let mut timings: BTreeMap<String, f64> = BTreeMap::new();
    let mut inconsistent = false;

    let echo = GameEcho {
        name,
        m,
        signs: game.sign_rows(),
        probs: (0..m)
            .map(|x| (0..m).map(|y| format_ratio(game.prob(x, y))).collect())
            .collect(),
        uniform: game.is_uniform(),
    };

    // Classical stage.
    let start = Instant::now();
    let classical_sol = match classical_value(game) {
        Ok(sol) => Some(sol),
        Err(Error::EnumerationCap { m, cap }) => {
            skipped.push(format!(
                "classical: exact enumeration capped at m ≤ {cap}, game has m = {m}"
            ));
            None
        }
        Err(e) => return Err(e),
    };
    timings.insert("classical".into(), start.elapsed().as_secs_f64());
    let classical = classical_sol.as_ref().map(|sol| ClassicalReport {
        bias: format_ratio(&sol.bias),
        bias_float: sol.bias_f64(),
        value: format_ratio(&sol.value),
        value_float: sol.value_f64(),
        strategies: sol
            .optimal_pairs
            .iter()
            .map(|(a, b)| StrategyPair {
                alice: strategy_string(a),
                bob: strategy_string(b),
            })
            .collect(),
    });

    // Quantum stage.
    let start = Instant::now();
    let quantum_sol = if 2 * m <= QUANTUM_DIM_CAP {
        Some(quantum_value(game, opts.tol)?)
    } else {
        skipped.push(format!(
            "quantum: SDP dimension 2m = {} beyond cap {QUANTUM_DIM_CAP}",
            2 * m
        ));
        None
    };
    let quantum = match &quantum_sol {
        Some(q) => {
            let norm_saturation = if game.is_uniform() {
                let sat = norm_bound_check(game, opts.tol)?;
                Some(NormSaturationReport {
                    bias: sat.bias,
                    norm_over_m: sat.norm_over_m,
                    saturated: sat.saturated,
                    tolerance: 1e-6,
                })
            } else {
                None
            };
            Some(QuantumReport {
                bias: q.bias,
                value: q.value,
                dual_value: 0.5 * (1.0 + q.dual_y.iter().sum::<f64>()),
                gap: q.gap,
                iterations: q.iterations,
                tolerance: opts.tol,
                norm_saturation,
            })
        }
        None => None,
    };
    timings.insert("quantum".into(), start.elapsed().as_secs_f64());

    // Certificate stage.
    let start = Instant::now();
    let certificates = if classical_sol.is_none() || quantum_sol.is_none() {
        skipped.push("certificates: need both classical and quantum stages".into());
        None
    } else if game.has_zero_row_or_col() {
        skipped.push(
            "certificates: a question row or column is never asked (singular diagonals)".into(),
        );
        None
    } else {
        let report = no_advantage(game, opts.cert_tol, opts.tol)?;
        inconsistent = !report.sdp_agrees;
        let best = &report.certificates[report.best_index];
        let thm1 = NoAdvantageSection {
            passes: report.no_advantage,
            certificates_evaluated: report.certificates.len(),
            best: CertificateDetail {
                alice: strategy_string(&best.alice),
                bob: strategy_string(&best.bob),
                sigma: best.sigma_diag.iter().map(format_ratio).collect(),
                lambda: best.lambda_diag.iter().map(format_ratio).collect(),
                definiteness: match best.definiteness {
                    Definiteness::BothPositive => "both_positive".into(),
                    Definiteness::BothNegative => "both_negative".into(),
                    Definiteness::Indefinite => "indefinite".into(),
                },
                rho: finite(best.rho),
                rho_deviation: finite(best.rho_deviation),
                rho_relative_deviation: finite(best.rho_relative_deviation),
                passes: best.passes,
            },
            classical_bias: format_ratio(&report.classical_bias),
            quantum_bias: report.quantum_bias,
            sdp_agrees: report.sdp_agrees,
            inconsistency: report.inconsistency.clone(),
            tolerance: opts.cert_tol,
            agreement_tolerance: AGREEMENT_TOL,
        };

        let pm = pm_one_singular_check(game)?;
        let cor1 = PmOneSection {
            is_pm_one: pm.is_pm_one,
            max_singular_value: pm.max_singular_value,
            top_space_dim: pm.top_space_dim,
            matched_alice: pm.matched_pair.as_ref().map(|(a, _)| strategy_string(a)),
            matched_bob: pm.matched_pair.as_ref().map(|(_, b)| strategy_string(b)),
            indeterminate: pm.indeterminate,
            tolerance: 1e-7,
        };

        let symmetric_reduction =
            match symmetric_reduction_check(game, &best.alice, &best.bob, opts.cert_tol) {
                Ok(passes) => SymmetricReductionSection {
                    applicable: true,
                    passes: Some(passes),
                    reason: None,
                    tolerance: opts.cert_tol,
                },
                Err(Error::NotApplicable(reason)) => SymmetricReductionSection {
                    applicable: false,
                    passes: None,
                    reason: Some(reason),
                    tolerance: opts.cert_tol,
                },
                Err(e) => return Err(e),
            };

        Some(CertificatesReport {
            thm1,
            cor1,
            symmetric_reduction,
        })
    };
    timings.insert("certificates".into(), start.elapsed().as_secs_f64());

    // Graph stage.
    let start = Instant::now();
    let graph = if opts.no_graph {
        skipped.push("graph: disabled by flag".into());
        None
    } else if let Err(Error::GraphTooLarge { vertices, cap }) =
        build_graph_rules(&game.sign_rows())
    {
        skipped.push(format!(
            "graph: {vertices} vertices exceed the build cap {cap}"
        ));
        None
    } else {
        let signs = game.sign_rows();
        let mut gg = build_graph_rules(&signs)?;
        if !game.is_uniform() {
            gg.note = Some(
                "non-uniform game: graph reflects the sign pattern only, not the input \
                 distribution"
                    .into(),
            );
        }
        let vertices = 2 * m * m;
        let cap = opts.alpha_cap.min(INDEPENDENCE_CAP);
        let (alpha, alpha_witness, alpha_skipped) = if vertices <= cap {
            let (a, w) = independence_number(&gg)?;
            (Some(a), Some(w), None)
        } else {
            (
                None,
                None,
                Some(format!(
                    "exact independence number capped at {cap} vertices, graph has {vertices}"
                )),
            )
        };
        let (spectrum, spectrum_skipped) = if vertices <= SPECTRUM_CAP {
            let s = spectrum_formula(&signs)?;
            (
                Some(SpectrumSection {
                    max_deviation: s.max_deviation,
                    eta_max_residual: s.eta_max_residual,
                    neat_trick_max_deviation: s.neat_trick_max_deviation,
                    matches: s.max_deviation <= 1e-8
                        && s.eta_max_residual <= 1e-8
                        && s.neat_trick_max_deviation <= 1e-8,
                    tolerance: 1e-8,
                }),
                None,
            )
        } else {
            (
                None,
                Some(format!(
                    "spectrum cross-check capped at {SPECTRUM_CAP} vertices, graph has {vertices}"
                )),
            )
        };
        let s = structural_checks(&gg);
        Some(GraphReport {
            vertices,
            note: gg.note.clone(),
            alpha,
            alpha_witness,
            alpha_skipped,
            spectrum,
            spectrum_skipped,
            structural: StructuralSection {
                regular_degree: s.regular_degree,
                expected_degree: s.expected_degree,
                triangle_free: s.triangle_free,
                matching_ok: s.matching_ok,
                all_ok: s.all_ok,
            },
        })
    };
    timings.insert("graph".into(), start.elapsed().as_secs_f64());

    // Capacity stage.
    let start = Instant::now();
    let capacity = if opts.no_graph {
        skipped.push("capacity: graph stage disabled".into());
        None
    } else if !game.is_uniform() {
        skipped.push("capacity: class-1 certification needs a uniform game".into());
        None
    } else if 2 * m * m > QUANTUM_DIM_CAP {
        skipped.push(format!(
            "capacity: theta SDP dimension 2m² = {} beyond cap {QUANTUM_DIM_CAP}",
            2 * m * m
        ));
        None
    } else {
        match class1_certify(game, opts.tol) {
            Ok(cert) => Some(CapacityReport {
                alpha: cert.alpha,
                alpha_exact: cert.alpha_exact,
                theta: cert.theta,
                class1: cert.class1,
                gap: cert.gap,
                witness: cert.theta_witness.as_ref().map(|w| WitnessSection {
                    a: w.a,
                    b: w.b,
                    lambda_max: w.lambda_max,
                    valid: w.valid,
                }),
                solver: SolverSection {
                    gap: cert.solver_gap,
                    iterations: cert.solver_iterations,
                },
                tolerance: CLASS1_TOL,
                note: cert.note.clone(),
            }),
            Err(Error::GraphTooLarge { vertices, cap }) => {
                skipped.push(format!(
                    "capacity: no exact α for {vertices} vertices (cap {cap}) and no ±1 \
                     singular pair to supply the formula"
                ));
                None
            }
            Err(e) => return Err(e),
        }
    };
    timings.insert("capacity".into(), start.elapsed().as_secs_f64());

    // Verdict.
    let advantage = match (&classical_sol, &quantum_sol) {
        (Some(c), Some(q)) if !inconsistent => {
            Some((1.0 + q.bias) / 2.0 - (1.0 + c.bias_f64()) / 2.0 > AGREEMENT_TOL)
        }
        _ => None,
    };

    let report = AnalysisReport {
        game: echo,
        classical,
        quantum,
        certificates,
        graph,
        capacity,
        advantage,
        skipped,
        provenance: Provenance {
            tool: "xorgame".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            tolerances: Tolerances {
                solver: opts.tol,
                certificate: opts.cert_tol,
                agreement: AGREEMENT_TOL,
                class1: CLASS1_TOL,
                alpha_cap: opts.alpha_cap,
            },
            timings_s: opts.timings.then_some(timings),
        },
    };
    Ok((report, inconsistent))
}

/// Plain-text rendering of the report.
pub fn render_text(r: &AnalysisReport) -> String {
    let mut out = String::new();
    let name = r.game.name.as_deref().unwrap_or("unnamed");
    out.push_str(&format!(
        "game: {name} (m = {}, {})\n",
        r.game.m,
        if r.game.uniform { "uniform" } else { "non-uniform" }
    ));
    if let Some(c) = &r.classical {
        out.push_str(&format!(
            "classical: ω_c = {} = {:.10} (bias {}; {} optimal pair{})\n",
            c.value,
            c.value_float,
            c.bias,
            c.strategies.len(),
            if c.strategies.len() == 1 { "" } else { "s" }
        ));
    }
    if let Some(q) = &r.quantum {
        out.push_str(&format!(
            "quantum: ω_q ≈ {:.10} (bias {:.10}, solver gap {:.1e}, {} iterations)\n",
            q.value, q.bias, q.gap, q.iterations
        ));
        if let Some(s) = &q.norm_saturation {
            out.push_str(&format!(
                "norm bound: ε_q vs ‖Φ‖/m: {} ({:.10} vs {:.10})\n",
                if s.saturated { "saturated" } else { "not saturated" },
                s.bias,
                s.norm_over_m
            ));
        }
    }
    if let Some(c) = &r.certificates {
        let best = match c.thm1.best.rho_deviation {
            Some(dev) => format!("best |ρ−1| = {dev:.2e}"),
            None => format!("best pair has {} diagonals", c.thm1.best.definiteness),
        };
        out.push_str(&format!(
            "certificate: no-advantage {} ({best}, tol {:.0e}); SDP {}\n",
            if c.thm1.passes { "CERTIFIED" } else { "not certified" },
            c.thm1.tolerance,
            if c.thm1.sdp_agrees { "agrees" } else { "DISAGREES" }
        ));
        out.push_str(&format!(
            "±1 singular pair: {} (σ_max = {:.10}, top-space dim {})\n",
            if c.cor1.is_pm_one {
                "found"
            } else if c.cor1.indeterminate {
                "indeterminate"
            } else {
                "none"
            },
            c.cor1.max_singular_value,
            c.cor1.top_space_dim
        ));
    }
    if let Some(g) = &r.graph {
        let alpha = match (g.alpha, &g.alpha_skipped) {
            (Some(a), _) => format!("α = {a}"),
            (None, Some(reason)) => format!("α skipped ({reason})"),
            _ => "α unavailable".into(),
        };
        let spectrum = match (&g.spectrum, &g.spectrum_skipped) {
            (Some(s), _) => format!(
                "spectrum {} (deviation {:.1e})",
                if s.matches { "matches" } else { "MISMATCH" },
                s.max_deviation
            ),
            (None, Some(reason)) => format!("spectrum skipped ({reason})"),
            _ => String::new(),
        };
        out.push_str(&format!(
            "graph: {} vertices; {alpha}; {spectrum}; structure {}\n",
            g.vertices,
            if g.structural.all_ok { "OK" } else { "BROKEN" }
        ));
    }
    if let Some(c) = &r.capacity {
        out.push_str(&format!(
            "capacity: θ ≈ {:.10}, α = {} → {} (gap {:.2e})\n",
            c.theta,
            c.alpha,
            if c.class1 {
                "class 1: capacity = α"
            } else {
                "not class-1-certified"
            },
            c.gap
        ));
    }
    for s in &r.skipped {
        out.push_str(&format!("skipped: {s}\n"));
    }
    match r.advantage {
        Some(true) => out.push_str("verdict: quantum advantage\n"),
        Some(false) => out.push_str("verdict: no quantum advantage\n"),
        None => out.push_str("verdict: undecided\n"),
    }
    out
}
