//! Lovász theta and class-1 capacity certification for game graphs.
//!
//! θ(G) is the minimum largest eigenvalue over symmetric matrices Ã
//! with Ã_{ij} = 1 on the diagonal and on non-adjacent pairs — exactly
//! the eig-min SDP over the graph's edge pattern. It sandwiches the
//! Shannon capacity: α(G) ≤ Θ(G) ≤ θ(G). When the SDP value meets the
//! independence number, the capacity is pinned (class-1 graph) without
//! ever touching graph powers.
//!
//! For game graphs there is a closed-form witness candidate
//!
//! ```text
//! Ã = |j⟩⟨j|⊗|j⟩⟨j|⊗(I+X) + a·A(G) + b·I⊗I⊗X,   a = −m, b = α − m,
//! ```
//!
//! whose three terms pairwise commute; its largest eigenvalue is the
//! maximum of `2m² + b + a(2m−1)`, `b − a`, and `−b + a(1−m−‖Φ‖)`, and
//! all three collapse to α precisely when α = ½m(m+‖Φ‖) — the value
//! forced by a ±1 pair in the top singular space of Φ.

use crate::certificate::pm_one_singular_check;
use crate::error::Error;
use crate::game::XorGame;
use crate::graph::{build_graph_rules, independence_number, GameGraph, Graph, INDEPENDENCE_CAP};
use crate::numerics::{svd, sym_eig, RealMatrix, SymmetricMatrix};
use crate::sdp::{solve_eigmin, EigMinProgram, SdpSolution};
use crate::Result;

/// Tolerance for declaring the integer α equal to the SDP θ.
pub const CLASS1_TOL: f64 = 1e-5;

/// θ(G) by SDP over the graph's edge pattern. The returned solution's
/// `primal_value` is θ; its `primal_matrix` is the optimal Ã.
pub fn lovasz_theta(graph: &Graph, tol: f64) -> Result<SdpSolution> {
    let program = EigMinProgram::new(graph.n(), graph.edges())?;
    solve_eigmin(&program, tol)
}

/// The closed-form witness evaluated at one game graph.
#[derive(Debug, Clone)]
pub struct ThetaWitness {
    pub a: f64,
    pub b: f64,
    pub matrix: SymmetricMatrix,
    pub lambda_max: f64,
    /// `2m² + b + a(2m−1)`, `b − a`, `−b + a(1−m−‖Φ‖)`.
    pub candidate_eigenvalues: [f64; 3],
    /// Largest entry of any pairwise commutator of the three terms.
    pub max_commutator: f64,
    /// Exact 1s on the diagonal and every non-adjacent pair.
    pub pattern_exact: bool,
    /// Pattern holds, the candidates agree with α, λ_max(Ã) = α within
    /// 1e-8, and the terms commute within 1e-10.
    pub valid: bool,
}

/// Builds Ã with a = −m, b = α − m and checks whether it certifies
/// θ(G) = α. An invalid witness is reported, not an error: games whose
/// top singular space has no ±1 pair land here by design.
pub fn closed_form_witness(gg: &GameGraph, alpha: usize) -> Result<ThetaWitness> {
    let m = gg.m;
    let n = 2 * m * m;
    let a = -(m as f64);
    let b = alpha as f64 - m as f64;

    let adjacency = gg.graph.adjacency_matrix().as_real();
    // I⊗I⊗X: the answer-bit swap, i.e. the perfect-matching indicator.
    let matching = RealMatrix::from_fn(n, n, |u, v| {
        if u / 2 == v / 2 && u != v {
            1.0
        } else {
            0.0
        }
    });
    let jn = RealMatrix::from_fn(n, n, |_, _| 1.0); // |j⟩⟨j|⊗|j⟩⟨j|⊗(I+X)

    let tilde_a = RealMatrix::from_fn(n, n, |u, v| {
        jn.get(u, v) + a * adjacency.get(u, v) + b * matching.get(u, v)
    });

    let mut pattern_exact = true;
    for u in 0..n {
        pattern_exact &= tilde_a.get(u, u) == 1.0;
        for v in (u + 1)..n {
            if !gg.graph.has_edge(u, v) {
                pattern_exact &= tilde_a.get(u, v) == 1.0;
            }
        }
    }

    let phi = RealMatrix::from_fn(m, m, |x, y| gg.sign_matrix[x][y] as f64);
    let phi_norm = svd(&phi)?.singular_values[0];
    let candidates = [
        (n as f64) + b + a * (2.0 * m as f64 - 1.0),
        b - a,
        -b + a * (1.0 - m as f64 - phi_norm),
    ];

    let mut max_commutator = 0.0_f64;
    for (s, t) in [(&jn, &adjacency), (&jn, &matching), (&adjacency, &matching)] {
        let comm = s.matmul(t).sub(&t.matmul(s));
        max_commutator = max_commutator.max(comm.max_abs());
    }

    let sym = SymmetricMatrix::from_fn(n, |i, j| tilde_a.get(i, j));
    let lambda_max = sym_eig(&sym)?.spectrum.max();

    let target = alpha as f64;
    let valid = pattern_exact
        && candidates.iter().all(|c| (c - target).abs() <= 1e-8)
        && (lambda_max - target).abs() <= 1e-8
        && max_commutator <= 1e-10;

    Ok(ThetaWitness {
        a,
        b,
        matrix: sym,
        lambda_max,
        candidate_eigenvalues: candidates,
        max_commutator,
        pattern_exact,
        valid,
    })
}

/// α = θ sandwich certificate for Θ(G) = α(G).
#[derive(Debug, Clone)]
pub struct CapacityCertificate {
    pub alpha: usize,
    /// True when α came from exact branch-and-bound; false when only
    /// the ±1-singular-vector formula α = ½m(m+‖Φ‖) was available.
    pub alpha_exact: bool,
    pub theta: f64,
    pub theta_witness: Option<ThetaWitness>,
    /// `|θ − α| ≤ 1e-5`, certifying Θ(G) = α(G).
    pub class1: bool,
    /// θ − α.
    pub gap: f64,
    pub solver_gap: f64,
    pub solver_iterations: usize,
    pub note: Option<String>,
}

/// Certifies class-1 status of the game graph of a uniform game: α
/// from branch-and-bound (or the Cor-1 formula beyond the exact cap),
/// θ from the SDP, equality within [`CLASS1_TOL`].
pub fn class1_certify(game: &XorGame, sdp_tol: f64) -> Result<CapacityCertificate> {
    if !game.is_uniform() {
        return Err(Error::NotApplicable(
            "class-1 certification uses the uniform-input game graph".into(),
        ));
    }
    let m = game.m();
    let signs = game.sign_rows();
    let gg = build_graph_rules(&signs)?;

    let cor1 = pm_one_singular_check(game)?;
    let alpha_formula: Option<usize> = if cor1.is_pm_one {
        // Uniform game: Φ̃ = Φ/m², so ‖Φ‖ = m²·σ_max(Φ̃); a ±1 top
        // singular pair makes it an integer.
        let phi_norm = cor1.max_singular_value * (m * m) as f64;
        let alpha_f = 0.5 * m as f64 * (m as f64 + phi_norm);
        let rounded = alpha_f.round();
        if (alpha_f - rounded).abs() <= 1e-6 {
            Some(rounded as usize)
        } else {
            None
        }
    } else {
        None
    };

    let mut note = None;
    let (alpha, alpha_exact) = if 2 * m * m <= INDEPENDENCE_CAP {
        let (exact, _) = independence_number(&gg)?;
        if let Some(f) = alpha_formula {
            if f != exact {
                note = Some(format!(
                    "formula α = ½m(m+‖Φ‖) = {f} disagrees with exact search α = {exact}"
                ));
            }
        }
        (exact, true)
    } else if let Some(f) = alpha_formula {
        note = Some(
            "graph beyond the exact-search cap; α from the ±1-singular-vector formula".into(),
        );
        (f, false)
    } else {
        return Err(Error::GraphTooLarge {
            vertices: 2 * m * m,
            cap: INDEPENDENCE_CAP,
        });
    };

    let sol = lovasz_theta(&gg.graph, sdp_tol)?;
    let theta = sol.primal_value;
    let witness = closed_form_witness(&gg, alpha)?;
    let gap = theta - alpha as f64;

    Ok(CapacityCertificate {
        alpha,
        alpha_exact,
        theta,
        theta_witness: Some(witness),
        class1: gap.abs() <= CLASS1_TOL,
        gap,
        solver_gap: sol.gap,
        solver_iterations: sol.iterations,
        note,
    })
}
