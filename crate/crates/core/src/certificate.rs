//! Machine-checkable certificates for the absence of quantum advantage.
//!
//! For an optimal classical pair `(s^A, s^B)` define the diagonal
//! matrices
//!
//! ```text
//! Σ = diag( (Φ̃ s^B)_i · s^A_i ),      Λ = diag( (Φ̃ᵀ s^A)_i · s^B_i ).
//! ```
//!
//! The game has no quantum advantage (`ω_q = ω_c`) precisely when, for
//! some optimal pair, Σ and Λ are definite of the same sign and the
//! spectral radius `ρ(Λ⁻¹ Φ̃ᵀ Σ⁻¹ Φ̃)` equals 1: then `diag(½Σ, ½Λ)` is
//! a feasible dual point of the quantum SDP with objective ε_c, pinning
//! the quantum bias to the classical one. Both diagonals are computed
//! in exact rational arithmetic; only the spectral radius is floating
//! point.
//!
//! A simpler sufficient condition: if the top singular space of `Φ̃`
//! contains a ±1 vector pair, the pair itself is an optimal classical
//! strategy with `Σ = Λ = σ_max·I`, and the certificate passes
//! automatically. That check is [`pm_one_singular_check`].

use num_traits::Zero;

use crate::error::Error;
use crate::game::{classical_value, ClassicalSolution, Strategy, XorGame, ENUMERATION_CAP};
use crate::numerics::{svd, sym_eig, RealMatrix, SymmetricMatrix};
use crate::quantum::quantum_value;
use crate::rational::{ratio_sign, ratio_to_f64, Ratio};
use crate::Result;

/// Default tolerance on `|ρ − 1|`.
pub const DEFAULT_CERT_TOL: f64 = 1e-7;

/// Tolerance used when cross-validating the certificate verdict against
/// the SDP values: agreement means `ω_q − ω_c ≤ 1e-6` iff the
/// certificate passes.
pub const AGREEMENT_TOL: f64 = 1e-6;

/// Joint sign pattern of the diagonals Σ and Λ.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Definiteness {
    BothPositive,
    BothNegative,
    /// Mixed signs or an exactly-zero entry on either diagonal.
    Indefinite,
}

/// The certificate evaluated at one optimal strategy pair.
#[derive(Debug, Clone)]
pub struct AdvantageCertificate {
    pub alice: Strategy,
    pub bob: Strategy,
    /// Exact diagonal of Σ.
    pub sigma_diag: Vec<Ratio>,
    /// Exact diagonal of Λ.
    pub lambda_diag: Vec<Ratio>,
    pub definiteness: Definiteness,
    /// `ρ(Λ⁻¹ Φ̃ᵀ Σ⁻¹ Φ̃)`; `NaN` when a diagonal entry is exactly zero.
    pub rho: f64,
    /// `|ρ − 1|`.
    pub rho_deviation: f64,
    /// `|ρ − 1| / max(1, |ρ|)`.
    pub rho_relative_deviation: f64,
    pub passes: bool,
    pub tolerance_used: f64,
}

/// Aggregated verdict over every optimal classical strategy.
#[derive(Debug, Clone)]
pub struct NoAdvantageReport {
    /// True iff some optimal pair certifies `ω_q = ω_c`.
    pub no_advantage: bool,
    /// One certificate per optimal pair, in the deterministic order of
    /// [`ClassicalSolution::optimal_pairs`].
    pub certificates: Vec<AdvantageCertificate>,
    /// Index of the passing certificate (or the closest one by
    /// `rho_deviation` when none passes).
    pub best_index: usize,
    /// Exact classical bias ε_c.
    pub classical_bias: Ratio,
    /// SDP quantum bias ε_q.
    pub quantum_bias: f64,
    /// SDP duality gap at the quantum solve.
    pub quantum_gap: f64,
    /// Whether the certificate verdict matches `ω_q − ω_c ≤ 1e-6`.
    pub sdp_agrees: bool,
    /// Populated when the two disagree; never silently resolved.
    pub inconsistency: Option<String>,
}

/// Result of the ±1-top-singular-vector check.
#[derive(Debug, Clone)]
pub struct PmOneCertificate {
    pub max_singular_value: f64,
    /// Dimension of the top singular space (degenerate values grouped
    /// at relative tolerance 1e-9).
    pub top_space_dim: usize,
    /// Orthonormal bases of the top left/right singular spaces.
    pub top_left: Vec<Vec<f64>>,
    pub top_right: Vec<Vec<f64>>,
    /// True iff the top space contains a pair rescaling to ±1 entries.
    pub is_pm_one: bool,
    /// The certifying pair when found.
    pub matched_pair: Option<(Strategy, Strategy)>,
    /// Set when the game is too large for the complete search; the
    /// check abstains instead of guessing.
    pub indeterminate: bool,
}

fn require_no_zero_lines(game: &XorGame) -> Result<()> {
    if game.has_zero_row_or_col() {
        return Err(Error::ZeroRowOrColumn);
    }
    Ok(())
}

/// Exact diagonals Σ and Λ for a strategy pair.
fn diagonals(game: &XorGame, alice: &Strategy, bob: &Strategy) -> (Vec<Ratio>, Vec<Ratio>) {
    let m = game.m();
    let sigma: Vec<Ratio> = (0..m)
        .map(|i| {
            let mut row = Ratio::zero();
            for y in 0..m {
                let t = game.tilde_entry(i, y);
                if bob.entries[y] == 1 {
                    row += t;
                } else {
                    row -= t;
                }
            }
            if alice.entries[i] == 1 {
                row
            } else {
                -row
            }
        })
        .collect();
    let lambda: Vec<Ratio> = (0..m)
        .map(|i| {
            let mut col = Ratio::zero();
            for x in 0..m {
                let t = game.tilde_entry(x, i);
                if alice.entries[x] == 1 {
                    col += t;
                } else {
                    col -= t;
                }
            }
            if bob.entries[i] == 1 {
                col
            } else {
                -col
            }
        })
        .collect();
    (sigma, lambda)
}

fn definiteness_of(sigma: &[Ratio], lambda: &[Ratio]) -> Definiteness {
    let signs: Vec<i8> = sigma.iter().chain(lambda).map(ratio_sign).collect();
    if signs.iter().all(|&s| s == 1) {
        Definiteness::BothPositive
    } else if signs.iter().all(|&s| s == -1) {
        Definiteness::BothNegative
    } else {
        Definiteness::Indefinite
    }
}

/// `ρ(Λ⁻¹ Φ̃ᵀ Σ⁻¹ Φ̃)` via the similar symmetric matrix
/// `|Λ|^{-1/2} Φ̃ᵀ |Σ|^{-1} Φ̃ |Λ|^{-1/2}` (the sign factors of a
/// definite Σ, Λ cancel in the product).
fn rho_definite(tilde: &RealMatrix, sigma: &[Ratio], lambda: &[Ratio]) -> Result<f64> {
    let m = tilde.rows();
    let sig_abs: Vec<f64> = sigma.iter().map(|r| ratio_to_f64(r).abs()).collect();
    let lam_abs: Vec<f64> = lambda.iter().map(|r| ratio_to_f64(r).abs()).collect();
    // B = Φ̃ᵀ |Σ|⁻¹ Φ̃
    let scaled = RealMatrix::from_fn(m, m, |k, j| tilde.get(k, j) / sig_abs[k]);
    let b = tilde.transpose().matmul(&scaled);
    let t = SymmetricMatrix::from_fn(m, |i, j| {
        b.get(i, j) / (lam_abs[i] * lam_abs[j]).sqrt()
    });
    let eig = sym_eig(&t)?;
    Ok(eig
        .spectrum
        .eigenvalues
        .iter()
        .fold(0.0_f64, |acc, v| acc.max(v.abs())))
}

fn certificate_from_pair(
    game: &XorGame,
    alice: &Strategy,
    bob: &Strategy,
    tol: f64,
) -> Result<AdvantageCertificate> {
    let (sigma, lambda) = diagonals(game, alice, bob);
    let definiteness = definiteness_of(&sigma, &lambda);
    let tilde = game.matrix().tilde;
    let rho = match definiteness {
        Definiteness::Indefinite => f64::NAN,
        _ => rho_definite(&tilde, &sigma, &lambda)?,
    };
    let rho_deviation = (rho - 1.0).abs();
    let passes = definiteness != Definiteness::Indefinite && rho_deviation <= tol;
    Ok(AdvantageCertificate {
        alice: alice.clone(),
        bob: bob.clone(),
        sigma_diag: sigma,
        lambda_diag: lambda,
        definiteness,
        rho,
        rho_deviation,
        rho_relative_deviation: rho_deviation / rho.abs().max(1.0),
        passes,
        tolerance_used: tol,
    })
}

/// Evaluates the certificate at one strategy pair, first verifying the
/// pair is classically optimal.
pub fn strategy_certificate(
    game: &XorGame,
    alice: &Strategy,
    bob: &Strategy,
    tol: f64,
) -> Result<AdvantageCertificate> {
    require_no_zero_lines(game)?;
    let sol = classical_value(game)?;
    let achieved = game.bias_of(alice, bob)?;
    if achieved != sol.bias {
        return Err(Error::NonOptimalStrategy {
            achieved: crate::rational::format_ratio(&achieved),
            optimal: crate::rational::format_ratio(&sol.bias),
        });
    }
    certificate_from_pair(game, alice, bob, tol)
}

/// Evaluates the certificate over *every* optimal classical pair and
/// cross-validates the verdict against the quantum SDP. A pass by any
/// single pair suffices (each passing pair yields a feasible dual point
/// with objective ε_c).
pub fn no_advantage(game: &XorGame, cert_tol: f64, sdp_tol: f64) -> Result<NoAdvantageReport> {
    require_no_zero_lines(game)?;
    let sol: ClassicalSolution = classical_value(game)?;
    let mut certificates = Vec::with_capacity(sol.optimal_pairs.len());
    for (a, b) in &sol.optimal_pairs {
        certificates.push(certificate_from_pair(game, a, b, cert_tol)?);
    }
    let verdict = certificates.iter().any(|c| c.passes);
    let best_index = certificates
        .iter()
        .enumerate()
        .min_by(|(_, x), (_, y)| {
            let kx = (!x.passes, if x.rho_deviation.is_nan() { f64::INFINITY } else { x.rho_deviation });
            let ky = (!y.passes, if y.rho_deviation.is_nan() { f64::INFINITY } else { y.rho_deviation });
            kx.partial_cmp(&ky).unwrap()
        })
        .map(|(i, _)| i)
        .unwrap_or(0);

    let q = quantum_value(game, sdp_tol)?;
    let omega_gap = 0.5 * (q.bias - sol.bias_f64());
    let sdp_says_no_advantage = omega_gap <= AGREEMENT_TOL;
    let sdp_agrees = verdict == sdp_says_no_advantage;
    let inconsistency = if sdp_agrees {
        None
    } else {
        Some(format!(
            "certificate verdict ({}) contradicts SDP: ω_q − ω_c = {omega_gap:.3e} \
             (certificate tolerance {cert_tol:.1e}, agreement tolerance {AGREEMENT_TOL:.1e})",
            if verdict { "no advantage" } else { "advantage" }
        ))
    };
    Ok(NoAdvantageReport {
        no_advantage: verdict,
        certificates,
        best_index,
        classical_bias: sol.bias,
        quantum_bias: q.bias,
        quantum_gap: q.gap,
        sdp_agrees,
        inconsistency,
    })
}

/// Complete search for a ±1 pair in the top singular space of `Φ̃`.
///
/// Any qualifying pair has a ±1 left vector, so enumerating all
/// `2^{m−1}` sign vectors (global sign fixed) and testing membership in
/// the top left space is exhaustive, degenerate spaces included. The
/// right partner is forced: `t = Φ̃ᵀs/σ_max` must itself have ±1
/// entries within 1e-7.
pub fn pm_one_singular_check(game: &XorGame) -> Result<PmOneCertificate> {
    let m = game.m();
    let tilde = game.matrix().tilde;
    let dec = svd(&tilde)?;
    let sigma_max = dec.singular_values[0];
    let dim = dec
        .singular_values
        .iter()
        .take_while(|&&s| s >= sigma_max * (1.0 - 1e-9))
        .count();
    let top_left: Vec<Vec<f64>> = (0..dim).map(|i| dec.left_vector(i)).collect();
    let top_right: Vec<Vec<f64>> = (0..dim).map(|i| dec.right_vector(i)).collect();

    if m > ENUMERATION_CAP {
        return Ok(PmOneCertificate {
            max_singular_value: sigma_max,
            top_space_dim: dim,
            top_left,
            top_right,
            is_pm_one: false,
            matched_pair: None,
            indeterminate: true,
        });
    }

    let mut matched = None;
    'outer: for bits in 0..(1u64 << (m - 1)) {
        let s: Vec<f64> = (0..m)
            .map(|i| {
                if i == 0 || (bits >> (i - 1)) & 1 == 0 {
                    1.0
                } else {
                    -1.0
                }
            })
            .collect();
        // Membership in the top left space: ‖s‖² − ‖proj‖² ≤ tol².
        let proj_sq: f64 = top_left
            .iter()
            .map(|u| {
                let c: f64 = u.iter().zip(&s).map(|(a, b)| a * b).sum();
                c * c
            })
            .sum();
        let residual_sq = (m as f64 - proj_sq).max(0.0);
        if residual_sq.sqrt() > 1e-7 * (m as f64).sqrt() {
            continue;
        }
        // Forced partner t = Φ̃ᵀ s / σ_max must have ±1 entries.
        let mut t = vec![0.0; m];
        for (y, ty) in t.iter_mut().enumerate() {
            *ty = (0..m).map(|x| tilde.get(x, y) * s[x]).sum::<f64>() / sigma_max;
        }
        if t.iter().any(|v| (v.abs() - 1.0).abs() > 1e-7) {
            continue 'outer;
        }
        let alice = Strategy {
            entries: s.iter().map(|&v| if v > 0.0 { 1 } else { -1 }).collect(),
        };
        let bob = Strategy {
            entries: t.iter().map(|&v| if v > 0.0 { 1 } else { -1 }).collect(),
        };
        matched = Some((alice, bob));
        break;
    }

    Ok(PmOneCertificate {
        max_singular_value: sigma_max,
        top_space_dim: dim,
        top_left,
        top_right,
        is_pm_one: matched.is_some(),
        matched_pair: matched,
        indeterminate: false,
    })
}

/// Reduced certificate for symmetric games played symmetrically: with
/// `Φ̃ = Φ̃ᵀ` and `s^B = ±s^A`, the condition collapses to "Σ definite
/// and `ρ(Σ⁻¹Φ̃) = 1`". Must agree with the full certificate verdict.
pub fn symmetric_reduction_check(
    game: &XorGame,
    alice: &Strategy,
    bob: &Strategy,
    tol: f64,
) -> Result<bool> {
    let gm = game.matrix();
    if !gm.symmetric {
        return Err(Error::NotApplicable(
            "the reduced certificate needs a symmetric game matrix".into(),
        ));
    }
    if alice.entries != bob.entries && alice.entries != bob.flipped().entries {
        return Err(Error::NotApplicable(
            "the reduced certificate needs s^B = ±s^A".into(),
        ));
    }
    require_no_zero_lines(game)?;
    let sol = classical_value(game)?;
    let achieved = game.bias_of(alice, bob)?;
    if achieved != sol.bias {
        return Err(Error::NonOptimalStrategy {
            achieved: crate::rational::format_ratio(&achieved),
            optimal: crate::rational::format_ratio(&sol.bias),
        });
    }

    let (sigma, _) = diagonals(game, alice, bob);
    let signs: Vec<i8> = sigma.iter().map(ratio_sign).collect();
    let definite = signs.iter().all(|&s| s == 1) || signs.iter().all(|&s| s == -1);
    if !definite {
        return Ok(false);
    }
    // ρ(Σ⁻¹Φ̃) through the similar symmetric |Σ|^{-1/2} Φ̃ |Σ|^{-1/2}.
    let m = game.m();
    let d: Vec<f64> = sigma.iter().map(|r| ratio_to_f64(r).abs().sqrt()).collect();
    let t = SymmetricMatrix::from_fn(m, |i, j| gm.tilde.get(i, j) / (d[i] * d[j]));
    let rho = sym_eig(&t)?
        .spectrum
        .eigenvalues
        .iter()
        .fold(0.0_f64, |acc, v| acc.max(v.abs()));
    Ok((rho - 1.0).abs() <= tol)
}
