//! Generators for the structured game families, each annotated with
//! the properties the construction is supposed to guarantee.
//!
//! Families covered: CHSH; the 4×4 rational example with no quantum
//! advantage despite a non-±1 top singular vector; Hadamard-diagonal
//! (no-local-correlation-style) games; symmetric ±1 matrices with
//! constant row sum ≥ m/2; 4×4 anti-circulants given by their first
//! row (γ₀,γ₁,γ₂,γ₃) with Σ|γ| = ¼; the two-parameter (p,q) pattern
//! with |p|+|q| = ⅛; tensor products; and signed-permutation
//! transforms. All matrices are exact rationals.

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::certificate::pm_one_singular_check;
use crate::error::Error;
use crate::game::{game_from_matrix, XorGame};
use crate::rational::{format_ratio, ratio, Ratio};
use crate::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyKind {
    Chsh,
    ExampleEx,
    Nlc,
    SymmetricRowSum,
    Anticirculant4,
    PqPattern,
    TensorProduct,
    OrthogonalTransform,
}

/// Property a generated game is expected to exhibit; the test harness
/// verifies every tag it can evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PropertyTag {
    /// ±1 top-singular-vector check passes.
    Cor1,
    /// The spectral-radius certificate proves ω_q = ω_c.
    Thm1,
    /// The game graph has θ = α.
    Class1,
    /// ω_q > ω_c strictly.
    QuantumAdvantage,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FamilySpec {
    pub kind: FamilyKind,
    /// Kind-specific parameters, rendered as exact strings.
    pub parameters: BTreeMap<String, String>,
    pub expected: Vec<PropertyTag>,
}

/// A generated game plus its family annotation.
#[derive(Debug, Clone)]
pub struct GeneratedGame {
    pub game: XorGame,
    pub spec: FamilySpec,
    pub note: Option<String>,
}

fn spec_of(
    kind: FamilyKind,
    params: &[(&str, String)],
    expected: Vec<PropertyTag>,
) -> FamilySpec {
    FamilySpec {
        kind,
        parameters: params
            .iter()
            .map(|(k, v)| (k.to_string(), v.clone()))
            .collect(),
        expected,
    }
}

/// The CHSH game: signs [[+,+],[+,−]], uniform inputs.
pub fn gen_chsh() -> GeneratedGame {
    let game = XorGame::uniform_from_signs(vec![vec![1, 1], vec![1, -1]])
        .expect("static CHSH signs are valid");
    GeneratedGame {
        game,
        spec: spec_of(FamilyKind::Chsh, &[], vec![PropertyTag::QuantumAdvantage]),
        note: None,
    }
}

/// The 4×4 example with ω_c = ω_q = 7/8: every entry ±1/16, top
/// singular space free of ±1 vectors.
pub fn gen_example_ex() -> GeneratedGame {
    let game = XorGame::uniform_from_signs(vec![
        vec![1, -1, -1, 1],
        vec![-1, -1, 1, -1],
        vec![-1, 1, -1, -1],
        vec![1, -1, -1, 1],
    ])
    .expect("static example signs are valid");
    GeneratedGame {
        game,
        spec: spec_of(FamilyKind::ExampleEx, &[], vec![PropertyTag::Thm1]),
        note: Some("the ±1-singular-vector check fails for this game by design".into()),
    }
}

/// Sylvester Hadamard matrix with ±1 entries, m a power of two.
fn sylvester(m: usize) -> Vec<Vec<i64>> {
    let mut h = vec![vec![1i64]];
    while h.len() < m {
        let k = h.len();
        let mut next = vec![vec![0i64; 2 * k]; 2 * k];
        for i in 0..k {
            for j in 0..k {
                next[i][j] = h[i][j];
                next[i][j + k] = h[i][j];
                next[i + k][j] = h[i][j];
                next[i + k][j + k] = -h[i][j];
            }
        }
        h = next;
    }
    h
}

/// Game whose `Φ̃` is diagonal in the Hadamard basis:
/// `Φ̃ ∝ H·diag(d)·H` with H the normalized Hadamard matrix, rescaled
/// so the entries' absolute values sum to 1.
pub fn gen_nlc(m: usize, diagonal: &[Ratio]) -> Result<GeneratedGame> {
    if !matches!(m, 2 | 4 | 8 | 16) {
        return Err(Error::InfeasibleFamily(format!(
            "Hadamard-diagonal games need m ∈ {{2, 4, 8, 16}}, got {m}"
        )));
    }
    if diagonal.len() != m {
        return Err(Error::DimensionMismatch {
            expected: m.to_string(),
            found: diagonal.len().to_string(),
        });
    }
    let h = sylvester(m);
    // H·diag(d)·H / m, exactly.
    let mut tilde = vec![vec![Ratio::zero(); m]; m];
    for x in 0..m {
        for y in 0..m {
            let mut e = Ratio::zero();
            for (z, d) in diagonal.iter().enumerate() {
                e += d * ratio(h[x][z] * h[z][y], 1);
            }
            tilde[x][y] = e / ratio(m as i64, 1);
        }
    }
    let total: Ratio = tilde.iter().flatten().map(|e| e.abs()).sum();
    if total.is_zero() {
        return Err(Error::InfeasibleFamily(
            "diagonal produces the zero matrix".into(),
        ));
    }
    for row in tilde.iter_mut() {
        for e in row.iter_mut() {
            *e /= total.clone();
        }
    }
    let game = game_from_matrix(&tilde)?;
    let params: Vec<String> = diagonal.iter().map(format_ratio).collect();
    Ok(GeneratedGame {
        game,
        spec: spec_of(
            FamilyKind::Nlc,
            &[("m", m.to_string()), ("diagonal", params.join(","))],
            vec![PropertyTag::Thm1],
        ),
        note: None,
    })
}

/// Uniform game over a symmetric ±1 matrix with every row summing to
/// `r ≥ m/2` — then the all-ones vector is a maximum singular vector
/// with ±1 entries. The matrix is found as a palindromic circulant.
pub fn gen_symmetric_row_sum(m: usize, r: i64) -> Result<GeneratedGame> {
    if m == 0 || m > 16 {
        return Err(Error::InfeasibleFamily(format!(
            "row-sum family supports 1 ≤ m ≤ 16, got {m}"
        )));
    }
    if 2 * r < m as i64 {
        return Err(Error::InfeasibleFamily(format!(
            "row sum {r} below m/2 = {}/2: the all-ones vector need not dominate",
            m
        )));
    }
    if r > m as i64 || (r - m as i64) % 2 != 0 {
        return Err(Error::InfeasibleFamily(format!(
            "row sum {r} infeasible for m = {m}: need r ≤ m and r ≡ m (mod 2)"
        )));
    }
    // Circulant first row with c_k = c_{m−k}: free slots are c_0,
    // c_1..c_{⌈m/2⌉−1}, and c_{m/2} for even m.
    let half = m / 2;
    let free = 1 + half.saturating_sub(0).min(m - 1); // c_0 plus c_1..c_{half}
    let slots = if m == 1 { 1 } else { free.min(half + 1) };
    for bits in 0..(1u32 << slots) {
        let mut c = vec![0i64; m];
        for k in 0..slots {
            let v = if bits >> k & 1 == 0 { 1 } else { -1 };
            c[k] = v;
            if k > 0 {
                c[m - k] = v;
            }
        }
        if c.iter().sum::<i64>() != r {
            continue;
        }
        let signs: Vec<Vec<i64>> = (0..m)
            .map(|x| (0..m).map(|y| c[(y + m - x) % m]).collect())
            .collect();
        let game = XorGame::uniform_from_signs(signs)?;
        if !pm_one_singular_check(&game)?.is_pm_one {
            continue;
        }
        return Ok(GeneratedGame {
            game,
            spec: spec_of(
                FamilyKind::SymmetricRowSum,
                &[("m", m.to_string()), ("row_sum", r.to_string())],
                vec![PropertyTag::Cor1, PropertyTag::Class1],
            ),
            note: None,
        });
    }
    Err(Error::InfeasibleFamily(format!(
        "no symmetric circulant ±1 matrix with m = {m}, row sum {r}"
    )))
}

/// Exact evaluation of the 4×4 anti-circulant dominance condition
/// `max((Σγ)², (Σγ(−1)^i)²) ≥ (γ₀−γ₂)² + (γ₁−γ₃)²`.
pub fn anticirculant_condition(gammas: &[Ratio; 4]) -> bool {
    let s: Ratio = gammas.iter().cloned().sum();
    let alt = &gammas[0] - &gammas[1] + &gammas[2] - &gammas[3];
    let lhs = (&s * &s).max(&alt * &alt);
    let d02 = &gammas[0] - &gammas[2];
    let d13 = &gammas[1] - &gammas[3];
    let rhs = &d02 * &d02 + &d13 * &d13;
    lhs >= rhs
}

/// Sufficient condition `γ₀γ₂ + γ₁γ₃ ≥ 0` for the dominance condition.
pub fn anticirculant_sufficient(gammas: &[Ratio; 4]) -> bool {
    &gammas[0] * &gammas[2] + &gammas[1] * &gammas[3] >= Ratio::zero()
}

fn anticirculant_matrix(gammas: &[Ratio; 4]) -> Vec<Vec<Ratio>> {
    (0..4)
        .map(|x| (0..4).map(|y| gammas[(x + y) % 4].clone()).collect())
        .collect()
}

/// 4×4 anti-circulant game Φ̃_{x,y} = γ_{(x+y) mod 4}, which makes the
/// all-ones and alternating vectors eigenvectors. Requires Σ|γ| = ¼.
pub fn gen_anticirculant4(gammas: &[Ratio; 4]) -> Result<GeneratedGame> {
    let total: Ratio = gammas.iter().map(|g| g.abs()).sum();
    if total != ratio(1, 4) {
        return Err(Error::NotNormalized {
            sum: format_ratio(&total),
        });
    }
    let game = game_from_matrix(&anticirculant_matrix(gammas))?;
    let condition = anticirculant_condition(gammas);
    let expected = if condition {
        vec![PropertyTag::Thm1]
    } else {
        Vec::new()
    };
    let params: Vec<String> = gammas.iter().map(format_ratio).collect();
    Ok(GeneratedGame {
        game,
        spec: spec_of(
            FamilyKind::Anticirculant4,
            &[
                ("gammas", params.join(",")),
                ("condition_holds", condition.to_string()),
                (
                    "sufficient_holds",
                    anticirculant_sufficient(gammas).to_string(),
                ),
            ],
            expected,
        ),
        note: (!condition)
            .then(|| "dominance condition fails; no-advantage status unresolved".into()),
    })
}

/// The two-parameter pattern
/// `Φ̃ = (p q q −p; q q −p p; q −p p q; −p p q q)` with |p|+|q| = ⅛ —
/// the anti-circulant with first row (p, q, q, −p), which always meets
/// the dominance condition.
pub fn gen_pq_pattern(p: &Ratio, q: &Ratio) -> Result<GeneratedGame> {
    let total = p.abs() + q.abs();
    if total != ratio(1, 8) {
        return Err(Error::NotNormalized {
            sum: format_ratio(&(total * ratio(2, 1))),
        });
    }
    let gammas = [p.clone(), q.clone(), q.clone(), -p.clone()];
    let game = game_from_matrix(&anticirculant_matrix(&gammas))?;
    debug_assert!(anticirculant_condition(&gammas));
    Ok(GeneratedGame {
        game,
        spec: spec_of(
            FamilyKind::PqPattern,
            &[("p", format_ratio(p)), ("q", format_ratio(q))],
            vec![PropertyTag::Thm1],
        ),
        note: None,
    })
}

/// Kronecker product of two games: Φ̃ = Φ̃₁ ⊗ Φ̃₂ on m₁m₂ inputs per
/// side. The ±1-singular-vector property is closed under this product;
/// when an input lacks it, the expectation is downgraded to unknown.
pub fn compose_tensor(g1: &XorGame, g2: &XorGame) -> Result<GeneratedGame> {
    let (m1, m2) = (g1.m(), g2.m());
    let m = m1 * m2;
    let tilde: Vec<Vec<Ratio>> = (0..m)
        .map(|x| {
            (0..m)
                .map(|y| g1.tilde_entry(x / m2, y / m2) * g2.tilde_entry(x % m2, y % m2))
                .collect()
        })
        .collect();
    let game = game_from_matrix(&tilde)?;
    let both_cor1 =
        pm_one_singular_check(g1)?.is_pm_one && pm_one_singular_check(g2)?.is_pm_one;
    let (expected, note) = if both_cor1 {
        (vec![PropertyTag::Cor1], None)
    } else {
        (
            Vec::new(),
            Some("an input fails the ±1-singular-vector check; product status unknown".into()),
        )
    };
    Ok(GeneratedGame {
        game,
        spec: spec_of(
            FamilyKind::TensorProduct,
            &[("m1", m1.to_string()), ("m2", m2.to_string())],
            expected,
        ),
        note,
    })
}

/// A signed permutation: the orthogonal matrix with `sign[i]` at
/// position (i, perm[i]).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignedPermutation {
    perm: Vec<usize>,
    signs: Vec<i8>,
}

impl SignedPermutation {
    pub fn new(perm: Vec<usize>, signs: Vec<i8>) -> Result<Self> {
        let n = perm.len();
        if signs.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n.to_string(),
                found: signs.len().to_string(),
            });
        }
        let mut seen = vec![false; n];
        for &p in &perm {
            if p >= n || seen[p] {
                return Err(Error::Schema(format!(
                    "not a permutation of 0..{n}: {perm:?}"
                )));
            }
            seen[p] = true;
        }
        for (i, &s) in signs.iter().enumerate() {
            if s != 1 && s != -1 {
                return Err(Error::InvalidSign {
                    row: i,
                    col: i,
                    value: s.to_string(),
                });
            }
        }
        Ok(SignedPermutation { perm, signs })
    }

    pub fn identity(n: usize) -> Self {
        SignedPermutation {
            perm: (0..n).collect(),
            signs: vec![1; n],
        }
    }

    pub fn dim(&self) -> usize {
        self.perm.len()
    }
}

/// The game with matrix `U Φ̃ Vᵀ` for signed permutations U, V — the
/// implemented subclass of orthogonal maps carrying ±1 vectors to ±1
/// vectors, so the ±1-singular-vector property survives.
pub fn transform_orthogonal(
    game: &XorGame,
    u: &SignedPermutation,
    v: &SignedPermutation,
) -> Result<GeneratedGame> {
    let m = game.m();
    if u.dim() != m || v.dim() != m {
        return Err(Error::DimensionMismatch {
            expected: m.to_string(),
            found: format!("U: {}, V: {}", u.dim(), v.dim()),
        });
    }
    let tilde: Vec<Vec<Ratio>> = (0..m)
        .map(|x| {
            (0..m)
                .map(|y| {
                    let e = game.tilde_entry(u.perm[x], v.perm[y]);
                    if u.signs[x] * v.signs[y] == 1 {
                        e
                    } else {
                        -e
                    }
                })
                .collect()
        })
        .collect();
    let transformed = game_from_matrix(&tilde)?;
    let cor1_in = pm_one_singular_check(game)?.is_pm_one;
    let (expected, note) = if cor1_in {
        (vec![PropertyTag::Cor1], None)
    } else {
        (
            Vec::new(),
            Some("input fails the ±1-singular-vector check; transform preserves only the matrix norm".into()),
        )
    };
    Ok(GeneratedGame {
        game: transformed,
        spec: spec_of(FamilyKind::OrthogonalTransform, &[], expected),
        note,
    })
}
