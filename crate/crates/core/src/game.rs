//! XOR games: representation, validation, and the exact optimal
//! classical value.
//!
//! A two-party XOR game with `m` inputs per side is described by a sign
//! matrix `signs[x][y] = (−1)^{f(x,y)}` and an input distribution
//! `probs[x][y] = P(x,y)`. The signed probability matrix
//! `Φ̃[x][y] = signs[x][y]·probs[x][y]` carries everything downstream
//! modules need. Probabilities are exact rationals; the classical
//! optimum is found by complete strategy enumeration in exact
//! arithmetic.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::numerics::RealMatrix;
use crate::rational::{format_ratio, parse_ratio, ratio, ratio_int, ratio_sign, ratio_to_f64, Ratio};
use crate::Result;

/// Hard cap on exact classical enumeration: 2^{m−1} sign vectors.
pub const ENUMERATION_CAP: usize = 20;

/// A deterministic one-bit strategy for one player: the sign vector
/// `s ∈ {±1}^m` with `s[x] = (−1)^{answer(x)}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Strategy {
    pub entries: Vec<i8>,
}

impl Strategy {
    pub fn new(entries: Vec<i8>) -> Result<Self> {
        for (i, &e) in entries.iter().enumerate() {
            if e != 1 && e != -1 {
                return Err(Error::InvalidSign { row: i, col: 0, value: e.to_string() });
            }
        }
        Ok(Self { entries })
    }

    /// All-ones strategy `j`.
    pub fn all_plus(m: usize) -> Self {
        Self { entries: vec![1; m] }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.entries.iter().map(|&e| e as f64).collect()
    }

    pub fn flipped(&self) -> Self {
        Self { entries: self.entries.iter().map(|&e| -e).collect() }
    }

    /// Lexicographic sort key with `+1` ordered before `−1`.
    fn key(&self) -> Vec<u8> {
        self.entries.iter().map(|&e| if e == 1 { 0 } else { 1 }).collect()
    }
}

impl std::fmt::Display for Strategy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for &e in &self.entries {
            f.write_str(if e == 1 { "+" } else { "-" })?;
        }
        Ok(())
    }
}

/// A validated XOR game.
#[derive(Debug, Clone, PartialEq)]
pub struct XorGame {
    m: usize,
    signs: Vec<i8>,   // row-major, entries ±1
    probs: Vec<Ratio>, // row-major, nonnegative, sums to 1
    uniform: bool,
}

impl XorGame {
    /// Validates raw sign and probability matrices into a game.
    pub fn new(signs: Vec<Vec<i64>>, probs: Vec<Vec<Ratio>>) -> Result<Self> {
        let m = check_square(&signs, "signs")?;
        let mp = check_square(&probs, "probs")?;
        if m != mp {
            return Err(Error::DimensionMismatch {
                expected: format!("probs of size {m}x{m}"),
                found: format!("{mp}x{mp}"),
            });
        }
        let mut flat_signs = Vec::with_capacity(m * m);
        for (x, row) in signs.iter().enumerate() {
            for (y, &v) in row.iter().enumerate() {
                if v != 1 && v != -1 {
                    return Err(Error::InvalidSign { row: x, col: y, value: v.to_string() });
                }
                flat_signs.push(v as i8);
            }
        }
        let mut flat_probs = Vec::with_capacity(m * m);
        let mut sum = Ratio::zero();
        for (x, row) in probs.into_iter().enumerate() {
            for (y, p) in row.into_iter().enumerate() {
                if p < Ratio::zero() {
                    return Err(Error::NegativeProbability {
                        row: x,
                        col: y,
                        value: format_ratio(&p),
                    });
                }
                sum += &p;
                flat_probs.push(p);
            }
        }
        if sum != Ratio::one() {
            return Err(Error::NotNormalized { sum: format_ratio(&sum) });
        }
        let unit = ratio(1, (m * m) as i64);
        let uniform = flat_probs.iter().all(|p| *p == unit);
        Ok(Self { m, signs: flat_signs, probs: flat_probs, uniform })
    }

    /// Game with the uniform input distribution `P(x,y) = 1/m²`.
    pub fn uniform_from_signs(signs: Vec<Vec<i64>>) -> Result<Self> {
        let m = check_square(&signs, "signs")?;
        let unit = ratio(1, (m * m) as i64);
        let probs = vec![vec![unit; m]; m];
        Self::new(signs, probs)
    }

    #[inline]
    pub fn m(&self) -> usize {
        self.m
    }

    #[inline]
    pub fn sign(&self, x: usize, y: usize) -> i8 {
        self.signs[x * self.m + y]
    }

    #[inline]
    pub fn prob(&self, x: usize, y: usize) -> &Ratio {
        &self.probs[x * self.m + y]
    }

    /// Exact entry `Φ̃[x][y] = sign·prob`.
    pub fn tilde_entry(&self, x: usize, y: usize) -> Ratio {
        let p = &self.probs[x * self.m + y];
        if self.signs[x * self.m + y] == 1 { p.clone() } else { -p.clone() }
    }

    pub fn is_uniform(&self) -> bool {
        self.uniform
    }

    /// The ±1 sign matrix as rows (the game-graph input).
    pub fn sign_rows(&self) -> Vec<Vec<i8>> {
        (0..self.m)
            .map(|x| (0..self.m).map(|y| self.sign(x, y)).collect())
            .collect()
    }

    /// True when some row or column of `Φ̃` is entirely zero (i.e. an
    /// input is never asked); the no-advantage certificate refuses such
    /// games because the diagonals Σ, Λ become singular.
    pub fn has_zero_row_or_col(&self) -> bool {
        let zero_row = (0..self.m)
            .any(|x| (0..self.m).all(|y| self.probs[x * self.m + y].is_zero()));
        let zero_col = (0..self.m)
            .any(|y| (0..self.m).all(|x| self.probs[x * self.m + y].is_zero()));
        zero_row || zero_col
    }

    /// True when some individual input pair has probability zero.
    pub fn has_zero_probs(&self) -> bool {
        self.probs.iter().any(|p| p.is_zero())
    }

    /// Float matrices `Φ̃` and `Φ` used by the spectral modules.
    pub fn matrix(&self) -> GameMatrix {
        let m = self.m;
        let tilde = RealMatrix::from_fn(m, m, |x, y| {
            self.sign(x, y) as f64 * ratio_to_f64(self.prob(x, y))
        });
        let unnormalized = RealMatrix::from_fn(m, m, |x, y| self.sign(x, y) as f64);
        let symmetric = (0..m).all(|x| {
            (x + 1..m).all(|y| self.tilde_entry(x, y) == self.tilde_entry(y, x))
        });
        GameMatrix { m, tilde, unnormalized, symmetric }
    }

    /// Exact bias `s^Aᵀ Φ̃ s^B` of a specific strategy pair.
    pub fn bias_of(&self, alice: &Strategy, bob: &Strategy) -> Result<Ratio> {
        if alice.len() != self.m || bob.len() != self.m {
            return Err(Error::DimensionMismatch {
                expected: format!("strategies of length {}", self.m),
                found: format!("{} and {}", alice.len(), bob.len()),
            });
        }
        let mut acc = Ratio::zero();
        for x in 0..self.m {
            for y in 0..self.m {
                let term = self.tilde_entry(x, y);
                let sgn = alice.entries[x] * bob.entries[y];
                if sgn == 1 {
                    acc += term;
                } else {
                    acc -= term;
                }
            }
        }
        Ok(acc)
    }
}

/// The two float matrices derived from a game: the signed probability
/// matrix `Φ̃` and the bare sign matrix `Φ` (probability factor omitted).
#[derive(Debug, Clone)]
pub struct GameMatrix {
    pub m: usize,
    pub tilde: RealMatrix,
    pub unnormalized: RealMatrix,
    /// Whether `Φ̃` is exactly symmetric.
    pub symmetric: bool,
}

/// Exact optimal classical solution.
#[derive(Debug, Clone)]
pub struct ClassicalSolution {
    /// Optimal bias `ε_c = max s^Aᵀ Φ̃ s^B`, exact.
    pub bias: Ratio,
    /// Optimal winning probability `ω_c = (1+ε_c)/2`, exact.
    pub value: Ratio,
    /// Every optimal pair `(s^A, s^B)`, deduplicated under the global
    /// sign flip by fixing `s^A[0] = +1`, sorted lexicographically.
    pub optimal_pairs: Vec<(Strategy, Strategy)>,
}

impl ClassicalSolution {
    pub fn bias_f64(&self) -> f64 {
        ratio_to_f64(&self.bias)
    }

    pub fn value_f64(&self) -> f64 {
        ratio_to_f64(&self.value)
    }
}

fn check_square<T>(rows: &[Vec<T>], what: &str) -> Result<usize> {
    let m = rows.len();
    if m == 0 {
        return Err(Error::DimensionMismatch {
            expected: format!("nonempty {what} matrix"),
            found: "0 rows".into(),
        });
    }
    for (i, row) in rows.iter().enumerate() {
        if row.len() != m {
            return Err(Error::NotSquare { rows: m, cols: row.len().max(i) });
        }
    }
    Ok(m)
}

/// Validates raw matrices into a game. Probabilities may be omitted to
/// mean the uniform distribution.
pub fn validate_game(signs: Vec<Vec<i64>>, probs: Option<Vec<Vec<Ratio>>>) -> Result<XorGame> {
    match probs {
        Some(p) => XorGame::new(signs, p),
        None => XorGame::uniform_from_signs(signs),
    }
}

/// Exact optimal classical value by enumeration over `2^{m−1}` Alice
/// sign vectors (the global flip `(−s^A, −s^B)` is equivalent, so
/// `s^A[0] = +1` is fixed).
///
/// For each `s^A` the best response is `s^B = sign(Φ̃ᵀ s^A)` entrywise,
/// giving bias `‖Φ̃ᵀ s^A‖₁`; zero entries of `Φ̃ᵀ s^A` leave the
/// corresponding `s^B` entry free, and both signs are emitted so the
/// optimal set is complete.
pub fn classical_value(game: &XorGame) -> Result<ClassicalSolution> {
    classical_value_capped(game, ENUMERATION_CAP)
}

/// As [`classical_value`] with an explicit cap on `m`.
pub fn classical_value_capped(game: &XorGame, cap: usize) -> Result<ClassicalSolution> {
    let m = game.m();
    if m > cap {
        return Err(Error::EnumerationCap { m, cap });
    }

    // Scale Φ̃ by the common denominator once so the whole enumeration
    // runs on integers.
    let mut den = BigInt::one();
    for x in 0..m {
        for y in 0..m {
            den = den.lcm(game.prob(x, y).denom());
        }
    }
    let scaled = |x: usize, y: usize| -> BigInt {
        let p = game.prob(x, y);
        let v = p.numer() * (&den / p.denom());
        if game.sign(x, y) == 1 { v } else { -v }
    };
    let n_int: Vec<BigInt> = (0..m * m).map(|i| scaled(i / m, i % m)).collect();

    // Gray-code walk over s^A with s^A[0] fixed at +1; col[y] tracks
    // (scaled Φ̃ᵀ s^A)[y] and is updated in O(m) per flip.
    let mut s = vec![1i8; m];
    let mut col: Vec<BigInt> = (0..m)
        .map(|y| (0..m).map(|x| n_int[x * m + y].clone()).sum())
        .collect();
    let l1 = |col: &[BigInt]| -> BigInt { col.iter().map(|v| v.abs()).sum() };

    let mut best = l1(&col);
    let mut argmax: Vec<Vec<i8>> = vec![s.clone()];
    let steps: u64 = 1u64 << (m - 1);
    for k in 1..steps {
        let x = k.trailing_zeros() as usize + 1;
        let old = s[x];
        for y in 0..m {
            let delta = &n_int[x * m + y] << 1;
            if old == 1 {
                col[y] -= delta;
            } else {
                col[y] += delta;
            }
        }
        s[x] = -old;
        let sc = l1(&col);
        if sc > best {
            best = sc;
            argmax = vec![s.clone()];
        } else if sc == best {
            argmax.push(s.clone());
        }
    }

    // Expand each maximizing s^A into its complete set of best
    // responses: sign pattern, with zero entries taking both signs.
    let mut pairs: Vec<(Strategy, Strategy)> = Vec::new();
    for sa in argmax {
        let col: Vec<BigInt> = (0..m)
            .map(|y| {
                (0..m)
                    .map(|x| if sa[x] == 1 { n_int[x * m + y].clone() } else { -n_int[x * m + y].clone() })
                    .sum()
            })
            .collect();
        let base: Vec<i8> = col.iter().map(|v| if v.is_negative() { -1 } else { 1 }).collect();
        let zeros: Vec<usize> = (0..m).filter(|&y| col[y].is_zero()).collect();
        let alice = Strategy { entries: sa };
        for mask in 0..(1u64 << zeros.len()) {
            let mut sb = base.clone();
            for (bit, &y) in zeros.iter().enumerate() {
                if (mask >> bit) & 1 == 1 {
                    sb[y] = -1;
                }
            }
            pairs.push((alice.clone(), Strategy { entries: sb }));
        }
    }
    pairs.sort_by_key(|p| (p.0.key(), p.1.key()));
    pairs.dedup();

    let bias = Ratio::new(best, den);
    let value = (Ratio::one() + &bias) / ratio_int(2);
    Ok(ClassicalSolution { bias, value, optimal_pairs: pairs })
}

/// Rebuilds a game from an exact `Φ̃` matrix: signs are the entrywise
/// signs (zero entries get `+1` by convention) and probabilities the
/// absolute values, which must sum to 1.
pub fn game_from_matrix(tilde: &[Vec<Ratio>]) -> Result<XorGame> {
    let m = check_square(tilde, "tilde")?;
    let mut signs = vec![vec![0i64; m]; m];
    let mut probs = vec![vec![Ratio::zero(); m]; m];
    for x in 0..m {
        for y in 0..m {
            let e = &tilde[x][y];
            signs[x][y] = if ratio_sign(e) < 0 { -1 } else { 1 };
            probs[x][y] = e.abs();
        }
    }
    XorGame::new(signs, probs)
}

/// On-disk JSON form of a game:
/// `{"m": 2, "signs": [[1,1],[1,-1]], "probs": [["1/4","1/4"],...]}`
/// with `probs` omitted for the uniform distribution. An optional
/// `name` field annotates generated families.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GameJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    name: Option<String>,
    m: usize,
    signs: Vec<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    probs: Option<Vec<Vec<String>>>,
}

/// Parses the game JSON schema; returns the game and its optional name.
pub fn game_from_json(text: &str) -> Result<(XorGame, Option<String>)> {
    let raw: GameJson =
        serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))?;
    if raw.signs.len() != raw.m {
        return Err(Error::Schema(format!(
            "declared m={} but signs has {} rows",
            raw.m,
            raw.signs.len()
        )));
    }
    let probs = match raw.probs {
        None => None,
        Some(rows) => {
            let mut out = Vec::with_capacity(rows.len());
            for row in rows {
                let parsed: Result<Vec<Ratio>> =
                    row.iter().map(|s| parse_ratio(s)).collect();
                out.push(parsed?);
            }
            Some(out)
        }
    };
    Ok((validate_game(raw.signs, probs)?, raw.name))
}

/// Serializes a game to the JSON schema; uniform games omit `probs`.
pub fn game_to_json(game: &XorGame, name: Option<&str>, pretty: bool) -> String {
    let m = game.m();
    let signs: Vec<Vec<i64>> = (0..m)
        .map(|x| (0..m).map(|y| game.sign(x, y) as i64).collect())
        .collect();
    let probs = if game.is_uniform() {
        None
    } else {
        Some(
            (0..m)
                .map(|x| (0..m).map(|y| format_ratio(game.prob(x, y))).collect())
                .collect(),
        )
    };
    let doc = GameJson { name: name.map(str::to_string), m, signs, probs };
    if pretty {
        serde_json::to_string_pretty(&doc).expect("game serializes")
    } else {
        serde_json::to_string(&doc).expect("game serializes")
    }
}
