//! The game graph of an XOR game and its exact invariants.
//!
//! A game with m×m sign matrix Φ yields a graph on the 2m² vertices
//! (x, y, a) — question pair plus one player's answer bit — where two
//! distinct vertices are adjacent iff
//!
//! 1. x = x′ and a ≠ a′, or
//! 2. y = y′ and (−1)^{a⊕a′} ≠ Φ_{x,y}·Φ_{x′,y}.
//!
//! Adjacent vertices are exactly those that cannot both occur in a
//! winning deterministic strategy, so the independence number satisfies
//! α(G) = m²·ω_c. The graph is (2m−1)-regular and triangle-free, the
//! pairs (x,y,0)–(x,y,1) form a perfect matching, and the adjacency
//! spectrum has the closed form
//!
//! ```text
//! { 2m−1 ×1,  m−1 ×(2m−2),  −1 ×(m−1)²,  1 ×m(m−2),  1−m±λ_z ×1 each }
//! ```
//!
//! with λ_z the singular values of Φ. The same matrix also arises from
//! the operator identity
//!
//! ```text
//! A(G) = I⊗(J−I)⊗X + ½ J⊗I⊗(I+X) − ½ [D(J⊗I)D]⊗(I−X),
//! ```
//!
//! D = Σ Φ_{x,y}|x,y⟩⟨x,y| and X the answer-bit swap; both
//! constructions are implemented and must agree entry for entry.

use crate::error::Error;
use crate::numerics::{svd, sym_eig, RealMatrix, Spectrum, SymmetricMatrix};
use crate::Result;

/// Largest vertex count for exact branch-and-bound independence number.
pub const INDEPENDENCE_CAP: usize = 50;
/// Largest vertex count for graph construction (spectrum work only).
pub const BUILD_CAP: usize = 5000;

/// Simple undirected graph over bitset adjacency rows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    words: usize,
    bits: Vec<u64>,
}

impl Graph {
    pub fn new(n: usize) -> Graph {
        let words = n.div_ceil(64).max(1);
        Graph {
            n,
            words,
            bits: vec![0; n * words],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    fn row(&self, v: usize) -> &[u64] {
        &self.bits[v * self.words..(v + 1) * self.words]
    }

    pub fn add_edge(&mut self, u: usize, v: usize) {
        assert!(u != v && u < self.n && v < self.n, "bad edge ({u},{v})");
        self.bits[u * self.words + v / 64] |= 1 << (v % 64);
        self.bits[v * self.words + u / 64] |= 1 << (u % 64);
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.row(u)[v / 64] >> (v % 64) & 1 == 1
    }

    pub fn degree(&self, v: usize) -> usize {
        self.row(v).iter().map(|w| w.count_ones() as usize).sum()
    }

    /// All edges as (u, v) with u < v, lexicographic.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for u in 0..self.n {
            for v in (u + 1)..self.n {
                if self.has_edge(u, v) {
                    out.push((u, v));
                }
            }
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum::<usize>() / 2
    }

    pub fn adjacency_matrix(&self) -> SymmetricMatrix {
        SymmetricMatrix::from_fn(self.n, |i, j| {
            if i != j && self.has_edge(i, j) {
                1.0
            } else {
                0.0
            }
        })
    }

    pub fn is_regular(&self) -> Option<usize> {
        let d = self.degree(0);
        (1..self.n).all(|v| self.degree(v) == d).then_some(d)
    }

    /// Number of closed 3-walks, `trace(A³)` = 6 × (number of triangles).
    pub fn trace_a3(&self) -> u64 {
        let mut total = 0u64;
        for u in 0..self.n {
            for v in 0..self.n {
                if u != v && self.has_edge(u, v) {
                    total += self
                        .row(u)
                        .iter()
                        .zip(self.row(v))
                        .map(|(a, b)| (a & b).count_ones() as u64)
                        .sum::<u64>();
                }
            }
        }
        total
    }

    pub fn is_triangle_free(&self) -> bool {
        self.trace_a3() == 0
    }

    pub fn cycle(n: usize) -> Graph {
        let mut g = Graph::new(n);
        if n >= 2 {
            for v in 0..n {
                let w = (v + 1) % n;
                if w != v {
                    g.add_edge(v, w);
                }
            }
        }
        g
    }

    pub fn complete(n: usize) -> Graph {
        let mut g = Graph::new(n);
        for u in 0..n {
            for v in (u + 1)..n {
                g.add_edge(u, v);
            }
        }
        g
    }

    pub fn empty(n: usize) -> Graph {
        Graph::new(n)
    }
}

/// The game graph: 2m² vertices (x, y, a) indexed v = (x·m + y)·2 + a.
#[derive(Debug, Clone)]
pub struct GameGraph {
    pub m: usize,
    pub graph: Graph,
    /// The ±1 sign matrix driving edge rule 2.
    pub sign_matrix: Vec<Vec<i8>>,
    /// Set when the signs came from a non-uniform game: the graph then
    /// reflects only the sign pattern, not the probabilities.
    pub note: Option<String>,
}

pub fn vertex_index(m: usize, x: usize, y: usize, a: usize) -> usize {
    (x * m + y) * 2 + a
}

pub fn vertex_label(m: usize, v: usize) -> (usize, usize, usize) {
    let a = v % 2;
    let xy = v / 2;
    (xy / m, xy % m, a)
}

fn validate_signs(signs: &[Vec<i8>]) -> Result<usize> {
    let m = signs.len();
    if m == 0 {
        return Err(Error::NotSquare { rows: 0, cols: 0 });
    }
    for (x, row) in signs.iter().enumerate() {
        if row.len() != m {
            return Err(Error::NotSquare {
                rows: m,
                cols: row.len(),
            });
        }
        for (y, &s) in row.iter().enumerate() {
            if s != 1 && s != -1 {
                return Err(Error::InvalidSign {
                    row: x,
                    col: y,
                    value: s.to_string(),
                });
            }
        }
    }
    if 2 * m * m > BUILD_CAP {
        return Err(Error::GraphTooLarge {
            vertices: 2 * m * m,
            cap: BUILD_CAP,
        });
    }
    Ok(m)
}

/// Builds the game graph directly from the two edge rules.
pub fn build_graph_rules(signs: &[Vec<i8>]) -> Result<GameGraph> {
    let m = validate_signs(signs)?;
    let n = 2 * m * m;
    let mut graph = Graph::new(n);
    for u in 0..n {
        let (x, y, a) = vertex_label(m, u);
        for v in (u + 1)..n {
            let (x2, y2, a2) = vertex_label(m, v);
            let rule1 = x == x2 && a != a2;
            let rule2 = y == y2 && {
                let parity = if a == a2 { 1 } else { -1 };
                parity != (signs[x][y] * signs[x2][y]) as i32
            };
            if rule1 || rule2 {
                graph.add_edge(u, v);
            }
        }
    }
    Ok(GameGraph {
        m,
        graph,
        sign_matrix: signs.to_vec(),
        note: None,
    })
}

/// Builds the same graph from the three-term tensor operator identity,
/// registers ordered (x, y, a).
pub fn build_graph_operator(signs: &[Vec<i8>]) -> Result<GameGraph> {
    let m = validate_signs(signs)?;
    let n = 2 * m * m;
    let im = RealMatrix::identity(m);
    let jm = RealMatrix::from_fn(m, m, |_, _| 1.0);
    let i2 = RealMatrix::identity(2);
    let xm = RealMatrix::from_fn(2, 2, |i, j| if i == j { 0.0 } else { 1.0 });
    let j_minus_i = jm.sub(&im);
    let i_plus_x = i2.add(&xm);
    let i_minus_x = i2.sub(&xm);

    // D(J⊗I)D over the (x,y) registers: entry Φ_{x,y}·Φ_{x′,y}·[y = y′].
    let djid = RealMatrix::from_fn(m * m, m * m, |p, q| {
        let (x, y) = (p / m, p % m);
        let (x2, y2) = (q / m, q % m);
        if y == y2 {
            (signs[x][y] * signs[x2][y]) as f64
        } else {
            0.0
        }
    });

    let t1 = im.kron(&j_minus_i).kron(&xm);
    let t2 = jm.kron(&im).kron(&i_plus_x).scale(0.5);
    let t3 = djid.kron(&i_minus_x).scale(-0.5);
    let a_op = t1.add(&t2).add(&t3);

    let mut graph = Graph::new(n);
    for u in 0..n {
        for v in (u + 1)..n {
            let e = a_op.get(u, v);
            if (e - 1.0).abs() < 1e-12 {
                graph.add_edge(u, v);
            } else if e.abs() >= 1e-12 {
                return Err(Error::SolverFailure(format!(
                    "operator adjacency entry ({u},{v}) = {e}, expected 0 or 1"
                )));
            }
        }
    }
    for v in 0..n {
        if a_op.get(v, v).abs() >= 1e-12 {
            return Err(Error::SolverFailure(format!(
                "operator adjacency diagonal ({v},{v}) = {}, expected 0",
                a_op.get(v, v)
            )));
        }
    }
    Ok(GameGraph {
        m,
        graph,
        sign_matrix: signs.to_vec(),
        note: None,
    })
}

/// Closed-form spectrum versus the eigensolver, plus the eigenvector
/// identities behind it.
#[derive(Debug, Clone)]
pub struct GraphSpectrumReport {
    /// Predicted multiset, grouped as (eigenvalue, multiplicity),
    /// descending.
    pub predicted: Vec<(f64, usize)>,
    /// Eigensolver spectrum of the rule-built adjacency.
    pub computed: Spectrum,
    /// Max elementwise gap between the sorted predicted and computed
    /// multisets.
    pub max_deviation: f64,
    /// Worst residual ‖H₋η − μη‖ over the η_z^± eigenvector checks.
    pub eta_max_residual: f64,
    /// Worst deviation in ⟨λ_z^A|⟨j| D |j⟩|λ_z^B⟩ = λ_z δ_{z,z′}.
    pub neat_trick_max_deviation: f64,
    /// η vectors skipped because m ± λ_z vanished.
    pub eta_skipped: usize,
}

/// Evaluates the closed-form spectrum of the game graph of `signs` and
/// cross-checks it numerically.
pub fn spectrum_formula(signs: &[Vec<i8>]) -> Result<GraphSpectrumReport> {
    let m = validate_signs(signs)?;
    let gg = build_graph_rules(signs)?;
    let computed = sym_eig(&gg.graph.adjacency_matrix())?.spectrum;

    let phi = RealMatrix::from_fn(m, m, |x, y| signs[x][y] as f64);
    let dec = svd(&phi)?;

    let mut expanded: Vec<f64> = Vec::with_capacity(2 * m * m);
    if m == 1 {
        // The multiplicity formulas assume m ≥ 2; the graph is a single
        // edge with spectrum {1, −1}.
        expanded.extend([1.0, -1.0]);
    } else {
        expanded.push((2 * m - 1) as f64);
        expanded.extend(std::iter::repeat_n((m - 1) as f64, 2 * m - 2));
        expanded.extend(std::iter::repeat_n(-1.0, (m - 1) * (m - 1)));
        expanded.extend(std::iter::repeat_n(1.0, m * (m - 2)));
        for z in 0..m {
            let lam = dec.singular_values[z];
            expanded.push(1.0 - m as f64 + lam);
            expanded.push(1.0 - m as f64 - lam);
        }
    }
    expanded.sort_by(|a, b| b.partial_cmp(a).unwrap());
    debug_assert_eq!(expanded.len(), 2 * m * m);

    let max_deviation = expanded
        .iter()
        .zip(&computed.eigenvalues)
        .map(|(p, c)| (p - c).abs())
        .fold(0.0_f64, f64::max);

    // Group for display.
    let mut predicted: Vec<(f64, usize)> = Vec::new();
    for &v in &expanded {
        match predicted.last_mut() {
            Some((head, count)) if (*head - v).abs() <= 1e-9 => *count += 1,
            _ => predicted.push((v, 1)),
        }
    }

    // H₋(D) = −I⊗(J−I) − D(J⊗I)D, the block of A(G) on the X = −1
    // answer sector; η_z^± must be its eigenvectors.
    let mm = m * m;
    let h_minus = RealMatrix::from_fn(mm, mm, |p, q| {
        let (x, y) = (p / m, p % m);
        let (x2, y2) = (q / m, q % m);
        let t1 = if x == x2 && y != y2 { -1.0 } else { 0.0 };
        let t2 = if y == y2 {
            -((signs[x][y] * signs[x2][y]) as f64)
        } else {
            0.0
        };
        t1 + t2
    });

    let mut eta_max_residual = 0.0_f64;
    let mut eta_skipped = 0usize;
    let mut neat_max = 0.0_f64;
    for z in 0..m {
        let lam = dec.singular_values[z];
        let u = dec.left_vector(z);
        let v = dec.right_vector(z);
        // |λ_z^A⟩|j⟩ and D|j⟩|λ_z^B⟩ over the (x,y) register.
        let uj: Vec<f64> = (0..mm).map(|p| u[p / m]).collect();
        let djv: Vec<f64> = (0..mm)
            .map(|p| (signs[p / m][p % m] as f64) * v[p % m])
            .collect();
        for (sign, eig) in [(1.0, 1.0 - m as f64 - lam), (-1.0, 1.0 - m as f64 + lam)] {
            let norm_sq = 2.0 * (m as f64 + sign * lam);
            if norm_sq < 2.0 * 1e-9 {
                eta_skipped += 1;
                continue;
            }
            let scale = norm_sq.sqrt();
            let eta: Vec<f64> = uj
                .iter()
                .zip(&djv)
                .map(|(a, b)| (a + sign * b) / scale)
                .collect();
            let mut residual_sq = 0.0;
            for p in 0..mm {
                let mut he = 0.0;
                for (q, eq) in eta.iter().enumerate() {
                    he += h_minus.get(p, q) * eq;
                }
                residual_sq += (he - eig * eta[p]) * (he - eig * eta[p]);
            }
            eta_max_residual = eta_max_residual.max(residual_sq.sqrt());
        }
        // ⟨λ_z^A|⟨j| D |j⟩|λ_z^B⟩ = u_zᵀ Φ v_{z′} must equal λ_z δ_{z,z′}.
        for z2 in 0..m {
            let v2 = dec.right_vector(z2);
            let mut val = 0.0;
            for (x, &ux) in u.iter().enumerate() {
                for (y, &vy) in v2.iter().enumerate() {
                    val += ux * phi.get(x, y) * vy;
                }
            }
            let target = if z == z2 { lam } else { 0.0 };
            neat_max = neat_max.max((val - target).abs());
        }
    }

    Ok(GraphSpectrumReport {
        predicted,
        computed,
        max_deviation,
        eta_max_residual,
        neat_trick_max_deviation: neat_max,
        eta_skipped,
    })
}

/// Structural invariants of a built game graph.
#[derive(Debug, Clone)]
pub struct StructuralReport {
    pub vertices: usize,
    pub expected_degree: usize,
    /// `Some(d)` iff the graph is d-regular.
    pub regular_degree: Option<usize>,
    pub regular_ok: bool,
    pub trace_a3: u64,
    pub triangle_free: bool,
    pub zero_diagonal: bool,
    /// The explicit perfect matching (x,y,0)–(x,y,1).
    pub matching: Vec<(usize, usize)>,
    pub matching_ok: bool,
    pub all_ok: bool,
}

pub fn structural_checks(gg: &GameGraph) -> StructuralReport {
    let m = gg.m;
    let n = gg.graph.n();
    let expected_degree = 2 * m - 1;
    let regular_degree = gg.graph.is_regular();
    let regular_ok = regular_degree == Some(expected_degree);
    let trace_a3 = gg.graph.trace_a3();
    let triangle_free = trace_a3 == 0;
    let zero_diagonal = (0..n).all(|v| !gg.graph.has_edge(v, v));

    let mut matching = Vec::with_capacity(m * m);
    let mut matching_ok = true;
    for x in 0..m {
        for y in 0..m {
            let u = vertex_index(m, x, y, 0);
            let v = vertex_index(m, x, y, 1);
            matching.push((u, v));
            matching_ok &= gg.graph.has_edge(u, v);
        }
    }
    // Disjointness and full cover hold by construction: the m² pairs
    // partition the 2m² vertex indices.
    let all_ok = regular_ok && triangle_free && zero_diagonal && matching_ok;
    StructuralReport {
        vertices: n,
        expected_degree,
        regular_degree,
        regular_ok,
        trace_a3,
        triangle_free,
        zero_diagonal,
        matching,
        matching_ok,
        all_ok,
    }
}

/// Greedy clique cover of `p`: an independent set meets each clique at
/// most once, so the cover size bounds α from above.
fn clique_cover_bound(adj: &[u64], mut p: u64) -> usize {
    let mut cliques: Vec<u64> = Vec::new();
    while p != 0 {
        let v = p.trailing_zeros() as usize;
        p &= !(1u64 << v);
        let mut placed = false;
        for c in cliques.iter_mut() {
            if *c & !adj[v] == 0 {
                *c |= 1 << v;
                placed = true;
                break;
            }
        }
        if !placed {
            cliques.push(1 << v);
        }
    }
    cliques.len()
}

/// Branch-and-bound for the maximum independent set size within `p`,
/// with early exit once `target` is reached (pass `usize::MAX` for the
/// true maximum).
fn mis_branch(adj: &[u64], p: u64, current: usize, best: &mut usize, target: usize) {
    if *best >= target {
        return;
    }
    if p == 0 {
        *best = (*best).max(current);
        return;
    }
    if current + clique_cover_bound(adj, p) <= *best {
        return;
    }
    // Branch on the candidate of maximum residual degree.
    let mut v = usize::MAX;
    let mut vd = usize::MAX;
    let mut scan = p;
    while scan != 0 {
        let w = scan.trailing_zeros() as usize;
        scan &= !(1u64 << w);
        let d = (adj[w] & p).count_ones() as usize;
        if v == usize::MAX || d > vd {
            v = w;
            vd = d;
        }
    }
    mis_branch(adj, p & !adj[v] & !(1u64 << v), current + 1, best, target);
    mis_branch(adj, p & !(1u64 << v), current, best, target);
}

fn mis_size(adj: &[u64], p: u64, at_least: usize) -> usize {
    let mut best = 0;
    mis_branch(adj, p, 0, &mut best, at_least);
    best
}

/// Exact maximum independent set of a graph with at most
/// [`INDEPENDENCE_CAP`] vertices. Returns (α, witness) where the
/// witness is the lexicographically smallest maximum independent set.
pub fn max_independent_set(g: &Graph) -> Result<(usize, Vec<usize>)> {
    let n = g.n();
    if n > INDEPENDENCE_CAP {
        return Err(Error::GraphTooLarge {
            vertices: n,
            cap: INDEPENDENCE_CAP,
        });
    }
    if n == 0 {
        return Ok((0, Vec::new()));
    }
    let adj: Vec<u64> = (0..n)
        .map(|v| {
            let mut mask = 0u64;
            for u in 0..n {
                if u != v && g.has_edge(v, u) {
                    mask |= 1 << u;
                }
            }
            mask
        })
        .collect();
    let full: u64 = if n == 64 { !0 } else { (1u64 << n) - 1 };
    let alpha = mis_size(&adj, full, usize::MAX);

    // Lexicographically smallest witness: grow greedily in vertex
    // order, keeping v exactly when an α-set through the choices so far
    // still exists.
    let mut witness = Vec::with_capacity(alpha);
    let mut p = full;
    let mut need = alpha;
    for v in 0..n {
        if need == 0 {
            break;
        }
        if p >> v & 1 == 0 {
            continue;
        }
        let above: u64 = if v + 1 >= 64 { 0 } else { full & !((1u64 << (v + 1)) - 1) };
        let rest = p & !adj[v] & above;
        if 1 + mis_size(&adj, rest, need - 1) >= need {
            witness.push(v);
            p = rest;
            need -= 1;
        } else {
            p &= !(1u64 << v);
        }
    }
    debug_assert_eq!(witness.len(), alpha);
    Ok((alpha, witness))
}

/// Exact independence number of a game graph (≤ 50 vertices, m ≤ 5).
pub fn independence_number(gg: &GameGraph) -> Result<(usize, Vec<usize>)> {
    max_independent_set(&gg.graph)
}

/// DOT rendering with vertices named by their (x,y,a) labels.
pub fn to_dot(gg: &GameGraph) -> String {
    let m = gg.m;
    let mut out = String::from("graph game {\n");
    for v in 0..gg.graph.n() {
        let (x, y, a) = vertex_label(m, v);
        out.push_str(&format!("  \"{x},{y},{a}\";\n"));
    }
    for (u, v) in gg.graph.edges() {
        let (x1, y1, a1) = vertex_label(m, u);
        let (x2, y2, a2) = vertex_label(m, v);
        out.push_str(&format!("  \"{x1},{y1},{a1}\" -- \"{x2},{y2},{a2}\";\n"));
    }
    out.push_str("}\n");
    out
}

/// Adjacency matrix as a JSON array of 0/1 rows.
pub fn adjacency_json(gg: &GameGraph) -> String {
    let n = gg.graph.n();
    let rows: Vec<Vec<u8>> = (0..n)
        .map(|u| {
            (0..n)
                .map(|v| u8::from(u != v && gg.graph.has_edge(u, v)))
                .collect()
        })
        .collect();
    serde_json::to_string(&rows).expect("adjacency serializes")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{classical_value, XorGame};
    use crate::rational::ratio_to_f64;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn chsh_signs() -> Vec<Vec<i8>> {
        vec![vec![1, 1], vec![1, -1]]
    }

    fn example_signs() -> Vec<Vec<i8>> {
        vec![
            vec![1, -1, -1, 1],
            vec![-1, -1, 1, -1],
            vec![-1, 1, -1, -1],
            vec![1, -1, -1, 1],
        ]
    }

    fn random_signs(m: usize, rng: &mut StdRng) -> Vec<Vec<i8>> {
        (0..m)
            .map(|_| (0..m).map(|_| if rng.random() { 1 } else { -1 }).collect())
            .collect()
    }

    /// Exhaustive maximum-independent-set oracle for n ≤ 16.
    fn brute_mis(g: &Graph) -> usize {
        let n = g.n();
        assert!(n <= 16);
        let mut best = 0usize;
        for mask in 0u32..(1 << n) {
            let mut ok = true;
            'check: for u in 0..n {
                if mask >> u & 1 == 0 {
                    continue;
                }
                for v in (u + 1)..n {
                    if mask >> v & 1 == 1 && g.has_edge(u, v) {
                        ok = false;
                        break 'check;
                    }
                }
            }
            if ok {
                best = best.max(mask.count_ones() as usize);
            }
        }
        best
    }

    #[test]
    fn m1_graph_is_a_single_edge() {
        let gg = build_graph_rules(&[vec![1]]).unwrap();
        assert_eq!(gg.graph.n(), 2);
        assert!(gg.graph.has_edge(0, 1));
        assert_eq!(gg.graph.is_regular(), Some(1));
        let op = build_graph_operator(&[vec![1]]).unwrap();
        assert_eq!(gg.graph, op.graph);

        let report = spectrum_formula(&[vec![-1]]).unwrap();
        assert_eq!(report.predicted, vec![(1.0, 1), (-1.0, 1)]);
        assert!(report.max_deviation <= 1e-8);

        let s = structural_checks(&gg);
        assert!(s.all_ok);
        assert_eq!(s.matching, vec![(0, 1)]);
    }

    #[test]
    fn chsh_graph_structure_and_alpha() {
        let gg = build_graph_rules(&chsh_signs()).unwrap();
        assert_eq!(gg.graph.n(), 8);
        let s = structural_checks(&gg);
        assert!(s.all_ok, "{s:?}");
        assert_eq!(s.regular_degree, Some(3));
        assert_eq!(s.trace_a3, 0);

        let (alpha, witness) = independence_number(&gg).unwrap();
        assert_eq!(alpha, 3, "α = m²ω_c = 4·(3/4)");
        assert_eq!(alpha, brute_mis(&gg.graph));
        assert_eq!(witness.len(), 3);
        for i in 0..witness.len() {
            for j in (i + 1)..witness.len() {
                assert!(!gg.graph.has_edge(witness[i], witness[j]));
            }
        }
    }

    #[test]
    fn chsh_spectrum_contains_shifted_singular_values() {
        let report = spectrum_formula(&chsh_signs()).unwrap();
        assert!(report.max_deviation <= 1e-8, "{report:?}");
        assert!(report.eta_max_residual <= 1e-8);
        assert!(report.neat_trick_max_deviation <= 1e-8);
        // λ_z = √2 twice → eigenvalues −1 ± √2 with multiplicity 2.
        let s2 = 2.0_f64.sqrt();
        for target in [-1.0 + s2, -1.0 - s2] {
            let count: usize = report
                .computed
                .eigenvalues
                .iter()
                .filter(|&&e| (e - target).abs() <= 1e-8)
                .count();
            assert_eq!(count, 2, "eigenvalue {target} multiplicity");
        }
    }

    #[test]
    fn all_plus_m2_alpha_and_spectrum() {
        let signs = vec![vec![1, 1], vec![1, 1]];
        let gg = build_graph_rules(&signs).unwrap();
        let (alpha, _) = independence_number(&gg).unwrap();
        // α = ½m(m+‖Φ‖) = ½·2·(2+2) = 4 for this ±1-singular-vector game.
        assert_eq!(alpha, 4);
        assert_eq!(alpha, brute_mis(&gg.graph));

        // λ = 2, 0 → predicted {3, 1(×2), −1, −1±2, −1(×2 from z=1)}.
        let report = spectrum_formula(&signs).unwrap();
        assert!(report.max_deviation <= 1e-8);
        assert_eq!(report.computed.eigenvalues.len(), 8);
        assert!((report.computed.max() - 3.0).abs() <= 1e-8);
        assert!((report.computed.min() + 3.0).abs() <= 1e-8);
    }

    #[test]
    fn example_4x4_alpha_matches_classical_value() {
        let gg = build_graph_rules(&example_signs()).unwrap();
        assert_eq!(gg.graph.n(), 32);
        let s = structural_checks(&gg);
        assert!(s.all_ok);
        let (alpha, witness) = independence_number(&gg).unwrap();
        assert_eq!(alpha, 14, "α = m²ω_c = 16·(7/8)");
        for i in 0..witness.len() {
            for j in (i + 1)..witness.len() {
                assert!(!gg.graph.has_edge(witness[i], witness[j]));
            }
        }
    }

    #[test]
    fn rule_and_operator_builds_agree() {
        // Exhaustive over all 2×2 sign matrices.
        for bits in 0..16u32 {
            let signs: Vec<Vec<i8>> = (0..2)
                .map(|x| {
                    (0..2)
                        .map(|y| if bits >> (2 * x + y) & 1 == 1 { 1 } else { -1 })
                        .collect()
                })
                .collect();
            let a = build_graph_rules(&signs).unwrap();
            let b = build_graph_operator(&signs).unwrap();
            assert_eq!(a.graph, b.graph, "signs {signs:?}");
        }
        // Randomized m = 3..5.
        let mut rng = StdRng::seed_from_u64(7);
        for m in 3..=5 {
            for _ in 0..20 {
                let signs = random_signs(m, &mut rng);
                let a = build_graph_rules(&signs).unwrap();
                let b = build_graph_operator(&signs).unwrap();
                assert_eq!(a.graph, b.graph);
            }
        }
    }

    #[test]
    fn spectrum_formula_randomized() {
        let mut rng = StdRng::seed_from_u64(23);
        for m in 2..=6 {
            for _ in 0..5 {
                let signs = random_signs(m, &mut rng);
                let report = spectrum_formula(&signs).unwrap();
                assert!(
                    report.max_deviation <= 1e-8,
                    "m={m} deviation {}",
                    report.max_deviation
                );
                assert!(report.eta_max_residual <= 1e-8);
                assert!(report.neat_trick_max_deviation <= 1e-8);
                let total: usize = report.predicted.iter().map(|&(_, c)| c).sum();
                assert_eq!(total, 2 * m * m);
            }
        }
    }

    #[test]
    fn alpha_equals_m2_omega_c_randomized() {
        let mut rng = StdRng::seed_from_u64(99);
        for _ in 0..12 {
            let m = rng.random_range(2..=4);
            let signs = random_signs(m, &mut rng);
            let game = XorGame::uniform_from_signs(
                signs.iter().map(|r| r.iter().map(|&v| v as i64).collect()).collect(),
            )
            .unwrap();
            let sol = classical_value(&game).unwrap();
            let omega = (1.0 + ratio_to_f64(&sol.bias)) / 2.0;
            let gg = build_graph_rules(&signs).unwrap();
            let (alpha, _) = independence_number(&gg).unwrap();
            let expected = (m * m) as f64 * omega;
            assert!(
                (alpha as f64 - expected).abs() < 1e-9,
                "m={m}: α={alpha} vs m²ω_c={expected}"
            );
        }
    }

    #[test]
    fn branch_and_bound_matches_brute_force() {
        // Structured graphs with known α.
        let c5 = Graph::cycle(5);
        assert_eq!(max_independent_set(&c5).unwrap(), (2, vec![0, 2]));
        assert_eq!(max_independent_set(&Graph::cycle(7)).unwrap().0, 3);
        assert_eq!(max_independent_set(&Graph::complete(6)).unwrap().0, 1);
        assert_eq!(max_independent_set(&Graph::empty(9)).unwrap().0, 9);

        // Random graphs against the exhaustive oracle.
        let mut rng = StdRng::seed_from_u64(1234);
        for _ in 0..25 {
            let n = rng.random_range(4..=14);
            let mut g = Graph::new(n);
            for u in 0..n {
                for v in (u + 1)..n {
                    if rng.random::<f64>() < 0.4 {
                        g.add_edge(u, v);
                    }
                }
            }
            let (alpha, witness) = max_independent_set(&g).unwrap();
            assert_eq!(alpha, brute_mis(&g));
            assert_eq!(witness.len(), alpha);
            for i in 0..witness.len() {
                for j in (i + 1)..witness.len() {
                    assert!(!g.has_edge(witness[i], witness[j]));
                }
            }
        }
    }

    #[test]
    fn witness_is_lexicographically_smallest() {
        // C₅ maximum independent sets: {0,2},{0,3},{1,3},{1,4},{2,4}.
        let (_, witness) = max_independent_set(&Graph::cycle(5)).unwrap();
        assert_eq!(witness, vec![0, 2]);

        // A path 0-1-2-3: α = 2, sets {0,2},{0,3},{1,3}; smallest {0,2}.
        let mut path = Graph::new(4);
        path.add_edge(0, 1);
        path.add_edge(1, 2);
        path.add_edge(2, 3);
        assert_eq!(max_independent_set(&path).unwrap().1, vec![0, 2]);
    }

    #[test]
    fn independence_cap_enforced() {
        let mut rng = StdRng::seed_from_u64(5);
        let signs = random_signs(6, &mut rng);
        let gg = build_graph_rules(&signs).unwrap();
        assert!(matches!(
            independence_number(&gg),
            Err(Error::GraphTooLarge { vertices: 72, cap: 50 })
        ));
    }

    #[test]
    fn exports_are_well_formed() {
        let gg = build_graph_rules(&chsh_signs()).unwrap();
        let dot = to_dot(&gg);
        assert!(dot.starts_with("graph game {"));
        assert!(dot.contains("\"0,0,0\""));
        assert!(dot.contains(" -- "));
        // Each of the 12 edges appears once.
        assert_eq!(dot.matches(" -- ").count(), 12);

        let json = adjacency_json(&gg);
        let rows: Vec<Vec<u8>> = serde_json::from_str(&json).unwrap();
        assert_eq!(rows.len(), 8);
        for (u, row) in rows.iter().enumerate() {
            assert_eq!(row.iter().filter(|&&b| b == 1).count(), 3);
            for (v, &b) in row.iter().enumerate() {
                assert_eq!(b == 1, gg.graph.has_edge(u, v) && u != v);
            }
        }
    }

    #[test]
    fn rejects_bad_signs() {
        assert!(matches!(
            build_graph_rules(&[vec![1, 0], vec![1, 1]]),
            Err(Error::InvalidSign { .. })
        ));
        assert!(matches!(
            build_graph_rules(&[vec![1, 1]]),
            Err(Error::NotSquare { .. })
        ));
    }
}
