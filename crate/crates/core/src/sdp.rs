//! Small dense semidefinite-program solver.
//!
//! Two program shapes are supported, matching the two places the
//! analysis needs convex optimization:
//!
//! * [`ElliptopeProgram`]: maximize `⟨C, X⟩` over the elliptope
//!   `{X ⪰ 0, diag(X) = 1}` — the quantum-bias program; and
//! * [`EigMinProgram`]: minimize `λ_max(Ã)` over symmetric matrices with
//!   a prescribed set of entries fixed to 1 and the rest free — the
//!   Lovász theta program.
//!
//! Both are translated to the standard equality-constrained form
//! `min ⟨C,X⟩ s.t. ⟨A_k,X⟩ = b_k, X ⪰ 0` and handed to a primal-dual
//! interior-point method with Nesterov–Todd scaling and a Mehrotra
//! predictor-corrector step. Every solve returns a dual certificate, so
//! callers can re-verify optimality independently of the solver.
//!
//! The solver is deterministic: no randomness, sequential evaluation,
//! fixed iteration order. Identical inputs give identical outputs.

use nalgebra::DMatrix;

use crate::error::Error;
use crate::numerics::SymmetricMatrix;
use crate::Result;

/// Largest accepted matrix dimension for either program shape.
pub const SDP_DIM_CAP: usize = 256;

/// Default convergence tolerance.
pub const DEFAULT_TOL: f64 = 1e-8;

/// Iteration cap; hitting it yields [`SolveStatus::MaxIterations`].
pub const MAX_ITERATIONS: usize = 200;

/// Maximize `⟨C, X⟩` subject to `diag(X) = 1`, `X ⪰ 0`.
#[derive(Debug, Clone)]
pub struct ElliptopeProgram {
    pub dim: usize,
    pub objective: SymmetricMatrix,
}

impl ElliptopeProgram {
    pub fn new(objective: SymmetricMatrix) -> Self {
        Self { dim: objective.dim(), objective }
    }
}

/// Minimize `λ_max(Ã)` over symmetric `Ã` with every entry fixed to 1
/// except the listed free positions (strict upper-triangle pairs).
/// All diagonal entries are fixed.
#[derive(Debug, Clone)]
pub struct EigMinProgram {
    dim: usize,
    free: Vec<(usize, usize)>,
}

impl EigMinProgram {
    /// `free` lists the symmetric positions (i, j) whose entries are
    /// decision variables; everything else is pinned to 1.
    pub fn new(dim: usize, free: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::DimensionMismatch {
                expected: "dimension ≥ 1".into(),
                found: "0".into(),
            });
        }
        let mut seen = vec![false; dim * dim];
        let mut list = Vec::new();
        for (a, b) in free {
            if a == b || a >= dim || b >= dim {
                return Err(Error::DimensionMismatch {
                    expected: format!("off-diagonal position within dim {dim}"),
                    found: format!("({a},{b})"),
                });
            }
            let (i, j) = if a < b { (a, b) } else { (b, a) };
            if !seen[i * dim + j] {
                seen[i * dim + j] = true;
                list.push((i, j));
            }
        }
        list.sort_unstable();
        Ok(Self { dim, free: list })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn free_positions(&self) -> &[(usize, usize)] {
        &self.free
    }

    /// Complementary fixed positions `i ≤ j`, diagonal included.
    pub fn fixed_positions(&self) -> Vec<(usize, usize)> {
        let mut free = vec![false; self.dim * self.dim];
        for &(i, j) in &self.free {
            free[i * self.dim + j] = true;
        }
        let mut out = Vec::new();
        for i in 0..self.dim {
            for j in i..self.dim {
                if !free[i * self.dim + j] {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// The pattern matrix `P`: 1 at fixed positions, 0 at free ones.
    fn pattern(&self) -> DMatrix<f64> {
        let mut p = DMatrix::from_element(self.dim, self.dim, 1.0);
        for &(i, j) in &self.free {
            p[(i, j)] = 0.0;
            p[(j, i)] = 0.0;
        }
        p
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveStatus {
    /// Feasibility and duality-gap targets met.
    Optimal,
    /// Iteration cap (or numerical breakdown) before convergence; the
    /// returned iterate is the best available.
    MaxIterations,
    /// Objective diverged; the program is judged infeasible/unbounded.
    Infeasible,
}

/// Outcome of a solve, in the sign convention of the *stated* program
/// (maximization for the elliptope shape, minimization for eig-min).
#[derive(Debug, Clone)]
pub struct SdpSolution {
    /// Elliptope: the optimal Gram matrix `X`. Eig-min: the optimal `Ã`
    /// (fixed entries exact by construction).
    pub primal_matrix: SymmetricMatrix,
    pub primal_value: f64,
    pub dual_value: f64,
    /// `|primal_value − dual_value|`.
    pub gap: f64,
    pub iterations: usize,
    pub status: SolveStatus,
    /// Elliptope: the dual vector `y` with `diag(y) ⪰ C` and
    /// `Σy_i = dual_value`. Eig-min: the internal multipliers
    /// (first entry is `−λ_max`).
    pub dual_y: Vec<f64>,
    /// The matrix certifying the other side of the duality pairing:
    /// elliptope → the PSD dual slack `diag(y) − C`; eig-min → the
    /// optimal `X` of the complementary program
    /// (`max ⟨J,X⟩, tr X = 1, X zero on free positions`).
    pub witness: SymmetricMatrix,
}

fn check_tol(tol: f64) -> Result<()> {
    if !(tol > 0.0 && tol <= 1e-4) {
        return Err(Error::InvalidTolerance(tol));
    }
    Ok(())
}

fn check_dim(dim: usize) -> Result<()> {
    if dim > SDP_DIM_CAP {
        return Err(Error::SdpTooLarge { dim, cap: SDP_DIM_CAP });
    }
    Ok(())
}

/// Solves the elliptope maximization. The returned `dual_y` satisfies
/// `diag(dual_y) ⪰ C` (to tolerance) with `Σ dual_y = dual_value`, the
/// textbook certificate that `primal_value` is optimal.
pub fn solve_elliptope(p: &ElliptopeProgram, tol: f64) -> Result<SdpSolution> {
    check_tol(tol)?;
    check_dim(p.dim)?;
    if !p.objective.all_finite() {
        return Err(Error::NonFinite("elliptope objective".into()));
    }
    let n = p.dim;
    // Standard form: min ⟨−C, X⟩ s.t. ⟨E_ii, X⟩ = 1.
    let c_int = p.objective.to_na().scale(-1.0);
    let cons: Vec<ConstraintMatrix> = (0..n).map(ConstraintMatrix::Diag).collect();
    let b = vec![1.0; n];

    // Strictly feasible start: X = I; y chosen so the Gershgorin bound
    // makes Z = C_int − diag(y) strictly diagonally dominant.
    let x0 = DMatrix::identity(n, n);
    let radius = (0..n)
        .map(|i| (0..n).map(|j| c_int[(i, j)].abs()).sum::<f64>())
        .fold(0.0_f64, f64::max);
    let y0 = vec![-(radius + 1.0); n];
    let mut z0 = c_int.clone();
    for i in 0..n {
        z0[(i, i)] += radius + 1.0;
    }

    let raw = ipm(&c_int, &cons, &b, x0, y0, z0, tol)?;
    let dual_y: Vec<f64> = raw.y.iter().map(|v| -v).collect();
    let zslack = SymmetricMatrix::from_na_symmetric(&raw.z);
    Ok(SdpSolution {
        primal_matrix: SymmetricMatrix::from_na_symmetric(&raw.x),
        primal_value: -raw.pobj,
        dual_value: -raw.dobj,
        gap: (raw.pobj - raw.dobj).abs(),
        iterations: raw.iterations,
        status: raw.status,
        dual_y,
        witness: zslack,
    })
}

/// Solves the eig-min program. `primal_matrix` is the optimal `Ã`
/// assembled from the dual multipliers, so its fixed entries equal 1
/// exactly; `witness` is a feasible point of the complementary
/// maximization whose objective matches to within `gap`.
pub fn solve_eigmin(p: &EigMinProgram, tol: f64) -> Result<SdpSolution> {
    check_tol(tol)?;
    check_dim(p.dim)?;
    let n = p.dim;
    let pattern = p.pattern();
    // Standard form: min ⟨−P, X⟩ s.t. tr X = 1, X zero at free positions.
    let c_int = pattern.scale(-1.0);
    let mut cons = vec![ConstraintMatrix::Identity];
    cons.extend(p.free.iter().map(|&(i, j)| ConstraintMatrix::OffDiag(i, j)));
    let mut b = vec![0.0; cons.len()];
    b[0] = 1.0;

    // X = I/n is strictly feasible; t = n+1 dominates λ_max(P).
    let x0 = DMatrix::identity(n, n).scale(1.0 / n as f64);
    let mut y0 = vec![0.0; cons.len()];
    y0[0] = -(n as f64 + 1.0);
    let z0 = DMatrix::identity(n, n).scale(n as f64 + 1.0) - &pattern;

    let raw = ipm(&c_int, &cons, &b, x0, y0, z0, tol)?;
    // Ã = P + Σ_a y_a F_a over the free positions; λ_max(Ã) ≤ −y_0.
    let mut a_tilde = pattern;
    for (idx, &(i, j)) in p.free.iter().enumerate() {
        a_tilde[(i, j)] = raw.y[idx + 1];
        a_tilde[(j, i)] = raw.y[idx + 1];
    }
    Ok(SdpSolution {
        primal_matrix: SymmetricMatrix::from_na_symmetric(&a_tilde),
        primal_value: -raw.dobj,
        dual_value: -raw.pobj,
        gap: (raw.pobj - raw.dobj).abs(),
        iterations: raw.iterations,
        status: raw.status,
        dual_y: raw.y,
        witness: SymmetricMatrix::from_na_symmetric(&raw.x),
    })
}

/// Sparse symmetric constraint matrices arising in the two shapes.
#[derive(Debug, Clone, Copy)]
enum ConstraintMatrix {
    /// `e_i e_iᵀ`
    Diag(usize),
    /// `e_i e_jᵀ + e_j e_iᵀ`, `i < j`
    OffDiag(usize, usize),
    /// `I`
    Identity,
}

impl ConstraintMatrix {
    fn dot(&self, m: &DMatrix<f64>) -> f64 {
        match *self {
            ConstraintMatrix::Diag(i) => m[(i, i)],
            ConstraintMatrix::OffDiag(i, j) => m[(i, j)] + m[(j, i)],
            ConstraintMatrix::Identity => m.trace(),
        }
    }

    fn add_scaled(&self, into: &mut DMatrix<f64>, c: f64) {
        match *self {
            ConstraintMatrix::Diag(i) => into[(i, i)] += c,
            ConstraintMatrix::OffDiag(i, j) => {
                into[(i, j)] += c;
                into[(j, i)] += c;
            }
            ConstraintMatrix::Identity => {
                for i in 0..into.nrows() {
                    into[(i, i)] += c;
                }
            }
        }
    }

    /// `W · A · W` for the NT scaling matrix `W`, exploiting sparsity.
    fn congruence(&self, w: &DMatrix<f64>) -> DMatrix<f64> {
        let n = w.nrows();
        match *self {
            ConstraintMatrix::Diag(i) => {
                let wi = w.column(i);
                DMatrix::from_fn(n, n, |p, q| wi[p] * wi[q])
            }
            ConstraintMatrix::OffDiag(i, j) => {
                let wi = w.column(i);
                let wj = w.column(j);
                DMatrix::from_fn(n, n, |p, q| wi[p] * wj[q] + wj[p] * wi[q])
            }
            ConstraintMatrix::Identity => w * w,
        }
    }
}

struct RawSolution {
    x: DMatrix<f64>,
    y: Vec<f64>,
    z: DMatrix<f64>,
    pobj: f64,
    dobj: f64,
    iterations: usize,
    status: SolveStatus,
}

fn symmetrize(m: &mut DMatrix<f64>) {
    let n = m.nrows();
    for i in 0..n {
        for j in 0..i {
            let v = 0.5 * (m[(i, j)] + m[(j, i)]);
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
    }
}

/// Largest step `α` keeping `S + α·ΔS ⪰ 0`, given the Cholesky factor
/// `L` of `S`; `∞` when `ΔS` is already PSD in the scaled metric.
fn max_step(l: &DMatrix<f64>, delta: &DMatrix<f64>) -> f64 {
    // λ_min of L⁻¹ ΔS L⁻ᵀ.
    let t1 = l
        .solve_lower_triangular(delta)
        .expect("Cholesky factor is nonsingular");
    let mut b = l
        .solve_lower_triangular(&t1.transpose())
        .expect("Cholesky factor is nonsingular");
    symmetrize(&mut b);
    let lam_min = b
        .symmetric_eigen()
        .eigenvalues
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min);
    if lam_min >= -1e-13 {
        f64::INFINITY
    } else {
        -1.0 / lam_min
    }
}

/// Primal-dual predictor-corrector interior-point method with NT
/// scaling on `min ⟨C,X⟩ s.t. ⟨A_k,X⟩ = b_k, X ⪰ 0`, started from the
/// supplied strictly feasible triple.
fn ipm(
    c: &DMatrix<f64>,
    cons: &[ConstraintMatrix],
    b: &[f64],
    mut x: DMatrix<f64>,
    mut y: Vec<f64>,
    mut z: DMatrix<f64>,
    tol: f64,
) -> Result<RawSolution> {
    let n = x.nrows();
    let k = cons.len();
    let c_scale = 1.0 + c.amax();
    let b_scale = 1.0 + b.iter().fold(0.0_f64, |m, v| m.max(v.abs()));

    let mut status = SolveStatus::MaxIterations;
    let mut iterations = 0;

    for iter in 0..MAX_ITERATIONS {
        iterations = iter;
        let pobj = c.dot(&x);
        let dobj: f64 = b.iter().zip(&y).map(|(bi, yi)| bi * yi).sum();

        // Residuals (stay ~0 from the feasible start, but recomputed and
        // folded back in every iteration for numerical hygiene).
        let rp: Vec<f64> = cons
            .iter()
            .zip(b)
            .map(|(a, bi)| bi - a.dot(&x))
            .collect();
        let mut rd = c - &z;
        for (a, yi) in cons.iter().zip(&y) {
            a.add_scaled(&mut rd, -yi);
        }

        if !pobj.is_finite() || !dobj.is_finite() {
            status = SolveStatus::Infeasible;
            break;
        }
        if pobj.abs().max(dobj.abs()) > 1e14 {
            status = SolveStatus::Infeasible;
            break;
        }

        let mu = x.dot(&z) / n as f64;
        let obj_scale = 1.0 + pobj.abs().max(dobj.abs());
        let rp_norm = rp.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        if mu * n as f64 <= tol * obj_scale
            && (pobj - dobj).abs() <= tol * obj_scale
            && rp_norm <= tol * b_scale
            && rd.amax() <= tol * c_scale
        {
            status = SolveStatus::Optimal;
            break;
        }

        let Some(chol_x) = x.clone().cholesky() else { break };
        let Some(chol_z) = z.clone().cholesky() else { break };
        let lx = chol_x.l();
        let lz = chol_z.l();

        // NT scaling W = G·Gᵀ with G = Lx·V·S^{-1/2} from the SVD
        // LzᵀLx = U·S·Vᵀ; then W·Z·W = X.
        let svd = (lz.transpose() * &lx).svd(true, true);
        let v_t = svd.v_t.as_ref().expect("V requested");
        let mut g = &lx * v_t.transpose();
        for (col, s) in svd.singular_values.iter().enumerate() {
            if *s <= 0.0 {
                return Err(Error::SolverFailure(
                    "scaling breakdown: singular NT factor".into(),
                ));
            }
            let f = 1.0 / s.sqrt();
            for r in 0..n {
                g[(r, col)] *= f;
            }
        }
        let w = &g * g.transpose();

        // Schur complement M_kl = ⟨A_k, W·A_l·W⟩ (symmetric PD).
        let mut m = DMatrix::zeros(k, k);
        for (kk, a) in cons.iter().enumerate() {
            let t = a.congruence(&w);
            for (ll, al) in cons.iter().enumerate() {
                m[(kk, ll)] = al.dot(&t);
            }
        }
        symmetrize(&mut m);
        let Some(m_chol) = m.clone().cholesky() else {
            break; // Schur matrix lost definiteness: stop with best iterate
        };

        let w_rd_w = &w * &rd * &w;
        let zinv = chol_z.inverse();

        let solve_direction = |rc: &DMatrix<f64>| {
            let rhs = nalgebra::DVector::from_fn(k, |kk, _| {
                rp[kk] - cons[kk].dot(rc) + cons[kk].dot(&w_rd_w)
            });
            let dy = m_chol.solve(&rhs);
            let mut dz = rd.clone();
            for (a, dyk) in cons.iter().zip(dy.iter()) {
                a.add_scaled(&mut dz, -dyk);
            }
            let mut dx = rc - &w * &dz * &w;
            symmetrize(&mut dx);
            (dx, dy, dz)
        };

        // Predictor: aim at zero complementarity.
        let rc_aff = x.scale(-1.0);
        let (dx_aff, _dy_aff, dz_aff) = solve_direction(&rc_aff);
        let ap_aff = (0.98 * max_step(&lx, &dx_aff)).min(1.0);
        let ad_aff = (0.98 * max_step(&lz, &dz_aff)).min(1.0);
        let mu_aff = (&x + dx_aff.scale(ap_aff)).dot(&(&z + dz_aff.scale(ad_aff))) / n as f64;
        let sigma = (mu_aff / mu).powi(3).clamp(1e-8, 0.999_999);

        // Corrector with the second-order Mehrotra term.
        let mut rc = zinv.scale(sigma * mu) - &x;
        let second = &dx_aff * &dz_aff * &zinv;
        let second_sym = (&second + second.transpose()).scale(0.5);
        rc -= second_sym;
        let (dx, dy, dz) = solve_direction(&rc);

        let ap = (0.98 * max_step(&lx, &dx)).min(1.0);
        let ad = (0.98 * max_step(&lz, &dz)).min(1.0);
        x += dx.scale(ap);
        z += dz.scale(ad);
        for (yi, dyk) in y.iter_mut().zip(dy.iter()) {
            *yi += ad * dyk;
        }
        symmetrize(&mut x);
        symmetrize(&mut z);
        iterations = iter + 1;
    }

    let pobj = c.dot(&x);
    let dobj: f64 = b.iter().zip(&y).map(|(bi, yi)| bi * yi).sum();
    Ok(RawSolution { x, y, z, pobj, dobj, iterations, status })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{is_psd, sym_eig};

    fn assert_close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "expected {b}, got {a} (tol {tol})");
    }

    /// Φ̃_s block matrix for a 2×2 game with Φ̃ entries ±1/4.
    fn chsh_block() -> SymmetricMatrix {
        let t = [[0.25, 0.25], [0.25, -0.25]];
        SymmetricMatrix::from_fn(4, |i, j| {
            if i < 2 && j >= 2 {
                0.5 * t[i][j - 2]
            } else if i >= 2 && j < 2 {
                0.5 * t[j][i - 2]
            } else {
                0.0
            }
        })
    }

    #[test]
    fn elliptope_chsh_reaches_tsirelson() {
        let p = ElliptopeProgram::new(chsh_block());
        let sol = solve_elliptope(&p, 1e-9).unwrap();
        assert_eq!(sol.status, SolveStatus::Optimal);
        let target = 2.0_f64.sqrt() / 2.0;
        assert_close(sol.primal_value, target, 1e-7);
        assert_close(sol.dual_value, target, 1e-7);
        assert!(sol.gap <= 1e-7);
        // Primal feasibility.
        for i in 0..4 {
            assert_close(sol.primal_matrix.get(i, i), 1.0, 1e-8);
        }
        assert!(is_psd(&sol.primal_matrix, 1e-7).unwrap());
        // Dual certificate: diag(y) − C ⪰ 0 and Σy = dual value.
        let slack = SymmetricMatrix::from_fn(4, |i, j| {
            (if i == j { sol.dual_y[i] } else { 0.0 }) - chsh_block().get(i, j)
        });
        assert!(is_psd(&slack, 1e-7).unwrap());
        assert_close(sol.dual_y.iter().sum::<f64>(), sol.dual_value, 1e-9);
    }

    #[test]
    fn elliptope_zero_objective() {
        let p = ElliptopeProgram::new(SymmetricMatrix::zeros(3));
        let sol = solve_elliptope(&p, 1e-8).unwrap();
        assert_close(sol.primal_value, 0.0, 1e-7);
    }

    #[test]
    fn elliptope_all_plus_game_value_one() {
        // Φ̃ = J/4 for m = 2: the winning Gram is all-ones.
        let t = [[0.25, 0.25], [0.25, 0.25]];
        let c = SymmetricMatrix::from_fn(4, |i, j| {
            if i < 2 && j >= 2 {
                0.5 * t[i][j - 2]
            } else if i >= 2 && j < 2 {
                0.5 * t[j][i - 2]
            } else {
                0.0
            }
        });
        let sol = solve_elliptope(&ElliptopeProgram::new(c), 1e-8).unwrap();
        assert_close(sol.primal_value, 1.0, 1e-6);
    }

    #[test]
    fn elliptope_dim_one() {
        let c = SymmetricMatrix::diagonal(&[-3.0]);
        let sol = solve_elliptope(&ElliptopeProgram::new(c), 1e-8).unwrap();
        assert_close(sol.primal_value, -3.0, 1e-7);
    }

    #[test]
    fn elliptope_scaling_linearity() {
        let c = SymmetricMatrix::from_fn(5, |i, j| ((i * 7 + j * 3) % 5) as f64 / 5.0 - 0.4);
        let v1 = solve_elliptope(&ElliptopeProgram::new(c.clone()), 1e-9)
            .unwrap()
            .primal_value;
        let scaled = SymmetricMatrix::from_fn(5, |i, j| 2.0 * c.get(i, j));
        let v2 = solve_elliptope(&ElliptopeProgram::new(scaled), 1e-9)
            .unwrap()
            .primal_value;
        assert_close(v2, 2.0 * v1, 1e-8 * (1.0 + v2.abs()));
    }

    #[test]
    fn weak_duality_final_iterate() {
        let c = SymmetricMatrix::from_fn(4, |i, j| if i == j { 0.0 } else { 0.3 });
        let sol = solve_elliptope(&ElliptopeProgram::new(c), 1e-8).unwrap();
        assert!(sol.dual_value >= sol.primal_value - 1e-9);
    }

    fn cycle_free_positions(n: usize) -> Vec<(usize, usize)> {
        (0..n).map(|i| (i, (i + 1) % n)).collect()
    }

    #[test]
    fn eigmin_five_cycle_sqrt5() {
        let p = EigMinProgram::new(5, cycle_free_positions(5)).unwrap();
        let sol = solve_eigmin(&p, 1e-9).unwrap();
        assert_eq!(sol.status, SolveStatus::Optimal);
        assert_close(sol.primal_value, 5.0_f64.sqrt(), 1e-6);
        // Fixed entries are exact 1s; λ_max of the returned Ã matches.
        assert_eq!(sol.primal_matrix.get(0, 0), 1.0);
        assert_eq!(sol.primal_matrix.get(0, 2), 1.0);
        let lam = sym_eig(&sol.primal_matrix).unwrap().spectrum.max();
        assert_close(lam, sol.primal_value, 1e-6);
        // α(C₅) = 2 ≤ θ ≤ 5 sandwich.
        assert!(sol.primal_value >= 2.0 - 1e-6 && sol.primal_value <= 5.0 + 1e-6);
    }

    #[test]
    fn eigmin_complete_graph_value_one() {
        let mut free = Vec::new();
        for i in 0..4 {
            for j in (i + 1)..4 {
                free.push((i, j));
            }
        }
        let sol = solve_eigmin(&EigMinProgram::new(4, free).unwrap(), 1e-8).unwrap();
        assert_close(sol.primal_value, 1.0, 1e-6);
    }

    #[test]
    fn eigmin_empty_graph_value_n() {
        let sol = solve_eigmin(&EigMinProgram::new(5, Vec::new()).unwrap(), 1e-8).unwrap();
        assert_close(sol.primal_value, 5.0, 1e-8 * 6.0);
    }

    #[test]
    fn eigmin_witness_is_feasible_certificate() {
        let p = EigMinProgram::new(5, cycle_free_positions(5)).unwrap();
        let sol = solve_eigmin(&p, 1e-9).unwrap();
        let w = &sol.witness;
        assert!(is_psd(w, 1e-7).unwrap());
        assert_close(w.trace(), 1.0, 1e-7);
        for &(i, j) in p.free_positions() {
            assert!(w.get(i, j).abs() <= 1e-7);
        }
        // ⟨J, W⟩ reaches the optimum from below.
        let j_dot: f64 = (0..5)
            .map(|i| (0..5).map(|j| w.get(i, j)).sum::<f64>())
            .sum();
        assert_close(j_dot, sol.primal_value, 1e-6);
    }

    #[test]
    fn determinism_bitwise() {
        let p = ElliptopeProgram::new(chsh_block());
        let a = solve_elliptope(&p, 1e-9).unwrap();
        let b = solve_elliptope(&p, 1e-9).unwrap();
        assert_eq!(a.primal_value.to_bits(), b.primal_value.to_bits());
        assert_eq!(a.iterations, b.iterations);
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(
                    a.primal_matrix.get(i, j).to_bits(),
                    b.primal_matrix.get(i, j).to_bits()
                );
            }
        }
    }

    #[test]
    fn input_validation() {
        let p = ElliptopeProgram::new(SymmetricMatrix::zeros(2));
        assert!(matches!(
            solve_elliptope(&p, 0.0),
            Err(Error::InvalidTolerance(_))
        ));
        assert!(matches!(
            solve_elliptope(&p, 1e-3),
            Err(Error::InvalidTolerance(_))
        ));
        let big = ElliptopeProgram::new(SymmetricMatrix::zeros(257));
        assert!(matches!(
            solve_elliptope(&big, 1e-8),
            Err(Error::SdpTooLarge { .. })
        ));
        assert!(EigMinProgram::new(3, vec![(0, 0)]).is_err());
        assert!(EigMinProgram::new(3, vec![(0, 5)]).is_err());
    }
}
