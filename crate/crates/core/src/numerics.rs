//! Dense linear-algebra contracts shared by every module: symmetric
//! eigendecomposition, singular value decomposition, spectral radius,
//! and positive-semidefiniteness testing.
//!
//! All computations are in `f64`; decomposition ordering is made
//! deterministic by explicit descending sorts so that identical inputs
//! always produce identical outputs.

use nalgebra::{Complex, DMatrix};

use crate::error::Error;
use crate::Result;

/// Dense real matrix, row-major storage.
#[derive(Debug, Clone, PartialEq)]
pub struct RealMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<f64>,
}

impl RealMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows >= 1 && cols >= 1, "matrix dimensions must be positive");
        Self { rows, cols, entries: vec![0.0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1.0);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let r = rows.len();
        if r == 0 {
            return Err(Error::DimensionMismatch {
                expected: "at least one row".into(),
                found: "0 rows".into(),
            });
        }
        let c = rows[0].len();
        for (i, row) in rows.iter().enumerate() {
            if row.len() != c {
                return Err(Error::DimensionMismatch {
                    expected: format!("{c} columns"),
                    found: format!("{} columns in row {i}", row.len()),
                });
            }
        }
        Ok(Self::from_fn(r, c, |i, j| rows[i][j]))
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn all_finite(&self) -> bool {
        self.entries.iter().all(|v| v.is_finite())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i))
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|v| v * s).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(-1.0))
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "inner dimensions must agree");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    out.entries[i * other.cols + j] += a * other.get(k, j);
                }
            }
        }
        out
    }

    pub fn matvec(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j) * v[j]).sum())
            .collect()
    }

    /// Kronecker product, row-major convention: `(A ⊗ B)[(i1,i2),(j1,j2)]
    /// = A[i1,j1] B[i2,j2]` with the second index varying fastest.
    pub fn kron(&self, other: &Self) -> Self {
        let mut out = Self::zeros(self.rows * other.rows, self.cols * other.cols);
        for i1 in 0..self.rows {
            for j1 in 0..self.cols {
                let a = self.get(i1, j1);
                if a == 0.0 {
                    continue;
                }
                for i2 in 0..other.rows {
                    for j2 in 0..other.cols {
                        out.set(
                            i1 * other.rows + i2,
                            j1 * other.cols + j2,
                            a * other.get(i2, j2),
                        );
                    }
                }
            }
        }
        out
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    /// Largest singular value.
    pub fn operator_norm(&self) -> Result<f64> {
        Ok(svd(self)?.singular_values.first().copied().unwrap_or(0.0))
    }

    pub(crate) fn to_na(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j))
    }

    pub(crate) fn from_na(m: &DMatrix<f64>) -> Self {
        Self::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
    }
}

/// Dense real symmetric matrix; construction symmetrizes so that
/// `entries[i][j] == entries[j][i]` holds exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricMatrix {
    dim: usize,
    entries: Vec<f64>,
}

impl SymmetricMatrix {
    pub fn zeros(dim: usize) -> Self {
        assert!(dim >= 1, "dimension must be positive");
        Self { dim, entries: vec![0.0; dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.entries[i * dim + i] = 1.0;
        }
        m
    }

    /// Builds from an arbitrary square matrix by averaging `(a_ij + a_ji)/2`.
    pub fn symmetrize(m: &RealMatrix) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::NotSquare { rows: m.rows(), cols: m.cols() });
        }
        let n = m.rows();
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..=i {
                let v = 0.5 * (m.get(i, j) + m.get(j, i));
                out.entries[i * n + j] = v;
                out.entries[j * n + i] = v;
            }
        }
        Ok(out)
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut out = Self::zeros(dim);
        for i in 0..dim {
            for j in 0..=i {
                let v = if i == j { f(i, i) } else { 0.5 * (f(i, j) + f(j, i)) };
                out.entries[i * dim + j] = v;
                out.entries[j * dim + i] = v;
            }
        }
        out
    }

    pub fn diagonal(values: &[f64]) -> Self {
        let mut m = Self::zeros(values.len());
        for (i, v) in values.iter().enumerate() {
            m.entries[i * values.len() + i] = *v;
        }
        m
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.dim + j]
    }

    /// Sets the `(i,j)` and `(j,i)` entries together.
    pub fn set_sym(&mut self, i: usize, j: usize, v: f64) {
        self.entries[i * self.dim + j] = v;
        self.entries[j * self.dim + i] = v;
    }

    pub fn all_finite(&self) -> bool {
        self.entries.iter().all(|v| v.is_finite())
    }

    pub fn as_real(&self) -> RealMatrix {
        RealMatrix::from_fn(self.dim, self.dim, |i, j| self.get(i, j))
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    /// Frobenius inner product `⟨A, B⟩ = Σ A_ij B_ij`.
    pub fn dot(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim);
        self.entries.iter().zip(&other.entries).map(|(a, b)| a * b).sum()
    }

    pub(crate) fn to_na(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.dim, self.dim, |i, j| self.get(i, j))
    }

    pub(crate) fn from_na_symmetric(m: &DMatrix<f64>) -> Self {
        Self::from_fn(m.nrows(), |i, j| 0.5 * (m[(i, j)] + m[(j, i)]))
    }
}

/// Eigenvalues sorted in descending order; multiplicities are implied
/// by repetition.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
}

impl Spectrum {
    pub fn max(&self) -> f64 {
        self.eigenvalues.first().copied().unwrap_or(f64::NEG_INFINITY)
    }

    pub fn min(&self) -> f64 {
        self.eigenvalues.last().copied().unwrap_or(f64::INFINITY)
    }
}

/// Result of a symmetric eigendecomposition: `M = V diag(λ) Vᵀ` with the
/// i-th column of `vectors` paired with `spectrum.eigenvalues[i]`.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub spectrum: Spectrum,
    pub vectors: RealMatrix,
}

impl EigenDecomposition {
    /// Column `i` of the eigenvector matrix.
    pub fn vector(&self, i: usize) -> Vec<f64> {
        (0..self.vectors.rows()).map(|r| self.vectors.get(r, i)).collect()
    }
}

/// Result of a singular value decomposition `M = U diag(σ) Vᵀ`, singular
/// values descending.
#[derive(Debug, Clone)]
pub struct SvdDecomposition {
    pub singular_values: Vec<f64>,
    pub u: RealMatrix,
    pub v_t: RealMatrix,
}

impl SvdDecomposition {
    pub fn left_vector(&self, i: usize) -> Vec<f64> {
        (0..self.u.rows()).map(|r| self.u.get(r, i)).collect()
    }

    pub fn right_vector(&self, i: usize) -> Vec<f64> {
        (0..self.v_t.cols()).map(|c| self.v_t.get(i, c)).collect()
    }
}

/// Symmetric eigendecomposition with eigenvalues sorted descending.
///
/// Post-condition: `‖M v_i − λ_i v_i‖ ≤ 1e-10 ‖M‖` and the eigenvector
/// columns are orthonormal to the same tolerance.
pub fn sym_eig(m: &SymmetricMatrix) -> Result<EigenDecomposition> {
    if !m.all_finite() {
        return Err(Error::NonFinite("symmetric eigendecomposition input".into()));
    }
    let na = m.to_na();
    let se = na.symmetric_eigen();
    let n = m.dim();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        se.eigenvalues[b]
            .partial_cmp(&se.eigenvalues[a])
            .unwrap()
            .then(a.cmp(&b))
    });
    let eigenvalues: Vec<f64> = order.iter().map(|&i| se.eigenvalues[i]).collect();
    let vectors = RealMatrix::from_fn(n, n, |r, c| se.eigenvectors[(r, order[c])]);
    Ok(EigenDecomposition { spectrum: Spectrum { eigenvalues }, vectors })
}

/// Singular value decomposition with values sorted descending.
pub fn svd(m: &RealMatrix) -> Result<SvdDecomposition> {
    if !m.all_finite() {
        return Err(Error::NonFinite("singular value decomposition input".into()));
    }
    let na = m.to_na();
    let mut dec = na.svd(true, true);
    dec.sort_by_singular_values();
    let u = dec.u.expect("requested U");
    let v_t = dec.v_t.expect("requested Vt");
    Ok(SvdDecomposition {
        singular_values: dec.singular_values.iter().copied().collect(),
        u: RealMatrix::from_na(&u),
        v_t: RealMatrix::from_na(&v_t),
    })
}

/// Spectral radius `max |λ|` of a square matrix, eigenvalues taken over ℂ.
pub fn spectral_radius(m: &RealMatrix) -> Result<f64> {
    if !m.is_square() {
        return Err(Error::NotSquare { rows: m.rows(), cols: m.cols() });
    }
    if !m.all_finite() {
        return Err(Error::NonFinite("spectral radius input".into()));
    }
    let eig: Vec<Complex<f64>> = m.to_na().complex_eigenvalues().iter().copied().collect();
    Ok(eig.iter().fold(0.0_f64, |acc, z| acc.max(z.norm())))
}

/// PSD test: true iff the minimum eigenvalue is `≥ −tol·max(1, ‖M‖)`
/// with `‖M‖` the spectral norm.
pub fn is_psd(m: &SymmetricMatrix, tol: f64) -> Result<bool> {
    let eig = sym_eig(m)?;
    let norm = eig
        .spectrum
        .eigenvalues
        .iter()
        .fold(0.0_f64, |acc, v| acc.max(v.abs()));
    Ok(eig.spectrum.min() >= -tol * norm.max(1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn assert_close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "expected {b}, got {a} (tol {tol})");
    }

    #[test]
    fn sym_eig_identity() {
        let eig = sym_eig(&SymmetricMatrix::identity(3)).unwrap();
        assert_eq!(eig.spectrum.eigenvalues, vec![1.0, 1.0, 1.0]);
    }

    #[test]
    fn sym_eig_diagonal() {
        let m = SymmetricMatrix::diagonal(&[5.0, -2.0]);
        let eig = sym_eig(&m).unwrap();
        assert_close(eig.spectrum.eigenvalues[0], 5.0, 1e-12);
        assert_close(eig.spectrum.eigenvalues[1], -2.0, 1e-12);
    }

    #[test]
    fn sym_eig_rank_one_all_ones() {
        let m = SymmetricMatrix::from_fn(2, |_, _| 1.0);
        let eig = sym_eig(&m).unwrap();
        assert_close(eig.spectrum.eigenvalues[0], 2.0, 1e-12);
        assert_close(eig.spectrum.eigenvalues[1], 0.0, 1e-12);
    }

    #[test]
    fn sym_eig_rejects_nan() {
        let mut m = SymmetricMatrix::zeros(2);
        m.set_sym(0, 1, f64::NAN);
        assert!(sym_eig(&m).is_err());
    }

    #[test]
    fn svd_chsh_signs() {
        // ΦᵀΦ = 2·I for the CHSH sign matrix, so both singular values are √2.
        let m = RealMatrix::from_rows(&[vec![1.0, 1.0], vec![1.0, -1.0]]).unwrap();
        let dec = svd(&m).unwrap();
        assert_close(dec.singular_values[0], 2.0_f64.sqrt(), 1e-12);
        assert_close(dec.singular_values[1], 2.0_f64.sqrt(), 1e-12);
    }

    #[test]
    fn svd_rank_one_and_zero() {
        let ones = RealMatrix::from_fn(3, 3, |_, _| 1.0);
        let dec = svd(&ones).unwrap();
        assert_close(dec.singular_values[0], 3.0, 1e-12);
        assert_close(dec.singular_values[1], 0.0, 1e-12);
        assert_close(dec.singular_values[2], 0.0, 1e-12);

        let zero = RealMatrix::zeros(2, 3);
        let dec = svd(&zero).unwrap();
        assert!(dec.singular_values.iter().all(|&s| s == 0.0));
    }

    #[test]
    fn spectral_radius_basics() {
        assert_close(spectral_radius(&RealMatrix::identity(4)).unwrap(), 1.0, 1e-12);
        let d = RealMatrix::from_rows(&[vec![3.0, 0.0], vec![0.0, -5.0]]).unwrap();
        assert_close(spectral_radius(&d).unwrap(), 5.0, 1e-12);
        assert!(spectral_radius(&RealMatrix::zeros(2, 3)).is_err());
    }

    #[test]
    fn spectral_radius_rotation_block() {
        // Complex eigenvalue pair ±i scaled by 2.
        let m = RealMatrix::from_rows(&[vec![0.0, -2.0], vec![2.0, 0.0]]).unwrap();
        assert_close(spectral_radius(&m).unwrap(), 2.0, 1e-10);
    }

    #[test]
    fn is_psd_basics() {
        assert!(is_psd(&SymmetricMatrix::identity(3), 1e-12).unwrap());
        let m = SymmetricMatrix::diagonal(&[1.0, -1.0]);
        assert!(!is_psd(&m, 1e-12).unwrap());
    }

    fn random_symmetric(rng: &mut StdRng, n: usize) -> SymmetricMatrix {
        SymmetricMatrix::from_fn(n, |_, _| rng.random_range(-1.0..1.0))
    }

    #[test]
    fn sym_eig_reconstruction_dims_1_to_64() {
        let mut rng = StdRng::seed_from_u64(7);
        for n in 1..=64 {
            let m = random_symmetric(&mut rng, n);
            let eig = sym_eig(&m).unwrap();
            let v = &eig.vectors;
            let lam = RealMatrix::from_fn(n, n, |i, j| {
                if i == j { eig.spectrum.eigenvalues[i] } else { 0.0 }
            });
            let rebuilt = v.matmul(&lam).matmul(&v.transpose());
            let err = rebuilt.sub(&m.as_real()).frobenius_norm();
            let scale = m.frobenius_norm().max(1e-30);
            assert!(err <= 1e-9 * scale.max(1.0), "dim {n}: residual {err}");
            // Orthonormality of the eigenvector columns.
            let gram = v.transpose().matmul(v);
            let id_err = gram.sub(&RealMatrix::identity(n)).max_abs();
            assert!(id_err <= 1e-10, "dim {n}: orthonormality error {id_err}");
        }
    }

    #[test]
    fn svd_reconstruction_random() {
        let mut rng = StdRng::seed_from_u64(11);
        for &(r, c) in &[(1, 1), (3, 5), (8, 8), (12, 7), (20, 20)] {
            let m = RealMatrix::from_fn(r, c, |_, _| rng.random_range(-1.0..1.0));
            let dec = svd(&m).unwrap();
            let k = r.min(c);
            let sigma = RealMatrix::from_fn(dec.u.cols(), dec.v_t.rows(), |i, j| {
                if i == j && i < k { dec.singular_values[i] } else { 0.0 }
            });
            let rebuilt = dec.u.matmul(&sigma).matmul(&dec.v_t);
            let err = rebuilt.sub(&m).frobenius_norm();
            assert!(err <= 1e-9 * m.frobenius_norm().max(1.0), "{r}x{c}: {err}");
            let descending = dec.singular_values.windows(2).all(|w| w[0] >= w[1]);
            assert!(descending);
            assert!(dec.singular_values.iter().all(|&s| s >= 0.0));
        }
    }

    #[test]
    fn sigma_max_matches_spectral_radius_of_gram_root() {
        let mut rng = StdRng::seed_from_u64(13);
        for n in [2usize, 4, 9] {
            let m = RealMatrix::from_fn(n, n, |_, _| rng.random_range(-1.0..1.0));
            let sigma_max = m.operator_norm().unwrap();
            let gram = SymmetricMatrix::symmetrize(&m.transpose().matmul(&m)).unwrap();
            let top = sym_eig(&gram).unwrap().spectrum.max().max(0.0).sqrt();
            assert_close(sigma_max, top, 1e-9);
        }
    }

    #[test]
    fn spectral_radius_transpose_invariant() {
        let mut rng = StdRng::seed_from_u64(17);
        for n in [2usize, 3, 6, 10] {
            let m = RealMatrix::from_fn(n, n, |_, _| rng.random_range(-1.0..1.0));
            let a = spectral_radius(&m).unwrap();
            let b = spectral_radius(&m.transpose()).unwrap();
            assert_close(a, b, 1e-9);
        }
    }

    /// Independent PSD oracle: diagonally pivoted Cholesky. Runs the
    /// elimination on the largest remaining diagonal entry each step; the
    /// matrix is PSD iff no pivot goes significantly negative and the
    /// trailing block vanishes when pivots do.
    fn psd_by_pivoted_cholesky(m: &SymmetricMatrix, tol: f64) -> bool {
        let n = m.dim();
        let mut a = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                a[i * n + j] = m.get(i, j);
            }
        }
        let scale = m.frobenius_norm().max(1.0);
        let mut active: Vec<usize> = (0..n).collect();
        while !active.is_empty() {
            let &p = active
                .iter()
                .max_by(|&&x, &&y| a[x * n + x].partial_cmp(&a[y * n + y]).unwrap())
                .unwrap();
            let piv = a[p * n + p];
            if piv <= tol * scale {
                // All remaining diagonal entries are ≤ piv; PSD requires the
                // whole trailing block to be numerically zero.
                return active.iter().all(|&i| {
                    active.iter().all(|&j| a[i * n + j].abs() <= 1e-8 * scale)
                });
            }
            active.retain(|&i| i != p);
            for &i in &active {
                for &j in &active {
                    let v = a[i * n + j] - a[i * n + p] * a[p * n + j] / piv;
                    a[i * n + j] = v;
                }
            }
        }
        true
    }

    #[test]
    fn is_psd_agrees_with_pivoted_factorization() {
        let mut rng = StdRng::seed_from_u64(23);
        for trial in 0..200 {
            let n = rng.random_range(1..=8);
            let m = if trial % 2 == 0 {
                // Gram matrix: PSD by construction.
                let g = RealMatrix::from_fn(n, rng.random_range(1..=8), |_, _| {
                    rng.random_range(-1.0..1.0)
                });
                SymmetricMatrix::symmetrize(&g.matmul(&g.transpose())).unwrap()
            } else {
                random_symmetric(&mut rng, n)
            };
            let ours = is_psd(&m, 1e-9).unwrap();
            let oracle = psd_by_pivoted_cholesky(&m, 1e-9);
            assert_eq!(ours, oracle, "disagreement on trial {trial}");
        }
    }
}
