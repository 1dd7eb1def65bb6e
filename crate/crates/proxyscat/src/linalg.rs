//! Dense complex linear algebra: row-major matrices, LU factorization with
//! partial pivoting, and a matrix-free GMRES. These are the only solver
//! primitives the rest of the crate uses.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::par;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Dense row-major complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl DenseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![ZERO; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    /// Build entries row by row; rows are filled in parallel.
    pub fn from_rows<F>(rows: usize, cols: usize, f: F) -> Self
    where
        F: Fn(usize, &mut [Complex64]) + Sync,
    {
        let mut m = Self::zeros(rows, cols);
        par::fill_chunks(&mut m.data, cols, |i, row| f(i, row));
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [Complex64] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [Complex64] {
        &mut self.data
    }

    /// y = A x.
    pub fn apply(&self, x: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(x.len(), self.cols);
        let mut y = vec![ZERO; self.rows];
        par::fill_chunks(&mut y, 1, |i, out| {
            out[0] = dot_unconj(self.row(i), x);
        });
        y
    }

    /// C = A B, rows computed in parallel.
    pub fn matmul(&self, other: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.cols, other.rows);
        let mut c = DenseMatrix::zeros(self.rows, other.cols);
        let n = other.cols;
        par::fill_chunks(&mut c.data, n, |i, crow| {
            for (k, &aik) in self.row(i).iter().enumerate() {
                if aik == ZERO {
                    continue;
                }
                let brow = other.row(k);
                for (j, out) in crow.iter_mut().enumerate() {
                    *out += aik * brow[j];
                }
            }
        });
        c
    }

    /// Scale row i by s.
    pub fn scale_row(&mut self, i: usize, s: Complex64) {
        for v in self.row_mut(i) {
            *v *= s;
        }
    }

    /// Scale column j by s.
    pub fn scale_col(&mut self, j: usize, s: Complex64) {
        let cols = self.cols;
        for i in 0..self.rows {
            self.data[i * cols + j] *= s;
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }
}

impl std::ops::Index<(usize, usize)> for DenseMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for DenseMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.cols + j]
    }
}

/// Unconjugated dot product sum_k a_k b_k.
pub fn dot_unconj(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Conjugated inner product sum_k conj(a_k) b_k.
pub fn dot_conj(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub fn norm2(v: &[Complex64]) -> f64 {
    v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

/// LU factorization with partial pivoting, stored packed.
pub struct LuFactor {
    n: usize,
    lu: DenseMatrix,
    perm: Vec<usize>,
}

/// Factor a square matrix. The trailing update runs in parallel over rows.
pub fn lu_factor(a: &DenseMatrix) -> Result<LuFactor> {
    assert_eq!(a.rows(), a.cols(), "lu_factor requires a square matrix");
    let n = a.rows();
    let mut lu = a.clone();
    let mut perm = vec![0usize; n];
    let scale = lu.max_abs().max(f64::MIN_POSITIVE);
    for k in 0..n {
        // pivot search in column k
        let (mut pmax, mut prow) = (0.0_f64, k);
        for i in k..n {
            let m = lu[(i, k)].norm();
            if m > pmax {
                pmax = m;
                prow = i;
            }
        }
        if pmax <= 1e-14 * scale {
            return Err(Error::Singular { index: k, magnitude: pmax });
        }
        perm[k] = prow;
        if prow != k {
            for j in 0..n {
                let t = lu[(k, j)];
                lu[(k, j)] = lu[(prow, j)];
                lu[(prow, j)] = t;
            }
        }
        let pivot = lu[(k, k)];
        let inv = ONE / pivot;
        let (top, bottom) = lu.data.split_at_mut((k + 1) * n);
        let row_k = &top[k * n..(k + 1) * n];
        par::fill_chunks(bottom, n, |_, row| {
            let f = row[k] * inv;
            row[k] = f;
            for j in (k + 1)..n {
                row[j] -= f * row_k[j];
            }
        });
    }
    Ok(LuFactor { n, lu, perm })
}

impl LuFactor {
    pub fn dim(&self) -> usize {
        self.n
    }

    /// Ratio of largest to smallest |U_kk|; a cheap conditioning indicator.
    pub fn condition_estimate(&self) -> f64 {
        let mut lo = f64::INFINITY;
        let mut hi = 0.0_f64;
        for k in 0..self.n {
            let d = self.lu[(k, k)].norm();
            lo = lo.min(d);
            hi = hi.max(d);
        }
        hi / lo.max(f64::MIN_POSITIVE)
    }

    /// Solve A x = b in place.
    pub fn solve_in_place(&self, b: &mut [Complex64]) {
        assert_eq!(b.len(), self.n);
        for k in 0..self.n {
            b.swap(k, self.perm[k]);
        }
        // forward: L y = P b (unit diagonal)
        for i in 1..self.n {
            let mut acc = b[i];
            let row = self.lu.row(i);
            for j in 0..i {
                acc -= row[j] * b[j];
            }
            b[i] = acc;
        }
        // backward: U x = y
        for i in (0..self.n).rev() {
            let mut acc = b[i];
            let row = self.lu.row(i);
            for j in (i + 1)..self.n {
                acc -= row[j] * b[j];
            }
            b[i] = acc / row[i];
        }
    }

    pub fn solve_vec(&self, b: &[Complex64]) -> Vec<Complex64> {
        let mut x = b.to_vec();
        self.solve_in_place(&mut x);
        x
    }

    /// Solve A X = B column-block-wise; columns run in parallel.
    pub fn solve_mat(&self, b: &DenseMatrix) -> DenseMatrix {
        assert_eq!(b.rows(), self.n);
        let m = b.cols();
        // work column-major for the triangular sweeps, then transpose back
        let mut cols: Vec<Vec<Complex64>> = (0..m)
            .map(|j| (0..self.n).map(|i| b[(i, j)]).collect())
            .collect();
        {
            #[cfg(feature = "parallel")]
            {
                use rayon::prelude::*;
                cols.par_iter_mut().for_each(|c| self.solve_in_place(c));
            }
            #[cfg(not(feature = "parallel"))]
            cols.iter_mut().for_each(|c| self.solve_in_place(c));
        }
        let mut x = DenseMatrix::zeros(self.n, m);
        for (j, c) in cols.iter().enumerate() {
            for i in 0..self.n {
                x[(i, j)] = c[i];
            }
        }
        x
    }
}

/// Convenience: factor and solve A X = B.
pub fn lu_solve(a: &DenseMatrix, b: &DenseMatrix) -> Result<DenseMatrix> {
    Ok(lu_factor(a)?.solve_mat(b))
}

/// Square linear operator contract for the matrix-free solver.
pub trait LinearOp: Sync {
    fn dim(&self) -> usize;
    fn apply(&self, x: &[Complex64], y: &mut [Complex64]);
}

impl LinearOp for DenseMatrix {
    fn dim(&self) -> usize {
        assert_eq!(self.rows(), self.cols());
        self.rows()
    }
    fn apply(&self, x: &[Complex64], y: &mut [Complex64]) {
        y.copy_from_slice(&DenseMatrix::apply(self, x));
    }
}

/// GMRES solution plus the per-iteration relative residual history.
#[derive(Debug, Clone)]
pub struct GmresOutcome {
    pub x: Vec<Complex64>,
    pub residuals: Vec<f64>,
    pub iterations: usize,
}

/// Matrix-free GMRES with modified Gram-Schmidt plus one reorthogonalization
/// pass and Givens-rotation least-squares updates. Full basis unless a
/// restart length is given.
pub fn gmres<O: LinearOp>(
    op: &O,
    b: &[Complex64],
    tol: f64,
    max_iter: usize,
    restart: Option<usize>,
) -> Result<GmresOutcome> {
    let n = op.dim();
    assert_eq!(b.len(), n);
    let bnorm = norm2(b);
    if bnorm == 0.0 {
        return Ok(GmresOutcome { x: vec![ZERO; n], residuals: vec![0.0], iterations: 0 });
    }
    let cycle = restart.unwrap_or(max_iter).max(1);
    let mut x = vec![ZERO; n];
    let mut history = Vec::new();
    let mut total_it = 0usize;

    loop {
        // residual r = b - A x
        let mut r = vec![ZERO; n];
        op.apply(&x, &mut r);
        for i in 0..n {
            r[i] = b[i] - r[i];
        }
        let beta = norm2(&r);
        let rel0 = beta / bnorm;
        if history.is_empty() {
            history.push(rel0);
        }
        if rel0 <= tol {
            return Ok(GmresOutcome { x, residuals: history, iterations: total_it });
        }
        if total_it >= max_iter {
            return Err(Error::NoConvergence {
                iterations: total_it,
                residual: rel0,
                history,
            });
        }

        let m = cycle.min(max_iter - total_it);
        let mut basis: Vec<Vec<Complex64>> = Vec::with_capacity(m + 1);
        basis.push(r.iter().map(|v| v / beta).collect());
        let mut h = vec![vec![ZERO; m]; m + 2]; // (m+1) x m used
        let mut cs = vec![0.0_f64; m];
        let mut sn = vec![ZERO; m];
        let mut g = vec![ZERO; m + 1];
        g[0] = Complex64::new(beta, 0.0);
        let mut k_used = 0;

        for k in 0..m {
            let mut w = vec![ZERO; n];
            op.apply(&basis[k], &mut w);
            // modified Gram-Schmidt
            for (j, v) in basis.iter().enumerate() {
                let hjk = dot_conj(v, &w);
                h[j][k] = hjk;
                for i in 0..n {
                    w[i] -= hjk * v[i];
                }
            }
            // one reorthogonalization pass
            for (j, v) in basis.iter().enumerate() {
                let corr = dot_conj(v, &w);
                h[j][k] += corr;
                for i in 0..n {
                    w[i] -= corr * v[i];
                }
            }
            let wnorm = norm2(&w);
            h[k + 1][k] = Complex64::new(wnorm, 0.0);

            // apply existing rotations to the new column
            for j in 0..k {
                let t = cs[j] * h[j][k] + sn[j] * h[j + 1][k];
                h[j + 1][k] = -sn[j].conj() * h[j][k] + cs[j] * h[j + 1][k];
                h[j][k] = t;
            }
            // new rotation zeroing h[k+1][k]
            let (c, s) = givens(h[k][k], h[k + 1][k]);
            cs[k] = c;
            sn[k] = s;
            h[k][k] = c * h[k][k] + s * h[k + 1][k];
            h[k + 1][k] = ZERO;
            g[k + 1] = -s.conj() * g[k];
            g[k] = Complex64::new(c, 0.0) * g[k];

            total_it += 1;
            k_used = k + 1;
            let rel = g[k + 1].norm() / bnorm;
            history.push(rel);
            if rel <= tol || wnorm <= 1e-300 || total_it >= max_iter {
                break;
            }
            basis.push(w.iter().map(|v| v / wnorm).collect());
        }

        // back-substitute y from the triangularized system, update x
        let mut y = vec![ZERO; k_used];
        for i in (0..k_used).rev() {
            let mut acc = g[i];
            for j in (i + 1)..k_used {
                acc -= h[i][j] * y[j];
            }
            y[i] = acc / h[i][i];
        }
        for (j, yj) in y.iter().enumerate() {
            for i in 0..n {
                x[i] += yj * basis[j][i];
            }
        }

        let rel = history.last().copied().unwrap_or(rel0);
        if rel <= tol {
            return Ok(GmresOutcome { x, residuals: history, iterations: total_it });
        }
        if total_it >= max_iter {
            // recompute the true residual for the error report
            let mut rr = vec![ZERO; n];
            op.apply(&x, &mut rr);
            for i in 0..n {
                rr[i] = b[i] - rr[i];
            }
            return Err(Error::NoConvergence {
                iterations: total_it,
                residual: norm2(&rr) / bnorm,
                history,
            });
        }
        // otherwise restart
    }
}

fn givens(a: Complex64, b: Complex64) -> (f64, Complex64) {
    let an = a.norm();
    let bn = b.norm();
    if bn == 0.0 {
        return (1.0, ZERO);
    }
    if an == 0.0 {
        return (0.0, ONE);
    }
    let rho = (an * an + bn * bn).sqrt();
    let c = an / rho;
    let s = (a / an) * b.conj() / rho;
    (c, s)
}

/// Small deterministic generator for test matrices and perturbations
/// (64-bit LCG, Knuth's MMIX constants).
#[derive(Debug, Clone)]
pub struct Lcg {
    state: u64,
}

impl Lcg {
    pub fn new(seed: u64) -> Self {
        Self { state: seed.wrapping_mul(0x9E3779B97F4A7C15).wrapping_add(1) }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self
            .state
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        self.state
    }

    /// Uniform in [0, 1).
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    /// Uniform in [lo, hi).
    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }

    pub fn next_complex(&mut self) -> Complex64 {
        Complex64::new(self.uniform(-1.0, 1.0), self.uniform(-1.0, 1.0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn random_matrix(n: usize, seed: u64) -> DenseMatrix {
        let mut rng = Lcg::new(seed);
        let mut a = DenseMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                a[(i, j)] = rng.next_complex();
            }
            // diagonal dominance keeps the test matrices well-conditioned
            a[(i, i)] += Complex64::new(4.0, 1.0);
        }
        a
    }

    #[test]
    fn lu_identity_returns_rhs() {
        let a = DenseMatrix::identity(7);
        let mut b = DenseMatrix::zeros(7, 2);
        for i in 0..7 {
            b[(i, 0)] = Complex64::new(i as f64, -1.0);
            b[(i, 1)] = Complex64::new(0.5, i as f64);
        }
        let x = lu_solve(&a, &b).unwrap();
        assert_eq!(x, b);
    }

    #[test]
    fn lu_random_residual() {
        let n = 50;
        let a = random_matrix(n, 3);
        let mut rng = Lcg::new(17);
        let b: Vec<Complex64> = (0..n).map(|_| rng.next_complex()).collect();
        let f = lu_factor(&a).unwrap();
        let x = f.solve_vec(&b);
        let r = a.apply(&x);
        let err: f64 = r.iter().zip(&b).map(|(u, v)| (u - v).norm_sqr()).sum::<f64>().sqrt();
        assert!(err / norm2(&b) <= 1e-12, "residual {err}");
    }

    #[test]
    fn lu_roundtrip_large() {
        let n = 512;
        let a = random_matrix(n, 5);
        let mut rng = Lcg::new(23);
        let b: Vec<Complex64> = (0..n).map(|_| rng.next_complex()).collect();
        let x = lu_factor(&a).unwrap().solve_vec(&b);
        let r = a.apply(&x);
        let err: f64 = r.iter().zip(&b).map(|(u, v)| (u - v).norm_sqr()).sum::<f64>().sqrt();
        assert!(err / norm2(&b) <= 1e-12, "residual {err}");
    }

    #[test]
    fn hilbert_is_flagged_ill_conditioned() {
        let n = 10;
        let mut a = DenseMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                a[(i, j)] = Complex64::new(1.0 / (i as f64 + j as f64 + 1.0), 0.0);
            }
        }
        let f = lu_factor(&a).unwrap();
        assert!(f.condition_estimate() > 1e10, "cond {}", f.condition_estimate());
    }

    #[test]
    fn singular_matrix_reports_pivot() {
        let mut a = DenseMatrix::zeros(3, 3);
        a[(0, 0)] = ONE;
        a[(1, 1)] = ONE;
        // row 2 left zero
        match lu_factor(&a) {
            Err(Error::Singular { index, .. }) => assert_eq!(index, 2),
            other => panic!("expected singular error, got {:?}", other.map(|_| ())),
        }
    }

    #[test]
    fn gmres_identity_one_iteration() {
        let a = DenseMatrix::identity(20);
        let b: Vec<Complex64> = (0..20).map(|i| Complex64::new(1.0 + i as f64, -0.3)).collect();
        let out = gmres(&a, &b, 1e-12, 50, None).unwrap();
        assert!(out.iterations <= 1, "iterations {}", out.iterations);
        for (xi, bi) in out.x.iter().zip(&b) {
            assert!((xi - bi).norm() <= 1e-12);
        }
    }

    #[test]
    fn gmres_three_eigenvalues_three_iterations() {
        let n = 30;
        let mut a = DenseMatrix::zeros(n, n);
        for i in 0..n {
            let lambda = match i % 3 {
                0 => Complex64::new(1.0, 0.0),
                1 => Complex64::new(2.0, 0.5),
                _ => Complex64::new(-1.5, 1.0),
            };
            a[(i, i)] = lambda;
        }
        let mut rng = Lcg::new(9);
        let b: Vec<Complex64> = (0..n).map(|_| rng.next_complex()).collect();
        let out = gmres(&a, &b, 1e-12, 50, None).unwrap();
        assert!(out.iterations <= 3, "iterations {}", out.iterations);
    }

    #[test]
    fn gmres_matches_lu() {
        let n = 100;
        let a = random_matrix(n, 11);
        let mut rng = Lcg::new(13);
        let b: Vec<Complex64> = (0..n).map(|_| rng.next_complex()).collect();
        let xlu = lu_factor(&a).unwrap().solve_vec(&b);
        let out = gmres(&a, &b, 1e-12, 200, None).unwrap();
        let diff: f64 = out
            .x
            .iter()
            .zip(&xlu)
            .map(|(u, v)| (u - v).norm_sqr())
            .sum::<f64>()
            .sqrt();
        assert!(diff / norm2(&xlu) <= 1e-10, "diff {diff}");
    }

    #[test]
    fn gmres_residual_history_non_increasing() {
        let n = 80;
        let a = random_matrix(n, 21);
        let mut rng = Lcg::new(31);
        let b: Vec<Complex64> = (0..n).map(|_| rng.next_complex()).collect();
        let out = gmres(&a, &b, 1e-13, 200, None).unwrap();
        for w in out.residuals.windows(2) {
            assert!(w[1] <= w[0] * (1.0 + 1e-12), "history not monotone: {w:?}");
        }
    }

    #[test]
    fn gmres_restarted_still_converges() {
        // restarted GMRES needs a matrix it can make progress on cycle by
        // cycle; use a diagonally dominant one
        let n = 60;
        let mut a = random_matrix(n, 41);
        let scale = Complex64::new(1.0 / n as f64, 0.0);
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    a[(i, j)] *= scale;
                }
            }
        }
        let mut rng = Lcg::new(43);
        let b: Vec<Complex64> = (0..n).map(|_| rng.next_complex()).collect();
        let out = gmres(&a, &b, 1e-10, 400, Some(15)).unwrap();
        let r = a.apply(&out.x);
        let err: f64 = r.iter().zip(&b).map(|(u, v)| (u - v).norm_sqr()).sum::<f64>().sqrt();
        assert!(err / norm2(&b) <= 1e-10);
    }

    #[test]
    fn gmres_nonconvergence_carries_history() {
        let n = 40;
        let a = random_matrix(n, 51);
        let mut rng = Lcg::new(53);
        let b: Vec<Complex64> = (0..n).map(|_| rng.next_complex()).collect();
        match gmres(&a, &b, 1e-14, 3, None) {
            Err(Error::NoConvergence { iterations, history, .. }) => {
                assert_eq!(iterations, 3);
                assert!(!history.is_empty());
            }
            other => panic!("expected non-convergence, got {:?}", other.map(|_| ())),
        }
    }
}
