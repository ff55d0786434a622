//! Dense vectors and matrices, one-sided Jacobi SVD, power-iteration
//! spectral norm, and a seeded deterministic random stream.
//!
//! Everything is f64 and row-major. Matrices here are small (a few
//! hundred entries), so no effort is spent on blocking or BLAS.

use rand_core::{RngCore, SeedableRng};

use crate::error::Error;

/// Dense real vector. Constructors reject non-finite entries.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseVector {
    data: Vec<f64>,
}

impl DenseVector {
    pub fn new(data: Vec<f64>) -> Result<Self, Error> {
        if data.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { data })
    }

    pub fn zeros(n: usize) -> Self {
        Self { data: vec![0.0; n] }
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.data
    }

    pub fn dot(&self, other: &DenseVector) -> f64 {
        debug_assert_eq!(self.len(), other.len());
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a * b)
            .sum()
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn norm_p(&self, p: f64) -> f64 {
        self.data
            .iter()
            .map(|v| v.abs().powf(p))
            .sum::<f64>()
            .powf(1.0 / p)
    }

    /// self + c * other
    pub fn axpy(&self, c: f64, other: &DenseVector) -> DenseVector {
        debug_assert_eq!(self.len(), other.len());
        DenseVector {
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + c * b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &DenseVector) -> DenseVector {
        self.axpy(-1.0, other)
    }

    pub fn scale(&self, c: f64) -> DenseVector {
        DenseVector {
            data: self.data.iter().map(|v| c * v).collect(),
        }
    }

    pub fn dist(&self, other: &DenseVector) -> f64 {
        self.sub(other).norm()
    }
}

/// Dense row-major real matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self, Error> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                got: data.len(),
            });
        }
        if data.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = 1.0;
        }
        m
    }

    pub fn from_diag(diag: &[f64]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = diag[i];
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn transpose(&self) -> DenseMatrix {
        let mut t = DenseMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn matvec(&self, x: &DenseVector) -> DenseVector {
        debug_assert_eq!(self.cols, x.len());
        let xs = x.as_slice();
        let mut out = vec![0.0; self.rows];
        for i in 0..self.rows {
            let row = &self.data[i * self.cols..(i + 1) * self.cols];
            out[i] = row.iter().zip(xs).map(|(a, b)| a * b).sum();
        }
        DenseVector { data: out }
    }

    /// A^T x without forming the transpose.
    pub fn matvec_t(&self, x: &DenseVector) -> DenseVector {
        debug_assert_eq!(self.rows, x.len());
        let xs = x.as_slice();
        let mut out = vec![0.0; self.cols];
        for i in 0..self.rows {
            let row = &self.data[i * self.cols..(i + 1) * self.cols];
            for (o, a) in out.iter_mut().zip(row) {
                *o += a * xs[i];
            }
        }
        DenseVector { data: out }
    }

    pub fn matmul(&self, other: &DenseMatrix) -> DenseMatrix {
        debug_assert_eq!(self.cols, other.rows);
        let mut out = DenseMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let aik = self.get(i, k);
                if aik == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    out.data[i * other.cols + j] += aik * other.get(k, j);
                }
            }
        }
        out
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }
}

/// Result of a thin SVD: `left * diag(singulars) * right^T` reconstructs
/// the input, singular values sorted nonincreasing.
#[derive(Debug, Clone)]
pub struct SvdResult {
    pub left: DenseMatrix,
    pub singulars: DenseVector,
    pub right: DenseMatrix,
}

impl SvdResult {
    pub fn reconstruct(&self) -> DenseMatrix {
        let k = self.singulars.len();
        let m = self.left.rows();
        let n = self.right.rows();
        let mut out = DenseMatrix::zeros(m, n);
        for r in 0..k {
            let s = self.singulars.as_slice()[r];
            for i in 0..m {
                for j in 0..n {
                    let v = out.get(i, j) + s * self.left.get(i, r) * self.right.get(j, r);
                    out.set(i, j, v);
                }
            }
        }
        out
    }
}

const JACOBI_EPS: f64 = 1e-15;
const JACOBI_MAX_SWEEPS: usize = 60;

/// Thin SVD by one-sided Jacobi rotations. Deterministic; adequate for the
/// small matrices used here (up to a few dozen rows/columns).
pub fn svd(a: &DenseMatrix) -> SvdResult {
    if a.rows() < a.cols() {
        let t = svd(&a.transpose());
        return SvdResult {
            left: t.right,
            singulars: t.singulars,
            right: t.left,
        };
    }
    let m = a.rows();
    let n = a.cols();
    // Work on columns of b, accumulating rotations into v.
    let mut b = a.clone();
    let mut v = DenseMatrix::identity(n);
    let scale = a.frobenius_norm();
    for _ in 0..JACOBI_MAX_SWEEPS {
        let mut rotated = false;
        for i in 0..n {
            for j in (i + 1)..n {
                let mut aii = 0.0;
                let mut ajj = 0.0;
                let mut aij = 0.0;
                for r in 0..m {
                    let bi = b.get(r, i);
                    let bj = b.get(r, j);
                    aii += bi * bi;
                    ajj += bj * bj;
                    aij += bi * bj;
                }
                // Relative criterion: rotate until the columns are
                // orthogonal to working precision even when their norms
                // differ by many orders of magnitude.
                if aij.abs() <= JACOBI_EPS * (aii * ajj).sqrt()
                    || aii <= (JACOBI_EPS * scale).powi(2)
                    || ajj <= (JACOBI_EPS * scale).powi(2)
                {
                    continue;
                }
                rotated = true;
                let zeta = (ajj - aii) / (2.0 * aij);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for r in 0..m {
                    let bi = b.get(r, i);
                    let bj = b.get(r, j);
                    b.set(r, i, c * bi - s * bj);
                    b.set(r, j, s * bi + c * bj);
                }
                for r in 0..n {
                    let vi = v.get(r, i);
                    let vj = v.get(r, j);
                    v.set(r, i, c * vi - s * vj);
                    v.set(r, j, s * vi + c * vj);
                }
            }
        }
        if !rotated {
            break;
        }
    }
    // Column norms are the singular values; sort nonincreasing.
    let mut order: Vec<usize> = (0..n).collect();
    let norms: Vec<f64> = (0..n)
        .map(|j| (0..m).map(|r| b.get(r, j).powi(2)).sum::<f64>().sqrt())
        .collect();
    order.sort_by(|&x, &y| norms[y].partial_cmp(&norms[x]).unwrap());

    let mut left = DenseMatrix::zeros(m, n);
    let mut right = DenseMatrix::zeros(n, n);
    let mut sing = vec![0.0; n];
    for (dst, &src) in order.iter().enumerate() {
        sing[dst] = norms[src];
        for r in 0..n {
            right.set(r, dst, v.get(r, src));
        }
        if norms[src] > 0.0 {
            for r in 0..m {
                left.set(r, dst, b.get(r, src) / norms[src]);
            }
        }
    }
    // Zero singular values leave empty left columns; complete them to an
    // orthonormal set so left^T left = I holds.
    complete_orthonormal(&mut left, &sing);
    SvdResult {
        left,
        singulars: DenseVector { data: sing },
        right,
    }
}

fn complete_orthonormal(u: &mut DenseMatrix, sing: &[f64]) {
    let m = u.rows();
    let n = u.cols();
    for j in 0..n {
        if sing[j] > 0.0 {
            continue;
        }
        // Gram-Schmidt a standard basis vector against the filled columns.
        'basis: for e in 0..m {
            let mut col = vec![0.0; m];
            col[e] = 1.0;
            for jj in 0..n {
                if jj == j || (sing[jj] == 0.0 && jj > j) {
                    continue;
                }
                let proj: f64 = (0..m).map(|r| col[r] * u.get(r, jj)).sum();
                for (r, cr) in col.iter_mut().enumerate() {
                    *cr -= proj * u.get(r, jj);
                }
            }
            let nrm = col.iter().map(|v| v * v).sum::<f64>().sqrt();
            if nrm > 1e-8 {
                for (r, cr) in col.iter().enumerate() {
                    u.set(r, j, cr / nrm);
                }
                break 'basis;
            }
        }
    }
}

const POWER_MAX_ITERS: usize = 100_000;

/// Largest singular value by power iteration on a^T a, started from the
/// normalized all-ones vector so the result is reproducible.
pub fn spectral_norm(a: &DenseMatrix, tol: f64) -> Result<f64, Error> {
    assert!(tol > 0.0, "spectral_norm: tol must be positive");
    let n = a.cols();
    if a.as_slice().iter().all(|&v| v == 0.0) {
        return Ok(0.0);
    }
    let mut x = DenseVector {
        data: vec![1.0 / (n as f64).sqrt(); n],
    };
    let mut sigma = 0.0_f64;
    for _ in 0..POWER_MAX_ITERS {
        let y = a.matvec_t(&a.matvec(&x));
        let ynorm = y.norm();
        if ynorm == 0.0 {
            // Start vector happened to be in the null space; perturb.
            x.data[0] += 1.0;
            let xn = x.norm();
            x = x.scale(1.0 / xn);
            continue;
        }
        let next = ynorm.sqrt();
        x = y.scale(1.0 / ynorm);
        if (next - sigma).abs() <= tol * next {
            return Ok(next);
        }
        sigma = next;
    }
    Err(Error::NoConvergence("spectral_norm power iteration"))
}

/// Deterministic seeded random stream (ChaCha8). Identical seeds give
/// byte-identical streams on every platform. Normals come from the
/// Box-Muller transform of two uniforms, fixed here once and for all.
#[derive(Debug, Clone)]
pub struct Rng {
    state: rand_chacha::ChaCha8Rng,
    cached_normal: Option<f64>,
}

impl Rng {
    pub fn seed_from_u64(seed: u64) -> Self {
        Self {
            state: rand_chacha::ChaCha8Rng::seed_from_u64(seed),
            cached_normal: None,
        }
    }

    fn unit(&mut self) -> f64 {
        // 53 random mantissa bits -> uniform in [0,1)
        (self.state.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn rand_uniform(&mut self, lo: f64, hi: f64) -> f64 {
        assert!(lo < hi, "rand_uniform: lo must be < hi");
        lo + (hi - lo) * self.unit()
    }

    pub fn rand_normal(&mut self) -> f64 {
        if let Some(z) = self.cached_normal.take() {
            return z;
        }
        loop {
            let u = self.unit();
            if u == 0.0 {
                continue;
            }
            let v = self.unit();
            let r = (-2.0 * u.ln()).sqrt();
            let theta = 2.0 * std::f64::consts::PI * v;
            self.cached_normal = Some(r * theta.sin());
            return r * theta.cos();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn random_matrix(rng: &mut Rng, m: usize, n: usize) -> DenseMatrix {
        let data = (0..m * n).map(|_| rng.rand_normal()).collect();
        DenseMatrix::new(m, n, data).unwrap()
    }

    /// Two-sided Jacobi eigensolver for symmetric matrices; independent
    /// oracle for the spectral norm, never used by the library itself.
    fn jacobi_eigen_max(s: &DenseMatrix) -> f64 {
        assert_eq!(s.rows(), s.cols());
        let n = s.rows();
        let mut a = s.clone();
        for _ in 0..100 {
            let mut off = 0.0;
            for i in 0..n {
                for j in (i + 1)..n {
                    off += a.get(i, j).powi(2);
                }
            }
            if off.sqrt() < 1e-14 * (1.0 + a.frobenius_norm()) {
                break;
            }
            for p in 0..n {
                for q in (p + 1)..n {
                    let apq = a.get(p, q);
                    if apq.abs() < 1e-300 {
                        continue;
                    }
                    let theta = (a.get(q, q) - a.get(p, p)) / (2.0 * apq);
                    let t = theta.signum() / (theta.abs() + (1.0 + theta * theta).sqrt());
                    let c = 1.0 / (1.0 + t * t).sqrt();
                    let sn = c * t;
                    for k in 0..n {
                        let akp = a.get(k, p);
                        let akq = a.get(k, q);
                        a.set(k, p, c * akp - sn * akq);
                        a.set(k, q, sn * akp + c * akq);
                    }
                    for k in 0..n {
                        let apk = a.get(p, k);
                        let aqk = a.get(q, k);
                        a.set(p, k, c * apk - sn * aqk);
                        a.set(q, k, sn * apk + c * aqk);
                    }
                }
            }
        }
        (0..n).map(|i| a.get(i, i)).fold(f64::MIN, f64::max)
    }

    #[test]
    fn spectral_norm_identity_and_diag() {
        let eye = DenseMatrix::identity(2);
        assert!((spectral_norm(&eye, 1e-10).unwrap() - 1.0).abs() < 1e-9);
        let d = DenseMatrix::from_diag(&[3.0, 1.0]);
        assert!((spectral_norm(&d, 1e-10).unwrap() - 3.0).abs() < 1e-9);
    }

    #[test]
    fn spectral_norm_zero_matrix() {
        let z = DenseMatrix::zeros(3, 3);
        assert_eq!(spectral_norm(&z, 1e-8).unwrap(), 0.0);
    }

    #[test]
    fn spectral_norm_matches_jacobi_eigen_oracle() {
        let mut rng = Rng::seed_from_u64(7);
        let a = random_matrix(&mut rng, 5, 5);
        let ata = a.transpose().matmul(&a);
        let expect = jacobi_eigen_max(&ata).sqrt();
        let got = spectral_norm(&a, 1e-10).unwrap();
        assert!(
            (got - expect).abs() <= 1e-6 * expect,
            "got {got}, oracle {expect}"
        );
    }

    #[test]
    fn svd_diagonal_sorted() {
        let a = DenseMatrix::from_diag(&[2.0, 5.0]);
        let r = svd(&a);
        let s = r.singulars.as_slice();
        assert!((s[0] - 5.0).abs() < 1e-12);
        assert!((s[1] - 2.0).abs() < 1e-12);
    }

    #[test]
    fn svd_rank_one_outer_product() {
        // u v^T with ||u|| = 2, ||v|| = 3 has singular values (6, 0, ...).
        let u = [2.0, 0.0, 0.0];
        let v = [0.0, 3.0, 0.0, 0.0];
        let mut a = DenseMatrix::zeros(3, 4);
        for i in 0..3 {
            for j in 0..4 {
                a.set(i, j, u[i] * v[j]);
            }
        }
        let r = svd(&a);
        let s = r.singulars.as_slice();
        assert!((s[0] - 6.0).abs() < 1e-10);
        for &x in &s[1..] {
            assert!(x.abs() < 1e-10);
        }
    }

    #[test]
    fn svd_antidiagonal() {
        // [[0,2],[1,0]]: a^T a = diag(1,4), singular values (2,1).
        let a = DenseMatrix::new(2, 2, vec![0.0, 2.0, 1.0, 0.0]).unwrap();
        let r = svd(&a);
        let s = r.singulars.as_slice();
        assert!((s[0] - 2.0).abs() < 1e-12);
        assert!((s[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn svd_reconstruction_and_orthonormality() {
        let mut rng = Rng::seed_from_u64(11);
        for &(m, n) in &[(1usize, 1usize), (3, 2), (2, 3), (6, 7), (20, 20), (42, 42)] {
            let a = random_matrix(&mut rng, m, n);
            let r = svd(&a);
            let recon = r.reconstruct();
            let err = recon
                .as_slice()
                .iter()
                .zip(a.as_slice())
                .map(|(x, y)| (x - y).powi(2))
                .sum::<f64>()
                .sqrt();
            assert!(err <= 1e-10 * a.frobenius_norm().max(1.0), "({m},{n}): {err}");
            for (q, dim) in [(&r.left, r.left.cols()), (&r.right, r.right.cols())] {
                let g = q.transpose().matmul(q);
                let mut dev = 0.0;
                for i in 0..dim {
                    for j in 0..dim {
                        let e = g.get(i, j) - if i == j { 1.0 } else { 0.0 };
                        dev += e * e;
                    }
                }
                assert!(dev.sqrt() <= 1e-10, "({m},{n}) orthonormality {}", dev.sqrt());
            }
            // consistency between the two routes
            let sn = spectral_norm(&a, 1e-10).unwrap();
            assert!((sn - r.singulars.as_slice()[0]).abs() <= 1e-6 * sn.max(1e-12));
        }
    }

    #[test]
    fn svd_rank_deficient_left_orthonormal() {
        // 3x2 with a zero column: one zero singular value, left must still
        // have orthonormal columns.
        let a = DenseMatrix::new(3, 2, vec![1.0, 0.0, 2.0, 0.0, -1.0, 0.0]).unwrap();
        let r = svd(&a);
        let g = r.left.transpose().matmul(&r.left);
        assert!((g.get(0, 0) - 1.0).abs() < 1e-10);
        assert!((g.get(1, 1) - 1.0).abs() < 1e-10);
        assert!(g.get(0, 1).abs() < 1e-10);
    }

    #[test]
    fn rng_reproducible() {
        let mut a = Rng::seed_from_u64(42);
        let mut b = Rng::seed_from_u64(42);
        for _ in 0..100 {
            assert_eq!(a.rand_uniform(0.0, 1.0), b.rand_uniform(0.0, 1.0));
            assert_eq!(a.rand_normal(), b.rand_normal());
        }
    }

    #[test]
    fn rng_uniform_range() {
        let mut rng = Rng::seed_from_u64(3);
        for _ in 0..1000 {
            let v = rng.rand_uniform(0.0, 10.0);
            assert!((0.0..10.0).contains(&v));
        }
    }

    #[test]
    fn rng_normal_moments() {
        let mut rng = Rng::seed_from_u64(5);
        let n = 100_000;
        let samples: Vec<f64> = (0..n).map(|_| rng.rand_normal()).collect();
        let mean = samples.iter().sum::<f64>() / n as f64;
        let var = samples.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n as f64;
        assert!(mean.abs() < 0.02, "mean {mean}");
        assert!((var - 1.0).abs() < 0.03, "var {var}");
    }
}
