//! Dense complex matrices and a Hermitian eigensolver at context precision.

use rug::ops::Pow;

use crate::error::{Error, Result};
use crate::scalars::{Complex, Real};

/// Row-major square complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix {
    dim: usize,
    data: Vec<Complex>,
}

impl CMatrix {
    pub fn zeros(dim: usize, prec: u32) -> Self {
        Self { dim, data: vec![Complex::zero(prec); dim * dim] }
    }

    pub fn identity(dim: usize, prec: u32) -> Self {
        let mut m = Self::zeros(dim, prec);
        for i in 0..dim {
            m[(i, i)] = Complex::one(prec);
        }
        m
    }

    pub fn diagonal(entries: Vec<Complex>) -> Self {
        let dim = entries.len();
        let prec = entries.first().map_or(64, Complex::prec);
        let mut m = Self::zeros(dim, prec);
        for (i, e) in entries.into_iter().enumerate() {
            m[(i, i)] = e;
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    fn prec(&self) -> u32 {
        self.data.first().map_or(64, Complex::prec)
    }

    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.dim, self.prec());
        for i in 0..self.dim {
            for j in 0..self.dim {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn scale(&self, s: &Complex) -> Self {
        Self { dim: self.dim, data: self.data.iter().map(|x| x * s).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        Self { dim: self.dim, data: self.data.iter().zip(&other.data).map(|(x, y)| x + y).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self { dim: self.dim, data: self.data.iter().zip(&other.data).map(|(x, y)| x - y).collect() }
    }

    pub fn matmul(&self, other: &Self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n, self.prec());
        for i in 0..n {
            for k in 0..n {
                let lhs = &self[(i, k)];
                if lhs.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let rhs = &other[(k, j)];
                    if rhs.is_zero() {
                        continue;
                    }
                    out[(i, j)] = &out[(i, j)] + &(lhs * rhs);
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &[Complex]) -> Vec<Complex> {
        let n = self.dim;
        (0..n)
            .map(|i| {
                let mut acc = Complex::zero(self.prec());
                for (j, vj) in v.iter().enumerate() {
                    acc = &acc + &(&self[(i, j)] * vj);
                }
                acc
            })
            .collect()
    }

    /// Largest entrywise modulus.
    pub fn max_abs(&self) -> Real {
        let mut best = Real::new(self.prec());
        for x in &self.data {
            let a = x.abs();
            if a > best {
                best = a;
            }
        }
        best
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> Real {
        self.sub(other).max_abs()
    }

    pub fn column(&self, j: usize) -> Vec<Complex> {
        (0..self.dim).map(|i| self[(i, j)].clone()).collect()
    }
}

impl std::ops::Index<(usize, usize)> for CMatrix {
    type Output = Complex;
    fn index(&self, (i, j): (usize, usize)) -> &Complex {
        &self.data[i * self.dim + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex {
        &mut self.data[i * self.dim + j]
    }
}

/// `⟨x, y⟩`, conjugate-linear in `x`.
pub fn inner(x: &[Complex], y: &[Complex]) -> Complex {
    let prec = x.first().map_or(64, Complex::prec);
    x.iter().zip(y).fold(Complex::zero(prec), |acc, (a, b)| &acc + &(&a.conj() * b))
}

pub fn norm(x: &[Complex]) -> Real {
    inner(x, x).re.sqrt()
}

/// Eigen-decomposition of a Hermitian matrix: `values[k]` ascending and
/// `vectors` holding the matching unit eigenvectors as columns.
#[derive(Clone, Debug)]
pub struct HermitianEigen {
    pub values: Vec<Real>,
    pub vectors: CMatrix,
}

/// Cyclic complex Jacobi method. The input is symmetrized as `(M + M†)/2`
/// first; `herm_tol` bounds the anti-Hermitian part that may be discarded.
pub fn hermitian_eigen(m: &CMatrix, herm_tol: &Real, max_sweeps: usize) -> Result<HermitianEigen> {
    let n = m.dim();
    let prec = m.prec();
    let skew = m.max_abs_diff(&m.adjoint());
    let scale = m.max_abs().max(&Real::with_val(prec, 1));
    if skew > Real::with_val(prec, herm_tol * &scale) {
        return Err(Error::NumericalFailure(format!(
            "matrix is not self-adjoint (defect {})",
            skew.to_string_radix(10, Some(6))
        )));
    }
    let half = Complex::from_real(Real::with_val(prec, 0.5));
    let mut a = m.add(&m.adjoint()).scale(&half);
    let mut v = CMatrix::identity(n, prec);
    let stop = Real::with_val(prec, Real::with_val(prec, 2).pow(-(prec as i32 - 16)) * &scale);

    let mut converged = n <= 1;
    for _ in 0..max_sweeps {
        let mut off = Real::new(prec);
        for p in 0..n {
            for q in (p + 1)..n {
                let x = a[(p, q)].abs();
                if x > off {
                    off = x;
                }
            }
        }
        if off <= stop {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, p, q, prec);
            }
        }
    }
    if !converged {
        return Err(Error::NumericalFailure("Jacobi sweeps did not converge".into()));
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.partial_cmp(&a[(j, j)].re).expect("finite eigenvalues"));
    let values = order.iter().map(|&i| a[(i, i)].re.clone()).collect();
    let mut vectors = CMatrix::zeros(n, prec);
    for (col, &k) in order.iter().enumerate() {
        for row in 0..n {
            vectors[(row, col)] = v[(row, k)].clone();
        }
    }
    Ok(HermitianEigen { values, vectors })
}

/// One unitary Jacobi rotation annihilating `a[(p, q)]`.
fn rotate(a: &mut CMatrix, v: &mut CMatrix, p: usize, q: usize, prec: u32) {
    let apq = a[(p, q)].clone();
    let mag = apq.abs();
    if mag.is_zero() {
        return;
    }
    // phase e^{-iφ} that makes the (p, q) entry real and positive
    let phase = Complex::new(Real::with_val(prec, &apq.re / &mag), -Real::with_val(prec, &apq.im / &mag));
    let alpha = a[(p, p)].re.clone();
    let gamma = a[(q, q)].re.clone();
    let theta = Real::with_val(prec, &gamma - &alpha) / Real::with_val(prec, &mag * 2);
    let root = (Real::with_val(prec, theta.square_ref()) + 1u32).sqrt();
    let mut t = Real::with_val(prec, 1) / (theta.clone().abs() + root);
    if theta.is_sign_negative() {
        t = -t;
    }
    let c = Real::with_val(prec, 1) / (Real::with_val(prec, t.square_ref()) + 1u32).sqrt();
    let s = Real::with_val(prec, &t * &c);

    // U restricted to (p, q): [[c, s], [-s·ph, c·ph]]
    let g_pp = Complex::from_real(c.clone());
    let g_pq = Complex::from_real(s.clone());
    let g_qp = phase.scale(&-s.clone());
    let g_qq = phase.scale(&c);

    let n = a.dim();
    for i in 0..n {
        let aip = a[(i, p)].clone();
        let aiq = a[(i, q)].clone();
        a[(i, p)] = &(&aip * &g_pp) + &(&aiq * &g_qp);
        a[(i, q)] = &(&aip * &g_pq) + &(&aiq * &g_qq);
        let vip = v[(i, p)].clone();
        let viq = v[(i, q)].clone();
        v[(i, p)] = &(&vip * &g_pp) + &(&viq * &g_qp);
        v[(i, q)] = &(&vip * &g_pq) + &(&viq * &g_qq);
    }
    for j in 0..n {
        let apj = a[(p, j)].clone();
        let aqj = a[(q, j)].clone();
        a[(p, j)] = &(&g_pp.conj() * &apj) + &(&g_qp.conj() * &aqj);
        a[(q, j)] = &(&g_pq.conj() * &apj) + &(&g_qq.conj() * &aqj);
    }
    a[(p, q)] = Complex::zero(prec);
    a[(q, p)] = Complex::zero(prec);
    a[(p, p)].im = Real::new(prec);
    a[(q, q)].im = Real::new(prec);
}

/// Solves `m x = rhs` by Gaussian elimination with partial pivoting.
pub fn solve(m: &CMatrix, rhs: &[Complex]) -> Result<Vec<Complex>> {
    let n = m.dim();
    let mut a = m.clone();
    let mut b = rhs.to_vec();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| a[(i, col)].abs().partial_cmp(&a[(j, col)].abs()).expect("finite"))
            .expect("non-empty range");
        if a[(pivot, col)].is_zero() {
            return Err(Error::NumericalFailure("singular linear system".into()));
        }
        if pivot != col {
            for j in 0..n {
                let tmp = a[(col, j)].clone();
                a[(col, j)] = a[(pivot, j)].clone();
                a[(pivot, j)] = tmp;
            }
            b.swap(col, pivot);
        }
        for row in (col + 1)..n {
            let factor = &a[(row, col)] / &a[(col, col)];
            for j in col..n {
                a[(row, j)] = &a[(row, j)] - &(&factor * &a[(col, j)]);
            }
            b[row] = &b[row] - &(&factor * &b[col]);
        }
    }
    let mut x = vec![Complex::zero(b[0].prec()); n];
    for row in (0..n).rev() {
        let mut acc = b[row].clone();
        for j in (row + 1)..n {
            acc = &acc - &(&a[(row, j)] * &x[j]);
        }
        x[row] = &acc / &a[(row, row)];
    }
    Ok(x)
}
