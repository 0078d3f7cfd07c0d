//! Small dense linear algebra: complex matrices, a cyclic Jacobi eigensolver
//! for symmetric/Hermitian matrices and LU with partial pivoting.

use crate::{Error, Result, C64};

/// Row-major dense complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![C64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: C64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[C64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_real(&self) -> bool {
        self.data.iter().all(|z| z.im == 0.0)
    }

    /// Keep only the listed columns.
    pub fn select_cols(&self, keep: &[usize]) -> Self {
        Self::from_fn(self.rows, keep.len(), |i, j| self.get(i, keep[j]))
    }

    /// `A^* A` (cols × cols).
    pub fn gram(&self) -> Self {
        let n = self.cols;
        let mut g = Self::zeros(n, n);
        for r in 0..self.rows {
            let row = self.row(r);
            for i in 0..n {
                let ai = row[i].conj();
                if ai == C64::new(0.0, 0.0) {
                    continue;
                }
                for j in i..n {
                    g.data[i * n + j] += ai * row[j];
                }
            }
        }
        for i in 0..n {
            for j in 0..i {
                g.data[i * n + j] = g.data[j * n + i].conj();
            }
        }
        g
    }

    /// `A A^*` (rows × rows).
    pub fn outer_gram(&self) -> Self {
        let n = self.rows;
        Self::from_fn(n, n, |i, j| {
            self.row(i)
                .iter()
                .zip(self.row(j))
                .map(|(a, b)| a * b.conj())
                .sum()
        })
    }

    pub fn matvec(&self, x: &[C64]) -> Vec<C64> {
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// `A^* y`.
    pub fn adjoint_matvec(&self, y: &[C64]) -> Vec<C64> {
        let mut out = vec![C64::new(0.0, 0.0); self.cols];
        for (i, yi) in y.iter().enumerate() {
            for (o, a) in out.iter_mut().zip(self.row(i)) {
                *o += a.conj() * yi;
            }
        }
        out
    }
}

impl std::fmt::Display for CMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for i in 0..self.rows {
            let cells: Vec<String> = self
                .row(i)
                .iter()
                .map(|z| {
                    if z.im == 0.0 {
                        format!("{:.6e}", z.re)
                    } else {
                        format!("{:.6e}{:+.6e}i", z.re, z.im)
                    }
                })
                .collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

/// Eigen-decomposition of a real symmetric matrix.
#[derive(Clone, Debug)]
pub struct SymEigen {
    /// Ascending.
    pub values: Vec<f64>,
    /// `vectors[i * n + k]` is component `i` of the eigenvector for `values[k]`.
    pub vectors: Vec<f64>,
    /// `max_k ||A v_k - μ_k v_k|| / max(1, max|μ|)`.
    pub residual: f64,
}

pub const EIGEN_RESIDUAL_TOL: f64 = 1e-8;
const MAX_SWEEPS: usize = 100;

/// Cyclic Jacobi on the row-major symmetric `n × n` matrix `a`.
pub fn jacobi_eigen(a: &[f64], n: usize) -> Result<SymEigen> {
    assert_eq!(a.len(), n * n, "matrix size mismatch");
    if n == 0 {
        return Ok(SymEigen {
            values: Vec::new(),
            vectors: Vec::new(),
            residual: 0.0,
        });
    }
    let mut m = a.to_vec();
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    let fro: f64 = m.iter().map(|x| x * x).sum::<f64>().sqrt();
    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| m[i * n + j] * m[i * n + j])
            .sum::<f64>()
            .sqrt();
        if off <= f64::EPSILON * fro || fro == 0.0 {
            converged = true;
            break;
        }
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[p * n + q];
                let app = m[p * n + p];
                let aqq = m[q * n + q];
                if apq.abs() <= f64::EPSILON * (app * aqq).abs().sqrt() || apq.abs() < 1e-300 {
                    m[p * n + q] = 0.0;
                    m[q * n + p] = 0.0;
                    continue;
                }
                rotated = true;
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let mkp = m[k * n + p];
                    let mkq = m[k * n + q];
                    m[k * n + p] = c * mkp - s * mkq;
                    m[k * n + q] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let mpk = m[p * n + k];
                    let mqk = m[q * n + k];
                    m[p * n + k] = c * mpk - s * mqk;
                    m[q * n + k] = s * mpk + c * mqk;
                }
                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::Eigen(format!(
            "Jacobi did not converge in {MAX_SWEEPS} sweeps (n = {n})"
        )));
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[i * n + i].total_cmp(&m[j * n + j]));
    let values: Vec<f64> = order.iter().map(|&k| m[k * n + k]).collect();
    let mut vectors = vec![0.0; n * n];
    for (new_k, &k) in order.iter().enumerate() {
        for i in 0..n {
            vectors[i * n + new_k] = v[i * n + k];
        }
    }

    let scale = values.iter().fold(1.0f64, |s, x| s.max(x.abs()));
    let mut residual: f64 = 0.0;
    for k in 0..n {
        let mu = values[k];
        let mut r2 = 0.0;
        for i in 0..n {
            let mut av = 0.0;
            for j in 0..n {
                av += a[i * n + j] * vectors[j * n + k];
            }
            let d = av - mu * vectors[i * n + k];
            r2 += d * d;
        }
        residual = residual.max(r2.sqrt() / scale);
    }
    if !(residual <= EIGEN_RESIDUAL_TOL) {
        return Err(Error::Eigen(format!(
            "eigen residual {residual:.3e} exceeds {EIGEN_RESIDUAL_TOL:.0e}"
        )));
    }
    Ok(SymEigen {
        values,
        vectors,
        residual,
    })
}

/// Ascending eigenvalues of a Hermitian matrix, with the eigen residual.
///
/// Real matrices go straight to Jacobi; complex ones use the real symmetric
/// embedding `[[X, -Y], [Y, X]]`, whose spectrum is that of `X + iY` doubled.
pub fn hermitian_eigenvalues(h: &CMatrix) -> Result<(Vec<f64>, f64)> {
    let n = h.rows();
    assert_eq!(n, h.cols(), "Hermitian matrix must be square");
    if h.is_real() {
        let a: Vec<f64> = h.data.iter().map(|z| z.re).collect();
        let e = jacobi_eigen(&a, n)?;
        return Ok((e.values, e.residual));
    }
    let m = 2 * n;
    let mut a = vec![0.0; m * m];
    for i in 0..n {
        for j in 0..n {
            let z = h.get(i, j);
            a[i * m + j] = z.re;
            a[(i + n) * m + (j + n)] = z.re;
            a[i * m + (j + n)] = -z.im;
            a[(i + n) * m + j] = z.im;
        }
    }
    let e = jacobi_eigen(&a, m)?;
    Ok((e.values.iter().step_by(2).copied().collect(), e.residual))
}

/// 2-norm condition number via the eigenvalues of `A^* A`.
pub fn condition_number(a: &CMatrix) -> Result<f64> {
    let (ev, _) = hermitian_eigenvalues(&a.gram())?;
    let hi = ev.last().copied().unwrap_or(0.0);
    let lo = ev.first().copied().unwrap_or(0.0);
    if lo <= 0.0 {
        Ok(f64::INFINITY)
    } else {
        Ok((hi / lo).sqrt())
    }
}

/// LU factorization with partial pivoting.
#[derive(Clone, Debug)]
pub struct Lu {
    n: usize,
    lu: Vec<C64>,
    piv: Vec<usize>,
}

impl Lu {
    pub fn new(a: &CMatrix) -> Result<Self> {
        let n = a.rows();
        if n != a.cols() {
            return Err(Error::InvalidInput(format!(
                "LU needs a square matrix, got {}x{}",
                a.rows(),
                a.cols()
            )));
        }
        let mut lu = a.data.clone();
        let mut piv: Vec<usize> = (0..n).collect();
        for k in 0..n {
            let (p, best) = (k..n)
                .map(|i| (i, lu[i * n + k].norm()))
                .fold((k, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
            if best == 0.0 {
                return Err(Error::RankDeficient {
                    condition: f64::INFINITY,
                });
            }
            if p != k {
                for j in 0..n {
                    lu.swap(k * n + j, p * n + j);
                }
                piv.swap(k, p);
            }
            let pivot = lu[k * n + k];
            for i in (k + 1)..n {
                let f = lu[i * n + k] / pivot;
                lu[i * n + k] = f;
                for j in (k + 1)..n {
                    let t = lu[k * n + j];
                    lu[i * n + j] -= f * t;
                }
            }
        }
        Ok(Self { n, lu, piv })
    }

    pub fn solve(&self, b: &[C64]) -> Vec<C64> {
        let n = self.n;
        let mut x: Vec<C64> = self.piv.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            for j in 0..i {
                let t = x[j];
                x[i] -= self.lu[i * n + j] * t;
            }
        }
        for i in (0..n).rev() {
            for j in (i + 1)..n {
                let t = x[j];
                x[i] -= self.lu[i * n + j] * t;
            }
            x[i] /= self.lu[i * n + i];
        }
        x
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn jacobi_on_known_spectrum() {
        // eigenvalues of [[2,1,0],[1,2,1],[0,1,2]] are 2-√2, 2, 2+√2
        let a = [2.0, 1.0, 0.0, 1.0, 2.0, 1.0, 0.0, 1.0, 2.0];
        let e = jacobi_eigen(&a, 3).unwrap();
        let s = 2f64.sqrt();
        for (got, want) in e.values.iter().zip([2.0 - s, 2.0, 2.0 + s]) {
            assert!((got - want).abs() < 1e-14);
        }
        assert!(e.residual < 1e-14);
    }

    #[test]
    fn complex_embedding_halves_spectrum() {
        // [[1, i], [-i, 1]] has eigenvalues 0 and 2
        let h = CMatrix::from_fn(2, 2, |i, j| match (i, j) {
            (0, 1) => C64::new(0.0, 1.0),
            (1, 0) => C64::new(0.0, -1.0),
            _ => C64::new(1.0, 0.0),
        });
        let (ev, _) = hermitian_eigenvalues(&h).unwrap();
        assert_eq!(ev.len(), 2);
        assert!(ev[0].abs() < 1e-14);
        assert!((ev[1] - 2.0).abs() < 1e-14);
    }

    #[test]
    fn lu_solves() {
        let a = CMatrix::from_fn(3, 3, |i, j| C64::new(1.0 / (i + j + 1) as f64, (i as f64) - (j as f64)));
        let x = vec![C64::new(1.0, 2.0), C64::new(-1.0, 0.5), C64::new(0.0, -3.0)];
        let b = a.matvec(&x);
        let got = Lu::new(&a).unwrap().solve(&b);
        for (g, w) in got.iter().zip(&x) {
            assert!((g - w).norm() < 1e-12);
        }
    }

    #[test]
    fn gram_matches_adjoint_product() {
        let a = CMatrix::from_fn(4, 3, |i, j| C64::new((i * j) as f64 - 1.0, i as f64 * 0.5));
        let g = a.gram();
        for i in 0..3 {
            for j in 0..3 {
                let direct: C64 = (0..4).map(|r| a.get(r, i).conj() * a.get(r, j)).sum();
                assert!((g.get(i, j) - direct).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn condition_of_identity() {
        let id = CMatrix::from_fn(3, 3, |i, j| C64::new(if i == j { 1.0 } else { 0.0 }, 0.0));
        assert!((condition_number(&id).unwrap() - 1.0).abs() < 1e-14);
    }
}
