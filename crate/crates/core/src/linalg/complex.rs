//! Dense complex square matrices.

use num_complex::Complex64;

use crate::error::{Error, Result};

use super::dense::{dense_eigen, DenseSym};

pub type C64 = Complex64;

/// Dense complex square matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexDense {
    n: usize,
    entries: Vec<C64>,
}

impl ComplexDense {
    pub fn zeros(n: usize) -> Self {
        ComplexDense {
            n,
            entries: vec![C64::new(0.0, 0.0); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.entries[i * n + i] = C64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_rows(n: usize, rows: Vec<C64>) -> Result<Self> {
        if rows.len() != n * n {
            return Err(Error::InvalidInput(format!(
                "expected {} entries, got {}",
                n * n,
                rows.len()
            )));
        }
        Ok(ComplexDense { n, entries: rows })
    }

    pub fn from_real(n: usize, rows: &[f64]) -> Result<Self> {
        Self::from_rows(n, rows.iter().map(|&v| C64::new(v, 0.0)).collect())
    }

    pub fn diagonal(values: &[f64]) -> Self {
        let n = values.len();
        let mut m = Self::zeros(n);
        for (i, v) in values.iter().enumerate() {
            m.entries[i * n + i] = C64::new(*v, 0.0);
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.entries[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: C64) {
        self.entries[i * self.n + j] = v;
    }

    pub fn add_at(&mut self, i: usize, j: usize, v: C64) {
        self.entries[i * self.n + j] += v;
    }

    pub fn entries(&self) -> &[C64] {
        &self.entries
    }

    pub fn entries_mut(&mut self) -> &mut [C64] {
        &mut self.entries
    }

    pub fn scale(&self, c: C64) -> ComplexDense {
        ComplexDense {
            n: self.n,
            entries: self.entries.iter().map(|v| c * v).collect(),
        }
    }

    pub fn scale_real(&self, c: f64) -> ComplexDense {
        self.scale(C64::new(c, 0.0))
    }

    pub fn add(&self, other: &ComplexDense) -> ComplexDense {
        assert_eq!(self.n, other.n, "dimension mismatch");
        ComplexDense {
            n: self.n,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &ComplexDense) -> ComplexDense {
        self.add(&other.scale_real(-1.0))
    }

    pub fn add_assign_scaled(&mut self, other: &ComplexDense, c: C64) {
        assert_eq!(self.n, other.n, "dimension mismatch");
        for (a, b) in self.entries.iter_mut().zip(&other.entries) {
            *a += c * b;
        }
    }

    pub fn matmul(&self, other: &ComplexDense) -> ComplexDense {
        assert_eq!(self.n, other.n, "dimension mismatch");
        let n = self.n;
        let mut out = vec![C64::new(0.0, 0.0); n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.entries[i * n + k];
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                let row = &other.entries[k * n..(k + 1) * n];
                let dst = &mut out[i * n..(i + 1) * n];
                for (d, b) in dst.iter_mut().zip(row) {
                    *d += a * b;
                }
            }
        }
        ComplexDense { n, entries: out }
    }

    pub fn adjoint(&self) -> ComplexDense {
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.entries[j * n + i] = self.entries[i * n + j].conj();
            }
        }
        out
    }

    /// `AB - BA`.
    pub fn commutator(&self, other: &ComplexDense) -> ComplexDense {
        self.matmul(other).sub(&other.matmul(self))
    }

    pub fn kron(&self, other: &ComplexDense) -> ComplexDense {
        let (n, m) = (self.n, other.n);
        let dim = n * m;
        let mut out = Self::zeros(dim);
        for i in 0..n {
            for j in 0..n {
                let a = self.entries[i * n + j];
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                for k in 0..m {
                    for l in 0..m {
                        out.entries[(i * m + k) * dim + j * m + l] = a * other.entries[k * m + l];
                    }
                }
            }
        }
        out
    }

    pub fn matvec(&self, v: &[C64]) -> Vec<C64> {
        let n = self.n;
        (0..n)
            .map(|i| {
                self.entries[i * n..(i + 1) * n]
                    .iter()
                    .zip(v)
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect()
    }

    /// `<v, A v>` for a complex vector.
    pub fn expectation(&self, v: &[C64]) -> C64 {
        let av = self.matvec(v);
        v.iter().zip(&av).map(|(a, b)| a.conj() * b).sum()
    }

    pub fn trace(&self) -> C64 {
        (0..self.n).map(|i| self.entries[i * self.n + i]).sum()
    }

    /// Largest entrywise modulus of `A - A^†`.
    pub fn hermitian_defect(&self) -> f64 {
        let n = self.n;
        let mut d = 0.0f64;
        for i in 0..n {
            for j in i..n {
                d = d.max((self.entries[i * n + j] - self.entries[j * n + i].conj()).norm());
            }
        }
        d
    }

    pub fn max_abs_diff(&self, other: &ComplexDense) -> f64 {
        assert_eq!(self.n, other.n, "dimension mismatch");
        self.entries
            .iter()
            .zip(&other.entries)
            .fold(0.0, |m, (a, b)| m.max((a - b).norm()))
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().fold(0.0, |m, a| m.max(a.norm()))
    }

    pub fn is_real(&self) -> bool {
        self.entries.iter().all(|v| v.im == 0.0)
    }

    /// Real part as a dense symmetric matrix (the matrix must be Hermitian).
    pub fn real_part_sym(&self) -> Result<DenseSym> {
        let rows: Vec<f64> = self.entries.iter().map(|v| v.re).collect();
        DenseSym::from_rows(self.n, &rows)
    }
}

/// Ascending eigenvalues of a Hermitian matrix.
///
/// Real matrices go straight to Jacobi; complex ones through the real
/// embedding `[[Re, -Im], [Im, Re]]`, whose spectrum is that of `A` with every
/// eigenvalue doubled.
pub fn hermitian_eigenvalues(a: &ComplexDense) -> Result<Vec<f64>> {
    let defect = a.hermitian_defect();
    if defect > 1e-12 * a.max_abs().max(1.0) {
        return Err(Error::NotHermitian(defect));
    }
    let n = a.dim();
    if a.is_real() {
        let mut sym = DenseSym::zeros(n);
        for i in 0..n {
            for j in i..n {
                sym.set(i, j, 0.5 * (a.get(i, j).re + a.get(j, i).re));
            }
        }
        return Ok(dense_eigen(&sym)?.values);
    }
    let mut big = DenseSym::zeros(2 * n);
    for i in 0..n {
        for j in i..n {
            let h = 0.5 * (a.get(i, j) + a.get(j, i).conj());
            big.set(i, j, h.re);
            big.set(n + i, n + j, h.re);
            // Lower-left block holds Im(A), upper-right -Im(A).
            big.set(n + i, j, h.im);
            big.set(n + j, i, -h.im);
        }
    }
    let values = dense_eigen(&big)?.values;
    Ok(values.chunks(2).map(|p| 0.5 * (p[0] + p[1])).collect())
}

/// Largest singular value, `sqrt(λ_max(A^† A))`. Hermitian input takes the
/// eigenvalue route directly, which avoids squaring the condition number.
pub fn spectral_norm(a: &ComplexDense) -> Result<f64> {
    if a.hermitian_defect() <= 1e-12 * a.max_abs().max(1.0) {
        let v = hermitian_eigenvalues(a)?;
        return Ok(v.first().map_or(0.0, |x| x.abs()).max(v.last().map_or(0.0, |x| x.abs())));
    }
    let gram = a.adjoint().matmul(a);
    let v = hermitian_eigenvalues(&gram)?;
    Ok(v.last().copied().unwrap_or(0.0).max(0.0).sqrt())
}
