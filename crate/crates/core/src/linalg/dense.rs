//! Dense real symmetric matrices and the cyclic Jacobi eigensolver.

use crate::error::{Error, Result};

use super::tridiag::Spectrum;

/// Largest dense dimension accepted by the Jacobi solver.
pub const DENSE_LIMIT: usize = 4096;

const MAX_SWEEPS: usize = 100;

/// Dense real symmetric matrix, row-major. Symmetric by construction: every
/// write goes to both `(i, j)` and `(j, i)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseSym {
    n: usize,
    entries: Vec<f64>,
}

impl DenseSym {
    pub fn zeros(n: usize) -> Self {
        DenseSym {
            n,
            entries: vec![0.0; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.entries[i * n + i] = 1.0;
        }
        m
    }

    /// Builds from a row-major array, symmetrizing as `(A + A^T)/2` after
    /// checking that the input is symmetric to `1e-12` relative.
    pub fn from_rows(n: usize, rows: &[f64]) -> Result<Self> {
        if rows.len() != n * n {
            return Err(Error::InvalidInput(format!(
                "expected {} entries, got {}",
                n * n,
                rows.len()
            )));
        }
        let scale = rows.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1.0);
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in i..n {
                let a = rows[i * n + j];
                let b = rows[j * n + i];
                if !a.is_finite() || !b.is_finite() {
                    return Err(Error::InvalidInput("non-finite entry".into()));
                }
                if (a - b).abs() > 1e-12 * scale {
                    return Err(Error::InvalidInput(format!(
                        "entries ({i},{j}) and ({j},{i}) differ by {:e}",
                        (a - b).abs()
                    )));
                }
                m.set(i, j, 0.5 * (a + b));
            }
        }
        Ok(m)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.entries[i * self.n + j] = v;
        self.entries[j * self.n + i] = v;
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn frobenius(&self) -> f64 {
        self.entries.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn scaled(&self, c: f64) -> DenseSym {
        DenseSym {
            n: self.n,
            entries: self.entries.iter().map(|v| c * v).collect(),
        }
    }

    pub fn matvec(&self, v: &[f64]) -> Vec<f64> {
        (0..self.n)
            .map(|i| {
                let row = &self.entries[i * self.n..(i + 1) * self.n];
                row.iter().zip(v).map(|(a, b)| a * b).sum()
            })
            .collect()
    }

}

fn off_mass(a: &[f64], n: usize) -> f64 {
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[i * n + j].powi(2);
            }
        }
    }
    s.sqrt()
}

/// Full spectrum of `d` with orthonormal eigenvectors, by cyclic Jacobi
/// rotations until the off-diagonal Frobenius mass drops below `1e-14` of the
/// total.
pub fn dense_eigen(d: &DenseSym) -> Result<Spectrum> {
    let n = d.dim();
    if n > DENSE_LIMIT {
        return Err(Error::SizeExceeded {
            size: n,
            limit: DENSE_LIMIT,
        });
    }
    if n == 0 {
        return Ok(Spectrum {
            values: vec![],
            vectors: Some(vec![]),
        });
    }
    let mut a = d.entries.clone();
    let mut v = DenseSym::identity(n).entries;
    let total = d.frobenius();
    let threshold = 1e-14 * total;

    let mut sweeps = 0;
    loop {
        let off = off_mass(&a, n);
        if off <= threshold || off == 0.0 {
            break;
        }
        if sweeps == MAX_SWEEPS {
            return Err(Error::IterationLimit(format!(
                "Jacobi off-diagonal mass {off:e} after {MAX_SWEEPS} sweeps"
            )));
        }
        for p in 0..n - 1 {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                a[p * n + q] = 0.0;
                a[q * n + p] = 0.0;
                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
        sweeps += 1;
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[i * n + i].total_cmp(&a[j * n + j]));
    let values = order.iter().map(|&i| a[i * n + i]).collect();
    let vectors = order
        .iter()
        .map(|&col| (0..n).map(|row| v[row * n + col]).collect())
        .collect();
    Ok(Spectrum {
        values,
        vectors: Some(vectors),
    })
}
