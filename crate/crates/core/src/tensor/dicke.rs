//! The symmetric sector `Sym^N(C²)` in the Dicke basis and collective spin
//! operators acting on it.
//!
//! Dicke index `k` counts up spins; `J₃|k> = (k - N/2)|k>` and
//! `J₊|k> = sqrt((N-k)(k+1)) |k+1>`.

use crate::error::{Error, Result};
use crate::linalg::{ComplexDense, C64};

use super::pauli::check_sites;
use super::poly::{levi_civita, Poly3};

/// Normalized Dicke vectors `|k>`, `k = 0..=n`, as vectors on `(C²)^⊗n`.
pub fn dicke_basis(n: usize) -> Result<Vec<Vec<f64>>> {
    check_sites(n)?;
    let dim = 1usize << n;
    let mut basis = vec![vec![0.0; dim]; n + 1];
    for b in 0..dim {
        let ups = n - (b.count_ones() as usize);
        basis[ups][b] = 1.0;
    }
    for v in &mut basis {
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        v.iter_mut().for_each(|x| *x /= norm);
    }
    Ok(basis)
}

/// Matrix of `a` in the Dicke basis. Fails with [`Error::SectorLeak`] when `a`
/// does not preserve the symmetric sector.
pub fn dicke_project(a: &ComplexDense, n: usize) -> Result<ComplexDense> {
    let basis = dicke_basis(n)?;
    if a.dim() != 1 << n {
        return Err(Error::InvalidInput(format!(
            "operator dimension {} is not 2^{n}",
            a.dim()
        )));
    }
    let m = n + 1;
    let tol = 1e-12 * (1.0 + a.max_abs() * n as f64);
    let mut out = ComplexDense::zeros(m);
    let mut leak = 0.0f64;
    for (k, dk) in basis.iter().enumerate() {
        let col: Vec<C64> = dk.iter().map(|&v| C64::new(v, 0.0)).collect();
        let image = a.matvec(&col);
        let mut rest = image.clone();
        for (j, dj) in basis.iter().enumerate() {
            let c: C64 = dj.iter().zip(&image).map(|(u, w)| w * *u).sum();
            out.set(j, k, c);
            for (r, u) in rest.iter_mut().zip(dj) {
                *r -= c * *u;
            }
        }
        let norm = rest.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
        leak = leak.max(norm);
    }
    if leak > tol {
        return Err(Error::SectorLeak(leak));
    }
    Ok(out)
}

/// Collective spin `J_a = ½ Σ_i σ_a(i)` restricted to the Dicke sector.
#[derive(Debug, Clone, Copy)]
pub struct CollectiveSpin {
    n: usize,
}

impl CollectiveSpin {
    pub fn new(n: usize) -> Self {
        CollectiveSpin { n }
    }

    pub fn sites(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.n + 1
    }

    fn ladder(&self, k: usize) -> f64 {
        (((self.n - k) * (k + 1)) as f64).sqrt()
    }

    /// `J_axis v` for axis 0 (x), 1 (y), 2 (z).
    pub fn apply(&self, axis: usize, v: &[C64]) -> Vec<C64> {
        let n = self.n;
        assert_eq!(v.len(), n + 1, "vector length mismatch");
        let half = n as f64 / 2.0;
        let mut out = vec![C64::new(0.0, 0.0); n + 1];
        match axis {
            2 => {
                for (k, o) in out.iter_mut().enumerate() {
                    *o = v[k] * (k as f64 - half);
                }
            }
            0 | 1 => {
                // J₊ contribution into k+1, J₋ contribution into k.
                let (up, down) = if axis == 0 {
                    (C64::new(0.5, 0.0), C64::new(0.5, 0.0))
                } else {
                    (C64::new(0.0, -0.5), C64::new(0.0, 0.5))
                };
                for k in 0..n {
                    let l = self.ladder(k);
                    out[k + 1] += up * l * v[k];
                    out[k] += down * l * v[k + 1];
                }
            }
            _ => panic!("axis {axis} out of range"),
        }
        out
    }

    pub fn matrix(&self, axis: usize) -> ComplexDense {
        let m = self.dim();
        let mut out = ComplexDense::zeros(m);
        for k in 0..m {
            let mut e = vec![C64::new(0.0, 0.0); m];
            e[k] = C64::new(1.0, 0.0);
            for (j, v) in self.apply(axis, &e).into_iter().enumerate() {
                out.set(j, k, v);
            }
        }
        out
    }
}

fn monomial_axes(e: [u8; 3]) -> Vec<usize> {
    let mut axes = Vec::new();
    for (a, &p) in e.iter().enumerate() {
        for _ in 0..p {
            axes.push(a);
        }
    }
    axes
}

fn check_dicke_degree(p: &Poly3) -> Result<()> {
    if p.degree() > 2 {
        return Err(Error::DegreeExceeded {
            degree: p.degree(),
            cap: 2,
        });
    }
    Ok(())
}

/// Quantization of a polynomial of degree `<= 2` restricted to the symmetric
/// sector, via `Q(x_a) = 2J_a/N` and
/// `Q(x_a x_b) = (4 J_a J_b - Σ_i σ_a(i)σ_b(i)) / (N(N-1))` with
/// `Σ_i σ_a(i)σ_b(i) = δ_ab N + 2i ε_abc J_c`. Monomials of degree `L > N`
/// map to zero.
pub fn quantize_poly_dicke(p: &Poly3, n: usize) -> Result<ComplexDense> {
    check_dicke_degree(p)?;
    if n == 0 {
        return Err(Error::InvalidInput("need at least one site".into()));
    }
    let spin = CollectiveSpin::new(n);
    let m = n + 1;
    let mut out = ComplexDense::zeros(m);
    for k in 0..m {
        let mut e = vec![C64::new(0.0, 0.0); m];
        e[k] = C64::new(1.0, 0.0);
        let col = apply_quantized(p, &spin, &e);
        for (j, v) in col.into_iter().enumerate() {
            out.set(j, k, v);
        }
    }
    Ok(out)
}

/// `<ψ, Q(p) ψ>` in the Dicke sector without forming the matrix.
pub fn dicke_expectation(p: &Poly3, n: usize, psi: &[C64]) -> Result<f64> {
    check_dicke_degree(p)?;
    let spin = CollectiveSpin::new(n);
    let qpsi = apply_quantized(p, &spin, psi);
    let v: C64 = psi.iter().zip(&qpsi).map(|(a, b)| a.conj() * b).sum();
    Ok(v.re)
}

/// Real-vector convenience for [`dicke_expectation`].
pub fn dicke_expectation_real(p: &Poly3, n: usize, psi: &[f64]) -> Result<f64> {
    let c: Vec<C64> = psi.iter().map(|&v| C64::new(v, 0.0)).collect();
    dicke_expectation(p, n, &c)
}

fn apply_quantized(p: &Poly3, spin: &CollectiveSpin, v: &[C64]) -> Vec<C64> {
    let n = spin.sites();
    let nf = n as f64;
    let mut out = vec![C64::new(0.0, 0.0); v.len()];
    for (e, c) in p.terms() {
        let axes = monomial_axes(e);
        if axes.len() > n {
            continue;
        }
        let term: Vec<C64> = match axes.as_slice() {
            [] => v.to_vec(),
            [a] => spin.apply(*a, v).into_iter().map(|w| w * (2.0 / nf)).collect(),
            [a, b] => {
                let jb = spin.apply(*b, v);
                let jajb = spin.apply(*a, &jb);
                let mut t: Vec<C64> = jajb.iter().map(|w| w * 4.0).collect();
                if a == b {
                    for (ti, vi) in t.iter_mut().zip(v) {
                        *ti -= vi * nf;
                    }
                } else {
                    let c3 = 3 - a - b;
                    let eps = levi_civita(*a, *b, c3);
                    let jc = spin.apply(c3, v);
                    for (ti, w) in t.iter_mut().zip(&jc) {
                        *ti -= C64::new(0.0, 2.0 * eps) * w;
                    }
                }
                let norm = 1.0 / (nf * (nf - 1.0));
                t.into_iter().map(|w| w * norm).collect()
            }
            _ => unreachable!("degree checked"),
        };
        for (o, t) in out.iter_mut().zip(term) {
            *o += t * c;
        }
    }
    out
}
