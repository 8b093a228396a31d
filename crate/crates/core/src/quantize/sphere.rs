//! Spin coherent states, sphere quadrature, Berezin matrices and Husimi
//! densities on `S²`.

use std::f64::consts::{PI, TAU};

use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::linalg::{ComplexDense, C64};
use crate::par::{ordered_sum, Execution};
use crate::tensor::Poly3;

use super::HusimiDensity;

/// Largest `N` accepted by the coherent-state routines.
pub const MAX_SPIN_SITES: usize = 1_000_000;
/// Largest quadrature degree.
pub const MAX_QUAD_DEGREE: usize = 5000;

/// A point of the unit sphere, `θ ∈ [0, π]`, `φ ∈ [0, 2π)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpherePoint {
    theta: f64,
    phi: f64,
}

impl SpherePoint {
    /// `φ` is wrapped into `[0, 2π)`; at the poles it is set to 0.
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        if !theta.is_finite() || !phi.is_finite() || !(0.0..=PI).contains(&theta) {
            return Err(Error::InvalidInput(format!(
                "({theta}, {phi}) is not a sphere point"
            )));
        }
        let phi = if theta == 0.0 || theta == PI {
            0.0
        } else {
            let w = phi.rem_euclid(TAU);
            if w >= TAU {
                0.0
            } else {
                w
            }
        };
        Ok(SpherePoint { theta, phi })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    /// `(sinθ cosφ, sinθ sinφ, cosθ)`.
    pub fn cartesian(&self) -> [f64; 3] {
        let (st, ct) = self.theta.sin_cos();
        let (sp, cp) = self.phi.sin_cos();
        [st * cp, st * sp, ct]
    }
}

/// A real function on the sphere with a declared polynomial degree in the
/// Cartesian coordinates. The degree drives quadrature-exactness checks.
pub trait SphereFunction: Sync {
    fn eval(&self, p: SpherePoint) -> f64;
    fn degree(&self) -> usize;
}

impl SphereFunction for Poly3 {
    fn eval(&self, p: SpherePoint) -> f64 {
        let [x, y, z] = p.cartesian();
        Poly3::eval(self, x, y, z)
    }

    fn degree(&self) -> usize {
        Poly3::degree(self)
    }
}

/// A closure with a declared degree.
pub struct SphereFn<F> {
    degree: usize,
    f: F,
}

impl<F: Fn(SpherePoint) -> f64 + Sync> SphereFn<F> {
    pub fn new(degree: usize, f: F) -> Self {
        SphereFn { degree, f }
    }
}

impl<F: Fn(SpherePoint) -> f64 + Sync> SphereFunction for SphereFn<F> {
    fn eval(&self, p: SpherePoint) -> f64 {
        (self.f)(p)
    }

    fn degree(&self) -> usize {
        self.degree
    }
}

/// Product rule: Gauss-Legendre in `u = cosθ` times the trapezoid rule in `φ`.
/// Exact for polynomials in `(x, y, z)` of degree at most [`SphereQuad::degree`].
#[derive(Debug, Clone, PartialEq)]
pub struct SphereQuad {
    degree: usize,
    theta: Vec<f64>,
    u_weights: Vec<f64>,
    n_phi: usize,
}

impl SphereQuad {
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn thetas(&self) -> &[f64] {
        &self.theta
    }

    pub fn u_weights(&self) -> &[f64] {
        &self.u_weights
    }

    pub fn n_phi(&self) -> usize {
        self.n_phi
    }

    pub fn phi(&self, j: usize) -> f64 {
        TAU * j as f64 / self.n_phi as f64
    }

    pub fn phi_weight(&self) -> f64 {
        TAU / self.n_phi as f64
    }

    pub fn len(&self) -> usize {
        self.theta.len() * self.n_phi
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// All `(point, weight)` pairs, `θ`-major.
    pub fn nodes(&self) -> Vec<(SpherePoint, f64)> {
        let mut out = Vec::with_capacity(self.len());
        for (&t, &w) in self.theta.iter().zip(&self.u_weights) {
            for j in 0..self.n_phi {
                let p = SpherePoint::new(t, self.phi(j)).expect("valid node");
                out.push((p, w * self.phi_weight()));
            }
        }
        out
    }

    pub fn integrate<F: Fn(SpherePoint) -> f64>(&self, f: F) -> f64 {
        ordered_sum(self.nodes().into_iter().map(|(p, w)| w * f(p)))
    }

    fn require(&self, required: usize) -> Result<()> {
        if self.degree < required {
            return Err(Error::QuadratureTooCoarse {
                required,
                available: self.degree,
            });
        }
        Ok(())
    }
}

/// Gauss-Legendre nodes (ascending) and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut z = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, z);
            let dz = p / d;
            z -= dz;
            if dz.abs() <= 1e-16 {
                break;
            }
        }
        let dp = legendre_with_derivative(n, z).1;
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    if n % 2 == 1 {
        x[n / 2] = 0.0;
    }
    (x, w)
}

fn legendre_with_derivative(n: usize, z: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, z);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * z * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (z * p1 - p0) / (z * z - 1.0);
    (p1, d)
}

/// Quadrature exact for polynomials of degree `<= max_degree` on the sphere.
pub fn sphere_quadrature(max_degree: usize) -> Result<SphereQuad> {
    if max_degree > MAX_QUAD_DEGREE {
        return Err(Error::SizeExceeded {
            size: max_degree,
            limit: MAX_QUAD_DEGREE,
        });
    }
    let n_u = (max_degree + 2).div_ceil(2);
    let (u, w) = gauss_legendre(n_u);
    Ok(SphereQuad {
        degree: max_degree,
        theta: u.iter().map(|&v| v.clamp(-1.0, 1.0).acos()).collect(),
        u_weights: w,
        n_phi: max_degree + 2,
    })
}

/// Default quadrature degree for Husimi integrals at `N` sites: `2N + 8`.
pub fn default_degree(n: usize) -> usize {
    2 * n + 8
}

fn check_spin_sites(n: usize) -> Result<()> {
    if n == 0 || n > MAX_SPIN_SITES {
        return Err(Error::SizeExceeded {
            size: n,
            limit: MAX_SPIN_SITES,
        });
    }
    Ok(())
}

/// `ln k!` for `k = 0..=n`.
pub(crate) fn ln_factorials(n: usize) -> Vec<f64> {
    let mut t = Vec::with_capacity(n + 1);
    let mut acc = 0.0;
    t.push(0.0);
    for k in 1..=n {
        acc += (k as f64).ln();
        t.push(acc);
    }
    t
}

/// `|c_k| = sqrt(C(N,k)) cos^k(θ/2) sin^(N-k)(θ/2)`, normalized.
fn coherent_magnitudes(n: usize, theta: f64, lnf: &[f64]) -> Vec<f64> {
    let (s, c) = (0.5 * theta).sin_cos();
    let mut out = vec![0.0; n + 1];
    if s <= 0.0 {
        out[n] = 1.0;
        return out;
    }
    if c <= 0.0 {
        out[0] = 1.0;
        return out;
    }
    let (lc, ls) = (c.ln(), s.ln());
    let logs: Vec<f64> = (0..=n)
        .map(|k| {
            0.5 * (lnf[n] - lnf[k] - lnf[n - k]) + k as f64 * lc + (n - k) as f64 * ls
        })
        .collect();
    let top = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    for (o, l) in out.iter_mut().zip(&logs) {
        *o = (l - top).exp();
    }
    let norm = out.iter().map(|v| v * v).sum::<f64>().sqrt();
    out.iter_mut().for_each(|v| *v /= norm);
    out
}

/// Dicke coefficients of the coherent state `|Ω>`, `k` = number of up spins:
/// `c_k = sqrt(C(N,k)) cos^k(θ/2) (e^{iφ} sin(θ/2))^(N-k)`.
pub fn spin_coherent_coeffs(n: usize, omega: SpherePoint) -> Result<Vec<C64>> {
    check_spin_sites(n)?;
    let lnf = ln_factorials(n);
    let a = coherent_magnitudes(n, omega.theta, &lnf);
    Ok(a
        .iter()
        .enumerate()
        .map(|(k, &m)| C64::from_polar(m, omega.phi * (n - k) as f64))
        .collect())
}

/// `Q'(f) = ((N+1)/4π) ∫ f(Ω) |Ω><Ω| dΩ` in the Dicke basis.
pub fn berezin_spin_matrix(n: usize, f: &dyn SphereFunction, quad: &SphereQuad) -> Result<ComplexDense> {
    berezin_spin_matrix_with(n, f, quad, Execution::default())
}

pub fn berezin_spin_matrix_with(
    n: usize,
    f: &dyn SphereFunction,
    quad: &SphereQuad,
    exec: Execution,
) -> Result<ComplexDense> {
    check_spin_sites(n)?;
    quad.require(2 * n + f.degree())?;
    let lnf = ln_factorials(n);
    let m = n + 1;
    let n_phi = quad.n_phi;
    let pref = (n + 1) as f64 / (4.0 * PI);
    // Row i contributes a_j a_k F_i(k - j) with
    // F_i(d) = Σ_l w_φ f(θ_i, φ_l) e^{i d φ_l}.
    let partial = exec.map(quad.theta.len(), |i| {
        let theta = quad.theta[i];
        let a = coherent_magnitudes(n, theta, &lnf);
        let fvals: Vec<f64> = (0..n_phi)
            .map(|l| {
                let p = SpherePoint::new(theta, quad.phi(l)).expect("valid node");
                f.eval(p)
            })
            .collect();
        let fourier: Vec<C64> = (0..2 * n + 1)
            .map(|idx| {
                let d = idx as f64 - n as f64;
                let mut acc = C64::new(0.0, 0.0);
                for (l, &fv) in fvals.iter().enumerate() {
                    acc += C64::from_polar(fv, d * quad.phi(l));
                }
                acc * quad.phi_weight()
            })
            .collect();
        let scale = pref * quad.u_weights[i];
        let mut block = vec![C64::new(0.0, 0.0); m * m];
        for j in 0..m {
            for k in 0..m {
                block[j * m + k] = fourier[n + k - j] * (scale * a[j] * a[k]);
            }
        }
        block
    });
    let mut out = ComplexDense::zeros(m);
    for block in partial {
        for (o, b) in out.entries_mut().iter_mut().zip(block) {
            *o += b;
        }
    }
    Ok(out)
}

/// Husimi density `((N+1)/4π) |<Ω|ψ>|²` of a Dicke vector at the quadrature
/// nodes, one FFT over `φ` per `θ` node.
pub fn husimi_spin_density(psi: &[C64], quad: &SphereQuad, exec: Execution) -> Result<HusimiDensity> {
    if psi.len() < 2 {
        return Err(Error::InvalidInput("Dicke vector needs N >= 1".into()));
    }
    let n = psi.len() - 1;
    check_spin_sites(n)?;
    quad.require(2 * n)?;
    let norm2: f64 = psi.iter().map(|v| v.norm_sqr()).sum();
    if (norm2 - 1.0).abs() > 1e-8 {
        return Err(Error::InvalidInput(format!("state norm² = {norm2}, expected 1")));
    }
    let lnf = ln_factorials(n);
    let n_phi = quad.n_phi;
    let fft = FftPlanner::<f64>::new().plan_fft_forward(n_phi);
    let pref = (n + 1) as f64 / (4.0 * PI);
    let rows = exec.map(quad.theta.len(), |i| {
        let a = coherent_magnitudes(n, quad.theta[i], &lnf);
        // <Ω|ψ> = Σ_k a_k e^{-iφ(N-k)} ψ_k, a forward DFT in the index N - k.
        let mut buf = vec![C64::new(0.0, 0.0); n_phi];
        for k in 0..=n {
            buf[n - k] = psi[k] * a[k];
        }
        fft.process(&mut buf);
        buf.iter().map(|v| (pref * v.norm_sqr()).max(0.0)).collect::<Vec<f64>>()
    });
    let values: Vec<f64> = rows.into_iter().flatten().collect();
    Ok(HusimiDensity::new(
        quad.theta.clone(),
        quad.u_weights.clone(),
        (0..n_phi).map(|j| quad.phi(j)).collect(),
        vec![quad.phi_weight(); n_phi],
        values,
    ))
}

/// `<ψ, Q'(f) ψ> = ((N+1)/4π) ∫ f(Ω) |<Ω|ψ>|² dΩ` without forming `Q'(f)`.
pub fn husimi_spin_expect(psi: &[C64], f: &dyn SphereFunction, quad: &SphereQuad) -> Result<f64> {
    let n = psi.len().saturating_sub(1);
    quad.require(2 * n + f.degree())?;
    let density = husimi_spin_density(psi, quad, Execution::default())?;
    Ok(density.integrate(|t, p| f.eval(SpherePoint { theta: t, phi: p })))
}

/// Sphere Poisson bracket `{f,g} = (1/sinθ)(∂_φ f ∂_θ g - ∂_θ f ∂_φ g)` of
/// polynomials, as a polynomial. On the sphere this equals `-x·(∇f × ∇g)`.
pub fn sphere_bracket(f: &Poly3, g: &Poly3) -> Result<Poly3> {
    Ok(Poly3::ball_bracket(f, g)?.scale(-1.0))
}
