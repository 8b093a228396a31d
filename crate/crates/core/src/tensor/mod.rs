//! Exact small-N tensor-product machinery on `(C²)^⊗N`: site embeddings,
//! permutation symmetrizers, the Bloch-ball quantization maps and the Dicke
//! projection.
//!
//! A monomial `x^a y^b z^c` of degree `L` is quantized at `N` sites as the
//! symmetrized placement of `σ₁^{⊗a} ⊗ σ₂^{⊗b} ⊗ σ₃^{⊗c}`; for `L > N` the
//! image is zero and the constant `1` maps to the identity.

mod dicke;
mod pauli;
mod poly;
mod symmetrize;

pub use dicke::{
    dicke_basis, dicke_expectation, dicke_expectation_real, dicke_project, quantize_poly_dicke,
    CollectiveSpin,
};
pub use pauli::{site_embed, Pauli, PauliString, MAX_SITES};
pub use poly::{Poly3, DEGREE_CAP};
pub use symmetrize::{full_symmetrizer, symmetrize_place};

pub use crate::linalg::ComplexDense;

use crate::error::{Error, Result};
use crate::linalg::{operator_norm, C64};

use pauli::check_sites;

/// Factor sequence `X^a Y^b Z^c` for a monomial exponent triple.
fn monomial_factors(e: [u8; 3]) -> Vec<Pauli> {
    let mut f = Vec::new();
    for (axis, &p) in e.iter().enumerate() {
        for _ in 0..p {
            f.push(Pauli::from_axis(axis));
        }
    }
    f
}

/// `Q_{1/N}(p)` on the full tensor space.
pub fn quantize_poly(p: &Poly3, n: usize) -> Result<ComplexDense> {
    check_sites(n)?;
    let dim = 1usize << n;
    let mut out = ComplexDense::zeros(dim);
    for (e, c) in p.terms() {
        let factors = monomial_factors(e);
        if factors.len() > n {
            continue;
        }
        let term = if factors.is_empty() {
            ComplexDense::identity(dim)
        } else {
            symmetrize_place(&factors, n)?
        };
        out.add_assign_scaled(&term, C64::new(c, 0.0));
    }
    Ok(out)
}

/// `-(J/2N) Σ_{i,j} σ₃(i)σ₃(j) - B Σ_j σ₁(j)` on `(C²)^⊗n`.
pub fn cw_tensor_hamiltonian(n: usize, j: f64, b: f64) -> Result<ComplexDense> {
    check_sites(n)?;
    let dim = 1usize << n;
    let mut h = ComplexDense::zeros(dim);
    let zz = C64::new(-j / (2.0 * n as f64), 0.0);
    for s in 1..=n {
        for t in 1..=n {
            let string = if s == t {
                PauliString::placed(n, &[])?
            } else {
                PauliString::placed(n, &[(s, Pauli::Z), (t, Pauli::Z)])?
            };
            string.accumulate(&mut h, zz);
        }
        PauliString::placed(n, &[(s, Pauli::X)])?.accumulate(&mut h, C64::new(-b, 0.0));
    }
    Ok(h)
}

/// Classical Curie-Weiss energy `-(J/2) z² - B x` as a polynomial.
pub fn cw_classical_poly(j: f64, b: f64) -> Poly3 {
    Poly3::from_terms([([0, 0, 2], -0.5 * j), ([1, 0, 0], -b)]).expect("degree 2")
}

/// `||H^CW/N - Q_{1/N}(h₀^CW)||` in operator norm, `2 <= n <= 10`.
pub fn verify_qnh(n: usize, j: f64, b: f64) -> Result<f64> {
    if n < 2 {
        return Err(Error::InvalidInput("verify_qnh needs n >= 2".into()));
    }
    let h = cw_tensor_hamiltonian(n, j, b)?.scale_real(1.0 / n as f64);
    let q = quantize_poly(&cw_classical_poly(j, b), n)?;
    operator_norm(&h.sub(&q))
}

/// `tr(ρ^{⊗n} A)` for the qubit density matrix with Bloch vector `(x, y, z)`.
pub fn product_state_expectation(a: &ComplexDense, n: usize, x: f64, y: f64, z: f64) -> Result<C64> {
    check_sites(n)?;
    if a.dim() != 1 << n {
        return Err(Error::InvalidInput("operator dimension mismatch".into()));
    }
    let rho = ComplexDense::from_rows(
        2,
        vec![
            C64::new(0.5 * (1.0 + z), 0.0),
            C64::new(0.5 * x, -0.5 * y),
            C64::new(0.5 * x, 0.5 * y),
            C64::new(0.5 * (1.0 - z), 0.0),
        ],
    )?;
    let mut rho_n = ComplexDense::identity(1);
    for _ in 0..n {
        rho_n = rho_n.kron(&rho);
    }
    let dim = a.dim();
    let mut tr = C64::new(0.0, 0.0);
    for r in 0..dim {
        for c in 0..dim {
            tr += rho_n.get(r, c) * a.get(c, r);
        }
    }
    Ok(tr)
}

/// Sign and scale relating commutators to Poisson brackets:
/// `(s·i/ħ)[Q(f), Q(g)] ≈ Q({f, g})` with `ħ = c/N`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct DgrConvention {
    pub sign: f64,
    pub scale: f64,
}

/// Fits `(s, c)` from the Frobenius projection of `Q({f,g})` onto
/// `i N [Q(f), Q(g)]`.
pub fn fit_convention(commutator: &ComplexDense, bracket: &ComplexDense, n: usize) -> Result<DgrConvention> {
    let scaled = commutator.scale(C64::new(0.0, n as f64));
    let num: f64 = scaled
        .entries()
        .iter()
        .zip(bracket.entries())
        .map(|(a, b)| (a.conj() * b).re)
        .sum();
    let den: f64 = scaled.entries().iter().map(|a| a.norm_sqr()).sum();
    if den == 0.0 || num == 0.0 {
        return Err(Error::FitDegenerate);
    }
    let ratio = num / den;
    Ok(DgrConvention {
        sign: ratio.signum(),
        scale: 1.0 / ratio.abs(),
    })
}

/// Measures the convention on the ball from the generator pair `(x, z)`.
pub fn measure_ball_convention(n: usize) -> Result<DgrConvention> {
    let (f, g) = (Poly3::x(), Poly3::z());
    let comm = quantize_poly(&f, n)?.commutator(&quantize_poly(&g, n)?);
    let bracket = quantize_poly(&Poly3::ball_bracket(&f, &g)?, n)?;
    fit_convention(&comm, &bracket, n)
}

/// `||(s·i·N/c)[Q(f), Q(g)] - Q({f, g})||` on the full tensor space.
pub fn ball_dgr_defect(f: &Poly3, g: &Poly3, n: usize, conv: DgrConvention) -> Result<f64> {
    let comm = quantize_poly(f, n)?.commutator(&quantize_poly(g, n)?);
    let lhs = comm.scale(C64::new(0.0, conv.sign * n as f64 / conv.scale));
    let rhs = quantize_poly(&Poly3::ball_bracket(f, g)?, n)?;
    operator_norm(&lhs.sub(&rhs))
}
