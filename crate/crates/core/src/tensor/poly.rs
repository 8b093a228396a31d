//! Real polynomials in the Bloch-ball coordinates `(x, y, z)`.

use std::collections::BTreeMap;

use crate::error::{Error, Result};

/// Total-degree cap for [`Poly3`].
pub const DEGREE_CAP: usize = 4;

/// `Σ c_abc x^a y^b z^c` with total degree at most [`DEGREE_CAP`].
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Poly3 {
    terms: BTreeMap<[u8; 3], f64>,
}

impl Poly3 {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: f64) -> Self {
        Self::monomial([0, 0, 0], c).expect("degree 0")
    }

    pub fn x() -> Self {
        Self::monomial([1, 0, 0], 1.0).expect("degree 1")
    }

    pub fn y() -> Self {
        Self::monomial([0, 1, 0], 1.0).expect("degree 1")
    }

    pub fn z() -> Self {
        Self::monomial([0, 0, 1], 1.0).expect("degree 1")
    }

    /// Coordinate polynomial for axis 0, 1, 2.
    pub fn axis(a: usize) -> Self {
        let mut e = [0u8; 3];
        e[a] = 1;
        Self::monomial(e, 1.0).expect("degree 1")
    }

    pub fn monomial(exps: [u8; 3], coeff: f64) -> Result<Self> {
        Self::from_terms([(exps, coeff)])
    }

    pub fn from_terms<I: IntoIterator<Item = ([u8; 3], f64)>>(terms: I) -> Result<Self> {
        let mut p = Poly3::zero();
        for (e, c) in terms {
            let deg = e.iter().map(|&v| v as usize).sum::<usize>();
            if deg > DEGREE_CAP {
                return Err(Error::DegreeExceeded {
                    degree: deg,
                    cap: DEGREE_CAP,
                });
            }
            if !c.is_finite() {
                return Err(Error::InvalidInput("non-finite coefficient".into()));
            }
            *p.terms.entry(e).or_insert(0.0) += c;
        }
        p.prune();
        Ok(p)
    }

    fn prune(&mut self) {
        self.terms.retain(|_, c| *c != 0.0);
    }

    pub fn terms(&self) -> impl Iterator<Item = ([u8; 3], f64)> + '_ {
        self.terms.iter().map(|(e, c)| (*e, *c))
    }

    pub fn degree(&self) -> usize {
        self.terms
            .keys()
            .map(|e| e.iter().map(|&v| v as usize).sum())
            .max()
            .unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn eval(&self, x: f64, y: f64, z: f64) -> f64 {
        self.terms
            .iter()
            .map(|(e, c)| c * x.powi(e[0] as i32) * y.powi(e[1] as i32) * z.powi(e[2] as i32))
            .sum()
    }

    pub fn add(&self, other: &Poly3) -> Poly3 {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            *out.terms.entry(*e).or_insert(0.0) += c;
        }
        out.prune();
        out
    }

    pub fn scale(&self, s: f64) -> Poly3 {
        let mut out = Poly3 {
            terms: self.terms.iter().map(|(e, c)| (*e, c * s)).collect(),
        };
        out.prune();
        out
    }

    pub fn mul(&self, other: &Poly3) -> Result<Poly3> {
        let mut terms = Vec::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                terms.push(([ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2]], ca * cb));
            }
        }
        Poly3::from_terms(terms)
    }

    /// Partial derivative along axis `a` (0 = x, 1 = y, 2 = z).
    pub fn derivative(&self, a: usize) -> Poly3 {
        let mut out = Poly3::zero();
        for (e, c) in &self.terms {
            if e[a] == 0 {
                continue;
            }
            let mut d = *e;
            d[a] -= 1;
            *out.terms.entry(d).or_insert(0.0) += c * e[a] as f64;
        }
        out.prune();
        out
    }

    /// Linear-Poisson bracket on the ball, `{f,g} = Σ ε_abc x_c ∂_a f ∂_b g`.
    pub fn ball_bracket(f: &Poly3, g: &Poly3) -> Result<Poly3> {
        let mut out = Poly3::zero();
        for a in 0..3 {
            for b in 0..3 {
                if a == b {
                    continue;
                }
                let c = 3 - a - b;
                let sign = levi_civita(a, b, c);
                let term = f
                    .derivative(a)
                    .mul(&g.derivative(b))?
                    .mul(&Poly3::axis(c))?
                    .scale(sign);
                out = out.add(&term);
            }
        }
        Ok(out)
    }
}

pub(crate) fn levi_civita(a: usize, b: usize, c: usize) -> f64 {
    match (a, b, c) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1.0,
        (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1.0,
        _ => 0.0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bracket_of_generators() {
        // {x, z} = -y.
        let b = Poly3::ball_bracket(&Poly3::x(), &Poly3::z()).unwrap();
        assert_eq!(b, Poly3::y().scale(-1.0));
        assert!((b.eval(0.0, 1.0, 0.0) + 1.0).abs() < 1e-15);
    }

    #[test]
    fn bracket_is_antisymmetric() {
        let f = Poly3::from_terms([([2, 0, 0], 0.5), ([0, 1, 1], -1.0)]).unwrap();
        let g = Poly3::from_terms([([0, 0, 2], 1.0), ([1, 0, 0], 2.0)]).unwrap();
        let fg = Poly3::ball_bracket(&f, &g).unwrap();
        let gf = Poly3::ball_bracket(&g, &f).unwrap();
        assert!(fg.add(&gf).is_zero());
        assert!(Poly3::ball_bracket(&f, &f).unwrap().is_zero());
    }

    #[test]
    fn degree_cap_enforced() {
        assert!(matches!(
            Poly3::monomial([3, 1, 1], 1.0),
            Err(Error::DegreeExceeded { degree: 5, .. })
        ));
        let q = Poly3::monomial([2, 0, 0], 1.0).unwrap();
        assert!(q.mul(&q).is_ok());
        assert!(q.mul(&q).unwrap().mul(&Poly3::x()).is_err());
    }

    #[test]
    fn evaluation() {
        let p = Poly3::from_terms([([0, 0, 2], -0.5), ([1, 0, 0], -0.5)]).unwrap();
        assert!((p.eval(0.5, 0.0, 0.75f64.sqrt()) + 0.625).abs() < 1e-15);
    }
}
