//! Single-site Pauli operators and their tensor embeddings.
//!
//! Site 1 is the leftmost Kronecker factor, i.e. the most significant bit of
//! the computational index. Local state `0` is spin up (`σ₃ = +1`).

use crate::error::{Error, Result};
use crate::linalg::{ComplexDense, C64};

/// Largest number of sites handled by the dense tensor machinery.
pub const MAX_SITES: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub fn matrix(self) -> ComplexDense {
        let z = C64::new(0.0, 0.0);
        let one = C64::new(1.0, 0.0);
        let i = C64::new(0.0, 1.0);
        let rows = match self {
            Pauli::I => vec![one, z, z, one],
            Pauli::X => vec![z, one, one, z],
            Pauli::Y => vec![z, -i, i, z],
            Pauli::Z => vec![one, z, z, -one],
        };
        ComplexDense::from_rows(2, rows).expect("2x2")
    }

    /// Image of local basis state `bit`: `(flipped bit, phase)`.
    pub fn act(self, bit: usize) -> (usize, C64) {
        match (self, bit) {
            (Pauli::I, b) => (b, C64::new(1.0, 0.0)),
            (Pauli::X, b) => (b ^ 1, C64::new(1.0, 0.0)),
            (Pauli::Y, 0) => (1, C64::new(0.0, 1.0)),
            (Pauli::Y, _) => (0, C64::new(0.0, -1.0)),
            (Pauli::Z, 0) => (0, C64::new(1.0, 0.0)),
            (Pauli::Z, _) => (1, C64::new(-1.0, 0.0)),
        }
    }

    /// Bloch-ball coordinate index (x, y, z) -> Pauli.
    pub fn from_axis(axis: usize) -> Pauli {
        match axis {
            0 => Pauli::X,
            1 => Pauli::Y,
            2 => Pauli::Z,
            _ => panic!("axis {axis} out of range"),
        }
    }
}

pub(crate) fn check_sites(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidInput("need at least one site".into()));
    }
    if n > MAX_SITES {
        return Err(Error::SizeExceeded {
            size: n,
            limit: MAX_SITES,
        });
    }
    Ok(())
}

/// `I ⊗ … ⊗ op ⊗ … ⊗ I` with `op` in slot `site` (1-based) of `n`.
pub fn site_embed(op: Pauli, site: usize, n: usize) -> Result<ComplexDense> {
    check_sites(n)?;
    if site == 0 || site > n {
        return Err(Error::InvalidInput(format!("site {site} outside 1..={n}")));
    }
    let mut out = ComplexDense::identity(1);
    for s in 1..=n {
        let factor = if s == site { op.matrix() } else { Pauli::I.matrix() };
        out = out.kron(&factor);
    }
    Ok(out)
}

/// Product of single-site operators, one per site, acting on `(C²)^⊗n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PauliString {
    ops: Vec<Pauli>,
}

impl PauliString {
    pub fn new(ops: Vec<Pauli>) -> Result<Self> {
        check_sites(ops.len())?;
        Ok(PauliString { ops })
    }

    /// `op_k` at the given 1-based sites, identity elsewhere.
    pub fn placed(n: usize, placements: &[(usize, Pauli)]) -> Result<Self> {
        check_sites(n)?;
        let mut ops = vec![Pauli::I; n];
        for &(site, op) in placements {
            if site == 0 || site > n {
                return Err(Error::InvalidInput(format!("site {site} outside 1..={n}")));
            }
            ops[site - 1] = op;
        }
        Ok(PauliString { ops })
    }

    pub fn sites(&self) -> usize {
        self.ops.len()
    }

    /// Image of computational basis state `b`: `(b', phase)` with
    /// `P|b> = phase |b'>`.
    pub fn act(&self, b: usize) -> (usize, C64) {
        let n = self.ops.len();
        let mut out = 0usize;
        let mut phase = C64::new(1.0, 0.0);
        for (s, op) in self.ops.iter().enumerate() {
            let shift = n - 1 - s;
            let (bit, ph) = op.act((b >> shift) & 1);
            out |= bit << shift;
            phase *= ph;
        }
        (out, phase)
    }

    /// Adds `weight * P` into `acc`.
    pub fn accumulate(&self, acc: &mut ComplexDense, weight: C64) {
        let dim = 1usize << self.ops.len();
        assert_eq!(acc.dim(), dim, "dimension mismatch");
        for b in 0..dim {
            let (row, phase) = self.act(b);
            acc.add_at(row, b, weight * phase);
        }
    }

    pub fn to_dense(&self) -> ComplexDense {
        let mut m = ComplexDense::zeros(1 << self.ops.len());
        self.accumulate(&mut m, C64::new(1.0, 0.0));
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_site_is_pauli_itself() {
        for op in [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z] {
            assert_eq!(site_embed(op, 1, 1).unwrap(), op.matrix());
        }
    }

    #[test]
    fn z_on_first_of_two() {
        let m = site_embed(Pauli::Z, 1, 2).unwrap();
        assert_eq!(m, ComplexDense::diagonal(&[1.0, 1.0, -1.0, -1.0]));
    }

    #[test]
    fn identity_embedding() {
        for i in 1..=3 {
            assert_eq!(site_embed(Pauli::I, i, 3).unwrap(), ComplexDense::identity(8));
        }
    }

    #[test]
    fn string_action_matches_kronecker() {
        let ops = [Pauli::Y, Pauli::X, Pauli::Z];
        let s = PauliString::new(ops.to_vec()).unwrap();
        let mut kron = ComplexDense::identity(1);
        for op in ops {
            kron = kron.kron(&op.matrix());
        }
        assert!(s.to_dense().max_abs_diff(&kron) < 1e-15);
        let prod = site_embed(Pauli::Y, 1, 3)
            .unwrap()
            .matmul(&site_embed(Pauli::X, 2, 3).unwrap())
            .matmul(&site_embed(Pauli::Z, 3, 3).unwrap());
        assert!(s.to_dense().max_abs_diff(&prod) < 1e-15);
    }

    #[test]
    fn size_guard() {
        assert!(matches!(
            site_embed(Pauli::X, 1, 11),
            Err(Error::SizeExceeded { .. })
        ));
        assert!(site_embed(Pauli::X, 0, 3).is_err());
    }
}
