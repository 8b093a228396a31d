//! Permutation symmetrizers on `(C²)^⊗N`.

use crate::error::{Error, Result};
use crate::linalg::{ComplexDense, C64};

use super::pauli::{check_sites, Pauli, PauliString};

const FULL_SYMMETRIZER_LIMIT: usize = 4;

/// Average of `factor_1(i_1) ⋯ factor_L(i_L)` over all injective placements
/// `(i_1, …, i_L)` of the factors into `n` sites.
///
/// This equals the full `n!` permutation average of
/// `factor_1 ⊗ ⋯ ⊗ factor_L ⊗ I ⊗ ⋯ ⊗ I`: every placement is hit by exactly
/// `(n-L)!` permutations.
pub fn symmetrize_place(factors: &[Pauli], n: usize) -> Result<ComplexDense> {
    check_sites(n)?;
    let l = factors.len();
    if l > n {
        return Err(Error::InvalidInput(format!(
            "{l} factors do not fit into {n} sites"
        )));
    }
    let dim = 1usize << n;
    let mut acc = ComplexDense::zeros(dim);
    let count: usize = (n - l + 1..=n).product();
    let weight = C64::new(1.0 / count as f64, 0.0);
    let mut chosen = Vec::with_capacity(l);
    let mut used = vec![false; n + 1];
    place(factors, n, &mut chosen, &mut used, &mut acc, weight)?;
    Ok(acc)
}

fn place(
    factors: &[Pauli],
    n: usize,
    chosen: &mut Vec<(usize, Pauli)>,
    used: &mut [bool],
    acc: &mut ComplexDense,
    weight: C64,
) -> Result<()> {
    if chosen.len() == factors.len() {
        PauliString::placed(n, chosen)?.accumulate(acc, weight);
        return Ok(());
    }
    let op = factors[chosen.len()];
    for site in 1..=n {
        if used[site] {
            continue;
        }
        used[site] = true;
        chosen.push((site, op));
        place(factors, n, chosen, used, acc, weight)?;
        chosen.pop();
        used[site] = false;
    }
    Ok(())
}

/// Exact `n!`-term permutation average of `a` over tensor slots, `n <= 4`.
pub fn full_symmetrizer(a: &ComplexDense, n: usize) -> Result<ComplexDense> {
    check_sites(n)?;
    if n > FULL_SYMMETRIZER_LIMIT {
        return Err(Error::SizeExceeded {
            size: n,
            limit: FULL_SYMMETRIZER_LIMIT,
        });
    }
    let dim = 1usize << n;
    if a.dim() != dim {
        return Err(Error::InvalidInput(format!(
            "operator dimension {} is not 2^{n}",
            a.dim()
        )));
    }
    let perms = permutations(n);
    let w = C64::new(1.0 / perms.len() as f64, 0.0);
    let mut out = ComplexDense::zeros(dim);
    for perm in &perms {
        let map: Vec<usize> = (0..dim).map(|b| permute_bits(b, perm, n)).collect();
        for r in 0..dim {
            for c in 0..dim {
                let v = a.get(r, c);
                if v != C64::new(0.0, 0.0) {
                    out.add_at(map[r], map[c], w * v);
                }
            }
        }
    }
    Ok(out)
}

/// Moves the bit of site `s` to site `perm[s]` (0-based sites, site 0 = MSB).
fn permute_bits(b: usize, perm: &[usize], n: usize) -> usize {
    let mut out = 0;
    for (s, &t) in perm.iter().enumerate() {
        let bit = (b >> (n - 1 - s)) & 1;
        out |= bit << (n - 1 - t);
    }
    out
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::pauli::site_embed;

    fn kron_all(ops: &[Pauli]) -> ComplexDense {
        ops.iter()
            .fold(ComplexDense::identity(1), |acc, op| acc.kron(&op.matrix()))
    }

    #[test]
    fn single_factor_is_site_average() {
        let n = 3;
        let got = symmetrize_place(&[Pauli::Z], n).unwrap();
        let mut want = ComplexDense::zeros(8);
        for i in 1..=n {
            want = want.add(&site_embed(Pauli::Z, i, n).unwrap());
        }
        assert!(got.max_abs_diff(&want.scale_real(1.0 / 3.0)) < 1e-15);
    }

    #[test]
    fn two_equal_factors_on_two_sites() {
        let got = symmetrize_place(&[Pauli::Z, Pauli::Z], 2).unwrap();
        assert!(got.max_abs_diff(&kron_all(&[Pauli::Z, Pauli::Z])) < 1e-15);
    }

    #[test]
    fn two_factors_three_sites_is_pair_average() {
        let got = symmetrize_place(&[Pauli::Z, Pauli::Z], 3).unwrap();
        let zz = |i, j| {
            site_embed(Pauli::Z, i, 3)
                .unwrap()
                .matmul(&site_embed(Pauli::Z, j, 3).unwrap())
        };
        let want = zz(1, 2).add(&zz(1, 3)).add(&zz(2, 3)).scale_real(1.0 / 3.0);
        assert!(got.max_abs_diff(&want) < 1e-15);
    }

    #[test]
    fn full_symmetrizer_of_identity() {
        let id = ComplexDense::identity(8);
        assert!(full_symmetrizer(&id, 3).unwrap().max_abs_diff(&id) < 1e-15);
    }

    #[test]
    fn full_symmetrizer_two_sites() {
        let a = kron_all(&[Pauli::Z, Pauli::X]);
        let b = kron_all(&[Pauli::X, Pauli::Z]);
        let want = a.add(&b).scale_real(0.5);
        assert!(full_symmetrizer(&a, 2).unwrap().max_abs_diff(&want) < 1e-15);
    }

    #[test]
    fn full_symmetrizer_is_idempotent() {
        let strings: [&[Pauli]; 3] = [
            &[Pauli::X, Pauli::Y],
            &[Pauli::Z, Pauli::I, Pauli::Y],
            &[Pauli::Y, Pauli::X, Pauli::Z, Pauli::X],
        ];
        for ops in strings {
            let n = ops.len();
            let once = full_symmetrizer(&kron_all(ops), n).unwrap();
            let twice = full_symmetrizer(&once, n).unwrap();
            assert!(once.max_abs_diff(&twice) < 1e-14);
        }
    }

    #[test]
    fn placement_matches_full_symmetrizer() {
        let paulis = [Pauli::X, Pauli::Y, Pauli::Z];
        for n in 1..=4 {
            for l in 0..=n {
                // A few factor sequences per (n, l), deterministic.
                for seed in 0..3 {
                    let factors: Vec<Pauli> =
                        (0..l).map(|t| paulis[(t * 2 + seed) % 3]).collect();
                    let mut padded = factors.clone();
                    padded.resize(n, Pauli::I);
                    let full = full_symmetrizer(&kron_all(&padded), n).unwrap();
                    let placed = symmetrize_place(&factors, n).unwrap();
                    assert!(placed.max_abs_diff(&full) <= 1e-13, "n={n} l={l}");
                }
            }
        }
    }

    #[test]
    fn too_many_factors() {
        assert!(symmetrize_place(&[Pauli::X, Pauli::X], 1).is_err());
        assert!(matches!(
            full_symmetrizer(&ComplexDense::identity(32), 5),
            Err(Error::SizeExceeded { .. })
        ));
    }
}
