//! Symmetric tridiagonal eigenvalues by Sturm-sequence bisection and ground
//! vectors by shifted inverse iteration.

use crate::error::{Error, Result};

/// Pivot magnitudes in the Sturm recurrence are floored at this value.
pub const PIVOT_FLOOR: f64 = 1e-300;

const MAX_BISECTION_STEPS: usize = 200;
const MAX_INVERSE_ITERATIONS: usize = 8;

/// Real symmetric tridiagonal matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SymTridiag {
    diag: Vec<f64>,
    offdiag: Vec<f64>,
}

impl SymTridiag {
    pub fn new(diag: Vec<f64>, offdiag: Vec<f64>) -> Result<Self> {
        if diag.is_empty() {
            return Err(Error::InvalidInput("tridiagonal matrix needs n >= 1".into()));
        }
        if offdiag.len() + 1 != diag.len() {
            return Err(Error::InvalidInput(format!(
                "offdiag length {} does not match n - 1 = {}",
                offdiag.len(),
                diag.len() - 1
            )));
        }
        if diag.iter().chain(offdiag.iter()).any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("non-finite matrix entry".into()));
        }
        Ok(SymTridiag { diag, offdiag })
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    pub fn offdiag(&self) -> &[f64] {
        &self.offdiag
    }

    pub(crate) fn diag_mut(&mut self) -> &mut [f64] {
        &mut self.diag
    }

    /// Gershgorin interval containing the whole spectrum.
    pub fn gershgorin(&self) -> (f64, f64) {
        let n = self.dim();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let r = self.row_radius(i);
            lo = lo.min(self.diag[i] - r);
            hi = hi.max(self.diag[i] + r);
        }
        (lo, hi)
    }

    fn row_radius(&self, i: usize) -> f64 {
        let left = if i > 0 { self.offdiag[i - 1].abs() } else { 0.0 };
        let right = if i + 1 < self.dim() { self.offdiag[i].abs() } else { 0.0 };
        left + right
    }

    /// Maximum absolute row sum; an upper bound on the spectral norm.
    pub fn norm_bound(&self) -> f64 {
        (0..self.dim())
            .map(|i| self.diag[i].abs() + self.row_radius(i))
            .fold(0.0, f64::max)
    }

    /// Bisection width that is safely above the floating-point resolution of
    /// the spectrum.
    pub fn default_tol(&self) -> f64 {
        1e-13 * self.norm_bound().max(1.0)
    }

    pub fn matvec(&self, v: &[f64]) -> Vec<f64> {
        let n = self.dim();
        assert_eq!(v.len(), n, "vector length mismatch");
        let mut out = vec![0.0; n];
        for i in 0..n {
            let mut acc = self.diag[i] * v[i];
            if i > 0 {
                acc += self.offdiag[i - 1] * v[i - 1];
            }
            if i + 1 < n {
                acc += self.offdiag[i] * v[i + 1];
            }
            out[i] = acc;
        }
        out
    }

    /// Expectation value `v^T T v`.
    pub fn quadratic_form(&self, v: &[f64]) -> f64 {
        dot(v, &self.matvec(v))
    }

    pub fn negated(&self) -> SymTridiag {
        SymTridiag {
            diag: self.diag.iter().map(|d| -d).collect(),
            offdiag: self.offdiag.iter().map(|e| -e).collect(),
        }
    }

    pub fn scaled(&self, c: f64) -> SymTridiag {
        SymTridiag {
            diag: self.diag.iter().map(|d| c * d).collect(),
            offdiag: self.offdiag.iter().map(|e| c * e).collect(),
        }
    }

    /// Largest deviation from the index reflection `i -> n-1-i`.
    pub fn reflection_defect(&self) -> f64 {
        let n = self.dim();
        let d = (0..n).map(|i| (self.diag[i] - self.diag[n - 1 - i]).abs());
        let e = (0..n - 1).map(|i| (self.offdiag[i] - self.offdiag[n - 2 - i]).abs());
        d.chain(e).fold(0.0, f64::max)
    }

    /// Dense row-major copy.
    pub fn to_dense(&self) -> Vec<f64> {
        let n = self.dim();
        let mut out = vec![0.0; n * n];
        for i in 0..n {
            out[i * n + i] = self.diag[i];
            if i + 1 < n {
                out[i * n + i + 1] = self.offdiag[i];
                out[(i + 1) * n + i] = self.offdiag[i];
            }
        }
        out
    }
}

/// Eigenvalue with a unit eigenvector and its residual `||Tv - λv||`.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenPair {
    pub value: f64,
    pub vector: Vec<f64>,
    pub residual: f64,
}

/// Ascending eigenvalues, optionally with eigenvectors (one per value).
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub values: Vec<f64>,
    pub vectors: Option<Vec<Vec<f64>>>,
}

/// Number of eigenvalues of `t` strictly below `x`.
pub fn sturm_count(t: &SymTridiag, x: f64) -> usize {
    let d = t.diag();
    let e = t.offdiag();
    let mut count = 0;
    let mut q = d[0] - x;
    for i in 0..d.len() {
        if i > 0 {
            let guarded = if q.abs() < PIVOT_FLOOR {
                if q < 0.0 {
                    -PIVOT_FLOOR
                } else {
                    PIVOT_FLOOR
                }
            } else {
                q
            };
            q = (d[i] - x) - e[i - 1] * e[i - 1] / guarded;
        }
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// The `k` lowest eigenvalues, each bisected to a bracket of width `<= tol`.
pub fn tridiag_eigs(t: &SymTridiag, k: usize, tol: f64) -> Result<Spectrum> {
    let n = t.dim();
    if k == 0 || k > n {
        return Err(Error::InvalidInput(format!("k = {k} outside 1..={n}")));
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidInput(format!("tolerance {tol} must be positive")));
    }
    let (glo, ghi) = t.gershgorin();
    // Widen so that the strict inequality in the count holds at both ends.
    let pad = 1e-12 * (glo.abs().max(ghi.abs()).max(1.0));
    let (glo, ghi) = (glo - pad, ghi + pad);

    let mut values = Vec::with_capacity(k);
    let mut lo_floor = glo;
    for j in 0..k {
        let mut lo = lo_floor;
        let mut hi = ghi;
        let mut steps = 0;
        while hi - lo > tol {
            if steps == MAX_BISECTION_STEPS {
                return Err(Error::IterationLimit(format!(
                    "bisection for eigenvalue {j} did not reach width {tol:e}"
                )));
            }
            let mid = 0.5 * (lo + hi);
            if sturm_count(t, mid) > j {
                hi = mid;
            } else {
                lo = mid;
            }
            steps += 1;
        }
        let value = 0.5 * (lo + hi);
        values.push(value);
        lo_floor = lo;
    }
    Ok(Spectrum {
        values,
        vectors: None,
    })
}

/// Lowest eigenpair by bisection plus inverse iteration.
///
/// Fails with [`Error::NearDegenerate`] when the two lowest eigenvalues are
/// within `1e-13 ||T||`; reflection-symmetric callers then use
/// [`ground_pair_parity`].
pub fn ground_pair(t: &SymTridiag, tol: f64) -> Result<EigenPair> {
    let n = t.dim();
    let norm = t.norm_bound();
    if n == 1 {
        return Ok(EigenPair {
            value: t.diag()[0],
            vector: vec![1.0],
            residual: 0.0,
        });
    }
    let spec = tridiag_eigs(t, 2, tol)?;
    let (l0, l1) = (spec.values[0], spec.values[1]);
    if l1 - l0 <= 1e-13 * norm {
        return Err(Error::NearDegenerate {
            lower: l0,
            upper: l1,
        });
    }
    inverse_iteration(t, l0, tol)
}

/// Ground pair restricted to the even sector of the reflection `i -> n-1-i`.
///
/// The matrix is folded onto the symmetric subspace (exactly, using the
/// orthonormal basis `(e_i + e_{n-1-i})/sqrt 2`), solved there, and the vector
/// is unfolded. Exponentially small tunnelling splittings between the even and
/// odd sectors never enter.
pub fn ground_pair_parity(t: &SymTridiag, tol: f64) -> Result<EigenPair> {
    let n = t.dim();
    let norm = t.norm_bound();
    let defect = t.reflection_defect();
    if defect > 1e-12 * norm.max(1.0) {
        return Err(Error::InvalidInput(format!(
            "matrix is not reflection symmetric (defect {defect:e})"
        )));
    }
    if n == 1 {
        return ground_pair(t, tol);
    }
    let half = n / 2;
    let odd = n % 2 == 1;
    let m = if odd { half + 1 } else { half };
    let mut diag = t.diag()[..m].to_vec();
    let mut off = t.offdiag()[..m - 1].to_vec();
    if odd {
        off[half - 1] *= std::f64::consts::SQRT_2;
    } else {
        diag[half - 1] += t.offdiag()[half - 1];
    }
    let folded = SymTridiag::new(diag, off)?;
    let reduced = ground_pair(&folded, tol)?;

    let mut v = vec![0.0; n];
    let s = std::f64::consts::FRAC_1_SQRT_2;
    for i in 0..half {
        v[i] = reduced.vector[i] * s;
        v[n - 1 - i] = reduced.vector[i] * s;
    }
    if odd {
        v[half] = reduced.vector[half];
    }
    normalize(&mut v);
    fix_sign(&mut v);
    let value = t.quadratic_form(&v);
    let residual = residual(t, value, &v);
    Ok(EigenPair {
        value,
        vector: v,
        residual,
    })
}

fn inverse_iteration(t: &SymTridiag, lambda: f64, tol: f64) -> Result<EigenPair> {
    let n = t.dim();
    let scale = t.norm_bound().max(1.0);
    let target = 1e-10 * scale;
    let mut offset = (1e-12 * scale).max(2.0 * tol);
    let mut x = vec![1.0; n];
    normalize(&mut x);
    let mut best: Option<EigenPair> = None;
    let mut iter = 0;
    while iter < MAX_INVERSE_ITERATIONS {
        let shift = lambda - offset;
        let Some(mut y) = solve_shifted(t, shift, &x) else {
            offset *= 10.0;
            iter += 1;
            continue;
        };
        normalize(&mut y);
        fix_sign(&mut y);
        let value = t.quadratic_form(&y);
        let res = residual(t, value, &y);
        let pair = EigenPair {
            value,
            vector: y.clone(),
            residual: res,
        };
        // Two solves at least: the first leaves O(offset / gap) leakage.
        if res <= target && iter >= 1 {
            return Ok(pair);
        }
        best = Some(pair);
        x = y;
        iter += 1;
    }
    match best {
        Some(p) if p.residual <= target => Ok(p),
        Some(p) => Err(Error::IterationLimit(format!(
            "inverse iteration residual {:e} above {target:e}",
            p.residual
        ))),
        None => Err(Error::IterationLimit("inverse iteration hit singular pivots".into())),
    }
}

/// Solves `(T - shift I) y = b` by LDL^T without pivoting. Returns `None` on a
/// zero or non-finite pivot.
fn solve_shifted(t: &SymTridiag, shift: f64, b: &[f64]) -> Option<Vec<f64>> {
    let n = t.dim();
    let d = t.diag();
    let e = t.offdiag();
    let mut piv = vec![0.0; n];
    let mut l = vec![0.0; n.saturating_sub(1)];
    piv[0] = d[0] - shift;
    for i in 0..n - 1 {
        if piv[i] == 0.0 || !piv[i].is_finite() {
            return None;
        }
        l[i] = e[i] / piv[i];
        piv[i + 1] = d[i + 1] - shift - l[i] * e[i];
    }
    if piv[n - 1] == 0.0 || !piv[n - 1].is_finite() {
        return None;
    }
    let mut z = b.to_vec();
    for i in 1..n {
        z[i] -= l[i - 1] * z[i - 1];
    }
    for i in 0..n {
        z[i] /= piv[i];
    }
    for i in (0..n - 1).rev() {
        z[i] -= l[i] * z[i + 1];
    }
    if z.iter().all(|v| v.is_finite()) {
        Some(z)
    } else {
        None
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn normalize(v: &mut [f64]) {
    let norm = dot(v, v).sqrt();
    if norm > 0.0 {
        v.iter_mut().for_each(|x| *x /= norm);
    }
}

/// Makes the largest-magnitude component positive.
fn fix_sign(v: &mut [f64]) {
    let mut idx = 0;
    for (i, x) in v.iter().enumerate() {
        if x.abs() > v[idx].abs() {
            idx = i;
        }
    }
    if v[idx] < 0.0 {
        v.iter_mut().for_each(|x| *x = -*x);
    }
}

fn residual(t: &SymTridiag, value: f64, v: &[f64]) -> f64 {
    t.matvec(v)
        .iter()
        .zip(v)
        .map(|(tv, x)| (tv - value * x).powi(2))
        .sum::<f64>()
        .sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn laplace3() -> SymTridiag {
        SymTridiag::new(vec![2.0; 3], vec![-1.0; 2]).unwrap()
    }

    #[test]
    fn sturm_count_diagonal() {
        let t = SymTridiag::new(vec![1.0, 2.0, 3.0], vec![0.0, 0.0]).unwrap();
        assert_eq!(sturm_count(&t, 2.5), 2);
    }

    #[test]
    fn sturm_count_laplacian() {
        assert_eq!(sturm_count(&laplace3(), 2.0), 1);
    }

    #[test]
    fn sturm_count_below_gershgorin_is_zero() {
        let t = laplace3();
        let (lo, _) = t.gershgorin();
        assert_eq!(sturm_count(&t, lo - 1e-9), 0);
    }

    #[test]
    fn laplacian_spectrum_matches_cosines() {
        let tol = 1e-13;
        let spec = tridiag_eigs(&laplace3(), 3, tol).unwrap();
        for (k, v) in spec.values.iter().enumerate() {
            let exact = 2.0 - 2.0 * ((k + 1) as f64 * std::f64::consts::PI / 4.0).cos();
            assert!((v - exact).abs() <= tol, "{v} vs {exact}");
        }
    }

    #[test]
    fn constant_diagonal() {
        let t = SymTridiag::new(vec![4.25; 5], vec![0.0; 4]).unwrap();
        let spec = tridiag_eigs(&t, 1, 1e-14).unwrap();
        assert!((spec.values[0] - 4.25).abs() <= 1e-14);
    }

    #[test]
    fn bisection_reports_unreachable_tolerance() {
        let err = tridiag_eigs(&laplace3(), 1, 1e-300).unwrap_err();
        assert!(matches!(err, Error::IterationLimit(_)));
    }

    #[test]
    fn rejects_bad_k_and_lengths() {
        assert!(tridiag_eigs(&laplace3(), 0, 1e-10).is_err());
        assert!(tridiag_eigs(&laplace3(), 4, 1e-10).is_err());
        assert!(SymTridiag::new(vec![1.0, 2.0], vec![]).is_err());
        assert!(SymTridiag::new(vec![f64::NAN], vec![]).is_err());
    }

    #[test]
    fn ground_pair_two_by_two() {
        let t = SymTridiag::new(vec![-0.5, -0.5], vec![-0.5]).unwrap();
        let g = ground_pair(&t, 1e-14).unwrap();
        assert!((g.value + 1.0).abs() < 1e-12);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert!((g.vector[0] - s).abs() < 1e-12 && (g.vector[1] - s).abs() < 1e-12);
    }

    #[test]
    fn ground_pair_diagonal_picks_basis_vector() {
        let t = SymTridiag::new(vec![3.0, -1.5, 2.0, 0.5], vec![0.0; 3]).unwrap();
        let g = ground_pair(&t, 1e-14).unwrap();
        assert!((g.value + 1.5).abs() < 1e-12);
        assert!((g.vector[1] - 1.0).abs() < 1e-12);
        assert!(g.vector.iter().enumerate().all(|(i, v)| i == 1 || v.abs() < 1e-12));
    }

    #[test]
    fn ground_pair_flags_degeneracy() {
        let t = SymTridiag::new(vec![1.0, 0.0, 1.0, 0.0], vec![0.0; 3]).unwrap();
        assert!(matches!(
            ground_pair(&t, 1e-14),
            Err(Error::NearDegenerate { .. })
        ));
    }

    #[test]
    fn parity_path_matches_plain_path_when_separated() {
        for n in [5usize, 6] {
            let diag: Vec<f64> = (0..n).map(|i| ((i as f64) - (n as f64 - 1.0) / 2.0).powi(2)).collect();
            let off = vec![-0.7; n - 1];
            let t = SymTridiag::new(diag, off).unwrap();
            let a = ground_pair(&t, 1e-14).unwrap();
            let b = ground_pair_parity(&t, 1e-14).unwrap();
            assert!((a.value - b.value).abs() < 1e-12);
            for (x, y) in a.vector.iter().zip(&b.vector) {
                assert!((x - y).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn parity_path_rejects_asymmetric() {
        let t = SymTridiag::new(vec![1.0, 2.0, 3.0], vec![0.1, 0.1]).unwrap();
        assert!(ground_pair_parity(&t, 1e-12).is_err());
    }

    #[test]
    fn eigenpair_invariants_hold() {
        let diag: Vec<f64> = (0..40).map(|i| ((i * 7919) % 13) as f64 * 0.3).collect();
        let off: Vec<f64> = (0..39).map(|i| -0.2 - ((i * 31) % 5) as f64 * 0.1).collect();
        let t = SymTridiag::new(diag, off).unwrap();
        let g = ground_pair(&t, t.default_tol()).unwrap();
        let norm: f64 = dot(&g.vector, &g.vector).sqrt();
        assert!((norm - 1.0).abs() <= 1e-14);
        assert!(g.residual <= 1e-10 * t.norm_bound().max(1.0));
    }
}
