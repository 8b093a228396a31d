//! Order-of-limits scans: a small symmetry-breaking field or bump, then the
//! semiclassical limit.

use serde::{Deserialize, Serialize};

use super::ground_state;
use crate::error::{Error, Result};
use crate::linalg::tridiag_eigs;
use crate::models::{
    apply_perturbation, build_cw_dicke, build_double_well, CurieWeissConfig, DoubleWellConfig, Perturbation,
    PerturbationTarget,
};
use crate::par::Execution;

/// Tolerance on the order parameter in both flea verdicts.
pub const FLEA_TOLERANCE: f64 = 0.05;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FleaCwVerdict {
    /// `sqrt(1 - B²/J²)`, the magnitude of the classical `z` at the minima.
    pub target: f64,
    /// (a): at the largest `N`, `m₃ ≈ -sign(ε) target` for every `ε`.
    pub large_n_pass: bool,
    /// Largest `|m₃ + sign(ε) target|` at the largest `N`.
    pub large_n_deviation: f64,
    /// (b): at the smallest `N` and smallest `|ε|`, `|m₃| ≤ 0.05`.
    pub small_field_pass: bool,
    pub small_field_m3: f64,
    /// Largest `|m₃(ε) + m₃(-ε)|` over the `±ε` pairs in the scan.
    pub antisymmetry_defect: Option<f64>,
    /// Numerically computed tunnelling splitting at the smallest `N`.
    pub splitting: f64,
    /// Whether `splitting` exceeds the eigensolver resolution.
    pub splitting_resolved: bool,
    /// Field at which `2 ε N target` equals the splitting: below it the
    /// ground state stays a symmetric mixture.
    pub crossover_epsilon: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FleaCwScan {
    pub b: f64,
    pub j: f64,
    pub epsilons: Vec<f64>,
    pub sites: Vec<usize>,
    /// `m3[i][k]` at `epsilons[i]`, `sites[k]`.
    pub m3: Vec<Vec<f64>>,
    pub verdict: FleaCwVerdict,
}

fn strictly_monotone(v: &[f64]) -> bool {
    v.windows(2).all(|w| w[0] < w[1]) || v.windows(2).all(|w| w[0] > w[1])
}

/// Order parameter `m₃ = <2J₃/N>` in the ground state of the Curie-Weiss
/// Dicke matrix plus `ε Σ σ₃`, over a grid of fields and sizes.
pub fn flea_scan_cw(b: f64, j: f64, epsilons: &[f64], sites: &[usize], exec: Execution) -> Result<FleaCwScan> {
    if !(b > 0.0 && b < j) {
        return Err(Error::InvalidInput(format!("need 0 < B < J (B = {b}, J = {j})")));
    }
    if epsilons.is_empty() || sites.is_empty() {
        return Err(Error::InvalidInput("empty flea scan".into()));
    }
    if epsilons.iter().any(|e| *e == 0.0 || !e.is_finite()) {
        return Err(Error::InvalidInput("field values must be finite and nonzero".into()));
    }
    let ns: Vec<f64> = sites.iter().map(|&n| n as f64).collect();
    if sites.contains(&0) || !strictly_monotone(&ns) {
        return Err(Error::InvalidInput("site list must be positive and strictly monotone".into()));
    }
    let m = sites.len();
    let flat = exec.map(epsilons.len() * m, |idx| {
        let (eps, n) = (epsilons[idx / m], sites[idx % m]);
        order_parameter(b, j, eps, n).map_err(|e| e.at("epsilon", eps).at("N", n as f64))
    });
    let flat = flat.into_iter().collect::<Result<Vec<f64>>>()?;
    let m3: Vec<Vec<f64>> = flat.chunks(m).map(<[f64]>::to_vec).collect();

    let target = (1.0 - (b / j).powi(2)).sqrt();
    let (big, small) = {
        let kmax = (0..m).max_by_key(|&k| sites[k]).expect("non-empty");
        let kmin = (0..m).min_by_key(|&k| sites[k]).expect("non-empty");
        (kmax, kmin)
    };
    let large_n_deviation = epsilons
        .iter()
        .zip(&m3)
        .map(|(e, row)| (row[big] + e.signum() * target).abs())
        .fold(0.0, f64::max);
    let ie = (0..epsilons.len())
        .min_by(|&a, &c| epsilons[a].abs().total_cmp(&epsilons[c].abs()))
        .expect("non-empty");
    let small_field_m3 = m3[ie][small];
    let mut antisymmetry_defect: Option<f64> = None;
    for (i, e) in epsilons.iter().enumerate() {
        if let Some(k) = epsilons.iter().position(|f| *f == -e) {
            let d = m3[i]
                .iter()
                .zip(&m3[k])
                .map(|(u, v)| (u + v).abs())
                .fold(0.0, f64::max);
            antisymmetry_defect = Some(antisymmetry_defect.map_or(d, |a: f64| a.max(d)));
        }
    }
    // The unperturbed doublet splitting at the smallest N.
    let n0 = sites[small];
    let h0 = build_cw_dicke(&CurieWeissConfig { n: n0, b, j })?;
    let spec = tridiag_eigs(&h0, 2, h0.default_tol())?;
    let splitting = (spec.values[1] - spec.values[0]).max(0.0);
    let resolution = 1e3 * h0.default_tol();
    let splitting_resolved = splitting > resolution;
    // An unresolved splitting is only known to lie below the resolution, so
    // the crossover is then an upper estimate.
    let crossover_epsilon = splitting.max(resolution) / (2.0 * n0 as f64 * target);
    Ok(FleaCwScan {
        b,
        j,
        epsilons: epsilons.to_vec(),
        sites: sites.to_vec(),
        m3,
        verdict: FleaCwVerdict {
            target,
            large_n_pass: large_n_deviation <= FLEA_TOLERANCE,
            large_n_deviation,
            small_field_pass: small_field_m3.abs() <= FLEA_TOLERANCE,
            small_field_m3,
            antisymmetry_defect,
            splitting,
            splitting_resolved,
            crossover_epsilon,
        },
    })
}

fn order_parameter(b: f64, j: f64, epsilon: f64, n: usize) -> Result<f64> {
    let cfg = CurieWeissConfig { n, b, j };
    let h = build_cw_dicke(&cfg)?;
    let h = apply_perturbation(&h, &Perturbation::CwField { epsilon }, PerturbationTarget::CurieWeiss(&cfg))?;
    let gs = ground_state(&h)?;
    let nf = n as f64;
    Ok(gs
        .vector
        .iter()
        .enumerate()
        .map(|(k, v)| v * v * ((2 * k) as f64 - nf))
        .sum::<f64>()
        / nf)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FleaSchrodingerTable {
    pub flea: Perturbation,
    pub hbar: Vec<f64>,
    /// Grid expectation `<q>` in the perturbed ground state.
    pub mean_q: Vec<f64>,
    /// At the smallest `ħ` the state sits in the well away from the bump:
    /// `-sign(q₀) <q> >= 0.8`.
    pub localized_pass: bool,
    /// At the largest `ħ` the state is still nearly symmetric: `|<q>| <= 0.1`.
    pub symmetric_pass: bool,
}

/// `<q>` in the double-well ground state with a Gaussian bump, over `ħ`.
pub fn flea_schrodinger(hbars: &[f64], flea: &Perturbation, exec: Execution) -> Result<FleaSchrodingerTable> {
    let Perturbation::SchrodingerFlea { amplitude, center, .. } = *flea else {
        return Err(Error::KindMismatch);
    };
    if !(amplitude >= 0.0) {
        return Err(Error::InvalidInput("flea amplitude must be non-negative".into()));
    }
    if hbars.is_empty() || !strictly_monotone(hbars) || hbars.iter().any(|h| !(*h >= super::MIN_HBAR)) {
        return Err(Error::InvalidInput(format!(
            "hbar list must be strictly monotone and >= {}",
            super::MIN_HBAR
        )));
    }
    let mean_q = exec
        .map_slice(hbars, |&hbar| mean_position(hbar, flea).map_err(|e| e.at("hbar", hbar)))
        .into_iter()
        .collect::<Result<Vec<f64>>>()?;
    let lo = (0..hbars.len()).min_by(|&a, &b| hbars[a].total_cmp(&hbars[b])).expect("non-empty");
    let hi = (0..hbars.len()).max_by(|&a, &b| hbars[a].total_cmp(&hbars[b])).expect("non-empty");
    Ok(FleaSchrodingerTable {
        flea: *flea,
        hbar: hbars.to_vec(),
        localized_pass: -center.signum() * mean_q[lo] >= 0.8,
        symmetric_pass: mean_q[hi].abs() <= 0.1,
        mean_q,
    })
}

fn mean_position(hbar: f64, flea: &Perturbation) -> Result<f64> {
    let (h, grid) = build_double_well(&DoubleWellConfig::new(hbar))?;
    let h = apply_perturbation(&h, flea, PerturbationTarget::DoubleWell(&grid))?;
    let gs = ground_state(&h)?;
    Ok(gs.vector.iter().zip(&grid).map(|(v, x)| v * v * x).sum())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bump(amplitude: f64, center: f64) -> Perturbation {
        Perturbation::SchrodingerFlea {
            amplitude,
            center,
            width: 0.2,
        }
    }

    #[test]
    fn field_selects_a_well_at_large_n() {
        let s = flea_scan_cw(0.5, 1.0, &[-1e-3, 1e-3], &[200, 2000], Execution::default()).unwrap();
        let m = s.m3[0][1];
        assert!((0.81..=0.92).contains(&m), "m3 = {m}");
        assert!(s.verdict.antisymmetry_defect.unwrap() <= 1e-8);
        assert!(s.verdict.large_n_pass);
    }

    #[test]
    fn small_field_scan_reports_crossover() {
        let eps = [1e-2, 1e-3, 1e-4, 1e-5, 1e-6];
        let s = flea_scan_cw(0.5, 1.0, &eps, &[100], Execution::default()).unwrap();
        // The doublet splitting at N = 100 is far below double precision, so
        // even ε = 1e-6 localizes the ground state.
        assert!(!s.verdict.splitting_resolved);
        assert!(s.verdict.crossover_epsilon > 0.0 && s.verdict.crossover_epsilon < 1e-6);
        assert!(s.m3.iter().all(|row| row[0] < -0.8));
    }

    #[test]
    fn flea_scan_preconditions() {
        assert!(flea_scan_cw(1.5, 1.0, &[1e-3], &[10], Execution::Sequential).is_err());
        assert!(flea_scan_cw(0.5, 1.0, &[0.0], &[10], Execution::Sequential).is_err());
        assert!(flea_scan_cw(0.5, 1.0, &[1e-3], &[20, 10, 30], Execution::Sequential).is_err());
    }

    #[test]
    fn bump_breaks_symmetry_before_the_limit() {
        let t = flea_schrodinger(&[0.5, 0.02], &bump(0.1, 1.0), Execution::default()).unwrap();
        assert!(t.mean_q[1] <= -0.9, "{:?}", t.mean_q);
        assert!(t.mean_q[0].abs() <= 0.1);
        assert!(t.localized_pass && t.symmetric_pass);
    }

    #[test]
    fn zero_and_mirrored_bumps() {
        let hs = [0.5, 0.1, 0.02];
        let t0 = flea_schrodinger(&hs, &bump(0.0, 1.0), Execution::default()).unwrap();
        assert!(t0.mean_q.iter().all(|q| q.abs() < 1e-8), "{:?}", t0.mean_q);
        let a = flea_schrodinger(&hs, &bump(0.1, 1.0), Execution::default()).unwrap();
        let b = flea_schrodinger(&hs, &bump(0.1, -1.0), Execution::default()).unwrap();
        for (u, v) in a.mean_q.iter().zip(&b.mean_q) {
            assert!((u + v).abs() < 1e-10, "{u} {v}");
        }
        let cw = Perturbation::CwField { epsilon: 1e-3 };
        assert_eq!(flea_schrodinger(&hs, &cw, Execution::Sequential), Err(Error::KindMismatch));
    }
}
