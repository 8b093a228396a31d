//! Gaussian coherent states on the double-well grid and Husimi densities on
//! a window of the phase plane.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::linalg::C64;
use crate::par::Execution;

use super::HusimiDensity;

/// Relative cutoff for the Gaussian envelope when scanning the grid.
const ENVELOPE_CUTOFF: f64 = 1e-20;
/// Husimi mass the window has to hold.
pub const TAIL_MASS: f64 = 0.999;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhasePoint {
    pub q: f64,
    pub p: f64,
}

impl PhasePoint {
    pub fn new(q: f64, p: f64) -> Result<Self> {
        if !q.is_finite() || !p.is_finite() {
            return Err(Error::InvalidInput(format!("({q}, {p}) is not finite")));
        }
        Ok(PhasePoint { q, p })
    }
}

/// Spacing and wall position of a uniform interior grid.
fn grid_geometry(grid: &[f64]) -> Result<(f64, f64)> {
    if grid.len() < 2 {
        return Err(Error::InvalidInput("grid needs at least two points".into()));
    }
    let dx = grid[1] - grid[0];
    if !(dx > 0.0) {
        return Err(Error::InvalidInput("grid must be increasing".into()));
    }
    Ok((dx, -grid[0] + dx))
}

/// `Ψ(x) = (πħ)^{-1/4} e^{-ipq/2ħ} e^{ipx/ħ} e^{-(x-q)²/2ħ}` sampled on the
/// grid with weight `sqrt(Δx)`. The centre must sit at least `5 sqrt(ħ)`
/// inside the walls.
pub fn schrodinger_coherent(qp: PhasePoint, hbar: f64, grid: &[f64]) -> Result<Vec<C64>> {
    if !(hbar > 0.0) {
        return Err(Error::InvalidInput("hbar must be positive".into()));
    }
    let (dx, wall) = grid_geometry(grid)?;
    if qp.q.abs() > wall - 5.0 * hbar.sqrt() {
        return Err(Error::TailEscape { q: qp.q });
    }
    let amp = (PI * hbar).powf(-0.25) * dx.sqrt();
    let global = -qp.p * qp.q / (2.0 * hbar);
    Ok(grid
        .iter()
        .map(|&x| {
            let u = x - qp.q;
            C64::from_polar(amp * (-u * u / (2.0 * hbar)).exp(), global + qp.p * x / hbar)
        })
        .collect())
}

/// Square window `[-w, w]²` sampled by an `points × points` trapezoid mesh.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseWindow {
    pub half_width: f64,
    pub points: usize,
}

impl PhaseWindow {
    pub fn new(half_width: f64, points: usize) -> Self {
        PhaseWindow { half_width, points }
    }

    /// `[-2, 2]²` widened by `2 sqrt(ħ)` so the ground-state Husimi mass stays
    /// inside, with the coarsest admissible mesh.
    pub fn for_hbar(hbar: f64) -> Self {
        let half_width = 2.0 + 2.0 * hbar.sqrt();
        PhaseWindow {
            half_width,
            points: Self::min_points(half_width, hbar),
        }
    }

    /// Smallest wall position `L` for which every coherent state centred in
    /// the window stays `5 sqrt(ħ)` inside the grid (with a small margin).
    pub fn required_wall(&self, hbar: f64) -> f64 {
        self.half_width + 5.0 * hbar.sqrt() + 0.25
    }

    /// Fewest mesh points per axis with spacing `<= sqrt(ħ)/4`.
    pub fn min_points(half_width: f64, hbar: f64) -> usize {
        let h = hbar.sqrt() / 4.0;
        (2.0 * half_width / h).ceil() as usize + 1
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.half_width / (self.points as f64 - 1.0)
    }

    fn axis(&self) -> (Vec<f64>, Vec<f64>) {
        let h = self.spacing();
        let n = self.points;
        let nodes = (0..n)
            .map(|i| {
                // Mirror so the mesh is exactly symmetric about 0.
                if 2 * i < n {
                    -self.half_width + i as f64 * h
                } else {
                    self.half_width - (n - 1 - i) as f64 * h
                }
            })
            .collect();
        let mut w = vec![h; n];
        w[0] = 0.5 * h;
        w[n - 1] = 0.5 * h;
        (nodes, w)
    }
}

/// Husimi density `(1/2πħ) |<Ψ^{(q,p)}, ψ>|²` of a real grid vector on the
/// window mesh. Fails with [`Error::WindowTooSmall`] when the window holds
/// less than [`TAIL_MASS`] of it.
pub fn husimi_schrodinger_density(
    psi: &[f64],
    grid: &[f64],
    hbar: f64,
    window: PhaseWindow,
    exec: Execution,
) -> Result<HusimiDensity> {
    if !(hbar > 0.0) {
        return Err(Error::InvalidInput("hbar must be positive".into()));
    }
    if psi.len() != grid.len() {
        return Err(Error::InvalidInput("state and grid lengths differ".into()));
    }
    if window.points < 2 || !(window.half_width > 0.0) {
        return Err(Error::InvalidInput("degenerate phase-space window".into()));
    }
    let required = PhaseWindow::min_points(window.half_width, hbar);
    if window.points < required {
        return Err(Error::QuadratureTooCoarse {
            required,
            available: window.points,
        });
    }
    let (dx, wall) = grid_geometry(grid)?;
    if window.half_width > wall - 5.0 * hbar.sqrt() {
        return Err(Error::TailEscape {
            q: window.half_width,
        });
    }
    let (qs, wq) = window.axis();
    let (ps, wp) = window.axis();
    let hp = window.spacing();
    let reach = (2.0 * hbar * (1.0 / ENVELOPE_CUTOFF).ln()).sqrt();
    let pref = dx / (PI * hbar).sqrt() / (2.0 * PI * hbar);
    let p0 = ps[0];
    let rows = exec.map(qs.len(), |i| {
        let q = qs[i];
        let lo = grid.partition_point(|&x| x < q - reach);
        let hi = grid.partition_point(|&x| x <= q + reach);
        // z_l = ψ_l e^{-(x_l-q)²/2ħ} e^{-i p x_l/ħ}, stepped in p by rotation.
        let mut z: Vec<C64> = Vec::with_capacity(hi - lo);
        let mut rot: Vec<C64> = Vec::with_capacity(hi - lo);
        for l in lo..hi {
            let u = grid[l] - q;
            let env = psi[l] * (-u * u / (2.0 * hbar)).exp();
            z.push(C64::from_polar(env, -p0 * grid[l] / hbar));
            rot.push(C64::from_polar(1.0, -hp * grid[l] / hbar));
        }
        let mut row = Vec::with_capacity(ps.len());
        for j in 0..ps.len() {
            if j > 0 {
                for (zl, rl) in z.iter_mut().zip(&rot) {
                    *zl *= rl;
                }
            }
            let s: C64 = z.iter().sum();
            row.push(pref * s.norm_sqr());
        }
        row
    });
    let values: Vec<f64> = rows.into_iter().flatten().collect();
    let density = HusimiDensity::new(qs, wq, ps, wp, values);
    if density.normalization() < TAIL_MASS {
        return Err(Error::WindowTooSmall {
            mass: density.normalization(),
        });
    }
    Ok(density)
}

/// `<ψ, Q_ħ^B(f) ψ> = (1/2πħ) ∫ f(q,p) |<Ψ^{(q,p)}, ψ>|² dq dp` over the
/// window.
pub fn husimi_schrodinger_expect<F>(
    psi: &[f64],
    grid: &[f64],
    hbar: f64,
    f: F,
    window: PhaseWindow,
) -> Result<f64>
where
    F: Fn(f64, f64) -> f64,
{
    let d = husimi_schrodinger_density(psi, grid, hbar, window, Execution::default())?;
    Ok(d.integrate(f))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::ground_pair_parity;
    use crate::models::{build_double_well, DoubleWellConfig};

    fn grid(hbar: f64) -> Vec<f64> {
        build_double_well(&DoubleWellConfig::new(hbar)).unwrap().1
    }

    fn husimi_config(hbar: f64) -> DoubleWellConfig {
        let mut cfg = DoubleWellConfig::new(hbar);
        cfg.half_width = PhaseWindow::for_hbar(hbar).required_wall(hbar).max(3.0);
        cfg
    }

    #[test]
    fn coherent_state_is_normalized_and_centred() {
        let g = grid(0.05);
        let psi = schrodinger_coherent(PhasePoint::new(1.0, 0.0).unwrap(), 0.05, &g).unwrap();
        let norm: f64 = psi.iter().map(|v| v.norm_sqr()).sum();
        assert!((norm - 1.0).abs() < 1e-8);
        let mean: f64 = psi.iter().zip(&g).map(|(v, x)| v.norm_sqr() * x).sum();
        assert!((mean - 1.0).abs() < 1e-8);
    }

    #[test]
    fn coherent_overlap_is_gaussian() {
        let hbar = 0.05;
        let g = grid(hbar);
        let a = schrodinger_coherent(PhasePoint::new(1.0, 0.0).unwrap(), hbar, &g).unwrap();
        let b = schrodinger_coherent(PhasePoint::new(-1.0, 0.0).unwrap(), hbar, &g).unwrap();
        let ov: C64 = a.iter().zip(&b).map(|(u, v)| u.conj() * v).sum();
        let want = (-4.0 / (4.0 * hbar)).exp();
        assert!((ov.norm() - want).abs() < 1e-12 * want.max(1.0) + 1e-15);
        assert!((ov.norm() / want - 1.0).abs() < 1e-6);
    }

    #[test]
    fn tail_escape() {
        let g = grid(0.05);
        let r = schrodinger_coherent(PhasePoint::new(2.0, 0.0).unwrap(), 0.05, &g);
        assert_eq!(r, Err(Error::TailEscape { q: 2.0 }));
    }

    #[test]
    fn ground_state_husimi_moments() {
        let hbar = 0.05;
        let (h, g) = build_double_well(&husimi_config(hbar)).unwrap();
        let gs = ground_pair_parity(&h, h.default_tol()).unwrap();
        let w = PhaseWindow::for_hbar(hbar);
        let d = husimi_schrodinger_density(&gs.vector, &g, hbar, w, Execution::Sequential).unwrap();
        assert!((d.normalization() - 1.0).abs() < 1e-3);
        assert!(d.integrate(|q, _| q).abs() < 1e-6);
        // <q²>_H = <q̂²> + ħ/2 for Gaussian smearing.
        let q2: f64 = gs.vector.iter().zip(&g).map(|(v, x)| v * v * x * x).sum();
        assert!((d.integrate(|q, _| q * q) - (q2 + hbar / 2.0)).abs() < 2e-3);
    }

    #[test]
    fn coarse_mesh_and_small_window() {
        let hbar = 0.05;
        let (h, g) = build_double_well(&husimi_config(hbar)).unwrap();
        let gs = ground_pair_parity(&h, h.default_tol()).unwrap();
        let coarse = PhaseWindow::new(2.0, 20);
        assert!(matches!(
            husimi_schrodinger_density(&gs.vector, &g, hbar, coarse, Execution::Sequential),
            Err(Error::QuadratureTooCoarse { .. })
        ));
        let tiny = PhaseWindow::new(0.5, PhaseWindow::min_points(0.5, hbar));
        assert!(matches!(
            husimi_schrodinger_density(&gs.vector, &g, hbar, tiny, Execution::Sequential),
            Err(Error::WindowTooSmall { .. })
        ));
        let (h3, g3) = build_double_well(&DoubleWellConfig::new(hbar)).unwrap();
        let gs3 = ground_pair_parity(&h3, h3.default_tol()).unwrap();
        let w = PhaseWindow::for_hbar(hbar);
        assert!(matches!(
            husimi_schrodinger_density(&gs3.vector, &g3, hbar, w, Execution::Sequential),
            Err(Error::TailEscape { .. })
        ));
    }
}
