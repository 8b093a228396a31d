//! Matrix Hamiltonians for the three models and their symmetry-breaking
//! perturbations.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{ComplexDense, SymTridiag};
use crate::tensor;

/// Double-well potential `(q² - 1)²`.
pub fn double_well_potential(q: f64) -> f64 {
    let s = q * q - 1.0;
    s * s
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DoubleWellConfig {
    pub hbar: f64,
    pub half_width: f64,
    pub grid_points: usize,
}

impl DoubleWellConfig {
    pub fn new(hbar: f64) -> Self {
        DoubleWellConfig {
            hbar,
            half_width: 3.0,
            grid_points: 2048,
        }
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.half_width / (self.grid_points as f64 + 1.0)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.hbar > 0.0) || !self.hbar.is_finite() {
            return Err(Error::InvalidInput(format!("hbar = {} must be positive", self.hbar)));
        }
        if !(self.half_width > 0.0) {
            return Err(Error::InvalidInput("half_width must be positive".into()));
        }
        if self.grid_points < 64 {
            return Err(Error::InvalidInput(format!(
                "grid_points = {} below 64",
                self.grid_points
            )));
        }
        let limit = self.hbar.sqrt() / 8.0;
        let dx = self.spacing();
        if dx > limit {
            return Err(Error::ResolutionGuard { dx, limit });
        }
        Ok(())
    }
}

/// Interior grid `x_i = -L + iΔx`, `i = 1..=M`, mirrored exactly about 0.
pub fn double_well_grid(cfg: &DoubleWellConfig) -> Vec<f64> {
    let m = cfg.grid_points;
    let dx = cfg.spacing();
    let mut x = vec![0.0; m];
    for i in 0..m.div_ceil(2) {
        let xi = -cfg.half_width + (i + 1) as f64 * dx;
        x[i] = xi;
        x[m - 1 - i] = -xi;
    }
    if m % 2 == 1 {
        x[m / 2] = 0.0;
    }
    x
}

/// Second-order finite-difference `-ħ² d²/dx² + V` with Dirichlet walls at
/// `±L`. Returns the matrix and the grid.
pub fn build_double_well(cfg: &DoubleWellConfig) -> Result<(SymTridiag, Vec<f64>)> {
    cfg.validate()?;
    let x = double_well_grid(cfg);
    let dx = cfg.spacing();
    let kinetic = cfg.hbar * cfg.hbar / (dx * dx);
    let diag = x.iter().map(|&q| 2.0 * kinetic + double_well_potential(q)).collect();
    let off = vec![-kinetic; x.len() - 1];
    Ok((SymTridiag::new(diag, off)?, x))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurieWeissConfig {
    pub n: usize,
    pub b: f64,
    pub j: f64,
}

impl CurieWeissConfig {
    pub fn new(n: usize) -> Self {
        CurieWeissConfig { n, b: 0.5, j: 1.0 }
    }

    fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::InvalidInput("Curie-Weiss needs N >= 1".into()));
        }
        if !self.b.is_finite() || !self.j.is_finite() {
            return Err(Error::InvalidInput("non-finite coupling".into()));
        }
        Ok(())
    }
}

/// Curie-Weiss Hamiltonian in the Dicke basis (`k` = number of up spins):
/// `diag(k) = -(J/2N)(2k-N)²`, `offdiag(k) = -B sqrt((N-k)(k+1))`.
pub fn build_cw_dicke(cfg: &CurieWeissConfig) -> Result<SymTridiag> {
    cfg.validate()?;
    let n = cfg.n;
    let nf = n as f64;
    let diag = (0..=n)
        .map(|k| {
            let m = (2 * k) as f64 - nf;
            -(cfg.j / (2.0 * nf)) * m * m
        })
        .collect();
    let off = (0..n)
        .map(|k| -cfg.b * (((n - k) * (k + 1)) as f64).sqrt())
        .collect();
    SymTridiag::new(diag, off)
}

/// Curie-Weiss Hamiltonian on the full tensor space, `N <= 10`.
pub fn build_cw_tensor(cfg: &CurieWeissConfig) -> Result<ComplexDense> {
    cfg.validate()?;
    tensor::cw_tensor_hamiltonian(cfg.n, cfg.j, cfg.b)
}

/// Which closed form of the normalized two-site Bose-Hubbard Hamiltonian to
/// build. All three are tridiagonal in the occupation basis `n₁ = 0..=N` and
/// reflection symmetric under `n₁ -> N - n₁`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BhForm {
    /// `-2/(N+1)² (S_z² - N + ½) - S_x/(N+1)`; its upper symbol tends to
    /// `-½(sinθ cosφ + cos²θ)`.
    #[default]
    Spin,
    /// Occupation-number Hamiltonian with hopping scaled by `1/(N+1)` and
    /// interactions by `1/(N+1)²`:
    /// `diag = -2/(N+1)² ((2n₁-N)² - N + ½)`.
    Occupation,
    /// The tridiagonal entries as usually tabulated:
    /// `diag = -2/(N+1)² ((2n₁-N)² + N - ½)`. Differs from
    /// [`BhForm::Occupation`] by a multiple of the identity.
    Printed,
}

impl BhForm {
    pub fn parse(s: &str) -> Option<BhForm> {
        match s {
            "spin" => Some(BhForm::Spin),
            "occupation" => Some(BhForm::Occupation),
            "printed" => Some(BhForm::Printed),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            BhForm::Spin => "spin",
            BhForm::Occupation => "occupation",
            BhForm::Printed => "printed",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoseHubbardConfig {
    pub n: usize,
    pub hopping: f64,
    pub onsite: f64,
    pub neighbor: f64,
    pub form: BhForm,
}

impl BoseHubbardConfig {
    pub fn new(n: usize) -> Self {
        BoseHubbardConfig {
            n,
            hopping: 1.0,
            onsite: -2.0,
            neighbor: -2.0,
            form: BhForm::Spin,
        }
    }

    pub fn with_form(mut self, form: BhForm) -> Self {
        self.form = form;
        self
    }
}

/// Normalized two-site Bose-Hubbard Hamiltonian at `T = 1, U = -2, ρ = -2`.
pub fn build_bh(cfg: &BoseHubbardConfig) -> Result<SymTridiag> {
    if cfg.n == 0 {
        return Err(Error::InvalidInput("Bose-Hubbard needs N >= 1".into()));
    }
    if cfg.hopping != 1.0 || cfg.onsite != -2.0 || cfg.neighbor != -2.0 {
        return Err(Error::UnsupportedParameters(format!(
            "only T = 1, U = -2, rho = -2 are supported (got {}, {}, {})",
            cfg.hopping, cfg.onsite, cfg.neighbor
        )));
    }
    let n = cfg.n;
    let nf = n as f64;
    let p = nf + 1.0;
    let ladder = |k: usize| (((n - k) * (k + 1)) as f64).sqrt();
    let (diag, off): (Vec<f64>, Vec<f64>) = match cfg.form {
        BhForm::Spin => (
            (0..=n)
                .map(|k| {
                    let sz = k as f64 - nf / 2.0;
                    -2.0 / (p * p) * (sz * sz - nf + 0.5)
                })
                .collect(),
            (0..n).map(|k| -ladder(k) / (2.0 * p)).collect(),
        ),
        BhForm::Occupation | BhForm::Printed => {
            let shift = if cfg.form == BhForm::Printed {
                nf - 0.5
            } else {
                -nf + 0.5
            };
            (
                (0..=n)
                    .map(|k| {
                        let m = (2 * k) as f64 - nf;
                        -2.0 / (p * p) * (m * m + shift)
                    })
                    .collect(),
                (0..n).map(|k| -ladder(k) / p).collect(),
            )
        }
    };
    SymTridiag::new(diag, off)
}

/// Symmetry-breaking perturbations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Perturbation {
    /// `ε Σ σ₃(x)`; adds `ε(2k - N)` to the Dicke diagonal.
    CwField { epsilon: f64 },
    /// Gaussian bump `δ exp(-(x - q₀)²/w²)` added to the potential.
    SchrodingerFlea { amplitude: f64, center: f64, width: f64 },
}

/// The model a matrix was built for, as needed to place a perturbation.
#[derive(Debug, Clone, Copy)]
pub enum PerturbationTarget<'a> {
    CurieWeiss(&'a CurieWeissConfig),
    DoubleWell(&'a [f64]),
    BoseHubbard,
}

/// Returns a perturbed copy of `h`.
pub fn apply_perturbation(
    h: &SymTridiag,
    p: &Perturbation,
    target: PerturbationTarget<'_>,
) -> Result<SymTridiag> {
    let mut out = h.clone();
    match (p, target) {
        (Perturbation::CwField { epsilon }, PerturbationTarget::CurieWeiss(cfg)) => {
            if h.dim() != cfg.n + 1 {
                return Err(Error::KindMismatch);
            }
            let nf = cfg.n as f64;
            for (k, d) in out.diag_mut().iter_mut().enumerate() {
                *d += epsilon * ((2 * k) as f64 - nf);
            }
        }
        (
            Perturbation::SchrodingerFlea {
                amplitude,
                center,
                width,
            },
            PerturbationTarget::DoubleWell(grid),
        ) => {
            if !(*width > 0.0) {
                return Err(Error::InvalidInput("flea width must be positive".into()));
            }
            if grid.len() != h.dim() {
                return Err(Error::KindMismatch);
            }
            for (d, &x) in out.diag_mut().iter_mut().zip(grid) {
                let u = (x - center) / width;
                *d += amplitude * (-u * u).exp();
            }
        }
        _ => return Err(Error::KindMismatch),
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{ground_pair, ground_pair_parity, tridiag_eigs};
    use crate::tensor::dicke_project;

    #[test]
    fn potential_samples() {
        assert_eq!(double_well_potential(0.0), 1.0);
        assert_eq!(double_well_potential(1.0), 0.0);
        assert_eq!(double_well_potential(-1.0), 0.0);
    }

    #[test]
    fn grid_is_mirror_symmetric() {
        let cfg = DoubleWellConfig::new(0.05);
        let x = double_well_grid(&cfg);
        assert_eq!(x.len(), 2048);
        for i in 0..x.len() {
            assert_eq!(x[i], -x[x.len() - 1 - i]);
        }
        assert!((x[0] + 3.0 - cfg.spacing()).abs() < 1e-14);
    }

    #[test]
    fn resolution_guard() {
        let mut cfg = DoubleWellConfig::new(0.01);
        cfg.grid_points = 400;
        assert!(matches!(
            build_double_well(&cfg),
            Err(Error::ResolutionGuard { .. })
        ));
        cfg.grid_points = 32;
        assert!(build_double_well(&cfg).is_err());
    }

    #[test]
    fn harmonic_estimate_of_ground_energy() {
        let hbar = 0.05;
        let (h, _) = build_double_well(&DoubleWellConfig::new(hbar)).unwrap();
        let g = ground_pair_parity(&h, h.default_tol()).unwrap();
        assert!((g.value - 2.0 * hbar).abs() <= 0.1 * 2.0 * hbar, "{}", g.value);
    }

    #[test]
    fn cw_n1_matrix() {
        let h = build_cw_dicke(&CurieWeissConfig::new(1)).unwrap();
        assert_eq!(h.diag(), &[-0.5, -0.5]);
        assert_eq!(h.offdiag(), &[-0.5]);
        let g = ground_pair(&h, 1e-14).unwrap();
        assert!((g.value + 1.0).abs() < 1e-12);
    }

    #[test]
    fn cw_dicke_reflection() {
        let h = build_cw_dicke(&CurieWeissConfig::new(9)).unwrap();
        assert_eq!(h.reflection_defect(), 0.0);
    }

    #[test]
    fn cw_n2_ground_energy() {
        // Characteristic polynomial of the 3x3 Dicke matrix at J=1, B=1/2:
        // diag (-1, 0, -1), off -sqrt(2)/2. The even sector is
        // [[-1, -1], [-1, 0]], lowest root (-1 - sqrt 5)/2.
        let h = build_cw_dicke(&CurieWeissConfig::new(2)).unwrap();
        let s = tridiag_eigs(&h, 1, 1e-14).unwrap();
        let exact = (-1.0 - 5f64.sqrt()) / 2.0;
        assert!((s.values[0] - exact).abs() < 1e-13);
        assert!((s.values[0] + 1.618034).abs() < 1e-6);
    }

    #[test]
    fn cw_dicke_matches_tensor_projection() {
        for n in 1..=6 {
            let cfg = CurieWeissConfig { n, b: 0.9, j: 0.5 };
            let dicke = build_cw_dicke(&cfg).unwrap();
            let proj = dicke_project(&build_cw_tensor(&cfg).unwrap(), n).unwrap();
            let dense = ComplexDense::from_real(n + 1, &dicke.to_dense()).unwrap();
            assert!(proj.max_abs_diff(&dense) <= 1e-12, "n = {n}");
        }
    }

    #[test]
    fn bh_printed_n1() {
        let cfg = BoseHubbardConfig::new(1).with_form(BhForm::Printed);
        let h = build_bh(&cfg).unwrap();
        assert_eq!(h.diag(), &[-0.75, -0.75]);
        assert_eq!(h.offdiag(), &[-0.5]);
        let g = ground_pair(&h, 1e-14).unwrap();
        assert!((g.value + 1.25).abs() < 1e-12);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert!((g.vector[0] - s).abs() < 1e-12 && (g.vector[1] - s).abs() < 1e-12);
    }

    #[test]
    fn bh_forms_are_reflection_symmetric() {
        for form in [BhForm::Spin, BhForm::Occupation, BhForm::Printed] {
            let h = build_bh(&BoseHubbardConfig::new(7).with_form(form)).unwrap();
            assert_eq!(h.reflection_defect(), 0.0);
            assert!(h.offdiag().iter().all(|&e| e < 0.0));
        }
    }

    #[test]
    fn bh_printed_differs_from_occupation_by_identity() {
        for n in 1..=8 {
            let a = build_bh(&BoseHubbardConfig::new(n).with_form(BhForm::Printed)).unwrap();
            let b = build_bh(&BoseHubbardConfig::new(n).with_form(BhForm::Occupation)).unwrap();
            let p = (n + 1) as f64;
            let offset = -2.0 * (2.0 * n as f64 - 1.0) / (p * p);
            for (x, y) in a.diag().iter().zip(b.diag()) {
                assert!((x - y - offset).abs() < 1e-13);
            }
            assert_eq!(a.offdiag(), b.offdiag());
        }
    }

    #[test]
    fn bh_rejects_non_default_parameters() {
        let mut cfg = BoseHubbardConfig::new(4);
        cfg.onsite = -1.0;
        assert!(matches!(
            build_bh(&cfg),
            Err(Error::UnsupportedParameters(_))
        ));
    }

    #[test]
    fn zero_field_is_identity() {
        let cfg = CurieWeissConfig::new(6);
        let h = build_cw_dicke(&cfg).unwrap();
        let p = apply_perturbation(
            &h,
            &Perturbation::CwField { epsilon: 0.0 },
            PerturbationTarget::CurieWeiss(&cfg),
        )
        .unwrap();
        assert_eq!(p, h);
    }

    #[test]
    fn cw_field_shifts_diagonal_only() {
        let cfg = CurieWeissConfig::new(4);
        let h = build_cw_dicke(&cfg).unwrap();
        let eps = 0.3;
        let p = apply_perturbation(
            &h,
            &Perturbation::CwField { epsilon: eps },
            PerturbationTarget::CurieWeiss(&cfg),
        )
        .unwrap();
        for k in 0..=4 {
            let want = h.diag()[k] + eps * (2.0 * k as f64 - 4.0);
            assert!((p.diag()[k] - want).abs() < 1e-15);
        }
        assert_eq!(p.offdiag(), h.offdiag());
    }

    #[test]
    fn kind_mismatch() {
        let cfg = CurieWeissConfig::new(4);
        let h = build_cw_dicke(&cfg).unwrap();
        let flea = Perturbation::SchrodingerFlea {
            amplitude: 0.1,
            center: 1.0,
            width: 0.2,
        };
        assert_eq!(
            apply_perturbation(&h, &flea, PerturbationTarget::CurieWeiss(&cfg)),
            Err(Error::KindMismatch)
        );
        assert_eq!(
            apply_perturbation(
                &h,
                &Perturbation::CwField { epsilon: 0.1 },
                PerturbationTarget::BoseHubbard
            ),
            Err(Error::KindMismatch)
        );
    }

    #[test]
    fn flea_in_right_well_pushes_mass_left() {
        let cfg = DoubleWellConfig::new(0.05);
        let (h, grid) = build_double_well(&cfg).unwrap();
        let flea = Perturbation::SchrodingerFlea {
            amplitude: 0.1,
            center: 1.0,
            width: 0.2,
        };
        let hp = apply_perturbation(&h, &flea, PerturbationTarget::DoubleWell(&grid)).unwrap();
        let g = ground_pair(&hp, hp.default_tol()).unwrap();
        let mean_q: f64 = g.vector.iter().zip(&grid).map(|(v, x)| v * v * x).sum();
        assert!(mean_q < -0.8, "<q> = {mean_q}");
    }
}
