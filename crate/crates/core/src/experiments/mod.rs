//! Convergence sweeps in `N` and `ħ`, extrapolation to the limit, flea scans
//! and the acceptance harness.

mod acceptance;
mod flea;

pub use acceptance::{
    acceptance_suite, run_criterion, AcceptanceConfig, AcceptanceReport, Check, CriterionResult,
    Relation, CRITERIA,
};
pub use flea::{flea_scan_cw, flea_schrodinger, FleaCwScan, FleaCwVerdict, FleaSchrodingerTable};

use serde::{Deserialize, Serialize};

use crate::classical::{find_minima, limit_mixture, ClassicalModel, ClassicalPoint};
use crate::error::{Error, Result};
use crate::linalg::{ground_pair, ground_pair_parity, EigenPair, SymTridiag, C64};
use crate::models::{
    build_bh, build_cw_dicke, build_double_well, BhForm, BoseHubbardConfig, CurieWeissConfig,
    DoubleWellConfig,
};
use crate::par::Execution;
use crate::quantize::{
    default_degree, husimi_schrodinger_density, husimi_spin_density, sphere_quadrature,
    HusimiDensity, PhaseWindow,
};
use crate::tensor::{dicke_expectation_real, Poly3};

/// Largest Curie-Weiss sweep point.
pub const MAX_CW_SITES: usize = 5000;
/// Largest Bose-Hubbard sweep point.
pub const MAX_BH_SITES: usize = 2000;
/// Smallest `ħ` in a double-well sweep.
pub const MIN_HBAR: f64 = 0.01;
/// Errors below this are treated as round-off in the endpoint check.
pub const NOISE_FLOOR: f64 = 1e-12;

/// Lowest eigenpair, through the even sector when the matrix is exactly
/// mirror symmetric.
pub fn ground_state(h: &SymTridiag) -> Result<EigenPair> {
    if h.reflection_defect() == 0.0 {
        ground_pair_parity(h, h.default_tol())
    } else {
        ground_pair(h, h.default_tol())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SweepModel {
    CurieWeiss { j: f64, b: f64 },
    BoseHubbard { form: BhForm },
    DoubleWell { grid_points: usize },
}

impl SweepModel {
    pub fn name(&self) -> &'static str {
        self.classical().name()
    }

    pub fn param_name(&self) -> &'static str {
        match self {
            SweepModel::DoubleWell { .. } => "hbar",
            _ => "N",
        }
    }

    pub fn classical(&self) -> ClassicalModel {
        match *self {
            SweepModel::CurieWeiss { j, b } => ClassicalModel::curie_weiss(j, b),
            SweepModel::BoseHubbard { .. } => ClassicalModel::bose_hubbard(),
            SweepModel::DoubleWell { .. } => ClassicalModel::double_well(),
        }
    }

    fn plane(&self) -> bool {
        matches!(self, SweepModel::DoubleWell { .. })
    }
}

/// A named observable. Coordinates are `x, y, z` on the ball and sphere
/// (`sinθ cosφ, sinθ sinφ, cosθ`) and `q, p` on the plane; a digit after a
/// letter is a power, so `z2` is `z²` and `xz` is `x z`; `1` is the constant
/// function. `energy` is the
/// ground energy (per site for Curie-Weiss) against the classical minimum.
#[derive(Debug, Clone, PartialEq)]
pub struct Observable {
    name: String,
    kind: ObservableKind,
}

#[derive(Debug, Clone, PartialEq)]
enum ObservableKind {
    Energy,
    Poly(Poly3),
    Plane { q: i32, p: i32 },
}

impl Observable {
    pub fn parse(name: &str, model: &SweepModel) -> Result<Self> {
        let bad = || Error::InvalidInput(format!("unknown observable '{name}' for {}", model.name()));
        if name == "energy" {
            return Ok(Observable {
                name: name.into(),
                kind: ObservableKind::Energy,
            });
        }
        let letters: &[char] = if model.plane() { &['q', 'p'] } else { &['x', 'y', 'z'] };
        let mut powers = [0u8; 3];
        let mut chars = name.chars().peekable();
        if chars.peek().is_none() {
            return Err(bad());
        }
        // "1" is the unit function: the Husimi mass.
        if name == "1" {
            chars.next();
        }
        while let Some(c) = chars.next() {
            let axis = letters.iter().position(|&l| l == c).ok_or_else(bad)?;
            let mut e = 1u8;
            if let Some(d) = chars.peek().and_then(|d| d.to_digit(10)) {
                chars.next();
                e = d as u8;
            }
            powers[axis] = powers[axis].checked_add(e).ok_or_else(bad)?;
        }
        let kind = if model.plane() {
            ObservableKind::Plane {
                q: powers[0] as i32,
                p: powers[1] as i32,
            }
        } else {
            ObservableKind::Poly(Poly3::monomial(powers, 1.0)?)
        };
        Ok(Observable {
            name: name.into(),
            kind,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    fn classical(&self, point: &ClassicalPoint) -> f64 {
        let c = point.coords();
        match &self.kind {
            ObservableKind::Energy => unreachable!("energy uses the minimum value"),
            ObservableKind::Poly(p) => match point {
                ClassicalPoint::Sphere(s) => {
                    let v = s.cartesian();
                    p.eval(v[0], v[1], v[2])
                }
                _ => p.eval(c[0], c[1], c[2]),
            },
            ObservableKind::Plane { q, p } => c[0].powi(*q) * c[1].powi(*p),
        }
    }

    fn degree(&self) -> usize {
        match &self.kind {
            ObservableKind::Energy => 0,
            ObservableKind::Poly(p) => p.degree(),
            ObservableKind::Plane { q, p } => (q + p) as usize,
        }
    }
}

/// A sweep of one model over its semiclassical parameter.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub model: SweepModel,
    /// `N` values for the spin models, `ħ` values for the double well.
    pub params: Vec<f64>,
    pub observables: Vec<String>,
    pub exec: Execution,
}

impl SweepSpec {
    pub fn new(model: SweepModel, params: Vec<f64>, observables: &[&str]) -> Self {
        SweepSpec {
            model,
            params,
            observables: observables.iter().map(|s| s.to_string()).collect(),
            exec: Execution::default(),
        }
    }

    pub fn with_exec(mut self, exec: Execution) -> Self {
        self.exec = exec;
        self
    }

    fn validate(&self) -> Result<Vec<Observable>> {
        let p = &self.params;
        if p.is_empty() {
            return Err(Error::InvalidInput("empty parameter list".into()));
        }
        if p.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("non-finite parameter".into()));
        }
        let up = p.windows(2).all(|w| w[0] < w[1]);
        let down = p.windows(2).all(|w| w[0] > w[1]);
        if !up && !down {
            return Err(Error::InvalidInput("parameter list must be strictly monotone".into()));
        }
        let name = self.model.param_name();
        for &v in p {
            match self.model {
                SweepModel::DoubleWell { .. } => {
                    if !(v >= MIN_HBAR) {
                        return Err(Error::InvalidInput(format!("hbar below {MIN_HBAR}")).at(name, v));
                    }
                }
                _ => {
                    let limit = match self.model {
                        SweepModel::CurieWeiss { .. } => MAX_CW_SITES,
                        _ => MAX_BH_SITES,
                    };
                    if v < 1.0 || v.fract() != 0.0 {
                        return Err(Error::InvalidInput("N must be a positive integer".into()).at(name, v));
                    }
                    if v > limit as f64 {
                        return Err(Error::SizeExceeded {
                            size: v as usize,
                            limit,
                        }
                        .at(name, v));
                    }
                }
            }
        }
        if self.observables.is_empty() {
            return Err(Error::InvalidInput("no observables".into()));
        }
        self.observables
            .iter()
            .map(|o| Observable::parse(o, &self.model))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRecord {
    pub model: String,
    pub param_name: String,
    pub param_value: f64,
    pub observable: String,
    pub quantum: f64,
    pub classical: f64,
    /// `|quantum - classical|`.
    pub abs_error: f64,
}

impl ConvergenceRecord {
    pub fn new(model: &str, param_name: &str, param_value: f64, observable: &str, quantum: f64, classical: f64) -> Self {
        ConvergenceRecord {
            model: model.into(),
            param_name: param_name.into(),
            param_value,
            observable: observable.into(),
            quantum,
            classical,
            abs_error: (quantum - classical).abs(),
        }
    }

    /// Distance from the limit, as an effective `N` (`1/ħ` for `ħ` sweeps).
    pub fn effective_n(&self) -> f64 {
        if self.param_name == "hbar" {
            1.0 / self.param_value
        } else {
            self.param_value
        }
    }
}

/// Quantum expectations of all observables at one sweep point.
fn evaluate_point(model: &SweepModel, param: f64, obs: &[Observable]) -> Result<Vec<f64>> {
    let exec = Execution::Sequential;
    match *model {
        SweepModel::CurieWeiss { j, b } => {
            let n = param as usize;
            let h = build_cw_dicke(&CurieWeissConfig { n, b, j })?;
            let gs = ground_state(&h)?;
            obs.iter()
                .map(|o| match &o.kind {
                    ObservableKind::Energy => Ok(gs.value / n as f64),
                    ObservableKind::Poly(p) => dicke_expectation_real(p, n, &gs.vector),
                    ObservableKind::Plane { .. } => unreachable!("checked by parse"),
                })
                .collect()
        }
        SweepModel::BoseHubbard { form } => {
            let n = param as usize;
            let h = build_bh(&BoseHubbardConfig::new(n).with_form(form))?;
            let gs = ground_state(&h)?;
            let psi: Vec<C64> = gs.vector.iter().map(|&v| C64::new(v, 0.0)).collect();
            let extra = obs.iter().map(Observable::degree).max().unwrap_or(0);
            let quad = sphere_quadrature(default_degree(n).max(2 * n + extra))?;
            let density = husimi_spin_density(&psi, &quad, exec)?;
            Ok(obs
                .iter()
                .map(|o| match &o.kind {
                    ObservableKind::Energy => gs.value,
                    ObservableKind::Poly(p) => integrate_sphere(&density, p),
                    ObservableKind::Plane { .. } => unreachable!("checked by parse"),
                })
                .collect())
        }
        SweepModel::DoubleWell { grid_points } => {
            let hbar = param;
            let window = PhaseWindow::for_hbar(hbar);
            let cfg = DoubleWellConfig {
                hbar,
                half_width: window.required_wall(hbar).max(3.0),
                grid_points,
            };
            let (h, grid) = build_double_well(&cfg)?;
            let gs = ground_state(&h)?;
            let density = husimi_schrodinger_density(&gs.vector, &grid, hbar, window, exec)?;
            Ok(obs
                .iter()
                .map(|o| match o.kind {
                    ObservableKind::Energy => gs.value,
                    ObservableKind::Plane { q, p } => density.integrate(|a, b| a.powi(q) * b.powi(p)),
                    ObservableKind::Poly(_) => unreachable!("checked by parse"),
                })
                .collect())
        }
    }
}

fn integrate_sphere(density: &HusimiDensity, p: &Poly3) -> f64 {
    density.integrate(|t, f| {
        let s = t.sin();
        p.eval(s * f.cos(), s * f.sin(), t.cos())
    })
}

/// Quantum expectations in the ground state against the classical
/// ground-state mixture, one record per (parameter, observable), sorted by
/// parameter value. Sweep points run under `spec.exec`; each point is
/// computed sequentially.
pub fn run_limit_sweep(spec: &SweepSpec) -> Result<Vec<ConvergenceRecord>> {
    let obs = spec.validate()?;
    let cm = spec.model.classical();
    let minima = find_minima(&cm)?;
    let mixture = limit_mixture(&minima, &cm)?;
    let classical: Vec<f64> = obs
        .iter()
        .map(|o| match o.kind {
            ObservableKind::Energy => minima.value,
            _ => mixture.evaluate(|pt| o.classical(pt)),
        })
        .collect();
    let pname = spec.model.param_name();
    let values = spec
        .exec
        .map_slice(&spec.params, |&v| evaluate_point(&spec.model, v, &obs).map_err(|e| e.at(pname, v)));
    let mut records = Vec::with_capacity(spec.params.len() * obs.len());
    for (&v, row) in spec.params.iter().zip(values) {
        for ((o, q), &c) in obs.iter().zip(row?).zip(&classical) {
            records.push(ConvergenceRecord::new(spec.model.name(), pname, v, o.name(), q, c));
        }
    }
    records.sort_by(|a, b| a.param_value.total_cmp(&b.param_value));
    Ok(records)
}

/// Records of one observable ordered towards the limit.
pub fn records_for<'a>(records: &'a [ConvergenceRecord], observable: &str) -> Vec<&'a ConvergenceRecord> {
    let mut out: Vec<_> = records.iter().filter(|r| r.observable == observable).collect();
    out.sort_by(|a, b| a.effective_n().total_cmp(&b.effective_n()));
    out
}

/// Error nearest the limit against error farthest from it, per observable:
/// `(observable, first, last)`. Growth below [`NOISE_FLOOR`] is ignored.
pub fn endpoint_errors(records: &[ConvergenceRecord]) -> Vec<(String, f64, f64, bool)> {
    let mut names: Vec<&str> = Vec::new();
    for r in records {
        if !names.contains(&r.observable.as_str()) {
            names.push(&r.observable);
        }
    }
    names
        .into_iter()
        .map(|name| {
            let rs = records_for(records, name);
            let first = rs.first().map_or(0.0, |r| r.abs_error);
            let last = rs.last().map_or(0.0, |r| r.abs_error);
            (name.to_string(), first, last, last <= first.max(NOISE_FLOOR))
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FitMethod {
    /// `v∞ + a N^{-r}` with fitted `r`.
    PowerLaw,
    /// Two-point Richardson step with `r = 1`.
    Richardson,
    /// All values equal.
    Constant,
    /// Fewer than [`FIT_POINTS`] records; the last value is returned as is.
    Degenerate,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LimitEstimate {
    pub value: f64,
    /// Fitted exponent `r`, if a power law was fitted.
    pub rate: Option<f64>,
    /// RMS residual of the fit; infinite for [`FitMethod::Degenerate`].
    pub residual: f64,
    pub method: FitMethod,
}

/// Records nearest the limit that enter the fit: three parameters plus one
/// degree of freedom for the residual. Points farther out are usually
/// pre-asymptotic and bias `v∞`.
pub const FIT_POINTS: usize = 4;
const RATE_MIN: f64 = 0.1;
const RATE_MAX: f64 = 4.0;

/// Least-squares `(v∞, a, rss)` of `v = v∞ + a t` with `t = N^{-r}`.
fn fit_rate(ns: &[f64], vs: &[f64], r: f64) -> Option<(f64, f64, f64)> {
    let m = ns.len() as f64;
    let ts: Vec<f64> = ns.iter().map(|n| n.powf(-r)).collect();
    let st: f64 = ts.iter().sum();
    let stt: f64 = ts.iter().map(|t| t * t).sum();
    let sv: f64 = vs.iter().sum();
    let stv: f64 = ts.iter().zip(vs).map(|(t, v)| t * v).sum();
    let det = m * stt - st * st;
    if !(det.abs() > 1e-300) {
        return None;
    }
    let a = (m * stv - st * sv) / det;
    let v0 = (sv - a * st) / m;
    let rss = ts.iter().zip(vs).map(|(t, v)| (v - v0 - a * t).powi(2)).sum();
    Some((v0, a, rss))
}

/// Extrapolates one observable's quantum values to the limit by fitting
/// `v(N) = v∞ + a N^{-r}` (`N = 1/ħ` for `ħ` sweeps) to the [`FIT_POINTS`]
/// records nearest the limit: a scan over `r`
/// followed by golden-section refinement, each step a linear least-squares
/// solve. When the best `r` sits on the scan boundary the two points nearest
/// the limit give a Richardson estimate with `r = 1`.
pub fn extrapolate(records: &[&ConvergenceRecord]) -> Result<LimitEstimate> {
    if records.is_empty() || records.iter().any(|r| !r.quantum.is_finite()) {
        return Err(Error::FitDegenerate);
    }
    let mut pts: Vec<(f64, f64)> = records.iter().map(|r| (r.effective_n(), r.quantum)).collect();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    let tail = &pts[pts.len().saturating_sub(FIT_POINTS)..];
    let ns: Vec<f64> = tail.iter().map(|p| p.0).collect();
    let vs: Vec<f64> = tail.iter().map(|p| p.1).collect();
    let last = *vs.last().expect("non-empty");
    if pts.len() < FIT_POINTS {
        return Ok(LimitEstimate {
            value: last,
            rate: None,
            residual: f64::INFINITY,
            method: FitMethod::Degenerate,
        });
    }
    let scale = vs.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(f64::MIN_POSITIVE);
    if vs.iter().all(|&v| (v - last).abs() <= 4.0 * f64::EPSILON * scale) {
        return Ok(LimitEstimate {
            value: last,
            rate: None,
            residual: 0.0,
            method: FitMethod::Constant,
        });
    }
    let rms = |rss: f64| (rss / ns.len() as f64).sqrt();
    let rss_at = |r: f64| fit_rate(&ns, &vs, r).map_or(f64::INFINITY, |f| f.2);

    let steps = ((RATE_MAX - RATE_MIN) / 0.01).round() as usize;
    let (mut best_r, mut best) = (RATE_MIN, f64::INFINITY);
    for i in 0..=steps {
        let r = RATE_MIN + i as f64 * 0.01;
        let s = rss_at(r);
        if s < best {
            best = s;
            best_r = r;
        }
    }
    let on_boundary = best_r <= RATE_MIN + 1e-9 || best_r >= RATE_MAX - 1e-9;
    if !best.is_finite() || on_boundary {
        let k = ns.len();
        let (n1, n2, v1, v2) = (ns[k - 2], ns[k - 1], vs[k - 2], vs[k - 1]);
        return Ok(LimitEstimate {
            value: (n2 * v2 - n1 * v1) / (n2 - n1),
            rate: Some(1.0),
            residual: rms(rss_at(1.0)),
            method: FitMethod::Richardson,
        });
    }
    // Golden-section refinement on the bracketing cell.
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let (mut lo, mut hi) = (best_r - 0.01, best_r + 0.01);
    let mut c = hi - g * (hi - lo);
    let mut d = lo + g * (hi - lo);
    let (mut fc, mut fd) = (rss_at(c), rss_at(d));
    for _ in 0..80 {
        if fc < fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - g * (hi - lo);
            fc = rss_at(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + g * (hi - lo);
            fd = rss_at(d);
        }
    }
    let r = 0.5 * (lo + hi);
    let (v0, _, rss) = fit_rate(&ns, &vs, r).ok_or(Error::FitDegenerate)?;
    Ok(LimitEstimate {
        value: v0,
        rate: Some(r),
        residual: rms(rss),
        method: FitMethod::PowerLaw,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn synthetic(f: impl Fn(f64) -> f64) -> Vec<ConvergenceRecord> {
        [50.0, 100.0, 200.0, 500.0, 1000.0]
            .iter()
            .map(|&n| ConvergenceRecord::new("synthetic", "N", n, "v", f(n), 0.0))
            .collect()
    }

    fn refs(r: &[ConvergenceRecord]) -> Vec<&ConvergenceRecord> {
        r.iter().collect()
    }

    #[test]
    fn power_law_is_recovered() {
        let r = synthetic(|n| 0.75 - 1.0 / n);
        let e = extrapolate(&refs(&r)).unwrap();
        assert_eq!(e.method, FitMethod::PowerLaw);
        assert!((e.value - 0.75).abs() < 1e-9, "{e:?}");
        assert!((e.rate.unwrap() - 1.0).abs() < 1e-5, "{e:?}");
        let r = synthetic(|n| -0.2 + 3.0 * n.powf(-1.5));
        let e = extrapolate(&refs(&r)).unwrap();
        assert!((e.value + 0.2).abs() < 1e-8 && (e.rate.unwrap() - 1.5).abs() < 1e-4);
    }

    #[test]
    fn constant_and_short_sequences() {
        let r = synthetic(|_| 0.3);
        let e = extrapolate(&refs(&r)).unwrap();
        assert_eq!((e.value, e.residual, e.method), (0.3, 0.0, FitMethod::Constant));
        let e = extrapolate(&refs(&r[..3])).unwrap();
        assert_eq!(e.method, FitMethod::Degenerate);
        assert!(e.residual.is_infinite());
        assert_eq!(extrapolate(&[]), Err(Error::FitDegenerate));
    }

    #[test]
    fn rate_outside_scan_falls_back_to_richardson() {
        let r = synthetic(|n| 0.5 + 1e3 * n.powi(-6));
        let e = extrapolate(&refs(&r)).unwrap();
        assert_eq!(e.method, FitMethod::Richardson);
        assert_eq!(e.rate, Some(1.0));
        assert!(e.residual.is_finite());
    }

    #[test]
    fn hbar_records_use_inverse_hbar() {
        let r: Vec<_> = [0.5, 0.2, 0.1, 0.05, 0.02]
            .iter()
            .map(|&h| ConvergenceRecord::new("double_well", "hbar", h, "v", 1.0 - 2.0 * h, 1.0))
            .collect();
        let e = extrapolate(&refs(&r)).unwrap();
        assert!((e.value - 1.0).abs() < 1e-9 && (e.rate.unwrap() - 1.0).abs() < 1e-5);
    }

    #[test]
    fn observable_names() {
        let cw = SweepModel::CurieWeiss { j: 1.0, b: 0.5 };
        let dw = SweepModel::DoubleWell { grid_points: 2048 };
        assert!(Observable::parse("z2", &cw).is_ok());
        assert!(Observable::parse("xz", &cw).is_ok());
        assert!(Observable::parse("q", &cw).is_err());
        assert!(Observable::parse("p2", &dw).is_ok());
        assert!(Observable::parse("", &dw).is_err());
    }

    #[test]
    fn invalid_sweeps() {
        let cw = SweepModel::CurieWeiss { j: 1.0, b: 0.5 };
        let s = SweepSpec::new(cw, vec![100.0, 50.0, 200.0], &["x"]);
        assert!(matches!(run_limit_sweep(&s), Err(Error::InvalidInput(_))));
        let s = SweepSpec::new(cw, vec![100.0, 6000.0], &["x"]);
        assert!(matches!(run_limit_sweep(&s), Err(Error::AtParameter { .. })));
        let dw = SweepModel::DoubleWell { grid_points: 2048 };
        let s = SweepSpec::new(dw, vec![0.1, 0.005], &["q"]);
        assert!(run_limit_sweep(&s).is_err());
    }

    #[test]
    fn curie_weiss_sweep() {
        let cw = SweepModel::CurieWeiss { j: 1.0, b: 0.5 };
        let s = SweepSpec::new(cw, vec![50.0, 100.0, 200.0, 500.0, 1000.0], &["x", "z", "z2", "energy"]);
        let recs = run_limit_sweep(&s).unwrap();
        assert_eq!(recs.len(), 20);
        assert!(recs.windows(2).all(|w| w[0].param_value <= w[1].param_value));
        for r in &recs {
            assert_eq!(r.abs_error, (r.quantum - r.classical).abs());
            if r.observable == "z" {
                assert!(r.quantum.abs() < 1e-10);
            }
        }
        let x = records_for(&recs, "x");
        assert!(x.last().unwrap().abs_error < x.first().unwrap().abs_error);
        assert!((x.last().unwrap().quantum - 0.5).abs() < 0.01);
        assert!(endpoint_errors(&recs).iter().all(|e| e.3));
    }

    #[test]
    fn bose_hubbard_sweep_small() {
        let bh = SweepModel::BoseHubbard { form: BhForm::Spin };
        let s = SweepSpec::new(bh, vec![20.0, 40.0, 80.0], &["z", "z2", "x"]);
        let recs = run_limit_sweep(&s).unwrap();
        let z2 = records_for(&recs, "z2");
        assert!((z2[2].classical - 0.75).abs() < 1e-8);
        assert!(z2[2].abs_error < z2[0].abs_error);
        assert!(records_for(&recs, "z").iter().all(|r| r.quantum.abs() < 1e-8));
    }

    #[test]
    fn sweeps_are_deterministic_across_policies() {
        let dw = SweepModel::DoubleWell { grid_points: 1024 };
        let s = SweepSpec::new(dw, vec![0.5, 0.2, 0.1], &["q", "q2", "p2", "energy"]);
        let a = run_limit_sweep(&s.clone().with_exec(Execution::Sequential)).unwrap();
        let b = run_limit_sweep(&s.with_exec(Execution::Parallel)).unwrap();
        assert_eq!(a, b);
        assert!(records_for(&a, "q").iter().all(|r| r.quantum.abs() < 1e-6));
    }
}
