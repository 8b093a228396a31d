//! Finite-N checks of the deformation-quantization conditions for the
//! Berezin map on the sphere, and the spin-operator symbol table.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{spectral_norm, ComplexDense, C64};
use crate::par::Execution;
use crate::tensor::{fit_convention, CollectiveSpin, DgrConvention, Poly3};

use super::sphere::{berezin_spin_matrix_with, default_degree, sphere_bracket, sphere_quadrature};

/// `N` at which the commutator convention is measured.
pub const CONVENTION_SITES: usize = 8;

/// Spin operators with a tabulated upper symbol.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SpinOperator {
    Sz,
    Sz2,
    Sx,
    Sx2,
    Sy,
    Sy2,
}

impl SpinOperator {
    pub const ALL: [SpinOperator; 6] = [
        SpinOperator::Sz,
        SpinOperator::Sz2,
        SpinOperator::Sx,
        SpinOperator::Sx2,
        SpinOperator::Sy,
        SpinOperator::Sy2,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SpinOperator::Sz => "S_z",
            SpinOperator::Sz2 => "S_z^2",
            SpinOperator::Sx => "S_x",
            SpinOperator::Sx2 => "S_x^2",
            SpinOperator::Sy => "S_y",
            SpinOperator::Sy2 => "S_y^2",
        }
    }

    /// The operator on `Sym^N(C²)` in the Dicke basis.
    pub fn matrix(self, n: usize) -> ComplexDense {
        let s = CollectiveSpin::new(n);
        let sq = |m: ComplexDense| m.matmul(&m);
        match self {
            SpinOperator::Sz => s.matrix(2),
            SpinOperator::Sz2 => sq(s.matrix(2)),
            SpinOperator::Sx => s.matrix(0),
            SpinOperator::Sx2 => sq(s.matrix(0)),
            SpinOperator::Sy => s.matrix(1),
            SpinOperator::Sy2 => sq(s.matrix(1)),
        }
    }

    /// Upper symbol as tabulated. The quadratic rows carry the trigonometric
    /// factor exactly as printed: `cos²θ` for `S_z²` but `sinθ cosφ` and
    /// `sinθ sinφ` (not squared) for `S_x²` and `S_y²`.
    pub fn printed_symbol(self, n: usize) -> Poly3 {
        let a = 0.5 * (n as f64 + 2.0);
        let b = 0.25 * (n as f64 + 2.0) * (n as f64 + 3.0);
        let c = -0.25 * (n as f64 + 2.0);
        let terms: Vec<([u8; 3], f64)> = match self {
            SpinOperator::Sz => vec![([0, 0, 1], a)],
            SpinOperator::Sx => vec![([1, 0, 0], a)],
            SpinOperator::Sy => vec![([0, 1, 0], a)],
            SpinOperator::Sz2 => vec![([0, 0, 2], b), ([0, 0, 0], c)],
            SpinOperator::Sx2 => vec![([1, 0, 0], b), ([0, 0, 0], c)],
            SpinOperator::Sy2 => vec![([0, 1, 0], b), ([0, 0, 0], c)],
        };
        Poly3::from_terms(terms).expect("degree <= 2")
    }

    /// Symbol with the trigonometric factor squared in every quadratic row.
    pub fn squared_symbol(self, n: usize) -> Poly3 {
        let b = 0.25 * (n as f64 + 2.0) * (n as f64 + 3.0);
        let c = -0.25 * (n as f64 + 2.0);
        match self {
            SpinOperator::Sx2 => Poly3::from_terms([([2, 0, 0], b), ([0, 0, 0], c)]),
            SpinOperator::Sy2 => Poly3::from_terms([([0, 2, 0], b), ([0, 0, 0], c)]),
            _ => Ok(self.printed_symbol(n)),
        }
        .expect("degree 2")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SymbolCheck {
    pub operator: SpinOperator,
    pub n: usize,
    /// Largest entrywise deviation of `Q'(symbol)` from the operator.
    pub deviation: f64,
}

/// Entrywise deviation `|Q'(G) - A_G|` for every tabulated row and every `N`.
pub fn reconstruct_table(ns: &[usize], squared: bool, exec: Execution) -> Result<Vec<SymbolCheck>> {
    let mut out = Vec::new();
    for &n in ns {
        let quad = sphere_quadrature(default_degree(n))?;
        for op in SpinOperator::ALL {
            let symbol = if squared {
                op.squared_symbol(n)
            } else {
                op.printed_symbol(n)
            };
            let q = berezin_spin_matrix_with(n, &symbol, &quad, exec)?;
            out.push(SymbolCheck {
                operator: op,
                n,
                deviation: q.max_abs_diff(&op.matrix(n)),
            });
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiagnosticRow {
    pub n: usize,
    pub pair: usize,
    /// `||Q'(f)||`.
    pub norm_f: f64,
    /// `||Q'(f)Q'(g) - Q'(fg)||`.
    pub von_neumann: f64,
    /// `||(s i/ħ_N)[Q'(f), Q'(g)] - Q'({f,g})||`, `ħ_N = c/N`.
    pub dgr: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiagnosticsReport {
    pub convention: DgrConvention,
    pub rows: Vec<DiagnosticRow>,
}

impl DiagnosticsReport {
    pub fn rows_for(&self, pair: usize) -> impl Iterator<Item = &DiagnosticRow> {
        self.rows.iter().filter(move |r| r.pair == pair)
    }

    /// Decay rate `r` of the von Neumann defect, `defect ~ N^{-r}`.
    pub fn von_neumann_rate(&self, pair: usize) -> Result<f64> {
        let (ns, vs): (Vec<f64>, Vec<f64>) =
            self.rows_for(pair).map(|r| (r.n as f64, r.von_neumann)).unzip();
        Ok(-loglog_slope(&ns, &vs)?)
    }
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn loglog_slope(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() || x.len() < 2 || x.iter().chain(y).any(|v| !(*v > 0.0)) {
        return Err(Error::FitDegenerate);
    }
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let m = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / m;
    let my = ly.iter().sum::<f64>() / m;
    let sxx: f64 = lx.iter().map(|a| (a - mx) * (a - mx)).sum();
    if sxx == 0.0 {
        return Err(Error::FitDegenerate);
    }
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    Ok(sxy / sxx)
}

/// Measures `(s, c)` for the sphere bracket from `(cosθ, sinθ cosφ)` at
/// [`CONVENTION_SITES`].
///
/// The Berezin map contracts the coordinate functions,
/// `||Q'(x_a)|| = N/(N+2)`, which biases a raw projection towards
/// `c = 2N/(N+2)`. Each image is therefore divided by its operator norm (the
/// sup norm of every coordinate function is 1) before fitting.
pub fn measure_sphere_convention(exec: Execution) -> Result<DgrConvention> {
    let n = CONVENTION_SITES;
    let (f, g) = (Poly3::z(), Poly3::x());
    let quad = sphere_quadrature(default_degree(n))?;
    let unit = |p: &Poly3| -> Result<ComplexDense> {
        let q = berezin_spin_matrix_with(n, p, &quad, exec)?;
        let norm = spectral_norm(&q)?;
        Ok(q.scale_real(1.0 / norm))
    };
    let (qf, qg) = (unit(&f)?, unit(&g)?);
    let qb = unit(&sphere_bracket(&f, &g)?)?;
    fit_convention(&qf.commutator(&qg), &qb, n)
}

/// Rieffel, von Neumann and DGR defects for each `N` and each pair.
pub fn quantization_diagnostics(
    ns: &[usize],
    pairs: &[(Poly3, Poly3)],
    exec: Execution,
) -> Result<DiagnosticsReport> {
    for (f, g) in pairs {
        for p in [f, g] {
            if p.degree() > 4 {
                return Err(Error::DegreeExceeded {
                    degree: p.degree(),
                    cap: 4,
                });
            }
        }
    }
    let conv = measure_sphere_convention(exec)?;
    let mut rows = Vec::new();
    for &n in ns {
        let quad = sphere_quadrature(default_degree(n))?;
        let q = |p: &Poly3| berezin_spin_matrix_with(n, p, &quad, exec);
        for (idx, (f, g)) in pairs.iter().enumerate() {
            let (qf, qg) = (q(f)?, q(g)?);
            let qfg = q(&f.mul(g)?)?;
            let qb = q(&sphere_bracket(f, g)?)?;
            let lhs = qf
                .commutator(&qg)
                .scale(C64::new(0.0, conv.sign * n as f64 / conv.scale));
            rows.push(DiagnosticRow {
                n,
                pair: idx,
                norm_f: spectral_norm(&qf)?,
                von_neumann: spectral_norm(&qf.matmul(&qg).sub(&qfg))?,
                dgr: spectral_norm(&lhs.sub(&qb))?,
            });
        }
    }
    Ok(DiagnosticsReport {
        convention: conv,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sphere_convention_is_plus_one_two() {
        let c = measure_sphere_convention(Execution::Sequential).unwrap();
        assert_eq!(c.sign, 1.0);
        assert!((c.scale - 2.0).abs() < 1e-10);
    }

    #[test]
    fn von_neumann_at_two_sites() {
        let r = quantization_diagnostics(&[2], &[(Poly3::z(), Poly3::z())], Execution::Sequential)
            .unwrap();
        assert!((r.rows[0].von_neumann - 0.2).abs() < 1e-12);
        assert!((r.rows[0].norm_f - 0.5).abs() < 1e-12);
    }

    #[test]
    fn von_neumann_closed_form() {
        // From the S_z and S_z² rows, Q'(cosθ)² - Q'(cos²θ) is diagonal with
        // entries (4m²/(N+2)² - 1)/(N+3), m = -N/2..N/2.
        let ns = [3, 6, 11];
        let r = quantization_diagnostics(&ns, &[(Poly3::z(), Poly3::z())], Execution::Sequential)
            .unwrap();
        for row in &r.rows {
            let nf = row.n as f64;
            let want = (0..=row.n)
                .map(|k| {
                    let m = k as f64 - nf / 2.0;
                    ((4.0 * m * m / ((nf + 2.0) * (nf + 2.0)) - 1.0) / (nf + 3.0)).abs()
                })
                .fold(0.0, f64::max);
            assert!((row.von_neumann - want).abs() < 1e-12);
            assert!((row.norm_f - row.n as f64 / (row.n as f64 + 2.0)).abs() < 1e-12);
        }
    }

    #[test]
    fn dgr_defect_for_generators() {
        // Under (s, c) = (1, 2) the defect is 2N/(N+2)² times ||S_y|| / (N/2).
        let ns = [8, 16, 32];
        let r = quantization_diagnostics(&ns, &[(Poly3::z(), Poly3::x())], Execution::Sequential)
            .unwrap();
        for row in &r.rows {
            let nf = row.n as f64;
            assert!((row.dgr - 2.0 * nf / ((nf + 2.0) * (nf + 2.0))).abs() < 1e-12);
        }
    }

    #[test]
    fn linear_rows_reconstruct() {
        let checks = reconstruct_table(&[1, 2, 5], false, Execution::Sequential).unwrap();
        for c in &checks {
            if matches!(c.operator, SpinOperator::Sz | SpinOperator::Sz2 | SpinOperator::Sx | SpinOperator::Sy) {
                assert!(c.deviation < 1e-10, "{:?} N={} dev={}", c.operator, c.n, c.deviation);
            }
        }
    }

    #[test]
    fn squared_rows_reconstruct_where_printed_rows_do_not() {
        let printed = reconstruct_table(&[5], false, Execution::Sequential).unwrap();
        let squared = reconstruct_table(&[5], true, Execution::Sequential).unwrap();
        for (p, s) in printed.iter().zip(&squared) {
            assert!(s.deviation < 1e-10, "{:?}", s.operator);
            if matches!(p.operator, SpinOperator::Sx2 | SpinOperator::Sy2) {
                assert!(p.deviation > 0.1);
            }
        }
    }

    #[test]
    fn loglog_slope_recovers_power() {
        let x = [8.0, 16.0, 32.0, 64.0];
        let y: Vec<f64> = x.iter().map(|v: &f64| 3.0 * v.powf(-1.5)).collect();
        assert!((loglog_slope(&x, &y).unwrap() + 1.5).abs() < 1e-12);
        assert_eq!(loglog_slope(&[1.0], &[1.0]), Err(Error::FitDegenerate));
    }
}
