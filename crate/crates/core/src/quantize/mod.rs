//! Coherent states, Husimi densities, Berezin quantization on the sphere and
//! finite-N diagnostics of the deformation-quantization conditions.

mod diagnostics;
mod schrodinger;
mod sphere;

pub use diagnostics::{
    loglog_slope, measure_sphere_convention, quantization_diagnostics, reconstruct_table,
    DiagnosticRow, DiagnosticsReport, SpinOperator, SymbolCheck, CONVENTION_SITES,
};
pub use schrodinger::{
    husimi_schrodinger_density, husimi_schrodinger_expect, schrodinger_coherent, PhasePoint,
    PhaseWindow, TAIL_MASS,
};
pub use sphere::{
    berezin_spin_matrix, berezin_spin_matrix_with, default_degree, gauss_legendre,
    husimi_spin_density, husimi_spin_expect, sphere_bracket, sphere_quadrature,
    spin_coherent_coeffs, SphereFn, SphereFunction, SpherePoint, SphereQuad, MAX_QUAD_DEGREE,
    MAX_SPIN_SITES,
};

use crate::par::ordered_sum;

/// A Husimi density sampled on a product grid with product weights:
/// `(θ, φ)` nodes of a sphere rule or `(q, p)` nodes of a phase-plane mesh.
#[derive(Debug, Clone, PartialEq)]
pub struct HusimiDensity {
    axis0: Vec<f64>,
    weights0: Vec<f64>,
    axis1: Vec<f64>,
    weights1: Vec<f64>,
    values: Vec<f64>,
    normalization: f64,
}

impl HusimiDensity {
    /// Values are row-major in `axis0`; entries below zero are clipped.
    pub(crate) fn new(
        axis0: Vec<f64>,
        weights0: Vec<f64>,
        axis1: Vec<f64>,
        weights1: Vec<f64>,
        mut values: Vec<f64>,
    ) -> Self {
        debug_assert_eq!(values.len(), axis0.len() * axis1.len());
        values.iter_mut().for_each(|v| *v = v.max(0.0));
        let mut d = HusimiDensity {
            axis0,
            weights0,
            axis1,
            weights1,
            values,
            normalization: 0.0,
        };
        d.normalization = d.integrate(|_, _| 1.0);
        d
    }

    /// `∫ f · density`, summed in node order.
    pub fn integrate<F: Fn(f64, f64) -> f64>(&self, f: F) -> f64 {
        let m = self.axis1.len();
        ordered_sum(self.axis0.iter().zip(&self.weights0).enumerate().map(|(i, (&a, &wa))| {
            let row = &self.values[i * m..(i + 1) * m];
            wa * ordered_sum(
                self.axis1
                    .iter()
                    .zip(&self.weights1)
                    .zip(row)
                    .map(|((&b, &wb), &v)| wb * v * f(a, b)),
            )
        }))
    }

    /// Integral of the density itself.
    pub fn normalization(&self) -> f64 {
        self.normalization
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn axes(&self) -> (&[f64], &[f64]) {
        (&self.axis0, &self.axis1)
    }
}
