//! Classical limits of the three models: Hamiltonians on their phase spaces,
//! Poisson brackets, absolute minima, the ℤ₂ symmetry, limit mixtures and
//! the symmetry-breaking verdict.
//!
//! Phase spaces: the plane `(q, p)` for the double well, the Bloch ball for
//! Curie-Weiss, the sphere `(θ, φ)` for Bose-Hubbard. Ball and sphere
//! Hamiltonians are evaluated through their Cartesian form so that gradients
//! and Hessians are analytic.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::quantize::{PhasePoint, SpherePoint};

/// Grid points per coordinate in the minima scan.
pub const SCAN_POINTS: usize = 201;
/// Points closer than this are merged.
pub const MERGE_DISTANCE: f64 = 1e-8;
/// Stationary points within this of the lowest value count as absolute minima.
pub const VALUE_TOLERANCE: f64 = 1e-10;
const GRADIENT_TARGET: f64 = 1e-12;
const NEWTON_STEPS: usize = 60;
const PLANE_BOX: f64 = 3.0;

/// Orientation of the sphere bracket used throughout.
pub const SPHERE_BRACKET: &str = "{f,g} = (1/sin θ)(∂_φ f ∂_θ g − ∂_θ f ∂_φ g)";

/// A point of the Bloch ball.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BlochPoint {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl BlochPoint {
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        let r2 = x * x + y * y + z * z;
        if !r2.is_finite() || r2 > 1.0 + 1e-12 {
            return Err(Error::InvalidInput(format!("({x}, {y}, {z}) lies outside the ball")));
        }
        Ok(BlochPoint { x, y, z })
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }
}

/// A point of one of the three phase spaces.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ClassicalPoint {
    Plane(PhasePoint),
    Ball(BlochPoint),
    Sphere(SpherePoint),
}

impl ClassicalPoint {
    /// Native coordinates: `(q, p)`, `(x, y, z)` or `(θ, φ)`.
    pub fn coords(&self) -> Vec<f64> {
        match self {
            ClassicalPoint::Plane(p) => vec![p.q, p.p],
            ClassicalPoint::Ball(b) => b.as_array().to_vec(),
            ClassicalPoint::Sphere(s) => vec![s.theta(), s.phi()],
        }
    }

    /// Embedding used for distances: the plane itself or `R³`.
    fn embedded(&self) -> Vec<f64> {
        match self {
            ClassicalPoint::Plane(p) => vec![p.q, p.p],
            ClassicalPoint::Ball(b) => b.as_array().to_vec(),
            ClassicalPoint::Sphere(s) => s.cartesian().to_vec(),
        }
    }

    pub fn distance(&self, other: &ClassicalPoint) -> f64 {
        let (a, b) = (self.embedded(), other.embedded());
        if a.len() != b.len() {
            return f64::INFINITY;
        }
        a.iter().zip(&b).map(|(u, v)| (u - v) * (u - v)).sum::<f64>().sqrt()
    }

    fn space(&self) -> PhaseSpace {
        match self {
            ClassicalPoint::Plane(_) => PhaseSpace::Plane,
            ClassicalPoint::Ball(_) => PhaseSpace::Ball,
            ClassicalPoint::Sphere(_) => PhaseSpace::Sphere,
        }
    }
}

impl Serialize for ClassicalPoint {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.coords().serialize(s)
    }
}

fn sphere_from_cartesian(v: [f64; 3]) -> SpherePoint {
    let r = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    let theta = (v[2] / r).clamp(-1.0, 1.0).acos();
    SpherePoint::new(theta, v[1].atan2(v[0])).expect("finite angles")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PhaseSpace {
    Plane,
    Ball,
    Sphere,
}

/// Gaussian bump `δ exp(-(q - q₀)²/w²)` added to the double-well potential.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Bump {
    pub amplitude: f64,
    pub center: f64,
    pub width: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "id", rename_all = "snake_case")]
pub enum ClassicalModel {
    /// `h(q, p) = p² + (q² - 1)²`, optionally with a bump.
    DoubleWell { bump: Option<Bump> },
    /// `h(x, y, z) = -(J/2) z² - B x + ε z` on the ball.
    CurieWeiss { j: f64, b: f64, field: f64 },
    /// `h(θ, φ) = -½ (sinθ cosφ + cos²θ)` on the sphere.
    BoseHubbard,
}

impl ClassicalModel {
    pub fn double_well() -> Self {
        ClassicalModel::DoubleWell { bump: None }
    }

    pub fn curie_weiss(j: f64, b: f64) -> Self {
        ClassicalModel::CurieWeiss { j, b, field: 0.0 }
    }

    pub fn bose_hubbard() -> Self {
        ClassicalModel::BoseHubbard
    }

    pub fn name(&self) -> &'static str {
        match self {
            ClassicalModel::DoubleWell { .. } => "double_well",
            ClassicalModel::CurieWeiss { .. } => "curie_weiss",
            ClassicalModel::BoseHubbard => "bose_hubbard",
        }
    }

    pub fn phase_space(&self) -> PhaseSpace {
        match self {
            ClassicalModel::DoubleWell { .. } => PhaseSpace::Plane,
            ClassicalModel::CurieWeiss { .. } => PhaseSpace::Ball,
            ClassicalModel::BoseHubbard => PhaseSpace::Sphere,
        }
    }

    fn validate(&self) -> Result<()> {
        match *self {
            ClassicalModel::DoubleWell { bump: Some(b) } if !(b.width > 0.0) => {
                Err(Error::InvalidInput("bump width must be positive".into()))
            }
            ClassicalModel::CurieWeiss { j, b, field } => {
                if !(j > 0.0) || !field.is_finite() {
                    return Err(Error::InvalidInput("Curie-Weiss needs J > 0".into()));
                }
                if !(b > 0.0 && b < j) {
                    return Err(Error::InvalidInput(format!(
                        "Curie-Weiss minima need 0 < B < J (B = {b}, J = {j})"
                    )));
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    /// Value of the Cartesian form, without derivatives.
    fn value(&self, v: &[f64]) -> f64 {
        match *self {
            ClassicalModel::DoubleWell { bump } => {
                let (q, p) = (v[0], v[1]);
                let s = q * q - 1.0;
                let mut h = p * p + s * s;
                if let Some(b) = bump {
                    let u = (q - b.center) / b.width;
                    h += b.amplitude * (-u * u).exp();
                }
                h
            }
            ClassicalModel::CurieWeiss { j, b, field } => {
                -0.5 * j * v[2] * v[2] - b * v[0] + field * v[2]
            }
            ClassicalModel::BoseHubbard => -0.5 * (v[0] + v[2] * v[2]),
        }
    }

    /// Value, gradient and Hessian of the Cartesian form (2 or 3 variables).
    fn local(&self, v: &[f64]) -> (f64, Vec<f64>, Vec<Vec<f64>>) {
        match *self {
            ClassicalModel::DoubleWell { bump } => {
                let (q, p) = (v[0], v[1]);
                let s = q * q - 1.0;
                let mut h = p * p + s * s;
                let mut dq = 4.0 * q * s;
                let mut dqq = 12.0 * q * q - 4.0;
                if let Some(b) = bump {
                    let u = (q - b.center) / b.width;
                    let e = b.amplitude * (-u * u).exp();
                    h += e;
                    dq += -2.0 * u / b.width * e;
                    dqq += (4.0 * u * u - 2.0) / (b.width * b.width) * e;
                }
                (h, vec![dq, 2.0 * p], vec![vec![dqq, 0.0], vec![0.0, 2.0]])
            }
            ClassicalModel::CurieWeiss { j, b, field } => {
                let (x, z) = (v[0], v[2]);
                (
                    -0.5 * j * z * z - b * x + field * z,
                    vec![-b, 0.0, -j * z + field],
                    vec![vec![0.0; 3], vec![0.0; 3], vec![0.0, 0.0, -j]],
                )
            }
            ClassicalModel::BoseHubbard => {
                let (x, z) = (v[0], v[2]);
                (
                    -0.5 * (x + z * z),
                    vec![-0.5, 0.0, -z],
                    vec![vec![0.0; 3], vec![0.0; 3], vec![0.0, 0.0, -1.0]],
                )
            }
        }
    }
}

/// The model's Hamiltonian at `point`.
pub fn classical_hamiltonian(model: &ClassicalModel, point: &ClassicalPoint) -> Result<f64> {
    if point.space() != model.phase_space() {
        return Err(Error::DomainMismatch);
    }
    Ok(model.value(&point.embedded()))
}

/// The ℤ₂ action: `(q,p) ↦ (-q,-p)`, `(x,y,z) ↦ (x,-y,-z)`,
/// `(θ,φ) ↦ (π-θ, -φ)`.
pub fn symmetry_apply(model: &ClassicalModel, point: &ClassicalPoint) -> Result<ClassicalPoint> {
    if point.space() != model.phase_space() {
        return Err(Error::DomainMismatch);
    }
    Ok(match point {
        ClassicalPoint::Plane(p) => ClassicalPoint::Plane(PhasePoint { q: -p.q, p: -p.p }),
        ClassicalPoint::Ball(b) => ClassicalPoint::Ball(BlochPoint {
            x: b.x,
            y: -b.y,
            z: -b.z,
        }),
        ClassicalPoint::Sphere(s) => {
            ClassicalPoint::Sphere(SpherePoint::new(PI - s.theta(), -s.phi()).expect("valid"))
        }
    })
}

/// Richardson-corrected central difference of `f` along coordinate `k`.
fn partial(f: &dyn Fn(&[f64]) -> f64, x: &[f64], k: usize) -> f64 {
    let h = 1e-6;
    let d = |h: f64| {
        let mut a = x.to_vec();
        let mut b = x.to_vec();
        a[k] += h;
        b[k] -= h;
        (f(&a) - f(&b)) / (2.0 * h)
    };
    (4.0 * d(0.5 * h) - d(h)) / 3.0
}

/// Poisson bracket of two functions of the native coordinates, by finite
/// differences. Plane: canonical. Ball: `Σ ε_abc x_c ∂_a f ∂_b g`.
/// Sphere: [`SPHERE_BRACKET`].
pub fn poisson_bracket(
    model: &ClassicalModel,
    f: &dyn Fn(&[f64]) -> f64,
    g: &dyn Fn(&[f64]) -> f64,
    point: &ClassicalPoint,
) -> Result<f64> {
    if point.space() != model.phase_space() {
        return Err(Error::DomainMismatch);
    }
    let x = point.coords();
    Ok(match point.space() {
        PhaseSpace::Plane => {
            partial(f, &x, 0) * partial(g, &x, 1) - partial(f, &x, 1) * partial(g, &x, 0)
        }
        PhaseSpace::Ball => {
            let df: Vec<f64> = (0..3).map(|k| partial(f, &x, k)).collect();
            let dg: Vec<f64> = (0..3).map(|k| partial(g, &x, k)).collect();
            // x · (∇f × ∇g)
            x[0] * (df[1] * dg[2] - df[2] * dg[1])
                + x[1] * (df[2] * dg[0] - df[0] * dg[2])
                + x[2] * (df[0] * dg[1] - df[1] * dg[0])
        }
        PhaseSpace::Sphere => {
            (partial(f, &x, 1) * partial(g, &x, 0) - partial(f, &x, 0) * partial(g, &x, 1))
                / x[0].sin()
        }
    })
}

/// A refined stationary point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StationaryPoint {
    pub point: ClassicalPoint,
    pub value: f64,
    /// Norm of the (tangential, on the sphere) gradient.
    pub gradient_norm: f64,
    /// Smallest eigenvalue of the (Riemannian) Hessian.
    pub min_curvature: f64,
}

/// Absolute minima, and the stationary points that were found but are not
/// absolute minima.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MinimaSet {
    pub points: Vec<StationaryPoint>,
    pub value: f64,
    pub excluded: Vec<StationaryPoint>,
}

impl MinimaSet {
    pub fn locations(&self) -> Vec<ClassicalPoint> {
        self.points.iter().map(|s| s.point).collect()
    }
}

fn solve_small(a: &[Vec<f64>], b: &[f64]) -> Option<Vec<f64>> {
    let n = b.len();
    let mut m: Vec<Vec<f64>> = a.iter().map(|r| r.clone()).collect();
    let mut rhs = b.to_vec();
    let scale = m.iter().flatten().fold(0.0f64, |s, v| s.max(v.abs())).max(1e-300);
    for c in 0..n {
        let piv = (c..n).max_by(|&i, &j| m[i][c].abs().total_cmp(&m[j][c].abs()))?;
        if m[piv][c].abs() <= 1e-14 * scale {
            return None;
        }
        m.swap(c, piv);
        rhs.swap(c, piv);
        for r in c + 1..n {
            let f = m[r][c] / m[c][c];
            for k in c..n {
                m[r][k] -= f * m[c][k];
            }
            rhs[r] -= f * rhs[c];
        }
    }
    let mut x = vec![0.0; n];
    for r in (0..n).rev() {
        let s: f64 = (r + 1..n).map(|k| m[r][k] * x[k]).sum();
        x[r] = (rhs[r] - s) / m[r][r];
    }
    Some(x)
}

fn min_eigen_sym2(a: &[Vec<f64>]) -> f64 {
    let (p, q, r) = (a[0][0], a[0][1], a[1][1]);
    0.5 * (p + r) - (0.25 * (p - r) * (p - r) + q * q).sqrt()
}

fn min_eigen_sym3(a: &[Vec<f64>]) -> f64 {
    let mut d = crate::linalg::DenseSym::zeros(3);
    for i in 0..3 {
        for j in i..3 {
            d.set(i, j, 0.5 * (a[i][j] + a[j][i]));
        }
    }
    crate::linalg::dense_eigen(&d).map(|s| s.values[0]).unwrap_or(f64::NAN)
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Tangent basis at a unit vector.
fn tangent_basis(n: [f64; 3]) -> ([f64; 3], [f64; 3]) {
    let k = (0..3)
        .min_by(|&i, &j| n[i].abs().total_cmp(&n[j].abs()))
        .expect("three axes");
    let mut a = [0.0; 3];
    a[k] = 1.0;
    let d = a[0] * n[0] + a[1] * n[1] + a[2] * n[2];
    let mut e1 = [a[0] - d * n[0], a[1] - d * n[1], a[2] - d * n[2]];
    let l = norm(&e1);
    e1.iter_mut().for_each(|v| *v /= l);
    let e2 = [
        n[1] * e1[2] - n[2] * e1[1],
        n[2] * e1[0] - n[0] * e1[2],
        n[0] * e1[1] - n[1] * e1[0],
    ];
    (e1, e2)
}

/// Riemannian gradient and Hessian of the model on the sphere at `n`, in the
/// tangent basis. Also returns `n · ∇h`.
fn sphere_derivatives(model: &ClassicalModel, n: [f64; 3]) -> (f64, [f64; 3], [f64; 3], Vec<f64>, Vec<Vec<f64>>, f64) {
    let (h, g, hess) = model.local(&n);
    let (e1, e2) = tangent_basis(n);
    let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
    let radial = dot(&g, &n);
    let hv = |e: &[f64; 3]| -> Vec<f64> { (0..3).map(|i| dot(&hess[i], e)).collect() };
    let (h1, h2) = (hv(&e1), hv(&e2));
    let grad = vec![dot(&g, &e1), dot(&g, &e2)];
    let rh = vec![
        vec![dot(&e1, &h1) - radial, dot(&e1, &h2)],
        vec![dot(&e2, &h1), dot(&e2, &h2) - radial],
    ];
    (h, e1, e2, grad, rh, radial)
}

enum Refined {
    Converged(StationaryPoint, f64),
    /// Left the domain: the constrained minimum is covered by another scan.
    Escaped,
}

fn refine_flat(model: &ClassicalModel, seed: &[f64], ball: bool) -> Result<Refined> {
    let mut x = seed.to_vec();
    for _ in 0..NEWTON_STEPS {
        let (_, g, hess) = model.local(&x);
        if norm(&g) <= GRADIENT_TARGET {
            break;
        }
        let neg: Vec<f64> = g.iter().map(|v| -v).collect();
        let step = solve_small(&hess, &neg).ok_or_else(|| Error::RefinementDiverged(x.clone()))?;
        x.iter_mut().zip(&step).for_each(|(a, d)| *a += d);
        if ball && norm(&x) >= 1.0 {
            return Ok(Refined::Escaped);
        }
        if !ball && x.iter().any(|v| v.abs() > 2.0 * PLANE_BOX) {
            return Ok(Refined::Escaped);
        }
    }
    let (h, g, hess) = model.local(&x);
    let gn = norm(&g);
    if gn > 1e-8 {
        return Err(Error::RefinementDiverged(x));
    }
    let curvature = if x.len() == 2 {
        min_eigen_sym2(&hess)
    } else {
        min_eigen_sym3(&hess)
    };
    let point = if ball {
        ClassicalPoint::Ball(BlochPoint::new(x[0], x[1], x[2])?)
    } else {
        ClassicalPoint::Plane(PhasePoint::new(x[0], x[1])?)
    };
    Ok(Refined::Converged(
        StationaryPoint {
            point,
            value: h,
            gradient_norm: gn,
            min_curvature: curvature,
        },
        0.0,
    ))
}

/// Newton on the sphere in tangent charts, retracting by normalization.
/// The second returned value is `n · ∇h`; a constrained ball minimum needs it
/// `<= 0` (the energy must not decrease inwards).
fn refine_sphere(model: &ClassicalModel, seed: [f64; 3]) -> Result<Refined> {
    let mut n = seed;
    for _ in 0..NEWTON_STEPS {
        let (_, e1, e2, g, rh, _) = sphere_derivatives(model, n);
        if norm(&g) <= GRADIENT_TARGET {
            break;
        }
        let d = solve_small(&rh, &[-g[0], -g[1]]).ok_or_else(|| Error::RefinementDiverged(n.to_vec()))?;
        let mut m = [0.0; 3];
        for i in 0..3 {
            m[i] = n[i] + d[0] * e1[i] + d[1] * e2[i];
        }
        let l = norm(&m);
        n = [m[0] / l, m[1] / l, m[2] / l];
    }
    let (h, _, _, g, rh, radial) = sphere_derivatives(model, n);
    let gn = norm(&g);
    if gn > 1e-8 {
        return Err(Error::RefinementDiverged(n.to_vec()));
    }
    let point = match model.phase_space() {
        PhaseSpace::Ball => ClassicalPoint::Ball(BlochPoint {
            x: n[0],
            y: n[1],
            z: n[2],
        }),
        _ => ClassicalPoint::Sphere(sphere_from_cartesian(n)),
    };
    Ok(Refined::Converged(
        StationaryPoint {
            point,
            value: h,
            gradient_norm: gn,
            min_curvature: min_eigen_sym2(&rh),
        },
        radial,
    ))
}

fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()
}

/// Discrete local minima of the sphere scan, as Cartesian seeds.
fn sphere_seeds(model: &ClassicalModel) -> Vec<[f64; 3]> {
    let nt = SCAN_POINTS;
    let np = SCAN_POINTS;
    let thetas = linspace(0.0, PI, nt);
    let cart = |i: usize, j: usize| {
        let p = SpherePoint::new(thetas[i], 2.0 * PI * j as f64 / np as f64).expect("grid");
        p.cartesian()
    };
    let val: Vec<Vec<f64>> = (0..nt)
        .map(|i| (0..np).map(|j| model.value(&cart(i, j))).collect())
        .collect();
    let mut seeds = Vec::new();
    for i in 0..nt {
        let cols = if i == 0 || i == nt - 1 { 1 } else { np };
        for j in 0..cols {
            let v = val[i][j];
            let mut neigh: Vec<f64> = Vec::new();
            if i == 0 {
                neigh.extend(&val[1]);
            } else if i == nt - 1 {
                neigh.extend(&val[nt - 2]);
            } else {
                neigh.push(if i == 1 { val[0][0] } else { val[i - 1][j] });
                neigh.push(if i == nt - 2 { val[nt - 1][0] } else { val[i + 1][j] });
                neigh.push(val[i][(j + 1) % np]);
                neigh.push(val[i][(j + np - 1) % np]);
            }
            if neigh.iter().all(|&w| v <= w) {
                seeds.push(cart(i, j));
            }
        }
    }
    seeds
}

/// Interior discrete minima of a Cartesian scan whose face neighbours all lie
/// inside the domain.
fn box_seeds(model: &ClassicalModel, dim: usize, half: f64, ball: bool) -> Vec<Vec<f64>> {
    let n = SCAN_POINTS;
    let axis = linspace(-half, half, n);
    let total = n.pow(dim as u32);
    let strides: Vec<usize> = (0..dim).map(|d| n.pow((dim - 1 - d) as u32)).collect();
    let mut x = vec![0.0; dim];
    let values: Vec<f64> = (0..total)
        .map(|f| {
            for d in 0..dim {
                x[d] = axis[(f / strides[d]) % n];
            }
            if !ball || x.iter().map(|v| v * v).sum::<f64>() < 1.0 {
                model.value(&x)
            } else {
                f64::NAN
            }
        })
        .collect();
    let mut seeds = Vec::new();
    'cells: for f in 0..total {
        let v = values[f];
        if v.is_nan() {
            continue;
        }
        for d in 0..dim {
            let i = (f / strides[d]) % n;
            if i == 0 || i == n - 1 {
                continue 'cells;
            }
            for nb in [f - strides[d], f + strides[d]] {
                // NaN neighbours (outside the ball) fail this test too.
                if !(values[nb] >= v) {
                    continue 'cells;
                }
            }
        }
        seeds.push((0..dim).map(|d| axis[(f / strides[d]) % n]).collect());
    }
    seeds
}

/// Absolute minima by a deterministic grid scan followed by Newton
/// refinement. Stationary points that are saddles, maxima, inward-pointing
/// on the ball boundary or above the lowest value are returned as
/// `excluded`.
pub fn find_minima(model: &ClassicalModel) -> Result<MinimaSet> {
    model.validate()?;
    let mut found: Vec<(StationaryPoint, bool)> = Vec::new();
    let mut push = |r: Refined, boundary: bool| {
        if let Refined::Converged(sp, radial) = r {
            // On the ball boundary the energy must not decrease inwards.
            let admissible = !boundary || radial <= 1e-10;
            if !found.iter().any(|(q, _)| q.point.distance(&sp.point) <= MERGE_DISTANCE) {
                found.push((sp, admissible));
            }
        }
    };
    match model.phase_space() {
        PhaseSpace::Plane => {
            for s in box_seeds(model, 2, PLANE_BOX, false) {
                push(refine_flat(model, &s, false)?, false);
            }
        }
        PhaseSpace::Ball => {
            for s in box_seeds(model, 3, 1.0, true) {
                push(refine_flat(model, &s, true)?, false);
            }
            for s in sphere_seeds(model) {
                push(refine_sphere(model, s)?, true);
            }
        }
        PhaseSpace::Sphere => {
            for s in sphere_seeds(model) {
                push(refine_sphere(model, s)?, false);
            }
        }
    }
    let is_min = |sp: &StationaryPoint, ok: bool| ok && sp.min_curvature >= -1e-8;
    let value = found
        .iter()
        .filter(|(sp, ok)| is_min(sp, *ok))
        .map(|(sp, _)| sp.value)
        .fold(f64::INFINITY, f64::min);
    if !value.is_finite() {
        return Err(Error::RefinementDiverged(Vec::new()));
    }
    let (points, excluded): (Vec<_>, Vec<_>) = found
        .into_iter()
        .partition(|(sp, ok)| is_min(sp, *ok) && sp.value <= value + VALUE_TOLERANCE);
    let mut points: Vec<StationaryPoint> = points.into_iter().map(|(sp, _)| sp).collect();
    points.sort_by(|a, b| a.point.coords().partial_cmp(&b.point.coords()).expect("finite"));
    Ok(MinimaSet {
        points,
        value,
        excluded: excluded.into_iter().map(|(sp, _)| sp).collect(),
    })
}

/// Closed-form minima of the unperturbed models.
pub fn closed_form_minima(model: &ClassicalModel) -> Option<(Vec<ClassicalPoint>, f64)> {
    match *model {
        ClassicalModel::DoubleWell { bump: None } => Some((
            vec![
                ClassicalPoint::Plane(PhasePoint { q: -1.0, p: 0.0 }),
                ClassicalPoint::Plane(PhasePoint { q: 1.0, p: 0.0 }),
            ],
            0.0,
        )),
        ClassicalModel::CurieWeiss { j, b, field } if field == 0.0 && b > 0.0 && b < j => {
            let x = b / j;
            let z = (1.0 - x * x).sqrt();
            Some((
                vec![
                    ClassicalPoint::Ball(BlochPoint { x, y: 0.0, z: -z }),
                    ClassicalPoint::Ball(BlochPoint { x, y: 0.0, z }),
                ],
                -0.5 * j - 0.5 * b * b / j,
            ))
        }
        ClassicalModel::BoseHubbard => Some((
            vec![
                ClassicalPoint::Sphere(SpherePoint::new(PI / 6.0, 0.0).expect("valid")),
                ClassicalPoint::Sphere(SpherePoint::new(5.0 * PI / 6.0, 0.0).expect("valid")),
            ],
            -0.625,
        )),
        _ => None,
    }
}

/// Convex combination of point masses.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MixtureState {
    pub points: Vec<ClassicalPoint>,
    pub weights: Vec<f64>,
}

impl MixtureState {
    /// `Σ wᵢ f(ptᵢ)`.
    pub fn evaluate(&self, f: impl Fn(&ClassicalPoint) -> f64) -> f64 {
        self.points.iter().zip(&self.weights).map(|(p, w)| w * f(p)).sum()
    }
}

/// Uniform mixture over the ℤ₂ orbit of the first minimum. Fails with
/// [`Error::NotTransitive`] when the orbit is not the whole minima set.
pub fn limit_mixture(minima: &MinimaSet, model: &ClassicalModel) -> Result<MixtureState> {
    let first = minima
        .points
        .first()
        .ok_or_else(|| Error::InvalidInput("empty minima set".into()))?
        .point;
    let image = symmetry_apply(model, &first)?;
    let mut orbit = vec![first];
    if image.distance(&first) > MERGE_DISTANCE {
        orbit.push(image);
    }
    let covered = minima
        .points
        .iter()
        .all(|m| orbit.iter().any(|o| o.distance(&m.point) <= MERGE_DISTANCE));
    if !covered || orbit.len() != minima.points.len() {
        return Err(Error::NotTransitive);
    }
    let w = 1.0 / orbit.len() as f64;
    Ok(MixtureState {
        weights: vec![w; orbit.len()],
        points: orbit,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    /// No pure ground state is invariant.
    #[serde(rename = "SSB")]
    Ssb,
    /// Some pure ground state is invariant.
    #[serde(rename = "no SSB")]
    NoSsb,
    /// The Hamiltonian itself is not invariant.
    #[serde(rename = "explicit breaking")]
    ExplicitBreaking,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MinimumReport {
    pub point: ClassicalPoint,
    pub invariant: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SsbReport {
    pub model: ClassicalModel,
    pub sphere_bracket: &'static str,
    pub hamiltonian_invariant: bool,
    pub min_value: f64,
    pub minima: Vec<MinimumReport>,
    pub mixture: Option<MixtureState>,
    pub mixture_invariant: bool,
    pub excluded_stationary_points: Vec<StationaryPoint>,
    /// Largest distance between computed and closed-form minima, if known.
    pub closed_form_deviation: Option<f64>,
    pub note: &'static str,
    pub verdict: Verdict,
}

const STATIONARY_NOTE: &str = "Only absolute minima enter the verdict. Other stationary points are \
also ground states in the weaker sense of support in the critical set; they are listed as excluded.";

/// Deterministic sample of the phase space for invariance checks (~10³ points).
pub fn sample_points(model: &ClassicalModel) -> Vec<ClassicalPoint> {
    let mut out = Vec::new();
    match model.phase_space() {
        PhaseSpace::Plane => {
            for q in linspace(-2.5, 2.5, 32) {
                for p in linspace(-2.5, 2.5, 32) {
                    out.push(ClassicalPoint::Plane(PhasePoint { q, p }));
                }
            }
        }
        PhaseSpace::Ball => {
            for i in 0..10 {
                let r = 0.1 * (i + 1) as f64;
                for t in linspace(0.0, PI, 10) {
                    for k in 0..10 {
                        let s = SpherePoint::new(t, 0.6 * k as f64).expect("valid").cartesian();
                        out.push(ClassicalPoint::Ball(BlochPoint {
                            x: r * s[0],
                            y: r * s[1],
                            z: r * s[2],
                        }));
                    }
                }
            }
        }
        PhaseSpace::Sphere => {
            for t in linspace(0.0, PI, 32) {
                for k in 0..32 {
                    let p = SpherePoint::new(t, 2.0 * PI * k as f64 / 32.0).expect("valid");
                    out.push(ClassicalPoint::Sphere(p));
                }
            }
        }
    }
    out
}

fn hamiltonian_invariant(model: &ClassicalModel) -> Result<bool> {
    for p in sample_points(model) {
        let a = classical_hamiltonian(model, &p)?;
        let b = classical_hamiltonian(model, &symmetry_apply(model, &p)?)?;
        if (a - b).abs() > 1e-12 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Classifies the ground states of `model`: SSB iff no point mass at an
/// absolute minimum is invariant under the symmetry.
pub fn ssb_verdict(model: &ClassicalModel) -> Result<SsbReport> {
    let minima = find_minima(model)?;
    let invariant_h = hamiltonian_invariant(model)?;
    let mut reports = Vec::new();
    for m in &minima.points {
        let image = symmetry_apply(model, &m.point)?;
        reports.push(MinimumReport {
            point: m.point,
            invariant: image.distance(&m.point) <= MERGE_DISTANCE,
        });
    }
    let mixture = limit_mixture(&minima, model).ok();
    let mixture_invariant = match &mixture {
        Some(mix) => mix.points.iter().all(|p| {
            symmetry_apply(model, p)
                .map(|q| mix.points.iter().any(|r| r.distance(&q) <= MERGE_DISTANCE))
                .unwrap_or(false)
        }),
        None => false,
    };
    let closed_form_deviation = closed_form_minima(model).map(|(pts, _)| {
        let worst = pts
            .iter()
            .map(|c| {
                minima
                    .points
                    .iter()
                    .map(|m| m.point.distance(c))
                    .fold(f64::INFINITY, f64::min)
            })
            .fold(0.0, f64::max);
        if pts.len() == minima.points.len() {
            worst
        } else {
            f64::INFINITY
        }
    });
    let verdict = if !invariant_h {
        Verdict::ExplicitBreaking
    } else if reports.iter().any(|r| r.invariant) {
        Verdict::NoSsb
    } else {
        Verdict::Ssb
    };
    Ok(SsbReport {
        model: *model,
        sphere_bracket: SPHERE_BRACKET,
        hamiltonian_invariant: invariant_h,
        min_value: minima.value,
        minima: reports,
        mixture,
        mixture_invariant,
        excluded_stationary_points: minima.excluded,
        closed_form_deviation,
        note: STATIONARY_NOTE,
        verdict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ball(x: f64, y: f64, z: f64) -> ClassicalPoint {
        ClassicalPoint::Ball(BlochPoint::new(x, y, z).unwrap())
    }

    fn sphere(t: f64, p: f64) -> ClassicalPoint {
        ClassicalPoint::Sphere(SpherePoint::new(t, p).unwrap())
    }

    fn plane(q: f64, p: f64) -> ClassicalPoint {
        ClassicalPoint::Plane(PhasePoint::new(q, p).unwrap())
    }

    #[test]
    fn hamiltonian_examples() {
        let cw = ClassicalModel::curie_weiss(1.0, 0.5);
        let v = classical_hamiltonian(&cw, &ball(0.5, 0.0, 0.75f64.sqrt())).unwrap();
        assert!((v + 0.625).abs() < 1e-15);
        let bh = ClassicalModel::bose_hubbard();
        let v = classical_hamiltonian(&bh, &sphere(PI / 6.0, 0.0)).unwrap();
        assert!((v + 0.625).abs() < 1e-15);
        let dw = ClassicalModel::double_well();
        assert_eq!(classical_hamiltonian(&dw, &plane(0.0, 0.0)).unwrap(), 1.0);
        assert_eq!(
            classical_hamiltonian(&dw, &ball(0.0, 0.0, 0.0)),
            Err(Error::DomainMismatch)
        );
    }

    #[test]
    fn symmetry_examples() {
        let cw = ClassicalModel::curie_weiss(1.0, 0.5);
        let z = 0.75f64.sqrt();
        assert_eq!(
            symmetry_apply(&cw, &ball(0.5, 0.0, z)).unwrap(),
            ball(0.5, 0.0, -z)
        );
        let bh = ClassicalModel::bose_hubbard();
        let img = symmetry_apply(&bh, &sphere(PI / 6.0, 0.0)).unwrap();
        assert!(img.distance(&sphere(5.0 * PI / 6.0, 0.0)) < 1e-15);
        let dw = ClassicalModel::double_well();
        assert_eq!(symmetry_apply(&dw, &plane(0.0, 0.0)).unwrap(), plane(0.0, 0.0));
    }

    #[test]
    fn bracket_examples() {
        let cw = ClassicalModel::curie_weiss(1.0, 0.5);
        let x = |v: &[f64]| v[0];
        let z = |v: &[f64]| v[2];
        let b = poisson_bracket(&cw, &x, &z, &ball(0.0, 1.0, 0.0)).unwrap();
        assert!((b + 1.0).abs() < 1e-9);
        let dw = ClassicalModel::double_well();
        let q = |v: &[f64]| v[0];
        let p = |v: &[f64]| v[1];
        assert!((poisson_bracket(&dw, &q, &p, &plane(0.3, -0.2)).unwrap() - 1.0).abs() < 1e-9);
        // {cosθ, sinθ cosφ} = -sinθ sinφ.
        let bh = ClassicalModel::bose_hubbard();
        let f = |v: &[f64]| v[0].cos();
        let g = |v: &[f64]| v[0].sin() * v[1].cos();
        let at = sphere(1.1, 0.7);
        let want = -(1.1f64).sin() * (0.7f64).sin();
        assert!((poisson_bracket(&bh, &f, &g, &at).unwrap() - want).abs() < 1e-8);
    }

    #[test]
    fn curie_weiss_minima() {
        let m = find_minima(&ClassicalModel::curie_weiss(1.0, 0.5)).unwrap();
        assert_eq!(m.points.len(), 2);
        assert!((m.value + 0.625).abs() < 1e-12);
        let z = 0.75f64.sqrt();
        assert!(m.points[0].point.distance(&ball(0.5, 0.0, -z)) < 1e-10);
        assert!(m.points[1].point.distance(&ball(0.5, 0.0, z)) < 1e-10);
        for p in &m.points {
            assert!(p.gradient_norm <= 1e-12);
        }
    }

    #[test]
    fn bose_hubbard_minima() {
        let m = find_minima(&ClassicalModel::bose_hubbard()).unwrap();
        assert_eq!(m.points.len(), 2);
        assert!((m.value + 0.625).abs() < 1e-12);
        let c = m.points.iter().map(|p| p.point.coords()).collect::<Vec<_>>();
        assert!((c[0][0] - PI / 6.0).abs() < 1e-10 && c[0][1].abs() < 1e-10);
        assert!((c[1][0] - 5.0 * PI / 6.0).abs() < 1e-10 && c[1][1].abs() < 1e-10);
    }

    #[test]
    fn double_well_minima_and_saddle() {
        let m = find_minima(&ClassicalModel::double_well()).unwrap();
        let locs = m.locations();
        assert_eq!(locs.len(), 2);
        assert!(locs[0].distance(&plane(-1.0, 0.0)) < 1e-12);
        assert!(locs[1].distance(&plane(1.0, 0.0)) < 1e-12);
        assert!(m.value.abs() < 1e-24);
        // The origin is a stationary point (a saddle) but not a minimum.
        assert!(m.excluded.iter().all(|e| e.point.distance(&plane(0.0, 0.0)) > 1e-8 || e.min_curvature < 0.0));
    }

    #[test]
    fn curie_weiss_rejects_strong_field() {
        assert!(find_minima(&ClassicalModel::curie_weiss(1.0, 1.2)).is_err());
    }

    #[test]
    fn verdicts() {
        for model in [
            ClassicalModel::double_well(),
            ClassicalModel::curie_weiss(1.0, 0.5),
            ClassicalModel::bose_hubbard(),
        ] {
            let r = ssb_verdict(&model).unwrap();
            assert_eq!(r.verdict, Verdict::Ssb, "{}", model.name());
            assert!(r.minima.iter().all(|m| !m.invariant));
            assert!(r.mixture_invariant);
            assert!(r.closed_form_deviation.unwrap() <= 1e-8);
        }
    }

    #[test]
    fn bump_breaks_symmetry_explicitly() {
        let model = ClassicalModel::DoubleWell {
            bump: Some(Bump {
                amplitude: 0.1,
                center: 1.0,
                width: 0.2,
            }),
        };
        let r = ssb_verdict(&model).unwrap();
        assert_eq!(r.verdict, Verdict::ExplicitBreaking);
        assert_eq!(r.minima.len(), 1);
        assert!(r.minima[0].point.coords()[0] < -0.9);
        assert!(!r.excluded_stationary_points.is_empty());
    }

    #[test]
    fn mixture_averages_odd_observable_to_zero() {
        let model = ClassicalModel::curie_weiss(1.0, 0.5);
        let mix = limit_mixture(&find_minima(&model).unwrap(), &model).unwrap();
        assert_eq!(mix.weights, vec![0.5, 0.5]);
        assert!(mix.evaluate(|p| p.coords()[2]).abs() < 1e-15);
        assert!((mix.evaluate(|p| p.coords()[0]) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn non_transitive_minima() {
        let model = ClassicalModel::double_well();
        let mut m = find_minima(&model).unwrap();
        let extra = m.points[0].clone();
        m.points.push(StationaryPoint {
            point: plane(0.0, 0.0),
            ..extra
        });
        assert_eq!(limit_mixture(&m, &model), Err(Error::NotTransitive));
    }

    #[test]
    fn hamiltonians_are_invariant() {
        for model in [
            ClassicalModel::double_well(),
            ClassicalModel::curie_weiss(1.0, 0.5),
            ClassicalModel::bose_hubbard(),
        ] {
            assert!(sample_points(&model).len() >= 1000);
            assert!(hamiltonian_invariant(&model).unwrap());
        }
    }

    proptest! {
        #[test]
        fn involution_plane_and_ball(q in -3.0..3.0f64, p in -3.0..3.0f64, t in 0.0..PI, f in 0.0..6.28f64, r in 0.0..1.0f64) {
            let dw = ClassicalModel::double_well();
            let a = plane(q, p);
            prop_assert_eq!(symmetry_apply(&dw, &symmetry_apply(&dw, &a).unwrap()).unwrap(), a);
            let cw = ClassicalModel::curie_weiss(1.0, 0.5);
            let s = SpherePoint::new(t, f).unwrap().cartesian();
            let b = ball(r * s[0], r * s[1], r * s[2]);
            prop_assert_eq!(symmetry_apply(&cw, &symmetry_apply(&cw, &b).unwrap()).unwrap(), b);
        }

        #[test]
        fn involution_sphere(t in 0.0..PI, f in 0.0..6.28f64) {
            // θ ↦ π - θ is exact for θ >= π/2 and off by one rounding of π - θ
            // otherwise.
            let bh = ClassicalModel::bose_hubbard();
            let a = sphere(t, f);
            let back = symmetry_apply(&bh, &symmetry_apply(&bh, &a).unwrap()).unwrap();
            prop_assert!(back.distance(&a) <= 4.0 * f64::EPSILON);
        }

        #[test]
        fn bracket_antisymmetry_and_leibniz(
            c in proptest::collection::vec(-1.0..1.0f64, 9),
            t in 0.3..2.8f64,
            f in 0.0..6.2f64,
        ) {
            let c: [f64; 9] = c.try_into().unwrap();
            let fa = move |v: &[f64]| c[0] * v[0] + c[1] * v[1] * v[2] + c[2] * v[2] * v[2];
            let fb = move |v: &[f64]| c[3] * v[1] + c[4] * v[0] * v[0] + c[5] * v[0] * v[2];
            let fc = move |v: &[f64]| c[6] * v[2] + c[7] * v[0] * v[1] + c[8];
            let cw = ClassicalModel::curie_weiss(1.0, 0.5);
            let s = SpherePoint::new(t, f).unwrap().cartesian();
            let at = ball(0.9 * s[0], 0.9 * s[1], 0.9 * s[2]);
            let ab = poisson_bracket(&cw, &fa, &fb, &at).unwrap();
            let ba = poisson_bracket(&cw, &fb, &fa, &at).unwrap();
            prop_assert!((ab + ba).abs() <= 1e-6);
            let prod = |v: &[f64]| fa(v) * fb(v);
            let lhs = poisson_bracket(&cw, &prod, &fc, &at).unwrap();
            let x = at.coords();
            let rhs = fa(&x) * poisson_bracket(&cw, &fb, &fc, &at).unwrap()
                + poisson_bracket(&cw, &fa, &fc, &at).unwrap() * fb(&x);
            prop_assert!((lhs - rhs).abs() <= 1e-6);
        }

        #[test]
        fn mixture_is_invariant(a in -1.0..1.0f64, b in -1.0..1.0f64) {
            static MIX: std::sync::OnceLock<MixtureState> = std::sync::OnceLock::new();
            let model = ClassicalModel::bose_hubbard();
            let mix = MIX.get_or_init(|| limit_mixture(&find_minima(&model).unwrap(), &model).unwrap());
            let f = |p: &ClassicalPoint| {
                let c = p.coords();
                a * c[0].cos() + b * c[0].sin() * c[1].cos()
            };
            let fs = |p: &ClassicalPoint| f(&symmetry_apply(&model, p).unwrap());
            prop_assert!((mix.evaluate(f) - mix.evaluate(fs)).abs() <= 1e-12);
        }
    }
}
