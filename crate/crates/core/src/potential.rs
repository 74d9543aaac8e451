//! Monogenic flow potentials `w = φ + ψ1 i + ψ2 j + ψ3 k` built from a
//! harmonic velocity potential `φ`, and the velocity `v = ½ D w̄` they carry.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{
    self, partials_unchecked, scalar_gradient_unchecked, scalar_hessian_unchecked, JetKind,
    Partials, QuaternionField, ScalarField, SumField,
};
use crate::quadrature::gauss_legendre;
use crate::quat::{Quaternion, ReducedPoint};

/// Default Gauss–Legendre order of the completion integral over `t ∈ [0, 1]`.
pub const COMPLETION_ORDER: usize = 32;
/// Successive orders agreeing this closely stop the doubling.
pub const COMPLETION_AGREEMENT: f64 = 1e-10;
/// A final doubling that still moves the result by more than this is an error.
pub const COMPLETION_FAILURE: f64 = 1e-8;
const COMPLETION_MAX_ORDER: usize = 512;
/// Tolerance on the integrability and geometric identities of the
/// axis-plane stream functions.
pub const GEOMETRIC_TOL: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Construction {
    GradientMethod,
    StarShapedCompletion,
    Geometric,
    Embedded2d,
    Explicit,
}

impl fmt::Display for Construction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Construction::GradientMethod => "gradient-method",
            Construction::StarShapedCompletion => "star-shaped-completion",
            Construction::Geometric => "geometric",
            Construction::Embedded2d => "embedded-2d",
            Construction::Explicit => "explicit",
        };
        f.write_str(s)
    }
}

/// A monogenic flow potential together with its scalar part.
#[derive(Clone)]
pub struct FlowPotential {
    pub w: Arc<dyn QuaternionField>,
    pub phi: Arc<dyn ScalarField>,
    pub construction: Construction,
    /// Velocity far from any body; fixes the Bernoulli constant.
    pub far_field: ReducedPoint,
}

impl fmt::Debug for FlowPotential {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FlowPotential")
            .field("construction", &self.construction)
            .field("far_field", &self.far_field)
            .finish_non_exhaustive()
    }
}

impl FlowPotential {
    pub fn new(w: Arc<dyn QuaternionField>, phi: Arc<dyn ScalarField>, construction: Construction) -> Self {
        Self { w, phi, construction, far_field: ReducedPoint::ORIGIN }
    }

    /// Uses `Sc(w)` as the velocity potential.
    pub fn from_field(w: Arc<dyn QuaternionField>, construction: Construction) -> Self {
        let phi: Arc<dyn ScalarField> = Arc::new(field::ScalarPart(w.clone()));
        Self::new(w, phi, construction)
    }

    pub fn with_far_field(mut self, v: ReducedPoint) -> Self {
        self.far_field = v;
        self
    }

    pub fn contains(&self, x: ReducedPoint) -> bool {
        self.w.contains(x)
    }

    pub fn monogenicity(&self, points: &[ReducedPoint]) -> Result<field::MonogenicityReport> {
        let Some(&first) = points.first() else {
            return Err(Error::EmptySampleSet);
        };
        let tol = JetKind::of(&*self.w, first).monogenic_tolerance();
        field::is_monogenic(&*self.w, points, tol)
    }
}

fn harmonic_check(u: &dyn ScalarField, probes: &[ReducedPoint]) -> Result<()> {
    if probes.is_empty() {
        return Err(Error::EmptySampleSet);
    }
    for &x in probes {
        let tol = if u.hessian(x).is_some() {
            field::MONOGENIC_TOL_ANALYTIC
        } else {
            field::MONOGENIC_TOL_FD
        };
        let lap = field::scalar_laplacian(u, x)?;
        if lap.abs() > tol || lap.is_nan() {
            return Err(Error::NotHarmonic { point: x, residual: lap.abs() });
        }
    }
    Ok(())
}

/// `D̄u` for a scalar field `u`; monogenic wherever `u` is harmonic.
#[derive(Clone)]
pub struct ConjugateGradient {
    u: Arc<dyn ScalarField>,
}

impl ConjugateGradient {
    pub fn new(u: Arc<dyn ScalarField>) -> Self {
        Self { u }
    }
}

fn dbar_of_gradient(g: ReducedPoint) -> Quaternion {
    Quaternion::new(g.x, -g.y, -g.z, 0.0)
}

impl QuaternionField for ConjugateGradient {
    fn value(&self, x: ReducedPoint) -> Quaternion {
        dbar_of_gradient(scalar_gradient_unchecked(&*self.u, x))
    }
    fn contains(&self, x: ReducedPoint) -> bool {
        self.u.contains(x)
    }
    fn partials(&self, x: ReducedPoint) -> Option<Partials> {
        let h = self.u.hessian(x)?;
        Some(std::array::from_fn(|a| Quaternion::new(h[a][0], -h[a][1], -h[a][2], 0.0)))
    }
}

/// Returns `D̄u`, refusing `u` that fails the harmonicity probe.
pub fn monogenic_from_gradient(u: Arc<dyn ScalarField>, probes: &[ReducedPoint]) -> Result<ConjugateGradient> {
    harmonic_check(&*u, probes)?;
    Ok(ConjugateGradient::new(u))
}

/// `f(x) = u(x) + Vec ∫₀¹ D̄u(c + (x-c)t) (x-c) t dt`, evaluated with a fixed
/// Gauss–Legendre rule on `[0, 1]`.
#[derive(Clone)]
pub struct CompletionField {
    u: Arc<dyn ScalarField>,
    center: ReducedPoint,
    rule: Arc<[(f64, f64)]>,
}

fn unit_interval_rule(order: usize) -> Arc<[(f64, f64)]> {
    gauss_legendre(order).into_iter().map(|(x, w)| (0.5 * (x + 1.0), 0.5 * w)).collect()
}

impl CompletionField {
    pub fn order(&self) -> usize {
        self.rule.len()
    }

    pub fn center(&self) -> ReducedPoint {
        self.center
    }

    fn integral(&self, x: ReducedPoint, rule: &[(f64, f64)]) -> Quaternion {
        let r = x - self.center;
        let rq = r.to_quaternion();
        let mut acc = Quaternion::ZERO;
        for &(t, w) in rule {
            let g = dbar_of_gradient(scalar_gradient_unchecked(&*self.u, self.center + r * t));
            acc += g * rq * (t * w);
        }
        acc
    }
}

impl QuaternionField for CompletionField {
    fn value(&self, x: ReducedPoint) -> Quaternion {
        Quaternion::scalar(self.u.value(x)) + self.integral(x, &self.rule).vec()
    }

    fn contains(&self, x: ReducedPoint) -> bool {
        self.u.contains(x)
    }

    fn partials(&self, x: ReducedPoint) -> Option<Partials> {
        // analytic only when u has an analytic Hessian
        self.u.hessian(x)?;
        let r = x - self.center;
        let rq = r.to_quaternion();
        let grad_u = scalar_gradient_unchecked(&*self.u, x);
        let mut acc = [Quaternion::ZERO; 3];
        for &(t, w) in self.rule.iter() {
            let y = self.center + r * t;
            let g = dbar_of_gradient(scalar_gradient_unchecked(&*self.u, y));
            let h = scalar_hessian_unchecked(&*self.u, y);
            for (a, acc_a) in acc.iter_mut().enumerate() {
                let dg = Quaternion::new(h[a][0], -h[a][1], -h[a][2], 0.0);
                let unit = Quaternion::BASIS[a];
                *acc_a += dg * rq * (t * t * w) + g * unit * (t * w);
            }
        }
        Some(std::array::from_fn(|a| Quaternion::scalar(grad_u.component(a)) + acc[a].vec()))
    }
}

/// Completion about the origin.
pub fn monogenic_completion(
    u: Arc<dyn ScalarField>,
    quad_order: usize,
    probes: &[ReducedPoint],
) -> Result<FlowPotential> {
    monogenic_completion_about(u, ReducedPoint::ORIGIN, quad_order, probes)
}

/// Completion on a domain star-shaped with respect to `center`.
///
/// The probes are used to check harmonicity, star-shapedness and the
/// convergence of the `t`-quadrature; the order is doubled from `quad_order`
/// until two successive orders agree.
pub fn monogenic_completion_about(
    u: Arc<dyn ScalarField>,
    center: ReducedPoint,
    quad_order: usize,
    probes: &[ReducedPoint],
) -> Result<FlowPotential> {
    if quad_order == 0 {
        return Err(Error::InvalidParameter("completion order must be positive".into()));
    }
    if !u.contains(center) {
        return Err(Error::OutsideDomain(center));
    }
    harmonic_check(&*u, probes)?;
    for &x in probes {
        for k in 0..=64 {
            let p = center + (x - center) * (k as f64 / 64.0);
            if !u.contains(p) {
                return Err(Error::NotStarShaped { center, point: x });
            }
        }
    }

    let mut order = quad_order;
    let mut field = CompletionField { u: u.clone(), center, rule: unit_interval_rule(order) };
    loop {
        let finer = unit_interval_rule(2 * order);
        let change = probes
            .iter()
            .map(|&x| (field.integral(x, &field.rule) - field.integral(x, &finer)).norm())
            .fold(0.0, f64::max);
        if change <= COMPLETION_AGREEMENT {
            break;
        }
        order *= 2;
        field.rule = finer;
        if order >= COMPLETION_MAX_ORDER {
            let finest = unit_interval_rule(2 * order);
            let change = probes
                .iter()
                .map(|&x| (field.integral(x, &field.rule) - field.integral(x, &finest)).norm())
                .fold(0.0, f64::max);
            if change > COMPLETION_FAILURE {
                return Err(Error::QuadratureNotConverged { change });
            }
            break;
        }
    }
    Ok(FlowPotential::new(Arc::new(field), u, Construction::StarShapedCompletion))
}

// ---------------------------------------------------------------------------
// Velocity

/// `½ D w̄ = ½ Σ e_j conj(∂_j w)`.
fn half_d_conj(p: &Partials) -> Quaternion {
    (p[0].conj() + Quaternion::I * p[1].conj() + Quaternion::J * p[2].conj()) * 0.5
}

/// The field `½ D w̄` as a quaternion field.
#[derive(Clone)]
struct HalfDConj(Arc<dyn QuaternionField>);

impl QuaternionField for HalfDConj {
    fn value(&self, x: ReducedPoint) -> Quaternion {
        half_d_conj(&partials_unchecked(&*self.0, x))
    }
    fn contains(&self, x: ReducedPoint) -> bool {
        self.0.contains(x)
    }
    fn partials(&self, x: ReducedPoint) -> Option<Partials> {
        let h = self.0.second_partials(x)?;
        Some(std::array::from_fn(|a| half_d_conj(&h[a])))
    }
}

#[derive(Clone)]
enum VelocitySource {
    Potential(Arc<dyn QuaternionField>),
    Direct,
}

/// A velocity field `v1 + v2 i + v3 j`.
#[derive(Clone)]
pub struct VelocityField {
    field: Arc<dyn QuaternionField>,
    source: VelocitySource,
}

impl VelocityField {
    /// Wraps a field whose values are reduced quaternions.
    pub fn from_field(field: Arc<dyn QuaternionField>) -> Self {
        Self { field, source: VelocitySource::Direct }
    }

    pub fn from_fn(v: impl Fn(ReducedPoint) -> ReducedPoint + Send + Sync + 'static) -> Self {
        Self::from_field(Arc::new(field::FnField::new(move |x| v(x).to_quaternion())))
    }

    pub fn as_field(&self) -> Arc<dyn QuaternionField> {
        self.field.clone()
    }

    pub fn at(&self, x: ReducedPoint) -> Result<ReducedPoint> {
        let q = match &self.source {
            VelocitySource::Potential(w) => half_d_conj(&field::partials(&**w, x)?),
            VelocitySource::Direct => field::evaluate(&*self.field, x)?,
        };
        Ok(ReducedPoint::truncate(q))
    }

    /// `J[a][b] = ∂_b v_a`.
    pub fn jacobian(&self, x: ReducedPoint) -> Result<[[f64; 3]; 3]> {
        let p = field::partials(&*self.field, x)?;
        Ok(std::array::from_fn(|a| std::array::from_fn(|b| p[b].to_array()[a])))
    }
}

/// `v = ½ D w̄`.
pub fn velocity_from_potential(p: &FlowPotential) -> VelocityField {
    VelocityField {
        field: Arc::new(HalfDConj(p.w.clone())),
        source: VelocitySource::Potential(p.w.clone()),
    }
}

// ---------------------------------------------------------------------------
// Gauge

/// `w' = w + H` for a vector-valued monogenic `H`.
pub fn gauge_transform(
    p: &FlowPotential,
    gauge: Arc<dyn QuaternionField>,
    probes: &[ReducedPoint],
) -> Result<FlowPotential> {
    if probes.is_empty() {
        return Err(Error::EmptySampleSet);
    }
    for &x in probes {
        let h = field::evaluate(&*gauge, x)?;
        if h.q0.abs() > 1e-12 * (1.0 + h.norm()) {
            return Err(Error::NotVectorValued { point: x, scalar: h.q0 });
        }
    }
    let tol = JetKind::of(&*gauge, probes[0]).monogenic_tolerance();
    let report = field::is_monogenic(&*gauge, probes, tol)?;
    if !report.monogenic {
        return Err(Error::NotMonogenic {
            what: "gauge field",
            point: report.worst_point,
            residual: report.max_residual,
        });
    }
    let w: Arc<dyn QuaternionField> = Arc::new(SumField(p.w.clone(), gauge));
    Ok(FlowPotential { w, ..p.clone() })
}

// ---------------------------------------------------------------------------
// Stream functions on the coordinate planes

/// `ψ1(x, y)`, `ψ2(x, z)`, `ψ3(y, z)` obtained by integrating
/// `∂yψ1 = v1/2, ∂xψ1 = -v2/2, ∂zψ2 = v1/2, ∂xψ2 = -v3/2, ∂zψ3 = -v2/2,
/// ∂yψ3 = v3/2` along axis-parallel paths from a base point, where every
/// function vanishes.
#[derive(Clone)]
pub struct GeometricStreams {
    v: VelocityField,
    base: ReducedPoint,
    rule: Arc<[(f64, f64)]>,
}

/// Worst residuals of the identities satisfied by the axis-plane stream functions.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GeometricDiagnostics {
    pub conditions: f64,
    pub orthogonality: f64,
    pub reconstruction: f64,
    pub monogenicity: f64,
}

impl GeometricStreams {
    fn line(&self, from: f64, to: f64, f: impl Fn(f64) -> Result<f64>) -> Result<f64> {
        let half = 0.5 * (to - from);
        let mid = 0.5 * (to + from);
        let mut acc = 0.0;
        for &(s, w) in self.rule.iter() {
            acc += w * f(mid + half * s)?;
        }
        Ok(acc * half)
    }

    fn vel(&self, x: f64, y: f64, z: f64) -> Result<ReducedPoint> {
        self.v.at(ReducedPoint::new(x, y, z))
    }

    pub fn psi1(&self, x: f64, y: f64) -> Result<f64> {
        let b = self.base;
        let along_x = self.line(b.x, x, |s| Ok(-0.5 * self.vel(s, b.y, b.z)?.y))?;
        let along_y = self.line(b.y, y, |s| Ok(0.5 * self.vel(x, s, b.z)?.x))?;
        Ok(along_x + along_y)
    }

    pub fn psi2(&self, x: f64, z: f64) -> Result<f64> {
        let b = self.base;
        let along_x = self.line(b.x, x, |s| Ok(-0.5 * self.vel(s, b.y, b.z)?.z))?;
        let along_z = self.line(b.z, z, |s| Ok(0.5 * self.vel(x, b.y, s)?.x))?;
        Ok(along_x + along_z)
    }

    pub fn psi3(&self, y: f64, z: f64) -> Result<f64> {
        let b = self.base;
        let along_y = self.line(b.y, y, |s| Ok(0.5 * self.vel(b.x, s, b.z)?.z))?;
        let along_z = self.line(b.z, z, |s| Ok(-0.5 * self.vel(b.x, y, s)?.y))?;
        Ok(along_y + along_z)
    }

    /// Velocity potential by line integration, zero at the base point.
    pub fn phi(&self, p: ReducedPoint) -> Result<f64> {
        let b = self.base;
        let a = self.line(b.x, p.x, |s| Ok(self.vel(s, b.y, b.z)?.x))?;
        let c = self.line(b.y, p.y, |s| Ok(self.vel(p.x, s, b.z)?.y))?;
        let d = self.line(b.z, p.z, |s| Ok(self.vel(p.x, p.y, s)?.z))?;
        Ok(a + c + d)
    }

    fn w_value(&self, p: ReducedPoint) -> Result<Quaternion> {
        Ok(Quaternion::new(self.phi(p)?, self.psi1(p.x, p.y)?, self.psi2(p.x, p.z)?, self.psi3(p.y, p.z)?))
    }

    /// `w = φ + ψ1 i + ψ2 j + ψ3 k`, derivatives by finite differences.
    pub fn potential(&self) -> FlowPotential {
        let this = self.clone();
        let dom = self.v.as_field();
        let w = field::FnField::new(move |p| this.w_value(p).unwrap_or(Quaternion::new(f64::NAN, f64::NAN, f64::NAN, f64::NAN)))
            .with_domain(move |p| dom.contains(p));
        FlowPotential::from_field(Arc::new(w), Construction::Geometric)
    }

    /// Checks the six defining conditions, `∇φ·∇ψi = 0`, the velocity
    /// reconstruction and `Dw = 0`, all by central differences of the
    /// constructed functions.
    pub fn diagnostics(&self, probes: &[ReducedPoint]) -> Result<GeometricDiagnostics> {
        if probes.is_empty() {
            return Err(Error::EmptySampleSet);
        }
        let w = self.potential();
        let mut out = GeometricDiagnostics { conditions: 0.0, orthogonality: 0.0, reconstruction: 0.0, monogenicity: 0.0 };
        for &x in probes {
            let p = field::partials(&*w.w, x)?;
            let v = self.v.at(x)?;
            let grad = |c: usize| ReducedPoint::new(p[0].to_array()[c], p[1].to_array()[c], p[2].to_array()[c]);
            let (gphi, g1, g2, g3) = (grad(0), grad(1), grad(2), grad(3));
            let conditions = [
                g1.y - 0.5 * v.x,
                g1.x + 0.5 * v.y,
                g2.z - 0.5 * v.x,
                g2.x + 0.5 * v.z,
                g3.z + 0.5 * v.y,
                g3.y - 0.5 * v.z,
            ];
            let orth = [gphi.dot(g1), gphi.dot(g2), gphi.dot(g3)];
            let recon = [v.x - (g1.y + g2.z), v.y + g1.x + g3.z, v.z + g2.x - g3.y];
            let maxabs = |s: &[f64]| s.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            out.conditions = out.conditions.max(maxabs(&conditions));
            out.orthogonality = out.orthogonality.max(maxabs(&orth));
            out.reconstruction = out.reconstruction.max(maxabs(&recon));
            out.monogenicity = out.monogenicity.max(field::d_left(&p).norm());
        }
        Ok(out)
    }
}

/// Builds the axis-plane stream functions of `v`, refusing velocity fields
/// that violate the integrability conditions at any probe.
pub fn geometric_stream_functions(
    v: &VelocityField,
    base: ReducedPoint,
    probes: &[ReducedPoint],
) -> Result<GeometricStreams> {
    if probes.is_empty() {
        return Err(Error::EmptySampleSet);
    }
    for &x in probes {
        let j = v.jacobian(x)?;
        // j[a][b] = ∂_b v_a
        let checks: [(&'static str, f64); 9] = [
            ("psi1", j[0][0] + j[1][1]),
            ("psi1", j[0][2]),
            ("psi1", j[1][2]),
            ("psi2", j[0][0] + j[2][2]),
            ("psi2", j[0][1]),
            ("psi2", j[2][1]),
            ("psi3", j[1][1] + j[2][2]),
            ("psi3", j[1][0]),
            ("psi3", j[2][0]),
        ];
        for (name, r) in checks {
            if r.abs() > GEOMETRIC_TOL || r.is_nan() {
                return Err(Error::IntegrabilityViolated { stream_function: name, point: x, residual: r.abs() });
            }
        }
    }
    Ok(GeometricStreams { v: v.clone(), base, rule: gauss_legendre(32).into() })
}
