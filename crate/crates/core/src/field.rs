//! Quaternion-valued fields on open subsets of 3-space and the first-order
//! operators `D = ∂x + i∂y + j∂z`, `D̄ = ∂x - i∂y - j∂z` acting from either
//! side, together with `Δ`, the Euler operator and monogenicity diagnostics.
//!
//! Fields may supply analytic derivatives; anything they leave out is
//! synthesized with central differences.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::quat::{Quaternion, ReducedPoint};

/// Relative step for first derivatives: `h = 1e-5 * max(1, |x_j|)`.
pub const FD_STEP: f64 = 1e-5;
/// Relative step for second derivatives.
pub const FD_STEP_SECOND: f64 = 1e-4;
/// Monogenicity tolerance when analytic derivatives are available.
pub const MONOGENIC_TOL_ANALYTIC: f64 = 1e-6;
/// Monogenicity tolerance for finite-difference derivatives.
pub const MONOGENIC_TOL_FD: f64 = 1e-4;
/// Radius of the ball excluded around point singularities.
pub const DEFAULT_EXCLUSION_RADIUS: f64 = 1e-8;

/// `[∂x f, ∂y f, ∂z f]`.
pub type Partials = [Quaternion; 3];
/// `h[a][b] = ∂a ∂b f`.
pub type Hessian = [[Quaternion; 3]; 3];

const UNITS: [Quaternion; 3] = [Quaternion::ONE, Quaternion::I, Quaternion::J];
const CONJ_UNITS: [Quaternion; 3] = [
    Quaternion::ONE,
    Quaternion::new(0.0, -1.0, 0.0, 0.0),
    Quaternion::new(0.0, 0.0, -1.0, 0.0),
];

pub trait QuaternionField: Send + Sync {
    fn value(&self, x: ReducedPoint) -> Quaternion;

    fn contains(&self, _x: ReducedPoint) -> bool {
        true
    }

    /// Analytic first partials, if known.
    fn partials(&self, _x: ReducedPoint) -> Option<Partials> {
        None
    }

    /// Analytic second partials, if known.
    fn second_partials(&self, _x: ReducedPoint) -> Option<Hessian> {
        None
    }
}

impl<T: QuaternionField + ?Sized> QuaternionField for Arc<T> {
    fn value(&self, x: ReducedPoint) -> Quaternion {
        (**self).value(x)
    }
    fn contains(&self, x: ReducedPoint) -> bool {
        (**self).contains(x)
    }
    fn partials(&self, x: ReducedPoint) -> Option<Partials> {
        (**self).partials(x)
    }
    fn second_partials(&self, x: ReducedPoint) -> Option<Hessian> {
        (**self).second_partials(x)
    }
}

impl<T: QuaternionField + ?Sized> QuaternionField for &T {
    fn value(&self, x: ReducedPoint) -> Quaternion {
        (**self).value(x)
    }
    fn contains(&self, x: ReducedPoint) -> bool {
        (**self).contains(x)
    }
    fn partials(&self, x: ReducedPoint) -> Option<Partials> {
        (**self).partials(x)
    }
    fn second_partials(&self, x: ReducedPoint) -> Option<Hessian> {
        (**self).second_partials(x)
    }
}

pub trait ScalarField: Send + Sync {
    fn value(&self, x: ReducedPoint) -> f64;

    fn contains(&self, _x: ReducedPoint) -> bool {
        true
    }

    fn gradient(&self, _x: ReducedPoint) -> Option<ReducedPoint> {
        None
    }

    fn hessian(&self, _x: ReducedPoint) -> Option<[[f64; 3]; 3]> {
        None
    }
}

impl<T: ScalarField + ?Sized> ScalarField for Arc<T> {
    fn value(&self, x: ReducedPoint) -> f64 {
        (**self).value(x)
    }
    fn contains(&self, x: ReducedPoint) -> bool {
        (**self).contains(x)
    }
    fn gradient(&self, x: ReducedPoint) -> Option<ReducedPoint> {
        (**self).gradient(x)
    }
    fn hessian(&self, x: ReducedPoint) -> Option<[[f64; 3]; 3]> {
        (**self).hessian(x)
    }
}

impl<T: ScalarField + ?Sized> ScalarField for &T {
    fn value(&self, x: ReducedPoint) -> f64 {
        (**self).value(x)
    }
    fn contains(&self, x: ReducedPoint) -> bool {
        (**self).contains(x)
    }
    fn gradient(&self, x: ReducedPoint) -> Option<ReducedPoint> {
        (**self).gradient(x)
    }
    fn hessian(&self, x: ReducedPoint) -> Option<[[f64; 3]; 3]> {
        (**self).hessian(x)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum JetKind {
    Analytic,
    FiniteDifference,
}

impl JetKind {
    pub fn of(f: &dyn QuaternionField, x: ReducedPoint) -> Self {
        if f.partials(x).is_some() {
            JetKind::Analytic
        } else {
            JetKind::FiniteDifference
        }
    }

    pub fn monogenic_tolerance(self) -> f64 {
        match self {
            JetKind::Analytic => MONOGENIC_TOL_ANALYTIC,
            JetKind::FiniteDifference => MONOGENIC_TOL_FD,
        }
    }
}

/// Value and first partials at a point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jet {
    pub value: Quaternion,
    pub partials: Partials,
    pub kind: JetKind,
}

fn step(coord: f64, rel: f64) -> f64 {
    rel * coord.abs().max(1.0)
}

fn shifted(x: ReducedPoint, axis: usize, by: f64) -> ReducedPoint {
    x.with_component(axis, x.component(axis) + by)
}

fn check_stencil(contains: impl Fn(ReducedPoint) -> bool, x: ReducedPoint, rel: f64, mixed: bool) -> Result<()> {
    for a in 0..3 {
        let ha = step(x.component(a), rel);
        for s in [-1.0, 1.0] {
            let p = shifted(x, a, s * ha);
            if !contains(p) {
                return Err(Error::OutsideDomain(p));
            }
        }
        if mixed {
            for b in (a + 1)..3 {
                let hb = step(x.component(b), rel);
                for (sa, sb) in [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)] {
                    let p = shifted(shifted(x, a, sa * ha), b, sb * hb);
                    if !contains(p) {
                        return Err(Error::OutsideDomain(p));
                    }
                }
            }
        }
    }
    Ok(())
}

/// Central differences of `g`, no domain checks.
pub fn fd_partials<G: Fn(ReducedPoint) -> Quaternion + ?Sized>(g: &G, x: ReducedPoint) -> Partials {
    std::array::from_fn(|a| {
        let h = step(x.component(a), FD_STEP);
        (g(shifted(x, a, h)) - g(shifted(x, a, -h))) / (2.0 * h)
    })
}

/// Second differences of `g` with step [`FD_STEP_SECOND`], no domain checks.
pub fn fd_second_partials<G: Fn(ReducedPoint) -> Quaternion + ?Sized>(g: &G, x: ReducedPoint) -> Hessian {
    let mut hess = [[Quaternion::ZERO; 3]; 3];
    let center = g(x);
    for a in 0..3 {
        let ha = step(x.component(a), FD_STEP_SECOND);
        hess[a][a] = (g(shifted(x, a, ha)) - center * 2.0 + g(shifted(x, a, -ha))) / (ha * ha);
        for b in (a + 1)..3 {
            let hb = step(x.component(b), FD_STEP_SECOND);
            let pp = g(shifted(shifted(x, a, ha), b, hb));
            let pm = g(shifted(shifted(x, a, ha), b, -hb));
            let mp = g(shifted(shifted(x, a, -ha), b, hb));
            let mm = g(shifted(shifted(x, a, -ha), b, -hb));
            let v = (pp - pm - mp + mm) / (4.0 * ha * hb);
            hess[a][b] = v;
            hess[b][a] = v;
        }
    }
    hess
}

/// Central differences of analytic partials, no domain checks.
fn fd_of_partials<G: Fn(ReducedPoint) -> Partials + ?Sized>(g: &G, x: ReducedPoint) -> Hessian {
    let mut hess = [[Quaternion::ZERO; 3]; 3];
    for a in 0..3 {
        let h = step(x.component(a), FD_STEP_SECOND);
        let plus = g(shifted(x, a, h));
        let minus = g(shifted(x, a, -h));
        for b in 0..3 {
            hess[a][b] = (plus[b] - minus[b]) / (2.0 * h);
        }
    }
    // symmetrize
    for a in 0..3 {
        for b in (a + 1)..3 {
            let m = (hess[a][b] + hess[b][a]) * 0.5;
            hess[a][b] = m;
            hess[b][a] = m;
        }
    }
    hess
}

/// Partials without domain checks: analytic when offered, else central differences.
pub fn partials_unchecked(f: &dyn QuaternionField, x: ReducedPoint) -> Partials {
    f.partials(x).unwrap_or_else(|| fd_partials(&|p| f.value(p), x))
}

/// Second partials without domain checks.
pub fn second_partials_unchecked(f: &dyn QuaternionField, x: ReducedPoint) -> Hessian {
    if let Some(h) = f.second_partials(x) {
        return h;
    }
    if f.partials(x).is_some() {
        return fd_of_partials(&|p| partials_unchecked(f, p), x);
    }
    fd_second_partials(&|p| f.value(p), x)
}

pub fn evaluate(f: &dyn QuaternionField, x: ReducedPoint) -> Result<Quaternion> {
    if !f.contains(x) {
        return Err(Error::OutsideDomain(x));
    }
    Ok(f.value(x))
}

pub fn partials(f: &dyn QuaternionField, x: ReducedPoint) -> Result<Partials> {
    if !f.contains(x) {
        return Err(Error::OutsideDomain(x));
    }
    if let Some(p) = f.partials(x) {
        return Ok(p);
    }
    check_stencil(|p| f.contains(p), x, FD_STEP, false)?;
    Ok(fd_partials(&|p| f.value(p), x))
}

pub fn second_partials(f: &dyn QuaternionField, x: ReducedPoint) -> Result<Hessian> {
    if !f.contains(x) {
        return Err(Error::OutsideDomain(x));
    }
    if let Some(h) = f.second_partials(x) {
        return Ok(h);
    }
    let analytic_first = f.partials(x).is_some();
    check_stencil(|p| f.contains(p), x, FD_STEP_SECOND, !analytic_first)?;
    Ok(second_partials_unchecked(f, x))
}

pub fn jet(f: &dyn QuaternionField, x: ReducedPoint) -> Result<Jet> {
    let value = evaluate(f, x)?;
    let kind = JetKind::of(f, x);
    Ok(Jet { value, partials: partials(f, x)?, kind })
}

fn left(units: &[Quaternion; 3], p: &Partials) -> Quaternion {
    units[0] * p[0] + units[1] * p[1] + units[2] * p[2]
}

fn right(units: &[Quaternion; 3], p: &Partials) -> Quaternion {
    p[0] * units[0] + p[1] * units[1] + p[2] * units[2]
}

/// `D f` from precomputed partials.
pub fn d_left(p: &Partials) -> Quaternion {
    left(&UNITS, p)
}

/// `D̄ f` from precomputed partials.
pub fn dbar_left(p: &Partials) -> Quaternion {
    left(&CONJ_UNITS, p)
}

/// `f D` from precomputed partials.
pub fn d_right(p: &Partials) -> Quaternion {
    right(&UNITS, p)
}

/// `f D̄` from precomputed partials.
pub fn dbar_right(p: &Partials) -> Quaternion {
    right(&CONJ_UNITS, p)
}

/// `D f = ∂x f + i ∂y f + j ∂z f`.
pub fn apply_d(f: &dyn QuaternionField, x: ReducedPoint) -> Result<Quaternion> {
    Ok(d_left(&partials(f, x)?))
}

/// `D̄ f = ∂x f - i ∂y f - j ∂z f`.
pub fn apply_dbar(f: &dyn QuaternionField, x: ReducedPoint) -> Result<Quaternion> {
    Ok(dbar_left(&partials(f, x)?))
}

/// `f D = ∂x f + ∂y f i + ∂z f j`.
pub fn apply_d_right(f: &dyn QuaternionField, x: ReducedPoint) -> Result<Quaternion> {
    Ok(d_right(&partials(f, x)?))
}

/// `f D̄ = ∂x f - ∂y f i - ∂z f j`.
pub fn apply_dbar_right(f: &dyn QuaternionField, x: ReducedPoint) -> Result<Quaternion> {
    Ok(dbar_right(&partials(f, x)?))
}

/// Componentwise Laplacian.
pub fn laplacian(f: &dyn QuaternionField, x: ReducedPoint) -> Result<Quaternion> {
    let h = second_partials(f, x)?;
    Ok(h[0][0] + h[1][1] + h[2][2])
}

/// `D(D̄ f)` assembled from the full Hessian.
pub fn d_of_dbar(f: &dyn QuaternionField, x: ReducedPoint) -> Result<Quaternion> {
    let h = second_partials(f, x)?;
    let mut acc = Quaternion::ZERO;
    for a in 0..3 {
        for b in 0..3 {
            acc += UNITS[a] * CONJ_UNITS[b] * h[a][b];
        }
    }
    Ok(acc)
}

/// `D̄(D f)` assembled from the full Hessian.
pub fn dbar_of_d(f: &dyn QuaternionField, x: ReducedPoint) -> Result<Quaternion> {
    let h = second_partials(f, x)?;
    let mut acc = Quaternion::ZERO;
    for a in 0..3 {
        for b in 0..3 {
            acc += CONJ_UNITS[a] * UNITS[b] * h[a][b];
        }
    }
    Ok(acc)
}

/// `E f = x ∂x f + y ∂y f + z ∂z f`.
pub fn euler_operator(f: &dyn QuaternionField, x: ReducedPoint) -> Result<Quaternion> {
    let p = partials(f, x)?;
    Ok(p[0] * x.x + p[1] * x.y + p[2] * x.z)
}

/// The four left-hand sides of the Moisil–Theodorescu system, written out
/// component by component.
pub fn moisil_theodorescu(p: &Partials) -> [f64; 4] {
    let [fx, fy, fz] = *p;
    [
        fx.q0 - fy.q1 - fz.q2,
        fx.q1 + fy.q0 + fz.q3,
        fx.q2 + fz.q0 - fy.q3,
        fx.q3 + fy.q2 - fz.q1,
    ]
}

/// Euclidean norm of the Moisil–Theodorescu left-hand sides.
pub fn moisil_theodorescu_residual(f: &dyn QuaternionField, x: ReducedPoint) -> Result<f64> {
    let r = moisil_theodorescu(&partials(f, x)?);
    Ok(r.iter().map(|v| v * v).sum::<f64>().sqrt())
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MonogenicityReport {
    pub monogenic: bool,
    pub max_residual: f64,
    pub worst_point: ReducedPoint,
    pub samples: usize,
}

fn residual_report(
    points: &[ReducedPoint],
    tol: f64,
    residual: impl Fn(ReducedPoint) -> Result<f64>,
) -> Result<MonogenicityReport> {
    if points.is_empty() {
        return Err(Error::EmptySampleSet);
    }
    let mut max_residual = 0.0f64;
    let mut worst_point = points[0];
    for &x in points {
        let r = residual(x)?;
        if r > max_residual || r.is_nan() {
            max_residual = r;
            worst_point = x;
        }
    }
    Ok(MonogenicityReport {
        monogenic: max_residual <= tol,
        max_residual,
        worst_point,
        samples: points.len(),
    })
}

/// Left monogenicity: `max |D f| <= tol` over the samples.
pub fn is_monogenic(f: &dyn QuaternionField, points: &[ReducedPoint], tol: f64) -> Result<MonogenicityReport> {
    residual_report(points, tol, |x| Ok(apply_d(f, x)?.norm()))
}

/// Right monogenicity: `max |f D| <= tol` over the samples.
pub fn is_right_monogenic(
    f: &dyn QuaternionField,
    points: &[ReducedPoint],
    tol: f64,
) -> Result<MonogenicityReport> {
    residual_report(points, tol, |x| Ok(apply_d_right(f, x)?.norm()))
}

/// Left anti-monogenicity: `max |D̄ f| <= tol` over the samples.
pub fn is_antimonogenic(
    f: &dyn QuaternionField,
    points: &[ReducedPoint],
    tol: f64,
) -> Result<MonogenicityReport> {
    residual_report(points, tol, |x| Ok(apply_dbar(f, x)?.norm()))
}

// ---------------------------------------------------------------------------
// Scalar fields

pub fn scalar_value(u: &dyn ScalarField, x: ReducedPoint) -> Result<f64> {
    if !u.contains(x) {
        return Err(Error::OutsideDomain(x));
    }
    Ok(u.value(x))
}

/// Gradient without domain checks.
pub fn scalar_gradient_unchecked(u: &dyn ScalarField, x: ReducedPoint) -> ReducedPoint {
    u.gradient(x).unwrap_or_else(|| {
        let p = fd_partials(&|p| Quaternion::scalar(u.value(p)), x);
        ReducedPoint::new(p[0].q0, p[1].q0, p[2].q0)
    })
}

/// Hessian without domain checks.
pub fn scalar_hessian_unchecked(u: &dyn ScalarField, x: ReducedPoint) -> [[f64; 3]; 3] {
    if let Some(h) = u.hessian(x) {
        return h;
    }
    let h = second_partials_unchecked(&ScalarAsQuaternion(u), x);
    std::array::from_fn(|a| std::array::from_fn(|b| h[a][b].q0))
}

pub fn scalar_gradient(u: &dyn ScalarField, x: ReducedPoint) -> Result<ReducedPoint> {
    let p = partials(&ScalarAsQuaternion(u), x)?;
    Ok(ReducedPoint::new(p[0].q0, p[1].q0, p[2].q0))
}

pub fn scalar_hessian(u: &dyn ScalarField, x: ReducedPoint) -> Result<[[f64; 3]; 3]> {
    let h = second_partials(&ScalarAsQuaternion(u), x)?;
    Ok(std::array::from_fn(|a| std::array::from_fn(|b| h[a][b].q0)))
}

pub fn scalar_laplacian(u: &dyn ScalarField, x: ReducedPoint) -> Result<f64> {
    let h = scalar_hessian(u, x)?;
    Ok(h[0][0] + h[1][1] + h[2][2])
}

/// A real field viewed as a quaternion field with zero vector part.
#[derive(Clone)]
pub struct ScalarAsQuaternion<S>(pub S);

impl<S: ScalarField> QuaternionField for ScalarAsQuaternion<S> {
    fn value(&self, x: ReducedPoint) -> Quaternion {
        Quaternion::scalar(self.0.value(x))
    }
    fn contains(&self, x: ReducedPoint) -> bool {
        self.0.contains(x)
    }
    fn partials(&self, x: ReducedPoint) -> Option<Partials> {
        let g = self.0.gradient(x)?;
        Some([Quaternion::scalar(g.x), Quaternion::scalar(g.y), Quaternion::scalar(g.z)])
    }
    fn second_partials(&self, x: ReducedPoint) -> Option<Hessian> {
        let h = self.0.hessian(x)?;
        Some(std::array::from_fn(|a| std::array::from_fn(|b| Quaternion::scalar(h[a][b]))))
    }
}

/// Scalar part of a quaternion field.
#[derive(Clone)]
pub struct ScalarPart<F>(pub F);

impl<F: QuaternionField> ScalarField for ScalarPart<F> {
    fn value(&self, x: ReducedPoint) -> f64 {
        self.0.value(x).q0
    }
    fn contains(&self, x: ReducedPoint) -> bool {
        self.0.contains(x)
    }
    fn gradient(&self, x: ReducedPoint) -> Option<ReducedPoint> {
        let p = self.0.partials(x)?;
        Some(ReducedPoint::new(p[0].q0, p[1].q0, p[2].q0))
    }
    fn hessian(&self, x: ReducedPoint) -> Option<[[f64; 3]; 3]> {
        let h = self.0.second_partials(x)?;
        Some(std::array::from_fn(|a| std::array::from_fn(|b| h[a][b].q0)))
    }
}

// ---------------------------------------------------------------------------
// Concrete fields

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Constant(pub Quaternion);

impl QuaternionField for Constant {
    fn value(&self, _x: ReducedPoint) -> Quaternion {
        self.0
    }
    fn partials(&self, _x: ReducedPoint) -> Option<Partials> {
        Some([Quaternion::ZERO; 3])
    }
    fn second_partials(&self, _x: ReducedPoint) -> Option<Hessian> {
        Some([[Quaternion::ZERO; 3]; 3])
    }
}

/// Pointwise sum of two fields; the domain is the intersection.
#[derive(Clone)]
pub struct SumField<A, B>(pub A, pub B);

impl<A: QuaternionField, B: QuaternionField> QuaternionField for SumField<A, B> {
    fn value(&self, x: ReducedPoint) -> Quaternion {
        self.0.value(x) + self.1.value(x)
    }
    fn contains(&self, x: ReducedPoint) -> bool {
        self.0.contains(x) && self.1.contains(x)
    }
    fn partials(&self, x: ReducedPoint) -> Option<Partials> {
        let a = self.0.partials(x)?;
        let b = self.1.partials(x)?;
        Some(std::array::from_fn(|k| a[k] + b[k]))
    }
    fn second_partials(&self, x: ReducedPoint) -> Option<Hessian> {
        let a = self.0.second_partials(x)?;
        let b = self.1.second_partials(x)?;
        Some(std::array::from_fn(|i| std::array::from_fn(|j| a[i][j] + b[i][j])))
    }
}

/// `c * f` for a real constant `c`.
#[derive(Clone)]
pub struct ScaledField<F>(pub f64, pub F);

impl<F: QuaternionField> QuaternionField for ScaledField<F> {
    fn value(&self, x: ReducedPoint) -> Quaternion {
        self.1.value(x) * self.0
    }
    fn contains(&self, x: ReducedPoint) -> bool {
        self.1.contains(x)
    }
    fn partials(&self, x: ReducedPoint) -> Option<Partials> {
        let p = self.1.partials(x)?;
        Some(p.map(|q| q * self.0))
    }
    fn second_partials(&self, x: ReducedPoint) -> Option<Hessian> {
        let h = self.1.second_partials(x)?;
        Some(h.map(|row| row.map(|q| q * self.0)))
    }
}

type ValueFn = dyn Fn(ReducedPoint) -> Quaternion + Send + Sync;
type PartialsFn = dyn Fn(ReducedPoint) -> Partials + Send + Sync;
type HessianFn = dyn Fn(ReducedPoint) -> Hessian + Send + Sync;
type DomainFn = dyn Fn(ReducedPoint) -> bool + Send + Sync;

/// A field assembled from closures.
#[derive(Clone)]
pub struct FnField {
    value: Arc<ValueFn>,
    partials: Option<Arc<PartialsFn>>,
    second: Option<Arc<HessianFn>>,
    domain: Option<Arc<DomainFn>>,
}

impl FnField {
    pub fn new(value: impl Fn(ReducedPoint) -> Quaternion + Send + Sync + 'static) -> Self {
        Self { value: Arc::new(value), partials: None, second: None, domain: None }
    }

    pub fn with_partials(mut self, p: impl Fn(ReducedPoint) -> Partials + Send + Sync + 'static) -> Self {
        self.partials = Some(Arc::new(p));
        self
    }

    pub fn with_second_partials(mut self, h: impl Fn(ReducedPoint) -> Hessian + Send + Sync + 'static) -> Self {
        self.second = Some(Arc::new(h));
        self
    }

    pub fn with_domain(mut self, d: impl Fn(ReducedPoint) -> bool + Send + Sync + 'static) -> Self {
        self.domain = Some(Arc::new(d));
        self
    }
}

impl QuaternionField for FnField {
    fn value(&self, x: ReducedPoint) -> Quaternion {
        (self.value)(x)
    }
    fn contains(&self, x: ReducedPoint) -> bool {
        self.domain.as_ref().is_none_or(|d| d(x))
    }
    fn partials(&self, x: ReducedPoint) -> Option<Partials> {
        self.partials.as_ref().map(|p| p(x))
    }
    fn second_partials(&self, x: ReducedPoint) -> Option<Hessian> {
        self.second.as_ref().map(|h| h(x))
    }
}

type ScalarFn = dyn Fn(ReducedPoint) -> f64 + Send + Sync;
type GradientFn = dyn Fn(ReducedPoint) -> ReducedPoint + Send + Sync;
type ScalarHessianFn = dyn Fn(ReducedPoint) -> [[f64; 3]; 3] + Send + Sync;

/// A scalar field assembled from closures.
#[derive(Clone)]
pub struct FnScalar {
    value: Arc<ScalarFn>,
    gradient: Option<Arc<GradientFn>>,
    hessian: Option<Arc<ScalarHessianFn>>,
    domain: Option<Arc<DomainFn>>,
}

impl FnScalar {
    pub fn new(value: impl Fn(ReducedPoint) -> f64 + Send + Sync + 'static) -> Self {
        Self { value: Arc::new(value), gradient: None, hessian: None, domain: None }
    }

    pub fn with_gradient(mut self, g: impl Fn(ReducedPoint) -> ReducedPoint + Send + Sync + 'static) -> Self {
        self.gradient = Some(Arc::new(g));
        self
    }

    pub fn with_hessian(mut self, h: impl Fn(ReducedPoint) -> [[f64; 3]; 3] + Send + Sync + 'static) -> Self {
        self.hessian = Some(Arc::new(h));
        self
    }

    pub fn with_domain(mut self, d: impl Fn(ReducedPoint) -> bool + Send + Sync + 'static) -> Self {
        self.domain = Some(Arc::new(d));
        self
    }
}

impl ScalarField for FnScalar {
    fn value(&self, x: ReducedPoint) -> f64 {
        (self.value)(x)
    }
    fn contains(&self, x: ReducedPoint) -> bool {
        self.domain.as_ref().is_none_or(|d| d(x))
    }
    fn gradient(&self, x: ReducedPoint) -> Option<ReducedPoint> {
        self.gradient.as_ref().map(|g| g(x))
    }
    fn hessian(&self, x: ReducedPoint) -> Option<[[f64; 3]; 3]> {
        self.hessian.as_ref().map(|h| h(x))
    }
}

/// `1 / |x - center|`, with the exclusion ball removed from its domain.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InverseDistance {
    pub center: ReducedPoint,
    pub exclusion: f64,
}

impl InverseDistance {
    pub fn new(center: ReducedPoint) -> Self {
        Self { center, exclusion: DEFAULT_EXCLUSION_RADIUS }
    }
}

impl ScalarField for InverseDistance {
    fn value(&self, x: ReducedPoint) -> f64 {
        1.0 / (x - self.center).norm()
    }
    fn contains(&self, x: ReducedPoint) -> bool {
        (x - self.center).norm() > self.exclusion
    }
    fn gradient(&self, x: ReducedPoint) -> Option<ReducedPoint> {
        let d = x - self.center;
        let r = d.norm();
        Some(d * (-1.0 / (r * r * r)))
    }
    fn hessian(&self, x: ReducedPoint) -> Option<[[f64; 3]; 3]> {
        let d = (x - self.center).to_array();
        let r2: f64 = d.iter().map(|v| v * v).sum();
        let r = r2.sqrt();
        let r3 = r2 * r;
        let r5 = r3 * r2;
        Some(std::array::from_fn(|a| {
            std::array::from_fn(|b| 3.0 * d[a] * d[b] / r5 - if a == b { 1.0 / r3 } else { 0.0 })
        }))
    }
}

/// A real polynomial in `x, y, z`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Polynomial {
    terms: Vec<(f64, [u32; 3])>,
}

fn monomial(x: ReducedPoint, e: [u32; 3]) -> f64 {
    x.x.powi(e[0] as i32) * x.y.powi(e[1] as i32) * x.z.powi(e[2] as i32)
}

impl Polynomial {
    pub fn new(terms: impl IntoIterator<Item = (f64, [u32; 3])>) -> Self {
        Self { terms: terms.into_iter().filter(|t| t.0 != 0.0).collect() }
    }

    pub fn constant(c: f64) -> Self {
        Self::new([(c, [0, 0, 0])])
    }

    pub fn coordinate(axis: usize) -> Self {
        let mut e = [0; 3];
        e[axis] = 1;
        Self::new([(1.0, e)])
    }

    pub fn terms(&self) -> &[(f64, [u32; 3])] {
        &self.terms
    }

    pub fn degree(&self) -> u32 {
        self.terms.iter().map(|t| t.1.iter().sum()).max().unwrap_or(0)
    }

    pub fn eval(&self, x: ReducedPoint) -> f64 {
        self.terms.iter().map(|&(c, e)| c * monomial(x, e)).sum()
    }

    pub fn derivative(&self, axis: usize) -> Self {
        Self::new(self.terms.iter().filter(|t| t.1[axis] > 0).map(|&(c, mut e)| {
            let k = e[axis];
            e[axis] -= 1;
            (c * k as f64, e)
        }))
    }

    fn eval_gradient(&self, x: ReducedPoint) -> [f64; 3] {
        let mut g = [0.0; 3];
        for &(c, e) in &self.terms {
            for (a, ga) in g.iter_mut().enumerate() {
                if e[a] > 0 {
                    let mut d = e;
                    d[a] -= 1;
                    *ga += c * e[a] as f64 * monomial(x, d);
                }
            }
        }
        g
    }

    fn eval_hessian(&self, x: ReducedPoint) -> [[f64; 3]; 3] {
        let mut h = [[0.0; 3]; 3];
        for &(c, e) in &self.terms {
            for a in 0..3 {
                for b in 0..3 {
                    let mut d = e;
                    let ka = d[a];
                    if ka == 0 {
                        continue;
                    }
                    d[a] -= 1;
                    let kb = d[b];
                    if kb == 0 {
                        continue;
                    }
                    d[b] -= 1;
                    h[a][b] += c * (ka * kb) as f64 * monomial(x, d);
                }
            }
        }
        h
    }
}

impl ScalarField for Polynomial {
    fn value(&self, x: ReducedPoint) -> f64 {
        self.eval(x)
    }
    fn gradient(&self, x: ReducedPoint) -> Option<ReducedPoint> {
        Some(ReducedPoint::from_array(self.eval_gradient(x)))
    }
    fn hessian(&self, x: ReducedPoint) -> Option<[[f64; 3]; 3]> {
        Some(self.eval_hessian(x))
    }
}

/// `p0 + p1 i + p2 j + p3 k` with polynomial components.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct QuaternionPolynomial {
    pub components: [Polynomial; 4],
}

impl QuaternionPolynomial {
    pub fn new(components: [Polynomial; 4]) -> Self {
        Self { components }
    }

    /// The identity map `x + y i + z j`.
    pub fn position() -> Self {
        Self::new([
            Polynomial::coordinate(0),
            Polynomial::coordinate(1),
            Polynomial::coordinate(2),
            Polynomial::default(),
        ])
    }

    pub fn real(p: Polynomial) -> Self {
        Self::new([p, Polynomial::default(), Polynomial::default(), Polynomial::default()])
    }
}

impl QuaternionField for QuaternionPolynomial {
    fn value(&self, x: ReducedPoint) -> Quaternion {
        Quaternion::from_array(std::array::from_fn(|c| self.components[c].eval(x)))
    }
    fn partials(&self, x: ReducedPoint) -> Option<Partials> {
        let g: [[f64; 3]; 4] = std::array::from_fn(|c| self.components[c].eval_gradient(x));
        Some(std::array::from_fn(|a| Quaternion::new(g[0][a], g[1][a], g[2][a], g[3][a])))
    }
    fn second_partials(&self, x: ReducedPoint) -> Option<Hessian> {
        let h: [[[f64; 3]; 3]; 4] = std::array::from_fn(|c| self.components[c].eval_hessian(x));
        Some(std::array::from_fn(|a| {
            std::array::from_fn(|b| Quaternion::new(h[0][a][b], h[1][a][b], h[2][a][b], h[3][a][b]))
        }))
    }
}

/// Strips analytic derivatives from a field so every derivative goes
/// through finite differences.
#[derive(Clone)]
pub struct FiniteDifferenced<F>(pub F);

impl<F: QuaternionField> QuaternionField for FiniteDifferenced<F> {
    fn value(&self, x: ReducedPoint) -> Quaternion {
        self.0.value(x)
    }
    fn contains(&self, x: ReducedPoint) -> bool {
        self.0.contains(x)
    }
}
