//! Planar flows `f(z) = φ + iψ`, the complex Blasius–Chaplygin contour
//! formulas, and the comparison with the surface formulas on a finite
//! cylinder built over the contour.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Hessian, Partials, QuaternionField, DEFAULT_EXCLUSION_RADIUS, FD_STEP};
use crate::force::{d_conj, force_blasius, moment, FlowScenario, MomentMethod};
use crate::potential::{Construction, FlowPotential};
use crate::quadrature::{pairwise_sum, Rule1d};
use crate::quat::{Quaternion, ReducedPoint};
use crate::surface::{integrate_by_chart, ClosedCurve, RegularBody};

/// Closed counterclockwise arc-length parametrized contour.
pub type PlanarContour = ClosedCurve;

/// Panels of the composite contour rule.
pub const CONTOUR_PANELS: usize = 8;
/// Nodes per panel of the contour rule.
pub const CONTOUR_ORDER: usize = 32;
/// Relative tolerance of the streamline precondition.
pub const STREAMLINE_TOL: f64 = 1e-6;
/// Tolerance of the Cauchy–Riemann probe.
pub const ANALYTIC_TOL: f64 = 1e-6;

type CFn = Arc<dyn Fn(Complex64) -> Complex64 + Send + Sync>;

/// A complex potential with its derivative.
#[derive(Clone)]
pub struct ComplexPotential {
    f: CFn,
    df: CFn,
    d2f: Option<CFn>,
    singularities: Vec<Complex64>,
    far_field: Complex64,
}

impl fmt::Debug for ComplexPotential {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ComplexPotential")
            .field("singularities", &self.singularities)
            .field("far_field", &self.far_field)
            .finish_non_exhaustive()
    }
}

impl ComplexPotential {
    pub fn new(
        f: impl Fn(Complex64) -> Complex64 + Send + Sync + 'static,
        df: impl Fn(Complex64) -> Complex64 + Send + Sync + 'static,
    ) -> Self {
        Self { f: Arc::new(f), df: Arc::new(df), d2f: None, singularities: Vec::new(), far_field: Complex64::new(0.0, 0.0) }
    }

    pub fn with_second_derivative(mut self, d2f: impl Fn(Complex64) -> Complex64 + Send + Sync + 'static) -> Self {
        self.d2f = Some(Arc::new(d2f));
        self
    }

    pub fn with_singularities(mut self, s: Vec<Complex64>) -> Self {
        self.singularities = s;
        self
    }

    /// `f′` far from the origin, `v1 − i v2` of the oncoming flow.
    pub fn with_far_field(mut self, df_inf: Complex64) -> Self {
        self.far_field = df_inf;
        self
    }

    /// `U z`.
    pub fn uniform(u: f64) -> Self {
        Self::new(move |z| z * u, move |_| Complex64::new(u, 0.0))
            .with_second_derivative(|_| Complex64::new(0.0, 0.0))
            .with_far_field(Complex64::new(u, 0.0))
    }

    /// `U (z + a²/z)`.
    pub fn cylinder(u: f64, a: f64) -> Result<Self> {
        Self::cylinder_vortex(u, a, 0.0)
    }

    /// `U (z + a²/z) − (iΓ/2π) log z`, principal branch.
    pub fn cylinder_vortex(u: f64, a: f64, gamma: f64) -> Result<Self> {
        if !(a > 0.0) || !a.is_finite() {
            return Err(Error::InvalidParameter(format!("cylinder radius must be positive, got {a}")));
        }
        let a2 = a * a;
        let k = Complex64::new(0.0, gamma / (2.0 * PI));
        Ok(Self::new(move |z| (z + a2 / z) * u - k * z.ln(), move |z| (1.0 - a2 / (z * z)) * u - k / z)
            .with_second_derivative(move |z| 2.0 * u * a2 / (z * z * z) + k / (z * z))
            .with_singularities(vec![Complex64::new(0.0, 0.0)])
            .with_far_field(Complex64::new(u, 0.0)))
    }

    pub fn value(&self, z: Complex64) -> Complex64 {
        (self.f)(z)
    }

    pub fn derivative(&self, z: Complex64) -> Complex64 {
        (self.df)(z)
    }

    pub fn second_derivative(&self, z: Complex64) -> Complex64 {
        match &self.d2f {
            Some(d2f) => d2f(z),
            None => {
                let h = FD_STEP * z.norm().max(1.0);
                (self.derivative(z + h) - self.derivative(z - h)) / (2.0 * h)
            }
        }
    }

    pub fn singularities(&self) -> &[Complex64] {
        &self.singularities
    }

    pub fn far_field(&self) -> Complex64 {
        self.far_field
    }

    pub fn is_regular_at(&self, z: Complex64) -> bool {
        self.singularities.iter().all(|s| (z - s).norm() > DEFAULT_EXCLUSION_RADIUS)
    }

    /// `|f_x − f′| + |f_y − i f′|` by central differences.
    pub fn cauchy_riemann_residual(&self, z: Complex64) -> f64 {
        let h = FD_STEP * z.norm().max(1.0);
        let i = Complex64::new(0.0, 1.0);
        let fx = (self.value(z + h) - self.value(z - h)) / (2.0 * h);
        let fy = (self.value(z + i * h) - self.value(z - i * h)) / (2.0 * h);
        let d = self.derivative(z);
        (fx - d).norm() + (fy - i * d).norm()
    }

    pub fn check_analytic(&self, probes: &[Complex64]) -> Result<()> {
        if probes.is_empty() {
            return Err(Error::EmptySampleSet);
        }
        for &z in probes {
            let point = ReducedPoint::new(z.re, z.im, 0.0);
            if !self.is_regular_at(z) {
                return Err(Error::Singularity(point));
            }
            let r = self.cauchy_riemann_residual(z);
            if r > ANALYTIC_TOL * (1.0 + self.derivative(z).norm()) || r.is_nan() {
                return Err(Error::NotMonogenic { what: "complex potential", point, residual: r });
            }
        }
        Ok(())
    }
}

fn contour_nodes(c: &PlanarContour) -> Vec<(Complex64, Complex64, f64)> {
    Rule1d::CompositeGaussLegendre { panels: CONTOUR_PANELS, order: CONTOUR_ORDER }
        .nodes(0.0, c.length())
        .into_iter()
        .map(|(s, w)| {
            let p = c.point(s);
            let t = c.tangent(s);
            (Complex64::new(p[0], p[1]), Complex64::new(t[0], t[1]), w)
        })
        .collect()
}

fn check_contour(f: &ComplexPotential, nodes: &[(Complex64, Complex64, f64)], c: &PlanarContour) -> Result<()> {
    for s in f.singularities() {
        if c.distance([s.re, s.im]) <= 1e-8 * c.length() {
            return Err(Error::Singularity(ReducedPoint::new(s.re, s.im, 0.0)));
        }
    }
    if let Some((z, _, _)) = nodes.iter().find(|(z, _, _)| !f.is_regular_at(*z)) {
        return Err(Error::Singularity(ReducedPoint::new(z.re, z.im, 0.0)));
    }
    Ok(())
}

/// Largest `|Im f − mean|` along the contour and the allowed deviation.
pub fn streamline_deviation(f: &ComplexPotential, c: &PlanarContour) -> (f64, f64) {
    let nodes = contour_nodes(c);
    let psi: Vec<f64> = nodes.iter().map(|(z, _, _)| f.value(*z).im).collect();
    let mean = psi.iter().sum::<f64>() / psi.len() as f64;
    let dev = psi.iter().fold(0.0f64, |m, p| m.max((p - mean).abs()));
    (dev, STREAMLINE_TOL * (1.0 + mean.abs()))
}

fn require_streamline(f: &ComplexPotential, c: &PlanarContour) -> Result<()> {
    let (deviation, allowed) = streamline_deviation(f, c);
    if deviation <= allowed {
        Ok(())
    } else {
        Err(Error::NotStreamline { deviation, allowed })
    }
}

fn contour_integral(nodes: &[(Complex64, Complex64, f64)], g: impl Fn(Complex64) -> Complex64) -> Complex64 {
    let terms: Vec<Complex64> = nodes.iter().map(|&(z, t, w)| g(z) * t * w).collect();
    pairwise_sum(&terms)
}

/// `F_x − i F_y = (iρ/2) ∮ (f′)² dz`; the contour must be a streamline.
pub fn blasius_force_2d(f: &ComplexPotential, c: &PlanarContour, rho: f64) -> Result<Complex64> {
    let nodes = contour_nodes(c);
    check_contour(f, &nodes, c)?;
    require_streamline(f, c)?;
    let i = Complex64::new(0.0, 1.0);
    Ok(i * (rho / 2.0) * contour_integral(&nodes, |z| f.derivative(z).powi(2)))
}

/// `F_x + i F_y = −(iρ/2) ∮ |f′|² dz`, the pressure force on any contour.
pub fn pressure_force_2d(f: &ComplexPotential, c: &PlanarContour, rho: f64) -> Result<Complex64> {
    let nodes = contour_nodes(c);
    check_contour(f, &nodes, c)?;
    let i = Complex64::new(0.0, 1.0);
    Ok(-i * (rho / 2.0) * contour_integral(&nodes, |z| Complex64::new(f.derivative(z).norm_sqr(), 0.0)))
}

/// `M = −(ρ/2) Re ∮ (z − z0)(f′)² dz`; the contour must be a streamline.
pub fn blasius_moment_2d(f: &ComplexPotential, c: &PlanarContour, rho: f64, z0: Complex64) -> Result<f64> {
    let nodes = contour_nodes(c);
    check_contour(f, &nodes, c)?;
    require_streamline(f, c)?;
    Ok(-(rho / 2.0) * contour_integral(&nodes, |z| (z - z0) * f.derivative(z).powi(2)).re)
}

/// `w = φ + ψ i`, independent of `z`.
#[derive(Clone, Debug)]
pub struct EmbeddedField {
    f: ComplexPotential,
}

fn c(p: ReducedPoint) -> Complex64 {
    Complex64::new(p.x, p.y)
}

impl QuaternionField for EmbeddedField {
    fn value(&self, x: ReducedPoint) -> Quaternion {
        let v = self.f.value(c(x));
        Quaternion::new(v.re, v.im, 0.0, 0.0)
    }

    fn contains(&self, x: ReducedPoint) -> bool {
        self.f.is_regular_at(c(x))
    }

    fn partials(&self, x: ReducedPoint) -> Option<Partials> {
        let d = self.f.derivative(c(x));
        Some([Quaternion::new(d.re, d.im, 0.0, 0.0), Quaternion::new(-d.im, d.re, 0.0, 0.0), Quaternion::ZERO])
    }

    fn second_partials(&self, x: ReducedPoint) -> Option<Hessian> {
        let d = self.f.second_derivative(c(x));
        let xx = Quaternion::new(d.re, d.im, 0.0, 0.0);
        let xy = Quaternion::new(-d.im, d.re, 0.0, 0.0);
        let z = Quaternion::ZERO;
        Some([[xx, xy, z], [xy, -xx, z], [z, z, z]])
    }
}

/// The planar flow as a `z`-independent monogenic potential. Analyticity
/// is probed at `probes`.
pub fn embed_2d(f: &ComplexPotential, probes: &[Complex64]) -> Result<FlowPotential> {
    f.check_analytic(probes)?;
    let far = f.far_field();
    Ok(FlowPotential::from_field(Arc::new(EmbeddedField { f: f.clone() }), Construction::Embedded2d)
        .with_far_field(ReducedPoint::new(far.re, -far.im, 0.0)))
}

/// Contour values against the finite-cylinder values per unit length.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReductionReport {
    pub half_height: f64,
    pub order: usize,
    /// `(F_x, F_y)` from the contour formula.
    pub force_2d: [f64; 2],
    /// `(F_x, F_y)` of the surface formula divided by `2h`.
    pub force_3d_per_length: [f64; 2],
    /// Axial force component of the surface formula.
    pub force_3d_axial: f64,
    /// Size of the force carried by the two caps.
    pub caps_force: f64,
    pub force_abs_dev: f64,
    pub force_rel_dev: f64,
    pub moment_center: [f64; 2],
    pub moment_2d: f64,
    pub moment_3d_per_length: f64,
    pub moment_abs_dev: f64,
    pub moment_rel_dev: f64,
}

fn relative(dev: f64, reference: f64) -> f64 {
    if reference.abs() > 1e-12 {
        dev / reference.abs()
    } else {
        dev
    }
}

/// Computes the force and moment on `C × [−h, h]` with the surface formulas
/// and compares them, per unit length, with the contour formulas.
pub fn reduce_and_compare(
    f: &ComplexPotential,
    contour: &PlanarContour,
    rho: f64,
    half_height: f64,
    order: usize,
    moment_center: Complex64,
) -> Result<ReductionReport> {
    let f2 = blasius_force_2d(f, contour, rho)?.conj();
    let m2 = blasius_moment_2d(f, contour, rho, moment_center)?;

    let probes: Vec<Complex64> = contour_nodes(contour).iter().step_by(16).map(|n| n.0).collect();
    let potential = embed_2d(f, &probes)?;
    let body = RegularBody::cylinder_with_caps(contour.clone(), half_height, order)?;
    let sc = FlowScenario::new(potential, body, rho)?;
    let f3 = force_blasius(&sc)?.value / (2.0 * half_height);
    let center = ReducedPoint::new(moment_center.re, moment_center.im, 0.0);
    let m3 = moment(&sc, center, MomentMethod::BlasiusSpeed)?.value.z / (2.0 * half_height);

    let parts = integrate_by_chart(sc.body.surface(), |n| {
        let p = crate::field::partials(&*sc.potential.w, n.point)?;
        Ok(n.dsigma() * (d_conj(&p).norm_sqr() * rho / 8.0))
    })?;
    let caps = (parts[1] + parts[2]).norm();

    let force_abs_dev = (f3.x - f2.re).hypot(f3.y - f2.im);
    let moment_abs_dev = (m3 - m2).abs();
    Ok(ReductionReport {
        half_height,
        order,
        force_2d: [f2.re, f2.im],
        force_3d_per_length: [f3.x, f3.y],
        force_3d_axial: f3.z,
        caps_force: caps,
        force_abs_dev,
        force_rel_dev: relative(force_abs_dev, f2.norm()),
        moment_center: [moment_center.re, moment_center.im],
        moment_2d: m2,
        moment_3d_per_length: m3,
        moment_abs_dev,
        moment_rel_dev: relative(moment_abs_dev, m2),
    })
}
