//! Closed parametric surfaces, the surface element `dσ = n dS` and
//! quadrature of quaternion-valued integrands over them.

use std::f64::consts::PI;
use std::fmt;
use std::ops::Add;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::{self, QuaternionField};
use crate::quadrature::{pairwise_sum, par_map, Rule1d};
use crate::quat::{Quaternion, ReducedPoint};

/// Default per-direction quadrature order.
pub const DEFAULT_ORDER: usize = 32;
/// Panels of the composite rule along a cylinder's generating curve.
pub const CURVE_PANELS: usize = 8;

type Map = Arc<dyn Fn(f64, f64) -> ReducedPoint + Send + Sync>;
type Tangents = Arc<dyn Fn(f64, f64) -> (ReducedPoint, ReducedPoint) + Send + Sync>;

/// How a chart direction is discretized for a given order `n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChartRule {
    /// Gauss–Legendre with `n` nodes.
    Gauss,
    /// Trapezoid rule with `2n` nodes, for periodic directions.
    Periodic,
    /// Gauss–Legendre with `n` nodes on each of the given number of panels.
    Composite(usize),
}

impl ChartRule {
    fn rule(self, n: usize) -> Rule1d {
        match self {
            ChartRule::Gauss => Rule1d::GaussLegendre(n),
            ChartRule::Periodic => Rule1d::Periodic(2 * n),
            ChartRule::Composite(panels) => Rule1d::CompositeGaussLegendre { panels, order: n },
        }
    }
}

/// One patch `(u, v) ↦ r(u, v)` of a surface.
#[derive(Clone)]
pub struct Chart {
    map: Map,
    tangents: Tangents,
    u_range: (f64, f64),
    v_range: (f64, f64),
    u_rule: ChartRule,
    v_rule: ChartRule,
    orientation: f64,
}

impl fmt::Debug for Chart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Chart")
            .field("u_range", &self.u_range)
            .field("v_range", &self.v_range)
            .field("orientation", &self.orientation)
            .finish_non_exhaustive()
    }
}

impl Chart {
    /// Chart with tangents by central differences.
    pub fn new(
        map: impl Fn(f64, f64) -> ReducedPoint + Send + Sync + 'static,
        u_range: (f64, f64),
        u_rule: ChartRule,
        v_range: (f64, f64),
        v_rule: ChartRule,
    ) -> Self {
        let map: Map = Arc::new(map);
        let m = map.clone();
        let tangents: Tangents = Arc::new(move |u, v| {
            let hu = field::FD_STEP * u.abs().max(1.0);
            let hv = field::FD_STEP * v.abs().max(1.0);
            ((m(u + hu, v) - m(u - hu, v)) / (2.0 * hu), (m(u, v + hv) - m(u, v - hv)) / (2.0 * hv))
        });
        Self { map, tangents, u_range, v_range, u_rule, v_rule, orientation: 1.0 }
    }

    pub fn with_tangents(
        mut self,
        t: impl Fn(f64, f64) -> (ReducedPoint, ReducedPoint) + Send + Sync + 'static,
    ) -> Self {
        self.tangents = Arc::new(t);
        self
    }

    pub fn point(&self, u: f64, v: f64) -> ReducedPoint {
        (self.map)(u, v)
    }

    /// `+1` if `r_u × r_v` points out of the body, `-1` otherwise.
    pub fn orientation(&self) -> f64 {
        self.orientation
    }

    /// Unit normal (with the chart's orientation) and `|r_u × r_v|`.
    pub fn element(&self, u: f64, v: f64) -> Result<(ReducedPoint, f64)> {
        let (ru, rv) = (self.tangents)(u, v);
        let c = ru.cross(rv);
        let jac = c.norm();
        let scale = ru.norm() * rv.norm();
        if !(jac > 1e-12 * scale) || !jac.is_finite() {
            return Err(Error::DegenerateSurface { u, v });
        }
        Ok((c * (self.orientation / jac), jac))
    }

    fn nodes(&self, order: usize, index: usize) -> Result<Vec<SurfaceNode>> {
        let us = self.u_rule.rule(order).nodes(self.u_range.0, self.u_range.1);
        let vs = self.v_rule.rule(order).nodes(self.v_range.0, self.v_range.1);
        let mut out = Vec::with_capacity(us.len() * vs.len());
        for &(u, wu) in &us {
            for &(v, wv) in &vs {
                let (normal, jac) = self.element(u, v)?;
                out.push(SurfaceNode { point: self.point(u, v), normal, weight: jac * wu * wv, chart: index });
            }
        }
        Ok(out)
    }
}

/// A quadrature node on a surface: `dσ ≈ normal · weight`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SurfaceNode {
    pub point: ReducedPoint,
    pub normal: ReducedPoint,
    pub weight: f64,
    pub chart: usize,
}

impl SurfaceNode {
    /// `n dS` as a reduced quaternion.
    pub fn dsigma(&self) -> Quaternion {
        (self.normal * self.weight).to_quaternion()
    }
}

/// A closed surface made of charts, with nodes fixed for one quadrature order.
#[derive(Clone, Debug)]
pub struct ParametricSurface {
    charts: Arc<[Chart]>,
    order: usize,
    nodes: Arc<[SurfaceNode]>,
}

impl ParametricSurface {
    /// Builds the surface and orients each chart away from `interior`.
    pub fn new(mut charts: Vec<Chart>, order: usize, interior: ReducedPoint) -> Result<Self> {
        if order == 0 {
            return Err(Error::InvalidParameter("quadrature order must be positive".into()));
        }
        if charts.is_empty() {
            return Err(Error::InvalidParameter("surface has no charts".into()));
        }
        for (k, chart) in charts.iter_mut().enumerate() {
            chart.orientation = 1.0;
            let flux: f64 = chart
                .nodes(order, k)?
                .iter()
                .map(|n| (n.point - interior).dot(n.normal) * n.weight)
                .sum();
            if flux.abs() < 1e-14 || !flux.is_finite() {
                return Err(Error::InvalidParameter(format!("chart {k} cannot be oriented from the interior point")));
            }
            chart.orientation = flux.signum();
        }
        Self::from_oriented(charts.into(), order)
    }

    fn from_oriented(charts: Arc<[Chart]>, order: usize) -> Result<Self> {
        let mut nodes = Vec::new();
        for (k, chart) in charts.iter().enumerate() {
            nodes.extend(chart.nodes(order, k)?);
        }
        Ok(Self { charts, order, nodes: nodes.into() })
    }

    /// Same charts, different order.
    pub fn with_order(&self, order: usize) -> Result<Self> {
        if order == 0 {
            return Err(Error::InvalidParameter("quadrature order must be positive".into()));
        }
        Self::from_oriented(self.charts.clone(), order)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn charts(&self) -> &[Chart] {
        &self.charts
    }

    pub fn nodes(&self) -> &[SurfaceNode] {
        &self.nodes
    }

    pub fn area(&self) -> f64 {
        pairwise_sum(&self.nodes.iter().map(|n| n.weight).collect::<Vec<_>>())
    }

    /// Typical distance between neighbouring nodes, `sqrt(area / N)`.
    pub fn node_spacing(&self) -> f64 {
        (self.area() / self.nodes.len() as f64).sqrt()
    }
}

/// `(n, |r_u × r_v|)` at a parameter point of one chart.
pub fn surface_element(s: &ParametricSurface, chart: usize, u: f64, v: f64) -> Result<(Quaternion, f64)> {
    let c = s
        .charts
        .get(chart)
        .ok_or_else(|| Error::InvalidParameter(format!("surface has no chart {chart}")))?;
    let (n, w) = c.element(u, v)?;
    Ok((n.to_quaternion(), w))
}

/// Sums `f` over every node in the fixed chart-major order.
pub fn integrate_nodes<T, F>(s: &ParametricSurface, f: F) -> Result<T>
where
    T: Copy + Default + Add<Output = T> + Send,
    F: Fn(&SurfaceNode) -> Result<T> + Sync + Send,
{
    let values = par_map(&s.nodes, f)?;
    Ok(pairwise_sum(&values))
}

/// One sum per chart, in chart order.
pub fn integrate_by_chart<T, F>(s: &ParametricSurface, f: F) -> Result<Vec<T>>
where
    T: Copy + Default + Add<Output = T> + Send,
    F: Fn(&SurfaceNode) -> Result<T> + Sync + Send,
{
    let values = par_map(&s.nodes, f)?;
    let mut out = vec![Vec::new(); s.charts.len()];
    for (node, v) in s.nodes.iter().zip(values) {
        out[node.chart].push(v);
    }
    Ok(out.iter().map(|v| pairwise_sum(v)).collect())
}

/// `∫ g dσ f`.
pub fn integrate_g_dsigma_f(s: &ParametricSurface, g: &dyn QuaternionField, f: &dyn QuaternionField) -> Result<Quaternion> {
    integrate_nodes(s, |n| Ok(field::evaluate(g, n.point)? * n.dsigma() * field::evaluate(f, n.point)?))
}

/// `∫ h dσ` for a scalar integrand.
pub fn integrate_scalar_dsigma<H>(s: &ParametricSurface, h: H) -> Result<Quaternion>
where
    H: Fn(ReducedPoint) -> Result<f64> + Sync + Send,
{
    integrate_nodes(s, |n| Ok(n.dsigma() * h(n.point)?))
}

/// `∫ h (x − x0) × n dS`.
pub fn integrate_moment_kernel<H>(s: &ParametricSurface, h: H, x0: ReducedPoint) -> Result<ReducedPoint>
where
    H: Fn(ReducedPoint) -> Result<f64> + Sync + Send,
{
    integrate_nodes(s, |n| Ok((n.point - x0).cross(n.normal) * (h(n.point)? * n.weight)))
}

// ---------------------------------------------------------------------------
// Planar curves

type CurveFn = Arc<dyn Fn(f64) -> [f64; 2] + Send + Sync>;

/// A closed, counterclockwise, arc-length parametrized planar curve that is
/// star-shaped about `center`.
#[derive(Clone)]
pub struct ClosedCurve {
    length: f64,
    point: CurveFn,
    tangent: CurveFn,
    center: [f64; 2],
    circle: Option<f64>,
}

impl fmt::Debug for ClosedCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ClosedCurve")
            .field("length", &self.length)
            .field("center", &self.center)
            .field("circle", &self.circle)
            .finish_non_exhaustive()
    }
}

impl ClosedCurve {
    pub fn circle(center: [f64; 2], radius: f64) -> Result<Self> {
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(Error::InvalidParameter(format!("circle radius must be positive, got {radius}")));
        }
        let [cx, cy] = center;
        Ok(Self {
            length: 2.0 * PI * radius,
            point: Arc::new(move |s| {
                let t = s / radius;
                [cx + radius * t.cos(), cy + radius * t.sin()]
            }),
            tangent: Arc::new(move |s| {
                let t = s / radius;
                [-t.sin(), t.cos()]
            }),
            center,
            circle: Some(radius),
        })
    }

    /// General curve; checks closure, unit speed and counterclockwise
    /// orientation about `center` at sample points.
    pub fn new(
        length: f64,
        point: impl Fn(f64) -> [f64; 2] + Send + Sync + 'static,
        tangent: impl Fn(f64) -> [f64; 2] + Send + Sync + 'static,
        center: [f64; 2],
    ) -> Result<Self> {
        if !(length > 0.0) || !length.is_finite() {
            return Err(Error::InvalidParameter(format!("curve length must be positive, got {length}")));
        }
        let curve = Self { length, point: Arc::new(point), tangent: Arc::new(tangent), center, circle: None };
        let (a, b) = (curve.point(0.0), curve.point(length));
        if (a[0] - b[0]).hypot(a[1] - b[1]) > 1e-9 * length {
            return Err(Error::InvalidParameter("curve is not closed".into()));
        }
        for k in 0..256 {
            let s = length * k as f64 / 256.0;
            let t = curve.tangent(s);
            if (t[0].hypot(t[1]) - 1.0).abs() > 1e-6 {
                return Err(Error::InvalidParameter(format!("curve is not arc-length parametrized at s = {s}")));
            }
            let p = curve.point(s);
            let turn = (p[0] - center[0]) * t[1] - (p[1] - center[1]) * t[0];
            if !(turn > 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "curve is not counterclockwise and star-shaped about the center at s = {s}"
                )));
            }
        }
        Ok(curve)
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn point(&self, s: f64) -> [f64; 2] {
        (self.point)(s)
    }

    pub fn tangent(&self, s: f64) -> [f64; 2] {
        (self.tangent)(s)
    }

    pub fn center(&self) -> [f64; 2] {
        self.center
    }

    /// Enclosed area, `½∮(x dy − y dx)`.
    pub fn area(&self) -> f64 {
        if let Some(r) = self.circle {
            return PI * r * r;
        }
        let nodes = ChartRule::Composite(CURVE_PANELS).rule(DEFAULT_ORDER).nodes(0.0, self.length);
        0.5 * nodes
            .iter()
            .map(|&(s, w)| {
                let (p, d) = (self.point(s), self.tangent(s));
                w * (p[0] * d[1] - p[1] * d[0])
            })
            .sum::<f64>()
    }

    /// Radius, if this is a circle.
    pub fn radius(&self) -> Option<f64> {
        self.circle
    }

    fn polygon(&self) -> Vec<[f64; 2]> {
        let n = 4096;
        (0..n).map(|k| self.point(self.length * k as f64 / n as f64)).collect()
    }

    /// Whether `p` lies strictly inside the curve.
    pub fn encloses(&self, p: [f64; 2]) -> bool {
        if let Some(r) = self.circle {
            return (p[0] - self.center[0]).hypot(p[1] - self.center[1]) < r;
        }
        let poly = self.polygon();
        let mut inside = false;
        for k in 0..poly.len() {
            let (a, b) = (poly[k], poly[(k + 1) % poly.len()]);
            if (a[1] > p[1]) != (b[1] > p[1]) {
                let x = a[0] + (p[1] - a[1]) / (b[1] - a[1]) * (b[0] - a[0]);
                if p[0] < x {
                    inside = !inside;
                }
            }
        }
        inside
    }

    /// Distance from `p` to the curve.
    pub fn distance(&self, p: [f64; 2]) -> f64 {
        if let Some(r) = self.circle {
            return ((p[0] - self.center[0]).hypot(p[1] - self.center[1]) - r).abs();
        }
        let poly = self.polygon();
        let mut best = f64::INFINITY;
        for k in 0..poly.len() {
            let (a, b) = (poly[k], poly[(k + 1) % poly.len()]);
            let (dx, dy) = (b[0] - a[0], b[1] - a[1]);
            let t = (((p[0] - a[0]) * dx + (p[1] - a[1]) * dy) / (dx * dx + dy * dy)).clamp(0.0, 1.0);
            best = best.min((a[0] + t * dx - p[0]).hypot(a[1] + t * dy - p[1]));
        }
        best
    }
}

// ---------------------------------------------------------------------------
// Bodies

#[derive(Clone, Debug)]
pub enum BodyShape {
    Sphere { center: ReducedPoint, radius: f64 },
    Box { corner: ReducedPoint, extents: ReducedPoint },
    /// `C × [−h, h]` closed by two caps.
    Cylinder { curve: ClosedCurve, half_height: f64 },
}

/// A bounded body with a closed, outward-oriented boundary surface.
#[derive(Clone, Debug)]
pub struct RegularBody {
    shape: BodyShape,
    surface: ParametricSurface,
}

fn positive(name: &str, x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{name} must be positive, got {x}")))
    }
}

impl RegularBody {
    pub fn sphere(center: ReducedPoint, radius: f64, order: usize) -> Result<Self> {
        positive("sphere radius", radius)?;
        let map = move |s: f64, phi: f64| {
            let rho = (1.0 - s * s).max(0.0).sqrt();
            center + ReducedPoint::new(rho * phi.cos(), rho * phi.sin(), s) * radius
        };
        let tangents = move |s: f64, phi: f64| {
            let rho = (1.0 - s * s).max(0.0).sqrt();
            let (sp, cp) = phi.sin_cos();
            (
                ReducedPoint::new(-s / rho * cp, -s / rho * sp, 1.0) * radius,
                ReducedPoint::new(-rho * sp, rho * cp, 0.0) * radius,
            )
        };
        let chart =
            Chart::new(map, (-1.0, 1.0), ChartRule::Gauss, (0.0, 2.0 * PI), ChartRule::Periodic).with_tangents(tangents);
        let surface = ParametricSurface::new(vec![chart], order, center)?;
        Ok(Self { shape: BodyShape::Sphere { center, radius }, surface })
    }

    pub fn box_(corner: ReducedPoint, extents: ReducedPoint, order: usize) -> Result<Self> {
        positive("box extent x", extents.x)?;
        positive("box extent y", extents.y)?;
        positive("box extent z", extents.z)?;
        let mut charts = Vec::with_capacity(6);
        for axis in 0..3 {
            let (a, b) = ((axis + 1) % 3, (axis + 2) % 3);
            for side in [0.0, 1.0] {
                let fixed = corner.component(axis) + side * extents.component(axis);
                let map = move |u: f64, v: f64| {
                    ReducedPoint::ORIGIN.with_component(axis, fixed).with_component(a, u).with_component(b, v)
                };
                let tangents = move |_: f64, _: f64| {
                    (
                        ReducedPoint::ORIGIN.with_component(a, 1.0),
                        ReducedPoint::ORIGIN.with_component(b, 1.0),
                    )
                };
                let ur = (corner.component(a), corner.component(a) + extents.component(a));
                let vr = (corner.component(b), corner.component(b) + extents.component(b));
                charts.push(Chart::new(map, ur, ChartRule::Gauss, vr, ChartRule::Gauss).with_tangents(tangents));
            }
        }
        let surface = ParametricSurface::new(charts, order, corner + extents * 0.5)?;
        Ok(Self { shape: BodyShape::Box { corner, extents }, surface })
    }

    /// `U_h`: the side `C × [−h, h]` and the caps at `z = ±h`.
    pub fn cylinder_with_caps(curve: ClosedCurve, half_height: f64, order: usize) -> Result<Self> {
        positive("half-height", half_height)?;
        let len = curve.length();
        let h = half_height;
        let [cx, cy] = curve.center();
        let side = {
            let (c1, c2) = (curve.clone(), curve.clone());
            Chart::new(
                move |s, t| {
                    let p = c1.point(s);
                    ReducedPoint::new(p[0], p[1], t)
                },
                (0.0, len),
                ChartRule::Composite(CURVE_PANELS),
                (-h, h),
                ChartRule::Gauss,
            )
            .with_tangents(move |s, _| {
                let d = c2.tangent(s);
                (ReducedPoint::new(d[0], d[1], 0.0), ReducedPoint::new(0.0, 0.0, 1.0))
            })
        };
        let cap = |z: f64| {
            let (c1, c2) = (curve.clone(), curve.clone());
            Chart::new(
                move |s, lam| {
                    let p = c1.point(s);
                    ReducedPoint::new(cx + lam * (p[0] - cx), cy + lam * (p[1] - cy), z)
                },
                (0.0, len),
                ChartRule::Composite(CURVE_PANELS),
                (0.0, 1.0),
                ChartRule::Gauss,
            )
            .with_tangents(move |s, lam| {
                let p = c2.point(s);
                let d = c2.tangent(s);
                (ReducedPoint::new(lam * d[0], lam * d[1], 0.0), ReducedPoint::new(p[0] - cx, p[1] - cy, 0.0))
            })
        };
        let charts = vec![side, cap(h), cap(-h)];
        let surface = ParametricSurface::new(charts, order, ReducedPoint::new(cx, cy, 0.0))?;
        Ok(Self { shape: BodyShape::Cylinder { curve, half_height }, surface })
    }

    pub fn shape(&self) -> &BodyShape {
        &self.shape
    }

    pub fn surface(&self) -> &ParametricSurface {
        &self.surface
    }

    pub fn order(&self) -> usize {
        self.surface.order()
    }

    pub fn with_order(&self, order: usize) -> Result<Self> {
        Ok(Self { shape: self.shape.clone(), surface: self.surface.with_order(order)? })
    }

    pub fn interior_point(&self) -> ReducedPoint {
        match &self.shape {
            BodyShape::Sphere { center, .. } => *center,
            BodyShape::Box { corner, extents } => *corner + *extents * 0.5,
            BodyShape::Cylinder { curve, .. } => {
                let [x, y] = curve.center();
                ReducedPoint::new(x, y, 0.0)
            }
        }
    }

    /// Strict interior test.
    pub fn contains(&self, x: ReducedPoint) -> bool {
        match &self.shape {
            BodyShape::Sphere { center, radius } => (x - *center).norm() < *radius,
            BodyShape::Box { corner, extents } => (0..3).all(|a| {
                let t = x.component(a) - corner.component(a);
                t > 0.0 && t < extents.component(a)
            }),
            BodyShape::Cylinder { curve, half_height } => x.z.abs() < *half_height && curve.encloses([x.x, x.y]),
        }
    }

    /// Euclidean distance from `x` to the boundary surface.
    pub fn distance_to_boundary(&self, x: ReducedPoint) -> f64 {
        match &self.shape {
            BodyShape::Sphere { center, radius } => ((x - *center).norm() - radius).abs(),
            BodyShape::Box { corner, extents } => {
                let lo = x - *corner;
                let hi = *corner + *extents - x;
                if self.contains(x) {
                    (0..3).map(|a| lo.component(a).min(hi.component(a))).fold(f64::INFINITY, f64::min)
                } else {
                    let d = ReducedPoint::from_array(std::array::from_fn(|a| {
                        (-lo.component(a)).max(0.0).max((-hi.component(a)).max(0.0))
                    }));
                    d.norm()
                }
            }
            BodyShape::Cylinder { curve, half_height } => {
                let d2 = curve.distance([x.x, x.y]);
                let dz = x.z.abs() - half_height;
                let inside_plan = curve.encloses([x.x, x.y]);
                match (inside_plan, dz <= 0.0) {
                    (true, true) => d2.min(-dz),
                    (true, false) => dz,
                    (false, true) => d2,
                    (false, false) => d2.hypot(dz),
                }
            }
        }
    }

    pub fn volume(&self) -> f64 {
        match &self.shape {
            BodyShape::Sphere { radius, .. } => 4.0 / 3.0 * PI * radius.powi(3),
            BodyShape::Box { extents, .. } => extents.x * extents.y * extents.z,
            BodyShape::Cylinder { curve, half_height } => 2.0 * half_height * curve.area(),
        }
    }

    /// Volume quadrature nodes and weights of the given order.
    pub fn volume_rule(&self, order: usize) -> Result<Vec<(ReducedPoint, f64)>> {
        if order == 0 {
            return Err(Error::InvalidParameter("quadrature order must be positive".into()));
        }
        let mut out = Vec::new();
        match &self.shape {
            BodyShape::Box { corner, extents } => {
                let rules: [Vec<(f64, f64)>; 3] = std::array::from_fn(|a| {
                    Rule1d::GaussLegendre(order).nodes(corner.component(a), corner.component(a) + extents.component(a))
                });
                for &(x, wx) in &rules[0] {
                    for &(y, wy) in &rules[1] {
                        for &(z, wz) in &rules[2] {
                            out.push((ReducedPoint::new(x, y, z), wx * wy * wz));
                        }
                    }
                }
            }
            BodyShape::Sphere { center, radius } => {
                let radial = Rule1d::GaussLegendre(order).nodes(0.0, *radius);
                let polar = Rule1d::GaussLegendre(order).nodes(-1.0, 1.0);
                let azimuth = Rule1d::Periodic(2 * order).nodes(0.0, 2.0 * PI);
                for &(r, wr) in &radial {
                    for &(s, ws) in &polar {
                        let rho = (1.0 - s * s).sqrt();
                        for &(phi, wp) in &azimuth {
                            let p = ReducedPoint::new(rho * phi.cos(), rho * phi.sin(), s) * r;
                            out.push((*center + p, r * r * wr * ws * wp));
                        }
                    }
                }
            }
            BodyShape::Cylinder { curve, half_height } => {
                let [cx, cy] = curve.center();
                let ss = ChartRule::Composite(CURVE_PANELS).rule(order).nodes(0.0, curve.length());
                let ls = Rule1d::GaussLegendre(order).nodes(0.0, 1.0);
                let ts = Rule1d::GaussLegendre(order).nodes(-half_height, *half_height);
                for &(s, ws) in &ss {
                    let p = curve.point(s);
                    let d = curve.tangent(s);
                    let (rx, ry) = (p[0] - cx, p[1] - cy);
                    let jac = (rx * d[1] - ry * d[0]).abs();
                    for &(lam, wl) in &ls {
                        for &(t, wt) in &ts {
                            out.push((ReducedPoint::new(cx + lam * rx, cy + lam * ry, t), lam * jac * ws * wl * wt));
                        }
                    }
                }
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{Constant, QuaternionPolynomial};

    fn p(x: f64, y: f64, z: f64) -> ReducedPoint {
        ReducedPoint::new(x, y, z)
    }

    fn unit_cube() -> RegularBody {
        RegularBody::box_(ReducedPoint::ORIGIN, p(1.0, 1.0, 1.0), 8).unwrap()
    }

    fn circle_cylinder(order: usize) -> RegularBody {
        RegularBody::cylinder_with_caps(ClosedCurve::circle([0.3, -0.2], 1.5).unwrap(), 0.7, order).unwrap()
    }

    #[test]
    fn sphere_element_and_area() {
        let b = RegularBody::sphere(ReducedPoint::ORIGIN, 1.0, 16).unwrap();
        let (n, w) = surface_element(b.surface(), 0, 0.0, 0.0).unwrap();
        assert!((n - Quaternion::ONE).norm() < 1e-14);
        assert!((w - 1.0).abs() < 1e-14);
        let r = 2.5;
        let b = RegularBody::sphere(p(1.0, 2.0, 3.0), r, 16).unwrap();
        assert!((b.surface().area() - 4.0 * PI * r * r).abs() < 1e-8);
    }

    #[test]
    fn cube_face_and_cylinder_side_normals() {
        let cube = unit_cube();
        // chart 1 is the face x = 1
        let (n, _) = surface_element(cube.surface(), 1, 0.3, 0.6).unwrap();
        assert_eq!(n, Quaternion::ONE);
        let cyl = RegularBody::cylinder_with_caps(ClosedCurve::circle([0.0, 0.0], 1.0).unwrap(), 1.0, 8).unwrap();
        let (n, _) = surface_element(cyl.surface(), 0, 0.0, 0.2).unwrap();
        assert!((n - Quaternion::ONE).norm() < 1e-15);
        let theta: f64 = 0.9;
        let (n, _) = surface_element(cyl.surface(), 0, theta, 0.2).unwrap();
        assert!((n - Quaternion::new(theta.cos(), theta.sin(), 0.0, 0.0)).norm() < 1e-15);
        let (n, _) = surface_element(cyl.surface(), 1, 0.4, 0.5).unwrap();
        assert!((n - Quaternion::J).norm() < 1e-15);
        let (n, _) = surface_element(cyl.surface(), 2, 0.4, 0.5).unwrap();
        assert!((n + Quaternion::J).norm() < 1e-15);
    }

    #[test]
    fn degenerate_points_are_rejected() {
        let cyl = circle_cylinder(4);
        assert!(matches!(surface_element(cyl.surface(), 1, 0.3, 0.0), Err(Error::DegenerateSurface { .. })));
        let b = RegularBody::sphere(ReducedPoint::ORIGIN, 1.0, 4).unwrap();
        assert!(surface_element(b.surface(), 0, 1.0, 0.0).is_err());
    }

    #[test]
    fn closed_surfaces_have_null_integral() {
        let bodies = [
            RegularBody::sphere(p(0.1, 0.2, 0.3), 0.8, 16).unwrap(),
            unit_cube(),
            circle_cylinder(16),
        ];
        let one = Constant(Quaternion::ONE);
        for b in &bodies {
            let v = integrate_g_dsigma_f(b.surface(), &one, &one).unwrap();
            assert!(v.norm() < 1e-10, "{v}");
        }
    }

    #[test]
    fn cube_oracles() {
        let cube = unit_cube();
        let one = Constant(Quaternion::ONE);
        let pos = QuaternionPolynomial::position();
        let v = integrate_g_dsigma_f(cube.surface(), &one, &pos).unwrap();
        assert!((v + Quaternion::ONE).norm() < 1e-13, "{v}");
        let v = integrate_scalar_dsigma(cube.surface(), |x| Ok(x.x)).unwrap();
        assert!((v - Quaternion::ONE).norm() < 1e-13, "{v}");
        let v = integrate_scalar_dsigma(cube.surface(), |_| Ok(0.0)).unwrap();
        assert_eq!(v, Quaternion::ZERO);
    }

    #[test]
    fn moment_kernel_examples() {
        let s = RegularBody::sphere(p(0.5, 0.0, 0.0), 1.0, 16).unwrap();
        let m = integrate_moment_kernel(s.surface(), |_| Ok(1.0), p(0.5, 0.0, 0.0)).unwrap();
        assert!(m.norm() < 1e-14);
        let cube = unit_cube();
        let m = integrate_moment_kernel(cube.surface(), |_| Ok(1.0), p(3.0, -1.0, 2.0)).unwrap();
        assert!(m.norm() < 1e-13);
        // shift law for a non-constant integrand
        let h = |x: ReducedPoint| Ok(x.x * x.x + 2.0 * x.y - x.z);
        let x0 = p(0.2, 0.1, -0.3);
        let d = p(1.0, -2.0, 0.5);
        let f = ReducedPoint::truncate(integrate_scalar_dsigma(cube.surface(), h).unwrap());
        let m0 = integrate_moment_kernel(cube.surface(), h, x0).unwrap();
        let m1 = integrate_moment_kernel(cube.surface(), h, x0 + d).unwrap();
        assert!((m1 - (m0 - d.cross(f))).norm() < 1e-13);
    }

    #[test]
    fn caps_cancel_for_z_invariant_integrands() {
        let cyl = circle_cylinder(16);
        let parts = integrate_by_chart(cyl.surface(), |n| Ok(n.dsigma() * (n.point.x * n.point.y + 1.0))).unwrap();
        assert!((parts[1] + parts[2]).norm() < 1e-12);
    }

    #[test]
    fn outward_orientation() {
        for b in [RegularBody::sphere(p(0.0, 1.0, 0.0), 2.0, 8).unwrap(), unit_cube(), circle_cylinder(8)] {
            let c = b.interior_point();
            for n in b.surface().nodes() {
                assert!((n.point - c).dot(n.normal) > 0.0);
            }
        }
    }

    #[test]
    fn order_doubling_converges() {
        let b = circle_cylinder(16);
        let f = |n: &SurfaceNode| Ok(n.dsigma() * (n.point.x.exp() * n.point.z.cos()));
        let a = integrate_nodes(b.surface(), f).unwrap();
        let c = integrate_nodes(b.with_order(32).unwrap().surface(), f).unwrap();
        assert!((a - c).norm() < 1e-9);
    }

    #[test]
    fn volume_rules_integrate_volume() {
        let s = RegularBody::sphere(p(1.0, 0.0, 0.0), 2.0, 8).unwrap();
        let v: f64 = s.volume_rule(8).unwrap().iter().map(|r| r.1).sum();
        assert!((v - s.volume()).abs() < 1e-10);
        let c = circle_cylinder(8);
        let v: f64 = c.volume_rule(8).unwrap().iter().map(|r| r.1).sum();
        assert!((v - PI * 1.5 * 1.5 * 1.4).abs() < 1e-10);
        let cube = unit_cube();
        let v: f64 = cube.volume_rule(3).unwrap().iter().map(|r| r.1).sum();
        assert!((v - 1.0).abs() < 1e-14);
    }

    #[test]
    fn distances() {
        let cube = unit_cube();
        assert!((cube.distance_to_boundary(p(0.5, 0.5, 0.5)) - 0.5).abs() < 1e-15);
        assert!((cube.distance_to_boundary(p(2.0, 0.5, 0.5)) - 1.0).abs() < 1e-15);
        let cyl = RegularBody::cylinder_with_caps(ClosedCurve::circle([0.0, 0.0], 1.0).unwrap(), 1.0, 4).unwrap();
        assert!((cyl.distance_to_boundary(p(0.0, 0.0, 0.9)) - 0.1).abs() < 1e-12);
        assert!((cyl.distance_to_boundary(p(2.0, 0.0, 0.0)) - 1.0).abs() < 1e-12);
        assert!(cyl.contains(p(0.5, 0.5, 0.5)) && !cyl.contains(p(0.9, 0.9, 0.0)));
    }

    #[test]
    fn general_curve_validation() {
        let r = 2.0;
        let good = ClosedCurve::new(
            2.0 * PI * r,
            move |s| [r * (s / r).cos(), r * (s / r).sin()],
            move |s| [-(s / r).sin(), (s / r).cos()],
            [0.0, 0.0],
        )
        .unwrap();
        assert!((good.distance([3.0, 0.0]) - 1.0).abs() < 1e-3);
        assert!(good.encloses([0.5, 0.5]));
        let clockwise = ClosedCurve::new(
            2.0 * PI * r,
            move |s| [r * (s / r).cos(), -r * (s / r).sin()],
            move |s| [-(s / r).sin(), -(s / r).cos()],
            [0.0, 0.0],
        );
        assert!(clockwise.is_err());
        let not_unit = ClosedCurve::new(2.0 * PI, |s| [2.0 * s.cos(), 2.0 * s.sin()], |s| [-2.0 * s.sin(), 2.0 * s.cos()], [0.0, 0.0]);
        assert!(not_unit.is_err());
        assert!(ClosedCurve::circle([0.0, 0.0], -1.0).is_err());
        assert!(RegularBody::sphere(ReducedPoint::ORIGIN, 0.0, 8).is_err());
    }
}
