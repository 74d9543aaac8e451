//! Pressure forces and moments on a body immersed in a steady potential flow,
//! computed directly from the pressure and from the monogenic flow potential.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{self, partials_unchecked, JetKind, Partials, QuaternionField, ScalarField};
use crate::potential::FlowPotential;
use crate::quat::{Quaternion, ReducedPoint};
use crate::surface::{integrate_moment_kernel, integrate_nodes, integrate_scalar_dsigma, RegularBody, SurfaceNode};

/// Default agreement tolerance between methods.
pub const DEFAULT_TOLERANCE: f64 = 1e-6;
/// Allowed `|v·n| / (1 + |v|)` on a stream surface.
pub const STREAM_SURFACE_TOL: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ForceMethod {
    PressureDirect,
    BlasiusSpeed,
    ComponentSc,
    MonogenicForm,
}

impl ForceMethod {
    pub const ALL: [ForceMethod; 4] =
        [ForceMethod::PressureDirect, ForceMethod::BlasiusSpeed, ForceMethod::ComponentSc, ForceMethod::MonogenicForm];

    pub fn name(self) -> &'static str {
        match self {
            ForceMethod::PressureDirect => "pressure-direct",
            ForceMethod::BlasiusSpeed => "blasius-speed",
            ForceMethod::ComponentSc => "component-sc",
            ForceMethod::MonogenicForm => "monogenic-form",
        }
    }
}

impl fmt::Display for ForceMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ForceMethod {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        ForceMethod::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown force method `{s}`")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MomentMethod {
    PressureDirect,
    BlasiusSpeed,
}

impl MomentMethod {
    pub const ALL: [MomentMethod; 2] = [MomentMethod::PressureDirect, MomentMethod::BlasiusSpeed];

    pub fn name(self) -> &'static str {
        match self {
            MomentMethod::PressureDirect => "pressure-direct",
            MomentMethod::BlasiusSpeed => "blasius-speed",
        }
    }
}

impl fmt::Display for MomentMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ForceResult {
    pub method: ForceMethod,
    pub value: ReducedPoint,
    pub order: usize,
    pub nodes: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MomentResult {
    pub method: MomentMethod,
    pub reference: ReducedPoint,
    pub value: ReducedPoint,
    pub order: usize,
    pub nodes: usize,
}

/// A body in a flow: density, far-field pressure, potential and surface.
#[derive(Clone, Debug)]
pub struct FlowScenario {
    pub name: String,
    pub rho: f64,
    pub p_inf: f64,
    pub potential: FlowPotential,
    pub body: RegularBody,
    pub tolerance: f64,
}

impl FlowScenario {
    pub fn new(potential: FlowPotential, body: RegularBody, rho: f64) -> Result<Self> {
        if !(rho > 0.0) || !rho.is_finite() {
            return Err(Error::InvalidParameter(format!("density must be positive, got {rho}")));
        }
        if let Some(n) = body.surface().nodes().iter().find(|n| !potential.w.contains(n.point)) {
            return Err(Error::OutsideDomain(n.point));
        }
        Ok(Self { name: "scenario".into(), rho, p_inf: 0.0, potential, body, tolerance: DEFAULT_TOLERANCE })
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn with_p_inf(mut self, p_inf: f64) -> Self {
        self.p_inf = p_inf;
        self
    }

    pub fn with_tolerance(mut self, tol: f64) -> Self {
        self.tolerance = tol;
        self
    }

    /// Same scenario with the body re-discretized.
    pub fn with_order(&self, order: usize) -> Result<Self> {
        Ok(Self { body: self.body.with_order(order)?, ..self.clone() })
    }

    pub fn order(&self) -> usize {
        self.body.order()
    }

    /// Bernoulli constant `p∞ + (ρ/2)|v∞|²`.
    pub fn bernoulli_constant(&self) -> f64 {
        let v = self.potential.far_field;
        self.p_inf + 0.5 * self.rho * v.dot(v)
    }

    fn partials_at(&self, x: ReducedPoint) -> Result<Partials> {
        field::partials(&*self.potential.w, x)
    }

    fn require_monogenic(&self) -> Result<()> {
        let nodes = self.body.surface().nodes();
        let stride = (nodes.len() / 97).max(1);
        let probes: Vec<ReducedPoint> = nodes.iter().step_by(stride).map(|n| n.point).collect();
        let tol = JetKind::of(&*self.potential.w, probes[0]).monogenic_tolerance();
        let report = field::is_monogenic(&*self.potential.w, &probes, tol)?;
        if report.monogenic {
            Ok(())
        } else {
            Err(Error::NotMonogenic {
                what: "flow potential",
                point: report.worst_point,
                residual: report.max_residual,
            })
        }
    }
}

/// `D w̄ = Σ e_j conj(∂_j w)`.
pub fn d_conj(p: &Partials) -> Quaternion {
    p[0].conj() + Quaternion::I * p[1].conj() + Quaternion::J * p[2].conj()
}

/// `w D̄ = Σ ∂_j w conj(e_j)`.
pub fn w_dbar(p: &Partials) -> Quaternion {
    field::dbar_right(p)
}

/// `p = C − (ρ/2)|v|²` with `v = ½ D w̄`.
#[derive(Clone)]
pub struct PressureField {
    w: std::sync::Arc<dyn QuaternionField>,
    rho: f64,
    constant: f64,
}

impl PressureField {
    pub fn from_speed_sqr(&self, v2: f64) -> f64 {
        self.constant - 0.5 * self.rho * v2
    }
}

impl ScalarField for PressureField {
    fn value(&self, x: ReducedPoint) -> f64 {
        let v = d_conj(&partials_unchecked(&*self.w, x)) * 0.5;
        self.from_speed_sqr(v.norm_sqr())
    }
    fn contains(&self, x: ReducedPoint) -> bool {
        self.w.contains(x)
    }
}

pub fn pressure_field(sc: &FlowScenario) -> PressureField {
    PressureField { w: sc.potential.w.clone(), rho: sc.rho, constant: sc.bernoulli_constant() }
}

fn result(sc: &FlowScenario, method: ForceMethod, value: ReducedPoint) -> ForceResult {
    ForceResult { method, value, order: sc.order(), nodes: sc.body.surface().nodes().len() }
}

/// `F = −∫ p dσ`.
pub fn force_pressure_direct(sc: &FlowScenario) -> Result<ForceResult> {
    let p = pressure_field(sc);
    let f = integrate_scalar_dsigma(sc.body.surface(), |x| {
        let v = d_conj(&sc.partials_at(x)?) * 0.5;
        Ok(p.from_speed_sqr(v.norm_sqr()))
    })?;
    Ok(result(sc, ForceMethod::PressureDirect, -ReducedPoint::truncate(f)))
}

/// `F = (ρ/8) ∫ |D w̄|² dσ`.
pub fn force_blasius(sc: &FlowScenario) -> Result<ForceResult> {
    sc.require_monogenic()?;
    let f = integrate_scalar_dsigma(sc.body.surface(), |x| Ok(d_conj(&sc.partials_at(x)?).norm_sqr()))?;
    Ok(result(sc, ForceMethod::BlasiusSpeed, ReducedPoint::truncate(f) * (sc.rho / 8.0)))
}

/// `F_k = (ρ/8) Sc ∫ (wD̄)(Dw̄) conj(dσ) e_k`, for `e_k ∈ {1, i, j}`.
pub fn force_components_sc(sc: &FlowScenario) -> Result<ForceResult> {
    sc.require_monogenic()?;
    let f = integrate_nodes(sc.body.surface(), |n: &SurfaceNode| {
        let p = sc.partials_at(n.point)?;
        let prod = w_dbar(&p) * d_conj(&p) * n.dsigma().conj();
        let e = [Quaternion::ONE, Quaternion::I, Quaternion::J];
        Ok(ReducedPoint::from_array(std::array::from_fn(|k| (prod * e[k]).sc())))
    })?;
    Ok(result(sc, ForceMethod::ComponentSc, f * (sc.rho / 8.0)))
}

/// `−(ρ/8) [Sc ∫ (wD̄) dσ (wD̄) e_k]_k`, with no hypothesis checks.
pub fn monogenic_form_integral(sc: &FlowScenario) -> Result<ReducedPoint> {
    let f = integrate_nodes(sc.body.surface(), |n: &SurfaceNode| {
        let a = w_dbar(&sc.partials_at(n.point)?);
        let prod = a * n.dsigma() * a;
        let e = [Quaternion::ONE, Quaternion::I, Quaternion::J];
        Ok(ReducedPoint::from_array(std::array::from_fn(|k| (prod * e[k]).sc())))
    })?;
    Ok(f * (-sc.rho / 8.0))
}

/// Worst residuals of the hypotheses of the monogenic force form.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MonogenicFormGate {
    /// `max(|∂z ψ1|, |∂y ψ2|, |∂x ψ3|)` over the probes.
    pub shape: f64,
    /// `max |v·n| / (1 + |v|)` over the surface nodes.
    pub tangency: f64,
}

impl MonogenicFormGate {
    pub fn passes(&self, tol: f64) -> bool {
        self.shape <= tol && self.tangency <= tol
    }
}

pub fn monogenic_form_gate(sc: &FlowScenario) -> Result<MonogenicFormGate> {
    let nodes = sc.body.surface().nodes();
    let per_node = crate::quadrature::par_map(nodes, |n| {
        let p = sc.partials_at(n.point)?;
        let shape = p[2].q1.abs().max(p[1].q2.abs()).max(p[0].q3.abs());
        let v = ReducedPoint::truncate(d_conj(&p) * 0.5);
        let tangency = v.dot(n.normal).abs() / (1.0 + v.norm());
        Ok((shape, tangency))
    })?;
    Ok(per_node.into_iter().fold(MonogenicFormGate { shape: 0.0, tangency: 0.0 }, |g, (s, t)| MonogenicFormGate {
        shape: g.shape.max(s),
        tangency: g.tangency.max(t),
    }))
}

/// The monogenic force form; refuses potentials whose stream functions do
/// not have the axis-plane shape or bodies that are not stream surfaces.
pub fn force_monogenic_form(sc: &FlowScenario) -> Result<ForceResult> {
    sc.require_monogenic()?;
    let gate = monogenic_form_gate(sc)?;
    if gate.shape > STREAM_SURFACE_TOL {
        return Err(Error::HypothesisViolated(format!(
            "stream functions depend on the excluded coordinate (max derivative {:.3e})",
            gate.shape
        )));
    }
    if gate.tangency > STREAM_SURFACE_TOL {
        return Err(Error::HypothesisViolated(format!(
            "body surface is not a stream surface (max |v·n|/(1+|v|) = {:.3e})",
            gate.tangency
        )));
    }
    Ok(result(sc, ForceMethod::MonogenicForm, monogenic_form_integral(sc)?))
}

pub fn force(sc: &FlowScenario, method: ForceMethod) -> Result<ForceResult> {
    match method {
        ForceMethod::PressureDirect => force_pressure_direct(sc),
        ForceMethod::BlasiusSpeed => force_blasius(sc),
        ForceMethod::ComponentSc => force_components_sc(sc),
        ForceMethod::MonogenicForm => force_monogenic_form(sc),
    }
}

/// Moment about `x0`, either `(ρ/8)∫|Dw̄|² r × n dS` or `−∫ p r × n dS`.
pub fn moment(sc: &FlowScenario, x0: ReducedPoint, method: MomentMethod) -> Result<MomentResult> {
    let value = match method {
        MomentMethod::BlasiusSpeed => {
            sc.require_monogenic()?;
            integrate_moment_kernel(sc.body.surface(), |x| Ok(d_conj(&sc.partials_at(x)?).norm_sqr()), x0)?
                * (sc.rho / 8.0)
        }
        MomentMethod::PressureDirect => {
            let p = pressure_field(sc);
            -integrate_moment_kernel(
                sc.body.surface(),
                |x| {
                    let v = d_conj(&sc.partials_at(x)?) * 0.5;
                    Ok(p.from_speed_sqr(v.norm_sqr()))
                },
                x0,
            )?
        }
    };
    Ok(MomentResult { method, reference: x0, value, order: sc.order(), nodes: sc.body.surface().nodes().len() })
}

/// `M_{x1} = M_{x0} + (x0 − x1) × F`.
pub fn moment_reference_shift(m: &MomentResult, force: ReducedPoint, x1: ReducedPoint) -> MomentResult {
    MomentResult { reference: x1, value: m.value + (m.reference - x1).cross(force), ..*m }
}
