//! Named test flows addressable from configuration files.

use std::f64::consts::PI;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{
    FnScalar, InverseDistance, Partials, Polynomial, QuaternionField, QuaternionPolynomial, ScalarField, ScaledField,
    SumField, DEFAULT_EXCLUSION_RADIUS,
};
use crate::planar::{embed_2d, ComplexPotential};
use crate::potential::{monogenic_completion, Construction, FlowPotential, COMPLETION_ORDER};
use crate::quat::{Quaternion, ReducedPoint};
use crate::theorems::CauchyKernel;

/// A planar complex potential.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum PlanarSpec {
    Uniform {
        speed: f64,
    },
    Cylinder {
        speed: f64,
        radius: f64,
    },
    CylinderVortex {
        speed: f64,
        radius: f64,
        circulation: f64,
    },
}

impl PlanarSpec {
    pub fn build(&self) -> Result<ComplexPotential> {
        match *self {
            PlanarSpec::Uniform { speed } => Ok(ComplexPotential::uniform(speed)),
            PlanarSpec::Cylinder { speed, radius } => ComplexPotential::cylinder(speed, radius),
            PlanarSpec::CylinderVortex { speed, radius, circulation } => {
                ComplexPotential::cylinder_vortex(speed, radius, circulation)
            }
        }
    }
}

/// A flow potential by kind and parameters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum PotentialSpec {
    /// `φ = v·x`.
    Uniform { velocity: [f64; 3] },
    /// `φ = −m / (4π|x − p|)`.
    Source { strength: f64, position: [f64; 3] },
    /// `w = μ E(x − p)`, an x-directed dipole.
    Dipole { strength: f64, position: [f64; 3] },
    /// Uniform flow `U` past a sphere of radius `a`.
    Sphere { speed: f64, radius: f64, center: [f64; 3] },
    /// `φ = s (x² − y²) / 2`.
    Strain { rate: f64 },
    /// A harmonic polynomial `Σ c x^a y^b z^c`, rows `[c, a, b, c]`.
    Polynomial { terms: Vec<[f64; 4]> },
    /// `x + y i + z j`, which is not monogenic.
    Position,
    /// A planar flow, independent of `z`.
    Planar { flow: PlanarSpec },
}

impl Default for PotentialSpec {
    fn default() -> Self {
        PotentialSpec::Sphere { speed: 1.0, radius: 1.0, center: [0.0; 3] }
    }
}

/// Catalog names with default parameters.
pub fn catalog() -> Vec<(&'static str, PotentialSpec)> {
    vec![
        ("uniform", PotentialSpec::Uniform { velocity: [1.0, 0.0, 0.0] }),
        ("source", PotentialSpec::Source { strength: 1.0, position: [0.0; 3] }),
        ("dipole", PotentialSpec::Dipole { strength: 1.0, position: [0.0; 3] }),
        ("sphere", PotentialSpec::default()),
        ("strain", PotentialSpec::Strain { rate: 1.0 }),
        ("position", PotentialSpec::Position),
        ("planar-uniform", PotentialSpec::Planar { flow: PlanarSpec::Uniform { speed: 1.0 } }),
        ("planar-cylinder", PotentialSpec::Planar { flow: PlanarSpec::Cylinder { speed: 1.0, radius: 1.0 } }),
        (
            "planar-cylinder-vortex",
            PotentialSpec::Planar { flow: PlanarSpec::CylinderVortex { speed: 1.0, radius: 1.0, circulation: 2.0 * PI } },
        ),
    ]
}

pub fn by_name(name: &str) -> Result<PotentialSpec> {
    catalog()
        .into_iter()
        .find(|(n, _)| *n == name)
        .map(|(_, s)| s)
        .ok_or_else(|| Error::UnknownCatalogName(name.to_string()))
}

/// Deterministic, well-spread points in a ball (Halton sequence in the
/// bounding cube, points outside the ball skipped).
pub fn sample_ball(center: ReducedPoint, radius: f64, n: usize) -> Vec<ReducedPoint> {
    fn halton(mut i: usize, base: usize) -> f64 {
        let (mut f, mut r) = (1.0, 0.0);
        while i > 0 {
            f /= base as f64;
            r += f * (i % base) as f64;
            i /= base;
        }
        r
    }
    let mut out = Vec::with_capacity(n);
    let mut i = 1;
    while out.len() < n {
        let p = ReducedPoint::new(halton(i, 2), halton(i, 3), halton(i, 5)) * 2.0 - ReducedPoint::new(1.0, 1.0, 1.0);
        if p.norm() < 1.0 {
            out.push(center + p * radius);
        }
        i += 1;
    }
    out
}

fn uniform_field(v: [f64; 3], origin: ReducedPoint) -> QuaternionPolynomial {
    let [a, b, c] = v;
    let (x0, y0, z0) = (origin.x, origin.y, origin.z);
    // (x − x0) etc. expanded
    let lin = |cx: f64, cy: f64, cz: f64| {
        Polynomial::new([(cx, [1, 0, 0]), (cy, [0, 1, 0]), (cz, [0, 0, 1]), (-(cx * x0 + cy * y0 + cz * z0), [0, 0, 0])])
    };
    QuaternionPolynomial::new([
        lin(a, b, c),
        lin(-b / 2.0, a / 2.0, 0.0),
        lin(-c / 2.0, 0.0, a / 2.0),
        lin(0.0, c / 2.0, -b / 2.0),
    ])
}

/// `w = −(m/4πr) [1 − (y i + z j)/(r + x)]` relative to the source position;
/// its domain excludes the half-line `y = z = 0, x ≤ 0` behind the source.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SourceField {
    pub strength: f64,
    pub position: ReducedPoint,
}

impl QuaternionField for SourceField {
    fn value(&self, x: ReducedPoint) -> Quaternion {
        let d = x - self.position;
        let r = d.norm();
        let s = r + d.x;
        let k = self.strength / (4.0 * PI);
        Quaternion::new(-k / r, k * d.y / (r * s), k * d.z / (r * s), 0.0)
    }

    fn contains(&self, x: ReducedPoint) -> bool {
        let d = x - self.position;
        d.norm() > DEFAULT_EXCLUSION_RADIUS && (d.x > 0.0 || d.y.hypot(d.z) > DEFAULT_EXCLUSION_RADIUS)
    }

    fn partials(&self, x: ReducedPoint) -> Option<Partials> {
        let d = x - self.position;
        let r = d.norm();
        let s = r + d.x;
        let k = self.strength / (4.0 * PI);
        let (r3, rs, q) = (r * r * r, r * s, (r + s) / (r * r * r * s * s));
        let g = [-d.y / r3, 1.0 / rs - d.y * d.y * q, -d.y * d.z * q];
        let h = [-d.z / r3, -d.y * d.z * q, 1.0 / rs - d.z * d.z * q];
        Some(std::array::from_fn(|a| Quaternion::new(k * d.component(a) / r3, k * g[a], k * h[a], 0.0)))
    }
}

impl PotentialSpec {
    pub fn build(&self) -> Result<FlowPotential> {
        let probes = sample_ball(ReducedPoint::ORIGIN, 1.0, 16);
        match self {
            PotentialSpec::Uniform { velocity } => {
                let w = uniform_field(*velocity, ReducedPoint::ORIGIN);
                Ok(FlowPotential::from_field(Arc::new(w), Construction::Explicit)
                    .with_far_field(ReducedPoint::from_array(*velocity)))
            }
            PotentialSpec::Source { strength, position } => {
                let p = ReducedPoint::from_array(*position);
                let w = SourceField { strength: *strength, position: p };
                let phi: Arc<dyn ScalarField> = {
                    let inv = InverseDistance::new(p);
                    let k = -strength / (4.0 * PI);
                    Arc::new(
                        FnScalar::new(move |x| k * inv.value(x))
                            .with_gradient(move |x| inv.gradient(x).unwrap_or_default() * k)
                            .with_domain(move |x| (x - p).norm() > DEFAULT_EXCLUSION_RADIUS),
                    )
                };
                Ok(FlowPotential::new(Arc::new(w), phi, Construction::GradientMethod))
            }
            PotentialSpec::Dipole { strength, position } => {
                let w = ScaledField(*strength, CauchyKernel::new(ReducedPoint::from_array(*position)));
                Ok(FlowPotential::from_field(Arc::new(w), Construction::Explicit))
            }
            PotentialSpec::Sphere { speed, radius, center } => {
                if !(*radius > 0.0) {
                    return Err(Error::InvalidParameter(format!("sphere radius must be positive, got {radius}")));
                }
                let c = ReducedPoint::from_array(*center);
                let uniform = uniform_field([*speed, 0.0, 0.0], c);
                let dipole = ScaledField(2.0 * PI * speed * radius.powi(3), CauchyKernel::new(c));
                Ok(FlowPotential::from_field(Arc::new(SumField(uniform, dipole)), Construction::Explicit)
                    .with_far_field(ReducedPoint::new(*speed, 0.0, 0.0)))
            }
            PotentialSpec::Strain { rate } => {
                let u = Polynomial::new([(rate / 2.0, [2, 0, 0]), (-rate / 2.0, [0, 2, 0])]);
                monogenic_completion(Arc::new(u), COMPLETION_ORDER, &probes)
            }
            PotentialSpec::Polynomial { terms } => {
                let mut parsed = Vec::with_capacity(terms.len());
                for t in terms {
                    let e: [u32; 3] = std::array::from_fn(|k| t[k + 1] as u32);
                    if (0..3).any(|k| t[k + 1] < 0.0 || t[k + 1].fract() != 0.0) {
                        return Err(Error::InvalidParameter(format!("polynomial exponents must be non-negative integers: {t:?}")));
                    }
                    parsed.push((t[0], e));
                }
                monogenic_completion(Arc::new(Polynomial::new(parsed)), COMPLETION_ORDER, &probes)
            }
            PotentialSpec::Position => {
                Ok(FlowPotential::from_field(Arc::new(QuaternionPolynomial::position()), Construction::Explicit))
            }
            PotentialSpec::Planar { flow } => {
                let f = flow.build()?;
                let probes: Vec<_> = [(1.5, 0.5), (-2.0, 1.0), (0.5, -3.0), (2.5, 2.5)]
                    .into_iter()
                    .map(|(x, y)| num_complex::Complex64::new(x, y))
                    .collect();
                embed_2d(&f, &probes)
            }
        }
    }
}
