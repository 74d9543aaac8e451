//! JSON scenario configuration.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::catalog::{by_name, PlanarSpec, PotentialSpec};
use crate::error::{Error, Result};
use crate::force::{FlowScenario, ForceMethod};
use crate::planar::PlanarContour;
use crate::potential::FlowPotential;
use crate::quat::ReducedPoint;
use crate::surface::{ClosedCurve, RegularBody};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Json,
    Csv,
}

/// A catalog name, or a full specification.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PotentialRef {
    Name(String),
    Spec(PotentialSpec),
}

impl Default for PotentialRef {
    fn default() -> Self {
        PotentialRef::Spec(PotentialSpec::default())
    }
}

impl PotentialRef {
    pub fn spec(&self) -> Result<PotentialSpec> {
        match self {
            PotentialRef::Name(n) => by_name(n),
            PotentialRef::Spec(s) => Ok(s.clone()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum BodySpec {
    Sphere { center: [f64; 3], radius: f64 },
    Box { corner: [f64; 3], extents: [f64; 3] },
    /// Circle of the given center and radius in the `xy`-plane, extruded to `|z| ≤ half_height`.
    Cylinder { center: [f64; 2], radius: f64, half_height: f64 },
}

impl Default for BodySpec {
    fn default() -> Self {
        BodySpec::Sphere { center: [0.0; 3], radius: 1.0 }
    }
}

impl BodySpec {
    pub fn build(&self, order: usize) -> Result<RegularBody> {
        match *self {
            BodySpec::Sphere { center, radius } => RegularBody::sphere(ReducedPoint::from_array(center), radius, order),
            BodySpec::Box { corner, extents } => {
                RegularBody::box_(ReducedPoint::from_array(corner), ReducedPoint::from_array(extents), order)
            }
            BodySpec::Cylinder { center, radius, half_height } => {
                RegularBody::cylinder_with_caps(ClosedCurve::circle(center, radius)?, half_height, order)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ContourSpec {
    Circle { center: [f64; 2], radius: f64 },
}

impl ContourSpec {
    pub fn build(&self) -> Result<PlanarContour> {
        match *self {
            ContourSpec::Circle { center, radius } => ClosedCurve::circle(center, radius),
        }
    }
}

/// Settings of the planar reduction.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PlanarConfig {
    pub flow: PlanarSpec,
    pub contour: ContourSpec,
    pub half_heights: Vec<f64>,
    pub moment_center: [f64; 2],
    /// Relative tolerance between the contour and per-length surface values.
    pub tolerance: f64,
    /// Tolerance on the spread of per-length values over the half-heights.
    pub height_tolerance: f64,
}

impl Default for PlanarConfig {
    fn default() -> Self {
        Self {
            flow: PlanarSpec::CylinderVortex { speed: 1.0, radius: 1.0, circulation: 2.0 * PI },
            contour: ContourSpec::Circle { center: [0.0, 0.0], radius: 1.0 },
            half_heights: vec![0.5, 1.0, 2.0],
            moment_center: [0.5, 0.25],
            tolerance: 1e-4,
            height_tolerance: 1e-6,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScenarioConfig {
    pub scenario: String,
    pub potential: PotentialRef,
    pub body: BodySpec,
    pub rho: f64,
    pub p_inf: f64,
    /// Overrides the far-field velocity of the potential.
    pub v_inf: Option<[f64; 3]>,
    pub order: usize,
    /// Orders of a convergence sweep.
    pub orders: Vec<usize>,
    pub volume_order: usize,
    pub tolerance: f64,
    pub convergence_method: ForceMethod,
    pub moment_points: Vec<[f64; 3]>,
    pub planar: PlanarConfig,
    pub format: OutputFormat,
    pub output: Option<PathBuf>,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self {
            scenario: "sphere-dalembert".into(),
            potential: PotentialRef::default(),
            body: BodySpec::default(),
            rho: 1.0,
            p_inf: 0.0,
            v_inf: None,
            order: 32,
            orders: vec![8, 16, 32],
            volume_order: 16,
            tolerance: 1e-6,
            convergence_method: ForceMethod::BlasiusSpeed,
            moment_points: vec![[0.0; 3], [1.0, 0.5, -0.25]],
            planar: PlanarConfig::default(),
            format: OutputFormat::Json,
            output: None,
        }
    }
}

impl ScenarioConfig {
    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::InvalidParameter(format!("config: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let s = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidParameter(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&s)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn potential(&self) -> Result<FlowPotential> {
        let mut p = self.potential.spec()?.build()?;
        if let Some(v) = self.v_inf {
            p = p.with_far_field(ReducedPoint::from_array(v));
        }
        Ok(p)
    }

    pub fn scenario_at(&self, order: usize) -> Result<FlowScenario> {
        let body = self.body.build(order)?;
        Ok(FlowScenario::new(self.potential()?, body, self.rho)?
            .with_name(self.scenario.clone())
            .with_p_inf(self.p_inf)
            .with_tolerance(self.tolerance))
    }

    pub fn build_scenario(&self) -> Result<FlowScenario> {
        self.scenario_at(self.order)
    }
}
