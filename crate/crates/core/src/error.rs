use thiserror::Error;

use crate::quat::ReducedPoint;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("quaternion has a nonzero k-component ({0}); expected a reduced quaternion")]
    NotReduced(f64),

    #[error("point {0} lies outside the field's domain")]
    OutsideDomain(ReducedPoint),

    #[error("sample set is empty")]
    EmptySampleSet,

    #[error("scalar field is not harmonic: |Δu| = {residual:.3e} at {point}")]
    NotHarmonic { point: ReducedPoint, residual: f64 },

    #[error("domain is not star-shaped with respect to {center}: segment to {point} leaves it")]
    NotStarShaped { center: ReducedPoint, point: ReducedPoint },

    #[error("completion quadrature did not converge: order doubling still changes the result by {change:.3e}")]
    QuadratureNotConverged { change: f64 },

    #[error("integrability condition for {stream_function} violated: residual {residual:.3e} at {point}")]
    IntegrabilityViolated {
        stream_function: &'static str,
        point: ReducedPoint,
        residual: f64,
    },

    #[error("gauge field has a nonzero scalar part {scalar:.3e} at {point}")]
    NotVectorValued { point: ReducedPoint, scalar: f64 },

    #[error("{what} is not monogenic: residual {residual:.3e} at {point}")]
    NotMonogenic {
        what: &'static str,
        point: ReducedPoint,
        residual: f64,
    },

    #[error("surface chart is degenerate at (u, v) = ({u}, {v})")]
    DegenerateSurface { u: f64, v: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("evaluation point {point} is {distance:.3e} from the boundary, closer than the required margin {margin:.3e}")]
    TooCloseToBoundary {
        point: ReducedPoint,
        distance: f64,
        margin: f64,
    },

    #[error("singular evaluation at {0}")]
    Singularity(ReducedPoint),

    #[error("contour is not a streamline: Im f deviates by {deviation:.3e} (allowed {allowed:.3e})")]
    NotStreamline { deviation: f64, allowed: f64 },

    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),

    #[error("unknown catalog entry `{0}`")]
    UnknownCatalogName(String),
}
