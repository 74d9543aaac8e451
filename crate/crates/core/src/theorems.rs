//! The Cauchy kernel and numerical checks of the Stokes theorem, the Cauchy
//! integral formula and the vanishing of `∫ g dσ f` for monogenic pairs.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{self, JetKind, Partials, QuaternionField, DEFAULT_EXCLUSION_RADIUS};
use crate::quadrature::{pairwise_sum, par_map};
use crate::quat::{Quaternion, ReducedPoint};
use crate::surface::{integrate_g_dsigma_f, integrate_nodes, RegularBody};

/// The Cauchy margin is this many node spacings.
pub const MARGIN_SPACINGS: f64 = 10.0;

/// `E(x) = x̄ / (4π|x|³)`.
pub fn cauchy_kernel(x: ReducedPoint) -> Result<Quaternion> {
    let r = x.norm();
    if !(r >= DEFAULT_EXCLUSION_RADIUS) {
        return Err(Error::Singularity(x));
    }
    Ok(kernel_unchecked(x, r))
}

fn kernel_unchecked(x: ReducedPoint, r: f64) -> Quaternion {
    x.to_quaternion().conj() * (1.0 / (4.0 * PI * r * r * r))
}

/// `x ↦ E(x − center)`, left and right monogenic away from `center`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CauchyKernel {
    pub center: ReducedPoint,
    pub exclusion: f64,
}

impl CauchyKernel {
    pub fn new(center: ReducedPoint) -> Self {
        Self { center, exclusion: DEFAULT_EXCLUSION_RADIUS }
    }
}

impl QuaternionField for CauchyKernel {
    fn value(&self, x: ReducedPoint) -> Quaternion {
        let d = x - self.center;
        kernel_unchecked(d, d.norm())
    }

    fn contains(&self, x: ReducedPoint) -> bool {
        (x - self.center).norm() > self.exclusion
    }

    fn partials(&self, x: ReducedPoint) -> Option<Partials> {
        let d = x - self.center;
        let r = d.norm();
        let (r3, r5) = (r * r * r, r * r * r * r * r);
        let dbar = d.to_quaternion().conj();
        let c = 1.0 / (4.0 * PI);
        Some(std::array::from_fn(|k| {
            (Quaternion::BASIS[k].conj() * (1.0 / r3) - dbar * (3.0 * d.component(k) / r5)) * c
        }))
    }
}

/// Both sides of a checked identity.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TheoremReport {
    pub lhs: Quaternion,
    pub rhs: Quaternion,
    pub residual: f64,
    pub surface_order: usize,
    pub volume_order: Option<usize>,
}

impl TheoremReport {
    fn new(lhs: Quaternion, rhs: Quaternion, surface_order: usize, volume_order: Option<usize>) -> Self {
        Self { lhs, rhs, residual: (lhs - rhs).norm(), surface_order, volume_order }
    }
}

/// `∫_∂Ω g dσ f` against `∫_Ω ((gD)f + g(Df)) dV`.
pub fn verify_stokes(
    body: &RegularBody,
    g: &dyn QuaternionField,
    f: &dyn QuaternionField,
    volume_order: usize,
) -> Result<TheoremReport> {
    let lhs = integrate_g_dsigma_f(body.surface(), g, f)?;
    let nodes = body.volume_rule(volume_order)?;
    let terms = par_map(&nodes, |&(x, w)| {
        let gx = field::evaluate(g, x)?;
        let fx = field::evaluate(f, x)?;
        let gd = field::d_right(&field::partials(g, x)?);
        let df = field::d_left(&field::partials(f, x)?);
        Ok((gd * fx + gx * df) * w)
    })?;
    let rhs = pairwise_sum(&terms);
    Ok(TheoremReport::new(lhs, rhs, body.order(), Some(volume_order)))
}

/// Smallest distance from the boundary at which the Cauchy integral is trusted.
pub fn cauchy_margin(body: &RegularBody) -> f64 {
    MARGIN_SPACINGS * body.surface().node_spacing()
}

/// `∫_∂Ω E(y − x) dσ(y) f(y)`: `f(x)` inside the body, zero outside.
pub fn cauchy_reconstruct(body: &RegularBody, f: &dyn QuaternionField, x: ReducedPoint) -> Result<Quaternion> {
    let distance = body.distance_to_boundary(x);
    let margin = cauchy_margin(body);
    if !(distance >= margin) {
        return Err(Error::TooCloseToBoundary { point: x, distance, margin });
    }
    let kernel = CauchyKernel::new(x);
    integrate_g_dsigma_f(body.surface(), &kernel, f)
}

/// Cauchy reconstruction at `x` compared with `f(x)` (inside) or zero (outside).
pub fn verify_cauchy(body: &RegularBody, f: &dyn QuaternionField, x: ReducedPoint) -> Result<TheoremReport> {
    let lhs = cauchy_reconstruct(body, f, x)?;
    let rhs = if body.contains(x) { field::evaluate(f, x)? } else { Quaternion::ZERO };
    Ok(TheoremReport::new(lhs, rhs, body.order(), None))
}

/// Points on and inside the body at which hypotheses are probed.
pub fn probe_points(body: &RegularBody) -> Result<Vec<ReducedPoint>> {
    let nodes = body.surface().nodes();
    let stride = (nodes.len() / 97).max(1);
    let mut out: Vec<ReducedPoint> = nodes.iter().step_by(stride).map(|n| n.point).collect();
    out.extend(body.volume_rule(4)?.into_iter().map(|(x, _)| x));
    Ok(out)
}

fn require(
    what: &'static str,
    f: &dyn QuaternionField,
    points: &[ReducedPoint],
    check: fn(&dyn QuaternionField, &[ReducedPoint], f64) -> Result<field::MonogenicityReport>,
) -> Result<()> {
    let tol = JetKind::of(f, points[0]).monogenic_tolerance();
    for &x in points {
        if !f.contains(x) {
            return Err(Error::NotMonogenic { what, point: x, residual: f64::INFINITY });
        }
    }
    let report = check(f, points, tol)?;
    if report.monogenic {
        Ok(())
    } else {
        Err(Error::NotMonogenic { what, point: report.worst_point, residual: report.max_residual })
    }
}

/// `∫ g dσ f` for right-monogenic `g` and left-monogenic `f`; the residual is
/// the size of the integral.
///
/// Monogenicity is probed on surface nodes and a coarse interior grid, so an
/// isolated singularity between probes is not detected.
pub fn verify_zil(body: &RegularBody, g: &dyn QuaternionField, f: &dyn QuaternionField) -> Result<TheoremReport> {
    let probes = probe_points(body)?;
    require("right factor g", g, &probes, field::is_right_monogenic)?;
    require("left factor f", f, &probes, field::is_monogenic)?;
    let lhs = integrate_g_dsigma_f(body.surface(), g, f)?;
    Ok(TheoremReport::new(lhs, Quaternion::ZERO, body.order(), None))
}

/// `∮ dσ`, zero on every closed surface.
pub fn surface_null_integral(body: &RegularBody) -> Result<Quaternion> {
    integrate_nodes(body.surface(), |n| Ok(n.dsigma()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{Constant, FiniteDifferenced, Polynomial, QuaternionPolynomial};
    use crate::potential::monogenic_completion;
    use std::sync::Arc;

    fn p(x: f64, y: f64, z: f64) -> ReducedPoint {
        ReducedPoint::new(x, y, z)
    }

    #[test]
    fn kernel_examples() {
        let e = cauchy_kernel(p(1.0, 0.0, 0.0)).unwrap();
        assert!((e - Quaternion::ONE * (1.0 / (4.0 * PI))).norm() < 1e-16);
        let e = cauchy_kernel(p(0.0, 2.0, 0.0)).unwrap();
        assert!((e - Quaternion::new(0.0, -1.0 / (16.0 * PI), 0.0, 0.0)).norm() < 1e-16);
        assert!(matches!(cauchy_kernel(ReducedPoint::ORIGIN), Err(Error::Singularity(_))));
    }

    #[test]
    fn kernel_is_two_sided_monogenic() {
        let k = CauchyKernel::new(p(0.1, -0.2, 0.3));
        let fd = FiniteDifferenced(k);
        for x in [p(1.1, -0.2, 0.3), p(0.5, 0.5, 0.5), p(-1.0, 2.0, 0.0)] {
            assert!(field::apply_d(&k, x).unwrap().norm() < 1e-14);
            assert!(field::apply_d_right(&k, x).unwrap().norm() < 1e-14);
            assert!(field::apply_d(&fd, x).unwrap().norm() < 1e-6);
            let a = k.partials(x).unwrap();
            let b = field::fd_partials(&|y| k.value(y), x);
            for j in 0..3 {
                assert!((a[j] - b[j]).norm() < 1e-8);
            }
        }
    }

    #[test]
    fn stokes_on_cube_and_ball() {
        let cube = RegularBody::box_(ReducedPoint::ORIGIN, p(1.0, 1.0, 1.0), 8).unwrap();
        let one = Constant(Quaternion::ONE);
        let pos = QuaternionPolynomial::position();
        let r = verify_stokes(&cube, &one, &pos, 4).unwrap();
        assert!((r.lhs + Quaternion::ONE).norm() < 1e-12 && (r.rhs + Quaternion::ONE).norm() < 1e-12);
        assert!(r.residual <= 1e-9);
        let r = verify_stokes(&cube, &one, &one, 4).unwrap();
        assert!(r.lhs.norm() < 1e-14 && r.rhs == Quaternion::ZERO);

        let ball = RegularBody::sphere(p(0.1, 0.0, -0.2), 0.9, 16).unwrap();
        let g = QuaternionPolynomial::new([
            Polynomial::new([(1.0, [1, 1, 0]), (0.5, [0, 0, 0])]),
            Polynomial::new([(-2.0, [0, 0, 2])]),
            Polynomial::coordinate(1),
            Polynomial::new([(1.0, [2, 0, 1])]),
        ]);
        let f = QuaternionPolynomial::new([
            Polynomial::new([(1.0, [0, 1, 1])]),
            Polynomial::new([(3.0, [1, 0, 0])]),
            Polynomial::new([(1.0, [2, 0, 0]), (-1.0, [0, 2, 0])]),
            Polynomial::constant(0.7),
        ]);
        let r = verify_stokes(&ball, &g, &f, 16).unwrap();
        assert!(r.residual <= 1e-7, "{r:?}");
    }

    #[test]
    fn cauchy_examples() {
        let sphere = RegularBody::sphere(ReducedPoint::ORIGIN, 1.0, 64).unwrap();
        let one = Constant(Quaternion::ONE);
        let r = verify_cauchy(&sphere, &one, p(0.1, 0.2, 0.0)).unwrap();
        assert!(r.residual < 1e-10, "{r:?}");

        let probes = [p(0.2, 0.1, -0.1), p(0.5, 0.5, 0.5), p(-0.7, 0.0, 0.2)];
        let w = monogenic_completion(Arc::new(Polynomial::coordinate(0)), 32, &probes).unwrap();
        let r = verify_cauchy(&sphere, &*w.w, p(0.2, 0.1, -0.1)).unwrap();
        assert!(r.residual <= 1e-6, "{r:?}");

        let r = verify_cauchy(&sphere, &*w.w, p(3.0, 0.0, 0.0)).unwrap();
        assert!(r.lhs.norm() <= 1e-6 && r.rhs == Quaternion::ZERO);
    }

    #[test]
    fn cauchy_margin_is_enforced() {
        let sphere = RegularBody::sphere(ReducedPoint::ORIGIN, 1.0, 32).unwrap();
        let one = Constant(Quaternion::ONE);
        let err = cauchy_reconstruct(&sphere, &one, p(0.2, 0.1, -0.1)).unwrap_err();
        assert!(matches!(err, Error::TooCloseToBoundary { .. }));
        assert!(cauchy_reconstruct(&sphere, &one, p(0.0, 0.0, 0.99)).is_err());
    }

    #[test]
    fn zil_examples() {
        let cube = RegularBody::box_(ReducedPoint::ORIGIN, p(1.0, 1.0, 1.0), 32).unwrap();
        let one = Constant(Quaternion::ONE);
        let e = CauchyKernel::new(p(2.5, 0.5, 0.5));
        let r = verify_zil(&cube, &one, &e).unwrap();
        assert!(r.residual <= 1e-7, "{r:?}");
        assert!(verify_zil(&cube, &one, &one).unwrap().residual < 1e-14);

        // an isolated pole between the probes is not refused, but the
        // integral then picks up its residue
        let inside = CauchyKernel::new(p(0.5, 0.5, 0.5));
        let r = verify_zil(&cube, &one, &inside).unwrap();
        assert!((r.lhs - Quaternion::ONE).norm() < 1e-6, "{r:?}");
        let pos = QuaternionPolynomial::position();
        assert!(matches!(verify_zil(&cube, &one, &pos), Err(Error::NotMonogenic { .. })));
    }

    #[test]
    fn null_integral() {
        let s = RegularBody::sphere(p(1.0, 1.0, 1.0), 0.3, 16).unwrap();
        assert!(surface_null_integral(&s).unwrap().norm() < 1e-14);
    }
}
