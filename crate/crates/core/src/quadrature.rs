//! One-dimensional quadrature rules and the deterministic reduction used by
//! every surface and volume integral in the crate.

use std::f64::consts::PI;
use std::ops::Add;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::Result;

/// Gauss–Legendre nodes and weights on `[-1, 1]`, nodes ascending.
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    assert!(n > 0, "Gauss-Legendre order must be positive");
    let mut out = vec![(0.0, 0.0); n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        out[i] = (-x, w);
        out[n - 1 - i] = (x, w);
    }
    if n % 2 == 1 {
        out[n / 2].0 = 0.0;
    }
    out
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// A rule on an interval `[a, b]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Rule1d {
    GaussLegendre(usize),
    /// `panels` equal sub-intervals with a Gauss–Legendre rule of `order` on each.
    CompositeGaussLegendre { panels: usize, order: usize },
    /// Equispaced trapezoid rule for periodic integrands.
    Periodic(usize),
}

impl Rule1d {
    pub fn len(&self) -> usize {
        match *self {
            Rule1d::GaussLegendre(n) | Rule1d::Periodic(n) => n,
            Rule1d::CompositeGaussLegendre { panels, order } => panels * order,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Nodes and weights mapped onto `[a, b]`.
    pub fn nodes(&self, a: f64, b: f64) -> Vec<(f64, f64)> {
        match *self {
            Rule1d::GaussLegendre(n) => map_interval(&gauss_legendre(n), a, b),
            Rule1d::CompositeGaussLegendre { panels, order } => {
                let base = gauss_legendre(order);
                let step = (b - a) / panels as f64;
                (0..panels)
                    .flat_map(|p| {
                        let lo = a + step * p as f64;
                        map_interval(&base, lo, lo + step)
                    })
                    .collect()
            }
            Rule1d::Periodic(n) => {
                let h = (b - a) / n as f64;
                (0..n).map(|k| (a + h * k as f64, h)).collect()
            }
        }
    }
}

fn map_interval(rule: &[(f64, f64)], a: f64, b: f64) -> Vec<(f64, f64)> {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    rule.iter().map(|&(x, w)| (mid + half * x, half * w)).collect()
}

/// Pairwise summation with a fixed split pattern, so the result depends only
/// on the order of `items`.
pub fn pairwise_sum<T>(items: &[T]) -> T
where
    T: Copy + Default + Add<Output = T>,
{
    const BLOCK: usize = 8;
    if items.len() <= BLOCK {
        return items.iter().fold(T::default(), |acc, &x| acc + x);
    }
    let mid = items.len() / 2;
    pairwise_sum(&items[..mid]) + pairwise_sum(&items[mid..])
}

/// Evaluates `f` on every item in parallel, keeping input order.
pub fn par_map<I, T, F>(items: &[I], f: F) -> Result<Vec<T>>
where
    I: Sync,
    T: Send,
    F: Fn(&I) -> Result<T> + Sync + Send,
{
    items.par_iter().map(f).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_is_exact_for_polynomials() {
        for n in [1, 2, 5, 16, 32, 64] {
            let rule = gauss_legendre(n);
            let wsum: f64 = rule.iter().map(|r| r.1).sum();
            assert!((wsum - 2.0).abs() < 1e-13, "n = {n}");
            for deg in 0..(2 * n) {
                let approx: f64 = rule.iter().map(|&(x, w)| w * x.powi(deg as i32)).sum();
                let exact = if deg % 2 == 1 { 0.0 } else { 2.0 / (deg as f64 + 1.0) };
                assert!((approx - exact).abs() < 1e-13, "n = {n}, degree {deg}");
            }
        }
    }

    #[test]
    fn nodes_are_symmetric() {
        let rule = gauss_legendre(7);
        for i in 0..7 {
            assert_eq!(rule[i].0, -rule[6 - i].0);
            assert_eq!(rule[i].1, rule[6 - i].1);
        }
    }

    #[test]
    fn composite_and_periodic_rules() {
        let r = Rule1d::CompositeGaussLegendre { panels: 4, order: 8 };
        assert_eq!(r.len(), 32);
        let val: f64 = r.nodes(0.0, 3.0).iter().map(|&(x, w)| w * x.exp()).sum();
        assert!((val - (3.0f64.exp() - 1.0)).abs() < 1e-12);

        let p = Rule1d::Periodic(16);
        let val: f64 = p.nodes(0.0, 2.0 * PI).iter().map(|&(t, w)| w * (3.0 * t).cos().powi(2)).sum();
        assert!((val - PI).abs() < 1e-13);
    }

    #[test]
    fn pairwise_sum_matches_naive_on_integers() {
        let xs: Vec<f64> = (0..1000).map(|k| k as f64).collect();
        assert_eq!(pairwise_sum(&xs), 499_500.0);
        assert_eq!(pairwise_sum::<f64>(&[]), 0.0);
    }
}
