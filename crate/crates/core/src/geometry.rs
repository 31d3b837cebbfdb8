//! Hyperbolic half-plane model: coordinates, degree/height conversion,
//! the adjacency rule and the map from the Poincaré-disk polar model.
//!
//! Vertices live in `R x [0, inf)`; two vertices `(x, h)` and `(x', h')` are
//! joined iff `|x - x'| <= exp((h + h') / 2)`, where in the wrapped model the
//! horizontal distance is measured around a circle of circumference `pi * n`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Point of the hyperbolic disk in polar coordinates, `theta` in `(-pi, pi]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolarPoint {
    pub r: f64,
    pub theta: f64,
}

impl PolarPoint {
    pub fn new(r: f64, theta: f64) -> Result<Self> {
        if !(r >= 0.0) || !r.is_finite() || !theta.is_finite() {
            return Err(Error::domain(format!("invalid polar point ({r}, {theta})")));
        }
        Ok(Self { r, theta: normalize_angle(theta) })
    }
}

fn normalize_angle(theta: f64) -> f64 {
    let mut t = theta.rem_euclid(2.0 * PI);
    if t > PI {
        t -= 2.0 * PI;
    }
    // rem_euclid maps -pi to pi, which is already the closed end.
    t
}

/// Point of the upper half-plane: horizontal coordinate and height.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HalfPlanePoint {
    pub x: f64,
    pub h: f64,
}

impl HalfPlanePoint {
    pub const fn new(x: f64, h: f64) -> Self {
        Self { x, h }
    }
}

/// Model parameters. `n` is absent for the infinite model; the disk radius
/// `R = 2 log n` is always derived from it.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GraphParams {
    pub alpha: f64,
    pub n: Option<f64>,
}

impl GraphParams {
    pub fn infinite(alpha: f64) -> Result<Self> {
        check_alpha(alpha)?;
        Ok(Self { alpha, n: None })
    }

    pub fn finite(alpha: f64, n: f64) -> Result<Self> {
        check_alpha(alpha)?;
        if !(n > 1.0) || !n.is_finite() {
            return Err(Error::domain(format!("scale n must be a finite real > 1, got {n}")));
        }
        Ok(Self { alpha, n: Some(n) })
    }

    pub fn radius(&self) -> Option<f64> {
        self.n.map(|n| 2.0 * n.ln())
    }
}

pub fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.5 && alpha < 1.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("alpha must lie in (1/2, 1), got {alpha}")))
    }
}

/// Expected degree of a vertex at height `h` in the infinite model.
pub fn expected_degree(h: f64, alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    if !(h >= 0.0) {
        return Err(Error::domain(format!("height must be >= 0, got {h}")));
    }
    Ok((h / 2.0).exp() / (alpha - 0.5))
}

/// Inverse of [`expected_degree`]. Negative results are returned as-is;
/// callers needing a height check `(alpha - 1/2) * d > 1` themselves or use
/// [`height_for_degree_nonneg`].
pub fn height_for_degree(d: f64, alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    if !(d > 0.0) {
        return Err(Error::domain(format!("degree must be > 0, got {d}")));
    }
    Ok(2.0 * ((alpha - 0.5) * d).ln())
}

pub fn height_for_degree_nonneg(d: f64, alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    if (alpha - 0.5) * d < 1.0 {
        return Err(Error::domain(format!(
            "degree {d} is below the height-0 degree 1/(alpha - 1/2) = {}",
            1.0 / (alpha - 0.5)
        )));
    }
    height_for_degree(d, alpha)
}

/// Hyperbolic distance via the hyperbolic law of cosines.
pub fn hyperbolic_distance(u: PolarPoint, v: PolarPoint) -> f64 {
    let arg = u.r.cosh() * v.r.cosh() - u.r.sinh() * v.r.sinh() * (u.theta - v.theta).cos();
    arg.max(1.0).acosh()
}

/// The map from the disk of radius `R = 2 log n` to `(-pi n / 2, pi n / 2] x [0, R]`.
pub fn map_disk_to_halfplane(p: PolarPoint, n: f64) -> Result<HalfPlanePoint> {
    let radius = 2.0 * n.ln();
    if p.r > radius {
        return Err(Error::domain(format!("radial coordinate {} exceeds R = {radius}", p.r)));
    }
    Ok(HalfPlanePoint { x: p.theta * (radius / 2.0).exp() / 2.0, h: radius - p.r })
}

/// Horizontal distance, circular when a circumference is given.
#[inline]
pub fn horizontal_distance(x1: f64, x2: f64, circumference: Option<f64>) -> f64 {
    let dx = (x1 - x2).abs();
    match circumference {
        Some(c) => {
            let dx = dx.rem_euclid(c);
            dx.min(c - dx)
        }
        None => dx,
    }
}

/// The adjacency rule, inclusive at the boundary.
#[inline]
pub fn adjacent(u: HalfPlanePoint, v: HalfPlanePoint, circumference: Option<f64>) -> bool {
    horizontal_distance(u.x, v.x, circumference) <= ((u.h + v.h) / 2.0).exp()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn degree_examples() {
        assert_eq!(expected_degree(0.0, 0.75).unwrap(), 4.0);
        assert!((expected_degree(9.21034, 0.75).unwrap() - 400.0).abs() < 1e-3);
        // 2 log 100 exactly.
        let h = 2.0 * 100f64.ln();
        assert!((expected_degree(h, 0.75).unwrap() - 400.0).abs() < 1e-9);
        assert!(expected_degree(1.0, 1.2).is_err());
        assert!(expected_degree(1.0, 0.5).is_err());
    }

    #[test]
    fn height_examples() {
        assert_eq!(height_for_degree(4.0, 0.75).unwrap(), 0.0);
        assert!((height_for_degree(400.0, 0.75).unwrap() - 9.21034).abs() < 1e-5);
        for h in [0.5, 5.0, 20.0] {
            let d = expected_degree(h, 0.75).unwrap();
            assert!((height_for_degree(d, 0.75).unwrap() - h).abs() < 1e-12);
        }
        assert!(height_for_degree_nonneg(3.0, 0.75).is_err());
        assert!(height_for_degree_nonneg(5.0, 0.75).is_ok());
    }

    #[test]
    fn distance_examples() {
        let o = PolarPoint::new(0.0, 0.0).unwrap();
        let v = PolarPoint::new(3.0, 1.234).unwrap();
        assert!((hyperbolic_distance(o, v) - 3.0).abs() < 1e-12);
        assert_eq!(hyperbolic_distance(v, v), 0.0);
        let a = PolarPoint::new(1.0, 0.0).unwrap();
        let b = PolarPoint::new(1.0, PI).unwrap();
        assert!((hyperbolic_distance(a, b) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn angle_normalization() {
        assert!((PolarPoint::new(1.0, 3.0 * PI).unwrap().theta - PI).abs() < 1e-12);
        assert!((PolarPoint::new(1.0, -PI).unwrap().theta - PI).abs() < 1e-12);
        assert!((PolarPoint::new(1.0, -0.5).unwrap().theta + 0.5).abs() < 1e-12);
        assert!(PolarPoint::new(-1.0, 0.0).is_err());
    }

    #[test]
    fn disk_map_examples() {
        let n = 100.0f64;
        let p = map_disk_to_halfplane(PolarPoint::new(2.0 * n.ln(), 0.0).unwrap(), n).unwrap();
        assert_eq!(p.x, 0.0);
        assert!(p.h.abs() < 1e-12);
        let e = std::f64::consts::E;
        let p = map_disk_to_halfplane(PolarPoint::new(0.0, PI).unwrap(), e).unwrap();
        assert!((p.x - PI * e / 2.0).abs() < 1e-12 && (p.x - 4.2699).abs() < 1e-4);
        assert!((p.h - 2.0).abs() < 1e-12);
        let p = map_disk_to_halfplane(PolarPoint::new(1.0, PI / 2.0).unwrap(), e).unwrap();
        assert!((p.x - 2.1349).abs() < 1e-4 && (p.h - 1.0).abs() < 1e-12);
        assert!(map_disk_to_halfplane(PolarPoint::new(2.5, 0.0).unwrap(), e).is_err());
    }

    #[test]
    fn adjacency_examples() {
        let o = HalfPlanePoint::new(0.0, 0.0);
        assert!(adjacent(o, HalfPlanePoint::new(1.0, 0.0), None));
        assert!(!adjacent(o, HalfPlanePoint::new(1.001, 0.0), None));
        let c = 2.0 * PI;
        let u = HalfPlanePoint::new(-PI + 0.1, 0.0);
        let v = HalfPlanePoint::new(PI - 0.1, 0.0);
        assert!(adjacent(u, v, Some(c)));
        assert!(!adjacent(u, v, None));
    }

    fn polar() -> impl Strategy<Value = PolarPoint> {
        (0.0..8.0f64, -PI..PI).prop_map(|(r, t)| PolarPoint::new(r, t).unwrap())
    }

    fn point() -> impl Strategy<Value = HalfPlanePoint> {
        (-50.0..50.0f64, 0.0..8.0f64).prop_map(|(x, h)| HalfPlanePoint::new(x, h))
    }

    proptest! {
        #[test]
        fn adjacency_symmetric(u in point(), v in point(), wrap in proptest::bool::ANY) {
            let c = wrap.then_some(100.0 * PI);
            prop_assert_eq!(adjacent(u, v, c), adjacent(v, u, c));
        }

        #[test]
        fn adjacency_monotone_in_height(u in point(), v in point(), dh in 0.0..5.0f64) {
            if adjacent(u, v, None) {
                prop_assert!(adjacent(HalfPlanePoint::new(u.x, u.h + dh), v, None));
                prop_assert!(adjacent(u, HalfPlanePoint::new(v.x, v.h + dh), None));
            }
        }

        #[test]
        fn triangle_inequality(a in polar(), b in polar(), c in polar()) {
            let ab = hyperbolic_distance(a, b);
            let bc = hyperbolic_distance(b, c);
            let ac = hyperbolic_distance(a, c);
            prop_assert!(ac <= ab + bc + 1e-9);
            prop_assert!((ab - hyperbolic_distance(b, a)).abs() < 1e-12);
        }

        #[test]
        fn degree_height_inverse(h in 0.0..40.0f64, alpha in 0.51..0.99f64) {
            let d = expected_degree(h, alpha).unwrap();
            let back = height_for_degree(d, alpha).unwrap();
            prop_assert!((back - h).abs() < 1e-12);
        }
    }
}
