//! Analytic area bounds for the decode-and-forward coverage region at equal
//! powers: an inner ellipse and (for path-loss exponent 2) an outer conic,
//! parameterized by a correlation-like parameter `rho` that runs from 0 at
//! the critical relay distance to 1 as the relay merges with the source.
//!
//! All shape parameters are evaluated through `u = (d/d_c)^alpha`, carrying
//! `1 - rho = u / (1 + rho)` and `1 - rho^2 = u` exactly; subtracting rho
//! from 1 directly would wipe out every digit once `d` drops a few orders of
//! magnitude below the critical distance.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::ChannelParams;
use crate::quartic;

/// Which side of the region the shape bounds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundKind {
    /// Ellipse contained in the coverage region.
    EllipseInner,
    /// Conic containing the coverage region (exponent 2 only).
    ConicOuter,
}

/// Ellipse/conic parameters bounding a decode-and-forward region.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct BoundShape {
    /// Correlation parameter in [0, 1).
    pub rho: f64,
    /// Major-axis parameter; the ellipse extends `sqrt(lambda) * d` from its
    /// center at `(d/2, 0)`.
    pub lambda: f64,
    /// Minor-axis parameter.
    pub gamma: f64,
    /// Conic eccentricity parameter `1 - gamma/lambda`, present only for
    /// exponent 2 where the outer conic exists.
    pub a: Option<f64>,
    /// Source-relay distance the shape was computed for.
    pub relay_dist: f64,
    pub kind: BoundKind,
    /// `lambda * (1 - rho)` for exponent 2, `lambda * sqrt(1 - rho)` for
    /// exponent 4: the scaled forms stay O(1) all the way to `d -> 0` and
    /// are what the area formulas use.
    scaled_lambda: f64,
    scaled_gamma: f64,
    /// `1 + rho`, kept alongside the scaled axes for the area formulas.
    one_plus_rho: f64,
    alpha: f64,
}

/// `u = (d/d_c)^alpha`, `rho = sqrt(1-u)`, and `1 - rho` computed without
/// cancellation.
fn rho_split(params: &ChannelParams, relay_dist: f64) -> Result<(f64, f64, f64)> {
    let dc = params.critical_distance();
    if !(relay_dist > 0.0 && relay_dist <= dc * (1.0 + 1e-12)) {
        return Err(Error::InvalidParameter {
            name: "relay_dist",
            value: relay_dist,
            requirement: "area bounds require 0 < d <= critical distance",
        });
    }
    let u = (relay_dist / dc).powf(params.alpha).min(1.0);
    let rho = (1.0 - u).sqrt();
    let one_minus_rho = u / (1.0 + rho);
    Ok((u, rho, one_minus_rho))
}

fn require_equal_powers(params: &ChannelParams) -> Result<()> {
    if params.p1 == params.p2 {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name: "p2",
            value: params.p2,
            requirement: "area bounds require p1 == p2",
        })
    }
}

/// Bounding-shape parameters for exponent 2. Returns the inner ellipse;
/// [`BoundShape::conic_outer`] flips it to the outer conic.
pub fn ellipse_params_alpha2(params: &ChannelParams, relay_dist: f64) -> Result<BoundShape> {
    require_equal_powers(params)?;
    if params.alpha != 2.0 {
        return Err(Error::InvalidParameter {
            name: "alpha",
            value: params.alpha,
            requirement: "this bound family is defined for alpha == 2",
        });
    }
    let (_, rho, omr) = rho_split(params, relay_dist)?;
    let opr = 1.0 + rho;
    // scaled_lambda = lambda * (1 - rho) = (1-rho)/4 + 1 + sqrt(2/(1+rho));
    // scaled_gamma = 2 - (1-rho)/4
    let scaled_lambda = omr / 4.0 + 1.0 + (2.0 / opr).sqrt();
    let scaled_gamma = 2.0 - omr / 4.0;
    let lambda = scaled_lambda / omr;
    let gamma = scaled_gamma / omr;
    // lambda - gamma in closed form; the naive difference of two O(1/(1-rho))
    // quantities would cancel catastrophically near rho = 1
    let lambda_minus_gamma = 0.5 + 1.0 / (opr * ((2.0 / opr).sqrt() + 1.0));
    let a = lambda_minus_gamma * omr / scaled_lambda;
    Ok(BoundShape {
        rho,
        lambda,
        gamma,
        a: Some(a),
        relay_dist,
        kind: BoundKind::EllipseInner,
        scaled_lambda,
        scaled_gamma,
        one_plus_rho: opr,
        alpha: 2.0,
    })
}

/// Lower and upper bounds on the decode-and-forward coverage area for
/// exponent 2: `pi sqrt(lambda gamma) d^2` and the same scaled by
/// `(1 - a/2)/sqrt(1 - a)`.
pub fn area_bounds_alpha2(params: &ChannelParams, relay_dist: f64) -> Result<(f64, f64)> {
    let shape = ellipse_params_alpha2(params, relay_dist)?;
    Ok((shape.area_lower(params), shape.area_upper(params).expect("alpha 2 has an upper bound")))
}

/// Bounding-shape parameters for exponent 4: the minor axis is closed-form
/// and the major axis comes from the largest real root of a quartic. Near
/// `rho = 1` the quartic is solved in rescaled coordinates where its
/// coefficients stay bounded.
pub fn ellipse_params_alpha4(params: &ChannelParams, relay_dist: f64) -> Result<BoundShape> {
    require_equal_powers(params)?;
    if params.alpha != 4.0 {
        return Err(Error::InvalidParameter {
            name: "alpha",
            value: params.alpha,
            requirement: "this bound family is defined for alpha == 4",
        });
    }
    let (u, rho, omr) = rho_split(params, relay_dist)?;
    let opr = 1.0 + rho;
    let sqrt_omr = omr.sqrt();
    // largest root of y^4 - (2/(1-rho)) y^2 - (4/(1-rho^2)) y - 1/(1-rho^2),
    // solved in t = y sqrt(1-rho) once the raw coefficients start to blow up
    let scaled_y = if omr < 0.01 {
        quartic::largest_real_root(0.0, -2.0, -4.0 * sqrt_omr / opr, -omr / opr)?
    } else {
        let y = quartic::largest_real_root(0.0, -2.0 / omr, -4.0 / u, -1.0 / u)?;
        y * sqrt_omr
    };
    let y = scaled_y / sqrt_omr;
    let lambda = 0.25 + y;
    let gamma = (2.0 / omr).sqrt() - 0.25;
    Ok(BoundShape {
        rho,
        lambda,
        gamma,
        a: None,
        relay_dist,
        kind: BoundKind::EllipseInner,
        scaled_lambda: sqrt_omr / 4.0 + scaled_y,
        scaled_gamma: 2f64.sqrt() - sqrt_omr / 4.0,
        one_plus_rho: opr,
        alpha: 4.0,
    })
}

/// Lower bound `pi sqrt(lambda gamma) d^2` on the decode-and-forward
/// coverage area for exponent 4.
pub fn area_lower_alpha4(params: &ChannelParams, relay_dist: f64) -> Result<f64> {
    Ok(ellipse_params_alpha4(params, relay_dist)?.area_lower(params))
}

impl BoundShape {
    /// Inner-ellipse area `pi sqrt(lambda gamma) d^2`, evaluated through the
    /// scaled axes so it stays accurate as `d -> 0`.
    pub fn area_lower(&self, params: &ChannelParams) -> f64 {
        let dc2 = params.critical_distance().powi(2);
        let axes = (self.scaled_lambda * self.scaled_gamma).sqrt();
        match self.alpha as u32 {
            2 => std::f64::consts::PI * axes * self.one_plus_rho * dc2,
            _ => std::f64::consts::PI * axes * self.one_plus_rho.sqrt() * dc2,
        }
    }

    /// Outer-conic area, i.e. the lower bound scaled by
    /// `(1 - a/2)/sqrt(1 - a)`. Only exists where the conic does.
    pub fn area_upper(&self, params: &ChannelParams) -> Option<f64> {
        self.a.map(|a| self.area_lower(params) * ratio_from_a(a))
    }

    /// Upper/lower area ratio `(1 - a/2)/sqrt(1 - a)`.
    pub fn bound_ratio(&self) -> Option<f64> {
        self.a.map(ratio_from_a)
    }

    /// The same parameters reinterpreted as the outer conic.
    pub fn conic_outer(&self) -> Result<BoundShape> {
        if self.a.is_none() {
            return Err(Error::InvalidParameter {
                name: "a",
                value: f64::NAN,
                requirement: "no outer conic exists for this exponent",
            });
        }
        Ok(BoundShape { kind: BoundKind::ConicOuter, ..*self })
    }

    /// Cartesian boundary samples. The ellipse is
    /// `(d/2 + sqrt(lambda) d cos t, sqrt(gamma) d sin t)`; the conic scales
    /// both coordinates by `sqrt(1 - a sin^2 t)` and stretches the minor
    /// axis by `1/sqrt(1 - a)`. Both curves touch the true region boundary
    /// on the axes.
    pub fn boundary_points(&self, n: usize) -> Vec<(f64, f64)> {
        assert!(n >= 8, "need at least 8 boundary samples");
        let d = self.relay_dist;
        let sl = self.lambda.sqrt() * d;
        let sg = self.gamma.sqrt() * d;
        (0..n)
            .map(|k| {
                let t = std::f64::consts::TAU * k as f64 / n as f64;
                let (sin, cos) = t.sin_cos();
                match self.kind {
                    BoundKind::EllipseInner => (d / 2.0 + sl * cos, sg * sin),
                    BoundKind::ConicOuter => {
                        let a = self.a.expect("conic requires a");
                        let w = (1.0 - a * sin * sin).max(0.0).sqrt();
                        (d / 2.0 + sl * cos * w, sg * sin * w / (1.0 - a).sqrt())
                    }
                }
            })
            .collect()
    }
}

fn ratio_from_a(a: f64) -> f64 {
    (1.0 - a / 2.0) / (1.0 - a).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    fn p_alpha2() -> ChannelParams {
        ChannelParams::new(10.0, 10.0, 2.0, 1.0).unwrap()
    }

    fn p_alpha4() -> ChannelParams {
        ChannelParams::new(100.0, 100.0, 4.0, 1.0).unwrap()
    }

    #[test]
    fn alpha2_shape_at_critical_distance() {
        let p = p_alpha2();
        let s = ellipse_params_alpha2(&p, p.critical_distance()).unwrap();
        assert_abs_diff_eq!(s.rho, 0.0, epsilon = 1e-7);
        // 1/4 + 1 + sqrt(2) and 7/4
        assert_relative_eq!(s.lambda, 2.6642135623730951, max_relative = 1e-7);
        assert_relative_eq!(s.gamma, 1.75, max_relative = 1e-7);
        assert_relative_eq!(s.a.unwrap(), 0.34314575050761980, max_relative = 1e-6);
        // 50-digit ratio (6 + 2 sqrt 2)/sqrt(7 (5 + 4 sqrt 2))
        assert_relative_eq!(s.bound_ratio().unwrap(), 1.0221621690587877, max_relative = 1e-7);
    }

    #[test]
    fn alpha2_difference_invariant_and_ratio_monotone() {
        let p = p_alpha2();
        let dc = p.critical_distance();
        let mut prev_ratio = 1.0;
        for k in 1..=1000 {
            let d = dc * k as f64 / 1000.0;
            let s = ellipse_params_alpha2(&p, d).unwrap();
            assert!(s.lambda - s.gamma >= 0.5 - 1e-9, "difference dropped at d = {d}");
            assert!(s.lambda - s.gamma <= 1.0 + 1e-9);
            let ratio = s.bound_ratio().unwrap();
            assert!(ratio <= 1.02217);
            assert!(ratio >= prev_ratio - 1e-12, "ratio not monotone at d = {d}");
            prev_ratio = ratio;
        }
    }

    #[test]
    fn alpha2_area_limits() {
        let p = p_alpha2();
        let dc = p.critical_distance();
        // shrinking relay distance: both bounds approach the coherent disk
        // of radius 2 d_c
        let (lo, hi) = area_bounds_alpha2(&p, dc * 2f64.powi(-12)).unwrap();
        let disk = 4.0 * std::f64::consts::PI * dc * dc;
        assert_relative_eq!(lo, disk, max_relative = 1e-3);
        assert_relative_eq!(hi, disk, max_relative = 1e-3);
        assert!(lo <= hi);
        // ... and stays sane at extreme scaling
        let (lo, hi) = area_bounds_alpha2(&p, dc * 1e-7).unwrap();
        assert!(lo.is_finite() && hi.is_finite() && lo <= hi);
        assert_relative_eq!(lo, disk, max_relative = 1e-6);
    }

    #[test]
    fn alpha4_shape_values() {
        let p = p_alpha4();
        let dc = p.critical_distance();
        // at d = d_c: largest root of y^4 - 2y^2 - 4y - 1 (companion-matrix
        // verified offline to 50 digits)
        let s = ellipse_params_alpha4(&p, dc).unwrap();
        assert_relative_eq!(s.lambda, 2.2974774221278364, max_relative = 1e-9);
        assert_relative_eq!(s.gamma, 2f64.sqrt() - 0.25, max_relative = 1e-9);
        assert!(s.a.is_none());
        assert!(s.conic_outer().is_err());
    }

    #[test]
    fn alpha4_known_interior_point() {
        // rho = 0.93 gives a lower bound of 2.0441...  pi d_c^2, strictly
        // above the d -> 0 limit of 2 pi d_c^2
        let p = p_alpha4();
        let dc = p.critical_distance();
        let rho: f64 = 0.93;
        let d = dc * (1.0 - rho * rho).powf(0.25);
        let lo = area_lower_alpha4(&p, d).unwrap();
        let in_units = lo / (std::f64::consts::PI * dc * dc);
        assert_relative_eq!(in_units, 2.0441713393685316, max_relative = 1e-9);
        assert!(in_units > 2.0);
    }

    #[test]
    fn alpha4_area_limit() {
        let p = p_alpha4();
        let dc = p.critical_distance();
        let lim = 2.0 * std::f64::consts::PI * dc * dc;
        let lo = area_lower_alpha4(&p, dc * 2f64.powi(-12)).unwrap();
        assert_relative_eq!(lo, lim, max_relative = 1e-3);
    }

    #[test]
    fn boundary_point_anchors() {
        let p = p_alpha2();
        let d = 2.0;
        let s = ellipse_params_alpha2(&p, d).unwrap();
        let pts = s.boundary_points(8);
        assert_relative_eq!(pts[0].0, d / 2.0 + s.lambda.sqrt() * d, max_relative = 1e-12);
        assert_abs_diff_eq!(pts[0].1, 0.0, epsilon = 1e-12);
        // conic and ellipse touch on the minor axis
        let conic = s.conic_outer().unwrap();
        let cpts = conic.boundary_points(8);
        assert_relative_eq!(cpts[2].1, s.gamma.sqrt() * d, max_relative = 1e-12);
        assert_abs_diff_eq!(cpts[2].0, d / 2.0, epsilon = 1e-9);
    }

    #[test]
    fn preconditions_rejected() {
        let mut p = p_alpha2();
        assert!(ellipse_params_alpha2(&p, 2.0 * p.critical_distance()).is_err());
        assert!(ellipse_params_alpha2(&p, 0.0).is_err());
        p.p2 = 9.0;
        assert!(ellipse_params_alpha2(&p, 1.0).is_err());
        let p3 = ChannelParams::new(10.0, 10.0, 3.0, 1.0).unwrap();
        assert!(ellipse_params_alpha2(&p3, 1.0).is_err());
        assert!(ellipse_params_alpha4(&p3, 1.0).is_err());
    }
}
