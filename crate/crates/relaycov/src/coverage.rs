//! Coverage-region extraction: for a scheme and relay distance, the set of
//! destination locations where the achievable rate meets the target. The
//! regions are star-shaped about the source for every implemented scheme,
//! so each boundary point is the root of a one-dimensional rate-versus-
//! distance problem along its ray.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec;
use crate::geometry::{ChannelParams, Layout};
use crate::rates::{ChannelModel, Scheme, Strategy};

/// Default boundary tolerance in length units.
pub const DEFAULT_TOL: f64 = 1e-9;
/// Default angular resolution.
pub const DEFAULT_N_THETA: usize = 720;

const MAX_ITERS: usize = 200;
/// Subdivisions of `(0, d]` scanned outside the monotone range when the
/// boundary falls between the source and the relay.
const INNER_SCAN: usize = 64;

/// Polar boundary samples of one scheme's coverage region.
#[derive(Debug, Clone, Serialize)]
pub struct CoverageRegion {
    pub params: ChannelParams,
    pub scheme: Scheme,
    /// Source-relay distance the region was computed for.
    pub relay_dist: f64,
    /// Sorted angle grid over `[-pi, pi)`.
    pub thetas: Vec<f64>,
    /// Boundary radius per angle; 0 marks an uncovered ray.
    pub radii: Vec<f64>,
    /// Set when every ray is uncovered.
    pub empty: bool,
}

/// Largest destination distance along the ray at `theta` where the rate
/// still meets the target, located by bracketing and bisection to `tol`.
///
/// The rate expressions are non-increasing in the destination distance once
/// it exceeds the relay distance, which makes the outward bracket-doubling
/// and bisection exact. A boundary that falls short of the relay distance is
/// first localized with a descending scan (outermost crossing wins), then
/// bisected within the bracketing cell.
pub fn boundary_radius(
    params: &ChannelParams,
    scheme: Scheme,
    relay_dist: f64,
    theta: f64,
    tol: f64,
) -> Result<f64> {
    if !(tol > 0.0) || !tol.is_finite() {
        return Err(Error::InvalidParameter {
            name: "tol",
            value: tol,
            requirement: "must be finite and > 0",
        });
    }
    if !scheme.is_deterministic() {
        return Err(Error::RequiresMonteCarlo);
    }
    // Decode-and-forward dies everywhere once the relay itself cannot
    // decode; skip the search. Holds for the full-duplex and phase-fading
    // models, whose relay-decoding term is independent of the destination.
    if scheme.strategy() == Strategy::Df
        && matches!(scheme.model(), ChannelModel::FullDuplex | ChannelModel::PhaseFading)
        && relay_dist > params.critical_distance()
    {
        return Ok(0.0);
    }

    let margin = |x: f64| -> Result<f64> {
        let layout = Layout::new(relay_dist, x, theta)?;
        Ok(scheme.evaluate(params, &layout)?.rate - params.rate)
    };

    if margin(0.0)? < 0.0 {
        return Ok(0.0);
    }

    let (mut lo, mut hi);
    if margin(relay_dist)? >= 0.0 {
        // covered at the relay ring: expand outward until uncovered
        lo = relay_dist;
        hi = relay_dist * 2.0;
        let mut iters = 0;
        while margin(hi)? >= 0.0 {
            lo = hi;
            hi *= 2.0;
            iters += 1;
            if iters > MAX_ITERS || !hi.is_finite() {
                return Err(Error::NumericFailure {
                    context: "boundary_radius",
                    detail: format!("bracket never closed along theta = {theta}"),
                });
            }
        }
    } else {
        // boundary lies between source and relay; walk down to the
        // outermost covered cell (the k = 0 probe re-checks the source
        // itself, so the loop always brackets)
        let step = relay_dist / INNER_SCAN as f64;
        lo = 0.0;
        hi = relay_dist;
        for k in (0..INNER_SCAN).rev() {
            let x = step * k as f64;
            if margin(x)? >= 0.0 {
                lo = x;
                hi = step * (k + 1) as f64;
                break;
            }
        }
    }

    let mut iters = 0;
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if margin(mid)? >= 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        iters += 1;
        if iters > MAX_ITERS {
            return Err(Error::NumericFailure {
                context: "boundary_radius",
                detail: format!("bisection stalled along theta = {theta}"),
            });
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Uniform angle grid over `[-pi, pi)`.
pub fn theta_grid(n_theta: usize) -> Vec<f64> {
    (0..n_theta)
        .map(|k| -std::f64::consts::PI + std::f64::consts::TAU * k as f64 / n_theta as f64)
        .collect()
}

/// Extract the full coverage region on an `n_theta`-point angle grid.
/// Rays are independent and evaluated in parallel; the result does not
/// depend on scheduling.
pub fn region(
    params: &ChannelParams,
    scheme: Scheme,
    relay_dist: f64,
    n_theta: usize,
    tol: f64,
) -> Result<CoverageRegion> {
    check_n_theta(n_theta)?;
    let thetas = theta_grid(n_theta);
    let radii: Result<Vec<f64>> = exec::map_collect(n_theta, |k| {
        boundary_radius(params, scheme, relay_dist, thetas[k], tol)
    })
    .into_iter()
    .collect();
    let radii = radii?;
    let empty = radii.iter().all(|&r| r == 0.0);
    Ok(CoverageRegion {
        params: *params,
        scheme,
        relay_dist,
        thetas,
        radii,
        empty,
    })
}

pub(crate) fn check_n_theta(n_theta: usize) -> Result<()> {
    if n_theta >= 16 && n_theta % 2 == 0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name: "n_theta",
            value: n_theta as f64,
            requirement: "must be even and >= 16",
        })
    }
}

impl CoverageRegion {
    /// Region area via the polar integral `(1/2) circ_int r(theta)^2 dtheta`,
    /// composite Simpson over the periodic grid.
    pub fn area(&self) -> f64 {
        simpson_polar_area(&self.radii)
    }

    /// Pointwise containment: every boundary radius of `inner` is within
    /// `slack` of being below this region's radius at the same angle.
    pub fn contains(&self, inner: &CoverageRegion, slack: f64) -> Result<bool> {
        self.check_same_grid(inner)?;
        Ok(self
            .radii
            .iter()
            .zip(&inner.radii)
            .all(|(o, i)| *o >= *i - slack))
    }

    /// Worst-case containment margin `min(outer - inner)` over the grid;
    /// negative when some ray of `inner` pokes out.
    pub fn containment_margin(&self, inner: &CoverageRegion) -> Result<f64> {
        self.check_same_grid(inner)?;
        Ok(self
            .radii
            .iter()
            .zip(&inner.radii)
            .map(|(o, i)| o - i)
            .fold(f64::INFINITY, f64::min))
    }

    fn check_same_grid(&self, other: &CoverageRegion) -> Result<()> {
        if self.thetas.len() != other.thetas.len()
            || self.thetas.iter().zip(&other.thetas).any(|(a, b)| a != b)
        {
            return Err(Error::GridMismatch(format!(
                "{} angles vs {} angles",
                self.thetas.len(),
                other.thetas.len()
            )));
        }
        Ok(())
    }
}

/// `(1/2) circ_int r^2 dtheta` on a uniform periodic grid by composite
/// Simpson (the sample count is even, so the closed loop pairs up exactly).
pub(crate) fn simpson_polar_area(radii: &[f64]) -> f64 {
    let n = radii.len();
    debug_assert!(n >= 2 && n % 2 == 0);
    let h = std::f64::consts::TAU / n as f64;
    let sum: f64 = radii
        .iter()
        .enumerate()
        .map(|(k, r)| if k % 2 == 0 { 2.0 * r * r } else { 4.0 * r * r })
        .sum();
    0.5 * sum * h / 3.0
}
