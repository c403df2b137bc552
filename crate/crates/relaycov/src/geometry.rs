//! Node layout, pairwise distances and path-loss gains.
//!
//! The source sits at the origin and the relay at `(d, 0)`. The destination
//! is parameterized in polar form by its distance `x` from the source and
//! the angle `theta` it makes with the source-relay axis, so the three
//! pairwise distances are `d`, `x` and `sqrt(d^2 + x^2 - 2 d x cos(theta))`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Distances below this are clamped before exponentiation so that
/// co-located nodes produce huge but finite gains. Keeps the `d -> 0`
/// limits monotone instead of overflowing to infinity.
pub const DIST_GUARD: f64 = 1e-9;

/// Power budget and link requirements shared by every computation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelParams {
    /// Source transmit power (linear scale, > 0).
    pub p1: f64,
    /// Relay transmit power (linear scale, >= 0).
    pub p2: f64,
    /// Path-loss exponent (>= 2).
    pub alpha: f64,
    /// Target rate in bits per channel use (> 0).
    pub rate: f64,
}

impl ChannelParams {
    pub fn new(p1: f64, p2: f64, alpha: f64, rate: f64) -> Result<Self> {
        fn check(name: &'static str, value: f64, ok: bool, requirement: &'static str) -> Result<()> {
            if value.is_finite() && ok {
                Ok(())
            } else {
                Err(Error::InvalidParameter { name, value, requirement })
            }
        }
        check("p1", p1, p1 > 0.0, "must be finite and > 0")?;
        check("p2", p2, p2 >= 0.0, "must be finite and >= 0")?;
        check("alpha", alpha, alpha >= 2.0, "must be finite and >= 2")?;
        check("rate", rate, rate > 0.0, "must be finite and > 0")?;
        Ok(Self { p1, p2, alpha, rate })
    }

    /// Largest source-relay distance at which the relay can still decode
    /// the target rate: `(p1 / (2^rate - 1))^(1/alpha)`.
    pub fn critical_distance(&self) -> f64 {
        (self.p1 / (2f64.powf(self.rate) - 1.0)).powf(1.0 / self.alpha)
    }

    /// Half-duplex analog at listen fraction 1/2:
    /// `(p1 / (2^(2 rate) - 1))^(1/alpha)`. Always below
    /// [`critical_distance`](Self::critical_distance).
    pub fn critical_distance_half(&self) -> f64 {
        (self.p1 / (2f64.powf(2.0 * self.rate) - 1.0)).powf(1.0 / self.alpha)
    }

    /// Rayleigh-fading analog: the distance beyond which the relay fails to
    /// decode with probability above `epsilon`.
    pub fn critical_distance_outage(&self, epsilon: f64) -> Result<f64> {
        if !(epsilon > 0.0 && epsilon < 1.0) || !epsilon.is_finite() {
            return Err(Error::InvalidParameter {
                name: "epsilon",
                value: epsilon,
                requirement: "must be in (0, 1)",
            });
        }
        Ok((-self.p1 * (1.0 - epsilon).ln() / (2f64.powf(self.rate) - 1.0)).powf(1.0 / self.alpha))
    }
}

/// Relay and destination placement relative to the source.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Layout {
    /// Source-relay distance (> 0).
    pub relay_dist: f64,
    /// Source-destination distance (>= 0).
    pub dest_dist: f64,
    /// Destination angle in radians, normalized to [-pi, pi].
    pub dest_angle: f64,
}

/// The three pairwise node distances.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Distances {
    pub source_relay: f64,
    pub source_dest: f64,
    pub relay_dest: f64,
}

impl Layout {
    pub fn new(relay_dist: f64, dest_dist: f64, dest_angle: f64) -> Result<Self> {
        if !relay_dist.is_finite() || relay_dist <= 0.0 {
            return Err(Error::InvalidParameter {
                name: "relay_dist",
                value: relay_dist,
                requirement: "must be finite and > 0",
            });
        }
        if !dest_dist.is_finite() || dest_dist < 0.0 {
            return Err(Error::InvalidParameter {
                name: "dest_dist",
                value: dest_dist,
                requirement: "must be finite and >= 0",
            });
        }
        if !dest_angle.is_finite() {
            return Err(Error::InvalidParameter {
                name: "dest_angle",
                value: dest_angle,
                requirement: "must be finite",
            });
        }
        Ok(Self {
            relay_dist,
            dest_dist,
            dest_angle: normalize_angle(dest_angle),
        })
    }

    /// Pairwise distances; the relay-destination leg comes from the cosine
    /// rule and is clamped at zero against rounding.
    pub fn distances(&self) -> Distances {
        let d = self.relay_dist;
        let x = self.dest_dist;
        let sq = d * d + x * x - 2.0 * d * x * self.dest_angle.cos();
        Distances {
            source_relay: d,
            source_dest: x,
            relay_dest: sq.max(0.0).sqrt(),
        }
    }
}

/// Wrap an angle into [-pi, pi].
pub fn normalize_angle(angle: f64) -> f64 {
    use std::f64::consts::{PI, TAU};
    let a = angle.rem_euclid(TAU);
    if a > PI {
        a - TAU
    } else {
        a
    }
}

/// Power attenuation `1/dist^alpha`, with `dist` clamped at [`DIST_GUARD`].
pub fn path_gain(dist: f64, alpha: f64) -> f64 {
    dist.max(DIST_GUARD).powf(-alpha)
}

/// Rescale powers to a unit source (`p1 -> 1`, `p2 -> p2/p1`) and shrink all
/// node coordinates by `p1^(1/alpha)`. Every achievable rate is invariant
/// under this substitution, which is what lets sweeps fix `p1 = 1` without
/// loss of generality.
pub fn normalize_unit_source(params: &ChannelParams, layout: &Layout) -> (ChannelParams, Layout) {
    let scale = params.p1.powf(-1.0 / params.alpha);
    (
        ChannelParams {
            p1: 1.0,
            p2: params.p2 / params.p1,
            alpha: params.alpha,
            rate: params.rate,
        },
        Layout {
            relay_dist: layout.relay_dist * scale,
            dest_dist: layout.dest_dist * scale,
            dest_angle: layout.dest_angle,
        },
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    #[test]
    fn equilateral_distances() {
        let l = Layout::new(1.0, 1.0, PI / 3.0).unwrap();
        let d = l.distances();
        assert_relative_eq!(d.source_relay, 1.0);
        assert_relative_eq!(d.source_dest, 1.0);
        assert_relative_eq!(d.relay_dest, 1.0, max_relative = 1e-15);
    }

    #[test]
    fn destination_at_source() {
        let l = Layout::new(1.0, 0.0, 2.3).unwrap();
        let d = l.distances();
        assert_eq!(d.source_dest, 0.0);
        assert_relative_eq!(d.relay_dest, 1.0, max_relative = 1e-15);
    }

    #[test]
    fn right_angle_matches_cartesian() {
        // relay at (2, 0), destination at (0, 3): separation sqrt(13)
        let l = Layout::new(2.0, 3.0, PI / 2.0).unwrap();
        let d = l.distances();
        assert_relative_eq!(d.relay_dest, 13f64.sqrt(), max_relative = 1e-15);
    }

    #[test]
    fn gains() {
        assert_eq!(path_gain(1.0, 3.52), 1.0);
        assert_eq!(path_gain(2.0, 2.0), 0.25);
        // 50-digit evaluation of 1.10663^-3.52
        assert_relative_eq!(path_gain(1.10663, 3.52), 0.70002155513832444, max_relative = 1e-14);
        // guard keeps co-located nodes finite
        assert!(path_gain(0.0, 6.0).is_finite());
        assert_eq!(path_gain(0.0, 2.0), path_gain(1e-12, 2.0));
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(Layout::new(f64::NAN, 1.0, 0.0).is_err());
        assert!(Layout::new(1.0, f64::INFINITY, 0.0).is_err());
        assert!(Layout::new(0.0, 1.0, 0.0).is_err());
        assert!(Layout::new(1.0, -1.0, 0.0).is_err());
        assert!(Layout::new(1.0, 1.0, f64::NAN).is_err());
        assert!(ChannelParams::new(0.0, 1.0, 2.0, 1.0).is_err());
        assert!(ChannelParams::new(1.0, -0.5, 2.0, 1.0).is_err());
        assert!(ChannelParams::new(1.0, 1.0, 1.5, 1.0).is_err());
        assert!(ChannelParams::new(1.0, 1.0, 2.0, 0.0).is_err());
    }

    #[test]
    fn angle_normalization() {
        assert_relative_eq!(Layout::new(1.0, 1.0, 3.0 * PI).unwrap().dest_angle, PI);
        assert_relative_eq!(Layout::new(1.0, 1.0, -PI / 2.0).unwrap().dest_angle, -PI / 2.0);
        let a = Layout::new(1.0, 1.0, 7.5).unwrap().dest_angle;
        assert!((-PI..=PI).contains(&a));
    }

    #[test]
    fn critical_distances() {
        // exact: p1/(2^R - 1) = 1
        let p = ChannelParams::new(1.0, 1.0, 2.0, 1.0).unwrap();
        assert_relative_eq!(p.critical_distance(), 1.0);
        let p = ChannelParams::new(10.0, 10.0, 2.0, 1.0).unwrap();
        assert_relative_eq!(p.critical_distance(), 10f64.sqrt(), max_relative = 1e-15);
        // 50-digit evaluation of (10/7)^(1/3.52)
        let p = ChannelParams::new(10.0, 10.0, 3.52, 3.0).unwrap();
        assert_relative_eq!(p.critical_distance(), 1.1066396807223224, max_relative = 1e-14);
        // half-duplex analog: 3/(2^2 - 1) = 1
        let p = ChannelParams::new(3.0, 1.0, 2.0, 1.0).unwrap();
        assert_relative_eq!(p.critical_distance_half(), 1.0);
        // 50-digit evaluation of (10/63)^(1/3.52), and the ordering d'_c < d_c
        let p = ChannelParams::new(10.0, 10.0, 3.52, 3.0).unwrap();
        assert_relative_eq!(p.critical_distance_half(), 0.5928087654554274, max_relative = 1e-14);
        assert!(p.critical_distance_half() < p.critical_distance());
    }

    #[test]
    fn outage_critical_distance() {
        // 50-digit evaluation of (3 * -ln(0.65))^(1/3.52)
        let p = ChannelParams::new(3.0, 0.3, 3.52, 1.0).unwrap();
        assert_relative_eq!(
            p.critical_distance_outage(0.35).unwrap(),
            1.0755781417356297,
            max_relative = 1e-14
        );
        // -ln(1 - eps) = 1 at eps = 1 - 1/e
        let p = ChannelParams::new(1.0, 1.0, 2.0, 1.0).unwrap();
        let eps = 1.0 - (-1f64).exp();
        assert_relative_eq!(p.critical_distance_outage(eps).unwrap(), 1.0, max_relative = 1e-15);
        // eps -> 0 collapses the distance
        assert!(p.critical_distance_outage(1e-12).unwrap() < 1e-5);
        assert!(p.critical_distance_outage(0.0).is_err());
        assert!(p.critical_distance_outage(1.0).is_err());
    }

    #[test]
    fn unit_source_normalization_scales_geometry() {
        let params = ChannelParams::new(10.0, 3.0, 3.52, 2.0).unwrap();
        let layout = Layout::new(0.8, 1.7, 0.9).unwrap();
        let (np, nl) = normalize_unit_source(&params, &layout);
        assert_eq!(np.p1, 1.0);
        assert_relative_eq!(np.p2, 0.3, max_relative = 1e-15);
        let s = 10f64.powf(-1.0 / 3.52);
        assert_relative_eq!(nl.relay_dist, 0.8 * s, max_relative = 1e-15);
        assert_relative_eq!(nl.dest_dist, 1.7 * s, max_relative = 1e-15);
    }
}
