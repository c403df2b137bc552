//! Rayleigh-fading outage probabilities and outage coverage regions by
//! Monte Carlo.
//!
//! Fade powers are unit-mean exponentials, fixed for the duration of a
//! transmission, known to receivers only. Conditioned on the fades the
//! channel behaves like the phase-fading model, so per-realization rates
//! substitute the faded gains into the phase-fading (no coherent combining)
//! expressions. Draws come from counter-based ChaCha streams keyed by
//! `(seed, stream_id)`, so parallel rays consume disjoint, scheduling-
//! independent substreams and every result is bit-reproducible.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::coverage::{check_n_theta, theta_grid, CoverageRegion};
use crate::error::{Error, Result};
use crate::exec;
use crate::geometry::{path_gain, ChannelParams, Layout};
use crate::rates::{ChannelModel, Scheme, Strategy};

/// Bisection resolution for outage boundaries. Finite-sample outage
/// estimates are piecewise constant in the destination distance, so there
/// is nothing to gain below the statistical noise floor.
pub const OUTAGE_X_TOL: f64 = 1e-3;

const MAX_ITERS: usize = 200;
const INNER_SCAN: usize = 64;

/// Monte Carlo configuration for outage estimation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FadingConfig {
    /// Maximum tolerable outage probability, in (0, 1).
    pub epsilon: f64,
    /// Draws per estimate (>= 1000).
    pub n_samples: usize,
    /// Base seed.
    pub seed: u64,
    /// Substream index; parallel consumers derive disjoint streams from it.
    pub stream_id: u64,
}

impl FadingConfig {
    pub fn new(epsilon: f64, n_samples: usize, seed: u64, stream_id: u64) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon < 1.0) || !epsilon.is_finite() {
            return Err(Error::InvalidParameter {
                name: "epsilon",
                value: epsilon,
                requirement: "must be in (0, 1)",
            });
        }
        if n_samples < 1000 {
            return Err(Error::InvalidParameter {
                name: "n_samples",
                value: n_samples as f64,
                requirement: "must be >= 1000",
            });
        }
        Ok(Self { epsilon, n_samples, seed, stream_id })
    }

    /// Configuration for one boundary ray: same seed and sample count, a
    /// disjoint substream. Ray `k` gets `stream_id + 1 + k`.
    pub fn for_ray(&self, ray: usize) -> Self {
        Self {
            stream_id: self.stream_id.wrapping_add(1).wrapping_add(ray as u64),
            ..*self
        }
    }
}

/// One joint realization of the three fade powers (unit-mean exponential).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FadeDraw {
    pub source_relay: f64,
    pub source_dest: f64,
    pub relay_dest: f64,
}

/// Outage estimate with its binomial standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OutageEstimate {
    pub probability: f64,
    pub std_error: f64,
}

/// Coverage region under an outage constraint, with the outage estimate at
/// each boundary point.
#[derive(Debug, Clone, Serialize)]
pub struct OutageRegion {
    pub region: CoverageRegion,
    pub config: FadingConfig,
    pub boundary_outage: Vec<OutageEstimate>,
}

#[inline]
fn unit_exponential(rng: &mut ChaCha8Rng) -> f64 {
    // uniform in [0, 1) from the top 53 bits, then the inverse CDF
    let u = (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64);
    -(1.0 - u).ln()
}

/// Draw `count` joint fade realizations. Deterministic in
/// `(seed, stream_id)`.
pub fn sample_fades(config: &FadingConfig, count: usize) -> Vec<FadeDraw> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    rng.set_stream(config.stream_id);
    (0..count)
        .map(|_| FadeDraw {
            source_relay: unit_exponential(&mut rng),
            source_dest: unit_exponential(&mut rng),
            relay_dest: unit_exponential(&mut rng),
        })
        .collect()
}

/// Effective SNR of one realization (rate = log2(1 + snr)). Inputs are the
/// faded link SNRs `h^2 * p / dist^alpha`.
#[inline]
fn effective_snr(strategy: Strategy, relay_snr: f64, direct_snr: f64, hop_snr: f64) -> f64 {
    match strategy {
        Strategy::Nr => direct_snr,
        // no transmitter phase knowledge: the relay decodes, then the two
        // paths add power without a coherent term
        Strategy::Df => relay_snr.min(direct_snr + hop_snr),
        Strategy::Cf => {
            let quant_noise = (relay_snr + direct_snr + 1.0) / hop_snr;
            relay_snr / (1.0 + quant_noise) + direct_snr
        }
        Strategy::Ub => unreachable!("rejected before dispatch"),
    }
}

/// Achievable rate of one fade realization, in bits per channel use.
pub fn realization_rate(
    params: &ChannelParams,
    strategy: Strategy,
    layout: &Layout,
    fade: &FadeDraw,
) -> Result<f64> {
    if strategy == Strategy::Ub {
        return Err(Error::InvalidScheme {
            scheme: "ub-rayleigh".into(),
            reason: "no upper-bound expression is implemented for Rayleigh fading",
        });
    }
    let g = layout.distances();
    let relay_snr = fade.source_relay * params.p1 * path_gain(g.source_relay, params.alpha);
    let direct_snr = fade.source_dest * params.p1 * path_gain(g.source_dest, params.alpha);
    let hop_snr = fade.relay_dest * params.p2 * path_gain(g.relay_dest, params.alpha);
    Ok((1.0 + effective_snr(strategy, relay_snr, direct_snr, hop_snr)).log2())
}

fn require_rayleigh(scheme: Scheme) -> Result<Strategy> {
    match scheme.model() {
        ChannelModel::Rayleigh => Ok(scheme.strategy()),
        _ => Err(Error::RequiresRayleigh { scheme: scheme.label() }),
    }
}

/// Fraction of realizations whose rate falls below the target, over fresh
/// draws from `config`.
pub fn outage_probability(
    params: &ChannelParams,
    scheme: Scheme,
    layout: &Layout,
    config: &FadingConfig,
) -> Result<OutageEstimate> {
    let strategy = require_rayleigh(scheme)?;
    let fades = sample_fades(config, config.n_samples);
    Ok(outage_over(params, strategy, layout, &fades))
}

/// Outage over a fixed set of draws (the common-random-number primitive the
/// boundary search builds on). Counting happens in linear SNR space: the
/// rate misses the target iff the effective SNR misses `2^rate - 1`.
fn outage_over(
    params: &ChannelParams,
    strategy: Strategy,
    layout: &Layout,
    fades: &[FadeDraw],
) -> OutageEstimate {
    let g = layout.distances();
    let c12 = params.p1 * path_gain(g.source_relay, params.alpha);
    let c13 = params.p1 * path_gain(g.source_dest, params.alpha);
    let c23 = params.p2 * path_gain(g.relay_dest, params.alpha);
    let threshold = 2f64.powf(params.rate) - 1.0;
    let failures = fades
        .iter()
        .filter(|f| {
            effective_snr(
                strategy,
                f.source_relay * c12,
                f.source_dest * c13,
                f.relay_dest * c23,
            ) < threshold
        })
        .count();
    let p = failures as f64 / fades.len() as f64;
    OutageEstimate {
        probability: p,
        std_error: (p * (1.0 - p) / fades.len() as f64).sqrt(),
    }
}

/// Outage coverage region: per ray, the largest destination distance whose
/// outage stays within `epsilon`. Each ray reuses one set of draws across
/// the whole search (common random numbers), under which the empirical
/// outage is non-decreasing in the distance beyond the relay ring and the
/// bisection is exact at the sample level.
pub fn outage_region(
    params: &ChannelParams,
    scheme: Scheme,
    relay_dist: f64,
    config: &FadingConfig,
    n_theta: usize,
) -> Result<OutageRegion> {
    let strategy = require_rayleigh(scheme)?;
    check_n_theta(n_theta)?;
    if !(relay_dist > 0.0) || !relay_dist.is_finite() {
        return Err(Error::InvalidParameter {
            name: "relay_dist",
            value: relay_dist,
            requirement: "must be finite and > 0",
        });
    }
    let thetas = theta_grid(n_theta);
    let rays: Result<Vec<(f64, OutageEstimate)>> = exec::map_collect(n_theta, |k| {
        ray_boundary(params, strategy, relay_dist, thetas[k], &config.for_ray(k))
    })
    .into_iter()
    .collect();
    let rays = rays?;
    let (radii, boundary_outage): (Vec<f64>, Vec<OutageEstimate>) = rays.into_iter().unzip();
    let empty = radii.iter().all(|&r| r == 0.0);
    Ok(OutageRegion {
        region: CoverageRegion {
            params: *params,
            scheme,
            relay_dist,
            thetas,
            radii,
            empty,
        },
        config: *config,
        boundary_outage,
    })
}

fn ray_boundary(
    params: &ChannelParams,
    strategy: Strategy,
    relay_dist: f64,
    theta: f64,
    ray_config: &FadingConfig,
) -> Result<(f64, OutageEstimate)> {
    let epsilon = ray_config.epsilon;
    let fades = sample_fades(ray_config, ray_config.n_samples);
    let outage_at = |x: f64| -> Result<OutageEstimate> {
        let layout = Layout::new(relay_dist, x, theta)?;
        Ok(outage_over(params, strategy, &layout, &fades))
    };
    let covered = |x: f64| -> Result<bool> { Ok(outage_at(x)?.probability <= epsilon) };

    if !covered(0.0)? {
        return Ok((0.0, outage_at(0.0)?));
    }

    let (mut lo, mut hi);
    if covered(relay_dist)? {
        lo = relay_dist;
        hi = relay_dist * 2.0;
        let mut iters = 0;
        while covered(hi)? {
            lo = hi;
            hi *= 2.0;
            iters += 1;
            if iters > MAX_ITERS || !hi.is_finite() {
                return Err(Error::NumericFailure {
                    context: "outage_region",
                    detail: format!("bracket never closed along theta = {theta}"),
                });
            }
        }
    } else {
        let step = relay_dist / INNER_SCAN as f64;
        lo = 0.0;
        hi = relay_dist;
        for k in (0..INNER_SCAN).rev() {
            let x = step * k as f64;
            if covered(x)? {
                lo = x;
                hi = step * (k + 1) as f64;
                break;
            }
        }
    }

    let mut iters = 0;
    while hi - lo > OUTAGE_X_TOL {
        let mid = 0.5 * (lo + hi);
        if covered(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
        iters += 1;
        if iters > MAX_ITERS {
            return Err(Error::NumericFailure {
                context: "outage_region",
                detail: format!("bisection stalled along theta = {theta}"),
            });
        }
    }
    let radius = 0.5 * (lo + hi);
    Ok((radius, outage_at(radius)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    fn fig8_params() -> ChannelParams {
        ChannelParams::new(3.0, 0.3, 3.52, 1.0).unwrap()
    }

    fn config(eps: f64, n: usize) -> FadingConfig {
        FadingConfig::new(eps, n, 42, 0).unwrap()
    }

    #[test]
    fn draws_are_deterministic_and_unit_mean() {
        let c = config(0.35, 1000);
        let a = sample_fades(&c, 500);
        let b = sample_fades(&c, 500);
        assert_eq!(a, b);
        let other = sample_fades(&FadingConfig { stream_id: 7, ..c }, 500);
        assert_ne!(a, other);

        let big = sample_fades(&c, 1_000_000);
        let mean = big.iter().map(|f| f.source_relay).sum::<f64>() / big.len() as f64;
        assert_abs_diff_eq!(mean, 1.0, epsilon = 5e-3);
        assert!(big.iter().all(|f| f.source_relay >= 0.0));
    }

    #[test]
    fn nr_outage_matches_exponential_tail() {
        // direct link fails iff the fade power drops below
        // (2^R - 1) x^alpha / p1, an exponential tail in closed form
        let p = fig8_params();
        let c = config(0.35, 100_000);
        for x in [0.8, 1.0755781417356297, 1.4] {
            let l = Layout::new(0.9, x, 0.3).unwrap();
            let est = outage_probability(&p, Scheme::nr_rayleigh(), &l, &c).unwrap();
            let exact = 1.0 - (-(2f64.powf(p.rate) - 1.0) * x.powf(p.alpha) / p.p1).exp();
            assert_abs_diff_eq!(est.probability, exact, epsilon = 3.0 * est.std_error.max(1e-4));
        }
    }

    #[test]
    fn relay_decode_leg_crosses_epsilon_at_outage_critical_distance() {
        // with the destination next to the source, only the relay-decoding
        // leg of decode-and-forward can fail; at the outage-critical relay
        // distance that failure probability is exactly epsilon
        let p = fig8_params();
        let eps = 0.35;
        let c = config(eps, 200_000);
        let d = p.critical_distance_outage(eps).unwrap();
        let l = Layout::new(d, 1e-6, 0.0).unwrap();
        let est = outage_probability(&p, Scheme::df_rayleigh(), &l, &c).unwrap();
        assert_abs_diff_eq!(est.probability, eps, epsilon = 3.0 * est.std_error);
    }

    #[test]
    fn outage_vanishes_with_power() {
        let p = ChannelParams::new(1e9, 1e9, 2.0, 1.0).unwrap();
        let l = Layout::new(1.0, 2.0, 0.5).unwrap();
        let est = outage_probability(&p, Scheme::cf_rayleigh(), &l, &config(0.1, 10_000)).unwrap();
        assert!(est.probability < 1e-3);
    }

    #[test]
    fn nr_outage_region_is_the_closed_form_disk() {
        let p = fig8_params();
        let eps = 0.35;
        let c = config(eps, 100_000);
        let reg = outage_region(&p, Scheme::nr_rayleigh(), 0.9, &c, 16).unwrap();
        let expected = p.critical_distance_outage(eps).unwrap();
        // translate the binomial noise into a radius slack through the
        // slope of the closed-form outage curve at the boundary
        let slope = (1.0 - eps) * (2f64.powf(p.rate) - 1.0) / p.p1
            * p.alpha
            * expected.powf(p.alpha - 1.0);
        let sigma_x = 3.0 * (eps * (1.0 - eps) / c.n_samples as f64).sqrt() / slope;
        for &r in &reg.region.radii {
            assert_abs_diff_eq!(r, expected, epsilon = sigma_x + OUTAGE_X_TOL);
        }
    }

    #[test]
    fn regions_reproduce_bit_exactly() {
        let p = fig8_params();
        let c = config(0.35, 1000);
        let a = outage_region(&p, Scheme::df_rayleigh(), 0.9, &c, 16).unwrap();
        let b = outage_region(&p, Scheme::df_rayleigh(), 0.9, &c, 16).unwrap();
        assert_eq!(a.region.radii, b.region.radii);
        let c2 = FadingConfig::new(0.35, 1000, 43, 0).unwrap();
        let other = outage_region(&p, Scheme::df_rayleigh(), 0.9, &c2, 16).unwrap();
        assert_ne!(a.region.radii, other.region.radii);
    }

    #[test]
    fn permissive_epsilon_reaches_the_last_covered_sample() {
        // with epsilon this close to 1 a point is covered as long as a
        // single draw still meets the rate, so the no-relay boundary lands
        // on the radius supported by the largest sampled fade
        let p = fig8_params();
        let eps = 1.0 - 1e-9;
        let c = FadingConfig::new(eps, 1000, 42, 0).unwrap();
        let reg = outage_region(&p, Scheme::nr_rayleigh(), 0.9, &c, 16).unwrap();
        for (k, &r) in reg.region.radii.iter().enumerate() {
            let fades = sample_fades(&c.for_ray(k), c.n_samples);
            let h_max = fades.iter().map(|f| f.source_dest).fold(0.0, f64::max);
            let expected = (p.p1 * h_max / (2f64.powf(p.rate) - 1.0)).powf(1.0 / p.alpha);
            assert_abs_diff_eq!(r, expected, epsilon = 2.0 * OUTAGE_X_TOL);
        }
    }

    #[test]
    fn config_validation() {
        assert!(FadingConfig::new(0.0, 1000, 1, 0).is_err());
        assert!(FadingConfig::new(1.0, 1000, 1, 0).is_err());
        assert!(FadingConfig::new(0.5, 999, 1, 0).is_err());
        let p = fig8_params();
        let l = Layout::new(1.0, 1.0, 0.0).unwrap();
        assert!(outage_probability(&p, Scheme::nr(), &l, &config(0.1, 1000)).is_err());
        assert!(realization_rate(
            &p,
            Strategy::Ub,
            &l,
            &FadeDraw { source_relay: 1.0, source_dest: 1.0, relay_dest: 1.0 }
        )
        .is_err());
    }
}
