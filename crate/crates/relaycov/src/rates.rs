//! Achievable rates and the cut-set upper bound for every strategy/model
//! combination, plus the closed-form correlation optimizer for
//! decode-and-forward.
//!
//! All rates are in bits per channel use (base-2 logs). The decode-and-forward
//! expressions maximize over the source-relay correlation coefficient `rho`;
//! the full-duplex optimum is solved in closed form (the two min-terms are
//! monotone in `rho`, so the optimum sits either at `rho = 0` or at their
//! crossing), while the half-duplex optimum is found by bisection on the
//! crossing because the time-shared logs make it transcendental.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{path_gain, ChannelParams, Layout};

/// Relaying strategy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Strategy {
    /// Decode-and-forward: the relay decodes, then cooperates coherently.
    Df,
    /// Compress-and-forward: the relay quantizes its observation.
    Cf,
    /// No relay: direct source-destination transmission.
    Nr,
    /// Cut-set upper bound.
    Ub,
}

/// Channel model the strategy operates in.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ChannelModel {
    FullDuplex,
    /// Relay listens a fraction `listen_fraction` of the time and transmits
    /// the rest.
    HalfDuplex { listen_fraction: f64 },
    /// Random phases known only to receivers: no coherent combining.
    PhaseFading,
    /// Exponentially distributed power fades, fixed per transmission.
    Rayleigh,
}

/// Validated strategy/model pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scheme {
    strategy: Strategy,
    model: ChannelModel,
}

impl Scheme {
    pub fn new(strategy: Strategy, model: ChannelModel) -> Result<Self> {
        if let ChannelModel::HalfDuplex { listen_fraction } = model {
            if !(0.0..=1.0).contains(&listen_fraction) || !listen_fraction.is_finite() {
                return Err(Error::InvalidParameter {
                    name: "listen_fraction",
                    value: listen_fraction,
                    requirement: "must be in [0, 1]",
                });
            }
        }
        let scheme = Self { strategy, model };
        match (strategy, model) {
            (Strategy::Ub, ChannelModel::Rayleigh) => Err(Error::InvalidScheme {
                scheme: format!("{scheme:?}"),
                reason: "no upper-bound expression is implemented for Rayleigh fading",
            }),
            (Strategy::Ub, ChannelModel::HalfDuplex { .. }) => Err(Error::InvalidScheme {
                scheme: format!("{scheme:?}"),
                reason: "no upper-bound expression is implemented for the half-duplex model",
            }),
            _ => Ok(scheme),
        }
    }

    pub fn strategy(&self) -> Strategy {
        self.strategy
    }

    pub fn model(&self) -> ChannelModel {
        self.model
    }

    pub fn df_full() -> Self {
        Self { strategy: Strategy::Df, model: ChannelModel::FullDuplex }
    }
    pub fn cf_full() -> Self {
        Self { strategy: Strategy::Cf, model: ChannelModel::FullDuplex }
    }
    pub fn nr() -> Self {
        Self { strategy: Strategy::Nr, model: ChannelModel::FullDuplex }
    }
    pub fn ub_full() -> Self {
        Self { strategy: Strategy::Ub, model: ChannelModel::FullDuplex }
    }
    pub fn df_half(listen_fraction: f64) -> Result<Self> {
        Self::new(Strategy::Df, ChannelModel::HalfDuplex { listen_fraction })
    }
    pub fn cf_half(listen_fraction: f64) -> Result<Self> {
        Self::new(Strategy::Cf, ChannelModel::HalfDuplex { listen_fraction })
    }
    pub fn df_phase() -> Self {
        Self { strategy: Strategy::Df, model: ChannelModel::PhaseFading }
    }
    pub fn cf_phase() -> Self {
        Self { strategy: Strategy::Cf, model: ChannelModel::PhaseFading }
    }
    pub fn ub_phase() -> Self {
        Self { strategy: Strategy::Ub, model: ChannelModel::PhaseFading }
    }
    pub fn df_rayleigh() -> Self {
        Self { strategy: Strategy::Df, model: ChannelModel::Rayleigh }
    }
    pub fn cf_rayleigh() -> Self {
        Self { strategy: Strategy::Cf, model: ChannelModel::Rayleigh }
    }
    pub fn nr_rayleigh() -> Self {
        Self { strategy: Strategy::Nr, model: ChannelModel::Rayleigh }
    }

    /// True when the rate is a deterministic function of the layout.
    pub fn is_deterministic(&self) -> bool {
        !matches!(self.model, ChannelModel::Rayleigh)
    }

    /// Canonical label, e.g. `df-full`, `cf-half:0.5`, `nr-rayleigh`.
    /// Direct transmission ignores the duplexing model, so every
    /// non-Rayleigh no-relay scheme prints as plain `nr`.
    pub fn label(&self) -> String {
        match (self.strategy, self.model) {
            (Strategy::Nr, ChannelModel::Rayleigh) => "nr-rayleigh".into(),
            (Strategy::Nr, _) => "nr".into(),
            (s, ChannelModel::FullDuplex) => format!("{}-full", strategy_tag(s)),
            (s, ChannelModel::HalfDuplex { listen_fraction }) => {
                format!("{}-half:{}", strategy_tag(s), listen_fraction)
            }
            (s, ChannelModel::PhaseFading) => format!("{}-phase", strategy_tag(s)),
            (s, ChannelModel::Rayleigh) => format!("{}-rayleigh", strategy_tag(s)),
        }
    }

    /// Parse a label such as `df-full` or `cf-half`; `listen_fraction`
    /// supplies (or overrides) the half-duplex time split.
    pub fn parse(label: &str, listen_fraction: Option<f64>) -> Result<Self> {
        let bad = |reason: &'static str| Error::InvalidScheme { scheme: label.to_string(), reason };
        let (head, embedded_t) = match label.split_once(':') {
            Some((h, t)) => {
                let t: f64 = t
                    .parse()
                    .map_err(|_| bad("listen fraction suffix is not a number"))?;
                (h, Some(t))
            }
            None => (label, None),
        };
        let t = listen_fraction.or(embedded_t);
        let (strategy, model_tag) = match head.split_once('-') {
            Some((s, m)) => (s, m),
            None if head == "nr" => ("nr", "full"),
            None => return Err(bad("expected <strategy>-<model>")),
        };
        let strategy = match strategy {
            "df" => Strategy::Df,
            "cf" => Strategy::Cf,
            "nr" => Strategy::Nr,
            "ub" => Strategy::Ub,
            _ => return Err(bad("unknown strategy (expected df, cf, nr or ub)")),
        };
        let model = match model_tag {
            "full" => ChannelModel::FullDuplex,
            "half" => ChannelModel::HalfDuplex {
                listen_fraction: t.ok_or_else(|| bad("half-duplex schemes need a listen fraction"))?,
            },
            "phase" => ChannelModel::PhaseFading,
            "rayleigh" => ChannelModel::Rayleigh,
            _ => return Err(bad("unknown model (expected full, half, phase or rayleigh)")),
        };
        Self::new(strategy, model)
    }

    /// Deterministic rate dispatch. Errors for Rayleigh schemes, whose rates
    /// are random; see [`crate::fading`].
    pub fn evaluate(&self, params: &ChannelParams, layout: &Layout) -> Result<RateResult> {
        match (self.strategy, self.model) {
            (_, ChannelModel::Rayleigh) => Err(Error::RequiresMonteCarlo),
            (Strategy::Nr, _) => Ok(rate_nr(params, layout)),
            (Strategy::Df, ChannelModel::FullDuplex) => Ok(rate_df_full(params, layout)),
            (Strategy::Cf, ChannelModel::FullDuplex) => Ok(rate_cf_full(params, layout)),
            (Strategy::Ub, ChannelModel::FullDuplex) => Ok(rate_ub_full(params, layout)),
            (Strategy::Df, ChannelModel::HalfDuplex { listen_fraction }) => {
                rate_df_half(params, layout, listen_fraction)
            }
            (Strategy::Cf, ChannelModel::HalfDuplex { listen_fraction }) => {
                rate_cf_half(params, layout, listen_fraction)
            }
            (Strategy::Df, ChannelModel::PhaseFading) => Ok(rate_df_phase(params, layout)),
            // Compression does not exploit phase knowledge at the
            // transmitters, so the full-duplex expression carries over.
            (Strategy::Cf, ChannelModel::PhaseFading) => Ok(rate_cf_full(params, layout)),
            (Strategy::Ub, ChannelModel::PhaseFading) => Ok(rate_ub_phase(params, layout)),
            (Strategy::Ub, ChannelModel::HalfDuplex { .. }) => unreachable!("rejected at construction"),
        }
    }
}

fn strategy_tag(s: Strategy) -> &'static str {
    match s {
        Strategy::Df => "df",
        Strategy::Cf => "cf",
        Strategy::Nr => "nr",
        Strategy::Ub => "ub",
    }
}

impl Serialize for Scheme {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.label())
    }
}

impl<'de> Deserialize<'de> for Scheme {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        Scheme::parse(&s, None).map_err(serde::de::Error::custom)
    }
}

/// Which min-term limited a decode-and-forward or cut-set rate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BindingTerm {
    /// The relay-decoding (or broadcast-cut) term was the smaller one.
    RelayDecoding,
    /// The destination (multiple-access) term was the smaller one.
    Destination,
    /// Both terms are equal at the optimum, e.g. at the crossing of the
    /// correlation trade-off.
    Balanced,
}

/// Rate value plus diagnostics of the optimization that produced it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateResult {
    /// Bits per channel use, >= 0.
    pub rate: f64,
    /// Optimal correlation coefficient, for the strategies that optimize one.
    pub rho_star: Option<f64>,
    /// Active min-term, for the strategies built on a min.
    pub binding: Option<BindingTerm>,
    /// Set when the requested expression degenerated to its no-relay limit
    /// (zero relay power, or a half-duplex split of 0 or 1).
    pub degenerate: bool,
}

impl RateResult {
    fn plain(rate: f64) -> Self {
        Self { rate, rho_star: None, binding: None, degenerate: false }
    }
}

/// `log2(1 + snr)`.
#[inline]
fn cap(snr: f64) -> f64 {
    (1.0 + snr).log2()
}

fn classify(first: f64, second: f64) -> BindingTerm {
    let tol = 1e-12 * first.abs().max(second.abs()).max(1.0);
    if first < second - tol {
        BindingTerm::RelayDecoding
    } else if second < first - tol {
        BindingTerm::Destination
    } else {
        BindingTerm::Balanced
    }
}

/// Direct source-destination transmission. The duplexing model is
/// irrelevant: the source transmits the whole time.
pub fn rate_nr(params: &ChannelParams, layout: &Layout) -> RateResult {
    let g = layout.distances();
    RateResult::plain(cap(params.p1 * path_gain(g.source_dest, params.alpha)))
}

/// Max-min terms of the full-duplex decode-and-forward rate: the relay
/// decoding SNR `a`, the non-coherent destination SNR `b` and the coherent
/// cross-term coefficient `c` (all linear).
fn df_full_terms(params: &ChannelParams, layout: &Layout) -> (f64, f64, f64) {
    let g = layout.distances();
    let g12 = path_gain(g.source_relay, params.alpha);
    let g13 = path_gain(g.source_dest, params.alpha);
    let g23 = path_gain(g.relay_dest, params.alpha);
    let a = params.p1 * g12;
    let b = params.p1 * g13 + params.p2 * g23;
    let c = 2.0 * (params.p1 * params.p2 * g13 * g23).sqrt();
    (a, b, c)
}

/// Given the decreasing term `log2(1 + a (1 - rho^2))` and the increasing
/// term `log2(1 + b + c rho)`, return the maximizing `rho` in closed form:
/// zero when the first term already binds, otherwise the crossing root of
/// `a rho^2 + c rho + (b - a) = 0`, clamped to 1.
fn rho_star_crossing(a: f64, b: f64, c: f64) -> f64 {
    if a <= b {
        return 0.0;
    }
    let disc = (c * c + 4.0 * a * (a - b)).sqrt();
    // conjugate form of the positive quadratic root; avoids cancellation
    (2.0 * (a - b) / (c + disc)).clamp(0.0, 1.0)
}

/// Full-duplex decode-and-forward: coherent max-min over the correlation.
pub fn rate_df_full(params: &ChannelParams, layout: &Layout) -> RateResult {
    let (a, b, c) = df_full_terms(params, layout);
    // Without relay power the destination term is flat in rho, so rho = 0
    // is canonical among the maximizers.
    let rho = if params.p2 == 0.0 { 0.0 } else { rho_star_crossing(a, b, c) };
    let first = cap(a * (1.0 - rho * rho));
    let second = cap(b + c * rho);
    RateResult {
        rate: first.min(second),
        rho_star: Some(rho),
        binding: Some(classify(first, second)),
        degenerate: false,
    }
}

/// Full-duplex compress-and-forward with Gaussian quantization.
pub fn rate_cf_full(params: &ChannelParams, layout: &Layout) -> RateResult {
    let g = layout.distances();
    let g12 = path_gain(g.source_relay, params.alpha);
    let g13 = path_gain(g.source_dest, params.alpha);
    let g23 = path_gain(g.relay_dest, params.alpha);
    if params.p2 == 0.0 {
        // compression noise diverges; only the direct path survives
        return RateResult { degenerate: true, ..rate_nr(params, layout) };
    }
    let quant_noise = (params.p1 * (g12 + g13) + 1.0) / (params.p2 * g23);
    RateResult::plain(cap(params.p1 * g12 / (1.0 + quant_noise) + params.p1 * g13))
}

/// Half-duplex decode-and-forward min-terms at correlation `rho`.
fn df_half_terms(params: &ChannelParams, layout: &Layout, t: f64, rho: f64) -> (f64, f64) {
    let g = layout.distances();
    let g12 = path_gain(g.source_relay, params.alpha);
    let g13 = path_gain(g.source_dest, params.alpha);
    let g23 = path_gain(g.relay_dest, params.alpha);
    let first = t * cap(params.p1 * g12) + (1.0 - t) * cap((1.0 - rho * rho) * params.p1 * g13);
    let cross = 2.0 * rho * (params.p1 * params.p2 * g13 * g23).sqrt();
    let second =
        t * cap(params.p1 * g13) + (1.0 - t) * cap(params.p1 * g13 + params.p2 * g23 + cross);
    (first, second)
}

/// Half-duplex decode-and-forward with listen fraction `t`. The first
/// min-term decreases in `rho` and the second increases, so the optimum is
/// found by bisecting their crossing.
pub fn rate_df_half(params: &ChannelParams, layout: &Layout, t: f64) -> Result<RateResult> {
    check_listen_fraction(t)?;
    let eval = |rho: f64| df_half_terms(params, layout, t, rho);

    let (f1_0, f2_0) = eval(0.0);
    if f1_0 <= f2_0 {
        return Ok(RateResult {
            rate: f1_0,
            rho_star: Some(0.0),
            binding: Some(classify(f1_0, f2_0)),
            degenerate: false,
        });
    }
    let (f1_1, f2_1) = eval(1.0);
    if f1_1 >= f2_1 {
        // destination term never catches up; it is the min everywhere and
        // is maximized at full correlation
        return Ok(RateResult {
            rate: f2_1,
            rho_star: Some(1.0),
            binding: Some(classify(f1_1, f2_1)),
            degenerate: false,
        });
    }
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    while hi - lo > 1e-12 {
        let mid = 0.5 * (lo + hi);
        let (f1, f2) = eval(mid);
        if f1 >= f2 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let rho = 0.5 * (lo + hi);
    let (f1, f2) = eval(rho);
    Ok(RateResult {
        rate: f1.min(f2),
        rho_star: Some(rho),
        binding: Some(classify(f1, f2)),
        degenerate: false,
    })
}

/// Half-duplex compress-and-forward with listen fraction `t`. The split
/// endpoints `t = 0` and `t = 1` degenerate to direct transmission (the
/// compression-noise expression is singular there) and are flagged.
pub fn rate_cf_half(params: &ChannelParams, layout: &Layout, t: f64) -> Result<RateResult> {
    check_listen_fraction(t)?;
    if t == 0.0 || t == 1.0 || params.p2 == 0.0 {
        return Ok(RateResult { degenerate: true, ..rate_nr(params, layout) });
    }
    let g = layout.distances();
    let g12 = path_gain(g.source_relay, params.alpha);
    let g13 = path_gain(g.source_dest, params.alpha);
    let g23 = path_gain(g.relay_dest, params.alpha);
    let direct = params.p1 * g13;
    let boost = (1.0 + params.p2 * g23 / (1.0 + direct)).powf((1.0 - t) / t) - 1.0;
    let quant_noise = (1.0 + params.p1 * (g12 + g13)) / ((1.0 + direct) * boost);
    let listen = cap(direct + params.p1 * g12 / (1.0 + quant_noise));
    Ok(RateResult::plain(t * listen + (1.0 - t) * cap(direct)))
}

/// Phase-fading decode-and-forward: no coherent combining, i.e. the
/// full-duplex expression pinned at `rho = 0`.
pub fn rate_df_phase(params: &ChannelParams, layout: &Layout) -> RateResult {
    let (a, b, _) = df_full_terms(params, layout);
    let (first, second) = (cap(a), cap(b));
    RateResult {
        rate: first.min(second),
        rho_star: Some(0.0),
        binding: Some(classify(first, second)),
        degenerate: false,
    }
}

/// Phase-fading cut-set upper bound: min of the broadcast cut and the
/// multiple-access cut, with no coherent term on either.
pub fn rate_ub_phase(params: &ChannelParams, layout: &Layout) -> RateResult {
    let g = layout.distances();
    let g12 = path_gain(g.source_relay, params.alpha);
    let g13 = path_gain(g.source_dest, params.alpha);
    let g23 = path_gain(g.relay_dest, params.alpha);
    let first = cap(params.p1 * (g12 + g13));
    let second = cap(params.p1 * g13 + params.p2 * g23);
    RateResult {
        rate: first.min(second),
        rho_star: None,
        binding: Some(classify(first, second)),
        degenerate: false,
    }
}

/// Full-duplex cut-set upper bound, optimized over the input correlation
/// the same way as [`rate_df_full`] but with the broadcast cut
/// `log2(1 + (1 - rho^2) p1 (g12 + g13))` as the first term. Used for
/// plotting reference curves; it dominates both achievable strategies.
pub fn rate_ub_full(params: &ChannelParams, layout: &Layout) -> RateResult {
    let g = layout.distances();
    let g12 = path_gain(g.source_relay, params.alpha);
    let g13 = path_gain(g.source_dest, params.alpha);
    let g23 = path_gain(g.relay_dest, params.alpha);
    let a = params.p1 * (g12 + g13);
    let b = params.p1 * g13 + params.p2 * g23;
    let c = 2.0 * (params.p1 * params.p2 * g13 * g23).sqrt();
    let rho = if params.p2 == 0.0 { 0.0 } else { rho_star_crossing(a, b, c) };
    let first = cap(a * (1.0 - rho * rho));
    let second = cap(b + c * rho);
    RateResult {
        rate: first.min(second),
        rho_star: Some(rho),
        binding: Some(classify(first, second)),
        degenerate: false,
    }
}

fn check_listen_fraction(t: f64) -> Result<()> {
    if (0.0..=1.0).contains(&t) && t.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name: "listen_fraction",
            value: t,
            requirement: "must be in [0, 1]",
        })
    }
}
