//! Coverage analysis for the three-node Gaussian relay channel.
//!
//! A source at the origin talks to a destination with the help of a single
//! relay placed at distance `d` on the positive x-axis. Signal power decays
//! as `1/dist^alpha`. Given a target rate `R`, each relaying strategy
//! (decode-and-forward, compress-and-forward, direct transmission, and the
//! cut-set upper bound) covers a region of destination locations, and this
//! crate computes those regions, their areas, analytic area bounds, and
//! outage-based regions under Rayleigh fading.
//!
//! The main entry points:
//!
//! * [`rates`] — closed-form achievable rates for every strategy under the
//!   full-duplex, half-duplex and phase-fading models, plus the critical
//!   relay distances at which decode-and-forward stops working.
//! * [`coverage`] — polar boundary extraction, region areas and containment.
//! * [`bounds`] — inner-ellipse / outer-conic area bounds for the
//!   decode-and-forward region at path-loss exponents 2 and 4, backed by a
//!   Ferrari quartic solver ([`quartic`]).
//! * [`fading`] — reproducible Monte Carlo outage probabilities and outage
//!   coverage regions under Rayleigh fading.
//! * [`verify`] — executable numerical checks of the containment and
//!   area-bound claims, reported as machine-readable pass/fail cases.
//! * [`io`] — CSV/JSON serialization of regions, bounds and reports.
//!
//! With the default `parallel` feature, independent boundary rays and
//! Monte Carlo streams are evaluated on the rayon thread pool; results are
//! identical to the sequential fallback.

pub mod bounds;
pub mod coverage;
mod error;
mod exec;
pub mod fading;
pub mod geometry;
pub mod io;
pub mod quartic;
pub mod rates;
pub mod verify;

pub use error::{Error, Result};
pub use geometry::{path_gain, ChannelParams, Distances, Layout, DIST_GUARD};
pub use rates::{BindingTerm, ChannelModel, RateResult, Scheme, Strategy};

pub use coverage::{CoverageRegion, DEFAULT_N_THETA, DEFAULT_TOL};
pub use fading::{FadeDraw, FadingConfig, OutageEstimate, OutageRegion};
