//! Pulse-compression time-domain reflectometry for power distribution
//! networks.
//!
//! Every numeric type is generic over [`Real`] (`f32` or `f64`); the `*64`
//! aliases below fix the usual double-precision instantiation.

// NaN must fail parameter checks, so validation uses negated comparisons.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod autocorr;
pub mod channel;
pub mod dsp;
pub mod error;
pub mod io;
pub mod metrics;
pub mod numeric;
pub mod pulses;
pub mod reflectometry;
pub mod scalar;
pub mod scenarios;
pub mod signal;

pub use error::{Error, Result};
pub use scalar::Real;

pub type SampledSignal64 = signal::SampledSignal<f64>;
pub type PulseSpec64 = pulses::PulseSpec<f64>;
pub type AcfCurve64 = autocorr::AcfCurve<f64>;
pub type ClosedFormAcf64 = autocorr::ClosedFormAcf<f64>;
pub type CableParams64 = channel::CableParams<f64>;
pub type LoadModel64 = channel::LoadModel<f64>;
pub type NetworkTopology64 = channel::NetworkTopology<f64>;
pub type FrequencyGrid64 = channel::FrequencyGrid<f64>;
pub type Reflectogram64 = reflectometry::Reflectogram<f64>;
pub type MetricsConfig64 = metrics::MetricsConfig<f64>;
pub type CablePreset64 = scenarios::CablePreset<f64>;

pub type SampledSignal32 = signal::SampledSignal<f32>;
pub type PulseSpec32 = pulses::PulseSpec<f32>;
pub type Reflectogram32 = reflectometry::Reflectogram<f32>;
