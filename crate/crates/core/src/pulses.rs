//! The four PLC pulse families, their occupied bandwidths and
//! energy-normalized sampled transmit signals.
//!
//! Every pulse lives on `-T/2 <= t <= T/2` and is zero outside:
//!
//! | family   | p(t)                                              | T      | B            |
//! |----------|---------------------------------------------------|--------|--------------|
//! | HS-OFDM  | `P[N-1] + sum_{k<N-1} 2 P[k] cos(2 pi k t / T)`   | `N/B`  | `N / T`      |
//! | UWB-1    | `-t / (sqrt(2 pi) s^3) exp(-t^2 / 2 s^2)`         | `7 s`  | `1.59949/(pi s)` |
//! | UWB-2    | `(t^2 - s^2) / (sqrt(2 pi) s^5) exp(-t^2/2 s^2)` | `7 s`  | `0.56465 / s`|
//! | CSS      | `cos(pi mu t^2)`                                  | free   | `|mu| T / 2` |
//!
//! HS-OFDM symbols are BPSK (`+1`/`-1`); the Hermitian-symmetric mapping makes
//! the pulse real by construction.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{as_f64, count, lit, Real};
use crate::signal::SampledSignal;

/// Seed used for HS-OFDM symbol vectors unless the caller pins another one.
pub const DEFAULT_SYMBOL_SEED: u64 = 2019;

/// Effective duration of the Gaussian-derivative pulses in units of sigma.
pub const UWB_DURATION_SIGMAS: f64 = 7.0;

/// `B * pi * sigma` for the first Gaussian derivative (30 dB bandwidth).
pub const UWB1_BANDWIDTH_CONSTANT: f64 = 1599.49e-3;

/// `B * sigma` for the second Gaussian derivative (30 dB bandwidth).
pub const UWB2_BANDWIDTH_CONSTANT: f64 = 564.65e-3;

/// Default sample rate is this multiple of the Nyquist rate `2 B`.
pub const DEFAULT_OVERSAMPLING: f64 = 8.0;

/// Smallest accepted multiple of `2 B` for sampling a pulse.
pub const MIN_OVERSAMPLING: f64 = 2.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    HsOfdm,
    Uwb1,
    Uwb2,
    Css,
}

impl Family {
    pub const ALL: [Family; 4] = [Family::HsOfdm, Family::Uwb1, Family::Uwb2, Family::Css];

    pub fn label(self) -> &'static str {
        match self {
            Family::HsOfdm => "HS-OFDM",
            Family::Uwb1 => "UWB-1",
            Family::Uwb2 => "UWB-2",
            Family::Css => "CSS",
        }
    }

    pub fn key(self) -> &'static str {
        match self {
            Family::HsOfdm => "hs-ofdm",
            Family::Uwb1 => "uwb1",
            Family::Uwb2 => "uwb2",
            Family::Css => "css",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let norm: String = s
            .chars()
            .filter(|c| c.is_ascii_alphanumeric())
            .collect::<String>()
            .to_ascii_lowercase();
        match norm.as_str() {
            "hsofdm" | "ofdm" => Ok(Family::HsOfdm),
            "uwb1" => Ok(Family::Uwb1),
            "uwb2" => Ok(Family::Uwb2),
            "css" | "chirp" => Ok(Family::Css),
            _ => Err(Error::Unknown {
                kind: "pulse family",
                name: s.to_string(),
            }),
        }
    }
}

/// Where an HS-OFDM symbol vector came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SymbolSource {
    Seeded(u64),
    AllOnes,
    Explicit,
}

/// BPSK symbol vector `P[0..N]`, each entry `+1` or `-1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Symbols {
    values: Vec<i8>,
    source: SymbolSource,
}

impl Symbols {
    pub fn seeded(n: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let values = (0..n).map(|_| if rng.random_bool(0.5) { 1 } else { -1 }).collect();
        Self {
            values,
            source: SymbolSource::Seeded(seed),
        }
    }

    pub fn ones(n: usize) -> Self {
        Self {
            values: vec![1; n],
            source: SymbolSource::AllOnes,
        }
    }

    pub fn explicit(values: Vec<i8>) -> Result<Self> {
        if values.iter().any(|&v| v != 1 && v != -1) {
            return Err(Error::invalid("symbols", "BPSK symbols must be +1 or -1"));
        }
        Ok(Self {
            values,
            source: SymbolSource::Explicit,
        })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[i8] {
        &self.values
    }

    pub fn source(&self) -> SymbolSource {
        self.source
    }

    /// `+-+-` rendering used in key/value documents.
    pub fn to_sign_string(&self) -> String {
        self.values.iter().map(|&v| if v > 0 { '+' } else { '-' }).collect()
    }

    pub fn from_sign_string(s: &str) -> Result<Self> {
        let values = s
            .chars()
            .map(|c| match c {
                '+' => Ok(1),
                '-' => Ok(-1),
                _ => Err(Error::invalid("symbols", format!("unexpected character {c:?}"))),
            })
            .collect::<Result<Vec<i8>>>()?;
        Self::explicit(values)
    }

    /// Cosine coefficients `c[k]` of `p(t) = sum_k c[k] cos(2 pi k t / T)`
    /// for `k = 0 .. N-1` (at least one entry).
    pub fn cosine_coefficients<T: Real>(&self) -> Vec<T> {
        let n = self.values.len();
        let p = |k: usize| lit::<T>(f64::from(self.values[k]));
        if n == 1 {
            return vec![p(0)];
        }
        let two = lit::<T>(2.0);
        let mut c: Vec<T> = (0..n - 1).map(|k| two * p(k)).collect();
        c[0] += p(n - 1);
        c
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Waveform<T> {
    /// Subcarrier spacing is `1 / T`.
    HsOfdm {
        symbols: Symbols,
    },
    Uwb1 {
        sigma: T,
    },
    Uwb2 {
        sigma: T,
    },
    /// Chirp rate in Hz/s; the sign selects the sweep direction.
    Css {
        mu: T,
    },
}

/// Parametric description of one transmit pulse.
#[derive(Debug, Clone, PartialEq)]
pub struct PulseSpec<T> {
    waveform: Waveform<T>,
    duration: T,
    energy: T,
}

impl<T: Real> PulseSpec<T> {
    pub fn hs_ofdm(duration: T, symbols: Symbols) -> Result<Self> {
        Self::validated(Waveform::HsOfdm { symbols }, duration)
    }

    pub fn uwb1(sigma: T) -> Result<Self> {
        Self::validated(Waveform::Uwb1 { sigma }, sigma * lit(UWB_DURATION_SIGMAS))
    }

    pub fn uwb2(sigma: T) -> Result<Self> {
        Self::validated(Waveform::Uwb2 { sigma }, sigma * lit(UWB_DURATION_SIGMAS))
    }

    /// Chirp from its rate and duration.
    pub fn css(mu: T, duration: T) -> Result<Self> {
        Self::validated(Waveform::Css { mu }, duration)
    }

    /// Up-chirp sweeping `-B..B` in `duration` seconds.
    pub fn css_for_band(bandwidth: T, duration: T) -> Result<Self> {
        if !(bandwidth > T::zero()) {
            return Err(Error::invalid("B", "occupied bandwidth must be positive"));
        }
        if !(duration > T::zero()) {
            return Err(Error::invalid("T", "pulse duration must be positive"));
        }
        Self::css(lit::<T>(2.0) * bandwidth / duration, duration)
    }

    /// Inverse of [`occupied_bandwidth`](Self::occupied_bandwidth).
    ///
    /// HS-OFDM gets `T = N / B`; the chirp is given the same duration as an
    /// `N`-subcarrier HS-OFDM pulse and `mu = 2 B / T`; UWB pulses solve for
    /// sigma. `n` is only read for HS-OFDM and CSS.
    pub fn for_bandwidth(family: Family, bandwidth: T, n: usize, symbols: Option<Symbols>) -> Result<Self> {
        if !(bandwidth > T::zero()) || !bandwidth.is_finite() {
            return Err(Error::invalid("B", "occupied bandwidth must be positive"));
        }
        match family {
            Family::HsOfdm | Family::Css if n < 2 => Err(Error::invalid("N", "at least two subcarriers are required")),
            Family::HsOfdm => {
                let symbols = symbols.unwrap_or_else(|| Symbols::seeded(n, DEFAULT_SYMBOL_SEED));
                if symbols.len() != n {
                    return Err(Error::invalid(
                        "symbols",
                        format!("expected {n} symbols, got {}", symbols.len()),
                    ));
                }
                Self::hs_ofdm(count::<T>(n) / bandwidth, symbols)
            }
            Family::Uwb1 => Self::uwb1(lit::<T>(UWB1_BANDWIDTH_CONSTANT) / (T::PI() * bandwidth)),
            Family::Uwb2 => Self::uwb2(lit::<T>(UWB2_BANDWIDTH_CONSTANT) / bandwidth),
            Family::Css => Self::css_for_band(bandwidth, count::<T>(n) / bandwidth),
        }
    }

    fn validated(waveform: Waveform<T>, duration: T) -> Result<Self> {
        let spec = Self {
            waveform,
            duration,
            energy: T::one(),
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn with_energy(mut self, energy: T) -> Result<Self> {
        self.energy = energy;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |x: T| x > T::zero() && x.is_finite();
        match &self.waveform {
            Waveform::HsOfdm { symbols } => {
                if symbols.is_empty() {
                    return Err(Error::invalid("N", "at least one subcarrier is required"));
                }
            }
            Waveform::Uwb1 { sigma } | Waveform::Uwb2 { sigma } => {
                if !positive(*sigma) {
                    return Err(Error::invalid("sigma", "must be positive and finite"));
                }
                let expected = *sigma * lit(UWB_DURATION_SIGMAS);
                if (self.duration - expected).abs() > T::tiny() * expected {
                    return Err(Error::invalid("T", "UWB pulses require T = 7 sigma"));
                }
            }
            Waveform::Css { mu } => {
                if !mu.is_finite() {
                    return Err(Error::invalid("mu", "must be finite"));
                }
                if mu.is_zero() {
                    return Err(Error::DegenerateChirp);
                }
            }
        }
        if !positive(self.duration) {
            return Err(Error::invalid("T", "pulse duration must be positive and finite"));
        }
        if !positive(self.energy) {
            return Err(Error::invalid("E", "energy must be positive and finite"));
        }
        Ok(())
    }

    pub fn family(&self) -> Family {
        match self.waveform {
            Waveform::HsOfdm { .. } => Family::HsOfdm,
            Waveform::Uwb1 { .. } => Family::Uwb1,
            Waveform::Uwb2 { .. } => Family::Uwb2,
            Waveform::Css { .. } => Family::Css,
        }
    }

    pub fn waveform(&self) -> &Waveform<T> {
        &self.waveform
    }

    pub fn duration(&self) -> T {
        self.duration
    }

    pub fn energy(&self) -> T {
        self.energy
    }

    pub fn sigma(&self) -> Option<T> {
        match self.waveform {
            Waveform::Uwb1 { sigma } | Waveform::Uwb2 { sigma } => Some(sigma),
            _ => None,
        }
    }

    pub fn chirp_rate(&self) -> Option<T> {
        match self.waveform {
            Waveform::Css { mu } => Some(mu),
            _ => None,
        }
    }

    pub fn symbols(&self) -> Option<&Symbols> {
        match &self.waveform {
            Waveform::HsOfdm { symbols } => Some(symbols),
            _ => None,
        }
    }

    pub fn subcarriers(&self) -> Option<usize> {
        self.symbols().map(Symbols::len)
    }

    /// HS-OFDM subcarrier spacing `1 / T`.
    pub fn subcarrier_spacing(&self) -> Option<T> {
        self.symbols().map(|_| T::one() / self.duration)
    }

    /// One-sided occupied bandwidth `B`; the spectrum spans `-B..B`.
    pub fn occupied_bandwidth(&self) -> T {
        match &self.waveform {
            Waveform::HsOfdm { symbols } => count::<T>(symbols.len()) / self.duration,
            Waveform::Uwb1 { sigma } => lit::<T>(UWB1_BANDWIDTH_CONSTANT) / (T::PI() * *sigma),
            Waveform::Uwb2 { sigma } => lit::<T>(UWB2_BANDWIDTH_CONSTANT) / *sigma,
            Waveform::Css { mu } => mu.abs() * self.duration * lit(0.5),
        }
    }

    /// Pulse value `p(t)`; zero for `|t| > T/2`.
    pub fn eval(&self, t: T) -> T {
        if t.abs() > self.duration * lit(0.5) {
            return T::zero();
        }
        self.eval_unwindowed(t)
    }

    /// Closed-form expression without the `|t| <= T/2` window. For the
    /// Gaussian derivatives this is the untruncated pulse whose
    /// autocorrelation the closed forms describe.
    pub fn eval_unwindowed(&self, t: T) -> T {
        match &self.waveform {
            Waveform::HsOfdm { symbols } => {
                let w = T::TAU() * t / self.duration;
                symbols
                    .cosine_coefficients::<T>()
                    .iter()
                    .enumerate()
                    .fold(T::zero(), |acc, (k, &c)| acc + c * (w * count::<T>(k)).cos())
            }
            Waveform::Uwb1 { sigma } => {
                let s = *sigma;
                let norm = (T::TAU()).sqrt() * s * s * s;
                -t / norm * (-(t * t) / (lit::<T>(2.0) * s * s)).exp()
            }
            Waveform::Uwb2 { sigma } => {
                let s = *sigma;
                let s2 = s * s;
                let norm = (T::TAU()).sqrt() * s2 * s2 * s;
                (t * t - s2) / norm * (-(t * t) / (lit::<T>(2.0) * s2)).exp()
            }
            Waveform::Css { mu } => (T::PI() * *mu * t * t).cos(),
        }
    }

    /// Default sampling rate: [`DEFAULT_OVERSAMPLING`] times `2 B`.
    pub fn default_sample_rate(&self) -> T {
        lit::<T>(2.0 * DEFAULT_OVERSAMPLING) * self.occupied_bandwidth()
    }

    /// Lowest accepted sampling rate.
    pub fn min_sample_rate(&self) -> T {
        lit::<T>(2.0 * MIN_OVERSAMPLING) * self.occupied_bandwidth()
    }

    /// Samples the pulse on a grid centred on `t = 0` (midpoint rule over
    /// `-T/2..T/2`) without energy scaling.
    pub fn sample(&self, sample_rate: T) -> Result<SampledSignal<T>> {
        self.check_rate(sample_rate)?;
        let n = (self.duration * sample_rate).round().to_usize().unwrap_or(0).max(1);
        Ok(self.sample_centered(n, sample_rate, |t| self.eval(t)))
    }

    /// Samples the unwindowed expression over `[-half_width, half_width]`.
    pub fn sample_unwindowed(&self, sample_rate: T, half_width: T) -> Result<SampledSignal<T>> {
        self.check_rate(sample_rate)?;
        let n = (lit::<T>(2.0) * half_width * sample_rate)
            .round()
            .to_usize()
            .unwrap_or(0)
            .max(1);
        Ok(self.sample_centered(n, sample_rate, |t| self.eval_unwindowed(t)))
    }

    fn sample_centered(&self, n: usize, sample_rate: T, f: impl Fn(T) -> T) -> SampledSignal<T> {
        let mid = count::<T>(n - 1) * lit(0.5);
        let samples = (0..n).map(|i| f((count::<T>(i) - mid) / sample_rate)).collect();
        SampledSignal::from_parts_unchecked(samples, sample_rate, -mid / sample_rate)
    }

    fn check_rate(&self, sample_rate: T) -> Result<()> {
        let required = self.min_sample_rate();
        if !(sample_rate >= required) || !sample_rate.is_finite() {
            return Err(Error::Undersampled {
                given: as_f64(sample_rate),
                required: as_f64(required),
            });
        }
        Ok(())
    }

    /// Transmit signal `x = sqrt(E) p / ||p||`, scaled so that its discrete
    /// energy `sum x^2 / fs` equals `E`.
    pub fn transmit_signal(&self, sample_rate: T) -> Result<SampledSignal<T>> {
        let p = self.sample(sample_rate)?;
        let e = p.energy();
        if !(e > T::zero()) {
            return Err(Error::Singular("sampled pulse has zero energy".into()));
        }
        Ok(p.scaled((self.energy / e).sqrt()))
    }
}

/// Flat key/value rendering of a [`PulseSpec`].
#[allow(non_snake_case)]
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PulseDocument {
    pub family: Family,
    pub T_s: f64,
    pub E: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub B_hz: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub N: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub seed: Option<u64>,
    /// `ones` or a `+-` string; absent when `seed` is given.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub symbols: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub sigma_s: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub mu_hz_per_s: Option<f64>,
}

impl<T: Real> From<&PulseSpec<T>> for PulseDocument {
    fn from(spec: &PulseSpec<T>) -> Self {
        let mut doc = PulseDocument {
            family: spec.family(),
            T_s: as_f64(spec.duration),
            E: as_f64(spec.energy),
            B_hz: Some(as_f64(spec.occupied_bandwidth())),
            N: None,
            seed: None,
            symbols: None,
            sigma_s: spec.sigma().map(as_f64),
            mu_hz_per_s: spec.chirp_rate().map(as_f64),
        };
        if let Some(sym) = spec.symbols() {
            doc.N = Some(sym.len());
            match sym.source() {
                SymbolSource::Seeded(seed) => doc.seed = Some(seed),
                SymbolSource::AllOnes => doc.symbols = Some("ones".into()),
                SymbolSource::Explicit => doc.symbols = Some(sym.to_sign_string()),
            }
        }
        doc
    }
}

impl PulseDocument {
    pub fn to_spec<T: Real>(&self) -> Result<PulseSpec<T>> {
        let spec = match self.family {
            Family::HsOfdm => {
                let n = self.N.ok_or_else(|| Error::invalid("N", "required for hs-ofdm"))?;
                let symbols = match (&self.symbols, self.seed) {
                    (Some(s), _) if s == "ones" => Symbols::ones(n),
                    (Some(s), _) => Symbols::from_sign_string(s)?,
                    (None, seed) => Symbols::seeded(n, seed.unwrap_or(DEFAULT_SYMBOL_SEED)),
                };
                if symbols.len() != n {
                    return Err(Error::invalid("symbols", "length differs from N"));
                }
                PulseSpec::hs_ofdm(lit(self.T_s), symbols)?
            }
            Family::Uwb1 | Family::Uwb2 => {
                let sigma = self.sigma_s.unwrap_or(self.T_s / UWB_DURATION_SIGMAS);
                if self.family == Family::Uwb1 {
                    PulseSpec::uwb1(lit(sigma))?
                } else {
                    PulseSpec::uwb2(lit(sigma))?
                }
            }
            Family::Css => {
                let mu = self
                    .mu_hz_per_s
                    .ok_or_else(|| Error::invalid("mu_hz_per_s", "required for css"))?;
                PulseSpec::css(lit(mu), lit(self.T_s))?
            }
        };
        spec.with_energy(lit(self.E))
    }
}
