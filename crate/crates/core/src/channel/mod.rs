//! Power distribution network as cascaded transmission lines: input
//! reflection coefficient and the reflection-channel impulse response.

mod cable;
mod topology;

use std::io::Write;

use num_complex::Complex;
use rustfft::FftPlanner;

pub use cable::{secondary_params, CableParams, Profile};
pub use topology::{
    reflection_coefficient, Arrangement, Branch, BranchDoc, CableDoc, CableLibrary, Fault, FaultDoc, FaultKind,
    LoadDoc, LoadModel, NetworkTopology, Section, SectionDoc, TopologyDocument,
};

use crate::error::{Error, Result};
use crate::io::{fmt_sig, Header};
use crate::scalar::{as_f64, count, Real};
use crate::signal::SampledSignal;

/// Default number of grid frequencies.
pub const DEFAULT_GRID_POINTS: usize = 1 << 16;

/// `n` uniformly spaced frequencies `0, df, ..., f_max`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrequencyGrid<T> {
    n: usize,
    f_max: T,
}

impl<T: Real> FrequencyGrid<T> {
    pub fn new(n: usize, f_max: T) -> Result<Self> {
        if n < 2 {
            return Err(Error::invalid("N_f", "at least two frequencies are required"));
        }
        if !(f_max > T::zero()) || !f_max.is_finite() {
            return Err(Error::invalid("f_max", "must be positive and finite"));
        }
        Ok(Self { n, f_max })
    }

    /// Grid whose impulse response has sample rate `sample_rate`
    /// (`f_max = sample_rate / 2`).
    pub fn for_sample_rate(sample_rate: T, n: usize) -> Result<Self> {
        Self::new(n, sample_rate / (T::one() + T::one()))
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn f_max(&self) -> T {
        self.f_max
    }

    pub fn spacing(&self) -> T {
        self.f_max / count::<T>(self.n - 1)
    }

    pub fn frequency(&self, k: usize) -> T {
        self.f_max * count::<T>(k) / count::<T>(self.n - 1)
    }

    pub fn frequencies(&self) -> impl Iterator<Item = T> + '_ {
        (0..self.n).map(move |k| self.frequency(k))
    }

    /// Sample rate of the synthesized impulse response, `2 f_max`.
    pub fn sample_rate(&self) -> T {
        self.f_max + self.f_max
    }

    /// Time span of the impulse response, `1 / df`.
    pub fn time_span(&self) -> T {
        T::one() / self.spacing()
    }
}

/// `Gamma_in` on every grid frequency. A DC value that cannot be evaluated
/// (purely reactive network) is replaced by its nearest neighbour.
pub fn reflection_spectrum<T: Real>(topology: &NetworkTopology<T>, grid: &FrequencyGrid<T>) -> Result<Vec<Complex<T>>> {
    topology.validate()?;
    let mut gamma = Vec::with_capacity(grid.len());
    for f in grid.frequencies() {
        gamma.push(match topology.reflection(f) {
            Ok(g) if g.re.is_finite() && g.im.is_finite() => Some(g),
            Ok(_) => None,
            Err(e) if f.is_zero() && e.is_numerical_guard() => None,
            Err(e) => return Err(e),
        });
    }
    if gamma[0].is_none() {
        gamma[0] = gamma[1];
    }
    gamma
        .into_iter()
        .enumerate()
        .map(|(k, g)| {
            g.ok_or_else(|| Error::Singular(format!("reflection undefined at {} Hz", as_f64(grid.frequency(k)))))
        })
        .collect()
}

/// Reflection-channel impulse response by inverse DFT of the
/// Hermitian-extended `Gamma_in`.
///
/// Returns discrete taps (sum normalized so that a flat `Gamma = c` gives a
/// single tap `c` at `t = 0`) at sample rate `2 f_max` spanning `1 / df`.
/// Fails with an aliasing error when the farthest first-order echo
/// (`2 x` the longest one-way delay) does not fit in that span.
pub fn impulse_response<T: Real>(topology: &NetworkTopology<T>, grid: &FrequencyGrid<T>) -> Result<SampledSignal<T>> {
    impulse_response_with_residual(topology, grid).map(|(h, _)| h)
}

/// [`impulse_response`] plus the largest discarded imaginary part of the
/// inverse DFT, relative to the largest tap.
pub fn impulse_response_with_residual<T: Real>(
    topology: &NetworkTopology<T>,
    grid: &FrequencyGrid<T>,
) -> Result<(SampledSignal<T>, T)> {
    let delay = topology.max_one_way_delay(grid.f_max()) * (T::one() + T::one());
    if delay >= grid.time_span() {
        return Err(Error::Aliasing {
            delay: as_f64(delay),
            spacing: as_f64(grid.spacing()),
            required_spacing: as_f64(T::one() / delay),
        });
    }
    let gamma = reflection_spectrum(topology, grid)?;
    let n = grid.len();
    let len = 2 * (n - 1);
    let zero = Complex::new(T::zero(), T::zero());
    let mut spec = vec![zero; len];
    spec[0] = Complex::new(gamma[0].re, T::zero());
    for k in 1..n - 1 {
        spec[k] = gamma[k];
        spec[len - k] = gamma[k].conj();
    }
    spec[n - 1] = Complex::new(gamma[n - 1].re, T::zero());
    FftPlanner::new().plan_fft_inverse(len).process(&mut spec);
    let scale = T::one() / count::<T>(len);
    let taps: Vec<T> = spec.iter().map(|z| z.re * scale).collect();
    let peak = taps.iter().fold(T::zero(), |m, v| m.max(v.abs()));
    let imag = spec.iter().fold(T::zero(), |m, z| m.max((z.im * scale).abs()));
    let residual = if peak > T::zero() { imag / peak } else { imag };
    Ok((SampledSignal::new(taps, grid.sample_rate(), T::zero())?, residual))
}

/// Three-column CSV of `Gamma_in`: `f_hz,re,im`.
pub fn write_reflection_csv<T: Real, W: Write>(
    topology: &NetworkTopology<T>,
    grid: &FrequencyGrid<T>,
    mut out: W,
    header: &Header,
) -> Result<()> {
    let gamma = reflection_spectrum(topology, grid)?;
    header.write_to(&mut out)?;
    writeln!(out, "f_hz,re,im")?;
    for (f, g) in grid.frequencies().zip(&gamma) {
        writeln!(
            out,
            "{},{},{}",
            fmt_sig(as_f64(f)),
            fmt_sig(as_f64(g.re)),
            fmt_sig(as_f64(g.im))
        )?;
    }
    Ok(())
}
