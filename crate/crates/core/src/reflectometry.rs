//! Echo simulation, pulse compression, differential reflectograms and fault
//! location.

use std::io::Write;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::channel::{impulse_response, FrequencyGrid, NetworkTopology};
use crate::dsp::{convolve, correlate};
use crate::error::{Error, Result};
use crate::io::{fmt_sig, Header};
use crate::numeric::parabolic_vertex;
use crate::pulses::{PulseDocument, PulseSpec};
use crate::scalar::{as_f64, count, lit, Real};
use crate::signal::SampledSignal;

/// Additive white Gaussian noise level.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NoiseLevel {
    Silent,
    /// Per-sample variance.
    Power(f64),
    /// Ratio of echo power to noise variance in dB. Echo power is the
    /// noiseless received energy `sum y^2` divided by the pulse length in
    /// samples.
    SnrDb(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseSpec {
    pub seed: u64,
    pub level: NoiseLevel,
}

impl NoiseSpec {
    pub fn silent() -> Self {
        Self {
            seed: 0,
            level: NoiseLevel::Silent,
        }
    }

    pub fn power(seed: u64, variance: f64) -> Self {
        Self {
            seed,
            level: NoiseLevel::Power(variance),
        }
    }

    pub fn snr_db(seed: u64, snr_db: f64) -> Self {
        Self {
            seed,
            level: NoiseLevel::SnrDb(snr_db),
        }
    }

    /// Noise variance for a noiseless echo `y` produced by a pulse of
    /// `pulse_len` samples.
    pub fn variance<T: Real>(&self, y: &[T], pulse_len: usize) -> Result<f64> {
        match self.level {
            NoiseLevel::Silent => Ok(0.0),
            NoiseLevel::Power(p) if p >= 0.0 && p.is_finite() => Ok(p),
            NoiseLevel::Power(_) => Err(Error::invalid("noise power", "must be non-negative and finite")),
            NoiseLevel::SnrDb(snr) if snr.is_finite() => {
                let energy: f64 = y.iter().map(|&v| as_f64(v).powi(2)).sum();
                Ok(energy / pulse_len.max(1) as f64 / 10f64.powf(snr / 10.0))
            }
            NoiseLevel::SnrDb(_) => Err(Error::invalid("snr_db", "must be finite")),
        }
    }
}

/// Seeded white Gaussian sequence with variance `variance`.
pub fn white_noise<T: Real>(len: usize, variance: f64, seed: u64) -> Vec<T> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sd = variance.sqrt();
    (0..len)
        .map(|_| {
            let z: f64 = StandardNormal.sample(&mut rng);
            lit(z * sd)
        })
        .collect()
}

/// `y = x * h + v`: full linear convolution of the transmit signal with
/// the channel taps plus seeded white Gaussian noise.
pub fn simulate_echo<T: Real>(
    x: &SampledSignal<T>,
    h: &SampledSignal<T>,
    noise: &NoiseSpec,
) -> Result<SampledSignal<T>> {
    x.ensure_same_rate(h)?;
    let mut y = convolve(x.samples(), h.samples());
    let variance = noise.variance(&y, x.len())?;
    if variance > 0.0 {
        let v = white_noise::<T>(y.len(), variance, noise.seed);
        for (s, v) in y.iter_mut().zip(v) {
            *s += v;
        }
    }
    SampledSignal::new(y, x.sample_rate(), x.t0() + h.t0())
}

/// Provenance carried by a reflectogram.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ReflectogramMeta {
    pub pulse: Option<PulseDocument>,
    /// Free-form identifier of the topology (for example a file hash).
    pub topology: Option<String>,
    pub noise: Option<NoiseSpec>,
    pub compressed: bool,
}

/// Trace on a uniform time axis with the distance axis `d = v_p t / 2`.
#[derive(Debug, Clone, PartialEq)]
pub struct Reflectogram<T> {
    values: Vec<T>,
    sample_rate: T,
    t0: T,
    v_p: T,
    meta: ReflectogramMeta,
}

impl<T: Real> Reflectogram<T> {
    pub fn new(values: Vec<T>, sample_rate: T, t0: T, v_p: T, meta: ReflectogramMeta) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::invalid("values", "reflectogram is empty"));
        }
        if !(sample_rate > T::zero()) || !(v_p > T::zero()) {
            return Err(Error::invalid("axes", "sample rate and v_p must be positive"));
        }
        Ok(Self {
            values,
            sample_rate,
            t0,
            v_p,
            meta,
        })
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn sample_rate(&self) -> T {
        self.sample_rate
    }

    pub fn v_p(&self) -> T {
        self.v_p
    }

    pub fn meta(&self) -> &ReflectogramMeta {
        &self.meta
    }

    pub fn with_meta(mut self, meta: ReflectogramMeta) -> Self {
        self.meta = meta;
        self
    }

    pub fn time(&self, i: usize) -> T {
        self.t0 + count::<T>(i) / self.sample_rate
    }

    pub fn distance(&self, i: usize) -> T {
        self.v_p * self.time(i) * lit(0.5)
    }

    pub fn times(&self) -> impl Iterator<Item = T> + '_ {
        (0..self.len()).map(move |i| self.time(i))
    }

    pub fn distances(&self) -> impl Iterator<Item = T> + '_ {
        (0..self.len()).map(move |i| self.distance(i))
    }

    /// Index of the sample nearest to time `t`, if inside the trace.
    pub fn index_of_time(&self, t: T) -> Option<usize> {
        let k = ((t - self.t0) * self.sample_rate).round();
        k.to_usize().filter(|&k| k < self.len())
    }

    /// Three-column CSV: `t_s,d_m,value`.
    pub fn write_csv<W: Write>(&self, mut out: W, header: &Header) -> Result<()> {
        header.write_to(&mut out)?;
        writeln!(out, "t_s,d_m,value")?;
        for (i, &v) in self.values.iter().enumerate() {
            writeln!(
                out,
                "{},{},{}",
                fmt_sig(as_f64(self.time(i))),
                fmt_sig(as_f64(self.distance(i))),
                fmt_sig(as_f64(v))
            )?;
        }
        Ok(())
    }
}

/// Matched filter `rho = y (x) p / ||p||`, with the time axis aligned so
/// that an echo delayed by `t` peaks at time `t` (distance `v_p t / 2`).
pub fn compress<T: Real>(y: &SampledSignal<T>, p: &SampledSignal<T>, v_p: T) -> Result<Reflectogram<T>> {
    y.ensure_same_rate(p)?;
    let norm = p.norm();
    if !(norm > T::zero()) {
        return Err(Error::invalid("filter", "pulse has zero energy"));
    }
    let values: Vec<T> = correlate(y.samples(), p.samples())
        .into_iter()
        .map(|v| v / norm)
        .collect();
    let fs = y.sample_rate();
    let t0 = y.t0() - p.t0() - count::<T>(p.len() - 1) / fs;
    Reflectogram::new(
        values,
        fs,
        t0,
        v_p,
        ReflectogramMeta {
            compressed: true,
            ..ReflectogramMeta::default()
        },
    )
}

/// `rho_fault - rho_normal` on a shared axis.
pub fn differential_reflectogram<T: Real>(
    rho_fault: &Reflectogram<T>,
    rho_normal: &Reflectogram<T>,
) -> Result<Reflectogram<T>> {
    let tol = T::tiny();
    let close = |a: T, b: T| (a - b).abs() <= tol * a.abs().max(b.abs()).max(T::one() / rho_fault.sample_rate);
    if rho_fault.len() != rho_normal.len() {
        return Err(Error::AxisMismatch(format!(
            "{} vs {} samples",
            rho_fault.len(),
            rho_normal.len()
        )));
    }
    if !close(rho_fault.sample_rate, rho_normal.sample_rate) || !close(rho_fault.t0, rho_normal.t0) {
        return Err(Error::AxisMismatch("time axes differ".into()));
    }
    if (rho_fault.v_p - rho_normal.v_p).abs() > tol * rho_fault.v_p {
        return Err(Error::AxisMismatch("phase velocities differ".into()));
    }
    if rho_fault.meta.pulse != rho_normal.meta.pulse {
        return Err(Error::AxisMismatch(
            "traces were compressed with different pulses".into(),
        ));
    }
    let values = rho_fault
        .values
        .iter()
        .zip(&rho_normal.values)
        .map(|(&a, &b)| a - b)
        .collect();
    Ok(Reflectogram {
        values,
        sample_rate: rho_fault.sample_rate,
        t0: rho_fault.t0,
        v_p: rho_fault.v_p,
        meta: ReflectogramMeta {
            noise: None,
            ..rho_fault.meta.clone()
        },
    })
}

/// Outcome of [`locate_fault`]. Peak lists are ordered by distance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FaultReport {
    pub detected: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub d_fault_m: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub peak_amplitude: Option<f64>,
    pub threshold: f64,
    pub peak_distances_m: Vec<f64>,
    pub peak_amplitudes: Vec<f64>,
}

/// Finds every local maximum of `|delta|` above `xi` at non-negative
/// distance and reports the nearest one, refined by a three-point
/// parabola. Magnitudes are used because shunt faults reflect with negative
/// sign. Reported amplitudes carry the sign of the trace.
pub fn locate_fault<T: Real>(delta: &Reflectogram<T>, xi: T) -> Result<FaultReport> {
    if !(xi > T::zero()) {
        return Err(Error::invalid("xi", "threshold must be positive"));
    }
    let a: Vec<T> = delta.values.iter().map(|v| v.abs()).collect();
    let n = a.len();
    let mut dists = Vec::new();
    let mut amps = Vec::new();
    for i in 0..n {
        if a[i] <= xi || delta.time(i) < T::zero() {
            continue;
        }
        let left = if i > 0 { a[i - 1] } else { T::zero() };
        let right = if i + 1 < n { a[i + 1] } else { T::zero() };
        if !(a[i] > left && a[i] >= right) {
            continue;
        }
        let (off, peak) = if i > 0 && i + 1 < n {
            parabolic_vertex(left, a[i], right)
        } else {
            (T::zero(), a[i])
        };
        let t = delta.time(i) + off / delta.sample_rate;
        let d = (delta.v_p * t * lit(0.5)).max(T::zero());
        let sign = if delta.values[i] < T::zero() { -1.0 } else { 1.0 };
        dists.push(as_f64(d));
        amps.push(sign * as_f64(peak));
    }
    Ok(FaultReport {
        detected: !dists.is_empty(),
        d_fault_m: dists.first().copied(),
        peak_amplitude: amps.first().copied(),
        threshold: as_f64(xi),
        peak_distances_m: dists,
        peak_amplitudes: amps,
    })
}

/// Largest `|y|` at or after `frame_start + delta_t_p`, relative to the
/// peak of `y`: the leakage of one frame into the next.
pub fn inter_frame_leakage<T: Real>(y: &SampledSignal<T>, frame_start: T, delta_t_p: T) -> T {
    let peak = y.peak_abs();
    if peak.is_zero() {
        return T::zero();
    }
    let cut = frame_start + delta_t_p;
    y.times()
        .zip(y.samples())
        .filter(|(t, _)| *t >= cut)
        .fold(T::zero(), |m, (_, &v)| m.max(v.abs()))
        / peak
}

/// Settings for one normal/faulted acquisition pair.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameSetup<T> {
    pub pulse: PulseSpec<T>,
    pub sample_rate: T,
    /// Phase velocity for the distance axis.
    pub v_p: T,
    pub noise: NoiseSpec,
    /// Location threshold as a fraction of `max |delta rho|`.
    pub threshold_fraction: T,
}

/// Traces and detection result of [`run_fault_frame`].
#[derive(Debug, Clone)]
pub struct FrameResult<T> {
    pub rho_normal: Reflectogram<T>,
    pub rho_fault: Reflectogram<T>,
    pub delta: Reflectogram<T>,
    pub report: FaultReport,
}

/// Smallest grid (power of two plus one points) whose impulse response
/// spans at least twice the round trip to the farthest line end.
pub fn frame_grid<T: Real>(topology: &NetworkTopology<T>, sample_rate: T) -> Result<FrequencyGrid<T>> {
    let f_max = sample_rate * lit(0.5);
    let round_trip = topology.max_one_way_delay(f_max) * lit(2.0);
    let needed = (round_trip * sample_rate * lit(2.0))
        .ceil()
        .to_usize()
        .unwrap_or(usize::MAX);
    let half = needed.max(1 << 10).next_power_of_two();
    FrequencyGrid::for_sample_rate(sample_rate, half + 1)
}

/// Simulates the faulted topology and its fault-free twin, compresses both
/// and locates the fault in their difference.
///
/// Both acquisitions get the same absolute noise variance (derived from the
/// faulted echo when an SNR is given) from independent streams.
pub fn run_fault_frame<T: Real>(topology: &NetworkTopology<T>, setup: &FrameSetup<T>) -> Result<FrameResult<T>> {
    run_fault_frame_on(topology, setup, &frame_grid(topology, setup.sample_rate)?)
}

/// [`run_fault_frame`] on a caller-chosen frequency grid, whose sample rate
/// must match `setup.sample_rate`.
pub fn run_fault_frame_on<T: Real>(
    topology: &NetworkTopology<T>,
    setup: &FrameSetup<T>,
    grid: &FrequencyGrid<T>,
) -> Result<FrameResult<T>> {
    if grid.sample_rate() != setup.sample_rate {
        return Err(Error::RateMismatch {
            left: as_f64(grid.sample_rate()),
            right: as_f64(setup.sample_rate),
        });
    }
    let x = setup.pulse.transmit_signal(setup.sample_rate)?;
    let h_fault = impulse_response(topology, grid)?;
    let h_normal = impulse_response(&topology.without_fault(), grid)?;

    let clean_fault = simulate_echo(&x, &h_fault, &NoiseSpec::silent())?;
    let variance = setup.noise.variance(clean_fault.samples(), x.len())?;
    let y_fault = simulate_echo(&x, &h_fault, &NoiseSpec::power(setup.noise.seed, variance))?;
    let y_normal = simulate_echo(
        &x,
        &h_normal,
        &NoiseSpec::power(setup.noise.seed ^ 0x9E37_79B9_7F4A_7C15, variance),
    )?;

    let meta = |noise| ReflectogramMeta {
        pulse: Some(PulseDocument::from(&setup.pulse)),
        topology: None,
        noise: Some(noise),
        compressed: true,
    };
    let rho_fault = compress(&y_fault, &x, setup.v_p)?.with_meta(meta(setup.noise));
    let rho_normal = compress(&y_normal, &x, setup.v_p)?.with_meta(meta(setup.noise));
    let delta = differential_reflectogram(&rho_fault, &rho_normal)?;
    let peak = delta.values.iter().fold(T::zero(), |m, v| m.max(v.abs()));
    let xi = (peak * setup.threshold_fraction).max(T::min_positive_value());
    let report = locate_fault(&delta, xi)?;
    Ok(FrameResult {
        rho_normal,
        rho_fault,
        delta,
        report,
    })
}

/// One row of a batch manifest.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub scenario: String,
    pub pulse: String,
    pub snr_db: Option<f64>,
    pub seed: u64,
}

/// CSV manifest `scenario,pulse,snr_db,seed`.
pub fn write_manifest<W: Write>(entries: &[ManifestEntry], mut out: W, header: &Header) -> Result<()> {
    header.write_to(&mut out)?;
    writeln!(out, "scenario,pulse,snr_db,seed")?;
    for e in entries {
        let snr = e.snr_db.map_or_else(|| "inf".to_string(), fmt_sig);
        writeln!(out, "{},{},{},{}", e.scenario, e.pulse, snr, e.seed)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{CableParams, Fault, FaultKind, LoadModel};
    use approx::assert_relative_eq;

    fn sig(v: Vec<f64>) -> SampledSignal<f64> {
        SampledSignal::new(v, 10.0, 0.0).unwrap()
    }

    #[test]
    fn identity_and_single_echo() {
        let x = sig(vec![0.3, -1.0, 0.25]);
        let y = simulate_echo(
            &x,
            &SampledSignal::unit_impulse(10.0, 0.0).unwrap(),
            &NoiseSpec::silent(),
        )
        .unwrap();
        assert_eq!(y.samples(), x.samples());
        let h = sig(vec![0.0, 0.0, 0.0, 0.5]);
        let y = simulate_echo(&x, &h, &NoiseSpec::silent()).unwrap();
        assert_eq!(&y.samples()[3..], &[0.15, -0.5, 0.125]);
        assert!(y.samples()[..3].iter().all(|&v| v == 0.0));
    }

    #[test]
    fn rate_mismatch() {
        let x = sig(vec![1.0]);
        let h = SampledSignal::new(vec![1.0], 11.0, 0.0).unwrap();
        assert!(matches!(
            simulate_echo(&x, &h, &NoiseSpec::silent()),
            Err(Error::RateMismatch { .. })
        ));
    }

    #[test]
    fn noise_variance_law_of_large_numbers() {
        let x = sig(vec![1.0; 10]);
        let mut h = vec![0.0; 1_000_000];
        h[0] = 1.0;
        let h = sig(h);
        let noise = NoiseSpec::snr_db(42, 10.0);
        let expected = noise.variance(&[1.0f64; 10], 10).unwrap();
        assert_relative_eq!(expected, 0.1, max_relative = 1e-12);
        let y = simulate_echo(&x, &h, &noise).unwrap();
        let tail = &y.samples()[100..];
        let var = tail.iter().map(|v| v * v).sum::<f64>() / tail.len() as f64;
        assert!((var / expected - 1.0).abs() < 0.05, "{var}");
        let again = simulate_echo(&x, &h, &noise).unwrap();
        assert_eq!(again, y);
    }

    #[test]
    fn matched_filter_peak_equals_norm() {
        let p = sig(vec![0.5, 1.0, -0.75, 0.25]);
        let rho = compress(&p, &p, 2.0).unwrap();
        let (i, &m) = rho
            .values()
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
            .unwrap();
        assert_relative_eq!(m, p.norm(), max_relative = 1e-12);
        assert!(rho.time(i).abs() < 1e-12);
        assert_relative_eq!(rho.distance(i + 3), 2.0 * rho.time(i + 3) / 2.0, max_relative = 1e-12);
    }

    #[test]
    fn delayed_echo_peaks_at_delay() {
        let spec = PulseSpec::uwb1(1e-6).unwrap();
        let fs = spec.default_sample_rate();
        let x = spec.transmit_signal(fs).unwrap();
        let mut h = vec![0.0; 400];
        h[123] = 1.0;
        let y = simulate_echo(&x, &sig_rate(h, fs), &NoiseSpec::silent()).unwrap();
        let rho = compress(&y, &x, 1.5e8).unwrap();
        let i = argmax(rho.values());
        assert!((rho.time(i) - 123.0 / fs).abs() <= 1.0 / fs);
    }

    fn sig_rate(v: Vec<f64>, fs: f64) -> SampledSignal<f64> {
        SampledSignal::new(v, fs, 0.0).unwrap()
    }

    fn argmax(v: &[f64]) -> usize {
        v.iter()
            .enumerate()
            .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
            .unwrap()
            .0
    }

    #[test]
    fn two_echoes_keep_amplitude_ratio() {
        let spec = PulseSpec::css_for_band(1e6, 64e-6).unwrap();
        let fs = spec.default_sample_rate();
        let x = spec.transmit_signal(fs).unwrap();
        let mut h = vec![0.0; 5000];
        h[500] = 0.5;
        h[3500] = 0.25;
        let y = simulate_echo(&x, &sig_rate(h, fs), &NoiseSpec::silent()).unwrap();
        let rho = compress(&y, &x, 1.5e8).unwrap();
        let at = |k: usize| rho.values()[rho.index_of_time(k as f64 / fs).unwrap()];
        assert_relative_eq!(at(500) / at(3500), 2.0, max_relative = 0.02);
    }

    #[test]
    fn differential_identity_antisymmetry_and_mismatch() {
        let a = Reflectogram::new(vec![1.0, 2.0, -1.0], 10.0, 0.0, 1e8, ReflectogramMeta::default()).unwrap();
        let b = Reflectogram::new(vec![0.5, 2.5, 0.0], 10.0, 0.0, 1e8, ReflectogramMeta::default()).unwrap();
        assert!(differential_reflectogram(&a, &a)
            .unwrap()
            .values()
            .iter()
            .all(|&v| v == 0.0));
        let ab = differential_reflectogram(&a, &b).unwrap();
        let ba = differential_reflectogram(&b, &a).unwrap();
        for (x, y) in ab.values().iter().zip(ba.values()) {
            assert_eq!(*x, -*y);
        }
        let shifted = Reflectogram::new(vec![1.0, 2.0, -1.0], 10.0, 0.05, 1e8, ReflectogramMeta::default()).unwrap();
        assert!(matches!(
            differential_reflectogram(&a, &shifted),
            Err(Error::AxisMismatch(_))
        ));
    }

    #[test]
    fn location_thresholds() {
        let zero = Reflectogram::new(vec![0.0; 50], 10.0, 0.0, 2.0, ReflectogramMeta::default()).unwrap();
        assert!(!locate_fault(&zero, 1e-3).unwrap().detected);
        let mut v = vec![0.0; 50];
        v[10] = -0.5;
        v[11] = -1.0;
        v[12] = -0.5;
        v[30] = 0.8;
        let tr = Reflectogram::new(v, 10.0, 0.0, 2.0, ReflectogramMeta::default()).unwrap();
        let r = locate_fault(&tr, 0.6).unwrap();
        assert!(r.detected);
        assert_relative_eq!(r.d_fault_m.unwrap(), 1.1, max_relative = 1e-12);
        assert_eq!(r.peak_amplitude, Some(-1.0));
        assert_eq!(r.peak_distances_m.len(), 2);
        assert!(!locate_fault(&tr, 1.5).unwrap().detected);
        assert!(locate_fault(&tr, 0.0).is_err());
    }

    #[test]
    fn noiseless_lv_fault_at_500_m() {
        let cable = CableParams::lossless(50.0, 1.5e8).unwrap();
        let topo = NetworkTopology::single_line(1000.0, cable, LoadModel::resistive(50.0), LoadModel::resistive(50.0))
            .with_fault(Fault {
                section: 0,
                offset: 500.0,
                kind: FaultKind::Shunt,
                impedance: LoadModel::resistive(10.0),
            });
        let pulse = PulseSpec::<f64>::for_bandwidth(crate::pulses::Family::HsOfdm, 490e3, 512, None).unwrap();
        let setup = FrameSetup {
            sample_rate: pulse.default_sample_rate(),
            pulse,
            v_p: 1.5e8,
            noise: NoiseSpec::silent(),
            threshold_fraction: 0.7,
        };
        let out = run_fault_frame(&topo, &setup).unwrap();
        let delta = 1.5e8 / (2.0 * 490e3) / 2.0;
        let d = out.report.d_fault_m.unwrap();
        assert!((d - 500.0).abs() <= delta / 2.0, "d = {d}");
        assert!(out.report.peak_amplitude.unwrap() < 0.0);
    }

    #[test]
    fn csv_and_manifest() {
        let tr = Reflectogram::new(vec![0.0, 1.0], 1.0, 0.0, 2.0, ReflectogramMeta::default()).unwrap();
        let mut buf = Vec::new();
        tr.write_csv(&mut buf, &Header::new("reflectogram")).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.contains("t_s,d_m,value\n0.00000000000e0,0.00000000000e0,0.00000000000e0"));
        let mut buf = Vec::new();
        write_manifest(
            &[ManifestEntry {
                scenario: "lv".into(),
                pulse: "hs-ofdm/fcc".into(),
                snr_db: Some(20.0),
                seed: 3,
            }],
            &mut buf,
            &Header::new("manifest"),
        )
        .unwrap();
        assert!(String::from_utf8(buf)
            .unwrap()
            .contains("lv,hs-ofdm/fcc,2.00000000000e1,3"));
    }
}
