//! Reflectogram quality metrics: Rayleigh resolution, pulse compression
//! ratio, peak and integrated sidelobe ratios, unambiguous range.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::autocorr::{Acf, ClosedFormAcf};
use crate::error::{Error, Result};
use crate::io::{fmt_sig, Header};
use crate::numeric::{bisect, first_sign_change, golden_max, simpson_converged};
use crate::pulses::{Family, PulseSpec};
use crate::scalar::{as_f64, count, lit, Real};

/// Grid points used to scan the sidelobe region and to bracket the first
/// zero crossing.
pub const SCAN_POINTS: usize = 1 << 14;

/// Number of grid-scan sidelobe candidates refined by golden-section search.
const REFINED_CANDIDATES: usize = 4;

/// Relative accuracy of the ISLR energy integrals.
const ISLR_RTOL: f64 = 1e-6;

/// Distance per unit round-trip delay used for the Rayleigh resolution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Convention {
    /// `delta = v T_delta / 2` (round trip folded into one-way distance).
    #[default]
    Half,
    /// `delta = v T_delta`.
    Full,
}

impl fmt::Display for Convention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Convention::Half => "half",
            Convention::Full => "full",
        })
    }
}

impl FromStr for Convention {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "half" => Ok(Convention::Half),
            "full" => Ok(Convention::Full),
            _ => Err(Error::Unknown {
                kind: "resolution convention",
                name: s.to_string(),
            }),
        }
    }
}

/// How the main-lobe half-width `T_delta` is obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum ZeroCrossing {
    /// Analytic zeros for the Gaussian derivatives (`sqrt(2) sigma`,
    /// `sigma sqrt(6 - 2 sqrt(6))`), `1 / (2 B)` for HS-OFDM and CSS.
    #[default]
    Nominal,
    /// Bracketing and bisection on the closed-form autocorrelation.
    Bisection,
}

impl fmt::Display for ZeroCrossing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ZeroCrossing::Nominal => "nominal",
            ZeroCrossing::Bisection => "bisection",
        })
    }
}

impl FromStr for ZeroCrossing {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "nominal" | "closed" => Ok(ZeroCrossing::Nominal),
            "bisection" | "numeric" => Ok(ZeroCrossing::Bisection),
            _ => Err(Error::Unknown {
                kind: "zero-crossing method",
                name: s.to_string(),
            }),
        }
    }
}

/// Evaluates `acf` with lags clamped just inside the support so that
/// integrals and searches may touch the support edge.
fn clamped<T: Real, A: Acf<T>>(acf: &A) -> impl Fn(T) -> Result<T> + '_ {
    let edge = acf.support() * (T::one() - lit::<T>(1e-12));
    move |tau: T| acf.value(tau.max(-edge).min(edge))
}

/// Smallest positive lag at which `acf` changes sign, bisected to
/// `1e-10` of the support.
pub fn first_zero_crossing<T: Real, A: Acf<T>>(acf: &A) -> Result<T> {
    let support = acf.support();
    let r0 = acf.peak()?;
    if !(r0 > T::zero()) {
        return Err(Error::invalid("acf", "autocorrelation must be positive at zero lag"));
    }
    let f = clamped(acf);
    match first_sign_change(&f, T::zero(), support, SCAN_POINTS)? {
        Some((a, b)) => bisect(&f, a, b, lit::<T>(1e-10) * support),
        None => Err(Error::NoZeroCrossing { limit: as_f64(support) }),
    }
}

/// Closed-form or approximate main-lobe half-width for `spec`.
pub fn nominal_zero_crossing<T: Real>(spec: &PulseSpec<T>) -> T {
    let two = lit::<T>(2.0);
    match spec.family() {
        Family::HsOfdm | Family::Css => T::one() / (two * spec.occupied_bandwidth()),
        Family::Uwb1 => spec.sigma().expect("uwb sigma") * two.sqrt(),
        Family::Uwb2 => {
            let six = lit::<T>(6.0);
            spec.sigma().expect("uwb sigma") * (six - two * six.sqrt()).sqrt()
        }
    }
}

pub fn zero_crossing<T: Real>(spec: &PulseSpec<T>, method: ZeroCrossing) -> Result<T> {
    match method {
        ZeroCrossing::Nominal => Ok(nominal_zero_crossing(spec)),
        ZeroCrossing::Bisection => first_zero_crossing(&ClosedFormAcf::new(spec)),
    }
}

pub fn rayleigh_resolution<T: Real>(t_delta: T, v_p: T, convention: Convention) -> Result<T> {
    if !(t_delta >= T::zero()) || !t_delta.is_finite() {
        return Err(Error::invalid("T_delta", "must be non-negative and finite"));
    }
    if !(v_p > T::zero()) || !v_p.is_finite() {
        return Err(Error::invalid("v_p", "must be positive and finite"));
    }
    Ok(match convention {
        Convention::Half => v_p * t_delta * lit(0.5),
        Convention::Full => v_p * t_delta,
    })
}

/// Pulse compression ratio `T / T_delta`.
pub fn pcr<T: Real>(duration: T, t_delta: T) -> Result<T> {
    if !(duration > T::zero()) {
        return Err(Error::invalid("T", "must be positive"));
    }
    if !(t_delta > T::zero()) {
        return Err(Error::invalid("T_delta", "must be positive"));
    }
    Ok(duration / t_delta)
}

/// Peak sidelobe ratio in dB: `20 log10(max_{|tau| > T_delta} |R| / R(0))`.
///
/// The sidelobe region `(T_delta, support)` is scanned on [`SCAN_POINTS`]
/// lags and the largest local maxima are refined by golden-section search.
pub fn pslr<T: Real, A: Acf<T>>(acf: &A, t_delta: T) -> Result<T> {
    let support = acf.support();
    if !(t_delta > T::zero()) || !(t_delta < support) {
        return Err(Error::EmptySidelobes {
            t_delta: as_f64(t_delta),
            support: as_f64(support),
        });
    }
    let r0 = acf.peak()?;
    if !(r0 > T::zero()) {
        return Err(Error::invalid("acf", "autocorrelation must be positive at zero lag"));
    }
    let f = clamped(acf);
    let n = SCAN_POINTS;
    let h = (support - t_delta) / count::<T>(n + 1);
    let lag = |i: usize| t_delta + h * count::<T>(i);
    let mag: Vec<T> = (1..=n).map(|i| f(lag(i)).map(|v| v.abs())).collect::<Result<_>>()?;

    let mut peaks: Vec<usize> = (0..n)
        .filter(|&i| {
            let left = i == 0 || mag[i] >= mag[i - 1];
            let right = i + 1 == n || mag[i] >= mag[i + 1];
            left && right
        })
        .collect();
    peaks.sort_by(|&a, &b| mag[b].partial_cmp(&mag[a]).unwrap_or(std::cmp::Ordering::Equal));
    peaks.truncate(REFINED_CANDIDATES);

    let hi_limit = lag(n) + h * lit(0.5);
    let mut best = T::zero();
    for i in peaks {
        let centre = lag(i + 1);
        let lo = (centre - h).max(t_delta);
        let hi = (centre + h).min(hi_limit);
        let (_, v) = golden_max(|t| f(t).map(|v| v.abs()), lo, hi, h * lit(1e-6))?;
        best = best.max(v).max(mag[i]);
    }
    if best.is_zero() {
        return Ok(T::neg_infinity());
    }
    Ok(lit::<T>(20.0) * (best / r0).log10())
}

/// Integrated sidelobe ratio in dB: `10 log10(E_side / E_main)` with
/// `E_side = int_{|tau| > T_delta} R^2` and `E_main = int_{|tau| <= T_delta} R^2`,
/// i.e. `20 log10` of the RMS amplitude ratio.
///
/// Returns negative infinity when the sidelobe energy is zero (for instance
/// when `T_delta` reaches the support edge).
pub fn islr<T: Real, A: Acf<T>>(acf: &A, t_delta: T) -> Result<T> {
    let support = acf.support();
    if !(t_delta > T::zero()) {
        return Err(Error::invalid("T_delta", "must be positive"));
    }
    let f = clamped(acf);
    let sq = |t: T| f(t).map(|v| v * v);
    let rtol = lit::<T>(ISLR_RTOL);
    let edge = t_delta.min(support);
    let main = simpson_converged(&sq, T::zero(), edge, 256, rtol)?;
    if !(main > T::zero()) {
        return Err(Error::Singular("main lobe carries no energy".into()));
    }
    if t_delta >= support {
        return Ok(T::neg_infinity());
    }
    let side = simpson_converged(&sq, t_delta, support, 4096, rtol)?;
    if side.is_zero() {
        return Ok(T::neg_infinity());
    }
    Ok(lit::<T>(10.0) * (side / main).log10())
}

/// `d_max = v_p (delta_T_p - T) / 2`.
pub fn max_unambiguous_range<T: Real>(delta_t_p: T, duration: T, v_p: T) -> Result<T> {
    if !(v_p > T::zero()) {
        return Err(Error::invalid("v_p", "must be positive"));
    }
    if !(delta_t_p >= duration) {
        return Err(Error::NegativeRange {
            delta_t_p: as_f64(delta_t_p),
            pulse: as_f64(duration),
        });
    }
    Ok(v_p * (delta_t_p - duration) * lit(0.5))
}

/// `delta_T_p = T + 2 d_max / v_p`.
pub fn repetition_interval<T: Real>(d_max: T, duration: T, v_p: T) -> Result<T> {
    if !(v_p > T::zero()) {
        return Err(Error::invalid("v_p", "must be positive"));
    }
    if !(d_max >= T::zero()) {
        return Err(Error::invalid("d_max", "must be non-negative"));
    }
    Ok(duration + lit::<T>(2.0) * d_max / v_p)
}

/// Either fixes the repetition interval or the range it must cover.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RangeTarget<T> {
    Interval(T),
    Distance(T),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricsConfig<T> {
    pub v_p: T,
    pub convention: Convention,
    pub zero_crossing: ZeroCrossing,
    pub range: Option<RangeTarget<T>>,
    /// Skip the sidelobe metrics (they dominate the cost for large `N`).
    pub sidelobes: bool,
}

impl<T: Real> MetricsConfig<T> {
    pub fn new(v_p: T) -> Self {
        Self {
            v_p,
            convention: Convention::Half,
            zero_crossing: ZeroCrossing::Nominal,
            range: None,
            sidelobes: true,
        }
    }
}

/// Metric suite for one pulse on one cable.
#[allow(non_snake_case)]
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub family: Family,
    pub B_hz: f64,
    pub T_s: f64,
    pub T_delta_s: f64,
    pub zero_crossing: ZeroCrossing,
    pub v_p: f64,
    pub convention: Convention,
    pub delta_m: f64,
    pub pcr: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub pslr_db: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub islr_db: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub d_max_m: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub delta_T_p_s: Option<f64>,
}

pub const SWEEP_COLUMNS: &str = "family,B_hz,T_s,T_delta_s,delta_m,pcr,pslr_db,islr_db";

impl MetricsReport {
    /// Row matching [`SWEEP_COLUMNS`]; absent sidelobe metrics print `nan`.
    pub fn csv_row(&self) -> String {
        [
            self.family.key().to_string(),
            fmt_sig(self.B_hz),
            fmt_sig(self.T_s),
            fmt_sig(self.T_delta_s),
            fmt_sig(self.delta_m),
            fmt_sig(self.pcr),
            fmt_sig(self.pslr_db.unwrap_or(f64::NAN)),
            fmt_sig(self.islr_db.unwrap_or(f64::NAN)),
        ]
        .join(",")
    }
}

/// Computes the metric suite for `spec`.
///
/// `T_delta` (and hence `delta` and PCR) follows `config.zero_crossing`; the
/// sidelobe region for PSLR/ISLR always starts at the bisected zero.
pub fn evaluate<T: Real>(spec: &PulseSpec<T>, config: &MetricsConfig<T>) -> Result<MetricsReport> {
    let acf = ClosedFormAcf::new(spec);
    let t_delta = zero_crossing(spec, config.zero_crossing)?;
    let (pslr_db, islr_db) = if config.sidelobes {
        let t_main = match config.zero_crossing {
            ZeroCrossing::Bisection => t_delta,
            ZeroCrossing::Nominal => first_zero_crossing(&acf)?,
        };
        (Some(as_f64(pslr(&acf, t_main)?)), Some(as_f64(islr(&acf, t_main)?)))
    } else {
        (None, None)
    };
    let duration = spec.duration();
    let (d_max, dtp) = match config.range {
        None => (None, None),
        Some(RangeTarget::Interval(dtp)) => (Some(max_unambiguous_range(dtp, duration, config.v_p)?), Some(dtp)),
        Some(RangeTarget::Distance(d)) => (Some(d), Some(repetition_interval(d, duration, config.v_p)?)),
    };
    Ok(MetricsReport {
        family: spec.family(),
        B_hz: as_f64(spec.occupied_bandwidth()),
        T_s: as_f64(duration),
        T_delta_s: as_f64(t_delta),
        zero_crossing: config.zero_crossing,
        v_p: as_f64(config.v_p),
        convention: config.convention,
        delta_m: as_f64(rayleigh_resolution(t_delta, config.v_p, config.convention)?),
        pcr: as_f64(pcr(duration, t_delta)?),
        pslr_db,
        islr_db,
        d_max_m: d_max.map(as_f64),
        delta_T_p_s: dtp.map(as_f64),
    })
}

/// Batch output with one [`MetricsReport`] per row.
pub fn write_sweep_csv<W: Write>(reports: &[MetricsReport], mut out: W, header: &Header) -> Result<()> {
    header.write_to(&mut out)?;
    writeln!(out, "{SWEEP_COLUMNS}")?;
    for r in reports {
        writeln!(out, "{}", r.csv_row())?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::autocorr::{acf_numeric, AcfCurve};
    use crate::pulses::Symbols;
    use crate::signal::SampledSignal;
    use approx::assert_relative_eq;

    #[test]
    fn uwb_zero_crossings() {
        let u1 = ClosedFormAcf::new(&PulseSpec::uwb1(1.0).unwrap());
        assert_relative_eq!(first_zero_crossing(&u1).unwrap(), 2f64.sqrt(), max_relative = 1e-9);
        let u2 = ClosedFormAcf::new(&PulseSpec::<f64>::uwb2(1.0).unwrap());
        let z = (6.0 - 2.0 * 6f64.sqrt()).sqrt();
        assert_relative_eq!(first_zero_crossing(&u2).unwrap(), z, max_relative = 1e-9);
        assert_relative_eq!(
            nominal_zero_crossing(&PulseSpec::uwb2(1.0).unwrap()),
            z,
            max_relative = 1e-15
        );
    }

    #[test]
    fn hsofdm_zero_crossing_near_half_inverse_bandwidth() {
        let spec = PulseSpec::<f64>::hs_ofdm(1.0, Symbols::seeded(512, 11)).unwrap();
        let t = zero_crossing(&spec, ZeroCrossing::Bisection).unwrap();
        assert!((t * 1024.0 - 1.0).abs() < 0.05, "{t}");
        assert_eq!(zero_crossing(&spec, ZeroCrossing::Nominal).unwrap(), 1.0 / 1024.0);
    }

    #[test]
    fn no_zero_crossing_for_triangle() {
        let s = SampledSignal::new(vec![1.0; 64], 64.0, 0.0).unwrap();
        let c = acf_numeric(&s);
        assert!(matches!(first_zero_crossing(&c), Err(Error::NoZeroCrossing { .. })));
    }

    #[test]
    fn resolution_conventions() {
        let t = 3447.81e-6 / 1024.0;
        let full = rayleigh_resolution(t, 1.5e8, Convention::Full).unwrap();
        assert_relative_eq!(full, 504.71, max_relative = 2e-3);
        let half = rayleigh_resolution(t, 1.5e8, Convention::Half).unwrap();
        assert_relative_eq!(full, 2.0 * half, max_relative = 1e-15);
        assert_eq!(rayleigh_resolution(0.0, 1.5e8, Convention::Half).unwrap(), 0.0);
        assert!(rayleigh_resolution(1.0, -1.0, Convention::Half).is_err());
    }

    #[test]
    fn uwb_compression_ratios() {
        for sigma in [1e-9, 3e-6, 1e-2] {
            let u1 = PulseSpec::uwb1(sigma).unwrap();
            let u2 = PulseSpec::uwb2(sigma).unwrap();
            let p1 = pcr(u1.duration(), nominal_zero_crossing(&u1)).unwrap();
            let p2 = pcr(u2.duration(), nominal_zero_crossing(&u2)).unwrap();
            assert_relative_eq!(p1, 7.0 / 2f64.sqrt(), max_relative = 1e-12);
            assert_relative_eq!(p2, 7.0 / (6.0 - 2.0 * 6f64.sqrt()).sqrt(), max_relative = 1e-12);
        }
        assert_eq!(pcr(2.0, 2.0).unwrap(), 1.0);
    }

    #[test]
    fn uwb_sidelobe_ratios() {
        let u1 = ClosedFormAcf::new(&PulseSpec::uwb1(1.0).unwrap());
        let t1 = first_zero_crossing(&u1).unwrap();
        let expected = 20.0 * (2.0 * (-1.5f64).exp()).log10();
        assert_relative_eq!(pslr(&u1, t1).unwrap(), expected, epsilon = 1e-9);
        assert!((islr(&u1, t1).unwrap() + 3.77).abs() < 0.01);

        let u2 = ClosedFormAcf::new(&PulseSpec::<f64>::uwb2(1.0).unwrap());
        let t2 = first_zero_crossing(&u2).unwrap();
        assert!((pslr(&u2, t2).unwrap() + 4.18).abs() < 0.01);
        assert!((islr(&u2, t2).unwrap() + 0.94).abs() < 0.01);
    }

    #[test]
    fn sidelobe_ratios_on_sampled_curve() {
        let spec = PulseSpec::uwb1(1.0).unwrap();
        let curve = AcfCurve::closed_form(&spec, 20_001).unwrap();
        let t = first_zero_crossing(&curve).unwrap();
        assert_relative_eq!(t, 2f64.sqrt(), max_relative = 1e-6);
        assert!((pslr(&curve, t).unwrap() + 7.008).abs() < 1e-3);
    }

    #[test]
    fn empty_sidelobes() {
        let u1 = ClosedFormAcf::new(&PulseSpec::uwb1(1.0).unwrap());
        assert!(matches!(pslr(&u1, 7.0), Err(Error::EmptySidelobes { .. })));
        assert_eq!(islr(&u1, 7.0).unwrap(), f64::NEG_INFINITY);
    }

    #[test]
    fn range_round_trip_and_errors() {
        let dtp = repetition_interval(1000.0, 24.00e-6, 1.5e8).unwrap();
        assert_relative_eq!(dtp * 1e6, 37.34, max_relative = 1e-3);
        assert_relative_eq!(
            max_unambiguous_range(dtp, 24.00e-6, 1.5e8).unwrap(),
            1000.0,
            max_relative = 1e-12
        );
        assert_eq!(max_unambiguous_range(1e-3, 1e-3, 2e8).unwrap(), 0.0);
        assert!(matches!(
            max_unambiguous_range(1e-4, 1e-3, 2e8),
            Err(Error::NegativeRange { .. })
        ));
        let t = 3447.81e-6;
        assert_relative_eq!(
            repetition_interval(1e4, t, 2.56e8).unwrap() * 1e6,
            3525.79,
            max_relative = 2e-3
        );
    }

    #[test]
    fn evaluate_report_and_csv() {
        let spec = PulseSpec::<f64>::for_bandwidth(Family::Css, 490e3, 512, None).unwrap();
        let mut cfg = MetricsConfig::new(1.5e8);
        cfg.convention = Convention::Full;
        cfg.range = Some(RangeTarget::Distance(1000.0));
        let r = evaluate(&spec, &cfg).unwrap();
        assert_relative_eq!(r.delta_m, 152.96, max_relative = 5e-3);
        assert_relative_eq!(r.pcr, r.T_s / r.T_delta_s, max_relative = 1e-9);
        assert!(r.pslr_db.unwrap() < 0.0);
        let text = crate::io::to_kv_document(&r, &Header::new("metrics")).unwrap();
        let back: MetricsReport = crate::io::from_kv_document(&text).unwrap();
        assert_eq!(back, r);
        let mut buf = Vec::new();
        write_sweep_csv(&[r], &mut buf, &Header::new("sweep")).unwrap();
        assert!(String::from_utf8(buf).unwrap().contains(SWEEP_COLUMNS));
    }

    #[test]
    fn parse_flags() {
        assert_eq!("FULL".parse::<Convention>().unwrap(), Convention::Full);
        assert_eq!("bisection".parse::<ZeroCrossing>().unwrap(), ZeroCrossing::Bisection);
        assert!("third".parse::<Convention>().is_err());
    }
}
