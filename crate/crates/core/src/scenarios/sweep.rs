//! Log-spaced bandwidth sweeps: duration, resolution on both cables and the
//! unambiguous range for a set of repetition intervals.

use std::io::Write;

use super::{Scenario, TABLE_SUBCARRIERS};
use crate::error::{Error, Result};
use crate::io::{fmt_sig, Header};
use crate::metrics::{rayleigh_resolution, zero_crossing, Convention, ZeroCrossing};
use crate::pulses::{Family, PulseSpec, Symbols, DEFAULT_SYMBOL_SEED};

/// Repetition intervals of the range curves, in seconds.
pub const DEFAULT_REPETITION_INTERVALS: [f64; 4] = [1e-5, 1e-4, 1e-3, 1e-2];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRange {
    pub b_min: f64,
    pub b_max: f64,
}

impl SweepRange {
    pub fn narrowband() -> Self {
        Self {
            b_min: 1e3,
            b_max: 500e3,
        }
    }

    pub fn broadband() -> Self {
        Self {
            b_min: 1.7e6,
            b_max: 86e6,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub family: Family,
    pub range: SweepRange,
    pub points: usize,
    pub subcarriers: usize,
    pub repetition_intervals: Vec<f64>,
    pub convention: Convention,
    pub zero_crossing: ZeroCrossing,
}

impl SweepConfig {
    /// Curve settings matching the tables: 512 subcarriers, FULL
    /// resolution, nominal zero crossing.
    pub fn new(family: Family, range: SweepRange) -> Self {
        Self {
            family,
            range,
            points: 200,
            subcarriers: TABLE_SUBCARRIERS,
            repetition_intervals: DEFAULT_REPETITION_INTERVALS.to_vec(),
            convention: Convention::Full,
            zero_crossing: ZeroCrossing::Nominal,
        }
    }

    fn validate(&self) -> Result<()> {
        let SweepRange { b_min, b_max } = self.range;
        if self.points == 0 {
            return Err(Error::invalid("points", "sweep grid is empty"));
        }
        if !(b_min > 0.0 && b_max.is_finite() && b_max >= b_min) || (self.points > 1 && b_max == b_min) {
            return Err(Error::invalid("range", "need 0 < b_min < b_max"));
        }
        if self.repetition_intervals.iter().any(|&t| !(t > 0.0)) {
            return Err(Error::invalid("delta_T_p", "repetition intervals must be positive"));
        }
        Ok(())
    }
}

/// One bandwidth of the sweep. `d_max` entries follow
/// `repetition_intervals` and are NaN where the pulse outlasts the interval.
#[allow(non_snake_case)]
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub B_hz: f64,
    pub T_s: f64,
    pub T_delta_s: f64,
    pub delta_lv_m: f64,
    pub delta_mv_m: f64,
    pub d_max_lv_m: Vec<f64>,
    pub d_max_mv_m: Vec<f64>,
}

pub fn sweep(config: &SweepConfig) -> Result<Vec<SweepRow>> {
    config.validate()?;
    let SweepRange { b_min, b_max } = config.range;
    let n = config.points;
    let symbols = (config.family == Family::HsOfdm).then(|| Symbols::seeded(config.subcarriers, DEFAULT_SYMBOL_SEED));
    let d_max = |v: f64, t: f64| -> Vec<f64> {
        config
            .repetition_intervals
            .iter()
            .map(|&dtp| if dtp >= t { v * (dtp - t) / 2.0 } else { f64::NAN })
            .collect()
    };
    (0..n)
        .map(|k| {
            let frac = if n == 1 { 0.0 } else { k as f64 / (n - 1) as f64 };
            let b = b_min * (b_max / b_min).powf(frac);
            let spec = PulseSpec::<f64>::for_bandwidth(config.family, b, config.subcarriers, symbols.clone())?;
            let t = spec.duration();
            let t_delta = zero_crossing(&spec, config.zero_crossing)?;
            let (lv, mv) = (Scenario::Lv.phase_velocity(), Scenario::Mv.phase_velocity());
            Ok(SweepRow {
                B_hz: b,
                T_s: t,
                T_delta_s: t_delta,
                delta_lv_m: rayleigh_resolution(t_delta, lv, config.convention)?,
                delta_mv_m: rayleigh_resolution(t_delta, mv, config.convention)?,
                d_max_lv_m: d_max(lv, t),
                d_max_mv_m: d_max(mv, t),
            })
        })
        .collect()
}

/// Columns `B_hz,T_s,T_delta_s,delta_lv_m,delta_mv_m`, then one
/// `d_max_<cable>_m_<interval>ms` column per repetition interval.
pub fn write_sweep_csv<W: Write>(config: &SweepConfig, rows: &[SweepRow], mut out: W, header: &Header) -> Result<()> {
    header.write_to(&mut out)?;
    let mut cols = vec!["B_hz,T_s,T_delta_s,delta_lv_m,delta_mv_m".to_string()];
    for cable in ["lv", "mv"] {
        for dtp in &config.repetition_intervals {
            cols.push(format!("d_max_{cable}_m_{}ms", dtp * 1e3));
        }
    }
    writeln!(out, "{}", cols.join(","))?;
    for r in rows {
        let mut fields = vec![
            fmt_sig(r.B_hz),
            fmt_sig(r.T_s),
            fmt_sig(r.T_delta_s),
            fmt_sig(r.delta_lv_m),
            fmt_sig(r.delta_mv_m),
        ];
        fields.extend(r.d_max_lv_m.iter().chain(&r.d_max_mv_m).map(|&d| fmt_sig(d)));
        writeln!(out, "{}", fields.join(","))?;
    }
    Ok(())
}
