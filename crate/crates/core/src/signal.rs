//! Uniformly sampled real signals.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::io::{fmt_sig, Header};
use crate::scalar::{as_f64, count, Real};

/// Real-valued time series on a uniform grid.
///
/// Sample `i` sits at `t0 + i / sample_rate`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct SampledSignal<T> {
    samples: Vec<T>,
    sample_rate: T,
    t0: T,
}

impl<T: Real> SampledSignal<T> {
    pub fn new(samples: Vec<T>, sample_rate: T, t0: T) -> Result<Self> {
        if !(sample_rate > T::zero()) || !sample_rate.is_finite() {
            return Err(Error::invalid("sample_rate", "must be positive and finite"));
        }
        if samples.is_empty() {
            return Err(Error::invalid("samples", "sequence is empty"));
        }
        if !t0.is_finite() {
            return Err(Error::invalid("t0", "must be finite"));
        }
        let s = Self {
            samples,
            sample_rate,
            t0,
        };
        if !s.energy().is_finite() {
            return Err(Error::invalid("samples", "energy is not finite"));
        }
        Ok(s)
    }

    /// Single unit tap at `t0`.
    pub fn unit_impulse(sample_rate: T, t0: T) -> Result<Self> {
        Self::new(vec![T::one()], sample_rate, t0)
    }

    pub fn samples(&self) -> &[T] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<T> {
        self.samples
    }

    pub fn sample_rate(&self) -> T {
        self.sample_rate
    }

    pub fn t0(&self) -> T {
        self.t0
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn dt(&self) -> T {
        T::one() / self.sample_rate
    }

    pub fn time(&self, i: usize) -> T {
        self.t0 + count::<T>(i) / self.sample_rate
    }

    pub fn times(&self) -> impl Iterator<Item = T> + '_ {
        (0..self.len()).map(move |i| self.time(i))
    }

    /// Duration covered by the samples, `len / sample_rate`.
    pub fn duration(&self) -> T {
        count::<T>(self.len()) / self.sample_rate
    }

    /// Sum of squares divided by the sample rate: the Riemann estimate of
    /// the continuous-time energy.
    pub fn energy(&self) -> T {
        self.sum_squares() / self.sample_rate
    }

    pub fn sum_squares(&self) -> T {
        self.samples.iter().fold(T::zero(), |acc, &x| acc + x * x)
    }

    /// Discrete 2-norm `sqrt(sum x^2)`.
    pub fn norm(&self) -> T {
        self.sum_squares().sqrt()
    }

    pub fn peak_abs(&self) -> T {
        self.samples.iter().fold(T::zero(), |acc, &x| acc.max(x.abs()))
    }

    pub fn scaled(&self, factor: T) -> Self {
        Self {
            samples: self.samples.iter().map(|&x| x * factor).collect(),
            sample_rate: self.sample_rate,
            t0: self.t0,
        }
    }

    pub fn with_t0(mut self, t0: T) -> Self {
        self.t0 = t0;
        self
    }

    pub(crate) fn from_parts_unchecked(samples: Vec<T>, sample_rate: T, t0: T) -> Self {
        Self {
            samples,
            sample_rate,
            t0,
        }
    }

    pub fn ensure_same_rate(&self, other: &Self) -> Result<()> {
        let (a, b) = (self.sample_rate, other.sample_rate);
        if (a - b).abs() > T::tiny() * a.max(b) {
            return Err(Error::RateMismatch {
                left: as_f64(a),
                right: as_f64(b),
            });
        }
        Ok(())
    }

    /// Two-column CSV (`t_s,amplitude`) with 12 significant digits.
    pub fn write_csv<W: Write>(&self, mut out: W, header: &Header) -> Result<()> {
        header.write_to(&mut out)?;
        writeln!(out, "t_s,amplitude")?;
        for (t, &x) in self.times().zip(&self.samples) {
            writeln!(out, "{},{}", fmt_sig(as_f64(t)), fmt_sig(as_f64(x)))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_construction() {
        assert!(SampledSignal::<f64>::new(vec![], 1.0, 0.0).is_err());
        assert!(SampledSignal::new(vec![1.0], 0.0, 0.0).is_err());
        assert!(SampledSignal::new(vec![1.0], -1.0, 0.0).is_err());
        assert!(SampledSignal::new(vec![f64::INFINITY], 1.0, 0.0).is_err());
    }

    #[test]
    fn energy_and_axis() {
        let s = SampledSignal::new(vec![1.0, -2.0, 2.0], 4.0, -0.25).unwrap();
        assert_eq!(s.energy(), 9.0 / 4.0);
        assert_eq!(s.norm(), 3.0);
        assert_eq!(s.time(2), 0.25);
        assert_eq!(s.duration(), 0.75);
    }

    #[test]
    fn csv_has_header_and_rows() {
        let s = SampledSignal::new(vec![0.5, 1.0], 2.0, 0.0).unwrap();
        let mut buf = Vec::new();
        s.write_csv(&mut buf, &Header::new("test").with_seed(7)).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<_> = text.lines().filter(|l| !l.starts_with('#')).collect();
        assert_eq!(lines[0], "t_s,amplitude");
        assert_eq!(lines[2], "5.00000000000e-1,1.00000000000e0");
        assert!(text.contains("# seed = 7"));
    }
}
