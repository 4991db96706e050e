//! Per-unit-length cable parameters and the derived line constants.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{as_f64, lit, Real};

/// A per-unit-length quantity, either constant or tabulated against
/// frequency (linear interpolation, clamped at the table ends).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged, bound = "T: Real")]
pub enum Profile<T> {
    Constant(T),
    Table { freq_hz: Vec<T>, value: Vec<T> },
}

impl<T: Real> Profile<T> {
    pub fn table(freq_hz: Vec<T>, value: Vec<T>) -> Result<Self> {
        if freq_hz.is_empty() || freq_hz.len() != value.len() {
            return Err(Error::invalid(
                "table",
                "frequency and value columns must be non-empty and equal length",
            ));
        }
        if freq_hz.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::invalid("table", "frequencies must be strictly increasing"));
        }
        Ok(Profile::Table { freq_hz, value })
    }

    pub fn at(&self, f: T) -> T {
        match self {
            Profile::Constant(v) => *v,
            Profile::Table { freq_hz, value } => {
                let n = freq_hz.len();
                if f <= freq_hz[0] {
                    return value[0];
                }
                if f >= freq_hz[n - 1] {
                    return value[n - 1];
                }
                let hi = freq_hz.partition_point(|&x| x <= f);
                let lo = hi - 1;
                let w = (f - freq_hz[lo]) / (freq_hz[hi] - freq_hz[lo]);
                value[lo] + w * (value[hi] - value[lo])
            }
        }
    }

    fn samples(&self) -> Vec<T> {
        match self {
            Profile::Constant(v) => vec![*v],
            Profile::Table { value, .. } => value.clone(),
        }
    }
}

impl<T> From<T> for Profile<T> {
    fn from(v: T) -> Self {
        Profile::Constant(v)
    }
}

/// Primary line constants `R'` (ohm/m), `L'` (H/m), `G'` (S/m), `C'` (F/m).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct CableParams<T> {
    pub r: Profile<T>,
    pub l: Profile<T>,
    pub g: Profile<T>,
    pub c: Profile<T>,
}

impl<T: Real> CableParams<T> {
    pub fn new(r: Profile<T>, l: Profile<T>, g: Profile<T>, c: Profile<T>) -> Result<Self> {
        let cable = Self { r, l, g, c };
        cable.validate()?;
        Ok(cable)
    }

    /// Lossless line with characteristic impedance `z0` and phase velocity
    /// `v_p`: `L' = z0 / v_p`, `C' = 1 / (z0 v_p)`.
    pub fn lossless(z0: T, v_p: T) -> Result<Self> {
        if !(z0 > T::zero()) || !(v_p > T::zero()) {
            return Err(Error::invalid("cable", "z0 and v_p must be positive"));
        }
        Self::new(
            T::zero().into(),
            (z0 / v_p).into(),
            T::zero().into(),
            (T::one() / (z0 * v_p)).into(),
        )
    }

    pub fn validate(&self) -> Result<()> {
        let ok = |p: &Profile<T>, positive: bool| {
            p.samples()
                .iter()
                .all(|&x| x.is_finite() && if positive { x > T::zero() } else { x >= T::zero() })
        };
        if !ok(&self.l, true) {
            return Err(Error::invalid("L'", "must be positive"));
        }
        if !ok(&self.c, true) {
            return Err(Error::invalid("C'", "must be positive"));
        }
        if !ok(&self.r, false) {
            return Err(Error::invalid("R'", "must be non-negative"));
        }
        if !ok(&self.g, false) {
            return Err(Error::invalid("G'", "must be non-negative"));
        }
        Ok(())
    }

    /// Series impedance and shunt admittance per metre at `f`.
    pub fn zy(&self, f: T) -> (Complex<T>, Complex<T>) {
        let w = T::TAU() * f;
        (
            Complex::new(self.r.at(f), w * self.l.at(f)),
            Complex::new(self.g.at(f), w * self.c.at(f)),
        )
    }

    /// `1 / sqrt(L' C')` at `f`.
    pub fn nominal_velocity(&self, f: T) -> T {
        T::one() / (self.l.at(f) * self.c.at(f)).sqrt()
    }

    /// `2 pi f / Im(gamma)`, falling back to the nominal velocity at DC.
    pub fn phase_velocity(&self, f: T) -> T {
        if f <= T::zero() {
            return self.nominal_velocity(f);
        }
        let (_, gamma) = secondary_params(self, f).expect("non-negative frequency");
        T::TAU() * f / gamma.im
    }
}

/// Characteristic impedance `Z0 = sqrt(z / y)` and propagation constant
/// `gamma = sqrt(z y)` (principal branch, `Re gamma >= 0`).
///
/// At DC a lossless line has `Z0 = sqrt(L'/C')`; a line with `R' > 0` and
/// `G' = 0` has an unbounded `Z0`, reported as `+inf`.
pub fn secondary_params<T: Real>(cable: &CableParams<T>, f: T) -> Result<(Complex<T>, Complex<T>)> {
    if !(f >= T::zero()) {
        return Err(Error::invalid(
            "f",
            format!("frequency {} must be non-negative", as_f64(f)),
        ));
    }
    let (z, y) = cable.zy(f);
    let gamma = (z * y).sqrt();
    let z0 = if y.norm() > T::zero() {
        (z / y).sqrt()
    } else if z.norm() > T::zero() {
        Complex::new(T::infinity(), T::zero())
    } else {
        Complex::new((cable.l.at(f) / cable.c.at(f)).sqrt(), T::zero())
    };
    Ok((z0, gamma))
}

/// Chain (ABCD) matrix terms `(A, B, C)` of a uniform line of length `len`
/// (`D = A`). Written with `sinh(x)/x` so that DC and zero length are
/// regular.
pub(crate) fn chain_terms<T: Real>(cable: &CableParams<T>, f: T, len: T) -> (Complex<T>, Complex<T>, Complex<T>) {
    let (z, y) = cable.zy(f);
    let x = (z * y).sqrt() * len;
    let sinhc = if x.norm() < lit(1e-4) {
        Complex::new(T::one(), T::zero()) + x * x / lit::<T>(6.0)
    } else {
        x.sinh() / x
    };
    (x.cosh(), z * len * sinhc, y * len * sinhc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn lossless_limits() {
        let cable = CableParams::<f64>::lossless(50.0, 1.5e8).unwrap();
        let (z0, g) = secondary_params(&cable, 1e6).unwrap();
        assert_relative_eq!(z0.re, 50.0, max_relative = 1e-12);
        assert!(z0.im.abs() < 1e-9);
        assert!(g.re.abs() < 1e-15);
        assert_relative_eq!(g.im, 2.0 * std::f64::consts::PI * 1e6 / 1.5e8, max_relative = 1e-12);
        assert_relative_eq!(cable.phase_velocity(3e5), 1.5e8, max_relative = 1e-12);

        let (z0, g) = secondary_params(&cable, 0.0).unwrap();
        assert_eq!(g, Complex::new(0.0, 0.0));
        assert_relative_eq!(z0.re, 50.0, max_relative = 1e-12);
        assert!(secondary_params(&cable, -1.0).is_err());
    }

    #[test]
    fn lossy_branch_has_positive_attenuation() {
        let cable = CableParams::<f64>::new(0.2.into(), 3e-7.into(), 1e-9.into(), 1e-10.into()).unwrap();
        let (z0, g) = secondary_params(&cable, 1e5).unwrap();
        assert!(g.re > 0.0 && g.im > 0.0 && z0.re > 0.0);
        let (z0_dc, _) = secondary_params(&cable, 0.0).unwrap();
        assert_relative_eq!(z0_dc.re, (0.2f64 / 1e-9).sqrt(), max_relative = 1e-12);
    }

    #[test]
    fn validation() {
        assert!(CableParams::<f64>::new(0.0.into(), 0.0.into(), 0.0.into(), 1.0.into()).is_err());
        assert!(CableParams::<f64>::new((-1.0).into(), 1.0.into(), 0.0.into(), 1.0.into()).is_err());
        assert!(Profile::table(vec![1.0, 1.0], vec![0.0, 0.0]).is_err());
    }

    #[test]
    fn tabulated_profile_interpolates() {
        let p = Profile::table(vec![0.0, 10.0], vec![1.0, 3.0]).unwrap();
        assert_eq!(p.at(5.0), 2.0);
        assert_eq!(p.at(-1.0), 1.0);
        assert_eq!(p.at(50.0), 3.0);
    }

    #[test]
    fn chain_terms_match_hyperbolic_form() {
        let cable = CableParams::<f64>::new(0.5.into(), 2e-7.into(), 1e-8.into(), 1e-10.into()).unwrap();
        let (f, len) = (2e6, 37.0);
        let (z0, g) = secondary_params(&cable, f).unwrap();
        let (a, b, c) = chain_terms(&cable, f, len);
        let x = g * len;
        assert!((a - x.cosh()).norm() < 1e-9 * a.norm());
        assert!((b - z0 * x.sinh()).norm() < 1e-9 * b.norm());
        assert!((c - x.sinh() / z0).norm() < 1e-9 * c.norm());
    }
}
