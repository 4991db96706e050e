//! Fresnel integrals `C(x) = int_0^x cos(pi t^2 / 2) dt` and
//! `S(x) = int_0^x sin(pi t^2 / 2) dt`.
//!
//! Power series below `|x| = 1.5`, a complex continued fraction (modified
//! Lentz) above. Both are iterated to machine precision.

use num_complex::Complex;

use crate::scalar::{count, lit, Real};

const SERIES_LIMIT: f64 = 1.5;
const MAX_ITER: usize = 400;

/// Returns `(C(x), S(x))`. Both are odd and tend to `1/2` as `x -> +inf`.
pub fn fresnel<T: Real>(x: T) -> (T, T) {
    let ax = x.abs();
    let (c, s) = if ax.is_infinite() {
        (lit(0.5), lit(0.5))
    } else if ax < T::min_positive_value().sqrt() {
        (ax, T::zero())
    } else if ax <= lit(SERIES_LIMIT) {
        series(ax)
    } else {
        continued_fraction(ax)
    };
    if x < T::zero() {
        (-c, -s)
    } else {
        (c, s)
    }
}

fn series<T: Real>(ax: T) -> (T, T) {
    let eps = T::epsilon();
    let fact = T::FRAC_PI_2() * ax * ax;
    let mut sum_c = ax;
    let mut sum_s = T::zero();
    let mut sum = T::zero();
    let mut sign = T::one();
    let mut term = ax;
    let mut odd = true;
    let mut n = 3usize;
    for k in 1..MAX_ITER {
        term *= fact / count::<T>(k);
        sum += sign * term / count::<T>(n);
        let test = sum.abs() * eps;
        if odd {
            sign = -sign;
            sum_s = sum;
            sum = sum_c;
        } else {
            sum_c = sum;
            sum = sum_s;
        }
        if term < test {
            break;
        }
        odd = !odd;
        n += 2;
    }
    (sum_c, sum_s)
}

fn continued_fraction<T: Real>(ax: T) -> (T, T) {
    let eps = T::epsilon();
    let fpmin = T::min_positive_value() / T::epsilon();
    let one = Complex::new(T::one(), T::zero());
    let pix2 = T::PI() * ax * ax;
    let mut b = Complex::new(T::one(), -pix2);
    let mut cc = Complex::new(T::one() / fpmin, T::zero());
    let mut d = one / b;
    let mut h = d;
    let mut n = -1.0f64;
    for _ in 2..MAX_ITER {
        n += 2.0;
        let a = lit::<T>(-n * (n + 1.0));
        b.re += lit::<T>(4.0);
        d = one / (d * a + b);
        cc = b + one * a / cc;
        let del = cc * d;
        h *= del;
        if (del.re - T::one()).abs() + del.im.abs() < eps {
            break;
        }
    }
    h *= Complex::new(ax, -ax);
    let half = lit::<T>(0.5);
    let (sin, cos) = (half * pix2).sin_cos();
    let cs = Complex::new(half, half) * (one - Complex::new(cos, sin) * h);
    (cs.re, cs.im)
}
