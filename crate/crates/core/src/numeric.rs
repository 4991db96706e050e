//! Scalar root bracketing, bisection, golden-section search and Simpson
//! quadrature. All routines accept fallible integrands so that domain errors
//! from the closed forms propagate unchanged.

use crate::error::{Error, Result};
use crate::scalar::{as_f64, count, lit, Real};

/// Scans `[a, b]` in `steps` equal steps and returns the first sub-interval on
/// whose end points `f` changes sign (or hits zero exactly).
pub fn first_sign_change<T, F>(mut f: F, a: T, b: T, steps: usize) -> Result<Option<(T, T)>>
where
    T: Real,
    F: FnMut(T) -> Result<T>,
{
    let h = (b - a) / count::<T>(steps.max(1));
    let mut x0 = a;
    let mut f0 = f(a)?;
    for i in 1..=steps.max(1) {
        let x1 = if i == steps { b } else { a + h * count::<T>(i) };
        let f1 = f(x1)?;
        if f0 == T::zero() {
            return Ok(Some((x0, x0)));
        }
        if f1 == T::zero() || (f0 < T::zero()) != (f1 < T::zero()) {
            return Ok(Some((x0, x1)));
        }
        x0 = x1;
        f0 = f1;
    }
    Ok(None)
}

/// Bisection on a sign-changing bracket until the bracket is narrower than
/// `xtol`.
pub fn bisect<T, F>(mut f: F, mut a: T, mut b: T, xtol: T) -> Result<T>
where
    T: Real,
    F: FnMut(T) -> Result<T>,
{
    let mut fa = f(a)?;
    if fa == T::zero() {
        return Ok(a);
    }
    let fb = f(b)?;
    if fb == T::zero() {
        return Ok(b);
    }
    if (fa < T::zero()) == (fb < T::zero()) {
        return Err(Error::invalid(
            "bracket",
            format!("f({}) and f({}) share a sign", as_f64(a), as_f64(b)),
        ));
    }
    let half = lit::<T>(0.5);
    // 200 halvings exhaust any f64 bracket.
    for _ in 0..200 {
        if (b - a).abs() <= xtol {
            break;
        }
        let m = a + (b - a) * half;
        if m <= a || m >= b {
            break;
        }
        let fm = f(m)?;
        if fm == T::zero() {
            return Ok(m);
        }
        if (fm < T::zero()) == (fa < T::zero()) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    Ok(a + (b - a) * half)
}

/// Golden-section search for a maximum of `f` on `[a, b]`; returns
/// `(argmax, max)`.
pub fn golden_max<T, F>(mut f: F, mut a: T, mut b: T, xtol: T) -> Result<(T, T)>
where
    T: Real,
    F: FnMut(T) -> Result<T>,
{
    let inv_phi = (lit::<T>(5.0).sqrt() - T::one()) * lit(0.5);
    let mut c = b - (b - a) * inv_phi;
    let mut d = a + (b - a) * inv_phi;
    let mut fc = f(c)?;
    let mut fd = f(d)?;
    for _ in 0..200 {
        if (b - a).abs() <= xtol {
            break;
        }
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - (b - a) * inv_phi;
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + (b - a) * inv_phi;
            fd = f(d)?;
        }
    }
    let (fa, fb) = (f(a)?, f(b)?);
    let best = [(a, fa), (c, fc), (d, fd), (b, fb)]
        .into_iter()
        .fold((a, fa), |acc, x| if x.1 > acc.1 { x } else { acc });
    Ok(best)
}

/// Composite Simpson rule on `n` (rounded up to even) sub-intervals.
pub fn simpson<T, F>(mut f: F, a: T, b: T, n: usize) -> Result<T>
where
    T: Real,
    F: FnMut(T) -> Result<T>,
{
    let n = (n.max(2) + 1) & !1;
    let h = (b - a) / count::<T>(n);
    let mut acc = f(a)? + f(b)?;
    for i in 1..n {
        let w = if i % 2 == 1 { lit::<T>(4.0) } else { lit(2.0) };
        acc += w * f(a + h * count::<T>(i))?;
    }
    Ok(acc * h / lit(3.0))
}

/// Composite Simpson with grid doubling until two successive estimates agree
/// to `rtol`. Returns the finer estimate.
pub fn simpson_converged<T, F>(mut f: F, a: T, b: T, n0: usize, rtol: T) -> Result<T>
where
    T: Real,
    F: FnMut(T) -> Result<T>,
{
    let mut n = n0.max(2);
    let mut prev = simpson(&mut f, a, b, n)?;
    for _ in 0..12 {
        n *= 2;
        let next = simpson(&mut f, a, b, n)?;
        if (next - prev).abs() <= rtol * next.abs() || next.abs() < T::min_positive_value() {
            return Ok(next);
        }
        prev = next;
    }
    Ok(prev)
}

/// Three-point parabolic vertex through `(-1, y0), (0, y1), (1, y2)`:
/// returns the fractional offset in `[-0.5, 0.5]` and the vertex value.
pub fn parabolic_vertex<T: Real>(y0: T, y1: T, y2: T) -> (T, T) {
    let denom = y0 - lit::<T>(2.0) * y1 + y2;
    if denom.abs() <= T::tiny() * (y0.abs() + y1.abs() + y2.abs()) {
        return (T::zero(), y1);
    }
    let half = lit::<T>(0.5);
    let off = (half * (y0 - y2) / denom).max(-half).min(half);
    let val = y1 - lit::<T>(0.25) * (y0 - y2) * off;
    (off, val)
}
