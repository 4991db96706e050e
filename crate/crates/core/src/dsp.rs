//! Linear convolution and correlation.
//!
//! Sparse operands (impulse trains, short filters) go through an exact direct
//! sum over the non-zero taps; everything else through zero-padded FFTs.

use num_complex::Complex;
use rustfft::FftPlanner;

use crate::scalar::{count, Real};

/// Direct-sum budget (multiply-adds) below which the FFT path is skipped.
const DIRECT_BUDGET: usize = 1 << 20;

/// Full linear convolution, length `a.len() + b.len() - 1`.
pub fn convolve<T: Real>(a: &[T], b: &[T]) -> Vec<T> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let nnz_a = a.iter().filter(|x| !x.is_zero()).count();
    let nnz_b = b.iter().filter(|x| !x.is_zero()).count();
    let direct_cost = (nnz_a * b.len()).min(nnz_b * a.len());
    if direct_cost <= DIRECT_BUDGET {
        return convolve_direct(a, b, nnz_a * b.len() <= nnz_b * a.len());
    }
    convolve_fft(a, b)
}

fn convolve_direct<T: Real>(a: &[T], b: &[T], iterate_a: bool) -> Vec<T> {
    let (sparse, dense) = if iterate_a { (a, b) } else { (b, a) };
    let mut out = vec![T::zero(); a.len() + b.len() - 1];
    for (i, &s) in sparse.iter().enumerate() {
        if s.is_zero() {
            continue;
        }
        for (o, &d) in out[i..].iter_mut().zip(dense) {
            *o += s * d;
        }
    }
    out
}

fn convolve_fft<T: Real>(a: &[T], b: &[T]) -> Vec<T> {
    let n_out = a.len() + b.len() - 1;
    let n_fft = n_out.next_power_of_two();
    let mut planner = FftPlanner::<T>::new();
    let fwd = planner.plan_fft_forward(n_fft);
    let inv = planner.plan_fft_inverse(n_fft);

    let pad = |x: &[T]| {
        let mut v = vec![Complex::new(T::zero(), T::zero()); n_fft];
        for (dst, &src) in v.iter_mut().zip(x) {
            dst.re = src;
        }
        v
    };
    let mut fa = pad(a);
    let mut fb = pad(b);
    fwd.process(&mut fa);
    fwd.process(&mut fb);
    for (x, y) in fa.iter_mut().zip(&fb) {
        *x *= *y;
    }
    inv.process(&mut fa);
    let scale = T::one() / count::<T>(n_fft);
    fa.truncate(n_out);
    fa.into_iter().map(|c| c.re * scale).collect()
}

/// Full cross-correlation `c[k] = sum_n y[n + k] p[n]` for
/// `k = -(p.len() - 1) ..= y.len() - 1`; entry `k` is stored at index
/// `k + p.len() - 1`.
pub fn correlate<T: Real>(y: &[T], p: &[T]) -> Vec<T> {
    let reversed: Vec<T> = p.iter().rev().copied().collect();
    convolve(y, &reversed)
}
