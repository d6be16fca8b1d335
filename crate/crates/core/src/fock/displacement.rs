use alloc::vec::Vec;

use libm::{exp, lgamma, log, sqrt};
use num_complex::Complex64;

use super::matrix::DenseMatrix;
use crate::amplitude::ComplexAmplitude;

/// Generalized Laguerre values `L_0^{(k)}(x), ..., L_{len-1}^{(k)}(x)` by the
/// forward three-term recurrence in the degree.
pub fn laguerre_sequence(k: usize, x: f64, len: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(len);
    if len == 0 {
        return out;
    }
    let k = k as f64;
    out.push(1.0);
    if len == 1 {
        return out;
    }
    out.push(1.0 + k - x);
    for j in 1..len - 1 {
        let jf = j as f64;
        let next = ((2.0 * jf + 1.0 + k - x) * out[j] - (jf + k) * out[j - 1]) / (jf + 1.0);
        out.push(next);
    }
    out
}

/// `sqrt(lo!/hi!) |a|^(hi-lo) e^{-|a|^2/2} L_lo^{(hi-lo)}(|a|^2)` evaluated
/// in log space, without the phase.
fn element_magnitude(lo: usize, hi: usize, log_abs: f64, x: f64, laguerre: f64) -> f64 {
    if laguerre == 0.0 {
        return 0.0;
    }
    let k = (hi - lo) as f64;
    let log_mag = 0.5 * (lgamma(lo as f64 + 1.0) - lgamma(hi as f64 + 1.0)) + k * log_abs - 0.5 * x
        + log(laguerre.abs());
    exp(log_mag).copysign(laguerre)
}

/// Matrix of `D(alpha)` restricted to the first `dim` number states.
///
/// Entries are the exact matrix elements of the untruncated operator,
/// `<m|D(alpha)|n> = sqrt(n!/m!) alpha^(m-n) e^{-|alpha|^2/2} L_n^{(m-n)}(|alpha|^2)`
/// for `m >= n` and `sqrt(m!/n!) (-conj alpha)^(n-m) e^{-|alpha|^2/2} L_m^{(n-m)}(|alpha|^2)`
/// above the diagonal. No cutoff check is applied here.
pub fn displacement_matrix(alpha: ComplexAmplitude, dim: usize) -> DenseMatrix {
    if alpha == ComplexAmplitude::ZERO {
        return DenseMatrix::identity(dim);
    }
    let x = alpha.norm_sqr();
    let log_abs = log(alpha.abs());
    let lower_arg = libm::atan2(alpha.im(), alpha.re());
    let upper_arg = libm::atan2(alpha.im(), -alpha.re());

    let mut m = DenseMatrix::zeros(dim);
    for k in 0..dim {
        let lag = laguerre_sequence(k, x, dim - k);
        let lower_phase = Complex64::from_polar(1.0, k as f64 * lower_arg);
        let upper_phase = Complex64::from_polar(1.0, k as f64 * upper_arg);
        for (lo, &l) in lag.iter().enumerate() {
            let hi = lo + k;
            let mag = element_magnitude(lo, hi, log_abs, x, l);
            m[(hi, lo)] = lower_phase * mag;
            if k > 0 {
                m[(lo, hi)] = upper_phase * mag;
            }
        }
    }
    m
}

/// Coherent amplitudes `e^{-|a|^2/2} a^n / sqrt(n!)` for `n < dim`.
pub fn coherent_amplitudes(alpha: ComplexAmplitude, dim: usize) -> Vec<Complex64> {
    let a = alpha.to_complex();
    let mut out = Vec::with_capacity(dim);
    let mut c = Complex64::new(exp(-0.5 * alpha.norm_sqr()), 0.0);
    for n in 0..dim {
        if n > 0 {
            c = c * a / sqrt(n as f64);
        }
        out.push(c);
    }
    out
}
