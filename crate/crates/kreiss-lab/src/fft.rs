//! Internal FFT plumbing shared by the torus and symbol modules.
//!
//! Conventions (fixed across the crate):
//! * grid points are gamma_j = exp(2*pi*i*j/m), j = 0..m;
//! * evaluation of a Laurent polynomial sum c_k gamma^k on the grid is the
//!   unnormalized inverse FFT of the coefficients folded modulo m;
//! * coefficient recovery from grid samples is the forward FFT divided by m,
//!   followed by unfolding the residue classes onto an explicit frequency
//!   window.

use num_complex::Complex64;
use rustfft::FftPlanner;

/// Smallest power of two >= n (and >= 1).
pub(crate) fn next_pow2(n: usize) -> usize {
    n.max(1).next_power_of_two()
}

/// Fold coefficients supported on [k_min, k_min + len) into residue classes
/// modulo m: bin[b] accumulates every c_k with k = b (mod m).
pub(crate) fn fold_coeffs(k_min: i64, coeffs: &[Complex64], m: usize) -> Vec<Complex64> {
    let mm = m as i64;
    let mut bins = vec![Complex64::new(0.0, 0.0); m];
    for (i, &c) in coeffs.iter().enumerate() {
        let k = k_min + i as i64;
        let b = k.rem_euclid(mm) as usize;
        bins[b] += c;
    }
    bins
}

/// Samples f(gamma_j) for j = 0..m of f = sum c_k gamma^k.
/// Exact (up to rounding) whenever m exceeds the support width of f.
pub(crate) fn eval_grid(k_min: i64, coeffs: &[Complex64], m: usize) -> Vec<Complex64> {
    let mut buf = fold_coeffs(k_min, coeffs, m);
    FftPlanner::new().plan_fft_inverse(m).process(&mut buf);
    buf
}

/// Folded Fourier coefficients of a sample vector: bin b holds
/// (1/m) sum_j f_j exp(-2*pi*i*j*b/m), the sum of all true coefficients
/// congruent to b modulo m.
pub(crate) fn coeffs_from_grid(samples: &[Complex64]) -> Vec<Complex64> {
    let m = samples.len();
    let mut buf = samples.to_vec();
    FftPlanner::new().plan_fft_forward(m).process(&mut buf);
    let scale = 1.0 / m as f64;
    for v in &mut buf {
        *v *= scale;
    }
    buf
}

/// Unfold residue-class bins onto the explicit frequency window
/// [base, base + m): out[i] is the bin congruent to base + i modulo m.
pub(crate) fn window_from_bins(bins: &[Complex64], base: i64) -> Vec<Complex64> {
    let m = bins.len() as i64;
    (0..bins.len())
        .map(|i| bins[(base + i as i64).rem_euclid(m) as usize])
        .collect()
}

/// l1 norm of a coefficient slice.
pub(crate) fn l1(coeffs: &[Complex64]) -> f64 {
    coeffs.iter().map(|c| c.norm()).sum()
}
