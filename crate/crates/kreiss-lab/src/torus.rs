//! Trigonometric polynomials on the unit circle: grid-based L^p and weak-L^1
//! norms, band projections, Fourier multipliers, and square functions.
//!
//! Grid convention: an `m`-point grid samples gamma_j = exp(2*pi*i*j/m) and
//! all integral norms are uniform-measure quadratures over that grid. For a
//! polynomial with support width w, any m >= 2w + 1 (strictly above Nyquist)
//! makes the L^2 quadrature exact and the L^p quadrature stable under grid
//! doubling.

use crate::error::{Error, Result};
use crate::fft;
use num_complex::Complex64;

/// A finitely supported Fourier (Laurent) series sum_k c_k gamma^k,
/// stored as a contiguous coefficient window starting at `k_min`.
///
/// `tail_bound` annotates how much l1 coefficient mass an upstream
/// computation discarded to produce this finitely supported object; it is
/// metadata carried along for reporting, never silently added to norms.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierSeries {
    k_min: i64,
    coeffs: Vec<Complex64>,
    tail_bound: f64,
}

impl FourierSeries {
    /// Builds a series from a coefficient window. Exact zeros on the edges
    /// are trimmed so that the stored window starts and ends with nonzero
    /// coefficients (the zero series is kept as a single zero at k = 0).
    ///
    /// Panics if `coeffs` is empty.
    pub fn new(k_min: i64, coeffs: Vec<Complex64>) -> Self {
        Self::with_tail_bound(k_min, coeffs, 0.0)
    }

    /// As [`FourierSeries::new`], recording a discarded-mass annotation.
    pub fn with_tail_bound(k_min: i64, coeffs: Vec<Complex64>, tail_bound: f64) -> Self {
        assert!(!coeffs.is_empty(), "a Fourier series needs at least one coefficient");
        assert!(tail_bound >= 0.0, "tail bound must be nonnegative");
        let zero = Complex64::new(0.0, 0.0);
        let first = coeffs.iter().position(|c| *c != zero);
        match first {
            None => FourierSeries {
                k_min: 0,
                coeffs: vec![zero],
                tail_bound,
            },
            Some(lo) => {
                let hi = coeffs.iter().rposition(|c| *c != zero).unwrap();
                FourierSeries {
                    k_min: k_min + lo as i64,
                    coeffs: coeffs[lo..=hi].to_vec(),
                    tail_bound,
                }
            }
        }
    }

    /// The constant series c.
    pub fn constant(c: Complex64) -> Self {
        FourierSeries::new(0, vec![c])
    }

    /// The monomial gamma^k.
    pub fn monomial(k: i64) -> Self {
        FourierSeries::new(k, vec![Complex64::new(1.0, 0.0)])
    }

    pub fn k_min(&self) -> i64 {
        self.k_min
    }

    pub fn k_max(&self) -> i64 {
        self.k_min + self.coeffs.len() as i64 - 1
    }

    /// Support width minus one: k_max - k_min (0 for a monomial).
    pub fn bandwidth(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Coefficient of gamma^k (zero outside the stored window).
    pub fn coeff(&self, k: i64) -> Complex64 {
        if k < self.k_min || k > self.k_max() {
            Complex64::new(0.0, 0.0)
        } else {
            self.coeffs[(k - self.k_min) as usize]
        }
    }

    pub fn tail_bound(&self) -> f64 {
        self.tail_bound
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0] == Complex64::new(0.0, 0.0)
    }

    /// l1 norm of the coefficient sequence.
    pub fn coeff_l1_norm(&self) -> f64 {
        fft::l1(&self.coeffs)
    }

    /// l2 norm of the coefficient sequence.
    pub fn coeff_l2_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    /// lp norm of the coefficient sequence, p in [1, inf); computed with
    /// max-normalization so extreme exponents stay finite.
    pub fn coeff_lp_norm(&self, p: f64) -> Result<f64> {
        if !(p >= 1.0) || !p.is_finite() {
            return Err(Error::domain(format!("lp exponent must lie in [1, inf), got {p}")));
        }
        Ok(lp_of_moduli(self.coeffs.iter().map(|c| c.norm()), p))
    }

    /// Grid size used when the caller does not pick one: four times the
    /// bandwidth, rounded up to a power of two, with a floor of 8. Always
    /// strictly above the 2*bandwidth Nyquist threshold.
    pub fn default_grid(&self) -> usize {
        fft::next_pow2(4 * self.bandwidth().max(1)).max(8)
    }

    /// Samples the series on the m-point grid. Requires m > bandwidth so
    /// that no two support frequencies alias.
    pub fn evaluate(&self, m: usize) -> Result<GridSamples> {
        if m <= self.bandwidth() {
            return Err(Error::domain(format!(
                "grid size {m} aliases a series with support width {}",
                self.bandwidth() + 1
            )));
        }
        Ok(GridSamples {
            values: fft::eval_grid(self.k_min, &self.coeffs, m),
        })
    }

    /// Direct evaluation at angle theta (radians).
    pub fn eval_at(&self, theta: f64) -> Complex64 {
        let step = Complex64::new(0.0, theta).exp();
        let mut pow = Complex64::new(0.0, self.k_min as f64 * theta).exp();
        let mut acc = Complex64::new(0.0, 0.0);
        for &c in &self.coeffs {
            acc += c * pow;
            pow *= step;
        }
        acc
    }

    /// Recovers a series from grid samples, placing the coefficients on the
    /// frequency window [window_start, window_start + m). Exact when the
    /// sampled function is a polynomial supported in that window.
    pub fn from_samples(samples: &GridSamples, window_start: i64) -> Self {
        let bins = fft::coeffs_from_grid(&samples.values);
        FourierSeries::new(window_start, fft::window_from_bins(&bins, window_start))
    }

    /// Linear-convolution product of two series (symbol multiplication).
    pub fn convolve(&self, other: &FourierSeries) -> FourierSeries {
        let n = self.coeffs.len() + other.coeffs.len() - 1;
        let mut out = vec![Complex64::new(0.0, 0.0); n];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        FourierSeries::new(self.k_min + other.k_min, out)
    }

    /// Pointwise sum.
    pub fn add(&self, other: &FourierSeries) -> FourierSeries {
        let k_min = self.k_min.min(other.k_min);
        let k_max = self.k_max().max(other.k_max());
        let mut out = vec![Complex64::new(0.0, 0.0); (k_max - k_min + 1) as usize];
        for (i, &c) in self.coeffs.iter().enumerate() {
            out[(self.k_min - k_min) as usize + i] += c;
        }
        for (i, &c) in other.coeffs.iter().enumerate() {
            out[(other.k_min - k_min) as usize + i] += c;
        }
        FourierSeries::new(k_min, out)
    }

    /// Scalar multiple.
    pub fn scale(&self, c: Complex64) -> FourierSeries {
        FourierSeries::with_tail_bound(
            self.k_min,
            self.coeffs.iter().map(|&x| c * x).collect(),
            self.tail_bound * c.norm(),
        )
    }
}

/// Values of a function on the uniform m-point grid of the circle.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSamples {
    values: Vec<Complex64>,
}

impl GridSamples {
    pub fn from_values(values: Vec<Complex64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::domain("a sample grid must contain at least one point"));
        }
        Ok(GridSamples { values })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    /// Uniform-measure L^p quadrature norm, p in [1, inf).
    pub fn lp_norm(&self, p: f64) -> Result<f64> {
        if !(p >= 1.0) || !p.is_finite() {
            return Err(Error::domain(format!("Lp exponent must lie in [1, inf), got {p}")));
        }
        let m = self.values.len() as f64;
        let scale = m.powf(-1.0 / p);
        Ok(scale * lp_of_moduli(self.values.iter().map(|v| v.norm()), p))
    }

    /// Largest sample modulus (grid sup norm).
    pub fn max_norm(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }
}

/// Grid L^p norm of a series: evaluates on the m-point grid and applies the
/// uniform quadrature. Requires p in [1, inf) and m >= 2*bandwidth + 1
/// (strictly above Nyquist), so the p = 2 value is exactly Parseval.
pub fn lp_norm(f: &FourierSeries, p: f64, m: usize) -> Result<f64> {
    if !(p >= 1.0) || !p.is_finite() {
        return Err(Error::domain(format!("Lp exponent must lie in [1, inf), got {p}")));
    }
    if m < 2 * f.bandwidth() + 1 {
        return Err(Error::domain(format!(
            "grid size {m} is below the Nyquist threshold {} for this series",
            2 * f.bandwidth() + 1
        )));
    }
    f.evaluate(m)?.lp_norm(p)
}

/// Grid weak-L^1 quasinorm: with the sample moduli a_1 >= a_2 >= ... in
/// decreasing order, the largest value of a_i * i / m. Equivalently
/// sup_t t * measure{|g| >= t}, evaluated on the grid distribution.
pub fn weak_l1_norm(g: &GridSamples) -> f64 {
    let mut moduli: Vec<f64> = g.values.iter().map(|v| v.norm()).collect();
    moduli.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let m = moduli.len() as f64;
    moduli
        .iter()
        .enumerate()
        .map(|(i, a)| a * (i + 1) as f64 / m)
        .fold(0.0, f64::max)
}

/// Restricts a series to the frequencies k with lo <= k <= hi
/// (the band projection / sharp Fourier cutoff).
pub fn band_project(f: &FourierSeries, lo: i64, hi: i64) -> FourierSeries {
    if lo > hi || hi < f.k_min() || lo > f.k_max() {
        return FourierSeries::new(0, vec![Complex64::new(0.0, 0.0)]);
    }
    let a = lo.max(f.k_min());
    let b = hi.min(f.k_max());
    let start = (a - f.k_min()) as usize;
    let end = (b - f.k_min()) as usize;
    FourierSeries::new(a, f.coeffs[start..=end].to_vec())
}

/// Applies a real Fourier multiplier: coefficient c_k becomes a(k) * c_k.
pub fn apply_multiplier(f: &FourierSeries, a: impl Fn(i64) -> f64) -> FourierSeries {
    let coeffs = f
        .coeffs
        .iter()
        .enumerate()
        .map(|(i, &c)| c * a(f.k_min + i as i64))
        .collect();
    FourierSeries::new(f.k_min, coeffs)
}

/// A finite collection of nonempty integer intervals [lo, hi] (closed),
/// kept sorted by left endpoint.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntervalSet {
    intervals: Vec<(i64, i64)>,
}

impl IntervalSet {
    pub fn new(mut intervals: Vec<(i64, i64)>) -> Result<Self> {
        if intervals.is_empty() {
            return Err(Error::domain("an interval set must contain at least one interval"));
        }
        for &(lo, hi) in &intervals {
            if lo > hi {
                return Err(Error::domain(format!("empty interval [{lo}, {hi}]")));
            }
        }
        intervals.sort();
        Ok(IntervalSet { intervals })
    }

    pub fn intervals(&self) -> &[(i64, i64)] {
        &self.intervals
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// True when no two intervals share a frequency.
    pub fn is_disjoint(&self) -> bool {
        self.intervals.windows(2).all(|w| w[0].1 < w[1].0)
    }

    /// True when consecutive intervals abut exactly: hi_j + 1 = lo_{j+1}.
    pub fn is_consecutive(&self) -> bool {
        self.intervals.windows(2).all(|w| w[0].1 + 1 == w[1].0)
    }

    pub fn contains(&self, k: i64) -> bool {
        self.intervals.iter().any(|&(lo, hi)| lo <= k && k <= hi)
    }
}

/// Samples of the square function (sum_I |P_I f|^2)^{1/2} over the interval
/// collection S, on the m-point grid. Requires m >= 2*bandwidth + 1 of f so
/// every band piece is sampled above Nyquist.
pub fn square_function(f: &FourierSeries, s: &IntervalSet, m: usize) -> Result<GridSamples> {
    if m < 2 * f.bandwidth() + 1 {
        return Err(Error::domain(format!(
            "grid size {m} is below the Nyquist threshold {} for this series",
            2 * f.bandwidth() + 1
        )));
    }
    let mut acc = vec![0.0f64; m];
    for &(lo, hi) in s.intervals() {
        let piece = band_project(f, lo, hi);
        if piece.is_zero() {
            continue;
        }
        let samples = piece.evaluate(m)?;
        for (a, v) in acc.iter_mut().zip(samples.values()) {
            *a += v.norm_sqr();
        }
    }
    GridSamples::from_values(acc.into_iter().map(|a| Complex64::new(a.sqrt(), 0.0)).collect())
}

/// Max-normalized lp sum of nonnegative moduli; stable for p up to ~1e9.
fn lp_of_moduli(moduli: impl Iterator<Item = f64>, p: f64) -> f64 {
    let vals: Vec<f64> = moduli.collect();
    let max = vals.iter().cloned().fold(0.0, f64::max);
    if max == 0.0 {
        return 0.0;
    }
    let sum: f64 = vals.iter().map(|a| (a / max).powf(p)).sum();
    max * sum.powf(1.0 / p)
}

/// Sup of |f| over the circle: grid maximum refined by a parabolic step on
/// |f|^2 and a short golden-section polish around the winning node.
pub fn sup_norm(f: &FourierSeries) -> f64 {
    let m = (f.default_grid() * 4).max(64);
    let samples = fft::eval_grid(f.k_min, f.coeffs(), m);
    let sq: Vec<f64> = samples.iter().map(|v| v.norm_sqr()).collect();
    let (j_best, _) = sq
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
        .unwrap();
    let h = 2.0 * std::f64::consts::PI / m as f64;
    let t0 = j_best as f64 * h;
    let g = |t: f64| f.eval_at(t).norm_sqr();
    // Parabolic vertex through the three neighboring nodes.
    let (ym, y0, yp) = (
        sq[(j_best + m - 1) % m],
        sq[j_best],
        sq[(j_best + 1) % m],
    );
    let denom = ym - 2.0 * y0 + yp;
    let mut best = y0;
    if denom.abs() > 1e-300 {
        let dt = 0.5 * (ym - yp) / denom * h;
        if dt.abs() <= h {
            best = best.max(g(t0 + dt));
        }
    }
    // Golden-section polish on [t0 - h, t0 + h].
    let (mut a, mut b) = (t0 - h, t0 + h);
    let phi = 0.618_033_988_749_894_9;
    let (mut c, mut d) = (b - phi * (b - a), a + phi * (b - a));
    let (mut fc, mut fd) = (g(c), g(d));
    for _ in 0..60 {
        if fc < fd {
            a = c;
            c = d;
            fc = fd;
            d = a + phi * (b - a);
            fd = g(d);
        } else {
            b = d;
            d = c;
            fd = fc;
            c = b - phi * (b - a);
            fc = g(c);
        }
    }
    best.max(fc).max(fd).sqrt()
}
