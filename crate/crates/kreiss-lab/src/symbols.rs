//! Convolution (Laurent) operators on lp(Z) and their symbol calculus.
//!
//! A convolution operator is identified with its symbol q(gamma) = sum c_k
//! gamma^k on the unit circle; composition of operators is multiplication of
//! symbols. Powers, damped exponentials and resolvent powers are computed by
//! an adaptive sample-transform-recover loop: evaluate the base symbol on a
//! grid, apply the scalar map pointwise, recover coefficients by FFT, and
//! double the grid until two consecutive stages agree in l1 to the requested
//! tolerance over the coefficients standing above the rounding floor.
//! Sub-floor coefficients are indistinguishable from rounding noise; they are
//! zeroed and their mass accounted in the result's tail bound.

use crate::error::{Error, Result};
use crate::fft;
use crate::torus::FourierSeries;
use num_complex::Complex64;

/// A bounded convolution operator acting on the two-sided sequence spaces
/// lp(Z), identified by its symbol.
#[derive(Debug, Clone)]
pub struct ConvOperator {
    symbol: FourierSeries,
    descriptor: String,
}

impl ConvOperator {
    pub fn new(symbol: FourierSeries, descriptor: impl Into<String>) -> Self {
        ConvOperator {
            symbol,
            descriptor: descriptor.into(),
        }
    }

    /// The right shift: symbol gamma.
    pub fn shift() -> Self {
        ConvOperator::new(FourierSeries::monomial(1), "shift")
    }

    /// The identity operator.
    pub fn identity() -> Self {
        ConvOperator::new(FourierSeries::constant(Complex64::new(1.0, 0.0)), "identity")
    }

    /// c times the identity.
    pub fn scaled_identity(c: Complex64) -> Self {
        ConvOperator::new(FourierSeries::constant(c), format!("scaled-identity({c})"))
    }

    /// Builds an operator directly from a coefficient window.
    pub fn from_coeffs(k_min: i64, coeffs: Vec<Complex64>, descriptor: impl Into<String>) -> Self {
        ConvOperator::new(FourierSeries::new(k_min, coeffs), descriptor)
    }

    pub fn symbol(&self) -> &FourierSeries {
        &self.symbol
    }

    pub fn descriptor(&self) -> &str {
        &self.descriptor
    }

    /// True when the kernel is supported on nonnegative frequencies, i.e.
    /// the operator maps the past to the future only (causal filter).
    pub fn is_one_sided(&self) -> bool {
        self.symbol.k_min() >= 0
    }

    /// l1 norm of the kernel = exact operator norm on l1 and l-infinity.
    pub fn l1_norm(&self) -> f64 {
        self.symbol.coeff_l1_norm()
    }

    /// Applies the operator to a finitely supported input window; returns
    /// the output window together with its starting index, where the input
    /// window starts at index 0.
    pub fn apply_to(&self, x: &[Complex64]) -> (i64, Vec<Complex64>) {
        let c = self.symbol.coeffs();
        let mut out = vec![Complex64::new(0.0, 0.0); x.len() + c.len() - 1];
        for (i, &ci) in c.iter().enumerate() {
            for (j, &xj) in x.iter().enumerate() {
                out[i + j] += ci * xj;
            }
        }
        (self.symbol.k_min(), out)
    }
}

/// Options for the adaptive symbol calculus.
#[derive(Debug, Clone)]
pub struct SymbolOptions {
    /// Relative l1 agreement required between consecutive stages.
    pub tol: f64,
    /// Largest grid the adaptive loop may use.
    pub m_max: usize,
    /// Minimal allowed distance from a resolvent point to the sampled
    /// symbol range.
    pub singularity_floor: f64,
}

impl Default for SymbolOptions {
    fn default() -> Self {
        SymbolOptions {
            tol: 1e-12,
            m_max: 1 << 22,
            singularity_floor: 1e-8,
        }
    }
}

impl SymbolOptions {
    pub fn with_tol(tol: f64) -> Self {
        SymbolOptions {
            tol,
            ..SymbolOptions::default()
        }
    }
}

/// The Blaschke (Mobius) symbol q_a(gamma) = (gamma - a)/(1 - a gamma) for
/// 0 <= a < 1, truncated so that the discarded geometric tail has l1 mass
/// at most `tol`. Coefficients: c_0 = -a, c_k = (1 - a^2) a^{k-1} for k >= 1;
/// the full l1 norm is 1 + 2a and the symbol is unimodular on the circle.
pub fn mobius_symbol(a: f64, tol: f64) -> Result<ConvOperator> {
    if !(0.0..1.0).contains(&a) {
        return Err(Error::domain(format!("Blaschke parameter must lie in [0, 1), got {a}")));
    }
    if !(tol > 0.0) {
        return Err(Error::domain(format!("truncation tolerance must be positive, got {tol}")));
    }
    if a == 0.0 {
        return Ok(ConvOperator::new(FourierSeries::monomial(1), "mobius(a=0)"));
    }
    // Tail after keeping k <= K is sum_{k>K} (1-a^2) a^{k-1} = (1+a) a^K.
    let k_cut = ((tol / (1.0 + a)).ln() / a.ln()).ceil().max(1.0);
    const MAX_SUPPORT: f64 = 1e7;
    if k_cut > MAX_SUPPORT {
        return Err(Error::TruncationTooShort {
            context: format!("mobius symbol with a = {a}"),
            given: MAX_SUPPORT as usize,
            required: k_cut as usize,
            tail: (1.0 + a) * a.powf(MAX_SUPPORT),
            budget: tol,
        });
    }
    let k_cut = k_cut as usize;
    let mut coeffs = Vec::with_capacity(k_cut + 1);
    coeffs.push(Complex64::new(-a, 0.0));
    let mut geo = 1.0 - a * a;
    for _ in 1..=k_cut {
        coeffs.push(Complex64::new(geo, 0.0));
        geo *= a;
    }
    // geo is now (1-a^2) a^{k_cut}; the discarded tail is geo / (1-a) = (1+a) a^{k_cut}.
    let tail = geo / (1.0 - a);
    Ok(ConvOperator::new(
        FourierSeries::with_tail_bound(0, coeffs, tail),
        format!("mobius(a={a})"),
    ))
}

/// z^n by repeated squaring (exact multiplications, no polar round trip).
fn cpow(z: Complex64, n: u64) -> Complex64 {
    let mut result = Complex64::new(1.0, 0.0);
    let mut base = z;
    let mut e = n;
    while e > 0 {
        if e & 1 == 1 {
            result *= base;
        }
        base *= base;
        e >>= 1;
    }
    result
}

struct AdaptiveOutcome {
    series: FourierSeries,
    converged: bool,
    last_diffs: (f64, f64),
    map_cond: f64,
}

/// Core adaptive loop: sample the base symbol on an m-point grid, map each
/// sample, recover coefficients on the window starting at `window_base(m)`,
/// and double m until two consecutive stages agree in l1 within
/// tol * max(1, l1). `map_cond` is the relative-error amplification of the
/// pointwise map (e.g. ~ N for z -> z^N); it sets the rounding floor below
/// which recovered coefficients are treated as noise. Returns the finest
/// stage either way.
fn adaptive_symbol(
    base: &FourierSeries,
    map: &dyn Fn(Complex64) -> Complex64,
    map_cond: f64,
    window_base: &dyn Fn(usize) -> i64,
    m0: usize,
    opts: &SymbolOptions,
) -> AdaptiveOutcome {
    let mut m = m0.min(opts.m_max).max(base.bandwidth() + 1).next_power_of_two();
    let mut prev: Option<(i64, Vec<Complex64>)> = None;
    let mut diffs = (f64::INFINITY, f64::INFINITY);
    loop {
        let samples = fft::eval_grid(base.k_min(), base.coeffs(), m);
        let mapped: Vec<Complex64> = samples.into_iter().map(|s| map(s)).collect();
        let bins = fft::coeffs_from_grid(&mapped);
        let wb = window_base(m);
        let window = fft::window_from_bins(&bins, wb);
        if let Some((pb, pw)) = &prev {
            // Compare only coefficients significant in at least one stage:
            // the raw windows carry ~ m bins of scattered rounding dust
            // (FFT plus the map's own amplification), and summing that dust
            // over the whole window would put a floor under the stage
            // difference that no amount of refinement could beat.
            let diff = significant_l1_diff(*pb, pw, wb, &window, map_cond);
            diffs = (diffs.1, diff);
            let scale = fft::l1(&window).max(1.0);
            if diff <= opts.tol * scale {
                return AdaptiveOutcome {
                    series: FourierSeries::new(wb, window),
                    converged: true,
                    last_diffs: diffs,
                    map_cond,
                };
            }
        }
        if m >= opts.m_max {
            return AdaptiveOutcome {
                series: FourierSeries::new(wb, window),
                converged: false,
                last_diffs: diffs,
                map_cond,
            };
        }
        prev = Some((wb, window));
        m *= 2;
    }
}

/// l1 distance between two coefficient windows compared by absolute
/// frequency, restricted to frequencies significant (above the rounding
/// floor) in at least one of the windows; frequencies covered by only one
/// window contribute their full modulus when significant there.
fn significant_l1_diff(
    base_a: i64,
    a: &[Complex64],
    base_b: i64,
    b: &[Complex64],
    map_cond: f64,
) -> f64 {
    let floor_a = noise_floor(a, map_cond);
    let floor_b = noise_floor(b, map_cond);
    let lo = base_a.min(base_b);
    let hi = (base_a + a.len() as i64).max(base_b + b.len() as i64);
    let zero = Complex64::new(0.0, 0.0);
    let mut diff = 0.0;
    for f in lo..hi {
        let va = if f >= base_a && f < base_a + a.len() as i64 {
            a[(f - base_a) as usize]
        } else {
            zero
        };
        let vb = if f >= base_b && f < base_b + b.len() as i64 {
            b[(f - base_b) as usize]
        } else {
            zero
        };
        if va.norm() >= floor_a || vb.norm() >= floor_b {
            diff += (va - vb).norm();
        }
    }
    diff
}

/// Requires convergence, then zeroes noise-level coefficients and accounts
/// the removed mass, together with the final inter-stage discrepancy, in the
/// tail bound.
fn finish(outcome: AdaptiveOutcome, context: &str) -> Result<FourierSeries> {
    if !outcome.converged {
        return Err(Error::NotConverged {
            context: context.to_string(),
            last_diffs: outcome.last_diffs,
        });
    }
    Ok(trim_noise(outcome))
}

/// Modulus below which a recovered coefficient is indistinguishable from
/// rounding: the transforms contribute ~ eps * log2(m) * l1 per bin, and the
/// pointwise map amplifies sample rounding by its conditioning factor (about
/// N for z -> z^N), which the forward transform scatters across bins.
fn noise_floor(w: &[Complex64], map_cond: f64) -> f64 {
    let factor = 8f64.max(4.0 * (w.len().max(2) as f64).log2()).max(map_cond);
    factor * f64::EPSILON * fft::l1(w)
}

/// Zeroes sub-floor coefficients (anywhere in the window — the dust is
/// scattered, not confined to the edges) and accounts the removed mass,
/// together with the final inter-stage discrepancy, in the tail bound.
fn trim_noise(outcome: AdaptiveOutcome) -> FourierSeries {
    let s = outcome.series;
    let coeffs = s.coeffs();
    let floor = noise_floor(coeffs, outcome.map_cond);
    let mut dropped = 0.0;
    let mut kept: Vec<Complex64> = coeffs
        .iter()
        .map(|&v| {
            if v.norm() < floor {
                dropped += v.norm();
                Complex64::new(0.0, 0.0)
            } else {
                v
            }
        })
        .collect();
    let stage_diff = if outcome.last_diffs.1.is_finite() {
        outcome.last_diffs.1
    } else {
        0.0
    };
    let lo = kept.iter().position(|v| v.norm() > 0.0);
    let hi = kept.iter().rposition(|v| v.norm() > 0.0);
    match (lo, hi) {
        (Some(lo), Some(hi)) => {
            kept.truncate(hi + 1);
            kept.drain(..lo);
            FourierSeries::with_tail_bound(s.k_min() + lo as i64, kept, stage_diff + dropped)
        }
        _ => FourierSeries::with_tail_bound(
            0,
            vec![Complex64::new(0.0, 0.0)],
            stage_diff + dropped,
        ),
    }
}

/// N-th power of the operator: symbol q(gamma)^N. The frequency window is
/// pinned to [N * k_min, N * k_min + m), which contains the true support
/// [N * k_min, N * k_max] as soon as m exceeds N * bandwidth.
pub fn symbol_pow(t: &ConvOperator, n: u64, tol: f64) -> Result<ConvOperator> {
    symbol_pow_with(t, n, &SymbolOptions::with_tol(tol))
}

pub fn symbol_pow_with(t: &ConvOperator, n: u64, opts: &SymbolOptions) -> Result<ConvOperator> {
    check_tol(opts)?;
    if n == 0 {
        return Ok(ConvOperator::new(
            FourierSeries::constant(Complex64::new(1.0, 0.0)),
            format!("pow({}, 0)", t.descriptor()),
        ));
    }
    let s = t.symbol();
    if n == 1 {
        return Ok(ConvOperator::new(s.clone(), format!("pow({}, 1)", t.descriptor())));
    }
    let bw = s.bandwidth().max(1);
    let m0 = fft::next_pow2(8 * ((n as usize).saturating_mul(bw) + 64));
    let base_freq = (n as i64) * s.k_min();
    let outcome = adaptive_symbol(s, &|z| cpow(z, n), n as f64, &|_m| base_freq, m0, opts);
    let series = finish(outcome, &format!("pow({}, {})", t.descriptor(), n))?;
    Ok(ConvOperator::new(series, format!("pow({}, {n})", t.descriptor())))
}

/// Damped operator exponential: the symbol exp(z * q(gamma) - |z|), i.e.
/// e^{-|z|} e^{z q}. For a power-bounded q this is the natural normalization
/// in which the strong Kreiss condition asks for uniform boundedness in z.
pub fn symbol_exp_scaled(t: &ConvOperator, z: Complex64, tol: f64) -> Result<ConvOperator> {
    symbol_exp_scaled_with(t, z, &SymbolOptions::with_tol(tol))
}

pub fn symbol_exp_scaled_with(
    t: &ConvOperator,
    z: Complex64,
    opts: &SymbolOptions,
) -> Result<ConvOperator> {
    check_tol(opts)?;
    let s = t.symbol();
    let r = z.norm();
    let bw = s.bandwidth().max(1);
    // Taylor terms up to ~ r + 10 sqrt(r) + 40 carry all mass above rounding;
    // each term n spreads over n * bandwidth frequencies.
    let n_eff = (r + 10.0 * r.sqrt() + 40.0).ceil() as usize;
    let m0 = fft::next_pow2(8 * (n_eff.saturating_mul(bw) + 64));
    let one_sided = s.k_min() >= 0;
    let window_base = move |m: usize| if one_sided { 0 } else { -((m / 2) as i64) };
    // d/dq exp(z q - |z|) = z exp(..): sample rounding is amplified ~ r(l1+1).
    let map_cond = (r * (s.coeff_l1_norm() + 1.0)).max(1.0);
    let outcome = adaptive_symbol(s, &|q| (z * q - r).exp(), map_cond, &window_base, m0, opts);
    let series = finish(outcome, &format!("exp-scaled({}, z={z})", t.descriptor()))?;
    Ok(ConvOperator::new(series, format!("exp-scaled({}, z={z})", t.descriptor())))
}

/// k-th resolvent power: the symbol (lambda - q(gamma))^{-k}, requiring
/// lambda to keep at least `singularity_floor` distance from the sampled
/// symbol range.
pub fn resolvent_symbol(t: &ConvOperator, lambda: Complex64, k: u32, tol: f64) -> Result<ConvOperator> {
    resolvent_symbol_with(t, lambda, k, &SymbolOptions::with_tol(tol))
}

pub fn resolvent_symbol_with(
    t: &ConvOperator,
    lambda: Complex64,
    k: u32,
    opts: &SymbolOptions,
) -> Result<ConvOperator> {
    let (op, converged, diffs) = resolvent_symbol_partial(t, lambda, k, opts)?;
    if !converged {
        return Err(Error::NotConverged {
            context: format!("resolvent({}, lambda={lambda}, k={k})", t.descriptor()),
            last_diffs: diffs,
        });
    }
    Ok(op)
}

/// As [`resolvent_symbol_with`] but returns the finest-stage result even when
/// the adaptive loop hit its cap, flagging convergence separately. Singular
/// points still error.
pub(crate) fn resolvent_symbol_partial(
    t: &ConvOperator,
    lambda: Complex64,
    k: u32,
    opts: &SymbolOptions,
) -> Result<(ConvOperator, bool, (f64, f64))> {
    check_tol(opts)?;
    if k == 0 {
        return Err(Error::domain("resolvent power k must be at least 1"));
    }
    let s = t.symbol();
    // Distance from lambda to the symbol range, on a dense check grid.
    let check_m = s.default_grid().max(1024);
    let min_dist = fft::eval_grid(s.k_min(), s.coeffs(), check_m)
        .into_iter()
        .map(|q| (lambda - q).norm())
        .fold(f64::INFINITY, f64::min);
    if min_dist < opts.singularity_floor {
        return Err(Error::NearSingular {
            lambda,
            min_distance: min_dist,
            floor: opts.singularity_floor,
        });
    }
    // Coefficients decay like dist^{-1} per unit index at scale-length
    // ~ l1 / dist; size the first grid to cover k such lengths generously.
    let l1 = s.coeff_l1_norm().max(1.0);
    let length = (64.0 * l1 / min_dist).ceil().min(1e9) as usize;
    let m0 = fft::next_pow2((k as usize).saturating_mul(length.max(256)));
    let one_sided = s.k_min() >= 0;
    let window_base = move |m: usize| if one_sided { 0 } else { -((m / 2) as i64) };
    // |d/dq (lambda - q)^{-k}| / |(lambda - q)^{-k}| = k / |lambda - q|; the
    // sample rounding scale is eps * (|lambda| + l1).
    let map_cond = ((k as f64) * (lambda.norm() + l1) / min_dist).max(1.0);
    let outcome = adaptive_symbol(
        s,
        &|q| cpow((lambda - q).finv(), k as u64),
        map_cond,
        &window_base,
        m0,
        opts,
    );
    let converged = outcome.converged;
    let diffs = outcome.last_diffs;
    let series = trim_noise(outcome);
    Ok((
        ConvOperator::new(series, format!("resolvent({}, lambda={lambda}, k={k})", t.descriptor())),
        converged,
        diffs,
    ))
}

fn check_tol(opts: &SymbolOptions) -> Result<()> {
    if !(opts.tol > 0.0) {
        return Err(Error::domain(format!(
            "adaptive tolerance must be positive, got {}",
            opts.tol
        )));
    }
    Ok(())
}
