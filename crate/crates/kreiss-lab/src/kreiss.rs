//! Kreiss-type constants of convolution operators on lp(Z).
//!
//! Four conditions are quantified, each by scanning a parameter grid and
//! reporting the largest normalized quantity seen:
//! * Kreiss / iterated Kreiss: (|lambda|-1)^k ||R(lambda,T)^k||_p over a
//!   grid of lambda outside the unit circle and 1 <= k <= k_max;
//! * strong Kreiss: e^{-|z|} ||e^{zT}||_p over a grid of z;
//! * absolute strong Kreiss: e^{-r} sum_n r^n/n! ||T^n x||_p / ||x||_p;
//! * windowed power sums: the Cesaro-type ratio
//!   sum_{N - 2 sqrt(N) <= n <= N} ||T^n x||_p^p / (N^{p/2} ||x||_p^p).
//!
//! Norm backends: on l1/linf the resolvent kernel coefficients satisfy an
//! exact triangular recurrence (streamed, no grids, stable down to
//! |lambda| - 1 ~ 1e-6); on l2 norms are symbol sups/range distances
//! evaluated directly; other p use the interpolation upper bound of
//! [`crate::norms::conv_norm_bracket`], reported as such. Truncated scans
//! only ever under-estimate, so reported constants are sound lower
//! estimates; truncation events are counted in `unconverged`.

use crate::bounds::ln_factorial;
use crate::error::{Error, Result};
use crate::norms::riesz_thorin_upper;
use crate::symbols::{resolvent_symbol_partial, symbol_exp_scaled_with, ConvOperator, SymbolOptions};
use crate::torus::{sup_norm, FourierSeries};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

/// Which condition a report quantifies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum KreissKind {
    Kreiss,
    IteratedKreiss,
    StrongKreiss,
    AbsoluteStrongKreiss,
}

/// One grid point of a scan: the scan parameter (modulus |lambda| or radius
/// |z|) and the largest normalized value seen there across phases and
/// resolvent powers.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct KreissSample {
    pub parameter: f64,
    pub value: f64,
}

/// Outcome of a Kreiss-type scan.
#[derive(Debug, Clone, Serialize)]
pub struct KreissReport {
    pub kind: KreissKind,
    pub p: f64,
    /// Largest normalized value over the whole grid (the estimated
    /// constant; a lower estimate when `unconverged > 0`).
    pub constant: f64,
    /// True when the scan shows divergence: either the symbol leaves the
    /// closed unit disk (spectral blow-up), a sample is infinite, or the
    /// trend of the samples keeps growing at the hard end of the grid.
    pub diverging: bool,
    pub samples: Vec<KreissSample>,
    /// Number of grid points whose backend hit a truncation cap.
    pub unconverged: usize,
    /// Human-readable description of the grid scanned.
    pub grid: String,
}

/// Default modulus grid: 1 + 2^{-j} for j = 0..20 plus {4, 8}, ascending.
pub fn default_moduli() -> Vec<f64> {
    let mut m: Vec<f64> = (0..=20).rev().map(|j| 1.0 + 0.5f64.powi(j)).collect();
    m.push(4.0);
    m.push(8.0);
    m
}

/// Default radius grid: 40 geometric points from 1 to 100.
pub fn default_radii() -> Vec<f64> {
    (0..40).map(|i| 10f64.powf(2.0 * i as f64 / 39.0)).collect()
}

/// Default number of equispaced phases on each modulus / radius circle.
pub const DEFAULT_PHASES: usize = 16;

const REC_REL_TOL: f64 = 1e-9;
const REC_CHUNK: usize = 8192;
const REC_TERM_CAP: usize = 4_000_000;
const GENERAL_M_MAX: usize = 1 << 19;
const ENGINE_TOL: f64 = 1e-10;
const TREND_SLOPE: f64 = 0.02;
const SPECTRAL_MARGIN: f64 = 1e-9;

/// Kreiss (k_max = 1) or iterated-Kreiss (k_max > 1) constant over a grid
/// of resolvent points lambda = r e^{i theta}, r in `moduli` (all > 1),
/// theta running over [`DEFAULT_PHASES`] equispaced angles.
pub fn kreiss_constant(t: &ConvOperator, p: f64, k_max: u32, moduli: &[f64]) -> Result<KreissReport> {
    if k_max == 0 {
        return Err(Error::domain("resolvent power bound k_max must be at least 1"));
    }
    if moduli.is_empty() {
        return Err(Error::domain("the modulus grid must not be empty"));
    }
    for &r in moduli {
        if !(r > 1.0) {
            return Err(Error::domain(format!("resolvent moduli must exceed 1, got {r}")));
        }
    }
    check_p(p)?;
    let mut moduli = moduli.to_vec();
    moduli.sort_by(|a, b| a.partial_cmp(b).unwrap());

    let symbol_sup = sup_norm(t.symbol());
    let spectral_blowup = symbol_sup > 1.0 + SPECTRAL_MARGIN;
    let phases = DEFAULT_PHASES;

    let grid_pts: Vec<(usize, Complex64)> = moduli
        .iter()
        .enumerate()
        .flat_map(|(i, &r)| {
            (0..phases).map(move |j| {
                let theta = 2.0 * std::f64::consts::PI * j as f64 / phases as f64;
                (i, Complex64::from_polar(r, theta))
            })
        })
        .collect();

    let evals: Vec<(f64, bool)> = grid_pts
        .par_iter()
        .map(|&(_, lambda)| point_kreiss_value(t, p, k_max, lambda))
        .collect();

    let mut per_mod = vec![0.0f64; moduli.len()];
    let mut unconverged = 0usize;
    for ((i, _), (v, conv)) in grid_pts.iter().zip(&evals) {
        per_mod[*i] = per_mod[*i].max(*v);
        if !conv {
            unconverged += 1;
        }
    }
    let samples: Vec<KreissSample> = moduli
        .iter()
        .zip(&per_mod)
        .map(|(&r, &v)| KreissSample { parameter: r, value: v })
        .collect();

    let constant = per_mod.iter().cloned().fold(0.0, f64::max);
    let any_infinite = constant.is_infinite();
    // Trend at the hard end: regression of ln(value) on -ln(r - 1) over the
    // smallest decade of r - 1.
    let s_min = moduli[0] - 1.0;
    let (xs, ys): (Vec<f64>, Vec<f64>) = samples
        .iter()
        .filter(|s| s.parameter - 1.0 <= 10.0 * s_min && s.value.is_finite() && s.value > 0.0)
        .map(|s| (-(s.parameter - 1.0).ln(), s.value.ln()))
        .unzip();
    let trending = xs.len() >= 3 && regression_slope(&xs, &ys) > TREND_SLOPE;
    let diverging = spectral_blowup || any_infinite || trending;

    Ok(KreissReport {
        kind: if k_max == 1 { KreissKind::Kreiss } else { KreissKind::IteratedKreiss },
        p,
        constant,
        diverging,
        samples,
        unconverged,
        grid: format!(
            "{} moduli in [{:.6}, {}], {} phases, k <= {}",
            moduli.len(),
            moduli[0],
            moduli[moduli.len() - 1],
            phases,
            k_max
        ),
    })
}

/// Normalized resolvent size at one lambda: max over 1 <= k <= k_max of
/// (|lambda| - 1)^k ||R(lambda)^k||_p. Returns (value, converged).
fn point_kreiss_value(t: &ConvOperator, p: f64, k_max: u32, lambda: Complex64) -> (f64, bool) {
    let s = lambda.norm() - 1.0;
    if p == 1.0 || p.is_infinite() {
        if let Some(coeffs) = one_sided_window(t.symbol()) {
            let (l1s, converged) = resolvent_l1_by_recurrence(&coeffs, lambda, k_max);
            let v = l1s
                .iter()
                .enumerate()
                .map(|(i, &l1)| s.powi(i as i32 + 1) * l1)
                .fold(0.0, f64::max);
            return (v, converged);
        }
    }
    if p == 2.0 {
        let dist = min_range_distance(t.symbol(), lambda);
        if dist == 0.0 {
            return (f64::INFINITY, true);
        }
        let v = (1..=k_max)
            .map(|k| (s / dist).powi(k as i32))
            .fold(0.0, f64::max);
        return (v, true);
    }
    // General p (and two-sided kernels at p = 1): interpolation upper bound
    // from the resolvent-power symbol, reported as an upper-member estimate.
    let opts = SymbolOptions {
        tol: ENGINE_TOL,
        m_max: GENERAL_M_MAX,
        ..SymbolOptions::default()
    };
    let mut best = 0.0f64;
    let mut all_converged = true;
    for k in 1..=k_max {
        match resolvent_symbol_partial(t, lambda, k, &opts) {
            Ok((rop, converged, _)) => {
                if !converged {
                    all_converged = false;
                }
                let l1 = rop.symbol().coeff_l1_norm();
                let dist = min_range_distance(t.symbol(), lambda);
                let sup = if dist == 0.0 { f64::INFINITY } else { dist.powi(-(k as i32)) };
                let upper = riesz_thorin_upper(l1, sup.min(l1), l1, p).unwrap_or(f64::INFINITY);
                best = best.max(s.powi(k as i32) * upper);
            }
            Err(Error::NearSingular { .. }) => return (f64::INFINITY, true),
            Err(_) => all_converged = false,
        }
    }
    (best, all_converged)
}

/// Strong Kreiss constant: e^{-|z|} ||e^{zT}||_p over z = r e^{i theta},
/// r in `radii` (sorted ascending), theta over `phases` equispaced angles.
pub fn strong_kreiss_constant(t: &ConvOperator, p: f64, radii: &[f64], phases: usize) -> Result<KreissReport> {
    if radii.is_empty() {
        return Err(Error::domain("the radius grid must not be empty"));
    }
    if radii.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::domain("radii must be sorted in ascending order"));
    }
    if !(radii[0] > 0.0) {
        return Err(Error::domain(format!("radii must be positive, got {}", radii[0])));
    }
    if phases == 0 {
        return Err(Error::domain("at least one phase is required"));
    }
    check_p(p)?;

    let symbol_sup = sup_norm(t.symbol());
    let spectral_blowup = symbol_sup > 1.0 + SPECTRAL_MARGIN;

    let grid_pts: Vec<(usize, Complex64)> = radii
        .iter()
        .enumerate()
        .flat_map(|(i, &r)| {
            (0..phases).map(move |j| {
                let theta = 2.0 * std::f64::consts::PI * j as f64 / phases as f64;
                (i, Complex64::from_polar(r, theta))
            })
        })
        .collect();

    let evals: Vec<Result<f64>> = grid_pts
        .par_iter()
        .map(|&(_, z)| point_strong_value(t, p, z))
        .collect();

    let mut per_rad = vec![0.0f64; radii.len()];
    for ((i, _), ev) in grid_pts.iter().zip(evals.iter()) {
        match ev {
            Ok(v) => per_rad[*i] = per_rad[*i].max(*v),
            Err(_) => {}
        }
    }
    // Propagate the first hard failure, if any.
    for ev in evals {
        ev?;
    }

    let samples: Vec<KreissSample> = radii
        .iter()
        .zip(&per_rad)
        .map(|(&r, &v)| KreissSample { parameter: r, value: v })
        .collect();
    let constant = per_rad.iter().cloned().fold(0.0, f64::max);

    // Trend over the top decade of radii: slope of ln(value) per unit radius.
    let r_max = radii[radii.len() - 1];
    let (xs, ys): (Vec<f64>, Vec<f64>) = samples
        .iter()
        .filter(|s| s.parameter >= r_max / 10.0 && s.value.is_finite() && s.value > 0.0)
        .map(|s| (s.parameter, s.value.ln()))
        .unzip();
    let trending = xs.len() >= 3 && regression_slope(&xs, &ys) > TREND_SLOPE;
    let diverging = spectral_blowup || constant.is_infinite() || trending;

    Ok(KreissReport {
        kind: KreissKind::StrongKreiss,
        p,
        constant,
        diverging,
        samples,
        unconverged: 0,
        grid: format!(
            "{} radii in [{}, {}], {} phases",
            radii.len(),
            radii[0],
            r_max,
            phases
        ),
    })
}

/// e^{-|z|} ||e^{zT}||_p at one z.
fn point_strong_value(t: &ConvOperator, p: f64, z: Complex64) -> Result<f64> {
    if p == 2.0 {
        // ||e^{zT}||_2 = sup |e^{z q}| = exp(max Re(z q)); no grids beyond
        // the sample search for the maximum.
        let m = max_re_on_circle(t.symbol(), z);
        return Ok((m - z.norm()).exp());
    }
    let opts = SymbolOptions {
        tol: ENGINE_TOL,
        m_max: 1 << 20,
        ..SymbolOptions::default()
    };
    let e = symbol_exp_scaled_with(t, z, &opts)?;
    let l1 = e.symbol().coeff_l1_norm();
    if p == 1.0 || p.is_infinite() {
        return Ok(l1);
    }
    let sup = (max_re_on_circle(t.symbol(), z) - z.norm()).exp();
    riesz_thorin_upper(l1, sup.min(l1), l1, p)
}

/// Absolute strong Kreiss constant along a radius grid for a concrete
/// finitely supported vector x (given by its values on a contiguous
/// window): e^{-r} sum_{n <= n_max} r^n/n! ||T^n x||_p / ||x||_p.
///
/// Refuses (with the required cutoff) when the discarded tail, bounded via
/// ||T^n x||_p <= ||T||_1^n ||x||_p, could exceed 1e-12 at the largest radius.
pub fn absolute_strong_kreiss_constant(
    t: &ConvOperator,
    p: f64,
    x: &[Complex64],
    radii: &[f64],
    n_max: usize,
) -> Result<KreissReport> {
    if radii.is_empty() {
        return Err(Error::domain("the radius grid must not be empty"));
    }
    if radii.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::domain("radii must be sorted in ascending order"));
    }
    if !(radii[0] > 0.0) {
        return Err(Error::domain(format!("radii must be positive, got {}", radii[0])));
    }
    if !(p >= 1.0) || !p.is_finite() {
        return Err(Error::domain(format!("vector exponent must lie in [1, inf), got {p}")));
    }
    if x.is_empty() || x.iter().all(|v| v.norm() == 0.0) {
        return Err(Error::domain("the probe vector must be nonzero"));
    }

    const TAIL_BUDGET: f64 = 1e-12;
    let r_top = radii[radii.len() - 1];
    let growth = t.l1_norm().max(1.0);
    let tail = poisson_tail_bound(r_top, growth, n_max);
    if tail > TAIL_BUDGET {
        let mut required = n_max.max(1);
        while poisson_tail_bound(r_top, growth, required) > TAIL_BUDGET {
            required = (required * 2).max(required + 16);
            if required > 1 << 26 {
                break;
            }
        }
        // Tighten by bisection.
        let mut lo = n_max;
        let mut hi = required;
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if poisson_tail_bound(r_top, growth, mid) > TAIL_BUDGET {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        return Err(Error::TruncationTooShort {
            context: format!("absolute strong Kreiss scan of {}", t.descriptor()),
            given: n_max,
            required: hi,
            tail,
            budget: TAIL_BUDGET,
        });
    }

    // Norms ||T^n x||_p for n = 0..n_max by repeated convolution.
    let x_norm = lp_slice(x, p);
    let mut cur = x.to_vec();
    let mut norms = Vec::with_capacity(n_max + 1);
    norms.push(lp_slice(&cur, p));
    for _ in 1..=n_max {
        cur = convolve_kernel(t.symbol().coeffs(), &cur);
        norms.push(lp_slice(&cur, p));
    }

    let samples: Vec<KreissSample> = radii
        .iter()
        .map(|&r| {
            let ln_r = r.ln();
            let mut acc = 0.0;
            for (n, &nn) in norms.iter().enumerate() {
                let w = (n as f64 * ln_r - ln_factorial(n as u64) - r).exp();
                acc += w * nn;
            }
            KreissSample {
                parameter: r,
                value: acc / x_norm,
            }
        })
        .collect();

    let constant = samples.iter().map(|s| s.value).fold(0.0, f64::max);
    let r_max = radii[radii.len() - 1];
    let (xs, ys): (Vec<f64>, Vec<f64>) = samples
        .iter()
        .filter(|s| s.parameter >= r_max / 10.0 && s.value.is_finite() && s.value > 0.0)
        .map(|s| (s.parameter, s.value.ln()))
        .unzip();
    let trending = xs.len() >= 3 && regression_slope(&xs, &ys) > TREND_SLOPE;

    Ok(KreissReport {
        kind: KreissKind::AbsoluteStrongKreiss,
        p,
        constant,
        diverging: trending || constant.is_infinite(),
        samples,
        unconverged: 0,
        grid: format!("{} radii in [{}, {}], terms <= {}", radii.len(), radii[0], r_max, n_max),
    })
}

/// The windowed power-sum ratio
/// sum_{ceil(N - 2 sqrt(N)) <= n <= N} ||T^n x||_p^p / (N^{p/2} ||x||_p^p)
/// for N >= 4.
pub fn window_power_sum_ratio(t: &ConvOperator, p: f64, x: &[Complex64], n_big: u64) -> Result<f64> {
    if n_big < 4 {
        return Err(Error::domain(format!("window power sums need N >= 4, got {n_big}")));
    }
    if !(p >= 1.0) || !p.is_finite() {
        return Err(Error::domain(format!("vector exponent must lie in [1, inf), got {p}")));
    }
    if x.is_empty() || x.iter().all(|v| v.norm() == 0.0) {
        return Err(Error::domain("the probe vector must be nonzero"));
    }
    let nf = n_big as f64;
    let lo = (nf - 2.0 * nf.sqrt()).ceil().max(0.0) as u64;
    let x_norm = lp_slice(x, p);
    let mut cur = x.to_vec();
    let mut acc = 0.0;
    for n in 0..=n_big {
        if n > 0 {
            cur = convolve_kernel(t.symbol().coeffs(), &cur);
        }
        if n >= lo {
            acc += (lp_slice(&cur, p) / x_norm).powf(p);
        }
    }
    Ok(acc / nf.powf(p / 2.0))
}

// ---------------------------------------------------------------------------
// Backends.

fn check_p(p: f64) -> Result<()> {
    if !(p >= 1.0) {
        return Err(Error::domain(format!("Lebesgue index must lie in [1, inf], got {p}")));
    }
    Ok(())
}

/// Kernel window starting at frequency 0 for a one-sided symbol, or None.
fn one_sided_window(s: &FourierSeries) -> Option<Vec<Complex64>> {
    if s.k_min() < 0 {
        return None;
    }
    let mut w = vec![Complex64::new(0.0, 0.0); s.k_min() as usize];
    w.extend_from_slice(s.coeffs());
    Some(w)
}

/// Streams the coefficients of R(lambda)^k for k = 1..k_max of a one-sided
/// kernel via the exact triangular recurrence
/// (lambda - c_0) h^{(k)}_n = h^{(k-1)}_n + sum_{d=1}^{B} c_d h^{(k)}_{n-d}
/// (with h^{(0)} the unit impulse) and accumulates their l1 norms. Stops
/// after two consecutive quiet chunks (chunk mass <= 1e-9 of the total per
/// level) or at the term cap, whichever comes first.
fn resolvent_l1_by_recurrence(coeffs: &[Complex64], lambda: Complex64, k_max: u32) -> (Vec<f64>, bool) {
    let b = coeffs.len() - 1;
    let c0 = coeffs[0];
    let inv = (lambda - c0).finv();
    if !inv.is_finite() {
        return (vec![f64::INFINITY; k_max as usize], true);
    }
    let kk = k_max as usize;
    // Ring buffers of the last B values per level (unused when B = 0).
    let mut rings = vec![vec![Complex64::new(0.0, 0.0); b.max(1)]; kk];
    let mut totals = vec![0.0f64; kk];
    let mut chunk_add = vec![0.0f64; kk];
    let mut prev_quiet = false;
    let mut n = 0usize;
    loop {
        let mut lower_value = Complex64::new(0.0, 0.0); // h^{(k-1)}_n
        for k in 0..kk {
            let mut rhs = if k == 0 {
                if n == 0 {
                    Complex64::new(1.0, 0.0)
                } else {
                    Complex64::new(0.0, 0.0)
                }
            } else {
                lower_value
            };
            let dmax = b.min(n);
            for d in 1..=dmax {
                rhs += coeffs[d] * rings[k][(n - d) % b];
            }
            let h = rhs * inv;
            if b > 0 {
                rings[k][n % b] = h;
            }
            let a = h.norm();
            totals[k] += a;
            chunk_add[k] += a;
            lower_value = h;
        }
        n += 1;
        if n % REC_CHUNK == 0 {
            let quiet = (0..kk).all(|k| chunk_add[k] <= REC_REL_TOL * totals[k].max(f64::MIN_POSITIVE));
            for v in &mut chunk_add {
                *v = 0.0;
            }
            if quiet && prev_quiet {
                return (totals, true);
            }
            prev_quiet = quiet;
            if n >= REC_TERM_CAP {
                return (totals, false);
            }
        }
    }
}

/// Minimal distance from lambda to the sampled symbol range, with a local
/// golden-section polish around the winning node.
fn min_range_distance(s: &FourierSeries, lambda: Complex64) -> f64 {
    let m = (s.default_grid() * 4).max(4096);
    let mut best_j = 0usize;
    let mut best = f64::INFINITY;
    for j in 0..m {
        let theta = 2.0 * std::f64::consts::PI * j as f64 / m as f64;
        let d = (lambda - s.eval_at(theta)).norm();
        if d < best {
            best = d;
            best_j = j;
        }
    }
    let h = 2.0 * std::f64::consts::PI / m as f64;
    let f = |t: f64| (lambda - s.eval_at(t)).norm();
    golden_min(f, best_j as f64 * h - h, best_j as f64 * h + h).min(best)
}

/// Max over the circle of Re(z * q(gamma)), sampled then polished.
fn max_re_on_circle(s: &FourierSeries, z: Complex64) -> f64 {
    let m = (s.default_grid() * 4).max(4096);
    let mut best_j = 0usize;
    let mut best = f64::NEG_INFINITY;
    for j in 0..m {
        let theta = 2.0 * std::f64::consts::PI * j as f64 / m as f64;
        let v = (z * s.eval_at(theta)).re;
        if v > best {
            best = v;
            best_j = j;
        }
    }
    let h = 2.0 * std::f64::consts::PI / m as f64;
    let f = |t: f64| -(z * s.eval_at(t)).re;
    let polished = -golden_min(f, best_j as f64 * h - h, best_j as f64 * h + h);
    polished.max(best)
}

fn golden_min(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let phi = 0.618_033_988_749_894_9;
    let mut c = b - phi * (b - a);
    let mut d = a + phi * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..70 {
        if fc > fd {
            a = c;
            c = d;
            fc = fd;
            d = a + phi * (b - a);
            fd = f(d);
        } else {
            b = d;
            d = c;
            fd = fc;
            c = b - phi * (b - a);
            fc = f(c);
        }
    }
    fc.min(fd)
}

/// Least-squares slope of ys against xs.
fn regression_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut num = 0.0;
    let mut den = 0.0;
    for (x, y) in xs.iter().zip(ys) {
        num += (x - mx) * (y - my);
        den += (x - mx) * (x - mx);
    }
    if den == 0.0 {
        0.0
    } else {
        num / den
    }
}

/// Upper bound for the truncated Poisson-type tail
/// sum_{n > n_max} r^n L^n / n! e^{-r}.
fn poisson_tail_bound(r: f64, l1: f64, n_max: usize) -> f64 {
    let rl = r * l1;
    let mut ln_term = (n_max as f64 + 1.0) * rl.ln() - ln_factorial(n_max as u64 + 1) - r;
    let mut acc = 0.0;
    let mut n = n_max + 1;
    loop {
        acc += ln_term.exp();
        n += 1;
        ln_term += rl.ln() - (n as f64).ln();
        if ln_term < acc.max(1e-300).ln() - 40.0 || n > n_max + 10_000_000 {
            break;
        }
    }
    acc
}

fn lp_slice(x: &[Complex64], p: f64) -> f64 {
    let max = x.iter().map(|v| v.norm()).fold(0.0, f64::max);
    if max == 0.0 {
        return 0.0;
    }
    let sum: f64 = x.iter().map(|v| (v.norm() / max).powf(p)).sum();
    max * sum.powf(1.0 / p)
}

fn convolve_kernel(kernel: &[Complex64], x: &[Complex64]) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); x.len() + kernel.len() - 1];
    for (i, &k) in kernel.iter().enumerate() {
        if k.norm() == 0.0 {
            continue;
        }
        for (j, &v) in x.iter().enumerate() {
            out[i + j] += k * v;
        }
    }
    out
}
