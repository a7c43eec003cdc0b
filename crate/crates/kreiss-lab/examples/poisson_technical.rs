//! Poisson-window weights and the uniform estimates behind the bootstrap.
//!
//! The damped exponential e^{-N} e^{N T} spreads the mass of T^n over a
//! window of width ~ sqrt(N) around n = N with Poisson(N) weights
//! P_n = e^{-N} N^n / n!. Three facts make the bootstrap tick: the central
//! weights are ~ 1/sqrt(N) large, the weight of the window [N - 2 sqrt(N), N]
//! stays bounded below, and the scaled variation of the inverse masses stays
//! bounded as N grows. The same windowing underlies the absolute strong
//! Kreiss condition, checked here for a Blaschke operator on l2.
//!
//! Run with: cargo run --release --example poisson_technical

use kreiss_lab::bounds::{poisson_window_weight, technical_check};
use kreiss_lab::kreiss::{absolute_strong_kreiss_constant, window_power_sum_ratio};
use kreiss_lab::symbols::{mobius_symbol, ConvOperator};
use num_complex::Complex64;

fn main() -> kreiss_lab::Result<()> {
    println!("Poisson window weight sum_{{N-2sqrt(N) <= n <= N}} P_n:");
    for n in [100u64, 1_000, 10_000] {
        println!(
            "  N = {n:>6}: weight {:.6} (Gaussian picture: Phi(0) - Phi(-2) = 0.4772)",
            poisson_window_weight(n, n)
        );
    }
    println!();

    for n in [100u64, 10_000] {
        let r = technical_check(n)?;
        println!("technical check at N = {}:", r.n);
        println!("  central-window mass ratios r_n / r_0 in [{:.4}, {:.4}], r_0 = {:.6}", r.min_ratio, r.max_ratio, r.r0);
        println!("  e^N-scaled variation of inverse masses: {:.4} (uniformly bounded in N)", r.variation_sum_scaled);
        println!("  total variation of the weights:         {:.4}", r.weight_variation);
    }
    println!();

    // Absolute strong Kreiss: windowed power sums under the damped
    // exponential stay bounded for an l2 isometry.
    let mobius = mobius_symbol(0.5, 1e-12)?;
    let e0 = [Complex64::new(1.0, 0.0)];
    let report = absolute_strong_kreiss_constant(&mobius, 2.0, &e0, &[1.0, 10.0, 50.0], 400)?;
    println!("absolute strong Kreiss, mobius(0.5) on l2, x = e_0:");
    for s in &report.samples {
        println!("  r = {:>5}: windowed sum {:.9}", s.parameter, s.value);
    }
    println!("  constant {:.9} (an l2 isometry gives exactly 1)\n", report.constant);

    // The finite analogue: (sum_{N - 2 sqrt N <= n <= N} ||T^n x||_p^p) / N^{p/2}.
    let shift = ConvOperator::shift();
    println!(
        "windowed power-sum ratio, shift, N = 100:  p = 1: {:.6}   p = 2: {:.6}",
        window_power_sum_ratio(&shift, 1.0, &e0, 100)?,
        window_power_sum_ratio(&shift, 2.0, &e0, 100)?
    );
    println!("(21 window terms, each norm 1: 21/sqrt(10000) = 2.1 and 21/100 = 0.21)");
    Ok(())
}
