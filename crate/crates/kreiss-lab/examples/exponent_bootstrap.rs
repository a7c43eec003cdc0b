//! The exponent calculus and the bootstrap that sharpens growth rates.
//!
//! Two exponents organize the whole theory: delta_p = (2/min(2,p) - 1/p)/2,
//! the gain of one square-function pass, and tau_p = |1/2 - 1/p|, the final
//! power-growth rate. They satisfy 2 delta_p - 1/2 = tau_p. The bootstrap
//! map alpha -> alpha/2 + delta_p halves the distance to its fixed point
//! 2 delta_p at every step; iterated K = floor(log2(ln N / ln ln N)) times
//! starting from the trivial exponent it lands within O(1/ln N) of
//! tau_p + 1/2... and the leftover slack is exactly a power of ln N.
//!
//! Run with: cargo run --release --example exponent_bootstrap

use kreiss_lab::bounds::{bootstrap_depth, bootstrap_trajectory, exponents};

fn main() -> kreiss_lab::Result<()> {
    println!("{:>6} {:>8} {:>8} {:>8} {:>9} {:>9} {:>12}", "p", "min(2,p)", "max(2,p)", "dual", "delta_p", "tau_p", "2d - 1/2");
    for p in [1.0, 1.25, 1.5, 2.0, 3.0, 4.0, 8.0] {
        let e = exponents(p)?;
        println!(
            "{:>6} {:>8} {:>8} {:>8} {:>9.5} {:>9.5} {:>12.5}",
            e.p, e.p_prime, e.p_dprime, e.dual, e.delta, e.tau,
            2.0 * e.delta - 0.5
        );
    }
    println!("(last two columns agree: 2 delta_p - 1/2 = tau_p identically)\n");

    for n in [100u64, 10_000, 1_000_000, 10u64.pow(12)] {
        println!("bootstrap depth K({n}) = {}", bootstrap_depth(n)?);
    }
    println!();

    let p = 3.0;
    let n = 1_000_000;
    let state = bootstrap_trajectory(1.0, p, 0.0, n)?;
    println!(
        "=== bootstrap at p = {p}, N = {n}: depth {}, fixed point {:.6} ===",
        state.depth, state.fixed_point
    );
    println!("{:>4}  {:>12}  {:>14}  {:>12}", "step", "alpha", "closed form", "residual");
    for (k, &alpha) in state.alphas.iter().enumerate() {
        println!(
            "{:>4}  {:>12.8}  {:>14.8}  {:>12.4e}",
            k,
            alpha,
            state.closed_form(k as u32),
            alpha - state.fixed_point
        );
    }
    println!(
        "final alpha {:.8}; residual {:.4e} halves at every step.",
        state.final_alpha(),
        state.residual()
    );
    if let Some(slack) = state.log_slack_exponent() {
        println!("residual recast as a log power: (ln N)^{slack:.4} slack.");
    }
    println!(
        "power-growth rate delivered for lp at p = {p}: N^{:.6} (= tau_p).",
        exponents(p)?.tau
    );
    Ok(())
}
