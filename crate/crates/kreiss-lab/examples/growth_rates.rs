//! Power-growth of a Blaschke convolution operator on lp(Z).
//!
//! The operator T = q_a(S) (S the right shift, q_a = (gamma - a)/(1 - a gamma))
//! is a causal filter that acts as an isometry on l2. On l1 and on lp with
//! p != 2 its powers grow like N^{|1/2 - 1/p|} up to logarithmic corrections.
//! This example measures ||T^N||_p brackets along a doubling ladder of powers
//! and fits the growth exponent, with and without a ln ln N correction term.
//!
//! Run with: cargo run --release --example growth_rates

use kreiss_lab::bounds::exponents;
use kreiss_lab::experiments::{fit_exponent, growth_experiment};

fn main() -> kreiss_lab::Result<()> {
    let a = 0.5;
    let ns: Vec<u64> = (0..7).map(|i| 16u64 << i).collect(); // 16 .. 1024
    for p in [1.0, 2.0, 4.0] {
        let series = growth_experiment(a, p, &ns, 1e-10)?;
        println!("=== ||T^N||_p for {} at p = {p} ===", series.descriptor);
        println!("{:>6}  {:>14}  {:>14}  methods", "N", "lower", "upper");
        for pt in &series.points {
            println!(
                "{:>6}  {:>14.8}  {:>14.8}  {} / {}",
                pt.n, pt.bracket.lower, pt.bracket.upper, pt.bracket.lower_method, pt.bracket.upper_method
            );
        }
        let tau = exponents(p)?.tau;
        match fit_exponent(&series, false) {
            Ok(fit) => println!(
                "plain fit:     exponent {:+.4}  (tau_p = {:.4}), max residual {:.2e}",
                fit.slope, tau, fit.max_residual
            ),
            Err(e) => println!("plain fit unavailable: {e}"),
        }
        match fit_exponent(&series, true) {
            Ok(fit) => println!(
                "corrected fit: exponent {:+.4} with (ln ln N)^{:+.2} factor, max residual {:.2e}",
                fit.slope, fit.log_exponent, fit.max_residual
            ),
            Err(e) => println!("corrected fit unavailable: {e}"),
        }
        println!();
    }
    println!("p = 2 stays exactly flat (the symbol is unimodular); the");
    println!("p = 1 and p = 4 ladders climb like N^(1/2) and N^(1/4).");
    Ok(())
}
