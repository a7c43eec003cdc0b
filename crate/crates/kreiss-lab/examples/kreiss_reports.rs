//! Kreiss-type resolvent constants of convolution operators.
//!
//! The Kreiss condition bounds (|lambda| - 1) ||(lambda - T)^{-1}|| for
//! |lambda| > 1, its iterated variant controls higher resolvent powers, and
//! the strong condition bounds the damped exponentials e^{-|z|} ||e^{zT}||.
//! For the shift all constants are exactly 1; for a Blaschke symbol they stay
//! close to 1; for 2 x identity every estimator must flag divergence.
//!
//! Run with: cargo run --release --example kreiss_reports

use kreiss_lab::kreiss::{default_radii, kreiss_constant, strong_kreiss_constant, KreissReport};
use kreiss_lab::symbols::{mobius_symbol, ConvOperator};
use num_complex::Complex64;

fn show(label: &str, r: &KreissReport) {
    let constant = if r.constant < 1e6 {
        format!("{:>12.6}", r.constant)
    } else {
        format!("{:>12.3e}", r.constant)
    };
    println!(
        "{label:<38} constant {constant}  diverging {:<5}  unconverged {:>2}  ({} samples on {})",
        r.diverging,
        r.unconverged,
        r.samples.len(),
        r.grid
    );
}

fn main() -> kreiss_lab::Result<()> {
    let shift = ConvOperator::shift();
    let mobius = mobius_symbol(0.5, 1e-14)?;
    let two_id = ConvOperator::scaled_identity(Complex64::new(2.0, 0.0));

    // Exact-arithmetic backends: p = 2 via the distance from lambda to the
    // symbol range, p = 1 via the triangular resolvent recurrence.
    show("shift, Kreiss, p = 2", &kreiss_constant(&shift, 2.0, 1, &moduli(20))?);
    show("shift, iterated Kreiss (k <= 5), p = 2", &kreiss_constant(&shift, 2.0, 5, &moduli(20))?);
    show("mobius(0.5), Kreiss, p = 2", &kreiss_constant(&mobius, 2.0, 1, &moduli(20))?);
    show("mobius(0.5), Kreiss, p = 1", &kreiss_constant(&mobius, 1.0, 3, &moduli(10))?);
    show("2 x identity, Kreiss, p = 2", &kreiss_constant(&two_id, 2.0, 1, &moduli(20))?);
    println!();

    // Strong condition: sup over z of e^{-|z|} ||e^{zT}||.
    let radii = default_radii();
    show("shift, strong Kreiss, p = 2", &strong_kreiss_constant(&shift, 2.0, &radii, 16)?);
    show("mobius(0.5), strong Kreiss, p = 2", &strong_kreiss_constant(&mobius, 2.0, &radii, 16)?);
    show("2 x identity, strong Kreiss, p = 2", &strong_kreiss_constant(&two_id, 2.0, &radii, 8)?);
    println!();
    println!("The shift is exactly Kreiss bounded with constant 1; the Blaschke");
    println!("operator stays within rounding of 1; the non-power-bounded");
    println!("2 x identity trips the divergence flag in every estimator.");
    Ok(())
}

/// Moduli 1 + 2^{-j} for j = j_max .. 0, approaching the unit circle.
fn moduli(j_max: i32) -> Vec<f64> {
    (0..=j_max).rev().map(|j| 1.0 + (2f64).powi(-j)).collect()
}
