//! kreiss-lab: a numerical laboratory for the power growth of convolution
//! operators on the sequence spaces lp(Z).
//!
//! The crate studies one tightly knit circle of questions: how fast can the
//! powers T^N of a convolution operator grow on lp(Z) when T satisfies a
//! Kreiss-type resolvent condition, and how sharp are the square-function
//! and interpolation inequalities that control that growth? The central
//! example family is the Blaschke symbol q_a(gamma) = (gamma - a)/(1 - a*gamma),
//! a unimodular causal filter whose powers grow like N^{|1/2 - 1/p|} (up to
//! logarithms) on lp.
//!
//! Module map:
//! * [`torus`] — trigonometric polynomials on the circle: grid Lp/weak-L1
//!   norms, band projections, multipliers, square functions;
//! * [`symbols`] — convolution operators and the adaptive FFT symbol
//!   calculus (powers, damped exponentials, resolvent powers);
//! * [`norms`] — two-sided lp operator-norm brackets: exact endpoints,
//!   interpolation uppers, test-vector and dual-power-iteration lowers;
//! * [`kreiss`] — Kreiss, iterated-Kreiss, strong and absolute-strong
//!   Kreiss constants, and windowed power sums;
//! * [`bounds`] — the exponent calculus (delta_p, tau_p), the bootstrap
//!   iteration, and the Poisson-window technical estimates behind it;
//! * [`experiments`] — end-to-end growth measurements, inequality
//!   stress tests, exponent fits, and the command-line driver.
//!
//! The `examples/` directory is the front door: each example is a runnable
//! tour of one capability (`cargo run --release --example growth_rates`,
//! `... --example kreiss_reports`, and so on). The `kreiss-lab` binary
//! exposes the same experiments in scripted form with CSV/JSON output.

pub mod bounds;
pub mod cli;
pub mod error;
mod fft;
pub mod experiments;
pub mod kreiss;
pub mod norms;
pub mod symbols;
pub mod torus;

pub use error::{Error, Result};
