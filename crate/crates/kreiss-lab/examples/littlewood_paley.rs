//! Square-function inequalities on the torus, stress-tested at random.
//!
//! For disjoint frequency intervals I_1..I_L and the square function
//! Sf = (sum_l |M_{I_l} f|^2)^{1/2}, the forward bound reads
//! ||Sf||_p <= D_p L^{1/min(2,p) - 1/2} ||f||_p, with a weak-L1 endpoint at
//! L^{1/2} and a reverse companion ||M_I f||_p <= C_p L^{1/2 - 1/max(2,p)}
//! ||Sf||_p for consecutive intervals. This example hammers each inequality
//! with seeded random trigonometric polynomials and reports the worst
//! constant-free ratio per interval count L — bounded ratios as L grows are
//! the inequalities made visible.
//!
//! Run with: cargo run --release --example littlewood_paley

use kreiss_lab::experiments::{lp_inequality_experiment, ExperimentConfig, LpKind};

fn main() -> kreiss_lab::Result<()> {
    let base = ExperimentConfig {
        trials: 24,
        ..ExperimentConfig::default()
    };

    for (kind, p, note) in [
        (LpKind::Forward, 2.0, "Parseval makes every ratio exactly 1"),
        (LpKind::Forward, 4.0, "ratios stay bounded as L doubles"),
        (LpKind::Forward, 1.5, "sub-duality range: scaling L^{1/p - 1/2}"),
        (LpKind::WeakL1, 1.0, "weak-L1 endpoint with L^{1/2} scaling"),
        (LpKind::Reverse, 2.0, "reverse bound; majorant never undershoots"),
        (LpKind::Blocks, 2.0, "quadratic blocks [n^2+1, (n+1)^2]"),
        (LpKind::Stechkin, 3.0, "monotone multipliers are one-shift tame"),
    ] {
        let cfg = ExperimentConfig { p, ..base.clone() };
        let report = lp_inequality_experiment(kind, &cfg)?;
        println!("=== {} at p = {p} — {note} ===", report.kind.as_str());
        println!("{:>5}  {:>12}  {:>12}", "L", "worst ratio", "mean ratio");
        for row in &report.per_l {
            println!("{:>5}  {:>12.6}  {:>12.6}", row.l, row.worst_ratio, row.mean_ratio);
        }
        let w = &report.witness;
        println!(
            "worst overall {:.6} at L = {} (trial {}, rng stream {:#x});",
            report.worst_ratio, w.l, w.trial, w.stream
        );
        if report.findings.is_empty() {
            println!("no sanity violations.\n");
        } else {
            println!("findings: {:?}\n", report.findings);
        }
    }
    Ok(())
}
