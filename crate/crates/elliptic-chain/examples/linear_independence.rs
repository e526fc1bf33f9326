//! Rank analysis of the charge coefficients: J₁ and J₂ are proportional
//! for chains of 3 or 4 sites and genuinely independent beyond.

use elliptic_chain::independence::{independence_report, verify_small_n_closed_forms};
use elliptic_chain::ChainConfig;

fn main() -> elliptic_chain::Result<()> {
    println!(
        "{:>2} {:>6} {:<12} {:>14} {:>14} {:>10}",
        "N", "kappa", "verdict", "sigma_min", "ratio spread", "wp values"
    );
    for n in 3..=8usize {
        for kappa in [n as f64 / 2.0, n as f64, 5.0 * n as f64] {
            let report = independence_report(&ChainConfig::new(n, kappa)?)?;
            println!(
                "{:>2} {:>6.1} {:<12} {:>14.3e} {:>14.3e} {:>10}",
                n,
                kappa,
                report.verdict.to_string(),
                report.smallest_singular_value,
                report.ratio_spread,
                report.distinct_wp_count
            );
        }
    }

    println!("\nsmall-chain closed forms (kappa = 4):");
    for check in verify_small_n_closed_forms(4.0)? {
        println!(
            "  {} {:<22} residual {:.3e}",
            if check.pass { "pass" } else { "FAIL" },
            check.name,
            check.residual
        );
    }
    Ok(())
}
