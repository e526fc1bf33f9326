//! The same commutators in the spin-½ basis: Frobenius-relative norms of
//! the represented charges on 2^N states, with a deliberately
//! non-commuting random diagonal as the negative control.

use elliptic_chain::spin_rep::verify_spin_commutators;
use elliptic_chain::ChainConfig;

fn main() -> elliptic_chain::Result<()> {
    for n in 5..=8usize {
        let config = ChainConfig::new(n, n as f64)?.with_tol(1e-9);
        let report = verify_spin_commutators(&config)?;
        println!("N = {n} (dimension {}):", 1usize << n);
        for (pair, value) in &report.norms {
            println!("  {pair:<8} frobenius-relative {value:.3e}");
        }
        println!(
            "  negative control [J1, random diagonal]: {:.3e}  (must stay large)",
            report.negative_control
        );
    }
    Ok(())
}
