//! The central claim in the group algebra: [J₁, J₂] cancels to working
//! precision, and each overlap class of the commutator vanishes on its
//! own.

use elliptic_chain::commutator::{commutator_full, decompose_by_overlap, Charge};
use elliptic_chain::{build_integrals, ChainConfig};

fn main() -> elliptic_chain::Result<()> {
    for n in 5..=8usize {
        let config = ChainConfig::new(n, n as f64)?;
        let set = build_integrals(&config)?;
        println!("N = {n}:");
        for (a, b) in [
            (Charge::J1, Charge::J2),
            (Charge::H, Charge::J1),
            (Charge::H, Charge::J2),
            (Charge::J0, Charge::H),
        ] {
            let (_, report) = commutator_full(&set, a, b);
            println!(
                "  {:<8} residual {:.3e}  (cancellation scale {:.3e})",
                report.pair,
                report.residual.relative(),
                report.residual.scale
            );
        }
        let d = decompose_by_overlap(&set);
        println!(
            "  overlap parts: quartic {:.3e}, double-transposition {:.3e}, 3-cycle {:.3e}, disjoint terms {}",
            d.quartic_residual.relative(),
            d.pair_a_residual.relative(),
            d.pair_b_residual.relative(),
            d.disjoint_part.n_terms()
        );
    }
    Ok(())
}
