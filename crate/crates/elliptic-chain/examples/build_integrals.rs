//! Build the Hamiltonian and the three conserved charges and inspect
//! their support structure.

use elliptic_chain::{build_integrals, ChainConfig};

fn main() -> elliptic_chain::Result<()> {
    let config = ChainConfig::new(6, 6.0)?;
    let set = build_integrals(&config)?;

    for (name, el) in [
        ("H ", &set.h),
        ("J0", &set.j0),
        ("J1", &set.j1),
        ("J2", &set.j2),
    ] {
        println!("{name}: {} terms, inf-norm {:.6e}", el.n_terms(), el.inf_norm());
        for (cycle_type, count, max_coeff) in el.support_classes() {
            println!("    cycle type {cycle_type:?}: {count} permutations, max |coeff| {max_coeff:.6e}");
        }
        let max_imag = el
            .terms()
            .map(|(_, c)| c.im.abs())
            .fold(0.0f64, f64::max);
        println!("    largest imaginary part: {:.3e}", max_imag);
    }
    Ok(())
}
