//! Cross-validate the q-series evaluators against the slow truncated
//! lattice sums: ℘ pointwise and the invariants g₂, g₃.

use elliptic_chain::weierstrass::{
    eisenstein_invariants_oracle, wp, wp_lattice_sum_oracle, Lattice,
};
use num_complex::Complex64;

fn main() -> elliptic_chain::Result<()> {
    let lat = Lattice::new(5.0, 2.5)?;
    let z = Complex64::new(1.3, 0.0);
    let fast = wp(z, &lat)?;
    println!("wp({z}) via q-series: {:.15e}", fast.re);
    for bound in [100usize, 200, 400] {
        let slow = wp_lattice_sum_oracle(z, &lat, bound)?;
        println!(
            "  lattice sum bound {bound:>4}: {:.15e}  (rel dev {:.3e})",
            slow.re,
            (slow - fast).norm() / fast.norm()
        );
    }

    println!();
    println!("invariants from theta constants: g2 = {:.15e}, g3 = {:.15e}", lat.g2, lat.g3);
    for bound in [100usize, 200] {
        let (g2o, g3o) = eisenstein_invariants_oracle(&lat, bound);
        println!(
            "  eisenstein bound {bound:>4}: g2 rel dev {:.3e}, g3 rel dev {:.3e}",
            (g2o - lat.g2).abs() / lat.g2.abs(),
            (g3o - lat.g3).abs() / lat.g3.abs()
        );
    }
    println!();
    println!("laurent coefficient a = g2/20 = {:.15e}", lat.laurent_a);
    Ok(())
}
