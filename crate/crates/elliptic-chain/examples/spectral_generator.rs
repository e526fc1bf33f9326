//! The spectral generator J(α) contains only three independent charges:
//! its decomposition residual vanishes for every admissible α, and the
//! difference of two generators stays inside the span of J₀ and J₁.

use elliptic_chain::integrals::{j_alpha_decomposition_residual, j_alpha_span_residual};
use elliptic_chain::{build_integrals, ChainConfig};
use num_complex::Complex64;

fn main() -> elliptic_chain::Result<()> {
    for n in [5usize, 6] {
        let config = ChainConfig::new(n, n as f64)?;
        let set = build_integrals(&config)?;
        println!("N = {n}:");
        for alpha in [
            Complex64::new(0.37, 0.21),
            Complex64::new(1.9, -0.8),
            Complex64::new(2.4, 1.3),
        ] {
            let r = j_alpha_decomposition_residual(&set, alpha)?;
            println!(
                "  J({alpha}) = -wp'(a)/2 J0 + wp(a) J1 - J2/2 : relative residual {:.3e}",
                r.relative()
            );
        }
        let span = j_alpha_span_residual(
            &set,
            Complex64::new(0.37, 0.21),
            Complex64::new(1.1, 0.64),
        )?;
        println!(
            "  J(a) - J(a') inside span(J0, J1): remainder {:.3e}",
            span.relative()
        );
    }
    Ok(())
}
