//! Evaluate the lattice functions at a few points and print the derived
//! lattice data, including the Legendre cross-check.

use elliptic_chain::weierstrass::{f_spectral, sigma, wp, wp_prime, zeta_w, Lattice};
use num_complex::Complex64;

fn main() -> elliptic_chain::Result<()> {
    for (n, kappa) in [(5.0, 2.5), (5.0, 5.0), (5.0, 10.0)] {
        let lat = Lattice::new(n, kappa)?;
        println!(
            "lattice N={n} kappa={kappa}: swapped={} |q|={:.6e} g2={:.12} g3={:.12}",
            lat.swapped,
            lat.nome_q.re,
            lat.g2,
            lat.g3
        );
        println!("  legendre residual: {:.3e}", lat.legendre_residual());

        let z = Complex64::new(1.3, 0.45);
        println!("  sigma({z})    = {}", sigma(z, &lat)?);
        println!("  zeta({z})     = {}", zeta_w(z, &lat)?);
        println!("  wp({z})       = {}", wp(z, &lat)?);
        println!("  wp_prime({z}) = {}", wp_prime(z, &lat)?);

        let alpha = Complex64::new(0.37, 0.21);
        let f = f_spectral(z, alpha, &lat)?;
        println!("  f({z}; alpha={alpha}) = {f}");
        // product law: f(x) f(-x) = wp(alpha) - wp(x)
        let product = f * f_spectral(-z, alpha, &lat)?;
        let expected = wp(alpha, &lat)? - wp(z, &lat)?;
        println!(
            "  f(x)f(-x) vs wp(alpha)-wp(x): deviation {:.3e}",
            (product - expected).norm()
        );
        println!();
    }
    Ok(())
}
