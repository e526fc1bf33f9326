//! As the imaginary period grows the exchange degenerates to the
//! inverse-sine-square form of the long-range trigonometric chain.

use elliptic_chain::weierstrass::{trig_limit_wp, wp, Lattice};
use num_complex::Complex64;

fn main() -> elliptic_chain::Result<()> {
    let n = 5.0;
    println!("worst relative deviation of wp from (pi/N)^2 (1/sin^2 - 1/3) on (0.1, N-0.1):");
    for factor in [1.0, 2.0, 5.0, 10.0, 20.0] {
        let lat = Lattice::new(n, factor * n)?;
        let mut worst = 0.0f64;
        for i in 0..50 {
            let x = 0.1 + (n - 0.2) * i as f64 / 49.0;
            let p = wp(Complex64::new(x, 0.0), &lat)?;
            let t = trig_limit_wp(x, n);
            worst = worst.max((p.re - t).abs() / p.norm());
        }
        println!("  kappa = {:>5.0}N: {worst:.3e}", factor);
    }
    Ok(())
}
