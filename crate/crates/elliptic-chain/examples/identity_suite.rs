//! Run the full identity battery on one lattice and print the residual
//! table, plus the near-pole probes that confirm the kernels stay regular.

use elliptic_chain::identities::{
    near_pole_probe_a, near_pole_probe_r, run_identity_battery, SamplePlan,
};
use elliptic_chain::Lattice;

fn main() -> elliptic_chain::Result<()> {
    let n = 6usize;
    let lat = Lattice::new(n as f64, n as f64)?;
    let plan = SamplePlan::new(500, 42);
    let reports = run_identity_battery(n, &lat, &plan, 1e-8)?;
    println!("{:<28} {:>8} {:>12} {:>10} verdict", "identity", "samples", "max rel", "tol");
    for r in &reports {
        println!(
            "{:<28} {:>8} {:>12.3e} {:>10.1e} {}",
            r.name,
            r.samples,
            r.max_rel,
            r.tol,
            if r.pass { "pass" } else { "FAIL" }
        );
    }

    let (probe_r, median_r) = near_pole_probe_r(&lat, 42)?;
    println!("\nnear-pole probe for the quartic kernel: max {probe_r:.3e} vs generic median {median_r:.3e}");
    let (probe_a, median_a) = near_pole_probe_a(&lat, 42)?;
    println!("near-pole probe for the residue kernel: max {probe_a:.3e} vs generic median {median_a:.3e}");
    Ok(())
}
