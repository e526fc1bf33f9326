//! Linear (in)dependence of the charges: J₀ never mixes with J₁/J₂, the
//! pair (J₁, J₂) is proportional for 3 or 4 sites and independent beyond.
//!
//! The analysis mirrors the coefficient relation `λ + μ·φ + ρ·F = 0` over
//! ordered triples. Antisymmetry of φ and F under index swaps separates λ
//! (implemented as centering the columns, which also makes the verdict
//! immune to a constant shift of all coefficients), and the verdict for
//! (μ, ρ) comes from a scale-free rank test: the smallest singular value
//! of the column-normalized (φ, F) matrix.

use num_complex::Complex64;

use crate::error::Result;
use crate::group_algebra::{p_jkl, AlgebraElement};
use crate::integrals::{build_integrals, coeff_f, coeff_phi, ChainConfig};
use crate::report::CheckRecord;
use crate::weierstrass::{wp, wp_prime, zeta_w};

/// Independence verdict threshold on the smallest singular value.
pub const SINGULAR_VALUE_THRESHOLD: f64 = 1e-6;

/// Relative clustering tolerance when counting distinct ℘ values.
pub const WP_CLUSTER_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Dependent,
    Independent,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Verdict::Dependent => write!(f, "dependent"),
            Verdict::Independent => write!(f, "independent"),
        }
    }
}

/// Outcome of the rank analysis for one configuration.
#[derive(Debug, Clone)]
pub struct IndependenceReport {
    pub n_sites: usize,
    pub kappa: f64,
    pub verdict: Verdict,
    /// F/φ for the dependent case, with its relative spread over triples.
    pub ratio: Option<Complex64>,
    pub ratio_spread: f64,
    pub smallest_singular_value: f64,
    pub distinct_wp_count: usize,
}

/// One row `(1, φ_{jkl}, F_{jkl})` per ordered triple of distinct sites.
pub fn coefficient_matrix(
    config: &ChainConfig,
) -> Result<Vec<(Complex64, Complex64, Complex64)>> {
    let lat = config.lattice()?;
    let n = config.n_sites;
    let mut rows = Vec::new();
    for j in 1..=n {
        for k in 1..=n {
            for l in 1..=n {
                if j == k || k == l || j == l {
                    continue;
                }
                rows.push((
                    Complex64::new(1.0, 0.0),
                    coeff_phi(j, k, l, &lat)?,
                    coeff_f(j, k, l, &lat)?,
                ));
            }
        }
    }
    Ok(rows)
}

fn center(column: &mut [Complex64]) {
    let mean = column.iter().sum::<Complex64>() / column.len() as f64;
    for v in column.iter_mut() {
        *v -= mean;
    }
}

/// Smallest singular value of the column-normalized two-column matrix.
fn smallest_singular_value(u: &[Complex64], v: &[Complex64]) -> f64 {
    let nu = u.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
    let nv = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
    if nu == 0.0 || nv == 0.0 {
        return 0.0;
    }
    let mut inner = Complex64::default();
    for (a, b) in u.iter().zip(v) {
        inner += a.conj() * b;
    }
    let c = (inner / (nu * nv)).norm().min(1.0);
    (1.0 - c).sqrt()
}

/// ℘ at the site differences 1..N−1 and the number of distinct values
/// under relative clustering.
pub fn wp_values_with_distinct_count(config: &ChainConfig) -> Result<(Vec<f64>, usize)> {
    let lat = config.lattice()?;
    let mut values = Vec::new();
    for d in 1..config.n_sites {
        values.push(wp(Complex64::new(d as f64, 0.0), &lat)?.re);
    }
    let mut sorted = values.clone();
    sorted.sort_by(f64::total_cmp);
    let magnitude = sorted
        .iter()
        .map(|v| v.abs())
        .fold(0.0f64, f64::max)
        .max(1e-300);
    let mut count = 1;
    for w in sorted.windows(2) {
        if (w[1] - w[0]).abs() > WP_CLUSTER_TOL * magnitude {
            count += 1;
        }
    }
    Ok((values, count))
}

/// The ℘-value condition behind forcing μ = ρ = 0: at least two distinct
/// values among ℘(1), …, ℘(N−1).
#[derive(Debug, Clone)]
pub struct MuRhoReport {
    pub wp_values: Vec<f64>,
    pub distinct_wp_count: usize,
    /// Whether the count forces the trivial solution for N > 4.
    pub forces_trivial: bool,
}

pub fn check_mu_rho_condition(config: &ChainConfig) -> Result<MuRhoReport> {
    let (wp_values, distinct_wp_count) = wp_values_with_distinct_count(config)?;
    Ok(MuRhoReport {
        wp_values,
        distinct_wp_count,
        forces_trivial: distinct_wp_count >= 2,
    })
}

/// Full rank analysis for one configuration.
pub fn independence_report(config: &ChainConfig) -> Result<IndependenceReport> {
    let rows = coefficient_matrix(config)?;
    let mut phi: Vec<Complex64> = rows.iter().map(|r| r.1).collect();
    let mut f: Vec<Complex64> = rows.iter().map(|r| r.2).collect();
    // separate the constant column: antisymmetry puts the means at zero,
    // and centering keeps the verdict invariant under constant shifts
    center(&mut phi);
    center(&mut f);
    let sigma = smallest_singular_value(&phi, &f);
    let verdict = if sigma <= SINGULAR_VALUE_THRESHOLD {
        Verdict::Dependent
    } else {
        Verdict::Independent
    };

    let (ratio, ratio_spread) = if verdict == Verdict::Dependent {
        let mut num = Complex64::default();
        let mut den = 0.0;
        for (p, q) in phi.iter().zip(&f) {
            num += p.conj() * q;
            den += p.norm_sqr();
        }
        let r = num / den;
        let mut spread = 0.0f64;
        for (p, q) in phi.iter().zip(&f) {
            spread = spread.max((q - r * p).norm() / (r.norm() * p.norm().max(1e-300)));
        }
        (Some(r), spread)
    } else {
        (None, 0.0)
    };

    let (_, distinct_wp_count) = wp_values_with_distinct_count(config)?;
    Ok(IndependenceReport {
        n_sites: config.n_sites,
        kappa: config.kappa,
        verdict,
        ratio,
        ratio_spread,
        smallest_singular_value: sigma,
        distinct_wp_count,
    })
}

/// Rebuilds J₁ and J₂ at N = 3 and N = 4 and matches them, coefficient by
/// coefficient, against their displayed closed forms.
pub fn verify_small_n_closed_forms(kappa: f64) -> Result<Vec<CheckRecord>> {
    let mut checks = Vec::new();
    let tol = 1e-10;

    // helper: compare a built charge against coeff * signed combination
    let match_combination = |built: &AlgebraElement,
                             coeff: Complex64,
                             terms: &[(usize, usize, usize, f64)],
                             n: usize|
     -> f64 {
        let mut max_rel = 0.0f64;
        let mut covered = 0;
        for &(j, k, l, sign) in terms {
            let perm = p_jkl(j, k, l, n).expect("distinct indices");
            let expected = 3.0 * sign * coeff;
            let got = built.coeff(&perm);
            max_rel = max_rel.max((got - expected).norm() / expected.norm());
            covered += 1;
        }
        assert_eq!(covered, built.n_terms(), "closed form covers the support");
        max_rel
    };

    {
        let config = ChainConfig::new(3, kappa)?;
        let set = build_integrals(&config)?;
        let lat = &set.lattice;
        let phi = coeff_phi(1, 2, 3, lat)?;
        let f123 = coeff_f(1, 2, 3, lat)?;
        let display = [(1usize, 2usize, 3usize, 1.0f64), (2, 1, 3, -1.0)];
        checks.push(CheckRecord::from_residual(
            "n3_j1_closed_form",
            "j1_proportional_to_cycle_difference",
            crate::report::Residual::new(match_combination(&set.j1, phi, &display, 3), 1.0),
            tol,
        ));
        checks.push(CheckRecord::from_residual(
            "n3_j2_closed_form",
            "j2_proportional_to_cycle_difference",
            crate::report::Residual::new(match_combination(&set.j2, f123, &display, 3), 1.0),
            tol,
        ));
        // uniform coefficient ratio J2/J1 = F/phi
        let ratio = f123 / phi;
        let mut max_rel = 0.0f64;
        for (perm, c1) in set.j1.terms() {
            let c2 = set.j2.coeff(perm);
            max_rel = max_rel.max((c2 - ratio * c1).norm() / c2.norm());
        }
        checks.push(CheckRecord::from_residual(
            "n3_ratio_uniform",
            "charge_ratio_matches_coefficient_ratio",
            crate::report::Residual::new(max_rel, 1.0),
            tol,
        ));
    }

    {
        let config = ChainConfig::new(4, kappa)?;
        let set = build_integrals(&config)?;
        let lat = &set.lattice;
        let phi = coeff_phi(1, 2, 3, lat)?;
        let f123 = coeff_f(1, 2, 3, lat)?;

        let phi_closed =
            zeta_w(Complex64::new(2.0, 0.0), lat)? - 2.0 * zeta_w(Complex64::new(1.0, 0.0), lat)?;
        checks.push(CheckRecord::from_residual(
            "n4_phi_closed_form",
            "phi_equals_zeta2_minus_2zeta1",
            crate::report::Residual::new((phi - phi_closed).norm(), phi_closed.norm()),
            tol,
        ));

        // the displayed inner factor 2 fails independent verification; the
        // verified closed form carries phi^3 (see the f builder tests)
        let f_closed =
            (2.0 / 3.0) * (phi * phi * phi - wp_prime(Complex64::new(1.0, 0.0), lat)?);
        checks.push(CheckRecord::from_residual(
            "n4_f_closed_form",
            "f_from_phi_cubed_and_wp_prime",
            crate::report::Residual::new((f123 - f_closed).norm(), f_closed.norm()),
            tol,
        ));

        let display = [
            (1usize, 2usize, 3usize, 1.0f64),
            (2, 1, 3, -1.0),
            (1, 2, 4, 1.0),
            (2, 1, 4, -1.0),
            (1, 3, 4, 1.0),
            (3, 1, 4, -1.0),
            (2, 3, 4, 1.0),
            (3, 2, 4, -1.0),
        ];
        checks.push(CheckRecord::from_residual(
            "n4_j1_closed_form",
            "j1_eight_term_display",
            crate::report::Residual::new(match_combination(&set.j1, phi, &display, 4), 1.0),
            tol,
        ));
        checks.push(CheckRecord::from_residual(
            "n4_j2_closed_form",
            "j2_eight_term_display",
            crate::report::Residual::new(match_combination(&set.j2, f123, &display, 4), 1.0),
            tol,
        ));
    }

    Ok(checks)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn n3_minor_vanishes() {
        let config = ChainConfig::new(3, 3.0).unwrap();
        let lat = config.lattice().unwrap();
        let phi = coeff_phi(1, 2, 3, &lat).unwrap();
        let f = coeff_f(1, 2, 3, &lat).unwrap();
        let phi_swapped = coeff_phi(2, 1, 3, &lat).unwrap();
        let f_swapped = coeff_f(2, 1, 3, &lat).unwrap();
        let minor = phi * f_swapped - phi_swapped * f;
        let scale = phi.norm() * f_swapped.norm() + phi_swapped.norm() * f.norm();
        assert!(minor.norm() <= 1e-12 * scale);
    }

    #[test]
    fn n4_minors_vanish() {
        let config = ChainConfig::new(4, 4.0).unwrap();
        let rows = coefficient_matrix(&config).unwrap();
        assert_eq!(rows.len(), 24);
        for (i, a) in rows.iter().enumerate() {
            for b in rows[i + 1..].iter() {
                let minor = a.1 * b.2 - b.1 * a.2;
                let scale = a.1.norm() * b.2.norm() + b.1.norm() * a.2.norm();
                assert!(minor.norm() <= 1e-10 * scale.max(1e-300));
            }
        }
    }

    #[test]
    fn verdicts_are_kappa_stable() {
        for n in 3..=8usize {
            let mut verdicts = Vec::new();
            for kappa in [n as f64 / 2.0, n as f64, 5.0 * n as f64] {
                let config = ChainConfig::new(n, kappa).unwrap();
                let report = independence_report(&config).unwrap();
                if n <= 4 {
                    assert_eq!(report.verdict, Verdict::Dependent, "N={n} kappa={kappa}");
                    assert!(report.ratio_spread <= 1e-9);
                    assert!(report.ratio.is_some());
                } else {
                    assert_eq!(report.verdict, Verdict::Independent, "N={n} kappa={kappa}");
                    assert!(
                        report.smallest_singular_value > SINGULAR_VALUE_THRESHOLD,
                        "sigma {} at N={n} kappa={kappa}",
                        report.smallest_singular_value
                    );
                }
                verdicts.push(report.verdict);
            }
            assert!(verdicts.windows(2).all(|w| w[0] == w[1]));
        }
    }

    #[test]
    fn constant_shift_does_not_change_verdicts() {
        for n in [4usize, 6] {
            let config = ChainConfig::new(n, n as f64).unwrap();
            let rows = coefficient_matrix(&config).unwrap();
            let shift = Complex64::new(0.7, -0.3);
            let mut phi: Vec<Complex64> = rows.iter().map(|r| r.1 + shift).collect();
            let mut f: Vec<Complex64> = rows.iter().map(|r| r.2 + shift).collect();
            center(&mut phi);
            center(&mut f);
            let sigma = smallest_singular_value(&phi, &f);
            let dependent = sigma <= SINGULAR_VALUE_THRESHOLD;
            assert_eq!(dependent, n <= 4, "N={n} sigma={sigma}");
        }
    }

    #[test]
    fn distinct_wp_counts() {
        // evenness pairs wp(d) with wp(N-d); the independent values are
        // the ceil((N-1)/2) of them on the half-open half period
        for n in 5..=8usize {
            let config = ChainConfig::new(n, n as f64).unwrap();
            let (_, count) = wp_values_with_distinct_count(&config).unwrap();
            assert_eq!(count, n / 2, "N={n}");
        }
        let config = ChainConfig::new(5, 5.0).unwrap();
        let (values, count) = wp_values_with_distinct_count(&config).unwrap();
        assert_eq!(count, 2);
        assert!((values[0] - values[3]).abs() <= 1e-12 * values[0].abs());
        assert!((values[1] - values[2]).abs() <= 1e-12 * values[1].abs());
        assert!((values[0] - values[1]).abs() > 1e-3 * values[0].abs());

        // N=4 also has two distinct values, yet J1 and J2 are dependent:
        // the count argument is specific to chains longer than 4 sites
        let config4 = ChainConfig::new(4, 4.0).unwrap();
        let report4 = check_mu_rho_condition(&config4).unwrap();
        assert_eq!(report4.distinct_wp_count, 2);
        assert!(report4.forces_trivial);
        assert_eq!(
            independence_report(&config4).unwrap().verdict,
            Verdict::Dependent
        );
    }

    #[test]
    fn small_n_closed_forms_hold() {
        for kappa in [2.0, 4.0, 20.0] {
            let checks = verify_small_n_closed_forms(kappa).unwrap();
            for c in &checks {
                assert!(c.pass, "{} failed at kappa={kappa}: {:.3e}", c.name, c.residual);
            }
        }
    }

    #[test]
    fn dependent_ratio_matches_coefficient_ratio() {
        for n in [3usize, 4] {
            let config = ChainConfig::new(n, n as f64).unwrap();
            let lat = config.lattice().unwrap();
            let report = independence_report(&config).unwrap();
            let expected = coeff_f(1, 2, 3, &lat).unwrap() / coeff_phi(1, 2, 3, &lat).unwrap();
            let got = report.ratio.unwrap();
            assert!(
                (got - expected).norm() <= 1e-9 * expected.norm(),
                "ratio {got} vs {expected} at N={n}"
            );
        }
    }
}
