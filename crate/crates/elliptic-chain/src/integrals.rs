//! The Hamiltonian and the conserved charges J₀, J₁, J₂ as group-algebra
//! elements, plus the spectral generator J(α) and its decomposition.
//!
//! Coefficients come from site differences fed straight into the
//! `weierstrass` evaluators (the lattice period equals the site count, so
//! wrap-around is automatic). Contributions of the three cyclic rotations of
//! an index triple are evaluated once, at a canonical rotation, which makes
//! the "three equal contributions per 3-cycle" structure exact and lets the
//! builder assert it.

use num_complex::Complex64;
use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::group_algebra::{p_jkl, AlgebraElement, Permutation};
use crate::report::Residual;
use crate::weierstrass::{
    distance_to_lattice, wp, wp_prime, zeta_w, f_spectral, Lattice, DEFAULT_POLE_MARGIN,
};

/// Run parameters for one chain: the single source of N, κ, h₀, α, seed,
/// tolerance and sample count.
#[derive(Debug, Clone)]
pub struct ChainConfig {
    pub n_sites: usize,
    pub kappa: f64,
    pub h0: f64,
    pub alpha: Option<Complex64>,
    pub seed: u64,
    pub tol: f64,
    pub samples: usize,
}

impl ChainConfig {
    /// A configuration with default coupling, seed, tolerance and samples.
    pub fn new(n_sites: usize, kappa: f64) -> Result<Self> {
        if n_sites < 3 {
            return Err(Error::TooFewSites { n_sites });
        }
        if !kappa.is_finite() || kappa <= 0.0 {
            return Err(Error::NonPositivePeriod {
                real_period: n_sites as f64,
                kappa,
            });
        }
        Ok(ChainConfig {
            n_sites,
            kappa,
            h0: 1.0,
            alpha: None,
            seed: 0,
            tol: 1e-9,
            samples: 500,
        })
    }

    pub fn with_h0(mut self, h0: f64) -> Self {
        self.h0 = h0;
        self
    }

    pub fn with_alpha(mut self, alpha: Complex64) -> Self {
        self.alpha = Some(alpha);
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn with_samples(mut self, samples: usize) -> Self {
        self.samples = samples;
        self
    }

    /// The period lattice whose real period is the site count.
    pub fn lattice(&self) -> Result<Lattice> {
        Lattice::new(self.n_sites as f64, self.kappa)
    }
}

/// H together with the three conserved charges over one lattice.
#[derive(Debug, Clone)]
pub struct IntegralSet {
    pub h: AlgebraElement,
    pub j0: AlgebraElement,
    pub j1: AlgebraElement,
    pub j2: AlgebraElement,
    pub lattice: Lattice,
    pub config: ChainConfig,
}

fn site_range_check(indices: &[usize], lat: &Lattice) -> Result<()> {
    let n = lat.real_period.round() as usize;
    for &i in indices {
        if i == 0 || i > n {
            return Err(Error::IndexOutOfRange {
                index: i,
                n_sites: n,
            });
        }
    }
    for (i, &a) in indices.iter().enumerate() {
        if indices[i + 1..].contains(&a) {
            return Err(Error::RepeatedIndex { index: a });
        }
    }
    Ok(())
}

fn site_point(d: i64) -> Complex64 {
    Complex64::new(d as f64, 0.0)
}

/// φ_{jkl} = ζ(j−k) + ζ(k−l) + ζ(l−j); antisymmetric, cyclically invariant.
pub fn coeff_phi(j: usize, k: usize, l: usize, lat: &Lattice) -> Result<Complex64> {
    site_range_check(&[j, k, l], lat)?;
    let (j, k, l) = (j as i64, k as i64, l as i64);
    Ok(zeta_w(site_point(j - k), lat)?
        + zeta_w(site_point(k - l), lat)?
        + zeta_w(site_point(l - j), lat)?)
}

/// F_{jkl} in its symmetric three-term form.
pub fn coeff_f(j: usize, k: usize, l: usize, lat: &Lattice) -> Result<Complex64> {
    site_range_check(&[j, k, l], lat)?;
    let (j, k, l) = (j as i64, k as i64, l as i64);
    let (a, b, c) = (site_point(j - k), site_point(k - l), site_point(l - j));
    let zs = zeta_w(a, lat)? + zeta_w(b, lat)? + zeta_w(c, lat)?;
    let ps = wp(a, lat)? + wp(b, lat)? + wp(c, lat)?;
    let dps = wp_prime(a, lat)? + wp_prime(b, lat)? + wp_prime(c, lat)?;
    Ok((2.0 * zs * ps + dps) / 3.0)
}

/// F_{jkl} rewritten through the first difference only.
pub fn coeff_f_alt1(j: usize, k: usize, l: usize, lat: &Lattice) -> Result<Complex64> {
    site_range_check(&[j, k, l], lat)?;
    let (j, k, l) = (j as i64, k as i64, l as i64);
    let (a, b, c) = (site_point(j - k), site_point(k - l), site_point(l - j));
    let zs = zeta_w(a, lat)? + zeta_w(b, lat)? + zeta_w(c, lat)?;
    Ok(2.0 * zs * wp(a, lat)? + wp_prime(a, lat)?)
}

/// F_{jkl} rewritten through the last difference only.
pub fn coeff_f_alt2(j: usize, k: usize, l: usize, lat: &Lattice) -> Result<Complex64> {
    site_range_check(&[j, k, l], lat)?;
    let (j, k, l) = (j as i64, k as i64, l as i64);
    let (a, b, c) = (site_point(j - k), site_point(k - l), site_point(l - j));
    let zs = zeta_w(a, lat)? + zeta_w(b, lat)? + zeta_w(c, lat)?;
    Ok(2.0 * zs * wp(c, lat)? + wp_prime(c, lat)?)
}

/// Precomputed ζ, ℘, ℘′ at the integer site differences 1..N−1, mirrored by
/// parity so that evenness and oddness hold bit-exactly.
pub(crate) struct SiteTable {
    zeta: Vec<Complex64>,
    wp: Vec<Complex64>,
    wp_prime: Vec<Complex64>,
}

impl SiteTable {
    pub(crate) fn new(n_sites: usize, lat: &Lattice) -> Result<Self> {
        let mut zeta_v = vec![Complex64::default(); n_sites];
        let mut wp_v = vec![Complex64::default(); n_sites];
        let mut dwp_v = vec![Complex64::default(); n_sites];
        for d in 1..n_sites {
            let z = site_point(d as i64);
            zeta_v[d] = zeta_w(z, lat)?;
            wp_v[d] = wp(z, lat)?;
            dwp_v[d] = wp_prime(z, lat)?;
        }
        Ok(SiteTable {
            zeta: zeta_v,
            wp: wp_v,
            wp_prime: dwp_v,
        })
    }

    pub(crate) fn zeta(&self, d: i64) -> Complex64 {
        if d < 0 {
            -self.zeta[(-d) as usize]
        } else {
            self.zeta[d as usize]
        }
    }

    pub(crate) fn wp(&self, d: i64) -> Complex64 {
        self.wp[d.unsigned_abs() as usize]
    }

    pub(crate) fn wp_prime(&self, d: i64) -> Complex64 {
        if d < 0 {
            -self.wp_prime[(-d) as usize]
        } else {
            self.wp_prime[d as usize]
        }
    }

    pub(crate) fn phi(&self, j: i64, k: i64, l: i64) -> Complex64 {
        self.zeta(j - k) + self.zeta(k - l) + self.zeta(l - j)
    }

    pub(crate) fn big_f(&self, j: i64, k: i64, l: i64) -> Complex64 {
        let zs = self.phi(j, k, l);
        let ps = self.wp(j - k) + self.wp(k - l) + self.wp(l - j);
        let dps = self.wp_prime(j - k) + self.wp_prime(k - l) + self.wp_prime(l - j);
        (2.0 * zs * ps + dps) / 3.0
    }
}

/// Rotates a triple so its smallest entry comes first, preserving cyclic
/// order; coefficient evaluation at this canonical rotation makes the three
/// rotations of a triple contribute identical floats.
fn canonical_rotation(j: usize, k: usize, l: usize) -> (usize, usize, usize) {
    if j < k && j < l {
        (j, k, l)
    } else if k < j && k < l {
        (k, l, j)
    } else {
        (l, j, k)
    }
}

/// Accumulates `coeff` at the 3-cycle of every ordered triple, tracking the
/// contribution count per distinct permutation.
fn accumulate_triples<F>(n_sites: usize, mut coeff: F) -> Result<AlgebraElement>
where
    F: FnMut(usize, usize, usize) -> Complex64,
{
    let mut out = AlgebraElement::zero(n_sites);
    let mut counts: BTreeMap<Permutation, (usize, Complex64)> = BTreeMap::new();
    for j in 1..=n_sites {
        for k in 1..=n_sites {
            for l in 1..=n_sites {
                if j == k || k == l || j == l {
                    continue;
                }
                let (a, b, c) = canonical_rotation(j, k, l);
                let value = coeff(a, b, c);
                let perm = p_jkl(j, k, l, n_sites)?;
                let entry = counts.entry(perm.clone()).or_insert((0, value));
                entry.0 += 1;
                assert_eq!(
                    entry.1, value,
                    "cyclic rotations must contribute identical coefficients"
                );
                out.insert_add(perm, value);
            }
        }
    }
    for (perm, (count, single)) in &counts {
        assert_eq!(*count, 3, "every 3-cycle accumulates exactly 3 terms");
        assert_eq!(
            out.coeff(perm),
            3.0 * single,
            "merged coefficient must be exactly three times one contribution"
        );
    }
    Ok(out)
}

/// Builds H, J₀, J₁, J₂ for one configuration.
///
/// All four operators are ordered sums: each transposition of H receives two
/// equal contributions and each 3-cycle of J₀/J₁/J₂ receives three, so the
/// merged coefficients are 2·h₀·℘(j−k) and 3·{1, φ, F} respectively.
pub fn build_integrals(config: &ChainConfig) -> Result<IntegralSet> {
    let lat = config.lattice()?;
    let table = SiteTable::new(config.n_sites, &lat)?;
    let n = config.n_sites;

    let mut h = AlgebraElement::zero(n);
    for j in 1..=n {
        for k in 1..=n {
            if j == k {
                continue;
            }
            let coeff = config.h0 * table.wp(j as i64 - k as i64);
            h.insert_add(Permutation::transposition(j, k, n)?, coeff);
        }
    }

    let one = Complex64::new(1.0, 0.0);
    let j0 = accumulate_triples(n, |_, _, _| one)?;
    let j1 = accumulate_triples(n, |a, b, c| table.phi(a as i64, b as i64, c as i64))?;
    let j2 = accumulate_triples(n, |a, b, c| table.big_f(a as i64, b as i64, c as i64))?;

    Ok(IntegralSet {
        h,
        j0,
        j1,
        j2,
        lattice: lat,
        config: config.clone(),
    })
}

/// The spectral generator J(α): ordered sum of
/// `f(j−k) f(k−l) f(l−j) P_{jkl}`.
pub fn build_j_alpha(config: &ChainConfig, alpha: Complex64) -> Result<AlgebraElement> {
    let lat = config.lattice()?;
    let d = distance_to_lattice(alpha, &lat);
    if d <= DEFAULT_POLE_MARGIN {
        return Err(Error::SpectralParameterOnLattice { z: alpha, distance: d });
    }
    let n = config.n_sites;
    let mut f_table = vec![Complex64::default(); 2 * n + 1];
    for d in 1..n {
        f_table[n + d] = f_spectral(site_point(d as i64), alpha, &lat)?;
        f_table[n - d] = f_spectral(site_point(-(d as i64)), alpha, &lat)?;
    }
    let f_of = |d: i64| f_table[(n as i64 + d) as usize];
    accumulate_triples(n, |a, b, c| {
        let (a, b, c) = (a as i64, b as i64, c as i64);
        f_of(a - b) * f_of(b - c) * f_of(c - a)
    })
}

/// Largest per-permutation gross mass across a family of elements: the
/// cancellation-aware denominator for residuals of element identities.
pub fn gross_scale(parts: &[&AlgebraElement]) -> f64 {
    let mut mass: BTreeMap<&Permutation, f64> = BTreeMap::new();
    for part in parts {
        for (perm, coeff) in part.terms() {
            *mass.entry(perm).or_default() += coeff.norm();
        }
    }
    mass.values().fold(0.0, |acc, &m| acc.max(m))
}

/// Residual of `J(α) = −½℘′(α)·J₀ + ℘(α)·J₁ − ½·J₂`.
pub fn j_alpha_decomposition_residual(set: &IntegralSet, alpha: Complex64) -> Result<Residual> {
    let j_alpha = build_j_alpha(&set.config, alpha)?;
    let lat = &set.lattice;
    let c0 = -0.5 * wp_prime(alpha, lat)?;
    let c1 = wp(alpha, lat)?;
    let c2 = Complex64::new(-0.5, 0.0);
    let combo = set
        .j0
        .scale(c0)
        .add(&set.j1.scale(c1))?
        .add(&set.j2.scale(c2))?;
    let diff = j_alpha.sub(&combo)?;
    let scale = gross_scale(&[
        &j_alpha,
        &set.j0.scale(c0),
        &set.j1.scale(c1),
        &set.j2.scale(c2),
    ]);
    Ok(Residual::new(diff.inf_norm(), scale))
}

/// Checks that `J(α) − J(α′)` lies in the span of J₀ and J₁ by removing the
/// least-squares projection onto them and measuring what is left.
pub fn j_alpha_span_residual(
    set: &IntegralSet,
    alpha: Complex64,
    alpha2: Complex64,
) -> Result<Residual> {
    let ja = build_j_alpha(&set.config, alpha)?;
    let jb = build_j_alpha(&set.config, alpha2)?;
    let diff = ja.sub(&jb)?;

    // complex least squares over the 3-cycle coefficient vectors
    let keys: Vec<Permutation> = set.j0.terms().map(|(p, _)| p.clone()).collect();
    let mut g00 = Complex64::default();
    let mut g01 = Complex64::default();
    let mut g11 = Complex64::default();
    let mut r0 = Complex64::default();
    let mut r1 = Complex64::default();
    for p in &keys {
        let b0 = set.j0.coeff(p);
        let b1 = set.j1.coeff(p);
        let d = diff.coeff(p);
        g00 += b0.conj() * b0;
        g01 += b0.conj() * b1;
        g11 += b1.conj() * b1;
        r0 += b0.conj() * d;
        r1 += b1.conj() * d;
    }
    let det = g00 * g11 - g01 * g01.conj();
    let c0 = (r0 * g11 - g01 * r1) / det;
    let c1 = (g00 * r1 - g01.conj() * r0) / det;

    let remainder = diff.sub(&set.j0.scale(c0).add(&set.j1.scale(c1))?)?;
    let scale = gross_scale(&[&ja, &jb]);
    Ok(Residual::new(remainder.inf_norm(), scale))
}
