//! Group-algebra commutators of the conserved charges, the index-overlap
//! decomposition of [J₁, J₂], and the five-index coefficient Ω.
//!
//! Residuals are reported against a cancellation scale: for every output
//! permutation the magnitudes |c₁·c₂| of all contributing products are
//! accumulated, and the scale is the maximum over output permutations. A
//! relative residual of 1e-9 against this scale means the coefficients
//! cancelled to nine digits more than anything that was added up.

use num_complex::Complex64;
use std::collections::BTreeMap;
use std::fmt;

use crate::error::Result;
use crate::group_algebra::{AlgebraElement, Permutation};
use crate::integrals::{coeff_f, coeff_phi, IntegralSet};
use crate::report::Residual;
use crate::weierstrass::Lattice;

/// Selector for the operators of an [`IntegralSet`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Charge {
    H,
    J0,
    J1,
    J2,
}

impl fmt::Display for Charge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Charge::H => write!(f, "H"),
            Charge::J0 => write!(f, "J0"),
            Charge::J1 => write!(f, "J1"),
            Charge::J2 => write!(f, "J2"),
        }
    }
}

impl Charge {
    fn of<'a>(&self, set: &'a IntegralSet) -> &'a AlgebraElement {
        match self {
            Charge::H => &set.h,
            Charge::J0 => &set.j0,
            Charge::J1 => &set.j1,
            Charge::J2 => &set.j2,
        }
    }
}

/// One commutator verdict for reporting.
#[derive(Debug, Clone)]
pub struct CommutatorReport {
    pub pair: String,
    pub n_sites: usize,
    pub kappa: f64,
    pub residual: Residual,
}

/// [J₁, J₂] split by how many sites the two 3-cycle supports share.
///
/// Pairs with disjoint or identical support commute exactly as
/// permutations and cancel term by term, so `disjoint_part` must come out
/// empty. The remaining contributions split by output shape: overlap 1
/// produces 5-cycles (`quartic_part`), overlap 2 produces either products
/// of two disjoint transpositions (`pair_part_a`) or 3-cycles
/// (`pair_part_b`). The three key sets are disjoint, so `total` is their
/// exact union and matches [`commutator_full`] bit for bit.
#[derive(Debug, Clone)]
pub struct OverlapDecomposition {
    pub quartic_part: AlgebraElement,
    pub pair_part_a: AlgebraElement,
    pub pair_part_b: AlgebraElement,
    pub disjoint_part: AlgebraElement,
    pub total: AlgebraElement,
    pub quartic_residual: Residual,
    pub pair_a_residual: Residual,
    pub pair_b_residual: Residual,
}

/// Single canonical pass computing `[a, b]` with per-class routing.
///
/// Pairs whose products coincide (`pq == qp`) are skipped: their
/// contributions cancel exactly, by permutation equality, not by floating
/// point. Everything else accumulates in BTreeMap key order, which pins
/// the floating-point result bit for bit.
fn commutator_routed<F>(
    a: &AlgebraElement,
    b: &AlgebraElement,
    n_classes: usize,
    mut class_of: F,
) -> (Vec<AlgebraElement>, Vec<f64>)
where
    F: FnMut(&Permutation, &Permutation, &Permutation) -> usize,
{
    let n = a.n_sites();
    let mut parts: Vec<AlgebraElement> = (0..n_classes).map(|_| AlgebraElement::zero(n)).collect();
    let mut masses: Vec<BTreeMap<Permutation, f64>> = vec![BTreeMap::new(); n_classes];
    for (p, c1) in a.terms() {
        for (q, c2) in b.terms() {
            let pq = p.compose(q);
            let qp = q.compose(p);
            if pq == qp {
                continue;
            }
            let class = class_of(p, q, &pq);
            let prod = c1 * c2;
            let m = prod.norm();
            parts[class].insert_add(pq.clone(), prod);
            parts[class].insert_add(qp.clone(), -prod);
            *masses[class].entry(pq).or_default() += m;
            *masses[class].entry(qp).or_default() += m;
        }
    }
    let scales = masses
        .into_iter()
        .map(|m| m.values().fold(0.0f64, |acc, &v| acc.max(v)))
        .collect();
    (parts, scales)
}

/// `[a, b]` with its cancellation scale.
pub fn commutator_scaled(a: &AlgebraElement, b: &AlgebraElement) -> (AlgebraElement, Residual) {
    let (mut parts, scales) = commutator_routed(a, b, 1, |_, _, _| 0);
    let element = parts.pop().expect("single class");
    let abs = element.inf_norm();
    (element, Residual::new(abs, scales[0]))
}

/// Commutator of two named charges of an integral set.
pub fn commutator_full(
    set: &IntegralSet,
    a: Charge,
    b: Charge,
) -> (AlgebraElement, CommutatorReport) {
    let (element, residual) = commutator_scaled(a.of(set), b.of(set));
    let report = CommutatorReport {
        pair: format!("[{a},{b}]"),
        n_sites: set.config.n_sites,
        kappa: set.config.kappa,
        residual,
    };
    (element, report)
}

/// Splits [J₁, J₂] by support overlap of the contributing 3-cycle pairs.
pub fn decompose_by_overlap(set: &IntegralSet) -> OverlapDecomposition {
    // class 0: overlap 1 (quartic, 5-cycles)
    // class 1: overlap 2, product a double transposition
    // class 2: overlap 2, product a 3-cycle
    // class 3: everything that ought to have cancelled exactly
    let (parts, scales) = commutator_routed(&set.j1, &set.j2, 4, |p, q, pq| {
        let overlap = (p.support_mask() & q.support_mask()).count_ones();
        match overlap {
            1 => 0,
            2 => {
                if pq.cycle_type()[0] == 2 {
                    1
                } else {
                    2
                }
            }
            _ => 3,
        }
    });
    let [quartic, pair_a, pair_b, disjoint]: [AlgebraElement; 4] =
        parts.try_into().expect("four classes");
    let total = quartic
        .add(&pair_a)
        .and_then(|t| t.add(&pair_b))
        .and_then(|t| t.add(&disjoint))
        .expect("matching site counts");
    OverlapDecomposition {
        quartic_residual: Residual::new(quartic.inf_norm(), scales[0]),
        pair_a_residual: Residual::new(pair_a.inf_norm(), scales[1]),
        pair_b_residual: Residual::new(pair_b.inf_norm(), scales[2]),
        quartic_part: quartic,
        pair_part_a: pair_a,
        pair_part_b: pair_b,
        disjoint_part: disjoint,
        total,
    }
}

/// The five-term coefficient Ω over five distinct sites, with its gross
/// term mass.
pub fn omega_coeff_with_mass(
    j: usize,
    k: usize,
    l: usize,
    n: usize,
    p: usize,
    lat: &Lattice,
) -> Result<(Complex64, f64)> {
    let f_jkl = coeff_f(j, k, l, lat)?;
    let f_jnp = coeff_f(j, n, p, lat)?;
    let f_kln = coeff_f(k, l, n, lat)?;
    let f_jkp = coeff_f(j, k, p, lat)?;
    let f_lnp = coeff_f(l, n, p, lat)?;
    let phi_jnp = coeff_phi(j, n, p, lat)?;
    let phi_lnp = coeff_phi(l, n, p, lat)?;
    let phi_nkl = coeff_phi(n, k, l, lat)?;
    let phi_jkl = coeff_phi(j, k, l, lat)?;
    let phi_jkp = coeff_phi(j, k, p, lat)?;
    let phi_pln = coeff_phi(p, l, n, lat)?;
    let phi_kln = coeff_phi(k, l, n, lat)?;
    let value = f_jkl * (phi_jnp - phi_lnp)
        + f_jnp * (phi_nkl - phi_jkl)
        + f_kln * (phi_jkp - phi_jnp)
        + f_jkp * (phi_pln - phi_kln)
        + f_lnp * (phi_jkl - phi_jkp);
    let mass = f_jkl.norm() * (phi_jnp.norm() + phi_lnp.norm())
        + f_jnp.norm() * (phi_nkl.norm() + phi_jkl.norm())
        + f_kln.norm() * (phi_jkp.norm() + phi_jnp.norm())
        + f_jkp.norm() * (phi_pln.norm() + phi_kln.norm())
        + f_lnp.norm() * (phi_jkl.norm() + phi_jkp.norm());
    Ok((value, mass))
}

/// The five-term coefficient Ω; identically zero over distinct sites.
pub fn omega_coeff(
    j: usize,
    k: usize,
    l: usize,
    n: usize,
    p: usize,
    lat: &Lattice,
) -> Result<Complex64> {
    omega_coeff_with_mass(j, k, l, n, p, lat).map(|(v, _)| v)
}
