//! Exact sparse arithmetic in the complex group algebra of S_N.
//!
//! Permutations use one-line notation with 1-based sites. Products compose
//! right-to-left: `a.compose(&b)` applies `b` first, then `a`, which makes
//! the chained transposition products below cyclically symmetric in their
//! indices (see [`p_jkl`] and the convention self-test).

use num_complex::Complex64;
use std::collections::BTreeMap;

use crate::error::{Error, Result};

/// Element of S_N in one-line notation: `images[i]` is the image of site
/// `i + 1`, itself a 1-based site index.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Permutation {
    images: Vec<u8>,
}

fn check_site(index: usize, n_sites: usize) -> Result<()> {
    if index == 0 || index > n_sites || n_sites > u8::MAX as usize {
        Err(Error::IndexOutOfRange { index, n_sites })
    } else {
        Ok(())
    }
}

fn check_distinct(indices: &[usize]) -> Result<()> {
    for (i, &a) in indices.iter().enumerate() {
        if indices[i + 1..].contains(&a) {
            return Err(Error::RepeatedIndex { index: a });
        }
    }
    Ok(())
}

impl Permutation {
    /// Identity on `n_sites` sites.
    pub fn identity(n_sites: usize) -> Self {
        Permutation {
            images: (1..=n_sites as u8).collect(),
        }
    }

    /// The transposition exchanging sites `j` and `k`.
    pub fn transposition(j: usize, k: usize, n_sites: usize) -> Result<Self> {
        check_site(j, n_sites)?;
        check_site(k, n_sites)?;
        check_distinct(&[j, k])?;
        let mut p = Self::identity(n_sites);
        p.images.swap(j - 1, k - 1);
        Ok(p)
    }

    /// Builds a permutation from disjoint cycles; `[(a, b, c)]` maps
    /// `a → b → c → a`.
    pub fn from_cycles(cycles: &[Vec<usize>], n_sites: usize) -> Result<Self> {
        let all: Vec<usize> = cycles.iter().flatten().copied().collect();
        for &s in &all {
            check_site(s, n_sites)?;
        }
        check_distinct(&all)?;
        let mut p = Self::identity(n_sites);
        for cycle in cycles {
            for (i, &s) in cycle.iter().enumerate() {
                p.images[s - 1] = cycle[(i + 1) % cycle.len()] as u8;
            }
        }
        Ok(p)
    }

    /// Image of a 1-based site.
    pub fn apply(&self, site: usize) -> usize {
        self.images[site - 1] as usize
    }

    pub fn n_sites(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[u8] {
        &self.images
    }

    /// `self ∘ other`: apply `other` first, then `self`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        debug_assert_eq!(self.n_sites(), other.n_sites());
        Permutation {
            images: other
                .images
                .iter()
                .map(|&i| self.images[i as usize - 1])
                .collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0u8; self.images.len()];
        for (i, &img) in self.images.iter().enumerate() {
            images[img as usize - 1] = i as u8 + 1;
        }
        Permutation { images }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &v)| v as usize == i + 1)
    }

    /// Cycle type as a partition of N sorted in descending order.
    pub fn cycle_type(&self) -> Vec<usize> {
        let n = self.images.len();
        let mut seen = vec![false; n];
        let mut lengths = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut cur = start;
            while !seen[cur] {
                seen[cur] = true;
                cur = self.images[cur] as usize - 1;
                len += 1;
            }
            lengths.push(len);
        }
        lengths.sort_unstable_by(|a, b| b.cmp(a));
        lengths
    }

    /// Bitmask of moved sites (bit `i` set when site `i + 1` moves).
    pub fn support_mask(&self) -> u32 {
        let mut mask = 0u32;
        for (i, &v) in self.images.iter().enumerate() {
            if v as usize != i + 1 {
                mask |= 1 << i;
            }
        }
        mask
    }
}

/// The chained product `P_{jk} P_{kl}`, a 3-cycle invariant under cyclic
/// rotation of `(j, k, l)`.
pub fn p_jkl(j: usize, k: usize, l: usize, n_sites: usize) -> Result<Permutation> {
    check_distinct(&[j, k, l])?;
    let a = Permutation::transposition(j, k, n_sites)?;
    let b = Permutation::transposition(k, l, n_sites)?;
    Ok(a.compose(&b))
}

/// The chained product `P_{jk} P_{kl} P_{ln} P_{np}`, a 5-cycle invariant
/// under cyclic rotation of `(j, k, l, n, p)`.
pub fn p_5cycle(
    j: usize,
    k: usize,
    l: usize,
    n: usize,
    p: usize,
    n_sites: usize,
) -> Result<Permutation> {
    check_distinct(&[j, k, l, n, p])?;
    let t1 = Permutation::transposition(j, k, n_sites)?;
    let t2 = Permutation::transposition(k, l, n_sites)?;
    let t3 = Permutation::transposition(l, n, n_sites)?;
    let t4 = Permutation::transposition(n, p, n_sites)?;
    Ok(t1.compose(&t2).compose(&t3).compose(&t4))
}

/// Finitely supported complex linear combination of permutations.
///
/// Coefficients of magnitude exactly zero are never stored; term maps are
/// ordered, so every accumulation below runs in one canonical key order and
/// results are reproducible bit for bit.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraElement {
    n_sites: usize,
    terms: BTreeMap<Permutation, Complex64>,
}

impl AlgebraElement {
    pub fn zero(n_sites: usize) -> Self {
        AlgebraElement {
            n_sites,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_term(perm: Permutation, coeff: Complex64) -> Self {
        let mut el = AlgebraElement::zero(perm.n_sites());
        el.insert_add(perm, coeff);
        el
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn n_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, perm: &Permutation) -> Complex64 {
        self.terms.get(perm).copied().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Permutation, &Complex64)> {
        self.terms.iter()
    }

    /// Adds `coeff` to the term keyed by `perm`, dropping exact zeros.
    pub(crate) fn insert_add(&mut self, perm: Permutation, coeff: Complex64) {
        use std::collections::btree_map::Entry;
        debug_assert_eq!(perm.n_sites(), self.n_sites);
        match self.terms.entry(perm) {
            Entry::Vacant(slot) => {
                if coeff.re != 0.0 || coeff.im != 0.0 {
                    slot.insert(coeff);
                }
            }
            Entry::Occupied(mut slot) => {
                let updated = *slot.get() + coeff;
                if updated.re == 0.0 && updated.im == 0.0 {
                    slot.remove();
                } else {
                    *slot.get_mut() = updated;
                }
            }
        }
    }

    fn check_sites(&self, other: &AlgebraElement) -> Result<()> {
        if self.n_sites != other.n_sites {
            return Err(Error::SiteCountMismatch {
                left: self.n_sites,
                right: other.n_sites,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &AlgebraElement) -> Result<AlgebraElement> {
        self.check_sites(other)?;
        let mut out = self.clone();
        for (p, c) in &other.terms {
            out.insert_add(p.clone(), *c);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &AlgebraElement) -> Result<AlgebraElement> {
        self.check_sites(other)?;
        let mut out = self.clone();
        for (p, c) in &other.terms {
            out.insert_add(p.clone(), -c);
        }
        Ok(out)
    }

    pub fn scale(&self, factor: Complex64) -> AlgebraElement {
        let mut out = AlgebraElement::zero(self.n_sites);
        if factor.re == 0.0 && factor.im == 0.0 {
            return out;
        }
        for (p, c) in &self.terms {
            out.terms.insert(p.clone(), factor * c);
        }
        out
    }

    /// Convolution product induced by [`Permutation::compose`].
    pub fn mul(&self, other: &AlgebraElement) -> Result<AlgebraElement> {
        self.check_sites(other)?;
        let mut out = AlgebraElement::zero(self.n_sites);
        for (p, a) in &self.terms {
            for (q, b) in &other.terms {
                out.insert_add(p.compose(q), a * b);
            }
        }
        Ok(out)
    }

    /// `self · other − other · self`.
    pub fn commutator(&self, other: &AlgebraElement) -> Result<AlgebraElement> {
        self.mul(other)?.sub(&other.mul(self)?)
    }

    /// Largest coefficient magnitude; 0 for the zero element.
    pub fn inf_norm(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Support grouped by cycle type: `(cycle type, term count, max |coeff|)`.
    pub fn support_classes(&self) -> Vec<(Vec<usize>, usize, f64)> {
        let mut by_class: BTreeMap<Vec<usize>, (usize, f64)> = BTreeMap::new();
        for (p, c) in &self.terms {
            let entry = by_class.entry(p.cycle_type()).or_insert((0, 0.0));
            entry.0 += 1;
            entry.1 = entry.1.max(c.norm());
        }
        by_class
            .into_iter()
            .map(|(ty, (count, max))| (ty, count, max))
            .collect()
    }

    /// Drops terms with magnitude below `threshold · inf_norm`.
    pub fn prune(&self, threshold: f64) -> AlgebraElement {
        assert!(threshold >= 0.0);
        let cut = threshold * self.inf_norm();
        let mut out = AlgebraElement::zero(self.n_sites);
        for (p, c) in &self.terms {
            if c.norm() >= cut && (c.re != 0.0 || c.im != 0.0) {
                out.terms.insert(p.clone(), *c);
            }
        }
        out
    }
}

/// Sum of all 3-cycles with unit coefficients; central in the group algebra.
pub fn three_cycle_class_sum(n_sites: usize) -> Result<AlgebraElement> {
    let mut out = AlgebraElement::zero(n_sites);
    for a in 1..=n_sites {
        for b in (a + 1)..=n_sites {
            for c in (b + 1)..=n_sites {
                out.insert_add(p_jkl(a, b, c, n_sites)?, Complex64::new(1.0, 0.0));
                out.insert_add(p_jkl(a, c, b, n_sites)?, Complex64::new(1.0, 0.0));
            }
        }
    }
    Ok(out)
}
