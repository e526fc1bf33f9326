//! Spin-½ realization: permutations act on 2^N basis states by shuffling
//! qubit positions, so every permutation matrix is an exact 0/1 matrix and
//! the representation itself introduces no floating-point error. The
//! two-site Pauli construction `½(1 + σ_j·σ_k)` is kept in the tests as an
//! independent oracle.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::group_algebra::{AlgebraElement, Permutation};
use crate::integrals::{build_integrals, ChainConfig};

/// Default cap on the number of sites (dimension 2^N).
pub const DEFAULT_SITE_CAP: usize = 12;

/// Sparse complex matrix in compressed sparse row form; entries are
/// deduplicated, sorted by (row, column) and never exactly zero.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseOperator {
    dim: usize,
    row_ptr: Vec<usize>,
    cols: Vec<u32>,
    vals: Vec<Complex64>,
}

impl SparseOperator {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    pub fn identity(dim: usize) -> Self {
        SparseOperator {
            dim,
            row_ptr: (0..=dim).collect(),
            cols: (0..dim as u32).collect(),
            vals: vec![Complex64::new(1.0, 0.0); dim],
        }
    }

    /// Entries as `(row, col, value)` in (row, col) order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, Complex64)> + '_ {
        (0..self.dim).flat_map(move |r| {
            (self.row_ptr[r]..self.row_ptr[r + 1])
                .map(move |i| (r, self.cols[i] as usize, self.vals[i]))
        })
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        let range = self.row_ptr[row]..self.row_ptr[row + 1];
        match self.cols[range.clone()].binary_search(&(col as u32)) {
            Ok(offset) => self.vals[range.start + offset],
            Err(_) => Complex64::default(),
        }
    }

    fn from_rows(dim: usize, rows: Vec<Vec<(u32, Complex64)>>) -> Self {
        let mut row_ptr = Vec::with_capacity(dim + 1);
        let mut cols = Vec::new();
        let mut vals = Vec::new();
        row_ptr.push(0);
        for row in rows {
            for (c, v) in row {
                if v.re != 0.0 || v.im != 0.0 {
                    cols.push(c);
                    vals.push(v);
                }
            }
            row_ptr.push(cols.len());
        }
        SparseOperator {
            dim,
            row_ptr,
            cols,
            vals,
        }
    }

    /// `self · other` via row-wise sparse accumulation.
    pub fn mul(&self, other: &SparseOperator) -> SparseOperator {
        assert_eq!(self.dim, other.dim);
        let dim = self.dim;
        let rows: Vec<Vec<(u32, Complex64)>> = (0..dim)
            .into_par_iter()
            .map_init(
                || (vec![Complex64::default(); dim], Vec::<u32>::new()),
                |(acc, touched), r| {
                    for i in self.row_ptr[r]..self.row_ptr[r + 1] {
                        let k = self.cols[i] as usize;
                        let a = self.vals[i];
                        for j in other.row_ptr[k]..other.row_ptr[k + 1] {
                            let c = other.cols[j] as usize;
                            if acc[c].re == 0.0 && acc[c].im == 0.0 {
                                touched.push(c as u32);
                            }
                            acc[c] += a * other.vals[j];
                        }
                    }
                    touched.sort_unstable();
                    let row: Vec<(u32, Complex64)> = touched
                        .iter()
                        .map(|&c| {
                            let v = acc[c as usize];
                            acc[c as usize] = Complex64::default();
                            (c, v)
                        })
                        .collect();
                    touched.clear();
                    row
                },
            )
            .collect();
        SparseOperator::from_rows(dim, rows)
    }

    /// `self + factor · other`.
    pub fn add_scaled(&self, other: &SparseOperator, factor: Complex64) -> SparseOperator {
        assert_eq!(self.dim, other.dim);
        let mut rows = Vec::with_capacity(self.dim);
        for r in 0..self.dim {
            let mut row = Vec::new();
            let (mut i, mut j) = (self.row_ptr[r], other.row_ptr[r]);
            let (i_end, j_end) = (self.row_ptr[r + 1], other.row_ptr[r + 1]);
            while i < i_end || j < j_end {
                let ci = if i < i_end { self.cols[i] } else { u32::MAX };
                let cj = if j < j_end { other.cols[j] } else { u32::MAX };
                if ci < cj {
                    row.push((ci, self.vals[i]));
                    i += 1;
                } else if cj < ci {
                    row.push((cj, factor * other.vals[j]));
                    j += 1;
                } else {
                    row.push((ci, self.vals[i] + factor * other.vals[j]));
                    i += 1;
                    j += 1;
                }
            }
            rows.push(row);
        }
        SparseOperator::from_rows(self.dim, rows)
    }

    /// `self·other − other·self`.
    pub fn commutator(&self, other: &SparseOperator) -> SparseOperator {
        self.mul(other)
            .add_scaled(&other.mul(self), Complex64::new(-1.0, 0.0))
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.vals.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn transpose(&self) -> SparseOperator {
        let mut counts = vec![0usize; self.dim + 1];
        for &c in &self.cols {
            counts[c as usize + 1] += 1;
        }
        for i in 0..self.dim {
            counts[i + 1] += counts[i];
        }
        let mut cols = vec![0u32; self.nnz()];
        let mut vals = vec![Complex64::default(); self.nnz()];
        let mut cursor = counts.clone();
        for r in 0..self.dim {
            for i in self.row_ptr[r]..self.row_ptr[r + 1] {
                let c = self.cols[i] as usize;
                cols[cursor[c]] = r as u32;
                vals[cursor[c]] = self.vals[i];
                cursor[c] += 1;
            }
        }
        SparseOperator {
            dim: self.dim,
            row_ptr: counts,
            cols,
            vals,
        }
    }

    /// Largest entry magnitude of `self − sign·selfᵀ`; zero for matrices
    /// with the advertised symmetry.
    pub fn symmetry_violation(&self, sign: f64) -> f64 {
        let t = self.transpose();
        self.add_scaled(&t, Complex64::new(-sign, 0.0))
            .vals
            .iter()
            .map(|v| v.norm())
            .fold(0.0, f64::max)
    }

    /// Largest imaginary part across entries.
    pub fn max_imag(&self) -> f64 {
        self.vals.iter().map(|v| v.im.abs()).fold(0.0, f64::max)
    }
}

fn check_cap(n_sites: usize, cap: usize) -> Result<()> {
    if n_sites > cap {
        Err(Error::DimensionCap { n_sites, cap })
    } else {
        Ok(())
    }
}

/// Image of basis state `s` under the site shuffle `p`: the spin at site
/// `i` moves to site `p(i)`.
fn apply_to_state(images: &[u8], s: usize) -> usize {
    let mut out = 0usize;
    for (i, &img) in images.iter().enumerate() {
        if s & (1 << i) != 0 {
            out |= 1 << (img - 1);
        }
    }
    out
}

/// Exact 0/1 permutation matrix of a site shuffle on 2^N basis states.
pub fn spin_matrix_of_perm(p: &Permutation, cap: usize) -> Result<SparseOperator> {
    check_cap(p.n_sites(), cap)?;
    let dim = 1usize << p.n_sites();
    let inv = p.inverse();
    let rows: Vec<Vec<(u32, Complex64)>> = (0..dim)
        .map(|r| vec![(apply_to_state(inv.images(), r) as u32, Complex64::new(1.0, 0.0))])
        .collect();
    Ok(SparseOperator::from_rows(dim, rows))
}

/// Linear extension of the basis-shuffle representation to algebra
/// elements, with the default site cap.
pub fn represent(a: &AlgebraElement) -> Result<SparseOperator> {
    represent_with_cap(a, DEFAULT_SITE_CAP)
}

pub fn represent_with_cap(a: &AlgebraElement, cap: usize) -> Result<SparseOperator> {
    check_cap(a.n_sites(), cap)?;
    let dim = 1usize << a.n_sites();
    // inverse images per term, in canonical term order
    let terms: Vec<(Vec<u8>, Complex64)> = a
        .terms()
        .map(|(p, c)| (p.inverse().images().to_vec(), *c))
        .collect();
    let rows: Vec<Vec<(u32, Complex64)>> = (0..dim)
        .into_par_iter()
        .map(|r| {
            let mut row: Vec<(u32, Complex64)> = terms
                .iter()
                .map(|(inv, c)| (apply_to_state(inv, r) as u32, *c))
                .collect();
            row.sort_by_key(|&(c, _)| c);
            let mut merged: Vec<(u32, Complex64)> = Vec::with_capacity(row.len());
            for (c, v) in row {
                match merged.last_mut() {
                    Some(last) if last.0 == c => last.1 += v,
                    _ => merged.push((c, v)),
                }
            }
            merged
        })
        .collect();
    Ok(SparseOperator::from_rows(dim, rows))
}

/// Frobenius-relative commutator norms of the represented charges, plus a
/// deliberately non-commuting control.
#[derive(Debug, Clone)]
pub struct SpinReport {
    pub n_sites: usize,
    pub kappa: f64,
    /// `(pair, ‖[A,B]‖_F / (‖A‖_F ‖B‖_F))` for the four charge pairs.
    pub norms: Vec<(String, f64)>,
    /// Relative commutator norm of J₁ against a random diagonal matrix.
    pub negative_control: f64,
    pub tol: f64,
    pub pass: bool,
}

/// Represents H, J₀, J₁, J₂ and checks the commutators in the spin basis.
pub fn verify_spin_commutators(config: &ChainConfig) -> Result<SpinReport> {
    let set = build_integrals(config)?;
    let h = represent(&set.h)?;
    let j0 = represent(&set.j0)?;
    let j1 = represent(&set.j1)?;
    let j2 = represent(&set.j2)?;

    let rel = |a: &SparseOperator, b: &SparseOperator| {
        a.commutator(b).frobenius_norm() / (a.frobenius_norm() * b.frobenius_norm())
    };
    let norms = vec![
        ("[H,J1]".to_string(), rel(&h, &j1)),
        ("[H,J2]".to_string(), rel(&h, &j2)),
        ("[J1,J2]".to_string(), rel(&j1, &j2)),
        ("[J0,H]".to_string(), rel(&j0, &h)),
    ];

    let dim = h.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed ^ 0xd1a6);
    let diag_rows: Vec<Vec<(u32, Complex64)>> = (0..dim)
        .map(|r| vec![(r as u32, Complex64::new(rng.gen_range(0.0..1.0), 0.0))])
        .collect();
    let diag = SparseOperator::from_rows(dim, diag_rows);
    let negative_control = rel(&j1, &diag);

    let tol = config.tol;
    let pass = norms.iter().all(|(_, v)| *v <= tol) && negative_control > 1e-2;
    Ok(SpinReport {
        n_sites: config.n_sites,
        kappa: config.kappa,
        norms,
        negative_control,
        tol,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::commutator::{commutator_full, Charge};

    fn dense_kron(a: &[Vec<Complex64>], b: &[Vec<Complex64>]) -> Vec<Vec<Complex64>> {
        let (ra, ca) = (a.len(), a[0].len());
        let (rb, cb) = (b.len(), b[0].len());
        let mut out = vec![vec![Complex64::default(); ca * cb]; ra * rb];
        for i in 0..ra {
            for j in 0..ca {
                for k in 0..rb {
                    for l in 0..cb {
                        out[i * rb + k][j * cb + l] = a[i][j] * b[k][l];
                    }
                }
            }
        }
        out
    }

    /// Dense `½(1 + σ_j·σ_k)` built from explicit Pauli blocks; the
    /// independent oracle for the swap matrix.
    fn pauli_swap_oracle(j: usize, k: usize, n: usize) -> Vec<Vec<Complex64>> {
        let zero = Complex64::default();
        let one = Complex64::new(1.0, 0.0);
        let eye = vec![vec![one, zero], vec![zero, one]];
        let sx = vec![vec![zero, one], vec![one, zero]];
        let sy = vec![
            vec![zero, Complex64::new(0.0, -1.0)],
            vec![Complex64::new(0.0, 1.0), zero],
        ];
        let sz = vec![vec![one, zero], vec![zero, -one]];

        // tensor order: site 1 is the least significant qubit
        let site_op = |site: usize, op: &Vec<Vec<Complex64>>| {
            let mut acc = vec![vec![one]];
            for s in 1..=n {
                let factor = if s == site { op } else { &eye };
                acc = dense_kron(factor, &acc);
            }
            acc
        };
        let dim = 1 << n;
        let mut out = vec![vec![zero; dim]; dim];
        for axis in [&sx, &sy, &sz] {
            let a = site_op(j, axis);
            let b = site_op(k, axis);
            for r in 0..dim {
                for c in 0..dim {
                    let mut v = Complex64::default();
                    for m in 0..dim {
                        v += a[r][m] * b[m][c];
                    }
                    out[r][c] += v;
                }
            }
        }
        for (r, row) in out.iter_mut().enumerate() {
            row[r] += one;
            for v in row.iter_mut() {
                *v *= 0.5;
            }
        }
        out
    }

    #[test]
    fn identity_permutation_is_identity_matrix() {
        let p = Permutation::identity(4);
        let m = spin_matrix_of_perm(&p, 12).unwrap();
        assert_eq!(m, SparseOperator::identity(16));
    }

    #[test]
    fn transposition_swaps_basis_states() {
        let p = Permutation::transposition(1, 2, 4).unwrap();
        let m = spin_matrix_of_perm(&p, 12).unwrap();
        // |1000> (state 1) maps to |0100> (state 2)
        assert_eq!(m.get(2, 1), Complex64::new(1.0, 0.0));
        assert_eq!(m.get(1, 1), Complex64::default());
        // |1100> is fixed
        assert_eq!(m.get(3, 3), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn swap_matrices_match_pauli_oracle() {
        for n in [3usize, 4] {
            for j in 1..=n {
                for k in (j + 1)..=n {
                    let p = Permutation::transposition(j, k, n).unwrap();
                    let fast = spin_matrix_of_perm(&p, 12).unwrap();
                    let oracle = pauli_swap_oracle(j, k, n);
                    for (r, row) in oracle.iter().enumerate() {
                        for (c, expected) in row.iter().enumerate() {
                            assert!(
                                (fast.get(r, c) - expected).norm() <= 1e-14,
                                "mismatch at ({r},{c}) for P_({j},{k}) n={n}"
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn representation_is_a_homomorphism() {
        use rand::seq::SliceRandom;
        let n = 4;
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        // exact check on permutation matrices over random group pairs
        for _ in 0..100 {
            let mut v: Vec<u8> = (1..=n as u8).collect();
            v.shuffle(&mut rng);
            let p = perm_from_images(v);
            let mut w: Vec<u8> = (1..=n as u8).collect();
            w.shuffle(&mut rng);
            let q = perm_from_images(w);
            let up = spin_matrix_of_perm(&p, 12).unwrap();
            let uq = spin_matrix_of_perm(&q, 12).unwrap();
            let upq = spin_matrix_of_perm(&p.compose(&q), 12).unwrap();
            assert_eq!(up.mul(&uq), upq);
        }
        // linear extension on random sparse elements
        for seed in 0..20u64 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a = random_element(&mut rng, n, 4);
            let b = random_element(&mut rng, n, 4);
            let left = represent(&a.mul(&b).unwrap()).unwrap();
            let right = represent(&a).unwrap().mul(&represent(&b).unwrap());
            let diff = left.add_scaled(&right, Complex64::new(-1.0, 0.0));
            let scale = left.frobenius_norm().max(1e-300);
            assert!(diff.frobenius_norm() <= 1e-12 * scale);
        }
    }

    fn perm_from_images(images: Vec<u8>) -> Permutation {
        let cycles = images_to_cycles(&images);
        Permutation::from_cycles(&cycles, images.len()).unwrap()
    }

    fn images_to_cycles(images: &[u8]) -> Vec<Vec<usize>> {
        let n = images.len();
        let mut seen = vec![false; n];
        let mut cycles = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut cur = start;
            while !seen[cur] {
                seen[cur] = true;
                cycle.push(cur + 1);
                cur = images[cur] as usize - 1;
            }
            if cycle.len() > 1 {
                cycles.push(cycle);
            }
        }
        cycles
    }

    fn random_element(rng: &mut ChaCha8Rng, n: usize, terms: usize) -> AlgebraElement {
        use rand::seq::SliceRandom;
        let mut el = AlgebraElement::zero(n);
        for _ in 0..terms {
            let mut v: Vec<u8> = (1..=n as u8).collect();
            v.shuffle(rng);
            let c = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            let perm = perm_from_images(v);
            el = el
                .add(&AlgebraElement::from_term(perm, c))
                .unwrap();
        }
        el
    }

    #[test]
    fn charge_matrices_have_advertised_symmetries() {
        let config = ChainConfig::new(6, 6.0).unwrap();
        let set = build_integrals(&config).unwrap();
        let h = represent(&set.h).unwrap();
        let j1 = represent(&set.j1).unwrap();
        let j2 = represent(&set.j2).unwrap();
        assert!(h.symmetry_violation(1.0) <= 1e-12 * h.frobenius_norm());
        assert!(h.max_imag() <= 1e-12 * h.frobenius_norm());
        assert!(j1.symmetry_violation(-1.0) <= 1e-12 * j1.frobenius_norm());
        assert!(j1.max_imag() <= 1e-12 * j1.frobenius_norm());
        assert!(j2.symmetry_violation(-1.0) <= 1e-12 * j2.frobenius_norm());
    }

    #[test]
    fn hamiltonian_preserves_magnetization() {
        let config = ChainConfig::new(5, 5.0).unwrap();
        let set = build_integrals(&config).unwrap();
        let h = represent(&set.h).unwrap();
        for (r, c, _) in h.entries() {
            assert_eq!(r.count_ones(), c.count_ones());
        }
    }

    #[test]
    fn class_sum_matrix_commutes_with_every_swap() {
        for n in 3..=8usize {
            let config = ChainConfig::new(n, n as f64).unwrap();
            let set = build_integrals(&config).unwrap();
            let j0 = represent(&set.j0).unwrap();
            for j in 1..=n {
                for k in (j + 1)..=n {
                    let t = spin_matrix_of_perm(
                        &Permutation::transposition(j, k, n).unwrap(),
                        12,
                    )
                    .unwrap();
                    let comm = j0.commutator(&t);
                    assert!(
                        comm.frobenius_norm() <= 1e-14 * j0.frobenius_norm(),
                        "P_({j},{k}) at n={n}"
                    );
                }
            }
        }
    }

    #[test]
    fn spin_commutators_vanish_with_negative_control() {
        for n in 5..=8usize {
            let config = ChainConfig::new(n, n as f64).unwrap().with_tol(1e-9);
            let report = verify_spin_commutators(&config).unwrap();
            for (pair, value) in &report.norms {
                assert!(*value <= 1e-9, "{pair} = {value:.3e} at N={n}");
            }
            assert!(report.negative_control > 1e-2);
            assert!(report.pass);
        }
    }

    #[test]
    fn spin_and_algebra_verdicts_agree() {
        for n in [5usize, 6] {
            let config = ChainConfig::new(n, n as f64).unwrap().with_tol(1e-9);
            let set = build_integrals(&config).unwrap();
            let algebra_pass = commutator_full(&set, Charge::J1, Charge::J2)
                .1
                .residual
                .relative()
                <= 1e-9;
            let spin_pass = verify_spin_commutators(&config).unwrap().pass;
            assert_eq!(algebra_pass, spin_pass);
            assert!(algebra_pass);
        }
    }

    #[test]
    fn dimension_cap_is_enforced() {
        let a = AlgebraElement::zero(13);
        assert!(matches!(
            represent(&a),
            Err(Error::DimensionCap { n_sites: 13, cap: 12 })
        ));
        let p = Permutation::identity(13);
        assert!(matches!(
            spin_matrix_of_perm(&p, 12),
            Err(Error::DimensionCap { .. })
        ));
    }
}
