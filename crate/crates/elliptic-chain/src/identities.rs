//! Numerical verification of the standalone elliptic-function identities:
//! the rewriting identities for F, the ζ composition law, the vanishing
//! kernels A, B and R, the closed form of the triple kernel Φ, the Φ sum
//! rule, and near-pole regularity probes.
//!
//! Every check reports its residual against a cancellation-aware gross
//! mass: the sum of the magnitudes of the finest displayed atoms (every
//! ζ·℘-type product contributes |·| before any cancellation). Expressions
//! are transcribed term by term as displayed, not simplified first.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::integrals::{coeff_f, coeff_phi};
use crate::report::Residual;
use crate::weierstrass::{
    distance_to_lattice, wp, wp_double_prime, wp_prime, zeta_w, Lattice, DEFAULT_POLE_MARGIN,
};

/// Seeded sampling plan for identity checks on the torus.
///
/// Tuples are drawn uniformly from the fundamental rectangle of the target
/// lattice; a candidate is accepted only when every coordinate stays
/// `pole_margin` away from the lattice and every pairwise sum and
/// difference stays `coincidence_margin` away (those are the argument
/// combinations the identity displays use).
#[derive(Debug, Clone)]
pub struct SamplePlan {
    pub count: usize,
    pub seed: u64,
    pub pole_margin: f64,
    pub coincidence_margin: f64,
}

impl SamplePlan {
    pub fn new(count: usize, seed: u64) -> Self {
        assert!(count >= 1);
        SamplePlan {
            count,
            seed,
            pole_margin: 1e-3,
            coincidence_margin: 1e-3,
        }
    }

    pub fn with_margins(mut self, pole_margin: f64, coincidence_margin: f64) -> Self {
        assert!(pole_margin > 0.0 && coincidence_margin > 0.0);
        self.pole_margin = pole_margin;
        self.coincidence_margin = coincidence_margin;
        self
    }
}

const MAX_ATTEMPTS_PER_TUPLE: usize = 10_000;

/// Draws `plan.count` argument tuples of the given arity, rejection-sampled
/// against the plan margins. Reproducible: the seed fixes the output.
pub fn sample_torus(plan: &SamplePlan, arity: usize, lat: &Lattice) -> Result<Vec<Vec<Complex64>>> {
    let mut rng = ChaCha8Rng::seed_from_u64(plan.seed);
    let mut tuples = Vec::with_capacity(plan.count);
    for tuple_index in 0..plan.count {
        let mut attempts = 0;
        'draw: loop {
            attempts += 1;
            if attempts > MAX_ATTEMPTS_PER_TUPLE {
                return Err(Error::SamplingExhausted {
                    attempts: MAX_ATTEMPTS_PER_TUPLE,
                    tuple_index,
                });
            }
            let tuple: Vec<Complex64> = (0..arity)
                .map(|_| {
                    Complex64::new(
                        rng.gen_range(0.0..lat.real_period),
                        rng.gen_range(0.0..lat.kappa),
                    )
                })
                .collect();
            for z in &tuple {
                if distance_to_lattice(*z, lat) < plan.pole_margin {
                    continue 'draw;
                }
            }
            for i in 0..arity {
                for j in (i + 1)..arity {
                    if distance_to_lattice(tuple[i] - tuple[j], lat) < plan.coincidence_margin
                        || distance_to_lattice(tuple[i] + tuple[j], lat) < plan.coincidence_margin
                    {
                        continue 'draw;
                    }
                }
            }
            tuples.push(tuple);
            break;
        }
    }
    Ok(tuples)
}

/// Outcome of one identity check over a sample batch.
#[derive(Debug, Clone)]
pub struct IdentityReport {
    pub name: String,
    pub samples: usize,
    pub max_abs: f64,
    pub max_rel: f64,
    pub worst_point: Vec<Complex64>,
    pub tol: f64,
    pub pass: bool,
}

impl IdentityReport {
    fn from_samples(
        name: &str,
        tol: f64,
        points: &[Vec<Complex64>],
        results: &[Residual],
    ) -> Self {
        let mut max_abs = 0.0f64;
        let mut max_rel = 0.0f64;
        let mut worst = 0usize;
        for (i, r) in results.iter().enumerate() {
            max_abs = max_abs.max(r.abs);
            if r.relative() > max_rel {
                max_rel = r.relative();
                worst = i;
            }
        }
        IdentityReport {
            name: name.to_string(),
            samples: results.len(),
            max_abs,
            max_rel,
            worst_point: points.get(worst).cloned().unwrap_or_default(),
            tol,
            pass: max_rel <= tol,
        }
    }
}

fn check_args(args: &[(&'static str, Complex64)], lat: &Lattice) -> Result<()> {
    for &(name, z) in args {
        let d = distance_to_lattice(z, lat);
        if d <= DEFAULT_POLE_MARGIN {
            return Err(Error::PoleProximity {
                arg: name,
                z,
                distance: d,
                margin: DEFAULT_POLE_MARGIN,
            });
        }
    }
    Ok(())
}

/// `2(ζa+ζb+ζc)·℘(w) ± ℘′(w)` bracket: value and gross atom mass.
fn coeff_bracket(
    za: Complex64,
    zb: Complex64,
    zc: Complex64,
    p: Complex64,
    dp: Complex64,
    dp_sign: f64,
) -> (Complex64, f64) {
    let val = 2.0 * (za + zb + zc) * p + dp_sign * dp;
    let mass = 2.0 * (za.norm() + zb.norm() + zc.norm()) * p.norm() + dp.norm();
    (val, mass)
}

/// Plain ζ combination bracket: value and gross mass from the listed
/// (sign, value) atoms.
fn zeta_bracket(atoms: &[(f64, Complex64)]) -> (Complex64, f64) {
    let mut val = Complex64::default();
    let mut mass = 0.0;
    for &(s, z) in atoms {
        val += s * z;
        mass += s.abs() * z.norm();
    }
    (val, mass)
}

/// The five-term quartic-overlap kernel R(x, y, z, v); identically zero.
pub fn eval_r(
    x: Complex64,
    y: Complex64,
    z: Complex64,
    v: Complex64,
    lat: &Lattice,
) -> Result<(Complex64, f64)> {
    check_args(
        &[
            ("x", x),
            ("y", y),
            ("z", z),
            ("v", v),
            ("v+x", v + x),
            ("v+y", v + y),
            ("v+z", v + z),
            ("y-x", y - x),
            ("z-y", z - y),
            ("x-z", x - z),
        ],
        lat,
    )?;
    let zw = |w| zeta_w(w, lat).expect("argument pre-checked");
    let pw = |w| wp(w, lat).expect("argument pre-checked");
    let dpw = |w| wp_prime(w, lat).expect("argument pre-checked");

    let (b1, m1) = coeff_bracket(zw(y - x), zw(z - y), zw(x - z), pw(x - z), dpw(x - z), 1.0);
    let (c1, n1) = zeta_bracket(&[
        (-1.0, zw(v + x)),
        (1.0, zw(x)),
        (1.0, zw(v + z)),
        (-1.0, zw(z)),
    ]);

    let (b2, m2) = coeff_bracket(zw(x), zw(y - x), -zw(y), pw(y), dpw(y), -1.0);
    let (c2, n2) = zeta_bracket(&[
        (1.0, zw(z)),
        (1.0, zw(v)),
        (-1.0, zw(z - y)),
        (-1.0, zw(v + y)),
    ]);

    let (b3, m3) = coeff_bracket(zw(v), zw(x), -zw(v + x), pw(v + x), dpw(v + x), -1.0);
    let (c3, n3) = zeta_bracket(&[
        (1.0, zw(v + y)),
        (-1.0, zw(v + z)),
        (-1.0, zw(y - x)),
        (1.0, zw(z - x)),
    ]);

    let (b4, m4) = coeff_bracket(-zw(v + z), zw(v), zw(z), pw(z), dpw(z), 1.0);
    let (c4, n4) = zeta_bracket(&[
        (1.0, zw(x - z)),
        (1.0, zw(z - y)),
        (-1.0, zw(x)),
        (1.0, zw(y)),
    ]);

    let (b5, m5) = coeff_bracket(zw(z - y), -zw(v + z), zw(v + y), pw(v + y), dpw(v + y), 1.0);
    let (c5, n5) = zeta_bracket(&[
        (1.0, zw(y - x)),
        (-1.0, zw(y)),
        (-1.0, zw(v)),
        (1.0, zw(v + x)),
    ]);

    let value = b1 * c1 + b2 * c2 + b3 * c3 + b4 * c4 + b5 * c5;
    let mass = m1 * n1 + m2 * n2 + m3 * n3 + m4 * n4 + m5 * n5;
    Ok((value, mass))
}

/// The residue kernel A(x, y, z) of R at its candidate pole; identically
/// zero.
pub fn eval_a(x: Complex64, y: Complex64, z: Complex64, lat: &Lattice) -> Result<(Complex64, f64)> {
    check_args(
        &[
            ("x", x),
            ("y", y),
            ("z", z),
            ("y-x", y - x),
            ("z-x", z - x),
            ("z-y", z - y),
        ],
        lat,
    )?;
    let zw = |w| zeta_w(w, lat).expect("argument pre-checked");
    let pw = |w| wp(w, lat).expect("argument pre-checked");

    let (bx, mx) = zeta_bracket(&[
        (1.0, zw(y)),
        (-1.0, zw(z)),
        (-1.0, zw(y - x)),
        (1.0, zw(z - x)),
    ]);
    let (bz, mz) = zeta_bracket(&[
        (1.0, zw(x - z)),
        (1.0, zw(z - y)),
        (-1.0, zw(x)),
        (1.0, zw(y)),
    ]);
    let (by, my) = zeta_bracket(&[
        (1.0, zw(x)),
        (1.0, zw(z)),
        (-2.0, zw(y)),
        (1.0, zw(y - x)),
        (1.0, zw(y - z)),
    ]);
    let dp_y = wp_prime(y, lat).expect("argument pre-checked");

    let value = 2.0 * (pw(x) * bx + pw(z) * bz + pw(y) * by - dp_y);
    let mass = 2.0 * (pw(x).norm() * mx + pw(z).norm() * mz + pw(y).norm() * my + dp_y.norm());
    Ok((value, mass))
}

/// The constant kernel B(x, y, z) of R at its candidate pole; identically
/// zero.
pub fn eval_b(x: Complex64, y: Complex64, z: Complex64, lat: &Lattice) -> Result<(Complex64, f64)> {
    check_args(
        &[
            ("x", x),
            ("y", y),
            ("z", z),
            ("y-x", y - x),
            ("z-x", z - x),
            ("z-y", z - y),
        ],
        lat,
    )?;
    let zw = |w| zeta_w(w, lat).expect("argument pre-checked");
    let pw = |w| wp(w, lat).expect("argument pre-checked");
    let dpw = |w| wp_prime(w, lat).expect("argument pre-checked");

    let (bx, mx) = zeta_bracket(&[
        (1.0, zw(z)),
        (-1.0, zw(y)),
        (1.0, zw(y - x)),
        (-1.0, zw(z - x)),
    ]);
    let (bz, mz) = zeta_bracket(&[
        (1.0, zw(y)),
        (-1.0, zw(x)),
        (1.0, zw(x - z)),
        (1.0, zw(z - y)),
    ]);
    let (by, my) = zeta_bracket(&[
        (1.0, zw(x)),
        (1.0, zw(z)),
        (-2.0, zw(y)),
        (-1.0, zw(z - y)),
        (1.0, zw(y - x)),
    ]);
    let ppy = wp_double_prime(y, lat).expect("argument pre-checked");

    let quad = 2.0 * (pw(x) - pw(y)) * (pw(z) - pw(y));
    let quad_mass = 2.0 * (pw(x).norm() + pw(y).norm()) * (pw(z).norm() + pw(y).norm());

    let value = -dpw(x) * bx + dpw(z) * bz + dpw(y) * by + quad - ppy;
    let mass = dpw(x).norm() * mx
        + dpw(z).norm() * mz
        + dpw(y).norm() * my
        + quad_mass
        + ppy.norm();
    Ok((value, mass))
}

/// The six-bracket triple kernel Φ(x, y, z).
pub fn eval_phi(
    x: Complex64,
    y: Complex64,
    z: Complex64,
    lat: &Lattice,
) -> Result<(Complex64, f64)> {
    check_args(
        &[
            ("x", x),
            ("y", y),
            ("z", z),
            ("x-y", x - y),
            ("z-x", z - x),
            ("y-z", y - z),
        ],
        lat,
    )?;
    let zw = |w| zeta_w(w, lat).expect("argument pre-checked");
    let pw = |w| wp(w, lat).expect("argument pre-checked");
    let dpw = |w| wp_prime(w, lat).expect("argument pre-checked");

    let (b1, m1) = coeff_bracket(zw(x - y), zw(y), -zw(x), pw(x - y), dpw(x - y), 1.0);
    let (c1, n1) = zeta_bracket(&[
        (1.0, zw(z - x)),
        (1.0, zw(z - y)),
        (1.0, zw(x)),
        (1.0, zw(y)),
        (-2.0, zw(z)),
    ]);
    let (b2, m2) = coeff_bracket(zw(z - x), zw(x), -zw(z), pw(z - x), dpw(z - x), 1.0);
    let (c2, n2) = zeta_bracket(&[
        (1.0, zw(y - z)),
        (1.0, zw(y - x)),
        (1.0, zw(x)),
        (1.0, zw(z)),
        (-2.0, zw(y)),
    ]);
    let (b3, m3) = coeff_bracket(zw(y - z), zw(z), -zw(y), pw(y - z), dpw(y - z), 1.0);
    let (c3, n3) = zeta_bracket(&[
        (1.0, zw(x - y)),
        (1.0, zw(x - z)),
        (1.0, zw(y)),
        (1.0, zw(z)),
        (-2.0, zw(x)),
    ]);

    Ok((
        b1 * c1 + b2 * c2 + b3 * c3,
        m1 * n1 + m2 * n2 + m3 * n3,
    ))
}

/// The closed form of Φ: three ℘·℘ differences.
pub fn eval_phi_closed(
    x: Complex64,
    y: Complex64,
    z: Complex64,
    lat: &Lattice,
) -> Result<(Complex64, f64)> {
    check_args(
        &[
            ("x", x),
            ("y", y),
            ("z", z),
            ("x-y", x - y),
            ("x-z", x - z),
            ("y-z", y - z),
        ],
        lat,
    )?;
    let pw = |w| wp(w, lat).expect("argument pre-checked");
    let value = 2.0
        * (pw(x - y) * (pw(y) - pw(x))
            + pw(x - z) * (pw(x) - pw(z))
            + pw(y - z) * (pw(z) - pw(y)));
    let mass = 2.0
        * (pw(x - y).norm() * (pw(y).norm() + pw(x).norm())
            + pw(x - z).norm() * (pw(x).norm() + pw(z).norm())
            + pw(y - z).norm() * (pw(z).norm() + pw(y).norm()));
    Ok((value, mass))
}

/// The 3-cycle coefficient combination T_{jklp} built from φ and F.
pub fn eval_t(
    j: usize,
    k: usize,
    l: usize,
    p: usize,
    lat: &Lattice,
) -> Result<(Complex64, f64)> {
    let f_jkp = coeff_f(j, k, p, lat)?;
    let f_ljp = coeff_f(l, j, p, lat)?;
    let f_klp = coeff_f(k, l, p, lat)?;
    let phi_ljp = coeff_phi(l, j, p, lat)?;
    let phi_klp = coeff_phi(k, l, p, lat)?;
    let phi_jkp = coeff_phi(j, k, p, lat)?;
    let value = f_jkp * (phi_ljp - phi_klp)
        + f_ljp * (phi_klp - phi_jkp)
        + f_klp * (phi_jkp - phi_ljp);
    let mass = f_jkp.norm() * (phi_ljp.norm() + phi_klp.norm())
        + f_ljp.norm() * (phi_klp.norm() + phi_jkp.norm())
        + f_klp.norm() * (phi_jkp.norm() + phi_ljp.norm());
    Ok((value, mass))
}

/// Residual of the ζ composition law
/// `½(℘′(y)+℘′(z)) = (℘(y)−℘(z))(ζ(z)−ζ(y)+ζ(y−z))`.
pub fn zeta_composition_residual(y: Complex64, z: Complex64, lat: &Lattice) -> Result<Residual> {
    check_args(&[("y", y), ("z", z), ("y-z", y - z)], lat)?;
    let lhs = 0.5 * (wp_prime(y, lat)? + wp_prime(z, lat)?);
    let (bracket, bracket_mass) = zeta_bracket(&[
        (1.0, zeta_w(z, lat)?),
        (-1.0, zeta_w(y, lat)?),
        (1.0, zeta_w(y - z, lat)?),
    ]);
    let rhs = (wp(y, lat)? - wp(z, lat)?) * bracket;
    let mass = 0.5 * (wp_prime(y, lat)?.norm() + wp_prime(z, lat)?.norm())
        + (wp(y, lat)?.norm() + wp(z, lat)?.norm()) * bracket_mass;
    Ok(Residual::new((lhs - rhs).norm(), mass))
}

/// Residual of the double rewriting identity behind the alternate F forms:
/// the three expressions `2φ·℘(d) + ℘′(d)` over the triple's differences
/// must agree.
pub fn coeff_form_residual(j: usize, k: usize, l: usize, lat: &Lattice) -> Result<Residual> {
    let phi = coeff_phi(j, k, l, lat)?;
    let (ji, ki, li) = (j as i64, k as i64, l as i64);
    let mut values = Vec::with_capacity(3);
    let mut mass = 0.0;
    for d in [ji - ki, ki - li, li - ji] {
        let zd = Complex64::new(d as f64, 0.0);
        let p = wp(zd, lat)?;
        let dp = wp_prime(zd, lat)?;
        values.push(2.0 * phi * p + dp);
        mass += 2.0 * phi.norm() * p.norm() + dp.norm();
    }
    let r1 = (values[0] - values[1]).norm();
    let r2 = (values[1] - values[2]).norm();
    Ok(Residual::new(r1.max(r2), mass))
}

/// Residual of the Φ sum rule: `Σ_{p ∉ {j,k,l}} Φ(j−p, k−p, l−p) = 0`.
pub fn phi_sum_rule_residual(
    j: usize,
    k: usize,
    l: usize,
    n_sites: usize,
    lat: &Lattice,
) -> Result<Residual> {
    if [j, k, l].iter().any(|&i| i == 0 || i > n_sites) {
        return Err(Error::IndexOutOfRange {
            index: *[j, k, l].iter().find(|&&i| i == 0 || i > n_sites).unwrap(),
            n_sites,
        });
    }
    if j == k || k == l || j == l {
        return Err(Error::RepeatedIndex { index: j });
    }
    let mut value = Complex64::default();
    let mut mass = 0.0;
    for p in 1..=n_sites {
        if p == j || p == k || p == l {
            continue;
        }
        let x = Complex64::new(j as f64 - p as f64, 0.0);
        let y = Complex64::new(k as f64 - p as f64, 0.0);
        let z = Complex64::new(l as f64 - p as f64, 0.0);
        let (phi, m) = eval_phi(x, y, z, lat)?;
        value += phi;
        mass += m;
    }
    Ok(Residual::new(value.norm(), mass))
}

/// `S(k) = Σ_{p≠k} ℘(k−p)` for every k, plus the relative spread across k
/// (which must vanish: the summands are a permutation of one multiset).
pub fn s_values(n_sites: usize, lat: &Lattice) -> Result<(Vec<Complex64>, f64)> {
    let mut values = Vec::with_capacity(n_sites);
    for k in 1..=n_sites {
        let mut s = Complex64::default();
        for p in 1..=n_sites {
            if p == k {
                continue;
            }
            s += wp(Complex64::new(k as f64 - p as f64, 0.0), lat)?;
        }
        values.push(s);
    }
    let mut spread = 0.0f64;
    for a in &values {
        for b in &values {
            spread = spread.max((a - b).norm());
        }
    }
    let rel = spread / values[0].norm();
    Ok((values, rel))
}

fn batch_max(
    name: &str,
    tol: f64,
    points: Vec<Vec<Complex64>>,
    eval: impl Fn(&[Complex64]) -> Residual + Sync,
) -> IdentityReport {
    let residuals: Vec<Residual> = points.par_iter().map(|t| eval(t)).collect();
    IdentityReport::from_samples(name, tol, &points, &residuals)
}

/// Runs the eight-identity battery for one lattice: the F rewriting
/// identity, the ζ composition law, A, B, R, the Φ closed form, the Φ sum
/// rule and S-constancy. `tol` applies to the sampled vanishing checks;
/// the exhaustive rewriting checks use `1e-9` and S-constancy `1e-10`.
pub fn run_identity_battery(
    n_sites: usize,
    lat: &Lattice,
    plan: &SamplePlan,
    tol: f64,
) -> Result<Vec<IdentityReport>> {
    let mut reports = Vec::new();

    // exhaustive rewriting identity over ordered triples
    {
        let mut triples = Vec::new();
        for j in 1..=n_sites {
            for k in 1..=n_sites {
                for l in 1..=n_sites {
                    if j != k && k != l && j != l {
                        triples.push((j, k, l));
                    }
                }
            }
        }
        let residuals: Vec<Residual> = triples
            .par_iter()
            .map(|&(j, k, l)| coeff_form_residual(j, k, l, lat).expect("valid triple"))
            .collect();
        let points: Vec<Vec<Complex64>> = triples
            .iter()
            .map(|&(j, k, l)| {
                vec![
                    Complex64::new(j as f64, 0.0),
                    Complex64::new(k as f64, 0.0),
                    Complex64::new(l as f64, 0.0),
                ]
            })
            .collect();
        reports.push(IdentityReport::from_samples(
            "coeff_form_identity",
            1e-9,
            &points,
            &residuals,
        ));
    }

    reports.push(batch_max(
        "zeta_composition",
        1e-9,
        sample_torus(plan, 2, lat)?,
        |t| zeta_composition_residual(t[0], t[1], lat).expect("sampled admissible"),
    ));

    reports.push(batch_max(
        "kernel_a_vanishes",
        tol,
        sample_torus(plan, 3, lat)?,
        |t| {
            let (v, m) = eval_a(t[0], t[1], t[2], lat).expect("sampled admissible");
            Residual::new(v.norm(), m)
        },
    ));

    reports.push(batch_max(
        "kernel_b_vanishes",
        tol,
        sample_torus(plan, 3, lat)?,
        |t| {
            let (v, m) = eval_b(t[0], t[1], t[2], lat).expect("sampled admissible");
            Residual::new(v.norm(), m)
        },
    ));

    reports.push(batch_max(
        "quartic_kernel_vanishes",
        tol,
        sample_torus(plan, 4, lat)?,
        |t| {
            let (v, m) = eval_r(t[0], t[1], t[2], t[3], lat).expect("sampled admissible");
            Residual::new(v.norm(), m)
        },
    ));

    reports.push(batch_max(
        "triple_kernel_closed_form",
        tol,
        sample_torus(plan, 3, lat)?,
        |t| {
            let (a, ma) = eval_phi(t[0], t[1], t[2], lat).expect("sampled admissible");
            let (b, mb) = eval_phi_closed(t[0], t[1], t[2], lat).expect("sampled admissible");
            Residual::new((a - b).norm(), ma + mb)
        },
    ));

    // exhaustive sum rule over ordered triples
    {
        let mut triples = Vec::new();
        for j in 1..=n_sites {
            for k in 1..=n_sites {
                for l in 1..=n_sites {
                    if j != k && k != l && j != l {
                        triples.push((j, k, l));
                    }
                }
            }
        }
        let residuals: Vec<Residual> = triples
            .par_iter()
            .map(|&(j, k, l)| {
                phi_sum_rule_residual(j, k, l, n_sites, lat).expect("valid triple")
            })
            .collect();
        let points: Vec<Vec<Complex64>> = triples
            .iter()
            .map(|&(j, k, l)| {
                vec![
                    Complex64::new(j as f64, 0.0),
                    Complex64::new(k as f64, 0.0),
                    Complex64::new(l as f64, 0.0),
                ]
            })
            .collect();
        reports.push(IdentityReport::from_samples(
            "phi_sum_rule",
            tol,
            &points,
            &residuals,
        ));
    }

    {
        let (values, rel_spread) = s_values(n_sites, lat)?;
        reports.push(IdentityReport {
            name: "s_constancy".into(),
            samples: values.len(),
            max_abs: rel_spread * values[0].norm(),
            max_rel: rel_spread,
            worst_point: vec![values[0]],
            tol: 1e-10,
            pass: rel_spread <= 1e-10,
        });
    }

    Ok(reports)
}

/// Near-pole probe for R: relative residuals on rings of radius 1e-3
/// around each candidate pole of the `v` argument, compared with the
/// median relative residual over generic samples. A surviving simple pole
/// would blow the ratio up by many orders of magnitude.
pub fn near_pole_probe_r(lat: &Lattice, seed: u64) -> Result<(f64, f64)> {
    let plan = SamplePlan::new(64, seed);
    let generic = sample_torus(&plan, 4, lat)?;
    let mut rels: Vec<f64> = generic
        .iter()
        .map(|t| {
            let (v, m) = eval_r(t[0], t[1], t[2], t[3], lat).expect("sampled admissible");
            v.norm() / m
        })
        .collect();
    rels.sort_by(f64::total_cmp);
    let median = rels[rels.len() / 2];

    // a comfortably admissible base tuple so that the probe ring around
    // each candidate pole cannot graze other poles
    let base_plan = SamplePlan::new(1, seed ^ 0x9e37).with_margins(0.05, 0.05);
    let base = &sample_torus(&base_plan, 3, lat)?[0];
    let (x, y, z) = (base[0], base[1], base[2]);
    let mut max_rel = 0.0f64;
    for center in [Complex64::default(), -x, -y, -z] {
        for angle_idx in 0..8 {
            let theta = std::f64::consts::PI / 4.0 * angle_idx as f64;
            let v = center + 1e-3 * Complex64::new(theta.cos(), theta.sin());
            let (val, mass) = eval_r(x, y, z, v, lat)?;
            max_rel = max_rel.max(val.norm() / mass);
        }
    }
    Ok((max_rel, median))
}

/// Near-pole probe for A around x = 0 (its leading pole candidates cancel).
pub fn near_pole_probe_a(lat: &Lattice, seed: u64) -> Result<(f64, f64)> {
    let plan = SamplePlan::new(64, seed);
    let generic = sample_torus(&plan, 3, lat)?;
    let mut rels: Vec<f64> = generic
        .iter()
        .map(|t| {
            let (v, m) = eval_a(t[0], t[1], t[2], lat).expect("sampled admissible");
            v.norm() / m
        })
        .collect();
    rels.sort_by(f64::total_cmp);
    let median = rels[rels.len() / 2];

    let base_plan = SamplePlan::new(1, seed ^ 0x9e37).with_margins(0.05, 0.05);
    let base = &sample_torus(&base_plan, 2, lat)?[0];
    let (y, z) = (base[0], base[1]);
    let mut max_rel = 0.0f64;
    for angle_idx in 0..8 {
        let theta = std::f64::consts::PI / 4.0 * angle_idx as f64;
        let x = 1e-3 * Complex64::new(theta.cos(), theta.sin());
        let (val, mass) = eval_a(x, y, z, lat)?;
        max_rel = max_rel.max(val.norm() / mass);
    }
    Ok((max_rel, median))
}
