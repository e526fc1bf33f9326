//! Weierstrass functions σ, ζ, ℘, ℘′ on a rectangular period lattice.
//!
//! The lattice is spanned by a real period `real_period` and a purely
//! imaginary period `i·kappa`. All evaluators run on q-series in the basis
//! whose nome is smallest: when `kappa < real_period` the two periods swap
//! roles, which keeps `|q| ≤ e^{-π} ≈ 0.0432` and the series short for any
//! aspect ratio. A slow truncated lattice sum is provided as an independent
//! cross-check oracle.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Minimum admissible distance to a lattice point for ℘, ℘′, ζ and f.
pub const DEFAULT_POLE_MARGIN: f64 = 1e-6;

/// Series terms are dropped once they fall below this fraction of the
/// running magnitude.
const SERIES_CUTOFF: f64 = 1e-17;
const SERIES_CAP: usize = 48;

/// Taylor coefficients of `1/sin²v − 1/v²` in powers of `v²`, used to
/// evaluate ℘ minus its pole without catastrophic cancellation. Values
/// generated at higher precision and rounded here.
#[allow(clippy::excessive_precision)]
const CSC2_KERNEL_COEFFS: [f64; 21] = [
    3.33333333333333314830e-01,
    6.66666666666666657415e-02,
    1.05820105820105814232e-02,
    1.48148148148148140792e-03,
    1.92400192400192390991e-04,
    2.38084470888703707227e-05,
    2.85037322074359127880e-06,
    3.33219131849695211113e-07,
    3.82633390785752847592e-08,
    4.33297872887251476582e-09,
    4.85235084579055123503e-10,
    5.38469256855972339589e-11,
    5.93025435005841376083e-12,
    6.48929213999308069491e-13,
    7.06206666846317680197e-14,
    7.64884329400334372332e-15,
    8.24989201450286721997e-16,
    8.86548752509222136066e-17,
    9.49590929004572668708e-18,
    1.01414416194535360345e-18,
    1.08023737481030581064e-19,
];

/// Rectangular period lattice with precomputed evaluation data.
///
/// Immutable after construction; evaluators are pure functions of
/// `(z, &Lattice)` and are safe to share across threads.
#[derive(Debug, Clone)]
pub struct Lattice {
    /// Length of the real period.
    pub real_period: f64,
    /// Length of the imaginary period (the full period is `i·kappa`).
    pub kappa: f64,
    /// Half-period ratio of the working basis (purely imaginary).
    pub tau: Complex64,
    /// Nome `e^{iπτ}` of the working basis.
    pub nome_q: Complex64,
    /// Whether the two periods were exchanged to shrink the nome.
    pub swapped: bool,
    /// Lattice invariant g₂ (real on rectangular lattices).
    pub g2: f64,
    /// Lattice invariant g₃ (real on rectangular lattices).
    pub g3: f64,
    /// ζ at the real half-period; enters the quasi-periodicity laws.
    pub eta1: Complex64,
    /// Coefficient of the x² term in the expansion of ℘ at 0, `g2/20`.
    pub laurent_a: f64,
    /// ζ at the imaginary half-period (internal, for reduction and the
    /// Legendre cross-check).
    eta2: Complex64,
    /// Working half-period (real or purely imaginary depending on `swapped`).
    half_w: Complex64,
    /// Real nome of the working basis.
    q: f64,
    /// ζ at the working half-period.
    eta_w: Complex64,
}

impl Lattice {
    /// Builds the lattice `Z·real_period + Z·i·kappa` and its derived data.
    pub fn new(real_period: f64, kappa: f64) -> Result<Self> {
        if !real_period.is_finite() || !kappa.is_finite() || real_period <= 0.0 || kappa <= 0.0 {
            return Err(Error::NonPositivePeriod { real_period, kappa });
        }
        let swapped = kappa < real_period;
        let (half_w, tau) = if swapped {
            (
                Complex64::new(0.0, kappa / 2.0),
                Complex64::new(0.0, real_period / kappa),
            )
        } else {
            (
                Complex64::new(real_period / 2.0, 0.0),
                Complex64::new(0.0, kappa / real_period),
            )
        };
        let q = (-PI * tau.im).exp();
        let nome_q = Complex64::new(q, 0.0);

        let eta_w = Complex64::new(PI * PI * eisenstein_e2(q) / 12.0, 0.0) / half_w;

        // Invariants from the theta constants of the working basis.
        let (th2, th3, th4) = theta_constants(q);
        let c = (Complex64::new(PI, 0.0) / (2.0 * half_w)).powi(2) / 3.0;
        let e1 = c * (th3.powi(4) + th4.powi(4));
        let e2 = c * (th2.powi(4) - th4.powi(4));
        let e3 = -c * (th2.powi(4) + th3.powi(4));
        let g2c = 2.0 * (e1 * e1 + e2 * e2 + e3 * e3);
        let g3c = 4.0 * e1 * e2 * e3;
        debug_assert!(g2c.im.abs() <= 1e-12 * g2c.re.abs().max(1.0));
        debug_assert!(g3c.im.abs() <= 1e-12 * g3c.re.abs().max(1.0));
        let g2 = g2c.re;
        let g3 = g3c.re;

        let mut lat = Lattice {
            real_period,
            kappa,
            tau,
            nome_q,
            swapped,
            g2,
            g3,
            eta1: Complex64::default(),
            laurent_a: g2 / 20.0,
            eta2: Complex64::default(),
            half_w,
            q,
            eta_w,
        };
        // The non-basis half-period eta comes from a direct series
        // evaluation, so the Legendre relation stays a genuine cross-check
        // between two independent code paths.
        if swapped {
            lat.eta2 = eta_w;
            lat.eta1 = lat.zeta_series(Complex64::new(real_period / 2.0, 0.0));
        } else {
            lat.eta1 = eta_w;
            lat.eta2 = lat.zeta_series(Complex64::new(0.0, kappa / 2.0));
        }
        Ok(lat)
    }

    /// Relative defect of the Legendre relation
    /// `eta1·(i·kappa) − eta2·real_period = iπ`.
    pub fn legendre_residual(&self) -> f64 {
        let lhs = self.eta1 * Complex64::new(0.0, self.kappa) - self.eta2 * self.real_period;
        (lhs - Complex64::new(0.0, PI)).norm() / PI
    }

    /// ζ at the imaginary half-period (needed by tests of the reduction laws).
    #[cfg(test)]
    pub(crate) fn eta2(&self) -> Complex64 {
        self.eta2
    }

    fn v_of(&self, z: Complex64) -> Complex64 {
        Complex64::new(PI, 0.0) * z / (2.0 * self.half_w)
    }

    /// Splits `z = z0 + m·real_period + n·i·kappa` with `z0` in the centered
    /// fundamental cell.
    fn reduce_centered(&self, z: Complex64) -> (Complex64, i64, i64) {
        let m = (z.re / self.real_period).round();
        let n = (z.im / self.kappa).round();
        let z0 = Complex64::new(z.re - m * self.real_period, z.im - n * self.kappa);
        (z0, m as i64, n as i64)
    }

    /// ζ via the cotangent q-series; valid on the centered cell and, with a
    /// little slack, at the half-periods themselves.
    ///
    /// Truncation in all the Fourier loops below uses the monotone
    /// coefficient envelope times `e^{2n|Im v|}` (a bound for the
    /// trigonometric factor), never the computed term itself: sin/cos can
    /// vanish accidentally at rational fractions of the period, which must
    /// not cut the series short.
    fn zeta_series(&self, z: Complex64) -> Complex64 {
        let v = self.v_of(z);
        let q2 = self.q * self.q;
        let growth = (2.0 * v.im.abs()).exp();
        let mut sum = Complex64::default();
        let mut q2n = 1.0;
        let mut envelope = 1.0;
        let mut top = 0.0f64;
        for n in 1..=SERIES_CAP {
            q2n *= q2;
            envelope *= q2 * growth;
            sum += (q2n / (1.0 - q2n)) * (2.0 * n as f64 * v).sin();
            top = top.max(envelope);
            if envelope <= SERIES_CUTOFF * top.max(sum.norm()) {
                break;
            }
        }
        self.eta_w * z / self.half_w
            + Complex64::new(PI, 0.0) / (2.0 * self.half_w) * cot(v)
            + Complex64::new(2.0 * PI, 0.0) / self.half_w * sum
    }

    fn wp_series(&self, z0: Complex64) -> Complex64 {
        let v = self.v_of(z0);
        let s = self.wp_fourier(v);
        -self.eta_w / self.half_w
            + (Complex64::new(PI, 0.0) / (2.0 * self.half_w)).powi(2) / (v.sin() * v.sin())
            - s
    }

    /// ℘ minus its double pole at the nearest lattice point, evaluated
    /// without cancellation via the `1/sin²v − 1/v²` kernel.
    fn wp_series_regularized(&self, z0: Complex64) -> Complex64 {
        let v = self.v_of(z0);
        let s = self.wp_fourier(v);
        -self.eta_w / self.half_w
            + (Complex64::new(PI, 0.0) / (2.0 * self.half_w)).powi(2) * csc2_minus_inv_sq(v)
            - s
    }

    /// The Fourier tail `(2π²/ω²)·Σ n q^{2n}/(1−q^{2n}) cos 2nv` shared by
    /// both ℘ paths.
    fn wp_fourier(&self, v: Complex64) -> Complex64 {
        let q2 = self.q * self.q;
        let growth = (2.0 * v.im.abs()).exp();
        let mut sum = Complex64::default();
        let mut q2n = 1.0;
        let mut envelope = 1.0;
        let mut top = 0.0f64;
        for n in 1..=SERIES_CAP {
            let nn = n as f64;
            q2n *= q2;
            envelope *= q2 * growth;
            sum += (nn * q2n / (1.0 - q2n)) * (2.0 * nn * v).cos();
            top = top.max(nn * envelope);
            if nn * envelope <= SERIES_CUTOFF * top.max(sum.norm()) {
                break;
            }
        }
        2.0 * Complex64::new(PI * PI, 0.0) / (self.half_w * self.half_w) * sum
    }

    fn wp_prime_series(&self, z0: Complex64) -> Complex64 {
        let v = self.v_of(z0);
        let q2 = self.q * self.q;
        let growth = (2.0 * v.im.abs()).exp();
        let mut sum = Complex64::default();
        let mut q2n = 1.0;
        let mut envelope = 1.0;
        let mut top = 0.0f64;
        for n in 1..=SERIES_CAP {
            let nn = n as f64;
            q2n *= q2;
            envelope *= q2 * growth;
            sum += (nn * nn * q2n / (1.0 - q2n)) * (2.0 * nn * v).sin();
            top = top.max(nn * nn * envelope);
            if nn * nn * envelope <= SERIES_CUTOFF * top.max(sum.norm()) {
                break;
            }
        }
        let sv = v.sin();
        -2.0 * (Complex64::new(PI, 0.0) / (2.0 * self.half_w)).powi(3) * v.cos() / (sv * sv * sv)
            + 2.0 * Complex64::new(PI.powi(3), 0.0) / self.half_w.powi(3) * sum
    }

    fn sigma_series(&self, z0: Complex64) -> Complex64 {
        let v = self.v_of(z0);
        let q2 = self.q * self.q;
        let cos2v = (2.0 * v).cos();
        let cosh2g = (2.0 * v.im.abs()).exp();
        let mut prod = Complex64::new(1.0, 0.0);
        let mut q2n = 1.0;
        for _ in 1..=SERIES_CAP {
            q2n *= q2;
            let denom = 1.0 - q2n;
            let factor = (1.0 - 2.0 * q2n * cos2v + q2n * q2n) / (denom * denom);
            prod *= factor;
            if q2n * (2.0 * cosh2g + q2n) <= SERIES_CUTOFF {
                break;
            }
        }
        2.0 * self.half_w / PI
            * (self.eta_w * z0 * z0 / (2.0 * self.half_w)).exp()
            * v.sin()
            * prod
    }
}

/// Constructs a [`Lattice`]; alias for [`Lattice::new`].
pub fn make_lattice(real_period: f64, kappa: f64) -> Result<Lattice> {
    Lattice::new(real_period, kappa)
}

fn cot(v: Complex64) -> Complex64 {
    v.cos() / v.sin()
}

/// `1/sin²v − 1/v²`, stable down to `v = 0` where it equals `1/3`.
fn csc2_minus_inv_sq(v: Complex64) -> Complex64 {
    if v.norm() < 0.9 {
        let v2 = v * v;
        let mut sum = Complex64::default();
        let mut p = Complex64::new(1.0, 0.0);
        for &c in CSC2_KERNEL_COEFFS.iter() {
            sum += c * p;
            p *= v2;
        }
        sum
    } else {
        let sv = v.sin();
        1.0 / (sv * sv) - 1.0 / (v * v)
    }
}

/// E₂ Eisenstein series `1 − 24 Σ n q^{2n}/(1−q^{2n})` of the working nome.
fn eisenstein_e2(q: f64) -> f64 {
    let q2 = q * q;
    let mut sum = 0.0;
    let mut q2n = 1.0;
    for n in 1..=SERIES_CAP {
        q2n *= q2;
        let term = n as f64 * q2n / (1.0 - q2n);
        sum += term;
        if term <= SERIES_CUTOFF * sum.max(1.0) {
            break;
        }
    }
    1.0 - 24.0 * sum
}

/// Theta constants (θ₂, θ₃, θ₄) at argument 0 for a real nome.
fn theta_constants(q: f64) -> (f64, f64, f64) {
    let mut th2 = 0.0;
    for n in 0..SERIES_CAP {
        let term = q.powi((n * (n + 1)) as i32);
        th2 += term;
        if term <= SERIES_CUTOFF * th2 {
            break;
        }
    }
    th2 *= 2.0 * q.powf(0.25);
    let mut th3 = 1.0;
    let mut th4 = 1.0;
    for n in 1..SERIES_CAP {
        let term = q.powi((n * n) as i32);
        th3 += 2.0 * term;
        th4 += 2.0 * if n % 2 == 1 { -term } else { term };
        if term <= SERIES_CUTOFF {
            break;
        }
    }
    (th2, th3, th4)
}

fn ensure_finite(z: Complex64) -> Result<()> {
    if z.re.is_finite() && z.im.is_finite() {
        Ok(())
    } else {
        Err(Error::NonFinitePoint { z })
    }
}

fn ensure_off_lattice(z: Complex64, lat: &Lattice, arg: &'static str) -> Result<()> {
    let d = distance_to_lattice(z, lat);
    if d <= DEFAULT_POLE_MARGIN {
        Err(Error::PoleProximity {
            arg,
            z,
            distance: d,
            margin: DEFAULT_POLE_MARGIN,
        })
    } else {
        Ok(())
    }
}

/// Representative of `z` in the fundamental rectangle `[0, N) × [0, κ)`.
pub fn reduce_to_cell(z: Complex64, lat: &Lattice) -> Complex64 {
    let re = z.re - lat.real_period * (z.re / lat.real_period).floor();
    let im = z.im - lat.kappa * (z.im / lat.kappa).floor();
    Complex64::new(re, im)
}

/// Euclidean distance from `z` to the nearest lattice point.
pub fn distance_to_lattice(z: Complex64, lat: &Lattice) -> f64 {
    let re = z.re - lat.real_period * (z.re / lat.real_period).round();
    let im = z.im - lat.kappa * (z.im / lat.kappa).round();
    re.hypot(im)
}

/// Weierstrass ℘(z).
pub fn wp(z: Complex64, lat: &Lattice) -> Result<Complex64> {
    ensure_finite(z)?;
    ensure_off_lattice(z, lat, "z")?;
    let (z0, _, _) = lat.reduce_centered(z);
    Ok(lat.wp_series(z0))
}

/// Weierstrass ℘′(z).
pub fn wp_prime(z: Complex64, lat: &Lattice) -> Result<Complex64> {
    ensure_finite(z)?;
    ensure_off_lattice(z, lat, "z")?;
    let (z0, _, _) = lat.reduce_centered(z);
    Ok(lat.wp_prime_series(z0))
}

/// ℘″(z) through the quadratic relation `℘″ = 6℘² − g₂/2`.
pub fn wp_double_prime(z: Complex64, lat: &Lattice) -> Result<Complex64> {
    let p = wp(z, lat)?;
    Ok(6.0 * p * p - lat.g2 / 2.0)
}

/// ℘(z) minus its double pole `1/(z−Ω)²` at the nearest lattice point Ω.
///
/// Finite on the whole plane (equals `−η_w/ω_w + (π/2ω_w)²/3 − …` at lattice
/// points); the subtraction is done inside the series so no precision is
/// lost close to a pole.
pub fn wp_regularized(z: Complex64, lat: &Lattice) -> Result<Complex64> {
    ensure_finite(z)?;
    let (z0, _, _) = lat.reduce_centered(z);
    let v = lat.v_of(z0);
    if v.norm() < 0.9 {
        Ok(lat.wp_series_regularized(z0))
    } else {
        Ok(lat.wp_series(z0) - 1.0 / (z0 * z0))
    }
}

/// Weierstrass ζ(z) (quasi-periodic: picks up `2·eta1` per real period and
/// `2·eta2` per imaginary period).
pub fn zeta_w(z: Complex64, lat: &Lattice) -> Result<Complex64> {
    ensure_finite(z)?;
    ensure_off_lattice(z, lat, "z")?;
    let (z0, m, n) = lat.reduce_centered(z);
    Ok(lat.zeta_series(z0) + 2.0 * m as f64 * lat.eta1 + 2.0 * n as f64 * lat.eta2)
}

/// Weierstrass σ(z). Entire; returns exactly 0 on lattice points.
pub fn sigma(z: Complex64, lat: &Lattice) -> Result<Complex64> {
    ensure_finite(z)?;
    let (z0, m, n) = lat.reduce_centered(z);
    let base = lat.sigma_series(z0);
    if m == 0 && n == 0 {
        return Ok(base);
    }
    let eta_shift = 2.0 * m as f64 * lat.eta1 + 2.0 * n as f64 * lat.eta2;
    let w_shift = Complex64::new(
        m as f64 * lat.real_period / 2.0,
        n as f64 * lat.kappa / 2.0,
    );
    let sign = if (m + n + m * n).rem_euclid(2) == 1 {
        -1.0
    } else {
        1.0
    };
    Ok(sign * base * (eta_shift * (z0 + w_shift)).exp())
}

/// The spectral kernel `f(x) = σ(x+α)/(σ(x)σ(α)) · e^{−x·ζ(α)}`.
pub fn f_spectral(x: Complex64, alpha: Complex64, lat: &Lattice) -> Result<Complex64> {
    ensure_finite(x)?;
    ensure_finite(alpha)?;
    ensure_off_lattice(x, lat, "x")?;
    let d = distance_to_lattice(alpha, lat);
    if d <= DEFAULT_POLE_MARGIN {
        return Err(Error::SpectralParameterOnLattice {
            z: alpha,
            distance: d,
        });
    }
    let num = sigma(x + alpha, lat)?;
    let den = sigma(x, lat)? * sigma(alpha, lat)?;
    Ok(num / den * (-x * zeta_w(alpha, lat)?).exp())
}

/// Truncated symmetric lattice sum `1/z² + Σ′ [(z−Ω)⁻² − Ω⁻²]` over
/// `|m|,|n| ≤ index_bound`; the slow independent oracle for ℘.
pub fn wp_lattice_sum_oracle(z: Complex64, lat: &Lattice, index_bound: usize) -> Result<Complex64> {
    assert!(index_bound >= 50, "oracle needs index_bound >= 50");
    ensure_finite(z)?;
    ensure_off_lattice(z, lat, "z")?;
    let b = index_bound as i64;
    let mut sum = 1.0 / (z * z);
    for m in -b..=b {
        for n in -b..=b {
            if m == 0 && n == 0 {
                continue;
            }
            let w = Complex64::new(m as f64 * lat.real_period, n as f64 * lat.kappa);
            let d = z - w;
            sum += 1.0 / (d * d) - 1.0 / (w * w);
        }
    }
    Ok(sum)
}

/// Truncated Eisenstein sums `g2 = 60 Σ′ Ω⁻⁴`, `g3 = 140 Σ′ Ω⁻⁶`; the slow
/// independent oracle for the lattice invariants.
pub fn eisenstein_invariants_oracle(lat: &Lattice, index_bound: usize) -> (f64, f64) {
    assert!(index_bound >= 50, "oracle needs index_bound >= 50");
    let b = index_bound as i64;
    let mut s4 = Complex64::default();
    let mut s6 = Complex64::default();
    for m in -b..=b {
        for n in -b..=b {
            if m == 0 && n == 0 {
                continue;
            }
            let w = Complex64::new(m as f64 * lat.real_period, n as f64 * lat.kappa);
            let inv2 = 1.0 / (w * w);
            let inv4 = inv2 * inv2;
            s4 += inv4;
            s6 += inv4 * inv2;
        }
    }
    (60.0 * s4.re, 140.0 * s6.re)
}

/// The `κ → ∞` degeneration of ℘ on the real axis:
/// `(π/N)² (1/sin²(πx/N) − 1/3)`.
pub fn trig_limit_wp(x: f64, real_period: f64) -> f64 {
    let s = (PI * x / real_period).sin();
    (PI / real_period).powi(2) * (1.0 / (s * s) - 1.0 / 3.0)
}
