//! Covariance matrices, symplectic spectra, logarithmic negativity and
//! position cross-correlations of a single path wavepacket.
//!
//! Matrices are ordered `(x1, p1, x2, p2)` and made dimensionless with
//! positions divided by `L` and momenta multiplied by `L / hbar`. Momenta are
//! `hbar k`, so `hbar` cancels and only `L` enters the entries.

use nalgebra::{Matrix2, Matrix4};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::gaussian::ComplexQuadraticForm;
use crate::params::{ScaleConstants, SourceParams};
use crate::propagation::{PathLabel, SlitWavepacket};

/// Tolerance on the uncertainty bound `nu >= 1/2` for physical matrices.
pub const PHYSICALITY_TOLERANCE: f64 = 1e-9;

/// `2 nu_min` within this distance of 1 counts as separable.
pub const SEPARABILITY_TOLERANCE: f64 = 1e-12;

/// Centred covariance matrix of a two-photon Gaussian state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CovarianceMatrix {
    pub entries: Matrix4<f64>,
    /// `(<x1>, <p1>, <x2>, <p2>)` in the same scaling as `entries`.
    pub first_moments: [f64; 4],
    pub scales: ScaleConstants,
}

impl CovarianceMatrix {
    /// Validates symmetry and the uncertainty bound.
    pub fn new(
        entries: Matrix4<f64>,
        first_moments: [f64; 4],
        scales: ScaleConstants,
    ) -> Result<Self> {
        let asym = (entries - entries.transpose()).abs().max();
        if !entries.iter().all(|v| v.is_finite()) || asym > 1e-9 * entries.abs().max() {
            return Err(Error::InvalidCovariance(
                "matrix is not finite and symmetric".into(),
            ));
        }
        let m = Self {
            entries: (entries + entries.transpose()) * 0.5,
            first_moments,
            scales,
        };
        let spec = symplectic_spectrum(&m, false)?;
        if spec.nu_min < 0.5 - PHYSICALITY_TOLERANCE - m.resolution() {
            return Err(Error::InvalidCovariance(format!(
                "symplectic eigenvalue {} violates the uncertainty bound",
                spec.nu_min
            )));
        }
        Ok(m)
    }

    pub fn g_block(&self) -> Matrix2<f64> {
        self.entries.fixed_view::<2, 2>(0, 0).into()
    }

    pub fn h_block(&self) -> Matrix2<f64> {
        self.entries.fixed_view::<2, 2>(2, 2).into()
    }

    pub fn c_block(&self) -> Matrix2<f64> {
        self.entries.fixed_view::<2, 2>(0, 2).into()
    }

    pub fn g(&self) -> f64 {
        self.g_block().determinant().sqrt()
    }

    pub fn h(&self) -> f64 {
        self.h_block().determinant().sqrt()
    }

    /// Standard-form correlations `(c, c')` with `c c' = det C` and
    /// `det M = (g h - c^2)(g h - c'^2)`, ordered so that `c >= |c'|`.
    pub fn c_pair(&self) -> (f64, f64) {
        let gh = self.g() * self.h();
        let prod = self.c_block().determinant();
        let sum_sq = (gh * gh + prod * prod - self.entries.determinant()) / gh;
        let plus = (sum_sq + 2.0 * prod).max(0.0).sqrt();
        let minus = (sum_sq - 2.0 * prod).max(0.0).sqrt();
        (0.5 * (plus + minus), 0.5 * (plus - minus))
    }

    pub fn c_plus(&self) -> f64 {
        self.c_pair().0
    }

    pub fn c_minus(&self) -> f64 {
        self.c_pair().1
    }

    /// Sum of the diagonal products of the blocks. Invariant under local
    /// rescaling; large for strongly chirped states.
    pub fn conditioning(&self) -> f64 {
        let e = &self.entries;
        (e[(0, 0)] * e[(1, 1)]).abs()
            + (e[(2, 2)] * e[(3, 3)]).abs()
            + 2.0 * ((e[(0, 2)] * e[(1, 3)]).abs() + (e[(0, 3)] * e[(1, 2)]).abs())
    }

    /// Rounding scale of the symplectic eigenvalues, about `eps` times
    /// [`Self::conditioning`].
    pub fn resolution(&self) -> f64 {
        100.0 * f64::EPSILON * self.conditioning()
    }

    /// Uncentred second moments `<a b> = cov + <a><b>`.
    pub fn raw_moments(&self) -> Matrix4<f64> {
        let mu = nalgebra::Vector4::from(self.first_moments);
        self.entries + mu * mu.transpose()
    }

    /// `p2 -> -p2`.
    pub fn partial_transpose(&self) -> Self {
        let p = Matrix4::from_diagonal(&nalgebra::Vector4::new(1.0, 1.0, 1.0, -1.0));
        let mut fm = self.first_moments;
        fm[3] = -fm[3];
        Self {
            entries: p * self.entries * p,
            first_moments: fm,
            scales: self.scales,
        }
    }
}

/// Symplectic eigenvalues by every available route.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymplecticSpectrum {
    pub nu_min: f64,
    pub nu_max: f64,
    pub of_partial_transpose: bool,
    /// `nu^2 = (D +- sqrt(D^2 - 4 det M))/2` with `D = det G + det H +- 2 det C`.
    pub block_determinant: (f64, f64),
    /// Roots of `nu^4 - (g^2 + c^2 - 2 s c c') nu^2 + det M = 0` with `s = +1`
    /// for the partial transpose; `None` when the discriminant is negative.
    pub quartic: Option<(f64, f64)>,
}

/// Moments of one coordinate sector: `[<x>, <k>, var x, var k, cov(x, k)]`.
fn sector_moments(width: f64, inv_r: f64, separation: f64, delta: f64, k0: f64) -> [f64; 5] {
    let w2 = width * width;
    let mean_x = 0.5 * separation;
    [
        mean_x,
        delta + 2.0 * k0 * mean_x * inv_r,
        0.25 * w2,
        1.0 / w2 + k0 * k0 * w2 * inv_r * inv_r,
        0.5 * k0 * w2 * inv_r,
    ]
}

/// Covariance from the closed-form moments of a wavepacket.
///
/// For a same-slit path, with `P = Delta + k0 D / R+` the mean wavenumber of
/// the offset sector, the uncentred moments are
///
/// ```text
/// <x1^2>   = (B^2 + Bt^2 + D^2)/4
/// <x1 x2>  = (B^2 - Bt^2 + D^2)/4
/// <p1^2>   = [1/B^2 + 1/Bt^2 + k0^2 (B^2/R+^2 + Bt^2/R-^2) + P^2]/4
/// <p1 p2>  = [1/B^2 - 1/Bt^2 + k0^2 (B^2/R+^2 - Bt^2/R-^2) + P^2]/4
/// <x1 p2>  = [k0 (B^2/R+ - Bt^2/R- + D^2/R+) + D Delta]/4
/// <x1 p1>s = [k0 (B^2/R+ + Bt^2/R- + D^2/R+) + D Delta]/4
/// ```
///
/// Cross paths carry the offset in `q`, which flips the sign of the `D^2`,
/// `P^2` and `D P` terms in the mixed moments. First moments are subtracted.
pub fn covariance_from_wavepacket(
    wp: &SlitWavepacket,
    scales: ScaleConstants,
) -> Result<CovarianceMatrix> {
    let (d_r, delta_r, d_q, delta_q) = if wp.path.same_slit() {
        (wp.separation, wp.delta, 0.0, 0.0)
    } else {
        (0.0, 0.0, wp.separation, wp.delta)
    };
    let [mr, kr_mean, vr, kr, cr] = sector_moments(wp.b, wp.inv_r_plus, d_r, delta_r, wp.k0);
    let [mq, kq_mean, vq, kq, cq] = sector_moments(wp.b_tilde, wp.inv_r_minus, d_q, delta_q, wp.k0);
    let (xx, x1x2) = (vr + vq, vr - vq);
    let (pp, p1p2) = (0.25 * (kr + kq), 0.25 * (kr - kq));
    let (xp, x1p2) = (0.5 * (cr + cq), 0.5 * (cr - cq));
    let centred = Matrix4::new(
        xx, xp, x1x2, x1p2, //
        xp, pp, x1p2, p1p2, //
        x1x2, x1p2, xx, xp, //
        x1p2, p1p2, xp, pp,
    );
    let mean = [
        mr + mq,
        0.5 * (kr_mean + kq_mean),
        mr - mq,
        0.5 * (kr_mean - kq_mean),
    ];
    finish(centred, mean, scales)
}

/// Covariance of an arbitrary (possibly r-q coupled) path amplitude.
pub fn covariance_from_form(
    form: &ComplexQuadraticForm,
    scales: ScaleConstants,
) -> Result<CovarianceMatrix> {
    let m = form.moments()?;
    // (x1, p1, x2, p2) = T (r, q, k_r, k_q)
    let t = Matrix4::new(
        1.0, 1.0, 0.0, 0.0, //
        0.0, 0.0, 0.5, 0.5, //
        1.0, -1.0, 0.0, 0.0, //
        0.0, 0.0, 0.5, -0.5,
    );
    let cov = t * m.cov * t.transpose();
    let mu = t * nalgebra::Vector4::from(m.mean);
    let mean = [mu[0], mu[1], mu[2], mu[3]];
    finish(cov, mean, scales)
}

fn finish(
    centred: Matrix4<f64>,
    mean: [f64; 4],
    scales: ScaleConstants,
) -> Result<CovarianceMatrix> {
    let l = scales.length_scale;
    let scale = nalgebra::Vector4::new(1.0 / l, l, 1.0 / l, l);
    let entries = Matrix4::from_fn(|i, j| centred[(i, j)] * scale[i] * scale[j]);
    let mean = [
        mean[0] * scale[0],
        mean[1] * scale[1],
        mean[2] * scale[2],
        mean[3] * scale[3],
    ];
    CovarianceMatrix::new(entries, mean, scales)
}

fn symplectic_form() -> Matrix4<f64> {
    Matrix4::new(
        0.0, 1.0, 0.0, 0.0, //
        -1.0, 0.0, 0.0, 0.0, //
        0.0, 0.0, 0.0, 1.0, //
        0.0, 0.0, -1.0, 0.0,
    )
}

/// Local squeezing that equalises position and momentum variances of each
/// mode; symplectic eigenvalues are unchanged and the result no longer
/// depends on the length scale.
fn balanced(m: &Matrix4<f64>) -> Matrix4<f64> {
    let a1 = (m[(1, 1)] / m[(0, 0)]).powf(0.25);
    let a2 = (m[(3, 3)] / m[(2, 2)]).powf(0.25);
    let s = nalgebra::Vector4::new(a1, 1.0 / a1, a2, 1.0 / a2);
    Matrix4::from_fn(|i, j| m[(i, j)] * s[i] * s[j])
}

pub fn symplectic_spectrum(
    m: &CovarianceMatrix,
    partial_transpose: bool,
) -> Result<SymplecticSpectrum> {
    let mat = if partial_transpose {
        m.partial_transpose()
    } else {
        *m
    };
    let bal = balanced(&mat.entries);
    let mut nus: Vec<f64> = (symplectic_form() * bal)
        .complex_eigenvalues()
        .iter()
        .map(|z| z.norm())
        .collect();
    nus.sort_by(|a, b| a.total_cmp(b));
    let nu_min = 0.5 * (nus[0] + nus[1]);
    let nu_max = 0.5 * (nus[2] + nus[3]);

    let det_m = bal.determinant();
    let det_c = m.c_block().determinant();
    let sign = if partial_transpose { -1.0 } else { 1.0 };
    let delta = m.g_block().determinant() + m.h_block().determinant() + sign * 2.0 * det_c;
    let disc = delta * delta - 4.0 * det_m;
    // Pure states sit at disc = 0.
    let tol = 1e-9 * delta * delta + 4.0 * delta.abs() * m.resolution();
    if disc < -tol || !disc.is_finite() {
        return Err(Error::InvalidCovariance(format!(
            "negative symplectic discriminant {disc}"
        )));
    }
    let root = disc.max(0.0).sqrt();
    let big = 0.5 * (delta + root);
    let block_determinant = ((det_m / big).sqrt(), big.sqrt());

    let g = m.g();
    let (c, cp) = m.c_pair();
    let b = g * g + c * c + sign * 2.0 * c * cp;
    let qdisc = b * b - 4.0 * det_m;
    let quartic = (qdisc >= 0.0 && b > 0.0).then(|| {
        let hi = 0.5 * (b + qdisc.sqrt());
        ((det_m / hi).sqrt(), hi.sqrt())
    });

    Ok(SymplecticSpectrum {
        nu_min,
        nu_max,
        of_partial_transpose: partial_transpose,
        block_determinant,
        quartic,
    })
}

/// `max(0, -ln(2 nu_min))` of the partial transpose.
pub fn log_negativity(m: &CovarianceMatrix) -> Result<f64> {
    let nu = symplectic_spectrum(m, true)?.nu_min;
    let x = 2.0 * nu;
    Ok(
        if x >= 1.0 - SEPARABILITY_TOLERANCE - 2.0 * m.resolution() {
            0.0
        } else {
            -x.ln()
        },
    )
}

/// Result of the closed-form negativity expression, with the numeric route
/// for comparison.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosedFormNegativity {
    /// Real value when the expression yields one.
    pub value: Option<f64>,
    /// The complex logarithm as evaluated.
    pub raw: Complex64,
    /// Authoritative value from the covariance matrix.
    pub numeric: f64,
    pub agrees: bool,
}

/// Evaluates the literal closed-form negativity expression for a same-slit
/// wavepacket, with lengths in metres and unit light speed:
///
/// `E = ln[ sqrt(2) i B Bt R+ R- / sqrt(sqrt(-A1 A2) + A3) ]`.
///
/// The expression is reported as a diagnostic next to [`log_negativity`].
pub fn log_negativity_closed_form(
    wp: &SlitWavepacket,
    scales: ScaleConstants,
) -> Result<ClosedFormNegativity> {
    let numeric = log_negativity(&covariance_from_wavepacket(wp, scales)?)?;
    let c = Complex64::from;
    let (b, bt, rp, rm) = (wp.b, wp.b_tilde, wp.r_plus(), wp.r_minus());
    let (d, dl, k0) = (wp.separation, wp.delta, wp.k0);
    let a1 =
        ((rm * dl - d * k0) * rp + d * rm * k0).powi(2) * bt.powi(4) + d * d * rp * rp * rm * rm;
    let a2 = rp * rp * rm * rm + k0 * k0 * (rp - rm).powi(2) * bt.powi(4);
    let a3 = 2.0 * bt * bt * rp * rp * rm * rm;
    let a4_over_dl2 = 0.5 * a3;
    let a4 = a4_over_dl2 * dl * dl;
    let a5 = -2.0 * k0 * k0 * (rp - rm).powi(2) * bt.powi(4) - 2.0 * rp * rp * rm * rm;
    let den = rp * dl + k0 * d;
    let bracket = if den == 0.0 {
        rm
    } else {
        rm - k0 * rp * d / den
    };
    let a6 = (-2.0 * dl * dl * rm * rm - 4.0 * k0 * d * rp * dl - 2.0 * d * d * k0 * k0)
        * bracket.powi(2)
        * bt.powi(4)
        - 2.0 * d * d * rp * rp * rm * rm;
    let tail = a4_over_dl2 * (bt * bt + d * d);
    let big_a = |s: f64| {
        let num = s * a1 + a3;
        let den = s * a2 + a4;
        (b * b + num / (2.0 * den)).powi(2) * den - num * num / (4.0 * den) + tail
    };
    let (big_a1, big_a2) = (big_a(1.0), big_a(-1.0));
    let big_a3 = 4.0 * a5 * (b * b + a6 / (2.0 * a5)).powi(2) - (a6 * a6 / a5 + 8.0 * a4_over_dl2);
    let inner = (c(-big_a1 * big_a2).sqrt() + c(big_a3)).sqrt();
    let raw = (Complex64::new(0.0, 2f64.sqrt() * b * bt * rp * rm) / inner).ln();
    let applicable = big_a1 * big_a2 <= 0.0 && raw.re.is_finite() && raw.im.abs() < 1e-9;
    let value = applicable.then_some(raw.re);
    Ok(ClosedFormNegativity {
        value,
        raw,
        numeric,
        agrees: value.is_some_and(|v| (v - numeric).abs() <= 1e-6),
    })
}

/// Which state a correlation refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CorrelationSubject {
    Path(PathLabel),
    Free,
}

/// Position cross-correlations of a path.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelationReport {
    /// `<x1 x2> / sqrt(<x1^2><x2^2>)` from uncentred moments, equal to the
    /// Pearson coefficient of the mirror-symmetric pair of paths.
    pub rho: f64,
    /// Pearson coefficient of the single path, `(B^2 - Bt^2)/(B^2 + Bt^2)`.
    pub rho_centered: f64,
    /// `(B - Bt +- |D|)/(B + Bt + |D|)`.
    pub rho_first_power: f64,
    pub path: CorrelationSubject,
}

fn ratio(num: f64, a: f64, b: f64) -> Result<f64> {
    if a <= 0.0 || b <= 0.0 {
        return Err(Error::UndefinedCorrelation);
    }
    Ok((num / (a * b).sqrt()).clamp(-1.0, 1.0))
}

pub fn cross_correlation(wp: &SlitWavepacket) -> Result<CorrelationReport> {
    let m = covariance_from_wavepacket(wp, ScaleConstants::default())?;
    let raw = m.raw_moments();
    let cov = m.entries;
    let sign = if wp.path.same_slit() { 1.0 } else { -1.0 };
    let d = wp.separation.abs();
    Ok(CorrelationReport {
        rho: ratio(raw[(0, 2)], raw[(0, 0)], raw[(2, 2)])?,
        rho_centered: ratio(cov[(0, 2)], cov[(0, 0)], cov[(2, 2)])?,
        rho_first_power: (wp.b - wp.b_tilde + sign * d) / (wp.b + wp.b_tilde + d),
        path: CorrelationSubject::Path(wp.path),
    })
}

/// Correlation of the unobstructed biphoton after a total flight `z_total`.
pub fn free_cross_correlation(params: &SourceParams, z_total: f64) -> f64 {
    let (o2, s2) = (params.omega_cap().powi(2), params.sigma().powi(2));
    let u = (z_total / (params.k0() * params.sigma() * params.omega_cap())).powi(2);
    (o2 - s2) / (o2 + s2) * (1.0 - u) / (1.0 + u)
}
