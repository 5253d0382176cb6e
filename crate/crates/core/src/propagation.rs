//! Free flight and slit passage of the biphoton wavepacket.
//!
//! Each of the four slit paths produces a Gaussian in `(r, q)`:
//!
//! ```text
//! Psi(r, q) = exp(-(r - Dr/2)^2/B^2 - (q - Dq/2)^2/Bt^2)
//!           * exp(i k0 r^2/R+ + i k0 q^2/R- + i Delta x + i theta + i zeta) / sqrt(pi B Bt)
//! ```
//!
//! where the offset `D` and the linear phase `Delta` sit in `r` for paths
//! through the same slit and in `q` for paths through different slits.
//! Curvatures are stored as inverse radii, which stay finite at zero distance.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::gaussian::ComplexQuadraticForm;
use crate::params::{SlitGeometry, SourceParams};

/// Spreads, inverse curvatures and Gouy phase of the unobstructed biphoton.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FreeState {
    pub w: f64,
    pub w_tilde: f64,
    pub inv_r_plus: f64,
    pub inv_r_minus: f64,
    pub zeta_free: f64,
}

impl FreeState {
    pub fn r_plus(&self) -> f64 {
        1.0 / self.inv_r_plus
    }

    pub fn r_minus(&self) -> f64 {
        1.0 / self.inv_r_minus
    }
}

fn inverse_curvature(z: f64, z0: f64) -> f64 {
    z / (z * z + z0 * z0)
}

pub fn free_state(params: &SourceParams, z: f64) -> Result<FreeState> {
    if !(z >= 0.0 && z.is_finite()) {
        return Err(Error::Domain {
            name: "z",
            requirement: "finite and non-negative",
            value: z,
        });
    }
    let (zp, zm) = (params.z0_plus(), params.z0_minus());
    Ok(FreeState {
        w: params.omega_cap() * (1.0 + (z / zp).powi(2)).sqrt(),
        w_tilde: params.sigma() * (1.0 + (z / zm).powi(2)).sqrt(),
        inv_r_plus: inverse_curvature(z, zp),
        inv_r_minus: inverse_curvature(z, zm),
        zeta_free: -0.5 * ((z / zp).atan() + (z / zm).atan()),
    })
}

/// Which slit each photon crosses: `U` is slit 1, `D` is slit 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PathLabel {
    UU,
    DD,
    UD,
    DU,
}

impl PathLabel {
    pub const ALL: [PathLabel; 4] = [PathLabel::UU, PathLabel::DD, PathLabel::UD, PathLabel::DU];

    /// Slit index (1 or 2) crossed by photon 1 and photon 2.
    pub fn slits(self) -> (u8, u8) {
        match self {
            PathLabel::UU => (1, 1),
            PathLabel::DD => (2, 2),
            PathLabel::UD => (1, 2),
            PathLabel::DU => (2, 1),
        }
    }

    /// Both photons through the same slit.
    pub fn same_slit(self) -> bool {
        matches!(self, PathLabel::UU | PathLabel::DD)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            PathLabel::UU => "uu",
            PathLabel::DD => "dd",
            PathLabel::UD => "ud",
            PathLabel::DU => "du",
        }
    }
}

impl fmt::Display for PathLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PathLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "uu" => Ok(PathLabel::UU),
            "dd" => Ok(PathLabel::DD),
            "ud" => Ok(PathLabel::UD),
            "du" => Ok(PathLabel::DU),
            _ => Err(Error::Config(format!("unknown path {s:?}"))),
        }
    }
}

/// Centre and width of slit 1 or 2.
pub fn slit(geom: &SlitGeometry, index: u8) -> (f64, f64) {
    if index == 1 {
        (-0.5 * geom.d, geom.beta1)
    } else {
        (0.5 * geom.d, geom.beta2)
    }
}

/// Closed-form parameters of one Gaussian path through the slits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlitWavepacket {
    pub path: PathLabel,
    pub b: f64,
    pub b_tilde: f64,
    pub inv_r_plus: f64,
    pub inv_r_minus: f64,
    /// Signed separation `D`: the centre of `|Psi|^2` sits at `D/2` in `r`
    /// (same-slit paths) or in `q` (cross paths).
    pub separation: f64,
    /// Linear phase coefficient multiplying `r` or `q`.
    pub delta: f64,
    pub theta: f64,
    pub zeta_slit: f64,
    pub beta_used: f64,
    pub k0: f64,
}

/// One coordinate sector after the slits.
#[derive(Debug, Clone, Copy)]
struct Sector {
    width_sq: f64,
    inv_r: f64,
    separation: f64,
    delta: f64,
    theta: f64,
    gouy_arg: f64,
}

/// Closed form of free flight over `z`, a Gaussian window of width `beta`
/// centred at `center`, and free flight over `z_tau`, for a sector whose
/// initial width is `w0`.
fn sector(k0: f64, w0: f64, z: f64, z_tau: f64, beta: f64, center: f64) -> Sector {
    let z0 = k0 * w0 * w0;
    let w_sq = w0 * w0 * (1.0 + (z / z0).powi(2));
    let inv_r = inverse_curvature(z, z0);
    let ib2 = 1.0 / (beta * beta);
    let x = ib2 + 1.0 / w_sq;
    let e = 1.0 + z_tau * inv_r;
    let den = x * x * z_tau * z_tau + k0 * k0 * e * e;
    let width_sq = den / (k0 * k0 * x);
    let gouy_arg = f64::atan2(
        z + z_tau * (1.0 + w0 * w0 * ib2),
        z0 * (1.0 - z * z_tau * w0 * w0 * ib2 / (z0 * z0)),
    );
    Sector {
        width_sq,
        inv_r: (x * x * z_tau + k0 * k0 * e * inv_r) / den,
        separation: 2.0 * center * e * ib2 / x,
        delta: -2.0 * center * z_tau * ib2 / (k0 * width_sq),
        theta: center * center * ib2 * ib2 * z_tau * k0 * e / den,
        gouy_arg,
    }
}

/// Closed-form wavepacket for one path.
///
/// Paths through different slits are only available in closed form when the
/// slit widths are equal; otherwise `Error::CoupledPath` is returned and
/// [`path_form`] gives the exact result.
pub fn slit_wavepacket(
    params: &SourceParams,
    geom: &SlitGeometry,
    path: PathLabel,
) -> Result<SlitWavepacket> {
    geom.validate()?;
    let (s1, s2) = path.slits();
    let (c1, b1) = slit(geom, s1);
    let (c2, b2) = slit(geom, s2);
    if b1 != b2 {
        return Err(Error::CoupledPath(path));
    }
    let k0 = params.k0();
    let (rc, qc) = (0.5 * (c1 + c2), 0.5 * (c1 - c2));
    let plus = sector(k0, params.omega_cap(), geom.z, geom.z_tau, b1, rc);
    let minus = sector(k0, params.sigma(), geom.z, geom.z_tau, b1, qc);
    let offset = if path.same_slit() { plus } else { minus };
    Ok(SlitWavepacket {
        path,
        b: plus.width_sq.sqrt(),
        b_tilde: minus.width_sq.sqrt(),
        inv_r_plus: plus.inv_r,
        inv_r_minus: minus.inv_r,
        separation: offset.separation,
        delta: offset.delta,
        theta: plus.theta + minus.theta,
        zeta_slit: -0.5 * (plus.gouy_arg + minus.gouy_arg),
        beta_used: b1,
        k0,
    })
}

impl SlitWavepacket {
    pub fn r_plus(&self) -> f64 {
        1.0 / self.inv_r_plus
    }

    pub fn r_minus(&self) -> f64 {
        1.0 / self.inv_r_minus
    }

    /// Centre of `|Psi|^2` in `(r, q)`.
    pub fn center(&self) -> (f64, f64) {
        if self.path.same_slit() {
            (0.5 * self.separation, 0.0)
        } else {
            (0.0, 0.5 * self.separation)
        }
    }

    /// Normalised amplitude at `(r, q)`.
    pub fn amplitude(&self, r: f64, q: f64) -> Complex64 {
        let (rc, qc) = self.center();
        let (b2, bt2) = (self.b * self.b, self.b_tilde * self.b_tilde);
        let lin = if self.path.same_slit() { r } else { q };
        let re = -(r - rc).powi(2) / b2 - (q - qc).powi(2) / bt2;
        let im = self.k0 * (r * r * self.inv_r_plus + q * q * self.inv_r_minus)
            + self.delta * lin
            + self.theta
            + self.zeta_slit;
        Complex64::new(re, im).exp() / (std::f64::consts::PI * self.b * self.b_tilde).sqrt()
    }

    /// The same wavepacket as a quadratic form.
    pub fn to_form(&self) -> ComplexQuadraticForm {
        let (rc, qc) = self.center();
        let (b2, bt2) = (self.b * self.b, self.b_tilde * self.b_tilde);
        let c = |re: f64, im: f64| Complex64::new(re, im);
        let zero = c(0.0, 0.0);
        let (dr, dq) = if self.path.same_slit() {
            (self.delta, 0.0)
        } else {
            (0.0, self.delta)
        };
        ComplexQuadraticForm {
            q: nalgebra::Matrix2::new(
                c(1.0 / b2, -self.k0 * self.inv_r_plus),
                zero,
                zero,
                c(1.0 / bt2, -self.k0 * self.inv_r_minus),
            ),
            l: nalgebra::Vector2::new(c(-2.0 * rc / b2, -dr), c(-2.0 * qc / bt2, -dq)),
            s: c(rc * rc / b2 + qc * qc / bt2, -self.theta),
            log_scale: -0.5 * (std::f64::consts::PI * self.b * self.b_tilde).ln(),
            gouy: self.zeta_slit,
        }
    }

    /// Reads the closed-form parameters back out of an uncoupled quadratic form.
    pub fn from_form(
        path: PathLabel,
        form: &ComplexQuadraticForm,
        beta_used: f64,
        k0: f64,
    ) -> Result<Self> {
        if form.q[(0, 1)].norm() > 1e-12 * form.q[(0, 0)].norm().max(form.q[(1, 1)].norm()) {
            return Err(Error::CoupledPath(path));
        }
        let (qrr, qqq) = (form.q[(0, 0)], form.q[(1, 1)]);
        let (b2, bt2) = (1.0 / qrr.re, 1.0 / qqq.re);
        let idx = if path.same_slit() { 0 } else { 1 };
        let width_sq = if path.same_slit() { b2 } else { bt2 };
        Ok(Self {
            path,
            b: b2.sqrt(),
            b_tilde: bt2.sqrt(),
            inv_r_plus: -qrr.im / k0,
            inv_r_minus: -qqq.im / k0,
            separation: -form.l[idx].re * width_sq,
            delta: -form.l[idx].im,
            theta: -form.s.im,
            zeta_slit: form.gouy,
            beta_used,
            k0,
        })
    }
}

/// The unobstructed initial state as a quadratic form.
pub fn initial_form(params: &SourceParams) -> ComplexQuadraticForm {
    ComplexQuadraticForm::product_gaussian(params.omega_cap(), params.sigma())
}

/// Slit windows seen by the two photons on a given path.
pub fn slit_window(geom: &SlitGeometry, path: PathLabel) -> ComplexQuadraticForm {
    let (s1, s2) = path.slits();
    let (c1, b1) = slit(geom, s1);
    let (c2, b2) = slit(geom, s2);
    ComplexQuadraticForm::slit_window(c1, b1, c2, b2)
}

/// Propagates `initial` over `distances.0`, multiplies by `window`, and
/// propagates over `distances.1`.
pub fn gaussian_propagate(
    initial: &ComplexQuadraticForm,
    window: &ComplexQuadraticForm,
    distances: (f64, f64),
    params: &SourceParams,
) -> Result<ComplexQuadraticForm> {
    if !initial.is_normalizable() {
        return Err(Error::Degenerate("initial state is not normalizable"));
    }
    let k0 = params.k0();
    let at_slits = initial.propagate(distances.0, k0)?.multiply(window);
    if !at_slits.is_normalizable() {
        return Err(Error::Degenerate("windowed state is not normalizable"));
    }
    at_slits.propagate(distances.1, k0)
}

/// Exact (unnormalised) amplitude of one path, including the transmitted
/// fraction through the windows.
pub fn path_form(
    params: &SourceParams,
    geom: &SlitGeometry,
    path: PathLabel,
) -> Result<ComplexQuadraticForm> {
    geom.validate()?;
    gaussian_propagate(
        &initial_form(params),
        &slit_window(geom, path),
        (geom.z, geom.z_tau),
        params,
    )
}

/// A path amplitude normalised to unit two-photon norm: the closed form when
/// it exists, the integrator otherwise.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PathState {
    Separable(SlitWavepacket),
    Coupled(ComplexQuadraticForm),
}

impl PathState {
    pub fn amplitude(&self, r: f64, q: f64) -> Complex64 {
        match self {
            PathState::Separable(wp) => wp.amplitude(r, q),
            PathState::Coupled(form) => form.evaluate(r, q),
        }
    }
}

pub fn path_state(
    params: &SourceParams,
    geom: &SlitGeometry,
    path: PathLabel,
) -> Result<PathState> {
    match slit_wavepacket(params, geom, path) {
        Ok(wp) => Ok(PathState::Separable(wp)),
        Err(Error::CoupledPath(_)) => path_form(params, geom, path)?
            .normalized()
            .map(PathState::Coupled),
        Err(e) => Err(e),
    }
}
