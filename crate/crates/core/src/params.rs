//! Source parameters, slit geometry, scale constants and the JSON config format.

use std::f64::consts::PI;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::units::parse_length;

/// Biphoton wavelength used by the built-in scenarios.
pub const LAMBDA: f64 = 702e-9;
/// Pump wavelength used by the built-in scenarios.
pub const LAMBDA_P: f64 = 351.1e-9;
/// Nonlinear crystal length used by the built-in scenarios.
pub const CRYSTAL_LENGTH: f64 = 7.0e-3;
/// Relative-coordinate spread used by the built-in scenarios.
pub const SIGMA: f64 = 11.4e-6;

fn positive(name: &'static str, value: f64) -> Result<f64> {
    if value > 0.0 && !value.is_nan() {
        Ok(value)
    } else {
        Err(Error::Domain {
            name,
            requirement: "positive",
            value,
        })
    }
}

fn non_negative(name: &'static str, value: f64) -> Result<f64> {
    if value >= 0.0 && value.is_finite() {
        Ok(value)
    } else {
        Err(Error::Domain {
            name,
            requirement: "finite and non-negative",
            value,
        })
    }
}

/// `sqrt(crystal_length * lambda_p / (6 pi))`.
pub fn sigma_from_crystal(crystal_length: f64, lambda_p: f64) -> Result<f64> {
    positive("crystal_length", crystal_length)?;
    positive("lambda_p", lambda_p)?;
    Ok((crystal_length * lambda_p / (6.0 * PI)).sqrt())
}

/// Source description: wavelength and the two Gaussian spreads of the biphoton.
///
/// `sigma` is the width of the relative coordinate `q`, `omega_cap` the width
/// of the centre-of-mass coordinate `r`. Derived quantities are recomputed on
/// every call.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SourceParams {
    lambda: f64,
    lambda_p: Option<f64>,
    crystal_length: Option<f64>,
    sigma: f64,
    omega_cap: f64,
}

impl SourceParams {
    pub fn new(lambda: f64, sigma: f64, omega_cap: f64) -> Result<Self> {
        positive("lambda", lambda)?;
        positive("sigma", sigma)?;
        positive("omega", omega_cap)?;
        if !(lambda.is_finite() && sigma.is_finite() && omega_cap.is_finite()) {
            return Err(Error::Domain {
                name: "source parameters",
                requirement: "finite",
                value: f64::INFINITY,
            });
        }
        Ok(Self {
            lambda,
            lambda_p: None,
            crystal_length: None,
            sigma,
            omega_cap,
        })
    }

    /// Builds the source with `sigma` derived from the crystal data.
    pub fn from_crystal(
        lambda: f64,
        lambda_p: f64,
        crystal_length: f64,
        omega_over_sigma: f64,
    ) -> Result<Self> {
        let sigma = sigma_from_crystal(crystal_length, lambda_p)?;
        positive("omega_over_sigma", omega_over_sigma)?;
        Self::new(lambda, sigma, omega_over_sigma * sigma)
            .map(|s| s.with_crystal(lambda_p, crystal_length))
    }

    /// The parameter set of the built-in scenarios: 702 nm, sigma = 11.4 um,
    /// Omega = 10 sigma.
    pub fn reference() -> Self {
        Self::new(LAMBDA, SIGMA, 10.0 * SIGMA)
            .expect("built-in parameters are valid")
            .with_crystal(LAMBDA_P, CRYSTAL_LENGTH)
    }

    /// Records the pump wavelength and crystal length as metadata only.
    pub fn with_crystal(mut self, lambda_p: f64, crystal_length: f64) -> Self {
        self.lambda_p = Some(lambda_p);
        self.crystal_length = Some(crystal_length);
        self
    }

    pub fn with_omega_over_sigma(self, ratio: f64) -> Result<Self> {
        let mut out = Self::new(self.lambda, self.sigma, ratio * self.sigma)?;
        out.lambda_p = self.lambda_p;
        out.crystal_length = self.crystal_length;
        Ok(out)
    }

    pub fn with_omega(self, omega_cap: f64) -> Result<Self> {
        self.with_omega_over_sigma(omega_cap / self.sigma)
    }

    /// Replaces sigma and keeps `omega_cap / sigma` fixed.
    pub fn with_sigma(self, sigma: f64) -> Result<Self> {
        let ratio = self.omega_over_sigma();
        let mut out = Self::new(self.lambda, sigma, ratio * sigma)?;
        out.lambda_p = self.lambda_p;
        out.crystal_length = self.crystal_length;
        Ok(out)
    }

    pub fn with_lambda(self, lambda: f64) -> Result<Self> {
        let mut out = Self::new(lambda, self.sigma, self.omega_cap)?;
        out.lambda_p = self.lambda_p;
        out.crystal_length = self.crystal_length;
        Ok(out)
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn lambda_p(&self) -> Option<f64> {
        self.lambda_p
    }

    pub fn crystal_length(&self) -> Option<f64> {
        self.crystal_length
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn omega_cap(&self) -> f64 {
        self.omega_cap
    }

    pub fn omega_over_sigma(&self) -> f64 {
        self.omega_cap / self.sigma
    }

    pub fn k0(&self) -> f64 {
        2.0 * PI / self.lambda
    }

    pub fn z0_plus(&self) -> f64 {
        self.k0() * self.omega_cap * self.omega_cap
    }

    pub fn z0_minus(&self) -> f64 {
        self.k0() * self.sigma * self.sigma
    }
}

/// `(k0 Omega^2, k0 sigma^2)`.
pub fn rayleigh_lengths(params: &SourceParams) -> (f64, f64) {
    (params.z0_plus(), params.z0_minus())
}

/// Flight distances and slit parameters.
///
/// Slit 1 has width `beta1` and is centred at `-d/2`; slit 2 has width `beta2`
/// and is centred at `+d/2`. Widths may be `f64::INFINITY` (no aperture).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SlitGeometry {
    pub z: f64,
    pub z_tau: f64,
    pub d: f64,
    pub beta1: f64,
    pub beta2: f64,
}

impl SlitGeometry {
    pub fn new(z: f64, z_tau: f64, d: f64, beta1: f64, beta2: f64) -> Result<Self> {
        let geom = Self {
            z,
            z_tau,
            d,
            beta1,
            beta2,
        };
        geom.validate()?;
        Ok(geom)
    }

    pub fn symmetric(z: f64, z_tau: f64, d: f64, beta: f64) -> Result<Self> {
        Self::new(z, z_tau, d, beta, beta)
    }

    pub fn validate(&self) -> Result<()> {
        non_negative("z", self.z)?;
        non_negative("z_tau", self.z_tau)?;
        non_negative("d", self.d)?;
        positive("beta1", self.beta1)?;
        positive("beta2", self.beta2)?;
        Ok(())
    }

    pub fn is_symmetric(&self) -> bool {
        self.beta1 == self.beta2
    }

    /// Measurement geometry: d = 200 um, z = 2 mm, z_tau = 70 mm, beta2 = 5 um.
    pub fn table1(beta1: f64) -> Self {
        Self {
            z: 2e-3,
            z_tau: 70e-3,
            d: 200e-6,
            beta1,
            beta2: 5e-6,
        }
    }
}

/// How time enters the model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum TimeParameterization {
    /// Times are replaced by flight distances `z = c t`, so the speed of light
    /// never appears numerically.
    LongitudinalDistance,
}

/// Constants that make the covariance matrix dimensionless: positions are
/// divided by `length_scale` and momenta multiplied by `length_scale / hbar`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScaleConstants {
    pub hbar: f64,
    pub length_scale: f64,
    pub c_convention: TimeParameterization,
}

impl Default for ScaleConstants {
    fn default() -> Self {
        Self {
            hbar: 1.0,
            length_scale: 1e-3,
            c_convention: TimeParameterization::LongitudinalDistance,
        }
    }
}

impl ScaleConstants {
    pub fn new(hbar: f64, length_scale: f64) -> Result<Self> {
        positive("hbar", hbar)?;
        positive("length_scale", length_scale)?;
        Ok(Self {
            hbar,
            length_scale,
            c_convention: TimeParameterization::LongitudinalDistance,
        })
    }
}

/// Raw JSON config: every field optional, lengths as unit-suffixed strings.
#[derive(Debug, Clone, Default, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub lambda: Option<String>,
    pub lambda_p: Option<String>,
    pub crystal_length: Option<String>,
    pub sigma: Option<String>,
    pub omega_over_sigma: Option<f64>,
    pub z: Option<String>,
    pub z_tau: Option<String>,
    pub d: Option<String>,
    pub beta1: Option<String>,
    pub beta2: Option<String>,
}

/// Parsed overrides, in metres.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct ConfigOverrides {
    pub lambda: Option<f64>,
    pub lambda_p: Option<f64>,
    pub crystal_length: Option<f64>,
    pub sigma: Option<f64>,
    pub omega_over_sigma: Option<f64>,
    pub z: Option<f64>,
    pub z_tau: Option<f64>,
    pub d: Option<f64>,
    pub beta1: Option<f64>,
    pub beta2: Option<f64>,
}

/// Fully resolved configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Config {
    pub source: SourceParams,
    pub geometry: SlitGeometry,
}

impl ConfigFile {
    pub fn parse(self) -> Result<ConfigOverrides> {
        let len = |v: Option<String>| v.as_deref().map(parse_length).transpose();
        let omega_over_sigma = match self.omega_over_sigma {
            Some(r) if !(r > 0.0 && r.is_finite()) => {
                return Err(Error::Config(format!(
                    "omega_over_sigma must be positive, got {r}"
                )))
            }
            other => other,
        };
        Ok(ConfigOverrides {
            lambda: len(self.lambda)?,
            lambda_p: len(self.lambda_p)?,
            crystal_length: len(self.crystal_length)?,
            sigma: len(self.sigma)?,
            omega_over_sigma,
            z: len(self.z)?,
            z_tau: len(self.z_tau)?,
            d: len(self.d)?,
            beta1: len(self.beta1)?,
            beta2: len(self.beta2)?,
        })
    }
}

impl ConfigOverrides {
    pub fn from_json_str(text: &str) -> Result<Self> {
        let file: ConfigFile =
            serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        file.parse()
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json_str(&text)
    }

    /// Applies the overrides on top of a base configuration.
    ///
    /// An explicit `sigma` wins; otherwise sigma is derived from the crystal
    /// whenever `lambda_p` or `crystal_length` is given. `omega_over_sigma`
    /// defaults to the base ratio.
    pub fn apply(&self, base: &Config) -> Result<Config> {
        let src = &base.source;
        let lambda_p = self.lambda_p.or(src.lambda_p()).unwrap_or(LAMBDA_P);
        let crystal_length = self
            .crystal_length
            .or(src.crystal_length())
            .unwrap_or(CRYSTAL_LENGTH);
        let sigma = match self.sigma {
            Some(s) => s,
            None if self.lambda_p.is_some() || self.crystal_length.is_some() => {
                sigma_from_crystal(crystal_length, lambda_p)?
            }
            None => src.sigma(),
        };
        let ratio = self.omega_over_sigma.unwrap_or(src.omega_over_sigma());
        let source = SourceParams::new(self.lambda.unwrap_or(src.lambda()), sigma, ratio * sigma)?
            .with_crystal(lambda_p, crystal_length);
        let g = &base.geometry;
        let geometry = SlitGeometry::new(
            self.z.unwrap_or(g.z),
            self.z_tau.unwrap_or(g.z_tau),
            self.d.unwrap_or(g.d),
            self.beta1.unwrap_or(g.beta1),
            self.beta2.unwrap_or(g.beta2),
        )?;
        Ok(Config { source, geometry })
    }
}

impl Config {
    /// Source of [`SourceParams::reference`] with the measurement geometry at beta1 = 60 um.
    pub fn reference() -> Self {
        Self {
            source: SourceParams::reference(),
            geometry: SlitGeometry::table1(60e-6),
        }
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        ConfigOverrides::from_json_str(text)?.apply(&Self::reference())
    }

    pub fn load(path: &Path) -> Result<Self> {
        ConfigOverrides::load(path)?.apply(&Self::reference())
    }
}
