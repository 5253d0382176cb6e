//! Scenario runners and result output.
//!
//! Each built-in scenario carries a fixed parameter set and emits the series
//! needed to redraw one figure or table. `custom` runs a user configuration
//! with an optional one-dimensional sweep.

pub mod output;

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::entanglement::{
    covariance_from_form, covariance_from_wavepacket, cross_correlation, log_negativity,
};
use crate::error::{Error, Result};
use crate::interference::{
    find_measurement_point, linear_negativity, linspace, screen_pattern, visibility_closed,
    MeasurementSearch,
};
use crate::params::{Config, ScaleConstants, SlitGeometry, SourceParams};
use crate::propagation::{free_state, path_form, slit_wavepacket, PathLabel};

pub use output::{emit, parse_csv, parse_json, render, Column, OutputFormat, ResultSet};

// Conversions divide by these so integer inputs round exactly.
const PER_UM: f64 = 1e6;
const PER_MM: f64 = 1e3;

/// Slit widths of the measurement table, in micrometres.
pub const TABLE1_BETA1_UM: [f64; 8] = [10.0, 15.0, 20.0, 30.0, 36.0, 40.0, 45.0, 50.0];

/// Environment variable capping sweep parallelism.
pub const THREADS_ENV: &str = "BIPHOTON_THREADS";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ScenarioId {
    Fig2Top,
    Fig2Bottom,
    Fig3,
    Fig4,
    Fig5,
    Fig6,
    Fig7,
    Fig8,
    Table1,
    Fig9,
    Custom,
}

impl ScenarioId {
    pub const ALL: [ScenarioId; 11] = [
        ScenarioId::Fig2Top,
        ScenarioId::Fig2Bottom,
        ScenarioId::Fig3,
        ScenarioId::Fig4,
        ScenarioId::Fig5,
        ScenarioId::Fig6,
        ScenarioId::Fig7,
        ScenarioId::Fig8,
        ScenarioId::Table1,
        ScenarioId::Fig9,
        ScenarioId::Custom,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ScenarioId::Fig2Top => "fig2-top",
            ScenarioId::Fig2Bottom => "fig2-bottom",
            ScenarioId::Fig3 => "fig3",
            ScenarioId::Fig4 => "fig4",
            ScenarioId::Fig5 => "fig5",
            ScenarioId::Fig6 => "fig6",
            ScenarioId::Fig7 => "fig7",
            ScenarioId::Fig8 => "fig8",
            ScenarioId::Table1 => "table1",
            ScenarioId::Fig9 => "fig9",
            ScenarioId::Custom => "custom",
        }
    }
}

impl fmt::Display for ScenarioId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ScenarioId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ScenarioId::ALL
            .into_iter()
            .find(|id| id.as_str() == s)
            .ok_or_else(|| Error::UnknownScenario(s.to_string()))
    }
}

/// A parameter that a sweep can vary.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepVariable {
    Z,
    ZTau,
    D,
    /// Both slit widths together.
    Beta,
    Beta1,
    Beta2,
    Sigma,
    OmegaOverSigma,
    Lambda,
}

impl SweepVariable {
    pub const ALL: [SweepVariable; 9] = [
        SweepVariable::Z,
        SweepVariable::ZTau,
        SweepVariable::D,
        SweepVariable::Beta,
        SweepVariable::Beta1,
        SweepVariable::Beta2,
        SweepVariable::Sigma,
        SweepVariable::OmegaOverSigma,
        SweepVariable::Lambda,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            SweepVariable::Z => "z",
            SweepVariable::ZTau => "z_tau",
            SweepVariable::D => "d",
            SweepVariable::Beta => "beta",
            SweepVariable::Beta1 => "beta1",
            SweepVariable::Beta2 => "beta2",
            SweepVariable::Sigma => "sigma",
            SweepVariable::OmegaOverSigma => "omega_over_sigma",
            SweepVariable::Lambda => "lambda",
        }
    }

    /// Lengths are given in metres; `omega_over_sigma` is a plain ratio.
    pub fn is_length(self) -> bool {
        self != SweepVariable::OmegaOverSigma
    }

    /// Column name and the factor taking SI values to that column's unit.
    pub fn column(self) -> (&'static str, f64) {
        match self {
            SweepVariable::Z => ("z_mm", PER_MM),
            SweepVariable::ZTau => ("z_tau_mm", PER_MM),
            SweepVariable::D => ("d_um", PER_UM),
            SweepVariable::Beta => ("beta_um", PER_UM),
            SweepVariable::Beta1 => ("beta1_um", PER_UM),
            SweepVariable::Beta2 => ("beta2_um", PER_UM),
            SweepVariable::Sigma => ("sigma_um", PER_UM),
            SweepVariable::OmegaOverSigma => ("omega_over_sigma", 1.0),
            SweepVariable::Lambda => ("lambda_nm", 1e9),
        }
    }

    pub fn apply(
        self,
        params: &SourceParams,
        geom: &SlitGeometry,
        value: f64,
    ) -> Result<(SourceParams, SlitGeometry)> {
        let mut g = *geom;
        let mut p = *params;
        match self {
            SweepVariable::Z => g.z = value,
            SweepVariable::ZTau => g.z_tau = value,
            SweepVariable::D => g.d = value,
            SweepVariable::Beta => {
                g.beta1 = value;
                g.beta2 = value;
            }
            SweepVariable::Beta1 => g.beta1 = value,
            SweepVariable::Beta2 => g.beta2 = value,
            SweepVariable::Sigma => p = p.with_sigma(value)?,
            SweepVariable::OmegaOverSigma => p = p.with_omega_over_sigma(value)?,
            SweepVariable::Lambda => p = p.with_lambda(value)?,
        }
        g.validate()?;
        Ok((p, g))
    }
}

impl fmt::Display for SweepVariable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SweepVariable {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SweepVariable::ALL
            .into_iter()
            .find(|v| v.as_str() == s)
            .ok_or_else(|| Error::Config(format!("unknown sweep variable {s:?}")))
    }
}

/// Evenly spaced samples of one variable, endpoints included.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sweep {
    pub variable: SweepVariable,
    pub from: f64,
    pub to: f64,
    pub count: usize,
}

impl Sweep {
    pub fn new(variable: SweepVariable, from: f64, to: f64, count: usize) -> Result<Self> {
        if !(from.is_finite() && to.is_finite()) {
            return Err(Error::Config("sweep bounds must be finite".into()));
        }
        if count == 0 {
            return Err(Error::Config("sweep count must be at least 1".into()));
        }
        Ok(Self {
            variable,
            from,
            to,
            count,
        })
    }

    pub fn values(&self) -> Vec<f64> {
        linspace(self.from, self.to, self.count)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scenario {
    pub id: ScenarioId,
    pub params: SourceParams,
    pub geom: SlitGeometry,
    pub sweep: Option<Sweep>,
    /// Sample count of the main axis; `None` uses the scenario default.
    pub grid: Option<usize>,
}

fn geom(z_mm: f64, z_tau_mm: f64, d_um: f64, beta1_um: f64, beta2_um: f64) -> SlitGeometry {
    SlitGeometry {
        z: z_mm / PER_MM,
        z_tau: z_tau_mm / PER_MM,
        d: d_um / PER_UM,
        beta1: beta1_um / PER_UM,
        beta2: beta2_um / PER_UM,
    }
}

impl Scenario {
    /// Built-in parameter set of a scenario; `custom` starts from the
    /// Measurement geometry with a symmetric 60 um slit pair.
    pub fn builtin(id: ScenarioId) -> Self {
        let params = SourceParams::reference();
        let geom = match id {
            ScenarioId::Fig2Top => geom(1.2, 0.0, 0.0, 40.0, 40.0),
            ScenarioId::Fig2Bottom => geom(1.2, 0.0, 0.0, 35.0, 35.0),
            ScenarioId::Fig3 => geom(2.0, 70.0, 100.0, 60.0, 60.0),
            ScenarioId::Fig4 => geom(2.0, 70.0, 0.0, 60.0, 60.0),
            ScenarioId::Fig5 | ScenarioId::Fig6 => geom(500.0, 500.0, 100.0, 5.0, 5.0),
            ScenarioId::Fig7 => geom(1.0, 70.0, 200.0, 60.0, 60.0),
            ScenarioId::Fig8 => geom(2.0, 70.0, 200.0, 60.0, 5.0),
            ScenarioId::Table1 | ScenarioId::Fig9 => geom(2.0, 70.0, 200.0, 10.0, 5.0),
            ScenarioId::Custom => geom(2.0, 70.0, 200.0, 60.0, 60.0),
        };
        Self {
            id,
            params,
            geom,
            sweep: None,
            grid: None,
        }
    }

    pub fn custom(config: &Config, sweep: Option<Sweep>) -> Self {
        Self {
            id: ScenarioId::Custom,
            params: config.source,
            geom: config.geometry,
            sweep,
            grid: None,
        }
    }

    pub fn with_grid(mut self, grid: Option<usize>) -> Self {
        self.grid = grid;
        self
    }

    fn grid_or(&self, default: usize) -> Result<usize> {
        match self.grid {
            Some(n) if n < 2 => Err(Error::Config(format!("grid must be at least 2, got {n}"))),
            Some(n) => Ok(n),
            None => Ok(default),
        }
    }
}

/// Maps `f` over `items` on a worker pool bounded by [`THREADS_ENV`],
/// keeping input order.
pub fn parallel_map<T, U, F>(items: &[T], f: F) -> Result<Vec<U>>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> Result<U> + Sync + Send,
{
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(text) = std::env::var(THREADS_ENV) {
        let n: usize = text.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| {
            Error::Config(format!(
                "{THREADS_ENV} must be a positive integer, got {text:?}"
            ))
        })?;
        builder = builder.num_threads(n);
    }
    let pool = builder
        .build()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    pool.install(|| items.par_iter().map(&f).collect())
}

fn timestamp() -> String {
    match std::env::var("SOURCE_DATE_EPOCH") {
        Ok(v) if !v.trim().is_empty() => v.trim().to_string(),
        _ => std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map_or(0, |d| d.as_secs())
            .to_string(),
    }
}

fn sci(v: f64) -> String {
    output::format_value(v)
}

/// Metadata block naming the scenario and every resolved parameter.
pub fn describe(rs: &mut ResultSet, scenario: &str, params: &SourceParams, geom: &SlitGeometry) {
    rs.meta("scenario", scenario)
        .meta("version", env!("CARGO_PKG_VERSION"))
        .meta("timestamp", timestamp())
        .meta("lambda_m", sci(params.lambda()))
        .meta("sigma_m", sci(params.sigma()))
        .meta("omega_m", sci(params.omega_cap()))
        .meta("omega_over_sigma", sci(params.omega_over_sigma()));
    if let Some(lp) = params.lambda_p() {
        rs.meta("lambda_p_m", sci(lp));
    }
    if let Some(lz) = params.crystal_length() {
        rs.meta("crystal_length_m", sci(lz));
    }
    rs.meta("z_m", sci(geom.z))
        .meta("z_tau_m", sci(geom.z_tau))
        .meta("d_m", sci(geom.d))
        .meta("beta1_m", sci(geom.beta1))
        .meta("beta2_m", sci(geom.beta2))
        .meta(
            "slit_layout",
            "slit 1 (beta1) centred at x = -d/2, slit 2 (beta2) at x = +d/2",
        );
}

pub fn run_scenario(s: &Scenario) -> Result<ResultSet> {
    run_inner(s).map_err(|e| match e {
        Error::Scenario { .. } => e,
        other => Error::Scenario {
            scenario: s.id.to_string(),
            source: Box::new(other),
        },
    })
}

fn run_inner(s: &Scenario) -> Result<ResultSet> {
    s.geom.validate()?;
    let mut rs = ResultSet::new();
    describe(&mut rs, s.id.as_str(), &s.params, &s.geom);
    if let Some(n) = s.grid {
        rs.meta("grid", n);
    }
    match s.id {
        ScenarioId::Fig2Top => fig2_top(s, &mut rs)?,
        ScenarioId::Fig2Bottom => fig2_bottom(s, &mut rs)?,
        ScenarioId::Fig3 => fig3(s, &mut rs)?,
        ScenarioId::Fig4 => fig4(s, &mut rs)?,
        ScenarioId::Fig5 => fig5(s, &mut rs)?,
        ScenarioId::Fig6 => fig6(s, &mut rs)?,
        ScenarioId::Fig7 => fig7(s, &mut rs)?,
        ScenarioId::Fig8 => fig8(s, &mut rs)?,
        ScenarioId::Table1 => table1(s, &mut rs)?,
        ScenarioId::Fig9 => fig9(s, &mut rs)?,
        ScenarioId::Custom => custom(s, &mut rs)?,
    }
    rs.validate()?;
    Ok(rs)
}

fn scaled(values: &[f64], factor: f64) -> Vec<f64> {
    values.iter().map(|v| v * factor).collect()
}

/// Gouy phase of a same-slit path.
fn zeta(params: &SourceParams, geom: &SlitGeometry) -> Result<f64> {
    Ok(slit_wavepacket(params, geom, PathLabel::UU)?.zeta_slit)
}

/// Logarithmic negativity of the path through slit 1.
pub fn negativity_uu(params: &SourceParams, geom: &SlitGeometry) -> Result<f64> {
    let sym = SlitGeometry {
        beta2: geom.beta1,
        ..*geom
    };
    let wp = slit_wavepacket(params, &sym, PathLabel::UU)?;
    log_negativity(&covariance_from_wavepacket(&wp, ScaleConstants::default())?)
}

/// Position cross-correlation of a path; paths that couple `r` and `q`
/// go through the integrator.
pub fn path_correlation(
    params: &SourceParams,
    geom: &SlitGeometry,
    path: PathLabel,
) -> Result<f64> {
    match slit_wavepacket(params, geom, path) {
        Ok(wp) => Ok(cross_correlation(&wp)?.rho),
        Err(Error::CoupledPath(_)) => {
            let m =
                covariance_from_form(&path_form(params, geom, path)?, ScaleConstants::default())?;
            let raw = m.raw_moments();
            let (a, b) = (raw[(0, 0)], raw[(2, 2)]);
            if a <= 0.0 || b <= 0.0 {
                return Err(Error::UndefinedCorrelation);
            }
            Ok((raw[(0, 2)] / (a * b).sqrt()).clamp(-1.0, 1.0))
        }
        Err(e) => Err(e),
    }
}

fn fig2_top(s: &Scenario, rs: &mut ResultSet) -> Result<()> {
    let zt = linspace(0.0, 100.0 / PER_MM, s.grid_or(201)?);
    rs.push("z_tau_mm", scaled(&zt, PER_MM));
    for ratio in [3.5, 5.0, 10.0] {
        let p = s.params.with_omega_over_sigma(ratio)?;
        let col = parallel_map(&zt, |&z_tau| zeta(&p, &SlitGeometry { z_tau, ..s.geom }))?;
        rs.push(format!("zeta_rad_omega_{ratio}sigma"), col);
    }
    rs.meta("note", "Gouy phase does not depend on d; d = 0");
    Ok(())
}

fn fig2_bottom(s: &Scenario, rs: &mut ResultSet) -> Result<()> {
    let zt = linspace(0.0, 100.0 / PER_MM, s.grid_or(201)?);
    rs.push("z_tau_mm", scaled(&zt, PER_MM));
    for beta in [35.0, 65.0] {
        let col = parallel_map(&zt, |&z_tau| {
            let g = SlitGeometry {
                z_tau,
                beta1: beta / PER_UM,
                beta2: beta / PER_UM,
                ..s.geom
            };
            zeta(&s.params, &g)
        })?;
        rs.push(format!("zeta_rad_beta_{beta}um"), col);
    }
    let free = parallel_map(&zt, |&z_tau| {
        Ok(free_state(&s.params, s.geom.z + z_tau)?.zeta_free)
    })?;
    rs.push("zeta_rad_free", free);
    rs.meta("note", "Gouy phase does not depend on d; d = 0");
    Ok(())
}

fn fig3(s: &Scenario, rs: &mut ResultSet) -> Result<()> {
    let n = s.grid_or(201)?;
    let zs = linspace(0.0, 50.0 / PER_MM, n);
    let zts = linspace(0.0, 200.0 / PER_MM, n);
    let ln_ratio = s.params.omega_over_sigma().ln();
    rs.push("z_mm", scaled(&zs, PER_MM));
    for d in [100.0, 180.0] {
        for beta in [50.0, 60.0] {
            let col = parallel_map(&zs, |&z| {
                negativity_uu(&s.params, &geom(z * PER_MM, 70.0, d, beta, beta))
            })?;
            rs.push(format!("e_n_vs_z_d{d}um_beta{beta}um"), col);
        }
    }
    rs.push("z_tau_mm", scaled(&zts, PER_MM));
    for d in [100.0, 180.0] {
        for beta in [60.0, 70.0] {
            let col = parallel_map(&zts, |&zt| {
                negativity_uu(&s.params, &geom(2.0, zt * PER_MM, d, beta, beta))
            })?;
            rs.push(format!("e_n_vs_z_tau_d{d}um_beta{beta}um"), col);
        }
    }
    rs.push("e_n_free", vec![ln_ratio; n]);
    rs.meta(
        "fixed",
        "z_tau = 70 mm for the z sweeps, z = 2 mm for the z_tau sweeps",
    );
    Ok(())
}

fn fig4(s: &Scenario, rs: &mut ResultSet) -> Result<()> {
    let betas = linspace(5.0 / PER_UM, 200.0 / PER_UM, s.grid_or(196)?);
    let rows = parallel_map(&betas, |&beta| {
        let g = SlitGeometry {
            beta1: beta,
            beta2: beta,
            ..s.geom
        };
        Ok((negativity_uu(&s.params, &g)?, zeta(&s.params, &g)?))
    })?;
    rs.push("beta_um", scaled(&betas, PER_UM))
        .push("e_n", rows.iter().map(|r| r.0).collect())
        .push("zeta_rad", rows.iter().map(|r| r.1).collect());
    rs.meta(
        "note",
        "d = 0 as in the single-slit reduction; the quoted d = 200 mm is not used and E_N does not depend on d",
    );
    Ok(())
}

fn fig5(s: &Scenario, rs: &mut ResultSet) -> Result<()> {
    let zts = linspace(0.0, 500.0 / PER_MM, s.grid_or(501)?);
    rs.push("z_tau_mm", scaled(&zts, PER_MM));
    for z_mm in [500.0, 8.0] {
        let rows = parallel_map(&zts, |&zt| {
            let g = SlitGeometry {
                z: z_mm / PER_MM,
                z_tau: zt,
                ..s.geom
            };
            let uu = cross_correlation(&slit_wavepacket(&s.params, &g, PathLabel::UU)?)?;
            let ud = cross_correlation(&slit_wavepacket(&s.params, &g, PathLabel::UD)?)?;
            Ok([uu.rho, ud.rho, uu.rho_centered, ud.rho_centered])
        })?;
        for (k, name) in ["rho_uu", "rho_ud", "rho_uu_centered", "rho_ud_centered"]
            .iter()
            .enumerate()
        {
            rs.push(
                format!("{name}_z{z_mm}mm"),
                rows.iter().map(|r| r[k]).collect(),
            );
        }
    }
    Ok(())
}

fn fig6(s: &Scenario, rs: &mut ResultSet) -> Result<()> {
    let rs_grid = linspace(-4.0 / PER_MM, 4.0 / PER_MM, s.grid_or(2001)?);
    rs.push("r_mm", scaled(&rs_grid, PER_MM));
    for z_mm in [500.0, 8.0] {
        let g = SlitGeometry {
            z: z_mm / PER_MM,
            ..s.geom
        };
        let pat = screen_pattern(&s.params, &g, &rs_grid, 0.0)?;
        rs.push(format!("i4_z{z_mm}mm"), pat.i4)
            .push(format!("i2_z{z_mm}mm"), pat.i2)
            .push(format!("i2p_z{z_mm}mm"), pat.i2_prime);
    }
    rs.meta("q", "0 (both photons at the same screen position)");
    Ok(())
}

/// Initial widths used for the visibility curves, in millimetres.
pub const FIG7_OMEGA_MM: [f64; 6] = [0.01, 0.03, 0.05, 0.06, 0.09, 0.28];

fn fig7(s: &Scenario, rs: &mut ResultSet) -> Result<()> {
    let n = s.grid_or(401)?;
    let rs_grid = linspace(-2.0 / PER_MM, 2.0 / PER_MM, n);
    rs.push("r_mm", scaled(&rs_grid, PER_MM));
    for omega in FIG7_OMEGA_MM {
        let p = s.params.with_omega(omega / PER_MM)?;
        let wp = slit_wavepacket(&p, &s.geom, PathLabel::UU)?;
        rs.push(
            format!("vis_omega_{omega}mm"),
            rs_grid.iter().map(|&r| visibility_closed(&wp, r)).collect(),
        );
        rs.meta(
            format!("e_n_omega_{omega}mm"),
            sci(negativity_uu(&p, &s.geom)?),
        );
    }
    let omegas = linspace(0.005 / PER_MM, 0.3 / PER_MM, n);
    let e_n = parallel_map(&omegas, |&o| {
        negativity_uu(&s.params.with_omega(o)?, &s.geom)
    })?;
    rs.push("omega_mm", scaled(&omegas, PER_MM))
        .push("e_n_vs_omega", e_n);
    Ok(())
}

fn fig8(s: &Scenario, rs: &mut ResultSet) -> Result<()> {
    let rs_grid = linspace(-1.0 / PER_MM, 1.0 / PER_MM, s.grid_or(2001)?);
    let pat = screen_pattern(&s.params, &s.geom, &rs_grid, 0.0)?;
    let ir4: Vec<f64> = pat
        .i4
        .iter()
        .zip(&pat.i2)
        .zip(&pat.ir)
        .map(|((&i4, &i2), &ir)| {
            if i2 > 0.0 && ir > 0.0 {
                i4 * ir / i2
            } else {
                0.0
            }
        })
        .collect();
    rs.push("r_mm", scaled(&rs_grid, PER_MM))
        .push("ir_4psi", ir4)
        .push("ir_2psi", pat.ir)
        .push("vis", pat.vis);
    Ok(())
}

fn table1(s: &Scenario, rs: &mut ResultSet) -> Result<()> {
    table1_rows(&s.params, &s.geom, &MeasurementSearch::default(), rs)
}

/// Appends the measurement-table columns for `geom` with `beta1` replaced by each
/// tabulated width.
pub fn table1_rows(
    params: &SourceParams,
    geom: &SlitGeometry,
    search: &MeasurementSearch,
    rs: &mut ResultSet,
) -> Result<()> {
    let rows = parallel_map(&TABLE1_BETA1_UM, |&b| {
        let g = SlitGeometry {
            beta1: b / PER_UM,
            ..*geom
        };
        find_measurement_point(params, &g, search)
    })?;
    rs.push("r_mm", rows.iter().map(|m| m.r_star * PER_MM).collect())
        .push("beta1_um", TABLE1_BETA1_UM.to_vec())
        .push("gouy_diff_rad", rows.iter().map(|m| m.gouy_diff).collect())
        .push(
            "e_n",
            rows.iter()
                .map(|m| m.e_n_linear.unwrap_or(f64::NAN))
                .collect(),
        );
    let ns: Vec<String> = rows.iter().map(|m| m.n.to_string()).collect();
    rs.meta("n", ns.join(" ")).meta(
        "e_n_definition",
        "(gouy_diff - 0.48)/0.16, NaN where negative",
    );
    Ok(())
}

fn fig9(s: &Scenario, rs: &mut ResultSet) -> Result<()> {
    let betas = linspace(10.0 / PER_UM, 60.0 / PER_UM, s.grid_or(101)?);
    let search = MeasurementSearch::default();
    let rows = parallel_map(&betas, |&b| {
        let g = SlitGeometry { beta1: b, ..s.geom };
        let uu = slit_wavepacket(&s.params, &g, PathLabel::UU)?;
        let dd = slit_wavepacket(&s.params, &g, PathLabel::DD)?;
        let theory = (uu.zeta_slit - dd.zeta_slit).abs();
        let measured = match find_measurement_point(&s.params, &g, &search) {
            Ok(m) => m.gouy_diff,
            Err(Error::NoRoot { .. } | Error::ConstraintViolated(_)) => f64::NAN,
            Err(e) => return Err(e),
        };
        Ok([
            theory,
            measured,
            negativity_uu(&s.params, &g)?,
            linear_negativity(theory).unwrap_or(f64::NAN),
        ])
    })?;
    rs.push("beta1_um", scaled(&betas, PER_UM));
    for (k, name) in [
        "gouy_diff_theory",
        "gouy_diff_measured",
        "e_n_theory",
        "e_n_linear",
    ]
    .iter()
    .enumerate()
    {
        rs.push(*name, rows.iter().map(|r| r[k]).collect());
    }
    Ok(())
}

/// Observables reported by the `custom` scenario for one parameter point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointSummary {
    pub zeta_uu: f64,
    pub zeta_dd: f64,
    pub gouy_diff: f64,
    pub e_n_uu: f64,
    pub rho_uu: f64,
    pub rho_ud: f64,
}

pub fn summarize(params: &SourceParams, geom: &SlitGeometry) -> Result<PointSummary> {
    let uu = slit_wavepacket(params, geom, PathLabel::UU)?;
    let dd = slit_wavepacket(params, geom, PathLabel::DD)?;
    Ok(PointSummary {
        zeta_uu: uu.zeta_slit,
        zeta_dd: dd.zeta_slit,
        gouy_diff: (uu.zeta_slit - dd.zeta_slit).abs(),
        e_n_uu: negativity_uu(params, geom)?,
        rho_uu: cross_correlation(&uu)?.rho,
        rho_ud: path_correlation(params, geom, PathLabel::UD)?,
    })
}

fn custom(s: &Scenario, rs: &mut ResultSet) -> Result<()> {
    let points: Vec<(SourceParams, SlitGeometry)> = match &s.sweep {
        None => vec![(s.params, s.geom)],
        Some(sw) => {
            let (name, factor) = sw.variable.column();
            let values = sw.values();
            rs.meta(
                "sweep",
                format!(
                    "{} {} {} {}",
                    sw.variable,
                    sci(sw.from),
                    sci(sw.to),
                    sw.count
                ),
            );
            rs.push(name, scaled(&values, factor));
            values
                .iter()
                .map(|&v| sw.variable.apply(&s.params, &s.geom, v))
                .collect::<Result<_>>()?
        }
    };
    let rows = parallel_map(&points, |(p, g)| summarize(p, g))?;
    rs.push("zeta_uu_rad", rows.iter().map(|r| r.zeta_uu).collect())
        .push("zeta_dd_rad", rows.iter().map(|r| r.zeta_dd).collect())
        .push("gouy_diff_rad", rows.iter().map(|r| r.gouy_diff).collect())
        .push("e_n_uu", rows.iter().map(|r| r.e_n_uu).collect())
        .push("rho_uu", rows.iter().map(|r| r.rho_uu).collect())
        .push("rho_ud", rows.iter().map(|r| r.rho_ud).collect());
    Ok(())
}
