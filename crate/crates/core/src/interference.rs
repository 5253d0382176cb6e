//! Screen intensities, visibility and the Gouy-phase-difference measurement.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::params::{SlitGeometry, SourceParams};
use crate::propagation::{path_state, slit_wavepacket, PathLabel, PathState, SlitWavepacket};
use crate::roots::bracketed_roots;

/// Slack allowed on `|(Ir - 1)/nu| <= 1` before the argument is clamped.
pub const ARCCOS_SLACK: f64 = 1e-9;

/// Offset of the linear relation `|zeta1 - zeta2| = 0.16 E_N + 0.48`.
pub const LINEAR_OFFSET: f64 = 0.48;
/// Slope of the linear relation `|zeta1 - zeta2| = 0.16 E_N + 0.48`.
pub const LINEAR_SLOPE: f64 = 0.16;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScreenPoint {
    pub r: f64,
    pub q: f64,
}

pub fn amplitude(wp: &SlitWavepacket, pt: ScreenPoint) -> Complex64 {
    wp.amplitude(pt.r, pt.q)
}

/// Normalised amplitudes of all four paths.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathAmplitudes {
    pub uu: PathState,
    pub dd: PathState,
    pub ud: PathState,
    pub du: PathState,
}

impl PathAmplitudes {
    pub fn new(params: &SourceParams, geom: &SlitGeometry) -> Result<Self> {
        Ok(Self {
            uu: path_state(params, geom, PathLabel::UU)?,
            dd: path_state(params, geom, PathLabel::DD)?,
            ud: path_state(params, geom, PathLabel::UD)?,
            du: path_state(params, geom, PathLabel::DU)?,
        })
    }

    /// `[uu, dd, ud, du]` at a point.
    pub fn at(&self, pt: ScreenPoint) -> [Complex64; 4] {
        [
            self.uu.amplitude(pt.r, pt.q),
            self.dd.amplitude(pt.r, pt.q),
            self.ud.amplitude(pt.r, pt.q),
            self.du.amplitude(pt.r, pt.q),
        ]
    }
}

/// Intensities sampled along `r` at fixed `q`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScreenPattern {
    pub grid: Vec<f64>,
    pub q: f64,
    /// `|uu + ud + du + dd|^2`
    pub i4: Vec<f64>,
    /// `|uu + dd|^2`
    pub i2: Vec<f64>,
    /// `|ud + du|^2`
    pub i2_prime: Vec<f64>,
    /// `I2 / (|uu|^2 + |dd|^2)`
    pub ir: Vec<f64>,
    /// `2 |uu| |dd| / (|uu|^2 + |dd|^2)`
    pub vis: Vec<f64>,
    /// Samples where `|uu|^2 + |dd|^2` underflows; `ir` and `vis` are 0 there.
    pub excluded: Vec<usize>,
}

pub fn screen_pattern(
    params: &SourceParams,
    geom: &SlitGeometry,
    grid: &[f64],
    q: f64,
) -> Result<ScreenPattern> {
    if grid.is_empty() {
        return Err(Error::Config("empty screen grid".into()));
    }
    if grid
        .windows(2)
        .any(|w| w[0].is_nan() || w[1].is_nan() || w[1] <= w[0])
    {
        return Err(Error::Config(
            "screen grid must be strictly increasing".into(),
        ));
    }
    let amps = PathAmplitudes::new(params, geom)?;
    let n = grid.len();
    let mut out = ScreenPattern {
        grid: grid.to_vec(),
        q,
        i4: Vec::with_capacity(n),
        i2: Vec::with_capacity(n),
        i2_prime: Vec::with_capacity(n),
        ir: Vec::with_capacity(n),
        vis: Vec::with_capacity(n),
        excluded: Vec::new(),
    };
    for (i, &r) in grid.iter().enumerate() {
        let [uu, dd, ud, du] = amps.at(ScreenPoint { r, q });
        let i2 = (uu + dd).norm_sqr();
        out.i4.push((uu + dd + ud + du).norm_sqr());
        out.i2.push(i2);
        out.i2_prime.push((ud + du).norm_sqr());
        let f = uu.norm_sqr() + dd.norm_sqr();
        if f > 0.0 && f.is_finite() {
            out.ir.push(i2 / f);
            out.vis.push((2.0 * uu.norm() * dd.norm() / f).min(1.0));
        } else {
            out.ir.push(0.0);
            out.vis.push(0.0);
            out.excluded.push(i);
        }
    }
    Ok(out)
}

/// `n` evenly spaced samples over `[lo, hi]`.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..n)
            .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
            .collect(),
    }
}

/// `sech(2 D r / B^2)` for a same-slit wavepacket of a symmetric double slit.
pub fn visibility_closed(wp_uu: &SlitWavepacket, r: f64) -> f64 {
    1.0 / (2.0 * wp_uu.separation * r / (wp_uu.b * wp_uu.b)).cosh()
}

/// Non-Gouy phase of `Psi_uu - Psi_dd` at `q = 0` as a quadratic in `r`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseDifference {
    /// `k0 (1/R+1 - 1/R+2)`
    pub quadratic: f64,
    /// `Delta_uu - Delta_dd`
    pub linear: f64,
    /// `theta_uu - theta_dd`
    pub constant: f64,
    /// `k0 (1/R+1 - 1/R-2)`, the mixed-sector curvature pairing.
    pub quadratic_mixed: f64,
    /// `zeta_uu - zeta_dd`
    pub gouy: f64,
}

impl PhaseDifference {
    pub fn new(params: &SourceParams, geom: &SlitGeometry) -> Result<Self> {
        let uu = slit_wavepacket(params, geom, PathLabel::UU)?;
        let dd = slit_wavepacket(params, geom, PathLabel::DD)?;
        let k0 = params.k0();
        Ok(Self {
            quadratic: k0 * (uu.inv_r_plus - dd.inv_r_plus),
            linear: uu.delta - dd.delta,
            constant: uu.theta - dd.theta,
            quadratic_mixed: k0 * (uu.inv_r_plus - dd.inv_r_minus),
            gouy: uu.zeta_slit - dd.zeta_slit,
        })
    }

    pub fn eval(&self, r: f64) -> f64 {
        (self.quadratic * r + self.linear) * r + self.constant
    }

    pub fn eval_mixed(&self, r: f64) -> f64 {
        (self.quadratic_mixed * r + self.linear) * r + self.constant
    }
}

/// `phi_uu - phi_dd` at `(r, 0)`, excluding the Gouy phases.
pub fn phase_difference(params: &SourceParams, geom: &SlitGeometry, r: f64) -> Result<f64> {
    Ok(PhaseDifference::new(params, geom)?.eval(r))
}

/// `arccos((ir - 1)/vis)`.
pub fn gouy_difference_extract(ir: f64, vis: f64) -> Result<f64> {
    if vis.is_nan() || vis <= 0.0 {
        return Err(Error::Domain {
            name: "visibility",
            requirement: "positive",
            value: vis,
        });
    }
    let x = (ir - 1.0) / vis;
    if !x.is_finite() || x.abs() > 1.0 + ARCCOS_SLACK {
        return Err(Error::ConstraintViolated(x));
    }
    Ok(x.clamp(-1.0, 1.0).acos())
}

/// Where to look for points with `phi_uu - phi_dd = n pi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasurementSearch {
    /// Fixed even `n`; `None` scans every nonzero even `n` reachable in the bracket.
    pub n: Option<i32>,
    pub bracket: (f64, f64),
    /// Among all roots, the one nearest this position is chosen.
    pub target_r: f64,
    pub samples: usize,
}

impl Default for MeasurementSearch {
    fn default() -> Self {
        Self {
            n: None,
            bracket: (-0.5e-3, 0.5e-3),
            target_r: -0.12e-3,
            samples: 4000,
        }
    }
}

/// One row of the Gouy-phase-difference table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GouyMeasurement {
    pub r_star: f64,
    pub beta1: f64,
    pub n: i32,
    /// `arccos((Ir - 1)/nu)` at `r_star`.
    pub gouy_diff: f64,
    /// `(gouy_diff - 0.48)/0.16` when non-negative.
    pub e_n_linear: Option<f64>,
    /// `|zeta_uu - zeta_dd|` from the wavepackets directly.
    pub gouy_diff_exact: f64,
    pub ir: f64,
    pub vis: f64,
    /// `|phi(r_star) - n pi|`
    pub phase_residual: f64,
}

pub fn linear_negativity(gouy_diff: f64) -> Option<f64> {
    let e = (gouy_diff - LINEAR_OFFSET) / LINEAR_SLOPE;
    (e >= 0.0).then_some(e)
}

pub fn find_measurement_point(
    params: &SourceParams,
    geom: &SlitGeometry,
    search: &MeasurementSearch,
) -> Result<GouyMeasurement> {
    if let Some(n) = search.n {
        if n % 2 != 0 {
            return Err(Error::Config(format!("n must be even, got {n}")));
        }
    }
    let (lo, hi) = search.bracket;
    if hi.is_nan() || lo.is_nan() || hi <= lo {
        return Err(Error::Config(
            "measurement bracket must satisfy lo < hi".into(),
        ));
    }
    let phase = PhaseDifference::new(params, geom)?;
    let samples = search.samples.max(16);
    let sampled: Vec<f64> = (0..=samples)
        .map(|i| phase.eval(lo + (hi - lo) * i as f64 / samples as f64))
        .collect();
    let phi_min = sampled.iter().cloned().fold(f64::INFINITY, f64::min);
    let phi_max = sampled.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let pi = std::f64::consts::PI;
    let candidates: Vec<i32> = match search.n {
        Some(n) => vec![n],
        None => {
            let first = (phi_min / pi).ceil() as i32;
            let last = (phi_max / pi).floor() as i32;
            (first..=last).filter(|n| n % 2 == 0 && *n != 0).collect()
        }
    };
    let mut best: Option<(f64, i32)> = None;
    for n in candidates {
        let target = n as f64 * pi;
        let roots = bracketed_roots(|r| phase.eval(r) - target, lo, hi, samples, 1e-18)?;
        for r in roots {
            let closer =
                best.is_none_or(|(b, _)| (r - search.target_r).abs() < (b - search.target_r).abs());
            if closer {
                best = Some((r, n));
            }
        }
    }
    let (r_star, n) = best.ok_or(Error::NoRoot {
        lo,
        hi,
        phi_min,
        phi_max,
    })?;
    let uu = slit_wavepacket(params, geom, PathLabel::UU)?;
    let dd = slit_wavepacket(params, geom, PathLabel::DD)?;
    let (a, b) = (uu.amplitude(r_star, 0.0), dd.amplitude(r_star, 0.0));
    let f = a.norm_sqr() + b.norm_sqr();
    let ir = (a + b).norm_sqr() / f;
    let vis = 2.0 * a.norm() * b.norm() / f;
    let gouy_diff = gouy_difference_extract(ir, vis)?;
    Ok(GouyMeasurement {
        r_star,
        beta1: geom.beta1,
        n,
        gouy_diff,
        e_n_linear: linear_negativity(gouy_diff),
        gouy_diff_exact: (uu.zeta_slit - dd.zeta_slit).abs(),
        ir,
        vis,
        phase_residual: (phase.eval(r_star) - n as f64 * pi).abs(),
    })
}

/// Indices of strict local maxima of a sampled curve.
pub fn local_maxima(values: &[f64]) -> Vec<usize> {
    (1..values.len().saturating_sub(1))
        .filter(|&i| values[i] > values[i - 1] && values[i] >= values[i + 1])
        .collect()
}
