//! Command-line front end: one verb per observable, plus built-in scenarios
//! and parameter sweeps.

use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use biphoton::entanglement::{
    covariance_from_wavepacket, log_negativity_closed_form, symplectic_spectrum,
};
use biphoton::experiments::{
    self, describe, emit, negativity_uu, path_correlation, render, run_scenario, table1_rows,
    OutputFormat, ResultSet, Scenario, ScenarioId, Sweep, SweepVariable,
};
use biphoton::interference::{linspace, screen_pattern, visibility_closed, MeasurementSearch};
use biphoton::propagation::{free_state, slit_wavepacket, PathLabel};
use biphoton::units::parse_length;
use biphoton::{Config, Error, Result, ScaleConstants};

#[derive(Parser)]
#[command(name = "biphoton", version, about = "Biphoton double-slit simulator")]
struct Cli {
    /// JSON configuration with unit-suffixed lengths.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output file; stdout when omitted.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Sample count of the main axis.
    #[arg(long, global = true)]
    grid: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
    Svg,
}

impl From<Format> for OutputFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Csv => OutputFormat::Csv,
            Format::Json => OutputFormat::Json,
            Format::Svg => OutputFormat::Svg,
        }
    }
}

#[derive(Args)]
struct Range {
    /// Lower end of the screen range, e.g. -4mm.
    #[arg(long, allow_hyphen_values = true)]
    from: Option<String>,
    /// Upper end of the screen range, e.g. 4mm.
    #[arg(long, allow_hyphen_values = true)]
    to: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Gouy phases of the same-slit paths and their difference.
    Gouy,
    /// Logarithmic negativity of the path through slit 1.
    Negativity,
    /// Screen intensities along r at fixed q.
    Pattern {
        #[command(flatten)]
        range: Range,
        /// Relative coordinate of the slice.
        #[arg(long, default_value = "0m", allow_hyphen_values = true)]
        q: String,
    },
    /// Fringe visibility along r at q = 0.
    Visibility {
        #[command(flatten)]
        range: Range,
    },
    /// Position cross-correlations of every path.
    Correlations,
    /// Gouy phase difference measured at the phase-constraint points.
    Table1 {
        /// Fixed even n of the constraint; every even n is scanned otherwise.
        #[arg(long, allow_hyphen_values = true)]
        n: Option<i32>,
        /// Root selection target, e.g. -0.12mm.
        #[arg(long, allow_hyphen_values = true)]
        target_r: Option<String>,
    },
    /// Run a built-in scenario.
    Scenario {
        /// fig2-top, fig2-bottom, fig3 to fig9, table1 or custom.
        id: String,
    },
    /// Sweep one parameter of the configuration.
    Sweep {
        /// z, z_tau, d, beta, beta1, beta2, sigma, lambda or omega_over_sigma.
        #[arg(long)]
        var: String,
        /// First value, a length such as 10um except for omega_over_sigma.
        #[arg(long, allow_hyphen_values = true)]
        from: String,
        /// Last value.
        #[arg(long, allow_hyphen_values = true)]
        to: String,
        /// Number of points.
        #[arg(long, default_value_t = 51)]
        count: usize,
    },
}

const MM: f64 = 1e-3;

fn config(cli: &Cli) -> Result<Config> {
    match &cli.config {
        Some(path) => Config::load(path),
        None => Ok(Config::reference()),
    }
}

fn grid(cli: &Cli, default: usize) -> Result<usize> {
    match cli.grid {
        Some(n) if n < 2 => Err(Error::Config(format!("grid must be at least 2, got {n}"))),
        Some(n) => Ok(n),
        None => Ok(default),
    }
}

fn screen_range(range: &Range, default_mm: f64) -> Result<(f64, f64)> {
    let lo = range.from.as_deref().map(parse_length).transpose()?;
    let hi = range.to.as_deref().map(parse_length).transpose()?;
    let (lo, hi) = (
        lo.unwrap_or(-default_mm * MM),
        hi.unwrap_or(default_mm * MM),
    );
    if hi.is_nan() || lo.is_nan() || hi <= lo {
        return Err(Error::Config("screen range must satisfy from < to".into()));
    }
    Ok((lo, hi))
}

fn header(name: &str, cfg: &Config) -> ResultSet {
    let mut rs = ResultSet::new();
    describe(&mut rs, name, &cfg.source, &cfg.geometry);
    rs
}

fn sweep_value(var: SweepVariable, text: &str) -> Result<f64> {
    if var.is_length() {
        parse_length(text)
    } else {
        text.trim()
            .parse()
            .map_err(|_| Error::Config(format!("not a number: {text:?}")))
    }
}

fn run(cli: &Cli) -> Result<ResultSet> {
    let cfg = config(cli)?;
    let (p, g) = (&cfg.source, &cfg.geometry);
    match &cli.command {
        Command::Gouy => {
            let uu = slit_wavepacket(p, g, PathLabel::UU)?;
            let dd = slit_wavepacket(p, g, PathLabel::DD)?;
            let mut rs = header("gouy", &cfg);
            rs.push(
                "zeta_free_at_slits_rad",
                vec![free_state(p, g.z)?.zeta_free],
            )
            .push("zeta_uu_rad", vec![uu.zeta_slit])
            .push("zeta_dd_rad", vec![dd.zeta_slit])
            .push("gouy_diff_rad", vec![(uu.zeta_slit - dd.zeta_slit).abs()]);
            Ok(rs)
        }
        Command::Negativity => {
            let sym = biphoton::SlitGeometry {
                beta2: g.beta1,
                ..*g
            };
            let wp = slit_wavepacket(p, &sym, PathLabel::UU)?;
            let scales = ScaleConstants::default();
            let m = covariance_from_wavepacket(&wp, scales)?;
            let spec = symplectic_spectrum(&m, true)?;
            let closed = log_negativity_closed_form(&wp, scales)?;
            let mut rs = header("negativity", &cfg);
            rs.push("e_n", vec![negativity_uu(p, g)?])
                .push("nu_min_pt", vec![spec.nu_min])
                .push("e_n_closed_form", vec![closed.value.unwrap_or(f64::NAN)]);
            rs.meta("closed_form_agrees", closed.agrees);
            Ok(rs)
        }
        Command::Pattern { range, q } => {
            let (lo, hi) = screen_range(range, 4.0)?;
            let q = parse_length(q)?;
            let r = linspace(lo, hi, grid(cli, 2001)?);
            let pat = screen_pattern(p, g, &r, q)?;
            let mut rs = header("pattern", &cfg);
            rs.meta("q_m", experiments::output::format_value(q));
            rs.push("r_mm", r.iter().map(|v| v / MM).collect())
                .push("i4", pat.i4)
                .push("i2", pat.i2)
                .push("i2p", pat.i2_prime)
                .push("ir", pat.ir)
                .push("vis", pat.vis);
            Ok(rs)
        }
        Command::Visibility { range } => {
            let (lo, hi) = screen_range(range, 1.0)?;
            let r = linspace(lo, hi, grid(cli, 2001)?);
            let pat = screen_pattern(p, g, &r, 0.0)?;
            let closed: Vec<f64> = if g.is_symmetric() {
                let uu = slit_wavepacket(p, g, PathLabel::UU)?;
                r.iter().map(|&x| visibility_closed(&uu, x)).collect()
            } else {
                vec![f64::NAN; r.len()]
            };
            let mut rs = header("visibility", &cfg);
            rs.push("r_mm", r.iter().map(|v| v / MM).collect())
                .push("vis", pat.vis)
                .push("vis_closed", closed);
            Ok(rs)
        }
        Command::Correlations => {
            let mut rs = header("correlations", &cfg);
            for path in PathLabel::ALL {
                rs.push(format!("rho_{path}"), vec![path_correlation(p, g, path)?]);
            }
            rs.push(
                "rho_free",
                vec![biphoton::entanglement::free_cross_correlation(
                    p,
                    g.z + g.z_tau,
                )],
            );
            Ok(rs)
        }
        Command::Table1 { n, target_r } => {
            let mut search = MeasurementSearch {
                n: *n,
                ..MeasurementSearch::default()
            };
            if let Some(t) = target_r {
                search.target_r = parse_length(t)?;
            }
            let mut rs = header("table1", &cfg);
            table1_rows(p, g, &search, &mut rs)?;
            Ok(rs)
        }
        Command::Scenario { id } => {
            let id: ScenarioId = id.parse()?;
            let s = if id == ScenarioId::Custom {
                Scenario::custom(&cfg, None)
            } else {
                Scenario::builtin(id)
            };
            run_scenario(&s.with_grid(cli.grid))
        }
        Command::Sweep {
            var,
            from,
            to,
            count,
        } => {
            let var: SweepVariable = var.parse()?;
            let sweep = Sweep::new(var, sweep_value(var, from)?, sweep_value(var, to)?, *count)?;
            run_scenario(&Scenario::custom(&cfg, Some(sweep)))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = OutputFormat::from(cli.format);
    let result = run(&cli).and_then(|rs| match &cli.out {
        Some(path) => emit(&rs, format, path),
        None => {
            let text = render(&rs, format)?;
            std::io::stdout()
                .write_all(text.as_bytes())
                .map_err(|e| Error::Io {
                    path: PathBuf::from("<stdout>"),
                    source: e,
                })
        }
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
