//! The `pihl` command line: bound reports, figure data, scaling sweeps and
//! small numerical experiments built on `pihl-core`.

use std::f64::consts::PI;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use pihl_core::bounds::{
    self, crossover, frequency_bound, well_ground_state, BoundInputs, BoundParams, BoundReport,
    GeneratorSpectrum, WellGroundState, R_EPSILON_CAP,
};
use pihl_core::estimation::{
    self, covariant_mse, noon_state, optimal_probe, sample_outcomes, scaling_sweep, sine_state,
    uniform_state, ProbeState,
};
use pihl_core::numerics::QuadratureSpec;
use pihl_core::priors::{
    kaiser_normalization, kaiser_normalization_leading, kaiser_normalization_series, PriorSpec,
};

pub mod checks;
pub mod nlist;
pub mod output;

use output::{check_dir, emit, fmt_num, fmt_opt, write_atomic, Table};

/// Environment variable overriding the default quadrature tolerance.
pub const QUAD_TOL_ENV: &str = "PI_HL_QUAD_TOL";

#[derive(Debug, Parser)]
#[command(name = "pihl", version, about = "Heisenberg-limit bounds and phase-estimation experiments")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Every lower bound for n uses of the gate and a prior cell of width delta.
    Bound(BoundArgs),
    /// Write the data and gnuplot scripts for the three supplementary figures.
    Figures(FiguresArgs),
    /// Optimal covariant cost against n, with the asymptotic lower bound.
    Scaling(ScalingArgs),
    /// Sample a prior density and report its mass and tail diagnostics.
    Prior(PriorArgs),
    /// Finite-difference ground state of an infinite well.
    Well(WellArgs),
    /// Asymptotic bound on frequency estimation over total time T.
    Freq(FreqArgs),
    /// Covariant cost of one probe state, optionally checked by sampling.
    Probe(ProbeArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Output file; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct SpectrumArgs {
    /// λ₊ − λ₋, with the spectrum centred on zero.
    #[arg(long, conflicts_with_all = ["lambda_minus", "lambda_plus"])]
    pub lambda_span: Option<f64>,
    #[arg(long, requires = "lambda_plus", allow_hyphen_values = true)]
    pub lambda_minus: Option<f64>,
    #[arg(long, requires = "lambda_minus", allow_hyphen_values = true)]
    pub lambda_plus: Option<f64>,
}

impl SpectrumArgs {
    /// Unit span when nothing is given.
    pub fn resolve(&self) -> Result<GeneratorSpectrum> {
        Ok(match (self.lambda_span, self.lambda_minus, self.lambda_plus) {
            (Some(span), _, _) => GeneratorSpectrum::with_span(span)?,
            (None, Some(lo), Some(hi)) => GeneratorSpectrum::new(lo, hi)?,
            _ => GeneratorSpectrum::with_span(1.0)?,
        })
    }
}

#[derive(Debug, Args)]
pub struct BoundArgs {
    /// Number of uses of the phase gate.
    #[arg(long)]
    pub n: u64,
    /// Repetitions entering the conventional limit.
    #[arg(long, default_value_t = 1)]
    pub k: u64,
    /// Width of the rectangular prior, in radians.
    #[arg(long)]
    pub delta: f64,
    /// Kaiser parameter; defaults to ln(N·δ)/4.
    #[arg(long, requires = "bandwidth")]
    pub alpha: Option<f64>,
    /// Kaiser bandwidth L; defaults to √(8αN/δ).
    #[arg(long, requires = "alpha")]
    pub bandwidth: Option<f64>,
    #[command(flatten)]
    pub spectrum: SpectrumArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct FiguresArgs {
    /// Existing directory receiving the CSV files and plot scripts.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct ScalingArgs {
    /// Probe sizes, e.g. `10..200:10,300`.
    #[arg(long, value_parser = parse_n_list)]
    pub n: NList,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NList(pub Vec<usize>);

fn parse_n_list(text: &str) -> Result<NList, nlist::ParseNListError> {
    nlist::parse_n_values(text).map(NList)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PriorKind {
    Rect,
    Comb,
    Kaiser,
    Smeared,
}

#[derive(Debug, Args)]
pub struct PriorArgs {
    #[arg(long, value_enum, required_unless_present = "prior_json", conflicts_with = "prior_json")]
    pub kind: Option<PriorKind>,
    /// File holding a JSON prior, e.g. {"kind": "kaiser", "alpha": 2, "L": 8}.
    #[arg(long)]
    pub prior_json: Option<PathBuf>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub bandwidth: Option<f64>,
    #[arg(long)]
    pub delta: Option<f64>,
    /// Centre of a rectangular prior.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub center: f64,
    /// Number of density samples.
    #[arg(long, default_value_t = 401)]
    pub points: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct WellArgs {
    #[arg(long)]
    pub width: f64,
    /// Grid nodes including both walls.
    #[arg(long, default_value_t = 4000)]
    pub points: usize,
    /// Also write the ground-state profile to this CSV file.
    #[arg(long)]
    pub profile: Option<PathBuf>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct FreqArgs {
    /// Total sensing time T.
    #[arg(long, allow_hyphen_values = true)]
    pub time: f64,
    #[command(flatten)]
    pub spectrum: SpectrumArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ProbeKind {
    Optimal,
    Sine,
    Noon,
    Uniform,
}

#[derive(Debug, Args)]
pub struct ProbeArgs {
    #[arg(long, required_unless_present = "state", conflicts_with = "state")]
    pub n: Option<usize>,
    #[arg(long, value_enum, default_value_t = ProbeKind::Optimal, conflicts_with = "state")]
    pub kind: ProbeKind,
    /// File holding a probe state as JSON {"n": ..., "re": [...], "im": [...]}.
    #[arg(long)]
    pub state: Option<PathBuf>,
    /// Write the probe state as JSON to this file.
    #[arg(long)]
    pub save_state: Option<PathBuf>,
    /// Monte-Carlo draws used to check the analytic cost.
    #[arg(long, requires = "seed")]
    pub samples: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[command(flatten)]
    pub output: OutputArgs,
}

/// Quadrature settings, honouring [`QUAD_TOL_ENV`].
pub fn quad_spec() -> Result<QuadratureSpec> {
    match std::env::var(QUAD_TOL_ENV) {
        Ok(text) => {
            let tol: f64 = text
                .trim()
                .parse()
                .with_context(|| format!("{QUAD_TOL_ENV}={text:?} is not a number"))?;
            QuadratureSpec::with_tolerance(tol).with_context(|| format!("bad {QUAD_TOL_ENV}"))
        }
        Err(std::env::VarError::NotPresent) => Ok(QuadratureSpec::default()),
        Err(e) => Err(e).context(QUAD_TOL_ENV),
    }
}

pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Bound(a) => cmd_bound(&a),
        Command::Figures(a) => cmd_figures(&a),
        Command::Scaling(a) => cmd_scaling(&a),
        Command::Prior(a) => cmd_prior(&a),
        Command::Well(a) => cmd_well(&a),
        Command::Freq(a) => cmd_freq(&a),
        Command::Probe(a) => cmd_probe(&a),
    }
}

const BOUND_COLUMNS: [&str; 10] = [
    "bound_bandlimited",
    "bound1_raw",
    "bound2",
    "conventional_hl",
    "pi_hl",
    "alpha",
    "L",
    "epsilon",
    "N",
    "delta",
];

pub fn cmd_bound(a: &BoundArgs) -> Result<()> {
    let spectrum = a.spectrum.resolve()?;
    let inputs = BoundInputs::from_uses(a.n, &spectrum, a.delta)?;
    let params = match (a.alpha, a.bandwidth) {
        (Some(alpha), Some(l)) => Some(BoundParams::new(alpha, l, &inputs)?),
        _ => None,
    };
    let r = BoundReport::compute(&inputs, params, a.k)?;

    if r.is_vacuous() {
        eprintln!("warning: bound vacuous below Nδ = {:.2}", crossover());
    }
    if r.bound1_raw.is_none() {
        eprintln!("warning: bound1 undefined, eps = {} exceeds 1/3", fmt_num(r.epsilon));
    }
    eprintln!("N = {}, delta = {}, N*delta = {}", fmt_num(r.n), fmt_num(r.delta), fmt_num(r.n * r.delta));
    let squared = [
        ("bandlimited", Some(r.bound_bandlimited)),
        ("bound1", r.bound1_clamped()),
        ("bound2", Some(r.bound2_clamped())),
    ];
    for (name, v) in squared {
        match v {
            Some(v) => eprintln!("  {name:<12} Δ²φ ≥ {:<20} Δφ ≥ {}", fmt_num(v), fmt_num(v.sqrt())),
            None => eprintln!("  {name:<12} undefined"),
        }
    }
    eprintln!("  {:<12} Δφ = {}", "HL", fmt_num(r.conventional_hl));
    eprintln!("  {:<12} Δφ = {}", "pi-HL", fmt_num(r.pi_hl));

    let text = match a.format {
        Format::Json => serde_json::to_string_pretty(&r)? + "\n",
        Format::Csv => {
            let mut t = Table::new(&BOUND_COLUMNS);
            t.row([
                fmt_num(r.bound_bandlimited),
                fmt_opt(r.bound1_raw),
                fmt_num(r.bound2),
                fmt_num(r.conventional_hl),
                fmt_num(r.pi_hl),
                fmt_num(r.alpha),
                fmt_num(r.bandwidth),
                fmt_num(r.epsilon),
                fmt_num(r.n),
                fmt_num(r.delta),
            ]);
            t.finish()
        }
    };
    emit(a.out.as_deref(), &text)
}

/// `α ∈ [1, 6]` in steps of 0.1.
pub fn nalpha_grid() -> Vec<f64> {
    (0..=50).map(|i| 1.0 + 0.1 * i as f64).collect()
}

/// 200 equally spaced points in `(0, 1/3]`.
pub fn repsilon_grid() -> Vec<f64> {
    (1..=200).map(|i| i as f64 / 600.0).collect()
}

/// 50 log-spaced points in `[30, 10⁶]`.
pub fn bound_grid() -> Vec<f64> {
    let (lo, hi) = (30f64.ln(), 1e6f64.ln());
    (0..50).map(|i| (lo + (hi - lo) * i as f64 / 49.0).exp()).collect()
}

pub fn figure_nalpha(spec: &QuadratureSpec) -> Result<String> {
    let mut t = Table::new(&["alpha", "ratio_asymptote", "ratio_series"]);
    for alpha in nalpha_grid() {
        let n = kaiser_normalization(alpha, spec)?;
        t.row([
            fmt_num(alpha),
            fmt_num(n / kaiser_normalization_leading(alpha)),
            fmt_num(n / kaiser_normalization_series(alpha)),
        ]);
    }
    Ok(t.finish())
}

pub fn figure_repsilon() -> Result<String> {
    let mut t = Table::new(&["eps", "r_over_eps2", "cap"]);
    for eps in repsilon_grid() {
        t.row([
            fmt_num(eps),
            fmt_num(bounds::r_epsilon(eps)? / (eps * eps)),
            fmt_num(R_EPSILON_CAP),
        ]);
    }
    Ok(t.finish())
}

/// Both bounds at `δ = 1`, scaled by `N²/π²`.
pub fn figure_bound() -> Result<String> {
    let mut t = Table::new(&["N_delta", "bound1_scaled", "bound2_scaled"]);
    for nd in bound_grid() {
        let inputs = BoundInputs::new(nd, 1.0)?;
        let params = bounds::default_params(&inputs)?;
        let scale = nd * nd / (PI * PI);
        t.row([
            fmt_num(nd),
            fmt_num(bounds::bound1(&inputs, &params)? * scale),
            fmt_num(bounds::bound2(&inputs)? * scale),
        ]);
    }
    Ok(t.finish())
}

fn plot_script(csv: &str, xlabel: &str, logx: bool, series: &[(usize, &str)], extra: &str) -> String {
    let mut s = String::from("set datafile separator ','\nset key top right\n");
    s += &format!("set xlabel '{xlabel}'\n");
    if logx {
        s += "set logscale x\n";
    }
    s += extra;
    let curves: Vec<String> = series
        .iter()
        .enumerate()
        .map(|(i, (col, title))| {
            let file = if i == 0 { format!("'{csv}'") } else { "''".into() };
            format!("{file} using 1:{col} skip 1 with lines title '{title}'")
        })
        .collect();
    s += &format!("plot {}\n", curves.join(", \\\n     "));
    s
}

pub fn cmd_figures(a: &FiguresArgs) -> Result<()> {
    check_dir(&a.out)?;
    let spec = quad_spec()?;
    let files = [
        (
            "fig_nalpha",
            figure_nalpha(&spec)?,
            plot_script(
                "fig_nalpha.csv",
                "alpha",
                false,
                &[(2, "N_alpha / leading asymptote"), (3, "N_alpha / series")],
                "",
            ),
        ),
        (
            "fig_repsilon",
            figure_repsilon()?,
            plot_script(
                "fig_repsilon.csv",
                "epsilon",
                false,
                &[(2, "R(eps)/eps^2"), (3, "1.52661")],
                "",
            ),
        ),
        (
            "fig_bound",
            figure_bound()?,
            plot_script(
                "fig_bound.csv",
                "N delta",
                true,
                &[(2, "bound1 N^2/pi^2"), (3, "bound2 N^2/pi^2")],
                "set yrange [0:1.05]\n",
            ),
        ),
    ];
    for (stem, csv, script) in files {
        let csv_path = a.out.join(format!("{stem}.csv"));
        let gp_path = a.out.join(format!("{stem}.gp"));
        write_atomic(&csv_path, &csv)?;
        write_atomic(&gp_path, &script)?;
        eprintln!("wrote {} and {}", csv_path.display(), gp_path.display());
    }
    Ok(())
}

#[derive(Serialize)]
struct ScalingRow<'a> {
    #[serde(flatten)]
    report: &'a estimation::MeasurementReport,
    sandwich_violation: bool,
}

pub fn cmd_scaling(a: &ScalingArgs) -> Result<()> {
    let rows = scaling_sweep(&a.n.0)?;
    let violations = rows.iter().filter(|r| r.sandwich_violation()).count();
    if violations > 0 {
        eprintln!("warning: {violations} rows where bound2 exceeds the optimal cost");
    }
    let text = match a.output.format {
        Format::Json => {
            let rows: Vec<_> = rows
                .iter()
                .map(|r| ScalingRow { report: r, sandwich_violation: r.sandwich_violation() })
                .collect();
            serde_json::to_string_pretty(&rows)? + "\n"
        }
        Format::Csv => {
            let mut t = Table::new(&["n", "mse", "rmse", "n_rmse", "bound2_delta1", "sandwich_violation"]);
            for r in &rows {
                t.row([
                    r.n.to_string(),
                    fmt_num(r.mse),
                    fmt_num(r.rmse),
                    fmt_num(r.n_rmse),
                    fmt_opt(r.bound2_delta1),
                    u8::from(r.sandwich_violation()).to_string(),
                ]);
            }
            t.finish()
        }
    };
    emit(a.output.out.as_deref(), &text)
}

fn need(name: &str, v: Option<f64>) -> Result<f64> {
    v.with_context(|| format!("--{name} is required for this prior"))
}

pub fn prior_spec_from_args(a: &PriorArgs) -> Result<PriorSpec> {
    if let Some(path) = &a.prior_json {
        let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
        return PriorSpec::from_json(&text).with_context(|| format!("in {}", path.display()));
    }
    Ok(match a.kind.expect("clap requires --kind without --prior-json") {
        PriorKind::Rect => PriorSpec::Rect { delta: need("delta", a.delta)?, center: a.center },
        PriorKind::Comb => bail!("comb priors take their weights from --prior-json"),
        PriorKind::Kaiser => PriorSpec::Kaiser {
            alpha: need("alpha", a.alpha)?,
            bandwidth: need("bandwidth", a.bandwidth)?,
        },
        PriorKind::Smeared => PriorSpec::Smeared {
            alpha: need("alpha", a.alpha)?,
            bandwidth: need("bandwidth", a.bandwidth)?,
            delta: need("delta", a.delta)?,
        },
    })
}

#[derive(Serialize)]
struct PriorSummary {
    prior: PriorSpec,
    samples: Vec<[f64; 2]>,
    total_mass: f64,
    tail_mass: f64,
    tail_bound: Option<f64>,
    bandwidth_excess: Option<f64>,
}

pub fn cmd_prior(a: &PriorArgs) -> Result<()> {
    if a.points < 2 {
        bail!("--points must be at least 2");
    }
    let spec = quad_spec()?;
    let prior_spec = prior_spec_from_args(a)?;
    let prior = prior_spec.build(&spec)?;
    let (lo, hi) = prior.plot_range();
    let samples = (0..a.points)
        .map(|i| {
            let phi = lo + (hi - lo) * i as f64 / (a.points - 1) as f64;
            prior.density(phi, &spec).map(|v| [phi, v])
        })
        .collect::<pihl_core::Result<Vec<_>>>()?;
    let summary = PriorSummary {
        prior: prior_spec,
        total_mass: prior.total_mass(&spec)?,
        tail_mass: prior.tail_mass(&spec)?,
        tail_bound: prior.tail_mass_bound(),
        bandwidth_excess: prior.bandwidth_excess(spec.abs_tol.min(1e-11))?,
        samples,
    };
    let text = match a.output.format {
        Format::Json => serde_json::to_string_pretty(&summary)? + "\n",
        Format::Csv => {
            let mut t = Table::new(&["record", "phi", "value"]);
            for [phi, v] in &summary.samples {
                t.row(["density".to_string(), fmt_num(*phi), fmt_num(*v)]);
            }
            t.row(["total_mass".into(), String::new(), fmt_num(summary.total_mass)]);
            t.row(["tail_mass".into(), String::new(), fmt_num(summary.tail_mass)]);
            t.row(["tail_bound".into(), String::new(), fmt_opt(summary.tail_bound)]);
            t.row(["bandwidth_excess".into(), String::new(), fmt_opt(summary.bandwidth_excess)]);
            t.finish()
        }
    };
    emit(a.output.out.as_deref(), &text)
}

#[derive(Debug, Clone, Serialize)]
pub struct WellReport {
    pub width: f64,
    pub points: usize,
    pub energy: f64,
    pub analytic: f64,
    pub relative_error: f64,
    /// Observed convergence order between this grid and one of twice the spacing.
    pub order: f64,
}

/// Solves on `points` nodes and on the grid with twice the spacing.
pub fn well_report(width: f64, points: usize) -> Result<(WellReport, WellGroundState)> {
    let fine = well_ground_state(width, points)?;
    let coarse_points = (points - 1) / 2 + 1;
    let coarse = well_ground_state(width, coarse_points)?;
    let analytic = WellGroundState::analytic_energy(width);
    let err_f = (fine.energy - analytic).abs();
    let err_c = (coarse.energy - analytic).abs();
    let order = (err_c / err_f).ln() / (coarse.spacing / fine.spacing).ln();
    let report = WellReport {
        width,
        points,
        energy: fine.energy,
        analytic,
        relative_error: err_f / analytic,
        order,
    };
    Ok((report, fine))
}

pub fn cmd_well(a: &WellArgs) -> Result<()> {
    if a.points < 19 {
        bail!("--points must be at least 19 so that the coarse grid has 10 nodes");
    }
    let (r, state) = well_report(a.width, a.points)?;
    if let Some(path) = &a.profile {
        let mut t = Table::new(&["mu", "profile", "sine"]);
        for (i, p) in state.profile.iter().enumerate() {
            let mu = i as f64 * state.spacing;
            t.row([fmt_num(mu), fmt_num(*p), fmt_num((PI * mu / a.width).sin())]);
        }
        write_atomic(path, &t.finish())?;
    }
    let text = match a.output.format {
        Format::Json => serde_json::to_string_pretty(&r)? + "\n",
        Format::Csv => {
            let mut t = Table::new(&["width", "points", "energy", "analytic", "relative_error", "order"]);
            t.row([
                fmt_num(r.width),
                r.points.to_string(),
                fmt_num(r.energy),
                fmt_num(r.analytic),
                fmt_num(r.relative_error),
                fmt_num(r.order),
            ]);
            t.finish()
        }
    };
    emit(a.output.out.as_deref(), &text)
}

#[derive(Serialize)]
struct FreqReport {
    time: f64,
    span: f64,
    delta_omega: f64,
}

pub fn cmd_freq(a: &FreqArgs) -> Result<()> {
    let spectrum = a.spectrum.resolve()?;
    let r = FreqReport {
        time: a.time,
        span: spectrum.span(),
        delta_omega: frequency_bound(a.time, &spectrum)?,
    };
    let text = match a.output.format {
        Format::Json => serde_json::to_string_pretty(&r)? + "\n",
        Format::Csv => {
            let mut t = Table::new(&["time", "span", "delta_omega"]);
            t.row([fmt_num(r.time), fmt_num(r.span), fmt_num(r.delta_omega)]);
            t.finish()
        }
    };
    emit(a.output.out.as_deref(), &text)
}

#[derive(Serialize)]
struct ProbeReport {
    n: usize,
    mse: f64,
    rmse: f64,
    n_rmse: f64,
    samples: Option<usize>,
    empirical_mse: Option<f64>,
    standard_error: Option<f64>,
}

fn load_state(path: &Path) -> Result<ProbeState> {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    ProbeState::from_json(&text).with_context(|| format!("in {}", path.display()))
}

pub fn cmd_probe(a: &ProbeArgs) -> Result<()> {
    let state = match (&a.state, a.n) {
        (Some(path), _) => load_state(path)?,
        (None, Some(n)) => match a.kind {
            ProbeKind::Optimal => optimal_probe(n)?.0,
            ProbeKind::Sine => sine_state(n)?,
            ProbeKind::Noon => noon_state(n)?,
            ProbeKind::Uniform => uniform_state(n)?,
        },
        (None, None) => bail!("give --n or --state"),
    };
    if let Some(path) = &a.save_state {
        write_atomic(path, &(state.to_json() + "\n"))?;
    }
    let mse = covariant_mse(&state);
    let n = state.n();
    let (mut empirical, mut stderr) = (None, None);
    if let Some(count) = a.samples {
        if count < 2 {
            bail!("--samples must be at least 2");
        }
        let seed = a.seed.expect("clap requires --seed with --samples");
        let sq: Vec<f64> = sample_outcomes(&state, 0.0, seed, count).iter().map(|x| x * x).collect();
        let mean = sq.iter().sum::<f64>() / count as f64;
        let var = sq.iter().map(|s| (s - mean).powi(2)).sum::<f64>() / (count - 1) as f64;
        empirical = Some(mean);
        stderr = Some((var / count as f64).sqrt());
    }
    let r = ProbeReport {
        n,
        mse,
        rmse: mse.sqrt(),
        n_rmse: n as f64 * mse.sqrt(),
        samples: a.samples,
        empirical_mse: empirical,
        standard_error: stderr,
    };
    let text = match a.output.format {
        Format::Json => serde_json::to_string_pretty(&r)? + "\n",
        Format::Csv => {
            let mut t = Table::new(&["n", "mse", "rmse", "n_rmse", "samples", "empirical_mse", "standard_error"]);
            t.row([
                r.n.to_string(),
                fmt_num(r.mse),
                fmt_num(r.rmse),
                fmt_num(r.n_rmse),
                r.samples.map(|s| s.to_string()).unwrap_or_default(),
                fmt_opt(r.empirical_mse),
                fmt_opt(r.standard_error),
            ]);
            t.finish()
        }
    };
    emit(a.output.out.as_deref(), &text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn cli_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn figure_grids() {
        let a = nalpha_grid();
        assert_eq!(a.len(), 51);
        assert!((a[50] - 6.0).abs() < 1e-12);
        let e = repsilon_grid();
        assert_eq!(e.len(), 200);
        assert_eq!(e[199], pihl_core::bounds::EPSILON_MAX);
        let b = bound_grid();
        assert_eq!(b.len(), 50);
        assert!((b[0] - 30.0).abs() < 1e-9 && (b[49] - 1e6).abs() < 1e-6);
    }

    #[test]
    fn spectrum_defaults_to_unit_span() {
        let s = SpectrumArgs { lambda_span: None, lambda_minus: None, lambda_plus: None };
        assert_eq!(s.resolve().unwrap().span(), 1.0);
        let s = SpectrumArgs { lambda_span: None, lambda_minus: Some(-1.0), lambda_plus: Some(2.0) };
        assert_eq!(s.resolve().unwrap().span(), 3.0);
    }
}
