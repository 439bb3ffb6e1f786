//! `bridgewobble`: reproducible analysis runs for the delayed footbridge
//! lateral-vibration oscillator. Every subcommand writes CSV/JSON artifacts
//! plus standalone SVG plots and a manifest describing the run.

mod commands;
mod output;
mod svg;

use clap::{Parser, Subcommand, ValueEnum};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "bridgewobble",
    version,
    about = "Stability charts, Hopf/double-Hopf analysis and direct simulation \
             of the delayed footbridge oscillator"
)]
struct Cli {
    /// Scenario JSON: inline `{"alpha2":..,"kappa":..,"k3":..,"tau":..}`,
    /// the physical parameter block, or `@path/to/file.json`.
    #[arg(long, global = true)]
    scenario: Option<String>,

    /// Output directory for CSV/JSON/SVG artifacts.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,

    /// Tabular output format (reports are always JSON).
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,

    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Cmd {
    /// Classify the (alpha2, alpha3) plane, or one point at a given delay.
    Stability {
        #[arg(long)]
        alpha2: Option<f64>,
        #[arg(long)]
        alpha3: Option<f64>,
        #[arg(long)]
        tau: Option<f64>,
        /// Grid over alpha2 as lo:hi:count (used when no single point given).
        #[arg(long, default_value = "0.025:2.0:80")]
        alpha2_range: String,
        /// Grid over alpha3 as lo:hi:count.
        #[arg(long, default_value = "0.025:3.0:120")]
        alpha3_range: String,
    },
    /// Critical-delay curves tau_j^{+/-}(alpha3) at fixed alpha2, with the
    /// located double-Hopf intersections.
    CriticalDelays {
        #[arg(long)]
        alpha2: f64,
        /// alpha3 sampling as lo:hi:count; lo defaults to just above alpha2.
        #[arg(long)]
        alpha3_range: Option<String>,
        #[arg(long, default_value_t = 6)]
        j_max: usize,
        #[arg(long, default_value_t = 40.0)]
        tau_cap: f64,
    },
    /// Hopf normal form at tau_j^{+/-} (or at the resonant delay 2 pi j with
    /// the gain detuning as parameter), with the amplitude law.
    Hopf {
        #[arg(long)]
        alpha2: Option<f64>,
        /// Linear gain; sets kappa = alpha3 / k3.
        #[arg(long)]
        alpha3: Option<f64>,
        #[arg(long)]
        kappa: Option<f64>,
        #[arg(long)]
        k3: Option<f64>,
        /// plus | minus | resonant
        #[arg(long)]
        branch: String,
        #[arg(long, default_value_t = 0)]
        j: usize,
        /// Evaluate the cycle prediction at this detuning.
        #[arg(long)]
        mu: Option<f64>,
        /// Half-width of the amplitude-curve sweep (defaults to the trust radius).
        #[arg(long)]
        mu_max: Option<f64>,
        #[arg(long, default_value_t = 60)]
        samples: usize,
    },
    /// Locate tau_k^+ = tau_l^- and emit the full unfolding record with all
    /// consistency checks, plus the sigma-plane region map.
    DoubleHopf {
        #[arg(long)]
        alpha2: f64,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        l: usize,
        /// alpha3 bracket as lo:hi (defaults to a scan of (alpha2, alpha2+5]).
        #[arg(long)]
        bracket: Option<String>,
    },
    /// Integrate the full nonlinear delay equation and measure the response.
    Simulate {
        #[arg(long)]
        tau: Option<f64>,
        #[arg(long)]
        duration: Option<f64>,
        #[arg(long)]
        step: Option<f64>,
        #[arg(long)]
        transient: Option<f64>,
        /// Sinusoidal history seed amplitude.
        #[arg(long, default_value_t = 0.05)]
        seed_amplitude: f64,
        /// Sinusoidal history seed frequency (defaults to the crossing
        /// frequency of the scenario, or 1).
        #[arg(long)]
        seed_omega: Option<f64>,
        /// Keep every n-th sample in the trajectory CSV.
        #[arg(long, default_value_t = 1)]
        stride: usize,
    },
    /// Run a family of simulations in parallel over one swept parameter.
    Sweep {
        /// tau | alpha3 | kappa
        #[arg(long)]
        param: String,
        /// Comma-separated values, or lo:hi:count.
        #[arg(long)]
        values: String,
        /// Run length in cycles of the seed frequency.
        #[arg(long, default_value_t = 400.0)]
        cycles: f64,
        #[arg(long, default_value_t = 0.05)]
        seed_amplitude: f64,
        #[arg(long)]
        seed_omega: Option<f64>,
        /// Also write one trajectory CSV per run.
        #[arg(long, default_value_t = false)]
        save_trajectories: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();

    // BRIDGEWOBBLE_THREADS caps worker parallelism for grid/sweep commands.
    if let Ok(n) = std::env::var("BRIDGEWOBBLE_THREADS") {
        if let Ok(n) = n.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
        }
    }

    let result = match cli.cmd {
        Cmd::Stability { alpha2, alpha3, tau, ref alpha2_range, ref alpha3_range } => {
            commands::stability(&cli, alpha2, alpha3, tau, alpha2_range, alpha3_range)
        }
        Cmd::CriticalDelays { alpha2, ref alpha3_range, j_max, tau_cap } => {
            commands::critical_delays(&cli, alpha2, alpha3_range.as_deref(), j_max, tau_cap)
        }
        Cmd::Hopf { alpha2, alpha3, kappa, k3, ref branch, j, mu, mu_max, samples } => {
            commands::hopf(&cli, alpha2, alpha3, kappa, k3, branch, j, mu, mu_max, samples)
        }
        Cmd::DoubleHopf { alpha2, k, l, ref bracket } => {
            commands::double_hopf(&cli, alpha2, k, l, bracket.as_deref())
        }
        Cmd::Simulate {
            tau,
            duration,
            step,
            transient,
            seed_amplitude,
            seed_omega,
            stride,
        } => commands::simulate(
            &cli,
            tau,
            duration,
            step,
            transient,
            seed_amplitude,
            seed_omega,
            stride,
        ),
        Cmd::Sweep {
            ref param,
            ref values,
            cycles,
            seed_amplitude,
            seed_omega,
            save_trajectories,
        } => commands::sweep(
            &cli,
            param,
            values,
            cycles,
            seed_amplitude,
            seed_omega,
            save_trajectories,
        ),
    };

    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

/// Parse `lo:hi:count` into a sample vector (endpoints included).
pub fn parse_range(spec: &str) -> Result<Vec<f64>, String> {
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 3 {
        return Err(format!("range '{spec}' must be lo:hi:count"));
    }
    let lo: f64 = parts[0].parse().map_err(|e| format!("range lo: {e}"))?;
    let hi: f64 = parts[1].parse().map_err(|e| format!("range hi: {e}"))?;
    let n: usize = parts[2].parse().map_err(|e| format!("range count: {e}"))?;
    if n < 2 || !(hi > lo) {
        return Err(format!("range '{spec}' needs hi > lo and count >= 2"));
    }
    Ok((0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect())
}

/// Comma list or lo:hi:count.
pub fn parse_values(spec: &str) -> Result<Vec<f64>, String> {
    if spec.contains(':') {
        return parse_range(spec);
    }
    spec.split(',')
        .map(|s| s.trim().parse::<f64>().map_err(|e| format!("value '{s}': {e}")))
        .collect()
}
