//! Thin CLI over the library driver: load a manifest (or build one from
//! flags), run the requested suite, print the summary, and exit 0 when every
//! check holds, 1 on any violated verdict, 2 on invalid input.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use carnot_ineq::driver::{run_suite, DriverError, GroupSource, RunManifest, Suite};

#[derive(Parser, Debug)]
#[command(
    name = "carnot-ineq",
    about = "Verify sharp Hardy/Rellich-type inequalities on Carnot groups",
    long_about = None
)]
struct Cli {
    /// JSON run manifest; flags below override its fields.
    #[arg(long)]
    manifest: Option<PathBuf>,

    /// Group spec JSON file, e.g. {"kind": "heisenberg", "n": 1}.
    #[arg(long)]
    group: Option<PathBuf>,

    /// Suite to run.
    #[arg(long, value_enum)]
    suite: Option<Suite>,

    /// RNG seed; identical seeds give byte-identical reports.
    #[arg(long)]
    seed: Option<u64>,

    /// Monte Carlo samples per shell.
    #[arg(long)]
    samples: Option<u64>,

    /// Number of norm shells.
    #[arg(long)]
    shells: Option<u32>,

    /// Random-bump battery size.
    #[arg(long)]
    battery: Option<usize>,

    /// Output directory for report.csv / report.json.
    #[arg(long)]
    out: Option<PathBuf>,

    /// Comma-separated α grid.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    alpha: Option<Vec<f64>>,

    /// Comma-separated γ grid.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    gamma: Option<Vec<f64>>,

    /// Comma-separated s grid.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    s: Option<Vec<f64>>,

    /// Comma-separated q grid.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    q: Option<Vec<f64>>,

    /// Comma-separated ε ladder for sharpness sweeps.
    #[arg(long, value_delimiter = ',')]
    eps: Option<Vec<f64>>,
}

fn build_manifest(cli: Cli) -> Result<RunManifest, String> {
    let mut manifest: RunManifest = match &cli.manifest {
        Some(path) => {
            let text =
                std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
            serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))?
        }
        None => {
            let group = cli
                .group
                .clone()
                .ok_or("either --manifest or --group is required")?;
            let suite = cli.suite.ok_or("either --manifest or --suite is required")?;
            serde_json::from_value(serde_json::json!({
                "group": group,
                "suite": suite,
            }))
            .map_err(|e| e.to_string())?
        }
    };
    if let Some(group) = cli.group {
        manifest.group = GroupSource::Path(group);
    }
    if let Some(suite) = cli.suite {
        manifest.suite = suite;
    }
    if let Some(seed) = cli.seed {
        manifest.seed = seed;
    }
    if cli.samples.is_some() {
        manifest.samples = cli.samples;
    }
    if cli.shells.is_some() {
        manifest.shells = cli.shells;
    }
    if cli.battery.is_some() {
        manifest.battery = cli.battery;
    }
    if let Some(out) = cli.out {
        manifest.out = out;
    }
    if let Some(alpha) = cli.alpha {
        manifest.alpha = alpha;
    }
    if let Some(gamma) = cli.gamma {
        manifest.gamma = gamma;
    }
    if let Some(s) = cli.s {
        manifest.s = s;
    }
    if let Some(q) = cli.q {
        manifest.q = q;
    }
    if let Some(eps) = cli.eps {
        manifest.eps = eps;
    }
    Ok(manifest)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let manifest = match build_manifest(cli) {
        Ok(m) => m,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    match run_suite(&manifest) {
        Ok(output) => {
            let s = &output.summary;
            println!(
                "{} / {}: {} checks — {} holds, {} violated, {} inconclusive",
                s.group,
                s.suite.as_str(),
                s.checks,
                s.holds,
                s.violated,
                s.inconclusive
            );
            println!("wrote {}", output.csv_path.display());
            println!("wrote {}", output.json_path.display());
            if s.violated > 0 {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e @ DriverError::InvalidManifest(_)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
