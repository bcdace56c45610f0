//! Command-line runner for the mmplc experiment presets.
//!
//! Exit codes: 0 success, 1 invalid configuration, 2 guard refusal,
//! 3 tolerance-check failure under `--assert`.

use std::collections::HashMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use mmplc::harness::{run_experiment, ExperimentConfig, Preset, PRESET_NAMES};
use mmplc::Error as MmplcError;

#[derive(Parser)]
#[command(
    name = "mmplc",
    version,
    about = "Monte Carlo experiments on massive-MIMO physical-layer cryptosystems"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Default, clap::Args)]
struct ParamFlags {
    /// Flat key=value config file; command-line flags win over it
    #[arg(long)]
    config: Option<PathBuf>,
    /// Number of Monte Carlo trials
    #[arg(long)]
    trials: Option<usize>,
    /// Master seed; per-trial streams derive from it
    #[arg(long)]
    seed: Option<u64>,
    /// Square dimension n (rjj-histogram, lsv-law, advantage-sweep square part)
    #[arg(long)]
    n: Option<usize>,
    /// Transmit antennas n_t
    #[arg(long)]
    nt: Option<usize>,
    /// Legitimate receive antennas n_r
    #[arg(long)]
    nr: Option<usize>,
    /// Eavesdropper receive antennas n_r'
    #[arg(long)]
    nrp: Option<usize>,
    /// Constellation size m
    #[arg(long)]
    m: Option<u64>,
    /// Noise parameter alpha in (0,1)
    #[arg(long)]
    alpha: Option<f64>,
    /// Output directory for rows.csv and summary.csv
    #[arg(long)]
    out: Option<PathBuf>,
    /// Rayon worker count (results do not depend on it)
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Run a preset experiment and write rows.csv / summary.csv
    Run {
        /// Preset name (see list-presets)
        preset: String,
        #[command(flatten)]
        flags: ParamFlags,
        /// Exit 3 if any tolerance-checked statistic fails
        #[arg(long)]
        assert: bool,
    },
    /// List the available presets
    ListPresets,
    /// Evaluate the hardness and feasibility conditions for one parameter set
    CheckConditions {
        #[command(flatten)]
        flags: ParamFlags,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };

    let code = match cli.command {
        Command::Run {
            preset,
            flags,
            assert,
        } => cmd_run(&preset, &flags, assert),
        Command::ListPresets => {
            for name in PRESET_NAMES {
                println!("{name}");
            }
            0
        }
        Command::CheckConditions { flags } => cmd_run("conditions", &flags, false),
    };
    ExitCode::from(code)
}

fn classify(err: &MmplcError) -> u8 {
    match err {
        MmplcError::GuardExceeded(_) => 2,
        _ => 1,
    }
}

fn cmd_run(preset_name: &str, flags: &ParamFlags, assert: bool) -> u8 {
    let settings = match Settings::assemble(preset_name, flags) {
        Ok(s) => s,
        Err(msg) => {
            eprintln!("error: {msg}");
            return 1;
        }
    };

    let run = || run_experiment(&settings.config);
    let result = match settings.threads {
        Some(t) => {
            let pool = match rayon::ThreadPoolBuilder::new().num_threads(t).build() {
                Ok(p) => p,
                Err(e) => {
                    eprintln!("error: cannot build thread pool: {e}");
                    return 1;
                }
            };
            pool.install(run)
        }
        None => run(),
    };

    let result = match result {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return classify(&e);
        }
    };

    if let Err(e) = result.write_csv(&settings.out) {
        eprintln!("error: writing output: {e}");
        return 1;
    }

    println!(
        "{}: {} trials, seed {}",
        result.preset_name, result.trials, result.master_seed
    );
    for s in &result.stats {
        match (&s.target, s.pass) {
            (Some(target), Some(pass)) => println!(
                "  [{}] {} = {:.6} (target {})",
                if pass { "pass" } else { "FAIL" },
                s.name,
                s.value,
                target
            ),
            _ => println!("  [info] {} = {:.6}", s.name, s.value),
        }
    }
    println!("wrote {}", settings.out.display());

    if assert && !result.all_pass() {
        eprintln!(
            "assert: {} statistic(s) out of tolerance",
            result.failures().len()
        );
        return 3;
    }
    0
}

/// Fully resolved run settings: preset with every override applied.
struct Settings {
    config: ExperimentConfig,
    out: PathBuf,
    threads: Option<usize>,
}

const KNOWN_KEYS: &[&str] = &[
    "trials",
    "seed",
    "threads",
    "out",
    "n",
    "nt",
    "nr",
    "nrp",
    "m",
    "alpha",
    "j_list",
    "n_list",
    "x_grid",
    "y",
    "y_prime",
    "n_square",
    "g_of_n",
    "eps",
    "eps_prime",
    "noise_to_shift",
    "n_small",
    "n_large",
    "rows",
    "cols",
];

impl Settings {
    fn assemble(preset_name: &str, flags: &ParamFlags) -> Result<Settings, String> {
        let mut kv: HashMap<String, String> = HashMap::new();
        if let Some(path) = &flags.config {
            parse_config_file(path, &mut kv)?;
        }
        // flags override the file
        set_if(&mut kv, "trials", flags.trials);
        set_if(&mut kv, "seed", flags.seed);
        set_if(&mut kv, "threads", flags.threads);
        set_if(&mut kv, "n", flags.n);
        set_if(&mut kv, "nt", flags.nt);
        set_if(&mut kv, "nr", flags.nr);
        set_if(&mut kv, "nrp", flags.nrp);
        set_if(&mut kv, "m", flags.m);
        set_if(&mut kv, "alpha", flags.alpha);
        if let Some(out) = &flags.out {
            kv.insert("out".into(), out.display().to_string());
        }

        let preset = Preset::with_defaults(preset_name).map_err(|e| e.to_string())?;
        let trials = match kv.get("trials") {
            Some(v) => parse_num::<usize>("trials", v)?,
            None => preset.default_trials(),
        };
        let master_seed = match kv.get("seed") {
            Some(v) => parse_num::<u64>("seed", v)?,
            None => 0,
        };
        let preset = apply_overrides(preset, &kv)?;
        let out = kv
            .get("out")
            .map(PathBuf::from)
            .unwrap_or_else(|| PathBuf::from("mmplc-out").join(preset.name()));
        let threads = match kv.get("threads") {
            Some(v) => Some(parse_num::<usize>("threads", v)?),
            None => None,
        };
        Ok(Settings {
            config: ExperimentConfig::new(preset, trials, master_seed),
            out,
            threads,
        })
    }
}

fn set_if<T: ToString>(kv: &mut HashMap<String, String>, key: &str, value: Option<T>) {
    if let Some(v) = value {
        kv.insert(key.into(), v.to_string());
    }
}

fn parse_config_file(path: &Path, kv: &mut HashMap<String, String>) -> Result<(), String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| format!("config line {}: expected key = value", lineno + 1))?;
        let key = key.trim();
        if !KNOWN_KEYS.contains(&key) {
            return Err(format!("config line {}: unknown key '{key}'", lineno + 1));
        }
        kv.insert(key.to_string(), value.trim().to_string());
    }
    Ok(())
}

fn parse_num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, String> {
    value
        .parse::<T>()
        .map_err(|_| format!("invalid value '{value}' for {key}"))
}

fn parse_list<T: std::str::FromStr>(key: &str, value: &str) -> Result<Vec<T>, String> {
    value
        .split([',', ';'])
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<T>()
                .map_err(|_| format!("invalid list entry '{s}' for {key}"))
        })
        .collect()
}

/// Push the key-value overrides into the preset's own parameters.
fn apply_overrides(preset: Preset, kv: &HashMap<String, String>) -> Result<Preset, String> {
    macro_rules! over {
        ($slot:expr, $key:literal, $kind:ty) => {
            if let Some(v) = kv.get($key) {
                $slot = parse_num::<$kind>($key, v)?;
            }
        };
    }
    let preset = match preset {
        Preset::RjjHistogram { mut n, mut j_list } => {
            over!(n, "n", usize);
            if let Some(v) = kv.get("j_list") {
                j_list = parse_list::<usize>("j_list", v)?;
            }
            Preset::RjjHistogram { n, j_list }
        }
        Preset::RnnCdf {
            mut n_list,
            mut x_grid,
        } => {
            if let Some(v) = kv.get("n_list") {
                n_list = parse_list::<usize>("n_list", v)?;
            }
            if let Some(v) = kv.get("x_grid") {
                x_grid = parse_list::<f64>("x_grid", v)?;
            }
            Preset::RnnCdf { n_list, x_grid }
        }
        Preset::ZfAttack {
            mut n_t,
            mut n_r,
            mut n_r_prime,
            mut m,
            mut alpha,
            mut eps,
            mut eps_prime,
        } => {
            over!(n_t, "nt", usize);
            over!(n_r, "nr", usize);
            over!(n_r_prime, "nrp", usize);
            over!(m, "m", u64);
            over!(alpha, "alpha", f64);
            over!(eps, "eps", f64);
            over!(eps_prime, "eps_prime", f64);
            Preset::ZfAttack {
                n_t,
                n_r,
                n_r_prime,
                m,
                alpha,
                eps,
                eps_prime,
            }
        }
        Preset::AdvantageSweep {
            mut n_t,
            mut y,
            mut y_prime,
            mut n_square,
            mut g_of_n,
        } => {
            over!(n_t, "nt", usize);
            over!(y, "y", f64);
            over!(y_prime, "y_prime", f64);
            over!(n_square, "n_square", usize);
            over!(n_square, "n", usize);
            over!(g_of_n, "g_of_n", f64);
            Preset::AdvantageSweep {
                n_t,
                y,
                y_prime,
                n_square,
                g_of_n,
            }
        }
        Preset::SicAdvantage {
            mut n_small,
            mut n_large,
        } => {
            over!(n_small, "n_small", usize);
            over!(n_large, "n_large", usize);
            Preset::SicAdvantage { n_small, n_large }
        }
        Preset::EdgeLimits { mut rows, mut cols } => {
            over!(rows, "rows", usize);
            over!(cols, "cols", usize);
            Preset::EdgeLimits { rows, cols }
        }
        Preset::LsvLaw { mut n, mut x_grid } => {
            over!(n, "n", usize);
            if let Some(v) = kv.get("x_grid") {
                x_grid = parse_list::<f64>("x_grid", v)?;
            }
            Preset::LsvLaw { n, x_grid }
        }
        Preset::Ambiguity {
            mut n_t,
            mut n_r,
            mut noise_to_shift,
        } => {
            over!(n_t, "nt", usize);
            over!(n_r, "nr", usize);
            over!(noise_to_shift, "noise_to_shift", f64);
            Preset::Ambiguity {
                n_t,
                n_r,
                noise_to_shift,
            }
        }
        Preset::Conditions {
            mut n_t,
            mut n_r,
            mut n_r_prime,
            mut m,
            mut alpha,
            mut eps,
            mut eps_prime,
        } => {
            over!(n_t, "nt", usize);
            over!(n_r, "nr", usize);
            over!(n_r_prime, "nrp", usize);
            over!(m, "m", u64);
            over!(alpha, "alpha", f64);
            over!(eps, "eps", f64);
            over!(eps_prime, "eps_prime", f64);
            Preset::Conditions {
                n_t,
                n_r,
                n_r_prime,
                m,
                alpha,
                eps,
                eps_prime,
            }
        }
    };
    Ok(preset)
}
