//! Monte Carlo experiment engine: named presets over the library's laws
//! and attacks, parallel seeded trials, and CSV output.
//!
//! Reproducibility contract: per-trial work is a pure function of
//! `(master_seed, trial_index)`, rows are emitted in trial order, and
//! summaries are derived from the rows, so results are byte-identical for
//! any worker count.

pub mod presets;
pub mod stats;

use std::fmt::Write as _;
use std::io;
use std::path::Path;

use crate::Result;

/// A preset experiment with its parameters.
#[derive(Debug, Clone, PartialEq)]
pub enum Preset {
    /// Squared QR diagonals of `Q = G H^{-1}` against their beta-prime law.
    RjjHistogram { n: usize, j_list: Vec<usize> },
    /// Empirical curves of `P[n r_nn^2 < x]` across dimensions.
    RnnCdf {
        n_list: Vec<usize>,
        x_grid: Vec<f64>,
    },
    /// The eavesdropper's ZF attack with SVD precoding, including the
    /// hardness/feasibility reports and B/E rate comparison.
    ZfAttack {
        n_t: usize,
        n_r: usize,
        n_r_prime: usize,
        m: u64,
        alpha: f64,
        eps: f64,
        eps_prime: f64,
    },
    /// Rectangular SVD-precoder advantage against its predicted limit plus
    /// the square inverse-precoder advantage tail.
    AdvantageSweep {
        n_t: usize,
        y: f64,
        y_prime: f64,
        n_square: usize,
        g_of_n: f64,
    },
    /// SIC advantage at two dimensions: linear growth and ZF dominance.
    SicAdvantage { n_small: usize, n_large: usize },
    /// Scaled extreme squared singular values of a tall Gaussian matrix.
    EdgeLimits { rows: usize, cols: usize },
    /// Scaled least singular value of a square Gaussian matrix against the
    /// limiting survival law.
    LsvLaw { n: usize, x_grid: Vec<f64> },
    /// Two-hypothesis confusion at a chosen noise-to-shift ratio.
    Ambiguity {
        n_t: usize,
        n_r: usize,
        noise_to_shift: f64,
    },
    /// Deterministic evaluation of every hardness/feasibility condition.
    Conditions {
        n_t: usize,
        n_r: usize,
        n_r_prime: usize,
        m: u64,
        alpha: f64,
        eps: f64,
        eps_prime: f64,
    },
}

/// Names accepted by `run` and `list-presets`.
pub const PRESET_NAMES: [&str; 9] = [
    "rjj-histogram",
    "rnn-cdf",
    "zf-attack",
    "advantage-sweep",
    "sic-advantage",
    "edge-limits",
    "lsv-law",
    "ambiguity",
    "conditions",
];

impl Preset {
    pub fn name(&self) -> &'static str {
        match self {
            Preset::RjjHistogram { .. } => "rjj-histogram",
            Preset::RnnCdf { .. } => "rnn-cdf",
            Preset::ZfAttack { .. } => "zf-attack",
            Preset::AdvantageSweep { .. } => "advantage-sweep",
            Preset::SicAdvantage { .. } => "sic-advantage",
            Preset::EdgeLimits { .. } => "edge-limits",
            Preset::LsvLaw { .. } => "lsv-law",
            Preset::Ambiguity { .. } => "ambiguity",
            Preset::Conditions { .. } => "conditions",
        }
    }

    /// The preset under its default parameters (the configurations the
    /// acceptance checks run at).
    pub fn with_defaults(name: &str) -> Result<Preset> {
        let attack_alpha = 65.0f64.sqrt() / 9.0; // m^2 alpha^2 = 65 at m = 9
        match name {
            "rjj-histogram" => Ok(Preset::RjjHistogram {
                n: 100,
                j_list: vec![10, 40, 90],
            }),
            "rnn-cdf" => Ok(Preset::RnnCdf {
                n_list: vec![10, 50, 100],
                x_grid: (1..=10).map(|x| x as f64).collect(),
            }),
            "zf-attack" => Ok(Preset::ZfAttack {
                n_t: 64,
                n_r: 128,
                n_r_prime: 5120,
                m: 9,
                alpha: attack_alpha,
                eps: 0.1,
                eps_prime: 0.05,
            }),
            "advantage-sweep" => Ok(Preset::AdvantageSweep {
                n_t: 100,
                y: 4.0,
                y_prime: 4.0,
                n_square: 64,
                g_of_n: 1024.0,
            }),
            "sic-advantage" => Ok(Preset::SicAdvantage {
                n_small: 100,
                n_large: 200,
            }),
            "edge-limits" => Ok(Preset::EdgeLimits {
                rows: 800,
                cols: 200,
            }),
            "lsv-law" => Ok(Preset::LsvLaw {
                n: 200,
                x_grid: vec![0.25, 0.5, 1.0, 2.0],
            }),
            "ambiguity" => Ok(Preset::Ambiguity {
                n_t: 8,
                n_r: 8,
                noise_to_shift: 100.0,
            }),
            "conditions" => Ok(Preset::Conditions {
                n_t: 64,
                n_r: 128,
                n_r_prime: 5120,
                m: 9,
                alpha: attack_alpha,
                eps: 0.1,
                eps_prime: 0.05,
            }),
            other => Err(crate::Error::InvalidParameter(format!(
                "unknown preset '{other}'; known: {}",
                PRESET_NAMES.join(", ")
            ))),
        }
    }

    /// Trial count giving desk-scale runtimes at the default parameters.
    pub fn default_trials(&self) -> usize {
        match self {
            Preset::RjjHistogram { .. } => 10_000,
            Preset::RnnCdf { .. } => 10_000,
            Preset::ZfAttack { .. } => 200,
            Preset::AdvantageSweep { .. } => 500,
            Preset::SicAdvantage { .. } => 2_000,
            Preset::EdgeLimits { .. } => 50,
            Preset::LsvLaw { .. } => 10_000,
            Preset::Ambiguity { .. } => 10_000,
            Preset::Conditions { .. } => 1,
        }
    }
}

/// Everything a run needs: the preset, the trial count, and the master
/// seed trials derive their streams from.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub preset: Preset,
    pub trials: usize,
    pub master_seed: u64,
}

impl ExperimentConfig {
    pub fn new(preset: Preset, trials: usize, master_seed: u64) -> Self {
        ExperimentConfig {
            preset,
            trials,
            master_seed,
        }
    }

    pub fn defaults_for(name: &str) -> Result<Self> {
        let preset = Preset::with_defaults(name)?;
        let trials = preset.default_trials();
        Ok(ExperimentConfig {
            preset,
            trials,
            master_seed: 0,
        })
    }
}

/// One summary statistic; `target` and `pass` are present when the preset
/// pins a tolerance for it.
#[derive(Debug, Clone)]
pub struct Statistic {
    pub name: String,
    pub value: f64,
    pub target: Option<String>,
    pub pass: Option<bool>,
}

impl Statistic {
    pub fn info(name: impl Into<String>, value: f64) -> Self {
        Statistic {
            name: name.into(),
            value,
            target: None,
            pass: None,
        }
    }

    pub fn checked(
        name: impl Into<String>,
        value: f64,
        target: impl Into<String>,
        pass: bool,
    ) -> Self {
        Statistic {
            name: name.into(),
            value,
            target: Some(target.into()),
            pass: Some(pass),
        }
    }
}

/// Rows plus summary of one experiment run.
#[derive(Debug, Clone)]
pub struct ExperimentResult {
    pub preset_name: String,
    pub params: Vec<(String, String)>,
    pub master_seed: u64,
    pub trials: usize,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    pub stats: Vec<Statistic>,
}

/// Floats print with 17 significant digits so rows re-parse bit-exactly;
/// integral values print as integers.
fn fmt_cell(x: f64) -> String {
    if x.fract() == 0.0 && x.abs() < 9.0e15 {
        format!("{}", x as i64)
    } else {
        format!("{x:.16e}")
    }
}

/// Quote a CSV field when it contains a delimiter, quote, or newline.
fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

impl ExperimentResult {
    pub fn all_pass(&self) -> bool {
        self.stats.iter().all(|s| s.pass != Some(false))
    }

    pub fn failures(&self) -> Vec<&Statistic> {
        self.stats
            .iter()
            .filter(|s| s.pass == Some(false))
            .collect()
    }

    /// The per-trial records as CSV text.
    pub fn rows_csv(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{}", self.columns.join(","));
        for row in &self.rows {
            let line: Vec<String> = row.iter().map(|&v| fmt_cell(v)).collect();
            let _ = writeln!(out, "{}", line.join(","));
        }
        out
    }

    /// Parameters and statistics with verdicts as CSV text.
    pub fn summary_csv(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "kind,name,value,target,verdict");
        let _ = writeln!(out, "param,preset,{},,", self.preset_name);
        let _ = writeln!(out, "param,master_seed,{},,", self.master_seed);
        let _ = writeln!(out, "param,trials,{},,", self.trials);
        for (k, v) in &self.params {
            let _ = writeln!(out, "param,{},{},,", csv_field(k), csv_field(v));
        }
        for s in &self.stats {
            let verdict = match s.pass {
                Some(true) => "pass",
                Some(false) => "fail",
                None => "info",
            };
            let _ = writeln!(
                out,
                "stat,{},{},{},{verdict}",
                csv_field(&s.name),
                fmt_cell(s.value),
                csv_field(s.target.as_deref().unwrap_or(""))
            );
        }
        out
    }

    /// Write `rows.csv` and `summary.csv` under `dir`, creating it first.
    pub fn write_csv(&self, dir: &Path) -> io::Result<()> {
        std::fs::create_dir_all(dir)?;
        std::fs::write(dir.join("rows.csv"), self.rows_csv())?;
        std::fs::write(dir.join("summary.csv"), self.summary_csv())?;
        Ok(())
    }
}

/// Run a configured experiment. Deterministic in the config, including
/// the master seed, for any rayon pool size.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentResult> {
    presets::run(cfg)
}
