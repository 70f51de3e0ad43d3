//! Command-line front end. Exit status: 0 on success, 1 on usage or input
//! errors, 2 when a self-test or invariant check fails.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use keymesh_core::attack::split_attack;
use keymesh_core::formulas::p_q_exact;
use keymesh_core::geometry::place_nodes;
use keymesh_core::{GeoParams, RegionKind, RngStream, SchemeParams};

use crate::config::{parse_settings, ExperimentConfig, Measure, Settings};
use crate::csv::{sig10, Table};
use crate::design::{design_guidelines, DesignInputs};
use crate::edgelist::write_edge_list;
use crate::error::{HarnessError, Result};
use crate::figures::{figure_preset, run_figure, Figure, FigureOptions};
use crate::runner::RayonRunner;
use crate::selftest::{run_selftest, selftest_table};
use crate::sweep::{network_model, run_sweep, sweep_table};

#[derive(Parser, Debug)]
#[command(name = "keymesh", version, about = "Simulate sensor networks secured by q-composite key predistribution")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exact key-setup probability p_q.
    Pq {
        #[arg(long = "K")]
        ring_size: usize,
        #[arg(long = "P")]
        pool_size: usize,
        #[arg(long, default_value_t = 1)]
        q: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Probability that the secure topology is connected.
    Connectivity {
        #[command(flatten)]
        exp: ExperimentArgs,
        /// Write the first sampled topology as an edge list.
        #[arg(long)]
        dump_graph: Option<PathBuf>,
    },
    /// Fraction of secure links compromised by a random node capture.
    Resilience {
        #[command(flatten)]
        exp: ExperimentArgs,
    },
    /// Probability of staying connected for T consecutive slots under mobility.
    Mobility {
        #[command(flatten)]
        exp: ExperimentArgs,
    },
    /// Capture a band of width 2r and count edges across it.
    Split {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: f64,
        #[arg(long)]
        ell: f64,
        #[arg(long, default_value = "square")]
        region: String,
        #[arg(long, default_value_t = 1)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Pick (K, P, r) from the scaling guidelines.
    Design {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        q: usize,
        #[arg(long)]
        c: f64,
        #[arg(long, default_value_t = 1.0)]
        c1: f64,
        #[arg(long, default_value_t = 0.1)]
        eps1: f64,
        #[arg(long, default_value_t = 1.0)]
        c2: f64,
        #[arg(long, default_value_t = 0.3)]
        eps2: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Reproduce the data behind a figure: con1, con2, mobility, res, res2, res3.
    Fig {
        id: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = crate::config::DEFAULT_TRIALS)]
        trials: u64,
        /// Override the swept range, as lo:hi:step.
        #[arg(long)]
        range: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the exact-oracle checks.
    Selftest {
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Options shared by the sweep subcommands; each overrides the config file.
#[derive(Args, Debug)]
struct ExperimentArgs {
    /// key=value file; flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    /// torus, square or full.
    #[arg(long)]
    region: Option<String>,
    #[arg(long)]
    unreliable: bool,
    #[arg(long)]
    n: Option<String>,
    #[arg(long = "K")]
    ring_size: Option<String>,
    #[arg(long = "P")]
    pool_size: Option<String>,
    #[arg(long)]
    q: Option<String>,
    #[arg(long)]
    r: Option<String>,
    #[arg(long)]
    t: Option<String>,
    /// Number of randomly captured nodes.
    #[arg(long)]
    m: Option<String>,
    /// Consecutive slots (mobility).
    #[arg(long = "T")]
    slots: Option<String>,
    /// Swept variable: K, P, q, m, r, t or T.
    #[arg(long)]
    sweep: Option<String>,
    /// Comma-separated sweep values.
    #[arg(long)]
    values: Option<String>,
    /// Sweep range lo:hi:step.
    #[arg(long)]
    range: Option<String>,
    #[arg(long)]
    trials: Option<String>,
    #[arg(long)]
    seed: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

impl ExperimentArgs {
    fn settings(&self) -> Result<Settings> {
        let mut s = match &self.config {
            Some(path) => parse_settings(&std::fs::read_to_string(path)?)?,
            None => Settings::new(),
        };
        let pairs = [
            ("region", &self.region),
            ("n", &self.n),
            ("K", &self.ring_size),
            ("P", &self.pool_size),
            ("q", &self.q),
            ("r", &self.r),
            ("t", &self.t),
            ("m", &self.m),
            ("T", &self.slots),
            ("sweep", &self.sweep),
            ("values", &self.values),
            ("range", &self.range),
            ("trials", &self.trials),
            ("seed", &self.seed),
        ];
        for (k, v) in pairs {
            if let Some(v) = v {
                s.insert(k.to_string(), v.clone());
            }
        }
        // A range on the command line replaces a file's values, and vice versa.
        if self.range.is_some() {
            s.remove("values");
        }
        if self.values.is_some() {
            s.remove("range");
        }
        if self.unreliable {
            s.insert("unreliable".into(), "true".into());
        }
        Ok(s)
    }
}

fn emit(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => {
            let mut f = BufWriter::new(File::create(path)?);
            f.write_all(text.as_bytes())?;
            f.flush()?;
        }
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            lock.write_all(text.as_bytes())?;
            lock.flush()?;
        }
    }
    Ok(())
}

/// Parses `args` (program name first) and runs the command; returns the exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("keymesh: {e}");
            e.exit_code()
        }
    }
}

fn sweep_command(measure: Measure, exp: &ExperimentArgs) -> Result<(ExperimentConfig, Table)> {
    let config = ExperimentConfig::from_settings(measure, &exp.settings()?)?;
    let runner = RayonRunner::from_env()?;
    let records = run_sweep(&config, &runner)?;
    let table = sweep_table(&config, &records);
    Ok((config, table))
}

fn dispatch(command: Command) -> Result<()> {
    match command {
        Command::Pq { ring_size, pool_size, q, out } => {
            let scheme = SchemeParams::new(2, ring_size, pool_size, q)?;
            emit(&format!("{}\n", sig10(p_q_exact(&scheme))), out.as_deref())
        }
        Command::Connectivity { exp, dump_graph } => {
            let (config, table) = sweep_command(Measure::Connectivity, &exp)?;
            if let Some(path) = dump_graph {
                let first = config.at(config.sweep.values[0])?;
                let model = network_model(&first)?;
                let sample = model.sample(&RngStream::new(first.master_seed, 0));
                write_edge_list(&sample.graph, BufWriter::new(File::create(path)?))?;
            }
            emit(&table.render(), exp.out.as_deref())
        }
        Command::Resilience { exp } => {
            let (_, table) = sweep_command(Measure::Resilience, &exp)?;
            emit(&table.render(), exp.out.as_deref())
        }
        Command::Mobility { exp } => {
            let (_, table) = sweep_command(Measure::Mobility, &exp)?;
            emit(&table.render(), exp.out.as_deref())
        }
        Command::Split { n, r, ell, region, trials, seed, out } => {
            let region: RegionKind = region.parse()?;
            let geo = GeoParams::disk(region, r)?;
            let mut table = Table::new(&["trial", "captured", "chunk_low", "chunk_high", "cross_edges"]);
            for trial in 0..trials {
                let placement = place_nodes(n, &geo, &RngStream::new(seed, trial))?;
                let o = split_attack(&placement, r, ell)?;
                table.push(vec![
                    trial.into(),
                    o.captured.len().into(),
                    o.chunk_low.len().into(),
                    o.chunk_high.len().into(),
                    o.cross_edges.into(),
                ]);
            }
            emit(&table.render(), out.as_deref())
        }
        Command::Design { n, q, c, c1, eps1, c2, eps2, out } => {
            let d = design_guidelines(&DesignInputs { n, q, c, c1, eps1, c2, eps2 })?;
            if d.capped {
                eprintln!(
                    "keymesh: radius capped at 1/2; achieved c = {} is below the requested {c}",
                    sig10(d.achieved_c)
                );
            }
            let mut table = Table::new(&["K", "P", "r", "capped", "achieved_c", "margin"]);
            table.push(vec![
                d.ring_size.into(),
                d.pool_size.into(),
                d.radius.into(),
                d.capped.into(),
                d.achieved_c.into(),
                d.margin.into(),
            ]);
            emit(&table.render(), out.as_deref())
        }
        Command::Fig { id, seed, trials, range, out } => {
            let figure: Figure = id.parse()?;
            let range = range.as_deref().map(crate::config::parse_range).transpose()?;
            let preset = figure_preset(figure, &FigureOptions { master_seed: seed, trials, range })?;
            let runner = RayonRunner::from_env()?;
            let table = run_figure(&preset, &runner)?;
            emit(&table.render(), out.as_deref())
        }
        Command::Selftest { out } => {
            let checks = run_selftest();
            emit(&selftest_table(&checks).render(), out.as_deref())?;
            let failed: Vec<&str> = checks.iter().filter(|c| !c.passed).map(|c| c.name).collect();
            if failed.is_empty() {
                Ok(())
            } else {
                Err(HarnessError::SelfTest(failed.join(", ")))
            }
        }
    }
}
