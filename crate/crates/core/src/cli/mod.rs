//! The `npvmerge` command line: `prepare`, `solve` and `report`.

mod report;

use std::fs::{self, OpenOptions};
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::acs::{run_colony, AcsParams, Budget};
use crate::error::{Error, Result};
use crate::merge::{build_restricted, export_lp, ms_pacs, solve_exact, MsParams, Partition, SolveLimits};
use crate::model::{compute_deadline_and_discount, generate_cashflows, parse_psplib, Instance};
use crate::paco::{run_paco, thread_cap, PacoMode, PacoParams};
use crate::rng;
use crate::schedule::{check_feasible, npv, Schedule, ScheduleRecord};

pub use report::{cmd_report, ReportArgs};

#[derive(Debug, Parser)]
#[command(name = "npvmerge", version, about = "NPV project scheduling with merge search and ant colonies")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Reads a PSPLIB single-mode file and writes a JSON sidecar with cash
    /// flows, deadline and discount rate.
    Prepare(PrepareArgs),
    /// Solves a prepared instance.
    Solve(RunConfig),
    /// Summarises result files.
    Report(ReportArgs),
}

#[derive(Debug, Args)]
pub struct PrepareArgs {
    pub psplib: PathBuf,
    #[arg(long)]
    pub seed: u64,
    /// Output path; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    MsPacs,
    Pacs,
    Acs,
    BnbExact,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::MsPacs => "ms-pacs",
            Mode::Pacs => "pacs",
            Mode::Acs => "acs",
            Mode::BnbExact => "bnb-exact",
        }
    }
}

#[derive(Clone, Debug, Args)]
pub struct RunConfig {
    #[arg(long, value_enum)]
    pub mode: Mode,
    /// Prepared JSON sidecar.
    #[arg(long)]
    pub instance: PathBuf,
    #[arg(long)]
    pub seed: u64,
    #[arg(long, default_value_t = 5)]
    pub colonies: usize,
    /// Wall-clock budget in seconds.
    #[arg(long, default_value_t = 900.0)]
    pub t_total: f64,
    /// Time limit of each restricted solve in seconds.
    #[arg(long, default_value_t = 60.0)]
    pub t_iter: f64,
    #[arg(long, default_value_t = 500)]
    pub split_k: usize,
    #[arg(long, default_value_t = 10)]
    pub ants: usize,
    #[arg(long, default_value_t = 0.9)]
    pub q0: f64,
    /// ACS iterations: per merge iteration for ms-pacs, in total for acs and pacs.
    #[arg(long, default_value_t = 2000)]
    pub acs_iters: usize,
    /// Iterations between best-solution exchanges in pacs mode.
    #[arg(long, default_value_t = 50)]
    pub sync_interval: usize,
    /// Merge iteration cap (ms-pacs).
    #[arg(long)]
    pub ms_iters: Option<usize>,
    /// Node cap of each branch and bound run.
    #[arg(long)]
    pub node_limit: Option<u64>,
    /// Result file (JSON lines, appended); stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Per-iteration trace CSV.
    #[arg(long)]
    pub trace: Option<PathBuf>,
    /// LP file of the last restricted model (ms-pacs, bnb-exact).
    #[arg(long)]
    pub export_lp: Option<PathBuf>,
    /// Final schedule as JSON.
    #[arg(long)]
    pub schedule: Option<PathBuf>,
}

impl RunConfig {
    fn acs(&self) -> AcsParams<f64> {
        AcsParams { n_ants: self.ants, q0: self.q0, ..AcsParams::default() }
    }

    fn seconds(value: f64, flag: &str) -> Result<Duration> {
        Duration::try_from_secs_f64(value).map_err(|_| Error::Argument(format!("{flag} must be a non-negative number")))
    }
}

/// One JSON line per solve.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunResult {
    pub instance: String,
    pub n: usize,
    pub mode: Mode,
    pub seed: u64,
    pub npv: f64,
    pub feasible: bool,
    pub optimal: bool,
    pub wall_secs: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rf: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rs: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nc: Option<f64>,
}

/// Runs a parsed command line and returns the process exit code.
pub fn run(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Prepare(args) => cmd_prepare(&args).map(|_| 0),
        Command::Solve(config) => cmd_solve(&config),
        Command::Report(args) => cmd_report(&args).map(|_| 0),
    }
}

fn write_output(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Error::from(e).in_file(p.display().to_string())),
        None => {
            io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

/// Builds the sidecar text for a PSPLIB file.
pub fn prepare_text(psplib: &Path, seed: u64) -> Result<String> {
    let where_ = psplib.display().to_string();
    let text = fs::read_to_string(psplib).map_err(|e| Error::from(e).in_file(where_.clone()))?;
    let name = psplib.file_stem().map_or_else(|| where_.clone(), |s| s.to_string_lossy().into_owned());
    let instance: Instance<f64> = parse_psplib(&text, &name).map_err(|e| e.in_file(where_))?;
    let instance = compute_deadline_and_discount(generate_cashflows(instance, seed));
    let mut json = instance.to_json();
    json.push('\n');
    Ok(json)
}

pub fn cmd_prepare(args: &PrepareArgs) -> Result<()> {
    let json = prepare_text(&args.psplib, args.seed)?;
    write_output(args.out.as_deref(), &json)
}

/// Runs one solve. Returns exit code 2 when the final schedule fails the
/// feasibility check.
pub fn cmd_solve(config: &RunConfig) -> Result<i32> {
    let instance: Instance<f64> = Instance::load(&config.instance)?;
    instance.ensure_solvable()?;
    let t_total = RunConfig::seconds(config.t_total, "--t-total")?;
    let t_iter = RunConfig::seconds(config.t_iter, "--t-iter")?;
    let start = Instant::now();
    let deadline = start.checked_add(t_total);
    let mut trace = String::new();
    let mut lp = None;

    let (schedule, optimal): (Schedule, bool) = match config.mode {
        Mode::MsPacs => {
            let params = MsParams {
                colonies: config.colonies,
                t_total,
                t_iter: t_iter.min(t_total),
                k: config.split_k,
                acs: config.acs(),
                acs_iterations: config.acs_iters,
                max_iterations: config.ms_iters,
                node_limit: config.node_limit,
                threads: thread_cap(),
                export_lp: config.export_lp.is_some(),
            };
            let res = ms_pacs(&instance, &params, config.seed)?;
            let mut buf = Vec::new();
            res.write_trace(&mut buf)?;
            trace = String::from_utf8(buf).map_err(|e| Error::Internal(e.to_string()))?;
            lp = res.lp;
            (res.best, false)
        }
        Mode::Pacs => {
            let params = PacoParams {
                colonies: config.colonies,
                acs: config.acs(),
                mode: PacoMode::Standalone { sync_interval: config.sync_interval },
                threads: thread_cap(),
            };
            let budget = Budget::iterations(config.acs_iters).with_deadline(deadline);
            let pool = run_paco(&instance, &params, None, budget, config.seed)?;
            trace.push_str("round,best_npv\n");
            for (r, v) in pool.round_bests.iter().enumerate() {
                trace.push_str(&format!("{},{}\n", r + 1, v));
            }
            (pool.global_best.schedule, false)
        }
        Mode::Acs => {
            let budget = Budget::iterations(config.acs_iters).with_deadline(deadline);
            let rng = rng::stream(config.seed, rng::COLONY_STREAM_BASE);
            let res = run_colony(&instance, &config.acs(), None, budget, rng)?;
            trace.push_str("iteration,best_npv,cf\n");
            for row in &res.trace {
                trace.push_str(&format!("{},{},{}\n", row.iteration, row.best_npv, row.cf));
            }
            (res.best.schedule, false)
        }
        Mode::BnbExact => {
            let limits = SolveLimits::time(t_total).with_nodes(config.node_limit);
            let out = solve_exact(&instance, limits)?;
            if config.export_lp.is_some() {
                let atomic = Partition::atomic(instance.n(), instance.deadline());
                lp = Some(export_lp(&build_restricted(atomic, &instance, &out.schedule)?));
            }
            trace.push_str(&format!("status,nodes,npv\n{},{},{}\n", out.status, out.nodes, out.npv));
            let optimal = out.optimal();
            (out.schedule, optimal)
        }
    };
    let wall_secs = start.elapsed().as_secs_f64();

    let report = check_feasible(&schedule, &instance);
    let attributes = instance.attributes().cloned().unwrap_or_default();
    let result = RunResult {
        instance: instance.name().to_string(),
        n: instance.n(),
        mode: config.mode,
        seed: config.seed,
        npv: npv(&schedule, &instance),
        feasible: report.is_ok(),
        optimal,
        wall_secs,
        rf: attributes.rf,
        rs: attributes.rs,
        nc: attributes.nc,
    };
    if !report.is_ok() {
        eprintln!("final schedule is infeasible: {}", serde_json::to_string(&report.violations)?);
        return Ok(2);
    }

    let line = serde_json::to_string(&result)? + "\n";
    match &config.out {
        Some(path) => OpenOptions::new()
            .create(true)
            .append(true)
            .open(path)
            .and_then(|mut f| f.write_all(line.as_bytes()))
            .map_err(|e| Error::from(e).in_file(path.display().to_string()))?,
        None => io::stdout().write_all(line.as_bytes())?,
    }
    if let Some(path) = &config.trace {
        write_output(Some(path), &trace)?;
    }
    if let (Some(path), Some(text)) = (&config.export_lp, &lp) {
        write_output(Some(path), text)?;
    }
    if let Some(path) = &config.schedule {
        let record = ScheduleRecord::new(&schedule, &instance);
        write_output(Some(path), &(serde_json::to_string_pretty(&record)? + "\n"))?;
    }
    Ok(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_solve_flags() {
        let cli = Cli::try_parse_from([
            "npvmerge",
            "solve",
            "--mode",
            "ms-pacs",
            "--instance",
            "x.json",
            "--seed",
            "3",
            "--split-k",
            "7",
            "--t-total",
            "1.5",
        ])
        .unwrap();
        let Command::Solve(cfg) = cli.command else { panic!("not solve") };
        assert_eq!(cfg.mode, Mode::MsPacs);
        assert_eq!(cfg.split_k, 7);
        assert_eq!(cfg.colonies, 5);
        assert_eq!(cfg.t_iter, 60.0);
        assert_eq!(cfg.t_total, 1.5);
        assert!(Cli::try_parse_from(["npvmerge", "solve", "--mode", "acs", "--instance", "x"]).is_err());
    }

    #[test]
    fn result_json_shape() {
        let r = RunResult {
            instance: "a".into(),
            n: 3,
            mode: Mode::BnbExact,
            seed: 1,
            npv: 2.5,
            feasible: true,
            optimal: true,
            wall_secs: 0.1,
            rf: None,
            rs: Some(0.5),
            nc: None,
        };
        let text = serde_json::to_string(&r).unwrap();
        assert_eq!(
            text,
            r#"{"instance":"a","n":3,"mode":"bnb-exact","seed":1,"npv":2.5,"feasible":true,"optimal":true,"wall_secs":0.1,"rs":0.5}"#
        );
        assert_eq!(serde_json::from_str::<RunResult>(&text).unwrap(), r);
    }
}
