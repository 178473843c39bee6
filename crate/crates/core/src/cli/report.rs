use std::collections::{BTreeMap, HashMap};
use std::fs;
use std::path::{Path, PathBuf};

use clap::Args;
use serde::Deserialize;

use super::{Mode, RunResult};
use crate::error::{Error, Result};

const MODES: [Mode; 4] = [Mode::MsPacs, Mode::Pacs, Mode::Acs, Mode::BnbExact];

#[derive(Debug, Args)]
pub struct ReportArgs {
    /// Result files or glob patterns (JSON lines).
    #[arg(required = true)]
    pub results: Vec<String>,
    /// CSV with columns `instance,ub`.
    #[arg(long)]
    pub bounds: Option<PathBuf>,
    /// Per-instance summary; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Grouped summary; defaults to `<out>_groups.csv` next to `--out`.
    #[arg(long)]
    pub groups: Option<PathBuf>,
}

#[derive(Debug, Deserialize)]
struct BoundRow {
    instance: String,
    ub: f64,
}

struct InstanceRuns {
    n: usize,
    rf: Option<f64>,
    rs: Option<f64>,
    nc: Option<f64>,
    npvs: HashMap<Mode, Vec<f64>>,
}

/// `(UB − LB) / UB × 100`.
pub fn gap_percent(ub: f64, lb: f64) -> f64 {
    (ub - lb) / ub * 100.0
}

fn mean_std(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

fn result_files(patterns: &[String]) -> Result<Vec<PathBuf>> {
    let mut files = Vec::new();
    for pattern in patterns {
        let matched: Vec<PathBuf> = glob::glob(pattern)
            .map_err(|e| Error::Argument(format!("bad pattern {pattern}: {e}")))?
            .filter_map(|p| p.ok())
            .collect();
        if matched.is_empty() {
            if Path::new(pattern).exists() {
                files.push(PathBuf::from(pattern));
            } else {
                return Err(Error::Argument(format!("no result files match {pattern}")));
            }
        }
        files.extend(matched);
    }
    files.sort();
    files.dedup();
    Ok(files)
}

fn read_results(files: &[PathBuf]) -> Result<Vec<RunResult>> {
    let mut out = Vec::new();
    for path in files {
        let where_ = path.display().to_string();
        let text = fs::read_to_string(path).map_err(|e| Error::from(e).in_file(where_.clone()))?;
        for (k, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let record: RunResult =
                serde_json::from_str(line).map_err(|e| Error::parse(k + 1, e.to_string()).in_file(where_.clone()))?;
            out.push(record);
        }
    }
    Ok(out)
}

fn read_bounds(path: &Path) -> Result<HashMap<String, f64>> {
    let mut reader = csv::Reader::from_path(path).map_err(|e| Error::from(e).in_file(path.display().to_string()))?;
    reader
        .deserialize::<BoundRow>()
        .map(|row| row.map(|r| (r.instance, r.ub)).map_err(|e| Error::from(e).in_file(path.display().to_string())))
        .collect()
}

/// Tables produced by a report: a per-instance table and a grouped table.
#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub instances: Vec<Vec<String>>,
    pub groups: Vec<Vec<String>>,
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map_or_else(String::new, |x| x.to_string())
}

/// Builds both tables from result records. Gap columns appear only when
/// bounds are given; pairwise `a_beats_b` counts strict wins of the best
/// npv per instance.
pub fn build_report(results: &[RunResult], bounds: Option<&HashMap<String, f64>>) -> Result<Report> {
    if results.is_empty() {
        return Err(Error::Argument("no result records".into()));
    }
    let mut runs: BTreeMap<String, InstanceRuns> = BTreeMap::new();
    for r in results {
        let entry = runs.entry(r.instance.clone()).or_insert_with(|| InstanceRuns {
            n: r.n,
            rf: r.rf,
            rs: r.rs,
            nc: r.nc,
            npvs: HashMap::new(),
        });
        entry.npvs.entry(r.mode).or_default().push(r.npv);
    }
    let modes: Vec<Mode> = MODES.into_iter().filter(|m| runs.values().any(|i| i.npvs.contains_key(m))).collect();
    let pairs: Vec<(Mode, Mode)> =
        modes.iter().flat_map(|&a| modes.iter().filter(move |&&b| b != a).map(move |&b| (a, b))).collect();

    let mut header: Vec<String> = ["instance", "n", "rf", "rs", "nc"].map(String::from).to_vec();
    for m in &modes {
        for col in ["runs", "best", "mean", "std"] {
            header.push(format!("{}_{col}", m.name()));
        }
        if bounds.is_some() {
            header.push(format!("{}_gap", m.name()));
        }
    }
    for (a, b) in &pairs {
        header.push(format!("{}_beats_{}", a.name(), b.name()));
    }

    // metric name → (instance factor levels, value)
    let mut metrics: Vec<(String, Vec<(Vec<(String, String)>, f64)>)> = Vec::new();
    let mut metric =
        |name: String, levels: &[(String, String)], value: f64| match metrics.iter_mut().find(|(n, _)| *n == name) {
            Some((_, rows)) => rows.push((levels.to_vec(), value)),
            None => metrics.push((name, vec![(levels.to_vec(), value)])),
        };

    let mut table = vec![header];
    for (name, inst) in &runs {
        let mut levels = vec![("all".to_string(), "all".to_string()), ("n".to_string(), inst.n.to_string())];
        for (factor, v) in [("rf", inst.rf), ("rs", inst.rs), ("nc", inst.nc)] {
            if let Some(v) = v {
                levels.push((factor.to_string(), v.to_string()));
            }
        }
        let mut row = vec![name.clone(), inst.n.to_string(), fmt_opt(inst.rf), fmt_opt(inst.rs), fmt_opt(inst.nc)];
        let best = |m: &Mode| inst.npvs.get(m).map(|v| v.iter().copied().fold(f64::NEG_INFINITY, f64::max));
        for m in &modes {
            match inst.npvs.get(m) {
                Some(values) => {
                    let (mean, std) = mean_std(values);
                    let b = best(m).expect("values present");
                    row.extend([values.len().to_string(), b.to_string(), mean.to_string(), std.to_string()]);
                    metric(format!("{}_best", m.name()), &levels, b);
                }
                None => row.extend(std::iter::repeat_n(String::new(), 4)),
            }
            if let Some(bounds) = bounds {
                let gap = bounds.get(name).zip(best(m)).map(|(&ub, lb)| gap_percent(ub, lb));
                if let Some(g) = gap {
                    metric(format!("{}_gap", m.name()), &levels, g);
                }
                row.push(fmt_opt(gap));
            }
        }
        for (a, b) in &pairs {
            let win = best(a).zip(best(b)).map(|(x, y)| f64::from(u8::from(x > y)));
            if let Some(w) = win {
                metric(format!("{}_beats_{}", a.name(), b.name()), &levels, w);
            }
            row.push(win.map_or_else(String::new, |w| (w as u8).to_string()));
        }
        table.push(row);
    }

    let mut groups = vec![["factor", "level", "metric", "count", "mean", "std", "total"].map(String::from).to_vec()];
    for factor in ["all", "n", "rf", "rs", "nc"] {
        for (name, rows) in &metrics {
            let mut by_level: BTreeMap<String, Vec<f64>> = BTreeMap::new();
            for (levels, value) in rows {
                if let Some((_, level)) = levels.iter().find(|(f, _)| f == factor) {
                    by_level.entry(level.clone()).or_default().push(*value);
                }
            }
            for (level, values) in by_level {
                let (mean, std) = mean_std(&values);
                let total: f64 = values.iter().sum();
                groups.push(vec![
                    factor.to_string(),
                    level,
                    name.clone(),
                    values.len().to_string(),
                    mean.to_string(),
                    std.to_string(),
                    total.to_string(),
                ]);
            }
        }
    }
    Ok(Report { instances: table, groups })
}

fn to_csv(rows: &[Vec<String>]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.write_record(row)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Internal(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Internal(e.to_string()))
}

pub fn cmd_report(args: &ReportArgs) -> Result<()> {
    let files = result_files(&args.results)?;
    let results = read_results(&files)?;
    let bounds = args.bounds.as_deref().map(read_bounds).transpose()?;
    let report = build_report(&results, bounds.as_ref())?;
    let instances = to_csv(&report.instances)?;
    let groups = to_csv(&report.groups)?;
    let groups_path = args.groups.clone().or_else(|| {
        args.out.as_ref().map(|out| {
            let stem = out.file_stem().map_or_else(|| "report".into(), |s| s.to_string_lossy().into_owned());
            out.with_file_name(format!("{stem}_groups.csv"))
        })
    });
    match &args.out {
        Some(p) => super::write_output(Some(p), &instances)?,
        None => super::write_output(None, &instances)?,
    }
    match &groups_path {
        Some(p) => super::write_output(Some(p), &groups)?,
        None => super::write_output(None, &format!("\n{groups}"))?,
    }
    Ok(())
}
