//! Reader and writer for PSPLIB single-mode (`.sm`) files.
//!
//! Only the sections needed for scheduling are interpreted: the job count,
//! the resource summary, precedence relations, requests/durations and
//! resource availabilities. The dummy source and sink jobs (zero duration,
//! zero demand) are removed and their arcs spliced, so job `j` of the file
//! becomes task `j - 2` when the source is present.

use std::fmt::Write as _;

use super::{Instance, Task};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

struct Line<'a> {
    no: usize,
    text: &'a str,
}

fn numbers(line: &Line<'_>) -> Result<Vec<i64>> {
    line.text
        .split_whitespace()
        .map(|tok| tok.parse::<i64>().map_err(|_| Error::parse(line.no, format!("expected integer, found `{tok}`"))))
        .collect()
}

fn value_after_colon(line: &Line<'_>) -> Result<i64> {
    let rest =
        line.text.split_once(':').map(|(_, r)| r).ok_or_else(|| Error::parse(line.no, "expected `key : value`"))?;
    rest.split_whitespace()
        .next()
        .and_then(|tok| tok.parse().ok())
        .ok_or_else(|| Error::parse(line.no, format!("expected integer after `:` in `{}`", line.text.trim())))
}

fn is_rule(text: &str) -> bool {
    let t = text.trim();
    !t.is_empty() && t.chars().all(|c| c == '*' || c == '-')
}

/// Parses the text of a PSPLIB single-mode file into an instance without
/// cash flows, deadline or discount.
pub fn parse_psplib<F: Scalar>(text: &str, name: &str) -> Result<Instance<F>> {
    let lines: Vec<Line<'_>> = text.lines().enumerate().map(|(i, text)| Line { no: i + 1, text }).collect();

    let mut jobs: Option<usize> = None;
    let mut renewable: Option<usize> = None;
    let mut successors: Option<Vec<Vec<usize>>> = None;
    let mut requests: Option<Vec<(u32, Vec<u32>)>> = None;
    let mut limits: Option<Vec<u32>> = None;

    let mut idx = 0;
    while idx < lines.len() {
        let line = &lines[idx];
        let lower = line.text.trim().to_ascii_lowercase();
        if lower.starts_with("jobs") {
            let v = value_after_colon(line)?;
            jobs = Some(usize::try_from(v).map_err(|_| Error::parse(line.no, "negative job count"))?);
        } else if lower.starts_with("- renewable") {
            renewable = Some(value_after_colon(line)? as usize);
        } else if lower.starts_with("- nonrenewable") || lower.starts_with("- doubly constrained") {
            if value_after_colon(line)? != 0 {
                return Err(Error::Unsupported(format!(
                    "line {}: non-renewable or doubly constrained resources",
                    line.no
                )));
            }
        } else if lower.starts_with("precedence relations") {
            let n = jobs.ok_or_else(|| Error::parse(line.no, "precedence section before job count"))?;
            let (succ, next) = parse_precedence(&lines, idx + 1, n)?;
            successors = Some(succ);
            idx = next;
            continue;
        } else if lower.starts_with("requests/durations") {
            let n = jobs.ok_or_else(|| Error::parse(line.no, "request section before job count"))?;
            let k = renewable.ok_or_else(|| Error::parse(line.no, "request section before resource summary"))?;
            let (req, next) = parse_requests(&lines, idx + 1, n, k)?;
            requests = Some(req);
            idx = next;
            continue;
        } else if lower.starts_with("resourceavailabilities") {
            let k = renewable.ok_or_else(|| Error::parse(line.no, "availabilities before resource summary"))?;
            let values_line = lines.get(idx + 2).ok_or_else(|| Error::parse(line.no, "missing availability values"))?;
            let values = numbers(values_line)?;
            if values.len() < k {
                return Err(Error::parse(values_line.no, format!("expected {k} availabilities")));
            }
            let caps = values[..k]
                .iter()
                .map(|&v| u32::try_from(v).map_err(|_| Error::parse(values_line.no, "negative availability")))
                .collect::<Result<Vec<_>>>()?;
            limits = Some(caps);
            idx += 3;
            continue;
        }
        idx += 1;
    }

    let eof = lines.len();
    let successors = successors.ok_or_else(|| Error::parse(eof, "missing PRECEDENCE RELATIONS section"))?;
    let requests = requests.ok_or_else(|| Error::parse(eof, "missing REQUESTS/DURATIONS section"))?;
    let limits = limits.ok_or_else(|| Error::parse(eof, "missing RESOURCEAVAILABILITIES section"))?;
    assemble(name, successors, requests, limits)
}

fn parse_precedence(lines: &[Line<'_>], mut idx: usize, n: usize) -> Result<(Vec<Vec<usize>>, usize)> {
    // skip column header
    while idx < lines.len() && lines[idx].text.trim().to_ascii_lowercase().starts_with("jobnr") {
        idx += 1;
    }
    let mut succ = vec![Vec::new(); n];
    let mut seen = vec![false; n];
    for _ in 0..n {
        let line = lines.get(idx).ok_or_else(|| Error::parse(idx, "unexpected end of precedence section"))?;
        let v = numbers(line)?;
        if v.len() < 3 {
            return Err(Error::parse(line.no, "precedence row needs job, modes, successor count"));
        }
        let job = job_index(v[0], n, line.no)?;
        if v[1] != 1 {
            return Err(Error::Unsupported(format!("line {}: multi-mode job {}", line.no, v[0])));
        }
        let count = usize::try_from(v[2]).map_err(|_| Error::parse(line.no, "negative successor count"))?;
        if v.len() != 3 + count {
            return Err(Error::parse(
                line.no,
                format!("job {} lists {} successors, declared {count}", v[0], v.len() - 3),
            ));
        }
        for &s in &v[3..] {
            succ[job].push(job_index(s, n, line.no)?);
        }
        seen[job] = true;
        idx += 1;
    }
    if let Some(missing) = seen.iter().position(|s| !s) {
        return Err(Error::parse(idx, format!("no precedence row for job {}", missing + 1)));
    }
    Ok((succ, idx))
}

fn parse_requests(lines: &[Line<'_>], mut idx: usize, n: usize, k: usize) -> Result<(Vec<(u32, Vec<u32>)>, usize)> {
    while idx < lines.len() {
        let t = lines[idx].text.trim().to_ascii_lowercase();
        if t.starts_with("jobnr") || is_rule(&t) {
            idx += 1;
        } else {
            break;
        }
    }
    let mut out = vec![None; n];
    for _ in 0..n {
        let line = lines.get(idx).ok_or_else(|| Error::parse(idx, "unexpected end of request section"))?;
        let v = numbers(line)?;
        if v.len() < 3 + k {
            return Err(Error::parse(line.no, format!("request row needs job, mode, duration and {k} demands")));
        }
        let job = job_index(v[0], n, line.no)?;
        if v[1] != 1 {
            return Err(Error::Unsupported(format!("line {}: multi-mode job {}", line.no, v[0])));
        }
        let to_u32 = |x: i64| u32::try_from(x).map_err(|_| Error::parse(line.no, "negative value"));
        let duration = to_u32(v[2])?;
        let demand = v[3..3 + k].iter().map(|&x| to_u32(x)).collect::<Result<Vec<_>>>()?;
        out[job] = Some((duration, demand));
        idx += 1;
    }
    let rows = out
        .into_iter()
        .enumerate()
        .map(|(j, r)| r.ok_or_else(|| Error::parse(idx, format!("no request row for job {}", j + 1))))
        .collect::<Result<Vec<_>>>()?;
    Ok((rows, idx))
}

fn job_index(raw: i64, n: usize, line: usize) -> Result<usize> {
    if raw >= 1 && (raw as usize) <= n {
        Ok(raw as usize - 1)
    } else {
        Err(Error::parse(line, format!("unknown task id {raw}")))
    }
}

fn assemble<F: Scalar>(
    name: &str,
    successors: Vec<Vec<usize>>,
    requests: Vec<(u32, Vec<u32>)>,
    limits: Vec<u32>,
) -> Result<Instance<F>> {
    let n = successors.len();
    let mut predecessors = vec![Vec::new(); n];
    for (i, succ) in successors.iter().enumerate() {
        for &j in succ {
            predecessors[j].push(i);
        }
    }
    let is_dummy = |j: usize| requests[j].0 == 0 && requests[j].1.iter().all(|&r| r == 0);
    let mut removed = vec![false; n];
    if n >= 1 && is_dummy(0) && predecessors[0].is_empty() {
        removed[0] = true;
    }
    if n >= 2 && is_dummy(n - 1) && successors[n - 1].is_empty() {
        removed[n - 1] = true;
    }

    // splice arcs through removed jobs
    let mut arcs = Vec::new();
    for (i, succ) in successors.iter().enumerate() {
        if removed[i] {
            continue;
        }
        for &j in succ {
            if removed[j] {
                for &s in &successors[j] {
                    if !removed[s] {
                        arcs.push((i, s));
                    }
                }
            } else {
                arcs.push((i, j));
            }
        }
    }

    let mut new_id = vec![usize::MAX; n];
    let mut tasks = Vec::new();
    for j in 0..n {
        if removed[j] {
            continue;
        }
        new_id[j] = tasks.len();
        let (duration, demand) = requests[j].clone();
        tasks.push(Task { id: tasks.len(), duration, cashflow: F::zero(), demand });
    }
    let arcs = arcs.into_iter().map(|(i, j)| (new_id[i], new_id[j])).collect();
    Instance::new(name, tasks, arcs, limits)
}

/// Writes an instance in PSPLIB single-mode layout, adding a dummy source
/// and sink job. `parse_psplib` on the output restores the same structure.
pub fn to_psplib_text<F: Scalar>(instance: &Instance<F>) -> String {
    let n = instance.n();
    let k = instance.k();
    let jobs = n + 2;
    let rule = "*".repeat(72);
    let mut out = String::new();
    let _ = writeln!(out, "{rule}");
    let _ = writeln!(out, "file with basedata            : {}.bas", instance.name());
    let _ = writeln!(out, "initial value random generator: {}", instance.seed().unwrap_or(0));
    let _ = writeln!(out, "{rule}");
    let _ = writeln!(out, "projects                      :  1");
    let _ = writeln!(out, "jobs (incl. supersource/sink ):  {jobs}");
    let _ = writeln!(out, "horizon                       :  {}", instance.total_duration());
    let _ = writeln!(out, "RESOURCES");
    let _ = writeln!(out, "  - renewable                 :  {k}   R");
    let _ = writeln!(out, "  - nonrenewable              :  0   N");
    let _ = writeln!(out, "  - doubly constrained        :  0   D");
    let _ = writeln!(out, "{rule}");
    let _ = writeln!(out, "PROJECT INFORMATION:");
    let _ = writeln!(out, "pronr.  #jobs rel.date duedate tardcost  MPM-Time");
    let cp = instance.critical_path_length();
    let _ = writeln!(out, "    1     {n:>2}      0       {cp:>2}        0       {cp:>2}");
    let _ = writeln!(out, "{rule}");
    let _ = writeln!(out, "PRECEDENCE RELATIONS:");
    let _ = writeln!(out, "jobnr.    #modes  #successors   successors");
    let sources: Vec<usize> = (0..n).filter(|&i| instance.predecessors(i).is_empty()).map(|i| i + 2).collect();
    write_prec_row(&mut out, 1, &sources);
    for i in 0..n {
        let succ: Vec<usize> = if instance.successors(i).is_empty() {
            vec![jobs]
        } else {
            instance.successors(i).iter().map(|&j| j + 2).collect()
        };
        write_prec_row(&mut out, i + 2, &succ);
    }
    write_prec_row(&mut out, jobs, &[]);
    let _ = writeln!(out, "{rule}");
    let _ = writeln!(out, "REQUESTS/DURATIONS:");
    let header: String = (1..=k).map(|m| format!("  R{m:>2}")).collect();
    let _ = writeln!(out, "jobnr. mode duration{header}");
    let _ = writeln!(out, "{}", "-".repeat(72));
    let zeros = vec![0u32; k];
    write_request_row(&mut out, 1, 0, &zeros);
    for (i, task) in instance.tasks().iter().enumerate() {
        write_request_row(&mut out, i + 2, task.duration, &task.demand);
    }
    write_request_row(&mut out, jobs, 0, &zeros);
    let _ = writeln!(out, "{rule}");
    let _ = writeln!(out, "RESOURCEAVAILABILITIES:");
    let _ = writeln!(out, "{}", (1..=k).map(|m| format!("  R{m:>2}")).collect::<String>());
    let _ = writeln!(out, "{}", instance.limits().iter().map(|l| format!("  {l:>3}")).collect::<String>());
    let _ = writeln!(out, "{rule}");
    out
}

fn write_prec_row(out: &mut String, job: usize, succ: &[usize]) {
    let list: String = succ.iter().map(|s| format!("  {s:>3}")).collect();
    let _ = writeln!(out, "  {job:>3}        1          {:>2}       {list}", succ.len());
}

fn write_request_row(out: &mut String, job: usize, duration: u32, demand: &[u32]) {
    let d: String = demand.iter().map(|r| format!("  {r:>3}")).collect();
    let _ = writeln!(out, "  {job:>3}      1     {duration:>2}    {d}");
}
