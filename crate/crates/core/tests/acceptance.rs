//! Acceptance suite. Prints one line per criterion and exits non-zero if any
//! criterion fails. Pass criterion numbers as arguments to run a subset.
//!
//! Environment:
//! - `NPVMERGE_ACCEPT_FULL=1` runs the wall-clock ordering check (7), which
//!   takes about 90 minutes at the default budget;
//! - `NPVMERGE_ACCEPT_BUDGET` sets its per-run budget in seconds (default 60);
//! - `NPVMERGE_PSPLIB_DIR` points it at real j30 `.sm` files instead of the
//!   synthetic stand-ins.

mod common;

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use common::{brute_force, matrix_feasible, random_topological, step_matrix, tiny_instance, TinyBounds};
use npvmerge::acs::{construct_permutation, run_colony, AcsParams, Budget, PheromoneMatrix};
use npvmerge::cli::prepare_text;
use npvmerge::merge::{
    build_restricted, export_lp, ms_pacs, partition, random_split, solve_exact, solve_restricted, MsParams, Partition,
    SolutionPool, SolveLimits,
};
use npvmerge::model::synthetic::{generate, SyntheticParams};
use npvmerge::model::{to_psplib_text, Instance, Task};
use npvmerge::paco::{run_paco, PacoMode, PacoParams};
use npvmerge::rng;
use npvmerge::schedule::{check_feasible, decode, npv};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tempfile::TempDir;

enum Verdict {
    Pass(String),
    Fail(String),
    Skip(String),
}

fn verdict(ok: bool, detail: String) -> Verdict {
    if ok {
        Verdict::Pass(detail)
    } else {
        Verdict::Fail(detail)
    }
}

fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1.0)
}

fn main() {
    let selected: BTreeSet<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let criteria: [(u32, &str, fn() -> Verdict); 10] = [
        (1, "oracle optimality", oracle_optimality),
        (2, "full-split equivalence", full_split_equivalence),
        (3, "partition/split properties", partition_split_properties),
        (4, "golden example", golden_example),
        (5, "decoder feasibility", decoder_feasibility),
        (6, "merge dominance", merge_dominance),
        (7, "scaled ordering", scaled_ordering),
        (8, "ACS arithmetic", acs_arithmetic),
        (9, "reproducibility", reproducibility),
        (10, "LP cross-check", lp_cross_check),
    ];
    let mut failed = 0;
    for (id, name, run) in criteria {
        if !selected.is_empty() && !selected.contains(&id) {
            continue;
        }
        let start = Instant::now();
        let (tag, detail) = match run() {
            Verdict::Pass(d) => ("PASS", d),
            Verdict::Fail(d) => {
                failed += 1;
                ("FAIL", d)
            }
            Verdict::Skip(d) => ("SKIP", d),
        };
        println!("criterion {id:>2} {name}: {tag} ({detail}; {:.1} s)", start.elapsed().as_secs_f64());
    }
    if failed > 0 {
        std::process::exit(1);
    }
}

fn oracle_optimality() -> Verdict {
    let mut r = ChaCha8Rng::seed_from_u64(1);
    let (mut matched, mut worst_err, mut slowest) = (0, 0.0f64, 0.0f64);
    let mut sizes = Vec::new();
    for _ in 0..50 {
        let inst = tiny_instance(&mut r, TinyBounds::ORACLE);
        sizes.push(inst.n());
        let (opt, _) = brute_force(&inst).unwrap();
        let start = Instant::now();
        let out = solve_exact(&inst, SolveLimits::time(Duration::from_secs(10))).unwrap();
        let secs = start.elapsed().as_secs_f64();
        let err = rel_err(out.npv, opt);
        worst_err = worst_err.max(err);
        slowest = slowest.max(secs);
        if out.optimal() && err <= 1e-9 && secs < 10.0 && check_feasible(&out.schedule, &inst).is_ok() {
            matched += 1;
        }
    }
    let mean_n = sizes.iter().sum::<usize>() as f64 / sizes.len() as f64;
    verdict(
        matched == 50,
        format!("{matched}/50 optimal, max rel err {worst_err:.1e}, slowest {slowest:.3} s, mean n {mean_n:.1}"),
    )
}

fn full_split_equivalence() -> Verdict {
    let mut r = ChaCha8Rng::seed_from_u64(2);
    let (mut agree, mut checked, mut feasible, mut exhaustive) = (0usize, 0usize, 0usize, 0usize);
    let mut mismatches = 0usize;
    for _ in 0..20 {
        let inst = tiny_instance(&mut r, TinyBounds::FULL_SPLIT);
        let n = inst.n();
        let h = inst.deadline();
        let warm = decode(&random_topological(&inst, &mut r), &inst);
        let model = build_restricted(Partition::atomic(n, h), &inst, &warm).unwrap();
        let p = model.partition();
        let assignment = |x: &[Vec<u8>]| {
            let mut y = vec![false; model.n_groups()];
            for (i, row) in x.iter().enumerate() {
                for (t, &v) in row.iter().enumerate() {
                    y[p.group_of(i, t as u32 + 1)] = v == 1;
                }
            }
            y
        };
        let mut compare = |x: &[Vec<u8>]| {
            let direct = matrix_feasible(&inst, x);
            let restricted = model.is_feasible(&assignment(x));
            checked += 1;
            feasible += usize::from(direct);
            if direct == restricted {
                agree += 1;
            } else {
                mismatches += 1;
            }
        };
        let cells = n * h as usize;
        if cells <= 20 {
            exhaustive += 1;
            for mask in 0u32..(1 << cells) {
                let x: Vec<Vec<u8>> = (0..n)
                    .map(|i| (0..h as usize).map(|t| (mask >> (i * h as usize + t) & 1) as u8).collect())
                    .collect();
                compare(&x);
            }
        } else {
            // every step matrix, and every matrix one bit away from one
            let mut c = vec![1u32; n];
            loop {
                let x = step_matrix(&c, h);
                compare(&x);
                for i in 0..n {
                    for t in 0..h as usize {
                        let mut y = x.clone();
                        y[i][t] ^= 1;
                        compare(&y);
                    }
                }
                let mut k = 0;
                while k < n && c[k] == h {
                    c[k] = 1;
                    k += 1;
                }
                if k == n {
                    break;
                }
                c[k] += 1;
            }
        }
    }
    verdict(
        mismatches == 0,
        format!(
            "{agree}/{checked} matrices agree, {feasible} feasible, {exhaustive}/20 instances fully enumerated, others over all step matrices and their one-bit neighbours"
        ),
    )
}

fn partition_split_properties() -> Verdict {
    let mut r = ChaCha8Rng::seed_from_u64(3);
    let mut failures = Vec::new();
    let trials = 10_000;
    for trial in 0..trials {
        let inst = tiny_instance(&mut r, common::SMALL);
        let size = r.gen_range(1..=6);
        let schedules: Vec<_> = (0..size).map(|_| decode(&random_topological(&inst, &mut r), &inst)).collect();
        let pool = SolutionPool::new(&inst, schedules).unwrap();
        let p = partition(&pool).unwrap();
        let k = r.gen_range(1..=10);
        let fine = random_split(&p, k, &mut r);
        let parts_ok = p
            .groups()
            .iter()
            .all(|g| g.iter().map(|c| fine.group_of(c.task, c.time)).collect::<BTreeSet<_>>().len() <= k.min(g.len()));
        let checks = [
            ("cover", common::is_valid_cover(&p)),
            ("uniform", common::groups_are_uniform(&p, &pool)),
            ("maximal", common::groups_are_maximal(&p, &pool)),
            ("split cover", common::is_valid_cover(&fine)),
            ("refines", fine.refines(&p)),
            ("at most K parts", parts_ok),
            ("K=1 identity", random_split(&p, 1, &mut r) == p),
            ("atomization", random_split(&p, inst.n() * inst.deadline() as usize, &mut r).is_atomic()),
        ];
        for (name, ok) in checks {
            if !ok {
                failures.push(format!("trial {trial}: {name}"));
            }
        }
    }
    verdict(
        failures.is_empty(),
        format!(
            "{trials} trials, {} violations{}",
            failures.len(),
            failures.first().map_or(String::new(), |f| format!(", first {f}"))
        ),
    )
}

/// Split seed whose single cut falls between the second and third time
/// points of the four-cell group.
const GOLDEN_SPLIT_SEED: u64 = 0;

fn golden_example() -> Verdict {
    let (inst, pool) = common::golden_pool();
    let p = partition(&pool).unwrap();
    let zero = p
        .groups()
        .iter()
        .find(|g| pool.encodings().iter().all(|e| !e.value(g[0].task, g[0].time)))
        .map_or(0, |g| g.len());
    let g4 = p.group(p.group_of(1, 3)).to_vec();
    let times: Vec<u32> = g4.iter().map(|c| c.time).collect();
    let fine = random_split(&p, 2, &mut rng::stream(GOLDEN_SPLIT_SEED, rng::SPLIT_STREAM));
    let mut parts: Vec<Vec<u32>> =
        g4.iter().map(|c| fine.group(fine.group_of(c.task, c.time)).iter().map(|c| c.time).collect()).collect();
    parts.dedup();
    let warm = pool.schedules()[0].clone();
    let single = SolutionPool::new(&inst, vec![warm.clone()]).unwrap();
    let model = build_restricted(partition(&single).unwrap(), &inst, &warm).unwrap();
    let lp_binaries = export_lp(&build_restricted(Partition::atomic(3, 11), &inst, &warm).unwrap())
        .split("Binaries")
        .nth(1)
        .map_or(0, |b| b.split_whitespace().filter(|w| w.starts_with("y_g")).count());
    let ok = zero == 11
        && times == [3, 4, 5, 6]
        && parts == [vec![3, 4], vec![5, 6]]
        && model.is_feasible(model.warm_start())
        && lp_binaries == 33;
    verdict(
        ok,
        format!(
            "all-zero group {zero} cells, 4-cell group times {times:?} split into {parts:?} at seed {GOLDEN_SPLIT_SEED}, incumbent feasible {}, atomic LP binaries {lp_binaries}",
            model.is_feasible(model.warm_start())
        ),
    )
}

fn synthetic(n: usize, seed: u64) -> Option<Instance<f64>> {
    let rf = [0.25, 0.5, 0.75, 1.0][(seed % 4) as usize];
    let rs = [0.2, 0.5, 0.7, 1.0][(seed / 4 % 4) as usize];
    let nc = [1.5, 1.8, 2.1][(seed / 16 % 3) as usize];
    let params = SyntheticParams { n, ..SyntheticParams::j30(rf, rs, nc) };
    let inst = generate::<f64>("syn", &params, seed);
    let inst = npvmerge::model::compute_deadline_and_discount(npvmerge::model::generate_cashflows(inst, seed));
    inst.ensure_solvable().is_ok().then_some(inst)
}

fn decoder_feasibility() -> Verdict {
    let mut r = ChaCha8Rng::seed_from_u64(5);
    let (mut pairs, mut infeasible, mut nondeterministic, mut instances) = (0usize, 0usize, 0usize, 0usize);
    let mut seed = 0u64;
    while pairs < 100_000 {
        let inst = if instances % 2 == 0 {
            tiny_instance(&mut r, TinyBounds::ORACLE)
        } else {
            seed += 1;
            match synthetic(r.gen_range(5..=30), seed) {
                Some(i) => i,
                None => continue,
            }
        };
        instances += 1;
        for _ in 0..100 {
            let perm = random_topological(&inst, &mut r);
            let s = decode(&perm, &inst);
            pairs += 1;
            if !check_feasible(&s, &inst).is_ok() {
                infeasible += 1;
            }
            if decode(&perm, &inst) != s {
                nondeterministic += 1;
            }
        }
    }
    verdict(
        infeasible == 0 && nondeterministic == 0,
        format!(
            "{pairs} pairs over {instances} instances, {infeasible} infeasible, {nondeterministic} non-deterministic"
        ),
    )
}

fn merge_dominance() -> Verdict {
    let instances: Vec<Instance<f64>> =
        (0..).filter_map(|s| synthetic(if s % 2 == 0 { 20 } else { 30 }, 100 + s)).take(10).collect();
    let params = MsParams {
        colonies: 3,
        t_total: Duration::from_secs(3600),
        t_iter: Duration::from_secs(30),
        acs_iterations: 20,
        max_iterations: Some(4),
        node_limit: Some(20_000),
        ..MsParams::default()
    };
    let (mut iterations, mut dominated, mut monotone_runs, mut runs, mut feasible) = (0, 0, 0, 0, 0);
    for inst in &instances {
        for seed in 0..10 {
            let res = ms_pacs(inst, &params, seed).unwrap();
            runs += 1;
            feasible += usize::from(check_feasible(&res.best, inst).is_ok());
            for it in &res.iterations {
                iterations += 1;
                let pool_max = it.pool_npvs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                dominated += usize::from(it.solve_npv >= pool_max);
            }
            let monotone = res.iterations.windows(2).all(|w| w[1].row.incumbent_npv >= w[0].row.incumbent_npv);
            monotone_runs += usize::from(monotone);
        }
    }
    verdict(
        dominated == iterations && monotone_runs == runs && feasible == runs && runs == 100,
        format!(
            "{runs} runs, solve >= pool max in {dominated}/{iterations} iterations, monotone in {monotone_runs}/{runs} runs, feasible {feasible}/{runs}"
        ),
    )
}

fn ordering_instances(dir: &Path) -> (Vec<Instance<f64>>, String) {
    if let Ok(src) = std::env::var("NPVMERGE_PSPLIB_DIR") {
        let mut files: Vec<PathBuf> = glob::glob(&format!("{src}/*.sm")).unwrap().filter_map(|p| p.ok()).collect();
        files.sort();
        let inst = files.iter().take(10).map(|f| Instance::from_json(&prepare_text(f, 1).unwrap()).unwrap()).collect();
        return (inst, format!("PSPLIB files from {src}"));
    }
    let inst = (0..10u64)
        .map(|s| {
            let params = SyntheticParams::j30(
                [0.25, 0.5, 0.75, 1.0][s as usize % 4],
                [0.2, 0.5, 0.7][s as usize % 3],
                [1.5, 1.8, 2.1][s as usize % 3],
            );
            let path = dir.join(format!("syn30_{s}.sm"));
            std::fs::write(&path, to_psplib_text(&generate::<f64>("syn", &params, 1000 + s))).unwrap();
            Instance::from_json(&prepare_text(&path, 1).unwrap()).unwrap()
        })
        .collect();
    (inst, "synthetic j30-style instances".into())
}

fn scaled_ordering() -> Verdict {
    if std::env::var("NPVMERGE_ACCEPT_FULL").as_deref() != Ok("1") {
        return Verdict::Skip("wall-clock run; set NPVMERGE_ACCEPT_FULL=1".into());
    }
    let budget: f64 = std::env::var("NPVMERGE_ACCEPT_BUDGET").ok().and_then(|v| v.parse().ok()).unwrap_or(60.0);
    let budget = Duration::from_secs_f64(budget);
    let dir = TempDir::new().unwrap();
    let (instances, source) = ordering_instances(dir.path());
    let acs = AcsParams::default();
    let (mut ms_sum, mut pacs_sum, mut acs_sum, mut wins, mut runs) = (0.0, 0.0, 0.0, 0, 0);
    for (idx, inst) in instances.iter().enumerate() {
        let (mut ms_i, mut acs_i) = (0.0, 0.0);
        for seed in 0..3u64 {
            let ms = MsParams {
                t_total: budget,
                t_iter: budget.mul_f64(60.0 / 900.0),
                acs_iterations: ORDERING_ACS_ITERS,
                ..MsParams::default()
            };
            let res = ms_pacs(inst, &ms, seed).unwrap();
            let m = res.npv;
            let deadline = Budget::default().with_deadline(Instant::now().checked_add(budget));
            let p = run_paco(
                inst,
                &PacoParams::new(5, acs.clone(), PacoMode::Standalone { sync_interval: 50 }),
                None,
                deadline,
                seed,
            )
            .unwrap()
            .global_best
            .npv;
            let deadline = Budget::default().with_deadline(Instant::now().checked_add(budget));
            let a =
                run_colony(inst, &acs, None, deadline, rng::stream(seed, rng::COLONY_STREAM_BASE)).unwrap().best.npv;
            eprintln!(
                "ordering instance {idx} seed {seed}: ms-pacs {m:.3} ({} merge iterations) pacs {p:.3} acs {a:.3}",
                res.iterations.len()
            );
            ms_i += m;
            acs_i += a;
            ms_sum += m;
            pacs_sum += p;
            acs_sum += a;
            runs += 1;
        }
        wins += usize::from(ms_i > acs_i);
    }
    let (m, p, a) = (ms_sum / runs as f64, pacs_sum / runs as f64, acs_sum / runs as f64);
    verdict(
        m >= p && p >= a && wins >= 7,
        format!(
            "{source}, {:.0} s budget, means ms-pacs {m:.3} pacs {p:.3} acs {a:.3}, ms-pacs beats acs on {wins}/10",
            budget.as_secs_f64()
        ),
    )
}

/// ACS iterations per colony per merge iteration in the ordering check.
const ORDERING_ACS_ITERS: usize = 200;

fn acs_arithmetic() -> Verdict {
    let mut tau = PheromoneMatrix::<f64>::uniform(3, 0.5);
    tau.local_update(0, 1, 0.1, 0.001);
    let local = tau.get(0, 1);
    let mut tau = PheromoneMatrix::<f64>::uniform(3, 0.5);
    tau.global_update(&[2, 0, 1], 0.1, 0.01);
    let global = tau.get(0, 2);
    for _ in 0..200 {
        tau.global_update(&[2, 0, 1], 0.1, 0.01);
    }
    let fixed = tau.get(1, 0);
    let arith_ok =
        (local - 0.051).abs() <= 1e-12 && (global - 0.06).abs() <= 1e-12 && (fixed - 0.01 / 0.9).abs() <= 1e-12;

    let weights = [0.1, 0.2, 0.3, 0.4];
    let tasks = (0..4).map(|id| Task { id, duration: 1, cashflow: 1.0, demand: vec![] }).collect();
    let inst = Instance::new("flat", tasks, vec![], vec![]).unwrap().with_deadline(8).with_discount(0.01);
    let mut worst = 0.0f64;
    for q0 in [0.0, 0.9] {
        let params = AcsParams { q0, ..AcsParams::default() };
        let mut base = PheromoneMatrix::<f64>::uniform(4, 0.5);
        for (j, w) in weights.iter().enumerate() {
            base.set(0, j, *w);
        }
        let mut r = rng::stream(8, 0);
        let mut counts = [0usize; 4];
        let draws = 100_000;
        for _ in 0..draws {
            let mut t = base.clone();
            counts[construct_permutation(&mut t, &inst, &params, &mut r)[0]] += 1;
        }
        let total: f64 = weights.iter().sum();
        for j in 0..4 {
            let greedy = if j == 3 { q0 } else { 0.0 };
            let expected = greedy + (1.0 - q0) * weights[j] / total;
            worst = worst.max((counts[j] as f64 / draws as f64 - expected).abs());
        }
    }
    verdict(
        arith_ok && worst <= 0.02,
        format!(
            "local {local:.12}, global {global:.12}, fixed point {fixed:.12}, max sampling deviation {:.4} over 1e5 draws for q0 in {{0, 0.9}}",
            worst
        ),
    )
}

fn solve_json(args: &[&str], threads: &str) -> Result<serde_json::Value, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_npvmerge"))
        .args(args)
        .env("NPVMERGE_THREADS", threads)
        .output()
        .map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(String::from_utf8_lossy(&out.stderr).into_owned());
    }
    let mut v: serde_json::Value = serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())?;
    v.as_object_mut().unwrap().remove("wall_secs");
    Ok(v)
}

fn reproducibility() -> Verdict {
    let dir = TempDir::new().unwrap();
    let mut compared = 0;
    let mut differing = Vec::new();
    for (n, seed) in [(12usize, 1u64), (20, 2), (30, 3)] {
        let inst = synthetic(n, seed).unwrap();
        let path = dir.path().join(format!("r{n}.json"));
        std::fs::write(&path, inst.to_json()).unwrap();
        for mode in ["ms-pacs", "pacs", "acs", "bnb-exact"] {
            if mode == "bnb-exact" && n > 12 {
                continue;
            }
            let sched = |tag: &str| dir.path().join(format!("{mode}_{n}_{tag}.json"));
            let run = |tag: &str, threads: &str| {
                let s = sched(tag);
                let args = [
                    "solve",
                    "--mode",
                    mode,
                    "--instance",
                    path.to_str().unwrap(),
                    "--seed",
                    "21",
                    "--colonies",
                    "4",
                    "--acs-iters",
                    "30",
                    "--sync-interval",
                    "10",
                    "--ms-iters",
                    "3",
                    "--node-limit",
                    "20000",
                    "--schedule",
                    s.to_str().unwrap(),
                ];
                solve_json(&args, threads).map(|v| (v, std::fs::read_to_string(&s).unwrap_or_default()))
            };
            let results = [run("a", "1"), run("b", "1"), run("c", "4")];
            compared += 1;
            match &results {
                [Ok(a), Ok(b), Ok(c)] if a == b && a == c => {}
                _ => differing.push(format!("{mode}/n{n}")),
            }
        }
    }
    let inst = synthetic(30, 9).unwrap();
    let pooled = |threads| {
        let params = PacoParams { colonies: 5, acs: AcsParams::default(), mode: PacoMode::Pooled, threads };
        let pool = run_paco(&inst, &params, None, Budget::iterations(40), 77).unwrap();
        pool.bests.iter().map(|b| (b.permutation.clone(), b.npv)).collect::<Vec<_>>()
    };
    let pooled_same = pooled(1) == pooled(4);
    verdict(
        differing.is_empty() && pooled_same,
        format!(
            "{} of {compared} solve configurations identical over two runs and threads {{1, 4}}{}, pooled rounds identical {pooled_same}",
            compared - differing.len(),
            if differing.is_empty() { String::new() } else { format!(" (differing: {})", differing.join(", ")) }
        ),
    )
}

const HIGHS_SCRIPT: &str = r#"
import sys
import highspy
for path in sys.argv[1:]:
    h = highspy.Highs()
    h.setOptionValue("output_flag", False)
    h.setOptionValue("mip_rel_gap", 0.0)
    h.readModel(path)
    h.run()
    print(path, h.modelStatusToString(h.getModelStatus()), repr(h.getInfo().objective_function_value))
"#;

fn lp_cross_check() -> Verdict {
    let available = Command::new("python3").args(["-c", "import highspy"]).output().is_ok_and(|o| o.status.success());
    if !available {
        return Verdict::Skip("python3 with highspy not available".into());
    }
    let dir = TempDir::new().unwrap();
    let mut r = ChaCha8Rng::seed_from_u64(10);
    let mut ours = Vec::new();
    let mut files = Vec::new();
    let mut groups = Vec::new();
    for m in 0..20 {
        let inst = tiny_instance(&mut r, TinyBounds::ORACLE);
        let schedules: Vec<_> = (0..3).map(|_| decode(&random_topological(&inst, &mut r), &inst)).collect();
        let warm = schedules.iter().max_by(|a, b| npv(a, &inst).total_cmp(&npv(b, &inst))).unwrap().clone();
        let pool = SolutionPool::new(&inst, schedules).unwrap();
        let p = if m % 4 == 0 {
            Partition::atomic(inst.n(), inst.deadline())
        } else {
            random_split(&partition(&pool).unwrap(), r.gen_range(1..6), &mut r)
        };
        let model = build_restricted(p, &inst, &warm).unwrap();
        let out = solve_restricted(&model, SolveLimits::unlimited()).unwrap();
        let path = dir.path().join(format!("m{m}.lp"));
        std::fs::write(&path, export_lp(&model)).unwrap();
        ours.push(out.npv);
        groups.push(model.n_groups());
        files.push(path.to_str().unwrap().to_string());
    }
    let out = Command::new("python3").arg("-c").arg(HIGHS_SCRIPT).args(&files).output().unwrap();
    if !out.status.success() {
        return Verdict::Fail(format!("external solver failed: {}", String::from_utf8_lossy(&out.stderr).trim()));
    }
    let text = String::from_utf8_lossy(&out.stdout);
    let mut matched = 0;
    let mut worst = 0.0f64;
    for (line, &v) in text.lines().zip(&ours) {
        let fields: Vec<&str> = line.split_whitespace().collect();
        let theirs: f64 = fields.last().and_then(|f| f.parse().ok()).unwrap_or(f64::NAN);
        let err = rel_err(theirs, v);
        worst = worst.max(if err.is_nan() { f64::INFINITY } else { err });
        matched += usize::from(line.contains("Optimal") && err <= 1e-6);
    }
    verdict(
        matched == 20,
        format!(
            "{matched}/20 models match HiGHS optimum, max rel err {worst:.1e}, group counts {}..{}",
            groups.iter().min().unwrap(),
            groups.iter().max().unwrap()
        ),
    )
}
