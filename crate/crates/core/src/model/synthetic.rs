//! Random single-mode instances in the style of the PSPLIB generator.
//!
//! Durations and demands are uniform on `1..=10`. A task requests each
//! resource with probability `resource_factor`. Precedence arcs always go
//! from lower to higher task ids; every non-start task gets a predecessor,
//! every non-end task a successor, and random extra arcs are added until
//! there are about `network_complexity · n` arcs. Capacities interpolate
//! between the largest single demand and the peak usage of the
//! unconstrained earliest-start schedule with `resource_strength`.

use rand::seq::SliceRandom;
use rand::Rng;

use super::{Instance, InstanceAttributes, Task};
use crate::rng;
use crate::scalar::Scalar;

#[derive(Clone, Debug)]
pub struct SyntheticParams {
    pub n: usize,
    pub k: usize,
    pub resource_factor: f64,
    pub resource_strength: f64,
    pub network_complexity: f64,
    pub max_duration: u32,
    pub max_demand: u32,
}

impl SyntheticParams {
    /// Thirty tasks and four resources, like the j30 set.
    pub fn j30(resource_factor: f64, resource_strength: f64, network_complexity: f64) -> Self {
        SyntheticParams {
            n: 30,
            k: 4,
            resource_factor,
            resource_strength,
            network_complexity,
            max_duration: 10,
            max_demand: 10,
        }
    }
}

/// Generates the structure (durations, demands, arcs, limits). Cash flows,
/// deadline and discount are left unset.
pub fn generate<F: Scalar>(name: &str, params: &SyntheticParams, seed: u64) -> Instance<F> {
    let mut rng = rng::stream(seed, 0x5157);
    let n = params.n;
    let k = params.k;

    let durations: Vec<u32> = (0..n).map(|_| rng.gen_range(1..=params.max_duration.max(1))).collect();
    let demands: Vec<Vec<u32>> = (0..n)
        .map(|_| {
            let mut d: Vec<u32> = (0..k)
                .map(|_| {
                    if rng.gen_bool(params.resource_factor.clamp(0.0, 1.0)) {
                        rng.gen_range(1..=params.max_demand.max(1))
                    } else {
                        0
                    }
                })
                .collect();
            if k > 0 && d.iter().all(|&r| r == 0) && params.resource_factor > 0.0 {
                let m = rng.gen_range(0..k);
                d[m] = rng.gen_range(1..=params.max_demand.max(1));
            }
            d
        })
        .collect();

    let mut arcs = Vec::new();
    if n > 1 {
        let n_start = rng.gen_range(1..=3.min(n - 1));
        let n_end = rng.gen_range(1..=3.min(n - 1));
        let mut has_succ = vec![false; n];
        for j in n_start..n {
            let i = rng.gen_range(0..j.min(n - n_end).max(1));
            arcs.push((i, j));
            has_succ[i] = true;
        }
        for i in 0..n.saturating_sub(n_end) {
            if !has_succ[i] {
                let j = rng.gen_range((i + 1).max(n_start)..n);
                arcs.push((i, j));
            }
        }
        let target = (params.network_complexity * n as f64).round() as usize;
        let mut candidates: Vec<(usize, usize)> =
            (0..n).flat_map(|i| ((i + 1).max(n_start)..n).map(move |j| (i, j))).collect();
        candidates.shuffle(&mut rng);
        arcs.sort_unstable();
        arcs.dedup();
        for c in candidates {
            if arcs.len() >= target {
                break;
            }
            if c.0 < n - n_end && !arcs.contains(&c) {
                arcs.push(c);
            }
        }
    }

    // earliest-start peak usage for capacities
    let mut finish = vec![0u32; n];
    let mut preds = vec![Vec::new(); n];
    for &(i, j) in &arcs {
        preds[j].push(i);
    }
    for j in 0..n {
        let start = preds[j].iter().map(|&i| finish[i]).max().unwrap_or(0);
        finish[j] = start + durations[j];
    }
    let horizon = finish.iter().copied().max().unwrap_or(0) as usize;
    let limits = (0..k)
        .map(|m| {
            let r_min = demands.iter().map(|d| d[m]).max().unwrap_or(0);
            let mut usage = vec![0u32; horizon];
            for j in 0..n {
                for u in &mut usage[(finish[j] - durations[j]) as usize..finish[j] as usize] {
                    *u += demands[j][m];
                }
            }
            let r_max = usage.into_iter().max().unwrap_or(0).max(r_min);
            let cap = f64::from(r_min) + params.resource_strength * f64::from(r_max - r_min);
            (cap.round() as u32).max(r_min).max(1)
        })
        .collect();

    let tasks = (0..n)
        .map(|id| Task { id, duration: durations[id], cashflow: F::zero(), demand: demands[id].clone() })
        .collect();
    Instance::new(name, tasks, arcs, limits).expect("generated arcs point forward").with_attributes(Some(
        InstanceAttributes {
            rf: Some(params.resource_factor),
            rs: Some(params.resource_strength),
            nc: Some(params.network_complexity),
        },
    ))
}
