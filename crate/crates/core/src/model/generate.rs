use rand::Rng;

use super::Instance;
use crate::rng;
use crate::scalar::Scalar;

pub const CASHFLOW_MIN: f64 = -500.0;
pub const CASHFLOW_MAX: f64 = 1000.0;
/// Deadline multiplier applied to the largest predecessor duration sum.
pub const DEADLINE_FACTOR: f64 = 3.5;

/// Draws `n` cash flows i.i.d. uniform on `[-500, 1000]` from stream
/// [`rng::CASHFLOW_STREAM`] of `seed`.
pub fn draw_cashflows(n: usize, seed: u64) -> Vec<f64> {
    let mut rng = rng::stream(seed, rng::CASHFLOW_STREAM);
    (0..n).map(|_| rng.gen_range(CASHFLOW_MIN..=CASHFLOW_MAX)).collect()
}

/// Replaces every cash flow with a fresh uniform draw and records `seed`.
pub fn generate_cashflows<F: Scalar>(instance: Instance<F>, seed: u64) -> Instance<F> {
    let flows: Vec<F> = draw_cashflows(instance.n(), seed).into_iter().map(F::of).collect();
    instance.with_cashflows(&flows).expect("one cash flow per task").with_seed(Some(seed))
}

/// `l_j`: total duration of all transitive predecessors of each task.
pub fn predecessor_duration_sums<F: Scalar>(instance: &Instance<F>) -> Vec<u64> {
    let n = instance.n();
    let words = n.div_ceil(64).max(1);
    let mut ancestors = vec![vec![0u64; words]; n];
    for &j in instance.topological_order() {
        let mut acc = vec![0u64; words];
        for &i in instance.predecessors(j) {
            acc[i / 64] |= 1 << (i % 64);
            for (a, b) in acc.iter_mut().zip(&ancestors[i]) {
                *a |= *b;
            }
        }
        ancestors[j] = acc;
    }
    ancestors
        .iter()
        .map(|set| (0..n).filter(|&i| set[i / 64] >> (i % 64) & 1 == 1).map(|i| u64::from(instance.duration(i))).sum())
        .collect()
}

/// Weekly discount rate equivalent to 5% per year over 52 periods.
pub fn weekly_discount_rate() -> f64 {
    1.05f64.powf(1.0 / 52.0) - 1.0
}

/// Sets `δ = ceil(3.5 · max_j l_j)` (falling back to `ceil(3.5 · Σ d_i)`
/// when no task has a predecessor) and `α = 1.05^(1/52) − 1`.
pub fn compute_deadline_and_discount<F: Scalar>(instance: Instance<F>) -> Instance<F> {
    let longest = predecessor_duration_sums(&instance).into_iter().max().unwrap_or(0);
    let base = if longest == 0 { instance.total_duration() } else { longest };
    // ceil(3.5 · base) without going through floating point
    let deadline = (7 * base).div_ceil(2);
    let deadline = u32::try_from(deadline).unwrap_or(u32::MAX);
    instance.with_deadline(deadline).with_discount(F::of(weekly_discount_rate()))
}
