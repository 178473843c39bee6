use rand::seq::index;
use rand::Rng;

use super::partition::{Cell, Partition};

/// Refines every group into at most `k` non-empty parts.
///
/// Cells of a group are laid out by `(time, task)`. Up to `k − 1` cuts are
/// drawn uniformly without replacement among the boundaries between distinct
/// time points. When `k − 1` exceeds the number of such boundaries, every
/// time boundary is cut and the remaining cuts are drawn among the
/// boundaries separating tasks that share a time point, so a large enough
/// `k` atomizes the group. `k = 1` leaves the partition unchanged and draws
/// nothing.
pub fn random_split<R: Rng + ?Sized>(partition: &Partition, k: usize, rng: &mut R) -> Partition {
    let cuts_wanted = k.saturating_sub(1);
    if cuts_wanted == 0 {
        return partition.clone();
    }
    let mut out: Vec<Vec<Cell>> = Vec::with_capacity(partition.len());
    for group in partition.groups() {
        if group.len() < 2 {
            out.push(group.clone());
            continue;
        }
        let mut cells = group.clone();
        cells.sort_unstable_by_key(|c| (c.time, c.task));
        // boundary b separates cells[b] and cells[b + 1]
        let (time_bounds, task_bounds): (Vec<usize>, Vec<usize>) =
            (0..cells.len() - 1).partition(|&b| cells[b].time != cells[b + 1].time);
        let mut cuts: Vec<usize> = if cuts_wanted >= time_bounds.len() {
            time_bounds.clone()
        } else {
            index::sample(rng, time_bounds.len(), cuts_wanted).into_iter().map(|j| time_bounds[j]).collect()
        };
        let extra = cuts_wanted.saturating_sub(time_bounds.len()).min(task_bounds.len());
        if extra > 0 {
            cuts.extend(index::sample(rng, task_bounds.len(), extra).into_iter().map(|j| task_bounds[j]));
        }
        cuts.sort_unstable();
        let mut from = 0;
        for b in cuts.into_iter().chain(std::iter::once(cells.len() - 1)) {
            let mut part = cells[from..=b].to_vec();
            part.sort_unstable();
            out.push(part);
            from = b + 1;
        }
    }
    out.sort_unstable_by_key(|g| g[0]);
    Partition::from_canonical(partition.n(), partition.horizon(), out)
}
