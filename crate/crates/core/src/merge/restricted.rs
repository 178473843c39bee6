use std::collections::HashSet;

use super::partition::Partition;
use crate::error::{Error, Result};
use crate::model::Instance;
use crate::scalar::Scalar;
use crate::schedule::{check_feasible, Schedule};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sense {
    Le,
    Eq,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ConstraintKind {
    /// `x[i][t] = 0` for `t < d_i`.
    Release,
    /// `x[i][δ] = 1`.
    Completion,
    /// `x[i][t−1] − x[i][t] ≤ 0`.
    Monotone,
    /// `x[j][t] − x[i][t−d_j] ≤ 0` for an arc `i → j`.
    Precedence,
    /// `Σ_i r_im (x[i][t+d_i] − x[i][t]) ≤ R_m`.
    Resource,
}

impl ConstraintKind {
    pub fn tag(self) -> &'static str {
        match self {
            ConstraintKind::Release => "rel",
            ConstraintKind::Completion => "cmp",
            ConstraintKind::Monotone => "mon",
            ConstraintKind::Precedence => "prec",
            ConstraintKind::Resource => "res",
        }
    }
}

/// `Σ coef · y_group (sense) rhs` with terms sorted by group and no zero
/// coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearConstraint {
    pub kind: ConstraintKind,
    pub terms: Vec<(usize, i64)>,
    pub sense: Sense,
    pub rhs: i64,
}

impl LinearConstraint {
    pub fn is_satisfied(&self, y: &[bool]) -> bool {
        let lhs: i64 = self.terms.iter().filter(|&&(g, _)| y[g]).map(|&(_, c)| c).sum();
        match self.sense {
            Sense::Le => lhs <= self.rhs,
            Sense::Eq => lhs == self.rhs,
        }
    }
}

/// The time-indexed model with every cell `x[i][t]` replaced by the variable
/// `y_g` of its group.
#[derive(Clone, Debug)]
pub struct RestrictedModel<'a, F> {
    instance: &'a Instance<F>,
    partition: Partition,
    objective: Vec<F>,
    mass: Vec<F>,
    constraints: Vec<LinearConstraint>,
    warm_start: Vec<bool>,
    incumbent: Schedule,
}

impl<'a, F: Scalar> RestrictedModel<'a, F> {
    pub fn instance(&self) -> &'a Instance<F> {
        self.instance
    }

    pub fn partition(&self) -> &Partition {
        &self.partition
    }

    pub fn n_groups(&self) -> usize {
        self.partition.len()
    }

    /// Objective coefficient of every group.
    pub fn objective(&self) -> &[F] {
        &self.objective
    }

    /// `Σ |cell coefficient|` over the cells of each group.
    pub fn mass(&self) -> &[F] {
        &self.mass
    }

    pub fn constraints(&self) -> &[LinearConstraint] {
        &self.constraints
    }

    /// Group values of the incumbent.
    pub fn warm_start(&self) -> &[bool] {
        &self.warm_start
    }

    pub fn incumbent(&self) -> &Schedule {
        &self.incumbent
    }

    pub fn objective_value(&self, y: &[bool]) -> F {
        self.objective.iter().zip(y).filter(|(_, &v)| v).map(|(&c, _)| c).sum()
    }

    pub fn is_feasible(&self, y: &[bool]) -> bool {
        y.len() == self.n_groups() && self.constraints.iter().all(|c| c.is_satisfied(y))
    }

    /// Completion times read off the expanded matrix; `None` when some row
    /// is not a 0→1 step ending in 1 or completes before its duration.
    pub fn expand(&self, y: &[bool]) -> Option<Schedule> {
        let horizon = self.partition.horizon();
        let mut completions = Vec::with_capacity(self.instance.n());
        for i in 0..self.instance.n() {
            let row = (1..=horizon).map(|t| y[self.partition.group_of(i, t)]);
            let mut completion = None;
            for (t, v) in (1..=horizon).zip(row) {
                match (completion, v) {
                    (None, true) => completion = Some(t),
                    (Some(_), false) => return None,
                    _ => {}
                }
            }
            completions.push(completion?);
        }
        Schedule::from_completions(self.instance, &completions)
    }

    /// Group values of a schedule, or `None` if the schedule is not constant
    /// on some group.
    pub fn assignment_of(&self, schedule: &Schedule) -> Option<Vec<bool>> {
        group_assignment(&self.partition, &schedule.completions(self.instance))
    }
}

fn group_assignment(partition: &Partition, completions: &[u32]) -> Option<Vec<bool>> {
    let mut y = Vec::with_capacity(partition.len());
    for g in partition.groups() {
        let v = g[0].time >= completions[g[0].task];
        if g.iter().any(|c| (c.time >= completions[c.task]) != v) {
            return None;
        }
        y.push(v);
    }
    Some(y)
}

/// Per-cell objective coefficients of task `i`: the telescoped form of
/// `c_i e^{−α C_i}` over the step row.
pub(crate) fn cell_coefficients<F: Scalar>(instance: &Instance<F>, i: usize) -> Vec<F> {
    let horizon = instance.deadline();
    let c = instance.cashflow(i);
    let alpha = instance.discount();
    let disc = |t: u32| (-alpha * F::of(f64::from(t))).exp();
    (1..=horizon).map(|t| if t < horizon { c * (disc(t) - disc(t + 1)) } else { c * disc(t) }).collect()
}

struct Lifter<'p> {
    partition: &'p Partition,
    seen: HashSet<(Vec<(usize, i64)>, Sense, i64)>,
    out: Vec<LinearConstraint>,
}

impl Lifter<'_> {
    /// `cells` are `(task, time, coef)`; time 0 is the constant `x = 0`.
    fn push(&mut self, kind: ConstraintKind, cells: &[(usize, u32, i64)], sense: Sense, rhs: i64) -> Result<()> {
        let mut terms: Vec<(usize, i64)> =
            cells.iter().filter(|&&(_, t, _)| t > 0).map(|&(i, t, c)| (self.partition.group_of(i, t), c)).collect();
        terms.sort_unstable();
        let mut merged: Vec<(usize, i64)> = Vec::with_capacity(terms.len());
        for (g, c) in terms {
            match merged.last_mut() {
                Some((last, acc)) if *last == g => *acc += c,
                _ => merged.push((g, c)),
            }
        }
        merged.retain(|&(_, c)| c != 0);
        if merged.is_empty() {
            let ok = match sense {
                Sense::Le => 0 <= rhs,
                Sense::Eq => rhs == 0,
            };
            return if ok {
                Ok(())
            } else {
                Err(Error::Internal(format!("{} constraint reduces to 0 vs {rhs}", kind.tag())))
            };
        }
        if self.seen.insert((merged.clone(), sense, rhs)) {
            self.out.push(LinearConstraint { kind, terms: merged, sense, rhs });
        }
        Ok(())
    }
}

/// Lifts the time-indexed model onto the groups of `partition`. The
/// incumbent must be feasible and constant on every group; its group values
/// become the warm start.
pub fn build_restricted<'a, F: Scalar>(
    partition: Partition,
    instance: &'a Instance<F>,
    incumbent: &Schedule,
) -> Result<RestrictedModel<'a, F>> {
    let horizon = instance.deadline();
    if partition.n() != instance.n() || partition.horizon() != horizon {
        return Err(Error::Argument(format!(
            "partition is {} × {} but the instance is {} × {horizon}",
            partition.n(),
            partition.horizon(),
            instance.n()
        )));
    }
    let report = check_feasible(incumbent, instance);
    if !report.is_ok() {
        return Err(Error::Infeasible(report.violations));
    }
    let warm_start = group_assignment(&partition, &incumbent.completions(instance))
        .ok_or_else(|| Error::Contract("incumbent is not constant on every group".into()))?;

    let mut objective = vec![F::zero(); partition.len()];
    let mut mass = vec![F::zero(); partition.len()];
    for i in 0..instance.n() {
        for (t, coef) in (1..=horizon).zip(cell_coefficients(instance, i)) {
            let g = partition.group_of(i, t);
            objective[g] = objective[g] + coef;
            mass[g] = mass[g] + coef.abs();
        }
    }

    let mut lift = Lifter { partition: &partition, seen: HashSet::new(), out: Vec::new() };
    for i in 0..instance.n() {
        let d = instance.duration(i);
        for t in 1..d.min(horizon + 1) {
            lift.push(ConstraintKind::Release, &[(i, t, 1)], Sense::Eq, 0)?;
        }
        if horizon > 0 {
            lift.push(ConstraintKind::Completion, &[(i, horizon, 1)], Sense::Eq, 1)?;
        }
        for t in 2..=horizon {
            lift.push(ConstraintKind::Monotone, &[(i, t - 1, 1), (i, t, -1)], Sense::Le, 0)?;
        }
    }
    for &(i, j) in instance.precedence() {
        let dj = instance.duration(j);
        for t in dj.max(1)..=horizon {
            lift.push(ConstraintKind::Precedence, &[(j, t, 1), (i, t - dj, -1)], Sense::Le, 0)?;
        }
    }
    let mut cells = Vec::with_capacity(2 * instance.n());
    for m in 0..instance.k() {
        for p in 0..horizon {
            cells.clear();
            for i in 0..instance.n() {
                let r = i64::from(instance.demand(i, m));
                if r > 0 {
                    cells.push((i, (p + instance.duration(i)).min(horizon), r));
                    cells.push((i, p, -r));
                }
            }
            lift.push(ConstraintKind::Resource, &cells, Sense::Le, i64::from(instance.limits()[m]))?;
        }
    }
    let constraints = lift.out;

    Ok(RestrictedModel { instance, partition, objective, mass, constraints, warm_start, incumbent: incumbent.clone() })
}
