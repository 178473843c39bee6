//! Project instances: tasks, precedence DAG, renewable resources, deadline
//! and discount rate.

mod generate;
mod psplib;
mod sidecar;
pub mod synthetic;

pub use generate::{compute_deadline_and_discount, generate_cashflows, predecessor_duration_sums};
pub use generate::{CASHFLOW_MAX, CASHFLOW_MIN, DEADLINE_FACTOR};
pub use psplib::{parse_psplib, to_psplib_text};
pub use sidecar::{InstanceAttributes, InstanceFile};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Task<F> {
    pub id: usize,
    pub duration: u32,
    pub cashflow: F,
    pub demand: Vec<u32>,
}

/// A single-mode project. The precedence arcs and resource data are fixed at
/// construction; cash flows, deadline and discount are filled in by
/// [`generate_cashflows`] and [`compute_deadline_and_discount`] or read from
/// a sidecar file.
#[derive(Clone, Debug)]
pub struct Instance<F> {
    name: String,
    tasks: Vec<Task<F>>,
    precedence: Vec<(usize, usize)>,
    limits: Vec<u32>,
    deadline: u32,
    discount: F,
    seed: Option<u64>,
    attributes: Option<InstanceAttributes>,
    successors: Vec<Vec<usize>>,
    predecessors: Vec<Vec<usize>>,
    topo: Vec<usize>,
}

impl<F: Scalar> PartialEq for Instance<F> {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name
            && self.tasks == other.tasks
            && self.precedence == other.precedence
            && self.limits == other.limits
            && self.deadline == other.deadline
            && self.discount == other.discount
            && self.seed == other.seed
            && self.attributes == other.attributes
    }
}

impl<F: Scalar> Instance<F> {
    /// Builds an instance and checks its structure: task ids are `0..n` in
    /// order, every demand vector has one entry per resource, precedence
    /// arcs reference existing tasks and form a DAG. Duplicate arcs are
    /// dropped; arcs are kept sorted.
    pub fn new(
        name: impl Into<String>,
        tasks: Vec<Task<F>>,
        precedence: Vec<(usize, usize)>,
        limits: Vec<u32>,
    ) -> Result<Self> {
        let n = tasks.len();
        for (idx, task) in tasks.iter().enumerate() {
            if task.id != idx {
                return Err(Error::InvalidInstance(format!("task at position {idx} has id {}", task.id)));
            }
            if task.demand.len() != limits.len() {
                return Err(Error::InvalidInstance(format!(
                    "task {idx} has {} demands for {} resources",
                    task.demand.len(),
                    limits.len()
                )));
            }
        }
        let mut precedence = precedence;
        precedence.sort_unstable();
        precedence.dedup();
        let mut successors = vec![Vec::new(); n];
        let mut predecessors = vec![Vec::new(); n];
        for &(i, j) in &precedence {
            if i >= n {
                return Err(Error::UnknownTask(i));
            }
            if j >= n {
                return Err(Error::UnknownTask(j));
            }
            if i == j {
                return Err(Error::Cycle(i));
            }
            successors[i].push(j);
            predecessors[j].push(i);
        }
        let topo = topological_order(&successors, &predecessors)?;
        Ok(Instance {
            name: name.into(),
            tasks,
            precedence,
            limits,
            deadline: 0,
            discount: F::zero(),
            seed: None,
            attributes: None,
            successors,
            predecessors,
            topo,
        })
    }
}

impl<F: Copy> Instance<F> {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn n(&self) -> usize {
        self.tasks.len()
    }

    /// Number of renewable resources.
    pub fn k(&self) -> usize {
        self.limits.len()
    }

    pub fn tasks(&self) -> &[Task<F>] {
        &self.tasks
    }

    pub fn task(&self, i: usize) -> &Task<F> {
        &self.tasks[i]
    }

    pub fn duration(&self, i: usize) -> u32 {
        self.tasks[i].duration
    }

    pub fn cashflow(&self, i: usize) -> F {
        self.tasks[i].cashflow
    }

    pub fn demand(&self, i: usize, m: usize) -> u32 {
        self.tasks[i].demand[m]
    }

    pub fn precedence(&self) -> &[(usize, usize)] {
        &self.precedence
    }

    pub fn successors(&self, i: usize) -> &[usize] {
        &self.successors[i]
    }

    pub fn predecessors(&self, i: usize) -> &[usize] {
        &self.predecessors[i]
    }

    /// A topological order of the tasks (Kahn's algorithm, smallest id first).
    pub fn topological_order(&self) -> &[usize] {
        &self.topo
    }

    pub fn limits(&self) -> &[u32] {
        &self.limits
    }

    pub fn deadline(&self) -> u32 {
        self.deadline
    }

    pub fn discount(&self) -> F {
        self.discount
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    pub fn attributes(&self) -> Option<&InstanceAttributes> {
        self.attributes.as_ref()
    }

    pub fn total_duration(&self) -> u64 {
        self.tasks.iter().map(|t| u64::from(t.duration)).sum()
    }

    /// Length of the longest duration-weighted precedence chain.
    pub fn critical_path_length(&self) -> u32 {
        let mut finish = vec![0u32; self.n()];
        for &j in &self.topo {
            let start = self.predecessors[j].iter().map(|&i| finish[i]).max().unwrap_or(0);
            finish[j] = start + self.tasks[j].duration;
        }
        finish.into_iter().max().unwrap_or(0)
    }
}

impl<F: Scalar> Instance<F> {
    pub fn with_cashflows(mut self, cashflows: &[F]) -> Result<Self> {
        if cashflows.len() != self.n() {
            return Err(Error::InvalidInstance(format!("{} cash flows for {} tasks", cashflows.len(), self.n())));
        }
        for (task, &c) in self.tasks.iter_mut().zip(cashflows) {
            task.cashflow = c;
        }
        Ok(self)
    }

    pub fn with_deadline(mut self, deadline: u32) -> Self {
        self.deadline = deadline;
        self
    }

    pub fn with_discount(mut self, discount: F) -> Self {
        self.discount = discount;
        self
    }

    pub fn with_seed(mut self, seed: Option<u64>) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_attributes(mut self, attributes: Option<InstanceAttributes>) -> Self {
        self.attributes = attributes;
        self
    }

    /// Checks that the instance can be handed to the solvers: every task has
    /// positive duration and fits the resource limits, the discount rate is
    /// positive, the deadline covers the critical path, and a serial
    /// schedule in topological order fits before the deadline (so the
    /// decoder always has a feasible fallback).
    pub fn ensure_solvable(&self) -> Result<()> {
        for task in &self.tasks {
            if task.duration == 0 {
                return Err(Error::InvalidInstance(format!("task {} has zero duration", task.id)));
            }
            for (m, (&r, &cap)) in task.demand.iter().zip(&self.limits).enumerate() {
                if r > cap {
                    return Err(Error::InvalidInstance(format!(
                        "task {} demands {r} of resource {m} with capacity {cap}",
                        task.id
                    )));
                }
            }
        }
        if !(self.discount > F::zero()) {
            return Err(Error::InvalidInstance("discount rate must be positive".into()));
        }
        let cp = self.critical_path_length();
        if self.deadline < cp {
            return Err(Error::InvalidInstance(format!(
                "deadline {} is shorter than the critical path {cp}",
                self.deadline
            )));
        }
        if crate::schedule::serial_schedule(self, &self.topo).is_none() {
            return Err(Error::InvalidInstance(format!("no serial schedule fits within deadline {}", self.deadline)));
        }
        Ok(())
    }
}

fn topological_order(successors: &[Vec<usize>], predecessors: &[Vec<usize>]) -> Result<Vec<usize>> {
    use std::cmp::Reverse;
    use std::collections::BinaryHeap;

    let n = successors.len();
    let mut indeg: Vec<usize> = predecessors.iter().map(Vec::len).collect();
    let mut ready: BinaryHeap<Reverse<usize>> = (0..n).filter(|&i| indeg[i] == 0).map(Reverse).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(Reverse(i)) = ready.pop() {
        order.push(i);
        for &j in &successors[i] {
            indeg[j] -= 1;
            if indeg[j] == 0 {
                ready.push(Reverse(j));
            }
        }
    }
    if order.len() < n {
        let stuck = (0..n).find(|&i| indeg[i] > 0).unwrap_or(0);
        return Err(Error::Cycle(stuck));
    }
    Ok(order)
}
