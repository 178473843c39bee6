use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::model::Instance;
use crate::scalar::Scalar;
use crate::schedule::{encode_binary, BinaryEncoding, Schedule};

/// One binary cell `x[task][time]`, `time` in `1..=δ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cell {
    pub task: usize,
    pub time: u32,
}

impl Cell {
    pub fn new(task: usize, time: u32) -> Self {
        Cell { task, time }
    }
}

/// Encoded schedules sharing one shape. When a best-so-far exists it is the
/// first member.
#[derive(Clone, Debug)]
pub struct SolutionPool {
    encodings: Vec<BinaryEncoding>,
    schedules: Vec<Schedule>,
}

impl SolutionPool {
    /// Encodes every schedule; infeasible members are rejected.
    pub fn new<F: Scalar>(instance: &Instance<F>, schedules: Vec<Schedule>) -> Result<Self> {
        let encodings = schedules.iter().map(|s| encode_binary(s, instance)).collect::<Result<Vec<_>>>()?;
        Ok(SolutionPool { encodings, schedules })
    }

    /// A pool given only by encodings; schedules are left empty.
    pub fn from_encodings(encodings: Vec<BinaryEncoding>) -> Result<Self> {
        if let Some(first) = encodings.first() {
            if encodings.iter().any(|e| e.n() != first.n() || e.horizon() != first.horizon()) {
                return Err(Error::Argument("pool encodings differ in shape".into()));
            }
        }
        Ok(SolutionPool { encodings, schedules: Vec::new() })
    }

    pub fn len(&self) -> usize {
        self.encodings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.encodings.is_empty()
    }

    pub fn encodings(&self) -> &[BinaryEncoding] {
        &self.encodings
    }

    pub fn schedules(&self) -> &[Schedule] {
        &self.schedules
    }
}

/// Disjoint cover of the `n × δ` cells. Groups are kept in canonical form:
/// cells sorted within each group, groups ordered by their smallest cell.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    n: usize,
    horizon: u32,
    groups: Vec<Vec<Cell>>,
    group_of: Vec<usize>,
}

impl Partition {
    /// Validates that `groups` cover every cell exactly once and puts them
    /// in canonical form.
    pub fn from_groups(n: usize, horizon: u32, mut groups: Vec<Vec<Cell>>) -> Result<Self> {
        let cells = n * horizon as usize;
        let mut group_of = vec![usize::MAX; cells];
        groups.retain(|g| !g.is_empty());
        for g in &mut groups {
            g.sort_unstable();
        }
        groups.sort_unstable_by_key(|g| g[0]);
        for (id, g) in groups.iter().enumerate() {
            for &c in g {
                if c.task >= n || c.time == 0 || c.time > horizon {
                    return Err(Error::Argument(format!("cell {c:?} outside {n} × {horizon}")));
                }
                let slot = &mut group_of[c.task * horizon as usize + c.time as usize - 1];
                if *slot != usize::MAX {
                    return Err(Error::Argument(format!("cell {c:?} appears twice")));
                }
                *slot = id;
            }
        }
        if group_of.contains(&usize::MAX) {
            return Err(Error::Argument("groups do not cover every cell".into()));
        }
        Ok(Partition { n, horizon, groups, group_of })
    }

    /// Every cell in its own group.
    pub fn atomic(n: usize, horizon: u32) -> Self {
        let groups = (0..n).flat_map(|i| (1..=horizon).map(move |t| vec![Cell::new(i, t)])).collect();
        Partition::from_groups(n, horizon, groups).expect("atomic partition is a cover")
    }

    pub(crate) fn from_canonical(n: usize, horizon: u32, groups: Vec<Vec<Cell>>) -> Self {
        let mut group_of = vec![0; n * horizon as usize];
        for (id, g) in groups.iter().enumerate() {
            for c in g {
                group_of[c.task * horizon as usize + c.time as usize - 1] = id;
            }
        }
        Partition { n, horizon, groups, group_of }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn horizon(&self) -> u32 {
        self.horizon
    }

    pub fn len(&self) -> usize {
        self.groups.len()
    }

    pub fn is_empty(&self) -> bool {
        self.groups.is_empty()
    }

    pub fn groups(&self) -> &[Vec<Cell>] {
        &self.groups
    }

    pub fn group(&self, g: usize) -> &[Cell] {
        &self.groups[g]
    }

    #[inline]
    pub fn group_of(&self, task: usize, time: u32) -> usize {
        self.group_of[task * self.horizon as usize + time as usize - 1]
    }

    /// Whether every group of `self` lies inside a single group of `coarser`.
    pub fn refines(&self, coarser: &Partition) -> bool {
        self.n == coarser.n
            && self.horizon == coarser.horizon
            && self.groups.iter().all(|g| {
                let parent = coarser.group_of(g[0].task, g[0].time);
                g.iter().all(|c| coarser.group_of(c.task, c.time) == parent)
            })
    }

    pub fn is_atomic(&self) -> bool {
        self.groups.len() == self.n * self.horizon as usize
    }
}

/// Groups cells by their value vector across the pool. Group ids follow the
/// order of each group's smallest `(task, time)` cell.
pub fn partition(pool: &SolutionPool) -> Result<Partition> {
    let first = pool.encodings.first().ok_or(Error::EmptyPool)?;
    let (n, horizon) = (first.n(), first.horizon());
    let words = pool.len().div_ceil(64);
    let mut ids: HashMap<Vec<u64>, usize> = HashMap::new();
    let mut groups: Vec<Vec<Cell>> = Vec::new();
    let mut key = vec![0u64; words];
    for i in 0..n {
        for t in 1..=horizon {
            key.iter_mut().for_each(|w| *w = 0);
            for (s, enc) in pool.encodings.iter().enumerate() {
                if enc.value(i, t) {
                    key[s / 64] |= 1 << (s % 64);
                }
            }
            let next = groups.len();
            let id = *ids.entry(key.clone()).or_insert(next);
            if id == next {
                groups.push(Vec::new());
            }
            groups[id].push(Cell::new(i, t));
        }
    }
    Ok(Partition::from_canonical(n, horizon, groups))
}
