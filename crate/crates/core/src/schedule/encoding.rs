use super::{check_feasible, Schedule};
use crate::error::{Error, Result};
use crate::model::Instance;
use crate::scalar::Scalar;

/// The `n × δ` step matrix `x[i][t] = 1` iff task `i` has completed by time
/// point `t` (`t = 1..=δ`). Every row of a feasible schedule is a single
/// 0→1 step, so the matrix is stored as its completion times.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BinaryEncoding {
    horizon: u32,
    completions: Vec<u32>,
}

impl BinaryEncoding {
    /// Encodes a feasible schedule.
    pub fn encode<F: Scalar>(schedule: &Schedule, instance: &Instance<F>) -> Result<Self> {
        let report = check_feasible(schedule, instance);
        if !report.is_ok() {
            return Err(Error::Infeasible(report.violations));
        }
        Ok(BinaryEncoding { horizon: instance.deadline(), completions: schedule.completions(instance) })
    }

    /// Reads a matrix row by row; each row must be monotone and end in 1.
    pub fn from_rows(rows: &[Vec<u8>]) -> Result<Self> {
        let horizon = rows.first().map_or(0, |r| r.len());
        let mut completions = Vec::with_capacity(rows.len());
        for (i, row) in rows.iter().enumerate() {
            if row.len() != horizon {
                return Err(Error::Argument(format!("row {i} has length {} not {horizon}", row.len())));
            }
            if row.windows(2).any(|w| w[0] > w[1]) || row.last() != Some(&1) || row.iter().any(|&v| v > 1) {
                return Err(Error::Argument(format!("row {i} is not a 0→1 step ending in 1")));
            }
            let first_one = row.iter().position(|&v| v == 1).expect("row ends in 1");
            completions.push(first_one as u32 + 1);
        }
        Ok(BinaryEncoding { horizon: horizon as u32, completions })
    }

    pub fn horizon(&self) -> u32 {
        self.horizon
    }

    pub fn n(&self) -> usize {
        self.completions.len()
    }

    pub fn completions(&self) -> &[u32] {
        &self.completions
    }

    /// `x[i][t]` for `t` in `1..=δ`.
    #[inline]
    pub fn value(&self, task: usize, time: u32) -> bool {
        time >= self.completions[task]
    }

    pub fn row(&self, task: usize) -> Vec<u8> {
        (1..=self.horizon).map(|t| u8::from(self.value(task, t))).collect()
    }

    pub fn rows(&self) -> Vec<Vec<u8>> {
        (0..self.n()).map(|i| self.row(i)).collect()
    }

    pub fn to_schedule<F: Scalar>(&self, instance: &Instance<F>) -> Option<Schedule> {
        Schedule::from_completions(instance, &self.completions)
    }
}

/// Shorthand for [`BinaryEncoding::encode`].
pub fn encode_binary<F: Scalar>(schedule: &Schedule, instance: &Instance<F>) -> Result<BinaryEncoding> {
    BinaryEncoding::encode(schedule, instance)
}
