//! JSON sidecar holding a fully prepared instance.
//!
//! ```json
//! {"name": "j301_1", "n": 30, "k": 4,
//!  "durations": [..], "demands": [[..], ..], "limits": [..],
//!  "precedence": [[0, 4], ..], "cashflows": [..],
//!  "deadline": 150, "alpha": 0.0009387..., "seed": 7}
//! ```
//!
//! Task ids are 0-based. Optional PSPLIB generation attributes `rf`, `rs` and
//! `nc` are written only when known.

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{Instance, Task};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct InstanceAttributes {
    /// Resource factor.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rf: Option<f64>,
    /// Resource strength.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rs: Option<f64>,
    /// Network complexity.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nc: Option<f64>,
}

impl InstanceAttributes {
    fn is_empty(&self) -> bool {
        self.rf.is_none() && self.rs.is_none() && self.nc.is_none()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InstanceFile {
    pub name: String,
    pub n: usize,
    pub k: usize,
    pub durations: Vec<u32>,
    pub demands: Vec<Vec<u32>>,
    pub limits: Vec<u32>,
    pub precedence: Vec<[usize; 2]>,
    pub cashflows: Vec<f64>,
    pub deadline: u32,
    pub alpha: f64,
    pub seed: Option<u64>,
    #[serde(flatten)]
    pub attributes: InstanceAttributes,
}

impl InstanceFile {
    pub fn from_instance<F: Scalar>(instance: &Instance<F>) -> Self {
        InstanceFile {
            name: instance.name().to_string(),
            n: instance.n(),
            k: instance.k(),
            durations: instance.tasks().iter().map(|t| t.duration).collect(),
            demands: instance.tasks().iter().map(|t| t.demand.clone()).collect(),
            limits: instance.limits().to_vec(),
            precedence: instance.precedence().iter().map(|&(i, j)| [i, j]).collect(),
            cashflows: instance.tasks().iter().map(|t| t.cashflow.as_f64()).collect(),
            deadline: instance.deadline(),
            alpha: instance.discount().as_f64(),
            seed: instance.seed(),
            attributes: instance.attributes().cloned().unwrap_or_default(),
        }
    }

    pub fn into_instance<F: Scalar>(self) -> Result<Instance<F>> {
        if self.durations.len() != self.n || self.demands.len() != self.n || self.cashflows.len() != self.n {
            return Err(Error::InvalidInstance(format!(
                "sidecar declares n = {} but lists {} durations, {} demands, {} cash flows",
                self.n,
                self.durations.len(),
                self.demands.len(),
                self.cashflows.len()
            )));
        }
        if self.limits.len() != self.k {
            return Err(Error::InvalidInstance(format!(
                "sidecar declares k = {} but lists {} limits",
                self.k,
                self.limits.len()
            )));
        }
        let tasks = (0..self.n)
            .map(|id| Task {
                id,
                duration: self.durations[id],
                cashflow: F::of(self.cashflows[id]),
                demand: self.demands[id].clone(),
            })
            .collect();
        let precedence = self.precedence.iter().map(|&[i, j]| (i, j)).collect();
        let attributes = (!self.attributes.is_empty()).then_some(self.attributes);
        Ok(Instance::new(self.name, tasks, precedence, self.limits)?
            .with_deadline(self.deadline)
            .with_discount(F::of(self.alpha))
            .with_seed(self.seed)
            .with_attributes(attributes))
    }
}

impl<F: Scalar> Instance<F> {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&InstanceFile::from_instance(self)).expect("sidecar serialises")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str::<InstanceFile>(text)?.into_instance()
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::from(e).in_file(path.display().to_string()))?;
        Self::from_json(&text).map_err(|e| e.in_file(path.display().to_string()))
    }
}
