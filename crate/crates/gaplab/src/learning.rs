//! Datasets, losses, empirical risks and the joint measures induced by an algorithm.
//!
//! Datasets are ordered n-tuples of datapoint indices, encoded in mixed radix
//! with the last position varying fastest (the same order [`product_measure`]
//! uses). Losses are tabulated per datapoint and model; the empirical risk of a
//! dataset is the mean loss over its entries.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measures::{
    bayes_invert, log_sum_exp, marginalize, product_measure, FiniteMeasure, Kernel, SpaceId,
    DEFAULT_ENUMERATION_CAP,
};

pub fn model_space() -> SpaceId {
    SpaceId::new("models")
}

pub fn datapoint_space() -> SpaceId {
    SpaceId::new("datapoints")
}

/// Nonnegative loss ℓ[datapoint][model].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<f64>>", into = "Vec<Vec<f64>>")]
pub struct LossTable {
    num_datapoints: usize,
    num_models: usize,
    values: Vec<Vec<f64>>,
}

impl LossTable {
    pub fn new(values: Vec<Vec<f64>>) -> Result<Self> {
        let num_datapoints = values.len();
        let num_models = values.first().map_or(0, Vec::len);
        if num_datapoints == 0 || num_models == 0 {
            return Err(Error::InvalidParameter("loss table is empty".into()));
        }
        if values.iter().any(|row| row.len() != num_models) {
            return Err(Error::InvalidParameter("loss table is ragged".into()));
        }
        if values.iter().flatten().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::InvalidParameter(
                "loss entries must be finite and nonnegative".into(),
            ));
        }
        Ok(Self {
            num_datapoints,
            num_models,
            values,
        })
    }

    pub fn zeros(num_datapoints: usize, num_models: usize) -> Self {
        Self {
            num_datapoints,
            num_models,
            values: vec![vec![0.0; num_models]; num_datapoints],
        }
    }

    pub fn num_datapoints(&self) -> usize {
        self.num_datapoints
    }

    pub fn num_models(&self) -> usize {
        self.num_models
    }

    pub fn get(&self, datapoint: usize, model: usize) -> f64 {
        self.values[datapoint][model]
    }

    /// ℓ(·, θ) as a vector over datapoints.
    pub fn column(&self, model: usize) -> Vec<f64> {
        self.values.iter().map(|row| row[model]).collect()
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.values
    }
}

impl TryFrom<Vec<Vec<f64>>> for LossTable {
    type Error = Error;

    fn try_from(values: Vec<Vec<f64>>) -> Result<Self> {
        Self::new(values)
    }
}

impl From<LossTable> for Vec<Vec<f64>> {
    fn from(table: LossTable) -> Self {
        table.values
    }
}

/// The space of ordered datasets of length n.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DatasetSpace {
    num_datapoints: usize,
    n: usize,
    size: usize,
}

impl DatasetSpace {
    pub fn new(num_datapoints: usize, n: usize, cap: usize) -> Result<Self> {
        if num_datapoints == 0 || n == 0 {
            return Err(Error::InvalidParameter(
                "dataset space needs datapoints and n > 0".into(),
            ));
        }
        let size = (num_datapoints as u128)
            .checked_pow(n as u32)
            .unwrap_or(u128::MAX);
        if size > cap as u128 {
            return Err(Error::EnumerationCapExceeded { size, cap });
        }
        Ok(Self {
            num_datapoints,
            n,
            size: size as usize,
        })
    }

    pub fn num_datapoints(&self) -> usize {
        self.num_datapoints
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// Identifier matching the one produced by `product_measure` on datapoints.
    pub fn space_id(&self) -> SpaceId {
        SpaceId::new(format!("{}^{}", datapoint_space(), self.n))
    }

    pub fn encode(&self, tuple: &[usize]) -> Result<usize> {
        if tuple.len() != self.n {
            return Err(Error::InvalidParameter(format!(
                "tuple has length {} instead of {}",
                tuple.len(),
                self.n
            )));
        }
        tuple.iter().try_fold(0usize, |acc, &a| {
            if a >= self.num_datapoints {
                Err(Error::IndexOutOfRange {
                    index: a,
                    size: self.num_datapoints,
                })
            } else {
                Ok(acc * self.num_datapoints + a)
            }
        })
    }

    pub fn decode(&self, index: usize) -> Vec<usize> {
        let mut tuple = vec![0; self.n];
        let mut rest = index;
        for slot in tuple.iter_mut().rev() {
            *slot = rest % self.num_datapoints;
            rest /= self.num_datapoints;
        }
        tuple
    }

    /// Index of the sorted rearrangement of a dataset, the smallest index among
    /// its permutations.
    pub fn canonical(&self, index: usize) -> usize {
        let mut tuple = self.decode(index);
        tuple.sort_unstable();
        self.encode(&tuple).expect("sorted tuple stays in range")
    }
}

/// L(z, θ) for every dataset and model.
#[derive(Clone, Debug, PartialEq)]
pub struct RiskTable {
    values: Vec<Vec<f64>>,
}

impl RiskTable {
    pub fn new(space: &DatasetSpace, loss: &LossTable) -> Result<Self> {
        if loss.num_datapoints() != space.num_datapoints() {
            return Err(Error::InvalidParameter(
                "loss table and dataset space disagree on datapoints".into(),
            ));
        }
        let values = (0..space.size())
            .map(|z| {
                let tuple = space.decode(z);
                (0..loss.num_models())
                    .map(|t| tuple.iter().map(|&a| loss.get(a, t)).sum::<f64>() / space.n() as f64)
                    .collect()
            })
            .collect();
        Ok(Self { values })
    }

    pub fn get(&self, z: usize, model: usize) -> f64 {
        self.values[z][model]
    }

    /// L(z, ·) over models.
    pub fn row(&self, z: usize) -> &[f64] {
        &self.values[z]
    }

    /// L(·, θ) over datasets.
    pub fn column(&self, model: usize) -> Vec<f64> {
        self.values.iter().map(|r| r[model]).collect()
    }

    pub fn num_datasets(&self) -> usize {
        self.values.len()
    }

    pub fn num_models(&self) -> usize {
        self.values.first().map_or(0, Vec::len)
    }
}

/// Mean loss of model θ over the entries of dataset z.
pub fn empirical_risk(
    space: &DatasetSpace,
    loss: &LossTable,
    z: usize,
    theta: usize,
) -> Result<f64> {
    if z >= space.size() {
        return Err(Error::IndexOutOfRange {
            index: z,
            size: space.size(),
        });
    }
    if theta >= loss.num_models() {
        return Err(Error::IndexOutOfRange {
            index: theta,
            size: loss.num_models(),
        });
    }
    let tuple = space.decode(z);
    Ok(tuple.iter().map(|&a| loss.get(a, theta)).sum::<f64>() / space.n() as f64)
}

/// R_z(P) = Σ_θ P(θ) L(z, θ).
pub fn risk_over_models(risks: &RiskTable, z: usize, p: &FiniteMeasure) -> Result<f64> {
    if p.size() != risks.num_models() {
        return Err(Error::SpaceMismatch {
            left: format!("models[{}]", risks.num_models()),
            right: format!("{}[{}]", p.space(), p.size()),
        });
    }
    Ok(p.expectation(risks.row(z)))
}

/// R_θ(P) = Σ_z P(z) L(z, θ).
pub fn risk_over_datasets(
    risks: &RiskTable,
    theta: usize,
    p_datasets: &FiniteMeasure,
) -> Result<f64> {
    if p_datasets.size() != risks.num_datasets() {
        return Err(Error::SpaceMismatch {
            left: format!("datasets[{}]", risks.num_datasets()),
            right: format!("{}[{}]", p_datasets.space(), p_datasets.size()),
        });
    }
    Ok(p_datasets
        .support()
        .map(|z| p_datasets.mass(z) * risks.get(z, theta))
        .sum())
}

/// Σ_a P(a) ℓ(a, θ) for a measure over single datapoints.
pub fn pointwise_risk(theta: usize, p: &FiniteMeasure, loss: &LossTable) -> Result<f64> {
    if p.size() != loss.num_datapoints() {
        return Err(Error::SpaceMismatch {
            left: format!("datapoints[{}]", loss.num_datapoints()),
            right: format!("{}[{}]", p.space(), p.size()),
        });
    }
    if theta >= loss.num_models() {
        return Err(Error::IndexOutOfRange {
            index: theta,
            size: loss.num_models(),
        });
    }
    Ok(p.support().map(|a| p.mass(a) * loss.get(a, theta)).sum())
}

/// A complete problem instance.
#[derive(Clone, Debug, PartialEq)]
pub struct Scenario {
    pub loss: LossTable,
    pub n: usize,
    /// Per-datapoint data-generating measure.
    pub p_z: FiniteMeasure,
    /// Models given datasets, one row per dataset index.
    pub algorithm: Kernel,
    pub lambda: f64,
    pub beta: f64,
    /// Probability measure or counting measure over models.
    pub reference_q: FiniteMeasure,
    /// Probability measure over datapoints.
    pub reference_ps: FiniteMeasure,
}

impl Scenario {
    pub fn dataset_space(&self) -> Result<DatasetSpace> {
        DatasetSpace::new(self.loss.num_datapoints(), self.n, DEFAULT_ENUMERATION_CAP)
    }

    pub fn num_models(&self) -> usize {
        self.loss.num_models()
    }

    pub fn num_datapoints(&self) -> usize {
        self.loss.num_datapoints()
    }

    pub fn validate(&self) -> Result<()> {
        let space = self.dataset_space()?;
        if self.algorithm.num_conditions() != space.size() {
            return Err(Error::InvalidParameter(format!(
                "algorithm has {} rows for {} datasets",
                self.algorithm.num_conditions(),
                space.size()
            )));
        }
        if self.algorithm.target_size() != self.num_models() {
            return Err(Error::InvalidParameter(
                "algorithm rows and loss table disagree on models".into(),
            ));
        }
        if !self.p_z.is_normalized() || self.p_z.size() != self.num_datapoints() {
            return Err(Error::InvalidParameter(
                "P_Z must be a probability measure over datapoints".into(),
            ));
        }
        if self.reference_q.size() != self.num_models() {
            return Err(Error::InvalidParameter(
                "reference Q has the wrong size".into(),
            ));
        }
        if !self.reference_ps.is_normalized() || self.reference_ps.size() != self.num_datapoints() {
            return Err(Error::InvalidParameter(
                "reference P_S must be a probability measure over datapoints".into(),
            ));
        }
        if !(self.lambda > 0.0 && self.lambda.is_finite()) {
            return Err(Error::InvalidParameter("lambda must be positive".into()));
        }
        if !(self.beta > 0.0 && self.beta.is_finite()) {
            return Err(Error::InvalidParameter("beta must be positive".into()));
        }
        Ok(())
    }

    /// True when every algorithm row is unchanged by reordering its dataset.
    pub fn is_permutation_invariant(&self) -> Result<bool> {
        let space = self.dataset_space()?;
        Ok((0..space.size()).all(|z| {
            let c = space.canonical(z);
            match (self.algorithm.row(z), self.algorithm.row(c)) {
                (Ok(a), Ok(b)) => a == b,
                (Err(_), Err(_)) => true,
                _ => false,
            }
        }))
    }

    /// Copy of the scenario with another algorithm.
    pub fn with_algorithm(&self, algorithm: Kernel) -> Self {
        Self {
            algorithm,
            ..self.clone()
        }
    }
}

/// Everything derived from a scenario that the identities consume.
#[derive(Clone, Debug)]
pub struct Joint {
    pub space: DatasetSpace,
    pub risks: RiskTable,
    /// P_𝐙, the n-fold product of P_Z.
    pub p_datasets: FiniteMeasure,
    /// P_Θ, the algorithm averaged over datasets.
    pub p_theta: FiniteMeasure,
    /// P_𝐙|Θ, rows defined on the support of P_Θ.
    pub likelihood: Kernel,
    /// P_Z|Θ, the per-datapoint likelihood.
    pub per_sample: Kernel,
}

/// Builds P_𝐙, P_Θ, the dataset likelihood and the per-datapoint likelihood.
///
/// The per-datapoint row for θ is the average of the n coordinate marginals of
/// the dataset likelihood. For algorithms that ignore the order of the dataset
/// all coordinate marginals coincide and the average equals each of them.
pub fn build_joint(scenario: &Scenario) -> Result<Joint> {
    scenario.validate()?;
    let space = scenario.dataset_space()?;
    let risks = RiskTable::new(&space, &scenario.loss)?;
    let p_datasets = product_measure(&scenario.p_z, scenario.n, DEFAULT_ENUMERATION_CAP)?;
    let (likelihood, p_theta) = bayes_invert(&scenario.algorithm, &p_datasets)?;
    debug_assert_eq!(p_theta, marginalize(&scenario.algorithm, &p_datasets)?);

    let rows = (0..scenario.num_models())
        .map(|t| {
            likelihood
                .has_row(t)
                .then(|| average_coordinate_marginal(&space, likelihood.row(t)?))
                .transpose()
        })
        .collect::<Result<Vec<_>>>()?;
    let per_sample = Kernel::new(
        model_space(),
        datapoint_space(),
        scenario.num_datapoints(),
        rows,
    )?;
    Ok(Joint {
        space,
        risks,
        p_datasets,
        p_theta,
        likelihood,
        per_sample,
    })
}

/// Marginal of coordinate `t` of a measure over datasets.
pub fn coordinate_marginal(
    space: &DatasetSpace,
    p_datasets: &FiniteMeasure,
    t: usize,
) -> Result<FiniteMeasure> {
    let buckets = coordinate_buckets(space, p_datasets, |tuple| tuple[t]);
    let log_mass = buckets
        .iter()
        .map(|b| log_sum_exp_or_absent(b))
        .collect::<Result<Vec<_>>>()?;
    FiniteMeasure::from_normalized_log_masses(datapoint_space(), log_mass)
}

fn average_coordinate_marginal(space: &DatasetSpace, row: &FiniteMeasure) -> Result<FiniteMeasure> {
    let k = space.num_datapoints();
    let log_n = (space.n() as f64).ln();
    let mut buckets: Vec<Vec<f64>> = vec![Vec::new(); k];
    for z in row.support() {
        let l = row.log_masses()[z] - log_n;
        for a in space.decode(z) {
            buckets[a].push(l);
        }
    }
    let log_mass = buckets
        .iter()
        .map(|b| log_sum_exp_or_absent(b))
        .collect::<Result<Vec<_>>>()?;
    FiniteMeasure::from_normalized_log_masses(datapoint_space(), log_mass)
}

fn coordinate_buckets(
    space: &DatasetSpace,
    p: &FiniteMeasure,
    key: impl Fn(&[usize]) -> usize,
) -> Vec<Vec<f64>> {
    let mut buckets: Vec<Vec<f64>> = vec![Vec::new(); space.num_datapoints()];
    for z in p.support() {
        buckets[key(&space.decode(z))].push(p.log_masses()[z]);
    }
    buckets
}

fn log_sum_exp_or_absent(values: &[f64]) -> Result<f64> {
    if values.is_empty() {
        Ok(f64::NEG_INFINITY)
    } else {
        log_sum_exp(values)
    }
}
