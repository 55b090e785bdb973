//! Worst-case data-generating (WCDG) measures and the data-driven gap.
//!
//! For a model θ, a reference P_S over datapoints and β > 0 the WCDG measure
//! has log-mass `log P_S(a) + ℓ(a,θ)/β − J(1/β)` with
//! `J(t) = log Σ_a P_S(a) exp(t ℓ(a,θ))`. The tilt pushes mass toward
//! high-loss datapoints, the opposite sign of the Gibbs posterior.

use crate::error::{Error, Result};
use crate::learning::LossTable;
use crate::measures::{log_sum_exp, relative_entropy, FiniteMeasure};

#[derive(Clone, Debug, PartialEq)]
pub struct WcdgSpec {
    reference: FiniteMeasure,
    beta: f64,
}

impl WcdgSpec {
    pub fn new(reference: FiniteMeasure, beta: f64) -> Result<Self> {
        if !(beta > 0.0 && beta.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "beta must be positive, got {beta}"
            )));
        }
        if !reference.is_normalized() {
            return Err(Error::InvalidParameter(
                "P_S must be a probability measure".into(),
            ));
        }
        if reference.support_len() == 0 {
            return Err(Error::EmptySupport);
        }
        Ok(Self { reference, beta })
    }

    pub fn reference(&self) -> &FiniteMeasure {
        &self.reference
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }
}

fn loss_column(theta: usize, loss: &LossTable, p: &FiniteMeasure) -> Result<Vec<f64>> {
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
    Ok(loss.column(theta))
}

/// J(t) = log Σ_a P_S(a) exp(t ℓ(a, θ)).
pub fn log_mgf(spec: &WcdgSpec, theta: usize, t: f64, loss: &LossTable) -> Result<f64> {
    let ps = &spec.reference;
    let col = loss_column(theta, loss, ps)?;
    let terms: Vec<f64> = ps
        .support()
        .map(|a| ps.log_masses()[a] + t * col[a])
        .collect();
    log_sum_exp(&terms)
}

/// The WCDG measure at θ. Its support equals support(P_S).
pub fn wcdg_measure(spec: &WcdgSpec, theta: usize, loss: &LossTable) -> Result<FiniteMeasure> {
    let j = log_mgf(spec, theta, 1.0 / spec.beta, loss)?;
    let col = loss.column(theta);
    let log_mass = spec
        .reference
        .log_masses()
        .iter()
        .zip(&col)
        .map(|(&ls, &l)| {
            if ls.is_finite() {
                ls + l / spec.beta - j
            } else {
                f64::NEG_INFINITY
            }
        })
        .collect();
    FiniteMeasure::from_normalized_log_masses(spec.reference.space().clone(), log_mass)
}

/// ∫ℓ(·,θ) dQ1 − ∫ℓ(·,θ) dQ2.
pub fn gap_data_direct(
    theta: usize,
    q1: &FiniteMeasure,
    q2: &FiniteMeasure,
    loss: &LossTable,
) -> Result<f64> {
    let col = loss_column(theta, loss, q1)?;
    loss_column(theta, loss, q2)?;
    Ok(q1.expectation(&col) - q2.expectation(&col))
}

/// β(D(P‖P_S) − D(P‖Ŵ) − D(Ŵ‖P_S)), the gap ∫ℓ dP − ∫ℓ dŴ in closed form.
pub fn gap_from_wcdg(
    theta: usize,
    p: &FiniteMeasure,
    spec: &WcdgSpec,
    loss: &LossTable,
) -> Result<f64> {
    let w = wcdg_measure(spec, theta, loss)?;
    let ps = &spec.reference;
    Ok(spec.beta
        * (relative_entropy(p, ps)? - relative_entropy(p, &w)? - relative_entropy(&w, ps)?))
}

/// β(D(P2‖Ŵ) − D(P1‖Ŵ) − D(P2‖P_S) + D(P1‖P_S)), equal to ∫ℓ dP1 − ∫ℓ dP2.
pub fn gap_data_general_closed_form(
    theta: usize,
    p1: &FiniteMeasure,
    p2: &FiniteMeasure,
    spec: &WcdgSpec,
    loss: &LossTable,
) -> Result<f64> {
    let w = wcdg_measure(spec, theta, loss)?;
    let ps = &spec.reference;
    Ok(spec.beta
        * (relative_entropy(p2, &w)? - relative_entropy(p1, &w)? - relative_entropy(p2, ps)?
            + relative_entropy(p1, ps)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::learning::datapoint_space;
    use crate::measures::{convex_combination, total_variation};

    fn setup() -> (WcdgSpec, LossTable) {
        let ps = FiniteMeasure::uniform(datapoint_space(), 2);
        (
            WcdgSpec::new(ps, 1.0).unwrap(),
            LossTable::new(vec![vec![0.0], vec![1.0]]).unwrap(),
        )
    }

    #[test]
    fn log_mgf_values() {
        let (spec, loss) = setup();
        assert_eq!(log_mgf(&spec, 0, 0.0, &loss).unwrap(), 0.0);
        let j = log_mgf(&spec, 0, 1.0, &loss).unwrap();
        assert!((j - ((1.0 + 1f64.exp()) / 2.0).ln()).abs() < 1e-15);
        let flat = LossTable::new(vec![vec![0.3], vec![0.3]]).unwrap();
        assert!((log_mgf(&spec, 0, 2.0, &flat).unwrap() - 0.6).abs() < 1e-15);
    }

    #[test]
    fn measure_values() {
        let (spec, loss) = setup();
        let w = wcdg_measure(&spec, 0, &loss).unwrap();
        assert!((w.mass(0) - 0.2689414).abs() < 1e-7);
        assert!((w.mass(1) - 0.7310586).abs() < 1e-7);
        let flat = LossTable::new(vec![vec![0.3], vec![0.3]]).unwrap();
        let w = wcdg_measure(&spec, 0, &flat).unwrap();
        assert!(total_variation(&w, spec.reference()).unwrap() < 1e-15);
        let cold = WcdgSpec::new(spec.reference().clone(), 1e6).unwrap();
        let w = wcdg_measure(&cold, 0, &loss).unwrap();
        assert!(total_variation(&w, spec.reference()).unwrap() < 1e-5);
    }

    #[test]
    fn gap_at_reference_is_nonpositive() {
        let (spec, loss) = setup();
        let ps = spec.reference().clone();
        let w = wcdg_measure(&spec, 0, &loss).unwrap();
        let closed = gap_from_wcdg(0, &ps, &spec, &loss).unwrap();
        let expected = -spec.beta()
            * (relative_entropy(&ps, &w).unwrap() + relative_entropy(&w, &ps).unwrap());
        assert!((closed - expected).abs() < 1e-15);
        assert!((gap_data_direct(0, &ps, &w, &loss).unwrap() - expected).abs() < 1e-15);
        assert!(closed <= 0.0);
        assert!(gap_from_wcdg(0, &w, &spec, &loss).unwrap().abs() < 1e-15);
    }

    #[test]
    fn general_form_with_mixture_reference() {
        let loss = LossTable::new(vec![vec![0.1], vec![0.7]]).unwrap();
        let p1 = FiniteMeasure::point_mass(datapoint_space(), 2, 0).unwrap();
        let p2 = FiniteMeasure::point_mass(datapoint_space(), 2, 1).unwrap();
        let mix = convex_combination(&p1, &p2, 0.5).unwrap();
        let spec = WcdgSpec::new(mix, 2.0).unwrap();
        let closed = gap_data_general_closed_form(0, &p1, &p2, &spec, &loss).unwrap();
        let direct = gap_data_direct(0, &p1, &p2, &loss).unwrap();
        assert!((closed - direct).abs() < 1e-12);
        assert!(WcdgSpec::new(FiniteMeasure::counting(datapoint_space(), 2), 1.0).is_err());
    }
}
