//! Gibbs posteriors over models and the algorithm-driven gap.
//!
//! For a dataset z with empirical risks L(z, ·), a reference Q over models and
//! a temperature λ > 0, the Gibbs posterior has log-mass
//! `log Q(θ) − L(z,θ)/λ − K(−1/λ)` where `K(t) = log Σ_θ Q(θ) exp(t L(z,θ))`.
//! On a finite model set K is finite for every real t, so every λ > 0 is
//! admissible and no domain check is needed beyond positivity.
//!
//! Functions take the risk vector `L(z, ·)` directly, so they work for any
//! dataset index the caller has tabulated.

use crate::error::{Error, Result};
use crate::measures::{convex_combination, log_sum_exp, relative_entropy, FiniteMeasure};

#[derive(Clone, Debug, PartialEq)]
pub struct GibbsSpec {
    reference: FiniteMeasure,
    lambda: f64,
}

impl GibbsSpec {
    pub fn new(reference: FiniteMeasure, lambda: f64) -> Result<Self> {
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "lambda must be positive, got {lambda}"
            )));
        }
        if reference.support_len() == 0 {
            return Err(Error::EmptySupport);
        }
        Ok(Self { reference, lambda })
    }

    pub fn reference(&self) -> &FiniteMeasure {
        &self.reference
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }
}

fn check_len(risk: &[f64], p: &FiniteMeasure) -> Result<()> {
    if risk.len() != p.size() {
        return Err(Error::SpaceMismatch {
            left: format!("risk vector[{}]", risk.len()),
            right: format!("{}[{}]", p.space(), p.size()),
        });
    }
    Ok(())
}

/// K(t) = log Σ_θ Q(θ) exp(t L(z, θ)).
pub fn log_partition(spec: &GibbsSpec, risk: &[f64], t: f64) -> Result<f64> {
    let q = &spec.reference;
    check_len(risk, q)?;
    let terms: Vec<f64> = q
        .support()
        .map(|a| q.log_masses()[a] + t * risk[a])
        .collect();
    if terms.is_empty() {
        return Err(Error::EmptySupport);
    }
    log_sum_exp(&terms)
}

/// The Gibbs posterior for the given risks. Its support equals support(Q).
pub fn gibbs_posterior(spec: &GibbsSpec, risk: &[f64]) -> Result<FiniteMeasure> {
    let k = log_partition(spec, risk, -1.0 / spec.lambda)?;
    let q = &spec.reference;
    let log_mass = q
        .log_masses()
        .iter()
        .zip(risk)
        .map(|(&lq, &l)| {
            if lq.is_finite() {
                lq - l / spec.lambda - k
            } else {
                f64::NEG_INFINITY
            }
        })
        .collect();
    FiniteMeasure::from_normalized_log_masses(q.space().clone(), log_mass)
}

/// R_z(P1) − R_z(P2).
pub fn gap_algorithm_direct(risk: &[f64], p1: &FiniteMeasure, p2: &FiniteMeasure) -> Result<f64> {
    check_len(risk, p1)?;
    check_len(risk, p2)?;
    if p1.space() != p2.space() {
        return Err(Error::SpaceMismatch {
            left: p1.space().to_string(),
            right: p2.space().to_string(),
        });
    }
    Ok(p1.expectation(risk) - p2.expectation(risk))
}

/// λ(D(G‖Q) + D(P‖G) − D(P‖Q)), the gap R_z(P) − R_z(G) in closed form.
pub fn gap_from_gibbs(risk: &[f64], p: &FiniteMeasure, spec: &GibbsSpec) -> Result<f64> {
    let g = gibbs_posterior(spec, risk)?;
    let q = &spec.reference;
    Ok(spec.lambda
        * (relative_entropy(&g, q)? + relative_entropy(p, &g)? - relative_entropy(p, q)?))
}

/// λ(D(P1‖G) − D(P2‖G) + D(P2‖Q) − D(P1‖Q)), equal to R_z(P1) − R_z(P2)
/// for any admissible (Q, λ).
pub fn gap_general_closed_form(
    risk: &[f64],
    p1: &FiniteMeasure,
    p2: &FiniteMeasure,
    spec: &GibbsSpec,
) -> Result<f64> {
    let g = gibbs_posterior(spec, risk)?;
    let q = &spec.reference;
    Ok(spec.lambda
        * (relative_entropy(p1, &g)? - relative_entropy(p2, &g)? + relative_entropy(p2, q)?
            - relative_entropy(p1, q)?))
}

/// The general closed form with Q = αP1 + (1−α)P2, which dominates both
/// arguments whatever their supports.
pub fn gap_mixture_reference(
    risk: &[f64],
    p1: &FiniteMeasure,
    p2: &FiniteMeasure,
    alpha: f64,
    lambda: f64,
) -> Result<f64> {
    let q = convex_combination(p1, p2, alpha)?;
    gap_general_closed_form(risk, p1, p2, &GibbsSpec::new(q, lambda)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::learning::model_space;
    use crate::measures::total_variation;

    fn uniform2() -> FiniteMeasure {
        FiniteMeasure::uniform(model_space(), 2)
    }

    #[test]
    fn log_partition_values() {
        let spec = GibbsSpec::new(uniform2(), 1.0).unwrap();
        assert_eq!(log_partition(&spec, &[0.0, 1.0], 0.0).unwrap(), 0.0);
        let k = log_partition(&spec, &[0.0, 1.0], -1.0).unwrap();
        assert!((k - ((1.0 + (-1.0f64).exp()) / 2.0).ln()).abs() < 1e-15);
        let c = log_partition(&spec, &[0.3, 0.3], 2.0).unwrap();
        assert!((c - 0.6).abs() < 1e-15);
    }

    #[test]
    fn posterior_values() {
        let spec = GibbsSpec::new(uniform2(), 1.0).unwrap();
        let g = gibbs_posterior(&spec, &[0.0, 1.0]).unwrap();
        assert!((g.mass(0) - 0.7310586).abs() < 1e-7);
        assert!((g.mass(1) - 0.2689414).abs() < 1e-7);
        let flat = gibbs_posterior(&spec, &[0.4, 0.4]).unwrap();
        assert!(total_variation(&flat, &uniform2()).unwrap() < 1e-15);
        let hot = GibbsSpec::new(uniform2(), 1e6).unwrap();
        let g = gibbs_posterior(&hot, &[0.0, 1.0]).unwrap();
        assert!(total_variation(&g, &uniform2()).unwrap() < 1e-5);
    }

    #[test]
    fn counting_reference_matches_uniform() {
        let counting = GibbsSpec::new(FiniteMeasure::counting(model_space(), 3), 0.5).unwrap();
        let uniform = GibbsSpec::new(FiniteMeasure::uniform(model_space(), 3), 0.5).unwrap();
        let risk = [0.1, 0.9, 0.4];
        let a = gibbs_posterior(&counting, &risk).unwrap();
        let b = gibbs_posterior(&uniform, &risk).unwrap();
        assert!(total_variation(&a, &b).unwrap() < 1e-15);
    }

    #[test]
    fn gaps_at_and_around_the_posterior() {
        let spec = GibbsSpec::new(uniform2(), 0.7).unwrap();
        let risk = [0.2, 0.9];
        let g = gibbs_posterior(&spec, &risk).unwrap();
        assert!(gap_from_gibbs(&risk, &g, &spec).unwrap().abs() < 1e-15);
        let q = uniform2();
        let jeffreys =
            spec.lambda() * (relative_entropy(&q, &g).unwrap() + relative_entropy(&g, &q).unwrap());
        let direct = gap_algorithm_direct(&risk, &q, &g).unwrap();
        assert!((gap_from_gibbs(&risk, &q, &spec).unwrap() - jeffreys).abs() < 1e-15);
        assert!((direct - jeffreys).abs() < 1e-15);
        assert!(direct >= 0.0);
    }

    #[test]
    fn mixture_reference_handles_singular_pairs() {
        let p1 = FiniteMeasure::point_mass(model_space(), 2, 0).unwrap();
        let p2 = FiniteMeasure::point_mass(model_space(), 2, 1).unwrap();
        let risk = [0.25, 0.75];
        let direct = gap_algorithm_direct(&risk, &p1, &p2).unwrap();
        let mixed = gap_mixture_reference(&risk, &p1, &p2, 0.5, 1.0).unwrap();
        assert!((direct - mixed).abs() < 1e-12);
        assert!(
            gap_mixture_reference(&risk, &p1, &p1, 0.3, 1.0)
                .unwrap()
                .abs()
                < 1e-15
        );
        assert!(matches!(
            gap_mixture_reference(&risk, &p1, &p2, 0.0, 1.0),
            Err(Error::AlphaOutOfRange(_))
        ));
        assert!(GibbsSpec::new(p1, 0.0).is_err());
    }
}
