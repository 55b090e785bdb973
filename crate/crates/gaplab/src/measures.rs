//! Finite measures in the log domain and the information functionals built on them.
//!
//! A [`FiniteMeasure`] stores one natural-log mass per atom of an indexed finite
//! set. Atoms with zero mass hold `-inf` and are treated as absent, so the
//! support is exactly the set of finite entries and `0 log 0 = 0` comes for free.
//! The counting measure (every log-mass equal to zero, not normalized) is the only
//! non-probability measure the crate produces.
//!
//! | Function | Value |
//! |----------|-------|
//! | [`relative_entropy`] | D(P‖Q) = Σ P(a) log(P(a)/Q(a)) |
//! | [`mutual_information`] | Σ_c prior(c) D(K(c)‖marginal) |
//! | [`lautum_information`] | Σ_c prior(c) D(marginal‖K(c)) |
//! | [`marginalize`] | Σ_c prior(c) K(c) |
//! | [`bayes_invert`] | reverse kernel on the support of the marginal |

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance used when validating that a measure claimed normalized sums to one.
const NORMALIZATION_TOL: f64 = 1e-9;

/// Name of an indexed finite set. Two measures interact only when both the
/// name and the size agree.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SpaceId(String);

impl SpaceId {
    pub fn new(name: impl Into<String>) -> Self {
        Self(name.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for SpaceId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// A finite measure with log-domain masses over atoms `0..size`.
#[derive(Clone, Debug, PartialEq)]
pub struct FiniteMeasure {
    space: SpaceId,
    log_mass: Vec<f64>,
    normalized: bool,
}

impl FiniteMeasure {
    /// Normalizes nonnegative weights into a probability measure.
    pub fn from_weights(space: SpaceId, weights: &[f64]) -> Result<Self> {
        if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::InvalidParameter(
                "weights must be finite and nonnegative".into(),
            ));
        }
        let logs: Vec<f64> = weights.iter().map(|w| w.ln()).collect();
        Self::from_log_weights(space, logs)
    }

    /// Normalizes log-weights (`-inf` marks an absent atom) into a probability measure.
    pub fn from_log_weights(space: SpaceId, log_weights: Vec<f64>) -> Result<Self> {
        validate_logs(&log_weights)?;
        let total = log_sum_exp(&log_weights)?;
        if total == f64::NEG_INFINITY {
            return Err(Error::EmptySupport);
        }
        let log_mass = log_weights
            .into_iter()
            .map(|l| if l.is_finite() { l - total } else { l })
            .collect();
        Ok(Self {
            space,
            log_mass,
            normalized: true,
        })
    }

    /// Wraps log-masses that already describe a probability measure, checking
    /// the total within a loose tolerance but leaving the values untouched.
    pub fn from_normalized_log_masses(space: SpaceId, log_mass: Vec<f64>) -> Result<Self> {
        validate_logs(&log_mass)?;
        let total = log_sum_exp(&log_mass)?;
        if total.abs() > NORMALIZATION_TOL {
            return Err(Error::InvalidParameter(format!(
                "log-masses sum to exp({total}) instead of 1"
            )));
        }
        Ok(Self {
            space,
            log_mass,
            normalized: true,
        })
    }

    /// The counting measure: unit mass on every atom.
    pub fn counting(space: SpaceId, size: usize) -> Self {
        Self {
            space,
            log_mass: vec![0.0; size],
            normalized: false,
        }
    }

    pub fn uniform(space: SpaceId, size: usize) -> Self {
        let l = -(size as f64).ln();
        Self {
            space,
            log_mass: vec![l; size],
            normalized: true,
        }
    }

    pub fn point_mass(space: SpaceId, size: usize, atom: usize) -> Result<Self> {
        if atom >= size {
            return Err(Error::IndexOutOfRange { index: atom, size });
        }
        let mut log_mass = vec![f64::NEG_INFINITY; size];
        log_mass[atom] = 0.0;
        Ok(Self {
            space,
            log_mass,
            normalized: true,
        })
    }

    pub fn space(&self) -> &SpaceId {
        &self.space
    }

    pub fn size(&self) -> usize {
        self.log_mass.len()
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    /// True for the unnormalized all-ones measure.
    pub fn is_counting(&self) -> bool {
        !self.normalized && self.log_mass.iter().all(|&l| l == 0.0)
    }

    /// Log-mass of an atom, `None` when the atom is outside the support.
    pub fn log_mass(&self, atom: usize) -> Option<f64> {
        self.log_mass.get(atom).copied().filter(|l| l.is_finite())
    }

    /// Raw log-masses, `-inf` off the support.
    pub fn log_masses(&self) -> &[f64] {
        &self.log_mass
    }

    pub fn mass(&self, atom: usize) -> f64 {
        self.log_mass.get(atom).map_or(0.0, |l| l.exp())
    }

    pub fn masses(&self) -> Vec<f64> {
        self.log_mass.iter().map(|l| l.exp()).collect()
    }

    pub fn contains(&self, atom: usize) -> bool {
        self.log_mass(atom).is_some()
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.log_mass
            .iter()
            .enumerate()
            .filter(|(_, l)| l.is_finite())
            .map(|(a, _)| a)
    }

    pub fn support_len(&self) -> usize {
        self.support().count()
    }

    pub fn has_full_support(&self) -> bool {
        self.log_mass.iter().all(|l| l.is_finite())
    }

    /// Log of the total mass.
    pub fn log_total(&self) -> f64 {
        log_sum_exp(&self.log_mass).unwrap_or(f64::NEG_INFINITY)
    }

    /// Σ_a P(a) f(a) over the support.
    pub fn expectation(&self, f: &[f64]) -> f64 {
        self.support().map(|a| self.mass(a) * f[a]).sum()
    }

    fn describe(&self) -> String {
        format!("{}[{}]", self.space, self.size())
    }
}

fn validate_logs(logs: &[f64]) -> Result<()> {
    if logs.iter().any(|l| l.is_nan() || *l == f64::INFINITY) {
        return Err(Error::InvalidParameter(
            "log-masses must be finite or -inf".into(),
        ));
    }
    Ok(())
}

fn check_same_space(p: &FiniteMeasure, q: &FiniteMeasure) -> Result<()> {
    if p.space != q.space || p.size() != q.size() {
        return Err(Error::SpaceMismatch {
            left: p.describe(),
            right: q.describe(),
        });
    }
    Ok(())
}

/// A family of probability measures on one target space, indexed by a
/// condition. Rows are absent for conditions outside the declared support.
#[derive(Clone, Debug, PartialEq)]
pub struct Kernel {
    condition_space: SpaceId,
    target_space: SpaceId,
    target_size: usize,
    rows: Vec<Option<FiniteMeasure>>,
}

impl Kernel {
    pub fn new(
        condition_space: SpaceId,
        target_space: SpaceId,
        target_size: usize,
        rows: Vec<Option<FiniteMeasure>>,
    ) -> Result<Self> {
        for row in rows.iter().flatten() {
            if row.space != target_space || row.size() != target_size {
                return Err(Error::SpaceMismatch {
                    left: format!("{target_space}[{target_size}]"),
                    right: row.describe(),
                });
            }
            if !row.normalized {
                return Err(Error::InvalidParameter(
                    "kernel rows must be probability measures".into(),
                ));
            }
        }
        Ok(Self {
            condition_space,
            target_space,
            target_size,
            rows,
        })
    }

    /// Kernel with a row for every condition.
    pub fn from_rows(condition_space: SpaceId, rows: Vec<FiniteMeasure>) -> Result<Self> {
        let first = rows.first().ok_or(Error::EmptyList)?;
        let target_space = first.space.clone();
        let target_size = first.size();
        Self::new(
            condition_space,
            target_space,
            target_size,
            rows.into_iter().map(Some).collect(),
        )
    }

    pub fn condition_space(&self) -> &SpaceId {
        &self.condition_space
    }

    pub fn target_space(&self) -> &SpaceId {
        &self.target_space
    }

    pub fn target_size(&self) -> usize {
        self.target_size
    }

    pub fn num_conditions(&self) -> usize {
        self.rows.len()
    }

    pub fn row(&self, condition: usize) -> Result<&FiniteMeasure> {
        match self.rows.get(condition) {
            None => Err(Error::IndexOutOfRange {
                index: condition,
                size: self.rows.len(),
            }),
            Some(None) => Err(Error::UndefinedRow(condition)),
            Some(Some(r)) => Ok(r),
        }
    }

    pub fn has_row(&self, condition: usize) -> bool {
        matches!(self.rows.get(condition), Some(Some(_)))
    }

    pub fn condition_support(&self) -> impl Iterator<Item = usize> + '_ {
        self.rows
            .iter()
            .enumerate()
            .filter(|(_, r)| r.is_some())
            .map(|(c, _)| c)
    }

    fn check_prior(&self, prior: &FiniteMeasure) -> Result<()> {
        if prior.space != self.condition_space || prior.size() != self.rows.len() {
            return Err(Error::SpaceMismatch {
                left: format!("{}[{}]", self.condition_space, self.rows.len()),
                right: prior.describe(),
            });
        }
        if let Some(c) = prior.support().find(|&c| !self.has_row(c)) {
            return Err(Error::UndefinedRow(c));
        }
        Ok(())
    }
}

/// log Σ exp(v_i) with a max shift. `-inf` entries contribute nothing.
pub fn log_sum_exp(values: &[f64]) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::EmptyList);
    }
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return Ok(max);
    }
    if values.len() == 1 {
        return Ok(values[0]);
    }
    let sum: f64 = values.iter().map(|v| (v - max).exp()).sum();
    Ok(max + sum.ln())
}

/// True iff support(P) ⊆ support(Q).
pub fn is_absolutely_continuous(p: &FiniteMeasure, q: &FiniteMeasure) -> Result<bool> {
    check_same_space(p, q)?;
    Ok(p.support().all(|a| q.contains(a)))
}

pub fn is_mutually_absolutely_continuous(p: &FiniteMeasure, q: &FiniteMeasure) -> Result<bool> {
    Ok(is_absolutely_continuous(p, q)? && is_absolutely_continuous(q, p)?)
}

/// Log-density of P with respect to Q on support(P); `None` elsewhere.
pub fn radon_nikodym(p: &FiniteMeasure, q: &FiniteMeasure) -> Result<Vec<Option<f64>>> {
    check_same_space(p, q)?;
    p.log_mass
        .iter()
        .zip(&q.log_mass)
        .enumerate()
        .map(|(a, (&lp, &lq))| {
            if !lp.is_finite() {
                Ok(None)
            } else if !lq.is_finite() {
                Err(Error::NotAbsolutelyContinuous { atom: a })
            } else {
                Ok(Some(lp - lq))
            }
        })
        .collect()
}

/// D(P2‖P1) in nats. P1 may be the counting measure, in which case the value is −H(P2).
pub fn relative_entropy(p2: &FiniteMeasure, p1: &FiniteMeasure) -> Result<f64> {
    check_same_space(p2, p1)?;
    let mut total = 0.0;
    for a in p2.support() {
        let l2 = p2.log_mass[a];
        let l1 = p1.log_mass[a];
        if !l1.is_finite() {
            return Err(Error::NotAbsolutelyContinuous { atom: a });
        }
        total += l2.exp() * (l2 - l1);
    }
    Ok(total)
}

/// Shannon entropy −Σ P(a) log P(a).
pub fn entropy(p: &FiniteMeasure) -> f64 {
    p.support().map(|a| -p.mass(a) * p.log_mass[a]).sum()
}

/// Σ_a |P(a) − Q(a)| / 2.
pub fn total_variation(p: &FiniteMeasure, q: &FiniteMeasure) -> Result<f64> {
    check_same_space(p, q)?;
    Ok(0.5
        * (0..p.size())
            .map(|a| (p.mass(a) - q.mass(a)).abs())
            .sum::<f64>())
}

/// Mixture Σ_c prior(c) K(c). Support is the union of the row supports over support(prior).
pub fn marginalize(kernel: &Kernel, prior: &FiniteMeasure) -> Result<FiniteMeasure> {
    kernel.check_prior(prior)?;
    let conditions: Vec<usize> = prior.support().collect();
    let mut terms = Vec::with_capacity(conditions.len());
    let log_mass = (0..kernel.target_size)
        .map(|m| {
            terms.clear();
            for &c in &conditions {
                let row = kernel.rows[c].as_ref().expect("checked above");
                terms.push(prior.log_mass[c] + row.log_mass[m]);
            }
            log_sum_exp(&terms)
        })
        .collect::<Result<Vec<f64>>>()?;
    FiniteMeasure::from_normalized_log_masses(kernel.target_space.clone(), log_mass)
}

/// Reverses a kernel by Bayes' rule. Returns the reverse kernel (rows only on
/// the support of the marginal) together with the marginal itself.
pub fn bayes_invert(kernel: &Kernel, prior: &FiniteMeasure) -> Result<(Kernel, FiniteMeasure)> {
    let marginal = marginalize(kernel, prior)?;
    let rows = (0..kernel.target_size)
        .map(|m| {
            let Some(lm) = marginal.log_mass(m) else {
                return Ok(None);
            };
            let log_mass = (0..prior.size())
                .map(|c| match (prior.log_mass(c), kernel.rows[c].as_ref()) {
                    (Some(lc), Some(row)) => lc + row.log_mass[m] - lm,
                    _ => f64::NEG_INFINITY,
                })
                .collect();
            FiniteMeasure::from_normalized_log_masses(prior.space.clone(), log_mass).map(Some)
        })
        .collect::<Result<Vec<_>>>()?;
    let reverse = Kernel::new(
        kernel.target_space.clone(),
        prior.space.clone(),
        prior.size(),
        rows,
    )?;
    Ok((reverse, marginal))
}

/// Prior-weighted average of D(K(c)‖marginal).
pub fn mutual_information(kernel: &Kernel, prior: &FiniteMeasure) -> Result<f64> {
    let marginal = marginalize(kernel, prior)?;
    prior.support().try_fold(0.0, |acc, c| {
        Ok(acc + prior.mass(c) * relative_entropy(kernel.row(c)?, &marginal)?)
    })
}

/// Prior-weighted average of D(marginal‖K(c)). Fails when a row misses part of
/// the marginal's support.
pub fn lautum_information(kernel: &Kernel, prior: &FiniteMeasure) -> Result<f64> {
    let marginal = marginalize(kernel, prior)?;
    prior.support().try_fold(0.0, |acc, c| {
        Ok(acc + prior.mass(c) * relative_entropy(&marginal, kernel.row(c)?)?)
    })
}

/// Default bound on the number of atoms any enumerated product space may have.
pub const DEFAULT_ENUMERATION_CAP: usize = 20_000;

/// The n-fold product P⊗…⊗P. Tuple (a_1,…,a_n) is encoded in mixed radix
/// with a_n as the fastest-varying digit.
pub fn product_measure(p: &FiniteMeasure, n: usize, cap: usize) -> Result<FiniteMeasure> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be positive".into()));
    }
    if !p.normalized {
        return Err(Error::InvalidParameter(
            "product_measure needs a probability measure".into(),
        ));
    }
    let k = p.size();
    let size = (k as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    let support = (p.support_len() as u128)
        .checked_pow(n as u32)
        .unwrap_or(u128::MAX);
    if support > cap as u128 || size > cap as u128 {
        return Err(Error::EnumerationCapExceeded {
            size: size.max(support),
            cap,
        });
    }
    let mut log_mass = vec![0.0; size as usize];
    for (index, slot) in log_mass.iter_mut().enumerate() {
        let mut rest = index;
        for _ in 0..n {
            *slot += p.log_mass[rest % k];
            rest /= k;
        }
    }
    Ok(FiniteMeasure {
        space: SpaceId::new(format!("{}^{n}", p.space)),
        log_mass,
        normalized: true,
    })
}

/// αP1 + (1−α)P2 for α in the open unit interval.
pub fn convex_combination(
    p1: &FiniteMeasure,
    p2: &FiniteMeasure,
    alpha: f64,
) -> Result<FiniteMeasure> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::AlphaOutOfRange(alpha));
    }
    check_same_space(p1, p2)?;
    let (la, lb) = (alpha.ln(), (1.0 - alpha).ln());
    let log_mass = p1
        .log_mass
        .iter()
        .zip(&p2.log_mass)
        .map(|(&x, &y)| log_sum_exp(&[la + x, lb + y]))
        .collect::<Result<Vec<_>>>()?;
    FiniteMeasure::from_normalized_log_masses(p1.space.clone(), log_mass)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sp() -> SpaceId {
        SpaceId::new("s")
    }

    fn m(w: &[f64]) -> FiniteMeasure {
        FiniteMeasure::from_weights(sp(), w).unwrap()
    }

    #[test]
    fn absolute_continuity_cases() {
        let u = m(&[0.5, 0.5]);
        let d = m(&[1.0, 0.0]);
        assert!(is_absolutely_continuous(&u, &u).unwrap());
        assert!(!is_absolutely_continuous(&u, &d).unwrap());
        assert!(is_absolutely_continuous(&d, &u).unwrap());
        let other = FiniteMeasure::uniform(SpaceId::new("t"), 2);
        assert!(matches!(
            is_absolutely_continuous(&u, &other),
            Err(Error::SpaceMismatch { .. })
        ));
    }

    #[test]
    fn radon_nikodym_ratios() {
        let rn = radon_nikodym(&m(&[0.75, 0.25]), &m(&[0.5, 0.5])).unwrap();
        assert!((rn[0].unwrap().exp() - 1.5).abs() < 1e-15);
        assert!((rn[1].unwrap().exp() - 0.5).abs() < 1e-15);
        let rn = radon_nikodym(&m(&[1.0, 0.0]), &m(&[0.5, 0.5])).unwrap();
        assert!((rn[0].unwrap().exp() - 2.0).abs() < 1e-15);
        assert!(rn[1].is_none());
        assert!(matches!(
            radon_nikodym(&m(&[0.5, 0.5]), &m(&[1.0, 0.0])),
            Err(Error::NotAbsolutelyContinuous { atom: 1 })
        ));
    }

    #[test]
    fn relative_entropy_values() {
        let p = m(&[0.3, 0.7]);
        assert_eq!(relative_entropy(&p, &p).unwrap(), 0.0);
        let d = relative_entropy(&m(&[1.0, 0.0]), &m(&[0.5, 0.5])).unwrap();
        assert!((d - std::f64::consts::LN_2).abs() < 1e-15);
        let c = FiniteMeasure::counting(sp(), 2);
        let d = relative_entropy(&m(&[0.75, 0.25]), &c).unwrap();
        let expected = 0.75 * 0.75f64.ln() + 0.25 * 0.25f64.ln();
        assert!((d - expected).abs() < 1e-15);
        assert!((d + 0.5623351).abs() < 1e-7);
    }

    #[test]
    fn information_measures() {
        let prior = FiniteMeasure::uniform(SpaceId::new("c"), 2);
        let same =
            Kernel::from_rows(SpaceId::new("c"), vec![m(&[0.2, 0.8]), m(&[0.2, 0.8])]).unwrap();
        assert!(mutual_information(&same, &prior).unwrap().abs() < 1e-15);
        assert!(lautum_information(&same, &prior).unwrap().abs() < 1e-15);

        let ident =
            Kernel::from_rows(SpaceId::new("c"), vec![m(&[1.0, 0.0]), m(&[0.0, 1.0])]).unwrap();
        let i = mutual_information(&ident, &prior).unwrap();
        assert!((i - std::f64::consts::LN_2).abs() < 1e-15);
        assert!(matches!(
            lautum_information(&ident, &prior),
            Err(Error::NotAbsolutelyContinuous { .. })
        ));

        let bsc =
            Kernel::from_rows(SpaceId::new("c"), vec![m(&[0.9, 0.1]), m(&[0.1, 0.9])]).unwrap();
        // Both marginal atoms are ½, so each of the four terms is ½·p·log(2p).
        let direct: f64 = [0.9f64, 0.1, 0.1, 0.9]
            .iter()
            .map(|p| 0.5 * p * (p / 0.5).ln())
            .sum();
        assert!((mutual_information(&bsc, &prior).unwrap() - direct).abs() < 1e-15);
        let lautum: f64 = [0.9f64, 0.1, 0.1, 0.9]
            .iter()
            .map(|p| 0.5 * 0.5 * (0.5 / p).ln())
            .sum();
        assert!((lautum_information(&bsc, &prior).unwrap() - lautum).abs() < 1e-15);
    }

    #[test]
    fn marginalize_cases() {
        let c = SpaceId::new("c");
        let k = Kernel::from_rows(c.clone(), vec![m(&[1.0, 0.0]), m(&[0.0, 1.0])]).unwrap();
        let point = FiniteMeasure::point_mass(c.clone(), 2, 1).unwrap();
        assert_eq!(marginalize(&k, &point).unwrap().masses(), vec![0.0, 1.0]);
        let mix = marginalize(&k, &FiniteMeasure::uniform(c, 2)).unwrap();
        assert!((mix.mass(0) - 0.5).abs() < 1e-15 && (mix.mass(1) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn bayes_invert_identity_and_independence() {
        let c = SpaceId::new("c");
        let prior = m(&[0.25, 0.75]);
        let prior = FiniteMeasure::from_weights(c.clone(), &prior.masses()).unwrap();
        let k = Kernel::from_rows(c.clone(), vec![m(&[1.0, 0.0]), m(&[0.0, 1.0])]).unwrap();
        let (rev, marg) = bayes_invert(&k, &prior).unwrap();
        assert!((marg.mass(0) - 0.25).abs() < 1e-15);
        assert_eq!(rev.row(0).unwrap().masses(), vec![1.0, 0.0]);
        assert_eq!(rev.row(1).unwrap().masses(), vec![0.0, 1.0]);

        let k = Kernel::from_rows(c, vec![m(&[0.4, 0.6]), m(&[0.4, 0.6])]).unwrap();
        let (rev, _) = bayes_invert(&k, &prior).unwrap();
        for t in 0..2 {
            let row = rev.row(t).unwrap();
            assert!((row.mass(0) - 0.25).abs() < 1e-15);
        }
    }

    #[test]
    fn bayes_invert_rows_only_on_marginal_support() {
        let c = SpaceId::new("c");
        let k =
            Kernel::from_rows(c.clone(), vec![m(&[1.0, 0.0, 0.0]), m(&[0.5, 0.5, 0.0])]).unwrap();
        let (rev, _) = bayes_invert(&k, &FiniteMeasure::uniform(c, 2)).unwrap();
        assert!(rev.has_row(0) && rev.has_row(1));
        assert!(matches!(rev.row(2), Err(Error::UndefinedRow(2))));
    }

    #[test]
    fn product_measure_encoding() {
        let p = m(&[0.3, 0.7]);
        let single = product_measure(&p, 1, DEFAULT_ENUMERATION_CAP).unwrap();
        assert_eq!(single.log_masses(), p.log_masses());
        let pp = product_measure(&p, 2, DEFAULT_ENUMERATION_CAP).unwrap();
        let expected = [0.09, 0.21, 0.21, 0.49];
        for (a, e) in expected.iter().enumerate() {
            assert!((pp.mass(a) - e).abs() < 1e-15);
        }
        let half = product_measure(&m(&[0.5, 0.5]), 2, DEFAULT_ENUMERATION_CAP).unwrap();
        assert!(half.masses().iter().all(|x| (x - 0.25).abs() < 1e-15));
        assert!(matches!(
            product_measure(
                &FiniteMeasure::uniform(sp(), 10),
                5,
                DEFAULT_ENUMERATION_CAP
            ),
            Err(Error::EnumerationCapExceeded { .. })
        ));
    }

    #[test]
    fn convex_combination_cases() {
        let a = m(&[1.0, 0.0]);
        let b = m(&[0.0, 1.0]);
        let mix = convex_combination(&a, &b, 0.25).unwrap();
        assert!((mix.mass(0) - 0.25).abs() < 1e-15 && (mix.mass(1) - 0.75).abs() < 1e-15);
        let half = convex_combination(&a, &b, 0.5).unwrap();
        assert!((half.mass(0) - 0.5).abs() < 1e-15);
        let same = convex_combination(&a, &a, 0.3).unwrap();
        assert_eq!(same.masses(), a.masses());
        assert!(matches!(
            convex_combination(&a, &b, 1.0),
            Err(Error::AlphaOutOfRange(_))
        ));
    }

    #[test]
    fn log_sum_exp_cases() {
        assert_eq!(log_sum_exp(&[3.5]).unwrap(), 3.5);
        assert!((log_sum_exp(&[0.0, 0.0]).unwrap() - std::f64::consts::LN_2).abs() < 1e-15);
        let v = log_sum_exp(&[-1000.0, -1000.5]).unwrap();
        assert!((v - (-1000.0 + (1.0 + (-0.5f64).exp()).ln())).abs() < 1e-12);
        assert!(matches!(log_sum_exp(&[]), Err(Error::EmptyList)));
    }
}
