//! Fuzzy integrals over level sets: the max-plus integral, plus the Choquet and
//! Sugeno integrals as comparison baselines.

use crate::capacity::Capacity;
use crate::error::{Error, Result};
use crate::space::{distinct_values, level_set, ExtendedReal, RealFunction};

/// `max{ln c(φ_t) + t | t ∈ ℝ}`.
///
/// `t ↦ c(φ_t)` is constant on each interval `(v_{k-1}, v_k]` between consecutive
/// values of `φ`, so the maximum is attained at one of the values of `φ`.
pub fn maxplus_integral(c: &Capacity, phi: &RealFunction) -> Result<f64> {
    c.space().ensure_size(phi.size())?;
    let best = distinct_values(phi)
        .into_iter()
        .map(|t| ExtendedReal::ln(c.value(level_set(phi, t))) + t)
        .fold(ExtendedReal::NEG_INF, ExtendedReal::max);
    // t = min φ gives c(X) = 1 and hence a finite candidate.
    Ok(best.finite().expect("the minimum of φ is always a finite candidate"))
}

/// Max of `ln c(φ_t) + t` over the grid `min φ, min φ + step, …` up to and
/// including `max φ`. Never exceeds [`maxplus_integral`] and stays within `step`
/// of it.
pub fn maxplus_integral_grid_oracle(c: &Capacity, phi: &RealFunction, step: f64) -> Result<f64> {
    c.space().ensure_size(phi.size())?;
    if step.is_nan() || step <= 0.0 {
        return Err(Error::InvalidFunction(format!(
            "grid step must be positive, got {step}"
        )));
    }
    let (lo, hi) = (phi.min(), phi.max());
    let candidate = |t: f64| ExtendedReal::ln(c.value(level_set(phi, t))) + t;
    let mut best = candidate(hi);
    let mut k = 0u64;
    loop {
        let t = lo + k as f64 * step;
        if t >= hi {
            break;
        }
        best = best.max(candidate(t));
        k += 1;
    }
    Ok(best.finite().expect("t = min φ is on the grid"))
}

/// `min φ + ∫_{min φ}^{max φ} c(φ_t) dt`, evaluated exactly as a step-function sum.
pub fn choquet_integral(c: &Capacity, phi: &RealFunction) -> Result<f64> {
    c.space().ensure_size(phi.size())?;
    let values = distinct_values(phi);
    let mut total = values[0];
    for pair in values.windows(2) {
        total += (pair[1] - pair[0]) * c.value(level_set(phi, pair[1]));
    }
    Ok(total)
}

/// `max{min(t, c(φ_t)) | t ∈ values(φ) ∪ {0}}` for `φ` with values in `[0, 1]`.
pub fn sugeno_integral(c: &Capacity, phi: &RealFunction) -> Result<f64> {
    c.space().ensure_size(phi.size())?;
    if let Some((point, &value)) = phi.values().iter().enumerate().find(|(_, v)| !(0.0..=1.0).contains(*v)) {
        return Err(Error::RangeViolation { point, value });
    }
    Ok(distinct_values(phi)
        .into_iter()
        .map(|t| t.min(c.value(level_set(phi, t))))
        .fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::capacity::PossibilityDensity;
    use crate::space::FiniteSpace;

    fn two_point() -> Capacity {
        Capacity::new(&FiniteSpace::new(2).unwrap(), vec![0.0, 0.5, 0.25, 1.0]).unwrap()
    }

    fn f(values: &[f64]) -> RealFunction {
        RealFunction::from_values(values.to_vec()).unwrap()
    }

    #[test]
    fn maxplus_examples() {
        let s = FiniteSpace::new(2).unwrap();
        assert_eq!(
            maxplus_integral(&Capacity::dirac(&s, 0).unwrap(), &f(&[3.0, -2.0])).unwrap(),
            3.0
        );
        assert_eq!(
            maxplus_integral(&Capacity::unanimity(&s), &f(&[3.0, -2.0])).unwrap(),
            -2.0
        );
        let v = maxplus_integral(&two_point(), &f(&[0.0, -1.0])).unwrap();
        assert!((v + std::f64::consts::LN_2).abs() < 1e-6);
        let all_one = PossibilityDensity::new(vec![1.0, 1.0, 1.0]).unwrap().capacity();
        assert_eq!(maxplus_integral(&all_one, &f(&[0.3, -4.0, 2.5])).unwrap(), 2.5);
    }

    #[test]
    fn grid_oracle_examples() {
        let c = two_point();
        let phi = f(&[0.0, -1.0]);
        let exact = maxplus_integral(&c, &phi).unwrap();
        let grid = maxplus_integral_grid_oracle(&c, &phi, 1e-4).unwrap();
        assert!(grid <= exact && exact - grid <= 1e-4);
        assert_eq!(maxplus_integral_grid_oracle(&c, &f(&[0.7, 0.7]), 0.1).unwrap(), 0.7);
        assert!(maxplus_integral_grid_oracle(&c, &phi, 0.0).is_err());
    }

    #[test]
    fn choquet_examples() {
        let s = FiniteSpace::new(2).unwrap();
        assert_eq!(
            choquet_integral(&Capacity::dirac(&s, 1).unwrap(), &f(&[3.0, -2.0])).unwrap(),
            -2.0
        );
        assert_eq!(choquet_integral(&two_point(), &f(&[1.0, 0.0])).unwrap(), 0.5);
        let v = choquet_integral(&Capacity::uniform_additive(&s), &f(&[0.3, -1.7])).unwrap();
        assert!((v - (-0.7)).abs() < 1e-12);
    }

    #[test]
    fn sugeno_examples() {
        let s = FiniteSpace::new(2).unwrap();
        assert_eq!(
            sugeno_integral(&Capacity::dirac(&s, 0).unwrap(), &f(&[0.8, 0.1])).unwrap(),
            0.8
        );
        assert_eq!(sugeno_integral(&two_point(), &f(&[0.4, 0.4])).unwrap(), 0.4);
        assert_eq!(sugeno_integral(&two_point(), &f(&[1.0, 0.0])).unwrap(), 0.5);
        assert!(matches!(
            sugeno_integral(&two_point(), &f(&[1.2, 0.0])),
            Err(Error::RangeViolation { point: 0, .. })
        ));
    }

    #[test]
    fn mismatched_space() {
        assert!(matches!(
            maxplus_integral(&two_point(), &f(&[1.0, 2.0, 3.0])),
            Err(Error::DomainMismatch { .. })
        ));
    }
}
