//! The correspondence between capacities and comonotonically maxitive
//! functionals: integrate against a capacity, and recover the capacity from a
//! functional through `c(A) = inf{e^{I(φ)} | φ ∈ Υ_A}`.

use crate::capacity::{first_cover_violation, Capacity};
use crate::error::{Error, Result, StabilizationFailure};
use crate::functional::{upsilon_member, Functional, FunctionalKind};
use crate::integral::maxplus_integral;
use crate::space::RealFunction;

/// Largest depth tried by the reconstruction sweep.
pub const M_CAP: f64 = 64.0;

/// Smallest capacity value treated as positive when sizing a maxitivity witness.
const GAP_FLOOR: f64 = 1e-12;

/// `φ ↦ ∫ φ dc`, the max-plus integral against `c`.
pub fn integral_functional(c: &Capacity) -> Functional {
    let c = c.clone();
    let space = c.space().clone();
    Functional::with_kind(&space, FunctionalKind::CapacityBacked, move |phi| {
        maxplus_integral(&c, phi).expect("functional checks the space before evaluating")
    })
}

/// Recovers the capacity represented by a functional.
///
/// For each proper nonempty `A` the canonical members `0` on `A`, `−M` off `A`
/// are evaluated for `M = 1, 2, 4, …` until `e^{I}` changes by less than `tol`.
/// A monotone `I` makes these values an upper envelope of the infimum over all
/// of `Υ_A`, because every member of `Υ_A` dominates the canonical member once
/// `M ≥ −min φ`. Values below `tol` are snapped to 0.
pub fn reconstruct_capacity(functional: &Functional, tol: f64) -> Result<Capacity> {
    let space = functional.space().clone();
    let count = space.subset_count();
    let mut table = vec![0.0; count];
    table[count - 1] = 1.0;
    let mut failures = Vec::new();
    for subset in space.subsets().skip(1).take(count.saturating_sub(2)) {
        let at = |m: f64| -> Result<f64> {
            let value = functional.eval_unchecked(&upsilon_member(subset, 0.0, m)?);
            if value.is_nan() || value == f64::INFINITY {
                return Err(Error::NonFiniteFunctional { subset, value });
            }
            Ok(value.exp())
        };
        let mut m = 1.0;
        let mut previous = at(m)?;
        let settled = loop {
            m *= 2.0;
            if m > M_CAP {
                break None;
            }
            let current = at(m)?;
            if (current - previous).abs() < tol {
                break Some(current);
            }
            previous = current;
        };
        match settled {
            Some(v) => table[subset.index()] = if v < tol { 0.0 } else { v.clamp(0.0, 1.0) },
            None => failures.push(StabilizationFailure {
                subset,
                previous,
                last: at(M_CAP)?,
            }),
        }
    }
    if !failures.is_empty() {
        return Err(Error::NotStabilized { failures });
    }
    if let Some((smaller, larger)) = first_cover_violation(&space, &table, tol) {
        return Err(Error::InvalidFunctional {
            smaller,
            larger,
            smaller_value: table[smaller.index()],
            larger_value: table[larger.index()],
        });
    }
    // Violations within `tol` are rounding noise; close them by running maxima.
    for bits in 1..count {
        let mut rest = bits;
        while rest != 0 {
            let low = rest & rest.wrapping_neg();
            table[bits] = table[bits].max(table[bits & !low]);
            rest &= rest - 1;
        }
    }
    table[count - 1] = 1.0;
    Capacity::new(&space, table)
}

/// Largest tablewise gap between `c` and the capacity reconstructed from its
/// integral functional.
pub fn roundtrip_check(c: &Capacity, tol: f64) -> Result<f64> {
    let rebuilt = reconstruct_capacity(&integral_functional(c), tol)?;
    c.distance(&rebuilt)
}

/// Two functions on which `∫ · dc` is not maxitive, or `None` when `c` is a
/// possibility capacity.
///
/// With `(A, B)` a pair where `c(A ∪ B) > max(c(A), c(B))` and `M` larger than
/// `−ln` of every positive capacity value, the canonical members of `Υ_A` and
/// `Υ_B` integrate to `ln c(A)` and `ln c(B)` (or `−M`), while their join is the
/// canonical member of `Υ_{A∪B}` and integrates to `ln c(A ∪ B)`.
pub fn maxitivity_witness(c: &Capacity) -> Option<(RealFunction, RealFunction)> {
    let (a, b) = c.possibility_violation()?;
    let smallest_positive = c.table().iter().copied().filter(|&v| v > 0.0).fold(1.0, f64::min);
    let m = -GAP_FLOOR.max(smallest_positive).ln() + 1.0;
    Some((
        upsilon_member(a, 0.0, m).expect("positive depth"),
        upsilon_member(b, 0.0, m).expect("positive depth"),
    ))
}

/// `I(φ ∨ ψ) − max(I(φ), I(ψ))` for `I = ∫ · dc`.
pub fn maxitivity_gap(c: &Capacity, phi: &RealFunction, psi: &RealFunction) -> Result<f64> {
    let joined = phi.join(psi)?;
    Ok(maxplus_integral(c, &joined)? - maxplus_integral(c, phi)?.max(maxplus_integral(c, psi)?))
}
