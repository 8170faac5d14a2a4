//! Finite ground sets, real functions on them, subsets, level sets and comonotonicity.
//!
//! A [`FiniteSpace`] is a discrete compactum: every subset is closed and every
//! function is continuous, so a function is just a vector of finite reals and a
//! subset is a bitmask over point indices.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Add;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported space; a dense capacity table has `2^MAX_SIZE` entries.
pub const MAX_SIZE: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteSpace {
    size: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<String>>,
}

impl FiniteSpace {
    pub fn new(size: usize) -> Result<Self> {
        if size == 0 {
            return Err(Error::InvalidSpace("a space needs at least one point".into()));
        }
        if size > MAX_SIZE {
            return Err(Error::InvalidSpace(format!(
                "size {size} exceeds the supported maximum of {MAX_SIZE}"
            )));
        }
        Ok(Self { size, labels: None })
    }

    pub fn with_labels(labels: Vec<String>) -> Result<Self> {
        let mut space = Self::new(labels.len())?;
        let mut seen = std::collections::HashSet::new();
        for label in &labels {
            if !seen.insert(label.as_str()) {
                return Err(Error::InvalidSpace(format!("duplicate label {label:?}")));
            }
        }
        space.labels = Some(labels);
        Ok(space)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// Display name of a point: its label when present, otherwise its index.
    pub fn label(&self, point: usize) -> String {
        match &self.labels {
            Some(labels) => labels[point].clone(),
            None => point.to_string(),
        }
    }

    /// Number of subsets, `2^size`.
    pub fn subset_count(&self) -> usize {
        1usize << self.size
    }

    pub fn full(&self) -> Subset {
        Subset::full(self.size)
    }

    pub fn empty(&self) -> Subset {
        Subset::empty(self.size)
    }

    /// All subsets in bitmask order.
    pub fn subsets(&self) -> impl Iterator<Item = Subset> + '_ {
        let size = self.size as u8;
        (0..self.subset_count() as u32).map(move |bits| Subset { size, bits })
    }

    pub fn subset(&self, bits: u32) -> Result<Subset> {
        Subset::from_bits(self.size, bits)
    }

    pub(crate) fn ensure_size(&self, found: usize) -> Result<()> {
        if self.size == found {
            Ok(())
        } else {
            Err(Error::DomainMismatch {
                expected: self.size,
                found,
            })
        }
    }
}

/// A subset of a finite space, stored as a bitmask over point indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Subset {
    size: u8,
    bits: u32,
}

impl Subset {
    pub fn empty(size: usize) -> Self {
        Self {
            size: size as u8,
            bits: 0,
        }
    }

    pub fn full(size: usize) -> Self {
        Self {
            size: size as u8,
            bits: full_mask(size),
        }
    }

    pub fn from_bits(size: usize, bits: u32) -> Result<Self> {
        if size == 0 || size > MAX_SIZE {
            return Err(Error::InvalidSpace(format!("unsupported size {size}")));
        }
        if bits & !full_mask(size) != 0 {
            return Err(Error::InvalidFunction(format!(
                "bitmask {bits:#x} has members beyond point {}",
                size - 1
            )));
        }
        Ok(Self { size: size as u8, bits })
    }

    pub fn from_indices(size: usize, indices: &[usize]) -> Result<Self> {
        let mut subset = Self::from_bits(size, 0)?;
        for &i in indices {
            if i >= size {
                return Err(Error::InvalidFunction(format!(
                    "point index {i} is out of range for a space of size {size}"
                )));
            }
            subset.bits |= 1 << i;
        }
        Ok(subset)
    }

    pub fn singleton(size: usize, point: usize) -> Self {
        debug_assert!(point < size);
        Self {
            size: size as u8,
            bits: 1 << point,
        }
    }

    pub fn size(&self) -> usize {
        self.size as usize
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    /// Index of this subset in a dense capacity table.
    pub fn index(&self) -> usize {
        self.bits as usize
    }

    pub fn contains(&self, point: usize) -> bool {
        point < self.size() && self.bits & (1 << point) != 0
    }

    pub fn is_empty(&self) -> bool {
        self.bits == 0
    }

    pub fn is_full(&self) -> bool {
        self.bits == full_mask(self.size())
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn is_subset_of(&self, other: &Subset) -> bool {
        self.bits & !other.bits == 0
    }

    pub fn union(&self, other: &Subset) -> Subset {
        Subset {
            size: self.size,
            bits: self.bits | other.bits,
        }
    }

    pub fn intersection(&self, other: &Subset) -> Subset {
        Subset {
            size: self.size,
            bits: self.bits & other.bits,
        }
    }

    pub fn complement(&self) -> Subset {
        Subset {
            size: self.size,
            bits: !self.bits & full_mask(self.size()),
        }
    }

    pub fn with(&self, point: usize) -> Subset {
        Subset {
            size: self.size,
            bits: self.bits | (1 << point),
        }
    }

    pub fn without(&self, point: usize) -> Subset {
        Subset {
            size: self.size,
            bits: self.bits & !(1 << point),
        }
    }

    /// Member indices in increasing order.
    pub fn points(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.size()).filter(move |&i| self.bits & (1 << i) != 0)
    }

    pub fn to_indices(&self) -> Vec<usize> {
        self.points().collect()
    }
}

impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, p) in self.points().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{p}")?;
        }
        f.write_str("}")
    }
}

impl Serialize for Subset {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_seq(self.points())
    }
}

fn full_mask(size: usize) -> u32 {
    if size >= 32 {
        u32::MAX
    } else {
        (1u32 << size) - 1
    }
}

/// A finite real-valued function on a finite space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct RealFunction {
    values: Vec<f64>,
}

impl RealFunction {
    pub fn new(space: &FiniteSpace, values: Vec<f64>) -> Result<Self> {
        space.ensure_size(values.len())?;
        Self::from_values(values)
    }

    /// Builds a function on the space of size `values.len()`.
    pub fn from_values(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() || values.len() > MAX_SIZE {
            return Err(Error::InvalidFunction(format!(
                "a function needs between 1 and {MAX_SIZE} values, got {}",
                values.len()
            )));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidFunction(format!(
                "value at point {i} is not finite ({})",
                values[i]
            )));
        }
        Ok(Self { values })
    }

    pub fn constant(space: &FiniteSpace, value: f64) -> Result<Self> {
        Self::new(space, vec![value; space.size()])
    }

    pub fn size(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn value(&self, point: usize) -> f64 {
        self.values[point]
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// `self + γ`, the shift by a constant function.
    pub fn shift(&self, gamma: f64) -> RealFunction {
        RealFunction {
            values: self.values.iter().map(|v| v + gamma).collect(),
        }
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Result<RealFunction> {
        Self::from_values(self.values.iter().map(|&v| f(v)).collect())
    }

    /// Pointwise maximum `self ∨ other`.
    pub fn join(&self, other: &RealFunction) -> Result<RealFunction> {
        self.zip_with(other, f64::max)
    }

    /// Pointwise minimum `self ∧ other`.
    pub fn meet(&self, other: &RealFunction) -> Result<RealFunction> {
        self.zip_with(other, f64::min)
    }

    fn zip_with(&self, other: &RealFunction, f: impl Fn(f64, f64) -> f64) -> Result<RealFunction> {
        ensure_same_size(self, other)?;
        Ok(RealFunction {
            values: self.values.iter().zip(&other.values).map(|(&a, &b)| f(a, b)).collect(),
        })
    }

    /// Pointwise `self ≤ other`.
    pub fn le(&self, other: &RealFunction) -> bool {
        self.size() == other.size() && self.values.iter().zip(&other.values).all(|(a, b)| a <= b)
    }

    /// Largest pointwise absolute difference.
    pub fn distance(&self, other: &RealFunction) -> Result<f64> {
        ensure_same_size(self, other)?;
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max))
    }
}

impl TryFrom<Vec<f64>> for RealFunction {
    type Error = Error;

    fn try_from(values: Vec<f64>) -> Result<Self> {
        Self::from_values(values)
    }
}

impl From<RealFunction> for Vec<f64> {
    fn from(f: RealFunction) -> Self {
        f.values
    }
}

pub(crate) fn ensure_same_size(a: &RealFunction, b: &RealFunction) -> Result<()> {
    if a.size() == b.size() {
        Ok(())
    } else {
        Err(Error::DomainMismatch {
            expected: a.size(),
            found: b.size(),
        })
    }
}

/// A real number or negative infinity, with `-∞ + γ = -∞`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtendedReal {
    NegInf,
    Finite(f64),
}

impl ExtendedReal {
    pub const NEG_INF: ExtendedReal = ExtendedReal::NegInf;

    /// Natural logarithm of a value in `[0, ∞)`, with `ln 0 = -∞`.
    pub fn ln(x: f64) -> ExtendedReal {
        debug_assert!(x >= 0.0);
        if x == 0.0 {
            ExtendedReal::NegInf
        } else {
            ExtendedReal::Finite(x.ln())
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, ExtendedReal::Finite(_))
    }

    pub fn finite(&self) -> Option<f64> {
        match *self {
            ExtendedReal::Finite(v) => Some(v),
            ExtendedReal::NegInf => None,
        }
    }

    pub fn max(self, other: ExtendedReal) -> ExtendedReal {
        match (self, other) {
            (ExtendedReal::NegInf, x) | (x, ExtendedReal::NegInf) => x,
            (ExtendedReal::Finite(a), ExtendedReal::Finite(b)) => ExtendedReal::Finite(a.max(b)),
        }
    }
}

impl Add<f64> for ExtendedReal {
    type Output = ExtendedReal;

    fn add(self, rhs: f64) -> ExtendedReal {
        match self {
            ExtendedReal::NegInf => ExtendedReal::NegInf,
            ExtendedReal::Finite(v) => ExtendedReal::Finite(v + rhs),
        }
    }
}

impl PartialOrd for ExtendedReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match (self, other) {
            (ExtendedReal::NegInf, ExtendedReal::NegInf) => Some(Ordering::Equal),
            (ExtendedReal::NegInf, _) => Some(Ordering::Less),
            (_, ExtendedReal::NegInf) => Some(Ordering::Greater),
            (ExtendedReal::Finite(a), ExtendedReal::Finite(b)) => a.partial_cmp(b),
        }
    }
}

/// Upper level set `{x | φ(x) ≥ t}`.
pub fn level_set(phi: &RealFunction, t: f64) -> Subset {
    let bits = phi
        .values
        .iter()
        .enumerate()
        .filter(|(_, &v)| v >= t)
        .fold(0u32, |acc, (i, _)| acc | (1 << i));
    Subset {
        size: phi.size() as u8,
        bits,
    }
}

/// True iff `(φ(x₁)−φ(x₂))·(ψ(x₁)−ψ(x₂)) ≥ 0` for every pair of points.
pub fn comonotonic(phi: &RealFunction, psi: &RealFunction) -> Result<bool> {
    ensure_same_size(phi, psi)?;
    let n = phi.size();
    for i in 0..n {
        for j in (i + 1)..n {
            // Compare orders rather than multiply, so large values cannot overflow.
            let a = phi.values[i].partial_cmp(&phi.values[j]);
            let b = psi.values[i].partial_cmp(&psi.values[j]);
            if matches!(
                (a, b),
                (Some(Ordering::Less), Some(Ordering::Greater)) | (Some(Ordering::Greater), Some(Ordering::Less))
            ) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Strictly increasing list of the values taken by `φ`.
pub fn distinct_values(phi: &RealFunction) -> Vec<f64> {
    let mut values = phi.values.clone();
    values.sort_by(f64::total_cmp);
    values.dedup();
    values
}

/// True iff every fiber of `finer` lies inside a fiber of `coarser`, i.e.
/// `finer(x) = finer(y)` implies `coarser(x) = coarser(y)`.
pub fn refines(finer: &RealFunction, coarser: &RealFunction) -> Result<bool> {
    ensure_same_size(finer, coarser)?;
    let n = finer.size();
    Ok((0..n)
        .all(|i| ((i + 1)..n).all(|j| finer.values[i] != finer.values[j] || coarser.values[i] == coarser.values[j])))
}
