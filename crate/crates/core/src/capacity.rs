//! Capacities (normalized monotone set functions), possibility capacities and
//! their transport along maps of finite spaces.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::{seeded, uniform};
use crate::space::{FiniteSpace, Subset};

/// A capacity stored as a dense table indexed by subset bitmask.
#[derive(Debug, Clone, PartialEq)]
pub struct Capacity {
    space: FiniteSpace,
    table: Vec<f64>,
}

impl Capacity {
    /// Checks the table and wraps it.
    ///
    /// Entries are checked for range first, then monotonicity along the cover
    /// relation `A ⊂ A ∪ {x}`, then the boundary values `c(∅) = 0` and `c(X) = 1`.
    pub fn new(space: &FiniteSpace, table: Vec<f64>) -> Result<Self> {
        let expected = space.subset_count();
        if table.len() != expected {
            return Err(Error::TableLength {
                expected,
                found: table.len(),
            });
        }
        for subset in space.subsets() {
            let value = table[subset.index()];
            if !(0.0..=1.0).contains(&value) {
                return Err(Error::OutOfRange { subset, value });
            }
        }
        if let Some((smaller, larger)) = first_cover_violation(space, &table, 0.0) {
            return Err(Error::NotMonotone {
                smaller,
                larger,
                smaller_value: table[smaller.index()],
                larger_value: table[larger.index()],
            });
        }
        let empty = table[0];
        if empty != 0.0 {
            return Err(Error::Boundary {
                subset: space.empty(),
                expected: 0.0,
                found: empty,
            });
        }
        let full = table[expected - 1];
        if full != 1.0 {
            return Err(Error::Boundary {
                subset: space.full(),
                expected: 1.0,
                found: full,
            });
        }
        Ok(Self {
            space: space.clone(),
            table,
        })
    }

    pub fn space(&self) -> &FiniteSpace {
        &self.space
    }

    pub fn size(&self) -> usize {
        self.space.size()
    }

    pub fn table(&self) -> &[f64] {
        &self.table
    }

    pub fn value(&self, subset: Subset) -> f64 {
        debug_assert_eq!(subset.size(), self.size());
        self.table[subset.index()]
    }

    pub fn value_of_bits(&self, bits: u32) -> f64 {
        self.table[bits as usize]
    }

    /// The capacity that is 1 on the full space and 0 elsewhere.
    pub fn unanimity(space: &FiniteSpace) -> Self {
        let mut table = vec![0.0; space.subset_count()];
        *table.last_mut().unwrap() = 1.0;
        Self {
            space: space.clone(),
            table,
        }
    }

    /// Point mass: `c(F) = 1` iff `x ∈ F`.
    pub fn dirac(space: &FiniteSpace, point: usize) -> Result<Self> {
        if point >= space.size() {
            return Err(Error::InvalidFunction(format!(
                "point {point} is out of range for a space of size {}",
                space.size()
            )));
        }
        let table = space
            .subsets()
            .map(|s| if s.contains(point) { 1.0 } else { 0.0 })
            .collect();
        Ok(Self {
            space: space.clone(),
            table,
        })
    }

    /// Additive capacity `c(A) = |A| / n`.
    pub fn uniform_additive(space: &FiniteSpace) -> Self {
        let n = space.size() as f64;
        let table = space.subsets().map(|s| s.len() as f64 / n).collect();
        Self {
            space: space.clone(),
            table,
        }
    }

    /// A pair `(A, B)` with `c(A ∪ B) ≠ max(c(A), c(B))`, or `None` when `c` is a
    /// possibility capacity.
    ///
    /// The scan compares every set with the maximum over its singletons. The
    /// smallest offending set `C` is split as `(C \ {x}, {x})` for its highest
    /// point `x`; minimality makes `c(C \ {x})` fall strictly below `c(C)`.
    pub fn possibility_violation(&self) -> Option<(Subset, Subset)> {
        let n = self.size();
        let mut singleton_max = vec![0.0f64; self.space.subset_count()];
        let mut offending: Option<Subset> = None;
        for subset in self.space.subsets().skip(1) {
            let bits = subset.bits();
            let top = 31 - bits.leading_zeros() as usize;
            let rest = bits & !(1 << top);
            singleton_max[bits as usize] = singleton_max[rest as usize].max(self.table[1 << top]);
            if self.table[bits as usize] != singleton_max[bits as usize]
                && offending.is_none_or(|o| subset.len() < o.len())
            {
                offending = Some(subset);
            }
        }
        offending.map(|c| {
            let top = (0..n).rev().find(|&x| c.contains(x)).unwrap();
            (c.without(top), Subset::singleton(n, top))
        })
    }

    pub fn is_possibility(&self) -> bool {
        self.possibility_violation().is_none()
    }

    /// `A ↦ c(f⁻¹(A))`.
    pub fn pushforward(&self, map: &SpaceMap) -> Result<Capacity> {
        self.space.ensure_size(map.domain().size())?;
        let table = map
            .codomain()
            .subsets()
            .map(|a| self.table[map.preimage(a).index()])
            .collect();
        Ok(Capacity {
            space: map.codomain().clone(),
            table,
        })
    }

    /// Independent uniforms per subset, made monotone by running maxima over the
    /// subset lattice and renormalized so that `c(X) = 1`.
    pub fn random(space: &FiniteSpace, rng: &mut impl Rng) -> Capacity {
        let count = space.subset_count();
        let mut table = vec![0.0; count];
        for bits in 1..count {
            let mut value: f64 = uniform(rng, 0.0, 1.0);
            let mut rest = bits;
            while rest != 0 {
                let low = rest & rest.wrapping_neg();
                value = value.max(table[bits & !low]);
                rest &= rest - 1;
            }
            table[bits] = value;
        }
        let top = table[count - 1];
        for v in table.iter_mut() {
            *v /= top;
        }
        Capacity {
            space: space.clone(),
            table,
        }
    }

    pub fn random_seeded(space: &FiniteSpace, seed: u64) -> Capacity {
        Self::random(space, &mut seeded(seed))
    }

    /// `A ↦ floor + (1 − floor)·c(A)` on nonempty `A`; bounded below by `floor`.
    pub fn floored(&self, floor: f64) -> Result<Capacity> {
        if !(0.0..=1.0).contains(&floor) {
            return Err(Error::InvalidFunction(format!("floor {floor} is outside [0, 1]")));
        }
        let mut table: Vec<f64> = self.table.iter().map(|&v| floor + (1.0 - floor) * v).collect();
        table[0] = 0.0;
        *table.last_mut().unwrap() = 1.0;
        Capacity::new(&self.space, table)
    }

    /// Convex combination `(1 − λ)·self + λ·other`.
    pub fn mix(&self, other: &Capacity, lambda: f64) -> Result<Capacity> {
        self.space.ensure_size(other.size())?;
        if !(0.0..=1.0).contains(&lambda) {
            return Err(Error::InvalidFunction(format!("weight {lambda} is outside [0, 1]")));
        }
        let mut table: Vec<f64> = self
            .table
            .iter()
            .zip(&other.table)
            .map(|(a, b)| a + lambda * (b - a))
            .collect();
        table[0] = 0.0;
        *table.last_mut().unwrap() = 1.0;
        Capacity::new(&self.space, table)
    }

    /// Largest tablewise absolute difference.
    pub fn distance(&self, other: &Capacity) -> Result<f64> {
        self.space.ensure_size(other.size())?;
        Ok(self
            .table
            .iter()
            .zip(&other.table)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max))
    }

    /// Completes a partial assignment by monotone closure and validates it.
    ///
    /// Unlisted subsets take the largest value among their immediate subsets,
    /// which is the maximum over listed subsets they contain; `∅` defaults to 0.
    pub fn from_partial(space: &FiniteSpace, entries: &[(Subset, f64)]) -> Result<Capacity> {
        let count = space.subset_count();
        let mut listed: Vec<Option<f64>> = vec![None; count];
        for &(subset, value) in entries {
            space.ensure_size(subset.size())?;
            if listed[subset.index()].replace(value).is_some() {
                return Err(Error::Parse(format!("subset {subset} is listed twice")));
            }
        }
        let mut table = vec![0.0; count];
        table[0] = listed[0].unwrap_or(0.0);
        for bits in 1..count {
            table[bits] = match listed[bits] {
                Some(v) => v,
                None => {
                    let mut value = 0.0f64;
                    let mut rest = bits;
                    while rest != 0 {
                        let low = rest & rest.wrapping_neg();
                        value = value.max(table[bits & !low]);
                        rest &= rest - 1;
                    }
                    value
                }
            };
        }
        Capacity::new(space, table)
    }
}

/// First cover pair `(A, A ∪ {x})` with `table[A] > table[A ∪ {x}] + slack`.
pub(crate) fn first_cover_violation(space: &FiniteSpace, table: &[f64], slack: f64) -> Option<(Subset, Subset)> {
    for a in space.subsets() {
        for x in 0..space.size() {
            if a.contains(x) {
                continue;
            }
            let b = a.with(x);
            if table[a.index()] > table[b.index()] + slack {
                return Some((a, b));
            }
        }
    }
    None
}

#[derive(Serialize, Deserialize)]
struct CapacityEntry {
    set: Vec<usize>,
    value: f64,
}

#[derive(Serialize, Deserialize)]
struct CapacityFile {
    size: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<String>>,
    values: Vec<CapacityEntry>,
}

impl Serialize for Capacity {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        CapacityFile {
            size: self.size(),
            labels: self.space.labels().map(<[String]>::to_vec),
            values: self
                .space
                .subsets()
                .map(|s| CapacityEntry {
                    set: s.to_indices(),
                    value: self.table[s.index()],
                })
                .collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Capacity {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let file = CapacityFile::deserialize(deserializer)?;
        Capacity::try_from(file).map_err(serde::de::Error::custom)
    }
}

impl TryFrom<CapacityFile> for Capacity {
    type Error = Error;

    fn try_from(file: CapacityFile) -> Result<Self> {
        let space = match file.labels {
            Some(labels) => {
                let space = FiniteSpace::with_labels(labels)?;
                space.ensure_size(file.size)?;
                space
            }
            None => FiniteSpace::new(file.size)?,
        };
        let entries = file
            .values
            .iter()
            .map(|e| Ok((Subset::from_indices(space.size(), &e.set)?, e.value)))
            .collect::<Result<Vec<_>>>()?;
        Capacity::from_partial(&space, &entries)
    }
}

/// Point weights of a possibility capacity; the largest weight is exactly 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "DensityFile", into = "DensityFile")]
pub struct PossibilityDensity {
    weights: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DensityFile {
    weights: Vec<f64>,
}

impl TryFrom<DensityFile> for PossibilityDensity {
    type Error = Error;

    fn try_from(file: DensityFile) -> Result<Self> {
        PossibilityDensity::new(file.weights)
    }
}

impl From<PossibilityDensity> for DensityFile {
    fn from(d: PossibilityDensity) -> Self {
        DensityFile { weights: d.weights }
    }
}

impl PossibilityDensity {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        FiniteSpace::new(weights.len()).map_err(|e| Error::InvalidDensity(e.to_string()))?;
        if let Some(i) = weights.iter().position(|w| !(0.0..=1.0).contains(w)) {
            return Err(Error::InvalidDensity(format!(
                "weight {} at point {i} is outside [0, 1]",
                weights[i]
            )));
        }
        if !weights.contains(&1.0) {
            return Err(Error::InvalidDensity("the largest weight must be exactly 1".into()));
        }
        Ok(Self { weights })
    }

    pub fn indicator(space: &FiniteSpace, point: usize) -> Result<Self> {
        if point >= space.size() {
            return Err(Error::InvalidDensity(format!("point {point} is out of range")));
        }
        let mut weights = vec![0.0; space.size()];
        weights[point] = 1.0;
        Ok(Self { weights })
    }

    /// Reads the singleton values of a possibility capacity.
    pub fn from_capacity(c: &Capacity) -> Result<Self> {
        if let Some((a, b)) = c.possibility_violation() {
            return Err(Error::InvalidDensity(format!(
                "capacity is not a possibility capacity: c({}) ≠ max(c({a}), c({b}))",
                a.union(&b)
            )));
        }
        Self::new((0..c.size()).map(|x| c.value(Subset::singleton(c.size(), x))).collect())
    }

    /// Uniform weights divided by their maximum.
    pub fn random(space: &FiniteSpace, rng: &mut impl Rng) -> Self {
        let mut weights: Vec<f64> = (0..space.size()).map(|_| uniform(rng, 0.0, 1.0)).collect();
        let top = weights.iter().copied().fold(0.0, f64::max);
        if top == 0.0 {
            weights[0] = 1.0;
        } else {
            for w in weights.iter_mut() {
                *w /= top;
            }
        }
        Self { weights }
    }

    pub fn random_seeded(space: &FiniteSpace, seed: u64) -> Self {
        Self::random(space, &mut seeded(seed))
    }

    pub fn size(&self) -> usize {
        self.weights.len()
    }

    pub fn space(&self) -> FiniteSpace {
        FiniteSpace::new(self.size()).expect("validated at construction")
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `max{w(x) | x ∈ A}`, zero on the empty set.
    pub fn value(&self, subset: Subset) -> f64 {
        subset.points().map(|x| self.weights[x]).fold(0.0, f64::max)
    }

    /// The possibility capacity `A ↦ max{w(x) | x ∈ A}`.
    pub fn capacity(&self) -> Capacity {
        let space = self.space();
        let mut table = vec![0.0f64; space.subset_count()];
        for bits in 1..table.len() {
            let top = 31 - (bits as u32).leading_zeros() as usize;
            table[bits] = table[bits & !(1 << top)].max(self.weights[top]);
        }
        Capacity { space, table }
    }
}

/// A map between finite spaces, given by the image of each domain point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MapFile", into = "MapFile")]
pub struct SpaceMap {
    domain: FiniteSpace,
    codomain: FiniteSpace,
    image: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct MapFile {
    domain: usize,
    codomain: usize,
    image: Vec<usize>,
}

impl TryFrom<MapFile> for SpaceMap {
    type Error = Error;

    fn try_from(file: MapFile) -> Result<Self> {
        SpaceMap::new(
            &FiniteSpace::new(file.domain)?,
            &FiniteSpace::new(file.codomain)?,
            file.image,
        )
    }
}

impl From<SpaceMap> for MapFile {
    fn from(m: SpaceMap) -> Self {
        MapFile {
            domain: m.domain.size(),
            codomain: m.codomain.size(),
            image: m.image,
        }
    }
}

impl SpaceMap {
    pub fn new(domain: &FiniteSpace, codomain: &FiniteSpace, image: Vec<usize>) -> Result<Self> {
        if image.len() != domain.size() {
            return Err(Error::InvalidMap(format!(
                "image has {} entries for a domain of size {}",
                image.len(),
                domain.size()
            )));
        }
        if let Some(i) = image.iter().position(|&y| y >= codomain.size()) {
            return Err(Error::InvalidMap(format!(
                "point {i} maps to {} outside a codomain of size {}",
                image[i],
                codomain.size()
            )));
        }
        Ok(Self {
            domain: domain.clone(),
            codomain: codomain.clone(),
            image,
        })
    }

    pub fn identity(space: &FiniteSpace) -> Self {
        Self {
            domain: space.clone(),
            codomain: space.clone(),
            image: (0..space.size()).collect(),
        }
    }

    pub fn constant(domain: &FiniteSpace, codomain: &FiniteSpace, point: usize) -> Result<Self> {
        Self::new(domain, codomain, vec![point; domain.size()])
    }

    pub fn random(domain: &FiniteSpace, codomain: &FiniteSpace, rng: &mut impl Rng) -> Self {
        Self {
            domain: domain.clone(),
            codomain: codomain.clone(),
            image: (0..domain.size()).map(|_| rng.gen_range(0..codomain.size())).collect(),
        }
    }

    pub fn domain(&self) -> &FiniteSpace {
        &self.domain
    }

    pub fn codomain(&self) -> &FiniteSpace {
        &self.codomain
    }

    pub fn image(&self) -> &[usize] {
        &self.image
    }

    pub fn apply(&self, point: usize) -> usize {
        self.image[point]
    }

    pub fn preimage(&self, subset: Subset) -> Subset {
        let bits = self
            .image
            .iter()
            .enumerate()
            .filter(|(_, &y)| subset.contains(y))
            .fold(0u32, |acc, (x, _)| acc | (1 << x));
        Subset::from_bits(self.domain.size(), bits).expect("domain-sized mask")
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &SpaceMap) -> Result<SpaceMap> {
        other.domain.ensure_size(self.codomain.size())?;
        Ok(SpaceMap {
            domain: self.domain.clone(),
            codomain: other.codomain.clone(),
            image: self.image.iter().map(|&y| other.image[y]).collect(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn space(n: usize) -> FiniteSpace {
        FiniteSpace::new(n).unwrap()
    }

    #[test]
    fn validates_examples() {
        assert!(Capacity::new(&space(1), vec![0.0, 1.0]).is_ok());
        // bitmask order: ∅, {0}, {1}, {0,1}
        assert!(Capacity::new(&space(2), vec![0.0, 0.5, 0.25, 1.0]).is_ok());
        match Capacity::new(&space(2), vec![0.0, 0.7, 0.0, 0.6]) {
            Err(Error::NotMonotone { smaller, larger, .. }) => {
                assert_eq!(smaller.to_indices(), vec![0]);
                assert!(larger.is_full());
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn validation_errors() {
        let s = space(2);
        assert!(matches!(
            Capacity::new(&s, vec![0.0, 1.0]),
            Err(Error::TableLength { expected: 4, found: 2 })
        ));
        assert!(matches!(
            Capacity::new(&s, vec![0.0, 1.5, 0.0, 1.0]),
            Err(Error::OutOfRange { .. })
        ));
        assert!(matches!(
            Capacity::new(&s, vec![0.0, f64::NAN, 0.0, 1.0]),
            Err(Error::OutOfRange { .. })
        ));
        assert!(matches!(
            Capacity::new(&s, vec![0.0, 0.2, 0.3, 0.9]),
            Err(Error::Boundary { .. })
        ));
        assert!(matches!(
            Capacity::new(&s, vec![0.1, 0.2, 0.3, 1.0]),
            Err(Error::Boundary { .. })
        ));
    }

    #[test]
    fn possibility_examples() {
        let c = PossibilityDensity::new(vec![1.0, 0.25]).unwrap().capacity();
        assert_eq!(c.table(), &[0.0, 1.0, 0.25, 1.0]);
        let all_one = PossibilityDensity::new(vec![1.0; 3]).unwrap().capacity();
        assert!(all_one.table()[1..].iter().all(|&v| v == 1.0));
        let c = PossibilityDensity::new(vec![1.0, 0.5, 0.5]).unwrap().capacity();
        assert_eq!(c.value(Subset::from_indices(3, &[1, 2]).unwrap()), 0.5);
        assert!(c.is_possibility());
        assert!(PossibilityDensity::new(vec![0.5, 0.9]).is_err());
        assert!(PossibilityDensity::new(vec![1.0, -0.1]).is_err());
    }

    #[test]
    fn possibility_witness() {
        let c = Capacity::new(&space(2), vec![0.0, 0.5, 0.25, 1.0]).unwrap();
        let (a, b) = c.possibility_violation().unwrap();
        assert_eq!(a.to_indices(), vec![0]);
        assert_eq!(b.to_indices(), vec![1]);
        assert!(Capacity::dirac(&space(3), 1).unwrap().is_possibility());
    }

    #[test]
    fn possibility_witness_is_a_violation_exhaustive_pairs() {
        for seed in 0..200 {
            let s = space(2 + (seed as usize % 4));
            let c = Capacity::random_seeded(&s, seed);
            // Reference: all pairs of subsets.
            let pair_violation = s
                .subsets()
                .any(|a| s.subsets().any(|b| c.value(a.union(&b)) != c.value(a).max(c.value(b))));
            match c.possibility_violation() {
                Some((a, b)) => {
                    assert!(pair_violation);
                    assert!(c.value(a.union(&b)) > c.value(a).max(c.value(b)));
                }
                None => assert!(!pair_violation),
            }
        }
    }

    #[test]
    fn dirac_examples() {
        let d = Capacity::dirac(&space(2), 0).unwrap();
        assert_eq!(d.table(), &[0.0, 1.0, 0.0, 1.0]);
        assert_eq!(Capacity::dirac(&space(1), 0).unwrap().table(), &[0.0, 1.0]);
        for x in 0..4 {
            let s = space(4);
            assert_eq!(
                Capacity::dirac(&s, x).unwrap(),
                PossibilityDensity::indicator(&s, x).unwrap().capacity()
            );
        }
        assert!(Capacity::dirac(&space(2), 2).is_err());
    }

    #[test]
    fn pushforward_examples() {
        let s = space(4);
        let c = Capacity::random_seeded(&s, 7);
        assert_eq!(c.pushforward(&SpaceMap::identity(&s)).unwrap(), c);
        let point = space(1);
        let to_point = SpaceMap::constant(&s, &point, 0).unwrap();
        assert_eq!(c.pushforward(&to_point).unwrap().table(), &[0.0, 1.0]);
        let t = space(3);
        let f = SpaceMap::new(&s, &t, vec![2, 0, 0, 1]).unwrap();
        for x in 0..4 {
            let pushed = Capacity::dirac(&s, x).unwrap().pushforward(&f).unwrap();
            assert_eq!(pushed, Capacity::dirac(&t, f.apply(x)).unwrap());
        }
    }

    #[test]
    fn random_generation() {
        let s = space(4);
        assert_eq!(Capacity::random_seeded(&s, 3), Capacity::random_seeded(&s, 3));
        let mut rng = seeded(11);
        for _ in 0..1000 {
            let c = Capacity::random(&s, &mut rng);
            assert!(Capacity::new(&s, c.table().to_vec()).is_ok());
            let d = PossibilityDensity::random(&s, &mut rng);
            assert_eq!(d.weights().iter().copied().fold(0.0, f64::max), 1.0);
        }
    }

    #[test]
    fn partial_json_completes_by_monotone_closure() {
        let c: Capacity = serde_json::from_str(
            r#"{"size": 3, "values": [{"set": [0], "value": 0.5}, {"set": [1, 2], "value": 0.25}, {"set": [0,1,2], "value": 1}]}"#,
        )
        .unwrap();
        assert_eq!(c.value(Subset::from_indices(3, &[0, 1]).unwrap()), 0.5);
        assert_eq!(c.value(Subset::from_indices(3, &[1]).unwrap()), 0.0);
        assert_eq!(c.value(Subset::from_indices(3, &[0, 2]).unwrap()), 0.5);
        let back: Capacity = serde_json::from_str(&serde_json::to_string(&c).unwrap()).unwrap();
        assert_eq!(back, c);
        assert!(serde_json::from_str::<Capacity>(
            r#"{"size": 2, "values": [{"set": [0], "value": 0.5}, {"set": [0], "value": 0.6}, {"set": [0,1], "value": 1}]}"#
        )
        .is_err());
        assert!(serde_json::from_str::<Capacity>(r#"{"size": 2, "values": [{"set": [0], "value": 0.5}]}"#).is_err());
    }

    #[test]
    fn density_and_map_json() {
        let d: PossibilityDensity = serde_json::from_str(r#"{"weights": [1, 0.5]}"#).unwrap();
        assert_eq!(d.weights(), &[1.0, 0.5]);
        assert!(serde_json::from_str::<PossibilityDensity>(r#"{"weights": [0.5]}"#).is_err());
        let m: SpaceMap = serde_json::from_str(r#"{"domain": 3, "codomain": 2, "image": [0, 1, 1]}"#).unwrap();
        assert_eq!(m.preimage(Subset::singleton(2, 1)).to_indices(), vec![1, 2]);
        assert!(serde_json::from_str::<SpaceMap>(r#"{"domain": 2, "codomain": 2, "image": [0, 2]}"#).is_err());
    }

    #[test]
    fn floored_and_mixed_capacities() {
        let s = space(3);
        let a = Capacity::random_seeded(&s, 1).floored(0.1).unwrap();
        let b = Capacity::random_seeded(&s, 2).floored(0.1).unwrap();
        let m = a.mix(&b, 0.01).unwrap();
        assert!(a.distance(&m).unwrap() <= 0.01);
        assert!(s.subsets().skip(1).all(|x| m.value(x) >= 0.1));
    }
}
