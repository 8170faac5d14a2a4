//! Functorial structure: transport of functionals along maps, the naturality
//! of the integral transformation, and the possibility-capacity monad restricted
//! to finitely supported outer capacities.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::capacity::{Capacity, PossibilityDensity, SpaceMap};
use crate::error::{Error, Result};
use crate::functional::{random_function, Functional, FunctionalKind};
use crate::integral::maxplus_integral;
use crate::rng::{trial_rng, uniform};
use crate::space::{FiniteSpace, RealFunction, Subset};

/// `ψ ∘ f` for `ψ` on the codomain of `f`.
pub fn pull_back(psi: &RealFunction, map: &SpaceMap) -> Result<RealFunction> {
    map.codomain().ensure_size(psi.size())?;
    RealFunction::new(map.domain(), map.image().iter().map(|&y| psi.value(y)).collect())
}

/// `Sf(I) : ψ ↦ I(ψ ∘ f)`.
pub fn functional_pushforward(functional: &Functional, map: &SpaceMap) -> Result<Functional> {
    functional.space().ensure_size(map.domain().size())?;
    let inner = functional.clone();
    let image = map.image().to_vec();
    Ok(Functional::with_kind(
        map.codomain(),
        FunctionalKind::PushforwardComposed,
        move |psi| {
            let pulled = RealFunction::from_values(image.iter().map(|&y| psi.value(y)).collect())
                .expect("values of ψ are finite");
            inner.eval_unchecked(&pulled)
        },
    ))
}

/// Largest `|∫ ψ d(f♯c) − ∫ ψ∘f dc|` over `trials` seeded functions `ψ`.
pub fn naturality_check(c: &Capacity, map: &SpaceMap, trials: u64, seed: u64) -> Result<f64> {
    let pushed = c.pushforward(map)?;
    let mut worst = 0.0f64;
    for trial in 0..trials {
        let psi = random_function(map.codomain(), &mut trial_rng(seed, trial));
        let lhs = maxplus_integral(&pushed, &psi)?;
        let rhs = maxplus_integral(c, &pull_back(&psi, map)?)?;
        worst = worst.max((lhs - rhs).abs());
    }
    Ok(worst)
}

/// Largest naturality deviation over `trials` independent triples `(c, f, ψ)`
/// with `c` on a space of size `domain` and `f` into a space of size `codomain`.
pub fn naturality_sweep(domain: usize, codomain: usize, trials: u64, seed: u64) -> Result<f64> {
    let (x, y) = (FiniteSpace::new(domain)?, FiniteSpace::new(codomain)?);
    let mut worst = 0.0f64;
    for trial in 0..trials {
        let mut rng = trial_rng(seed, trial);
        let c = Capacity::random(&x, &mut rng);
        let map = SpaceMap::random(&x, &y, &mut rng);
        let psi = random_function(&y, &mut rng);
        let lhs = maxplus_integral(&c.pushforward(&map)?, &psi)?;
        let rhs = maxplus_integral(&c, &pull_back(&psi, &map)?)?;
        worst = worst.max((lhs - rhs).abs());
    }
    Ok(worst)
}

/// One point of the support of a finitely supported outer capacity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum OuterSupport {
    Nested(FiniteSupportOuter),
    Density(PossibilityDensity),
}

/// A possibility capacity on a finite set of possibility capacities: support
/// point `i` has possibility `weights[i]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "OuterFile", into = "OuterFile")]
pub struct FiniteSupportOuter {
    weights: Vec<f64>,
    supports: Vec<OuterSupport>,
}

#[derive(Serialize, Deserialize)]
struct OuterFile {
    weights: Vec<f64>,
    supports: Vec<OuterSupport>,
}

impl TryFrom<OuterFile> for FiniteSupportOuter {
    type Error = Error;

    fn try_from(file: OuterFile) -> Result<Self> {
        FiniteSupportOuter::new(file.weights, file.supports)
    }
}

impl From<FiniteSupportOuter> for OuterFile {
    fn from(o: FiniteSupportOuter) -> Self {
        OuterFile {
            weights: o.weights,
            supports: o.supports,
        }
    }
}

impl OuterSupport {
    fn depth(&self) -> usize {
        match self {
            OuterSupport::Density(_) => 0,
            OuterSupport::Nested(o) => o.depth(),
        }
    }

    fn base_size(&self) -> usize {
        match self {
            OuterSupport::Density(d) => d.size(),
            OuterSupport::Nested(o) => o.base_size(),
        }
    }
}

impl FiniteSupportOuter {
    pub fn new(weights: Vec<f64>, supports: Vec<OuterSupport>) -> Result<Self> {
        if supports.is_empty() {
            return Err(Error::InvalidOuter("at least one support point is required".into()));
        }
        if weights.len() != supports.len() {
            return Err(Error::InvalidOuter(format!(
                "{} weights for {} support points",
                weights.len(),
                supports.len()
            )));
        }
        if let Some(w) = weights.iter().find(|w| !(0.0..=1.0).contains(*w)) {
            return Err(Error::InvalidOuter(format!("weight {w} is outside [0, 1]")));
        }
        if !weights.contains(&1.0) {
            return Err(Error::InvalidOuter("the largest weight must be exactly 1".into()));
        }
        let (depth, size) = (supports[0].depth(), supports[0].base_size());
        if supports.iter().any(|s| s.base_size() != size) {
            return Err(Error::InvalidOuter(
                "support points live on different base spaces".into(),
            ));
        }
        if supports.iter().any(|s| s.depth() != depth) {
            return Err(Error::InvalidOuter(
                "support points have different nesting depths".into(),
            ));
        }
        Ok(Self { weights, supports })
    }

    /// Outer capacity over densities.
    pub fn from_densities(weights: Vec<f64>, densities: Vec<PossibilityDensity>) -> Result<Self> {
        Self::new(weights, densities.into_iter().map(OuterSupport::Density).collect())
    }

    /// Outer capacity over outer capacities.
    pub fn from_outers(weights: Vec<f64>, outers: Vec<FiniteSupportOuter>) -> Result<Self> {
        Self::new(weights, outers.into_iter().map(OuterSupport::Nested).collect())
    }

    /// The point mass at `d`, i.e. the unit of the monad at `ΠX`.
    pub fn point_mass(d: &PossibilityDensity) -> Self {
        Self {
            weights: vec![1.0],
            supports: vec![OuterSupport::Density(d.clone())],
        }
    }

    /// Image of `d` under `Π(η_X)`: the Dirac capacity at each point `x`,
    /// weighted by `d(x)`.
    pub fn dirac_image(d: &PossibilityDensity) -> Self {
        let space = d.space();
        Self {
            weights: d.weights().to_vec(),
            supports: (0..d.size())
                .map(|x| OuterSupport::Density(PossibilityDensity::indicator(&space, x).expect("point in range")))
                .collect(),
        }
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn supports(&self) -> &[OuterSupport] {
        &self.supports
    }

    /// 1 when the support points are densities.
    pub fn depth(&self) -> usize {
        1 + self.supports[0].depth()
    }

    pub fn base_size(&self) -> usize {
        self.supports[0].base_size()
    }

    fn densities(&self) -> Result<Vec<&PossibilityDensity>> {
        self.supports
            .iter()
            .map(|s| match s {
                OuterSupport::Density(d) => Ok(d),
                OuterSupport::Nested(_) => Err(Error::InvalidOuter("expected a depth-1 outer capacity".into())),
            })
            .collect()
    }

    fn inner_outers(&self) -> Result<Vec<&FiniteSupportOuter>> {
        self.supports
            .iter()
            .map(|s| match s {
                OuterSupport::Nested(o) if o.depth() == 1 => Ok(o),
                _ => Err(Error::InvalidOuter("expected a depth-2 outer capacity".into())),
            })
            .collect()
    }

    /// `μ_{ΠX}`: merges the two outer levels of a depth-2 element, giving
    /// `c_{ji}` the weight `w_j · v_{ji}`.
    pub fn flatten_outer(&self) -> Result<FiniteSupportOuter> {
        let mut weights = Vec::new();
        let mut supports = Vec::new();
        for (&w, inner) in self.weights.iter().zip(self.inner_outers()?) {
            for (&v, d) in inner.weights.iter().zip(inner.densities()?) {
                weights.push(w * v);
                supports.push(OuterSupport::Density(d.clone()));
            }
        }
        FiniteSupportOuter::new(weights, supports)
    }

    /// `Π(μ_X)`: replaces each inner outer capacity by its multiplication.
    pub fn flatten_inner(&self) -> Result<FiniteSupportOuter> {
        let supports = self
            .inner_outers()?
            .into_iter()
            .map(|o| {
                Ok(OuterSupport::Density(PossibilityDensity::from_capacity(
                    &mu_possibility(o)?,
                )?))
            })
            .collect::<Result<Vec<_>>>()?;
        FiniteSupportOuter::new(self.weights.clone(), supports)
    }

    pub fn random_depth1(space: &FiniteSpace, max_supports: usize, rng: &mut impl Rng) -> Self {
        let k = rng.gen_range(1..=max_supports.max(1));
        let densities = (0..k).map(|_| PossibilityDensity::random(space, rng)).collect();
        Self::from_densities(random_weights(k, rng), densities).expect("generated weights peak at 1")
    }

    pub fn random_depth2(space: &FiniteSpace, max_supports: usize, rng: &mut impl Rng) -> Self {
        let k = rng.gen_range(1..=max_supports.max(1));
        let outers = (0..k).map(|_| Self::random_depth1(space, max_supports, rng)).collect();
        Self::from_outers(random_weights(k, rng), outers).expect("generated weights peak at 1")
    }
}

fn random_weights(k: usize, rng: &mut impl Rng) -> Vec<f64> {
    let mut weights: Vec<f64> = (0..k).map(|_| uniform(rng, 0.0, 1.0)).collect();
    let peak = rng.gen_range(0..k);
    weights[peak] = 1.0;
    weights
}

/// `μ_•(𝒞)(F) = max_i w_i · c_i(F)` for a depth-1 outer capacity.
///
/// In `max{𝒞(F_t) · t | t ∈ (0, 1]}` the product only changes value at the
/// thresholds `t = c_i(F)`, where it is bounded by `w_i · c_i(F)`.
pub fn mu_possibility(outer: &FiniteSupportOuter) -> Result<Capacity> {
    let densities = outer.densities()?;
    let space = densities[0].space();
    let table = space
        .subsets()
        .map(|f| {
            outer
                .weights
                .iter()
                .zip(&densities)
                .map(|(w, d)| w * d.value(f))
                .fold(0.0, f64::max)
        })
        .collect();
    Capacity::new(&space, table)
}

/// `max{𝒞(F_t) · t | t ∈ grid}` with `F_t = {c_i | c_i(F) ≥ t}` and `𝒞(F_t)`
/// the largest weight among its members.
pub fn mu_oracle_on_grid(outer: &FiniteSupportOuter, subset: Subset, grid: &[f64]) -> Result<f64> {
    let densities = outer.densities()?;
    if subset.size() != outer.base_size() {
        return Err(Error::DomainMismatch {
            expected: outer.base_size(),
            found: subset.size(),
        });
    }
    let values: Vec<f64> = densities.iter().map(|d| d.value(subset)).collect();
    Ok(grid
        .iter()
        .map(|&t| {
            let mass = values
                .iter()
                .zip(&outer.weights)
                .filter(|(&v, _)| v >= t)
                .map(|(_, &w)| w)
                .fold(0.0, f64::max);
            mass * t
        })
        .fold(0.0, f64::max))
}

/// [`mu_oracle_on_grid`] on `step, 2·step, …, 1`.
pub fn mu_bruteforce_oracle(outer: &FiniteSupportOuter, subset: Subset, step: f64) -> Result<f64> {
    if step.is_nan() || step <= 0.0 {
        return Err(Error::InvalidOuter(format!("grid step must be positive, got {step}")));
    }
    let mut grid: Vec<f64> = (1..).map(|k| k as f64 * step).take_while(|&t| t < 1.0).collect();
    grid.push(1.0);
    mu_oracle_on_grid(outer, subset, &grid)
}

/// [`mu_oracle_on_grid`] on the thresholds `c_i(F)` themselves.
pub fn mu_oracle_exact(outer: &FiniteSupportOuter, subset: Subset) -> Result<f64> {
    let grid: Vec<f64> = outer
        .densities()?
        .iter()
        .map(|d| d.value(subset))
        .filter(|&v| v > 0.0)
        .collect();
    mu_oracle_on_grid(outer, subset, &grid)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MonadLaw {
    LeftUnit,
    RightUnit,
    Associativity,
    /// Closed form of the multiplication against the threshold formula.
    ClosedForm,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LawWitness {
    pub trial: u64,
    pub outer: FiniteSupportOuter,
    pub subset: Subset,
    pub deviation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LawVerdict {
    pub law: MonadLaw,
    pub passed: bool,
    pub samples: u64,
    pub max_deviation: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<LawWitness>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MonadLawReport {
    pub seed: u64,
    pub trials: u64,
    pub tol: f64,
    pub verdicts: Vec<LawVerdict>,
}

impl MonadLawReport {
    pub fn all_pass(&self) -> bool {
        self.verdicts.iter().all(|v| v.passed)
    }

    pub fn verdict(&self, law: MonadLaw) -> Option<&LawVerdict> {
        self.verdicts.iter().find(|v| v.law == law)
    }
}

/// Tolerance of the unit and associativity comparisons.
pub const MONAD_TOL: f64 = 1e-12;

/// Largest support count drawn at each level of a random outer capacity.
pub const MAX_SUPPORTS: usize = 4;

/// Seeded check of the unit laws, depth-2 associativity and the closed form of
/// the multiplication.
pub fn monad_law_harness(space: &FiniteSpace, seed: u64, trials: u64) -> Result<MonadLawReport> {
    let laws = [
        MonadLaw::LeftUnit,
        MonadLaw::RightUnit,
        MonadLaw::Associativity,
        MonadLaw::ClosedForm,
    ];
    let mut verdicts: Vec<LawVerdict> = laws
        .iter()
        .map(|&law| LawVerdict {
            law,
            passed: true,
            samples: 0,
            max_deviation: 0.0,
            witness: None,
        })
        .collect();
    let record =
        |verdict: &mut LawVerdict, trial: u64, outer: &FiniteSupportOuter, lhs: &[f64], rhs: &[f64], tol: f64| {
            verdict.samples += 1;
            let (index, deviation) = lhs
                .iter()
                .zip(rhs)
                .map(|(a, b)| (a - b).abs())
                .enumerate()
                .fold((0, 0.0f64), |best, (i, d)| if d > best.1 { (i, d) } else { best });
            verdict.max_deviation = verdict.max_deviation.max(deviation);
            if deviation > tol {
                verdict.passed = false;
                if verdict.witness.is_none() {
                    verdict.witness = Some(LawWitness {
                        trial,
                        outer: outer.clone(),
                        subset: space.subset(index as u32).expect("table index"),
                        deviation,
                    });
                }
            }
        };
    for trial in 0..trials {
        let mut rng = trial_rng(seed, trial);
        let d = PossibilityDensity::random(space, &mut rng);
        let expected = d.capacity();

        let unit = FiniteSupportOuter::point_mass(&d);
        record(
            &mut verdicts[0],
            trial,
            &unit,
            mu_possibility(&unit)?.table(),
            expected.table(),
            MONAD_TOL,
        );

        let image = FiniteSupportOuter::dirac_image(&d);
        record(
            &mut verdicts[1],
            trial,
            &image,
            mu_possibility(&image)?.table(),
            expected.table(),
            MONAD_TOL,
        );

        let nested = FiniteSupportOuter::random_depth2(space, MAX_SUPPORTS, &mut rng);
        let inner_first = mu_possibility(&nested.flatten_inner()?)?;
        let outer_first = mu_possibility(&nested.flatten_outer()?)?;
        record(
            &mut verdicts[2],
            trial,
            &nested,
            inner_first.table(),
            outer_first.table(),
            MONAD_TOL,
        );

        let outer = FiniteSupportOuter::random_depth1(space, MAX_SUPPORTS, &mut rng);
        let closed = mu_possibility(&outer)?;
        let threshold = space
            .subsets()
            .map(|f| mu_oracle_exact(&outer, f))
            .collect::<Result<Vec<_>>>()?;
        record(&mut verdicts[3], trial, &outer, closed.table(), &threshold, 0.0);
    }
    Ok(MonadLawReport {
        seed,
        trials,
        tol: MONAD_TOL,
        verdicts,
    })
}
