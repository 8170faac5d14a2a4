//! Functionals `C(X) → ℝ`, the axioms that define comonotonically maxitive
//! functionals as executable checks, the `Υ^t_A` test functions and the
//! comonotone refinement of a test function.

use std::fmt;
use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::capacity::{Capacity, PossibilityDensity};
use crate::error::{Error, Result};
use crate::rng::{trial_rng, uniform};
use crate::space::{comonotonic, level_set, refines, FiniteSpace, RealFunction, Subset};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FunctionalKind {
    CapacityBacked,
    PushforwardComposed,
    BlackBox,
}

type Evaluator = dyn Fn(&RealFunction) -> f64 + Send + Sync;

/// A deterministic evaluator on the functions of one finite space.
#[derive(Clone)]
pub struct Functional {
    space: FiniteSpace,
    kind: FunctionalKind,
    eval: Arc<Evaluator>,
}

impl fmt::Debug for Functional {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Functional")
            .field("size", &self.space.size())
            .field("kind", &self.kind)
            .finish_non_exhaustive()
    }
}

impl Functional {
    pub(crate) fn with_kind(
        space: &FiniteSpace,
        kind: FunctionalKind,
        eval: impl Fn(&RealFunction) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self {
            space: space.clone(),
            kind,
            eval: Arc::new(eval),
        }
    }

    /// Wraps an arbitrary closure; the closure must be pure.
    pub fn black_box(space: &FiniteSpace, eval: impl Fn(&RealFunction) -> f64 + Send + Sync + 'static) -> Self {
        Self::with_kind(space, FunctionalKind::BlackBox, eval)
    }

    pub fn space(&self) -> &FiniteSpace {
        &self.space
    }

    pub fn kind(&self) -> FunctionalKind {
        self.kind
    }

    pub fn evaluate(&self, phi: &RealFunction) -> Result<f64> {
        self.space.ensure_size(phi.size())?;
        Ok((self.eval)(phi))
    }

    /// Evaluates a function already known to live on this space.
    pub(crate) fn eval_unchecked(&self, phi: &RealFunction) -> f64 {
        (self.eval)(phi)
    }
}

/// Serializable description of a functional, used by the CLI.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum FunctionalSpec {
    /// Max-plus integral against a capacity.
    Capacity {
        capacity: Capacity,
    },
    /// Max-plus integral against a possibility density.
    Density {
        density: PossibilityDensity,
    },
    Max {
        size: usize,
    },
    Min {
        size: usize,
    },
    Point {
        size: usize,
        point: usize,
    },
    /// `φ ↦ max φ + min φ`.
    MaxPlusMin {
        size: usize,
    },
    /// `φ ↦ scale·φ(point)`.
    ScaledPoint {
        size: usize,
        point: usize,
        scale: f64,
    },
}

impl FunctionalSpec {
    pub fn build(&self) -> Result<Functional> {
        let point_in = |size: usize, point: usize| -> Result<FiniteSpace> {
            let space = FiniteSpace::new(size)?;
            if point >= size {
                return Err(Error::InvalidFunction(format!(
                    "point {point} is out of range for a space of size {size}"
                )));
            }
            Ok(space)
        };
        Ok(match *self {
            FunctionalSpec::Capacity { ref capacity } => crate::representation::integral_functional(capacity),
            FunctionalSpec::Density { ref density } => crate::representation::integral_functional(&density.capacity()),
            FunctionalSpec::Max { size } => Functional::black_box(&FiniteSpace::new(size)?, |phi| phi.max()),
            FunctionalSpec::Min { size } => Functional::black_box(&FiniteSpace::new(size)?, |phi| phi.min()),
            FunctionalSpec::Point { size, point } => {
                Functional::black_box(&point_in(size, point)?, move |phi| phi.value(point))
            }
            FunctionalSpec::MaxPlusMin { size } => {
                Functional::black_box(&FiniteSpace::new(size)?, |phi| phi.max() + phi.min())
            }
            FunctionalSpec::ScaledPoint { size, point, scale } => {
                Functional::black_box(&point_in(size, point)?, move |phi| scale * phi.value(point))
            }
        })
    }
}

/// Canonical member of `Υ^t_A`: `t` on `A`, `t − M` elsewhere.
pub fn upsilon_member(subset: Subset, t: f64, m: f64) -> Result<RealFunction> {
    if m.is_nan() || m <= 0.0 {
        return Err(Error::InvalidFunction(format!("depth M must be positive, got {m}")));
    }
    RealFunction::from_values(
        (0..subset.size())
            .map(|x| if subset.contains(x) { t } else { t - m })
            .collect(),
    )
}

/// `ψ ≤ t` everywhere and `ψ = t` on `A`.
pub fn in_upsilon(psi: &RealFunction, subset: Subset, t: f64) -> bool {
    psi.size() == subset.size()
        && (0..psi.size()).all(|x| psi.value(x) <= t && (!subset.contains(x) || psi.value(x) == t))
}

/// Replaces `ψ ∈ Υ^t_{φ_t}` by `ψ'(x) = min{ψ(y) | φ(y) ≥ φ(x)}`, which stays in
/// `Υ^t_{φ_t}`, lies below `ψ`, is comonotone with `φ` and is constant on the
/// fibers of `φ`.
pub fn refine_comonotone(phi: &RealFunction, t: f64, psi: &RealFunction) -> Result<RealFunction> {
    crate::space::ensure_same_size(phi, psi)?;
    if !phi.values().contains(&t) {
        return Err(Error::Precondition {
            point: None,
            reason: format!("threshold {t} is not a value of φ"),
        });
    }
    let top = level_set(phi, t);
    for x in 0..psi.size() {
        if psi.value(x) > t {
            return Err(Error::Precondition {
                point: Some(x),
                reason: format!("ψ = {} exceeds the threshold {t}", psi.value(x)),
            });
        }
        if top.contains(x) && psi.value(x) != t {
            return Err(Error::Precondition {
                point: Some(x),
                reason: format!("ψ = {} on the level set φ ≥ {t}, must equal {t}", psi.value(x)),
            });
        }
    }
    RealFunction::from_values(
        (0..phi.size())
            .map(|x| {
                (0..phi.size())
                    .filter(|&y| phi.value(y) >= phi.value(x))
                    .map(|y| psi.value(y))
                    .fold(f64::INFINITY, f64::min)
            })
            .collect(),
    )
}

/// Outcome of checking the four refinement postconditions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RefinementCheck {
    pub below: bool,
    pub in_upsilon: bool,
    pub comonotone: bool,
    pub constant_on_fibers: bool,
}

impl RefinementCheck {
    pub fn evaluate(phi: &RealFunction, t: f64, psi: &RealFunction, refined: &RealFunction) -> Result<Self> {
        Ok(Self {
            below: refined.le(psi),
            in_upsilon: in_upsilon(refined, level_set(phi, t), t),
            comonotone: comonotonic(refined, phi)?,
            constant_on_fibers: refines(phi, refined)?,
        })
    }

    pub fn all(&self) -> bool {
        self.below && self.in_upsilon && self.comonotone && self.constant_on_fibers
    }
}

/// Value grid used to provoke ties in sampled functions.
const TIE_GRID: [f64; 5] = [-1.0, -0.5, 0.0, 0.5, 1.0];

fn sample_value(rng: &mut impl Rng) -> f64 {
    if rng.gen_bool(0.3) {
        TIE_GRID[rng.gen_range(0..TIE_GRID.len())]
    } else {
        uniform(rng, -3.0, 3.0)
    }
}

/// A random function whose values sometimes repeat.
pub fn random_function(space: &FiniteSpace, rng: &mut impl Rng) -> RealFunction {
    RealFunction::new(space, (0..space.size()).map(|_| sample_value(rng)).collect()).expect("sampled values are finite")
}

/// Two functions nondecreasing along a common random weak order on the points.
pub fn generate_comonotone_pair(space: &FiniteSpace, rng: &mut impl Rng) -> (RealFunction, RealFunction) {
    let n = space.size();
    let raw: Vec<usize> = (0..n).map(|_| rng.gen_range(0..n)).collect();
    let mut levels = raw.clone();
    levels.sort_unstable();
    levels.dedup();
    let rank: Vec<usize> = raw.iter().map(|r| levels.binary_search(r).unwrap()).collect();
    let mut draw = || {
        let mut steps: Vec<f64> = (0..levels.len()).map(|_| sample_value(rng)).collect();
        steps.sort_by(f64::total_cmp);
        RealFunction::new(space, rank.iter().map(|&r| steps[r]).collect()).expect("sampled values are finite")
    };
    let phi = draw();
    let psi = draw();
    (phi, psi)
}

pub fn generate_comonotone_pair_seeded(space: &FiniteSpace, seed: u64) -> (RealFunction, RealFunction) {
    generate_comonotone_pair(space, &mut crate::rng::seeded(seed))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Property {
    Normalized,
    Monotone,
    PlusHomogeneous,
    ComonotoneMaxitive,
    /// Full maxitivity; not one of the four axioms.
    Maxitive,
}

impl Property {
    pub const AXIOMS: [Property; 4] = [
        Property::Normalized,
        Property::Monotone,
        Property::PlusHomogeneous,
        Property::ComonotoneMaxitive,
    ];

    pub const ALL: [Property; 5] = [
        Property::Normalized,
        Property::Monotone,
        Property::PlusHomogeneous,
        Property::ComonotoneMaxitive,
        Property::Maxitive,
    ];

    pub fn is_axiom(self) -> bool {
        self != Property::Maxitive
    }

    pub fn name(self) -> &'static str {
        match self {
            Property::Normalized => "normalized",
            Property::Monotone => "monotone",
            Property::PlusHomogeneous => "plus_homogeneous",
            Property::ComonotoneMaxitive => "comonotone_maxitive",
            Property::Maxitive => "maxitive",
        }
    }
}

/// One concrete instance of a property check.
///
/// `inputs` are the functions the property quantifies over (`γ_X` for
/// normalization, `f ≤ g` for monotonicity, `f` for plus-homogeneity and the
/// pair for the maxitivity properties); `constant` is the shift `γ` where one
/// is involved.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Witness {
    pub property: Property,
    pub trial: u64,
    pub inputs: Vec<RealFunction>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub constant: Option<f64>,
    /// Functional values entering the comparison.
    pub observed: Vec<f64>,
    pub deviation: f64,
}

impl Witness {
    /// Evaluates the instance; the deviation is how far the property is from
    /// holding (0 when it holds exactly).
    pub fn measure(
        property: Property,
        trial: u64,
        functional: &Functional,
        inputs: Vec<RealFunction>,
        constant: Option<f64>,
    ) -> Result<Witness> {
        for input in &inputs {
            functional.space.ensure_size(input.size())?;
        }
        let i = |phi: &RealFunction| functional.eval_unchecked(phi);
        let (observed, deviation) = match property {
            Property::Normalized => {
                let gamma = inputs[0].value(0);
                let v = i(&inputs[0]);
                (vec![v], (v - gamma).abs())
            }
            Property::Monotone => {
                let (a, b) = (i(&inputs[0]), i(&inputs[1]));
                (vec![a, b], (a - b).max(0.0))
            }
            Property::PlusHomogeneous => {
                let gamma = constant.unwrap_or(0.0);
                let (a, b) = (i(&inputs[0]), i(&inputs[0].shift(gamma)));
                (vec![a, b], (b - a - gamma).abs())
            }
            Property::ComonotoneMaxitive | Property::Maxitive => {
                let joined = inputs[0].join(&inputs[1])?;
                let (a, b, j) = (i(&inputs[0]), i(&inputs[1]), i(&joined));
                (vec![a, b, j], (j - a.max(b)).abs())
            }
        };
        let deviation = if deviation.is_nan() { f64::INFINITY } else { deviation };
        Ok(Witness {
            property,
            trial,
            inputs,
            constant,
            observed,
            deviation,
        })
    }

    /// Re-evaluates this instance against `functional` and reports whether it
    /// still violates the property at tolerance `tol`.
    pub fn recheck(&self, functional: &Functional, tol: f64) -> Result<bool> {
        let again = Witness::measure(
            self.property,
            self.trial,
            functional,
            self.inputs.clone(),
            self.constant,
        )?;
        Ok(again.deviation > tol)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verdict {
    pub property: Property,
    pub axiom: bool,
    pub passed: bool,
    pub samples: u64,
    pub max_deviation: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

impl Verdict {
    fn new(property: Property) -> Self {
        Self {
            property,
            axiom: property.is_axiom(),
            passed: true,
            samples: 0,
            max_deviation: 0.0,
            witness: None,
        }
    }

    /// Folds in one instance. The first failing instance in trial order is kept.
    fn record(&mut self, instance: Witness, tol: f64) {
        self.samples += 1;
        self.max_deviation = self.max_deviation.max(instance.deviation);
        if instance.deviation > tol {
            self.passed = false;
            if self.witness.as_ref().is_none_or(|w| instance.trial < w.trial) {
                self.witness = Some(instance);
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PropertyReport {
    pub seed: Option<u64>,
    pub trials: u64,
    pub tol: f64,
    pub verdicts: Vec<Verdict>,
}

impl PropertyReport {
    pub fn verdict(&self, property: Property) -> Option<&Verdict> {
        self.verdicts.iter().find(|v| v.property == property)
    }

    pub fn passed(&self, property: Property) -> bool {
        self.verdict(property).is_some_and(|v| v.passed)
    }

    /// All four axioms hold on every sample.
    pub fn axioms_pass(&self) -> bool {
        Property::AXIOMS.iter().all(|&p| self.passed(p))
    }
}

pub const DEFAULT_TOL: f64 = 1e-9;
pub const DEFAULT_TRIALS: u64 = 1000;

/// Sampled check of the five properties. Trial `k` draws from its own seeded
/// stream, so any witness can be regenerated from `(seed, k)`.
pub fn property_report(functional: &Functional, trials: u64, seed: u64, tol: f64) -> PropertyReport {
    let space = functional.space().clone();
    let mut verdicts: Vec<Verdict> = Property::ALL.iter().map(|&p| Verdict::new(p)).collect();
    for trial in 0..trials {
        let mut rng = trial_rng(seed, trial);
        let gamma = uniform(&mut rng, -10.0, 10.0);
        let constant = RealFunction::constant(&space, gamma).expect("finite");

        let f = random_function(&space, &mut rng);
        let raised = RealFunction::new(
            &space,
            f.values()
                .iter()
                .map(|&v| {
                    if rng.gen_bool(0.3) {
                        v
                    } else {
                        v + uniform(&mut rng, 0.0, 2.0)
                    }
                })
                .collect(),
        )
        .expect("finite");

        let h = random_function(&space, &mut rng);
        let shift = uniform(&mut rng, -10.0, 10.0);

        let (p, q) = generate_comonotone_pair(&space, &mut rng);
        let (a, b) = (random_function(&space, &mut rng), random_function(&space, &mut rng));

        let instances = [
            (Property::Normalized, vec![constant], None),
            (Property::Monotone, vec![f, raised], None),
            (Property::PlusHomogeneous, vec![h], Some(shift)),
            (Property::ComonotoneMaxitive, vec![p, q], None),
            (Property::Maxitive, vec![a, b], None),
        ];
        for (verdict, (property, inputs, constant)) in verdicts.iter_mut().zip(instances) {
            let w = Witness::measure(property, trial, functional, inputs, constant).expect("inputs live on the space");
            verdict.record(w, tol);
        }
    }
    PropertyReport {
        seed: Some(seed),
        trials,
        tol,
        verdicts,
    }
}

/// Exhaustive check over all functions with values in `{−1, −½, 0, ½, 1}` on
/// spaces of at most 3 points.
pub fn property_report_exhaustive(functional: &Functional, tol: f64) -> Result<PropertyReport> {
    let space = functional.space().clone();
    let n = space.size();
    if n > 3 {
        return Err(Error::InvalidSpace(format!(
            "exhaustive mode supports at most 3 points, got {n}"
        )));
    }
    let all: Vec<RealFunction> = (0..TIE_GRID.len().pow(n as u32))
        .map(|mut code| {
            let values = (0..n)
                .map(|_| {
                    let v = TIE_GRID[code % TIE_GRID.len()];
                    code /= TIE_GRID.len();
                    v
                })
                .collect();
            RealFunction::new(&space, values).expect("grid values")
        })
        .collect();
    let mut verdicts: Vec<Verdict> = Property::ALL.iter().map(|&p| Verdict::new(p)).collect();
    let mut counter = [0u64; 5];
    let mut record = |verdicts: &mut Vec<Verdict>, k: usize, property, inputs, constant| -> Result<()> {
        let w = Witness::measure(property, counter[k], functional, inputs, constant)?;
        counter[k] += 1;
        verdicts[k].record(w, tol);
        Ok(())
    };
    for &gamma in &TIE_GRID {
        record(
            &mut verdicts,
            0,
            Property::Normalized,
            vec![RealFunction::constant(&space, gamma)?],
            None,
        )?;
    }
    for f in &all {
        for &gamma in &TIE_GRID {
            record(
                &mut verdicts,
                2,
                Property::PlusHomogeneous,
                vec![f.clone()],
                Some(gamma),
            )?;
        }
        for g in &all {
            if f.le(g) {
                record(&mut verdicts, 1, Property::Monotone, vec![f.clone(), g.clone()], None)?;
            }
            if comonotonic(f, g)? {
                record(
                    &mut verdicts,
                    3,
                    Property::ComonotoneMaxitive,
                    vec![f.clone(), g.clone()],
                    None,
                )?;
            }
            record(&mut verdicts, 4, Property::Maxitive, vec![f.clone(), g.clone()], None)?;
        }
    }
    Ok(PropertyReport {
        seed: None,
        trials: all.len() as u64,
        tol,
        verdicts,
    })
}
