//! Capacities on finite spaces, the max-plus integral, and the correspondence
//! between capacities and normalized, monotone, comonotonically maxitive,
//! plus-homogeneous functionals.
//!
//! ```
//! use comax::{maxplus_integral, Capacity, FiniteSpace, RealFunction};
//!
//! let space = FiniteSpace::new(2).unwrap();
//! let c = Capacity::new(&space, vec![0.0, 0.5, 0.25, 1.0]).unwrap();
//! let phi = RealFunction::new(&space, vec![0.0, -1.0]).unwrap();
//! assert!((maxplus_integral(&c, &phi).unwrap() - 0.5f64.ln()).abs() < 1e-12);
//! ```

pub mod capacity;
pub mod category;
pub mod cli;
pub mod error;
pub mod functional;
pub mod integral;
pub mod representation;
pub mod rng;
pub mod space;

pub use capacity::{Capacity, PossibilityDensity, SpaceMap};
pub use category::{
    functional_pushforward, monad_law_harness, mu_bruteforce_oracle, mu_possibility, naturality_check,
    FiniteSupportOuter, MonadLaw, MonadLawReport, OuterSupport,
};
pub use error::{Error, Result};
pub use functional::{
    generate_comonotone_pair, property_report, property_report_exhaustive, refine_comonotone, upsilon_member,
    Functional, FunctionalKind, FunctionalSpec, Property, PropertyReport, DEFAULT_TOL, DEFAULT_TRIALS,
};
pub use integral::{choquet_integral, maxplus_integral, maxplus_integral_grid_oracle, sugeno_integral};
pub use representation::{integral_functional, maxitivity_witness, reconstruct_capacity, roundtrip_check};
pub use space::{comonotonic, distinct_values, level_set, ExtendedReal, FiniteSpace, RealFunction, Subset};
