//! Limit cycles of quadratic near-integrable reversible systems.
//!
//! The crate covers center classification of the canonical quadratic
//! system, the Hamiltonian structure of the reversible family, closed-form
//! expansion coefficients of the Melnikov function at both centers, direct
//! quadrature of the Melnikov function over level ovals with zero finding,
//! and ODE-level confirmation of the predicted large limit cycles.

pub mod cases;
pub mod classify;
pub mod error;
pub mod hopf;
pub mod integrable;
pub mod melnikov;
pub mod model;
pub mod odesim;
pub mod quadrature;
pub mod roots;

pub use cases::{all_cases, case, CaseSpec};
pub use classify::{
    classify_canonical, classify_complex, complex_to_canonical, singularity_layout,
    verify_integrating_factor, CenterClass, CenterLabel, FactorSystem, SingularityLayout,
};
pub use error::{QlcError, Result};
pub use hopf::{distribution, mu_coefficients, DistributionOutcome, MuCoefficients};
pub use integrable::{critical_levels, first_integral, turning_points, y_plus};
pub use melnikov::{abelian_integrals, find_zero, melnikov, scan, AbelianTriple, ZeroBracket};
pub use model::{
    validate_reversible, CanonicalQuadratic, ComplexFormParams, CriticalLevels, LevelSet,
    Perturbation, Region, ReversibleParams,
};
pub use odesim::{integrate, locate_cycle, return_map, Center, CycleReport, Trajectory};
