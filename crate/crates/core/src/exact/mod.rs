//! Exact big-rational arithmetic, the quadratic field Q(√d), and the
//! ruler-and-compass constructibility decision for the intersection
//! quartic.

pub mod constructibility;
pub mod qf;
pub mod rat;
pub mod ratpoly;

pub use constructibility::{
    constructibility_from_parameters, quartic_constructibility, reduced_quartic_alpha0,
    resolvent_system, surd_route_constructibility, ConstructibilityReport, ParamConstructibility,
    ResolventSystem, Verdict, Witness,
};
pub use qf::{qf_root_search, BranchRecord, QFPoly, QfSearchWitness, QuadFieldElem};
pub use rat::{parse_exact, rat, rational_sqrt, rint, Rat};
pub use ratpoly::{rational_root_test, RatPoly};
