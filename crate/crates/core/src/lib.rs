//! Exact shuffle-algebra model of the preprojective cohomological Hall
//! algebra of a quiver: sparse multivariate arithmetic over big rationals,
//! the cohomological and K-theoretic shuffle products with their wheel
//! conditions, expression of elements in single-variable generators, and the
//! K-theory-to-cohomology degeneration pipeline.

pub mod census;
pub mod degeneration;
pub mod element;
pub mod error;
pub mod kappa;
pub mod kernel;
pub mod mpoly;
pub mod product;
pub mod quiver;
pub mod ratfn;
pub mod serialize;
pub mod solver;
pub mod universe;
pub mod wheel;

pub use census::graded_dimension_census;
pub use degeneration::{degenerate, degenerate_preimage, shift_element, verify_theorem, VerifyPath};
pub use element::ShuffleElement;
pub use error::{Error, Result};
pub use kappa::{kappa, kappa_tilde};
pub use kernel::{zeta, zeta_tilde};
pub use mpoly::{Coeff, Expo, MPoly};
pub use product::{shuffle_mul, sym};
pub use solver::{
    express_in_generators, k_express_in_generators, KernelPreimage, LaurentPreimage, SolverLimits,
};
pub use wheel::{k_wheel_check, wheel_check, wheel_violations, WheelViolation};
pub use quiver::{make_universe, DimVector, Quiver};
pub use ratfn::RatFn;
pub use universe::{Flavor, VarInfo, VarRole, VarUniverse};
