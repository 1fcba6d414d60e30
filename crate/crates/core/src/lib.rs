//! Means of two positive numbers, the complete elliptic integral of the first
//! kind, and machinery to check the sharp bound
//! `L(a, b) < M(a, b) < (pi/2) L(a, b)` between the logarithmic mean `L` and
//! the arithmetic-geometric mean `M`.
//!
//! Floating-point routines live in [`means`] and [`elliptic`]; everything in
//! [`coefficients`] is exact rational arithmetic. [`verify`] ties the two
//! together into reproducible pass/fail reports.

pub mod coefficients;
pub mod elliptic;
pub mod means;
pub mod quadrature;
pub mod rational;
pub mod verify;

pub use coefficients::{build_table, CoefficientError, CoefficientTable, Column};
pub use elliptic::{EllipticError, EllipticResult, Method, Modulus};
pub use means::{
    agm, agm_mean, gen_log_mean, identric_mean, log_mean, AgmTrace, MeanError, MeanInput,
};
pub use rational::{ExactRational, ParseRationalError};
pub use verify::{run_all, Profile, RatioScan, Status, VerificationReport, VerifyError, Witness};
