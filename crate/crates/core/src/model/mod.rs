//! Problem data, characteristic times, boundary-matrix classes and the
//! reductions between exact and null controllability.

mod classes;
mod matrix;
mod profile;
mod reduction;
mod system;
mod times;

pub use classes::{
    class_b_report, class_be_report, in_class_b, in_class_be, trailing_minor_invertible,
    ClassReport,
};
pub use matrix::{eliminate_without_pivoting, Elimination, Matrix, RowOperation};
pub use profile::{Profile, ProfileMatrix};
pub use reduction::{
    augment_system, inverse_from_elimination, reverse_indices, time_reverse_reduction,
    TimeReversal,
};
pub use system::{
    validate, validate_with, BoundaryMatrix, Coupling, Diagnostic, DiagnosticKind,
    HyperbolicSystem, SpeedProfile, Tolerances,
};
pub use times::{t_opt, tau, TimeReport};
