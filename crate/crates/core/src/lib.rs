//! Short bases of Stickelberger ideals of cyclotomic fields, relative class
//! numbers by a determinant formula and by Dirichlet characters, and
//! Jacobi sums generating the ideals attached to short basis elements.

pub mod class_number;
pub mod conductor;
pub mod cyclotomic;
pub mod dirichlet;
pub mod error;
pub mod finite_field;
pub mod group_ring;
pub mod jacobi;
pub mod linalg;
pub mod padic;
pub mod stickelberger;

pub use class_number::{h_minus_det, upper_bound, ClassNumberReport, ExactBound};
pub use conductor::{Conductor, PrimePower};
pub use cyclotomic::CyclotomicInteger;
pub use dirichlet::h_minus_analytic;
pub use error::{Error, Result};
pub use finite_field::{PrimeAbove, ResidueFieldData};
pub use group_ring::{norm_element, GroupRingElement, ShortElement, UnitIndex};
pub use jacobi::{
    generator_for_alpha, jacobi_generators, jacobi_sum, verify_generator, GeneratorCheck,
    GeneratorSet, SumMethod,
};
pub use linalg::{IntMatrix, RatMatrix};
pub use padic::LAdicJacobi;
pub use stickelberger::{
    alpha, basis, expand_in_basis, omega, set_m, set_mprime, set_x, short_basis, theta, BasisKind,
    IndexSet, NamedBasis,
};
