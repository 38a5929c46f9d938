//! Exact arithmetic in Q(zeta_n) and its ring of integers Z[zeta_n].

mod element;
mod fitting;
mod ideal;
mod linalg;

pub use element::{parse_rational, tables, CyclotomicElement, Tables};
pub use fitting::{element_matrix, prime_lengths, OModulePresentation, ZetaModule};
pub use ideal::{
    different_generator, discriminant, inverse_different, primes_above, CycloIdeal, IdealRepr,
    PrimeIdeal,
};
pub use linalg::{cmat_add, cmat_det, cmat_identity, cmat_mul, cmat_scale, CMat};
