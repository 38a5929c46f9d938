//! Finite groups given by Cayley tables, their character tables and
//! monomial realizations.

mod catalog;
mod character;
mod chartable;
mod group;
mod realization;

pub use catalog::{catalog_group, catalog_names, group_from_json, GroupRef, GroupSpec};
pub use character::{root_exponent, root_order, Character};
pub use group::{FiniteGroup, Quotient, Subgroup, MAX_ORDER};
pub use realization::{
    character_field, monomial_realization, realization_galois, realize, CharacterField, MatrixRep, MonomialRep,
    RealizationFile,
};
