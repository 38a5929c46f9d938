//! Annihilators of class groups from L-values at s = 0: the per-character
//! Theorem element, the Corollary element, condition (*), and verification
//! against class groups with Galois action.

mod datum;
mod element;
mod verify;

pub use datum::{
    condition_star, reduce_to_cut_field, Basis, Condition, ConditionVerdict, CutField, FieldDatum, FieldDatumFile, PInfo,
    Splitting, Truth, FIELD_SCHEMA_VERSION,
};
pub use element::{
    build_corollary_element, build_theorem_element, truncated_table, AdmissibleIdeal, AnnihilatorElement, Construction,
    ElementFile, Provenance, ELEMENT_SCHEMA_VERSION,
};
pub use verify::{
    verify_annihilation, ClassGroupData, ClassGroupFile, GeneratorImage, Outcome, Source, VerificationReport,
    CLASS_GROUP_SCHEMA_VERSION, REPORT_SCHEMA_VERSION,
};

#[cfg(test)]
mod tests;
