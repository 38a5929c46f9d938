//! Binary quadratic forms as an independent class-group oracle, quadratic
//! fields as field data, and the bundled fixture set.

mod bundle;
mod dirichlet_link;
pub mod forms;
mod quadratic;

pub use bundle::{
    load_dir, load_embedded, load_fixtures, parse_fixture, run_fixture, sha256_hex, CheckOutcome, CheckSpec,
    Expectation, Fixture, FixtureFile, FixtureReport, LValueRecordEq, LValueSource, Manifest, ManifestEntry,
    FIXTURE_DIR_ENV, FIXTURE_REPORT_SCHEMA_VERSION, FIXTURE_SCHEMA_VERSION, MANIFEST_SCHEMA_VERSION,
};
pub use dirichlet_link::DirichletLink;
pub use forms::{form_class_group, reduced_forms, FormClass, FormClassGroup};
pub use quadratic::{
    class_number_law, quadratic_field_datum, quadratic_link, quadratic_sweep, quadratic_table, sign_character, LawCase,
    SweepCase, SweepReport, SWEEP_SCHEMA_VERSION,
};
