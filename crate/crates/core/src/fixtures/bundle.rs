use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::dirichlet_link::DirichletLink;
use super::forms::form_class_group;
use crate::annihilator::{
    build_corollary_element, build_theorem_element, condition_star, reduce_to_cut_field, verify_annihilation,
    AnnihilatorElement, ClassGroupData, ClassGroupFile, Condition, FieldDatum, FieldDatumFile, Outcome,
    VerificationReport,
};
use crate::centre::{u_chi, DecompositionData, Exactness};
use crate::cyclotomic::CyclotomicElement;
use crate::error::{Error, Result};
use crate::groups::{realize, Character};
use crate::lvalues::{LValueFile, LValueRecord, LValueTable, LVALUE_SCHEMA_VERSION};

pub const FIXTURE_SCHEMA_VERSION: u32 = 1;
pub const MANIFEST_SCHEMA_VERSION: u32 = 1;
pub const FIXTURE_REPORT_SCHEMA_VERSION: u32 = 1;

/// Directory overriding the fixtures compiled into the library.
pub const FIXTURE_DIR_ENV: &str = "ANNIHIL_FIXTURE_DIR";

const BUNDLED: &[(&str, &str)] = &[
    ("manifest.json", include_str!("../../data/fixtures/manifest.json")),
    ("q_sqrt_m23.json", include_str!("../../data/fixtures/q_sqrt_m23.json")),
    ("q_zeta7.json", include_str!("../../data/fixtures/q_zeta7.json")),
    ("q_zeta23.json", include_str!("../../data/fixtures/q_zeta23.json")),
    ("s3_hilbert_m23.json", include_str!("../../data/fixtures/s3_hilbert_m23.json")),
    ("q8_synthetic.json", include_str!("../../data/fixtures/q8_synthetic.json")),
    ("d4_synthetic.json", include_str!("../../data/fixtures/d4_synthetic.json")),
];

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct LValueSource {
    /// Abelian over Q: values from generalized Bernoulli numbers.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dirichlet: Option<DirichletLink>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub supplied: Vec<LValueRecordEq>,
}

/// `LValueRecord` with equality, for round-trip comparisons.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LValueRecordEq(pub LValueRecord);

impl PartialEq for LValueRecordEq {
    fn eq(&self, o: &Self) -> bool {
        serde_json::to_value(&self.0).ok() == serde_json::to_value(&o.0).ok()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Expectation {
    Pass,
    Fail,
    Error,
}

fn one() -> CyclotomicElement {
    CyclotomicElement::one(1)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CheckSpec {
    Theorem {
        chi: String,
        p: u64,
        #[serde(default = "one")]
        x: CyclotomicElement,
        expect: Expectation,
    },
    Corollary {
        p: u64,
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        extra: Vec<DecompositionData>,
        expect: Expectation,
    },
    UChi {
        chi: String,
        expect: Exactness,
    },
    Condition {
        chi: String,
        p: u64,
        expect: Condition,
    },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FixtureFile {
    pub schema_version: u32,
    pub name: String,
    #[serde(default)]
    pub description: String,
    pub field: FieldDatumFile,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub class_group: Option<ClassGroupFile>,
    /// The class group must agree with the forms oracle at this discriminant.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub forms_discriminant: Option<u64>,
    #[serde(default)]
    pub lvalues: LValueSource,
    #[serde(default)]
    pub checks: Vec<CheckSpec>,
}

#[derive(Clone, Debug)]
pub struct Fixture {
    pub name: String,
    pub description: String,
    pub field: FieldDatum,
    pub class_group: Option<ClassGroupData>,
    pub forms_discriminant: Option<u64>,
    pub lvalues: LValueSource,
    pub table: LValueTable,
    pub checks: Vec<CheckSpec>,
}

impl Fixture {
    pub fn from_file(f: &FixtureFile) -> Result<Self> {
        if f.schema_version != FIXTURE_SCHEMA_VERSION {
            return Err(Error::Schema(format!(
                "fixture schema_version {} (expected {FIXTURE_SCHEMA_VERSION})",
                f.schema_version
            )));
        }
        let field = FieldDatum::from_file(&f.field)?;
        let class_group = f.class_group.as_ref().map(ClassGroupData::from_file).transpose()?;
        if let Some(cl) = &class_group {
            if **cl.module.group() != *field.group {
                return Err(Error::Invalid(format!("{}: class group over a different group", f.name)));
            }
        }
        if let Some(d) = f.forms_discriminant {
            let oracle = form_class_group(d)?.class_group_data()?;
            let cl = class_group
                .as_ref()
                .ok_or_else(|| Error::Invalid(format!("{}: forms check without a class group", f.name)))?;
            if cl.module.invariants() != oracle.module.invariants() {
                return Err(Error::Inconsistent(format!(
                    "{}: class group {:?} disagrees with the forms oracle {:?}",
                    f.name,
                    cl.module.invariants(),
                    oracle.module.invariants()
                )));
            }
        }
        let mut table = match &f.lvalues.dirichlet {
            Some(link) => link.table(&field.group)?,
            None => LValueTable::new(&field.group),
        };
        if !f.lvalues.supplied.is_empty() {
            let file = LValueFile {
                schema_version: LVALUE_SCHEMA_VERSION,
                group: None,
                entries: f.lvalues.supplied.iter().map(|r| r.0.clone()).collect(),
            };
            table = table.merge(&LValueTable::from_file(&field.group, &file)?)?;
        }
        Ok(Fixture {
            name: f.name.clone(),
            description: f.description.clone(),
            field,
            class_group,
            forms_discriminant: f.forms_discriminant,
            lvalues: f.lvalues.clone(),
            table,
            checks: f.checks.clone(),
        })
    }

    pub fn to_file(&self) -> FixtureFile {
        FixtureFile {
            schema_version: FIXTURE_SCHEMA_VERSION,
            name: self.name.clone(),
            description: self.description.clone(),
            field: self.field.to_file(),
            class_group: self.class_group.as_ref().map(ClassGroupData::to_file),
            forms_discriminant: self.forms_discriminant,
            lvalues: self.lvalues.clone(),
            checks: self.checks.clone(),
        }
    }

    pub fn character(&self, key: &str) -> Result<Character> {
        let idx = self.table.parse_key(key)?;
        Ok(self.field.group.irreducibles()[idx].clone())
    }

    pub fn theorem(&self, chi: &str, p: u64, x: &CyclotomicElement) -> Result<AnnihilatorElement> {
        build_theorem_element(&self.character(chi)?, &self.field, p, x, &self.table, None)
    }

    pub fn corollary(&self, p: u64, extra: &[DecompositionData]) -> Result<AnnihilatorElement> {
        build_corollary_element(&self.field, extra, p, &self.table)
    }

    /// U for the character cut down to its faithful quotient.
    pub fn u_chi(&self, chi: &str) -> Result<Exactness> {
        let chi = self.character(chi)?;
        let cut = reduce_to_cut_field(&chi, &self.field)?;
        let rep = realize(&cut.phi)?;
        Ok(u_chi(&cut.phi, &cut.datum.ramified_primes, &rep)?.1)
    }

    pub fn verify(&self, a: &AnnihilatorElement, p: u64) -> Result<VerificationReport> {
        let cl = self
            .class_group
            .as_ref()
            .ok_or_else(|| Error::Precondition(format!("{} has no class group", self.name)))?;
        verify_annihilation(a, cl, p)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub check: String,
    pub expected: String,
    pub observed: String,
    pub ok: bool,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub detail: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub report: Option<VerificationReport>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixtureReport {
    pub schema_version: u32,
    pub fixture: String,
    pub checks: Vec<CheckOutcome>,
    pub ok: bool,
}

fn label<T: Serialize>(t: &T) -> String {
    match serde_json::to_value(t) {
        Ok(serde_json::Value::String(s)) => s,
        Ok(v) => v.to_string(),
        Err(e) => e.to_string(),
    }
}

fn run_check(fx: &Fixture, c: &CheckSpec) -> CheckOutcome {
    let outcome = |check: String, expected: String, observed: String, detail: String, report| CheckOutcome {
        ok: expected == observed,
        check,
        expected,
        observed,
        detail,
        report,
    };
    let verified = |a: Result<AnnihilatorElement>, p: u64| -> (String, String, Option<VerificationReport>) {
        match a.and_then(|a| fx.verify(&a, p)) {
            Ok(r) => {
                let obs = if r.outcome == Outcome::Pass { Expectation::Pass } else { Expectation::Fail };
                (label(&obs), String::new(), Some(r))
            }
            Err(e) => (label(&Expectation::Error), e.to_string(), None),
        }
    };
    match c {
        CheckSpec::Theorem { chi, p, x, expect } => {
            let (obs, detail, report) = verified(fx.theorem(chi, *p, x), *p);
            outcome(format!("theorem {chi} p={p} x={x}"), label(expect), obs, detail, report)
        }
        CheckSpec::Corollary { p, extra, expect } => {
            let (obs, detail, report) = verified(fx.corollary(*p, extra), *p);
            outcome(format!("corollary p={p}"), label(expect), obs, detail, report)
        }
        CheckSpec::UChi { chi, expect } => {
            let (obs, detail) = match fx.u_chi(chi) {
                Ok(e) => (label(&e), String::new()),
                Err(e) => ("ERROR".to_string(), e.to_string()),
            };
            outcome(format!("u_chi {chi}"), label(expect), obs, detail, None)
        }
        CheckSpec::Condition { chi, p, expect } => {
            let (obs, detail) = match fx.character(chi).and_then(|c| condition_star(&fx.field, &c, *p)) {
                Ok(v) => (label(&v.status), label(&v.basis)),
                Err(e) => ("ERROR".to_string(), e.to_string()),
            };
            outcome(format!("condition {chi} p={p}"), label(expect), obs, detail, None)
        }
    }
}

pub fn run_fixture(fx: &Fixture) -> FixtureReport {
    let checks: Vec<CheckOutcome> = fx.checks.iter().map(|c| run_check(fx, c)).collect();
    FixtureReport {
        schema_version: FIXTURE_REPORT_SCHEMA_VERSION,
        fixture: fx.name.clone(),
        ok: checks.iter().all(|c| c.ok),
        checks,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub file: String,
    pub sha256: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Manifest {
    pub schema_version: u32,
    pub fixtures: Vec<ManifestEntry>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Parse a fixture; JSON errors carry line and column.
pub fn parse_fixture(origin: &str, text: &str) -> Result<Fixture> {
    let f: FixtureFile = serde_json::from_str(text).map_err(|e| Error::Schema(format!("{origin}: {e}")))?;
    Fixture::from_file(&f).map_err(|e| e.context(origin))
}

fn load_with(read: impl Fn(&str) -> Result<String>) -> Result<Vec<Fixture>> {
    let text = read("manifest.json")?;
    let manifest: Manifest =
        serde_json::from_str(&text).map_err(|e| Error::Schema(format!("manifest.json: {e}")))?;
    if manifest.schema_version != MANIFEST_SCHEMA_VERSION {
        return Err(Error::Schema(format!("manifest schema_version {}", manifest.schema_version)));
    }
    manifest
        .fixtures
        .iter()
        .map(|m| {
            let text = read(&m.file)?;
            let digest = sha256_hex(text.as_bytes());
            if digest != m.sha256 {
                return Err(Error::Inconsistent(format!(
                    "{}: sha256 {digest} does not match the manifest ({})",
                    m.file, m.sha256
                )));
            }
            parse_fixture(&m.file, &text)
        })
        .collect()
}

pub fn load_dir(dir: &Path) -> Result<Vec<Fixture>> {
    load_with(|name| {
        let path = dir.join(name);
        std::fs::read_to_string(&path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
    })
}

pub fn load_embedded() -> Result<Vec<Fixture>> {
    load_with(|name| {
        BUNDLED
            .iter()
            .find(|(n, _)| *n == name)
            .map(|(_, t)| t.to_string())
            .ok_or_else(|| Error::Io(format!("{name} is not bundled")))
    })
}

/// The directory named by `ANNIHIL_FIXTURE_DIR`, else the bundled set.
pub fn fixture_dir() -> Option<PathBuf> {
    std::env::var_os(FIXTURE_DIR_ENV).map(PathBuf::from)
}

pub fn load_fixtures() -> Result<Vec<Fixture>> {
    match fixture_dir() {
        Some(d) => load_dir(&d),
        None => load_embedded(),
    }
}
