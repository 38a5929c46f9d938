use std::fmt::Write as _;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use super::element::AnnihilatorElement;
use crate::arith::int::{lcm_u64, val_u64};
use crate::error::{Error, Result};
use crate::groups::GroupRef;
use crate::twistcohom::{GModule, GModuleFile};

pub const CLASS_GROUP_SCHEMA_VERSION: u32 = 1;
pub const REPORT_SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Source {
    FormsOracle,
    Ingested,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ClassGroupFile {
    pub schema_version: u32,
    pub name: String,
    pub group: GroupRef,
    pub source: Source,
    #[serde(default)]
    pub labels: Vec<String>,
    pub module: GModuleFile,
}

/// A class group with its Galois action, one label per module generator.
#[derive(Clone, Debug, PartialEq)]
pub struct ClassGroupData {
    pub name: String,
    pub source: Source,
    pub labels: Vec<String>,
    pub module: GModule,
}

impl ClassGroupData {
    pub fn new(name: &str, source: Source, module: GModule, labels: Vec<String>) -> Result<Self> {
        let labels = if labels.is_empty() {
            (0..module.rank()).map(|i| format!("g{i}")).collect()
        } else {
            labels
        };
        if labels.len() != module.rank() {
            return Err(Error::Invalid(format!(
                "{} labels for {} generators",
                labels.len(),
                module.rank()
            )));
        }
        Ok(ClassGroupData {
            name: name.to_string(),
            source,
            labels,
            module,
        })
    }

    pub fn from_file(f: &ClassGroupFile) -> Result<Self> {
        if f.schema_version != CLASS_GROUP_SCHEMA_VERSION {
            return Err(Error::Schema(format!(
                "class group schema_version {} (expected {CLASS_GROUP_SCHEMA_VERSION})",
                f.schema_version
            )));
        }
        let g = f.group.resolve()?;
        Self::new(&f.name, f.source, GModule::from_file(&g, &f.module)?, f.labels.clone())
    }

    pub fn to_file(&self) -> ClassGroupFile {
        ClassGroupFile {
            schema_version: CLASS_GROUP_SCHEMA_VERSION,
            name: self.name.clone(),
            group: GroupRef::for_group(self.module.group()),
            source: self.source,
            labels: self.labels.clone(),
            module: self.module.to_file(),
        }
    }

    pub fn order(&self) -> u128 {
        self.module.order()
    }

    /// Generators of the p-primary part: (d_i / p^{v_p(d_i)}) e_i.
    pub fn p_primary_generators(&self, p: u64) -> Vec<(String, Vec<i64>)> {
        let inv = self.module.invariants();
        (0..inv.len())
            .filter(|&i| val_u64(inv[i], p) > 0)
            .map(|i| {
                let q = p.pow(val_u64(inv[i], p));
                let mut v = vec![0i64; inv.len()];
                v[i] = (inv[i] / q) as i64;
                (self.labels[i].clone(), v)
            })
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Outcome {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorImage {
    pub label: String,
    pub generator: Vec<i64>,
    pub image: Vec<i64>,
    pub vanishes: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub schema_version: u32,
    pub class_group: String,
    pub p: u64,
    /// The element is multiplied by this p-adic unit before it is applied.
    pub denominator: String,
    pub images: Vec<GeneratorImage>,
    pub outcome: Outcome,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<GeneratorImage>,
    /// Whether the element carries the annihilation claim.
    pub claim: bool,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.outcome == Outcome::Pass
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let outcome = if self.passed() { "PASS" } else { "FAIL" };
        let _ = writeln!(s, "class group: {}", self.class_group);
        let _ = writeln!(s, "p = {}, denominator = {}", self.p, self.denominator);
        if self.images.is_empty() {
            let _ = writeln!(s, "  (p-primary part is trivial)");
        }
        for im in &self.images {
            let _ = writeln!(
                s,
                "  {:<12} {:?} -> {:?} {}",
                im.label,
                im.generator,
                im.image,
                if im.vanishes { "ok" } else { "NONZERO" }
            );
        }
        if let Some(w) = &self.witness {
            let _ = writeln!(s, "witness: {} maps to {:?}", w.label, w.image);
        }
        let _ = writeln!(s, "{outcome}");
        s
    }
}

/// Apply den * a to every generator of the p-primary part of cl, den the
/// least common denominator of a (which must be prime to p).
pub fn verify_annihilation(a: &AnnihilatorElement, cl: &ClassGroupData, p: u64) -> Result<VerificationReport> {
    let g = a.element.group();
    if **g != **cl.module.group() {
        return Err(Error::Invalid("element and class group belong to different groups".into()));
    }
    let coeffs = a.coefficients();
    let den = coeffs.iter().fold(BigInt::from(1), |acc, q| acc.lcm(q.denom()));
    if den.is_multiple_of(&BigInt::from(p)) {
        return Err(Error::Precondition(format!("element is not {p}-integral (denominator {den})")));
    }
    let inv = cl.module.invariants();
    let expo = inv.iter().fold(1u64, |acc, &d| lcm_u64(acc, d));
    let scaled: Vec<i128> = coeffs
        .iter()
        .map(|q| {
            let c = (q.numer() * (&den / q.denom())).mod_floor(&BigInt::from(expo));
            c.to_i128().expect("reduced below the exponent")
        })
        .collect();
    let images: Vec<GeneratorImage> = cl
        .p_primary_generators(p)
        .into_iter()
        .map(|(label, v)| {
            let mut acc = vec![0i128; inv.len()];
            for (x, &c) in scaled.iter().enumerate() {
                if c == 0 {
                    continue;
                }
                for (i, y) in cl.module.apply(x, &v).into_iter().enumerate() {
                    acc[i] = (acc[i] + c * y as i128).rem_euclid(inv[i] as i128);
                }
            }
            let image: Vec<i64> = acc.into_iter().map(|t| t as i64).collect();
            GeneratorImage {
                vanishes: image.iter().all(|&t| t == 0),
                label,
                generator: v,
                image,
            }
        })
        .collect();
    let witness = images.iter().find(|im| !im.vanishes).cloned();
    Ok(VerificationReport {
        schema_version: REPORT_SCHEMA_VERSION,
        class_group: cl.name.clone(),
        p,
        denominator: den.to_string(),
        outcome: if witness.is_none() { Outcome::Pass } else { Outcome::Fail },
        images,
        witness,
        claim: a.provenance.claim,
    })
}
