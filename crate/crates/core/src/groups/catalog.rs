//! Bundled groups and the JSON group file format.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use super::group::FiniteGroup;
use crate::error::{Error, Result};

const CATALOG: &str = include_str!("../../data/catalog.json");

/// One group: either a Cayley table or permutation generators.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GroupSpec {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cayley: Option<Vec<Vec<usize>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub perm_generators: Option<Vec<Vec<usize>>>,
}

#[derive(Deserialize)]
struct CatalogFile {
    schema_version: u32,
    groups: Vec<GroupSpec>,
}

impl GroupSpec {
    pub fn build(&self) -> Result<Arc<FiniteGroup>> {
        let g = match (&self.cayley, &self.perm_generators) {
            (Some(t), None) => FiniteGroup::from_cayley(&self.name, t)?,
            (None, Some(p)) => FiniteGroup::from_permutations(&self.name, p)?,
            _ => {
                return Err(Error::Schema(format!(
                    "group {}: exactly one of cayley or perm_generators is required",
                    self.name
                )))
            }
        };
        if let Some(n) = self.order {
            if n != g.order() {
                return Err(Error::Schema(format!(
                    "group {}: declared order {n} but the data give {}",
                    self.name,
                    g.order()
                )));
            }
        }
        Ok(g)
    }

    pub fn from_group(g: &FiniteGroup) -> Self {
        GroupSpec {
            name: g.name().to_string(),
            order: Some(g.order()),
            cayley: Some(g.cayley()),
            perm_generators: None,
        }
    }
}

fn specs() -> &'static [GroupSpec] {
    static SPECS: OnceLock<Vec<GroupSpec>> = OnceLock::new();
    SPECS.get_or_init(|| {
        let f: CatalogFile = serde_json::from_str(CATALOG).expect("bundled catalog parses");
        assert_eq!(f.schema_version, 1);
        f.groups
    })
}

/// Names of the bundled groups, in catalog order.
pub fn catalog_names() -> Vec<&'static str> {
    specs().iter().map(|s| s.name.as_str()).collect()
}

fn canonical(name: &str) -> &str {
    match name {
        "S3" => "D3",
        "V4" | "K4" => "C2xC2",
        "S3xC2" | "D6" => "D6",
        "C1" | "1" | "trivial" => "C1",
        _ => name,
    }
}

/// A bundled group by name (case-sensitive; a few aliases such as S3 are
/// accepted). Groups are built once and shared.
pub fn catalog_group(name: &str) -> Result<Arc<FiniteGroup>> {
    static CACHE: OnceLock<Mutex<HashMap<String, Arc<FiniteGroup>>>> = OnceLock::new();
    let key = canonical(name);
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(g) = cache.lock().unwrap().get(key) {
        return Ok(g.clone());
    }
    let spec = specs()
        .iter()
        .find(|s| s.name == key)
        .ok_or_else(|| Error::Invalid(format!("unknown group {name}")))?;
    let g = spec.build()?;
    cache.lock().unwrap().insert(key.to_string(), g.clone());
    Ok(g)
}

/// Parse a group from JSON text: a single group object.
pub fn group_from_json(text: &str) -> Result<Arc<FiniteGroup>> {
    let spec: GroupSpec = serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))?;
    spec.build()
}

/// A group in a data file: a catalog name or an inline specification.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GroupRef {
    Name(String),
    Spec(GroupSpec),
}

impl GroupRef {
    pub fn resolve(&self) -> Result<Arc<FiniteGroup>> {
        match self {
            GroupRef::Name(n) => catalog_group(n),
            GroupRef::Spec(s) => s.build(),
        }
    }

    /// The catalog name when it denotes this exact group, else the full table.
    pub fn for_group(g: &FiniteGroup) -> Self {
        match catalog_group(g.name()) {
            Ok(c) if *c == *g => GroupRef::Name(g.name().to_string()),
            _ => GroupRef::Spec(GroupSpec::from_group(g)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_loads() {
        let names = catalog_names();
        assert!(names.len() > 100);
        let s3 = catalog_group("S3").unwrap();
        assert_eq!(s3.order(), 6);
        assert!(!s3.is_abelian());
        assert_eq!(catalog_group("SL(2,3)").unwrap().order(), 24);
        assert!(catalog_group("nope").is_err());
        let g = group_from_json(r#"{"name":"C3","perm_generators":[[1,2,0]]}"#).unwrap();
        assert_eq!(g.order(), 3);
        assert!(group_from_json(r#"{"name":"bad","order":4,"perm_generators":[[1,2,0]]}"#).is_err());
    }
}
