use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::arith::int::units_mod;
use crate::cyclotomic::{parse_rational, CyclotomicElement};
use crate::error::{Error, Result};
use crate::groups::{Character, FiniteGroup, Quotient};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Provider {
    Bernoulli,
    Supplied,
    Formalism,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LValueEntry {
    pub value: CyclotomicElement,
    pub provider: Provider,
}

/// L(0, chi) (or L_S(0, chi)) per irreducible character, keyed by table index.
#[derive(Clone, Debug)]
pub struct LValueTable {
    group: Arc<FiniteGroup>,
    entries: BTreeMap<usize, LValueEntry>,
}

/// Relations of the Artin formalism used to fill a table.
pub enum Relation<'a> {
    /// L(0, chi^a) = L(0, chi)^a.
    Galois,
    /// L(0, Infl phi) = L(0, phi) for characters of a quotient.
    Inflation { quotient: &'a Quotient, table: &'a LValueTable },
    /// L(0, sum n_chi chi) = prod L(0, chi)^{n_chi} = value.
    Additive { multiplicities: Vec<i64>, value: CyclotomicElement },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LValueFile {
    pub schema_version: u32,
    #[serde(default)]
    pub group: Option<String>,
    pub entries: Vec<LValueRecord>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LValueRecord {
    pub character_key: String,
    pub conductor: u64,
    pub value_coeffs: Vec<String>,
    pub provider: Provider,
}

pub const LVALUE_SCHEMA_VERSION: u32 = 1;

impl LValueTable {
    pub fn new(group: &Arc<FiniteGroup>) -> Self {
        LValueTable {
            group: group.clone(),
            entries: BTreeMap::new(),
        }
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn key(idx: usize) -> String {
        format!("chi{idx}")
    }

    pub fn parse_key(&self, key: &str) -> Result<usize> {
        let idx: usize = key
            .strip_prefix("chi")
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::Schema(format!("bad character key '{key}'")))?;
        if idx >= self.group.num_classes() {
            return Err(Error::Schema(format!("character key '{key}' out of range")));
        }
        Ok(idx)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn is_complete(&self) -> bool {
        self.entries.len() == self.group.num_classes()
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, &LValueEntry)> {
        self.entries.iter().map(|(&k, v)| (k, v))
    }

    pub fn get(&self, idx: usize) -> Option<&CyclotomicElement> {
        self.entries.get(&idx).map(|e| &e.value)
    }

    pub fn provider(&self, idx: usize) -> Option<Provider> {
        self.entries.get(&idx).map(|e| e.provider)
    }

    pub fn require(&self, idx: usize) -> Result<&CyclotomicElement> {
        self.get(idx).ok_or_else(|| Error::MissingValue(Self::key(idx)))
    }

    /// Value at an irreducible character of this group.
    pub fn require_character(&self, chi: &Character) -> Result<&CyclotomicElement> {
        let idx = chi
            .table_index()
            .ok_or_else(|| Error::Invalid("character is not irreducible".into()))?;
        self.require(idx)
    }

    /// Insert a value; returns whether it was new. A different existing value
    /// is an inconsistency.
    pub fn insert(&mut self, idx: usize, value: CyclotomicElement, provider: Provider) -> Result<bool> {
        if idx >= self.group.num_classes() {
            return Err(Error::Invalid(format!("no irreducible character {idx}")));
        }
        let value = value.simplify();
        match self.entries.get(&idx) {
            Some(old) if old.value == value => Ok(false),
            Some(old) => Err(Error::Inconsistent(format!(
                "{}: {} versus {}",
                Self::key(idx),
                old.value,
                value
            ))),
            None => {
                self.entries.insert(idx, LValueEntry { value, provider });
                Ok(true)
            }
        }
    }

    /// Union of two tables; conflicting values are an error.
    pub fn merge(&self, o: &Self) -> Result<Self> {
        if *self.group != *o.group {
            return Err(Error::Invalid("tables for different groups".into()));
        }
        let mut out = self.clone();
        for (&k, e) in &o.entries {
            out.insert(k, e.value.clone(), e.provider)?;
        }
        Ok(out)
    }

    /// Fill entries forced by a relation; returns how many were added.
    pub fn apply(&mut self, rel: &Relation) -> Result<usize> {
        match rel {
            Relation::Galois => self.apply_galois(),
            Relation::Inflation { quotient, table } => self.apply_inflation(quotient, table),
            Relation::Additive { multiplicities, value } => self.apply_additive(multiplicities, value),
        }
    }

    fn apply_galois(&mut self) -> Result<usize> {
        let irr = self.group.irreducibles();
        let e = self.group.exponent();
        let mut added = 0;
        let current: Vec<(usize, CyclotomicElement)> =
            self.entries.iter().map(|(&k, v)| (k, v.value.clone())).collect();
        for (i, v) in current {
            let v = v.simplify();
            if e % v.conductor() != 0 {
                return Err(Error::Inconsistent(format!(
                    "{} lies outside the character field",
                    Self::key(i)
                )));
            }
            let v = v.embed(e);
            for a in units_mod(e) {
                let j = irr[i].galois(a as i64).table_index().expect("conjugate is irreducible");
                if self.insert(j, v.galois(a as i64), Provider::Formalism)? {
                    added += 1;
                }
            }
        }
        Ok(added)
    }

    fn apply_inflation(&mut self, q: &Quotient, qt: &LValueTable) -> Result<usize> {
        if *q.parent != *self.group || *q.group != *qt.group {
            return Err(Error::Invalid("quotient does not match the tables".into()));
        }
        let mut added = 0;
        let qirr = q.group.irreducibles();
        for (k, e) in &qt.entries {
            let chi = Character::inflate(q, &qirr[*k])?;
            let idx = chi.table_index().expect("inflation of an irreducible is irreducible");
            if self.insert(idx, e.value.clone(), Provider::Formalism)? {
                added += 1;
            }
        }
        Ok(added)
    }

    fn apply_additive(&mut self, mults: &[i64], value: &CyclotomicElement) -> Result<usize> {
        if mults.len() != self.group.num_classes() {
            return Err(Error::Invalid("one multiplicity per irreducible character required".into()));
        }
        let missing: Vec<usize> = (0..mults.len())
            .filter(|&i| mults[i] != 0 && !self.entries.contains_key(&i))
            .collect();
        let mut known = CyclotomicElement::one(1);
        for (i, &n) in mults.iter().enumerate() {
            if n != 0 && !missing.contains(&i) {
                known = known * self.entries[&i].value.pow(n)?;
            }
        }
        match missing.as_slice() {
            [] => {
                if known != *value {
                    return Err(Error::Inconsistent(format!(
                        "product of entries is {known}, relation says {value}"
                    )));
                }
                Ok(0)
            }
            [i] if mults[*i].abs() == 1 && !known.is_zero() => {
                let v = value.div(&known)?.pow(mults[*i])?;
                self.insert(*i, v, Provider::Formalism)?;
                Ok(1)
            }
            _ => Ok(0),
        }
    }

    /// entry(chi^a) = entry(chi)^a whenever both are present.
    pub fn is_galois_equivariant(&self) -> bool {
        let mut t = self.clone();
        t.apply_galois().is_ok()
    }

    pub fn to_file(&self) -> LValueFile {
        LValueFile {
            schema_version: LVALUE_SCHEMA_VERSION,
            group: Some(self.group.name().to_string()),
            entries: self
                .entries
                .iter()
                .map(|(&k, e)| LValueRecord {
                    character_key: Self::key(k),
                    conductor: e.value.conductor(),
                    value_coeffs: e.value.coeffs().iter().map(|q| q.to_string()).collect(),
                    provider: e.provider,
                })
                .collect(),
        }
    }

    pub fn from_file(group: &Arc<FiniteGroup>, f: &LValueFile) -> Result<Self> {
        if f.schema_version != LVALUE_SCHEMA_VERSION {
            return Err(Error::Schema(format!(
                "L-value table schema_version {} (expected {LVALUE_SCHEMA_VERSION})",
                f.schema_version
            )));
        }
        let mut t = Self::new(group);
        for r in &f.entries {
            let idx = t.parse_key(&r.character_key)?;
            let coeffs = r
                .value_coeffs
                .iter()
                .map(|s| parse_rational(s))
                .collect::<Result<Vec<_>>>()?;
            let v = element_from_coeffs(r.conductor, &coeffs)?;
            t.insert(idx, v, r.provider)?;
        }
        Ok(t)
    }
}

fn element_from_coeffs(n: u64, coeffs: &[num_rational::BigRational]) -> Result<CyclotomicElement> {
    if n == 0 {
        return Err(Error::Schema("conductor must be positive".into()));
    }
    let deg = crate::cyclotomic::tables(n).degree;
    if coeffs.len() != deg {
        return Err(Error::Schema(format!("Q(zeta_{n}) needs {deg} coefficients, got {}", coeffs.len())));
    }
    let mut acc = CyclotomicElement::zero(n);
    for (i, c) in coeffs.iter().enumerate() {
        acc = acc + CyclotomicElement::zeta_pow(n, i as i64).scale(c);
    }
    Ok(acc)
}
