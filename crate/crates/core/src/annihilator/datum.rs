use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::arith::int::{gcd_u64, is_prime};
use crate::centre::DecompositionData;
use crate::error::{Error, Result};
use crate::groups::{Character, FiniteGroup, GroupRef, Quotient};
use crate::twistcohom::{GModule, GModuleFile};

pub const FIELD_SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Truth {
    True,
    False,
    Unknown,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Splitting {
    Split,
    Nonsplit,
    Unknown,
}

/// Metadata at a rational prime p, describing the top field of the datum.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PInfo {
    /// Checked against the ramification data when present.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ramified_in_k_over_q: Option<bool>,
    /// One entry per prime of K^+ above p: does it split in K/K^+?
    #[serde(default)]
    pub splitting: Vec<Splitting>,
    /// Is K^cl contained in (K^cl)^+(zeta_p)?
    #[serde(default = "unknown")]
    pub zeta_p_condition: Truth,
}

fn unknown() -> Truth {
    Truth::Unknown
}

/// JSON form of a field datum.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FieldDatumFile {
    pub schema_version: u32,
    pub name: String,
    pub group: GroupRef,
    pub base_is_rationals: bool,
    pub k_totally_real: bool,
    /// Complex conjugation when the top field is CM; checked against `places`.
    #[serde(default)]
    pub cm_j: Option<usize>,
    /// Decomposition group (order 1 or 2) at one place above each
    /// archimedean place of k.
    pub places: Vec<Vec<usize>>,
    /// Every prime of k ramified in the top field.
    pub ramified_primes: Vec<DecompositionData>,
    /// Rational primes ramified in k/Q.
    #[serde(default)]
    pub base_ramified_primes: Vec<u64>,
    pub mu: GModuleFile,
    pub mu_order: u64,
    #[serde(default)]
    pub p_info: BTreeMap<u64, PInfo>,
}

/// A Galois extension F/k with group G: the metadata the annihilator
/// constructions consume. Field-theoretic facts are inputs, not computed.
#[derive(Clone, Debug)]
pub struct FieldDatum {
    pub name: String,
    pub group: Arc<FiniteGroup>,
    pub base_is_rationals: bool,
    pub k_totally_real: bool,
    pub cm_j: Option<usize>,
    pub places: Vec<Vec<usize>>,
    pub ramified_primes: Vec<DecompositionData>,
    pub base_ramified_primes: Vec<u64>,
    pub mu: GModule,
    pub p_info: BTreeMap<u64, PInfo>,
}

impl FieldDatum {
    pub fn from_file(f: &FieldDatumFile) -> Result<Self> {
        if f.schema_version != FIELD_SCHEMA_VERSION {
            return Err(Error::Schema(format!(
                "field datum schema_version {} (expected {FIELD_SCHEMA_VERSION})",
                f.schema_version
            )));
        }
        let group = f.group.resolve()?;
        let mu = GModule::from_file(&group, &f.mu)?;
        if mu.order() != u128::from(f.mu_order) {
            return Err(Error::Invalid(format!(
                "mu_order {} does not match the module order {}",
                f.mu_order,
                mu.order()
            )));
        }
        let d = FieldDatum {
            name: f.name.clone(),
            group,
            base_is_rationals: f.base_is_rationals,
            k_totally_real: f.k_totally_real,
            cm_j: f.cm_j,
            places: f.places.iter().map(|v| sorted(v.clone())).collect(),
            ramified_primes: f.ramified_primes.clone(),
            base_ramified_primes: f.base_ramified_primes.clone(),
            mu,
            p_info: f.p_info.clone(),
        };
        d.validate()?;
        Ok(d)
    }

    pub fn to_file(&self) -> FieldDatumFile {
        FieldDatumFile {
            schema_version: FIELD_SCHEMA_VERSION,
            name: self.name.clone(),
            group: GroupRef::for_group(&self.group),
            base_is_rationals: self.base_is_rationals,
            k_totally_real: self.k_totally_real,
            cm_j: self.cm_j,
            places: self.places.clone(),
            ramified_primes: self.ramified_primes.clone(),
            base_ramified_primes: self.base_ramified_primes.clone(),
            mu: self.mu.to_file(),
            mu_order: self.mu.order() as u64,
            p_info: self.p_info.clone(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let g = &self.group;
        if *self.mu.group() != *g {
            return Err(Error::Invalid("mu is a module for a different group".into()));
        }
        if self.mu.rank() != 1 {
            return Err(Error::Invalid("mu must be given as a single cyclic factor".into()));
        }
        if self.base_is_rationals && (!self.k_totally_real || self.places.len() != 1 || !self.base_ramified_primes.is_empty()) {
            return Err(Error::Invalid("k = Q has one real place and no ramified primes".into()));
        }
        for gv in &self.places {
            if gv.is_empty() || gv.len() > 2 || !g.is_subgroup(gv) {
                return Err(Error::Invalid(format!("place with decomposition group {gv:?}: order must be 1 or 2")));
            }
        }
        for d in &self.ramified_primes {
            d.validate(g)?;
        }
        if self.k_totally_real {
            let derived = self.derived_cm();
            if derived != self.cm_j {
                return Err(Error::Inconsistent(format!(
                    "{}: cm_j {:?} disagrees with the archimedean data ({:?})",
                    self.name, self.cm_j, derived
                )));
            }
        } else if let Some(j) = self.cm_j {
            if !g.central_involutions().contains(&j) {
                return Err(Error::Invalid(format!("cm_j = {j} is not a central involution")));
            }
        }
        for (&p, info) in &self.p_info {
            if !is_prime(p) {
                return Err(Error::Invalid(format!("p_info key {p} is not prime")));
            }
            if let Some(flag) = info.ramified_in_k_over_q {
                if flag != self.ramified_over_q(p) {
                    return Err(Error::Inconsistent(format!(
                        "{}: p_info says p = {p} is {}ramified, the decomposition data disagree",
                        self.name,
                        if flag { "" } else { "un" }
                    )));
                }
            }
        }
        Ok(())
    }

    /// Over a totally real k the top field is CM exactly when all complex
    /// conjugations equal one nontrivial central involution.
    fn derived_cm(&self) -> Option<usize> {
        let g = &self.group;
        let mut js = self.places.iter().map(|gv| gv.iter().copied().find(|&x| x != 0));
        let j = js.next()??;
        (js.all(|x| x == Some(j)) && g.central_involutions().contains(&j)).then_some(j)
    }

    pub fn is_cm(&self) -> bool {
        self.cm_j.is_some()
    }

    /// Is p ramified in the top field over Q?
    pub fn ramified_over_q(&self, p: u64) -> bool {
        self.base_ramified_primes.contains(&p)
            || self
                .ramified_primes
                .iter()
                .any(|d| !d.is_unramified() && d.rational_prime() == p)
    }

    pub fn all_inertia_normal(&self) -> bool {
        self.ramified_primes.iter().all(|d| self.group.is_normal(&d.inertia))
    }

    /// Splitting in K/K^+ of the primes of K^+ above p: from p_info, else
    /// derived when k = Q and p is listed (P^+ splits iff j is not in G_P).
    pub fn splitting(&self, p: u64) -> Vec<Splitting> {
        if let Some(info) = self.p_info.get(&p) {
            if !info.splitting.is_empty() {
                return info.splitting.clone();
            }
        }
        match (self.base_is_rationals, self.cm_j) {
            (true, Some(j)) => self
                .ramified_primes
                .iter()
                .filter(|d| d.rational_prime() == p)
                .map(|d| if d.decomposition.contains(&j) { Splitting::Nonsplit } else { Splitting::Split })
                .collect(),
            _ => Vec::new(),
        }
    }

    pub fn zeta_p_condition(&self, p: u64) -> Truth {
        self.p_info.get(&p).map_or(Truth::Unknown, |i| i.zeta_p_condition)
    }
}

fn sorted(mut v: Vec<usize>) -> Vec<usize> {
    v.sort_unstable();
    v.dedup();
    v
}

/// The field K cut out by chi: its group G/ker(chi), the faithful character
/// phi it induces there, and the datum pushed down to K.
#[derive(Clone, Debug)]
pub struct CutField {
    pub quotient: Quotient,
    pub phi: Character,
    pub datum: FieldDatum,
}

impl CutField {
    pub fn is_identity(&self) -> bool {
        self.quotient.kernel.len() == 1
    }
}

pub fn reduce_to_cut_field(chi: &Character, field: &FieldDatum) -> Result<CutField> {
    if **chi.group() != *field.group {
        return Err(Error::Invalid("character of a different group".into()));
    }
    if !chi.is_irreducible() {
        return Err(Error::Precondition("reduction needs an irreducible character".into()));
    }
    let (q, phi) = chi.deflate()?;
    let image = |v: &[usize]| sorted(v.iter().map(|&x| q.proj[x]).collect());
    let ramified_primes = field
        .ramified_primes
        .iter()
        .map(|d| DecompositionData {
            label: d.label.clone(),
            decomposition: image(&d.decomposition),
            inertia: image(&d.inertia),
            frobenius: q.proj[d.frobenius],
            residue_norm: d.residue_norm,
        })
        .filter(|d| !d.is_unramified())
        .collect();
    let places: Vec<Vec<usize>> = field.places.iter().map(|v| image(v)).collect();
    let mu = fixed_roots(&field.mu, &q)?;
    let identity = q.kernel.len() == 1;
    let mut datum = FieldDatum {
        name: if identity { field.name.clone() } else { format!("{} cut by ker chi", field.name) },
        group: q.group.clone(),
        base_is_rationals: field.base_is_rationals,
        k_totally_real: field.k_totally_real,
        cm_j: None,
        places,
        ramified_primes,
        base_ramified_primes: field.base_ramified_primes.clone(),
        mu,
        p_info: if identity { field.p_info.clone() } else { BTreeMap::new() },
    };
    datum.cm_j = if field.k_totally_real {
        datum.derived_cm()
    } else {
        field.cm_j.map(|j| q.proj[j]).filter(|&j| j != 0)
    };
    datum.validate()?;
    Ok(CutField { quotient: q, phi, datum })
}

/// mu_K = mu_L^{ker}: the w'-torsion of Z/w with w' = gcd(w, u_h - 1 : h in ker).
fn fixed_roots(mu: &GModule, q: &Quotient) -> Result<GModule> {
    let w = mu.invariants()[0];
    let unit = |g: usize| mu.action(g)[0][0].rem_euclid(w as i64) as u64;
    let w2 = q
        .kernel
        .iter()
        .fold(w, |acc, &h| gcd_u64(acc, (unit(h) + w - 1) % w));
    let gens = q.group.generators();
    let units: Vec<i64> = gens.iter().map(|&s| (unit(q.reps[s]) % w2) as i64).collect();
    GModule::cyclic(&q.group, w2, &gens, &units)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Condition {
    Holds,
    HoldsTrivially,
    Fails,
    Unknown,
}

/// Why a verdict was reached.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Basis {
    /// p is unramified in K/Q.
    Unramified,
    /// One of k totally real, K CM, or the zeta_p condition is false.
    Vacuous,
    /// Splitting data for the primes of K^+ above p.
    Splitting,
    /// chi is rational-valued: the claim does not need condition (*).
    RationalCharacter,
    /// k = Q and chi is linear: the claim does not need condition (*).
    RationalsLinear,
    /// Not enough data.
    Undetermined,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionVerdict {
    pub status: Condition,
    pub basis: Basis,
}

impl ConditionVerdict {
    /// Does the verdict allow the annihilation claim?
    pub fn permits_claim(&self) -> bool {
        matches!(self.status, Condition::Holds | Condition::HoldsTrivially)
    }
}

pub(crate) fn check_odd_prime(p: u64) -> Result<()> {
    if p == 2 {
        return Err(Error::Invalid("p = 2 is excluded: p must be odd".into()));
    }
    if !is_prime(p) {
        return Err(Error::Invalid(format!("{p} is not prime")));
    }
    Ok(())
}

/// Condition (*) at p for the field cut out by chi. The condition is first
/// evaluated from the data; the exemptions for rational characters and for
/// linear characters over Q only replace a FAILS or UNKNOWN outcome.
pub fn condition_star(field: &FieldDatum, chi: &Character, p: u64) -> Result<ConditionVerdict> {
    check_odd_prime(p)?;
    let cut = reduce_to_cut_field(chi, field)?;
    let k = &cut.datum;
    let verdict = |status, basis| Ok(ConditionVerdict { status, basis });
    if !k.ramified_over_q(p) {
        return verdict(Condition::HoldsTrivially, Basis::Unramified);
    }
    let zeta = k.zeta_p_condition(p);
    if !k.k_totally_real || !k.is_cm() || zeta == Truth::False {
        return verdict(Condition::HoldsTrivially, Basis::Vacuous);
    }
    let split = k.splitting(p);
    let (status, basis) = if split.contains(&Splitting::Split) {
        if zeta == Truth::True {
            (Condition::Fails, Basis::Splitting)
        } else {
            (Condition::Unknown, Basis::Undetermined)
        }
    } else if !split.is_empty() && split.iter().all(|s| *s == Splitting::Nonsplit) {
        (Condition::Holds, Basis::Splitting)
    } else {
        (Condition::Unknown, Basis::Undetermined)
    };
    if status != Condition::Holds {
        if chi.is_rational() {
            return verdict(Condition::HoldsTrivially, Basis::RationalCharacter);
        }
        if field.base_is_rationals && chi.is_linear() {
            return verdict(Condition::HoldsTrivially, Basis::RationalsLinear);
        }
    }
    verdict(status, basis)
}
