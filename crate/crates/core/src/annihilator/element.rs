use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use super::datum::{check_odd_prime, condition_star, reduce_to_cut_field, Basis, Condition, ConditionVerdict, CutField, FieldDatum};
use crate::arith::int::val_bigint;
use crate::centre::{projector, u_chi, DecompositionData, Exactness, GroupRingElement};
use crate::cyclotomic::{inverse_different, parse_rational, CycloIdeal, CyclotomicElement};
use crate::error::{Error, Result};
use crate::groups::{character_field, realization_galois, realize, Character, GroupRef, MatrixRep};
use crate::lvalues::{order_of_vanishing, truncate, LValueTable};
use crate::twistcohom::{h_mu_chi, EulerCharacteristic};

pub const ELEMENT_SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Construction {
    Theorem,
    Corollary,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub construction: Construction,
    /// Table keys of the characters summed over (one orbit representative
    /// for the theorem).
    pub characters: Vec<String>,
    pub p: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x: Option<CyclotomicElement>,
    pub lvalue_keys: Vec<String>,
    pub condition: ConditionVerdict,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub u_chi: Option<Exactness>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub realization_conductor: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vanishing_order: Option<i64>,
    pub central: bool,
    pub p_integral: bool,
    /// Least common denominator of the coefficients.
    pub denominator: String,
    /// Whether the hypotheses checked here support the annihilation claim.
    pub claim: bool,
    #[serde(default)]
    pub warnings: Vec<String>,
}

/// A rational group-ring element together with how it was obtained.
#[derive(Clone, Debug, PartialEq)]
pub struct AnnihilatorElement {
    pub element: GroupRingElement,
    pub provenance: Provenance,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ElementFile {
    pub schema_version: u32,
    pub group: GroupRef,
    pub coefficients: Vec<String>,
    pub provenance: Provenance,
}

impl AnnihilatorElement {
    pub fn coefficients(&self) -> Vec<BigRational> {
        self.element.rational_coeffs().expect("annihilator elements are rational")
    }

    pub fn is_zero(&self) -> bool {
        self.element.is_zero()
    }

    pub fn to_file(&self) -> ElementFile {
        ElementFile {
            schema_version: ELEMENT_SCHEMA_VERSION,
            group: GroupRef::for_group(self.element.group()),
            coefficients: self.coefficients().iter().map(|q| q.to_string()).collect(),
            provenance: self.provenance.clone(),
        }
    }

    /// Load and re-derive the recorded centrality, integrality and denominator.
    pub fn from_file(f: &ElementFile) -> Result<Self> {
        if f.schema_version != ELEMENT_SCHEMA_VERSION {
            return Err(Error::Schema(format!(
                "element schema_version {} (expected {ELEMENT_SCHEMA_VERSION})",
                f.schema_version
            )));
        }
        let g = f.group.resolve()?;
        let coeffs = f.coefficients.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>>>()?;
        let element = GroupRingElement::from_rationals(&g, &coeffs)?;
        let prov = &f.provenance;
        let (central, p_integral, den) = facts(&element, prov.p)?;
        if central != prov.central || p_integral != prov.p_integral || den.to_string() != prov.denominator {
            return Err(Error::Inconsistent(
                "recorded centrality, integrality or denominator does not match the coefficients".into(),
            ));
        }
        Ok(AnnihilatorElement {
            element,
            provenance: prov.clone(),
        })
    }
}

fn facts(x: &GroupRingElement, p: u64) -> Result<(bool, bool, BigInt)> {
    let den = x.denominator()?;
    Ok((x.is_central(), val_bigint(&den, p).unwrap_or(0) == 0, den))
}

fn embed_at(x: &CyclotomicElement, m: u64) -> Result<CyclotomicElement> {
    let s = x.simplify();
    if m % s.conductor() != 0 {
        return Err(Error::Invalid(format!("{x} does not lie in Q(zeta_{m})")));
    }
    Ok(s.embed(m))
}

/// D^-1 h(mu_K, phi) U_phi over O = Z[zeta_m], m the realization conductor.
#[derive(Clone, Debug)]
pub struct AdmissibleIdeal {
    pub ideal: CycloIdeal,
    pub euler: EulerCharacteristic,
    pub u_chi: CycloIdeal,
    pub exactness: Exactness,
}

impl AdmissibleIdeal {
    pub fn compute(cut: &CutField, rep: &MatrixRep) -> Result<Self> {
        let m = rep.conductor;
        let euler = h_mu_chi(&cut.datum.mu, &cut.phi, Some(rep))?;
        let (u, exactness) = u_chi(&cut.phi, &cut.datum.ramified_primes, rep)?;
        let ideal = inverse_different(m).mul(&euler.ideal.embed(m)).mul(&u.embed(m));
        Ok(AdmissibleIdeal {
            ideal,
            euler,
            u_chi: u,
            exactness,
        })
    }

    /// Membership after localizing at p: v_P(x) >= v_P(ideal) for all P | p.
    pub fn contains_at(&self, x: &CyclotomicElement, p: u64) -> Result<bool> {
        let m = self.ideal.conductor();
        let x = embed_at(x, m)?;
        if x.is_zero() {
            return Ok(true);
        }
        let vx = CycloIdeal::principal(&x).p_valuation(p)?;
        let vi = self.ideal.p_valuation(p)?;
        Ok(vx.iter().zip(&vi).all(|(a, b)| a >= b))
    }
}

fn warn_common(field: &FieldDatum, p: u64, warnings: &mut Vec<String>) {
    if field.group.order() as u64 % p == 0 {
        warnings.push(format!(
            "p = {p} divides |G|: the twisting lattice is the monomial one and ideals at p may depend on that choice"
        ));
    }
}

/// sum over omega in Gal(E/Q) of x^omega L(0, conj chi^omega) pr_{chi^omega},
/// E = Q(zeta_m) for the realization conductor m of the character phi that
/// chi induces on Gal(K/k). `table` holds L(0, chi) for the characters of G;
/// `rep` realizes phi when it is not monomial.
pub fn build_theorem_element(
    chi: &Character,
    field: &FieldDatum,
    p: u64,
    x: &CyclotomicElement,
    table: &LValueTable,
    rep: Option<&MatrixRep>,
) -> Result<AnnihilatorElement> {
    check_odd_prime(p)?;
    let g = &field.group;
    if **table.group() != **g {
        return Err(Error::Invalid("L-value table for a different group".into()));
    }
    if chi.is_trivial() {
        return Err(Error::Precondition("the construction needs a nontrivial character".into()));
    }
    let cut = reduce_to_cut_field(chi, field)?;
    let condition = condition_star(field, chi, p)?;
    let key = LValueTable::key(chi.table_index().expect("irreducible"));
    let mut warnings = Vec::new();
    warn_common(field, p, &mut warnings);
    let r = order_of_vanishing(chi, &field.places)?;
    let rep = match rep {
        Some(r) => {
            if !r.affords(&cut.phi) {
                return Err(Error::Invalid("the supplied realization does not afford phi".into()));
            }
            r.clone()
        }
        None => realize(&cut.phi)?,
    };
    let m = rep.conductor;
    let mut prov = Provenance {
        construction: Construction::Theorem,
        characters: vec![key],
        p,
        x: Some(x.simplify()),
        lvalue_keys: Vec::new(),
        condition,
        u_chi: None,
        realization_conductor: Some(m),
        vanishing_order: Some(r),
        central: true,
        p_integral: true,
        denominator: "1".into(),
        claim: false,
        warnings,
    };
    if r > 0 {
        prov.warnings.push(format!("L(s, chi) vanishes to order {r} at s = 0: the element is zero"));
        prov.claim = condition.permits_claim();
        return Ok(AnnihilatorElement {
            element: GroupRingElement::zero(g),
            provenance: prov,
        });
    }
    let adm = AdmissibleIdeal::compute(&cut, &rep)?;
    prov.u_chi = Some(adm.exactness);
    if adm.exactness == Exactness::LowerBound {
        prov.warnings.push("U_chi is a lower bound: x was tested against a sub-ideal".into());
    }
    if !adm.contains_at(x, p)? {
        return Err(Error::Precondition(format!(
            "x = {x} is not in D^-1 h(mu_K, chi) U_chi locally at p = {p}"
        )));
    }
    if !table.is_galois_equivariant() {
        return Err(Error::Inconsistent("L-value table is not Galois-equivariant".into()));
    }
    let x = embed_at(x, m)?;
    let e = g.exponent();
    let mut acc = GroupRingElement::zero(g);
    for (am, ae) in realization_galois(m, e) {
        let c = chi.galois(ae as i64);
        let cbar = c.conj();
        let l = table.require_character(&cbar)?;
        let k = LValueTable::key(cbar.table_index().expect("irreducible"));
        if !prov.lvalue_keys.contains(&k) {
            prov.lvalue_keys.push(k);
        }
        acc = acc.add(&projector(&c).scale(&(&x.galois(am as i64) * l)));
    }
    finish(acc, prov)
}

fn finish(acc: GroupRingElement, mut prov: Provenance) -> Result<AnnihilatorElement> {
    let g = acc.group().clone();
    let coeffs = acc
        .rational_coeffs()
        .map_err(|_| Error::Inconsistent("Galois sum has irrational coefficients".into()))?;
    let element = GroupRingElement::from_rationals(&g, &coeffs)?;
    let (central, p_integral, den) = facts(&element, prov.p)?;
    prov.central = central;
    prov.p_integral = p_integral;
    prov.denominator = den.to_string();
    if !central {
        return Err(Error::Inconsistent("constructed element is not central".into()));
    }
    if !p_integral {
        prov.warnings.push(format!("coefficients are not {}-integral", prov.p));
    }
    prov.claim = central && p_integral && prov.condition.permits_claim();
    Ok(AnnihilatorElement {
        element,
        provenance: prov,
    })
}

/// The table of L_S(0, chi), S = ramified primes plus `extra`, from L(0, chi).
pub fn truncated_table(field: &FieldDatum, extra: &[DecompositionData], table: &LValueTable) -> Result<LValueTable> {
    let irr = field.group.irreducibles();
    let s: Vec<DecompositionData> = field.ramified_primes.iter().chain(extra).cloned().collect();
    let mut out = LValueTable::new(&field.group);
    for (i, entry) in table.entries() {
        out.insert(i, truncate(&irr[i], &entry.value, &s)?, entry.provider)?;
    }
    Ok(out)
}

/// sum over nontrivial chi of L_S(0, conj chi) d_chi pr_chi, for p odd and
/// unramified in L/Q and every inertia group normal in G. S consists of the
/// ramified primes and `extra`; `table` holds L(0, chi).
pub fn build_corollary_element(
    field: &FieldDatum,
    extra: &[DecompositionData],
    p: u64,
    table: &LValueTable,
) -> Result<AnnihilatorElement> {
    check_odd_prime(p)?;
    let g = &field.group;
    if **table.group() != **g {
        return Err(Error::Invalid("L-value table for a different group".into()));
    }
    if field.ramified_over_q(p) {
        return Err(Error::Precondition(format!("p = {p} is ramified in {}", field.name)));
    }
    if let Some(d) = field.ramified_primes.iter().find(|d| !g.is_normal(&d.inertia)) {
        return Err(Error::Precondition(format!("inertia group at {} is not normal", d.label)));
    }
    for d in extra {
        d.validate(g)?;
    }
    let s: Vec<DecompositionData> = field.ramified_primes.iter().chain(extra).cloned().collect();
    let mut warnings = Vec::new();
    warn_common(field, p, &mut warnings);
    if field.base_is_rationals && g.is_abelian() {
        warnings.push("k = Q: comparisons with the abelian Stickelberger element may need an adjustment".into());
    }
    let mut prov = Provenance {
        construction: Construction::Corollary,
        characters: Vec::new(),
        p,
        x: None,
        lvalue_keys: Vec::new(),
        condition: ConditionVerdict {
            status: Condition::HoldsTrivially,
            basis: Basis::Unramified,
        },
        u_chi: Some(Exactness::Exact),
        realization_conductor: None,
        vanishing_order: None,
        central: true,
        p_integral: true,
        denominator: "1".into(),
        claim: false,
        warnings,
    };
    let mut acc = GroupRingElement::zero(g);
    for chi in g.irreducibles().iter().filter(|c| !c.is_trivial()) {
        prov.characters.push(LValueTable::key(chi.table_index().expect("irreducible")));
        if order_of_vanishing(chi, &field.places)? > 0 {
            continue;
        }
        let cbar = chi.conj();
        let l = table.require_character(&cbar)?;
        prov.lvalue_keys.push(LValueTable::key(cbar.table_index().expect("irreducible")));
        let ls = truncate(&cbar, l, &s)?;
        let d = character_field(chi).d_chi;
        acc = acc.add(&projector(chi).scale(&ls.scale_int(&BigInt::from(d))));
    }
    finish(acc, prov)
}
