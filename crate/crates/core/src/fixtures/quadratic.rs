use std::collections::BTreeMap;

use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::dirichlet_link::DirichletLink;
use super::forms::{form_class_group, FormClass};
use crate::annihilator::{build_theorem_element, verify_annihilation, Condition, FieldDatum, Outcome, PInfo, Truth};
use crate::arith::int::{factorize, is_fundamental_negative, kronecker};
use crate::centre::DecompositionData;
use crate::cyclotomic::CyclotomicElement;
use crate::error::{Error, Result};
use crate::groups::{catalog_group, Character};
use crate::lvalues::{DirichletCharacter, LValueTable};
use crate::twistcohom::GModule;

pub const SWEEP_SCHEMA_VERSION: u32 = 1;

/// K = Q(sqrt(-d)) over Q with G = C2 = {1, sigma}.
pub fn quadratic_field_datum(d: u64) -> Result<FieldDatum> {
    if !is_fundamental_negative(d) {
        return Err(Error::Invalid(format!("-{d} is not a fundamental discriminant")));
    }
    let g = catalog_group("C2")?;
    let w = super::forms::roots_of_unity(d);
    let ramified_primes = factorize(d)
        .into_iter()
        .map(|(q, _)| DecompositionData {
            label: q.to_string(),
            decomposition: vec![0, 1],
            inertia: vec![0, 1],
            frobenius: 0,
            residue_norm: q,
        })
        .collect();
    // K lies in Q(zeta_q) exactly when -d = -q with q = 3 mod 4
    let p_info: BTreeMap<u64, PInfo> = factorize(d)
        .into_iter()
        .filter(|&(q, _)| q != 2)
        .map(|(q, _)| {
            let inside = d == q && q % 4 == 3;
            (
                q,
                PInfo {
                    ramified_in_k_over_q: Some(true),
                    splitting: Vec::new(),
                    zeta_p_condition: if inside { Truth::True } else { Truth::False },
                },
            )
        })
        .collect();
    let datum = FieldDatum {
        name: format!("Q(sqrt(-{d}))"),
        mu: GModule::cyclic(&g, w, &[1], &[-1])?,
        group: g,
        base_is_rationals: true,
        k_totally_real: true,
        cm_j: Some(1),
        places: vec![vec![0, 1]],
        ramified_primes,
        base_ramified_primes: Vec::new(),
        p_info,
    };
    datum.validate()?;
    Ok(datum)
}

/// sigma = Frob_a for the units a with (-d/a) = -1.
pub fn quadratic_link(d: u64) -> DirichletLink {
    DirichletLink {
        modulus: d,
        unit_images: crate::lvalues::unit_generators(d)
            .into_iter()
            .map(|(a, _)| usize::from(kronecker(-(d as i64), a) == -1))
            .collect(),
    }
}

pub fn quadratic_table(d: u64) -> Result<LValueTable> {
    quadratic_link(d).table(&catalog_group("C2")?)
}

pub fn sign_character() -> Result<Character> {
    Ok(catalog_group("C2")?
        .irreducibles()
        .into_iter()
        .find(|c| !c.is_trivial())
        .expect("C2 has a nontrivial character"))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LawCase {
    pub d: u64,
    pub h: u64,
    pub w: u64,
    pub l_value: String,
    pub holds: bool,
}

/// L(0, chi_{-d}) = 2h/w for every fundamental -d with 3 <= d <= dmax.
pub fn class_number_law(dmax: u64) -> Result<Vec<LawCase>> {
    (3..=dmax)
        .into_par_iter()
        .filter(|&d| is_fundamental_negative(d))
        .map(|d| {
            let cg = form_class_group(d)?;
            let l = DirichletCharacter::quadratic(-(d as i64))?.l_at_0()?;
            let expect = CyclotomicElement::from_rational(
                1,
                &num_rational::BigRational::new((2 * cg.h()).into(), cg.w().into()),
            );
            Ok(LawCase {
                d,
                h: cg.h(),
                w: cg.w(),
                l_value: l.to_string(),
                holds: l == expect,
            })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepCase {
    pub d: u64,
    pub h: u64,
    pub p: u64,
    pub invariants: Vec<u64>,
    /// Coefficients of 1 and sigma.
    pub element: Vec<String>,
    pub condition: Condition,
    pub central: bool,
    pub p_integral: bool,
    pub claim: bool,
    pub outcome: Outcome,
    /// Class with nonzero image when the element is applied by composition.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub forms_witness: Option<FormClass>,
}

impl SweepCase {
    pub fn passed(&self) -> bool {
        self.central && self.p_integral && self.claim && self.outcome == Outcome::Pass && self.forms_witness.is_none()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepReport {
    pub schema_version: u32,
    pub dmax: u64,
    pub discriminants: usize,
    pub cases: Vec<SweepCase>,
    pub failures: usize,
}

/// For every fundamental -d, d <= dmax, and odd p | h(-d) with p not dividing
/// d: the element for the sign character with x = 1, checked against the
/// forms class group both as a module and by composition.
pub fn quadratic_sweep(dmax: u64, only_p: Option<u64>) -> Result<SweepReport> {
    let ds: Vec<u64> = (3..=dmax).filter(|&d| is_fundamental_negative(d)).collect();
    let chi = sign_character()?;
    let per_d: Vec<Vec<SweepCase>> = ds
        .par_iter()
        .map(|&d| -> Result<Vec<SweepCase>> {
            let cg = form_class_group(d)?;
            let primes: Vec<u64> = factorize(cg.h())
                .into_iter()
                .map(|(p, _)| p)
                .filter(|&p| p != 2 && d % p != 0 && only_p.is_none_or(|q| q == p))
                .collect();
            if primes.is_empty() {
                return Ok(Vec::new());
            }
            let field = quadratic_field_datum(d)?;
            let table = quadratic_table(d)?;
            let cl = cg.class_group_data()?;
            let one = CyclotomicElement::one(1);
            primes
                .into_iter()
                .map(|p| {
                    let a = build_theorem_element(&chi, &field, p, &one, &table, None)?;
                    let report = verify_annihilation(&a, &cl, p)?;
                    let coeffs = a.coefficients();
                    let den = coeffs.iter().fold(num_bigint::BigInt::from(1), |acc, q| {
                        num_integer::Integer::lcm(&acc, q.denom())
                    });
                    let scaled: Vec<i128> = coeffs
                        .iter()
                        .map(|q| (q.numer() * (&den / q.denom())).to_i128().expect("small coefficient"))
                        .collect();
                    Ok(SweepCase {
                        d,
                        h: cg.h(),
                        p,
                        invariants: cg.invariants.clone(),
                        element: coeffs.iter().map(|q| q.to_string()).collect(),
                        condition: a.provenance.condition.status,
                        central: a.provenance.central,
                        p_integral: a.provenance.p_integral,
                        claim: a.provenance.claim,
                        outcome: report.outcome,
                        forms_witness: cg.annihilation_witness(scaled[0], scaled[1], p),
                    })
                })
                .collect()
        })
        .collect::<Result<_>>()?;
    let cases: Vec<SweepCase> = per_d.into_iter().flatten().collect();
    let failures = cases.iter().filter(|c| !c.passed()).count();
    Ok(SweepReport {
        schema_version: SWEEP_SCHEMA_VERSION,
        dmax,
        discriminants: ds.len(),
        cases,
        failures,
    })
}
