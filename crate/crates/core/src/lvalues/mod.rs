//! Artin L-values at s = 0: local Euler factors, truncation, orders of
//! vanishing, Dirichlet values via B_{1,chi}, and tables of supplied values.

mod dirichlet;
mod table;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;

use crate::centre::{CentreElement, DecompositionData};
use crate::cyclotomic::{cmat_det, cmat_identity, cmat_mul, CyclotomicElement};
use crate::error::{Error, Result};
use crate::groups::{Character, MatrixRep};

pub use dirichlet::{unit_generators, DirichletCharacter};
pub use table::{LValueEntry, LValueFile, LValueRecord, LValueTable, Provider, Relation, LVALUE_SCHEMA_VERSION};

/// det(1 - F_p | V_psi^{G_0}), the inverse local Euler factor at s = 0.
/// Virtual characters are handled through their irreducible constituents.
pub fn euler_factor_at_0_inverse(psi: &Character, d: &DecompositionData) -> Result<CyclotomicElement> {
    let g = psi.group();
    d.validate(g)?;
    let irr = g.irreducibles();
    let mults: Vec<BigRational> = irr.iter().map(|chi| psi.inner(chi)).collect();
    if mults.iter().any(|m| !m.is_integer()) {
        return Err(Error::Invalid("not a virtual character".into()));
    }
    if mults.iter().all(|m| !m.is_negative()) {
        return newton_factor(psi, d);
    }
    let mut acc = CyclotomicElement::one(1);
    for (chi, m) in irr.iter().zip(&mults) {
        let m = i64::try_from(m.to_integer()).expect("small multiplicity");
        if m != 0 {
            acc = acc * newton_factor(chi, d)?.pow(m)?;
        }
    }
    Ok(acc.simplify())
}

/// Power traces t_k = tr(F^k | V^{G_0}) and Newton's identities.
fn newton_factor(psi: &Character, d: &DecompositionData) -> Result<CyclotomicElement> {
    let g = psi.group();
    let inv = BigRational::new(BigInt::from(1), BigInt::from(d.inertia.len()));
    let trace = |k: usize| -> CyclotomicElement {
        let fk = g.pow(d.frobenius, k as i64);
        let mut acc = CyclotomicElement::zero(1);
        for &h in &d.inertia {
            acc = acc + psi.value(g.mul(fk, h));
        }
        acc.scale(&inv)
    };
    let dim = trace(0)
        .to_integer()
        .and_then(|x| usize::try_from(x).ok())
        .ok_or_else(|| Error::Invalid("invariant dimension is not a non-negative integer".into()))?;
    let t: Vec<CyclotomicElement> = (0..=dim).map(trace).collect();
    // k e_k = sum_{i=1}^k (-1)^{i-1} e_{k-i} t_i
    let mut e = vec![CyclotomicElement::one(1)];
    for k in 1..=dim {
        let mut acc = CyclotomicElement::zero(1);
        for i in 1..=k {
            let term = &e[k - i] * &t[i];
            acc = if i % 2 == 1 { acc + term } else { acc - term };
        }
        e.push(acc.scale(&BigRational::new(BigInt::from(1), BigInt::from(k))));
    }
    let mut det = CyclotomicElement::zero(1);
    for (k, ek) in e.iter().enumerate() {
        det = if k % 2 == 0 { det + ek } else { det - ek };
    }
    Ok(det.simplify())
}

/// The same factor from a matrix model: det(I - rho(F) P), P the G_0-average.
pub fn euler_factor_from_matrices(rep: &MatrixRep, d: &DecompositionData) -> CyclotomicElement {
    let mut coeffs = vec![CyclotomicElement::zero(1); rep.mats.len()];
    let inv = BigRational::new(BigInt::from(1), BigInt::from(d.inertia.len()));
    for &h in &d.inertia {
        coeffs[h] = CyclotomicElement::from_rational(1, &inv);
    }
    let p = rep.apply(&coeffs);
    let fp = cmat_mul(rep.matrix(d.frobenius), &p);
    let id = cmat_identity(rep.conductor, rep.dim);
    let m: Vec<Vec<CyclotomicElement>> = id
        .iter()
        .zip(&fp)
        .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x - y).collect())
        .collect();
    cmat_det(&m).simplify()
}

/// L_S(0, chi) from L(0, chi) by multiplying in the factors at the extra primes.
pub fn truncate(chi: &Character, value: &CyclotomicElement, extra: &[DecompositionData]) -> Result<CyclotomicElement> {
    let mut v = value.clone();
    for d in extra {
        v = v * euler_factor_at_0_inverse(chi, d)?;
    }
    Ok(v.simplify())
}

fn check_places(chi: &Character, places: &[Vec<usize>]) -> Result<()> {
    let g = chi.group();
    for gv in places {
        if gv.is_empty() || gv.len() > 2 || !g.is_subgroup(gv) {
            return Err(Error::Invalid(format!("archimedean decomposition group {gv:?} has order > 2")));
        }
    }
    Ok(())
}

fn fixed_dimension(chi: &Character, h: &[usize]) -> BigRational {
    let mut acc = CyclotomicElement::zero(1);
    for &x in h {
        acc = acc + chi.value(x);
    }
    acc.to_rational().expect("character sums over a subgroup are rational") / BigRational::from_integer(BigInt::from(h.len()))
}

/// r(chi) = sum_v dim V^{G_v} - dim V^G over the archimedean places v of k.
pub fn order_of_vanishing(chi: &Character, places: &[Vec<usize>]) -> Result<i64> {
    check_places(chi, places)?;
    let all: Vec<usize> = (0..chi.group().order()).collect();
    let mut r = -fixed_dimension(chi, &all);
    for gv in places {
        r += fixed_dimension(chi, gv);
    }
    if !r.is_integer() {
        return Err(Error::Invalid("not a character".into()));
    }
    Ok(i64::try_from(r.to_integer()).expect("small"))
}

/// For faithful nontrivial irreducible chi with r(chi) = 0, the central
/// involution j (complex conjugation) with chi(j) = -chi(1). None when r > 0.
pub fn detect_cm_and_j(chi: &Character, places: &[Vec<usize>]) -> Result<Option<usize>> {
    if chi.is_trivial() || !chi.is_faithful() {
        return Err(Error::Precondition("CM detection needs a faithful nontrivial character".into()));
    }
    if order_of_vanishing(chi, places)? > 0 {
        return Ok(None);
    }
    let g = chi.group();
    let mut js = places.iter().map(|gv| gv.iter().copied().find(|&x| x != 0));
    let j = js
        .next()
        .flatten()
        .ok_or_else(|| Error::Invalid("no archimedean places given".into()))?;
    if js.any(|x| x != Some(j)) {
        return Err(Error::Invalid("complex conjugations differ between places".into()));
    }
    if !g.central_involutions().contains(&j) || !chi.is_odd(j)? {
        return Err(Error::Invalid("complex conjugation is not a central involution acting by -1".into()));
    }
    Ok(Some(j))
}

/// Theta(S) = sum_chi L_S(0, conj chi) e_chi for abelian G; `table` holds L_S(0, chi).
pub fn stickelberger_element(table: &LValueTable) -> Result<CentreElement> {
    let g = table.group();
    if !g.is_abelian() {
        return Err(Error::Precondition("Stickelberger elements need an abelian group".into()));
    }
    let comps = g
        .irreducibles()
        .iter()
        .map(|chi| table.require_character(&chi.conj()).cloned())
        .collect::<Result<Vec<_>>>()?;
    CentreElement::new(g, comps)
}

#[cfg(test)]
mod tests;
