use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use super::chartable;
use super::group::{FiniteGroup, Quotient, Subgroup};
use crate::arith::int::{euler_phi, gcd_u64, units_mod};
use crate::cyclotomic::CyclotomicElement;
use crate::error::{Error, Result};

/// A class function with values in Q(zeta_e), e the exponent of the group.
#[derive(Clone)]
pub struct Character {
    group: Arc<FiniteGroup>,
    values: Vec<CyclotomicElement>,
}

impl fmt::Debug for Character {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Character[")?;
        for (i, v) in self.values.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "]")
    }
}

impl PartialEq for Character {
    fn eq(&self, o: &Self) -> bool {
        (Arc::ptr_eq(&self.group, &o.group) || *self.group == *o.group) && self.values == o.values
    }
}

impl FiniteGroup {
    /// The irreducible characters, in canonical row order.
    pub fn irreducibles(self: &Arc<Self>) -> Vec<Character> {
        self.table
            .get_or_init(|| chartable::compute(self))
            .iter()
            .map(|row| Character {
                group: self.clone(),
                values: row.clone(),
            })
            .collect()
    }

    pub fn trivial_character(self: &Arc<Self>) -> Character {
        Character::from_values(self, vec![CyclotomicElement::one(self.exponent()); self.num_classes()])
            .expect("trivial character")
    }

    pub fn regular_character(self: &Arc<Self>) -> Character {
        let e = self.exponent();
        let mut vals = vec![CyclotomicElement::zero(e); self.num_classes()];
        vals[0] = CyclotomicElement::from_int(e, self.order() as i64);
        Character::from_values(self, vals).expect("regular character")
    }
}

impl Character {
    /// A class function from per-class values (embedded into Q(zeta_e)).
    pub fn from_values(group: &Arc<FiniteGroup>, values: Vec<CyclotomicElement>) -> Result<Self> {
        if values.len() != group.num_classes() {
            return Err(Error::Invalid(format!(
                "expected {} class values, got {}",
                group.num_classes(),
                values.len()
            )));
        }
        let e = group.exponent();
        let values = values
            .into_iter()
            .map(|v| {
                let v = if e % v.conductor() == 0 { v } else { v.simplify() };
                if e % v.conductor() != 0 {
                    return Err(Error::Invalid("value outside Q(zeta_e)".into()));
                }
                Ok(v.embed(e))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Character {
            group: group.clone(),
            values,
        })
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn values(&self) -> &[CyclotomicElement] {
        &self.values
    }

    pub fn conductor(&self) -> u64 {
        self.group.exponent()
    }

    pub fn value_class(&self, c: usize) -> &CyclotomicElement {
        &self.values[c]
    }

    pub fn value(&self, g: usize) -> &CyclotomicElement {
        &self.values[self.group.class_of(g)]
    }

    pub fn degree(&self) -> i64 {
        let d = self.values[0].to_integer().expect("degree is an integer");
        i64::try_from(d).expect("degree fits")
    }

    pub fn is_trivial(&self) -> bool {
        self.values.iter().all(|v| v.is_one())
    }

    pub fn is_linear(&self) -> bool {
        self.values[0].is_one()
    }

    pub fn conj(&self) -> Self {
        self.map(|v| v.conj())
    }

    /// chi^omega: apply zeta -> zeta^a to every value (a a unit mod e).
    pub fn galois(&self, a: i64) -> Self {
        self.map(|v| v.galois(a))
    }

    fn map(&self, f: impl Fn(&CyclotomicElement) -> CyclotomicElement) -> Self {
        Character {
            group: self.group.clone(),
            values: self.values.iter().map(f).collect(),
        }
    }

    fn zip(&self, o: &Self, f: impl Fn(&CyclotomicElement, &CyclotomicElement) -> CyclotomicElement) -> Self {
        assert!(*self.group == *o.group, "characters of different groups");
        Character {
            group: self.group.clone(),
            values: self.values.iter().zip(&o.values).map(|(a, b)| f(a, b)).collect(),
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        self.zip(o, |a, b| a + b)
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.zip(o, |a, b| a - b)
    }

    pub fn tensor(&self, o: &Self) -> Self {
        self.zip(o, |a, b| a * b)
    }

    pub fn scale(&self, k: i64) -> Self {
        self.map(|v| v.scale_int(&BigInt::from(k)))
    }

    /// <chi, psi> = (1/|G|) sum_g chi(g) conj(psi(g)).
    pub fn inner(&self, o: &Self) -> BigRational {
        assert!(*self.group == *o.group, "characters of different groups");
        let e = self.conductor();
        let mut acc = CyclotomicElement::zero(e);
        for c in 0..self.values.len() {
            let t = &self.values[c] * &o.values[c].conj();
            acc = acc + t.scale_int(&BigInt::from(self.group.class_size(c)));
        }
        let q = acc.to_rational().expect("inner product of characters is rational");
        q / BigRational::from_integer(BigInt::from(self.group.order()))
    }

    /// Integer inner product (panics if not integral).
    pub fn multiplicity(&self, o: &Self) -> i64 {
        let q = self.inner(o);
        assert!(q.is_integer(), "non-integral inner product");
        i64::try_from(q.to_integer()).expect("fits")
    }

    pub fn kernel(&self) -> Vec<usize> {
        (0..self.group.order())
            .filter(|&g| self.value(g) == &self.values[0])
            .collect()
    }

    pub fn is_faithful(&self) -> bool {
        self.kernel().len() == 1
    }

    /// Restriction to a subgroup.
    pub fn restrict(&self, h: &Subgroup) -> Character {
        assert!(*h.parent == *self.group);
        let hg = &h.group;
        let vals = (0..hg.num_classes())
            .map(|c| self.value(h.elements[hg.class_rep(c)]).clone())
            .collect();
        Character::from_values(hg, vals).expect("restriction")
    }

    /// Induction from a subgroup: Ind psi (g) = (1/|H|) sum_x psi°(x g x^-1).
    pub fn induce(h: &Subgroup, psi: &Character) -> Result<Character> {
        if *psi.group != *h.group {
            return Err(Error::Invalid("character does not belong to the subgroup".into()));
        }
        let g = &h.parent;
        let e = g.exponent();
        let vals = (0..g.num_classes())
            .map(|c| {
                let rep = g.class_rep(c);
                let mut acc = CyclotomicElement::zero(e);
                for x in 0..g.order() {
                    let y = g.conj(x, rep);
                    if let Some(i) = h.local_index(y) {
                        acc = acc + psi.value(i);
                    }
                }
                acc.scale(&BigRational::new(BigInt::one(), BigInt::from(h.elements.len())))
            })
            .collect();
        Character::from_values(g, vals)
    }

    /// Inflation of a character of a quotient.
    pub fn inflate(q: &Quotient, phi: &Character) -> Result<Character> {
        if *phi.group != *q.group {
            return Err(Error::Invalid("character does not belong to the quotient".into()));
        }
        let g = &q.parent;
        let vals = (0..g.num_classes())
            .map(|c| phi.value(q.proj[g.class_rep(c)]).clone())
            .collect();
        Character::from_values(g, vals)
    }

    /// The quotient by ker(chi) and the faithful character it induces there.
    pub fn deflate(&self) -> Result<(Quotient, Character)> {
        let q = self.group.quotient(&self.kernel())?;
        let qg = &q.group;
        let vals = (0..qg.num_classes())
            .map(|c| self.value(q.reps[qg.class_rep(c)]).clone())
            .collect();
        let phi = Character::from_values(qg, vals)?;
        Ok((q, phi))
    }

    /// Units a mod e with chi^a = chi.
    pub fn stabilizer(&self) -> Vec<u64> {
        let e = self.conductor();
        units_mod(e)
            .into_iter()
            .map(|u| if e == 1 { 1 } else { u })
            .filter(|&u| self.galois(u as i64) == *self)
            .collect()
    }

    /// Degree of the character field Q(chi) over Q.
    pub fn field_degree(&self) -> u64 {
        euler_phi(self.conductor()) / self.stabilizer().len() as u64
    }

    pub fn is_rational(&self) -> bool {
        self.values.iter().all(|v| v.to_rational().is_some())
    }

    /// Distinct Galois conjugates (a, chi^a) with a in (Z/e)^*, smallest a first.
    pub fn galois_orbit(&self) -> Vec<(u64, Character)> {
        let e = self.conductor();
        let mut out: Vec<(u64, Character)> = Vec::new();
        for u in units_mod(e) {
            let u = if e == 1 { 1 } else { u };
            let c = self.galois(u as i64);
            if !out.iter().any(|(_, d)| *d == c) {
                out.push((u, c));
            }
        }
        out
    }

    /// chi(j) = -chi(1) for a central involution j.
    pub fn is_odd(&self, j: usize) -> Result<bool> {
        let g = &self.group;
        if g.elem_order(j) != 2 || g.class_size(g.class_of(j)) != 1 {
            return Err(Error::Invalid("j is not a central involution".into()));
        }
        Ok(*self.value(j) == -&self.values[0])
    }

    /// Index of this character in the group's irreducible table.
    pub fn table_index(&self) -> Option<usize> {
        self.group.irreducibles().iter().position(|c| c == self)
    }

    pub fn is_irreducible(&self) -> bool {
        self.inner(self).is_one()
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| v.is_zero())
    }
}

/// Order of a root of unity that is a value of a linear character, i.e. the
/// smallest m with v^m = 1.
pub fn root_order(v: &CyclotomicElement, e: u64) -> u64 {
    (1..=e)
        .filter(|m| e % m == 0)
        .find(|&m| v.pow(m as i64).map(|x| x.is_one()).unwrap_or(false))
        .expect("value is a root of unity")
}

/// Exponent k with v = zeta_e^k, for a root of unity v in Q(zeta_e).
pub fn root_exponent(v: &CyclotomicElement, e: u64) -> u64 {
    (0..e)
        .find(|&k| *v == CyclotomicElement::zeta_pow(e, k as i64))
        .expect("value is a root of unity")
}

pub(crate) fn unit_lift(a: u64, m: u64, e: u64) -> u64 {
    // a unit mod m lifted to a unit mod e (m | e)
    if e == 1 {
        return 1;
    }
    let mut x = a % m;
    if m == 1 {
        x = 1;
    }
    while gcd_u64(x, e) != 1 {
        x += m;
    }
    x % e
}
