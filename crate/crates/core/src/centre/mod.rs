//! Group rings Q(zeta)[G], their centres described componentwise over the
//! irreducible characters, reduced norms and the local modules U_p.

mod ring;

use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::int::factorize;
use crate::arith::zmat::{hnf, ZRow};
use crate::cyclotomic::{cmat_det, CycloIdeal, CyclotomicElement};
use crate::error::{Error, Result};
use crate::groups::{Character, FiniteGroup, MatrixRep, Subgroup};

pub use ring::GroupRingElement;

/// An element of the centre of E[G], stored as its value on each irreducible
/// character (in table order).
#[derive(Clone, Debug, PartialEq)]
pub struct CentreElement {
    group: Arc<FiniteGroup>,
    comps: Vec<CyclotomicElement>,
}

impl CentreElement {
    pub fn new(group: &Arc<FiniteGroup>, comps: Vec<CyclotomicElement>) -> Result<Self> {
        let k = group.num_classes();
        if comps.len() != k {
            return Err(Error::Invalid(format!("expected {k} components, got {}", comps.len())));
        }
        Ok(CentreElement {
            group: group.clone(),
            comps,
        })
    }

    pub fn constant(group: &Arc<FiniteGroup>, c: &CyclotomicElement) -> Self {
        CentreElement {
            group: group.clone(),
            comps: vec![c.clone(); group.num_classes()],
        }
    }

    pub fn one(group: &Arc<FiniteGroup>) -> Self {
        Self::constant(group, &CyclotomicElement::one(1))
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn components(&self) -> &[CyclotomicElement] {
        &self.comps
    }

    pub fn component(&self, i: usize) -> &CyclotomicElement {
        &self.comps[i]
    }

    fn zip(&self, o: &Self, f: impl Fn(&CyclotomicElement, &CyclotomicElement) -> CyclotomicElement) -> Self {
        assert!(*self.group == *o.group, "centre elements of different groups");
        CentreElement {
            group: self.group.clone(),
            comps: self.comps.iter().zip(&o.comps).map(|(a, b)| f(a, b)).collect(),
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        self.zip(o, |a, b| a + b)
    }

    pub fn mul(&self, o: &Self) -> Self {
        self.zip(o, |a, b| a * b)
    }

    pub fn scale(&self, c: &CyclotomicElement) -> Self {
        CentreElement {
            group: self.group.clone(),
            comps: self.comps.iter().map(|a| a * c).collect(),
        }
    }

    /// The anti-involution g -> g^-1 read on components: (z^#)_chi = z_{conj chi}.
    pub fn sharp(&self) -> Self {
        let irr = self.group.irreducibles();
        let comps = irr
            .iter()
            .map(|chi| {
                let j = chi.conj().table_index().expect("conjugate is irreducible");
                self.comps[j].clone()
            })
            .collect();
        CentreElement {
            group: self.group.clone(),
            comps,
        }
    }

    /// z_{chi^a} = (z_chi)^a for every Galois automorphism a of Q(zeta_e).
    pub fn is_galois_stable(&self) -> bool {
        let irr = self.group.irreducibles();
        let e = self.group.exponent();
        crate::arith::int::units_mod(e).into_iter().all(|a| {
            irr.iter().enumerate().all(|(i, chi)| {
                let j = chi.galois(a as i64).table_index().expect("conjugate is irreducible");
                let zi = embed_to(&self.comps[i], e);
                zi.map_or(false, |z| z.galois(a as i64) == self.comps[j])
            })
        })
    }

    /// The element of E[G] with these components:
    /// coeff(g) = (1/|G|) sum_chi z_chi chi(1) chi(g^-1).
    pub fn expand(&self) -> GroupRingElement {
        let g = &self.group;
        let irr = g.irreducibles();
        let inv_order = BigRational::new(BigInt::one(), BigInt::from(g.order()));
        let coeffs = (0..g.order())
            .map(|x| {
                let xi = g.inv(x);
                let mut acc = CyclotomicElement::zero(1);
                for (z, chi) in self.comps.iter().zip(&irr) {
                    if !z.is_zero() {
                        acc = acc + (z * chi.value(xi)).scale_int(&BigInt::from(chi.degree()));
                    }
                }
                acc.scale(&inv_order).simplify()
            })
            .collect();
        GroupRingElement::from_parts(g, coeffs)
    }

    /// As `expand`, but insists that the result lies in Q[G].
    pub fn to_group_ring(&self) -> Result<GroupRingElement> {
        let x = self.expand();
        if !x.is_rational() {
            return Err(Error::NotRational("centre element has irrational group-ring coefficients".into()));
        }
        Ok(x)
    }

    /// Components of a central group-ring element: omega_chi(x) = (1/chi(1)) sum_g x_g chi(g).
    pub fn from_group_ring(x: &GroupRingElement) -> Result<Self> {
        if !x.is_central() {
            return Err(Error::Invalid("group-ring element is not central".into()));
        }
        let g = x.group();
        let comps = g
            .irreducibles()
            .iter()
            .map(|chi| central_character(chi, x))
            .collect();
        Ok(CentreElement {
            group: g.clone(),
            comps,
        })
    }
}

fn central_character(chi: &Character, x: &GroupRingElement) -> CyclotomicElement {
    let mut acc = CyclotomicElement::zero(1);
    for (g, c) in x.coeffs().iter().enumerate() {
        if !c.is_zero() {
            acc = acc + c * chi.value(g);
        }
    }
    acc.scale(&BigRational::new(BigInt::one(), BigInt::from(chi.degree())))
        .simplify()
}

fn embed_to(x: &CyclotomicElement, m: u64) -> Option<CyclotomicElement> {
    let s = x.simplify();
    (m % s.conductor() == 0).then(|| s.embed(m))
}

/// e_chi = (chi(1)/|G|) sum_g chi(g^-1) g.
pub fn idempotent(chi: &Character) -> GroupRingElement {
    let g = chi.group();
    let q = BigRational::new(BigInt::from(chi.degree()), BigInt::from(g.order()));
    projector_scaled(chi, &q)
}

/// pr_chi = sum_g chi(g^-1) g = (|G|/chi(1)) e_chi.
pub fn projector(chi: &Character) -> GroupRingElement {
    projector_scaled(chi, &BigRational::one())
}

fn projector_scaled(chi: &Character, q: &BigRational) -> GroupRingElement {
    let g = chi.group();
    let coeffs = (0..g.order()).map(|x| chi.value(g.inv(x)).scale(q).simplify()).collect();
    GroupRingElement::from_parts(g, coeffs)
}

/// i_H^G on centres: the component at chi is prod_psi z_psi^{<chi|_H, psi>}
/// (with 0^0 = 1).
pub fn induce_centre(h: &Subgroup, z: &CentreElement) -> Result<CentreElement> {
    if *z.group != *h.group {
        return Err(Error::Invalid("centre element does not belong to the subgroup".into()));
    }
    let hirr = h.group.irreducibles();
    let comps = h
        .parent
        .irreducibles()
        .iter()
        .map(|chi| {
            let res = chi.restrict(h);
            let mut acc = CyclotomicElement::one(1);
            for (psi, zp) in hirr.iter().zip(&z.comps) {
                let k = res.multiplicity(psi);
                if k > 0 {
                    acc = acc * zp.pow(k)?;
                }
            }
            Ok(acc)
        })
        .collect::<Result<Vec<_>>>()?;
    CentreElement::new(&h.parent, comps)
}

/// nr of e_chi x in e_chi E[G] = Mat_{chi(1)}(E). Central elements need no
/// realization; otherwise `rep` (or the monomial realization) must afford chi.
pub fn reduced_norm(chi: &Character, x: &GroupRingElement, rep: Option<&MatrixRep>) -> Result<CyclotomicElement> {
    if x.is_central() {
        return central_character(chi, x).pow(chi.degree());
    }
    let owned;
    let rep = match rep {
        Some(r) => {
            if !r.affords(chi) {
                return Err(Error::Invalid("realization does not afford the character".into()));
            }
            r
        }
        None => {
            owned = crate::groups::realize(chi)?;
            &owned
        }
    };
    Ok(cmat_det(&rep.apply(x.coeffs())).simplify())
}

/// Decomposition data at a prime p of the base: G_p, the inertia G_{0,p} and
/// a Frobenius lift, as element indices of G.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionData {
    pub label: String,
    pub decomposition: Vec<usize>,
    pub inertia: Vec<usize>,
    pub frobenius: usize,
    pub residue_norm: u64,
}

impl DecompositionData {
    pub fn validate(&self, g: &FiniteGroup) -> Result<()> {
        let bad = |m: &str| Err(Error::Invalid(format!("prime {}: {m}", self.label)));
        let mut gp = self.decomposition.clone();
        let mut g0 = self.inertia.clone();
        gp.sort_unstable();
        g0.sort_unstable();
        if gp.iter().chain(&g0).any(|&x| x >= g.order()) {
            return bad("element index out of range");
        }
        if !g.is_subgroup(&gp) || !g.is_subgroup(&g0) {
            return bad("decomposition and inertia groups must be subgroups");
        }
        if g0.iter().any(|x| gp.binary_search(x).is_err()) {
            return bad("inertia is not contained in the decomposition group");
        }
        if gp.iter().any(|&y| g0.iter().any(|&x| g0.binary_search(&g.conj(y, x)).is_err())) {
            return bad("inertia is not normal in the decomposition group");
        }
        if gp.binary_search(&self.frobenius).is_err() {
            return bad("Frobenius lift is not in the decomposition group");
        }
        let mut gens = g0.clone();
        gens.push(self.frobenius);
        if g.closure(&gens).len() != gp.len() {
            return bad("Frobenius does not generate the residual group");
        }
        if factorize(self.residue_norm).len() != 1 {
            return bad("residue norm is not a prime power");
        }
        Ok(())
    }

    pub fn is_unramified(&self) -> bool {
        self.inertia.len() == 1
    }

    /// The rational prime below.
    pub fn rational_prime(&self) -> u64 {
        factorize(self.residue_norm)[0].0
    }
}

/// Norm_H = sum_{h in H} h.
pub fn norm_element(g: &Arc<FiniteGroup>, h: &[usize]) -> GroupRingElement {
    let mut coeffs = vec![CyclotomicElement::zero(1); g.order()];
    for &x in h {
        coeffs[x] = CyclotomicElement::one(1);
    }
    GroupRingElement::from_parts(g, coeffs)
}

/// e'_p, e''_p, e-bar_p and e-bar-bar_p as elements of Q[G_p] inside Q[G].
#[derive(Clone, Debug)]
pub struct LocalIdempotents {
    pub inertia: GroupRingElement,
    pub inertia_complement: GroupRingElement,
    pub decomposition: GroupRingElement,
    pub decomposition_complement: GroupRingElement,
}

pub fn local_idempotents(g: &Arc<FiniteGroup>, d: &DecompositionData) -> LocalIdempotents {
    let avg = |h: &[usize]| norm_element(g, h).scale_rational(&BigRational::new(BigInt::one(), BigInt::from(h.len())));
    let one = GroupRingElement::one(g);
    let e1 = avg(&d.inertia);
    let eb = avg(&d.decomposition);
    LocalIdempotents {
        inertia_complement: one.sub(&e1),
        decomposition_complement: one.sub(&eb),
        inertia: e1,
        decomposition: eb,
    }
}

/// The Z[G_p]-module generators Norm_{G_0} and 1 - e'_p F^-1 of U_p.
pub fn u_p_generators(g: &Arc<FiniteGroup>, d: &DecompositionData) -> [GroupRingElement; 2] {
    let e1 = local_idempotents(g, d).inertia;
    let finv = GroupRingElement::basis(g, g.inv(d.frobenius));
    [
        norm_element(g, &d.inertia),
        GroupRingElement::one(g).sub(&e1.mul(&finv)),
    ]
}

/// A full-rank Z-lattice in Q^n: HNF rows of `den * L`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalLattice {
    pub den: BigInt,
    pub rows: Vec<ZRow>,
}

impl RationalLattice {
    pub fn span(rows: &[Vec<BigRational>], ncols: usize) -> Self {
        let den = rows.iter().flatten().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
        let ints = rows
            .iter()
            .map(|r| r.iter().map(|q| q.numer() * (&den / q.denom())).collect::<ZRow>());
        let mut h = hnf(ints, ncols);
        // cancel a common factor so equal lattices compare equal
        let g = h.iter().flatten().fold(den.clone(), |acc, x| acc.gcd(x));
        if !g.is_one() && !g.is_zero() {
            for r in h.iter_mut() {
                for x in r.iter_mut() {
                    *x /= &g;
                }
            }
            return RationalLattice { den: den / g, rows: h };
        }
        RationalLattice { den, rows: h }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }
}

/// The lattice Z[G_p] U_p, in coordinates indexed by G.
pub fn u_p_lattice(g: &Arc<FiniteGroup>, d: &DecompositionData) -> Result<RationalLattice> {
    let mut rows = Vec::new();
    for u in u_p_generators(g, d) {
        for &y in &d.decomposition {
            rows.push(GroupRingElement::basis(g, y).mul(&u).rational_coeffs()?);
        }
    }
    Ok(RationalLattice::span(&rows, g.order()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Exactness {
    Exact,
    LowerBound,
}

/// U_chi for a faithful irreducible chi. Primes whose inertia group is
/// normal in G contribute O. Elsewhere the ideal is generated by reduced norms
/// of a finite subset of e_chi O[G] U_p, so the result is contained in U_chi.
pub fn u_chi(
    chi: &Character,
    ramified: &[DecompositionData],
    rep: &MatrixRep,
) -> Result<(CycloIdeal, Exactness)> {
    let g = chi.group();
    if !chi.is_faithful() || !chi.is_irreducible() {
        return Err(Error::Precondition("U_chi needs a faithful irreducible character".into()));
    }
    let m = rep.conductor;
    let mut ideal = CycloIdeal::unit(m);
    let mut exact = Exactness::Exact;
    for d in ramified {
        d.validate(g)?;
        if d.is_unramified() || g.is_normal(&d.inertia) {
            continue;
        }
        exact = Exactness::LowerBound;
        let [u1, u2] = u_p_generators(g, d);
        let mut gens = Vec::new();
        for x in 0..g.order() {
            let b = GroupRingElement::basis(g, x);
            let (a1, a2) = (b.mul(&u1), b.mul(&u2));
            gens.push(a1.add(&u2));
            gens.push(u1.add(&a2));
            gens.push(a1);
            gens.push(a2);
        }
        let norms = gens
            .iter()
            .map(|y| Ok(reduced_norm(chi, y, Some(rep))?.embed(m)))
            .collect::<Result<Vec<_>>>()?;
        ideal = ideal.mul(&CycloIdeal::from_generators(m, &norms));
    }
    Ok((ideal, exact))
}

#[cfg(test)]
mod tests;
