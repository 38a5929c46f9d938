//! Monomial matrix realizations rho = Ind_H^G(lambda) of irreducible characters.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::character::{root_exponent, root_order, unit_lift, Character};
use super::group::FiniteGroup;
use crate::arith::int::{euler_phi, lcm_u64, units_mod};
use crate::cyclotomic::{cmat_add, cmat_identity, cmat_mul, cmat_scale, CMat, CyclotomicElement};
use crate::error::{Error, Result};

/// rho(g)_{ij} = lambda°(g_i^-1 g g_j): each row has a single nonzero entry,
/// a root of unity zeta_m^k.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialRep {
    pub dim: usize,
    /// Conductor of the field the entries live in.
    pub m: u64,
    pub subgroup: Vec<usize>,
    pub coset_reps: Vec<usize>,
    /// entries[g][i] = (j, k): row i of rho(g) is zeta_m^k in column j.
    pub entries: Vec<Vec<(usize, u64)>>,
}

impl MonomialRep {
    pub fn entry(&self, g: usize, i: usize, j: usize) -> CyclotomicElement {
        let (c, k) = self.entries[g][i];
        if c == j {
            CyclotomicElement::zeta_pow(self.m, k as i64)
        } else {
            CyclotomicElement::zero(self.m)
        }
    }

    pub fn matrix(&self, g: usize) -> Vec<Vec<CyclotomicElement>> {
        (0..self.dim)
            .map(|i| (0..self.dim).map(|j| self.entry(g, i, j)).collect())
            .collect()
    }

    pub fn trace(&self, g: usize) -> CyclotomicElement {
        (0..self.dim).fold(CyclotomicElement::zero(self.m), |acc, i| acc + self.entry(g, i, i))
    }

    /// rho(g) rho(h) = rho(gh) for all g, h.
    pub fn is_homomorphism(&self, g: &FiniteGroup) -> bool {
        (0..g.order()).all(|a| {
            (0..g.order()).all(|b| {
                let ab = g.mul(a, b);
                (0..self.dim).all(|i| {
                    let (j, k1) = self.entries[a][i];
                    let (l, k2) = self.entries[b][j];
                    self.entries[ab][i] == (l, (k1 + k2) % self.m)
                })
            })
        })
    }
}

fn linear_rep(chi: &Character) -> MonomialRep {
    let g = chi.group();
    let e = g.exponent();
    let m = (0..g.num_classes()).fold(1, |acc, c| lcm_u64(acc, root_order(chi.value_class(c), e)));
    let entries = (0..g.order())
        .map(|x| {
            let k = root_exponent(chi.value(x), e);
            vec![(0, k * m / e)]
        })
        .collect();
    MonomialRep {
        dim: 1,
        m,
        subgroup: (0..g.order()).collect(),
        coset_reps: vec![0],
        entries,
    }
}

fn induced_rep(g: &Arc<FiniteGroup>, h: &[usize], lam: &Character) -> MonomialRep {
    let eh = lam.conductor();
    let hg = lam.group();
    let m = (0..hg.num_classes()).fold(1, |acc, c| lcm_u64(acc, root_order(lam.value_class(c), eh)));
    let reps = g.coset_reps(h);
    let mut coset_of = vec![0usize; g.order()];
    for (j, &r) in reps.iter().enumerate() {
        for &x in h {
            coset_of[g.mul(r, x)] = j;
        }
    }
    let entries = (0..g.order())
        .map(|x| {
            reps.iter()
                .map(|&gi| {
                    let j = coset_of[g.mul(g.inv(x), gi)];
                    let y = g.mul(g.mul(g.inv(gi), x), reps[j]);
                    let local = h.binary_search(&y).expect("lands in H");
                    let k = root_exponent(lam.value(local), eh);
                    (j, k * m / eh)
                })
                .collect()
        })
        .collect();
    MonomialRep {
        dim: reps.len(),
        m,
        subgroup: h.to_vec(),
        coset_reps: reps,
        entries,
    }
}

/// A monomial realization of an irreducible character with the smallest
/// conductor among those induced from linear characters, if one exists.
pub fn monomial_realization(chi: &Character) -> Option<MonomialRep> {
    if chi.is_linear() {
        return Some(linear_rep(chi));
    }
    let g = chi.group();
    let d = chi.degree() as usize;
    let mut best: Option<MonomialRep> = None;
    for h in g.subgroups().iter().filter(|h| h.len() * d == g.order()) {
        let sub = g.subgroup(h).ok()?;
        let res = chi.restrict(&sub);
        for lam in sub.group.irreducibles().iter().filter(|l| l.is_linear()) {
            // Ind lambda = chi  iff  <chi|H, lambda> = 1 when degrees match
            if !res.inner(lam).is_integer() || res.multiplicity(lam) != 1 {
                continue;
            }
            let rep = induced_rep(g, h, lam);
            if best.as_ref().is_none_or(|b| rep.m < b.m) {
                best = Some(rep);
            }
        }
    }
    best
}

impl FiniteGroup {
    /// Realizations of the irreducible characters (None for non-monomial ones).
    pub fn realizations(self: &Arc<Self>) -> Vec<Option<Arc<MonomialRep>>> {
        self.irreducibles()
            .iter()
            .map(|c| monomial_realization(c).map(Arc::new))
            .collect()
    }
}

/// Description of the character field and of the realization data chosen.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CharacterField {
    /// Exponent e of the group: Q(chi) is a subfield of Q(zeta_e).
    pub ambient: u64,
    /// {a in (Z/e)^* : chi^a = chi}; Q(chi) is its fixed field.
    pub stabilizer: Vec<u64>,
    pub degree: u64,
    /// Conductor m of the cyclotomic field E = Q(zeta_m) used for twisting.
    pub realization_conductor: u64,
    /// Smallest certified [E' : Q(chi)] over realization fields E'.
    pub d_chi: u64,
    pub monomial: bool,
}

/// min over pairs (H, lambda), lambda linear on H with <chi|_H, lambda> = 1,
/// of [Q(chi, lambda) : Q(chi)]. Such a pair makes chi realizable over
/// Q(chi, lambda), since Ind lambda is realizable over Q(lambda).
fn certified_d(chi: &Character, stab: &[u64]) -> Option<u64> {
    let g = chi.group();
    let mut best: Option<u64> = None;
    for h in g.subgroups().iter().rev() {
        let sub = g.subgroup(h).ok()?;
        let res = chi.restrict(&sub);
        for lam in sub.group.irreducibles().iter().filter(|l| l.is_linear()) {
            if res.inner(lam) != num_rational::BigRational::from_integer(1.into()) {
                continue;
            }
            let both = stab.iter().filter(|&&a| lam.galois(a as i64) == *lam).count() as u64;
            let d = stab.len() as u64 / both;
            if best.is_none_or(|b| d < b) {
                best = Some(d);
            }
            if d == 1 {
                return best;
            }
        }
    }
    best
}

pub fn character_field(chi: &Character) -> CharacterField {
    let e = chi.conductor();
    let stabilizer = chi.stabilizer();
    let degree = euler_phi(e) / stabilizer.len() as u64;
    let rep = monomial_realization(chi);
    let m = rep.as_ref().map_or(e, |r| r.m);
    let d_chi = certified_d(chi, &stabilizer).unwrap_or(euler_phi(e) / degree);
    CharacterField {
        ambient: e,
        stabilizer,
        degree,
        realization_conductor: m,
        d_chi,
        monomial: rep.is_some(),
    }
}

/// The Galois group of E = Q(zeta_m) acting on the characters of a group of
/// exponent e: pairs (a mod m, lift of a mod e).
pub fn realization_galois(m: u64, e: u64) -> Vec<(u64, u64)> {
    let l = lcm_u64(m, e);
    units_mod(m)
        .into_iter()
        .map(|a| {
            let a = if m == 1 { 1 } else { a };
            let full = unit_lift(a, m, l);
            (a, full % e.max(1))
        })
        .collect()
}

/// An integral matrix representation g -> rho(g) in GL_d(Z[zeta_m]), listed
/// for every group element. T = O^d is a right module via row vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixRep {
    pub conductor: u64,
    pub dim: usize,
    pub mats: Vec<CMat>,
}

/// File form of a realization: matrices for the listed generators only.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RealizationFile {
    pub schema_version: u32,
    pub conductor: u64,
    pub generators: Vec<usize>,
    pub matrices: Vec<CMat>,
}

impl MatrixRep {
    pub fn from_monomial(r: &MonomialRep) -> Self {
        MatrixRep {
            conductor: r.m.max(1),
            dim: r.dim,
            mats: (0..r.entries.len()).map(|g| r.matrix(g)).collect(),
        }
    }

    /// Extend generator images to the whole group and check that the result
    /// is an integral homomorphism.
    pub fn from_generators(g: &FiniteGroup, conductor: u64, gens: &[usize], mats: &[CMat]) -> Result<Self> {
        if gens.len() != mats.len() {
            return Err(Error::Invalid("one matrix per generator required".into()));
        }
        let dim = mats.first().map_or(1, |m| m.len());
        for (k, m) in mats.iter().enumerate() {
            if m.len() != dim || m.iter().any(|r| r.len() != dim) {
                return Err(Error::Invalid(format!("matrix {k} is not {dim}x{dim}")));
            }
            if m.iter().flatten().any(|x| conductor % x.simplify().conductor() != 0) {
                return Err(Error::Invalid(format!("matrix {k} leaves Q(zeta_{conductor})")));
            }
            if m.iter().flatten().any(|x| !x.is_integral()) {
                return Err(Error::Unsupported(format!("matrix {k} is not integral")));
            }
        }
        let norm = |m: &CMat| -> CMat {
            m.iter().map(|r| r.iter().map(|x| x.simplify().embed(conductor)).collect()).collect()
        };
        let mats: Vec<CMat> = mats.iter().map(norm).collect();
        let tree = g.word_tree(gens)?;
        let mut out: Vec<Option<CMat>> = vec![None; g.order()];
        out[0] = Some(cmat_identity(conductor, dim));
        for x in FiniteGroup::tree_order(&tree) {
            if let Some((i, h)) = tree[x] {
                let prev = out[h].clone().expect("tree order");
                out[x] = Some(cmat_mul(&mats[i], &prev));
            }
        }
        let rep = MatrixRep {
            conductor,
            dim,
            mats: out.into_iter().map(|m| m.expect("spanning tree covers the group")).collect(),
        };
        if !rep.is_homomorphism(g) {
            return Err(Error::Invalid("generator matrices do not satisfy the group relations".into()));
        }
        Ok(rep)
    }

    pub fn from_file(g: &FiniteGroup, f: &RealizationFile) -> Result<Self> {
        Self::from_generators(g, f.conductor, &f.generators, &f.matrices)
    }

    pub fn matrix(&self, g: usize) -> &CMat {
        &self.mats[g]
    }

    pub fn trace(&self, g: usize) -> CyclotomicElement {
        (0..self.dim).fold(CyclotomicElement::zero(self.conductor), |acc, i| acc + &self.mats[g][i][i])
    }

    pub fn is_homomorphism(&self, g: &FiniteGroup) -> bool {
        (0..g.order()).all(|a| (0..g.order()).all(|b| cmat_mul(&self.mats[a], &self.mats[b]) == self.mats[g.mul(a, b)]))
    }

    pub fn affords(&self, chi: &Character) -> bool {
        (0..chi.group().order()).all(|x| self.trace(x) == *chi.value(x))
    }

    /// rho(sum_g c_g g) = sum_g c_g rho(g).
    pub fn apply(&self, coeffs: &[CyclotomicElement]) -> CMat {
        let mut acc = vec![vec![CyclotomicElement::zero(self.conductor); self.dim]; self.dim];
        for (g, c) in coeffs.iter().enumerate() {
            if !c.is_zero() {
                acc = cmat_add(&acc, &cmat_scale(&self.mats[g], c));
            }
        }
        acc
    }
}

/// A realization of an irreducible character: the monomial one when it
/// exists, otherwise an error asking for a supplied file.
pub fn realize(chi: &Character) -> Result<MatrixRep> {
    monomial_realization(chi)
        .map(|r| MatrixRep::from_monomial(&r))
        .ok_or_else(|| {
            Error::NoRealization(format!(
                "character of degree {} of {} is not induced from a linear character; supply a realization file",
                chi.degree(),
                chi.group().name()
            ))
        })
}
